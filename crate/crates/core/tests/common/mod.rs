//! Reference model built directly from the Lindblad master equation on the
//! full 16-dimensional space of density matrices, with no trace elimination.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64 as C;

use vicfluor::SystemParams;

/// |m⟩⟨n| with 1-based labels.
pub fn ket_bra(m: usize, n: usize) -> Matrix4<C> {
    let mut a = Matrix4::zeros();
    a[(m - 1, n - 1)] = C::new(1.0, 0.0);
    a
}

/// Levels 1, 2 excited; 3, 4 ground. π: 1→3, 2→4. σ: 1→4, 2→3.
pub fn hamiltonian(p: &SystemParams) -> Matrix4<C> {
    let r = |x: f64| C::new(x, 0.0);
    let mut h = Matrix4::zeros();
    h[(0, 0)] = r(-p.delta);
    h[(1, 1)] = r(-p.delta);
    for (i, j, v) in [(0, 2, p.omega_a), (1, 3, -p.omega_a), (0, 3, -p.omega_b)] {
        h[(i, j)] = r(v);
        h[(j, i)] = r(v);
    }
    h
}

/// dρ/dt for a single density matrix.
pub fn lindblad_rhs(p: &SystemParams, rho: &Matrix4<C>) -> Matrix4<C> {
    let h = hamiltonian(p);
    let i = C::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    let g = p.gamma;
    let (g1, g2, gs, g12) = (g / 3.0, g / 3.0, 2.0 * g / 3.0, p.gamma12);
    let jumps = [
        (ket_bra(3, 1), g1),
        (ket_bra(4, 2), g2),
        (ket_bra(4, 1), gs),
        (ket_bra(3, 2), gs),
    ];
    for (l, rate) in &jumps {
        let ld = l.adjoint();
        let ldl = ld * l;
        out += (l * rho * ld - (ldl * rho + rho * ldl) * C::new(0.5, 0.0)) * C::new(*rate, 0.0);
    }
    // Interference between the two π channels.
    let (a, b) = (ket_bra(3, 1), ket_bra(4, 2));
    let (ad, bd) = (a.adjoint(), b.adjoint());
    let cross = a * rho * bd + b * rho * ad
        - (bd * a * rho + rho * bd * a + ad * b * rho + rho * ad * b) * C::new(0.5, 0.0);
    out += cross * C::new(g12, 0.0);
    out
}

fn vec_index(r: usize, c: usize) -> usize {
    4 * c + r
}

/// Column-stacked superoperator L with vec(dρ/dt) = L vec(ρ).
pub fn superoperator(p: &SystemParams) -> DMatrix<C> {
    let mut l = DMatrix::zeros(16, 16);
    for c in 0..4 {
        for r in 0..4 {
            let out = lindblad_rhs(p, &ket_bra(r + 1, c + 1));
            for cc in 0..4 {
                for rr in 0..4 {
                    l[(vec_index(rr, cc), vec_index(r, c))] = out[(rr, cc)];
                }
            }
        }
    }
    l
}

/// Operator order of the reduced state vector, as (m, n) for A_mn = |m⟩⟨n|.
pub const ORDER: [(usize, usize); 15] = [
    (1, 1),
    (3, 3),
    (4, 4),
    (1, 2),
    (2, 1),
    (1, 3),
    (3, 1),
    (2, 3),
    (3, 2),
    (1, 4),
    (4, 1),
    (2, 4),
    (4, 2),
    (3, 4),
    (4, 3),
];

/// ⟨A_mn⟩ = Tr(ρ A_mn) = ρ_nm.
fn reduced(rho: &Matrix4<C>) -> DVector<C> {
    DVector::from_iterator(15, ORDER.iter().map(|&(m, n)| rho[(n - 1, m - 1)]))
}

/// The affine system dψ/dt = Mψ + C obtained by substituting ρ₂₂ = 1 − ρ₁₁ − ρ₃₃ − ρ₄₄.
pub fn reduced_system(p: &SystemParams) -> (DMatrix<C>, DVector<C>) {
    let one = C::new(1.0, 0.0);
    let c = reduced(&lindblad_rhs(p, &ket_bra(2, 2)));
    let mut m = DMatrix::zeros(15, 15);
    for (k, &(a, b)) in ORDER.iter().enumerate() {
        // Unit ψ_k with all other ψ zero; populations carry ρ₂₂ = −1.
        let mut rho = ket_bra(b, a) * one;
        if a == b {
            rho -= ket_bra(2, 2);
        }
        let col = reduced(&lindblad_rhs(p, &rho));
        m.set_column(k, &col);
    }
    (m, c)
}

/// Stationary ρ from the null vector of L, normalized to unit trace.
pub fn steady_density(p: &SystemParams) -> Matrix4<C> {
    let l = superoperator(p);
    let svd = l.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let v = v_t.row(k).adjoint();
    let mut rho = Matrix4::from_fn(|r, c| v[vec_index(r, c)]);
    let tr = rho.trace();
    rho /= tr;
    rho
}

/// Weight, detected operator A_row, source operator A_src.
pub type Term = (C, (usize, usize), (usize, usize));

/// (1/π) Re Σ c Tr[A_row (iω − L)⁻¹ (A_src ρ − ⟨A_src⟩ρ)], with ω ≠ 0.
pub fn spectrum(p: &SystemParams, terms: &[Term], omega: f64) -> f64 {
    let rho = steady_density(p);
    let mut a = -superoperator(p);
    for k in 0..16 {
        a[(k, k)] += C::new(0.0, omega);
    }
    let lu = a.lu();
    let mut acc = C::new(0.0, 0.0);
    for &(coeff, (rm, rn), (sm, sn)) in terms {
        let src = ket_bra(sm, sn);
        let x = src * rho - rho * (rho * src).trace();
        let xv = DVector::from_iterator(16, (0..16).map(|k| x[(k % 4, k / 4)]));
        let y = lu.solve(&xv).expect("nonsingular");
        let ym = Matrix4::from_fn(|r, c| y[vec_index(r, c)]);
        acc += coeff * (ket_bra(rm, rn) * ym).trace();
    }
    acc.re / std::f64::consts::PI
}

pub fn pi_terms(p: &SystemParams) -> Vec<Term> {
    let r = |x: f64| C::new(x, 0.0);
    let g = p.gamma / 3.0;
    vec![
        (r(g), (1, 3), (3, 1)),
        (r(g), (2, 4), (4, 2)),
        (r(p.gamma12), (1, 3), (4, 2)),
        (r(p.gamma12), (2, 4), (3, 1)),
    ]
}

pub fn sigma_terms(p: &SystemParams) -> Vec<Term> {
    let gs = 2.0 * p.gamma / 3.0;
    let e = C::from_polar(gs, 2.0 * p.phi);
    vec![
        (C::new(gs, 0.0), (1, 4), (4, 1)),
        (C::new(gs, 0.0), (2, 3), (3, 2)),
        (e.conj(), (1, 4), (3, 2)),
        (e, (2, 3), (4, 1)),
    ]
}
