//! Stationary state of the driven atom: direct solve, closed form and a
//! fixed-step RK4 propagator used as an independent check.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::liouvillian::{Liouvillian, Vector15};
use crate::model::{Expansion, OperatorIndex, SystemParams, C64, DIM};

/// Expectation values ⟨Aᵢ⟩ in basis order. ⟨A_ij⟩ = ρ_ji.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector(Vector15);

impl StateVector {
    pub fn from_vector(v: Vector15) -> Self {
        Self(v)
    }

    pub fn as_vector(&self) -> &Vector15 {
        &self.0
    }

    pub fn into_vector(self) -> Vector15 {
        self.0
    }

    /// ⟨op⟩, including the eliminated ⟨A₂₂⟩.
    pub fn get(&self, op: OperatorIndex) -> C64 {
        self.expect(&Expansion::of(op))
    }

    /// Density-matrix element ρ_xy.
    pub fn rho(&self, x: u8, y: u8) -> C64 {
        self.get(OperatorIndex::rho(x, y))
    }

    pub fn rho22(&self) -> C64 {
        self.get(OperatorIndex::A22)
    }

    pub fn expect(&self, e: &Expansion) -> C64 {
        let mut acc = C64::new(e.identity, 0.0);
        for (op, c) in e.terms() {
            acc += self.0[op.position().unwrap()] * c;
        }
        acc
    }

    /// Real parts of ρ₁₁, ρ₂₂, ρ₃₃, ρ₄₄.
    pub fn populations(&self) -> [f64; 4] {
        [1, 2, 3, 4].map(|k| self.rho(k, k).re)
    }

    pub fn density_matrix(&self) -> Matrix4<C64> {
        Matrix4::from_fn(|r, c| self.rho(r as u8 + 1, c as u8 + 1))
    }

    /// Reads the 15 independent elements; ρ₂₂ is implied by the others.
    pub fn from_density_matrix(rho: &Matrix4<C64>) -> Self {
        Self(Vector15::from_fn(|k, _| {
            let op = OperatorIndex::from_position(k);
            rho[(op.n() as usize - 1, op.m() as usize - 1)]
        }))
    }

    /// All population in one bare level.
    pub fn level(k: u8) -> Self {
        assert!((1..=4).contains(&k), "level index out of range");
        let mut rho = Matrix4::zeros();
        rho[(k as usize - 1, k as usize - 1)] = C64::new(1.0, 0.0);
        Self::from_density_matrix(&rho)
    }

    /// Largest violation of ⟨A_mn⟩ = ⟨A_nm⟩* and of real populations.
    pub fn hermiticity_defect(&self) -> f64 {
        let rho = self.density_matrix();
        (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part of ρ.
    pub fn min_eigenvalue(&self) -> f64 {
        let rho = self.density_matrix();
        let herm = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn rank_tolerance(l: &Liouvillian) -> f64 {
    1e-12 * l.norm_inf().max(l.params().gamma)
}

/// Number of singular values of M below a relative threshold of 1e-12.
pub fn null_space_dimension(l: &Liouvillian) -> usize {
    let tol = rank_tolerance(l);
    l.matrix()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s <= tol)
        .count()
}

/// ψ(∞) = −M⁻¹C by a dense LU solve.
pub fn solve_steady(l: &Liouvillian) -> Result<StateVector> {
    let lu = l.matrix().full_piv_lu();
    let u = lu.u();
    let smallest_pivot = (0..DIM).map(|k| u[(k, k)].norm()).fold(f64::INFINITY, f64::min);
    if smallest_pivot <= rank_tolerance(l) {
        return Err(Error::SingularSystem {
            nullity: null_space_dimension(l).max(1),
        });
    }
    let psi = lu
        .solve(&(-l.inhomogeneity()))
        .ok_or(Error::SingularSystem {
            nullity: null_space_dimension(l).max(1),
        })?;
    Ok(StateVector(psi))
}

/// Closed-form stationary state. Independent of γ₁₂ and φ.
pub fn analytic_steady(p: &SystemParams) -> Result<StateVector> {
    let (g, d, a, b) = (p.gamma, p.delta, p.omega_a, p.omega_b);
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegenerateDrive);
    }
    let lorentz = g * g + 4.0 * d * d;
    let den = 2.0 * a * a * (lorentz + 8.0 * a * a) + b * b * lorentz;
    let detuned = C64::new(d, -g / 2.0);

    let excited = 4.0 * a.powi(4) / den;
    let rho33 = (4.0 * a.powi(4) + (a * a + b * b) * lorentz) / den;
    let rho44 = a * a * (lorentz + 4.0 * a * a) / den;
    let rho13 = detuned * (4.0 * a.powi(3) / den);
    let rho23 = detuned * (-4.0 * a * a * b / den);
    let rho34 = C64::new(a * b * lorentz / den, 0.0);

    let mut rho = Matrix4::<C64>::zeros();
    rho[(0, 0)] = excited.into();
    rho[(1, 1)] = excited.into();
    rho[(2, 2)] = rho33.into();
    rho[(3, 3)] = rho44.into();
    let mut set = |x: usize, y: usize, v: C64| {
        rho[(x - 1, y - 1)] = v;
        rho[(y - 1, x - 1)] = v.conj();
    };
    set(1, 3, rho13);
    set(2, 4, -rho13);
    set(2, 3, rho23);
    set(3, 4, rho34);
    Ok(StateVector::from_density_matrix(&rho))
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Largest |ρ₁₁ + ρ₂₂ + ρ₃₃ + ρ₄₄ − 1| seen at any step, with ρ₂₂
    /// integrated from its own equation rather than the trace condition.
    pub max_trace_deviation: f64,
    pub steps: usize,
    pub dt: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        &self.samples.last().expect("trajectory has at least the initial sample").state
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub t_final: f64,
    pub dt: f64,
    /// Keep every n-th step; the final step is always kept.
    pub record_every: usize,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self {
            t_final: 50.0,
            dt: 1e-3,
            record_every: 100,
        }
    }
}

/// Integrate dψ/dt = Mψ + C from `psi0` up to `t_final` with RK4.
pub fn propagate(l: &Liouvillian, psi0: &StateVector, t_final: f64, dt: f64) -> Result<Trajectory> {
    propagate_with(
        l,
        psi0,
        &PropagationOptions {
            t_final,
            dt,
            ..PropagationOptions::default()
        },
    )
}

pub fn propagate_with(l: &Liouvillian, psi0: &StateVector, opts: &PropagationOptions) -> Result<Trajectory> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::InvalidStep(format!("dt must be positive, got {}", opts.dt)));
    }
    if !(opts.t_final >= 0.0 && opts.t_final.is_finite()) {
        return Err(Error::InvalidStep(format!("t_final must be nonnegative, got {}", opts.t_final)));
    }
    let ratio = opts.dt * l.norm_inf();
    if ratio > 1.0 {
        return Err(Error::StepTooLarge { ratio });
    }
    let steps = (opts.t_final / opts.dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { opts.t_final / steps as f64 };
    let record_every = opts.record_every.max(1);

    // State augmented with an explicitly integrated ρ22.
    let rhs = |psi: &Vector15, r22: C64| -> (Vector15, C64) {
        let s = StateVector(*psi);
        (l.derivative(psi), l.rho22_rate(&s, r22))
    };

    let mut psi = *psi0.as_vector();
    let mut r22 = psi0.rho22();
    let trace = |psi: &Vector15, r22: C64| (psi[0] + psi[1] + psi[2] + r22 - 1.0).norm();
    let mut max_trace_deviation = trace(&psi, r22);
    let mut samples = vec![Sample { t: 0.0, state: *psi0 }];

    for step in 1..=steps {
        let (k1, q1) = rhs(&psi, r22);
        let (k2, q2) = rhs(&(psi + k1 * C64::from(h / 2.0)), r22 + q1 * (h / 2.0));
        let (k3, q3) = rhs(&(psi + k2 * C64::from(h / 2.0)), r22 + q2 * (h / 2.0));
        let (k4, q4) = rhs(&(psi + k3 * C64::from(h)), r22 + q3 * h);
        psi += (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(h / 6.0);
        r22 += (q1 + q2 * 2.0 + q3 * 2.0 + q4) * (h / 6.0);
        max_trace_deviation = max_trace_deviation.max(trace(&psi, r22));
        if step % record_every == 0 || step == steps {
            samples.push(Sample {
                t: step as f64 * h,
                state: StateVector(psi),
            });
        }
    }

    Ok(Trajectory {
        samples,
        max_trace_deviation,
        steps,
        dt: h,
    })
}

/// A parameter that a steady-state sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Delta,
    OmegaA,
    OmegaB,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::Delta => "delta",
            Self::OmegaA => "omega_a",
            Self::OmegaB => "omega_b",
        }
    }

    pub fn apply(self, p: &SystemParams, value: f64) -> SystemParams {
        match self {
            Self::Delta => p.with_delta(value),
            Self::OmegaA => p.with_omega_a(value),
            Self::OmegaB => p.with_omega_b(value),
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "delta" => Ok(Self::Delta),
            "omega_a" => Ok(Self::OmegaA),
            "omega_b" => Ok(Self::OmegaB),
            other => Err(format!("cannot sweep `{other}` (expected delta, omega-a or omega-b)")),
        }
    }
}

/// Stationary states along a sweep, solved in parallel.
pub fn steady_sweep(base: &SystemParams, param: SweepParam, values: &[f64]) -> Result<Vec<StateVector>> {
    use rayon::prelude::*;
    values
        .par_iter()
        .map(|&v| {
            let p = param.apply(base, v);
            p.validate()?;
            solve_steady(&Liouvillian::build(&p))
        })
        .collect()
}

const STEADY_COLUMNS: &str =
    "rho11,rho22,rho33,rho44,re_rho13,im_rho13,re_rho24,im_rho24,re_rho23,im_rho23,re_rho34,im_rho34,re_rho14,im_rho14";

/// CSV with one row per sweep value: populations and the coherences that
/// can be nonzero in the steady state (plus ρ₁₄, which vanishes).
pub fn write_steady_csv<W: std::io::Write>(
    mut w: W,
    base: &SystemParams,
    param: SweepParam,
    values: &[f64],
    states: &[StateVector],
) -> std::io::Result<()> {
    writeln!(
        w,
        "# sweep={} gamma={} gamma12={} delta={} omega_a={} omega_b={} phi={}",
        param.name(),
        base.gamma,
        base.gamma12,
        base.delta,
        base.omega_a,
        base.omega_b,
        base.phi
    )?;
    writeln!(w, "{},{STEADY_COLUMNS}", param.name())?;
    for (v, s) in values.iter().zip(states) {
        write!(w, "{v:.11e}")?;
        for x in s.populations() {
            write!(w, ",{x:.11e}")?;
        }
        for (x, y) in [(1, 3), (2, 4), (2, 3), (3, 4), (1, 4)] {
            let z = s.rho(x, y);
            write!(w, ",{:.11e},{:.11e}", z.re, z.im)?;
        }
        writeln!(w)?;
    }
    Ok(())
}
