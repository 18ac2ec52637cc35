//! The affine evolution dψ/dt = Mψ + C of the 15 operator expectation values.
//!
//! Nine equations are tabulated by hand in density-matrix form. The six
//! remaining ones follow by complex conjugation, since ⟨A_ji⟩ = ⟨A_ij⟩*.
//! ρ₂₂ is eliminated through Tr ρ = 1, which is where C comes from.

use std::io::{self, Write};

use nalgebra::{SMatrix, SVector};

use crate::model::{Expansion, OperatorIndex, SystemParams, C64, DIM};
use crate::steadystate::StateVector;

pub type Matrix15 = SMatrix<C64, DIM, DIM>;
pub type Vector15 = SVector<C64, DIM>;

/// One line of the equations of motion: d⟨lhs⟩/dt = Σ coeff·⟨op⟩.
/// Operators may include A₂₂; it is expanded when the matrix is assembled.
struct Equation {
    lhs: OperatorIndex,
    terms: Vec<(OperatorIndex, C64)>,
}

impl Equation {
    fn new(lhs: OperatorIndex) -> Self {
        Self { lhs, terms: Vec::new() }
    }

    fn term(mut self, op: OperatorIndex, coeff: C64) -> Self {
        self.terms.push((op, coeff));
        self
    }

    fn conjugate(&self) -> Self {
        Self {
            lhs: self.lhs.adjoint(),
            terms: self.terms.iter().map(|&(op, c)| (op.adjoint(), c.conj())).collect(),
        }
    }
}

/// Equations for ρ₁₁, ρ₃₃, ρ₄₄, ρ₁₂, ρ₁₃, ρ₂₃, ρ₁₄, ρ₂₄ and ρ₃₄.
fn explicit_equations(p: &SystemParams) -> Vec<Equation> {
    let rho = OperatorIndex::rho;
    let re = |x: f64| C64::new(x, 0.0);
    let i = C64::i();
    let (g1, g2, gs, g12) = (p.gamma1(), p.gamma2(), p.gamma_sigma(), p.gamma12);
    let (delta, a, b) = (p.delta, p.omega_a, p.omega_b);

    vec![
        Equation::new(rho(1, 1))
            .term(rho(1, 1), re(-(g1 + gs)))
            .term(rho(1, 3), i * a)
            .term(rho(3, 1), -i * a)
            .term(rho(1, 4), -i * b)
            .term(rho(4, 1), i * b),
        Equation::new(rho(3, 3))
            .term(rho(1, 1), re(g1))
            .term(rho(2, 2), re(gs))
            .term(rho(1, 3), -i * a)
            .term(rho(3, 1), i * a),
        Equation::new(rho(4, 4))
            .term(rho(1, 1), re(gs))
            .term(rho(2, 2), re(g2))
            .term(rho(2, 4), i * a)
            .term(rho(4, 2), -i * a)
            .term(rho(1, 4), i * b)
            .term(rho(4, 1), -i * b),
        Equation::new(rho(1, 2))
            .term(rho(1, 2), re(-(g1 + g2) / 2.0 - gs))
            .term(rho(3, 2), -i * a)
            .term(rho(1, 4), -i * a)
            .term(rho(4, 2), i * b),
        Equation::new(rho(1, 3))
            .term(rho(1, 3), C64::new(-(g1 + gs) / 2.0, delta))
            .term(rho(1, 1), i * a)
            .term(rho(3, 3), -i * a)
            .term(rho(4, 3), i * b),
        Equation::new(rho(2, 3))
            .term(rho(2, 3), C64::new(-(g2 + gs) / 2.0, delta))
            .term(rho(2, 1), i * a)
            .term(rho(4, 3), i * a),
        Equation::new(rho(1, 4))
            .term(rho(1, 4), C64::new(-(g1 + gs) / 2.0, delta))
            .term(rho(1, 2), -i * a)
            .term(rho(3, 4), -i * a)
            .term(rho(1, 1), -i * b)
            .term(rho(4, 4), i * b),
        Equation::new(rho(2, 4))
            .term(rho(2, 4), C64::new(-(g2 + gs) / 2.0, delta))
            .term(rho(2, 2), -i * a)
            .term(rho(4, 4), i * a)
            .term(rho(2, 1), -i * b),
        // Cross damping enters the ground-state coherence only.
        Equation::new(rho(3, 4))
            .term(rho(1, 2), re(g12))
            .term(rho(3, 2), -i * a)
            .term(rho(1, 4), -i * a)
            .term(rho(3, 1), -i * b),
    ]
}

/// The evolution matrix M and inhomogeneity C for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    params: SystemParams,
    m: Matrix15,
    c: Vector15,
}

impl Liouvillian {
    pub fn build(params: &SystemParams) -> Self {
        let mut m = Matrix15::zeros();
        let mut c = Vector15::zeros();
        for explicit in explicit_equations(params) {
            let conjugate = (!explicit.lhs.is_population()).then(|| explicit.conjugate());
            for eq in std::iter::once(explicit).chain(conjugate) {
                let row = eq.lhs.position().expect("equation for an eliminated operator");
                for (op, coeff) in eq.terms {
                    let expansion = Expansion::of(op);
                    c[row] += coeff * expansion.identity;
                    for (col, k) in expansion.terms() {
                        m[(row, col.position().unwrap())] += coeff * k;
                    }
                }
            }
        }
        Self {
            params: *params,
            m,
            c,
        }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn matrix(&self) -> &Matrix15 {
        &self.m
    }

    pub fn inhomogeneity(&self) -> &Vector15 {
        &self.c
    }

    /// Coefficient of ⟨col⟩ in the equation for d⟨row⟩/dt.
    pub fn entry(&self, row: OperatorIndex, col: OperatorIndex) -> C64 {
        self.m[(row.position().unwrap(), col.position().unwrap())]
    }

    pub fn derivative(&self, psi: &Vector15) -> Vector15 {
        self.m * psi + self.c
    }

    /// Mψ + C.
    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector::from_vector(self.derivative(psi.as_vector()))
    }

    /// dρ₂₂/dt written with ρ₂₂ as an independent variable, as it comes out
    /// of the master equation before the trace condition is used.
    pub fn rho22_rate(&self, psi: &StateVector, rho22: C64) -> C64 {
        let p = &self.params;
        let i = C64::i();
        -(p.gamma2() + p.gamma_sigma()) * rho22
            - i * p.omega_a * (psi.rho(2, 4) - psi.rho(4, 2))
    }

    /// Eigenvalues of M from a complex Schur decomposition.
    pub fn eigenvalues(&self) -> Vec<C64> {
        nalgebra::Schur::new(self.m)
            .eigenvalues()
            .expect("complex Schur form is triangular")
            .iter()
            .copied()
            .collect()
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        self.m
            .row_iter()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Row-major dump of [M | C] with entries formatted as `re+imj`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<String> = OperatorIndex::BASIS.iter().map(|op| op.to_string()).collect();
        writeln!(w, "# dpsi/dt = M psi + C; rows and columns in basis order")?;
        writeln!(w, "row,{},C", header.join(","))?;
        for (r, op) in OperatorIndex::BASIS.iter().enumerate() {
            let cells: Vec<String> = (0..DIM).map(|k| format_complex(self.m[(r, k)])).collect();
            writeln!(w, "{op},{},{}", cells.join(","), format_complex(self.c[r]))?;
        }
        Ok(())
    }
}

pub(crate) fn format_complex(z: C64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    if im < 0.0 {
        format!("{re}-{}j", -im)
    } else {
        format!("{re}+{im}j")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use OperatorIndex as Op;

    fn fig4() -> SystemParams {
        SystemParams::new(0.0, 15.0, 11.0)
    }

    #[test]
    fn inhomogeneity_pattern() {
        let p = SystemParams::new(1.3, 2.0, 0.7);
        let l = Liouvillian::build(&p);
        let c = l.inhomogeneity();
        for k in 0..DIM {
            let expected = match k + 1 {
                2 => C64::new(p.gamma_sigma(), 0.0),
                3 => C64::new(p.gamma2(), 0.0),
                12 => C64::new(0.0, p.omega_a),
                13 => C64::new(0.0, -p.omega_a),
                _ => C64::new(0.0, 0.0),
            };
            assert_eq!(c[k], expected, "C{}", k + 1);
        }
    }

    #[test]
    fn excited_population_row_without_sigma_drive() {
        let p = SystemParams::new(0.7, 1.5, 0.0);
        let l = Liouvillian::build(&p);
        for col in Op::BASIS {
            let expected = match col {
                Op::A11 => C64::new(-(p.gamma1() + p.gamma_sigma()), 0.0),
                Op::A13 => C64::new(0.0, -1.5),
                Op::A31 => C64::new(0.0, 1.5),
                _ => C64::new(0.0, 0.0),
            };
            // ρ13 = ⟨A31⟩ carries +iΩa and ρ31 = ⟨A13⟩ carries −iΩa.
            assert_eq!(l.entry(Op::A11, col), expected, "column {col}");
        }
    }

    #[test]
    fn undriven_population_block_is_a_decay_chain() {
        // Undo the trace elimination: C·1 = C·(ρ11 + ρ22 + ρ33 + ρ44), so the
        // full population rate matrix is K[r][c] = M[r][c] + C[r] and
        // K[r][22] = C[r]. The ρ22 row comes from the explicit equation.
        let l = Liouvillian::build(&SystemParams::new(0.0, 0.0, 0.0).with_gamma12(0.0));
        let rows = [Op::A11, Op::A33, Op::A44];
        let cols = [Some(Op::A11), None, Some(Op::A33), Some(Op::A44)];
        let mut k = [[0.0f64; 4]; 4];
        for (ri, &r) in rows.iter().enumerate() {
            let row = [0, 2, 3][ri];
            let cr = l.c[r.position().unwrap()];
            for (ci, col) in cols.iter().enumerate() {
                let v = col.map_or(cr, |c| l.entry(r, c) + cr);
                assert_eq!(v.im, 0.0);
                k[row][ci] = v.re;
            }
        }
        let zero = StateVector::from_vector(Vector15::zeros());
        k[1][1] = l.rho22_rate(&zero, C64::new(1.0, 0.0)).re;
        for (r, row) in k.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if r == c {
                    assert!(v <= 0.0);
                } else {
                    assert!(v >= 0.0, "K[{r}][{c}] = {v}");
                }
            }
        }
        let mut column_sums = [0.0f64; 4];
        for row in &k {
            for (s, v) in column_sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        assert!(column_sums.iter().all(|s| s.abs() < 1e-15), "{column_sums:?}");
        assert_eq!(k[2][0], 1.0 / 3.0);
        assert_eq!(k[3][0], 2.0 / 3.0);
    }

    #[test]
    fn cross_damping_touches_exactly_two_entries() {
        let with = Liouvillian::build(&fig4());
        let without = Liouvillian::build(&fig4().with_gamma12(0.0));
        let diff = with.matrix() - without.matrix();
        let changed: Vec<(usize, usize)> = (0..DIM)
            .flat_map(|r| (0..DIM).map(move |c| (r, c)))
            .filter(|&(r, c)| diff[(r, c)].norm() != 0.0)
            .collect();
        let a34 = Op::A34.position().unwrap();
        let a43 = Op::A43.position().unwrap();
        let a12 = Op::A12.position().unwrap();
        let a21 = Op::A21.position().unwrap();
        assert_eq!(changed, vec![(a34, a12), (a43, a21)]);
        assert_eq!(with.inhomogeneity(), without.inhomogeneity());
    }

    #[test]
    fn conjugate_rows_mirror_explicit_rows() {
        let l = Liouvillian::build(&SystemParams::new(1.1, 2.3, 0.9).with_gamma12(-0.2));
        for row in Op::BASIS {
            for col in Op::BASIS {
                let mirrored = l.entry(row.adjoint(), col.adjoint()).conj();
                assert_eq!(l.entry(row, col), mirrored, "{row},{col}");
            }
            let r = row.position().unwrap();
            let rc = row.adjoint().position().unwrap();
            assert_eq!(l.c[r], l.c[rc].conj());
        }
        // the A43 row is the conjugate of the ρ34 equation: γ12 couples ⟨A12⟩ there
        assert_eq!(l.entry(Op::A34, Op::A12), C64::new(-0.2, 0.0));
        assert_eq!(l.entry(Op::A43, Op::A21), C64::new(-0.2, 0.0));
    }

    #[test]
    fn zero_state_maps_to_inhomogeneity() {
        let l = Liouvillian::build(&fig4());
        let d = l.apply(&StateVector::from_vector(Vector15::zeros()));
        assert_eq!(d.as_vector(), l.inhomogeneity());
    }

    #[test]
    fn csv_dump_shape() {
        let l = Liouvillian::build(&fig4());
        let mut buf = Vec::new();
        l.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert!(lines[2].starts_with("A11,-1+0j,"));
        assert!(lines[13].ends_with(",0+15j"));
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), DIM + 2);
        }
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(C64::new(-0.5, 0.0)), "-0.5+0j");
        assert_eq!(format_complex(C64::new(0.0, -15.0)), "0-15j");
        assert_eq!(format_complex(C64::new(-0.0, -0.0)), "0+0j");
    }
}
