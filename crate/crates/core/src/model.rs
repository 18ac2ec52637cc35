//! Physical parameters, the bare-state operator algebra and the
//! interaction-picture Hamiltonian of the four-level atom.
//!
//! Levels |1⟩, |2⟩ are the excited doublet and |3⟩, |4⟩ the ground doublet.
//! The π transitions are |1⟩↔|3⟩ and |2⟩↔|4⟩; the σ transitions are
//! |1⟩↔|4⟩ and |2⟩↔|3⟩. All rates and frequencies are in units of `gamma`,
//! with ħ = 1.

use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Number of independent operator expectation values once ⟨A₂₂⟩ is removed
/// with the trace condition.
pub const DIM: usize = 15;

/// Inputs of the driven-atom model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Total decay rate of each excited state.
    pub gamma: f64,
    /// Cross-damping rate between the two π decay channels.
    pub gamma12: f64,
    /// Laser detuning ω_l − ω_o.
    pub delta: f64,
    /// Rabi frequency of the linearly polarized (π) field.
    pub omega_a: f64,
    /// Rabi frequency of the σ⁻ field.
    pub omega_b: f64,
    /// Relative phase of the two fields, radians.
    pub phi: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            gamma12: -1.0 / 3.0,
            delta: 0.0,
            omega_a: 1.0,
            omega_b: 0.0,
            phi: 0.0,
        }
    }
}

impl SystemParams {
    /// Parameters with γ = 1 and full cross damping γ₁₂ = −γ/3.
    pub fn new(delta: f64, omega_a: f64, omega_b: f64) -> Self {
        Self {
            delta,
            omega_a,
            omega_b,
            ..Self::default()
        }
    }

    pub fn with_gamma12(mut self, gamma12: f64) -> Self {
        self.gamma12 = gamma12;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_omega_a(mut self, omega_a: f64) -> Self {
        self.omega_a = omega_a;
        self
    }

    pub fn with_omega_b(mut self, omega_b: f64) -> Self {
        self.omega_b = omega_b;
        self
    }

    /// Decay rate of |1⟩ → |3⟩.
    pub fn gamma1(&self) -> f64 {
        self.gamma / 3.0
    }

    /// Decay rate of |2⟩ → |4⟩.
    pub fn gamma2(&self) -> f64 {
        self.gamma / 3.0
    }

    /// Decay rate of each σ transition.
    pub fn gamma_sigma(&self) -> f64 {
        2.0 * self.gamma / 3.0
    }

    /// Largest physically allowed |γ₁₂|, √(γ₁γ₂) = γ/3.
    pub fn max_cross_damping(&self) -> f64 {
        (self.gamma1() * self.gamma2()).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma", self.gamma),
            ("gamma12", self.gamma12),
            ("delta", self.delta),
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("phi", self.phi),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("must be positive, got {}", self.gamma),
            });
        }
        if self.omega_a < 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega_a",
                reason: "must be nonnegative; phases are carried by phi".into(),
            });
        }
        if self.omega_b < 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega_b",
                reason: "must be nonnegative; phases are carried by phi".into(),
            });
        }
        let bound = self.max_cross_damping();
        let slack = 1e-12 * self.gamma;
        if self.gamma12 > slack || self.gamma12 < -bound - slack {
            return Err(Error::InvalidParameter {
                name: "gamma12",
                reason: format!("must lie in [-gamma/3, 0] = [{:.6}, 0], got {}", -bound, self.gamma12),
            });
        }
        Ok(())
    }
}

/// A bare-state transition operator A_mn = |m⟩⟨n| with m, n ∈ {1, 2, 3, 4}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorIndex {
    m: u8,
    n: u8,
}

impl OperatorIndex {
    pub const A11: Self = Self { m: 1, n: 1 };
    pub const A22: Self = Self { m: 2, n: 2 };
    pub const A33: Self = Self { m: 3, n: 3 };
    pub const A44: Self = Self { m: 4, n: 4 };
    pub const A12: Self = Self { m: 1, n: 2 };
    pub const A21: Self = Self { m: 2, n: 1 };
    pub const A13: Self = Self { m: 1, n: 3 };
    pub const A31: Self = Self { m: 3, n: 1 };
    pub const A23: Self = Self { m: 2, n: 3 };
    pub const A32: Self = Self { m: 3, n: 2 };
    pub const A14: Self = Self { m: 1, n: 4 };
    pub const A41: Self = Self { m: 4, n: 1 };
    pub const A24: Self = Self { m: 2, n: 4 };
    pub const A42: Self = Self { m: 4, n: 2 };
    pub const A34: Self = Self { m: 3, n: 4 };
    pub const A43: Self = Self { m: 4, n: 3 };

    /// The state-vector basis, in storage order.
    pub const BASIS: [Self; DIM] = [
        Self::A11,
        Self::A33,
        Self::A44,
        Self::A12,
        Self::A21,
        Self::A13,
        Self::A31,
        Self::A23,
        Self::A32,
        Self::A14,
        Self::A41,
        Self::A24,
        Self::A42,
        Self::A34,
        Self::A43,
    ];

    pub fn new(m: u8, n: u8) -> Option<Self> {
        ((1..=4).contains(&m) && (1..=4).contains(&n)).then_some(Self { m, n })
    }

    /// The operator whose expectation value is the density-matrix element
    /// ρ_xy, i.e. A_yx.
    pub fn rho(x: u8, y: u8) -> Self {
        Self::new(y, x).expect("level index out of range")
    }

    pub fn m(self) -> u8 {
        self.m
    }

    pub fn n(self) -> u8 {
        self.n
    }

    /// Zero-based position in [`Self::BASIS`]; `None` for the eliminated A₂₂.
    pub fn position(self) -> Option<usize> {
        Self::BASIS.iter().position(|&op| op == self)
    }

    pub fn from_position(position: usize) -> Self {
        Self::BASIS[position]
    }

    pub fn adjoint(self) -> Self {
        Self {
            m: self.n,
            n: self.m,
        }
    }

    pub fn is_population(self) -> bool {
        self.m == self.n
    }

    /// Matrix of |m⟩⟨n| in the bare basis.
    pub fn matrix(self) -> Matrix4<C64> {
        let mut a = Matrix4::zeros();
        a[(self.m as usize - 1, self.n as usize - 1)] = C64::new(1.0, 0.0);
        a
    }
}

impl fmt::Display for OperatorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}{}", self.m, self.n)
    }
}

/// An operator written as c₀𝟙 + Σᵢ cᵢ Aᵢ over the 15-element basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub identity: f64,
    pub coeffs: [f64; DIM],
}

impl Expansion {
    pub fn zero() -> Self {
        Self {
            identity: 0.0,
            coeffs: [0.0; DIM],
        }
    }

    /// Expansion of a single operator. A₂₂ becomes 𝟙 − A₁₁ − A₃₃ − A₄₄.
    pub fn of(op: OperatorIndex) -> Self {
        let mut e = Self::zero();
        match op.position() {
            Some(k) => e.coeffs[k] = 1.0,
            None => {
                e.identity = 1.0;
                for pop in [OperatorIndex::A11, OperatorIndex::A33, OperatorIndex::A44] {
                    e.coeffs[pop.position().unwrap()] = -1.0;
                }
            }
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.identity == 0.0 && self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Nonzero basis terms as (operator, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (OperatorIndex, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| (OperatorIndex::from_position(k), c))
    }

    pub fn to_matrix(&self) -> Matrix4<C64> {
        let mut out = Matrix4::identity() * C64::new(self.identity, 0.0);
        for (op, c) in self.terms() {
            out += op.matrix() * C64::new(c, 0.0);
        }
        out
    }
}

/// Product A_ij · A_mn = δ_jm A_in, expanded over the reduced basis.
pub fn operator_product(a: OperatorIndex, b: OperatorIndex) -> Expansion {
    if a.n == b.m {
        Expansion::of(OperatorIndex { m: a.m, n: b.n })
    } else {
        Expansion::zero()
    }
}

/// Interaction-picture Hamiltonian in the basis |1⟩, |2⟩, |3⟩, |4⟩:
/// H = −Δ(A₁₁ + A₂₂) + Ω_a(A₁₃ − A₂₄) − Ω_b A₁₄ + h.c.
pub fn hamiltonian(params: &SystemParams) -> Matrix4<C64> {
    let mut h = Matrix4::<C64>::zeros();
    let mut couple = |i: usize, j: usize, v: f64| {
        h[(i - 1, j - 1)] = C64::new(v, 0.0);
        h[(j - 1, i - 1)] = C64::new(v, 0.0);
    };
    couple(1, 3, params.omega_a);
    couple(2, 4, -params.omega_a);
    couple(1, 4, -params.omega_b);
    h[(0, 0)] = C64::new(-params.delta, 0.0);
    h[(1, 1)] = C64::new(-params.delta, 0.0);
    h
}
