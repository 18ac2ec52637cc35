//! Dressed-state description of the resonantly driven atom in the secular
//! limit: eigenstates of H at Δ = 0, coherence decay rates, and the
//! Lorentzian line weights of both fluorescence channels.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::model::{hamiltonian, SystemParams, C64};
use crate::spectrum::{Channel, FrequencyGrid, SpectrumTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DressedLabel {
    Alpha,
    Beta,
    Kappa,
    Mu,
}

impl DressedLabel {
    pub const ALL: [Self; 4] = [Self::Alpha, Self::Beta, Self::Kappa, Self::Mu];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for DressedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::Kappa => "kappa",
            Self::Mu => "mu",
        })
    }
}

/// Secular decay rates of the dressed populations and coherences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRates {
    pub gamma0: f64,
    pub gamma: f64,
    pub gamma_tilde: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub gamma5: f64,
    pub gamma6: f64,
}

impl SecularRates {
    pub fn new(p: &SystemParams) -> Self {
        let (g, g12) = (p.gamma, p.gamma12);
        let a2 = p.omega_a * p.omega_a;
        let b2 = p.omega_b * p.omega_b;
        let x = 4.0 * a2 + b2;
        let gamma1 = (g * (15.0 * a2 + 4.0 * b2) - 3.0 * g12 * a2) / (6.0 * x);
        let gamma4 = (2.0 * g * a2 - 3.0 * g12 * (2.0 * a2 + b2)) / (12.0 * x);
        Self {
            gamma0: (g * (9.0 * a2 + 2.0 * b2) + 3.0 * g12 * a2) / (6.0 * x),
            gamma: (g * (6.0 * a2 + b2) + 6.0 * g12 * a2) / (12.0 * x),
            gamma_tilde: (g * (3.0 * a2 + b2) - 3.0 * g12 * a2) / (6.0 * x),
            gamma1,
            gamma2: gamma1,
            gamma3: (g * (11.0 * a2 + 3.0 * b2) - 3.0 * g12 * a2) / (6.0 * x),
            gamma4,
            gamma5: (g * (13.0 * a2 + 3.0 * b2) + 3.0 * g12 * a2) / (6.0 * x),
            gamma6: gamma4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressedSystem {
    pub params: SystemParams,
    pub omega1: f64,
    pub omega2: f64,
    /// Indexed by `DressedLabel`.
    pub eigenvalues: [f64; 4],
    /// `coeffs[state][i]` is the amplitude on bare level i + 1.
    pub coeffs: [[f64; 4]; 4],
    pub rates: SecularRates,
    pub populations: [f64; 4],
}

/// Dressed basis and secular rates. Only defined on resonance.
pub fn build_dressed(params: &SystemParams) -> Result<DressedSystem> {
    params.validate()?;
    if params.delta != 0.0 {
        return Err(Error::RequiresResonance { delta: params.delta });
    }
    if params.omega_a == 0.0 {
        return Err(Error::DegenerateDressing);
    }
    let (a, b) = (params.omega_a, params.omega_b);
    let r = (4.0 * a * a + b * b).sqrt();
    let (omega1, omega2) = (r + b, r - b);

    let a1 = -0.5 * (omega1 / (omega1 - b)).sqrt();
    let a2 = -a / (omega1 * (omega1 - b)).sqrt();
    let k1 = 0.5 * (omega2 / (omega2 + b)).sqrt();
    let k2 = -a / (omega2 * (omega2 + b)).sqrt();

    Ok(DressedSystem {
        params: *params,
        omega1,
        omega2,
        eigenvalues: [-omega1 / 2.0, -omega2 / 2.0, omega2 / 2.0, omega1 / 2.0],
        coeffs: [
            [a1, a2, -a2, a1],
            [-k1, -k2, -k2, k1],
            [k1, k2, -k2, k1],
            [-a1, -a2, -a2, a1],
        ],
        rates: SecularRates::new(params),
        populations: [0.25; 4],
    })
}

impl DressedSystem {
    pub fn eigenvalue(&self, s: DressedLabel) -> f64 {
        self.eigenvalues[s.index()]
    }

    pub fn coeff(&self, s: DressedLabel, level: u8) -> f64 {
        self.coeffs[s.index()][level as usize - 1]
    }

    pub fn population(&self, s: DressedLabel) -> f64 {
        self.populations[s.index()]
    }

    pub fn state(&self, s: DressedLabel) -> Vector4<C64> {
        Vector4::from_fn(|i, _| C64::new(self.coeffs[s.index()][i], 0.0))
    }

    /// Line position of the transition `from → to`.
    pub fn transition_frequency(&self, from: DressedLabel, to: DressedLabel) -> f64 {
        self.eigenvalue(from) - self.eigenvalue(to)
    }

    /// max ‖H|Ψ⟩ − λ|Ψ⟩‖ over the four states.
    pub fn eigen_residual(&self) -> f64 {
        let h = hamiltonian(&self.params);
        DressedLabel::ALL
            .iter()
            .map(|&s| (h * self.state(s) - self.state(s) * C64::from(self.eigenvalue(s))).norm())
            .fold(0.0, f64::max)
    }

    /// max |⟨Ψ|Φ⟩ − δ_ΨΦ|.
    pub fn orthonormality_defect(&self) -> f64 {
        let c = Matrix4::from_fn(|r, k| self.coeffs[r][k]);
        (c * c.transpose() - Matrix4::identity()).abs().max()
    }

    /// Secular population rate matrix in (α, β, κ, μ) order.
    pub fn population_rate_matrix(&self) -> Matrix4<f64> {
        let SecularRates {
            gamma0: g0,
            gamma: g,
            gamma_tilde: gt,
            ..
        } = self.rates;
        Matrix4::new(
            -g0, g, g, gt, //
            g, -g0, gt, g, //
            g, gt, -g0, g, //
            gt, g, g, -g0,
        )
    }

    /// ‖K·ρ‖ for the stored dressed populations.
    pub fn stationarity_defect(&self) -> f64 {
        (self.population_rate_matrix() * Vector4::from(self.populations)).abs().max()
    }

    /// Set when the drive is too weak for the secular approximation.
    pub fn secular_advisory(&self) -> Option<String> {
        let threshold = 10.0 * self.params.gamma;
        let p = &self.params;
        (p.omega_a < threshold || p.omega_b < threshold).then(|| {
            format!(
                "secular approximation is marginal: omega_a = {}, omega_b = {} (advised >= {threshold})",
                p.omega_a, p.omega_b
            )
        })
    }

    /// All nine line positions, ascending.
    pub fn peak_positions(&self) -> [f64; 9] {
        let outer = 0.5 * (self.omega1 + self.omega2);
        let b = self.params.omega_b;
        let mut out = [
            0.0,
            self.omega1,
            -self.omega1,
            self.omega2,
            -self.omega2,
            outer,
            -outer,
            b,
            -b,
        ];
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Bare-basis amplitudes of the two dipole terms for `from → to`.
fn amplitudes(ds: &DressedSystem, from: DressedLabel, to: DressedLabel, channel: Channel) -> [C64; 2] {
    let c = |s, k| ds.coeff(s, k);
    match channel {
        Channel::Pi => [
            C64::from(c(to, 3) * c(from, 1)),
            C64::from(c(to, 4) * c(from, 2)),
        ],
        Channel::Sigma => [
            C64::from(c(to, 4) * c(from, 1)),
            C64::from_polar(c(to, 3) * c(from, 2), -2.0 * ds.params.phi),
        ],
    }
}

/// Hermitian form that turns amplitude pairs into rates. For π the cross
/// coefficient is γ₁₂ rather than −√(γ₁γ₂).
fn rate_form(p: &SystemParams, channel: Channel, x: &[C64; 2], y: &[C64; 2]) -> f64 {
    match channel {
        Channel::Pi => {
            let (g1, g2, g12) = (p.gamma1(), p.gamma2(), p.gamma12);
            (x[0] * y[0].conj() * g1 + x[1] * y[1].conj() * g2 + (x[0] * y[1].conj() + x[1] * y[0].conj()) * g12).re
        }
        Channel::Sigma => ((x[0] + x[1]) * (y[0] + y[1]).conj() * p.gamma_sigma()).re,
    }
}

/// Γ_ij for the dressed transition `from → to`.
pub fn transition_rate(ds: &DressedSystem, from: DressedLabel, to: DressedLabel, channel: Channel) -> f64 {
    let a = amplitudes(ds, from, to, channel);
    rate_form(&ds.params, channel, &a, &a)
}

/// Areas of the five line families plus the split of the two coupled
/// families into fast (W₁) and slow (W₂) Lorentzians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineWeights {
    /// Central, ±Ω₁, ±Ω₂, ±(Ω₁+Ω₂)/2, ±Ω_b.
    pub a: [f64; 5],
    pub w1: f64,
    pub w2: f64,
}

impl LineWeights {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).abs())
            .chain([(self.w1 - other.w1).abs(), (self.w2 - other.w2).abs()])
            .fold(0.0, f64::max)
    }
}

/// Weights from the closed-form expressions.
pub fn closed_form_weights(ds: &DressedSystem, channel: Channel) -> LineWeights {
    let p = &ds.params;
    let (g, g12) = (p.gamma, p.gamma12);
    let a2 = p.omega_a * p.omega_a;
    let b2 = p.omega_b * p.omega_b;
    let x = 4.0 * a2 + b2;
    match channel {
        Channel::Pi => {
            let a1 = (g - 3.0 * g12) * a2 / (6.0 * x);
            let a4 = (g * (2.0 * a2 + b2) + 6.0 * g12 * a2) / (24.0 * x);
            let den = 4.0 * (g + 3.0 * g12) * a2 + 2.0 * g * b2;
            let (w1, w2) = if den == 0.0 {
                (1.0, 0.0)
            } else {
                ((g - 3.0 * g12) * b2 / den, (g + 3.0 * g12) * x / den)
            };
            LineWeights {
                a: [a1, a1 / 4.0, a1 / 4.0, a4, a4],
                w1,
                w2,
            }
        }
        Channel::Sigma => {
            let gs = p.gamma_sigma();
            let a1 = gs / 4.0 * (4.0 * a2 * p.phi.sin().powi(2) + b2) / x;
            let a4 = gs / 4.0 * (2.0 * a2 * p.phi.cos().powi(2)) / x;
            LineWeights {
                a: [a1, a1 / 4.0, a1 / 4.0, a4, a4],
                w1: 1.0,
                w2: 0.0,
            }
        }
    }
}

/// Weights from transition rates and dressed populations. W₁ comes from
/// projecting the two coupled transition amplitudes onto the fast
/// coherence mode of each coupled pair.
pub fn rate_sum_weights(ds: &DressedSystem, channel: Channel) -> LineWeights {
    use DressedLabel::*;
    let rate = |i, j| transition_rate(ds, i, j, channel) * ds.population(i);
    let central = DressedLabel::ALL.iter().map(|&s| rate(s, s)).sum();
    let a = [
        central,
        rate(Mu, Alpha),
        rate(Kappa, Beta),
        rate(Mu, Beta) + rate(Kappa, Alpha),
        rate(Mu, Kappa) + rate(Beta, Alpha),
    ];

    let (w1, w2) = match channel {
        Channel::Pi => {
            let (outer, inner) = coupled_fast_fractions(ds, channel);
            debug_assert!((outer - inner).abs() < 1e-9);
            (outer, 1.0 - outer)
        }
        Channel::Sigma => (1.0, 0.0),
    };
    LineWeights { a, w1, w2 }
}

/// Fast-mode fractions of the (outer, inner) coupled line pairs. The outer
/// coherences ρ_μβ, ρ_κα are coupled by +Γ₄, so their antisymmetric
/// combination decays at Γ₃ + Γ₄; the inner ρ_μκ, ρ_βα are coupled by −Γ₆,
/// so the symmetric one decays at Γ₅ + Γ₆.
pub fn coupled_fast_fractions(ds: &DressedSystem, channel: Channel) -> (f64, f64) {
    use DressedLabel::*;
    let p = &ds.params;
    let frac = |(i1, j1), (i2, j2), sign: f64| {
        let x = amplitudes(ds, i1, j1, channel);
        let y = amplitudes(ds, i2, j2, channel);
        let s = rate_form(p, channel, &x, &x) + rate_form(p, channel, &y, &y);
        if s == 0.0 {
            1.0
        } else {
            (s + sign * 2.0 * rate_form(p, channel, &x, &y)) / (2.0 * s)
        }
    };
    (
        frac((Mu, Beta), (Kappa, Alpha), -1.0),
        frac((Mu, Kappa), (Beta, Alpha), 1.0),
    )
}

/// One Lorentzian component of a dressed spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedLine {
    pub label: &'static str,
    pub center: f64,
    /// Half width at half maximum.
    pub width: f64,
    pub weight: f64,
}

impl DressedLine {
    pub fn height(&self) -> f64 {
        self.weight / (PI * self.width)
    }

    pub fn value_at(&self, omega: f64) -> f64 {
        let d = omega - self.center;
        self.weight / PI * self.width / (d * d + self.width * self.width)
    }
}

/// Every Lorentzian of the channel, including both signs of each sideband.
/// Components with zero weight are omitted.
pub fn analytic_lines(ds: &DressedSystem, channel: Channel) -> Vec<DressedLine> {
    let w = closed_form_weights(ds, channel);
    let r = &ds.rates;
    let outer = 0.5 * (ds.omega1 + ds.omega2);
    let b = ds.params.omega_b;
    let mut out = vec![DressedLine {
        label: "central",
        center: 0.0,
        width: ds.params.gamma / 2.0,
        weight: w.a[0],
    }];
    let mut pair = |label, center: f64, width, weight| {
        for c in [-center, center] {
            out.push(DressedLine {
                label,
                center: c,
                width,
                weight,
            });
        }
    };
    pair("omega1", ds.omega1, r.gamma1, w.a[1]);
    pair("omega2", ds.omega2, r.gamma2, w.a[2]);
    pair("outer-fast", outer, r.gamma3 + r.gamma4, w.a[3] * w.w1);
    pair("outer-slow", outer, r.gamma3 - r.gamma4, w.a[3] * w.w2);
    pair("inner-fast", b, r.gamma5 + r.gamma6, w.a[4] * w.w1);
    pair("inner-slow", b, r.gamma5 - r.gamma6, w.a[4] * w.w2);
    out.retain(|l| l.weight != 0.0);
    out
}

/// Lorentzian-sum spectrum on `grid`, in the same units as the numeric one.
pub fn analytic_spectrum(ds: &DressedSystem, channel: Channel, grid: &FrequencyGrid) -> SpectrumTrace {
    let lines = analytic_lines(ds, channel);
    let omega = grid.values();
    let values = omega
        .iter()
        .map(|&w| lines.iter().map(|l| l.value_at(w)).sum())
        .collect();
    SpectrumTrace {
        channel,
        params: ds.params,
        detector_cross: true,
        omega,
        values,
    }
}
