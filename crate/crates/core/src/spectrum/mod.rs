//! Incoherent fluorescence spectra from the quantum regression theorem.
//!
//! A spectrum is a contraction S(ω) = (1/π) Re Σ cₖ [(iω − M)⁻¹ U^{sₖ}]_{rₖ}
//! where U^{s} holds the steady-state fluctuation correlations
//! ⟨δA_j δA_s⟩ and the coefficients cₖ encode the detected field.

mod grid;
mod lines;

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use nalgebra::LU;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use grid::FrequencyGrid;
pub use lines::{spectral_lines, SpectralLine};

use crate::error::{Error, Result};
use crate::liouvillian::{Liouvillian, Matrix15, Vector15};
use crate::model::{operator_product, OperatorIndex, SystemParams, C64, DIM};
use crate::steadystate::{solve_steady, StateVector};

/// Detected polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Pi,
    Sigma,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Pi => "pi",
            Channel::Sigma => "sigma",
        })
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pi" | "π" => Ok(Channel::Pi),
            "sigma" | "σ" => Ok(Channel::Sigma),
            other => Err(format!("unknown channel `{other}` (expected pi or sigma)")),
        }
    }
}

/// U^{mn}_j = ⟨A_j A_mn⟩ − ⟨A_j⟩⟨A_mn⟩ in the steady state.
pub fn correlation_init(steady: &StateVector, mn: OperatorIndex) -> Vector15 {
    let source = steady.get(mn);
    Vector15::from_fn(|j, _| {
        let aj = OperatorIndex::from_position(j);
        steady.expect(&operator_product(aj, mn)) - steady.get(aj) * source
    })
}

/// The four source vectors needed by the π and σ spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationInit {
    pub u31: Vector15,
    pub u42: Vector15,
    pub u41: Vector15,
    pub u32: Vector15,
}

impl CorrelationInit {
    pub fn new(steady: &StateVector) -> Self {
        Self {
            u31: correlation_init(steady, OperatorIndex::A31),
            u42: correlation_init(steady, OperatorIndex::A42),
            u41: correlation_init(steady, OperatorIndex::A41),
            u32: correlation_init(steady, OperatorIndex::A32),
        }
    }

    /// The stored vector for `source`, if it is one of the four.
    pub fn get(&self, source: OperatorIndex) -> Option<&Vector15> {
        match source {
            OperatorIndex::A31 => Some(&self.u31),
            OperatorIndex::A42 => Some(&self.u42),
            OperatorIndex::A41 => Some(&self.u41),
            OperatorIndex::A32 => Some(&self.u32),
            _ => None,
        }
    }
}

/// One contraction ⟨δA_row(τ) δA_source(0)⟩ weighted by `coeff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub row: OperatorIndex,
    pub source: OperatorIndex,
}

/// Linear functional of the correlation vectors that defines a detected
/// spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub channel: Channel,
    pub terms: Vec<Term>,
}

impl Detection {
    /// π light. The interference terms between the two π lines carry γ₁₂;
    /// `detector_cross = false` drops them regardless of γ₁₂.
    pub fn pi(p: &SystemParams, detector_cross: bool) -> Self {
        let c12 = if detector_cross { p.gamma12 } else { 0.0 };
        let term = |coeff: f64, row, source| Term {
            coeff: C64::new(coeff, 0.0),
            row,
            source,
        };
        let mut terms = vec![
            term(p.gamma1(), OperatorIndex::A13, OperatorIndex::A31),
            term(p.gamma2(), OperatorIndex::A24, OperatorIndex::A42),
        ];
        if detector_cross {
            terms.push(term(c12, OperatorIndex::A13, OperatorIndex::A42));
            terms.push(term(c12, OperatorIndex::A24, OperatorIndex::A31));
        }
        Self {
            channel: Channel::Pi,
            terms,
        }
    }

    /// σ light at relative phase `phi`.
    pub fn sigma(p: &SystemParams, phi: f64) -> Self {
        let gs = p.gamma_sigma();
        let phase = C64::from_polar(1.0, 2.0 * phi);
        let term = |coeff: C64, row, source| Term { coeff, row, source };
        Self {
            channel: Channel::Sigma,
            terms: vec![
                term(C64::new(gs, 0.0), OperatorIndex::A14, OperatorIndex::A41),
                term(C64::new(gs, 0.0), OperatorIndex::A23, OperatorIndex::A32),
                term(phase.conj() * gs, OperatorIndex::A14, OperatorIndex::A32),
                term(phase * gs, OperatorIndex::A23, OperatorIndex::A41),
            ],
        }
    }

    fn sources(&self) -> Vec<OperatorIndex> {
        let mut out: Vec<OperatorIndex> = Vec::with_capacity(2);
        for t in &self.terms {
            if !out.contains(&t.source) {
                out.push(t.source);
            }
        }
        out
    }

    /// Re Σ cₖ U^{sₖ}_{rₖ}: the integral of the spectrum over all ω.
    pub fn total_intensity(&self, init: &CorrelationInit) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * init.get(t.source).expect("source vector")[t.row.position().unwrap()])
            .sum::<C64>()
            .re
    }

    /// Σ cₖ ℓ_{rₖ}ᵀ (z − M)⁻¹ U^{sₖ} at complex frequency z.
    pub(crate) fn transfer(&self, l: &Liouvillian, init: &CorrelationInit, z: C64) -> Result<C64> {
        let a = shifted(l.matrix(), z);
        let lu = checked_lu(&a, z.im)?;
        let mut acc = C64::new(0.0, 0.0);
        for source in self.sources() {
            let u = init.get(source).expect("source vector");
            let x = lu.solve(u).ok_or(Error::SingularResolvent { omega: z.im })?;
            for t in self.terms.iter().filter(|t| t.source == source) {
                acc += t.coeff * x[t.row.position().unwrap()];
            }
        }
        Ok(acc)
    }

    /// S(ω) at one frequency.
    pub fn evaluate(&self, l: &Liouvillian, init: &CorrelationInit, omega: f64) -> Result<f64> {
        Ok(self.transfer(l, init, C64::new(0.0, omega))?.re / PI)
    }
}

fn shifted(m: &Matrix15, z: C64) -> Matrix15 {
    let mut a = -m;
    for k in 0..DIM {
        a[(k, k)] += z;
    }
    a
}

type Lu15 = LU<C64, nalgebra::Const<DIM>, nalgebra::Const<DIM>>;

fn checked_lu(a: &Matrix15, omega: f64) -> Result<Lu15> {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let lu = a.lu();
    let u = lu.u();
    if (0..DIM).any(|k| u[(k, k)].norm() <= 1e-14 * scale) {
        return Err(Error::SingularResolvent { omega });
    }
    Ok(lu)
}

/// N(ω) = (iω − M)⁻¹.
pub fn resolvent(l: &Liouvillian, omega: f64) -> Result<Matrix15> {
    let a = shifted(l.matrix(), C64::new(0.0, omega));
    checked_lu(&a, omega)?
        .try_inverse()
        .ok_or(Error::SingularResolvent { omega })
}

/// A sampled spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub channel: Channel,
    pub params: SystemParams,
    pub detector_cross: bool,
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
}

/// A local maximum of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub omega: f64,
    pub value: f64,
}

impl SpectrumTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoidal integral over the grid.
    pub fn integral(&self) -> f64 {
        self.omega
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(w, v)| 0.5 * (w[1] - w[0]) * (v[0] + v[1]))
            .sum()
    }

    /// Linear interpolation; `None` outside the grid.
    pub fn value_at(&self, omega: f64) -> Option<f64> {
        let k = self.omega.partition_point(|&w| w < omega);
        if k == 0 {
            return (self.omega.first() == Some(&omega)).then(|| self.values[0]);
        }
        if k == self.omega.len() {
            return None;
        }
        let (w0, w1) = (self.omega[k - 1], self.omega[k]);
        let t = (omega - w0) / (w1 - w0);
        Some(self.values[k - 1] * (1.0 - t) + self.values[k] * t)
    }

    /// Interior strict local maxima, in grid order.
    pub fn local_maxima(&self) -> Vec<Peak> {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .filter(|&k| v[k] > v[k - 1] && v[k] >= v[k + 1])
            .map(|k| Peak {
                index: k,
                omega: self.omega[k],
                value: v[k],
            })
            .collect()
    }

    /// Highest grid point within `half_window` of `omega`.
    pub fn peak_near(&self, omega: f64, half_window: f64) -> Option<Peak> {
        self.omega
            .iter()
            .zip(&self.values)
            .enumerate()
            .filter(|(_, (w, _))| (**w - omega).abs() <= half_window)
            .max_by(|a, b| a.1 .1.total_cmp(b.1 .1))
            .map(|(index, (&omega, &value))| Peak { index, omega, value })
    }

    /// max |S(ω) − S(−ω)| for a grid symmetric about zero.
    pub fn symmetry_defect(&self) -> Option<f64> {
        let n = self.omega.len();
        let symmetric = (0..n).all(|k| (self.omega[k] + self.omega[n - 1 - k]).abs() <= 1e-12 * (1.0 + self.omega[k].abs()));
        symmetric.then(|| {
            (0..n)
                .map(|k| (self.values[k] - self.values[n - 1 - k]).abs())
                .fold(0.0, f64::max)
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let p = &self.params;
        writeln!(
            w,
            "# channel={} phi={} gamma12={} gamma={} delta={} omega_a={} omega_b={} detector_cross={}",
            self.channel, p.phi, p.gamma12, p.gamma, p.delta, p.omega_a, p.omega_b, self.detector_cross
        )?;
        writeln!(w, "omega,S")?;
        for (o, s) in self.omega.iter().zip(&self.values) {
            writeln!(w, "{o:.11e},{s:.11e}")?;
        }
        Ok(())
    }
}

/// Evaluate `detection` over `grid`, in parallel, gathered in grid order.
pub fn compute_spectrum(
    l: &Liouvillian,
    init: &CorrelationInit,
    detection: &Detection,
    grid: &FrequencyGrid,
    params: SystemParams,
    detector_cross: bool,
) -> Result<SpectrumTrace> {
    let omega = grid.values();
    let values = omega
        .par_iter()
        .map(|&w| detection.evaluate(l, init, w))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SpectrumTrace {
        channel: detection.channel,
        params,
        detector_cross,
        omega,
        values,
    })
}

/// π spectrum from a precomputed steady state.
pub fn spectrum_pi(l: &Liouvillian, steady: &StateVector, grid: &FrequencyGrid, detector_cross: bool) -> Result<SpectrumTrace> {
    let init = CorrelationInit::new(steady);
    let det = Detection::pi(l.params(), detector_cross);
    compute_spectrum(l, &init, &det, grid, *l.params(), detector_cross)
}

/// σ spectrum at relative phase `phi`.
pub fn spectrum_sigma(l: &Liouvillian, steady: &StateVector, grid: &FrequencyGrid, phi: f64) -> Result<SpectrumTrace> {
    let init = CorrelationInit::new(steady);
    let det = Detection::sigma(l.params(), phi);
    compute_spectrum(l, &init, &det, grid, l.params().with_phi(phi), true)
}

/// Liouvillian, steady state and correlation vectors for one parameter set.
#[derive(Debug, Clone)]
pub struct DrivenAtom {
    liouvillian: Liouvillian,
    steady: StateVector,
    init: CorrelationInit,
}

impl DrivenAtom {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        let liouvillian = Liouvillian::build(params);
        let steady = solve_steady(&liouvillian)?;
        let init = CorrelationInit::new(&steady);
        Ok(Self {
            liouvillian,
            steady,
            init,
        })
    }

    pub fn params(&self) -> &SystemParams {
        self.liouvillian.params()
    }

    pub fn liouvillian(&self) -> &Liouvillian {
        &self.liouvillian
    }

    pub fn steady(&self) -> &StateVector {
        &self.steady
    }

    pub fn init(&self) -> &CorrelationInit {
        &self.init
    }

    /// Detection for `channel`; σ uses the stored φ.
    pub fn detection(&self, channel: Channel, detector_cross: bool) -> Detection {
        match channel {
            Channel::Pi => Detection::pi(self.params(), detector_cross),
            Channel::Sigma => Detection::sigma(self.params(), self.params().phi),
        }
    }

    pub fn spectrum(&self, channel: Channel, grid: &FrequencyGrid, detector_cross: bool) -> Result<SpectrumTrace> {
        let det = self.detection(channel, detector_cross);
        let cross = detector_cross || channel == Channel::Sigma;
        compute_spectrum(&self.liouvillian, &self.init, &det, grid, *self.params(), cross)
    }

    pub fn total_intensity(&self, channel: Channel, detector_cross: bool) -> f64 {
        self.detection(channel, detector_cross).total_intensity(&self.init)
    }

    pub fn spectral_lines(&self, channel: Channel, detector_cross: bool) -> Result<Vec<SpectralLine>> {
        spectral_lines(&self.liouvillian, &self.init, &self.detection(channel, detector_cross))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steadystate::analytic_steady;

    fn fig4() -> SystemParams {
        SystemParams::new(0.0, 15.0, 11.0)
    }

    #[test]
    fn channel_parsing() {
        assert_eq!("pi".parse::<Channel>(), Ok(Channel::Pi));
        assert_eq!("Sigma".parse::<Channel>(), Ok(Channel::Sigma));
        assert!("x".parse::<Channel>().is_err());
        assert_eq!(Channel::Sigma.to_string(), "sigma");
    }

    #[test]
    fn correlation_components() {
        let s = analytic_steady(&SystemParams::new(1.0, 2.0, 0.7)).unwrap();
        let u31 = correlation_init(&s, OperatorIndex::A31);
        let u42 = correlation_init(&s, OperatorIndex::A42);
        let pos = |o: OperatorIndex| o.position().unwrap();
        let r11 = s.rho(1, 1);
        let r31 = s.rho(3, 1);
        let r24 = s.rho(2, 4);
        let r42 = s.rho(4, 2);
        assert!((u31[pos(OperatorIndex::A13)] - (r11 - r31 * r31.conj())).norm() < 1e-15);
        assert!((u42[pos(OperatorIndex::A13)] + r31 * r24).norm() < 1e-15);
        assert!((u42[pos(OperatorIndex::A24)] - (s.rho22() - r42 * r42.conj())).norm() < 1e-15);
        assert!(u31.iter().chain(u42.iter()).all(|z| z.norm() <= 1.0));
    }

    #[test]
    fn resolvent_identity_and_zero_frequency() {
        let atom = DrivenAtom::new(&fig4()).unwrap();
        let m = atom.liouvillian().matrix();
        for w in [0.0, 5.0, -5.0] {
            let n = resolvent(atom.liouvillian(), w).unwrap();
            let a = shifted(m, C64::new(0.0, w));
            assert!((n * a - Matrix15::identity()).norm() < 1e-10);
        }
        let n0 = resolvent(atom.liouvillian(), 0.0).unwrap();
        // N(0) = −M⁻¹, so N(0)·C is the stationary state.
        let psi = n0 * atom.liouvillian().inhomogeneity();
        assert!((psi - atom.steady().as_vector()).norm() < 1e-10);
    }

    #[test]
    fn resolvent_decays_at_large_frequency() {
        let l = Liouvillian::build(&fig4());
        let n1 = resolvent(&l, 1e3).unwrap().norm();
        let n2 = resolvent(&l, 1e4).unwrap().norm();
        assert!(n2 < n1 && (n1 / n2 - 10.0).abs() < 0.5);
    }

    #[test]
    fn undamped_mode_is_reported() {
        // Undriven: ground-state coherence A34 is conserved, so ω = 0 is a pole.
        let l = Liouvillian::build(&SystemParams::new(0.0, 0.0, 0.0));
        assert_eq!(resolvent(&l, 0.0), Err(Error::SingularResolvent { omega: 0.0 }));
    }

    #[test]
    fn pi_detection_without_cross_terms() {
        let p = fig4();
        assert_eq!(Detection::pi(&p, true).terms.len(), 4);
        assert_eq!(Detection::pi(&p, false).terms.len(), 2);
    }

    #[test]
    fn pi_spectrum_ignores_phase() {
        let grid = FrequencyGrid::new(-40.0, 40.0, 161).unwrap();
        let a = DrivenAtom::new(&fig4()).unwrap().spectrum(Channel::Pi, &grid, true).unwrap();
        let b = DrivenAtom::new(&fig4().with_phi(PI / 3.0))
            .unwrap()
            .spectrum(Channel::Pi, &grid, true)
            .unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn sigma_spectrum_without_second_field_ignores_phase() {
        let grid = FrequencyGrid::new(-30.0, 30.0, 121).unwrap();
        let p = SystemParams::new(0.0, 12.0, 0.0);
        let l = Liouvillian::build(&p);
        let s = solve_steady(&l).unwrap();
        let a = spectrum_sigma(&l, &s, &grid, 0.0).unwrap();
        let b = spectrum_sigma(&l, &s, &grid, 1.1).unwrap();
        let scale = a.max_value();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn trace_helpers() {
        let trace = SpectrumTrace {
            channel: Channel::Pi,
            params: SystemParams::default(),
            detector_cross: true,
            omega: vec![-1.0, 0.0, 1.0, 2.0],
            values: vec![0.0, 2.0, 1.0, 3.0],
        };
        assert_eq!(trace.integral(), 0.5 * (2.0 + 3.0 + 4.0));
        assert_eq!(trace.value_at(0.5), Some(1.5));
        assert_eq!(trace.value_at(-1.0), Some(0.0));
        assert_eq!(trace.value_at(3.0), None);
        assert_eq!(trace.local_maxima().len(), 1);
        assert_eq!(trace.peak_near(1.9, 0.5).unwrap().value, 3.0);
        assert_eq!(trace.symmetry_defect(), None);
    }

    #[test]
    fn csv_format() {
        let grid = FrequencyGrid::new(-1.0, 1.0, 3).unwrap();
        let trace = DrivenAtom::new(&fig4()).unwrap().spectrum(Channel::Pi, &grid, true).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("# channel=pi phi=0 gamma12=-0.3333"));
        assert_eq!(lines[1], "omega,S");
        assert!(lines[2].starts_with("-1.00000000000e0,"));
        let s: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert!((s - trace.values[1]).abs() <= 1e-11 * s.abs());
    }
}
