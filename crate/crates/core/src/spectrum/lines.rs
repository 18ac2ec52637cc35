use std::f64::consts::PI;

use super::{CorrelationInit, Detection};
use crate::error::Result;
use crate::liouvillian::Liouvillian;
use crate::model::C64;

const CONTOUR_POINTS: usize = 128;

/// One pole of the spectral transfer function: a Lorentzian line centred
/// at Im λ with half-width |Re λ|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub eigenvalue: C64,
    /// Number of numerically coincident eigenvalues merged into this line.
    pub multiplicity: usize,
    pub residue: C64,
}

impl SpectralLine {
    pub fn center(&self) -> f64 {
        self.eigenvalue.im
    }

    pub fn half_width(&self) -> f64 {
        -self.eigenvalue.re
    }

    /// Integrated area, Re r.
    pub fn area(&self) -> f64 {
        self.residue.re
    }

    /// Peak magnitude |r| / (π |Re λ|), counting dispersive parts too.
    pub fn strength(&self) -> f64 {
        self.residue.norm() / (PI * self.half_width())
    }

    /// (1/π) Re[r / (iω − λ)].
    pub fn value_at(&self, omega: f64) -> f64 {
        (self.residue / (C64::new(0.0, omega) - self.eigenvalue)).re / PI
    }
}

fn cluster(eigenvalues: &[C64], scale: f64) -> Vec<(C64, usize)> {
    let tol = 1e-6 * scale.max(1.0);
    let mut out: Vec<(C64, usize)> = Vec::new();
    for &z in eigenvalues {
        match out.iter_mut().find(|(c, _)| (*c - z).norm() <= tol) {
            Some((c, n)) => {
                *c = (*c * *n as f64 + z) / (*n as f64 + 1.0);
                *n += 1;
            }
            None => out.push((z, 1)),
        }
    }
    out
}

/// Decompose the spectrum of `detection` into the poles of M. Residues are
/// obtained by contour integration around each (clustered) eigenvalue, so
/// no eigenvectors are needed.
pub fn spectral_lines(l: &Liouvillian, init: &CorrelationInit, detection: &Detection) -> Result<Vec<SpectralLine>> {
    let clusters = cluster(&l.eigenvalues(), l.norm_inf());
    let mut lines = Vec::with_capacity(clusters.len());
    for (i, &(center, multiplicity)) in clusters.iter().enumerate() {
        let gap = clusters
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (c, _))| (c - center).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = if gap.is_finite() { 0.5 * gap } else { 1.0 };
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..CONTOUR_POINTS {
            let e = C64::from_polar(radius, 2.0 * PI * k as f64 / CONTOUR_POINTS as f64);
            acc += detection.transfer(l, init, center + e)? * e;
        }
        lines.push(SpectralLine {
            eigenvalue: center,
            multiplicity,
            residue: acc / CONTOUR_POINTS as f64,
        });
    }
    lines.sort_by(|a, b| a.center().total_cmp(&b.center()).then(a.half_width().total_cmp(&b.half_width())));
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemParams;
    use crate::spectrum::{Channel, DrivenAtom};

    #[test]
    fn lines_rebuild_the_spectrum() {
        let atom = DrivenAtom::new(&SystemParams::new(1.5, 3.0, 2.0).with_phi(0.4)).unwrap();
        for channel in [Channel::Pi, Channel::Sigma] {
            let lines = atom.spectral_lines(channel, true).unwrap();
            let det = atom.detection(channel, true);
            for w in [-7.0, -2.2, 0.0, 0.3, 4.1] {
                let direct = det.evaluate(atom.liouvillian(), atom.init(), w).unwrap();
                let modal: f64 = lines.iter().map(|line| line.value_at(w)).sum();
                assert!((direct - modal).abs() < 1e-9 * (1.0 + direct.abs()), "{channel} {w}: {direct} vs {modal}");
            }
            let area: f64 = lines.iter().map(SpectralLine::area).sum();
            assert!((area - atom.total_intensity(channel, true)).abs() < 1e-10);
        }
    }

    #[test]
    fn clustering_merges_coincident_values() {
        let z = [C64::new(-1.0, 2.0), C64::new(-1.0, 2.0 + 1e-9), C64::new(-0.5, 0.0)];
        let c = cluster(&z, 10.0);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
    }
}
