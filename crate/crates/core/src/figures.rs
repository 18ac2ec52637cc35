//! Frozen parameter sets of the reference figures.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::model::SystemParams;
use crate::spectrum::{Channel, FrequencyGrid};
use crate::steadystate::SweepParam;

pub const FIGURE_IDS: [&str; 9] = ["2a", "2b", "3a", "3b", "4", "5", "6a", "6b", "7"];

/// Ω_a values of the population figures: 400 points on (0, 20].
pub fn population_axis() -> Vec<f64> {
    (1..=400).map(|k| 20.0 * k as f64 / 400.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    Populations { param: SweepParam, values: Vec<f64> },
    Spectrum { channel: Channel, grid: FrequencyGrid },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// File stem, unique within the figure.
    pub name: String,
    pub params: SystemParams,
    pub kind: CurveKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: &'static str,
    pub curves: Vec<Curve>,
}

fn spectrum(name: &str, channel: Channel, params: SystemParams) -> Curve {
    Curve {
        name: name.to_owned(),
        params,
        kind: CurveKind::Spectrum {
            channel,
            grid: FrequencyGrid::default_for(&params),
        },
    }
}

fn populations(name: &str, params: SystemParams) -> Curve {
    Curve {
        name: name.to_owned(),
        params,
        kind: CurveKind::Populations {
            param: SweepParam::OmegaA,
            values: population_axis(),
        },
    }
}

fn vic_pair(id: &str, channel: Channel, p: SystemParams) -> Vec<Curve> {
    vec![
        spectrum(&format!("fig{id}_vic"), channel, p),
        spectrum(&format!("fig{id}_novic"), channel, p.with_gamma12(0.0)),
    ]
}

/// Curves of figure `id`, or `None` for an unknown id.
pub fn figure(id: &str) -> Option<Figure> {
    let id = FIGURE_IDS.iter().copied().find(|&f| f == id)?;
    let curves = match id {
        "2a" => vec![populations("fig2a_populations", SystemParams::new(8.0, 1.0, 0.0))],
        "2b" => vec![populations("fig2b_populations", SystemParams::new(8.0, 1.0, 12.0))],
        "3a" => vec![
            spectrum("fig3a_omega_b_0.1", Channel::Pi, SystemParams::new(4.0, 0.6, 0.1)),
            spectrum("fig3a_omega_b_0", Channel::Pi, SystemParams::new(4.0, 0.6, 0.0)),
        ],
        "3b" => vec![
            spectrum("fig3b_omega_b_3", Channel::Pi, SystemParams::new(4.0, 12.0, 3.0)),
            spectrum("fig3b_omega_b_0", Channel::Pi, SystemParams::new(4.0, 12.0, 0.0)),
        ],
        "4" => vic_pair("4", Channel::Pi, SystemParams::new(0.0, 15.0, 11.0)),
        "5" => vic_pair("5", Channel::Pi, SystemParams::new(0.0, 12.0, 3.0)),
        "6a" => {
            let p = SystemParams::new(4.0, 0.6, 0.8);
            vec![
                spectrum("fig6a_phi_0", Channel::Sigma, p),
                spectrum("fig6a_phi_pi4", Channel::Sigma, p.with_phi(FRAC_PI_4)),
                spectrum("fig6a_phi_pi2", Channel::Sigma, p.with_phi(FRAC_PI_2)),
            ]
        }
        "6b" => {
            let p = SystemParams::new(0.0, 10.0, 7.0);
            vec![
                spectrum("fig6b_phi_0", Channel::Sigma, p),
                spectrum("fig6b_phi_pi2", Channel::Sigma, p.with_phi(FRAC_PI_2)),
            ]
        }
        "7" => vic_pair("7", Channel::Sigma, SystemParams::new(0.0, 12.0, 3.0).with_phi(FRAC_PI_2)),
        _ => unreachable!(),
    };
    Some(Figure { id, curves })
}

/// Every figure, in id order.
pub fn all_figures() -> Vec<Figure> {
    FIGURE_IDS.iter().filter_map(|id| figure(id)).collect()
}
