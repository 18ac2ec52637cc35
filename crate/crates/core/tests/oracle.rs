mod common;

use std::f64::consts::FRAC_PI_4;

use vicfluor::{Channel, DrivenAtom, FrequencyGrid, Liouvillian, OperatorIndex, SystemParams};

fn cases() -> Vec<SystemParams> {
    vec![
        SystemParams::new(0.0, 15.0, 11.0),
        SystemParams::new(4.0, 0.6, 0.8).with_phi(FRAC_PI_4),
        SystemParams::new(-2.5, 3.0, 0.0).with_gamma12(0.0),
        SystemParams::new(1.3, 0.0, 2.0).with_gamma12(-0.1),
    ]
}

#[test]
fn evolution_matrix_matches_master_equation() {
    for p in cases() {
        let l = Liouvillian::build(&p);
        let (m, c) = common::reduced_system(&p);
        let mut worst = 0.0f64;
        for i in 0..15 {
            worst = worst.max((l.inhomogeneity()[i] - c[i]).norm());
            for j in 0..15 {
                worst = worst.max((l.matrix()[(i, j)] - m[(i, j)]).norm());
            }
        }
        assert!(worst < 1e-14, "{p:?}: max entry difference {worst:e}");
    }
}

#[test]
fn steady_state_matches_superoperator_null_vector() {
    for p in cases() {
        let atom = DrivenAtom::new(&p).unwrap();
        let rho = common::steady_density(&p);
        let ours = atom.steady().density_matrix();
        let diff = (ours - rho).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{p:?}: {diff:e}");
    }
}

#[test]
fn spectra_match_full_space_regression() {
    let grid = FrequencyGrid::new(-20.3, 19.7, 41).unwrap();
    for p in cases() {
        let atom = DrivenAtom::new(&p).unwrap();
        for (channel, terms) in [(Channel::Pi, common::pi_terms(&p)), (Channel::Sigma, common::sigma_terms(&p))] {
            let trace = atom.spectrum(channel, &grid, true).unwrap();
            let scale = trace.max_value().max(1e-12);
            for (&w, &s) in trace.omega.iter().zip(&trace.values) {
                let reference = common::spectrum(&p, &terms, w);
                assert!(
                    (s - reference).abs() <= 1e-9 * scale,
                    "{channel} {p:?} at {w}: {s:e} vs {reference:e}"
                );
            }
        }
    }
}

#[test]
fn steady_coherence_convention() {
    // ⟨A_13⟩ is stored at position 5 and equals ρ₃₁ of the reference matrix.
    let p = SystemParams::new(1.0, 2.0, 0.5);
    let atom = DrivenAtom::new(&p).unwrap();
    let rho = common::steady_density(&p);
    assert_eq!(OperatorIndex::A13.position(), Some(5));
    assert!((atom.steady().get(OperatorIndex::A13) - rho[(2, 0)]).norm() < 1e-10);
}
