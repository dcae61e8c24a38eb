//! The bundled measured-JSI CSV must match its generator. Set SPDC_REGENERATE=1 to rewrite it.

use std::path::PathBuf;

use spdc_studio::fixtures::{generate_measured_jsi, measured_jsi_csv, qst_fixture_state, MeasuredJsiParams};
use spdc_studio::grid_io::grid_to_csv;
use spdc_studio::polarization::{bell_state, chsh_max, concurrence, fidelity, purity, BellKind};

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/measured_jsi_fixture.csv")
}

#[test]
fn measured_jsi_fixture_matches_generator() {
    let jsi = generate_measured_jsi(&MeasuredJsiParams::default()).unwrap();
    let text = grid_to_csv(&jsi.grid, |a, b| jsi.intensity[(a, b)]);
    if std::env::var("SPDC_REGENERATE").as_deref() == Ok("1") {
        std::fs::write(fixture_path(), &text).unwrap();
        return;
    }
    assert!(text == measured_jsi_csv(), "fixture is stale; rerun with SPDC_REGENERATE=1");
}

#[test]
fn measured_jsi_is_peak_normalized() {
    let jsi = spdc_studio::fixtures::measured_jsi();
    assert_eq!(jsi.grid.shape(), (192, 192));
    assert_eq!(jsi.intensity.max(), 1.0);
    assert!(jsi.intensity.min() >= 0.0);
}

#[test]
fn qst_fixture_is_a_physical_state() {
    let rho = qst_fixture_state();
    let tr: f64 = (0..4).map(|k| rho.matrix()[(k, k)].re).sum();
    assert!((tr - 1.0).abs() < 1e-9);
    assert!(rho.eigenvalues().iter().all(|&l| l >= -1e-12));
    // loose sanity ranges; the tight checks live in the acceptance suite
    assert!(purity(&rho) > 0.9);
    assert!(concurrence(&rho).unwrap() > 0.9);
    assert!(fidelity(&rho, &bell_state(BellKind::PsiMinus)) > 0.9);
    assert!(chsh_max(&rho) > 2.6);
}
