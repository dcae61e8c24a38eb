//! Sixteen-setting tomography: simulated Poisson counts from the fixture state, maximum-
//! likelihood reconstruction, and the error as the count level grows.

use spdc_studio::fixtures::qst_fixture_state;
use spdc_studio::polarization::trace_distance;
use spdc_studio::tomography::{mle_reconstruct, simulate_counts, standard_16_settings, tomography_report, MleOptions};

fn main() -> spdc_studio::Result<()> {
    let truth = qst_fixture_state();
    let settings = standard_16_settings();
    for n in [1e3, 1e4, 1e5, 1e6] {
        let records = simulate_counts(&truth, &settings, n, 17)?;
        let fit = mle_reconstruct(&records, MleOptions::default())?;
        let m = tomography_report(&fit)?;
        println!(
            "N {n:7.0}  TD {:.4}  P {:.4}  C {:.4}  F {:.4}  S {:.4}  ({} iterations)",
            trace_distance(&fit.state, &truth),
            m.purity,
            m.concurrence,
            m.fidelity_to_target,
            m.chsh_s,
            fit.iterations
        );
    }
    Ok(())
}
