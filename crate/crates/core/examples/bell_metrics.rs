//! Purity, concurrence, fidelity and CHSH for Bell, Werner and the bundled tomography state.

use spdc_studio::fixtures::qst_fixture_state;
use spdc_studio::polarization::{bell_state, chsh_fixed_angles, metric_report, predicted_visibility, BellKind, TwoQubitState, VisibilityBasis};

fn main() -> spdc_studio::Result<()> {
    let psi = bell_state(BellKind::PsiMinus);
    let states = [
        ("Ψ⁻".to_string(), psi.clone()),
        ("Werner 0.5".to_string(), TwoQubitState::werner(0.5)?),
        ("Werner 0.9".to_string(), TwoQubitState::werner(0.9)?),
        ("I/4".to_string(), TwoQubitState::maximally_mixed()),
        ("fixture".to_string(), qst_fixture_state()),
    ];
    println!("{:11} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}", "state", "P", "C", "F", "S", "S(fix)", "V_D");
    for (name, rho) in &states {
        let m = metric_report(rho, &psi)?;
        println!(
            "{name:11} {:7.4} {:7.4} {:7.4} {:7.4} {:7.4} {:7.4}",
            m.purity,
            m.concurrence,
            m.fidelity_to_target,
            m.chsh_s,
            chsh_fixed_angles(rho),
            predicted_visibility(rho, VisibilityBasis::DA)?
        );
    }
    Ok(())
}
