//! Multi-pair loss of visibility with pump power and the squeezing it implies: Monte Carlo
//! visibility, fringe fit, inversion to r and a fit of r = C√P.

use spdc_studio::config::calibrated_c;
use spdc_studio::measurement::{estimate_squeezing, fit_visibility, multipair_visibility, visibility_scan, DetectorSpec};
use spdc_studio::polarization::{TwoQubitState, VisibilityBasis};

fn main() -> spdc_studio::Result<()> {
    let det = DetectorSpec::default();
    let c = calibrated_c();
    let basis = VisibilityBasis::DA;
    let mut data = Vec::new();
    for (k, p_mw) in [50.0f64, 150.0, 300.0, 450.0, 620.0].into_iter().enumerate() {
        let p = p_mw * 1e-3;
        let mc = multipair_visibility(c * p.sqrt(), &det, basis, 400_000, k as u64)?;
        // fringe with the Monte Carlo visibility, fitted as in the lab
        let scan = visibility_scan(&TwoQubitState::werner(mc.visibility)?, basis.fixed_angle(), 37, 1e5, 100 + k as u64)?;
        let fit = fit_visibility(&scan)?;
        println!("{p_mw:5.0} mW  V_MC {:.4} ± {:.4}  V_fit {:.4}  R² {:.4}", mc.visibility, mc.std_error, fit.visibility, fit.r_square);
        data.push((p, fit.visibility));
    }
    let est = estimate_squeezing(&data, &det, basis)?;
    println!("\nC true {c:.4}, fitted {:.4} W^-1/2", est.c);
    for pt in &est.points {
        println!("{:5.0} mW  r {:.3}  μ {:.4}  {:.2} dB", pt.pump_power * 1e3, pt.r, pt.mu, pt.squeezing_db);
    }
    Ok(())
}
