//! KTP indices, the phase mismatch across the design window and the analytic PMF.

use spdc_studio::optics::{delta_k, pmf_analytic, refractive_index, Axis, CrystalSpec, PolarizationMap, Sellmeier};
use spdc_studio::omega_of_wavelength;

fn main() -> spdc_studio::Result<()> {
    for wl in [780e-9, 1548e-9, 1560e-9, 1572e-9] {
        println!(
            "{:6.0} nm  n_y {:.5}  n_z {:.5}",
            wl * 1e9,
            refractive_index(Axis::Y, wl, 23.0)?,
            refractive_index(Axis::Z, wl, 23.0)?
        );
    }
    let c = CrystalSpec::default();
    let map = PolarizationMap::default();
    println!("\nsignal nm   Δk (1/m) on the pump-energy line");
    for s_nm in [1540.0, 1548.0, 1556.0, 1560.0, 1564.0, 1572.0, 1580.0] {
        // ω_i fixed by energy conservation with a 780 nm pump
        let ws = omega_of_wavelength(s_nm * 1e-9);
        let wi = omega_of_wavelength(780e-9) - ws;
        println!("{s_nm:9.0}   {:10.1}", delta_k(Sellmeier::ktp(), ws, wi, &c, map)?);
    }
    println!("\nPMF: Gaussians of width σ = {} at ±a = {} with opposite signs", c.pmf_sigma, c.pmf_a);
    for x in [-4000.0, -2700.0, -1000.0, 0.0, 1000.0, 2700.0, 4000.0] {
        println!("{x:8.0}  {:+.5}", pmf_analytic(x, c.pmf_sigma, c.pmf_a));
    }
    Ok(())
}
