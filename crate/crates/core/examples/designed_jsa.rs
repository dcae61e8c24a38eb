//! The designed two-lobe JSA of the default source: lobe positions and widths, exchange
//! symmetry, Schmidt purity and the residual walk-off after the compensator.

use spdc_studio::optics::{compute_jsa, walkoff_residual, FrequencyGrid, PmfMode, Sellmeier, SourceSpec};
use spdc_studio::spectral::{lobe_stats, near_cut_fraction, overlap_integral, schmidt, split_lobes_unchecked, DEFAULT_CUT_WAVELENGTH};

fn main() -> spdc_studio::Result<()> {
    let s = SourceSpec::default();
    let [lo, hi] = s.grid.window_nm;
    let grid = FrequencyGrid::from_wavelength_window(lo * 1e-9, hi * 1e-9, s.grid.samples)?;
    let jsa = compute_jsa(&grid, &s.crystal, &s.pump, &PmfMode::default())?;

    let lobes = split_lobes_unchecked(&jsa, DEFAULT_CUT_WAVELENGTH)?;
    for (name, l) in [("f1", &lobes.f1), ("f2", &lobes.f2)] {
        let st = lobe_stats(l);
        println!(
            "{name}: signal {:.2} nm (FWHM {:.2}), idler {:.2} nm (FWHM {:.2}), weight {:.3}",
            st.centroid_signal_nm, st.fwhm_signal_nm, st.centroid_idler_nm, st.fwhm_idler_nm, st.weight
        );
    }
    println!("intensity within 1 nm of the cut  {:.2}%", 100.0 * near_cut_fraction(&jsa, DEFAULT_CUT_WAVELENGTH, 1e-9));
    println!("overlap integral                  {:.5}", overlap_integral(&jsa)?);
    println!("Schmidt purity                    {:.4}", schmidt(&jsa)?.purity);
    println!("walk-off residual                 {:.2} fs", walkoff_residual(Sellmeier::ktp(), &s.crystal)? * 1e15);
    Ok(())
}
