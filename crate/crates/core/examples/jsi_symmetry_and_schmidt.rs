//! Exchange symmetry and Schmidt spectrum of a JSA, comparing the default pump with one
//! narrowed to match the lobe width.

use spdc_studio::optics::{compute_jsa, FrequencyGrid, PmfMode, SourceSpec};
use spdc_studio::spectral::{overlap_integral, schmidt, single_lobe_purity, split_lobes_unchecked, Lobe, DEFAULT_CUT_WAVELENGTH};

fn main() -> spdc_studio::Result<()> {
    for (name, s) in [("default pump", SourceSpec::default()), ("matched pump", SourceSpec::pump_matched())] {
        let [lo, hi] = s.grid.window_nm;
        let grid = FrequencyGrid::from_wavelength_window(lo * 1e-9, hi * 1e-9, s.grid.samples)?;
        let jsa = compute_jsa(&grid, &s.crystal, &s.pump, &PmfMode::default())?;
        let sch = schmidt(&jsa)?;
        let lobes = split_lobes_unchecked(&jsa, DEFAULT_CUT_WAVELENGTH)?;
        println!("{name} ({:.1} nm)", s.pump.bandwidth_fwhm * 1e9);
        println!("  overlap integral  {:.5}", overlap_integral(&jsa)?);
        println!("  Schmidt purity    {:.4}  (K = {:.2})", sch.purity, sch.schmidt_number);
        println!("  first modes       {:?}", sch.coefficients.iter().take(4).map(|c| (c * 1e4).round() / 1e4).collect::<Vec<_>>());
        println!("  lobe purities     {:.4} {:.4}", single_lobe_purity(&lobes, Lobe::F1)?, single_lobe_purity(&lobes, Lobe::F2)?);
    }
    Ok(())
}
