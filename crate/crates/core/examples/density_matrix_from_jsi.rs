//! Polarization state of the bundled measured-like JSI: lobe overlaps f_mn, the density
//! matrix they define, and its entanglement figures.

use spdc_studio::fixtures::measured_jsi;
use spdc_studio::polarization::{bell_state, concurrence, fidelity, purity, rho_from_lobes, BellKind};
use spdc_studio::spectral::{
    jsa_from_jsi, lobe_overlap_matrix, overlap_integral, schmidt, split_lobes, PhaseRule,
    DEFAULT_CUT_WAVELENGTH,
};

fn main() -> spdc_studio::Result<()> {
    let jsi = measured_jsi();
    // intensity only; the amplitude takes √I with a π step between the lobes
    let jsa = jsa_from_jsi(&jsi, PhaseRule::PiBetweenLobes)?;
    println!("overlap integral  {:.4}", overlap_integral(&jsa)?);
    println!("Schmidt purity    {:.4}", schmidt(&jsa)?.purity);

    let lobes = split_lobes(&jsa, DEFAULT_CUT_WAVELENGTH)?;
    let f = lobe_overlap_matrix(&lobes)?;
    println!("f11 {:.4}  f22 {:.4}  f12 {:.4}{:+.4}i", f[(0, 0)].re, f[(1, 1)].re, f[(0, 1)].re, f[(0, 1)].im);

    let rho = rho_from_lobes(&f)?;
    println!("concurrence       {:.4}", concurrence(&rho)?);
    println!("purity            {:.4}", purity(&rho));
    println!("fidelity to Ψ⁻    {:.4}", fidelity(&rho, &bell_state(BellKind::PsiMinus)));
    Ok(())
}
