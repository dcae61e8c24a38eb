//! Every CLI stage run in-process into one output directory, followed by the report.

use spdc_studio::cli::{self, SimulatedState, TomographyInput};
use spdc_studio::config::RunConfig;

fn main() -> spdc_studio::Result<()> {
    let out = std::env::temp_dir().join("spdc-studio-full-pipeline");
    let cfg = RunConfig::default();
    cli::simulate_jsa(&cfg, &out)?;
    cli::analyze_jsi(None, 1560.0, &out)?;
    cli::tomography(&TomographyInput::Simulate(SimulatedState::PaperFixture), 1e5, cfg.seed, &out)?;
    cli::visibility(&cfg, &[620.0], &out)?;
    print!("{}", cli::report(&out)?);
    println!("\noutputs in {}", out.display());
    Ok(())
}
