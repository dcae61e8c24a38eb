use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spdc_studio::cli::{self, SimulatedState, TomographyInput};
use spdc_studio::config::RunConfig;
use spdc_studio::{Error, Result};

#[derive(Parser)]
#[command(name = "spdc-studio", version, about = "Entangled-photon source design and characterization")]
struct Args {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: config output_dir, else ./spdc-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the designed JSA and write jsa_real.csv, jsa_imag.csv, jsi.csv, summary.json.
    SimulateJsa {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Lobe overlaps and polarization state of a JSI grid (bundled fixture if --jsi is absent).
    AnalyzeJsi {
        #[arg(long)]
        jsi: Option<PathBuf>,
        #[arg(long, default_value_t = 1560.0)]
        cut_nm: f64,
    },
    /// MLE tomography from simulated or recorded counts.
    Tomography {
        /// psi-minus, paper-fixture or werner:<p>
        #[arg(long, conflicts_with_all = ["state", "records"])]
        simulate: Option<String>,
        /// Density matrix JSON to simulate counts from.
        #[arg(long, conflicts_with = "records")]
        state: Option<PathBuf>,
        /// Recorded counts CSV (label,counts,acquisition_scale).
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, default_value_t = 1e5)]
        n_per_setting: f64,
    },
    /// Multi-pair visibility scans and squeezing estimate at the given pump powers.
    Visibility {
        /// Comma-separated pump powers in mW.
        #[arg(long, default_value = "620")]
        powers: String,
    },
    /// Tabulate available outputs against the published values into report.md.
    Report,
}

fn threads_from_env() -> Result<()> {
    let Ok(v) = std::env::var("SPDC_STUDIO_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Error::InvalidInput(format!("SPDC_STUDIO_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Numeric(e.to_string()))
}

fn run(args: Args) -> Result<()> {
    threads_from_env()?;
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("spdc-out"));
    match args.command {
        Command::SimulateJsa { samples } => {
            if let Some(n) = samples {
                cfg.grid.samples = n;
            }
            let s = cli::simulate_jsa(&cfg, &out)?;
            println!(
                "overlap integral {:.4}, Schmidt purity {:.4}",
                s["overlap_integral"].as_f64().unwrap_or(f64::NAN),
                s["schmidt_purity"].as_f64().unwrap_or(f64::NAN)
            );
        }
        Command::AnalyzeJsi { jsi, cut_nm } => {
            let s = cli::analyze_jsi(jsi.as_deref(), cut_nm, &out)?;
            println!(
                "f12 {:.4}, concurrence {:.4}",
                s["f12"]["re"].as_f64().unwrap_or(f64::NAN),
                s["polarization"]["concurrence"].as_f64().unwrap_or(f64::NAN)
            );
        }
        Command::Tomography { simulate, state, records, n_per_setting } => {
            let input = match (simulate, state, records) {
                (_, _, Some(r)) => TomographyInput::Records(r),
                (_, Some(s), None) => TomographyInput::StateFile(s),
                (Some(name), None, None) => TomographyInput::Simulate(name.parse::<SimulatedState>()?),
                (None, None, None) => TomographyInput::Simulate(SimulatedState::PaperFixture),
            };
            let r = cli::tomography(&input, n_per_setting, cfg.seed, &out)?;
            println!(
                "purity {:.4}, concurrence {:.4}, fidelity {:.4}, S {:.4}",
                r["purity"].as_f64().unwrap_or(f64::NAN),
                r["concurrence"].as_f64().unwrap_or(f64::NAN),
                r["fidelity_psi_minus"].as_f64().unwrap_or(f64::NAN),
                r["chsh_s"].as_f64().unwrap_or(f64::NAN)
            );
        }
        Command::Visibility { powers } => {
            let p = cli::parse_powers(&powers)?;
            let s = cli::visibility(&cfg, &p, &out)?;
            println!("fitted C {:.4} W^-1/2", s["c_fit"].as_f64().unwrap_or(f64::NAN));
        }
        Command::Report => {
            print!("{}", cli::report(&out)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
