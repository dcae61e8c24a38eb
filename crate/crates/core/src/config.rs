//! Run configuration ingested from JSON. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{r_of_mu, DetectorSpec, FiberSpec, RateRecord};
use crate::optics::{CrystalSpec, GridSpec, PmfCoordinate, PumpSpec, SourceSpec};
use crate::published;

pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VisibilitySettings {
    /// r = c·√P (P in W). Defaults to the value that gives μ = 0.1 at 620 mW.
    pub c: f64,
    pub pairs_per_point: f64,
    pub points_per_scan: usize,
    pub mc_trials: u64,
}

impl Default for VisibilitySettings {
    fn default() -> Self {
        VisibilitySettings {
            c: calibrated_c(),
            pairs_per_point: 1e5,
            points_per_scan: 37,
            mc_trials: 400_000,
        }
    }
}

/// C such that μ(620 mW) = 0.1.
pub fn calibrated_c() -> f64 {
    r_of_mu(published::MU_AT_MAX_POWER) / published::MAX_PUMP_POWER.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pump: PumpSpec,
    pub crystal: CrystalSpec,
    pub grid: GridSpec,
    pub pmf_coordinate: PmfCoordinate,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub fiber: FiberSpec,
    pub detector: DetectorSpec,
    pub rates: RateRecord,
    pub visibility: VisibilitySettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            pump: PumpSpec::default(),
            crystal: CrystalSpec::default(),
            grid: GridSpec::default(),
            pmf_coordinate: PmfCoordinate::Design,
            seed: 0,
            output_dir: None,
            fiber: FiberSpec::default(),
            detector: DetectorSpec::default(),
            rates: RateRecord {
                singles_1: published::SINGLES_RATE,
                singles_2: published::SINGLES_RATE,
                coincidences: published::COINCIDENCE_RATE,
                pump_power: 1e-3,
            },
            visibility: VisibilitySettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json_str(text: &str, origin: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            Error::InvalidInput(format!("{origin}: {e}"))
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn source(&self) -> SourceSpec {
        SourceSpec {
            pump: self.pump.clone(),
            crystal: self.crystal.clone(),
            grid: self.grid.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.source().validate()?;
        if self.grid.samples < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "grid too coarse: grid.samples = {} (minimum {MIN_SAMPLES})",
                self.grid.samples
            )));
        }
        let [lo, hi] = self.grid.window_nm;
        let (l1, l2) = crate::optics::DesignMap::DEFAULT_LOBES_NM;
        if !(lo > 0.0 && hi > lo) || lo > l1 - 13.0 || hi < l2 + 13.0 {
            return Err(Error::InvalidInput(format!(
                "grid.window_nm [{lo}, {hi}] must cover both lobes ({} to {} nm)",
                l1 - 13.0,
                l2 + 13.0
            )));
        }
        self.fiber.validate()?;
        self.detector.validate()?;
        Ok(())
    }
}

/// Independent, named sub-seed derived from the run seed.
pub fn sub_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a of the name, mixed with the seed by a SplitMix64 finalizer
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
