//! Declarative scenario files: one JSON document per experiment with an
//! explicit schema version. All decibel quantities carry a `_db` suffix and
//! convert as `10^(x/10)`; the noise power is normalized to 1 so the dB
//! fields are SNRs directly.

use anyhow::{bail, Context, Result};
use irs_regions_core::centralized::SolverSettings;
use irs_regions_core::channel::{GeometryConfig, PowerConfig, Sizes};
use serde::Deserialize;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    MacRegions,
    BcRegions,
    CommonRateSweep,
    ElementAllocationSweep,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    /// AP-to-user-1 ground distance in meters.
    pub d1_m: f64,
    /// AP-to-user-2 ground distance in meters.
    pub d2_m: f64,
    /// Reference path gain at 1 m.
    #[serde(default = "default_gamma0_db")]
    pub gamma0_db: f64,
    #[serde(default = "default_exp_direct")]
    pub path_loss_exponent_direct: f64,
    #[serde(default = "default_exp_reflected")]
    pub path_loss_exponent_reflected: f64,
}

fn default_gamma0_db() -> f64 {
    -30.0
}
fn default_exp_direct() -> f64 {
    3.5
}
fn default_exp_reflected() -> f64 {
    3.0
}

impl GeometrySection {
    pub fn build(&self) -> Result<GeometryConfig> {
        GeometryConfig::from_distances(
            self.d1_m,
            self.d2_m,
            db_to_linear(self.gamma0_db),
            self.path_loss_exponent_direct,
            self.path_loss_exponent_reflected,
        )
        .map_err(|e| anyhow::anyhow!("geometry: {e}"))
    }

    pub fn with_d2(&self, d2_m: f64) -> Self {
        Self { d2_m, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizesSection {
    pub m: usize,
    pub m1: usize,
    pub m2: usize,
}

impl SizesSection {
    pub fn build(&self) -> Result<Sizes> {
        Sizes::new(self.m, self.m1, self.m2).map_err(|e| anyhow::anyhow!("sizes: {e}"))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowersSection {
    /// Uplink per-user transmit SNRs.
    #[serde(default = "default_user_snr_db")]
    pub snr1_db: f64,
    #[serde(default = "default_user_snr_db")]
    pub snr2_db: f64,
    /// Downlink sum-power SNR.
    #[serde(default = "default_sum_snr_db")]
    pub sum_snr_db: f64,
}

fn default_user_snr_db() -> f64 {
    120.0
}
fn default_sum_snr_db() -> f64 {
    123.0
}

impl Default for PowersSection {
    fn default() -> Self {
        Self {
            snr1_db: default_user_snr_db(),
            snr2_db: default_user_snr_db(),
            sum_snr_db: default_sum_snr_db(),
        }
    }
}

impl PowersSection {
    pub fn uplink(&self) -> Result<PowerConfig> {
        PowerConfig::new(db_to_linear(self.snr1_db), db_to_linear(self.snr2_db), 1.0)
            .map_err(|e| anyhow::anyhow!("powers: {e}"))
    }

    pub fn downlink_total(&self) -> f64 {
        db_to_linear(self.sum_snr_db)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub rate_ratio_grid: usize,
    pub power_split_grid: usize,
    pub oracle_phase_grid: usize,
    pub random_inits: usize,
    pub max_sweeps: usize,
    pub sweep_rel_tol: f64,
    pub init_seed: u64,
    pub fdma_samples: usize,
    pub refine_top: usize,
    /// Relative duality-gap tolerance for the sum-rate relaxation.
    pub sdr_gap_tol: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let s = SolverSettings::default();
        Self {
            rate_ratio_grid: s.rate_ratio_grid,
            power_split_grid: s.power_split_grid,
            oracle_phase_grid: s.oracle_phase_grid,
            random_inits: s.random_inits,
            max_sweeps: s.max_sweeps,
            sweep_rel_tol: s.sweep_rel_tol,
            init_seed: s.init_seed,
            fdma_samples: s.fdma_samples,
            refine_top: s.refine_top,
            sdr_gap_tol: 1e-3,
        }
    }
}

impl SolverSection {
    pub fn build(&self) -> Result<SolverSettings> {
        let settings = SolverSettings {
            rate_ratio_grid: self.rate_ratio_grid,
            power_split_grid: self.power_split_grid,
            oracle_phase_grid: self.oracle_phase_grid,
            random_inits: self.random_inits,
            max_sweeps: self.max_sweeps,
            sweep_rel_tol: self.sweep_rel_tol,
            init_seed: self.init_seed,
            fdma_samples: self.fdma_samples,
            refine_top: self.refine_top,
        };
        settings
            .validate()
            .map_err(|e| anyhow::anyhow!("solver: {e}"))?;
        if !(self.sdr_gap_tol > 0.0) {
            bail!("solver: sdr_gap_tol must be positive");
        }
        Ok(settings)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// User-2 distances for the common-rate sweep, meters.
    pub d2_list_m: Vec<f64>,
    /// Element counts assigned to the second surface in the allocation
    /// sweep; defaults to 1..M-1.
    pub m2_list: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// Optional; when present it must agree with the invoked subcommand.
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    pub geometry: GeometrySection,
    pub sizes: SizesSection,
    #[serde(default)]
    pub powers: PowersSection,
    #[serde(default)]
    pub solver: SolverSection,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub sweep: SweepSection,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            );
        }
        if self.seeds.is_empty() {
            bail!("seed list must be non-empty");
        }
        self.geometry.build()?;
        self.sizes.build()?;
        self.powers.uplink()?;
        self.solver.build()?;
        for &m2 in &self.sweep.m2_list {
            if m2 == 0 || m2 >= self.sizes.m.max(1) {
                bail!("sweep.m2_list entries must lie in 1..M");
            }
        }
        Ok(())
    }

    pub fn expect_kind(&self, kind: ExperimentKind) -> Result<()> {
        match self.experiment {
            Some(k) if k != kind => bail!(
                "config declares a different experiment than the invoked subcommand"
            ),
            _ => Ok(()),
        }
    }
}

/// Parses `--seeds` values: comma-separated entries, each a single seed or
/// an inclusive range `a-b`.
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some((a, b)) = part.split_once('-') {
            let a: u64 = a.trim().parse().context("seed range start")?;
            let b: u64 = b.trim().parse().context("seed range end")?;
            if b < a {
                bail!("seed range {part} is reversed");
            }
            seeds.extend(a..=b);
        } else {
            seeds.push(part.parse().context("seed value")?);
        }
    }
    if seeds.is_empty() {
        bail!("--seeds produced an empty list");
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "geometry": { "d1_m": 500.0, "d2_m": 500.0 },
            "sizes": { "m": 4, "m1": 2, "m2": 2 },
            "seeds": [0, 1]
        })
    }

    #[test]
    fn minimal_config_round_trips_with_defaults() {
        let cfg: ScenarioConfig = serde_json::from_value(minimal_json()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.powers.snr1_db, 120.0);
        assert_eq!(cfg.solver.rate_ratio_grid, 100);
        let p = cfg.powers.uplink().unwrap();
        assert!((p.p1 - 1e12).abs() < 1.0);
    }

    #[test]
    fn db_conversion_is_pow_ten_over_ten() {
        assert!((db_to_linear(-30.0) - 1e-3).abs() < 1e-15);
        assert!((db_to_linear(123.0) - 10f64.powf(12.3)).abs() < 1.0);
    }

    #[test]
    fn schema_version_is_enforced() {
        let mut v = minimal_json();
        v["schema_version"] = serde_json::json!(2);
        let cfg: ScenarioConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_seed_list_rejected() {
        let mut v = minimal_json();
        v["seeds"] = serde_json::json!([]);
        let cfg: ScenarioConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut v = minimal_json();
        v["surprise"] = serde_json::json!(1);
        assert!(serde_json::from_value::<ScenarioConfig>(v).is_err());
    }

    #[test]
    fn seed_list_parsing() {
        assert_eq!(parse_seed_list("3").unwrap(), vec![3]);
        assert_eq!(parse_seed_list("0-3,7").unwrap(), vec![0, 1, 2, 3, 7]);
        assert!(parse_seed_list("5-2").is_err());
        assert!(parse_seed_list("").is_err());
    }
}
