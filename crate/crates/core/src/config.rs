//! Committed default experiment configurations and the key-value override
//! file.
//!
//! Defaults pin every seed, range, and threshold so experiment runs are
//! reproducible out of the box. Sampling ranges are chosen so that realized
//! normalized currents stay inside the sigmoid output range; see the README
//! for the reasoning behind the per-class resistance minima.

use serde::Deserialize;
use std::path::Path;

use crate::circuit::CircuitClass;
use crate::error::{Error, Result};
use crate::experiment::{AmpConfig, ExperimentConfig, OhmConfig, SweepConfig, SweepCriterion};
use crate::mlp::TrainConfig;
use crate::pipeline::{SamplerConfig, ValueRange, DEFAULT_NOISE_OFFSET};

/// Normalized RMSE bar for the easy classes (1a, 2a, amplifiers, Ohm study).
pub const RMSE_THRESHOLD_SIMPLE: f64 = 0.05;
/// Normalized RMSE bar for the multi-loop classes (1b, 1c, 2b, 2c).
pub const RMSE_THRESHOLD_COMPLEX: f64 = 0.15;

fn class_index(class: CircuitClass) -> u64 {
    CircuitClass::ALL
        .iter()
        .position(|c| *c == class)
        .expect("class is in ALL") as u64
}

/// Committed seeds for a class experiment: (sample, train, split, init).
fn default_seeds(class: CircuitClass) -> (u64, u64, u64, u64) {
    let base = (class_index(class) + 1) * 100;
    (base + 1, base + 2, base + 3, base + 4)
}

/// Seeds derived from a single CLI `--seed` value.
pub fn derive_seeds(base: u64) -> (u64, u64, u64, u64) {
    (
        base,
        base.wrapping_add(1),
        base.wrapping_add(2),
        base.wrapping_add(3),
    )
}

fn default_sampler(class: CircuitClass) -> SamplerConfig {
    let (sample_seed, _, _, _) = default_seeds(class);
    // Resistance minima keep worst-case currents below the sigmoid ceiling:
    // a lone branch sees at most E_max / R_min = 10/11 of 0.1 E_max.
    let r_min = if class.is_amplifier() { 3.0 } else { 11.0 };
    let count = match class {
        CircuitClass::ResistiveOneLoop => 50,
        CircuitClass::LcrOneLoop => 200,
        CircuitClass::ResistiveTwoLoop => 200,
        CircuitClass::ResistiveFourLoop => 300,
        CircuitClass::LcrTwoLoop => 300,
        CircuitClass::LcrFourLoop => 400,
        CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => 200,
    };
    SamplerConfig {
        class,
        count,
        r_range: ValueRange::new(r_min, 50.0, 0.5),
        xl_range: ValueRange::new(0.0, 50.0, 0.5),
        xc_range: ValueRange::new(0.0, 50.0, 0.5),
        e_range: ValueRange::new(1.0, 20.0, 0.5),
        open_prob: 0.0,
        short_prob: 0.0,
        zero_volt_prob: 0.0,
        seed: sample_seed,
    }
}

/// Committed default configuration for one circuit-class experiment.
pub fn default_class_experiment(class: CircuitClass) -> ExperimentConfig {
    let (_, train_seed, split_seed, init_seed) = default_seeds(class);
    let threshold = match class {
        CircuitClass::ResistiveTwoLoop
        | CircuitClass::ResistiveFourLoop
        | CircuitClass::LcrTwoLoop
        | CircuitClass::LcrFourLoop => RMSE_THRESHOLD_COMPLEX,
        _ => RMSE_THRESHOLD_SIMPLE,
    };
    ExperimentConfig {
        sampler: default_sampler(class),
        train: TrainConfig {
            seed: train_seed,
            ..TrainConfig::default()
        },
        test_fraction: 0.2,
        split_seed,
        init_seed,
        noise_offset: DEFAULT_NOISE_OFFSET,
        noise_all: false,
        rmse_threshold: threshold,
    }
}

/// Committed default Ohm's-law grid: 5 voltages x 19 resistances, with the
/// (V=10, R=5) point always held out. The declared E_max of 30 keeps the
/// largest grid current (12.5/5 = 2.5 A) at a normalized 0.833.
pub fn default_ohm_config() -> OhmConfig {
    OhmConfig {
        v_values: ValueRange::new(2.5, 12.5, 2.5).values(),
        r_values: ValueRange::new(5.0, 50.0, 2.5).values(),
        context_r_max: 50.0,
        context_e_max: 30.0,
        test_fraction: 0.15,
        forced_test_points: vec![(10.0, 5.0)],
        split_seed: 903,
        init_seed: 904,
        train: TrainConfig {
            seed: 902,
            ..TrainConfig::default()
        },
        noise_offset: DEFAULT_NOISE_OFFSET,
        noise_all: false,
        rmse_threshold: RMSE_THRESHOLD_SIMPLE,
    }
}

/// Committed default amplifier study over shared (R1, R6, V) samples.
pub fn default_amp_config() -> AmpConfig {
    AmpConfig {
        sampler: default_sampler(CircuitClass::AmpElectrical),
        train: TrainConfig {
            seed: 702,
            ..TrainConfig::default()
        },
        test_fraction: 0.2,
        split_seed: 703,
        init_seed: 704,
        noise_offset: DEFAULT_NOISE_OFFSET,
        noise_all: false,
        rmse_threshold: RMSE_THRESHOLD_SIMPLE,
    }
}

/// Training study behind the default sweep: the Ohm network fitted along
/// V = 10 over R in [2, 20]. The declared E_max of 55 keeps the steepest
/// current (5 A at R = 2) at a normalized 0.909.
pub fn default_sweep_training() -> OhmConfig {
    OhmConfig {
        v_values: vec![10.0],
        r_values: ValueRange::new(2.0, 20.0, 0.5).values(),
        context_r_max: 20.0,
        context_e_max: 55.0,
        test_fraction: 0.1,
        forced_test_points: vec![],
        split_seed: 953,
        init_seed: 954,
        train: TrainConfig {
            seed: 952,
            cycles: 20_000,
            ..TrainConfig::default()
        },
        noise_offset: 0.0,
        noise_all: false,
        rmse_threshold: RMSE_THRESHOLD_SIMPLE,
    }
}

/// Committed default sweep: class 1a at V = 10 over R in [2, 20], filtering
/// to currents inside [1.9, 2.1] A (the R = 5 neighborhood).
pub fn default_sweep_config() -> SweepConfig {
    SweepConfig {
        class: CircuitClass::ResistiveOneLoop,
        r_range: ValueRange::new(2.0, 20.0, 0.5),
        xl_range: ValueRange::new(0.0, 0.0, 1.0),
        xc_range: ValueRange::new(0.0, 0.0, 1.0),
        e_range: ValueRange::new(10.0, 10.0, 1.0),
        criterion: SweepCriterion {
            current_min: 1.9,
            current_max: 2.1,
            phase_min: None,
            phase_max: None,
        },
        cap: 1_000_000,
    }
}

/// Optional overrides parsed from the `key = value` config file. Every key
/// mirrors a field of the sampler, trainer, or experiment configurations.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub class: Option<String>,
    pub count: Option<usize>,

    pub sample_seed: Option<u64>,
    pub train_seed: Option<u64>,
    pub split_seed: Option<u64>,
    pub init_seed: Option<u64>,

    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_step: Option<f64>,
    pub xl_min: Option<f64>,
    pub xl_max: Option<f64>,
    pub xl_step: Option<f64>,
    pub xc_min: Option<f64>,
    pub xc_max: Option<f64>,
    pub xc_step: Option<f64>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub e_step: Option<f64>,

    pub open_prob: Option<f64>,
    pub short_prob: Option<f64>,
    pub zero_volt_prob: Option<f64>,

    pub test_fraction: Option<f64>,
    pub learning_rate: Option<f64>,
    pub cycles: Option<usize>,
    pub shuffle_each_cycle: Option<bool>,
    pub noise_offset: Option<f64>,
    pub noise_all: Option<bool>,
    pub rmse_threshold: Option<f64>,

    // Ohm study grid and declared context maxima.
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
    pub v_step: Option<f64>,
    pub context_r_max: Option<f64>,
    pub context_e_max: Option<f64>,

    // Sweep band and enumeration cap.
    pub current_min: Option<f64>,
    pub current_max: Option<f64>,
    pub phase_min: Option<f64>,
    pub phase_max: Option<f64>,
    pub cap: Option<u64>,
}

pub fn load_overrides(path: &Path) -> Result<ConfigOverrides> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

impl ConfigOverrides {
    pub fn class(&self) -> Result<Option<CircuitClass>> {
        self.class
            .as_deref()
            .map(CircuitClass::from_id)
            .transpose()
    }

    fn apply_range(range: &mut ValueRange, min: Option<f64>, max: Option<f64>, step: Option<f64>) {
        if let Some(v) = min {
            range.min = v;
        }
        if let Some(v) = max {
            range.max = v;
        }
        if let Some(v) = step {
            range.step = v;
        }
    }

    pub fn apply_sampler(&self, cfg: &mut SamplerConfig) {
        if let Some(v) = self.count {
            cfg.count = v;
        }
        if let Some(v) = self.sample_seed {
            cfg.seed = v;
        }
        Self::apply_range(&mut cfg.r_range, self.r_min, self.r_max, self.r_step);
        Self::apply_range(&mut cfg.xl_range, self.xl_min, self.xl_max, self.xl_step);
        Self::apply_range(&mut cfg.xc_range, self.xc_min, self.xc_max, self.xc_step);
        Self::apply_range(&mut cfg.e_range, self.e_min, self.e_max, self.e_step);
        if let Some(v) = self.open_prob {
            cfg.open_prob = v;
        }
        if let Some(v) = self.short_prob {
            cfg.short_prob = v;
        }
        if let Some(v) = self.zero_volt_prob {
            cfg.zero_volt_prob = v;
        }
    }

    pub fn apply_train(&self, cfg: &mut TrainConfig) {
        if let Some(v) = self.learning_rate {
            cfg.learning_rate = v;
        }
        if let Some(v) = self.cycles {
            cfg.cycles = v;
        }
        if let Some(v) = self.train_seed {
            cfg.seed = v;
        }
        if let Some(v) = self.shuffle_each_cycle {
            cfg.shuffle_each_cycle = v;
        }
    }

    pub fn apply_experiment(&self, cfg: &mut ExperimentConfig) {
        self.apply_sampler(&mut cfg.sampler);
        self.apply_train(&mut cfg.train);
        if let Some(v) = self.test_fraction {
            cfg.test_fraction = v;
        }
        if let Some(v) = self.split_seed {
            cfg.split_seed = v;
        }
        if let Some(v) = self.init_seed {
            cfg.init_seed = v;
        }
        if let Some(v) = self.noise_offset {
            cfg.noise_offset = v;
        }
        if let Some(v) = self.noise_all {
            cfg.noise_all = v;
        }
        if let Some(v) = self.rmse_threshold {
            cfg.rmse_threshold = v;
        }
    }

    pub fn apply_ohm(&self, cfg: &mut OhmConfig) {
        let mut v_range = ValueRange::new(0.0, 0.0, 1.0);
        let mut have_v = false;
        if let (Some(min), Some(max)) = (self.v_min, self.v_max) {
            v_range = ValueRange::new(min, max, self.v_step.unwrap_or(2.5));
            have_v = true;
        }
        if have_v {
            cfg.v_values = v_range.values();
        }
        if let (Some(min), Some(max)) = (self.r_min, self.r_max) {
            cfg.r_values = ValueRange::new(min, max, self.r_step.unwrap_or(2.5)).values();
        }
        if let Some(v) = self.context_r_max {
            cfg.context_r_max = v;
        }
        if let Some(v) = self.context_e_max {
            cfg.context_e_max = v;
        }
        if let Some(v) = self.test_fraction {
            cfg.test_fraction = v;
        }
        if let Some(v) = self.split_seed {
            cfg.split_seed = v;
        }
        if let Some(v) = self.init_seed {
            cfg.init_seed = v;
        }
        self.apply_train(&mut cfg.train);
        if let Some(v) = self.noise_offset {
            cfg.noise_offset = v;
        }
        if let Some(v) = self.noise_all {
            cfg.noise_all = v;
        }
        if let Some(v) = self.rmse_threshold {
            cfg.rmse_threshold = v;
        }
    }

    pub fn apply_amp(&self, cfg: &mut AmpConfig) {
        self.apply_sampler(&mut cfg.sampler);
        self.apply_train(&mut cfg.train);
        if let Some(v) = self.test_fraction {
            cfg.test_fraction = v;
        }
        if let Some(v) = self.split_seed {
            cfg.split_seed = v;
        }
        if let Some(v) = self.init_seed {
            cfg.init_seed = v;
        }
        if let Some(v) = self.noise_offset {
            cfg.noise_offset = v;
        }
        if let Some(v) = self.noise_all {
            cfg.noise_all = v;
        }
        if let Some(v) = self.rmse_threshold {
            cfg.rmse_threshold = v;
        }
    }

    pub fn apply_sweep(&self, cfg: &mut SweepConfig) -> Result<()> {
        if let Some(class) = self.class()? {
            cfg.class = class;
        }
        Self::apply_range(&mut cfg.r_range, self.r_min, self.r_max, self.r_step);
        Self::apply_range(&mut cfg.xl_range, self.xl_min, self.xl_max, self.xl_step);
        Self::apply_range(&mut cfg.xc_range, self.xc_min, self.xc_max, self.xc_step);
        Self::apply_range(&mut cfg.e_range, self.e_min, self.e_max, self.e_step);
        if let Some(v) = self.current_min {
            cfg.criterion.current_min = v;
        }
        if let Some(v) = self.current_max {
            cfg.criterion.current_max = v;
        }
        if self.phase_min.is_some() || self.phase_max.is_some() {
            cfg.criterion.phase_min = self.phase_min;
            cfg.criterion.phase_max = self.phase_max;
        }
        if let Some(v) = self.cap {
            cfg.cap = v;
        }
        Ok(())
    }
}
