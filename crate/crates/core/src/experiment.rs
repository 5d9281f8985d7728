//! Experiment runners: per-class train/evaluate pipelines, the Ohm's-law
//! study, the electrical/electronic amplifier pair, and the quantized
//! design-space sweep with band filtering.

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitClass, CircuitInstance};
use crate::error::{Error, Result};
use crate::mlp::{train, NetworkWeights, TrainConfig};
use crate::pipeline::{
    apply_noise_offset, circuit_from_element_values, denormalize_outputs, features_of,
    generate_dataset, generate_raw_samples, normalize_sample, split_train_test, Dataset,
    NormalizationContext, NormalizedSample, RawSample, SamplerConfig, ValueRange,
};
use crate::report::{ExperimentReport, ReportMetrics, RowRecord};
use crate::solver::{solve_amplifier_electronic, solve_ohm, BranchResponse};

/// Everything needed to run one class experiment end to end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sampler: SamplerConfig,
    pub train: TrainConfig,
    pub test_fraction: f64,
    pub split_seed: u64,
    pub init_seed: u64,
    /// Offset added to training rows; test targets stay exact unless
    /// `noise_all` restores the literal add-to-everything behavior.
    pub noise_offset: f64,
    pub noise_all: bool,
    /// Held-out normalized RMSE the experiment is expected to reach.
    pub rmse_threshold: f64,
}

/// Artifacts of a finished experiment.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub dataset: Dataset,
    pub network: NetworkWeights,
    pub report: ExperimentReport,
}

/// generate -> split -> train -> predict held-out rows -> compare to the
/// hidden oracle targets. Deterministic for fixed seeds.
pub fn run_class_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let dataset = generate_dataset(&cfg.sampler)?;
    run_on_dataset(cfg, dataset)
}

fn run_on_dataset(cfg: &ExperimentConfig, dataset: Dataset) -> Result<ExperimentOutcome> {
    let (train_set, test_set) = split_train_test(&dataset, cfg.test_fraction, cfg.split_seed)?;
    finish_experiment(cfg, dataset, train_set, test_set)
}

fn finish_experiment(
    cfg: &ExperimentConfig,
    dataset: Dataset,
    train_set: Dataset,
    test_set: Dataset,
) -> Result<ExperimentOutcome> {
    let noisy_train = apply_noise_offset(&train_set, cfg.noise_offset);
    let eval_set = if cfg.noise_all {
        apply_noise_offset(&test_set, cfg.noise_offset)
    } else {
        test_set
    };

    let arch = dataset.class.architecture();
    let mut network = NetworkWeights::init(&arch, cfg.init_seed);
    let train_report = train(&mut network, &noisy_train, &cfg.train)?;

    let mut rows = Vec::with_capacity(eval_set.len());
    for sample in &eval_set.rows {
        let predicted_norm = network.forward(&sample.features)?;
        let predicted = denormalize_outputs(&predicted_norm, &dataset.context);
        let oracle = denormalize_outputs(&sample.targets, &dataset.context);
        rows.push(RowRecord {
            predicted_norm,
            target_norm: sample.targets.clone(),
            predicted,
            oracle,
        });
    }

    let report = ExperimentReport {
        class: dataset.class,
        train_count: noisy_train.len(),
        test_count: rows.len(),
        saturated_targets: dataset.saturated_target_count(),
        train_report,
        metrics: ReportMetrics::from_rows(&rows),
        rows,
    };
    Ok(ExperimentOutcome {
        dataset,
        network,
        report,
    })
}

/// The Ohm's-law study: a quantized (V, R) grid with held-out points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OhmConfig {
    pub v_values: Vec<f64>,
    pub r_values: Vec<f64>,
    /// Declared range maxima backing the normalization context. `e_max` may
    /// exceed the largest grid voltage to keep currents inside the sigmoid
    /// output range.
    pub context_r_max: f64,
    pub context_e_max: f64,
    pub test_fraction: f64,
    /// Grid points that are always held out, e.g. the (V=10, R=5) probe.
    pub forced_test_points: Vec<(f64, f64)>,
    pub split_seed: u64,
    pub init_seed: u64,
    pub train: TrainConfig,
    pub noise_offset: f64,
    pub noise_all: bool,
    pub rmse_threshold: f64,
}

impl OhmConfig {
    pub fn context(&self) -> NormalizationContext {
        NormalizationContext {
            r_max: self.context_r_max,
            xl_max: 1.0,
            xc_max: 1.0,
            e_max: self.context_e_max,
        }
    }

    /// Largest normalized current the grid can produce. Keeping this below 1
    /// is what makes the study well-posed for a sigmoid output.
    pub fn max_normalized_current(&self) -> f64 {
        let v_max = self.v_values.iter().cloned().fold(0.0, f64::max);
        let r_min = self.r_values.iter().cloned().fold(f64::INFINITY, f64::min);
        (v_max / r_min) / (0.1 * self.context_e_max)
    }
}

/// Builds the (V, R) grid dataset and trains the Ohm's-law network on it,
/// holding out the forced points plus a seeded fraction of the grid.
pub fn run_ohm_experiment(cfg: &OhmConfig) -> Result<ExperimentOutcome> {
    if cfg.v_values.is_empty() || cfg.r_values.is_empty() {
        return Err(Error::Config("ohm grid must be nonempty".into()));
    }
    let ctx = cfg.context();
    ctx.validate()?;

    let mut rows = Vec::new();
    let mut grid = Vec::new();
    for &v in &cfg.v_values {
        for &r in &cfg.r_values {
            let current = solve_ohm(v, r)?;
            rows.push(NormalizedSample {
                features: vec![r / ctx.r_max, v / ctx.e_max],
                targets: vec![current / (0.1 * ctx.e_max)],
            });
            grid.push((v, r));
        }
    }
    let dataset = Dataset {
        class: CircuitClass::ResistiveOneLoop,
        seed: cfg.split_seed,
        context: ctx,
        rows,
    };

    let mut forced = Vec::new();
    for &(v, r) in &cfg.forced_test_points {
        let index = grid
            .iter()
            .position(|&(gv, gr)| (gv - v).abs() < 1e-9 && (gr - r).abs() < 1e-9)
            .ok_or_else(|| {
                Error::Config(format!("forced test point (V={v}, R={r}) is not on the grid"))
            })?;
        forced.push(index);
    }
    let (train_set, test_set) = split_with_forced(&dataset, cfg.test_fraction, cfg.split_seed, &forced)?;

    let class_cfg = ExperimentConfig {
        sampler: placeholder_sampler(CircuitClass::ResistiveOneLoop, cfg.split_seed),
        train: cfg.train.clone(),
        test_fraction: cfg.test_fraction,
        split_seed: cfg.split_seed,
        init_seed: cfg.init_seed,
        noise_offset: cfg.noise_offset,
        noise_all: cfg.noise_all,
        rmse_threshold: cfg.rmse_threshold,
    };
    finish_experiment(&class_cfg, dataset, train_set, test_set)
}

/// Seeded split that always places `forced` indices in the test set.
fn split_with_forced(
    ds: &Dataset,
    test_fraction: f64,
    seed: u64,
    forced: &[usize],
) -> Result<(Dataset, Dataset)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let n = ds.rows.len();
    let mut order: Vec<usize> = (0..n).filter(|i| !forced.contains(i)).collect();
    let m = order.len();
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let want_test = ((n as f64) * test_fraction).round() as usize;
    let extra = want_test.saturating_sub(forced.len()).min(m);

    let mut test_indices: Vec<usize> = forced.to_vec();
    test_indices.extend(&order[..extra]);
    test_indices.sort_unstable();
    test_indices.dedup();
    let mut train_indices: Vec<usize> =
        (0..n).filter(|i| !test_indices.contains(i)).collect();
    train_indices.sort_unstable();

    let pick = |indices: &[usize]| Dataset {
        class: ds.class,
        seed: ds.seed,
        context: ds.context,
        rows: indices.iter().map(|&i| ds.rows[i].clone()).collect(),
    };
    Ok((pick(&train_indices), pick(&test_indices)))
}

/// Sampler stub for experiments whose dataset is built directly (the class
/// field and seed are the only parts that matter downstream).
fn placeholder_sampler(class: CircuitClass, seed: u64) -> SamplerConfig {
    SamplerConfig {
        class,
        count: 0,
        r_range: ValueRange::new(1.0, 50.0, 0.5),
        xl_range: ValueRange::new(0.0, 50.0, 0.5),
        xc_range: ValueRange::new(0.0, 50.0, 0.5),
        e_range: ValueRange::new(1.0, 20.0, 0.5),
        open_prob: 0.0,
        short_prob: 0.0,
        zero_volt_prob: 0.0,
        seed,
    }
}

/// Paired amplifier study sharing one set of (R1, R6, V) samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmpConfig {
    pub sampler: SamplerConfig,
    pub train: TrainConfig,
    pub test_fraction: f64,
    pub split_seed: u64,
    pub init_seed: u64,
    pub noise_offset: f64,
    pub noise_all: bool,
    pub rmse_threshold: f64,
}

#[derive(Debug, Clone)]
pub struct AmpOutcome {
    pub electrical: ExperimentOutcome,
    pub electronic: ExperimentOutcome,
}

/// Trains two independent networks, one per amplifier model, on datasets
/// that share the feature side row for row.
pub fn run_amplifier_experiment(cfg: &AmpConfig) -> Result<AmpOutcome> {
    let mut sampler = cfg.sampler.clone();
    sampler.class = CircuitClass::AmpElectrical;
    let raw_samples = generate_raw_samples(&sampler)?;
    let ctx = sampler.normalization_context();

    let electrical_rows: Vec<NormalizedSample> = raw_samples
        .iter()
        .map(|raw| normalize_sample(raw, &ctx))
        .collect();
    let electronic_rows: Vec<NormalizedSample> = raw_samples
        .iter()
        .map(|raw| {
            let branches = &raw.circuit.branches;
            let circuit = CircuitInstance {
                class: CircuitClass::AmpElectronic,
                branches: branches.clone(),
            };
            let current = solve_amplifier_electronic(branches[0].r, branches[2].r, branches[0].e)
                .expect("sanitized amplifier values are positive");
            let response = BranchResponse {
                current_mag: current,
                phase_deg: 0.0,
            };
            normalize_sample(
                &RawSample { circuit, response },
                &ctx,
            )
        })
        .collect();

    let run_one = |class: CircuitClass, rows: Vec<NormalizedSample>, init_seed: u64| {
        let dataset = Dataset {
            class,
            seed: sampler.seed,
            context: ctx,
            rows,
        };
        let class_cfg = ExperimentConfig {
            sampler: SamplerConfig {
                class,
                ..sampler.clone()
            },
            train: cfg.train.clone(),
            test_fraction: cfg.test_fraction,
            split_seed: cfg.split_seed,
            init_seed,
            noise_offset: cfg.noise_offset,
            noise_all: cfg.noise_all,
            rmse_threshold: cfg.rmse_threshold,
        };
        run_on_dataset(&class_cfg, dataset)
    };

    Ok(AmpOutcome {
        electrical: run_one(
            CircuitClass::AmpElectrical,
            electrical_rows,
            cfg.init_seed,
        )?,
        electronic: run_one(
            CircuitClass::AmpElectronic,
            electronic_rows,
            cfg.init_seed.wrapping_add(1),
        )?,
    })
}

/// Acceptance band on the predicted response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCriterion {
    pub current_min: f64,
    pub current_max: f64,
    pub phase_min: Option<f64>,
    pub phase_max: Option<f64>,
}

impl SweepCriterion {
    pub fn validate(&self) -> Result<()> {
        if !(self.current_min < self.current_max) {
            return Err(Error::Config(
                "sweep current band requires min < max".into(),
            ));
        }
        match (self.phase_min, self.phase_max) {
            (None, None) => Ok(()),
            (Some(lo), Some(hi)) if lo < hi => Ok(()),
            _ => Err(Error::Config(
                "sweep phase band requires both bounds with min < max".into(),
            )),
        }
    }

    pub fn contains(&self, response: &BranchResponse) -> bool {
        let current_ok = (self.current_min..=self.current_max).contains(&response.current_mag);
        let phase_ok = match (self.phase_min, self.phase_max) {
            (Some(lo), Some(hi)) => (lo..=hi).contains(&response.phase_deg),
            _ => true,
        };
        current_ok && phase_ok
    }

    /// Distance to the band center, in units of half band widths.
    pub fn distance(&self, response: &BranchResponse) -> f64 {
        let center = 0.5 * (self.current_min + self.current_max);
        let half = 0.5 * (self.current_max - self.current_min);
        let mut d = (response.current_mag - center).abs() / half;
        if let (Some(lo), Some(hi)) = (self.phase_min, self.phase_max) {
            let center = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            d += (response.phase_deg - center).abs() / half;
        }
        d
    }
}

/// Quantized enumeration ranges for the sweep, one per element kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub class: CircuitClass,
    pub r_range: ValueRange,
    pub xl_range: ValueRange,
    pub xc_range: ValueRange,
    pub e_range: ValueRange,
    pub criterion: SweepCriterion,
    /// Hard bound on the enumeration size.
    pub cap: u64,
}

/// One circuit whose predicted response falls inside the criterion band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepHit {
    /// Physical element values in the class's feature order.
    pub element_values: Vec<f64>,
    pub predicted: BranchResponse,
    pub distance: f64,
}

/// Enumerates every circuit on the quantum grid, predicts its response with
/// the trained network, and returns the in-band circuits sorted by distance
/// to the band center.
pub fn sweep(
    cfg: &SweepConfig,
    network: &NetworkWeights,
    ctx: &NormalizationContext,
) -> Result<Vec<SweepHit>> {
    cfg.criterion.validate()?;
    let kinds = crate::pipeline::feature_kinds(cfg.class);
    let arch = cfg.class.architecture();
    if network.arch != arch {
        return Err(Error::ShapeMismatch(format!(
            "network does not match class {} architecture",
            cfg.class
        )));
    }

    let grids: Vec<Vec<f64>> = kinds
        .iter()
        .map(|kind| match kind {
            crate::pipeline::ElementKind::Resistance => cfg.r_range.values(),
            crate::pipeline::ElementKind::InductiveReactance => cfg.xl_range.values(),
            crate::pipeline::ElementKind::CapacitiveReactance => cfg.xc_range.values(),
            crate::pipeline::ElementKind::Voltage => cfg.e_range.values(),
        })
        .collect();

    let mut size: u128 = 1;
    for grid in &grids {
        size = size
            .checked_mul(grid.len() as u128)
            .ok_or(Error::SweepCapExceeded {
                size: u128::MAX,
                cap: cfg.cap,
            })?;
    }
    if size > u128::from(cfg.cap) {
        return Err(Error::SweepCapExceeded {
            size,
            cap: cfg.cap,
        });
    }

    let mut hits = Vec::new();
    let mut indices = vec![0usize; grids.len()];
    loop {
        let values: Vec<f64> = indices
            .iter()
            .zip(&grids)
            .map(|(&i, grid)| grid[i])
            .collect();
        let circuit = circuit_from_element_values(cfg.class, &values)?;
        let features = features_of(&circuit, ctx);
        let predicted_norm = network.forward(&features)?;
        let predicted = denormalize_outputs(&predicted_norm, ctx);
        if cfg.criterion.contains(&predicted) {
            hits.push(SweepHit {
                element_values: values,
                predicted,
                distance: cfg.criterion.distance(&predicted),
            });
        }

        // Odometer increment, last feature fastest.
        let mut position = grids.len();
        loop {
            if position == 0 {
                break;
            }
            position -= 1;
            indices[position] += 1;
            if indices[position] < grids[position].len() {
                break;
            }
            indices[position] = 0;
        }
        if position == 0 && indices[0] == 0 {
            break;
        }
    }

    hits.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_phase_net(class: CircuitClass) -> NetworkWeights {
        NetworkWeights::init(&class.architecture(), 1)
    }

    #[test]
    fn sweep_cap_guard_trips() {
        let cfg = SweepConfig {
            class: CircuitClass::ResistiveOneLoop,
            r_range: ValueRange::new(0.5, 500.0, 0.0005),
            xl_range: ValueRange::new(0.0, 0.0, 1.0),
            xc_range: ValueRange::new(0.0, 0.0, 1.0),
            e_range: ValueRange::new(1.0, 500.0, 0.0005),
            criterion: SweepCriterion {
                current_min: 1.9,
                current_max: 2.1,
                phase_min: None,
                phase_max: None,
            },
            cap: 10,
        };
        let ctx = NormalizationContext {
            r_max: 500.0,
            xl_max: 1.0,
            xc_max: 1.0,
            e_max: 500.0,
        };
        let net = zero_phase_net(CircuitClass::ResistiveOneLoop);
        assert!(matches!(
            sweep(&cfg, &net, &ctx),
            Err(Error::SweepCapExceeded { .. })
        ));
    }

    #[test]
    fn sweep_with_empty_band_intersection_returns_nothing() {
        // An untrained network outputs values in (0, 1); with e_max = 10 its
        // denormalized current stays below 1 A, far from the 50 A band.
        let cfg = SweepConfig {
            class: CircuitClass::ResistiveOneLoop,
            r_range: ValueRange::new(5.0, 10.0, 1.0),
            xl_range: ValueRange::new(0.0, 0.0, 1.0),
            xc_range: ValueRange::new(0.0, 0.0, 1.0),
            e_range: ValueRange::new(10.0, 10.0, 1.0),
            criterion: SweepCriterion {
                current_min: 50.0,
                current_max: 60.0,
                phase_min: None,
                phase_max: None,
            },
            cap: 1_000_000,
        };
        let ctx = NormalizationContext {
            r_max: 10.0,
            xl_max: 1.0,
            xc_max: 1.0,
            e_max: 10.0,
        };
        let net = zero_phase_net(CircuitClass::ResistiveOneLoop);
        let hits = sweep(&cfg, &net, &ctx).unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn criterion_validation() {
        let bad = SweepCriterion {
            current_min: 2.0,
            current_max: 2.0,
            phase_min: None,
            phase_max: None,
        };
        assert!(bad.validate().is_err());
        let half_phase = SweepCriterion {
            current_min: 1.0,
            current_max: 2.0,
            phase_min: Some(0.0),
            phase_max: None,
        };
        assert!(half_phase.validate().is_err());
    }
}
