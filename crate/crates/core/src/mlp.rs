//! From-scratch feed-forward sigmoid network with per-sample backpropagation.
//!
//! Every layer, including the output layer, applies the logistic sigmoid to
//! its weighted sum. Training is plain stochastic gradient descent on the
//! per-output-averaged squared error; weights start uniform in [-0.5, 0.5]
//! from a seeded generator, so runs are bit-reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::circuit::ArchitectureSpec;
use crate::error::{Error, Result};
use crate::pipeline::Dataset;

pub const DEFAULT_LEARNING_RATE: f64 = 0.25;

/// Training cycles used when none are configured: at least 500, and at least
/// 10 passes over every training sample.
pub fn default_cycles(sample_count: usize) -> usize {
    500.max(10 * sample_count)
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One dense layer: row-major `out x in` weights and an `out` bias vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerWeights {
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl LayerWeights {
    fn out_dim(&self) -> usize {
        self.b.len()
    }

    fn in_dim(&self) -> usize {
        self.w.first().map_or(0, Vec::len)
    }
}

/// Layer-ordered weights of the sigmoid network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkWeights {
    pub arch: ArchitectureSpec,
    pub layers: Vec<LayerWeights>,
}

/// Stochastic-gradient-descent settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Full passes over the training set; 0 selects [`default_cycles`].
    pub cycles: usize,
    pub seed: u64,
    pub shuffle_each_cycle: bool,
    /// Index of the first cycle, so a resumed run can continue the same
    /// per-cycle shuffle stream.
    #[serde(default)]
    pub cycle_offset: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: DEFAULT_LEARNING_RATE,
            cycles: 0,
            seed: 0,
            shuffle_each_cycle: true,
            cycle_offset: 0,
        }
    }
}

/// Mean squared error per training cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub loss_per_cycle: Vec<f64>,
    pub final_loss: f64,
}

impl NetworkWeights {
    /// Fresh network with weights and biases drawn uniformly from
    /// [-0.5, 0.5] by a generator seeded with `seed`.
    pub fn init(arch: &ArchitectureSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dims = vec![arch.input_count];
        dims.extend(&arch.hidden_layers);
        dims.push(arch.output_count);

        let mut layers = Vec::with_capacity(dims.len() - 1);
        for pair in dims.windows(2) {
            let (in_dim, out_dim) = (pair[0], pair[1]);
            let w = (0..out_dim)
                .map(|_| (0..in_dim).map(|_| rng.gen::<f64>() - 0.5).collect())
                .collect();
            let b = (0..out_dim).map(|_| rng.gen::<f64>() - 0.5).collect();
            layers.push(LayerWeights { w, b });
        }
        NetworkWeights {
            arch: arch.clone(),
            layers,
        }
    }

    pub fn input_count(&self) -> usize {
        self.arch.input_count
    }

    pub fn output_count(&self) -> usize {
        self.arch.output_count
    }

    /// Checks that layer shapes chain and match the declared architecture.
    pub fn validate(&self) -> Result<()> {
        let mut dims = vec![self.arch.input_count];
        dims.extend(&self.arch.hidden_layers);
        dims.push(self.arch.output_count);
        if self.layers.len() != dims.len() - 1 {
            return Err(Error::ShapeMismatch(format!(
                "expected {} layers, found {}",
                dims.len() - 1,
                self.layers.len()
            )));
        }
        for (index, layer) in self.layers.iter().enumerate() {
            let (in_dim, out_dim) = (dims[index], dims[index + 1]);
            if layer.out_dim() != out_dim
                || layer.w.len() != out_dim
                || layer.w.iter().any(|row| row.len() != in_dim)
            {
                return Err(Error::ShapeMismatch(format!(
                    "layer {index}: expected {out_dim}x{in_dim} weights"
                )));
            }
            let finite = layer
                .w
                .iter()
                .flatten()
                .chain(&layer.b)
                .all(|v| v.is_finite());
            if !finite {
                return Err(Error::ShapeMismatch(format!(
                    "layer {index}: non-finite weight"
                )));
            }
        }
        Ok(())
    }

    /// Activations of every layer, input first. `a' = sigmoid(W a + b)`.
    fn forward_trace(&self, input: &[f64]) -> Result<Vec<Vec<f64>>> {
        if input.len() != self.arch.input_count {
            return Err(Error::DimensionMismatch {
                expected: self.arch.input_count,
                got: input.len(),
            });
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.to_vec());
        for layer in &self.layers {
            let prev = activations.last().expect("non-empty");
            let next: Vec<f64> = layer
                .w
                .iter()
                .zip(&layer.b)
                .map(|(row, bias)| {
                    let z: f64 = row.iter().zip(prev).map(|(w, a)| w * a).sum::<f64>() + bias;
                    sigmoid(z)
                })
                .collect();
            activations.push(next);
        }
        Ok(activations)
    }

    /// Output of the network for one feature vector.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_trace(input)?.pop().expect("non-empty"))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("weight serialization cannot fail");
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    /// Loads weights and verifies the stored shapes chain consistently.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let net: NetworkWeights =
            serde_json::from_str(&text).map_err(|e| Error::malformed(path, e.to_string()))?;
        net.validate()?;
        Ok(net)
    }

    /// Loads weights and additionally requires the stored architecture to
    /// equal `expected`.
    pub fn load_for(path: &Path, expected: &ArchitectureSpec) -> Result<Self> {
        let net = Self::load(path)?;
        if &net.arch != expected {
            return Err(Error::ShapeMismatch(format!(
                "weights at {} were trained for a {:?}-{:?}-{:?} network",
                path.display(),
                net.arch.input_count,
                net.arch.hidden_layers,
                net.arch.output_count
            )));
        }
        Ok(net)
    }
}

/// Per-output-averaged squared error.
fn sample_loss(outputs: &[f64], targets: &[f64]) -> f64 {
    let n = outputs.len() as f64;
    outputs
        .iter()
        .zip(targets)
        .map(|(y, t)| (y - t) * (y - t))
        .sum::<f64>()
        / n
}

struct LayerGradients {
    w: Vec<Vec<f64>>,
    b: Vec<f64>,
}

/// Backpropagated gradients of the sample loss, plus the loss itself.
fn gradients(
    net: &NetworkWeights,
    features: &[f64],
    targets: &[f64],
) -> Result<(Vec<LayerGradients>, f64)> {
    if targets.len() != net.arch.output_count {
        return Err(Error::DimensionMismatch {
            expected: net.arch.output_count,
            got: targets.len(),
        });
    }
    let activations = net.forward_trace(features)?;
    let outputs = activations.last().expect("non-empty");
    let loss = sample_loss(outputs, targets);

    // Output delta: dL/dz = 2 (y - t) / n_out * y (1 - y).
    let n_out = outputs.len() as f64;
    let mut delta: Vec<f64> = outputs
        .iter()
        .zip(targets)
        .map(|(y, t)| 2.0 * (y - t) / n_out * y * (1.0 - y))
        .collect();

    let mut grads: Vec<LayerGradients> = Vec::with_capacity(net.layers.len());
    for (index, layer) in net.layers.iter().enumerate().rev() {
        let inputs = &activations[index];
        let grad_w: Vec<Vec<f64>> = delta
            .iter()
            .map(|d| inputs.iter().map(|a| d * a).collect())
            .collect();
        let grad_b = delta.clone();

        if index > 0 {
            let next_delta: Vec<f64> = (0..layer.in_dim())
                .map(|j| {
                    let back: f64 = delta.iter().zip(&layer.w).map(|(d, row)| d * row[j]).sum();
                    let a = inputs[j];
                    back * a * (1.0 - a)
                })
                .collect();
            delta = next_delta;
        }
        grads.push(LayerGradients {
            w: grad_w,
            b: grad_b,
        });
    }
    grads.reverse();
    Ok((grads, loss))
}

/// One stochastic gradient-descent step on a single sample. Updates the
/// network in place and returns the pre-update loss.
pub fn backprop_step(
    net: &mut NetworkWeights,
    features: &[f64],
    targets: &[f64],
    learning_rate: f64,
) -> Result<f64> {
    let (grads, loss) = gradients(net, features, targets)?;
    for (layer, grad) in net.layers.iter_mut().zip(&grads) {
        for (row, grad_row) in layer.w.iter_mut().zip(&grad.w) {
            for (w, g) in row.iter_mut().zip(grad_row) {
                *w -= learning_rate * g;
            }
        }
        for (b, g) in layer.b.iter_mut().zip(&grad.b) {
            *b -= learning_rate * g;
        }
    }
    Ok(loss)
}

/// Trains with per-sample updates for the configured number of cycles.
/// Each cycle optionally reshuffles the sample order with a stream derived
/// from (seed, cycle index), so interrupted and resumed runs can replay the
/// identical schedule.
pub fn train(net: &mut NetworkWeights, train_set: &Dataset, cfg: &TrainConfig) -> Result<TrainReport> {
    if train_set.rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(cfg.learning_rate > 0.0) {
        return Err(Error::Config(format!(
            "learning rate {} must be positive",
            cfg.learning_rate
        )));
    }
    let cycles = if cfg.cycles == 0 {
        default_cycles(train_set.rows.len())
    } else {
        cfg.cycles
    };

    let n = train_set.rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut loss_per_cycle = Vec::with_capacity(cycles);
    for cycle in 0..cycles {
        if cfg.shuffle_each_cycle {
            // The permutation must depend only on (seed, cycle index) so a
            // resumed run can replay it; start from identity every cycle.
            for (slot, index) in order.iter_mut().zip(0..n) {
                *slot = index;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(cfg.cycle_offset + cycle as u64);
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
        }
        let mut cycle_loss = 0.0;
        for &row_index in &order {
            let row = &train_set.rows[row_index];
            cycle_loss += backprop_step(net, &row.features, &row.targets, cfg.learning_rate)?;
        }
        loss_per_cycle.push(cycle_loss / n as f64);
    }
    let final_loss = *loss_per_cycle.last().expect("at least one cycle");
    Ok(TrainReport {
        loss_per_cycle,
        final_loss,
    })
}

/// Largest relative disagreement between analytic gradients and central
/// finite differences with the given epsilon. The relative error guards its
/// denominator with max(1e-12, |analytic| + |numeric|).
pub fn gradient_check(
    net: &NetworkWeights,
    features: &[f64],
    targets: &[f64],
    eps: f64,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let (grads, _) = gradients(net, features, targets)?;

    let mut worst: f64 = 0.0;
    let mut probe = net.clone();
    for layer_index in 0..net.layers.len() {
        let (rows, cols) = (
            net.layers[layer_index].w.len(),
            net.layers[layer_index].in_dim(),
        );
        for row in 0..rows {
            for col in 0..=cols {
                let original = if col < cols {
                    net.layers[layer_index].w[row][col]
                } else {
                    net.layers[layer_index].b[row]
                };
                let analytic = if col < cols {
                    grads[layer_index].w[row][col]
                } else {
                    grads[layer_index].b[row]
                };

                let mut eval = |value: f64| -> Result<f64> {
                    if col < cols {
                        probe.layers[layer_index].w[row][col] = value;
                    } else {
                        probe.layers[layer_index].b[row] = value;
                    }
                    let outputs = probe.forward(features)?;
                    Ok(sample_loss(&outputs, targets))
                };
                let upper = eval(original + eps)?;
                let lower = eval(original - eps)?;
                eval(original)?;

                let numeric = (upper - lower) / (2.0 * eps);
                let denom = (analytic.abs() + numeric.abs()).max(1e-12);
                worst = worst.max((analytic - numeric).abs() / denom);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitClass;
    use crate::pipeline::{NormalizationContext, NormalizedSample};

    fn arch(inputs: usize, hidden: Vec<usize>, outputs: usize) -> ArchitectureSpec {
        ArchitectureSpec {
            input_count: inputs,
            hidden_layers: hidden,
            output_count: outputs,
        }
    }

    fn toy_dataset(rows: Vec<NormalizedSample>) -> Dataset {
        Dataset {
            class: CircuitClass::ResistiveOneLoop,
            seed: 0,
            context: NormalizationContext {
                r_max: 1.0,
                xl_max: 1.0,
                xc_max: 1.0,
                e_max: 1.0,
            },
            rows,
        }
    }

    #[test]
    fn init_is_deterministic_and_in_range() {
        let spec = CircuitClass::ResistiveOneLoop.architecture();
        let a = NetworkWeights::init(&spec, 42);
        let b = NetworkWeights::init(&spec, 42);
        assert_eq!(a, b);
        assert_ne!(a, NetworkWeights::init(&spec, 43));

        // 1a: 2-[3]-1 gives shapes (3x2 + 3) and (1x3 + 1).
        assert_eq!(a.layers.len(), 2);
        assert_eq!(a.layers[0].w.len(), 3);
        assert_eq!(a.layers[0].w[0].len(), 2);
        assert_eq!(a.layers[0].b.len(), 3);
        assert_eq!(a.layers[1].w.len(), 1);
        assert_eq!(a.layers[1].w[0].len(), 3);
        assert_eq!(a.layers[1].b.len(), 1);

        for layer in &a.layers {
            for v in layer.w.iter().flatten().chain(&layer.b) {
                assert!((-0.5..=0.5).contains(v));
            }
        }
    }

    #[test]
    fn forward_of_zero_network_is_half_everywhere() {
        let mut net = NetworkWeights::init(&arch(3, vec![4, 2], 2), 1);
        for layer in &mut net.layers {
            layer.w.iter_mut().flatten().for_each(|w| *w = 0.0);
            layer.b.iter_mut().for_each(|b| *b = 0.0);
        }
        let out = net.forward(&[0.3, 0.7, 0.1]).unwrap();
        assert_eq!(out, vec![0.5, 0.5]);
    }

    #[test]
    fn forward_hand_computed_example() {
        // 1-[1]-1 net: hidden (w=0, b=0) gives 0.5; output (w=2, b=-1)
        // gives sigmoid(2 * 0.5 - 1) = sigmoid(0) = 0.5.
        let net = NetworkWeights {
            arch: arch(1, vec![1], 1),
            layers: vec![
                LayerWeights {
                    w: vec![vec![0.0]],
                    b: vec![0.0],
                },
                LayerWeights {
                    w: vec![vec![2.0]],
                    b: vec![-1.0],
                },
            ],
        };
        assert_eq!(net.forward(&[0.9]).unwrap(), vec![0.5]);
    }

    #[test]
    fn forward_outputs_stay_in_open_unit_interval() {
        let net = NetworkWeights::init(&CircuitClass::LcrOneLoop.architecture(), 9);
        for trial in 0..20 {
            let x = trial as f64 / 20.0;
            let out = net.forward(&[x, 1.0 - x, x * x, 0.5]).unwrap();
            assert!(out.iter().all(|y| *y > 0.0 && *y < 1.0));
        }
    }

    #[test]
    fn forward_rejects_dimension_mismatch() {
        let net = NetworkWeights::init(&arch(2, vec![3], 1), 0);
        assert!(matches!(
            net.forward(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn backprop_at_fixed_point_changes_nothing() {
        let mut net = NetworkWeights::init(&arch(2, vec![2], 1), 5);
        let features = [0.4, 0.6];
        let target = net.forward(&features).unwrap();
        let before = net.clone();
        let loss = backprop_step(&mut net, &features, &target, 0.5).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(net, before);
    }

    #[test]
    fn zero_learning_rate_reports_loss_without_update() {
        let mut net = NetworkWeights::init(&arch(2, vec![2], 1), 5);
        let before = net.clone();
        let loss = backprop_step(&mut net, &[0.4, 0.6], &[0.9], 0.0).unwrap();
        assert!(loss > 0.0);
        assert_eq!(net, before);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let net = NetworkWeights::init(&arch(4, vec![3, 3], 2), 77);
        let worst = gradient_check(&net, &[0.2, 0.8, 0.5, 0.1], &[0.3, 0.9], 1e-5).unwrap();
        assert!(worst <= 1e-4, "gradient error {worst}");
    }

    #[test]
    fn gradient_check_flags_a_wrong_sign() {
        // Mutation test: negating one analytic gradient must blow the error up.
        let net = NetworkWeights::init(&arch(2, vec![2], 1), 3);
        let features = [0.3, 0.9];
        let targets = [0.7];
        let (grads, _) = gradients(&net, &features, &targets).unwrap();
        let analytic = grads[0].w[0][0];
        assert!(analytic.abs() > 1e-6, "pick a non-degenerate point");

        let mut probe = net.clone();
        let eps = 1e-5;
        probe.layers[0].w[0][0] += eps;
        let upper = sample_loss(&probe.forward(&features).unwrap(), &targets);
        probe.layers[0].w[0][0] -= 2.0 * eps;
        let lower = sample_loss(&probe.forward(&features).unwrap(), &targets);
        let numeric = (upper - lower) / (2.0 * eps);

        let wrong = -analytic;
        let error = (wrong - numeric).abs() / (wrong.abs() + numeric.abs()).max(1e-12);
        assert!(error > 0.1, "mutated gradient error {error}");
    }

    #[test]
    fn gradient_check_is_zero_at_stationary_point() {
        let mut net = NetworkWeights::init(&arch(2, vec![2], 1), 5);
        for layer in &mut net.layers {
            layer.w.iter_mut().flatten().for_each(|w| *w = 0.0);
            layer.b.iter_mut().for_each(|b| *b = 0.0);
        }
        // Output is exactly 0.5 = target, so every analytic gradient is zero.
        let worst = gradient_check(&net, &[0.4, 0.9], &[0.5], 1e-5).unwrap();
        assert!(worst <= 1e-4, "stationary-point error {worst}");
    }

    #[test]
    fn training_is_bit_reproducible_and_uses_default_cycles() {
        let rows: Vec<NormalizedSample> = (0..50)
            .map(|i| {
                let x = i as f64 / 50.0;
                NormalizedSample {
                    features: vec![x, 1.0 - x],
                    targets: vec![0.2 + 0.5 * x],
                }
            })
            .collect();
        let ds = toy_dataset(rows);
        let cfg = TrainConfig {
            seed: 11,
            ..TrainConfig::default()
        };

        let mut net_a = NetworkWeights::init(&arch(2, vec![3], 1), 1);
        let mut net_b = net_a.clone();
        let report_a = train(&mut net_a, &ds, &cfg).unwrap();
        let report_b = train(&mut net_b, &ds, &cfg).unwrap();
        assert_eq!(net_a, net_b);
        assert_eq!(report_a, report_b);
        // 50 samples -> max(500, 10 * 50) = 500 cycles.
        assert_eq!(report_a.loss_per_cycle.len(), 500);
        assert!(report_a.final_loss <= 0.1 * report_a.loss_per_cycle[0]);
    }

    #[test]
    fn training_rejects_empty_dataset() {
        let ds = toy_dataset(vec![]);
        let mut net = NetworkWeights::init(&arch(2, vec![3], 1), 1);
        assert!(matches!(
            train(&mut net, &ds, &TrainConfig::default()),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn resumed_training_replays_the_same_schedule() {
        let rows: Vec<NormalizedSample> = (0..20)
            .map(|i| {
                let x = i as f64 / 20.0;
                NormalizedSample {
                    features: vec![x, x * x],
                    targets: vec![0.8 - 0.4 * x],
                }
            })
            .collect();
        let ds = toy_dataset(rows);

        let mut uninterrupted = NetworkWeights::init(&arch(2, vec![3], 1), 2);
        let cfg_full = TrainConfig {
            cycles: 8,
            seed: 21,
            ..TrainConfig::default()
        };
        train(&mut uninterrupted, &ds, &cfg_full).unwrap();

        let mut resumed = NetworkWeights::init(&arch(2, vec![3], 1), 2);
        let cfg_first = TrainConfig {
            cycles: 5,
            ..cfg_full.clone()
        };
        train(&mut resumed, &ds, &cfg_first).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weights.json");
        resumed.save(&path).unwrap();
        let mut reloaded = NetworkWeights::load(&path).unwrap();
        assert_eq!(reloaded, resumed);

        let cfg_rest = TrainConfig {
            cycles: 3,
            cycle_offset: 5,
            ..cfg_full
        };
        train(&mut reloaded, &ds, &cfg_rest).unwrap();
        assert_eq!(reloaded, uninterrupted);
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let net = NetworkWeights::init(&CircuitClass::LcrOneLoop.architecture(), 31);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weights.json");
        net.save(&path).unwrap();
        let loaded = NetworkWeights::load(&path).unwrap();
        assert_eq!(net, loaded);

        let input = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(
            net.forward(&input).unwrap(),
            loaded.forward(&input).unwrap()
        );
    }

    #[test]
    fn load_rejects_corrupt_and_mismatched_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weights.json");
        std::fs::write(&path, "{not json").unwrap();
        assert!(NetworkWeights::load(&path).is_err());

        let net = NetworkWeights::init(&arch(2, vec![3], 1), 0);
        net.save(&path).unwrap();
        let wrong = CircuitClass::LcrOneLoop.architecture();
        assert!(matches!(
            NetworkWeights::load_for(&path, &wrong),
            Err(Error::ShapeMismatch(_))
        ));

        // Shape inconsistency inside the file is caught by validate.
        let mut broken = net.clone();
        broken.layers[0].w[0].push(9.0);
        let json = serde_json::to_string(&broken).unwrap();
        std::fs::write(&path, json).unwrap();
        assert!(matches!(
            NetworkWeights::load(&path),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn small_step_does_not_increase_sample_loss() {
        for seed in 0..100 {
            let mut net = NetworkWeights::init(&arch(3, vec![4], 2), seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let features: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let targets: Vec<f64> = (0..2).map(|_| rng.gen::<f64>()).collect();

            let before = {
                let out = net.forward(&features).unwrap();
                sample_loss(&out, &targets)
            };
            backprop_step(&mut net, &features, &targets, 1e-3).unwrap();
            let after = {
                let out = net.forward(&features).unwrap();
                sample_loss(&out, &targets)
            };
            assert!(after <= before + 1e-12, "seed {seed}: {before} -> {after}");
        }
    }
}
