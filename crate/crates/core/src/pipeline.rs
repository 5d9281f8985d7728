//! Training/test data generation: seeded sampling on a quantized grid,
//! degenerate-value sanitization, normalization, splitting, and persistence.
//!
//! Sanitization replaces the degenerate values that break network training:
//! an open path becomes 100 ohm, a short 0.1 ohm, a zero source 0.1 volt.
//! Normalization divides each element by its kind's range maximum, scales
//! current by 1/(0.1 E_max), and maps phase through (phi + 180)/360.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::circuit::{BranchElement, CircuitClass, CircuitInstance, AMP_MIDDLE_RESISTANCE};
use crate::error::{Error, Result};
use crate::solver::{probe_response, solve_by_superposition, BranchResponse};

pub const OPEN_RESISTANCE_OHMS: f64 = 100.0;
pub const SHORT_RESISTANCE_OHMS: f64 = 0.1;
pub const ZERO_VOLTAGE_FLOOR_VOLTS: f64 = 0.1;

/// Offset added to training data to introduce mild noise.
pub const DEFAULT_NOISE_OFFSET: f64 = 0.01;

/// Normalized current targets at or above this level sit in the saturated
/// tail of the sigmoid output and are reported as data warnings.
pub const SATURATION_WARNING_LEVEL: f64 = 0.95;

/// Which replacement rule applies to a degenerate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateKind {
    OpenResistance,
    ShortResistance,
    ZeroVoltage,
}

/// Replaces a degenerate value (non-finite or exactly zero) with its finite
/// stand-in; every other value passes through unchanged.
pub fn sanitize(value: f64, kind: DegenerateKind) -> f64 {
    if value.is_finite() && value != 0.0 {
        return value;
    }
    match kind {
        DegenerateKind::OpenResistance => OPEN_RESISTANCE_OHMS,
        DegenerateKind::ShortResistance => SHORT_RESISTANCE_OHMS,
        DegenerateKind::ZeroVoltage => ZERO_VOLTAGE_FLOOR_VOLTS,
    }
}

/// Element kind of one input feature, selecting its normalization divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Resistance,
    InductiveReactance,
    CapacitiveReactance,
    Voltage,
}

/// Inclusive quantized sampling range: min, min + step, ..., up to max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ValueRange {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        ValueRange { min, max, step }
    }

    fn validate(&self, name: &str, require_positive_min: bool) -> Result<()> {
        let ok = self.min.is_finite()
            && self.max.is_finite()
            && self.step.is_finite()
            && self.step > 0.0
            && self.max >= self.min
            && self.min >= 0.0
            && (!require_positive_min || self.min > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "invalid {name} range: min {}, max {}, step {}",
                self.min, self.max, self.step
            )))
        }
    }

    /// Number of grid points in the range.
    pub fn grid_len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9) as usize + 1
    }

    /// All grid points, lowest first.
    pub fn values(&self) -> Vec<f64> {
        (0..self.grid_len())
            .map(|k| self.min + k as f64 * self.step)
            .collect()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        let k = rng.gen_range(0..self.grid_len());
        self.min + k as f64 * self.step
    }
}

/// Per-dataset normalization maxima, taken from the sampling ranges rather
/// than the realized samples so train and test share one context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationContext {
    pub r_max: f64,
    pub xl_max: f64,
    pub xc_max: f64,
    pub e_max: f64,
}

impl NormalizationContext {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.r_max, self.xl_max, self.xc_max, self.e_max]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Config(
                "normalization context maxima must be finite and positive".into(),
            ))
        }
    }

    fn divisor(&self, kind: ElementKind) -> f64 {
        match kind {
            ElementKind::Resistance => self.r_max,
            ElementKind::InductiveReactance => self.xl_max,
            ElementKind::CapacitiveReactance => self.xc_max,
            ElementKind::Voltage => self.e_max,
        }
    }
}

/// Configuration for the seeded dataset sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub class: CircuitClass,
    pub count: usize,
    pub r_range: ValueRange,
    pub xl_range: ValueRange,
    pub xc_range: ValueRange,
    pub e_range: ValueRange,
    /// Probability that a resistance is replaced by an open path.
    pub open_prob: f64,
    /// Probability that a resistance is replaced by a short.
    pub short_prob: f64,
    /// Probability that a sampled source voltage is zeroed.
    pub zero_volt_prob: f64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        self.r_range.validate("resistance", true)?;
        self.e_range.validate("voltage", true)?;
        if self.class.has_reactance() {
            self.xl_range.validate("inductive reactance", false)?;
            self.xc_range.validate("capacitive reactance", false)?;
            if self.xl_range.max <= 0.0 || self.xc_range.max <= 0.0 {
                return Err(Error::Config(
                    "reactance range maxima must be positive for category-2 classes".into(),
                ));
            }
        }
        for (name, p) in [
            ("open_prob", self.open_prob),
            ("short_prob", self.short_prob),
            ("zero_volt_prob", self.zero_volt_prob),
        ] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} must lie in [0, 1)")));
            }
        }
        if self.open_prob + self.short_prob >= 1.0 {
            return Err(Error::Config(
                "open_prob + short_prob must stay below 1".into(),
            ));
        }
        Ok(())
    }

    /// Context derived from the sampling ranges. When opens can occur, the
    /// resistance maximum is widened to cover the 100-ohm stand-in.
    pub fn normalization_context(&self) -> NormalizationContext {
        let mut r_max = self.r_range.max;
        if self.open_prob > 0.0 {
            r_max = r_max.max(OPEN_RESISTANCE_OHMS);
        }
        let (xl_max, xc_max) = if self.class.has_reactance() {
            (self.xl_range.max, self.xc_range.max)
        } else {
            (1.0, 1.0)
        };
        NormalizationContext {
            r_max,
            xl_max,
            xc_max,
            e_max: self.e_range.max,
        }
    }
}

/// A sampled circuit paired with its exact oracle response.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSample {
    pub circuit: CircuitInstance,
    pub response: BranchResponse,
}

/// One normalized row: features in class order, then 1 or 2 targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSample {
    pub features: Vec<f64>,
    pub targets: Vec<f64>,
}

/// Normalized rows plus the context and provenance they were built with.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub class: CircuitClass,
    pub seed: u64,
    pub context: NormalizationContext,
    pub rows: Vec<NormalizedSample>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Count of rows whose normalized current target sits at or above the
    /// sigmoid saturation warning level.
    pub fn saturated_target_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|row| row.targets[0] >= SATURATION_WARNING_LEVEL)
            .count()
    }
}

/// Feature kinds of a class, aligned with [`CircuitClass::feature_names`].
pub fn feature_kinds(class: CircuitClass) -> Vec<ElementKind> {
    use ElementKind::*;
    match class {
        CircuitClass::ResistiveOneLoop => vec![Resistance, Voltage],
        CircuitClass::ResistiveTwoLoop | CircuitClass::ResistiveFourLoop => {
            let n = class.branch_count();
            let mut kinds = vec![Resistance; n];
            kinds.extend(vec![Voltage; n]);
            kinds
        }
        CircuitClass::LcrOneLoop => {
            vec![InductiveReactance, CapacitiveReactance, Resistance, Voltage]
        }
        CircuitClass::LcrTwoLoop => {
            let mut kinds = Vec::new();
            for _ in 0..7 {
                kinds.extend([Resistance, CapacitiveReactance, InductiveReactance]);
            }
            kinds.push(Voltage);
            kinds
        }
        CircuitClass::LcrFourLoop => {
            let mut kinds = Vec::new();
            for _ in 0..12 {
                kinds.extend([Resistance, CapacitiveReactance, InductiveReactance]);
            }
            kinds.extend(vec![Voltage; 12]);
            kinds
        }
        CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => {
            vec![Resistance, Resistance, Voltage]
        }
    }
}

/// Physical element values of a circuit in the class's feature order.
pub fn element_values(circuit: &CircuitInstance) -> Vec<f64> {
    let branches = &circuit.branches;
    match circuit.class {
        CircuitClass::ResistiveOneLoop => vec![branches[0].r, branches[0].e],
        CircuitClass::ResistiveTwoLoop | CircuitClass::ResistiveFourLoop => {
            let mut values: Vec<f64> = branches.iter().map(|b| b.r).collect();
            values.extend(branches.iter().map(|b| b.e));
            values
        }
        CircuitClass::LcrOneLoop => vec![
            branches[0].xl,
            branches[0].xc,
            branches[0].r,
            branches[0].e,
        ],
        CircuitClass::LcrTwoLoop => {
            let mut values = Vec::new();
            for b in branches {
                values.extend([b.r, b.xc, b.xl]);
            }
            values.push(branches[0].e);
            values
        }
        CircuitClass::LcrFourLoop => {
            let mut values = Vec::new();
            for b in branches {
                values.extend([b.r, b.xc, b.xl]);
            }
            values.extend(branches.iter().map(|b| b.e));
            values
        }
        CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => {
            vec![branches[0].r, branches[2].r, branches[0].e]
        }
    }
}

/// Rebuilds a circuit from physical element values in feature order
/// (the inverse of [`element_values`]).
pub fn circuit_from_element_values(class: CircuitClass, values: &[f64]) -> Result<CircuitInstance> {
    let expected = class.architecture().input_count;
    if values.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: values.len(),
        });
    }
    let n = class.branch_count();
    let branches = match class {
        CircuitClass::ResistiveOneLoop => vec![BranchElement::sourced_resistor(values[0], values[1])],
        CircuitClass::ResistiveTwoLoop | CircuitClass::ResistiveFourLoop => (0..n)
            .map(|i| BranchElement::sourced_resistor(values[i], values[n + i]))
            .collect(),
        CircuitClass::LcrOneLoop => vec![BranchElement {
            xl: values[0],
            xc: values[1],
            r: values[2],
            e: values[3],
            source_phase: 0.0,
        }],
        CircuitClass::LcrTwoLoop => (0..n)
            .map(|i| BranchElement {
                r: values[3 * i],
                xc: values[3 * i + 1],
                xl: values[3 * i + 2],
                e: if i == 0 { values[3 * n] } else { 0.0 },
                source_phase: 0.0,
            })
            .collect(),
        CircuitClass::LcrFourLoop => (0..n)
            .map(|i| BranchElement {
                r: values[3 * i],
                xc: values[3 * i + 1],
                xl: values[3 * i + 2],
                e: values[3 * n + i],
                source_phase: 0.0,
            })
            .collect(),
        CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => vec![
            BranchElement::sourced_resistor(values[0], values[2]),
            BranchElement::resistor(AMP_MIDDLE_RESISTANCE),
            BranchElement::resistor(values[1]),
        ],
    };
    CircuitInstance::new(class, branches)
}

/// Normalized input features of a circuit.
pub fn features_of(circuit: &CircuitInstance, ctx: &NormalizationContext) -> Vec<f64> {
    element_values(circuit)
        .iter()
        .zip(feature_kinds(circuit.class))
        .map(|(value, kind)| value / ctx.divisor(kind))
        .collect()
}

/// Normalized targets of a response: current over 0.1 E_max, then
/// (phase + 180)/360 for the two-output classes.
pub fn normalize_response(
    response: &BranchResponse,
    ctx: &NormalizationContext,
    output_count: usize,
) -> Vec<f64> {
    let mut targets = vec![response.current_mag / (0.1 * ctx.e_max)];
    if output_count == 2 {
        targets.push((response.phase_deg + 180.0) / 360.0);
    }
    targets
}

/// Builds one normalized row from a raw sample.
pub fn normalize_sample(raw: &RawSample, ctx: &NormalizationContext) -> NormalizedSample {
    NormalizedSample {
        features: features_of(&raw.circuit, ctx),
        targets: normalize_response(&raw.response, ctx, raw.circuit.class.output_count()),
    }
}

/// Maps normalized targets back to physical units.
pub fn denormalize_outputs(targets: &[f64], ctx: &NormalizationContext) -> BranchResponse {
    BranchResponse {
        current_mag: targets[0] * 0.1 * ctx.e_max,
        phase_deg: targets.get(1).map_or(0.0, |t| 360.0 * t - 180.0),
    }
}

/// Returns a copy of the dataset with `offset` added to every feature and
/// target. Applied to training rows only under the default policy.
pub fn apply_noise_offset(ds: &Dataset, offset: f64) -> Dataset {
    let rows = ds
        .rows
        .iter()
        .map(|row| NormalizedSample {
            features: row.features.iter().map(|v| v + offset).collect(),
            targets: row.targets.iter().map(|v| v + offset).collect(),
        })
        .collect();
    Dataset {
        rows,
        ..ds.clone()
    }
}

const MAX_SAMPLE_ATTEMPTS: u64 = 64;

/// Draws `cfg.count` sanitized circuits on the quantized grid and solves
/// each with the exact oracle. Bit-reproducible for a fixed config.
pub fn generate_raw_samples(cfg: &SamplerConfig) -> Result<Vec<RawSample>> {
    cfg.validate()?;
    (0..cfg.count)
        .map(|index| sample_circuit(cfg, index as u64))
        .collect()
}

/// [`generate_raw_samples`] followed by normalization.
pub fn generate_dataset(cfg: &SamplerConfig) -> Result<Dataset> {
    let raw_samples = generate_raw_samples(cfg)?;
    let ctx = cfg.normalization_context();
    let rows = raw_samples
        .iter()
        .map(|raw| normalize_sample(raw, &ctx))
        .collect();
    Ok(Dataset {
        class: cfg.class,
        seed: cfg.seed,
        context: ctx,
        rows,
    })
}

/// Draws one circuit, resampling on singular mesh systems. Each
/// (sample, attempt) pair has its own RNG stream, so samples are independent
/// of each other's retry counts.
fn sample_circuit(cfg: &SamplerConfig, index: u64) -> Result<RawSample> {
    for attempt in 0..MAX_SAMPLE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index * MAX_SAMPLE_ATTEMPTS + attempt);
        let circuit = draw_circuit(cfg, &mut rng);
        match checked_oracle_response(&circuit) {
            Ok(response) => return Ok(RawSample { circuit, response }),
            Err(Error::DegenerateCircuit(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateCircuit(format!(
        "sample {index}: still singular after {MAX_SAMPLE_ATTEMPTS} resampling attempts"
    )))
}

/// Oracle response with the generation-time cross-check: mesh analysis and
/// superposition must agree on the probe current to 1e-9.
fn checked_oracle_response(circuit: &CircuitInstance) -> Result<BranchResponse> {
    let response = probe_response(circuit)?;
    if circuit.class != CircuitClass::AmpElectronic {
        let by_mesh = crate::solver::solve_mesh(circuit)?;
        let by_superposition = solve_by_superposition(circuit)?;
        let probe = circuit.class.probe_branch();
        let deviation = (by_mesh.branch_currents[probe] - by_superposition.branch_currents[probe])
            .norm();
        let bound = 1e-9 * (1.0 + by_mesh.branch_currents[probe].norm());
        if deviation > bound {
            return Err(Error::InvalidArgument(format!(
                "oracle cross-check failed: mesh and superposition differ by {deviation:.3e}"
            )));
        }
    }
    Ok(response)
}

fn draw_resistance(cfg: &SamplerConfig, rng: &mut ChaCha8Rng) -> f64 {
    let roll: f64 = rng.gen();
    if roll < cfg.open_prob {
        sanitize(f64::INFINITY, DegenerateKind::OpenResistance)
    } else if roll < cfg.open_prob + cfg.short_prob {
        sanitize(0.0, DegenerateKind::ShortResistance)
    } else {
        cfg.r_range.sample(rng)
    }
}

fn draw_reactance(range: &ValueRange, rng: &mut ChaCha8Rng) -> f64 {
    // A sampled zero reactance is an absent element; the short rule keeps
    // the feature nonzero.
    sanitize(range.sample(rng), DegenerateKind::ShortResistance)
}

fn draw_voltage(cfg: &SamplerConfig, rng: &mut ChaCha8Rng, allow_zeroing: bool) -> f64 {
    if allow_zeroing {
        let roll: f64 = rng.gen();
        if roll < cfg.zero_volt_prob {
            return sanitize(0.0, DegenerateKind::ZeroVoltage);
        }
    }
    cfg.e_range.sample(rng)
}

/// Which branches carry a sampled source, and whether the zero-volt
/// degeneracy may be injected into them.
fn source_plan(class: CircuitClass) -> (Vec<usize>, bool) {
    match class {
        CircuitClass::ResistiveOneLoop | CircuitClass::LcrOneLoop => (vec![0], true),
        CircuitClass::ResistiveTwoLoop
        | CircuitClass::ResistiveFourLoop
        | CircuitClass::LcrFourLoop => ((0..class.branch_count()).collect(), true),
        // A zeroed source would collapse 2b's single-source invariant.
        CircuitClass::LcrTwoLoop => (vec![0], false),
        CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => (vec![0], true),
    }
}

fn draw_circuit(cfg: &SamplerConfig, rng: &mut ChaCha8Rng) -> CircuitInstance {
    let class = cfg.class;
    let n = class.branch_count();
    let (source_branches, allow_zeroing) = source_plan(class);

    let mut branches = Vec::with_capacity(n);
    for index in 0..n {
        let r = if class.is_amplifier() && index == 1 {
            AMP_MIDDLE_RESISTANCE
        } else {
            draw_resistance(cfg, rng)
        };
        let (xl, xc) = if class.has_reactance() {
            (
                draw_reactance(&cfg.xl_range, rng),
                draw_reactance(&cfg.xc_range, rng),
            )
        } else {
            (0.0, 0.0)
        };
        let e = if source_branches.contains(&index) {
            draw_voltage(cfg, rng, allow_zeroing)
        } else {
            0.0
        };
        branches.push(BranchElement {
            r,
            xl,
            xc,
            e,
            source_phase: 0.0,
        });
    }
    CircuitInstance { class, branches }
}

/// Seeded shuffle-and-split. Test rows keep their targets as hidden ground
/// truth for evaluation; they are never fed to training.
pub fn split_train_test(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(Error::InvalidArgument(format!(
            "test_fraction = {test_fraction} must lie in [0, 1)"
        )));
    }
    let n = ds.rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let test_count = (n as f64 * test_fraction).round() as usize;
    let mut test_indices: Vec<usize> = order[..test_count].to_vec();
    let mut train_indices: Vec<usize> = order[test_count..].to_vec();
    test_indices.sort_unstable();
    train_indices.sort_unstable();

    let pick = |indices: &[usize]| Dataset {
        class: ds.class,
        seed: ds.seed,
        context: ds.context,
        rows: indices.iter().map(|&i| ds.rows[i].clone()).collect(),
    };
    Ok((pick(&train_indices), pick(&test_indices)))
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextSidecar {
    r_max: f64,
    xl_max: f64,
    xc_max: f64,
    e_max: f64,
    class: CircuitClass,
    seed: u64,
}

/// Writes the dataset as CSV (header row, 17-significant-digit decimals, LF
/// line endings) plus a JSON context sidecar.
pub fn write_dataset(ds: &Dataset, csv_path: &Path, context_path: &Path) -> Result<()> {
    let mut header: Vec<String> = ds.class.feature_names();
    header.extend(ds.class.target_names());

    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &ds.rows {
        let cells: Vec<String> = row
            .features
            .iter()
            .chain(&row.targets)
            .map(|v| format!("{v:.16e}"))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut file = std::fs::File::create(csv_path).map_err(|e| Error::io(csv_path, e))?;
    file.write_all(out.as_bytes())
        .map_err(|e| Error::io(csv_path, e))?;

    let sidecar = ContextSidecar {
        r_max: ds.context.r_max,
        xl_max: ds.context.xl_max,
        xc_max: ds.context.xc_max,
        e_max: ds.context.e_max,
        class: ds.class,
        seed: ds.seed,
    };
    let json =
        serde_json::to_string_pretty(&sidecar).expect("context serialization cannot fail");
    std::fs::write(context_path, json + "\n").map_err(|e| Error::io(context_path, e))?;
    Ok(())
}

/// Reads a normalization context sidecar.
pub fn read_context(context_path: &Path) -> Result<(NormalizationContext, CircuitClass, u64)> {
    let text = std::fs::read_to_string(context_path).map_err(|e| Error::io(context_path, e))?;
    let sidecar: ContextSidecar = serde_json::from_str(&text)
        .map_err(|e| Error::malformed(context_path, e.to_string()))?;
    let context = NormalizationContext {
        r_max: sidecar.r_max,
        xl_max: sidecar.xl_max,
        xc_max: sidecar.xc_max,
        e_max: sidecar.e_max,
    };
    context.validate()?;
    Ok((context, sidecar.class, sidecar.seed))
}

/// Reads a dataset written by [`write_dataset`]. Malformed rows are reported
/// with their line and column.
pub fn read_dataset(csv_path: &Path, context_path: &Path) -> Result<Dataset> {
    let (context, class, seed) = read_context(context_path)?;

    let file = std::fs::File::open(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let feature_count = class.architecture().input_count;
    let target_count = class.output_count();
    let expected_cells = feature_count + target_count;

    let mut expected_header: Vec<String> = class.feature_names();
    expected_header.extend(class.target_names());

    let header = match lines.next() {
        Some((_, Ok(line))) => line,
        Some((_, Err(e))) => return Err(Error::io(csv_path, e)),
        None => {
            return Err(Error::Parse {
                path: csv_path.into(),
                line: 1,
                column: 1,
                message: "missing header row".into(),
            })
        }
    };
    if header.split(',').map(str::trim).collect::<Vec<_>>() != expected_header {
        return Err(Error::Parse {
            path: csv_path.into(),
            line: 1,
            column: 1,
            message: format!("header does not match class {class} column layout"),
        });
    }

    let mut rows = Vec::new();
    for (index, line) in lines {
        let line = line.map_err(|e| Error::io(csv_path, e))?;
        if line.is_empty() {
            continue;
        }
        let line_no = index + 1;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != expected_cells {
            return Err(Error::Parse {
                path: csv_path.into(),
                line: line_no,
                column: cells.len(),
                message: format!("expected {expected_cells} columns, found {}", cells.len()),
            });
        }
        let mut values = Vec::with_capacity(expected_cells);
        for (col, cell) in cells.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                path: csv_path.into(),
                line: line_no,
                column: col + 1,
                message: format!("`{cell}` is not a number"),
            })?;
            values.push(value);
        }
        rows.push(NormalizedSample {
            features: values[..feature_count].to_vec(),
            targets: values[feature_count..].to_vec(),
        });
    }

    Ok(Dataset {
        class,
        seed,
        context,
        rows,
    })
}
