//! Command-line experiment runner.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ohmnet::circuit::{CircuitClass, CircuitInstance};
use ohmnet::config::{
    self, default_amp_config, default_class_experiment, default_ohm_config, default_sweep_config,
    ConfigOverrides,
};
use ohmnet::error::{Error, Result};
use ohmnet::experiment::{
    run_amplifier_experiment, run_class_experiment, run_ohm_experiment, sweep, ExperimentOutcome,
    SweepHit,
};
use ohmnet::mlp::{train, NetworkWeights};
use ohmnet::pipeline::{
    apply_noise_offset, denormalize_outputs, features_of, generate_dataset, read_context,
    read_dataset, write_dataset,
};
use ohmnet::report::{emit_report, ReportFormat};
use ohmnet::solver::probe_response;

#[derive(Parser)]
#[command(
    name = "ohmnet",
    version,
    about = "Train and run neural-network surrogates for AC circuit response"
)]
struct Cli {
    /// Base seed; overrides the committed default seeds of the chosen
    /// command (sample, train, split, init seeds are derived from it).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Key-value config file overriding the committed defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset: dataset.csv plus context.json.
    Gen {
        /// Circuit class: 1a, 1b, 1c, 2a, 2b, 2c, amp_electrical, amp_electronic.
        #[arg(long)]
        class: String,
    },
    /// Train a network on an existing dataset and write weights.json.
    Train {
        /// Path to dataset.csv.
        #[arg(long)]
        data: PathBuf,
        /// Path to the context sidecar; defaults to context.json next to the data.
        #[arg(long)]
        context: Option<PathBuf>,
        /// Resume from previously saved weights instead of a fresh network.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Predict a circuit's response with trained weights.
    Predict {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        context: PathBuf,
        /// Circuit instance JSON file.
        #[arg(long)]
        circuit: PathBuf,
        /// Also solve the circuit exactly and print the comparison.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Run the full experiment for one class: generate, split, train, evaluate.
    Eval {
        /// Circuit class: 1a, 1b, 1c, 2a, 2b or 2c.
        #[arg(long)]
        class: String,
    },
    /// Run the Ohm's-law study on a quantized (V, R) grid.
    Ohm,
    /// Run the paired electrical/electronic amplifier study.
    Amp,
    /// Enumerate circuits at quantum intervals and keep the ones whose
    /// predicted response falls inside the band.
    Sweep {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        context: PathBuf,
        /// Lower edge of the current band in amperes.
        #[arg(long)]
        current_min: Option<f64>,
        /// Upper edge of the current band in amperes.
        #[arg(long)]
        current_max: Option<f64>,
        /// Optional phase band in degrees.
        #[arg(long)]
        phase_min: Option<f64>,
        #[arg(long)]
        phase_max: Option<f64>,
        /// Enumeration size cap.
        #[arg(long)]
        cap: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_cli_overrides(path: Option<&PathBuf>) -> Result<ConfigOverrides> {
    match path {
        Some(p) => config::load_overrides(p),
        None => Ok(ConfigOverrides::default()),
    }
}

fn write_experiment_files(out: &Path, prefix: &str, outcome: &ExperimentOutcome) -> Result<()> {
    let name = |base: &str| {
        if prefix.is_empty() {
            out.join(base)
        } else {
            out.join(format!("{prefix}{base}"))
        }
    };
    write_dataset(&outcome.dataset, &name("dataset.csv"), &name("context.json"))?;
    outcome.network.save(&name("weights.json"))?;
    for format in [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown] {
        emit_report(
            &outcome.report,
            format,
            &name(&format!("report.{}", format.extension())),
        )?;
    }
    Ok(())
}

fn print_summary(label: &str, outcome: &ExperimentOutcome, threshold: f64) -> bool {
    let m = &outcome.report.metrics;
    println!(
        "{label}: train {} rows, test {} rows, final MSE {:.6}",
        outcome.report.train_count, outcome.report.test_count, outcome.report.train_report.final_loss
    );
    println!(
        "{label}: held-out normalized RMSE {:.6} (threshold {threshold}), max |err| {:.6}",
        m.rmse_norm, m.max_abs_error_norm
    );
    if outcome.report.saturated_targets > 0 {
        eprintln!(
            "warning: {} current targets sit at or above the sigmoid saturation level",
            outcome.report.saturated_targets
        );
    }
    let pass = m.rmse_norm <= threshold;
    println!(
        "{label}: threshold check {}",
        if pass { "pass" } else { "FAIL" }
    );
    pass
}

fn run(cli: Cli) -> Result<ExitCode> {
    std::fs::create_dir_all(&cli.out).map_err(|e| Error::io(&cli.out, e))?;
    let overrides = load_cli_overrides(cli.config.as_ref())?;

    match cli.command {
        Command::Gen { class } => {
            let class = CircuitClass::from_id(&class)?;
            let mut cfg = default_class_experiment(class);
            overrides.apply_experiment(&mut cfg);
            if let Some(base) = cli.seed {
                cfg.sampler.seed = config::derive_seeds(base).0;
            }
            let dataset = generate_dataset(&cfg.sampler)?;
            let csv = cli.out.join("dataset.csv");
            let ctx = cli.out.join("context.json");
            write_dataset(&dataset, &csv, &ctx)?;
            println!(
                "wrote {} rows for class {class} to {} (context: {})",
                dataset.len(),
                csv.display(),
                ctx.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Train {
            data,
            context,
            resume,
        } => {
            let context_path = context
                .unwrap_or_else(|| data.parent().unwrap_or(Path::new(".")).join("context.json"));
            let dataset = read_dataset(&data, &context_path)?;
            let class = dataset.class;

            let mut cfg = default_class_experiment(class);
            overrides.apply_experiment(&mut cfg);
            if let Some(base) = cli.seed {
                let (_, train_seed, _, init_seed) = config::derive_seeds(base);
                cfg.train.seed = train_seed;
                cfg.init_seed = init_seed;
            }

            let arch = class.architecture();
            let mut network = match resume {
                Some(path) => NetworkWeights::load_for(&path, &arch)?,
                None => NetworkWeights::init(&arch, cfg.init_seed),
            };
            let noisy = apply_noise_offset(&dataset, cfg.noise_offset);
            let report = train(&mut network, &noisy, &cfg.train)?;
            let weights_path = cli.out.join("weights.json");
            network.save(&weights_path)?;
            println!(
                "trained class {class} for {} cycles: MSE {:.6} -> {:.6}; wrote {}",
                report.loss_per_cycle.len(),
                report.loss_per_cycle.first().unwrap_or(&0.0),
                report.final_loss,
                weights_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Predict {
            weights,
            context,
            circuit,
            with_oracle,
        } => {
            let (ctx, class, _) = read_context(&context)?;
            let network = NetworkWeights::load_for(&weights, &class.architecture())?;
            let text =
                std::fs::read_to_string(&circuit).map_err(|e| Error::io(&circuit, e))?;
            let instance = CircuitInstance::from_json(&text)?;
            if instance.class != class {
                return Err(Error::InvalidArgument(format!(
                    "circuit class {} does not match weights class {class}",
                    instance.class
                )));
            }

            let features = features_of(&instance, &ctx);
            let outputs = network.forward(&features)?;
            let predicted = denormalize_outputs(&outputs, &ctx);
            let mut lines = vec![format!(
                "predicted: {:.6} A at {:.3} deg",
                predicted.current_mag, predicted.phase_deg
            )];
            if with_oracle {
                let oracle = probe_response(&instance)?;
                lines.push(format!(
                    "oracle:    {:.6} A at {:.3} deg",
                    oracle.current_mag, oracle.phase_deg
                ));
                lines.push(format!(
                    "error:     {:.6} A, {:.3} deg",
                    (predicted.current_mag - oracle.current_mag).abs(),
                    (predicted.phase_deg - oracle.phase_deg).abs()
                ));
            }
            let body = lines.join("\n") + "\n";
            print!("{body}");
            let out_path = cli.out.join("prediction.txt");
            std::fs::write(&out_path, body).map_err(|e| Error::io(&out_path, e))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Eval { class } => {
            let class = CircuitClass::from_id(&class)?;
            let mut cfg = default_class_experiment(class);
            overrides.apply_experiment(&mut cfg);
            if let Some(base) = cli.seed {
                let (sample, train_seed, split, init) = config::derive_seeds(base);
                cfg.sampler.seed = sample;
                cfg.train.seed = train_seed;
                cfg.split_seed = split;
                cfg.init_seed = init;
            }
            let outcome = run_class_experiment(&cfg)?;
            write_experiment_files(&cli.out, "", &outcome)?;
            let pass = print_summary(&format!("class {class}"), &outcome, cfg.rmse_threshold);
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }

        Command::Ohm => {
            let mut cfg = default_ohm_config();
            overrides.apply_ohm(&mut cfg);
            if let Some(base) = cli.seed {
                let (_, train_seed, split, init) = config::derive_seeds(base);
                cfg.train.seed = train_seed;
                cfg.split_seed = split;
                cfg.init_seed = init;
            }
            let outcome = run_ohm_experiment(&cfg)?;
            write_experiment_files(&cli.out, "", &outcome)?;
            let pass = print_summary("ohm", &outcome, cfg.rmse_threshold);
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }

        Command::Amp => {
            let mut cfg = default_amp_config();
            overrides.apply_amp(&mut cfg);
            if let Some(base) = cli.seed {
                let (sample, train_seed, split, init) = config::derive_seeds(base);
                cfg.sampler.seed = sample;
                cfg.train.seed = train_seed;
                cfg.split_seed = split;
                cfg.init_seed = init;
            }
            let outcome = run_amplifier_experiment(&cfg)?;
            write_experiment_files(&cli.out, "electrical_", &outcome.electrical)?;
            write_experiment_files(&cli.out, "electronic_", &outcome.electronic)?;
            let pass_electrical =
                print_summary("amp electrical", &outcome.electrical, cfg.rmse_threshold);
            let pass_electronic =
                print_summary("amp electronic", &outcome.electronic, cfg.rmse_threshold);
            Ok(if pass_electrical && pass_electronic {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }

        Command::Sweep {
            weights,
            context,
            current_min,
            current_max,
            phase_min,
            phase_max,
            cap,
        } => {
            let (ctx, class, _) = read_context(&context)?;
            let network = NetworkWeights::load_for(&weights, &class.architecture())?;

            let mut cfg = default_sweep_config();
            cfg.class = class;
            overrides.apply_sweep(&mut cfg)?;
            if let Some(v) = current_min {
                cfg.criterion.current_min = v;
            }
            if let Some(v) = current_max {
                cfg.criterion.current_max = v;
            }
            if phase_min.is_some() || phase_max.is_some() {
                cfg.criterion.phase_min = phase_min;
                cfg.criterion.phase_max = phase_max;
            }
            if let Some(v) = cap {
                cfg.cap = v;
            }

            let hits = sweep(&cfg, &network, &ctx)?;
            write_sweep_files(&cli.out, class, &hits)?;
            println!(
                "sweep kept {} circuits inside i in [{}, {}] A",
                hits.len(),
                cfg.criterion.current_min,
                cfg.criterion.current_max
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_sweep_files(out: &Path, class: CircuitClass, hits: &[SweepHit]) -> Result<()> {
    let csv_path = out.join("sweep.csv");
    let mut text = String::new();
    let mut header = class.feature_names();
    header.extend(["i_pred".into(), "phi_pred".into(), "distance".into()]);
    text.push_str(&header.join(","));
    text.push('\n');
    for hit in hits {
        let mut cells: Vec<String> = hit
            .element_values
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect();
        cells.push(format!("{:.16e}", hit.predicted.current_mag));
        cells.push(format!("{:.16e}", hit.predicted.phase_deg));
        cells.push(format!("{:.16e}", hit.distance));
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(&csv_path, text).map_err(|e| Error::io(&csv_path, e))?;

    let json_path = out.join("sweep.json");
    let json = serde_json::to_string_pretty(hits).expect("sweep serialization cannot fail");
    std::fs::write(&json_path, json + "\n").map_err(|e| Error::io(&json_path, e))?;
    Ok(())
}
