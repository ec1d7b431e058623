use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use srbb_qsp::statelib::{realize, StateSpec};
use srbb_qsp_cli::commands::{self, check_converged, REPLAY_TOLERANCE};
use srbb_qsp_cli::config::{load_spec, Loss, Optimizer};
use srbb_qsp_cli::{bench, init_threads, parse_n_range, CliConfig, CliError, CliResult};

#[derive(Parser)]
#[command(name = "srbb-qsp", version, about = "State preparation with diagonal SRBB circuits")]
struct Cli {
    /// TOML configuration; flags override its values.
    #[arg(long, global = true, value_name = "TOML")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// Root directory for run directories.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print the record or table as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted and measured depth and gate counts.
    Analyze {
        /// Single n, a range such as 2..=8 or 2-8, or a list.
        #[arg(long, default_value = "2-8")]
        n: String,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form preparation of a state spec.
    ExactPrepare {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Two-stage variational training.
    Train {
        /// JSON state spec; without it a Haar-random state on --n qubits.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        optimizer: Option<Optimizer>,
        #[arg(long, value_enum)]
        loss: Option<Loss>,
        #[arg(long)]
        allow_any_pairing: bool,
        /// Accepted final trace distance.
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Simulates a QASM file, or re-simulates the circuit of a run record.
    Simulate {
        #[arg(long, value_name = "FILE", conflicts_with = "record", required_unless_present = "record")]
        qasm: Option<PathBuf>,
        /// Compares against this target state.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        record: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Benchmark table over n, trials and the optimizer/loss grid.
    Bench {
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        allow_any_pairing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Writes the QASM of a spec's closed-form circuit or of a params file.
    ExportQasm {
        #[arg(long, value_name = "FILE", conflicts_with = "params", required_unless_present = "params")]
        spec: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        params: Option<PathBuf>,
        /// Directory for `circuit.qasm`; stdout when absent.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn print_json<S: serde::Serialize>(value: &S) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn apply_common(cfg: &mut CliConfig, common: &Common) {
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
}

fn report_prepared(record: &srbb_qsp_cli::RunRecord, path: &Path, json: bool) -> CliResult<()> {
    if json {
        return print_json(record);
    }
    let m = record.metrics.as_ref().expect("preparations carry metrics");
    println!("record      {}", path.display());
    println!("n           {}", m.n);
    println!("error       {:.3e} (threshold {:.1e})", m.final_error, m.threshold);
    println!("hellinger   {:.3e}", m.hellinger);
    println!("depth       {}  cnot {}  rot {}  other {}", m.depth, m.n_cnot, m.n_rot, m.n_other);
    println!("wall time   {:.3} s", record.wall_time);
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let mut cfg = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    match cli.command {
        Command::Analyze { n, json } => {
            let rows = commands::analyze(&parse_n_range(&n)?)?;
            if json {
                print_json(&rows)?;
            } else {
                print!("{}", commands::format_analyze(&rows));
            }
            if rows.iter().any(|r| !r.pass) {
                return Err(CliError::Validation("measured counts differ from predictions".into()));
            }
        }
        Command::ExactPrepare { spec, common } => {
            apply_common(&mut cfg, &common);
            let prepared = commands::exact_prepare_run(&load_spec(&spec)?)?;
            let (record, path) = prepared.persist(&cfg.out)?;
            report_prepared(&record, &path, common.json)?;
            check_converged(&record)?;
        }
        Command::Train { spec, n, optimizer, loss, allow_any_pairing, threshold, common } => {
            apply_common(&mut cfg, &common);
            let t = &mut cfg.train;
            if let Some(o) = optimizer {
                t.optimizer = o;
                if loss.is_none() {
                    t.loss = None;
                }
            }
            if loss.is_some() {
                t.loss = loss;
            }
            t.allow_any_pairing |= allow_any_pairing;
            if threshold.is_some() {
                t.threshold = threshold;
            }
            let target = match (spec, n) {
                (Some(path), _) => load_spec(&path)?,
                (None, Some(n)) => StateSpec::HaarRandom { n, seed: cfg.seed },
                (None, None) => return Err(CliError::Validation("train needs --spec or --n".into())),
            };
            let prepared = commands::train_run(&target, &cfg.train, cfg.seed)?;
            let (record, path) = prepared.persist(&cfg.out)?;
            report_prepared(&record, &path, common.json)?;
            check_converged(&record)?;
        }
        Command::Simulate { qasm, spec, record, json } => {
            let report = match (qasm, record) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                    let target = spec.map(|s| load_spec(&s).and_then(|s| Ok(realize(&s)?))).transpose()?;
                    commands::simulate_qasm(&text, target.as_ref())?
                }
                (None, Some(path)) => commands::simulate_record(&path)?,
                _ => return Err(CliError::Validation("simulate needs --qasm or --record".into())),
            };
            if json {
                print_json(&report)?;
            } else {
                print!("{}", commands::format_simulation(&report));
            }
            if let Some(d) = report.record_difference {
                if d > REPLAY_TOLERANCE {
                    return Err(CliError::Convergence { error: d, threshold: REPLAY_TOLERANCE });
                }
            }
        }
        Command::Bench { n, trials, allow_any_pairing, common } => {
            apply_common(&mut cfg, &common);
            if let Some(n) = n {
                cfg.bench.n = parse_n_range(&n)?;
            }
            if let Some(k) = trials {
                cfg.bench.trials = k;
            }
            cfg.train.allow_any_pairing |= allow_any_pairing;
            let (table, path) = bench::bench_command(&cfg, &cfg.out)?;
            if common.json {
                print_json(&table)?;
            } else {
                print!("{}", table.format());
                println!("record {}", path.display());
            }
        }
        Command::ExportQasm { spec, params, out } => {
            let spec = spec.map(|p| load_spec(&p)).transpose()?;
            let text = commands::export_qasm(spec.as_ref(), params.as_deref())?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                    let path = dir.join("circuit.qasm");
                    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
                    println!("{}", path.display());
                }
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}
