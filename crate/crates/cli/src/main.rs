use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qmaxent_cli::{parse_scenario, run_scenario, Builtin, RunError, RunOptions, ScenarioSpec, Task, EXIT_PARSE, EXIT_SOLVER};

/// Quantum maximum-entropy inference on Gibbs families.
#[derive(Debug, Parser)]
#[command(name = "qmaxent", version)]
struct Args {
    /// eigencurves | boundary | groundstate-scan | maxent | pythagorean | correlation | discontinuity
    #[arg(long)]
    task: Option<Task>,
    /// Scenario document (TOML).
    #[arg(long, value_name = "FILE", conflicts_with = "builtin")]
    spec: Option<PathBuf>,
    /// example1 | example2 | example3 | ghz3
    #[arg(long, value_name = "NAME")]
    builtin: Option<Builtin>,
    /// Angle grid size on [0, 2π).
    #[arg(long, default_value_t = 720)]
    angles: usize,
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Report entropies in bits.
    #[arg(long)]
    bits: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol_solve: Option<f64>,
    #[arg(long)]
    tol_face: Option<f64>,
}

const THREADS_VAR: &str = "MAXENT_GIBBS_THREADS";

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(v) = std::env::var(THREADS_VAR) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_VAR} must be a positive integer, got `{v}`");
                return ExitCode::from(EXIT_PARSE);
            }
        }
    }

    let mut spec = match (&args.spec, args.builtin) {
        (Some(path), _) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return ExitCode::from(EXIT_PARSE);
                }
            };
            match parse_scenario(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}:{e}", path.display());
                    return ExitCode::from(EXIT_PARSE);
                }
            }
        }
        (None, Some(b)) => ScenarioSpec::from_builtin(b),
        (None, None) => {
            eprintln!("error: give --spec FILE or --builtin NAME");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    if let Some(t) = args.tol_solve {
        spec.tolerances.tol_solve = t;
    }
    if let Some(t) = args.tol_face {
        spec.tolerances.tol_face = t;
    }
    let Some(task) = args.task.or(spec.task) else {
        eprintln!("error: no task given (use --task or `task` in the scenario)");
        return ExitCode::from(EXIT_PARSE);
    };
    if args.angles < 8 {
        eprintln!("error: --angles must be at least 8");
        return ExitCode::from(EXIT_PARSE);
    }
    let opts = RunOptions {
        task,
        out_dir: args.out,
        angles: args.angles,
        bits: args.bits,
        seed: args.seed,
    };
    match run_scenario(&spec, &opts) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e @ RunError::Input(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}
