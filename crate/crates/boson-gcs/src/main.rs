use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use boson_gcs::experiments::{
    ensemble_to_json, matrix_from_json, run_experiment, run_validate, write_csv, write_json,
    ExperimentConfig, ExperimentKind, MatrixJson,
};
use boson_gcs::permanent::{permanent_glynn, permanent_naive, permanent_ryser, MAX_NAIVE_DIM};
use boson_gcs::{Error, Result};

#[derive(Parser)]
#[command(
    name = "boson-gcs",
    version,
    about = "Exact boson-sampling state-vector simulation with generalized coherent states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file (kebab-case keys; unknown keys are errors).
    /// Desk-scale defaults are used for anything omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the master seed from the config.
    #[arg(long)]
    seed: Option<u64>,

    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker thread count; defaults to all cores. Results are identical
    /// for any value.
    #[arg(long)]
    threads: Option<usize>,

    /// Also write a JSON mirror of the records next to --out.
    #[arg(long)]
    json: bool,

    /// Record measured wall time in the CSV. Off by default so reruns of the
    /// same config and seed are byte-identical.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy vs bipartition point, averaged over Haar circuits.
    PageCurve(SweepArgs),
    /// Page curves for several Renyi indices.
    AlphaSweep(SweepArgs),
    /// Equal-partition entropy vs total mode number.
    ModeSaturation(SweepArgs),
    /// Equal-partition entropy vs evolution depth t.
    Buildup(SweepArgs),
    /// Full bipartition sweep at fixed depth t < 1.
    Asymmetric(SweepArgs),
    /// Permanent of a JSON matrix by all three algorithms, with timings.
    Permanent {
        /// Matrix file: {"dim": n, "entries": [[re, im], ...]} row-major.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run every cross-validation suite and print a deviation table.
    Validate {
        #[arg(long)]
        seed: Option<u64>,
        /// Scale one expansion amplitude by 1 + 1e-3; the reconstruction
        /// suite must catch it (self-test of the suite's sensitivity).
        #[arg(long)]
        inject_fault: bool,
        /// Dump the ensembles used by the reconstruction suite as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Numerical(_) | Error::NotUnitary { .. } => 3,
        _ => 1,
    }
}

fn with_thread_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(f),
        Some(_) => Err(Error::Config("--threads must be >= 1".into())),
        None => f(),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            ExperimentConfig::from_json(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn run_sweep(kind: ExperimentKind, args: &SweepArgs) -> Result<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if args.timings {
        cfg.timings = Some(true);
    }
    let resolved = cfg.resolve(kind)?;

    let start = Instant::now();
    let records = with_thread_pool(args.threads, || run_experiment(&resolved))?;
    let elapsed = start.elapsed().as_secs_f64();

    match &resolved.out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            write_csv(&records, std::io::BufWriter::new(file))?;
            if args.json {
                let mirror = path.with_extension("json");
                write_json(
                    &records,
                    std::io::BufWriter::new(std::fs::File::create(&mirror)?),
                )?;
            }
            eprintln!(
                "{}: {} records -> {} ({elapsed:.2} s)",
                kind.name(),
                records.len(),
                path.display()
            );
        }
        None => {
            if args.json {
                return Err(Error::Config("--json requires --out".into()));
            }
            let stdout = std::io::stdout();
            write_csv(&records, stdout.lock())?;
            eprintln!(
                "{}: {} records ({elapsed:.2} s)",
                kind.name(),
                records.len()
            );
        }
    }
    Ok(())
}

fn run_permanent(path: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let json: MatrixJson = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let matrix = matrix_from_json(&json)?;
    let n = matrix.nrows();

    let report = |name: &str, value: Result<(num_complex::Complex64, f64)>| match value {
        Ok((per, secs)) => {
            println!(
                "{name:>6}: {:+.15e} {:+.15e}i   ({:.3} ms)",
                per.re,
                per.im,
                secs * 1e3
            )
        }
        Err(e) => println!("{name:>6}: skipped ({e})"),
    };

    let timed =
        |f: &dyn Fn() -> Result<num_complex::Complex64>| -> Result<(num_complex::Complex64, f64)> {
            let start = Instant::now();
            let v = f()?;
            Ok((v, start.elapsed().as_secs_f64()))
        };

    println!("permanent of {}x{n} matrix from {}", n, path.display());
    if n <= MAX_NAIVE_DIM {
        report("naive", timed(&|| permanent_naive(&matrix)));
    } else {
        println!(" naive: skipped (n > {MAX_NAIVE_DIM})");
    }
    report("ryser", timed(&|| permanent_ryser(&matrix)));
    report("glynn", timed(&|| permanent_glynn(&matrix)));
    Ok(())
}

fn run_validation(seed: Option<u64>, inject_fault: bool, dump: &Option<PathBuf>) -> Result<bool> {
    if let Some(path) = dump {
        let ens = boson_gcs::gcs::kan_expand_single_occupancy(3, 5)?;
        let u = boson_gcs::unitary::haar_unitary(5, seed.unwrap_or(1))?;
        let evolved = boson_gcs::gcs::evolve(&ens, &u)?;
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), &ensemble_to_json(&evolved))
            .map_err(|e| Error::Config(e.to_string()))?;
        eprintln!("wrote evolved ensemble to {}", path.display());
    }

    let report = run_validate(seed.unwrap_or(1), inject_fault)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "{:<26} {:>14} {:>10} {:>9}  status",
        "suite", "max deviation", "tolerance", "time"
    )?;
    for s in &report.suites {
        writeln!(
            out,
            "{:<26} {:>14.3e} {:>10.1e} {:>8.3}s  {}",
            s.name,
            s.max_deviation,
            s.tolerance,
            s.seconds,
            if s.passed { "ok" } else { "FAILED" }
        )?;
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool> = match &cli.command {
        Command::PageCurve(a) => run_sweep(ExperimentKind::PageCurve, a).map(|_| true),
        Command::AlphaSweep(a) => run_sweep(ExperimentKind::AlphaSweep, a).map(|_| true),
        Command::ModeSaturation(a) => run_sweep(ExperimentKind::ModeSaturation, a).map(|_| true),
        Command::Buildup(a) => run_sweep(ExperimentKind::Buildup, a).map(|_| true),
        Command::Asymmetric(a) => run_sweep(ExperimentKind::Asymmetric, a).map(|_| true),
        Command::Permanent { matrix } => run_permanent(matrix).map(|_| true),
        Command::Validate {
            seed,
            inject_fault,
            dump,
        } => run_validation(*seed, *inject_fault, dump),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
