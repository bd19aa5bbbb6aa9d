use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use symprune::csym::{two_sided_cover, BisectionPolicy};
use symprune::problems::{cyclic_default_half_width, cyclic_n_roots_on, example_sphere};
use symprune::{
    parse_problem, verify_symmetry, IntervalBox, Problem, SolverConfig, SymmetryVerdict,
};
use symprune_cli::boxfile::{read_boxes, write_boxes};
use symprune_cli::record::RunRecord;
use symprune_cli::report::stats_report;
use symprune_cli::run::{compare_with_plain, run_solve, Mode, SolveRequest};
use symprune_cli::{classes, CliError};

#[derive(Parser)]
#[command(
    name = "symprune",
    version,
    about = "Interval solving with cyclic symmetry"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or count rotation classes of bit strings.
    #[command(subcommand)]
    Classes(ClassesCmd),
    /// Solve a problem file.
    Solve(SolveArgs),
    /// Check numerically that the declared symmetry holds.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = symprune::symmetry::DEFAULT_SYMMETRY_SAMPLES)]
        samples: usize,
    },
    /// Check that two box files cover each other within a tolerance.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: f64,
    },
    /// Write a built-in problem file.
    #[command(subcommand)]
    Emit(EmitCmd),
}

#[derive(Subcommand)]
enum ClassesCmd {
    Gen {
        #[arg(long)]
        n: usize,
        /// Only classes with this many ones.
        #[arg(long)]
        m: Option<usize>,
        /// Only classes whose period is n.
        #[arg(long)]
        full_period: bool,
    },
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum EmitCmd {
    CyclicRoots {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Sphere {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Solve the whole box without symmetry.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long, default_value_t = SolverConfig::default().epsilon)]
    epsilon: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_boxes)]
    max_boxes: u64,
    /// `midpoint` or a number strictly inside the cycle interval.
    #[arg(long, default_value = "midpoint", value_parser = parse_bisection)]
    bisection: BisectionPolicy,
    /// Concurrent representative solves.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    hex_floats: bool,
    /// Box file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stats report; stderr when absent.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// JSON run record.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Also run without symmetry and report gain and equivalence.
    #[arg(long)]
    compare: bool,
    /// Largest gap inside one cluster of boxes; defaults to 100 epsilon.
    #[arg(long)]
    cluster_gap: Option<f64>,
    /// Leave the timestamp out of the stats report.
    #[arg(long)]
    no_timestamp: bool,
}

fn parse_bisection(s: &str) -> Result<BisectionPolicy, String> {
    if s == "midpoint" {
        return Ok(BisectionPolicy::Midpoint);
    }
    s.parse::<f64>()
        .map(BisectionPolicy::Fixed)
        .map_err(|_| format!("expected `midpoint` or a number, got {s:?}"))
}

fn read_problem(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_problem(&text).map_err(|err| CliError::Parse {
        path: path.to_path_buf(),
        err,
    })
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let name = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let mut w = writer(path)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(name, e))
}

fn cmd_classes(c: ClassesCmd) -> Result<(), CliError> {
    match c {
        ClassesCmd::Gen { n, m, full_period } => {
            let mut w = writer(None)?;
            classes::generate(&mut w, n, m, full_period)?;
            w.flush().map_err(|e| CliError::io("<stdout>", e))
        }
        ClassesCmd::Count { n, format } => {
            let r = classes::count(n)?;
            let text = match format {
                Format::Text => r.to_text(),
                Format::Json => serde_json::to_string_pretty(&r)? + "\n",
            };
            write_text(None, &text)
        }
    }
}

fn cmd_solve(a: SolveArgs) -> Result<(), CliError> {
    let p = read_problem(&a.file)?;
    let req = SolveRequest {
        config: SolverConfig {
            epsilon: a.epsilon,
            max_boxes: a.max_boxes,
            ..SolverConfig::default()
        },
        bisection: a.bisection,
        parallel: a.parallel,
        use_symmetry: !a.no_symmetry,
        cluster_gap: a.cluster_gap,
    };
    let run = run_solve(&p, &req)?;
    let cmp = if a.compare && run.mode == Mode::Csym {
        Some(compare_with_plain(&p, &req, &run)?)
    } else {
        None
    };

    let out_name = a.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
    let mut w = writer(a.out.as_deref())?;
    write_boxes(
        &mut w,
        &run.solutions.boxes,
        run.mode == Mode::Csym,
        a.hex_floats,
    )
    .and_then(|_| w.flush())
    .map_err(|e| CliError::io(&out_name, e))?;
    drop(w);

    let name = a.file.display().to_string();
    let ts = (!a.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
    });
    let report = stats_report(&name, &p, &req, &run, cmp.as_ref(), ts);
    match &a.stats {
        Some(path) => std::fs::write(path, report).map_err(|e| CliError::io(path, e))?,
        None => eprint!("{report}"),
    }
    if let Some(path) = &a.record {
        RunRecord::new(&name, &req, &run, a.hex_floats).save(path)?;
    }
    if let Some(note) = &run.note {
        eprintln!("note: {note}");
    }
    if run.budget_exceeded {
        return Err(CliError::BudgetExceeded);
    }
    Ok(())
}

fn cmd_verify(file: &Path, samples: usize) -> Result<(), CliError> {
    let p = read_problem(file)?;
    let sym = p
        .symmetry()
        .ok_or_else(|| CliError::Usage("cycle required".into()))?;
    let sigma = p
        .sigma()
        .ok_or_else(|| CliError::Usage("sigma required".into()))?;
    let seed = match std::env::var("SYMPRUNE_SEED") {
        Ok(s) => s
            .parse()
            .map_err(|_| CliError::Usage(format!("SYMPRUNE_SEED must be an integer, got {s:?}")))?,
        Err(_) => 0,
    };
    let verdict = verify_symmetry(&p, sym, sigma, samples, seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match verdict {
        SymmetryVerdict::Holds => {
            println!("OK");
            Ok(())
        }
        SymmetryVerdict::RangeMismatch { constraint } => {
            println!(
                "FAIL constraint {}: range differs from its image",
                constraint + 1
            );
            Err(CliError::SymmetryFailed {
                constraint: constraint + 1,
            })
        }
        SymmetryVerdict::ValueMismatch {
            constraint,
            point,
            shifted_value,
            image_value,
        } => {
            println!(
                "FAIL constraint {}: at {:?} shifted value {} but image value {}",
                constraint + 1,
                point,
                shifted_value,
                image_value
            );
            Err(CliError::SymmetryFailed {
                constraint: constraint + 1,
            })
        }
    }
}

fn load_boxes(path: &Path) -> Result<Vec<IntervalBox>, CliError> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(read_boxes(BufReader::new(f))?
        .into_iter()
        .map(|l| l.bounds)
        .collect())
}

fn cmd_compare(a: &Path, b: &Path, tol: f64) -> Result<(), CliError> {
    let (x, y) = (load_boxes(a)?, load_boxes(b)?);
    if two_sided_cover(&x, &y, tol) {
        println!("EQUIVALENT {} {} boxes", x.len(), y.len());
        Ok(())
    } else {
        println!("DIFFERENT {} {} boxes", x.len(), y.len());
        Err(CliError::NotEquivalent { tol })
    }
}

fn cmd_emit(e: EmitCmd) -> Result<(), CliError> {
    let (p, out) = match e {
        EmitCmd::CyclicRoots { n, half_width, out } => {
            if n < 2 {
                return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
            }
            let hw = half_width.unwrap_or_else(|| cyclic_default_half_width(n));
            if !(hw > 0.0 && hw.is_finite()) {
                return Err(CliError::Usage(format!(
                    "half width must be positive, got {hw}"
                )));
            }
            (cyclic_n_roots_on(n, hw), out)
        }
        EmitCmd::Sphere { out } => (example_sphere(), out),
    };
    write_text(out.as_deref(), &p.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.cmd {
        Command::Classes(c) => cmd_classes(c),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify { file, samples } => cmd_verify(&file, samples),
        Command::Compare { a, b, tol } => cmd_compare(&a, &b, tol),
        Command::Emit(e) => cmd_emit(e),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
