//! The `hssp` command line: generate instances, solve them, verify
//! solutions and inspect Moser values.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use hssp::io::{self, AnyInstance, ModeChoice};
use hssp::{
    check_moser, generate_instance, iteration_bound, moser_value, singular_scan, solve_brute, solve_vieta,
    verify_solution, BigInt, BigRational, BruteOptions, Distribution, Instance, NumericMode, Scalar, SolveReport, Status, VietaOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_SOLUTION: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hssp", version, about = "Recover a hidden multiset from its k-subset sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a random hidden multiset and write its subset-sum instance
    #[command(group(ArgGroup::new("dist").required(true).args(["int_range", "unit_float"])))]
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
        /// Uniform integers in LO..=HI
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        int_range: Option<Vec<i64>>,
        /// Uniform binary64 values in [0, 1)
        #[arg(long)]
        unit_float: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the hidden multiset
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Redraw repeated elements
        #[arg(long)]
        distinct: bool,
    },
    /// Recover the hidden multiset of an instance
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        /// Brute force: list every solution instead of stopping at the first
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Absolute tolerance in float mode
        #[arg(long)]
        eps: Option<f64>,
        /// Largest denominator tried when reconstructing exact roots
        #[arg(long)]
        max_den: Option<u64>,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Brute-force worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a candidate multiset against an instance
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Report singular (n, k) pairs
    #[command(group(ArgGroup::new("range").required(true).args(["n", "n_max"])))]
    CheckSingular {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Print one Moser value
    Moser {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        u: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Vieta,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Auto,
    Rational,
    Float,
}

impl From<Mode> for ModeChoice {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => ModeChoice::Auto,
            Mode::Rational => ModeChoice::Rational,
            Mode::Float => ModeChoice::Float,
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_MALFORMED
        }
    }
}

fn dispatch(command: Command) -> hssp::Result<i32> {
    match command {
        Command::Generate { n, k, seed, int_range, unit_float: _, out, truth, distinct } => {
            let distribution = match int_range {
                Some(r) => Distribution::IntegerRange { lo: r[0], hi: r[1] },
                None => Distribution::UnitFloat,
            };
            if matches!(distribution, Distribution::UnitFloat) {
                generate::<f64>(n, k, seed, distribution, distinct, &out, truth.as_ref())
            } else {
                generate::<BigRational>(n, k, seed, distribution, distinct, &out, truth.as_ref())
            }
        }
        Command::Solve { algo, input, all, mode, eps, max_den, out, jobs } => {
            let cfg = SolveConfig { algo, all, max_den, out, jobs };
            match io::read_instance(&input, mode.into())? {
                AnyInstance::Exact(inst) => {
                    if eps.is_some() {
                        eprintln!("note: --eps has no effect in rational mode");
                    }
                    solve(&inst, NumericMode::exact(), &cfg)
                }
                AnyInstance::Float(inst) => {
                    let mode = eps.map_or_else(NumericMode::float, NumericMode::float_with_eps);
                    solve(&inst, mode, &cfg)
                }
            }
        }
        Command::Verify { input, solution, eps } => match io::read_instance(&input, ModeChoice::Auto)? {
            AnyInstance::Exact(inst) => verify(&inst, NumericMode::exact(), &solution),
            AnyInstance::Float(inst) => {
                verify(&inst, eps.map_or_else(NumericMode::float, NumericMode::float_with_eps), &solution)
            }
        },
        Command::CheckSingular { k, n, n_max } => {
            if let Some(n) = n {
                if k < 1 || k > n {
                    return Err(hssp::Error::MalformedInstance(format!("need 1 <= k <= n, got n={n}, k={k}")));
                }
                let d = check_moser(n, k);
                println!("n = {n}, k = {k} (reduced k = {})", d.k);
                for (u, v) in &d.values {
                    println!("  u = {u:>2}: {v}");
                }
                if d.is_singular() {
                    println!("singular at u = {:?}", d.singular_us);
                } else {
                    println!("non-singular");
                }
            } else {
                let n_max = n_max.expect("clap enforces one of --n, --n-max");
                let hits = singular_scan(k, 1..=n_max);
                println!("singular n for k = {k}, n <= {n_max}: {:?}", hits.iter().map(|(n, _)| *n).collect::<Vec<_>>());
                for (n, us) in hits {
                    println!("  n = {n}: u = {us:?}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Moser { n, k, u } => {
            if k < 1 || k > n || u < 1 {
                return Err(hssp::Error::MalformedInstance(format!("need 1 <= k <= n and u >= 1, got n={n}, k={k}, u={u}")));
            }
            println!("{}", moser_value(n, k, u));
            Ok(EXIT_OK)
        }
    }
}

fn generate<S: Scalar>(
    n: u32,
    k: u32,
    seed: u64,
    distribution: Distribution,
    distinct: bool,
    out: &PathBuf,
    truth: Option<&PathBuf>,
) -> hssp::Result<i32> {
    let (instance, solution) = generate_instance::<S>(n, k, seed, distribution, distinct)?;
    io::write_instance(out, &instance)?;
    if let Some(path) = truth {
        io::write_solution(path, &solution)?;
    }
    println!("wrote {} sums (n = {n}, k = {k}, {}) to {}", instance.sums().len(), S::KIND.as_str(), out.display());
    for w in &instance.warnings {
        println!("warning: {w}");
    }
    Ok(EXIT_OK)
}

struct SolveConfig {
    algo: Algo,
    all: bool,
    max_den: Option<u64>,
    out: Option<PathBuf>,
    jobs: usize,
}

fn solve<S: Scalar>(instance: &Instance<S>, mode: NumericMode, cfg: &SolveConfig) -> hssp::Result<i32> {
    let report = match cfg.algo {
        Algo::Vieta => {
            let mut opts = VietaOptions::new(mode);
            if let Some(d) = cfg.max_den {
                opts.max_denominator = d;
            }
            solve_vieta(instance, &opts)
        }
        Algo::Brute => {
            let counter = Arc::new(AtomicU64::new(0));
            let opts = BruteOptions { find_all: cfg.all, jobs: cfg.jobs, progress: Some(counter.clone()) };
            with_progress(counter, iteration_bound(instance.n, instance.k.min(instance.n - instance.k)), || {
                solve_brute(instance, &opts, &mode)
            })?
        }
    };
    print_report(&report);
    if let Some(path) = &cfg.out {
        io::write_report(path, &report)?;
    }
    Ok(match report.status {
        Status::Unique | Status::Multiple => EXIT_OK,
        Status::NoSolution => EXIT_NO_SOLUTION,
        Status::Singular => EXIT_SINGULAR,
        Status::Inconsistent => EXIT_INCONSISTENT,
    })
}

// Prints the cursor count against the worst case to stderr once a second.
fn with_progress<T>(counter: Arc<AtomicU64>, bound: BigInt, work: impl FnOnce() -> T) -> T {
    let done = Arc::new(AtomicBool::new(false));
    let ticker = {
        let done = done.clone();
        thread::spawn(move || {
            let mut waited = Duration::ZERO;
            let step = Duration::from_millis(50);
            while !done.load(Ordering::Relaxed) {
                thread::sleep(step);
                waited += step;
                if waited >= Duration::from_secs(1) {
                    waited = Duration::ZERO;
                    eprintln!("brute force: {} of at most {bound} cursor tuples", counter.load(Ordering::Relaxed));
                }
            }
        })
    };
    let out = work();
    done.store(true, Ordering::Relaxed);
    let _ = ticker.join();
    out
}

fn print_report<S: Scalar>(report: &SolveReport<S>) {
    println!("status: {}", report.status);
    println!("n = {}, k = {}, mode = {}", report.n, report.k, report.mode.kind.as_str());
    for (i, (s, dev)) in report.solutions.iter().zip(&report.verification).enumerate() {
        let xs: Vec<String> = s.iter().map(Scalar::to_canonical).collect();
        println!("solution {}: {}", i + 1, xs.join(" "));
        println!("  max deviation: {}", dev.to_canonical());
    }
    if report.moser.is_singular() {
        println!("singular u: {:?}", report.moser.singular_us);
    }
    if let Some(it) = report.iterations {
        println!("cursor tuples: {it}");
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("elapsed: {:.3?}", report.elapsed);
}

fn verify<S: Scalar>(instance: &Instance<S>, mode: NumericMode, solution: &PathBuf) -> hssp::Result<i32> {
    let candidate = io::read_solution::<S>(solution)?;
    if candidate.elements.len() != instance.n as usize {
        println!("mismatch: expected {} elements, found {}", instance.n, candidate.elements.len());
        return Ok(EXIT_NO_SOLUTION);
    }
    let (ok, dev) = verify_solution(instance, &candidate.elements, &mode);
    if ok {
        println!("ok: max deviation {}", dev.to_canonical());
        Ok(EXIT_OK)
    } else {
        println!("mismatch: max deviation {}", dev.to_canonical());
        Ok(EXIT_NO_SOLUTION)
    }
}
