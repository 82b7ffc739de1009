use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use plurikp::cell_complex::decompose_flower;
use plurikp::dkp::{solve_ambo_ivp, solve_cube_ivp, Branch};
use plurikp::io::{write_atomic, FieldFile};
use plurikp::lagrangian::exterior_derivative;
use plurikp::special::{big_lambda, dilog, golden, golden_special_values, lambda_fn};
use plurikp::verifier::{
    classify_branch, closure_constant, run_suite, BranchClass, SuiteConfig, Tolerances, DEFAULT_DIM, DEFAULT_SEED,
    DEFAULT_TRIALS, TOLERANCE_TABLE,
};
use plurikp::{CellKind, Chain, Error, LatticeKind, OrientedCell, Point};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "plurikp",
    version,
    about = "Pluri-Lagrangian checks for the discrete KP equation on Q(A_N) and Z^N",
    after_help = "Tolerances are overridden with --tol.<name>=<value>; run `plurikp tolerances` for the list.\n\
                  PLURIKP_THREADS caps the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = Lattice::Qan)]
        lattice: Lattice,
        #[arg(long, default_value_t = DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Report file.
        #[arg(long, default_value = "plurikp-report.json")]
        out: PathBuf,
    },
    /// Complete initial data on one 4-cell and classify the result.
    Solve {
        #[arg(long, value_enum)]
        kind: SolveKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, alias = "out")]
        output: PathBuf,
        /// Cell to solve on; defaults to the cell named in the input file.
        #[arg(long, allow_hyphen_values = true)]
        cell: Option<String>,
        #[arg(long, value_enum, default_value_t = BranchArg::Dkp)]
        branch: BranchArg,
    },
    /// Decompose a flower into 4D corners.
    Decompose {
        /// Chain file of the flower.
        #[arg(long)]
        input: PathBuf,
        /// Center of the flower, e.g. `(0,0,0,0)`.
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        /// Also write the corner list here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the dilogarithm special values and an optional table of λ and Λ.
    DilogTest {
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// List the configurable tolerances and their defaults.
    Tolerances,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Lattice {
    Qan,
    Cubic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolveKind {
    AmboBlack,
    AmboWhite,
    Cube4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    #[value(name = "dkp")]
    Dkp,
    #[value(name = "dkp-", alias = "dkp-minus")]
    DkpMinus,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => EXIT_IO,
            e if e.is_singular() => EXIT_SINGULAR,
            Error::DecompositionResidual(_)
            | Error::ClosureNotClaimed
            | Error::Inconclusive { .. }
            | Error::NoCornerEquation(_) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Pulls `--tol.<name>=<value>` and `--tol.<name> <value>` out of argv.
fn split_tolerances(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, f64)>), Failure> {
    let mut rest = Vec::new();
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(setting) = arg.strip_prefix("--tol.") else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match setting.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| usage(format!("--tol.{setting} needs a value")))?;
                (setting.to_string(), v)
            }
        };
        let v: f64 = value.parse().map_err(|_| usage(format!("--tol.{name}: `{value}` is not a number")))?;
        tols.push((name, v));
    }
    Ok((rest, tols))
}

fn main() -> ExitCode {
    let (args, tols) = match split_tolerances(std::env::args().collect()) {
        Ok(v) => v,
        Err(f) => return report_failure(f),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command, &tols) {
        Ok(code) => ExitCode::from(code),
        Err(f) => report_failure(f),
    }
}

fn report_failure(f: Failure) -> ExitCode {
    eprintln!("error: {}", f.message);
    ExitCode::from(f.code)
}

fn tolerances(overrides: &[(String, f64)]) -> Result<Tolerances, Failure> {
    let mut t = Tolerances::default();
    for (name, v) in overrides {
        t.set(name, *v)?;
    }
    Ok(t)
}

fn run(command: Command, tols: &[(String, f64)]) -> Result<u8, Failure> {
    let tolerances = tolerances(tols)?;
    match command {
        Command::Verify { lattice, dim, trials, seed, out } => {
            let lattice = match lattice {
                Lattice::Qan => LatticeKind::RootA,
                Lattice::Cubic => LatticeKind::Cubic,
            };
            let cfg = SuiteConfig { lattice, dim, trials, seed, tolerances, ..SuiteConfig::default() };
            verify(&cfg, &out)
        }
        Command::Solve { kind, input, output, cell, branch } => {
            let branch = match branch {
                BranchArg::Dkp => Branch::Dkp,
                BranchArg::DkpMinus => Branch::DkpMinus,
            };
            solve(kind, &input, &output, cell.as_deref(), branch, &tolerances)
        }
        Command::Decompose { input, vertex, out } => decompose(&input, &vertex, out.as_deref()),
        Command::DilogTest { from, to, step } => dilog_test(from, to, step, &tolerances),
        Command::Tolerances => {
            for (name, default, description) in TOLERANCE_TABLE {
                println!("{name:<18} {default:<8e} {description}");
            }
            Ok(0)
        }
    }
}

fn verify(cfg: &SuiteConfig, out: &Path) -> Result<u8, Failure> {
    let report = run_suite(cfg)?;
    write_atomic(out, report.to_json()?.as_bytes())?;
    let mut per_check: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in &report.records {
        let e = per_check.entry(r.check.as_str()).or_default();
        e.0 += 1;
        e.1 += r.pass as usize;
    }
    println!("lattice {} N={} trials={} seed={}", cfg.lattice.name(), cfg.dim, cfg.trials, cfg.seed);
    for (check, (total, passed)) in &per_check {
        let worst = report.summary.worst_deviation.get(*check).copied().unwrap_or(0.0);
        println!("  {check:<22} {passed}/{total} pass, worst deviation {worst:.3e}");
    }
    for r in report.failures() {
        println!("FAIL {} [{}]: observed {} expected {} tolerance {:e}", r.check, r.params, r.observed, r.expected, r.tolerance);
    }
    for p in &report.rank_probes {
        println!("  rank {:<22} {} of {} variables", p.name, p.rank, p.variables);
    }
    println!("{}/{} records pass; report written to {}", report.summary.passed, report.summary.total, out.display());
    Ok(if report.summary.all_pass { 0 } else { EXIT_CHECK_FAILED })
}

fn default_cell(kind: SolveKind, dim: usize) -> Result<OrientedCell, Failure> {
    let (cell_kind, coords, idx) = match kind {
        SolveKind::AmboBlack => (CellKind::BlackAmbo4, dim + 1, vec![0, 1, 2, 3, 4]),
        SolveKind::AmboWhite => (CellKind::WhiteAmbo4, dim + 1, vec![0, 1, 2, 3, 4]),
        SolveKind::Cube4 => (CellKind::Cube4, dim, vec![0, 1, 2, 3]),
    };
    if dim < 4 {
        return Err(usage(format!("a 4-cell needs dimension at least 4, the input has {dim}")));
    }
    let level = cell_kind.level().unwrap_or(0) as i64;
    Ok(OrientedCell::new(cell_kind, Point::zeros(coords).shifted(0, -level), &idx)?)
}

fn solve(
    kind: SolveKind,
    input: &Path,
    output: &Path,
    cell: Option<&str>,
    branch: Branch,
    tol: &Tolerances,
) -> Result<u8, Failure> {
    let file = FieldFile::read(input)?;
    let expected_lattice = match kind {
        SolveKind::Cube4 => LatticeKind::Cubic,
        _ => LatticeKind::RootA,
    };
    if file.lattice != expected_lattice {
        return Err(usage(format!("--kind needs a {} field file, got {}", expected_lattice.name(), file.lattice.name())));
    }
    let cell = match (cell, file.cell()?) {
        (Some(text), _) => text.parse::<OrientedCell>()?,
        (None, Some(c)) => c,
        (None, None) => default_cell(kind, file.dim)?,
    };
    let wanted = match kind {
        SolveKind::AmboBlack => CellKind::BlackAmbo4,
        SolveKind::AmboWhite => CellKind::WhiteAmbo4,
        SolveKind::Cube4 => CellKind::Cube4,
    };
    if cell.kind() != wanted {
        return Err(usage(format!("cell {cell} does not match --kind")));
    }
    let initial = file.to_field()?;
    let field = match kind {
        SolveKind::Cube4 => solve_cube_ivp(&cell, &initial, branch)?,
        _ => solve_ambo_ivp(&cell, &initial, branch)?,
    };
    FieldFile::from_field(&field, file.lattice, file.dim, Some(&cell)).write(output)?;
    let report = classify_branch(&field, &cell, tol)?;
    let s = exterior_derivative(&field, &cell)?;
    println!("cell {cell}");
    println!("branch {}", report.branch.name());
    println!("S = {s:.17e}");
    let agrees = report.branch == BranchClass::from(branch) && report.residuals_agree;
    if agrees {
        println!("closure constant = {:.17e}", closure_constant(&field, &cell, branch)?);
    }
    println!("wrote {}", output.display());
    Ok(if agrees { 0 } else { EXIT_CHECK_FAILED })
}

fn decompose(input: &Path, vertex: &str, out: Option<&Path>) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let flower: Chain = text.parse()?;
    let vertex = Point::parse(vertex)?;
    let d = decompose_flower(&flower, &vertex)?;
    let mut listing = format!("# {} corners, center {}\n", d.corners.len(), d.center(&vertex));
    for c in &d.corners {
        listing.push_str(&format!("{} {}\n", c.multiplicity, c.cell));
    }
    let residual = d.chain_sum()? - flower.padded(d.extra_dims);
    print!("{listing}");
    if residual.is_empty() {
        println!("residual chain: empty");
    } else {
        println!("residual chain: {residual}");
        return Ok(EXIT_CHECK_FAILED);
    }
    if let Some(path) = out {
        write_atomic(path, listing.as_bytes())?;
    }
    Ok(0)
}

fn dilog_test(from: Option<f64>, to: Option<f64>, step: f64, tol: &Tolerances) -> Result<u8, Failure> {
    let a: f64 = golden();
    println!("a = {a:.17}");
    let mut ok = true;
    for sv in golden_special_values() {
        let v = dilog(sv.argument)?;
        let dev = (v - sv.closed_form).abs();
        ok &= dev <= tol.special_values;
        println!("{:<10} z = {:>20.17}  Li2 = {:>20.17}  closed form = {:>20.17}  |diff| = {dev:.2e}", sv.label, sv.argument, v, sv.closed_form);
    }
    let l = 0.5 * (big_lambda(a * a)? + big_lambda(-1.0 / a)? + big_lambda(1.0 / a)?);
    let target = -std::f64::consts::PI.powi(2) / 20.0;
    ok &= (l - target).abs() <= tol.special_values;
    println!("L(golden octahedron) = {l:.17}  expected {target:.17}  |diff| = {:.2e}", (l - target).abs());
    match (from, to) {
        (Some(lo), Some(hi)) => {
            if !(step > 0.0) || hi < lo {
                return Err(usage("the table needs --from <= --to and --step > 0"));
            }
            println!("{:>12} {:>24} {:>24} {:>24}", "z", "Li2(z)", "lambda(z)", "Lambda(z)");
            let n = ((hi - lo) / step).floor() as usize;
            for k in 0..=n {
                let z = lo + k as f64 * step;
                let li2 = if z <= 1.0 { format!("{:.17}", dilog(z)?) } else { "-".into() };
                let cap = if z == 0.0 { "-".into() } else { format!("{:.17}", big_lambda(z)?) };
                println!("{z:>12.6} {li2:>24} {:>24.17} {cap:>24}", lambda_fn(z)?);
            }
        }
        (None, None) => {}
        _ => return Err(usage("--from and --to go together")),
    }
    Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
}
