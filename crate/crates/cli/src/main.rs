//! `dispkit`: generate structured matrices, displace them, measure
//! displacement ranks, invert, certify and run the verification suites.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on usage or input
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dispkit::displacement::{reconstruct_nabla, DisplacementKind, DisplacementPattern};
use dispkit::inverses::{moore_penrose, penrose_residuals, penrose_scale, pinv};
use dispkit::io::{format_matrix, read_matrix, write_matrix};
use dispkit::pattern::{PatternSpec, SideSpec};
use dispkit::psym::{is_p_symmetric, pinv_certificate};
use dispkit::rank::{exact_rank, numerical_rank, rank_with, RankMethod, DEFAULT_RANK_TOL};
use dispkit::structured::{is_hankel, is_toeplitz, StructuredSpec};
use dispkit::verify::{run_suite, DEFAULT_SIZES};
use dispkit::{FMatrix, Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    /// Rational arithmetic, exact ranks.
    Exact,
    /// f64 arithmetic, ranks by SVD threshold.
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "dispkit", version, about = "Displacement ranks of structured matrices and of their inverses")]
struct Cli {
    /// Arithmetic backend; defaults to exact, or float for pinv and certify.
    #[arg(long, global = true, value_enum)]
    backend: Option<Backend>,
    /// Relative singular-value threshold for the float backend.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a structured matrix, e.g. `toeplitz:6`, `hankel-rank:6,2`,
    /// `paper:alternate-toeplitz`.
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long, env = "DISPKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the displaced matrix `A - ZAN` or `ZA - AN`.
    Displace {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// E.g. `nabla:S,St`, `delta:Zalt,-ZaltT`, `nabla:S,St4+S3`.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the displacement rank.
    Drank {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        pattern: String,
    },
    /// Recover `A` from `∇_{Z,N} A` when `Z` or `N` is nilpotent.
    Reconstruct {
        /// The displaced matrix.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moore-Penrose pseudo-inverse by SVD, with its Penrose residuals.
    Pinv {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the E1/E2 certificate for `δ∇_{N,Z}{A^-} <= 2 δ∇_{Z,N}{A}`.
    Certify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// A `nabla:` pattern with `PZP = N`.
        #[arg(long, default_value = "nabla:S,St")]
        pattern: String,
        /// The orthogonal `P`, as a pattern side (`J`, `I`, `@p.mat`).
        #[arg(long = "p", default_value = "J")]
        p: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all-paper-examples")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "DISPKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Inclusive size range of random instances, `LO..HI`.
        #[arg(long, default_value = "4..8")]
        sizes: String,
    },
    /// Summarize ranks, structure and displacement ranks of a matrix.
    Report {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Extra patterns to report, repeatable.
        #[arg(long)]
        pattern: Vec<String>,
    },
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        bail!("--tol must be a positive number");
    }
    let needs_svd = matches!(cli.command, Command::Pinv { .. } | Command::Certify { .. });
    let backend = match (cli.backend, needs_svd) {
        (Some(Backend::Exact), true) => bail!(
            "this command relies on the SVD and has no exact variant; use --backend float"
        ),
        (Some(b), _) => b,
        (None, true) => Backend::Float,
        (None, false) => Backend::Exact,
    };
    let ctx = Ctx {
        tol: cli.tol,
        json: cli.json,
    };
    match backend {
        Backend::Exact => dispatch::<dispkit::Rational>(&ctx, cli.command),
        Backend::Float => dispatch::<f64>(&ctx, cli.command),
    }
}

struct Ctx {
    tol: f64,
    json: bool,
}

impl Ctx {
    fn method<T: Scalar>(&self) -> RankMethod {
        if T::EXACT {
            RankMethod::Exact
        } else {
            RankMethod::Svd { tol: self.tol }
        }
    }

    fn print(&self, value: serde_json::Value) {
        println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
    }
}

fn load<T: Scalar>(path: &Path) -> Result<Matrix<T>> {
    read_matrix(path).with_context(|| format!("reading {}", path.display()))
}

fn emit<T: Scalar>(m: &Matrix<T>, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_matrix(p, m).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{}", format_matrix(m));
            Ok(())
        }
    }
}

fn pattern_for<T: Scalar>(spec: &str, a: &Matrix<T>) -> Result<DisplacementPattern<T>> {
    let p: PatternSpec = spec.parse()?;
    Ok(p.resolve(a.rows(), a.cols())?)
}

fn dispatch<T: Scalar>(ctx: &Ctx, command: Command) -> Result<Status> {
    match command {
        Command::Gen { spec, seed, out } => {
            let spec: StructuredSpec = spec.parse()?;
            let a = spec.build(seed)?.cast::<T>();
            emit(&a, out.as_deref())?;
        }
        Command::Displace {
            input,
            pattern,
            out,
        } => {
            let a: Matrix<T> = load(&input)?;
            let p = pattern_for(&pattern, &a)?;
            emit(&p.apply(&a)?, out.as_deref())?;
        }
        Command::Drank { input, pattern } => {
            let a: Matrix<T> = load(&input)?;
            let p = pattern_for(&pattern, &a)?;
            let r = rank_with(&p.apply(&a)?, ctx.method::<T>())?;
            if ctx.json {
                ctx.print(json!({ "pattern": p.to_string(), "rank": r.rank, "method": r.method, "tolerance": r.tolerance }));
            } else {
                println!("{}", r.rank);
            }
        }
        Command::Reconstruct {
            input,
            pattern,
            out,
        } => {
            let d: Matrix<T> = load(&input)?;
            let p = pattern_for(&pattern, &d)?;
            if p.kind != DisplacementKind::Nabla {
                bail!("reconstruct inverts the nabla operator only");
            }
            let k = d.rows().max(d.cols()).saturating_sub(1);
            emit(&reconstruct_nabla(&d, &p.z, &p.n, k)?, out.as_deref())?;
        }
        Command::Pinv { input, out } => return pinv_cmd::<T>(ctx, &input, out.as_deref()),
        Command::Certify { input, pattern, p } => return certify::<T>(ctx, &input, &pattern, &p),
        Command::Verify {
            suite,
            trials,
            seed,
            sizes,
        } => return verify(ctx, &suite, trials, seed, &sizes),
        Command::Report { input, pattern } => report::<T>(ctx, &input, &pattern)?,
    }
    Ok(Status::Ok)
}

/// Penrose residuals must stay below this multiple of `1 + ||A|| ||A^-||`.
const PENROSE_BOUND: f64 = 1e-9;

fn pinv_cmd<T: Scalar>(ctx: &Ctx, input: &Path, out: Option<&Path>) -> Result<Status> {
    let a: FMatrix = load::<T>(input)?.to_f64();
    let ap = pinv(&a, ctx.tol)?;
    let res = penrose_residuals(&a, &ap)?;
    let scale = penrose_scale(&a, &ap);
    let ok = res.is_moore_penrose(PENROSE_BOUND * scale);
    let rank = numerical_rank(&a, ctx.tol)?.rank;
    if let Some(p) = out {
        emit(&ap, Some(p))?;
    }
    if ctx.json {
        ctx.print(json!({
            "rank": rank,
            "residuals": res,
            "scale": scale,
            "bound": PENROSE_BOUND * scale,
            "holds": ok,
            "pinv": if out.is_none() { Some(format_matrix(&ap)) } else { None },
        }));
    } else {
        if out.is_none() {
            print!("{}", format_matrix(&ap));
        }
        let report = format!(
            "rank {rank}; residuals (i) {:.2e} (ii) {:.2e} (iii) {:.2e} (iv) {:.2e}; bound {:.2e}",
            res.r1,
            res.r2,
            res.r3,
            res.r4,
            PENROSE_BOUND * scale
        );
        if out.is_none() {
            eprintln!("{report}");
        } else {
            println!("{report}");
        }
    }
    Ok(if ok { Status::Ok } else { Status::CheckFailed })
}

fn certify<T: Scalar>(ctx: &Ctx, input: &Path, pattern: &str, p: &str) -> Result<Status> {
    let a: Matrix<T> = load(input)?;
    let pat = pattern_for(pattern, &a)?;
    if pat.kind != DisplacementKind::Nabla {
        bail!("the certificate is stated for the nabla operator");
    }
    let side: SideSpec = p.parse()?;
    let pm: Matrix<T> = side.resolve(a.rows())?;
    let cert = pinv_certificate(&a.to_f64(), &pm.to_f64(), &pat.z.to_f64(), &pat.n.to_f64(), ctx.tol)?;
    let ok = cert.holds(PENROSE_BOUND);
    if ctx.json {
        ctx.print(json!({ "pattern": pat.to_string(), "certificate": cert, "holds": ok }));
    } else {
        println!(
            "{pat}{{A}} = {}, dN[{},{}]{{A^-}} = {}, E1/E2 width {} (n - delta = {}), residual {:.2e} <= {:.2e}: {}",
            cert.delta,
            pat.label.1,
            pat.label.0,
            cert.pinv_delta,
            cert.width,
            cert.n - cert.delta,
            cert.residual,
            PENROSE_BOUND * cert.scale,
            if ok { "ok" } else { "FAIL" }
        );
    }
    Ok(if ok { Status::Ok } else { Status::CheckFailed })
}

fn parse_sizes(s: &str) -> Result<(usize, usize)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("--sizes expects LO..HI, got `{s}`"))?;
    let lo: usize = lo.trim().parse().context("--sizes lower bound")?;
    let hi: usize = hi.trim().trim_start_matches('=').parse().context("--sizes upper bound")?;
    Ok((lo, hi))
}

fn verify(ctx: &Ctx, suite: &str, trials: usize, seed: u64, sizes: &str) -> Result<Status> {
    let sizes = if sizes.is_empty() {
        DEFAULT_SIZES
    } else {
        parse_sizes(sizes)?
    };
    let r = run_suite(suite, trials, seed, sizes)?;
    if ctx.json {
        ctx.print(serde_json::to_value(&r)?);
    } else {
        for c in r.checks.iter().filter(|c| !c.holds) {
            println!("{c} {:?}", c.witnesses);
        }
        for (name, max) in &r.observed_max {
            println!("  {name}: max lhs {max}");
        }
        println!(
            "{}: {} checks over {} trials (seed {}), {} failures",
            r.suite,
            r.checks.len(),
            r.trials,
            r.seed,
            r.failures.len()
        );
    }
    Ok(if r.passed() { Status::Ok } else { Status::CheckFailed })
}

/// Patterns shown by `report` for any matrix.
const STANDARD_PATTERNS: [&str; 6] = [
    "nabla:S,St",
    "delta:S,S",
    "nabla:St,S",
    "nabla:S,S",
    "delta:S,St",
    "delta:St,S",
];

fn report<T: Scalar>(ctx: &Ctx, input: &Path, extra: &[String]) -> Result<()> {
    let a: Matrix<T> = load(input)?;
    let method = ctx.method::<T>();
    let mut dranks = Vec::new();
    for spec in STANDARD_PATTERNS.iter().copied().chain(extra.iter().map(String::as_str)) {
        let p = pattern_for(spec, &a)?;
        dranks.push((p.to_string(), rank_with(&p.apply(&a)?, method)?.rank));
    }
    let exact = exact_rank(&a).rank;
    let numerical = numerical_rank(&a.to_f64(), ctx.tol)?.rank;
    let (rows, cols) = a.shape();
    let mut membership = Vec::new();
    let mut pinv_ranks = Vec::new();
    if a.is_square() {
        let tol = if T::EXACT { 0.0 } else { ctx.tol };
        let n = a.rows();
        for (name, p) in [
            ("J", dispkit::matrix::reverse_identity::<T>(n)),
            ("I", Matrix::<T>::identity(n)),
        ] {
            membership.push((name, is_p_symmetric(&a, &p, tol)?.is_member));
        }
        let ap = moore_penrose(&a)?;
        for spec in ["nabla:St,S", "nabla:S,S", "delta:S,S", "delta:St,S"] {
            let p = pattern_for(spec, &ap)?;
            pinv_ranks.push((p.to_string(), rank_with(&p.apply(&ap)?, method)?.rank));
        }
    }
    if ctx.json {
        let obj = |v: &[(String, usize)]| {
            v.iter()
                .map(|(k, r)| (k.clone(), json!(r)))
                .collect::<serde_json::Map<_, _>>()
        };
        ctx.print(json!({
            "rows": rows,
            "cols": cols,
            "exact_rank": exact,
            "numerical_rank": numerical,
            "tolerance": ctx.tol,
            "toeplitz": is_toeplitz(&a),
            "hankel": is_hankel(&a),
            "p_symmetric": membership.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "displacement_ranks": obj(&dranks),
            "pinv_displacement_ranks": obj(&pinv_ranks),
        }));
    } else {
        println!("{rows}x{cols}, rank {exact} (exact), {numerical} (SVD at {:e})", ctx.tol);
        println!("toeplitz: {}, hankel: {}", is_toeplitz(&a), is_hankel(&a));
        for (k, v) in &membership {
            println!("{k}-symmetric: {v}");
        }
        for (k, r) in &dranks {
            println!("{k}{{A}} = {r}");
        }
        for (k, r) in &pinv_ranks {
            println!("{k}{{A^-}} = {r}");
        }
    }
    Ok(())
}
