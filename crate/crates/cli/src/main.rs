use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use rsdist_core::aj::{aj, AjMethod, AjParams};
use rsdist_core::bounds::{
    compare_binomial_factor, count_main_term, lemma_general, lemma_large, ndr_error_bound,
    saddle_p2, wj_error_bound, wj_expected, SumLimit,
};
use rsdist_core::budget::{Budget, DEFAULT_BUDGET};
use rsdist_core::classes::{dist_table_formula, moments_formula, wj_exact, LeadClass};
use rsdist_core::distance::{
    classify_word, dist_table_bruteforce, moments_bruteforce, nfr_distribution, scan_deep_holes,
};
use rsdist_core::gf::{prime_power, FieldSpec};
use rsdist_core::interval::{DEFAULT_PRECISION, PRECISIONS};
use rsdist_core::poly::{parse_elems, EvalSet, Poly};
use rsdist_core::region::{
    coverage_report, figure_scan, g_uniform_check, gamma_max, region_check, region_functions,
    simplified_check, threshold_constants, Branch, GammaBound, RegionParams, Verdict, VerdictKind,
};
use rsdist_core::scalar::{parse_rational, rational_string, Scalar};
use rsdist_core::verify::{self, Scope};
use rsdist_core::Error;

#[derive(Parser)]
#[command(
    name = "rsdist",
    version,
    about = "Distance distribution of Reed-Solomon codes: exact counts, oracles and certified bounds"
)]
struct Cli {
    /// Working precision in bits for interval evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION, value_parser = parse_prec)]
    prec: u32,
    /// Cap on estimated primitive operations for enumerations.
    #[arg(long, global = true, env = "RSDIST_BUDGET")]
    budget: Option<String>,
    #[command(subcommand)]
    command: Command,
}

fn parse_prec(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("`{s}` is not a bit count"))?;
    if PRECISIONS.contains(&p) {
        Ok(p)
    } else {
        Err(format!("precision must be one of {PRECISIONS:?}"))
    }
}

fn rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Field parameters, modulus and log-table generator.
    FieldInfo {
        #[arg(long)]
        q: u64,
    },
    /// N_d(eps, r) for r = 0..=d.
    Count {
        #[command(flatten)]
        class: ClassArgs,
        /// Use enumeration instead of the counting formula.
        #[arg(long)]
        brute: bool,
    },
    /// W_j(eps) by enumeration of factorizations.
    Wj {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        j: usize,
    },
    /// Factorial moments of the number of agreements with a random codeword.
    Moments {
        #[command(flatten)]
        word: PolyArgs,
        /// Moment order; every order up to k + ell + 2 when omitted.
        #[arg(long)]
        m: Option<usize>,
        /// Also compute each moment by enumerating codewords.
        #[arg(long)]
        brute: bool,
    },
    /// Distance of a received word to RS_{n,k}, with its classification.
    Distance {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        /// Comma-separated symbols, one per point of D.
        #[arg(long)]
        word: String,
        #[arg(long)]
        set: Option<String>,
    },
    /// Classify all words of degree k..=k+ell over D = F_q (JSON Lines).
    ScanDeepholes {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Root-count distribution of f + g over all g of degree below k.
    Nfr {
        #[command(flatten)]
        word: PolyArgs,
        #[arg(long)]
        r: Option<usize>,
    },
    /// A_j(u, w) for characteristic p.
    Aj(AjArgs),
    /// Error bounds and log bounds.
    Bound {
        #[command(subcommand)]
        which: BoundCommand,
    },
    /// Certified region conditions.
    Region {
        #[command(subcommand)]
        which: RegionCommand,
    },
    /// Compare the older binomial factor with A_j.
    CompareLiwan {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        j: usize,
    },
    /// Sign of f(p, c) on a c-grid as CSV.
    Figure {
        /// Comma-separated primes.
        #[arg(long, default_value = "2,3,5,7,17")]
        p: String,
        #[arg(long, default_value = "1/1000", value_parser = rational_arg)]
        step: BigRational,
        /// Print the certified root brackets as JSON instead of the CSV.
        #[arg(long)]
        brackets: bool,
    },
    /// Run the acceptance suite.
    VerifyAll {
        /// Reduced grids.
        #[arg(long)]
        desk: bool,
        /// Print the full reports as JSON instead of one line per criterion.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ell: usize,
    /// Degree is k + ell; give either --k or --d.
    #[arg(long, conflicts_with = "d")]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Class index: leading coefficients read as base-q digits, c_1 first.
    #[arg(long, default_value_t = 0)]
    class: usize,
    /// Comma-separated evaluation points; all of F_q when omitted.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    /// Comma-separated coefficients, lowest degree first.
    #[arg(long)]
    f: String,
    #[arg(long)]
    set: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Perm,
    Series,
    Binsum,
}

#[derive(Args)]
struct AjArgs {
    #[arg(long)]
    j: usize,
    /// Characteristic; implied by --q.
    #[arg(long, required_unless_present = "q")]
    p: Option<u64>,
    #[arg(long, value_parser = rational_arg, required_unless_present = "q")]
    u: Option<BigRational>,
    #[arg(long, value_parser = rational_arg, required_unless_present = "q")]
    w: Option<BigRational>,
    /// Take u = q and w = q1/q from the field and ell instead.
    #[arg(long, conflicts_with_all = ["p", "u", "w"], requires = "ell")]
    q: Option<u64>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, value_enum, default_value = "binsum")]
    method: MethodArg,
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Bound on |W_j - C(q,j) q^(k-j)|.
    Wj {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        j: usize,
    },
    /// Main term and error bound for N_{k+ell}(eps, r).
    Ndr {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "full")]
        limit: LimitArg,
    },
    /// Upper bounds on ln A_j(q, q1/q).
    Lemma {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitArg {
    Short,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    A,
    B,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::A => Branch::A,
            BranchArg::B => Branch::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GammaArg {
    H1,
    H2,
    H1HalfG,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, value_enum)]
    branch: BranchArg,
}

impl RegionArgs {
    fn params(&self) -> Result<RegionParams, Error> {
        match self.p {
            Some(p) => RegionParams::with_characteristic(p, self.q, self.k, self.ell),
            None => RegionParams::new(self.q, self.k, self.ell),
        }
    }
}

#[derive(Subcommand)]
enum RegionCommand {
    /// f - g - gamma h > 0 at the branch's c.
    #[command(name = "ordinary", alias = "thm7")]
    Ordinary(RegionArgs),
    /// The same with the uniform bounds on g and h.
    #[command(name = "uniform", alias = "thm2")]
    Uniform(RegionArgs),
    /// Largest admissible gamma at (p, q, c).
    GammaMax {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = rational_arg)]
        c: BigRational,
        #[arg(long, value_enum, default_value = "h1")]
        bound: GammaArg,
    },
    /// Threshold constants p0, q0, gamma0 for c, and coverage of 3/q <= c <= 0.7.
    #[command(name = "thresholds", alias = "thm23")]
    Thresholds {
        #[arg(long, value_parser = rational_arg)]
        c: BigRational,
    },
    /// f, g, h1, h2 at (p, q, c).
    Functions {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = rational_arg)]
        c: BigRational,
    },
}

/// Exit status beyond the usage/budget failure path.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Holds,
    Fails,
    Unknown,
}

impl From<VerdictKind> for Status {
    fn from(v: VerdictKind) -> Self {
        match v {
            VerdictKind::Holds => Status::Holds,
            VerdictKind::Fails => Status::Fails,
            VerdictKind::Unknown => Status::Unknown,
        }
    }
}

fn worst(vs: impl IntoIterator<Item = VerdictKind>) -> Status {
    let mut out = Status::Holds;
    for v in vs {
        match v {
            VerdictKind::Fails => return Status::Fails,
            VerdictKind::Unknown => out = Status::Unknown,
            VerdictKind::Holds => {}
        }
    }
    out
}

type CliResult = Result<Status, Error>;

fn emit(v: &impl serde::Serialize) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)
}

fn field(q: u64) -> Result<FieldSpec, Error> {
    FieldSpec::with_order(q)
}

fn eval_set(field: &FieldSpec, set: &Option<String>) -> Result<EvalSet, Error> {
    match set {
        Some(s) => EvalSet::new(field, parse_elems(field, s)?),
        None => Ok(EvalSet::full(field)),
    }
}

fn class_setup(a: &ClassArgs) -> Result<(FieldSpec, LeadClass, usize, EvalSet), Error> {
    let f = field(a.q)?;
    let d = match (a.k, a.d) {
        (Some(k), None) => k + a.ell,
        (None, Some(d)) => d,
        _ => return Err(Error::InvalidParameter("give exactly one of --k and --d".into())),
    };
    let classes = (a.q as u128).checked_pow(a.ell as u32).unwrap_or(u128::MAX);
    if a.ell == 0 || a.class as u128 >= classes {
        return Err(Error::InvalidParameter(format!(
            "class index {} is outside 0..q^ell with ell = {}",
            a.class, a.ell
        )));
    }
    let eps = LeadClass::from_index(&f, a.ell, a.class);
    let set = eval_set(&f, &a.set)?;
    Ok((f, eps, d, set))
}

fn poly_setup(a: &PolyArgs) -> Result<(FieldSpec, Poly, EvalSet), Error> {
    let f = field(a.q)?;
    let poly = Poly::new(parse_elems(&f, &a.f)?);
    let set = eval_set(&f, &a.set)?;
    Ok((f, poly, set))
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidParameter(format!("output error: {e}"))
}

fn out(v: &impl serde::Serialize) -> Result<(), Error> {
    emit(v).map_err(io_err)
}

fn run(cli: Cli) -> CliResult {
    let prec = cli.prec;
    let budget = match &cli.budget {
        Some(raw) => Budget::parse(raw)?,
        None => Budget::new(DEFAULT_BUDGET)?,
    };
    match cli.command {
        Command::FieldInfo { q } => {
            let f = field(q)?;
            out(&json!({
                "q": f.order(),
                "p": f.characteristic(),
                "s": f.degree(),
                "modulus": f.modulus(),
                "generator": f.generator(),
                "log_tables": f.antilog_table().is_some(),
            }))?;
        }
        Command::Count { class, brute } => {
            let (f, eps, d, set) = class_setup(&class)?;
            let table = if brute {
                dist_table_bruteforce(&f, &eps, d, &set, &budget)?
            } else {
                dist_table_formula(&f, &eps, d, &set, &budget)?
            };
            out(&table)?;
        }
        Command::Wj { class, j } => {
            let (f, eps, d, set) = class_setup(&class)?;
            let w = wj_exact(&f, &eps, j, d, &set, &budget)?;
            out(&json!({
                "q": f.order(), "ell": eps.ell(), "d": d, "j": j,
                "class": eps.coeffs(), "w": w.to_string(),
            }))?;
        }
        Command::Moments { word, m, brute } => {
            let (f, poly, set) = poly_setup(&word)?;
            let deg = poly.degree().ok_or(Error::ZeroPolynomial)?;
            let orders: Vec<usize> = match m {
                Some(m) => vec![m],
                None => (0..=deg + 2).collect(),
            };
            let mut rows = Vec::new();
            for m in orders {
                let report = moments_formula(&f, &poly, word.k, &set, m, &budget)?;
                let mut row = serde_json::to_value(&report).expect("serializable");
                if brute {
                    let b = moments_bruteforce(&f, &poly, word.k, &set, m, &budget)?;
                    row["brute_force"] = json!(rational_string(&b));
                    row["agrees"] = json!(b == report.value);
                }
                rows.push(row);
            }
            out(&json!({ "f": poly.coeffs(), "k": word.k, "moments": rows }))?;
        }
        Command::Distance { q, k, word, set } => {
            let f = field(q)?;
            let set = eval_set(&f, &set)?;
            let w = parse_elems(&f, &word)?;
            out(&classify_word(&f, &w, k, &set, &budget)?)?;
        }
        Command::ScanDeepholes { q, k, ell } => {
            let f = field(q)?;
            let mut out = BufWriter::new(io::stdout().lock());
            let mut failed = None;
            let summary = scan_deep_holes(&f, k, ell, &budget, |rec| {
                if failed.is_none() {
                    if let Err(e) = serde_json::to_writer(&mut out, rec)
                        .map_err(io::Error::from)
                        .and_then(|_| writeln!(out))
                    {
                        failed = Some(e);
                    }
                }
            })?;
            if let Some(e) = failed {
                return Err(io_err(e));
            }
            serde_json::to_writer(&mut out, &json!({ "summary": summary }))
                .map_err(|e| io_err(e.into()))?;
            writeln!(out).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            let ok = summary.distance_bound_violations.is_empty() && summary.all_degree_k_deep();
            return Ok(if ok { Status::Holds } else { Status::Fails });
        }
        Command::Nfr { word, r } => {
            let (f, poly, set) = poly_setup(&word)?;
            let dist = nfr_distribution(&f, &poly, word.k, &set, &budget)?;
            match r {
                Some(r) => out(&json!({ "r": r, "count": dist.get(r).copied().unwrap_or(0) }))?,
                None => out(&json!({ "distribution": dist }))?,
            }
        }
        Command::Aj(a) => {
            let params = match a.q {
                Some(q) => AjParams::from_field(q, a.ell.expect("required by clap"), a.j, prec)?,
                None => AjParams::new(
                    a.j,
                    a.p.expect("required by clap"),
                    Scalar::Exact(a.u.expect("required by clap")),
                    Scalar::Exact(a.w.expect("required by clap")),
                )?,
            };
            let method = match a.method {
                MethodArg::Perm => AjMethod::Permutation,
                MethodArg::Series => AjMethod::Series,
                MethodArg::Binsum => AjMethod::Binsum,
            };
            out(&aj(&params, method)?)?;
        }
        Command::Bound { which } => match which {
            BoundCommand::Wj { q, k, ell, j } => {
                out(&json!({
                    "expected": rational_string(&wj_expected(q, k, j)),
                    "bound": wj_error_bound(q, k, ell, j, prec)?,
                }))?;
            }
            BoundCommand::Ndr { q, k, ell, r, limit } => {
                let limit = match limit {
                    LimitArg::Short => SumLimit::Short,
                    LimitArg::Full => SumLimit::Full,
                };
                out(&json!({
                    "limit": limit,
                    "main_term": rational_string(&count_main_term(q, k, ell, r, limit)),
                    "bound": ndr_error_bound(q, k, ell, r, prec)?,
                }))?;
            }
            BoundCommand::Lemma { q, ell, j } => {
                let (p, _) = prime_power(q)?;
                let params = AjParams::from_field(q, ell, j, prec)?;
                let mut doc = json!({
                    "ln_aj": rsdist_core::aj::ln_aj(&params, prec),
                    "general": lemma_general(q, ell, j, prec)?,
                    "large": lemma_large(q, ell, j, prec)?,
                });
                if p == 2 {
                    doc["saddle_p2"] = serde_json::to_value(saddle_p2(q, ell, j, prec)?)
                        .expect("serializable");
                }
                out(&doc)?;
            }
        },
        Command::Region { which } => return region(which, prec),
        Command::CompareLiwan { q, ell, j } => {
            out(&compare_binomial_factor(q, ell, j, prec)?)?;
        }
        Command::Figure { p, step, brackets } => {
            let ps: Vec<u64> = p
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("`{s}` is not a prime")))
                })
                .collect::<Result<_, _>>()?;
            for &p in &ps {
                if !rsdist_core::gf::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
            }
            let fig = figure_scan(&ps, &step, prec.min(53))?;
            if brackets {
                out(&fig.brackets)?;
            } else {
                let mut out = io::stdout().lock();
                out.write_all(fig.to_csv().as_bytes()).map_err(io_err)?;
            }
        }
        Command::VerifyAll { desk, json } => {
            let scope = if desk { Scope::Desk } else { Scope::Full };
            let reports = verify::run_all(scope, prec, &budget)?;
            if json {
                out(&reports)?;
            } else {
                let mut out = io::stdout().lock();
                for r in &reports {
                    writeln!(out, "{}", r.line()).map_err(io_err)?;
                }
            }
            return Ok(verify::overall(&reports).into());
        }
    }
    Ok(Status::Holds)
}

fn region(which: RegionCommand, prec: u32) -> CliResult {
    let verdict = |v: Verdict| -> CliResult {
        emit(&v).map_err(io_err)?;
        Ok(v.verdict.into())
    };
    match which {
        RegionCommand::Ordinary(a) => verdict(region_check(&a.params()?, a.branch.into(), prec)?),
        RegionCommand::Uniform(a) => verdict(simplified_check(&a.params()?, a.branch.into(), prec)?),
        RegionCommand::GammaMax { p, q, c, bound } => {
            let bound = match bound {
                GammaArg::H1 => GammaBound::H1,
                GammaArg::H2 => GammaBound::H2,
                GammaArg::H1HalfG => GammaBound::H1HalfG,
            };
            let g = gamma_max(p, q, &c, bound, prec)?;
            emit(&json!({
                "p": p, "q": q, "c": rational_string(&c), "bound": bound, "gamma_max": g,
            }))
            .map_err(io_err)?;
            Ok(Status::Holds)
        }
        RegionCommand::Thresholds { c } => {
            let t = threshold_constants(&c, prec)?;
            let chain: Vec<Verdict> = [t.q0, 256, 81, 125, 2401]
                .into_iter()
                .map(|q| g_uniform_check(q, prec))
                .collect();
            let coverage = coverage_report(&[2, 3, 5, 7, 11, 13], prec)?;
            let status = worst(
                std::iter::once(t.f_floor.verdict).chain(chain.iter().map(|v| v.verdict)),
            );
            emit(&json!({ "constants": t, "g_uniform": chain, "coverage": coverage }))
                .map_err(io_err)?;
            Ok(status)
        }
        RegionCommand::Functions { p, q, c } => {
            emit(&region_functions(p, q, &c, prec)?).map_err(io_err)?;
            Ok(Status::Holds)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Holds) => ExitCode::SUCCESS,
        Ok(Status::Fails) => ExitCode::from(1),
        Ok(Status::Unknown) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
