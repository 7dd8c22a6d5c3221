//! Command-line surface for the `twogap` library: conformal characteristics,
//! asymptotic error predictions, the exact minimax oracle, and side-by-side
//! comparison sweeps for the best polynomial approximation of sgn(x) on
//! `[-A,-1] u [1,B]`.
//!
//! Data goes to stdout (or `--out FILE`); diagnostics go to stderr.
//! Exit codes: 0 success, 2 invalid input, 3 numeric non-convergence.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use twogap::predictor::{self, Variant};
use twogap::{
    best_approx, characteristics, BestApproxResult, ExtReal, PrecisionContext, TwoIntervalDomain,
};

/// Quadrature tolerance used when characteristics are needed only as an
/// ingredient (digit selection, comparison predictions); the dedicated
/// `chars` and `predict` commands use their own `--tol` instead.
const INGREDIENT_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "twogap",
    version,
    about = "Best uniform polynomial approximation of sgn(x) on [-A,-1] u [1,B]: \
             exact minimax oracle and asymptotic predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conformal characteristics of the domain (decay rate eta, curvature
    /// eta1, Robin constant eta2, harmonic measure alpha, ring modulus ...)
    Chars {
        #[command(flatten)]
        dom: DomainArgs,
        /// Quadrature tolerance for the characteristic integrals
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Asymptotic prediction of the minimax error for each degree
    Predict {
        #[command(flatten)]
        dom: DomainArgs,
        /// Degree n, or inclusive range lo..hi
        #[arg(long)]
        n: NRange,
        /// Quadrature tolerance for the underlying integrals
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact minimax error and polynomial by multi-point exchange
    Remez {
        #[command(flatten)]
        dom: DomainArgs,
        /// Degree n, or inclusive range lo..hi
        #[arg(long)]
        n: NRange,
        /// Decimal digits of working precision (>= 30), or `auto`
        #[arg(long, default_value = "auto")]
        digits: DigitsArg,
        /// Relative width of the error bracket at convergence
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact oracle vs asymptotic prediction, one row per degree
    /// (a table command: defaults to CSV even for a single degree)
    Compare {
        #[command(flatten)]
        dom: DomainArgs,
        /// Degree n, or inclusive range lo..hi
        #[arg(long)]
        n: NRange,
        /// Decimal digits of working precision (>= 30), or `auto`
        #[arg(long, default_value = "auto")]
        digits: DigitsArg,
        /// Relative width of the exchange error bracket at convergence
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Closed-form error asymptote for the symmetric domain A = B at odd
    /// degree 2m+1 (the even degree 2m+2 shares the same value)
    Symmetric {
        /// Endpoint A > 1 of the symmetric domain [-A,-1] u [1,A]
        #[arg(long)]
        a: f64,
        /// Index m >= 0; the reported degree is 2m+1
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact error for the degenerate pair [-A,-1] u {1}
    Degenerate {
        /// Endpoint A > 1 of the interval [-A,-1]
        #[arg(long)]
        a: f64,
        /// Degree n >= 0
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Args)]
struct DomainArgs {
    /// Left endpoint magnitude A (the interval [-A,-1]); must exceed 1
    #[arg(long)]
    a: f64,
    /// Right endpoint B (the interval [1,B]); must be at least 1
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct IoArgs {
    /// Output format (default: json for single records, csv for sweeps)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Inclusive degree range: a single `n` or `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NRange {
    lo: u32,
    hi: u32,
}

impl NRange {
    fn is_single(&self) -> bool {
        self.lo == self.hi
    }

    fn degrees(&self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|_| format!("range start is not a degree: {lo:?}"))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|_| format!("range end is not a degree: {hi:?}"))?;
            if lo > hi {
                return Err(format!("empty range {s:?}: need lo <= hi"));
            }
            Ok(NRange { lo, hi })
        } else {
            let n: u32 = s
                .trim()
                .parse()
                .map_err(|_| format!("not a degree or lo..hi range: {s:?}"))?;
            Ok(NRange { lo: n, hi: n })
        }
    }
}

/// Working precision request: explicit decimal digits or the auto rule
/// (digits grow linearly with n at rate eta/ln 10).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DigitsArg {
    Auto,
    Fixed(u32),
}

impl FromStr for DigitsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("auto") {
            return Ok(DigitsArg::Auto);
        }
        let d: u32 = t
            .parse()
            .map_err(|_| format!("digits must be an integer or `auto`, got {s:?}"))?;
        if d < 30 {
            return Err(format!(
                "explicit precision must be at least 30 digits, got {d}"
            ));
        }
        Ok(DigitsArg::Fixed(d))
    }
}

/// Output of one command: the data text, the destination, and the exit code
/// to use after a successful write (compare uses 3 when every row failed).
struct Emitted {
    text: String,
    out: Option<PathBuf>,
    exit: i32,
}

fn main() {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("twogap: {msg}");
        std::process::exit(2);
    }
    match dispatch(cli.command) {
        Ok(em) => {
            if let Err(e) = write_output(em.out.as_deref(), &em.text) {
                eprintln!("twogap: cannot write output: {e}");
                std::process::exit(2);
            }
            std::process::exit(em.exit);
        }
        Err(e) => {
            eprintln!("twogap: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

/// 0 = success, 2 = invalid input, 3 = numeric non-convergence.
fn exit_code(e: &twogap::Error) -> i32 {
    use twogap::Error::*;
    match e {
        InvalidDomain { .. } | OutOfDomain { .. } | InvalidParameter { .. } => 2,
        _ => 3,
    }
}

/// Honors TWOGAP_THREADS as a cap on sweep parallelism.
fn configure_threads() -> Result<(), String> {
    let v = match std::env::var("TWOGAP_THREADS") {
        Ok(v) => v,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(format!("TWOGAP_THREADS: {e}")),
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| format!("TWOGAP_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))
}

fn write_output(path: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn dispatch(cmd: Cmd) -> twogap::Result<Emitted> {
    match cmd {
        Cmd::Chars { dom, tol, io } => cmd_chars(dom, tol, io),
        Cmd::Predict { dom, n, tol, io } => cmd_predict(dom, n, tol, io),
        Cmd::Remez {
            dom,
            n,
            digits,
            tol,
            io,
        } => cmd_remez(dom, n, digits, tol, io),
        Cmd::Compare {
            dom,
            n,
            digits,
            tol,
            io,
        } => cmd_compare(dom, n, digits, tol, io),
        Cmd::Symmetric { a, m, io } => cmd_symmetric(a, m, io),
        Cmd::Degenerate { a, n, io } => cmd_degenerate(a, n, io),
    }
}

fn check_tol(tol: f64) -> twogap::Result<()> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(twogap::Error::InvalidParameter {
            what: format!("tol must lie in (0, 0.1), got {tol}"),
        });
    }
    Ok(())
}

fn pick_format(io: &IoArgs, single: bool) -> Format {
    io.format
        .unwrap_or(if single { Format::Json } else { Format::Csv })
}

/// 17 significant digits: exact round-trip for every finite f64.
fn f17(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_f17(v: Option<f64>) -> String {
    v.map(f17).unwrap_or_default()
}

fn opt_int<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Minimal RFC 4180 quoting for free-text cells (error messages).
fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn json_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("record serialization cannot fail");
    s.push('\n');
    s
}

/// Decay rate used by the automatic digit rule. The degenerate pair has no
/// conformal characteristics, but its error is exactly 2/(T_n(x0)+1) with
/// x0 = 1 + 4/(A-1), so the rate is arccosh(x0).
fn eta_for_auto(d: &TwoIntervalDomain) -> twogap::Result<f64> {
    if d.is_degenerate() {
        Ok((1.0 + 4.0 / (d.a() - 1.0)).acosh())
    } else {
        Ok(characteristics(d, INGREDIENT_TOL)?.eta)
    }
}

fn resolve_digits(arg: DigitsArg, n: u32, eta: Option<f64>) -> twogap::Result<PrecisionContext> {
    match arg {
        DigitsArg::Auto => PrecisionContext::auto(n, eta.expect("auto digits need a decay rate")),
        DigitsArg::Fixed(d) => PrecisionContext::new(d),
    }
}

// ---------------------------------------------------------------- chars ----

const CHARS_HEADER: &str = "a,b,c_crit,eta,eta1,eta2,alpha,omega_c,p,rho,c0_abs";

fn cmd_chars(dom: DomainArgs, tol: f64, io: IoArgs) -> twogap::Result<Emitted> {
    check_tol(tol)?;
    let d = TwoIntervalDomain::new(dom.a, dom.b)?;
    let ch = characteristics(&d, tol)?;
    let text = match pick_format(&io, true) {
        Format::Json => json_pretty(&ch),
        Format::Csv => {
            let cells = [
                ch.a, ch.b, ch.c_crit, ch.eta, ch.eta1, ch.eta2, ch.alpha, ch.omega_c, ch.p,
                ch.rho, ch.c0_abs,
            ];
            let row: Vec<String> = cells.iter().copied().map(f17).collect();
            format!("{CHARS_HEADER}\n{}\n", row.join(","))
        }
    };
    Ok(Emitted {
        text,
        out: io.out,
        exit: 0,
    })
}

// -------------------------------------------------------------- predict ----

const PREDICT_HEADER: &str = "n,phase,d_n,g_dc,a_n,l_theorem,l_refined,theta_ratio";

fn cmd_predict(dom: DomainArgs, n: NRange, tol: f64, io: IoArgs) -> twogap::Result<Emitted> {
    check_tol(tol)?;
    let d = TwoIntervalDomain::new(dom.a, dom.b)?;
    let ch = characteristics(&d, tol)?;
    let recs = n
        .degrees()
        .into_iter()
        .map(|k| predictor::predict(&d, &ch, k, Variant::Theorem, tol))
        .collect::<twogap::Result<Vec<_>>>()?;
    let text = match pick_format(&io, n.is_single()) {
        Format::Json => {
            if n.is_single() {
                json_pretty(&recs[0])
            } else {
                json_pretty(&recs)
            }
        }
        Format::Csv => {
            let mut s = String::from(PREDICT_HEADER);
            s.push('\n');
            for r in &recs {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.n,
                    f17(r.phase),
                    f17(r.d_n.0),
                    f17(r.g_dc),
                    f17(r.a_n),
                    f17(r.l_theorem),
                    opt_f17(r.l_refined),
                    f17(r.theta_ratio),
                ));
            }
            s
        }
    };
    Ok(Emitted {
        text,
        out: io.out,
        exit: 0,
    })
}

// ---------------------------------------------------------------- remez ----

#[derive(Serialize)]
struct PolyRecord {
    degree: usize,
    /// Chebyshev reference interval [-A, B] of the coefficient basis.
    hull: [f64; 2],
    /// Coefficients as decimal strings at the working precision.
    coefficients: Vec<String>,
}

#[derive(Serialize)]
struct AltRecord {
    x: f64,
    sign: i8,
}

#[derive(Serialize)]
struct RemezRecord {
    a: f64,
    b: f64,
    n: u32,
    digits: u32,
    poly: PolyRecord,
    #[serde(rename = "L")]
    l: String,
    alternation: Vec<AltRecord>,
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n_endpoint: usize,
    case_label: Option<String>,
    n1: usize,
    n2: usize,
    iterations: usize,
}

fn remez_record(d: &TwoIntervalDomain, n: u32, r: &BestApproxResult) -> RemezRecord {
    let (lo, hi) = r.poly.hull_f64();
    RemezRecord {
        a: d.a(),
        b: d.b(),
        n,
        digits: r.digits,
        poly: PolyRecord {
            degree: r.poly.degree(),
            hull: [lo, hi],
            coefficients: r
                .poly
                .coefficients()
                .iter()
                .map(|c| c.to_decimal(r.digits))
                .collect(),
        },
        l: r.l.to_decimal(r.digits),
        alternation: r
            .alternation
            .iter()
            .map(|&(x, sign)| AltRecord { x, sign })
            .collect(),
        m: r.m,
        k: r.critical_count,
        n_endpoint: r.endpoint_count,
        case_label: r.case_label.map(|c| c.as_str().to_string()),
        n1: r.n1,
        n2: r.n2,
        iterations: r.iterations,
    }
}

const REMEZ_HEADER: &str = "n,digits,L,m,K,N,case_label,n1,n2,iterations";

fn cmd_remez(
    dom: DomainArgs,
    n: NRange,
    digits: DigitsArg,
    tol: f64,
    io: IoArgs,
) -> twogap::Result<Emitted> {
    check_tol(tol)?;
    let d = TwoIntervalDomain::new(dom.a, dom.b)?;
    let eta = match digits {
        DigitsArg::Auto => Some(eta_for_auto(&d)?),
        DigitsArg::Fixed(_) => None,
    };
    let degrees = n.degrees();
    let results: Vec<(u32, twogap::Result<BestApproxResult>)> = degrees
        .par_iter()
        .map(|&k| {
            let run = resolve_digits(digits, k, eta).and_then(|prec| best_approx(&d, k, prec, tol));
            (k, run)
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for (k, res) in results {
        records.push(remez_record(&d, k, &res?));
    }
    let text = match pick_format(&io, n.is_single()) {
        Format::Json => {
            if n.is_single() {
                json_pretty(&records[0])
            } else {
                json_pretty(&records)
            }
        }
        Format::Csv => {
            let mut s = String::from(REMEZ_HEADER);
            s.push('\n');
            for r in &records {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    r.digits,
                    r.l,
                    r.m,
                    r.k,
                    r.n_endpoint,
                    r.case_label.as_deref().unwrap_or(""),
                    r.n1,
                    r.n2,
                    r.iterations,
                ));
            }
            s
        }
    };
    Ok(Emitted {
        text,
        out: io.out,
        exit: 0,
    })
}

// -------------------------------------------------------------- compare ----

const COMPARE_HEADER: &str =
    "n,phase,D_n,G_DC,a_n,L_theorem,L_refined,L_remez,ratio_theorem,ratio_refined,n1,n2,case,error";

#[derive(Serialize)]
struct CompareRow {
    n: u32,
    phase: Option<f64>,
    #[serde(rename = "D_n")]
    d_n: Option<ExtReal>,
    #[serde(rename = "G_DC")]
    g_dc: Option<f64>,
    a_n: Option<f64>,
    #[serde(rename = "L_theorem")]
    l_theorem: Option<f64>,
    #[serde(rename = "L_refined")]
    l_refined: Option<f64>,
    #[serde(rename = "L_remez")]
    l_remez: Option<String>,
    ratio_theorem: Option<f64>,
    ratio_refined: Option<f64>,
    n1: Option<usize>,
    n2: Option<usize>,
    case: Option<String>,
    error: Option<String>,
}

impl CompareRow {
    fn failed(n: u32, e: &twogap::Error) -> Self {
        CompareRow {
            n,
            phase: None,
            d_n: None,
            g_dc: None,
            a_n: None,
            l_theorem: None,
            l_refined: None,
            l_remez: None,
            ratio_theorem: None,
            ratio_refined: None,
            n1: None,
            n2: None,
            case: None,
            error: Some(e.to_string()),
        }
    }
}

fn compare_row(
    d: &TwoIntervalDomain,
    ch: &twogap::GreenCharacteristics,
    k: u32,
    digits: DigitsArg,
    tol: f64,
) -> CompareRow {
    let attempt = || -> twogap::Result<CompareRow> {
        let rec = predictor::predict(d, ch, k, Variant::Theorem, INGREDIENT_TOL)?;
        let prec = resolve_digits(digits, k, Some(ch.eta))?;
        let r = best_approx(d, k, prec, tol)?;
        let lr = r.l.to_f64();
        Ok(CompareRow {
            n: k,
            phase: Some(rec.phase),
            d_n: Some(rec.d_n),
            g_dc: Some(rec.g_dc),
            a_n: Some(rec.a_n),
            l_theorem: Some(rec.l_theorem),
            l_refined: rec.l_refined,
            l_remez: Some(r.l.to_decimal(r.digits)),
            ratio_theorem: Some(lr / rec.l_theorem),
            ratio_refined: rec.l_refined.map(|v| lr / v),
            n1: Some(r.n1),
            n2: Some(r.n2),
            case: r.case_label.map(|c| c.as_str().to_string()),
            error: None,
        })
    };
    attempt().unwrap_or_else(|e| CompareRow::failed(k, &e))
}

fn cmd_compare(
    dom: DomainArgs,
    n: NRange,
    digits: DigitsArg,
    tol: f64,
    io: IoArgs,
) -> twogap::Result<Emitted> {
    check_tol(tol)?;
    let d = TwoIntervalDomain::new(dom.a, dom.b)?;
    let ch = characteristics(&d, INGREDIENT_TOL)?;
    let rows: Vec<CompareRow> = n
        .degrees()
        .par_iter()
        .map(|&k| compare_row(&d, &ch, k, digits, tol))
        .collect();
    let all_failed = rows.iter().all(|r| r.error.is_some());
    let text = match io.format.unwrap_or(Format::Csv) {
        Format::Json => {
            if n.is_single() {
                json_pretty(&rows[0])
            } else {
                json_pretty(&rows)
            }
        }
        Format::Csv => {
            let mut s = String::from(COMPARE_HEADER);
            s.push('\n');
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    opt_f17(r.phase),
                    opt_f17(r.d_n.map(|x| x.0)),
                    opt_f17(r.g_dc),
                    opt_f17(r.a_n),
                    opt_f17(r.l_theorem),
                    opt_f17(r.l_refined),
                    r.l_remez.as_deref().unwrap_or(""),
                    opt_f17(r.ratio_theorem),
                    opt_f17(r.ratio_refined),
                    opt_int(r.n1),
                    opt_int(r.n2),
                    r.case.as_deref().unwrap_or(""),
                    csv_escape(r.error.as_deref().unwrap_or("")),
                ));
            }
            s
        }
    };
    Ok(Emitted {
        text,
        out: io.out,
        exit: if all_failed { 3 } else { 0 },
    })
}

// ------------------------------------------------- symmetric/degenerate ----

#[derive(Serialize)]
struct SymmetricRecord {
    a: f64,
    m: u32,
    l: f64,
}

fn cmd_symmetric(a: f64, m: u32, io: IoArgs) -> twogap::Result<Emitted> {
    let l = predictor::symmetric_reference(m, a)?;
    let rec = SymmetricRecord { a, m, l };
    let text = match pick_format(&io, true) {
        Format::Json => json_pretty(&rec),
        Format::Csv => format!("a,m,l\n{},{},{}\n", f17(a), m, f17(l)),
    };
    Ok(Emitted {
        text,
        out: io.out,
        exit: 0,
    })
}

#[derive(Serialize)]
struct DegenerateRecord {
    a: f64,
    n: u32,
    l: f64,
}

fn cmd_degenerate(a: f64, n: u32, io: IoArgs) -> twogap::Result<Emitted> {
    let l = predictor::degenerate_reference(n, a)?;
    let rec = DegenerateRecord { a, n, l };
    let text = match pick_format(&io, true) {
        Format::Json => json_pretty(&rec),
        Format::Csv => format!("a,n,l\n{},{},{}\n", f17(a), n, f17(l)),
    };
    Ok(Emitted {
        text,
        out: io.out,
        exit: 0,
    })
}
