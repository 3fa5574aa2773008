use std::io::Read;
use std::process::ExitCode;

use clap::{ArgGroup, CommandFactory, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::json;

use stirlingkit::egf::{log_substitution, stirling_substitution, Elementary};
use stirlingkit::exact::{format_rational, parse_rational};
use stirlingkit::expr::{eval, parse, Env};
use stirlingkit::identities::{
    find_identity, list_identities, run_all_with, check_identity_with, IdentityReport, Overrides,
    RunConfig, DEFAULT_EPS, DEFAULT_MAX_N, DEFAULT_ORDER,
};
use stirlingkit::poly::{
    bernoulli_poly, binom_poly, euler_poly, exp_poly, geom_poly,
};
use stirlingkit::seq::{Family, IndexedValue, Triangle};
use stirlingkit::transform::{
    binomial_transform, stirling_inverse, stirling_transform, weighted_stirling_transform,
    BinomialSign, Sequence, StirlingKind, TransformKind,
};
use stirlingkit::{QEgf, QPoly, Rational, SeqContext};

const MAX_ORDER: u64 = stirlingkit::identities::MAX_ORDER as u64;
const MAX_TABLE_N: u64 = 1000;

#[derive(Parser)]
#[command(name = "stirlingkit", version, about = "Exact Stirling numbers, transforms and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyKind {
    /// exponential polynomial phi_n(x)
    Exp,
    /// geometric polynomial omega_n(x)
    Geom,
    Bernoulli,
    Euler,
    /// C(x, n)
    Binom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    Exp,
    Expm1,
    Log1p,
    Geom,
    Dilog,
    /// (1+t)^x, needs --x
    Pow1p,
    /// exp(e^t - 1)
    Bell,
    /// e^{-t}/(1-t)
    Derangement,
    /// 2 e^{xt}/(e^t+1), needs --x
    Euler,
    /// t e^{xt}/(e^t-1), needs --x
    Bernoulli,
    /// -ln(1+t)/(1+t)^p, needs --p
    Hyperharmonic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Substitution {
    /// f((mu/lambda)(e^{lambda t} - 1))
    Exp,
    /// f((mu/lambda) ln(1 + lambda t))
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum StirlingArg {
    First,
    Second,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a number family for indices 0..=n.
    Seq {
        /// factorial, bell, fubini, harmonic, hyperharmonic, derangement, bernoulli,
        /// bernoulli-plus, euler, power-sum, faulhaber, moment
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_TABLE_N))]
        n: u64,
        /// Second parameter of hyperharmonic, power-sum, faulhaber and moment.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=MAX_TABLE_N))]
        p: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Tabulate a triangle row-major for 0 <= k <= n <= N.
    Triangle {
        /// stirling2, stirling1 or binomial
        kind: Triangle,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_TABLE_N))]
        n: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a polynomial of a family.
    Poly {
        #[arg(value_enum)]
        kind: PolyKind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=200))]
        n: u64,
        /// Also evaluate at this rational point.
        #[arg(long, value_parser = rational)]
        at: Option<Rational>,
        #[arg(long, value_enum, default_value = "json")]
        format: PolyFormat,
    },
    /// Print truncated series coefficients, EGF-normalized and ordinary.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        #[arg(long, default_value_t = DEFAULT_ORDER as u64, value_parser = clap::value_parser!(u64).range(0..=MAX_ORDER))]
        order: u64,
        #[arg(long, value_parser = rational)]
        x: Option<Rational>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_TABLE_N))]
        p: Option<u64>,
        /// Substitute a Stirling-type inner series; both evaluation routes must agree.
        #[arg(long, value_enum)]
        substitute: Option<Substitution>,
        #[arg(long, value_parser = rational, default_value = "1")]
        lambda: Rational,
        #[arg(long, value_parser = rational, default_value = "1")]
        mu: Rational,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Transform a JSON array of "p/q" strings read from a file or stdin.
    Transform {
        /// stirling, inv-stirling, binomial, alt-binomial or weighted
        #[arg(long)]
        kind: TransformKind,
        #[arg(long, value_parser = rational, default_value = "1")]
        lambda: Rational,
        #[arg(long, value_parser = rational, default_value = "1")]
        mu: Rational,
        /// Stirling numbers used by the weighted transform.
        #[arg(long, value_enum, default_value = "second")]
        stirling: StirlingArg,
        /// Input file; stdin when absent.
        input: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check registered identities.
    #[command(group(ArgGroup::new("which").required(true).args(["all", "id"])))]
    Verify {
        #[arg(long)]
        all: bool,
        #[arg(long)]
        id: Option<String>,
        /// Upper end of n; defaults to 40, or STIRLINGKIT_MAX_N when set.
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        max_p: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_ORDER))]
        order: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
        /// List the registry instead of checking.
        #[arg(long, conflicts_with_all = ["max_n", "max_p", "order", "eps"])]
        list: bool,
    },
    /// Evaluate an expression exactly.
    Eval {
        expr: String,
        /// Bind a variable, e.g. --var n=3 or --var x=1/2.
        #[arg(long = "var", value_parser = binding)]
        vars: Vec<(String, Rational)>,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

fn binding(s: &str) -> Result<(String, Rational), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    Ok((name.trim().to_string(), rational(value)?))
}

/// Reports a usage error with the synopsis of subcommand `sub`.
fn usage_error(sub: &str, msg: impl std::fmt::Display) -> ExitCode {
    let mut root = Cli::command();
    root.build();
    let cmd = root.find_subcommand_mut(sub).expect("known subcommand");
    cmd.error(clap::error::ErrorKind::ValueValidation, msg).print().ok();
    ExitCode::from(2)
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

/// Right-aligned columns separated by two spaces.
fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    out.join("\n")
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = vec![header.join(",")];
    out.extend(rows.iter().map(|r| r.join(",")));
    out.join("\n")
}

fn emit_table(table: &[IndexedValue], format: Format) -> String {
    let has_k = table.first().is_some_and(|r| r.k.is_some());
    let has_p = table.first().is_some_and(|r| r.p.is_some());
    let mut header = vec!["n"];
    if has_k {
        header.push("k");
    }
    if has_p {
        header.push("p");
    }
    header.push("value");
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            let mut row = vec![r.n.to_string()];
            row.extend(r.k.map(|k| k.to_string()));
            row.extend(r.p.map(|p| p.to_string()));
            row.push(format_rational(&r.value));
            row
        })
        .collect();
    match format {
        Format::Json if has_k => serde_json::to_string(table).expect("serializable"),
        Format::Json => {
            let values: Vec<Rational> = table.iter().map(|r| r.value.clone()).collect();
            serde_json::to_string(&strings(&values)).expect("serializable")
        }
        Format::Csv => csv(&header, &rows),
        Format::Text => aligned(&header, &rows),
    }
}

fn poly_command(kind: PolyKind, n: usize, at: Option<Rational>, format: PolyFormat) -> String {
    let ctx = SeqContext::new();
    let p: QPoly = match kind {
        PolyKind::Exp => exp_poly(n),
        PolyKind::Geom => geom_poly(&ctx, n),
        PolyKind::Bernoulli => bernoulli_poly(&ctx, n),
        PolyKind::Euler => euler_poly(n),
        PolyKind::Binom => binom_poly(n),
    };
    let value = at.map(|x| p.eval(&x));
    match format {
        PolyFormat::Json => {
            let coeffs = strings(p.coeffs());
            match value {
                Some(v) => serde_json::to_string(&json!({
                    "coeffs": coeffs,
                    "value": format_rational(&v),
                }))
                .expect("serializable"),
                None => serde_json::to_string(&coeffs).expect("serializable"),
            }
        }
        PolyFormat::Text => match value {
            Some(v) => format!("{p}\n{}", format_rational(&v)),
            None => p.to_string(),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn series_command(
    kind: SeriesKind,
    order: usize,
    x: Option<Rational>,
    p: Option<u64>,
    substitute: Option<Substitution>,
    lambda: Rational,
    mu: Rational,
    format: Format,
) -> Result<String, String> {
    let ctx = SeqContext::new();
    let need_x = || x.clone().ok_or("this series needs --x".to_string());
    let z = Rational::from_integer;
    let f: QEgf = match kind {
        SeriesKind::Exp => QEgf::elementary(&Elementary::Exp, order),
        SeriesKind::Expm1 => QEgf::elementary(&Elementary::Expm1, order),
        SeriesKind::Log1p => QEgf::elementary(&Elementary::Log1p, order),
        SeriesKind::Geom => QEgf::elementary(&Elementary::Geom, order),
        SeriesKind::Dilog => QEgf::elementary(&Elementary::Dilog, order),
        SeriesKind::Pow1p => QEgf::elementary(&Elementary::Pow1p(need_x()?), order),
        SeriesKind::Bell => QEgf::elementary(&Elementary::Expm1, order)
            .exp()
            .map_err(|e| e.to_string())?,
        SeriesKind::Derangement => QEgf::from_fn(order, |n| z(ctx.derangement(n))),
        SeriesKind::Euler => {
            let xv = need_x()?;
            let polys = stirlingkit::poly::euler_polys(order);
            QEgf::from_fn(order, |n| polys[n].eval(&xv))
        }
        SeriesKind::Bernoulli => {
            let xv = need_x()?;
            QEgf::from_fn(order, |n| bernoulli_poly(&ctx, n).eval(&xv))
        }
        SeriesKind::Hyperharmonic => {
            let p = p.ok_or("this series needs --p")? as usize;
            QEgf::from_fn(order, |n| {
                let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
                sign * z(ctx.factorial(n)) * ctx.hyperharmonic(p, n)
            })
        }
    };
    let egf: Vec<Rational> = match substitute {
        None => f.into_coeffs(),
        Some(Substitution::Exp) => {
            stirling_substitution(&ctx, &f, &lambda, &mu).map_err(|e| e.to_string())?
        }
        Some(Substitution::Log) => {
            log_substitution(&ctx, &f, &lambda, &mu).map_err(|e| e.to_string())?
        }
    };
    let ordinary: Vec<Rational> = egf
        .iter()
        .enumerate()
        .map(|(n, a)| a / z(ctx.factorial(n)))
        .collect();
    let rows: Vec<Vec<String>> = egf
        .iter()
        .zip(&ordinary)
        .enumerate()
        .map(|(n, (a, c))| vec![n.to_string(), format_rational(a), format_rational(c)])
        .collect();
    let header = ["n", "egf", "ordinary"];
    Ok(match format {
        Format::Json => serde_json::to_string(&json!({
            "egf": strings(&egf),
            "ordinary": strings(&ordinary),
        }))
        .expect("serializable"),
        Format::Csv => csv(&header, &rows),
        Format::Text => aligned(&header, &rows),
    })
}

fn transform_command(
    kind: TransformKind,
    lambda: Rational,
    mu: Rational,
    stirling: StirlingArg,
    input: Option<std::path::PathBuf>,
    format: Format,
) -> Result<String, String> {
    let text = match input {
        Some(path) => std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            buf
        }
    };
    let raw: Vec<String> =
        serde_json::from_str(&text).map_err(|e| format!("input must be a JSON array of strings: {e}"))?;
    let values = raw
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let seq = Sequence::new(values).map_err(|e| e.to_string())?;
    let ctx = SeqContext::new();
    let out = match kind {
        TransformKind::Stirling => stirling_transform(&ctx, &seq),
        TransformKind::InverseStirling => stirling_inverse(&ctx, &seq),
        TransformKind::Binomial => binomial_transform(&seq, BinomialSign::Plain),
        TransformKind::AlternatingBinomial => binomial_transform(&seq, BinomialSign::Alternating),
        TransformKind::Weighted => {
            let kind = match stirling {
                StirlingArg::First => StirlingKind::First,
                StirlingArg::Second => StirlingKind::Second,
            };
            weighted_stirling_transform(&ctx, &seq, &lambda, &mu, kind)
        }
    };
    let values = out.into_vec();
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(n, v)| vec![n.to_string(), format_rational(v)])
        .collect();
    Ok(match format {
        Format::Json => serde_json::to_string(&strings(&values)).expect("serializable"),
        Format::Csv => csv(&["n", "value"], &rows),
        Format::Text => aligned(&["n", "value"], &rows),
    })
}

fn report_text(r: &IdentityReport) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let mut out = format!("{status}  {:<7} {:>6} checked", r.id, r.checked);
    if !r.passed() {
        out.push_str(&format!(", {} failed", r.failures.len()));
        for f in r.failures.iter().take(5) {
            out.push_str(&format!("\n      {}: lhs = {}, rhs = {}", f.params, f.lhs, f.rhs));
        }
        if r.failures.len() > 5 {
            out.push_str(&format!("\n      ... {} more", r.failures.len() - 5));
        }
    }
    for note in &r.notes {
        out.push_str(&format!("\n      note: {note}"));
    }
    out
}

fn env_max_n() -> Result<Option<usize>, String> {
    match std::env::var("STIRLINGKIT_MAX_N") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("STIRLINGKIT_MAX_N must be a nonnegative integer, got {v:?}")),
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_command(
    all: bool,
    id: Option<String>,
    max_n: Option<usize>,
    max_p: Option<usize>,
    order: Option<u64>,
    eps: Option<f64>,
    format: ReportFormat,
    list: bool,
) -> ExitCode {
    if list {
        let specs = list_identities();
        let specs: Vec<_> = match &id {
            Some(id) => match find_identity(id) {
                Ok(s) => vec![s],
                Err(e) => return usage_error("verify", e),
            },
            None => specs,
        };
        for s in specs {
            println!("{:<7} {}\n        {}", s.id, s.description, s.statement);
        }
        return ExitCode::SUCCESS;
    }
    if let Some(e) = eps {
        if !(e > 0.0 && e.is_finite()) {
            return usage_error("verify", "--eps must be a positive number");
        }
    }
    let default_n = match env_max_n() {
        Ok(v) => v,
        Err(e) => return usage_error("verify", e),
    };
    let order = order.map(|o| o as usize);
    let ctx = SeqContext::new();
    let reports = if all {
        let max_n = max_n.or(default_n).unwrap_or(DEFAULT_MAX_N);
        if max_n < 5 {
            return usage_error("verify", "--max-n must be at least 5 with --all");
        }
        run_all_with(
            &ctx,
            &RunConfig {
                max_n,
                max_p,
                order: order.unwrap_or(DEFAULT_ORDER),
                eps: eps.unwrap_or(DEFAULT_EPS),
            },
        )
    } else {
        let id = id.expect("clap requires --all or --id");
        let spec = match find_identity(&id) {
            Ok(s) => s,
            Err(e) => return usage_error("verify", e),
        };
        // the environment default still respects the identity's own cap
        let max_n = max_n.or_else(|| {
            default_n.map(|n| spec.domain.n_cap.map_or(n, |cap| cap.min(n)))
        });
        if max_n.is_some_and(|n| n < spec.domain.n_start) {
            return usage_error("verify", format!("{id} starts at n = {}", spec.domain.n_start));
        }
        let overrides = Overrides {
            max_n,
            max_p,
            order,
            eps,
        };
        vec![check_identity_with(&ctx, &id, &overrides).expect("id was found")]
    };
    let passed = reports.iter().all(IdentityReport::passed);
    match format {
        ReportFormat::Json => {
            let text = if all {
                serde_json::to_string_pretty(&reports)
            } else {
                serde_json::to_string_pretty(&reports[0])
            };
            println!("{}", text.expect("serializable"));
        }
        ReportFormat::Text => {
            for r in &reports {
                println!("{}", report_text(r));
            }
            let failing = reports.iter().filter(|r| !r.passed()).count();
            let instances: usize = reports.iter().map(|r| r.checked).sum();
            println!(
                "{} identities, {instances} instances, {failing} failing",
                reports.len()
            );
        }
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn eval_command(src: &str, vars: Vec<(String, Rational)>, format: ReportFormat) -> ExitCode {
    let ast = match parse(src) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let ctx = SeqContext::new();
    let mut env = Env::new(&ctx);
    for (name, value) in vars {
        env.set(name, value);
    }
    match eval(&ast, &env) {
        Ok(v) => {
            let s = format_rational(&v);
            match format {
                ReportFormat::Json => println!("{}", serde_json::to_string(&s).expect("serializable")),
                ReportFormat::Text => println!("{s}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Seq { family, n, p, format } => {
            let ctx = SeqContext::new();
            println!("{}", emit_table(&family.table(&ctx, n as usize, p as usize), format));
            ExitCode::SUCCESS
        }
        Command::Triangle { kind, n, format } => {
            let ctx = SeqContext::new();
            println!("{}", emit_table(&kind.table(&ctx, n as usize), format));
            ExitCode::SUCCESS
        }
        Command::Poly { kind, n, at, format } => {
            println!("{}", poly_command(kind, n as usize, at, format));
            ExitCode::SUCCESS
        }
        Command::Series {
            kind,
            order,
            x,
            p,
            substitute,
            lambda,
            mu,
            format,
        } => {
            if substitute.is_some() && lambda.is_zero() {
                return usage_error("series", "--lambda must be nonzero");
            }
            match series_command(kind, order as usize, x, p, substitute, lambda, mu, format) {
                Ok(s) => {
                    println!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error("series", e),
            }
        }
        Command::Transform {
            kind,
            lambda,
            mu,
            stirling,
            input,
            format,
        } => match transform_command(kind, lambda, mu, stirling, input, format) {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Verify {
            all,
            id,
            max_n,
            max_p,
            order,
            eps,
            format,
            list,
        } => verify_command(all, id, max_n, max_p, order, eps, format, list),
        Command::Eval { expr, vars, format } => eval_command(&expr, vars, format),
    }
}
