//! `polybern`: exact tables, oracle cross-checks, asymptotic comparisons,
//! quadrature checks and limit-law data from the command line.

mod output;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polybern::lclt::{self, Sequence};
use polybern::quad::{self, QuadratureSpec};
use polybern::saddle::{self, Order};
use polybern::{acceptance, log_of_count, oracle, LogEstimate, StirlingTable};

use output::{render, Cell, Format, Table};

const DEFAULT_MAX_N: usize = 420;
const MAX_N_VAR: &str = "POLYBERN_MAX_N";

#[derive(Parser, Debug)]
#[command(
    name = "polybern",
    version,
    about = "Poly-Bernoulli numbers: exact values, brute-force checks and asymptotics"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// An inclusive index range written `a` or `a..b`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IndexRange(RangeInclusive<usize>);

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(IndexRange(lo..=hi))
    }
}

impl IndexRange {
    fn iter(&self) -> RangeInclusive<usize> {
        self.0.clone()
    }

    fn max(&self) -> usize {
        *self.0.end()
    }
}

#[derive(Args, Debug)]
struct Grid {
    /// Row index or inclusive range `a..b`.
    #[arg(long)]
    n: IndexRange,
    /// Column index or inclusive range `a..b`.
    #[arg(long)]
    k: IndexRange,
}

impl Grid {
    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.n
            .iter()
            .flat_map(move |n| self.k.iter().map(move |k| (n, k)))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExactSeq {
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
    #[value(name = "D")]
    D,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleKind {
    Lonesum,
    Gamma,
    Orient,
    Veszt,
    Excedance,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AsymTarget {
    #[value(name = "B")]
    B,
    #[value(name = "D")]
    D,
    #[value(name = "ML")]
    Ml,
    #[value(name = "EXC")]
    Exc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuadKind {
    Parseval,
    Laplace,
    Residue,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LimitKind {
    #[value(name = "B")]
    B,
    #[value(name = "D")]
    D,
    #[value(name = "ML")]
    Ml,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts as decimal strings.
    Exact {
        #[arg(long, value_enum)]
        seq: ExactSeq,
        #[command(flatten)]
        grid: Grid,
    },
    /// Brute-force counts against the formulas. For `excedance`, `n` and
    /// `k` are the letter counts `r` and `s`.
    Oracle {
        #[arg(long, value_enum)]
        which: OracleKind,
        #[command(flatten)]
        grid: Grid,
    },
    /// Exact values against their asymptotic estimates, in log space.
    Asym {
        #[arg(long, value_enum)]
        target: AsymTarget,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[command(flatten)]
        grid: Grid,
    },
    /// Trapezoid evaluations of the integral representations.
    Quad {
        #[arg(long, value_enum)]
        which: QuadKind,
        /// Node count, a power of two at least 8.
        #[arg(long, default_value_t = 4096, value_parser = parse_nodes)]
        nodes: usize,
        /// Diagonal index for `parseval` and `laplace`; ignored by `residue`.
        #[arg(long, default_value = "1..10")]
        k: IndexRange,
        /// Row and column index for `residue`.
        #[arg(long, num_args = 2, value_names = ["N", "K"], default_values_t = [8, 12])]
        at: Vec<usize>,
    },
    /// Figure data and sup discrepancy for the local limit laws.
    Lclt {
        #[arg(long, value_enum)]
        which: LimitKind,
        #[arg(long)]
        n: usize,
        /// Window half-width in units of sqrt(n), `ML` only.
        #[arg(long, default_value_t = 2.0)]
        window: f64,
    },
    /// Runs every acceptance criterion; exits 1 if any fails.
    Verify,
}

fn parse_nodes(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < 8 || !v.is_power_of_two() {
        return Err(format!("{v} is not a power of two at least 8"));
    }
    Ok(v)
}

/// Failure classes, each with its own exit code.
#[derive(Debug)]
enum Failure {
    Config(anyhow::Error),
    Guard(anyhow::Error),
    Verify,
}

impl From<polybern::Error> for Failure {
    fn from(e: polybern::Error) -> Self {
        if e.is_guard() {
            Failure::Guard(e.into())
        } else {
            Failure::Config(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

type Outcome<T> = Result<T, Failure>;

fn table_bound() -> anyhow::Result<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_N_VAR}={v:?} is not a nonnegative integer")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_N),
        Err(e) => bail!("{MAX_N_VAR}: {e}"),
    }
}

/// A table large enough for indices up to `need`, refused above the bound.
fn table_for(need: usize) -> Outcome<StirlingTable> {
    let bound = table_bound()?;
    if need > bound {
        return Err(Failure::Guard(anyhow::anyhow!(
            "table size {need} exceeds the bound {bound} (set {MAX_N_VAR} to raise it)"
        )));
    }
    Ok(StirlingTable::new(need))
}

fn exact(seq: ExactSeq, grid: &Grid) -> Outcome<Vec<Table>> {
    let t = table_for(grid.n.max().max(grid.k.max()) + 1)?;
    let mut out = Table::new("exact", &["n", "k", "value"]);
    for (n, k) in grid.cells() {
        let v = match seq {
            ExactSeq::B => t.poly_bernoulli(n, k)?,
            ExactSeq::C => t.c_relative(n, k)?,
            ExactSeq::D => t.ml_degree(n, k)?,
        };
        out.push(vec![n.into(), k.into(), v.into()]);
    }
    Ok(vec![out])
}

fn oracle_cmd(which: OracleKind, grid: &Grid) -> Outcome<Vec<Table>> {
    let t = table_for(grid.n.max().max(grid.k.max()) + 1)?;
    let mut out = Table::new("oracle", &["n", "k", "oracle", "formula", "match"]);
    for (n, k) in grid.cells() {
        let (brute, formula) = match which {
            OracleKind::Lonesum => (oracle::count_lonesum(n, k)?, t.poly_bernoulli(n, k)?),
            OracleKind::Gamma => (oracle::count_gamma_free(n, k)?, t.poly_bernoulli(n, k)?),
            OracleKind::Orient => (
                oracle::count_acyclic_orientations(n, k)?,
                t.poly_bernoulli(n, k)?,
            ),
            OracleKind::Veszt => (oracle::count_vesztergombi(n, k)?, t.poly_bernoulli(n, k)?),
            OracleKind::Excedance => (oracle::count_excedance_word(n, k)?, t.c_relative(n, k)?),
        };
        let same = brute == formula;
        out.push(vec![
            n.into(),
            k.into(),
            brute.into(),
            formula.into(),
            same.into(),
        ]);
    }
    Ok(vec![out])
}

fn asym(target: AsymTarget, order: Order, grid: &Grid) -> Outcome<Vec<Table>> {
    if order == Order::Second && !matches!(target, AsymTarget::B) {
        return Err(Failure::Config(anyhow::anyhow!(
            "--order 2 exists only for --target B"
        )));
    }
    let t = table_for(grid.n.max().max(grid.k.max()) + 1)?;
    let mut out = Table::new(
        "asym",
        &[
            "n",
            "k",
            "log_exact",
            "log_estimate",
            "relative_error",
            "in_band",
        ],
    );
    for (n, k) in grid.cells() {
        let (exact, estimate) = match target {
            AsymTarget::B if order == Order::Second => {
                if n != k {
                    return Err(Failure::Config(anyhow::anyhow!(
                        "--order 2 needs n = k, got ({n}, {k})"
                    )));
                }
                (t.poly_bernoulli(n, k)?, saddle::diag_asym_log(k, order)?)
            }
            AsymTarget::B => (t.poly_bernoulli(n, k)?, saddle::bivar_asym_log(n, k)?),
            AsymTarget::D => {
                if n != k {
                    return Err(Failure::Config(anyhow::anyhow!(
                        "target D is the diagonal estimate and needs n = k, got ({n}, {k}); use ML off the diagonal"
                    )));
                }
                (t.ml_degree(n, k)?, saddle::d_diag_asym_log(k)?)
            }
            AsymTarget::Ml => (t.ml_degree(n, k)?, saddle::ml_asym_log(n, k)?),
            AsymTarget::Exc => (t.c_relative(n, k)?, saddle::excedance_asym_log(n, k)?),
        };
        let log_exact = log_of_count(&exact)?;
        let band = saddle::saddle_point(n, k)?.in_compact_band();
        out.push(vec![
            n.into(),
            k.into(),
            log_exact.log_value.into(),
            estimate.log_value.into(),
            log_exact.relative_error_of(estimate).into(),
            band.into(),
        ]);
    }
    Ok(vec![out])
}

fn quad_cmd(which: QuadKind, nodes: usize, ks: &IndexRange, at: &[usize]) -> Outcome<Vec<Table>> {
    let spec = QuadratureSpec::new(nodes)?;
    match which {
        QuadKind::Parseval => {
            let t = table_for(ks.max() + 1)?;
            let mut out = Table::new(
                "parseval",
                &["k", "nodes", "integral", "exact", "relative_defect"],
            );
            for k in ks.iter() {
                let v = quad::parseval_b(&t, k, &spec)?;
                let exact = t.poly_bernoulli(k, k)?;
                let defect = (v.ln() - log_of_count(&exact)?.log_value).exp_m1();
                out.push(vec![
                    k.into(),
                    nodes.into(),
                    v.into(),
                    exact.into(),
                    defect.into(),
                ]);
            }
            Ok(vec![out])
        }
        QuadKind::Laplace => {
            let mut out = Table::new(
                "laplace",
                &["k", "nodes", "log_integral", "log_prediction", "ratio"],
            );
            for k in ks.iter() {
                let v = quad::laplace_integral_diag(k, &spec)?;
                let p = quad::laplace_prediction_log(k);
                out.push(vec![
                    k.into(),
                    nodes.into(),
                    v.log_value.into(),
                    p.log_value.into(),
                    (v - p).exp().into(),
                ]);
            }
            Ok(vec![out])
        }
        QuadKind::Residue => {
            let (n, k) = (at[0], at[1]);
            let t = table_for(n.max(k) + 1)?;
            let q = quad::residue_integral_b(n, k, &spec)?;
            let exact: LogEstimate = log_of_count(&t.poly_bernoulli(n, k)?)?;
            let mut out = Table::new(
                "residue",
                &[
                    "n",
                    "k",
                    "nodes",
                    "radius",
                    "log_integral",
                    "log_exact",
                    "log_defect",
                    "imag_ratio",
                ],
            );
            out.push(vec![
                n.into(),
                k.into(),
                nodes.into(),
                q.radius.into(),
                q.log_value.log_value.into(),
                exact.log_value.into(),
                (q.log_value - exact).into(),
                q.imag_ratio.into(),
            ]);
            Ok(vec![out])
        }
    }
}

fn lclt_cmd(which: LimitKind, n: usize, window: f64) -> Outcome<Vec<Table>> {
    let (points, report) = match which {
        LimitKind::B | LimitKind::D => {
            let seq = if matches!(which, LimitKind::B) {
                Sequence::PolyBernoulli
            } else {
                Sequence::MlDegree
            };
            let end = lclt::GaussianParams::new(seq).window_end(n);
            let t = table_for(n.max(end) + 1)?;
            (
                lclt::lclt_series(&t, n, seq)?,
                lclt::lclt_discrepancy(&t, n, seq)?,
            )
        }
        LimitKind::Ml => {
            let t = table_for(n + 1)?;
            (
                lclt::ml_limit_series(&t, n)?,
                lclt::ml_limit_discrepancy(&t, n, window)?,
            )
        }
    };
    let mut series = Table::new("series", &["k", "exact", "limit"]);
    for p in points {
        series.push(vec![p.k.into(), p.exact.into(), p.limit.into()]);
    }
    let mut disc = Table::new("discrepancy", &["n", "sup", "scaled_sup", "argmax"]);
    disc.push(vec![
        report.n.into(),
        report.sup.into(),
        report.scaled_sup().into(),
        report.argmax.into(),
    ]);
    Ok(vec![series, disc])
}

/// Runs the suite twice; the second run feeds the determinism criterion.
fn verify() -> (Vec<Table>, String, bool) {
    let mut first = acceptance::run_all();
    let second = acceptance::run_all();
    first
        .criteria
        .push(acceptance::determinism(&first, &second));
    let mut t = Table::new("criteria", &["criterion", "passed", "title", "details"]);
    for c in &first.criteria {
        t.push(vec![
            Cell::from(usize::from(c.id)),
            c.passed.into(),
            Cell::Text(c.title.to_string()),
            Cell::Text(c.details.join(" | ")),
        ]);
    }
    (vec![t], first.render(), first.all_passed())
}

fn emit(cli: &Cli, text: &str) -> Outcome<()> {
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .context("writing standard output")?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome<()> {
    let tables = match &cli.command {
        Command::Exact { seq, grid } => exact(*seq, grid)?,
        Command::Oracle { which, grid } => oracle_cmd(*which, grid)?,
        Command::Asym {
            target,
            order,
            grid,
        } => asym(*target, Order::try_from(*order)?, grid)?,
        Command::Quad {
            which,
            nodes,
            k,
            at,
        } => quad_cmd(*which, *nodes, k, at)?,
        Command::Lclt { which, n, window } => lclt_cmd(*which, *n, *window)?,
        Command::Verify => {
            let (tables, text, passed) = verify();
            // CSV mode prints the human-readable report.
            let body = match cli.format {
                Format::Csv => text,
                Format::Json => render(&tables, Format::Json),
            };
            emit(cli, &body)?;
            return if passed { Ok(()) } else { Err(Failure::Verify) };
        }
    };
    emit(cli, &render(&tables, cli.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // The suite evaluates out-of-band directions; only errors are shown.
    let level = if matches!(cli.command, Command::Verify) {
        "error"
    } else {
        "warn"
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => {
            eprintln!("polybern: verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("polybern: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(e)) => {
            eprintln!("polybern: {e:#}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("3".parse::<IndexRange>().unwrap(), IndexRange(3..=3));
        assert_eq!("2..5".parse::<IndexRange>().unwrap(), IndexRange(2..=5));
        assert!("5..2".parse::<IndexRange>().is_err());
        assert!("x".parse::<IndexRange>().is_err());
    }

    #[test]
    fn node_counts() {
        assert_eq!(parse_nodes("8"), Ok(8));
        assert!(parse_nodes("4").is_err());
        assert!(parse_nodes("24").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
