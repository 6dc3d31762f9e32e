//! The end-to-end check list. Each criterion runs at a pinned tolerance and
//! yields one PASS/FAIL line plus detail lines; the rendered report is
//! deterministic (no timings, fixed float formatting) so two runs can be
//! compared byte for byte.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::count::{log_of_count, LogEstimate};
use crate::error::Result;
use crate::exact::{stirling2_explicit, StirlingTable};
use crate::lclt::{self, GaussianParams, MLShapeParams, Sequence};
use crate::oracle;
use crate::quad::{self, QuadratureSpec};
use crate::saddle::{self, GfDescriptor, Order};

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionResult {
    fn new(id: u8, title: &'static str) -> Self {
        CriterionResult {
            id,
            title,
            passed: true,
            details: Vec::new(),
        }
    }

    /// Records a sub-check; any failing sub-check fails the criterion.
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        let tag = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("{tag} {}", detail.into()));
        self.passed &= ok;
    }

    /// A detail line that does not affect the verdict.
    fn note(&mut self, detail: impl Into<String>) {
        self.details.push(format!("info {}", detail.into()));
    }

    fn fail_on_error<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn verdict_line(&self) -> String {
        let v = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {} {v} {}", self.id, self.title)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let _ = writeln!(out, "{}", c.verdict_line());
            for d in &c.details {
                let _ = writeln!(out, "    {d}");
            }
        }
        out
    }
}

/// Shared exact tables, large enough for every criterion.
pub struct Context {
    table: StirlingTable,
}

impl Context {
    pub fn new() -> Self {
        Context {
            table: StirlingTable::new(210),
        }
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn ln_b(t: &StirlingTable, n: usize, k: usize) -> LogEstimate {
    log_of_count(&t.poly_bernoulli(n, k).expect("table bound")).expect("B > 0")
}

fn ln_d(t: &StirlingTable, n: usize, k: usize) -> LogEstimate {
    log_of_count(&t.ml_degree(n, k).expect("table bound")).expect("D > 0 for n, k >= 1")
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const ASYMPTOTIC_BUDGET: Duration = Duration::from_secs(120);

/// Brute-force interpretations agree exactly with the formulas.
pub fn criterion_1(ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(1, "oracle equivalence");
    let t = &ctx.table;
    let start = Instant::now();
    let (mut pairs, mut bad) = (0, Vec::new());
    for n in 0..=16usize {
        for k in 0..=16usize {
            if n * k > 16 {
                continue;
            }
            pairs += 1;
            let b = t.poly_bernoulli(n, k).unwrap();
            let agree = oracle::count_lonesum(n, k).as_ref() == Ok(&b)
                && oracle::count_gamma_free(n, k).as_ref() == Ok(&b)
                && oracle::count_acyclic_orientations(n, k).as_ref() == Ok(&b)
                && oracle::count_lonesum_restricted(n, k, false, true) == t.c_relative(n, k)
                && oracle::count_lonesum_restricted(n, k, true, true) == t.ml_degree(n, k);
            if !agree {
                bad.push((n, k));
            }
        }
    }
    r.check(
        bad.is_empty(),
        format!("lonesum, gamma-free, acyclic orientations, C and D restrictions: {pairs} pairs with n*k <= 16, mismatches {bad:?}"),
    );
    let mut bad = Vec::new();
    let mut pairs = 0;
    for n in 0..=8usize {
        for k in 0..=8 - n {
            pairs += 1;
            if oracle::count_vesztergombi(n, k) != t.poly_bernoulli(n, k) {
                bad.push((n, k));
            }
        }
    }
    r.check(
        bad.is_empty(),
        format!("Vesztergombi permutations: {pairs} pairs with n+k <= 8, mismatches {bad:?}"),
    );
    r.check(start.elapsed() < ORACLE_BUDGET, "runtime under 60 s");
    r
}

/// Exact identities between the formula routes.
pub fn criterion_2(ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(2, "formula identities");
    let t = &ctx.table;

    let sym = (0..=30).all(|n| (0..=30).all(|k| t.poly_bernoulli(n, k) == t.poly_bernoulli(k, n)));
    r.check(sym, "B(n,k) = B(k,n) for n,k <= 30");

    let ml = (0..=15)
        .all(|n| (0..=15).all(|k| t.ml_degree(n, k) == t.ml_degree_inclusion_exclusion(n, k)));
    r.check(
        ml,
        "ML sum of Stirling products = double inclusion-exclusion for n,k <= 15",
    );

    let st = (0..=40).all(|n| (0..=n).all(|m| t.stirling2(n, m) == stirling2_explicit(n, m)));
    r.check(st, "Stirling recurrence = alternating sum for n <= 40");

    let diag = (0..=40usize).all(|k| {
        let squares: num_bigint::BigUint = (0..=k)
            .map(|m| {
                let v = t.factorial(m).unwrap().into_biguint() * t.entry(k + 1, m + 1).unwrap();
                &v * &v
            })
            .sum();
        t.poly_bernoulli(k, k).unwrap().into_biguint() == squares
    });
    r.check(diag, "B(k,k) = sum_m (m! S(k+1,m+1))^2 for k <= 40");
    r
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// The direction function, its inverse and the critical equations.
pub fn criterion_3(_ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(3, "saddle layer");
    let ln2 = std::f64::consts::LN_2;
    if let Some(f) = r.fail_on_error("f(ln 2)", saddle::f_dir(ln2)) {
        r.check(
            (f - 1.0).abs() <= 1e-12,
            format!("|f(ln 2) - 1| = {}", sci((f - 1.0).abs())),
        );
    }
    if let Some(a) = r.fail_on_error("f^-1(1)", saddle::f_inverse(1.0)) {
        r.check(
            (a - ln2).abs() <= 1e-12,
            format!("|f^-1(1) - ln 2| = {}", sci((a - ln2).abs())),
        );
    }

    let (mut worst_trip, mut worst_var) = (0f64, 0f64);
    for ratio in log_grid(0.05, 20.0, 200) {
        match (saddle::f_inverse(ratio), saddle::f_inverse(1.0 / ratio)) {
            (Ok(t), Ok(s)) => {
                let trip = saddle::f_dir(t).map_or(f64::INFINITY, |f| (f - ratio).abs());
                worst_trip = worst_trip.max(trip);
                worst_var = worst_var.max(((-t).exp() + (-s).exp() - 1.0).abs());
            }
            _ => worst_trip = f64::INFINITY,
        }
    }
    r.check(
        worst_trip <= 1e-11,
        format!(
            "round trip on 200 points in [0.05, 20]: max {}",
            sci(worst_trip)
        ),
    );
    r.check(
        worst_var <= 1e-11,
        format!("e^-a + e^-b = 1 on the same grid: max {}", sci(worst_var)),
    );

    let mut worst = 0f64;
    for n in 1..=50 {
        for k in 1..=50 {
            worst = worst.max(saddle::saddle_point(n, k).map_or(f64::INFINITY, |sp| {
                saddle::critical_residual(&sp, n, k).abs()
            }));
        }
    }
    r.check(
        worst <= 1e-9,
        format!(
            "critical equation k a e^-a = n b e^-b for n,k <= 50: max rel {}",
            sci(worst)
        ),
    );
    r
}

/// The general smooth-point formula reproduces the closed forms.
pub fn criterion_4(_ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(4, "specialisation of the smooth-point formula");
    let (mut pb, mut ml) = (0f64, 0f64);
    for n in 1..=30 {
        for k in 1..=30 {
            let d = |a: Result<LogEstimate>, b: Result<LogEstimate>| match (a, b) {
                (Ok(a), Ok(b)) => (a - b).abs(),
                _ => f64::INFINITY,
            };
            pb = pb.max(d(
                saddle::acsv_general_log(GfDescriptor::PolyBernoulli, n, k),
                saddle::bivar_asym_log(n, k),
            ));
            ml = ml.max(d(
                saddle::acsv_general_log(GfDescriptor::MlDegree, n, k),
                saddle::ml_asym_log(n, k),
            ));
        }
    }
    r.check(
        pb <= 1e-9,
        format!(
            "G = 1 vs bivariate closed form, n,k <= 30: max |dlog| {}",
            sci(pb)
        ),
    );
    r.check(
        ml <= 1e-9,
        format!(
            "G = e^-x-y vs ML closed form, n,k <= 30: max |dlog| {}",
            sci(ml)
        ),
    );

    let (mut db, mut dd) = (0f64, 0f64);
    for k in 1..=60 {
        if let (Ok(a), Ok(b)) = (
            saddle::bivar_asym_log(k, k),
            saddle::diag_asym_log(k, Order::First),
        ) {
            db = db.max((a - b).abs());
        } else {
            db = f64::INFINITY;
        }
        if let (Ok(a), Ok(b)) = (saddle::ml_asym_log(k, k), saddle::d_diag_asym_log(k)) {
            dd = dd.max((a - b).abs());
        } else {
            dd = f64::INFINITY;
        }
    }
    r.check(
        db <= 1e-10,
        format!(
            "bivariate at n = k vs diagonal estimate, k <= 60: max |dlog| {}",
            sci(db)
        ),
    );
    r.check(
        dd <= 1e-10,
        format!(
            "ML at n = k vs corrected D(k,k) estimate, k <= 60: max |dlog| {}",
            sci(dd)
        ),
    );
    r
}

/// Relative errors of the estimates against exact values.
pub fn criterion_5(ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(5, "asymptotic accuracy at desk scale");
    let t = &ctx.table;
    let start = Instant::now();
    let c = saddle::second_order_constant();
    r.note(format!("second-order constant C = {}", sci(c)));

    let rel = |k: usize, order: Order| {
        ln_b(t, k, k).relative_error_of(saddle::diag_asym_log(k, order).unwrap())
    };

    let mut worst = (0f64, 0usize);
    for k in 20..=60 {
        let scaled = rel(k, Order::First).abs() * k as f64 / (2.0 * c.abs());
        if scaled > worst.0 {
            worst = (scaled, k);
        }
    }
    r.check(
        worst.0 <= 1.0,
        format!(
            "|B(k,k)/order-1 - 1| <= 2|C|/k for k in [20,60]: worst ratio to bound {} at k = {}",
            sci(worst.0),
            worst.1
        ),
    );
    let slope = rel(50, Order::First) * 50.0;
    r.check(
        (slope - c).abs() <= 0.1 * c.abs(),
        format!(
            "|(B/order-1 - 1) k - C| <= 0.1|C| at k = 50: (ratio - 1) k = {}",
            sci(slope)
        ),
    );
    let leading_k1 = {
        let e2 = saddle::diag_asym_log(50, Order::Second).unwrap();
        LogEstimate::new(e2.log_value - (c / 50.0).ln_1p())
    };
    r.note(format!(
        "against the (k+1) leading term instead: (ratio - 1) k = {} at k = 50",
        sci(ln_b(t, 50, 50).relative_error_of(leading_k1) * 50.0)
    ));

    let closer: Vec<usize> = (10..=60)
        .filter(|&k| rel(k, Order::Second).abs() >= rel(k, Order::First).abs())
        .collect();
    r.check(
        closer.is_empty(),
        format!("order 2 strictly closer than order 1 for k in [10,60], exceptions {closer:?}"),
    );

    let steps = [2usize, 4, 8, 16];
    let b_err: Vec<f64> = steps
        .iter()
        .map(|&s| {
            ln_b(t, 2 * s, 3 * s)
                .relative_error_of(saddle::bivar_asym_log(2 * s, 3 * s).unwrap())
                .abs()
        })
        .collect();
    r.check(
        strictly_decreasing(&b_err) && b_err[3] <= 0.05,
        format!(
            "B along (2t,3t), t = 2,4,8,16: |rel err| {:?}",
            b_err.iter().map(|&e| sci(e)).collect::<Vec<_>>()
        ),
    );
    let d_err: Vec<f64> = steps
        .iter()
        .map(|&s| {
            ln_d(t, 2 * s, 3 * s)
                .relative_error_of(saddle::ml_asym_log(2 * s, 3 * s).unwrap())
                .abs()
        })
        .collect();
    r.check(
        strictly_decreasing(&d_err) && d_err[3] <= 0.05,
        format!(
            "ML along (2t,3t), t = 2,4,8,16: |rel err| {:?}",
            d_err.iter().map(|&e| sci(e)).collect::<Vec<_>>()
        ),
    );
    r.check(start.elapsed() < ASYMPTOTIC_BUDGET, "runtime under 120 s");
    r
}

/// Trapezoid evaluations of the integral representations.
pub fn criterion_6(ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(6, "quadrature");
    let t = &ctx.table;

    let mut worst = 0f64;
    for k in 0..=10usize {
        // 2k+4 nodes, raised to the rule's floor of 8 for k <= 1.
        let spec = QuadratureSpec::new((2 * k + 4).max(8)).unwrap();
        let exact = ln_b(t, k, k);
        worst = worst.max(match quad::parseval_b(t, k, &spec) {
            Ok(v) => (v.ln() - exact.log_value).exp_m1().abs(),
            Err(_) => f64::INFINITY,
        });
    }
    r.check(
        worst <= 1e-9,
        format!(
            "Parseval integral = B(k,k) for k <= 10 with 2k+4 nodes: max rel {}",
            sci(worst)
        ),
    );

    let spec = QuadratureSpec::new(4096).unwrap();
    if let Some(q) = r.fail_on_error("circle integral", quad::residue_integral_b(8, 12, &spec)) {
        let d = (q.log_value - ln_b(t, 8, 12)).abs();
        r.check(
            d <= 1e-4,
            format!("circle integral at (8,12), 4096 nodes: |dlog| {}", sci(d)),
        );
    }
    if let Some(l) = r.fail_on_error("Laplace integral", quad::laplace_integral_diag(100, &spec)) {
        let ratio = (l - quad::laplace_prediction_log(100)).exp();
        r.check(
            (ratio - 1.0).abs() <= 0.02,
            format!(
                "Laplace integral / Laplace prediction at k = 100: {}",
                sci(ratio)
            ),
        );
    }
    r
}

/// Truncates to the digits printed with a trailing ellipsis.
fn printed_digits(x: f64, digits: i32) -> f64 {
    let s = 10f64.powi(digits);
    (x * s).floor() / s
}

/// Local limit laws.
pub fn criterion_7(ctx: &Context) -> CriterionResult {
    let mut r = CriterionResult::new(7, "local central limit theorems");
    let t = &ctx.table;
    let p = GaussianParams::new(Sequence::PolyBernoulli);
    for (name, value, printed) in [
        ("rho", p.rho, 0.458),
        ("C", p.amplitude, 3.449),
        ("omega", p.mean_rate, 1.268),
        ("sigma", p.variance_rate, 0.871),
    ] {
        let ok = (printed_digits(value, 3) - printed).abs() < 1e-12;
        r.check(ok, format!("{name} = {value:.9} reads {printed}..."));
    }

    for (label, seq) in [("B", Sequence::PolyBernoulli), ("D", Sequence::MlDegree)] {
        let reports: Option<Vec<_>> = [10, 20, 40, 80]
            .iter()
            .map(|&n| r.fail_on_error("lclt_discrepancy", lclt::lclt_discrepancy(t, n, seq)))
            .collect();
        if let Some(reports) = reports {
            let raw: Vec<f64> = reports.iter().map(|d| d.sup).collect();
            let scaled: Vec<f64> = reports.iter().map(|d| d.scaled_sup()).collect();
            r.check(
                strictly_decreasing(&raw) && strictly_decreasing(&scaled),
                format!(
                    "{label}: sup over n = 10,20,40,80 {:?}; sqrt(n) sup {:?}",
                    raw.iter().map(|&e| sci(e)).collect::<Vec<_>>(),
                    scaled.iter().map(|&e| sci(e)).collect::<Vec<_>>()
                ),
            );
        }
    }

    let ml: Option<Vec<f64>> = [30, 60, 120]
        .iter()
        .map(|&n| {
            r.fail_on_error(
                "ml_limit_discrepancy",
                lclt::ml_limit_discrepancy(t, n, 2.0),
            )
            .map(|d| d.sup)
        })
        .collect();
    if let Some(ml) = ml {
        r.check(
            strictly_decreasing(&ml),
            format!(
                "ML limit shape, K = 2, n = 30,60,120: sup {:?}",
                ml.iter().map(|&e| sci(e)).collect::<Vec<_>>()
            ),
        );
    }
    if let Some(series) = r.fail_on_error("ml_limit_series", lclt::ml_limit_series(t, 50)) {
        let want = 1.0 / (4.0 * std::f64::consts::LN_2 * (1.0 - std::f64::consts::LN_2).sqrt());
        let peak = series[25].limit;
        r.check(
            (peak - want).abs() <= 1e-12 && (MLShapeParams::default().peak() - want).abs() <= 1e-12,
            format!("n = 50 limit shape peak {peak:.15} vs 1/((4 ln 2) sqrt(1 - ln 2))"),
        );
    }
    r
}

/// Runs criteria 1 through 7. Criterion 8 (determinism) compares two
/// renderings of this report and is checked by the caller.
pub fn run_all() -> Report {
    let ctx = Context::new();
    Report {
        criteria: vec![
            criterion_1(&ctx),
            criterion_2(&ctx),
            criterion_3(&ctx),
            criterion_4(&ctx),
            criterion_5(&ctx),
            criterion_6(&ctx),
            criterion_7(&ctx),
        ],
    }
}

/// Criterion 8 from two independent runs.
pub fn determinism(first: &Report, second: &Report) -> CriterionResult {
    let mut r = CriterionResult::new(8, "determinism");
    r.check(
        first.render() == second.render(),
        "two consecutive runs render byte-identical reports",
    );
    r
}
