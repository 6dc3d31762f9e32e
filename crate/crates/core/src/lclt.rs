//! Local central limit theorems: for fixed `n`, the scaled coefficients
//! `rho^n B(n,k) / (n! k!)` and `rho^n D(n,k) / (n! k!)` approach a Gaussian
//! in `k`, and `(2 ln 2)^n ML(n-k, k) / n!` approaches a fixed bell shape
//! around `k = n/2`.

use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::count::{log_of_count, Count};
use crate::error::{Error, Result};
use crate::exact::StirlingTable;
use crate::numeric::ln_factorial;

pub const MAX_LCLT_N: usize = 200;
/// Large enough for the window of `n = 200`, which ends at `k = 413`.
pub const MAX_LCLT_K: usize = 420;
pub const MAX_ML_LIMIT_N: usize = 120;
pub const MAX_ML_WINDOW: f64 = 5.0;

/// Window half-width in standard deviations.
const WINDOW_SIGMAS: f64 = 12.0;
const TAIL_RATIO: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sequence {
    /// `B(n,k)`, coefficients of `1 / (e^{-x} + e^{-y} - 1)`.
    PolyBernoulli,
    /// `D(n,k) = ML(n,k)`, coefficients of `e^{-x-y} / (e^{-x} + e^{-y} - 1)`.
    MlDegree,
}

impl Sequence {
    fn count(self, table: &StirlingTable, n: usize, k: usize) -> Result<Count> {
        match self {
            Sequence::PolyBernoulli => table.poly_bernoulli(n, k),
            Sequence::MlDegree => table.ml_degree(n, k),
        }
    }
}

/// Parameters of the limiting Gaussian `nu_n(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    /// `1 - ln(e - 1)`.
    pub rho: f64,
    /// Total mass `C = e / ((1 - ln(e-1)) (e-1))`.
    pub amplitude: f64,
    /// Mean per unit `n`, `omega = 1 / ((1 - ln(e-1)) (e-1))`.
    pub mean_rate: f64,
    /// Variance per unit `n`, `sigma = ln(e-1) / ((1 - ln(e-1))^2 (e-1)^2)`.
    pub variance_rate: f64,
    /// 1 for `B`, `e^{-1} (1 - e^{-1})` for `D`.
    pub prefactor: f64,
}

impl GaussianParams {
    pub fn new(seq: Sequence) -> Self {
        let l = (E - 1.0).ln();
        let rho = 1.0 - l;
        let prefactor = match seq {
            Sequence::PolyBernoulli => 1.0,
            Sequence::MlDegree => (1.0 - 1.0 / E) / E,
        };
        GaussianParams {
            rho,
            amplitude: E / (rho * (E - 1.0)),
            mean_rate: 1.0 / (rho * (E - 1.0)),
            variance_rate: l / (rho * rho * (E - 1.0) * (E - 1.0)),
            prefactor,
        }
    }

    /// Last index of the comparison window, `ceil(n omega + 12 sqrt(n sigma))`.
    pub fn window_end(&self, n: usize) -> usize {
        let nf = n as f64;
        (nf * self.mean_rate + WINDOW_SIGMAS * (nf * self.variance_rate).sqrt()).ceil() as usize
    }
}

/// Constants of the ML-degree limit shape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MLShapeParams {
    /// `1 / (4 ln 2)`.
    pub c2: f64,
    /// `(1 - ln 2) / 4`.
    pub sigma2: f64,
}

impl Default for MLShapeParams {
    fn default() -> Self {
        MLShapeParams {
            c2: 1.0 / (4.0 * LN_2),
            sigma2: (1.0 - LN_2) / 4.0,
        }
    }
}

impl MLShapeParams {
    /// Height of the shape at `k = n/2`: the ratio of the two Gaussian
    /// peaks, `c2 / (2 sqrt(sigma2))`.
    pub fn peak(&self) -> f64 {
        self.c2 / (2.0 * self.sigma2.sqrt())
    }
}

/// One sup-norm comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub sup: f64,
    pub argmax: usize,
}

impl DiscrepancyReport {
    pub fn scaled_sup(&self) -> f64 {
        (self.n as f64).sqrt() * self.sup
    }
}

/// `nu_n(k) = C / sqrt(2 pi n sigma) exp(-(k - n omega)^2 / (2 sigma n))`.
pub fn nu_density(n: usize, k: usize, p: &GaussianParams) -> f64 {
    let nf = n as f64;
    let d = k as f64 - nf * p.mean_rate;
    p.amplitude / (2.0 * PI * nf * p.variance_rate).sqrt()
        * (-d * d / (2.0 * p.variance_rate * nf)).exp()
}

fn check_lclt(n: usize, k: usize) -> Result<()> {
    if n > MAX_LCLT_N {
        return Err(Error::guard("lclt n", n, MAX_LCLT_N));
    }
    if k > MAX_LCLT_K {
        return Err(Error::guard("lclt k", k, MAX_LCLT_K));
    }
    Ok(())
}

/// `rho^n c(n,k) / (n! k!)` for `c = B` or `D`, in ordinary scale.
pub fn scaled_coefficient(table: &StirlingTable, n: usize, k: usize, seq: Sequence) -> Result<f64> {
    check_lclt(n, k)?;
    let c = seq.count(table, n, k)?;
    if c.is_zero() {
        return Ok(0.0);
    }
    let rho = GaussianParams::new(seq).rho;
    let log = n as f64 * rho.ln() + log_of_count(&c)?.log_value - ln_factorial(n) - ln_factorial(k);
    Ok(log.exp())
}

/// A row of figure data: index, exact scaled value, limit value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub k: usize,
    pub exact: f64,
    pub limit: f64,
}

/// Scaled coefficients against `prefactor * nu_n(k)` over the whole window.
pub fn lclt_series(table: &StirlingTable, n: usize, seq: Sequence) -> Result<Vec<CurvePoint>> {
    if n == 0 {
        return Err(Error::Domain {
            what: "lclt n",
            value: 0.0,
        });
    }
    let p = GaussianParams::new(seq);
    let end = p.window_end(n);
    check_lclt(n, end)?;
    (0..=end)
        .map(|k| {
            Ok(CurvePoint {
                k,
                exact: scaled_coefficient(table, n, k, seq)?,
                limit: p.prefactor * nu_density(n, k, &p),
            })
        })
        .collect()
}

fn sup_of(n: usize, points: &[CurvePoint]) -> DiscrepancyReport {
    let mut report = DiscrepancyReport {
        n,
        sup: 0.0,
        argmax: 0,
    };
    for pt in points {
        let d = (pt.exact - pt.limit).abs();
        if d > report.sup {
            report.sup = d;
            report.argmax = pt.k;
        }
    }
    report
}

/// `sup_k |rho^n c_n(k) - prefactor nu_n(k)|` over `0 <= k <= window_end(n)`.
///
/// Fails with [`Error::Truncation`] if the last windowed term is not below
/// `1e-8` of the sup, since the neglected tail would then matter.
pub fn lclt_discrepancy(
    table: &StirlingTable,
    n: usize,
    seq: Sequence,
) -> Result<DiscrepancyReport> {
    let points = lclt_series(table, n, seq)?;
    let report = sup_of(n, &points);
    let last = points.last().expect("window is nonempty");
    let tail = last.exact.max(last.limit);
    if tail >= TAIL_RATIO * report.sup {
        return Err(Error::Truncation {
            n,
            last: tail,
            sup: report.sup,
        });
    }
    Ok(report)
}

/// `2^{-2(k - n/2)^2 / (n (1 - ln 2))} / ((4 ln 2) sqrt(1 - ln 2))`.
pub fn ml_limit_shape(n: usize, k: usize) -> f64 {
    let d = k as f64 - n as f64 / 2.0;
    let peak = 1.0 / (4.0 * LN_2 * (1.0 - LN_2).sqrt());
    peak * 2f64.powf(-2.0 * d * d / (n as f64 * (1.0 - LN_2)))
}

/// `(2 ln 2)^n ML(n-k, k) / n!`.
pub fn ml_scaled(table: &StirlingTable, n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(Error::Domain {
            what: "ml_scaled k > n",
            value: k as f64,
        });
    }
    let c = table.ml_degree(n - k, k)?;
    if c.is_zero() {
        return Ok(0.0);
    }
    Ok((n as f64 * (2.0 * LN_2).ln() + log_of_count(&c)?.log_value - ln_factorial(n)).exp())
}

fn check_ml_limit(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain {
            what: "ml_limit n",
            value: n as f64,
        });
    }
    if n > MAX_ML_LIMIT_N {
        return Err(Error::guard("ml_limit n", n, MAX_ML_LIMIT_N));
    }
    Ok(())
}

/// Exact scaled ML-degrees against the limit shape for every `0 <= k <= n`.
pub fn ml_limit_series(table: &StirlingTable, n: usize) -> Result<Vec<CurvePoint>> {
    check_ml_limit(n)?;
    (0..=n)
        .map(|k| {
            Ok(CurvePoint {
                k,
                exact: ml_scaled(table, n, k)?,
                limit: ml_limit_shape(n, k),
            })
        })
        .collect()
}

/// Sup of the difference over `|k - n/2| <= window sqrt(n)`.
pub fn ml_limit_discrepancy(
    table: &StirlingTable,
    n: usize,
    window: f64,
) -> Result<DiscrepancyReport> {
    check_ml_limit(n)?;
    if !(window > 0.0 && window <= MAX_ML_WINDOW) {
        return Err(Error::Domain {
            what: "ml_limit window K in (0, 5]",
            value: window,
        });
    }
    let half = n as f64 / 2.0;
    let reach = window * (n as f64).sqrt();
    let points = (0..=n)
        .filter(|&k| (k as f64 - half).abs() <= reach)
        .map(|k| {
            Ok(CurvePoint {
                k,
                exact: ml_scaled(table, n, k)?,
                limit: ml_limit_shape(n, k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sup_of(n, &points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> StirlingTable {
        StirlingTable::new(210)
    }

    #[test]
    fn gaussian_constants() {
        let p = GaussianParams::new(Sequence::PolyBernoulli);
        assert!((p.rho - (1.0 - (E - 1.0).ln())).abs() < 1e-12);
        assert!((p.amplitude - E / ((1.0 - (E - 1.0).ln()) * (E - 1.0))).abs() < 1e-12);
        assert!((p.mean_rate - p.amplitude / E).abs() < 1e-12);
        assert!((p.variance_rate - p.mean_rate.powi(2) * (E - 1.0).ln()).abs() < 1e-12);
        assert!((p.rho - 0.4586751).abs() < 1e-7);
        assert_eq!(format!("{:.3}", p.amplitude), "3.449");
        let d = GaussianParams::new(Sequence::MlDegree);
        assert!((d.prefactor - (-1f64).exp() * (1.0 - (-1f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn ml_shape_constants() {
        let m = MLShapeParams::default();
        let want = 1.0 / (4.0 * LN_2 * (1.0 - LN_2).sqrt());
        assert!((m.peak() - want).abs() < 1e-12);
        assert!((ml_limit_shape(50, 25) - want).abs() < 1e-12);
        assert!((want - 0.6512).abs() < 1e-4);
    }

    #[test]
    fn density_examples() {
        let p = GaussianParams::new(Sequence::PolyBernoulli);
        let k = (40.0 * p.mean_rate).round() as usize;
        assert_eq!(k, 51);
        let peak = p.amplitude / (2.0 * PI * 40.0 * p.variance_rate).sqrt();
        let v = nu_density(40, 51, &p);
        assert!((v - 0.2333).abs() < 1e-3, "{v}");
        assert!(v <= peak && v > 0.99 * peak);
        // Symmetry about n omega, tested with a p whose mean is an integer.
        let q = GaussianParams {
            mean_rate: 1.25,
            ..p
        };
        for d in 1..10 {
            assert!((nu_density(40, 50 + d, &q) - nu_density(40, 50 - d, &q)).abs() < 1e-16);
        }
        let mass: f64 = (0..400).map(|k| nu_density(100, k, &p)).sum();
        assert!((mass / p.amplitude - 1.0).abs() < 0.01);
    }

    #[test]
    fn scaled_coefficient_examples() {
        let t = table();
        let rho = GaussianParams::new(Sequence::PolyBernoulli).rho;
        assert!(
            (scaled_coefficient(&t, 1, 1, Sequence::PolyBernoulli).unwrap() - 2.0 * rho).abs()
                < 1e-14
        );
        assert!((scaled_coefficient(&t, 1, 1, Sequence::MlDegree).unwrap() - rho).abs() < 1e-14);
        for n in 1..10 {
            assert_eq!(
                scaled_coefficient(&t, n, 0, Sequence::MlDegree).unwrap(),
                0.0
            );
        }
        assert!(scaled_coefficient(&t, 201, 1, Sequence::MlDegree)
            .unwrap_err()
            .is_guard());
        assert!(scaled_coefficient(&t, 1, 421, Sequence::MlDegree)
            .unwrap_err()
            .is_guard());
    }

    #[test]
    fn discrepancy_examples() {
        let t = table();
        let d20 = lclt_discrepancy(&t, 20, Sequence::MlDegree).unwrap();
        let d40 = lclt_discrepancy(&t, 40, Sequence::MlDegree).unwrap();
        assert!(d40.sup < d20.sup);

        let p = GaussianParams::new(Sequence::PolyBernoulli);
        let b40 = lclt_discrepancy(&t, 40, Sequence::PolyBernoulli).unwrap();
        let spread = 3.0 * (40.0 * p.variance_rate).sqrt();
        let centre = 40.0 * p.mean_rate;
        assert!((b40.argmax as f64 - centre).abs() <= spread);

        let b10 = lclt_discrepancy(&t, 10, Sequence::PolyBernoulli).unwrap();
        assert!(b40.scaled_sup() < b10.scaled_sup());
    }

    #[test]
    fn largest_window_fits_the_bound() {
        let p = GaussianParams::new(Sequence::PolyBernoulli);
        assert_eq!(p.window_end(MAX_LCLT_N), 413);
        assert!(p.window_end(MAX_LCLT_N) <= MAX_LCLT_K);
    }

    #[test]
    fn ml_limit_examples() {
        let t = table();
        let d30 = ml_limit_discrepancy(&t, 30, 2.0).unwrap();
        let d60 = ml_limit_discrepancy(&t, 60, 2.0).unwrap();
        assert!(d60.sup < d30.sup);
        for k in 0..=40 {
            assert_eq!(ml_limit_shape(40, k), ml_limit_shape(40, 40 - k));
            assert_eq!(
                ml_scaled(&t, 40, k).unwrap(),
                ml_scaled(&t, 40, 40 - k).unwrap()
            );
        }
        assert!(ml_limit_discrepancy(&t, 1, 2.0).is_err());
        assert!(ml_limit_discrepancy(&t, 121, 2.0).unwrap_err().is_guard());
        assert!(ml_limit_discrepancy(&t, 30, 0.0).is_err());
        assert!(ml_limit_discrepancy(&t, 30, 5.5).is_err());
    }

    #[test]
    fn ml_series_covers_every_index() {
        let s = ml_limit_series(&table(), 50).unwrap();
        assert_eq!(s.len(), 51);
        assert_eq!(s[0].exact, 0.0);
        let mid = s[25];
        assert!((mid.limit - MLShapeParams::default().peak()).abs() < 1e-12);
        assert!((mid.exact - mid.limit).abs() < 0.02);
    }
}
