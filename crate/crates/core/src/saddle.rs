//! Saddle points on the singular variety `e^{-x} + e^{-y} = 1` and the
//! closed-form asymptotic estimates built on them. Every estimate is a
//! natural log; the quantities themselves overflow `f64` around `k = 80`.

use std::f64::consts::{LN_2, PI};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::count::LogEstimate;
use crate::error::{Error, Result};
use crate::numeric::{ln_factorial, log1mexp};

/// Directions `n/k` outside this band are extrapolations of a result that
/// is uniform only on compact sets.
pub const COMPACT_BAND: (f64, f64) = (0.1, 10.0);

const MAX_DOUBLINGS: usize = 200;
const MAX_HALVINGS: usize = 1100;
const BISECTION_STEPS: usize = 120;

/// The direction function `f(t) = t / ((1 - e^t) ln(1 - e^{-t}))`.
///
/// Evaluated as `t / ((1 - u) g)` with `u = e^{-t}` and
/// `g = -ln(1 - u) / u`, which tends to 1 as `u -> 0`, so the form stays
/// finite for every finite `t > 0`.
pub fn f_dir(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "f_dir",
            value: t,
        });
    }
    let u = (-t).exp();
    let one_minus_u = -(-t).exp_m1();
    let g = if u > 0.0 { -log1mexp(t) / u } else { 1.0 };
    let f = t / (one_minus_u * g);
    if !f.is_finite() {
        return Err(Error::Domain {
            what: "f_dir",
            value: t,
        });
    }
    Ok(f)
}

/// Inverse of [`f_dir`] by bracketed bisection.
pub fn f_inverse(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            what: "f_inverse",
            value: r,
        });
    }
    let mut lo = 2f64.powi(-40);
    let mut hi = 1.0;

    let mut doublings = 0;
    while f_dir(hi)? < r {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Bracket(r));
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
    }
    // f(t) ~ -1/ln t near zero, so tiny ratios need a much smaller lower end.
    let mut halvings = 0;
    while f_dir(lo)? > r {
        if halvings == MAX_HALVINGS || lo / 2.0 == 0.0 {
            return Err(Error::Bracket(r));
        }
        hi = lo;
        lo /= 2.0;
        halvings += 1;
    }

    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_dir(mid)? < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Return whichever end is closer in value.
    let (flo, fhi) = (f_dir(lo)?, f_dir(hi)?);
    Ok(if (r - flo).abs() <= (fhi - r).abs() {
        lo
    } else {
        hi
    })
}

/// Minimal critical point `(a, b) = (f^{-1}(n/k), f^{-1}(k/n))` for the
/// direction `n/k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    pub a: f64,
    pub b: f64,
    pub ratio: f64,
}

impl SaddlePoint {
    /// `e^{-a} + e^{-b} - 1`; zero on the singular variety.
    pub fn variety_residual(&self) -> f64 {
        (-self.a).exp() + (-self.b).exp() - 1.0
    }

    pub fn in_compact_band(&self) -> bool {
        (COMPACT_BAND.0..=COMPACT_BAND.1).contains(&self.ratio)
    }

    /// `a e^{-a} [b e^{-b} + a e^{-a} - ab]`, the curvature term shared by
    /// every estimate. Must be positive.
    fn curvature(&self) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        let bracket = b * (-b).exp() + a * (-a).exp() - a * b;
        if !(bracket > 0.0) {
            return Err(Error::Degenerate {
                what: "b e^-b + a e^-a - ab",
                value: bracket,
            });
        }
        Ok(a * (-a).exp() * bracket)
    }
}

/// Relative residual of the critical equation `k a e^{-a} = n b e^{-b}`.
pub fn critical_residual(sp: &SaddlePoint, n: usize, k: usize) -> f64 {
    let lhs = k as f64 * sp.a * (-sp.a).exp();
    let rhs = n as f64 * sp.b * (-sp.b).exp();
    (lhs - rhs) / lhs.abs().max(rhs.abs())
}

pub fn saddle_point(n: usize, k: usize) -> Result<SaddlePoint> {
    if n == 0 || k == 0 {
        return Err(Error::Domain {
            what: "saddle_point",
            value: n.min(k) as f64,
        });
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(SaddlePoint {
        a: f_inverse(nf / kf)?,
        b: f_inverse(kf / nf)?,
        ratio: nf / kf,
    })
}

fn saddle_checked(n: usize, k: usize, what: &str) -> Result<SaddlePoint> {
    let sp = saddle_point(n, k)?;
    if !sp.in_compact_band() {
        warn!(
            "{what}({n}, {k}): direction {} outside {:?}",
            sp.ratio, COMPACT_BAND
        );
    }
    Ok(sp)
}

/// Leading-order estimate of `B(n,k)`:
/// `a^{-n} b^{-k} k^{-1/2} n! k! / sqrt(2 pi a e^{-a} [b e^{-b} + a e^{-a} - ab])`.
pub fn bivar_asym_log(n: usize, k: usize) -> Result<LogEstimate> {
    let sp = saddle_checked(n, k, "bivar_asym_log")?;
    bivar_at(&sp, n, k)
}

fn bivar_at(sp: &SaddlePoint, n: usize, k: usize) -> Result<LogEstimate> {
    let (nf, kf) = (n as f64, k as f64);
    let log = -nf * sp.a.ln() - kf * sp.b.ln() - 0.5 * kf.ln() + ln_factorial(n) + ln_factorial(k)
        - 0.5 * (2.0 * PI * sp.curvature()?).ln();
    Ok(LogEstimate::new(log))
}

/// Which diagonal estimate to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    /// `(k!)^2 (k pi (1 - ln 2))^{-1/2} (1/ln 2)^{2k+1}`.
    First,
    /// `(k!)^2 ((k+1) pi (1 - ln 2))^{-1/2} (1/ln 2)^{2k+1} (1 + C/k)`.
    Second,
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::Domain {
                what: "order",
                value: f64::from(v),
            }),
        }
    }
}

/// The `1/k` coefficient of the diagonal expansion,
/// `(2 ln^3 2 + 3 ln^2 2 - 12 ln 2 + 6) / (16 (1 - ln 2)^2)`.
pub fn second_order_constant() -> f64 {
    let l = LN_2;
    (2.0 * l.powi(3) + 3.0 * l * l - 12.0 * l + 6.0) / (16.0 * (1.0 - l).powi(2))
}

fn diag_common(k: usize) -> f64 {
    2.0 * ln_factorial(k) - (2 * k + 1) as f64 * LN_2.ln()
}

pub fn diag_asym_log(k: usize, order: Order) -> Result<LogEstimate> {
    if k == 0 {
        return Err(Error::Domain {
            what: "diag_asym_log k",
            value: 0.0,
        });
    }
    let kf = k as f64;
    let log = match order {
        Order::First => diag_common(k) - 0.5 * (kf * PI * (1.0 - LN_2)).ln(),
        Order::Second => {
            diag_common(k) - 0.5 * ((kf + 1.0) * PI * (1.0 - LN_2)).ln()
                + (second_order_constant() / kf).ln_1p()
        }
    };
    Ok(LogEstimate::new(log))
}

/// Diagonal estimate of `D(k,k)`: `(k!)^2 / (4 (ln 2)^{2k+1}) (k pi (1 - ln 2))^{-1/2}`.
pub fn d_diag_asym_log(k: usize) -> Result<LogEstimate> {
    if k == 0 {
        return Err(Error::Domain {
            what: "d_diag_asym_log k",
            value: 0.0,
        });
    }
    let kf = k as f64;
    let log = 2.0 * ln_factorial(k)
        - 4f64.ln()
        - (2 * k + 1) as f64 * LN_2.ln()
        - 0.5 * (kf * PI * (1.0 - LN_2)).ln();
    Ok(LogEstimate::new(log))
}

/// Estimate of `ML(n,k) = D(n,k)`: the `B` estimate times `e^{-a-b}`.
pub fn ml_asym_log(n: usize, k: usize) -> Result<LogEstimate> {
    let sp = saddle_checked(n, k, "ml_asym_log")?;
    let b = bivar_at(&sp, n, k)?;
    Ok(LogEstimate::new(b.log_value - sp.a - sp.b))
}

/// Estimate of `[B^{r-1} A^s]`:
/// `x^{-r} y^{-s} (2 pi s)^{-1/2} r! s! e^{-y} / sqrt(x e^{-x} [y e^{-y} + x e^{-x} - xy])`
/// with `(x, y)` the saddle point of direction `r/s`.
pub fn excedance_asym_log(r: usize, s: usize) -> Result<LogEstimate> {
    let sp = saddle_checked(r, s, "excedance_asym_log")?;
    let (x, y) = (sp.a, sp.b);
    let (rf, sf) = (r as f64, s as f64);
    let log =
        -rf * x.ln() - sf * y.ln() - 0.5 * (2.0 * PI * sf).ln() + ln_factorial(r) + ln_factorial(s)
            - y
            - 0.5 * sp.curvature()?.ln();
    Ok(LogEstimate::new(log))
}

/// The two exponential generating functions `G / H` sharing the
/// denominator `H(x, y) = e^{-x} + e^{-y} - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GfDescriptor {
    /// `G = 1`: poly-Bernoulli numbers.
    PolyBernoulli,
    /// `G = e^{-x-y}`: ML-degrees.
    MlDegree,
}

/// `H` and its partial derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenominatorJet {
    pub h: f64,
    pub hx: f64,
    pub hy: f64,
    pub hxx: f64,
    pub hyy: f64,
    pub hxy: f64,
}

impl GfDescriptor {
    pub fn numerator(self, x: f64, y: f64) -> f64 {
        match self {
            GfDescriptor::PolyBernoulli => 1.0,
            GfDescriptor::MlDegree => (-x - y).exp(),
        }
    }

    pub fn denominator(x: f64, y: f64) -> DenominatorJet {
        let (ex, ey) = ((-x).exp(), (-y).exp());
        DenominatorJet {
            h: ex + ey - 1.0,
            hx: -ex,
            hy: -ey,
            hxx: ex,
            hyy: ey,
            hxy: 0.0,
        }
    }
}

/// The Hessian-type polynomial `Q` of the smooth-point coefficient formula.
pub fn q_polynomial(x: f64, y: f64, j: &DenominatorJet) -> f64 {
    -y * y * j.hy * j.hy * x * j.hx
        - y * j.hy * x * x * j.hx * j.hx
        - x * x * y * y * (j.hy * j.hy * j.hxx + j.hx * j.hx * j.hyy - 2.0 * j.hx * j.hy * j.hxy)
}

/// Smooth-point formula for the coefficient of `x^n y^k / (n! k!)`:
/// `n! k! G (2 pi)^{-1/2} x^{-n} y^{-k} sqrt(-y H_y / (k Q))` at the saddle point.
pub fn acsv_general_log(g: GfDescriptor, n: usize, k: usize) -> Result<LogEstimate> {
    let sp = saddle_checked(n, k, "acsv_general_log")?;
    let (x, y) = (sp.a, sp.b);
    let jet = GfDescriptor::denominator(x, y);
    let q = q_polynomial(x, y, &jet);
    if !(q > 0.0) {
        return Err(Error::Degenerate {
            what: "Q",
            value: q,
        });
    }
    let gv = g.numerator(x, y);
    if !(gv > 0.0) {
        return Err(Error::Degenerate {
            what: "G",
            value: gv,
        });
    }
    let (nf, kf) = (n as f64, k as f64);
    let log = gv.ln() - 0.5 * (2.0 * PI).ln() - nf * x.ln() - kf * y.ln()
        + 0.5 * (-y * jet.hy / (kf * q)).ln()
        + ln_factorial(n)
        + ln_factorial(k);
    Ok(LogEstimate::new(log))
}
