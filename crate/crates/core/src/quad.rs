//! Periodic trapezoid rules tying the integral representations of the
//! poly-Bernoulli numbers to computable numbers.
//!
//! All rules sample `theta_j = -pi + (j + 1/2) 2 pi / N`, `j = 0..N`. The
//! half-node offset keeps `theta = +-pi` off the grid, where the diagonal
//! Laplace integrand is singular and the circle integrand crosses the
//! branch cut of the logarithm.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::count::LogEstimate;
use crate::error::{Error, Result};
use crate::exact::StirlingTable;
use crate::numeric::{ln_factorial, log_mean_exp};
use crate::saddle::saddle_point;

pub const MAX_U_POLY_K: usize = 60;
pub const MAX_PARSEVAL_K: usize = 20;
pub const MAX_LAPLACE_K: usize = 300;
pub const MAX_RESIDUE_INDEX: usize = 40;

/// Node count and (for circle integrals) radius of a trapezoid rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    nodes: usize,
    radius: Option<f64>,
}

impl QuadratureSpec {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 8 || !nodes.is_multiple_of(2) {
            return Err(Error::Domain {
                what: "quadrature nodes (even, >= 8)",
                value: nodes as f64,
            });
        }
        Ok(QuadratureSpec {
            nodes,
            radius: None,
        })
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain {
                what: "quadrature radius",
                value: radius,
            });
        }
        self.radius = Some(radius);
        Ok(self)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    fn angles(&self) -> impl Iterator<Item = f64> {
        let n = self.nodes;
        (0..n).map(move |j| -PI + (j as f64 + 0.5) * 2.0 * PI / n as f64)
    }
}

/// `u_k(e^{i phi})` where `u_k(y) = sum_m m! S(k+1, m+1) y^m`.
pub fn u_poly(table: &StirlingTable, k: usize, phi: f64) -> Result<Complex64> {
    Ok(horner(
        &u_coefficients(table, k)?,
        Complex64::from_polar(1.0, phi),
    ))
}

fn u_coefficients(table: &StirlingTable, k: usize) -> Result<Vec<f64>> {
    if k > MAX_U_POLY_K {
        return Err(Error::guard("u_poly k", k, MAX_U_POLY_K));
    }
    (0..=k)
        .map(|m| {
            let c =
                table.factorial(m)?.into_biguint() * table.stirling2(k + 1, m + 1)?.into_biguint();
            match c.to_f64() {
                Some(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Domain {
                    what: "u_poly coefficient",
                    value: f64::INFINITY,
                }),
            }
        })
        .collect()
}

fn horner(coeffs: &[f64], y: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * y + c)
}

/// `(1/2 pi) int |u_k(e^{i phi})|^2 d phi`, which equals `B(k,k)`.
///
/// The integrand is a trigonometric polynomial of degree `k`, so any rule
/// with more than `2k` nodes is exact up to rounding.
pub fn parseval_b(table: &StirlingTable, k: usize, spec: &QuadratureSpec) -> Result<f64> {
    if k > MAX_PARSEVAL_K {
        return Err(Error::guard("parseval_b k", k, MAX_PARSEVAL_K));
    }
    if spec.nodes < 2 * k + 4 {
        return Err(Error::guard("parseval_b 2k+4", 2 * k + 4, spec.nodes));
    }
    let coeffs = u_coefficients(table, k)?;
    let sum: f64 = spec
        .angles()
        .map(|phi| horner(&coeffs, Complex64::from_polar(1.0, phi)).norm_sqr())
        .sum();
    Ok(sum / spec.nodes as f64)
}

fn check_laplace(k: usize, phi: f64) -> Result<()> {
    if k > MAX_LAPLACE_K {
        return Err(Error::guard("laplace k", k, MAX_LAPLACE_K));
    }
    if !(phi.abs() < PI) {
        return Err(Error::Domain {
            what: "laplace phi in (-pi, pi)",
            value: phi,
        });
    }
    Ok(())
}

/// `ln |log(1 + e^{-i phi})|^{-(2k+2)}`, using
/// `log(1 + e^{-i phi}) = ln(2 cos(phi/2)) - i phi/2` on `(-pi, pi)`.
fn laplace_log_integrand(k: usize, phi: f64) -> f64 {
    let z = Complex64::new((2.0 * (0.5 * phi).cos()).ln(), -0.5 * phi);
    -((2 * k + 2) as f64) * z.norm().ln()
}

/// `1 / |log(1 + e^{-i phi})|^{2k+2}`.
pub fn laplace_integrand_diag(k: usize, phi: f64) -> Result<f64> {
    check_laplace(k, phi)?;
    Ok(laplace_log_integrand(k, phi).exp())
}

/// `ln[(1/2 pi) int dphi / |log(1 + e^{-i phi})|^{2k+2}]`.
///
/// Always returned as a log so large `k` cannot overflow.
pub fn laplace_integral_diag(k: usize, spec: &QuadratureSpec) -> Result<LogEstimate> {
    check_laplace(k, 0.0)?;
    let logs: Vec<f64> = spec
        .angles()
        .map(|phi| laplace_log_integrand(k, phi))
        .collect();
    Ok(LogEstimate::new(log_mean_exp(&logs)))
}

/// Laplace-method value of [`laplace_integral_diag`]:
/// `(k pi (1 - ln 2))^{-1/2} (1/ln 2)^{2k+1}`.
pub fn laplace_prediction_log(k: usize) -> LogEstimate {
    let kf = k as f64;
    let l2 = std::f64::consts::LN_2;
    LogEstimate::new(-0.5 * (kf * PI * (1.0 - l2)).ln() - (2.0 * kf + 1.0) * l2.ln())
}

/// `e^z - 1` without cancellation for small `|z|`.
fn expm1_c(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        z.re.exp() * z.im.sin(),
    )
}

/// Complex log of the circle integrand (without the `n! k!` factor) at
/// `x = radius e^{i theta}`:
/// `x^{-n} / ((1 - e^{-x}) (-log(1 - e^{-x}))^{k+1})`.
fn residue_log_integrand(n: usize, k: usize, radius: f64, theta: f64) -> Result<Complex64> {
    let x = Complex64::from_polar(radius, theta);
    let one_minus = -expm1_c(-x);
    if one_minus.norm() == 0.0 {
        return Err(Error::Degenerate {
            what: "|1 - e^-x| on the circle",
            value: 0.0,
        });
    }
    let log_one_minus = one_minus.ln();
    let neg_log = -log_one_minus;
    let z = Complex64::new(-(n as f64) * radius.ln(), -(n as f64) * theta)
        - log_one_minus
        - (k as f64 + 1.0) * neg_log.ln();
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Degenerate {
            what: "circle integrand",
            value: z.re,
        });
    }
    Ok(z)
}

/// The circle integrand itself at angle `theta`, scaled by `radius^n` so it
/// stays in range.
pub fn residue_integrand_scaled(n: usize, k: usize, radius: f64, theta: f64) -> Result<Complex64> {
    let z = residue_log_integrand(n, k, radius, theta)?;
    Ok((z + n as f64 * radius.ln()).exp())
}

/// Trapezoid value of the circle integral for `B(n,k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueQuadrature {
    /// `ln` of the real part, including `n! k!`.
    pub log_value: LogEstimate,
    /// Imaginary part over real part; zero up to rounding by conjugate symmetry.
    pub imag_ratio: f64,
    pub radius: f64,
    pub nodes: usize,
}

/// `(n! k! / 2 pi i) oint dx / ((1 - e^{-x}) x^{n+1} (-log(1 - e^{-x}))^{k+1})`
/// over `|x| = radius`, radius defaulting to the saddle point `a`.
pub fn residue_integral_b(n: usize, k: usize, spec: &QuadratureSpec) -> Result<ResidueQuadrature> {
    for v in [n, k] {
        if v == 0 {
            return Err(Error::Domain {
                what: "residue_integral_b index",
                value: 0.0,
            });
        }
        if v > MAX_RESIDUE_INDEX {
            return Err(Error::guard(
                "residue_integral_b index",
                v,
                MAX_RESIDUE_INDEX,
            ));
        }
    }
    let radius = match spec.radius {
        Some(r) => r,
        None => saddle_point(n, k)?.a,
    };
    let logs = spec
        .angles()
        .map(|theta| residue_log_integrand(n, k, radius, theta))
        .collect::<Result<Vec<_>>>()?;
    let max = logs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    // Fixed index order keeps the sum bit-reproducible.
    let sum: Complex64 = logs.iter().map(|z| (z - max).exp()).sum();
    if !(sum.re > 0.0) {
        return Err(Error::Degenerate {
            what: "real part of the circle integral",
            value: sum.re,
        });
    }
    let log = max + (sum.re / spec.nodes as f64).ln() + ln_factorial(n) + ln_factorial(k);
    Ok(ResidueQuadrature {
        log_value: LogEstimate::new(log),
        imag_ratio: sum.im / sum.re,
        radius,
        nodes: spec.nodes,
    })
}

/// Doubles the node count from `start` until successive log values differ
/// by less than `tol` or `max_nodes` is reached. Returns every step.
pub fn residue_doubling_report(
    n: usize,
    k: usize,
    start: usize,
    max_nodes: usize,
    tol: f64,
) -> Result<Vec<ResidueQuadrature>> {
    let mut out: Vec<ResidueQuadrature> = Vec::new();
    let mut nodes = start;
    while nodes <= max_nodes {
        let q = residue_integral_b(n, k, &QuadratureSpec::new(nodes)?)?;
        let converged = out
            .last()
            .is_some_and(|prev| (q.log_value - prev.log_value).abs() < tol);
        out.push(q);
        if converged {
            break;
        }
        nodes *= 2;
    }
    Ok(out)
}
