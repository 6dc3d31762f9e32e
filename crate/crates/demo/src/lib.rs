//! Browser bindings. Each export returns a JSON string for the page script
//! to plot; the plain functions underneath are testable natively.

use polybern::lclt::{self, Sequence};
use polybern::saddle;
use polybern::{log_of_count, StirlingTable};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest `n` offered for the limit-law curves; keeps a page update well
/// under a second.
pub const MAX_CURVE_N: usize = 120;
/// Largest index reached along a ray.
pub const MAX_RAY_INDEX: usize = 160;

fn points(pts: &[lclt::CurvePoint]) -> Value {
    pts.iter().map(|p| json!([p.k, p.exact, p.limit])).collect()
}

fn report(r: &lclt::DiscrepancyReport) -> Value {
    json!({ "n": r.n, "sup": r.sup, "scaled_sup": r.scaled_sup(), "argmax": r.argmax })
}

/// `[k, exact, limit]` triples for the Gaussian limit of `B` (`which = "B"`)
/// or `D` (`which = "D"`) at row `n`, plus the sup discrepancy.
pub fn lclt_curve_json(which: &str, n: usize) -> Result<String, String> {
    let seq = match which {
        "B" => Sequence::PolyBernoulli,
        "D" => Sequence::MlDegree,
        other => return Err(format!("unknown sequence {other:?}")),
    };
    if n == 0 || n > MAX_CURVE_N {
        return Err(format!("n must be in 1..={MAX_CURVE_N}"));
    }
    let end = lclt::GaussianParams::new(seq).window_end(n);
    let t = StirlingTable::new(end.max(n) + 1);
    let series = lclt::lclt_series(&t, n, seq).map_err(|e| e.to_string())?;
    let disc = lclt::lclt_discrepancy(&t, n, seq).map_err(|e| e.to_string())?;
    Ok(json!({ "points": points(&series), "discrepancy": report(&disc) }).to_string())
}

/// Scaled ML-degrees of row `n` against the limit shape.
pub fn ml_shape_json(n: usize, window: f64) -> Result<String, String> {
    if n == 0 || n > MAX_CURVE_N {
        return Err(format!("n must be in 1..={MAX_CURVE_N}"));
    }
    let t = StirlingTable::new(n + 1);
    let series = lclt::ml_limit_series(&t, n).map_err(|e| e.to_string())?;
    let disc = lclt::ml_limit_discrepancy(&t, n, window).map_err(|e| e.to_string())?;
    Ok(json!({ "points": points(&series), "discrepancy": report(&disc) }).to_string())
}

/// Relative error of the `B` and ML estimates at `(p t, q t)` for
/// `t = 1, 2, ...` while both indices stay within [`MAX_RAY_INDEX`].
pub fn ray_errors_json(p: usize, q: usize) -> Result<String, String> {
    if p == 0 || q == 0 {
        return Err("direction components must be positive".into());
    }
    let steps = MAX_RAY_INDEX / p.max(q);
    if steps == 0 {
        return Err(format!(
            "direction components must be at most {MAX_RAY_INDEX}"
        ));
    }
    let t = StirlingTable::new(steps * p.max(q) + 1);
    let rows = (1..=steps)
        .map(|s| {
            let (n, k) = (p * s, q * s);
            let b = log_of_count(&t.poly_bernoulli(n, k)?)?
                .relative_error_of(saddle::bivar_asym_log(n, k)?);
            let d =
                log_of_count(&t.ml_degree(n, k)?)?.relative_error_of(saddle::ml_asym_log(n, k)?);
            Ok(json!([s, n, k, b, d]))
        })
        .collect::<polybern::Result<Vec<Value>>>()
        .map_err(|e| e.to_string())?;
    let in_band = saddle::saddle_point(p, q)
        .map_err(|e| e.to_string())?
        .in_compact_band();
    Ok(json!({ "rows": rows, "in_band": in_band }).to_string())
}

#[wasm_bindgen]
pub fn lclt_curve(which: &str, n: usize) -> Result<String, JsError> {
    lclt_curve_json(which, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ml_shape(n: usize, window: f64) -> Result<String, JsError> {
    ml_shape_json(n, window).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ray_errors(p: usize, q: usize) -> Result<String, JsError> {
    ray_errors_json(p, q).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn lclt_curve_shape() {
        let v = parse(&lclt_curve_json("B", 20).unwrap());
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts[0][0], 0);
        assert_eq!(pts[0].as_array().unwrap().len(), 3);
        assert!(v["discrepancy"]["sup"].as_f64().unwrap() < 0.05);
        assert!(lclt_curve_json("X", 20).is_err());
        assert!(lclt_curve_json("D", MAX_CURVE_N + 1).is_err());
    }

    #[test]
    fn ml_shape_peak_is_central() {
        let v = parse(&ml_shape_json(40, 2.0).unwrap());
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 41);
        let peak = pts[20][2].as_f64().unwrap();
        assert!(
            (peak - 1.0 / (4.0 * std::f64::consts::LN_2 * (1.0 - std::f64::consts::LN_2).sqrt()))
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn ray_errors_shrink() {
        let v = parse(&ray_errors_json(2, 3).unwrap());
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), MAX_RAY_INDEX / 3);
        let b: Vec<f64> = rows.iter().map(|r| r[3].as_f64().unwrap().abs()).collect();
        assert!(b.last().unwrap() < &b[0]);
        assert!(ray_errors_json(0, 1).is_err());
        assert!(ray_errors_json(1, MAX_RAY_INDEX + 1).is_err());
    }
}
