//! Real roots of univariate polynomials by bracketing between critical
//! points, with a Newton polish. Degrees here are tiny (fiber gradients go
//! up to five), so robustness beats cleverness; in particular the recursion
//! terminates on any input, degenerate coefficients included.

use crate::error::{CdeError, Result};

/// Evaluate a polynomial given coefficients in ascending powers.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of the derivative, ascending powers.
pub fn derive_poly(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// All real roots (ascending, duplicates collapsed). Coefficients are in
/// ascending powers; trailing near-zero leading coefficients are trimmed
/// relative to the largest one.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(CdeError::Invalid("root-finding on the zero polynomial".into()));
    }
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().abs() <= 1e-14 * scale {
        c.pop();
    }
    let n = c.len() - 1;
    let mut roots = match n {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                Vec::new()
            } else {
                // stable form: avoid cancellation in the small root
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                if q == 0.0 {
                    vec![0.0, 0.0]
                } else {
                    vec![q / a, cc / q]
                }
            }
        }
        _ => {
            // p is monotone between consecutive roots of p', so bisection
            // over those intervals (capped by the Cauchy bound) finds every
            // simple crossing. Roots of even multiplicity never change sign
            // but sit on critical points, so they are tested directly.
            let bound = 1.0 + c[..n].iter().map(|k| (k / c[n]).abs()).fold(0.0, f64::max);
            let crit: Vec<f64> = real_roots(&derive_poly(&c))
                .unwrap_or_default()
                .into_iter()
                .filter(|t| t.abs() < bound)
                .collect();
            let local = |t: f64| -> f64 {
                c.iter()
                    .enumerate()
                    .map(|(i, ci)| ci.abs() * t.abs().powi(i as i32))
                    .sum()
            };
            let mut found = Vec::new();
            for &t in &crit {
                if eval_poly(&c, t).abs() <= 1e-11 * local(t) {
                    found.push(t);
                }
            }
            let mut edges = vec![-bound];
            edges.extend(crit.iter().copied());
            edges.push(bound);
            for pair in edges.windows(2) {
                let (mut lo, mut hi) = (pair[0], pair[1]);
                let (flo, fhi) = (eval_poly(&c, lo), eval_poly(&c, hi));
                if flo == 0.0 || fhi == 0.0 || flo * fhi > 0.0 {
                    continue; // exact endpoint roots were collected above
                }
                let falling = flo > 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (eval_poly(&c, mid) > 0.0) == falling {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                found.push(0.5 * (lo + hi));
            }
            found
        }
    };
    // polish on the original polynomial
    let d = derive_poly(&c);
    for r in roots.iter_mut() {
        for _ in 0..50 {
            let f = eval_poly(&c, *r);
            let fp = eval_poly(&d, *r);
            if fp.abs() < 1e-300 {
                break;
            }
            let step = f / fp;
            *r -= step;
            if step.abs() <= 1e-15 * (1.0 + r.abs()) {
                break;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-8 * (1.0 + a.abs()));
    Ok(roots)
}
