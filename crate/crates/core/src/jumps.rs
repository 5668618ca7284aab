//! Fast dynamics off the constraint set: descent to a fiber minimum and
//! finite jumps from the singular locus.
//!
//! A trajectory that reaches the singular locus sits at a degenerate
//! critical point of its fiber potential. Whether it can continue depends on
//! the fiber having another minimum downhill; `resolve_jump` decides that by
//! relaxing a seed nudged along the degenerate Hessian direction, and
//! `search_finite_jump` enumerates every candidate landing on the fiber with
//! the reasons for admitting or rejecting it.

use serde::Serialize;

use crate::desing::{potential_poly, CdeSpec};
use crate::error::{CdeError, Result};
use crate::family::{sym_eigenpairs, Attracting, CatastropheFamily, FamilyTag, TotalPoint};
use crate::poly::MultiPoly;
use crate::roots::real_roots;
use crate::strata::{sample_stratum, StratumLabel};
use crate::tol::Tolerances;

/// How far the fast variables may wander before descent counts as divergent.
const DESCENT_BOX: f64 = 10.0;
const MAX_DESCENT_ITERS: usize = 50_000;
/// Longest accepted displacement per descent step. A decrease-only line
/// search would happily leap across a basin into a deeper well (the
/// potentials here are odd-degree and unbounded below); the true fast flow
/// never crosses a critical point, so the steps must stay local.
const MAX_STEP_LEN: f64 = 0.25;

#[derive(Debug, Clone, Serialize)]
pub enum JumpOutcome {
    /// Relaxed to a strict (up to tolerance) minimum of the fiber.
    Landed(TotalPoint),
    /// Converged to a critical point that is not a minimum.
    OnSingular(TotalPoint),
    /// Left the working box; the fiber has no minimum downhill.
    Diverged,
}

#[derive(Debug, Serialize)]
pub struct DescentResult {
    pub outcome: JumpOutcome,
    pub iterations: usize,
    /// Potential after every accepted step; nonincreasing by construction.
    pub potentials: Vec<f64>,
}

/// Gradient descent in the fast variables with a doubling/halving step
/// search, then a Newton polish once the Hessian is positive definite.
/// Monotone in the potential at every accepted step.
pub fn fast_descent(spec: &CdeSpec, from: &TotalPoint, tols: &Tolerances) -> Result<DescentResult> {
    from.check_dims(&spec.family)?;
    let n = spec.family.fast_dim();
    let mut x = from.fast.clone();
    let at = |x: &[f64]| TotalPoint::new(x.to_vec(), from.slow.clone());
    let mut v_here = spec.potential(&at(&x))?;
    let mut potentials = vec![v_here];
    let mut eta = 1.0_f64;
    let mut iters = 0usize;

    loop {
        iters += 1;
        if iters > MAX_DESCENT_ITERS {
            return Ok(DescentResult {
                outcome: JumpOutcome::Diverged,
                iterations: iters,
                potentials,
            });
        }
        if x.iter().any(|xi| xi.abs() > DESCENT_BOX) {
            return Ok(DescentResult {
                outcome: JumpOutcome::Diverged,
                iterations: iters,
                potentials,
            });
        }
        let g = spec.grad(&at(&x))?;
        let gnorm = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let h = spec.hessian(&at(&x))?;
        let pairs = sym_eigenpairs(&h);
        let min_eig = pairs[0].0;

        // Newton polish: quadratic convergence once the basin is reached
        if gnorm < 1e-6 && min_eig > tols.psd {
            let mut xp = x.clone();
            for _ in 0..20 {
                let gp = spec.grad(&at(&xp))?;
                if gp.iter().all(|v| v.abs() <= tols.newton) {
                    break;
                }
                let hp = spec.hessian(&at(&xp))?;
                let step = solve_sym(&hp, &gp);
                for i in 0..n {
                    xp[i] -= step[i];
                }
            }
            let gp = spec.grad(&at(&xp))?;
            if gp.iter().all(|v| v.abs() <= tols.descent_grad) {
                let vp = spec.potential(&at(&xp))?;
                if vp <= v_here + tols.newton {
                    potentials.push(vp);
                    return Ok(DescentResult {
                        outcome: JumpOutcome::Landed(at(&xp)),
                        iterations: iters,
                        potentials,
                    });
                }
            }
            // polish failed; fall through to plain descent
        }

        if gnorm <= tols.descent_grad && min_eig >= -tols.psd {
            return Ok(DescentResult {
                outcome: JumpOutcome::Landed(at(&x)),
                iterations: iters,
                potentials,
            });
        }

        // Steepest descent, except near a critical point with negative
        // curvature: there the gradient is O(distance^2) and useless, so the
        // downhill eigendirection takes over (both signs as fallback).
        let mut directions: Vec<(Vec<f64>, f64)> = Vec::new();
        if min_eig < -tols.psd && gnorm < 1e-6 {
            let v = &pairs[0].1;
            let gv: f64 = g.iter().zip(v).map(|(gi, vi)| gi * vi).sum();
            let s = if gv > 0.0 { -1.0 } else { 1.0 };
            directions.push((v.iter().map(|vi| s * vi).collect(), 0.0));
            directions.push((v.iter().map(|vi| -s * vi).collect(), 0.0));
        } else {
            let g_sq: f64 = g.iter().map(|gi| gi * gi).sum();
            directions.push((g.iter().map(|gi| -gi).collect(), -g_sq));
        }

        // line search with doubling on success; the sufficient-decrease
        // bound is first order along the gradient, second order along an
        // eigendirection (where the slope vanishes)
        let mut accepted = false;
        'dirs: for (dir, slope) in &directions {
            let dnorm = dir.iter().map(|di| di * di).sum::<f64>().sqrt();
            let mut e = eta.min(MAX_STEP_LEN / dnorm);
            while e >= 1e-18 {
                let trial: Vec<f64> = x.iter().zip(dir).map(|(xi, di)| xi + e * di).collect();
                let v_trial = spec.potential(&at(&trial))?;
                let required = if *slope < 0.0 {
                    v_here + 1e-4 * e * slope
                } else {
                    v_here - 1e-4 * e * e * min_eig.abs()
                };
                if v_trial <= required {
                    x = trial;
                    v_here = v_trial;
                    potentials.push(v_here);
                    eta = (e * 2.0).min(1e9);
                    accepted = true;
                    break 'dirs;
                }
                e *= 0.5;
            }
        }
        if !accepted {
            // cannot make progress at floating-point resolution
            let outcome = if min_eig >= -tols.psd {
                JumpOutcome::Landed(at(&x))
            } else {
                JumpOutcome::OnSingular(at(&x))
            };
            return Ok(DescentResult { outcome, iterations: iters, potentials });
        }
    }
}

fn solve_sym(h: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    match h.len() {
        1 => vec![b[0] / h[0][0]],
        2 => {
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            vec![
                (b[0] * h[1][1] - b[1] * h[0][1]) / det,
                (b[1] * h[0][0] - b[0] * h[1][0]) / det,
            ]
        }
        _ => unreachable!("fast dimension is at most two"),
    }
}

/// Decide the fate of a trajectory that has hit the singular locus at `q`:
/// nudge it off the degenerate direction toward lower potential and relax.
/// A landing closer to `q` than a few kicks means no finite jump exists
/// there (the degenerate point is its own basin edge), and is reported as
/// `OnSingular`.
pub fn resolve_jump(spec: &CdeSpec, q: &TotalPoint, tols: &Tolerances) -> Result<JumpOutcome> {
    let h = spec.hessian(q)?;
    let pairs = sym_eigenpairs(&h);
    // direction of smallest |eigenvalue|
    let v = pairs
        .iter()
        .min_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap())
        .unwrap()
        .1
        .clone();
    let delta = tols.perturb;
    let shifted = |sgn: f64| {
        let fast = q.fast.iter().zip(&v).map(|(xi, vi)| xi + sgn * delta * vi).collect();
        TotalPoint::new(fast, q.slow.clone())
    };
    // Downhill side of the kernel direction. The potentials at +/- delta
    // differ only at third order, below double precision, so the side is
    // read off the cubic coefficient instead; potential comparison is the
    // fallback when that vanishes too (deeper degeneracy).
    let c3 = third_directional(spec, q, &v)?;
    let seed = if c3.abs() > 1e-3 {
        shifted(-c3.signum())
    } else {
        let (plus, minus) = (shifted(1.0), shifted(-1.0));
        if spec.potential(&plus)? <= spec.potential(&minus)? {
            plus
        } else {
            minus
        }
    };
    let res = fast_descent(spec, &seed, tols)?;
    Ok(match res.outcome {
        JumpOutcome::Landed(p) => {
            let dist = p
                .fast
                .iter()
                .zip(&q.fast)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist <= 100.0 * delta {
                JumpOutcome::OnSingular(p)
            } else {
                JumpOutcome::Landed(p)
            }
        }
        other => other,
    })
}

/// Third derivative of the potential along the ray `q + s v` at `s = 0`,
/// by a five-point stencil. Exact through quartic fibers.
fn third_directional(spec: &CdeSpec, q: &TotalPoint, v: &[f64]) -> Result<f64> {
    let h = 1e-4;
    let probe = |s: f64| -> Result<f64> {
        let fast = q.fast.iter().zip(v).map(|(xi, vi)| xi + s * vi).collect();
        spec.potential(&TotalPoint::new(fast, q.slow.clone()))
    };
    Ok((probe(2.0 * h)? - 2.0 * probe(h)? + 2.0 * probe(-h)? - probe(-2.0 * h)?)
        / (2.0 * h * h * h))
}

/// A possible landing point for a jump from `from`, with the admissibility
/// verdict broken into its parts.
#[derive(Debug, Clone, Serialize)]
pub struct JumpCandidate {
    pub to: TotalPoint,
    pub potential_drop: f64,
    /// Fiber Hessian positive semidefinite at the landing.
    pub is_minimum: bool,
    /// The potential descends monotonically along the connecting path.
    pub path_clear: bool,
    pub admissible: bool,
}

/// All critical points of the fiber potential over the slow coordinates of
/// `from`, each scored as a jump landing. Admissible means: a strict
/// minimum, strictly below the starting potential, reachable by monotone
/// descent, and not the starting point itself.
pub fn search_finite_jump(
    spec: &CdeSpec,
    from: &TotalPoint,
    tols: &Tolerances,
) -> Result<Vec<JumpCandidate>> {
    from.check_dims(&spec.family)?;
    let v_from = spec.potential(from)?;
    let criticals = fiber_critical_points(spec, &from.slow, tols)?;
    let mut out = Vec::new();
    for xc in criticals {
        let to = TotalPoint::new(xc.clone(), from.slow.clone());
        let same = xc
            .iter()
            .zip(&from.fast)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            <= tols.dedup;
        if same {
            continue;
        }
        let mem = spec.membership(&to, tols.psd)?;
        let is_minimum = mem.hessian_eigenvalues[0] >= -tols.psd;
        let v_to = spec.potential(&to)?;
        let drop = v_from - v_to;
        let path_clear = if is_minimum && drop > 0.0 {
            path_descends(spec, from, &to, tols)?
        } else {
            false
        };
        let admissible = is_minimum && drop > tols.newton && path_clear;
        out.push(JumpCandidate { to, potential_drop: drop, is_minimum, path_clear, admissible });
    }
    Ok(out)
}

/// Monotone-descent check from `from` to `to` along the fiber.
///
/// With one fast variable the gradient is a polynomial in `x` alone, so the
/// path is monotone exactly when no other gradient root lies strictly
/// between the endpoints. With two, relax a seed nudged from `from` toward
/// `to` and ask whether it lands there.
fn path_descends(
    spec: &CdeSpec,
    from: &TotalPoint,
    to: &TotalPoint,
    tols: &Tolerances,
) -> Result<bool> {
    if spec.family.fast_dim() == 1 {
        let (x0, x1) = (from.fast[0], to.fast[0]);
        let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        let coeffs = fiber_grad_coeffs_1d(spec, &from.slow);
        let interior_gap = 1e-7 * (1.0 + hi.abs().max(lo.abs()));
        for r in real_roots(&coeffs)? {
            if r > lo + interior_gap && r < hi - interior_gap {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        let dir: Vec<f64> = to.fast.iter().zip(&from.fast).map(|(a, b)| a - b).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(false);
        }
        let seed = TotalPoint::new(
            from.fast
                .iter()
                .zip(&dir)
                .map(|(xi, di)| xi + tols.perturb * di / norm)
                .collect(),
            from.slow.clone(),
        );
        let res = fast_descent(spec, &seed, tols)?;
        Ok(match res.outcome {
            JumpOutcome::Landed(p) => {
                p.fast
                    .iter()
                    .zip(&to.fast)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= 1e-5 * (1.0 + norm)
            }
            _ => false,
        })
    }
}

/// Ascending-power coefficients of `x -> dV/dx` on the fiber over `slow`.
fn fiber_grad_coeffs_1d(spec: &CdeSpec, slow: &[f64]) -> Vec<f64> {
    let grad = potential_poly(&spec.family).partial(0);
    let deg = grad
        .terms()
        .map(|(e, _)| e[0])
        .max()
        .unwrap_or(0) as usize;
    let mut coeffs = vec![0.0; deg + 1];
    for (e, c) in grad.terms() {
        let mut val = c;
        for (j, &s) in slow.iter().enumerate() {
            val *= s.powi(e[1 + j] as i32);
        }
        coeffs[e[0] as usize] += val;
    }
    coeffs
}

/// Critical points of the fiber potential over fixed slow coordinates.
/// One fast variable: companion-matrix roots of the gradient polynomial.
/// Two: closed-form elimination merged with a grid-seeded Newton sweep.
pub fn fiber_critical_points(
    spec: &CdeSpec,
    slow: &[f64],
    tols: &Tolerances,
) -> Result<Vec<Vec<f64>>> {
    match spec.family.fast_dim() {
        1 => {
            let coeffs = fiber_grad_coeffs_1d(spec, slow);
            Ok(real_roots(&coeffs)?.into_iter().map(|x| vec![x]).collect())
        }
        2 => {
            let mut pts = critical_points_elimination(spec, slow)?;
            pts.extend(critical_points_grid(spec, slow, tols)?);
            Ok(dedup_points(pts, tols.dedup))
        }
        _ => unreachable!(),
    }
}

fn dedup_points(mut pts: Vec<Vec<f64>>, radius: f64) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in pts {
        if !out.iter().any(|q| {
            p.iter()
                .zip(q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                <= radius
        }) {
            out.push(p);
        }
    }
    out
}

/// Exact elimination for the two umbilic fibers.
fn critical_points_elimination(spec: &CdeSpec, slow: &[f64]) -> Result<Vec<Vec<f64>>> {
    let (a, b, c) = (slow[0], slow[1], slow[2]);
    let mut pts = Vec::new();
    match spec.family.tag {
        FamilyTag::HyperbolicUmbilic => {
            // 3x^2 + ay + b = 0, 3y^2 + ax + c = 0
            if a.abs() > 1e-12 {
                // y = -(3x^2 + b)/a into the second equation
                let quartic = [
                    3.0 * b * b + a * a * c,
                    a * a * a,
                    18.0 * b,
                    0.0,
                    27.0,
                ];
                for x in real_roots(&quartic)? {
                    pts.push(vec![x, -(3.0 * x * x + b) / a]);
                }
            } else {
                for &sx in &[-1.0, 1.0] {
                    for &sy in &[-1.0, 1.0] {
                        if b <= 0.0 && c <= 0.0 {
                            pts.push(vec![sx * (-b / 3.0).sqrt(), sy * (-c / 3.0).sqrt()]);
                        }
                    }
                }
            }
        }
        FamilyTag::EllipticUmbilic => {
            // 3x^2 - 3y^2 + 2ax + b = 0, -6xy + 2ay + c = 0
            // second: y (2a - 6x) = -c
            let p1 = [b, 2.0 * a, 3.0]; // 3x^2 + 2ax + b
            // (3x^2 + 2ax + b)(6x - 2a)^2 - 3c^2 = 0, avoiding x = a/3
            let sq = [4.0 * a * a, -24.0 * a, 36.0]; // (6x - 2a)^2
            let mut quart = [0.0f64; 5];
            for (i, &pi) in p1.iter().enumerate() {
                for (j, &sj) in sq.iter().enumerate() {
                    quart[i + j] += pi * sj;
                }
            }
            quart[0] -= 3.0 * c * c;
            for x in real_roots(&quart)? {
                let denom = 6.0 * x - 2.0 * a;
                if denom.abs() > 1e-9 {
                    pts.push(vec![x, c / denom]);
                }
            }
            // branch x = a/3 (requires c = 0): 3y^2 = 3x^2 + 2ax + b
            if c.abs() <= 1e-12 {
                let x = a / 3.0;
                let y2 = (3.0 * x * x + 2.0 * a * x + b) / 3.0;
                if y2 >= 0.0 {
                    pts.push(vec![x, y2.sqrt()]);
                    pts.push(vec![x, -y2.sqrt()]);
                }
            }
        }
        _ => {
            return Err(CdeError::Unsupported(format!(
                "no two-variable elimination for {}",
                spec.family.tag.name()
            )))
        }
    }
    // polish with Newton to clean up the composed-root conditioning
    Ok(pts
        .into_iter()
        .filter_map(|p| newton_2d(spec, slow, &p))
        .collect())
}

/// Newton sweep from a uniform grid of seeds over the fast box.
fn critical_points_grid(spec: &CdeSpec, slow: &[f64], tols: &Tolerances) -> Result<Vec<Vec<f64>>> {
    const N: usize = 64;
    let mut pts = Vec::new();
    for i in 0..N {
        for j in 0..N {
            let x = -3.0 + 6.0 * (i as f64 + 0.5) / N as f64;
            let y = -3.0 + 6.0 * (j as f64 + 0.5) / N as f64;
            if let Some(p) = newton_2d(spec, slow, &[x, y]) {
                pts.push(p);
            }
        }
    }
    Ok(dedup_points(pts, tols.dedup))
}

fn newton_2d(spec: &CdeSpec, slow: &[f64], seed: &[f64]) -> Option<Vec<f64>> {
    let mut x = seed.to_vec();
    for _ in 0..40 {
        let p = TotalPoint::new(x.clone(), slow.to_vec());
        let g = spec.grad(&p).ok()?;
        if g.iter().all(|v| v.abs() <= 1e-12) {
            return Some(x);
        }
        let h = spec.hessian(&p).ok()?;
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det.abs() < 1e-14 {
            return None;
        }
        let step = solve_sym(&h, &g);
        for i in 0..2 {
            x[i] -= step[i];
        }
        if x.iter().any(|v| v.abs() > 2.0 * DESCENT_BOX) {
            return None;
        }
    }
    None
}

/// The fold crossing of the cusp family maps `x` to `-2x`: the double root
/// of the fiber gradient `(t - x)^2 (t + 2x)` collides at `x` and the
/// landing is the surviving simple root.
pub fn cusp_jump(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(CdeError::Precondition(
            "the cusp point itself has no jump direction".into(),
        ));
    }
    Ok(-2.0 * x)
}

/// Landing of the swallowtail fold crossing at fast coordinate `x` on the
/// singular sheet over `a < 0`: the fiber gradient factors as
/// `(t - x)^2 (t^2 + 2xt + 3x^2 + a)` and the landing is the minimum root
/// `-x + sqrt(-2x^2 - a)` of the quadratic factor.
///
/// Finite jumps exist exactly for `x` in `(-sqrt(-a/6), sqrt(-a/2))` with
/// `x = sqrt(-a/6)` removed: outside that window the descent direction sees
/// no critical point and the fast dynamics escape; at the removed point the
/// cubic term vanishes and the crossing is degenerate.
pub fn swallowtail_jump(x: f64, a: f64) -> Result<f64> {
    if a >= 0.0 {
        return Err(CdeError::Precondition(format!(
            "swallowtail jumps need a < 0, got a = {a}"
        )));
    }
    let lo = -(-a / 6.0).sqrt();
    let hi = (-a / 2.0).sqrt();
    let cusp_x = (-a / 6.0).sqrt();
    if !(x > lo && x < hi) || (x - cusp_x).abs() < 1e-12 {
        return Err(CdeError::Precondition(format!(
            "x = {x} is outside the jump window ({lo:.6}, {hi:.6}) \\ {{{cusp_x:.6}}} for a = {a}"
        )));
    }
    Ok(-x + (-2.0 * x * x - a).sqrt())
}

/// Fiber gradient as a polynomial in the fast variable (ascending powers),
/// exposed for diagnostics.
pub fn fiber_gradient(spec: &CdeSpec, slow: &[f64]) -> Result<Vec<f64>> {
    if spec.family.fast_dim() != 1 {
        return Err(CdeError::Unsupported(
            "fiber gradient coefficients exist for one fast variable only".into(),
        ));
    }
    Ok(fiber_grad_coeffs_1d(spec, slow))
}

/// Fold points on the boundary of the attracting sheet. Trajectories live
/// inside the minimum sheet, so these are the only singular points they can
/// reach — the departure set for any jump study. (The fold stratum at large
/// also contains merging saddle pairs; nothing ever jumps from those.)
pub fn sample_departure_points(
    family: &CatastropheFamily,
    count: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<TotalPoint>> {
    let n = family.total_dim();
    let g = vec![MultiPoly::zero(n); family.slow_dim];
    let probe = CdeSpec::new(family.clone(), g)?;
    let mut out = Vec::with_capacity(count);
    for round in 0..40u64 {
        let batch = sample_stratum(
            family,
            StratumLabel::Fold,
            count,
            seed.wrapping_add(round.wrapping_mul(0x9e37_79b9)),
        )?;
        let single_point = batch.len() < count; // zero-dimensional stratum
        for p in batch {
            if probe.membership(&p, tols.constraint)?.attracting == Attracting::Boundary {
                out.push(p);
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
        if single_point {
            return Ok(out);
        }
    }
    Err(CdeError::Numerical(format!(
        "could not collect {count} attracting-boundary fold points on {int}",
        int = family.tag.name()
    )))
}
