//! Event-aware integration of the desingularized reduced dynamics.
//!
//! The chart state follows `du/ds = sigma X(u)` with `X` the adjugate field
//! and `sigma` the sign of `det J` frozen at the start of each smooth
//! segment; since `X = det J du/dt`, that makes `s` a strictly forward
//! reparametrization of true time. True time itself is carried as an extra
//! state with `dt/ds = sigma det J >= 0`, so output is stamped in the time
//! scale of the original system, not the desingularized one.
//!
//! A segment ends when `det J` changes sign (the trajectory hits the
//! singular locus), when the adjugate field vanishes (equilibrium), when the
//! chart leaves the working box, or when the true-time horizon is reached.
//! Singular hits are handed to the jump resolver; a successful landing on
//! the attracting sheet starts the next segment, anything else terminates.

use serde::Serialize;

use crate::chart::{total_to_chart, ChartPoint};
use crate::desing::{desingularize, CdeSpec, Desingularization};
use crate::error::{CdeError, Result};
use crate::family::{Attracting, TotalPoint};
use crate::jumps::{resolve_jump, JumpOutcome};
use crate::tol::Tolerances;

// Dormand-Prince 5(4) tableau
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// One Dormand-Prince step; returns the fifth-order state and the scaled
/// error norm (accept when <= 1).
fn dp45_step<F: Fn(&[f64]) -> Vec<f64>>(
    f: &F,
    y: &[f64],
    h: f64,
    rtol: f64,
    atol: f64,
) -> (Vec<f64>, f64) {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    k.push(f(y));
    for stage in 0..6 {
        let mut ys = y.to_vec();
        for (j, kj) in k.iter().enumerate() {
            if A[stage][j] != 0.0 {
                axpy(&mut ys, h * A[stage][j], kj);
            }
        }
        k.push(f(&ys));
    }
    let mut y5 = y.to_vec();
    let mut y4 = y.to_vec();
    for (j, kj) in k.iter().enumerate() {
        if B5[j] != 0.0 {
            axpy(&mut y5, h * B5[j], kj);
        }
        if B4[j] != 0.0 {
            axpy(&mut y4, h * B4[j], kj);
        }
    }
    let mut err_sq = 0.0;
    for i in 0..n {
        let scale = atol + rtol * y[i].abs().max(y5[i].abs());
        let e = (y5[i] - y4[i]) / scale;
        err_sq += e * e;
    }
    (y5, (err_sq / n as f64).sqrt())
}

/// Classic fixed-step RK4, used to refine event locations inside one
/// accepted step.
fn rk4_advance<F: Fn(&[f64]) -> Vec<f64>>(f: &F, y: &[f64], h_total: f64, nsub: usize) -> Vec<f64> {
    let mut y = y.to_vec();
    let h = h_total / nsub as f64;
    for _ in 0..nsub {
        let k1 = f(&y);
        let mut y2 = y.clone();
        axpy(&mut y2, 0.5 * h, &k1);
        let k2 = f(&y2);
        let mut y3 = y.clone();
        axpy(&mut y3, 0.5 * h, &k2);
        let k3 = f(&y3);
        let mut y4 = y.clone();
        axpy(&mut y4, h, &k3);
        let k4 = f(&y4);
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Plain adaptive integration with states reported exactly at the requested
/// times (steps are clipped onto them). For stiff right-hand sides cap
/// `max_step` accordingly; this is an explicit method.
#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub init_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-8,
            atol: 1e-10,
            init_step: 1e-4,
            min_step: 1e-14,
            max_step: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

pub fn integrate_sampled<F: Fn(&[f64]) -> Vec<f64>>(
    f: F,
    y0: &[f64],
    t_end: f64,
    sample_ts: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<Vec<f64>>, usize)> {
    let mut t = 0.0;
    let mut y = y0.to_vec();
    let mut h = opts.init_step.min(opts.max_step);
    let mut out = Vec::with_capacity(sample_ts.len());
    let mut next_sample = 0;
    let mut accepted = 0usize;
    while next_sample < sample_ts.len() && sample_ts[next_sample] <= t {
        out.push(y.clone());
        next_sample += 1;
    }
    let mut steps = 0usize;
    while t < t_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(CdeError::Numerical(format!(
                "step budget {} exhausted at t = {t:.6e}",
                opts.max_steps
            )));
        }
        let mut h_try = h.min(t_end - t);
        if let Some(&ts) = sample_ts.get(next_sample) {
            h_try = h_try.min(ts - t);
        }
        let (y5, err) = dp45_step(&f, &y, h_try, opts.rtol, opts.atol);
        if err <= 1.0 || h_try <= opts.min_step {
            t += h_try;
            y = y5;
            accepted += 1;
            while next_sample < sample_ts.len()
                && sample_ts[next_sample] <= t + 1e-14 * t.abs().max(1.0)
            {
                out.push(y.clone());
                next_sample += 1;
            }
        }
        let factor = if err <= 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h_try * factor).clamp(opts.min_step, opts.max_step);
        if !h.is_finite() || h <= 0.0 {
            return Err(CdeError::Numerical("step size underflow".into()));
        }
    }
    while next_sample < sample_ts.len() {
        out.push(y.clone());
        next_sample += 1;
    }
    Ok((out, accepted))
}

/// Options for the event-aware reduced-dynamics integrator.
#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub tols: Tolerances,
    pub rtol: f64,
    pub atol: f64,
    /// True-time horizon.
    pub horizon: f64,
    /// Half-width of the admissible chart box, centered at the origin.
    pub domain_halfwidth: f64,
    pub max_steps: usize,
    pub max_segments: usize,
    pub init_step: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            tols: Tolerances::default(),
            rtol: 1e-8,
            atol: 1e-10,
            horizon: 10.0,
            domain_halfwidth: 3.0,
            max_steps: 2_000_000,
            max_segments: 1_000,
            init_step: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum EventKind {
    /// Hit the singular locus and relaxed to a new attracting sheet.
    Jump {
        from: TotalPoint,
        to: TotalPoint,
        potential_drop: f64,
    },
    /// Hit the singular locus with no admissible landing.
    SingularCrossing { at: TotalPoint },
    Equilibrium { at: ChartPoint },
    DomainExit { at: ChartPoint },
    HorizonReached,
}

#[derive(Debug, Clone, Serialize)]
pub struct Event {
    /// True time of the event.
    pub t: f64,
    pub kind: EventKind,
}

/// One accepted state: true time, desingularized time, chart coordinates
/// and their `d/ds` derivatives (kept for dense interpolation).
#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub t: f64,
    pub s: f64,
    pub u: Vec<f64>,
    pub du_ds: Vec<f64>,
    pub dt_ds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Segment {
    /// Sign of `det J` on this segment.
    pub sigma: f64,
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    Horizon,
    SingularTerminated,
    Equilibrium,
    DomainExit,
}

#[derive(Debug, Serialize)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    pub events: Vec<Event>,
    pub end_reason: EndReason,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn final_sample(&self) -> &Sample {
        self.segments
            .last()
            .and_then(|s| s.samples.last())
            .expect("trajectory has at least one sample")
    }

    pub fn final_time(&self) -> f64 {
        self.final_sample().t
    }

    /// Chart state at true time `t` by monotone Hermite interpolation inside
    /// the segment containing `t`. At a jump instant the pre-jump state is
    /// returned. `None` outside the covered time range.
    pub fn sample_chart(&self, t: f64) -> Option<Vec<f64>> {
        for seg in &self.segments {
            let (first, last) = (seg.samples.first()?, seg.samples.last()?);
            if t < first.t - 1e-12 {
                return None; // segments are time-ordered
            }
            if t > last.t + 1e-12 {
                continue;
            }
            let t = t.clamp(first.t, last.t);
            // bracketing samples by binary search on time
            let idx = seg
                .samples
                .partition_point(|smp| smp.t <= t)
                .clamp(1, seg.samples.len() - 1);
            let (s0, s1) = (&seg.samples[idx - 1], &seg.samples[idx]);
            let ds = s1.s - s0.s;
            if ds <= 0.0 || s1.t - s0.t <= 1e-15 {
                return Some(s0.u.clone());
            }
            // invert the cubic model of t(s) by bisection, then evaluate u(s)
            let t_of = |theta: f64| hermite(theta, s0.t, s1.t, s0.dt_ds * ds, s1.dt_ds * ds);
            let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if t_of(mid) < t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let theta = 0.5 * (lo + hi);
            let u = (0..s0.u.len())
                .map(|i| hermite(theta, s0.u[i], s1.u[i], s0.du_ds[i] * ds, s1.du_ds[i] * ds))
                .collect();
            return Some(u);
        }
        None
    }
}

fn hermite(theta: f64, p0: f64, p1: f64, m0: f64, m1: f64) -> f64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    (2.0 * t3 - 3.0 * t2 + 1.0) * p0
        + (t3 - 2.0 * t2 + theta) * m0
        + (-2.0 * t3 + 3.0 * t2) * p1
        + (t3 - t2) * m1
}

/// Integrate the reduced system from a chart point on the attracting sheet.
///
/// The start must lift to the interior of the attracting part of the
/// constraint set; points off it or exactly on the singular locus are
/// rejected.
pub fn integrate_cde(
    spec: &CdeSpec,
    start: &ChartPoint,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let d = desingularize(spec)?;
    let m = d.chart.dim();
    if start.coords.len() != m {
        return Err(CdeError::Dimension(format!(
            "start has {} chart coordinates, expected {m}",
            start.coords.len()
        )));
    }
    let p0 = d.chart.lift_point(&start.coords);
    let mem = spec.membership(&p0, opts.tols.constraint)?;
    match mem.attracting {
        Attracting::Interior => {}
        Attracting::Boundary => {
            return Err(CdeError::Precondition(
                "start lies on the singular locus; it does not determine a sheet".into(),
            ))
        }
        Attracting::Outside => {
            return Err(CdeError::Precondition(format!(
                "start does not lie on the attracting sheet (residual {:.3e}, min Hessian eigenvalue {:.3e})",
                mem.residual, mem.hessian_eigenvalues[0]
            )))
        }
    }

    let mut trajectory = Trajectory {
        segments: Vec::new(),
        events: Vec::new(),
        end_reason: EndReason::Horizon,
        steps_accepted: 0,
        steps_rejected: 0,
    };
    let mut u = start.coords.clone();
    let mut t_now = 0.0;

    'segments: for _seg_index in 0..opts.max_segments {
        let det0 = d.chart.det_at(&u);
        if det0.abs() <= opts.tols.det_zero {
            return Err(CdeError::Precondition(
                "segment starts on the singular locus".into(),
            ));
        }
        let sigma = det0.signum();
        // state z = (u, t); dt/ds = sigma det stays positive on the segment
        let rhs = |z: &[f64]| {
            let (uz, _) = z.split_at(m);
            let mut dz = d.field_at(uz);
            for v in dz.iter_mut() {
                *v *= sigma;
            }
            dz.push(sigma * d.chart.det_at(uz));
            dz
        };
        let mut seg = Segment { sigma, samples: Vec::new() };
        let mut z: Vec<f64> = u.iter().copied().chain([t_now]).collect();
        let mut s_now = 0.0;
        let push_sample = |seg: &mut Segment, s: f64, z: &[f64]| {
            let (uz, rest) = z.split_at(m);
            let f = rhs(z);
            seg.samples.push(Sample {
                t: rest[0],
                s,
                u: uz.to_vec(),
                du_ds: f[..m].to_vec(),
                dt_ds: f[m],
            });
        };
        push_sample(&mut seg, s_now, &z);

        let mut h = opts.init_step;
        let mut eq_streak = 0usize;
        loop {
            if trajectory.steps_accepted + trajectory.steps_rejected > opts.max_steps {
                return Err(CdeError::Numerical(format!(
                    "step budget {} exhausted at t = {:.6e}",
                    opts.max_steps, z[m]
                )));
            }
            let (z_new, err) = dp45_step(&rhs, &z, h, opts.rtol, opts.atol);
            if err > 1.0 && h > 1e-13 {
                trajectory.steps_rejected += 1;
                h = (h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0)).max(1e-13);
                continue;
            }
            trajectory.steps_accepted += 1;

            // locate the earliest event inside this accepted step, if any
            let det_new = d.chart.det_at(&z_new[..m]);
            let crossing = sigma * det_new <= 0.0;
            let horizon_hit = z_new[m] >= opts.horizon;
            let theta_of = |target: EventTarget| -> f64 {
                // bisect on the fraction of the step, refining with RK4
                let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
                while (hi - lo) * h > opts.tols.time_bracket && hi - lo > 1e-15 {
                    let mid = 0.5 * (lo + hi);
                    let zm = rk4_advance(&rhs, &z, mid * h, 8);
                    let past = match target {
                        EventTarget::DetZero => sigma * d.chart.det_at(&zm[..m]) <= 0.0,
                        EventTarget::Horizon => zm[m] >= opts.horizon,
                    };
                    if past {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            };
            let theta_c = if crossing { Some(theta_of(EventTarget::DetZero)) } else { None };
            let theta_h = if horizon_hit { Some(theta_of(EventTarget::Horizon)) } else { None };

            match (theta_c, theta_h) {
                (Some(tc), th) if th.map_or(true, |th| tc <= th) => {
                    // singular crossing first
                    let z_star = rk4_advance(&rhs, &z, tc * h, 16);
                    s_now += tc * h;
                    push_sample(&mut seg, s_now, &z_star);
                    let t_star = z_star[m];
                    let q = d.chart.lift_point(&z_star[..m]);
                    trajectory.segments.push(seg);
                    match resolve_jump(spec, &q, &opts.tols)? {
                        JumpOutcome::Landed(p_new) => {
                            let drop = spec.potential(&q)? - spec.potential(&p_new)?;
                            let u_new = total_to_chart(&spec.family, &p_new)?;
                            trajectory.events.push(Event {
                                t: t_star,
                                kind: EventKind::Jump { from: q, to: p_new, potential_drop: drop },
                            });
                            u = u_new.coords;
                            t_now = t_star;
                            continue 'segments;
                        }
                        JumpOutcome::OnSingular(_) | JumpOutcome::Diverged => {
                            trajectory.events.push(Event {
                                t: t_star,
                                kind: EventKind::SingularCrossing { at: q },
                            });
                            trajectory.end_reason = EndReason::SingularTerminated;
                            return Ok(trajectory);
                        }
                    }
                }
                (_, Some(th)) => {
                    let z_star = rk4_advance(&rhs, &z, th * h, 16);
                    s_now += th * h;
                    push_sample(&mut seg, s_now, &z_star);
                    let t_star = z_star[m];
                    trajectory.segments.push(seg);
                    trajectory.events.push(Event { t: t_star, kind: EventKind::HorizonReached });
                    trajectory.end_reason = EndReason::Horizon;
                    return Ok(trajectory);
                }
                _ => {
                    s_now += h;
                    z = z_new;
                    push_sample(&mut seg, s_now, &z);
                    // equilibrium: adjugate field vanishing over several steps
                    let xnorm = seg
                        .samples
                        .last()
                        .unwrap()
                        .du_ds
                        .iter()
                        .fold(0.0_f64, |mm, v| mm.max(v.abs()));
                    if xnorm < opts.tols.equilibrium {
                        eq_streak += 1;
                        if eq_streak >= 3 {
                            let at = ChartPoint::new(z[..m].to_vec());
                            let t_star = z[m];
                            trajectory.segments.push(seg);
                            trajectory
                                .events
                                .push(Event { t: t_star, kind: EventKind::Equilibrium { at } });
                            trajectory.end_reason = EndReason::Equilibrium;
                            return Ok(trajectory);
                        }
                    } else {
                        eq_streak = 0;
                    }
                    if z[..m].iter().any(|v| v.abs() > opts.domain_halfwidth) {
                        let at = ChartPoint::new(z[..m].to_vec());
                        let t_star = z[m];
                        trajectory.segments.push(seg);
                        trajectory
                            .events
                            .push(Event { t: t_star, kind: EventKind::DomainExit { at } });
                        trajectory.end_reason = EndReason::DomainExit;
                        return Ok(trajectory);
                    }
                    h = (h * if err <= 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) })
                        .min(0.1);
                }
            }
        }
    }
    Err(CdeError::Numerical(format!(
        "segment budget {} exhausted (runaway jump sequence?)",
        opts.max_segments
    )))
}

#[derive(Clone, Copy)]
enum EventTarget {
    DetZero,
    Horizon,
}

/// Convenience: the desingularization a trajectory was computed with.
pub fn prepared(spec: &CdeSpec) -> Result<Desingularization> {
    desingularize(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{CatastropheFamily, FamilyTag};
    use crate::poly::MultiPoly;
    use approx::assert_relative_eq;

    fn cusp_spec(ga: &[(Vec<u16>, f64)], gb: &[(Vec<u16>, f64)]) -> CdeSpec {
        let fam = CatastropheFamily::new(FamilyTag::Cusp);
        CdeSpec::new(
            fam,
            vec![MultiPoly::from_terms(3, ga), MultiPoly::from_terms(3, gb)],
        )
        .unwrap()
    }

    #[test]
    fn linear_decay_on_regular_sheet() {
        // Morse: chart is parameter space, X = g = -(a,b,c)
        let fam = CatastropheFamily::new(FamilyTag::Morse);
        let n = fam.total_dim();
        let g = (0..3)
            .map(|j| {
                let mut e = vec![0u16; n];
                e[1 + j] = 1;
                MultiPoly::from_terms(n, &[(e, -1.0)])
            })
            .collect();
        let spec = CdeSpec::new(fam, g).unwrap();
        let opts = IntegrateOptions { horizon: 1.0, ..Default::default() };
        let traj = integrate_cde(&spec, &ChartPoint::new(vec![1.0, 0.5, -0.25]), &opts).unwrap();
        assert_eq!(traj.end_reason, EndReason::Horizon);
        let fin = traj.final_sample();
        assert_relative_eq!(fin.t, 1.0, epsilon = 1e-9);
        let e1 = (-1.0_f64).exp();
        assert_relative_eq!(fin.u[0], e1, max_relative = 1e-7);
        assert_relative_eq!(fin.u[1], 0.5 * e1, max_relative = 1e-7);
        assert_relative_eq!(fin.u[2], -0.25 * e1, max_relative = 1e-7);
        // dense sampling agrees with the analytic solution mid-trajectory
        let mid = traj.sample_chart(0.5).unwrap();
        assert_relative_eq!(mid[0], (-0.5_f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn drift_through_fold_jumps_to_far_branch() {
        // dot b = 1 at a = -1: the state slides to the fold at
        // x = 1/sqrt3, b = 2/(3 sqrt3), jumps to x = -2/sqrt3, and carries on.
        let spec = cusp_spec(&[(vec![0, 0, 0], 0.0)], &[(vec![0, 0, 0], 1.0)]);
        let opts = IntegrateOptions { horizon: 0.5, ..Default::default() };
        let traj = integrate_cde(&spec, &ChartPoint::new(vec![1.0, -1.0]), &opts).unwrap();
        assert_eq!(traj.end_reason, EndReason::Horizon);
        assert_eq!(traj.segments.len(), 2);

        let t_fold = 2.0 / (3.0 * 3.0_f64.sqrt());
        let jumps: Vec<&Event> = traj
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Jump { .. }))
            .collect();
        assert_eq!(jumps.len(), 1);
        assert_relative_eq!(jumps[0].t, t_fold, epsilon = 1e-6);
        if let EventKind::Jump { from, to, potential_drop } = &jumps[0].kind {
            assert_relative_eq!(from.fast[0], 1.0 / 3.0_f64.sqrt(), epsilon = 1e-5);
            assert_relative_eq!(to.fast[0], -2.0 / 3.0_f64.sqrt(), epsilon = 1e-5);
            // slow coordinates carry over bit for bit
            assert_eq!(from.slow, to.slow);
            assert!(*potential_drop > 0.0);
        }

        // b == t throughout (g_b = 1, jumps preserve b); x solves the cubic
        let fin = traj.final_sample();
        assert_relative_eq!(fin.t, 0.5, epsilon = 1e-9);
        let p = CatastropheFamily::new(FamilyTag::Cusp);
        let total = crate::chart::lift_to_constraint(&p, &ChartPoint::new(fin.u.clone())).unwrap();
        assert_relative_eq!(total.slow[1], 0.5, epsilon = 1e-6);
        assert!(fin.u[0] < -1.0);
    }

    #[test]
    fn equilibrium_is_detected() {
        // dot b = x - 0.8 pins x = 0.8 on the attracting branch
        let spec = cusp_spec(
            &[(vec![0, 0, 0], 0.0)],
            &[(vec![1, 0, 0], 1.0), (vec![0, 0, 0], -0.8)],
        );
        let opts = IntegrateOptions { horizon: 500.0, ..Default::default() };
        let traj = integrate_cde(&spec, &ChartPoint::new(vec![1.2, -1.0]), &opts).unwrap();
        assert_eq!(traj.end_reason, EndReason::Equilibrium);
        let fin = traj.final_sample();
        assert_relative_eq!(fin.u[0], 0.8, epsilon = 1e-6);
        assert!(matches!(
            traj.events.last().unwrap().kind,
            EventKind::Equilibrium { .. }
        ));
    }

    #[test]
    fn fold_with_no_landing_terminates_at_crossing() {
        // fold family, a ramps up: past the fold the fiber has no minimum
        let fam = CatastropheFamily::with_slow_dim(FamilyTag::Fold, 1).unwrap();
        let spec = CdeSpec::new(fam, vec![MultiPoly::from_terms(2, &[(vec![0, 0], 1.0)])]).unwrap();
        let opts = IntegrateOptions { horizon: 5.0, ..Default::default() };
        let traj = integrate_cde(&spec, &ChartPoint::new(vec![1.0]), &opts).unwrap();
        assert_eq!(traj.end_reason, EndReason::SingularTerminated);
        // a runs from -1 to 0 at unit rate
        assert_relative_eq!(traj.final_time(), 1.0, epsilon = 1e-6);
        assert!(matches!(
            traj.events.last().unwrap().kind,
            EventKind::SingularCrossing { .. }
        ));
        // the attracting fold sheet has det < 0: time reversal is in effect
        assert_relative_eq!(traj.segments[0].sigma, -1.0);
    }

    #[test]
    fn domain_exit_stops_the_run() {
        let fam = CatastropheFamily::new(FamilyTag::Morse);
        let n = fam.total_dim();
        let g = vec![
            MultiPoly::from_terms(n, &[(vec![0, 0, 0, 0], 1.0)]),
            MultiPoly::zero(n),
            MultiPoly::zero(n),
        ];
        let spec = CdeSpec::new(fam, g).unwrap();
        let opts = IntegrateOptions { horizon: 100.0, ..Default::default() };
        let traj = integrate_cde(&spec, &ChartPoint::new(vec![0.0, 0.0, 0.0]), &opts).unwrap();
        assert_eq!(traj.end_reason, EndReason::DomainExit);
        assert!(traj.final_sample().u[0] > 3.0);
    }

    #[test]
    fn bad_starts_are_rejected() {
        let spec = cusp_spec(&[(vec![0, 0, 0], 0.0)], &[(vec![0, 0, 0], 1.0)]);
        // repelling sheet
        assert!(integrate_cde(
            &spec,
            &ChartPoint::new(vec![0.0, -1.0]),
            &IntegrateOptions::default()
        )
        .is_err());
        // exactly on the fold
        assert!(integrate_cde(
            &spec,
            &ChartPoint::new(vec![1.0 / 3.0_f64.sqrt(), -1.0]),
            &IntegrateOptions::default()
        )
        .is_err());
    }

    #[test]
    fn sampled_driver_hits_requested_times() {
        let f = |y: &[f64]| vec![-y[0]];
        let ts = [0.0, 0.25, 0.5, 0.75, 1.0];
        let (states, _) =
            integrate_sampled(f, &[2.0], 1.0, &ts, &OdeOptions::default()).unwrap();
        assert_eq!(states.len(), ts.len());
        for (ti, yi) in ts.iter().zip(&states) {
            assert_relative_eq!(yi[0], 2.0 * (-ti).exp(), max_relative = 1e-7);
        }
    }
}
