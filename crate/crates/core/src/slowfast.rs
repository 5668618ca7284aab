//! The full two-timescale system `eps * dx/dt = -grad V`, `dalpha/dt = g`,
//! integrated explicitly, plus the machinery to compare it against the
//! reduced constrained flow: fast-transition detection with hysteresis and
//! a sup-norm convergence study over a ladder of `eps` values.

use std::time::Instant;

use crate::desing::{CdeSpec, ChartModel};
use crate::error::{CdeError, Result};
use crate::family::TotalPoint;
use crate::integrate::{
    integrate_cde, integrate_sampled, EventKind, IntegrateOptions, OdeOptions,
};
use crate::par::par_map;
use crate::ChartPoint;

/// Controls for the explicit integration of the `eps`-family. The fast rate
/// scales like `1/eps`, so steps are capped at `step_cap_ratio * eps` in
/// slow time (and at `step_cap_ratio` alone in fast time).
#[derive(Debug, Clone)]
pub struct SlowFastOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub step_cap_ratio: f64,
    /// Uniform sample count used when no explicit sample times are given.
    pub samples: usize,
}

impl Default for SlowFastOptions {
    fn default() -> Self {
        SlowFastOptions {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 50_000_000,
            step_cap_ratio: 0.2,
            samples: 2001,
        }
    }
}

/// States of the full system reported on a fixed time grid.
#[derive(Debug, Clone)]
pub struct SlowFastTrajectory {
    pub t: Vec<f64>,
    /// Full states, fast coordinates first.
    pub states: Vec<Vec<f64>>,
    pub fast_dim: usize,
    pub steps_accepted: usize,
}

impl SlowFastTrajectory {
    pub fn fast(&self, i: usize) -> &[f64] {
        &self.states[i][..self.fast_dim]
    }

    pub fn slow(&self, i: usize) -> &[f64] {
        &self.states[i][self.fast_dim..]
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least one state")
    }
}

fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
}

/// Right-hand side in slow time; dimensions are fixed by the spec, so the
/// closure evaluates infallibly.
fn slow_time_field<'a>(spec: &'a CdeSpec, eps: f64) -> impl Fn(&[f64]) -> Vec<f64> + 'a {
    let nf = spec.family.fast_dim();
    move |v: &[f64]| {
        let p = TotalPoint::new(v[..nf].to_vec(), v[nf..].to_vec());
        let mut out = spec.grad(&p).expect("dimensions checked at entry");
        for gi in &mut out {
            *gi *= -1.0 / eps;
        }
        out.extend(spec.g_at(&p));
        out
    }
}

/// Same system on the fast time scale `tau = t / eps`:
/// `dx/dtau = -grad V`, `dalpha/dtau = eps * g`.
fn fast_time_field<'a>(spec: &'a CdeSpec, eps: f64) -> impl Fn(&[f64]) -> Vec<f64> + 'a {
    let nf = spec.family.fast_dim();
    move |v: &[f64]| {
        let p = TotalPoint::new(v[..nf].to_vec(), v[nf..].to_vec());
        let mut out = spec.grad(&p).expect("dimensions checked at entry");
        for gi in &mut out {
            *gi = -*gi;
        }
        out.extend(spec.g_at(&p).into_iter().map(|gi| eps * gi));
        out
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CdeError::Invalid(format!("eps must be positive and finite, got {eps}")));
    }
    Ok(())
}

/// Integrate the full system in slow time, reporting states at `sample_ts`
/// (ascending; integration stops at the last entry).
pub fn integrate_slowfast_at(
    spec: &CdeSpec,
    start: &TotalPoint,
    eps: f64,
    sample_ts: &[f64],
    opts: &SlowFastOptions,
) -> Result<SlowFastTrajectory> {
    check_eps(eps)?;
    start.check_dims(&spec.family)?;
    let Some(&t_end) = sample_ts.last() else {
        return Err(CdeError::Invalid("no sample times given".into()));
    };
    let ode = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        init_step: (0.1 * eps).min(1e-4),
        min_step: 1e-14,
        max_step: opts.step_cap_ratio * eps,
        max_steps: opts.max_steps,
    };
    let (states, accepted) =
        integrate_sampled(slow_time_field(spec, eps), &start.flat(), t_end, sample_ts, &ode)?;
    Ok(SlowFastTrajectory {
        t: sample_ts.to_vec(),
        states,
        fast_dim: spec.family.fast_dim(),
        steps_accepted: accepted,
    })
}

/// Integrate the full system in slow time over `[0, horizon]` on a uniform
/// sample grid.
pub fn integrate_slowfast(
    spec: &CdeSpec,
    start: &TotalPoint,
    eps: f64,
    horizon: f64,
    opts: &SlowFastOptions,
) -> Result<SlowFastTrajectory> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(CdeError::Invalid(format!("horizon must be positive, got {horizon}")));
    }
    integrate_slowfast_at(spec, start, eps, &uniform_grid(horizon, opts.samples), opts)
}

/// Integrate on the fast time scale over `[0, tau_horizon]`. A slow-time run
/// to `T` and a fast-time run to `T / eps` traverse the same curve.
pub fn integrate_slowfast_fast_time(
    spec: &CdeSpec,
    start: &TotalPoint,
    eps: f64,
    tau_horizon: f64,
    opts: &SlowFastOptions,
) -> Result<SlowFastTrajectory> {
    check_eps(eps)?;
    start.check_dims(&spec.family)?;
    if !(tau_horizon.is_finite() && tau_horizon > 0.0) {
        return Err(CdeError::Invalid(format!("horizon must be positive, got {tau_horizon}")));
    }
    let ts = uniform_grid(tau_horizon, opts.samples);
    let ode = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        init_step: 1e-4,
        min_step: 1e-14,
        max_step: opts.step_cap_ratio,
        max_steps: opts.max_steps,
    };
    let (states, accepted) =
        integrate_sampled(fast_time_field(spec, eps), &start.flat(), tau_horizon, &ts, &ode)?;
    Ok(SlowFastTrajectory {
        t: ts,
        states,
        fast_dim: spec.family.fast_dim(),
        steps_accepted: accepted,
    })
}

/// A detected switch between the two outer branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastTransition {
    pub t: f64,
    /// Entered the high branch (`true`) or the low branch (`false`).
    pub rising: bool,
}

/// Branch switches of coordinate `coord` with hysteresis: the state is
/// "high" above `hi`, "low" below `lo`, and unchanged in between, so slow
/// drift across one threshold alone never counts as a transition.
pub fn fast_transitions(
    traj: &SlowFastTrajectory,
    coord: usize,
    lo: f64,
    hi: f64,
) -> Vec<FastTransition> {
    let mut side: Option<bool> = None;
    let mut out = Vec::new();
    for (i, v) in traj.states.iter().enumerate() {
        let x = v[coord];
        let here = if x >= hi {
            Some(true)
        } else if x <= lo {
            Some(false)
        } else {
            None
        };
        if let Some(h) = here {
            if side.is_some_and(|s| s != h) {
                out.push(FastTransition { t: traj.t[i], rising: h });
            }
            side = Some(h);
        }
    }
    out
}

/// One row of a convergence study.
#[derive(Debug, Clone)]
pub struct ErrorRow {
    pub epsilon: f64,
    /// Sup over the compared grid times of the sup-norm error in the slow
    /// coordinates.
    pub sup_slow_error: f64,
    pub runtime_ms: f64,
    /// Merged time intervals around reference events that were excluded
    /// from the comparison.
    pub windows: Vec<(f64, f64)>,
    /// Grid points skipped (inside a window or past the reference end).
    pub excluded_points: usize,
}

#[derive(Debug, Clone)]
pub struct ErrorTable {
    /// Rows sorted by decreasing `epsilon`.
    pub rows: Vec<ErrorRow>,
    pub grid: usize,
    pub horizon: f64,
}

impl ErrorTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epsilon,sup_slow_error,runtime_ms,excluded_windows\n");
        for r in &self.rows {
            let windows = r
                .windows
                .iter()
                .map(|(lo, hi)| format!("{lo:.6e}..{hi:.6e}"))
                .collect::<Vec<_>>()
                .join(";");
            s.push_str(&format!(
                "{:.6e},{:.6e},{:.3},{}\n",
                r.epsilon, r.sup_slow_error, r.runtime_ms, windows
            ));
        }
        s
    }

    /// Errors decrease with `eps`, or the study has already bottomed out at
    /// solver noise (`<= floor` everywhere).
    pub fn monotone(&self, floor: f64) -> bool {
        self.rows.iter().all(|r| r.sup_slow_error <= floor)
            || self
                .rows
                .windows(2)
                .all(|w| w[1].sup_slow_error < w[0].sup_slow_error)
    }
}

/// Compare the full system against the reduced flow on a shared time grid.
///
/// The reduced trajectory from `start` is the reference; its slow
/// coordinates are read off through the chart lift. For each `eps` the full
/// system starts at the lifted point and the sup-norm error of the slow
/// coordinates is taken over the grid, skipping a window of radius
/// `eps^(1/3)` around every jump or singular crossing of the reference
/// (fast transitions take `O(eps)` real time, so no fixed grid point can be
/// compared there). When the reference terminates on the singular locus the
/// full system is only integrated up to the last compared time: past that
/// point it leaves every fiber minimum and blows up.
pub fn convergence_study(
    spec: &CdeSpec,
    start: &ChartPoint,
    horizon: f64,
    epsilons: &[f64],
    grid: usize,
    sf_opts: &SlowFastOptions,
    cde_opts: &IntegrateOptions,
) -> Result<ErrorTable> {
    if epsilons.is_empty() {
        return Err(CdeError::Invalid("no eps values given".into()));
    }
    for &eps in epsilons {
        check_eps(eps)?;
    }
    let grid = grid.max(2);
    let chart = ChartModel::build(&spec.family)?;
    let mut opts = cde_opts.clone();
    opts.horizon = horizon;
    let reference = integrate_cde(spec, start, &opts)?;
    let t_end = reference.final_time().min(horizon);
    let event_times: Vec<f64> = reference
        .events
        .iter()
        .filter(|e| {
            matches!(e.kind, EventKind::Jump { .. } | EventKind::SingularCrossing { .. })
        })
        .map(|e| e.t)
        .collect();
    let ts = uniform_grid(t_end, grid);
    let ref_slow: Vec<Option<Vec<f64>>> = ts
        .iter()
        .map(|&t| reference.sample_chart(t).map(|u| chart.lift_point(&u).slow))
        .collect();
    let start_total = chart.lift_point(&start.coords);

    let mut rows = par_map(epsilons, |&eps| -> Result<ErrorRow> {
        let window = eps.cbrt();
        let mut windows: Vec<(f64, f64)> = Vec::new();
        for &te in &event_times {
            let (lo, hi) = ((te - window).max(0.0), (te + window).min(t_end));
            match windows.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => windows.push((lo, hi)),
            }
        }
        let mut compare: Vec<(f64, &Vec<f64>)> = Vec::new();
        let mut excluded = 0usize;
        for (i, &t) in ts.iter().enumerate() {
            let windowed = event_times.iter().any(|&te| (t - te).abs() <= window);
            match (&ref_slow[i], windowed) {
                (Some(rs), false) => compare.push((t, rs)),
                _ => excluded += 1,
            }
        }
        if compare.is_empty() {
            return Err(CdeError::Numerical(format!(
                "event windows at eps = {eps} cover the whole grid"
            )));
        }
        let clock = Instant::now();
        let sample_ts: Vec<f64> = compare.iter().map(|(t, _)| *t).collect();
        let sf = integrate_slowfast_at(spec, &start_total, eps, &sample_ts, sf_opts)?;
        let runtime_ms = clock.elapsed().as_secs_f64() * 1e3;
        let mut sup = 0.0_f64;
        for (i, (_, rs)) in compare.iter().enumerate() {
            let ss = sf.slow(i);
            for (a, b) in ss.iter().zip(rs.iter()) {
                sup = sup.max((a - b).abs());
            }
        }
        Ok(ErrorRow { epsilon: eps, sup_slow_error: sup, runtime_ms, windows, excluded_points: excluded })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    Ok(ErrorTable { rows, grid, horizon: t_end })
}
