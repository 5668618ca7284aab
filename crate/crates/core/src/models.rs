//! Ready-made named systems: the two classic cusp applications (heart and
//! nerve) plus one representative per catalogue normal form, each with a
//! starting chart point on the attracting sheet and a sensible horizon.

use crate::classify::{normal_form_instance, NormalFormLabel, NormalFormParams, ALL_LABELS};
use crate::desing::CdeSpec;
use crate::error::{CdeError, Result};
use crate::family::{CatastropheFamily, FamilyTag};
use crate::poly::MultiPoly;
use crate::ChartPoint;

/// Rest length the heart model relaxes toward when none is given. Above
/// `1/sqrt(3)` the slow drift has a stable rest point on the attracting
/// branch and the system settles; below it the rest point sits on the
/// repelling branch and the model runs a relaxation oscillation.
pub const HEARTBEAT_DEFAULT_REST: f64 = 0.7;

/// A named system bundled with a valid starting point for simulation.
#[derive(Debug, Clone)]
pub struct BuiltinModel {
    pub spec: CdeSpec,
    /// Chart coordinates of a point on the attracting sheet.
    pub start: ChartPoint,
    /// Default reduced-time horizon.
    pub horizon: f64,
    pub description: String,
}

fn var(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn konst(n: usize, c: f64) -> MultiPoly {
    MultiPoly::constant(n, c)
}

/// Heart muscle model: a cusp fast variable `x` (fibre length) with the
/// shape parameter frozen at `a = -1` and the trigger `b` slowly chasing
/// the rest length, `db/dt = x - x0`. Coordinates are `(x, a, b)`.
fn heartbeat(x0: f64) -> Result<BuiltinModel> {
    if !x0.is_finite() {
        return Err(CdeError::Invalid(format!("heartbeat rest length must be finite, got {x0}")));
    }
    let family = CatastropheFamily::with_slow_dim(FamilyTag::Cusp, 2)?;
    let n = family.total_dim();
    let g = vec![konst(n, 0.0), var(n, 0).sub(&konst(n, x0))];
    let spec = CdeSpec::new(family, g)?;
    // Chart (x, a); b is eliminated. x = 1.2 sits on the upper attracting
    // branch for a = -1.
    let start = ChartPoint::new(vec![1.2, -1.0]);
    let mode = if x0 > 1.0 / 3.0f64.sqrt() { "settles to a stable rest point" } else { "runs a relaxation oscillation" };
    Ok(BuiltinModel {
        spec,
        start,
        horizon: 8.0,
        description: format!(
            "cusp heart model with frozen shape parameter; fibre length chases rest length {x0} and {mode}"
        ),
    })
}

/// Nerve impulse model: a cusp fast variable with two slow feedback
/// currents, `da/dt = -2(a + x)`, `db/dt = -1 - a`. Has a regular
/// equilibrium at `(x, a) = (1, -1)` and a folded saddle at `(1/2, -3/4)`.
fn nerve() -> Result<BuiltinModel> {
    let family = CatastropheFamily::with_slow_dim(FamilyTag::Cusp, 2)?;
    let n = family.total_dim();
    let (x, a) = (var(n, 0), var(n, 1));
    let g = vec![
        a.add(&x).scale(-2.0),
        konst(n, -1.0).sub(&a),
    ];
    let spec = CdeSpec::new(family, g)?;
    Ok(BuiltinModel {
        spec,
        start: ChartPoint::new(vec![1.5, -2.0]),
        horizon: 4.0,
        description: "cusp nerve model with two slow feedback currents; a folded saddle lets \
                      trajectories cross the fold"
            .to_string(),
    })
}

/// Starting chart point on the attracting sheet for a catalogue instance.
fn catalogue_start(label: NormalFormLabel) -> Vec<f64> {
    match label.family_tag() {
        FamilyTag::Morse => vec![0.5, 0.25, -0.25],
        FamilyTag::Fold => vec![0.8, 0.2, -0.2],
        // The dual cusp attracts where 3x^2 + a < 0.
        FamilyTag::Cusp if label == NormalFormLabel::CuspDualFlowBox => vec![0.0, -1.0, 0.1],
        FamilyTag::Cusp => vec![0.8, 0.5, 0.1],
        FamilyTag::Swallowtail => vec![0.8, 0.5, 0.1],
        FamilyTag::HyperbolicUmbilic => vec![0.5, 0.5, 0.3],
        FamilyTag::EllipticUmbilic => vec![0.0, 0.0, 1.0],
        _ => unreachable!("no catalogue entries outside the classified families"),
    }
}

fn catalogue(label: NormalFormLabel) -> Result<BuiltinModel> {
    let spec = normal_form_instance(label, &NormalFormParams::default())?;
    Ok(BuiltinModel {
        spec,
        start: ChartPoint::new(catalogue_start(label)),
        horizon: 3.0,
        description: format!("catalogue normal form {} with default coefficients", label.name()),
    })
}

/// Resolve a model name. Accepts `zeeman_heartbeat`, `zeeman_heartbeat:<x0>`,
/// `zeeman_nerve`, and every catalogue label (e.g. `fold/source`).
pub fn builtin(name: &str) -> Result<BuiltinModel> {
    if let Some(rest) = name.strip_prefix("zeeman_heartbeat") {
        if rest.is_empty() {
            return heartbeat(HEARTBEAT_DEFAULT_REST);
        }
        if let Some(arg) = rest.strip_prefix(':') {
            let x0 = arg.parse::<f64>().map_err(|_| {
                CdeError::Invalid(format!("bad heartbeat rest length `{arg}`"))
            })?;
            return heartbeat(x0);
        }
        return Err(CdeError::Invalid(format!("unknown model `{name}`")));
    }
    if name == "zeeman_nerve" {
        return nerve();
    }
    match NormalFormLabel::from_name(name) {
        Ok(label) => catalogue(label),
        Err(_) => Err(CdeError::Invalid(format!(
            "unknown model `{name}`; try `zeeman_heartbeat[:x0]`, `zeeman_nerve`, or a \
             catalogue label like `fold/source`"
        ))),
    }
}

/// Every accepted model name (heartbeat listed without its optional `:x0`).
pub fn builtin_names() -> Vec<&'static str> {
    let mut names = vec!["zeeman_heartbeat", "zeeman_nerve"];
    names.extend(ALL_LABELS.iter().map(|l| l.name()));
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Attracting;
    use crate::integrate::{integrate_cde, IntegrateOptions};
    use crate::Tolerances;

    #[test]
    fn every_builtin_starts_on_the_attracting_sheet() {
        let tols = Tolerances::default();
        for name in builtin_names() {
            let m = builtin(name).unwrap();
            let chart = crate::desing::ChartModel::build(&m.spec.family).unwrap();
            let p = chart.lift_point(&m.start.coords);
            let membership = m.spec.membership(&p, tols.constraint).unwrap();
            assert_eq!(
                membership.attracting,
                Attracting::Interior,
                "start of `{name}` must lie strictly inside the attracting sheet"
            );
            assert!(m.horizon > 0.0);
            assert!(!m.description.is_empty());
        }
    }

    #[test]
    fn heartbeat_rest_length_is_parsed() {
        let chart = |m: &BuiltinModel| {
            crate::desing::ChartModel::build(&m.spec.family).unwrap().lift_point(&m.start.coords)
        };
        let default = builtin("zeeman_heartbeat").unwrap();
        let drift = default.spec.g_at(&chart(&default));
        assert_relative_eq!(drift[0], 0.0);
        assert_relative_eq!(drift[1], 1.2 - 0.7, max_relative = 1e-12);

        let fast = builtin("zeeman_heartbeat:0.45").unwrap();
        let drift = fast.spec.g_at(&chart(&fast));
        assert_relative_eq!(drift[1], 1.2 - 0.45, max_relative = 1e-12);
    }

    #[test]
    fn bad_names_are_rejected() {
        assert!(builtin("zeeman_heartbeat:wide").is_err());
        assert!(builtin("zeeman_heartbeat!").is_err());
        assert!(builtin("zeeman_heartbeats").is_err());
        assert!(builtin("morse/everything").is_err());
        assert!(builtin("").is_err());
    }

    #[test]
    fn nerve_model_integrates_from_its_start() {
        let m = builtin("zeeman_nerve").unwrap();
        let mut opts = IntegrateOptions::default();
        opts.horizon = m.horizon;
        let traj = integrate_cde(&m.spec, &m.start, &opts).unwrap();
        assert!(!traj.segments.is_empty());
        assert!(traj.final_time() > 0.0);
    }

    use approx::assert_relative_eq;
}
