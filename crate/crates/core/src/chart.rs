//! Charts on the constraint set.
//!
//! For every dynamic family the equations `grad_x V = 0` can be solved
//! globally for some of the slow parameters because those parameters enter
//! the gradient linearly with unit coefficient. The remaining coordinates —
//! fast variables first, then the surviving slow parameters — form a global
//! chart of `S` whose dimension equals the number of slow parameters.

use serde::{Deserialize, Serialize};

use crate::error::{CdeError, Result};
use crate::family::{grad_fast, CatastropheFamily, FamilyTag, TotalPoint};

/// One coordinate of the total space, by role and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartCoord {
    Fast(usize),
    Slow(usize),
}

/// A point in the chart of `S`; coordinate meaning comes from
/// [`chart_layout`] for the family at hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ChartPoint { coords }
    }
}

/// Retained chart coordinates, and for each eliminated coordinate the index
/// of the gradient component that solves for it.
pub fn chart_layout(
    family: &CatastropheFamily,
) -> Result<(Vec<ChartCoord>, Vec<(usize, ChartCoord)>)> {
    use ChartCoord::*;
    let m = family.slow_dim;
    let (mut retained, eliminated): (Vec<ChartCoord>, Vec<(usize, ChartCoord)>) = match family.tag
    {
        FamilyTag::Morse => (Vec::new(), vec![(0, Fast(0))]),
        FamilyTag::Fold => (vec![Fast(0)], vec![(0, Slow(0))]),
        FamilyTag::Cusp => (vec![Fast(0), Slow(0)], vec![(0, Slow(1))]),
        FamilyTag::Swallowtail => (vec![Fast(0), Slow(0), Slow(1)], vec![(0, Slow(2))]),
        FamilyTag::EllipticUmbilic | FamilyTag::HyperbolicUmbilic => (
            vec![Fast(0), Fast(1), Slow(0)],
            vec![(0, Slow(1)), (1, Slow(2))],
        ),
        FamilyTag::NonCritical => {
            return Err(CdeError::Unsupported(
                "non_critical has an empty constraint set, no chart exists".into(),
            ))
        }
        FamilyTag::Butterfly | FamilyTag::ParabolicUmbilic => {
            return Err(CdeError::Unsupported(format!(
                "{}: only potential evaluation is provided, no chart",
                family.tag.name()
            )))
        }
    };
    // slow parameters beyond those the elimination consumes ride along
    let used: Vec<usize> = retained
        .iter()
        .chain(eliminated.iter().map(|(_, c)| c))
        .filter_map(|c| match c {
            Slow(i) => Some(*i),
            Fast(_) => None,
        })
        .collect();
    for i in 0..m {
        if !used.contains(&i) {
            retained.push(Slow(i));
        }
    }
    debug_assert_eq!(retained.len(), m);
    Ok((retained, eliminated))
}

/// Chart dimension (always the number of slow parameters).
pub fn chart_dim(family: &CatastropheFamily) -> usize {
    family.slow_dim
}

pub fn coord_name(family: &CatastropheFamily, c: ChartCoord) -> String {
    match c {
        ChartCoord::Fast(i) => ["x", "y"][i].to_string(),
        ChartCoord::Slow(i) => {
            debug_assert!(i < family.slow_dim);
            ["a", "b", "c", "d"][i].to_string()
        }
    }
}

/// Names of the chart coordinates in order, e.g. `x, a, c` for the cusp with
/// three slow parameters.
pub fn chart_names(family: &CatastropheFamily) -> Result<Vec<String>> {
    let (retained, _) = chart_layout(family)?;
    Ok(retained.iter().map(|&c| coord_name(family, c)).collect())
}

/// Names of all total-space coordinates, fast first.
pub fn total_var_names(family: &CatastropheFamily) -> Vec<String> {
    let mut names: Vec<String> = (0..family.fast_dim())
        .map(|i| ["x", "y"][i].to_string())
        .collect();
    names.extend((0..family.slow_dim).map(|i| ["a", "b", "c", "d"][i].to_string()));
    names
}

/// Map a chart point to the total-space point of `S` it names.
///
/// Eliminated coordinates enter their gradient component linearly with unit
/// coefficient, so solving `grad = 0` for them is exact: evaluate the
/// gradient with the eliminated entries zeroed and negate.
pub fn lift_to_constraint(family: &CatastropheFamily, u: &ChartPoint) -> Result<TotalPoint> {
    let (retained, eliminated) = chart_layout(family)?;
    if u.coords.len() != retained.len() {
        return Err(CdeError::Dimension(format!(
            "chart point has {} coordinates, {} chart needs {}",
            u.coords.len(),
            family.tag.name(),
            retained.len()
        )));
    }
    let mut p = TotalPoint::new(vec![0.0; family.fast_dim()], vec![0.0; family.slow_dim]);
    for (&c, &v) in retained.iter().zip(&u.coords) {
        match c {
            ChartCoord::Fast(i) => p.fast[i] = v,
            ChartCoord::Slow(i) => p.slow[i] = v,
        }
    }
    let g = grad_fast(family, &p)?;
    for &(gi, c) in &eliminated {
        match c {
            ChartCoord::Fast(i) => p.fast[i] = -g[gi],
            ChartCoord::Slow(i) => p.slow[i] = -g[gi],
        }
    }
    Ok(p)
}

/// Chart coordinates of a total-space point (assumed to lie on `S`; this
/// just reads off the retained coordinates).
pub fn total_to_chart(family: &CatastropheFamily, p: &TotalPoint) -> Result<ChartPoint> {
    p.check_dims(family)?;
    let (retained, _) = chart_layout(family)?;
    let coords = retained
        .iter()
        .map(|&c| match c {
            ChartCoord::Fast(i) => p.fast[i],
            ChartCoord::Slow(i) => p.slow[i],
        })
        .collect();
    Ok(ChartPoint::new(coords))
}
