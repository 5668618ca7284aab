//! Stratification of the constraint set by depth of degeneracy.
//!
//! A point of `S` is regular, a fold, a cusp, or the central singularity of
//! its family; the label is decided by how many successive fiber derivatives
//! of `V` vanish (corank-1 families) or by the Hessian corank plus the cubic
//! term on the kernel line (umbilics). Each stratum also carries an explicit
//! polynomial parametrization, which is what the samplers and the jump
//! searches draw from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::desing::potential_poly;
use crate::error::{CdeError, Result};
use crate::family::{
    grad_fast, hessian_fast, sym_eigenpairs, CatastropheFamily, FamilyTag, TotalPoint,
};
use crate::tol::Tolerances;

/// Degeneracy classes, by symbol: (1,0) regular, (1,1,0) fold, (1,1,1,0)
/// cusp, (1,1,1,1) the swallowtail point, (2,0) the corank-2 umbilic point.
/// A trailing 0 means the next derivative in the chain is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumLabel {
    Regular,
    Fold,
    Cusp,
    SwallowtailPoint,
    UmbilicPoint,
}

impl StratumLabel {
    pub fn symbol(self) -> &'static [u32] {
        match self {
            StratumLabel::Regular => &[1, 0],
            StratumLabel::Fold => &[1, 1, 0],
            StratumLabel::Cusp => &[1, 1, 1, 0],
            StratumLabel::SwallowtailPoint => &[1, 1, 1, 1],
            StratumLabel::UmbilicPoint => &[2, 0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StratumLabel::Regular => "regular",
            StratumLabel::Fold => "fold",
            StratumLabel::Cusp => "cusp",
            StratumLabel::SwallowtailPoint => "swallowtail_point",
            StratumLabel::UmbilicPoint => "umbilic_point",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let label = match name {
            "regular" => StratumLabel::Regular,
            "fold" => StratumLabel::Fold,
            "cusp" => StratumLabel::Cusp,
            "swallowtail_point" => StratumLabel::SwallowtailPoint,
            "umbilic_point" => StratumLabel::UmbilicPoint,
            other => return Err(CdeError::Invalid(format!("unknown stratum `{other}`"))),
        };
        Ok(label)
    }
}

/// The strata a family's constraint set decomposes into, shallowest first.
pub fn strata_for(family: &CatastropheFamily) -> Result<&'static [StratumLabel]> {
    use StratumLabel::*;
    let list: &'static [StratumLabel] = match family.tag {
        FamilyTag::Morse => &[Regular],
        FamilyTag::Fold => &[Regular, Fold],
        FamilyTag::Cusp => &[Regular, Fold, Cusp],
        FamilyTag::Swallowtail => &[Regular, Fold, Cusp, SwallowtailPoint],
        FamilyTag::HyperbolicUmbilic | FamilyTag::EllipticUmbilic => {
            &[Regular, Fold, Cusp, UmbilicPoint]
        }
        other => {
            return Err(CdeError::Unsupported(format!(
                "no stratification for {}",
                other.name()
            )))
        }
    };
    Ok(list)
}

/// Successive fiber derivatives `d/dx V, d²/dx² V, ...` down to the constant
/// one, for the single-fast-variable families.
fn fiber_chain(family: &CatastropheFamily, p: &TotalPoint) -> Vec<f64> {
    let flat = p.flat();
    let mut d = potential_poly(family);
    let mut chain = Vec::new();
    loop {
        d = d.partial(0);
        if d.is_zero() {
            break;
        }
        chain.push(d.eval(&flat));
    }
    chain
}

/// Directional third derivative `D³V(v,v,v)` in the fast variables.
fn cubic_on_kernel(family: &CatastropheFamily, p: &TotalPoint, v: &[f64]) -> f64 {
    let flat = p.flat();
    let vp = potential_poly(family);
    let mut t = 0.0;
    for i in 0..2 {
        let vi = vp.partial(i);
        for j in 0..2 {
            let vij = vi.partial(j);
            for k in 0..2 {
                t += vij.partial(k).eval(&flat) * v[i] * v[j] * v[k];
            }
        }
    }
    t
}

/// Stratum of a constraint-set point. The vanishing band is
/// `tols.stratum` relative to the largest derivative magnitude in play.
pub fn stratum_of(
    family: &CatastropheFamily,
    p: &TotalPoint,
    tols: &Tolerances,
) -> Result<StratumLabel> {
    p.check_dims(family)?;
    match family.tag {
        FamilyTag::Morse | FamilyTag::Fold | FamilyTag::Cusp | FamilyTag::Swallowtail => {
            let chain = fiber_chain(family, p);
            let scale = chain.iter().fold(1.0_f64, |m, d| m.max(d.abs()));
            let band = tols.stratum * scale;
            if chain[0].abs() > band {
                return Err(CdeError::Precondition(format!(
                    "point is off the constraint set (residual {:.3e})",
                    chain[0].abs()
                )));
            }
            // chain[last] is a nonzero constant, so `vanished` stops early
            let vanished = chain[1..].iter().take_while(|d| d.abs() <= band).count();
            Ok(match vanished {
                0 => StratumLabel::Regular,
                1 => StratumLabel::Fold,
                2 => StratumLabel::Cusp,
                _ => StratumLabel::SwallowtailPoint,
            })
        }
        FamilyTag::HyperbolicUmbilic | FamilyTag::EllipticUmbilic => {
            let g = grad_fast(family, p)?;
            let h = hessian_fast(family, p)?;
            let pairs = sym_eigenpairs(&h);
            let scale = pairs
                .iter()
                .map(|(e, _)| e.abs())
                .chain(g.iter().map(|gi| gi.abs()))
                .fold(1.0_f64, f64::max);
            let band = tols.stratum * scale;
            let residual = g.iter().fold(0.0_f64, |m, gi| m.max(gi.abs()));
            if residual > band {
                return Err(CdeError::Precondition(format!(
                    "point is off the constraint set (residual {residual:.3e})"
                )));
            }
            let kernel: Vec<&(f64, Vec<f64>)> =
                pairs.iter().filter(|(e, _)| e.abs() <= band).collect();
            Ok(match kernel.len() {
                0 => StratumLabel::Regular,
                2 => StratumLabel::UmbilicPoint,
                _ => {
                    // cubic coefficients are O(6), so widen the band to match
                    let t = cubic_on_kernel(family, p, &kernel[0].1);
                    if t.abs() <= tols.stratum * scale.max(6.0) {
                        StratumLabel::Cusp
                    } else {
                        StratumLabel::Fold
                    }
                }
            })
        }
        other => Err(CdeError::Unsupported(format!(
            "no stratification for {}",
            other.name()
        ))),
    }
}

/// Explicit parametrization of one stratum: a polynomial map from `dim`
/// parameters onto the stratum closure. `window` is the parameter box the
/// samplers draw from; `branches` counts connected pieces the single formula
/// cannot join (only the elliptic-umbilic cusp lines need more than one).
#[derive(Debug, Clone)]
pub struct StratumChart {
    pub family: CatastropheFamily,
    pub label: StratumLabel,
    pub dim: usize,
    pub branches: usize,
    pub window: Vec<(f64, f64)>,
}

const TWO_PI: f64 = std::f64::consts::TAU;

pub fn stratum_chart(family: &CatastropheFamily, label: StratumLabel) -> Result<StratumChart> {
    if !strata_for(family)?.contains(&label) {
        return Err(CdeError::Unsupported(format!(
            "{} has no {} stratum",
            family.tag.name(),
            label.name()
        )));
    }
    if family.tag != FamilyTag::Morse && family.slow_dim != family.tag.codim() {
        return Err(CdeError::Unsupported(
            "stratum charts assume the canonical parameter count".into(),
        ));
    }
    let box_1 = (-1.2, 1.2);
    let (dim, branches, window) = match (family.tag, label) {
        (FamilyTag::Morse, StratumLabel::Regular) => (family.slow_dim, 1, vec![box_1; family.slow_dim]),
        (FamilyTag::Fold, StratumLabel::Regular) => (1, 1, vec![box_1]),
        (FamilyTag::Fold, StratumLabel::Fold) => (0, 1, vec![]),
        (FamilyTag::Cusp, StratumLabel::Regular) => (2, 1, vec![box_1; 2]),
        (FamilyTag::Cusp, StratumLabel::Fold) => (1, 1, vec![box_1]),
        (FamilyTag::Cusp, StratumLabel::Cusp) => (0, 1, vec![]),
        (FamilyTag::Swallowtail, StratumLabel::Regular) => (3, 1, vec![box_1; 3]),
        (FamilyTag::Swallowtail, StratumLabel::Fold) => (2, 1, vec![box_1; 2]),
        (FamilyTag::Swallowtail, StratumLabel::Cusp) => (1, 1, vec![box_1]),
        (FamilyTag::Swallowtail, StratumLabel::SwallowtailPoint) => (0, 1, vec![]),
        (FamilyTag::HyperbolicUmbilic, StratumLabel::Regular) => (3, 1, vec![box_1; 3]),
        (FamilyTag::HyperbolicUmbilic, StratumLabel::Fold) => (2, 1, vec![box_1; 2]),
        (FamilyTag::HyperbolicUmbilic, StratumLabel::Cusp) => (1, 1, vec![box_1]),
        (FamilyTag::HyperbolicUmbilic, StratumLabel::UmbilicPoint) => (0, 1, vec![]),
        (FamilyTag::EllipticUmbilic, StratumLabel::Regular) => (3, 1, vec![box_1; 3]),
        (FamilyTag::EllipticUmbilic, StratumLabel::Fold) => {
            (2, 1, vec![(0.0, TWO_PI), box_1])
        }
        (FamilyTag::EllipticUmbilic, StratumLabel::Cusp) => (1, 3, vec![box_1]),
        (FamilyTag::EllipticUmbilic, StratumLabel::UmbilicPoint) => (0, 1, vec![]),
        _ => unreachable!("filtered by strata_for"),
    };
    Ok(StratumChart {
        family: *family,
        label,
        dim,
        branches,
        window,
    })
}

impl StratumChart {
    /// The stratum point at chart parameters `t` on `branch`.
    pub fn point(&self, branch: usize, t: &[f64]) -> Result<TotalPoint> {
        if t.len() != self.dim {
            return Err(CdeError::Dimension(format!(
                "chart takes {} parameters, got {}",
                self.dim,
                t.len()
            )));
        }
        if branch >= self.branches {
            return Err(CdeError::Invalid(format!(
                "chart has {} branch(es), got index {branch}",
                self.branches
            )));
        }
        let p = match (self.family.tag, self.label) {
            (FamilyTag::Morse, StratumLabel::Regular) => TotalPoint::new(vec![0.0], t.to_vec()),
            (FamilyTag::Fold, StratumLabel::Regular) => {
                let x = t[0];
                TotalPoint::new(vec![x], vec![-x * x])
            }
            (FamilyTag::Fold, StratumLabel::Fold) => TotalPoint::new(vec![0.0], vec![0.0]),
            (FamilyTag::Cusp, StratumLabel::Regular) => {
                let (x, a) = (t[0], t[1]);
                TotalPoint::new(vec![x], vec![a, -x * x * x - a * x])
            }
            (FamilyTag::Cusp, StratumLabel::Fold) => {
                let x = t[0];
                TotalPoint::new(vec![x], vec![-3.0 * x * x, 2.0 * x * x * x])
            }
            (FamilyTag::Cusp, StratumLabel::Cusp) => TotalPoint::new(vec![0.0], vec![0.0, 0.0]),
            (FamilyTag::Swallowtail, StratumLabel::Regular) => {
                let (x, a, b) = (t[0], t[1], t[2]);
                let c = -(x.powi(4) + a * x * x + b * x);
                TotalPoint::new(vec![x], vec![a, b, c])
            }
            (FamilyTag::Swallowtail, StratumLabel::Fold) => {
                let (x, a) = (t[0], t[1]);
                let b = -4.0 * x.powi(3) - 2.0 * a * x;
                let c = 3.0 * x.powi(4) + a * x * x;
                TotalPoint::new(vec![x], vec![a, b, c])
            }
            (FamilyTag::Swallowtail, StratumLabel::Cusp) => {
                let x = t[0];
                TotalPoint::new(
                    vec![x],
                    vec![-6.0 * x * x, 8.0 * x.powi(3), -3.0 * x.powi(4)],
                )
            }
            (FamilyTag::Swallowtail, StratumLabel::SwallowtailPoint) => {
                TotalPoint::new(vec![0.0], vec![0.0; 3])
            }
            (FamilyTag::HyperbolicUmbilic, StratumLabel::Regular) => {
                let (x, y, a) = (t[0], t[1], t[2]);
                hu_on_constraint(x, y, a)
            }
            (FamilyTag::HyperbolicUmbilic, StratumLabel::Fold) => {
                // the hyperbola 36xy = a² in the fiber variables, x != 0
                let (x, a) = (t[0], t[1]);
                let y = a * a / (36.0 * x);
                hu_on_constraint(x, y, a)
            }
            (FamilyTag::HyperbolicUmbilic, StratumLabel::Cusp) => {
                // kernel cubic 6(a³ - 216x³) vanishes only on the diagonal
                let s = t[0];
                hu_on_constraint(s, s, 6.0 * s)
            }
            (FamilyTag::HyperbolicUmbilic, StratumLabel::UmbilicPoint) => {
                TotalPoint::new(vec![0.0; 2], vec![0.0; 3])
            }
            (FamilyTag::EllipticUmbilic, StratumLabel::Regular) => {
                let (x, y, a) = (t[0], t[1], t[2]);
                eu_on_constraint(x, y, a)
            }
            (FamilyTag::EllipticUmbilic, StratumLabel::Fold) => {
                // the cone 36(x²+y²) = 4a², radius |a|/3 per slice
                let (theta, a) = (t[0], t[1]);
                eu_on_constraint(a / 3.0 * theta.cos(), a / 3.0 * theta.sin(), a)
            }
            (FamilyTag::EllipticUmbilic, StratumLabel::Cusp) => {
                // the three lines where the kernel cubic 6v1(v1²-3v2²) vanishes
                let a = t[0];
                let theta = TWO_PI * branch as f64 / 3.0;
                eu_on_constraint(a / 3.0 * theta.cos(), a / 3.0 * theta.sin(), a)
            }
            (FamilyTag::EllipticUmbilic, StratumLabel::UmbilicPoint) => {
                TotalPoint::new(vec![0.0; 2], vec![0.0; 3])
            }
            _ => unreachable!("filtered by stratum_chart"),
        };
        Ok(p)
    }

    /// How far inside the open stratum the chart point sits: the magnitude of
    /// the next derivative in the chain (scaled O(1)), so rejection sampling
    /// can keep clear of the deeper strata. Zero-dimensional strata are their
    /// own interior.
    pub fn interior_margin(&self, branch: usize, t: &[f64]) -> f64 {
        match (self.family.tag, self.label) {
            (FamilyTag::Morse, _) => f64::INFINITY,
            (FamilyTag::Fold, StratumLabel::Regular) => t[0].abs(),
            (FamilyTag::Cusp, StratumLabel::Regular) => (3.0 * t[0] * t[0] + t[1]).abs(),
            (FamilyTag::Cusp, StratumLabel::Fold) => t[0].abs(),
            (FamilyTag::Swallowtail, StratumLabel::Regular) => {
                let (x, a, b) = (t[0], t[1], t[2]);
                (4.0 * x.powi(3) + 2.0 * a * x + b).abs()
            }
            (FamilyTag::Swallowtail, StratumLabel::Fold) => {
                (12.0 * t[0] * t[0] + 2.0 * t[1]).abs()
            }
            (FamilyTag::Swallowtail, StratumLabel::Cusp) => t[0].abs(),
            (FamilyTag::HyperbolicUmbilic, StratumLabel::Regular) => {
                let (x, y, a) = (t[0], t[1], t[2]);
                (36.0 * x * y - a * a).abs()
            }
            (FamilyTag::HyperbolicUmbilic, StratumLabel::Fold) => {
                t[0].abs().min((t[1] - 6.0 * t[0]).abs())
            }
            (FamilyTag::HyperbolicUmbilic, StratumLabel::Cusp) => t[0].abs(),
            (FamilyTag::EllipticUmbilic, StratumLabel::Regular) => {
                let (x, y, a) = (t[0], t[1], t[2]);
                (4.0 * a * a - 36.0 * (x * x + y * y)).abs()
            }
            (FamilyTag::EllipticUmbilic, StratumLabel::Fold) => {
                let sector = TWO_PI / 3.0;
                let off = (t[0] / sector).round() * sector;
                t[1].abs().min((t[0] - off).abs())
            }
            (FamilyTag::EllipticUmbilic, StratumLabel::Cusp) => t[0].abs(),
            _ => {
                debug_assert_eq!(self.dim, 0, "branch {branch} has no margin rule");
                f64::INFINITY
            }
        }
    }
}

fn hu_on_constraint(x: f64, y: f64, a: f64) -> TotalPoint {
    let b = -3.0 * x * x - a * y;
    let c = -3.0 * y * y - a * x;
    TotalPoint::new(vec![x, y], vec![a, b, c])
}

fn eu_on_constraint(x: f64, y: f64, a: f64) -> TotalPoint {
    let b = -3.0 * x * x + 3.0 * y * y - 2.0 * a * x;
    let c = 6.0 * x * y - 2.0 * a * y;
    TotalPoint::new(vec![x, y], vec![a, b, c])
}

/// Draw `count` points on the stratum, rejecting parameters closer than 0.05
/// to a deeper stratum. A zero-dimensional stratum yields its single point
/// once, whatever `count` asks for.
pub fn sample_stratum(
    family: &CatastropheFamily,
    label: StratumLabel,
    count: usize,
    seed: u64,
) -> Result<Vec<TotalPoint>> {
    let chart = stratum_chart(family, label)?;
    if chart.dim == 0 {
        return Ok(vec![chart.point(0, &[])?]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 400 + 200 * count {
            return Err(CdeError::Numerical(format!(
                "rejection sampling starved on {}/{}",
                family.tag.name(),
                label.name()
            )));
        }
        let t: Vec<f64> = chart.window.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
        let branch = out.len() % chart.branches;
        if chart.interior_margin(branch, &t) < 0.05 {
            continue;
        }
        out.push(chart.point(branch, &t)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::classify_membership;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn dynamic_families() -> Vec<CatastropheFamily> {
        [
            FamilyTag::Fold,
            FamilyTag::Cusp,
            FamilyTag::Swallowtail,
            FamilyTag::HyperbolicUmbilic,
            FamilyTag::EllipticUmbilic,
        ]
        .iter()
        .map(|&t| CatastropheFamily::new(t))
        .collect()
    }

    #[test]
    fn every_sample_round_trips_to_its_label() {
        let tols = Tolerances::default();
        for family in dynamic_families() {
            for &label in strata_for(&family).unwrap() {
                let pts = sample_stratum(&family, label, 100, 7).unwrap();
                assert!(!pts.is_empty());
                for p in &pts {
                    assert_eq!(
                        stratum_of(&family, p, &tols).unwrap(),
                        label,
                        "{} sample {:?}",
                        family.tag.name(),
                        p
                    );
                }
            }
        }
    }

    #[test]
    fn deeper_strata_satisfy_the_shallower_equations() {
        // S ⊃ B ⊃ cusps ⊃ central point, checked as residuals
        for family in dynamic_families() {
            for &label in strata_for(&family).unwrap() {
                for p in sample_stratum(&family, label, 40, 11).unwrap() {
                    let m = classify_membership(&family, &p, 1e-8).unwrap();
                    assert!(m.on_constraint, "{}: {:?}", family.tag.name(), p);
                    if label != StratumLabel::Regular {
                        let near_zero = m
                            .hessian_eigenvalues
                            .iter()
                            .fold(f64::INFINITY, |acc, e| acc.min(e.abs()));
                        assert!(near_zero <= 1e-8, "{}: {:?}", family.tag.name(), p);
                    }
                }
            }
        }
    }

    #[test]
    fn chart_rank_matches_stratum_dimension() {
        // central finite differences of the chart map; expected ranks 3,2,1,0
        for family in dynamic_families() {
            for &label in strata_for(&family).unwrap() {
                let chart = stratum_chart(&family, label).unwrap();
                if chart.dim == 0 {
                    continue;
                }
                let t0: Vec<f64> = chart
                    .window
                    .iter()
                    .map(|&(lo, hi)| lo + 0.37 * (hi - lo))
                    .collect();
                let h = 1e-5;
                let n = family.total_dim();
                let mut jac = DMatrix::zeros(n, chart.dim);
                for j in 0..chart.dim {
                    let mut tp = t0.clone();
                    let mut tm = t0.clone();
                    tp[j] += h;
                    tm[j] -= h;
                    let fp = chart.point(0, &tp).unwrap().flat();
                    let fm = chart.point(0, &tm).unwrap().flat();
                    for i in 0..n {
                        jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
                    }
                }
                assert_eq!(
                    jac.rank(1e-6),
                    chart.dim,
                    "{} {}",
                    family.tag.name(),
                    label.name()
                );
            }
        }
    }

    #[test]
    fn swallowtail_chain_examples() {
        let family = CatastropheFamily::new(FamilyTag::Swallowtail);
        let tols = Tolerances::default();
        let origin = TotalPoint::new(vec![0.0], vec![0.0; 3]);
        assert_eq!(
            stratum_of(&family, &origin, &tols).unwrap(),
            StratumLabel::SwallowtailPoint
        );
        // x=1, c=-1 solves x⁴+ax²+bx+c=0 with second derivative 4
        let reg = TotalPoint::new(vec![1.0], vec![0.0, 0.0, -1.0]);
        assert_eq!(stratum_of(&family, &reg, &tols).unwrap(), StratumLabel::Regular);
        let fold = stratum_chart(&family, StratumLabel::Fold)
            .unwrap()
            .point(0, &[0.6, 0.3])
            .unwrap();
        assert_eq!(stratum_of(&family, &fold, &tols).unwrap(), StratumLabel::Fold);
        let off = TotalPoint::new(vec![1.0], vec![0.0, 0.0, 0.5]);
        assert!(matches!(
            stratum_of(&family, &off, &tols),
            Err(CdeError::Precondition(_))
        ));
    }

    #[test]
    fn umbilic_fold_surfaces_sit_on_the_singular_locus() {
        let hu = CatastropheFamily::new(FamilyTag::HyperbolicUmbilic);
        for p in sample_stratum(&hu, StratumLabel::Fold, 50, 3).unwrap() {
            let (x, y, a) = (p.fast[0], p.fast[1], p.slow[0]);
            assert_relative_eq!(36.0 * x * y - a * a, 0.0, epsilon = 1e-10);
        }
        let eu = CatastropheFamily::new(FamilyTag::EllipticUmbilic);
        for p in sample_stratum(&eu, StratumLabel::Fold, 50, 3).unwrap() {
            let (x, y, a) = (p.fast[0], p.fast[1], p.slow[0]);
            assert_relative_eq!(36.0 * (x * x + y * y) - 4.0 * a * a, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn elliptic_cusp_lines_cover_all_three_branches() {
        let eu = CatastropheFamily::new(FamilyTag::EllipticUmbilic);
        let pts = sample_stratum(&eu, StratumLabel::Cusp, 30, 5).unwrap();
        let tols = Tolerances::default();
        // collect the line directions up to sign; all three must appear
        let mut dirs: Vec<(f64, f64)> = Vec::new();
        for p in &pts {
            assert_eq!(stratum_of(&eu, p, &tols).unwrap(), StratumLabel::Cusp);
            let n = p.fast[0].hypot(p.fast[1]);
            let (mut ux, mut uy) = (p.fast[0] / n, p.fast[1] / n);
            if uy < 0.0 || (uy == 0.0 && ux < 0.0) {
                (ux, uy) = (-ux, -uy);
            }
            if !dirs.iter().any(|(dx, dy)| (dx - ux).abs() + (dy - uy).abs() < 1e-9) {
                dirs.push((ux, uy));
            }
        }
        assert_eq!(dirs.len(), 3);
    }

    #[test]
    fn unsupported_families_are_rejected() {
        let butterfly = CatastropheFamily::new(FamilyTag::Butterfly);
        assert!(strata_for(&butterfly).is_err());
        let wide = CatastropheFamily::with_slow_dim(FamilyTag::Fold, 3).unwrap();
        assert!(stratum_chart(&wide, StratumLabel::Fold).is_err());
    }
}
