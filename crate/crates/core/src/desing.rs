//! Desingularized reduced dynamics on the constraint set.
//!
//! On a chart `u` of `S` the reduced slow flow satisfies `J(u) du/dt = g`,
//! where `J` is the Jacobian of the parameter projection restricted to `S`
//! and `g` is the slow drift evaluated at the lifted point. `J` degenerates
//! exactly on the singular locus, so instead of inverting it we follow the
//! adjugate field `X = adj(J) g`, which satisfies `J X = det(J) g` and is
//! polynomial everywhere. Because `X = det(J) J^{-1} g`, the adjugate field
//! traces the true flow with time running backwards wherever `det(J) < 0`;
//! the integrator compensates per segment.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chart::{chart_layout, chart_names, total_var_names, ChartCoord, ChartPoint};
use crate::error::{CdeError, Result};
use crate::family::{
    classify_from_grad_hess, grad_fast, hessian_fast, CatastropheFamily, FamilyTag, SetMembership,
    TotalPoint,
};
use crate::poly::{poly_adjugate, poly_det, MultiPoly};

/// A polynomial map: one entry per output component, all in the same
/// variables.
pub type PolynomialMap = Vec<MultiPoly>;

/// The potential as a polynomial in the total-space variables.
pub fn potential_poly(family: &CatastropheFamily) -> MultiPoly {
    let n = family.total_dim();
    let nf = family.fast_dim();
    let mono = |spec: &[(usize, u16)], c: f64| {
        let mut e = vec![0u16; n];
        for &(i, k) in spec {
            e[i] = k;
        }
        (e, c)
    };
    // variable indices: fast 0..nf, slow nf..nf+m
    let s = |j: usize| nf + j;
    let terms: Vec<(Vec<u16>, f64)> = match family.tag {
        FamilyTag::NonCritical => vec![mono(&[(0, 1)], 1.0)],
        FamilyTag::Morse => vec![mono(&[(0, 2)], 0.5)],
        FamilyTag::Fold => vec![mono(&[(0, 3)], 1.0 / 3.0), mono(&[(0, 1), (s(0), 1)], 1.0)],
        FamilyTag::Cusp => vec![
            mono(&[(0, 4)], 0.25),
            mono(&[(0, 2), (s(0), 1)], 0.5),
            mono(&[(0, 1), (s(1), 1)], 1.0),
        ],
        FamilyTag::Swallowtail => vec![
            mono(&[(0, 5)], 0.2),
            mono(&[(0, 3), (s(0), 1)], 1.0 / 3.0),
            mono(&[(0, 2), (s(1), 1)], 0.5),
            mono(&[(0, 1), (s(2), 1)], 1.0),
        ],
        FamilyTag::EllipticUmbilic => vec![
            mono(&[(0, 3)], 1.0),
            mono(&[(0, 1), (1, 2)], -3.0),
            mono(&[(0, 2), (s(0), 1)], 1.0),
            mono(&[(1, 2), (s(0), 1)], 1.0),
            mono(&[(0, 1), (s(1), 1)], 1.0),
            mono(&[(1, 1), (s(2), 1)], 1.0),
        ],
        FamilyTag::HyperbolicUmbilic => vec![
            mono(&[(0, 3)], 1.0),
            mono(&[(1, 3)], 1.0),
            mono(&[(0, 1), (1, 1), (s(0), 1)], 1.0),
            mono(&[(0, 1), (s(1), 1)], 1.0),
            mono(&[(1, 1), (s(2), 1)], 1.0),
        ],
        FamilyTag::Butterfly => vec![
            mono(&[(0, 6)], 1.0 / 6.0),
            mono(&[(0, 4), (s(0), 1)], 0.25),
            mono(&[(0, 3), (s(1), 1)], 1.0 / 3.0),
            mono(&[(0, 2), (s(2), 1)], 0.5),
            mono(&[(0, 1), (s(3), 1)], 1.0),
        ],
        FamilyTag::ParabolicUmbilic => vec![
            mono(&[(0, 2), (1, 1)], 1.0),
            mono(&[(1, 4)], 1.0),
            mono(&[(0, 2), (s(0), 1)], 1.0),
            mono(&[(1, 2), (s(1), 1)], 1.0),
            mono(&[(0, 1), (s(2), 1)], 1.0),
            mono(&[(1, 1), (s(3), 1)], 1.0),
        ],
    };
    MultiPoly::from_terms(n, &terms)
}

/// Symbolic chart data for one family: the polynomial lift of chart
/// coordinates to the total space, the restricted parameter projection, its
/// Jacobian, determinant and adjugate (all polynomials in the chart
/// coordinates).
pub struct ChartModel {
    pub family: CatastropheFamily,
    /// Chart coordinate names, e.g. `x, a, c`.
    pub names: Vec<String>,
    /// One polynomial per total-space coordinate, fast first.
    pub lift: Vec<MultiPoly>,
    /// Slow-coordinate rows of `lift`.
    pub proj: Vec<MultiPoly>,
    pub jac: Vec<Vec<MultiPoly>>,
    pub det: MultiPoly,
    pub adj: Vec<Vec<MultiPoly>>,
}

impl ChartModel {
    pub fn build(family: &CatastropheFamily) -> Result<Self> {
        let (retained, eliminated) = chart_layout(family)?;
        let m = family.slow_dim;
        let n = family.total_dim();
        let nf = family.fast_dim();

        // retained coordinates are chart variables; eliminated start at zero
        let mut lift: Vec<MultiPoly> = vec![MultiPoly::zero(m); n];
        let idx = |c: ChartCoord| match c {
            ChartCoord::Fast(i) => i,
            ChartCoord::Slow(i) => nf + i,
        };
        for (k, &c) in retained.iter().enumerate() {
            lift[idx(c)] = MultiPoly::var(m, k);
        }
        // the eliminated coordinate appears linearly with unit coefficient in
        // its gradient component, so grad = 0 solves for it exactly
        let v = potential_poly(family);
        for &(gi, c) in &eliminated {
            let grad_gi = v.partial(gi);
            lift[idx(c)] = grad_gi.compose(&lift)?.scale(-1.0);
        }
        let proj: Vec<MultiPoly> = lift[nf..].to_vec();
        let jac: Vec<Vec<MultiPoly>> = proj
            .iter()
            .map(|pi| (0..m).map(|j| pi.partial(j)).collect())
            .collect();
        let det = poly_det(&jac);
        let adj = poly_adjugate(&jac);
        Ok(ChartModel {
            family: *family,
            names: chart_names(family)?,
            lift,
            proj,
            jac,
            det,
            adj,
        })
    }

    pub fn dim(&self) -> usize {
        self.family.slow_dim
    }

    pub fn lift_point(&self, u: &[f64]) -> TotalPoint {
        let nf = self.family.fast_dim();
        let vals: Vec<f64> = self.lift.iter().map(|p| p.eval(u)).collect();
        TotalPoint::new(vals[..nf].to_vec(), vals[nf..].to_vec())
    }

    pub fn det_at(&self, u: &[f64]) -> f64 {
        self.det.eval(u)
    }

    pub fn jac_at(&self, u: &[f64]) -> Vec<Vec<f64>> {
        self.jac
            .iter()
            .map(|row| row.iter().map(|p| p.eval(u)).collect())
            .collect()
    }

    pub fn adj_at(&self, u: &[f64]) -> Vec<Vec<f64>> {
        self.adj
            .iter()
            .map(|row| row.iter().map(|p| p.eval(u)).collect())
            .collect()
    }
}

/// A constrained system: a potential family plus a polynomial slow drift on
/// the total space. `negate_potential` flips `V` to `-V`, which leaves the
/// constraint set and the reduced flow untouched but exchanges the
/// attracting and repelling sheets (the dual-cusp normal forms use it).
#[derive(Debug, Clone)]
pub struct CdeSpec {
    pub family: CatastropheFamily,
    pub g: PolynomialMap,
    pub negate_potential: bool,
}

impl CdeSpec {
    pub fn new(family: CatastropheFamily, g: PolynomialMap) -> Result<Self> {
        Self::with_sign(family, g, false)
    }

    pub fn with_sign(
        family: CatastropheFamily,
        g: PolynomialMap,
        negate_potential: bool,
    ) -> Result<Self> {
        if g.len() != family.slow_dim {
            return Err(CdeError::Dimension(format!(
                "slow drift has {} components, family carries {} slow parameters",
                g.len(),
                family.slow_dim
            )));
        }
        if let Some(bad) = g.iter().find(|p| p.nvars != family.total_dim()) {
            return Err(CdeError::Dimension(format!(
                "slow drift component in {} variables, total space has {}",
                bad.nvars,
                family.total_dim()
            )));
        }
        Ok(CdeSpec { family, g, negate_potential })
    }

    pub fn sign(&self) -> f64 {
        if self.negate_potential {
            -1.0
        } else {
            1.0
        }
    }

    pub fn potential(&self, p: &TotalPoint) -> Result<f64> {
        Ok(self.sign() * crate::family::eval_potential(&self.family, p)?)
    }

    pub fn grad(&self, p: &TotalPoint) -> Result<Vec<f64>> {
        let mut g = grad_fast(&self.family, p)?;
        for gi in &mut g {
            *gi *= self.sign();
        }
        Ok(g)
    }

    pub fn hessian(&self, p: &TotalPoint) -> Result<Vec<Vec<f64>>> {
        let mut h = hessian_fast(&self.family, p)?;
        for row in &mut h {
            for hij in row.iter_mut() {
                *hij *= self.sign();
            }
        }
        Ok(h)
    }

    /// Membership relative to the signed potential: the constraint set is
    /// unchanged, but attracting/repelling sheets swap when negated.
    pub fn membership(&self, p: &TotalPoint, tol: f64) -> Result<SetMembership> {
        let g = self.grad(p)?;
        let h = self.hessian(p)?;
        Ok(classify_from_grad_hess(&g, &h, tol))
    }

    /// Slow drift at a total-space point.
    pub fn g_at(&self, p: &TotalPoint) -> Vec<f64> {
        let x = p.flat();
        self.g.iter().map(|gi| gi.eval(&x)).collect()
    }
}

/// A chart model together with the adjugate field of a specific system.
pub struct Desingularization {
    pub chart: ChartModel,
    /// `adj(J) (g ∘ lift)`, one polynomial per chart coordinate.
    pub field: Vec<MultiPoly>,
}

impl Desingularization {
    pub fn field_at(&self, u: &[f64]) -> Vec<f64> {
        self.field.iter().map(|p| p.eval(u)).collect()
    }
}

/// Build the closed-form adjugate field for a system.
pub fn desingularize(spec: &CdeSpec) -> Result<Desingularization> {
    let chart = ChartModel::build(&spec.family)?;
    let m = chart.dim();
    let g_on_chart: Vec<MultiPoly> = spec
        .g
        .iter()
        .map(|gi| gi.compose(&chart.lift))
        .collect::<Result<_>>()?;
    let mut field = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = MultiPoly::zero(m);
        for (j, gj) in g_on_chart.iter().enumerate() {
            acc = acc.add(&chart.adj[i][j].mul(gj));
        }
        field.push(acc);
    }
    Ok(Desingularization { chart, field })
}

/// Jacobian of the restricted parameter projection at a chart point.
pub fn jacobian_projection(family: &CatastropheFamily, u: &ChartPoint) -> Result<Vec<Vec<f64>>> {
    let chart = ChartModel::build(family)?;
    expect_dim(&chart, u)?;
    Ok(chart.jac_at(&u.coords))
}

/// Adjugate field at a single chart point, assembled numerically (no
/// polynomial composition); agrees with [`desingularize`]'s closed form.
pub fn desingularized_field_generic(spec: &CdeSpec, u: &ChartPoint) -> Result<Vec<f64>> {
    let chart = ChartModel::build(&spec.family)?;
    expect_dim(&chart, u)?;
    let adj = chart.adj_at(&u.coords);
    let g = spec.g_at(&chart.lift_point(&u.coords));
    Ok(adj
        .iter()
        .map(|row| row.iter().zip(&g).map(|(a, b)| a * b).sum())
        .collect())
}

fn expect_dim(chart: &ChartModel, u: &ChartPoint) -> Result<()> {
    if u.coords.len() != chart.dim() {
        return Err(CdeError::Dimension(format!(
            "chart point has {} coordinates, chart has dimension {}",
            u.coords.len(),
            chart.dim()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Debug, Serialize, Deserialize)]
struct TermJson {
    #[serde(default)]
    exponents: BTreeMap<String, u16>,
    coeff: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CdeSpecJson {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slow_dim: Option<usize>,
    g: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    potential_sign: Option<i8>,
}

impl CdeSpec {
    /// Parse a system description. Exponent maps are keyed by coordinate
    /// name (`x`, `y`, `a`, `b`, `c`, `d`); missing keys mean power zero.
    ///
    /// ```json
    /// { "family": "cusp",
    ///   "g": [[{"exponents": {}, "coeff": 0.0}],
    ///         [{"exponents": {"x": 1}, "coeff": 1.0},
    ///          {"exponents": {}, "coeff": -0.7}]] }
    /// ```
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: CdeSpecJson =
            serde_json::from_str(s).map_err(|e| CdeError::Invalid(format!("bad spec JSON: {e}")))?;
        let tag = FamilyTag::from_name(&raw.family)?;
        let family = match raw.slow_dim {
            Some(m) => CatastropheFamily::with_slow_dim(tag, m)?,
            None => CatastropheFamily::new(tag),
        };
        let names = total_var_names(&family);
        let n = family.total_dim();
        let mut g = Vec::with_capacity(raw.g.len());
        for comp in &raw.g {
            let mut p = MultiPoly::zero(n);
            for term in comp {
                let mut e = vec![0u16; n];
                for (name, &k) in &term.exponents {
                    let i = names.iter().position(|v| v == name).ok_or_else(|| {
                        CdeError::Invalid(format!(
                            "unknown variable `{name}` for family {}",
                            family.tag.name()
                        ))
                    })?;
                    e[i] = k;
                }
                p.add_term(e, term.coeff);
            }
            g.push(p);
        }
        let negate = match raw.potential_sign {
            None | Some(1) => false,
            Some(-1) => true,
            Some(other) => {
                return Err(CdeError::Invalid(format!(
                    "potential_sign must be 1 or -1, got {other}"
                )))
            }
        };
        CdeSpec::with_sign(family, g, negate)
    }

    pub fn to_json_string(&self) -> String {
        let names = total_var_names(&self.family);
        let g = self
            .g
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(e, c)| TermJson {
                        exponents: e
                            .iter()
                            .enumerate()
                            .filter(|(_, &k)| k > 0)
                            .map(|(i, &k)| (names[i].clone(), k))
                            .collect(),
                        coeff: c,
                    })
                    .collect()
            })
            .collect();
        let raw = CdeSpecJson {
            family: self.family.tag.name().to_string(),
            slow_dim: Some(self.family.slow_dim),
            g,
            potential_sign: if self.negate_potential { Some(-1) } else { None },
        };
        serde_json::to_string_pretty(&raw).expect("spec serialization cannot fail")
    }
}
