//! The elementary catastrophe potentials and the geometry of their critical
//! sets.
//!
//! Each family fixes a polynomial `V(x; alpha)` in one or two fast variables
//! `x` and up to four slow parameters `alpha`. The constraint set is
//! `S = {grad_x V = 0}`; its attracting part `S_min` is where the fast
//! Hessian is positive semidefinite, and the singular locus `B` is the part
//! of `S` where the Hessian degenerates. Everything downstream (charts,
//! desingularization, jumps, strata) is phrased against these three sets.

use serde::{Deserialize, Serialize};

use crate::error::{CdeError, Result};

/// The supported potential families, ordered roughly by codimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    /// `V = x`: no critical points at all, used to exercise rejection paths.
    NonCritical,
    /// `V = x^2/2`: regular constraint, the whole of `S` is attracting.
    Morse,
    Fold,
    Cusp,
    Swallowtail,
    EllipticUmbilic,
    HyperbolicUmbilic,
    Butterfly,
    ParabolicUmbilic,
}

impl FamilyTag {
    /// Number of fast variables.
    pub fn fast_dim(self) -> usize {
        match self {
            FamilyTag::EllipticUmbilic
            | FamilyTag::HyperbolicUmbilic
            | FamilyTag::ParabolicUmbilic => 2,
            _ => 1,
        }
    }

    /// Number of slow parameters the potential actually reads.
    pub fn codim(self) -> usize {
        match self {
            FamilyTag::NonCritical | FamilyTag::Morse => 0,
            FamilyTag::Fold => 1,
            FamilyTag::Cusp => 2,
            FamilyTag::Swallowtail
            | FamilyTag::EllipticUmbilic
            | FamilyTag::HyperbolicUmbilic => 3,
            FamilyTag::Butterfly | FamilyTag::ParabolicUmbilic => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::NonCritical => "non_critical",
            FamilyTag::Morse => "morse",
            FamilyTag::Fold => "fold",
            FamilyTag::Cusp => "cusp",
            FamilyTag::Swallowtail => "swallowtail",
            FamilyTag::EllipticUmbilic => "elliptic_umbilic",
            FamilyTag::HyperbolicUmbilic => "hyperbolic_umbilic",
            FamilyTag::Butterfly => "butterfly",
            FamilyTag::ParabolicUmbilic => "parabolic_umbilic",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let tag = match name {
            "non_critical" => FamilyTag::NonCritical,
            "morse" => FamilyTag::Morse,
            "fold" => FamilyTag::Fold,
            "cusp" => FamilyTag::Cusp,
            "swallowtail" => FamilyTag::Swallowtail,
            "elliptic_umbilic" => FamilyTag::EllipticUmbilic,
            "hyperbolic_umbilic" => FamilyTag::HyperbolicUmbilic,
            "butterfly" => FamilyTag::Butterfly,
            "parabolic_umbilic" => FamilyTag::ParabolicUmbilic,
            other => return Err(CdeError::Invalid(format!("unknown family `{other}`"))),
        };
        Ok(tag)
    }
}

/// A potential family together with the ambient number of slow parameters.
///
/// `slow_dim` may exceed the codimension; the extra parameters are inert in
/// the potential but still carried by points, charts and slow drifts. That is
/// how the low-codimension families sit inside a common three-parameter
/// context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatastropheFamily {
    pub tag: FamilyTag,
    pub slow_dim: usize,
}

impl CatastropheFamily {
    /// Family with its canonical number of slow parameters (three for the
    /// parameterless `Morse`/`NonCritical`, so they embed in the common
    /// three-parameter setting; the codimension otherwise).
    pub fn new(tag: FamilyTag) -> Self {
        let slow_dim = tag.codim().max(match tag {
            FamilyTag::NonCritical | FamilyTag::Morse => 3,
            _ => 0,
        });
        CatastropheFamily { tag, slow_dim }
    }

    pub fn with_slow_dim(tag: FamilyTag, slow_dim: usize) -> Result<Self> {
        if slow_dim < tag.codim() {
            return Err(CdeError::Dimension(format!(
                "{} needs at least {} slow parameters, got {slow_dim}",
                tag.name(),
                tag.codim()
            )));
        }
        if slow_dim > 4 {
            return Err(CdeError::Dimension(format!(
                "at most 4 slow parameters supported, got {slow_dim}"
            )));
        }
        Ok(CatastropheFamily { tag, slow_dim })
    }

    pub fn fast_dim(&self) -> usize {
        self.tag.fast_dim()
    }

    /// Total phase-space dimension (fast + slow).
    pub fn total_dim(&self) -> usize {
        self.tag.fast_dim() + self.slow_dim
    }
}

/// A point of the total space: fast coordinates first, then slow parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalPoint {
    pub fast: Vec<f64>,
    pub slow: Vec<f64>,
}

impl TotalPoint {
    pub fn new(fast: Vec<f64>, slow: Vec<f64>) -> Self {
        TotalPoint { fast, slow }
    }

    pub fn check_dims(&self, family: &CatastropheFamily) -> Result<()> {
        if self.fast.len() != family.fast_dim() || self.slow.len() != family.slow_dim {
            return Err(CdeError::Dimension(format!(
                "point has {}+{} coordinates, {} with {} slow parameters needs {}+{}",
                self.fast.len(),
                self.slow.len(),
                family.tag.name(),
                family.slow_dim,
                family.fast_dim(),
                family.slow_dim
            )));
        }
        Ok(())
    }

    /// All coordinates in fast-then-slow order.
    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.fast.clone();
        v.extend_from_slice(&self.slow);
        v
    }
}

/// `V` at a point. Slow parameters beyond the codimension are ignored.
pub fn eval_potential(family: &CatastropheFamily, p: &TotalPoint) -> Result<f64> {
    p.check_dims(family)?;
    let f = &p.fast;
    let s = &p.slow;
    let v = match family.tag {
        FamilyTag::NonCritical => f[0],
        FamilyTag::Morse => 0.5 * f[0] * f[0],
        FamilyTag::Fold => {
            let x = f[0];
            x * x * x / 3.0 + s[0] * x
        }
        FamilyTag::Cusp => {
            let x = f[0];
            x * x * x * x / 4.0 + 0.5 * s[0] * x * x + s[1] * x
        }
        FamilyTag::Swallowtail => {
            let x = f[0];
            x.powi(5) / 5.0 + s[0] * x * x * x / 3.0 + 0.5 * s[1] * x * x + s[2] * x
        }
        FamilyTag::EllipticUmbilic => {
            let (x, y) = (f[0], f[1]);
            x * x * x - 3.0 * x * y * y + s[0] * (x * x + y * y) + s[1] * x + s[2] * y
        }
        FamilyTag::HyperbolicUmbilic => {
            let (x, y) = (f[0], f[1]);
            x * x * x + y * y * y + s[0] * x * y + s[1] * x + s[2] * y
        }
        FamilyTag::Butterfly => {
            let x = f[0];
            x.powi(6) / 6.0 + s[0] * x.powi(4) / 4.0 + s[1] * x.powi(3) / 3.0
                + 0.5 * s[2] * x * x
                + s[3] * x
        }
        FamilyTag::ParabolicUmbilic => {
            let (x, y) = (f[0], f[1]);
            x * x * y + y.powi(4) + s[0] * x * x + s[1] * y * y + s[2] * x + s[3] * y
        }
    };
    Ok(v)
}

/// Gradient of `V` in the fast variables only.
pub fn grad_fast(family: &CatastropheFamily, p: &TotalPoint) -> Result<Vec<f64>> {
    p.check_dims(family)?;
    let f = &p.fast;
    let s = &p.slow;
    let g = match family.tag {
        FamilyTag::NonCritical => vec![1.0],
        FamilyTag::Morse => vec![f[0]],
        FamilyTag::Fold => vec![f[0] * f[0] + s[0]],
        FamilyTag::Cusp => {
            let x = f[0];
            vec![x * x * x + s[0] * x + s[1]]
        }
        FamilyTag::Swallowtail => {
            let x = f[0];
            vec![x * x * x * x + s[0] * x * x + s[1] * x + s[2]]
        }
        FamilyTag::EllipticUmbilic => {
            let (x, y) = (f[0], f[1]);
            vec![
                3.0 * x * x - 3.0 * y * y + 2.0 * s[0] * x + s[1],
                -6.0 * x * y + 2.0 * s[0] * y + s[2],
            ]
        }
        FamilyTag::HyperbolicUmbilic => {
            let (x, y) = (f[0], f[1]);
            vec![3.0 * x * x + s[0] * y + s[1], 3.0 * y * y + s[0] * x + s[2]]
        }
        FamilyTag::Butterfly => {
            let x = f[0];
            vec![x.powi(5) + s[0] * x * x * x + s[1] * x * x + s[2] * x + s[3]]
        }
        FamilyTag::ParabolicUmbilic => {
            let (x, y) = (f[0], f[1]);
            vec![
                2.0 * x * y + 2.0 * s[0] * x + s[2],
                x * x + 4.0 * y * y * y + 2.0 * s[1] * y + s[3],
            ]
        }
    };
    Ok(g)
}

/// Fast Hessian of `V`, row-major `fast_dim x fast_dim`.
pub fn hessian_fast(family: &CatastropheFamily, p: &TotalPoint) -> Result<Vec<Vec<f64>>> {
    p.check_dims(family)?;
    let f = &p.fast;
    let s = &p.slow;
    let h = match family.tag {
        FamilyTag::NonCritical => vec![vec![0.0]],
        FamilyTag::Morse => vec![vec![1.0]],
        FamilyTag::Fold => vec![vec![2.0 * f[0]]],
        FamilyTag::Cusp => vec![vec![3.0 * f[0] * f[0] + s[0]]],
        FamilyTag::Swallowtail => {
            let x = f[0];
            vec![vec![4.0 * x * x * x + 2.0 * s[0] * x + s[1]]]
        }
        FamilyTag::EllipticUmbilic => {
            let (x, y) = (f[0], f[1]);
            vec![
                vec![6.0 * x + 2.0 * s[0], -6.0 * y],
                vec![-6.0 * y, -6.0 * x + 2.0 * s[0]],
            ]
        }
        FamilyTag::HyperbolicUmbilic => {
            let (x, y) = (f[0], f[1]);
            vec![vec![6.0 * x, s[0]], vec![s[0], 6.0 * y]]
        }
        FamilyTag::Butterfly => {
            let x = f[0];
            vec![vec![
                5.0 * x * x * x * x + 3.0 * s[0] * x * x + 2.0 * s[1] * x + s[2],
            ]]
        }
        FamilyTag::ParabolicUmbilic => {
            let (x, y) = (f[0], f[1]);
            vec![
                vec![2.0 * y + 2.0 * s[0], 2.0 * x],
                vec![2.0 * x, 12.0 * y * y + 2.0 * s[1]],
            ]
        }
    };
    Ok(h)
}

/// Eigenvalues of a symmetric 1x1 or 2x2 matrix, ascending.
pub fn sym_eigenvalues(h: &[Vec<f64>]) -> Vec<f64> {
    match h.len() {
        1 => vec![h[0][0]],
        2 => {
            let (a, b, d) = (h[0][0], h[0][1], h[1][1]);
            let tr = a + d;
            let disc = ((a - d) * (a - d) + 4.0 * b * b).sqrt();
            vec![0.5 * (tr - disc), 0.5 * (tr + disc)]
        }
        n => panic!("symmetric eigensolve only for n<=2, got {n}"),
    }
}

/// Eigenvalue/unit-eigenvector pairs of a symmetric 1x1 or 2x2 matrix,
/// eigenvalues ascending.
pub fn sym_eigenpairs(h: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
    match h.len() {
        1 => vec![(h[0][0], vec![1.0])],
        2 => {
            let (a, b, d) = (h[0][0], h[0][1], h[1][1]);
            sym_eigenvalues(h)
                .into_iter()
                .map(|lam| {
                    // (lam - d, b) and (b, lam - a) both solve (H - lam) v = 0;
                    // take the better conditioned one
                    let v1 = [lam - d, b];
                    let v2 = [b, lam - a];
                    let n1 = v1[0].hypot(v1[1]);
                    let n2 = v2[0].hypot(v2[1]);
                    let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
                    if n == 0.0 {
                        // multiple of the identity: any direction works
                        (lam, vec![1.0, 0.0])
                    } else {
                        (lam, vec![v[0] / n, v[1] / n])
                    }
                })
                .collect()
        }
        n => panic!("symmetric eigensolve only for n<=2, got {n}"),
    }
}

/// Where a point sits relative to the constraint set and its attracting part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attracting {
    /// On the constraint with positive-definite Hessian.
    Interior,
    /// On the constraint with a near-zero Hessian eigenvalue (the fold locus).
    Boundary,
    /// Off the constraint, or on it with a negative Hessian direction.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetMembership {
    /// `max_i |dV/dx_i|` at the point.
    pub residual: f64,
    pub on_constraint: bool,
    /// Hessian degenerate to tolerance. Together with `on_constraint` this is
    /// membership in the singular locus `B`.
    pub singular: bool,
    pub attracting: Attracting,
    /// Fast Hessian spectrum, ascending.
    pub hessian_eigenvalues: Vec<f64>,
}

/// Membership verdict from a gradient and fast Hessian, tolerance `tol` on
/// both the gradient residual and the Hessian spectrum.
pub fn classify_from_grad_hess(g: &[f64], h: &[Vec<f64>], tol: f64) -> SetMembership {
    let residual = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let on_constraint = residual <= tol;
    let eigs = sym_eigenvalues(h);
    let singular = eigs.iter().any(|e| e.abs() <= tol);
    let min_eig = eigs[0];
    let attracting = if !on_constraint || min_eig < -tol {
        Attracting::Outside
    } else if min_eig <= tol {
        Attracting::Boundary
    } else {
        Attracting::Interior
    };
    SetMembership {
        residual,
        on_constraint,
        singular,
        attracting,
        hessian_eigenvalues: eigs,
    }
}

/// Classify a point against `S`, `S_min` and `B`.
pub fn classify_membership(
    family: &CatastropheFamily,
    p: &TotalPoint,
    tol: f64,
) -> Result<SetMembership> {
    let g = grad_fast(family, p)?;
    let h = hessian_fast(family, p)?;
    Ok(classify_from_grad_hess(&g, &h, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Monomial tables (exponents of x, y, a, b, c, d -> coefficient) written
    // out independently of the closed-form eval above.
    fn monomials(tag: FamilyTag) -> Vec<([usize; 6], f64)> {
        match tag {
            FamilyTag::NonCritical => vec![([1, 0, 0, 0, 0, 0], 1.0)],
            FamilyTag::Morse => vec![([2, 0, 0, 0, 0, 0], 0.5)],
            FamilyTag::Fold => vec![([3, 0, 0, 0, 0, 0], 1.0 / 3.0), ([1, 0, 1, 0, 0, 0], 1.0)],
            FamilyTag::Cusp => vec![
                ([4, 0, 0, 0, 0, 0], 0.25),
                ([2, 0, 1, 0, 0, 0], 0.5),
                ([1, 0, 0, 1, 0, 0], 1.0),
            ],
            FamilyTag::Swallowtail => vec![
                ([5, 0, 0, 0, 0, 0], 0.2),
                ([3, 0, 1, 0, 0, 0], 1.0 / 3.0),
                ([2, 0, 0, 1, 0, 0], 0.5),
                ([1, 0, 0, 0, 1, 0], 1.0),
            ],
            FamilyTag::EllipticUmbilic => vec![
                ([3, 0, 0, 0, 0, 0], 1.0),
                ([1, 2, 0, 0, 0, 0], -3.0),
                ([2, 0, 1, 0, 0, 0], 1.0),
                ([0, 2, 1, 0, 0, 0], 1.0),
                ([1, 0, 0, 1, 0, 0], 1.0),
                ([0, 1, 0, 0, 1, 0], 1.0),
            ],
            FamilyTag::HyperbolicUmbilic => vec![
                ([3, 0, 0, 0, 0, 0], 1.0),
                ([0, 3, 0, 0, 0, 0], 1.0),
                ([1, 1, 1, 0, 0, 0], 1.0),
                ([1, 0, 0, 1, 0, 0], 1.0),
                ([0, 1, 0, 0, 1, 0], 1.0),
            ],
            FamilyTag::Butterfly => vec![
                ([6, 0, 0, 0, 0, 0], 1.0 / 6.0),
                ([4, 0, 1, 0, 0, 0], 0.25),
                ([3, 0, 0, 1, 0, 0], 1.0 / 3.0),
                ([2, 0, 0, 0, 1, 0], 0.5),
                ([1, 0, 0, 0, 0, 1], 1.0),
            ],
            FamilyTag::ParabolicUmbilic => vec![
                ([2, 1, 0, 0, 0, 0], 1.0),
                ([0, 4, 0, 0, 0, 0], 1.0),
                ([2, 0, 1, 0, 0, 0], 1.0),
                ([0, 2, 0, 1, 0, 0], 1.0),
                ([1, 0, 0, 0, 1, 0], 1.0),
                ([0, 1, 0, 0, 0, 1], 1.0),
            ],
        }
    }

    fn oracle_eval(family: &CatastropheFamily, p: &TotalPoint) -> f64 {
        let mut vars = [0.0; 6];
        for (i, &x) in p.fast.iter().enumerate() {
            vars[i] = x;
        }
        // y slot stays 0 for one-variable families
        for (j, &a) in p.slow.iter().enumerate() {
            vars[2 + j] = a;
        }
        monomials(family.tag)
            .iter()
            .map(|(e, c)| c * vars.iter().zip(e).map(|(v, &k)| v.powi(k as i32)).product::<f64>())
            .sum()
    }

    fn all_tags() -> Vec<FamilyTag> {
        vec![
            FamilyTag::NonCritical,
            FamilyTag::Morse,
            FamilyTag::Fold,
            FamilyTag::Cusp,
            FamilyTag::Swallowtail,
            FamilyTag::EllipticUmbilic,
            FamilyTag::HyperbolicUmbilic,
            FamilyTag::Butterfly,
            FamilyTag::ParabolicUmbilic,
        ]
    }

    fn random_point(rng: &mut ChaCha8Rng, family: &CatastropheFamily) -> TotalPoint {
        TotalPoint::new(
            (0..family.fast_dim()).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            (0..family.slow_dim).map(|_| rng.gen_range(-2.0..2.0)).collect(),
        )
    }

    #[test]
    fn eval_matches_monomial_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for tag in all_tags() {
            let fam = CatastropheFamily::new(tag);
            for _ in 0..50 {
                let p = random_point(&mut rng, &fam);
                let got = eval_potential(&fam, &p).unwrap();
                assert_relative_eq!(got, oracle_eval(&fam, &p), max_relative = 1e-12, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hyperbolic_umbilic_at_ones() {
        let fam = CatastropheFamily::new(FamilyTag::HyperbolicUmbilic);
        let p = TotalPoint::new(vec![1.0, 1.0], vec![1.0, 1.0, 1.0]);
        assert_relative_eq!(eval_potential(&fam, &p).unwrap(), 5.0);
    }

    #[test]
    fn padding_parameters_are_inert() {
        let cusp2 = CatastropheFamily::with_slow_dim(FamilyTag::Cusp, 2).unwrap();
        let cusp3 = CatastropheFamily::with_slow_dim(FamilyTag::Cusp, 3).unwrap();
        let p2 = TotalPoint::new(vec![0.7], vec![-1.0, 0.3]);
        let p3 = TotalPoint::new(vec![0.7], vec![-1.0, 0.3, 17.0]);
        assert_relative_eq!(
            eval_potential(&cusp2, &p2).unwrap(),
            eval_potential(&cusp3, &p3).unwrap()
        );
        assert_eq!(grad_fast(&cusp2, &p2).unwrap(), grad_fast(&cusp3, &p3).unwrap());
    }

    fn fd_grad(family: &CatastropheFamily, p: &TotalPoint) -> Vec<f64> {
        let h = 1e-5;
        (0..family.fast_dim())
            .map(|i| {
                let mut hi = p.clone();
                let mut lo = p.clone();
                hi.fast[i] += h;
                lo.fast[i] -= h;
                (eval_potential(family, &hi).unwrap() - eval_potential(family, &lo).unwrap())
                    / (2.0 * h)
            })
            .collect()
    }

    fn fd_hessian(family: &CatastropheFamily, p: &TotalPoint) -> Vec<Vec<f64>> {
        let h = 1e-4;
        (0..family.fast_dim())
            .map(|i| {
                let mut hi = p.clone();
                let mut lo = p.clone();
                hi.fast[i] += h;
                lo.fast[i] -= h;
                let gh = grad_fast(family, &hi).unwrap();
                let gl = grad_fast(family, &lo).unwrap();
                gh.iter().zip(&gl).map(|(a, b)| (a - b) / (2.0 * h)).collect()
            })
            .collect()
    }

    #[test]
    fn grad_and_hessian_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for tag in all_tags() {
            let fam = CatastropheFamily::new(tag);
            for _ in 0..20 {
                let p = random_point(&mut rng, &fam);
                let g = grad_fast(&fam, &p).unwrap();
                for (gi, oi) in g.iter().zip(fd_grad(&fam, &p)) {
                    assert_relative_eq!(*gi, oi, max_relative = 1e-6, epsilon = 1e-6);
                }
                let hess = hessian_fast(&fam, &p).unwrap();
                let fd = fd_hessian(&fam, &p);
                for i in 0..fam.fast_dim() {
                    for j in 0..fam.fast_dim() {
                        assert_relative_eq!(hess[i][j], fd[i][j], max_relative = 1e-5, epsilon = 1e-5);
                        assert_relative_eq!(hess[i][j], hess[j][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn membership_heartbeat_fold_point() {
        // Cusp at a = -1: the fold point (x, a, b) = (1/sqrt3, -1, 2/(3 sqrt3))
        // lies on the constraint with a vanishing Hessian.
        let fam = CatastropheFamily::new(FamilyTag::Cusp);
        let x = 1.0 / 3.0_f64.sqrt();
        let p = TotalPoint::new(vec![x], vec![-1.0, 2.0 / (3.0 * 3.0_f64.sqrt())]);
        let m = classify_membership(&fam, &p, 1e-9).unwrap();
        assert!(m.on_constraint);
        assert!(m.singular);
        assert_eq!(m.attracting, Attracting::Boundary);
    }

    #[test]
    fn membership_interior_and_outside() {
        let fam = CatastropheFamily::new(FamilyTag::Cusp);
        // x = 1 on x^3 + a x + b = 0 with a = -1 forces b = 0; Hessian 3 - 1 > 0.
        let interior = TotalPoint::new(vec![1.0], vec![-1.0, 0.0]);
        let m = classify_membership(&fam, &interior, 1e-9).unwrap();
        assert_eq!(m.attracting, Attracting::Interior);
        assert!(!m.singular);

        // x = 0 at (a, b) = (-1, 0) is on the constraint but a local maximum.
        let repelling = TotalPoint::new(vec![0.0], vec![-1.0, 0.0]);
        let m = classify_membership(&fam, &repelling, 1e-9).unwrap();
        assert!(m.on_constraint);
        assert_eq!(m.attracting, Attracting::Outside);

        let off = TotalPoint::new(vec![0.0], vec![-1.0, 0.5]);
        let m = classify_membership(&fam, &off, 1e-9).unwrap();
        assert!(!m.on_constraint);
        assert_eq!(m.attracting, Attracting::Outside);
    }

    #[test]
    fn swallowtail_origin_fiber_is_singular() {
        // x = 0 with (a, b, c) = (-1, 0, 0): gradient x^4 - x^2 vanishes and
        // the Hessian 4x^3 - 2x vanishes too, so this sits on B.
        let fam = CatastropheFamily::new(FamilyTag::Swallowtail);
        let p = TotalPoint::new(vec![0.0], vec![-1.0, 0.0, 0.0]);
        let m = classify_membership(&fam, &p, 1e-9).unwrap();
        assert!(m.on_constraint && m.singular);
        assert_eq!(m.attracting, Attracting::Boundary);
    }

    #[test]
    fn non_critical_has_no_constraint_points() {
        let fam = CatastropheFamily::new(FamilyTag::NonCritical);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_point(&mut rng, &fam);
            let m = classify_membership(&fam, &p, 1e-9).unwrap();
            assert!(!m.on_constraint);
            assert_eq!(m.attracting, Attracting::Outside);
        }
    }

    #[test]
    fn dimension_checks() {
        let fam = CatastropheFamily::new(FamilyTag::Cusp);
        let bad = TotalPoint::new(vec![0.0, 0.0], vec![0.0, 0.0]);
        assert!(eval_potential(&fam, &bad).is_err());
        assert!(CatastropheFamily::with_slow_dim(FamilyTag::Swallowtail, 2).is_err());
        assert!(CatastropheFamily::with_slow_dim(FamilyTag::Cusp, 5).is_err());
    }
}
