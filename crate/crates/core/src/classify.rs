//! Recognition of desingularized slow drifts against the catalogue of
//! polynomial normal forms, plus equilibrium search on the adjugate field.
//!
//! Every label names a germ `(potential family, slow drift)` up to the
//! equivalence that preserves the constraint surface and the singular locus.
//! `normal_form_instance` writes the representative drift down as a concrete
//! system; `classify_cde` walks the decision tree backwards: flow-box tests
//! on the drift at the origin first, then the spectrum of the linearized
//! adjugate field, and for the umbilic families a symbolic division by the
//! singular determinant to expose the bounded quotient flow.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::chart::ChartPoint;
use crate::desing::{
    desingularize, desingularized_field_generic, CdeSpec, Desingularization, PolynomialMap,
};
use crate::error::{CdeError, Result};
use crate::family::{CatastropheFamily, FamilyTag, TotalPoint};
use crate::par::par_map;
use crate::poly::MultiPoly;
use crate::strata::{stratum_chart, StratumLabel};
use crate::tol::Tolerances;

// ---------------------------------------------------------------------------
// The catalogue

/// Labels for the local models of a three-parameter constrained system.
///
/// `Regular*` variants sit at a point where the constraint is a graph and the
/// reduced flow is an ordinary hyperbolic (or transverse) equilibrium; the
/// remaining variants sit on the singular locus of the named family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalFormLabel {
    RegularFlowBox,
    RegularSource,
    RegularSaddle1,
    RegularSaddle2,
    RegularSink,
    FoldFlowBox1,
    FoldFlowBox2,
    FoldSource,
    FoldSink,
    FoldSaddle,
    CuspFlowBox,
    CuspDualFlowBox,
    SwallowtailFlowBox,
    HyperbolicCenterSaddle,
    HyperbolicCenter,
    EllipticCenterSaddle,
}

pub const ALL_LABELS: [NormalFormLabel; 16] = [
    NormalFormLabel::RegularFlowBox,
    NormalFormLabel::RegularSource,
    NormalFormLabel::RegularSaddle1,
    NormalFormLabel::RegularSaddle2,
    NormalFormLabel::RegularSink,
    NormalFormLabel::FoldFlowBox1,
    NormalFormLabel::FoldFlowBox2,
    NormalFormLabel::FoldSource,
    NormalFormLabel::FoldSink,
    NormalFormLabel::FoldSaddle,
    NormalFormLabel::CuspFlowBox,
    NormalFormLabel::CuspDualFlowBox,
    NormalFormLabel::SwallowtailFlowBox,
    NormalFormLabel::HyperbolicCenterSaddle,
    NormalFormLabel::HyperbolicCenter,
    NormalFormLabel::EllipticCenterSaddle,
];

impl NormalFormLabel {
    pub fn name(&self) -> &'static str {
        match self {
            NormalFormLabel::RegularFlowBox => "regular/flow_box",
            NormalFormLabel::RegularSource => "regular/source",
            NormalFormLabel::RegularSaddle1 => "regular/saddle_1",
            NormalFormLabel::RegularSaddle2 => "regular/saddle_2",
            NormalFormLabel::RegularSink => "regular/sink",
            NormalFormLabel::FoldFlowBox1 => "fold/flow_box_1",
            NormalFormLabel::FoldFlowBox2 => "fold/flow_box_2",
            NormalFormLabel::FoldSource => "fold/source",
            NormalFormLabel::FoldSink => "fold/sink",
            NormalFormLabel::FoldSaddle => "fold/saddle",
            NormalFormLabel::CuspFlowBox => "cusp/flow_box",
            NormalFormLabel::CuspDualFlowBox => "cusp/dual_flow_box",
            NormalFormLabel::SwallowtailFlowBox => "swallowtail/flow_box",
            NormalFormLabel::HyperbolicCenterSaddle => "hyperbolic_umbilic/center_saddle",
            NormalFormLabel::HyperbolicCenter => "hyperbolic_umbilic/center",
            NormalFormLabel::EllipticCenterSaddle => "elliptic_umbilic/center_saddle",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        ALL_LABELS
            .iter()
            .copied()
            .find(|l| l.name() == name)
            .ok_or_else(|| CdeError::Invalid(format!("unknown normal form `{name}`")))
    }

    /// Potential family the representative lives in.
    pub fn family_tag(&self) -> FamilyTag {
        use NormalFormLabel::*;
        match self {
            RegularFlowBox | RegularSource | RegularSaddle1 | RegularSaddle2 | RegularSink => {
                FamilyTag::Morse
            }
            FoldFlowBox1 | FoldFlowBox2 | FoldSource | FoldSink | FoldSaddle => FamilyTag::Fold,
            CuspFlowBox | CuspDualFlowBox => FamilyTag::Cusp,
            SwallowtailFlowBox => FamilyTag::Swallowtail,
            HyperbolicCenterSaddle | HyperbolicCenter => FamilyTag::HyperbolicUmbilic,
            EllipticCenterSaddle => FamilyTag::EllipticUmbilic,
        }
    }
}

/// Free constants in the degenerate representatives. The defaults pick the
/// `+` sign everywhere and a small modulus for the cubic correction terms.
///
/// The three series maps only matter for the hyperbolic center drift, whose
/// tail is a finite sum over index pairs `(l, j)`; absent entries default
/// to `1.0`.
#[derive(Debug, Clone)]
pub struct NormalFormParams {
    /// Leading modulus sign, `+1` or `-1`.
    pub rho: f64,
    /// Cubic correction modulus.
    pub delta: f64,
    /// Truncation order of the center tail, at least 2.
    pub k: u16,
    /// Sign choice in the center-saddle drifts.
    pub plus_sign: bool,
    pub rho_series: BTreeMap<(u16, u16), f64>,
    pub eta_series: BTreeMap<(u16, u16), f64>,
    pub sigma_series: BTreeMap<(u16, u16), f64>,
}

impl Default for NormalFormParams {
    fn default() -> Self {
        NormalFormParams {
            rho: 1.0,
            delta: 0.1,
            k: 3,
            plus_sign: true,
            rho_series: BTreeMap::new(),
            eta_series: BTreeMap::new(),
            sigma_series: BTreeMap::new(),
        }
    }
}

impl NormalFormParams {
    fn validate(&self, label: NormalFormLabel) -> Result<()> {
        if self.rho != 1.0 && self.rho != -1.0 {
            return Err(CdeError::Invalid(format!(
                "rho must be +1 or -1, got {}",
                self.rho
            )));
        }
        if self.k < 2 {
            return Err(CdeError::Invalid(format!(
                "series truncation k must be at least 2, got {}",
                self.k
            )));
        }
        let has_series = !self.rho_series.is_empty()
            || !self.eta_series.is_empty()
            || !self.sigma_series.is_empty();
        if has_series && label != NormalFormLabel::HyperbolicCenter {
            return Err(CdeError::Invalid(
                "series coefficients only enter the hyperbolic center drift".into(),
            ));
        }
        Ok(())
    }

    fn series(map: &BTreeMap<(u16, u16), f64>, l: u16, j: u16) -> f64 {
        map.get(&(l, j)).copied().unwrap_or(1.0)
    }
}

// ---------------------------------------------------------------------------
// Representative systems

fn var(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn konst(n: usize, c: f64) -> MultiPoly {
    MultiPoly::constant(n, c)
}

/// Concrete system whose classification is the given label.
pub fn normal_form_instance(
    label: NormalFormLabel,
    params: &NormalFormParams,
) -> Result<CdeSpec> {
    use NormalFormLabel::*;
    params.validate(label)?;
    let s = if params.plus_sign { 1.0 } else { -1.0 };
    let (rho, delta) = (params.rho, params.delta);

    // One-fast-variable families share the coordinate order (x, a, b, c).
    let n4 = 4;
    let (a, b, c) = (var(n4, 1), var(n4, 2), var(n4, 3));
    let x = var(n4, 0);

    let family = |tag| CatastropheFamily::with_slow_dim(tag, 3);
    let build = |tag, g: PolynomialMap| CdeSpec::new(family(tag)?, g);

    match label {
        RegularFlowBox => build(
            FamilyTag::Morse,
            vec![konst(n4, 1.0), konst(n4, 0.0), konst(n4, 0.0)],
        ),
        RegularSource => build(FamilyTag::Morse, vec![a, b, c]),
        RegularSaddle1 => build(FamilyTag::Morse, vec![a, b, c.scale(-1.0)]),
        RegularSaddle2 => build(FamilyTag::Morse, vec![a, b.scale(-1.0), c.scale(-1.0)]),
        RegularSink => build(
            FamilyTag::Morse,
            vec![a.scale(-1.0), b.scale(-1.0), c.scale(-1.0)],
        ),
        FoldFlowBox1 => build(
            FamilyTag::Fold,
            vec![konst(n4, 1.0), konst(n4, 0.0), konst(n4, 0.0)],
        ),
        FoldFlowBox2 => build(
            FamilyTag::Fold,
            vec![konst(n4, -1.0), konst(n4, 0.0), konst(n4, 0.0)],
        ),
        FoldSource | FoldSink | FoldSaddle => {
            // Shared tail: the drift is symmetric across {b = c} up to a
            // modulus term that vanishes on that plane.
            let d = c.sub(&b);
            let q = d.pow(2).mul(&konst(n4, rho).add(&d.scale(delta)));
            let half = konst(n4, 0.5);
            let f_b = half.sub(&q);
            let f_c = half.add(&q);
            let f_a = match label {
                FoldSource => x.scale(3.0).add(&b.scale(0.5)).add(&c.scale(0.5)),
                FoldSink => x.scale(-3.0).add(&b.scale(0.5)).add(&c.scale(0.5)),
                _ => b.scale(-0.5).add(&c.scale(-0.5)),
            };
            build(FamilyTag::Fold, vec![f_a, f_b, f_c])
        }
        CuspFlowBox => build(
            FamilyTag::Cusp,
            vec![konst(n4, 0.0), konst(n4, 1.0), konst(n4, 0.0)],
        ),
        CuspDualFlowBox => CdeSpec::with_sign(
            family(FamilyTag::Cusp)?,
            vec![konst(n4, 0.0), konst(n4, 1.0), konst(n4, 0.0)],
            true,
        ),
        SwallowtailFlowBox => build(
            FamilyTag::Swallowtail,
            vec![konst(n4, 0.0), konst(n4, 0.0), konst(n4, 1.0)],
        ),
        HyperbolicCenterSaddle => {
            // Drift tangent to the singular surface with a saddle quotient.
            let n = 5;
            let (x, y, a) = (var(n, 0), var(n, 1), var(n, 2));
            let phi = a.pow(2).scale(s / 36.0).add(&a.pow(3).scale(delta / 216.0));
            let f_a = phi.scale(6.0);
            let edge = x.scale(6.0).add(&y.scale(6.0)).sub(&a);
            let f_bc = x
                .mul(&y)
                .scale(6.0)
                .sub(&a.pow(2).scale(1.0 / 6.0))
                .sub(&phi.mul(&edge));
            CdeSpec::new(
                CatastropheFamily::new(FamilyTag::HyperbolicUmbilic),
                vec![f_a, f_bc.clone(), f_bc],
            )
        }
        HyperbolicCenter => hyperbolic_center_instance(params),
        EllipticCenterSaddle => {
            let n = 5;
            let (x, y, a) = (var(n, 0), var(n, 1), var(n, 2));
            let big_a = a.pow(2).scale(s / 3.0).add(&a.pow(3).scale(delta / 9.0));
            // det/6 for this family.
            let big_b = a
                .pow(2)
                .scale(2.0 / 3.0)
                .sub(&x.pow(2).scale(6.0))
                .sub(&y.pow(2).scale(6.0));
            let inv_rt2 = 1.0 / 2.0_f64.sqrt();
            let f_b = big_b.sub(&x.scale(2.0).mul(&big_a)).scale(inv_rt2);
            let f_c = big_b.sub(&y.scale(2.0).mul(&big_a)).scale(inv_rt2);
            CdeSpec::new(
                CatastropheFamily::new(FamilyTag::EllipticUmbilic),
                vec![big_a, f_b, f_c],
            )
        }
    }
}

/// The hyperbolic center drift: a finite tail of surface-tangent corrections
/// indexed by `(l, j)`, one parity-matching `j` per order `l`.
fn hyperbolic_center_instance(params: &NormalFormParams) -> Result<CdeSpec> {
    let n = 5;
    let (x, y, a) = (var(n, 0), var(n, 1), var(n, 2));
    let a6 = a.scale(1.0 / 6.0);
    // Invariant combination vanishing on the singular surface to second order.
    let delta_poly = a
        .scale(1.0 / 108.0)
        .mul(
            &a.pow(2)
                .add(&x.pow(2).add(&y.pow(2)).scale(18.0))
                .add(&x.add(&y).mul(&a).scale(6.0)),
        );

    let mut even_sum = MultiPoly::zero(n);
    let mut tail_b = MultiPoly::zero(n);
    let mut tail_c = MultiPoly::zero(n);
    for l in 2..=params.k {
        if l % 2 == 0 {
            let j = l / 2;
            let amp = NormalFormParams::series(&params.rho_series, l, j);
            let term = a6.pow(l - j).mul(&delta_poly.pow(j)).scale(amp);
            even_sum = even_sum.add(&term);
        } else {
            let j = (l - 1) / 2;
            // Shared power (a/6)^(l-j-1) Δ^j; with l = 2j+1 the exponent is
            // exactly j, so no negative powers can appear.
            let eta = NormalFormParams::series(&params.eta_series, l, j);
            let sigma = NormalFormParams::series(&params.sigma_series, l, j);
            let c_pol = a6.add(&x).scale(eta).add(&a6.add(&y).scale(sigma));
            let c_bar = a6.add(&y).scale(eta).sub(&a6.add(&x).scale(sigma));
            let b_pol = x.scale(-6.0).mul(&c_pol).sub(&a.mul(&c_bar));
            let b_bar = a.mul(&c_pol).scale(-1.0).sub(&y.scale(6.0).mul(&c_bar));
            let shared = a6.pow(j).mul(&delta_poly.pow(j));
            tail_b = tail_b.add(&shared.mul(&b_pol));
            tail_c = tail_c.add(&shared.mul(&b_bar));
        }
    }

    let xy6 = x.mul(&y).scale(6.0);
    let asq6 = a.pow(2).scale(1.0 / 6.0);
    let f_a = even_sum.scale(6.0);
    let f_b = asq6
        .sub(&xy6)
        .add(&x.scale(6.0).add(&a).sub(&y.scale(6.0)).mul(&even_sum))
        .add(&tail_b);
    let f_c = xy6
        .sub(&asq6)
        .add(&y.scale(6.0).add(&a).sub(&x.scale(6.0)).mul(&even_sum))
        .add(&tail_c);
    CdeSpec::new(
        CatastropheFamily::new(FamilyTag::HyperbolicUmbilic),
        vec![f_a, f_b, f_c],
    )
}

// ---------------------------------------------------------------------------
// Spectra

/// Eigenvalue bookkeeping of a linearization, with a relative zero band.
#[derive(Debug, Clone)]
pub struct SpectrumClass {
    /// Eigenvalues as `(re, im)`, sorted by real then imaginary part.
    pub eigenvalues: Vec<(f64, f64)>,
    pub zero: usize,
    pub positive: usize,
    pub negative: usize,
    /// Conjugate pairs with negligible real part.
    pub imaginary_pairs: usize,
}

impl SpectrumClass {
    pub fn signature(&self) -> (usize, usize, usize, usize) {
        (self.zero, self.positive, self.negative, self.imaginary_pairs)
    }
}

fn inf_norm(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues through the characteristic polynomial for the dimensions the
/// catalogue actually produces. The closed route also sidesteps QR stalls
/// on exactly-zero linearizations (every flow box produces one).
fn eigenvalues_small(m: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    let quad = |p: f64, q: f64| -> [(f64, f64); 2] {
        // roots of λ² + pλ + q
        let disc = p * p - 4.0 * q;
        if disc >= 0.0 {
            let s = disc.sqrt();
            let r1 = if p >= 0.0 { (-p - s) / 2.0 } else { (-p + s) / 2.0 };
            let r2 = if r1.abs() > 0.0 { q / r1 } else { (-p + s) / 2.0 };
            [(r1, 0.0), (r2, 0.0)]
        } else {
            let im = (-disc).sqrt() / 2.0;
            [(-p / 2.0, -im), (-p / 2.0, im)]
        }
    };
    match m.len() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![(m[0][0], 0.0)]),
        2 => {
            let tr = m[0][0] + m[1][1];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            Ok(quad(-tr, det).to_vec())
        }
        3 => {
            let tr = m[0][0] + m[1][1] + m[2][2];
            let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0]
                + m[0][0] * m[2][2]
                - m[0][2] * m[2][0]
                + m[1][1] * m[2][2]
                - m[1][2] * m[2][1];
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            // char: λ³ − tr λ² + minors λ − det; odd degree guarantees a
            // real root, deflate by the largest for stability.
            let reals = crate::roots::real_roots(&[-det, minors, -tr, 1.0])?;
            let r = reals
                .iter()
                .copied()
                .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
                .ok_or_else(|| {
                    CdeError::Numerical("real cubic root lost to rounding".into())
                })?;
            let p = r - tr;
            let q = minors + r * p;
            let mut out = vec![(r, 0.0)];
            out.extend(quad(p, q));
            Ok(out)
        }
        dim => {
            // Characteristic polynomial by trace recursion, then a capped
            // simultaneous root iteration; linear convergence on multiple
            // roots is fine at the tolerance the zero band uses.
            let mat = DMatrix::from_fn(dim, dim, |i, j| m[i][j]);
            let mut power = mat.clone();
            let mut cs = Vec::with_capacity(dim);
            for k in 1..=dim {
                let ck = power.trace() / k as f64;
                cs.push(ck);
                if k < dim {
                    let mut shifted = power.clone();
                    for d in 0..dim {
                        shifted[(d, d)] -= ck;
                    }
                    power = &mat * shifted;
                }
            }
            // monic: λ^n - cs[0] λ^(n-1) - cs[1] λ^(n-2) - ... - cs[n-1]
            let mut monic = vec![1.0];
            monic.extend(cs.iter().map(|c| -c));
            Ok(durand_kerner(&monic))
        }
    }
}

/// All complex roots of a monic polynomial, coefficients descending. The
/// iteration count is fixed, so degenerate inputs cannot stall.
fn durand_kerner(monic: &[f64]) -> Vec<(f64, f64)> {
    use nalgebra::Complex;
    let n = monic.len() - 1;
    let radius = 1.0 + monic[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::new(radius * th.cos(), radius * th.sin())
        })
        .collect();
    let eval = |w: Complex<f64>| -> Complex<f64> {
        monic
            .iter()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * w + Complex::new(c, 0.0))
    };
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-13 * (1.0 + radius) {
            break;
        }
    }
    z.iter().map(|w| (w.re, w.im)).collect()
}

/// Count eigenvalue types of a square matrix. `tol` is scaled by
/// `1 + ||M||`, so the verdict is invariant under scaling the matrix well
/// away from the band edge.
pub fn classify_spectrum(m: &[Vec<f64>], tol: f64) -> Result<SpectrumClass> {
    let dim = m.len();
    if m.iter().any(|row| row.len() != dim) {
        return Err(CdeError::Dimension("spectrum of a non-square matrix".into()));
    }
    let band = tol * (1.0 + inf_norm(m));
    let mut eigenvalues = eigenvalues_small(m)?;
    eigenvalues.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut counts = (0usize, 0usize, 0usize, 0usize);
    for &(re, im) in &eigenvalues {
        if re > band {
            counts.1 += 1;
        } else if re < -band {
            counts.2 += 1;
        } else if im > band {
            // Count each conjugate pair once, at its upper member.
            counts.3 += 1;
        } else if im >= -band {
            counts.0 += 1;
        }
    }
    Ok(SpectrumClass {
        eigenvalues,
        zero: counts.0,
        positive: counts.1,
        negative: counts.2,
        imaginary_pairs: counts.3,
    })
}

/// Linearization of the adjugate field at the chart origin: central
/// differences at `fd_step` and `2 fd_step`, Richardson-combined.
pub fn linearize_origin(spec: &CdeSpec, tols: &Tolerances) -> Result<Vec<Vec<f64>>> {
    let dim = spec.family.slow_dim;
    let diff = |h: f64| -> Result<Vec<Vec<f64>>> {
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut up = vec![0.0; dim];
            up[j] = h;
            let fp = desingularized_field_generic(spec, &ChartPoint::new(up.clone()))?;
            up[j] = -h;
            let fm = desingularized_field_generic(spec, &ChartPoint::new(up))?;
            cols.push(
                fp.iter()
                    .zip(&fm)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect::<Vec<f64>>(),
            );
        }
        Ok(cols)
    };
    let d1 = diff(tols.fd_step)?;
    let d2 = diff(2.0 * tols.fd_step)?;
    let mut m = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            m[i][j] = (4.0 * d1[j][i] - d2[j][i]) / 3.0;
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Equilibria of the adjugate field

#[derive(Debug, Clone)]
pub struct Equilibrium {
    /// Chart coordinates (fast variables first, then the free parameters).
    pub chart: Vec<f64>,
    pub residual: f64,
    /// Whether the point lies on the singular locus, i.e. is a folded
    /// equilibrium rather than an ordinary one.
    pub on_singular: bool,
}

/// Newton search for zeros of the adjugate field from a grid of seeds.
/// Results are deduplicated and sorted lexicographically.
pub fn find_equilibria(
    spec: &CdeSpec,
    region: &[(f64, f64)],
    grid: usize,
    tols: &Tolerances,
) -> Result<Vec<Equilibrium>> {
    let ds = desingularize(spec)?;
    let dim = ds.chart.dim();
    if region.len() != dim {
        return Err(CdeError::Dimension(format!(
            "region has {} intervals, chart has dimension {dim}",
            region.len()
        )));
    }
    if grid < 1 {
        return Err(CdeError::Invalid("grid must be positive".into()));
    }
    let jac: Vec<Vec<MultiPoly>> = ds
        .field
        .iter()
        .map(|f| (0..dim).map(|j| f.partial(j)).collect())
        .collect();

    // Cell-center seeds, so symmetric regions do not start exactly on the
    // singular locus.
    let mut seeds = vec![vec![]];
    for &(lo, hi) in region {
        let mut next = Vec::with_capacity(seeds.len() * grid);
        for base in &seeds {
            for i in 0..grid {
                let mut s: Vec<f64> = base.clone();
                s.push(lo + (i as f64 + 0.5) * (hi - lo) / grid as f64);
                next.push(s);
            }
        }
        seeds = next;
    }
    let accept = 1e-12;
    let found: Vec<Option<Vec<f64>>> = par_map(&seeds, |seed| {
        newton_zero(&ds, &jac, seed, region, accept)
    });

    let mut hits: Vec<Vec<f64>> = found.into_iter().flatten().collect();
    hits.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut out: Vec<Equilibrium> = Vec::new();
    let det_scale = 1.0 + ds.chart.det.max_abs_coeff();
    for u in hits {
        if out
            .iter()
            .any(|e| e.chart.iter().zip(&u).all(|(a, b)| (a - b).abs() <= tols.dedup))
        {
            continue;
        }
        let residual = ds
            .field_at(&u)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let on_singular = ds.chart.det_at(&u).abs() <= tols.det_zero * det_scale;
        out.push(Equilibrium { chart: u, residual, on_singular });
    }
    Ok(out)
}

fn newton_zero(
    ds: &Desingularization,
    jac: &[Vec<MultiPoly>],
    seed: &[f64],
    region: &[(f64, f64)],
    accept: f64,
) -> Option<Vec<f64>> {
    let dim = seed.len();
    let mut u = seed.to_vec();
    for _ in 0..60 {
        let f = ds.field_at(&u);
        if f.iter().all(|v| v.abs() <= accept) {
            return Some(u);
        }
        let j = DMatrix::from_fn(dim, dim, |r, c| jac[r][c].eval(&u));
        let rhs = nalgebra::DVector::from_iterator(dim, f.iter().map(|v| -v));
        let step = j.lu().solve(&rhs)?;
        let norm = step.amax();
        let scale = if norm > 0.5 { 0.5 / norm } else { 1.0 };
        for (ui, si) in u.iter_mut().zip(step.iter()) {
            *ui += scale * si;
        }
        // Abandon runs that wander far outside the search box.
        for (ui, &(lo, hi)) in u.iter().zip(region) {
            let pad = 0.5 * (hi - lo);
            if *ui < lo - pad || *ui > hi + pad {
                return None;
            }
        }
        if !u.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Transversality of the drift against the projected singular locus

#[derive(Debug, Clone)]
pub struct TransversalityReport {
    pub samples: usize,
    /// Samples where the drift fell inside the angular band around the
    /// tangent plane of the projected fold locus.
    pub tangential: usize,
    pub min_angle: f64,
    pub ok: bool,
}

/// Sample the fold stratum and measure the angle between the slow drift and
/// the tangent plane of its parameter projection. Families without a
/// singular locus pass trivially.
pub fn transversality_report(
    spec: &CdeSpec,
    samples: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<TransversalityReport> {
    let tag = spec.family.tag;
    let slow = spec.family.slow_dim;
    if matches!(tag, FamilyTag::Morse | FamilyTag::NonCritical) {
        return Ok(TransversalityReport {
            samples: 0,
            tangential: 0,
            min_angle: std::f64::consts::FRAC_PI_2,
            ok: true,
        });
    }
    let canonical = CatastropheFamily::new(tag);
    let chart = stratum_chart(&canonical, StratumLabel::Fold)?;
    let codim = canonical.slow_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tangential = 0usize;
    let mut min_angle = std::f64::consts::FRAC_PI_2;
    let mut taken = 0usize;

    'outer: for _ in 0..samples {
        // Rejection-sample a well-interior chart point.
        let mut t = vec![0.0; chart.dim];
        let mut branch;
        let mut tries = 0;
        loop {
            for (ti, &(lo, hi)) in t.iter_mut().zip(&chart.window) {
                *ti = rng.gen_range(lo..hi);
            }
            branch = if chart.branches > 1 {
                rng.gen_range(0..chart.branches)
            } else {
                0
            };
            if chart.interior_margin(branch, &t) >= 0.05 {
                break;
            }
            tries += 1;
            if tries > 400 {
                continue 'outer;
            }
        }
        let base = chart.point(branch, &t)?;
        let mut slow_coords = base.slow.clone();
        while slow_coords.len() < slow {
            slow_coords.push(rng.gen_range(-1.0..1.0));
        }
        let p = TotalPoint::new(base.fast.clone(), slow_coords);
        let drift = spec.g_at(&p);
        let dnorm = drift.iter().map(|v| v * v).sum::<f64>().sqrt();
        taken += 1;
        if dnorm <= 1e-13 {
            tangential += 1;
            min_angle = 0.0;
            continue;
        }

        // Tangent directions of the projected fold locus: differentiate the
        // parameter part of the chart, then append the inert axes.
        let mut tangents: Vec<Vec<f64>> = Vec::new();
        let h = 1e-6;
        for i in 0..chart.dim {
            let mut tp = t.clone();
            tp[i] += h;
            let fp = chart.point(branch, &tp)?;
            tp[i] -= 2.0 * h;
            let fm = chart.point(branch, &tp)?;
            let mut dir = vec![0.0; slow];
            for k in 0..codim {
                dir[k] = (fp.slow[k] - fm.slow[k]) / (2.0 * h);
            }
            tangents.push(dir);
        }
        for k in codim..slow {
            let mut dir = vec![0.0; slow];
            dir[k] = 1.0;
            tangents.push(dir);
        }
        let normal = match hyperplane_normal(&tangents, slow) {
            Some(n) => n,
            None => continue,
        };
        let dot: f64 = drift.iter().zip(&normal).map(|(d, n)| d * n).sum();
        let angle = (dot.abs() / dnorm).clamp(0.0, 1.0).asin();
        min_angle = min_angle.min(angle);
        if angle < tols.transversality_angle {
            tangential += 1;
        }
    }
    Ok(TransversalityReport {
        samples: taken,
        tangential,
        min_angle,
        ok: tangential == 0,
    })
}

/// Unit normal of the span of `dim - 1` vectors in `dim` dimensions, via
/// Gram–Schmidt against the best-conditioned coordinate probe.
fn hyperplane_normal(tangents: &[Vec<f64>], dim: usize) -> Option<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for t in tangents {
        let mut v = t.clone();
        for b in &basis {
            let proj: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-10 {
            return None; // degenerate tangent frame
        }
        for vi in &mut v {
            *vi /= norm;
        }
        basis.push(v);
    }
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = 0.0;
    for probe in 0..dim {
        let mut v = vec![0.0; dim];
        v[probe] = 1.0;
        for b in &basis {
            let proj: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > best_norm {
            best_norm = norm;
            best = Some(v.iter().map(|x| x / norm).collect());
        }
    }
    best.filter(|_| best_norm > 1e-8)
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Debug, Clone)]
pub struct Classification {
    /// Matched catalogue entry, or `None` when the system is degenerate.
    pub verdict: Option<NormalFormLabel>,
    pub spectrum: SpectrumClass,
    pub generic: bool,
    pub notes: Vec<String>,
    pub equilibria: Vec<Equilibrium>,
    pub transversality: TransversalityReport,
}

impl Classification {
    pub fn label_string(&self) -> String {
        match self.verdict {
            Some(l) => l.name().to_string(),
            None => "not_generic".to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label_string(),
            "spectrum": self
                .spectrum
                .eigenvalues
                .iter()
                .map(|&(re, im)| json!([re, im]))
                .collect::<Vec<_>>(),
            "generic": self.generic,
            "notes": self.notes,
            "transversality": {
                "samples": self.transversality.samples,
                "tangential": self.transversality.tangential,
                "min_angle": self.transversality.min_angle,
                "ok": self.transversality.ok,
            },
        })
    }
}

/// Match a system against the catalogue.
///
/// The decision tree follows the structure of the catalogue itself: drift
/// components at the origin decide the flow-box cases, the spectrum of the
/// linearized adjugate field decides the hyperbolic ones, and the umbilic
/// degeneracies divide the field by the singular determinant and classify
/// the bounded quotient. A system matching no entry comes back with
/// `verdict: None` rather than an error.
pub fn classify_cde(spec: &CdeSpec, tols: &Tolerances) -> Result<Classification> {
    let tag = spec.family.tag;
    if matches!(
        tag,
        FamilyTag::NonCritical | FamilyTag::Butterfly | FamilyTag::ParabolicUmbilic
    ) {
        return Err(CdeError::Unsupported(format!(
            "no normal-form catalogue for the {} family",
            spec.family.tag.name()
        )));
    }
    let dim = spec.family.slow_dim;
    let origin = TotalPoint::new(vec![0.0; spec.family.fast_dim()], vec![0.0; dim]);
    let g0 = spec.g_at(&origin);
    let g_scale = spec
        .g
        .iter()
        .map(|p| p.max_abs_coeff())
        .fold(0.0f64, f64::max);
    let band = tols.equilibrium * (1.0 + g_scale);

    let mut notes = Vec::new();
    let region: Vec<(f64, f64)> = vec![(-2.0, 2.0); dim];
    let equilibria = find_equilibria(spec, &region, 6, tols)?;
    let folded = equilibria.iter().filter(|e| e.on_singular).count();
    if folded > 0 {
        notes.push(format!(
            "{folded} of {} equilibria sit on the singular locus (folded equilibria)",
            equilibria.len()
        ));
    }
    let transversality = transversality_report(spec, 50, 42, tols)?;
    if !transversality.ok {
        notes.push(format!(
            "drift within {:.1e} rad of the projected fold locus at {} of {} samples",
            tols.transversality_angle, transversality.tangential, transversality.samples
        ));
    }

    let m0 = linearize_origin(spec, tols)?;
    let mut spectrum = classify_spectrum(&m0, tols.spectrum_zero)?;
    let verdict: Option<NormalFormLabel> = match tag {
        FamilyTag::Morse => {
            if g0.iter().any(|v| v.abs() > band) {
                Some(NormalFormLabel::RegularFlowBox)
            } else if dim == 3 {
                // A complex pair with nonzero real part lands in the
                // positive/negative counts, so hyperbolic spirals match by
                // their stable/unstable splitting.
                match spectrum.signature() {
                    (0, 3, 0, 0) => Some(NormalFormLabel::RegularSource),
                    (0, 2, 1, 0) => Some(NormalFormLabel::RegularSaddle1),
                    (0, 1, 2, 0) => Some(NormalFormLabel::RegularSaddle2),
                    (0, 0, 3, 0) => Some(NormalFormLabel::RegularSink),
                    _ => {
                        notes.push("equilibrium drift with non-hyperbolic spectrum".into());
                        None
                    }
                }
            } else {
                notes.push("equilibrium catalogue needs three slow parameters".into());
                None
            }
        }
        FamilyTag::Fold => {
            let fa0 = g0[0];
            if fa0.abs() > band {
                if fa0 > 0.0 {
                    Some(NormalFormLabel::FoldFlowBox1)
                } else {
                    Some(NormalFormLabel::FoldFlowBox2)
                }
            } else if dim == 3 {
                match spectrum.signature() {
                    (1, 2, 0, 0) => Some(NormalFormLabel::FoldSource),
                    (1, 0, 2, 0) => Some(NormalFormLabel::FoldSink),
                    (1, 1, 1, 0) => Some(NormalFormLabel::FoldSaddle),
                    (1, 0, 0, 1) => {
                        notes.push("folded equilibrium with rotational spectrum".into());
                        None
                    }
                    _ => {
                        notes.push("degenerate folded equilibrium".into());
                        None
                    }
                }
            } else {
                notes.push("folded-equilibrium catalogue needs three slow parameters".into());
                None
            }
        }
        FamilyTag::Cusp => {
            if g0[1].abs() > band {
                if spec.negate_potential {
                    Some(NormalFormLabel::CuspDualFlowBox)
                } else {
                    Some(NormalFormLabel::CuspFlowBox)
                }
            } else {
                notes.push("drift tangent to the cusp line at the origin".into());
                None
            }
        }
        FamilyTag::Swallowtail => {
            if g0[2].abs() > band {
                Some(NormalFormLabel::SwallowtailFlowBox)
            } else {
                notes.push("drift degenerate along the last unfolding direction".into());
                None
            }
        }
        FamilyTag::HyperbolicUmbilic | FamilyTag::EllipticUmbilic => {
            // Adjugate coefficients carry factors up to 36 times the drift's.
            let band_m = tols.equilibrium * (1.0 + 36.0 * (1.0 + g_scale));
            if inf_norm(&m0) > band_m {
                match (tag, spectrum.signature()) {
                    (_, (1, 1, 1, 0)) => {
                        if tag == FamilyTag::HyperbolicUmbilic {
                            Some(NormalFormLabel::HyperbolicCenterSaddle)
                        } else {
                            Some(NormalFormLabel::EllipticCenterSaddle)
                        }
                    }
                    (FamilyTag::HyperbolicUmbilic, (1, 0, 0, 1)) => {
                        Some(NormalFormLabel::HyperbolicCenter)
                    }
                    _ => {
                        notes.push("umbilic drift with unrecognized spectrum".into());
                        None
                    }
                }
            } else {
                // The adjugate field vanishes to second order: divide by the
                // singular determinant and classify the quotient flow.
                match umbilic_quotient_matrix(spec, &mut notes)? {
                    Some(q) => {
                        spectrum = classify_spectrum(&q, tols.spectrum_zero)?;
                        match (tag, spectrum.signature()) {
                            (FamilyTag::HyperbolicUmbilic, (1, 1, 1, 0)) => {
                                Some(NormalFormLabel::HyperbolicCenterSaddle)
                            }
                            (FamilyTag::HyperbolicUmbilic, (1, 0, 0, 1)) => {
                                Some(NormalFormLabel::HyperbolicCenter)
                            }
                            (FamilyTag::EllipticUmbilic, (1, 1, 1, 0)) => {
                                Some(NormalFormLabel::EllipticCenterSaddle)
                            }
                            (FamilyTag::EllipticUmbilic, (1, 0, 0, 1)) => {
                                notes.push(
                                    "rotational quotient is not realizable in this family"
                                        .into(),
                                );
                                None
                            }
                            _ => {
                                notes.push("degenerate quotient flow".into());
                                None
                            }
                        }
                    }
                    None => None,
                }
            }
        }
        _ => unreachable!(),
    };

    Ok(Classification {
        generic: verdict.is_some(),
        verdict,
        spectrum,
        notes,
        equilibria,
        transversality,
    })
}

/// Divide each adjugate-field component by the singular determinant and
/// return the linearization of the quotient at the origin. Remainders must
/// vanish to fourth order, otherwise the drift is not tangent enough to the
/// singular surface and the quotient flow is meaningless.
fn umbilic_quotient_matrix(
    spec: &CdeSpec,
    notes: &mut Vec<String>,
) -> Result<Option<Vec<Vec<f64>>>> {
    let ds = desingularize(spec)?;
    let dim = ds.chart.dim();
    let mut m = vec![vec![0.0; dim]; dim];
    for (i, f) in ds.field.iter().enumerate() {
        let (q, r) = f.div_rem(&ds.chart.det)?;
        let r = r.pruned(1e-12 * (1.0 + f.max_abs_coeff()));
        if !r.is_zero() && r.min_degree() < 4 {
            notes.push(
                "adjugate field is not divisible by the singular determinant".into(),
            );
            return Ok(None);
        }
        let (c0, lin) = q.affine_part();
        if c0.abs() > 1e-9 * (1.0 + q.max_abs_coeff()) {
            notes.push("quotient flow does not fix the origin".into());
            return Ok(None);
        }
        m[i] = lin;
    }
    Ok(Some(m))
}

// ---------------------------------------------------------------------------
