//! Sparse multivariate polynomials with exact structural operations.
//!
//! This is deliberately small: dense degrees here never exceed six and the
//! variable count is at most six (two fast, four slow), so a `BTreeMap` from
//! exponent vectors to coefficients is plenty. The one nontrivial algorithm
//! is single-divisor division in graded-lex order, which the classifier uses
//! to strip a determinant factor off degenerate reduced fields.

use crate::error::{CdeError, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Polynomial in `nvars` variables; keys are exponent vectors of that length.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u16>, f64>,
}

/// Graded lexicographic order: higher total degree wins, ties break
/// lexicographically with earlier variables larger.
pub fn grlex_cmp(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    let (da, db): (u32, u32) = (a.iter().map(|&e| e as u32).sum(), b.iter().map(|&e| e as u32).sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1.0);
        p
    }

    pub fn from_terms(nvars: usize, terms: &[(Vec<u16>, f64)]) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e.clone(), *c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u16>, coeff: f64) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert(0.0);
        *entry += coeff;
        // keep the map canonical so PartialEq and is_zero behave
        if *entry == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Smallest total degree among the terms (0 for the zero polynomial).
    pub fn min_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .min()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Drop terms with |coefficient| <= tol (absolute).
    pub fn pruned(&self, tol: f64) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            if c.abs() > tol {
                p.add_term(e.clone(), c);
            }
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (e, c) in other.terms() {
            p.add_term(e.clone(), c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut p = Self::zero(self.nvars);
        if k == 0.0 {
            return p;
        }
        for (e, c) in self.terms() {
            p.add_term(e.clone(), c * k);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }

    pub fn pow(&self, k: u16) -> Self {
        let mut p = Self::constant(self.nvars, 1.0);
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&k, &v)| if k == 0 { 1.0 } else { v.powi(k as i32) })
                    .product::<f64>()
            })
            .sum()
    }

    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut p = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                p.add_term(d, c * e[i] as f64);
            }
        }
        p
    }

    /// Substitute `images[i]` for variable `i`. All images must share a
    /// common variable count, which becomes the result's.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(CdeError::Dimension(format!(
                "compose: {} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let out_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        if images.iter().any(|p| p.nvars != out_vars) {
            return Err(CdeError::Dimension("compose: images disagree on variable count".into()));
        }
        let mut acc = Self::zero(out_vars);
        for (e, c) in self.terms() {
            let mut prod = Self::constant(out_vars, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    prod = prod.mul(&images[i].pow(k));
                }
            }
            acc = acc.add(&prod);
        }
        Ok(acc)
    }

    /// Constant term and the coefficient vector of the degree-one terms.
    pub fn affine_part(&self) -> (f64, Vec<f64>) {
        let mut constant = 0.0;
        let mut lin = vec![0.0; self.nvars];
        for (e, c) in self.terms() {
            let deg: u32 = e.iter().map(|&k| k as u32).sum();
            if deg == 0 {
                constant = c;
            } else if deg == 1 {
                let i = e.iter().position(|&k| k == 1).unwrap();
                lin[i] = c;
            }
        }
        (constant, lin)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Vec<u16>, f64)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| grlex_cmp(a, b))
            .map(|(e, &c)| (e, c))
    }

    /// Single-divisor division in graded-lex order: `self = q * d + r` with
    /// no term of `r` divisible by the leading term of `d`. Deterministic and
    /// exact up to floating-point arithmetic on the coefficients.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(CdeError::Invalid("division by zero polynomial".into()));
        }
        assert_eq!(self.nvars, d.nvars);
        let (lt_e, lt_c) = {
            let (e, c) = d.leading_term().unwrap();
            (e.clone(), c)
        };
        let mut q = Self::zero(self.nvars);
        let mut r = Self::zero(self.nvars);
        let mut work = self.clone();
        while let Some((e, c)) = work.leading_term().map(|(e, c)| (e.clone(), c)) {
            let divisible = e.iter().zip(&lt_e).all(|(a, b)| a >= b);
            if divisible {
                let qe: Vec<u16> = e.iter().zip(&lt_e).map(|(a, b)| a - b).collect();
                let qc = c / lt_c;
                let mono = Self::from_terms(self.nvars, &[(qe, qc)]);
                q = q.add(&mono);
                work = work.sub(&mono.mul(d));
                // cancellation can leave a rounding residue at the struck
                // monomial; remove it outright so the loop strictly descends
                work.terms.remove(&e);
            } else {
                r.add_term(e.clone(), c);
                work.terms.remove(&e);
            }
        }
        Ok((q, r))
    }

    /// Human-readable form with the given variable names, grlex-descending.
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u16>> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_cmp(b, a));
        let mut out = String::new();
        for (idx, e) in keys.iter().enumerate() {
            let c = self.terms[*e];
            let mag = c.abs();
            if idx == 0 {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            }
            let is_const: bool = e.iter().all(|&k| k == 0);
            if is_const || (mag - 1.0).abs() > 1e-15 {
                let _ = write!(out, "{mag}");
                if !is_const {
                    out.push('*');
                }
            }
            let mut first = true;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                out.push_str(names[i]);
                if k > 1 {
                    let _ = write!(out, "^{k}");
                }
            }
        }
        out
    }
}

/// Determinant of a small square matrix of polynomials by cofactor expansion.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n >= 1 && m.iter().all(|row| row.len() == n));
    let nvars = m[0][0].nvars;
    match n {
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = (1..n)
                    .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k].clone()).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc = acc.add(&m[0][j].scale(sign).mul(&poly_det(&minor)));
            }
            acc
        }
    }
}

/// Adjugate: `adj[i][j] = (-1)^{i+j} det(minor_{j,i})`, so `M adj = det * I`.
pub fn poly_adjugate(m: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    let n = m.len();
    let nvars = m[0][0].nvars;
    if n == 1 {
        return vec![vec![MultiPoly::constant(nvars, 1.0)]];
    }
    let mut adj = vec![vec![MultiPoly::zero(nvars); n]; n];
    for i in 0..n {
        for j in 0..n {
            // cofactor of entry (j, i)
            let minor: Vec<Vec<MultiPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&k| k != i)
                        .map(|k| m[r][k].clone())
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[i][j] = poly_det(&minor).scale(sign);
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, nterms: usize, maxdeg: u16) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for _ in 0..nterms {
            let e: Vec<u16> = (0..nvars).map(|_| rng.gen_range(0..=maxdeg)).collect();
            p.add_term(e, rng.gen_range(-3.0..3.0));
        }
        p
    }

    fn random_x(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect()
    }

    #[test]
    fn ring_identities_hold_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let (p, q, r) = (
                random_poly(&mut rng, 3, 5, 3),
                random_poly(&mut rng, 3, 5, 3),
                random_poly(&mut rng, 3, 4, 2),
            );
            let x = random_x(&mut rng, 3);
            let lhs = p.add(&q).mul(&r).eval(&x);
            let rhs = p.mul(&r).eval(&x) + q.mul(&r).eval(&x);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10, epsilon = 1e-10);
            assert_relative_eq!(p.sub(&p).eval(&x), 0.0);
        }
    }

    #[test]
    fn partial_matches_central_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let p = random_poly(&mut rng, 3, 6, 3);
            let x = random_x(&mut rng, 3);
            for i in 0..3 {
                let h = 1e-6;
                let (mut hi, mut lo) = (x.clone(), x.clone());
                hi[i] += h;
                lo[i] -= h;
                let fd = (p.eval(&hi) - p.eval(&lo)) / (2.0 * h);
                assert_relative_eq!(p.partial(i).eval(&x), fd, max_relative = 1e-5, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn compose_evaluates_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let p = random_poly(&mut rng, 2, 4, 3);
            let imgs = vec![random_poly(&mut rng, 3, 3, 2), random_poly(&mut rng, 3, 3, 2)];
            let composed = p.compose(&imgs).unwrap();
            let x = random_x(&mut rng, 3);
            let inner: Vec<f64> = imgs.iter().map(|q| q.eval(&x)).collect();
            assert_relative_eq!(
                composed.eval(&x),
                p.eval(&inner),
                max_relative = 1e-9,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn division_recombines_and_reduces() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..30 {
            let p = random_poly(&mut rng, 2, 6, 4);
            let mut d = random_poly(&mut rng, 2, 3, 2);
            if d.is_zero() {
                d = MultiPoly::constant(2, 1.0);
            }
            let (q, r) = p.div_rem(&d).unwrap();
            let x = random_x(&mut rng, 2);
            assert_relative_eq!(
                p.eval(&x),
                q.mul(&d).eval(&x) + r.eval(&x),
                max_relative = 1e-8,
                epsilon = 1e-8
            );
            let (lt, _) = d.leading_term().unwrap();
            for (e, _) in r.terms() {
                assert!(
                    !e.iter().zip(lt).all(|(a, b)| a >= b),
                    "remainder term divisible by leading term of divisor"
                );
            }
        }
    }

    #[test]
    fn exact_division_leaves_no_remainder() {
        // (x y - 1) * (x + y^2) recovered exactly
        let xy1 = MultiPoly::from_terms(2, &[(vec![1, 1], 1.0), (vec![0, 0], -1.0)]);
        let f = MultiPoly::from_terms(2, &[(vec![1, 0], 1.0), (vec![0, 2], 1.0)]);
        let prod = xy1.mul(&f);
        let (q, r) = prod.div_rem(&xy1).unwrap();
        assert!(r.is_zero(), "remainder: {:?}", r);
        assert_eq!(q, f);
    }

    #[test]
    fn grlex_leading_terms() {
        // degree ties break toward earlier variables
        let p = MultiPoly::from_terms(3, &[(vec![1, 1, 0], 36.0), (vec![0, 0, 2], -1.0)]);
        let (e, c) = p.leading_term().unwrap();
        assert_eq!(e, &vec![1, 1, 0]);
        assert_relative_eq!(c, 36.0);
        let q = MultiPoly::from_terms(3, &[(vec![2, 0, 0], -36.0), (vec![0, 2, 0], -36.0), (vec![0, 0, 2], 4.0)]);
        assert_eq!(q.leading_term().unwrap().0, &vec![2, 0, 0]);
    }

    #[test]
    fn adjugate_times_matrix_is_det_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3usize {
            let m: Vec<Vec<MultiPoly>> = (0..n)
                .map(|_| (0..n).map(|_| random_poly(&mut rng, 2, 3, 2)).collect())
                .collect();
            let det = poly_det(&m);
            let adj = poly_adjugate(&m);
            let x = random_x(&mut rng, 2);
            for i in 0..n {
                for j in 0..n {
                    // (adj * m)[i][j] == det * delta_ij
                    let mut acc = MultiPoly::zero(2);
                    for k in 0..n {
                        acc = acc.add(&adj[i][k].mul(&m[k][j]));
                    }
                    let expect = if i == j { det.eval(&x) } else { 0.0 };
                    assert_relative_eq!(acc.eval(&x), expect, max_relative = 1e-9, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn render_reads_naturally() {
        let p = MultiPoly::from_terms(2, &[(vec![2, 0], 3.0), (vec![0, 1], -1.0), (vec![0, 0], 0.5)]);
        assert_eq!(p.render(&["x", "a"]), "3*x^2 - a + 0.5");
    }
}
