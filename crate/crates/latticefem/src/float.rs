//! Floating-point cross-check path: `f64` Bernstein evaluation and
//! differentiation, simplex moments, and dense LU pivots. The exact core
//! never calls into this module; it exists for independent numerical
//! smoke tests of results whose exact verification is beyond desk scale.

use crate::arith::rational_to_f64;
use crate::bernstein::{BernsteinPoly, SimplexGeometry};
use crate::dof::{DofFunctional, DofKind};
use crate::lattice::{MultiIndex, SubSimplex};
use std::collections::BTreeMap;

/// A Bernstein polynomial with `f64` coefficients.
#[derive(Clone, Debug, Default)]
pub struct FloatPoly {
    n: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl FloatPoly {
    pub fn monomial(alpha: MultiIndex, coeff: f64) -> Self {
        let n = alpha.n();
        let mut coeffs = BTreeMap::new();
        if coeff != 0.0 {
            coeffs.insert(alpha, coeff);
        }
        FloatPoly { n, coeffs }
    }

    pub fn from_exact(p: &BernsteinPoly) -> Self {
        FloatPoly {
            n: p.n(),
            coeffs: p.iter().map(|(a, c)| (a.clone(), rational_to_f64(c))).collect(),
        }
    }

    pub fn evaluate(&self, lambda: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (alpha, c) in &self.coeffs {
            let mut term = *c;
            for (i, &e) in alpha.entries().iter().enumerate() {
                term *= lambda[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Derivative given the precomputed dot products `dots[i] = ∇λ_i · v`.
    pub fn directional_derivative(&self, dots: &[f64]) -> FloatPoly {
        let mut out = FloatPoly { n: self.n, coeffs: BTreeMap::new() };
        for (alpha, c) in &self.coeffs {
            for i in 0..=self.n {
                let e = alpha.entry(i);
                if e == 0 || dots[i] == 0.0 {
                    continue;
                }
                let mut entries = alpha.entries().to_vec();
                entries[i] -= 1;
                *out.coeffs.entry(MultiIndex::new(entries)).or_insert(0.0) += c * dots[i] * e as f64;
            }
        }
        out
    }

    pub fn trace_restrict(&self, f: &SubSimplex) -> FloatPoly {
        let mut out = FloatPoly { n: f.dim(), coeffs: BTreeMap::new() };
        for (alpha, c) in &self.coeffs {
            let (on_f, off_f) = crate::lattice::split(alpha, f);
            if off_f.iter().all(|&x| x == 0) {
                *out.coeffs.entry(MultiIndex::new(on_f)).or_insert(0.0) += c;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.coeffs.iter()
    }
}

/// `∫ λ^α = α! ℓ! / (|α| + ℓ)!` over the unit-measure `ℓ`-simplex, in `f64`.
pub fn moment_unit_f64(alpha: &[u32], ell: usize) -> f64 {
    // evaluate the factorial ratio incrementally to stay in range
    let total: u32 = alpha.iter().sum();
    let mut value = 1.0f64;
    // Π α_i! / (|α|+ℓ)! interleaved with ℓ!
    let mut denom_next = 1u32;
    let mut push_denom = |value: &mut f64, upto: u32| {
        while denom_next <= upto {
            *value /= denom_next as f64;
            denom_next += 1;
        }
    };
    for &a in alpha {
        for i in 1..=a {
            value *= i as f64;
        }
    }
    for i in 1..=(ell as u32) {
        value *= i as f64;
    }
    push_denom(&mut value, total + ell as u32);
    value
}

/// Barycentric affine forms of a full-dimensional geometry in `f64`:
/// `λ_i(x) = offset_i + g_i · x`.
#[derive(Clone, Debug)]
pub struct FloatAffine {
    pub offsets: Vec<f64>,
    pub gradients: Vec<Vec<f64>>,
}

impl FloatAffine {
    pub fn from_geometry(geometry: &SimplexGeometry) -> Self {
        let grads = geometry.barycentric_gradients().expect("full-dimensional geometry");
        let gradients: Vec<Vec<f64>> =
            grads.iter().map(|g| g.iter().map(rational_to_f64).collect()).collect();
        let offsets = gradients
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let vi: Vec<f64> =
                    geometry.vertices()[i].iter().map(rational_to_f64).collect();
                1.0 - g.iter().zip(&vi).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        FloatAffine { offsets, gradients }
    }

    pub fn barycentric(&self, x: &[f64]) -> Vec<f64> {
        self.offsets
            .iter()
            .zip(&self.gradients)
            .map(|(o, g)| o + g.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }
}

/// Normal frames converted to `f64`, keyed by owner face.
#[derive(Clone, Debug, Default)]
pub struct FloatFrames {
    map: BTreeMap<SubSimplex, Vec<Vec<f64>>>,
}

impl FloatFrames {
    pub fn insert(&mut self, face: SubSimplex, vectors: Vec<Vec<f64>>) {
        self.map.insert(face, vectors);
    }

    pub fn get(&self, face: &SubSimplex) -> Option<&Vec<Vec<f64>>> {
        self.map.get(face)
    }
}

/// Applies a DoF functional to the Bernstein monomial `λ^α` in `f64`
/// arithmetic, mirroring the exact path.
pub fn apply_dof_f64(
    functional: &DofFunctional,
    alpha: &MultiIndex,
    gradients: &[Vec<f64>],
    frames: &FloatFrames,
    measure: f64,
) -> f64 {
    let n = alpha.n();
    let p = FloatPoly::monomial(alpha.clone(), 1.0);
    match &functional.kind {
        DofKind::PointDerivative { vertex, gamma } => {
            let mut q = p;
            for (axis, &times) in gamma.iter().enumerate() {
                if times == 0 {
                    continue;
                }
                let dots: Vec<f64> = gradients.iter().map(|g| g[axis]).collect();
                for _ in 0..times {
                    q = q.directional_derivative(&dots);
                }
            }
            let mut lambda = vec![0.0; n + 1];
            lambda[*vertex] = 1.0;
            q.evaluate(&lambda)
        }
        DofKind::FaceMoment { beta, weight } => {
            let face = &functional.owner;
            let mut q = p;
            if beta.iter().any(|&b| b > 0) {
                let vectors = frames.get(face).expect("frame for differentiated face moment");
                for (j, &times) in beta.iter().enumerate() {
                    if times == 0 {
                        continue;
                    }
                    let dots: Vec<f64> = gradients
                        .iter()
                        .map(|g| g.iter().zip(&vectors[j]).map(|(a, b)| a * b).sum())
                        .collect();
                    for _ in 0..times {
                        q = q.directional_derivative(&dots);
                    }
                }
            }
            let trace = q.trace_restrict(face);
            let scale = if face.is_full() { measure } else { 1.0 };
            let ell = face.dim();
            let mut acc = 0.0;
            for (term, c) in trace.iter() {
                let total: Vec<u32> =
                    term.entries().iter().zip(weight).map(|(&a, &w)| a + w).collect();
                acc += c * moment_unit_f64(&total, ell);
            }
            acc * scale
        }
        DofKind::InteriorMoment { alpha: weight } => {
            let mut acc = 0.0;
            for (term, c) in p.iter() {
                let total: Vec<u32> =
                    term.entries().iter().zip(weight.entries()).map(|(&a, &b)| a + b).collect();
                acc += c * moment_unit_f64(&total, n);
            }
            acc * measure
        }
    }
}

/// Partial-pivoting LU; returns the smallest absolute pivot encountered
/// (0 when elimination breaks down), a cheap invertibility indicator.
pub fn lu_min_pivot(mut a: Vec<f64>, n: usize) -> f64 {
    assert_eq!(a.len(), n * n);
    let mut min_pivot = f64::INFINITY;
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty column");
        if pivot_val == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for c in 0..n {
                a.swap(col * n + c, pivot_row * n + c);
            }
        }
        min_pivot = min_pivot.min(pivot_val);
        let inv = 1.0 / a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] * inv;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
        }
    }
    if n == 0 {
        1.0
    } else {
        min_pivot
    }
}
