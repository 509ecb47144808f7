//! Shared oracles for the integration and acceptance suites. Everything in
//! here is intentionally independent of the implementation paths it checks:
//! graph search instead of the distance formula, Gauss–Legendre/Duffy
//! quadrature instead of the factorial moment formula.
#![allow(dead_code)]

use latticefem::arith::Rational;
use latticefem::bernstein::SimplexGeometry;
use latticefem::lattice::MultiIndex;
use num::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Breadth-first shortest path on the lattice adjacency graph: two nodes are
/// adjacent when one unit is moved between two slots.
pub fn bfs_distance(a: &MultiIndex, b: &MultiIndex) -> u32 {
    if a == b {
        return 0;
    }
    let slots = a.entries().len();
    let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(a.entries().to_vec(), 0);
    queue.push_back(a.entries().to_vec());
    while let Some(current) = queue.pop_front() {
        let dist = seen[&current];
        for i in 0..slots {
            if current[i] == 0 {
                continue;
            }
            for j in 0..slots {
                if i == j {
                    continue;
                }
                let mut next = current.clone();
                next[i] -= 1;
                next[j] += 1;
                if next == b.entries() {
                    return dist + 1;
                }
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), dist + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    unreachable!("lattice adjacency graph is connected");
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    assert!(points >= 1);
    let n = points;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 5e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let pj = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = pj;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Degree-exact quadrature on the unit-measure reference `ℓ`-simplex via the
/// collapsed (Duffy) tensor map; returns barycentric nodes and weights that
/// sum to one.
pub fn simplex_quadrature(ell: usize, degree: u32) -> Vec<(Vec<f64>, f64)> {
    // per-axis polynomial degree after the collapse is ≤ degree + ell
    let points_per_axis = ((degree as usize + ell) / 2 + 1).max(1);
    let gl: Vec<(f64, f64)> = gauss_legendre(points_per_axis)
        .into_iter()
        .map(|(x, w)| ((x + 1.0) / 2.0, w / 2.0))
        .collect();
    let mut rules = Vec::new();
    let mut u = vec![0.0; ell];
    fn rec(
        axis: usize,
        ell: usize,
        gl: &[(f64, f64)],
        u: &mut Vec<f64>,
        weight: f64,
        rules: &mut Vec<(Vec<f64>, f64)>,
    ) {
        if axis == ell {
            // x_j = u_j Π_{i<j} (1 − u_i); jacobian Π (1 − u_i)^{ℓ−1−i}
            let mut x = vec![0.0; ell];
            let mut shrink = 1.0;
            let mut jacobian = 1.0;
            for j in 0..ell {
                x[j] = u[j] * shrink;
                jacobian *= (1.0 - u[j]).powi((ell - 1 - j) as i32);
                shrink *= 1.0 - u[j];
            }
            let mut lambda = Vec::with_capacity(ell + 1);
            lambda.push(1.0 - x.iter().sum::<f64>());
            lambda.extend_from_slice(&x);
            rules.push((lambda, weight * jacobian));
            return;
        }
        for &(node, w) in gl {
            u[axis] = node;
            rec(axis + 1, ell, gl, u, weight * w, rules);
        }
    }
    rec(0, ell, &gl, &mut u, 1.0, &mut rules);
    // normalize from the reference simplex volume 1/ℓ! to unit measure
    let factorial: f64 = (1..=ell).map(|i| i as f64).product();
    for rule in &mut rules {
        rule.1 *= factorial;
    }
    rules
}

pub fn random_rational(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: i64) -> Rational {
    let num = rng.gen_range(-num_bound..=num_bound);
    let den = rng.gen_range(1..=den_bound);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A nondegenerate simplex with small rational coordinates.
pub fn random_rational_simplex(rng: &mut ChaCha8Rng, n: usize) -> SimplexGeometry {
    loop {
        let vertices: Vec<Vec<Rational>> = (0..=n)
            .map(|_| (0..n).map(|_| random_rational(rng, 12, 4)).collect())
            .collect();
        if let Ok(geometry) = SimplexGeometry::new(vertices) {
            return geometry;
        }
    }
}
