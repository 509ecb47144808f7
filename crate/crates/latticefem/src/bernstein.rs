//! Barycentric/Bernstein polynomial calculus on an embedded simplex with
//! exact rational scalars: evaluation, differentiation, traces, exact
//! integration, and normal frames.

use crate::arith::{factorial, multi_factorial, Rational};
use crate::exact::{self, RatMat};
use crate::lattice::{MultiIndex, SubSimplex};
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("singular geometry: {0}")]
    Singular(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Point = Vec<Rational>;

/// An `m`-simplex embedded in `R^d` (`d ≥ m`) with exact rational vertices.
///
/// For a full-dimensional simplex (`d = m`) the barycentric gradients and
/// the volume are cached at construction. Lower-dimensional face geometries
/// carry their tangent data; their measure is the conventional positive
/// scale `1` (a common factor per face never affects unisolvence or
/// single-valuedness, so the irrational Hausdorff measure is not needed).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexGeometry {
    vertices: Vec<Point>,
    gradients: Option<Vec<Vec<Rational>>>,
    measure: Rational,
}

impl SimplexGeometry {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::InvalidArgument("no vertices".into()));
        }
        let ambient = vertices[0].len();
        if vertices.iter().any(|v| v.len() != ambient) {
            return Err(GeometryError::InvalidArgument("inconsistent coordinate lengths".into()));
        }
        let m = vertices.len() - 1;
        if m > ambient {
            return Err(GeometryError::InvalidArgument(format!(
                "{}-simplex cannot live in R^{ambient}",
                m
            )));
        }
        // affine independence: the edge matrix must have full rank m
        let edges = edge_matrix(&vertices);
        if exact::rank(&edges) != m {
            return Err(GeometryError::Singular(format!(
                "vertices are affinely dependent (rank < {m})"
            )));
        }
        let (gradients, measure) = if m == ambient && m > 0 {
            let mut rows = Vec::with_capacity(m + 1);
            for v in &vertices {
                let mut row = Vec::with_capacity(m + 1);
                row.push(Rational::one());
                row.extend(v.iter().cloned());
                rows.push(row);
            }
            // λ_i(x) = c_{0,i} + Σ_d c_{d,i} x_d with C the inverse of the
            // bordered vertex matrix; columns carry the gradients
            let c = exact::inverse(&RatMat::from_rows(rows))
                .map_err(|_| GeometryError::Singular("degenerate simplex".into()))?;
            let grads: Vec<Vec<Rational>> =
                (0..=m).map(|i| (1..=m).map(|d| c[(d, i)].clone()).collect()).collect();
            let det = exact::determinant(&edges).expect("square edge matrix");
            let volume = det.abs() / Rational::from_integer(factorial(m as u32));
            (Some(grads), volume)
        } else if m == 0 && ambient == 0 {
            (Some(Vec::new()), Rational::one())
        } else {
            (None, Rational::one())
        };
        Ok(SimplexGeometry { vertices, gradients, measure })
    }

    /// The reference simplex: `v_0 = 0`, `v_i = e_i`.
    pub fn reference(n: usize) -> Self {
        let mut vertices = vec![vec![Rational::zero(); n]];
        for i in 0..n {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            vertices.push(v);
        }
        SimplexGeometry::new(vertices).expect("reference simplex is nondegenerate")
    }

    /// Intrinsic dimension of the simplex.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Dimension of the surrounding coordinate space.
    pub fn ambient(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn measure(&self) -> &Rational {
        &self.measure
    }

    /// Exact barycentric gradients `∇λ_0, …, ∇λ_n`; only available on
    /// full-dimensional geometries.
    pub fn barycentric_gradients(&self) -> Result<&[Vec<Rational>], GeometryError> {
        self.gradients.as_deref().ok_or_else(|| {
            GeometryError::InvalidArgument(
                "barycentric gradients need a full-dimensional simplex".into(),
            )
        })
    }

    /// Barycentric coordinates of a Cartesian point (full-dimensional only).
    pub fn barycentric_coords(&self, x: &[Rational]) -> Result<Vec<Rational>, GeometryError> {
        let grads = self.barycentric_gradients()?;
        if x.len() != self.ambient() {
            return Err(GeometryError::InvalidArgument("point has wrong dimension".into()));
        }
        // λ_i(x) = λ_i(v_i) + ∇λ_i · (x − v_i) = 1 + ∇λ_i · (x − v_i)
        let mut out = Vec::with_capacity(self.dim() + 1);
        for (i, g) in grads.iter().enumerate() {
            let mut acc = Rational::one();
            for d in 0..x.len() {
                acc += &g[d] * (&x[d] - &self.vertices[i][d]);
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Cartesian position of a barycentric point.
    pub fn embed(&self, lambda: &[Rational]) -> Vec<Rational> {
        assert_eq!(lambda.len(), self.vertices.len());
        let mut out = vec![Rational::zero(); self.ambient()];
        for (weight, vertex) in lambda.iter().zip(&self.vertices) {
            for d in 0..out.len() {
                out[d] += weight * &vertex[d];
            }
        }
        out
    }

    /// The geometry of a sub-simplex, embedded in the same ambient space.
    pub fn face_geometry(&self, f: &SubSimplex) -> Result<SimplexGeometry, GeometryError> {
        if f.is_empty() {
            return Err(GeometryError::InvalidArgument("face geometry of the empty set".into()));
        }
        if f.ambient() != self.dim() {
            return Err(GeometryError::InvalidArgument("face labels do not match geometry".into()));
        }
        if f.is_full() {
            return Ok(self.clone());
        }
        SimplexGeometry::new(f.indices().iter().map(|&i| self.vertices[i].clone()).collect())
    }

    /// Unit barycentric vector of the `i`-th vertex.
    pub fn vertex_barycentric(&self, i: usize) -> Vec<Rational> {
        let mut l = vec![Rational::zero(); self.dim() + 1];
        l[i] = Rational::one();
        l
    }
}

fn edge_matrix(vertices: &[Point]) -> RatMat {
    let rows: Vec<Vec<Rational>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
        .collect();
    if rows.is_empty() {
        RatMat::zeros(0, vertices[0].len())
    } else {
        RatMat::from_rows(rows)
    }
}

/// A polynomial in Bernstein form: a map from lattice nodes of `T^n_k` to
/// exact rational coefficients (zero coefficients pruned).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BernsteinPoly {
    n: usize,
    degree: u32,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl BernsteinPoly {
    pub fn zero(n: usize, degree: u32) -> Self {
        BernsteinPoly { n, degree, coeffs: BTreeMap::new() }
    }

    /// The single monomial `c · λ^α`.
    pub fn monomial(alpha: MultiIndex, coeff: Rational) -> Self {
        let mut p = BernsteinPoly::zero(alpha.n(), alpha.degree());
        if !coeff.is_zero() {
            p.coeffs.insert(alpha, coeff);
        }
        p
    }

    /// The constant `value` written at degree `k`: `value · (Σ λ_i)^k`,
    /// i.e. multinomially weighted coefficients `k!/α!`.
    pub fn constant(value: Rational, n: usize, k: u32) -> Self {
        let mut p = BernsteinPoly::zero(n, k);
        if value.is_zero() {
            return p;
        }
        let kfact = factorial(k);
        for alpha in crate::lattice::enumerate_lattice(n, k).expect("desk-scale lattice").iter() {
            let w = Rational::from_integer(&kfact / multi_factorial(alpha.entries()));
            p.coeffs.insert(alpha.clone(), &value * w);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.coeffs.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert_add(&mut self, alpha: MultiIndex, value: Rational) {
        if value.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(alpha).or_insert_with(Rational::zero);
        *entry += value;
        if entry.is_zero() {
            // re-fetch key to remove; cheap since maps are small
            let dead: Vec<MultiIndex> = self
                .coeffs
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.coeffs.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &BernsteinPoly) -> BernsteinPoly {
        assert_eq!(self.n, other.n);
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (alpha, c) in &other.coeffs {
            out.insert_add(alpha.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> BernsteinPoly {
        if factor.is_zero() {
            return BernsteinPoly::zero(self.n, self.degree);
        }
        let coeffs = self.coeffs.iter().map(|(a, c)| (a.clone(), c * factor)).collect();
        BernsteinPoly { n: self.n, degree: self.degree, coeffs }
    }

    pub fn sub(&self, other: &BernsteinPoly) -> BernsteinPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Evaluation at a barycentric point (entries sum to one; negative
    /// entries are allowed for extrapolation).
    pub fn evaluate(&self, lambda: &[Rational]) -> Rational {
        assert_eq!(lambda.len(), self.n + 1, "barycentric point has wrong length");
        let mut acc = Rational::zero();
        for (alpha, c) in &self.coeffs {
            let mut term = c.clone();
            for (i, &e) in alpha.entries().iter().enumerate() {
                for _ in 0..e {
                    term *= &lambda[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact directional derivative along a Cartesian vector `v`:
    /// `D_v λ^α = Σ_i α_i (∇λ_i · v) λ^{α − e_i}`, one degree lower.
    pub fn directional_derivative(
        &self,
        v: &[Rational],
        geometry: &SimplexGeometry,
    ) -> Result<BernsteinPoly, GeometryError> {
        let grads = geometry.barycentric_gradients()?;
        if geometry.dim() != self.n {
            return Err(GeometryError::InvalidArgument("geometry does not match polynomial".into()));
        }
        if self.degree == 0 {
            return Ok(BernsteinPoly::zero(self.n, 0));
        }
        let dots: Vec<Rational> = grads
            .iter()
            .map(|g| g.iter().zip(v).map(|(a, b)| a * b).sum::<Rational>())
            .collect();
        let mut out = BernsteinPoly::zero(self.n, self.degree - 1);
        for (alpha, c) in &self.coeffs {
            for i in 0..=self.n {
                let e = alpha.entry(i);
                if e == 0 || dots[i].is_zero() {
                    continue;
                }
                let mut entries = alpha.entries().to_vec();
                entries[i] -= 1;
                let factor = c * &dots[i] * Rational::from_integer(BigInt::from(e));
                out.insert_add(MultiIndex::new(entries), factor);
            }
        }
        Ok(out)
    }

    /// Iterated Cartesian derivative `D^γ` (γ over the ambient coordinates).
    pub fn cartesian_derivative(
        &self,
        gamma: &[u32],
        geometry: &SimplexGeometry,
    ) -> Result<BernsteinPoly, GeometryError> {
        if gamma.len() != geometry.ambient() {
            return Err(GeometryError::InvalidArgument("derivative multi-index has wrong length".into()));
        }
        let mut current = self.clone();
        for (axis, &times) in gamma.iter().enumerate() {
            if times == 0 {
                continue;
            }
            let mut unit = vec![Rational::zero(); gamma.len()];
            unit[axis] = Rational::one();
            for _ in 0..times {
                current = current.directional_derivative(&unit, geometry)?;
            }
        }
        Ok(current)
    }

    /// Iterated derivative along the vectors of a normal frame,
    /// `∂^β / ∂ n_f^β` with `β_j` applications of the `j`-th frame vector.
    pub fn frame_derivative(
        &self,
        frame: &NormalFrame,
        beta: &[u32],
        geometry: &SimplexGeometry,
    ) -> Result<BernsteinPoly, GeometryError> {
        if beta.len() != frame.vectors.len() {
            return Err(GeometryError::InvalidArgument(format!(
                "frame derivative index has {} slots, frame has {} vectors",
                beta.len(),
                frame.vectors.len()
            )));
        }
        let mut current = self.clone();
        for (j, &times) in beta.iter().enumerate() {
            for _ in 0..times {
                current = current.directional_derivative(&frame.vectors[j], geometry)?;
            }
        }
        Ok(current)
    }

    /// Trace onto a sub-simplex: drops every coefficient with mass on `f*`
    /// (where `λ_i|_f = 0`) and reindexes onto the face lattice.
    pub fn trace_restrict(&self, f: &SubSimplex) -> BernsteinPoly {
        assert_eq!(f.ambient(), self.n, "face labels do not match polynomial");
        let mut out = BernsteinPoly::zero(f.dim(), self.degree);
        for (alpha, c) in &self.coeffs {
            let (on_f, off_f) = crate::lattice::split(alpha, f);
            if off_f.iter().all(|&x| x == 0) {
                out.insert_add(MultiIndex::new(on_f), c.clone());
            }
        }
        out
    }

    /// Multiplication by the fixed monomial `λ^shift` (degree raise by
    /// index shift; exact).
    pub fn mul_monomial(&self, shift: &[u32]) -> BernsteinPoly {
        assert_eq!(shift.len(), self.n + 1);
        let extra: u32 = shift.iter().sum();
        let mut out = BernsteinPoly::zero(self.n, self.degree + extra);
        for (alpha, c) in &self.coeffs {
            let entries: Vec<u32> =
                alpha.entries().iter().zip(shift).map(|(&a, &s)| a + s).collect();
            out.insert_add(MultiIndex::new(entries), c.clone());
        }
        out
    }

    /// Full symbolic product.
    pub fn mul(&self, other: &BernsteinPoly) -> BernsteinPoly {
        assert_eq!(self.n, other.n);
        let mut out = BernsteinPoly::zero(self.n, self.degree + other.degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let entries: Vec<u32> =
                    a.entries().iter().zip(b.entries()).map(|(&x, &y)| x + y).collect();
                out.insert_add(MultiIndex::new(entries), ca * cb);
            }
        }
        out
    }

    /// Rewrites the polynomial at a higher degree `k` by multiplying with
    /// `(Σ λ_i)^{k − degree}`.
    pub fn degree_raise(&self, k: u32) -> Result<BernsteinPoly, GeometryError> {
        if k < self.degree {
            return Err(GeometryError::InvalidArgument(format!(
                "cannot lower degree {} to {k}",
                self.degree
            )));
        }
        let mut out = self.clone();
        for _ in 0..k - self.degree {
            let mut next = BernsteinPoly::zero(self.n, out.degree + 1);
            for (alpha, c) in &out.coeffs {
                for i in 0..=self.n {
                    let mut entries = alpha.entries().to_vec();
                    entries[i] += 1;
                    next.insert_add(MultiIndex::new(entries), c.clone());
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// The Cartesian monomial `x^expts` expressed in Bernstein form of
    /// degree `k` on the given full-dimensional geometry.
    pub fn from_cartesian_monomial(
        expts: &[u32],
        k: u32,
        geometry: &SimplexGeometry,
    ) -> Result<BernsteinPoly, GeometryError> {
        let n = geometry.dim();
        if expts.len() != n {
            return Err(GeometryError::InvalidArgument("exponent vector has wrong length".into()));
        }
        let total: u32 = expts.iter().sum();
        if total > k {
            return Err(GeometryError::InvalidArgument(format!(
                "monomial degree {total} exceeds target degree {k}"
            )));
        }
        geometry.barycentric_gradients()?;
        // x_d = Σ_j v_j[d] λ_j as a degree-1 polynomial
        let mut poly = BernsteinPoly::constant(Rational::one(), n, 0);
        for (d, &e) in expts.iter().enumerate() {
            for _ in 0..e {
                let mut linear = BernsteinPoly::zero(n, 1);
                for j in 0..=n {
                    let mut entries = vec![0u32; n + 1];
                    entries[j] = 1;
                    linear.insert_add(MultiIndex::new(entries), geometry.vertices()[j][d].clone());
                }
                poly = poly.mul(&linear);
            }
        }
        poly.degree_raise(k)
    }
}

/// Normalized moment of a Bernstein monomial over an `ℓ`-simplex of unit
/// measure: `∫ λ^α = α! ℓ! / (|α| + ℓ)!`.
pub fn moment_unit(alpha: &[u32], ell: usize) -> Rational {
    let total: u32 = alpha.iter().sum();
    Rational::new(
        multi_factorial(alpha) * factorial(ell as u32),
        factorial(total + ell as u32),
    )
}

/// Exact moment `∫_f λ^α ds` over the given face geometry (its stored
/// measure times the normalized moment).
pub fn integrate_face(alpha: &[u32], face_geometry: &SimplexGeometry) -> Result<Rational, GeometryError> {
    if alpha.len() != face_geometry.dim() + 1 {
        return Err(GeometryError::InvalidArgument(format!(
            "moment index has {} entries for a {}-simplex",
            alpha.len(),
            face_geometry.dim()
        )));
    }
    Ok(moment_unit(alpha, face_geometry.dim()) * face_geometry.measure())
}

/// How a normal frame was constructed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FrameKind {
    /// Dual to the barycentric gradients of `f*` within one element.
    DualToGradients,
    /// Deterministic basis computed from the global face geometry alone;
    /// identical for every element containing the face.
    CanonicalGlobal,
}

/// `n − ℓ` rational vectors spanning the normal plane of an `ℓ`-face.
/// Vectors are not normalized (no square roots are ever taken).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalFrame {
    pub face: SubSimplex,
    pub vectors: Vec<Vec<Rational>>,
    pub kind: FrameKind,
}

/// The frame dual to the gradients `∇λ_{f*(j)}`: vectors lie in the normal
/// plane of `f` and satisfy `∇λ_{f*(i)} · n_f^j = δ_ij`.
pub fn dual_normal_frame(
    f: &SubSimplex,
    geometry: &SimplexGeometry,
) -> Result<NormalFrame, GeometryError> {
    let n = geometry.dim();
    if f.is_empty() || f.is_full() {
        return Err(GeometryError::InvalidArgument(
            "dual frame needs a proper nonempty sub-simplex".into(),
        ));
    }
    if f.ambient() != n {
        return Err(GeometryError::InvalidArgument("face labels do not match geometry".into()));
    }
    let grads = geometry.barycentric_gradients()?;
    let ell = f.dim();
    let opposite = f.complement();
    // rows: tangents of f (pin the normal-plane component), then the
    // gradients of the opposite barycentric coordinates (duality conditions)
    let mut rows = Vec::with_capacity(n);
    let base = f.indices()[0];
    for &i in &f.indices()[1..] {
        let row: Vec<Rational> = (0..n)
            .map(|d| &geometry.vertices()[i][d] - &geometry.vertices()[base][d])
            .collect();
        rows.push(row);
    }
    for &j in opposite.indices() {
        rows.push(grads[j].clone());
    }
    let lhs = RatMat::from_rows(rows);
    let mut rhs = RatMat::zeros(n, n - ell);
    for j in 0..n - ell {
        rhs[(ell + j, j)] = Rational::one();
    }
    let sol = exact::solve(&lhs, &rhs)
        .map_err(|_| GeometryError::Singular("normal-frame system is singular".into()))?;
    let vectors = (0..n - ell)
        .map(|j| (0..n).map(|d| sol[(d, j)].clone()).collect())
        .collect();
    Ok(NormalFrame { face: f.clone(), vectors, kind: FrameKind::DualToGradients })
}

/// Deterministic global frame: the reduced-row-echelon basis of the null
/// space of the tangent matrix of the face, computed from the face's own
/// vertex coordinates only (tangents ordered by the given vertex order).
pub fn canonical_normal_frame(
    face_geometry: &SimplexGeometry,
    face: &SubSimplex,
) -> Result<NormalFrame, GeometryError> {
    if face_geometry.dim() >= face_geometry.ambient() {
        return Err(GeometryError::InvalidArgument(
            "canonical frame needs a face of positive codimension".into(),
        ));
    }
    let tangents = edge_matrix(face_geometry.vertices());
    let basis = exact::rref_nullspace(&tangents);
    debug_assert_eq!(basis.len(), face_geometry.ambient() - face_geometry.dim());
    Ok(NormalFrame { face: face.clone(), vectors: basis, kind: FrameKind::CanonicalGlobal })
}
