//! Degree-of-freedom functionals for each element family, exact DoF-basis
//! matrices, and unisolvence / block-triangularity verification.

use crate::arith::{binomial, binomial_i, format_rational, ArithError, Rational};
use crate::bernstein::{
    canonical_normal_frame, dual_normal_frame, moment_unit, BernsteinPoly, GeometryError,
    NormalFrame, SimplexGeometry,
};
use crate::decomp::{
    hermite_decomposition, lagrange_decomposition, smooth_decomposition, DecompError,
    LatticeDecomposition, SmoothnessVector,
};
use crate::exact::{self, LinalgError, RatMat};
use crate::lattice::{delta, dist_to_face, enumerate_compositions, split, MultiIndex, SubSimplex};
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DofError {
    #[error("invalid element spec: {0}")]
    InvalidSpec(String),
    #[error("element is not unisolvent (singular DoF matrix)")]
    NotUnisolvent,
    #[error("missing normal frame for {0:?}")]
    MissingFrame(SubSimplex),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The supported element families. The two-dimensional smooth family is a
/// validation layer over the general one with `r = (r_0, m, 0)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElementFamily {
    Lagrange,
    Hermite { m: u32 },
    Smooth2d { r0: u32, m: u32 },
    SmoothNd { r: Vec<u32> },
}

/// A validated element description `(n, k, family)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementSpec {
    n: usize,
    k: u32,
    family: ElementFamily,
}

impl ElementSpec {
    pub fn new(n: usize, k: u32, family: ElementFamily) -> Result<Self, DofError> {
        if n == 0 {
            return Err(DofError::InvalidSpec("element dimension must be at least 1".into()));
        }
        match &family {
            ElementFamily::Lagrange => {
                if k == 0 {
                    return Err(DofError::InvalidSpec("Lagrange elements need k ≥ 1".into()));
                }
            }
            ElementFamily::Hermite { m } => {
                if k < 2 * m + 1 {
                    return Err(DofError::InvalidSpec(format!(
                        "Hermite elements need k ≥ 2m + 1, got k = {k}, m = {m}"
                    )));
                }
            }
            ElementFamily::Smooth2d { r0, m } => {
                if n != 2 {
                    return Err(DofError::InvalidSpec("Smooth2d requires n = 2".into()));
                }
                SmoothnessVector::new(&[*r0, *m, 0], k)?;
            }
            ElementFamily::SmoothNd { r } => {
                if r.len() != n + 1 {
                    return Err(DofError::InvalidSpec(format!(
                        "smoothness vector must have n + 1 = {} entries, got {}",
                        n + 1,
                        r.len()
                    )));
                }
                SmoothnessVector::new(r, k)?;
            }
        }
        Ok(ElementSpec { n, k, family })
    }

    pub fn lagrange(n: usize, k: u32) -> Result<Self, DofError> {
        Self::new(n, k, ElementFamily::Lagrange)
    }

    pub fn hermite(n: usize, k: u32, m: u32) -> Result<Self, DofError> {
        Self::new(n, k, ElementFamily::Hermite { m })
    }

    pub fn smooth_2d(k: u32, r0: u32, m: u32) -> Result<Self, DofError> {
        Self::new(2, k, ElementFamily::Smooth2d { r0, m })
    }

    pub fn smooth_nd(k: u32, r: &[u32]) -> Result<Self, DofError> {
        if r.len() < 2 {
            return Err(DofError::InvalidSpec("smoothness vector too short".into()));
        }
        Self::new(r.len() - 1, k, ElementFamily::SmoothNd { r: r.to_vec() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn family(&self) -> &ElementFamily {
        &self.family
    }

    /// `dim P_k = C(n + k, k)`.
    pub fn dimension(&self) -> u64 {
        binomial((self.n + self.k as usize) as u64, self.k as u64).expect("desk-scale dimension")
    }

    /// The smoothness vector driving the decomposition, when the family has
    /// one (`None` for Lagrange and Hermite).
    pub fn smoothness(&self) -> Option<SmoothnessVector> {
        match &self.family {
            ElementFamily::Lagrange | ElementFamily::Hermite { .. } => None,
            ElementFamily::Smooth2d { r0, m } => {
                Some(SmoothnessVector::new(&[*r0, *m, 0], self.k).expect("validated at construction"))
            }
            ElementFamily::SmoothNd { r } => {
                Some(SmoothnessVector::new(r, self.k).expect("validated at construction"))
            }
        }
    }

    /// The lattice decomposition the DoFs are grouped by.
    pub fn decomposition(&self) -> Result<LatticeDecomposition, DofError> {
        Ok(match &self.family {
            ElementFamily::Lagrange => lagrange_decomposition(self.n, self.k)?,
            ElementFamily::Hermite { m } => hermite_decomposition(self.n, self.k, *m)?,
            _ => smooth_decomposition(&self.smoothness().expect("smooth family"))?,
        })
    }

    /// Highest vertex-derivative order carried by this family.
    pub fn vertex_order(&self) -> u32 {
        match &self.family {
            ElementFamily::Lagrange => 0,
            ElementFamily::Hermite { m } => *m,
            ElementFamily::Smooth2d { r0, .. } => *r0,
            ElementFamily::SmoothNd { r } => r[0],
        }
    }

    /// Continuity order the global space guarantees across `ℓ`-faces.
    pub fn jump_order(&self, ell: usize) -> u32 {
        match &self.family {
            ElementFamily::Lagrange => 0,
            ElementFamily::Hermite { m } => {
                if ell == 0 {
                    *m
                } else {
                    0
                }
            }
            ElementFamily::Smooth2d { .. } | ElementFamily::SmoothNd { .. } => {
                self.smoothness().expect("smooth family").order(ell)
            }
        }
    }
}

/// Which normal frame the face functionals use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FramePolicy {
    /// Dual to the element's barycentric gradients (proof frame).
    Dual,
    /// Deterministic frame from the global face geometry (mesh frame).
    Canonical,
}

/// Frames for the proper sub-simplices of one element.
#[derive(Clone, Debug)]
pub struct FrameSet {
    frames: BTreeMap<SubSimplex, NormalFrame>,
}

impl FrameSet {
    pub fn empty() -> Self {
        FrameSet { frames: BTreeMap::new() }
    }

    pub fn insert(&mut self, frame: NormalFrame) {
        self.frames.insert(frame.face.clone(), frame);
    }

    pub fn get(&self, face: &SubSimplex) -> Option<&NormalFrame> {
        self.frames.get(face)
    }

    /// Frames for every `f` with `1 ≤ dim f ≤ n − 1` of a single element.
    pub fn for_element(geometry: &SimplexGeometry, policy: FramePolicy) -> Result<Self, DofError> {
        let n = geometry.dim();
        let mut set = FrameSet::empty();
        for ell in 1..n {
            for face in delta(ell, n) {
                let frame = match policy {
                    FramePolicy::Dual => dual_normal_frame(&face, geometry)?,
                    FramePolicy::Canonical => {
                        canonical_normal_frame(&geometry.face_geometry(&face)?, &face)?
                    }
                };
                set.insert(frame);
            }
        }
        Ok(set)
    }
}

/// One degree of freedom: a linear functional grouped under an owner
/// sub-simplex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DofFunctional {
    pub owner: SubSimplex,
    pub kind: DofKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DofKind {
    /// `D^γ u(v)` in Cartesian coordinates, `|γ| ≤` the family's vertex order.
    PointDerivative { vertex: usize, gamma: Vec<u32> },
    /// `∫_f (∂^β u / ∂ n_f^β) λ_f^w ds`; `β` indexes the frame vectors of the
    /// owner (all-zero for the moment families), `w` the face weight.
    FaceMoment { beta: Vec<u32>, weight: Vec<u32> },
    /// `∫_T u λ^α dx` over the interior piece.
    InteriorMoment { alpha: MultiIndex },
}

impl DofFunctional {
    pub fn level(&self) -> usize {
        self.owner.dim()
    }

    /// Derivative order `s` of the functional.
    pub fn order(&self) -> u32 {
        match &self.kind {
            DofKind::PointDerivative { gamma, .. } => gamma.iter().sum(),
            DofKind::FaceMoment { beta, .. } => beta.iter().sum(),
            DofKind::InteriorMoment { .. } => 0,
        }
    }
}

/// The ordered DoF list of an element: grouped by the decomposition pieces
/// (level ascending, owner lexicographic), and within a piece by derivative
/// order, then frame index, then weight, all lexicographic.
pub fn build_dofs(spec: &ElementSpec) -> Result<Vec<DofFunctional>, DofError> {
    let n = spec.n();
    let decomposition = spec.decomposition()?;
    let mut out = Vec::with_capacity(spec.dimension() as usize);
    for piece in decomposition.pieces() {
        let face = &piece.face;
        let ell = face.dim();
        let start = out.len();
        if ell == 0 {
            let vertex = face.indices()[0];
            for order in 0..=spec.vertex_order() {
                for gamma in enumerate_compositions(n, order) {
                    out.push(DofFunctional {
                        owner: face.clone(),
                        kind: DofKind::PointDerivative { vertex, gamma },
                    });
                }
            }
        } else {
            match spec.family() {
                ElementFamily::Lagrange | ElementFamily::Hermite { .. } => {
                    for alpha in piece.nodes.iter() {
                        let weight = crate::lattice::interior_shift_down(alpha, face)
                            .expect("moment-family pieces consist of interior nodes");
                        out.push(DofFunctional {
                            owner: face.clone(),
                            kind: DofKind::FaceMoment { beta: vec![0; n - ell], weight },
                        });
                    }
                }
                ElementFamily::Smooth2d { .. } | ElementFamily::SmoothNd { .. } => {
                    if ell == n {
                        for alpha in piece.nodes.iter() {
                            out.push(DofFunctional {
                                owner: face.clone(),
                                kind: DofKind::InteriorMoment { alpha: alpha.clone() },
                            });
                        }
                    } else {
                        // each piece node α pairs its weight α_f with the
                        // frame index β = α_{f*}
                        let mut keyed: Vec<(u32, Vec<u32>, Vec<u32>)> = piece
                            .nodes
                            .iter()
                            .map(|alpha| {
                                let (on_f, off_f) = split(alpha, face);
                                (dist_to_face(alpha, face), off_f, on_f)
                            })
                            .collect();
                        keyed.sort();
                        for (_, beta, weight) in keyed {
                            out.push(DofFunctional {
                                owner: face.clone(),
                                kind: DofKind::FaceMoment { beta, weight },
                            });
                        }
                    }
                }
            }
        }
        assert_eq!(
            out.len() - start,
            piece.nodes.len(),
            "functional count must match the piece size for {face:?}"
        );
    }
    debug_assert_eq!(out.len() as u64, spec.dimension());
    Ok(out)
}

/// Applies one functional to a polynomial on the given element geometry.
/// Frame lookups only happen for genuinely differentiated face moments.
pub fn apply_dof(
    functional: &DofFunctional,
    p: &BernsteinPoly,
    geometry: &SimplexGeometry,
    frames: &FrameSet,
) -> Result<Rational, DofError> {
    match &functional.kind {
        DofKind::PointDerivative { vertex, gamma } => {
            let q = p.cartesian_derivative(gamma, geometry)?;
            Ok(q.evaluate(&geometry.vertex_barycentric(*vertex)))
        }
        DofKind::FaceMoment { beta, weight } => {
            let face = &functional.owner;
            let differentiated = if beta.iter().all(|&b| b == 0) {
                p.clone()
            } else {
                let frame = frames
                    .get(face)
                    .ok_or_else(|| DofError::MissingFrame(face.clone()))?;
                p.frame_derivative(frame, beta, geometry)?
            };
            let trace = differentiated.trace_restrict(face);
            let scale = if face.is_full() { geometry.measure().clone() } else { Rational::one() };
            let ell = face.dim();
            let mut acc = Rational::zero();
            for (alpha_f, c) in trace.iter() {
                let total: Vec<u32> =
                    alpha_f.entries().iter().zip(weight).map(|(&a, &w)| a + w).collect();
                acc += c * moment_unit(&total, ell);
            }
            Ok(acc * scale)
        }
        DofKind::InteriorMoment { alpha } => {
            let n = geometry.dim();
            let mut acc = Rational::zero();
            for (term, c) in p.iter() {
                let total: Vec<u32> =
                    term.entries().iter().zip(alpha.entries()).map(|(&a, &b)| a + b).collect();
                acc += c * moment_unit(&total, n);
            }
            Ok(acc * geometry.measure())
        }
    }
}

/// Block metadata of the DoF matrix: one block per decomposition piece.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub face: SubSimplex,
    pub level: usize,
    pub start: usize,
    pub len: usize,
}

/// The exact square matrix `M[i][j] = N_i(λ^{α_j})` with rows the ordered
/// functionals and columns the Bernstein basis grouped by piece.
#[derive(Clone, Debug)]
pub struct DofMatrix {
    pub entries: RatMat,
    pub functionals: Vec<DofFunctional>,
    pub basis: Vec<MultiIndex>,
    pub blocks: Vec<Block>,
}

impl DofMatrix {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Matrix entries as exact `p/q` strings (for report export).
    pub fn entries_as_strings(&self) -> Vec<Vec<String>> {
        (0..self.entries.rows())
            .map(|i| self.entries.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

pub fn dof_matrix(
    spec: &ElementSpec,
    geometry: &SimplexGeometry,
    policy: FramePolicy,
) -> Result<DofMatrix, DofError> {
    if geometry.dim() != spec.n() {
        return Err(DofError::InvalidSpec(format!(
            "geometry dimension {} does not match element dimension {}",
            geometry.dim(),
            spec.n()
        )));
    }
    let functionals = build_dofs(spec)?;
    let frames = FrameSet::for_element(geometry, policy)?;
    let decomposition = spec.decomposition()?;

    let mut basis = Vec::with_capacity(functionals.len());
    let mut blocks = Vec::new();
    for piece in decomposition.pieces() {
        blocks.push(Block {
            face: piece.face.clone(),
            level: piece.face.dim(),
            start: basis.len(),
            len: piece.nodes.len(),
        });
        basis.extend(piece.nodes.iter().cloned());
    }
    let dim = basis.len();
    let mut entries = RatMat::zeros(dim, dim);
    for (j, alpha) in basis.iter().enumerate() {
        let column_poly = BernsteinPoly::monomial(alpha.clone(), Rational::one());
        for (i, functional) in functionals.iter().enumerate() {
            entries[(i, j)] = apply_dof(functional, &column_poly, geometry, &frames)?;
        }
    }
    Ok(DofMatrix { entries, functionals, basis, blocks })
}

/// Exact unisolvence verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnisolvenceReport {
    pub dimension: usize,
    pub invertible: bool,
    pub determinant: Rational,
}

pub fn check_unisolvence(
    spec: &ElementSpec,
    geometry: &SimplexGeometry,
    policy: FramePolicy,
) -> Result<UnisolvenceReport, DofError> {
    let matrix = dof_matrix(spec, geometry, policy)?;
    let determinant = exact::determinant(&matrix.entries)?;
    Ok(UnisolvenceReport {
        dimension: matrix.dimension(),
        invertible: !determinant.is_zero(),
        determinant,
    })
}

/// A nonzero entry where the proof ordering demands zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockViolation {
    pub row: usize,
    pub col: usize,
    pub row_owner: SubSimplex,
    pub col_owner: SubSimplex,
    pub value: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalBlockReport {
    pub face: SubSimplex,
    pub size: usize,
    pub invertible: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockTriangularReport {
    pub holds: bool,
    pub violations: Vec<BlockViolation>,
    pub diagonal: Vec<DiagonalBlockReport>,
}

/// Verifies the block lower-triangular structure of a DoF matrix: an entry
/// must vanish whenever its row block does not come after its column block
/// (levels ascending, same-level off-diagonal blocks zero both ways), and
/// every diagonal block must be invertible.
pub fn block_triangular_report(matrix: &DofMatrix) -> Result<BlockTriangularReport, DofError> {
    const MAX_WITNESSES: usize = 16;
    let mut violations = Vec::new();
    for (rb_idx, rb) in matrix.blocks.iter().enumerate() {
        for (cb_idx, cb) in matrix.blocks.iter().enumerate() {
            if rb_idx == cb_idx || rb.level > cb.level {
                continue;
            }
            for i in rb.start..rb.start + rb.len {
                for j in cb.start..cb.start + cb.len {
                    if !matrix.entries[(i, j)].is_zero() && violations.len() < MAX_WITNESSES {
                        violations.push(BlockViolation {
                            row: i,
                            col: j,
                            row_owner: rb.face.clone(),
                            col_owner: cb.face.clone(),
                            value: matrix.entries[(i, j)].clone(),
                        });
                    }
                }
            }
        }
    }
    let mut diagonal = Vec::with_capacity(matrix.blocks.len());
    for block in &matrix.blocks {
        let mut sub = RatMat::zeros(block.len, block.len);
        for i in 0..block.len {
            for j in 0..block.len {
                sub[(i, j)] = matrix.entries[(block.start + i, block.start + j)].clone();
            }
        }
        let det = exact::determinant(&sub)?;
        diagonal.push(DiagonalBlockReport {
            face: block.face.clone(),
            size: block.len,
            invertible: !det.is_zero(),
        });
    }
    let holds = violations.is_empty() && diagonal.iter().all(|d| d.invertible);
    Ok(BlockTriangularReport { holds, violations, diagonal })
}

pub fn check_block_triangular(
    spec: &ElementSpec,
    geometry: &SimplexGeometry,
    policy: FramePolicy,
) -> Result<BlockTriangularReport, DofError> {
    block_triangular_report(&dof_matrix(spec, geometry, policy)?)
}

/// Coefficients of the nodal basis: column `i` of the inverse DoF matrix
/// holds the Bernstein coefficients of `ψ_i` with `N_j(ψ_i) = δ_ij`.
pub fn dual_basis(
    spec: &ElementSpec,
    geometry: &SimplexGeometry,
    policy: FramePolicy,
) -> Result<RatMat, DofError> {
    let matrix = dof_matrix(spec, geometry, policy)?;
    exact::inverse(&matrix.entries).map_err(|_| DofError::NotUnisolvent)
}

/// Per-level dimension bookkeeping for an element family on a mesh with the
/// given numbers of `ℓ`-faces (`counts[ℓ] = |Δ_ℓ|`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DimensionRow {
    pub level: usize,
    pub face_count: u64,
    pub per_face: u64,
    pub subtotal: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DimensionTable {
    pub rows: Vec<DimensionRow>,
    pub enumerated_total: u64,
    /// Closed-form value where the family has a published formula.
    pub formula_total: Option<u64>,
}

pub fn dimension_table(spec: &ElementSpec, counts: &[u64]) -> Result<DimensionTable, DofError> {
    let n = spec.n();
    if counts.len() != n + 1 {
        return Err(DofError::InvalidSpec(format!(
            "need |Δ_ℓ| for ℓ = 0..{n}, got {} values",
            counts.len()
        )));
    }
    let decomposition = spec.decomposition()?;
    let mut rows = Vec::with_capacity(n + 1);
    for (ell, &face_count) in counts.iter().enumerate() {
        let sizes = decomposition.level_sizes(ell);
        let per_face = sizes[0].1 as u64;
        assert!(
            sizes.iter().all(|(_, s)| *s as u64 == per_face),
            "piece sizes at one level must agree"
        );
        rows.push(DimensionRow { level: ell, face_count, per_face, subtotal: face_count * per_face });
    }
    let enumerated_total = rows.iter().map(|r| r.subtotal).sum();
    let formula_total = closed_form_dimension(spec, counts)?;
    Ok(DimensionTable { rows, enumerated_total, formula_total })
}

fn closed_form_dimension(spec: &ElementSpec, counts: &[u64]) -> Result<Option<u64>, DofError> {
    let n = spec.n() as i64;
    let k = spec.k() as i64;
    Ok(match spec.family() {
        ElementFamily::Lagrange => {
            let mut total = 0u64;
            for (ell, &c) in counts.iter().enumerate() {
                total += c * binomial_i(k - 1, ell as i64)?;
            }
            Some(total)
        }
        ElementFamily::Hermite { m } => {
            let m = *m as i64;
            let mut total = counts[0] * binomial_i(n + m, m)?;
            for (ell, &c) in counts.iter().enumerate().skip(1) {
                let ell_i = ell as i64;
                let inner = binomial_i(k - 1, ell_i)?;
                let disks = (ell_i as u64 + 1) * binomial_i(m, ell_i)?;
                total += c * (inner - disks);
            }
            Some(total)
        }
        ElementFamily::Smooth2d { r0, m } => {
            Some(smooth_2d_dimension(k, *r0 as i64, *m as i64, counts)?)
        }
        ElementFamily::SmoothNd { r } if spec.n() == 2 => {
            Some(smooth_2d_dimension(k, r[0] as i64, r[1] as i64, counts)?)
        }
        ElementFamily::SmoothNd { .. } => None,
    })
}

/// `dim V = |Δ_0| C(r_0+2, 2) + |Δ_1| (m+1)(k − 2r_0 − 1 + m/2)
///        + |Δ_2| [C(k−3m−1, 2) − 3 C(r_0−2m, 2)]` for triangles.
fn smooth_2d_dimension(k: i64, r0: i64, m: i64, counts: &[u64]) -> Result<u64, DofError> {
    let vertex = binomial_i(r0 + 2, 2)?;
    let edge_twice = (m + 1) * (2 * (k - 2 * r0 - 1) + m);
    assert!(edge_twice >= 0 && edge_twice % 2 == 0, "edge count must be a nonnegative integer");
    let edge = (edge_twice / 2) as u64;
    let interior = binomial_i(k - 3 * m - 1, 2)?
        - 3 * binomial_i(r0 - 2 * m, 2)?;
    Ok(counts[0] * vertex + counts[1] * edge + counts[2] * interior)
}

/// Sub-simplex counts of a single `n`-element: `|Δ_ℓ| = C(n+1, ℓ+1)`.
pub fn single_element_counts(n: usize) -> Vec<u64> {
    (0..=n)
        .map(|ell| binomial(n as u64 + 1, ell as u64 + 1).expect("small binomial"))
        .collect()
}

/// Degrees of freedom as display-friendly JSON.
pub fn dof_list_json(functionals: &[DofFunctional]) -> String {
    let items: Vec<serde_json::Value> = functionals
        .iter()
        .map(|f| match &f.kind {
            DofKind::PointDerivative { vertex, gamma } => serde_json::json!({
                "kind": "point_derivative",
                "owner": f.owner.indices(),
                "vertex": vertex,
                "gamma": gamma,
            }),
            DofKind::FaceMoment { beta, weight } => serde_json::json!({
                "kind": "face_moment",
                "owner": f.owner.indices(),
                "beta": beta,
                "weight": weight,
            }),
            DofKind::InteriorMoment { alpha } => serde_json::json!({
                "kind": "interior_moment",
                "owner": f.owner.indices(),
                "alpha": alpha.entries(),
            }),
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("dof list serialization cannot fail")
}

/// Frame-equivalence helper used by verification: the unisolvence verdict
/// must be identical under both frame policies.
pub fn frame_policies_agree(
    spec: &ElementSpec,
    geometry: &SimplexGeometry,
) -> Result<bool, DofError> {
    let dual = check_unisolvence(spec, geometry, FramePolicy::Dual)?;
    let canonical = check_unisolvence(spec, geometry, FramePolicy::Canonical)?;
    Ok(dual.invertible == canonical.invertible)
}
