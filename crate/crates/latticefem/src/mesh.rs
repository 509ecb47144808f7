//! Small conforming simplicial meshes: global DoF identification,
//! interpolation, and exact inter-element smoothness verification.

use crate::arith::{binomial, format_rational, parse_rational, Rational};
use crate::bernstein::{BernsteinPoly, GeometryError, Point, SimplexGeometry};
use crate::decomp::{smooth_decomposition, verify_partition, DecompError, SmoothnessVector};
use crate::dof::{
    apply_dof, build_dofs, dof_matrix, DofError, ElementFamily, ElementSpec, FramePolicy,
    FrameSet,
};
use crate::exact::{self, LinalgError, RatMat};
use crate::lattice::{enumerate_compositions, enumerate_lattice, LatticeError, SubSimplex};
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("malformed mesh: {0}")]
    Invalid(String),
    #[error("malformed mesh JSON: {0}")]
    Json(String),
    #[error("cell {0} is degenerate")]
    DegenerateCell(usize),
    #[error("cells {0} and {1} are not conforming: vertex {2} lies on cell {0} without being one of its vertices")]
    Nonconforming(usize, usize, usize),
    #[error("cells {0} and {1} overlap: vertex {2} lies strictly inside cell {0}")]
    Overlapping(usize, usize, usize),
    #[error("input is not a single global polynomial: global DoF {0} receives conflicting values")]
    NotGlobalPolynomial(usize),
    #[error("polynomial degree {0} exceeds element degree {1}")]
    DegreeTooHigh(u32, u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Dof(#[from] DofError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An `ℓ`-dimensional mesh face: its sorted global vertex ids and the cells
/// containing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeshFace {
    pub vertices: Vec<usize>,
    pub cells: Vec<usize>,
}

/// A conforming simplicial mesh with exact rational vertex coordinates.
///
/// Cell vertex tuples are stored sorted by ascending global id, so every
/// local sub-simplex is automatically labeled in the global face order and
/// face-owned quantities are element-independent.
#[derive(Clone, Debug)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
    faces: Vec<Vec<MeshFace>>,
    geometries: Vec<SimplexGeometry>,
}

impl Mesh {
    pub fn new(dim: usize, vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self, MeshError> {
        if dim == 0 {
            return Err(MeshError::Invalid("mesh dimension must be at least 1".into()));
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(MeshError::Invalid(format!("every vertex needs {dim} coordinates")));
        }
        for (i, v) in vertices.iter().enumerate() {
            for (j, w) in vertices.iter().enumerate().skip(i + 1) {
                if v == w {
                    return Err(MeshError::Invalid(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        let mut sorted_cells = Vec::with_capacity(cells.len());
        for (c, cell) in cells.into_iter().enumerate() {
            if cell.len() != dim + 1 {
                return Err(MeshError::Invalid(format!(
                    "cell {c} has {} vertices, expected {}",
                    cell.len(),
                    dim + 1
                )));
            }
            let mut cell = cell;
            cell.sort_unstable();
            if cell.windows(2).any(|w| w[0] == w[1]) {
                return Err(MeshError::Invalid(format!("cell {c} repeats a vertex")));
            }
            if *cell.last().unwrap() >= vertices.len() {
                return Err(MeshError::Invalid(format!("cell {c} references a missing vertex")));
            }
            sorted_cells.push(cell);
        }
        for (a, cell) in sorted_cells.iter().enumerate() {
            if sorted_cells[a + 1..].contains(cell) {
                return Err(MeshError::Invalid(format!("cell {a} appears twice")));
            }
        }
        let mut used = vec![false; vertices.len()];
        for cell in &sorted_cells {
            for &v in cell {
                used[v] = true;
            }
        }
        if let Some(idx) = used.iter().position(|u| !u) {
            return Err(MeshError::Invalid(format!("vertex {idx} is not used by any cell")));
        }

        let mut geometries = Vec::with_capacity(sorted_cells.len());
        for (c, cell) in sorted_cells.iter().enumerate() {
            let geometry =
                SimplexGeometry::new(cell.iter().map(|&v| vertices[v].clone()).collect())
                    .map_err(|_| MeshError::DegenerateCell(c))?;
            geometries.push(geometry);
        }

        // conformity: a vertex of one cell may touch another cell only at
        // one of that cell's own vertices
        for (a, geometry) in geometries.iter().enumerate() {
            for (b, cell_b) in sorted_cells.iter().enumerate() {
                if a == b {
                    continue;
                }
                for &v in cell_b {
                    if sorted_cells[a].contains(&v) {
                        continue;
                    }
                    let lambda = geometry.barycentric_coords(&vertices[v])?;
                    if lambda.iter().all(|l| l > &Rational::zero()) {
                        return Err(MeshError::Overlapping(a, b, v));
                    }
                    if lambda.iter().all(|l| l >= &Rational::zero()) {
                        return Err(MeshError::Nonconforming(a, b, v));
                    }
                }
            }
        }

        let mut faces = Vec::with_capacity(dim + 1);
        for ell in 0..=dim {
            let mut table: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for (c, cell) in sorted_cells.iter().enumerate() {
                for local in SubSimplex::full(dim).sub_simplices(ell) {
                    let global: Vec<usize> = local.indices().iter().map(|&i| cell[i]).collect();
                    table.entry(global).or_default().push(c);
                }
            }
            faces.push(
                table
                    .into_iter()
                    .map(|(vertices, cells)| MeshFace { vertices, cells })
                    .collect(),
            );
        }
        Ok(Mesh { dim, vertices, cells: sorted_cells, faces, geometries })
    }

    /// Parses the mesh JSON form
    /// `{dim, vertices: [["p/q", …], …], cells: [[ids], …]}`; coordinates may
    /// be `p/q` strings, integers, or decimal literals (converted exactly).
    pub fn from_json(text: &str) -> Result<Self, MeshError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| MeshError::Json(e.to_string()))?;
        let dim = value
            .get("dim")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| MeshError::Json("missing integer field `dim`".into()))? as usize;
        let vertices_json = value
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| MeshError::Json("missing array field `vertices`".into()))?;
        let mut vertices = Vec::with_capacity(vertices_json.len());
        for (i, row) in vertices_json.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| MeshError::Json(format!("vertex {i} must be an array")))?;
            let mut point = Vec::with_capacity(row.len());
            for coord in row {
                let text = match coord {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(MeshError::Json(format!("bad coordinate {other} in vertex {i}"))),
                };
                point.push(parse_rational(&text).map_err(|e| MeshError::Json(e.to_string()))?);
            }
            vertices.push(point);
        }
        let cells_json = value
            .get("cells")
            .and_then(|v| v.as_array())
            .ok_or_else(|| MeshError::Json("missing array field `cells`".into()))?;
        let mut cells = Vec::with_capacity(cells_json.len());
        for (c, row) in cells_json.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| MeshError::Json(format!("cell {c} must be an array")))?;
            let ids = row
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| MeshError::Json(format!("cell {c} must hold vertex ids")))?;
            cells.push(ids);
        }
        Mesh::new(dim, vertices, cells)
    }

    pub fn to_json(&self) -> String {
        let vertices: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "dim": self.dim,
            "vertices": vertices,
            "cells": self.cells,
        }))
        .expect("mesh serialization cannot fail")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_geometry(&self, c: usize) -> &SimplexGeometry {
        &self.geometries[c]
    }

    /// All `ℓ`-dimensional mesh faces in canonical (sorted-tuple) order.
    pub fn faces(&self, ell: usize) -> &[MeshFace] {
        &self.faces[ell]
    }

    /// `|Δ_ℓ|` for ℓ = 0..=n.
    pub fn face_counts(&self) -> Vec<u64> {
        self.faces.iter().map(|t| t.len() as u64).collect()
    }

    fn face_index(&self, ell: usize, vertices: &[usize]) -> usize {
        self.faces[ell]
            .binary_search_by(|f| f.vertices.as_slice().cmp(vertices))
            .expect("face built from a cell is present in the table")
    }

    /// Local slot of a global vertex within a (sorted) cell tuple.
    fn local_vertex(&self, cell: usize, global: usize) -> usize {
        self.cells[cell].binary_search(&global).expect("vertex belongs to the cell")
    }
}

/// Identification of local DoFs across cells: two local DoFs share a global
/// id exactly when they sit on the same mesh face with the same descriptor
/// (face functionals are built with the canonical frame of the global face,
/// so descriptors are element-independent).
#[derive(Clone, Debug)]
pub struct GlobalDofMap {
    global_dim: usize,
    cell_to_global: Vec<Vec<usize>>,
    per_face_counts: Vec<u64>,
    face_offsets: Vec<Vec<usize>>,
}

impl GlobalDofMap {
    pub fn global_dim(&self) -> usize {
        self.global_dim
    }

    pub fn cell_to_global(&self, cell: usize) -> &[usize] {
        &self.cell_to_global[cell]
    }

    /// DoFs owned by each `ℓ`-face (constant per level by symmetry).
    pub fn per_face_counts(&self) -> &[u64] {
        &self.per_face_counts
    }

    /// First global id owned by the given face.
    pub fn face_offset(&self, ell: usize, face_idx: usize) -> usize {
        self.face_offsets[ell][face_idx]
    }
}

pub fn global_dof_map(mesh: &Mesh, spec: &ElementSpec) -> Result<GlobalDofMap, MeshError> {
    if spec.n() != mesh.dim() {
        return Err(MeshError::InvalidArgument(format!(
            "element dimension {} does not match mesh dimension {}",
            spec.n(),
            mesh.dim()
        )));
    }
    let decomposition = spec.decomposition()?;
    let per_face_counts: Vec<u64> = (0..=mesh.dim())
        .map(|ell| decomposition.level_sizes(ell)[0].1 as u64)
        .collect();

    let mut face_offsets = Vec::with_capacity(mesh.dim() + 1);
    let mut next = 0usize;
    for (ell, &count) in per_face_counts.iter().enumerate() {
        let mut offsets = Vec::with_capacity(mesh.faces(ell).len());
        for _ in mesh.faces(ell) {
            offsets.push(next);
            next += count as usize;
        }
        face_offsets.push(offsets);
    }
    let global_dim = next;

    let functionals = build_dofs(spec)?;
    let mut cell_to_global = Vec::with_capacity(mesh.cells().len());
    for (c, cell) in mesh.cells().iter().enumerate() {
        let mut ids = Vec::with_capacity(functionals.len());
        let mut within: BTreeMap<SubSimplex, usize> = BTreeMap::new();
        for functional in &functionals {
            let owner = &functional.owner;
            let ell = owner.dim();
            let global_face: Vec<usize> = owner.indices().iter().map(|&i| cell[i]).collect();
            let face_idx = mesh.face_index(ell, &global_face);
            let slot = within.entry(functional.owner.clone()).or_insert(0);
            ids.push(face_offsets[ell][face_idx] + *slot);
            *slot += 1;
        }
        debug_assert_eq!(ids.len(), functionals.len(), "cell {c}");
        cell_to_global.push(ids);
    }
    Ok(GlobalDofMap { global_dim, cell_to_global, per_face_counts, face_offsets })
}

/// Canonical-frame DoF matrix of one mesh cell. Because cell tuples are
/// sorted, the element's own face geometries are exactly the global face
/// geometries, so the canonical frames coincide across neighbouring cells.
pub fn cell_dof_matrix(mesh: &Mesh, spec: &ElementSpec, cell: usize) -> Result<crate::dof::DofMatrix, MeshError> {
    Ok(dof_matrix(spec, mesh.cell_geometry(cell), FramePolicy::Canonical)?)
}

/// Solves for the Bernstein coefficients of each cell from per-cell DoF
/// value vectors (one column per requested vector).
pub fn cell_polynomials_from_values(
    mesh: &Mesh,
    spec: &ElementSpec,
    values: &[Vec<Vec<Rational>>],
) -> Result<Vec<Vec<BernsteinPoly>>, MeshError> {
    let n_cells = mesh.cells().len();
    let n_vectors = values.len();
    let mut out = vec![Vec::with_capacity(n_cells); n_vectors];
    for c in 0..n_cells {
        let matrix = cell_dof_matrix(mesh, spec, c)?;
        let dim = matrix.dimension();
        let mut rhs = RatMat::zeros(dim, n_vectors);
        for (v, vector) in values.iter().enumerate() {
            if vector[c].len() != dim {
                return Err(MeshError::InvalidArgument(format!(
                    "cell {c} expects {dim} DoF values, got {}",
                    vector[c].len()
                )));
            }
            for i in 0..dim {
                rhs[(i, v)] = vector[c][i].clone();
            }
        }
        let solution = exact::solve(&matrix.entries, &rhs)?;
        for (v, bucket) in out.iter_mut().enumerate() {
            let mut poly = BernsteinPoly::zero(mesh.dim(), spec.k());
            for (j, alpha) in matrix.basis.iter().enumerate() {
                poly = poly.add(&BernsteinPoly::monomial(alpha.clone(), solution[(j, v)].clone()));
            }
            bucket.push(poly);
        }
    }
    Ok(out)
}

/// Per-cell polynomials induced by global coefficient vectors.
pub fn cell_polynomials(
    mesh: &Mesh,
    spec: &ElementSpec,
    map: &GlobalDofMap,
    coefficient_vectors: &[Vec<Rational>],
) -> Result<Vec<Vec<BernsteinPoly>>, MeshError> {
    for coeffs in coefficient_vectors {
        if coeffs.len() != map.global_dim() {
            return Err(MeshError::InvalidArgument(format!(
                "coefficient vector length {} does not match global dimension {}",
                coeffs.len(),
                map.global_dim()
            )));
        }
    }
    let locals: Vec<Vec<Vec<Rational>>> = coefficient_vectors
        .iter()
        .map(|coeffs| {
            (0..mesh.cells().len())
                .map(|c| map.cell_to_global(c).iter().map(|&g| coeffs[g].clone()).collect())
                .collect()
        })
        .collect();
    cell_polynomials_from_values(mesh, spec, &locals)
}

/// Interpolates a globally polynomial target given in Bernstein form on each
/// cell; returns the global DoF vector. Inputs whose shared DoF values
/// disagree between cells are rejected as not globally polynomial.
pub fn interpolate(
    mesh: &Mesh,
    spec: &ElementSpec,
    map: &GlobalDofMap,
    cell_polys: &[BernsteinPoly],
) -> Result<Vec<Rational>, MeshError> {
    if cell_polys.len() != mesh.cells().len() {
        return Err(MeshError::InvalidArgument("one polynomial per cell required".into()));
    }
    let functionals = build_dofs(spec)?;
    let mut global: Vec<Option<Rational>> = vec![None; map.global_dim()];
    for (c, poly) in cell_polys.iter().enumerate() {
        if poly.degree() > spec.k() {
            return Err(MeshError::DegreeTooHigh(poly.degree(), spec.k()));
        }
        let poly = if poly.degree() < spec.k() { poly.degree_raise(spec.k())? } else { poly.clone() };
        let geometry = mesh.cell_geometry(c);
        let frames = FrameSet::for_element(geometry, FramePolicy::Canonical)?;
        for (j, functional) in functionals.iter().enumerate() {
            let value = apply_dof(functional, &poly, geometry, &frames)?;
            let gid = map.cell_to_global(c)[j];
            match &global[gid] {
                None => global[gid] = Some(value),
                Some(existing) if *existing != value => {
                    return Err(MeshError::NotGlobalPolynomial(gid));
                }
                _ => {}
            }
        }
    }
    Ok(global.into_iter().map(|v| v.expect("every global DoF is touched by some cell")).collect())
}

/// Which derivative orders to test across faces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JumpOrderPolicy {
    /// The element family's own orders: `r_ℓ` across `ℓ`-faces.
    ElementSmoothness,
    /// A fixed order at every level (jumps are reported, not failed).
    Uniform(u32),
}

/// Maximum absolute jump of one derivative order across one interior face.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JumpEntry {
    pub face: Vec<usize>,
    pub level: usize,
    pub order: u32,
    pub max_jump: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ContinuityReport {
    pub entries: Vec<JumpEntry>,
}

impl ContinuityReport {
    pub fn max_jump(&self) -> Rational {
        self.entries.iter().map(|e| e.max_jump.clone()).max().unwrap_or_else(Rational::zero)
    }

    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|e| e.max_jump.is_zero())
    }

    pub fn to_json(&self) -> String {
        let items: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "face": e.face,
                    "level": e.level,
                    "order": e.order,
                    "max_jump": format_rational(&e.max_jump),
                })
            })
            .collect();
        serde_json::to_string_pretty(&items).expect("report serialization cannot fail")
    }
}

/// Derivative jumps of the piecewise polynomial induced by a global
/// coefficient vector, evaluated exactly.
pub fn continuity_check(
    mesh: &Mesh,
    spec: &ElementSpec,
    coefficients: &[Rational],
    policy: JumpOrderPolicy,
) -> Result<ContinuityReport, MeshError> {
    let map = global_dof_map(mesh, spec)?;
    let polys = cell_polynomials(mesh, spec, &map, &[coefficients.to_vec()])?;
    continuity_of_cell_polys(mesh, spec, &polys[0], policy)
}

/// The continuity workhorse, taking explicit per-cell polynomials (used
/// directly by adversarial desynchronization tests).
///
/// Jumps are sampled at the interior nodes of the degree-`(k+1)` lattice of
/// each interior face. Combined with the vertex checks and the
/// lower-dimensional face checks of the same report, a zero report is a
/// proof: a degree-`k` jump vanishing on the face boundary and at those
/// interior nodes vanishes identically.
pub fn continuity_of_cell_polys(
    mesh: &Mesh,
    spec: &ElementSpec,
    cell_polys: &[BernsteinPoly],
    policy: JumpOrderPolicy,
) -> Result<ContinuityReport, MeshError> {
    if cell_polys.len() != mesh.cells().len() {
        return Err(MeshError::InvalidArgument("one polynomial per cell required".into()));
    }
    let n = mesh.dim();
    let k = spec.k();

    // clear denominators once per cell so the derivative trees stay in
    // cheap small-denominator arithmetic; actual value = stored / scale
    let mut scaled: Vec<(BernsteinPoly, Rational)> = Vec::with_capacity(cell_polys.len());
    for poly in cell_polys {
        let mut lcm = BigInt::one();
        for (_, c) in poly.iter() {
            lcm = lcm.lcm(c.denom());
        }
        let scale = Rational::from_integer(lcm);
        scaled.push((poly.scale(&scale), scale));
    }

    let mut derivative_cache: Vec<BTreeMap<Vec<u32>, BernsteinPoly>> =
        (0..cell_polys.len()).map(|_| BTreeMap::new()).collect();

    let mut report = ContinuityReport::default();
    for ell in 0..n {
        for face in mesh.faces(ell) {
            if face.cells.len() < 2 {
                continue;
            }
            let order = match policy {
                JumpOrderPolicy::ElementSmoothness => spec.jump_order(ell),
                JumpOrderPolicy::Uniform(t) => t,
            };
            // sample points in face barycentric coordinates
            let points: Vec<Vec<Rational>> = if ell == 0 {
                vec![vec![Rational::one()]]
            } else {
                enumerate_lattice(ell, k + 1)?
                    .iter()
                    .filter(|a| a.entries().iter().all(|&e| e >= 1))
                    .map(|a| {
                        a.entries()
                            .iter()
                            .map(|&e| Rational::new(BigInt::from(e), BigInt::from(k + 1)))
                            .collect()
                    })
                    .collect()
            };
            for s in 0..=order {
                let mut max_jump = Rational::zero();
                for gamma in enumerate_compositions(n, s) {
                    // derivative values per incident cell, compared over all
                    // unordered pairs so the report does not depend on the
                    // cell traversal order
                    let mut per_cell: Vec<Vec<Rational>> = Vec::with_capacity(face.cells.len());
                    for &c in &face.cells {
                        let derivative =
                            cached_derivative(&mut derivative_cache[c], &scaled[c].0, &gamma, mesh.cell_geometry(c))?;
                        let values: Vec<Rational> = points
                            .iter()
                            .map(|mu| {
                                let mut lambda = vec![Rational::zero(); n + 1];
                                for (slot, &g) in face.vertices.iter().enumerate() {
                                    lambda[mesh.local_vertex(c, g)] = mu[slot].clone();
                                }
                                derivative.evaluate(&lambda) / &scaled[c].1
                            })
                            .collect();
                        per_cell.push(values);
                    }
                    for (i, left) in per_cell.iter().enumerate() {
                        for right in &per_cell[i + 1..] {
                            for (a, b) in left.iter().zip(right) {
                                let jump = (a - b).abs();
                                if jump > max_jump {
                                    max_jump = jump;
                                }
                            }
                        }
                    }
                }
                report.entries.push(JumpEntry {
                    face: face.vertices.clone(),
                    level: ell,
                    order: s,
                    max_jump,
                });
            }
        }
    }
    Ok(report)
}

fn cached_derivative(
    cache: &mut BTreeMap<Vec<u32>, BernsteinPoly>,
    base: &BernsteinPoly,
    gamma: &[u32],
    geometry: &SimplexGeometry,
) -> Result<BernsteinPoly, MeshError> {
    if gamma.iter().all(|&g| g == 0) {
        return Ok(base.clone());
    }
    if let Some(hit) = cache.get(gamma) {
        return Ok(hit.clone());
    }
    let axis = gamma.iter().position(|&g| g > 0).expect("nonzero gamma");
    let mut parent_gamma = gamma.to_vec();
    parent_gamma[axis] -= 1;
    let parent = cached_derivative(cache, base, &parent_gamma, geometry)?;
    let mut unit = vec![Rational::zero(); gamma.len()];
    unit[axis] = Rational::one();
    let derivative = parent.directional_derivative(&unit, geometry)?;
    cache.insert(gamma.to_vec(), derivative.clone());
    Ok(derivative)
}

/// Bookkeeping behind the facet-trace argument: restricted to a facet `F`
/// and derivative order `i ≤ m`, the element's orders drop to
/// `(r_0 − i, …, r_{n−2} − i, 0)` at degree `k − i`, which must again be a
/// valid smooth element whose decomposition fills `dim P_{k−i}(F)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceSpaceReport {
    pub derivative_order: u32,
    pub facet_orders: Vec<u32>,
    pub degree: u32,
    pub decomposition_total: u64,
    pub expected_dimension: u64,
    pub partition_ok: bool,
}

impl TraceSpaceReport {
    pub fn ok(&self) -> bool {
        self.partition_ok && self.decomposition_total == self.expected_dimension
    }
}

pub fn trace_space_check(
    spec: &ElementSpec,
    facet: &SubSimplex,
    i: u32,
) -> Result<TraceSpaceReport, MeshError> {
    let n = spec.n();
    let sv = match spec.family() {
        ElementFamily::Smooth2d { .. } | ElementFamily::SmoothNd { .. } => {
            spec.smoothness().expect("smooth family")
        }
        _ => {
            return Err(MeshError::InvalidArgument(
                "trace-space bookkeeping applies to the smooth families".into(),
            ))
        }
    };
    if n < 2 {
        return Err(MeshError::InvalidArgument("facet traces need n ≥ 2".into()));
    }
    if facet.is_empty() || facet.dim() != n - 1 {
        return Err(MeshError::InvalidArgument(format!(
            "expected an (n−1)-dimensional facet, got {facet:?}"
        )));
    }
    if i > sv.m() {
        return Err(MeshError::InvalidArgument(format!(
            "derivative order {i} exceeds the facet order m = {}",
            sv.m()
        )));
    }
    let mut facet_orders: Vec<u32> = (0..n - 1).map(|ell| sv.order(ell) - i).collect();
    facet_orders.push(0);
    let degree = spec.k() - i;
    let facet_sv = SmoothnessVector::new(&facet_orders, degree)?;
    let decomposition = smooth_decomposition(&facet_sv)?;
    let partition = verify_partition(&decomposition)?;
    let expected = binomial((n - 1 + degree as usize) as u64, degree as u64)
        .map_err(LatticeError::from)?;
    Ok(TraceSpaceReport {
        derivative_order: i,
        facet_orders,
        degree,
        decomposition_total: decomposition.total() as u64,
        expected_dimension: expected,
        partition_ok: partition.ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, rational_from_int as ri};
    use crate::dof::single_element_counts;

    pub fn two_triangles() -> Mesh {
        Mesh::new(
            2,
            vec![
                vec![ri(0), ri(0)],
                vec![ri(1), ri(0)],
                vec![ri(0), ri(1)],
                vec![ri(1), ri(1)],
            ],
            vec![vec![0, 1, 2], vec![1, 3, 2]],
        )
        .unwrap()
    }

    pub fn two_tetrahedra() -> Mesh {
        Mesh::new(
            3,
            vec![
                vec![ri(0), ri(0), ri(0)],
                vec![ri(1), ri(0), ri(0)],
                vec![ri(0), ri(1), ri(0)],
                vec![ri(0), ri(0), ri(1)],
                vec![ri(1), ri(1), ri(1)],
            ],
            vec![vec![0, 1, 2, 3], vec![1, 2, 3, 4]],
        )
        .unwrap()
    }

    #[test]
    fn two_triangle_counts() {
        let mesh = two_triangles();
        assert_eq!(mesh.face_counts(), vec![4, 5, 2]);
        let shared = mesh.faces(1).iter().find(|f| f.cells.len() == 2).unwrap();
        assert_eq!(shared.vertices, vec![1, 2]);
    }

    #[test]
    fn two_tet_counts() {
        let mesh = two_tetrahedra();
        assert_eq!(mesh.face_counts(), vec![5, 9, 7, 2]);
        let shared: Vec<_> = mesh.faces(2).iter().filter(|f| f.cells.len() == 2).collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].vertices, vec![1, 2, 3]);
    }

    #[test]
    fn hanging_node_rejected() {
        // one big triangle, one small triangle whose apex sits mid-edge
        let result = Mesh::new(
            2,
            vec![
                vec![ri(0), ri(0)],
                vec![ri(2), ri(0)],
                vec![ri(0), ri(2)],
                vec![ri(1), ri(1)],
                vec![ri(2), ri(2)],
            ],
            vec![vec![0, 1, 2], vec![1, 4, 3]],
        );
        assert!(matches!(result, Err(MeshError::Nonconforming(..))));
    }

    #[test]
    fn overlapping_cells_rejected() {
        let result = Mesh::new(
            2,
            vec![
                vec![ri(0), ri(0)],
                vec![ri(4), ri(0)],
                vec![ri(0), ri(4)],
                vec![ri(1), ri(1)],
                vec![ri(2), ri(1)],
                vec![ri(1), ri(2)],
            ],
            vec![vec![0, 1, 2], vec![3, 4, 5]],
        );
        assert!(matches!(result, Err(MeshError::Overlapping(..))));
    }

    #[test]
    fn degenerate_cell_rejected() {
        let result = Mesh::new(
            2,
            vec![vec![ri(0), ri(0)], vec![ri(1), ri(1)], vec![ri(2), ri(2)]],
            vec![vec![0, 1, 2]],
        );
        assert!(matches!(result, Err(MeshError::DegenerateCell(0))));
    }

    #[test]
    fn json_round_trip() {
        let mesh = two_triangles();
        let text = mesh.to_json();
        let back = Mesh::from_json(&text).unwrap();
        assert_eq!(back.face_counts(), mesh.face_counts());
        // decimals convert exactly
        let text = r#"{"dim": 1, "vertices": [["0"], [0.5], ["3/2"]], "cells": [[0,1],[1,2]]}"#;
        let mesh = Mesh::from_json(text).unwrap();
        assert_eq!(mesh.vertices()[1][0], ratio(1, 2));
        assert_eq!(mesh.vertices()[2][0], ratio(3, 2));
    }

    /// Three triangles sharing vertex 1, two interior edges.
    pub fn fan_mesh() -> Mesh {
        Mesh::new(
            2,
            vec![
                vec![ri(0), ri(0)],
                vec![ri(1), ri(0)],
                vec![ri(0), ri(1)],
                vec![ri(1), ri(1)],
                vec![ri(2), ri(0)],
            ],
            vec![vec![0, 1, 2], vec![1, 3, 2], vec![1, 4, 3]],
        )
        .unwrap()
    }

    #[test]
    fn fan_mesh_dimensions_and_conformity() {
        let mesh = fan_mesh();
        assert_eq!(mesh.face_counts(), vec![5, 7, 3]);
        // vertex 1 belongs to all three cells
        let v1 = mesh.faces(0).iter().find(|f| f.vertices == vec![1]).unwrap();
        assert_eq!(v1.cells.len(), 3);

        for spec in [
            ElementSpec::lagrange(2, 3).unwrap(),
            ElementSpec::hermite(2, 3, 1).unwrap(),
            ElementSpec::smooth_2d(5, 2, 1).unwrap(),
        ] {
            let map = global_dof_map(&mesh, &spec).unwrap();
            let table = crate::dof::dimension_table(&spec, &mesh.face_counts()).unwrap();
            assert_eq!(map.global_dim() as u64, table.enumerated_total);
            assert_eq!(table.formula_total, Some(table.enumerated_total));
        }

        // smoothness across both interior edges and the thrice-shared vertex
        let spec = ElementSpec::smooth_2d(5, 2, 1).unwrap();
        let map = global_dof_map(&mesh, &spec).unwrap();
        let coeffs: Vec<Rational> =
            (0..map.global_dim()).map(|i| ratio((i as i64 * 31 % 17) - 8, 1 + i as i64 % 3)).collect();
        let report = continuity_check(&mesh, &spec, &coeffs, JumpOrderPolicy::ElementSmoothness).unwrap();
        assert!(report.all_zero(), "jumps: {}", report.to_json());
    }

    #[test]
    fn global_dims_on_two_triangles() {
        let mesh = two_triangles();
        let argyris = ElementSpec::smooth_2d(5, 2, 1).unwrap();
        assert_eq!(global_dof_map(&mesh, &argyris).unwrap().global_dim(), 29);

        let lagrange = ElementSpec::lagrange(2, 3).unwrap();
        assert_eq!(global_dof_map(&mesh, &lagrange).unwrap().global_dim(), 16);

        let hermite = ElementSpec::hermite(2, 3, 1).unwrap();
        assert_eq!(global_dof_map(&mesh, &hermite).unwrap().global_dim(), 14);
    }

    #[test]
    fn global_dim_matches_closed_forms_on_meshes() {
        let mesh = two_triangles();
        for spec in [
            ElementSpec::lagrange(2, 4).unwrap(),
            ElementSpec::hermite(2, 5, 2).unwrap(),
            ElementSpec::smooth_2d(9, 4, 2).unwrap(),
        ] {
            let map = global_dof_map(&mesh, &spec).unwrap();
            let table = crate::dof::dimension_table(&spec, &mesh.face_counts()).unwrap();
            assert_eq!(map.global_dim() as u64, table.enumerated_total);
            assert_eq!(Some(table.enumerated_total), table.formula_total);
        }
    }

    #[test]
    fn interpolation_reproduces_constants_and_rejects_bad_input() {
        let mesh = two_triangles();
        let spec = ElementSpec::smooth_2d(5, 2, 1).unwrap();
        let map = global_dof_map(&mesh, &spec).unwrap();
        let one = BernsteinPoly::constant(ri(1), 2, 5);
        let coeffs = interpolate(&mesh, &spec, &map, &[one.clone(), one.clone()]).unwrap();
        let polys = cell_polynomials(&mesh, &spec, &map, &[coeffs]).unwrap();
        for poly in &polys[0] {
            assert_eq!(*poly, one);
        }
        // mismatched per-cell inputs are not a global polynomial
        let two = BernsteinPoly::constant(ri(2), 2, 5);
        assert!(matches!(
            interpolate(&mesh, &spec, &map, &[one.clone(), two]),
            Err(MeshError::NotGlobalPolynomial(_))
        ));
        // degree above k is rejected
        let high = BernsteinPoly::constant(ri(1), 2, 6);
        assert!(matches!(
            interpolate(&mesh, &spec, &map, &[high.clone(), high]),
            Err(MeshError::DegreeTooHigh(6, 5))
        ));
    }

    #[test]
    fn argyris_jumps_vanish_for_random_coefficients() {
        let mesh = two_triangles();
        let spec = ElementSpec::smooth_2d(5, 2, 1).unwrap();
        let map = global_dof_map(&mesh, &spec).unwrap();
        // a fixed, irregular coefficient vector
        let coeffs: Vec<Rational> =
            (0..map.global_dim()).map(|i| ratio((i as i64 * 7919 % 23) - 11, 1 + (i as i64 % 5))).collect();
        let report = continuity_check(&mesh, &spec, &coeffs, JumpOrderPolicy::ElementSmoothness).unwrap();
        assert!(report.all_zero(), "jumps: {}", report.to_json());
    }

    #[test]
    fn lagrange_derivative_jumps_are_reported_not_failed() {
        let mesh = two_triangles();
        let spec = ElementSpec::lagrange(2, 2).unwrap();
        let map = global_dof_map(&mesh, &spec).unwrap();
        let coeffs: Vec<Rational> = (0..map.global_dim()).map(|i| ri(i as i64 % 4)).collect();
        // value jumps vanish
        let c0 = continuity_check(&mesh, &spec, &coeffs, JumpOrderPolicy::ElementSmoothness).unwrap();
        assert!(c0.all_zero());
        // first-derivative jumps are generically nonzero but still reported
        let c1 = continuity_check(&mesh, &spec, &coeffs, JumpOrderPolicy::Uniform(1)).unwrap();
        assert!(!c1.all_zero());
    }

    #[test]
    fn continuity_report_independent_of_cell_order() {
        let vertices = vec![
            vec![ri(0), ri(0)],
            vec![ri(1), ri(0)],
            vec![ri(0), ri(1)],
            vec![ri(1), ri(1)],
        ];
        let forward = Mesh::new(2, vertices.clone(), vec![vec![0, 1, 2], vec![1, 3, 2]]).unwrap();
        let reversed = Mesh::new(2, vertices, vec![vec![2, 3, 1], vec![2, 1, 0]]).unwrap();
        let spec = ElementSpec::lagrange(2, 2).unwrap();
        // reversed cell list renumbers cells but owns the same global DoFs:
        // rebuild one global vector per mesh from shared face values
        let coeffs = |mesh: &Mesh| -> Vec<Rational> {
            let map = global_dof_map(mesh, &spec).unwrap();
            (0..map.global_dim()).map(|i| ri((i as i64 * 13 % 11) - 5)).collect()
        };
        // first-derivative jumps are nonzero for Lagrange; the reported
        // maxima must not depend on traversal order
        let a = continuity_check(&forward, &spec, &coeffs(&forward), JumpOrderPolicy::Uniform(1))
            .unwrap();
        let b = continuity_check(&reversed, &spec, &coeffs(&reversed), JumpOrderPolicy::Uniform(1))
            .unwrap();
        assert_eq!(a.entries.len(), b.entries.len());
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_eq!((&x.face, x.level, x.order), (&y.face, y.level, y.order));
            assert_eq!(x.max_jump, y.max_jump, "face {:?} order {}", x.face, x.order);
        }
        assert!(!a.all_zero());
    }

    #[test]
    fn desynchronized_face_dof_is_witnessed() {
        let mesh = two_triangles();
        let spec = ElementSpec::smooth_2d(5, 2, 1).unwrap();
        let map = global_dof_map(&mesh, &spec).unwrap();
        let coeffs: Vec<Rational> = (0..map.global_dim()).map(|i| ri(1 + i as i64 % 3)).collect();
        let mut locals: Vec<Vec<Rational>> = (0..mesh.cells().len())
            .map(|c| map.cell_to_global(c).iter().map(|&g| coeffs[g].clone()).collect())
            .collect();
        // bump the shared-edge moment on one side only
        let functionals = build_dofs(&spec).unwrap();
        let edge_slot = functionals
            .iter()
            .position(|f| f.owner.dim() == 1 && {
                let global: Vec<usize> =
                    f.owner.indices().iter().map(|&i| mesh.cells()[0][i]).collect();
                global == vec![1, 2]
            })
            .unwrap();
        locals[0][edge_slot] += ri(1);
        let polys = cell_polynomials_from_values(&mesh, &spec, &[locals]).unwrap();
        let report =
            continuity_of_cell_polys(&mesh, &spec, &polys[0], JumpOrderPolicy::ElementSmoothness)
                .unwrap();
        assert!(!report.all_zero());
    }

    #[test]
    fn trace_space_bookkeeping() {
        let spec = ElementSpec::smooth_nd(9, &[4, 2, 1, 0]).unwrap();
        let facet = SubSimplex::new(vec![0, 1, 2], 3).unwrap();
        let r = trace_space_check(&spec, &facet, 0).unwrap();
        assert_eq!(r.facet_orders, vec![4, 2, 0]);
        assert_eq!(r.degree, 9);
        assert_eq!(r.decomposition_total, 55);
        assert_eq!(r.expected_dimension, 55);
        assert!(r.ok());

        let r = trace_space_check(&spec, &facet, 1).unwrap();
        assert_eq!(r.facet_orders, vec![3, 1, 0]);
        assert_eq!(r.degree, 8);
        assert!(r.ok());

        assert!(trace_space_check(&spec, &facet, 2).is_err());
    }

    #[test]
    fn single_element_counts_match_mesh_tables() {
        let mesh = two_tetrahedra();
        // each cell contributes C(4, ℓ+1) faces before sharing
        assert_eq!(single_element_counts(3), vec![4, 6, 4, 1]);
        assert!(mesh.faces(2).iter().any(|f| f.cells.len() == 2));
    }
}
