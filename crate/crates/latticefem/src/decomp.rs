//! Partitions of the simplicial lattice into pieces owned by sub-simplices:
//! the Lagrange, Hermite and smooth (`C^m`) geometric decompositions.

use crate::lattice::{
    delta, dist_to_face, enumerate_lattice, interior_nodes, LatticeError, LatticeSet, MultiIndex,
    SubSimplex,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("constraint violation: {}", .0.join("; "))]
    Constraints(Vec<String>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("malformed decomposition JSON: {0}")]
    Json(String),
}

/// Per-dimension continuity orders `r = (r_0, …, r_n)` together with the
/// polynomial degree `k`. Valid vectors satisfy `r_n = 0`,
/// `r_ℓ ≥ 2 r_{ℓ+1}` for `ℓ ≤ n−2`, and `k ≥ 2 r_0 + 1`; the facet order
/// `m = r_{n−1}` is the conformity order of the element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmoothnessVector {
    r: Vec<u32>,
    k: u32,
}

impl SmoothnessVector {
    pub fn new(r: &[u32], k: u32) -> Result<Self, DecompError> {
        validate_smoothness_vector(r, k)
    }

    pub fn n(&self) -> usize {
        self.r.len() - 1
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Facet smoothness order `m = r_{n−1}`.
    pub fn m(&self) -> u32 {
        self.r[self.r.len() - 2]
    }

    /// Order `r_ℓ` at `ℓ`-dimensional sub-simplices.
    pub fn order(&self, ell: usize) -> u32 {
        self.r[ell]
    }

    pub fn orders(&self) -> &[u32] {
        &self.r
    }
}

/// Checks the smoothness-vector constraints, returning either the validated
/// vector or every violated constraint by name.
pub fn validate_smoothness_vector(r: &[u32], k: u32) -> Result<SmoothnessVector, DecompError> {
    let mut violations = Vec::new();
    if r.len() < 2 {
        return Err(DecompError::Constraints(vec![
            "smoothness vector needs at least two entries (n ≥ 1)".into(),
        ]));
    }
    let n = r.len() - 1;
    if r[n] != 0 {
        violations.push(format!("r_n = 0 (got r_{n} = {})", r[n]));
    }
    for ell in (0..n.saturating_sub(1)).rev() {
        if r[ell] < 2 * r[ell + 1] {
            violations.push(format!(
                "r_{ell} ≥ 2 r_{} (got {} < {})",
                ell + 1,
                r[ell],
                2 * r[ell + 1]
            ));
        }
    }
    if k < 2 * r[0] + 1 {
        violations.push(format!("k ≥ 2 r_0 + 1 (got {k} < {})", 2 * r[0] + 1));
    }
    if violations.is_empty() {
        Ok(SmoothnessVector { r: r.to_vec(), k })
    } else {
        Err(DecompError::Constraints(violations))
    }
}

/// Which family produced a decomposition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecompositionKind {
    Lagrange,
    Hermite { m: u32 },
    Smooth { r: Vec<u32> },
}

/// One owned piece: the sub-simplex `f` and its node set `S_ℓ(f)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Piece {
    pub face: SubSimplex,
    pub nodes: LatticeSet,
}

/// A partition of `T^n_k` into pieces indexed by every sub-simplex of every
/// dimension (pieces may be empty). Piece order is canonical: dimension
/// ascending, then lexicographic on the vertex labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeDecomposition {
    n: usize,
    k: u32,
    kind: DecompositionKind,
    pieces: Vec<Piece>,
}

impl LatticeDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> &DecompositionKind {
        &self.kind
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece(&self, face: &SubSimplex) -> Option<&LatticeSet> {
        self.pieces.iter().find(|p| &p.face == face).map(|p| &p.nodes)
    }

    /// Total node count over all pieces.
    pub fn total(&self) -> usize {
        self.pieces.iter().map(|p| p.nodes.len()).sum()
    }

    /// Owner faces at a given level, with their piece sizes.
    pub fn level_sizes(&self, ell: usize) -> Vec<(SubSimplex, usize)> {
        self.pieces
            .iter()
            .filter(|p| !p.face.is_empty() && p.face.dim() == ell)
            .map(|p| (p.face.clone(), p.nodes.len()))
            .collect()
    }

    /// Test-support constructor for adversarial partition reports.
    pub fn from_pieces(n: usize, k: u32, kind: DecompositionKind, pieces: Vec<Piece>) -> Self {
        LatticeDecomposition { n, k, kind, pieces }
    }
}

fn canonical_faces(n: usize) -> Vec<SubSimplex> {
    (0..=n).flat_map(|ell| delta(ell, n)).collect()
}

/// Lagrange decomposition: each node is owned by its support, so vertices
/// own the single node `k·e_v` and each higher `f` owns its interior nodes.
pub fn lagrange_decomposition(n: usize, k: u32) -> Result<LatticeDecomposition, DecompError> {
    if k == 0 {
        return Err(DecompError::InvalidArgument(
            "Lagrange decomposition requires k ≥ 1 (no vertex nodes at k = 0)".into(),
        ));
    }
    let mut pieces = Vec::new();
    for face in canonical_faces(n) {
        let nodes = if face.dim() == 0 {
            LatticeSet::from_nodes(
                n,
                k,
                vec![MultiIndex::vertex_node(face.indices()[0], n, k)],
            )?
        } else {
            interior_nodes(&face, k)?
        };
        pieces.push(Piece { face, nodes });
    }
    Ok(LatticeDecomposition { n, k, kind: DecompositionKind::Lagrange, pieces })
}

/// Hermite decomposition: vertex disks `D(v, m)`, and for each higher `f` its
/// interior nodes minus the vertex disks of `f`.
pub fn hermite_decomposition(n: usize, k: u32, m: u32) -> Result<LatticeDecomposition, DecompError> {
    if k < 2 * m + 1 {
        return Err(DecompError::Constraints(vec![format!(
            "k ≥ 2m + 1 (got k = {k}, m = {m})"
        )]));
    }
    let mut pieces = Vec::new();
    for face in canonical_faces(n) {
        let nodes = if face.dim() == 0 {
            let v = face.indices()[0];
            let all = enumerate_lattice(n, k)?;
            let nodes: Vec<MultiIndex> = all
                .iter()
                .filter(|a| dist_to_face(a, &face) <= m)
                .cloned()
                .collect();
            debug_assert!(nodes.iter().all(|a| a.entry(v) >= k - m));
            LatticeSet::from_nodes(n, k, nodes)?
        } else {
            let inner = interior_nodes(&face, k)?;
            let kept: Vec<MultiIndex> = inner
                .iter()
                .filter(|a| {
                    face.indices()
                        .iter()
                        .all(|&v| dist_to_face(a, &SubSimplex::vertex(v, n)) > m)
                })
                .cloned()
                .collect();
            LatticeSet::from_nodes(n, k, kept)?
        };
        pieces.push(Piece { face, nodes });
    }
    Ok(LatticeDecomposition { n, k, kind: DecompositionKind::Hermite { m }, pieces })
}

/// Smooth decomposition: `S_0(v) = D(v, r_0)`,
/// `S_ℓ(f) = D(f, r_ℓ) \ ⋃_{i<ℓ} ⋃_{e ∈ Δ_i} D(e, r_i)`, remainder interior.
///
/// Membership is computed with an ownership array over the full lattice,
/// sweeping levels upward; within a level the assignment order is fixed even
/// though pieces of the same level cannot overlap for a valid vector.
pub fn smooth_decomposition(sv: &SmoothnessVector) -> Result<LatticeDecomposition, DecompError> {
    let (n, k) = (sv.n(), sv.k());
    let all = enumerate_lattice(n, k)?;
    let mut owner: Vec<Option<usize>> = vec![None; all.len()];
    let faces = canonical_faces(n);
    for (face_id, face) in faces.iter().enumerate() {
        let ell = face.dim();
        if ell == n {
            for slot in owner.iter_mut() {
                slot.get_or_insert(face_id);
            }
            break;
        }
        let radius = sv.order(ell);
        for (idx, node) in all.iter().enumerate() {
            if owner[idx].is_none() && dist_to_face(node, face) <= radius {
                owner[idx] = Some(face_id);
            }
        }
    }
    let mut pieces = Vec::with_capacity(faces.len());
    for (face_id, face) in faces.iter().enumerate() {
        let nodes: Vec<MultiIndex> = all
            .iter()
            .enumerate()
            .filter(|(idx, _)| owner[*idx] == Some(face_id))
            .map(|(_, a)| a.clone())
            .collect();
        pieces.push(Piece { face: face.clone(), nodes: LatticeSet::from_nodes(n, k, nodes)? });
    }
    Ok(LatticeDecomposition {
        n,
        k,
        kind: DecompositionKind::Smooth { r: sv.orders().to_vec() },
        pieces,
    })
}

/// Closed-form membership test for `S_ℓ(f)` by the distance inequalities:
/// `|α_{f*}| ≤ r_ℓ` and `|α_e| ≤ k − r_i − 1` for every `e ∈ Δ_i(f)`,
/// `i < ℓ` (for the interior piece the bound applies to every proper `e`).
pub fn smooth_membership_by_inequalities(
    alpha: &MultiIndex,
    face: &SubSimplex,
    sv: &SmoothnessVector,
) -> bool {
    let n = sv.n();
    let ell = face.dim();
    if ell < n && dist_to_face(alpha, face) > sv.order(ell) {
        return false;
    }
    let limit = if ell == n { n } else { ell };
    for i in 0..limit {
        for e in face.sub_simplices(i) {
            let on_e: u32 = e.indices().iter().map(|&j| alpha.entry(j)).sum();
            if on_e + sv.order(i) + 1 > sv.k() {
                return false;
            }
        }
    }
    true
}

/// Brute-force partition verification: every lattice node must be claimed by
/// exactly one piece. Witnesses list the nodes claimed twice or never.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionReport {
    pub disjoint: bool,
    pub covering: bool,
    pub duplicated: Vec<MultiIndex>,
    pub missing: Vec<MultiIndex>,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.disjoint && self.covering
    }
}

pub fn verify_partition(d: &LatticeDecomposition) -> Result<PartitionReport, DecompError> {
    let all = enumerate_lattice(d.n, d.k)?;
    let mut duplicated = Vec::new();
    let mut missing = Vec::new();
    for node in all.iter() {
        let count = d.pieces.iter().filter(|p| p.nodes.contains(node)).count();
        if count == 0 {
            missing.push(node.clone());
        } else if count > 1 {
            duplicated.push(node.clone());
        }
    }
    Ok(PartitionReport {
        disjoint: duplicated.is_empty(),
        covering: missing.is_empty(),
        duplicated,
        missing,
    })
}

// --- JSON form -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DecompositionDto {
    n: usize,
    k: u32,
    kind: String,
    params: serde_json::Value,
    pieces: Vec<PieceDto>,
}

#[derive(Serialize, Deserialize)]
struct PieceDto {
    face: Vec<usize>,
    nodes: Vec<Vec<u32>>,
}

impl LatticeDecomposition {
    /// Canonical JSON form; byte-stable across runs for identical inputs.
    pub fn to_json(&self) -> String {
        let (kind, params) = match &self.kind {
            DecompositionKind::Lagrange => ("lagrange".to_string(), serde_json::json!({})),
            DecompositionKind::Hermite { m } => ("hermite".to_string(), serde_json::json!({ "m": m })),
            DecompositionKind::Smooth { r } => ("smooth".to_string(), serde_json::json!({ "r": r })),
        };
        let dto = DecompositionDto {
            n: self.n,
            k: self.k,
            kind,
            params,
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceDto {
                    face: p.face.indices().to_vec(),
                    nodes: p.nodes.iter().map(|a| a.entries().to_vec()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("decomposition serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, DecompError> {
        let dto: DecompositionDto =
            serde_json::from_str(text).map_err(|e| DecompError::Json(e.to_string()))?;
        let kind = match dto.kind.as_str() {
            "lagrange" => DecompositionKind::Lagrange,
            "hermite" => {
                let m = dto.params.get("m").and_then(|v| v.as_u64()).ok_or_else(|| {
                    DecompError::Json("hermite decomposition needs params.m".into())
                })?;
                DecompositionKind::Hermite { m: m as u32 }
            }
            "smooth" => {
                let r = dto
                    .params
                    .get("r")
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| DecompError::Json("smooth decomposition needs params.r".into()))?
                    .iter()
                    .map(|v| v.as_u64().map(|x| x as u32))
                    .collect::<Option<Vec<u32>>>()
                    .ok_or_else(|| DecompError::Json("params.r must be nonnegative integers".into()))?;
                DecompositionKind::Smooth { r }
            }
            other => return Err(DecompError::Json(format!("unknown decomposition kind `{other}`"))),
        };
        let mut pieces = Vec::with_capacity(dto.pieces.len());
        for p in dto.pieces {
            let face = SubSimplex::new(p.face, dto.n)
                .map_err(|e| DecompError::Json(format!("bad piece face: {e}")))?;
            let nodes = LatticeSet::from_nodes(
                dto.n,
                dto.k,
                p.nodes.into_iter().map(MultiIndex::new).collect(),
            )
            .map_err(|e| DecompError::Json(format!("bad piece nodes: {e}")))?;
            pieces.push(Piece { face, nodes });
        }
        Ok(LatticeDecomposition { n: dto.n, k: dto.k, kind, pieces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes_by_level(d: &LatticeDecomposition) -> Vec<Vec<usize>> {
        (0..=d.n())
            .map(|ell| d.level_sizes(ell).into_iter().map(|(_, s)| s).collect())
            .collect()
    }

    #[test]
    fn lagrange_triangle_cubic() {
        let d = lagrange_decomposition(2, 3).unwrap();
        assert_eq!(sizes_by_level(&d), vec![vec![1, 1, 1], vec![2, 2, 2], vec![1]]);
        assert_eq!(d.total(), 10);
        assert!(verify_partition(&d).unwrap().ok());
    }

    #[test]
    fn lagrange_linear_is_vertices_only() {
        let d = lagrange_decomposition(2, 1).unwrap();
        assert_eq!(sizes_by_level(&d), vec![vec![1, 1, 1], vec![0, 0, 0], vec![0]]);
    }

    #[test]
    fn lagrange_tetrahedron_quartic() {
        let d = lagrange_decomposition(3, 4).unwrap();
        assert_eq!(
            sizes_by_level(&d),
            vec![vec![1; 4], vec![3; 6], vec![3; 4], vec![1]]
        );
        assert_eq!(d.total(), 35);
        assert!(verify_partition(&d).unwrap().ok());
    }

    #[test]
    fn lagrange_rejects_degree_zero() {
        assert!(matches!(lagrange_decomposition(2, 0), Err(DecompError::InvalidArgument(_))));
    }

    #[test]
    fn hermite_triangle_cubic() {
        let d = hermite_decomposition(2, 3, 1).unwrap();
        assert_eq!(sizes_by_level(&d), vec![vec![3, 3, 3], vec![0, 0, 0], vec![1]]);
        assert_eq!(d.total(), 10);
        assert!(verify_partition(&d).unwrap().ok());
    }

    #[test]
    fn hermite_m0_is_lagrange() {
        for (n, k) in [(1, 3), (2, 4), (3, 2)] {
            let h = hermite_decomposition(n, k, 0).unwrap();
            let l = lagrange_decomposition(n, k).unwrap();
            assert_eq!(h.pieces(), l.pieces());
        }
    }

    #[test]
    fn hermite_interval() {
        let d = hermite_decomposition(1, 3, 1).unwrap();
        assert_eq!(sizes_by_level(&d), vec![vec![2, 2], vec![0]]);
        assert_eq!(d.total(), 4);
    }

    #[test]
    fn hermite_degree_constraint() {
        assert!(matches!(hermite_decomposition(2, 2, 1), Err(DecompError::Constraints(_))));
    }

    #[test]
    fn hermite_piece_matches_shifted_disk_form() {
        // interior(f) \ D(Δ_0(f), m) corresponds, under α ↦ α − 1 on f, to
        // the smaller lattice minus vertex disks of radius m − ℓ
        let (n, k, m) = (3usize, 7u32, 2u32);
        let d = hermite_decomposition(n, k, m).unwrap();
        for piece in d.pieces() {
            if piece.face.dim() == 0 {
                continue;
            }
            let f = &piece.face;
            let ell = f.dim() as u32;
            let inner = crate::lattice::interior_nodes(f, k).unwrap();
            let expected: Vec<MultiIndex> = inner
                .iter()
                .filter(|a| {
                    let w = crate::lattice::interior_shift_down(a, f).unwrap();
                    let total: u32 = w.iter().sum();
                    // in the shifted lattice node w avoids D(v, m − ℓ) iff
                    // the mass away from v exceeds m − ℓ
                    w.iter().all(|&wv| m < ell || total - wv > m - ell)
                })
                .cloned()
                .collect();
            let expected = LatticeSet::from_nodes(n, k, expected).unwrap();
            assert_eq!(piece.nodes, expected, "face {:?}", f);
        }
    }

    #[test]
    fn smoothness_vector_validation() {
        assert!(validate_smoothness_vector(&[2, 1, 0], 5).is_ok());
        let err = validate_smoothness_vector(&[1, 1, 0], 5).unwrap_err();
        assert!(format!("{err}").contains("r_0 ≥ 2 r_1"));
        let err = validate_smoothness_vector(&[2, 1, 0], 4).unwrap_err();
        assert!(format!("{err}").contains("k ≥ 2 r_0 + 1"));
        let err = validate_smoothness_vector(&[2, 1, 3], 7).unwrap_err();
        assert!(format!("{err}").contains("r_n = 0"));
    }

    #[test]
    fn argyris_decomposition_sizes() {
        let sv = SmoothnessVector::new(&[2, 1, 0], 5).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        assert_eq!(sizes_by_level(&d), vec![vec![6, 6, 6], vec![1, 1, 1], vec![0]]);
        assert_eq!(d.total(), 21);
        assert!(verify_partition(&d).unwrap().ok());
    }

    #[test]
    fn c2_triangle_decomposition_sizes() {
        let sv = SmoothnessVector::new(&[4, 2, 0], 9).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        assert_eq!(sizes_by_level(&d), vec![vec![15, 15, 15], vec![3, 3, 3], vec![1]]);
        assert_eq!(d.total(), 55);
    }

    #[test]
    fn smooth_zero_vector_is_lagrange() {
        for (n, k) in [(1usize, 4u32), (2, 3), (3, 5)] {
            let sv = SmoothnessVector::new(&vec![0; n + 1], k).unwrap();
            let s = smooth_decomposition(&sv).unwrap();
            let l = lagrange_decomposition(n, k).unwrap();
            assert_eq!(s.pieces(), l.pieces());
        }
    }

    #[test]
    fn smooth_membership_matches_inequalities() {
        let sv = SmoothnessVector::new(&[4, 2, 1, 0], 9).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        for piece in d.pieces() {
            for a in enumerate_lattice(3, 9).unwrap().iter() {
                assert_eq!(
                    piece.nodes.contains(a),
                    smooth_membership_by_inequalities(a, &piece.face, &sv),
                    "node {a:?} vs face {:?}",
                    piece.face
                );
            }
        }
    }

    #[test]
    fn smooth_2d_matches_direct_construction() {
        // S_0 = vertex tubes, S_1 = edge tubes minus S_0, S_2 = remainder
        let sv = SmoothnessVector::new(&[3, 1, 0], 8).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        let all = enumerate_lattice(2, 8).unwrap();
        for piece in d.pieces() {
            let expect: Vec<MultiIndex> = match piece.face.dim() {
                0 => all
                    .iter()
                    .filter(|a| dist_to_face(a, &piece.face) <= 3)
                    .cloned()
                    .collect(),
                1 => all
                    .iter()
                    .filter(|a| {
                        dist_to_face(a, &piece.face) <= 1
                            && (0..3).all(|v| dist_to_face(a, &SubSimplex::vertex(v, 2)) > 3)
                    })
                    .cloned()
                    .collect(),
                _ => all
                    .iter()
                    .filter(|a| {
                        (0..3).all(|v| dist_to_face(a, &SubSimplex::vertex(v, 2)) > 3)
                            && delta(1, 2).iter().all(|e| dist_to_face(a, e) > 1)
                    })
                    .cloned()
                    .collect(),
            };
            assert_eq!(piece.nodes, LatticeSet::from_nodes(2, 8, expect).unwrap());
        }
    }

    #[test]
    fn same_level_pieces_avoid_each_others_tubes() {
        // S_ℓ(f) ∩ D(f̃, r_ℓ) = ∅ for f ≠ f̃ of the same dimension
        let sv = SmoothnessVector::new(&[4, 2, 1, 0], 9).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        for ell in 1..3usize {
            for piece in d.pieces().iter().filter(|p| p.face.dim() == ell) {
                for other in delta(ell, 3) {
                    if other == piece.face {
                        continue;
                    }
                    for a in piece.nodes.iter() {
                        assert!(dist_to_face(a, &other) > sv.order(ell));
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_piece_size_is_binomial() {
        let sv = SmoothnessVector::new(&[4, 2, 1, 0], 9).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        for (_, size) in d.level_sizes(0) {
            assert_eq!(size, 35); // C(3+4, 4)
        }
    }

    #[test]
    fn adversarial_overlap_is_witnessed() {
        let n = 1;
        let k = 1;
        let node = MultiIndex::new(vec![1, 0]);
        let dup = LatticeSet::from_nodes(n, k, vec![node.clone()]).unwrap();
        let d = LatticeDecomposition::from_pieces(
            n,
            k,
            DecompositionKind::Lagrange,
            vec![
                Piece { face: SubSimplex::vertex(0, 1), nodes: dup.clone() },
                Piece { face: SubSimplex::vertex(1, 1), nodes: dup },
                Piece { face: SubSimplex::full(1), nodes: LatticeSet::empty(n, k) },
            ],
        );
        let report = verify_partition(&d).unwrap();
        assert!(!report.disjoint);
        assert!(!report.covering);
        assert_eq!(report.duplicated, vec![node]);
        assert_eq!(report.missing, vec![MultiIndex::new(vec![0, 1])]);
    }

    #[test]
    fn json_round_trip_and_stability() {
        let sv = SmoothnessVector::new(&[2, 1, 0], 5).unwrap();
        let d = smooth_decomposition(&sv).unwrap();
        let text = d.to_json();
        assert_eq!(text, d.to_json());
        let back = LatticeDecomposition::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert!(text.contains("\"kind\": \"smooth\""));

        let h = hermite_decomposition(2, 3, 1).unwrap();
        let back = LatticeDecomposition::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
    }
}
