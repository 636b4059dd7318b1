//! Vertex-described polytopes with exact facet enumeration, face lattice
//! fragments, and the facet-ridge graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::graph::Graph;
use crate::linalg::{affine_rank, hyperplane_through};
use crate::lp::{lp_max_margin, LpOutcome, LpProblem};
use crate::rat::{AffineFunctional, Rat, RVec};
use crate::symmetry::{Group, IndexAction};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("no vertices given")]
    Empty,
    #[error("vertex has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polytope is not full-dimensional: affine rank {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("symmetry group does not permute the vertex set")]
    GroupNotPermuting,
    #[error("face dimension {0} out of range")]
    DimOutOfRange(isize),
}

/// A facet certified by its defining functional: zero exactly on the facet's
/// vertices, strictly positive on every other vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub vertex_indices: Vec<usize>,
    pub functional: AffineFunctional,
}

/// A face identified with its (sorted) vertex index set; the empty face has
/// dimension −1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceId {
    pub vertex_indices: Vec<usize>,
    pub dim: isize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceCert {
    Facet(Facet),
    Face(FaceId),
    NotAFace,
}

#[derive(Debug, Clone)]
pub struct VertexPolytope {
    dim: usize,
    vertices: Vec<RVec>,
    symmetry: Option<(Group, IndexAction)>,
    facets: OnceLock<Vec<Facet>>,
    faces: OnceLock<Vec<FaceId>>,
}

impl VertexPolytope {
    /// Deduplicates input points (with a note on stderr) but keeps interior
    /// points if present; downstream checks detect them where it matters.
    pub fn new(dim: usize, points: Vec<RVec>) -> Result<Self, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        for p in &points {
            if p.len() != dim {
                return Err(PolytopeError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let mut seen: BTreeSet<&RVec> = BTreeSet::new();
        let mut vertices = Vec::with_capacity(points.len());
        for p in &points {
            if seen.insert(p) {
                vertices.push(p.clone());
            }
        }
        if vertices.len() < points.len() {
            eprintln!(
                "note: removed {} duplicate point(s)",
                points.len() - vertices.len()
            );
        }
        Ok(VertexPolytope {
            dim,
            vertices,
            symmetry: None,
            facets: OnceLock::new(),
            faces: OnceLock::new(),
        })
    }

    /// Attaches a symmetry group used to accelerate facet enumeration; the
    /// group must permute the vertex set.
    pub fn with_symmetry(mut self, group: Group) -> Result<Self, PolytopeError> {
        let action = IndexAction::new(&group, &self.vertices)
            .map_err(|_| PolytopeError::GroupNotPermuting)?;
        self.symmetry = Some((group, action));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn symmetry(&self) -> Option<&Group> {
        self.symmetry.as_ref().map(|(g, _)| g)
    }

    pub fn index_action(&self) -> Option<&IndexAction> {
        self.symmetry.as_ref().map(|(_, a)| a)
    }

    pub fn affine_rank(&self) -> usize {
        affine_rank(&self.vertices).expect("nonempty by construction")
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_rank() == self.dim
    }

    fn require_full_dimensional(&self) -> Result<(), PolytopeError> {
        let rank = self.affine_rank();
        if rank != self.dim {
            return Err(PolytopeError::NotFullDimensional {
                rank,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// Complete facet list, symmetry-accelerated when a group is attached.
    /// Enumerated once and cached.
    pub fn facets(&self) -> Result<&[Facet], PolytopeError> {
        self.require_full_dimensional()?;
        if let Some(f) = self.facets.get() {
            return Ok(f);
        }
        let computed = self.enumerate_facets()?;
        Ok(self.facets.get_or_init(|| computed))
    }

    /// Brute force over d-element vertex subsets, restricted to subsets
    /// canonical under the symmetry action; accepted facets (maximal zero
    /// sets, so coplanar subsets merge automatically) are replicated over the
    /// group.
    fn enumerate_facets(&self) -> Result<Vec<Facet>, PolytopeError> {
        let d = self.dim;
        let n = self.vertices.len();
        let action = self.symmetry.as_ref().map(|(_, a)| a);
        let mut found: BTreeMap<Vec<usize>, AffineFunctional> = BTreeMap::new();

        let mut subset: Vec<usize> = (0..d).collect();
        loop {
            let canonical = action.is_none_or(|a| a.is_canonical_subset(&subset));
            if canonical && !found.contains_key(&subset) {
                let points: Vec<RVec> = subset.iter().map(|&i| self.vertices[i].clone()).collect();
                if let Some(f) = hyperplane_through(&points) {
                    if let Some((zero_set, functional)) = self.facet_from_hyperplane(f) {
                        if !found.contains_key(&zero_set) {
                            self.replicate_facet(&zero_set, &functional, &mut found);
                        }
                    }
                }
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }

        let facets: Vec<Facet> = found
            .into_iter()
            .map(|(vertex_indices, functional)| Facet {
                vertex_indices,
                functional,
            })
            .collect();

        // Certificate check: zero exactly on the facet, positive elsewhere.
        for facet in &facets {
            let on: BTreeSet<usize> = facet.vertex_indices.iter().copied().collect();
            for (i, v) in self.vertices.iter().enumerate() {
                let val = facet.functional.eval(v);
                let ok = if on.contains(&i) {
                    val.is_zero()
                } else {
                    val.is_positive()
                };
                assert!(ok, "facet certificate violated at vertex {i}");
            }
        }
        Ok(facets)
    }

    /// Orients a candidate hyperplane and returns its zero set when all
    /// vertices lie weakly on one side.
    fn facet_from_hyperplane(
        &self,
        functional: AffineFunctional,
    ) -> Option<(Vec<usize>, AffineFunctional)> {
        let mut sign = 0i8;
        let mut zero_set = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let val = functional.eval(v);
            if val.is_zero() {
                zero_set.push(i);
            } else {
                let s = if val.is_positive() { 1 } else { -1 };
                if sign == 0 {
                    sign = s;
                } else if sign != s {
                    return None;
                }
            }
        }
        if sign == 0 {
            // All vertices coplanar: not full-dimensional input; callers have
            // already ruled this out.
            return None;
        }
        let oriented = if sign > 0 {
            functional
        } else {
            functional.negate()
        };
        Some((zero_set, oriented))
    }

    fn replicate_facet(
        &self,
        zero_set: &[usize],
        functional: &AffineFunctional,
        found: &mut BTreeMap<Vec<usize>, AffineFunctional>,
    ) {
        match &self.symmetry {
            None => {
                found.insert(zero_set.to_vec(), functional.clone());
            }
            Some((group, action)) => {
                for (gi, g) in group.elements().iter().enumerate() {
                    let img = action.image_of_set(gi, zero_set);
                    found.entry(img).or_insert_with(|| {
                        let lin = g.apply_functional(&functional.linear);
                        AffineFunctional::new(lin, functional.constant.clone())
                    });
                }
            }
        }
    }

    /// Decides whether `subset` is exactly the vertex set of a face, by
    /// searching for a functional vanishing on it and strictly positive on
    /// all other vertices.
    pub fn certify_face(&self, subset: &[usize]) -> Result<FaceCert, PolytopeError> {
        assert!(!subset.is_empty(), "certify_face requires a nonempty subset");
        let on: BTreeSet<usize> = subset.iter().copied().collect();
        // Variables: linear coefficients then the constant term.
        let mut lp = LpProblem::new(self.dim + 1);
        for (i, v) in self.vertices.iter().enumerate() {
            let mut row: RVec = v.clone();
            row.push(Rat::one());
            if on.contains(&i) {
                lp.equalities.push((row, Rat::zero()));
            } else {
                lp.strict.push((row, Rat::zero()));
            }
        }
        let outcome = lp_max_margin(&lp).expect("face LP is well-formed");
        let LpOutcome::Optimal { margin, assignment } = outcome else {
            return Ok(FaceCert::NotAFace);
        };
        if !margin.is_positive() {
            return Ok(FaceCert::NotAFace);
        }
        let functional = AffineFunctional::new(
            assignment[..self.dim].to_vec(),
            assignment[self.dim].clone(),
        );
        // Exact re-verification at every vertex.
        for (i, v) in self.vertices.iter().enumerate() {
            let val = functional.eval(v);
            let ok = if on.contains(&i) {
                val.is_zero()
            } else {
                val.is_positive()
            };
            assert!(ok, "certified functional failed exact re-check");
        }
        let mut sorted: Vec<usize> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let points: Vec<RVec> = sorted.iter().map(|&i| self.vertices[i].clone()).collect();
        let rank = affine_rank(&points).expect("nonempty") as isize;
        if rank == self.dim as isize - 1 {
            Ok(FaceCert::Facet(Facet {
                vertex_indices: sorted,
                functional,
            }))
        } else {
            Ok(FaceCert::Face(FaceId {
                vertex_indices: sorted,
                dim: rank,
            }))
        }
    }

    /// All proper faces (including the empty face, excluding the polytope
    /// itself), as the closure of facet vertex sets under intersection.
    pub fn all_faces(&self) -> Result<&[FaceId], PolytopeError> {
        if let Some(f) = self.faces.get() {
            return Ok(f);
        }
        let facets = self.facets()?;
        let facet_sets: Vec<BTreeSet<usize>> = facets
            .iter()
            .map(|f| f.vertex_indices.iter().copied().collect())
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
        seen.insert(Vec::new());
        for s in &facet_sets {
            if seen.insert(s.iter().copied().collect()) {
                queue.push_back(s.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            for g in &facet_sets {
                let inter: BTreeSet<usize> = f.intersection(g).copied().collect();
                if inter.len() < f.len() {
                    let key: Vec<usize> = inter.iter().copied().collect();
                    if seen.insert(key) {
                        queue.push_back(inter);
                    }
                }
            }
        }
        let computed: Vec<FaceId> = seen
            .into_iter()
            .map(|vertex_indices| {
                let dim = if vertex_indices.is_empty() {
                    -1
                } else {
                    let pts: Vec<RVec> = vertex_indices
                        .iter()
                        .map(|&i| self.vertices[i].clone())
                        .collect();
                    affine_rank(&pts).expect("nonempty") as isize
                };
                FaceId {
                    vertex_indices,
                    dim,
                }
            })
            .collect();
        Ok(self.faces.get_or_init(|| computed))
    }

    pub fn faces_of_dim(&self, j: isize) -> Result<Vec<FaceId>, PolytopeError> {
        if j < -1 || j >= self.dim as isize {
            return Err(PolytopeError::DimOutOfRange(j));
        }
        Ok(self
            .all_faces()?
            .iter()
            .filter(|f| f.dim == j)
            .cloned()
            .collect())
    }

    /// Graph on facet indices; edge iff the common vertices span a ridge.
    pub fn facet_ridge_graph(&self) -> Result<Graph<usize>, PolytopeError> {
        let facets = self.facets()?;
        let sets: Vec<BTreeSet<usize>> = facets
            .iter()
            .map(|f| f.vertex_indices.iter().copied().collect())
            .collect();
        let mut graph = Graph::new();
        for i in 0..facets.len() {
            graph.add_node(i);
        }
        for i in 0..facets.len() {
            for j in i + 1..facets.len() {
                let common: Vec<RVec> = sets[i]
                    .intersection(&sets[j])
                    .map(|&v| self.vertices[v].clone())
                    .collect();
                if common.len() >= self.dim - 1
                    && affine_rank(&common).expect("nonempty") == self.dim - 2
                {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok(graph)
    }

    /// Graded face graph: nodes are all proper faces including the empty
    /// face; edges join incident faces whose dimensions differ by 1.
    pub fn face_graph(&self) -> Result<Graph<FaceId>, PolytopeError> {
        let faces = self.all_faces()?.to_vec();
        let mut graph = Graph::new();
        for f in &faces {
            graph.add_node(f.clone());
        }
        for f in &faces {
            for g in &faces {
                if g.dim == f.dim + 1 && is_subset(&f.vertex_indices, &g.vertex_indices) {
                    graph.add_edge(f.clone(), g.clone());
                }
            }
        }
        Ok(graph)
    }

    /// True iff `point` lies on the negative side of the facet's hyperplane.
    pub fn is_visible(&self, facet: &Facet, point: &[Rat]) -> Result<bool, PolytopeError> {
        if point.len() != self.dim {
            return Err(PolytopeError::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        Ok(facet.functional.eval(point).is_negative())
    }
}

/// True iff sorted slice `a` is a subset of sorted slice `b`.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Advances `subset` to the next d-combination of `0..n` in lexicographic
/// order; returns false when exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let d = subset.len();
    let mut i = d;
    while i > 0 {
        i -= 1;
        if subset[i] < n - d + i {
            subset[i] += 1;
            for j in i + 1..d {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
