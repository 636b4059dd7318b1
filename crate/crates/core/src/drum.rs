//! Drums: polytopes with two parallel skins at last coordinate ±1, their
//! width, facet-vertex maps, pair embedding, incidence pattern, and the two
//! membership oracles for the image of the pair embedding.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, Graph};
use crate::linalg::affine_rank;
use crate::lp::{lp_max_margin, LpOutcome, LpProblem};
use crate::polytope::{Facet, FaceId, PolytopeError, VertexPolytope};
use crate::rat::{AffineFunctional, Rat, RVec};
use crate::symmetry::Group;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DrumError {
    #[error("a skin is empty: no vertex with last coordinate {0}")]
    EmptySkin(i8),
    #[error("drum is not full-dimensional")]
    NotFullDim,
    #[error("point has last coordinate other than ±1")]
    NonUnitLastCoordinate,
    #[error("skin at last coordinate {0} is not a facet")]
    SkinNotFacet(i8),
    #[error("drum is not simplicial: facet with {0} vertices in dimension {1}")]
    NotSimplicial(usize, usize),
    #[error("facet functional attains its minimum at more than one opposite-skin vertex")]
    NonUniqueMinimum,
    #[error("face is not a ridge of the skin")]
    NotARidge,
    #[error("pair dimensions {0} + {1} do not sum to {2}")]
    DimensionSumViolation(isize, isize, isize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

/// A non-skin facet with its intersections with the two skins, recorded in
/// projected-skin vertex indexing; `height` is the dimension of the top part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrumFacet {
    pub facet: Facet,
    pub f_bot: FaceId,
    pub f_top: FaceId,
    pub height: isize,
}

#[derive(Debug, Clone)]
pub struct Drum {
    polytope: VertexPolytope,
    skin_minus: Vec<usize>,
    skin_plus: Vec<usize>,
    proj_minus: VertexPolytope,
    proj_plus: VertexPolytope,
    drum_facets: OnceLock<Vec<DrumFacet>>,
}

/// Builds a drum from full-dimensional points with last coordinate ±1.
/// Skin facets are enumerated eagerly (they are (d−1)-polytopes); full
/// facets only on demand. A symmetry group for the full point set, when
/// given, is attached to the polytope and induced on the skins.
pub fn make_drum(points: Vec<RVec>, symmetry: Option<Group>) -> Result<Drum, DrumError> {
    let Some(first) = points.first() else {
        return Err(DrumError::NotFullDim);
    };
    let d = first.len();
    if d < 2 {
        return Err(DrumError::NotFullDim);
    }
    for p in &points {
        if p.len() != d {
            return Err(DrumError::NotFullDim);
        }
        let z = &p[d - 1];
        if *z != Rat::one() && *z != -Rat::one() {
            return Err(DrumError::NonUnitLastCoordinate);
        }
    }
    let mut polytope = VertexPolytope::new(d, points)?;
    if let Some(group) = &symmetry {
        polytope = polytope
            .with_symmetry(group.clone())
            .map_err(DrumError::Polytope)?;
    }
    let mut skin_minus = Vec::new();
    let mut skin_plus = Vec::new();
    for (i, v) in polytope.vertices().iter().enumerate() {
        if v[d - 1] == Rat::one() {
            skin_plus.push(i);
        } else {
            skin_minus.push(i);
        }
    }
    if skin_minus.is_empty() {
        return Err(DrumError::EmptySkin(-1));
    }
    if skin_plus.is_empty() {
        return Err(DrumError::EmptySkin(1));
    }
    if !polytope.is_full_dimensional() {
        return Err(DrumError::NotFullDim);
    }

    // Induced skin symmetry: elements fixing the last coordinate (position
    // and sign) restrict to the projected skins.
    let induced = symmetry.as_ref().map(|group| {
        let gens: Vec<_> = group
            .elements()
            .iter()
            .filter(|g| g.image_of(d - 1) == d - 1 && g.sign_of(d - 1) == 1)
            .filter_map(|g| g.restrict(d - 1))
            .collect();
        Group::generate(d - 1, &gens)
    });

    let project = |idx: &[usize]| -> Vec<RVec> {
        idx.iter()
            .map(|&i| polytope.vertices()[i][..d - 1].to_vec())
            .collect()
    };
    let mut proj_minus = VertexPolytope::new(d - 1, project(&skin_minus))?;
    let mut proj_plus = VertexPolytope::new(d - 1, project(&skin_plus))?;
    if let Some(g) = induced {
        proj_minus = proj_minus.with_symmetry(g.clone())?;
        proj_plus = proj_plus.with_symmetry(g)?;
    }
    if proj_minus.affine_rank() != d - 1 {
        return Err(DrumError::SkinNotFacet(-1));
    }
    if proj_plus.affine_rank() != d - 1 {
        return Err(DrumError::SkinNotFacet(1));
    }
    Ok(Drum {
        polytope,
        skin_minus,
        skin_plus,
        proj_minus,
        proj_plus,
        drum_facets: OnceLock::new(),
    })
}

impl Drum {
    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn polytope(&self) -> &VertexPolytope {
        &self.polytope
    }

    /// Drum-vertex indices of the requested skin; entry `j` is the drum
    /// index of vertex `j` of the corresponding projected skin.
    pub fn skin(&self, side: Side) -> &[usize] {
        match side {
            Side::Minus => &self.skin_minus,
            Side::Plus => &self.skin_plus,
        }
    }

    /// The skin as a (d−1)-dimensional polytope with the last coordinate
    /// dropped.
    pub fn projected_skin(&self, side: Side) -> &VertexPolytope {
        match side {
            Side::Minus => &self.proj_minus,
            Side::Plus => &self.proj_plus,
        }
    }

    /// All non-skin facets with their skin decompositions; enumerating them
    /// performs the simpliciality check.
    pub fn drum_facets(&self) -> Result<&[DrumFacet], DrumError> {
        if let Some(f) = self.drum_facets.get() {
            return Ok(f);
        }
        let d = self.dim();
        let minus: BTreeSet<usize> = self.skin_minus.iter().copied().collect();
        let mut out = Vec::new();
        for facet in self.polytope.facets()? {
            if facet.vertex_indices == self.skin_minus || facet.vertex_indices == self.skin_plus {
                continue;
            }
            if facet.vertex_indices.len() != d {
                return Err(DrumError::NotSimplicial(facet.vertex_indices.len(), d));
            }
            let (bot, top): (Vec<usize>, Vec<usize>) = facet
                .vertex_indices
                .iter()
                .partition(|i| minus.contains(i));
            let f_bot = self.projected_face(Side::Minus, &bot);
            let f_top = self.projected_face(Side::Plus, &top);
            if f_bot.dim + f_top.dim != d as isize - 2 {
                return Err(DrumError::DimensionSumViolation(
                    f_bot.dim,
                    f_top.dim,
                    d as isize - 2,
                ));
            }
            let height = f_top.dim;
            out.push(DrumFacet {
                facet: facet.clone(),
                f_bot,
                f_top,
                height,
            });
        }
        Ok(self.drum_facets.get_or_init(|| out))
    }

    /// Converts drum-vertex indices on one skin into a projected-skin FaceId.
    fn projected_face(&self, side: Side, drum_indices: &[usize]) -> FaceId {
        let skin = self.skin(side);
        let proj = self.projected_skin(side);
        let mut vertex_indices: Vec<usize> = drum_indices
            .iter()
            .map(|i| skin.binary_search(i).expect("index lies on the skin"))
            .collect();
        vertex_indices.sort_unstable();
        let dim = if vertex_indices.is_empty() {
            -1
        } else {
            let pts: Vec<RVec> = vertex_indices
                .iter()
                .map(|&j| proj.vertices()[j].clone())
                .collect();
            affine_rank(&pts).expect("nonempty") as isize
        };
        FaceId {
            vertex_indices,
            dim,
        }
    }

    fn skin_facet_node(&self, graph: &Graph<usize>, side: Side) -> Option<usize> {
        let target = self.skin(side);
        self.polytope
            .facets()
            .ok()?
            .iter()
            .position(|f| f.vertex_indices == *target)
            .and_then(|i| graph.node_index(&i))
    }

    /// True iff every non-skin facet is a simplex. Requires full facet
    /// enumeration.
    pub fn is_simplicial(&self) -> Result<bool, DrumError> {
        let d = self.dim();
        Ok(self.polytope.facets()?.iter().all(|f| {
            f.vertex_indices.len() == d
                || f.vertex_indices == self.skin_minus
                || f.vertex_indices == self.skin_plus
        }))
    }

    /// Width: distance between the two skins in the facet-ridge graph. For
    /// simplicial drums the value is cross-checked against the trimmed-graph
    /// formulation `2 + min dist(height 0, height d−2)`; non-simplicial
    /// drums (where the height grading is undefined) skip the cross-check.
    pub fn width(&self) -> Result<usize, DrumError> {
        let graph = self.polytope.facet_ridge_graph()?;
        let a = self
            .skin_facet_node(&graph, Side::Minus)
            .ok_or(DrumError::SkinNotFacet(-1))?;
        let b = self
            .skin_facet_node(&graph, Side::Plus)
            .ok_or(DrumError::SkinNotFacet(1))?;
        let width = graph.distances_from(a)[b].expect("facet-ridge graph is connected");
        if !self.is_simplicial()? {
            return Ok(width);
        }

        // Height-graded cross-check on the trimmed graph.
        let d = self.dim() as isize;
        let drum_facets = self.drum_facets()?;
        let facets = self.polytope.facets()?;
        let mut trimmed: Graph<usize> = Graph::new();
        let heights: BTreeMap<usize, isize> = drum_facets
            .iter()
            .map(|df| {
                let idx = facets
                    .iter()
                    .position(|f| f.vertex_indices == df.facet.vertex_indices)
                    .expect("drum facet is a facet");
                (idx, df.height)
            })
            .collect();
        for &i in heights.keys() {
            trimmed.add_node(i);
        }
        for (i, &gi) in graph.keys().iter().enumerate() {
            if !heights.contains_key(&gi) {
                continue;
            }
            for &j in graph.neighbors(i) {
                let gj = graph.keys()[j];
                if heights.contains_key(&gj) {
                    trimmed.add_edge(gi, gj);
                }
            }
        }
        let sources: Vec<usize> = heights
            .iter()
            .filter(|&(_, &h)| h == 0)
            .map(|(&i, _)| trimmed.node_index(&i).unwrap())
            .collect();
        let targets: Vec<usize> = heights
            .iter()
            .filter(|&(_, &h)| h == d - 2)
            .map(|(&i, _)| trimmed.node_index(&i).unwrap())
            .collect();
        let trimmed_width = trimmed
            .min_distance_between(&sources, &targets)
            .map(|m| m + 2)
            .expect("trimmed graph connects the two height extremes");
        assert_eq!(
            width, trimmed_width,
            "facet-ridge width disagrees with the trimmed-graph formulation"
        );
        Ok(width)
    }

    /// Facet-vertex map for the given skin: each facet of that skin goes to
    /// the unique vertex of the opposite projected skin minimizing its
    /// defining functional. Keyed by facet index in the skin's facet list;
    /// values are opposite projected-skin vertex indices.
    pub fn facet_vertex_map(&self, side: Side) -> Result<Vec<usize>, DrumError> {
        let skin = self.projected_skin(side);
        let opposite = self.projected_skin(side.opposite());
        let mut map = Vec::new();
        for facet in skin.facets()? {
            map.push(argmin_vertex(&facet.functional, opposite)?);
        }
        Ok(map)
    }

    /// Bipartite digraph on skin facets: arc from facet F to every
    /// opposite-skin facet containing the image vertex of F.
    pub fn incidence_pattern(&self) -> Result<Digraph<(Side, usize)>, DrumError> {
        let mut graph = Digraph::new();
        for side in [Side::Plus, Side::Minus] {
            let map = self.facet_vertex_map(side)?;
            let opposite = self.projected_skin(side.opposite());
            for fi in 0..map.len() {
                graph.add_node((side, fi));
            }
            for (fi, &v) in map.iter().enumerate() {
                for (gi, g) in opposite.facets()?.iter().enumerate() {
                    if g.vertex_indices.binary_search(&v).is_ok() {
                        graph.add_arc((side, fi), (side.opposite(), gi));
                    }
                }
            }
        }
        Ok(graph)
    }

    pub fn has_oriented_two_cycle(&self) -> Result<bool, DrumError> {
        Ok(self.incidence_pattern()?.find_two_cycle().is_some())
    }

    /// The image of the pair embedding, computed from the full facet list:
    /// each non-skin facet contributes (F ∩ skin⁻, F ∩ skin⁺) in projected
    /// indexing. Injectivity is checked.
    pub fn pair_embedding_by_enumeration(&self) -> Result<BTreeSet<(FaceId, FaceId)>, DrumError> {
        let mut image = BTreeSet::new();
        for df in self.drum_facets()? {
            let fresh = image.insert((df.f_bot.clone(), df.f_top.clone()));
            assert!(fresh, "pair embedding is not injective");
        }
        Ok(image)
    }

    /// LP oracle for membership in the image of the pair embedding: true iff
    /// some functional on R^{d−1} has minimum face exactly `f_minus` on the
    /// bottom projected skin and exactly `f_plus` on the top one. Returns the
    /// witness functional on success.
    pub fn pair_in_image_lp(
        &self,
        f_minus: &FaceId,
        f_plus: &FaceId,
    ) -> Result<Option<AffineFunctional>, DrumError> {
        let d = self.dim();
        if f_minus.dim + f_plus.dim != d as isize - 2 {
            return Err(DrumError::DimensionSumViolation(
                f_minus.dim,
                f_plus.dim,
                d as isize - 2,
            ));
        }
        // Unknowns: d−1 functional coefficients, then levels c⁻, c⁺.
        let mut lp = LpProblem::new(d + 1);
        for (side, face) in [(Side::Minus, f_minus), (Side::Plus, f_plus)] {
            let proj = self.projected_skin(side);
            let on: BTreeSet<usize> = face.vertex_indices.iter().copied().collect();
            let level = if side == Side::Minus { d - 1 } else { d };
            for (j, v) in proj.vertices().iter().enumerate() {
                let mut row = vec![Rat::zero(); d + 1];
                row[..d - 1].clone_from_slice(v);
                row[level] = -Rat::one();
                if on.contains(&j) {
                    lp.equalities.push((row, Rat::zero()));
                } else {
                    lp.strict.push((row, Rat::zero()));
                }
            }
        }
        let outcome = lp_max_margin(&lp).expect("pair LP is well-formed");
        let LpOutcome::Optimal { margin, assignment } = outcome else {
            return Ok(None);
        };
        if !margin.is_positive() {
            return Ok(None);
        }
        let functional = AffineFunctional::new(assignment[..d - 1].to_vec(), Rat::zero());
        // Exact re-verification: minima and their face structure.
        for (side, face, level) in [(Side::Minus, f_minus, d - 1), (Side::Plus, f_plus, d)] {
            let proj = self.projected_skin(side);
            let on: BTreeSet<usize> = face.vertex_indices.iter().copied().collect();
            for (j, v) in proj.vertices().iter().enumerate() {
                let val = functional.eval(v) - &assignment[level];
                let ok = if on.contains(&j) {
                    val.is_zero()
                } else {
                    val.is_positive()
                };
                assert!(ok, "pair witness failed exact re-check");
            }
        }
        Ok(Some(functional))
    }

    /// Sweeps the pencil of the two skin facets through a ridge of the given
    /// skin: for α, β > 0 the functional αf₁ + βf₂ attains its minimum over
    /// the opposite projected skin on a face; all faces occurring over the
    /// open parameter range are returned (breakpoint faces included).
    pub fn ridge_pencil_sweep(&self, side: Side, ridge: &FaceId) -> Result<Vec<FaceId>, DrumError> {
        let d = self.dim();
        if d < 3 || ridge.dim != d as isize - 3 {
            return Err(DrumError::NotARidge);
        }
        let skin = self.projected_skin(side);
        let incident: Vec<&Facet> = skin
            .facets()?
            .iter()
            .filter(|f| {
                ridge
                    .vertex_indices
                    .iter()
                    .all(|i| f.vertex_indices.binary_search(i).is_ok())
            })
            .collect();
        let [f1, f2] = incident.as_slice() else {
            return Err(DrumError::NotARidge);
        };
        let opposite = self.projected_skin(side.opposite());
        // Values of (1−t)f₁ + tf₂ at opposite vertex v: a_v + t(b_v − a_v).
        let a: Vec<Rat> = opposite
            .vertices()
            .iter()
            .map(|v| f1.functional.eval(v))
            .collect();
        let b: Vec<Rat> = opposite
            .vertices()
            .iter()
            .map(|v| f2.functional.eval(v))
            .collect();
        let n = a.len();
        let mut breakpoints: BTreeSet<Rat> = BTreeSet::new();
        for u in 0..n {
            for v in u + 1..n {
                // Crossing of the two value lines: a_u + t(b_u − a_u) =
                // a_v + t(b_v − a_v).
                let da = &a[u] - &a[v];
                let db = &b[u] - &b[v];
                let denom = &da - &db;
                if denom.is_zero() {
                    continue;
                }
                let t = &da / &denom;
                if t.is_positive() && t < Rat::one() {
                    breakpoints.insert(t);
                }
            }
        }
        let mut samples: Vec<Rat> = Vec::new();
        let pts: Vec<Rat> = breakpoints.into_iter().collect();
        let mut prev = Rat::zero();
        for t in &pts {
            samples.push((&prev + t) / Rat::from_int(2));
            samples.push(t.clone());
            prev = t.clone();
        }
        samples.push((&prev + &Rat::one()) / Rat::from_int(2));

        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces = Vec::new();
        for t in samples {
            let values: Vec<Rat> = (0..n).map(|i| &a[i] + &(&(&b[i] - &a[i]) * &t)).collect();
            let min = values.iter().min().expect("nonempty skin").clone();
            let argmin: Vec<usize> = (0..n).filter(|&i| values[i] == min).collect();
            if seen.insert(argmin.clone()) {
                let pts: Vec<RVec> = argmin.iter().map(|&i| opposite.vertices()[i].clone()).collect();
                faces.push(FaceId {
                    dim: affine_rank(&pts).expect("nonempty") as isize,
                    vertex_indices: argmin,
                });
            }
        }
        Ok(faces)
    }
}

/// Unique argmin vertex index of an affine functional over a polytope's
/// vertices.
fn argmin_vertex(functional: &AffineFunctional, p: &VertexPolytope) -> Result<usize, DrumError> {
    let mut best: Option<(Rat, usize, bool)> = None;
    for (i, v) in p.vertices().iter().enumerate() {
        let val = functional.eval(v);
        match &mut best {
            None => best = Some((val, i, true)),
            Some((bv, bi, unique)) => {
                if val < *bv {
                    *bv = val;
                    *bi = i;
                    *unique = true;
                } else if val == *bv {
                    *unique = false;
                }
            }
        }
    }
    match best {
        Some((_, i, true)) => Ok(i),
        _ => Err(DrumError::NonUniqueMinimum),
    }
}

/// Wire format for drum JSON I/O.
#[derive(Serialize, Deserialize)]
pub struct DrumJson {
    pub dim: usize,
    pub points: Vec<RVec>,
    pub skin_minus: Vec<usize>,
    pub skin_plus: Vec<usize>,
}

impl Drum {
    pub fn to_json(&self) -> DrumJson {
        DrumJson {
            dim: self.dim(),
            points: self.polytope.vertices().to_vec(),
            skin_minus: self.skin_minus.clone(),
            skin_plus: self.skin_plus.clone(),
        }
    }

    pub fn from_json(json: DrumJson, symmetry: Option<Group>) -> Result<Drum, DrumError> {
        let drum = make_drum(json.points, symmetry)?;
        // Skin index lists are derived data; reject inconsistent input.
        if drum.skin_minus != json.skin_minus || drum.skin_plus != json.skin_plus {
            return Err(DrumError::NonUnitLastCoordinate);
        }
        Ok(drum)
    }
}

/// Small hand-checkable drums used by tests and documentation examples.
pub mod toy {
    use super::{make_drum, Drum};
    use crate::rat::ivec;

    /// Planar drum whose skins are the parallel sides of a trapezoid; width 2.
    pub fn trapezoid() -> Drum {
        make_drum(
            vec![ivec(&[-2, -1]), ivec(&[2, -1]), ivec(&[-1, 1]), ivec(&[1, 1])],
            None,
        )
        .unwrap()
    }

    /// Octahedron presented as a triangular antiprism with skins at z = ±1.
    pub fn antiprism() -> Drum {
        make_drum(
            vec![
                ivec(&[2, 0, -1]),
                ivec(&[-1, 2, -1]),
                ivec(&[-1, -2, -1]),
                ivec(&[-2, 0, 1]),
                ivec(&[1, 2, 1]),
                ivec(&[1, -2, 1]),
            ],
            None,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::toy::{antiprism, trapezoid};
    use super::*;
    use crate::rat::ivec;

    #[test]
    fn trapezoid_width_two() {
        let d = trapezoid();
        assert_eq!(d.skin(Side::Minus).len(), 2);
        assert_eq!(d.skin(Side::Plus).len(), 2);
        assert_eq!(d.width().unwrap(), 2);
    }

    #[test]
    fn antiprism_width_three() {
        let d = antiprism();
        assert_eq!(d.width().unwrap(), 3);
        assert_eq!(d.drum_facets().unwrap().len(), 6);
        for df in d.drum_facets().unwrap() {
            assert_eq!(df.f_bot.dim + df.f_top.dim, 1);
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        assert_eq!(
            make_drum(vec![ivec(&[0, 2]), ivec(&[0, -1])], None).unwrap_err(),
            DrumError::NonUnitLastCoordinate
        );
        assert_eq!(
            make_drum(vec![ivec(&[0, 1]), ivec(&[1, 1])], None).unwrap_err(),
            DrumError::EmptySkin(-1)
        );
        assert_eq!(
            make_drum(vec![ivec(&[0, 1]), ivec(&[0, -1])], None).unwrap_err(),
            DrumError::NotFullDim
        );
    }

    #[test]
    fn trapezoid_facet_vertex_maps() {
        let d = trapezoid();
        // Facets of the top projected skin [-1, 1] are its endpoints; each
        // maps to the bottom vertex on its own side.
        let map = d.facet_vertex_map(Side::Plus).unwrap();
        let skin = d.projected_skin(Side::Plus);
        let bottom = d.projected_skin(Side::Minus);
        for (fi, facet) in skin.facets().unwrap().iter().enumerate() {
            let top_x = &skin.vertices()[facet.vertex_indices[0]][0];
            let image_x = &bottom.vertices()[map[fi]][0];
            assert_eq!(top_x.is_positive(), image_x.is_positive());
        }
    }

    #[test]
    fn width_d_drums_have_two_cycles() {
        // Oriented 2-cycles in the incidence pattern certify width ≤ d; both
        // toy drums have width exactly d.
        assert!(trapezoid().has_oriented_two_cycle().unwrap());
        assert!(antiprism().has_oriented_two_cycle().unwrap());
    }

    #[test]
    fn pair_oracles_agree_on_antiprism() {
        let d = antiprism();
        let image = d.pair_embedding_by_enumeration().unwrap();
        assert_eq!(image.len(), 6);
        // Exhaustive over dimension-compatible pairs: (vertex, edge) and
        // (edge, vertex) of the two projected triangles.
        for bd in [0isize, 1] {
            let td = 1 - bd;
            for fb in d.projected_skin(Side::Minus).all_faces().unwrap() {
                if fb.dim != bd {
                    continue;
                }
                for ft in d.projected_skin(Side::Plus).all_faces().unwrap() {
                    if ft.dim != td {
                        continue;
                    }
                    let lp = d.pair_in_image_lp(fb, ft).unwrap().is_some();
                    let enumerated = image.contains(&(fb.clone(), ft.clone()));
                    assert_eq!(lp, enumerated, "oracles disagree on ({fb:?}, {ft:?})");
                }
            }
        }
    }

    #[test]
    fn sweep_rejects_non_ridges() {
        let d = trapezoid();
        let bad = FaceId {
            vertex_indices: vec![0],
            dim: 0,
        };
        assert_eq!(
            d.ridge_pencil_sweep(Side::Plus, &bad).unwrap_err(),
            DrumError::NotARidge
        );
    }

    #[test]
    fn antiprism_sweeps_are_lp_sound() {
        let d = antiprism();
        // Ridges of a projected triangle skin are its vertices (dim 0 = d−3).
        for side in [Side::Plus, Side::Minus] {
            for ridge in d.projected_skin(side).faces_of_dim(0).unwrap() {
                let faces = d.ridge_pencil_sweep(side, &ridge).unwrap();
                assert!(!faces.is_empty());
                for f in &faces {
                    if f.dim + ridge.dim == d.dim() as isize - 2 {
                        let (fb, ft) = match side {
                            Side::Plus => (f, &ridge),
                            Side::Minus => (&ridge, f),
                        };
                        assert!(d.pair_in_image_lp(fb, ft).unwrap().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = trapezoid();
        let json = serde_json::to_string(&d.to_json()).unwrap();
        let back: DrumJson = serde_json::from_str(&json).unwrap();
        let d2 = Drum::from_json(back, None).unwrap();
        assert_eq!(d2.polytope().vertices(), d.polytope().vertices());
    }
}
