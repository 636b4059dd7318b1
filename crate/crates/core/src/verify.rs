//! Certified width lower bounds for the drum family.
//!
//! The pipeline classifies the skin facets into group orbits, pins down the
//! facet-vertex maps, screens every skin ridge through pencil sweeps, builds
//! the reduced face graphs, and assembles a lower bound on the drum width
//! from graph distances.  Every stage re-checks its premises exactly; a
//! failure in any stage invalidates the certificate and names the stage.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::drum::{Drum, DrumError, Side};
use crate::family::{build_dk, default_params, FamilyError};
use crate::graph::Graph;
use crate::polytope::{is_subset, FaceCert, FaceId, PolytopeError, VertexPolytope};
use crate::rat::{ivec, Rat, RVec};
use crate::symmetry::{Group, IndexAction, SignedPerm};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("facet classification failed: {0}")]
    ClassificationMismatch(String),
    #[error("facet-vertex map mismatch: {0}")]
    PhiMismatch(String),
    #[error("edge screening failed: {0}")]
    EdgeScreenFailed(String),
    #[error("graph structure check failed: {0}")]
    GraphStructure(String),
    #[error("distance bound violated: {0}")]
    BoundViolated(String),
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<VerifyError>,
    },
    #[error(transparent)]
    Drum(#[from] DrumError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl VerifyError {
    fn at(stage: &'static str) -> impl FnOnce(VerifyError) -> VerifyError {
        move |source| VerifyError::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// The name of the pipeline stage that failed, if any.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            VerifyError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

/// The three kinds of skin facet orbits: the back facet `B`, and the chain
/// facets `E_i`, `C_i` along the boundary arc, `1 ≤ i ≤ k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FacetKind {
    B,
    E(usize),
    C(usize),
}

/// A sign-flip class of skin facets: a facet orbit kind together with
/// whether the half-turn σ has been applied.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClassLabel {
    pub kind: FacetKind,
    pub mirrored: bool,
}

impl fmt::Display for FacetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetKind::B => write!(f, "B"),
            FacetKind::E(i) => write!(f, "E{i}"),
            FacetKind::C(i) => write!(f, "C{i}"),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            write!(f, "s{}", self.kind)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

impl ClassLabel {
    pub fn new(kind: FacetKind, mirrored: bool) -> Self {
        ClassLabel { kind, mirrored }
    }

    /// The image of this class under the half-turn σ.
    pub fn mirror(self) -> Self {
        ClassLabel {
            kind: self.kind,
            mirrored: !self.mirrored,
        }
    }
}

/// Orbit classification of one skin's facets under the skin symmetry group.
#[derive(Debug, Clone)]
pub struct OrbitClassification {
    pub side: Side,
    /// Orbit kind of each skin facet (indexed like the facet list).
    pub kinds: Vec<FacetKind>,
    /// For each facet, the index of a group element mapping the orbit
    /// representative onto it.
    pub witnesses: Vec<usize>,
    /// Whether that witness involves the half-turn σ.
    pub mirrored: Vec<bool>,
    /// Representative vertex-index sets, sorted.
    pub reps: BTreeMap<FacetKind, Vec<usize>>,
}

impl OrbitClassification {
    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    pub fn label(&self, facet: usize) -> ClassLabel {
        ClassLabel::new(self.kinds[facet], self.mirrored[facet])
    }
}

/// The skin-to-skin coordinate map induced by the quarter-turn generator: it
/// carries either projected skin onto the other one.
pub fn tau_skin() -> SignedPerm {
    SignedPerm::new(vec![2, 3, 1, 0], vec![1, 1, 1, 1]).expect("valid signed permutation")
}

/// The half-turn σ restricted to projected skin coordinates.
pub fn sigma_skin() -> SignedPerm {
    SignedPerm::new(vec![1, 0, 3, 2], vec![1, 1, 1, 1]).expect("valid signed permutation")
}

fn find_vertex(skin: &VertexPolytope, point: &RVec) -> Result<usize, VerifyError> {
    skin.vertices()
        .iter()
        .position(|p| p == point)
        .ok_or_else(|| {
            VerifyError::ClassificationMismatch(format!("expected vertex {point:?} is missing"))
        })
}

/// The boundary chain `a_1, …, a_{k+1}` of one projected skin, as vertex
/// indices in chain order.  The chain consists of the vertices in the closed
/// positive quadrant of the two distinguished coordinates, ordered by
/// strictly decreasing leading coordinate.
pub fn boundary_chain(drum: &Drum, side: Side) -> Result<Vec<usize>, VerifyError> {
    let top = drum.projected_skin(Side::Plus);
    let mut chain: Vec<&RVec> = top
        .vertices()
        .iter()
        .filter(|v| {
            // The chain runs from (u, 0) to the diagonal point, staying on
            // or below the diagonal; this excludes the half-turn images of
            // its interior vertices.
            v[0].is_positive()
                && !v[1].is_negative()
                && v[1] <= v[0]
                && v[2].is_zero()
                && v[3].is_zero()
        })
        .collect();
    chain.sort_by(|a, b| b[0].cmp(&a[0]));
    for w in chain.windows(2) {
        if w[0][0] == w[1][0] {
            return Err(VerifyError::ClassificationMismatch(
                "boundary chain has two vertices with equal leading coordinate".into(),
            ));
        }
    }
    let tau = tau_skin();
    let skin = drum.projected_skin(side);
    chain
        .into_iter()
        .map(|p| {
            let q = match side {
                Side::Plus => p.clone(),
                Side::Minus => tau.apply(p),
            };
            find_vertex(skin, &q)
        })
        .collect()
}

fn skin_group(skin: &VertexPolytope) -> Result<(&Group, &IndexAction), VerifyError> {
    match (skin.symmetry(), skin.index_action()) {
        (Some(g), Some(a)) => Ok((g, a)),
        _ => Err(VerifyError::ClassificationMismatch(
            "skin carries no symmetry group".into(),
        )),
    }
}

/// Classifies the facets of one projected skin into orbits under the skin
/// symmetry group, matching each orbit to its expected representative
/// vertex pattern.  Exactly `2k + 1` orbits must occur: `B`, `E_1..E_k`,
/// `C_1..C_k`.
pub fn classify_skin_facets(
    drum: &Drum,
    k: usize,
    side: Side,
) -> Result<OrbitClassification, VerifyError> {
    let skin = drum.projected_skin(side);
    let (group, action) = skin_group(skin)?;
    let chain = boundary_chain(drum, side)?;
    if chain.len() != k + 1 {
        return Err(VerifyError::ClassificationMismatch(format!(
            "boundary chain has {} vertices, expected {}",
            chain.len(),
            k + 1
        )));
    }
    // Fixed reference vertices of the top skin, mapped through τ for the
    // bottom one.
    let tau = tau_skin();
    let fixed = |coords: &[i64]| -> Result<usize, VerifyError> {
        let p = ivec(coords);
        let q = match side {
            Side::Plus => p,
            Side::Minus => tau.apply(&p),
        };
        find_vertex(skin, &q)
    };
    let m_pp = fixed(&[0, 0, 3, 3])?;
    let m_pm = fixed(&[0, 0, 3, -3])?;
    let m_mp = fixed(&[0, 0, -3, 3])?;
    let p_p = fixed(&[98, 0, 1, 0])?;

    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    let mut reps: BTreeMap<FacetKind, Vec<usize>> = BTreeMap::new();
    reps.insert(FacetKind::B, sorted(vec![m_pp, m_pm, p_p, chain[k]]));
    for i in 1..=k {
        reps.insert(
            FacetKind::E(i),
            sorted(vec![m_pp, m_mp, chain[i - 1], chain[i]]),
        );
        reps.insert(
            FacetKind::C(i),
            sorted(vec![m_pp, p_p, chain[i - 1], chain[i]]),
        );
    }

    let facets = skin.facets()?;
    let facet_index: BTreeMap<&[usize], usize> = facets
        .iter()
        .enumerate()
        .map(|(i, f)| (f.vertex_indices.as_slice(), i))
        .collect();
    let mut kinds: Vec<Option<FacetKind>> = vec![None; facets.len()];
    let mut witnesses: Vec<usize> = vec![0; facets.len()];
    for (&kind, rep) in &reps {
        if !facet_index.contains_key(rep.as_slice()) {
            return Err(VerifyError::ClassificationMismatch(format!(
                "representative set for {kind} is not a facet"
            )));
        }
        for gi in 0..group.order() {
            let image = action.image_of_set(gi, rep);
            let Some(&fi) = facet_index.get(image.as_slice()) else {
                return Err(VerifyError::ClassificationMismatch(format!(
                    "orbit of {kind} leaves the facet list"
                )));
            };
            match kinds[fi] {
                None => {
                    kinds[fi] = Some(kind);
                    witnesses[fi] = gi;
                }
                Some(prev) if prev == kind => {}
                Some(prev) => {
                    return Err(VerifyError::ClassificationMismatch(format!(
                        "facet {fi} lies in the orbits of both {prev} and {kind}"
                    )));
                }
            }
        }
    }
    let kinds: Vec<FacetKind> = kinds
        .into_iter()
        .enumerate()
        .map(|(fi, kind)| {
            kind.ok_or_else(|| {
                VerifyError::ClassificationMismatch(format!(
                    "facet {fi} ({:?}) matches no expected orbit",
                    facets[fi].vertex_indices
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    let mirrored: Vec<bool> = witnesses
        .iter()
        .map(|&gi| {
            let g = &group.elements()[gi];
            match g.image_of(0) {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(VerifyError::ClassificationMismatch(
                    "unexpected permutation part in skin symmetry".into(),
                )),
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(OrbitClassification {
        side,
        kinds,
        witnesses,
        mirrored,
        reps,
    })
}

/// Quotient of a keyed graph by a node classification.  The class map must
/// be a graph morphism target: loops and parallel edges produced by the
/// projection are dropped.
pub fn quotient_graph<K, C>(graph: &Graph<K>, class: impl Fn(&K) -> C) -> Graph<C>
where
    K: Clone + Eq + Hash,
    C: Clone + Eq + Hash,
{
    let mut quotient = Graph::new();
    for key in graph.keys() {
        quotient.add_node(class(key));
    }
    for i in 0..graph.num_nodes() {
        for &j in graph.neighbors(i) {
            if i < j {
                quotient.add_edge(class(&graph.keys()[i]), class(&graph.keys()[j]));
            }
        }
    }
    quotient
}

/// The subgroup of elements acting purely by coordinate sign changes.
pub fn sign_flip_subgroup(group: &Group) -> Group {
    let n = group
        .elements()
        .first()
        .map(|g| g.dim())
        .unwrap_or_default();
    let flips: Vec<SignedPerm> = group
        .elements()
        .iter()
        .filter(|g| (0..n).all(|i| g.image_of(i) == i))
        .cloned()
        .collect();
    Group::generate(n, &flips)
}

/// Facet-vertex map targets per facet class, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct PhiTargets {
    /// Top-skin facet class → name of its bottom-skin target vertex class.
    pub plus: BTreeMap<String, String>,
    /// Bottom-skin facet class → name of its top-skin target vertex class.
    pub minus: BTreeMap<String, String>,
}

/// Checks the facet-vertex maps of both skins facet by facet: each facet's
/// target vertex must be the witness image of its orbit representative's
/// expected target.  The two skins are checked independently, then tied
/// together by the τ-mirror identity.
pub fn check_phi_maps(
    drum: &Drum,
    k: usize,
    cls_minus: &OrbitClassification,
    cls_plus: &OrbitClassification,
) -> Result<PhiTargets, VerifyError> {
    let tau = tau_skin();
    let sigma = sigma_skin();
    let top = drum.projected_skin(Side::Plus);
    let bottom = drum.projected_skin(Side::Minus);
    let chain_top = boundary_chain(drum, Side::Plus)?;
    if chain_top.len() != k + 1 {
        return Err(VerifyError::PhiMismatch(
            "boundary chain has the wrong length".into(),
        ));
    }
    let a1_top = top.vertices()[chain_top[0]].clone();
    let n_top = sigma.apply(&a1_top);
    let a1_bot = tau.apply(&a1_top);
    let n_bot = tau.apply(&n_top);

    let mut targets = PhiTargets {
        plus: BTreeMap::new(),
        minus: BTreeMap::new(),
    };
    for (side, cls) in [(Side::Plus, cls_plus), (Side::Minus, cls_minus)] {
        let skin = drum.projected_skin(side);
        let opposite = drum.projected_skin(side.opposite());
        let (group, _) = skin_group(skin)?;
        let phi = drum.facet_vertex_map(side)?;
        let (base_b, base_chain, name_b, name_chain) = match side {
            Side::Plus => (&a1_bot, &n_bot, "a1-", "n-"),
            Side::Minus => (&n_top, &a1_top, "n", "a1"),
        };
        for (fi, &phi_fi) in phi.iter().enumerate() {
            let g = &group.elements()[cls.witnesses[fi]];
            let base = match cls.kinds[fi] {
                FacetKind::B => base_b,
                _ => base_chain,
            };
            let expected = g.apply(base);
            let actual = &opposite.vertices()[phi_fi];
            if *actual != expected {
                return Err(VerifyError::PhiMismatch(format!(
                    "{side:?} facet {fi} (class {}) maps to {actual:?}, expected {expected:?}",
                    cls.label(fi)
                )));
            }
            let name = match (cls.kinds[fi], cls.mirrored[fi]) {
                (FacetKind::B, false) => name_b,
                (FacetKind::B, true) => name_chain,
                (_, false) => name_chain,
                (_, true) => name_b,
            };
            let map = match side {
                Side::Plus => &mut targets.plus,
                Side::Minus => &mut targets.minus,
            };
            map.insert(cls.label(fi).to_string(), name.to_string());
        }
    }

    // τ-mirror cross-check: mapping a top facet through τ and applying the
    // bottom facet-vertex map agrees with mapping its target through τ.
    let phi_plus = drum.facet_vertex_map(Side::Plus)?;
    let phi_minus = drum.facet_vertex_map(Side::Minus)?;
    let bottom_facet_index: BTreeMap<Vec<usize>, usize> = bottom
        .facets()?
        .iter()
        .enumerate()
        .map(|(i, f)| (f.vertex_indices.clone(), i))
        .collect();
    for (fi, facet) in top.facets()?.iter().enumerate() {
        let mut image: Vec<usize> = facet
            .vertex_indices
            .iter()
            .map(|&v| find_vertex(bottom, &tau.apply(&top.vertices()[v])))
            .collect::<Result<_, _>>()?;
        image.sort_unstable();
        let Some(&bi) = bottom_facet_index.get(&image) else {
            return Err(VerifyError::PhiMismatch(format!(
                "τ-image of top facet {fi} is not a bottom facet"
            )));
        };
        let expected = tau.apply(&bottom.vertices()[phi_plus[fi]]);
        if top.vertices()[phi_minus[bi]] != expected {
            return Err(VerifyError::PhiMismatch(format!(
                "τ-mirror identity fails at top facet {fi}"
            )));
        }
    }
    Ok(targets)
}

/// Outcome of ridge screening on one skin.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeScreenReport {
    pub side: Side,
    pub ridges: usize,
    /// Ridges excluded because both incident facets share their target
    /// vertex (the whole pencil then minimizes at that single vertex).
    pub screened: usize,
    pub swept: usize,
    pub min_faces_dim0: usize,
    pub min_faces_dim1: usize,
    pub min_faces_higher: usize,
}

/// Sweeps the functional pencil of every unscreened ridge of the given skin
/// and checks that every minimum face of dimension 1 on the opposite skin is
/// a boundary-chain edge.
pub fn screen_edges(drum: &Drum, k: usize, side: Side) -> Result<EdgeScreenReport, VerifyError> {
    let skin = drum.projected_skin(side);
    let opposite = drum.projected_skin(side.opposite());
    let (_, opp_action) = skin_group(opposite)?;
    let opp_chain = boundary_chain(drum, side.opposite())?;
    if opp_chain.len() != k + 1 {
        return Err(VerifyError::EdgeScreenFailed(
            "opposite boundary chain has the wrong length".into(),
        ));
    }
    let mut allowed_edges: std::collections::BTreeSet<Vec<usize>> = Default::default();
    for i in 1..=k {
        let mut pair = vec![opp_chain[i - 1], opp_chain[i]];
        pair.sort_unstable();
        for image in opp_action.subset_orbit(&pair) {
            allowed_edges.insert(image);
        }
    }
    let phi = drum.facet_vertex_map(side)?;
    let facets = skin.facets()?;
    let mut report = EdgeScreenReport {
        side,
        ridges: 0,
        screened: 0,
        swept: 0,
        min_faces_dim0: 0,
        min_faces_dim1: 0,
        min_faces_higher: 0,
    };
    for ridge in skin.faces_of_dim(skin.dim() as isize - 2)? {
        report.ridges += 1;
        let incident: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| is_subset(&ridge.vertex_indices, &f.vertex_indices))
            .map(|(i, _)| i)
            .collect();
        let [f1, f2] = incident.as_slice() else {
            return Err(VerifyError::EdgeScreenFailed(format!(
                "ridge {:?} lies in {} facets",
                ridge.vertex_indices,
                incident.len()
            )));
        };
        if phi[*f1] == phi[*f2] {
            report.screened += 1;
            continue;
        }
        report.swept += 1;
        for face in drum.ridge_pencil_sweep(side, &ridge)? {
            match face.dim {
                // Minimum vertices correspond to drum ridges, one level
                // below the facets being embedded; they carry no
                // containment obligation and are only counted.
                0 => report.min_faces_dim0 += 1,
                1 => {
                    if !allowed_edges.contains(&face.vertex_indices) {
                        return Err(VerifyError::EdgeScreenFailed(format!(
                            "sweep of ridge {:?} hits edge {:?} outside the boundary-edge orbits",
                            ridge.vertex_indices, face.vertex_indices
                        )));
                    }
                    report.min_faces_dim1 += 1;
                }
                _ => report.min_faces_higher += 1,
            }
        }
    }
    Ok(report)
}

/// The reduced face graph of one skin: the subgraph of the skin's face
/// lattice graph induced on all faces of dimension ≥ 2, the boundary-chain
/// edge orbits, and the orbit of the chain endpoint vertex — together with
/// its quotient by sign flips.
#[derive(Debug, Clone)]
pub struct GGraph {
    pub side: Side,
    pub tilde: Graph<FaceId>,
    pub quotient: Graph<FaceId>,
    /// Quotient node counts per face dimension.
    pub dim_counts: BTreeMap<isize, usize>,
    /// Quotient node of each facet class.
    pub facet_class_nodes: BTreeMap<ClassLabel, FaceId>,
    /// Quotient nodes of the two vertex classes: the chain endpoint `a_1`
    /// and its half-turn image `σa_1`, in that order.
    pub vertex_class_nodes: [FaceId; 2],
    /// Quotient node of each boundary-edge class `(i, mirrored)`.
    pub edge_class_nodes: BTreeMap<(usize, bool), FaceId>,
    flip_action: IndexAction,
}

impl GGraph {
    /// Sign-flip class of an arbitrary skin face.
    pub fn face_class(&self, face: &FaceId) -> FaceId {
        FaceId {
            vertex_indices: self.flip_action.canonical_subset(&face.vertex_indices),
            dim: face.dim,
        }
    }

    /// Sign-flip class of a single skin vertex.
    pub fn vertex_class(&self, v: usize) -> FaceId {
        FaceId {
            vertex_indices: self.flip_action.canonical_subset(&[v]),
            dim: 0,
        }
    }
}

/// Builds the reduced face graph of one skin and verifies its structure:
/// node counts per dimension, the two-ladder shape of the facet-level
/// quotient, the attachment pattern of the boundary-edge and vertex classes,
/// and the half-turn automorphism.
pub fn build_g(
    drum: &Drum,
    k: usize,
    side: Side,
    cls: &OrbitClassification,
) -> Result<GGraph, VerifyError> {
    let skin = drum.projected_skin(side);
    let (group, action) = skin_group(skin)?;
    let flips = sign_flip_subgroup(group);
    let flip_action = IndexAction::new(&flips, skin.vertices())
        .map_err(|_| VerifyError::GraphStructure("sign flips do not permute the skin".into()))?;
    let chain = boundary_chain(drum, side)?;

    // Node set of the unreduced graph.
    let mut nodes: Vec<FaceId> = skin
        .all_faces()?
        .iter()
        .filter(|f| f.dim >= 2)
        .cloned()
        .collect();
    let mut edge_reps: Vec<Vec<usize>> = Vec::new();
    for i in 1..=k {
        let mut pair = vec![chain[i - 1], chain[i]];
        pair.sort_unstable();
        match skin.certify_face(&pair)? {
            FaceCert::Face(_) => {}
            _ => {
                return Err(VerifyError::GraphStructure(format!(
                    "boundary pair {pair:?} is not an edge of the skin"
                )));
            }
        }
        for image in action.subset_orbit(&pair) {
            nodes.push(FaceId {
                vertex_indices: image,
                dim: 1,
            });
        }
        edge_reps.push(pair);
    }
    let endpoint_orbit = action.subset_orbit(&[chain[0]]);
    if endpoint_orbit.len() != 4 {
        return Err(VerifyError::GraphStructure(format!(
            "chain endpoint orbit has {} vertices, expected 4",
            endpoint_orbit.len()
        )));
    }
    for v in &endpoint_orbit {
        nodes.push(FaceId {
            vertex_indices: v.clone(),
            dim: 0,
        });
    }

    // Incidence edges between consecutive dimensions.
    let mut levels: BTreeMap<isize, Vec<&FaceId>> = BTreeMap::new();
    for node in &nodes {
        levels.entry(node.dim).or_default().push(node);
    }
    let mut tilde = Graph::new();
    for node in &nodes {
        tilde.add_node(node.clone());
    }
    for (&dim, lower) in &levels {
        let Some(upper) = levels.get(&(dim + 1)) else {
            continue;
        };
        for lo in lower {
            for hi in upper {
                if is_subset(&lo.vertex_indices, &hi.vertex_indices) {
                    tilde.add_edge((*lo).clone(), (*hi).clone());
                }
            }
        }
    }

    let class = |f: &FaceId| FaceId {
        vertex_indices: flip_action.canonical_subset(&f.vertex_indices),
        dim: f.dim,
    };
    let quotient = quotient_graph(&tilde, class);

    let mut dim_counts: BTreeMap<isize, usize> = BTreeMap::new();
    for key in quotient.keys() {
        *dim_counts.entry(key.dim).or_default() += 1;
    }

    // Locate the distinguished quotient nodes.
    let sigma = sigma_skin();
    let sigma_index = group
        .elements()
        .iter()
        .position(|g| *g == sigma)
        .ok_or_else(|| VerifyError::GraphStructure("half-turn not in skin group".into()))?;
    let facets = skin.facets()?;
    let mut facet_class_nodes: BTreeMap<ClassLabel, FaceId> = BTreeMap::new();
    for (kind, rep) in &cls.reps {
        for mirrored in [false, true] {
            let set = if mirrored {
                action.image_of_set(sigma_index, rep)
            } else {
                rep.clone()
            };
            let node = class(&FaceId {
                vertex_indices: set,
                dim: skin.dim() as isize - 1,
            });
            if quotient.node_index(&node).is_none() {
                return Err(VerifyError::GraphStructure(format!(
                    "facet class {} missing from quotient",
                    ClassLabel::new(*kind, mirrored)
                )));
            }
            facet_class_nodes.insert(ClassLabel::new(*kind, mirrored), node);
        }
    }
    // Facets of the same label must land on the same quotient node, and
    // distinct labels on distinct nodes.
    for (fi, facet) in facets.iter().enumerate() {
        let node = class(&FaceId {
            vertex_indices: facet.vertex_indices.clone(),
            dim: skin.dim() as isize - 1,
        });
        if facet_class_nodes[&cls.label(fi)] != node {
            return Err(VerifyError::GraphStructure(format!(
                "facet {fi} is not in the quotient class of its label {}",
                cls.label(fi)
            )));
        }
    }
    let distinct: std::collections::BTreeSet<&FaceId> = facet_class_nodes.values().collect();
    if distinct.len() != 2 * (2 * k + 1) || dim_counts.get(&(skin.dim() as isize - 1)) != Some(&distinct.len()) {
        return Err(VerifyError::GraphStructure(format!(
            "expected {} facet classes, found {} (of {} facet-level nodes)",
            2 * (2 * k + 1),
            distinct.len(),
            dim_counts.get(&(skin.dim() as isize - 1)).unwrap_or(&0)
        )));
    }

    let vertex_node = |v: usize| FaceId {
        vertex_indices: flip_action.canonical_subset(&[v]),
        dim: 0,
    };
    let a1_node = vertex_node(chain[0]);
    let sa1_node = vertex_node(action.image(sigma_index, chain[0]));
    if dim_counts.get(&0) != Some(&2) || a1_node == sa1_node {
        return Err(VerifyError::GraphStructure(
            "expected exactly two vertex classes".into(),
        ));
    }
    let mut edge_class_nodes: BTreeMap<(usize, bool), FaceId> = BTreeMap::new();
    for (i, rep) in edge_reps.iter().enumerate() {
        for mirrored in [false, true] {
            let set = if mirrored {
                action.image_of_set(sigma_index, rep)
            } else {
                rep.clone()
            };
            let node = class(&FaceId {
                vertex_indices: set,
                dim: 1,
            });
            edge_class_nodes.insert((i + 1, mirrored), node);
        }
    }
    let distinct_edges: std::collections::BTreeSet<&FaceId> = edge_class_nodes.values().collect();
    if distinct_edges.len() != 2 * k || dim_counts.get(&1) != Some(&(2 * k)) {
        return Err(VerifyError::GraphStructure(format!(
            "expected {} boundary-edge classes, found {}",
            2 * k,
            distinct_edges.len()
        )));
    }

    // Mirroring by σ is a graph automorphism of the quotient.
    let mirror = |f: &FaceId| -> FaceId {
        let moved: Vec<usize> = f
            .vertex_indices
            .iter()
            .map(|&v| action.image(sigma_index, v))
            .collect();
        let mut moved = moved;
        moved.sort_unstable();
        FaceId {
            vertex_indices: flip_action.canonical_subset(&moved),
            dim: f.dim,
        }
    };
    for i in 0..quotient.num_nodes() {
        let mi = mirror(&quotient.keys()[i]);
        if quotient.node_index(&mi).is_none() {
            return Err(VerifyError::GraphStructure(
                "mirroring does not permute the quotient nodes".into(),
            ));
        }
        for &j in quotient.neighbors(i) {
            if !quotient.has_edge(&mi, &mirror(&quotient.keys()[j])) {
                return Err(VerifyError::GraphStructure(
                    "mirroring is not a quotient graph automorphism".into(),
                ));
            }
        }
    }

    let g = GGraph {
        side,
        tilde,
        quotient,
        dim_counts,
        facet_class_nodes,
        vertex_class_nodes: [a1_node, sa1_node],
        edge_class_nodes,
        flip_action,
    };
    check_g_structure(&g, k, skin.dim() as isize - 1)?;
    Ok(g)
}

/// Structural checks on the reduced quotient graph: the facet-level
/// adjacency (through ridge classes) must form the expected two-ladder, the
/// boundary-edge classes must attach only to their own rung facets, the two
/// vertex classes must hang off the first rung, and mirroring must be an
/// automorphism.
fn check_g_structure(g: &GGraph, k: usize, facet_dim: isize) -> Result<(), VerifyError> {
    let q = &g.quotient;
    let label_of: BTreeMap<&FaceId, ClassLabel> = g
        .facet_class_nodes
        .iter()
        .map(|(l, n)| (n, *l))
        .collect();

    // Facet adjacency through ridge classes.
    let mut adjacency: std::collections::BTreeSet<(ClassLabel, ClassLabel)> = Default::default();
    for i in 0..q.num_nodes() {
        if q.keys()[i].dim != facet_dim - 1 {
            continue;
        }
        let black: Vec<ClassLabel> = q
            .neighbors(i)
            .iter()
            .filter(|&&j| q.keys()[j].dim == facet_dim)
            .map(|&j| label_of[&q.keys()[j]])
            .collect();
        match black.as_slice() {
            [_] => {} // both incident facets conjugate: projected loop
            [a, b] => {
                adjacency.insert((*a.min(b), *a.max(b)));
            }
            other => {
                return Err(VerifyError::GraphStructure(format!(
                    "ridge class with {} facet-class neighbours",
                    other.len()
                )));
            }
        }
    }
    let mut expected: std::collections::BTreeSet<(ClassLabel, ClassLabel)> = Default::default();
    let mut put = |a: ClassLabel, b: ClassLabel| {
        expected.insert((a.min(b), a.max(b)));
    };
    let b = |m| ClassLabel::new(FacetKind::B, m);
    let c = |i, m| ClassLabel::new(FacetKind::C(i), m);
    let e = |i, m| ClassLabel::new(FacetKind::E(i), m);
    for m in [false, true] {
        for i in 1..=k {
            put(e(i, m), c(i, m));
            if i < k {
                put(e(i, m), e(i + 1, m));
                put(c(i, m), c(i + 1, m));
            }
        }
        put(b(!m), e(k, m));
        put(b(m), c(k, m));
    }
    if adjacency != expected {
        return Err(VerifyError::GraphStructure(format!(
            "facet-level quotient adjacency {:?} differs from the two-ladder template {:?}",
            adjacency, expected
        )));
    }

    // Boundary-edge classes attach only to ridge classes of their own rung.
    for (&(i, m), node) in &g.edge_class_nodes {
        let ni = q.node_index(node).expect("edge class is a node");
        for &j in q.neighbors(ni) {
            let neighbor = &q.keys()[j];
            if neighbor.dim != 2 {
                continue;
            }
            let rung = [c(i, m), e(i, m)];
            let blacks: Vec<ClassLabel> = q
                .neighbors(j)
                .iter()
                .filter(|&&x| q.keys()[x].dim == facet_dim)
                .map(|&x| label_of[&q.keys()[x]])
                .collect();
            if !blacks.iter().all(|l| rung.contains(l)) {
                return Err(VerifyError::GraphStructure(format!(
                    "boundary-edge class ({i}, mirrored={m}) touches facets {blacks:?} outside its rung"
                )));
            }
        }
    }

    // Vertex classes hang off the first rung only.
    for (vi, m) in [(0, false), (1, true)] {
        let ni = q
            .node_index(&g.vertex_class_nodes[vi])
            .expect("vertex class is a node");
        let expected_edge = &g.edge_class_nodes[&(1, m)];
        let neighbors: Vec<&FaceId> = q.neighbors(ni).iter().map(|&j| &q.keys()[j]).collect();
        if neighbors != [expected_edge] {
            return Err(VerifyError::GraphStructure(format!(
                "vertex class {vi} attaches to {neighbors:?} instead of its first-rung edge class"
            )));
        }
    }

    Ok(())
}

/// Distance report backing the graph-distance bound: breadth-first
/// distances from each facet class to the two vertex classes.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub side: Side,
    /// Facet class → (distance to the `a_1` class, distance to the `σa_1`
    /// class) in the quotient graph.
    pub facet_distances: BTreeMap<String, [usize; 2]>,
    pub required: usize,
}

/// Computes the distances from every facet class to the two vertex classes
/// and checks the distance bound: classes on the `a_1` side must be at
/// distance ≥ 2k + 3 from `σa_1`, and mirrored classes from `a_1`.  Also
/// checks that the whole table is invariant under mirroring.
pub fn check_cor_bound(g: &GGraph, k: usize) -> Result<DistanceReport, VerifyError> {
    let q = &g.quotient;
    let from_a1 = q.distances_from(q.node_index(&g.vertex_class_nodes[0]).expect("node"));
    let from_sa1 = q.distances_from(q.node_index(&g.vertex_class_nodes[1]).expect("node"));
    let required = 2 * k + 3;
    let mut facet_distances = BTreeMap::new();
    for (label, node) in &g.facet_class_nodes {
        let ni = q.node_index(node).expect("facet class is a node");
        let (Some(da), Some(ds)) = (from_a1[ni], from_sa1[ni]) else {
            return Err(VerifyError::GraphStructure(format!(
                "facet class {label} disconnected from a vertex class"
            )));
        };
        facet_distances.insert(label.to_string(), [da, ds]);
        // B and σB are bounded away from both poles; E_i/C_i from the
        // opposite pole only.
        let checks: Vec<usize> = match (label.kind, label.mirrored) {
            (FacetKind::B, _) => vec![da, ds],
            (_, false) => vec![ds],
            (_, true) => vec![da],
        };
        for d in checks {
            if d < required {
                return Err(VerifyError::BoundViolated(format!(
                    "dist({label}, pole) = {d} < {required}"
                )));
            }
        }
    }
    // Mirror invariance of the table.
    for (label, node) in &g.facet_class_nodes {
        let mirrored = &g.facet_class_nodes[&label.mirror()];
        let ni = q.node_index(node).expect("node");
        let mi = q.node_index(mirrored).expect("node");
        if from_a1[ni] != from_sa1[mi] || from_sa1[ni] != from_a1[mi] {
            return Err(VerifyError::BoundViolated(format!(
                "distance table is not mirror-invariant at {label}"
            )));
        }
    }
    Ok(DistanceReport {
        side: g.side,
        facet_distances,
        required,
    })
}

/// A machine-checked lower bound on the width of one drum of the family.
#[derive(Debug, Clone, Serialize)]
pub struct WidthCertificate {
    pub k: usize,
    pub num_vertices: usize,
    /// Names of the pipeline stages that passed, in order.
    pub stages: Vec<String>,
    pub phi_targets: PhiTargets,
    pub screen_minus: EdgeScreenReport,
    pub screen_plus: EdgeScreenReport,
    pub distances_minus: DistanceReport,
    pub distances_plus: DistanceReport,
    /// Minimum over all facet-class pairs of the summed pole distances.
    pub min_pair_sum: usize,
    pub bound: usize,
    pub target: usize,
    pub certified: bool,
}

/// Runs the full certification pipeline for the family member with the
/// default parameters: classification, facet-vertex maps, ridge screening on
/// both skins, reduced graph construction, and the distance bound
///
///   bound = 2 + ⌈ min over facet-class pairs (G⁻ node, G node) of
///                 (dist_{G⁻}(node, target of the G facet) +
///                  dist_G(target of the G⁻ facet, node)) / 2 ⌉.
pub fn certify_width_lower_bound(k: usize) -> Result<WidthCertificate, VerifyError> {
    let drum = build_dk(&default_params(k)?)?;
    certify_drum(&drum, k)
}

/// Certification pipeline for an already-built drum of the family.
pub fn certify_drum(drum: &Drum, k: usize) -> Result<WidthCertificate, VerifyError> {
    let mut stages = Vec::new();

    let cls_minus =
        classify_skin_facets(drum, k, Side::Minus).map_err(VerifyError::at("classify"))?;
    let cls_plus =
        classify_skin_facets(drum, k, Side::Plus).map_err(VerifyError::at("classify"))?;
    stages.push("classify".to_string());

    let phi_targets =
        check_phi_maps(drum, k, &cls_minus, &cls_plus).map_err(VerifyError::at("phi"))?;
    stages.push("phi".to_string());

    let screen_minus = screen_edges(drum, k, Side::Minus).map_err(VerifyError::at("edges"))?;
    let screen_plus = screen_edges(drum, k, Side::Plus).map_err(VerifyError::at("edges"))?;
    stages.push("edges".to_string());

    let g_minus = build_g(drum, k, Side::Minus, &cls_minus).map_err(VerifyError::at("graphs"))?;
    let g_plus = build_g(drum, k, Side::Plus, &cls_plus).map_err(VerifyError::at("graphs"))?;
    let distances_minus = check_cor_bound(&g_minus, k).map_err(VerifyError::at("graphs"))?;
    let distances_plus = check_cor_bound(&g_plus, k).map_err(VerifyError::at("graphs"))?;
    stages.push("graphs".to_string());

    // Pole class of each facet class's target vertex, read off the verified
    // facet-vertex maps.
    let phi_plus = drum.facet_vertex_map(Side::Plus)?;
    let phi_minus = drum.facet_vertex_map(Side::Minus)?;
    let mut target_in_minus: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    for (fi, &phi_fi) in phi_plus.iter().enumerate() {
        let pole = g_minus.vertex_class(phi_fi);
        let side = if pole == g_minus.vertex_class_nodes[0] {
            0
        } else {
            1
        };
        target_in_minus.insert(cls_plus.label(fi), side);
    }
    let mut target_in_plus: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    for (fi, &phi_fi) in phi_minus.iter().enumerate() {
        let pole = g_plus.vertex_class(phi_fi);
        let side = if pole == g_plus.vertex_class_nodes[0] {
            0
        } else {
            1
        };
        target_in_plus.insert(cls_minus.label(fi), side);
    }

    let mut min_pair_sum: Option<usize> = None;
    for (label_b, node_b) in &g_minus.facet_class_nodes {
        for (label_t, node_t) in &g_plus.facet_class_nodes {
            let db = distances_minus.facet_distances[&node_label(node_b, &g_minus)]
                [target_in_minus[label_t]];
            let dt = distances_plus.facet_distances[&node_label(node_t, &g_plus)]
                [target_in_plus[label_b]];
            let sum = db + dt;
            min_pair_sum = Some(min_pair_sum.map_or(sum, |m| m.min(sum)));
        }
    }
    let min_pair_sum = min_pair_sum.expect("at least one facet-class pair");
    let bound = 2 + min_pair_sum.div_ceil(2);
    stages.push("bound".to_string());

    let target = 5 + k;
    Ok(WidthCertificate {
        k,
        num_vertices: drum.polytope().num_vertices(),
        stages,
        phi_targets,
        screen_minus,
        screen_plus,
        distances_minus,
        distances_plus,
        min_pair_sum,
        bound,
        target,
        certified: bound >= target,
    })
}

fn node_label(node: &FaceId, g: &GGraph) -> String {
    g.facet_class_nodes
        .iter()
        .find(|(_, n)| *n == node)
        .map(|(l, _)| l.to_string())
        .expect("facet class node has a label")
}

/// Checks that every facet class in the fundamental domain has exactly four
/// neighbours in the skin's facet-ridge graph, with the expected labels.
pub fn check_full_incidence(drum: &Drum, k: usize, side: Side) -> Result<(), VerifyError> {
    let skin = drum.projected_skin(side);
    let (group, action) = skin_group(skin)?;
    let cls = classify_skin_facets(drum, k, side)?;
    let facets = skin.facets()?;
    let facet_index: BTreeMap<&[usize], usize> = facets
        .iter()
        .enumerate()
        .map(|(i, f)| (f.vertex_indices.as_slice(), i))
        .collect();
    let element = |g: &SignedPerm| -> Result<usize, VerifyError> {
        group
            .elements()
            .iter()
            .position(|h| h == g)
            .ok_or_else(|| VerifyError::GraphStructure("element missing from skin group".into()))
    };
    let identity = element(&SignedPerm::identity(4))?;
    let sigma = element(&sigma_skin())?;
    let flip = |i: usize| -> Result<usize, VerifyError> { element(&SignedPerm::sign_flip(4, i)) };
    // The expected flips conjugate through the skin-swap map for the
    // bottom skin: its coordinate permutation carries 1 → 3, 2 → 1, 3 → 0.
    let (eps2, eps3, eps4) = match side {
        Side::Plus => (flip(1)?, flip(2)?, flip(3)?),
        Side::Minus => (flip(3)?, flip(1)?, flip(0)?),
    };

    let fr = skin.facet_ridge_graph()?;
    let lookup = |gi: usize, kind: FacetKind| -> usize {
        let image = action.image_of_set(gi, &cls.reps[&kind]);
        facet_index[image.as_slice()]
    };
    let expect = |kind: FacetKind, neighbors: Vec<(usize, FacetKind)>| -> Result<(), VerifyError> {
        let fi = lookup(identity, kind);
        let mut actual: Vec<usize> = fr
            .neighbors(fr.node_index(&fi).expect("facet node"))
            .iter()
            .map(|&j| *fr.key(j))
            .collect();
        actual.sort_unstable();
        let mut wanted: Vec<usize> = neighbors.iter().map(|&(g, kd)| lookup(g, kd)).collect();
        wanted.sort_unstable();
        wanted.dedup();
        if actual != wanted {
            return Err(VerifyError::GraphStructure(format!(
                "facet {kind} has neighbours {actual:?}, expected {wanted:?}"
            )));
        }
        Ok(())
    };

    use FacetKind::{B, C, E};
    expect(
        B,
        vec![(identity, C(k)), (sigma, E(k)), (eps2, B), (eps4, C(k))],
    )?;
    for i in 1..=k {
        let mut en = vec![(identity, C(i)), (eps3, C(i))];
        if i < k {
            en.push((identity, E(i + 1)));
        } else {
            en.push((sigma, B));
        }
        if i > 1 {
            en.push((identity, E(i - 1)));
        } else {
            en.push((eps2, E(1)));
        }
        expect(E(i), en)?;
        let mut cn = vec![(identity, E(i)), (eps4, C(i))];
        if i < k {
            cn.push((identity, C(i + 1)));
        } else {
            cn.push((identity, B));
        }
        if i > 1 {
            cn.push((identity, C(i - 1)));
        } else {
            cn.push((eps2, C(1)));
        }
        expect(C(i), cn)?;
    }
    Ok(())
}

/// Arithmetic summary of a width result: the excess over the trivial bound
/// and its translation to a high-dimensional diameter statement.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub k: Option<usize>,
    pub num_vertices: usize,
    pub width_bound: usize,
    /// Width in excess of the drum dimension (5): a drum of width 5 + e
    /// yields polytopes exceeding the Hirsch-style diameter bound by e.
    pub excess_width: usize,
    /// Dimension of the translated polytope, `16k + 19`.
    pub translated_dimension: Option<usize>,
    /// Its facet count, twice the dimension.
    pub translated_facets: Option<usize>,
    /// Diameter excess over the translated polytope's facet-minus-dimension
    /// bound.
    pub diameter_deficit: Option<usize>,
    /// Relative excess `k / (16k + 19)`, as an exact fraction.
    pub relative_excess: Option<Rat>,
    /// Limit of the relative excess as `k → ∞`.
    pub relative_excess_limit: Rat,
}

/// Summarizes a width bound.  `k = None` reports a standalone drum (such as
/// the 48-vertex reference drum); `k = Some(_)` adds the family arithmetic.
pub fn report(k: Option<usize>, num_vertices: usize, width_bound: usize) -> SummaryReport {
    let excess_width = width_bound.saturating_sub(5);
    let (dim, facets, deficit, relative) = match k {
        Some(k) => {
            let d = 16 * k + 19;
            (
                Some(d),
                Some(2 * d),
                Some(k),
                Some(Rat::ratio(k as i64, d as i64)),
            )
        }
        None => (None, None, None, None),
    };
    SummaryReport {
        k,
        num_vertices,
        width_bound,
        excess_width,
        translated_dimension: dim,
        translated_facets: facets,
        diameter_deficit: deficit,
        relative_excess: relative,
        relative_excess_limit: Rat::ratio(1, 16),
    }
}
