//! End-to-end acceptance checks for the drum family and its certification
//! pipeline.  Runs without the default test harness so that exactly one
//! pass/fail line is printed per criterion, in order; the process exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::LazyLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use drumkit::drum::{toy, Drum, Side};
use drumkit::family::{
    build_dk, build_from_motif, build_santos, default_params, gamma, vecs2_motif,
};
use drumkit::graph::Graph;
use drumkit::polytope::{is_subset, FaceId, VertexPolytope};
use drumkit::search::{default_config, evaluate_motif, run_search, Outcome};
use drumkit::symmetry::IndexAction;
use drumkit::verify::{
    certify_drum, check_phi_maps, classify_skin_facets, screen_edges, DistanceReport,
    EdgeScreenReport, OrbitClassification, WidthCertificate,
};

const KS: std::ops::RangeInclusive<usize> = 1..=8;

static FAMILY: LazyLock<Vec<Drum>> = LazyLock::new(|| {
    KS.map(|k| build_dk(&default_params(k).unwrap()).unwrap())
        .collect()
});

fn dk(k: usize) -> &'static Drum {
    &FAMILY[k - 1]
}

/// Per-member classification of both skins, with the wall time spent.
static CLS: LazyLock<Vec<([OrbitClassification; 2], f64)>> = LazyLock::new(|| {
    KS.map(|k| {
        let start = Instant::now();
        let minus = classify_skin_facets(dk(k), k, Side::Minus).unwrap();
        let plus = classify_skin_facets(dk(k), k, Side::Plus).unwrap();
        ([minus, plus], start.elapsed().as_secs_f64())
    })
    .collect()
});

/// Per-member edge screening of both skins, with the wall time spent.
static SCREEN: LazyLock<Vec<([EdgeScreenReport; 2], f64)>> = LazyLock::new(|| {
    KS.map(|k| {
        let start = Instant::now();
        let minus = screen_edges(dk(k), k, Side::Minus).unwrap();
        let plus = screen_edges(dk(k), k, Side::Plus).unwrap();
        ([minus, plus], start.elapsed().as_secs_f64())
    })
    .collect()
});

/// Per-member width certificate, with the wall time spent.
static CERT: LazyLock<Vec<(WidthCertificate, f64)>> = LazyLock::new(|| {
    KS.map(|k| {
        let start = Instant::now();
        let cert = certify_drum(dk(k), k).unwrap();
        (cert, start.elapsed().as_secs_f64())
    })
    .collect()
});

static SANTOS: LazyLock<Drum> = LazyLock::new(|| build_santos().unwrap());

type CriterionResult = Result<String, String>;
type Criterion = (&'static str, fn() -> CriterionResult);

fn fail(msg: impl Into<String>) -> CriterionResult {
    Err(msg.into())
}

// --- criterion 1 -----------------------------------------------------------

fn reference_drum() -> CriterionResult {
    let drum = &*SANTOS;
    let n = drum.polytope().num_vertices();
    if n != 48 {
        return fail(format!("expected 48 vertices, got {n}"));
    }
    let width = drum.width().map_err(|e| e.to_string())?;
    if width != 6 {
        return fail(format!("expected width 6, got {width}"));
    }
    Ok("48 vertices, width 6".into())
}

// --- criterion 2 -----------------------------------------------------------

fn first_member_from_motif() -> CriterionResult {
    let drum = build_from_motif(&vecs2_motif()).map_err(|e| e.to_string())?;
    let n = drum.polytope().num_vertices();
    if n != 40 {
        return fail(format!("expected 40 vertices, got {n}"));
    }
    let width = drum.width().map_err(|e| e.to_string())?;
    if width != 6 {
        return fail(format!("expected width 6, got {width}"));
    }
    Ok("40 vertices, width 6".into())
}

// --- criterion 3 -----------------------------------------------------------

fn vertex_counts() -> CriterionResult {
    for k in KS {
        let n = dk(k).polytope().num_vertices();
        if n != 16 * k + 24 {
            return fail(format!("member {k}: {n} vertices, expected {}", 16 * k + 24));
        }
    }
    Ok("16k+24 vertices for k=1..8".into())
}

// --- criterion 4 -----------------------------------------------------------

fn facet_classification() -> CriterionResult {
    let mut slowest = 0.0f64;
    for k in KS {
        let (cls, secs) = &CLS[k - 1];
        for c in cls {
            if c.orbit_count() != 2 * k + 1 {
                return fail(format!(
                    "member {k} {:?} skin: {} orbits, expected {}",
                    c.side,
                    c.orbit_count(),
                    2 * k + 1
                ));
            }
        }
        if *secs > 120.0 {
            return fail(format!("member {k}: classification took {secs:.1}s > 120s"));
        }
        slowest = slowest.max(*secs);
    }
    Ok(format!(
        "2k+1 orbits per skin for k=1..8; slowest member {slowest:.1}s"
    ))
}

// --- criterion 5 -----------------------------------------------------------

fn facet_vertex_targets() -> CriterionResult {
    for k in KS {
        let (cls, _) = &CLS[k - 1];
        check_phi_maps(dk(k), k, &cls[0], &cls[1]).map_err(|e| format!("member {k}: {e}"))?;
    }
    Ok("facet-vertex maps hit the expected vertex orbits for k=1..8".into())
}

// --- criterion 6 -----------------------------------------------------------

fn edge_screening() -> CriterionResult {
    let mut slowest = 0.0f64;
    let mut swept = 0usize;
    for k in KS {
        let (reports, secs) = &SCREEN[k - 1];
        for r in reports {
            if r.ridges != r.screened + r.swept {
                return fail(format!(
                    "member {k} {:?} skin: {} ridges but {} screened + {} swept",
                    r.side, r.ridges, r.screened, r.swept
                ));
            }
            swept += r.swept;
        }
        if *secs > 600.0 {
            return fail(format!("member {k}: screening took {secs:.1}s > 600s"));
        }
        slowest = slowest.max(*secs);
    }
    Ok(format!(
        "both skins screened for k=1..8 ({swept} pencil sweeps); slowest member {slowest:.1}s"
    ))
}

// --- criterion 7 -----------------------------------------------------------

fn certified_bounds() -> CriterionResult {
    let mut bounds = Vec::new();
    let mut slowest = 0.0f64;
    for k in KS {
        let (cert, secs) = &CERT[k - 1];
        if !cert.certified || cert.bound < 5 + k {
            return fail(format!(
                "member {k}: bound {} (target {}), certified = {}",
                cert.bound,
                5 + k,
                cert.certified
            ));
        }
        if *secs > 600.0 {
            return fail(format!("member {k}: certification took {secs:.1}s > 600s"));
        }
        bounds.push(cert.bound.to_string());
        slowest = slowest.max(*secs);
    }
    Ok(format!(
        "width bounds {} for k=1..8; slowest member {slowest:.1}s",
        bounds.join(",")
    ))
}

// --- criterion 8 -----------------------------------------------------------

fn check_distance_report(report: &DistanceReport, k: usize) -> Result<(), String> {
    let required = 2 * k + 3;
    if report.required != required {
        return Err(format!(
            "member {k}: required distance {} recorded, expected {required}",
            report.required
        ));
    }
    for (label, &[to_a1, to_sa1]) in &report.facet_distances {
        // B and its mirror must avoid both poles; every other class only
        // the pole on its own side of the ladder.
        let checks: Vec<usize> = if label.ends_with('B') {
            vec![to_a1, to_sa1]
        } else if label.starts_with('s') {
            vec![to_a1]
        } else {
            vec![to_sa1]
        };
        if checks.into_iter().any(|d| d < required) {
            return Err(format!(
                "member {k}: class {label} at distance ({to_a1}, {to_sa1}) from the poles, \
                 required {required}"
            ));
        }
    }
    Ok(())
}

fn pole_distances() -> CriterionResult {
    for k in KS {
        let (cert, _) = &CERT[k - 1];
        check_distance_report(&cert.distances_minus, k)?;
        check_distance_report(&cert.distances_plus, k)?;
    }
    Ok("facet classes at distance >= 2k+3 from the far vertex pole for k=1..8".into())
}

// --- criterion 9 -----------------------------------------------------------

fn no_two_cycles() -> CriterionResult {
    if SANTOS.has_oriented_two_cycle().map_err(|e| e.to_string())? {
        return fail("reference drum has an oriented two-cycle");
    }
    for k in KS {
        if dk(k).has_oriented_two_cycle().map_err(|e| e.to_string())? {
            return fail(format!("member {k} has an oriented two-cycle"));
        }
    }
    Ok("reference drum and k=1..8 all pass the two-cycle screen".into())
}

// --- criterion 10 ----------------------------------------------------------

fn proper_faces(skin: &VertexPolytope) -> Result<Vec<FaceId>, String> {
    Ok(skin
        .all_faces()
        .map_err(|e| e.to_string())?
        .iter()
        .filter(|f| f.dim >= 0)
        .cloned()
        .collect())
}

fn oracle_disagreement(drum: &Drum, f_minus: &FaceId, f_plus: &FaceId) -> Result<bool, String> {
    let image = drum.pair_embedding_by_enumeration().map_err(|e| e.to_string())?;
    let expected = image.contains(&(f_minus.clone(), f_plus.clone()));
    let witness = drum
        .pair_in_image_lp(f_minus, f_plus)
        .map_err(|e| e.to_string())?;
    Ok(witness.is_some() != expected)
}

fn oracle_equivalence() -> CriterionResult {
    let start = Instant::now();

    // Exhaustive sweep over all dimension-compatible face pairs of the
    // first member's skins.
    let d1 = dk(1);
    let faces_minus = proper_faces(d1.projected_skin(Side::Minus))?;
    let faces_plus = proper_faces(d1.projected_skin(Side::Plus))?;
    let image = d1.pair_embedding_by_enumeration().map_err(|e| e.to_string())?;
    let mut checked = 0usize;
    let mut hits = 0usize;
    for fm in &faces_minus {
        for fp in &faces_plus {
            if fm.dim + fp.dim != 3 {
                continue;
            }
            let expected = image.contains(&(fm.clone(), fp.clone()));
            let witness = d1.pair_in_image_lp(fm, fp).map_err(|e| e.to_string())?;
            if witness.is_some() != expected {
                return fail(format!(
                    "first member: oracles disagree on pair ({:?}, {:?})",
                    fm.vertex_indices, fp.vertex_indices
                ));
            }
            checked += 1;
            hits += usize::from(expected);
        }
    }
    if hits != image.len() {
        return fail(format!(
            "first member: sweep hit {hits} image pairs, enumeration found {}",
            image.len()
        ));
    }

    // Seeded sample on the second member.
    let d2 = dk(2);
    let by_dim = |side: Side| -> Result<BTreeMap<isize, Vec<FaceId>>, String> {
        let mut map: BTreeMap<isize, Vec<FaceId>> = BTreeMap::new();
        for f in proper_faces(d2.projected_skin(side))? {
            map.entry(f.dim).or_default().push(f);
        }
        Ok(map)
    };
    let minus_by_dim = by_dim(Side::Minus)?;
    let plus_by_dim = by_dim(Side::Plus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples = 1000usize;
    for _ in 0..samples {
        let a = rng.gen_range(0..=3isize);
        let fm = &minus_by_dim[&a][rng.gen_range(0..minus_by_dim[&a].len())];
        let fp = &plus_by_dim[&(3 - a)][rng.gen_range(0..plus_by_dim[&(3 - a)].len())];
        if oracle_disagreement(d2, fm, fp)? {
            return fail(format!(
                "second member: oracles disagree on pair ({:?}, {:?})",
                fm.vertex_indices, fp.vertex_indices
            ));
        }
    }

    let secs = start.elapsed().as_secs_f64();
    if secs > 1800.0 {
        return fail(format!("took {secs:.0}s > 1800s"));
    }
    Ok(format!(
        "{checked} exhaustive pairs on the first member ({hits} in the image), \
         {samples} sampled pairs on the second; {secs:.1}s"
    ))
}

// --- criterion 11 ----------------------------------------------------------

/// Hasse diagram on the nonempty proper faces of a polytope.
fn face_box_graph(poly: &VertexPolytope) -> Result<Graph<FaceId>, String> {
    let faces = proper_faces(poly)?;
    let mut graph = Graph::new();
    for f in &faces {
        for g in &faces {
            if g.dim == f.dim + 1 && is_subset(&f.vertex_indices, &g.vertex_indices) {
                graph.add_edge(f.clone(), g.clone());
            }
        }
    }
    Ok(graph)
}

fn pair_distance_bound() -> CriterionResult {
    let d1 = dk(1);
    let poly = d1.polytope();
    let fr = poly.facet_ridge_graph().map_err(|e| e.to_string())?;
    let facets = poly.facets().map_err(|e| e.to_string())?;
    let drum_facets = d1.drum_facets().map_err(|e| e.to_string())?;

    // Trimmed graph: the facet-ridge graph with both skin facets removed,
    // and each remaining facet tagged with its skin-face pair.
    let pair_of: BTreeMap<usize, (FaceId, FaceId)> = drum_facets
        .iter()
        .map(|df| {
            let idx = facets
                .iter()
                .position(|f| f.vertex_indices == df.facet.vertex_indices)
                .expect("drum facet is a facet");
            (idx, (df.f_bot.clone(), df.f_top.clone()))
        })
        .collect();
    let mut trimmed: Graph<usize> = Graph::new();
    for &i in pair_of.keys() {
        trimmed.add_node(i);
    }
    for (i, &gi) in fr.keys().iter().enumerate() {
        if !pair_of.contains_key(&gi) {
            continue;
        }
        for &j in fr.neighbors(i) {
            let gj = fr.keys()[j];
            if pair_of.contains_key(&gj) {
                trimmed.add_edge(gi, gj);
            }
        }
    }

    let box_minus = face_box_graph(d1.projected_skin(Side::Minus))?;
    let box_plus = face_box_graph(d1.projected_skin(Side::Plus))?;
    let box_dist = |g: &Graph<FaceId>, a: &FaceId, b: &FaceId| -> Result<usize, String> {
        g.distance(a, b)
            .ok_or_else(|| "skin face graph is disconnected".to_string())
    };

    let nodes: Vec<usize> = pair_of.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = 500usize;
    for _ in 0..samples {
        let a = nodes[rng.gen_range(0..nodes.len())];
        let b = nodes[rng.gen_range(0..nodes.len())];
        let ai = trimmed.node_index(&a).expect("node");
        let bi = trimmed.node_index(&b).expect("node");
        let dist = trimmed.distances_from(ai)[bi].ok_or("trimmed graph is disconnected")?;
        let (a_bot, a_top) = &pair_of[&a];
        let (b_bot, b_top) = &pair_of[&b];
        let lower = box_dist(&box_minus, a_bot, b_bot)? + box_dist(&box_plus, a_top, b_top)?;
        if 2 * dist < lower {
            return fail(format!(
                "facets {a} and {b}: trimmed distance {dist} < half the product-graph \
                 distance {lower}"
            ));
        }
    }
    Ok(format!(
        "2·dist >= product-graph dist on {samples} sampled facet pairs of the first member"
    ))
}

// --- criterion 12 ----------------------------------------------------------

fn certificates_positive(poly: &VertexPolytope, what: &str) -> Result<(), String> {
    for facet in poly.facets().map_err(|e| e.to_string())? {
        for (i, v) in poly.vertices().iter().enumerate() {
            let val = facet.functional.eval(v);
            let on = facet.vertex_indices.contains(&i);
            if on && !val.is_zero() {
                return Err(format!("{what}: facet certificate nonzero on its own face"));
            }
            if !on && !val.is_positive() {
                return Err(format!("{what}: facet certificate not positive off-face"));
            }
        }
    }
    Ok(())
}

fn ridges_in_two_facets(poly: &VertexPolytope, what: &str) -> Result<(), String> {
    let facets = poly.facets().map_err(|e| e.to_string())?;
    let ridge_dim = poly.dim() as isize - 2;
    for ridge in poly.faces_of_dim(ridge_dim).map_err(|e| e.to_string())? {
        let count = facets
            .iter()
            .filter(|f| is_subset(&ridge.vertex_indices, &f.vertex_indices))
            .count();
        if count != 2 {
            return Err(format!(
                "{what}: ridge {:?} lies in {count} facets",
                ridge.vertex_indices
            ));
        }
    }
    Ok(())
}

fn small_example_invariants() -> CriterionResult {
    let trapezoid = toy::trapezoid();
    if trapezoid.width().map_err(|e| e.to_string())? != 2 {
        return fail("trapezoid drum does not have width 2");
    }
    let antiprism = toy::antiprism();
    if antiprism.width().map_err(|e| e.to_string())? != 3 {
        return fail("antiprism drum does not have width 3");
    }

    certificates_positive(antiprism.polytope(), "antiprism")?;
    certificates_positive(dk(1).polytope(), "first member")?;
    ridges_in_two_facets(antiprism.polytope(), "antiprism")?;
    ridges_in_two_facets(dk(1).projected_skin(Side::Plus), "first member top skin")?;
    ridges_in_two_facets(dk(1).projected_skin(Side::Minus), "first member bottom skin")?;

    // Vertex orbit sizes of the second member under the full symmetry
    // group: three orbits of 8 and two of 16.
    let d2 = dk(2);
    let action = IndexAction::new(&gamma(), d2.polytope().vertices())
        .map_err(|_| "point set is not invariant under the symmetry group")?;
    let n = d2.polytope().num_vertices();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let orbit: std::collections::BTreeSet<usize> =
            (0..action.num_elements()).map(|g| action.image(g, i)).collect();
        for &j in &orbit {
            seen[j] = true;
        }
        sizes.push(orbit.len());
    }
    sizes.sort_unstable();
    if sizes != [8, 8, 8, 16, 16] {
        return fail(format!("second member vertex orbit sizes {sizes:?}"));
    }
    Ok("toy widths 2 and 3, facet certificates, ridge counts, orbit sizes 8/8/8/16/16".into())
}

// --- criterion 13 ----------------------------------------------------------

fn second_member_exact_width() -> CriterionResult {
    let start = Instant::now();
    let width = dk(2).width().map_err(|e| e.to_string())?;
    let (cert, _) = &CERT[1];
    if width < 7 {
        return fail(format!("exact width {width} < 7"));
    }
    if width < cert.bound {
        return fail(format!(
            "exact width {width} below the certified bound {}",
            cert.bound
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 1800.0 {
        return fail(format!("took {secs:.0}s > 1800s"));
    }
    Ok(format!(
        "exact width {width}, certified bound {}; {secs:.1}s",
        cert.bound
    ))
}

// --- criterion 14 ----------------------------------------------------------

fn search_smoke() -> CriterionResult {
    let start = Instant::now();

    // The planted known-good motif must come back at width 6.
    match evaluate_motif(&vecs2_motif(), 120) {
        Outcome::Width {
            vertices: 40,
            width: 6,
        } => {}
        other => return fail(format!("planted motif scored {other:?}")),
    }

    let cfg = default_config(14, 100);
    let run = || -> Result<(String, Vec<Outcome>), String> {
        let mut log = String::new();
        let records = run_search(&cfg, |r| {
            log.push_str(&serde_json::to_string(r).expect("record serializes"));
            log.push('\n');
        })
        .map_err(|e| e.to_string())?;
        Ok((log, records.into_iter().map(|r| r.outcome).collect()))
    };
    let (log_a, outcomes) = run()?;
    let (log_b, _) = run()?;
    if log_a != log_b {
        return fail("two runs with the same seed produced different record streams");
    }
    if log_a.lines().count() != 100 {
        return fail(format!("expected 100 records, got {}", log_a.lines().count()));
    }
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for o in &outcomes {
        let key = match o {
            Outcome::Rejected { .. } => "rejected",
            Outcome::TwoCycle => "two-cycle",
            Outcome::TooLarge { .. } => "too-large",
            Outcome::Width { .. } => "width",
        };
        *tally.entry(key).or_default() += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 600.0 {
        return fail(format!("took {secs:.0}s > 600s"));
    }
    let tally: Vec<String> = tally.iter().map(|(k, v)| format!("{v} {k}")).collect();
    Ok(format!(
        "planted motif width 6; 100 motifs ({}), byte-identical replay; {secs:.1}s",
        tally.join(", ")
    ))
}

// --- runner ----------------------------------------------------------------

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("reference drum: 48 vertices, width 6", reference_drum),
        ("first member from its motif: 40 vertices, width 6", first_member_from_motif),
        ("vertex counts 16k+24 for k=1..8", vertex_counts),
        ("skin facet classification into 2k+1 orbits", facet_classification),
        ("facet-vertex maps land on the expected orbits", facet_vertex_targets),
        ("boundary-edge screening of both skins", edge_screening),
        ("certified width lower bound >= 5+k", certified_bounds),
        ("facet classes far from the opposite vertex pole", pole_distances),
        ("no oriented two-cycles in the incidence pattern", no_two_cycles),
        ("enumeration and LP pair oracles agree", oracle_equivalence),
        ("trimmed distance >= half the product-graph distance", pair_distance_bound),
        ("small-example invariants", small_example_invariants),
        ("exact width of the second member", second_member_exact_width),
        ("seeded motif search smoke test", search_smoke),
    ];
    let mut failed = 0usize;
    for (i, (desc, check)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        let line = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(detail)) => format!("criterion {n:2}: PASS — {desc} ({detail})"),
            Ok(Err(reason)) => {
                failed += 1;
                format!("criterion {n:2}: FAIL — {desc}: {reason}")
            }
            Err(panic) => {
                failed += 1;
                let msg = panic
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| panic.downcast_ref::<&str>().copied())
                    .unwrap_or("panic");
                format!("criterion {n:2}: FAIL — {desc}: {msg}")
            }
        };
        println!("{line}");
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
