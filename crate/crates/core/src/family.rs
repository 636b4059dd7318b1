//! Constructors for the drum family: the symmetry group Γ, the drums D_k
//! with validated chain parameters, Santos' 48-vertex drum, and arbitrary
//! motif-generated drums.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::drum::{make_drum, Drum, DrumError};
use crate::rat::{ivec, Rat, RVec};
use crate::symmetry::{Group, SignedPerm};

/// Sign flip ε_i at 0-based coordinate `i` of R^5.
pub fn eps(i: usize) -> SignedPerm {
    SignedPerm::sign_flip(5, i)
}

/// τ: the 4-cycle on the first four coordinates sending positions
/// (1,2,3,4) → (3,4,2,1), composed with a sign flip of the last coordinate.
/// τ swaps the two skins of every drum in the family.
pub fn tau() -> SignedPerm {
    SignedPerm::new(vec![2, 3, 1, 0, 4], vec![1, 1, 1, 1, -1]).unwrap()
}

/// σ = τ²: the double transposition (1 2)(3 4), fixing the last coordinate.
pub fn sigma() -> SignedPerm {
    tau().compose(&tau())
}

/// Γ = ⟨ε_1, ε_2, ε_3, ε_4, τ⟩, of order 64.
pub fn gamma() -> Group {
    Group::generate(5, &[eps(0), eps(1), eps(2), eps(3), tau()])
}

/// Γ⁺ = ⟨ε_1, ε_2, ε_3, ε_4, σ⟩: the index-2 subgroup preserving each skin.
pub fn gamma_plus() -> Group {
    Group::generate(5, &[eps(0), eps(1), eps(2), eps(3), sigma()])
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    ParamsInvalid(String),
    #[error("vertex count {got}, expected {expected}: degenerate parameter choice")]
    VertexCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Drum(#[from] DrumError),
}

/// Planar chain a_1, …, a_{k+1} generating the first-quadrant arc of D_k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: usize,
    pub a: Vec<(Rat, Rat)>,
}

/// One named validation check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsCheck {
    pub name: String,
    pub pass: bool,
    /// True for conditions the construction implies rather than assumes;
    /// a failure here signals an inconsistency, not a bad input.
    pub consequence: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub checks: Vec<ParamsCheck>,
}

impl ParamsReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks
            .iter()
            .find(|c| !c.pass)
            .map(|c| c.name.as_str())
    }
}

/// Default chain: a_1 = (100,0), a_{k+1} = (75,75); for k ≥ 2 the interior
/// points are consecutive intersections of k supporting lines whose
/// y-intercepts are harmonically interpolated from 1000 down to 7575/26
/// (the value forced by the last line passing through (75,75) with
/// x-intercept 101) and whose x-intercepts move from 100 to 101 with
/// reciprocals following a quadratic progression.
///
/// Two deliberate departures from the obvious schedule: the quadratic
/// (rather than linear) x-intercept progression puts the line duals in
/// convex position, which is what keeps every line on the envelope — a
/// linear schedule drops the interior lines and breaks the chain for
/// k ≥ 3; and the final x-intercept stops at 101 rather than the extreme
/// 102, keeping every y-intercept strictly above 850/3 — chains touching
/// that bound lose a unit of width (observed directly on the k = 2 drum).
pub fn default_params(k: usize) -> Result<FamilyParams, FamilyError> {
    if k == 0 {
        return Err(FamilyError::ParamsInvalid("k must be ≥ 1".into()));
    }
    let a1 = (Rat::from_int(100), Rat::zero());
    let last = (Rat::from_int(75), Rat::from_int(75));
    let mut a = vec![a1];
    if k >= 2 {
        let u = |i: usize| -> Rat {
            // 1/u_i quadratic between 1/100 and 1/101, i = 1..k.
            let q = Rat::ratio(i as i64 - 1, k as i64 - 1);
            let s = Rat::ratio(1, 100) + (Rat::ratio(1, 101) - Rat::ratio(1, 100)) * &q * &q;
            s.recip()
        };
        let v = |i: usize| -> Rat {
            // 1/v_i linear between 1/1000 and 3/850.
            let w1 = Rat::ratio(1, 1000);
            let wk = Rat::ratio(26, 7575);
            let t = Rat::ratio(i as i64 - 1, k as i64 - 1);
            (&w1 + &(&t * &(&wk - &w1))).recip()
        };
        for i in 2..=k {
            // Intersection of L_{i−1} and L_i, each line x/u + y/v = 1.
            let (u1, v1) = (u(i - 1), v(i - 1));
            let (u2, v2) = (u(i), v(i));
            // y from the difference of the two line equations.
            let y = (&u1 - &u2) / (&u1 / &v1 - &u2 / &v2);
            let x = &u1 * &(Rat::one() - &y / &v1);
            a.push((x, y));
        }
    }
    a.push(last);
    let params = FamilyParams { k, a };
    let report = validate_params(&params);
    if let Some(name) = report.first_failure() {
        return Err(FamilyError::ParamsInvalid(format!(
            "default construction failed check `{name}`"
        )));
    }
    Ok(params)
}

/// X-intercept of the line through two points, when it is not horizontal.
fn x_intercept(p: &(Rat, Rat), q: &(Rat, Rat)) -> Option<Rat> {
    let dy = &q.1 - &p.1;
    if dy.is_zero() {
        return None;
    }
    Some(&p.0 - &(&p.1 * &(&q.0 - &p.0)) / &dy)
}

/// Y-intercept of the line through two points, when it is not vertical.
fn y_intercept(p: &(Rat, Rat), q: &(Rat, Rat)) -> Option<Rat> {
    let dx = &q.0 - &p.0;
    if dx.is_zero() {
        return None;
    }
    Some(&p.1 - &(&p.0 * &(&q.1 - &p.1)) / &dx)
}

/// Exact checks of every chain assumption; failures are reported, not
/// raised.
pub fn validate_params(p: &FamilyParams) -> ParamsReport {
    let mut checks = Vec::new();
    let mut check = |name: &str, pass: bool, consequence: bool| {
        checks.push(ParamsCheck {
            name: name.into(),
            pass,
            consequence,
        });
    };
    let k = p.k;
    check("length: k+1 chain points", p.a.len() == k + 1, false);
    if p.a.len() != k + 1 || k == 0 {
        return ParamsReport { checks };
    }
    check(
        "endpoints: a_1 = (100,0) and a_{k+1} = (75,75)",
        p.a[0] == (Rat::from_int(100), Rat::zero())
            && p.a[k] == (Rat::from_int(75), Rat::from_int(75)),
        false,
    );
    let x_dec = p.a.windows(2).all(|w| w[0].0 > w[1].0);
    let y_inc = p.a.windows(2).all(|w| w[0].1 < w[1].1);
    check("monotone: x strictly decreasing", x_dec, false);
    check("monotone: y strictly increasing", y_inc, false);

    // Convex position: consecutive triples turn consistently (strictly), and
    // every point is a hull vertex, certified by a supporting functional.
    let mut convex = true;
    for w in p.a.windows(3) {
        let ((x1, y1), (x2, y2), (x3, y3)) = (&w[0], &w[1], &w[2]);
        let cross = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1);
        // The chain bulges away from the origin: strict left turns.
        if !cross.is_positive() {
            convex = false;
        }
    }
    check("convex position: strict turns", convex, false);
    if k >= 2 {
        let pts: Vec<RVec> = p.a.iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
        let hull_ok = crate::polytope::VertexPolytope::new(2, pts)
            .ok()
            .map(|poly| {
                (0..p.a.len()).all(|i| {
                    matches!(
                        poly.certify_face(&[i]),
                        Ok(crate::polytope::FaceCert::Face(_))
                    )
                })
            })
            .unwrap_or(false);
        check("convex position: all points are hull vertices", hull_ok, false);
    }

    // Supporting-line intercepts for each chain segment.
    let hundred = Rat::from_int(100);
    let hundred_two = Rat::from_int(102);
    let v_bound = Rat::ratio(850, 3);
    let mut u_ok = true;
    let mut v_ok = true;
    for w in p.a.windows(2) {
        match x_intercept(&w[0], &w[1]) {
            Some(u) => {
                if u < hundred || u > hundred_two {
                    u_ok = false;
                }
            }
            None => u_ok = false,
        }
        match y_intercept(&w[0], &w[1]) {
            Some(v) => {
                if v < v_bound {
                    v_ok = false;
                }
            }
            None => v_ok = false,
        }
    }
    check("segment x-intercepts in [100, 102]", u_ok, false);
    check("segment y-intercepts at least 850/3", v_ok, true);
    ParamsReport { checks }
}

/// The full point list of D_k before hull verification: Γ-orbit closure of
/// m_{±±} = (0,0,±3,±3,1), p_± = (98,0,±1,0,1), a_i = (x_i,y_i,0,0,1).
pub fn dk_points(params: &FamilyParams) -> Vec<RVec> {
    let mut seeds: Vec<RVec> = vec![ivec(&[0, 0, 3, 3, 1]), ivec(&[98, 0, 1, 0, 1])];
    for (x, y) in &params.a {
        seeds.push(vec![x.clone(), y.clone(), Rat::zero(), Rat::zero(), Rat::one()]);
    }
    orbit_closure(&seeds)
}

fn orbit_closure(seeds: &[RVec]) -> Vec<RVec> {
    let group = gamma();
    let mut set: BTreeSet<RVec> = BTreeSet::new();
    for s in seeds {
        for g in group.elements() {
            set.insert(g.apply(s));
        }
    }
    set.into_iter().collect()
}

/// Builds D_k; validates the parameters, closes under Γ, and checks the
/// vertex-count identity 16k + 24.
pub fn build_dk(params: &FamilyParams) -> Result<Drum, FamilyError> {
    let report = validate_params(params);
    if let Some(name) = report.first_failure() {
        return Err(FamilyError::ParamsInvalid(format!("check `{name}` failed")));
    }
    let points = dk_points(params);
    let expected = 16 * params.k + 24;
    if points.len() != expected {
        return Err(FamilyError::VertexCountMismatch {
            expected,
            got: points.len(),
        });
    }
    let drum = make_drum(points, Some(gamma()))?;
    Ok(drum)
}

/// The five-vector motif of Santos' width-6 drum.
pub fn santos_motif() -> Vec<RVec> {
    vec![
        ivec(&[18, 0, 0, 0, 1]),
        ivec(&[0, 0, 45, 0, 1]),
        ivec(&[15, 15, 0, 0, 1]),
        ivec(&[0, 0, 30, 30, 1]),
        ivec(&[10, 0, 0, 40, 1]),
    ]
}

/// The four-vector motif generating the same drum as D_1.
pub fn vecs2_motif() -> Vec<RVec> {
    vec![
        ivec(&[0, 0, 3, 3, 1]),
        ivec(&[98, 0, 1, 0, 1]),
        ivec(&[100, 0, 0, 0, 1]),
        ivec(&[75, 75, 0, 0, 1]),
    ]
}

/// Γ-closure of an arbitrary motif (points with last coordinate ±1).
pub fn build_from_motif(motif: &[RVec]) -> Result<Drum, FamilyError> {
    let points = orbit_closure(motif);
    Ok(make_drum(points, Some(gamma()))?)
}

pub fn build_santos() -> Result<Drum, FamilyError> {
    build_from_motif(&santos_motif())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drum::Side;

    #[test]
    fn group_orders() {
        assert_eq!(gamma().order(), 64);
        assert_eq!(gamma_plus().order(), 32);
        assert!(sigma().compose(&sigma()).is_identity());
        // τ has order 4 and lies outside Γ⁺.
        let t = tau();
        assert!(t.compose(&t).compose(&t).compose(&t).is_identity());
        assert!(!gamma_plus().contains(&t));
        assert!(gamma().contains(&t));
    }

    #[test]
    fn tau_moves_named_points() {
        let a1 = ivec(&[100, 0, 0, 0, 1]);
        let n = sigma().apply(&a1);
        assert_eq!(n, ivec(&[0, 100, 0, 0, 1]));
        assert_eq!(tau().apply(&n), ivec(&[0, 0, 0, 100, -1]));
        assert_eq!(tau().apply(&a1), ivec(&[0, 0, 100, 0, -1]));
    }

    #[test]
    fn orbit_sizes_of_generators() {
        let g = gamma();
        assert_eq!(g.orbit(&ivec(&[0, 0, 3, 3, 1])).len(), 8);
        assert_eq!(g.orbit(&ivec(&[98, 0, 1, 0, 1])).len(), 16);
        assert_eq!(g.orbit(&ivec(&[100, 0, 0, 0, 1])).len(), 8);
        assert_eq!(g.orbit(&ivec(&[75, 75, 0, 0, 1])).len(), 8);
        // An interior chain point with two nonzero coordinates of different
        // magnitude has the largest orbit.
        let p = default_params(2).unwrap();
        let (x, y) = &p.a[1];
        let a2 = vec![x.clone(), y.clone(), Rat::zero(), Rat::zero(), Rat::one()];
        assert_eq!(g.orbit(&a2).len(), 16);
    }

    #[test]
    fn default_params_small_k() {
        let p1 = default_params(1).unwrap();
        assert_eq!(
            p1.a,
            vec![
                (Rat::from_int(100), Rat::zero()),
                (Rat::from_int(75), Rat::from_int(75))
            ]
        );
        let p2 = default_params(2).unwrap();
        assert_eq!(p2.a.len(), 3);
        // a_2 lies on the last supporting line: x/101 + 26y/7575 = 1.
        let (x, y) = &p2.a[1];
        assert_eq!(
            x / &Rat::from_int(101) + y / &Rat::ratio(7575, 26),
            Rat::one()
        );
        for k in [3, 5, 8] {
            assert!(validate_params(&default_params(k).unwrap()).pass());
        }
    }

    #[test]
    fn planted_violations_are_reported() {
        let mut p = default_params(3).unwrap();
        // Drag a_2 inside the hull of the others.
        p.a[1] = (Rat::from_int(80), Rat::from_int(10));
        let report = validate_params(&p);
        assert!(!report.pass());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.contains("convex") && !c.pass));
    }

    #[test]
    fn vertex_counts_and_skins() {
        for k in [1usize, 2, 3] {
            let params = default_params(k).unwrap();
            let points = dk_points(&params);
            assert_eq!(points.len(), 16 * k + 24);
        }
        let d1 = build_dk(&default_params(1).unwrap()).unwrap();
        assert_eq!(d1.skin(Side::Plus).len(), 20);
        assert_eq!(d1.skin(Side::Minus).len(), 20);
        // τ swaps the skins.
        let t = tau();
        let verts = d1.polytope().vertices();
        for &i in d1.skin(Side::Plus) {
            let img = t.apply(&verts[i]);
            assert!(d1.skin(Side::Minus).iter().any(|&j| verts[j] == img));
        }
    }

    #[test]
    fn santos_and_vecs2_point_sets() {
        let santos = orbit_closure(&santos_motif());
        assert_eq!(santos.len(), 48);
        let d1_from_motif = orbit_closure(&vecs2_motif());
        let d1_points = dk_points(&default_params(1).unwrap());
        assert_eq!(d1_from_motif, d1_points);
    }

    #[test]
    fn degenerate_motifs_rejected() {
        let err = build_from_motif(&[ivec(&[0, 0, 0, 0, 1])]).unwrap_err();
        assert_eq!(err, FamilyError::Drum(DrumError::NotFullDim));
    }
}
