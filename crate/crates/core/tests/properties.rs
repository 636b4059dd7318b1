//! Randomized invariant checks for the arithmetic, symmetry, and drum
//! layers.

use std::sync::LazyLock;

use proptest::prelude::*;

use drumkit::drum::{make_drum, Drum, DrumError};
use drumkit::family::{build_dk, default_params, gamma};
use drumkit::rat::{ivec, Rat};
use drumkit::symmetry::{Group, IndexAction};

static GAMMA: LazyLock<Group> = LazyLock::new(gamma);

static D1: LazyLock<Drum> =
    LazyLock::new(|| build_dk(&default_params(1).unwrap()).unwrap());

static D1_ACTION: LazyLock<IndexAction> =
    LazyLock::new(|| IndexAction::new(&GAMMA, D1.polytope().vertices()).unwrap());

fn rat() -> impl Strategy<Value = Rat> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(p, q)| Rat::ratio(p, q))
}

fn point5() -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(rat(), 5)
}

proptest! {
    #[test]
    fn rational_display_parse_roundtrip(a in rat()) {
        let text = a.to_string();
        let back: Rat = text.parse().unwrap();
        prop_assert_eq!(a, back);
    }

    #[test]
    fn rational_field_identities(a in rat(), b in rat()) {
        prop_assert_eq!(a.clone() + b.clone() - b.clone(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!(a.clone() * b.clone() * b.recip(), a.clone());
        }
        prop_assert_eq!(a.clone() * b.clone(), b * a);
    }

    #[test]
    fn group_action_is_homomorphism(
        gi in 0usize..64,
        hi in 0usize..64,
        v in point5(),
    ) {
        let g = &GAMMA.elements()[gi];
        let h = &GAMMA.elements()[hi];
        prop_assert_eq!(g.compose(h).apply(&v), g.apply(&h.apply(&v)));
        prop_assert_eq!(g.inverse().apply(&g.apply(&v)), v);
    }

    #[test]
    fn canonical_subset_is_orbit_invariant(
        gi in 0usize..64,
        subset in proptest::collection::btree_set(0usize..40, 1..=5),
    ) {
        let subset: Vec<usize> = subset.into_iter().collect();
        let image = D1_ACTION.image_of_set(gi, &subset);
        prop_assert_eq!(
            D1_ACTION.canonical_subset(&subset),
            D1_ACTION.canonical_subset(&image)
        );
    }

    #[test]
    fn planar_drum_width_is_positive_and_bounded(
        lo in proptest::collection::btree_set(-20i64..=20, 2..=6),
        hi in proptest::collection::btree_set(-20i64..=20, 2..=6),
    ) {
        let points: Vec<_> = lo
            .iter()
            .map(|&x| ivec(&[x, -1]))
            .chain(hi.iter().map(|&x| ivec(&[x, 1])))
            .collect();
        match make_drum(points, None) {
            Ok(drum) => {
                let width = drum.width().unwrap();
                let facets = drum.polytope().facets().unwrap().len();
                prop_assert!(width >= 1);
                prop_assert!(width < facets);
            }
            // Collinear inputs are legitimately rejected.
            Err(DrumError::Polytope(_) | DrumError::NotFullDim) => {}
            Err(other) => prop_assert!(false, "unexpected rejection: {other}"),
        }
    }

    #[test]
    fn drum_json_roundtrip(
        lo in proptest::collection::btree_set((-9i64..=9, -9i64..=9), 3..=5),
        hi in proptest::collection::btree_set((-9i64..=9, -9i64..=9), 3..=5),
    ) {
        let points: Vec<_> = lo
            .iter()
            .map(|&(x, y)| ivec(&[x, y, -1]))
            .chain(hi.iter().map(|&(x, y)| ivec(&[x, y, 1])))
            .collect();
        if let Ok(drum) = make_drum(points, None) {
            let json = serde_json::to_string(&drum.to_json()).unwrap();
            let back = Drum::from_json(serde_json::from_str(&json).unwrap(), None).unwrap();
            prop_assert_eq!(drum.polytope().vertices(), back.polytope().vertices());
        }
    }
}
