use std::sync::Arc;

use coinrt::group_models::catalog::{example1_bundle, example2_bundle, g2_bieberbach, g2_with_shift};
use coinrt::group_models::io::{group_from_json, group_to_json, hom_from_json, hom_to_json, Rat};
use coinrt::group_models::{CrystGroup, FiniteGroupTable, Group, GroupHom, Sublattice};
use coinrt::lattice_alg::{rat, IntMatrix, Rational};
use coinrt::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn roundtrip_group(g: &Group) {
    let text = group_to_json(g);
    let back = group_from_json(&text).unwrap();
    assert!(back.same(g));
    assert_eq!(group_to_json(&back), text);
}

fn roundtrip_hom(h: &GroupHom) {
    let text = hom_to_json(h);
    let back = hom_from_json(&text, h.source(), h.target()).unwrap();
    assert_eq!(&back, h);
    assert_eq!(hom_to_json(&back), text);
}

#[test]
fn builtin_groups_and_homs_roundtrip() {
    let groups: Vec<Group> = vec![
        g2_bieberbach().into(),
        CrystGroup::torus(3).into(),
        CrystGroup::lattice_group(Sublattice::new(&IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]])).unwrap()).into(),
        FiniteGroupTable::cyclic(6).into(),
    ];
    for g in &groups {
        roundtrip_group(g);
    }
    for b in [example1_bundle(), example2_bundle()] {
        roundtrip_hom(&b.phi);
        roundtrip_hom(&b.psi);
    }
    let g2 = Arc::new(g2_bieberbach());
    let d = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    let f = GroupHom::affine(&g2, &g2, d, vec![rat(1, 3), rat(1, 2), rat(0, 1)], vec![0, 1]).unwrap();
    roundtrip_hom(&f);
}

#[test]
fn documented_schema_parses() {
    let text = r#"{
        "dimension": 3,
        "holonomy": {"order": 2, "table": [[0, 1], [1, 0]]},
        "rotation_parts": [
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[1, 0, 0], [0, -1, 0], [0, 0, -1]]
        ],
        "translation_parts": [["0", "0", "0"], ["1/2", "0", "0"]]
    }"#;
    let g = group_from_json(text).unwrap();
    assert!(g.same(&g2_bieberbach().into()));
    let hom = r#"{"linear": [[1,0,0],[0,1,0],[0,0,1]], "translation": ["1/4", "0", "0"], "holonomy_map": [0, 1]}"#;
    hom_from_json(hom, &g, &g).unwrap();
}

#[test]
fn malformed_input_is_a_parse_or_validation_error() {
    assert!(matches!(group_from_json("{"), Err(Error::Parse(_))));
    assert!(matches!(
        group_from_json(r#"{"order": 2, "table": [[0, 1]]}"#),
        Err(Error::Parse(_))
    ));
    let bad_rational = r#"{"dimension": 1, "holonomy": {"order": 1, "table": [[0]]},
        "rotation_parts": [[[1]]], "translation_parts": [["1/0"]]}"#;
    assert!(matches!(group_from_json(bad_rational), Err(Error::Parse(_))));
    let extra = r#"{"order": 1, "table": [[0]], "colour": "red"}"#;
    assert!(matches!(group_from_json(extra), Err(Error::Parse(_))));
    let nonorientable_declared = r#"{"dimension": 2, "holonomy": {"order": 2, "table": [[0, 1], [1, 0]]},
        "rotation_parts": [[[1, 0], [0, 1]], [[1, 0], [0, -1]]],
        "translation_parts": [["0", "0"], ["1/2", "0"]], "orientable": true}"#;
    assert!(matches!(
        group_from_json(nonorientable_declared),
        Err(Error::InvalidGroup(_))
    ));
}

fn big_rational() -> impl Strategy<Value = Rational> {
    (any::<i128>(), 1..i128::MAX).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn rationals_roundtrip_exactly(x in big_rational()) {
        let text = serde_json::to_string(&Rat(x.clone())).unwrap();
        let back: Rat = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.0, x);
    }

    #[test]
    fn shifted_g2_and_affine_maps_roundtrip(
        a in -40i64..40, b in -40i64..40, c in -40i64..40, den in 1i64..9,
        t in proptest::collection::vec((-1000i64..1000, 1i64..1000), 3),
    ) {
        // s_α must be (1/2, y, z) with any y, z for the cocycle to hold
        let shift = vec![rat(1, 2), rat(b, den), rat(c, den)];
        let g = Arc::new(g2_with_shift(shift).unwrap());
        roundtrip_group(&Group::Cryst(Arc::clone(&g)));
        // equivariance forces 2d₂, 2d₃ ∈ Z
        let translation = vec![rat(t[0].0, t[0].1), rat(t[1].0, 2), rat(t[2].0, 2)];
        let scale = 2 * a + 1;
        let linear = IntMatrix::diagonal(&[BigInt::from(scale), BigInt::from(1), BigInt::from(1)]);
        let h = GroupHom::affine(&g, &g, linear, translation, vec![0, 1]).unwrap();
        roundtrip_hom(&h);
    }

    #[test]
    fn sublattice_groups_roundtrip(rows in proptest::collection::vec(proptest::collection::vec(-9i64..9, 2), 2)) {
        if let Ok(l) = Sublattice::new(&IntMatrix::from_rows(&rows)) {
            roundtrip_group(&CrystGroup::lattice_group(l).into());
        }
    }
}
