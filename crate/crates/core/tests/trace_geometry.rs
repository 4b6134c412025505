use std::collections::BTreeMap;
use std::sync::Arc;

use coinrt::group_models::catalog::g2_bieberbach;
use coinrt::group_models::{CrystGroup, FiniteGroupTable, Group, GroupElement, Sublattice};
use coinrt::lattice_alg::{ints, rat, IntMatrix, QVector};
use coinrt::reidemeister::{rho_between, ClassKey};
use coinrt::trace_geometry::{
    coincidence_classes, lefschetz_number, local_index, local_trace, nielsen_number, oracle_coincidences,
    reidemeister_trace, AffineMapSpec, Region, RegionBox,
};
use coinrt::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(v: &[(i64, i64)]) -> QVector {
    v.iter().map(|&(a, b)| rat(a, b)).collect()
}

fn torus_map(t: &Arc<CrystGroup>, rows: &[Vec<i64>], d: QVector) -> AffineMapSpec {
    AffineMapSpec::new(t, t, IntMatrix::from_rows(rows), d, vec![0]).unwrap()
}

fn circle_pair() -> (AffineMapSpec, AffineMapSpec) {
    let t = Arc::new(CrystGroup::torus(1));
    (
        torus_map(&t, &[vec![3]], q(&[(0, 1)])),
        torus_map(&t, &[vec![1]], q(&[(0, 1)])),
    )
}

fn rotation_pair() -> (AffineMapSpec, AffineMapSpec) {
    let t = Arc::new(CrystGroup::torus(2));
    (
        torus_map(&t, &[vec![0, -1], vec![1, 0]], q(&[(0, 1), (0, 1)])),
        torus_map(&t, &[vec![1, 0], vec![0, 1]], q(&[(0, 1), (0, 1)])),
    )
}

fn g2_pair() -> (AffineMapSpec, AffineMapSpec) {
    let g2 = Arc::new(g2_bieberbach());
    let d = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    let f = AffineMapSpec::new(&g2, &g2, d, q(&[(1, 3), (1, 2), (0, 1)]), vec![0, 1]).unwrap();
    let g = AffineMapSpec::new(&g2, &g2, IntMatrix::identity(3), q(&[(0, 1); 3]), vec![0, 1]).unwrap();
    (f, g)
}

fn key(coords: &[i64]) -> ClassKey {
    ClassKey {
        sector: 0,
        coords: ints(coords),
    }
}

fn labeled(points: &[coinrt::trace_geometry::CoincidencePoint]) -> Vec<(QVector, ClassKey, i64)> {
    let mut v: Vec<_> = points
        .iter()
        .map(|p| (p.location.clone(), p.class.clone(), p.local_index))
        .collect();
    v.sort();
    v
}

#[test]
fn circle_example() {
    let (f, g) = circle_pair();
    let report = coincidence_classes(&f, &g).unwrap();
    let got: Vec<(ClassKey, QVector, i64)> = report
        .classes
        .iter()
        .map(|c| (c.class.clone(), c.points[0].location.clone(), c.index))
        .collect();
    assert_eq!(got, vec![(key(&[0]), q(&[(0, 1)]), -1), (key(&[1]), q(&[(1, 2)]), -1)]);
    let rt = reidemeister_trace(&f, &g).unwrap();
    assert_eq!(rt.coefficients(), &BTreeMap::from([(key(&[0]), -1), (key(&[1]), -1)]));
    assert_eq!(rt.to_string(), "-[0] - [1]");
    assert_eq!(lefschetz_number(&f, &g).unwrap(), -2);
    assert_eq!(nielsen_number(&f, &g).unwrap(), 2);
    assert_eq!(local_index(&f, &g, &q(&[(0, 1)])).unwrap(), -1);
    assert_eq!(
        labeled(&oracle_coincidences(&f, &g).unwrap()),
        vec![(q(&[(0, 1)]), key(&[0]), -1), (q(&[(1, 2)]), key(&[1]), -1)]
    );
}

#[test]
fn torus_rotation_example() {
    let (f, g) = rotation_pair();
    let report = coincidence_classes(&f, &g).unwrap();
    let mut pts: Vec<QVector> = report.points().into_iter().map(|p| p.location).collect();
    pts.sort();
    assert_eq!(pts, vec![q(&[(0, 1), (0, 1)]), q(&[(1, 2), (1, 2)])]);
    assert!(report.classes.iter().all(|c| c.index == 1));
    assert_eq!(lefschetz_number(&f, &g).unwrap(), 2);
    assert_eq!(nielsen_number(&f, &g).unwrap(), 2);
    assert_eq!(local_index(&f, &g, &q(&[(0, 1), (0, 1)])).unwrap(), 1);
    assert_eq!(
        labeled(&oracle_coincidences(&f, &g).unwrap()),
        labeled(&report.points())
    );
}

#[test]
fn unimodular_difference_gives_one_class() {
    let t = Arc::new(CrystGroup::torus(2));
    let f = torus_map(&t, &[vec![2, 1], vec![1, 2]], q(&[(1, 3), (0, 1)]));
    let g = torus_map(&t, &[vec![1, 0], vec![0, 1]], q(&[(0, 1), (0, 1)]));
    // E - D is singular for the identity, and unimodular for g2
    let g2 = torus_map(&t, &[vec![3, 1], vec![1, 3]], q(&[(0, 1), (0, 1)]));
    assert!(matches!(
        coincidence_classes(&f, &g),
        Err(Error::Degenerate { sector: 0 })
    ));
    assert_eq!(nielsen_number(&f, &g2).unwrap(), 1);
    assert_eq!(lefschetz_number(&f, &g2).unwrap(), 1);
}

#[test]
fn degenerate_and_nonorientable_pairs_are_rejected() {
    let (f, _) = circle_pair();
    assert!(matches!(reidemeister_trace(&f, &f), Err(Error::Degenerate { .. })));
    assert!(matches!(oracle_coincidences(&f, &f), Err(Error::Degenerate { .. })));

    let klein = Arc::new(
        CrystGroup::new(
            Sublattice::full(2),
            FiniteGroupTable::cyclic(2),
            vec![IntMatrix::identity(2), IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]])],
            vec![q(&[(0, 1), (0, 1)]), q(&[(1, 2), (0, 1)])],
        )
        .unwrap(),
    );
    assert!(!klein.is_orientable());
    let f = AffineMapSpec::new(
        &klein,
        &klein,
        IntMatrix::scalar(2, 3),
        q(&[(0, 1), (0, 1)]),
        vec![0, 1],
    )
    .unwrap();
    let g = AffineMapSpec::new(&klein, &klein, IntMatrix::identity(2), q(&[(0, 1), (0, 1)]), vec![0, 1]).unwrap();
    assert!(matches!(coincidence_classes(&f, &g), Err(Error::Nonorientable(_))));
}

#[test]
fn random_torus_pairs_match_oracle_and_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut tested = 0;
    while tested < 60 {
        let n = rng.gen_range(1..=3);
        let t = Arc::new(CrystGroup::torus(n));
        let mk = |rng: &mut ChaCha8Rng| -> AffineMapSpec {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let d: QVector = (0..n).map(|_| rat(rng.gen_range(0..6), rng.gen_range(1..=4))).collect();
            torus_map(&t, &rows, d)
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let det = g.linear().try_sub(f.linear()).unwrap().det().unwrap();
        if det == 0.into() {
            assert!(matches!(reidemeister_trace(&f, &g), Err(Error::Degenerate { .. })));
            continue;
        }
        let report = coincidence_classes(&f, &g).unwrap();
        let points = report.points();
        assert_eq!(num_bigint::BigInt::from(points.len()), det.magnitude().clone().into());
        assert!(report.classes.iter().all(|c| c.points.len() == 1));
        assert_eq!(labeled(&oracle_coincidences(&f, &g).unwrap()), labeled(&points));
        let l = lefschetz_number(&f, &g).unwrap();
        assert_eq!(num_bigint::BigInt::from(l), det);
        for p in &points {
            assert_eq!(local_index(&f, &g, &p.location).unwrap(), p.local_index);
        }
        tested += 1;
    }
}

#[test]
fn g2_pair_matches_oracle() {
    let (f, g) = g2_pair();
    let report = coincidence_classes(&f, &g).unwrap();
    assert_eq!(
        labeled(&oracle_coincidences(&f, &g).unwrap()),
        labeled(&report.points())
    );
    let rt = reidemeister_trace(&f, &g).unwrap();
    // half the sum of det(I - A_h D) over the holonomy: (2 - 10) / 2
    assert_eq!(rt.augmentation(), -4);
    assert_eq!(lefschetz_number(&f, &g).unwrap(), -4);
}

#[test]
fn class_index_independent_of_representative() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (f, g) in [g2_pair(), circle_pair(), rotation_pair()] {
        let report = coincidence_classes(&f, &g).unwrap();
        let src: Group = f.hom().source().clone();
        let tgt: Group = f.hom().target().clone();
        for c in &report.classes {
            let beta = GroupElement::Cryst(c.points[0].beta.clone());
            for _ in 0..10 {
                let gamma = src.random_element(&mut rng, 5);
                let b2 = tgt.mul3(&g.hom().eval(&gamma), &beta, &tgt.inv(&f.hom().eval(&gamma)));
                assert_eq!(report.set.class_of(&b2), c.class);
                let b2 = b2.as_cryst().unwrap();
                let shifted = f.with_lift(b2).unwrap();
                // βf̃ and g̃ meet at a lift of the same point, with the same index
                let x = {
                    let k = g.linear().try_sub(shifted.linear()).unwrap();
                    let rhs: QVector = shifted
                        .translation()
                        .iter()
                        .zip(g.translation())
                        .map(|(a, b)| a - b)
                        .collect();
                    k.rational_inverse().unwrap().mul_qvec(&rhs)
                };
                assert_eq!(local_index(&f, &g, &x).unwrap(), c.index);
                assert_eq!(
                    coinrt::trace_geometry::canonical_point(f.source(), &x),
                    c.points[0].location
                );
            }
        }
    }
}

#[test]
fn lift_change_covariance() {
    for (f, g) in [g2_pair(), circle_pair(), rotation_pair()] {
        let rt = reidemeister_trace(&f, &g).unwrap();
        for beta in f.target().generators() {
            let shifted = f.with_lift(&beta).unwrap();
            let rt_beta = reidemeister_trace(&shifted, &g).unwrap();
            let b = GroupElement::Cryst(beta.clone());
            let pushed = rt_beta
                .push_forward(Arc::clone(rt.set()), |k| rho_between(rt_beta.set(), rt.set(), &b, k))
                .unwrap();
            assert_eq!(pushed, rt);
        }
    }
}

fn box1(lo: (i64, i64), hi: (i64, i64)) -> RegionBox {
    RegionBox::new(q(&[lo]), q(&[hi])).unwrap()
}

#[test]
fn local_trace_examples_and_axioms() {
    let (f, g) = circle_pair();
    let base = Arc::clone(f.source());
    let rt = reidemeister_trace(&f, &g).unwrap();
    assert_eq!(local_trace(&f, &g, &Region::full(&base).unwrap()).unwrap(), rt);
    assert!(local_trace(&f, &g, &Region::empty(&base).unwrap()).unwrap().is_zero());
    let u = Region::new(&base, vec![box1((1, 10), (9, 10))]).unwrap();
    let lt = local_trace(&f, &g, &u).unwrap();
    assert_eq!(lt.coefficients(), &BTreeMap::from([(key(&[1]), -1)]));

    // boundary coincidence demands a perturbation
    let bad = Region::new(&base, vec![box1((1, 2), (3, 4))]).unwrap();
    assert!(matches!(local_trace(&f, &g, &bad), Err(Error::Boundary(_))));
    let wrap = Region::new(&base, vec![box1((3, 4), (1, 1))]).unwrap();
    assert!(matches!(local_trace(&f, &g, &wrap), Err(Error::Boundary(_))));

    // additivity
    let u1 = Region::new(&base, vec![box1((1, 10), (3, 10))]).unwrap();
    let u2 = Region::new(&base, vec![box1((2, 5), (7, 10))]).unwrap();
    let both = u1.union(&u2).unwrap();
    assert_eq!(
        local_trace(&f, &g, &both).unwrap(),
        local_trace(&f, &g, &u1)
            .unwrap()
            .plus(&local_trace(&f, &g, &u2).unwrap())
    );

    // lift invariance of the augmentation, and every nonzero class has an
    // oracle point in U
    for (f, g) in [circle_pair(), g2_pair()] {
        let base = Arc::clone(f.source());
        let n = base.dim();
        let u = Region::new(
            &base,
            vec![RegionBox::new(vec![rat(1, 7); n], vec![rat(5, 7); n]).unwrap()],
        )
        .unwrap();
        let lt = local_trace(&f, &g, &u).unwrap();
        for beta in f.target().generators() {
            let shifted = f.with_lift(&beta).unwrap();
            assert_eq!(local_trace(&shifted, &g, &u).unwrap().augmentation(), lt.augmentation());
        }
        let oracle = oracle_coincidences(&f, &g).unwrap();
        for (k, _) in lt.terms() {
            assert!(oracle.iter().any(|p| &p.class == k && u.contains(&p.location).unwrap()));
        }
    }
}

#[test]
fn normalization() {
    // constant f and the identity g meet once, transversally, at d
    let t = Arc::new(CrystGroup::torus(2));
    let f = torus_map(&t, &[vec![0, 0], vec![0, 0]], q(&[(1, 3), (2, 5)]));
    let g = torus_map(&t, &[vec![1, 0], vec![0, 1]], q(&[(0, 1), (0, 1)]));
    let small = RegionBox::new(q(&[(1, 4), (3, 10)]), q(&[(2, 5), (1, 2)])).unwrap();
    let u = Region::new(&t, vec![small]).unwrap();
    let lt = local_trace(&f, &g, &u).unwrap();
    assert_eq!(lt.augmentation(), 1);
    assert_eq!(lefschetz_number(&f, &g).unwrap(), 1);
}

#[test]
fn equivariance_is_checked() {
    let g2 = Arc::new(g2_bieberbach());
    let along_axis = AffineMapSpec::new(
        &g2,
        &g2,
        IntMatrix::identity(3),
        q(&[(1, 4), (0, 1), (0, 1)]),
        vec![0, 1],
    );
    assert!(along_axis.is_ok());
    let err = AffineMapSpec::new(
        &g2,
        &g2,
        IntMatrix::identity(3),
        q(&[(0, 1), (1, 4), (0, 1)]),
        vec![0, 1],
    );
    assert!(matches!(err, Err(Error::InvalidHom(_))));
}
