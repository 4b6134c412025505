use std::collections::BTreeMap;
use std::sync::Arc;

use coinrt::averaging::{
    algebraic_mode_verify, average_abs_rt, average_index, average_lefschetz, average_rt_coincidence, average_rt_fixed,
    lift_levels, lift_maps, validate_cover, AveragingOptions, CoverSpec,
};
use coinrt::group_models::catalog::{example1_bundle, example2_bundle, g2_alpha, g2_bieberbach};
use coinrt::group_models::{CrystGroup, FiniteGroupTable, GroupElement, SubgroupSpec, Sublattice};
use coinrt::lattice_alg::{ints, rat, IntMatrix, QVector, Rational};
use coinrt::reidemeister::ClassKey;
use coinrt::trace_geometry::{AffineMapSpec, Region, RegionBox};
use coinrt::Error;

fn q(v: &[(i64, i64)]) -> QVector {
    v.iter().map(|&(a, b)| rat(a, b)).collect()
}

fn torus_map(t: &Arc<CrystGroup>, rows: &[Vec<i64>], d: QVector) -> AffineMapSpec {
    AffineMapSpec::new(t, t, IntMatrix::from_rows(rows), d, vec![0]).unwrap()
}

fn scaled(n: usize, k: i64) -> SubgroupSpec {
    SubgroupSpec::Lattice(Sublattice::scaled(n, k).unwrap())
}

fn key(coords: &[i64]) -> ClassKey {
    ClassKey {
        sector: 0,
        coords: ints(coords),
    }
}

fn circle(k: i64) -> AffineMapSpec {
    let t = Arc::new(CrystGroup::torus(1));
    torus_map(&t, &[vec![k]], q(&[(0, 1)]))
}

fn circle_pair() -> (AffineMapSpec, AffineMapSpec) {
    let f = circle(3);
    let t = Arc::clone(f.source());
    (f, torus_map(&t, &[vec![1]], q(&[(0, 1)])))
}

fn cover_for(f: &AffineMapSpec, g: &AffineMapSpec, gamma1: &SubgroupSpec, gamma2: &SubgroupSpec) -> CoverSpec {
    validate_cover(f.hom(), g.hom(), gamma1, gamma2).unwrap()
}

fn opts() -> AveragingOptions {
    AveragingOptions::default()
}

fn g2_pair() -> (AffineMapSpec, AffineMapSpec) {
    let g2 = Arc::new(g2_bieberbach());
    let d = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    let f = AffineMapSpec::new(&g2, &g2, d, q(&[(1, 3), (1, 2), (0, 1)]), vec![0, 1]).unwrap();
    let g = AffineMapSpec::identity(&g2);
    (f, g)
}

#[test]
fn circle_coincidence_averaging() {
    let (f, g) = circle_pair();
    let cover = cover_for(&f, &g, &scaled(1, 2), &scaled(1, 2));
    assert_eq!((cover.index1(), cover.index2()), (2, 2));

    let catalog = lift_maps(&f, &g, &cover).unwrap();
    let lifts: Vec<(IntMatrix, QVector)> = catalog
        .lifts
        .iter()
        .map(|l| (l.map.linear().clone(), l.map.translation().clone()))
        .collect();
    assert_eq!(
        lifts,
        vec![
            (IntMatrix::from_rows(&[vec![3]]), q(&[(0, 1)])),
            (IntMatrix::from_rows(&[vec![3]]), q(&[(1, 1)]))
        ]
    );

    let report = average_rt_coincidence(&f, &g, &cover, &opts()).unwrap();
    let lhs = report.lhs.clone().unwrap();
    assert_eq!(lhs.to_string(), "-[0] - [1]");
    let pushed: Vec<String> = report.summands.iter().map(|s| s.pushed.to_string()).collect();
    assert_eq!(pushed, vec!["-2[0]", "-2[1]"]);
    // each lift meets ḡ twice on the double cover, in two classes
    assert!(report.summands.iter().all(|s| s.lifted.support_size() == 2));
    assert_eq!(report.raw_sum.to_string(), "-2[0] - 2[1]");
    assert_eq!(report.divisor, 2);
    assert_eq!(report.witness, vec![(key(&[0]), -2, -1), (key(&[1]), -2, -1)]);
    assert_eq!(report.rhs, lhs);
    assert_eq!(report.equal(), Some(true));
    assert!(report.passed());
    assert!(report.table().contains("-2[0] - 2[1]"));
    assert_eq!(report.to_json()["equal"], serde_json::json!(true));

    let l = average_lefschetz(&f, &g, &cover).unwrap();
    assert_eq!(l.lhs, -2);
    assert_eq!(l.per_coset, vec![(0, -2), (1, -2)]);
    assert_eq!(l.rhs, Rational::from_integer((-2).into()));
    assert!(l.equal());
}

#[test]
fn fixed_point_averaging() {
    let f = circle(-1);
    let report = average_rt_fixed(&f, &scaled(1, 2), &opts()).unwrap();
    assert_eq!(report.lhs.as_ref().unwrap().to_string(), "[0] + [1]");
    assert!(report.passed());

    let t2 = Arc::new(CrystGroup::torus(2));
    let hyperbolic = torus_map(&t2, &[vec![2, 1], vec![1, 1]], q(&[(1, 5), (2, 3)]));
    let report = average_rt_fixed(&hyperbolic, &scaled(2, 2), &opts()).unwrap();
    let lhs = report.lhs.as_ref().unwrap();
    assert_eq!((lhs.support_size(), lhs.augmentation()), (1, -1));
    assert_eq!(report.summands.len(), 4);
    assert_eq!(report.divisor, 4);
    assert!(report.passed());

    let t1 = Arc::clone(f.source());
    let constant = torus_map(&t1, &[vec![0]], q(&[(2, 7)]));
    for k in [1, 2, 3, 5] {
        let report = average_rt_fixed(&constant, &scaled(1, k), &opts()).unwrap();
        let lhs = report.lhs.as_ref().unwrap();
        assert_eq!((lhs.support_size(), lhs.augmentation()), (1, 1));
        assert!(report.passed());
    }

    // the fixed-point report is the coincidence report against the identity
    let id = AffineMapSpec::identity(&t2);
    let cover = cover_for(&hyperbolic, &id, &scaled(2, 2), &scaled(2, 2));
    let direct = average_rt_coincidence(&hyperbolic, &id, &cover, &opts()).unwrap();
    let fixed = average_rt_fixed(&hyperbolic, &scaled(2, 2), &opts()).unwrap();
    assert_eq!(direct.rhs, fixed.rhs);
    assert_eq!(direct.raw_sum, fixed.raw_sum);
    let pairs = |r: &coinrt::averaging::AveragingReport| -> Vec<_> {
        r.summands
            .iter()
            .map(|s| (s.lifted.clone(), s.pushed.clone()))
            .collect()
    };
    assert_eq!(pairs(&direct), pairs(&fixed));
}

#[test]
fn torus_and_g2_averaging() {
    let t2 = Arc::new(CrystGroup::torus(2));
    let rot = torus_map(&t2, &[vec![0, -1], vec![1, 0]], q(&[(0, 1), (0, 1)]));
    let id = AffineMapSpec::identity(&t2);
    let cover = cover_for(&rot, &id, &scaled(2, 2), &scaled(2, 2));
    let report = average_rt_coincidence(&rot, &id, &cover, &opts()).unwrap();
    let lhs = report.lhs.as_ref().unwrap();
    assert_eq!(lhs.coefficients().values().copied().collect::<Vec<_>>(), vec![1, 1]);
    assert!(report.passed());
    assert!(average_lefschetz(&rot, &id, &cover).unwrap().equal());

    // trivial covers: one summand, equal to the trace itself
    let cover = cover_for(&rot, &id, &scaled(2, 1), &scaled(2, 1));
    let report = average_rt_coincidence(&rot, &id, &cover, &opts()).unwrap();
    assert_eq!(report.summands.len(), 1);
    assert_eq!(&report.summands[0].pushed, report.lhs.as_ref().unwrap());

    let (f, g) = g2_pair();
    for k in [1, 2] {
        let cover = cover_for(&f, &g, &scaled(3, k), &scaled(3, k));
        assert_eq!(cover.index2(), 2 * (k as usize).pow(3));
        let report = average_rt_coincidence(&f, &g, &cover, &opts()).unwrap();
        assert!(report.passed(), "{}", report.table());
        assert_eq!(report.rhs.augmentation(), -4);
        let l = average_lefschetz(&f, &g, &cover).unwrap();
        assert!(l.equal());
    }
}

#[test]
fn section_and_representative_independence() {
    let (f, g) = circle_pair();
    let (gf, gg) = g2_pair();
    let cases = [
        (f.clone(), g.clone(), scaled(1, 2)),
        (gf, gg, scaled(3, 2)),
        (circle(-1), AffineMapSpec::identity(f.source()), scaled(1, 3)),
    ];
    for (f, g, gamma) in cases {
        let cover = cover_for(&f, &g, &gamma, &gamma);
        let base = average_rt_coincidence(&f, &g, &cover, &opts()).unwrap();
        let target = cover.phi().target().clone();
        let gens = cover.side2().sub.group().generators();
        for beta_bar in 0..cover.index2() {
            for gamma in &gens {
                let beta = target.mul(
                    &cover.side2().sub.include(gamma),
                    &cover.coset_representatives()[beta_bar],
                );
                let moved = cover.with_representative(beta_bar, beta).unwrap();
                let report = average_rt_coincidence(&f, &g, &moved, &opts()).unwrap();
                assert_eq!(report.rhs, base.rhs);
                assert!(report.passed());
            }
        }
        for seed in 0..5 {
            let shuffled = AveragingOptions {
                shuffle_representatives: Some(seed),
                sabotage: false,
            };
            let report = average_rt_coincidence(&f, &g, &cover, &shuffled).unwrap();
            assert_eq!(report.rhs, base.rhs);
            assert_eq!(report.raw_sum, base.raw_sum);
        }
    }
}

#[test]
fn wrong_coset_representative_is_rejected() {
    let (f, g) = circle_pair();
    let cover = cover_for(&f, &g, &scaled(1, 2), &scaled(1, 2));
    let t = f.source();
    let err = cover.with_representative(0, GroupElement::Cryst(t.translation(ints(&[3]))));
    assert!(matches!(err, Err(Error::Containment(_))));
}

#[test]
fn sabotage_is_detected() {
    let (f, g) = circle_pair();
    let cover = cover_for(&f, &g, &scaled(1, 2), &scaled(1, 2));
    let sabotaged = AveragingOptions {
        shuffle_representatives: None,
        sabotage: true,
    };
    let report = average_rt_coincidence(&f, &g, &cover, &sabotaged).unwrap();
    assert_eq!(report.equal(), Some(false));
    assert!(!report.passed());
    assert_eq!(report.diff(), vec![("[0]".to_string(), -1, 1)]);
}

#[test]
fn cover_containment_is_checked() {
    let (f, g) = circle_pair();
    let err = validate_cover(f.hom(), g.hom(), &scaled(1, 2), &scaled(1, 4)).unwrap_err();
    assert!(matches!(err, Error::Containment(_)));
    let e1 = example1_bundle();
    let cover = validate_cover(&e1.phi, &e1.psi, &e1.gamma1, &e1.gamma2).unwrap();
    assert_eq!((cover.index1(), cover.index2()), (2, 2));
    assert!(!cover.is_geometric());
}

#[test]
fn index_averaging() {
    let f = circle(-1);
    let t = Arc::clone(f.source());
    let gamma = scaled(1, 2);
    let full = average_index(&f, &Region::full(&t).unwrap(), &gamma).unwrap();
    assert_eq!((full.lhs, full.rhs.clone()), (2, Rational::from_integer(2.into())));
    assert!(full.equal());

    let around_zero = Region::new(
        &t,
        vec![
            RegionBox::new(q(&[(0, 1)]), q(&[(1, 4)])).unwrap(),
            RegionBox::new(q(&[(3, 4)]), q(&[(1, 1)])).unwrap(),
        ],
    )
    .unwrap();
    let one = average_index(&f, &around_zero, &gamma).unwrap();
    assert_eq!(one.lhs, 1);
    assert!(one.equal());

    let empty = average_index(&f, &Region::empty(&t).unwrap(), &gamma).unwrap();
    assert_eq!((empty.lhs, empty.rhs), (0, Rational::from_integer(0.into())));

    // boundary fixed points are refused
    let edge = Region::new(&t, vec![RegionBox::new(q(&[(0, 1)]), q(&[(1, 4)])).unwrap()]).unwrap();
    assert!(matches!(average_index(&f, &edge, &gamma), Err(Error::Boundary(_))));
}

#[test]
fn index_averaging_on_g2() {
    let g2 = Arc::new(g2_bieberbach());
    let d = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    let f = AffineMapSpec::new(&g2, &g2, d, q(&[(1, 3), (1, 2), (0, 1)]), vec![0, 1]).unwrap();
    let boxes = [((1, 7), (5, 7)), ((1, 11), (6, 11)), ((2, 13), (12, 13))];
    for &(lo, hi) in &boxes {
        let region = Region::new(&g2, vec![RegionBox::new(q(&[lo; 3]), q(&[hi; 3])).unwrap()]).unwrap();
        for k in [1, 2] {
            let avg = average_index(&f, &region, &scaled(3, k)).unwrap();
            assert!(avg.equal(), "{avg:?}");
        }
    }
}

fn single_table(k: ClassKey, v: i64) -> BTreeMap<ClassKey, i64> {
    BTreeMap::from([(k, v)])
}

#[test]
fn example1_algebraic_mode() {
    let e1 = example1_bundle();
    let cover = validate_cover(&e1.phi, &e1.psi, &e1.gamma1, &e1.gamma2).unwrap();
    let levels = lift_levels(&cover).unwrap();
    assert_eq!(levels.len(), 2);
    for level in &levels {
        assert_eq!(level.top.len(), Some(1));
        assert_eq!(level.middle.len(), Some(1));
    }
    let base = coinrt::reidemeister::ReidemeisterSet::new(&e1.phi, &e1.psi).unwrap();
    let one = base.class_of(&base.target().identity());
    for k in -3..=3 {
        let tables: Vec<_> = levels
            .iter()
            .map(|l| single_table(l.top.class_of(&l.top.target().identity()), k))
            .collect();
        let lhs = single_table(one.clone(), k);
        let report = algebraic_mode_verify(&cover, &tables, Some(&lhs), &opts()).unwrap();
        assert_eq!(report.equal(), Some(true), "k = {k}");
        assert!(report.passed());
        assert_eq!(report.rhs.coefficient(&one), k);
        assert_eq!(report.rhs.support_size(), usize::from(k != 0));
        let without = algebraic_mode_verify(&cover, &tables, None, &opts()).unwrap();
        assert_eq!(without.equal(), None);
        assert_eq!(without.rhs, report.rhs);
    }
}

#[test]
fn example2_algebraic_mode() {
    let e2 = example2_bundle();
    let cover = validate_cover(&e2.phi, &e2.psi, &e2.gamma1, &e2.gamma2).unwrap();
    assert_eq!((cover.index1(), cover.index2()), (2, 2));
    let levels = lift_levels(&cover).unwrap();
    let g2 = cover.phi().target().as_cryst().unwrap().clone();
    let target = cover.phi().target().clone();
    let alpha = GroupElement::Cryst(g2_alpha(&g2));
    assert_eq!(cover.coset_representatives()[1], alpha);
    let base = Arc::new(coinrt::reidemeister::ReidemeisterSet::new(cover.phi(), cover.psi()).unwrap());
    assert!(!base.is_finite());

    // indices of (f, g) on a handful of classes γ and γα
    let sample: Vec<(GroupElement, i64)> = vec![
        (GroupElement::Cryst(g2.translation(ints(&[0, 0, 0]))), 1),
        (GroupElement::Cryst(g2.translation(ints(&[1, -2, 0]))), -3),
        (GroupElement::Cryst(g2.translation(ints(&[0, 0, 0]))), 0),
        (
            target.mul(&GroupElement::Cryst(g2.translation(ints(&[0, 1, 1]))), &alpha),
            2,
        ),
        (alpha.clone(), -1),
    ];
    let mut lhs = BTreeMap::new();
    let mut tables = vec![BTreeMap::new(), BTreeMap::new()];
    for (x, m) in &sample {
        if *m == 0 {
            continue;
        }
        lhs.insert(base.class_of(x), *m);
        let beta_bar = cover.side2().quotient.project(x);
        let gamma = target.mul(x, &target.inv(&cover.coset_representatives()[beta_bar]));
        let gamma = cover.side2().sub.pull(&gamma).unwrap();
        // the double cover meets every lifted class twice as often
        tables[beta_bar].insert(levels[beta_bar].top.class_of(&gamma), 2 * m);
    }
    let report = algebraic_mode_verify(&cover, &tables, Some(&lhs), &opts()).unwrap();
    assert_eq!(report.equal(), Some(true));
    assert!(report.passed());
    // the two sums: translations from the identity coset, γα from the α coset
    for s in &report.summands {
        for (k, _) in s.pushed.terms() {
            let x = base.representative(k).unwrap();
            assert_eq!(x.as_cryst().unwrap().holonomy, s.beta_bar);
        }
        let mut lifted: Vec<i64> = s.lifted.terms().map(|(_, c)| c).collect();
        let mut pushed: Vec<i64> = s.pushed.terms().map(|(_, c)| c).collect();
        lifted.sort();
        pushed.sort();
        assert_eq!(lifted, pushed);
    }

    // odd lifted indices leave a remainder
    let mut odd = tables.clone();
    odd[0].insert(levels[0].top.class_of(&levels[0].top.target().identity()), 1);
    assert!(matches!(
        algebraic_mode_verify(&cover, &odd, None, &opts()),
        Err(Error::DivisionRemainder { divisor: 2, .. })
    ));
}

#[test]
fn index_tables_are_validated() {
    let e1 = example1_bundle();
    let cover = validate_cover(&e1.phi, &e1.psi, &e1.gamma1, &e1.gamma2).unwrap();
    let bogus = single_table(key(&[7]), 1);
    let err = algebraic_mode_verify(&cover, &[bogus.clone(), bogus], None, &opts()).unwrap_err();
    assert!(matches!(err, Error::IndexTable(_)));
    let err = algebraic_mode_verify(&cover, &[], None, &opts()).unwrap_err();
    assert!(matches!(err, Error::IndexTable(_)));
    let zeros = vec![BTreeMap::new(), BTreeMap::new()];
    let report = algebraic_mode_verify(&cover, &zeros, Some(&BTreeMap::new()), &opts()).unwrap();
    assert!(report.rhs.is_zero() && report.passed());
}

#[test]
fn absolute_trace_averaging_on_orientable_instances() {
    let (f, g) = circle_pair();
    let cover = cover_for(&f, &g, &scaled(1, 2), &scaled(1, 2));
    let report = average_abs_rt(&f, &g, &cover, &opts()).unwrap();
    assert_eq!(report.lhs.clone().unwrap().to_string(), "[0] + [1]");
    assert_eq!(report.raw_sum.to_string(), "2[0] + 2[1]");
    assert!(report.passed());

    let t = Arc::new(CrystGroup::torus(2));
    let f = torus_map(&t, &[vec![2, 1], vec![1, 1]], q(&[(1, 3), (0, 1)]));
    let g = AffineMapSpec::identity(&t);
    let cover = cover_for(&f, &g, &scaled(2, 2), &scaled(2, 2));
    let report = average_abs_rt(&f, &g, &cover, &opts()).unwrap();
    assert_eq!(report.lhs.clone().unwrap().augmentation(), 1);
    assert!(report.passed());

    let (f, g) = g2_pair();
    let gamma = scaled(3, 2);
    let cover = cover_for(&f, &g, &gamma, &gamma);
    let direct = average_rt_coincidence(&f, &g, &cover, &opts()).unwrap();
    let report = average_abs_rt(&f, &g, &cover, &opts()).unwrap();
    assert!(report.passed());
    assert_eq!(report.rhs, direct.rhs.abs());
}

#[test]
fn absolute_trace_averaging_rejects_nonorientable_manifolds() {
    let klein = Arc::new(
        CrystGroup::new(
            Sublattice::full(2),
            FiniteGroupTable::cyclic(2),
            vec![IntMatrix::identity(2), IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]])],
            vec![q(&[(0, 1), (0, 1)]), q(&[(1, 2), (0, 1)])],
        )
        .unwrap(),
    );
    let f = AffineMapSpec::new(
        &klein,
        &klein,
        IntMatrix::scalar(2, 3),
        q(&[(0, 1), (0, 1)]),
        vec![0, 1],
    )
    .unwrap();
    let g = AffineMapSpec::identity(&klein);
    let gamma = scaled(2, 2);
    let result = validate_cover(f.hom(), g.hom(), &gamma, &gamma).and_then(|c| average_abs_rt(&f, &g, &c, &opts()));
    assert!(matches!(result, Err(Error::Nonorientable(_))), "{result:?}");
}
