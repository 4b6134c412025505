use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use coinrt::group_models::catalog::{example1_bundle, example2_bundle, g2_bieberbach};
use coinrt::group_models::{
    CoverSide, CrystGroup, FiniteGroupTable, Group, GroupElement, GroupHom, HomMap, SubgroupSpec, Sublattice,
};
use coinrt::lattice_alg::{ints, rat, IntMatrix};
use coinrt::reidemeister::{
    check_exactness, coin_subgroup, fiber_size, i_hat, orbit_stabilizer_identity, rho, rho_between,
    twisted_classes_cryst, twisted_classes_finite, twisted_classes_lattice, u_hat, ClassKey, CoverLevels,
    ReidemeisterSet,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn key(sector: usize, coords: &[i64]) -> ClassKey {
    ClassKey {
        sector,
        coords: ints(coords),
    }
}

fn circle_map(t: &Arc<CrystGroup>, k: i64) -> GroupHom {
    GroupHom::affine(t, t, IntMatrix::scalar(1, k), vec![rat(0, 1)], vec![0]).unwrap()
}

fn circle_levels(beta: i64) -> CoverLevels {
    let t = Arc::new(CrystGroup::torus(1));
    let g: Group = Group::Cryst(Arc::clone(&t));
    let side = CoverSide::new(&g, &SubgroupSpec::Lattice(Sublattice::scaled(1, 2).unwrap())).unwrap();
    let b = GroupElement::Cryst(t.translation(ints(&[beta])));
    CoverLevels::new(&circle_map(&t, 3), &circle_map(&t, 1), &side, &side, &b).unwrap()
}

fn bundle_levels(b: &coinrt::group_models::HomBundle, beta: &GroupElement) -> CoverLevels {
    let s1 = CoverSide::new(b.phi.source(), &b.gamma1).unwrap();
    let s2 = CoverSide::new(b.phi.target(), &b.gamma2).unwrap();
    CoverLevels::new(&b.phi, &b.psi, &s1, &s2, beta).unwrap()
}

fn table_hom(s: &Arc<FiniteGroupTable>, t: &Arc<FiniteGroupTable>, images: Vec<usize>) -> GroupHom {
    GroupHom::new(
        Group::Finite(Arc::clone(s)),
        Group::Finite(Arc::clone(t)),
        HomMap::Table(images),
    )
    .unwrap()
}

#[test]
fn finite_examples() {
    for k in [1, 2, 5, 6] {
        let g: Group = FiniteGroupTable::cyclic(k).into();
        let id = GroupHom::identity(&g);
        let r = twisted_classes_finite(&id, &id).unwrap();
        assert_eq!(r.len(), Some(k));
        assert!(r.class_sizes().unwrap().iter().all(|&s| s == 1));
    }
    let z2 = Arc::new(FiniteGroupTable::cyclic(2));
    let iso = table_hom(&z2, &z2, vec![0, 1]);
    let triv = table_hom(&z2, &z2, vec![0, 0]);
    let r = twisted_classes_finite(&iso, &triv).unwrap();
    assert_eq!(r.len(), Some(1));
    assert_eq!(r.class_sizes().unwrap(), &[2]);
    let r = twisted_classes_finite(&iso, &iso).unwrap();
    assert_eq!(r.classes().unwrap(), vec![key(0, &[0]), key(0, &[1])]);
}

#[test]
fn lattice_examples() {
    let r = twisted_classes_lattice(&IntMatrix::from_rows(&[vec![3]]), &IntMatrix::identity(1)).unwrap();
    assert_eq!(r.classes().unwrap(), vec![key(0, &[0]), key(0, &[1])]);
    let f = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
    let r = twisted_classes_lattice(&f, &f).unwrap();
    assert!(!r.is_finite());
    assert_eq!(r.sector_invariants(0), Some((vec![], 2)));
    let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
    let r = twisted_classes_lattice(&rot, &IntMatrix::identity(2)).unwrap();
    assert_eq!(r.len(), Some(2));
}

#[test]
fn lattice_class_count_is_abs_det() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 40 {
        let n = rng.gen_range(1..=3);
        let mk = |rng: &mut ChaCha8Rng| {
            IntMatrix::from_rows(
                &(0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
                    .collect::<Vec<_>>(),
            )
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let det = g.try_sub(&f).unwrap().det().unwrap();
        let r = twisted_classes_lattice(&f, &g).unwrap();
        if det == BigInt::from(0) {
            assert!(!r.is_finite());
            continue;
        }
        assert_eq!(BigInt::from(r.len().unwrap()), det.magnitude().clone().into());
        done += 1;
    }
}

#[test]
fn example2_classes_are_singletons() {
    let b = example2_bundle();
    let r = twisted_classes_cryst(&b.phi, &b.psi).unwrap();
    assert!(!r.is_finite());
    assert!(r.classes().is_err());
    let g = b.phi.target();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen: HashMap<ClassKey, GroupElement> = HashMap::new();
    for _ in 0..500 {
        let x = g.random_element(&mut rng, 4);
        let k = r.class_of(&x);
        assert_eq!(r.representative(&k), Some(x.clone()));
        if let Some(prev) = seen.insert(k, x.clone()) {
            assert_eq!(prev, x);
        }
    }
}

#[test]
fn trivial_holonomy_target_matches_lattice_engine() {
    let t = Arc::new(CrystGroup::torus(2));
    let f = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
    let phi = GroupHom::affine(&t, &t, f.clone(), vec![rat(1, 2), rat(0, 1)], vec![0]).unwrap();
    let psi = GroupHom::identity(&Group::Cryst(Arc::clone(&t)));
    let a = twisted_classes_cryst(&phi, &psi).unwrap();
    let b = twisted_classes_lattice(&f, &IntMatrix::identity(2)).unwrap();
    assert_eq!(a.len(), b.len());
    assert_eq!(a.len(), Some(2));
}

/// The G₂ pair `f(x) = D x + d`, `g = id`.
fn g2_pair() -> (GroupHom, GroupHom) {
    let g2 = Arc::new(g2_bieberbach());
    let d = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    let phi = GroupHom::affine(&g2, &g2, d, vec![rat(1, 3), rat(1, 2), rat(0, 1)], vec![0, 1]).unwrap();
    let psi = GroupHom::identity(&Group::Cryst(g2));
    (phi, psi)
}

/// Orbits of `x -> γ x f(γ)^-1` on `G₂ / N Z³`, computed with affine maps
/// scaled by 6 so that every translation is integral.
fn g2_quotient_orbits(n: i64) -> usize {
    type Aff = ([i64; 3], [i64; 3]); // diagonal signs, 6 * translation
    let compose = |a: &Aff, b: &Aff| -> Aff {
        let mut s = [0; 3];
        let mut t = [0; 3];
        for i in 0..3 {
            s[i] = a.0[i] * b.0[i];
            t[i] = a.0[i] * b.1[i] + a.1[i];
        }
        (s, t)
    };
    let inverse = |a: &Aff| -> Aff { (a.0, [-a.0[0] * a.1[0], -a.0[1] * a.1[1], -a.0[2] * a.1[2]]) };
    // f γ f^-1 for f = D x + d: linear part unchanged, translation D t + (I - A) d
    let dmat = [[3, 0, 0], [0, 1, 1], [0, 1, 2]];
    let d6 = [2, 3, 0];
    let image = |a: &Aff| -> Aff {
        let mut t = [0; 3];
        for i in 0..3 {
            t[i] = (0..3).map(|j| dmat[i][j] * a.1[j]).sum::<i64>() + d6[i] - a.0[i] * d6[i];
        }
        (a.0, t)
    };
    let modulus = 6 * n;
    let norm = |a: &Aff| -> Aff {
        (
            a.0,
            [
                a.1[0].rem_euclid(modulus),
                a.1[1].rem_euclid(modulus),
                a.1[2].rem_euclid(modulus),
            ],
        )
    };
    let one = [1, 1, 1];
    let alpha = [1, -1, -1];
    let gens: Vec<Aff> = vec![(one, [6, 0, 0]), (one, [0, 6, 0]), (one, [0, 0, 6]), (alpha, [3, 0, 0])];
    let mut elements = Vec::new();
    for (s, shift) in [(one, 0), (alpha, 3)] {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    elements.push(norm(&(s, [6 * a + shift, 6 * b, 6 * c])));
                }
            }
        }
    }
    let mut seen: BTreeSet<Aff> = BTreeSet::new();
    let mut orbits = 0;
    for x in &elements {
        if seen.contains(x) {
            continue;
        }
        orbits += 1;
        let mut stack = vec![*x];
        seen.insert(*x);
        while let Some(y) = stack.pop() {
            for g in &gens {
                for h in [*g, inverse(g)] {
                    let z = norm(&compose(&compose(&h, &y), &inverse(&image(&h))));
                    if seen.insert(z) {
                        stack.push(z);
                    }
                }
            }
        }
    }
    orbits
}

#[test]
fn g2_affine_pair_matches_quotient_brute_force() {
    let (phi, psi) = g2_pair();
    let r = twisted_classes_cryst(&phi, &psi).unwrap();
    assert!(r.is_finite());
    let a = g2_quotient_orbits(10);
    let b = g2_quotient_orbits(20);
    assert_eq!(a, b);
    assert_eq!(r.len(), Some(a));
}

#[test]
fn class_of_is_constant_on_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (phi, psi) = g2_pair();
    let t = Arc::new(CrystGroup::torus(1));
    let mut cases: Vec<(GroupHom, GroupHom)> = vec![
        (phi, psi),
        (circle_map(&t, 3), circle_map(&t, 1)),
        (example1_bundle().phi, example1_bundle().psi),
        (example2_bundle().phi, example2_bundle().psi),
    ];
    let s3 = Arc::new(FiniteGroupTable::symmetric(3));
    let z6 = Arc::new(FiniteGroupTable::cyclic(6));
    let homs = s3.all_homs(&z6);
    cases.push((
        table_hom(&s3, &z6, homs[0].clone()),
        table_hom(&s3, &z6, homs[homs.len() - 1].clone()),
    ));
    for (phi, psi) in cases {
        let r = ReidemeisterSet::new(&phi, &psi).unwrap();
        let src = phi.source();
        let tgt = phi.target();
        for _ in 0..1000 {
            let x = tgt.random_element(&mut rng, 6);
            let g = src.random_element(&mut rng, 6);
            let y = tgt.mul3(&psi.eval(&g), &x, &tgt.inv(&phi.eval(&g)));
            assert_eq!(r.class_of(&x), r.class_of(&y));
        }
        if let Ok(classes) = r.classes() {
            for k in &classes {
                let x = r.representative(k).unwrap();
                assert_eq!(&r.class_of(&x), k);
            }
            if let Some(sizes) = r.class_sizes() {
                assert_eq!(sizes.iter().sum::<usize>(), tgt.order().unwrap());
            }
        }
    }
}

#[test]
fn coincidence_subgroups() {
    let s3: Group = FiniteGroupTable::symmetric(3).into();
    let id = GroupHom::identity(&s3);
    assert_eq!(coin_subgroup(&id, &id).unwrap().order(), Some(6));

    let b = example1_bundle();
    let levels = bundle_levels(&b, &b.phi.target().identity());
    assert!(coin_subgroup(&b.phi, &b.psi).unwrap().equals(&levels.side1.sub));
    let bar = coin_subgroup(&levels.phi_beta_parts.descended, &levels.psi_parts.descended).unwrap();
    assert!(bar.is_trivial());

    let t = Arc::new(CrystGroup::torus(1));
    assert!(coin_subgroup(&circle_map(&t, 3), &circle_map(&t, 1))
        .unwrap()
        .is_trivial());
    let c = coin_subgroup(&circle_map(&t, 2), &circle_map(&t, 2)).unwrap();
    assert_eq!(c.order(), None);
}

#[test]
fn rho_examples() {
    let levels = circle_levels(0);
    for k in levels.middle.classes().unwrap() {
        assert_eq!(rho(&levels, &k).unwrap(), k);
    }
    let levels = circle_levels(1);
    assert_eq!(rho(&levels, &key(0, &[0])).unwrap(), key(0, &[1]));
    assert_eq!(rho(&levels, &key(0, &[1])).unwrap(), key(0, &[0]));

    let b = example1_bundle();
    let beta = GroupElement::Finite(1);
    let levels = bundle_levels(&b, &beta);
    let only = levels.middle.classes().unwrap();
    assert_eq!(only.len(), 1);
    assert_eq!(
        rho(&levels, &only[0]).unwrap(),
        levels.base.class_of(&GroupElement::Finite(0))
    );
}

#[test]
fn i_hat_and_u_hat_examples() {
    let levels = circle_levels(0);
    let top = levels.top.classes().unwrap();
    assert_eq!(top.len(), 2);
    let reps: Vec<GroupElement> = top
        .iter()
        .map(|k| levels.side2.sub.include(&levels.top.representative(k).unwrap()))
        .collect();
    let t = levels.side2.ambient().as_cryst().unwrap().clone();
    assert_eq!(
        reps,
        vec![t.translation(ints(&[0])).into(), t.translation(ints(&[2])).into()]
    );
    for k in &top {
        assert_eq!(i_hat(&levels, k).unwrap(), key(0, &[0]));
    }
    assert_eq!(
        u_hat(&levels, &key(0, &[0])).unwrap(),
        levels.bottom.class_of(&GroupElement::Finite(0))
    );
    assert_eq!(
        u_hat(&levels, &key(0, &[1])).unwrap(),
        levels.bottom.class_of(&GroupElement::Finite(1))
    );
    assert_ne!(
        levels.bottom.class_of(&GroupElement::Finite(0)),
        levels.bottom.class_of(&GroupElement::Finite(1))
    );

    let b = example1_bundle();
    let levels = bundle_levels(&b, &GroupElement::Finite(0));
    let top = levels.top.classes().unwrap();
    assert_eq!(top.len(), 1);
    assert_eq!(
        i_hat(&levels, &top[0]).unwrap(),
        levels.middle.class_of(&GroupElement::Finite(0))
    );
    let mid = levels.middle.classes().unwrap();
    assert_eq!(
        u_hat(&levels, &mid[0]).unwrap(),
        levels.bottom.class_of(&GroupElement::Finite(levels.beta_bar))
    );
}

#[test]
fn exactness_and_fibers() {
    let levels = circle_levels(0);
    assert!(check_exactness(&levels, 3).unwrap().holds());
    let f = fiber_size(&levels, &levels.side2.sub.include(&levels.top.target().identity())).unwrap();
    assert_eq!((f.direct, f.formula()), (2, Some(2)));

    let b = example1_bundle();
    for beta in [0, 1] {
        let levels = bundle_levels(&b, &GroupElement::Finite(beta));
        let r = check_exactness(&levels, 2).unwrap();
        assert!(r.exhaustive && r.holds());
        let f = fiber_size(&levels, &GroupElement::Finite(0)).unwrap();
        assert_eq!((f.direct, f.formula()), (1, Some(1)));
    }

    let b = example2_bundle();
    let g2 = b.phi.target().as_cryst().unwrap().clone();
    let alpha: GroupElement = coinrt::group_models::catalog::g2_alpha(&g2).into();
    for beta in [b.phi.target().identity(), alpha] {
        let levels = bundle_levels(&b, &beta);
        let r = check_exactness(&levels, 2).unwrap();
        assert!(!r.exhaustive && r.holds(), "{r:?}");
        let gamma: GroupElement = g2.translation(ints(&[1, -2, 0])).into();
        let f = fiber_size(&levels, &gamma).unwrap();
        assert!(f.holds(), "{f:?}");
    }

    // Γ = full group: every fiber is a point
    let s3: Group = FiniteGroupTable::symmetric(3).into();
    let side = CoverSide::new(&s3, &SubgroupSpec::Elements((0..6).collect())).unwrap();
    let id = GroupHom::identity(&s3);
    let levels = CoverLevels::new(&id, &id, &side, &side, &GroupElement::Finite(0)).unwrap();
    for g in 0..6 {
        let f = fiber_size(&levels, &GroupElement::Finite(g)).unwrap();
        assert_eq!((f.direct, f.formula()), (1, Some(1)));
    }
}

#[test]
fn orbit_stabilizer_examples() {
    let z2 = Arc::new(FiniteGroupTable::cyclic(2));
    let id = table_hom(&z2, &z2, vec![0, 1]);
    let triv = table_hom(&z2, &z2, vec![0, 0]);
    let r = orbit_stabilizer_identity(&id, &id, 1).unwrap();
    assert_eq!((r.orbit, r.stabilizer), (1, 2));
    let r = orbit_stabilizer_identity(&id, &triv, 1).unwrap();
    assert_eq!((r.orbit, r.stabilizer), (2, 1));

    let z6 = Arc::new(FiniteGroupTable::cyclic(6));
    let homs = z6.all_homs(&z6);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let a = table_hom(&z6, &z6, homs[rng.gen_range(0..homs.len())].clone());
        let b = table_hom(&z6, &z6, homs[rng.gen_range(0..homs.len())].clone());
        for beta in 0..6 {
            assert!(orbit_stabilizer_identity(&a, &b, beta).unwrap().holds());
        }
    }
}

/// Random bundles of finite groups with normal subgroups carried into each other.
fn random_finite_bundles(seed: u64, count: usize) -> Vec<(GroupHom, GroupHom, CoverSide, CoverSide)> {
    let groups: Vec<Arc<FiniteGroupTable>> = vec![
        Arc::new(FiniteGroupTable::symmetric(3)),
        Arc::new(FiniteGroupTable::cyclic(6)),
        Arc::new(FiniteGroupTable::dihedral(4)),
        Arc::new(FiniteGroupTable::quaternion()),
        Arc::new(FiniteGroupTable::cyclic(4)),
        Arc::new(FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2),
            &FiniteGroupTable::cyclic(2),
        )),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let s = &groups[rng.gen_range(0..groups.len())];
        let t = &groups[rng.gen_range(0..groups.len())];
        let homs = s.all_homs(t);
        let phi = homs[rng.gen_range(0..homs.len())].clone();
        let psi = homs[rng.gen_range(0..homs.len())].clone();
        let n1 = s.normal_subgroups();
        let n2 = t.normal_subgroups();
        let g1 = n1[rng.gen_range(0..n1.len())].clone();
        let g2 = n2[rng.gen_range(0..n2.len())].clone();
        if !g1.iter().all(|&x| g2.contains(&phi[x]) && g2.contains(&psi[x])) {
            continue;
        }
        let sg: Group = Group::Finite(Arc::clone(s));
        let tg: Group = Group::Finite(Arc::clone(t));
        out.push((
            table_hom(s, t, phi),
            table_hom(s, t, psi),
            CoverSide::new(&sg, &SubgroupSpec::Elements(g1)).unwrap(),
            CoverSide::new(&tg, &SubgroupSpec::Elements(g2)).unwrap(),
        ));
    }
    out
}

#[test]
fn random_finite_bundles_satisfy_identities() {
    for (phi, psi, s1, s2) in random_finite_bundles(2024, 100) {
        let t = phi.target();
        for beta in t.elements().unwrap() {
            let levels = CoverLevels::new(&phi, &psi, &s1, &s2, &beta).unwrap();
            assert!(check_exactness(&levels, 0).unwrap().holds());
            for g in s2.sub.elements().unwrap() {
                assert!(fiber_size(&levels, &GroupElement::Finite(*g)).unwrap().holds());
            }
            let q2 = s2.quotient.order();
            for q in 0..q2 {
                let r = orbit_stabilizer_identity(&levels.phi_beta_parts.descended, &levels.psi_parts.descended, q);
                assert!(r.unwrap().holds());
            }
            // ρ_β is a bijection
            let image: BTreeSet<ClassKey> = levels
                .middle
                .classes()
                .unwrap()
                .iter()
                .map(|k| rho(&levels, k).unwrap())
                .collect();
            assert_eq!(image.len(), levels.base.len().unwrap());
            assert_eq!(levels.middle.len(), levels.base.len());
        }
    }
}

#[test]
fn rho_composition_identity() {
    for (phi, psi, s1, s2) in random_finite_bundles(77, 30) {
        let t = phi.target();
        for beta in t.elements().unwrap() {
            let lb = CoverLevels::new(&phi, &psi, &s1, &s2, &beta).unwrap();
            for &g in s2.sub.elements().unwrap() {
                let gamma = GroupElement::Finite(g);
                let gb = t.mul(&gamma, &beta);
                let lgb = CoverLevels::new(&phi, &psi, &s1, &s2, &gb).unwrap();
                let gamma_sub = s2.sub.pull(&gamma).unwrap();
                for c in lgb.top.classes().unwrap() {
                    let lhs = rho(&lgb, &i_hat(&lgb, &c).unwrap()).unwrap();
                    let moved = rho_between(&lgb.top, &lb.top, &gamma_sub, &c).unwrap();
                    let rhs = rho(&lb, &i_hat(&lb, &moved).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
