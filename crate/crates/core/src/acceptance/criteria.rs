use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::instances::{
    circle_3_1, circle_reflection, constant_map, exhaustive_finite_bundles, g2_pair, random_finite_bundles,
    torus_battery, torus_hyperbolic, torus_rotation, FiniteBundle, GeometricInstance, BATTERY_SEED, BATTERY_SIZE,
};
use super::Checks;
use crate::averaging::{
    algebraic_mode_verify, average_index, average_lefschetz, average_rt_coincidence, lift_levels, validate_cover,
    AveragingOptions, AveragingReport, CoverSpec,
};
use crate::error::{Error, Result};
use crate::group_models::catalog::{
    example1_bundle, example2_bundle, example2_candidate, g2_alpha, g2_word, square_of,
};
use crate::group_models::{CoverSide, CrystElement, Group, GroupElement, SubgroupSpec};
use crate::lattice_alg::{ints, rat, sign_of, QVector, Rational};
use crate::reidemeister::{
    check_exactness, coin_subgroup, fiber_size, orbit_stabilizer_identity, twisted_classes_cryst, ClassKey,
    CoverLevels, ReidemeisterSet,
};
use crate::trace_geometry::{
    coincidence_classes, lefschetz_number, local_trace, nielsen_number, oracle_coincidences, reidemeister_trace,
    AffineMapSpec, CoincidencePoint, Region, RegionBox, TraceVector,
};

pub const RANDOM_FINITE_SEED: u64 = 1618;
pub const RANDOM_FINITE_COUNT: usize = 50;
pub const REGION_SEED: u64 = 4142;

fn cover_of(inst: &GeometricInstance) -> Result<CoverSpec> {
    let gamma = inst.gamma()?;
    validate_cover(inst.f.hom(), inst.g.hom(), &gamma, &gamma)
}

fn averaged(inst: &GeometricInstance) -> Result<AveragingReport> {
    average_rt_coincidence(&inst.f, &inst.g, &cover_of(inst)?, &AveragingOptions::default())
}

fn point_list(points: &[CoincidencePoint]) -> Vec<(QVector, ClassKey, i64)> {
    let mut out: Vec<_> = points
        .iter()
        .map(|p| (p.location.clone(), p.class.clone(), p.local_index))
        .collect();
    out.sort();
    out
}

/// The oracle's points against the points solved class by class.
fn oracle_agrees(c: &mut Checks, name: &str, f: &AffineMapSpec, g: &AffineMapSpec) -> Result<()> {
    let solved = point_list(&coincidence_classes(f, g)?.points());
    let oracle = point_list(&oracle_coincidences(f, g)?);
    c.equal(&format!("{name}: oracle points"), oracle, solved);
    Ok(())
}

fn averaging_holds(c: &mut Checks, name: &str, report: &AveragingReport) {
    c.expect(
        &format!("{name}: lhs = rhs"),
        report.passed(),
        format!("lhs {}, rhs {}", fmt_opt(&report.lhs), report.rhs),
    );
    c.expect(
        &format!("{name}: summands lie over their cosets"),
        report.summands.iter().all(|s| s.in_fiber),
        String::new(),
    );
}

fn fmt_opt(v: &Option<TraceVector>) -> String {
    v.as_ref().map_or_else(|| "-".into(), |t| t.to_string())
}

pub(super) fn a1() -> Result<Checks> {
    let mut c = Checks::default();
    let inst = circle_3_1();
    let (f, g) = (&inst.f, &inst.g);
    let rt = reidemeister_trace(f, g)?;
    c.equal("RT(f, g)", rt.to_string(), "-[0] - [1]".into());
    oracle_agrees(&mut c, "circle", f, g)?;

    let cover = cover_of(&inst)?;
    let report = average_rt_coincidence(f, g, &cover, &AveragingOptions::default())?;
    let pushed: Vec<String> = report.summands.iter().map(|s| s.pushed.to_string()).collect();
    c.equal("pushed summands", pushed, vec!["-2[0]".into(), "-2[1]".into()]);
    c.equal("rhs", report.rhs.to_string(), "-[0] - [1]".into());
    averaging_holds(&mut c, "circle", &report);

    let l = lefschetz_number(f, g)?;
    let n = nielsen_number(f, g)?;
    c.equal("L(f, g)", l, -2);
    c.equal("N(f, g)", n, 2);
    c.equal("augmentation of RT = L", rt.augmentation(), l);
    c.equal("support of RT = N", rt.support_size(), n);
    c.equal("augmentation of rhs = L", report.rhs.augmentation(), l);
    c.equal("support of rhs = N", report.rhs.support_size(), n);
    let avg = average_lefschetz(f, g, &cover)?;
    c.expect("L averages over the lifts", avg.equal(), format!("{avg:?}"));
    Ok(c)
}

pub(super) fn a2() -> Result<Checks> {
    let mut c = Checks::default();
    let refl = circle_reflection();
    let rt = reidemeister_trace(&refl.f, &refl.g)?;
    c.equal("RT(-x)", rt.to_string(), "[0] + [1]".into());
    oracle_agrees(&mut c, "reflection", &refl.f, &refl.g)?;
    let report = averaged(&refl)?;
    averaging_holds(&mut c, "reflection", &report);

    let hyp = torus_hyperbolic();
    oracle_agrees(&mut c, "hyperbolic", &hyp.f, &hyp.g)?;
    let rt = reidemeister_trace(&hyp.f, &hyp.g)?;
    let coeffs: Vec<i64> = rt.coefficients().values().copied().collect();
    c.equal("hyperbolic RT coefficients", coeffs, vec![-1]);
    let report = averaged(&hyp)?;
    c.equal("hyperbolic summands", report.summands.len(), 4);
    c.equal("hyperbolic divisor", report.divisor, 4);
    averaging_holds(&mut c, "hyperbolic", &report);
    Ok(c)
}

fn witness_holds(report: &AveragingReport) -> bool {
    let support: Vec<&ClassKey> = report.raw_sum.terms().map(|(k, _)| k).collect();
    let keys: Vec<&ClassKey> = report.witness.iter().map(|(k, _, _)| k).collect();
    !report.witness.is_empty()
        && support == keys
        && report
            .witness
            .iter()
            .all(|(k, raw, q)| *raw == *q * report.divisor as i64 && report.rhs.coefficient(k) == *q)
}

pub(super) fn a3() -> Result<Checks> {
    let mut c = Checks::default();
    for inst in torus_battery(BATTERY_SEED, BATTERY_SIZE) {
        let name = &inst.name;
        let (f, g) = (&inst.f, &inst.g);
        oracle_agrees(&mut c, name, f, g)?;
        let det = g.linear().try_sub(f.linear())?.det()?;
        let classes = coincidence_classes(f, g)?;
        c.equal(
            &format!("{name}: class count = |det|"),
            classes.classes.len().into(),
            det.magnitude().clone(),
        );
        let sign = sign_of(&det);
        c.expect(
            &format!("{name}: one point of index sign det per class"),
            classes
                .classes
                .iter()
                .all(|k| k.points.len() == 1 && k.points[0].local_index == sign),
            format!("det {det}"),
        );
        let report = averaged(&inst)?;
        averaging_holds(&mut c, name, &report);
        c.expect(
            &format!("{name}: divisibility witness"),
            witness_holds(&report),
            format!("{:?}", report.witness),
        );
    }
    Ok(c)
}

pub(super) fn a4() -> Result<Checks> {
    let mut c = Checks::default();
    let b = example1_bundle();
    let side1 = CoverSide::new(b.phi.source(), &b.gamma1)?;
    let side2 = CoverSide::new(b.phi.target(), &b.gamma2)?;
    let one = b.phi.target().identity();
    let beta = GroupElement::Finite(1);
    let levels = CoverLevels::new(&b.phi, &b.psi, &side1, &side2, &one)?;
    c.equal("#R[φ', ψ']", levels.top.len(), Some(1));
    c.equal("#R[φ, ψ]", levels.middle.len(), Some(1));
    c.equal("#R[φ̄, ψ̄]", levels.bottom.len(), Some(1));
    c.expect(
        "[1] = [β] in R[φ, ψ]",
        levels.middle.same_class(&one, &beta),
        String::new(),
    );
    let (bar_one, bar_beta) = (GroupElement::Finite(0), GroupElement::Finite(1));
    c.expect(
        "[1̄] = [β̄] in R[φ̄, ψ̄]",
        levels.bottom.same_class(&bar_one, &bar_beta),
        String::new(),
    );
    c.expect("sequence is exact", check_exactness(&levels, 2)?.holds(), String::new());

    let coin = coin_subgroup(&b.phi, &b.psi)?;
    c.expect("coin(φ, ψ) = Γ₁", coin.equals(&side1.sub), String::new());
    let bar = coin_subgroup(&levels.phi_beta_parts.descended, &levels.psi_parts.descended)?;
    c.expect("coin(φ̄, ψ̄) = {1̄}", bar.is_trivial(), String::new());

    let cover = validate_cover(&b.phi, &b.psi, &b.gamma1, &b.gamma2)?;
    for k in -3..=3 {
        let report = example1_sweep(&cover, k)?;
        let base_one = report.rhs.set().class_of(&one);
        c.expect(&format!("k = {k}: lhs = rhs"), report.passed(), report.rhs.to_string());
        c.equal(
            &format!("k = {k}: rhs = k[1]"),
            report.rhs.coefficients().clone(),
            single(base_one, k),
        );
    }
    Ok(c)
}

fn single(k: ClassKey, v: i64) -> BTreeMap<ClassKey, i64> {
    if v == 0 {
        BTreeMap::new()
    } else {
        BTreeMap::from([(k, v)])
    }
}

/// Algebraic mode for the first example with index `k` on the only class of
/// every level.
pub fn example1_sweep(cover: &CoverSpec, k: i64) -> Result<AveragingReport> {
    let levels = lift_levels(cover)?;
    let tables: Vec<_> = levels
        .iter()
        .map(|l| single(l.top.class_of(&l.top.target().identity()), k))
        .collect();
    let base = ReidemeisterSet::new(cover.phi(), cover.psi())?;
    let lhs = single(base.class_of(&base.target().identity()), k);
    algebraic_mode_verify(cover, &tables, Some(&lhs), &AveragingOptions::default())
}

type IndexTable = BTreeMap<ClassKey, i64>;

/// Index tables for the second example: `(f, g)` has the given indices on
/// the classes of the listed elements, and the double cover of the source
/// doubles every lifted index.
pub fn example2_tables(cover: &CoverSpec, indices: &[(GroupElement, i64)]) -> Result<(Vec<IndexTable>, IndexTable)> {
    let levels = lift_levels(cover)?;
    let base = ReidemeisterSet::new(cover.phi(), cover.psi())?;
    let target = cover.phi().target();
    let mut lhs = BTreeMap::new();
    let mut tables = vec![BTreeMap::new(); levels.len()];
    for (x, m) in indices {
        if *m == 0 {
            continue;
        }
        lhs.insert(base.class_of(x), *m);
        let q = cover.side2().quotient.project(x);
        let gamma = target.mul(x, &target.inv(&cover.coset_representatives()[q]));
        let gamma = cover.side2().sub.pull(&gamma).expect("coset difference lies in Γ₂");
        tables[q].insert(levels[q].top.class_of(&gamma), 2 * m);
    }
    Ok((tables, lhs))
}

pub fn example2_sample_indices() -> Vec<(GroupElement, i64)> {
    let b = example2_bundle();
    let g2 = b.phi.target().as_cryst().expect("cryst").clone();
    let alpha = GroupElement::Cryst(g2_alpha(&g2));
    let t = |v: &[i64]| GroupElement::Cryst(g2.translation(ints(v)));
    let target = b.phi.target().clone();
    vec![
        (t(&[0, 0, 0]), 1),
        (t(&[1, -2, 0]), -3),
        (target.mul(&t(&[0, 1, 1]), &alpha), 2),
        (alpha, -1),
    ]
}

pub(super) fn a5() -> Result<Checks> {
    let mut c = Checks::default();
    let b = example2_bundle();
    let g2 = b.phi.target().as_cryst().expect("cryst").clone();
    let target = b.phi.target().clone();
    let mut rejected = 0;
    let mut squares = 0;
    for n1 in -2..=2 {
        for n2 in -2..=2 {
            for n3 in -2..=2 {
                let x = GroupElement::Cryst(g2_word(&g2, [n1, n2, n3]));
                if matches!(example2_candidate([n1, n2, n3]), Err(Error::InvalidHom(_))) {
                    rejected += 1;
                }
                if square_of(&target, &x) == GroupElement::Cryst(g2.translation(ints(&[2 * n1 + 1, 0, 0]))) {
                    squares += 1;
                }
            }
        }
    }
    c.equal("candidates rejected", rejected, 125);
    c.equal("witness ξ(β)² = t₁^(2n₁+1)", squares, 125);

    let set = twisted_classes_cryst(&b.phi, &b.psi)?;
    c.expect("R[φ, ψ] is infinite", !set.is_finite(), String::new());
    let mut sample = Vec::new();
    for h in 0..2 {
        for i in 0..27 {
            let v = [i % 3 - 1, i / 3 % 3 - 1, i / 9 - 1];
            sample.push(GroupElement::Cryst(CrystElement::new(ints(&v), h)));
        }
    }
    let keys: BTreeSet<ClassKey> = sample.iter().map(|x| set.class_of(x)).collect();
    c.equal("sampled classes are distinct", keys.len(), sample.len());
    c.expect(
        "every class is a singleton",
        sample
            .iter()
            .all(|x| set.representative(&set.class_of(x)).as_ref() == Some(x)),
        String::new(),
    );

    let cover = validate_cover(&b.phi, &b.psi, &b.gamma1, &b.gamma2)?;
    let (tables, lhs) = example2_tables(&cover, &example2_sample_indices())?;
    let report = algebraic_mode_verify(&cover, &tables, Some(&lhs), &AveragingOptions::default())?;
    c.expect("lhs = rhs", report.passed(), report.rhs.to_string());
    c.equal("two sums", report.summands.len(), 2);
    let shape = report.summands.iter().all(|s| {
        s.pushed.terms().all(|(k, _)| {
            let x = report.rhs.set().representative(k).expect("class");
            x.as_cryst().map(|e| e.holonomy) == Some(s.beta_bar)
        })
    });
    c.expect("sum over γ, then over γα", shape, String::new());
    let levels = lift_levels(&cover)?;
    let mut odd = tables.clone();
    odd[0].insert(levels[0].top.class_of(&levels[0].top.target().identity()), 1);
    let odd = algebraic_mode_verify(&cover, &odd, None, &AveragingOptions::default());
    c.expect(
        "odd lifted index leaves a remainder",
        matches!(odd, Err(Error::DivisionRemainder { divisor: 2, .. })),
        String::new(),
    );
    Ok(c)
}

/// Exactness, fiber sizes and orbit-stabilizer counts for one bundle;
/// returns the number of identities checked, or a description of the
/// first failure.
pub fn finite_bundle_identities(b: &FiniteBundle) -> Result<std::result::Result<usize, String>> {
    let (phi, psi) = b.homs()?;
    let s = Group::Finite(Arc::clone(&b.source));
    let t = Group::Finite(Arc::clone(&b.target));
    let side1 = CoverSide::new(&s, &SubgroupSpec::Elements(b.gamma1.clone()))?;
    let side2 = CoverSide::new(&t, &SubgroupSpec::Elements(b.gamma2.clone()))?;
    let mut n = 0;
    let fail = |what: &str, beta: usize| {
        format!(
            "{what} fails for φ = {:?}, ψ = {:?}, Γ₂ = {:?}, β = {beta}",
            b.phi, b.psi, b.gamma2
        )
    };
    for beta in 0..b.target.order() {
        let levels = CoverLevels::new(&phi, &psi, &side1, &side2, &GroupElement::Finite(beta))?;
        if !check_exactness(&levels, 0)?.holds() {
            return Ok(Err(fail("exactness", beta)));
        }
        n += 1;
        for &g in &b.gamma2 {
            if !fiber_size(&levels, &GroupElement::Finite(g))?.holds() {
                return Ok(Err(fail("fiber size", beta)));
            }
            n += 1;
        }
    }
    let parts = validate_cover(
        &phi,
        &psi,
        &SubgroupSpec::Elements(b.gamma1.clone()),
        &SubgroupSpec::Elements(b.gamma2.clone()),
    )?;
    for q in 0..parts.index2() {
        if !orbit_stabilizer_identity(&parts.phi_parts().descended, &parts.psi_parts().descended, q)?.holds() {
            return Ok(Err(fail("orbit-stabilizer", q)));
        }
        n += 1;
    }
    Ok(Ok(n))
}

pub(super) fn a6() -> Result<Checks> {
    let mut c = Checks::default();
    for (label, bundles) in [
        ("exhaustive, order ≤ 6", exhaustive_finite_bundles()),
        (
            "random, order ≤ 16",
            random_finite_bundles(RANDOM_FINITE_SEED, RANDOM_FINITE_COUNT),
        ),
    ] {
        let mut failures = Vec::new();
        let mut checked = 0;
        for b in &bundles {
            match finite_bundle_identities(b)? {
                Ok(n) => checked += n,
                Err(e) => failures.push(e),
            }
        }
        c.expect(
            &format!("{label}: {} bundles, {checked} identities", bundles.len()),
            failures.is_empty(),
            failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
        );
    }
    Ok(c)
}

/// Ten geometric instances for the local trace checks.
pub fn axiom_instances() -> Vec<GeometricInstance> {
    let mut out = vec![
        circle_3_1(),
        circle_reflection(),
        torus_rotation(),
        torus_hyperbolic(),
        g2_pair(),
        constant_map(vec![rat(2, 7), rat(3, 5)]),
    ];
    out.extend(torus_battery(BATTERY_SEED + 1, 4));
    out
}

const GRID: i64 = 101;

fn interval(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    let a = rng.gen_range(1..GRID - 1);
    let b = rng.gen_range(a + 1..GRID);
    (rat(a, GRID), rat(b, GRID))
}

/// Two disjoint random boxes, split along the first coordinate.
pub fn random_box_pair(n: usize, rng: &mut ChaCha8Rng) -> Result<(RegionBox, RegionBox)> {
    let mut cuts: BTreeSet<i64> = BTreeSet::new();
    while cuts.len() < 4 {
        cuts.insert(rng.gen_range(1..GRID));
    }
    let cuts: Vec<i64> = cuts.into_iter().collect();
    let mut mk = |lo: i64, hi: i64| {
        let mut l = vec![rat(lo, GRID)];
        let mut h = vec![rat(hi, GRID)];
        for _ in 1..n {
            let (a, b) = interval(rng);
            l.push(a);
            h.push(b);
        }
        RegionBox::new(l, h)
    };
    Ok((mk(cuts[0], cuts[1])?, mk(cuts[2], cuts[3])?))
}

/// Retries `attempt` with fresh random regions while it hits a boundary.
fn avoiding_boundary<T>(rng: &mut ChaCha8Rng, mut attempt: impl FnMut(&mut ChaCha8Rng) -> Result<T>) -> Result<T> {
    for _ in 0..50 {
        match attempt(rng) {
            Err(Error::Boundary(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Boundary("no region avoided the coincidences".into()))
}

pub(super) fn a7() -> Result<Checks> {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(REGION_SEED);
    for inst in axiom_instances() {
        let name = &inst.name;
        let (f, g) = (&inst.f, &inst.g);
        let base = Arc::clone(f.source());
        let n = base.dim();
        let (u1, u2, lt1, lt2, both) = avoiding_boundary(&mut rng, |rng| {
            let (b1, b2) = random_box_pair(n, rng)?;
            let u1 = Region::new(&base, vec![b1])?;
            let u2 = Region::new(&base, vec![b2])?;
            let lt1 = local_trace(f, g, &u1)?;
            let lt2 = local_trace(f, g, &u2)?;
            let both = local_trace(f, g, &u1.union(&u2)?)?;
            Ok((u1, u2, lt1, lt2, both))
        })?;
        c.equal(&format!("{name}: additivity"), both.clone(), lt1.plus(&lt2));

        let u = u1.union(&u2)?;
        let mut invariant = true;
        for beta in f.target().generators() {
            let shifted = f.with_lift(&beta)?;
            invariant &= local_trace(&shifted, g, &u)?.augmentation() == both.augmentation();
        }
        c.expect(&format!("{name}: lift invariance of ε"), invariant, String::new());

        let oracle = oracle_coincidences(f, g)?;
        let mut covered = true;
        for (k, _) in both.terms() {
            let mut found = false;
            for p in oracle.iter().filter(|p| &p.class == k) {
                found |= u.contains(&p.location)?;
            }
            covered &= found;
        }
        c.expect(
            &format!("{name}: nonzero classes have coincidences in U"),
            covered,
            both.to_string(),
        );
    }

    for d in [
        vec![rat(2, 7)],
        vec![rat(2, 7), rat(3, 5)],
        vec![rat(1, 3), rat(1, 2), rat(4, 9)],
    ] {
        let inst = constant_map(d.clone());
        let lo: QVector = d.iter().map(|x| x - rat(1, 10)).collect();
        let hi: QVector = d.iter().map(|x| x + rat(1, 10)).collect();
        let u = Region::new(inst.f.source(), vec![RegionBox::new(lo, hi)?])?;
        let eps = local_trace(&inst.f, &inst.g, &u)?.augmentation();
        c.equal(&format!("normalization in dimension {}", d.len()), eps, 1);
    }

    let self_maps = [
        circle_reflection(),
        torus_hyperbolic(),
        g2_pair(),
        torus_rotation(),
        circle_3_1(),
    ];
    for i in 0..10 {
        let inst = &self_maps[i % self_maps.len()];
        let base = Arc::clone(inst.f.source());
        let n = base.dim();
        let gamma = inst.gamma()?;
        let avg = avoiding_boundary(&mut rng, |rng| {
            let (b1, b2) = random_box_pair(n, rng)?;
            let boxes = if rng.gen_bool(0.5) { vec![b1, b2] } else { vec![b1] };
            average_index(&inst.f, &Region::new(&base, boxes)?, &gamma)
        })?;
        c.expect(
            &format!("index average {i} on {}", inst.name),
            avg.equal(),
            format!("{avg:?}"),
        );
    }
    Ok(c)
}

/// One recomputation of the averaged trace under other choices.
#[derive(Clone, Debug)]
pub struct SectionVariant {
    pub label: String,
    /// Pushed summand of every coset.
    pub pushed: Vec<TraceVector>,
    pub rhs: TraceVector,
}

fn variant(label: String, report: AveragingReport) -> SectionVariant {
    SectionVariant {
        label,
        pushed: report.summands.into_iter().map(|s| s.pushed).collect(),
        rhs: report.rhs,
    }
}

/// Recomputes the average with every coset representative `β` replaced by
/// `γβ`, once for each generator `γ` of `Γ₂`, and with shuffled class
/// representatives.
pub fn section_variants(inst: &GeometricInstance) -> Result<Vec<SectionVariant>> {
    let cover = cover_of(inst)?;
    let target = cover.phi().target().clone();
    let sub = &cover.side2().sub;
    let mut out = Vec::new();
    for gamma in sub.group().generators() {
        let g = sub.include(&gamma);
        let mut moved = cover.clone();
        for (q, beta) in cover.coset_representatives().iter().enumerate() {
            moved = moved.with_representative(q, target.mul(&g, beta))?;
        }
        let report = average_rt_coincidence(&inst.f, &inst.g, &moved, &AveragingOptions::default())?;
        out.push(variant(format!("γ = {}", target.format_element(&g)), report));
    }
    for seed in 0..3 {
        let options = AveragingOptions {
            shuffle_representatives: Some(seed),
            sabotage: false,
        };
        let report = average_rt_coincidence(&inst.f, &inst.g, &cover, &options)?;
        out.push(variant(format!("shuffle {seed}"), report));
    }
    Ok(out)
}

pub(super) fn a8() -> Result<Checks> {
    let mut c = Checks::default();
    let mut instances = vec![circle_3_1(), circle_reflection(), torus_hyperbolic()];
    instances.extend(torus_battery(BATTERY_SEED, BATTERY_SIZE));
    for inst in instances {
        let base = variant("canonical".into(), averaged(&inst)?);
        let variants = section_variants(&inst)?;
        let bad: Vec<String> = variants
            .iter()
            .filter(|v| v.rhs != base.rhs || v.pushed != base.pushed)
            .map(|v| format!("{}: {}", v.label, v.rhs))
            .collect();
        c.expect(
            &format!("{}: {} variants agree coset by coset", inst.name, variants.len()),
            bad.is_empty(),
            bad.join("; "),
        );
    }
    Ok(c)
}
