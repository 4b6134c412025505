use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde_json::{json, Value};

use coinrt::acceptance::{run_criterion, Checks, CRITERIA};
use coinrt::averaging::{
    algebraic_mode_verify, average_abs_rt, average_index, average_lefschetz, average_rt_coincidence, average_rt_fixed,
    lift_levels, trace_json, validate_cover, AveragingOptions, AveragingReport, CoverSpec,
};
use coinrt::group_models::GroupElement;
use coinrt::lattice_alg::{format_qvector, format_rational, rat};
use coinrt::reidemeister::{
    check_exactness, coin_subgroup, fiber_size, orbit_stabilizer_identity, ClassKey, CoinSubgroup, CoverLevels,
    ReidemeisterSet,
};
use coinrt::trace_geometry::{
    coincidence_classes, lefschetz_number, nielsen_number, oracle_coincidences, reidemeister_trace, AffineMapSpec,
    TraceVector,
};
use coinrt::Error;

use crate::bundle::{load_bundle, validate, Bundle, IndexTables, Linear, Mode};
use crate::error::CliError;
use crate::examples::builtin;
use crate::report::Report;

/// Sets with more classes than this are summarized by their size.
const LIST_LIMIT: usize = 24;
/// Coordinate bound for sampled exactness checks on infinite sets.
const SAMPLE_BOUND: i64 = 2;
/// Fibers checked per coset when the top set is finite.
const FIBER_LIMIT: usize = 8;

pub enum Input {
    Example(String),
    File(PathBuf),
}

pub fn load(input: &Input) -> Result<Bundle, CliError> {
    match input {
        Input::Example(name) => validate(&builtin(name)?, name),
        Input::File(path) => load_bundle(path),
    }
}

fn group_text(factors: &[BigInt], rank: usize) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(factors.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn plural(n: usize, one: &str, many: &str) -> String {
    if n == 1 {
        format!("1 {one}")
    } else {
        format!("{n} {many}")
    }
}

fn count_text(set: &ReidemeisterSet) -> String {
    match set.len() {
        Some(n) => plural(n, "class", "classes"),
        None => {
            let sectors: Vec<String> = set.degenerate_sectors().iter().map(|s| format!("h{s}")).collect();
            format!("infinite (sectors {} have free rank)", sectors.join(", "))
        }
    }
}

/// `{[a]=[b], [c]}`: members of each class for finite targets, one
/// representative per class otherwise.
fn set_text(set: &ReidemeisterSet, name: &dyn Fn(&GroupElement) -> String) -> String {
    if !set.is_finite() {
        return "infinite".into();
    }
    let classes = set.classes().expect("finite set");
    if classes.len() > LIST_LIMIT {
        return format!("{} classes", classes.len());
    }
    let parts: Vec<String> = match set.target().elements() {
        Some(elements) => classes
            .iter()
            .map(|k| {
                let members: Vec<String> = elements
                    .iter()
                    .filter(|x| &set.class_of(x) == k)
                    .map(|x| format!("[{}]", name(x)))
                    .collect();
                members.join("=")
            })
            .collect(),
        None => classes
            .iter()
            .map(|k| format!("[{}]", name(&set.representative(k).expect("class"))))
            .collect(),
    };
    format!("{{{}}}", parts.join(", "))
}

fn class_labels(set: &ReidemeisterSet, name: &dyn Fn(&GroupElement) -> String) -> Option<Vec<String>> {
    let classes = set.classes().ok()?;
    Some(
        classes
            .iter()
            .map(|k| format!("[{}]", name(&set.representative(k).expect("class"))))
            .collect(),
    )
}

/// Name of a coset of `Γ₂` from the name of its representative.
fn bar(name: &str) -> String {
    if name.chars().count() <= 2 {
        format!("{name}\u{0304}")
    } else {
        format!("{name}Γ₂")
    }
}

fn coin_text(c: &CoinSubgroup, b: &Bundle) -> String {
    let source = b.phi.source();
    let list = |xs: Vec<String>| format!("{{{}}}", xs.join(", "));
    match c {
        CoinSubgroup::Finite(e) => {
            format!(
                "{} (order {})",
                list(e.iter().map(|x| b.source_name(x)).collect()),
                e.len()
            )
        }
        CoinSubgroup::Cofinite { deep, members, total } => format!(
            "index {} subgroup: {} of the {} cosets of the sublattice with basis {}",
            total / members.len().max(1),
            members.len(),
            total,
            format_basis(&deep.basis())
        ),
        CoinSubgroup::Affine { kernel, cosets } if kernel.is_empty() => {
            let names = cosets
                .iter()
                .map(|x| source.format_element(&GroupElement::Cryst(x.clone())))
                .collect();
            format!("{} (order {})", list(names), cosets.len())
        }
        CoinSubgroup::Affine { kernel, cosets } => format!(
            "infinite: translations spanned by {} in {} holonomy cosets",
            format_basis(kernel),
            cosets.len()
        ),
    }
}

fn format_basis(rows: &[Vec<BigInt>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| {
            let c: Vec<String> = r.iter().map(ToString::to_string).collect();
            format!("({})", c.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn cover_of(b: &Bundle) -> Result<CoverSpec, CliError> {
    let (g1, g2) = b.cover()?;
    Ok(validate_cover(&b.phi, &b.psi, g1, g2)?)
}

fn fiber_elements(levels: &CoverLevels) -> Vec<GroupElement> {
    let sub = &levels.side2.sub;
    match levels.top.classes() {
        Ok(classes) => classes
            .iter()
            .take(FIBER_LIMIT)
            .map(|k| sub.include(&levels.top.representative(k).expect("class")))
            .collect(),
        Err(_) => {
            let mut out = vec![sub.include(&sub.group().identity())];
            out.extend(sub.group().generators().iter().map(|x| sub.include(x)));
            out
        }
    }
}

fn cover_checks(b: &Bundle, cover: &CoverSpec, r: &mut Report, c: &mut Checks) -> Result<Value, CliError> {
    let side1 = cover.side1();
    let side2 = cover.side2();
    let top_name = |x: &GroupElement| b.target_name(&side2.sub.include(x));
    let bottom_name = |x: &GroupElement| {
        let q = x.as_finite().expect("quotient element");
        bar(&b.target_name(side2.quotient.representative(q)))
    };
    let reps = cover.coset_representatives();
    r.line(format!(
        "[Π₁ : Γ₁] = {}, [Π₂ : Γ₂] = {}",
        cover.index1(),
        cover.index2()
    ));
    let rep_names: Vec<String> = reps.iter().map(|x| b.target_name(x)).collect();
    r.line(format!("coset representatives: {}", rep_names.join(", ")));

    let mut chains = Vec::new();
    for (beta_bar, beta) in reps.iter().enumerate() {
        let levels = CoverLevels::new(&b.phi, &b.psi, side1, side2, beta)?;
        let name = b.target_name(beta);
        let top = set_text(&levels.top, &top_name);
        let middle = set_text(&levels.middle, &|x| b.target_name(x));
        let bottom = set_text(&levels.bottom, &bottom_name);
        if beta_bar == 0 {
            r.line(format!("R[φ′,ψ′] = {top} → R[φ,ψ] = {middle} → R[φ̄,ψ̄] = {bottom}"));
        } else {
            r.line(format!(
                "β = {name}: R[(τ_β φ)′,ψ′] = {top} → R[τ_β φ,ψ] = {middle} → R[τ_β̄ φ̄,ψ̄] = {bottom}"
            ));
        }
        chains.push(json!({"beta": name, "top": top, "middle": middle, "bottom": bottom}));

        match check_exactness(&levels, SAMPLE_BOUND) {
            Ok(e) => {
                let how = if e.exhaustive {
                    plural(e.checked, "class", "classes")
                } else {
                    plural(e.checked, "sampled element", "sampled elements")
                };
                let mut detail = format!("im î = û⁻¹([1̄]) over {how}");
                if !e.surjective {
                    detail.push_str("; û is not onto");
                }
                if !e.mismatches.is_empty() {
                    detail.push_str(&format!("; mismatches at {}", e.mismatches.join(", ")));
                }
                c.expect(&format!("exactness at β = {name}"), e.holds(), detail);
            }
            Err(Error::Infinite(why)) => r.line(format!("exactness at β = {name} not checked: {why}")),
            Err(e) => return Err(e.into()),
        }
        for gamma in fiber_elements(&levels) {
            let gname = b.target_name(&gamma);
            match fiber_size(&levels, &gamma) {
                Ok(f) => c.expect(
                    &format!("fiber of î over [{gname}] at β = {name}"),
                    f.holds(),
                    format!(
                        "{}, [{} : {}]",
                        plural(f.direct, "class", "classes"),
                        f.coin_bar,
                        f.projected
                    ),
                ),
                Err(Error::Infinite(why)) => {
                    r.line(format!("fiber over [{gname}] at β = {name} not checked: {why}"));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    for q in 0..cover.index2() {
        let o = orbit_stabilizer_identity(&cover.phi_parts().descended, &cover.psi_parts().descended, q)?;
        let name = bar(&b.target_name(side2.quotient.representative(q)));
        c.expect(
            &format!("orbit-stabilizer at {name}"),
            o.holds(),
            format!("{} = {} · {}", o.group_order, o.orbit, o.stabilizer),
        );
    }
    Ok(json!(chains))
}

pub fn reidemeister(b: &Bundle) -> Result<Report, CliError> {
    let mut r = Report::new("reidemeister", &b.name);
    let mut c = Checks::default();
    let set = ReidemeisterSet::new(&b.phi, &b.psi)?;
    let name = |x: &GroupElement| b.target_name(x);
    r.line(format!("R[φ,ψ]: {}", count_text(&set)));
    let mut sectors = Vec::new();
    for s in set.sectors() {
        if let Some((factors, rank)) = set.sector_invariants(s) {
            let text = group_text(&factors, rank);
            r.line(format!("  holonomy sector h{s}: {text}"));
            sectors.push(json!({"sector": s, "quotient": text}));
        }
    }
    r.line(format!("R[φ,ψ] = {}", set_text(&set, &name)));
    let coin = coin_text(&coin_subgroup(&b.phi, &b.psi)?, b);
    r.line(format!("coin(φ,ψ) = {coin}"));
    let chains = match &b.cover {
        Some(_) => cover_checks(b, &cover_of(b)?, &mut r, &mut c)?,
        None => Value::Null,
    };
    r.add_checks(c);
    r.data = json!({
        "classes": set.len(),
        "finite": set.is_finite(),
        "sectors": sectors,
        "labels": class_labels(&set, &name),
        "coin": coin,
        "chains": chains,
    });
    Ok(r)
}

fn degenerate_context(e: Error) -> CliError {
    match e {
        Error::Degenerate { sector } => CliError::Usage(format!(
            "degenerate pair: det(E - A_b D) = 0 in holonomy sector h{sector}, so the coincidence set is not \
             isolated and the trace is not defined"
        )),
        e => e.into(),
    }
}

pub fn trace(b: &Bundle) -> Result<Report, CliError> {
    let (f, g) = b.geometric()?;
    let mut r = Report::new("trace", &b.name);
    let mut c = Checks::default();
    let solved = coincidence_classes(f, g).map_err(degenerate_context)?;
    let rt = reidemeister_trace(f, g)?;
    let l = lefschetz_number(f, g)?;
    let n = nielsen_number(f, g)?;
    r.line(format!("RT(f,g) = {rt}"));
    r.line(format!("L(f,g) = {l}"));
    r.line(format!("N(f,g) = {n}"));
    r.line("coincidence points:");
    let label = |k: &ClassKey| solved.set.label(k);
    let mut points = Vec::new();
    for p in solved.points() {
        r.line(format!(
            "  x = {}  class {}  index {}",
            format_qvector(&p.location),
            label(&p.class),
            p.local_index
        ));
        points.push(json!({"location": format_qvector(&p.location), "class": label(&p.class), "index": p.local_index}));
    }
    let key = |v: &coinrt::trace_geometry::CoincidencePoint| (v.location.clone(), v.class.clone(), v.local_index);
    let mut mine: Vec<_> = solved.points().iter().map(key).collect();
    let mut oracle: Vec<_> = oracle_coincidences(f, g)?.iter().map(key).collect();
    mine.sort();
    oracle.sort();
    c.expect(
        "oracle points",
        mine == oracle,
        format!("{} solved, {} found by the oracle", mine.len(), oracle.len()),
    );
    c.equal("augmentation of RT = L", rt.augmentation(), l);
    c.equal("support of RT = N", rt.support_size(), n);
    r.add_checks(c);
    r.data = json!({
        "trace": trace_json(&rt),
        "lefschetz": l,
        "nielsen": n,
        "points": points,
    });
    Ok(r)
}

pub struct VerifyOptions {
    pub mode: Option<Mode>,
    pub sweep: Option<(i64, i64)>,
    pub sabotage: bool,
}

fn diff_lines(r: &mut Report, rep: &AveragingReport, name: &Namer) {
    let Some(lhs) = &rep.lhs else { return };
    let diff: Vec<(ClassKey, i64, i64)> = rep
        .rhs
        .set()
        .classes()
        .unwrap_or_else(|_| {
            lhs.coefficients()
                .keys()
                .chain(rep.rhs.coefficients().keys())
                .cloned()
                .collect()
        })
        .into_iter()
        .filter(|k| lhs.coefficient(k) != rep.rhs.coefficient(k))
        .map(|k| {
            let (a, b) = (lhs.coefficient(&k), rep.rhs.coefficient(&k));
            (k, a, b)
        })
        .collect();
    if diff.is_empty() {
        return;
    }
    r.line("diff (class: lhs, rhs):");
    for (k, a, b) in diff {
        r.line(format!("  {}: {a}, {b}", class_name(rep.rhs.set(), &k, name)));
    }
}

type Namer<'a> = dyn Fn(&GroupElement) -> String + 'a;

fn class_name(set: &ReidemeisterSet, k: &ClassKey, name: &Namer) -> String {
    match set.representative(k) {
        Some(x) => format!("[{}]", name(&x)),
        None => set.label(k),
    }
}

/// Same layout as the library's trace display, with element names.
fn trace_text(t: &TraceVector, name: &Namer) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in t.terms().enumerate() {
        let label = class_name(t.set(), k, name);
        let mag = c.unsigned_abs();
        let term = if mag == 1 { label } else { format!("{mag}{label}") };
        out.push_str(&match (i, c < 0) {
            (0, false) => term,
            (0, true) => format!("-{term}"),
            (_, false) => format!(" + {term}"),
            (_, true) => format!(" - {term}"),
        });
    }
    out
}

fn table_lines(r: &mut Report, rep: &AveragingReport) {
    for l in rep.table().lines() {
        r.line(format!("  {l}"));
    }
}

fn averaging_detail(rep: &AveragingReport, name: &Namer) -> String {
    let rhs = trace_text(&rep.rhs, name);
    match &rep.lhs {
        Some(l) => format!("lhs {}, rhs {rhs}", trace_text(l, name)),
        None => format!("rhs {rhs}"),
    }
}

fn is_identity(g: &AffineMapSpec) -> bool {
    g.hom().source().same(g.hom().target())
        && g.linear().is_identity()
        && g.translation().iter().all(|x| *x == rat(0, 1))
        && g.holonomy_map().iter().enumerate().all(|(i, h)| i == *h)
}

fn sum_text(v: &[(usize, i64)]) -> String {
    let parts: Vec<String> = v.iter().map(|(_, x)| x.to_string()).collect();
    parts.join(" + ")
}

fn geometric_averaging(b: &Bundle, cover: &CoverSpec, sabotage: bool, r: &mut Report) -> Result<Value, CliError> {
    let (f, g) = b.geometric()?;
    let mut c = Checks::default();
    let options = AveragingOptions {
        shuffle_representatives: None,
        sabotage,
    };
    let name = |x: &GroupElement| b.target_name(x);
    let rep = average_rt_coincidence(f, g, cover, &options).map_err(degenerate_context)?;
    r.line("coincidence trace averaging:");
    table_lines(r, &rep);
    c.expect(
        "coincidence trace averaging",
        rep.passed(),
        averaging_detail(&rep, &name),
    );
    diff_lines(r, &rep, &name);
    let mut data = json!({"mode": "geometric", "coincidence": rep.to_json()});

    let (g1, g2) = b.cover()?;
    let fixed_points = is_identity(g) && g1 == g2;
    if fixed_points {
        // same lifts as above, but built from f alone with the identity lift of g
        let fixed = average_rt_fixed(f, g1, &AveragingOptions::default())?;
        r.line(format!(
            "fixed point trace averaging: RT(f) = {}, averaged = {}",
            trace_text(fixed.lhs.as_ref().expect("direct trace"), &name),
            trace_text(&fixed.rhs, &name)
        ));
        c.expect(
            "fixed point trace averaging",
            fixed.passed(),
            averaging_detail(&fixed, &name),
        );
        diff_lines(r, &fixed, &name);
        data["fixed"] = fixed.to_json();
    }

    let abs = average_abs_rt(f, g, cover, &AveragingOptions::default())?;
    r.line(format!(
        "absolute trace averaging: |RT(f,g)| = {}, averaged = {}",
        trace_text(abs.lhs.as_ref().expect("direct trace"), &name),
        trace_text(&abs.rhs, &name)
    ));
    c.expect("absolute trace averaging", abs.passed(), averaging_detail(&abs, &name));
    diff_lines(r, &abs, &name);
    data["absolute"] = abs.to_json();

    let lef = average_lefschetz(f, g, cover)?;
    r.line(format!(
        "Lefschetz averaging: L(f,g) = {}, ({}) / {} = {}, augmentation of the averaged trace = {}",
        lef.lhs,
        sum_text(&lef.per_coset),
        cover.index1(),
        format_rational(&lef.rhs),
        lef.trace_augmentation
    ));
    c.expect(
        "Lefschetz averaging",
        lef.equal(),
        format!("{} = {}", lef.lhs, format_rational(&lef.rhs)),
    );
    data["lefschetz"] = json!({
        "lhs": lef.lhs,
        "per_coset": lef.per_coset.iter().map(|(_, x)| x).collect::<Vec<_>>(),
        "rhs": format_rational(&lef.rhs),
        "trace_augmentation": lef.trace_augmentation,
    });

    if fixed_points {
        let mut index = Vec::new();
        for (i, region) in b.regions.iter().enumerate() {
            let ia = average_index(f, region, g1)?;
            r.line(format!(
                "index averaging on region {i}: i(f, U) = {}, ({}) / {} = {}",
                ia.lhs,
                sum_text(&ia.per_coset),
                cover.index1(),
                format_rational(&ia.rhs)
            ));
            c.expect(
                &format!("index averaging on region {i}"),
                ia.equal(),
                format!("{} = {}", ia.lhs, format_rational(&ia.rhs)),
            );
            index.push(json!({"region": i, "lhs": ia.lhs, "rhs": format_rational(&ia.rhs)}));
        }
        data["index"] = json!(index);
    } else if !b.regions.is_empty() {
        r.line("index averaging skipped: it needs g = id and Γ₁ = Γ₂");
    }
    r.add_checks(c);
    Ok(data)
}

type KeyedTable = Vec<(ClassKey, Linear)>;

fn keyed(
    set: &ReidemeisterSet,
    entries: &[(GroupElement, Linear)],
    path: &str,
    pull: &dyn Fn(&GroupElement) -> Option<GroupElement>,
    b: &Bundle,
) -> Result<KeyedTable, CliError> {
    let mut out: KeyedTable = Vec::new();
    for (i, (x, v)) in entries.iter().enumerate() {
        let y = pull(x).ok_or_else(|| CliError::Invalid(format!("{path}[{i}]: {} is not in Γ₂", b.target_name(x))))?;
        let k = set.class_of(&y);
        if let Some((_, _)) = out.iter().find(|(o, _)| *o == k) {
            return Err(CliError::Invalid(format!(
                "{path}[{i}]: class {} is listed twice",
                set.label(&k)
            )));
        }
        out.push((k, *v));
    }
    Ok(out)
}

fn at(table: &KeyedTable, k: i64) -> BTreeMap<ClassKey, i64> {
    table
        .iter()
        .map(|(c, v)| (c.clone(), v.at(k)))
        .filter(|(_, v)| *v != 0)
        .collect()
}

fn algebraic_averaging(b: &Bundle, cover: &CoverSpec, opts: &VerifyOptions, r: &mut Report) -> Result<Value, CliError> {
    let tables: &IndexTables = b
        .tables
        .as_ref()
        .ok_or_else(|| CliError::Usage("algebraic mode needs index_tables in the bundle".into()))?;
    let levels = lift_levels(cover)?;
    if tables.lifts.len() != levels.len() {
        return Err(CliError::Invalid(format!(
            "index_tables.lifts: expected {} lists, one per coset of Γ₂, got {}",
            levels.len(),
            tables.lifts.len()
        )));
    }
    let base = ReidemeisterSet::new(&b.phi, &b.psi)?;
    let same = |x: &GroupElement| Some(x.clone());
    let lhs = tables
        .lhs
        .as_ref()
        .map(|t| keyed(&base, t, "index_tables.lhs", &same, b))
        .transpose()?;
    let sub = &cover.side2().sub;
    let pull = |x: &GroupElement| sub.pull(x);
    let lifts = levels
        .iter()
        .zip(&tables.lifts)
        .enumerate()
        .map(|(q, (l, t))| keyed(&l.top, t, &format!("index_tables.lifts[{q}]"), &pull, b))
        .collect::<Result<Vec<_>, _>>()?;

    let (lo, hi) = if tables.is_symbolic() {
        opts.sweep
            .or(b.sweep)
            .ok_or_else(|| CliError::Usage("symbolic indices need a sweep range, e.g. --sweep -3..3".into()))?
    } else {
        (0, 0)
    };
    let options = AveragingOptions {
        shuffle_representatives: None,
        sabotage: opts.sabotage,
    };
    let name = |x: &GroupElement| b.target_name(x);
    let mut c = Checks::default();
    let mut runs = Vec::new();
    for k in lo..=hi {
        let lift_tables: Vec<_> = lifts.iter().map(|t| at(t, k)).collect();
        let lhs_table = lhs.as_ref().map(|t| at(t, k));
        let label = if tables.is_symbolic() {
            format!("k = {k}")
        } else {
            "averaging".to_string()
        };
        match algebraic_mode_verify(cover, &lift_tables, lhs_table.as_ref(), &options) {
            Ok(rep) => {
                if tables.is_symbolic() {
                    let verdict = if rep.passed() { "PASS" } else { "FAIL" };
                    r.line(format!("{label}: {}: {verdict}", averaging_detail(&rep, &name)));
                } else {
                    table_lines(r, &rep);
                }
                c.expect(&label, rep.passed(), averaging_detail(&rep, &name));
                diff_lines(r, &rep, &name);
                runs.push(json!({"k": k, "report": rep.to_json()}));
            }
            Err(e @ (Error::DivisionRemainder { .. } | Error::IdentityFailure(_))) => {
                r.line(format!("{label}: {e}"));
                c.expect(&label, false, e.to_string());
                runs.push(json!({"k": k, "error": e.to_string()}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    r.add_checks(c);
    Ok(json!({"mode": "algebraic", "sweep": tables.is_symbolic().then_some([lo, hi]), "runs": runs}))
}

pub fn verify_averaging(b: &Bundle, opts: &VerifyOptions) -> Result<Report, CliError> {
    let mut r = Report::new("verify-averaging", &b.name);
    let cover = cover_of(b)?;
    let mode = opts.mode.or(b.mode).unwrap_or(if b.maps.is_some() {
        Mode::Geometric
    } else {
        Mode::Algebraic
    });
    r.line(format!(
        "[Π₁ : Γ₁] = {}, [Π₂ : Γ₂] = {}",
        cover.index1(),
        cover.index2()
    ));
    let reps: Vec<String> = cover.coset_representatives().iter().map(|x| b.target_name(x)).collect();
    r.line(format!("coset representatives: {}", reps.join(", ")));
    if opts.sabotage {
        r.line("sabotage: one coefficient of the right-hand side is perturbed");
    }
    r.data = match mode {
        Mode::Geometric => geometric_averaging(b, &cover, opts.sabotage, &mut r)?,
        Mode::Algebraic => algebraic_averaging(b, &cover, opts, &mut r)?,
    };
    Ok(r)
}

pub fn selftest(ids: &[String]) -> Result<Report, CliError> {
    let ids: Vec<String> = if ids.is_empty() {
        CRITERIA.iter().map(|(id, _)| id.to_string()).collect()
    } else {
        ids.to_vec()
    };
    let mut r = Report::new("selftest", "acceptance suite");
    let mut c = Checks::default();
    let mut data = Vec::new();
    for id in &ids {
        let rep = run_criterion(id)?;
        let verdict = if rep.passed() { "PASS" } else { "FAIL" };
        r.line(format!(
            "{} {verdict} {} ({}, {:.1} s)",
            rep.id,
            rep.title,
            plural(rep.checks.len(), "check", "checks"),
            rep.elapsed.as_secs_f64()
        ));
        for f in rep.failures() {
            r.line(format!("    {}: {}", f.name, f.detail));
        }
        c.expect(
            &format!("{} {}", rep.id, rep.title),
            rep.passed(),
            format!("{} checks", rep.checks.len()),
        );
        data.push(rep.to_json());
    }
    r.add_checks(c);
    r.data = json!(data);
    Ok(r)
}
