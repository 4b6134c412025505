//! Built-in bundles, written in the same form as bundle files.

use std::collections::BTreeMap;

use coinrt::acceptance::example2_sample_indices;
use coinrt::acceptance::instances::{geometric_example, GeometricInstance, GEOMETRIC_NAMES};
use coinrt::averaging::validate_cover;
use coinrt::group_models::catalog::{example1_bundle, example2_bundle, HomBundle};
use coinrt::group_models::io::{ElementFile, GroupFile, HomFile, Int, Rat};
use coinrt::group_models::{Group, GroupElement, GroupHom, SubgroupSpec};
use coinrt::lattice_alg::{rat, IntMatrix, Rational};
use coinrt::trace_geometry::AffineMapSpec;
use coinrt::Error;

use crate::bundle::{
    BoxFile, BundleSpec, CoverFile, ElementSpec, HomSpec, IndexEntry, IndexTablesFile, IndexValue, MapSpec, Mode,
    PairSpec, SubgroupFile, SCHEMA_VERSION,
};
use crate::error::CliError;

pub fn names() -> Vec<&'static str> {
    let mut out = vec!["example1", "example2"];
    out.extend(GEOMETRIC_NAMES);
    out
}

pub fn builtin(name: &str) -> Result<BundleSpec, CliError> {
    match name {
        "example1" => Ok(example1()),
        "example2" => example2(),
        _ => match geometric_example(name) {
            Ok(inst) => Ok(geometric(&inst)),
            Err(Error::UnknownName(_)) => Err(CliError::Usage(format!(
                "unknown example '{name}'; choose one of {}",
                names().join(", ")
            ))),
            Err(e) => Err(e.into()),
        },
    }
}

fn matrix(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Int).collect())
        .collect()
}

fn rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn map_spec(m: &AffineMapSpec, group: &str) -> MapSpec {
    MapSpec {
        source: group.into(),
        target: group.into(),
        linear: matrix(m.linear()),
        translation: rats(m.translation()),
        holonomy_map: m.holonomy_map().to_vec(),
    }
}

fn box_of(lo: &[Rational], hi: &[Rational]) -> BoxFile {
    BoxFile {
        lo: rats(lo),
        hi: rats(hi),
    }
}

fn geometric(inst: &GeometricInstance) -> BundleSpec {
    let n = inst.f.source().dim();
    let group = if inst.f.source().is_lattice_group() { "T" } else { "Pi" };
    let mut regions = vec![vec![box_of(&vec![rat(1, 7); n], &vec![rat(5, 7); n])]];
    if inst.name == "circle-reflection" {
        // an arc around 0 that wraps across the seam of the fundamental domain
        regions.push(vec![
            box_of(&[rat(3, 4)], &[rat(1, 1)]),
            box_of(&[rat(0, 1)], &[rat(1, 4)]),
        ]);
    }
    BundleSpec {
        schema_version: SCHEMA_VERSION,
        name: Some(inst.name.clone()),
        groups: BTreeMap::from([(
            group.to_string(),
            GroupFile::from_group(&Group::Cryst(inst.f.source().clone())),
        )]),
        element_names: BTreeMap::new(),
        maps: BTreeMap::from([
            ("f".to_string(), map_spec(&inst.f, group)),
            ("g".to_string(), map_spec(&inst.g, group)),
        ]),
        homomorphisms: BTreeMap::new(),
        pair: PairSpec {
            phi: "f".into(),
            psi: "g".into(),
        },
        cover: Some(CoverFile {
            gamma1: SubgroupFile::Scale { scale: inst.scale },
            gamma2: SubgroupFile::Scale { scale: inst.scale },
        }),
        mode: Some(Mode::Geometric),
        regions,
        index_tables: None,
        sweep: None,
    }
}

fn subgroup_file(spec: &SubgroupSpec) -> SubgroupFile {
    match spec {
        SubgroupSpec::Lattice(l) if l.is_full() => SubgroupFile::Scale { scale: 1 },
        SubgroupSpec::Lattice(l) => SubgroupFile::Lattice {
            lattice: matrix(&l.basis_matrix()),
        },
        SubgroupSpec::Elements(e) => SubgroupFile::Elements { elements: e.clone() },
    }
}

fn hom_spec(h: &GroupHom, source: &str, target: &str) -> HomSpec {
    HomSpec {
        source: source.into(),
        target: target.into(),
        map: HomFile::from_hom(h),
    }
}

fn element_spec(x: &GroupElement) -> ElementSpec {
    match x {
        GroupElement::Finite(i) => ElementSpec::Finite(*i),
        GroupElement::Cryst(c) => ElementSpec::Cryst(ElementFile {
            translation: c.translation.iter().cloned().map(Int).collect(),
            holonomy: c.holonomy,
        }),
    }
}

fn entry(x: &GroupElement, index: IndexValue) -> IndexEntry {
    IndexEntry {
        element: element_spec(x),
        index,
    }
}

fn algebraic(b: &HomBundle, source: &str, target: &str) -> BundleSpec {
    BundleSpec {
        schema_version: SCHEMA_VERSION,
        name: Some(b.name.clone()),
        groups: BTreeMap::from([
            (source.to_string(), GroupFile::from_group(b.phi.source())),
            (target.to_string(), GroupFile::from_group(b.phi.target())),
        ]),
        element_names: BTreeMap::new(),
        maps: BTreeMap::new(),
        homomorphisms: BTreeMap::from([
            ("phi".to_string(), hom_spec(&b.phi, source, target)),
            ("psi".to_string(), hom_spec(&b.psi, source, target)),
        ]),
        pair: PairSpec {
            phi: "phi".into(),
            psi: "psi".into(),
        },
        cover: Some(CoverFile {
            gamma1: subgroup_file(&b.gamma1),
            gamma2: subgroup_file(&b.gamma2),
        }),
        mode: Some(Mode::Algebraic),
        regions: Vec::new(),
        index_tables: None,
        sweep: None,
    }
}

/// `G₂ -> Z/2` with an unknown index `k` on the single class, at every level.
fn example1() -> BundleSpec {
    let b = example1_bundle();
    let mut spec = algebraic(&b, "G2", "Z2");
    spec.element_names = BTreeMap::from([("Z2".to_string(), vec!["1".to_string(), "β".to_string()])]);
    let one = b.phi.target().identity();
    let k = || IndexValue::Symbolic("k".into());
    // Γ₂ is trivial, so each of the two cosets has one lifted class
    spec.index_tables = Some(IndexTablesFile {
        lhs: Some(vec![entry(&one, k())]),
        lifts: vec![vec![entry(&one, k())], vec![entry(&one, k())]],
    });
    spec.sweep = Some([-3, 3]);
    spec
}

/// `Z/2 -> G₂` with sample indices; the double cover of the source doubles
/// every lifted index.
fn example2() -> Result<BundleSpec, CliError> {
    let b = example2_bundle();
    let mut spec = algebraic(&b, "Z2", "G2");
    spec.element_names = BTreeMap::from([("Z2".to_string(), vec!["1".to_string(), "β".to_string()])]);
    let cover = validate_cover(&b.phi, &b.psi, &b.gamma1, &b.gamma2)?;
    let target = b.phi.target();
    let mut lhs = Vec::new();
    let mut lifts = vec![Vec::new(); cover.index2()];
    for (x, m) in example2_sample_indices() {
        lhs.push(entry(&x, IndexValue::Fixed(m)));
        let q = cover.side2().quotient.project(&x);
        let gamma = target.mul(&x, &target.inv(&cover.coset_representatives()[q]));
        lifts[q].push(entry(&gamma, IndexValue::Fixed(2 * m)));
    }
    spec.index_tables = Some(IndexTablesFile { lhs: Some(lhs), lifts });
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::validate;

    #[test]
    fn every_builtin_validates_and_round_trips() {
        for name in names() {
            let spec = builtin(name).unwrap();
            let text = serde_json::to_string_pretty(&spec).unwrap();
            let back: BundleSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back, spec, "{name}");
            validate(&spec, name).unwrap();
        }
        assert!(matches!(builtin("klein"), Err(CliError::Usage(_))));
    }
}
