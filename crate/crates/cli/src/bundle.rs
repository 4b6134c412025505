//! Input bundles: named groups, maps and cover data, parsed from JSON and
//! validated into library objects.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use coinrt::group_models::io::{cryst_group, ElementFile, GroupFile, HomFile, Int, Rat};
use coinrt::group_models::{CrystElement, Group, GroupElement, GroupHom, HomMap, SubgroupSpec, Sublattice};
use coinrt::lattice_alg::IntMatrix;
use coinrt::trace_geometry::{AffineMapSpec, Region, RegionBox};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Geometric,
    Algebraic,
}

/// An affine map between crystallographic groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    pub linear: Vec<Vec<Int>>,
    pub translation: Vec<Rat>,
    pub holonomy_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub source: String,
    pub target: String,
    pub map: HomFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub phi: String,
    pub psi: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupFile {
    /// `k` times the translation lattice.
    Scale { scale: i64 },
    /// Generators of a sublattice, one per row.
    Lattice { lattice: Vec<Vec<Int>> },
    /// Element indices of a finite group.
    Elements { elements: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub gamma1: SubgroupFile,
    pub gamma2: SubgroupFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    pub lo: Vec<Rat>,
    pub hi: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Finite(usize),
    Cryst(ElementFile),
}

/// An index, either an integer or `a*k + b` in the sweep variable `k`,
/// written like `"k"`, `"-2k"` or `"3k+1"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexValue {
    Fixed(i64),
    Symbolic(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexEntry {
    pub element: ElementSpec,
    pub index: IndexValue,
}

/// Indices for algebraic mode. `lhs` lists indices of `(f, g)` by elements
/// of the target; `lifts` holds one list per coset of `Γ₂`, in the order the
/// tool prints them, keyed by elements of `Γ₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexTablesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Vec<IndexEntry>>,
    pub lifts: Vec<Vec<IndexEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub groups: BTreeMap<String, GroupFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub element_names: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homomorphisms: BTreeMap<String, HomSpec>,
    pub pair: PairSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<Vec<BoxFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_tables: Option<IndexTablesFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<[i64; 2]>,
}

/// `a*k + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Linear {
    pub a: i64,
    pub b: i64,
}

impl Linear {
    pub fn at(&self, k: i64) -> i64 {
        self.a * k + self.b
    }
}

fn parse_coefficient(s: &str) -> Option<i64> {
    match s {
        "" | "+" => Some(1),
        "-" => Some(-1),
        _ => s.parse().ok(),
    }
}

pub fn parse_linear(text: &str) -> Option<Linear> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = s.find('k') else {
        return s.parse().ok().map(|b| Linear { a: 0, b });
    };
    let a = parse_coefficient(s[..pos].trim_end_matches('*'))?;
    let rest = &s[pos + 1..];
    let b = if rest.is_empty() { 0 } else { rest.parse().ok()? };
    Some(Linear { a, b })
}

#[derive(Clone, Debug)]
pub struct IndexTables {
    pub lhs: Option<Vec<(GroupElement, Linear)>>,
    pub lifts: Vec<Vec<(GroupElement, Linear)>>,
}

impl IndexTables {
    pub fn is_symbolic(&self) -> bool {
        let all = self.lhs.iter().flatten().chain(self.lifts.iter().flatten());
        all.into_iter().any(|(_, v)| v.a != 0)
    }
}

/// A validated bundle.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub name: String,
    pub phi: GroupHom,
    pub psi: GroupHom,
    /// Both maps of the pair, when they are affine maps.
    pub maps: Option<(AffineMapSpec, AffineMapSpec)>,
    pub cover: Option<(SubgroupSpec, SubgroupSpec)>,
    pub mode: Option<Mode>,
    pub regions: Vec<Region>,
    pub tables: Option<IndexTables>,
    pub sweep: Option<(i64, i64)>,
    pub source_names: Option<Vec<String>>,
    pub target_names: Option<Vec<String>>,
}

impl Bundle {
    pub fn geometric(&self) -> Result<&(AffineMapSpec, AffineMapSpec), CliError> {
        self.maps
            .as_ref()
            .ok_or_else(|| CliError::Usage("geometric mode needs a pair of affine maps; use --mode algebraic".into()))
    }

    pub fn cover(&self) -> Result<&(SubgroupSpec, SubgroupSpec), CliError> {
        self.cover
            .as_ref()
            .ok_or_else(|| CliError::Usage("the bundle has no cover data".into()))
    }

    /// Name of an element of the target group.
    pub fn target_name(&self, x: &GroupElement) -> String {
        name_in(self.phi.target(), self.target_names.as_deref(), x)
    }

    /// Name of an element of the source group.
    pub fn source_name(&self, x: &GroupElement) -> String {
        name_in(self.phi.source(), self.source_names.as_deref(), x)
    }
}

fn name_in(g: &Group, names: Option<&[String]>, x: &GroupElement) -> String {
    match (names, x) {
        (Some(n), GroupElement::Finite(i)) if *i < n.len() => n[*i].clone(),
        _ => g.format_element(x),
    }
}

fn int_rows(rows: &[Vec<Int>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|v| v.0.clone()).collect()).collect()
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{path}: {msg}"))
}

pub fn parse_bundle(text: &str) -> Result<BundleSpec, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn load_bundle(path: &Path) -> Result<Bundle, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let spec = parse_bundle(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    validate(&spec, &name)
}

fn lookup<'a>(groups: &'a BTreeMap<String, Group>, path: &str, name: &str) -> Result<&'a Group, CliError> {
    groups
        .get(name)
        .ok_or_else(|| invalid(path, format!("group '{name}' is not defined")))
}

fn element(g: &Group, path: &str, e: &ElementSpec) -> Result<GroupElement, CliError> {
    let x = match (g, e) {
        (Group::Finite(_), ElementSpec::Finite(i)) => GroupElement::Finite(*i),
        (Group::Cryst(_), ElementSpec::Cryst(f)) => GroupElement::Cryst(CrystElement::new(
            f.translation.iter().map(|v| v.0.clone()).collect(),
            f.holonomy,
        )),
        _ => return Err(invalid(path, "element does not match the kind of group")),
    };
    if !g.contains(&x) {
        return Err(invalid(path, format!("{x} is not an element of the group")));
    }
    Ok(x)
}

fn subgroup(g: &Group, path: &str, s: &SubgroupFile) -> Result<SubgroupSpec, CliError> {
    let spec = match s {
        SubgroupFile::Scale { scale } => {
            let c = g
                .as_cryst()
                .ok_or_else(|| invalid(path, "scale needs a crystallographic group"))?;
            SubgroupSpec::Lattice(Sublattice::scaled(c.dim(), *scale).map_err(|e| invalid(path, e))?)
        }
        SubgroupFile::Lattice { lattice } => {
            let m = IntMatrix::try_from_rows(&int_rows(lattice)).map_err(|e| invalid(path, e))?;
            SubgroupSpec::Lattice(Sublattice::new(&m).map_err(|e| invalid(path, e))?)
        }
        SubgroupFile::Elements { elements } => SubgroupSpec::Elements(elements.clone()),
    };
    coinrt::group_models::Subgroup::new(g, &spec).map_err(|e| invalid(path, e))?;
    Ok(spec)
}

fn index_entries(g: &Group, path: &str, entries: &[IndexEntry]) -> Result<Vec<(GroupElement, Linear)>, CliError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("{path}[{i}]");
            let x = element(g, &p, &e.element)?;
            let v = match &e.index {
                IndexValue::Fixed(v) => Linear { a: 0, b: *v },
                IndexValue::Symbolic(s) => {
                    parse_linear(s).ok_or_else(|| invalid(&p, format!("cannot read index '{s}'; expected a*k+b")))?
                }
            };
            Ok((x, v))
        })
        .collect()
}

pub fn validate(spec: &BundleSpec, fallback_name: &str) -> Result<Bundle, CliError> {
    if spec.schema_version != SCHEMA_VERSION {
        return Err(invalid(
            "schema_version",
            format!(
                "version {} is not supported (expected {SCHEMA_VERSION})",
                spec.schema_version
            ),
        ));
    }
    let mut groups = BTreeMap::new();
    for (name, g) in &spec.groups {
        groups.insert(
            name.clone(),
            g.build().map_err(|e| invalid(&format!("groups.{name}"), e))?,
        );
    }
    for (name, list) in &spec.element_names {
        let g = lookup(&groups, "element_names", name)?;
        if g.order() != Some(list.len()) {
            return Err(invalid(
                &format!("element_names.{name}"),
                "needs one name per element of a finite group",
            ));
        }
    }

    let mut homs: BTreeMap<String, (GroupHom, bool)> = BTreeMap::new();
    for (name, m) in &spec.maps {
        let path = format!("maps.{name}");
        let s = cryst_group(lookup(&groups, &path, &m.source)?).map_err(|e| invalid(&path, e))?;
        let t = cryst_group(lookup(&groups, &path, &m.target)?).map_err(|e| invalid(&path, e))?;
        let linear = IntMatrix::try_from_rows(&int_rows(&m.linear)).map_err(|e| invalid(&path, e))?;
        let translation = m.translation.iter().map(|v| v.0.clone()).collect();
        let spec =
            AffineMapSpec::new(&s, &t, linear, translation, m.holonomy_map.clone()).map_err(|e| invalid(&path, e))?;
        homs.insert(name.clone(), (spec.hom().clone(), true));
    }
    for (name, h) in &spec.homomorphisms {
        let path = format!("homomorphisms.{name}");
        if homs.contains_key(name) {
            return Err(invalid(&path, "name is already used by a map"));
        }
        let s = lookup(&groups, &path, &h.source)?;
        let t = lookup(&groups, &path, &h.target)?;
        let hom = h.map.build(s, t).map_err(|e| invalid(&path, e))?;
        let affine = matches!(hom.map(), HomMap::Affine { .. });
        homs.insert(name.clone(), (hom, affine));
    }
    let get = |field: &str, name: &str| {
        homs.get(name).cloned().ok_or_else(|| {
            invalid(
                &format!("pair.{field}"),
                format!("'{name}' is neither a map nor a homomorphism"),
            )
        })
    };
    let (phi, phi_affine) = get("phi", &spec.pair.phi)?;
    let (psi, psi_affine) = get("psi", &spec.pair.psi)?;
    if !phi.source().same(psi.source()) || !phi.target().same(psi.target()) {
        return Err(invalid("pair", "φ and ψ must share source and target"));
    }
    let maps = if phi_affine && psi_affine {
        Some((
            AffineMapSpec::from_hom(phi.clone()).map_err(|e| invalid("pair.phi", e))?,
            AffineMapSpec::from_hom(psi.clone()).map_err(|e| invalid("pair.psi", e))?,
        ))
    } else {
        None
    };

    let cover = spec
        .cover
        .as_ref()
        .map(|c| {
            Ok::<_, CliError>((
                subgroup(phi.source(), "cover.gamma1", &c.gamma1)?,
                subgroup(phi.target(), "cover.gamma2", &c.gamma2)?,
            ))
        })
        .transpose()?;

    let mut regions = Vec::new();
    for (i, boxes) in spec.regions.iter().enumerate() {
        let path = format!("regions[{i}]");
        let base = maps
            .as_ref()
            .map(|(f, _)| Arc::clone(f.source()))
            .ok_or_else(|| invalid(&path, "regions need a pair of affine maps"))?;
        let boxes = boxes
            .iter()
            .map(|b| {
                RegionBox::new(
                    b.lo.iter().map(|v| v.0.clone()).collect(),
                    b.hi.iter().map(|v| v.0.clone()).collect(),
                )
            })
            .collect::<coinrt::Result<Vec<_>>>()
            .map_err(|e| invalid(&path, e))?;
        regions.push(Region::new(&base, boxes).map_err(|e| invalid(&path, e))?);
    }

    let tables = spec
        .index_tables
        .as_ref()
        .map(|t| {
            let target = phi.target();
            let lhs = t
                .lhs
                .as_ref()
                .map(|l| index_entries(target, "index_tables.lhs", l))
                .transpose()?;
            let lifts = t
                .lifts
                .iter()
                .enumerate()
                .map(|(q, l)| index_entries(target, &format!("index_tables.lifts[{q}]"), l))
                .collect::<Result<Vec<_>, _>>()?;
            Ok::<_, CliError>(IndexTables { lhs, lifts })
        })
        .transpose()?;
    let sweep = spec.sweep.map(|[a, b]| (a, b));
    if let Some((a, b)) = sweep {
        if a > b {
            return Err(invalid("sweep", format!("empty range {a}..{b}")));
        }
    }

    let names = |g: &Group| {
        spec.groups
            .keys()
            .find(|k| groups[*k].same(g))
            .and_then(|k| spec.element_names.get(k).cloned())
    };
    Ok(Bundle {
        name: spec.name.clone().unwrap_or_else(|| fallback_name.to_string()),
        source_names: names(phi.source()),
        target_names: names(phi.target()),
        phi,
        psi,
        maps,
        cover,
        mode: spec.mode,
        regions,
        tables,
        sweep,
    })
}

/// Parses `a..b` or `a..=b`, both inclusive.
pub fn parse_sweep(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a range like -3..3, got '{s}'"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start '{a}'"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end '{b}'"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_forms() {
        let cases = [
            ("k", (1, 0)),
            ("-k", (-1, 0)),
            ("2k", (2, 0)),
            ("3*k+1", (3, 1)),
            ("-2k - 5", (-2, -5)),
            ("7", (0, 7)),
        ];
        for (s, (a, b)) in cases {
            assert_eq!(parse_linear(s), Some(Linear { a, b }), "{s}");
        }
        assert_eq!(parse_linear("k^2"), None);
        assert_eq!(parse_linear("x"), None);
    }

    #[test]
    fn sweep_ranges() {
        assert_eq!(parse_sweep("-3..3"), Ok((-3, 3)));
        assert_eq!(parse_sweep("0..=2"), Ok((0, 2)));
        assert!(parse_sweep("3..1").is_err());
        assert!(parse_sweep("3").is_err());
    }
}
