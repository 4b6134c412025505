//! JSON forms of groups and homomorphisms.
//!
//! Integers are JSON numbers when they fit in 64 bits and decimal strings
//! otherwise; rationals are strings `"p/q"` or `"p"`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cryst::{CrystElement, CrystGroup};
use super::finite::FiniteGroupTable;
use super::group::Group;
use super::hom::{GroupHom, HomMap};
use super::sublattice::Sublattice;
use crate::error::{Error, Result};
use crate::lattice_alg::{format_rational, parse_rational, IntMatrix, QVector, Rational};

/// An exact integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Int(v.into())),
            Raw::Str(s) => s
                .trim()
                .parse()
                .map(Int)
                .map_err(|_| D::Error::custom(format!("invalid integer '{s}'"))),
        }
    }
}

/// An exact rational, written `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Rat).map_err(|e| D::Error::custom(e.to_string()))
    }
}

fn ints_of(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

fn bigints(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn rats_of(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn rationals(v: &[Rat]) -> QVector {
    v.iter().map(|x| x.0.clone()).collect()
}

fn matrix_of(m: &IntMatrix) -> Vec<Vec<Int>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Int(m.get(i, j).clone())).collect())
        .collect()
}

fn build_matrix(rows: &[Vec<Int>], n: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{what} must be a {n}x{n} matrix")));
    }
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| bigints(r)).collect();
    Ok(IntMatrix::from_rows(&rows))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

/// A crystallographic group. `lattice` lists basis vectors as rows and
/// defaults to `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystGroupFile {
    pub dimension: usize,
    pub holonomy: HolonomyFile,
    pub rotation_parts: Vec<Vec<Vec<Int>>>,
    pub translation_parts: Vec<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<Int>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupFile {
    Cryst(CrystGroupFile),
    Finite(FiniteGroupFile),
}

fn table_rows(t: &FiniteGroupTable) -> Vec<Vec<usize>> {
    (0..t.order())
        .map(|a| (0..t.order()).map(|b| t.mul(a, b)).collect())
        .collect()
}

fn build_table(order: usize, table: &[Vec<usize>]) -> Result<FiniteGroupTable> {
    if table.len() != order {
        return Err(Error::Parse(format!(
            "table has {} rows, order is {order}",
            table.len()
        )));
    }
    FiniteGroupTable::new(table.to_vec())
}

impl GroupFile {
    pub fn from_group(g: &Group) -> Self {
        match g {
            Group::Finite(t) => GroupFile::Finite(FiniteGroupFile {
                order: t.order(),
                table: table_rows(t),
            }),
            Group::Cryst(c) => {
                let lattice = if c.lattice().is_full() {
                    None
                } else {
                    Some(c.lattice().basis().iter().map(|b| ints_of(b)).collect())
                };
                GroupFile::Cryst(CrystGroupFile {
                    dimension: c.dim(),
                    holonomy: HolonomyFile {
                        order: c.holonomy().order(),
                        table: table_rows(c.holonomy()),
                    },
                    rotation_parts: c.rotations().iter().map(matrix_of).collect(),
                    translation_parts: c.translations().iter().map(|t| rats_of(t)).collect(),
                    lattice,
                    orientable: Some(c.is_orientable()),
                })
            }
        }
    }

    pub fn build(&self) -> Result<Group> {
        match self {
            GroupFile::Finite(f) => Ok(build_table(f.order, &f.table)?.into()),
            GroupFile::Cryst(c) => {
                let n = c.dimension;
                let holonomy = build_table(c.holonomy.order, &c.holonomy.table)?;
                let rotations = c
                    .rotation_parts
                    .iter()
                    .enumerate()
                    .map(|(h, m)| build_matrix(m, n, &format!("rotation part {h}")))
                    .collect::<Result<Vec<_>>>()?;
                let translations: Vec<QVector> = c.translation_parts.iter().map(|t| rationals(t)).collect();
                if translations.iter().any(|t| t.len() != n) {
                    return Err(Error::Parse(format!("translation parts must have length {n}")));
                }
                let lattice = match &c.lattice {
                    None => Sublattice::full(n),
                    Some(rows) => {
                        if rows.iter().any(|r| r.len() != n) {
                            return Err(Error::Parse(format!("lattice vectors must have length {n}")));
                        }
                        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| bigints(r)).collect();
                        Sublattice::new(&IntMatrix::from_rows(&rows))?
                    }
                };
                let g = match c.orientable {
                    Some(o) => CrystGroup::with_orientation(lattice, holonomy, rotations, translations, o)?,
                    None => CrystGroup::new(lattice, holonomy, rotations, translations)?,
                };
                Ok(g.into())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    pub translation: Vec<Int>,
    pub holonomy: usize,
}

/// Homomorphism data; the groups are supplied separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum HomFile {
    Affine {
        linear: Vec<Vec<Int>>,
        translation: Vec<Rat>,
        holonomy_map: Vec<usize>,
    },
    Table {
        table: Vec<usize>,
    },
    ToFinite {
        translation_images: Vec<usize>,
        holonomy_images: Vec<usize>,
    },
    FromFinite {
        images: Vec<ElementFile>,
    },
}

impl HomFile {
    pub fn from_hom(h: &GroupHom) -> Self {
        match h.map() {
            HomMap::Table(t) => HomFile::Table { table: t.clone() },
            HomMap::Affine {
                linear,
                translation,
                holonomy_map,
            } => HomFile::Affine {
                linear: matrix_of(linear),
                translation: rats_of(translation),
                holonomy_map: holonomy_map.clone(),
            },
            HomMap::ToFinite {
                translation_images,
                holonomy_images,
            } => HomFile::ToFinite {
                translation_images: translation_images.clone(),
                holonomy_images: holonomy_images.clone(),
            },
            HomMap::FromFinite(images) => HomFile::FromFinite {
                images: images
                    .iter()
                    .map(|x| ElementFile {
                        translation: ints_of(&x.translation),
                        holonomy: x.holonomy,
                    })
                    .collect(),
            },
        }
    }

    pub fn build(&self, source: &Group, target: &Group) -> Result<GroupHom> {
        let map = match self {
            HomFile::Table { table } => HomMap::Table(table.clone()),
            HomFile::Affine {
                linear,
                translation,
                holonomy_map,
            } => {
                let n = target.as_cryst().map(|c| c.dim()).unwrap_or(0);
                HomMap::Affine {
                    linear: build_matrix(linear, n, "linear part")?,
                    translation: rationals(translation),
                    holonomy_map: holonomy_map.clone(),
                }
            }
            HomFile::ToFinite {
                translation_images,
                holonomy_images,
            } => HomMap::ToFinite {
                translation_images: translation_images.clone(),
                holonomy_images: holonomy_images.clone(),
            },
            HomFile::FromFinite { images } => HomMap::FromFinite(
                images
                    .iter()
                    .map(|e| CrystElement::new(bigints(&e.translation), e.holonomy))
                    .collect(),
            ),
        };
        GroupHom::new(source.clone(), target.clone(), map)
    }
}

pub fn group_to_json(g: &Group) -> String {
    serde_json::to_string_pretty(&GroupFile::from_group(g)).expect("serializable")
}

pub fn group_from_json(s: &str) -> Result<Group> {
    let f: GroupFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    f.build()
}

pub fn hom_to_json(h: &GroupHom) -> String {
    serde_json::to_string_pretty(&HomFile::from_hom(h)).expect("serializable")
}

pub fn hom_from_json(s: &str, source: &Group, target: &Group) -> Result<GroupHom> {
    let f: HomFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    f.build(source, target)
}

/// Shares the group behind an `Arc`, for callers holding a crystallographic
/// group directly.
pub fn cryst_group(g: &Group) -> Result<Arc<CrystGroup>> {
    g.as_cryst()
        .cloned()
        .ok_or_else(|| Error::InvalidGroup("expected a crystallographic group".into()))
}
