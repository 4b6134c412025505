//! Finite-index normal subgroups, their quotients, and the restriction and
//! descent of homomorphisms along them.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::cryst::{CrystElement, CrystGroup};
use super::finite::FiniteGroupTable;
use super::group::{Group, GroupElement};
use super::hom::{GroupHom, HomMap};
use super::sublattice::Sublattice;
use crate::error::{Error, Result};

/// How a subgroup is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    /// Invariant sublattice of the translation lattice.
    Lattice(Sublattice),
    /// Element indices of a normal subgroup of a finite group.
    Elements(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SubKind {
    Lattice(Sublattice),
    Finite {
        elements: Vec<usize>,
        position: Vec<Option<usize>>,
    },
}

/// A finite-index normal subgroup `Γ ⊆ Π`, also available as a group in its
/// own right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: Group,
    group: Group,
    kind: SubKind,
}

impl Subgroup {
    pub fn new(ambient: &Group, spec: &SubgroupSpec) -> Result<Self> {
        match (ambient, spec) {
            (Group::Cryst(c), SubgroupSpec::Lattice(l)) => Self::lattice(c, l.clone()),
            (Group::Finite(f), SubgroupSpec::Elements(e)) => Self::finite(f, e.clone()),
            _ => Err(Error::InvalidGroup(
                "lattice subgroups need a crystallographic group, element lists a finite one".into(),
            )),
        }
    }

    pub fn lattice(ambient: &Arc<CrystGroup>, l: Sublattice) -> Result<Self> {
        if l.dim() != ambient.dim() {
            return Err(Error::Dimension("sublattice dimension".into()));
        }
        if !ambient.lattice().contains_lattice(&l) {
            return Err(Error::Containment(format!(
                "sublattice {} is not inside the translation lattice",
                l.hnf()
            )));
        }
        for (h, a) in ambient.rotations().iter().enumerate() {
            if !l.is_invariant(a) {
                return Err(Error::NotInvariant(format!(
                    "sublattice {} is not invariant under the rotation part of holonomy element {h}",
                    l.hnf()
                )));
            }
        }
        Ok(Self {
            ambient: Group::Cryst(Arc::clone(ambient)),
            group: Group::Cryst(Arc::new(CrystGroup::lattice_group(l.clone()))),
            kind: SubKind::Lattice(l),
        })
    }

    pub fn finite(ambient: &Arc<FiniteGroupTable>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if !ambient.is_normal(&elements) {
            return Err(Error::NotInvariant(format!("{elements:?} is not a normal subgroup")));
        }
        let mut position = vec![None; ambient.order()];
        for (i, &x) in elements.iter().enumerate() {
            position[x] = Some(i);
        }
        let rows = elements
            .iter()
            .map(|&a| {
                elements
                    .iter()
                    .map(|&b| position[ambient.mul(a, b)].expect("closed"))
                    .collect()
            })
            .collect();
        Ok(Self {
            ambient: Group::Finite(Arc::clone(ambient)),
            group: Group::Finite(Arc::new(FiniteGroupTable::new(rows)?)),
            kind: SubKind::Finite { elements, position },
        })
    }

    /// The whole group (finite) or the whole translation lattice.
    pub fn full(ambient: &Group) -> Result<Self> {
        match ambient {
            Group::Finite(f) => Self::finite(f, (0..f.order()).collect()),
            Group::Cryst(c) => Self::lattice(c, c.lattice().clone()),
        }
    }

    pub fn trivial(ambient: &Arc<FiniteGroupTable>) -> Result<Self> {
        Self::finite(ambient, vec![ambient.identity()])
    }

    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    /// `Γ` as a group.
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn sublattice(&self) -> Option<&Sublattice> {
        match &self.kind {
            SubKind::Lattice(l) => Some(l),
            SubKind::Finite { .. } => None,
        }
    }

    pub fn elements(&self) -> Option<&[usize]> {
        match &self.kind {
            SubKind::Finite { elements, .. } => Some(elements),
            SubKind::Lattice(_) => None,
        }
    }

    /// Inclusion `Γ -> Π`.
    pub fn include(&self, x: &GroupElement) -> GroupElement {
        match (&self.kind, x) {
            (SubKind::Finite { elements, .. }, GroupElement::Finite(i)) => GroupElement::Finite(elements[*i]),
            (SubKind::Lattice(_), GroupElement::Cryst(a)) => {
                let c = self.ambient.as_cryst().expect("cryst");
                GroupElement::Cryst(c.translation(a.translation.clone()))
            }
            _ => panic!("element kind does not match subgroup"),
        }
    }

    /// Preimage under the inclusion, if `x ∈ Γ`.
    pub fn pull(&self, x: &GroupElement) -> Option<GroupElement> {
        match (&self.kind, x) {
            (SubKind::Finite { position, .. }, GroupElement::Finite(i)) => position[*i].map(GroupElement::Finite),
            (SubKind::Lattice(l), GroupElement::Cryst(a)) => {
                let c = self.ambient.as_cryst().expect("cryst");
                (a.holonomy == c.holonomy().identity() && l.contains(&a.translation))
                    .then(|| GroupElement::Cryst(CrystElement::new(a.translation.clone(), 0)))
            }
            _ => None,
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.pull(x).is_some()
    }

    /// `[Π : Γ]`.
    pub fn index(&self) -> BigInt {
        match (&self.kind, &self.ambient) {
            (SubKind::Finite { elements, .. }, Group::Finite(f)) => BigInt::from(f.order() / elements.len()),
            (SubKind::Lattice(l), Group::Cryst(c)) => {
                l.relative_index(c.lattice()) * BigInt::from(c.holonomy().order())
            }
            _ => unreachable!(),
        }
    }

    /// The inclusion as a homomorphism.
    pub fn inclusion_hom(&self) -> Result<GroupHom> {
        let map = match (&self.kind, &self.ambient) {
            (SubKind::Finite { elements, .. }, _) => HomMap::Table(elements.clone()),
            (SubKind::Lattice(_), Group::Cryst(c)) => HomMap::Affine {
                linear: crate::lattice_alg::IntMatrix::identity(c.dim()),
                translation: vec![Default::default(); c.dim()],
                holonomy_map: vec![c.holonomy().identity()],
            },
            _ => unreachable!(),
        };
        GroupHom::new(self.group.clone(), self.ambient.clone(), map)
    }
}

/// `Π / Γ` as a finite table with canonical coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    ambient: Group,
    group: Group,
    reps: Vec<GroupElement>,
    lookup: QuotientLookup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum QuotientLookup {
    Finite(Vec<usize>),
    Lattice {
        sub: Sublattice,
        per_holonomy: usize,
        index: HashMap<Vec<BigInt>, usize>,
    },
}

impl FiniteQuotient {
    pub fn new(sub: &Subgroup) -> Result<Self> {
        match (&sub.kind, &sub.ambient) {
            (SubKind::Finite { elements, .. }, Group::Finite(f)) => {
                let q = f.quotient(elements)?;
                Ok(Self {
                    ambient: sub.ambient.clone(),
                    group: Group::Finite(Arc::new(q.table)),
                    reps: q.representatives.into_iter().map(GroupElement::Finite).collect(),
                    lookup: QuotientLookup::Finite(q.projection),
                })
            }
            (SubKind::Lattice(l), Group::Cryst(c)) => {
                let lattice_reps = l.coset_representatives_in(c.lattice())?;
                let per_holonomy = lattice_reps.len();
                let index: HashMap<Vec<BigInt>, usize> =
                    lattice_reps.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
                let reps: Vec<GroupElement> = (0..c.holonomy().order())
                    .flat_map(|h| {
                        lattice_reps
                            .iter()
                            .map(move |v| GroupElement::Cryst(CrystElement::new(v.clone(), h)))
                    })
                    .collect();
                let lookup = QuotientLookup::Lattice {
                    sub: l.clone(),
                    per_holonomy,
                    index,
                };
                let project = |x: &GroupElement| project_lattice(&lookup, x);
                let rows = reps
                    .iter()
                    .map(|a| reps.iter().map(|b| project(&sub.ambient.mul(a, b))).collect())
                    .collect();
                Ok(Self {
                    ambient: sub.ambient.clone(),
                    group: Group::Finite(Arc::new(FiniteGroupTable::new(rows)?)),
                    reps,
                    lookup,
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn table(&self) -> &Arc<FiniteGroupTable> {
        self.group.as_finite().expect("finite quotient")
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn project(&self, x: &GroupElement) -> usize {
        match &self.lookup {
            QuotientLookup::Finite(p) => p[x.as_finite().expect("finite element")],
            lookup => project_lattice(lookup, x),
        }
    }

    /// Canonical representative of a coset.
    pub fn representative(&self, q: usize) -> &GroupElement {
        &self.reps[q]
    }

    pub fn representatives(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn projection_hom(&self) -> Result<GroupHom> {
        let map = match &self.ambient {
            Group::Finite(f) => HomMap::Table((0..f.order()).map(|a| self.project(&GroupElement::Finite(a))).collect()),
            Group::Cryst(c) => HomMap::ToFinite {
                translation_images: c
                    .lattice()
                    .basis()
                    .into_iter()
                    .map(|b| self.project(&GroupElement::Cryst(c.translation(b))))
                    .collect(),
                holonomy_images: (0..c.holonomy().order())
                    .map(|h| {
                        self.project(&GroupElement::Cryst(CrystElement::new(
                            vec![BigInt::default(); c.dim()],
                            h,
                        )))
                    })
                    .collect(),
            },
        };
        GroupHom::new(self.ambient.clone(), self.group.clone(), map)
    }
}

fn project_lattice(lookup: &QuotientLookup, x: &GroupElement) -> usize {
    let QuotientLookup::Lattice {
        sub,
        per_holonomy,
        index,
    } = lookup
    else {
        unreachable!()
    };
    let a = x.as_cryst().expect("cryst element");
    a.holonomy * per_holonomy + index[&sub.reduce(&a.translation)]
}

/// A subgroup together with its quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSide {
    pub sub: Subgroup,
    pub quotient: FiniteQuotient,
}

impl CoverSide {
    pub fn new(ambient: &Group, spec: &SubgroupSpec) -> Result<Self> {
        let sub = Subgroup::new(ambient, spec)?;
        let quotient = FiniteQuotient::new(&sub)?;
        Ok(Self { sub, quotient })
    }

    pub fn from_subgroup(sub: Subgroup) -> Result<Self> {
        let quotient = FiniteQuotient::new(&sub)?;
        Ok(Self { sub, quotient })
    }

    pub fn ambient(&self) -> &Group {
        self.sub.ambient()
    }
}

/// Restriction `φ' : Γ₁ -> Γ₂` and descent `φ̄ : Π₁/Γ₁ -> Π₂/Γ₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restricted {
    pub restricted: GroupHom,
    pub descended: GroupHom,
}

/// Restricts `φ` to `Γ₁ -> Γ₂` and descends it to the quotients; the
/// containment `φ(Γ₁) ⊆ Γ₂` is checked and both squares are verified on
/// generators.
pub fn restrict_and_descend(phi: &GroupHom, side1: &CoverSide, side2: &CoverSide) -> Result<Restricted> {
    if !phi.source().same(side1.ambient()) || !phi.target().same(side2.ambient()) {
        return Err(Error::MismatchedGroups("cover data belongs to other groups".into()));
    }
    let restricted = restrict(phi, &side1.sub, &side2.sub)?;
    let descended = descend(phi, side1, side2)?;
    Ok(Restricted { restricted, descended })
}

pub fn restrict(phi: &GroupHom, sub1: &Subgroup, sub2: &Subgroup) -> Result<GroupHom> {
    let g1 = sub1.group();
    let pull = |x: &GroupElement| -> Result<GroupElement> {
        let y = phi.eval(&sub1.include(x));
        sub2.pull(&y).ok_or_else(|| {
            Error::Containment(format!(
                "{} in Γ₁ maps to {} outside Γ₂",
                sub1.ambient().format_element(&sub1.include(x)),
                phi.target().format_element(&y)
            ))
        })
    };
    for g in g1.generators() {
        pull(&g)?;
    }
    let map = match (g1, sub2.group()) {
        (Group::Finite(f), target) => {
            let images = (0..f.order())
                .map(|i| pull(&GroupElement::Finite(i)))
                .collect::<Result<Vec<_>>>()?;
            if target.is_finite() {
                HomMap::Table(images.iter().map(|x| x.as_finite().expect("finite")).collect())
            } else {
                HomMap::FromFinite(images.iter().map(|x| x.as_cryst().expect("cryst").clone()).collect())
            }
        }
        (Group::Cryst(c), Group::Cryst(_)) => {
            let (linear, translation, _) = phi
                .affine_parts()
                .ok_or_else(|| Error::InvalidHom("expected an affinely induced map".into()))?;
            HomMap::Affine {
                linear: linear.clone(),
                translation: translation.clone(),
                holonomy_map: vec![0; c.holonomy().order()],
            }
        }
        (Group::Cryst(c), Group::Finite(t)) => HomMap::ToFinite {
            translation_images: c
                .lattice()
                .basis()
                .into_iter()
                .map(|b| pull(&GroupElement::Cryst(c.translation(b))).map(|x| x.as_finite().expect("finite")))
                .collect::<Result<Vec<_>>>()?,
            holonomy_images: vec![t.identity()],
        },
    };
    let restricted = GroupHom::new(g1.clone(), sub2.group().clone(), map)?;
    for g in g1.generators() {
        if sub2.include(&restricted.eval(&g)) != phi.eval(&sub1.include(&g)) {
            return Err(Error::IdentityFailure(
                "restriction does not commute with inclusion".into(),
            ));
        }
    }
    Ok(restricted)
}

pub fn descend(phi: &GroupHom, side1: &CoverSide, side2: &CoverSide) -> Result<GroupHom> {
    for g in side1.sub.group().generators() {
        let y = phi.eval(&side1.sub.include(&g));
        if !side2.sub.contains(&y) {
            return Err(Error::Containment(format!(
                "{} in Γ₁ maps to {} outside Γ₂",
                phi.source().format_element(&side1.sub.include(&g)),
                phi.target().format_element(&y)
            )));
        }
    }
    let images = side1
        .quotient
        .representatives()
        .iter()
        .map(|r| side2.quotient.project(&phi.eval(r)))
        .collect();
    let descended = GroupHom::new(
        side1.quotient.group().clone(),
        side2.quotient.group().clone(),
        HomMap::Table(images),
    )?;
    for g in phi.source().generators() {
        let lhs = side2.quotient.project(&phi.eval(&g));
        let rhs = descended.eval(&GroupElement::Finite(side1.quotient.project(&g)));
        if GroupElement::Finite(lhs) != rhs {
            return Err(Error::IdentityFailure(
                "descent does not commute with projection".into(),
            ));
        }
    }
    Ok(descended)
}
