use std::fmt;
use std::sync::Arc;

use super::cryst::{CrystElement, CrystGroup};
use super::finite::FiniteGroupTable;
use crate::error::{Error, Result};

/// Either kind of group model behind a cheap shared handle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Group {
    Finite(Arc<FiniteGroupTable>),
    Cryst(Arc<CrystGroup>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Finite(usize),
    Cryst(CrystElement),
}

impl From<FiniteGroupTable> for Group {
    fn from(g: FiniteGroupTable) -> Self {
        Group::Finite(Arc::new(g))
    }
}

impl From<CrystGroup> for Group {
    fn from(g: CrystGroup) -> Self {
        Group::Cryst(Arc::new(g))
    }
}

impl From<CrystElement> for GroupElement {
    fn from(x: CrystElement) -> Self {
        GroupElement::Cryst(x)
    }
}

impl Group {
    pub fn is_finite(&self) -> bool {
        matches!(self, Group::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Arc<FiniteGroupTable>> {
        match self {
            Group::Finite(g) => Some(g),
            Group::Cryst(_) => None,
        }
    }

    pub fn as_cryst(&self) -> Option<&Arc<CrystGroup>> {
        match self {
            Group::Cryst(g) => Some(g),
            Group::Finite(_) => None,
        }
    }

    /// Pointer identity, falling back to structural equality.
    pub fn same(&self, other: &Group) -> bool {
        match (self, other) {
            (Group::Finite(a), Group::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            (Group::Cryst(a), Group::Cryst(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.as_finite().map(|g| g.order())
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Finite(g) => GroupElement::Finite(g.identity()),
            Group::Cryst(g) => GroupElement::Cryst(g.identity()),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Group::Finite(g), GroupElement::Finite(a)) => *a < g.order(),
            (Group::Cryst(g), GroupElement::Cryst(a)) => g.contains(a),
            _ => false,
        }
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::MismatchedGroups(format!(
                "{x:?} is not an element of this group"
            )))
        }
    }

    pub fn try_mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Product; panics on elements of the wrong kind. Use
    /// [`Group::try_mul`] for unchecked input.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (Group::Finite(g), GroupElement::Finite(x), GroupElement::Finite(y)) => GroupElement::Finite(g.mul(*x, *y)),
            (Group::Cryst(g), GroupElement::Cryst(x), GroupElement::Cryst(y)) => GroupElement::Cryst(g.mul(x, y)),
            _ => panic!("group element kind mismatch"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (Group::Finite(g), GroupElement::Finite(x)) => GroupElement::Finite(g.inv(*x)),
            (Group::Cryst(g), GroupElement::Cryst(x)) => GroupElement::Cryst(g.inv(x)),
            _ => panic!("group element kind mismatch"),
        }
    }

    pub fn mul3(&self, a: &GroupElement, b: &GroupElement, c: &GroupElement) -> GroupElement {
        self.mul(&self.mul(a, b), c)
    }

    /// `g x g^-1`
    pub fn conjugate(&self, g: &GroupElement, x: &GroupElement) -> GroupElement {
        self.mul3(g, x, &self.inv(g))
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            Group::Finite(g) => g.generators().into_iter().map(GroupElement::Finite).collect(),
            Group::Cryst(g) => g.generators().into_iter().map(GroupElement::Cryst).collect(),
        }
    }

    /// All elements of a finite group in index order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.as_finite()
            .map(|g| (0..g.order()).map(GroupElement::Finite).collect())
    }

    pub fn random_element(&self, rng: &mut impl rand::Rng, bound: i64) -> GroupElement {
        match self {
            Group::Finite(g) => GroupElement::Finite(rng.gen_range(0..g.order())),
            Group::Cryst(g) => GroupElement::Cryst(g.random_element(rng, bound)),
        }
    }

    pub fn format_element(&self, x: &GroupElement) -> String {
        match (self, x) {
            (Group::Cryst(g), GroupElement::Cryst(a)) => g.format_element(a),
            _ => x.to_string(),
        }
    }
}

impl GroupElement {
    pub fn as_finite(&self) -> Option<usize> {
        match self {
            GroupElement::Finite(a) => Some(*a),
            GroupElement::Cryst(_) => None,
        }
    }

    pub fn as_cryst(&self) -> Option<&CrystElement> {
        match self {
            GroupElement::Cryst(a) => Some(a),
            GroupElement::Finite(_) => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Finite(a) => write!(f, "g{a}"),
            GroupElement::Cryst(a) => write!(f, "{a}"),
        }
    }
}
