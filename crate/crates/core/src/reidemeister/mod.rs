//! Twisted conjugacy classes `R[φ, ψ]`, coincidence subgroups and the maps
//! between Reidemeister sets of a pair and of its covers.

mod coin;
mod cryst;
mod exact;
mod finite;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group_models::{CrystGroup, Group, GroupElement, GroupHom};
use crate::lattice_alg::{IntMatrix, QVector};

pub use coin::{coin_subgroup, projected_coin, CoinSubgroup};
pub use exact::{
    check_exactness, fiber_size, i_hat, orbit_stabilizer_identity, rho, rho_between, u_hat, CoverLevels,
    ExactnessReport, FiberCount, OrbitStabilizer,
};

use cryst::CrystClasses;
use finite::FiniteClasses;

/// Canonical name of a twisted class.
///
/// For a finite target `sector` is 0 and `coords` holds the least element
/// index of the class. For a crystallographic target `sector` is the least
/// holonomy index of the sector and `coords` the folded Smith coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub sector: usize,
    pub coords: Vec<BigInt>,
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}|{}]", self.sector, c.join(","))
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Finite(FiniteClasses),
    Cryst(CrystClasses),
}

/// `R[φ, ψ]` for homomorphisms `φ, ψ : Π₁ -> Π₂`.
#[derive(Clone, Debug)]
pub struct ReidemeisterSet {
    phi: GroupHom,
    psi: GroupHom,
    engine: Engine,
}

impl ReidemeisterSet {
    pub fn new(phi: &GroupHom, psi: &GroupHom) -> Result<Self> {
        if !phi.source().same(psi.source()) || !phi.target().same(psi.target()) {
            return Err(Error::MismatchedGroups("φ and ψ must share source and target".into()));
        }
        let engine = match phi.target() {
            Group::Finite(_) => Engine::Finite(finite::finite_classes(phi, psi)),
            Group::Cryst(_) => Engine::Cryst(CrystClasses::new(phi, psi)),
        };
        Ok(ReidemeisterSet {
            phi: phi.clone(),
            psi: psi.clone(),
            engine,
        })
    }

    pub fn phi(&self) -> &GroupHom {
        &self.phi
    }

    pub fn psi(&self) -> &GroupHom {
        &self.psi
    }

    pub fn target(&self) -> &Group {
        self.phi.target()
    }

    pub fn is_finite(&self) -> bool {
        match &self.engine {
            Engine::Finite(_) => true,
            Engine::Cryst(c) => c.is_finite(),
        }
    }

    /// Number of classes, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match &self.engine {
            Engine::Finite(f) => Some(f.reps.len()),
            Engine::Cryst(c) => c.sectors.iter().map(|s| s.classes.as_ref().map(Vec::len)).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Holonomy sectors whose translation quotient is infinite.
    pub fn degenerate_sectors(&self) -> Vec<usize> {
        match &self.engine {
            Engine::Finite(_) => Vec::new(),
            Engine::Cryst(c) => c.degenerate_sectors(),
        }
    }

    /// Sector representatives, increasing.
    pub fn sectors(&self) -> Vec<usize> {
        match &self.engine {
            Engine::Finite(_) => vec![0],
            Engine::Cryst(c) => c.sectors.iter().map(|s| s.rep).collect(),
        }
    }

    /// Invariant factors of the translation quotient of a sector.
    pub fn sector_invariants(&self, sector: usize) -> Option<(Vec<BigInt>, usize)> {
        match &self.engine {
            Engine::Finite(_) => None,
            Engine::Cryst(c) => c
                .sectors
                .iter()
                .find(|s| s.rep == sector)
                .map(|s| (s.quotient.invariant_factors(), s.quotient.free_rank())),
        }
    }

    /// All classes in increasing key order.
    pub fn classes(&self) -> Result<Vec<ClassKey>> {
        match &self.engine {
            Engine::Finite(f) => Ok(f
                .reps
                .iter()
                .map(|&r| ClassKey {
                    sector: 0,
                    coords: vec![BigInt::from(r)],
                })
                .collect()),
            Engine::Cryst(c) => {
                let mut out = Vec::new();
                for s in &c.sectors {
                    let Some(classes) = &s.classes else {
                        return Err(Error::Infinite(format!(
                            "holonomy sector {} has free rank {}",
                            s.rep,
                            s.quotient.free_rank()
                        )));
                    };
                    out.extend(classes.iter().map(|y| ClassKey {
                        sector: s.rep,
                        coords: y.clone(),
                    }));
                }
                Ok(out)
            }
        }
    }

    pub fn class_of(&self, x: &GroupElement) -> ClassKey {
        match (&self.engine, x) {
            (Engine::Finite(f), GroupElement::Finite(a)) => ClassKey {
                sector: 0,
                coords: vec![BigInt::from(f.reps[f.class_of[*a]])],
            },
            (Engine::Cryst(c), GroupElement::Cryst(a)) => {
                let (sector, coords) = c.class_of(&self.phi, &self.psi, a);
                ClassKey { sector, coords }
            }
            _ => panic!("element kind does not match the target group"),
        }
    }

    pub fn try_class_of(&self, x: &GroupElement) -> Result<ClassKey> {
        if !self.target().contains(x) {
            return Err(Error::MismatchedGroups(format!("{x} is not in the target group")));
        }
        Ok(self.class_of(x))
    }

    /// The canonical representative of a class; `None` for keys that do not
    /// name a class.
    pub fn representative(&self, key: &ClassKey) -> Option<GroupElement> {
        match &self.engine {
            Engine::Finite(f) => {
                let [r] = key.coords.as_slice() else { return None };
                let r: usize = r.try_into().ok()?;
                (key.sector == 0 && r < f.class_of.len() && f.reps[f.class_of[r]] == r)
                    .then_some(GroupElement::Finite(r))
            }
            Engine::Cryst(c) => c
                .is_canonical(key.sector, &key.coords)
                .then(|| GroupElement::Cryst(c.element(key.sector, &key.coords).expect("canonical"))),
        }
    }

    pub fn label(&self, key: &ClassKey) -> String {
        match self.representative(key) {
            Some(x) => format!("[{}]", self.target().format_element(&x)),
            None => format!("{key}?"),
        }
    }

    /// Class sizes for a finite target, in class order.
    pub fn class_sizes(&self) -> Option<&[usize]> {
        match &self.engine {
            Engine::Finite(f) => Some(&f.sizes),
            Engine::Cryst(_) => None,
        }
    }

    pub fn same_class(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.class_of(a) == self.class_of(b)
    }
}

/// Twisted classes for maps between finite groups.
pub fn twisted_classes_finite(phi: &GroupHom, psi: &GroupHom) -> Result<ReidemeisterSet> {
    if !phi.source().is_finite() || !phi.target().is_finite() {
        return Err(Error::MismatchedGroups("expected finite groups".into()));
    }
    ReidemeisterSet::new(phi, psi)
}

/// Twisted classes of the endomorphisms `x -> F x` and `x -> G x` of `Z^n`.
pub fn twisted_classes_lattice(f: &IntMatrix, g: &IntMatrix) -> Result<ReidemeisterSet> {
    let n = f.rows();
    if f.cols() != n || g.rows() != n || g.cols() != n {
        return Err(Error::Dimension("F and G must be square of the same size".into()));
    }
    let t = Arc::new(CrystGroup::torus(n));
    let zero: QVector = vec![num_rational::BigRational::default(); n];
    let phi = GroupHom::affine(&t, &t, f.clone(), zero.clone(), vec![0])?;
    let psi = GroupHom::affine(&t, &t, g.clone(), zero, vec![0])?;
    ReidemeisterSet::new(&phi, &psi)
}

/// Twisted classes for homomorphisms into a crystallographic group.
pub fn twisted_classes_cryst(phi: &GroupHom, psi: &GroupHom) -> Result<ReidemeisterSet> {
    if phi.target().is_finite() {
        return Err(Error::MismatchedGroups("expected a crystallographic target".into()));
    }
    ReidemeisterSet::new(phi, psi)
}
