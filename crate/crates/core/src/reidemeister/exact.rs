//! The maps `ρ`, `î`, `û` between Reidemeister sets of a pair, its lift to
//! the covers and its descent to the finite quotients, and the counting
//! identities relating them.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::coin::{coin_subgroup, exact_ratio, projected_coin};
use super::{ClassKey, ReidemeisterSet};
use crate::error::{Error, Result};
use crate::group_models::{restrict_and_descend, CoverSide, Group, GroupElement, GroupHom, Restricted};

/// Reidemeister sets at every level for one twist `β ∈ Π₂`.
#[derive(Clone, Debug)]
pub struct CoverLevels {
    pub side1: CoverSide,
    pub side2: CoverSide,
    pub beta: GroupElement,
    /// Image of `β` in `Π₂ / Γ₂`.
    pub beta_bar: usize,
    /// `τ_β φ`.
    pub phi_beta: GroupHom,
    pub psi: GroupHom,
    pub phi_beta_parts: Restricted,
    pub psi_parts: Restricted,
    /// `R[φ, ψ]`.
    pub base: ReidemeisterSet,
    /// `R[τ_β φ, ψ]`.
    pub middle: ReidemeisterSet,
    /// `R[(τ_β φ)', ψ']` on `Γ₁ -> Γ₂`.
    pub top: ReidemeisterSet,
    /// `R[τ_β̄ φ̄, ψ̄]` on the quotients.
    pub bottom: ReidemeisterSet,
}

impl CoverLevels {
    pub fn new(
        phi: &GroupHom,
        psi: &GroupHom,
        side1: &CoverSide,
        side2: &CoverSide,
        beta: &GroupElement,
    ) -> Result<Self> {
        let base = ReidemeisterSet::new(phi, psi)?;
        let phi_beta = phi.conjugate(beta)?;
        let phi_beta_parts = restrict_and_descend(&phi_beta, side1, side2)?;
        let psi_parts = restrict_and_descend(psi, side1, side2)?;
        let middle = ReidemeisterSet::new(&phi_beta, psi)?;
        let top = ReidemeisterSet::new(&phi_beta_parts.restricted, &psi_parts.restricted)?;
        let bottom = ReidemeisterSet::new(&phi_beta_parts.descended, &psi_parts.descended)?;
        Ok(CoverLevels {
            side1: side1.clone(),
            side2: side2.clone(),
            beta: beta.clone(),
            beta_bar: side2.quotient.project(beta),
            phi_beta,
            psi: psi.clone(),
            phi_beta_parts,
            psi_parts,
            base,
            middle,
            top,
            bottom,
        })
    }

    fn target(&self) -> &Group {
        self.psi.target()
    }

    /// Class of the identity coset in the bottom set.
    pub fn bottom_identity(&self) -> ClassKey {
        self.bottom.class_of(&self.bottom.target().identity())
    }
}

fn rep(set: &ReidemeisterSet, key: &ClassKey) -> Result<GroupElement> {
    set.representative(key)
        .ok_or_else(|| Error::MismatchedGroups(format!("{key} does not name a class")))
}

/// `[x] -> [x β]` from `R[τ_β φ, ψ]` to `R[φ, ψ]`, for any pair of sets
/// related by that twist.
pub fn rho_between(
    from: &ReidemeisterSet,
    to: &ReidemeisterSet,
    beta: &GroupElement,
    key: &ClassKey,
) -> Result<ClassKey> {
    let x = rep(from, key)?;
    Ok(to.class_of(&to.target().mul(&x, beta)))
}

/// `ρ_β : R[τ_β φ, ψ] -> R[φ, ψ]`, `[x] -> [x β]`.
pub fn rho(levels: &CoverLevels, key: &ClassKey) -> Result<ClassKey> {
    rho_between(&levels.middle, &levels.base, &levels.beta, key)
}

/// `î : R[(τ_β φ)', ψ'] -> R[τ_β φ, ψ]` induced by inclusion.
pub fn i_hat(levels: &CoverLevels, key: &ClassKey) -> Result<ClassKey> {
    let x = rep(&levels.top, key)?;
    Ok(levels.middle.class_of(&levels.side2.sub.include(&x)))
}

/// `û : R[τ_β φ, ψ] -> R[τ_β̄ φ̄, ψ̄]` induced by projection.
pub fn u_hat(levels: &CoverLevels, key: &ClassKey) -> Result<ClassKey> {
    let x = rep(&levels.middle, key)?;
    let q = levels.side2.quotient.project(&x);
    Ok(levels.bottom.class_of(&GroupElement::Finite(q)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    /// All classes were enumerated (otherwise a box of elements was sampled).
    pub exhaustive: bool,
    pub checked: usize,
    pub surjective: bool,
    /// Elements or classes where `im î` and `û⁻¹([1̄])` disagree.
    pub mismatches: Vec<String>,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.surjective && self.mismatches.is_empty()
    }
}

fn u_hat_surjective(levels: &CoverLevels) -> Result<bool> {
    let all: BTreeSet<ClassKey> = levels.bottom.classes()?.into_iter().collect();
    let hit: BTreeSet<ClassKey> = if levels.middle.is_finite() {
        levels
            .middle
            .classes()?
            .iter()
            .map(|k| u_hat(levels, k))
            .collect::<Result<_>>()?
    } else {
        // lift each coset and push the lifted class back down
        let q = &levels.side2.quotient;
        (0..q.order())
            .map(|i| u_hat(levels, &levels.middle.class_of(q.representative(i))))
            .collect::<Result<_>>()?
    };
    Ok(hit == all)
}

/// Twisted orbit `{ψ(g) x φ(g)^-1}` when the source is finite.
fn finite_orbit(phi: &GroupHom, psi: &GroupHom, x: &GroupElement) -> Option<Vec<GroupElement>> {
    let t = phi.target();
    let elems = phi.source().elements()?;
    let mut out: Vec<GroupElement> = Vec::new();
    for g in &elems {
        let y = t.mul3(&psi.eval(g), x, &t.inv(&phi.eval(g)));
        if !out.contains(&y) {
            out.push(y);
        }
    }
    Some(out)
}

/// Elements of the target with translation coordinates in `[-bound, bound]`.
fn sample_box(g: &Group, bound: i64) -> Vec<GroupElement> {
    match g {
        Group::Finite(f) => (0..f.order()).map(GroupElement::Finite).collect(),
        Group::Cryst(c) => {
            let n = c.dim();
            let mut coords = vec![Vec::<BigInt>::new()];
            for _ in 0..n {
                coords = coords
                    .into_iter()
                    .flat_map(|p| {
                        (-bound..=bound).map(move |k| {
                            let mut q = p.clone();
                            q.push(BigInt::from(k));
                            q
                        })
                    })
                    .collect();
            }
            let l = c.lattice();
            (0..c.holonomy().order())
                .flat_map(|h| {
                    coords
                        .iter()
                        .map(move |y| GroupElement::Cryst(crate::group_models::CrystElement::new(l.from_coords(y), h)))
                })
                .collect()
        }
    }
}

/// Checks `im î = û⁻¹([1̄])`.
///
/// With finite top and middle sets every class is compared. Otherwise the
/// source must be finite: each sampled element's twisted orbit is scanned
/// for a member of `Γ₂`, which decides membership in `im î` directly.
pub fn check_exactness(levels: &CoverLevels, sample_bound: i64) -> Result<ExactnessReport> {
    let one = levels.bottom_identity();
    let surjective = u_hat_surjective(levels)?;
    if levels.middle.is_finite() && levels.top.is_finite() {
        let image: BTreeSet<ClassKey> = levels
            .top
            .classes()?
            .iter()
            .map(|k| i_hat(levels, k))
            .collect::<Result<_>>()?;
        let mut mismatches = Vec::new();
        let middle = levels.middle.classes()?;
        for k in &middle {
            let pre = u_hat(levels, k)? == one;
            if pre != image.contains(k) {
                mismatches.push(levels.middle.label(k));
            }
        }
        return Ok(ExactnessReport {
            exhaustive: true,
            checked: middle.len(),
            surjective,
            mismatches,
        });
    }
    if !levels.psi.source().is_finite() {
        return Err(Error::Infinite(
            "exactness needs finite sets or a finite source group".into(),
        ));
    }
    let sample = sample_box(levels.target(), sample_bound);
    let mut mismatches = Vec::new();
    for x in &sample {
        let orbit = finite_orbit(&levels.phi_beta, &levels.psi, x).expect("finite source");
        let in_image = orbit.iter().any(|y| levels.side2.sub.contains(y));
        let q = levels.side2.quotient.project(x);
        let pre = levels.bottom.class_of(&GroupElement::Finite(q)) == one;
        if in_image != pre {
            mismatches.push(levels.target().format_element(x));
        }
    }
    Ok(ExactnessReport {
        exhaustive: false,
        checked: sample.len(),
        surjective,
        mismatches,
    })
}

/// Both sides of `#î⁻¹([γ]) = [coin(τ_β̄ φ̄, ψ̄) : u(coin(τ_γβ φ, ψ))]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCount {
    pub direct: usize,
    pub coin_bar: usize,
    pub projected: usize,
}

impl FiberCount {
    pub fn formula(&self) -> Option<usize> {
        exact_ratio(self.coin_bar, self.projected)
    }

    pub fn holds(&self) -> bool {
        self.formula() == Some(self.direct)
    }
}

/// Fiber of `î` over the class of `γ ∈ Γ₂` (given as an element of `Π₂`).
pub fn fiber_size(levels: &CoverLevels, gamma: &GroupElement) -> Result<FiberCount> {
    if !levels.side2.sub.contains(gamma) {
        return Err(Error::Containment(format!(
            "{} is not in Γ₂",
            levels.target().format_element(gamma)
        )));
    }
    let target_class = levels.middle.class_of(gamma);
    let direct = if levels.top.is_finite() {
        let mut n = 0;
        for k in levels.top.classes()? {
            if i_hat(levels, &k)? == target_class {
                n += 1;
            }
        }
        n
    } else if let Some(orbit) = finite_orbit(&levels.phi_beta, &levels.psi, gamma) {
        let keys: BTreeSet<ClassKey> = orbit
            .iter()
            .filter_map(|y| levels.side2.sub.pull(y))
            .map(|y| levels.top.class_of(&y))
            .collect();
        keys.len()
    } else {
        return Err(Error::Infinite("cannot enumerate the fiber".into()));
    };

    let bar_phi = &levels.phi_beta_parts.descended;
    let bar_psi = &levels.psi_parts.descended;
    let coin_bar = coin_subgroup(bar_phi, bar_psi)?.order().expect("finite quotient");
    let phi_gb = levels.phi_beta.conjugate(gamma)?;
    let projected = projected_coin(&phi_gb, &levels.psi, &levels.side1)?.len();
    Ok(FiberCount {
        direct,
        coin_bar,
        projected,
    })
}

/// `|Q₁| = #[β̄] · #coin(τ_β̄ φ̄, ψ̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStabilizer {
    pub group_order: usize,
    pub orbit: usize,
    pub stabilizer: usize,
}

impl OrbitStabilizer {
    pub fn holds(&self) -> bool {
        self.group_order == self.orbit * self.stabilizer
    }
}

/// For finite `φ̄, ψ̄ : Q₁ -> Q₂` and `β̄ ∈ Q₂`.
pub fn orbit_stabilizer_identity(bar_phi: &GroupHom, bar_psi: &GroupHom, beta_bar: usize) -> Result<OrbitStabilizer> {
    let q1 = bar_phi.source().order().ok_or_else(|| Error::Infinite("Q₁".into()))?;
    let q2 = bar_phi.target();
    let b = GroupElement::Finite(beta_bar);
    if !q2.is_finite() || !q2.contains(&b) {
        return Err(Error::MismatchedGroups("β̄ must lie in a finite target".into()));
    }
    let set = ReidemeisterSet::new(bar_phi, bar_psi)?;
    let key = set.class_of(&b);
    let orbit = q2
        .elements()
        .expect("finite")
        .iter()
        .filter(|x| set.class_of(x) == key)
        .count();
    let stabilizer = coin_subgroup(&bar_phi.conjugate(&b)?, bar_psi)?
        .order()
        .expect("finite");
    Ok(OrbitStabilizer {
        group_order: q1,
        orbit,
        stabilizer,
    })
}
