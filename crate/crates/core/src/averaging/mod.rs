//! Averaging formulas over finite regular covers.
//!
//! For covers `Γ₁ ⊆ Π₁`, `Γ₂ ⊆ Π₂` with `φ(Γ₁), ψ(Γ₁) ⊆ Γ₂`, every coset
//! `β̄ ∈ Π₂/Γ₂` gives a lift `β̄f̄` of `f` with lift `βf̃`. Its trace lives
//! in `R[(τ_β φ)', ψ']` and is carried to `R[φ, ψ]` by `ρ_β ∘ î^β`; the sum
//! over all cosets is `[Π₁ : Γ₁]` times the trace of `(f, g)`.

mod formulas;
mod report;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group_models::{restrict_and_descend, CoverSide, GroupElement, GroupHom, Restricted, SubgroupSpec};
use crate::reidemeister::ReidemeisterSet;
use crate::trace_geometry::AffineMapSpec;

pub use formulas::{
    algebraic_mode_verify, average_abs_rt, average_index, average_lefschetz, average_rt_coincidence, average_rt_fixed,
    IndexAverage, LefschetzAverage,
};
pub use report::{trace_json, AveragingReport, CosetSummand};

/// A validated pair of covers for `φ, ψ : Π₁ -> Π₂`.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    phi: GroupHom,
    psi: GroupHom,
    side1: CoverSide,
    side2: CoverSide,
    phi_parts: Restricted,
    psi_parts: Restricted,
    reps: Vec<GroupElement>,
}

/// Checks that `Γ₁`, `Γ₂` are finite-index normal subgroups with
/// `φ(Γ₁) ⊆ Γ₂` and `ψ(Γ₁) ⊆ Γ₂`, and picks the canonical least
/// representative of every coset of `Γ₂`.
pub fn validate_cover(
    phi: &GroupHom,
    psi: &GroupHom,
    gamma1: &SubgroupSpec,
    gamma2: &SubgroupSpec,
) -> Result<CoverSpec> {
    if !phi.source().same(psi.source()) || !phi.target().same(psi.target()) {
        return Err(Error::MismatchedGroups("φ and ψ must share source and target".into()));
    }
    let side1 = CoverSide::new(phi.source(), gamma1)?;
    let side2 = CoverSide::new(phi.target(), gamma2)?;
    let phi_parts = restrict_and_descend(phi, &side1, &side2)?;
    let psi_parts = restrict_and_descend(psi, &side1, &side2)?;
    let reps = side2.quotient.representatives().to_vec();
    Ok(CoverSpec {
        phi: phi.clone(),
        psi: psi.clone(),
        side1,
        side2,
        phi_parts,
        psi_parts,
        reps,
    })
}

impl CoverSpec {
    pub fn phi(&self) -> &GroupHom {
        &self.phi
    }

    pub fn psi(&self) -> &GroupHom {
        &self.psi
    }

    pub fn side1(&self) -> &CoverSide {
        &self.side1
    }

    pub fn side2(&self) -> &CoverSide {
        &self.side2
    }

    /// `φ'`, `φ̄`.
    pub fn phi_parts(&self) -> &Restricted {
        &self.phi_parts
    }

    /// `ψ'`, `ψ̄`.
    pub fn psi_parts(&self) -> &Restricted {
        &self.psi_parts
    }

    /// `[Π₁ : Γ₁]`.
    pub fn index1(&self) -> usize {
        self.side1.quotient.order()
    }

    /// `[Π₂ : Γ₂]`.
    pub fn index2(&self) -> usize {
        self.side2.quotient.order()
    }

    pub fn coset_representatives(&self) -> &[GroupElement] {
        &self.reps
    }

    /// The same cover with `β` as representative of the coset `β̄`.
    pub fn with_representative(&self, beta_bar: usize, beta: GroupElement) -> Result<Self> {
        if beta_bar >= self.reps.len() {
            return Err(Error::Dimension(format!("no coset {beta_bar}")));
        }
        if !self.phi.target().contains(&beta) || self.side2.quotient.project(&beta) != beta_bar {
            return Err(Error::Containment(format!(
                "{} does not lie in coset {beta_bar}",
                self.phi.target().format_element(&beta)
            )));
        }
        let mut out = self.clone();
        out.reps[beta_bar] = beta;
        Ok(out)
    }

    /// Whether both covers are sublattices of crystallographic groups, so
    /// the covering manifolds are flat and every lift is computable.
    pub fn is_geometric(&self) -> bool {
        self.side1.sub.sublattice().is_some() && self.side2.sub.sublattice().is_some()
    }

    fn require_geometric(&self) -> Result<()> {
        if !self.is_geometric() {
            return Err(Error::InvalidGroup(
                "covers are not sublattices of flat manifold groups; use algebraic mode".into(),
            ));
        }
        Ok(())
    }

    fn divisor(&self) -> u64 {
        self.index1() as u64
    }
}

pub(crate) fn index_to_u64(index: &BigInt) -> Result<u64> {
    index
        .to_u64()
        .ok_or_else(|| Error::Dimension(format!("index {index} is out of range")))
}

/// Reidemeister sets of one twisted lift: `R[(τ_β φ)', ψ']` and
/// `R[τ_β φ, ψ]`.
#[derive(Clone, Debug)]
pub struct LiftLevel {
    pub beta_bar: usize,
    pub beta: GroupElement,
    /// `(τ_β φ)'` and `(τ_β φ)‾`.
    pub phi_beta_parts: Restricted,
    pub top: Arc<ReidemeisterSet>,
    pub middle: Arc<ReidemeisterSet>,
}

/// One [`LiftLevel`] per coset of `Γ₂`, in coset order.
pub fn lift_levels(cover: &CoverSpec) -> Result<Vec<LiftLevel>> {
    cover
        .reps
        .iter()
        .enumerate()
        .map(|(beta_bar, beta)| {
            let phi_beta = cover.phi.conjugate(beta)?;
            let phi_beta_parts = restrict_and_descend(&phi_beta, &cover.side1, &cover.side2)?;
            let top = ReidemeisterSet::new(&phi_beta_parts.restricted, &cover.psi_parts.restricted)?;
            let middle = ReidemeisterSet::new(&phi_beta, &cover.psi)?;
            Ok(LiftLevel {
                beta_bar,
                beta: beta.clone(),
                phi_beta_parts,
                top: Arc::new(top),
                middle: Arc::new(middle),
            })
        })
        .collect()
}

/// The lift `β̄f̄` with lift `βf̃` on the covering manifolds.
#[derive(Clone, Debug)]
pub struct Lift {
    pub beta_bar: usize,
    pub beta: GroupElement,
    pub map: AffineMapSpec,
}

/// `ḡ` and every lift `β̄f̄` of `f`.
#[derive(Clone, Debug)]
pub struct LiftCatalog {
    pub g_bar: AffineMapSpec,
    pub lifts: Vec<Lift>,
}

/// Lifts `f` and `g` to the covering flat manifolds `R^n / Γᵢ`, written in
/// the original coordinates.
pub fn lift_maps(f: &AffineMapSpec, g: &AffineMapSpec, cover: &CoverSpec) -> Result<LiftCatalog> {
    if f.hom() != &cover.phi || g.hom() != &cover.psi {
        return Err(Error::MismatchedGroups("cover was validated for other maps".into()));
    }
    cover.require_geometric()?;
    let g_bar = AffineMapSpec::from_hom(cover.psi_parts.restricted.clone())?;
    let lifts = lift_levels(cover)?
        .into_iter()
        .map(|level| {
            let map = AffineMapSpec::from_hom(level.phi_beta_parts.restricted)?;
            Ok(Lift {
                beta_bar: level.beta_bar,
                beta: level.beta,
                map,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftCatalog { g_bar, lifts })
}

/// Knobs for the averaging checks.
#[derive(Clone, Debug, Default)]
pub struct AveragingOptions {
    /// Pushes every class through a randomly chosen representative instead
    /// of the canonical one.
    pub shuffle_representatives: Option<u64>,
    /// Flips the sign of one coefficient of the right-hand side, so the
    /// comparison must fail.
    pub sabotage: bool,
}
