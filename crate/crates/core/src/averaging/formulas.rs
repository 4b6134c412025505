use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{AveragingReport, CosetSummand};
use super::{index_to_u64, lift_levels, lift_maps, validate_cover, AveragingOptions, CoverSpec, LiftLevel};
use crate::error::{Error, Result};
use crate::group_models::{GroupElement, SubgroupSpec};
use crate::lattice_alg::Rational;
use crate::reidemeister::{ClassKey, ReidemeisterSet};
use crate::trace_geometry::{lefschetz_number, local_trace, reidemeister_trace, AffineMapSpec, Region, TraceVector};

/// `ψ(γ) x φ(γ)⁻¹` for a random `γ`, another representative of `[x]`.
fn reshuffle(set: &ReidemeisterSet, x: &GroupElement, rng: &mut ChaCha8Rng) -> GroupElement {
    let gamma = set.phi().source().random_element(rng, 3);
    let t = set.target();
    t.mul3(&set.psi().eval(&gamma), x, &t.inv(&set.phi().eval(&gamma)))
}

fn representative(set: &ReidemeisterSet, key: &ClassKey, rng: &mut Option<ChaCha8Rng>) -> Result<GroupElement> {
    let x = set
        .representative(key)
        .ok_or_else(|| Error::IndexTable(format!("{key} does not name a class")))?;
    Ok(match rng {
        Some(rng) => reshuffle(set, &x, rng),
        None => x,
    })
}

/// Sums `ρ_β ∘ î^β` of the lifted traces, divides by `[Π₁ : Γ₁]` and
/// compares with `lhs`.
fn assemble(
    cover: &CoverSpec,
    base: Arc<ReidemeisterSet>,
    lhs: Option<TraceVector>,
    lifted: Vec<(LiftLevel, TraceVector)>,
    options: &AveragingOptions,
) -> Result<AveragingReport> {
    let mut rng = options.shuffle_representatives.map(ChaCha8Rng::seed_from_u64);
    let bottom = ReidemeisterSet::new(&cover.phi_parts().descended, &cover.psi_parts().descended)?;
    let quotient = &cover.side2().quotient;
    let target = cover.phi().target().clone();
    let mut summands = Vec::new();
    let mut raw_sum = TraceVector::zero(Arc::clone(&base));
    for (level, trace) in lifted {
        let mut pushed = TraceVector::zero(Arc::clone(&base));
        for (k, c) in trace.terms() {
            let x = representative(trace.set(), k, &mut rng)?;
            let m = level.middle.class_of(&cover.side2().sub.include(&x));
            let y = representative(&level.middle, &m, &mut rng)?;
            pushed.add(base.class_of(&target.mul(&y, &level.beta)), c);
        }
        let fiber = bottom.class_of(&GroupElement::Finite(level.beta_bar));
        let in_fiber = pushed.terms().all(|(k, _)| {
            let x = base.representative(k).expect("canonical key");
            bottom.class_of(&GroupElement::Finite(quotient.project(&x))) == fiber
        });
        raw_sum = raw_sum.plus(&pushed);
        summands.push(CosetSummand {
            beta_bar: level.beta_bar,
            beta_label: target.format_element(&level.beta),
            beta: level.beta,
            lifted: trace,
            pushed,
            in_fiber,
        });
    }
    let divisor = cover.divisor();
    let mut rhs = raw_sum.divide_exact(divisor)?;
    let witness = raw_sum
        .terms()
        .map(|(k, c)| (k.clone(), c, rhs.coefficient(k)))
        .collect();
    if options.sabotage {
        let first = rhs.terms().next().map(|(k, c)| (k.clone(), c));
        match first {
            Some((k, c)) => rhs.add(k, -2 * c),
            None => rhs.add(base.class_of(&target.identity()), 1),
        }
    }
    Ok(AveragingReport {
        lhs,
        summands,
        raw_sum,
        divisor,
        witness,
        rhs,
    })
}

/// Both sides of the averaging formula for the coincidence trace of `(f, g)`.
pub fn average_rt_coincidence(
    f: &AffineMapSpec,
    g: &AffineMapSpec,
    cover: &CoverSpec,
    options: &AveragingOptions,
) -> Result<AveragingReport> {
    let catalog = lift_maps(f, g, cover)?;
    let lhs = reidemeister_trace(f, g)?;
    let levels = lift_levels(cover)?;
    let mut lifted = Vec::new();
    for (level, lift) in levels.into_iter().zip(&catalog.lifts) {
        lifted.push((level, reidemeister_trace(&lift.map, &catalog.g_bar)?));
    }
    let base = Arc::clone(lhs.set());
    assemble(cover, base, Some(lhs), lifted, options)
}

/// The averaging formula with every trace replaced by its coefficientwise
/// absolute value. Only orientable manifolds are accepted, where this is the
/// trace of absolute class indices.
pub fn average_abs_rt(
    f: &AffineMapSpec,
    g: &AffineMapSpec,
    cover: &CoverSpec,
    options: &AveragingOptions,
) -> Result<AveragingReport> {
    let catalog = lift_maps(f, g, cover)?;
    let lhs = reidemeister_trace(f, g)?.abs();
    let levels = lift_levels(cover)?;
    let mut lifted = Vec::new();
    for (level, lift) in levels.into_iter().zip(&catalog.lifts) {
        lifted.push((level, reidemeister_trace(&lift.map, &catalog.g_bar)?.abs()));
    }
    let base = Arc::clone(lhs.set());
    assemble(cover, base, Some(lhs), lifted, options)
}

/// Fixed-point version: `g` is the identity with the identity lift and
/// `Γ₁ = Γ₂ = Γ`.
pub fn average_rt_fixed(
    f: &AffineMapSpec,
    gamma: &SubgroupSpec,
    options: &AveragingOptions,
) -> Result<AveragingReport> {
    let (id, cover) = fixed_point_cover(f, gamma)?;
    average_rt_coincidence(f, &id, &cover, options)
}

fn fixed_point_cover(f: &AffineMapSpec, gamma: &SubgroupSpec) -> Result<(AffineMapSpec, CoverSpec)> {
    if !f.hom().source().same(f.hom().target()) {
        return Err(Error::MismatchedGroups("fixed points need a self-map".into()));
    }
    let id = AffineMapSpec::identity(f.source());
    let cover = validate_cover(f.hom(), id.hom(), gamma, gamma)?;
    Ok((id, cover))
}

/// Local fixed point index of `f` on `U` against the average over the lifts
/// on the preimage of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexAverage {
    pub lhs: i64,
    pub per_coset: Vec<(usize, i64)>,
    pub rhs: Rational,
}

impl IndexAverage {
    pub fn equal(&self) -> bool {
        Rational::from_integer(self.lhs.into()) == self.rhs
    }
}

pub fn average_index(f: &AffineMapSpec, region: &Region, gamma: &SubgroupSpec) -> Result<IndexAverage> {
    let (id, cover) = fixed_point_cover(f, gamma)?;
    let catalog = lift_maps(f, &id, &cover)?;
    let lhs = local_trace(f, &id, region)?.augmentation();
    let per_coset = catalog
        .lifts
        .iter()
        .map(|l| Ok((l.beta_bar, local_trace(&l.map, &catalog.g_bar, region)?.augmentation())))
        .collect::<Result<Vec<_>>>()?;
    let sum: i64 = per_coset.iter().map(|(_, c)| c).sum();
    let index = index_to_u64(&cover.side1().sub.index())?;
    Ok(IndexAverage {
        lhs,
        per_coset,
        rhs: Rational::new(sum.into(), index.into()),
    })
}

/// `L(f, g)` against the average of `L(β̄f̄, ḡ)`, with the augmentation of
/// the trace average as a third value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzAverage {
    pub lhs: i64,
    pub per_coset: Vec<(usize, i64)>,
    pub rhs: Rational,
    pub trace_augmentation: i64,
}

impl LefschetzAverage {
    pub fn equal(&self) -> bool {
        let l = Rational::from_integer(self.lhs.into());
        l == self.rhs && self.lhs == self.trace_augmentation
    }
}

pub fn average_lefschetz(f: &AffineMapSpec, g: &AffineMapSpec, cover: &CoverSpec) -> Result<LefschetzAverage> {
    let catalog = lift_maps(f, g, cover)?;
    let lhs = lefschetz_number(f, g)?;
    let per_coset = catalog
        .lifts
        .iter()
        .map(|l| Ok((l.beta_bar, lefschetz_number(&l.map, &catalog.g_bar)?)))
        .collect::<Result<Vec<_>>>()?;
    let sum: i64 = per_coset.iter().map(|(_, c)| c).sum();
    let report = average_rt_coincidence(f, g, cover, &AveragingOptions::default())?;
    Ok(LefschetzAverage {
        lhs,
        per_coset,
        rhs: Rational::new(sum.into(), (cover.index1() as i64).into()),
        trace_augmentation: report.rhs.augmentation(),
    })
}

fn table_vector(set: &Arc<ReidemeisterSet>, table: &BTreeMap<ClassKey, i64>, what: &str) -> Result<TraceVector> {
    for k in table.keys() {
        if set.representative(k).is_none() {
            return Err(Error::IndexTable(format!("{what}: {k} is not a class")));
        }
    }
    Ok(TraceVector::from_map(Arc::clone(set), table.clone()))
}

/// Evaluates the right-hand side from supplied indices of the lifted
/// classes, one table per coset of `Γ₂`, and compares it with the supplied
/// indices of `(f, g)` when present.
pub fn algebraic_mode_verify(
    cover: &CoverSpec,
    lift_indices: &[BTreeMap<ClassKey, i64>],
    lhs_indices: Option<&BTreeMap<ClassKey, i64>>,
    options: &AveragingOptions,
) -> Result<AveragingReport> {
    let levels = lift_levels(cover)?;
    if lift_indices.len() != levels.len() {
        return Err(Error::IndexTable(format!(
            "expected {} lifted index tables, got {}",
            levels.len(),
            lift_indices.len()
        )));
    }
    let base = Arc::new(ReidemeisterSet::new(cover.phi(), cover.psi())?);
    let lhs = lhs_indices.map(|t| table_vector(&base, t, "base table")).transpose()?;
    let lifted = levels
        .into_iter()
        .zip(lift_indices)
        .map(|(level, table)| {
            let v = table_vector(&level.top, table, &format!("coset {}", level.beta_bar))?;
            Ok((level, v))
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(cover, base, lhs, lifted, options)
}
