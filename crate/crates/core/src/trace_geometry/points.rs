use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_pair, AffineMapSpec, Region, TraceVector};
use crate::error::{Error, Result};
use crate::group_models::{CrystElement, CrystGroup, GroupElement};
use crate::lattice_alg::{
    ceil, floor, format_qvector, int_to_rat, sign_of, to_integral, IntMatrix, QVector, Rational, RationalMatrix,
};
use crate::reidemeister::{ClassKey, ReidemeisterSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidencePoint {
    /// Canonical lift in the fundamental domain of the source lattice.
    pub location: QVector,
    pub class: ClassKey,
    /// A deck transformation with `g̃(x) = β f̃(x)` at some lift `x`.
    pub beta: CrystElement,
    pub local_index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceClass {
    pub class: ClassKey,
    pub label: String,
    pub points: Vec<CoincidencePoint>,
    pub index: i64,
}

/// Coincidence classes of a pair together with the Reidemeister set they
/// are labeled in.
#[derive(Clone, Debug)]
pub struct CoincidenceReport {
    pub set: Arc<ReidemeisterSet>,
    pub classes: Vec<CoincidenceClass>,
}

impl CoincidenceReport {
    /// All points, ordered by location then class.
    pub fn points(&self) -> Vec<CoincidencePoint> {
        let mut pts: Vec<CoincidencePoint> = self.classes.iter().flat_map(|c| c.points.clone()).collect();
        pts.sort_by(|a, b| (&a.location, &a.class).cmp(&(&b.location, &b.class)));
        pts
    }
}

/// Lifts of the orbit of `x` under `Γ` lying in the half-open parallelepiped
/// of its lattice, sorted and without repeats.
pub(crate) fn lifts_in_domain(group: &CrystGroup, x: &[Rational]) -> Vec<QVector> {
    let zero = vec![BigInt::zero(); group.dim()];
    let mut out: Vec<QVector> = (0..group.holonomy().order())
        .map(|h| {
            let y = group.apply(&CrystElement::new(zero.clone(), h), x);
            group.lattice().reduce_point(&y)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Least lift of the orbit of `x` in the fundamental domain.
pub fn canonical_point(group: &CrystGroup, x: &[Rational]) -> QVector {
    lifts_in_domain(group, x).swap_remove(0)
}

struct SectorSystem {
    /// `E - A_b D`.
    k: IntMatrix,
    det: BigInt,
    inverse: RationalMatrix,
}

/// `E - A_b D` for every target holonomy `b`; fails on the first singular one.
fn sector_systems(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<Vec<SectorSystem>> {
    let t = f.target();
    (0..t.holonomy().order())
        .map(|b| {
            let k = g.linear().try_sub(&(t.rotation(b) * f.linear()))?;
            let det = k.det()?;
            let inverse = k.rational_inverse().ok_or(Error::Degenerate { sector: b })?;
            Ok(SectorSystem { k, det, inverse })
        })
        .collect()
}

/// Right-hand side `A_b d + s_b + m - e` of `(E - A_b D) x = ...`.
fn rhs(f: &AffineMapSpec, g: &AffineMapSpec, beta: &CrystElement) -> QVector {
    let t = f.target();
    t.apply(beta, f.translation())
        .into_iter()
        .zip(g.translation())
        .map(|(a, e)| a - e)
        .collect()
}

fn solve_point(f: &AffineMapSpec, g: &AffineMapSpec, sys: &[SectorSystem], beta: &CrystElement) -> QVector {
    sys[beta.holonomy].inverse.mul_qvec(&rhs(f, g, beta))
}

fn sign(det: &BigInt) -> i64 {
    sign_of(det)
}

pub fn coincidence_classes(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<CoincidenceReport> {
    check_pair(f, g)?;
    let sys = sector_systems(f, g)?;
    let set = Arc::new(ReidemeisterSet::new(f.hom(), g.hom())?);
    let source = f.source();
    let mut classes = Vec::new();
    for key in set.classes()? {
        let beta = set.representative(&key).expect("class representative");
        let beta = beta.as_cryst().expect("cryst").clone();
        let x = solve_point(f, g, &sys, &beta);
        let index = sign(&sys[beta.holonomy].det);
        let point = CoincidencePoint {
            location: canonical_point(source, &x),
            class: key.clone(),
            beta,
            local_index: index,
        };
        classes.push(CoincidenceClass {
            label: set.label(&key),
            class: key,
            points: vec![point],
            index,
        });
    }
    Ok(CoincidenceReport { set, classes })
}

/// Index of the coincidence at `x ∈ R^n`: `sign det(E - A_b D)` for the
/// deck transformation `β = (m, b)` with `g̃(x) = β f̃(x)`.
pub fn local_index(f: &AffineMapSpec, g: &AffineMapSpec, x: &[Rational]) -> Result<i64> {
    check_pair(f, g)?;
    let t = f.target();
    if x.len() != f.source().dim() {
        return Err(Error::Dimension("point dimension".into()));
    }
    let y = g.lift_apply(x);
    let z = f.lift_apply(x);
    for b in 0..t.holonomy().order() {
        let az = t.rotation(b).mul_qvec(&z);
        let m: QVector = y
            .iter()
            .zip(az)
            .zip(t.translation_part(b))
            .map(|((y, a), s)| y - a - s)
            .collect();
        let Some(m) = to_integral(&m) else { continue };
        if !t.lattice().contains(&m) {
            continue;
        }
        let k = g.linear().try_sub(&(t.rotation(b) * f.linear()))?;
        let det = k.det()?;
        if det.is_zero() {
            return Err(Error::Degenerate { sector: b });
        }
        return Ok(sign(&det));
    }
    Err(Error::NotCoincidence(format_qvector(x)))
}

pub fn reidemeister_trace(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<TraceVector> {
    let report = coincidence_classes(f, g)?;
    let mut rt = TraceVector::zero(Arc::clone(&report.set));
    for c in report.classes {
        rt.add(c.class, c.index);
    }
    Ok(rt)
}

/// `L(f, g)`, the augmentation of the trace. On lattice groups it is also
/// computed as `det(E - D)` and the two must agree.
pub fn lefschetz_number(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<i64> {
    let l = reidemeister_trace(f, g)?.augmentation();
    if f.source().is_lattice_group() && f.target().is_lattice_group() {
        let det = g.linear().try_sub(f.linear())?.det()?;
        if BigInt::from(l) != det {
            return Err(Error::IdentityFailure(format!(
                "augmentation {l} differs from det(E - D) = {det}"
            )));
        }
    }
    Ok(l)
}

pub fn nielsen_number(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<usize> {
    Ok(reidemeister_trace(f, g)?.support_size())
}

/// Trace restricted to the coincidences lying over `region`.
pub fn local_trace(f: &AffineMapSpec, g: &AffineMapSpec, region: &Region) -> Result<TraceVector> {
    let report = coincidence_classes(f, g)?;
    let mut rt = TraceVector::zero(Arc::clone(&report.set));
    for c in &report.classes {
        for p in &c.points {
            if region.contains(&p.location)? {
                rt.add(c.class.clone(), p.local_index);
            }
        }
    }
    Ok(rt)
}

/// Brute-force coincidence search, independent of the class engine except
/// for labeling.
///
/// For each target holonomy `b` the lattice parts `m` are enumerated over
/// the interval image of the closed fundamental domain under `E - A_b D`,
/// widened by one; each solution of `(E - A_b D) x = A_b d + s_b + m - e`
/// inside the fundamental domain is kept and solutions are identified under
/// the source deck group.
pub fn oracle_coincidences(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<Vec<CoincidencePoint>> {
    check_pair(f, g)?;
    let sys = sector_systems(f, g)?;
    let set = ReidemeisterSet::new(f.hom(), g.hom())?;
    let s = f.source();
    let t = f.target();
    let b1 = s.lattice().basis_matrix();
    let mut found: BTreeMap<QVector, CoincidencePoint> = BTreeMap::new();
    for b in 0..t.holonomy().order() {
        let kb = &sys[b].k * &b1;
        // m = K x - c with c = A_b d + s_b - e
        let zero_beta = CrystElement::new(vec![BigInt::zero(); t.dim()], b);
        let c = rhs(f, g, &zero_beta);
        let ranges: Vec<(BigInt, BigInt)> = (0..t.dim())
            .map(|i| {
                let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
                for j in 0..kb.cols() {
                    let v = int_to_rat(kb.get(i, j));
                    if v < Rational::zero() {
                        lo += v;
                    } else {
                        hi += v;
                    }
                }
                (floor(&(lo - &c[i])) - 1, ceil(&(hi - &c[i])) + 1)
            })
            .collect();
        for m in integer_box(&ranges) {
            if !t.lattice().contains(&m) {
                continue;
            }
            let beta = CrystElement::new(m, b);
            let x = solve_point(f, g, &sys, &beta);
            if !s.lattice().in_fundamental_domain(&x) {
                continue;
            }
            debug_assert_eq!(g.lift_apply(&x), t.apply(&beta, &f.lift_apply(&x)));
            let location = canonical_point(s, &x);
            let class = set.class_of(&GroupElement::Cryst(beta.clone()));
            let local_index = sign(&sys[b].det);
            if let Some(prev) = found.get(&location) {
                if prev.class != class || prev.local_index != local_index {
                    return Err(Error::IdentityFailure(format!(
                        "point {} carries two labels",
                        format_qvector(&location)
                    )));
                }
                continue;
            }
            found.insert(
                location.clone(),
                CoincidencePoint {
                    location,
                    class,
                    beta,
                    local_index,
                },
            );
        }
    }
    Ok(found.into_values().collect())
}

fn integer_box(ranges: &[(BigInt, BigInt)]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for (lo, hi) in ranges {
        let mut next = Vec::new();
        for p in &out {
            let mut k = lo.clone();
            while &k <= hi {
                let mut q = p.clone();
                q.push(k.clone());
                next.push(q);
                k += BigInt::one();
            }
        }
        out = next;
    }
    out
}
