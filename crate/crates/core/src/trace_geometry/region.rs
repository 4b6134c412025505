use std::sync::Arc;

use num_traits::{One, Zero};

use num_bigint::BigInt;

use super::points::canonical_point;
use crate::error::{Error, Result};
use crate::group_models::{CrystElement, CrystGroup};
use crate::lattice_alg::{format_qvector, sign_of, IntMatrix, QVector, Rational};

/// Half-open box `[lo, hi)` inside `[0, 1)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionBox {
    pub lo: QVector,
    pub hi: QVector,
}

impl RegionBox {
    pub fn new(lo: QVector, hi: QVector) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension("box corners differ in length".into()));
        }
        let one = Rational::one();
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| *a < Rational::zero() || b > &one || a >= b)
        {
            return Err(Error::Dimension(format!(
                "box [{}, {}) is empty or leaves [0, 1)^n",
                format_qvector(&lo),
                format_qvector(&hi)
            )));
        }
        Ok(RegionBox { lo, hi })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (a, b))| a <= c && c < b)
    }

    fn overlaps(&self, other: &RegionBox) -> bool {
        (0..self.lo.len()).all(|i| self.lo[i] < other.hi[i] && other.lo[i] < self.hi[i])
    }

    /// Whether `y + εv` lies in the box for all small `ε > 0`, where
    /// `y ∈ [0, 1)^n`, `v ∈ {-1, 1}^n`, and coordinates wrap at `1 ≡ 0`.
    fn contains_near(&self, y: &[Rational], v: &[i8]) -> bool {
        let zero = Rational::zero();
        let one = Rational::one();
        (0..y.len()).all(|i| {
            let (a, b, c) = (&self.lo[i], &self.hi[i], &y[i]);
            if v[i] > 0 {
                a <= c && c < b
            } else if *c == zero {
                *b == one
            } else {
                a < c && c <= b
            }
        })
    }
}

/// A finite union of disjoint boxes in the fundamental domain `[0, 1)^n` of
/// a base group with translation lattice `Z^n`.
///
/// A point of a manifold covered by `R^n` lies in the region when one of
/// its lifts in `[0, 1)^n` under the base group does, so the same region
/// describes its preimage in any cover of the base.
#[derive(Clone, Debug)]
pub struct Region {
    base: Arc<CrystGroup>,
    boxes: Vec<RegionBox>,
}

impl Region {
    pub fn new(base: &Arc<CrystGroup>, boxes: Vec<RegionBox>) -> Result<Self> {
        if !base.lattice().is_full() {
            return Err(Error::InvalidGroup(
                "regions need a base group with translation lattice Z^n".into(),
            ));
        }
        if !base.rotations().iter().all(is_signed_permutation) {
            return Err(Error::InvalidGroup(
                "regions need holonomy acting by signed permutations".into(),
            ));
        }
        let n = base.dim();
        if boxes.iter().any(|b| b.lo.len() != n) {
            return Err(Error::Dimension("box dimension".into()));
        }
        for (i, a) in boxes.iter().enumerate() {
            for b in &boxes[i + 1..] {
                if a.overlaps(b) {
                    return Err(Error::Dimension(format!(
                        "boxes starting at {} and {} overlap",
                        format_qvector(&a.lo),
                        format_qvector(&b.lo)
                    )));
                }
            }
        }
        Ok(Region {
            base: Arc::clone(base),
            boxes,
        })
    }

    /// The whole manifold.
    pub fn full(base: &Arc<CrystGroup>) -> Result<Self> {
        let n = base.dim();
        let b = RegionBox::new(vec![Rational::zero(); n], vec![Rational::one(); n])?;
        Self::new(base, vec![b])
    }

    pub fn empty(base: &Arc<CrystGroup>) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub fn base(&self) -> &Arc<CrystGroup> {
        &self.base
    }

    pub fn boxes(&self) -> &[RegionBox] {
        &self.boxes
    }

    /// Membership of the point of the base manifold below `x ∈ R^n`.
    ///
    /// The point is inside when every orthant around `x` meets the region
    /// near `x`, outside when none does, and on the boundary otherwise.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        let n = self.base.dim();
        if x.len() != n {
            return Err(Error::Dimension("point dimension".into()));
        }
        let zero = vec![BigInt::zero(); n];
        let images: Vec<(QVector, &IntMatrix)> = (0..self.base.holonomy().order())
            .map(|h| {
                let y = self.base.apply(&CrystElement::new(zero.clone(), h), x);
                (self.base.lattice().reduce_point(&y), self.base.rotation(h))
            })
            .collect();
        let (mut hit, mut miss) = (false, false);
        for mask in 0..1u32 << n {
            let s: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let inside = images.iter().any(|(y, a)| {
                let v: Vec<i8> = (0..n)
                    .map(|i| {
                        let t: BigInt = (0..n).map(|j| a.get(i, j) * s[j]).sum();
                        sign_of(&t) as i8
                    })
                    .collect();
                self.boxes.iter().any(|b| b.contains_near(y, &v))
            });
            hit |= inside;
            miss |= !inside;
        }
        if hit && miss {
            return Err(Error::Boundary(format_qvector(&canonical_point(&self.base, x))));
        }
        Ok(hit)
    }

    /// Union of two regions over the same base; boxes must stay disjoint.
    pub fn union(&self, other: &Region) -> Result<Region> {
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Region::new(&self.base, boxes)
    }
}

fn is_signed_permutation(a: &IntMatrix) -> bool {
    let n = a.rows();
    let one = BigInt::one();
    (0..n).all(|i| {
        (0..n).filter(|&j| !a.get(i, j).is_zero()).count() == 1
            && (0..n).filter(|&k| !a.get(k, i).is_zero()).count() == 1
            && (0..n).any(|j| a.get(i, j).magnitude() == one.magnitude())
    })
}
