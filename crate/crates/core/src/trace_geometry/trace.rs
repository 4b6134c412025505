use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::reidemeister::{ClassKey, ReidemeisterSet};

/// A finitely supported integer combination of twisted classes.
///
/// Zero coefficients are never stored, so equality of the maps is equality
/// of the vectors.
#[derive(Clone, Debug)]
pub struct TraceVector {
    set: Arc<ReidemeisterSet>,
    coeffs: BTreeMap<ClassKey, i64>,
}

impl PartialEq for TraceVector {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for TraceVector {}

impl TraceVector {
    pub fn zero(set: Arc<ReidemeisterSet>) -> Self {
        TraceVector {
            set,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_map(set: Arc<ReidemeisterSet>, coeffs: BTreeMap<ClassKey, i64>) -> Self {
        let mut v = Self::zero(set);
        for (k, c) in coeffs {
            v.add(k, c);
        }
        v
    }

    pub fn set(&self) -> &Arc<ReidemeisterSet> {
        &self.set
    }

    pub fn add(&mut self, key: ClassKey, c: i64) {
        let e = self.coeffs.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn coefficient(&self, key: &ClassKey) -> i64 {
        self.coeffs.get(key).copied().unwrap_or(0)
    }

    /// Nonzero terms in class order.
    pub fn terms(&self) -> impl Iterator<Item = (&ClassKey, i64)> {
        self.coeffs.iter().map(|(k, c)| (k, *c))
    }

    pub fn coefficients(&self) -> &BTreeMap<ClassKey, i64> {
        &self.coeffs
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Every class of a finite set with its coefficient, zeros included.
    pub fn entries(&self) -> Result<Vec<(ClassKey, i64)>> {
        Ok(self
            .set
            .classes()?
            .into_iter()
            .map(|k| {
                let c = self.coefficient(&k);
                (k, c)
            })
            .collect())
    }

    /// `(label, coefficient)` for the nonzero terms.
    pub fn labeled(&self) -> Vec<(String, i64)> {
        self.terms().map(|(k, c)| (self.set.label(k), c)).collect()
    }

    /// Coefficientwise absolute value.
    pub fn abs(&self) -> TraceVector {
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.clone(), c.abs())).collect();
        TraceVector::from_map(Arc::clone(&self.set), coeffs)
    }

    pub fn plus(&self, other: &TraceVector) -> TraceVector {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add(k.clone(), c);
        }
        out
    }

    /// Image under a map of class sets.
    pub fn push_forward(
        &self,
        target: Arc<ReidemeisterSet>,
        map: impl Fn(&ClassKey) -> Result<ClassKey>,
    ) -> Result<TraceVector> {
        let mut out = TraceVector::zero(target);
        for (k, c) in self.terms() {
            out.add(map(k)?, c);
        }
        Ok(out)
    }

    /// Coefficientwise exact division.
    pub fn divide_exact(&self, divisor: u64) -> Result<TraceVector> {
        let d = i64::try_from(divisor).map_err(|_| Error::Dimension("divisor too large".into()))?;
        if d == 0 {
            return Err(Error::DivisionRemainder {
                divisor,
                class: "(division by zero)".into(),
            });
        }
        let mut out = TraceVector::zero(Arc::clone(&self.set));
        for (k, c) in self.terms() {
            if c % d != 0 {
                return Err(Error::DivisionRemainder {
                    divisor,
                    class: self.set.label(k),
                });
            }
            out.add(k.clone(), c / d);
        }
        Ok(out)
    }
}

impl fmt::Display for TraceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (label, c)) in self.labeled().into_iter().enumerate() {
            let mag = c.unsigned_abs();
            let term = if mag == 1 { label } else { format!("{mag}{label}") };
            match (i, c < 0) {
                (0, false) => write!(f, "{term}")?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        Ok(())
    }
}
