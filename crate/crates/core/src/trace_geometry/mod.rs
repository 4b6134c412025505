//! Coincidences of affine maps between orientable flat manifolds.
//!
//! A map is given by its lift `f̃(x) = D x + d` and the induced homomorphism
//! `φ` with `f̃ α = φ(α) f̃`. For `g̃(x) = E x + e` and a deck transformation
//! `β = (m, b)` the lifts `β f̃` and `g̃` meet in exactly one point whenever
//! `E - A_b D` is invertible, so every twisted class carries one coincidence
//! point with index `sign det(E - A_b D)`.

mod points;
mod region;
mod trace;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group_models::{CrystElement, CrystGroup, Group, GroupElement, GroupHom};
use crate::lattice_alg::{IntMatrix, QVector, Rational};

pub use points::{
    canonical_point, coincidence_classes, lefschetz_number, local_index, local_trace, nielsen_number,
    oracle_coincidences, reidemeister_trace, CoincidenceClass, CoincidencePoint, CoincidenceReport,
};
pub use region::{Region, RegionBox};
pub use trace::TraceVector;

/// An affine map `f : M₁ -> M₂` together with its chosen lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMapSpec {
    hom: GroupHom,
}

impl AffineMapSpec {
    pub fn new(
        source: &Arc<CrystGroup>,
        target: &Arc<CrystGroup>,
        linear: IntMatrix,
        translation: QVector,
        holonomy_map: Vec<usize>,
    ) -> Result<Self> {
        Self::from_hom(GroupHom::affine(source, target, linear, translation, holonomy_map)?)
    }

    /// The identity map with the identity lift.
    pub fn identity(group: &Arc<CrystGroup>) -> Self {
        AffineMapSpec {
            hom: GroupHom::identity(&Group::Cryst(Arc::clone(group))),
        }
    }

    pub fn from_hom(hom: GroupHom) -> Result<Self> {
        if hom.affine_parts().is_none() {
            return Err(Error::InvalidHom("expected an affinely induced homomorphism".into()));
        }
        let spec = AffineMapSpec { hom };
        spec.check_equivariance()?;
        Ok(spec)
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn source(&self) -> &Arc<CrystGroup> {
        self.hom.source().as_cryst().expect("cryst source")
    }

    pub fn target(&self) -> &Arc<CrystGroup> {
        self.hom.target().as_cryst().expect("cryst target")
    }

    pub fn linear(&self) -> &IntMatrix {
        self.hom.affine_parts().expect("affine").0
    }

    pub fn translation(&self) -> &QVector {
        self.hom.affine_parts().expect("affine").1
    }

    pub fn holonomy_map(&self) -> &[usize] {
        self.hom.affine_parts().expect("affine").2
    }

    /// `f̃(x) = D x + d`.
    pub fn lift_apply(&self, x: &[Rational]) -> QVector {
        self.linear()
            .mul_qvec(x)
            .into_iter()
            .zip(self.translation())
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `f̃ ∘ α = φ(α) ∘ f̃` as affine maps, for every source generator `α`.
    pub fn check_equivariance(&self) -> Result<()> {
        let s = self.source();
        let t = self.target();
        for g in s.generators() {
            let image = self.hom.eval(&GroupElement::Cryst(g.clone()));
            let image = image.as_cryst().expect("cryst");
            let lhs_lin = self.linear() * s.rotation(g.holonomy);
            let rhs_lin = t.rotation(image.holonomy) * self.linear();
            let lhs_t = self.lift_apply(&s.affine_translation(&g));
            let rhs_t = t.apply(image, self.translation());
            if lhs_lin != rhs_lin || lhs_t != rhs_t {
                return Err(Error::InvalidHom(format!(
                    "lift is not equivariant at generator {}",
                    s.format_element(&g)
                )));
            }
        }
        Ok(())
    }

    /// The same map with lift `β f̃`, inducing `τ_β φ`.
    pub fn with_lift(&self, beta: &CrystElement) -> Result<Self> {
        Self::from_hom(self.hom.conjugate(&GroupElement::Cryst(beta.clone()))?)
    }
}

/// Shared preconditions for a pair `(f, g)`.
pub(crate) fn check_pair(f: &AffineMapSpec, g: &AffineMapSpec) -> Result<()> {
    let (s, t): (&Group, &Group) = (f.hom.source(), f.hom.target());
    if !s.same(g.hom.source()) || !t.same(g.hom.target()) {
        return Err(Error::MismatchedGroups("f and g must share source and target".into()));
    }
    if f.source().dim() != f.target().dim() {
        return Err(Error::Dimension("source and target must have equal dimension".into()));
    }
    for (name, c) in [("source", f.source()), ("target", f.target())] {
        if !c.is_orientable() {
            return Err(Error::Nonorientable(format!("{name} manifold")));
        }
    }
    Ok(())
}
