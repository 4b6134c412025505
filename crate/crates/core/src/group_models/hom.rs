use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::cryst::{CrystElement, CrystGroup};
use super::finite::FiniteGroupTable;
use super::group::{Group, GroupElement};
use super::sublattice::Sublattice;
use crate::error::{Error, Result};
use crate::lattice_alg::{format_qvector, to_integral, vec_add, IntMatrix, QVector};

/// Data of a homomorphism, by kind of source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomMap {
    /// Finite to finite: image of every element.
    Table(Vec<usize>),
    /// Crystallographic to crystallographic, induced by the affine map
    /// `x -> D x + d`: `(m, h) -> (D m + D s_h + (I - A_θh) d - s_θh, θ h)`.
    Affine {
        linear: IntMatrix,
        translation: QVector,
        holonomy_map: Vec<usize>,
    },
    /// Crystallographic to finite: images of the source lattice basis
    /// translations and of each `(0, h)`.
    ToFinite {
        translation_images: Vec<usize>,
        holonomy_images: Vec<usize>,
    },
    /// Finite to crystallographic: image of every element.
    FromFinite(Vec<CrystElement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Group,
    target: Group,
    map: HomMap,
    // Affine: lattice part of the image of (0, h)
    offsets: Vec<Vec<BigInt>>,
}

impl GroupHom {
    pub fn new(source: Group, target: Group, map: HomMap) -> Result<Self> {
        let offsets = match (&source, &target, &map) {
            (Group::Finite(s), Group::Finite(t), HomMap::Table(images)) => {
                s.check_hom(t, images)?;
                Vec::new()
            }
            (
                Group::Cryst(s),
                Group::Cryst(t),
                HomMap::Affine {
                    linear,
                    translation,
                    holonomy_map,
                },
            ) => affine_offsets(s, t, linear, translation, holonomy_map)?,
            (
                Group::Cryst(s),
                Group::Finite(t),
                HomMap::ToFinite {
                    translation_images,
                    holonomy_images,
                },
            ) => {
                if translation_images.len() != s.dim()
                    || holonomy_images.len() != s.holonomy().order()
                    || translation_images
                        .iter()
                        .chain(holonomy_images)
                        .any(|&x| x >= t.order())
                {
                    return Err(Error::InvalidHom("image lists have the wrong shape".into()));
                }
                Vec::new()
            }
            (Group::Finite(s), Group::Cryst(t), HomMap::FromFinite(images)) => {
                if images.len() != s.order() || images.iter().any(|x| !t.contains(x)) {
                    return Err(Error::InvalidHom(
                        "images must be target elements, one per source element".into(),
                    ));
                }
                Vec::new()
            }
            _ => {
                return Err(Error::InvalidHom(
                    "homomorphism data does not match the group kinds".into(),
                ))
            }
        };
        let hom = Self {
            source,
            target,
            map,
            offsets,
        };
        hom.check_law()?;
        Ok(hom)
    }

    pub fn identity(g: &Group) -> Self {
        let map = match g {
            Group::Finite(f) => HomMap::Table((0..f.order()).collect()),
            Group::Cryst(c) => HomMap::Affine {
                linear: IntMatrix::identity(c.dim()),
                translation: vec![Default::default(); c.dim()],
                holonomy_map: (0..c.holonomy().order()).collect(),
            },
        };
        Self::new(g.clone(), g.clone(), map).expect("identity homomorphism")
    }

    pub fn trivial(source: &Group, target: &Group) -> Result<Self> {
        let map = match (source, target) {
            (Group::Finite(s), Group::Finite(t)) => HomMap::Table(vec![t.identity(); s.order()]),
            (Group::Finite(s), Group::Cryst(t)) => HomMap::FromFinite(vec![t.identity(); s.order()]),
            (Group::Cryst(s), Group::Finite(t)) => HomMap::ToFinite {
                translation_images: vec![t.identity(); s.dim()],
                holonomy_images: vec![t.identity(); s.holonomy().order()],
            },
            (Group::Cryst(_), Group::Cryst(_)) => {
                return Err(Error::InvalidHom(
                    "trivial maps between crystallographic groups are not affinely induced".into(),
                ))
            }
        };
        Self::new(source.clone(), target.clone(), map)
    }

    pub fn affine(
        source: &Arc<CrystGroup>,
        target: &Arc<CrystGroup>,
        linear: IntMatrix,
        translation: QVector,
        holonomy_map: Vec<usize>,
    ) -> Result<Self> {
        Self::new(
            Group::Cryst(Arc::clone(source)),
            Group::Cryst(Arc::clone(target)),
            HomMap::Affine {
                linear,
                translation,
                holonomy_map,
            },
        )
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn map(&self) -> &HomMap {
        &self.map
    }

    /// `(D, d, θ)` for affinely induced homomorphisms.
    pub fn affine_parts(&self) -> Option<(&IntMatrix, &QVector, &[usize])> {
        match &self.map {
            HomMap::Affine {
                linear,
                translation,
                holonomy_map,
            } => Some((linear, translation, holonomy_map)),
            _ => None,
        }
    }

    /// Lattice part of the image of `(0, h)` for affinely induced maps.
    pub fn offset(&self, h: usize) -> &[BigInt] {
        &self.offsets[h]
    }

    pub fn eval(&self, x: &GroupElement) -> GroupElement {
        match (&self.source, &self.target, &self.map, x) {
            (_, _, HomMap::Table(images), GroupElement::Finite(a)) => GroupElement::Finite(images[*a]),
            (_, _, HomMap::FromFinite(images), GroupElement::Finite(a)) => GroupElement::Cryst(images[*a].clone()),
            (
                _,
                Group::Cryst(_),
                HomMap::Affine {
                    linear, holonomy_map, ..
                },
                GroupElement::Cryst(a),
            ) => {
                let m = vec_add(&linear.mul_vec(&a.translation), &self.offsets[a.holonomy]);
                GroupElement::Cryst(CrystElement::new(m, holonomy_map[a.holonomy]))
            }
            (
                Group::Cryst(s),
                Group::Finite(t),
                HomMap::ToFinite {
                    translation_images,
                    holonomy_images,
                },
                GroupElement::Cryst(a),
            ) => {
                let coords = s.lattice().coords(&a.translation).expect("lattice translation");
                let trans = coords
                    .iter()
                    .zip(translation_images)
                    .fold(t.identity(), |acc, (c, &img)| {
                        let k = c.mod_floor(&BigInt::from(t.element_order(img)));
                        t.mul(acc, t.pow(img, k.to_i64().expect("small exponent")))
                    });
                GroupElement::Finite(t.mul(trans, holonomy_images[a.holonomy]))
            }
            _ => panic!("element kind does not match homomorphism source"),
        }
    }

    pub fn try_eval(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.source.contains(x) {
            return Err(Error::MismatchedGroups(format!("{x} is not in the source group")));
        }
        Ok(self.eval(x))
    }

    fn check_law(&self) -> Result<()> {
        let s = &self.source;
        let t = &self.target;
        let check = |a: &GroupElement, b: &GroupElement| -> Result<()> {
            let lhs = self.eval(&s.mul(a, b));
            let rhs = t.mul(&self.eval(a), &self.eval(b));
            if lhs == rhs {
                return Ok(());
            }
            Err(Error::InvalidHom(format!(
                "pair ({}, {}): f(ab) = {} but f(a)f(b) = {}",
                s.format_element(a),
                s.format_element(b),
                t.format_element(&lhs),
                t.format_element(&rhs)
            )))
        };
        if self.eval(&s.identity()) != t.identity() {
            return Err(Error::InvalidHom("identity is not mapped to identity".into()));
        }
        let gens = s.generators();
        match s {
            Group::Finite(_) => {
                // Table and FromFinite: every pair
                let all = s.elements().expect("finite");
                for a in &all {
                    for b in &all {
                        check(a, b)?;
                    }
                }
            }
            Group::Cryst(c) if t.is_finite() => {
                // Check on the finite quotient by N L, N the target exponent;
                // the map factors through it by construction.
                let n = t.as_finite().expect("finite").exponent() as i64;
                let deep = Sublattice::new(&c.lattice().hnf().scale(&BigInt::from(n)))?;
                let reps = deep.coset_representatives_in(c.lattice())?;
                for m in &reps {
                    for h in 0..c.holonomy().order() {
                        let a = GroupElement::Cryst(CrystElement::new(m.clone(), h));
                        for g in &gens {
                            check(&a, g)?;
                        }
                    }
                }
            }
            Group::Cryst(_) => {
                for a in &gens {
                    for b in &gens {
                        check(a, b)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// `x -> β φ(x) β^-1`.
    pub fn conjugate(&self, beta: &GroupElement) -> Result<Self> {
        let t = &self.target;
        if !t.contains(beta) {
            return Err(Error::MismatchedGroups(format!("{beta} is not in the target group")));
        }
        let conj = |x: &GroupElement| t.conjugate(beta, x);
        let map = match &self.map {
            HomMap::Table(images) => HomMap::Table(
                images
                    .iter()
                    .map(|&a| conj(&GroupElement::Finite(a)).as_finite().expect("finite"))
                    .collect(),
            ),
            HomMap::FromFinite(images) => HomMap::FromFinite(
                images
                    .iter()
                    .map(|a| conj(&GroupElement::Cryst(a.clone())).as_cryst().expect("cryst").clone())
                    .collect(),
            ),
            HomMap::ToFinite {
                translation_images,
                holonomy_images,
            } => {
                let c = |v: &[usize]| -> Vec<usize> {
                    v.iter()
                        .map(|&a| conj(&GroupElement::Finite(a)).as_finite().expect("finite"))
                        .collect()
                };
                HomMap::ToFinite {
                    translation_images: c(translation_images),
                    holonomy_images: c(holonomy_images),
                }
            }
            HomMap::Affine {
                linear,
                translation,
                holonomy_map,
            } => {
                let tc = t.as_cryst().expect("cryst");
                let b = beta.as_cryst().expect("cryst");
                let ab = tc.rotation(b.holonomy);
                let shift = tc.affine_translation(b);
                let hol = tc.holonomy();
                HomMap::Affine {
                    linear: ab * linear,
                    translation: ab
                        .mul_qvec(translation)
                        .into_iter()
                        .zip(shift)
                        .map(|(x, y)| x + y)
                        .collect(),
                    holonomy_map: holonomy_map.iter().map(|&h| hol.conjugate(b.holonomy, h)).collect(),
                }
            }
        };
        Self::new(self.source.clone(), self.target.clone(), map)
    }

    /// Whether both maps agree on every source generator.
    pub fn agrees_on_generators(&self, other: &GroupHom) -> bool {
        self.source.generators().iter().all(|g| self.eval(g) == other.eval(g))
    }

    pub fn is_trivial(&self) -> bool {
        let e = self.target.identity();
        self.source.generators().iter().all(|g| self.eval(g) == e)
    }
}

fn affine_offsets(
    s: &CrystGroup,
    t: &CrystGroup,
    linear: &IntMatrix,
    translation: &QVector,
    theta: &[usize],
) -> Result<Vec<Vec<BigInt>>> {
    if linear.rows() != t.dim() || linear.cols() != s.dim() || translation.len() != t.dim() {
        return Err(Error::Dimension(format!(
            "affine data must be {}x{} with a translation of length {}",
            t.dim(),
            s.dim(),
            t.dim()
        )));
    }
    if theta.len() != s.holonomy().order() || theta.iter().any(|&x| x >= t.holonomy().order()) {
        return Err(Error::InvalidHom("holonomy map has the wrong shape".into()));
    }
    s.holonomy()
        .check_hom(t.holonomy(), theta)
        .map_err(|e| Error::InvalidHom(format!("holonomy map: {e}")))?;
    if let Some(w) = s.lattice().image_witness(linear, t.lattice()) {
        return Err(Error::InvalidHom(format!(
            "linear part maps lattice vector {} outside the target lattice",
            super::cryst::format_ints(&w)
        )));
    }
    let n = t.dim();
    (0..s.holonomy().order())
        .map(|h| {
            let th = theta[h];
            if linear * s.rotation(h) != t.rotation(th) * linear {
                return Err(Error::InvalidHom(format!(
                    "D A_{h} != A_{th} D for holonomy element {h}"
                )));
            }
            let i_minus_a = IntMatrix::identity(n).try_sub(t.rotation(th))?;
            let c: QVector = linear
                .mul_qvec(s.translation_part(h))
                .into_iter()
                .zip(i_minus_a.mul_qvec(translation))
                .zip(t.translation_part(th))
                .map(|((a, b), c)| a + b - c)
                .collect();
            to_integral(&c).filter(|c| t.lattice().contains(c)).ok_or_else(|| {
                Error::InvalidHom(format!(
                    "image of holonomy element {h} has non-lattice offset {}",
                    format_qvector(&c)
                ))
            })
        })
        .collect()
}

/// The full table of a finite-to-finite map, for convenience.
pub fn table_of(hom: &GroupHom) -> Option<Vec<usize>> {
    let s: &FiniteGroupTable = hom.source().as_finite()?;
    hom.target().as_finite()?;
    Some(
        (0..s.order())
            .map(|a| hom.eval(&GroupElement::Finite(a)).as_finite().expect("finite"))
            .collect(),
    )
}
