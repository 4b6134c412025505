use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::finite::FiniteGroupTable;
use super::sublattice::Sublattice;
use crate::error::{Error, Result};
use crate::lattice_alg::{
    format_qvector, ints_to_rats, solve_integer, to_integral, vec_add, vec_neg, IntMatrix, QVector, Rational,
};

/// A crystallographic group: the affine maps `x -> A_h x + s_h + m` with `h`
/// in a finite holonomy group and `m` in an invariant lattice `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystGroup {
    dim: usize,
    lattice: Sublattice,
    holonomy: Arc<FiniteGroupTable>,
    rotations: Vec<IntMatrix>,
    translations: Vec<QVector>,
    orientable: bool,
    // carry[h][k] = s_h + A_h s_k - s_hk, an element of L
    carry: Vec<Vec<Vec<BigInt>>>,
}

/// Element `(m, h)` of a crystallographic group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrystElement {
    pub translation: Vec<BigInt>,
    pub holonomy: usize,
}

impl CrystElement {
    pub fn new(translation: Vec<BigInt>, holonomy: usize) -> Self {
        Self { translation, holonomy }
    }
}

impl CrystGroup {
    pub fn new(
        lattice: Sublattice,
        holonomy: FiniteGroupTable,
        rotations: Vec<IntMatrix>,
        translations: Vec<QVector>,
    ) -> Result<Self> {
        let dim = lattice.dim();
        let k = holonomy.order();
        if rotations.len() != k || translations.len() != k {
            return Err(Error::InvalidGroup(format!(
                "expected {k} rotation and translation parts, got {} and {}",
                rotations.len(),
                translations.len()
            )));
        }
        for (h, (a, s)) in rotations.iter().zip(&translations).enumerate() {
            if a.rows() != dim || a.cols() != dim || s.len() != dim {
                return Err(Error::Dimension(format!("holonomy element {h} has wrong shape")));
            }
            if !a.is_unimodular() {
                return Err(Error::InvalidGroup(format!("rotation part of {h} is not unimodular")));
            }
            if !lattice.is_invariant(a) {
                return Err(Error::NotInvariant(format!(
                    "lattice is not invariant under the rotation part of {h}"
                )));
            }
        }
        let e = holonomy.identity();
        if !rotations[e].is_identity() || !translations[e].iter().all(|x| x == &Rational::default()) {
            return Err(Error::InvalidGroup("identity must act as (I, 0)".into()));
        }
        let mut carry = vec![vec![Vec::new(); k]; k];
        for h in 0..k {
            for g in 0..k {
                let hg = holonomy.mul(h, g);
                if &rotations[h] * &rotations[g] != rotations[hg] {
                    return Err(Error::InvalidGroup(format!(
                        "cocycle condition fails: A_{h} A_{g} != A_{hg}"
                    )));
                }
                let c: QVector = rotations[h]
                    .mul_qvec(&translations[g])
                    .iter()
                    .zip(&translations[h])
                    .zip(&translations[hg])
                    .map(|((a, b), c)| a + b - c)
                    .collect();
                match to_integral(&c) {
                    Some(c) if lattice.contains(&c) => carry[h][g] = c,
                    _ => {
                        return Err(Error::InvalidGroup(format!(
                            "cocycle condition fails: s_{h} + A_{h} s_{g} - s_{hg} = {} is not a lattice vector",
                            format_qvector(&c)
                        )))
                    }
                }
            }
        }
        let orientable = rotations.iter().all(|a| a.det().is_ok_and(|d| d.is_positive()));
        Ok(Self {
            dim,
            lattice,
            holonomy: Arc::new(holonomy),
            rotations,
            translations,
            orientable,
            carry,
        })
    }

    /// As [`CrystGroup::new`], additionally checking a declared orientability
    /// flag.
    pub fn with_orientation(
        lattice: Sublattice,
        holonomy: FiniteGroupTable,
        rotations: Vec<IntMatrix>,
        translations: Vec<QVector>,
        orientable: bool,
    ) -> Result<Self> {
        let g = Self::new(lattice, holonomy, rotations, translations)?;
        if g.orientable != orientable {
            return Err(Error::InvalidGroup(format!(
                "declared orientable = {orientable} but rotation determinants say {}",
                g.orientable
            )));
        }
        Ok(g)
    }

    /// Pure translation group of a lattice (a torus when `L = Z^n`).
    pub fn lattice_group(lattice: Sublattice) -> Self {
        let n = lattice.dim();
        Self::new(
            lattice,
            FiniteGroupTable::trivial(),
            vec![IntMatrix::identity(n)],
            vec![ints_to_rats(&vec![BigInt::default(); n])],
        )
        .expect("lattice group")
    }

    pub fn torus(n: usize) -> Self {
        Self::lattice_group(Sublattice::full(n))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lattice
    }

    pub fn holonomy(&self) -> &FiniteGroupTable {
        &self.holonomy
    }

    pub fn holonomy_arc(&self) -> Arc<FiniteGroupTable> {
        Arc::clone(&self.holonomy)
    }

    pub fn rotation(&self, h: usize) -> &IntMatrix {
        &self.rotations[h]
    }

    pub fn rotations(&self) -> &[IntMatrix] {
        &self.rotations
    }

    pub fn translation_part(&self, h: usize) -> &QVector {
        &self.translations[h]
    }

    pub fn translations(&self) -> &[QVector] {
        &self.translations
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn is_lattice_group(&self) -> bool {
        self.holonomy.order() == 1
    }

    pub fn carry(&self, h: usize, g: usize) -> &[BigInt] {
        &self.carry[h][g]
    }

    pub fn identity(&self) -> CrystElement {
        CrystElement::new(vec![BigInt::default(); self.dim], self.holonomy.identity())
    }

    pub fn translation(&self, m: Vec<BigInt>) -> CrystElement {
        CrystElement::new(m, self.holonomy.identity())
    }

    pub fn contains(&self, x: &CrystElement) -> bool {
        x.translation.len() == self.dim && x.holonomy < self.holonomy.order() && self.lattice.contains(&x.translation)
    }

    pub fn mul(&self, a: &CrystElement, b: &CrystElement) -> CrystElement {
        let h = a.holonomy;
        let m = vec_add(
            &vec_add(&a.translation, &self.rotations[h].mul_vec(&b.translation)),
            &self.carry[h][b.holonomy],
        );
        CrystElement::new(m, self.holonomy.mul(h, b.holonomy))
    }

    pub fn inv(&self, a: &CrystElement) -> CrystElement {
        let h = a.holonomy;
        let hi = self.holonomy.inv(h);
        let m = vec_add(&a.translation, &self.carry[h][hi]);
        CrystElement::new(vec_neg(&self.rotations[hi].mul_vec(&m)), hi)
    }

    pub fn pow(&self, a: &CrystElement, k: i64) -> CrystElement {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        (0..k.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }

    /// Rational translation vector `s_h + m` of the affine map.
    pub fn affine_translation(&self, a: &CrystElement) -> QVector {
        self.translations[a.holonomy]
            .iter()
            .zip(ints_to_rats(&a.translation))
            .map(|(s, m)| s + m)
            .collect()
    }

    pub fn apply(&self, a: &CrystElement, x: &[Rational]) -> QVector {
        self.rotations[a.holonomy]
            .mul_qvec(x)
            .into_iter()
            .zip(self.affine_translation(a))
            .map(|(p, q)| p + q)
            .collect()
    }

    /// The element acting as `x -> A x + t`, if there is one.
    pub fn from_affine(&self, a: &IntMatrix, t: &[Rational]) -> Option<CrystElement> {
        (0..self.holonomy.order()).find_map(|h| {
            if &self.rotations[h] != a {
                return None;
            }
            let m: QVector = t.iter().zip(&self.translations[h]).map(|(x, s)| x - s).collect();
            to_integral(&m)
                .filter(|m| self.lattice.contains(m))
                .map(|m| CrystElement::new(m, h))
        })
    }

    /// Lattice basis translations followed by `(0, h)` for a generating set
    /// of the holonomy group.
    pub fn generators(&self) -> Vec<CrystElement> {
        let mut gens: Vec<CrystElement> = self.lattice.basis().into_iter().map(|b| self.translation(b)).collect();
        gens.extend(
            self.holonomy
                .generators()
                .into_iter()
                .map(|h| CrystElement::new(vec![BigInt::default(); self.dim], h)),
        );
        gens
    }

    /// Torsion-freeness: no element `(m, h)` with `h != e` has finite order.
    ///
    /// For `h` of order `k`, `(m, h)^k = (N_h m + c_h, e)` with
    /// `N_h = sum A_h^i`; torsion means `N_h m = -c_h` has a lattice solution.
    pub fn is_torsion_free(&self) -> bool {
        let basis = self.lattice.basis_matrix();
        (0..self.holonomy.order())
            .filter(|&h| h != self.holonomy.identity())
            .all(|h| {
                let k = self.holonomy.element_order(h) as i64;
                let zero = CrystElement::new(vec![BigInt::default(); self.dim], h);
                let c = self.pow(&zero, k).translation;
                let mut n = IntMatrix::zeros(self.dim, self.dim);
                let mut p = IntMatrix::identity(self.dim);
                for _ in 0..k {
                    n = n.try_add(&p).expect("same shape");
                    p = &p * &self.rotations[h];
                }
                solve_integer(&(&n * &basis), &vec_neg(&c)).is_none()
            })
    }

    pub fn format_element(&self, a: &CrystElement) -> String {
        if self.is_lattice_group() {
            if self.dim == 1 {
                return a.translation[0].to_string();
            }
            return format_ints(&a.translation);
        }
        format!("({}, h{})", format_ints(&a.translation), a.holonomy)
    }

    /// Random element with translation coordinates in `[-bound, bound]`.
    pub fn random_element(&self, rng: &mut impl rand::Rng, bound: i64) -> CrystElement {
        let c: Vec<BigInt> = (0..self.dim)
            .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
            .collect();
        let h = rng.gen_range(0..self.holonomy.order());
        CrystElement::new(self.lattice.from_coords(&c), h)
    }
}

pub(crate) fn format_ints(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for CrystElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, h{})", format_ints(&self.translation), self.holonomy)
    }
}

/// Checks the presentation-level identity `a == b`, reporting both sides.
pub fn expect_equal(g: &CrystGroup, what: &str, a: &CrystElement, b: &CrystElement) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::InvalidGroup(format!(
            "{what}: {} != {}",
            g.format_element(a),
            g.format_element(b)
        )))
    }
}

impl CrystGroup {
    /// Unit translation `t_i` (for `L = Z^n`).
    pub fn unit_translation(&self, i: usize) -> CrystElement {
        let mut m = vec![BigInt::default(); self.dim];
        m[i] = BigInt::one();
        self.translation(m)
    }
}
