use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice_alg::{
    fract, hermite_normal_form, int_to_rat, to_integral, IntMatrix, QVector, Rational, RationalMatrix,
};

/// A full-rank sublattice of `Z^n`, stored by its square Hermite basis.
///
/// The rows of `hnf` generate the lattice; the matrix is upper triangular
/// with positive diagonal, so [`Sublattice::reduce`] gives a canonical coset
/// representative in the box `0 <= v_i < hnf[i][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    hnf: IntMatrix,
    index: BigInt,
}

impl Sublattice {
    /// Lattice generated by the rows of `generators`.
    pub fn new(generators: &IntMatrix) -> Result<Self> {
        let n = generators.cols();
        let hd = hermite_normal_form(generators);
        let index = hd
            .lattice_index()
            .ok_or_else(|| Error::InvalidGroup(format!("sublattice of Z^{n} is not full rank")))?;
        let rows: Vec<Vec<BigInt>> = (0..n).map(|i| hd.h.row(i).to_vec()).collect();
        Ok(Self {
            hnf: IntMatrix::from_rows(&rows),
            index,
        })
    }

    pub fn full(n: usize) -> Self {
        Self {
            hnf: IntMatrix::identity(n),
            index: BigInt::from(1),
        }
    }

    /// `k Z^n`.
    pub fn scaled(n: usize, k: i64) -> Result<Self> {
        Self::new(&IntMatrix::scalar(n, k))
    }

    pub fn dim(&self) -> usize {
        self.hnf.rows()
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// `[Z^n : L]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn is_full(&self) -> bool {
        self.index == BigInt::from(1)
    }

    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.hnf.to_rows()
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> IntMatrix {
        self.hnf.transpose()
    }

    /// Canonical representative of `v + L` in the Hermite box.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let q = v[i].div_floor(self.hnf.get(i, i));
            if !q.is_zero() {
                for (j, x) in v.iter_mut().enumerate().skip(i) {
                    *x -= &q * self.hnf.get(i, j);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_rational(&self, v: &[Rational]) -> bool {
        to_integral(v).is_some_and(|w| self.contains(&w))
    }

    /// `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// `A L ⊆ L`; for unimodular `A` this is equality.
    pub fn is_invariant(&self, a: &IntMatrix) -> bool {
        self.basis().iter().all(|b| self.contains(&a.mul_vec(b)))
    }

    /// `A L ⊆ target`, returning a basis vector witnessing failure.
    pub fn image_witness(&self, a: &IntMatrix, target: &Sublattice) -> Option<Vec<BigInt>> {
        self.basis().into_iter().find(|b| !target.contains(&a.mul_vec(b)))
    }

    /// Integer coordinates of a lattice vector in the Hermite basis.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        // basis_matrix is lower triangular: forward substitution
        let n = self.dim();
        let mut c = vec![BigInt::zero(); n];
        for i in 0..n {
            let mut r = v[i].clone();
            for (k, ck) in c.iter().enumerate().take(i) {
                r -= ck * self.hnf.get(k, i);
            }
            let (q, rem) = r.div_rem(self.hnf.get(i, i));
            if !rem.is_zero() {
                return None;
            }
            c[i] = q;
        }
        Some(c)
    }

    pub fn from_coords(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.basis_matrix().mul_vec(c)
    }

    pub fn rational_coords(&self, x: &[Rational]) -> QVector {
        self.inverse_basis().mul_qvec(x)
    }

    fn inverse_basis(&self) -> RationalMatrix {
        self.basis_matrix().rational_inverse().expect("full-rank lattice basis")
    }

    /// Representative of `x + L` in the half-open parallelepiped spanned by
    /// the basis.
    pub fn reduce_point(&self, x: &[Rational]) -> QVector {
        let c: QVector = self.rational_coords(x).iter().map(fract).collect();
        self.basis_matrix().mul_qvec(&c)
    }

    /// Whether `x` lies in the half-open parallelepiped.
    pub fn in_fundamental_domain(&self, x: &[Rational]) -> bool {
        let zero = Rational::zero();
        let one = int_to_rat(&BigInt::from(1));
        self.rational_coords(x).iter().all(|c| *c >= zero && *c < one)
    }

    /// Hermite-box representatives of `Z^n / L`, lexicographic.
    pub fn box_representatives(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
        for i in 0..self.dim() {
            let d = self.hnf.get(i, i).to_u64().expect("index fits in u64");
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |k| {
                        let mut q = p.clone();
                        q.push(BigInt::from(k));
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Canonical representatives of `outer / self`, i.e. box
    /// representatives of `Z^n / self` lying in `outer`.
    pub fn coset_representatives_in(&self, outer: &Sublattice) -> Result<Vec<Vec<BigInt>>> {
        if !outer.contains_lattice(self) {
            return Err(Error::Containment(format!(
                "{} is not contained in {}",
                self.hnf, outer.hnf
            )));
        }
        Ok(self
            .box_representatives()
            .into_iter()
            .filter(|v| outer.contains(v))
            .collect())
    }

    /// `[outer : self]`.
    pub fn relative_index(&self, outer: &Sublattice) -> BigInt {
        &self.index / &outer.index
    }
}
