use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::rational::{int_to_rat, to_integral, QVector, Rational};

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain of nonnegative entries. `u_inv` is carried along so
/// cokernel representatives can be mapped back without a second inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d_0 | d_1 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    // row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_row_multiple(target, source, k);
        self.u.add_row_multiple(target, source, k);
        self.u_inv.add_col_multiple(source, target, &-k);
    }

    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_col_multiple(target, source, k);
        self.v.add_col_multiple(target, source, k);
    }

    /// Smallest nonzero `|a_ij|` with `i, j >= t`, first in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let Some(_) = w.pivot(t) else { break };
        loop {
            let (pi, pj) = w.pivot(t).expect("nonzero block");
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.a.get(i, t).div_floor(&p);
                w.add_row(i, t, &-q);
                clean &= w.a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = w.a.get(t, j).div_floor(&p);
                w.add_col(j, t, &-q);
                clean &= w.a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.a.negate_col(t);
            w.v.negate_col(t);
        }
        rank = t + 1;
    }
    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
        rank,
    }
}

/// The finite-or-infinite abelian group `Z^m / M Z^n`.
///
/// Elements are compared through Smith coordinates `y = U x`: the first
/// `rank` coordinates are taken modulo their invariant factor, the remaining
/// `m - rank` ones are free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianQuotient {
    smith: SmithDecomposition,
    moduli: Vec<BigInt>,
}

pub fn cokernel(m: &IntMatrix) -> AbelianQuotient {
    let smith = smith_normal_form(m);
    let moduli = (0..m.rows())
        .map(|i| {
            if i < smith.rank {
                smith.d.get(i, i).clone()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    AbelianQuotient { smith, moduli }
}

impl AbelianQuotient {
    pub fn ambient_dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.moduli.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.moduli.iter().product())
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    /// Per-coordinate modulus; zero marks a free coordinate.
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Reduced Smith coordinates; equal iff the vectors are equivalent.
    pub fn canonical_coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.smith
            .u
            .mul_vec(x)
            .into_iter()
            .zip(&self.moduli)
            .map(|(y, d)| if d.is_zero() { y } else { y.mod_floor(d) })
            .collect()
    }

    pub fn from_coords(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.smith.u_inv.mul_vec(y)
    }

    pub fn canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.from_coords(&self.canonical_coords(x))
    }

    pub fn equivalent(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.canonical_coords(x) == self.canonical_coords(y)
    }

    /// All canonical Smith-coordinate vectors in lexicographic order, or
    /// `None` when the quotient is infinite.
    pub fn coordinate_box(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::with_capacity(self.moduli.len())];
        for d in &self.moduli {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    next.push(p);
                    k += 1;
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Canonical representatives, one per element, when finite.
    pub fn representatives(&self) -> Option<Vec<Vec<BigInt>>> {
        self.coordinate_box()
            .map(|ys| ys.iter().map(|y| self.from_coords(y)).collect())
    }
}

/// Real solution set `particular + span(kernel)` of `M x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: QVector,
    pub kernel: Vec<Vec<BigInt>>,
}

fn solve_in_smith(smith: &SmithDecomposition, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = smith.v.cols();
    let c: QVector = smith.u.mul_qvec(b);
    let mut z = vec![Rational::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        if i < smith.rank {
            z[i] = ci / int_to_rat(smith.d.get(i, i));
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(z)
}

pub fn solve_affine_lattice(m: &IntMatrix, b: &[BigInt]) -> Option<AffineSolution> {
    let b: QVector = b.iter().map(int_to_rat).collect();
    solve_affine_rational(m, &b)
}

/// As [`solve_affine_lattice`] with a rational right-hand side.
pub fn solve_affine_rational(m: &IntMatrix, b: &[Rational]) -> Option<AffineSolution> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let smith = smith_normal_form(m);
    let z = solve_in_smith(&smith, b)?;
    let kernel = (smith.rank..m.cols()).map(|j| smith.v.column(j)).collect();
    Some(AffineSolution {
        particular: smith.v.mul_qvec(&z),
        kernel,
    })
}

/// Some integer solution of `M x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let smith = smith_normal_form(m);
    let b: QVector = b.iter().map(int_to_rat).collect();
    let z = to_integral(&solve_in_smith(&smith, &b)?)?;
    Some(smith.v.mul_vec(&z))
}
