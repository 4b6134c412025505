use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite form `U * M = H`.
///
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`; zero
/// rows are collected at the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, col)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Index of the row lattice in `Z^cols` when it has full rank.
    pub fn lattice_index(&self) -> Option<BigInt> {
        (self.rank() == self.h.cols()).then(|| self.pivots.iter().map(|&(r, c)| self.h.get(r, c).clone()).product())
    }
}

pub fn hermite_normal_form(m: &IntMatrix) -> HermiteDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by_key(|&i| h.get(i, c).abs());
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.add_row_multiple(i, r, &-&q);
                u.add_row_multiple(i, r, &-q);
                clean &= h.get(i, c).is_zero();
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            h.add_row_multiple(i, r, &-&q);
            u.add_row_multiple(i, r, &-q);
        }
        pivots.push((r, c));
        r += 1;
    }
    debug_assert!(pivots.iter().all(|&(r, c)| h.get(r, c) >= &BigInt::one()));
    HermiteDecomposition { h, u, pivots }
}
