//! `coin(φ, ψ) = {g : φ(g) = ψ(g)}` and its image in a finite quotient.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group_models::{CoverSide, CrystElement, Group, GroupElement, GroupHom, Subgroup, Sublattice};
use crate::lattice_alg::{solve_affine_lattice, solve_integer, vec_sub, IntMatrix};

/// A coincidence subgroup in one of three shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoinSubgroup {
    /// Finite source: the elements themselves.
    Finite(Vec<GroupElement>),
    /// Crystallographic source, finite target: the subgroup contains the
    /// translations `deep = N L` (`N` the target exponent) and is listed by
    /// its members among the `total` representatives of `Π₁ / deep`.
    Cofinite {
        deep: Sublattice,
        members: Vec<CrystElement>,
        total: usize,
    },
    /// Affinely induced pair: one coset `m₀ + K` per admissible holonomy,
    /// `K` spanned by `kernel`.
    Affine {
        kernel: Vec<Vec<BigInt>>,
        cosets: Vec<CrystElement>,
    },
}

impl CoinSubgroup {
    /// Number of elements when finite.
    pub fn order(&self) -> Option<usize> {
        match self {
            CoinSubgroup::Finite(e) => Some(e.len()),
            CoinSubgroup::Cofinite { .. } => None,
            CoinSubgroup::Affine { kernel, cosets } => kernel.is_empty().then_some(cosets.len()),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    /// Whether the subgroup equals `sub` (same ambient group assumed).
    pub fn equals(&self, sub: &Subgroup) -> bool {
        match self {
            CoinSubgroup::Finite(elems) => {
                let Some(s) = sub.elements() else { return false };
                let mine: BTreeSet<usize> = elems.iter().filter_map(GroupElement::as_finite).collect();
                mine == s.iter().copied().collect()
            }
            CoinSubgroup::Cofinite { deep, members, .. } => {
                let Some(l) = sub.sublattice() else { return false };
                let e = hol_identity(sub);
                if !l.contains_lattice(deep) {
                    return false;
                }
                let Ok(expected) = deep.coset_representatives_in(l) else {
                    return false;
                };
                let got: BTreeSet<Vec<BigInt>> = members.iter().map(|m| m.translation.clone()).collect();
                members.iter().all(|m| m.holonomy == e) && got == expected.into_iter().collect()
            }
            CoinSubgroup::Affine { kernel, cosets } => {
                let Some(l) = sub.sublattice() else { return false };
                if kernel.len() != l.dim() || cosets.len() != 1 || cosets[0].holonomy != hol_identity(sub) {
                    return false;
                }
                let Ok(k) = Sublattice::new(&IntMatrix::from_columns(l.dim(), kernel)) else {
                    return false;
                };
                k == *l && l.contains(&cosets[0].translation)
            }
        }
    }
}

fn hol_identity(sub: &Subgroup) -> usize {
    sub.ambient().as_cryst().map_or(0, |c| c.holonomy().identity())
}

fn cryst_parts(x: &GroupElement) -> &CrystElement {
    x.as_cryst().expect("cryst element")
}

pub fn coin_subgroup(phi: &GroupHom, psi: &GroupHom) -> Result<CoinSubgroup> {
    if !phi.source().same(psi.source()) || !phi.target().same(psi.target()) {
        return Err(Error::MismatchedGroups("φ and ψ must share source and target".into()));
    }
    match (phi.source(), phi.target()) {
        (Group::Finite(_), _) => Ok(CoinSubgroup::Finite(
            phi.source()
                .elements()
                .expect("finite")
                .into_iter()
                .filter(|g| phi.eval(g) == psi.eval(g))
                .collect(),
        )),
        (Group::Cryst(s), Group::Finite(t)) => {
            let n = BigInt::from(t.exponent());
            let deep = Sublattice::new(&s.lattice().hnf().scale(&n))?;
            let reps = deep.coset_representatives_in(s.lattice())?;
            let mut members = Vec::new();
            for h in 0..s.holonomy().order() {
                for m in &reps {
                    let x = GroupElement::Cryst(CrystElement::new(m.clone(), h));
                    if phi.eval(&x) == psi.eval(&x) {
                        members.push(CrystElement::new(m.clone(), h));
                    }
                }
            }
            Ok(CoinSubgroup::Cofinite {
                deep,
                members,
                total: reps.len() * s.holonomy().order(),
            })
        }
        (Group::Cryst(s), Group::Cryst(_)) => {
            let ((d, _, theta), (e, _, theta2)) = affine_pair(phi, psi)?;
            let b1 = s.lattice().basis_matrix();
            let m = &e.try_sub(d)? * &b1;
            let kernel = match solve_affine_lattice(&m, &vec![BigInt::default(); m.rows()]) {
                Some(sol) => sol.kernel.iter().map(|k| b1.mul_vec(k)).collect(),
                None => Vec::new(),
            };
            let mut cosets = Vec::new();
            for h in 0..s.holonomy().order() {
                if theta[h] != theta2[h] {
                    continue;
                }
                let rhs = vec_sub(phi.offset(h), psi.offset(h));
                if let Some(j) = solve_integer(&m, &rhs) {
                    cosets.push(CrystElement::new(b1.mul_vec(&j), h));
                }
            }
            Ok(CoinSubgroup::Affine { kernel, cosets })
        }
    }
}

type AffineParts<'a> = (&'a IntMatrix, &'a crate::lattice_alg::QVector, &'a [usize]);

fn affine_pair<'a>(phi: &'a GroupHom, psi: &'a GroupHom) -> Result<(AffineParts<'a>, AffineParts<'a>)> {
    match (phi.affine_parts(), psi.affine_parts()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::InvalidHom("expected affinely induced homomorphisms".into())),
    }
}

/// The image `u(coin(φ, ψ))` in `Π₁ / Γ₁`, as sorted quotient indices.
pub fn projected_coin(phi: &GroupHom, psi: &GroupHom, side1: &CoverSide) -> Result<Vec<usize>> {
    if !phi.source().same(side1.ambient()) {
        return Err(Error::MismatchedGroups("cover data belongs to another group".into()));
    }
    let quotient = &side1.quotient;
    let mut out = BTreeSet::new();
    match (phi.source(), phi.target()) {
        (Group::Finite(_), _) => {
            if let CoinSubgroup::Finite(elems) = coin_subgroup(phi, psi)? {
                out.extend(elems.iter().map(|g| quotient.project(g)));
            }
        }
        (Group::Cryst(_), Group::Finite(t)) => {
            // u(coin) ∋ q iff some γ x₀ (γ ∈ Γ₁) is a coincidence, i.e. some
            // (a, c) in the image of Γ₁ under (φ, ψ) has a φ(x₀) = c ψ(x₀)
            let gamma = side1.sub.sublattice().expect("lattice subgroup");
            let src = phi.source().as_cryst().expect("cryst");
            let gens: Vec<(usize, usize)> = gamma
                .basis()
                .into_iter()
                .map(|b| {
                    let g = GroupElement::Cryst(src.translation(b));
                    (
                        phi.eval(&g).as_finite().expect("finite"),
                        psi.eval(&g).as_finite().expect("finite"),
                    )
                })
                .collect();
            let pairs = generated_pairs(t, &gens);
            for (q, x0) in quotient.representatives().iter().enumerate() {
                let f = phi.eval(x0).as_finite().expect("finite");
                let p = psi.eval(x0).as_finite().expect("finite");
                if pairs.iter().any(|&(a, c)| t.mul(a, f) == t.mul(c, p)) {
                    out.insert(q);
                }
            }
        }
        (Group::Cryst(_), Group::Cryst(_)) => {
            let ((d, _, theta), (e, _, theta2)) = affine_pair(phi, psi)?;
            let diff = e.try_sub(d)?;
            let gamma = side1.sub.sublattice().expect("lattice subgroup");
            let m = &diff * &gamma.basis_matrix();
            for (q, x0) in quotient.representatives().iter().enumerate() {
                let x0 = cryst_parts(x0);
                let h = x0.holonomy;
                if theta[h] != theta2[h] {
                    continue;
                }
                let rhs = vec_sub(&vec_sub(phi.offset(h), psi.offset(h)), &diff.mul_vec(&x0.translation));
                if solve_integer(&m, &rhs).is_some() {
                    out.insert(q);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn generated_pairs(t: &crate::group_models::FiniteGroupTable, gens: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let e = t.identity();
    let mut seen: HashSet<(usize, usize)> = HashSet::from([(e, e)]);
    let mut queue = VecDeque::from([(e, e)]);
    while let Some((a, c)) = queue.pop_front() {
        for &(x, y) in gens {
            let next = (t.mul(a, x), t.mul(c, y));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut v: Vec<(usize, usize)> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

/// `[A : B]` for finite subsets given as counts.
pub(crate) fn exact_ratio(a: usize, b: usize) -> Option<usize> {
    (b != 0 && a.is_multiple_of(b)).then(|| a / b)
}
