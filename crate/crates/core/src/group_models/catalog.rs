//! Built-in groups and homomorphism bundles.

use std::sync::Arc;

use num_bigint::BigInt;

use super::cover::SubgroupSpec;
use super::cryst::{expect_equal, CrystElement, CrystGroup};
use super::finite::FiniteGroupTable;
use super::group::{Group, GroupElement};
use super::hom::{GroupHom, HomMap};
use super::sublattice::Sublattice;
use crate::error::{Error, Result};
use crate::lattice_alg::{ints, rat, IntMatrix, Rational};

/// A pair of homomorphisms with cover data, as used by the algebraic checks.
#[derive(Clone, Debug)]
pub struct HomBundle {
    pub name: String,
    pub phi: GroupHom,
    pub psi: GroupHom,
    pub gamma1: SubgroupSpec,
    pub gamma2: SubgroupSpec,
}

#[derive(Clone, Debug)]
pub enum CatalogEntry {
    Group(Group),
    Bundle(Box<HomBundle>),
}

pub const CATALOG_NAMES: &[&str] = &[
    "torus_1",
    "torus_2",
    "torus_3",
    "torus_4",
    "torus_5",
    "torus_6",
    "g2_bieberbach",
    "cyclic_2",
    "example1_bundle",
    "example2_bundle",
];

pub fn builtin_catalog(name: &str) -> Result<CatalogEntry> {
    if let Some(n) = name.strip_prefix("torus_") {
        return match n.parse::<usize>() {
            Ok(n) if (1..=6).contains(&n) => Ok(CatalogEntry::Group(CrystGroup::torus(n).into())),
            _ => Err(Error::UnknownName(name.into())),
        };
    }
    match name {
        "g2_bieberbach" => Ok(CatalogEntry::Group(g2_bieberbach().into())),
        "cyclic_2" => Ok(CatalogEntry::Group(FiniteGroupTable::cyclic(2).into())),
        "example1_bundle" => Ok(CatalogEntry::Bundle(Box::new(example1_bundle()))),
        "example2_bundle" => Ok(CatalogEntry::Bundle(Box::new(example2_bundle()))),
        _ => Err(Error::UnknownName(name.into())),
    }
}

/// Holonomy index of `α` in [`g2_bieberbach`].
pub const G2_ALPHA: usize = 1;

/// The orientable Bieberbach group with holonomy `Z/2`, generated by the
/// unit translations and `α : x -> diag(1, -1, -1) x + (1/2, 0, 0)`.
pub fn g2_bieberbach() -> CrystGroup {
    g2_with_shift(vec![rat(1, 2), rat(0, 1), rat(0, 1)]).expect("built-in group")
}

/// Same rotation data with an arbitrary translation part for `α`.
pub fn g2_with_shift(s_alpha: Vec<Rational>) -> Result<CrystGroup> {
    CrystGroup::with_orientation(
        Sublattice::full(3),
        FiniteGroupTable::cyclic(2),
        vec![
            IntMatrix::identity(3),
            IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]),
        ],
        vec![vec![rat(0, 1); 3], s_alpha],
        true,
    )
}

pub fn g2_alpha(g: &CrystGroup) -> CrystElement {
    CrystElement::new(vec![BigInt::default(); g.dim()], G2_ALPHA)
}

/// Checks the defining relations `α² = t₁` and `α t_i α⁻¹ = t_i⁻¹` for
/// `i = 2, 3`, plus commutation of the translations.
pub fn verify_g2_relations(g: &CrystGroup) -> Result<()> {
    let alpha = g2_alpha(g);
    let t: Vec<CrystElement> = (0..3).map(|i| g.unit_translation(i)).collect();
    expect_equal(g, "α² = t₁", &g.mul(&alpha, &alpha), &t[0])?;
    for (i, ti) in t.iter().enumerate().skip(1) {
        let lhs = g.mul(&g.mul(&alpha, ti), &g.inv(&alpha));
        expect_equal(g, &format!("α t{} α⁻¹ = t{}⁻¹", i + 1, i + 1), &lhs, &g.inv(ti))?;
    }
    for a in &t {
        for b in &t {
            expect_equal(g, "[t_i, t_j] = 1", &g.mul(a, b), &g.mul(b, a))?;
        }
    }
    Ok(())
}

/// `t₁^n₁ t₂^n₂ t₃^n₃ α`.
pub fn g2_word(g: &CrystGroup, n: [i64; 3]) -> CrystElement {
    g.mul(&g.translation(ints(&n)), &g2_alpha(g))
}

/// Flat manifold `G₂` mapping onto `Z/2 = ⟨β⟩`: `φ` kills the lattice and
/// sends `α` to `β`, `ψ` is trivial; `Γ₁ = Z³`, `Γ₂ = {1}`.
pub fn example1_bundle() -> HomBundle {
    let g2: Group = g2_bieberbach().into();
    let z2: Group = FiniteGroupTable::cyclic(2).into();
    let phi = GroupHom::new(
        g2.clone(),
        z2.clone(),
        HomMap::ToFinite {
            translation_images: vec![0, 0, 0],
            holonomy_images: vec![0, 1],
        },
    )
    .expect("example 1 φ");
    let psi = GroupHom::trivial(&g2, &z2).expect("example 1 ψ");
    HomBundle {
        name: "example1".into(),
        phi,
        psi,
        gamma1: SubgroupSpec::Lattice(Sublattice::full(3)),
        gamma2: SubgroupSpec::Elements(vec![0]),
    }
}

/// `Z/2 = ⟨β⟩` into `G₂`: both maps trivial; `Γ₁ = {1}`, `Γ₂ = Z³`.
pub fn example2_bundle() -> HomBundle {
    let z2: Group = FiniteGroupTable::cyclic(2).into();
    let g2: Group = g2_bieberbach().into();
    let phi = GroupHom::trivial(&z2, &g2).expect("example 2 φ");
    HomBundle {
        name: "example2".into(),
        psi: phi.clone(),
        phi,
        gamma1: SubgroupSpec::Elements(vec![0]),
        gamma2: SubgroupSpec::Lattice(Sublattice::full(3)),
    }
}

/// The candidate `Z/2 -> G₂` sending the generator to `t^n α`; always
/// rejected because its square is `t₁^(2n₁+1)`.
pub fn example2_candidate(n: [i64; 3]) -> Result<GroupHom> {
    let g2 = Arc::new(g2_bieberbach());
    let images = vec![g2.identity(), g2_word(&g2, n)];
    GroupHom::new(
        FiniteGroupTable::cyclic(2).into(),
        Group::Cryst(g2),
        HomMap::FromFinite(images),
    )
}

pub fn square_of(g: &Group, x: &GroupElement) -> GroupElement {
    g.mul(x, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_models::cover::{restrict_and_descend, CoverSide};

    #[test]
    fn g2_is_valid_and_satisfies_relations() {
        let g = g2_bieberbach();
        assert!(g.is_orientable());
        assert!(g.is_torsion_free());
        verify_g2_relations(&g).unwrap();
    }

    #[test]
    fn corrupted_shift_breaks_cocycle() {
        // with s_α = 0 the carry vanishes and α² = 1, contradicting α² = t₁
        let g = g2_with_shift(vec![rat(0, 1); 3]).unwrap();
        assert!(verify_g2_relations(&g).is_err());
        assert!(!g.is_torsion_free());
        let err = g2_with_shift(vec![rat(1, 3), rat(0, 1), rat(0, 1)]).unwrap_err();
        assert!(matches!(err, Error::InvalidGroup(m) if m.contains("cocycle")));
    }

    #[test]
    fn catalog_lookup() {
        for name in CATALOG_NAMES {
            builtin_catalog(name).unwrap();
        }
        assert!(matches!(builtin_catalog("torus_7"), Err(Error::UnknownName(_))));
        assert!(matches!(builtin_catalog("klein"), Err(Error::UnknownName(_))));
        match builtin_catalog("cyclic_2").unwrap() {
            CatalogEntry::Group(g) => assert_eq!(g.order(), Some(2)),
            CatalogEntry::Bundle(_) => panic!(),
        }
    }

    #[test]
    fn example2_candidates_rejected() {
        let g2 = g2_bieberbach();
        for n1 in -2..=2 {
            let x = g2_word(&g2, [n1, 1, -1]);
            assert_eq!(g2.mul(&x, &x), g2.translation(ints(&[2 * n1 + 1, 0, 0])));
            assert!(matches!(example2_candidate([n1, 1, -1]), Err(Error::InvalidHom(_))));
        }
    }

    #[test]
    fn example1_descends_to_iso_and_trivial() {
        let b = example1_bundle();
        let s1 = CoverSide::new(b.phi.source(), &b.gamma1).unwrap();
        let s2 = CoverSide::new(b.phi.target(), &b.gamma2).unwrap();
        let phi = restrict_and_descend(&b.phi, &s1, &s2).unwrap();
        let psi = restrict_and_descend(&b.psi, &s1, &s2).unwrap();
        assert!(phi.restricted.is_trivial());
        assert!(psi.restricted.is_trivial());
        assert!(psi.descended.is_trivial());
        assert_eq!(crate::group_models::hom::table_of(&phi.descended).unwrap(), vec![0, 1]);
    }
}
