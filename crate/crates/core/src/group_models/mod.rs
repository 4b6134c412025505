//! Finite groups by multiplication table, crystallographic groups by
//! lattice and holonomy data, homomorphisms between them, and finite
//! quotients by invariant subgroups.

pub mod catalog;
pub mod cover;
pub mod cryst;
pub mod finite;
pub mod group;
pub mod hom;
pub mod io;
pub mod sublattice;

pub use catalog::{builtin_catalog, g2_bieberbach, CatalogEntry, HomBundle};
pub use cover::{restrict_and_descend, CoverSide, FiniteQuotient, Restricted, Subgroup, SubgroupSpec};
pub use cryst::{CrystElement, CrystGroup};
pub use finite::FiniteGroupTable;
pub use group::{Group, GroupElement};
pub use hom::{GroupHom, HomMap};
pub use sublattice::Sublattice;
