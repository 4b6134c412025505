//! Named instances shared by the acceptance suite, the command line and the
//! benches.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group_models::{
    g2_bieberbach, CrystGroup, FiniteGroupTable, Group, GroupHom, HomMap, SubgroupSpec, Sublattice,
};
use crate::lattice_alg::{rat, IntMatrix, QVector};
use crate::trace_geometry::AffineMapSpec;

/// A pair of affine maps with a cover `Γ₁ = Γ₂ = k·L` of the lattice.
#[derive(Clone, Debug)]
pub struct GeometricInstance {
    pub name: String,
    pub f: AffineMapSpec,
    pub g: AffineMapSpec,
    pub scale: i64,
}

impl GeometricInstance {
    pub fn gamma(&self) -> Result<SubgroupSpec> {
        Ok(SubgroupSpec::Lattice(Sublattice::scaled(
            self.f.source().dim(),
            self.scale,
        )?))
    }
}

pub fn torus_map(t: &Arc<CrystGroup>, rows: &[Vec<i64>], d: QVector) -> Result<AffineMapSpec> {
    AffineMapSpec::new(t, t, IntMatrix::from_rows(rows), d, vec![0])
}

fn zeros(n: usize) -> QVector {
    vec![rat(0, 1); n]
}

fn instance(name: &str, f: AffineMapSpec, g: AffineMapSpec, scale: i64) -> GeometricInstance {
    GeometricInstance {
        name: name.into(),
        f,
        g,
        scale,
    }
}

/// `x ↦ 3x` against the identity on the circle.
pub fn circle_3_1() -> GeometricInstance {
    let t = Arc::new(CrystGroup::torus(1));
    let f = torus_map(&t, &[vec![3]], zeros(1)).expect("built-in map");
    instance("circle-3-1", f, AffineMapSpec::identity(&t), 2)
}

/// `x ↦ -x` against the identity on the circle.
pub fn circle_reflection() -> GeometricInstance {
    let t = Arc::new(CrystGroup::torus(1));
    let f = torus_map(&t, &[vec![-1]], zeros(1)).expect("built-in map");
    instance("circle-reflection", f, AffineMapSpec::identity(&t), 2)
}

/// The quarter turn of the 2-torus against the identity.
pub fn torus_rotation() -> GeometricInstance {
    let t = Arc::new(CrystGroup::torus(2));
    let f = torus_map(&t, &[vec![0, -1], vec![1, 0]], zeros(2)).expect("built-in map");
    instance("torus-rotation", f, AffineMapSpec::identity(&t), 2)
}

/// The hyperbolic torus map `[[2, 1], [1, 1]]` against the identity.
pub fn torus_hyperbolic() -> GeometricInstance {
    let t = Arc::new(CrystGroup::torus(2));
    let f = torus_map(&t, &[vec![2, 1], vec![1, 1]], zeros(2)).expect("built-in map");
    instance("torus-hyperbolic", f, AffineMapSpec::identity(&t), 2)
}

/// A self-map of the flat manifold with holonomy `Z/2` against the identity.
pub fn g2_pair() -> GeometricInstance {
    let g2 = Arc::new(g2_bieberbach());
    let d = IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
    let f = AffineMapSpec::new(&g2, &g2, d, vec![rat(1, 3), rat(1, 2), rat(0, 1)], vec![0, 1]).expect("built-in map");
    instance("g2-pair", f, AffineMapSpec::identity(&g2), 2)
}

/// A constant map of the `n`-torus with value `d` against the identity.
pub fn constant_map(d: QVector) -> GeometricInstance {
    let n = d.len();
    let t = Arc::new(CrystGroup::torus(n));
    let f = AffineMapSpec::new(&t, &t, IntMatrix::zeros(n, n), d, vec![0]).expect("constant map");
    instance("constant", f, AffineMapSpec::identity(&t), 2)
}

pub const GEOMETRIC_NAMES: &[&str] = &[
    "circle-3-1",
    "circle-reflection",
    "torus-rotation",
    "torus-hyperbolic",
    "g2-pair",
];

pub fn geometric_example(name: &str) -> Result<GeometricInstance> {
    match name {
        "circle-3-1" => Ok(circle_3_1()),
        "circle-reflection" => Ok(circle_reflection()),
        "torus-rotation" => Ok(torus_rotation()),
        "torus-hyperbolic" => Ok(torus_hyperbolic()),
        "g2-pair" => Ok(g2_pair()),
        _ => Err(Error::UnknownName(name.into())),
    }
}

pub const BATTERY_SEED: u64 = 2718;
pub const BATTERY_SIZE: usize = 25;

/// Random pairs of affine torus maps in dimensions 1 to 3 with
/// `0 < |det(G - F)| ≤ 8`, random rational translations, and a cover scale
/// of 2 or 3.
pub fn torus_battery(seed: u64, count: usize) -> Vec<GeometricInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=3);
        let t = Arc::new(CrystGroup::torus(n));
        let mut mk = || -> (Vec<Vec<i64>>, QVector) {
            let rows = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let d = (0..n).map(|_| rat(rng.gen_range(0..6), rng.gen_range(1..=4))).collect();
            (rows, d)
        };
        let (fr, fd) = mk();
        let (gr, gd) = mk();
        let scale = rng.gen_range(2..=3);
        let det = IntMatrix::from_rows(&gr)
            .try_sub(&IntMatrix::from_rows(&fr))
            .and_then(|k| k.det())
            .expect("square matrices");
        if det.is_zero() || det.abs() > BigInt::from(8) {
            continue;
        }
        let f = torus_map(&t, &fr, fd).expect("torus maps are equivariant");
        let g = torus_map(&t, &gr, gd).expect("torus maps are equivariant");
        out.push(instance(&format!("battery-{}", out.len()), f, g, scale));
    }
    out
}

/// A pair of homomorphisms of finite groups with normal subgroups
/// `Γ₁ ⊆ Π₁`, `Γ₂ ⊆ Π₂` carried into each other by both maps.
#[derive(Clone, Debug)]
pub struct FiniteBundle {
    pub source: Arc<FiniteGroupTable>,
    pub target: Arc<FiniteGroupTable>,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
}

impl FiniteBundle {
    pub fn homs(&self) -> Result<(GroupHom, GroupHom)> {
        let s = Group::Finite(Arc::clone(&self.source));
        let t = Group::Finite(Arc::clone(&self.target));
        Ok((
            GroupHom::new(s.clone(), t.clone(), HomMap::Table(self.phi.clone()))?,
            GroupHom::new(s, t, HomMap::Table(self.psi.clone()))?,
        ))
    }
}

/// `Z/2, Z/3, Z/4, Z/2×Z/2, Z/6, S₃`.
pub fn groups_up_to_6() -> Vec<(String, Arc<FiniteGroupTable>)> {
    let c = FiniteGroupTable::cyclic;
    vec![
        ("Z2".into(), Arc::new(c(2))),
        ("Z3".into(), Arc::new(c(3))),
        ("Z4".into(), Arc::new(c(4))),
        ("Z2xZ2".into(), Arc::new(FiniteGroupTable::direct_product(&c(2), &c(2)))),
        ("Z6".into(), Arc::new(c(6))),
        ("S3".into(), Arc::new(FiniteGroupTable::symmetric(3))),
    ]
}

/// Groups of order at most 16 used for the random bundles.
pub fn groups_up_to_16() -> Vec<(String, Arc<FiniteGroupTable>)> {
    let c = FiniteGroupTable::cyclic;
    let mut out = groups_up_to_6();
    out.extend([
        ("Z8".to_string(), Arc::new(c(8))),
        ("Z2xZ4".into(), Arc::new(FiniteGroupTable::direct_product(&c(2), &c(4)))),
        ("D4".into(), Arc::new(FiniteGroupTable::dihedral(4))),
        ("Q8".into(), Arc::new(FiniteGroupTable::quaternion())),
        ("D6".into(), Arc::new(FiniteGroupTable::dihedral(6))),
        ("A4".into(), Arc::new(FiniteGroupTable::alternating4())),
        ("Z12".into(), Arc::new(c(12))),
        ("D8".into(), Arc::new(FiniteGroupTable::dihedral(8))),
        ("Z4xZ4".into(), Arc::new(FiniteGroupTable::direct_product(&c(4), &c(4)))),
        ("Z2xZ8".into(), Arc::new(FiniteGroupTable::direct_product(&c(2), &c(8)))),
    ]);
    out
}

/// `φ⁻¹(Γ₂) ∩ ψ⁻¹(Γ₂)`, the largest admissible `Γ₁`.
fn largest_gamma1(phi: &[usize], psi: &[usize], gamma2: &[usize]) -> Vec<usize> {
    (0..phi.len())
        .filter(|&x| gamma2.contains(&phi[x]) && gamma2.contains(&psi[x]))
        .collect()
}

/// Every pair of homomorphisms between groups of order at most 6, with every
/// normal `Γ₂` and the largest admissible `Γ₁`.
pub fn exhaustive_finite_bundles() -> Vec<FiniteBundle> {
    let groups = groups_up_to_6();
    let mut out = Vec::new();
    for (_, s) in &groups {
        for (_, t) in &groups {
            let homs = s.all_homs(t);
            let normals = t.normal_subgroups();
            for phi in &homs {
                for psi in &homs {
                    for gamma2 in &normals {
                        out.push(FiniteBundle {
                            source: Arc::clone(s),
                            target: Arc::clone(t),
                            phi: phi.clone(),
                            psi: psi.clone(),
                            gamma1: largest_gamma1(phi, psi, gamma2),
                            gamma2: gamma2.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Random bundles over groups of order at most 16; `Γ₁` is a random normal
/// subgroup of the largest admissible one.
pub fn random_finite_bundles(seed: u64, count: usize) -> Vec<FiniteBundle> {
    let groups = groups_up_to_16();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let s = &groups[rng.gen_range(0..groups.len())].1;
        let t = &groups[rng.gen_range(0..groups.len())].1;
        let homs = s.all_homs(t);
        let phi = homs[rng.gen_range(0..homs.len())].clone();
        let psi = homs[rng.gen_range(0..homs.len())].clone();
        let normals = t.normal_subgroups();
        let gamma2 = normals[rng.gen_range(0..normals.len())].clone();
        let largest = largest_gamma1(&phi, &psi, &gamma2);
        let inside: Vec<Vec<usize>> = s
            .normal_subgroups()
            .into_iter()
            .filter(|n| n.iter().all(|x| largest.contains(x)))
            .collect();
        let gamma1 = inside[rng.gen_range(0..inside.len())].clone();
        out.push(FiniteBundle {
            source: Arc::clone(s),
            target: Arc::clone(t),
            phi,
            psi,
            gamma1,
            gamma2,
        });
    }
    out
}
