//! Twisted classes in a crystallographic target.
//!
//! The holonomy of `ψ(g) x φ(g)^-1` only depends on the holonomies involved,
//! so classes split into sectors indexed by orbits of the holonomy group.
//! Inside the sector of `b`, source translations act on `(v, b)` by adding
//! `ψ(e_j) - A_b φ(e_j)`; the cokernel of those columns is then folded under
//! the remaining (finite) part of the stabilizer.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::group_models::{CrystElement, CrystGroup, Group, GroupElement, GroupHom};
use crate::lattice_alg::{cokernel, vec_sub, AbelianQuotient, IntMatrix};

#[derive(Clone, Debug)]
pub(crate) struct Sector {
    /// Least holonomy index of the orbit.
    pub rep: usize,
    pub quotient: AbelianQuotient,
    /// `(ψ(t), φ(t)^-1)` for a transversal of the stabilizer modulo translations.
    pub stabilizer: Vec<(CrystElement, CrystElement)>,
    /// Class representatives in Smith coordinates, increasing, when finite.
    pub classes: Option<Vec<Vec<BigInt>>>,
    fold: HashMap<Vec<BigInt>, usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct CrystClasses {
    pub target: Arc<CrystGroup>,
    /// Sector index for every target holonomy element.
    pub sector_of: Vec<usize>,
    /// Source element moving the sector representative onto each holonomy.
    pub mover: Vec<GroupElement>,
    pub sectors: Vec<Sector>,
}

fn hol(x: &GroupElement) -> usize {
    x.as_cryst().expect("cryst element").holonomy
}

impl CrystClasses {
    pub fn new(phi: &GroupHom, psi: &GroupHom) -> Self {
        let target = Arc::clone(phi.target().as_cryst().expect("cryst target"));
        let source = phi.source();
        let h2 = target.holonomy();
        let gens = source.generators();
        let gen_hol: Vec<(usize, usize)> = gens
            .iter()
            .map(|g| (hol(&psi.eval(g)), h2.inv(hol(&phi.eval(g)))))
            .collect();

        let k = h2.order();
        let mut sector_of = vec![usize::MAX; k];
        let mut mover: Vec<Option<GroupElement>> = vec![None; k];
        let mut reps = Vec::new();
        for start in 0..k {
            if sector_of[start] != usize::MAX {
                continue;
            }
            let id = reps.len();
            sector_of[start] = id;
            mover[start] = Some(source.identity());
            let mut queue = VecDeque::from([start]);
            while let Some(h) = queue.pop_front() {
                let gh = mover[h].clone().expect("visited");
                for (g, &(a, b)) in gens.iter().zip(&gen_hol) {
                    let next = h2.mul(h2.mul(a, h), b);
                    if sector_of[next] == usize::MAX {
                        sector_of[next] = id;
                        mover[next] = Some(source.mul(g, &gh));
                        queue.push_back(next);
                    }
                }
            }
            reps.push(start);
        }
        let mover: Vec<GroupElement> = mover.into_iter().map(|m| m.expect("visited")).collect();
        let sectors = reps.into_iter().map(|r| build_sector(phi, psi, &target, r)).collect();
        CrystClasses {
            target,
            sector_of,
            mover,
            sectors,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.sectors.iter().all(|s| s.classes.is_some())
    }

    pub fn degenerate_sectors(&self) -> Vec<usize> {
        self.sectors
            .iter()
            .filter(|s| !s.quotient.is_finite())
            .map(|s| s.rep)
            .collect()
    }

    fn sector_index(&self, rep: usize) -> Option<usize> {
        self.sectors.iter().position(|s| s.rep == rep)
    }

    /// `(sector representative, folded Smith coordinates)` of the class of `x`.
    pub fn class_of(&self, phi: &GroupHom, psi: &GroupHom, x: &CrystElement) -> (usize, Vec<BigInt>) {
        let s = self.sector_of[x.holonomy];
        let sector = &self.sectors[s];
        let g = &self.mover[x.holonomy];
        let t: Group = Group::Cryst(Arc::clone(&self.target));
        // ψ(g)^-1 x φ(g) has holonomy equal to the sector representative
        let moved = t.mul3(&t.inv(&psi.eval(g)), &GroupElement::Cryst(x.clone()), &phi.eval(g));
        let moved = moved.as_cryst().expect("cryst").clone();
        debug_assert_eq!(moved.holonomy, sector.rep);
        let y = coords_in_sector(&self.target, sector, &moved);
        (sector.rep, sector.fold_min(&self.target, &y))
    }

    pub fn element(&self, rep: usize, coords: &[BigInt]) -> Option<CrystElement> {
        let sector = &self.sectors[self.sector_index(rep)?];
        if coords.len() != sector.quotient.ambient_dim() {
            return None;
        }
        let v = self.target.lattice().from_coords(&sector.quotient.from_coords(coords));
        Some(CrystElement::new(v, rep))
    }

    pub fn is_canonical(&self, rep: usize, coords: &[BigInt]) -> bool {
        let Some(i) = self.sector_index(rep) else {
            return false;
        };
        let sector = &self.sectors[i];
        if coords.len() != sector.quotient.ambient_dim() {
            return false;
        }
        let e = self.element(rep, coords).expect("checked");
        let y = coords_in_sector(&self.target, sector, &e);
        y == coords && sector.fold_min(&self.target, &y) == coords
    }
}

fn coords_in_sector(target: &CrystGroup, sector: &Sector, x: &CrystElement) -> Vec<BigInt> {
    let c = target.lattice().coords(&x.translation).expect("lattice translation");
    sector.quotient.canonical_coords(&c)
}

impl Sector {
    fn act(&self, target: &CrystGroup, y: &[BigInt], pair: &(CrystElement, CrystElement)) -> Vec<BigInt> {
        let v = target.lattice().from_coords(&self.quotient.from_coords(y));
        let x = CrystElement::new(v, self.rep);
        let z = target.mul(&target.mul(&pair.0, &x), &pair.1);
        let c = target.lattice().coords(&z.translation).expect("lattice translation");
        self.quotient.canonical_coords(&c)
    }

    fn fold_min(&self, target: &CrystGroup, y: &[BigInt]) -> Vec<BigInt> {
        if let Some(classes) = &self.classes {
            return classes[self.fold[y]].clone();
        }
        self.stabilizer
            .iter()
            .map(|p| self.act(target, y, p))
            .min()
            .unwrap_or_else(|| y.to_vec())
    }
}

fn build_sector(phi: &GroupHom, psi: &GroupHom, target: &CrystGroup, rep: usize) -> Sector {
    let source = phi.source();
    let h2 = target.holonomy();
    let l2 = target.lattice();
    let n2 = target.dim();
    let a_r = target.rotation(rep);

    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    let mut stabilizer = Vec::new();
    let mut push_stab = |g: &GroupElement| {
        let p = psi.eval(g);
        let q = phi.eval(g);
        if h2.mul(h2.mul(hol(&p), rep), h2.inv(hol(&q))) == rep {
            let qi = target.inv(q.as_cryst().expect("cryst"));
            stabilizer.push((p.as_cryst().expect("cryst").clone(), qi));
        }
    };
    match source {
        Group::Cryst(s) => {
            for b in s.lattice().basis() {
                let e = GroupElement::Cryst(s.translation(b));
                let p = psi.eval(&e);
                let q = phi.eval(&e);
                let (p, q) = (p.as_cryst().expect("cryst"), q.as_cryst().expect("cryst"));
                assert!(
                    p.holonomy == h2.identity() && q.holonomy == h2.identity(),
                    "translations map to translations"
                );
                let col = vec_sub(&p.translation, &a_r.mul_vec(&q.translation));
                columns.push(l2.coords(&col).expect("lattice vector"));
            }
            let zero = vec![BigInt::default(); s.dim()];
            for h in 0..s.holonomy().order() {
                push_stab(&GroupElement::Cryst(CrystElement::new(zero.clone(), h)));
            }
        }
        Group::Finite(f) => {
            for g in 0..f.order() {
                push_stab(&GroupElement::Finite(g));
            }
        }
    }
    if columns.is_empty() {
        columns.push(vec![BigInt::default(); n2]);
    }
    let quotient = cokernel(&IntMatrix::from_columns(n2, &columns));
    let mut sector = Sector {
        rep,
        quotient,
        stabilizer,
        classes: None,
        fold: HashMap::new(),
    };
    if let Some(all) = sector.quotient.coordinate_box() {
        // `all` is increasing, so the first unvisited element is its orbit minimum
        let mut fold: HashMap<Vec<BigInt>, usize> = HashMap::with_capacity(all.len());
        let mut classes = Vec::new();
        for y in &all {
            if fold.contains_key(y) {
                continue;
            }
            let id = classes.len();
            let mut queue = VecDeque::from([y.clone()]);
            fold.insert(y.clone(), id);
            while let Some(z) = queue.pop_front() {
                for p in &sector.stabilizer {
                    let w = sector.act(target, &z, p);
                    if !fold.contains_key(&w) {
                        fold.insert(w.clone(), id);
                        queue.push_back(w);
                    }
                }
            }
            classes.push(y.clone());
        }
        sector.classes = Some(classes);
        sector.fold = fold;
    }
    sector
}
