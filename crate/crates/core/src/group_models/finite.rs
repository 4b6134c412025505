use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates closure, associativity, identity and inverses exhaustively.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidGroup("multiplication table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let at = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails for ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Self {
            order,
            table,
            identity,
            inverse,
        })
    }

    /// Builds a table from a closed set of abstract elements. `elements[0]`
    /// must be the identity; closure is assumed and checked by lookup.
    pub fn from_elements<T: Ord + Clone>(elements: &[T], mul: impl Fn(&T, &T) -> T) -> Result<Self> {
        let index: std::collections::BTreeMap<T, usize> =
            elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let rows = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        index
                            .get(&mul(a, b))
                            .copied()
                            .ok_or_else(|| Error::InvalidGroup("element set not closed".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(rows).expect("cyclic group")
    }

    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let nb = b.order;
        let rows = (0..a.order * nb)
            .map(|x| {
                (0..a.order * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::new(rows).expect("direct product")
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order.
    pub fn symmetric(n: usize) -> Self {
        let mut all = Vec::new();
        permutations(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut all);
        // product (p * q)(i) = p(q(i))
        Self::from_elements(&all, |p, q| q.iter().map(|&i| p[i]).collect()).expect("symmetric group")
    }

    /// Dihedral group of order `2n`: elements `r^k` then `r^k s`.
    pub fn dihedral(n: usize) -> Self {
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|s| (0..n).map(move |k| (s, k))).collect();
        // (s1, k1)(s2, k2) = r^k1 s^s1 r^k2 s^s2 = r^(k1 ± k2) s^(s1+s2)
        Self::from_elements(&elems, |&(s1, k1), &(s2, k2)| {
            let k = if s1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
            ((s1 + s2) % 2, k)
        })
        .expect("dihedral group")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // unit quaternions as (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k
        let elems: Vec<(u8, u8)> = (0..4).flat_map(|a| (0..2).map(move |s| (s, a))).collect();
        let mul = |&(s1, a1): &(u8, u8), &(s2, a2): &(u8, u8)| {
            let (sign, axis) = match (a1, a2) {
                (0, b) => (0, b),
                (a, 0) => (0, a),
                (a, b) if a == b => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            };
            ((s1 + s2 + sign) % 2, axis)
        };
        Self::from_elements(&elems, mul).expect("quaternion group")
    }

    /// Alternating group on four letters.
    pub fn alternating4() -> Self {
        let mut all = Vec::new();
        permutations(&[0, 1, 2, 3], &mut Vec::new(), &mut all);
        let even: Vec<Vec<usize>> = all.into_iter().filter(|p| parity(p) == 0).collect();
        Self::from_elements(&even, |p, q| q.iter().map(|&i| p[i]).collect()).expect("A4")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Greedy generating set: each element not yet generated is added in
    /// index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in 0..self.order {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        set.contains(&self.identity)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, elements: &[usize]) -> bool {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        self.is_subgroup(elements) && (0..self.order).all(|g| set.iter().all(|&x| set.contains(&self.conjugate(g, x))))
    }

    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let conj: Vec<usize> = gens
            .iter()
            .flat_map(|&x| (0..self.order).map(move |g| (g, x)))
            .map(|(g, x)| self.conjugate(g, x))
            .collect();
        self.generated(&conj)
    }

    /// Every normal subgroup, each sorted, listed in increasing size and
    /// then lexicographically.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = (0..self.order).map(|a| self.normal_closure(&[a])).collect();
        loop {
            let current: Vec<Vec<usize>> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let mut gens = a.clone();
                    gens.extend(b);
                    if found.insert(self.generated(&gens)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Quotient by a normal subgroup. Cosets are ordered by their least
    /// element, which also serves as the coset representative.
    pub fn quotient(&self, normal: &[usize]) -> Result<QuotientTable> {
        if !self.is_normal(normal) {
            return Err(Error::NotInvariant(format!("{normal:?} is not a normal subgroup")));
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for a in 0..self.order {
            if coset_of[a] != usize::MAX {
                continue;
            }
            for &n in normal {
                coset_of[self.mul(a, n)] = reps.len();
            }
            reps.push(a);
        }
        let rows = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect())
            .collect();
        Ok(QuotientTable {
            table: Self::new(rows)?,
            projection: coset_of,
            representatives: reps,
        })
    }

    /// Checks that `images` defines a homomorphism into `target`.
    pub fn check_hom(&self, target: &Self, images: &[usize]) -> Result<()> {
        if images.len() != self.order || images.iter().any(|&x| x >= target.order) {
            return Err(Error::InvalidHom("image table has wrong shape".into()));
        }
        for a in 0..self.order {
            for b in 0..self.order {
                let lhs = images[self.mul(a, b)];
                let rhs = target.mul(images[a], images[b]);
                if lhs != rhs {
                    return Err(Error::InvalidHom(format!(
                        "f({a}*{b}) = {lhs} but f({a})*f({b}) = {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Extends generator images to a full table, or `None` if they do not
    /// define a homomorphism.
    pub fn extend_hom(&self, target: &Self, gens: &[usize], gen_images: &[usize]) -> Option<Vec<usize>> {
        let mut image = vec![usize::MAX; self.order];
        image[self.identity] = target.identity();
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &gi) in gens.iter().zip(gen_images) {
                let y = self.mul(x, g);
                let yi = target.mul(image[x], gi);
                if image[y] == usize::MAX {
                    image[y] = yi;
                    queue.push_back(y);
                } else if image[y] != yi {
                    return None;
                }
            }
        }
        if image.contains(&usize::MAX) {
            return None;
        }
        self.check_hom(target, &image).ok().map(|()| image)
    }

    /// All homomorphisms into `target`, in lexicographic order of generator
    /// images.
    pub fn all_homs(&self, target: &Self) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(h) = self.extend_hom(target, &gens, &choice) {
                out.push(h);
            }
            let mut i = choice.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < target.order {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
}

/// Result of [`FiniteGroupTable::quotient`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTable {
    pub table: FiniteGroupTable,
    /// Element index to coset index.
    pub projection: Vec<usize>,
    /// Least element of each coset.
    pub representatives: Vec<usize>,
}

fn permutations(rest: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest.is_empty() {
        out.push(prefix.clone());
        return;
    }
    for i in 0..rest.len() {
        let mut r = rest.to_vec();
        let x = r.remove(i);
        prefix.push(x);
        permutations(&r, prefix, out);
        prefix.pop();
    }
}

fn parity(p: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}
