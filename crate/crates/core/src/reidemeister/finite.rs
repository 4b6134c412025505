//! Orbit decomposition of a finite target group under twisted conjugation.

use std::collections::VecDeque;

use crate::group_models::{Group, GroupElement, GroupHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FiniteClasses {
    /// Class index of every target element.
    pub class_of: Vec<usize>,
    /// Least element of each class, increasing.
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
}

/// Action pairs `(ψ(g), φ(g)^-1)` for source generators `g`, acting by
/// `x -> ψ(g) x φ(g)^-1`.
pub(crate) fn action_pairs(phi: &GroupHom, psi: &GroupHom) -> Vec<(GroupElement, GroupElement)> {
    let t = phi.target();
    phi.source()
        .generators()
        .iter()
        .map(|g| (psi.eval(g), t.inv(&phi.eval(g))))
        .collect()
}

pub(crate) fn finite_classes(phi: &GroupHom, psi: &GroupHom) -> FiniteClasses {
    let target: &Group = phi.target();
    let t = target.as_finite().expect("finite target");
    let pairs: Vec<(usize, usize)> = action_pairs(phi, psi)
        .into_iter()
        .map(|(a, b)| (a.as_finite().expect("finite"), b.as_finite().expect("finite")))
        .collect();
    let n = t.order();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = reps.len();
        class_of[start] = id;
        let mut size = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(a, b) in &pairs {
                let y = t.mul(t.mul(a, x), b);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        reps.push(start);
        sizes.push(size);
    }
    FiniteClasses { class_of, reps, sizes }
}
