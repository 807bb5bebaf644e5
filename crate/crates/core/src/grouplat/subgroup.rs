use std::collections::HashSet;

use crate::error::{capacity, Error, Result};

use super::group::Ambient;

/// Largest group order for which [`enumerate_subgroups`] runs.
pub const SUBGROUP_SWEEP_MAX: usize = 4096;

/// An explicit subgroup, stored as its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn whole(group: &Ambient) -> Self {
        Subgroup {
            elements: (0..group.order()).collect(),
        }
    }

    /// Checks closure and returns the subgroup; errors if `elements` is not
    /// a subgroup of `group`.
    pub fn from_elements(group: &Ambient, elements: &[usize]) -> Result<Self> {
        let n = group.order();
        let mut member = vec![false; n];
        for &e in elements {
            if e >= n {
                return Err(Error::InvalidInput(format!(
                    "element {e} outside group of order {n}"
                )));
            }
            member[e] = true;
        }
        let closure = subgroup_closure(group, elements);
        let count = member.iter().filter(|&&m| m).count();
        if closure.order() != count || closure.elements.iter().any(|&e| !member[e]) {
            return Err(Error::Violation(format!(
                "{count} listed elements are not a subgroup (closure has order {})",
                closure.order()
            )));
        }
        Ok(closure)
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in(&self, group: &Ambient) -> usize {
        group.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// `S + <g>` for a subgroup `S` given by its membership vector; returns the
/// sorted element list.
fn join(group: &Ambient, member: &mut [bool], current: &[usize], g: usize) -> Vec<usize> {
    let mut out = current.to_vec();
    let mut x = g;
    while !member[x] {
        for &s in current {
            let y = group.add(s, x);
            member[y] = true;
            out.push(y);
        }
        x = group.add(x, g);
    }
    out.sort_unstable();
    out
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_closure(group: &Ambient, gens: &[usize]) -> Subgroup {
    let n = group.order();
    let mut member = vec![false; n];
    member[0] = true;
    let mut elements = vec![0usize];
    for &g in gens {
        debug_assert!(g < n);
        if !member[g] {
            elements = join(group, &mut member, &elements, g);
        }
    }
    Subgroup { elements }
}

/// Every subgroup of `group`, sorted by order and then by element list.
///
/// Starting from the trivial subgroup, each known subgroup `S` is extended by
/// one element from every coset of `S`; every subgroup arises this way.
pub fn enumerate_subgroups(group: &Ambient) -> Result<Vec<Subgroup>> {
    let n = group.order();
    if n > SUBGROUP_SWEEP_MAX {
        return Err(capacity(
            "group order for subgroup enumeration",
            n as u128,
            SUBGROUP_SWEEP_MAX as u128,
        ));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = vec![Subgroup::trivial()];
    seen.insert(queue[0].elements.clone());
    let mut head = 0;
    while head < queue.len() {
        let s = queue[head].clone();
        head += 1;
        let mut member = vec![false; n];
        for &e in &s.elements {
            member[e] = true;
        }
        let mut coset_done = member.clone();
        for g in 0..n {
            if coset_done[g] {
                continue;
            }
            for &e in &s.elements {
                coset_done[group.add(g, e)] = true;
            }
            let mut m = member.clone();
            let t = join(group, &mut m, &s.elements, g);
            if seen.insert(t.clone()) {
                queue.push(Subgroup { elements: t });
            }
        }
    }
    queue.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements.cmp(&b.elements))
    });
    Ok(queue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouplat::FiniteGroup;

    fn ambient(moduli: &[usize]) -> Ambient {
        Ambient::Finite(FiniteGroup::new(moduli).unwrap())
    }

    /// Closure by repeated addition until nothing new appears.
    fn naive_closure(g: &Ambient, gens: &[usize]) -> Vec<usize> {
        let mut set: Vec<usize> = vec![0];
        set.extend_from_slice(gens);
        set.sort_unstable();
        set.dedup();
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    next.push(g.add(a, b));
                }
            }
            next.sort_unstable();
            next.dedup();
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// Closure over all generator subsets, deduplicated.
    fn brute_force_subgroups(g: &Ambient) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut all: Vec<Vec<usize>> = (0u64..(1 << n))
            .map(|mask| {
                let gens: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                naive_closure(g, &gens)
            })
            .collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.dedup();
        all
    }

    #[test]
    fn closure_examples() {
        let z6 = ambient(&[6]);
        assert_eq!(subgroup_closure(&z6, &[3]).elements(), &[0, 3]);
        assert_eq!(subgroup_closure(&z6, &[]).elements(), &[0]);
        assert_eq!(subgroup_closure(&z6, &[4]).elements(), &[0, 2, 4]);
        let g = FiniteGroup::new(&[2, 4]).unwrap();
        let gens = [g.index_of(&[1, 0]).unwrap(), g.index_of(&[0, 1]).unwrap()];
        assert_eq!(subgroup_closure(&Ambient::Finite(g), &gens).order(), 8);
    }

    #[test]
    fn enumerate_examples() {
        let z6 = ambient(&[6]);
        let subs = enumerate_subgroups(&z6).unwrap();
        let lists: Vec<&[usize]> = subs.iter().map(|s| s.elements()).collect();
        assert_eq!(
            lists,
            vec![&[0][..], &[0, 3], &[0, 2, 4], &[0, 1, 2, 3, 4, 5]]
        );
        for p in [2, 3, 5, 7, 11, 13] {
            assert_eq!(enumerate_subgroups(&ambient(&[p])).unwrap().len(), 2);
        }
        assert_eq!(enumerate_subgroups(&ambient(&[2, 2])).unwrap().len(), 5);
    }

    #[test]
    fn enumeration_matches_generator_subset_oracle() {
        for moduli in [
            &[6][..],
            &[2, 2],
            &[2, 4],
            &[8],
            &[3, 3],
            &[2, 2, 2],
            &[12],
            &[2, 6],
        ] {
            let g = ambient(moduli);
            let ours: Vec<Vec<usize>> = enumerate_subgroups(&g)
                .unwrap()
                .into_iter()
                .map(|s| s.elements)
                .collect();
            assert_eq!(ours, brute_force_subgroups(&g), "group {moduli:?}");
        }
    }

    #[test]
    fn subgroup_laws_hold() {
        for moduli in [&[12][..], &[2, 2, 2], &[4, 6], &[3, 9]] {
            let g = ambient(moduli);
            for s in enumerate_subgroups(&g).unwrap() {
                assert!(s.contains(0));
                assert_eq!(g.order() % s.order(), 0);
                for &a in s.elements() {
                    assert!(s.contains(g.neg(a)));
                    for &b in s.elements() {
                        assert!(s.contains(g.add(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let g = ambient(&[5000]);
        assert!(matches!(
            enumerate_subgroups(&g),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn from_elements_validates() {
        let z6 = ambient(&[6]);
        assert!(Subgroup::from_elements(&z6, &[0, 3]).is_ok());
        assert!(matches!(
            Subgroup::from_elements(&z6, &[0, 1]),
            Err(Error::Violation(_))
        ));
        assert!(Subgroup::from_elements(&z6, &[0, 9]).is_err());
    }
}
