use std::collections::BTreeSet;

use super::{FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};

/// A subgroup stored as the sorted list of member indices together with a
/// generating set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    members: Vec<usize>,
    generators: Vec<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Self {
            parent: group.clone(),
            members: vec![0],
            generators: Vec::new(),
        }
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Self {
        let gens = (0..group.rank())
            .map(|j| {
                let mut c = vec![0; group.rank()];
                c[j] = 1;
                GroupElement(c)
            })
            .collect();
        Self {
            parent: group.clone(),
            members: (0..group.order() as usize).collect(),
            generators: gens,
        }
    }

    /// Closure of `generators` under addition.
    pub fn generated(group: &FiniteAbelianGroup, generators: &[GroupElement]) -> Result<Self> {
        for g in generators {
            group.check(g)?;
        }
        let gen_idx: Vec<usize> = generators.iter().map(|g| group.index_of(g)).collect();
        let mut seen = vec![false; group.order() as usize];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for &g in &gen_idx {
                let b = group.add_idx(a, g);
                if !seen[b] {
                    seen[b] = true;
                    members.push(b);
                    frontier.push(b);
                }
            }
        }
        members.sort_unstable();
        Ok(Self {
            parent: group.clone(),
            members,
            generators: generators.to_vec(),
        })
    }

    /// Wraps a set of element indices, failing unless it is a subgroup.
    pub fn from_indices(group: &FiniteAbelianGroup, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if !set.contains(&0) {
            return Err(Error::NotASubgroup);
        }
        if set.iter().any(|&i| i >= group.order() as usize) {
            return Err(Error::NotASubgroup);
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&group.sub_idx(a, b)) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        let members: Vec<usize> = set.into_iter().collect();
        let generators = greedy_generators(group, &members);
        Ok(Self {
            parent: group.clone(),
            members,
            generators,
        })
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() as u64 == self.parent.order()
    }

    /// Member indices in ascending (lexicographic) order.
    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(|&i| self.parent.element_at(i))
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.parent.contains(x) && self.contains_idx(self.parent.index_of(x))
    }

    pub fn contains_idx(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// `A(Y, self) = { y : (x, y) = 1 for all x in self }`.
    ///
    /// Membership is screened with the complex pairing at `1e-9` and then
    /// decided by the exact phase congruence.
    pub fn annihilator(&self) -> Subgroup {
        let g = &self.parent;
        let gens: Vec<usize> = if self.generators.is_empty() {
            Vec::new()
        } else {
            self.generators.iter().map(|x| g.index_of(x)).collect()
        };
        let members: Vec<usize> = (0..g.order() as usize)
            .filter(|&y| {
                gens.iter().all(|&x| {
                    let numeric = (g.character_idx(x, y) - 1.0).norm() < 1e-9;
                    let exact = g.pairing_phase_idx(x, y) == 0;
                    debug_assert_eq!(numeric, exact, "pairing screen disagrees with exact phase");
                    exact
                })
            })
            .collect();
        let generators = greedy_generators(g, &members);
        Subgroup {
            parent: g.clone(),
            members,
            generators,
        }
    }

    /// Cosets `x + self`, each given by its lexicographically smallest member.
    pub fn coset_representatives(&self) -> Vec<usize> {
        let g = &self.parent;
        let mut covered = vec![false; g.order() as usize];
        let mut reps = Vec::new();
        for x in 0..g.order() as usize {
            if covered[x] {
                continue;
            }
            reps.push(x);
            for &k in &self.members {
                covered[g.add_idx(x, k)] = true;
            }
        }
        reps
    }
}

fn greedy_generators(group: &FiniteAbelianGroup, members: &[usize]) -> Vec<GroupElement> {
    let mut span = vec![false; group.order() as usize];
    span[0] = true;
    let mut spanned = vec![0usize];
    let mut gens = Vec::new();
    for &m in members {
        if span[m] {
            continue;
        }
        gens.push(group.element_at(m));
        // Extend the span by all multiples of m added to existing members.
        let mut frontier = spanned.clone();
        while let Some(a) = frontier.pop() {
            let b = group.add_idx(a, m);
            if !span[b] {
                span[b] = true;
                spanned.push(b);
                frontier.push(b);
            }
        }
    }
    gens
}

/// Every subgroup of `group`, sorted by order and then by member list.
///
/// Built from the cyclic subgroups by closing under joins, which reaches
/// every subgroup of a finite abelian group.
pub fn all_subgroups(group: &FiniteAbelianGroup) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Subgroup> = Vec::new();
    for x in group.elements() {
        let h = Subgroup::generated(group, &[x]).expect("element of group");
        if found.insert(h.members.clone()) {
            queue.push(h);
        }
    }
    let cyclic = queue.clone();
    let mut all = queue.clone();
    while let Some(h) = queue.pop() {
        for c in &cyclic {
            if c.members.iter().all(|&i| h.contains_idx(i)) {
                continue;
            }
            let mut gens = h.generators.clone();
            gens.extend(c.generators.iter().cloned());
            let j = Subgroup::generated(group, &gens).expect("group elements");
            if found.insert(j.members.clone()) {
                queue.push(j.clone());
                all.push(j);
            }
        }
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(h: &Subgroup) -> Vec<Vec<u64>> {
        h.elements().map(|e| e.into_coords()).collect()
    }

    #[test]
    fn cyclic_subgroup_of_z9() {
        let g = FiniteAbelianGroup::cyclic(9).unwrap();
        let h = Subgroup::generated(&g, &[g.element(&[3]).unwrap()]).unwrap();
        assert_eq!(coords(&h), vec![vec![0], vec![3], vec![6]]);
    }

    #[test]
    fn annihilator_examples() {
        let g = FiniteAbelianGroup::cyclic(9).unwrap();
        let h = Subgroup::generated(&g, &[g.element(&[3]).unwrap()]).unwrap();
        // 3y = 0 mod 9
        let brute: Vec<Vec<u64>> = (0..9u64).filter(|y| (3 * y) % 9 == 0).map(|y| vec![y]).collect();
        assert_eq!(coords(&h.annihilator()), brute);

        assert!(Subgroup::whole(&g).annihilator().is_trivial());
        assert!(Subgroup::trivial(&g).annihilator().is_whole());
    }

    #[test]
    fn annihilator_is_involutive() {
        for orders in [&[12u64][..], &[3, 3], &[9, 3], &[2, 4]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            for h in all_subgroups(&g) {
                let aa = h.annihilator().annihilator();
                assert_eq!(aa, h);
                assert_eq!(h.order() * h.annihilator().order(), g.order() as usize);
            }
        }
    }

    #[test]
    fn from_indices_checks_closure() {
        let g = FiniteAbelianGroup::cyclic(5).unwrap();
        assert_eq!(Subgroup::from_indices(&g, [0, 1]), Err(Error::NotASubgroup));
        assert!(Subgroup::from_indices(&g, [0]).unwrap().is_trivial());
        let g9 = FiniteAbelianGroup::cyclic(9).unwrap();
        let h = Subgroup::from_indices(&g9, [0, 3, 6]).unwrap();
        assert_eq!(h.generators().len(), 1);
    }

    #[test]
    fn subgroup_counts() {
        // Z_p x Z_p has p + 3 subgroups; Z_n has d(n).
        assert_eq!(all_subgroups(&FiniteAbelianGroup::new(&[3, 3]).unwrap()).len(), 6);
        assert_eq!(all_subgroups(&FiniteAbelianGroup::cyclic(15).unwrap()).len(), 4);
        assert_eq!(all_subgroups(&FiniteAbelianGroup::cyclic(12).unwrap()).len(), 6);
        // Z2 x Z4: 8 subgroups.
        assert_eq!(all_subgroups(&FiniteAbelianGroup::new(&[2, 4]).unwrap()).len(), 8);
    }

    #[test]
    fn coset_representatives_partition() {
        let g = FiniteAbelianGroup::cyclic(9).unwrap();
        let h = Subgroup::from_indices(&g, [0, 3, 6]).unwrap();
        assert_eq!(h.coset_representatives(), vec![0, 1, 2]);
    }
}
