use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::dist::Distribution;
use crate::group::FiniteAbelianGroup;

/// Exact joint law of a pair of group-valued random variables, keyed by
/// element indices `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    group: FiniteAbelianGroup,
    probs: BTreeMap<(usize, usize), BigRational>,
}

impl JointDistribution {
    pub(crate) fn empty(group: &FiniteAbelianGroup) -> Self {
        Self {
            group: group.clone(),
            probs: BTreeMap::new(),
        }
    }

    pub(crate) fn add_mass(&mut self, s: usize, t: usize, p: BigRational) {
        *self.probs.entry((s, t)).or_insert_with(BigRational::zero) += p;
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn prob(&self, s: usize, t: usize) -> BigRational {
        self.probs.get(&(s, t)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &BigRational)> {
        self.probs.iter().map(|(&k, p)| (k, p))
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    fn marginal(&self, first: bool) -> BTreeMap<usize, BigRational> {
        let mut m: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (&(s, t), p) in &self.probs {
            let key = if first { s } else { t };
            *m.entry(key).or_insert_with(BigRational::zero) += p;
        }
        m
    }

    pub fn first_marginal(&self) -> Distribution {
        Distribution::from_index_map(&self.group, self.marginal(true)).expect("marginal of a probability law")
    }

    pub fn second_marginal(&self) -> Distribution {
        Distribution::from_index_map(&self.group, self.marginal(false)).expect("marginal of a probability law")
    }

    /// First `(s, t)` with `P(s, t) != P(s, -t)`, scanning stored entries in order.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        self.probs
            .iter()
            .find(|(&(s, t), p)| self.probs.get(&(s, self.group.neg_idx(t))) != Some(*p))
            .map(|(&k, _)| k)
    }

    /// `P(s, t) = P(s) P(t)` for every `s, t`.
    pub fn factorizes(&self) -> bool {
        let m1 = self.marginal(true);
        let m2 = self.marginal(false);
        if self.probs.len() != m1.len() * m2.len() {
            return false;
        }
        m1.iter()
            .all(|(&s, p)| m2.iter().all(|(&t, q)| self.probs.get(&(s, t)) == Some(&(p * q))))
    }

    /// Masses as floating point values, for comparison with empirical laws.
    pub fn to_f64_cells(&self) -> BTreeMap<(usize, usize), f64> {
        use num_traits::ToPrimitive;
        self.probs.iter().map(|(&k, p)| (k, p.to_f64().unwrap_or(f64::NAN))).collect()
    }
}

/// Total variation distance between a joint law and its image under
/// `(s, t) -> (s, -t)`; zero exactly when the law is symmetric in `t`.
pub fn symmetry_statistic(group: &FiniteAbelianGroup, cells: &BTreeMap<(usize, usize), f64>) -> f64 {
    let mut total = 0.0;
    for (&(s, t), &p) in cells {
        match cells.get(&(s, group.neg_idx(t))) {
            Some(&q) => total += (p - q).abs(),
            // the absent mirror cell contributes |0 - p| as well
            None => total += 2.0 * p,
        }
    }
    total / 2.0
}

/// Total variation distance between two joint laws given as cell maps.
pub fn total_variation(a: &BTreeMap<(usize, usize), f64>, b: &BTreeMap<(usize, usize), f64>) -> f64 {
    let mut total = 0.0;
    for (k, &p) in a {
        total += (p - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &q) in b {
        if !a.contains_key(k) {
            total += q;
        }
    }
    total / 2.0
}
