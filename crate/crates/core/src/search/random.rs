//! Seeded generators for random instances.

use num_integer::Integer;
use rand::seq::index;
use rand::Rng;

use crate::dist::Distribution;
use crate::group::{all_subgroups, Endomorphism, FiniteAbelianGroup, Subgroup};
use crate::predicates::FormsInstance;

/// Integer weights in `1..=weight_cap` on `support_size` distinct random
/// elements, normalised to an exact rational distribution.
pub fn random_distribution<R: Rng>(
    group: &FiniteAbelianGroup,
    support_size: usize,
    weight_cap: u64,
    rng: &mut R,
) -> Distribution {
    let n = group.order() as usize;
    let size = support_size.clamp(1, n);
    let weights: Vec<(usize, u64)> = index::sample(rng, n, size)
        .into_iter()
        .map(|i| (i, rng.gen_range(1..=weight_cap.max(1))))
        .collect();
    Distribution::from_weights(group, &weights).expect("positive weights")
}

/// Support size drawn uniformly from `1..=max_support`.
pub fn random_distribution_up_to<R: Rng>(
    group: &FiniteAbelianGroup,
    max_support: usize,
    weight_cap: u64,
    rng: &mut R,
) -> Distribution {
    let max = max_support.clamp(1, group.order() as usize);
    let size = rng.gen_range(1..=max);
    random_distribution(group, size, weight_cap, rng)
}

/// Uniform over compatible matrices.
pub fn random_endomorphism<R: Rng>(group: &FiniteAbelianGroup, rng: &mut R) -> Endomorphism {
    let n = group.cyclic_orders();
    let k = n.len();
    let matrix: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    // entries with n_j * a = 0 mod n_i are the multiples of n_i / gcd(n_i, n_j)
                    let step = n[i] / n[i].gcd(&n[j]);
                    let choices = n[i] / step;
                    (rng.gen_range(0..choices) * step) as i64
                })
                .collect()
        })
        .collect();
    Endomorphism::new(group, &matrix).expect("compatible by construction")
}

/// Rejection-samples [`random_endomorphism`] until it is bijective.
pub fn random_automorphism<R: Rng>(group: &FiniteAbelianGroup, rng: &mut R) -> Endomorphism {
    for _ in 0..10_000 {
        let a = random_endomorphism(group, rng);
        if a.is_automorphism() {
            return a;
        }
    }
    Endomorphism::identity(group)
}

/// Uniform over all subgroups.
pub fn random_subgroup<R: Rng>(group: &FiniteAbelianGroup, rng: &mut R) -> Subgroup {
    let mut subs = all_subgroups(group);
    let i = rng.gen_range(0..subs.len());
    subs.swap_remove(i)
}

/// Random distribution supported inside `subgroup`.
pub fn random_distribution_on<R: Rng>(subgroup: &Subgroup, max_support: usize, weight_cap: u64, rng: &mut R) -> Distribution {
    let members = subgroup.indices();
    let size = rng.gen_range(1..=max_support.clamp(1, members.len()));
    let weights: Vec<(usize, u64)> = index::sample(rng, members.len(), size)
        .into_iter()
        .map(|i| (members[i], rng.gen_range(1..=weight_cap.max(1))))
        .collect();
    Distribution::from_weights(subgroup.parent(), &weights).expect("positive weights")
}

/// Canonical instance with a random automorphism `alpha` and distributions
/// drawn from a mixture, so that symmetric and asymmetric instances both
/// occur with non-negligible frequency:
/// independent random laws, point masses (half of them with `x1 = -alpha x2`),
/// an iid pair on `Ker(I + alpha)`, and shifted Haar laws of a random subgroup.
pub fn random_canonical_instance<R: Rng>(group: &FiniteAbelianGroup, rng: &mut R) -> FormsInstance {
    let alpha = random_automorphism(group, rng);
    let (mu1, mu2) = match rng.gen_range(0..5) {
        0 | 1 => (
            random_distribution_up_to(group, 4, 6, rng),
            random_distribution_up_to(group, 4, 6, rng),
        ),
        2 => {
            let n = group.order() as usize;
            let x2 = rng.gen_range(0..n);
            let x1 = if rng.gen_bool(0.5) {
                group.neg_idx(alpha.apply_idx(x2))
            } else {
                rng.gen_range(0..n)
            };
            (
                Distribution::from_weights(group, &[(x1, 1)]).expect("point mass"),
                Distribution::from_weights(group, &[(x2, 1)]).expect("point mass"),
            )
        }
        3 => {
            let kernel = Endomorphism::identity(group).add(&alpha).expect("same group").kernel();
            let mu = random_distribution_on(&kernel, 4, 6, rng);
            (mu.clone(), mu)
        }
        _ => {
            let k = random_subgroup(group, rng);
            let n = group.order() as usize;
            let haar = Distribution::haar_on(&k);
            let shift = |rng: &mut R| {
                let x = group.element_at(rng.gen_range(0..n));
                haar.shift(&x).expect("same group")
            };
            (shift(rng), shift(rng))
        }
    };
    FormsInstance::canonical(alpha, mu1, mu2).expect("same group")
}
