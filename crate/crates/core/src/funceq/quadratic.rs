use serde::Serialize;

use crate::group::FiniteAbelianGroup;

/// Modulus for the rank computation. Full rank modulo a prime implies full
/// rank over the rationals.
pub const RANK_PRIME: u64 = 1_000_000_007;

/// Rank is computed only for groups up to this order.
const RANK_ORDER_LIMIT: u64 = 729;

/// `phi(n y) = c_n phi(y)` forced by the identity at `u = n y`, `v = y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionStep {
    pub n: u64,
    pub coefficient: i128,
}

/// Audit record that the quadratic identity has only the zero solution.
#[derive(Clone, Debug, Serialize)]
pub struct QuadraticVanishing {
    pub cyclic_orders: Vec<u64>,
    /// `c_0 = 0`, `c_1 = 1`, `c_{n+1} = 2c_n + 2 - c_{n-1}`, up to `n = |Y|`.
    pub trace: Vec<InductionStep>,
    /// Every `c_n` equals `n^2`.
    pub trace_is_square: bool,
    /// Largest element order; at that `n`, `c_n phi(y) = phi(0) = 0` with `c_n > 0`.
    pub max_element_order: u64,
    /// Rank modulo [`RANK_PRIME`] of the linear system in the unknowns `phi(y)`,
    /// when the group is small enough to build it.
    pub rank: Option<usize>,
    pub unknowns: usize,
    pub vanishes: bool,
}

pub fn quadratic_vanishing(group: &FiniteAbelianGroup) -> QuadraticVanishing {
    let order = group.order();
    let mut trace = vec![
        InductionStep { n: 0, coefficient: 0 },
        InductionStep { n: 1, coefficient: 1 },
    ];
    for n in 1..order {
        let c = 2 * trace[n as usize].coefficient + 2 - trace[n as usize - 1].coefficient;
        trace.push(InductionStep { n: n + 1, coefficient: c });
    }
    let trace_is_square = trace.iter().all(|s| s.coefficient == (s.n as i128) * (s.n as i128));
    let max_element_order = group.exponent();
    let rank = (order <= RANK_ORDER_LIMIT).then(|| rank_mod_p(group));
    let unknowns = order as usize;
    let induction_ok = trace_is_square && max_element_order <= order;
    let vanishes = induction_ok && rank.is_none_or(|r| r == unknowns);
    QuadraticVanishing {
        cyclic_orders: group.cyclic_orders().to_vec(),
        trace,
        trace_is_square,
        max_element_order,
        rank,
        unknowns,
        vanishes,
    }
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RANK_PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Reduces `row` against the basis; stores it and returns true if independent.
fn insert_row(basis: &mut [Option<Vec<u64>>], mut row: Vec<u64>) -> bool {
    let p = RANK_PRIME;
    let n = row.len();
    for i in 0..n {
        if row[i] == 0 {
            continue;
        }
        match &basis[i] {
            Some(b) => {
                let f = row[i];
                for j in i..n {
                    row[j] = (row[j] + p - mul_mod(f, b[j])) % p;
                }
            }
            None => {
                let inv = pow_mod(row[i], p - 2);
                for x in row.iter_mut().skip(i) {
                    *x = mul_mod(*x, inv);
                }
                basis[i] = Some(row);
                return true;
            }
        }
    }
    false
}

/// Rank of the rows `e_{u+v} + e_{u-v} - 2e_u - 2e_v` over all `(u, v)`.
fn rank_mod_p(group: &FiniteAbelianGroup) -> usize {
    let n = group.order() as usize;
    let p = RANK_PRIME;
    // basis[i] has pivot i, normalised to 1
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; n];
    let mut rank = 0;
    for u in 0..n {
        for v in 0..n {
            let mut row = vec![0u64; n];
            for (i, c) in [(group.add_idx(u, v), 1), (group.sub_idx(u, v), 1), (u, p - 2), (v, p - 2)] {
                row[i] = (row[i] + c) % p;
            }
            if insert_row(&mut basis, row) {
                rank += 1;
                if rank == n {
                    return rank;
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funceq::{quadratic_check, GroupFunction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_is_squares() {
        let g = FiniteAbelianGroup::cyclic(5).unwrap();
        let q = quadratic_vanishing(&g);
        let cs: Vec<i128> = q.trace.iter().map(|s| s.coefficient).collect();
        assert_eq!(cs, vec![0, 1, 4, 9, 16, 25]);
        assert!(q.trace_is_square && q.vanishes);
        assert_eq!(q.rank, Some(5));
    }

    #[test]
    fn small_groups_only_admit_zero() {
        for orders in [&[5u64][..], &[3, 3], &[2], &[2, 2], &[4], &[9, 3], &[27, 3]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            let q = quadratic_vanishing(&g);
            assert!(q.vanishes, "{orders:?}");
            assert_eq!(q.rank, Some(g.order() as usize));
        }
    }

    #[test]
    fn random_functions_violate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for orders in [&[5u64][..], &[3, 3]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            for _ in 0..100 {
                let f = GroupFunction::from_fn(&g, |_| rng.gen_range(-1.0..1.0));
                assert!(!quadratic_check(&f));
            }
        }
    }

    #[test]
    fn rank_detects_dependent_rows() {
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let mut basis = vec![None; 3];
        assert!(insert_row(&mut basis, vec![1, 2, 0]));
        assert!(!insert_row(&mut basis, vec![2, 4, 0]));
        assert!(insert_row(&mut basis, vec![0, 0, 5]));
        assert_eq!(rank_mod_p(&g), 3);
    }
}
