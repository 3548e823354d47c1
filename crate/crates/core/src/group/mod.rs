//! Finite abelian groups written as products of cyclic groups.
//!
//! A group `Z_{n_1} x ... x Z_{n_k}` is identified with its own character
//! group through the pairing
//!
//! ```text
//! (x, y) = exp(2 pi i * sum_j x_j y_j / n_j)
//! ```
//!
//! so the same [`FiniteAbelianGroup`] value plays the role of both `X` and
//! its dual `Y`. Elements are enumerated in lexicographic order of their
//! coordinate vectors (first coordinate most significant), and every element
//! has a dense index in `0..order` following that order. Most of the crate
//! works on indices internally and converts to [`GroupElement`] at the edges.

mod endomorphism;
mod subgroup;

pub use endomorphism::Endomorphism;
pub use subgroup::{all_subgroups, Subgroup};

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of elements a group may have.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// `Z_{n_1} x ... x Z_{n_k}` with cached order, strides and exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    exponent: u64,
}

/// A residue vector, reduced componentwise modulo the cyclic orders.
///
/// Through self-duality the same type also indexes characters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FiniteAbelianGroup {
    /// Builds the group with the default enumeration cap.
    pub fn new(cyclic_orders: &[u64]) -> Result<Self> {
        Self::with_cap(cyclic_orders, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(cyclic_orders: &[u64], cap: u64) -> Result<Self> {
        if cyclic_orders.is_empty() {
            return Err(Error::EmptyGroup);
        }
        if let Some(&bad) = cyclic_orders.iter().find(|&&n| n < 2) {
            return Err(Error::OrderTooSmall(bad));
        }
        let order: u128 = cyclic_orders.iter().map(|&n| n as u128).product();
        if order > cap as u128 {
            return Err(Error::CapExceeded { order, cap });
        }
        let k = cyclic_orders.len();
        let mut strides = vec![1u64; k];
        for j in (0..k.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * cyclic_orders[j + 1];
        }
        let exponent = cyclic_orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Ok(Self {
            orders: cyclic_orders.to_vec(),
            strides,
            order: order as u64,
            exponent,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_odd_order(&self) -> bool {
        self.order % 2 == 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Validates already-reduced coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.rank() || coords.iter().zip(&self.orders).any(|(&c, &n)| c >= n) {
            return Err(Error::NotInGroup(coords.to_vec()));
        }
        Ok(GroupElement(coords.to_vec()))
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn reduce(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::NotInGroup(coords.iter().map(|&c| c as u64).collect()));
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.rank() && x.0.iter().zip(&self.orders).all(|(&c, &n)| c < n)
    }

    pub(crate) fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInGroup(x.0.clone()))
        }
    }

    /// Position of `x` in the lexicographic enumeration.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        x.0.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum::<u64>() as usize
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        GroupElement(self.digits(index as u64))
    }

    fn digits(&self, index: u64) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (index / s) % n)
            .collect()
    }

    fn from_digits(&self, digits: &[u64]) -> usize {
        digits.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum::<u64>() as usize
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().zip(&self.orders).map(|(&a, &n)| (n - a) % n).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.neg(y))
    }

    /// The integer scaling `f_n : x -> n x`.
    pub fn scale(&self, n: i64, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&a, &m)| {
                    let f = n.rem_euclid(m as i64) as u64;
                    ((a as u128 * f as u128) % m as u128) as u64
                })
                .collect(),
        )
    }

    /// Order of `x` as a group element.
    pub fn element_order(&self, x: &GroupElement) -> u64 {
        x.0.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if self.orders.len() == 1 {
            return (a + b) % self.order as usize;
        }
        let da = self.digits(a as u64);
        let db = self.digits(b as u64);
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .zip(&self.orders)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        self.from_digits(&sum)
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        if self.orders.len() == 1 {
            let n = self.order as usize;
            return (n - a) % n;
        }
        let d: Vec<u64> = self
            .digits(a as u64)
            .iter()
            .zip(&self.orders)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        self.from_digits(&d)
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Exact phase of the pairing: `(x, y) = exp(2 pi i * phase / exponent)`.
    pub fn pairing_phase(&self, x: &GroupElement, y: &GroupElement) -> u64 {
        let e = self.exponent as u128;
        let mut acc: u128 = 0;
        for ((&a, &b), &n) in x.0.iter().zip(&y.0).zip(&self.orders) {
            acc = (acc + (a as u128 * b as u128 % n as u128) * (e / n as u128)) % e;
        }
        acc as u64
    }

    pub(crate) fn pairing_phase_idx(&self, x: usize, y: usize) -> u64 {
        if self.orders.len() == 1 {
            return ((x as u128 * y as u128) % self.order as u128) as u64;
        }
        self.pairing_phase(&self.element_at(x), &self.element_at(y))
    }

    /// Unit complex number for a phase expressed in units of `1 / exponent`.
    pub fn phase_to_complex(&self, phase: u64) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (phase as f64) / (self.exponent as f64);
        Complex64::new(theta.cos(), theta.sin())
    }

    /// The value of the character `y` at the element `x`.
    pub fn character(&self, x: &GroupElement, y: &GroupElement) -> Result<Complex64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.phase_to_complex(self.pairing_phase(x, y)))
    }

    pub(crate) fn character_idx(&self, x: usize, y: usize) -> Complex64 {
        self.phase_to_complex(self.pairing_phase_idx(x, y))
    }

    /// Subgroup generated by the elements `x` with `2x = 0`.
    pub fn order2_subgroup(&self) -> Subgroup {
        let gens: Vec<GroupElement> = self
            .elements()
            .filter(|x| self.scale(2, x) == self.zero() && *x != self.zero())
            .collect();
        Subgroup::generated(self, &gens).expect("generators are group elements")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn make_group_orders() {
        assert_eq!(FiniteAbelianGroup::new(&[5]).unwrap().order(), 5);
        assert_eq!(FiniteAbelianGroup::new(&[3, 3]).unwrap().order(), 9);
        assert_eq!(FiniteAbelianGroup::new(&[9, 3]).unwrap().order(), 27);
    }

    #[test]
    fn make_group_rejects_bad_input() {
        assert_eq!(FiniteAbelianGroup::new(&[5, 1]), Err(Error::OrderTooSmall(1)));
        assert_eq!(FiniteAbelianGroup::new(&[]), Err(Error::EmptyGroup));
        assert!(matches!(
            FiniteAbelianGroup::new(&[1000, 1001]),
            Err(Error::CapExceeded { .. })
        ));
        assert!(FiniteAbelianGroup::with_cap(&[10, 10], 99).is_err());
        assert!(FiniteAbelianGroup::with_cap(&[10, 10], 100).is_ok());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let els: Vec<Vec<u64>> = g.elements().map(|e| e.into_coords()).collect();
        assert_eq!(
            els,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.index_of(&e), i);
        }
    }

    #[test]
    fn character_examples() {
        let z5 = FiniteAbelianGroup::cyclic(5).unwrap();
        let one = z5.element(&[1]).unwrap();
        assert!(close(z5.character(&one, &z5.zero()).unwrap(), Complex64::new(1.0, 0.0)));
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!(close(z5.character(&one, &one).unwrap(), w));

        let g = FiniteAbelianGroup::new(&[3, 3]).unwrap();
        let x = g.element(&[1, 2]).unwrap();
        let y = g.element(&[2, 1]).unwrap();
        // 1*2/3 + 2*1/3 = 4/3, i.e. one third of a turn.
        let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 4.0 / 3.0);
        assert!(close(g.character(&x, &y).unwrap(), expected));
        assert!(close(expected, Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)));
    }

    #[test]
    fn character_rejects_foreign_elements() {
        let g = FiniteAbelianGroup::cyclic(5).unwrap();
        let h = FiniteAbelianGroup::new(&[5, 5]).unwrap();
        assert!(g.character(&h.zero(), &g.zero()).is_err());
    }

    #[test]
    fn index_arithmetic_matches_coordinates() {
        let g = FiniteAbelianGroup::new(&[4, 3, 2]).unwrap();
        for a in 0..g.order() as usize {
            for b in 0..g.order() as usize {
                let (x, y) = (g.element_at(a), g.element_at(b));
                assert_eq!(g.element_at(g.add_idx(a, b)), g.add(&x, &y));
                assert_eq!(g.element_at(g.sub_idx(a, b)), g.sub(&x, &y));
            }
            assert_eq!(g.element_at(g.neg_idx(a)), g.neg(&g.element_at(a)));
        }
    }

    #[test]
    fn scaling_and_element_order() {
        let g = FiniteAbelianGroup::new(&[9, 3]).unwrap();
        let x = g.element(&[3, 1]).unwrap();
        assert_eq!(g.element_order(&x), 3);
        assert_eq!(g.scale(3, &x), g.zero());
        assert_eq!(g.scale(-1, &x), g.neg(&x));
        assert_eq!(g.reduce(&[-1, 4]).unwrap(), g.element(&[8, 1]).unwrap());
    }

    #[test]
    fn order2_subgroup_examples() {
        let z5 = FiniteAbelianGroup::cyclic(5).unwrap();
        assert!(z5.order2_subgroup().is_trivial());

        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        let g = z4.order2_subgroup();
        let members: Vec<_> = g.elements().map(|e| e.into_coords()).collect();
        assert_eq!(members, vec![vec![0], vec![2]]);

        let z2z3 = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let members: Vec<_> = z2z3.order2_subgroup().elements().map(|e| e.into_coords()).collect();
        assert_eq!(members, vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn odd_order_groups_have_bijective_doubling() {
        for orders in [&[3u64][..], &[5], &[9], &[3, 3], &[15], &[5, 5], &[3, 9]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            assert!(g.order2_subgroup().is_trivial());
            let doubling = Endomorphism::scalar(&g, 2);
            assert!(doubling.is_automorphism());
        }
    }
}
