//! Real-valued functions on a finite group and the finite-difference
//! machinery used to reduce the symmetry and independence equations.

mod chains;
mod quadratic;

pub use chains::{
    heyde_chain_scan, heyde_difference_chain, m_forms_chain_scan, m_forms_difference_chain, ChainReport, HeydeChain,
    MFormsChain, CHAIN_TOL, FULL_ENUMERATION_LIMIT, RANDOM_TRIPLES,
};
pub use quadratic::{quadratic_vanishing, InductionStep, QuadraticVanishing, RANK_PRIME};

use crate::dist::{Distribution, CHAR_TOL};
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// A total function `Y -> R`, stored by element index.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction {
    group: FiniteAbelianGroup,
    values: Vec<f64>,
}

impl GroupFunction {
    pub fn new(group: &FiniteAbelianGroup, values: Vec<f64>) -> Result<Self> {
        if values.len() as u64 != group.order() {
            return Err(Error::Precondition(format!(
                "expected {} values, got {}",
                group.order(),
                values.len()
            )));
        }
        Ok(Self {
            group: group.clone(),
            values,
        })
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl FnMut(usize) -> f64) -> Self {
        Self {
            group: group.clone(),
            values: (0..group.order() as usize).map(f).collect(),
        }
    }

    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        Self::from_fn(group, |_| 0.0)
    }

    /// Indicator of a single element.
    pub fn indicator(group: &FiniteAbelianGroup, x: &GroupElement) -> Result<Self> {
        group.check(x)?;
        let i = group.index_of(x);
        Ok(Self::from_fn(group, |j| if j == i { 1.0 } else { 0.0 }))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn value(&self, y: &GroupElement) -> f64 {
        self.values[self.group.index_of(y)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `y -> f(a y)` for an endomorphism given by its index table.
    pub(crate) fn compose_idx(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::from_fn(&self.group, |y| self.values[map(y)])
    }

    pub(crate) fn plus(&self, other: &Self) -> Self {
        Self::from_fn(&self.group, |y| self.values[y] + other.values[y])
    }

    pub(crate) fn diff_idx(&self, h: usize) -> Self {
        Self::from_fn(&self.group, |y| self.values[self.group.add_idx(y, h)] - self.values[y])
    }
}

/// `Delta_h f(y) = f(y + h) - f(y)`.
pub fn finite_difference(f: &GroupFunction, h: &GroupElement) -> Result<GroupFunction> {
    f.group.check(h)?;
    Ok(f.diff_idx(f.group.index_of(h)))
}

/// `phi(y) = -log mu^(y)`; every value of `mu^` must be real and above [`CHAR_TOL`].
pub fn neg_log_char(mu: &Distribution) -> Result<GroupFunction> {
    let g = mu.group();
    let f = mu.char_function();
    let mut values = Vec::with_capacity(g.order() as usize);
    for (i, z) in f.values().iter().enumerate() {
        if z.re <= CHAR_TOL || z.im.abs() > CHAR_TOL {
            return Err(Error::NonPositiveChar(g.element_at(i).into_coords()));
        }
        // clamp the rounding noise at y = 0 and wherever |mu^| = 1
        values.push((-z.re.ln()).max(0.0));
    }
    GroupFunction::new(g, values)
}

/// `nu = mu * reflect(mu)`, whose characteristic function is `|mu^|^2`.
pub fn symmetrize(mu: &Distribution) -> Distribution {
    mu.convolve(&mu.reflect()).expect("same group")
}

/// Largest violation of `phi(u + v) + phi(u - v) = 2[phi(u) + phi(v)]`.
pub fn quadratic_residual(phi: &GroupFunction) -> f64 {
    let g = &phi.group;
    let n = g.order() as usize;
    let mut worst = 0.0f64;
    for u in 0..n {
        for v in 0..n {
            let lhs = phi.values[g.add_idx(u, v)] + phi.values[g.sub_idx(u, v)];
            let rhs = 2.0 * (phi.values[u] + phi.values[v]);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

pub fn quadratic_check(phi: &GroupFunction) -> bool {
    quadratic_residual(phi) <= CHAR_TOL
}

/// Writes `mu^(y) = (x, y) exp(-phi(y))` when possible and returns `(x, phi)`.
///
/// `mu` is Gaussian in the functional-equation sense iff the result exists
/// and `phi` passes [`quadratic_check`].
pub fn gaussian_decomposition(mu: &Distribution) -> Option<(GroupElement, GroupFunction)> {
    let g = mu.group();
    let f = mu.char_function();
    let n = g.order() as usize;
    if f.values().iter().any(|z| z.norm() <= CHAR_TOL) {
        return None;
    }
    let phase: Vec<_> = f.values().iter().map(|z| z / z.norm()).collect();
    let x = (0..n).find(|&x| (0..n).all(|y| (phase[y] - g.character_idx(x, y)).norm() <= 1e-7))?;
    let phi = GroupFunction::from_fn(g, |y| -f.at(y).norm().ln());
    Some((g.element_at(x), phi))
}

/// The functional-equation definition of a Gaussian law, evaluated directly.
pub fn is_gaussian_by_equation(mu: &Distribution) -> bool {
    gaussian_decomposition(mu).is_some_and(|(_, phi)| quadratic_check(&phi))
}
