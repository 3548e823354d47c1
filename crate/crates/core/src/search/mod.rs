//! Necessity constructions, exhaustive and randomized symmetry scans, and
//! scans on the finite quotients `Z/p^k`.

mod grid;
mod padic;
pub mod random;

pub use grid::{estimate_search_space, grid_scan, ScanOutcome, ScanSummary, RANDOM_PARTITION, SEARCH_SPACE_LIMIT};
pub use padic::{padic_scan, PadicReport};

use serde::Serialize;

use crate::dist::{Classification, Distribution};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup, Subgroup};
use crate::predicates::{is_conditionally_symmetric, FormsInstance};

pub const TAG_KERNEL_COUNTEREXAMPLE: &str = "kernel-counterexample";
pub const TAG_THEOREM_B_CONSISTENT: &str = "theoremB-consistent";
pub const TAG_THEOREM_B_VIOLATION: &str = "theoremB-violation";
pub const TAG_ORDER2: &str = "order2-present";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub support_size_cap: usize,
    pub denominator_cap: u64,
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            support_size_cap: 3,
            denominator_cap: 6,
            random_trials: 10_000,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.support_size_cap == 0 || self.denominator_cap == 0 {
            return Err(Error::Precondition("search caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of evaluating one canonical instance.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub group: FiniteAbelianGroup,
    pub alpha: Endomorphism,
    pub mu1: Distribution,
    pub mu2: Distribution,
    pub symmetric: bool,
    /// Present iff `symmetric`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification1: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification2: Option<Classification>,
    /// `Ker(I + alpha)`.
    pub kernel: Subgroup,
    pub tags: Vec<String>,
}

impl SymmetryReport {
    pub fn evaluate(inst: &FormsInstance) -> Result<Self> {
        let alpha = inst.alpha()?;
        let kernel = inst.kernel_of_i_plus_alpha()?;
        let symmetric = is_conditionally_symmetric(inst);
        Ok(Self::assemble(alpha, &kernel, inst.mu1.clone(), inst.mu2.clone(), symmetric))
    }

    pub(crate) fn assemble(
        alpha: &Endomorphism,
        kernel: &Subgroup,
        mu1: Distribution,
        mu2: Distribution,
        symmetric: bool,
    ) -> Self {
        let g = alpha.group();
        let (classification1, classification2, tags) = if symmetric {
            let (c1, c2) = (mu1.classify(), mu2.classify());
            let tags = verdict_tags(g, kernel, &c1, &c2);
            (Some(c1), Some(c2), tags)
        } else {
            (None, None, Vec::new())
        };
        Self {
            group: g.clone(),
            alpha: alpha.clone(),
            mu1,
            mu2,
            symmetric,
            classification1,
            classification2,
            kernel: kernel.clone(),
            tags,
        }
    }

    /// Symmetric with at least one distribution outside the idempotent class.
    pub fn is_non_idempotent_hit(&self) -> bool {
        self.symmetric
            && [&self.classification1, &self.classification2]
                .iter()
                .any(|c| c.as_ref().is_some_and(|c| !c.is_idempotent()))
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

/// Tags for a symmetric hit. The idempotent conclusion is only asserted on
/// odd-order groups with `Ker(I + alpha) = {0}`, where `I + alpha` is an
/// automorphism.
fn verdict_tags(g: &FiniteAbelianGroup, kernel: &Subgroup, c1: &Classification, c2: &Classification) -> Vec<String> {
    let idempotent = c1.is_idempotent() && c2.is_idempotent();
    let mut tags = Vec::new();
    if !g.is_odd_order() {
        tags.push(TAG_ORDER2.to_string());
    }
    if !kernel.is_trivial() && !idempotent {
        tags.push(TAG_KERNEL_COUNTEREXAMPLE.to_string());
    }
    if g.is_odd_order() && kernel.is_trivial() {
        tags.push(if idempotent { TAG_THEOREM_B_CONSISTENT } else { TAG_THEOREM_B_VIOLATION }.to_string());
    }
    tags
}

fn supported_in(mu: &Distribution, subgroup: &Subgroup) -> bool {
    mu.masses().all(|(i, _)| subgroup.contains_idx(i))
}

/// `mu1 = mu2 = weights` supported inside `K = Ker(I + alpha)`, on which
/// `alpha` acts as `-I`.
pub fn kernel_construction(alpha: &Endomorphism, weights: &Distribution) -> Result<FormsInstance> {
    let g = alpha.group();
    if weights.group() != g {
        return Err(Error::GroupMismatch);
    }
    let kernel = Endomorphism::identity(g).add(alpha)?.kernel();
    if kernel.is_trivial() {
        return Err(Error::TrivialKernel);
    }
    if !supported_in(weights, &kernel) {
        return Err(Error::SupportEscapes);
    }
    let inst = FormsInstance::canonical(alpha.clone(), weights.clone(), weights.clone())?;
    assert!(is_conditionally_symmetric(&inst), "kernel construction must be symmetric");
    Ok(inst)
}

/// Both distributions supported on the subgroup generated by elements of
/// order 2, where `t = -t` makes every conditional law symmetric.
pub fn order2_construction(alpha: &Endomorphism, mu1: &Distribution, mu2: &Distribution) -> Result<FormsInstance> {
    let g = alpha.group();
    if mu1.group() != g || mu2.group() != g {
        return Err(Error::GroupMismatch);
    }
    let g2 = g.order2_subgroup();
    if g2.is_trivial() {
        return Err(Error::TrivialOrder2);
    }
    if !supported_in(mu1, &g2) || !supported_in(mu2, &g2) {
        return Err(Error::SupportEscapes);
    }
    let inst = FormsInstance::canonical(alpha.clone(), mu1.clone(), mu2.clone())?;
    assert!(is_conditionally_symmetric(&inst), "order-2 construction must be symmetric");
    Ok(inst)
}
