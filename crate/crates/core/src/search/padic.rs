use serde::Serialize;

use super::{grid_scan, kernel_construction, ScanOutcome, SearchConfig, SymmetryReport};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup, Subgroup};

/// Scan of `Z/p^k` with `alpha` = multiplication by `c`.
#[derive(Clone, Debug, Serialize)]
pub struct PadicReport {
    pub p: u64,
    pub k: u32,
    pub c: u64,
    /// Base-`p` digits `c0`, `c1` of `c`.
    pub c0: u64,
    pub c1: u64,
    pub kernel: Subgroup,
    /// Case label; every conclusion is a finite-level analogue.
    pub case: String,
    /// `true` when the scan matches the expectation for its case; always
    /// `true` for `p = 2`, where nothing is asserted.
    pub consistent: bool,
    pub non_idempotent_hits: usize,
    /// The kernel witness, when the kernel is nontrivial.
    pub construction: Option<SymmetryReport>,
    pub outcome: ScanOutcome,
}

pub const CASE_1I_CONSISTENT: &str = "finite-level 1(i) analogue: all symmetric hits idempotent";
pub const CASE_1I_VIOLATION: &str = "finite-level 1(i) analogue: non-idempotent symmetric hit found";
pub const CASE_2I_FOUND: &str = "finite-level 2(i) analogue: counterexamples found";
pub const CASE_2I_MISSING: &str = "finite-level 2(i) analogue: no counterexample found";
pub const CASE_P2: &str = "exploratory p=2";

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `mu = 1/3 E_0 + 2/3 E_h` with `h` the smallest nonzero kernel element;
/// never idempotent, always symmetric by the kernel construction.
fn kernel_witness(alpha: &Endomorphism, kernel: &Subgroup) -> Result<Option<SymmetryReport>> {
    let Some(&h) = kernel.indices().iter().find(|&&i| i != 0) else {
        return Ok(None);
    };
    let mu = Distribution::from_weights(alpha.group(), &[(0, 1), (h, 2)])?;
    let inst = kernel_construction(alpha, &mu)?;
    Ok(Some(SymmetryReport::evaluate(&inst)?))
}

pub fn padic_scan(p: u64, k: u32, c: u64, config: &SearchConfig) -> Result<PadicReport> {
    if !is_prime(p) {
        return Err(Error::InvalidPadic(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidPadic("k must be at least 1".into()));
    }
    if c % p == 0 {
        return Err(Error::InvalidPadic(format!("c = {c} is not a unit mod {p}")));
    }
    let modulus = p
        .checked_pow(k)
        .ok_or_else(|| Error::InvalidPadic(format!("{p}^{k} overflows")))?;
    let group = FiniteAbelianGroup::cyclic(modulus)?;
    let alpha = Endomorphism::new(&group, &[vec![(c % modulus) as i64]])?;
    let kernel = Endomorphism::identity(&group).add(&alpha)?.kernel();
    let (c0, c1) = (c % p, (c / p) % p);
    let outcome = grid_scan(&alpha, config)?;
    let construction = kernel_witness(&alpha, &kernel)?;
    let non_idempotent_hits = outcome.non_idempotent_hits().count()
        + construction.as_ref().map_or(0, |r| r.is_non_idempotent_hit() as usize);
    let (case, consistent) = if p == 2 {
        (CASE_P2, true)
    } else if c0 == p - 1 {
        if non_idempotent_hits > 0 {
            (CASE_2I_FOUND, true)
        } else {
            (CASE_2I_MISSING, false)
        }
    } else if non_idempotent_hits == 0 && kernel.is_trivial() {
        (CASE_1I_CONSISTENT, true)
    } else {
        (CASE_1I_VIOLATION, false)
    };
    Ok(PadicReport {
        p,
        k,
        c: c % modulus,
        c0,
        c1,
        kernel,
        case: case.to_string(),
        consistent,
        non_idempotent_hits,
        construction,
        outcome,
    })
}
