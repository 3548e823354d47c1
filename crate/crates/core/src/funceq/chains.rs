use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{neg_log_char, quadratic_check, symmetrize, GroupFunction};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup, GroupElement};
use crate::predicates::FormsInstance;

/// Residuals accumulate three logarithms and three differences.
pub const CHAIN_TOL: f64 = 1e-8;
/// Increment triples are enumerated exhaustively up to this many.
pub const FULL_ENUMERATION_LIMIT: u64 = 100_000;
/// Triples drawn when the full enumeration would exceed the limit.
pub const RANDOM_TRIPLES: usize = 10_000;

/// Increments and final residuals of the elimination chain for
/// `phi1(u+v) + phi2(u+a~v) - phi1(u-v) - phi2(u-a~v) = 0`.
#[derive(Clone, Debug)]
pub struct HeydeChain {
    /// `l11 = (I+a~)k1`, `l12 = 2a~k1`, `l13 = (a~-I)k1`.
    pub l1: [GroupElement; 3],
    /// `l21 = 2k2`, `l22 = (I+a~)k2`.
    pub l2: [GroupElement; 2],
    /// `l31 = (I-a~)k3`, `l32 = -(I-a~)k3`.
    pub l3: [GroupElement; 2],
    /// `Delta_{l31} Delta_{l21} Delta_{l11} phi1`.
    pub residual1: GroupFunction,
    /// `Delta_{l32} Delta_{l22} Delta_{l12} phi2`.
    pub residual2: GroupFunction,
}

impl HeydeChain {
    pub fn max_residual(&self) -> f64 {
        self.residual1.max_abs().max(self.residual2.max_abs())
    }
}

struct HeydeIdx {
    l1: [usize; 3],
    l2: [usize; 2],
    l3: [usize; 2],
}

fn heyde_increments(g: &FiniteAbelianGroup, adj: &Endomorphism, k: [usize; 3]) -> HeydeIdx {
    let ak1 = adj.apply_idx(k[0]);
    let ak2 = adj.apply_idx(k[1]);
    let ak3 = adj.apply_idx(k[2]);
    let l31 = g.sub_idx(k[2], ak3);
    HeydeIdx {
        l1: [g.add_idx(k[0], ak1), g.add_idx(ak1, ak1), g.sub_idx(ak1, k[0])],
        l2: [g.add_idx(k[1], k[1]), g.add_idx(k[1], ak2)],
        l3: [l31, g.neg_idx(l31)],
    }
}

fn heyde_residuals(phi1: &GroupFunction, phi2: &GroupFunction, l: &HeydeIdx) -> (GroupFunction, GroupFunction) {
    let r1 = phi1.diff_idx(l.l1[0]).diff_idx(l.l2[0]).diff_idx(l.l3[0]);
    let r2 = phi2.diff_idx(l.l1[1]).diff_idx(l.l2[1]).diff_idx(l.l3[1]);
    (r1, r2)
}

fn same_group(a: &FiniteAbelianGroup, b: &FiniteAbelianGroup) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

/// Runs the three substitutions for one increment triple `(k1, k2, k3)`;
/// `adj` is the adjoint `a~` of the instance's coefficient.
pub fn heyde_difference_chain(
    phi1: &GroupFunction,
    phi2: &GroupFunction,
    adj: &Endomorphism,
    k1: &GroupElement,
    k2: &GroupElement,
    k3: &GroupElement,
) -> Result<HeydeChain> {
    let g = phi1.group();
    same_group(g, phi2.group())?;
    same_group(g, adj.group())?;
    for k in [k1, k2, k3] {
        g.check(k)?;
    }
    let l = heyde_increments(g, adj, [g.index_of(k1), g.index_of(k2), g.index_of(k3)]);
    let (residual1, residual2) = heyde_residuals(phi1, phi2, &l);
    let el = |i: usize| g.element_at(i);
    Ok(HeydeChain {
        l1: l.l1.map(el),
        l2: l.l2.map(el),
        l3: l.l3.map(el),
        residual1,
        residual2,
    })
}

/// Summary of a chain evaluated over many increment triples.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub max_residual: f64,
    pub worst_increments: Vec<Vec<u64>>,
    /// `quadratic_check(P)`; absent for the symmetry chain, which has no `P`.
    pub quadratic: Option<bool>,
    /// `max_h |Delta_h^3 P|`; absent for the symmetry chain.
    pub cubic_residual: Option<f64>,
    /// `max |P|`; absent for the symmetry chain.
    pub p_sup: Option<f64>,
    pub triples: usize,
    pub exhaustive: bool,
}

/// All triples when there are at most [`FULL_ENUMERATION_LIMIT`], else
/// [`RANDOM_TRIPLES`] seeded draws.
fn increment_triples(g: &FiniteAbelianGroup, seed: u64) -> (Vec<[usize; 3]>, bool) {
    let n = g.order() as usize;
    if g.order().saturating_pow(3) <= FULL_ENUMERATION_LIMIT {
        let mut out = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push([a, b, c]);
                }
            }
        }
        (out, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = (0..RANDOM_TRIPLES)
            .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)])
            .collect();
        (out, false)
    }
}

fn symmetrized_phis(inst: &FormsInstance) -> Result<(GroupFunction, GroupFunction)> {
    Ok((neg_log_char(&symmetrize(&inst.mu1))?, neg_log_char(&symmetrize(&inst.mu2))?))
}

/// Symmetrizes both distributions of a canonical instance and runs
/// [`heyde_difference_chain`] over every increment triple.
pub fn heyde_chain_scan(inst: &FormsInstance, seed: u64) -> Result<ChainReport> {
    let adj = inst.alpha()?.adjoint();
    let g = inst.group();
    let (phi1, phi2) = symmetrized_phis(inst)?;
    let (triples, exhaustive) = increment_triples(g, seed);
    let mut worst = (0.0f64, [0usize; 3]);
    for &k in &triples {
        let (r1, r2) = heyde_residuals(&phi1, &phi2, &heyde_increments(g, &adj, k));
        let r = r1.max_abs().max(r2.max_abs());
        if r > worst.0 {
            worst = (r, k);
        }
    }
    Ok(ChainReport {
        max_residual: worst.0,
        worst_increments: worst.1.iter().map(|&i| g.element_at(i).into_coords()).collect(),
        quadratic: None,
        cubic_residual: None,
        p_sup: None,
        triples: triples.len(),
        exhaustive,
    })
}

/// `P`, `Q` and the residuals of the chain derived from the independence
/// equation of `M1 = (I+a)xi1 + 2a xi2`, `M2 = 2xi1 + (I+a)xi2`.
#[derive(Clone, Debug)]
pub struct MFormsChain {
    /// `P(y) = psi1((I+a~)y) + psi2(2a~y)`.
    pub p: GroupFunction,
    /// `Q(y) = psi1(2y) + psi2((I+a~)y)`.
    pub q: GroupFunction,
    /// `Delta_h Delta_{2h2} Delta_{(I+a~)h1} P`.
    pub eq9: GroupFunction,
    /// `Delta_k Delta_{-(I+a~)h2} Delta_{-2a~h1} Q`.
    pub eq9a: GroupFunction,
    /// `Delta_h^3 P`.
    pub cubic: GroupFunction,
}

impl MFormsChain {
    pub fn max_residual(&self) -> f64 {
        self.eq9.max_abs().max(self.eq9a.max_abs())
    }
}

struct PQ {
    p: GroupFunction,
    q: GroupFunction,
    one_plus: Endomorphism,
}

fn p_and_q(psi1: &GroupFunction, psi2: &GroupFunction, adj: &Endomorphism) -> PQ {
    let g = psi1.group();
    let one_plus = Endomorphism::identity(g).add(adj).expect("same group");
    let p = psi1
        .compose_idx(|y| one_plus.apply_idx(y))
        .plus(&psi2.compose_idx(|y| {
            let a = adj.apply_idx(y);
            g.add_idx(a, a)
        }));
    let q = psi1.compose_idx(|y| g.add_idx(y, y)).plus(&psi2.compose_idx(|y| one_plus.apply_idx(y)));
    PQ { p, q, one_plus }
}

fn eq9_residuals(pq: &PQ, adj: &Endomorphism, h1: usize, h2: usize, h: usize, k: usize) -> (GroupFunction, GroupFunction) {
    let g = pq.p.group();
    let ah1 = adj.apply_idx(h1);
    let eq9 = pq.p.diff_idx(pq.one_plus.apply_idx(h1)).diff_idx(g.add_idx(h2, h2)).diff_idx(h);
    let eq9a = pq
        .q
        .diff_idx(g.neg_idx(g.add_idx(ah1, ah1)))
        .diff_idx(g.neg_idx(pq.one_plus.apply_idx(h2)))
        .diff_idx(k);
    (eq9, eq9a)
}

/// Runs the substitutions `u -> u + (I+a~)h1, v -> v - 2a~h1`, then
/// `u -> u + 2h2, v -> v - (I+a~)h2`, then the final differences in `h` and `k`.
#[allow(clippy::too_many_arguments)]
pub fn m_forms_difference_chain(
    psi1: &GroupFunction,
    psi2: &GroupFunction,
    adj: &Endomorphism,
    h1: &GroupElement,
    h2: &GroupElement,
    h: &GroupElement,
    k: &GroupElement,
) -> Result<MFormsChain> {
    let g = psi1.group();
    same_group(g, psi2.group())?;
    same_group(g, adj.group())?;
    for x in [h1, h2, h, k] {
        g.check(x)?;
    }
    let pq = p_and_q(psi1, psi2, adj);
    let hi = g.index_of(h);
    let (eq9, eq9a) = eq9_residuals(&pq, adj, g.index_of(h1), g.index_of(h2), hi, g.index_of(k));
    let cubic = pq.p.diff_idx(hi).diff_idx(hi).diff_idx(hi);
    Ok(MFormsChain {
        p: pq.p,
        q: pq.q,
        eq9,
        eq9a,
        cubic,
    })
}

/// Symmetrizes a canonical instance and evaluates the derived-forms chain over
/// every increment triple `(h1, h2, h)` (with `k = h`), plus `Delta_h^3 P` for
/// every `h` and the quadratic identity for `P`.
pub fn m_forms_chain_scan(inst: &FormsInstance, seed: u64) -> Result<ChainReport> {
    let adj = inst.alpha()?.adjoint();
    let g = inst.group();
    let (psi1, psi2) = symmetrized_phis(inst)?;
    let pq = p_and_q(&psi1, &psi2, &adj);
    let (triples, exhaustive) = increment_triples(g, seed);
    let mut worst = (0.0f64, [0usize; 3]);
    for &[h1, h2, h] in &triples {
        let (eq9, eq9a) = eq9_residuals(&pq, &adj, h1, h2, h, h);
        let r = eq9.max_abs().max(eq9a.max_abs());
        if r > worst.0 {
            worst = (r, [h1, h2, h]);
        }
    }
    let cubic = (0..g.order() as usize)
        .map(|h| pq.p.diff_idx(h).diff_idx(h).diff_idx(h).max_abs())
        .fold(0.0, f64::max);
    Ok(ChainReport {
        max_residual: worst.0,
        worst_increments: worst.1.iter().map(|&i| g.element_at(i).into_coords()).collect(),
        quadratic: Some(quadratic_check(&pq.p)),
        cubic_residual: Some(cubic),
        p_sup: Some(pq.p.max_abs()),
        triples: triples.len(),
        exhaustive,
    })
}
