use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{SearchConfig, SymmetryReport};
use crate::dist::{Classification, Distribution};
use crate::error::{Error, Result};
use crate::group::{all_subgroups, Endomorphism, FiniteAbelianGroup};
use crate::predicates::{is_conditionally_symmetric, FormsInstance};

/// Largest admissible `N^2 + trials`, with `N` the number of candidate distributions.
pub const SEARCH_SPACE_LIMIT: u128 = 100_000_000;
/// Random trials per deterministic partition; partition `i` is seeded `seed + i`.
pub const RANDOM_PARTITION: usize = 1_000;

/// Candidate distributions sharing one support, as integer weight vectors
/// with gcd 1 (so each rational distribution appears once).
#[derive(Clone, Debug)]
struct SupportClass {
    support: Vec<usize>,
    weights: Vec<Vec<u64>>,
}

/// Positive integer vectors of length `len`, sum at most `max_sum`, gcd 1.
fn weight_vectors(len: usize, max_sum: u64) -> Vec<Vec<u64>> {
    fn go(len: usize, remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            if cur.iter().fold(0u64, |g, &w| g.gcd(&w)) == 1 {
                out.push(cur.clone());
            }
            return;
        }
        let left = (len - cur.len() - 1) as u64;
        for w in 1..=remaining.saturating_sub(left) {
            cur.push(w);
            go(len, remaining - w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len as u64 <= max_sum {
        go(len, max_sum, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn grid_candidate_count(group: &FiniteAbelianGroup, config: &SearchConfig) -> u128 {
    let n = group.order() as u128;
    let cap = (config.support_size_cap as u128).min(n);
    (1..=cap)
        .map(|s| binomial(n, s).saturating_mul(weight_vectors(s as usize, config.denominator_cap).len() as u128))
        .fold(0u128, u128::saturating_add)
}

/// `N^2 + trials` for the grid family alone (idempotent candidates not counted).
pub fn estimate_search_space(group: &FiniteAbelianGroup, config: &SearchConfig) -> u128 {
    let n = grid_candidate_count(group, config);
    n.saturating_mul(n).saturating_add(config.random_trials as u128)
}

fn check_space(estimate: u128) -> Result<()> {
    if estimate > SEARCH_SPACE_LIMIT {
        return Err(Error::SearchOverflow {
            estimate,
            limit: SEARCH_SPACE_LIMIT,
        });
    }
    Ok(())
}

fn subsets(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The grid family plus every idempotent distribution `m_K * E_x`.
fn candidate_family(group: &FiniteAbelianGroup, config: &SearchConfig) -> BTreeMap<Vec<usize>, Vec<Vec<u64>>> {
    let n = group.order() as usize;
    let mut family: BTreeMap<Vec<usize>, Vec<Vec<u64>>> = BTreeMap::new();
    for size in 1..=config.support_size_cap.min(n) {
        let ws = weight_vectors(size, config.denominator_cap);
        if ws.is_empty() {
            continue;
        }
        subsets(n, size, |s| {
            family.insert(s.to_vec(), ws.clone());
        });
    }
    for k in all_subgroups(group) {
        for x in k.coset_representatives() {
            let mut support: Vec<usize> = k.indices().iter().map(|&m| group.add_idx(m, x)).collect();
            support.sort_unstable();
            let uniform = vec![1u64; support.len()];
            let entry = family.entry(support).or_default();
            if !entry.contains(&uniform) {
                entry.push(uniform);
            }
        }
    }
    family
}

/// Joint cells of `(x1 + x2, x1 + alpha x2)` over two supports, with the
/// cell of each `(i, j)` and the mirror `(s, -t)` of each cell. `None` when
/// the support is not closed under mirroring, which rules out symmetry for
/// every choice of positive weights.
struct CellMap {
    cell_of: Vec<usize>,
    mirror: Vec<usize>,
    cells: usize,
}

fn cell_map(group: &FiniteAbelianGroup, alpha: &Endomorphism, s1: &[usize], s2: &[usize]) -> Option<CellMap> {
    let mut keys: Vec<(usize, usize)> = Vec::with_capacity(s1.len() * s2.len());
    for &x1 in s1 {
        for &x2 in s2 {
            keys.push((group.add_idx(x1, x2), group.add_idx(x1, alpha.apply_idx(x2))));
        }
    }
    let mut cells = keys.clone();
    cells.sort_unstable();
    cells.dedup();
    let mut mirror = Vec::with_capacity(cells.len());
    for &(s, t) in &cells {
        mirror.push(cells.binary_search(&(s, group.neg_idx(t))).ok()?);
    }
    let cell_of = keys.iter().map(|k| cells.binary_search(k).expect("present")).collect();
    Some(CellMap {
        cell_of,
        mirror,
        cells: cells.len(),
    })
}

fn weights_symmetric(map: &CellMap, w1: &[u64], w2: &[u64], mass: &mut Vec<u64>) -> bool {
    mass.clear();
    mass.resize(map.cells, 0);
    let mut k = 0;
    for &a in w1 {
        for &b in w2 {
            mass[map.cell_of[k]] += a * b;
            k += 1;
        }
    }
    (0..map.cells).all(|c| mass[c] == mass[map.mirror[c]])
}

type Candidate = (Vec<usize>, Vec<u64>);

fn to_distribution(group: &FiniteAbelianGroup, (support, weights): &Candidate) -> Distribution {
    let pairs: Vec<(usize, u64)> = support.iter().copied().zip(weights.iter().copied()).collect();
    Distribution::from_weights(group, &pairs).expect("positive weights")
}

fn random_candidate<R: Rng>(group: &FiniteAbelianGroup, weight_cap: u64, rng: &mut R) -> Candidate {
    let n = group.order() as usize;
    let size = rng.gen_range(1..=n);
    let mut support = rand::seq::index::sample(rng, n, size).into_vec();
    support.sort_unstable();
    let mut weights: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=weight_cap)).collect();
    let g = weights.iter().fold(0u64, |g, &w| g.gcd(&w));
    weights.iter_mut().for_each(|w| *w /= g);
    (support, weights)
}

/// Counts over symmetric pairs. A pair is `degenerate` when both laws are
/// point masses, `idempotent` when both are idempotent and not both point
/// masses, and `other` otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub candidates: usize,
    pub grid_pairs: u128,
    pub random_trials: usize,
    pub symmetric: usize,
    pub idempotent: usize,
    pub degenerate: usize,
    pub other: usize,
    pub tags: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOutcome {
    /// Symmetric hits in canonical order: grid pairs first, then random pairs
    /// not already covered by the grid.
    pub reports: Vec<SymmetryReport>,
    pub summary: ScanSummary,
}

impl ScanOutcome {
    pub fn non_idempotent_hits(&self) -> impl Iterator<Item = &SymmetryReport> {
        self.reports.iter().filter(|r| r.is_non_idempotent_hit())
    }
}

/// Exact symmetry scan over the candidate family squared plus random pairs.
pub fn grid_scan(alpha: &Endomorphism, config: &SearchConfig) -> Result<ScanOutcome> {
    config.validate()?;
    let group = alpha.group();
    check_space(estimate_search_space(group, config))?;
    let family = candidate_family(group, config);
    let classes: Vec<SupportClass> = family
        .into_iter()
        .map(|(support, weights)| SupportClass { support, weights })
        .collect();
    let candidates: usize = classes.iter().map(|c| c.weights.len()).sum();
    let grid_pairs = (candidates as u128) * (candidates as u128);
    check_space(grid_pairs + config.random_trials as u128)?;

    let grid_hits: Vec<(Candidate, Candidate)> = classes
        .par_iter()
        .map(|a| {
            let mut hits = Vec::new();
            let mut mass = Vec::new();
            for b in &classes {
                let Some(map) = cell_map(group, alpha, &a.support, &b.support) else {
                    continue;
                };
                for w1 in &a.weights {
                    for w2 in &b.weights {
                        if weights_symmetric(&map, w1, w2, &mut mass) {
                            hits.push(((a.support.clone(), w1.clone()), (b.support.clone(), w2.clone())));
                        }
                    }
                }
            }
            hits
        })
        .flatten_iter()
        .collect();

    let partitions = config.random_trials.div_ceil(RANDOM_PARTITION);
    let random_hits: Vec<(Candidate, Candidate)> = (0..partitions)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(p as u64));
            let count = RANDOM_PARTITION.min(config.random_trials - p * RANDOM_PARTITION);
            let mut hits = Vec::new();
            let mut mass = Vec::new();
            for _ in 0..count {
                let c1 = random_candidate(group, config.denominator_cap, &mut rng);
                let c2 = random_candidate(group, config.denominator_cap, &mut rng);
                if let Some(map) = cell_map(group, alpha, &c1.0, &c2.0) {
                    if weights_symmetric(&map, &c1.1, &c2.1, &mut mass) {
                        hits.push((c1, c2));
                    }
                }
            }
            hits
        })
        .flatten_iter()
        .collect();

    let in_grid: BTreeSet<&(Candidate, Candidate)> = grid_hits.iter().collect();
    let mut seen = BTreeSet::new();
    let extra: Vec<&(Candidate, Candidate)> = random_hits
        .iter()
        .filter(|h| !in_grid.contains(h) && seen.insert(*h))
        .collect();

    let kernel = Endomorphism::identity(group).add(alpha)?.kernel();
    let mut summary = ScanSummary {
        candidates,
        grid_pairs,
        random_trials: config.random_trials,
        ..ScanSummary::default()
    };
    let mut reports = Vec::with_capacity(grid_hits.len() + extra.len());
    for (c1, c2) in grid_hits.iter().chain(extra) {
        let (mu1, mu2) = (to_distribution(group, c1), to_distribution(group, c2));
        let inst = FormsInstance::canonical(alpha.clone(), mu1, mu2)?;
        if !is_conditionally_symmetric(&inst) {
            return Err(Error::Disagreement(
                "integer prefilter accepted a pair the exact predicate rejects".into(),
            ));
        }
        let report = SymmetryReport::assemble(alpha, &kernel, inst.mu1, inst.mu2, true);
        tally(&mut summary, &report);
        reports.push(report);
    }
    Ok(ScanOutcome { reports, summary })
}

fn tally(summary: &mut ScanSummary, report: &SymmetryReport) {
    let classes = [&report.classification1, &report.classification2].map(|c| c.as_ref().expect("symmetric"));
    summary.symmetric += 1;
    if classes.iter().all(|c| matches!(c, Classification::Degenerate { .. })) {
        summary.degenerate += 1;
    } else if classes.iter().all(|c| c.is_idempotent()) {
        summary.idempotent += 1;
    } else {
        summary.other += 1;
    }
    for t in &report.tags {
        *summary.tags.entry(t.clone()).or_default() += 1;
    }
}
