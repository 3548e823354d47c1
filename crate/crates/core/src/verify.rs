//! Randomized property suites behind `heyde-lab verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::funceq::{heyde_chain_scan, is_gaussian_by_equation, m_forms_chain_scan, quadratic_vanishing, CHAIN_TOL};
use crate::group::{Endomorphism, FiniteAbelianGroup};
use crate::predicates::{
    are_forms_independent, canonicalize, derived_forms, heyde_equation_check, independence_equation_check,
    is_conditionally_symmetric, symmetry_forces_equal, FormsInstance, DEFAULT_TOL,
};
use crate::search::random::{random_automorphism, random_canonical_instance, random_distribution_up_to, random_endomorphism};
use crate::search::{grid_scan, padic_scan, SearchConfig};

pub const SUITES: [&str; 10] = [
    "lemma1",
    "lemma5",
    "lemma8",
    "corollary1",
    "corollary3",
    "chain16",
    "chain10",
    "quadratic",
    "theoremB",
    "theoremC-finite",
];

/// Groups the randomized suites draw from.
pub fn test_groups() -> Vec<FiniteAbelianGroup> {
    [&[3u64][..], &[5], &[7], &[9], &[3, 3], &[15]]
        .iter()
        .map(|o| FiniteAbelianGroup::new(o).expect("valid orders"))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

const MAX_FAILURES: usize = 10;

struct Tally {
    checks: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: Vec::new(),
            failed: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn finish(self, suite: &str) -> SuiteResult {
        SuiteResult {
            suite: suite.to_string(),
            passed: self.failed == 0 && self.checks > 0,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

fn describe(inst: &FormsInstance) -> String {
    serde_json::to_string(inst).unwrap_or_default()
}

/// `per_group` mixture instances on each test group, in a fixed order.
pub fn instance_stream(seed: u64, per_group: usize) -> Vec<FormsInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for g in test_groups() {
        for _ in 0..per_group {
            out.push(random_canonical_instance(&g, &mut rng));
        }
    }
    out
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteResult> {
    let result = match name {
        "lemma1" => lemma1(seed),
        "lemma5" => lemma5(seed),
        "lemma8" => lemma8(seed),
        "corollary1" => corollary1(seed),
        "corollary3" => corollary3(seed),
        "chain16" => chain16(seed),
        "chain10" => chain10(seed),
        "quadratic" => quadratic(seed),
        "theoremB" => theorem_b(seed),
        "theoremC-finite" => theorem_c_finite(seed),
        other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
    };
    Ok(result?.finish(name))
}

fn lemma1(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    for inst in instance_stream(seed, 170) {
        let exact = is_conditionally_symmetric(&inst);
        let fourier = heyde_equation_check(&inst, DEFAULT_TOL)?;
        t.check(exact == fourier, || format!("exact={exact} eq42={fourier} on {}", describe(&inst)));
    }
    Ok(t)
}

fn lemma5(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    for inst in instance_stream(seed, 170).into_iter().filter(is_conditionally_symmetric) {
        let m = derived_forms(&inst)?;
        t.check(are_forms_independent(&m), || format!("dependent M-forms for {}", describe(&inst)));
    }
    Ok(t)
}

fn lemma8(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in test_groups() {
        for _ in 0..100 {
            let e: Vec<Endomorphism> = (0..4).map(|_| random_endomorphism(&g, &mut rng)).collect();
            let mu1 = random_distribution_up_to(&g, 4, 6, &mut rng);
            let mu2 = random_distribution_up_to(&g, 4, 6, &mut rng);
            let inst = FormsInstance::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone(), mu1, mu2)?;
            let direct = are_forms_independent(&inst);
            let eq = independence_equation_check(&inst, DEFAULT_TOL);
            t.check(direct == eq, || format!("direct={direct} eq4={eq} on {}", describe(&inst)));
        }
    }
    Ok(t)
}

fn corollary1(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = test_groups();
    for i in 0..100 {
        let g = &groups[i % groups.len()];
        let mu = random_distribution_up_to(g, 5, 6, &mut rng);
        let inst = FormsInstance::canonical(Endomorphism::negation(g), mu.clone(), mu)?;
        t.check(is_conditionally_symmetric(&inst), || format!("iid pair not symmetric: {}", describe(&inst)));
    }
    let config = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    for g in groups.iter().filter(|g| g.is_odd_order()) {
        for r in grid_scan(&Endomorphism::negation(g), &config)?.reports {
            let inst = FormsInstance::canonical(r.alpha.clone(), r.mu1.clone(), r.mu2.clone())?;
            let equal = symmetry_forces_equal(&inst)?;
            t.check(equal, || format!("symmetric pair with mu1 != mu2: {}", describe(&inst)));
        }
    }
    Ok(t)
}

fn corollary3(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in [FiniteAbelianGroup::cyclic(7)?, FiniteAbelianGroup::cyclic(9)?] {
        for i in 0..100 {
            let a1 = random_automorphism(&g, &mut rng);
            let a2 = random_automorphism(&g, &mut rng);
            let b1 = random_automorphism(&g, &mut rng);
            // every other instance has a' = -I, where symmetric instances are common
            let b2 = if i % 2 == 0 {
                random_endomorphism(&g, &mut rng)
            } else {
                b1.compose(&a1.invert()?)?.compose(&Endomorphism::negation(&g))?.compose(&a2)?
            };
            let mu1 = random_distribution_up_to(&g, 3, 4, &mut rng);
            let mu2 = if i % 4 == 1 { mu1.clone() } else { random_distribution_up_to(&g, 3, 4, &mut rng) };
            let inst = FormsInstance::new(a1, a2, b1, b2, mu1, mu2)?;
            let c = canonicalize(&inst)?;
            let before = is_conditionally_symmetric(&inst);
            let after = is_conditionally_symmetric(&c.instance);
            t.check(before == after, || format!("verdict {before} -> {after} on {}", describe(&inst)));
            // kernel of I + a' computed from the coefficient matrices directly
            let independent = Endomorphism::identity(&g)
                .add(&inst.alpha1.compose(&inst.beta1.invert()?)?.compose(&inst.beta2)?.compose(&inst.alpha2.invert()?)?)?
                .kernel();
            t.check(c.kernel == independent, || format!("kernel mismatch on {}", describe(&inst)));
        }
    }
    Ok(t)
}

/// Symmetric mixture instances whose symmetrized characteristic functions
/// are strictly positive.
fn chain_instances(seed: u64) -> Vec<FormsInstance> {
    instance_stream(seed, 170)
        .into_iter()
        .filter(is_conditionally_symmetric)
        .filter(|i| heyde_chain_scan(i, 0).is_ok())
        .collect()
}

fn chain16(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    for inst in chain_instances(seed) {
        let r = heyde_chain_scan(&inst, seed)?;
        t.check(r.max_residual < CHAIN_TOL, || format!("residual {} on {}", r.max_residual, describe(&inst)));
    }
    Ok(t)
}

fn chain10(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    for inst in chain_instances(seed) {
        let r = m_forms_chain_scan(&inst, seed)?;
        t.check(r.max_residual < CHAIN_TOL, || format!("eq9 residual {} on {}", r.max_residual, describe(&inst)));
        let g = inst.group();
        if g.is_odd_order() && inst.kernel_of_i_plus_alpha()?.is_trivial() {
            let cubic = r.cubic_residual.unwrap_or(f64::INFINITY);
            let p = r.p_sup.unwrap_or(f64::INFINITY);
            t.check(cubic < CHAIN_TOL, || format!("cubic residual {cubic} on {}", describe(&inst)));
            t.check(r.quadratic == Some(true), || format!("P fails the quadratic identity on {}", describe(&inst)));
            t.check(p < CHAIN_TOL, || format!("sup |P| = {p} on {}", describe(&inst)));
        }
    }
    Ok(t)
}

fn quadratic(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    let mut groups = test_groups();
    for o in [&[2u64][..], &[4], &[2, 2], &[27], &[9, 9], &[3, 3, 3, 3]] {
        groups.push(FiniteAbelianGroup::new(o)?);
    }
    for g in &groups {
        let q = quadratic_vanishing(g);
        t.check(q.vanishes, || format!("quadratic solutions survive on {:?}", g.cyclic_orders()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..500 {
        let g = &groups[i % groups.len()];
        let mu: Distribution = random_distribution_up_to(g, if i % 3 == 0 { 1 } else { 4 }, 6, &mut rng);
        let (gauss, degen, by_eq) = (mu.is_gaussian(), mu.is_degenerate(), is_gaussian_by_equation(&mu));
        t.check(gauss == degen && degen == by_eq, || {
            format!("gaussian={gauss} degenerate={degen} equation={by_eq} for {}", serde_json::to_string(&mu).unwrap_or_default())
        });
    }
    Ok(t)
}

/// `(order, alpha)` pairs with odd order and `I + alpha` invertible.
pub const THEOREM_B_CASES: [(u64, i64); 4] = [(5, 2), (7, 3), (9, 4), (15, 7)];

fn theorem_b(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    let config = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    for (n, a) in THEOREM_B_CASES {
        let g = FiniteAbelianGroup::cyclic(n)?;
        let out = grid_scan(&Endomorphism::scalar(&g, a), &config)?;
        let bad = out.non_idempotent_hits().count();
        t.check(bad == 0, || format!("{bad} non-idempotent symmetric pairs on Z{n}, alpha = {a}"));
    }
    Ok(t)
}

/// Support cap used for `Z/p^k` scans; cap 3 on `Z/27` exceeds the search limit.
pub const PADIC_SUPPORT_CAP: usize = 2;

fn theorem_c_finite(seed: u64) -> Result<Tally> {
    let mut t = Tally::new();
    let config = SearchConfig {
        support_size_cap: PADIC_SUPPORT_CAP,
        seed,
        ..SearchConfig::default()
    };
    for (p, k, c) in [(3, 3, 4), (3, 3, 5), (3, 1, 2), (5, 2, 4), (5, 2, 7)] {
        let r = padic_scan(p, k, c, &config)?;
        t.check(r.consistent, || format!("padic({p},{k},{c}) inconsistent: {}", r.case));
    }
    let r = padic_scan(2, 3, 3, &config)?;
    t.check(r.case == "exploratory p=2", || format!("padic(2,3,3) tagged {}", r.case));
    Ok(t)
}
