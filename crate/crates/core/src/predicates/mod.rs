//! Decision procedures for pairs of linear forms of two independent
//! group-valued random variables.
//!
//! Everything is decided exactly in probability space; the Fourier-side
//! identities are evaluated in floating point and serve as corroboration.

mod joint;

pub use joint::{symmetry_statistic, total_variation, JointDistribution};

use crate::dist::{Distribution, CHAR_TOL};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup, GroupElement, Subgroup};

/// `L1 = a1 xi1 + a2 xi2`, `L2 = b1 xi1 + b2 xi2` with `xi_j ~ mu_j` independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormsInstance {
    pub alpha1: Endomorphism,
    pub alpha2: Endomorphism,
    pub beta1: Endomorphism,
    pub beta2: Endomorphism,
    pub mu1: Distribution,
    pub mu2: Distribution,
}

impl FormsInstance {
    pub fn new(
        alpha1: Endomorphism,
        alpha2: Endomorphism,
        beta1: Endomorphism,
        beta2: Endomorphism,
        mu1: Distribution,
        mu2: Distribution,
    ) -> Result<Self> {
        let g = mu1.group();
        let all_same = [&alpha1, &alpha2, &beta1, &beta2].iter().all(|a| a.group() == g) && mu2.group() == g;
        if !all_same {
            return Err(Error::GroupMismatch);
        }
        Ok(Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
            mu1,
            mu2,
        })
    }

    /// `L1 = xi1 + xi2`, `L2 = xi1 + alpha xi2`.
    pub fn canonical(alpha: Endomorphism, mu1: Distribution, mu2: Distribution) -> Result<Self> {
        let id = Endomorphism::identity(alpha.group());
        Self::new(id.clone(), id.clone(), id, alpha, mu1, mu2)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.mu1.group()
    }

    pub fn is_canonical(&self) -> bool {
        let id = Endomorphism::identity(self.group());
        self.alpha1 == id && self.alpha2 == id && self.beta1 == id
    }

    /// The coefficient `alpha` of a canonical instance.
    pub fn alpha(&self) -> Result<&Endomorphism> {
        if self.is_canonical() {
            Ok(&self.beta2)
        } else {
            Err(Error::NonCanonical)
        }
    }

    /// `Ker(I + alpha)` of a canonical instance.
    pub fn kernel_of_i_plus_alpha(&self) -> Result<Subgroup> {
        let id = Endomorphism::identity(self.group());
        Ok(id.add(self.alpha()?)?.kernel())
    }
}

/// Exact joint law of `(L1, L2)`, enumerated over the two supports.
pub fn joint_of_forms(inst: &FormsInstance) -> JointDistribution {
    let g = inst.group();
    let mut joint = JointDistribution::empty(g);
    for (x1, p1) in inst.mu1.masses() {
        let (a1, b1) = (inst.alpha1.apply_idx(x1), inst.beta1.apply_idx(x1));
        for (x2, p2) in inst.mu2.masses() {
            let s = g.add_idx(a1, inst.alpha2.apply_idx(x2));
            let t = g.add_idx(b1, inst.beta2.apply_idx(x2));
            joint.add_mass(s, t, p1 * p2);
        }
    }
    joint
}

/// Whether the conditional law of `L2` given `L1` is symmetric, i.e.
/// `P(L1 = s, L2 = t) = P(L1 = s, L2 = -t)` for all `s, t`.
pub fn is_conditionally_symmetric(inst: &FormsInstance) -> bool {
    symmetry_witness(inst).is_none()
}

/// First `(s, t)` in lexicographic order where the symmetry identity fails.
pub fn symmetry_witness(inst: &FormsInstance) -> Option<(GroupElement, GroupElement)> {
    let g = inst.group();
    joint_of_forms(inst)
        .first_asymmetry()
        .map(|(s, t)| (g.element_at(s), g.element_at(t)))
}

/// Largest violation of
/// `mu1^(u + v) mu2^(u + a~ v) = mu1^(u - v) mu2^(u - a~ v)` over all `u, v`,
/// together with the first pair attaining it.
pub fn heyde_equation_residual(inst: &FormsInstance) -> Result<(f64, Option<(usize, usize)>)> {
    let adj = inst.alpha()?.adjoint();
    let g = inst.group();
    let f1 = inst.mu1.char_function();
    let f2 = inst.mu2.char_function();
    let n = g.order() as usize;
    let mut worst = (0.0f64, None);
    for u in 0..n {
        for v in 0..n {
            let av = adj.apply_idx(v);
            let lhs = f1.at(g.add_idx(u, v)) * f2.at(g.add_idx(u, av));
            let rhs = f1.at(g.sub_idx(u, v)) * f2.at(g.sub_idx(u, av));
            let r = (lhs - rhs).norm();
            if r > worst.0 {
                worst = (r, Some((u, v)));
            }
        }
    }
    Ok(worst)
}

/// The characteristic-function form of conditional symmetry, checked at `tol`.
pub fn heyde_equation_check(inst: &FormsInstance, tol: f64) -> Result<bool> {
    Ok(heyde_equation_residual(inst)?.0 <= tol)
}

/// `M1 = (I + a) xi1 + 2a xi2` and `M2 = 2 xi1 + (I + a) xi2`, returned as an
/// instance whose `L1`/`L2` slots hold `M1`/`M2`.
pub fn derived_forms(inst: &FormsInstance) -> Result<FormsInstance> {
    let alpha = inst.alpha()?;
    let g = inst.group();
    let id = Endomorphism::identity(g);
    let i_plus_a = id.add(alpha)?;
    let two_a = alpha.scaled(2);
    let two = Endomorphism::scalar(g, 2);
    FormsInstance::new(i_plus_a.clone(), two_a, two, i_plus_a, inst.mu1.clone(), inst.mu2.clone())
}

/// Exact independence of `L1` and `L2`: the joint law equals the product of
/// its marginals.
pub fn are_forms_independent(inst: &FormsInstance) -> bool {
    joint_of_forms(inst).factorizes()
}

/// Largest violation of
/// `mu1^(a1~u + b1~v) mu2^(a2~u + b2~v) = mu1^(a1~u) mu2^(a2~u) mu1^(b1~v) mu2^(b2~v)`.
pub fn independence_equation_residual(inst: &FormsInstance) -> f64 {
    let g = inst.group();
    let (a1, a2) = (inst.alpha1.adjoint(), inst.alpha2.adjoint());
    let (b1, b2) = (inst.beta1.adjoint(), inst.beta2.adjoint());
    let f1 = inst.mu1.char_function();
    let f2 = inst.mu2.char_function();
    let n = g.order() as usize;
    let mut worst = 0.0f64;
    for u in 0..n {
        let (a1u, a2u) = (a1.apply_idx(u), a2.apply_idx(u));
        let left_u = f1.at(a1u) * f2.at(a2u);
        for v in 0..n {
            let (b1v, b2v) = (b1.apply_idx(v), b2.apply_idx(v));
            let lhs = f1.at(g.add_idx(a1u, b1v)) * f2.at(g.add_idx(a2u, b2v));
            let rhs = left_u * f1.at(b1v) * f2.at(b2v);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

pub fn independence_equation_check(inst: &FormsInstance, tol: f64) -> bool {
    independence_equation_residual(inst) <= tol
}

/// For `alpha = -I` on a group of odd order, symmetry pins `mu1 = mu2`.
///
/// Fails with a precondition error unless the group has odd order, the
/// instance is canonical with `alpha = -I`, and it is symmetric.
pub fn symmetry_forces_equal(inst: &FormsInstance) -> Result<bool> {
    let g = inst.group();
    if !g.is_odd_order() {
        return Err(Error::Precondition("group must have odd order".into()));
    }
    if inst.alpha()? != &Endomorphism::negation(g) {
        return Err(Error::Precondition("alpha must be -I".into()));
    }
    if !is_conditionally_symmetric(inst) {
        return Err(Error::Precondition("instance must be conditionally symmetric".into()));
    }
    Ok(inst.mu1 == inst.mu2)
}

/// Result of reducing general forms to `L1 = eta1 + eta2`, `L2 = eta1 + a' eta2`.
#[derive(Clone, Debug)]
pub struct Canonicalized {
    pub instance: FormsInstance,
    /// `a' = a1 b1^-1 b2 a2^-1`.
    pub alpha_prime: Endomorphism,
    /// `Ker(I + a')`.
    pub kernel: Subgroup,
}

/// Substitutes `eta_j = a_j xi_j` and applies `a1 b1^-1` to `L2`.
///
/// Requires `alpha1`, `alpha2` and `beta1` to be automorphisms.
pub fn canonicalize(inst: &FormsInstance) -> Result<Canonicalized> {
    if !inst.alpha1.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let a2_inv = inst.alpha2.invert()?;
    let b1_inv = inst.beta1.invert()?;
    let alpha_prime = inst
        .alpha1
        .compose(&b1_inv)?
        .compose(&inst.beta2)?
        .compose(&a2_inv)?;
    let eta1 = inst.mu1.push_forward(&inst.alpha1)?;
    let eta2 = inst.mu2.push_forward(&inst.alpha2)?;
    let kernel = Endomorphism::identity(inst.group()).add(&alpha_prime)?.kernel();
    let instance = FormsInstance::canonical(alpha_prime.clone(), eta1, eta2)?;
    Ok(Canonicalized {
        instance,
        alpha_prime,
        kernel,
    })
}

/// Default tolerance re-exported for callers of the Fourier-side checks.
pub const DEFAULT_TOL: f64 = CHAR_TOL;
