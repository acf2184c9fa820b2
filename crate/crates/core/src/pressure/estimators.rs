//! Finite-`n` estimators: `(1/n) ln` of the block sums over the window
//! `y_0 ... y_{n-1}`.

use super::fiber::dn_log_weight;
use super::transfer::{WeightMode, WeightedPaths};
use crate::error::{Error, Result};
use crate::potential::LocallyConstantPotential;
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Sym};

/// `ln S(v)`: the log of the sum of block weights over `π^{-1}(v)`;
/// `-inf` when `v` has no preimage block.
pub fn log_s(code: &FactorCode, pot: &LocallyConstantPotential, v: &[Sym], mode: WeightMode) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    code.check_image_word(v)?;
    let wp = WeightedPaths::new(code.domain(), pot, mode)?;
    Ok(wp.log_sum(v.len(), |j| code.fiber(v[j])))
}

/// `ln S(v_0 ... v_j)` for every prefix.
pub fn log_s_profile(code: &FactorCode, pot: &LocallyConstantPotential, v: &[Sym], mode: WeightMode) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    code.check_image_word(v)?;
    let wp = WeightedPaths::new(code.domain(), pot, mode)?;
    Ok(wp.log_sum_profile(v.len(), |j| code.fiber(v[j])))
}

/// The estimators exposed by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `Φ_n`, pair weights.
    Phi,
    /// `Ψ_n`, cylinder infima.
    Psi,
    /// `Ψ̃_n`, cylinder suprema.
    PsiTilde,
    /// `θ_n = 𝒯_n`, sums over `D_n(y)` with cylinder infima.
    Theta,
    /// `θ̃_n`, sums over `D_n(y)` with cylinder suprema.
    ThetaTilde,
    /// One canonical point per preimage cylinder.
    Corollary,
}

impl Estimator {
    fn word_mode(self) -> Option<WeightMode> {
        match self {
            Estimator::Phi => Some(WeightMode::Phi),
            Estimator::Psi => Some(WeightMode::Inf),
            Estimator::PsiTilde => Some(WeightMode::Sup),
            Estimator::Corollary => Some(WeightMode::Canonical),
            Estimator::Theta | Estimator::ThetaTilde => None,
        }
    }

    /// Whether the estimator needs a bi-infinite point rather than a word.
    pub fn needs_point(self) -> bool {
        self.word_mode().is_none()
    }
}

/// The estimator on a finite image word `v` (length `n`).
pub fn estimate_word(code: &FactorCode, pot: &LocallyConstantPotential, v: &[Sym], est: Estimator) -> Result<f64> {
    let mode = est
        .word_mode()
        .ok_or_else(|| Error::InvalidArgument("this estimator needs an eventually periodic point".into()))?;
    Ok(log_s(code, pot, v, mode)? / v.len() as f64)
}

/// The estimator on `y_0 ... y_{n-1}` of an eventually periodic point.
pub fn estimate_point(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    n: usize,
    est: Estimator,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    match est {
        Estimator::Theta => Ok(dn_log_weight(code, pot, y, n, WeightMode::Inf)? / n as f64),
        Estimator::ThetaTilde => Ok(dn_log_weight(code, pot, y, n, WeightMode::Sup)? / n as f64),
        _ => estimate_word(code, pot, y.window(0, n as i64 - 1).symbols(), est),
    }
}

pub fn estimator_phi(code: &FactorCode, pot: &LocallyConstantPotential, y: &EventuallyPeriodicPoint, n: usize) -> Result<f64> {
    estimate_point(code, pot, y, n, Estimator::Phi)
}

pub fn estimator_psi(code: &FactorCode, pot: &LocallyConstantPotential, y: &EventuallyPeriodicPoint, n: usize) -> Result<f64> {
    estimate_point(code, pot, y, n, Estimator::Psi)
}

pub fn estimator_psi_tilde(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    n: usize,
) -> Result<f64> {
    estimate_point(code, pot, y, n, Estimator::PsiTilde)
}

/// `𝒯_n(y)`, the finite-`n` relative pressure over `D_n(y)`.
pub fn estimator_t(code: &FactorCode, pot: &LocallyConstantPotential, y: &EventuallyPeriodicPoint, n: usize) -> Result<f64> {
    estimate_point(code, pot, y, n, Estimator::Theta)
}

pub fn corollary_estimator(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    n: usize,
) -> Result<f64> {
    estimate_point(code, pot, y, n, Estimator::Corollary)
}
