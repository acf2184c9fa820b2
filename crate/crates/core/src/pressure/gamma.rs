//! Pinned-end sums `Γ^n_y(b, c)`.

use super::transfer::{WeightMode, WeightedPaths};
use crate::error::{Error, Result};
use crate::potential::LocallyConstantPotential;
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Sym};

/// `ln Γ^n_y(b, c)`: the log of the sum of `s(b u c)` over the X-blocks
/// `b u c` projecting onto `y_0 ... y_n` (length `n + 1`). `-inf` when there
/// is none, in particular when `π(b) != y_0` or `π(c) != y_n`.
pub fn gamma(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    b: Sym,
    c: Sym,
    n: usize,
) -> Result<f64> {
    let window = y.window(0, n as i64);
    gamma_word(code, pot, window.symbols(), b, c)
}

/// [`gamma`] for an explicit image word `y_0 ... y_n`.
pub fn gamma_word(code: &FactorCode, pot: &LocallyConstantPotential, word: &[Sym], b: Sym, c: Sym) -> Result<f64> {
    if word.len() < 2 {
        return Err(Error::InvalidArgument("Γ needs n >= 1".into()));
    }
    let nx = code.domain().len() as Sym;
    if b >= nx || c >= nx {
        return Err(Error::InvalidArgument(format!("symbol index out of range: {b}, {c}")));
    }
    code.check_image_word(word)?;
    let wp = WeightedPaths::new(code.domain(), pot, WeightMode::Phi)?;
    let last = word.len() - 1;
    let (bs, cs) = ([b], [c]);
    let empty: [Sym; 0] = [];
    let first_ok = code.apply(b) == word[0];
    let last_ok = code.apply(c) == word[last];
    Ok(wp.log_sum(word.len(), |j| {
        if j == 0 {
            if first_ok {
                &bs[..]
            } else {
                &empty[..]
            }
        } else if j == last {
            if last_ok {
                &cs[..]
            } else {
                &empty[..]
            }
        } else {
            code.fiber(word[j])
        }
    }))
}
