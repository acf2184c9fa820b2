//! Exact path counting with arbitrary-precision integers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Result;
use crate::symbolic::{FactorCode, Sft, Sym};

/// Number of paths `a_0 ... a_{len-1}` in `sft` with `a_j in allowed(j)`.
pub fn count_paths<'s>(sft: &Sft, len: usize, allowed: impl Fn(usize) -> &'s [Sym]) -> BigUint {
    run(sft, len, allowed, false).0
}

/// Counts for every prefix length `1 ..= len`.
pub fn count_paths_profile<'s>(sft: &Sft, len: usize, allowed: impl Fn(usize) -> &'s [Sym]) -> Vec<BigUint> {
    run(sft, len, allowed, true).1
}

/// Counts at the given prefix lengths (each in `1 ..= len`), in one pass.
pub fn count_paths_at<'s>(
    sft: &Sft,
    len: usize,
    allowed: impl Fn(usize) -> &'s [Sym],
    lengths: &[usize],
) -> Vec<BigUint> {
    let mut want = vec![false; len + 1];
    for &l in lengths {
        assert!(l >= 1 && l <= len, "prefix length {l} outside 1..={len}");
        want[l] = true;
    }
    let mut found = BTreeMap::new();
    walk(sft, len, allowed, |j, total| {
        if want[j + 1] {
            found.insert(j + 1, total());
        }
    });
    lengths.iter().map(|l| found[l].clone()).collect()
}

fn run<'s>(sft: &Sft, len: usize, allowed: impl Fn(usize) -> &'s [Sym], profile: bool) -> (BigUint, Vec<BigUint>) {
    let mut out = Vec::new();
    let mut last = BigUint::zero();
    walk(sft, len, allowed, |j, total| {
        if profile || j + 1 == len {
            let t = total();
            if j + 1 == len {
                last = t.clone();
            }
            if profile {
                out.push(t);
            }
        }
    });
    (last, out)
}

/// Runs the counting recursion, handing each step's total (computed on
/// demand) to `visit`.
fn walk<'s>(sft: &Sft, len: usize, allowed: impl Fn(usize) -> &'s [Sym], mut visit: impl FnMut(usize, &dyn Fn() -> BigUint)) {
    let n = sft.len();
    if len == 0 {
        return;
    }
    let mut cur = vec![BigUint::zero(); n];
    for &a in allowed(0) {
        cur[a as usize] = BigUint::from(1u8);
    }
    let total = |v: &[BigUint]| v.iter().fold(BigUint::zero(), |acc, x| acc + x);
    visit(0, &|| total(&cur));
    for j in 1..len {
        let mut next = vec![BigUint::zero(); n];
        for &b in allowed(j) {
            let mut acc = BigUint::zero();
            for &a in sft.predecessors(b) {
                if !cur[a as usize].is_zero() {
                    acc += &cur[a as usize];
                }
            }
            next[b as usize] = acc;
        }
        cur = next;
        visit(j, &|| total(&cur));
    }
}

/// `|pi^{-1}(v)|`, the number of X-blocks projecting onto `v`.
pub fn count_preimage_blocks_exact(code: &FactorCode, v: &[Sym]) -> Result<BigUint> {
    code.check_image_word(v)?;
    Ok(count_paths(code.domain(), v.len(), |j| code.fiber(v[j])))
}
