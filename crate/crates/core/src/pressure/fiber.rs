//! Extendability sets along an eventually periodic image point and the
//! `D_n(y)` sums built on them.
//!
//! `L_i` holds the X-symbols over `y_i` reachable by a left-infinite preimage
//! path, `R_i` those starting a right-infinite one. A path `a_0 ... a_{n-1}`
//! over `y_0 ... y_{n-1}` is the window of a genuine preimage point exactly
//! when `a_0 in L_0` and `a_{n-1} in R_{n-1}`, and then every `a_i` lies in
//! `E_i = L_i ∩ R_i`. Summing over paths inside the `E_i` therefore gives
//! the `D_n(y)` sums for every prefix length at once.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::count::{count_paths, count_paths_profile};
use super::transfer::{WeightMode, WeightedPaths};
use crate::error::{Error, Result};
use crate::potential::LocallyConstantPotential;
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Sft, Sym};

#[derive(Debug, Default)]
struct Interner {
    ids: BTreeMap<Vec<Sym>, u32>,
    sets: Vec<Vec<Sym>>,
}

impl Interner {
    fn intern(&mut self, set: Vec<Sym>) -> u32 {
        if let Some(&id) = self.ids.get(&set) {
            return id;
        }
        let id = self.sets.len() as u32;
        self.sets.push(set.clone());
        self.ids.insert(set, id);
        id
    }
}

/// `L_i`, `R_i` and `E_i` for the positions `start .. start + len` of a point.
#[derive(Debug, Clone)]
pub struct FiberSets {
    start: i64,
    sets: Vec<Vec<Sym>>,
    left: Vec<u32>,
    right: Vec<u32>,
    both: Vec<u32>,
}

fn step_back(sft: &Sft, code: &FactorCode, next: &[Sym], c: Sym) -> Vec<Sym> {
    let mut mark = vec![false; sft.len()];
    for &b in next {
        mark[b as usize] = true;
    }
    code.fiber(c)
        .iter()
        .copied()
        .filter(|&a| sft.successors(a).iter().any(|&b| mark[b as usize]))
        .collect()
}

fn step_forward(sft: &Sft, code: &FactorCode, prev: &[Sym], c: Sym) -> Vec<Sym> {
    let mut mark = vec![false; sft.len()];
    for &a in prev {
        mark[a as usize] = true;
    }
    code.fiber(c)
        .iter()
        .copied()
        .filter(|&b| sft.predecessors(b).iter().any(|&a| mark[a as usize]))
        .collect()
}

fn intersect(a: &[Sym], b: &[Sym]) -> Vec<Sym> {
    a.iter().copied().filter(|s| b.contains(s)).collect()
}

impl FiberSets {
    pub fn new(code: &FactorCode, y: &EventuallyPeriodicPoint, start: i64, len: usize) -> Result<Self> {
        let sft = code.domain();
        let end = start + len as i64;
        let anchor = y.anchor();
        let rs = y.right_start();

        // Right tail: greatest fixed point of the backward step over one period.
        let rt = y.right_tail();
        let r = rt.len();
        let mut tail_r: Vec<Vec<Sym>> = rt.iter().map(|&c| code.fiber(c).to_vec()).collect();
        loop {
            let mut changed = false;
            for t in (0..r).rev() {
                let next = step_back(sft, code, &tail_r[(t + 1) % r], rt[t]);
                if next.len() != tail_r[t].len() {
                    tail_r[t] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(t) = tail_r.iter().position(Vec::is_empty) {
            return Err(Error::NoPreimage { position: rs + t as i64 });
        }

        // Left tail: greatest fixed point of the forward step; index `idx`
        // of the tail sits at positions `anchor - p + idx - k p`.
        let lt = y.left_tail();
        let p = lt.len();
        let mut tail_l: Vec<Vec<Sym>> = lt.iter().map(|&c| code.fiber(c).to_vec()).collect();
        loop {
            let mut changed = false;
            for idx in 0..p {
                let next = step_forward(sft, code, &tail_l[(idx + p - 1) % p], lt[idx]);
                if next.len() != tail_l[idx].len() {
                    tail_l[idx] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(idx) = tail_l.iter().position(Vec::is_empty) {
            return Err(Error::NoPreimage {
                position: anchor - p as i64 + idx as i64,
            });
        }

        let mut interner = Interner::default();
        let left_phase = |i: i64| p - 1 - ((anchor - 1 - i) as usize % p);

        // R over [start, end), propagating back from the right tail if needed.
        let mut right = vec![0u32; len];
        let mut cur: Vec<Sym> = tail_r[0].clone();
        for i in (start..end.max(rs)).rev() {
            cur = if i >= rs {
                tail_r[(i - rs) as usize % r].clone()
            } else {
                step_back(sft, code, &cur, y.symbol_at(i))
            };
            if cur.is_empty() {
                return Err(Error::NoPreimage { position: i });
            }
            if i < end {
                right[(i - start) as usize] = interner.intern(cur.clone());
            }
        }

        // L over [start, end), propagating forward from the left tail.
        let mut left = vec![0u32; len];
        let mut cur: Vec<Sym> = tail_l[p - 1].clone();
        for i in start.min(anchor)..end {
            cur = if i < anchor {
                tail_l[left_phase(i)].clone()
            } else {
                step_forward(sft, code, &cur, y.symbol_at(i))
            };
            if cur.is_empty() {
                return Err(Error::NoPreimage { position: i });
            }
            if i >= start {
                left[(i - start) as usize] = interner.intern(cur.clone());
            }
        }

        let mut both = vec![0u32; len];
        let mut pair_ids: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for k in 0..len {
            let key = (left[k], right[k]);
            let id = match pair_ids.get(&key) {
                Some(&id) => id,
                None => {
                    let set = intersect(&interner.sets[key.0 as usize], &interner.sets[key.1 as usize]);
                    if set.is_empty() {
                        return Err(Error::NoPreimage {
                            position: start + k as i64,
                        });
                    }
                    let id = interner.intern(set);
                    pair_ids.insert(key, id);
                    id
                }
            };
            both[k] = id;
        }
        Ok(FiberSets {
            start,
            sets: interner.sets,
            left,
            right,
            both,
        })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.both.len()
    }

    pub fn is_empty(&self) -> bool {
        self.both.is_empty()
    }

    fn index(&self, i: i64) -> usize {
        let k = i - self.start;
        assert!(k >= 0 && (k as usize) < self.len(), "position {i} outside computed range");
        k as usize
    }

    pub fn left(&self, i: i64) -> &[Sym] {
        &self.sets[self.left[self.index(i)] as usize]
    }

    pub fn right(&self, i: i64) -> &[Sym] {
        &self.sets[self.right[self.index(i)] as usize]
    }

    /// `E_i = L_i ∩ R_i`.
    pub fn extendable(&self, i: i64) -> &[Sym] {
        &self.sets[self.both[self.index(i)] as usize]
    }

    fn by_offset(&self, k: usize) -> &[Sym] {
        &self.sets[self.both[k] as usize]
    }
}

/// `|D_n(y)|`: the number of distinct windows `x_0 ... x_{n-1}` of
/// preimage points of `y`.
pub fn dn_count(code: &FactorCode, y: &EventuallyPeriodicPoint, n: usize) -> Result<BigUint> {
    let fs = FiberSets::new(code, y, 0, n)?;
    Ok(count_paths(code.domain(), n, |k| fs.by_offset(k)))
}

/// `|D_m(y)|` for `m = 1 ..= n`.
pub fn dn_count_profile(code: &FactorCode, y: &EventuallyPeriodicPoint, n: usize) -> Result<Vec<BigUint>> {
    let fs = FiberSets::new(code, y, 0, n)?;
    Ok(count_paths_profile(code.domain(), n, |k| fs.by_offset(k)))
}

/// `ln sum_{x in D_n(y)} s(x_0 ... x_{n-1})` with the weight of `mode`.
pub fn dn_log_weight(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    n: usize,
    mode: WeightMode,
) -> Result<f64> {
    let fs = FiberSets::new(code, y, 0, n)?;
    let wp = WeightedPaths::new(code.domain(), pot, mode)?;
    Ok(wp.log_sum(n, |k| fs.by_offset(k)))
}

/// The `D_m(y)` log sums for `m = 1 ..= n`.
pub fn dn_log_weight_profile(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    n: usize,
    mode: WeightMode,
) -> Result<Vec<f64>> {
    let fs = FiberSets::new(code, y, 0, n)?;
    let wp = WeightedPaths::new(code.domain(), pot, mode)?;
    Ok(wp.log_sum_profile(n, |k| fs.by_offset(k)))
}

/// `|D_n^(K)|` from finite data: the number of blocks over `y_0 ... y_{n-1}`
/// that extend to preimages of `y_{-K} ... y_{n-1+K}`. The argument is that
/// window (length `n + 2K`). Nonincreasing in `K` and equal to `|D_n(y)|`
/// once `K` is large enough.
pub fn dn_widened_count(code: &FactorCode, window: &[Sym], n: usize, k: usize) -> Result<BigUint> {
    if window.len() != n + 2 * k {
        return Err(Error::InvalidArgument(format!(
            "widened window has length {}, expected {}",
            window.len(),
            n + 2 * k
        )));
    }
    code.check_image_word(window)?;
    let sft = code.domain();
    let mut l = code.fiber(window[0]).to_vec();
    for &c in &window[1..=k] {
        l = step_forward(sft, code, &l, c);
    }
    let last = window.len() - 1;
    let mut r = code.fiber(window[last]).to_vec();
    for &c in window[k + n - 1..last].iter().rev() {
        r = step_back(sft, code, &r, c);
    }
    let fibers: Vec<Vec<Sym>> = (0..n)
        .map(|j| {
            let mut f = code.fiber(window[k + j]).to_vec();
            if j == 0 {
                f = intersect(&f, &l);
            }
            if j == n - 1 {
                f = intersect(&f, &r);
            }
            f
        })
        .collect();
    Ok(count_paths(sft, n, |j| &fibers[j]))
}

/// Smallest `K <= k_max` from which `|D_n^(K)|` stays constant up to `k_max`,
/// with that count.
pub fn dn_widened_stabilization(
    code: &FactorCode,
    y: &EventuallyPeriodicPoint,
    n: usize,
    k_max: usize,
) -> Result<(usize, BigUint)> {
    let counts: Vec<BigUint> = (0..=k_max)
        .map(|k| dn_widened_count(code, y.window(-(k as i64), (n + k) as i64 - 1).symbols(), n, k))
        .collect::<Result<_>>()?;
    let last = counts[k_max].clone();
    let k_star = (0..=k_max).rev().take_while(|&k| counts[k] == last).last().unwrap_or(k_max);
    Ok((k_star, last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;
    use std::collections::HashMap;

    fn collapse(x: Sft) -> FactorCode {
        let names = x.alphabet().names().to_vec();
        let map: HashMap<String, String> = names.iter().map(|s| (s.clone(), "*".to_string())).collect();
        FactorCode::new(x, &map, &names).unwrap()
    }

    #[test]
    fn identity_sets_are_singletons() {
        let g = Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap();
        let code = FactorCode::identity(g);
        let y = EventuallyPeriodicPoint::new(vec![0], vec![0, 1, 0], vec![0, 1], 0).unwrap();
        let fs = FiberSets::new(&code, &y, -3, 10).unwrap();
        for i in -3..7 {
            assert_eq!(fs.extendable(i), &[y.symbol_at(i)]);
        }
        for n in 1..12 {
            assert_eq!(dn_count(&code, &y, n).unwrap(), BigUint::from(1u8));
        }
    }

    #[test]
    fn collapse_sets_are_everything() {
        let x = Sft::full(Alphabet::new(["a", "b", "c"]).unwrap());
        let code = collapse(x);
        let y = EventuallyPeriodicPoint::periodic(vec![0]).unwrap();
        let fs = FiberSets::new(&code, &y, 0, 4).unwrap();
        assert_eq!(fs.left(2), &[0, 1, 2]);
        assert_eq!(fs.right(3), &[0, 1, 2]);
        assert_eq!(dn_count(&code, &y, 4).unwrap(), BigUint::from(81u8));
    }

    #[test]
    fn dead_ends_are_excluded() {
        let x = Sft::new(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("d", "d"), ("d", "a")],
        )
        .unwrap();
        let code = FactorCode::from_pairs(x, &[("a", "0"), ("b", "1"), ("c", "1"), ("d", "1")]).unwrap();
        // y = ...0 1 1 0 1 1... : each `1 1` lifts to `b c` or `d d`, while
        // `b` alone cannot be followed by `d`.
        let y = EventuallyPeriodicPoint::periodic(vec![0, 1, 1]).unwrap();
        assert_eq!(dn_count(&code, &y, 4).unwrap(), BigUint::from(2u8));
        assert_eq!(dn_count(&code, &y, 7).unwrap(), BigUint::from(4u8));
        // a single position over `0` lifts only to `a`
        assert_eq!(dn_count(&code, &y, 1).unwrap(), BigUint::from(1u8));
        let (k, c) = dn_widened_stabilization(&code, &y, 4, 6).unwrap();
        assert_eq!(c, BigUint::from(2u8));
        assert!(k <= 6);
    }

    #[test]
    fn no_preimage_is_reported() {
        let x = Sft::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        let code = FactorCode::from_pairs(x, &[("a", "0"), ("b", "1")]).unwrap();
        let y = EventuallyPeriodicPoint::periodic(vec![0]).unwrap();
        assert!(matches!(FiberSets::new(&code, &y, 0, 3), Err(Error::NoPreimage { .. })));
    }
}
