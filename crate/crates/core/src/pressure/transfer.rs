//! Weighted path sums over constrained symbol sequences.
//!
//! Every pressure quantity sums block weights over the X-paths `a_0 ... a_{n-1}`
//! whose symbols lie in prescribed per-position sets (a fiber of the image
//! word, possibly intersected with extendability sets or pinned ends). The
//! engines here evaluate such sums left to right in log scale.

use std::collections::BTreeMap;

use super::logspace::{log_add, log_sum_exp};
use crate::error::Result;
use crate::potential::{BoundaryEval, LocallyConstantPotential, PairWeight};
use crate::symbolic::{Sft, Sym};

/// Which block weight is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightMode {
    /// `s(B) = F(b_1 b_2) ... F(b_{n-1} b_n)`; needs a 2-coordinate potential.
    Phi,
    /// Product of cylinder infima `F_n^i(B)`.
    Inf,
    /// Product of cylinder suprema.
    Sup,
    /// `exp` of the Birkhoff sum at the least-symbol completion of `B`.
    Canonical,
}

/// Per-symbol program: a path `a_0 ... a_{n-1}` has log weight
/// `init(a_0) + sum trans(a_j, a_{j+1}) + close(a_{n-1})`.
#[derive(Debug, Clone)]
struct PairProgram {
    init: Vec<f64>,
    trans: Vec<f64>,
    close: Vec<f64>,
}

impl PairProgram {
    fn new(n: usize, init: Vec<f64>, trans: &PairWeight, close: Vec<f64>) -> Self {
        let trans = (0..n * n)
            .map(|i| trans.log_weight((i / n) as Sym, (i % n) as Sym))
            .collect();
        PairProgram { init, trans, close }
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Pair(PairProgram),
    Window {
        pot: LocallyConstantPotential,
        mode: WeightMode,
    },
}

/// A weighted path-sum evaluator for a fixed SFT, potential and mode.
#[derive(Debug, Clone)]
pub struct WeightedPaths<'a> {
    sft: &'a Sft,
    engine: Engine,
}

impl<'a> WeightedPaths<'a> {
    pub fn new(sft: &'a Sft, pot: &LocallyConstantPotential, mode: WeightMode) -> Result<Self> {
        let n = sft.len();
        let reduced = pot.reduce_window();
        let (lo, hi) = reduced.window();
        let engine = match mode {
            WeightMode::Phi => {
                let pw = reduced.pair_weight(sft)?;
                Engine::Pair(PairProgram::new(n, vec![0.0; n], &pw, vec![0.0; n]))
            }
            _ if lo == 0 && hi == 1 => {
                let pw = reduced.pair_weight(sft)?;
                let mut eval = BoundaryEval::new(&reduced, sft);
                let close = (0..n as Sym).map(|a| pick(eval.eval(&[a], 0, 1), mode)).collect();
                Engine::Pair(PairProgram::new(n, vec![0.0; n], &pw, close))
            }
            _ if lo == 0 && hi == 0 => {
                let init: Vec<f64> = (0..n as Sym).map(|a| reduced.value(&[a]).unwrap()).collect();
                let mut log = vec![f64::NEG_INFINITY; n * n];
                for (a, b) in sft.edges() {
                    log[a as usize * n + b as usize] = init[b as usize];
                }
                let pw = PairWeight::from_log(n, log);
                Engine::Pair(PairProgram::new(n, init, &pw, vec![0.0; n]))
            }
            _ => Engine::Window { pot: reduced, mode },
        };
        Ok(WeightedPaths { sft, engine })
    }

    /// The counting evaluator (every weight 1).
    pub fn counting(sft: &'a Sft) -> Self {
        let n = sft.len();
        WeightedPaths {
            sft,
            engine: Engine::Pair(PairProgram::new(n, vec![0.0; n], &PairWeight::counting(sft), vec![0.0; n])),
        }
    }

    /// `ln` of the weighted sum over paths of length `len` with
    /// `a_j in allowed(j)`; `-inf` when there is none.
    pub fn log_sum<'s>(&self, len: usize, allowed: impl Fn(usize) -> &'s [Sym]) -> f64 {
        self.run(len, allowed, false).0
    }

    /// The sums for every prefix length `1 ..= len` (entry `j` is length
    /// `j + 1`), computed in one pass. Boundary factors are those of each
    /// prefix taken as a block on its own.
    pub fn log_sum_profile<'s>(&self, len: usize, allowed: impl Fn(usize) -> &'s [Sym]) -> Vec<f64> {
        self.run(len, allowed, true).1
    }

    fn run<'s>(&self, len: usize, allowed: impl Fn(usize) -> &'s [Sym], profile: bool) -> (f64, Vec<f64>) {
        if len == 0 {
            return (f64::NEG_INFINITY, Vec::new());
        }
        match &self.engine {
            Engine::Pair(p) => run_pair(self.sft, p, len, allowed, profile),
            Engine::Window { pot, mode } => run_window(self.sft, pot, *mode, len, allowed, profile),
        }
    }
}

fn pick(v: (f64, f64, f64), mode: WeightMode) -> f64 {
    match mode {
        WeightMode::Inf => v.0,
        WeightMode::Sup => v.1,
        _ => v.2,
    }
}

fn run_pair<'s>(
    sft: &Sft,
    p: &PairProgram,
    len: usize,
    allowed: impl Fn(usize) -> &'s [Sym],
    profile: bool,
) -> (f64, Vec<f64>) {
    // Per-state logarithms: a shared linear scale would flush states that
    // are astronomically lighter than a branch about to die out.
    let n = sft.len();
    let ninf = f64::NEG_INFINITY;
    let closed = |cur: &[f64]| log_sum_exp(cur.iter().zip(&p.close).map(|(a, b)| a + b));
    let mut out = Vec::with_capacity(if profile { len } else { 0 });
    let mut cur = vec![ninf; n];
    for &a in allowed(0) {
        cur[a as usize] = p.init[a as usize];
    }
    if profile {
        out.push(closed(&cur));
    }
    let mut next = vec![ninf; n];
    let mut terms = Vec::with_capacity(n);
    for j in 1..len {
        next.iter_mut().for_each(|v| *v = ninf);
        let mut alive = false;
        for &b in allowed(j) {
            terms.clear();
            for &a in sft.predecessors(b) {
                let t = cur[a as usize] + p.trans[a as usize * n + b as usize];
                if t > ninf {
                    terms.push(t);
                }
            }
            let v = match terms.len() {
                0 => ninf,
                1 => terms[0],
                _ => log_sum_exp(terms.iter().copied()),
            };
            alive |= v > ninf;
            next[b as usize] = v;
        }
        std::mem::swap(&mut cur, &mut next);
        if profile {
            out.push(closed(&cur));
        }
        if !alive {
            if profile {
                out.resize(len, ninf);
            }
            return (ninf, out);
        }
    }
    let total = if profile { out[len - 1] } else { closed(&cur) };
    (total, out)
}

fn run_window<'s>(
    sft: &Sft,
    pot: &LocallyConstantPotential,
    mode: WeightMode,
    len: usize,
    allowed: impl Fn(usize) -> &'s [Sym],
    profile: bool,
) -> (f64, Vec<f64>) {
    let (lo, hi) = pot.window();
    let w = pot.width();
    let keep = (w - 1).max(1);
    let mut eval = BoundaryEval::new(pot, sft);
    let mut out = Vec::new();

    // State: the last `keep` symbols (fewer near the start) and the log
    // weight of all finalized positions.
    let mut states: BTreeMap<Vec<Sym>, f64> = BTreeMap::new();
    for j in 0..len {
        let mut next: BTreeMap<Vec<Sym>, f64> = BTreeMap::new();
        let i = j as i64 - hi;
        let extend = |prefix: &[Sym], b: Sym, eval: &mut BoundaryEval, weight: f64, next: &mut BTreeMap<Vec<Sym>, f64>| {
            let mut full = prefix.to_vec();
            full.push(b);
            let mut wgt = weight;
            if i >= 0 {
                let start = (i + lo).max(0) as usize;
                let lm = (-(i + lo)).max(0) as usize;
                let seg = &full[full.len() - (j + 1 - start)..];
                wgt += pick(eval.eval(seg, lm, 0), mode);
            }
            let cut = full.len().saturating_sub(keep);
            let key = full[cut..].to_vec();
            let e = next.entry(key).or_insert(f64::NEG_INFINITY);
            *e = log_add(*e, wgt);
        };
        if j == 0 {
            for &b in allowed(0) {
                extend(&[], b, &mut eval, 0.0, &mut next);
            }
        } else {
            let set = allowed(j);
            for (s, &wgt) in &states {
                let last = s[s.len() - 1];
                for &b in set {
                    if sft.allows(last, b) {
                        extend(s, b, &mut eval, wgt, &mut next);
                    }
                }
            }
        }
        states = next;
        if profile || j + 1 == len {
            let total = log_sum_exp(states.iter().map(|(s, &wgt)| wgt + closing(&mut eval, mode, s, j, lo, hi)));
            out.push(total);
        }
        if states.is_empty() {
            if profile {
                out.resize(len, f64::NEG_INFINITY);
            }
            return (f64::NEG_INFINITY, out);
        }
    }
    (*out.last().unwrap(), out)
}

/// Log factors of the positions not yet finalized when the block ends at `j`.
fn closing(eval: &mut BoundaryEval, mode: WeightMode, state: &[Sym], j: usize, lo: i64, hi: i64) -> f64 {
    let j = j as i64;
    let mut total = 0.0;
    for i in (j + 1 - hi).max(0)..=j {
        let start = (i + lo).max(0);
        let lm = (-(i + lo)).max(0) as usize;
        let rm = (i + hi - j) as usize;
        let seg = &state[state.len() - (j - start + 1) as usize..];
        total += pick(eval.eval(seg, lm, rm), mode);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    fn golden() -> Sft {
        Sft::new(&["A", "B"], &[("A", "A"), ("A", "B"), ("B", "A")]).unwrap()
    }

    #[test]
    fn counting_golden_blocks() {
        let g = golden();
        let all = [0, 1];
        let prof = WeightedPaths::counting(&g).log_sum_profile(6, |_| &all[..]);
        let counts: Vec<f64> = prof.iter().map(|l| l.exp().round()).collect();
        assert_eq!(counts, vec![2.0, 3.0, 5.0, 8.0, 13.0, 21.0]);
    }

    #[test]
    fn window_engine_matches_direct_products() {
        let g = Sft::full(Alphabet::new(["0", "1", "2"]).unwrap());
        let f = LocallyConstantPotential::from_window_fn(&g, -1, 1, |w| {
            0.1 * w[0] as f64 + 0.37 * w[1] as f64 + 0.05 * (w[2] * w[0]) as f64
        })
        .unwrap();
        let all = [0, 1, 2];
        for (mode, ext) in [
            (WeightMode::Inf, Some(crate::potential::Extremum::Inf)),
            (WeightMode::Sup, Some(crate::potential::Extremum::Sup)),
            (WeightMode::Canonical, None),
        ] {
            let wp = WeightedPaths::new(&g, &f, mode).unwrap();
            for n in 1..=4 {
                let direct = log_sum_exp(g.blocks(n, 1000).unwrap().iter().map(|b| match ext {
                    Some(e) => f.log_s_extremum(&g, b, e).unwrap(),
                    None => f.log_s_canonical(&g, b).unwrap(),
                }));
                let dp = wp.log_sum(n, |_| &all[..]);
                assert!((dp - direct).abs() < 1e-12, "{mode:?} n={n}: {dp} vs {direct}");
            }
        }
    }

    #[test]
    fn empty_constraint_gives_neg_inf() {
        let g = golden();
        let b = [1];
        let wp = WeightedPaths::counting(&g);
        assert_eq!(wp.log_sum(2, |_| &b[..]), f64::NEG_INFINITY);
        let prof = wp.log_sum_profile(3, |_| &b[..]);
        assert_eq!(prof[0], 0.0);
        assert_eq!(prof[2], f64::NEG_INFINITY);
    }
}
