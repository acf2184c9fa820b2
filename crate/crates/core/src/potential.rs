//! Locally constant potentials and the block weights built from them.
//!
//! A potential is a table of reals indexed by the allowed words on a fixed
//! coordinate window `[lo, hi]` (with `lo <= 0 <= hi`): `f(x) =
//! table[x_lo ... x_hi]`. All weights are handled as natural logarithms.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::symbolic::{Recoding, Sft, Sym, DEFAULT_ENUMERATION_CAP};

/// Largest supported window radius `m` (window `[-m, m]`).
pub const MAX_WINDOW_RADIUS: usize = 4;

/// Which extremum of `exp f` over a cylinder a windowed weight takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Inf,
    Sup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential {
    lo: i64,
    hi: i64,
    values: HashMap<Vec<Sym>, f64>,
    shift: f64,
    min: f64,
    max: f64,
}

impl LocallyConstantPotential {
    /// `f` on window `[lo, hi]`, evaluated on every allowed window word.
    pub fn from_window_fn(sft: &Sft, lo: i64, hi: i64, mut f: impl FnMut(&[Sym]) -> f64) -> Result<Self> {
        if lo > 0 || hi < 0 {
            return Err(Error::InvalidArgument(format!("window [{lo}, {hi}] must contain 0")));
        }
        let radius = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        if radius > MAX_WINDOW_RADIUS {
            return Err(Error::WindowTooWide {
                radius,
                cap: MAX_WINDOW_RADIUS,
            });
        }
        let width = (hi - lo + 1) as usize;
        let mut values = HashMap::new();
        for w in sft.blocks(width, DEFAULT_ENUMERATION_CAP)? {
            let v = f(&w);
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(sft.alphabet().render(&w)));
            }
            values.insert(w.into_symbols(), v);
        }
        Ok(Self::from_values(lo, hi, values, 0.0))
    }

    /// Table over the allowed `(2m+1)`-words; must cover them exactly.
    pub fn from_radius_table(sft: &Sft, radius: usize, entries: Vec<(Vec<Sym>, f64)>) -> Result<Self> {
        let table: HashMap<Vec<Sym>, f64> = entries.into_iter().collect();
        let width = 2 * radius + 1;
        for (w, &v) in &table {
            if w.len() != width || !sft.is_allowed_word(w) {
                return Err(Error::ExtraWindow(sft.alphabet().render(w)));
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(sft.alphabet().render(w)));
            }
        }
        let mut missing = None;
        let pot = Self::from_window_fn(sft, -(radius as i64), radius as i64, |w| match table.get(w) {
            Some(&v) => v,
            None => {
                missing.get_or_insert_with(|| sft.alphabet().render(w));
                0.0
            }
        })?;
        match missing {
            Some(w) => Err(Error::MissingWindow(w)),
            None => Ok(pot),
        }
    }

    /// A potential depending on `x_0 x_1` only.
    pub fn pair(sft: &Sft, f: impl Fn(Sym, Sym) -> f64) -> Result<Self> {
        Self::from_window_fn(sft, 0, 1, |w| f(w[0], w[1]))
    }

    /// The zero potential.
    pub fn zero(sft: &Sft) -> Self {
        Self::from_window_fn(sft, 0, 0, |_| 0.0).expect("zero potential")
    }

    fn from_values(lo: i64, hi: i64, values: HashMap<Vec<Sym>, f64>, shift: f64) -> Self {
        let min = values.values().copied().fold(f64::INFINITY, f64::min);
        let max = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
        LocallyConstantPotential {
            lo,
            hi,
            values,
            shift,
            min,
            max,
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn value(&self, window: &[Sym]) -> Option<f64> {
        self.values.get(window).copied()
    }

    /// Table entries in lexicographic order.
    pub fn sorted_entries(&self) -> Vec<(&[Sym], f64)> {
        let mut v: Vec<_> = self.values.iter().map(|(k, &v)| (k.as_slice(), v)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// The constant `c` added by normalization.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn min_value(&self) -> f64 {
        self.min
    }

    pub fn max_value(&self) -> f64 {
        self.max
    }

    /// `ln M` for the bound `1 <= exp f <= M`; meaningful once normalized.
    pub fn log_bound(&self) -> f64 {
        self.max.max(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.min == 0.0 && self.max == 0.0
    }

    /// `f + c` with `c = -min f`, so the new minimum is exactly zero.
    pub fn normalize_nonneg(&self) -> Self {
        let c = -self.min;
        if c == 0.0 {
            return self.clone();
        }
        let values = self.values.iter().map(|(k, &v)| (k.clone(), v + c)).collect();
        let mut out = Self::from_values(self.lo, self.hi, values, self.shift + c);
        out.min = 0.0;
        out
    }

    /// Drops boundary coordinates the table does not depend on, shrinking
    /// the window towards `[0, 0]`.
    pub fn reduce_window(&self) -> Self {
        let mut cur = self.clone();
        loop {
            if cur.lo < 0 {
                if let Some(values) = drop_coordinate(&cur.values, true) {
                    cur = Self::from_values(cur.lo + 1, cur.hi, values, cur.shift);
                    continue;
                }
            }
            if cur.hi > 0 {
                if let Some(values) = drop_coordinate(&cur.values, false) {
                    cur = Self::from_values(cur.lo, cur.hi - 1, values, cur.shift);
                    continue;
                }
            }
            return cur;
        }
    }

    /// Whether `f` depends on `x_0 x_1` only.
    pub fn is_two_coordinate(&self) -> bool {
        let r = self.reduce_window();
        r.lo == 0 && r.hi <= 1
    }

    /// The pair map `F(b_0 b_1) = exp f` on `[b_0 b_1]`.
    pub fn pair_weight(&self, sft: &Sft) -> Result<PairWeight> {
        let r = self.reduce_window();
        if r.lo != 0 || r.hi > 1 {
            return Err(Error::NotTwoCoordinate { lo: r.lo, hi: r.hi });
        }
        let n = sft.len();
        let mut log = vec![f64::NEG_INFINITY; n * n];
        for (a, b) in sft.edges() {
            let key: &[Sym] = if r.hi == 1 { &[a, b] } else { &[a] };
            log[a as usize * n + b as usize] = r.values[key];
        }
        Ok(PairWeight::from_log(n, log))
    }

    /// The potential `f o sigma^{lo}` read on the `k`-block presentation,
    /// where it depends on the single coordinate `x^[k]_0`. Birkhoff sums of
    /// the two differ by a bounded boundary term and agree around cycles.
    pub fn recode(&self, recoding: &Recoding) -> Result<Self> {
        let w = self.width();
        if recoding.k() < w {
            return Err(Error::InvalidArgument(format!(
                "recoding window {} is narrower than the potential window {w}",
                recoding.k()
            )));
        }
        Self::from_window_fn(recoding.sft(), 0, 0, |u| self.values[&recoding.block(u[0])[..w]])
    }

    /// `ln F_n^i(B)` (or `ln ~F_n^i(B)`): the extremum of `f` over all points
    /// whose coordinates `-i .. n-1-i` read `B`.
    pub fn log_windowed_weight(&self, sft: &Sft, block: &[Sym], i: usize, ext: Extremum) -> Result<f64> {
        if i >= block.len() {
            return Err(Error::InvalidArgument(format!("position {i} outside block of length {}", block.len())));
        }
        sft.check_word(block)?;
        let mut eval = BoundaryEval::new(self, sft);
        let (seg, lm, rm) = self.clip(block, i);
        let (lo, hi, _) = eval.eval(seg, lm, rm);
        Ok(match ext {
            Extremum::Inf => lo,
            Extremum::Sup => hi,
        })
    }

    /// `ln s(B) = sum_i ln F_n^i(B)` for the chosen extremum.
    pub fn log_s_extremum(&self, sft: &Sft, block: &[Sym], ext: Extremum) -> Result<f64> {
        sft.check_word(block)?;
        if block.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut eval = BoundaryEval::new(self, sft);
        Ok((0..block.len())
            .map(|i| {
                let (seg, lm, rm) = self.clip(block, i);
                let (lo, hi, _) = eval.eval(seg, lm, rm);
                match ext {
                    Extremum::Inf => lo,
                    Extremum::Sup => hi,
                }
            })
            .sum())
    }

    /// `sum_{i<n} f(sigma^i x_B)` where `x_B` extends `B` by least
    /// predecessors to the left and least successors to the right.
    pub fn log_s_canonical(&self, sft: &Sft, block: &[Sym]) -> Result<f64> {
        sft.check_word(block)?;
        if block.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut eval = BoundaryEval::new(self, sft);
        Ok((0..block.len())
            .map(|i| {
                let (seg, lm, rm) = self.clip(block, i);
                eval.eval(seg, lm, rm).2
            })
            .sum())
    }

    /// The part of `B` inside the window of position `i`, and how many
    /// coordinates are missing on each side.
    fn clip<'b>(&self, block: &'b [Sym], i: usize) -> (&'b [Sym], usize, usize) {
        let n = block.len() as i64;
        let i = i as i64;
        let start = i + self.lo;
        let end = i + self.hi;
        let lm = (-start).max(0) as usize;
        let rm = (end - (n - 1)).max(0) as usize;
        (&block[start.max(0) as usize..=end.min(n - 1) as usize], lm, rm)
    }
}

fn drop_coordinate(values: &HashMap<Vec<Sym>, f64>, front: bool) -> Option<HashMap<Vec<Sym>, f64>> {
    let mut out: HashMap<Vec<Sym>, f64> = HashMap::new();
    for (k, &v) in values {
        if k.len() <= 1 {
            return None;
        }
        let rest = if front { k[1..].to_vec() } else { k[..k.len() - 1].to_vec() };
        match out.get(&rest) {
            Some(&u) if u != v => return None,
            _ => {
                out.insert(rest, v);
            }
        }
    }
    Some(out)
}

/// Evaluates `f` on a partially known window: the known segment plus
/// `left_missing` / `right_missing` free coordinates. Returns the minimum and
/// maximum over all allowed completions and the value at the canonical
/// (least-symbol) completion.
pub(crate) struct BoundaryEval<'a> {
    pot: &'a LocallyConstantPotential,
    sft: &'a Sft,
    memo: HashMap<(Vec<Sym>, usize, usize), (f64, f64, f64)>,
}

impl<'a> BoundaryEval<'a> {
    pub(crate) fn new(pot: &'a LocallyConstantPotential, sft: &'a Sft) -> Self {
        BoundaryEval {
            pot,
            sft,
            memo: HashMap::new(),
        }
    }

    pub(crate) fn eval(&mut self, segment: &[Sym], left_missing: usize, right_missing: usize) -> (f64, f64, f64) {
        if left_missing == 0 && right_missing == 0 {
            let v = self.pot.values[segment];
            return (v, v, v);
        }
        let key = (segment.to_vec(), left_missing, right_missing);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let first = segment[0];
        let last = segment[segment.len() - 1];
        let lefts = extensions(self.sft, first, left_missing, false);
        let rights = extensions(self.sft, last, right_missing, true);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut window = Vec::with_capacity(left_missing + segment.len() + right_missing);
        for l in &lefts {
            for r in &rights {
                window.clear();
                window.extend(l.iter().rev());
                window.extend_from_slice(segment);
                window.extend_from_slice(r);
                let v = self.pot.values[window.as_slice()];
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        window.clear();
        window.extend(canonical(self.sft, first, left_missing, false).iter().rev());
        window.extend_from_slice(segment);
        window.extend(canonical(self.sft, last, right_missing, true));
        let canon = self.pot.values[window.as_slice()];
        self.memo.insert(key, (lo, hi, canon));
        (lo, hi, canon)
    }
}

/// All allowed extensions of length `len` leaving `from` forwards (or
/// backwards, listed nearest-first).
fn extensions(sft: &Sft, from: Sym, len: usize, forward: bool) -> Vec<Vec<Sym>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        let mut next = Vec::new();
        for e in &out {
            let at = *e.last().unwrap_or(&from);
            let step = if forward { sft.successors(at) } else { sft.predecessors(at) };
            for &b in step {
                let mut e2 = e.clone();
                e2.push(b);
                next.push(e2);
            }
        }
        out = next;
    }
    out
}

fn canonical(sft: &Sft, from: Sym, len: usize, forward: bool) -> Vec<Sym> {
    let mut out = Vec::with_capacity(len);
    let mut at = from;
    for _ in 0..len {
        let step = if forward { sft.successors(at) } else { sft.predecessors(at) };
        at = step[0];
        out.push(at);
    }
    out
}

/// The pair map `F` on allowed 2-blocks, stored as logarithms
/// (`-inf` on forbidden pairs).
#[derive(Debug, Clone, PartialEq)]
pub struct PairWeight {
    n: usize,
    log: Vec<f64>,
    log_max: f64,
}

impl PairWeight {
    pub fn from_log(n: usize, log: Vec<f64>) -> Self {
        let log_max = log.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        PairWeight { n, log, log_max }
    }

    /// All-ones weight (f = 0) on the edges of `sft`.
    pub fn counting(sft: &Sft) -> Self {
        let n = sft.len();
        let mut log = vec![f64::NEG_INFINITY; n * n];
        for (a, b) in sft.edges() {
            log[a as usize * n + b as usize] = 0.0;
        }
        Self::from_log(n, log)
    }

    #[inline]
    pub fn log_weight(&self, a: Sym, b: Sym) -> f64 {
        self.log[a as usize * self.n + b as usize]
    }

    /// Largest `ln F` over allowed pairs.
    pub fn log_max(&self) -> f64 {
        self.log_max
    }

    /// `ln s(B) = ln F(b_1 b_2) + ... + ln F(b_{n-1} b_n)`; zero for `|B| = 1`.
    pub fn log_s_phi(&self, sft: &Sft, block: &[Sym]) -> Result<f64> {
        if block.is_empty() {
            return Err(Error::EmptyWord);
        }
        sft.check_word(block)?;
        Ok(block.windows(2).map(|p| self.log_weight(p[0], p[1])).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    fn golden() -> Sft {
        Sft::new(&["A", "B"], &[("A", "A"), ("A", "B"), ("B", "A")]).unwrap()
    }

    #[test]
    fn normalize_shifts_by_min() {
        let g = golden();
        let f = LocallyConstantPotential::pair(&g, |a, b| match (a, b) {
            (0, 0) => -1.0,
            (0, 1) => 2.0,
            _ => 0.5,
        })
        .unwrap();
        let n = f.normalize_nonneg();
        assert_eq!(n.value(&[0, 0]), Some(0.0));
        assert_eq!(n.value(&[0, 1]), Some(3.0));
        assert_eq!(n.shift(), 1.0);
        assert_eq!(n.min_value(), 0.0);
        let z = LocallyConstantPotential::zero(&g);
        assert_eq!(z.normalize_nonneg(), z);
    }

    #[test]
    fn pair_weights() {
        let g = golden();
        let z = LocallyConstantPotential::zero(&g).pair_weight(&g).unwrap();
        assert_eq!(z.log_weight(0, 1), 0.0);
        let ln2 = LocallyConstantPotential::from_window_fn(&g, 0, 0, |_| 2f64.ln()).unwrap();
        let w = ln2.pair_weight(&g).unwrap();
        assert!((w.log_weight(1, 0).exp() - 2.0).abs() < 1e-15);
        assert!((w.log_s_phi(&g, &[0, 0, 1, 0, 0]).unwrap().exp() - 16.0).abs() < 1e-12);
        assert_eq!(w.log_s_phi(&g, &[1]).unwrap(), 0.0);
        assert!(w.log_s_phi(&g, &[1, 1]).is_err());
    }

    #[test]
    fn radius_one_reduces_to_pair() {
        let g = golden();
        // depends on x_0 x_1 only, declared with radius 1
        let f = LocallyConstantPotential::from_window_fn(&g, -1, 1, |w| (w[1] * 2 + w[2]) as f64).unwrap();
        assert!(f.is_two_coordinate());
        assert_eq!(f.reduce_window().window(), (0, 1));
        let pw = f.pair_weight(&g).unwrap();
        assert_eq!(pw.log_weight(0, 1), 1.0);
        assert_eq!(pw.log_weight(1, 0), 2.0);
        let h = LocallyConstantPotential::from_window_fn(&g, -1, 1, |w| w[0] as f64).unwrap();
        assert!(matches!(h.pair_weight(&g), Err(Error::NotTwoCoordinate { lo: -1, hi: 0 })));
    }

    #[test]
    fn radius_table_must_cover() {
        let g = golden();
        let entries = vec![(vec![0], 1.0)];
        assert!(matches!(
            LocallyConstantPotential::from_radius_table(&g, 0, entries),
            Err(Error::MissingWindow(_))
        ));
        let entries = vec![(vec![0], 1.0), (vec![1], 0.0), (vec![1, 1], 0.0)];
        assert!(LocallyConstantPotential::from_radius_table(&g, 0, entries).is_err());
        assert!(LocallyConstantPotential::from_window_fn(&g, -5, 5, |_| 0.0).is_err());
    }

    #[test]
    fn windowed_last_position_is_min_over_successors() {
        let g = golden();
        let f = LocallyConstantPotential::pair(&g, |a, b| (1 + a + 3 * b) as f64).unwrap();
        // block "AA": position 0 is F(AA); position 1 is min over A -> {A, B}.
        let i0 = f.log_windowed_weight(&g, &[0, 0], 0, Extremum::Inf).unwrap();
        assert_eq!(i0, 1.0);
        let i1 = f.log_windowed_weight(&g, &[0, 0], 1, Extremum::Inf).unwrap();
        let s1 = f.log_windowed_weight(&g, &[0, 0], 1, Extremum::Sup).unwrap();
        assert_eq!((i1, s1), (1.0, 4.0));
        // "B" can only be followed by "A"
        assert_eq!(f.log_windowed_weight(&g, &[0, 1], 1, Extremum::Inf).unwrap(), 2.0);
    }

    #[test]
    fn zero_potential_weights_vanish() {
        let g = Sft::full(Alphabet::new(["0", "1", "2"]).unwrap());
        let f = LocallyConstantPotential::from_window_fn(&g, -2, 1, |_| 0.0).unwrap();
        for ext in [Extremum::Inf, Extremum::Sup] {
            assert_eq!(f.log_s_extremum(&g, &[0, 1, 2, 2], ext).unwrap(), 0.0);
        }
    }

    #[test]
    fn canonical_extension_uses_least_symbols() {
        let g = golden();
        // f(x) = x_1: last position of "AB" sees the forced successor A = 0,
        // last position of "BA" sees the least successor A.
        let f = LocallyConstantPotential::from_window_fn(&g, 0, 1, |w| 1.0 + w[1] as f64).unwrap();
        assert_eq!(f.log_s_canonical(&g, &[0, 1]).unwrap(), 2.0 + 1.0);
        assert_eq!(f.log_s_canonical(&g, &[1, 0]).unwrap(), 1.0 + 1.0);
    }
}
