//! Exact values at periodic points through weighted transfer matrices.
//!
//! For a cycle word `w` of length `q`, the matrix `A` has the preimage blocks
//! `u in π^{-1}(w)` as states and entries `s(u) F(u_q v_1)` whenever `u v` is
//! an X-block. Its growth rate gives the finite-range value along
//! `w w w ...`; the essential part `B` (states lying on bi-infinite paths)
//! gives the value over genuine preimage points.
//!
//! For long cycles the same numbers come from the `|A(X)| x |A(X)|` product
//! `K = W_0 W_1 ... W_{q-1}` of one-step symbol matrices: `A = U V` and
//! `K = V U` for suitable rectangular `U`, `V`, so both share their nonzero
//! spectrum. Restricting every `W_i` to the extendable symbols `E_i`
//! realizes `B` in the same way.

use super::fiber::FiberSets;
use super::logspace::log_sum_exp;
use crate::error::{Error, Result};
use crate::potential::{LocallyConstantPotential, PairWeight};
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Recoding, Sym, DEFAULT_ENUMERATION_CAP};

pub const SPECTRAL_TOLERANCE: f64 = 1e-12;
pub const SPECTRAL_MAX_ITERATIONS: usize = 100_000;

/// Preimage counts above this use the compact symbol-level route.
pub const BLOCK_ROUTE_MAX_STATES: usize = 1024;

/// Square matrix of logarithms of nonnegative entries (`-inf` is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct LogMatrix {
    n: usize,
    log: Vec<f64>,
}

/// Enclosure `log_lower <= ln ρ <= log_upper` from Collatz–Wielandt bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub log_radius: f64,
    pub log_lower: f64,
    pub log_upper: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SpectralEstimate {
    fn zero() -> Self {
        SpectralEstimate {
            log_radius: f64::NEG_INFINITY,
            log_lower: f64::NEG_INFINITY,
            log_upper: f64::NEG_INFINITY,
            iterations: 0,
            converged: true,
        }
    }
}

impl LogMatrix {
    pub fn new(n: usize, log: Vec<f64>) -> Self {
        assert_eq!(log.len(), n * n, "matrix data has the wrong size");
        LogMatrix { n, log }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let log = (0..n * n).map(|k| f(k / n, k % n)).collect();
        LogMatrix { n, log }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.log[i * self.n + j]
    }

    fn has(&self, i: usize, j: usize) -> bool {
        self.entry(i, j) > f64::NEG_INFINITY
    }

    pub fn submatrix(&self, keep: &[usize]) -> LogMatrix {
        LogMatrix::from_fn(keep.len(), |i, j| self.entry(keep[i], keep[j]))
    }

    /// Indices surviving iterated removal of states with an empty row or
    /// an empty column.
    pub fn essential_states(&self) -> Vec<usize> {
        let mut alive = vec![true; self.n];
        loop {
            let mut changed = false;
            for i in 0..self.n {
                if !alive[i] {
                    continue;
                }
                let out = (0..self.n).any(|j| alive[j] && self.has(i, j));
                let inc = (0..self.n).any(|j| alive[j] && self.has(j, i));
                if !out || !inc {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.n).filter(|&i| alive[i]).collect()
    }

    /// Strongly connected components (Tarjan), each sorted.
    fn components(&self) -> Vec<Vec<usize>> {
        struct St<'m> {
            m: &'m LogMatrix,
            index: Vec<usize>,
            low: Vec<usize>,
            on: Vec<bool>,
            stack: Vec<usize>,
            next: usize,
            out: Vec<Vec<usize>>,
        }
        fn visit(st: &mut St, v: usize) {
            st.index[v] = st.next;
            st.low[v] = st.next;
            st.next += 1;
            st.stack.push(v);
            st.on[v] = true;
            for w in 0..st.m.n {
                if !st.m.has(v, w) {
                    continue;
                }
                if st.index[w] == usize::MAX {
                    visit(st, w);
                    st.low[v] = st.low[v].min(st.low[w]);
                } else if st.on[w] {
                    st.low[v] = st.low[v].min(st.index[w]);
                }
            }
            if st.low[v] == st.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = st.stack.pop().unwrap();
                    st.on[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                st.out.push(comp);
            }
        }
        let mut st = St {
            m: self,
            index: vec![usize::MAX; self.n],
            low: vec![0; self.n],
            on: vec![false; self.n],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in 0..self.n {
            if st.index[v] == usize::MAX {
                visit(&mut st, v);
            }
        }
        st.out.sort();
        st.out
    }

    /// `ln ρ` of the entrywise exponential: the maximum over strongly
    /// connected components of shifted power iteration on each.
    pub fn spectral_log_radius(&self) -> SpectralEstimate {
        let mut best: Option<SpectralEstimate> = None;
        for comp in self.components() {
            if comp.len() == 1 && !self.has(comp[0], comp[0]) {
                continue;
            }
            let est = irreducible_radius(&self.submatrix(&comp));
            best = Some(match best {
                None => est,
                Some(b) => SpectralEstimate {
                    log_radius: b.log_radius.max(est.log_radius),
                    log_lower: b.log_lower.max(est.log_lower),
                    log_upper: b.log_upper.max(est.log_upper),
                    iterations: b.iterations + est.iterations,
                    converged: b.converged && est.converged,
                },
            });
        }
        best.unwrap_or_else(SpectralEstimate::zero)
    }

    /// `ln (1^T M^{k} v)` for a vector of logs `v`.
    pub fn log_apply_power_sum(&self, k: usize, v: &[f64]) -> f64 {
        let mut cur = v.to_vec();
        for _ in 0..k {
            cur = (0..self.n)
                .map(|i| log_sum_exp((0..self.n).map(|j| self.entry(i, j) + cur[j])))
                .collect();
        }
        log_sum_exp(cur)
    }

    /// Entries divided by the largest one, and the log of that divisor.
    fn linear(&self) -> (Vec<f64>, f64) {
        let shift = self.log.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let shift = if shift == f64::NEG_INFINITY { 0.0 } else { shift };
        (self.log.iter().map(|&l| (l - shift).exp()).collect(), shift)
    }
}

fn irreducible_radius(m: &LogMatrix) -> SpectralEstimate {
    let n = m.n;
    let (p, shift) = m.linear();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let bounds = |x: &[f64], y: &[f64]| {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        (lo, hi)
    };
    let mul = |x: &[f64], y: &mut [f64]| {
        for i in 0..n {
            y[i] = (0..n).map(|j| p[i * n + j] * x[j]).sum();
        }
    };
    mul(&x, &mut y);
    let (lo0, hi0) = bounds(&x, &y);
    // Adding a multiple of the identity makes the component primitive
    // without moving its eigenvector; a shift near ρ damps the other
    // peripheral eigenvalues.
    let alpha = if lo0 > 0.0 { (lo0 * hi0).sqrt() } else { hi0 / 2.0 };
    let (mut lo, mut hi) = (lo0, hi0);
    let mut iterations = 1;
    let mut converged = lo > 0.0 && (hi / lo).ln() <= SPECTRAL_TOLERANCE;
    while !converged && iterations < SPECTRAL_MAX_ITERATIONS {
        let mut mx = 0.0f64;
        for i in 0..n {
            x[i] = y[i] + alpha * x[i];
            mx = mx.max(x[i]);
        }
        for v in &mut x {
            *v /= mx;
        }
        mul(&x, &mut y);
        let (l, h) = bounds(&x, &y);
        lo = lo.max(l);
        hi = hi.min(h);
        iterations += 1;
        converged = lo > 0.0 && (hi / lo).ln() <= SPECTRAL_TOLERANCE;
    }
    let log_lower = lo.ln() + shift;
    let log_upper = hi.ln() + shift;
    SpectralEstimate {
        log_radius: 0.5 * (log_lower + log_upper),
        log_lower,
        log_upper,
        iterations,
        converged,
    }
}

/// The matrix `A` (or its essential part `B`) for a cycle word.
#[derive(Debug, Clone)]
pub struct WeightedFiberMatrix {
    q: usize,
    states: Vec<Vec<Sym>>,
    state_log_weights: Vec<f64>,
    matrix: LogMatrix,
    reduced: bool,
}

impl WeightedFiberMatrix {
    /// Builds `A` for the cycle word `w`; `f` must depend on `x_0 x_1` only.
    pub fn new(code: &FactorCode, pot: &LocallyConstantPotential, w: &[Sym]) -> Result<Self> {
        check_cycle(code, w)?;
        let sft = code.domain();
        let pw = pot.pair_weight(sft)?;
        let states: Vec<Vec<Sym>> = code
            .preimage_blocks(w, DEFAULT_ENUMERATION_CAP)?
            .into_iter()
            .map(|b| b.into_symbols())
            .collect();
        if states.is_empty() {
            return Err(Error::NoPeriodicLift);
        }
        Ok(Self::from_states(&pw, w.len(), states, |a, b| sft.allows(a, b)))
    }

    fn from_states(pw: &PairWeight, q: usize, states: Vec<Vec<Sym>>, allows: impl Fn(Sym, Sym) -> bool) -> Self {
        let state_log_weights: Vec<f64> = states
            .iter()
            .map(|u| u.windows(2).map(|p| pw.log_weight(p[0], p[1])).sum())
            .collect();
        let matrix = LogMatrix::from_fn(states.len(), |i, j| {
            let (a, b) = (states[i][q - 1], states[j][0]);
            if allows(a, b) {
                state_log_weights[i] + pw.log_weight(a, b)
            } else {
                f64::NEG_INFINITY
            }
        });
        WeightedFiberMatrix {
            q,
            states,
            state_log_weights,
            matrix,
            reduced: false,
        }
    }

    /// The essential reduction `B`.
    pub fn reduced(&self) -> Self {
        let keep = self.matrix.essential_states();
        WeightedFiberMatrix {
            q: self.q,
            states: keep.iter().map(|&i| self.states[i].clone()).collect(),
            state_log_weights: keep.iter().map(|&i| self.state_log_weights[i]).collect(),
            matrix: self.matrix.submatrix(&keep),
            reduced: true,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn period(&self) -> usize {
        self.q
    }

    /// Number of states `l`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<Sym>] {
        &self.states
    }

    pub fn matrix(&self) -> &LogMatrix {
        &self.matrix
    }

    pub fn spectral_log_radius(&self) -> SpectralEstimate {
        self.matrix.spectral_log_radius()
    }

    /// `ln S(w^k) = ln(1^T A^{k-1} σ)` with `σ_u = s(u)`.
    pub fn log_path_sum(&self, k: usize) -> f64 {
        assert!(k >= 1, "need at least one period");
        self.matrix.log_apply_power_sum(k - 1, &self.state_log_weights)
    }
}

fn check_cycle(code: &FactorCode, w: &[Sym]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !code.is_image_cycle(w) {
        return Err(Error::NotACycle);
    }
    Ok(())
}

/// How the exact values were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicRoute {
    /// Block matrix `A` and its reduction `B`.
    Blocks,
    /// Symbol-level cycle products.
    Compact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicValues {
    /// `(1/q) ln ρ(A)`.
    pub phi_exact: f64,
    /// `(1/q) ln ρ(B)`.
    pub t_exact: f64,
    /// `|π^{-1}(w)|`, saturating.
    pub preimages: u128,
    /// Size of `B` on the block route.
    pub reduced_size: Option<usize>,
    pub route: PeriodicRoute,
    pub phi_spectral: SpectralEstimate,
    pub t_spectral: SpectralEstimate,
}

/// Exact values along the periodic point `... w w . w w ...`.
///
/// Potentials with a wider window are first recoded to the block
/// presentation of their width, where they depend on one coordinate.
pub fn periodic_values(code: &FactorCode, pot: &LocallyConstantPotential, w: &[Sym]) -> Result<PeriodicValues> {
    check_cycle(code, w)?;
    let reduced = pot.reduce_window();
    if reduced.is_two_coordinate() {
        let l = code.preimage_count_saturating(w);
        if l == 0 {
            return Err(Error::NoPeriodicLift);
        }
        if l <= BLOCK_ROUTE_MAX_STATES as u128 {
            periodic_values_blocks(code, &reduced, w)
        } else {
            periodic_values_compact(code, &reduced, w)
        }
    } else {
        let rec = Recoding::new(code, reduced.width())?;
        let f = reduced.recode(&rec)?;
        let w2 = rec.encode_image_cycle(w).ok_or(Error::NoPeriodicLift)?;
        periodic_values(rec.code(), &f, &w2)
    }
}

/// The block route: spectral radii of `A` and `B`.
pub fn periodic_values_blocks(code: &FactorCode, pot: &LocallyConstantPotential, w: &[Sym]) -> Result<PeriodicValues> {
    let a = WeightedFiberMatrix::new(code, pot, w)?;
    let b = a.reduced();
    if b.is_empty() {
        return Err(Error::NoPeriodicLift);
    }
    let q = w.len() as f64;
    let phi = a.spectral_log_radius();
    let t = b.spectral_log_radius();
    Ok(PeriodicValues {
        phi_exact: phi.log_radius / q,
        t_exact: t.log_radius / q,
        preimages: a.len() as u128,
        reduced_size: Some(b.len()),
        route: PeriodicRoute::Blocks,
        phi_spectral: phi,
        t_spectral: t,
    })
}

/// The compact route through `K = W_0 ... W_{q-1}`; works for any cycle
/// length. `f` must depend on `x_0 x_1` only.
pub fn periodic_values_compact(code: &FactorCode, pot: &LocallyConstantPotential, w: &[Sym]) -> Result<PeriodicValues> {
    check_cycle(code, w)?;
    let sft = code.domain();
    let pw = pot.pair_weight(sft)?;
    let y = EventuallyPeriodicPoint::periodic(w.to_vec())?;
    let fs = match FiberSets::new(code, &y, 0, w.len()) {
        Ok(fs) => fs,
        Err(Error::NoPreimage { .. }) => return Err(Error::NoPeriodicLift),
        Err(e) => return Err(e),
    };
    let q = w.len();
    let full = cycle_product(code, &pw, q, |i| code.fiber(w[i % q]));
    let ess = cycle_product(code, &pw, q, |i| fs.extendable((i % q) as i64));
    let phi = full.spectral_log_radius();
    let t = ess.spectral_log_radius();
    if t.log_radius == f64::NEG_INFINITY {
        return Err(Error::NoPeriodicLift);
    }
    Ok(PeriodicValues {
        phi_exact: phi.log_radius / q as f64,
        t_exact: t.log_radius / q as f64,
        preimages: code.preimage_count_saturating(w),
        reduced_size: None,
        route: PeriodicRoute::Compact,
        phi_spectral: phi,
        t_spectral: t,
    })
}

/// `ln` of `W_0 W_1 ... W_{q-1}`, with `W_i[a][b] = F(ab)` for `a` in
/// `sets(i)` and `b` in `sets(i + 1)`.
fn cycle_product<'s>(code: &FactorCode, pw: &PairWeight, q: usize, sets: impl Fn(usize) -> &'s [Sym]) -> LogMatrix {
    let sft = code.domain();
    let n = sft.len();
    // Row `a` of the running product in logs, for each start symbol `a`.
    let ninf = f64::NEG_INFINITY;
    let mut rows: Vec<Vec<f64>> = (0..n as Sym)
        .map(|a| {
            let mut v = vec![ninf; n];
            if sets(0).contains(&a) {
                v[a as usize] = 0.0;
            }
            v
        })
        .collect();
    for i in 0..q {
        let from = sets(i);
        let to = sets(i + 1);
        for row in &mut rows {
            let mut next = vec![ninf; n];
            for &b in to {
                next[b as usize] = log_sum_exp(from.iter().map(|&a| row[a as usize] + pw.log_weight(a, b)));
            }
            *row = next;
        }
    }
    LogMatrix::from_fn(n, |a, b| rows[a][b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Sft;

    #[test]
    fn one_by_one() {
        let m = LogMatrix::new(1, vec![0.7]);
        let est = m.spectral_log_radius();
        assert!((est.log_radius - 0.7).abs() < 1e-13);
        assert!(est.converged);
    }

    #[test]
    fn golden_ratio_from_characteristic_polynomial() {
        // [[1, 1], [1, 0]]: x^2 - x - 1 = 0
        let m = LogMatrix::new(2, vec![0.0, 0.0, 0.0, f64::NEG_INFINITY]);
        let est = m.spectral_log_radius();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((est.log_radius - phi.ln()).abs() < 1e-12);
        assert!(est.log_lower <= phi.ln() + 1e-15 && phi.ln() <= est.log_upper + 1e-15);
    }

    #[test]
    fn cycle_mean_of_permutation() {
        // 3-cycle with weights 0.2, 0.5, 1.1
        let mut log = vec![f64::NEG_INFINITY; 9];
        log[1] = 0.2;
        log[5] = 0.5;
        log[6] = 1.1;
        let est = LogMatrix::new(3, log).spectral_log_radius();
        assert!((est.log_radius - (0.2 + 0.5 + 1.1) / 3.0).abs() < 1e-12, "{est:?}");
        assert!(est.converged);
    }

    #[test]
    fn reducible_takes_component_max() {
        // state 0 loops with weight 1, feeds state 1 which loops with weight 2
        let m = LogMatrix::new(2, vec![0.0, 0.0, f64::NEG_INFINITY, 2f64.ln()]);
        assert!((m.spectral_log_radius().log_radius - 2f64.ln()).abs() < 1e-12);
        let nil = LogMatrix::new(2, vec![f64::NEG_INFINITY, 0.0, f64::NEG_INFINITY, f64::NEG_INFINITY]);
        assert_eq!(nil.spectral_log_radius().log_radius, f64::NEG_INFINITY);
        assert!(nil.essential_states().is_empty());
    }

    #[test]
    fn identity_fixed_point() {
        let g = Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap();
        let code = FactorCode::identity(g.clone());
        let f = LocallyConstantPotential::zero(&g);
        let a = WeightedFiberMatrix::new(&code, &f, &[0]).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.matrix().entry(0, 0), 0.0);
        let v = periodic_values(&code, &f, &[0]).unwrap();
        assert_eq!((v.phi_exact, v.t_exact), (0.0, 0.0));
        // two-cycle: cycle mean of the pair weights
        let h = LocallyConstantPotential::pair(&g, |a, b| 0.3 * a as f64 + 0.9 * b as f64).unwrap();
        let v = periodic_values(&code, &h, &[0, 1]).unwrap();
        assert!((v.phi_exact - 0.6).abs() < 1e-12);
        assert!(WeightedFiberMatrix::new(&code, &h, &[1]).is_err());
    }
}
