//! Markov measures on `X` and typical image points.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Sft, Sym};

/// Name of the generator behind every sample, for report headers.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64, stream = sample id)";

/// A stationary Markov chain supported exactly on the edges of `X`.
#[derive(Debug, Clone)]
pub struct MarkovSampler {
    matrix: Vec<Vec<f64>>,
    stationary: Vec<f64>,
    rows: Vec<WeightedIndex<f64>>,
    initial: WeightedIndex<f64>,
    seed: u64,
}

impl MarkovSampler {
    /// `matrix` in the SFT's symbol order; must be row-stochastic with
    /// support equal to the allowed transitions.
    pub fn new(sft: &Sft, matrix: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let n = sft.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMarkov(format!("matrix must be {n} x {n}")));
        }
        for (a, row) in matrix.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidMarkov(format!("row {a} sums to {sum}")));
            }
            for (b, &p) in row.iter().enumerate() {
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::InvalidMarkov(format!("entry ({a}, {b}) is {p}")));
                }
                if (p > 0.0) != sft.allows(a as Sym, b as Sym) {
                    return Err(Error::InvalidMarkov(format!(
                        "support differs from the transitions at ({}, {})",
                        sft.alphabet().name(a as Sym),
                        sft.alphabet().name(b as Sym)
                    )));
                }
            }
        }
        if !sft.is_irreducible() {
            return Err(Error::InvalidMarkov("the chain needs an irreducible system".into()));
        }
        let stationary = stationary_vector(&matrix);
        let rows = matrix
            .iter()
            .map(|r| WeightedIndex::new(r.clone()).map_err(|e| Error::InvalidMarkov(e.to_string())))
            .collect::<Result<_>>()?;
        let initial = WeightedIndex::new(stationary.clone()).map_err(|e| Error::InvalidMarkov(e.to_string()))?;
        Ok(MarkovSampler {
            matrix,
            stationary,
            rows,
            initial,
            seed,
        })
    }

    /// Uniform transition probabilities over the allowed successors.
    pub fn uniform(sft: &Sft, seed: u64) -> Result<Self> {
        let n = sft.len();
        let matrix = (0..n as Sym)
            .map(|a| {
                let succ = sft.successors(a);
                let mut row = vec![0.0; n];
                for &b in succ {
                    row[b as usize] = 1.0 / succ.len() as f64;
                }
                row
            })
            .collect();
        Self::new(sft, matrix, seed)
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        MarkovSampler { seed, ..self.clone() }
    }

    /// The generator for one sample: seeded by the sampler seed, with the
    /// sample id as stream so samples are independent of evaluation order.
    pub fn rng(&self, sample_id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample_id);
        rng
    }

    /// `x_0 ... x_{n-1}` with `x_0` drawn from the stationary vector.
    pub fn sample_x(&self, sample_id: u64, n: usize) -> Vec<Sym> {
        let mut rng = self.rng(sample_id);
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return out;
        }
        let mut a = self.initial.sample(&mut rng);
        out.push(a as Sym);
        for _ in 1..n {
            a = self.rows[a].sample(&mut rng);
            out.push(a as Sym);
        }
        out
    }
}

/// Left Perron vector of a stochastic matrix by damped power iteration.
fn stationary_vector(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000 {
        let mut next = vec![0.0; n];
        for (a, row) in m.iter().enumerate() {
            for (b, &w) in row.iter().enumerate() {
                next[b] += p[a] * w;
            }
        }
        // averaging with the identity handles periodic chains
        let next: Vec<f64> = (0..n).map(|i| 0.5 * (p[i] + next[i])).collect();
        let s: f64 = next.iter().sum();
        let next: Vec<f64> = next.iter().map(|v| v / s).collect();
        let diff: f64 = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if diff < 1e-15 {
            break;
        }
    }
    p
}

/// A sampled preimage path, its image window and, when requested, the
/// image cycle closing that window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledPoint {
    pub x: Vec<Sym>,
    pub y: Vec<Sym>,
    pub cycle: Option<Vec<Sym>>,
}

impl SampledPoint {
    /// The periodic point `... w w . w w ...` of the closing cycle.
    pub fn periodic_point(&self) -> Option<EventuallyPeriodicPoint> {
        self.cycle.clone().map(|c| EventuallyPeriodicPoint::periodic(c).expect("nonempty cycle"))
    }
}

/// `w = v c` with `c` a shortest connector from the last symbol of `v` back
/// to its first in the image presentation (least word among the shortest).
pub fn periodize(code: &FactorCode, v: &[Sym]) -> Result<Vec<Sym>> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (first, last) = (v[0], v[v.len() - 1]);
    let connector = code.shortest_image_connector(last, first).ok_or_else(|| Error::NoConnector {
        from: code.image_alphabet().name(last).to_string(),
        to: code.image_alphabet().name(first).to_string(),
    })?;
    let mut w = v.to_vec();
    w.extend(connector);
    Ok(w)
}

/// Samples `x_0 ... x_{n-1}`, pushes it to `y`, and optionally closes `y`
/// into a cycle.
pub fn sample_point(
    sampler: &MarkovSampler,
    code: &FactorCode,
    sample_id: u64,
    n: usize,
    with_periodization: bool,
) -> Result<SampledPoint> {
    if n < 2 {
        return Err(Error::InvalidArgument("samples need n >= 2".into()));
    }
    let x = sampler.sample_x(sample_id, n);
    let y = code.apply_word(&x);
    let cycle = if with_periodization { Some(periodize(code, &y)?) } else { None };
    Ok(SampledPoint { x, y, cycle })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap()
    }

    #[test]
    fn uniform_stationary() {
        let s = MarkovSampler::uniform(&golden(), 1).unwrap();
        // P = [[1/2, 1/2], [1, 0]] has stationary vector (2/3, 1/3)
        assert!((s.stationary()[0] - 2.0 / 3.0).abs() < 1e-12);
        let p = s.stationary();
        for b in 0..2 {
            let v: f64 = (0..2).map(|a| p[a] * s.matrix()[a][b]).sum();
            assert!((v - p[b]).abs() < 1e-10);
        }
    }

    #[test]
    fn deterministic_and_valid() {
        let g = golden();
        let s = MarkovSampler::uniform(&g, 7).unwrap();
        let a = s.sample_x(3, 500);
        assert_eq!(a, s.sample_x(3, 500));
        assert_ne!(a, s.sample_x(4, 500));
        assert!(g.is_allowed_word(&a));
        let code = FactorCode::identity(g);
        let p = sample_point(&s, &code, 3, 500, true).unwrap();
        assert_eq!(p.x, p.y);
        let w = p.cycle.unwrap();
        assert_eq!(&w[..500], &p.y[..]);
        assert!(code.is_image_cycle(&w));
    }

    #[test]
    fn rejects_bad_support() {
        let g = golden();
        assert!(MarkovSampler::new(&g, vec![vec![1.0, 0.0], vec![1.0, 0.0]], 0).is_err());
        assert!(MarkovSampler::new(&g, vec![vec![0.5, 0.6], vec![1.0, 0.0]], 0).is_err());
    }
}
