//! The gap between the finite-range estimate `Ψ_n` on a typical window and
//! the exact relative pressure of the periodic point closing that window.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::sampler::{periodize, sample_point, MarkovSampler, RNG_NAME};
use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::potential::LocallyConstantPotential;
use crate::pressure::{dn_log_weight, log_s, periodic_values, WeightMode};
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Sym};

pub const CSV_HEADER: &str = "seed,sample_id,n,psi_inf,psi_sup,phi,theta,T_exact,phi_exact,gap_psi_T";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapConfig {
    pub n_grid: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
}

/// One `(sample, n)` row.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub seed: u64,
    pub sample_id: u64,
    pub n: usize,
    /// `Ψ_n` (cylinder infima) on the window.
    pub psi_inf: f64,
    /// `Ψ̃_n` (cylinder suprema) on the window.
    pub psi_sup: f64,
    /// `Φ_n`, or NaN when the potential is not a pair potential.
    pub phi: f64,
    /// `θ_n` of the point whose window is used.
    pub theta: f64,
    /// Exact relative pressure of the periodized window.
    pub t_exact: f64,
    /// Exact finite-range value of the periodized window.
    pub phi_exact: f64,
    /// `|Ψ_n - T_exact|`.
    pub gap: f64,
}

impl GapRow {
    /// `Ψ_n <= Ψ̃_n` and `θ_n <= Ψ_n`, up to rounding.
    pub fn orderings_hold(&self) -> bool {
        let tol = 1e-12;
        self.psi_inf <= self.psi_sup + tol && self.theta <= self.psi_inf + tol
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.sample_id,
            self.n,
            fmt_sig(self.psi_inf),
            fmt_sig(self.psi_sup),
            fmt_sig(self.phi),
            fmt_sig(self.theta),
            fmt_sig(self.t_exact),
            fmt_sig(self.phi_exact),
            fmt_sig(self.gap)
        )
    }
}

/// Quantiles of the gap column at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSummary {
    pub n: usize,
    pub count: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub system_id: String,
    pub rng: String,
    pub seed: u64,
    pub n_grid: Vec<usize>,
    pub rows: Vec<GapRow>,
    /// Samples dropped because their window could not be closed into a
    /// liftable cycle, with the reason.
    pub discarded: Vec<(u64, String)>,
    pub summary: Vec<GapSummary>,
}

impl GapReport {
    fn new(system_id: &str, seed: u64, n_grid: &[usize], rows: Vec<GapRow>, discarded: Vec<(u64, String)>) -> Self {
        let summary = n_grid
            .iter()
            .map(|&n| {
                let gaps: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.gap).collect();
                summarize(n, gaps)
            })
            .collect();
        GapReport {
            system_id: system_id.to_string(),
            rng: RNG_NAME.to_string(),
            seed,
            n_grid: n_grid.to_vec(),
            rows,
            discarded,
            summary,
        }
    }

    /// Header row plus one line per row, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn median_gap(&self, n: usize) -> Option<f64> {
        self.summary.iter().find(|s| s.n == n).map(|s| s.median)
    }

    /// Human-readable summary with the generator named.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "system: {}", self.system_id);
        let _ = writeln!(out, "rng: {}, seed {}", self.rng, self.seed);
        let _ = writeln!(out, "rows: {}, discarded samples: {}", self.rows.len(), self.discarded.len());
        let _ = writeln!(out, "n,count,min,q25,median,q75,max");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.n,
                s.count,
                fmt_sig(s.min),
                fmt_sig(s.q25),
                fmt_sig(s.median),
                fmt_sig(s.q75),
                fmt_sig(s.max)
            );
        }
        out
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn summarize(n: usize, mut gaps: Vec<f64>) -> GapSummary {
    gaps.sort_by(f64::total_cmp);
    GapSummary {
        n,
        count: gaps.len(),
        min: gaps.first().copied().unwrap_or(f64::NAN),
        q25: quantile(&gaps, 0.25),
        median: quantile(&gaps, 0.5),
        q75: quantile(&gaps, 0.75),
        max: gaps.last().copied().unwrap_or(f64::NAN),
    }
}

/// The row for the window `v = y_0 ... y_{n-1}`. `theta_point` is the point
/// whose `D_n` sum gives `θ_n`; by default the periodized window.
fn row_for_window(
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    v: &[Sym],
    theta_point: Option<&EventuallyPeriodicPoint>,
    seed: u64,
    sample_id: u64,
) -> Result<GapRow> {
    let n = v.len();
    let nf = n as f64;
    let psi_inf = log_s(code, pot, v, WeightMode::Inf)? / nf;
    let psi_sup = log_s(code, pot, v, WeightMode::Sup)? / nf;
    let phi = if pot.is_two_coordinate() {
        log_s(code, pot, v, WeightMode::Phi)? / nf
    } else {
        f64::NAN
    };
    let w = periodize(code, v)?;
    let pv = periodic_values(code, pot, &w)?;
    let periodic = EventuallyPeriodicPoint::periodic(w)?;
    let y = theta_point.unwrap_or(&periodic);
    let theta = dn_log_weight(code, pot, y, n, WeightMode::Inf)? / nf;
    Ok(GapRow {
        seed,
        sample_id,
        n,
        psi_inf,
        psi_sup,
        phi,
        theta,
        t_exact: pv.t_exact,
        phi_exact: pv.phi_exact,
        gap: (psi_inf - pv.t_exact).abs(),
    })
}

fn is_discard(e: &Error) -> bool {
    matches!(e, Error::NoConnector { .. } | Error::NoPeriodicLift | Error::NoPreimage { .. })
}

/// Samples `config.samples` Markov-typical windows and reports the gap at
/// every `n` of the grid. Samples run in parallel; rows come out in sample
/// order and do not depend on the worker count.
pub fn gap_experiment(
    system_id: &str,
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    sampler: &MarkovSampler,
    config: &GapConfig,
) -> Result<GapReport> {
    let n_max = *config
        .n_grid
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidArgument("empty n grid".into()))?;
    if config.n_grid.iter().any(|&n| n < 2) {
        return Err(Error::InvalidArgument("every n must be at least 2".into()));
    }
    let seed = config.seed;
    let sampler = &sampler.with_seed(seed);
    let run_one = |id: u64| -> Result<std::result::Result<Vec<GapRow>, (u64, String)>> {
        let sample = sample_point(sampler, code, id, n_max, false)?;
        let mut rows = Vec::with_capacity(config.n_grid.len());
        for &n in &config.n_grid {
            match row_for_window(code, pot, &sample.y[..n], None, seed, id) {
                Ok(r) => rows.push(r),
                Err(e) if is_discard(&e) => return Ok(Err((id, e.to_string()))),
                Err(e) => return Err(e),
            }
        }
        Ok(Ok(rows))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let results: Vec<_> = pool.install(|| (0..config.samples).into_par_iter().map(run_one).collect());
    let mut rows = Vec::new();
    let mut discarded = Vec::new();
    for r in results {
        match r? {
            Ok(mut rs) => rows.append(&mut rs),
            Err(d) => discarded.push(d),
        }
    }
    Ok(GapReport::new(system_id, seed, &config.n_grid, rows, discarded))
}

/// The same report for one fixed eventually periodic point (sample id 0):
/// `Ψ_n` and `θ_n` on the point itself, exact values on its periodized
/// window.
pub fn gap_for_point(
    system_id: &str,
    code: &FactorCode,
    pot: &LocallyConstantPotential,
    y: &EventuallyPeriodicPoint,
    n_grid: &[usize],
    seed: u64,
) -> Result<GapReport> {
    let rows = n_grid
        .iter()
        .map(|&n| {
            let v = y.window(0, n as i64 - 1);
            row_for_window(code, pot, v.symbols(), Some(y), seed, 0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapReport::new(system_id, seed, n_grid, rows, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Sft;

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&[7.0], 0.25), 7.0);
    }

    #[test]
    fn identity_gaps_vanish() {
        let g = Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap();
        let code = FactorCode::identity(g.clone());
        let f = LocallyConstantPotential::zero(&g);
        let s = MarkovSampler::uniform(&g, 5).unwrap();
        let cfg = GapConfig {
            n_grid: vec![10, 50],
            samples: 4,
            seed: 5,
            jobs: 2,
        };
        let r = gap_experiment("golden", &code, &f, &s, &cfg).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert!(r.rows.iter().all(|row| row.gap == 0.0 && row.theta == 0.0 && row.orderings_hold()));
        let csv = r.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert!(!csv.contains('\r'));
        let again = gap_experiment("golden", &code, &f, &s, &GapConfig { jobs: 1, ..cfg }).unwrap();
        assert_eq!(again.to_csv(), csv);
    }
}
