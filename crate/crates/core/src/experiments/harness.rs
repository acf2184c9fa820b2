//! Randomized property checks over small systems.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::random::{random_instance, random_point, random_radius_one_potential, RandomInstance};
use crate::error::{Error, Result};
use crate::potential::{Extremum, LocallyConstantPotential, PairWeight};
use crate::pressure::{
    dn_count, dn_log_weight, dn_log_weight_profile, dn_widened_stabilization, gamma, gamma_word, log_s, log_sum_exp,
    periodic_values, periodic_values_blocks, periodic_values_compact, WeightMode, WeightedFiberMatrix,
};
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Recoding, Sym, DEFAULT_ENUMERATION_CAP};
use crate::system_file::spec_from_parts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HarnessKind {
    /// `Φ = 𝒯` at periodic points, and matrix path sums against enumeration.
    Lemma2,
    /// `k ln Γ^q(b, b) <= ln Γ^{qk}(b, b)` at periodic points.
    Lemma4,
    /// The one-step shift bound on `ln S` and monotonicity of the `D_n` sums.
    Monotonicity,
    /// `D_n` sums never exceed the full preimage sums.
    Domination,
    /// `S(w^{n+m}) <= M S(w^n) S(w^m)`.
    Subadditivity,
    /// `|Ψ_n - Φ_n| <= ln M / n` for pair potentials.
    ModeGap,
    /// Exact periodic values survive 2-block recoding.
    Recoding,
    /// Transfer sums, `Γ` marginals and `D_n` counts against enumeration.
    Oracle,
}

impl HarnessKind {
    pub const ALL: [HarnessKind; 8] = [
        HarnessKind::Lemma2,
        HarnessKind::Lemma4,
        HarnessKind::Monotonicity,
        HarnessKind::Domination,
        HarnessKind::Subadditivity,
        HarnessKind::ModeGap,
        HarnessKind::Recoding,
        HarnessKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HarnessKind::Lemma2 => "lemma2",
            HarnessKind::Lemma4 => "lemma4",
            HarnessKind::Monotonicity => "monotonicity",
            HarnessKind::Domination => "domination",
            HarnessKind::Subadditivity => "subadditivity",
            HarnessKind::ModeGap => "mode-gap",
            HarnessKind::Recoding => "recoding",
            HarnessKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for HarnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HarnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HarnessKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown harness kind `{s}`")))
    }
}

/// A failed check, with enough data to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: u64,
    /// The system (code and potential) as a system file.
    pub system: String,
    pub word: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessReport {
    pub kind: HarnessKind,
    pub trials: u64,
    pub seed: u64,
    /// Individual inequality or equality checks performed.
    pub checks: usize,
    pub violations: usize,
    /// Largest `lhs - rhs` (or absolute difference for equalities) seen.
    pub max_defect: f64,
    pub counterexamples: Vec<Counterexample>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Tally<'a> {
    trial: u64,
    code: &'a FactorCode,
    pot: &'a LocallyConstantPotential,
    checks: usize,
    violations: usize,
    max_defect: f64,
    counterexamples: Vec<Counterexample>,
}

impl<'a> Tally<'a> {
    fn new(trial: u64, code: &'a FactorCode, pot: &'a LocallyConstantPotential) -> Self {
        Tally {
            trial,
            code,
            pot,
            checks: 0,
            violations: 0,
            max_defect: f64::NEG_INFINITY,
            counterexamples: Vec::new(),
        }
    }

    /// Records `defect <= tol`; NaN counts as a violation.
    fn check(&mut self, defect: f64, tol: f64, word: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !defect.is_nan() {
            self.max_defect = self.max_defect.max(defect);
        }
        if defect.is_nan() || defect > tol {
            self.violations += 1;
            if self.counterexamples.len() < 5 {
                self.counterexamples.push(Counterexample {
                    trial: self.trial,
                    system: spec_from_parts(self.code, self.pot).to_json(),
                    word: word(),
                    detail: detail(),
                });
            }
        }
    }
}

/// `lhs <= rhs` as a defect, treating `-inf <= x` as satisfied.
fn le_defect(lhs: f64, rhs: f64) -> f64 {
    if lhs == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        lhs - rhs
    }
}

/// Relative difference of two log values (`0` when both are `-inf`).
fn log_rel_diff(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        0.0
    } else {
        (a - b).exp_m1().abs().max((b - a).exp_m1().abs())
    }
}

fn render_image(code: &FactorCode, w: &[Sym]) -> String {
    code.image_alphabet().render(w)
}

fn render_point(code: &FactorCode, y: &EventuallyPeriodicPoint) -> String {
    let a = code.image_alphabet();
    format!(
        "left_tail={} center={} right_tail={} anchor={}",
        a.render(y.left_tail()),
        a.render(y.center()),
        a.render(y.right_tail()),
        y.anchor()
    )
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// The random instance of one trial (at most 6 symbols, cycles of length at
/// most 5); exposed so failures can be replayed.
pub fn trial_instance(seed: u64, trial: u64, max_symbols: usize) -> RandomInstance {
    random_instance(&mut trial_rng(seed, trial), max_symbols, 5)
}

/// Runs `trials` random instances of one property family.
pub fn lemma_harness(kind: HarnessKind, trials: u64, seed: u64) -> Result<HarnessReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut report = HarnessReport {
        kind,
        trials,
        seed,
        checks: 0,
        violations: 0,
        max_defect: f64::NEG_INFINITY,
        counterexamples: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let max_symbols = if kind == HarnessKind::Oracle { 5 } else { 6 };
        let inst = random_instance(&mut rng, max_symbols, 5);
        let mut tally = Tally::new(trial, &inst.code, &inst.potential);
        match kind {
            HarnessKind::Lemma2 => lemma2(&inst, &mut tally)?,
            HarnessKind::Lemma4 => lemma4(&inst, &mut tally)?,
            HarnessKind::Monotonicity => monotonicity(&inst, &mut rng, &mut tally)?,
            HarnessKind::Domination => domination(&inst, &mut rng, &mut tally)?,
            HarnessKind::Subadditivity => subadditivity(&inst, &mut tally)?,
            HarnessKind::ModeGap => mode_gap(&inst, &mut rng, &mut tally)?,
            HarnessKind::Recoding => recoding(&inst, &mut tally)?,
            HarnessKind::Oracle => {
                let wide = random_radius_one_potential(&mut rng, inst.code.domain());
                oracle(&inst, &wide, &mut rng, &mut tally)?
            }
        }
        report.checks += tally.checks;
        report.violations += tally.violations;
        report.max_defect = report.max_defect.max(tally.max_defect);
        report.counterexamples.extend(tally.counterexamples);
    }
    Ok(report)
}

fn lemma2(inst: &RandomInstance, t: &mut Tally) -> Result<()> {
    let (code, f, w) = (&inst.code, &inst.potential, &inst.cycle);
    let q = w.len();
    let blocks = periodic_values_blocks(code, f, w)?;
    let ww = || render_image(code, w);
    t.check(
        (blocks.phi_exact - blocks.t_exact).abs(),
        1e-8,
        ww,
        || format!("phi_exact {} vs T_exact {}", blocks.phi_exact, blocks.t_exact),
    );
    let compact = periodic_values_compact(code, f, w)?;
    t.check((compact.t_exact - blocks.t_exact).abs(), 1e-9, ww, || {
        format!("compact T {} vs block T {}", compact.t_exact, blocks.t_exact)
    });
    t.check((compact.phi_exact - blocks.phi_exact).abs(), 1e-9, ww, || {
        format!("compact phi {} vs block phi {}", compact.phi_exact, blocks.phi_exact)
    });
    let a = WeightedFiberMatrix::new(code, f, w)?;
    let pw = f.pair_weight(code.domain())?;
    for k in 1..=12 / q {
        let word: Vec<Sym> = w.iter().copied().cycle().take(k * q).collect();
        let brute = enumerate_phi_sum(code, &pw, &word);
        let matrix = a.log_path_sum(k);
        t.check(log_rel_diff(matrix, brute), 1e-9, ww, || {
            format!("path sum over {k} periods: matrix {matrix} vs enumeration {brute}")
        });
    }
    Ok(())
}

/// `ln` of the sum of pair weights over every preimage path of `v`, by
/// depth-first enumeration without storing the paths.
fn enumerate_phi_sum(code: &FactorCode, pw: &PairWeight, v: &[Sym]) -> f64 {
    fn go(code: &FactorCode, pw: &PairWeight, v: &[Sym], last: Sym, acc: f64, out: &mut Vec<f64>) {
        if v.is_empty() {
            out.push(acc);
            return;
        }
        for &b in code.domain().successors(last) {
            if code.apply(b) == v[0] {
                go(code, pw, &v[1..], b, acc + pw.log_weight(last, b), out);
            }
        }
    }
    let mut terms = Vec::new();
    for a in 0..code.domain().len() as Sym {
        if code.apply(a) == v[0] {
            go(code, pw, &v[1..], a, 0.0, &mut terms);
        }
    }
    log_sum_exp(terms)
}

fn lemma4(inst: &RandomInstance, t: &mut Tally) -> Result<()> {
    let (code, f, w) = (&inst.code, &inst.potential, &inst.cycle);
    let q = w.len();
    let y = EventuallyPeriodicPoint::periodic(w.clone())?;
    for b in 0..code.domain().len() as Sym {
        let g1 = gamma(code, f, &y, b, b, q)?;
        for k in 1..=5 {
            let gk = gamma(code, f, &y, b, b, q * k)?;
            t.check(
                le_defect(k as f64 * g1, gk),
                1e-9,
                || render_image(code, w),
                || format!("b={b}, k={k}: k ln Γ^q = {}, ln Γ^qk = {gk}", k as f64 * g1),
            );
        }
    }
    Ok(())
}

fn shifted(y: &EventuallyPeriodicPoint, r: i64) -> EventuallyPeriodicPoint {
    EventuallyPeriodicPoint::new(
        y.left_tail().to_vec(),
        y.center().to_vec(),
        y.right_tail().to_vec(),
        y.anchor() - r,
    )
    .expect("nonempty tails")
}

fn monotonicity<R: Rng>(inst: &RandomInstance, rng: &mut R, t: &mut Tally) -> Result<()> {
    let (code, f) = (&inst.code, &inst.potential);
    let y = random_point(rng, code, 4, 6);
    let slack = (code.domain().len() as f64).ln() + f.log_bound();
    for r in -3..=3i64 {
        for n in 1..=8i64 {
            let full = y.window(r, r + n);
            let tail = y.window(r + 1, r + n);
            let lhs = log_s(code, f, &full, WeightMode::Phi)?;
            let rhs = slack + log_s(code, f, &tail, WeightMode::Phi)?;
            t.check(
                le_defect(lhs, rhs),
                1e-9,
                || render_point(code, &y),
                || format!("window [{r}, {}]: ln S = {lhs}, bound {rhs}", r + n),
            );
        }
        let ys = shifted(&y, r);
        let prof = dn_log_weight_profile(code, f, &ys, 16, WeightMode::Inf)?;
        for n in 1..prof.len() {
            t.check(
                le_defect(prof[n - 1], prof[n]),
                1e-12,
                || render_point(code, &ys),
                || format!("D sums decrease from n={n} to n={}: {} > {}", n + 1, prof[n - 1], prof[n]),
            );
        }
    }
    Ok(())
}

fn domination<R: Rng>(inst: &RandomInstance, rng: &mut R, t: &mut Tally) -> Result<()> {
    let (code, f) = (&inst.code, &inst.potential);
    let y = random_point(rng, code, 4, 6);
    for n in 1..=12usize {
        let v = y.window(0, n as i64 - 1);
        for (mode, name) in [(WeightMode::Inf, "inf"), (WeightMode::Sup, "sup")] {
            let theta = dn_log_weight(code, f, &y, n, mode)?;
            let s = log_s(code, f, &v, mode)?;
            t.check(
                le_defect(theta, s),
                1e-9,
                || render_point(code, &y),
                || format!("n={n}, {name}: D_n sum {theta} > S {s}"),
            );
        }
    }
    Ok(())
}

fn subadditivity(inst: &RandomInstance, t: &mut Tally) -> Result<()> {
    let (code, f, w) = (&inst.code, &inst.potential, &inst.cycle);
    let power = |k: usize| -> Vec<Sym> { w.iter().copied().cycle().take(k * w.len()).collect() };
    let ls = |k: usize| log_s(code, f, &power(k), WeightMode::Phi);
    for n in 1..=4 {
        for m in 1..=4 {
            let lhs = ls(n + m)?;
            let rhs = f.log_bound() + ls(n)? + ls(m)?;
            t.check(
                le_defect(lhs, rhs),
                1e-9,
                || render_image(code, w),
                || format!("n={n}, m={m}: ln S(w^(n+m)) = {lhs} > {rhs}"),
            );
        }
    }
    Ok(())
}

fn mode_gap<R: Rng>(inst: &RandomInstance, rng: &mut R, t: &mut Tally) -> Result<()> {
    let (code, f) = (&inst.code, &inst.potential);
    let y = random_point(rng, code, 4, 6);
    for r in -3..=3i64 {
        for n in 1..=10i64 {
            let v = y.window(r, r + n - 1);
            let psi = log_s(code, f, &v, WeightMode::Inf)? / n as f64;
            let phi = log_s(code, f, &v, WeightMode::Phi)? / n as f64;
            let bound = f.log_bound() / n as f64;
            t.check(
                (psi - phi).abs() - bound,
                1e-12,
                || render_point(code, &y),
                || format!("window [{r}, {}]: Ψ_n {psi}, Φ_n {phi}, bound {bound}", r + n - 1),
            );
        }
    }
    Ok(())
}

fn recoding(inst: &RandomInstance, t: &mut Tally) -> Result<()> {
    let (code, f, w) = (&inst.code, &inst.potential, &inst.cycle);
    let before = periodic_values(code, f, w)?;
    let rec = Recoding::new(code, 2)?;
    let f2 = f.recode(&rec)?;
    let w2 = rec.encode_image_cycle(w).ok_or(Error::NoPeriodicLift)?;
    let after = periodic_values(rec.code(), &f2, &w2)?;
    let ww = || render_image(code, w);
    t.check((before.phi_exact - after.phi_exact).abs(), 1e-9, ww, || {
        format!("phi {} vs recoded {}", before.phi_exact, after.phi_exact)
    });
    t.check((before.t_exact - after.t_exact).abs(), 1e-9, ww, || {
        format!("T {} vs recoded {}", before.t_exact, after.t_exact)
    });
    Ok(())
}

fn oracle<R: Rng>(inst: &RandomInstance, wide: &LocallyConstantPotential, rng: &mut R, t: &mut Tally) -> Result<()> {
    let code = &inst.code;
    let sft = code.domain();
    let pair = &inst.potential;
    let pw = pair.pair_weight(sft)?;
    for _ in 0..6 {
        let len = rng.random_range(1..=7);
        // the image of a random X-walk, so that preimages exist
        let mut x = vec![rng.random_range(0..sft.len()) as Sym];
        while x.len() < len {
            let succ = sft.successors(*x.last().unwrap());
            x.push(succ[rng.random_range(0..succ.len())]);
        }
        let v = code.apply_word(&x);
        let blocks = code.preimage_blocks(&v, DEFAULT_ENUMERATION_CAP)?;
        let vw = || render_image(code, &v);

        let brute_phi = log_sum_exp(blocks.iter().map(|b| pw.log_s_phi(sft, b).unwrap()));
        let dp_phi = log_s(code, pair, &v, WeightMode::Phi)?;
        t.check(log_rel_diff(dp_phi, brute_phi), 1e-9, vw, || {
            format!("phi: dp {dp_phi} vs enumeration {brute_phi}")
        });
        for pot in [pair, wide] {
            for (mode, ext) in [(WeightMode::Inf, Extremum::Inf), (WeightMode::Sup, Extremum::Sup)] {
                let brute = log_sum_exp(blocks.iter().map(|b| pot.log_s_extremum(sft, b, ext).unwrap()));
                let dp = log_s(code, pot, &v, mode)?;
                t.check(log_rel_diff(dp, brute), 1e-9, vw, || {
                    format!("{mode:?} (window {:?}): dp {dp} vs enumeration {brute}", pot.window())
                });
            }
            let brute = log_sum_exp(blocks.iter().map(|b| pot.log_s_canonical(sft, b).unwrap()));
            let dp = log_s(code, pot, &v, WeightMode::Canonical)?;
            t.check(log_rel_diff(dp, brute), 1e-9, vw, || {
                format!("canonical (window {:?}): dp {dp} vs enumeration {brute}", pot.window())
            });
        }
        if v.len() >= 2 {
            let n = sft.len() as Sym;
            let marginal = log_sum_exp(
                (0..n)
                    .flat_map(|b| (0..n).map(move |c| (b, c)))
                    .map(|(b, c)| gamma_word(code, pair, &v, b, c).unwrap()),
            );
            t.check(log_rel_diff(marginal, dp_phi), 1e-9, vw, || {
                format!("Γ marginal {marginal} vs ln S {dp_phi}")
            });
        }
    }
    let y = random_point(rng, code, 4, 4);
    for n in 1..=6 {
        let exact = dn_count(code, &y, n)?;
        let (_, widened) = dn_widened_stabilization(code, &y, n, 40)?;
        t.check(
            if exact == widened { 0.0 } else { 1.0 },
            0.0,
            || render_point(code, &y),
            || format!("n={n}: |D_n| {exact} vs widened-window count {widened}"),
        );
    }
    Ok(())
}
