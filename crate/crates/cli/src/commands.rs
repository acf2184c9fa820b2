use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use relpress_core::experiments::example1::{example1_code, example1_table, validate_reconstruction, LIMIT};
use relpress_core::experiments::{gap_experiment, gap_for_point, GapConfig, GapReport, MarkovSampler};
use relpress_core::format::fmt_sig;
use relpress_core::pressure::{estimate_point, estimate_word, periodic_values, Estimator, PeriodicRoute};
use relpress_core::system_file::{load_system, System};
use relpress_core::Error;

/// Largest `|phi_exact - T_exact|` accepted by `periodic`.
const PERIODIC_TOLERANCE: f64 = 1e-8;

/// Whether a command's checks held; errors are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }
}

fn load(file: &Path) -> Result<System> {
    load_system(file).with_context(|| format!("cannot load {}", file.display()))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn check(file: &Path) -> Result<Outcome> {
    let sys = match load_system(file) {
        Ok(s) => s,
        Err(Error::Degenerate) => {
            println!("system: {}", file.display());
            println!("degenerate: no essential symbols remain after trimming");
            println!("hypotheses: fail");
            return Ok(Outcome::Failure);
        }
        Err(e) => return Err(e).with_context(|| format!("cannot load {}", file.display())),
    };
    let sft = sys.sft();
    let code = &sys.code;
    let trimmed = sft.trimmed_symbols();
    let irreducible = sft.is_irreducible();
    let onto = code.is_onto_image_presentation();
    let f = &sys.potential;
    let (lo, hi) = f.window();

    println!("system: {}", file.display());
    println!("symbols: {} ({})", sft.len(), sft.alphabet().names().join(" "));
    if trimmed.is_empty() {
        println!("trimmed: none");
    } else {
        println!("trimmed: {}", trimmed.join(" "));
    }
    println!("edges: {}", sft.edge_count());
    println!("irreducible: {}", yes_no(irreducible));
    println!("image symbols: {} ({})", code.image_alphabet().len(), code.image_alphabet().names().join(" "));
    println!("onto image presentation: {}", yes_no(onto));
    println!("potential window: [{lo}, {hi}]");
    println!("potential c: {}", fmt_sig(f.shift()));
    println!("potential ln M: {}", fmt_sig(f.log_bound()));
    println!("potential M: {}", fmt_sig(f.log_bound().exp()));
    match &sys.point {
        Some(y) => println!(
            "point: valid (center length {}, tail periods {} and {})",
            y.center().len(),
            y.left_tail().len(),
            y.right_tail().len()
        ),
        None => println!("point: none"),
    }
    let ok = irreducible && onto;
    println!("hypotheses: {}", if ok { "ok" } else { "fail" });
    Ok(Outcome::from_bool(ok))
}

pub fn pressure(file: &Path, word: Option<&str>, point: bool, ns: &[usize], est: Estimator) -> Result<Outcome> {
    let sys = load(file)?;
    let code = &sys.code;
    let f = &sys.potential;
    let name = estimator_name(est);
    if let Some(w) = word {
        if est.needs_point() {
            bail!("mode `{name}` needs --point");
        }
        let v = code.image_alphabet().parse_word(w)?;
        code.check_image_word(&v)?;
        let value = estimate_word(code, f, &v, est)?;
        println!("n={} {name}={}", v.len(), fmt_sig(value));
        return Ok(Outcome::Success);
    }
    debug_assert!(point);
    let y = sys
        .point
        .as_ref()
        .context("the system file has no point section")?;
    if ns.is_empty() {
        bail!("--point needs --n");
    }
    for &n in ns {
        let value = estimate_point(code, f, y, n, est)?;
        println!("n={n} {name}={}", fmt_sig(value));
    }
    Ok(Outcome::Success)
}

fn estimator_name(est: Estimator) -> &'static str {
    match est {
        Estimator::Phi => "phi",
        Estimator::Psi => "inf",
        Estimator::PsiTilde => "sup",
        Estimator::Theta => "theta",
        Estimator::ThetaTilde => "theta_sup",
        Estimator::Corollary => "corollary",
    }
}

pub fn periodic(file: &Path, cycle: &str) -> Result<Outcome> {
    let sys = load(file)?;
    let code = &sys.code;
    let w = code.image_alphabet().parse_word(cycle)?;
    let pv = periodic_values(code, &sys.potential, &w)?;
    let diff = (pv.phi_exact - pv.t_exact).abs();
    println!("cycle: {}", code.image_alphabet().render(&w));
    println!("period: {}", w.len());
    println!("phi_exact: {}", fmt_sig(pv.phi_exact));
    println!("T_exact: {}", fmt_sig(pv.t_exact));
    if pv.preimages == u128::MAX {
        println!("preimage blocks: > {}", u128::MAX);
    } else {
        println!("preimage blocks: {}", pv.preimages);
    }
    match pv.route {
        PeriodicRoute::Blocks => println!("route: blocks"),
        PeriodicRoute::Compact => println!("route: compact"),
    }
    match pv.reduced_size {
        Some(k) => println!("reduced size: {k}"),
        None => println!("reduced size: n/a"),
    }
    for (label, s) in [("phi", &pv.phi_spectral), ("T", &pv.t_spectral)] {
        println!(
            "{label} spectral: iterations {}, converged {}, bracket [{}, {}]",
            s.iterations,
            yes_no(s.converged),
            fmt_sig(s.log_lower),
            fmt_sig(s.log_upper)
        );
    }
    let ok = diff <= PERIODIC_TOLERANCE;
    println!("|phi_exact - T_exact|: {} ({})", fmt_sig(diff), if ok { "ok" } else { "FAIL" });
    Ok(Outcome::from_bool(ok))
}

pub fn example1(k_max: u32, exact_k_max: u32) -> Result<Outcome> {
    if k_max == 0 {
        bail!("--kmax must be at least 1");
    }
    let code = example1_code();
    let validation = validate_reconstruction(&code, 11)?;
    println!(
        "reconstruction: irreducible {}, essential {}, 2-tail liftable {}, {} enumeration checks {}",
        yes_no(validation.irreducible),
        yes_no(validation.all_essential),
        yes_no(validation.left_tail_liftable),
        validation.checks.len(),
        if validation.passed() { "ok" } else { "FAIL" }
    );
    for c in validation.checks.iter().filter(|c| c.expected != c.found) {
        println!("  {}: expected {}, found {}", c.word, c.expected, c.found);
    }
    let table = example1_table(k_max, exact_k_max)?;
    let mut ok = validation.passed();
    println!("k,n,count,D_n,phi_estimate,theta_estimate,distance_to_ln2/4");
    for row in &table.rows {
        let count = row.count.as_ref().map_or_else(|| "-".to_string(), |c| c.to_string());
        ok &= row.count_matches() != Some(false) && row.dn == 1u8.into();
        println!(
            "{},{},{},{},{},{},{}",
            row.k,
            row.n,
            count,
            row.dn,
            fmt_sig(row.phi_estimate),
            fmt_sig(row.theta_estimate),
            fmt_sig(row.distance_to_limit())
        );
    }
    ok &= table.dn_all_one && table.theta_max_abs == 0.0;
    println!("ln 2/4: {}", fmt_sig(LIMIT));
    println!("|D_n| = 1 for n <= {}: {}", table.dn_check_len, yes_no(table.dn_all_one));
    println!("max |theta_n| for n <= {}: {}", table.rows.last().unwrap().n, fmt_sig(table.theta_max_abs));
    println!("checks: {}", if ok { "ok" } else { "FAIL" });
    Ok(Outcome::from_bool(ok))
}

#[derive(Debug, Clone)]
pub struct ExperimentArgs {
    pub file: PathBuf,
    pub n_grid: Vec<usize>,
    pub samples: u64,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub point: bool,
}

pub fn experiment(args: &ExperimentArgs) -> Result<Outcome> {
    let sys = load(&args.file)?;
    let system_id = args
        .file
        .file_stem()
        .map_or_else(|| "system".to_string(), |s| s.to_string_lossy().into_owned());
    let seed = args.seed.or(sys.markov_seed()).unwrap_or(0);
    let report: GapReport = if args.point {
        let y = sys
            .point
            .as_ref()
            .context("--point needs a point section in the system file")?;
        gap_for_point(&system_id, &sys.code, &sys.potential, y, &args.n_grid, seed)?
    } else {
        if sys.spec.markov.is_none() {
            bail!("the system file has no markov section");
        }
        let sampler = match sys.markov_matrix()? {
            Some(m) => MarkovSampler::new(sys.sft(), m, seed)?,
            None => MarkovSampler::uniform(sys.sft(), seed)?,
        };
        let config = GapConfig {
            n_grid: args.n_grid.clone(),
            samples: args.samples,
            seed,
            jobs: args.jobs.max(1),
        };
        gap_experiment(&system_id, &sys.code, &sys.potential, &sampler, &config)?
    };
    let csv = report.to_csv();
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("cannot write {}", path.display()))?;
            print!("{}", report.summary_text());
        }
        None => {
            print!("{csv}");
            eprint!("{}", report.summary_text());
        }
    }
    std::io::stdout().flush()?;
    let ok = report.rows.iter().all(|r| r.orderings_hold());
    if !ok {
        eprintln!("warning: some rows violate inf <= sup or theta <= psi");
    }
    Ok(Outcome::from_bool(ok))
}
