//! The five-symbol system whose image point `y = ...222.1 2^{a_1} 1 2^{a_2} 1 ...`
//! (with `a_k = 2^k + 1`) has a single extensible preimage window at every
//! length while its preimage words grow like `2^{n/4}`.
//!
//! Alphabet `{1, ..., 5}`, edges `1->2, 1->3, 2->1, 2->2, 3->4, 3->5, 4->3,
//! 5->3, 4->1`, code `1 -> 1` and `2, 3, 4, 5 -> 2`. A run `1 2^m` lifts
//! either to `1 2^m` or to `1 3 (4|5) 3 (4|5) ...`. The second kind can only
//! return to `1` from a `4`, which sits at an even offset, so for odd `m` the
//! word `1 2^m 1` lifts only to itself.

use num_bigint::BigUint;

use crate::error::Result;
use crate::potential::LocallyConstantPotential;
use crate::pressure::{count_paths_at, dn_count_profile, dn_log_weight_profile, log_s_profile, FiberSets, WeightMode};
use crate::symbolic::{EventuallyPeriodicPoint, FactorCode, Sft, Sym, DEFAULT_ENUMERATION_CAP};

pub const ALPHABET: [&str; 5] = ["1", "2", "3", "4", "5"];
pub const EDGES: [(&str, &str); 9] = [
    ("1", "2"),
    ("1", "3"),
    ("2", "1"),
    ("2", "2"),
    ("3", "4"),
    ("3", "5"),
    ("4", "3"),
    ("5", "3"),
    ("4", "1"),
];
pub const CODE: [(&str, &str); 5] = [("1", "1"), ("2", "2"), ("3", "2"), ("4", "2"), ("5", "2")];

/// `ln 2 / 4`, the limit of the finite-range estimates along `n_k`.
pub const LIMIT: f64 = std::f64::consts::LN_2 / 4.0;

pub fn example1_code() -> FactorCode {
    let sft = Sft::new(&ALPHABET, &EDGES).expect("valid system");
    FactorCode::from_pairs(sft, &CODE).expect("valid code")
}

/// `a_k = 2^k + 1`.
pub fn a_k(k: u32) -> usize {
    (1usize << k) + 1
}

/// `n_k = 2^{k+1} + 2k - 2`, the length of `1 2^{a_1} 1 ... 1 2^{a_k}`.
pub fn n_k(k: u32) -> usize {
    (1usize << (k + 1)) + 2 * k as usize - 2
}

/// `2^{2^{k-1}} + 1`.
pub fn expected_count(k: u32) -> BigUint {
    (BigUint::from(1u8) << (1usize << (k - 1))) + 1u8
}

/// The image word `1 2^{a_1} 1 ... 1 2^{a_K} 1` (image symbols: `1` is 0,
/// `2` is 1).
pub fn center(k_max: u32) -> Vec<Sym> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        out.push(0);
        out.extend(std::iter::repeat_n(1, a_k(k)));
    }
    out.push(0);
    out
}

/// The point with `2^∞` on both sides of `center(k_max)`. It agrees with `y`
/// on `(-∞, n_{k_max}]`, and its `D_n` sets equal those of `y` for
/// `n <= n_{k_max} + 1`.
pub fn example1_point(k_max: u32) -> EventuallyPeriodicPoint {
    EventuallyPeriodicPoint::new(vec![1], center(k_max), vec![1], 0).expect("nonempty tails")
}

/// The same center as a text word for system files.
pub fn center_text(k_max: u32) -> String {
    let mut parts = Vec::new();
    for k in 1..=k_max {
        parts.push("1".to_string());
        parts.push(format!("2^{}", a_k(k)));
    }
    parts.push("1".into());
    parts.join(" ")
}

/// One brute-force check on the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationCheck {
    pub word: String,
    pub expected: u64,
    pub found: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub irreducible: bool,
    pub all_essential: bool,
    pub left_tail_liftable: bool,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.irreducible && self.all_essential && self.left_tail_liftable && self.checks.iter().all(|c| c.expected == c.found)
    }
}

/// Enumerates the preimages of `1 2^m` and `1 2^m 1` for odd `m <= max_m`
/// and compares them with `2^{(m-1)/2} + 1` and `1`.
pub fn validate_reconstruction(code: &FactorCode, max_m: usize) -> Result<ValidationReport> {
    let sft = code.domain();
    let mut checks = Vec::new();
    for m in (1..=max_m).step_by(2) {
        let mut v: Vec<Sym> = vec![0];
        v.extend(std::iter::repeat_n(1, m));
        let open = code.preimage_blocks(&v, DEFAULT_ENUMERATION_CAP)?;
        checks.push(ValidationCheck {
            word: format!("1 2^{m}"),
            expected: (1u64 << ((m - 1) / 2)) + 1,
            found: open.len() as u64,
        });
        v.push(0);
        let closed = code.preimage_blocks(&v, DEFAULT_ENUMERATION_CAP)?;
        checks.push(ValidationCheck {
            word: format!("1 2^{m} 1"),
            expected: 1,
            found: closed.len() as u64,
        });
    }
    let twos = EventuallyPeriodicPoint::periodic(vec![1])?;
    Ok(ValidationReport {
        irreducible: sft.is_irreducible(),
        all_essential: sft.trimmed_symbols().is_empty() && sft.len() == 5,
        left_tail_liftable: FiberSets::new(code, &twos, -4, 4).is_ok(),
        checks,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example1Row {
    pub k: u32,
    pub n: usize,
    /// Exact `|π^{-1}[y_0 ... y_{n_k - 1}]|` when computed.
    pub count: Option<BigUint>,
    /// `|D_{n_k}(y)|`.
    pub dn: BigUint,
    /// `(1/n_k) ln S(y_0 ... y_{n_k - 1})` with `f = 0`.
    pub phi_estimate: f64,
    /// `(1/n_k) ln sum over D_{n_k}(y)` with `f = 0`.
    pub theta_estimate: f64,
}

impl Example1Row {
    pub fn distance_to_limit(&self) -> f64 {
        (self.phi_estimate - LIMIT).abs()
    }

    /// The closed form `(2^{k-1} ln 2 + ln(1 + 2^{-2^{k-1}})) / n_k`.
    pub fn closed_form(&self) -> f64 {
        let e = (1u64 << (self.k - 1)) as f64;
        (e * std::f64::consts::LN_2 + (-e * std::f64::consts::LN_2).exp().ln_1p()) / self.n as f64
    }

    pub fn count_matches(&self) -> Option<bool> {
        self.count.as_ref().map(|c| *c == expected_count(self.k))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example1Table {
    pub rows: Vec<Example1Row>,
    /// Largest `|θ_n|` over `1 <= n <= n_{k_max}`.
    pub theta_max_abs: f64,
    /// Whether `|D_n(y)| = 1` for every `n <= dn_check_len`.
    pub dn_all_one: bool,
    pub dn_check_len: usize,
}

/// Every `|D_n(y)|` with `n <= DN_CHECK_LEN` is checked to be 1.
pub const DN_CHECK_LEN: usize = 200;

/// Rows `k = 1 ..= k_max`; exact preimage counts for `k <= exact_k_max`.
pub fn example1_table(k_max: u32, exact_k_max: u32) -> Result<Example1Table> {
    let code = example1_code();
    let sft = code.domain();
    let y = example1_point(k_max);
    let n_max = n_k(k_max);
    let window = y.window(0, n_max as i64 - 1);
    let zero = LocallyConstantPotential::zero(sft);

    let phi = log_s_profile(&code, &zero, window.symbols(), WeightMode::Phi)?;
    let theta = dn_log_weight_profile(&code, &zero, &y, n_max, WeightMode::Inf)?;
    let theta_max_abs = theta
        .iter()
        .enumerate()
        .map(|(j, t)| (t / (j + 1) as f64).abs())
        .fold(0.0, f64::max);

    let exact = exact_k_max.min(k_max);
    let counts = if exact >= 1 {
        let lengths: Vec<usize> = (1..=exact).map(n_k).collect();
        count_paths_at(sft, n_k(exact), |j| code.fiber(window[j]), &lengths)
    } else {
        Vec::new()
    };
    let fs = FiberSets::new(&code, &y, 0, n_max)?;
    let lengths: Vec<usize> = (1..=k_max).map(n_k).collect();
    let dns = count_paths_at(sft, n_max, |j| fs.extendable(j as i64), &lengths);

    // The point built for `k` is exact on windows up to `n_k + 1`, and
    // `n_7 = 268` covers the fixed check length.
    let dn_check_len = DN_CHECK_LEN;
    let long = if k_max >= 7 { y.clone() } else { example1_point(7) };
    let dn_all_one = dn_count_profile(&code, &long, dn_check_len)?.iter().all(|c| *c == BigUint::from(1u8));

    let rows = (1..=k_max)
        .map(|k| {
            let n = n_k(k);
            Example1Row {
                k,
                n,
                count: counts.get(k as usize - 1).cloned(),
                dn: dns[k as usize - 1].clone(),
                phi_estimate: phi[n - 1] / n as f64,
                theta_estimate: theta[n - 1] / n as f64,
            }
        })
        .collect();
    Ok(Example1Table {
        rows,
        theta_max_abs,
        dn_all_one,
        dn_check_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!((a_k(1), a_k(2), a_k(3)), (3, 5, 9));
        assert_eq!((n_k(1), n_k(2), n_k(3)), (4, 10, 20));
        assert_eq!(n_k(20), 2_097_190);
        for k in 1..8 {
            assert_eq!(center(k).len(), n_k(k) + 1);
        }
    }

    #[test]
    fn center_text_parses_to_center() {
        let code = example1_code();
        assert_eq!(code.image_alphabet().parse_word(&center_text(4)).unwrap(), center(4));
    }
}
