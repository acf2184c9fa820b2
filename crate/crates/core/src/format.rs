//! Fixed-precision number formatting for reports.

/// Significant digits used in all printed values.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits: plain decimal notation for
/// moderate magnitudes, scientific notation otherwise. Infinities print as
/// `inf` / `-inf`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Parses a value printed by [`fmt_sig`].
pub fn parse_sig(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(3f64.ln() / 4.0), "0.274653072167");
        assert_eq!(fmt_sig(2f64.ln() / 4.0), "0.173286795140");
        assert_eq!(fmt_sig(1234.5), "1234.50000000");
        assert_eq!(fmt_sig(-1.5e-9), "-1.50000000000e-9");
        assert_eq!(fmt_sig(f64::NEG_INFINITY), "-inf");
        // rounding into the next decade
        assert_eq!(fmt_sig(9.9999999999999), "10.0000000000");
    }

    proptest! {
        #[test]
        fn printed_values_round_trip(x in prop::num::f64::NORMAL) {
            let s = fmt_sig(x);
            let back = parse_sig(&s).unwrap();
            prop_assert_eq!(fmt_sig(back), s);
        }

        #[test]
        fn keeps_twelve_digits(x in -1e6f64..1e6) {
            let back = parse_sig(&fmt_sig(x)).unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300) + 1e-300 || x == 0.0);
        }
    }
}
