//! Log-domain helpers: log-sum-exp and a linear vector with a separate log
//! scale, renormalized by its maximum so long products never overflow.

/// `ln(e^a + e^b)`, exact for `-inf` operands.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln sum e^{x_i}` accumulated in iteration order; `-inf` for an empty sum.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Nonnegative vector `exp(log_scale) * values`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledVec {
    pub values: Vec<f64>,
    pub log_scale: f64,
}

impl ScaledVec {
    pub fn zeros(n: usize) -> Self {
        ScaledVec {
            values: vec![0.0; n],
            log_scale: 0.0,
        }
    }

    /// From logarithms (`-inf` meaning zero).
    pub fn from_log(logs: &[f64]) -> Self {
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Self::zeros(logs.len());
        }
        ScaledVec {
            values: logs.iter().map(|x| (x - max).exp()).collect(),
            log_scale: max,
        }
    }

    pub fn log_at(&self, i: usize) -> f64 {
        let v = self.values[i];
        if v > 0.0 {
            v.ln() + self.log_scale
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn to_log(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.log_at(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Divides by the largest entry, moving it into the scale. Exact when the
    /// largest entry is a power of two (in particular 1).
    pub fn normalize(&mut self) {
        let max = self.values.iter().copied().fold(0.0, f64::max);
        if max > 0.0 && max != 1.0 {
            for v in &mut self.values {
                *v /= max;
            }
            self.log_scale += max.ln();
        }
    }

    /// `ln sum_i values_i * exp(weights_i)`.
    pub fn log_dot_exp(&self, log_weights: &[f64]) -> f64 {
        let terms = self
            .values
            .iter()
            .zip(log_weights)
            .filter(|(&v, &w)| v > 0.0 && w > f64::NEG_INFINITY)
            .map(|(&v, &w)| v.ln() + w);
        log_sum_exp(terms) + self.log_scale
    }

    /// `ln sum_i values_i`.
    pub fn log_total(&self) -> f64 {
        let s: f64 = self.values.iter().sum();
        if s > 0.0 {
            s.ln() + self.log_scale
        } else {
            f64::NEG_INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_matches_direct() {
        assert!((log_add(2f64.ln(), 3f64.ln()) - 5f64.ln()).abs() < 1e-15);
        assert_eq!(log_add(f64::NEG_INFINITY, 1.5), 1.5);
        assert_eq!(log_sum_exp(Vec::new()), f64::NEG_INFINITY);
        assert!((log_sum_exp([0.0, 0.0, 0.0, 0.0]) - 4f64.ln()).abs() < 1e-15);
        // no overflow at large magnitudes
        assert!((log_sum_exp([1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn scaled_vec_round_trip() {
        let logs = [0.5, f64::NEG_INFINITY, -3.0];
        let v = ScaledVec::from_log(&logs);
        let back = v.to_log();
        assert!((back[0] - 0.5).abs() < 1e-15);
        assert_eq!(back[1], f64::NEG_INFINITY);
        assert!((back[2] + 3.0).abs() < 1e-14);
        assert!((v.log_total() - log_sum_exp(logs)).abs() < 1e-15);
    }

    #[test]
    fn normalize_keeps_ones_exact() {
        let mut v = ScaledVec {
            values: vec![1.0, 0.0],
            log_scale: 0.0,
        };
        v.normalize();
        assert_eq!(v.log_scale, 0.0);
        assert_eq!(v.log_total(), 0.0);
    }
}
