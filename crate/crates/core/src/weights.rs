//! Admissible weight families: normalized, non-increasing, vanishing, and
//! non-summable.
//!
//! Vanishing and divergence of the sum cannot be observed on a finite
//! prefix, so weights are analytic families that certify both: power decay
//! `w_j = j^{-alpha}` with `alpha` in (0, 1], optionally preceded by an
//! explicit prefix that hands over to a scaled power tail.

use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Family {
    Power { alpha: f64 },
    Custom { prefix: Vec<f64>, tail_alpha: f64 },
}

/// A weight family together with memoized prefix sums.
///
/// Immutable after construction; the prefix-sum cache is internally
/// synchronized so instances can be shared across threads.
#[derive(Debug)]
pub struct Weight {
    family: Family,
    // cache[n] = W(n); extended on demand by the plain chained recurrence
    // cache[n] = cache[n-1] + w_n, which makes W(n+1) - W(n) = w_{n+1} an
    // exact f64 identity.
    cache: Mutex<Vec<f64>>,
}

impl Weight {
    /// `w_j = j^{-alpha}` for `alpha` in (0, 1].
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::BadWeight(format!("power exponent {alpha} outside (0, 1]")));
        }
        Ok(Weight { family: Family::Power { alpha }, cache: Mutex::new(vec![0.0]) })
    }

    /// The harmonic family `w_j = 1/j`.
    pub fn harmonic() -> Self {
        Weight::power(1.0).expect("alpha = 1 is admissible")
    }

    /// An explicit positive non-increasing prefix starting at 1, continued by
    /// the scaled power tail `w_{L+k} = prefix[L] * (L / (L+k))^alpha`.
    pub fn custom(prefix: Vec<f64>, tail_alpha: f64) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::BadWeight("custom prefix is empty".into()));
        }
        if prefix[0] != 1.0 {
            return Err(Error::BadWeight(format!("w_1 must be 1, got {}", prefix[0])));
        }
        for pair in prefix.windows(2) {
            if !(pair[1] > 0.0 && pair[1] <= pair[0] && pair[1].is_finite()) {
                return Err(Error::BadWeight(format!(
                    "prefix must be positive and non-increasing, found {} after {}",
                    pair[1], pair[0]
                )));
            }
        }
        if !(tail_alpha > 0.0 && tail_alpha <= 1.0) {
            return Err(Error::BadWeight(format!("tail exponent {tail_alpha} outside (0, 1]")));
        }
        Ok(Weight { family: Family::Custom { prefix, tail_alpha }, cache: Mutex::new(vec![0.0]) })
    }

    /// `w_j`. Indices start at 1.
    pub fn at(&self, j: usize) -> f64 {
        assert!(j >= 1, "weight indices start at 1");
        match &self.family {
            Family::Power { alpha } => power_weight(j, *alpha),
            Family::Custom { prefix, tail_alpha } => {
                if j <= prefix.len() {
                    prefix[j - 1]
                } else {
                    let l = prefix.len() as f64;
                    prefix[prefix.len() - 1] * (l / j as f64).powf(*tail_alpha)
                }
            }
        }
    }

    /// `W(N) = sum_{j<=N} w_j`, with `W(0) = 0`.
    pub fn prefix_sum(&self, n: usize) -> f64 {
        let mut cache = self.cache.lock().expect("weight cache poisoned");
        if cache.len() <= n {
            cache.reserve(n + 1 - cache.len());
            for j in cache.len()..=n {
                let next = cache[j - 1] + self.at(j);
                cache.push(next);
            }
        }
        cache[n]
    }

    /// The partial telescoping sum `sum_{i<=I} (w_i - w_{i+N})` together with
    /// the exact remainder `sum_{j<=N} w_{I+j}`, so that
    /// `partial + remainder = W(N)` up to rounding.
    ///
    /// Both sums are compensated; the partial one runs over up to `I` terms.
    pub fn identity_partial(&self, n: usize, i: usize) -> (f64, f64) {
        let partial = neumaier_sum((1..=i).map(|t| self.at(t) - self.at(t + n)));
        let remainder = neumaier_sum((1..=n).map(|j| self.at(i + j)));
        (partial, remainder)
    }
}

fn power_weight(j: usize, alpha: f64) -> f64 {
    if alpha == 1.0 {
        1.0 / j as f64
    } else {
        (j as f64).powf(-alpha)
    }
}

/// Compensated (Neumaier) summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_values() {
        let w = Weight::harmonic();
        assert_eq!(w.at(1), 1.0);
        assert_eq!(w.at(4), 0.25);
        let half = Weight::power(0.5).unwrap();
        assert_eq!(half.at(4), 0.5);
    }

    #[test]
    fn custom_prefix_reads_then_decays() {
        let w = Weight::custom(vec![1.0, 0.9], 1.0).unwrap();
        assert_eq!(w.at(1), 1.0);
        assert_eq!(w.at(2), 0.9);
        // tail: w_3 = 0.9 * 2/3
        assert!((w.at(3) - 0.6).abs() < 1e-15);
        assert!(w.at(3) >= w.at(4));
    }

    #[test]
    fn admissibility_checks() {
        assert!(Weight::power(0.0).is_err());
        assert!(Weight::power(1.5).is_err());
        assert!(Weight::custom(vec![0.9], 1.0).is_err());
        assert!(Weight::custom(vec![1.0, 1.1], 1.0).is_err());
        assert!(Weight::custom(vec![1.0, -0.1], 1.0).is_err());
    }

    #[test]
    #[should_panic]
    fn index_zero_rejected() {
        Weight::harmonic().at(0);
    }

    #[test]
    fn prefix_sums() {
        let w = Weight::harmonic();
        assert_eq!(w.prefix_sum(0), 0.0);
        assert_eq!(w.prefix_sum(1), 1.0);
        let expected = 1.0 + 0.5 + 1.0 / 3.0 + 0.25 + 0.2;
        assert_eq!(w.prefix_sum(5), expected);
    }

    #[test]
    fn prefix_sum_increment_is_exact() {
        let w = Weight::harmonic();
        for n in [0usize, 1, 7, 100, 999] {
            assert_eq!(w.prefix_sum(n + 1), w.prefix_sum(n) + w.at(n + 1));
        }
    }

    #[test]
    fn weight_identity_examples() {
        let w = Weight::harmonic();
        let (partial, remainder) = w.identity_partial(1, 1);
        assert_eq!(partial, 0.5);
        assert_eq!(remainder, 0.5);

        let (partial, remainder) = w.identity_partial(3, 0);
        assert_eq!(partial, 0.0);
        assert!((remainder - w.prefix_sum(3)).abs() <= 1e-12 * w.prefix_sum(3));

        // remainder bound: sum_{j<=5} w_{1000+j} <= 5 w_1001
        let (partial, _) = w.identity_partial(5, 1000);
        assert!((partial - w.prefix_sum(5)).abs() <= 5.0 * w.at(1001));
    }

    #[test]
    fn weight_at_nonincreasing_on_prefix() {
        for w in [Weight::harmonic(), Weight::power(0.5).unwrap(), Weight::custom(vec![1.0, 0.8, 0.8], 0.7).unwrap()] {
            let mut prev = f64::INFINITY;
            for j in 1..=4096 {
                let v = w.at(j);
                assert!(v > 0.0 && v <= prev, "w_{j} = {v} after {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn cache_shared_between_threads() {
        let w = std::sync::Arc::new(Weight::harmonic());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let w = w.clone();
                std::thread::spawn(move || w.prefix_sum(5000))
            })
            .collect();
        let values: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(values.windows(2).all(|v| v[0] == v[1]));
    }
}
