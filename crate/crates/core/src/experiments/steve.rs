//! Translation-limit tables: appending a far right translate to a
//! vanishing-sup family drives the norm to `max{1, ||x||}`, while appending
//! a vanishing-sup family to a fixed left part drives it to
//! `(1 + ||x||^p)^{1/p}`.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::norms::{abs_pow, garling_norm, root};
use crate::sparse::SparseVector;
use crate::weights::Weight;

use super::{require_unit_norm, BlockAverageFamily};

#[derive(Clone, Copy, Debug)]
pub struct SteveRow {
    pub n: usize,
    pub value: f64,
}

/// `|| z_n + translate(x, n) ||_g` for each `n`.
///
/// `x` must be supported in `[0, inf)`. Each `z_n` must have unit norm and
/// is emitted with support in `(-n, 0)`, to the left of every translate.
pub fn steve1_run(
    x: &SparseVector,
    family: &BlockAverageFamily<'_>,
    n_values: &[usize],
    weight: &Weight,
    p: f64,
) -> Result<Vec<SteveRow>> {
    if let Some(min) = x.min_position() {
        if min.is_negative() {
            return Err(Error::SupportOutOfRange { expected: "[0, inf)".into(), found: min.to_string() });
        }
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let z = family.vector(n)?.translate(&Dyadic::from_int(-(n as i64)));
        require_unit_norm(&z, n, weight, p)?;
        let shifted = x.translate(&Dyadic::from_int(n as i64));
        let combined = SparseVector::disjoint_concat(&[z, shifted], &[Dyadic::zero(), Dyadic::zero()])?;
        rows.push(SteveRow { n, value: garling_norm(&combined, weight, p)?.value() });
    }
    Ok(rows)
}

/// The limit `max{1, ||x||_g}` of the first table.
pub fn steve1_limit(x: &SparseVector, weight: &Weight, p: f64) -> Result<f64> {
    Ok(garling_norm(x, weight, p)?.value().max(1.0))
}

/// `|| x + translate(z_n, m) ||_g` for each `n`, where `m` is the smallest
/// integer bounding `supp(x)` from above.
pub fn steve2_run(
    x: &SparseVector,
    family: &BlockAverageFamily<'_>,
    n_values: &[usize],
    weight: &Weight,
    p: f64,
) -> Result<Vec<SteveRow>> {
    let m = match x.max_position() {
        Some(max) => max.ceil_i64().ok_or_else(|| Error::SupportOutOfRange {
            expected: "bounded above".into(),
            found: max.to_string(),
        })?,
        None => 0,
    };
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let z = family.vector(n)?;
        if let Some(min) = z.min_position() {
            if min.is_negative() {
                return Err(Error::SupportOutOfRange { expected: "[0, inf)".into(), found: min.to_string() });
            }
        }
        require_unit_norm(&z, n, weight, p)?;
        let shifted = z.translate(&Dyadic::from_int(m));
        let combined = SparseVector::disjoint_concat(&[x.clone(), shifted], &[Dyadic::zero(), Dyadic::zero()])?;
        rows.push(SteveRow { n, value: garling_norm(&combined, weight, p)?.value() });
    }
    Ok(rows)
}

/// The limit `(1 + ||x||_g^p)^{1/p}` of the second table.
pub fn steve2_limit(x: &SparseVector, weight: &Weight, p: f64) -> Result<f64> {
    let norm = garling_norm(x, weight, p)?.value();
    Ok(root(1.0 + abs_pow(norm, p), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn steve1_zero_vector_rows_are_one() {
        let w = Weight::harmonic();
        let seed = Seed::unit();
        let family = BlockAverageFamily::new(&seed, &w, 1.0);
        let rows = steve1_run(&SparseVector::new(), &family, &[1, 4, 16], &w, 1.0).unwrap();
        for row in rows {
            assert!((row.value - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn steve1_unit_entry_approaches_one_from_above() {
        let w = Weight::harmonic();
        let seed = Seed::unit();
        let family = BlockAverageFamily::new(&seed, &w, 1.0);
        let x = SparseVector::unit(d("1/2"));
        let rows = steve1_run(&x, &family, &[1, 4, 16, 64, 256], &w, 1.0).unwrap();
        let limit = steve1_limit(&x, &w, 1.0).unwrap();
        assert_eq!(limit, 1.0);
        for row in &rows {
            assert!(row.value >= limit - 1e-9, "lower bound at n = {}", row.n);
        }
        // independent closed form for equal-coefficient averages:
        // max_t [W(t)/W(n) + w_{t+1}] (all-z prefix, then the unit entry)
        for row in &rows {
            let n = row.n;
            let mut expected: f64 = 1.0;
            for t in 0..=n {
                expected = expected.max(w.prefix_sum(t) / w.prefix_sum(n) + w.at(t + 1));
            }
            assert!((row.value - expected).abs() <= 1e-12, "n = {n}");
        }
        let last = rows.last().unwrap();
        assert!((last.value - limit).abs() <= w.at(last.n + 1) + 1e-12);
    }

    #[test]
    fn steve1_rejects_negative_support() {
        let w = Weight::harmonic();
        let seed = Seed::unit();
        let family = BlockAverageFamily::new(&seed, &w, 1.0);
        let x = SparseVector::unit(d("-1/2"));
        assert!(matches!(
            steve1_run(&x, &family, &[1], &w, 1.0),
            Err(Error::SupportOutOfRange { .. })
        ));
    }

    #[test]
    fn steve2_zero_vector_rows_are_one() {
        let w = Weight::harmonic();
        let seed = Seed::unit();
        let family = BlockAverageFamily::new(&seed, &w, 1.0);
        let rows = steve2_run(&SparseVector::new(), &family, &[1, 4, 16], &w, 1.0).unwrap();
        for row in rows {
            assert!((row.value - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn steve2_unit_entry_matches_closed_form_and_upper_bound() {
        let w = Weight::harmonic();
        let seed = Seed::unit();
        let family = BlockAverageFamily::new(&seed, &w, 1.0);
        let x = SparseVector::unit(d("1/2"));
        let limit = steve2_limit(&x, &w, 1.0).unwrap();
        assert_eq!(limit, 2.0);
        let rows = steve2_run(&x, &family, &[1, 4, 16, 64], &w, 1.0).unwrap();
        for row in &rows {
            // x takes the first slot, then the whole average chain
            let expected = 1.0 + (w.prefix_sum(row.n + 1) - 1.0) / w.prefix_sum(row.n);
            assert!((row.value - expected).abs() <= 1e-12, "n = {}", row.n);
            assert!(row.value <= limit + 1e-9);
        }
        assert!(rows.windows(2).all(|r| r[0].value <= r[1].value + 1e-12));
    }
}
