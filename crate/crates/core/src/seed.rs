//! Seeds: coefficient families paired with positionings, the vectors they
//! generate, tail quantities, block sequences, and fundamental functions.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::norms::{abs_pow, garling_norm, root, selection_sup, validate_p, NormValue};
use crate::positioning::Positioning;
use crate::sparse::SparseVector;
use crate::weights::Weight;

/// Default width target for enclosures of truncated analytic families.
pub const DEFAULT_TAIL_TOL: f64 = 1e-9;

const MAX_TRUNCATION: usize = 1 << 20;

/// A coefficient family: an explicit finite list, or a power-decay family
/// `a_j = scale * j^{-beta}` whose p-power tails admit a closed-form bound.
#[derive(Clone, Debug)]
pub enum Coefficients {
    Finite(Vec<f64>),
    PowerDecay { scale: f64, beta: f64 },
}

impl Coefficients {
    pub fn at(&self, j: usize) -> f64 {
        assert!(j >= 1, "coefficient indices start at 1");
        match self {
            Coefficients::Finite(coefs) => coefs.get(j - 1).copied().unwrap_or(0.0),
            Coefficients::PowerDecay { scale, beta } => scale * (j as f64).powf(-beta),
        }
    }

    /// Length of the explicit list; `None` for analytic families.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            Coefficients::Finite(coefs) => Some(coefs.len()),
            Coefficients::PowerDecay { .. } => None,
        }
    }

    /// Certified bound on `sum_{j > j_from} |a_j|^p`.
    pub fn tail_ppower_bound(&self, j_from: usize, p: f64) -> Result<f64> {
        match self {
            Coefficients::Finite(coefs) => {
                Ok(coefs.iter().skip(j_from).map(|a| abs_pow(*a, p)).sum())
            }
            Coefficients::PowerDecay { scale, beta } => {
                let s = beta * p;
                if s <= 1.0 {
                    return Err(Error::NoTailCertificate(format!(
                        "power tail needs beta * p > 1, got {s}"
                    )));
                }
                let j = j_from.max(1) as f64;
                let integral = j.powf(1.0 - s) / (s - 1.0);
                let head = if j_from == 0 { abs_pow(*scale, p) } else { 0.0 };
                Ok(head + abs_pow(*scale, p) * integral)
            }
        }
    }
}

/// A coefficient family together with an insertion schedule.
#[derive(Debug)]
pub struct Seed {
    coefficients: Coefficients,
    positioning: Positioning,
}

impl Seed {
    pub fn new(coefficients: Coefficients, positioning: Positioning) -> Result<Self> {
        match &coefficients {
            Coefficients::Finite(coefs) => {
                if let Some(bad) = coefs.iter().find(|c| !c.is_finite()) {
                    return Err(Error::BadCoefficient { pos: "coefficient list".into(), coef: *bad });
                }
            }
            Coefficients::PowerDecay { scale, beta } => {
                if !scale.is_finite() || *scale == 0.0 || !(*beta > 0.0) {
                    return Err(Error::NoTailCertificate(format!(
                        "power family needs a nonzero scale and beta > 0, got scale = {scale}, beta = {beta}"
                    )));
                }
            }
        }
        Ok(Seed { coefficients, positioning })
    }

    /// The unit seed: `f = (1)` with the trivial positioning.
    pub fn unit() -> Self {
        Seed::new(Coefficients::Finite(vec![1.0]), Positioning::trivial()).expect("unit seed is valid")
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn positioning(&self) -> &Positioning {
        &self.positioning
    }

    pub fn is_proper(&self) -> bool {
        self.coefficients.at(1) != 0.0
    }
}

/// `u_{m,n} = sum_{j<=m} a_j s_{pi_n(j)}`, supported inside `{1..n}`.
pub fn u_vector(seed: &Seed, m: usize, n: usize) -> Result<SparseVector> {
    if m > n {
        return Err(Error::BadIndexPair { m, n });
    }
    let pi = seed.positioning().pi_prefix(n)?;
    SparseVector::from_entries(
        (1..=m).map(|j| (Dyadic::from_int(pi.forward(j) as i64), seed.coefficients().at(j))),
    )
}

/// `u_n = u_{n,n}`.
pub fn u_full(seed: &Seed, n: usize) -> Result<SparseVector> {
    u_vector(seed, n, n)
}

/// `u_n - u_{m,n}`: the coefficients `a_j` for `m < j <= n` at their
/// `pi_n` slots.
pub fn u_tail_vector(seed: &Seed, m: usize, n: usize) -> Result<SparseVector> {
    if m > n {
        return Err(Error::BadIndexPair { m, n });
    }
    let pi = seed.positioning().pi_prefix(n)?;
    SparseVector::from_entries(
        (m + 1..=n).map(|j| (Dyadic::from_int(pi.forward(j) as i64), seed.coefficients().at(j))),
    )
}

/// Coefficients `a_j` for `m < j <= j_max` listed in placement order.
///
/// The canonical placement `q_j` orders indices exactly as the final
/// permutation prefix does, so norms of placement vectors can be computed
/// on this list without materializing positions.
fn placement_ordered_coefficients(seed: &Seed, m: usize, j_max: usize) -> Result<Vec<f64>> {
    let pi = seed.positioning().pi_prefix(j_max)?;
    let mut slots: Vec<f64> = vec![0.0; j_max];
    for j in m + 1..=j_max {
        slots[pi.forward(j) - 1] = seed.coefficients().at(j);
    }
    Ok(slots.into_iter().filter(|c| *c != 0.0).collect())
}

fn truncation_for(seed: &Seed, m: usize) -> Result<usize> {
    match seed.coefficients().finite_len() {
        Some(len) => Ok(len.max(m)),
        None => Ok(MAX_TRUNCATION),
    }
}

/// `E_m`: the norm of the seed tail past coefficient `m`, evaluated through
/// the placement vector `sum_{j>m} a_j e_{q_j}`.
///
/// Exact for finite families. Analytic families are truncated at a level
/// whose certified tail keeps the enclosure width below `tol`; the upper
/// bound uses the triangle inequality for `p >= 1` and p-subadditivity for
/// `p < 1`.
pub fn e_tail_with_tol(seed: &Seed, m: usize, weight: &Weight, p: f64, tol: f64) -> Result<NormValue> {
    validate_p(p)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    if let Some(len) = seed.coefficients().finite_len() {
        if m >= len {
            return Ok(NormValue::exact(0.0));
        }
        let coefs = placement_ordered_coefficients(seed, m, len)?;
        let powers: Vec<f64> = coefs.iter().map(|c| abs_pow(*c, p)).collect();
        return Ok(NormValue::exact(root(selection_sup(&powers, weight, 0), p)));
    }

    let mut j = (m + 1).next_power_of_two().max(32);
    loop {
        let coefs = placement_ordered_coefficients(seed, m, j)?;
        let powers: Vec<f64> = coefs.iter().map(|c| abs_pow(*c, p)).collect();
        let trunc = root(selection_sup(&powers, weight, 0), p);
        let tail = seed.coefficients().tail_ppower_bound(j, p)?;
        let upper = enclose_upper(trunc, tail, p);
        if upper - trunc <= tol {
            return Ok(NormValue::interval(trunc, upper));
        }
        if j >= MAX_TRUNCATION {
            return Err(Error::NoTailCertificate(format!(
                "enclosure width {} still above {tol} at truncation {j}",
                upper - trunc
            )));
        }
        j *= 2;
    }
}

fn enclose_upper(trunc: f64, tail_ppower: f64, p: f64) -> f64 {
    if p >= 1.0 {
        trunc + root(tail_ppower, p)
    } else {
        root(abs_pow(trunc, p) + tail_ppower, p)
    }
}

pub fn e_tail(seed: &Seed, m: usize, weight: &Weight, p: f64) -> Result<NormValue> {
    e_tail_with_tol(seed, m, weight, p, DEFAULT_TAIL_TOL)
}

/// `E_0 = sup_n ||u_n||`.
pub fn e_zero(seed: &Seed, weight: &Weight, p: f64) -> Result<NormValue> {
    e_tail(seed, 0, weight, p)
}

/// A list of vectors with strictly increasing disjoint supports.
#[derive(Clone, Debug)]
pub struct BlockSequence {
    blocks: Vec<SparseVector>,
}

impl BlockSequence {
    fn new(blocks: Vec<SparseVector>) -> Self {
        debug_assert!(blocks.windows(2).all(|pair| {
            match (pair[0].max_position(), pair[1].min_position()) {
                (Some(a), Some(b)) => a < b,
                _ => true,
            }
        }));
        BlockSequence { blocks }
    }

    pub fn blocks(&self) -> &[SparseVector] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Union of the first `n` blocks.
    pub fn concat(&self, n: usize) -> Result<SparseVector> {
        let offsets = vec![Dyadic::zero(); n];
        SparseVector::disjoint_concat(&self.blocks[..n], &offsets)
    }
}

/// The block sequence of right-shifted `u_{n_k}`: block `k` is `u_{n_k}`
/// translated by `sum_{i<k} n_i`. The seed must be proper so that no block
/// vanishes.
pub fn block_sequence(seed: &Seed, nu: &[usize], count: usize) -> Result<BlockSequence> {
    if !seed.is_proper() {
        return Err(Error::ImproperSeed);
    }
    if count > nu.len() {
        return Err(Error::NotEnoughIndices { wanted: count, have: nu.len() });
    }
    for (i, pair) in nu.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(Error::NotStrictlyIncreasing(i + 1));
        }
    }
    let mut blocks = Vec::with_capacity(count);
    let mut offset: i64 = 0;
    for &n in &nu[..count] {
        let u = u_full(seed, n)?;
        blocks.push(u.translate(&Dyadic::from_int(offset)));
        offset += n as i64;
    }
    Ok(BlockSequence::new(blocks))
}

/// The rational-placement block sequence: block `k` carries `a_n` at
/// `k - 1 + q_n`, so consecutive blocks live in consecutive unit intervals
/// and are pairwise translates.
pub fn block_sequence_q(seed: &Seed, count: usize, tol: f64) -> Result<BlockSequence> {
    let j_max = match seed.coefficients().finite_len() {
        Some(len) => len,
        None => analytic_truncation_level(seed, count, tol)?,
    };
    let qs = seed.positioning().q_prefix(j_max)?;
    let base = SparseVector::from_entries(
        (1..=j_max).map(|j| (qs[j - 1].clone(), seed.coefficients().at(j))),
    )?;
    let blocks = (0..count).map(|k| base.translate(&Dyadic::from_int(k as i64))).collect();
    Ok(BlockSequence::new(blocks))
}

fn analytic_truncation_level(seed: &Seed, count: usize, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    // One tail per block; aim the total additive slack below tol.
    let per_block = tol / count.max(1) as f64;
    let mut j = 32usize;
    while seed.coefficients().tail_ppower_bound(j, 1.0).unwrap_or(f64::INFINITY) > per_block {
        if j >= MAX_TRUNCATION {
            return Err(Error::NoTailCertificate(format!(
                "truncation level for width {tol} exceeds {MAX_TRUNCATION}"
            )));
        }
        j *= 2;
    }
    Ok(j)
}

/// The fundamental function `Phi(n)`: the Garling norm of the union of the
/// first `n` rational-placement blocks. For the unit seed this is exactly
/// `W(n)^{1/p}`.
pub fn fundamental_function_with_tol(
    seed: &Seed,
    n: usize,
    weight: &Weight,
    p: f64,
    tol: f64,
) -> Result<NormValue> {
    validate_p(p)?;
    if n == 0 {
        return Ok(NormValue::exact(0.0));
    }
    match seed.coefficients().finite_len() {
        Some(len) => {
            let block = placement_ordered_coefficients(seed, 0, len)?;
            let powers = repeat_powers(&block, n, p);
            Ok(NormValue::exact(root(selection_sup(&powers, weight, 0), p)))
        }
        None => {
            let mut j = 64usize;
            loop {
                let block = placement_ordered_coefficients(seed, 0, j)?;
                let powers = repeat_powers(&block, n, p);
                let trunc = root(selection_sup(&powers, weight, 0), p);
                let tail = seed.coefficients().tail_ppower_bound(j, p)?;
                let upper = if p >= 1.0 {
                    trunc + n as f64 * root(tail, p)
                } else {
                    root(abs_pow(trunc, p) + n as f64 * tail, p)
                };
                if upper - trunc <= tol {
                    return Ok(NormValue::interval(trunc, upper));
                }
                if j >= MAX_TRUNCATION {
                    return Err(Error::NoTailCertificate(format!(
                        "enclosure width {} still above {tol} at truncation {j}",
                        upper - trunc
                    )));
                }
                j *= 2;
            }
        }
    }
}

pub fn fundamental_function(seed: &Seed, n: usize, weight: &Weight, p: f64) -> Result<NormValue> {
    fundamental_function_with_tol(seed, n, weight, p, DEFAULT_TAIL_TOL)
}

fn repeat_powers(block: &[f64], n: usize, p: f64) -> Vec<f64> {
    let mut powers = Vec::with_capacity(block.len() * n);
    for _ in 0..n {
        powers.extend(block.iter().map(|c| abs_pow(*c, p)));
    }
    powers
}

/// The perturbation gaps `E_{m_k}` along `mu`, with running sums of their
/// `min(1,p)`-th powers.
#[derive(Clone, Debug)]
pub struct PerturbationGaps {
    pub ms: Vec<usize>,
    pub gaps: Vec<NormValue>,
    pub cumulative_ppower: Vec<f64>,
}

pub fn perturbation_gaps(seed: &Seed, mu: &[usize], weight: &Weight, p: f64) -> Result<PerturbationGaps> {
    validate_p(p)?;
    let p_bar = p.min(1.0);
    let mut gaps = Vec::with_capacity(mu.len());
    let mut cumulative = Vec::with_capacity(mu.len());
    let mut running = 0.0f64;
    for &m in mu {
        let gap = e_tail(seed, m, weight, p)?;
        running += abs_pow(gap.value(), p_bar);
        gaps.push(gap);
        cumulative.push(running);
    }
    Ok(PerturbationGaps { ms: mu.to_vec(), gaps, cumulative_ppower: cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::garling_norm_bruteforce;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn finite_seed(coefs: &[f64], eta: Positioning) -> Seed {
        Seed::new(Coefficients::Finite(coefs.to_vec()), eta).unwrap()
    }

    #[test]
    fn u_vector_examples() {
        // trivial positioning: partial sums at positions 1..m
        let s = finite_seed(&[1.0, 0.5, 0.25], Positioning::trivial());
        let u = u_vector(&s, 2, 3).unwrap();
        assert_eq!(u.get(&d("1")), 1.0);
        assert_eq!(u.get(&d("2")), 0.5);
        assert_eq!(u.support_size(), 2);

        let s = finite_seed(&[1.0, 0.5], Positioning::constant_one());
        let u = u_full(&s, 2).unwrap();
        assert_eq!(u.get(&d("1")), 0.5);
        assert_eq!(u.get(&d("2")), 1.0);

        let s = finite_seed(&[0.7], Positioning::seeded_random(3));
        let u = u_full(&s, 1).unwrap();
        assert_eq!(u.get(&d("1")), 0.7);

        assert!(matches!(u_vector(&s, 2, 1), Err(Error::BadIndexPair { m: 2, n: 1 })));
    }

    #[test]
    fn e_tail_finite_examples() {
        let w = Weight::harmonic();
        let s = finite_seed(&[1.0, 0.1], Positioning::trivial());
        let e0 = e_tail(&s, 0, &w, 1.0).unwrap();
        assert!(e0.is_exact());
        assert_eq!(e0.value(), 1.05);
        assert_eq!(e_tail(&s, 1, &w, 1.0).unwrap().value(), 0.1);
        assert_eq!(e_tail(&s, 2, &w, 1.0).unwrap().value(), 0.0);
        assert_eq!(e_tail(&s, 7, &w, 1.0).unwrap().value(), 0.0);
    }

    #[test]
    fn e_zero_examples() {
        let w = Weight::harmonic();
        assert_eq!(e_zero(&finite_seed(&[1.0], Positioning::seeded_random(5)), &w, 1.0).unwrap().value(), 1.0);
        assert_eq!(e_zero(&finite_seed(&[1.0, 1.0], Positioning::trivial()), &w, 1.0).unwrap().value(), 1.5);
        // front insertion reverses the placement: oracle value is 1.0
        let s = finite_seed(&[1.0, 0.1], Positioning::constant_one());
        let oracle = garling_norm_bruteforce(
            &SparseVector::from_entries([(d("1/4"), 0.1), (d("1/2"), 1.0)]).unwrap(),
            &w,
            1.0,
        )
        .unwrap();
        assert_eq!(e_zero(&s, &w, 1.0).unwrap().value(), oracle);
        assert_eq!(oracle, 1.0);
    }

    #[test]
    fn e_tail_matches_direct_supremum() {
        let w = Weight::harmonic();
        let s = finite_seed(&[1.0, 0.3, 0.8, 0.05], Positioning::seeded_random(11));
        for m in 0..=4 {
            let via_placement = e_tail(&s, m, &w, 1.0).unwrap().value();
            let mut direct: f64 = 0.0;
            for n in m..=4 {
                let tail = u_tail_vector(&s, m, n).unwrap();
                direct = direct.max(garling_norm(&tail, &w, 1.0).unwrap().value());
            }
            assert!((via_placement - direct).abs() <= 1e-12 * direct.max(1.0), "m = {m}");
        }
    }

    #[test]
    fn analytic_tail_enclosures() {
        let w = Weight::harmonic();
        let s = Seed::new(
            Coefficients::PowerDecay { scale: 1.0, beta: 4.0 },
            Positioning::trivial(),
        )
        .unwrap();
        let e0 = e_tail_with_tol(&s, 0, &w, 1.0, 1e-6).unwrap();
        assert!(!e0.is_exact());
        assert!(e0.width() <= 1e-6);
        assert!(e0.lower() >= 1.0); // the first coefficient alone gives 1
        let e1 = e_tail_with_tol(&s, 1, &w, 1.0, 1e-6).unwrap();
        assert!(e1.upper() <= e0.upper());

        // beta * p <= 1 has no certificate
        let flat =
            Seed::new(Coefficients::PowerDecay { scale: 1.0, beta: 0.9 }, Positioning::trivial()).unwrap();
        assert!(matches!(e_tail(&flat, 0, &w, 1.0), Err(Error::NoTailCertificate(_))));
    }

    #[test]
    fn block_sequence_examples() {
        let s = Seed::unit();
        let blocks = block_sequence(&s, &[1, 2, 3], 3).unwrap();
        let positions: Vec<Dyadic> = blocks
            .blocks()
            .iter()
            .map(|b| b.min_position().unwrap().clone())
            .collect();
        assert_eq!(positions, vec![d("1"), d("2"), d("4")]);

        assert!(block_sequence(&s, &[1, 2, 3], 0).unwrap().is_empty());
        assert!(matches!(block_sequence(&s, &[2, 2], 2), Err(Error::NotStrictlyIncreasing(1))));
        let improper = finite_seed(&[0.0, 1.0], Positioning::trivial());
        assert!(matches!(block_sequence(&improper, &[1, 2], 2), Err(Error::ImproperSeed)));
    }

    #[test]
    fn block_sequence_q_examples() {
        let s = Seed::unit();
        let blocks = block_sequence_q(&s, 2, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(blocks.blocks()[0], SparseVector::unit(d("1/2")));
        assert_eq!(blocks.blocks()[1], SparseVector::unit(d("3/2")));

        let s = finite_seed(&[1.0, 0.1], Positioning::trivial());
        let blocks = block_sequence_q(&s, 1, DEFAULT_TAIL_TOL).unwrap();
        let b = &blocks.blocks()[0];
        assert_eq!(b.get(&d("1/2")), 1.0);
        assert_eq!(b.get(&d("3/4")), 0.1);

        // blocks are pairwise translates
        let blocks = block_sequence_q(&s, 3, DEFAULT_TAIL_TOL).unwrap();
        let shifted = blocks.blocks()[0].translate(&Dyadic::from_int(2));
        assert_eq!(shifted, blocks.blocks()[2]);
    }

    #[test]
    fn fundamental_function_examples() {
        let w = Weight::harmonic();
        let unit = Seed::unit();
        assert_eq!(fundamental_function(&unit, 2, &w, 1.0).unwrap().value(), 1.5);
        for n in [1usize, 3, 10, 100] {
            let phi = fundamental_function(&unit, n, &w, 1.0).unwrap().value();
            assert_eq!(phi, w.prefix_sum(n));
        }

        // one block reduces to E_0 by shift isometry
        let s = finite_seed(&[1.0, 0.4, 0.2], Positioning::seeded_random(2));
        let phi1 = fundamental_function(&s, 1, &w, 1.0).unwrap().value();
        assert_eq!(phi1, e_zero(&s, &w, 1.0).unwrap().value());

        // cross-check the repeated-list evaluation against the explicit
        // concatenated vector
        let s = finite_seed(&[1.0, 0.1], Positioning::trivial());
        let blocks = block_sequence_q(&s, 2, DEFAULT_TAIL_TOL).unwrap();
        let explicit = garling_norm(&blocks.concat(2).unwrap(), &w, 1.0).unwrap().value();
        let phi2 = fundamental_function(&s, 2, &w, 1.0).unwrap().value();
        assert_eq!(phi2, explicit);
        let oracle = garling_norm_bruteforce(&blocks.concat(2).unwrap(), &w, 1.0).unwrap();
        assert_eq!(phi2, oracle);
        assert!((phi2 - (1.0 + 0.5 + 0.1 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn perturbation_gap_examples() {
        let w = Weight::harmonic();
        let s = finite_seed(&[1.0, 0.1], Positioning::trivial());
        let gaps = perturbation_gaps(&s, &[1, 2], &w, 1.0).unwrap();
        assert_eq!(gaps.gaps[0].value(), 0.1);
        assert_eq!(gaps.gaps[1].value(), 0.0);
        assert_eq!(gaps.cumulative_ppower, vec![0.1, 0.1]);

        let all_zero = perturbation_gaps(&s, &[2, 3, 4], &w, 1.0).unwrap();
        assert!(all_zero.gaps.iter().all(|g| g.value() == 0.0));

        let e0 = perturbation_gaps(&s, &[0], &w, 1.0).unwrap();
        assert_eq!(e0.gaps[0].value(), e_zero(&s, &w, 1.0).unwrap().value());
    }
}
