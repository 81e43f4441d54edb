//! Positionings: insertion schedules, their permutation prefixes, the
//! canonical compatible rational placement, and greedy orderings.
//!
//! A positioning is a sequence `(d_n)` with `1 <= d_n <= n`. Each step
//! inserts element `n` at rank `d_n`: existing ranks at or above `d_n` move
//! up by one. The induced permutation prefixes `pi_n` determine a relative
//! order into which rational placements must fit; the canonical placement
//! `q_n` halves the gap between the neighbors at ranks `d_n - 1` and `d_n`,
//! with the conventions `q = 0` below rank 1 and `q = 1` above rank `n`.

use std::sync::Mutex;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

#[derive(Debug, Clone)]
enum Generator {
    Trivial,
    ConstantOne,
    Explicit(Vec<usize>),
    /// Draws `d_n` uniformly from `1..=n` in order, from a ChaCha8 stream.
    SeededRandom(u64),
}

#[derive(Debug)]
struct Realized {
    ds: Vec<usize>,
    /// Current prefix `pi_n`: forward[j-1] = pi_n(j).
    forward: Vec<usize>,
    /// inverse[v-1] = the j with pi_n(j) = v.
    inverse: Vec<usize>,
    qs: Vec<Dyadic>,
    rng: Option<ChaCha8Rng>,
}

/// An insertion schedule with a lazily realized prefix.
///
/// Extension of the prefix is serialized per instance; realized values never
/// change afterwards, so concurrent readers see a consistent sequence.
#[derive(Debug)]
pub struct Positioning {
    generator: Generator,
    state: Mutex<Realized>,
}

impl Positioning {
    fn with_generator(generator: Generator) -> Self {
        let rng = match &generator {
            Generator::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        Positioning {
            generator,
            state: Mutex::new(Realized {
                ds: Vec::new(),
                forward: Vec::new(),
                inverse: Vec::new(),
                qs: Vec::new(),
                rng,
            }),
        }
    }

    /// `d_n = n`: every coefficient lands at the right end.
    pub fn trivial() -> Self {
        Positioning::with_generator(Generator::Trivial)
    }

    /// `d_n = 1`: every coefficient lands at the front.
    pub fn constant_one() -> Self {
        Positioning::with_generator(Generator::ConstantOne)
    }

    pub fn explicit(ds: Vec<usize>) -> Result<Self> {
        for (i, &d) in ds.iter().enumerate() {
            let n = i + 1;
            if d < 1 || d > n {
                return Err(Error::BadPositioningEntry { n, d });
            }
        }
        Ok(Positioning::with_generator(Generator::Explicit(ds)))
    }

    pub fn seeded_random(seed: u64) -> Self {
        Positioning::with_generator(Generator::SeededRandom(seed))
    }

    /// Realizes the prefix up to `n` under the lock.
    fn realize(&self, state: &mut Realized, n: usize) -> Result<()> {
        while state.ds.len() < n {
            let step = state.ds.len() + 1;
            let d = match &self.generator {
                Generator::Trivial => step,
                Generator::ConstantOne => 1,
                Generator::Explicit(ds) => {
                    *ds.get(step - 1).ok_or(Error::PositioningExhausted { len: ds.len(), wanted: n })?
                }
                Generator::SeededRandom(_) => {
                    let rng = state.rng.as_mut().expect("seeded generator has an rng");
                    rng.gen_range(1..=step)
                }
            };
            debug_assert!((1..=step).contains(&d));

            // q_step from pi_{step-1}: neighbors at ranks d-1 and d.
            let q_lo = if d == 1 { Dyadic::zero() } else { state.qs[state.inverse[d - 2] - 1].clone() };
            let q_hi = if d == step { Dyadic::one() } else { state.qs[state.inverse[d - 1] - 1].clone() };
            state.qs.push(Dyadic::midpoint(&q_lo, &q_hi));

            // Insertion: ranks >= d move up, element `step` takes rank d.
            for rank in state.forward.iter_mut() {
                if *rank >= d {
                    *rank += 1;
                }
            }
            state.forward.push(d);
            state.inverse.insert(d - 1, step);
            state.ds.push(d);
        }
        Ok(())
    }

    pub fn d(&self, n: usize) -> Result<usize> {
        assert!(n >= 1, "positioning indices start at 1");
        let mut state = self.state.lock().expect("positioning state poisoned");
        self.realize(&mut state, n)?;
        Ok(state.ds[n - 1])
    }

    pub fn d_prefix(&self, n: usize) -> Result<Vec<usize>> {
        let mut state = self.state.lock().expect("positioning state poisoned");
        self.realize(&mut state, n)?;
        Ok(state.ds[..n].to_vec())
    }

    /// The permutation prefix `pi_n`, replayed from the realized schedule.
    pub fn pi_prefix(&self, n: usize) -> Result<PermutationPrefix> {
        let ds = self.d_prefix(n)?;
        Ok(PermutationPrefix::from_schedule(&ds))
    }

    /// All prefixes `pi_1, ..., pi_n` in one replay.
    pub fn pi_prefixes(&self, n: usize) -> Result<Vec<PermutationPrefix>> {
        let ds = self.d_prefix(n)?;
        let mut forward: Vec<usize> = Vec::with_capacity(n);
        let mut out = Vec::with_capacity(n);
        for (i, &d) in ds.iter().enumerate() {
            insert_step(&mut forward, d);
            out.push(PermutationPrefix::from_forward(forward.clone()).expect("valid by construction"));
            debug_assert_eq!(forward.len(), i + 1);
        }
        Ok(out)
    }

    /// The canonical compatible placement value `q_n`, an exact dyadic in
    /// (0, 1).
    pub fn q(&self, n: usize) -> Result<Dyadic> {
        assert!(n >= 1, "positioning indices start at 1");
        let mut state = self.state.lock().expect("positioning state poisoned");
        self.realize(&mut state, n)?;
        Ok(state.qs[n - 1].clone())
    }

    pub fn q_prefix(&self, n: usize) -> Result<Vec<Dyadic>> {
        let mut state = self.state.lock().expect("positioning state poisoned");
        self.realize(&mut state, n)?;
        Ok(state.qs[..n].to_vec())
    }
}

fn insert_step(forward: &mut Vec<usize>, d: usize) {
    for rank in forward.iter_mut() {
        if *rank >= d {
            *rank += 1;
        }
    }
    forward.push(d);
}

/// A permutation of `{1..n}` stored with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationPrefix {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl PermutationPrefix {
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![0usize; n];
        for (j, &v) in forward.iter().enumerate() {
            if v < 1 || v > n || inverse[v - 1] != 0 {
                return Err(Error::InconsistentPrefixes { at: n });
            }
            inverse[v - 1] = j + 1;
        }
        Ok(PermutationPrefix { forward, inverse })
    }

    fn from_schedule(ds: &[usize]) -> Self {
        let mut forward = Vec::with_capacity(ds.len());
        for &d in ds {
            insert_step(&mut forward, d);
        }
        let prefix = PermutationPrefix::from_forward(forward).expect("insertion yields a bijection");
        prefix
    }

    pub fn n(&self) -> usize {
        self.forward.len()
    }

    /// `pi_n(j)`.
    pub fn forward(&self, j: usize) -> usize {
        self.forward[j - 1]
    }

    /// The `j` with `pi_n(j) = v`.
    pub fn inverse(&self, v: usize) -> usize {
        self.inverse[v - 1]
    }

    pub fn forward_slice(&self) -> &[usize] {
        &self.forward
    }
}

/// Recovers the unique schedule behind a run of permutation prefixes
/// (`pi_1, ..., pi_N`), rejecting prefixes that no insertion run produces.
///
/// Since `pi_n` is a bijection of `{1..n}`, the count
/// `|{j : pi_n(j) <= pi_n(n)}|` is `pi_n(n)` itself.
pub fn positioning_from_pi(prefixes: &[PermutationPrefix]) -> Result<Positioning> {
    let mut ds = Vec::with_capacity(prefixes.len());
    for (i, prefix) in prefixes.iter().enumerate() {
        let n = i + 1;
        if prefix.n() != n {
            return Err(Error::InconsistentPrefixes { at: n });
        }
        ds.push(prefix.forward(n));
    }
    // Replay and require an exact match of every prefix.
    let mut forward: Vec<usize> = Vec::new();
    for (i, &d) in ds.iter().enumerate() {
        insert_step(&mut forward, d);
        if forward != prefixes[i].forward_slice() {
            return Err(Error::InconsistentPrefixes { at: i + 1 });
        }
    }
    Positioning::explicit(ds)
}

/// The unique positioning a one-to-one finite placement is compatible with:
/// `d_n = |{j <= n : r_j <= r_n}|`.
pub fn positioning_from_ranks(ranks: &[Dyadic]) -> Result<Positioning> {
    let mut ds = Vec::with_capacity(ranks.len());
    for (n, r_n) in ranks.iter().enumerate() {
        let mut d = 0usize;
        for (j, r_j) in ranks[..=n].iter().enumerate() {
            if j != n && r_j == r_n {
                return Err(Error::DuplicateRank(n));
            }
            if r_j <= r_n {
                d += 1;
            }
        }
        ds.push(d);
    }
    Positioning::explicit(ds)
}

/// Whether the placement `ranks` is compatible with `eta`: `r_i < r_j`
/// whenever `pi_n(i) < pi_n(j)` for every prefix length `n <= |ranks|`.
///
/// Insertion preserves the relative order of existing elements, so checking
/// the longest prefix covers all shorter ones.
pub fn is_compatible(ranks: &[Dyadic], eta: &Positioning) -> Result<bool> {
    let n = ranks.len();
    if n == 0 {
        return Ok(true);
    }
    let prefix = eta.pi_prefix(n)?;
    for v in 1..n {
        let i = prefix.inverse(v);
        let j = prefix.inverse(v + 1);
        if ranks[i - 1] >= ranks[j - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The greedy ordering of a finite vector: support positions enumerated by
/// non-increasing coefficient modulus, ties broken by position order.
#[derive(Clone, Debug)]
pub struct GreedyOrdering {
    order: Vec<Dyadic>,
}

impl GreedyOrdering {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `rho(j)`, 1-indexed.
    pub fn position(&self, j: usize) -> &Dyadic {
        &self.order[j - 1]
    }

    pub fn positions(&self) -> &[Dyadic] {
        &self.order
    }
}

pub fn greedy_ordering(x: &SparseVector) -> GreedyOrdering {
    let mut order: Vec<(Dyadic, f64)> = x.iter().map(|(p, c)| (p.clone(), c.abs())).collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite coefficients").then_with(|| a.0.cmp(&b.0)));
    GreedyOrdering { order: order.into_iter().map(|(p, _)| p).collect() }
}

/// The restriction of `x` to its `n`th greedy set.
pub fn greedy_sum(x: &SparseVector, n: usize) -> Result<SparseVector> {
    let ordering = greedy_ordering(x);
    if n > ordering.len() {
        return Err(Error::GreedyIndexTooLarge { n, support: ordering.len() });
    }
    let keep: std::collections::BTreeSet<Dyadic> = ordering.positions()[..n].iter().cloned().collect();
    Ok(x.project(&keep))
}

/// The positioning realized by greedy growth: `d_n` is the rank of `rho(n)`
/// inside the `n`th greedy set.
pub fn greedy_positioning(x: &SparseVector) -> Result<Positioning> {
    let ordering = greedy_ordering(x);
    let mut ds = Vec::with_capacity(ordering.len());
    for n in 1..=ordering.len() {
        let newest = ordering.position(n);
        let rank = ordering.positions()[..n].iter().filter(|p| *p <= newest).count();
        ds.push(rank);
    }
    Positioning::explicit(ds)
}
