//! Desk-scale runners for the quantitative constructions: translation
//! limits, the non-symmetry witness, finite `l_inf` tuples, and the binary
//! tree of fundamental functions.

pub mod linf;
pub mod nonsym;
pub mod steve;
pub mod tree;

use crate::error::{Error, Result};
use crate::norms::{garling_norm, garling_norm_ppower};
use crate::seed::{block_sequence_q, Seed, DEFAULT_TAIL_TOL};
use crate::sparse::SparseVector;
use crate::weights::Weight;

/// The normalized block averages `z_n = Phi(n)^{-1} sum_{k<=n} y_k`, where
/// `(y_k)` is the seed's rational-placement block sequence. Each `z_n` has
/// unit Garling norm, support in `(0, n)`, and sup norm `1 / Phi(n)`.
pub struct BlockAverageFamily<'a> {
    seed: &'a Seed,
    weight: &'a Weight,
    p: f64,
}

impl<'a> BlockAverageFamily<'a> {
    pub fn new(seed: &'a Seed, weight: &'a Weight, p: f64) -> Self {
        BlockAverageFamily { seed, weight, p }
    }

    /// Whether every block of the seed is a single entry, so `z_n` consists
    /// of `n` equal coefficients. Search prefilters rely on this shape.
    pub fn has_uniform_blocks(&self) -> bool {
        self.seed.coefficients().finite_len() == Some(1)
    }

    pub fn vector(&self, n: usize) -> Result<SparseVector> {
        let blocks = block_sequence_q(self.seed, n, DEFAULT_TAIL_TOL)?;
        let raw = blocks.concat(n)?;
        let norm = garling_norm(&raw, self.weight, self.p)?.value();
        raw.scale(norm.recip())
    }

    /// `|| sum_{k<=n} y_k ||_g` before normalization.
    pub fn raw_norm(&self, n: usize) -> Result<f64> {
        let blocks = block_sequence_q(self.seed, n, DEFAULT_TAIL_TOL)?;
        Ok(garling_norm(&blocks.concat(n)?, self.weight, self.p)?.value())
    }
}

pub(crate) fn require_unit_norm(z: &SparseVector, n: usize, weight: &Weight, p: f64) -> Result<()> {
    let norm = garling_norm(z, weight, p)?.value();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { n, norm });
    }
    Ok(())
}

pub(crate) fn ppower(x: &SparseVector, weight: &Weight, p: f64) -> Result<f64> {
    garling_norm_ppower(x, weight, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::sup_norm;

    #[test]
    fn unit_seed_averages_are_normalized() {
        let w = Weight::harmonic();
        let seed = Seed::unit();
        let family = BlockAverageFamily::new(&seed, &w, 1.0);
        assert!(family.has_uniform_blocks());
        for n in [1usize, 2, 7, 64] {
            let z = family.vector(n).unwrap();
            assert_eq!(z.support_size(), n);
            let norm = garling_norm(&z, &w, 1.0).unwrap().value();
            assert!((norm - 1.0).abs() <= 1e-12);
            assert!((sup_norm(&z) - w.prefix_sum(n).recip()).abs() <= 1e-12);
        }
    }
}
