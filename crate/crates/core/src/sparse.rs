//! Finitely supported vectors over exact dyadic positions.

use std::collections::{BTreeMap, BTreeSet};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A finite map from exact positions to nonzero real coefficients.
///
/// Entries iterate in position order, which is the order every norm kernel
/// consumes them in.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseVector {
    entries: BTreeMap<Dyadic, f64>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }

    /// Builds a vector from `(position, coefficient)` pairs. Zero
    /// coefficients are dropped; non-finite coefficients and repeated
    /// positions are rejected.
    pub fn from_entries(entries: impl IntoIterator<Item = (Dyadic, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (pos, coef) in entries {
            if !coef.is_finite() {
                return Err(Error::BadCoefficient { pos: pos.to_string(), coef });
            }
            if coef == 0.0 {
                continue;
            }
            if map.insert(pos.clone(), coef).is_some() {
                return Err(Error::DuplicatePosition(pos.to_string()));
            }
        }
        Ok(SparseVector { entries: map })
    }

    /// The unit vector at `pos`.
    pub fn unit(pos: Dyadic) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(pos, 1.0);
        SparseVector { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &Dyadic> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Dyadic, f64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn get(&self, pos: &Dyadic) -> f64 {
        self.entries.get(pos).copied().unwrap_or(0.0)
    }

    pub fn min_position(&self) -> Option<&Dyadic> {
        self.entries.keys().next()
    }

    pub fn max_position(&self) -> Option<&Dyadic> {
        self.entries.keys().next_back()
    }

    /// Coefficients in increasing position order.
    pub fn coefficients(&self) -> Vec<f64> {
        self.entries.values().copied().collect()
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        SparseVector::from_entries(self.iter().map(|(p, c)| (p.clone(), c * factor)))
    }

    /// Repositions every entry along `map`, which must be strictly
    /// increasing on the support.
    pub fn shift(&self, mut map: impl FnMut(&Dyadic) -> Dyadic) -> Result<Self> {
        let mut out = BTreeMap::new();
        let mut prev: Option<Dyadic> = None;
        for (pos, coef) in self.entries.iter() {
            let target = map(pos);
            if let Some(p) = &prev {
                if target <= *p {
                    return Err(Error::NonMonotoneMap(pos.to_string()));
                }
            }
            prev = Some(target.clone());
            out.insert(target, *coef);
        }
        Ok(SparseVector { entries: out })
    }

    /// Translation, the shift along `q -> q + offset`.
    pub fn translate(&self, offset: &Dyadic) -> Self {
        let entries = self.entries.iter().map(|(p, c)| (p + offset, *c)).collect();
        SparseVector { entries }
    }

    /// Coordinate projection onto the position set `keep`.
    pub fn project(&self, keep: &BTreeSet<Dyadic>) -> Self {
        let entries =
            self.entries.iter().filter(|(p, _)| keep.contains(p)).map(|(p, c)| (p.clone(), *c)).collect();
        SparseVector { entries }
    }

    /// `true` when `|self| <= |other|` entrywise.
    pub fn dominated_by(&self, other: &SparseVector) -> bool {
        self.entries.iter().all(|(p, c)| c.abs() <= other.get(p).abs())
    }

    /// Union of the blocks translated by the matching offsets. The
    /// translated supports must be pairwise disjoint.
    pub fn disjoint_concat(blocks: &[SparseVector], offsets: &[Dyadic]) -> Result<Self> {
        assert_eq!(blocks.len(), offsets.len(), "one offset per block");
        let mut entries = BTreeMap::new();
        for (block, offset) in blocks.iter().zip(offsets) {
            for (pos, coef) in block.entries.iter() {
                let target = pos + offset;
                if entries.insert(target.clone(), *coef).is_some() {
                    return Err(Error::BlockOverlap(target.to_string()));
                }
            }
        }
        Ok(SparseVector { entries })
    }
}

/// Moduli of `values` sorted in non-increasing order.
pub fn nonincreasing_rearrangement(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    out.sort_by(|a, b| b.partial_cmp(a).expect("finite coefficients"));
    out
}
