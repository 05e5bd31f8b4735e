//! Bigraded stem charts assembled from K-theory, Ext and free bases.
//!
//! Charts are indexed by `(stem, weight)`. `K^MW_m` sits at `(-m, -m)`,
//! `τ` at `(0, -1)`, a Lazard generator of degree `d` at `(2d, d)`, and an
//! Ext class in `(s, t)` at `(t - s, t/2)`.

pub mod mgl;
pub mod synthetic;
pub mod tensor;

use serde::{Deserialize, Serialize};

pub use mgl::{anss_e1, mgl_homotopy, morel_zero_line, completed_zero_line};
pub use synthetic::{
    degeneration_range, stem_sources, synthetic_stems, milnor_witt_row, SyntheticChart, SyntheticSource,
    SyntheticTable, TableOrder,
};
pub use tensor::tensor_formula;

/// A rectangle of bidegrees; empty when either side is reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub stems: (i64, i64),
    pub weights: (i64, i64),
}

impl Window {
    pub fn new(stems: (i64, i64), weights: (i64, i64)) -> Self {
        Window { stems, weights }
    }

    pub fn is_empty(&self) -> bool {
        self.stems.0 > self.stems.1 || self.weights.0 > self.weights.1
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        (self.stems.0..=self.stems.1).contains(&i) && (self.weights.0..=self.weights.1).contains(&j)
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.stems.0..=self.stems.1).flat_map(move |i| (self.weights.0..=self.weights.1).map(move |j| (i, j)))
    }
}
