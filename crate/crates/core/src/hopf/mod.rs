//! Hopf algebroids, cobar complexes and Adams–Novikov Ext.

pub mod adams;
pub mod algebroid;
pub mod cobar;
pub mod ext;
pub mod linalg;

pub use adams::{adams_projection, adams_summand_coefficients, AdamsProjection, GradedRanks};
pub use algebroid::{algebroid_recipes, build_algebroid, universal_gamma, AlgebroidKind, AlgebroidRecipe, HopfAlgebroid};
pub use cobar::{cobar_complex, CobarComplex, CobarSlice};
pub use ext::{ext_chart, ext_chart_with, ExtChart, ExtOptions, DEFAULT_PRECISION};
