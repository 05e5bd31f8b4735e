//! Truncated formal group laws.

pub mod law;
pub mod presentation;
pub mod ptypical;
pub mod universal;

pub use law::{FormalGroupLaw, SeriesOp, TruncatedSeries};
pub use presentation::{Base, Generator, GradedRingPresentation};
pub use ptypical::{hazewinkel_logs, p_typical_reduction, PTypical};
pub use universal::{lazard_data, universal_fgl, LazardData};

/// Series attached to a law: `F(x, y)`, the formal inverse, log or exp.
pub fn fgl_series(f: &FormalGroupLaw, op: SeriesOp) -> crate::Result<TruncatedSeries> {
    f.series(op)
}
