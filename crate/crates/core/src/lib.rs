//! Exact computations around motivic stable stems.
//!
//! * [`graded`]: bigraded charts of abelian groups and weighted truncations.
//! * [`fgl`]: truncated formal group laws, Lazard generators, p-typical laws.
//! * [`hopf`]: Hopf algebroids, cobar complexes and Adams–Novikov Ext.
//! * [`milnor`]: Milnor and Milnor–Witt K-theory of catalogued fields.
//! * [`fpt`]: torsion modules over 𝔽_p[[t]].
//! * [`stems`]: assembled stem charts.

pub mod arith;
pub mod fgl;
pub mod fpt;
pub mod poly;
pub mod error;
pub mod graded;
pub mod hopf;
pub mod milnor;
pub mod registry;
pub mod stems;

pub use error::{CoreError, Result};

/// Version stamp of the computational engine; cached results from another
/// version are never reused.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
