//! Torsion modules over 𝔽_p[[t]] of finite length and their ind-systems.

pub mod checks;
pub mod linalg;
pub mod module;
pub mod structure;

pub use checks::{check_torsion_powers, check_torsion_powers_ind, check_u_sequence, check_u_sequences, TorsionPowerCheck};
pub use linalg::{Mat, Subspace};
pub use module::{FptModule, IndFptModule, Stabilization};
pub use structure::{classify_divisible, decompose, extract_free, satisfies_pn, Decomposition, Extraction, FreePart, PartWitness, PnCheck};
