//! Milnor and Milnor–Witt K-theory of catalogued fields.

pub mod field;
pub mod kmw;
pub mod rules;

pub use field::{Catalog, CustomField, FieldDescriptor, FieldVariant, WittData};
pub use kmw::{complete_kmw, fiber_product, free_basis, milnor_witt, unit_degree, EtaAction, Graded, KMWChart};
pub use rules::{field_rules, milnor_k, witt_data, FieldRules};
