//! Exact arithmetic on infinite matrices over the rationals.
//!
//! Matrices are finite sums of region primitives (cells, row and column progressions,
//! diagonals and cones) with rational values. On top of that representation the crate
//! decides whether a product is defined, builds products lazily with exact line profiles,
//! decides when a triple product is absolutely convergent, and places a middle factor in
//! the hierarchy of links between two others. Every decision can be compared against
//! brute-force finite windows in [`oracle`].
//!
//! ```
//! use infmat::{corpus, product::is_defined};
//!
//! assert!(!is_defined(&corpus::ones_row(), &corpus::ones_col()).defined);
//! assert!(is_defined(&corpus::elim_v(), &corpus::elim_u()).defined);
//! ```

pub mod assoc;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod layout;
pub mod matrix;
pub mod oracle;
pub mod product;
pub mod profile;
pub mod report;
pub mod scalar;
pub mod solve;
