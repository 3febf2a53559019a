//! Massless helicity-λ representations of the Poincaré algebra on a
//! position operator with commuting components, the linearization of the
//! rotation action (Pryce operator), and the classical SU(2)/U(1) coset
//! construction of the same problem.

// `!(x > y)` is deliberate: it rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Tensor components read best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod ccwz;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod gauge;
pub mod poincare;
pub mod pryce;
pub mod report;
pub mod sampling;
pub mod su2;
pub mod suites;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
