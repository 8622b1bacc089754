//! Exact decomposition of well-poised multiple hypergeometric-type series into
//! rational combinations of (regularized) multiple zeta values.

pub mod error;
pub mod exact;
pub mod json;
pub mod mzv;
pub mod numeric;
pub mod partial_fractions;
pub mod perm;
pub mod pipeline;
pub mod presets;
pub mod reducer;
pub mod symmetric;
pub mod symmetry;

pub use error::{Error, Result};
pub use exact::{MPoly, Rational};
pub use mzv::{AsymExp, Monomial, Word, ZCombo};
