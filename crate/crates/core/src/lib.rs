//! Critical values of modular-form L-functions twisted by the Artin
//! representations σ_p and ρ_{p,m}, their p-adic normalization, and the
//! congruences between them.

pub mod arith;
pub mod artin;
pub mod error;
pub mod factored;
pub mod iwasawa;
pub mod lfunc;
pub mod padic;
pub mod pipeline;
pub mod poly;
pub mod qseries;
pub mod reference;

pub use artin::{ArtinRep, Epsilon, FrobClass, FrobLabel, RepKind};
pub use error::{Error, Result};
pub use poly::LocalFactor;
pub use qseries::{build_form, Coeffs, Form, FormId, PowerSeries};
