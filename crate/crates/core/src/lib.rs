//! Regularity of Birkhoff interpolation problems and linear independence of
//! shifted powers `(x+a)^e`, with exact rational arithmetic throughout.

mod dd;
mod gmp;

pub mod certify;
pub mod duality;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod pair;
pub mod poly;
pub mod represent;

pub use certify::{certify_regular, verify_certificate, Certificate, Rule};
pub use error::{Error, Result};
pub use matrix::InterpolationMatrix;
pub use pair::{KnotSet, Pair};
pub use poly::{Polynomial, PowerFamily, Rational, ShiftedPower, Term};
