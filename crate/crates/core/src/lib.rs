//! Spreads of quadrics over small finite fields, affine vector space partitions,
//! and the constructions relating them.

pub mod avsp;
pub mod bridge;
pub mod cert;
pub mod cover;
pub mod error;
pub mod gf;
pub mod pg;
pub mod quadric;
pub mod spread;

pub use avsp::Avsp;
pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use pg::{Point, Subspace};
pub use quadric::{QuadraticForm, QuadricKind};
