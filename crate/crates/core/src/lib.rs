//! Quantum information toolkit.
//!
//! Classical and quantum entropies, GF(2) and CSS codes, typical-set
//! compression, channel capacities, and a Monte-Carlo simulator for the
//! BB84 key distribution protocol with CSS-based reconciliation and
//! privacy amplification. All logarithms are base 2.

pub mod bb84sim;
pub mod centropy;
pub mod channelcap;
pub mod error;
pub mod gf2codes;
pub mod io;
pub mod linalg;
pub mod matquant;
pub mod qentropy;
pub mod random;
pub mod tolerance;
pub mod typicality;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
