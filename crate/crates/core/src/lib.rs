//! Capacity bounds for the two-user optical intensity (IM/DD) interference
//! channel, with the rate-region geometry and scenario tooling around them.

pub mod commands;
pub mod error;
pub mod format;
pub mod gdof;
pub mod geometry;
pub mod ic;
pub mod numeric;
pub mod owc;
pub mod p2p;
mod par;

pub use error::{Error, Result};
pub use par::is_parallel;
