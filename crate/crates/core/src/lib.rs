//! Ducci dynamics over `Z_m^n`: cycle detection, coefficient rows of `D^r`,
//! shift-closure classification and transition graphs.

pub mod arith;
pub mod closure;
pub mod coeff;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod identities;
pub mod oracle;
pub mod printed;
pub mod ring;
pub mod scan;
pub mod verify;

pub use error::{DucciError, Result};
pub use ring::{RingParams, Tuple};
