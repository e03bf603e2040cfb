//! Online scheduling with resets: the MIMIC and DISC algorithms, exact
//! offline oracles for small instances, and a numerical audit of the
//! factor-revealing linear program behind their competitive ratio.

pub mod error;
pub mod experiments;
pub mod generator;
pub mod io;
pub mod lpaudit;
pub mod mimic;
pub mod model;
pub mod oracle;
pub mod problems;
pub mod tol;

pub use error::{Error, Result};
