pub mod csv;
pub mod error;
pub mod figures;
pub mod fock;
pub mod generation;
pub mod jcm;
pub mod quasiprob;
pub mod selftest;
pub mod special;
pub mod states;
pub mod statistics;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
