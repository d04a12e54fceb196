//! Binary LFSR combiners, their discrete Fourier spectra, and the Chinese
//! remainder structure that links combined and constituent sequences.

pub mod attack;
pub mod bench;
pub mod combiner;
pub mod crt;
pub mod error;
pub mod formats;
pub mod galois;
pub mod ntheory;
pub mod repro;
pub mod sequences;
pub mod spectra;

pub use error::{Error, Result};
