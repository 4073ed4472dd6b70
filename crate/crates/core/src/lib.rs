//! Error-correcting output codes (ECOC) for monolithic multilayer perceptrons.
//!
//! The crate is organised around the stages of an ECOC classifier:
//!
//! * [`codebook`] builds and analyses class code matrices,
//! * [`features`] fits a PCA representation of the raw inputs,
//! * [`network`] holds the 3-layer sigmoid MLP and its two training costs
//!   (plain squared error, and the codeword-error weighted variant),
//! * [`decoder`] turns output vectors into class decisions with a
//!   robustness-rate reject option,
//! * [`evaluator`] implements the Gm/Pn split protocol and the
//!   recognition / error / rejection / reliability metrics,
//! * [`harness`] ties everything together for the command line tool.

pub mod codebook;
pub mod dataset;
pub mod decoder;
pub mod error;
pub mod evaluator;
pub mod features;
pub mod harness;
pub mod network;
pub mod rng;

pub use dataset::Dataset;
pub use error::{Error, ErrorKind, Result};
