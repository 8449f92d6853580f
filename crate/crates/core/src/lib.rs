//! Simulation laboratory for fractal dimensions of Markov-process images.
//!
//! The crate simulates several families of jump Markov processes (stable
//! Lévy processes, subordinators, subordinated processes, stable-like jump
//! SDEs and stable jump diffusions), evaluates their characteristic
//! exponents and symbols, and estimates box-counting dimensions of image
//! sets `X(E)` for time sets `E` of known dimension. A set of statistical
//! verifiers checks the maximal-inequality, ball-probability and moment
//! hypotheses that the dimension identity `dim X(E) = dim E / H` rests on,
//! and a config-driven runner orchestrates the end-to-end experiment.

pub mod boxdim;
pub mod conditions;
pub mod config;
pub mod covering;
pub mod error;
pub mod experiment;
pub mod paths;
pub mod report;
pub mod rng;
pub mod stats;
pub mod symbols;
pub mod timesets;

pub use error::{Error, Result};
pub use rng::RngStream;
