//! Secrecy-rate optimization for hybrid analog/digital beamforming.
//!
//! The pipeline has two stages. Per user, projected gradient ascent picks
//! constant-amplitude analog combiner and precoder vectors that maximize
//! the single-user secrecy rate against a jammer and an eavesdropper
//! ([`analog_opt`]). The base station then builds the effective channel
//! and applies a ZF, MMSE or MRT baseband precoder ([`digital_precoding`]).
//! [`montecarlo`] averages the result over clustered geometric channel
//! realizations ([`channel`]).

pub mod analog_opt;
pub mod channel;
pub mod cli;
pub mod digital_precoding;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod montecarlo;
pub mod rng;

pub use error::{Error, Result};
