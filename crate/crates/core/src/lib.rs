//! Fock-basis simulation of linear optical quantum computing with
//! imperfect photon detectors.
//!
//! The numeric core is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64`, which is what the
//! command-line front end and most callers use.
//!
//! * [`fock`]: basis states and sparse kets
//! * [`optics`]: phase shifters, beam splitters, interferometers and their
//!   action on Fock states
//! * [`measure`]: ideal photon-number measurement
//! * [`detector`]: binomial loss and Poisson noise applied to ideal outcomes
//! * [`protocols`]: sign-shift gate, controlled sign flips and teleportation
//! * [`analysis`]: closed-form teleportation statistics under detector loss

pub mod analysis;
pub mod detector;
pub mod error;
pub mod fock;
pub mod format;
pub mod measure;
pub mod optics;
pub mod protocols;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Amplitude = num_complex::Complex<f64>;
pub type Ket = fock::SparseKet<f64>;
pub type Unitary = optics::ModeUnitary<f64>;
pub type Outcomes = measure::OutcomeTable<f64>;
pub type Detector = detector::DetectorModel<f64>;
pub type Stats = detector::ProtocolStats<f64>;
pub type Run = protocols::ProtocolRun<f64>;

