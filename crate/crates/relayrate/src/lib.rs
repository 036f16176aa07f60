//! Achievable information rates for relay channels and cooperative
//! broadcast channels.
//!
//! The crate computes, optimizes, and compares the rates of the classical
//! relaying strategies — decode-and-forward and estimate-and-forward with
//! time-sharing quantizers — on three families of channels:
//!
//! - discrete memoryless single- and multi-relay channels ([`single_relay`],
//!   [`multi_relay`]), built on an exact finite-alphabet probability core
//!   ([`prob`]);
//! - the Gaussian relay channel with an orthogonal finite-capacity relay
//!   link under BPSK coded modulation ([`gaussian`]), evaluated by adaptive
//!   quadrature over Gaussian mixtures;
//! - the cooperative broadcast channel with conferencing receivers
//!   ([`broadcast`]).
//!
//! Input distributions are optimized with seeded random-restart Nelder-Mead
//! ([`optimizer`]). The `relayrate` binary exposes evaluation, optimization,
//! sweeps and the strategy region map; `examples/` has one runnable program
//! per capability.

pub mod broadcast;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gaussian;
pub mod multi_relay;
pub mod optimizer;
pub mod prob;
pub mod report;
pub mod single_relay;

pub use error::{Error, Result};
pub use prob::{build_joint, ChannelSpec, JointPmf, Var};
pub use single_relay::FeasibleRate;
