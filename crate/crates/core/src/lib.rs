//! Biharmonic and resistance distances on graphs, the indices built from
//! them, and the steady-state variance of noisy consensus dynamics.

pub mod cli;
pub mod closedform;
pub mod coherence;
pub mod export;
pub mod figures;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod oracles;
pub mod spectral;
pub mod validation;
