//! Independent checks on the spectral formulas: a direct Lyapunov solve and
//! a Monte-Carlo simulation of the noisy dynamics.

pub mod lyapunov;
pub mod simulate;

pub use lyapunov::{lyapunov_variance, per_mode_variance, LyapunovOracle, ModeSolution, Output, ReducedSystem};
pub use simulate::{simulate, Dynamics, SimulationConfig, SimulationEstimate, Target};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("reduced drift is not Hurwitz (is the graph connected?)")]
    NotHurwitz,
    #[error("graph has {n} vertices; the dense Lyapunov solve accepts at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("vertex {0} out of range for {1} vertices")]
    Index(usize, usize),
    #[error("mode eigenvalue must be positive, got {0}")]
    NonPositiveMode(f64),
    #[error("{0}")]
    Shape(String),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("time step {dt} exceeds the stability bound {bound:.6}")]
    UnstableStep { dt: f64, bound: f64 },
    #[error("simulation diverged at t = {time:.3} (deviation norm {norm:e})")]
    Diverged { time: f64, norm: f64 },
    #[error("invalid simulation parameters: {0}")]
    Config(String),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
}
