//! Euler-Maruyama integration of noisy consensus, averaged over time and
//! independent replicas.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::graph::Graph;
use crate::spectral::Spectrum;

const DIVERGENCE_NORM: f64 = 1e8;
const CHECK_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Dynamics {
    FirstOrder,
    SecondOrder,
}

impl From<Dynamics> for u8 {
    fn from(d: Dynamics) -> u8 {
        match d {
            Dynamics::FirstOrder => 1,
            Dynamics::SecondOrder => 2,
        }
    }
}

impl TryFrom<u8> for Dynamics {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Dynamics::FirstOrder),
            2 => Ok(Dynamics::SecondOrder),
            _ => Err(format!("dynamics order must be 1 or 2, got {v}")),
        }
    }
}

impl Dynamics {
    /// Largest step the integrator accepts for a given `lambda_max`.
    pub fn step_bound(self, lambda_max: f64) -> f64 {
        match self {
            Dynamics::FirstOrder => 1.0 / (2.0 * lambda_max),
            Dynamics::SecondOrder => 0.5 / lambda_max.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Total,
    Vertex(usize),
    Pairwise(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub dt: f64,
    pub t_burn: f64,
    pub t_avg: f64,
    pub n_runs: usize,
    pub seed: u64,
    /// Refuse steps above [`Dynamics::step_bound`].
    pub enforce_step_bound: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_burn: 50.0, t_avg: 500.0, n_runs: 16, seed: 0, enforce_step_bound: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationEstimate {
    pub target: Target,
    pub order: Dynamics,
    pub estimate: f64,
    pub std_error: f64,
    pub dt: f64,
    pub t_burn: f64,
    pub t_avg: f64,
    pub n_runs: usize,
    pub rng_seed: u64,
}

fn validate(g: &Graph, targets: &[Target], c: &SimulationConfig) -> Result<(), OracleError> {
    let n = g.n();
    for t in targets {
        match *t {
            Target::Total => {}
            Target::Vertex(j) if j >= n => return Err(OracleError::Index(j, n)),
            Target::Pairwise(j, k) if j >= n || k >= n => return Err(OracleError::Index(j.max(k), n)),
            _ => {}
        }
    }
    if !(c.dt > 0.0 && c.dt.is_finite()) {
        return Err(OracleError::Config(format!("dt must be positive, got {}", c.dt)));
    }
    if !(c.t_burn >= 0.0 && c.t_burn.is_finite()) {
        return Err(OracleError::Config(format!("t_burn must be non-negative, got {}", c.t_burn)));
    }
    if !(c.t_avg > 0.0 && c.t_avg.is_finite()) {
        return Err(OracleError::Config(format!("t_burn must be shorter than the total time (t_avg = {})", c.t_avg)));
    }
    if c.t_avg < c.dt {
        return Err(OracleError::Config("averaging window shorter than one step".into()));
    }
    if c.n_runs < 2 {
        return Err(OracleError::Config("at least two runs are needed for a standard error".into()));
    }
    Ok(())
}

/// Runs `config.n_runs` independent replicas and reports, per target, the
/// mean over replicas of the time-averaged squared deviation.
///
/// Replica `r` draws from ChaCha8 seeded with `config.seed` on stream `r`,
/// so results do not depend on the thread count.
pub fn simulate(
    g: &Graph,
    order: Dynamics,
    targets: &[Target],
    config: &SimulationConfig,
) -> Result<Vec<SimulationEstimate>, OracleError> {
    validate(g, targets, config)?;
    let comps = g.component_count();
    if comps != 1 {
        return Err(OracleError::Disconnected(comps));
    }
    if g.n() < 2 {
        return Err(OracleError::Config("need at least two vertices".into()));
    }
    let lambda_max = Spectrum::of(&g.laplacian())?.lambda_max();
    let bound = order.step_bound(lambda_max);
    if config.enforce_step_bound && config.dt >= bound {
        return Err(OracleError::UnstableStep { dt: config.dt, bound });
    }

    let per_replica: Vec<Result<Vec<f64>, OracleError>> =
        (0..config.n_runs).into_par_iter().map(|r| run_replica(g, order, targets, config, r as u64)).collect();
    let mut samples = Vec::with_capacity(config.n_runs);
    for r in per_replica {
        samples.push(r?);
    }

    let runs = config.n_runs as f64;
    Ok(targets
        .iter()
        .enumerate()
        .map(|(t, &target)| {
            let mean = samples.iter().map(|s| s[t]).sum::<f64>() / runs;
            let var = samples.iter().map(|s| (s[t] - mean).powi(2)).sum::<f64>() / (runs - 1.0);
            SimulationEstimate {
                target,
                order,
                estimate: mean,
                std_error: (var / runs).sqrt(),
                dt: config.dt,
                t_burn: config.t_burn,
                t_avg: config.t_avg,
                n_runs: config.n_runs,
                rng_seed: config.seed,
            }
        })
        .collect())
}

fn apply_laplacian(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (j, o) in out.iter_mut().enumerate() {
        let mut s = g.degree(j) as f64 * x[j];
        for &k in g.neighbors(j) {
            s -= x[k];
        }
        *o = s;
    }
}

fn deviation_norm(x: &[f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
}

fn run_replica(
    g: &Graph,
    order: Dynamics,
    targets: &[Target],
    c: &SimulationConfig,
    replica: u64,
) -> Result<Vec<f64>, OracleError> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    rng.set_stream(replica);
    let burn = (c.t_burn / c.dt).round() as usize;
    let avg = ((c.t_avg / c.dt).round() as usize).max(1);
    let sq = c.dt.sqrt();

    let mut x = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut work = vec![0.0; n];
    let mut sum_buf = vec![0.0; n];
    let mut acc = vec![0.0; targets.len()];

    for step in 0..burn + avg {
        match order {
            Dynamics::FirstOrder => {
                apply_laplacian(g, &x, &mut work);
                for j in 0..n {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    x[j] += -c.dt * work[j] + sq * xi;
                }
            }
            Dynamics::SecondOrder => {
                for j in 0..n {
                    sum_buf[j] = x[j] + v[j];
                }
                apply_laplacian(g, &sum_buf, &mut work);
                for j in 0..n {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    x[j] += c.dt * v[j];
                    v[j] += -c.dt * work[j] + sq * xi;
                }
            }
        }

        if (step + 1) % CHECK_EVERY == 0 || step + 1 == burn + avg {
            let norm = deviation_norm(&x).hypot(deviation_norm(&v));
            if !norm.is_finite() || norm > DIVERGENCE_NORM {
                return Err(OracleError::Diverged { time: (step + 1) as f64 * c.dt, norm });
            }
        }

        if step >= burn {
            let mean = x.iter().sum::<f64>() / n as f64;
            for (a, t) in acc.iter_mut().zip(targets) {
                *a += match *t {
                    Target::Total => x.iter().map(|xj| (xj - mean).powi(2)).sum::<f64>(),
                    Target::Vertex(j) => (x[j] - mean).powi(2),
                    Target::Pairwise(j, k) => (x[j] - x[k]).powi(2),
                };
            }
        }
    }
    Ok(acc.into_iter().map(|a| a / avg as f64).collect())
}
