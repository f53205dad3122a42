//! Steady-state variances of noisy consensus under unit-intensity white
//! noise, evaluated from the Laplacian spectrum.
//!
//! Second order (`x1' = x2`, `x2' = -L x1 - L x2 + w`):
//! - pairwise `H_SO(j,k) = sum_i (u_ij - u_ik)^2 / (2 lambda_i^2) = d_B^2(j,k) / 2`
//! - vertex   `H_SO(j)   = sum_i u_ij^2 / (2 lambda_i^2)`
//! - total    `H_SO(G)   = sum_i 1 / (2 lambda_i^2) = D_B^2(G) / (2N)`
//!
//! First order (`x' = -L x + w`): `H_FO(G) = sum_i 1 / (2 lambda_i) = D_R(G) / (2N)`.
//!
//! Noise of intensity `sigma^2` scales every quantity by `sigma^2`.

use serde::{Deserialize, Serialize};

use crate::metrics::MetricError;
use crate::spectral::{SpectralDecomposition, Spectrum};

fn check(sd: &SpectralDecomposition, j: usize) -> Result<(), MetricError> {
    if j >= sd.n() {
        return Err(MetricError::Index(j, sd.n()));
    }
    Ok(())
}

pub fn hso_pairwise(sd: &SpectralDecomposition, j: usize, k: usize) -> Result<f64, MetricError> {
    check(sd, j)?;
    check(sd, k)?;
    if j == k {
        return Ok(0.0);
    }
    Ok(sd
        .modes()
        .map(|(l, u)| {
            let diff = u[j] - u[k];
            diff * diff / (2.0 * l * l)
        })
        .sum())
}

pub fn hso_vertex(sd: &SpectralDecomposition, j: usize) -> Result<f64, MetricError> {
    check(sd, j)?;
    Ok(sd.modes().map(|(l, u)| u[j] * u[j] / (2.0 * l * l)).sum())
}

/// `sum_i u_ij u_ik / (2 lambda_i^2)`, the covariance of the deviations of
/// `j` and `k`.
pub fn hso_cross(sd: &SpectralDecomposition, j: usize, k: usize) -> Result<f64, MetricError> {
    check(sd, j)?;
    check(sd, k)?;
    Ok(sd.modes().map(|(l, u)| u[j] * u[k] / (2.0 * l * l)).sum())
}

pub fn hso_total<S: AsRef<Spectrum>>(spectrum: &S) -> f64 {
    spectrum.as_ref().inverse_power_sum(2) / 2.0
}

pub fn hfo_total<S: AsRef<Spectrum>>(spectrum: &S) -> f64 {
    spectrum.as_ref().inverse_power_sum(1) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub hso_pairwise: Vec<Vec<f64>>,
    pub hso_vertex: Vec<f64>,
    pub hso_total: f64,
    pub hfo_total: f64,
}

impl CoherenceReport {
    pub fn compute(sd: &SpectralDecomposition) -> Self {
        let n = sd.n();
        let mut pairwise = vec![vec![0.0; n]; n];
        for j in 0..n {
            for k in j + 1..n {
                let h = hso_pairwise(sd, j, k).expect("indices in range");
                pairwise[j][k] = h;
                pairwise[k][j] = h;
            }
        }
        let vertex = (0..n).map(|j| hso_vertex(sd, j).expect("index in range")).collect();
        Self { hso_pairwise: pairwise, hso_vertex: vertex, hso_total: hso_total(sd), hfo_total: hfo_total(sd) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn sd(family: Family, n: usize) -> SpectralDecomposition {
        SpectralDecomposition::decompose(&family.generate(n).unwrap().laplacian()).unwrap()
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn pairwise_examples() {
        close(hso_pairwise(&sd(Family::Complete, 4), 0, 2).unwrap(), 1.0 / 16.0);
        let c4 = sd(Family::Cycle, 4);
        close(hso_pairwise(&c4, 0, 1).unwrap(), 0.15625);
        close(hso_pairwise(&c4, 0, 2).unwrap(), 0.25);
        assert_eq!(hso_pairwise(&c4, 3, 3).unwrap(), 0.0);
        assert!(hso_pairwise(&c4, 0, 4).is_err());
    }

    #[test]
    fn vertex_examples() {
        let star = sd(Family::Star, 4);
        close(hso_vertex(&star, 0).unwrap(), 3.0 / 128.0);
        close(hso_vertex(&star, 3).unwrap(), 43.0 / 128.0);
        close(hso_vertex(&sd(Family::Path, 3), 1).unwrap(), 1.0 / 27.0);
    }

    #[test]
    fn total_examples() {
        close(hso_total(&sd(Family::Cycle, 4)), 0.28125);
        close(hso_total(&sd(Family::Complete, 4)), 3.0 / 32.0);
        close(hfo_total(&sd(Family::Path, 3)), 2.0 / 3.0);
    }

    #[test]
    fn report_invariants() {
        let r = CoherenceReport::compute(&sd(Family::Star, 7));
        close(r.hso_vertex.iter().sum(), r.hso_total);
        for (j, row) in r.hso_pairwise.iter().enumerate() {
            assert_eq!(row[j], 0.0);
            assert!(row.iter().all(|&x| x >= 0.0));
        }
    }
}
