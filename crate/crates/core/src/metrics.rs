//! Resistance and biharmonic distances and the indices built on them.
//!
//! Order 1 is the resistance distance `d_R`, order 2 the squared biharmonic
//! distance `d_B^2`. Both are the same quadratic form in the eigenvectors,
//! weighted by `lambda^-1` and `lambda^-2` respectively.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, LinalgError};
use crate::spectral::{SpectralDecomposition, Spectrum};

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    Index(usize, usize),
    #[error("centrality is undefined on a single-vertex graph")]
    SingleVertex,
    #[error("requested {dims} principal components but at most {max} are available")]
    Dims { dims: usize, max: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which distance family a report or index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Order {
    Resistance = 1,
    Biharmonic = 2,
}

impl Order {
    /// Power of the eigenvalue in the spectral weights.
    pub fn power(self) -> i32 {
        self as i32
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o as u8
    }
}

impl TryFrom<u8> for Order {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Order::Resistance),
            2 => Ok(Order::Biharmonic),
            other => Err(format!("order must be 1 or 2, got {other}")),
        }
    }
}

fn check_index(sd: &SpectralDecomposition, j: usize) -> Result<(), MetricError> {
    if j >= sd.n() {
        return Err(MetricError::Index(j, sd.n()));
    }
    Ok(())
}

/// `sum_i (u_ij - u_ik)^2 / lambda_i^order`: `d_R` for order 1, `d_B^2` for order 2.
pub fn squared_distance(sd: &SpectralDecomposition, order: Order, j: usize, k: usize) -> Result<f64, MetricError> {
    check_index(sd, j)?;
    check_index(sd, k)?;
    if j == k {
        return Ok(0.0);
    }
    let p = order.power();
    Ok(sd
        .modes()
        .map(|(l, u)| {
            let diff = u[j] - u[k];
            diff * diff / l.powi(p)
        })
        .sum())
}

pub fn biharmonic_distance(sd: &SpectralDecomposition, j: usize, k: usize) -> Result<f64, MetricError> {
    squared_distance(sd, Order::Biharmonic, j, k).map(f64::sqrt)
}

/// Effective resistance between `j` and `k` (not square-rooted).
pub fn resistance_distance(sd: &SpectralDecomposition, j: usize, k: usize) -> Result<f64, MetricError> {
    squared_distance(sd, Order::Resistance, j, k)
}

/// `N * sum_i lambda_i^-order`: the Kirchhoff index for order 1 and the
/// biharmonic Kirchhoff index for order 2.
pub fn kirchhoff_index<S: AsRef<Spectrum>>(spectrum: &S, order: Order) -> f64 {
    let s = spectrum.as_ref();
    s.n() as f64 * s.inverse_power_sum(order.power())
}

/// Row sum of the distance matrix, via
/// `sum_k d(j,k) = N * P_jj + tr(P)` with `P` the matching pseudo-inverse.
pub fn vertex_index(sd: &SpectralDecomposition, order: Order, j: usize) -> Result<f64, MetricError> {
    check_index(sd, j)?;
    let p = order.power();
    let n = sd.n() as f64;
    Ok(sd.modes().map(|(l, u)| (n * u[j] * u[j] + 1.0) / l.powi(p)).sum())
}

/// `(vertex_index / N)^-1`: biharmonic centrality for order 2, information
/// centrality for order 1.
pub fn centrality(sd: &SpectralDecomposition, order: Order, j: usize) -> Result<f64, MetricError> {
    if sd.n() == 1 {
        return Err(MetricError::SingleVertex);
    }
    Ok(sd.n() as f64 / vertex_index(sd, order, j)?)
}

/// All-pairs distances with the indices derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub order: Order,
    /// `d_R` for order 1, `d_B^2` for order 2.
    pub squared_distances: Vec<Vec<f64>>,
    pub kirchhoff_index: f64,
    pub vertex_indices: Vec<f64>,
    pub centralities: Vec<f64>,
}

impl MetricReport {
    /// Builds the pseudo-inverse once and fills every pair from
    /// `P_jj + P_kk - 2 P_jk`.
    pub fn compute(sd: &SpectralDecomposition, order: Order) -> Result<Self, MetricError> {
        let n = sd.n();
        if n == 1 {
            return Err(MetricError::SingleVertex);
        }
        let pinv = sd.pseudo_inverse(order.power());
        let mut dist = vec![vec![0.0; n]; n];
        for j in 0..n {
            for k in j + 1..n {
                let d = (pinv[(j, j)] + pinv[(k, k)] - 2.0 * pinv[(j, k)]).max(0.0);
                dist[j][k] = d;
                dist[k][j] = d;
            }
        }
        let vertex_indices: Vec<f64> = dist.iter().map(|row| row.iter().sum()).collect();
        let kirchhoff_index = dist
            .iter()
            .enumerate()
            .map(|(j, row)| row[j + 1..].iter().sum::<f64>())
            .sum();
        let centralities = vertex_indices.iter().map(|&d| n as f64 / d).collect();
        Ok(Self { order, squared_distances: dist, kirchhoff_index, vertex_indices, centralities })
    }

    pub fn n(&self) -> usize {
        self.squared_distances.len()
    }

    /// `d_R` or `d_B` (square-rooted for order 2).
    pub fn distance(&self, j: usize, k: usize) -> f64 {
        match self.order {
            Order::Resistance => self.squared_distances[j][k],
            Order::Biharmonic => self.squared_distances[j][k].sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    /// Vertex `j` maps to `L^dagger e_j`.
    Biharmonic,
    /// Vertex `j` maps to `L^{dagger/2} e_j`.
    Resistance,
}

/// One point in `R^n` per vertex; row `j` is vertex `j`.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub kind: EmbeddingKind,
    pub coordinates: Array2<f64>,
}

pub fn embed(sd: &SpectralDecomposition, kind: EmbeddingKind) -> Embedding {
    let coordinates = match kind {
        EmbeddingKind::Biharmonic => sd.pseudo_inverse(1),
        EmbeddingKind::Resistance => sd.spectral_function(|l| 1.0 / l.sqrt()),
    };
    Embedding { kind, coordinates }
}

impl Embedding {
    pub fn distance(&self, j: usize, k: usize) -> f64 {
        let a = self.coordinates.row(j);
        let b = self.coordinates.row(k);
        a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

/// Projection of an embedding onto its leading principal directions.
#[derive(Debug, Clone)]
pub struct PrincipalComponents {
    /// Orthonormal directions, one per column, by decreasing variance.
    pub directions: Array2<f64>,
    /// Sum of squared centred coordinates along each direction.
    pub variances: Vec<f64>,
    /// `n x dims` projected coordinates.
    pub scores: Array2<f64>,
}

pub fn principal_components(e: &Embedding, dims: usize) -> Result<PrincipalComponents, MetricError> {
    let n = e.coordinates.nrows();
    let max = n.saturating_sub(1);
    if dims == 0 || dims > max {
        return Err(MetricError::Dims { dims, max });
    }
    let mean = e.coordinates.mean_axis(ndarray::Axis(0)).expect("nonempty embedding");
    let centred = &e.coordinates - &mean;
    let gram = centred.t().dot(&centred);
    let eig = linalg::symmetric_eigen(&gram, true)?;
    let vectors = eig.vectors.expect("vectors were requested");
    let dim = gram.nrows();
    let mut directions = Array2::zeros((dim, dims));
    let mut variances = Vec::with_capacity(dims);
    for c in 0..dims {
        let src = dim - 1 - c;
        let mut col = vectors.column(src).to_owned();
        if let Some(&first) = col.iter().find(|x| x.abs() > 1e-12) {
            if first < 0.0 {
                col.mapv_inplace(|x| -x);
            }
        }
        directions.column_mut(c).assign(&col);
        variances.push(eig.values[src]);
    }
    let scores = centred.dot(&directions);
    Ok(PrincipalComponents { directions, variances, scores })
}
