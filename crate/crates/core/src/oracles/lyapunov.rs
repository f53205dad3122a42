//! Steady-state variances from the Lyapunov equation of the reduced
//! second-order system.
//!
//! Projecting onto the complement of the consensus direction with
//! `Q` (rows = nonconstant eigenvectors) gives the stable system
//! `z' = M z + B w` with `M = [[0, I], [-Lbar, -Lbar]]`, `Lbar = Q L Q^T` and
//! `B = [0; Q]`. For an output `c^T x1`, the variance is `tr(B^T S B)` where
//! `M^T S + S M + Z = 0` and `Z = blockdiag((Qc)(Qc)^T, 0)`.
//!
//! The equation is solved by brute force: vectorise `S`, assemble the
//! `d^2 x d^2` Kronecker operator, LU-factor it once, and reuse the factors
//! for every output.

use ndarray::{Array1, Array2};

use super::OracleError;
use crate::linalg::{self, LuFactor};
use crate::spectral::SpectralDecomposition;

/// Largest graph the dense Kronecker solve accepts (operator side `(2(n-1))^2`).
pub const MAX_VERTICES: usize = 32;

/// Which linear functional of the deviations is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    /// `x_j - x_k`.
    Pairwise(usize, usize),
    /// `x_j - mean(x)`.
    Vertex(usize),
}

/// The projected, asymptotically stable second-order system.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub dim: usize,
    pub drift: Array2<f64>,
    pub input_map: Array2<f64>,
    /// `(n-1) x n` projector onto the nonconstant eigenvectors.
    pub q: Array2<f64>,
    /// Diagonal of `Q L Q^T`.
    pub reduced_eigenvalues: Vec<f64>,
}

impl ReducedSystem {
    /// Builds the projection from `sd` and applies it to the given Laplacian.
    pub fn new(sd: &SpectralDecomposition, laplacian: &Array2<f64>) -> Result<Self, OracleError> {
        let n = sd.n();
        if laplacian.dim() != (n, n) {
            return Err(OracleError::Shape(format!("Laplacian is {:?}, expected {n}x{n}", laplacian.dim())));
        }
        if n < 2 {
            return Err(OracleError::Shape("need at least two vertices".into()));
        }
        let modes: Vec<usize> = sd.spectrum().nonzero().map(|(i, _)| i).collect();
        if modes.len() != n - 1 {
            return Err(OracleError::NotHurwitz);
        }
        let r = n - 1;
        let mut q = Array2::<f64>::zeros((r, n));
        for (row, &i) in modes.iter().enumerate() {
            q.row_mut(row).assign(&sd.eigenvector(i));
        }
        let lbar = q.dot(laplacian).dot(&q.t());
        let dim = 2 * r;
        let mut drift = Array2::<f64>::zeros((dim, dim));
        for a in 0..r {
            drift[(a, r + a)] = 1.0;
            for b in 0..r {
                drift[(r + a, b)] = -lbar[(a, b)];
                drift[(r + a, r + b)] = -lbar[(a, b)];
            }
        }
        let mut input_map = Array2::<f64>::zeros((dim, n));
        input_map.slice_mut(ndarray::s![r.., ..]).assign(&q);
        let reduced_eigenvalues = (0..r).map(|a| lbar[(a, a)]).collect();
        Ok(Self { dim, drift, input_map, q, reduced_eigenvalues })
    }

    /// Largest real part among the eigenvalues of the drift, from the
    /// closed-form roots of each `[[0, 1], [-lambda, -lambda]]` block.
    pub fn spectral_abscissa(&self) -> f64 {
        self.reduced_eigenvalues
            .iter()
            .map(|&l| {
                let disc = l * l - 4.0 * l;
                if disc >= 0.0 {
                    (-l + disc.sqrt()) / 2.0
                } else {
                    -l / 2.0
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The factored Lyapunov operator `S -> M^T S + S M` for one graph.
pub struct LyapunovOracle {
    system: ReducedSystem,
    lu: LuFactor,
}

impl LyapunovOracle {
    pub fn new(sd: &SpectralDecomposition, laplacian: &Array2<f64>) -> Result<Self, OracleError> {
        if sd.n() > MAX_VERTICES {
            return Err(OracleError::TooLarge { n: sd.n(), max: MAX_VERTICES });
        }
        let system = ReducedSystem::new(sd, laplacian)?;
        let d = system.dim;
        let m = &system.drift;
        let size = d * d;
        let mut op = vec![0.0; size * size];
        for a in 0..d {
            for b in 0..d {
                let row = (a * d + b) * size;
                for c in 0..d {
                    // (M^T S)_{ab} = sum_c M_{ca} S_{cb};  (S M)_{ab} = sum_c S_{ac} M_{cb}
                    op[row + c * d + b] += m[(c, a)];
                    op[row + a * d + c] += m[(c, b)];
                }
            }
        }
        let lu = LuFactor::new(size, op).map_err(|_| OracleError::NotHurwitz)?;
        Ok(Self { system, lu })
    }

    pub fn system(&self) -> &ReducedSystem {
        &self.system
    }

    /// Solves `M^T S + S M + Z = 0`.
    pub fn solve(&self, z: &Array2<f64>) -> Array2<f64> {
        let d = self.system.dim;
        let rhs: Vec<f64> = z.iter().map(|x| -x).collect();
        Array2::from_shape_vec((d, d), self.lu.solve(&rhs)).expect("solution has d*d entries")
    }

    /// A Hurwitz drift is exactly one whose Lyapunov solution for `Z = I`
    /// is positive definite.
    pub fn is_hurwitz(&self) -> bool {
        let s = self.solve(&Array2::eye(self.system.dim));
        let sym = (&s + &s.t()) * 0.5;
        linalg::is_positive_definite(&sym)
    }

    pub fn variance(&self, output: Output) -> Result<f64, OracleError> {
        let n = self.system.q.ncols();
        let mut c = Array1::<f64>::zeros(n);
        match output {
            Output::Pairwise(j, k) => {
                if j >= n || k >= n {
                    return Err(OracleError::Index(j.max(k), n));
                }
                c[j] += 1.0;
                c[k] -= 1.0;
            }
            Output::Vertex(j) => {
                if j >= n {
                    return Err(OracleError::Index(j, n));
                }
                c[j] = 1.0;
            }
        }
        let qc = self.system.q.dot(&c);
        let r = qc.len();
        let mut z = Array2::<f64>::zeros((self.system.dim, self.system.dim));
        for a in 0..r {
            for b in 0..r {
                z[(a, b)] = qc[a] * qc[b];
            }
        }
        let sigma = self.solve(&z);
        let b = &self.system.input_map;
        let h = b.t().dot(&sigma).dot(b);
        Ok(h.diag().sum())
    }
}

/// One-shot convenience: projects the decomposition's own reconstruction.
pub fn lyapunov_variance(sd: &SpectralDecomposition, output: Output) -> Result<f64, OracleError> {
    LyapunovOracle::new(sd, &sd.reconstruct())?.variance(output)
}

/// Solution of one `2 x 2` modal block `P^T T + T P = -diag(weight, 0)`
/// with `P = [[0, 1], [-lambda, -lambda]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub theta: [[f64; 2]; 2],
    /// `T[1][1] = weight / (2 lambda^2)`, the mode's share of the variance.
    pub variance: f64,
}

pub fn per_mode_variance(lambda: f64, weight: f64) -> Result<ModeSolution, OracleError> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(OracleError::NonPositiveMode(lambda));
    }
    // (1,1): -2 lambda psi = -w;  (2,2): 2 psi - 2 lambda y = 0;  (1,2): x = lambda (y + psi)
    let psi = weight / (2.0 * lambda);
    let y = psi / lambda;
    let x = lambda * (y + psi);
    Ok(ModeSolution { theta: [[x, psi], [psi, y]], variance: y })
}
