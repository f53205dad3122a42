//! Laplacian eigen-decomposition and the pseudo-inverses built from it.
//!
//! Everything downstream only reads spectral projectors, so degenerate
//! eigenspaces may come back in any orthonormal basis.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, LinalgError};

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric: |L[{0}][{1}] - L[{1}][{0}]| = {2:e}")]
    NotSymmetric(usize, usize, f64),
    #[error("{count} eigenvalues below the null tolerance {null_tol:e}; the graph is not connected")]
    NullSpace { count: usize, null_tol: f64 },
    #[error("inconsistent spectral data: {0}")]
    Shape(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

const SYMMETRY_TOL: f64 = 1e-12;
const SIGN_TOL: f64 = 1e-12;

/// `n * lambda_max * 2^-52 * 64`.
pub fn default_null_tol(n: usize, lambda_max: f64) -> f64 {
    n as f64 * lambda_max.abs() * f64::EPSILON * 64.0
}

/// Ascending Laplacian eigenvalues with the tolerance that separates the
/// null space. This is all the scalar indices need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub null_tol: f64,
}

impl Spectrum {
    /// Eigenvalues only; skips eigenvector accumulation.
    pub fn of(l: &Array2<f64>) -> Result<Self, SpectralError> {
        check_symmetric(l)?;
        let eig = linalg::symmetric_eigen(l, false)?;
        Self::from_eigenvalues(eig.values)
    }

    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self, SpectralError> {
        let lambda_max = eigenvalues.last().copied().unwrap_or(0.0);
        let null_tol = default_null_tol(eigenvalues.len(), lambda_max);
        let spectrum = Self { eigenvalues, null_tol };
        let count = spectrum.eigenvalues.iter().filter(|&&x| x <= null_tol).count();
        if count != 1 {
            return Err(SpectralError::NullSpace { count, null_tol });
        }
        Ok(spectrum)
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Smallest nonzero eigenvalue (algebraic connectivity), if any.
    pub fn lambda_1(&self) -> Option<f64> {
        self.nonzero().next().map(|(_, l)| l)
    }

    /// `(index, eigenvalue)` for every eigenvalue above the null tolerance.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let tol = self.null_tol;
        self.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .filter(move |&(_, l)| l > tol)
    }

    /// `sum over nonzero eigenvalues of lambda^-power`.
    pub fn inverse_power_sum(&self, power: i32) -> f64 {
        self.nonzero().map(|(_, l)| l.powi(-power)).sum()
    }
}

impl AsRef<Spectrum> for Spectrum {
    fn as_ref(&self) -> &Spectrum {
        self
    }
}

/// Eigenvalues plus orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    spectrum: Spectrum,
    eigenvectors: Array2<f64>,
}

impl AsRef<Spectrum> for SpectralDecomposition {
    fn as_ref(&self) -> &Spectrum {
        &self.spectrum
    }
}

fn check_symmetric(l: &Array2<f64>) -> Result<(), SpectralError> {
    let (rows, cols) = l.dim();
    if rows != cols {
        return Err(SpectralError::Shape(format!("{rows}x{cols} matrix is not square")));
    }
    let scale = l.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..rows {
        for j in 0..i {
            let gap = (l[(i, j)] - l[(j, i)]).abs();
            if gap > SYMMETRY_TOL * scale {
                return Err(SpectralError::NotSymmetric(i, j, gap));
            }
        }
    }
    Ok(())
}

/// Flips each column so its first component with magnitude above
/// `SIGN_TOL` is positive.
fn normalize_signs(vectors: &mut Array2<f64>) {
    for mut col in vectors.columns_mut() {
        if let Some(&first) = col.iter().find(|x| x.abs() > SIGN_TOL) {
            if first < 0.0 {
                col.mapv_inplace(|x| -x);
            }
        }
    }
}

impl SpectralDecomposition {
    pub fn decompose(l: &Array2<f64>) -> Result<Self, SpectralError> {
        check_symmetric(l)?;
        let eig = linalg::symmetric_eigen(l, true)?;
        let mut vectors = eig.vectors.expect("vectors were requested");
        normalize_signs(&mut vectors);
        Self::from_parts(eig.values, vectors)
    }

    /// Wraps precomputed eigenpairs (e.g. analytic spectra of structured
    /// families). Eigenvalues must be ascending with eigenvectors as columns.
    pub fn from_parts(eigenvalues: Vec<f64>, mut eigenvectors: Array2<f64>) -> Result<Self, SpectralError> {
        let n = eigenvalues.len();
        if eigenvectors.dim() != (n, n) {
            return Err(SpectralError::Shape(format!(
                "{n} eigenvalues but eigenvector matrix is {:?}",
                eigenvectors.dim()
            )));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(SpectralError::Shape("eigenvalues are not ascending".into()));
        }
        normalize_signs(&mut eigenvectors);
        let spectrum = Spectrum::from_eigenvalues(eigenvalues)?;
        Ok(Self { spectrum, eigenvectors })
    }

    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn null_tol(&self) -> f64 {
        self.spectrum.null_tol
    }

    pub fn eigenvectors(&self) -> &Array2<f64> {
        &self.eigenvectors
    }

    /// Column `i`, the eigenvector for the `i`-th smallest eigenvalue.
    pub fn eigenvector(&self, i: usize) -> ArrayView1<'_, f64> {
        self.eigenvectors.column(i)
    }

    /// `(eigenvalue, eigenvector)` over the non-null modes.
    pub fn modes(&self) -> impl Iterator<Item = (f64, ArrayView1<'_, f64>)> + '_ {
        self.spectrum.nonzero().map(move |(i, l)| (l, self.eigenvectors.column(i)))
    }

    /// Entry `(j, k)` of `L^dagger` (power 1) or `(L^dagger)^2` (power 2).
    pub fn pseudo_inverse_entry(&self, power: i32, j: usize, k: usize) -> f64 {
        self.modes().map(|(l, u)| u[j] * u[k] / l.powi(power)).sum()
    }

    /// `sum_i f(lambda_i) u_i u_i^T` over the non-null modes.
    pub fn spectral_function(&self, f: impl Fn(f64) -> f64) -> Array2<f64> {
        let n = self.n();
        let idx: Vec<usize> = self.spectrum.nonzero().map(|(i, _)| i).collect();
        let mut scaled = Array2::<f64>::zeros((n, idx.len()));
        let mut plain = Array2::<f64>::zeros((n, idx.len()));
        for (c, &i) in idx.iter().enumerate() {
            let w = f(self.spectrum.eigenvalues[i]);
            let u = self.eigenvectors.column(i);
            plain.column_mut(c).assign(&u);
            scaled.column_mut(c).assign(&u.mapv(|x| x * w));
        }
        scaled.dot(&plain.t())
    }

    /// `L^dagger` for power 1, `L^{2 dagger} = (L^dagger)^2` for power 2.
    pub fn pseudo_inverse(&self, power: i32) -> Array2<f64> {
        self.spectral_function(|l| l.powi(-power))
    }

    /// `U Lambda U^T`.
    pub fn reconstruct(&self) -> Array2<f64> {
        let lambda = Array2::from_diag(&Array1::from(self.spectrum.eigenvalues.clone()));
        self.eigenvectors.dot(&lambda).dot(&self.eigenvectors.t())
    }

    /// Copy with eigenvalue `i` scaled by `factor`; used to check that the
    /// validation suite notices a perturbed spectrum.
    pub fn with_scaled_eigenvalue(&self, i: usize, factor: f64) -> Self {
        let mut out = self.clone();
        out.spectrum.eigenvalues[i] *= factor;
        out
    }
}
