//! Closed-form values for complete graphs, stars, cycles and paths.
//!
//! Nothing here touches an eigensolver: polynomial formulas are evaluated in
//! exact rational arithmetic and rounded once at the end, which keeps the
//! `N^5` terms exact up to `N = 10^6`. The analytic eigenpairs in
//! [`analytic_decomposition`] are the only trigonometric part.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::graph::Family;
use crate::spectral::{SpectralDecomposition, SpectralError};

type Q = Ratio<i128>;

/// Largest size for which the rational evaluation is guaranteed not to overflow.
pub const MAX_EXACT_N: usize = 1_000_000;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ClosedFormError {
    #[error("{quantity} has no closed form for the {family} family")]
    Unsupported { family: Family, quantity: QuantityKind },
    #[error("argument out of range: {0}")]
    Range(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    SquaredDistance,
    KirchhoffIndex,
    VertexIndex,
    Centrality,
    PairwiseVariance,
    VertexVariance,
    TotalVariance,
    Eigenvalues,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 8] = [
        QuantityKind::SquaredDistance,
        QuantityKind::KirchhoffIndex,
        QuantityKind::VertexIndex,
        QuantityKind::Centrality,
        QuantityKind::PairwiseVariance,
        QuantityKind::VertexVariance,
        QuantityKind::TotalVariance,
        QuantityKind::Eigenvalues,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuantityKind::SquaredDistance => "d_b_sq",
            QuantityKind::KirchhoffIndex => "kirchhoff",
            QuantityKind::VertexIndex => "vertex_index",
            QuantityKind::Centrality => "centrality",
            QuantityKind::PairwiseVariance => "hso_pairwise",
            QuantityKind::VertexVariance => "hso_vertex",
            QuantityKind::TotalVariance => "hso_total",
            QuantityKind::Eigenvalues => "eigenvalues",
        }
    }
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuantityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QuantityKind::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

/// A quantity together with its vertex arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `d_B^2(j, k)`.
    SquaredDistance { j: usize, k: usize },
    /// Cycle-only `d_B^2` parametrised by the shift `l = j - k`, `0 <= l <= N`.
    CycleShift { l: usize },
    /// `D_B^2(G)`.
    KirchhoffIndex,
    /// `D_B^2(j)`.
    VertexIndex { j: usize },
    /// `C_B(j)`.
    Centrality { j: usize },
    /// `H_SO(j, k)`.
    PairwiseVariance { j: usize, k: usize },
    /// `H_SO(j)`.
    VertexVariance { j: usize },
    /// `H_SO(G)`.
    TotalVariance,
    Eigenvalues,
}

impl Quantity {
    pub fn kind(self) -> QuantityKind {
        match self {
            Quantity::SquaredDistance { .. } | Quantity::CycleShift { .. } => QuantityKind::SquaredDistance,
            Quantity::KirchhoffIndex => QuantityKind::KirchhoffIndex,
            Quantity::VertexIndex { .. } => QuantityKind::VertexIndex,
            Quantity::Centrality { .. } => QuantityKind::Centrality,
            Quantity::PairwiseVariance { .. } => QuantityKind::PairwiseVariance,
            Quantity::VertexVariance { .. } => QuantityKind::VertexVariance,
            Quantity::TotalVariance => QuantityKind::TotalVariance,
            Quantity::Eigenvalues => QuantityKind::Eigenvalues,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Scalar(f64),
    Array(Vec<f64>),
}

impl Value {
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Value::Scalar(x) => Some(*x),
            Value::Array(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormPrediction {
    pub family: Family,
    pub n: usize,
    pub quantity: Quantity,
    pub value: Value,
}

fn q(x: usize) -> Q {
    Q::from_integer(x as i128)
}

fn frac(a: i128, b: i128) -> Q {
    Q::new(a, b)
}

fn to_f64(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_vertex(n: usize, j: usize) -> Result<(), ClosedFormError> {
    if j >= n {
        return Err(ClosedFormError::Range(format!("vertex {j} not in 0..{n}")));
    }
    Ok(())
}

/// Squared biharmonic distance on a cycle at shift `l`.
fn cycle_dsq(n: usize, l: usize) -> Q {
    let (nn, l) = (q(n), q(l));
    l.pow(4) / (frac(12, 1) * nn) - l.pow(3) / 6 + l * l * nn / 12 - l * l / (frac(6, 1) * nn) + l / 6
}

/// Squared biharmonic distance on a path, `k < j`.
fn path_dsq(n: usize, j: usize, k: usize) -> Q {
    debug_assert!(k < j);
    let (nn, j, k) = (q(n), q(j), q(k));
    let two_n = nn * 2;
    let four_n = nn * 4;
    j / 6 + j * j / 2 - j * j / four_n + j.pow(3) / 3 - j.pow(3) / two_n - j.pow(4) / four_n
        - k / 6 - j * k + j * k / two_n + j * j * k / two_n + k * k / 2 - k * k / four_n
        - j * k * k + j * k * k / two_n + j * j * k * k / two_n + k.pow(3) * 2 / 3 - k.pow(3) / two_n
        - k.pow(4) / four_n
}

fn path_vertex_index(n: usize, j: usize) -> Q {
    let (nn, j) = (q(n), q(j));
    let one = Q::from_integer(1);
    (nn.pow(4) - j * (j + one) * nn * nn * 10 + j * (j * 2 + one) * (j + one) * nn * 10
        - j * j * (j + one) * (j + one) * 10
        - one)
        / 30
}

fn squared_distance_exact(family: Family, n: usize, j: usize, k: usize) -> Q {
    if j == k {
        return Q::from_integer(0);
    }
    match family {
        Family::Complete => frac(2, 1) / (q(n) * q(n)),
        Family::Star if j == 0 || k == 0 => (q(n) - 1) / q(n),
        Family::Star => frac(2, 1),
        Family::Cycle => {
            let d = j.abs_diff(k);
            cycle_dsq(n, d.min(n - d))
        }
        Family::Path => path_dsq(n, j.max(k), j.min(k)),
    }
}

fn kirchhoff_exact(family: Family, n: usize) -> Q {
    let nn = q(n);
    match family {
        Family::Complete => (nn - 1) / nn,
        Family::Star => nn * nn - nn * 2 + Q::from_integer(1) / nn,
        Family::Cycle => (nn.pow(5) + nn.pow(3) * 10 - nn * 11) / 720,
        Family::Path => (nn.pow(5) * 2 + nn.pow(3) * 5 - nn * 7) / 180,
    }
}

fn vertex_index_exact(family: Family, n: usize, j: usize) -> Q {
    let nn = q(n);
    match family {
        Family::Complete => (nn - 1) * 2 / (nn * nn),
        Family::Star if j == 0 => (nn - 1) * (nn - 1) / nn,
        Family::Star => (nn * nn * 2 - nn * 3 - 1) / nn,
        Family::Cycle => (nn.pow(4) + nn * nn * 10 - 11) / 360,
        Family::Path => path_vertex_index(n, j),
    }
}

fn vertex_variance_exact(family: Family, n: usize, j: usize) -> Q {
    let nn = q(n);
    match family {
        Family::Complete => (nn - 1) / (nn.pow(3) * 2),
        Family::Star if j == 0 => (nn - 1) / (nn.pow(3) * 2),
        Family::Star => (nn.pow(3) - nn * nn - nn - 1) / (nn.pow(3) * 2),
        Family::Cycle => (nn.pow(3) + nn * 10 - frac(11, 1) / nn) / 1440,
        Family::Path => {
            let jj = q(j);
            let one = Q::from_integer(1);
            (nn.pow(4) * 4 - (jj * jj * 60 + jj * 60 + 5) * nn * nn
                + jj * (jj * 2 + one) * (jj + one) * nn * 60
                - jj * jj * (jj + one) * (jj + one) * 60
                + one)
                / (nn * 360)
        }
    }
}

fn total_variance_exact(family: Family, n: usize) -> Q {
    let nn = q(n);
    match family {
        Family::Complete => (nn - 1) / (nn * nn * 2),
        Family::Star => nn / 2 - 1 + Q::from_integer(1) / (nn * nn * 2),
        Family::Cycle => (nn.pow(4) + nn * nn * 10 - 11) / 1440,
        Family::Path => (nn.pow(4) * 2 + nn * nn * 5 - 7) / 360,
    }
}

fn pairwise_variance_exact(family: Family, n: usize, j: usize, k: usize) -> Q {
    if j == k {
        return Q::from_integer(0);
    }
    match family {
        Family::Complete => Q::from_integer(1) / (q(n) * q(n)),
        Family::Star if j == 0 || k == 0 => (q(n) - 1) / (q(n) * 2),
        Family::Star => Q::from_integer(1),
        Family::Cycle | Family::Path => squared_distance_exact(family, n, j, k) / 2,
    }
}

/// Ascending analytic Laplacian eigenvalues.
pub fn eigenvalues(family: Family, n: usize) -> Vec<f64> {
    match family {
        Family::Complete => std::iter::once(0.0).chain(std::iter::repeat_n(n as f64, n - 1)).collect(),
        Family::Star => {
            let mut v = vec![1.0; n];
            v[0] = 0.0;
            v[n - 1] = n as f64;
            v
        }
        Family::Cycle => {
            let mut v: Vec<f64> = (0..n)
                .map(|p| {
                    let s = (PI * p as f64 / n as f64).sin();
                    4.0 * s * s
                })
                .collect();
            v.sort_by(f64::total_cmp);
            v
        }
        Family::Path => (0..n)
            .map(|p| {
                let s = (PI * p as f64 / (2.0 * n as f64)).sin();
                4.0 * s * s
            })
            .collect(),
    }
}

/// Evaluates one catalogued formula.
pub fn predict(family: Family, n: usize, quantity: Quantity) -> Result<ClosedFormPrediction, ClosedFormError> {
    family
        .check_size(n)
        .map_err(|e| ClosedFormError::Range(e.to_string()))?;
    if n > MAX_EXACT_N {
        return Err(ClosedFormError::Range(format!("N = {n} exceeds {MAX_EXACT_N}")));
    }
    let exact = match quantity {
        Quantity::SquaredDistance { j, k } => {
            check_vertex(n, j)?;
            check_vertex(n, k)?;
            squared_distance_exact(family, n, j, k)
        }
        Quantity::CycleShift { l } => {
            if family != Family::Cycle {
                return Err(ClosedFormError::Unsupported { family, quantity: quantity.kind() });
            }
            if l > n {
                return Err(ClosedFormError::Range(format!("shift {l} not in 0..={n}")));
            }
            cycle_dsq(n, l)
        }
        Quantity::KirchhoffIndex => kirchhoff_exact(family, n),
        Quantity::VertexIndex { j } => {
            check_vertex(n, j)?;
            vertex_index_exact(family, n, j)
        }
        Quantity::Centrality { j } => {
            check_vertex(n, j)?;
            q(n) / vertex_index_exact(family, n, j)
        }
        Quantity::PairwiseVariance { j, k } => {
            check_vertex(n, j)?;
            check_vertex(n, k)?;
            pairwise_variance_exact(family, n, j, k)
        }
        Quantity::VertexVariance { j } => {
            check_vertex(n, j)?;
            vertex_variance_exact(family, n, j)
        }
        Quantity::TotalVariance => total_variance_exact(family, n),
        Quantity::Eigenvalues => {
            return Ok(ClosedFormPrediction { family, n, quantity, value: Value::Array(eigenvalues(family, n)) });
        }
    };
    Ok(ClosedFormPrediction { family, n, quantity, value: Value::Scalar(to_f64(exact)) })
}

/// Shorthand for scalar predictions.
pub fn predict_scalar(family: Family, n: usize, quantity: Quantity) -> Result<f64, ClosedFormError> {
    let p = predict(family, n, quantity)?;
    p.value.scalar().ok_or(ClosedFormError::Unsupported { family, quantity: quantity.kind() })
}

/// `G_N(l) = (1/N) sum_{m=1}^{N-1} (1 - cos 2 l phi_m) / (1 - cos 2 phi_m)^2`
/// in closed form, `phi_m = m pi / N`. The polynomial agrees with the sum
/// for `0 <= l <= N`; beyond that the sum is periodic and the polynomial is not.
pub fn trig_sum_g(n: usize, l: usize) -> Result<f64, ClosedFormError> {
    if n < 2 || l > n {
        return Err(ClosedFormError::Range(format!("G_N(l) needs N >= 2 and 0 <= l <= N, got N={n}, l={l}")));
    }
    Ok(to_f64(cycle_dsq(n, l) * 2))
}

/// `F_N(l) = (1/N) sum_{m=1}^{N-1} (1 - cos l phi_m) / (1 - cos phi_m)^2`
/// in closed form, valid for `0 <= l <= 2N`.
pub fn trig_sum_f(n: usize, l: usize) -> Result<f64, ClosedFormError> {
    if n < 2 || l > 2 * n {
        return Err(ClosedFormError::Range(format!("F_N(l) needs N >= 2 and 0 <= l <= 2N, got N={n}, l={l}")));
    }
    let (nn, ll) = (q(n), q(l));
    let sign = if l.is_multiple_of(2) { 1 } else { -1 };
    let v = ll.pow(4) / (nn * 12) - ll.pow(3) / 3 + ll * ll * nn / 3 - ll * ll / (nn * 6)
        + frac(sign, 8) / nn
        + ll / 3
        - frac(1, 8) / nn;
    Ok(to_f64(v))
}

/// Real orthonormal analytic eigenpairs for the structured families.
pub fn analytic_decomposition(family: Family, n: usize) -> Result<SpectralDecomposition, SpectralError> {
    family.check_size(n).map_err(|e| SpectralError::Shape(e.to_string()))?;
    let nf = n as f64;
    let mut u = Array2::<f64>::zeros((n, n));
    u.column_mut(0).fill(1.0 / nf.sqrt());
    match family {
        Family::Complete => {
            // Helmert basis of the complement of the constant vector
            for p in 1..n {
                let norm = ((p * (p + 1)) as f64).sqrt();
                for m in 0..p {
                    u[(m, p)] = -1.0 / norm;
                }
                u[(p, p)] = p as f64 / norm;
            }
        }
        Family::Star => {
            for p in 1..n - 1 {
                let norm = ((p * (p + 1)) as f64).sqrt();
                for m in 1..=p {
                    u[(m, p)] = -1.0 / norm;
                }
                u[(p + 1, p)] = p as f64 / norm;
            }
            let norm = (nf * (nf - 1.0)).sqrt();
            u[(0, n - 1)] = (1.0 - nf) / norm;
            for m in 1..n {
                u[(m, n - 1)] = 1.0 / norm;
            }
        }
        Family::Cycle => {
            let amp = (2.0 / nf).sqrt();
            let mut col = 1;
            for p in 1..=(n - 1) / 2 {
                for m in 0..n {
                    let angle = 2.0 * PI * (p * m % n) as f64 / nf;
                    u[(m, col)] = amp * angle.cos();
                    u[(m, col + 1)] = amp * angle.sin();
                }
                col += 2;
            }
            if n.is_multiple_of(2) {
                for m in 0..n {
                    u[(m, n - 1)] = if m % 2 == 0 { 1.0 } else { -1.0 } / nf.sqrt();
                }
            }
        }
        Family::Path => {
            let amp = (2.0 / nf).sqrt();
            for p in 1..n {
                for m in 0..n {
                    u[(m, p)] = amp * (PI * p as f64 * (m as f64 + 0.5) / nf).cos();
                }
            }
        }
    }
    let values = match family {
        Family::Cycle => {
            let mut v = vec![0.0; n];
            for p in 1..=(n - 1) / 2 {
                let s = (PI * p as f64 / nf).sin();
                v[2 * p - 1] = 4.0 * s * s;
                v[2 * p] = 4.0 * s * s;
            }
            if n.is_multiple_of(2) {
                v[n - 1] = 4.0;
            }
            v
        }
        _ => eigenvalues(family, n),
    };
    SpectralDecomposition::from_parts(values, u)
}
