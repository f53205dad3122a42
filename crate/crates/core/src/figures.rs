//! Data series behind the distance, centrality and embedding plots.

use std::fmt;
use std::str::FromStr;

use crate::closedform;
use crate::export::{Cell, Table};
use crate::graph::{self, Family, Graph, GraphError};
use crate::metrics::{self, EmbeddingKind, MetricError, Order};
use crate::spectral::{SpectralDecomposition, SpectralError};

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("unknown figure `{0}` (expected one of cycle_distances, path_distances, path_centrality, starry_line, embedding_pca)")]
    Unknown(String),
    #[error("figure {0} needs --{1}")]
    Missing(&'static str, &'static str),
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    CycleDistances,
    PathDistances,
    PathCentrality,
    StarryLine,
    EmbeddingPca,
}

impl Figure {
    pub const ALL: [Figure; 5] =
        [Figure::CycleDistances, Figure::PathDistances, Figure::PathCentrality, Figure::StarryLine, Figure::EmbeddingPca];

    pub fn name(self) -> &'static str {
        match self {
            Figure::CycleDistances => "cycle_distances",
            Figure::PathDistances => "path_distances",
            Figure::PathCentrality => "path_centrality",
            Figure::StarryLine => "starry_line",
            Figure::EmbeddingPca => "embedding_pca",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = FigureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| FigureError::Unknown(s.to_string()))
    }
}

/// Parameters shared by all figures; unset fields take per-figure defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureParams {
    pub n: Option<usize>,
    /// Reference vertices for `path_distances`.
    pub ks: Vec<usize>,
    pub star_size: Option<usize>,
    pub path_len: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
}

pub fn generate(figure: Figure, p: &FigureParams) -> Result<Table, FigureError> {
    match figure {
        Figure::CycleDistances => cycle_distances(p.n.unwrap_or(1000)),
        Figure::PathDistances => {
            let n = p.n.unwrap_or(1000);
            let ks = if p.ks.is_empty() { vec![0, n / 2] } else { p.ks.clone() };
            path_distances(n, &ks)
        }
        Figure::PathCentrality => path_centrality(p.n.unwrap_or(1000)),
        Figure::StarryLine => starry_line(p.star_size.unwrap_or(20), p.path_len.unwrap_or(5)),
        Figure::EmbeddingPca => {
            let seed = p.seed.ok_or(FigureError::Missing("embedding_pca", "seed"))?;
            embedding_pca(p.n.unwrap_or(100), p.m.unwrap_or(2), seed)
        }
    }
}

/// Distances from vertex 0 to vertex `l` in a cycle, `l = 0..N-1`.
pub fn cycle_distances(n: usize) -> Result<Table, FigureError> {
    let sd = closedform::analytic_decomposition(Family::Cycle, n)?;
    let mut t = Table::new(["l", "d_b_sq", "d_b", "d_r"]);
    for l in 0..n {
        let b = metrics::squared_distance(&sd, Order::Biharmonic, l, 0)?;
        let r = metrics::squared_distance(&sd, Order::Resistance, l, 0)?;
        t.push(vec![l.into(), b.into(), b.sqrt().into(), r.into()]);
    }
    Ok(t)
}

/// Distances `d(j, k)` in a path for each reference `k` and all `j >= k`.
pub fn path_distances(n: usize, ks: &[usize]) -> Result<Table, FigureError> {
    if let Some(&k) = ks.iter().find(|&&k| k >= n) {
        return Err(FigureError::Parameter(format!("reference vertex {k} not in 0..{n}")));
    }
    let sd = closedform::analytic_decomposition(Family::Path, n)?;
    let mut t = Table::new(["k", "j", "l", "d_b_sq", "d_b", "d_r"]);
    for &k in ks {
        for j in k..n {
            let b = metrics::squared_distance(&sd, Order::Biharmonic, j, k)?;
            let r = metrics::squared_distance(&sd, Order::Resistance, j, k)?;
            t.push(vec![k.into(), j.into(), (j - k).into(), b.into(), b.sqrt().into(), r.into()]);
        }
    }
    Ok(t)
}

fn centrality_rows(g: &Graph, sd: &SpectralDecomposition, t: &mut Table) -> Result<(), FigureError> {
    for j in 0..sd.n() {
        let cb = metrics::centrality(sd, Order::Biharmonic, j)?;
        let cr = metrics::centrality(sd, Order::Resistance, j)?;
        t.push(vec![j.into(), g.degree(j).into(), cb.into(), cr.into()]);
    }
    Ok(())
}

/// Biharmonic and information (resistance) centrality along a path.
pub fn path_centrality(n: usize) -> Result<Table, FigureError> {
    let g = Family::Path.generate(n)?;
    let sd = closedform::analytic_decomposition(Family::Path, n)?;
    let mut t = Table::new(["j", "degree", "c_b", "c_r"]);
    centrality_rows(&g, &sd, &mut t)?;
    Ok(t)
}

/// Both centralities on two stars bridged by a path.
pub fn starry_line(star_size: usize, path_len: usize) -> Result<Table, FigureError> {
    let g = graph::starry_line(star_size, path_len)?;
    let sd = SpectralDecomposition::decompose(&g.laplacian())?;
    let mut t = Table::new(["j", "degree", "c_b", "c_r"]);
    centrality_rows(&g, &sd, &mut t)?;
    Ok(t)
}

/// First two principal components of both embeddings of a seeded
/// preferential-attachment graph, with the centralities for colouring.
pub fn embedding_pca(n: usize, m: usize, seed: u64) -> Result<Table, FigureError> {
    let g = graph::barabasi_albert(n, m, seed)?;
    let sd = SpectralDecomposition::decompose(&g.laplacian())?;
    let bih = metrics::principal_components(&metrics::embed(&sd, EmbeddingKind::Biharmonic), 2)?;
    let res = metrics::principal_components(&metrics::embed(&sd, EmbeddingKind::Resistance), 2)?;
    let mut t = Table::new(["j", "degree", "c_b", "c_r", "bih_pc1", "bih_pc2", "res_pc1", "res_pc2"]);
    for j in 0..n {
        let row: Vec<Cell> = vec![
            j.into(),
            g.degree(j).into(),
            metrics::centrality(&sd, Order::Biharmonic, j)?.into(),
            metrics::centrality(&sd, Order::Resistance, j)?.into(),
            bih.scores[(j, 0)].into(),
            bih.scores[(j, 1)].into(),
            res.scores[(j, 0)].into(),
            res.scores[(j, 1)].into(),
        ];
        t.push(row);
    }
    Ok(t)
}
