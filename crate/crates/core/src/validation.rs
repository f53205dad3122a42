//! Cross-checks of the spectral pipeline against the closed-form catalog
//! and, on small graphs, the Lyapunov oracle.
//!
//! Each row of the resulting table covers one `(family, quantity, N)`
//! combination and records the worst relative error over all vertex
//! arguments, with the expected and observed values at that argument.

use serde::{Deserialize, Serialize};

use crate::closedform::{self, Quantity, QuantityKind};
use crate::coherence::CoherenceReport;
use crate::graph::Family;
use crate::metrics::{MetricReport, Order};
use crate::oracles::{LyapunovOracle, Output};
use crate::spectral::SpectralDecomposition;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub quantities: Vec<QuantityKind>,
    pub tolerance: f64,
    /// Largest `N` for which the Lyapunov oracle is also run (0 disables it).
    pub lyapunov_max_n: usize,
    /// Multiplies the first nonzero eigenvalue by this factor before any
    /// spectral quantity is evaluated.
    pub perturbation: Option<f64>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            sizes: (3..=64).collect(),
            quantities: QuantityKind::ALL.to_vec(),
            tolerance: DEFAULT_TOLERANCE,
            lyapunov_max_n: 8,
            perturbation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub family: Family,
    pub quantity: String,
    pub n: usize,
    /// Vertex arguments of the worst case, empty for graph-level quantities.
    pub args: Vec<usize>,
    pub expected: f64,
    pub observed: f64,
    pub rel_error: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub failures: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn relative_error(expected: f64, observed: f64) -> f64 {
    if expected == observed {
        return 0.0;
    }
    let diff = (observed - expected).abs();
    if expected == 0.0 {
        diff
    } else {
        diff / expected.abs()
    }
}

/// Accumulates the worst case for one row.
struct Worst {
    args: Vec<usize>,
    expected: f64,
    observed: f64,
    rel: f64,
    note: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Self { args: Vec::new(), expected: f64::NAN, observed: f64::NAN, rel: -1.0, note: None }
    }

    fn push(&mut self, args: &[usize], expected: f64, observed: f64) {
        let mut rel = relative_error(expected, observed);
        if rel.is_nan() {
            rel = f64::INFINITY;
        }
        if rel > self.rel {
            *self = Self { args: args.to_vec(), expected, observed, rel, note: None };
        }
    }

    fn fail(&mut self, note: String) {
        self.rel = f64::INFINITY;
        self.note = Some(note);
    }

    fn into_check(self, family: Family, quantity: &str, n: usize, tol: f64) -> Check {
        let rel_error = self.rel.max(0.0);
        Check {
            family,
            quantity: quantity.to_string(),
            n,
            args: self.args,
            expected: self.expected,
            observed: self.observed,
            rel_error,
            pass: rel_error <= tol,
            note: self.note,
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (0..n).filter(move |&k| k != j).map(move |k| (j, k)))
}

fn compare_quantity(
    family: Family,
    n: usize,
    kind: QuantityKind,
    sd: &SpectralDecomposition,
    metrics: &MetricReport,
    coherence: &CoherenceReport,
) -> Worst {
    let mut w = Worst::new();
    let mut cmp = |args: &[usize], q: Quantity, observed: f64| match closedform::predict_scalar(family, n, q) {
        Ok(expected) => w.push(args, expected, observed),
        Err(e) => w.fail(e.to_string()),
    };
    match kind {
        QuantityKind::SquaredDistance => {
            for (j, k) in pairs(n) {
                cmp(&[j, k], Quantity::SquaredDistance { j, k }, metrics.squared_distances[j][k]);
            }
        }
        QuantityKind::KirchhoffIndex => cmp(&[], Quantity::KirchhoffIndex, metrics.kirchhoff_index),
        QuantityKind::VertexIndex => {
            for j in 0..n {
                cmp(&[j], Quantity::VertexIndex { j }, metrics.vertex_indices[j]);
            }
        }
        QuantityKind::Centrality => {
            for j in 0..n {
                cmp(&[j], Quantity::Centrality { j }, metrics.centralities[j]);
            }
        }
        QuantityKind::PairwiseVariance => {
            for (j, k) in pairs(n) {
                cmp(&[j, k], Quantity::PairwiseVariance { j, k }, coherence.hso_pairwise[j][k]);
            }
        }
        QuantityKind::VertexVariance => {
            for j in 0..n {
                cmp(&[j], Quantity::VertexVariance { j }, coherence.hso_vertex[j]);
            }
        }
        QuantityKind::TotalVariance => cmp(&[], Quantity::TotalVariance, coherence.hso_total),
        QuantityKind::Eigenvalues => {
            let expected = closedform::eigenvalues(family, n);
            let observed = sd.eigenvalues();
            // the zero eigenvalue is checked absolutely against the null tolerance
            if observed[0].abs() > sd.null_tol() {
                w.fail(format!("null eigenvalue {:e} exceeds tolerance", observed[0]));
            }
            for i in 1..n {
                w.push(&[i], expected[i], observed[i]);
            }
        }
    }
    w
}

fn lyapunov_checks(family: Family, n: usize, sd: &SpectralDecomposition, tol: f64) -> Vec<Check> {
    let laplacian = match family.generate(n) {
        Ok(g) => g.laplacian(),
        Err(e) => {
            let mut w = Worst::new();
            w.fail(e.to_string());
            return vec![w.into_check(family, "lyapunov", n, tol)];
        }
    };
    let oracle = match LyapunovOracle::new(sd, &laplacian) {
        Ok(o) => o,
        Err(e) => {
            let mut w = Worst::new();
            w.fail(e.to_string());
            return vec![w.into_check(family, "lyapunov", n, tol)];
        }
    };
    let mut pair = Worst::new();
    for (j, k) in pairs(n).filter(|(j, k)| j < k) {
        match (oracle.variance(Output::Pairwise(j, k)), closedform::predict_scalar(family, n, Quantity::PairwiseVariance { j, k })) {
            (Ok(obs), Ok(exp)) => pair.push(&[j, k], exp, obs),
            (Err(e), _) => pair.fail(e.to_string()),
            (_, Err(e)) => pair.fail(e.to_string()),
        }
    }
    let mut vertex = Worst::new();
    for j in 0..n {
        match (oracle.variance(Output::Vertex(j)), closedform::predict_scalar(family, n, Quantity::VertexVariance { j })) {
            (Ok(obs), Ok(exp)) => vertex.push(&[j], exp, obs),
            (Err(e), _) => vertex.fail(e.to_string()),
            (_, Err(e)) => vertex.fail(e.to_string()),
        }
    }
    vec![
        pair.into_check(family, "lyapunov_hso_pairwise", n, tol),
        vertex.into_check(family, "lyapunov_hso_vertex", n, tol),
    ]
}

/// Checks for a single `(family, N)`.
pub fn validate_graph(family: Family, n: usize, config: &ValidationConfig) -> Vec<Check> {
    let tol = config.tolerance;
    let fail_all = |note: String| {
        config
            .quantities
            .iter()
            .map(|q| {
                let mut w = Worst::new();
                w.fail(note.clone());
                w.into_check(family, q.name(), n, tol)
            })
            .collect::<Vec<_>>()
    };
    let graph = match family.generate(n) {
        Ok(g) => g,
        Err(e) => return fail_all(e.to_string()),
    };
    let mut sd = match SpectralDecomposition::decompose(&graph.laplacian()) {
        Ok(sd) => sd,
        Err(e) => return fail_all(e.to_string()),
    };
    if let Some(factor) = config.perturbation {
        sd = sd.with_scaled_eigenvalue(1, factor);
    }
    let metrics = match MetricReport::compute(&sd, Order::Biharmonic) {
        Ok(m) => m,
        Err(e) => return fail_all(e.to_string()),
    };
    let coherence = CoherenceReport::compute(&sd);
    let mut checks: Vec<Check> = config
        .quantities
        .iter()
        .map(|&kind| compare_quantity(family, n, kind, &sd, &metrics, &coherence).into_check(family, kind.name(), n, tol))
        .collect();
    if n <= config.lyapunov_max_n {
        checks.extend(lyapunov_checks(family, n, &sd, tol));
    }
    checks
}

pub fn run(config: &ValidationConfig) -> ValidationReport {
    let mut checks = Vec::new();
    for &family in &config.families {
        for &n in &config.sizes {
            if n < family.min_size() {
                continue;
            }
            checks.extend(validate_graph(family, n, config));
        }
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    ValidationReport { tolerance: config.tolerance, checks, failures }
}
