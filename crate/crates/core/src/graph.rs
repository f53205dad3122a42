//! Undirected simple graphs: construction, the structured families used
//! throughout the crate, connectivity, and the combinatorial Laplacian.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid parameter for {family}: {reason}")]
    Parameter { family: &'static str, reason: String },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("graph file: {0}")]
    Io(#[from] std::io::Error),
    #[error("graph file: {0}")]
    Json(#[from] serde_json::Error),
}

/// An immutable undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// On-disk representation: `{"n": int, "edges": [[j, k], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Builds a graph, collapsing duplicate and reversed pairs.
    pub fn build(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(GraphError::OutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Self { n, edges, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(low, high)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, j: usize) -> &[usize] {
        &self.adjacency[j]
    }

    pub fn degree(&self, j: usize) -> usize {
        self.adjacency[j].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// `D - A` in exact integer arithmetic.
    pub fn laplacian_int(&self) -> Vec<Vec<i64>> {
        let mut l = vec![vec![0i64; self.n]; self.n];
        for &(a, b) in &self.edges {
            l[a][b] -= 1;
            l[b][a] -= 1;
            l[a][a] += 1;
            l[b][b] += 1;
        }
        l
    }

    pub fn laplacian(&self) -> Array2<f64> {
        let int = self.laplacian_int();
        Array2::from_shape_fn((self.n, self.n), |(i, j)| int[i][j] as f64)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self, GraphError> {
        let pairs: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::build(file.n, &pairs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serialisation is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self, GraphError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), GraphError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// The four families with closed-form spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Complete,
    Star,
    Cycle,
    Path,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Complete, Family::Star, Family::Cycle, Family::Path];

    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Cycle => "cycle",
            Family::Path => "path",
        }
    }

    pub fn min_size(self) -> usize {
        match self {
            Family::Cycle => 3,
            _ => 2,
        }
    }

    pub fn check_size(self, n: usize) -> Result<(), GraphError> {
        if n < self.min_size() {
            return Err(GraphError::Parameter {
                family: self.name(),
                reason: format!("N = {n} is below the minimum {}", self.min_size()),
            });
        }
        Ok(())
    }

    /// Vertex 0 is the star hub; cycle and path follow the natural order.
    pub fn generate(self, n: usize) -> Result<Graph, GraphError> {
        self.check_size(n)?;
        let edges: Vec<(usize, usize)> = match self {
            Family::Complete => (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .collect(),
            Family::Star => (1..n).map(|j| (0, j)).collect(),
            Family::Cycle => (0..n).map(|j| (j, (j + 1) % n)).collect(),
            Family::Path => (0..n - 1).map(|j| (j, j + 1)).collect(),
        };
        Graph::build(n, &edges)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complete" => Ok(Family::Complete),
            "star" => Ok(Family::Star),
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            other => Err(GraphError::UnknownFamily(other.to_string())),
        }
    }
}

/// Every generator the crate knows about, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Structured(Family, usize),
    StarryLine { star_size: usize, path_len: usize },
    BarabasiAlbert { n: usize, m: usize, seed: u64 },
}

impl Generator {
    pub fn generate(&self) -> Result<Graph, GraphError> {
        match *self {
            Generator::Structured(family, n) => family.generate(n),
            Generator::StarryLine { star_size, path_len } => starry_line(star_size, path_len),
            Generator::BarabasiAlbert { n, m, seed } => barabasi_albert(n, m, seed),
        }
    }
}

/// Two stars of `star_size` vertices whose hubs are each joined by one edge
/// to an end of a separate path on `path_len` vertices.
///
/// Layout: first hub 0 with leaves `1..star_size`, path vertices next, then
/// the second hub followed by its leaves.
pub fn starry_line(star_size: usize, path_len: usize) -> Result<Graph, GraphError> {
    if star_size < 2 || path_len < 1 {
        return Err(GraphError::Parameter {
            family: "starry_line",
            reason: format!("need star_size >= 2 and path_len >= 1, got ({star_size}, {path_len})"),
        });
    }
    let n = 2 * star_size + path_len;
    let hub_a = 0;
    let path_start = star_size;
    let path_end = star_size + path_len - 1;
    let hub_b = star_size + path_len;
    let mut edges = Vec::with_capacity(n + 1);
    edges.extend((1..star_size).map(|j| (hub_a, j)));
    edges.extend((hub_b + 1..n).map(|j| (hub_b, j)));
    edges.extend((path_start..path_end).map(|j| (j, j + 1)));
    edges.push((hub_a, path_start));
    edges.push((path_end, hub_b));
    Graph::build(n, &edges)
}

/// Preferential attachment grown from a complete graph on `m + 1` vertices;
/// every arriving vertex links to `m` distinct existing vertices chosen with
/// probability proportional to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    if m == 0 || m >= n {
        return Err(GraphError::Parameter {
            family: "barabasi_albert",
            reason: format!("need 1 <= m < N, got m = {m}, N = {n}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * n);
    // one entry per edge endpoint, so uniform draws are degree-proportional
    let mut endpoints = Vec::with_capacity(2 * m * n);
    for a in 0..=m {
        for b in a + 1..=m {
            edges.push((a, b));
            endpoints.push(a);
            endpoints.push(b);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m + 1..n {
        chosen.clear();
        while chosen.len() < m {
            let target = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        for &t in &chosen {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Graph::build(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_path_and_dedup() {
        let g = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        let h = Graph::build(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(Graph::build(4, &[(0, 4)]), Err(GraphError::OutOfRange(0, 4, 4))));
        assert!(matches!(Graph::build(3, &[(1, 1)]), Err(GraphError::SelfLoop(1))));
        assert!(matches!(Graph::build(0, &[]), Err(GraphError::Empty)));
    }

    #[test]
    fn family_shapes() {
        assert_eq!(Family::Star.generate(4).unwrap().degrees(), vec![3, 1, 1, 1]);
        let c = Family::Cycle.generate(4).unwrap();
        assert_eq!(c.m(), 4);
        assert!(c.degrees().iter().all(|&d| d == 2));
        assert_eq!(Family::Complete.generate(4).unwrap().m(), 6);
        assert!(Family::Cycle.generate(2).is_err());
        assert!(Family::Path.generate(1).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(Family::Path.generate(3).unwrap().is_connected());
        let split = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!split.is_connected());
        assert_eq!(split.component_count(), 2);
        assert!(Graph::build(1, &[]).unwrap().is_connected());
    }

    #[test]
    fn laplacians() {
        let l = Family::Path.generate(3).unwrap().laplacian_int();
        assert_eq!(l, vec![vec![1, -1, 0], vec![-1, 2, -1], vec![0, -1, 1]]);
        let l = Family::Complete.generate(2).unwrap().laplacian_int();
        assert_eq!(l, vec![vec![1, -1], vec![-1, 1]]);
        let l = Family::Cycle.generate(4).unwrap().laplacian_int();
        for j in 0..4 {
            assert_eq!(l[j][j], 2);
            assert_eq!(l[j][(j + 1) % 4], -1);
            assert_eq!(l[j][(j + 3) % 4], -1);
            assert_eq!(l[j][(j + 2) % 4], 0);
        }
    }

    /// Entrywise comparison with the textbook templates for each family.
    #[test]
    fn laplacian_templates() {
        for n in 3..=8 {
            for family in Family::ALL {
                let l = family.generate(n).unwrap().laplacian_int();
                for a in 0..n {
                    for b in 0..n {
                        let expected = match family {
                            Family::Complete => if a == b { n as i64 - 1 } else { -1 },
                            Family::Star => match (a, b) {
                                (0, 0) => n as i64 - 1,
                                (0, _) | (_, 0) => -1,
                                _ if a == b => 1,
                                _ => 0,
                            },
                            Family::Cycle => {
                                let d = (a + n - b) % n;
                                if d == 0 { 2 } else if d == 1 || d == n - 1 { -1 } else { 0 }
                            }
                            Family::Path => {
                                if a == b {
                                    if a == 0 || a == n - 1 { 1 } else { 2 }
                                } else if a.abs_diff(b) == 1 {
                                    -1
                                } else {
                                    0
                                }
                            }
                        };
                        assert_eq!(l[a][b], expected, "{family} N={n} ({a},{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn starry_line_layout() {
        let g = starry_line(20, 5).unwrap();
        assert_eq!(g.n(), 45);
        assert_eq!(g.m(), 2 * 19 + 4 + 2);
        assert!(g.is_connected());
        assert_eq!(g.degree(0), 20);
        assert_eq!(g.degree(25), 20);
        assert_eq!(g.neighbors(20), &[0, 21]);
        assert_eq!(g.neighbors(24), &[23, 25]);
        assert!(starry_line(1, 5).is_err());
    }

    #[test]
    fn barabasi_albert_is_seeded() {
        let a = barabasi_albert(100, 2, 7).unwrap();
        let b = barabasi_albert(100, 2, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, barabasi_albert(100, 2, 8).unwrap());
        assert!(a.is_connected());
        assert_eq!(a.m(), 3 + 2 * 97);
        assert!(barabasi_albert(3, 3, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = barabasi_albert(30, 3, 1).unwrap();
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        assert!(matches!(
            Graph::from_json(r#"{"n": 2, "edges": [[0, 2]]}"#),
            Err(GraphError::OutOfRange(..))
        ));
    }
}
