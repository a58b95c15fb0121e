//! Simple undirected graphs from edge lists, and degree-pair edge partitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Unordered pair of vertex degrees, stored with `low <= high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreePair {
    low: u32,
    high: u32,
}

impl DegreePair {
    pub fn new(a: u32, b: u32) -> Self {
        DegreePair { low: a.min(b), high: a.max(b) }
    }

    pub fn low(&self) -> u32 {
        self.low
    }

    pub fn high(&self) -> u32 {
        self.high
    }
}

impl fmt::Display for DegreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.low, self.high)
    }
}

/// A validated simple graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    degrees: Vec<u32>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges (in either
    /// orientation) and endpoints `>= vertex_count`.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        let mut degrees = vec![0u32; vertex_count];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Validation(format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::Validation(format!(
                    "edge ({u}, {v}) exceeds vertex count {vertex_count}"
                )));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(GraphError::Validation(format!("duplicate edge ({u}, {v})")));
            }
            degrees[u] += 1;
            degrees[v] += 1;
        }
        Ok(Graph { vertex_count, edges: set, degrees })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// The common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<u32> {
        let first = *self.degrees.first()?;
        self.degrees.iter().all(|&d| d == first).then_some(first)
    }

    /// Whether the graph is connected; the empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }
}

/// Edge counts grouped by the unordered pair of endpoint degrees.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreePairPartition {
    pub counts: BTreeMap<DegreePair, u64>,
    pub total_edges: u64,
    pub vertex_count: u64,
}

impl DegreePairPartition {
    /// Partition from explicit counts; `total_edges` is their sum.
    pub fn from_counts<I>(vertex_count: u64, counts: I) -> Self
    where
        I: IntoIterator<Item = (DegreePair, u64)>,
    {
        let mut map = BTreeMap::new();
        for (pair, count) in counts {
            *map.entry(pair).or_insert(0) += count;
        }
        let total_edges = map.values().sum();
        DegreePairPartition { counts: map, total_edges, vertex_count }
    }

    pub fn count(&self, pair: DegreePair) -> u64 {
        self.counts.get(&pair).copied().unwrap_or(0)
    }

    /// Sum over edges of `d_u + d_v`, the first Zagreb index.
    pub fn degree_sum_over_edges(&self) -> u64 {
        self.counts
            .iter()
            .map(|(pair, c)| c * u64::from(pair.low + pair.high))
            .sum()
    }
}

/// Tallies every edge by its endpoint degrees.
pub fn degree_pair_partition(graph: &Graph) -> DegreePairPartition {
    DegreePairPartition::from_counts(
        graph.vertex_count() as u64,
        graph
            .edges()
            .map(|(u, v)| (DegreePair::new(graph.degree(u), graph.degree(v)), 1)),
    )
}

fn parse_id(token: &str, line: usize) -> Result<usize, GraphError> {
    token.parse::<usize>().map_err(|_| GraphError::Parse {
        line,
        message: format!("expected a nonnegative integer, found {token:?}"),
    })
}

/// Reads the edge-list format: an optional first line `# n m` declaring the
/// vertex and edge counts, then one `u v` pair per line. Other lines starting
/// with `#` and blank lines are ignored. Without a header the vertex count is
/// one more than the largest id.
pub fn load_edge_list<R: Read>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut first_content = true;
    for (index, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if first_content {
                let fields: Vec<&str> = comment.split_whitespace().collect();
                if let [n, m] = fields.as_slice() {
                    if let (Ok(n), Ok(m)) = (n.parse::<usize>(), m.parse::<usize>()) {
                        header = Some((n, m));
                    }
                }
            }
            first_content = false;
            continue;
        }
        first_content = false;
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            [u, v] => edges.push((parse_id(u, line_no)?, parse_id(v, line_no)?)),
            _ => {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: format!("expected two vertex ids, found {} fields", fields.len()),
                })
            }
        }
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let vertex_count = match header {
        Some((n, m)) => {
            if m != edges.len() {
                return Err(GraphError::Validation(format!(
                    "header declares {m} edges but {} were listed",
                    edges.len()
                )));
            }
            n
        }
        None => implied,
    };
    Graph::new(vertex_count, edges)
}

pub fn load_edge_list_str(text: &str) -> Result<Graph, GraphError> {
    load_edge_list(text.as_bytes())
}
