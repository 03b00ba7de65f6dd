//! MAX-CUT instances and their classical cost functions.
//!
//! Bit strings index computational basis states with vertex 0 as the most
//! significant bit, so `011` on three vertices is basis index 3.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest vertex count accepted by enumeration-based operations.
pub const MAX_VERTICES: usize = 24;

/// Undirected weighted graph stored as a dense symmetric adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    adjacency: Vec<f64>,
}

impl Graph {
    /// Graph with `num_vertices` vertices and no edges.
    pub fn edgeless(num_vertices: usize) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::Domain("a graph needs at least one vertex".into()));
        }
        Ok(Self {
            num_vertices,
            adjacency: vec![0.0; num_vertices * num_vertices],
        })
    }

    /// Builds a graph from `(u, v, weight)` triples.
    ///
    /// Self loops, duplicate edges, out-of-range endpoints and negative or
    /// non-finite weights are rejected.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Self::edgeless(num_vertices)?;
        for &(u, v, w) in edges {
            g.insert_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Unit-weight complete graph on `n` vertices. `complete(2)` is the
    /// single-edge instance.
    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
        Self::from_edges(n, &edges)
    }

    /// Builds a graph from a full adjacency matrix, checking symmetry, a zero
    /// diagonal and nonnegative finite weights.
    pub fn from_adjacency(matrix: &[Vec<f64>]) -> Result<Self> {
        let n = matrix.len();
        let mut g = Self::edgeless(n)?;
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: row.len(),
                });
            }
            if row[i] != 0.0 {
                return Err(Error::Domain(format!("adjacency[{i}][{i}] must be 0")));
            }
            for (j, &w) in row.iter().enumerate() {
                if matrix[j][i] != w {
                    return Err(Error::Domain(format!("adjacency is not symmetric at ({i}, {j})")));
                }
                if !(w.is_finite() && w >= 0.0) {
                    return Err(Error::Domain(format!("invalid weight {w} at ({i}, {j})")));
                }
                g.adjacency[i * n + j] = w;
            }
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        let n = self.num_vertices;
        if u >= n || v >= n {
            return Err(Error::Index {
                index: u.max(v),
                num_qubits: n,
            });
        }
        if u == v {
            return Err(Error::Domain(format!("self loop on vertex {u}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::Domain(format!("invalid edge weight {w}")));
        }
        if self.adjacency[u * n + v] != 0.0 {
            return Err(Error::Domain(format!("duplicate edge ({u}, {v})")));
        }
        self.adjacency[u * n + v] = w;
        self.adjacency[v * n + u] = w;
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i * self.num_vertices + j]
    }

    /// Edges `(i, j, w)` with `i < j` and `w != 0`, ordered by `(i, j)`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.num_vertices;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let w = self.weight(i, j);
                (w != 0.0).then_some((i, j, w))
            })
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.num_vertices {
            return Err(Error::Dimension {
                expected: self.num_vertices,
                actual: len,
            });
        }
        Ok(())
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.num_vertices > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "num_vertices",
                value: self.num_vertices,
                limit: MAX_VERTICES,
            });
        }
        Ok(())
    }

    /// Parses the text graph format: a `n <count>` header followed by
    /// `u v [w]` edge lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph.as_mut() {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(Error::parse(line_no, "expected header `n <num_vertices>`"));
                    }
                    let n: usize = fields[1]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "invalid vertex count"))?;
                    graph = Some(Graph::edgeless(n).map_err(|e| Error::parse(line_no, e.to_string()))?);
                }
                Some(g) => {
                    if !(2..=3).contains(&fields.len()) {
                        return Err(Error::parse(line_no, "expected `u v [w]`"));
                    }
                    let u: usize = fields[0]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "invalid vertex index"))?;
                    let v: usize = fields[1]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "invalid vertex index"))?;
                    let w: f64 = match fields.get(2) {
                        Some(s) => s.parse().map_err(|_| Error::parse(line_no, "invalid edge weight"))?,
                        None => 1.0,
                    };
                    g.insert_edge(u, v, w)
                        .map_err(|e| Error::parse(line_no, e.to_string()))?;
                }
            }
        }
        graph.ok_or_else(|| Error::parse(0, "missing `n <num_vertices>` header"))
    }

    /// Serializes to the text graph format accepted by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.num_vertices);
        for (i, j, w) in self.edges() {
            if w == 1.0 {
                out.push_str(&format!("{i} {j}\n"));
            } else {
                out.push_str(&format!("{i} {j} {w:?}\n"));
            }
        }
        out
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

/// Assignment of every vertex to one side of a cut.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Domain(format!("bit value {b} is not 0 or 1")));
        }
        Ok(Self(bits))
    }

    /// Bit string of basis index `index` on `len` bits, most significant bit first.
    pub fn from_index(index: usize, len: usize) -> Self {
        Self((0..len).map(|q| ((index >> (len - 1 - q)) & 1) as u8).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Complement of every bit.
    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|b| 1 - b).collect())
    }

    /// Spin vector `z_i = 2 x_i - 1`.
    pub fn to_spins(&self) -> Vec<i8> {
        self.0.iter().map(|&b| 2 * b as i8 - 1).collect()
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self(bits))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Label of basis index `index` on `n` bits, e.g. `label(2, 2) == "10"`.
pub fn basis_label(index: usize, n: usize) -> String {
    BitString::from_index(index, n).to_string()
}

/// Total weight of edges crossing the partition.
pub fn cut_value(g: &Graph, x: &BitString) -> Result<f64> {
    g.check_len(x.len())?;
    let bits = x.bits();
    Ok(g.edges()
        .into_iter()
        .map(|(i, j, w)| {
            let (xi, xj) = (bits[i] as f64, bits[j] as f64);
            w * (xi + xj - 2.0 * xi * xj)
        })
        .sum())
}

/// Minimization cost, the negated cut value.
pub fn cost(g: &Graph, x: &BitString) -> Result<f64> {
    Ok(-cut_value(g, x)?)
}

/// Cost in spin variables, `-1/2 sum_{i<j} A_ij (1 - z_i z_j)`.
pub fn cost_spin(g: &Graph, z: &[i8]) -> Result<f64> {
    g.check_len(z.len())?;
    if let Some(s) = z.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::Domain(format!("spin value {s} is not -1 or +1")));
    }
    Ok(-0.5
        * g.edges()
            .into_iter()
            .map(|(i, j, w)| w * (1.0 - (z[i] * z[j]) as f64))
            .sum::<f64>())
}

/// Exhaustive evaluation of every bit string.
#[derive(Debug, Clone, PartialEq)]
pub struct CutReport {
    /// All minimizers, sorted lexicographically.
    pub best_strings: Vec<BitString>,
    pub best_cost: f64,
    pub cost_table: BTreeMap<BitString, f64>,
}

pub fn brute_force(g: &Graph) -> Result<CutReport> {
    let diag = diagonal_costs(g)?;
    let n = g.num_vertices();
    let best_cost = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let cost_table: BTreeMap<_, _> = diag
        .iter()
        .enumerate()
        .map(|(k, &c)| (BitString::from_index(k, n), c))
        .collect();
    let best_strings = cost_table
        .iter()
        .filter(|(_, &c)| c == best_cost)
        .map(|(x, _)| x.clone())
        .collect();
    Ok(CutReport {
        best_strings,
        best_cost,
        cost_table,
    })
}

/// Diagonal of the cost Hamiltonian: entry `k` is the cost of basis state `k`.
pub fn diagonal_costs(g: &Graph) -> Result<Vec<f64>> {
    g.check_enumerable()?;
    let n = g.num_vertices();
    let edges = g.edges();
    let bit = |k: usize, q: usize| (k >> (n - 1 - q)) & 1;
    Ok((0..1usize << n)
        .map(|k| {
            -edges
                .iter()
                .filter(|&&(i, j, _)| bit(k, i) != bit(k, j))
                .map(|&(_, _, w)| w)
                .sum::<f64>()
        })
        .collect())
}
