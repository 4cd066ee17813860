//! Weighted graphs and random regular graph generation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, streams};

/// Restarts allowed before the pairing model gives up.
pub const PAIRING_RESTARTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    /// Every edge weight 1.
    Unit,
    /// Uniform over {±1, ±2, ±3}.
    IntegerSet,
    /// Uniform on [0, 1).
    Uniform,
}

impl std::str::FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(WeightMode::Unit),
            "integer-set" | "int" => Ok(WeightMode::IntegerSet),
            "uniform" => Ok(WeightMode::Uniform),
            other => Err(Error::usage(format!(
                "unknown weight mode '{other}' (expected unit, integer-set or uniform)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected graph without self-loops or parallel edges. Edges are stored
/// with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<RawGraph> for WeightedGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        WeightedGraph::new(raw.n_vertices, raw.edges)
    }
}

impl From<WeightedGraph> for RawGraph {
    fn from(g: WeightedGraph) -> Self {
        RawGraph {
            n_vertices: g.n_vertices,
            edges: g.edges.iter().map(|e| (e.u, e.v, e.weight)).collect(),
        }
    }
}

impl WeightedGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::usage("graph needs at least one vertex"));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::usage(format!(
                    "edge ({a}, {b}) references a vertex >= {n_vertices}"
                )));
            }
            if a == b {
                return Err(Error::usage(format!("self-loop on vertex {a}")));
            }
            if !w.is_finite() {
                return Err(Error::usage(format!("edge ({a}, {b}) has non-finite weight")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(Error::usage(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, weight: w });
        }
        out.sort_by_key(|e| (e.u, e.v));
        Ok(Self {
            n_vertices,
            edges: out,
        })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n_vertices, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::unweighted(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::unweighted(n, &edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.u == vertex || e.v == vertex)
            .count()
    }

    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight.fract() == 0.0)
    }

    /// `Σ w_uv z_u z_v` with `z = 1 - 2·bit`, bit `q` of `x` being vertex `q`.
    pub fn cost(&self, x: usize) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let same = ((x >> e.u) & 1) == ((x >> e.v) & 1);
                if same {
                    e.weight
                } else {
                    -e.weight
                }
            })
            .sum()
    }

    /// The cost of every basis state, indexed by bitstring.
    pub fn cost_diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n_vertices).map(|x| self.cost(x)).collect()
    }

    /// Exhaustive minimum of the cost and the bitstrings attaining it.
    pub fn brute_force_minimum(&self) -> Result<(f64, Vec<usize>)> {
        if self.n_vertices > 24 {
            return Err(Error::usage(format!(
                "brute force over {} vertices is too large",
                self.n_vertices
            )));
        }
        let mut best = f64::INFINITY;
        let mut arg = Vec::new();
        for x in 0..1usize << self.n_vertices {
            let c = self.cost(x);
            if c < best {
                best = c;
                arg.clear();
                arg.push(x);
            } else if c == best {
                arg.push(x);
            }
        }
        Ok((best, arg))
    }

    /// Parses the text form: a first line `n <count>` followed by one
    /// `u v w` line per edge. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::usage("graph file is empty"))?;
        let mut head = header.split_whitespace();
        let n = match (head.next(), head.next(), head.next()) {
            (Some("n"), Some(n), None) => n
                .parse::<usize>()
                .map_err(|_| Error::usage(format!("bad vertex count '{n}' in graph header")))?,
            _ => {
                return Err(Error::usage(format!(
                    "graph header must be 'n <n_vertices>', got '{header}'"
                )))
            }
        };
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::usage(format!("graph line {lineno}: expected 'u v w', got '{line}'"));
            if fields.len() != 3 {
                return Err(bad());
            }
            let u = fields[0].parse::<usize>().map_err(|_| bad())?;
            let v = fields[1].parse::<usize>().map_err(|_| bad())?;
            let w = fields[2].parse::<f64>().map_err(|_| bad())?;
            edges.push((u, v, w));
        }
        Self::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n_vertices);
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.weight);
        }
        s
    }
}

/// Random `degree`-regular graph from the pairing (configuration) model.
///
/// Pairings with a self-loop or repeated edge are discarded and redrawn,
/// up to [`PAIRING_RESTARTS`] times.
pub fn random_regular_graph(
    n_vertices: usize,
    degree: usize,
    mode: WeightMode,
    seed: u64,
) -> Result<WeightedGraph> {
    if degree == 0 || n_vertices <= degree {
        return Err(Error::usage(format!(
            "need n_vertices > degree >= 1, got n={n_vertices}, degree={degree}"
        )));
    }
    if !(n_vertices * degree).is_multiple_of(2) {
        return Err(Error::usage(format!(
            "n_vertices * degree must be even, got {n_vertices} * {degree}"
        )));
    }
    let mut rng = rng::stream(seed, streams::GRAPH);
    let mut points: Vec<usize> = (0..n_vertices * degree).map(|p| p / degree).collect();
    for _ in 0..PAIRING_RESTARTS {
        points.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let ok = points.chunks(2).all(|pair| {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            a != b && seen.insert((a, b))
        });
        if !ok {
            continue;
        }
        let edges = seen
            .into_iter()
            .map(|(u, v)| {
                let w = match mode {
                    WeightMode::Unit => 1.0,
                    WeightMode::IntegerSet => {
                        let m = rng.random_range(1..=3) as f64;
                        if rng.random::<bool>() {
                            m
                        } else {
                            -m
                        }
                    }
                    WeightMode::Uniform => rng.random::<f64>(),
                };
                (u, v, w)
            })
            .collect();
        return WeightedGraph::new(n_vertices, edges);
    }
    Err(Error::Generation(format!(
        "no simple {degree}-regular pairing on {n_vertices} vertices after {PAIRING_RESTARTS} restarts"
    )))
}
