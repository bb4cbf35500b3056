//! Graph/number codec: simple undirected graphs stored as the
//! below-diagonal half of their adjacency matrix, read row by row.
//!
//! A graph on `m` vertices is identified with the bit sequence
//! `a21 a31 a32 a41 a42 a43 ...` of length `m(m-1)/2`. Any bit string can
//! be interpreted as a graph by choosing the minimal vertex count whose
//! triangle accommodates it and zero-padding the tail, which is the basis
//! of the number-to-graph embedding used by the check-digit pipeline.
//! Vertices are 1-based throughout the public API.

use std::fmt;

/// Errors raised by graph construction and the number codec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// An edge endpoint lies outside `1..=m`.
    VertexOutOfRange { vertex: usize, m: usize },
    /// An edge joins a vertex to itself.
    SelfLoop { vertex: usize },
    /// A digit sequence length is not of the form `m(m-1)/2`.
    NonTriangularLength { len: usize },
    /// A padding position that must be zero holds a one.
    PaddingMismatch { position: usize },
    /// A sequence length disagrees with what the receiver expects.
    LengthMismatch { expected: usize, got: usize },
    /// A structure digit is neither 0 nor 1.
    NonBinaryStructureDigit { position: usize, digit: u32 },
    /// A color digit is not below the modulus.
    ColorOutOfRange { position: usize, digit: u32, k: u32 },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange { vertex, m } => {
                write!(f, "vertex {} out of range 1..={}", vertex, m)
            }
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {}", vertex),
            GraphError::NonTriangularLength { len } => {
                write!(f, "length {} is not m(m-1)/2 for any m", len)
            }
            GraphError::PaddingMismatch { position } => {
                write!(f, "padding bit at position {} is not zero", position)
            }
            GraphError::LengthMismatch { expected, got } => {
                write!(f, "expected {} digits, got {}", expected, got)
            }
            GraphError::NonBinaryStructureDigit { position, digit } => {
                write!(f, "structure digit {} at position {} is not binary", digit, position)
            }
            GraphError::ColorOutOfRange { position, digit, k } => {
                write!(f, "color {} at position {} exceeds modulus {}", digit, position, k)
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Number of below-diagonal entries for `m` vertices: `m(m-1)/2`.
pub fn triangle(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Smallest vertex count `m` with `m(m-1)/2 >= l`, together with the
/// padding bookkeeping needed to invert the embedding later.
///
/// The empty sequence maps to the single-vertex graph.
pub fn minimal_vertex_count(l: usize) -> PaddingInfo {
    let mut m = 1usize;
    while triangle(m) < l {
        m += 1;
    }
    PaddingInfo {
        payload_len: l,
        m,
        pad_count: triangle(m) - l,
    }
}

/// Records how a bit string of length `payload_len` was embedded into the
/// triangle of an `m`-vertex graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaddingInfo {
    /// Length of the original bit string.
    pub payload_len: usize,
    /// Vertex count of the carrier graph.
    pub m: usize,
    /// Number of zero bits appended to fill the triangle.
    pub pad_count: usize,
}

/// Simple undirected graph on vertices `1..=m`, stored as packed
/// below-diagonal adjacency bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    m: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `m` vertices.
    pub fn empty(m: usize) -> Self {
        Graph {
            m,
            bits: vec![0u64; triangle(m).div_ceil(64)],
        }
    }

    /// Vertex count.
    pub fn vertex_count(&self) -> usize {
        self.m
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the pair `(i, j)` with `j < i` in the row-major
    /// below-diagonal order.
    fn bit_index(i: usize, j: usize) -> usize {
        debug_assert!(j < i);
        triangle(i - 1) + (j - 1)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(usize, usize), GraphError> {
        for &w in &[u, v] {
            if w < 1 || w > self.m {
                return Err(GraphError::VertexOutOfRange { vertex: w, m: self.m });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        Ok(if u > v { (u, v) } else { (v, u) })
    }

    /// Whether `{u, v}` is an edge. Endpoint order does not matter.
    pub fn has_edge(&self, u: usize, v: usize) -> Result<bool, GraphError> {
        let (i, j) = self.check_pair(u, v)?;
        let p = Self::bit_index(i, j);
        Ok(self.bits[p / 64] >> (p % 64) & 1 == 1)
    }

    fn set_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let (i, j) = self.check_pair(u, v)?;
        let p = Self::bit_index(i, j);
        self.bits[p / 64] |= 1 << (p % 64);
        Ok(())
    }

    /// All edges as normalized pairs `(i, j)` with `j < i`, in the
    /// row-major bit order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        let mut p = 0usize;
        for i in 2..=self.m {
            for j in 1..i {
                if self.bits[p / 64] >> (p % 64) & 1 == 1 {
                    out.push((i, j));
                }
                p += 1;
            }
        }
        out
    }

    /// Degree of vertex `v`.
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        if v < 1 || v > self.m {
            return Err(GraphError::VertexOutOfRange { vertex: v, m: self.m });
        }
        let mut d = 0usize;
        for u in 1..=self.m {
            if u != v && self.has_edge(u, v)? {
                d += 1;
            }
        }
        Ok(d)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        if v < 1 || v > self.m {
            return Err(GraphError::VertexOutOfRange { vertex: v, m: self.m });
        }
        let mut out = Vec::new();
        for u in 1..=self.m {
            if u != v && self.has_edge(u, v)? {
                out.push(u);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("m", &self.m)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Build a graph from an explicit edge list. Endpoint order within a pair
/// is irrelevant and repeated pairs collapse to a single edge.
pub fn build_graph(m: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(m);
    for &(u, v) in edges {
        g.set_edge(u, v)?;
    }
    Ok(g)
}

/// Serialize the below-diagonal adjacency bits row by row.
pub fn to_structure_bits(g: &Graph) -> Vec<u8> {
    let n = triangle(g.m);
    let mut out = Vec::with_capacity(n);
    for p in 0..n {
        out.push((g.bits[p / 64] >> (p % 64) & 1) as u8);
    }
    out
}

/// Rebuild a graph from below-diagonal adjacency bits. The length must be
/// exactly triangular and every digit binary.
pub fn from_structure_bits(bits: &[u8]) -> Result<Graph, GraphError> {
    let m = vertex_count_for_len(bits.len())?;
    let mut g = Graph::empty(m);
    for (p, &b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => g.bits[p / 64] |= 1 << (p % 64),
            d => {
                return Err(GraphError::NonBinaryStructureDigit { position: p, digit: d as u32 })
            }
        }
    }
    Ok(g)
}

/// The `m` with `triangle(m) == len`, or an error when `len` is not
/// triangular.
pub fn vertex_count_for_len(len: usize) -> Result<usize, GraphError> {
    let mut m = 1usize;
    loop {
        let t = triangle(m);
        if t == len {
            return Ok(m);
        }
        if t > len {
            return Err(GraphError::NonTriangularLength { len });
        }
        m += 1;
    }
}

/// Embed a bit string into the smallest graph whose triangle holds it,
/// zero-padding the tail. The empty string maps to the single-vertex
/// graph. Returns the graph together with the padding record needed to
/// invert the embedding.
pub fn graph_from_number(d: &str) -> Result<(Graph, PaddingInfo), GraphError> {
    let info = minimal_vertex_count(d.len());
    let mut g = Graph::empty(info.m);
    for (p, ch) in d.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => g.bits[p / 64] |= 1 << (p % 64),
            other => {
                return Err(GraphError::NonBinaryStructureDigit {
                    position: p,
                    digit: other as u32,
                })
            }
        }
    }
    Ok((g, info))
}

/// Invert [`graph_from_number`]: strip the recorded padding and return the
/// original bit string. Fails if the graph shape disagrees with the
/// padding record or any padding bit is set.
pub fn number_from_graph(g: &Graph, info: &PaddingInfo) -> Result<String, GraphError> {
    if g.m != info.m {
        return Err(GraphError::LengthMismatch { expected: info.m, got: g.m });
    }
    debug_assert_eq!(info.payload_len + info.pad_count, triangle(info.m));
    let bits = to_structure_bits(g);
    for (p, &b) in bits.iter().enumerate().skip(info.payload_len) {
        if b != 0 {
            return Err(GraphError::PaddingMismatch { position: p });
        }
    }
    Ok(bits[..info.payload_len].iter().map(|&b| char::from(b'0' + b)).collect())
}

/// Assignment of one color digit per vertex, all below a fixed modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    digits: Vec<u32>,
    k: u32,
}

impl Coloring {
    /// Wrap a digit vector, checking every digit against the modulus.
    pub fn new(digits: Vec<u32>, k: u32) -> Result<Self, GraphError> {
        for (position, &digit) in digits.iter().enumerate() {
            if digit >= k {
                return Err(GraphError::ColorOutOfRange { position, digit, k });
            }
        }
        Ok(Coloring { digits, k })
    }

    /// Color of vertex `v` (1-based).
    pub fn color(&self, v: usize) -> u32 {
        self.digits[v - 1]
    }

    /// The color digits in vertex order.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// The modulus the digits live under.
    pub fn modulus(&self) -> u32 {
        self.k
    }

    /// Number of vertices colored.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    /// True for the coloring of the zero-vertex graph.
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Number of distinct colors actually used.
    pub fn distinct_count(&self) -> usize {
        let mut seen: Vec<u32> = self.digits.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Concatenate structure bits and color digits into the single sequence
/// that represents a colored graph. The coloring length must match the
/// vertex count.
pub fn flatten_colored(g: &Graph, c: &Coloring) -> Result<Vec<u32>, GraphError> {
    if c.len() != g.m {
        return Err(GraphError::LengthMismatch { expected: g.m, got: c.len() });
    }
    let mut out: Vec<u32> = to_structure_bits(g).iter().map(|&b| b as u32).collect();
    out.extend_from_slice(c.digits());
    Ok(out)
}

/// Invert [`flatten_colored`] for a declared vertex count and color
/// modulus.
pub fn unflatten_colored(digits: &[u32], m: usize, k: u32) -> Result<(Graph, Coloring), GraphError> {
    let expected = triangle(m) + m;
    if digits.len() != expected {
        return Err(GraphError::LengthMismatch { expected, got: digits.len() });
    }
    let split = triangle(m);
    let mut bits = Vec::with_capacity(split);
    for (position, &d) in digits[..split].iter().enumerate() {
        if d > 1 {
            return Err(GraphError::NonBinaryStructureDigit { position, digit: d });
        }
        bits.push(d as u8);
    }
    let g = from_structure_bits(&bits)?;
    let c = Coloring::new(digits[split..].to_vec(), k)?;
    Ok((g, c))
}
