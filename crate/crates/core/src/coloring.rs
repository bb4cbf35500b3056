//! Exact proper-coloring routines for the small graphs the check-digit
//! scheme works with, plus the classical bounds used to bracket the
//! chromatic number before the exact search runs.
//!
//! All exact searches are deterministic. `find_coloring` returns the
//! lexicographically smallest proper coloring under the fixed vertex
//! order `1..=m` with colors tried in ascending order, so repeated runs
//! and independent implementations agree digit for digit.

use crate::graph::{Coloring, Graph};
use std::fmt;

/// Hard ceiling for the exact searches. Everything in the check-digit
/// and sharing pipelines stays far below it; the guard exists so a
/// malformed input cannot trigger an exponential blowup.
pub const MAX_EXACT_VERTICES: usize = 24;

/// Errors raised by the coloring routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringError {
    /// The graph exceeds [`MAX_EXACT_VERTICES`].
    GraphTooLarge { m: usize, max: usize },
    /// A coloring's length disagrees with the vertex count.
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for ColoringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringError::GraphTooLarge { m, max } => {
                write!(f, "graph on {} vertices exceeds exact-search limit {}", m, max)
            }
            ColoringError::LengthMismatch { expected, got } => {
                write!(f, "coloring has {} digits, graph has {} vertices", got, expected)
            }
        }
    }
}

impl std::error::Error for ColoringError {}

/// Outcome of checking a coloring against a graph: either every edge is
/// bichromatic, or the first offending edge in row-major order is named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringVerdict {
    /// True when no edge joins two same-colored vertices.
    pub valid: bool,
    /// The first monochromatic edge `(i, j)` with `j < i` in row-major
    /// order, present exactly when `valid` is false.
    pub first_violation: Option<(usize, usize)>,
}

/// Check whether `c` is a proper coloring of `g`. Works for any size;
/// only the coloring length is validated.
pub fn is_valid_coloring(g: &Graph, c: &Coloring) -> Result<ColoringVerdict, ColoringError> {
    if c.len() != g.vertex_count() {
        return Err(ColoringError::LengthMismatch { expected: g.vertex_count(), got: c.len() });
    }
    for (i, j) in g.edges() {
        if c.color(i) == c.color(j) {
            return Ok(ColoringVerdict { valid: false, first_violation: Some((i, j)) });
        }
    }
    Ok(ColoringVerdict { valid: true, first_violation: None })
}

fn size_guard(g: &Graph) -> Result<(), ColoringError> {
    if g.vertex_count() > MAX_EXACT_VERTICES {
        return Err(ColoringError::GraphTooLarge { m: g.vertex_count(), max: MAX_EXACT_VERTICES });
    }
    Ok(())
}

/// Adjacency masks over vertices `0..m` (0-based), one word per vertex.
/// Fits in `u32` because of [`MAX_EXACT_VERTICES`].
fn adjacency_masks(g: &Graph) -> Vec<u32> {
    let m = g.vertex_count();
    let mut adj = vec![0u32; m];
    for (i, j) in g.edges() {
        adj[i - 1] |= 1 << (j - 1);
        adj[j - 1] |= 1 << (i - 1);
    }
    adj
}

/// Backtracking search for the lexicographically smallest proper coloring
/// with at most `n` colors.
///
/// At depth `v` only colors up to one past the maximum already in use are
/// tried: if the lexicographically smallest coloring skipped a color,
/// swapping the skipped color with the one actually used (on vertex `v`
/// and everywhere later) would produce a smaller proper coloring, so the
/// cap never excludes the answer.
fn lex_smallest(adj: &[u32], n: usize, colors: &mut Vec<u32>, max_used: usize) -> bool {
    let v = colors.len();
    if v == adj.len() {
        return true;
    }
    let cap = n.min(max_used + 2);
    for c in 0..cap as u32 {
        let conflict = (0..v).any(|u| adj[v] >> u & 1 == 1 && colors[u] == c);
        if conflict {
            continue;
        }
        colors.push(c);
        if lex_smallest(adj, n, colors, max_used.max(c as usize + 1)) {
            return true;
        }
        colors.pop();
    }
    false
}

/// The lexicographically smallest proper coloring of `g` with at most `n`
/// colors, or `None` when no proper `n`-coloring exists. The returned
/// coloring uses modulus `n` (or 1 for the degenerate `n = 0` on the
/// empty graph).
pub fn find_coloring(g: &Graph, n: usize) -> Result<Option<Coloring>, ColoringError> {
    size_guard(g)?;
    let m = g.vertex_count();
    if n == 0 {
        return Ok(if m == 0 {
            Some(Coloring::new(Vec::new(), 1).expect("empty coloring"))
        } else {
            None
        });
    }
    let adj = adjacency_masks(g);
    let mut colors = Vec::with_capacity(m);
    if lex_smallest(&adj, n, &mut colors, 0) {
        Ok(Some(Coloring::new(colors, n as u32).expect("solver digits below n")))
    } else {
        Ok(None)
    }
}

fn colorable(adj: &[u32], n: usize, colors: &mut Vec<u32>, max_used: usize) -> bool {
    let v = colors.len();
    if v == adj.len() {
        return true;
    }
    // Trying colors beyond one past the maximum in use only revisits
    // colorings equivalent up to renaming, so the cap loses nothing.
    let cap = n.min(max_used + 2);
    for c in 0..cap as u32 {
        if (0..v).any(|u| adj[v] >> u & 1 == 1 && colors[u] == c) {
            continue;
        }
        colors.push(c);
        if colorable(adj, n, colors, max_used.max(c as usize + 1)) {
            return true;
        }
        colors.pop();
    }
    false
}

/// Whether `g` admits a proper coloring with at most `n` colors.
pub fn is_n_colorable(g: &Graph, n: usize) -> Result<bool, ColoringError> {
    size_guard(g)?;
    let m = g.vertex_count();
    if n >= m {
        return Ok(true);
    }
    if n == 0 {
        return Ok(m == 0);
    }
    let adj = adjacency_masks(g);
    let mut colors = Vec::with_capacity(m);
    Ok(colorable(&adj, n, &mut colors, 0))
}

/// The chromatic number, found by exact search upward from the clique
/// lower bound.
pub fn chromatic_number(g: &Graph) -> Result<usize, ColoringError> {
    size_guard(g)?;
    if g.vertex_count() == 0 {
        return Ok(0);
    }
    let mut n = clique_lower_bound(g)?.max(1);
    loop {
        if is_n_colorable(g, n)? {
            return Ok(n);
        }
        n += 1;
    }
}

/// Greedy coloring in saturation order: repeatedly color the uncolored
/// vertex whose neighborhood shows the most distinct colors, breaking
/// ties by higher degree and then lower index, always using the smallest
/// color its neighbors permit. Deterministic, any graph size.
pub fn dsatur_coloring(g: &Graph) -> Coloring {
    let m = g.vertex_count();
    if m == 0 {
        return Coloring::new(Vec::new(), 1).expect("empty coloring");
    }
    let neighbors = neighbor_lists(g);
    let degree: Vec<usize> = neighbors.iter().map(|ns| ns.len()).collect();
    let mut color: Vec<Option<u32>> = vec![None; m];
    let mut neighbor_colors: Vec<Vec<bool>> = vec![vec![false; m + 1]; m];
    let mut saturation = vec![0usize; m];

    for _ in 0..m {
        let v = (0..m)
            .filter(|&v| color[v].is_none())
            .max_by(|&a, &b| {
                saturation[a]
                    .cmp(&saturation[b])
                    .then(degree[a].cmp(&degree[b]))
                    .then(b.cmp(&a))
            })
            .expect("an uncolored vertex remains");
        let c = (0..).find(|&c| !neighbor_colors[v][c as usize]).expect("palette is open-ended");
        color[v] = Some(c);
        for &u in &neighbors[v] {
            if !neighbor_colors[u][c as usize] {
                neighbor_colors[u][c as usize] = true;
                saturation[u] += 1;
            }
        }
    }

    let digits: Vec<u32> = color.into_iter().map(|c| c.expect("all colored")).collect();
    let k = digits.iter().max().map_or(1, |&c| c + 1);
    Coloring::new(digits, k).expect("greedy digits below own maximum + 1")
}

fn is_complete(g: &Graph) -> bool {
    let m = g.vertex_count();
    g.edge_count() == m * (m - 1) / 2
}

fn neighbor_lists(g: &Graph) -> Vec<Vec<usize>> {
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, j) in g.edges() {
        lists[i - 1].push(j - 1);
        lists[j - 1].push(i - 1);
    }
    lists
}

fn is_odd_cycle(g: &Graph) -> bool {
    let m = g.vertex_count();
    if m < 3 || m.is_multiple_of(2) || g.edge_count() != m {
        return false;
    }
    // Every vertex of degree 2 plus connectivity makes a single cycle.
    let lists = neighbor_lists(g);
    if lists.iter().any(|ns| ns.len() != 2) {
        return false;
    }
    connected_components(g).len() == 1
}

fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let m = g.vertex_count();
    let lists = neighbor_lists(g);
    let mut assigned = vec![false; m];
    let mut components = Vec::new();
    for start in 0..m {
        if assigned[start] {
            continue;
        }
        let mut members = vec![start];
        assigned[start] = true;
        let mut head = 0usize;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &u in &lists[v] {
                if !assigned[u] {
                    assigned[u] = true;
                    members.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

fn induced_subgraph(g: &Graph, members: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for (a, &u) in members.iter().enumerate() {
        for (b, &v) in members.iter().enumerate().skip(a + 1) {
            if g.has_edge(u + 1, v + 1).expect("members in range") {
                edges.push((a + 1, b + 1));
            }
        }
    }
    crate::graph::build_graph(members.len(), &edges).expect("relabeled edges in range")
}

/// Classical upper bound on the chromatic number: the vertex count for a
/// complete graph, 3 for an odd cycle, the maximum degree otherwise; 1
/// for an edgeless graph, and the maximum over components when the graph
/// is disconnected.
pub fn brooks_upper_bound(g: &Graph) -> usize {
    let m = g.vertex_count();
    if m == 0 {
        return 0;
    }
    if g.edge_count() == 0 {
        return 1;
    }
    let components = connected_components(g);
    if components.len() > 1 {
        return components
            .iter()
            .map(|members| brooks_upper_bound(&induced_subgraph(g, members)))
            .max()
            .expect("at least one component");
    }
    if is_complete(g) {
        return m;
    }
    if is_odd_cycle(g) {
        return 3;
    }
    (1..=m).map(|v| g.degree(v).expect("v in range")).max().expect("m >= 1")
}

fn max_clique(adj: &[u32], r_size: usize, mut p: u32, mut x: u32, best: &mut usize) {
    if p == 0 && x == 0 {
        *best = (*best).max(r_size);
        return;
    }
    if r_size + p.count_ones() as usize <= *best {
        return;
    }
    // Pivot on the candidate covering the most of P, so only vertices
    // outside its neighborhood branch.
    let mut branch_set = p;
    let mut scan = p | x;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let uncovered = p & !adj[u];
        if uncovered.count_ones() < branch_set.count_ones() {
            branch_set = uncovered;
        }
    }
    let mut candidates = branch_set;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        max_clique(adj, r_size + 1, p & adj[v], x & adj[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Size of a maximum clique, a lower bound on the chromatic number.
pub fn clique_lower_bound(g: &Graph) -> Result<usize, ColoringError> {
    size_guard(g)?;
    let m = g.vertex_count();
    if m == 0 {
        return Ok(0);
    }
    let adj = adjacency_masks(g);
    let mut best = 1usize;
    let all = (1u32 << m) - 1;
    max_clique(&adj, 0, all, 0, &mut best);
    Ok(best)
}
