//! Counting arguments behind the detection bound, kept exact by working
//! with base-2 exponents instead of the (astronomically large) counts
//! themselves, plus brute-force oracles over all labeled graphs on up to
//! six vertices for cross-checking the closed forms.

use crate::coloring::{is_n_colorable, is_valid_coloring};
use crate::graph::{from_structure_bits, triangle, Coloring};
use std::fmt;

/// Exponents of 2 in the counting identities.
pub type CountExponent = u64;

/// Largest vertex count the enumeration oracles accept (32768 graphs).
pub const MAX_ORACLE_VERTICES: usize = 6;

/// Errors raised by the enumeration oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountingError {
    /// The requested vertex count exceeds [`MAX_ORACLE_VERTICES`].
    TooLargeForOracle { v: usize, max: usize },
}

impl fmt::Display for CountingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountingError::TooLargeForOracle { v, max } => {
                write!(f, "oracle enumeration capped at {} vertices, got {}", max, v)
            }
        }
    }
}

impl std::error::Error for CountingError {}

/// Sizes of the color classes of a coloring, stored canonically in
/// non-increasing order. Every part is at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorPartition {
    parts: Vec<u64>,
}

impl ColorPartition {
    /// Canonicalize a list of class sizes. Panics on zero parts or an
    /// empty list; those never denote a coloring.
    pub fn new(mut parts: Vec<u64>) -> Self {
        assert!(!parts.is_empty(), "a partition needs at least one part");
        assert!(parts.iter().all(|&x| x >= 1), "class sizes are positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        ColorPartition { parts }
    }

    /// Class sizes, largest first.
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Total number of vertices.
    pub fn vertex_count(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Number of color classes.
    pub fn class_count(&self) -> usize {
        self.parts.len()
    }
}

/// Exponent of the total number of labeled graphs on `v` vertices:
/// there are `2^(v(v-1)/2)` of them.
pub fn gamma_exponent(v: usize) -> CountExponent {
    triangle(v) as CountExponent
}

/// Exponent of the number of labeled graphs properly colored by a fixed
/// class partition: edges may appear exactly between distinct classes,
/// giving `2^(sum over class pairs of x_i * x_j)` graphs.
pub fn partition_exponent(p: &ColorPartition) -> CountExponent {
    let total = p.vertex_count();
    let squares: u64 = p.parts.iter().map(|&x| x * x).sum();
    (total * total - squares) / 2
}

/// All partitions of `v` vertices into exactly `n` nonempty classes, each
/// in non-increasing order, enumerated in lexicographically decreasing
/// order. Requires `1 <= n <= v`.
pub fn enumerate_color_partitions(v: usize, n: usize) -> Vec<ColorPartition> {
    assert!(n >= 1 && n <= v, "need 1 <= n <= v, got n={} v={}", n, v);
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(n);
    descend(v as u64, n as u64, v as u64, &mut stack, &mut out);
    out
}

fn descend(remaining: u64, slots: u64, cap: u64, stack: &mut Vec<u64>, out: &mut Vec<ColorPartition>) {
    if slots == 0 {
        debug_assert_eq!(remaining, 0);
        out.push(ColorPartition { parts: stack.clone() });
        return;
    }
    // Keep parts non-increasing and leave at least one vertex per
    // remaining slot.
    let hi = cap.min(remaining - (slots - 1));
    let lo = remaining.div_ceil(slots);
    let mut x = hi;
    while x >= lo {
        stack.push(x);
        descend(remaining - x, slots - 1, x, stack, out);
        stack.pop();
        x -= 1;
    }
}

/// The dominant class exponent: the largest [`partition_exponent`] over
/// all partitions of `v` vertices into `n` classes.
pub fn gamma_n_exponent(v: usize, n: usize) -> CountExponent {
    enumerate_color_partitions(v, n)
        .iter()
        .map(partition_exponent)
        .max()
        .expect("at least one partition exists for 1 <= n <= v")
}

/// Check the counting inequality behind the detection bound for one
/// `(v, n)` pair: the total-graph exponent must dominate
/// `(v - n) + gamma_n_exponent(v, n)`, strictly exactly when `v > 2n`.
pub fn check_theorem1(v: usize, n: usize) -> bool {
    assert!(n >= 1 && n <= v, "need 1 <= n <= v, got n={} v={}", n, v);
    let lhs = gamma_exponent(v);
    let rhs = (v - n) as CountExponent + gamma_n_exponent(v, n);
    if lhs < rhs {
        return false;
    }
    (lhs > rhs) == (v > 2 * n)
}

/// The detection exponent for a graph on `v` vertices with `n` colors:
/// an undetected uniform substitution survives with probability at most
/// `2^(-y)` where `y = v - n`. The exact class-ratio exponent
/// `gamma_n_exponent - gamma_exponent` is at most `-y` and is reported
/// alongside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UndetectedBound {
    /// Exponent of the headline bound `2^(-y)`.
    pub y: CountExponent,
    /// Exact exponent of the dominant-class ratio, never above `-y`.
    pub exact_ratio_exponent: i64,
}

/// Compute the detection bound exponents for `(v, n)`.
pub fn undetected_probability_bound(v: usize, n: usize) -> UndetectedBound {
    assert!(n >= 1 && n <= v, "need 1 <= n <= v, got n={} v={}", n, v);
    let y = (v - n) as CountExponent;
    let exact = gamma_n_exponent(v, n) as i64 - gamma_exponent(v) as i64;
    debug_assert!(exact <= -(y as i64));
    UndetectedBound { y, exact_ratio_exponent: exact }
}

fn oracle_guard(v: usize) -> Result<(), CountingError> {
    if v > MAX_ORACLE_VERTICES {
        return Err(CountingError::TooLargeForOracle { v, max: MAX_ORACLE_VERTICES });
    }
    Ok(())
}

/// Canonical coloring induced by a partition: the first part's vertices
/// get color 0, the next part's color 1, and so on.
fn class_coloring(p: &ColorPartition) -> Coloring {
    let mut digits = Vec::with_capacity(p.vertex_count() as usize);
    for (class, &size) in p.parts.iter().enumerate() {
        digits.extend(std::iter::repeat_n(class as u32, size as usize));
    }
    Coloring::new(digits, p.class_count() as u32).expect("class indices below class count")
}

/// Count, by enumerating every labeled graph on `v` vertices, how many
/// are properly colored by the canonical coloring of `p`. Cross-checks
/// `2^partition_exponent(p)`.
pub fn oracle_count_partition_proper(v: usize, p: &ColorPartition) -> Result<u64, CountingError> {
    oracle_guard(v)?;
    assert_eq!(p.vertex_count(), v as u64, "partition must cover all vertices");
    let coloring = class_coloring(p);
    let t = triangle(v);
    let mut count = 0u64;
    for code in 0u64..1 << t {
        let bits: Vec<u8> = (0..t).map(|pos| (code >> pos & 1) as u8).collect();
        let g = from_structure_bits(&bits).expect("triangular by construction");
        if is_valid_coloring(&g, &coloring).expect("lengths match").valid {
            count += 1;
        }
    }
    Ok(count)
}

/// Count, by enumeration, the labeled graphs on `v` vertices whose
/// chromatic number is at most `n`.
pub fn oracle_count_n_colorable(v: usize, n: usize) -> Result<u64, CountingError> {
    oracle_guard(v)?;
    let t = triangle(v);
    let mut count = 0u64;
    for code in 0u64..1 << t {
        let bits: Vec<u8> = (0..t).map(|pos| (code >> pos & 1) as u8).collect();
        let g = from_structure_bits(&bits).expect("triangular by construction");
        if is_n_colorable(&g, n).expect("well under the exact-search limit") {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_canonicalization() {
        let p = ColorPartition::new(vec![1, 3, 2]);
        assert_eq!(p.parts(), &[3, 2, 1]);
        assert_eq!(p.vertex_count(), 6);
        assert_eq!(p.class_count(), 3);
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn partition_rejects_zero_part() {
        ColorPartition::new(vec![2, 0]);
    }

    #[test]
    fn exponent_formulas() {
        assert_eq!(gamma_exponent(1), 0);
        assert_eq!(gamma_exponent(4), 6);
        assert_eq!(gamma_exponent(6), 15);
        assert_eq!(partition_exponent(&ColorPartition::new(vec![2, 2, 2])), 12);
        assert_eq!(partition_exponent(&ColorPartition::new(vec![3, 3])), 9);
        assert_eq!(partition_exponent(&ColorPartition::new(vec![4, 1, 1])), 9);
        assert_eq!(partition_exponent(&ColorPartition::new(vec![6])), 0);
        assert_eq!(partition_exponent(&ColorPartition::new(vec![1, 1, 1, 1])), 6);
    }

    #[test]
    fn partition_enumeration_order() {
        let parts: Vec<Vec<u64>> = enumerate_color_partitions(6, 3)
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(parts, vec![vec![4, 1, 1], vec![3, 2, 1], vec![2, 2, 2]]);
        assert_eq!(enumerate_color_partitions(5, 1).len(), 1);
        assert_eq!(enumerate_color_partitions(5, 5).len(), 1);
        // Partition counts match the classic triangle p(v, n).
        assert_eq!(enumerate_color_partitions(10, 3).len(), 8);
        assert_eq!(enumerate_color_partitions(10, 5).len(), 7);
    }

    #[test]
    fn balanced_partition_dominates() {
        assert_eq!(gamma_n_exponent(6, 3), 12);
        assert_eq!(gamma_n_exponent(6, 2), 9);
        assert_eq!(gamma_n_exponent(7, 3), 16);
        assert_eq!(gamma_n_exponent(5, 5), 10);
        for v in 1..=12 {
            for n in 1..=v {
                let max = gamma_n_exponent(v, n);
                let balanced: Vec<u64> = (0..n)
                    .map(|i| (v / n + usize::from(i < v % n)) as u64)
                    .collect();
                assert_eq!(max, partition_exponent(&ColorPartition::new(balanced)), "v={} n={}", v, n);
            }
        }
    }

    #[test]
    fn exponent_gap_inequality_and_strictness() {
        for v in 1..=14 {
            for n in 1..=v {
                assert!(check_theorem1(v, n), "v={} n={}", v, n);
                let lhs = gamma_exponent(v);
                let rhs = (v - n) as u64 + gamma_n_exponent(v, n);
                if v > 2 * n {
                    assert!(lhs > rhs, "v={} n={}", v, n);
                } else {
                    assert_eq!(lhs, rhs, "v={} n={}", v, n);
                }
            }
        }
    }

    #[test]
    fn bound_exponents() {
        let b = undetected_probability_bound(6, 3);
        assert_eq!(b.y, 3);
        assert_eq!(b.exact_ratio_exponent, -3);
        let b = undetected_probability_bound(9, 3);
        assert_eq!(b.y, 6);
        assert_eq!(b.exact_ratio_exponent, 27 - 36);
        let b = undetected_probability_bound(4, 4);
        assert_eq!(b.y, 0);
        assert_eq!(b.exact_ratio_exponent, 0);
    }

    #[test]
    fn oracle_matches_partition_formula_on_four_vertices() {
        for n in 1..=4usize {
            for p in enumerate_color_partitions(4, n) {
                let counted = oracle_count_partition_proper(4, &p).unwrap();
                assert_eq!(counted, 1u64 << partition_exponent(&p), "{:?}", p);
            }
        }
    }

    #[test]
    fn oracle_counts_colorable_four_vertex_graphs() {
        assert_eq!(oracle_count_n_colorable(4, 1).unwrap(), 1);
        assert_eq!(oracle_count_n_colorable(4, 2).unwrap(), 41);
        assert_eq!(oracle_count_n_colorable(4, 3).unwrap(), 63);
        assert_eq!(oracle_count_n_colorable(4, 4).unwrap(), 64);
        assert_eq!(
            oracle_count_n_colorable(7, 2).unwrap_err(),
            CountingError::TooLargeForOracle { v: 7, max: 6 }
        );
    }
}
