//! Additive secret sharing over digit vectors, and its specialization to
//! colored graphs where the structure bits and the color digits are
//! shared under separate moduli.
//!
//! A `(t, t)` dealing hands out `t - 1` uniformly random share vectors
//! and one balancing vector, so every subset of fewer than `t` shares is
//! distributed exactly uniformly and reveals nothing. Colored-graph
//! shares keep structure and colors independently randomized: combining
//! all shares digitwise modulo the respective moduli restores the graph
//! and its coloring.

use crate::graph::{from_structure_bits, triangle, Coloring, Graph};
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Errors raised by splitting, combining, and share parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShareError {
    /// Combine called with no shares at all.
    EmptyShareSet,
    /// Share digit vectors disagree in length.
    LengthMismatch { expected: usize, got: usize },
    /// Shares or arguments disagree on a modulus.
    ModulusMismatch { expected: u32, got: u32 },
    /// The secret (or a recovered vector) lies in the exclusion set.
    ExcludedSecret,
    /// Shares disagree on shape metadata and cannot combine.
    ShapeMismatch { reason: String },
    /// Combining uniform-modulus shares produced a structure digit that
    /// is not a bit, which a well-formed dealing never does.
    NonBinaryCombinedStructure { position: usize, digit: u32 },
    /// A serialized share violates the wire format.
    Malformed { line: usize, reason: String },
}

impl fmt::Display for ShareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShareError::EmptyShareSet => write!(f, "no shares to combine"),
            ShareError::LengthMismatch { expected, got } => {
                write!(f, "expected {} digits, got {}", expected, got)
            }
            ShareError::ModulusMismatch { expected, got } => {
                write!(f, "expected modulus {}, got {}", expected, got)
            }
            ShareError::ExcludedSecret => write!(f, "secret lies in the exclusion set"),
            ShareError::ShapeMismatch { reason } => write!(f, "share shapes disagree: {}", reason),
            ShareError::NonBinaryCombinedStructure { position, digit } => {
                write!(f, "combined structure digit {} at position {} is not a bit", digit, position)
            }
            ShareError::Malformed { line, reason } => {
                write!(f, "malformed share at line {}: {}", line, reason)
            }
        }
    }
}

impl std::error::Error for ShareError {}

/// A secret: a vector of digits under a common modulus of at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretVector {
    digits: Vec<u32>,
    k: u32,
}

impl SecretVector {
    /// Wrap a digit vector, checking the modulus and every digit.
    pub fn new(digits: Vec<u32>, k: u32) -> Result<Self, ShareError> {
        if k < 2 {
            return Err(ShareError::ModulusMismatch { expected: 2, got: k });
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= k) {
            return Err(ShareError::ShapeMismatch {
                reason: format!("digit {} not below modulus {}", d, k),
            });
        }
        Ok(SecretVector { digits, k })
    }

    /// The digit vector.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// The common modulus.
    pub fn modulus(&self) -> u32 {
        self.k
    }

    /// Number of digits.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    /// Whether the vector has no digits.
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// One share of a plain additive dealing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KghShare {
    /// Position of this share in the dealing, `1..=t`.
    pub index: usize,
    /// Total number of shares dealt.
    pub t: usize,
    /// Modulus of the digits.
    pub k: u32,
    /// The share's digit vector.
    pub digits: Vec<u32>,
}

/// Membership test backing [`ExclusionSet::Predicate`].
pub type ExclusionPredicate = Arc<dyn Fn(&[u32]) -> bool + Send + Sync>;

/// A set of forbidden secrets, given either explicitly or as a
/// predicate.
#[derive(Clone)]
pub enum ExclusionSet {
    /// Finitely many forbidden digit vectors.
    Explicit(BTreeSet<Vec<u32>>),
    /// Membership decided by a function.
    Predicate(ExclusionPredicate),
}

impl ExclusionSet {
    /// An exclusion set holding exactly the given vectors.
    pub fn explicit<I: IntoIterator<Item = Vec<u32>>>(vectors: I) -> Self {
        ExclusionSet::Explicit(vectors.into_iter().collect())
    }

    /// An exclusion set defined by a membership predicate.
    pub fn predicate(f: impl Fn(&[u32]) -> bool + Send + Sync + 'static) -> Self {
        ExclusionSet::Predicate(Arc::new(f))
    }

    /// Whether the digit vector is forbidden.
    pub fn contains(&self, digits: &[u32]) -> bool {
        match self {
            ExclusionSet::Explicit(set) => set.contains(digits),
            ExclusionSet::Predicate(f) => f(digits),
        }
    }
}

impl fmt::Debug for ExclusionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionSet::Explicit(set) => f.debug_tuple("Explicit").field(set).finish(),
            ExclusionSet::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

/// Deal a secret into `t` additive shares: the first `t - 1` are drawn
/// uniformly, the last balances the digitwise sum to the secret.
pub fn kgh_split(s: &SecretVector, t: usize, rng: &mut impl Rng) -> Vec<KghShare> {
    assert!(t >= 2, "a dealing needs at least two shares");
    let k = s.modulus();
    let mut shares: Vec<KghShare> = (1..t)
        .map(|index| KghShare {
            index,
            t,
            k,
            digits: (0..s.len()).map(|_| rng.gen_range(0..k)).collect(),
        })
        .collect();
    let mut last: Vec<u32> = s.digits().to_vec();
    for share in &shares {
        for (d, &o) in last.iter_mut().zip(&share.digits) {
            *d = (*d + k - o) % k;
        }
    }
    shares.push(KghShare { index: t, t, k, digits: last });
    shares
}

/// Digitwise sum of shares modulo `k`. With all `t` shares of a dealing
/// this is the secret; any smaller subset sums to a uniformly
/// distributed vector that carries no information about it.
pub fn kgh_combine(shares: &[KghShare], k: u32) -> Result<SecretVector, ShareError> {
    let first = shares.first().ok_or(ShareError::EmptyShareSet)?;
    let len = first.digits.len();
    let mut acc = vec![0u32; len];
    for share in shares {
        if share.k != k {
            return Err(ShareError::ModulusMismatch { expected: k, got: share.k });
        }
        if share.digits.len() != len {
            return Err(ShareError::LengthMismatch { expected: len, got: share.digits.len() });
        }
        for (a, &d) in acc.iter_mut().zip(&share.digits) {
            if d >= k {
                return Err(ShareError::ShapeMismatch {
                    reason: format!("share digit {} not below modulus {}", d, k),
                });
            }
            *a = (*a + d) % k;
        }
    }
    SecretVector::new(acc, k)
}

/// [`kgh_split`] restricted to secrets outside the exclusion set.
pub fn kghe_split(
    s: &SecretVector,
    t: usize,
    excl: &ExclusionSet,
    rng: &mut impl Rng,
) -> Result<Vec<KghShare>, ShareError> {
    if excl.contains(s.digits()) {
        return Err(ShareError::ExcludedSecret);
    }
    Ok(kgh_split(s, t, rng))
}

/// [`kgh_combine`] that additionally rejects a recovered vector lying in
/// the exclusion set, the signal that the shares were not a faithful
/// dealing of a permitted secret.
pub fn kghe_combine(
    shares: &[KghShare],
    k: u32,
    excl: &ExclusionSet,
) -> Result<SecretVector, ShareError> {
    let s = kgh_combine(shares, k)?;
    if excl.contains(s.digits()) {
        return Err(ShareError::ExcludedSecret);
    }
    Ok(s)
}

/// Modulus choice for the structure digits of colored-graph shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureModulus {
    /// Structure digits are shared over Z2, the default.
    Binary,
    /// Structure digits are shared over the color modulus. Combined
    /// structure digits outside `{0, 1}` then signal corruption.
    Uniform,
}

impl StructureModulus {
    /// The concrete structure modulus for color modulus `k`.
    pub fn value(self, k: u32) -> u32 {
        match self {
            StructureModulus::Binary => 2,
            StructureModulus::Uniform => k,
        }
    }
}

/// One share of a colored-graph dealing: additive fragments of the
/// structure bits and of the color digits, plus the shape metadata
/// needed to combine and verify without any other channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    /// Position of this share in the dealing, `1..=t`.
    pub index: usize,
    /// Total number of shares dealt.
    pub t: usize,
    /// Vertex count of the shared graph.
    pub m: usize,
    /// Extension vertices included in `m` (0 for graphs shared as-is).
    pub ext: usize,
    /// Number of distinct colors the shared coloring uses.
    pub n: usize,
    /// Modulus of the color digits.
    pub k: u32,
    /// Modulus of the structure digits (2 or `k`).
    pub ks: u32,
    /// Additive fragment of the structure bits, digits below `ks`.
    pub structure: Vec<u32>,
    /// Additive fragment of the color digits, digits below `k`.
    pub colors: Vec<u32>,
}

/// Split a colored graph into `t` shares with binary structure digits.
pub fn split_colored_graph(
    g: &Graph,
    c: &Coloring,
    t: usize,
    k: u32,
    rng: &mut impl Rng,
) -> Vec<Share> {
    split_colored_graph_with(g, c, t, k, StructureModulus::Binary, rng)
}

/// Split a colored graph into `t` shares, choosing the structure
/// modulus. The coloring must cover the graph and fit under `k`; the
/// structure and color randomizations are drawn independently.
pub fn split_colored_graph_with(
    g: &Graph,
    c: &Coloring,
    t: usize,
    k: u32,
    sm: StructureModulus,
    rng: &mut impl Rng,
) -> Vec<Share> {
    assert!(t >= 2, "a dealing needs at least two shares");
    assert_eq!(c.len(), g.vertex_count(), "coloring must cover the graph");
    assert!(k >= 2 && k >= c.modulus(), "color modulus must cover the coloring");
    let ks = sm.value(k);
    let m = g.vertex_count();
    let n = c.distinct_count();

    let structure_secret = SecretVector::new(
        crate::graph::to_structure_bits(g).iter().map(|&b| b as u32).collect(),
        ks,
    )
    .expect("bits are below any structure modulus");
    let color_secret =
        SecretVector::new(c.digits().to_vec(), k).expect("coloring digits are below k");

    let s_parts = kgh_split(&structure_secret, t, rng);
    let c_parts = kgh_split(&color_secret, t, rng);

    s_parts
        .into_iter()
        .zip(c_parts)
        .map(|(sp, cp)| Share {
            index: sp.index,
            t,
            m,
            ext: 0,
            n,
            k,
            ks,
            structure: sp.digits,
            colors: cp.digits,
        })
        .collect()
}

/// Check that a set of shares agrees on all shape metadata and digit
/// ranges, returning the reference share.
fn check_shapes(shares: &[Share]) -> Result<&Share, ShareError> {
    let first = shares.first().ok_or(ShareError::EmptyShareSet)?;
    if first.structure.len() != triangle(first.m) || first.colors.len() != first.m {
        return Err(ShareError::ShapeMismatch {
            reason: format!(
                "share {} carries {} structure and {} color digits for m={}",
                first.index,
                first.structure.len(),
                first.colors.len(),
                first.m
            ),
        });
    }
    let mut seen = BTreeSet::new();
    for share in shares {
        let same = share.t == first.t
            && share.m == first.m
            && share.ext == first.ext
            && share.n == first.n
            && share.k == first.k
            && share.ks == first.ks
            && share.structure.len() == first.structure.len()
            && share.colors.len() == first.colors.len();
        if !same {
            return Err(ShareError::ShapeMismatch {
                reason: format!("share {} disagrees with share {}", share.index, first.index),
            });
        }
        if share.index < 1 || share.index > share.t {
            return Err(ShareError::ShapeMismatch {
                reason: format!("share index {} outside 1..={}", share.index, share.t),
            });
        }
        if !seen.insert(share.index) {
            return Err(ShareError::ShapeMismatch {
                reason: format!("share index {} appears twice", share.index),
            });
        }
        if let Some(&d) = share.structure.iter().find(|&&d| d >= share.ks) {
            return Err(ShareError::ShapeMismatch {
                reason: format!("structure digit {} not below ks={}", d, share.ks),
            });
        }
        if let Some(&d) = share.colors.iter().find(|&&d| d >= share.k) {
            return Err(ShareError::ShapeMismatch {
                reason: format!("color digit {} not below k={}", d, share.k),
            });
        }
    }
    Ok(first)
}

/// Digitwise combination of colored-graph shares: structure modulo `ks`,
/// colors modulo `k`. With all `t` shares this restores the dealt graph
/// and coloring; subsets yield uniform noise. In uniform-structure mode
/// a combined structure digit outside `{0, 1}` is reported as such.
pub fn combine_colored_graph(shares: &[Share], k: u32) -> Result<(Graph, Coloring), ShareError> {
    let first = check_shapes(shares)?;
    if first.k != k {
        return Err(ShareError::ModulusMismatch { expected: k, got: first.k });
    }
    let ks = first.ks;
    let mut structure = vec![0u32; first.structure.len()];
    let mut colors = vec![0u32; first.colors.len()];
    for share in shares {
        for (a, &d) in structure.iter_mut().zip(&share.structure) {
            *a = (*a + d) % ks;
        }
        for (a, &d) in colors.iter_mut().zip(&share.colors) {
            *a = (*a + d) % k;
        }
    }
    let mut bits = Vec::with_capacity(structure.len());
    for (position, &d) in structure.iter().enumerate() {
        if d > 1 {
            return Err(ShareError::NonBinaryCombinedStructure { position, digit: d });
        }
        bits.push(d as u8);
    }
    let g = from_structure_bits(&bits).expect("triangular length checked");
    let c = Coloring::new(colors, k).expect("digits reduced modulo k");
    Ok((g, c))
}

fn digit_field(digits: &[u32], modulus: u32) -> String {
    if modulus <= 10 {
        digits
            .iter()
            .map(|&d| {
                assert!(d < 10, "digit {} not printable in single-character form", d);
                char::from(b'0' + d as u8)
            })
            .collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_digit_field(s: &str, modulus: u32, line: usize) -> Result<Vec<u32>, ShareError> {
    let fail = |reason: String| ShareError::Malformed { line, reason };
    let digits: Vec<u32> = if modulus <= 10 {
        s.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| fail(format!("non-decimal digit {:?}", c))))
            .collect::<Result<_, _>>()?
    } else {
        s.split(',')
            .map(|tok| tok.parse::<u32>().map_err(|_| fail(format!("unreadable digit {:?}", tok))))
            .collect::<Result<_, _>>()?
    };
    if let Some(&d) = digits.iter().find(|&&d| d >= modulus) {
        return Err(fail(format!("digit {} exceeds modulus {}", d, modulus)));
    }
    Ok(digits)
}

/// Render a share in the fixed five-line text form, mirroring the
/// envelope conventions: LF line ends, two spaces between fields on a
/// line, digits packed as characters for moduli up to 10 and
/// comma-separated above.
pub fn serialize_share(share: &Share) -> String {
    format!(
        "GCVS1\nindex={}  t={}\nm={}  ext={}  n={}  k={}  ks={}\nS={}\nC={}\n",
        share.index,
        share.t,
        share.m,
        share.ext,
        share.n,
        share.k,
        share.ks,
        digit_field(&share.structure, share.ks),
        digit_field(&share.colors, share.k),
    )
}

fn split_line(s: &str, want: usize, line: usize) -> Result<Vec<&str>, ShareError> {
    let toks: Vec<&str> = s.split(' ').filter(|t| !t.is_empty()).collect();
    if toks.len() != want {
        return Err(ShareError::Malformed {
            line,
            reason: format!("expected {} fields, found {}", want, toks.len()),
        });
    }
    Ok(toks)
}

fn keyed<'a>(tok: &'a str, key: &str, line: usize) -> Result<&'a str, ShareError> {
    tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')).ok_or_else(|| ShareError::Malformed {
        line,
        reason: format!("expected {}=<value>, found {:?}", key, tok),
    })
}

fn keyed_num<T: std::str::FromStr>(tok: &str, key: &str, line: usize) -> Result<T, ShareError> {
    let raw = keyed(tok, key, line)?;
    raw.parse::<T>()
        .map_err(|_| ShareError::Malformed { line, reason: format!("unreadable {} value {:?}", key, raw) })
}

/// Parse the five-line share form. Field names and order are strict; the
/// runs of spaces between fields may have any positive length. Digit
/// counts must match the declared vertex count, and every digit must sit
/// below its declared modulus.
pub fn parse_share(s: &str) -> Result<Share, ShareError> {
    let mut lines: Vec<&str> = s.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    if lines.len() != 5 {
        return Err(ShareError::Malformed {
            line: lines.len().min(5) + 1,
            reason: format!("expected 5 lines, found {}", lines.len()),
        });
    }
    if lines[0] != "GCVS1" {
        return Err(ShareError::Malformed {
            line: 1,
            reason: format!("expected header \"GCVS1\", found {:?}", lines[0]),
        });
    }
    let toks = split_line(lines[1], 2, 2)?;
    let index: usize = keyed_num(toks[0], "index", 2)?;
    let t: usize = keyed_num(toks[1], "t", 2)?;
    let toks = split_line(lines[2], 5, 3)?;
    let m: usize = keyed_num(toks[0], "m", 3)?;
    let ext: usize = keyed_num(toks[1], "ext", 3)?;
    let n: usize = keyed_num(toks[2], "n", 3)?;
    let k: u32 = keyed_num(toks[3], "k", 3)?;
    let ks: u32 = keyed_num(toks[4], "ks", 3)?;
    if ks != 2 && ks != k {
        return Err(ShareError::Malformed {
            line: 3,
            reason: format!("ks={} is neither 2 nor k={}", ks, k),
        });
    }
    let structure = parse_digit_field(keyed(lines[3], "S", 4)?, ks, 4)?;
    if structure.len() != triangle(m) {
        return Err(ShareError::Malformed {
            line: 4,
            reason: format!("{} structure digits for m={}", structure.len(), m),
        });
    }
    let colors = parse_digit_field(keyed(lines[4], "C", 5)?, k, 5)?;
    if colors.len() != m {
        return Err(ShareError::Malformed {
            line: 5,
            reason: format!("{} color digits for m={}", colors.len(), m),
        });
    }
    Ok(Share { index, t, m, ext, n, k, ks, structure, colors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn split_combine_identity() {
        let mut r = rng(1);
        for t in 2..=6 {
            for k in [2u32, 3, 4, 7] {
                let digits: Vec<u32> = (0..9).map(|i| i % k).collect();
                let s = SecretVector::new(digits, k).unwrap();
                let shares = kgh_split(&s, t, &mut r);
                assert_eq!(shares.len(), t);
                assert_eq!(kgh_combine(&shares, k).unwrap(), s);
            }
        }
    }

    #[test]
    fn partial_combine_is_not_the_secret_shape() {
        let mut r = rng(2);
        let s = SecretVector::new(vec![1, 0, 2, 2], 3).unwrap();
        let shares = kgh_split(&s, 4, &mut r);
        // A strict subset still combines, but to an unrelated vector in
        // the general case; only the invariants hold.
        let partial = kgh_combine(&shares[..3], 3).unwrap();
        assert_eq!(partial.len(), 4);
        assert_eq!(partial.modulus(), 3);
    }

    #[test]
    fn combine_validates_inputs() {
        assert_eq!(kgh_combine(&[], 3).unwrap_err(), ShareError::EmptyShareSet);
        let mut r = rng(3);
        let s = SecretVector::new(vec![1, 2], 3).unwrap();
        let mut shares = kgh_split(&s, 2, &mut r);
        assert_eq!(
            kgh_combine(&shares, 4).unwrap_err(),
            ShareError::ModulusMismatch { expected: 4, got: 3 }
        );
        shares[1].digits.pop();
        assert_eq!(
            kgh_combine(&shares, 3).unwrap_err(),
            ShareError::LengthMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn exclusion_blocks_split_and_flags_combine() {
        let excl = ExclusionSet::explicit([vec![0, 0]]);
        let zero = SecretVector::new(vec![0, 0], 2).unwrap();
        let fine = SecretVector::new(vec![1, 0], 2).unwrap();
        let mut r = rng(4);
        assert_eq!(kghe_split(&zero, 3, &excl, &mut r).unwrap_err(), ShareError::ExcludedSecret);
        let shares = kghe_split(&fine, 3, &excl, &mut r).unwrap();
        assert_eq!(kghe_combine(&shares, 2, &excl).unwrap(), fine);

        // Corrupt the dealing so it now sums to the excluded vector.
        let mut bad = shares.clone();
        bad[0].digits[0] ^= 1;
        assert_eq!(kghe_combine(&bad, 2, &excl).unwrap_err(), ShareError::ExcludedSecret);

        let pred = ExclusionSet::predicate(|d| d.iter().all(|&x| x == 0));
        assert!(pred.contains(&[0, 0, 0]));
        assert!(!pred.contains(&[0, 1, 0]));
    }

    #[test]
    fn colored_graph_split_round_trip() {
        let g = build_graph(4, &[(1, 3), (1, 4), (2, 3), (3, 4)]).unwrap();
        let c = Coloring::new(vec![0, 0, 1, 2], 3).unwrap();
        let mut r = rng(5);
        let shares = split_colored_graph(&g, &c, 3, 4, &mut r);
        assert_eq!(shares.len(), 3);
        for (i, share) in shares.iter().enumerate() {
            assert_eq!(share.index, i + 1);
            assert_eq!((share.t, share.m, share.ext, share.n), (3, 4, 0, 3));
            assert_eq!((share.k, share.ks), (4, 2));
            assert_eq!(share.structure.len(), 6);
            assert_eq!(share.colors.len(), 4);
        }
        let (g2, c2) = combine_colored_graph(&shares, 4).unwrap();
        assert_eq!(g2, g);
        assert_eq!(c2.digits(), c.digits());
        assert_eq!(c2.modulus(), 4);
    }

    #[test]
    fn uniform_structure_mode_round_trip_and_detection() {
        let g = build_graph(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let c = Coloring::new(vec![0, 1, 2], 3).unwrap();
        let mut r = rng(6);
        let shares = split_colored_graph_with(&g, &c, 2, 3, StructureModulus::Uniform, &mut r);
        assert!(shares.iter().all(|s| s.ks == 3));
        let (g2, c2) = combine_colored_graph(&shares, 3).unwrap();
        assert_eq!(g2, g);
        assert_eq!(c2.digits(), c.digits());

        // Nudging one structure digit across Z3 pushes the combined digit
        // from 1 to 2, which binary structure bits can never produce.
        let mut bad = shares.clone();
        bad[0].structure[0] = (bad[0].structure[0] + 1) % 3;
        assert_eq!(
            combine_colored_graph(&bad, 3).unwrap_err(),
            ShareError::NonBinaryCombinedStructure { position: 0, digit: 2 }
        );
    }

    #[test]
    fn combine_rejects_mismatched_shares() {
        let g = build_graph(3, &[(1, 2)]).unwrap();
        let c = Coloring::new(vec![0, 1, 0], 2).unwrap();
        let mut r = rng(7);
        let shares = split_colored_graph(&g, &c, 2, 2, &mut r);

        assert_eq!(combine_colored_graph(&[], 2).unwrap_err(), ShareError::EmptyShareSet);

        let mut wrong_t = shares.clone();
        wrong_t[1].t = 3;
        assert!(matches!(
            combine_colored_graph(&wrong_t, 2),
            Err(ShareError::ShapeMismatch { .. })
        ));

        let mut dup = shares.clone();
        dup[1].index = 1;
        assert!(matches!(combine_colored_graph(&dup, 2), Err(ShareError::ShapeMismatch { .. })));

        let mut out_of_range = shares.clone();
        out_of_range[0].colors[0] = 5;
        assert!(matches!(
            combine_colored_graph(&out_of_range, 2),
            Err(ShareError::ShapeMismatch { .. })
        ));

        assert_eq!(
            combine_colored_graph(&shares, 3).unwrap_err(),
            ShareError::ModulusMismatch { expected: 3, got: 2 }
        );
    }

    #[test]
    fn share_text_round_trip() {
        let g = build_graph(4, &[(1, 3), (1, 4), (2, 3), (3, 4)]).unwrap();
        let c = Coloring::new(vec![0, 0, 1, 2], 3).unwrap();
        let mut r = rng(8);
        for sm in [StructureModulus::Binary, StructureModulus::Uniform] {
            for share in split_colored_graph_with(&g, &c, 4, 4, sm, &mut r) {
                let text = serialize_share(&share);
                assert_eq!(parse_share(&text).unwrap(), share);
            }
        }
        let share = &split_colored_graph(&g, &c, 4, 12, &mut r)[0];
        let text = serialize_share(share);
        assert!(text.contains("k=12"));
        assert!(text.lines().nth(4).unwrap().contains(','));
        assert_eq!(parse_share(&text).unwrap(), *share);
    }

    #[test]
    fn share_text_shape() {
        let share = Share {
            index: 2,
            t: 4,
            m: 3,
            ext: 0,
            n: 2,
            k: 3,
            ks: 2,
            structure: vec![1, 0, 1],
            colors: vec![2, 0, 1],
        };
        assert_eq!(
            serialize_share(&share),
            "GCVS1\nindex=2  t=4\nm=3  ext=0  n=2  k=3  ks=2\nS=101\nC=201\n"
        );
    }

    #[test]
    fn parse_share_is_strict() {
        let good = serialize_share(&Share {
            index: 1,
            t: 2,
            m: 3,
            ext: 0,
            n: 2,
            k: 3,
            ks: 2,
            structure: vec![1, 0, 1],
            colors: vec![2, 0, 1],
        });
        assert!(parse_share(&good).is_ok());

        let r = parse_share(&good.replace("GCVS1", "GCVS2"));
        assert!(matches!(r, Err(ShareError::Malformed { line: 1, .. })));

        let r = parse_share(&good.replace("index=1  t=2", "t=2  index=1"));
        assert!(matches!(r, Err(ShareError::Malformed { line: 2, .. })));

        let r = parse_share(&good.replace("ks=2", "ks=5"));
        assert!(matches!(r, Err(ShareError::Malformed { line: 3, .. })));

        let r = parse_share(&good.replace("S=101", "S=1012"));
        assert!(matches!(r, Err(ShareError::Malformed { line: 4, .. })));

        let r = parse_share(&good.replace("C=201", "C=231"));
        assert!(matches!(r, Err(ShareError::Malformed { line: 5, .. })));

        let spaced = good.replace("m=3  ext=0", "m=3    ext=0");
        assert_eq!(parse_share(&spaced).unwrap(), parse_share(&good).unwrap());
    }

    #[test]
    fn single_share_marginal_is_uniform_enough() {
        // Chi-square the first share of a (3,3) dealing over Z2 with a
        // 4-digit secret: 16 cells, 8000 samples, significance 0.01.
        // Critical value for 15 degrees of freedom.
        const CRIT: f64 = 30.57791416689249;
        let s = SecretVector::new(vec![1, 0, 1, 1], 2).unwrap();
        let mut r = rng(9);
        let mut counts = [0u64; 16];
        let samples = 8000u64;
        for _ in 0..samples {
            let shares = kgh_split(&s, 3, &mut r);
            let cell = shares[0].digits.iter().fold(0usize, |acc, &d| acc * 2 + d as usize);
            counts[cell] += 1;
        }
        let expected = samples as f64 / 16.0;
        let stat: f64 =
            counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(stat < CRIT, "chi-square statistic {} at 15 df", stat);
    }
}
