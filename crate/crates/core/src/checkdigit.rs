//! Check-digit pipeline: embed a bit string into a graph, append a
//! minimal proper coloring as the check digits, and verify received
//! envelopes by recomputing what the digits claim.
//!
//! Verification accepts exactly when the digits form a proper coloring
//! of the carrier graph using the declared number of colors and the
//! graph admits no proper coloring with one color fewer. An adversary
//! replacing the payload therefore has to land on a graph that the old
//! digits still color properly and minimally, which the counting bounds
//! in [`crate::counting`] make exponentially unlikely.

use crate::coloring::{
    chromatic_number, find_coloring, is_n_colorable, is_valid_coloring, ColoringError,
    MAX_EXACT_VERTICES,
};
use crate::graph::{
    graph_from_number, minimal_vertex_count, triangle, Coloring, Graph, GraphError,
};
use crate::stream::SeedStream;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use std::fmt;

/// Per-trial cap on rejection sampling when hunting for a carrier graph
/// with a prescribed chromatic number.
pub const MAX_SAMPLING_ATTEMPTS: u64 = 1_000_000;

/// Errors raised by encoding, parsing, tampering, and estimation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckdigitError {
    /// The carrier graph exceeds the exact-search limit.
    GraphTooLarge { m: usize, max: usize },
    /// A supplied color modulus is below the chromatic number.
    ModulusTooSmall { required: usize, supplied: u32 },
    /// More extension vertices requested than the graph can shed.
    ExtensionTooLarge { ext: usize, m: usize },
    /// An alleged extension vertex does not have the extension pattern.
    ExtensionPatternMismatch { vertex: usize },
    /// The payload is too short for the requested tamper model.
    PayloadTooShort { needed: usize, len: usize },
    /// Rejection sampling hit its attempt cap.
    SamplingExhausted { attempts: u64 },
    /// A serialized envelope violates the wire format.
    Malformed { line: usize, reason: String },
    /// A payload failed bit-string validation.
    Graph(GraphError),
}

impl fmt::Display for CheckdigitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckdigitError::GraphTooLarge { m, max } => {
                write!(f, "carrier graph on {} vertices exceeds limit {}", m, max)
            }
            CheckdigitError::ModulusTooSmall { required, supplied } => {
                write!(f, "modulus {} is below the {} colors required", supplied, required)
            }
            CheckdigitError::ExtensionTooLarge { ext, m } => {
                write!(f, "cannot strip {} extension vertices from {} vertices", ext, m)
            }
            CheckdigitError::ExtensionPatternMismatch { vertex } => {
                write!(f, "vertex {} does not match the extension pattern", vertex)
            }
            CheckdigitError::PayloadTooShort { needed, len } => {
                write!(f, "payload of {} bits cannot absorb {} changes", len, needed)
            }
            CheckdigitError::SamplingExhausted { attempts } => {
                write!(f, "no carrier found in {} sampling attempts", attempts)
            }
            CheckdigitError::Malformed { line, reason } => {
                write!(f, "malformed envelope at line {}: {}", line, reason)
            }
            CheckdigitError::Graph(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for CheckdigitError {}

impl From<GraphError> for CheckdigitError {
    fn from(e: GraphError) -> Self {
        CheckdigitError::Graph(e)
    }
}

impl From<ColoringError> for CheckdigitError {
    fn from(e: ColoringError) -> Self {
        match e {
            ColoringError::GraphTooLarge { m, max } => CheckdigitError::GraphTooLarge { m, max },
            ColoringError::LengthMismatch { expected, got } => CheckdigitError::Malformed {
                line: 0,
                reason: format!("coloring length {} for {} vertices", got, expected),
            },
        }
    }
}

/// A payload together with its check digits and the header fields a
/// receiver needs to verify it. Fields are plain so tests and tamper
/// experiments can assemble arbitrary, even incoherent, envelopes;
/// [`verify`] classifies those as [`VerifyOutcome::Malformed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    /// The protected bit string.
    pub payload: String,
    /// Vertex count of the carrier graph, extension included.
    pub m: usize,
    /// Number of extension vertices appended to the carrier.
    pub ext: usize,
    /// Number of distinct colors the check digits claim to use.
    pub n: usize,
    /// Modulus the check digits live under.
    pub k: u32,
    /// One color digit per carrier vertex.
    pub check_digits: Vec<u32>,
}

impl Envelope {
    /// Length of the protected payload in bits.
    pub fn payload_len(&self) -> usize {
        self.payload.len()
    }
}

/// Verification verdict. Everything except `Positive` means the envelope
/// must be rejected; the variants name the first test that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    /// Digits form a proper, minimal coloring of the carrier.
    Positive,
    /// Some edge of the carrier joins two equal check digits.
    ColoringInvalid,
    /// The coloring is proper but the carrier needs fewer colors than
    /// claimed, so the digits are not a minimal coloring.
    ChromaticTooLow,
    /// The envelope violates a domain rule before any graph test runs.
    Malformed(String),
}

impl VerifyOutcome {
    /// Stable variant name, used in reports and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            VerifyOutcome::Positive => "Positive",
            VerifyOutcome::ColoringInvalid => "ColoringInvalid",
            VerifyOutcome::ChromaticTooLow => "ChromaticTooLow",
            VerifyOutcome::Malformed(_) => "Malformed",
        }
    }
}

impl fmt::Display for VerifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Ways of corrupting a payload in tamper experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TamperModel {
    /// Flip exactly one uniformly chosen payload bit.
    FlipOneBit,
    /// Flip the given number of distinct uniformly chosen payload bits.
    FlipJBits(usize),
    /// Replace the whole payload with a fresh uniform bit string,
    /// redrawn until it differs from the original.
    ReplaceUniform,
}

/// Append `ext` extension vertices to `g`, each adjacent to vertex 1 and
/// nothing else. The extension forces at least two colors, so even an
/// edgeless payload graph gets a coloring a tamper test can bite on.
pub fn extend_graph(g: &Graph, ext: usize) -> Graph {
    let m = g.vertex_count();
    assert!(m >= 1, "extension needs vertex 1 to attach to");
    let mut edges = g.edges();
    for v in m + 1..=m + ext {
        edges.push((v, 1));
    }
    crate::graph::build_graph(m + ext, &edges).expect("extended edges are in range")
}

/// Remove `ext` extension vertices from the tail of `ge`, checking each
/// one carries exactly the pattern [`extend_graph`] wrote: one edge, to
/// vertex 1.
pub fn strip_extension(ge: &Graph, ext: usize) -> Result<Graph, CheckdigitError> {
    let me = ge.vertex_count();
    if ext >= me {
        return Err(CheckdigitError::ExtensionTooLarge { ext, m: me });
    }
    let m = me - ext;
    let mut base_edges = Vec::new();
    for (i, j) in ge.edges() {
        if i <= m {
            base_edges.push((i, j));
        } else if j != 1 {
            return Err(CheckdigitError::ExtensionPatternMismatch { vertex: i });
        }
    }
    for v in m + 1..=me {
        if ge.degree(v).expect("v in range") != 1 {
            return Err(CheckdigitError::ExtensionPatternMismatch { vertex: v });
        }
    }
    Ok(crate::graph::build_graph(m, &base_edges).expect("base edges are in range"))
}

/// Encode a bit string: embed it as a graph, append `ext` extension
/// vertices, color the result minimally, and wrap everything in an
/// envelope. A supplied modulus must cover the colors actually needed;
/// omitted, the modulus is exactly the chromatic number.
pub fn encode(d: &str, ext: usize, k: Option<u32>) -> Result<Envelope, CheckdigitError> {
    let (g, info) = graph_from_number(d)?;
    let ge = extend_graph(&g, ext);
    let n = chromatic_number(&ge)?;
    let k = match k {
        Some(k) if (k as usize) < n => {
            return Err(CheckdigitError::ModulusTooSmall { required: n, supplied: k })
        }
        Some(k) => k,
        None => n as u32,
    };
    let coloring = find_coloring(&ge, n)?.expect("graph is colorable with its chromatic number");
    debug_assert_eq!(info.m + ext, ge.vertex_count());
    Ok(Envelope {
        payload: d.to_string(),
        m: ge.vertex_count(),
        ext,
        n,
        k,
        check_digits: coloring.digits().to_vec(),
    })
}

fn malformed(reason: impl Into<String>) -> VerifyOutcome {
    VerifyOutcome::Malformed(reason.into())
}

/// Verify an envelope. Total over all envelopes: domain violations come
/// back as `Malformed`, an improper coloring as `ColoringInvalid`, a
/// proper coloring of a graph that needs fewer colors as
/// `ChromaticTooLow`, and only the fully consistent case as `Positive`.
pub fn verify(e: &Envelope) -> VerifyOutcome {
    if let Some(bad) = e.payload.chars().find(|c| *c != '0' && *c != '1') {
        return malformed(format!("payload contains non-bit character {:?}", bad));
    }
    let info = minimal_vertex_count(e.payload_len());
    if info.m + e.ext != e.m {
        return malformed(format!(
            "{} payload bits with {} extension vertices need m={}, envelope says {}",
            e.payload_len(),
            e.ext,
            info.m + e.ext,
            e.m
        ));
    }
    if e.check_digits.len() != e.m {
        return malformed(format!(
            "{} check digits for {} vertices",
            e.check_digits.len(),
            e.m
        ));
    }
    if let Some((pos, &d)) = e.check_digits.iter().enumerate().find(|(_, &d)| d >= e.k) {
        return malformed(format!("check digit {} at position {} exceeds modulus {}", d, pos, e.k));
    }
    let coloring = Coloring::new(e.check_digits.clone(), e.k).expect("digits checked above");
    if coloring.distinct_count() != e.n {
        return malformed(format!(
            "digits use {} distinct colors, envelope says n={}",
            coloring.distinct_count(),
            e.n
        ));
    }
    if e.m > MAX_EXACT_VERTICES {
        return malformed(format!(
            "{} vertices exceed the exact verification limit {}",
            e.m, MAX_EXACT_VERTICES
        ));
    }
    let (g, _) = graph_from_number(&e.payload).expect("payload checked above");
    let ge = extend_graph(&g, e.ext);
    let verdict = is_valid_coloring(&ge, &coloring).expect("lengths checked above");
    if !verdict.valid {
        return VerifyOutcome::ColoringInvalid;
    }
    if is_n_colorable(&ge, e.n - 1).expect("size checked above") {
        return VerifyOutcome::ChromaticTooLow;
    }
    VerifyOutcome::Positive
}

fn color_field(digits: &[u32], k: u32) -> String {
    if k <= 10 {
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

fn parse_color_field(s: &str, k: u32, line: usize) -> Result<Vec<u32>, CheckdigitError> {
    let fail = |reason: String| CheckdigitError::Malformed { line, reason };
    let digits: Vec<u32> = if k <= 10 {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| fail(format!("non-decimal color character {:?}", c)))
            })
            .collect::<Result<_, _>>()?
    } else {
        s.split(',')
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| fail(format!("unreadable color value {:?}", tok)))
            })
            .collect::<Result<_, _>>()?
    };
    if let Some(&d) = digits.iter().find(|&&d| d >= k) {
        return Err(fail(format!("color {} exceeds modulus {}", d, k)));
    }
    Ok(digits)
}

/// Render an envelope in the fixed six-line text form. Lines end with a
/// newline; fields sharing a line are separated by two spaces. Color
/// digits are packed as single characters for moduli up to 10 and
/// comma-separated decimals above that.
pub fn serialize_envelope(e: &Envelope) -> String {
    format!(
        "GCCD1\nl={}\nm={}  ext={}\nn={}  k={}\nD={}\nC={}\n",
        e.payload_len(),
        e.m,
        e.ext,
        e.n,
        e.k,
        e.payload,
        color_field(&e.check_digits, e.k),
    )
}

fn split_line(s: &str, want: usize, line: usize) -> Result<Vec<&str>, CheckdigitError> {
    let toks: Vec<&str> = s.split(' ').filter(|t| !t.is_empty()).collect();
    if toks.len() != want {
        return Err(CheckdigitError::Malformed {
            line,
            reason: format!("expected {} fields, found {}", want, toks.len()),
        });
    }
    Ok(toks)
}

fn keyed<'a>(tok: &'a str, key: &str, line: usize) -> Result<&'a str, CheckdigitError> {
    tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')).ok_or_else(|| {
        CheckdigitError::Malformed { line, reason: format!("expected {}=<value>, found {:?}", key, tok) }
    })
}

fn keyed_num<T: std::str::FromStr>(tok: &str, key: &str, line: usize) -> Result<T, CheckdigitError> {
    let raw = keyed(tok, key, line)?;
    raw.parse::<T>().map_err(|_| CheckdigitError::Malformed {
        line,
        reason: format!("unreadable {} value {:?}", key, raw),
    })
}

/// Split a serialized record into exactly `want` lines, tolerating one
/// trailing newline.
pub(crate) fn record_lines(s: &str, want: usize, magic: &str) -> Result<Vec<String>, CheckdigitError> {
    let mut lines: Vec<&str> = s.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    if lines.len() != want {
        return Err(CheckdigitError::Malformed {
            line: lines.len().min(want) + 1,
            reason: format!("expected {} lines, found {}", want, lines.len()),
        });
    }
    if lines[0] != magic {
        return Err(CheckdigitError::Malformed {
            line: 1,
            reason: format!("expected header {:?}, found {:?}", magic, lines[0]),
        });
    }
    Ok(lines.into_iter().map(str::to_string).collect())
}

/// Parse the six-line envelope form. Field order and names are strict;
/// the separator between fields on a shared line may be any run of
/// spaces. Declared lengths must match the data lines exactly.
pub fn parse_envelope(s: &str) -> Result<Envelope, CheckdigitError> {
    let lines = record_lines(s, 6, "GCCD1")?;
    let l: usize = keyed_num(split_line(&lines[1], 1, 2)?[0], "l", 2)?;
    let toks = split_line(&lines[2], 2, 3)?;
    let m: usize = keyed_num(toks[0], "m", 3)?;
    let ext: usize = keyed_num(toks[1], "ext", 3)?;
    let toks = split_line(&lines[3], 2, 4)?;
    let n: usize = keyed_num(toks[0], "n", 4)?;
    let k: u32 = keyed_num(toks[1], "k", 4)?;
    let payload = keyed(&lines[4], "D", 5)?.to_string();
    if payload.len() != l {
        return Err(CheckdigitError::Malformed {
            line: 5,
            reason: format!("payload holds {} bits, l says {}", payload.len(), l),
        });
    }
    if let Some(bad) = payload.chars().find(|c| *c != '0' && *c != '1') {
        return Err(CheckdigitError::Malformed {
            line: 5,
            reason: format!("payload contains non-bit character {:?}", bad),
        });
    }
    let check_digits = parse_color_field(keyed(&lines[5], "C", 6)?, k, 6)?;
    if check_digits.len() != m {
        return Err(CheckdigitError::Malformed {
            line: 6,
            reason: format!("{} color digits for m={}", check_digits.len(), m),
        });
    }
    Ok(Envelope { payload, m, ext, n, k, check_digits })
}

/// Corrupt an envelope's payload under the given model, leaving every
/// header field and the check digits untouched.
pub fn tamper(e: &Envelope, model: TamperModel, rng: &mut impl Rng) -> Result<Envelope, CheckdigitError> {
    let l = e.payload_len();
    let mut bits: Vec<u8> = e.payload.bytes().map(|b| b - b'0').collect();
    match model {
        TamperModel::FlipOneBit => {
            if l < 1 {
                return Err(CheckdigitError::PayloadTooShort { needed: 1, len: l });
            }
            let idx = rng.gen_range(0..l);
            bits[idx] ^= 1;
        }
        TamperModel::FlipJBits(j) => {
            if j < 1 || j > l {
                return Err(CheckdigitError::PayloadTooShort { needed: j.max(1), len: l });
            }
            for idx in sample(rng, l, j) {
                bits[idx] ^= 1;
            }
        }
        TamperModel::ReplaceUniform => {
            if l < 1 {
                return Err(CheckdigitError::PayloadTooShort { needed: 1, len: l });
            }
            loop {
                for b in bits.iter_mut() {
                    *b = rng.gen_range(0..2u8);
                }
                if bits.iter().zip(e.payload.bytes()).any(|(&b, o)| b != o - b'0') {
                    break;
                }
            }
        }
    }
    let mut out = e.clone();
    out.payload = bits.iter().map(|&b| char::from(b'0' + b)).collect();
    Ok(out)
}

/// Replace one check digit with a uniformly chosen different value below
/// the modulus. Lives outside the detection analysis: the headline bound
/// covers payload substitution, and this helper exists so experiments can
/// probe the complementary direction.
pub fn tamper_check_digits(e: &Envelope, rng: &mut impl Rng) -> Result<Envelope, CheckdigitError> {
    if e.check_digits.is_empty() || e.k < 2 {
        return Err(CheckdigitError::ModulusTooSmall { required: 2, supplied: e.k });
    }
    let pos = rng.gen_range(0..e.check_digits.len());
    let old = e.check_digits[pos];
    let new = (old + 1 + rng.gen_range(0..e.k - 1)) % e.k;
    debug_assert_ne!(new, old);
    let mut out = e.clone();
    out.check_digits[pos] = new;
    Ok(out)
}

/// Rejection-sample a payload of exactly `triangle(v)` bits whose carrier
/// graph has chromatic number `n_target`.
pub fn sample_payload_with_chromatic(
    v: usize,
    n_target: usize,
    rng: &mut impl Rng,
    max_attempts: u64,
) -> Result<String, CheckdigitError> {
    let t = triangle(v);
    let mut attempts = 0u64;
    let mut bits = vec![0u8; t];
    while attempts < max_attempts {
        attempts += 1;
        for b in bits.iter_mut() {
            *b = rng.gen_range(0..2u8);
        }
        let g = crate::graph::from_structure_bits(&bits).expect("triangular by construction");
        if chromatic_number(&g)? == n_target {
            return Ok(bits.iter().map(|&b| char::from(b'0' + b)).collect());
        }
    }
    Err(CheckdigitError::SamplingExhausted { attempts })
}

/// Result of a Monte-Carlo undetected-tamper experiment, paired with the
/// analytic bound it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateEstimate {
    /// Trials whose tampered envelope still verified as positive.
    pub undetected: u64,
    /// Total trials run.
    pub trials: u64,
    /// Detection exponent `v - n` of the analytic bound.
    pub y: u64,
}

impl RateEstimate {
    /// Fraction of trials that went undetected.
    pub fn rate(&self) -> f64 {
        self.undetected as f64 / self.trials as f64
    }

    /// The analytic bound `2^(-y)`.
    pub fn bound(&self) -> f64 {
        (-(self.y as f64)).exp2()
    }

    /// Three binomial standard deviations at the bound rate, the slack
    /// the acceptance thresholds allow over the bound.
    pub fn three_sigma(&self) -> f64 {
        let p = self.bound();
        3.0 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Estimate the undetected-tamper rate for carriers on `v` vertices with
/// chromatic number `n_target`: per trial, sample such a carrier, encode
/// it, corrupt the payload under `model`, and count the corrupted
/// envelopes that still verify as positive.
///
/// Trials run in parallel, each on its own derived substream, so the
/// result is byte-for-byte reproducible at any thread count.
pub fn estimate_undetected_rate(
    v: usize,
    n_target: usize,
    trials: u64,
    model: TamperModel,
    stream: &SeedStream,
) -> Result<RateEstimate, CheckdigitError> {
    assert!(v >= 1 && n_target >= 1 && n_target <= v, "need 1 <= n <= v");
    assert!(trials >= 1, "need at least one trial");
    let undetected = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<u64, CheckdigitError> {
            let mut rng = stream.derive("trial", i);
            let payload = sample_payload_with_chromatic(v, n_target, &mut rng, MAX_SAMPLING_ATTEMPTS)?;
            let e = encode(&payload, 0, None)?;
            debug_assert_eq!(e.n, n_target);
            let tampered = tamper(&e, model, &mut rng)?;
            Ok(u64::from(verify(&tampered) == VerifyOutcome::Positive))
        })
        .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
    Ok(RateEstimate { undetected, trials, y: (v - n_target) as u64 })
}
