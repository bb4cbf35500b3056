//! Verifiable secret sharing over colored graphs.
//!
//! A dealing splits a minimally colored graph into `t` additive shares
//! and guarantees, by rejection sampling, that every subset named in a
//! verification structure combines to something that itself verifies:
//! a proper coloring using some number of colors that is exactly the
//! combined graph's chromatic number. Honest shares therefore pass every
//! scheduled verification round, while a substituted share fragment has
//! to hit a verifying combination by luck, which the counting bound in
//! [`crate::counting`] caps at `2^-(V - n)` per uniform substitution.

use crate::checkdigit::{TamperModel, VerifyOutcome};
use crate::coloring::{chromatic_number, is_valid_coloring, ColoringError, MAX_EXACT_VERTICES};
use crate::graph::{
    from_structure_bits, graph_from_number, minimal_vertex_count, number_from_graph, to_structure_bits,
    triangle, Coloring, Graph, PaddingInfo,
};
use crate::secretshare::{combine_colored_graph, Share, ShareError};
use self::detail::BitBuf;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Default cap on dealer rejection-sampling attempts.
pub const DEFAULT_MAX_RETRIES: u64 = 1_000_000;

/// Errors raised by dealing, verification scheduling, and recovery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VssError {
    /// The dealer exhausted its attempt budget without an acceptable
    /// dealing.
    DealerExhausted { attempts: u64 },
    /// The secret colored graph cannot be dealt as requested.
    InvalidSecret { reason: String },
    /// Shares do not form the subset or dealing the operation needs.
    ShapeMismatch { reason: String },
    /// All shares combined, but not to a verifying colored graph.
    InvalidRecovery { reason: String },
    /// A verification subset is malformed.
    InvalidVsos { reason: String },
    /// A verification structure has no subsets.
    EmptyStructure,
    /// An underlying share operation failed.
    Share(ShareError),
    /// An underlying coloring operation failed.
    Coloring(ColoringError),
}

impl fmt::Display for VssError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VssError::DealerExhausted { attempts } => {
                write!(f, "no acceptable dealing in {} attempts", attempts)
            }
            VssError::InvalidSecret { reason } => write!(f, "invalid secret: {}", reason),
            VssError::ShapeMismatch { reason } => write!(f, "share shape mismatch: {}", reason),
            VssError::InvalidRecovery { reason } => write!(f, "recovery failed: {}", reason),
            VssError::InvalidVsos { reason } => write!(f, "invalid verification subset: {}", reason),
            VssError::EmptyStructure => write!(f, "verification structure has no subsets"),
            VssError::Share(e) => write!(f, "{}", e),
            VssError::Coloring(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for VssError {}

impl From<ShareError> for VssError {
    fn from(e: ShareError) -> Self {
        VssError::Share(e)
    }
}

impl From<ColoringError> for VssError {
    fn from(e: ColoringError) -> Self {
        VssError::Coloring(e)
    }
}

/// A verifiable subset of shares: at least two distinct share indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vsos {
    indices: BTreeSet<usize>,
}

impl Vsos {
    /// Build a subset from share indices (1-based). Needs at least two
    /// distinct indices, all nonzero.
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self, VssError> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.contains(&0) {
            return Err(VssError::InvalidVsos { reason: "share indices start at 1".into() });
        }
        if set.len() < 2 {
            return Err(VssError::InvalidVsos {
                reason: format!("a subset needs at least 2 shares, got {}", set.len()),
            });
        }
        Ok(Vsos { indices: set })
    }

    /// Parse the `1+3` text form: share indices joined by `+`.
    pub fn parse(s: &str) -> Result<Self, VssError> {
        let indices: Vec<usize> = s
            .split('+')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| VssError::InvalidVsos {
                    reason: format!("unreadable share index {:?}", tok),
                })
            })
            .collect::<Result<_, _>>()?;
        Vsos::new(indices)
    }

    /// The member indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// Whether `index` belongs to the subset.
    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Always false: subsets hold at least two indices.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Largest member index.
    pub fn max_index(&self) -> usize {
        *self.indices.iter().next_back().expect("at least two members")
    }
}

impl fmt::Display for Vsos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in &self.indices {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "{}", i)?;
            first = false;
        }
        Ok(())
    }
}

/// The subsets a dealing must satisfy and verification rounds will
/// check. Non-empty; duplicates collapse, first occurrence kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationStructure {
    sets: Vec<Vsos>,
}

impl VerificationStructure {
    /// Wrap a list of subsets, dropping duplicates.
    pub fn new(sets: Vec<Vsos>) -> Result<Self, VssError> {
        if sets.is_empty() {
            return Err(VssError::EmptyStructure);
        }
        let mut seen = BTreeSet::new();
        let mut deduped = Vec::with_capacity(sets.len());
        for v in sets {
            if seen.insert(v.clone()) {
                deduped.push(v);
            }
        }
        Ok(VerificationStructure { sets: deduped })
    }

    /// Parse one subset per line in the `1+3` form; blank lines are
    /// skipped.
    pub fn parse_lines(text: &str) -> Result<Self, VssError> {
        let sets: Vec<Vsos> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(Vsos::parse)
            .collect::<Result<_, _>>()?;
        VerificationStructure::new(sets)
    }

    /// The subsets in order.
    pub fn sets(&self) -> &[Vsos] {
        &self.sets
    }

    /// Largest share index any subset mentions.
    pub fn max_index(&self) -> usize {
        self.sets.iter().map(Vsos::max_index).max().expect("non-empty")
    }
}

/// Every two-share subset of a `t`-share dealing, in lexicographic
/// order. The classic structure: any two shareholders can audit the
/// dealing together.
pub fn pairwise_structure(t: usize) -> VerificationStructure {
    assert!(t >= 2, "pairwise subsets need at least two shares");
    let mut sets = Vec::with_capacity(t * (t - 1) / 2);
    for i in 1..=t {
        for j in i + 1..=t {
            sets.push(Vsos::new([i, j]).expect("two distinct indices"));
        }
    }
    VerificationStructure::new(sets).expect("t >= 2 yields at least one pair")
}

/// The one-subset structure holding all `t` shares. Dealing against it
/// succeeds immediately whenever the secret itself verifies.
pub fn full_structure(t: usize) -> VerificationStructure {
    assert!(t >= 2, "a dealing has at least two shares");
    VerificationStructure::new(vec![Vsos::new(1..=t).expect("t >= 2")]).expect("one subset")
}

/// Outcome of one subset check in one verification round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundEntry {
    /// Round number, starting at 1.
    pub round: usize,
    /// The subset checked.
    pub vsos: Vsos,
    /// What its combination verified as.
    pub outcome: VerifyOutcome,
}

/// Full record of a verification schedule: per-round, per-subset
/// outcomes, which share (if any) was tampered with in each round, and
/// the aggregate verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundReport {
    /// Number of rounds run.
    pub rounds: usize,
    /// Per round, the index of the share whose structure fragment was
    /// tampered with before checking, or `None` for a clean round.
    pub tampered: Vec<Option<usize>>,
    /// One entry per round per subset, in schedule order.
    pub entries: Vec<RoundEntry>,
    /// True when every entry verified positive.
    pub aggregate: bool,
}

impl RoundReport {
    /// Entries that did not verify positive.
    pub fn failing(&self) -> Vec<&RoundEntry> {
        self.entries.iter().filter(|e| e.outcome != VerifyOutcome::Positive).collect()
    }

    /// Fraction of tampered rounds in which at least one subset check
    /// failed, or `None` when no round was tampered with.
    pub fn tamper_detection_rate(&self) -> Option<f64> {
        let tampered_rounds: Vec<usize> = (1..=self.rounds)
            .filter(|r| self.tampered[r - 1].is_some())
            .collect();
        if tampered_rounds.is_empty() {
            return None;
        }
        let detected = tampered_rounds
            .iter()
            .filter(|&&r| {
                self.entries
                    .iter()
                    .any(|e| e.round == r && e.outcome != VerifyOutcome::Positive)
            })
            .count();
        Some(detected as f64 / tampered_rounds.len() as f64)
    }
}

/// How a combined colored graph verifies: positive exactly when the
/// coloring is proper and uses exactly as many colors as the combined
/// graph needs. The color count is inferred from the combination itself,
/// not from share metadata, so a corrupted fragment is judged by what it
/// actually produced.
pub fn verify_round(shares: &[Share], k: u32) -> Result<VerifyOutcome, VssError> {
    let (g, c) = match combine_colored_graph(shares, k) {
        Ok(pair) => pair,
        Err(ShareError::NonBinaryCombinedStructure { position, digit }) => {
            return Ok(VerifyOutcome::Malformed(format!(
                "combined structure digit {} at position {} is not a bit",
                digit, position
            )))
        }
        Err(e) => {
            return Err(VssError::ShapeMismatch { reason: e.to_string() })
        }
    };
    if g.vertex_count() == 0 {
        return Ok(VerifyOutcome::Malformed("combination has no vertices".into()));
    }
    if g.vertex_count() > MAX_EXACT_VERTICES {
        return Ok(VerifyOutcome::Malformed(format!(
            "{} vertices exceed the exact verification limit {}",
            g.vertex_count(),
            MAX_EXACT_VERTICES
        )));
    }
    let n = c.distinct_count();
    if !is_valid_coloring(&g, &c)?.valid {
        return Ok(VerifyOutcome::ColoringInvalid);
    }
    if crate::coloring::is_n_colorable(&g, n - 1)? {
        return Ok(VerifyOutcome::ChromaticTooLow);
    }
    Ok(VerifyOutcome::Positive)
}

fn index_map(shares: &[Share]) -> Result<HashMap<usize, usize>, VssError> {
    let mut map = HashMap::with_capacity(shares.len());
    for (slot, share) in shares.iter().enumerate() {
        if map.insert(share.index, slot).is_some() {
            return Err(VssError::ShapeMismatch {
                reason: format!("share index {} appears twice", share.index),
            });
        }
    }
    Ok(map)
}

/// Uniform over the `ks - 1` digits other than `old`.
fn redraw_different(rng: &mut impl Rng, old: u32, ks: u32) -> u32 {
    (old + 1 + rng.gen_range(0..ks - 1)) % ks
}

fn tamper_structure(share: &mut Share, model: TamperModel, rng: &mut impl Rng) -> Result<(), VssError> {
    let len = share.structure.len();
    let ks = share.ks;
    match model {
        TamperModel::FlipOneBit => {
            if len < 1 {
                return Err(VssError::ShapeMismatch {
                    reason: "structure fragment has no digits to change".into(),
                });
            }
            let pos = rng.gen_range(0..len);
            share.structure[pos] = redraw_different(rng, share.structure[pos], ks);
        }
        TamperModel::FlipJBits(j) => {
            if j < 1 || j > len {
                return Err(VssError::ShapeMismatch {
                    reason: format!("cannot change {} of {} structure digits", j, len),
                });
            }
            for pos in rand::seq::index::sample(rng, len, j) {
                share.structure[pos] = redraw_different(rng, share.structure[pos], ks);
            }
        }
        TamperModel::ReplaceUniform => {
            if len < 1 {
                return Err(VssError::ShapeMismatch {
                    reason: "structure fragment has no digits to replace".into(),
                });
            }
            let old = share.structure.clone();
            loop {
                for d in share.structure.iter_mut() {
                    *d = rng.gen_range(0..ks);
                }
                if share.structure != old {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Run `rounds` verification rounds of every subset in `vs` against the
/// given shares. When a tamper model is supplied, each round picks one
/// share uniformly, corrupts a fresh copy of its structure fragment
/// under the model, and checks all subsets against that copy; rounds are
/// independent re-randomizations, never cumulative. Without a model the
/// generator goes unused and every round checks the shares as given.
pub fn verify_structure(
    shares: &[Share],
    vs: &VerificationStructure,
    rounds: usize,
    tamper: Option<TamperModel>,
    rng: &mut impl Rng,
) -> Result<RoundReport, VssError> {
    let first = shares.first().ok_or(ShareError::EmptyShareSet).map_err(VssError::from)?;
    let k = first.k;
    let slots = index_map(shares)?;
    for vsos in vs.sets() {
        for index in vsos.indices() {
            if !slots.contains_key(&index) {
                return Err(VssError::InvalidVsos {
                    reason: format!("subset {} names share {}, which is absent", vsos, index),
                });
            }
        }
    }

    let mut tampered = Vec::with_capacity(rounds);
    let mut entries = Vec::with_capacity(rounds * vs.sets().len());
    let mut working: Vec<Share> = shares.to_vec();
    for round in 1..=rounds {
        let target = match tamper {
            Some(model) => {
                working.clone_from_slice(shares);
                let slot = rng.gen_range(0..working.len());
                tamper_structure(&mut working[slot], model, rng)?;
                Some(working[slot].index)
            }
            None => None,
        };
        tampered.push(target);
        let current: &[Share] = if tamper.is_some() { &working } else { shares };
        for vsos in vs.sets() {
            let subset: Vec<Share> =
                vsos.indices().map(|i| current[slots[&i]].clone()).collect();
            let outcome = verify_round(&subset, k)?;
            entries.push(RoundEntry { round, vsos: vsos.clone(), outcome });
        }
    }
    let aggregate = entries.iter().all(|e| e.outcome == VerifyOutcome::Positive);
    Ok(RoundReport { rounds, tampered, entries, aggregate })
}

/// Deal a minimally colored graph into `t` shares such that every subset
/// in `vs` verifies positive on its own. Rejection sampling: redraw the
/// free shares until every subset's combination is a proper minimal
/// coloring of its combined graph, give up after `max_retries` attempts.
///
/// Structure digits are dealt over Z2, colors over `k`. The secret
/// itself must verify (proper coloring, exactly the chromatic number of
/// colors), otherwise no dealing can exist and the request is rejected
/// up front.
pub fn deal(
    g: &Graph,
    c: &Coloring,
    t: usize,
    k: u32,
    vs: &VerificationStructure,
    rng: &mut impl Rng,
    max_retries: u64,
) -> Result<Vec<Share>, VssError> {
    let m = g.vertex_count();
    if m == 0 {
        return Err(VssError::InvalidSecret { reason: "the secret graph has no vertices".into() });
    }
    if t < 2 {
        return Err(VssError::InvalidSecret {
            reason: format!("a dealing needs at least two shares, got t={}", t),
        });
    }
    if k < 2 {
        return Err(VssError::InvalidSecret {
            reason: format!("the color modulus must be at least 2, got {}", k),
        });
    }
    if c.len() != m {
        return Err(VssError::InvalidSecret {
            reason: format!("{} color digits for {} vertices", c.len(), m),
        });
    }
    if let Some(&d) = c.digits().iter().find(|&&d| d >= k) {
        return Err(VssError::InvalidSecret {
            reason: format!("color digit {} not below modulus {}", d, k),
        });
    }
    if vs.max_index() > t {
        return Err(VssError::InvalidVsos {
            reason: format!("structure names share {} but only {} are dealt", vs.max_index(), t),
        });
    }
    if !is_valid_coloring(g, c)?.valid {
        return Err(VssError::InvalidSecret { reason: "the secret coloring is improper".into() });
    }
    let n_secret = c.distinct_count();
    if chromatic_number(g)? != n_secret {
        return Err(VssError::InvalidSecret {
            reason: format!(
                "the secret coloring uses {} colors, not the chromatic number",
                n_secret
            ),
        });
    }

    let nbits = triangle(m);
    let words = nbits.div_ceil(64);
    let secret_words = pack_words(&to_structure_bits(g), words);
    let secret_colors = c.digits();

    // Edge endpoints by structure-bit position, vertices 0-based.
    let mut endpoints = Vec::with_capacity(nbits);
    for i in 1..m {
        for j in 0..i {
            endpoints.push((i, j));
        }
    }

    // Subsets as 0-based slots into the share arrays.
    let vsets: Vec<Vec<usize>> =
        vs.sets().iter().map(|v| v.indices().map(|i| i - 1).collect()).collect();

    let k_pow2 = k.is_power_of_two();
    let kbits = k.trailing_zeros();
    let mut chi_memo: HashMap<Vec<u64>, usize> = HashMap::new();

    let mut buf = BitBuf::new();
    let mut share_words = vec![vec![0u64; words]; t];
    let mut share_colors = vec![vec![0u32; m]; t];
    let mut comb_words = vec![0u64; words];
    let mut comb_colors = vec![0u32; m];

    let mut attempts = 0u64;
    'attempt: while attempts < max_retries {
        attempts += 1;

        // Free draws for shares 1..t-1, balancing share t derived.
        for slot in 0..t - 1 {
            for (w, word) in share_words[slot].iter_mut().enumerate() {
                let remaining = nbits - w * 64;
                *word = buf.take(rng, remaining.min(64) as u32);
            }
            for d in share_colors[slot].iter_mut() {
                *d = if k_pow2 { buf.take(rng, kbits) as u32 } else { rng.gen_range(0..k) };
            }
        }
        {
            let (free, last) = share_words.split_at_mut(t - 1);
            for (w, word) in last[0].iter_mut().enumerate() {
                *word = free.iter().fold(secret_words[w], |acc, sw| acc ^ sw[w]);
            }
            let (free, last) = share_colors.split_at_mut(t - 1);
            for (v, d) in last[0].iter_mut().enumerate() {
                *d = free.iter().fold(secret_colors[v], |acc, sc| (acc + k - sc[v]) % k);
            }
        }

        for vset in &vsets {
            comb_words.iter_mut().for_each(|w| *w = 0);
            comb_colors.iter_mut().for_each(|d| *d = 0);
            for &slot in vset {
                for (a, b) in comb_words.iter_mut().zip(&share_words[slot]) {
                    *a ^= b;
                }
                for (a, b) in comb_colors.iter_mut().zip(&share_colors[slot]) {
                    *a = (*a + b) % k;
                }
            }
            // Proper: no combined edge may join equal combined colors.
            for (w, &word) in comb_words.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let p = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let (i, j) = endpoints[p];
                    if comb_colors[i] == comb_colors[j] {
                        continue 'attempt;
                    }
                }
            }
            // Minimal: the color count must equal the chromatic number.
            let distinct = distinct_count(&comb_colors);
            let chi = match chi_memo.get(comb_words.as_slice()) {
                Some(&chi) => chi,
                None => {
                    let chi = chromatic_of_words(&comb_words, nbits)?;
                    chi_memo.insert(comb_words.clone(), chi);
                    chi
                }
            };
            if chi != distinct {
                continue 'attempt;
            }
        }

        let shares = assemble_shares(t, m, n_secret, k, &share_words, &share_colors, nbits);
        confirm_dealing(&shares, g, c, vs, k)?;
        return Ok(shares);
    }
    Err(VssError::DealerExhausted { attempts })
}

fn pack_words(bits: &[u8], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (p, &b) in bits.iter().enumerate() {
        out[p / 64] |= (b as u64) << (p % 64);
    }
    out
}

fn distinct_count(colors: &[u32]) -> usize {
    if colors.iter().all(|&d| d < 64) {
        let mut mask = 0u64;
        for &d in colors {
            mask |= 1 << d;
        }
        mask.count_ones() as usize
    } else {
        colors.iter().collect::<BTreeSet<_>>().len()
    }
}

fn chromatic_of_words(words: &[u64], nbits: usize) -> Result<usize, VssError> {
    let mut bits = vec![0u8; nbits];
    for (p, b) in bits.iter_mut().enumerate() {
        *b = (words[p / 64] >> (p % 64) & 1) as u8;
    }
    let g = from_structure_bits(&bits).expect("triangular by construction");
    Ok(chromatic_number(&g)?)
}

fn assemble_shares(
    t: usize,
    m: usize,
    n: usize,
    k: u32,
    share_words: &[Vec<u64>],
    share_colors: &[Vec<u32>],
    nbits: usize,
) -> Vec<Share> {
    (0..t)
        .map(|slot| Share {
            index: slot + 1,
            t,
            m,
            ext: 0,
            n,
            k,
            ks: 2,
            structure: (0..nbits)
                .map(|p| (share_words[slot][p / 64] >> (p % 64) & 1) as u32)
                .collect(),
            colors: share_colors[slot].clone(),
        })
        .collect()
}

/// Re-check an accepted dealing through the public combination path:
/// all shares restore the secret, every subset verifies positive.
fn confirm_dealing(
    shares: &[Share],
    g: &Graph,
    c: &Coloring,
    vs: &VerificationStructure,
    k: u32,
) -> Result<(), VssError> {
    let (g2, c2) = combine_colored_graph(shares, k)?;
    if g2 != *g || c2.digits() != c.digits() {
        return Err(VssError::InvalidRecovery {
            reason: "accepted dealing does not combine back to the secret".into(),
        });
    }
    let slots = index_map(shares)?;
    for vsos in vs.sets() {
        let subset: Vec<Share> = vsos.indices().map(|i| shares[slots[&i]].clone()).collect();
        if verify_round(&subset, k)? != VerifyOutcome::Positive {
            return Err(VssError::InvalidRecovery {
                reason: format!("accepted dealing fails subset {}", vsos),
            });
        }
    }
    Ok(())
}

/// Combine exactly the full set of `t` shares and validate the result:
/// the coloring must be proper, minimal, and use the color count the
/// shares declare. Anything less is reported as a failed recovery.
pub fn recover_secret(shares: &[Share], k: u32) -> Result<(Graph, Coloring), VssError> {
    let first = shares.first().ok_or(ShareError::EmptyShareSet).map_err(VssError::from)?;
    let t = first.t;
    if shares.len() != t {
        return Err(VssError::ShapeMismatch {
            reason: format!("recovery needs all {} shares, got {}", t, shares.len()),
        });
    }
    let slots = index_map(shares)?;
    for index in 1..=t {
        if !slots.contains_key(&index) {
            return Err(VssError::ShapeMismatch {
                reason: format!("share {} of {} is missing", index, t),
            });
        }
    }
    let (g, c) = combine_colored_graph(shares, k).map_err(|e| match e {
        ShareError::NonBinaryCombinedStructure { position, digit } => VssError::InvalidRecovery {
            reason: format!("combined structure digit {} at position {} is not a bit", digit, position),
        },
        other => VssError::Share(other),
    })?;
    let n = c.distinct_count();
    if n != first.n {
        return Err(VssError::InvalidRecovery {
            reason: format!("recovered coloring uses {} colors, shares declare {}", n, first.n),
        });
    }
    if !is_valid_coloring(&g, &c)?.valid {
        return Err(VssError::InvalidRecovery {
            reason: "recovered coloring is improper".into(),
        });
    }
    if g.vertex_count() > MAX_EXACT_VERTICES {
        return Err(VssError::InvalidRecovery {
            reason: format!(
                "{} vertices exceed the exact verification limit {}",
                g.vertex_count(),
                MAX_EXACT_VERTICES
            ),
        });
    }
    if crate::coloring::is_n_colorable(&g, n - 1)? {
        return Err(VssError::InvalidRecovery {
            reason: "recovered coloring is not minimal".into(),
        });
    }
    Ok((g, c))
}

/// Deal a bit string: embed it as a graph, color it minimally, and deal
/// the colored graph. Returns the shares and the padding record needed
/// to recover the exact original string.
pub fn number_deal(
    d: &str,
    t: usize,
    k: u32,
    vs: &VerificationStructure,
    rng: &mut impl Rng,
    max_retries: u64,
) -> Result<(Vec<Share>, PaddingInfo), VssError> {
    let (g, info) = graph_from_number(d)
        .map_err(|e| VssError::InvalidSecret { reason: e.to_string() })?;
    let n = chromatic_number(&g)?;
    let c = crate::coloring::find_coloring(&g, n)?.expect("chromatic number is achievable");
    let shares = deal(&g, &c, t, k, vs, rng, max_retries)?;
    Ok((shares, info))
}

/// One clean verification round of every subset against the shares.
pub fn number_verify(shares: &[Share], vs: &VerificationStructure) -> Result<RoundReport, VssError> {
    // No tampering, so the generator is never consulted.
    let mut unused = rand_chacha::ChaCha12Rng::seed_from_u64(0);
    verify_structure(shares, vs, 1, None, &mut unused)
}

/// Recover the dealt bit string from all `t` shares. With a payload
/// length the zero padding is checked and stripped; without one the full
/// structure bit string of the recovered graph is returned.
pub fn number_recover(
    shares: &[Share],
    k: u32,
    payload_len: Option<usize>,
) -> Result<String, VssError> {
    let (g, _) = recover_secret(shares, k)?;
    match payload_len {
        None => Ok(to_structure_bits(&g).iter().map(|&b| char::from(b'0' + b)).collect()),
        Some(len) => {
            let info = minimal_vertex_count(len);
            number_from_graph(&g, &info)
                .map_err(|e| VssError::InvalidRecovery { reason: e.to_string() })
        }
    }
}

mod detail {
    use rand::Rng;

    /// Buffered bit source: hands out fixed-width bit slices of a
    /// generator's output words. When a request does not fit in the
    /// buffered remainder, a fresh word is drawn and the remainder is
    /// discarded, keeping the draw sequence simple and deterministic.
    pub(crate) struct BitBuf {
        buf: u64,
        avail: u32,
    }

    impl BitBuf {
        pub(crate) fn new() -> Self {
            BitBuf { buf: 0, avail: 0 }
        }

        pub(crate) fn take(&mut self, rng: &mut impl Rng, n: u32) -> u64 {
            debug_assert!((1..=64).contains(&n));
            if self.avail < n {
                self.buf = rng.gen::<u64>();
                self.avail = 64;
            }
            let out = if n == 64 { self.buf } else { self.buf & ((1u64 << n) - 1) };
            self.buf = if n == 64 { 0 } else { self.buf >> n };
            self.avail -= n;
            out
        }
    }
}
