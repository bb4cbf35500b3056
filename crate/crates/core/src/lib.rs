//! Check digits and verifiable secret sharing built on graph coloring.
//!
//! A bit string is read as the below-diagonal half of an adjacency
//! matrix, giving a graph on the fewest vertices that fit. A minimal
//! proper coloring of that graph serves as the string's check digits:
//! tampering with the string changes the graph, and the old coloring is
//! then unlikely to remain both proper and minimal. The `counting`
//! module quantifies that "unlikely" exactly, in powers of two.
//!
//! The same idea extends to secret sharing. A colored graph splits into
//! additive fragments, and a dealer can arrange, by rejection sampling,
//! that designated subsets of fragments combine into colored graphs
//! that pass the check-digit test on their own. Shareholders can then
//! audit a dealing without reconstructing the secret, and substituted
//! fragments are caught in verification rounds.
//!
//! Modules:
//!
//! * [`graph`]: graphs, colorings, and the bit-string codec.
//! * [`coloring`]: exact chromatic search, heuristics, and bounds.
//! * [`counting`]: exact detection-probability arithmetic.
//! * [`checkdigit`]: envelopes, encoding, verification, tamper trials.
//! * [`secretshare`]: additive sharing of digit vectors and colored
//!   graphs.
//! * [`vss`]: verification structures, the rejecting dealer, recovery.
//! * [`stream`]: deterministic, labeled randomness for experiments.

pub mod checkdigit;
pub mod coloring;
pub mod counting;
pub mod graph;
pub mod secretshare;
pub mod stream;
pub mod vss;

pub use checkdigit::{Envelope, RateEstimate, TamperModel, VerifyOutcome};
pub use coloring::{ColoringVerdict, MAX_EXACT_VERTICES};
pub use counting::{ColorPartition, UndetectedBound};
pub use graph::{Coloring, Graph, PaddingInfo};
pub use secretshare::{KghShare, SecretVector, Share, StructureModulus};
pub use stream::SeedStream;
pub use vss::{RoundReport, VerificationStructure, Vsos};
