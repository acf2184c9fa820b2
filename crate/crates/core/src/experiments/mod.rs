//! Empirical companions: the five-symbol example, Markov sampling, gap
//! experiments and randomized property harnesses.

pub mod example1;
pub mod gap;
pub mod harness;
pub mod random;
pub mod sampler;

pub use gap::{gap_experiment, gap_for_point, GapConfig, GapReport, GapRow, GapSummary, CSV_HEADER};
pub use harness::{lemma_harness, Counterexample, HarnessKind, HarnessReport};
pub use sampler::{periodize, sample_point, MarkovSampler, SampledPoint, RNG_NAME};
