//! Seeded sampling of the invariant measure, finite-level Martin-Löf tests,
//! and the bit-string encoding of graphs.

mod codec;
mod families;
mod stream;

pub use codec::{
    bits_from_graph, format_bits, graph_from_bits, pair_rank, pair_unrank, parse_bits,
    vertices_for_bits,
};
pub use families::{
    level_bound_holds, poset_extension_test, poset_level_measure, run_ml_tests, FamilyKind,
    FamilyReport, Level, LevelReport, MLTestFamily, Verdict,
};
pub use stream::{
    sample_bits, sample_prefix, sample_prefix_with_report, RandomOrderStream, SampleReport,
    KEY_WORDS, MAX_SAMPLE_LEN,
};

#[cfg(test)]
mod tests;
