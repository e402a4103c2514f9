//! Shared fixtures for the pipeline benchmarks.

use brieskorn::{BrieskornExponents, SeifertData};

/// Triples spanning small, medium and large `N`.
pub const TRIPLES: [[u64; 3]; 4] = [[2, 3, 13], [3, 4, 7], [5, 7, 11], [7, 11, 13]];

/// A triple whose profile has about a third of a million entries.
pub const LARGE: [u64; 3] = [67, 71, 73];

pub fn exponents(v: &[u64]) -> BrieskornExponents {
    BrieskornExponents::new(v.to_vec()).expect("fixture exponents are valid")
}

pub fn seifert(v: &[u64]) -> SeifertData {
    SeifertData::new(&exponents(v))
}

pub fn label(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}
