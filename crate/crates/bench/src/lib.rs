//! Shared workloads for the benchmarks.

use nilschober_core::Composition;

/// Every ordered pair of two-part compositions of `total`.
pub fn two_part_pairs(total: usize) -> Vec<(Composition, Composition)> {
    let halves = Composition::two_part(total);
    halves.iter().flat_map(|x| halves.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// Expressions of increasing rewriting cost on four strands.
pub const EXPRESSIONS: [&str; 3] = ["s1*X1*s2*X2", "(s1 + X1)*(s1 + X1)*(s1 + X1)*s2*s1", "s1*s2*s3*X1*X1*s1*s2*s1*X4 - X2*s3*s2*s1"];
