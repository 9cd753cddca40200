//! Cyclic permutations avoiding patterns of length three.
//!
//! The crate pairs a brute-force enumerator ([`enumerate::Oracle`]) with
//! closed-form counts ([`formulas`]) and the structure theory of
//! (123,231)-avoiding cycles ([`layered`]), and ships a harness
//! ([`harness`]) that cross-checks them.
//!
//! Positions and values are 1-based everywhere; composition is left to
//! right (see [`perm`]).

pub mod enumerate;
pub mod formulas;
pub mod harness;
pub mod layered;
pub mod oeis;
pub mod pattern;
pub mod perm;
pub mod table;

pub use enumerate::{CountSource, EnumerationError, EnumerationRequest, EnumerationResult, Oracle};
pub use formulas::{pair_count, FormulaError, PairFormulaId};
pub use harness::{ClaimId, Harness, HarnessError, VerificationReport};
pub use layered::{Triple, TripleClassification, TripleReason};
pub use pattern::{avoids_all, contains, Pattern, PatternError, PatternSet};
pub use perm::{CycleType, PermError, Permutation};
pub use table::{CountTable, Provenance};

#[cfg(test)]
pub(crate) mod test_support {
    use crate::perm::Permutation;

    /// All permutations of length n in lexicographic order (Heap-free,
    /// next-permutation stepping).
    pub fn all_perms(n: usize) -> impl Iterator<Item = Permutation> {
        let mut cur: Option<Vec<u32>> = Some((1..=n as u32).collect());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut v = out.clone();
            cur = match (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) {
                None => None,
                Some(i) => {
                    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
                    v.swap(i, j);
                    v[i + 1..].reverse();
                    Some(v)
                }
            };
            Some(Permutation::new(out).unwrap())
        })
    }
}
