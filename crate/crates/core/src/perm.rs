//! Permutations in one-line notation.
//!
//! Every public interface speaks 1-based positions and values: `p.get(1)` is
//! the image of 1. Composition is left to right, so `compose(r, s)` first
//! applies `r` and then `s` (maps `i` to `s(r(i))`). Many libraries use the
//! opposite convention.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty input")]
    EmptyInput,
    #[error("not a bijection on 1..={n}: {detail}")]
    NotABijection { n: usize, detail: String },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A bijection on `{1, ..., n}`, `n >= 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    entries: Vec<u32>,
}

/// Cycle lengths, sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn num_cycles(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Permutation {
    /// Validates `values` as a rearrangement of `1..=n`.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::EmptyInput);
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let idx = v as usize;
            if idx == 0 || idx > n {
                return Err(PermError::NotABijection {
                    n,
                    detail: format!("value {v} out of range"),
                });
            }
            if seen[idx] {
                return Err(PermError::NotABijection {
                    n,
                    detail: format!("value {v} repeated"),
                });
            }
            seen[idx] = true;
        }
        Ok(Permutation { entries: values })
    }

    /// Callers guarantee the bijection invariant.
    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of length 0");
        Permutation::from_vec_unchecked((1..=n as u32).collect())
    }

    /// The decreasing permutation `n (n-1) ... 1`.
    pub fn decreasing(n: usize) -> Self {
        assert!(n >= 1, "decreasing permutation of length 0");
        Permutation::from_vec_unchecked((1..=n as u32).rev().collect())
    }

    /// The n-cycle `2 3 ... n 1`.
    pub fn rotation(n: usize) -> Self {
        assert!(n >= 1, "rotation of length 0");
        Permutation::from_vec_unchecked((1..=n as u32).map(|i| i % n as u32 + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; a permutation has length at least one.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Image of the 1-based position `i`.
    pub fn get(&self, i: usize) -> u32 {
        self.entries[i - 1]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = self.entries[i] as usize - 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lengths)
    }

    /// True iff the permutation is a single n-cycle. The length-1
    /// permutation `1` is a 1-cycle and therefore cyclic.
    pub fn is_cyclic(&self) -> bool {
        is_cyclic_slice(&self.entries)
    }

    pub fn is_involution(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, &v)| self.entries[v as usize - 1] as usize == i + 1)
    }

    /// Number of pairs `i < j` with `p_i > p_j`, by merge sort.
    pub fn inversion_count(&self) -> u64 {
        let mut buf = self.entries.clone();
        let mut scratch = vec![0u32; buf.len()];
        merge_count(&mut buf, &mut scratch)
    }

    /// Left-to-right product: the result maps `i` to `s(r(i))`.
    pub fn compose(&self, s: &Permutation) -> Result<Permutation, PermError> {
        if self.len() != s.len() {
            return Err(PermError::LengthMismatch {
                left: self.len(),
                right: s.len(),
            });
        }
        Ok(Permutation::from_vec_unchecked(
            self.entries.iter().map(|&v| s.get(v as usize)).collect(),
        ))
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            out[v as usize - 1] = i as u32 + 1;
        }
        Permutation::from_vec_unchecked(out)
    }

    /// `q_i = n + 1 - p_{n+1-i}`.
    pub fn reverse_complement(&self) -> Permutation {
        let n = self.len() as u32;
        Permutation::from_vec_unchecked(self.entries.iter().rev().map(|&v| n + 1 - v).collect())
    }

    /// `self` composed with itself `k` times; `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Permutation {
        let mut out = Permutation::identity(self.len());
        for _ in 0..k {
            out = out.compose(self).expect("equal lengths");
        }
        out
    }
}

/// Cyclicity test on a raw 1-based one-line word known to be a bijection.
pub(crate) fn is_cyclic_slice(entries: &[u32]) -> bool {
    let n = entries.len();
    let mut i = 0usize;
    for step in 1..=n {
        i = entries[i] as usize - 1;
        if i == 0 {
            return step == n;
        }
    }
    false
}

fn merge_count(buf: &mut [u32], scratch: &mut [u32]) -> u64 {
    let n = buf.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = buf.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        merge_count(left, sl) + merge_count(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if buf[i] <= buf[j] {
            scratch[k] = buf[i];
            i += 1;
        } else {
            scratch[k] = buf[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&buf[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&buf[j..n]);
    buf.copy_from_slice(&scratch[..n]);
    count
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;

    fn try_from(values: Vec<u32>) -> Result<Self, Self::Error> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.entries
    }
}

/// Space-separated 1-based integers, e.g. `"9 8 7 6 2 1 5 4 3"`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split_whitespace()
            .map(|tok| tok.parse::<u32>().map_err(|e| PermError::Parse(format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(Permutation::new(vec![2, 4, 1, 3]).unwrap().get(1), 2);
        assert_eq!(Permutation::new(vec![1]).unwrap().len(), 1);
        assert!(matches!(
            Permutation::new(vec![2, 2, 3]),
            Err(PermError::NotABijection { .. })
        ));
        assert_eq!(Permutation::new(vec![]), Err(PermError::EmptyInput));
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!("1 x 2".parse::<Permutation>().is_err());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(p("2 4 1 3").cycle_type().lengths(), &[4]);
        assert_eq!(p("2 1").cycle_type().lengths(), &[2]);
        // 1 -> 9 -> 3 -> 7 -> 5 -> 2 -> 8 -> 4 -> 6 -> 1
        assert_eq!(p("9 8 7 6 2 1 5 4 3").cycle_type().lengths(), &[9]);
        assert_eq!(p("1 2 3").cycle_type().lengths(), &[1, 1, 1]);
    }

    #[test]
    fn cyclic() {
        assert!(p("14 13 12 11 10 9 8 3 2 1 7 6 5 4").is_cyclic());
        assert!(!p("17 16 15 14 13 12 11 3 2 1 10 9 8 7 6 5 4").is_cyclic());
        assert!(!p("1 2 3").is_cyclic());
        assert!(p("1").is_cyclic());
        assert!(p("2 1").is_cyclic());
    }

    #[test]
    fn involutions() {
        assert!(p("2 1").is_involution());
        assert!(!p("2 4 1 3").is_involution());
        assert!(p("1").is_involution());
    }

    #[test]
    fn inversions() {
        assert_eq!(Permutation::identity(7).inversion_count(), 0);
        assert_eq!(p("3 1 2").inversion_count(), 2);
        assert_eq!(p("9 8 7 6 2 1 5 4 3").inversion_count(), 30);
    }

    #[test]
    fn composition() {
        let q = p("2 4 1 3");
        assert_eq!(q.compose(&Permutation::identity(4)).unwrap(), q);
        assert_eq!(p("2 1").compose(&p("2 1")).unwrap(), p("1 2"));
        assert_eq!(p("2 3 1").compose(&p("2 3 1")).unwrap(), p("3 1 2"));
        // left to right: 1 -r-> 2 -s-> 1
        assert_eq!(p("2 1 3").compose(&p("1 3 2")).unwrap(), p("3 1 2"));
        assert_eq!(
            p("2 1").compose(&p("1 2 3")),
            Err(PermError::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn symmetries() {
        assert_eq!(p("3 1 2").inverse(), p("2 3 1"));
        assert_eq!(p("2 1").inverse(), p("2 1"));
        assert_eq!(p("2 4 1 3").inverse(), p("3 1 4 2"));
        assert_eq!(p("1 2").reverse_complement(), p("1 2"));
        assert_eq!(p("1 3 2").reverse_complement(), p("2 1 3"));
        assert_eq!(p("3 2 1").reverse_complement(), p("3 2 1"));
    }

    #[test]
    fn display_roundtrip() {
        let q = p("9 8 7 6 2 1 5 4 3");
        assert_eq!(q.to_string(), "9 8 7 6 2 1 5 4 3");
        assert_eq!(serde_json::to_string(&q).unwrap(), "[9,8,7,6,2,1,5,4,3]");
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        fn rec(cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            let n = used.len();
            if cur.len() == n {
                out.push(Permutation::new(cur.clone()).unwrap());
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v as u32 + 1);
                    rec(cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    // Minimum number of transpositions, found by BFS over the Cayley graph.
    fn transposition_distance(n: usize) -> std::collections::HashMap<Vec<u32>, usize> {
        use std::collections::{HashMap, VecDeque};
        let start: Vec<u32> = (1..=n as u32).collect();
        let mut dist = HashMap::from([(start.clone(), 0usize)]);
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            for i in 0..n {
                for j in i + 1..n {
                    let mut next = cur.clone();
                    next.swap(i, j);
                    if !dist.contains_key(&next) {
                        dist.insert(next.clone(), d + 1);
                        queue.push_back(next);
                    }
                }
            }
        }
        dist
    }

    #[test]
    fn cycle_count_matches_transposition_distance() {
        for n in 1..=6 {
            let dist = transposition_distance(n);
            for q in all_perms(n) {
                let ct = q.cycle_type();
                assert_eq!(ct.total(), n);
                assert_eq!(ct.num_cycles(), n - dist[q.entries()], "{q}");
            }
        }
    }

    #[test]
    fn brute_force_inversions_and_parity() {
        for n in 1..=7 {
            for q in all_perms(n) {
                let e = q.entries();
                let brute = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| e[i] > e[j])
                    .count() as u64;
                assert_eq!(q.inversion_count(), brute);
                if n % 2 == 0 && q.is_cyclic() {
                    assert_eq!(brute % 2, 1, "{q}");
                }
            }
        }
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    fn arb_triple_same_len() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
        (1..=12usize).prop_flat_map(|n| {
            let one = || Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle();
            (one(), one(), one()).prop_map(|(a, b, c)| {
                (
                    Permutation::new(a).unwrap(),
                    Permutation::new(b).unwrap(),
                    Permutation::new(c).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn symmetries_preserve_cyclicity(q in arb_perm(14)) {
            prop_assert_eq!(q.is_cyclic(), q.inverse().is_cyclic());
            prop_assert_eq!(q.is_cyclic(), q.reverse_complement().is_cyclic());
            prop_assert_eq!(q.inverse().inverse(), q.clone());
            prop_assert_eq!(q.reverse_complement().reverse_complement(), q.clone());
            prop_assert_eq!(q.compose(&q.inverse()).unwrap(), Permutation::identity(q.len()));
        }

        #[test]
        fn compose_is_associative((r, s, t) in arb_triple_same_len()) {
            let left = r.compose(&s).unwrap().compose(&t).unwrap();
            let right = r.compose(&s.compose(&t).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn even_cycles_are_odd(q in arb_perm(14)) {
            if q.len() % 2 == 0 && q.is_cyclic() {
                prop_assert_eq!(q.inversion_count() % 2, 1);
            }
        }
    }
}
