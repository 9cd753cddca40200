//! Classical pattern containment.
//!
//! A permutation contains `q` when some subsequence is order-isomorphic to
//! `q`. The workhorse is [`extension_completes`], which only looks for
//! occurrences ending at a freshly appended value; whole-word containment and
//! the pruned enumerator are both built on it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("bad pattern {input:?}: {source}")]
    BadPattern { input: String, source: PermError },
    #[error("value {0} already occurs in the prefix")]
    DuplicateValue(u32),
    #[error("pattern set is empty")]
    EmptySet,
    #[error("pattern {0} listed twice")]
    DuplicatePattern(Pattern),
}

/// A permutation used as an order-isomorphism template.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pattern(Permutation);

impl Pattern {
    pub fn new(p: Permutation) -> Self {
        Pattern(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    pub fn entries(&self) -> &[u32] {
        self.0.entries()
    }

    pub fn inverse(&self) -> Pattern {
        Pattern(self.0.inverse())
    }

    pub fn reverse_complement(&self) -> Pattern {
        Pattern(self.0.reverse_complement())
    }
}

impl From<Permutation> for Pattern {
    fn from(p: Permutation) -> Self {
        Pattern(p)
    }
}

/// Compact digits (`"4231"`) when every entry is a single digit, otherwise
/// space separated.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in self.entries() {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let bad = |source| PatternError::BadPattern {
            input: s.to_string(),
            source,
        };
        let values: Vec<u32> = if trimmed.contains(char::is_whitespace) {
            trimmed
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| bad(PermError::Parse(e.to_string()))))
                .collect::<Result<_, _>>()?
        } else {
            trimmed
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| bad(PermError::Parse(format!("unexpected character {c:?}"))))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(values).map(Pattern).map_err(bad)
    }
}

impl TryFrom<String> for Pattern {
    type Error = PatternError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> Self {
        p.to_string()
    }
}

/// A nonempty set of distinct patterns, kept sorted so that equal sets
/// compare and print identically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Pattern>", into = "Vec<Pattern>")]
pub struct PatternSet(Vec<Pattern>);

impl PatternSet {
    pub fn new(mut patterns: Vec<Pattern>) -> Result<Self, PatternError> {
        if patterns.is_empty() {
            return Err(PatternError::EmptySet);
        }
        patterns.sort();
        if let Some(w) = patterns.windows(2).find(|w| w[0] == w[1]) {
            return Err(PatternError::DuplicatePattern(w[0].clone()));
        }
        Ok(PatternSet(patterns))
    }

    pub fn single(q: Pattern) -> Self {
        PatternSet(vec![q])
    }

    /// Parses each string with [`Pattern::from_str`].
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, PatternError> {
        PatternSet::new(items.iter().map(|s| s.as_ref().parse()).collect::<Result<_, _>>()?)
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Canonical label, e.g. `"123,231"`.
    pub fn label(&self) -> String {
        self.0.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl TryFrom<Vec<Pattern>> for PatternSet {
    type Error = PatternError;

    fn try_from(v: Vec<Pattern>) -> Result<Self, Self::Error> {
        PatternSet::new(v)
    }
}

impl From<PatternSet> for Vec<Pattern> {
    fn from(s: PatternSet) -> Self {
        s.0
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternSet({})", self.label())
    }
}

/// True iff `prefix` followed by `next` has an occurrence of `q` whose last
/// entry is `next`. Values need only be distinct; comparisons are all that
/// matter.
pub fn extension_completes(prefix: &[u32], next: u32, q: &[u32]) -> bool {
    let k = q.len();
    if k == 0 || k > prefix.len() + 1 {
        return false;
    }
    match k {
        1 => true,
        2 => {
            let want = q[0].cmp(&q[1]);
            prefix.iter().any(|&v| v.cmp(&next) == want)
        }
        3 => completes_len3(prefix, next, [q[0], q[1], q[2]]),
        _ => {
            let mut chosen = Vec::with_capacity(k - 1);
            completes_general(prefix, next, q, 0, &mut chosen)
        }
    }
}

// Scan j as the middle entry, tracking the most useful candidate for the
// first entry among i < j: the smallest if q1 < q2, the largest otherwise.
fn completes_len3(prefix: &[u32], next: u32, q: [u32; 3]) -> bool {
    let first_vs_last = q[0].cmp(&q[2]);
    let mid_vs_last = q[1].cmp(&q[2]);
    let first_below_mid = q[0] < q[1];
    let mut best: Option<u32> = None;
    for &v in prefix {
        if v.cmp(&next) == mid_vs_last {
            if let Some(b) = best {
                if (b < v) == first_below_mid {
                    return true;
                }
            }
        }
        if v.cmp(&next) == first_vs_last {
            best = Some(match best {
                None => v,
                Some(b) if first_below_mid => b.min(v),
                Some(b) => b.max(v),
            });
        }
    }
    false
}

fn completes_general(
    prefix: &[u32],
    next: u32,
    q: &[u32],
    from: usize,
    chosen: &mut Vec<u32>,
) -> bool {
    let k = q.len();
    let t = chosen.len();
    if t == k - 1 {
        return true;
    }
    // positions left must fit the remaining k-1-t pattern entries
    let last_start = prefix.len() - (k - 1 - t);
    for idx in from..=last_start {
        let v = prefix[idx];
        if v.cmp(&next) != q[t].cmp(&q[k - 1]) {
            continue;
        }
        if chosen
            .iter()
            .enumerate()
            .any(|(s, &w)| w.cmp(&v) != q[s].cmp(&q[t]))
        {
            continue;
        }
        chosen.push(v);
        if completes_general(prefix, next, q, idx + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Whole-word containment. A pattern longer than `p` is never contained.
pub fn contains(p: &Permutation, q: &Pattern) -> bool {
    contains_word(p.entries(), q.entries())
}

pub(crate) fn contains_word(word: &[u32], q: &[u32]) -> bool {
    if q.len() > word.len() {
        return false;
    }
    (q.len() - 1..word.len()).any(|end| extension_completes(&word[..end], word[end], q))
}

pub fn avoids_all(p: &Permutation, qs: &PatternSet) -> bool {
    qs.patterns().iter().all(|q| !contains(p, q))
}

/// Whether appending `next` to a prefix that already avoids `qs` keeps it
/// avoiding `qs`. Only occurrences ending at `next` are examined.
pub fn prefix_extension_safe(prefix: &[u32], next: u32, qs: &PatternSet) -> Result<bool, PatternError> {
    if prefix.contains(&next) {
        return Err(PatternError::DuplicateValue(next));
    }
    Ok(extension_safe_unchecked(prefix, next, qs))
}

pub(crate) fn extension_safe_unchecked(prefix: &[u32], next: u32, qs: &PatternSet) -> bool {
    qs.patterns()
        .iter()
        .all(|q| !extension_completes(prefix, next, q.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> PatternSet {
        PatternSet::parse(items).unwrap()
    }

    // Exhaustive subsequence search, independent of the scans above.
    fn contains_brute(word: &[u32], q: &[u32]) -> bool {
        let n = word.len();
        let k = q.len();
        if k > n {
            return false;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let ok = (0..k).all(|a| (0..k).all(|b| word[idx[a]].cmp(&word[idx[b]]) == q[a].cmp(&q[b])));
            if ok {
                return true;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    #[test]
    fn containment_examples() {
        let layered = p("9 8 7 6 2 1 5 4 3");
        assert!(!contains(&layered, &q("123")));
        assert!(!contains(&layered, &q("231")));
        assert!(contains(&p("1"), &q("1")));
        assert!(contains(&p("3 1 2"), &q("1")));
        assert!(contains(&p("2 4 1 3"), &q("231")));
        assert!(!contains(&p("2 1"), &q("123")));
    }

    #[test]
    fn avoid_examples() {
        let pair = set(&["123", "231"]);
        assert!(avoids_all(&p("9 8 7 6 2 1 5 4 3"), &pair));
        assert!(!avoids_all(&p("1 2 3"), &pair));
        assert!(avoids_all(&p("14 13 12 11 10 9 8 3 2 1 7 6 5 4"), &pair));
    }

    #[test]
    fn prefix_extension_examples() {
        assert!(prefix_extension_safe(&[9, 8], 7, &set(&["123", "231"])).unwrap());
        assert!(!prefix_extension_safe(&[1, 2], 3, &set(&["123"])).unwrap());
        assert!(!prefix_extension_safe(&[2, 4], 1, &set(&["231"])).unwrap());
        assert_eq!(
            prefix_extension_safe(&[2, 4], 2, &set(&["231"])),
            Err(PatternError::DuplicateValue(2))
        );
    }

    #[test]
    fn parsing() {
        assert_eq!(q("4231").entries(), &[4, 2, 3, 1]);
        assert_eq!(q("10 9 8 7 6 5 4 3 2 1").len(), 10);
        assert_eq!(q("10 9 8 7 6 5 4 3 2 1").to_string(), "10 9 8 7 6 5 4 3 2 1");
        assert!(matches!("122".parse::<Pattern>(), Err(PatternError::BadPattern { .. })));
        assert!(matches!("12a".parse::<Pattern>(), Err(PatternError::BadPattern { .. })));
        assert!(matches!("".parse::<Pattern>(), Err(PatternError::BadPattern { .. })));
        assert_eq!(set(&["231", "123"]).label(), "123,231");
        assert!(matches!(
            PatternSet::parse(&["12", "12"]),
            Err(PatternError::DuplicatePattern(_))
        ));
        assert_eq!(PatternSet::parse::<&str>(&[]), Err(PatternError::EmptySet));
    }

    #[test]
    fn avoiders_of_123_231_number_one_plus_n_choose_2() {
        let pair = set(&["123", "231"]);
        for n in 1..=8usize {
            let count = crate::test_support::all_perms(n)
                .filter(|w| avoids_all(w, &pair))
                .count();
            assert_eq!(count, 1 + n * (n - 1) / 2, "n={n}");
        }
    }

    #[test]
    fn erdos_szekeres() {
        let pair = set(&["123", "321"]);
        assert_eq!(
            crate::test_support::all_perms(5).filter(|w| avoids_all(w, &pair)).count(),
            0
        );
    }

    #[test]
    fn scans_match_brute_force_exhaustively() {
        let pats: Vec<Pattern> = ["1", "12", "21", "123", "132", "213", "231", "312", "321", "2413", "4231", "1432"]
            .iter()
            .map(|s| q(s))
            .collect();
        for n in 1..=7 {
            for w in crate::test_support::all_perms(n) {
                for pat in &pats {
                    assert_eq!(
                        contains(&w, pat),
                        contains_brute(w.entries(), pat.entries()),
                        "{w} vs {pat}"
                    );
                }
            }
        }
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn matches_brute_force(w in arb_perm(10), pat in arb_perm(5)) {
            let pat = Pattern::new(pat);
            prop_assert_eq!(contains(&w, &pat), contains_brute(w.entries(), pat.entries()));
        }

        #[test]
        fn symmetry_transport(w in arb_perm(10), pat in arb_perm(4)) {
            let pat = Pattern::new(pat);
            let c = contains(&w, &pat);
            prop_assert_eq!(c, contains(&w.inverse(), &pat.inverse()));
            prop_assert_eq!(c, contains(&w.reverse_complement(), &pat.reverse_complement()));
        }

        #[test]
        fn containment_is_monotone_under_extension(w in arb_perm(10), pat in arb_perm(4)) {
            let pat = Pattern::new(pat);
            for end in 1..w.len() {
                let prefix = &w.entries()[..end];
                if contains_word(prefix, pat.entries()) {
                    prop_assert!(contains_word(&w.entries()[..end + 1], pat.entries()));
                }
            }
        }
    }
}
