//! Layered (123,231)-avoiders and the good-triple characterization.
//!
//! A triple `(a, b, c)` of positive layer lengths with `n = a + b + c`
//! describes the permutation
//!
//! ```text
//! n (n-1) ... (n-a+1) | b (b-1) ... 1 | (b+c) (b+c-1) ... (b+1)
//! ```
//!
//! Every (123,231)-avoiding permutation that is not an involution has this
//! shape. A triple is *good* when its permutation is a single n-cycle.
//!
//! [`classify_triple`] decides goodness arithmetically; writing `n` for the
//! total length, a triple is good exactly when one of these holds:
//!
//! 1. `n = 2m - 1` is odd, `a = m - 1` and `gcd(b, m) = 1`;
//! 2. `n = 4k`, `a = 2k` and `gcd(b, c) = 1`;
//! 3. `n = 4k + 2`, `a = 2k + 1` and `gcd(b, c) = 1`;
//! 4. `n = 4k + 2`, `a = 2k`, `b` and `c` even and `gcd(b/2, c/2) = 1`.
//!
//! None of the clauses assume `b <= c`; goodness is symmetric in `b` and `c`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TripleError {
    #[error("layer lengths must be positive, got ({a}, {b}, {c})")]
    NonPositive { a: u32, b: u32, c: u32 },
    #[error("n = {0} is too small; good triples need n >= 3")]
    TooSmall(u32),
}

/// Positive layer lengths `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    a: u32,
    b: u32,
    c: u32,
}

impl Triple {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self, TripleError> {
        if a == 0 || b == 0 || c == 0 {
            return Err(TripleError::NonPositive { a, b, c });
        }
        Ok(Triple { a, b, c })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn n(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// `(a, c, b)`.
    pub fn swapped(&self) -> Triple {
        Triple {
            a: self.a,
            b: self.c,
            c: self.b,
        }
    }

    /// Every triple summing to `n`, in lexicographic order.
    pub fn all_with_sum(n: u32) -> impl Iterator<Item = Triple> {
        (1..n.saturating_sub(1)).flat_map(move |a| {
            (1..n - a).map(move |b| Triple {
                a,
                b,
                c: n - a - b,
            })
        })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub fn permutation_of_triple(t: Triple) -> Permutation {
    let (a, b, n) = (t.a, t.b, t.n());
    let entries = (1..=n)
        .map(|i| {
            if i <= a {
                n + 1 - i
            } else if i <= a + b {
                a + b + 1 - i
            } else {
                n + b + 1 - i
            }
        })
        .collect();
    Permutation::from_vec_unchecked(entries)
}

/// Inverse of [`permutation_of_triple`]; `None` when `p` is not a
/// three-layer permutation with positive layers.
pub fn triple_of_permutation(p: &Permutation) -> Option<Triple> {
    let e = p.entries();
    let n = e.len() as u32;
    let a = e
        .iter()
        .zip((1..=n).rev())
        .take_while(|(v, want)| **v == *want)
        .count() as u32;
    if a == 0 || a + 2 > n {
        return None;
    }
    let b = e[a as usize];
    let c = n.checked_sub(a + b)?;
    let t = Triple::new(a, b, c).ok()?;
    (permutation_of_triple(t) == *p).then_some(t)
}

/// `C(a,2) + C(b,2) + C(c,2) + a(b+c)`.
pub fn inversion_count_formula(t: Triple) -> u64 {
    let choose2 = |x: u32| x as u64 * (x as u64).saturating_sub(1) / 2;
    choose2(t.a) + choose2(t.b) + choose2(t.c) + t.a as u64 * (t.b + t.c) as u64
}

/// Goodness by tracing the cycle of the constructed permutation.
pub fn is_good_triple_direct(t: Triple) -> bool {
    permutation_of_triple(t).is_cyclic()
}

/// Which clause decided a classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripleReason {
    /// n odd, `a = (n-1)/2`, `b` coprime to `(n+1)/2`.
    GoodOddCase,
    /// n even, `a = n/2` with the parity of n/2 admitting it, `gcd(b,c) = 1`.
    GoodHalfCase,
    /// `n = 4k+2`, `a = 2k`, `b` and `c` even with `gcd(b/2, c/2) = 1`.
    GoodEvenMinusOneCase,
    /// `a` is not one of the admissible first-layer lengths for n.
    WrongFirstLayer,
    /// Right first layer, but the coprimality condition fails.
    GcdViolation,
    /// An admissible-looking `a` ruled out by the inversion parity of an
    /// even-length cycle.
    ParityViolation,
}

impl TripleReason {
    pub fn is_good(self) -> bool {
        matches!(
            self,
            TripleReason::GoodOddCase | TripleReason::GoodHalfCase | TripleReason::GoodEvenMinusOneCase
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleClassification {
    pub good: bool,
    pub reason: TripleReason,
}

impl From<TripleReason> for TripleClassification {
    fn from(reason: TripleReason) -> Self {
        TripleClassification {
            good: reason.is_good(),
            reason,
        }
    }
}

pub(crate) fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Arithmetic goodness test; see the module docs for the clauses.
pub fn classify_triple(t: Triple) -> TripleClassification {
    use TripleReason::*;
    let (a, b, c) = (t.a as u64, t.b as u64, t.c as u64);
    let n = a + b + c;
    let coprime = |x, y| gcd(x, y) == 1;
    let reason = if n % 2 == 1 {
        let m = (n + 1) / 2;
        if a != m - 1 {
            WrongFirstLayer
        } else if coprime(b, m) {
            GoodOddCase
        } else {
            GcdViolation
        }
    } else if n % 4 == 0 {
        let k = n / 4;
        if a == 2 * k {
            if coprime(b, c) {
                GoodHalfCase
            } else {
                GcdViolation
            }
        } else if a + 1 == 2 * k {
            ParityViolation
        } else {
            WrongFirstLayer
        }
    } else {
        let k = (n - 2) / 4;
        if a == 2 * k + 1 {
            if coprime(b, c) {
                GoodHalfCase
            } else {
                GcdViolation
            }
        } else if a == 2 * k {
            if b % 2 == 1 || c % 2 == 1 {
                ParityViolation
            } else if coprime(b / 2, c / 2) {
                GoodEvenMinusOneCase
            } else {
                GcdViolation
            }
        } else {
            WrongFirstLayer
        }
    };
    reason.into()
}

/// All good triples with `a + b + c = n`, lexicographically ordered.
pub fn enumerate_good_triples(n: u32) -> Result<Vec<Triple>, TripleError> {
    if n < 3 {
        return Err(TripleError::TooSmall(n));
    }
    Ok(Triple::all_with_sum(n)
        .filter(|&t| classify_triple(t).good)
        .collect())
}
