//! Brute-force ground truth: pruned backtracking over one-line words.
//!
//! Positions are filled left to right with unused values in increasing
//! order, so witnesses come out in lexicographic order. A branch is cut as
//! soon as the newly placed value completes an occurrence of a forbidden
//! pattern. Cyclicity is only decided at complete leaves.
//!
//! With `parallelism > 1` the choices of `p_1` are split across a dedicated
//! rayon pool and the per-branch results are reduced in branch order, so the
//! output does not depend on the worker count.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{extension_safe_unchecked, PatternSet};
use crate::perm::{is_cyclic_slice, Permutation};

pub const DEFAULT_CAP: usize = 13;
/// Environment override for the worker count.
pub const ENV_WORKERS: &str = "CYCPAT_WORKERS";
/// Environment override for the oracle cap.
pub const ENV_CAP: &str = "CYCPAT_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("n = {n} exceeds the oracle cap of {cap}")]
    LimitExceeded { n: usize, cap: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationRequest {
    pub n: usize,
    pub patterns: PatternSet,
    pub cyclic_only: bool,
    pub collect: bool,
    pub parallelism: usize,
}

impl EnumerationRequest {
    pub fn new(n: usize, patterns: PatternSet) -> Self {
        EnumerationRequest {
            n,
            patterns,
            cyclic_only: false,
            collect: false,
            parallelism: 1,
        }
    }

    pub fn cyclic(mut self, yes: bool) -> Self {
        self.cyclic_only = yes;
        self
    }

    pub fn collect(mut self, yes: bool) -> Self {
        self.collect = yes;
        self
    }

    pub fn parallelism(mut self, workers: usize) -> Self {
        self.parallelism = workers;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub count: u64,
    pub witnesses: Option<Vec<Permutation>>,
    /// Accepted placements in the search tree.
    pub nodes_visited: u64,
    pub elapsed: Duration,
}

/// Oracle configuration: size cap, default worker count, progress output.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub cap: usize,
    pub workers: usize,
    pub verbose: bool,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_CAP,
            workers: 1,
            verbose: false,
        }
    }
}

impl Oracle {
    /// Defaults overridden by `CYCPAT_WORKERS` / `CYCPAT_CAP` when they parse
    /// as positive integers.
    pub fn from_env() -> Self {
        let read = |key: &str| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&v| v >= 1)
        };
        let mut oracle = Oracle::default();
        if let Some(w) = read(ENV_WORKERS) {
            oracle.workers = w;
        }
        if let Some(c) = read(ENV_CAP) {
            oracle.cap = c;
        }
        oracle
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn run(&self, req: &EnumerationRequest) -> Result<EnumerationResult, EnumerationError> {
        if req.n == 0 {
            return Err(EnumerationError::InvalidRequest("n must be at least 1".into()));
        }
        if req.parallelism == 0 {
            return Err(EnumerationError::InvalidRequest("parallelism must be at least 1".into()));
        }
        if req.n > self.cap {
            return Err(EnumerationError::LimitExceeded { n: req.n, cap: self.cap });
        }
        let start = Instant::now();
        let n = req.n;
        let branch = |first: u32| {
            let out = search_branch(req, first);
            if self.verbose {
                eprintln!(
                    "[oracle] n={} {} p1={}: {} found, {} nodes",
                    n, req.patterns, first, out.count, out.nodes
                );
            }
            out
        };
        let parts: Vec<BranchOutput> = if req.parallelism == 1 || n == 1 {
            (1..=n as u32).map(branch).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(req.parallelism)
                .build()
                .map_err(|e| EnumerationError::InvalidRequest(format!("thread pool: {e}")))?;
            pool.install(|| (1..=n as u32).into_par_iter().map(branch).collect())
        };

        let mut count = 0;
        let mut nodes = 0;
        let mut witnesses = req.collect.then(Vec::new);
        for part in parts {
            count += part.count;
            nodes += part.nodes;
            if let (Some(all), Some(found)) = (witnesses.as_mut(), part.witnesses) {
                all.extend(found);
            }
        }
        Ok(EnumerationResult {
            count,
            witnesses,
            nodes_visited: nodes,
            elapsed: start.elapsed(),
        })
    }

    fn request(&self, n: usize, qs: &PatternSet, cyclic: bool, collect: bool) -> EnumerationRequest {
        EnumerationRequest::new(n, qs.clone())
            .cyclic(cyclic)
            .collect(collect)
            .parallelism(self.workers)
    }

    /// `S_n(qs)`: all length-n permutations avoiding every pattern.
    pub fn count_avoiders(&self, n: usize, qs: &PatternSet) -> Result<EnumerationResult, EnumerationError> {
        self.run(&self.request(n, qs, false, false))
    }

    /// `C_n(qs)`: cyclic length-n permutations avoiding every pattern.
    pub fn count_cyclic_avoiders(
        &self,
        n: usize,
        qs: &PatternSet,
    ) -> Result<EnumerationResult, EnumerationError> {
        self.run(&self.request(n, qs, true, false))
    }

    pub fn list_cyclic_avoiders(&self, n: usize, qs: &PatternSet) -> Result<Vec<Permutation>, EnumerationError> {
        Ok(self
            .run(&self.request(n, qs, true, true))?
            .witnesses
            .unwrap_or_default())
    }

    pub fn list_avoiders(&self, n: usize, qs: &PatternSet) -> Result<Vec<Permutation>, EnumerationError> {
        Ok(self
            .run(&self.request(n, qs, false, true))?
            .witnesses
            .unwrap_or_default())
    }
}

/// Anything that can answer `C_n(qs)`: the oracle itself, or a cache in
/// front of it.
pub trait CountSource: Sync {
    fn cyclic_count(&self, n: usize, qs: &PatternSet) -> Result<u64, EnumerationError>;

    fn oracle(&self) -> &Oracle;
}

impl CountSource for Oracle {
    fn cyclic_count(&self, n: usize, qs: &PatternSet) -> Result<u64, EnumerationError> {
        Ok(self.count_cyclic_avoiders(n, qs)?.count)
    }

    fn oracle(&self) -> &Oracle {
        self
    }
}

struct BranchOutput {
    count: u64,
    nodes: u64,
    witnesses: Option<Vec<Permutation>>,
}

struct Search<'a> {
    n: usize,
    qs: &'a PatternSet,
    cyclic_only: bool,
    prefix: Vec<u32>,
    used: Vec<bool>,
    count: u64,
    nodes: u64,
    witnesses: Option<Vec<Permutation>>,
}

fn search_branch(req: &EnumerationRequest, first: u32) -> BranchOutput {
    let mut s = Search {
        n: req.n,
        qs: &req.patterns,
        cyclic_only: req.cyclic_only,
        prefix: Vec::with_capacity(req.n),
        used: vec![false; req.n + 1],
        count: 0,
        nodes: 0,
        witnesses: req.collect.then(Vec::new),
    };
    if s.place(first) {
        s.descend();
        s.unplace();
    }
    BranchOutput {
        count: s.count,
        nodes: s.nodes,
        witnesses: s.witnesses,
    }
}

impl Search<'_> {
    fn place(&mut self, v: u32) -> bool {
        if !extension_safe_unchecked(&self.prefix, v, self.qs) {
            return false;
        }
        self.prefix.push(v);
        self.used[v as usize] = true;
        self.nodes += 1;
        true
    }

    fn unplace(&mut self) {
        if let Some(v) = self.prefix.pop() {
            self.used[v as usize] = false;
        }
    }

    fn descend(&mut self) {
        if self.prefix.len() == self.n {
            self.leaf();
        } else {
            for v in 1..=self.n as u32 {
                if !self.used[v as usize] && self.place(v) {
                    self.descend();
                    self.unplace();
                }
            }
        }
    }

    fn leaf(&mut self) {
        if self.cyclic_only {
            let p = &self.prefix;
            if self.n > 2 {
                // fixed points and 2-cycles rule out an n-cycle
                let short = p.iter().enumerate().any(|(i, &v)| {
                    let j = v as usize - 1;
                    j == i || p[j] as usize - 1 == i
                });
                if short {
                    return;
                }
            }
            if !is_cyclic_slice(p) {
                return;
            }
        }
        self.count += 1;
        if let Some(w) = self.witnesses.as_mut() {
            w.push(Permutation::from_vec_unchecked(self.prefix.clone()));
        }
    }
}
