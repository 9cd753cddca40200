//! Append-only JSON-lines cache of oracle counts.
//!
//! Each line is one [`Record`]. A line that fails to parse (for example a
//! record torn by a concurrent writer) is ignored, so the lookup it would
//! have served becomes a miss and is recomputed.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use cycpat::{CountSource, EnumerationError, Oracle, PatternSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub key: String,
    pub n: usize,
    pub patterns: String,
    pub cyclic: bool,
    pub count: u64,
}

/// Hex SHA-256 of the canonical request description.
pub fn request_key(n: usize, qs: &PatternSet, cyclic: bool) -> String {
    let canonical = format!("n={n};patterns={};cyclic={cyclic}", qs.label());
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub skipped_lines: u64,
}

struct State {
    entries: HashMap<String, Record>,
    stats: CacheStats,
    /// The file does not end in a newline (a torn tail); the next append
    /// starts a fresh line first.
    needs_newline: bool,
}

/// Oracle wrapper that memoizes counts in a file.
pub struct CountCache {
    path: Option<PathBuf>,
    oracle: Oracle,
    state: Mutex<State>,
}

impl CountCache {
    /// A pass-through cache with no backing file.
    pub fn disabled(oracle: Oracle) -> Self {
        CountCache {
            path: None,
            oracle,
            state: Mutex::new(State {
                entries: HashMap::new(),
                stats: CacheStats::default(),
                needs_newline: false,
            }),
        }
    }

    /// Loads `path` if it exists; the file is created on the first write.
    pub fn open(path: impl AsRef<Path>, oracle: Oracle) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut text = String::new();
        match File::open(&path) {
            Ok(mut f) => {
                f.read_to_string(&mut text)?;
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        let mut entries = HashMap::new();
        let mut stats = CacheStats::default();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<Record>(line) {
                Ok(rec) if rec.key == record_key(&rec) => {
                    entries.insert(rec.key.clone(), rec);
                }
                _ => stats.skipped_lines += 1,
            }
        }
        Ok(CountCache {
            path: Some(path),
            oracle,
            state: Mutex::new(State {
                entries,
                stats,
                needs_newline: !text.is_empty() && !text.ends_with('\n'),
            }),
        })
    }

    pub fn stats(&self) -> CacheStats {
        self.state.lock().expect("cache lock").stats
    }

    pub fn len(&self) -> usize {
        self.state.lock().expect("cache lock").entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Count of avoiders (cyclic only when `cyclic`), served from the cache
    /// when an exactly matching record exists.
    pub fn count(&self, n: usize, qs: &PatternSet, cyclic: bool) -> Result<u64, EnumerationError> {
        let key = request_key(n, qs, cyclic);
        {
            let mut st = self.state.lock().expect("cache lock");
            if let Some(rec) = st.entries.get(&key) {
                if rec.n == n && rec.cyclic == cyclic && rec.patterns == qs.label() {
                    let count = rec.count;
                    st.stats.hits += 1;
                    return Ok(count);
                }
            }
            st.stats.misses += 1;
        }
        let result = if cyclic {
            self.oracle.count_cyclic_avoiders(n, qs)?
        } else {
            self.oracle.count_avoiders(n, qs)?
        };
        let rec = Record {
            key: key.clone(),
            n,
            patterns: qs.label(),
            cyclic,
            count: result.count,
        };
        let mut st = self.state.lock().expect("cache lock");
        if let Some(path) = &self.path {
            // Best effort: a failed write costs a recomputation later, not
            // a wrong answer now.
            if append_line(path, &rec, st.needs_newline).is_ok() {
                st.needs_newline = false;
            }
        }
        st.entries.insert(key, rec);
        Ok(result.count)
    }
}

fn record_key(rec: &Record) -> String {
    match PatternSet::parse(&rec.patterns.split(',').collect::<Vec<_>>()) {
        Ok(qs) if qs.label() == rec.patterns => request_key(rec.n, &qs, rec.cyclic),
        _ => String::new(),
    }
}

fn append_line(path: &Path, rec: &Record, leading_newline: bool) -> io::Result<()> {
    let mut line = String::new();
    if leading_newline {
        line.push('\n');
    }
    line.push_str(&serde_json::to_string(rec).expect("record serializes"));
    line.push('\n');
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    // One write per record keeps lines whole under O_APPEND.
    f.write_all(line.as_bytes())
}

impl CountSource for CountCache {
    fn cyclic_count(&self, n: usize, qs: &PatternSet) -> Result<u64, EnumerationError> {
        self.count(n, qs, true)
    }

    fn oracle(&self) -> &Oracle {
        &self.oracle
    }
}
