use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Where a count came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Oracle,
    Formula,
    Golden,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub count: u64,
    pub provenance: Provenance,
}

/// Counts indexed by `n` (ascending) and a pattern-set label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    rows: BTreeMap<u64, BTreeMap<String, Cell>>,
}

impl CountTable {
    pub fn new() -> Self {
        CountTable::default()
    }

    pub fn insert(&mut self, n: u64, label: impl Into<String>, count: u64, provenance: Provenance) {
        self.rows
            .entry(n)
            .or_default()
            .insert(label.into(), Cell { count, provenance });
    }

    pub fn get(&self, n: u64, label: &str) -> Option<Cell> {
        self.rows.get(&n)?.get(label).copied()
    }

    pub fn count(&self, n: u64, label: &str) -> Option<u64> {
        self.get(n, label).map(|c| c.count)
    }

    pub fn ns(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.keys().copied()
    }

    pub fn columns(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.rows.values().flat_map(|r| r.keys()).collect();
        set.into_iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.rows.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Header `n<TAB>label...`, one row per n, `-` for missing cells.
    pub fn to_tsv(&self) -> String {
        let cols = self.columns();
        let mut out = String::from("n");
        for c in &cols {
            out.push('\t');
            out.push_str(c);
        }
        out.push('\n');
        for (n, row) in &self.rows {
            write!(out, "{n}").unwrap();
            for c in &cols {
                match row.get(c) {
                    Some(cell) => write!(out, "\t{}", cell.count).unwrap(),
                    None => out.push_str("\t-"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Right-aligned columns with provenance footnote.
    pub fn to_text(&self) -> String {
        let cols = self.columns();
        let width = |c: &str| {
            self.rows
                .values()
                .filter_map(|r| r.get(c))
                .map(|cell| cell.count.to_string().len())
                .chain([c.len()])
                .max()
                .unwrap_or(1)
        };
        let widths: Vec<usize> = cols.iter().map(|c| width(c)).collect();
        let nw = self.rows.keys().map(|n| n.to_string().len()).max().unwrap_or(1).max(1);
        let mut out = format!("{:>nw$}", "n");
        for (c, w) in cols.iter().zip(&widths) {
            write!(out, "  {c:>w$}").unwrap();
        }
        out.push('\n');
        let mut sources = BTreeSet::new();
        for (n, row) in &self.rows {
            write!(out, "{n:>nw$}").unwrap();
            for (c, w) in cols.iter().zip(&widths) {
                match row.get(c) {
                    Some(cell) => {
                        sources.insert(format!("{:?}", cell.provenance).to_lowercase());
                        write!(out, "  {:>w$}", cell.count).unwrap()
                    }
                    None => write!(out, "  {:>w$}", "-").unwrap(),
                }
            }
            out.push('\n');
        }
        if !sources.is_empty() {
            writeln!(out, "(source: {})", sources.into_iter().collect::<Vec<_>>().join(", ")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tsv_layout() {
        let mut t = CountTable::new();
        t.insert(4, "123", 4, Provenance::Oracle);
        t.insert(3, "123", 2, Provenance::Oracle);
        t.insert(3, "321", 2, Provenance::Golden);
        assert_eq!(t.to_tsv(), "n\t123\t321\n3\t2\t2\n4\t4\t-\n");
        assert_eq!(t.len(), 3);
        assert_eq!(t.ns().collect::<Vec<_>>(), vec![3, 4]);
        assert!(t.to_text().contains("(source: golden, oracle)"));
    }

    proptest! {
        #[test]
        fn json_roundtrip(cells in proptest::collection::vec((1u64..50, "[1-9]{3}", any::<u64>(), 0..3u8), 0..20)) {
            let mut t = CountTable::new();
            for (n, label, count, prov) in cells {
                let prov = [Provenance::Oracle, Provenance::Formula, Provenance::Golden][prov as usize];
                t.insert(n, label, count, prov);
            }
            prop_assert_eq!(CountTable::from_json(&t.to_json()).unwrap(), t);
        }
    }
}
