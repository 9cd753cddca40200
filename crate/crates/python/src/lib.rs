//! Python module `cycpat`: permutations, pattern tests, oracle counts,
//! closed forms, good triples and the verification harness.

use cycpat::formulas::count_trivial_pair;
use cycpat::harness::check_triple_formula;
use cycpat::layered::{classify_triple, enumerate_good_triples, permutation_of_triple};
use cycpat::oeis::{self, Sequence};
use cycpat::{
    pattern, ClaimId, Harness, Oracle, PairFormulaId, Pattern, PatternSet, Permutation, Triple, VerificationReport,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pattern_set(patterns: Vec<String>) -> PyResult<PatternSet> {
    PatternSet::parse(&patterns).map_err(err)
}

fn oracle(cap: Option<usize>, workers: Option<usize>) -> Oracle {
    let mut o = Oracle::from_env();
    if let Some(c) = cap {
        o = o.with_cap(c);
    }
    if let Some(w) = workers {
        o = o.with_workers(w);
    }
    o
}

/// A permutation in one-line notation, values 1..n.
#[pyclass(name = "Permutation", module = "cycpat", eq, hash, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPermutation(Permutation);

#[pymethods]
impl PyPermutation {
    #[new]
    fn new(entries: Vec<u32>) -> PyResult<Self> {
        Permutation::new(entries).map(PyPermutation).map_err(err)
    }

    /// Parses "3 1 2".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(PyPermutation).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyPermutation(Permutation::identity(n))
    }

    fn entries(&self) -> Vec<u32> {
        self.0.entries().to_vec()
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.0.cycle_type().lengths().to_vec()
    }

    fn is_cyclic(&self) -> bool {
        self.0.is_cyclic()
    }

    fn is_involution(&self) -> bool {
        self.0.is_involution()
    }

    fn inversion_count(&self) -> u64 {
        self.0.inversion_count()
    }

    /// Left to right: `(p.compose(s))(i) = s(p(i))`.
    fn compose(&self, other: &PyPermutation) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyPermutation).map_err(err)
    }

    fn inverse(&self) -> Self {
        PyPermutation(self.0.inverse())
    }

    fn reverse_complement(&self) -> Self {
        PyPermutation(self.0.reverse_complement())
    }

    /// True when the permutation contains `pattern` ("132" or "1 3 2").
    fn contains(&self, pattern: &str) -> PyResult<bool> {
        let q: Pattern = pattern.parse().map_err(err)?;
        Ok(pattern::contains(&self.0, &q))
    }

    fn avoids(&self, patterns: Vec<String>) -> PyResult<bool> {
        Ok(pattern::avoids_all(&self.0, &pattern_set(patterns)?))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __getitem__(&self, i: usize) -> PyResult<u32> {
        self.0
            .entries()
            .get(i)
            .copied()
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(i))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?})", self.0.entries())
    }
}

/// Number of length-n permutations avoiding every pattern, cyclic ones only
/// by default.
#[pyfunction]
#[pyo3(signature = (n, patterns, cyclic = true, workers = None, cap = None))]
fn count_avoiders(
    py: Python<'_>,
    n: usize,
    patterns: Vec<String>,
    cyclic: bool,
    workers: Option<usize>,
    cap: Option<usize>,
) -> PyResult<u64> {
    let qs = pattern_set(patterns)?;
    let o = oracle(cap, workers);
    py.detach(|| {
        if cyclic {
            o.count_cyclic_avoiders(n, &qs)
        } else {
            o.count_avoiders(n, &qs)
        }
    })
    .map(|r| r.count)
    .map_err(err)
}

/// Cyclic avoiders in lexicographic order.
#[pyfunction]
#[pyo3(signature = (n, patterns, cap = None))]
fn list_cyclic_avoiders(py: Python<'_>, n: usize, patterns: Vec<String>, cap: Option<usize>) -> PyResult<Vec<PyPermutation>> {
    let qs = pattern_set(patterns)?;
    let o = oracle(cap, None);
    let perms = py.detach(|| o.list_cyclic_avoiders(n, &qs)).map_err(err)?;
    Ok(perms.into_iter().map(PyPermutation).collect())
}

/// Closed-form count for a supported pair written "q1,q2".
#[pyfunction]
fn pair_count(pair: &str, n: u64) -> PyResult<u64> {
    let id: PairFormulaId = pair.parse().map_err(err)?;
    cycpat::pair_count(id, n).map_err(err)
}

/// The supported pairs, as canonical labels.
#[pyfunction]
fn supported_pairs() -> Vec<String> {
    PairFormulaId::ALL.iter().map(|id| id.label()).collect()
}

/// Value of a trivial pair through its small-case table.
#[pyfunction]
fn trivial_pair_count(pair: &str, n: u64) -> PyResult<u64> {
    let id: PairFormulaId = pair.parse().map_err(err)?;
    count_trivial_pair(id, n).map_err(err)
}

/// Good triples `(a, b, c)` with `a + b + c = n`.
#[pyfunction]
fn good_triples(n: u32) -> PyResult<Vec<(u32, u32, u32)>> {
    let ts = enumerate_good_triples(n).map_err(err)?;
    Ok(ts.into_iter().map(|t| (t.a(), t.b(), t.c())).collect())
}

/// `(good, reason)` for a triple.
#[pyfunction]
fn classify(a: u32, b: u32, c: u32) -> PyResult<(bool, String)> {
    let t = Triple::new(a, b, c).map_err(err)?;
    let cls = classify_triple(t);
    Ok((cls.good, format!("{:?}", cls.reason)))
}

/// The layered permutation built from a triple.
#[pyfunction]
fn triple_permutation(a: u32, b: u32, c: u32) -> PyResult<PyPermutation> {
    let t = Triple::new(a, b, c).map_err(err)?;
    Ok(PyPermutation(permutation_of_triple(t)))
}

/// OEIS b-file text for terms `offset..=n_max`.
#[pyfunction]
#[pyo3(signature = (seq, offset, n_max, cap = None))]
fn bfile(py: Python<'_>, seq: &str, offset: u64, n_max: u64, cap: Option<usize>) -> PyResult<String> {
    let seq: Sequence = seq.parse().map_err(err)?;
    let o = oracle(cap, None);
    py.detach(|| oeis::bfile(seq, offset, n_max, &o)).map_err(err)
}

fn report_to_py<'py>(py: Python<'py>, report: &VerificationReport) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (report.to_json(),))
}

/// Runs one harness claim and returns the report as a dict.
///
/// `claim` is one of table-one (or table1), formula-vs-oracle, chain-conjecture,
/// growth-bounds, insertion-theorem, k-minus-one-question, triple-formula.
/// `subject` is a pair for formula-vs-oracle and a pattern for the
/// per-pattern claims.
#[pyfunction]
#[pyo3(signature = (claim, n_max, subject = None, workers = None, cap = None))]
fn verify<'py>(
    py: Python<'py>,
    claim: &str,
    n_max: u64,
    subject: Option<&str>,
    workers: Option<usize>,
    cap: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let id: ClaimId = claim.parse().map_err(err)?;
    let o = oracle(cap, workers);
    let need_subject = || subject.ok_or_else(|| err(format!("claim {claim} needs a subject")));
    let pattern = |s: &str| s.parse::<Pattern>().map_err(err);
    let report = match id {
        ClaimId::TableOne => py.detach(|| Harness::new(&o).check_table_one(n_max)),
        ClaimId::ChainConjecture => py.detach(|| Harness::new(&o).check_chain_conjecture(n_max)),
        ClaimId::TripleFormula => py.detach(|| check_triple_formula(n_max)),
        ClaimId::FormulaVsOracle => {
            let pair: PairFormulaId = need_subject()?.parse().map_err(err)?;
            py.detach(|| Harness::new(&o).check_formula_vs_oracle(pair, n_max))
        }
        ClaimId::GrowthBounds => {
            let q = pattern(need_subject()?)?;
            py.detach(|| Harness::new(&o).check_growth_bounds(&q, n_max))
        }
        ClaimId::InsertionTheorem => {
            let q = pattern(need_subject()?)?;
            py.detach(|| Harness::new(&o).check_insertion_theorem(&q, n_max))
        }
        ClaimId::KMinusOneQuestion => {
            let q = pattern(need_subject()?)?;
            py.detach(|| Harness::new(&o).check_k_minus_one_question(&q, n_max))
        }
    }
    .map_err(err)?;
    report_to_py(py, &report)
}

#[pymodule]
#[pyo3(name = "cycpat")]
fn cycpat_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_function(wrap_pyfunction!(count_avoiders, m)?)?;
    m.add_function(wrap_pyfunction!(list_cyclic_avoiders, m)?)?;
    m.add_function(wrap_pyfunction!(pair_count, m)?)?;
    m.add_function(wrap_pyfunction!(supported_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(trivial_pair_count, m)?)?;
    m.add_function(wrap_pyfunction!(good_triples, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(triple_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(bfile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
