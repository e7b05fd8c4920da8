//! Running the same tests on processes and on their translations.
//!
//! For every test, a process passes it in the reduction semantics exactly
//! when its translation passes the translated test. Checking this on
//! enumerated tests compares the two testing equivalences on a pair.

use std::fmt;

use crate::error::{Error, Result};
use crate::lts::{Budget, Verdict};
use crate::reduction::{enumerate_tests, passes, Equivalence, PiTest};
use crate::sd::{passes_d, SemTest};
use crate::strategy::{translate, PositionStrategy};
use crate::process::TypedProcess;

/// Verdicts of one test on both sides of the translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestRow {
    pub test: PiTest,
    pub pi: [Verdict; 2],
    pub sd: [Verdict; 2],
}

impl TestRow {
    /// Exact verdicts on the two sides of the translation that disagree.
    pub fn mismatch(&self) -> bool {
        (0..2).any(|i| self.pi[i].is_exact() && self.sd[i].is_exact() && self.pi[i] != self.sd[i])
    }

    pub fn is_exact(&self) -> bool {
        self.pi.iter().chain(&self.sd).all(|v| v.is_exact())
    }
}

#[derive(Clone, Debug)]
pub struct CrossReport {
    pub k: usize,
    pub budget: Budget,
    pub rows: Vec<TestRow>,
    pub pi: Equivalence<PiTest>,
    pub sd: Equivalence<PiTest>,
}

impl CrossReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &TestRow> {
        self.rows.iter().filter(|r| r.mismatch())
    }

    /// Every verdict exact and each agreeing with its translation.
    pub fn agrees(&self) -> bool {
        self.rows.iter().all(|r| r.is_exact() && !r.mismatch())
    }
}

impl fmt::Display for CrossReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}, budget = {} nodes, {} tests", self.k, self.budget.max_nodes, self.rows.len())?;
        writeln!(f, "processes:  {}", summary(&self.pi))?;
        writeln!(f, "strategies: {}", summary(&self.sd))?;
        let bad: Vec<&TestRow> = self.mismatches().collect();
        if bad.is_empty() {
            writeln!(f, "no test separates a process from its translation")?;
        }
        for r in bad {
            writeln!(
                f,
                "mismatch on {}: P {} / {}, Q {} / {}",
                r.test,
                r.pi[0].name(),
                r.sd[0].name(),
                r.pi[1].name(),
                r.sd[1].name()
            )?;
        }
        Ok(())
    }
}

/// A one-line description of an equivalence outcome.
pub fn summary<T: fmt::Display>(e: &Equivalence<T>) -> String {
    match e {
        Equivalence::Distinguished { test, left, right } => {
            format!("Distinguished by {test} ({} vs {})", left.name(), right.name())
        }
        Equivalence::AgreeUpTo { k, tests } => format!("AgreeUpTo({k}) over {tests} tests"),
        Equivalence::Unknown { k, tests, undecided } => format!("Unknown at k = {k}: {undecided} of {tests} tests undecided"),
    }
}

fn equivalence(rows: &[TestRow], k: usize, pick: impl Fn(&TestRow) -> [Verdict; 2]) -> Equivalence<PiTest> {
    let mut undecided = 0;
    for r in rows {
        let [left, right] = pick(r);
        if !left.is_exact() || !right.is_exact() {
            undecided += 1;
        } else if left != right {
            return Equivalence::Distinguished { test: r.test.clone(), left, right };
        }
    }
    if undecided == 0 {
        Equivalence::AgreeUpTo { k, tests: rows.len() }
    } else {
        Equivalence::Unknown { k, tests: rows.len(), undecided }
    }
}

/// Runs every test of size at most `k` on `p`, `q` and their translations.
pub fn check_theorem1(p: &TypedProcess, q: &TypedProcess, k: usize, budget: Budget) -> Result<CrossReport> {
    if p.ctx != q.ctx {
        return Err(Error::ContextMismatch { expected: p.ctx, found: q.ctx });
    }
    let sp = PositionStrategy::single(translate(p));
    let sq = PositionStrategy::single(translate(q));
    let mut rows = Vec::new();
    for test in enumerate_tests(p.ctx, k) {
        let sem = SemTest::from_pi(&test)?;
        let pi = [passes(p, &test, budget)?.verdict, passes(q, &test, budget)?.verdict];
        let sd = [passes_d(&sp, &sem, budget)?, passes_d(&sq, &sem, budget)?];
        rows.push(TestRow { test, pi, sd });
    }
    let pi = equivalence(&rows, k, |r| r.pi);
    let sd = equivalence(&rows, k, |r| r.sd);
    Ok(CrossReport { k, budget, rows, pi, sd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::parse_file;

    fn proc(text: &str) -> TypedProcess {
        parse_file(text).unwrap().process
    }

    #[test]
    fn tick_against_nil() {
        let r = check_theorem1(&proc("free a; tick"), &proc("free a; 0"), 1, Budget::default()).unwrap();
        assert!(r.agrees(), "{r}");
        assert!(matches!(r.pi, Equivalence::Distinguished { .. }));
        assert!(matches!(r.sd, Equivalence::Distinguished { .. }));
    }

    #[test]
    fn same_process() {
        let p = proc("free a; a?.tick");
        let r = check_theorem1(&p, &p, 1, Budget::default()).unwrap();
        assert!(r.agrees());
        assert!(matches!(r.pi, Equivalence::AgreeUpTo { k: 1, .. }));
    }

    #[test]
    fn contexts_must_match() {
        assert!(check_theorem1(&proc("0"), &proc("free a; 0"), 1, Budget::default()).is_err());
    }
}
