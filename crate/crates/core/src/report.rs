//! Per-condition validation reports shared by the set-system and graph
//! checkers.

use std::fmt;

/// A concrete counterexample. `elements` are 0-based indices whose meaning
/// depends on the check (points, subset indices, graph nodes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub elements: Vec<usize>,
    pub detail: String,
}

impl Witness {
    pub fn new(elements: Vec<usize>, detail: impl Into<String>) -> Self {
        Witness {
            elements,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", braces(&self.elements), self.detail)
    }
}

/// One named condition and its failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// False when the condition does not apply (e.g. a clause scoped to a
    /// larger erasure tolerance). Skipped checks never fail.
    pub applicable: bool,
    pub failures: Vec<Witness>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport::default()
    }

    pub(crate) fn push(&mut self, id: &str, description: &str, failures: Vec<Witness>) {
        self.checks.push(Check {
            id: id.to_string(),
            description: description.to_string(),
            applicable: true,
            failures,
        });
    }

    pub(crate) fn skip(&mut self, id: &str, description: &str) {
        self.checks.push(Check {
            id: id.to_string(),
            description: description.to_string(),
            applicable: false,
            failures: Vec::new(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Looks a check up by id; panics on unknown ids.
    pub fn check(&self, id: &str) -> &Check {
        self.checks
            .iter()
            .find(|c| c.id == id)
            .unwrap_or_else(|| panic!("no check with id {id:?}"))
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.id.as_str())
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match (c.applicable, c.passed()) {
                (false, _) => "SKIP",
                (true, true) => "PASS",
                (true, false) => "FAIL",
            };
            writeln!(f, "{status} {} {}", c.id, c.description)?;
            for w in &c.failures {
                writeln!(f, "  witness {w}")?;
            }
        }
        Ok(())
    }
}

/// Formats 0-based indices as a 1-based set literal, e.g. `{1,6,11}`.
pub fn braces(items: &[usize]) -> String {
    let inner: Vec<String> = items.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}
