//! Verification outcomes and structural errors.
//!
//! A [`Report`] is the result of an exhaustive law check: either every
//! instance held (`ok`) or the first failing instance is recorded as a
//! [`Counterexample`]. Malformed input (unresolved ids, ill-typed tables,
//! exceeded enumeration budgets) is not a law violation and surfaces as an
//! [`Error`] instead.

use serde::Serialize;
use thiserror::Error;

/// Structural failures: the input could not even be checked.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("incomplete composition table: missing composite {g}.{f}")]
    MissingComposite { g: String, f: String },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A search result whose absence is a legitimate answer, not an error.
#[derive(Debug, Clone)]
pub enum Outcome<T> {
    Found(T),
    /// Nothing qualifies; the string names the obstruction.
    Absent(String),
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            Outcome::Absent(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

/// The first failing instance of a law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Name of the violated law, e.g. `"naturality"` or `"snake-left"`.
    pub law: String,
    /// Where it failed, in terms of object and morphism ids.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    ok: bool,
    checked: u64,
    /// Set when only a probe family (not the full quantifier range) was
    /// examined.
    partial: bool,
    counterexample: Option<Counterexample>,
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report {
            ok: true,
            checked: 0,
            partial: false,
            counterexample: None,
        }
    }

    pub fn violation(law: impl Into<String>, detail: impl Into<String>) -> Self {
        let mut r = Report::new();
        r.fail(law, detail);
        r
    }

    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn checked(&self) -> u64 {
        self.checked
    }

    pub fn partial(&self) -> bool {
        self.partial
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        self.counterexample.as_ref()
    }

    pub fn mark_partial(&mut self) {
        self.partial = true;
    }

    /// Count one verified instance. `detail` is only built on failure; the
    /// first failure wins.
    pub fn check(&mut self, holds: bool, law: &str, detail: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !holds {
            self.fail(law, detail());
        }
        holds
    }

    pub fn fail(&mut self, law: impl Into<String>, detail: impl Into<String>) {
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                law: law.into(),
                detail: detail.into(),
            });
        }
        self.ok = false;
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.partial |= other.partial;
        if let Some(cx) = other.counterexample {
            self.fail(cx.law, cx.detail);
        }
    }

    pub fn law(&self) -> Option<&str> {
        self.counterexample.as_ref().map(|c| c.law.as_str())
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.counterexample {
            None => write!(f, "ok ({} instances checked)", self.checked)?,
            Some(cx) => write!(
                f,
                "violated `{}` at {} ({} instances checked)",
                cx.law, cx.detail, self.checked
            )?,
        }
        if self.partial {
            write!(f, " [partial]")?;
        }
        Ok(())
    }
}
