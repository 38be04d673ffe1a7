//! The bound-versus-measurement report shared by every inequality checker.

use crate::util::fmt_f64;

/// An evaluated analytic bound paired with a measured quantity.
///
/// `terms` itemizes the bound's main terms (label, value); `bound` is their
/// assembled total. `slack` is `measured / bound` — at or below 1 when the
/// inequality holds. `flags` carry regime annotations ("outside stated
/// validity", branch switches, skipped checks) without failing anything.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub label: String,
    pub terms: Vec<(String, f64)>,
    pub bound: f64,
    pub measured: f64,
    pub flags: Vec<String>,
}

impl BoundReport {
    pub fn new(label: impl Into<String>, bound: f64, measured: f64) -> Self {
        Self {
            label: label.into(),
            terms: Vec::new(),
            bound,
            measured,
            flags: Vec::new(),
        }
    }

    pub fn with_term(mut self, name: impl Into<String>, value: f64) -> Self {
        self.terms.push((name.into(), value));
        self
    }

    pub fn with_flag(mut self, flag: impl Into<String>) -> Self {
        self.flags.push(flag.into());
        self
    }

    /// `measured / bound`; infinite when the bound is zero and the
    /// measurement is not.
    pub fn slack(&self) -> f64 {
        if self.measured == 0.0 && self.bound == 0.0 {
            0.0
        } else {
            self.measured / self.bound
        }
    }

    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.label,
            fmt_f64(self.measured),
            fmt_f64(self.bound),
            fmt_f64(self.slack()),
            self.flags.join(";")
        )
    }
}
