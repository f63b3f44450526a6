//! Suite reports: JSON with fixed 17-significant-digit floats, or a text table.

use serde::ser::Serializer;
use serde::Serialize;
use serde_json::value::RawValue;

/// Float that serializes as `d.dddddddddddddddde±x` (17 significant digits).
/// Non-finite values become the strings `"NaN"`, `"inf"`, `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed17(pub f64);

impl Fixed17 {
    pub fn text(self) -> String {
        let x = self.0;
        if x.is_nan() {
            "\"NaN\"".into()
        } else if x.is_infinite() {
            if x > 0.0 { "\"inf\"" } else { "\"-inf\"" }.into()
        } else {
            format!("{x:.16e}")
        }
    }
}

impl Serialize for Fixed17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub id: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
    pub residual: Fixed17,
    pub tolerance: Fixed17,
    pub pass: bool,
}

impl Case {
    /// `pass` is derived: `residual <= tolerance` (NaN fails).
    pub fn new(
        id: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Case {
            id: id.into(),
            inputs: inputs.into(),
            expected: expected.into(),
            got: got.into(),
            residual: Fixed17(residual),
            tolerance: Fixed17(tolerance),
            pass: residual <= tolerance,
        }
    }

    /// A case that could not be evaluated.
    pub fn error(id: impl Into<String>, inputs: impl Into<String>, message: impl Into<String>) -> Self {
        Case {
            id: id.into(),
            inputs: inputs.into(),
            expected: String::new(),
            got: format!("error: {}", message.into()),
            residual: Fixed17(f64::INFINITY),
            tolerance: Fixed17(0.0),
            pass: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureInfo {
    pub order: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: Fixed17,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub version: String,
    pub seed: u64,
    pub signatures: Vec<String>,
    pub quadrature: Option<QuadratureInfo>,
    pub summary: Summary,
    pub cases: Vec<Case>,
}

impl Report {
    /// Sorts cases by id and fills in the summary.
    pub fn new(
        suite: &str,
        seed: u64,
        signatures: Vec<String>,
        quadrature: Option<QuadratureInfo>,
        mut cases: Vec<Case>,
    ) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = cases.iter().filter(|c| c.pass).count();
        let max_residual = cases.iter().map(|c| c.residual.0).fold(0.0, f64::max);
        Report {
            suite: suite.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            signatures,
            quadrature,
            summary: Summary {
                total: cases.len(),
                passed,
                failed: cases.len() - passed,
                max_residual: Fixed17(max_residual),
            },
            cases,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let width = self.cases.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!(
            "suite {} (seed {}, version {})\n{:<width$}  {:>24}  {:>24}  result\n",
            self.suite, self.seed, self.version, "id", "residual", "tolerance"
        );
        for c in &self.cases {
            out += &format!(
                "{:<width$}  {:>24}  {:>24}  {}\n",
                c.id,
                c.residual.text().trim_matches('"'),
                c.tolerance.text().trim_matches('"'),
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        out += &format!(
            "{} cases, {} passed, {} failed, max residual {}\n",
            self.summary.total,
            self.summary.passed,
            self.summary.failed,
            self.summary.max_residual.text().trim_matches('"')
        );
        out
    }
}
