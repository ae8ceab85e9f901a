//! Verification reports: one record per (quantity, computation path).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Prediction,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Prediction => "PREDICTION",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RecordKind {
    Check,
    Prediction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub case: String,
    pub quantity: String,
    pub path: String,
    pub value: String,
    pub status: Status,
    pub record: RecordKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub entries: Vec<Entry>,
}

impl VerificationReport {
    pub fn new(case: impl Into<String>) -> Self {
        VerificationReport { case: case.into(), entries: Vec::new() }
    }

    fn push(&mut self, quantity: &str, path: &str, value: String, status: Status, record: RecordKind) {
        self.entries.push(Entry {
            case: self.case.clone(),
            quantity: quantity.to_string(),
            path: path.to_string(),
            value,
            status,
            record,
        });
    }

    /// Records every path; all PASS when the values coincide, all FAIL
    /// otherwise.
    pub fn agree(&mut self, quantity: &str, paths: &[(&str, String)]) -> bool {
        let ok = paths.windows(2).all(|w| w[0].1 == w[1].1);
        let status = if ok { Status::Pass } else { Status::Fail };
        for (path, value) in paths {
            self.push(quantity, path, value.clone(), status, RecordKind::Check);
        }
        ok
    }

    pub fn check(&mut self, quantity: &str, path: &str, value: impl Into<String>, ok: bool) -> bool {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(quantity, path, value.into(), status, RecordKind::Check);
        ok
    }

    pub fn skip(&mut self, quantity: &str, path: &str, reason: impl Into<String>) {
        self.push(quantity, path, reason.into(), Status::Skip, RecordKind::Check);
    }

    pub fn prediction(&mut self, quantity: &str, path: &str, value: impl Into<String>) {
        self.push(quantity, path, value.into(), Status::Prediction, RecordKind::Prediction);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    pub fn has_failures(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }
}

/// Ordered collection of case reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.reports.iter().flat_map(|r| r.entries.iter())
    }

    pub fn has_failures(&self) -> bool {
        self.reports.iter().any(VerificationReport::has_failures)
    }

    pub fn summary(&self) -> BTreeMap<Status, usize> {
        let mut out = BTreeMap::new();
        for s in [Status::Pass, Status::Fail, Status::Prediction, Status::Skip] {
            out.insert(s, 0);
        }
        for e in self.entries() {
            *out.entry(e.status).or_insert(0) += 1;
        }
        out
    }

    fn summary_line(&self) -> String {
        self.summary()
            .iter()
            .map(|(s, n)| format!("{}={}", s.as_str(), n))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("case\tquantity\tpath\tvalue\tstatus\n");
        for e in self.entries() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                e.case,
                e.quantity,
                e.path,
                e.value.replace(['\t', '\n'], " "),
                e.status.as_str()
            );
        }
        let _ = writeln!(out, "# cases={} {}", self.reports.len(), self.summary_line());
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            records: Vec<&'a Entry>,
            summary: BTreeMap<&'static str, usize>,
        }
        let wire = Wire {
            records: self.entries().collect(),
            summary: self.summary().into_iter().map(|(s, n)| (s.as_str(), n)).collect(),
        };
        serde_json::to_string_pretty(&wire).expect("report serializes") + "\n"
    }
}
