//! Check records shared by every validator and law suite.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Result;
use crate::finset::{compare_maps, FinMap, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Record {
    pub law: String,
    pub instance: String,
    pub passed: bool,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub witness: Option<Witness>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub detail: Option<String>,
}

impl Record {
    pub fn pass(law: &str, instance: &str) -> Self {
        Record { law: law.into(), instance: instance.into(), passed: true, witness: None, detail: None }
    }

    pub fn fail(law: &str, instance: &str, detail: impl Into<String>) -> Self {
        Record {
            law: law.into(),
            instance: instance.into(),
            passed: false,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    pub fn check(law: &str, instance: &str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(law, instance)
        } else {
            Self::fail(law, instance, detail())
        }
    }

    /// Compares two parallel maps built by `paths`. A construction error means
    /// an intermediate map was ill-defined, which is reported as a failure.
    pub fn diagram<F>(law: &str, instance: &str, paths: F) -> Self
    where
        F: FnOnce() -> Result<(FinMap, FinMap)>,
    {
        match paths().and_then(|(l, r)| compare_maps(&l, &r)) {
            Ok(c) => Record {
                law: law.into(),
                instance: instance.into(),
                passed: c.passed,
                witness: c.witness,
                detail: None,
            },
            Err(e) => Self::fail(law, instance, alloc::format!("ill-defined composite: {e}")),
        }
    }
}

impl Record {
    /// Collapses a sub-report into one record carrying its first failure.
    pub fn summarize(law: &str, instance: &str, report: &Report) -> Self {
        match report.failures().next() {
            None => Self::pass(law, instance),
            Some(f) => Record {
                law: law.into(),
                instance: instance.into(),
                passed: false,
                witness: f.witness.clone(),
                detail: Some(alloc::format!(
                    "{}: {} ({}){}",
                    report.title,
                    f.law,
                    f.instance,
                    f.detail.as_deref().map(|d| alloc::format!(": {d}")).unwrap_or_default()
                )),
            },
        }
    }
}

/// Aggregate counts for one law.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LawSummary {
    pub law: String,
    pub checked: usize,
    pub failed: usize,
}

/// An ordered list of laws and one record per (law, instance) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Report {
    pub title: String,
    pub notes: Vec<String>,
    pub laws: Vec<String>,
    pub records: Vec<Record>,
}

pub type ValidationReport = Report;
pub type LawReport = Report;
pub type AxiomReport = Report;
pub type FunctorLawReport = Report;

impl Report {
    pub fn new(title: &str, laws: &[&str]) -> Self {
        Report {
            title: title.into(),
            notes: Vec::new(),
            laws: laws.iter().map(|l| l.to_string()).collect(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        debug_assert!(self.laws.contains(&record.law), "unknown law {}", record.law);
        self.records.push(record);
    }

    pub fn extend<I: IntoIterator<Item = Record>>(&mut self, records: I) {
        for r in records {
            self.push(r);
        }
    }

    /// Appends another report's records under a prefix for their instances.
    pub fn absorb(&mut self, law: &str, instance: &str, other: &Report) {
        for r in &other.records {
            let mut r = r.clone();
            r.instance = alloc::format!("{instance} / {}: {}", other.title, r.law);
            r.law = law.into();
            self.push(r);
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn law_passed(&self, law: &str) -> bool {
        self.records.iter().filter(|r| r.law == law).all(|r| r.passed)
    }

    pub fn summary(&self) -> Vec<LawSummary> {
        self.laws
            .iter()
            .map(|law| {
                let of_law = self.records.iter().filter(|r| &r.law == law);
                let (checked, failed) =
                    of_law.fold((0, 0), |(c, f), r| (c + 1, f + usize::from(!r.passed)));
                LawSummary { law: law.clone(), checked, failed }
            })
            .collect()
    }

    /// Canonical record order: schema order of laws, then instance text.
    pub fn sort(&mut self) {
        let laws = &self.laws;
        let rank = |law: &str| laws.iter().position(|l| l == law).unwrap_or(usize::MAX);
        self.records
            .sort_by(|a, b| rank(&a.law).cmp(&rank(&b.law)).then_with(|| a.instance.cmp(&b.instance)));
    }
}
