//! Structured findings with stable codes, shared by the lint engine, profile
//! checks and instance validation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{EnumParseError, Ref};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

impl FromStr for Severity {
    type Err = EnumParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "error" => Ok(Severity::Error),
            "warning" => Ok(Severity::Warning),
            "info" => Ok(Severity::Info),
            _ => Err(EnumParseError { kind: "severity", value: s.to_string() }),
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a diagnostic is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Namespace(String),
    Term(Ref),
    Entity(String),
    Literal(String),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Namespace(prefix) => write!(f, "{prefix}:*"),
            Subject::Term(r) => r.fmt(f),
            Subject::Entity(iri) => f.write_str(iri),
            Subject::Literal(text) => write!(f, "{text:?}"),
        }
    }
}

impl From<Ref> for Subject {
    fn from(r: Ref) -> Self {
        Subject::Term(r)
    }
}

impl From<&Ref> for Subject {
    fn from(r: &Ref) -> Self {
        Subject::Term(r.clone())
    }
}

pub struct CodeInfo {
    pub code: &'static str,
    pub severity: Severity,
    pub check_id: &'static str,
    pub summary: &'static str,
}

pub const CHECK_ONTOCLEAN: &str = "ontoclean";
pub const CHECK_TOP_CATEGORY: &str = "top-category";
pub const CHECK_LAYER: &str = "layer-discipline";
pub const CHECK_PROPERTY_REFINEMENT: &str = "property-refinement";
pub const CHECK_PARTICIPATION: &str = "participation-anchor";
pub const CHECK_PROFILE: &str = "profile";
pub const CHECK_INSTANCES: &str = "instances";

macro_rules! catalog {
    ($($code:literal, $sev:ident, $check:ident, $summary:literal;)+) => {
        pub const CATALOG: &[CodeInfo] = &[
            $(CodeInfo { code: $code, severity: Severity::$sev, check_id: $check, summary: $summary },)+
        ];
    };
}

catalog! {
    "EA1", Warning, CHECK_PARTICIPATION, "essential property anchored on an anti-rigid class";
    "IV1", Error, CHECK_INSTANCES, "asserted class is not in the profile";
    "IV2", Error, CHECK_INSTANCES, "statement property is not in the profile";
    "IV3", Error, CHECK_INSTANCES, "subject is not an instance of the property domain";
    "IV4", Error, CHECK_INSTANCES, "object does not fit the property range";
    "IV5", Error, CHECK_INSTANCES, "quantifier violated";
    "IV6", Error, CHECK_INSTANCES, "quality effected or ended more than once";
    "IV7", Error, CHECK_INSTANCES, "quality ends before it is effected";
    "IV8", Error, CHECK_INSTANCES, "setting must link an intention to a spatio-temporal event";
    "LD1", Error, CHECK_LAYER, "floating extension class";
    "LD2", Error, CHECK_LAYER, "superclass edge generalizes into a higher layer";
    "LD3", Warning, CHECK_LAYER, "declared dependency is never referenced";
    "OC1", Error, CHECK_ONTOCLEAN, "rigid class under anti-rigid class";
    "OC2", Error, CHECK_ONTOCLEAN, "identity criterion dropped by subclass";
    "OC3", Error, CHECK_ONTOCLEAN, "unity criterion incompatible with superclass";
    "OC4", Error, CHECK_ONTOCLEAN, "independent class under dependent class";
    "PA1", Error, CHECK_PARTICIPATION, "participation does not link endurants and perdurants";
    "PF1", Error, CHECK_PROFILE, "profile is not closed";
    "PF2", Error, CHECK_PROFILE, "quantifier override loosens the base quantifier";
    "PF3", Error, CHECK_PROFILE, "profile pin does not match the ecosystem";
    "PR1", Error, CHECK_PROPERTY_REFINEMENT, "subproperty domain is not subsumed by superproperty domain";
    "PR2", Error, CHECK_PROPERTY_REFINEMENT, "subproperty range is not subsumed by superproperty range";
    "TC1", Error, CHECK_TOP_CATEGORY, "class reaches more than one top category";
    "TC2", Info, CHECK_TOP_CATEGORY, "class is outside the top-category partition";
}

pub fn code_info(code: &str) -> Option<&'static CodeInfo> {
    CATALOG.iter().find(|info| info.code == code)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub code: &'static str,
    pub severity: Severity,
    pub subjects: Vec<Subject>,
    pub message: String,
    pub check_id: &'static str,
}

impl Diagnostic {
    /// Builds a diagnostic with the catalog's default severity.
    ///
    /// Panics on an unregistered code or an empty subject list; both are
    /// programming errors.
    pub fn new(code: &str, subjects: Vec<Subject>, message: impl Into<String>) -> Self {
        let info = code_info(code).unwrap_or_else(|| panic!("unregistered diagnostic code {code}"));
        assert!(!subjects.is_empty(), "diagnostic {code} without subjects");
        Diagnostic {
            code: info.code,
            severity: info.severity,
            subjects,
            message: message.into(),
            check_id: info.check_id,
        }
    }

    pub fn terms<'a>(code: &str, refs: impl IntoIterator<Item = &'a Ref>, message: impl Into<String>) -> Self {
        Diagnostic::new(code, refs.into_iter().map(Subject::from).collect(), message)
    }

    fn sort_key(&self) -> (&str, &[Subject], &str) {
        (self.code, &self.subjects, &self.message)
    }
}

impl Ord for Diagnostic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.severity.cmp(&other.severity))
            .then_with(|| self.check_id.cmp(other.check_id))
    }
}

impl PartialOrd for Diagnostic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subjects: Vec<String> = self.subjects.iter().map(ToString::to_string).collect();
        write!(f, "{} {} {}: {}", self.code, self.severity, subjects.join(", "), self.message)
    }
}

/// Canonical report order: by code, then subjects, then message.
pub fn sort(diagnostics: &mut [Diagnostic]) {
    diagnostics.sort();
}

pub fn error_count(diagnostics: &[Diagnostic]) -> usize {
    count(diagnostics, Severity::Error)
}

pub fn count(diagnostics: &[Diagnostic], severity: Severity) -> usize {
    diagnostics.iter().filter(|d| d.severity == severity).count()
}

/// One `CODE severity subject(s): message` line per diagnostic.
pub fn render_text(diagnostics: &[Diagnostic]) -> String {
    let mut out = String::new();
    for d in diagnostics {
        out.push_str(&d.to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticRecord {
    pub code: String,
    pub severity: Severity,
    pub check: String,
    pub subjects: Vec<String>,
    pub message: String,
}

impl From<&Diagnostic> for DiagnosticRecord {
    fn from(d: &Diagnostic) -> Self {
        DiagnosticRecord {
            code: d.code.to_string(),
            severity: d.severity,
            check: d.check_id.to_string(),
            subjects: d.subjects.iter().map(ToString::to_string).collect(),
            message: d.message.clone(),
        }
    }
}

/// JSON array of diagnostic records, pretty-printed, newline-terminated.
pub fn render_json(diagnostics: &[Diagnostic]) -> String {
    let records: Vec<DiagnosticRecord> = diagnostics.iter().map(DiagnosticRecord::from).collect();
    let mut out = serde_json::to_string_pretty(&records).expect("records serialize");
    out.push('\n');
    out
}
