//! Diagnostics shared by the parser, the loader and graph validation.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    // wire format
    FieldCount,
    EmptyField,
    BadEscape,
    AliasRewrite,
    NearDuplicateClass,
    TruncatedLog,
    // graph validation
    AmbiguousAbstract,
    NonAbstractTarget,
    ChainedAbstract,
    TypeCycle,
    SubRelationCycle,
    ConflictingLabel,
    UnknownLabelValue,
    DanglingReification,
    IncompleteReification,
    AmbiguousReification,
    BadTimeFormat,
    BadNumberFormat,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::FieldCount => "FieldCount",
            Code::EmptyField => "EmptyField",
            Code::BadEscape => "BadEscape",
            Code::AliasRewrite => "AliasRewrite",
            Code::NearDuplicateClass => "NearDuplicateClass",
            Code::TruncatedLog => "TruncatedLog",
            Code::AmbiguousAbstract => "AmbiguousAbstract",
            Code::NonAbstractTarget => "NonAbstractTarget",
            Code::ChainedAbstract => "ChainedAbstract",
            Code::TypeCycle => "TypeCycle",
            Code::SubRelationCycle => "SubRelationCycle",
            Code::ConflictingLabel => "ConflictingLabel",
            Code::UnknownLabelValue => "UnknownLabelValue",
            Code::DanglingReification => "DanglingReification",
            Code::IncompleteReification => "IncompleteReification",
            Code::AmbiguousReification => "AmbiguousReification",
            Code::BadTimeFormat => "BadTimeFormat",
            Code::BadNumberFormat => "BadNumberFormat",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    /// 1-based source line, absent for graph-level findings.
    pub line: Option<usize>,
    pub severity: Severity,
    pub code: Code,
    /// Text of the object the finding is about.
    pub subject: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn at_line(line: usize, severity: Severity, code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            line: Some(line),
            severity,
            code,
            subject: None,
            message: message.into(),
        }
    }

    pub fn finding(
        severity: Severity,
        code: Code,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            line: None,
            severity,
            code,
            subject: Some(subject.into()),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Report line: `<severity> <code> <subject text> — <message>`, prefixed by
/// `line N:` for diagnostics that point into a source.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "{} {}", self.severity, self.code)?;
        if let Some(subject) = &self.subject {
            write!(f, " {}", crate::format::escape_field(subject))?;
        }
        write!(f, " \u{2014} {}", self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
