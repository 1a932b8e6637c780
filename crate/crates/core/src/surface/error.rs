use std::fmt;
use std::sync::Arc;

use crate::kernel::ValidationReport;

/// A range in a source file; lines and columns are 1-based, the end is
/// exclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    /// The smallest span covering both.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            line: self.line,
            col: self.col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceError {
    /// Malformed text.
    Parse { span: SourceSpan, message: String },
    /// A name that does not resolve, or resolves ambiguously.
    Resolve { span: SourceSpan, message: String },
    /// A declaration that parses but fails the kernel checks.
    Invalid { span: SourceSpan, what: String, report: ValidationReport },
}

impl SurfaceError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            SurfaceError::Parse { span, .. } | SurfaceError::Resolve { span, .. } | SurfaceError::Invalid { span, .. } => {
                span
            }
        }
    }
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::Parse { span, message } | SurfaceError::Resolve { span, message } => {
                write!(f, "{span}: {message}")
            }
            SurfaceError::Invalid { span, what, report } => {
                write!(f, "{span}: {what} is ill-formed")?;
                for v in report.violations() {
                    write!(f, "\n{span}: {}: {}", v.location, v.message)?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for SurfaceError {}
