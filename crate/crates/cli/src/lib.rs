//! Library side of the `entropic` command: each subcommand renders its whole
//! output into an [`Output`] so runs can be compared byte for byte.

pub mod error;
pub mod eval;
pub mod format;
pub mod input;
pub mod select;
pub mod sweep;
pub mod verify;

use std::path::Path;

pub use error::{CliError, Result};

/// Exit code for a completed run in which every asserted check held.
pub const EXIT_PASS: i32 = 0;
/// Exit code for a violated relation or a numeric/analytic mismatch.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for bad flags, unreadable input or invalid states.
pub const EXIT_USAGE: i32 = 2;

/// Rendered command output plus the exit code it should produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

impl Output {
    pub fn new(text: String, passed: bool) -> Self {
        Self {
            text,
            exit_code: if passed { EXIT_PASS } else { EXIT_FAIL },
        }
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        use std::io::Write;
        match path {
            Some(p) => std::fs::write(p, &self.text).map_err(|source| CliError::Write {
                path: p.to_path_buf(),
                source,
            }),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| CliError::Write {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }
}
