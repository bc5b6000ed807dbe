//! Command-line companion to [`wordent_core`]: analysis reports, word
//! generation, complexity profiling, and independent re-verification.
//!
//! # Subcommands
//!
//! - `wordent analyze` — runs parse → conditions → slice → entropy
//!   bracket → dimension for one complexity bound and writes a JSON
//!   report (schema below).
//! - `wordent generate` — writes a prefix of one of the built-in
//!   infinite words as a letters file plus a `.meta` sidecar.
//! - `wordent profile` — measures a factor-complexity profile of a
//!   letters file or a built-in word and writes CSV.
//! - `wordent verify` — re-checks a report (hashes, certificate replay)
//!   or a generated letters file (re-measures the documented
//!   guarantees).
//!
//! # Exit codes
//!
//! - `0` — success.
//! - `1` — usage error: bad flags, unparsable bound, malformed input.
//! - `2` — a configured budget was exceeded; `analyze` still writes the
//!   partial report with `"status": "budget-exceeded"`.
//! - `3` — verification failed, or `analyze --require-certified` ran to
//!   completion without a certificate.
//!
//! # Report schema (`wordent.analysis/1`)
//!
//! A report is a single JSON object with these fields, in order:
//! `schema`, `tool {name, version}`, `status`, `spec {text, q,
//! description}`, `budgets`, `conditions`, `e0`, `ew`, `ratio`,
//! `dimension`, `slice`, `certificate`, `notes`.  Exact rational
//! endpoints are decimal or `"p/q"` strings next to their `f64`
//! renderings; large integers are decimal strings.  The `certificate`
//! object is a complete replay blob: subsystem presentation, finite
//! horizon, witness count, envelope, and transcript — everything
//! `verify` needs to re-run the checks without redoing the search.
//! Reports are written atomically together with a `<name>.sha256`
//! sidecar over the exact file bytes.
//!
//! # Letters files
//!
//! Alphabets up to ten letters are written as bare UTF-8 digit strings
//! (exactly one byte per letter, no trailing newline); larger alphabets
//! as comma-separated decimal integers.  Every letters file gets a
//! `<name>.meta` sidecar of `key=value` lines echoing the construction
//! parameters and, when the construction exposes saturating prefixes,
//! the largest block length `exact_to` whose factor set is provably
//! complete within the written prefix.
//!
//! # Profiles
//!
//! CSV with header `n,count` and one row per block length `0..=N`;
//! `--rates` appends `log_count` (natural log) and `rate`
//! (`log_count / n`, empty at `n = 0`), both to twelve decimals.
//!
//! # Config files
//!
//! `--config <path>` reads UTF-8 `key=value` lines (`#` comments)
//! presetting the same budget keys accepted by `--budget`: `max_n`,
//! `memory_cap`, `witness_n`, `finite_start`, `finite_cap`,
//! `screen_horizon`, `subset_cap`, `max_removals`, `max_rows`,
//! `keep_leaves`, `tol`, `condition_horizon`, `e0_window`, `threads`.
//! Precedence: defaults < config file < `--budget` pairs < dedicated
//! flags.
//!
//! Every output is deterministic: the same flags produce byte-identical
//! files, including under `--threads` parallelism (work is sharded by
//! slice row and merged in row order).

pub mod analyze;
pub mod generate;
pub mod io;
pub mod profile;
pub mod report;
pub mod settings;
pub mod verify;
pub mod words;

/// Process exit code for success.
pub const EXIT_OK: i32 = 0;
/// Process exit code for usage and input errors.
pub const EXIT_USAGE: i32 = 1;
/// Process exit code for exceeded budgets (partial results written).
pub const EXIT_BUDGET: i32 = 2;
/// Process exit code for failed verification or missing certification.
pub const EXIT_UNCERTIFIED: i32 = 3;

/// Identifier stored in report and sidecar headers.
pub const TOOL_NAME: &str = "wordent";
/// Version stored in report and sidecar headers.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Schema tag of analysis reports.
pub const REPORT_SCHEMA: &str = "wordent.analysis/1";

/// An error that already knows the process exit code it deserves.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    pub fn usage(message: impl Into<String>) -> CmdError {
        CmdError { code: EXIT_USAGE, message: message.into() }
    }

    pub fn budget(message: impl Into<String>) -> CmdError {
        CmdError { code: EXIT_BUDGET, message: message.into() }
    }

    pub fn failed(message: impl Into<String>) -> CmdError {
        CmdError { code: EXIT_UNCERTIFIED, message: message.into() }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<wordent_core::Error> for CmdError {
    fn from(e: wordent_core::Error) -> CmdError {
        match e {
            wordent_core::Error::Budget(_) => CmdError::budget(e.to_string()),
            _ => CmdError::usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> CmdError {
        CmdError::usage(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, CmdError>;
