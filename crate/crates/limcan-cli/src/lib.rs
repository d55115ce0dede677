//! Command-line front end and verification harness for `limcan`.
//!
//! Every command prints one JSON document carrying the seed it ran with. All numbers are exact:
//! rationals appear as `"p/q"` strings. Exit codes: 0 success, 2 input or guard error, 3 cap
//! overflow, 4 property failure (including a failed verification suite).

pub mod commands;
pub mod suites;
