//! A small script language over the `handlecalc` calculi, plus trace files
//! that record and replay move sequences.

pub mod ast;
pub mod exec;
pub mod parse;
pub mod trace;

pub use exec::{exec_script, ExecOptions, Failure, FailureKind, RunReport};
pub use parse::{parse_script, ParseError};
pub use trace::{check_trace, render_traces, CheckOutcome};
