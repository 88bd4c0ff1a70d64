//! Front end for the `ndim` binary: spec parsing, exact-value text forms,
//! output records and JSONL batch evaluation.

pub mod batch;
pub mod format;
pub mod record;
pub mod spec;

pub use batch::{run_batch, run_batch_lines};
pub use format::{format_exact, format_sum, latex_exact, latex_sum, parse_exact, parse_sum};
pub use record::{run, OutputRecord, RunError, RunOptions};
pub use spec::{build_spec, parse_batch_line, parse_range, parse_rational, SpecError};
