use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::record::{run, ErrorRecord, RunError, RunOptions};
use crate::spec::parse_batch_line;

/// Evaluates one JSONL line into one JSON output line.
pub fn process_line(line: &str, opts: &RunOptions) -> (String, bool) {
    let outcome = parse_batch_line(line).map_err(RunError::from).and_then(|spec| run(&spec, opts));
    let json = match &outcome {
        Ok(rec) => serde_json::to_string(rec),
        Err(e) => serde_json::to_string(&ErrorRecord::from(e)),
    };
    (json.expect("records serialize"), outcome.is_ok())
}

/// Output lines in input order; blank input lines are skipped.
pub fn run_batch_lines(lines: &[String], opts: &RunOptions, jobs: usize) -> anyhow::Result<(Vec<String>, bool)> {
    let records: Vec<&String> = lines.iter().filter(|l| !l.trim().is_empty()).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<(String, bool)> = pool.install(|| records.par_iter().map(|l| process_line(l, opts)).collect());
    let all_ok = results.iter().all(|(_, ok)| *ok);
    Ok((results.into_iter().map(|(s, _)| s).collect(), all_ok))
}

/// Reads every line, evaluates, writes one line per record. Returns whether
/// every record succeeded.
pub fn run_batch<R: BufRead, W: Write>(input: R, mut out: W, opts: &RunOptions, jobs: usize) -> anyhow::Result<bool> {
    let lines = input.lines().collect::<Result<Vec<_>, _>>()?;
    let (rendered, all_ok) = run_batch_lines(&lines, opts, jobs)?;
    for line in rendered {
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(all_ok)
}
