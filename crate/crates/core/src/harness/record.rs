//! Per-trial records and their CSV form.

use std::io::{Read, Write};

use thiserror::Error;

/// Exact CSV header line.
pub const CSV_HEADER: [&str; 10] = [
    "task",
    "n",
    "algorithm",
    "trial",
    "seed",
    "attempts",
    "solved",
    "solution_size",
    "solution_delay",
    "wall_ms",
];

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("header mismatch: expected `{}`", CSV_HEADER.join(","))]
    Header,
    #[error("row {row}: bad `{field}` value `{value}`")]
    Field { row: usize, field: &'static str, value: String },
}

/// Outcome of one search trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub task: String,
    pub n: usize,
    pub algorithm: String,
    pub trial: usize,
    pub seed: u64,
    pub attempts: u64,
    pub solved: bool,
    pub solution_size: Option<usize>,
    pub solution_delay: Option<usize>,
    /// Left empty unless timing was requested, so that reruns are
    /// byte-identical.
    pub wall_ms: Option<u64>,
    /// Why the trial could not run; not part of the CSV.
    pub diagnostic: Option<String>,
}

impl TrialRecord {
    fn fields(&self) -> [String; 10] {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.task.clone(),
            self.n.to_string(),
            self.algorithm.clone(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.attempts.to_string(),
            (self.solved as u8).to_string(),
            opt(self.solution_size.map(|v| v as u64)),
            opt(self.solution_delay.map(|v| v as u64)),
            opt(self.wall_ms),
        ]
    }

    /// One CSV line without the header or line terminator.
    pub fn csv_line(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.fields()).expect("in-memory write");
        let mut bytes = w.into_inner().expect("in-memory flush");
        bytes.pop();
        String::from_utf8(bytes).expect("utf-8 fields")
    }
}

/// Writes the header and one line per record, LF-terminated.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), RecordError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>, RecordError> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    if rd.headers()?.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(RecordError::Header);
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let row_no = i + 2;
        let get = |k: usize| row.get(k).unwrap_or("");
        fn num<T: std::str::FromStr>(row: usize, field: &'static str, v: &str) -> Result<T, RecordError> {
            v.parse().map_err(|_| RecordError::Field {
                row,
                field,
                value: v.to_string(),
            })
        }
        fn opt<T: std::str::FromStr>(row: usize, field: &'static str, v: &str) -> Result<Option<T>, RecordError> {
            if v.is_empty() {
                Ok(None)
            } else {
                num(row, field, v).map(Some)
            }
        }
        let solved = match get(6) {
            "0" => false,
            "1" => true,
            v => {
                return Err(RecordError::Field {
                    row: row_no,
                    field: "solved",
                    value: v.to_string(),
                })
            }
        };
        out.push(TrialRecord {
            task: get(0).to_string(),
            n: num(row_no, "n", get(1))?,
            algorithm: get(2).to_string(),
            trial: num(row_no, "trial", get(3))?,
            seed: num(row_no, "seed", get(4))?,
            attempts: num(row_no, "attempts", get(5))?,
            solved,
            solution_size: opt(row_no, "solution_size", get(7))?,
            solution_delay: opt(row_no, "solution_delay", get(8))?,
            wall_ms: opt(row_no, "wall_ms", get(9))?,
            diagnostic: None,
        });
    }
    Ok(out)
}
