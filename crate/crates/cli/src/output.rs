//! Row writers for the CSV and JSON-lines datasets.
//!
//! Numbers are printed in the shortest round-trip form (`{:?}`), so a row
//! is a pure function of its values and repeated runs are byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use kepler_billiards::error::Termination;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:?}"),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) if v.is_finite() => format!("{v:?}"),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Num(_) | Cell::Missing => "null".into(),
        }
    }
}

/// A table of rows with fixed columns, written as CSV (header first) or as
/// one JSON object per line with the column names as keys.
pub struct Sink {
    format: Format,
    columns: &'static [&'static str],
    out: Box<dyn Write>,
}

impl Sink {
    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn open(path: Option<&Path>, format: Format, columns: &'static [&'static str]) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let mut sink = Self { format, columns, out };
        if format == Format::Csv {
            writeln!(sink.out, "{}", columns.join(","))?;
        }
        Ok(sink)
    }

    pub fn row(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.columns.len());
        match self.format {
            Format::Csv => {
                let line: Vec<String> = cells.iter().map(Cell::csv).collect();
                writeln!(self.out, "{}", line.join(","))
            }
            Format::Jsonl => {
                let fields: Vec<String> =
                    self.columns.iter().zip(cells).map(|(name, c)| format!("\"{name}\":{}", c.json())).collect();
                writeln!(self.out, "{{{}}}", fields.join(","))
            }
        }
    }

    /// Trailing record for an orbit that stopped early: a `# terminated`
    /// comment line in CSV, a `{"terminated": …}` object in JSON lines.
    /// `seed` names the orbit in multi-orbit datasets.
    pub fn termination(&mut self, seed: Option<usize>, t: &Termination) -> io::Result<()> {
        match self.format {
            Format::Csv => {
                let who = seed.map(|s| format!(" seed {s}")).unwrap_or_default();
                writeln!(self.out, "# terminated{who} after bounce {}: {}", t.after_bounce, t.reason)
            }
            Format::Jsonl => {
                let seed = seed.map(|s| format!(",\"seed\":{s}")).unwrap_or_default();
                let reason = serde_json::to_string(&t.reason.to_string()).expect("strings serialize");
                writeln!(
                    self.out,
                    "{{\"terminated\":{{\"after_bounce\":{}{seed},\"reason\":{reason}}}}}",
                    t.after_bounce
                )
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}
