use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Destination plus the format resolved against the subcommand default.
pub struct Sink {
    path: String,
    format: Format,
}

impl Sink {
    pub fn new(path: &str, requested: Option<Format>, default: Format) -> Self {
        Sink {
            path: path.to_string(),
            format: requested.unwrap_or(default),
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    fn writer(&self) -> io::Result<Box<dyn Write>> {
        if self.path == "-" {
            Ok(Box::new(BufWriter::new(io::stdout().lock())))
        } else {
            Ok(Box::new(BufWriter::new(File::create(&self.path)?)))
        }
    }

    pub fn json<T: Serialize>(&self, value: &T) -> Result<(), String> {
        let mut w = self.writer().map_err(|e| format!("{}: {e}", self.path))?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| e.to_string())?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| e.to_string())
    }

    pub fn csv<T: Serialize>(&self, rows: &[T]) -> Result<(), String> {
        let w = self.writer().map_err(|e| format!("{}: {e}", self.path))?;
        let mut out = csv::Writer::from_writer(w);
        for row in rows {
            out.serialize(row).map_err(|e| e.to_string())?;
        }
        out.flush().map_err(|e| e.to_string())
    }
}
