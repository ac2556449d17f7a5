use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::Value;

use super::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Format {
    Human,
    Json,
    Csv,
}

impl Format {
    pub(crate) fn select(json: bool, csv: bool) -> Result<Self, Failure> {
        match (json, csv) {
            (true, true) => Err(Failure::Usage(
                "--json and --csv are mutually exclusive".into(),
            )),
            (true, false) => Ok(Format::Json),
            (false, true) => Ok(Format::Csv),
            (false, false) => Ok(Format::Human),
        }
    }

    pub(crate) fn require(self, allowed: &[Format], command: &str) -> Result<(), Failure> {
        if allowed.contains(&self) {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "{command} does not support {} output",
                self.flag()
            )))
        }
    }

    fn flag(self) -> &'static str {
        match self {
            Format::Human => "plain",
            Format::Json => "--json",
            Format::Csv => "--csv",
        }
    }
}

/// Round-trip float formatting with 17 significant digits.
pub(crate) fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Destination for command output: stdout or a file given by `--out`.
pub(crate) struct Sink<'a> {
    target: Target<'a>,
}

enum Target<'a> {
    Stdout(&'a mut dyn Write),
    File(BufWriter<File>),
}

impl<'a> Sink<'a> {
    pub(crate) fn new(path: Option<&Path>, stdout: &'a mut dyn Write) -> io::Result<Self> {
        let target = match path {
            Some(p) => Target::File(BufWriter::new(File::create(p)?)),
            None => Target::Stdout(stdout),
        };
        Ok(Sink { target })
    }

    fn writer(&mut self) -> &mut dyn Write {
        match &mut self.target {
            Target::Stdout(w) => *w,
            Target::File(f) => f,
        }
    }

    pub(crate) fn line(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        let w = self.writer();
        w.write_all(s.as_ref().as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub(crate) fn text(&mut self, s: &str) -> Result<(), Failure> {
        self.writer().write_all(s.as_bytes())?;
        Ok(())
    }

    pub(crate) fn json(&mut self, v: &Value) -> Result<(), Failure> {
        let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Runtime(e.to_string()))?;
        self.line(s)
    }

    pub(crate) fn flush(&mut self) -> io::Result<()> {
        self.writer().flush()
    }

    pub(crate) fn finish(mut self) -> io::Result<()> {
        self.flush()
    }
}
