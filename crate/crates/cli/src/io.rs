//! CSV-style element files and output plumbing.
//!
//! The data format is one ring element per line in its text form; lines
//! starting with `#` are comments. Ring detection is per file: all-integer
//! files stay integer, a `/` anywhere lifts to rationals, and any variable
//! lifts everything to polynomials.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use somos_core::exact::{Homogeneous, RingElem};

pub fn read_elements(path: &Path) -> Result<Vec<RingElem>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let elem = RingElem::parse(line)
            .with_context(|| format!("{}:{}: bad element `{line}`", path.display(), lineno + 1))?;
        out.push(elem);
    }
    Ok(out)
}

pub fn read_homogeneous(path: &Path) -> Result<Homogeneous> {
    let elems = read_elements(path)?;
    if elems.is_empty() {
        anyhow::bail!("{}: no elements", path.display());
    }
    Ok(RingElem::promote_all(&elems))
}

/// Where a command's primary output goes.
pub struct Sink {
    target: Option<PathBuf>,
}

impl Sink {
    pub fn new(output: Option<PathBuf>) -> Self {
        Sink { target: output }
    }

    pub fn write_all(&self, content: &str) -> Result<()> {
        match &self.target {
            None => {
                print!("{content}");
                std::io::stdout().flush()?;
                Ok(())
            }
            Some(path) => {
                fs::write(path, content)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                Ok(())
            }
        }
    }
}

/// Values as an element-per-line document, with an optional `#` header line
/// (the only place a timestamp ever appears).
pub fn csv_document(header: Option<String>, values: &[String]) -> String {
    let mut doc = String::new();
    if let Some(h) = header {
        doc.push_str(&format!("# {h}\n"));
    }
    for v in values {
        doc.push_str(v);
        doc.push('\n');
    }
    doc
}

pub fn header_line(no_header: bool, what: &str) -> Option<String> {
    if no_header {
        None
    } else {
        Some(format!("{what} generated={}", chrono::Utc::now().to_rfc3339()))
    }
}
