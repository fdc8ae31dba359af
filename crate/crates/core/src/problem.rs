//! Problem files: `# key: value` headers followed by a formula.
//!
//! ```text
//! # nf: cartesian
//! # assume: Re(g) > 0
//! # assume: Im(g) == 0
//! forall s . Re(s) == 0 -> ...
//! ```

use crate::backend::Backend;
use crate::error::{Error, Result};
use crate::formula::{Atom, CFormula};
use crate::parse::{parse_atom, parse_formula};
use crate::reinterpret::NfStyle;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemFile {
    pub formula: String,
    pub assume: Vec<String>,
    pub nf: Option<NfStyle>,
    pub backend: Option<Backend>,
    pub lenient: Option<bool>,
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(Error::ProblemFile(format!("expected a boolean, found `{s}`"))),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = ProblemFile::default();
        let mut body_start = text.len();
        let mut offset = 0;
        for (lineno, line) in text.split_inclusive('\n').enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                offset += line.len();
                continue;
            }
            let Some(header) = trimmed.strip_prefix('#') else {
                body_start = offset;
                break;
            };
            let (key, value) = header.split_once(':').ok_or_else(|| {
                Error::ProblemFile(format!("line {}: expected `# key: value`", lineno + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "nf" => p.nf = Some(value.parse()?),
                "assume" => p.assume.push(value.to_string()),
                "backend" => p.backend = Some(value.parse()?),
                "lenient" => p.lenient = Some(parse_bool(value)?),
                other => {
                    return Err(Error::ProblemFile(format!(
                        "line {}: unknown header `{other}`",
                        lineno + 1
                    )))
                }
            }
            offset += line.len();
        }
        p.formula = text[body_start..].trim().to_string();
        Ok(p)
    }

    pub fn formula(&self) -> Result<CFormula> {
        parse_formula(&self.formula)
    }

    pub fn assumptions(&self) -> Result<Vec<Atom>> {
        self.assume.iter().map(|a| parse_atom(a)).collect()
    }
}
