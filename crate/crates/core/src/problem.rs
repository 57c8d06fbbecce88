//! JSON problem files.
//!
//! ```json
//! {
//!   "sets": {
//!     "U": ["u0", "u1"],
//!     "X": ["x0", "x1"],
//!     "Y": ["y0", "y1"]
//!   },
//!   "coupling": [
//!     [0.0, 0.0],
//!     [1.0, 2.0]
//!   ],
//!   "rockafellian": [
//!     [5.0, 3.0],
//!     [0.0, "inf"]
//!   ],
//!   "base_point": "x0"
//! }
//! ```
//!
//! Tables are row-major: `coupling` has one row per `X` label, `rockafellian`
//! and `lagrangian` one row per `U` label. Entries are JSON numbers or the
//! strings `"inf"` / `"-inf"`. Instead of `coupling`, a file may give
//! `"embedding": {"X": [[..], ..], "Y": [[..], ..]}` with one coordinate
//! vector per label, which selects the bilinear pairing.
//!
//! [`ProblemFile::to_json`] writes the canonical layout shown above, so a file
//! written by it parses and re-serializes to the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::spaces::{Coupling, FiniteSet, Lagrangian, Rockafellian};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sets {
    #[serde(rename = "U")]
    pub decisions: Vec<String>,
    #[serde(rename = "X")]
    pub primal: Vec<String>,
    #[serde(rename = "Y")]
    pub dual: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Embedding {
    #[serde(rename = "X")]
    pub primal: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    pub dual: Vec<Vec<f64>>,
}

/// The on-disk schema, kept verbatim so it can be written back unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub sets: Sets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Vec<Vec<ExtReal>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Embedding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rockafellian: Option<Vec<Vec<ExtReal>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lagrangian: Option<Vec<Vec<ExtReal>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<String>,
}

/// A validated problem with typed tables.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub decisions: FiniteSet,
    pub coupling: Coupling,
    pub rockafellian: Option<Rockafellian>,
    pub lagrangian: Option<Lagrangian>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Builds a file with an explicit coupling table.
    pub fn from_tables(
        coupling: &Coupling,
        decisions: &FiniteSet,
        rockafellian: Option<&Rockafellian>,
        lagrangian: Option<&Lagrangian>,
        base_point: Option<&str>,
    ) -> Self {
        ProblemFile {
            sets: Sets {
                decisions: decisions.labels().to_vec(),
                primal: coupling.primal().labels().to_vec(),
                dual: coupling.dual().labels().to_vec(),
            },
            coupling: Some(coupling.to_rows()),
            embedding: None,
            rockafellian: rockafellian.map(|r| r.to_rows()),
            lagrangian: lagrangian.map(|l| l.to_rows()),
            base_point: base_point.map(str::to_string),
        }
    }

    /// Canonical text: two-space indentation, one table row per line, trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let mut fields: Vec<String> = Vec::new();

        let mut sets = String::from("  \"sets\": {\n");
        let set_lines = [
            ("U", &self.sets.decisions),
            ("X", &self.sets.primal),
            ("Y", &self.sets.dual),
        ]
        .iter()
        .map(|(k, v)| format!("    \"{k}\": {}", inline_list(v.iter())))
        .collect::<Vec<_>>();
        sets.push_str(&set_lines.join(",\n"));
        sets.push_str("\n  }");
        fields.push(sets);

        if let Some(c) = &self.coupling {
            fields.push(table_field("coupling", c, 1));
        }
        if let Some(emb) = &self.embedding {
            let mut s = String::from("  \"embedding\": {\n");
            s.push_str(&table_field("X", &emb.primal, 2));
            s.push_str(",\n");
            s.push_str(&table_field("Y", &emb.dual, 2));
            s.push_str("\n  }");
            fields.push(s);
        }
        if let Some(r) = &self.rockafellian {
            fields.push(table_field("rockafellian", r, 1));
        }
        if let Some(l) = &self.lagrangian {
            fields.push(table_field("lagrangian", l, 1));
        }
        if let Some(b) = &self.base_point {
            fields.push(format!("  \"base_point\": {}", json(b)));
        }
        out.push_str(&fields.join(",\n"));
        out.push_str("\n}\n");
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data always serializes")
}

fn inline_list<T: Serialize, I: Iterator<Item = T>>(items: I) -> String {
    let parts: Vec<String> = items.map(|v| json(&v)).collect();
    format!("[{}]", parts.join(", "))
}

fn table_field<T: Serialize>(name: &str, rows: &[Vec<T>], depth: usize) -> String {
    let pad = "  ".repeat(depth);
    let mut s = String::new();
    let _ = writeln!(s, "{pad}\"{name}\": [");
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("{pad}  {}", inline_list(r.iter())))
        .collect();
    s.push_str(&lines.join(",\n"));
    let _ = write!(s, "\n{pad}]");
    s
}

impl Problem {
    pub fn from_file(file: ProblemFile) -> Result<Self> {
        let decisions = FiniteSet::new(file.sets.decisions.iter().cloned())?;
        let primal = FiniteSet::new(file.sets.primal.iter().cloned())?;
        let dual = FiniteSet::new(file.sets.dual.iter().cloned())?;

        let coupling = match (&file.coupling, &file.embedding) {
            (Some(_), Some(_)) => {
                return Err(Error::Problem(
                    "\"coupling\" and \"embedding\" are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Problem(
                    "one of \"coupling\" or \"embedding\" is required".into(),
                ))
            }
            (Some(table), None) => Coupling::new(primal.clone(), dual.clone(), table.clone())?,
            (None, Some(emb)) => Coupling::bilinear_labeled(primal.clone(), dual.clone(), &emb.primal, &emb.dual)?,
        };
        let rockafellian = file
            .rockafellian
            .as_ref()
            .map(|t| Rockafellian::new(decisions.clone(), primal.clone(), t.clone()))
            .transpose()?;
        let lagrangian = file
            .lagrangian
            .as_ref()
            .map(|t| Lagrangian::new(decisions.clone(), dual.clone(), t.clone()))
            .transpose()?;
        if let Some(b) = &file.base_point {
            primal.require(b, "X")?;
        }
        Ok(Problem {
            file,
            decisions,
            coupling,
            rockafellian,
            lagrangian,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_file(ProblemFile::parse(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_file(ProblemFile::load(path)?)
    }

    /// Explicit base point, or the first `X` label.
    pub fn base_point(&self) -> &str {
        self.file
            .base_point
            .as_deref()
            .unwrap_or_else(|| self.coupling.primal().label(0))
    }

    /// A copy of this file (same sets, coupling or embedding, base point)
    /// carrying only the given tables.
    pub fn with_tables(&self, rockafellian: Option<&Rockafellian>, lagrangian: Option<&Lagrangian>) -> ProblemFile {
        ProblemFile {
            rockafellian: rockafellian.map(|r| r.to_rows()),
            lagrangian: lagrangian.map(|l| l.to_rows()),
            ..self.file.clone()
        }
    }
}
