//! External parameter tables keyed by wall type.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Signed;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{parse_q, Q};

pub const TABLE_SCHEMA_VERSION: u32 = 1;

/// `(group type of the quotient on the G_θ side, Levi type, cuspidal label)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableKey {
    pub group_type: String,
    pub levi_type: String,
    pub cuspidal: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    /// `q_s = q^exponent`.
    pub exponent: Q,
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterTable {
    pub entries: BTreeMap<TableKey, TableEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    schema_version: u32,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    group_type: String,
    levi_type: String,
    cuspidal: String,
    exponent: String,
    provenance: String,
}

impl ParameterTable {
    pub fn get(&self, key: &TableKey) -> Option<&TableEntry> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The shipped table: principal-series rows only.
pub fn default_table() -> ParameterTable {
    parse_parameter_table(include_str!("../../fixtures/parameter_table.json")).expect("shipped table parses")
}

pub fn load_parameter_table(path: &Path) -> Result<ParameterTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_parameter_table(&text)
}

/// An empty (or all-whitespace) document is the empty table.
pub fn parse_parameter_table(text: &str) -> Result<ParameterTable> {
    if text.trim().is_empty() {
        return Ok(ParameterTable::default());
    }
    let raw: RawTable = serde_json::from_str(text)
        .map_err(|e| Error::Table(format!("parse error at line {}, column {}: {e}", e.line(), e.column())))?;
    if raw.schema_version != TABLE_SCHEMA_VERSION {
        return Err(Error::Table(format!("schema_version {} is not supported", raw.schema_version)));
    }
    let mut entries = BTreeMap::new();
    for e in raw.entries {
        let exponent =
            parse_q(&e.exponent).ok_or_else(|| Error::Table(format!("exponent {:?} is not rational", e.exponent)))?;
        if !exponent.is_positive() {
            return Err(Error::Table(format!("exponent {} must be positive", e.exponent)));
        }
        let key = TableKey { group_type: e.group_type, levi_type: e.levi_type, cuspidal: e.cuspidal };
        if entries.contains_key(&key) {
            return Err(Error::Table(format!(
                "duplicate key ({}, {}, {})",
                key.group_type, key.levi_type, key.cuspidal
            )));
        }
        entries.insert(key, TableEntry { exponent, provenance: e.provenance });
    }
    Ok(ParameterTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const ROWS: &str = r#"{"schema_version": 1, "entries": [
        {"group_type": "A1", "levi_type": "T", "cuspidal": "trivial", "exponent": "1", "provenance": "oracle"}
    ]}"#;

    #[test]
    fn loads_rows() {
        let t = parse_parameter_table(ROWS).unwrap();
        let key = TableKey { group_type: "A1".into(), levi_type: "T".into(), cuspidal: "trivial".into() };
        assert_eq!(t.get(&key).unwrap().exponent, q(1));
    }

    #[test]
    fn empty_and_invalid() {
        assert!(parse_parameter_table("  \n").unwrap().is_empty());
        let dup = ROWS.replace("]}", ", {\"group_type\": \"A1\", \"levi_type\": \"T\", \"cuspidal\": \"trivial\", \"exponent\": \"2\", \"provenance\": \"x\"}]}");
        assert!(parse_parameter_table(&dup).unwrap_err().to_string().contains("duplicate"));
        let neg = ROWS.replace("\"exponent\": \"1\"", "\"exponent\": \"-1\"");
        assert!(parse_parameter_table(&neg).is_err());
    }
}
