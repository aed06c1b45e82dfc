// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

//! Comma-separated numeric tables.
//!
//! Layout: zero or more comment lines starting with `#`, one header line of
//! column names, then one line per row. Numbers are written in shortest
//! round-trip exponent form, so `parse(emit(t)) == t` bit for bit.

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            comments: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    /// Adds a comment; embedded newlines become separate comment lines.
    pub fn comment(&mut self, text: impl AsRef<str>) {
        self.comments.extend(text.as_ref().lines().map(str::to_owned));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            if c.is_empty() {
                out.push_str("#\n");
            } else {
                out.push_str("# ");
                out.push_str(c);
                out.push('\n');
            }
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Table> {
        let mut table = Table::default();
        let mut header_seen = false;
        for (k, line) in text.lines().enumerate() {
            let lineno = k + 1;
            if !header_seen {
                if let Some(rest) = line.strip_prefix('#') {
                    table.comments.push(rest.strip_prefix(' ').unwrap_or(rest).to_owned());
                    continue;
                }
                table.columns = line.split(',').map(str::to_owned).collect();
                header_seen = true;
                continue;
            }
            let row = line
                .split(',')
                .map(|cell| {
                    cell.parse::<f64>().map_err(|e| CliError::Table {
                        line: lineno,
                        message: format!("'{cell}': {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != table.columns.len() {
                return Err(CliError::Table {
                    line: lineno,
                    message: format!("{} cells, header has {}", row.len(), table.columns.len()),
                });
            }
            table.rows.push(row);
        }
        if !header_seen {
            return Err(CliError::Table {
                line: text.lines().count() + 1,
                message: "missing header".into(),
            });
        }
        Ok(table)
    }
}
