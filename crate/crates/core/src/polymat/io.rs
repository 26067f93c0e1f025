//! Matrix text format: a `p=<int> D=<int> rows=<int> cols=<int>` header, then one line
//! per row with entries separated by `;`. Blank lines and lines starting with `#` are skipped.

use std::fmt;
use std::str::FromStr;

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::ring::Ring;

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={} D={} rows={} cols={}", self.ring.p(), self.ring.nvars(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "{}", row.join("; "))?;
        }
        Ok(())
    }
}

fn header_field(tokens: &[&str], key: &str) -> Result<usize> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .ok_or_else(|| Error::Malformed(format!("matrix header lacks '{key}='")))?
        .parse()
        .map_err(|_| Error::Malformed(format!("matrix header field '{key}' is not an integer")))
}

impl FromStr for PolyMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<PolyMatrix> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Malformed("empty matrix file".into()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let p = header_field(&tokens, "p")? as u32;
        let d = header_field(&tokens, "D")?;
        let rows = header_field(&tokens, "rows")?;
        let cols = header_field(&tokens, "cols")?;
        let ring = Ring::new(p, d)?;
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for line in lines {
            seen += 1;
            if seen > rows {
                return Err(Error::Malformed(format!("more than {rows} rows")));
            }
            let parts: Vec<&str> = line.split(';').collect();
            if parts.len() != cols {
                return Err(Error::Malformed(format!("row {seen} has {} entries, expected {cols}", parts.len())));
            }
            for part in parts {
                entries.push(ring.parse(part)?);
            }
        }
        if seen != rows && cols > 0 {
            return Err(Error::Malformed(format!("expected {rows} rows, found {seen}")));
        }
        if cols == 0 {
            entries.clear();
        }
        PolyMatrix::new(ring, rows, cols, entries)
    }
}
