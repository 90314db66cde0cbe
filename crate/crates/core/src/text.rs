//! Line reader shared by the `QSTAB1` text formats. Blank lines and lines
//! starting with `#` are skipped; errors carry 1-based line numbers.

use crate::error::{Error, Result};

pub const MAGIC: &str = "QSTAB1";

pub struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    pub fn next_line(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(Error::Parse { line: self.last + 1, msg: "unexpected end of input".into() }),
        }
    }

    pub fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, l)| *l)
    }

    pub fn is_done(&mut self) -> bool {
        self.inner.peek().is_none()
    }

    /// Consumes `QSTAB1 <kind>`.
    pub fn header(&mut self, kind: &str) -> Result<()> {
        let (n, l) = self.next_line()?;
        let tok: Vec<&str> = l.split_whitespace().collect();
        if tok.len() != 2 || tok[0] != MAGIC || tok[1] != kind {
            return Err(Error::Parse { line: n, msg: format!("expected `{MAGIC} {kind}`") });
        }
        Ok(())
    }

    /// Reads a line of exactly `k` unsigned integers.
    pub fn ints(&mut self, k: usize) -> Result<(usize, Vec<u64>)> {
        let (n, l) = self.next_line()?;
        let v = parse_ints(l).map_err(|msg| Error::Parse { line: n, msg })?;
        if v.len() != k {
            return Err(Error::Parse { line: n, msg: format!("expected {k} integers") });
        }
        Ok((n, v))
    }

    pub fn done(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((n, _)) => Err(Error::Parse { line: n, msg: "trailing content".into() }),
        }
    }
}

pub fn parse_ints(l: &str) -> std::result::Result<Vec<u64>, String> {
    l.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| format!("bad integer `{t}`")))
        .collect()
}

/// Attaches a line number to a parse error raised by a single-line parser.
pub fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

/// Parses a 1-based comma-separated qudit list such as `1,3,4`.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let v: usize = t.trim().parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad qudit index `{t}`"),
            })?;
            if v == 0 {
                return Err(Error::Parse { line: 0, msg: "qudit labels are 1-based".into() });
            }
            Ok(v - 1)
        })
        .collect()
}

pub fn format_index_list(v: &[usize]) -> String {
    v.iter().map(|q| (q + 1).to_string()).collect::<Vec<_>>().join(",")
}
