//! Text codecs for partial Latin squares.
//!
//! Triple-list format: a header line `"n m"`, then `m` lines `"r c s"`
//! with global 1-based labels (`r in [1,n]`, `c in [n+1,2n]`,
//! `s in [2n+1,3n]`), LF line endings. Line order is the hyperedge order,
//! so the format round-trips ordered squares exactly.
//!
//! Grid format: `n` lines of `n` space-separated integers in `[0, n]`;
//! `0` marks an empty cell and `k > 0` the symbol with global label
//! `2n + k`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::model::{GridView, PartialLatinSquare, PlsBuildError, Triple};

/// A parse failure, pointing at the 1-based input line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for ParseError {}

pub fn encode_triple_list(pls: &PartialLatinSquare) -> String {
    let n = pls.n();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", n, pls.len());
    for t in pls.triples() {
        let _ = writeln!(
            out,
            "{} {} {}",
            t.row + 1,
            n as u32 + 1 + t.col,
            2 * n as u32 + 1 + t.sym
        );
    }
    out
}

pub fn decode_triple_list(input: &str) -> Result<PartialLatinSquare, ParseError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty input, expected header \"n m\""))?;
    let mut it = header.split_whitespace();
    let n: usize = parse_token(it.next(), 1, "order n")?;
    let m: usize = parse_token(it.next(), 1, "triple count m")?;
    if it.next().is_some() {
        return Err(ParseError::new(1, "header must be exactly \"n m\""));
    }
    if n == 0 {
        return Err(ParseError::new(1, "order n = 0 is not supported"));
    }
    let mut triples = Vec::with_capacity(m);
    let mut body_lines = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            return Err(ParseError::new(lineno, "blank line inside triple list"));
        }
        body_lines += 1;
        if body_lines > m {
            return Err(ParseError::new(
                lineno,
                format!("more than the declared {m} triples"),
            ));
        }
        let mut it = line.split_whitespace();
        let r: u32 = parse_token(it.next(), lineno, "row label")?;
        let c: u32 = parse_token(it.next(), lineno, "column label")?;
        let s: u32 = parse_token(it.next(), lineno, "symbol label")?;
        if it.next().is_some() {
            return Err(ParseError::new(lineno, "expected exactly \"r c s\""));
        }
        let t = Triple::from_globals(r, c, s, n)
            .map_err(|e| ParseError::new(lineno, format!("{e}")))?;
        triples.push((lineno, t));
    }
    if body_lines != m {
        return Err(ParseError::new(
            body_lines + 1,
            format!("declared {m} triples but found {body_lines}"),
        ));
    }
    let mut pls = PartialLatinSquare::empty(n)
        .map_err(|e| ParseError::new(1, format!("{e}")))?;
    for (lineno, t) in triples {
        pls.push(t)
            .map_err(|v| ParseError::new(lineno, format!("{v}")))?;
    }
    Ok(pls)
}

pub fn encode_grid(pls: &PartialLatinSquare) -> String {
    let grid = pls.to_grid();
    let n = grid.n();
    let mut out = String::new();
    for r in 0..n {
        for c in 0..n {
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", grid.cell(r, c));
        }
        out.push('\n');
    }
    out
}

pub fn decode_grid(input: &str) -> Result<PartialLatinSquare, ParseError> {
    let rows: Vec<&str> = input.lines().collect();
    let n = rows.len();
    if n == 0 {
        return Err(ParseError::new(1, "empty grid"));
    }
    let mut cells = Vec::with_capacity(n * n);
    for (idx, line) in rows.iter().enumerate() {
        let lineno = idx + 1;
        let mut count = 0usize;
        for tok in line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| {
                ParseError::new(lineno, format!("bad cell value {tok:?}"))
            })?;
            cells.push(v);
            count += 1;
        }
        if count != n {
            return Err(ParseError::new(
                lineno,
                format!("expected {n} cells per line (grid is {n} lines tall), found {count}"),
            ));
        }
    }
    let grid = GridView::new(n, cells).map_err(|msg| ParseError::new(1, msg))?;
    grid.to_square().map_err(|e| match e {
        PlsBuildError::Model(m) => ParseError::new(1, format!("{m}")),
        PlsBuildError::Violation(v) => ParseError::new(1, format!("{v}")),
    })
}

fn parse_token<T: core::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("bad {what} {tok:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cyclic_square;

    #[test]
    fn empty_square_header_only() {
        let pls = PartialLatinSquare::empty(3).unwrap();
        assert_eq!(encode_triple_list(&pls), "3 0\n");
        let back = decode_triple_list("3 0\n").unwrap();
        assert_eq!(back, pls);
    }

    #[test]
    fn single_triple_encoding() {
        let pls = PartialLatinSquare::from_triples(2, [Triple::new(0, 0, 0)]).unwrap();
        assert_eq!(encode_triple_list(&pls), "2 1\n1 3 5\n");
        assert_eq!(decode_triple_list("2 1\n1 3 5\n").unwrap(), pls);
    }

    #[test]
    fn triple_list_preserves_order() {
        let a = Triple::new(1, 1, 0);
        let b = Triple::new(0, 0, 0);
        let pls = PartialLatinSquare::from_triples(2, [a, b]).unwrap();
        let back = decode_triple_list(&encode_triple_list(&pls)).unwrap();
        assert_eq!(back.triples(), &[a, b]);
    }

    #[test]
    fn grid_example_from_spec() {
        // "0 2 / 2 1" at n=2 -> globals {(1,4,6),(2,3,6),(2,4,5)}
        let pls = decode_grid("0 2\n2 1\n").unwrap();
        let want = PartialLatinSquare::from_triples(
            2,
            [Triple::new(0, 1, 1), Triple::new(1, 0, 1), Triple::new(1, 1, 0)],
        )
        .unwrap();
        assert!(pls.same_triples(&want));
    }

    #[test]
    fn grid_round_trip_cyclic() {
        let sq = cyclic_square(4).unwrap();
        let back = decode_grid(&encode_grid(&sq)).unwrap();
        assert!(back.same_triples(&sq));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(decode_triple_list("").unwrap_err().line, 1);
        assert_eq!(decode_triple_list("2\n").unwrap_err().line, 1);
        assert_eq!(decode_triple_list("2 2\n1 3 5\n").unwrap_err().line, 2);
        assert_eq!(decode_triple_list("2 1\n1 3 9\n").unwrap_err().line, 2);
        assert_eq!(decode_triple_list("2 1\n1 3\n").unwrap_err().line, 2);
        // duplicated pair reported at the second use
        let err = decode_triple_list("2 2\n1 3 5\n1 3 6\n").unwrap_err();
        assert_eq!(err.line, 3);
        // ragged grid
        assert_eq!(decode_grid("0 2\n2\n").unwrap_err().line, 2);
    }
}
