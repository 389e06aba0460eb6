//! Square file reading and writing.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use trp_core::codec;
use trp_core::PartialLatinSquare;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareFormat {
    TripleList,
    Grid,
    Auto,
}

impl std::str::FromStr for SquareFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triples" => Ok(SquareFormat::TripleList),
            "grid" => Ok(SquareFormat::Grid),
            "auto" => Ok(SquareFormat::Auto),
            other => Err(format!("unknown format {other:?}, expected triples|grid|auto")),
        }
    }
}

/// Reads a square; `Auto` treats a two-token first line as a triple-list
/// header and anything else as a grid.
pub fn read_square(path: &Path, format: SquareFormat) -> Result<PartialLatinSquare> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let format = match format {
        SquareFormat::Auto => {
            let first = text.lines().next().unwrap_or("");
            if first.split_whitespace().count() == 2 {
                SquareFormat::TripleList
            } else {
                SquareFormat::Grid
            }
        }
        f => f,
    };
    let parsed = match format {
        SquareFormat::TripleList => codec::decode_triple_list(&text),
        SquareFormat::Grid => codec::decode_grid(&text),
        SquareFormat::Auto => unreachable!(),
    };
    match parsed {
        Ok(sq) => Ok(sq),
        Err(e) => bail!("{}: {e}", path.display()),
    }
}

pub fn write_square(path: &Path, square: &PartialLatinSquare, format: SquareFormat) -> Result<()> {
    let text = match format {
        SquareFormat::Grid => codec::encode_grid(square),
        _ => codec::encode_triple_list(square),
    };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
