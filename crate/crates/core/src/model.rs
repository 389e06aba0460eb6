//! Partial Latin squares on the vertex set `R ∪ C ∪ S`.
//!
//! Internally every vertex is a `(part, local index)` pair with local
//! indices in `[0, n)`; the global 1-based labels (`rows 1..=n`,
//! `columns n+1..=2n`, `symbols 2n+1..=3n`) appear only at the I/O
//! boundary. A [`PartialLatinSquare`] always remembers its insertion
//! order, so it doubles as the ordered variant; use
//! [`PartialLatinSquare::same_triples`] for order-insensitive comparison.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitMatrix;

/// The three vertex classes of `K_{n,n,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Row,
    Column,
    Symbol,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::Row, Part::Column, Part::Symbol];

    /// The two parts other than `self`, in `Row < Column < Symbol` order.
    pub fn others(self) -> [Part; 2] {
        match self {
            Part::Row => [Part::Column, Part::Symbol],
            Part::Column => [Part::Row, Part::Symbol],
            Part::Symbol => [Part::Row, Part::Column],
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Row => write!(f, "row"),
            Part::Column => write!(f, "column"),
            Part::Symbol => write!(f, "symbol"),
        }
    }
}

/// A vertex as `(part, local index)`, `local < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub part: Part,
    pub local: u32,
}

impl Vertex {
    pub fn new(part: Part, local: u32) -> Self {
        Vertex { part, local }
    }

    /// Global 1-based label in `[1, 3n]`.
    pub fn global(self, n: usize) -> u32 {
        let n = n as u32;
        match self.part {
            Part::Row => 1 + self.local,
            Part::Column => n + 1 + self.local,
            Part::Symbol => 2 * n + 1 + self.local,
        }
    }

    /// Inverse of [`Vertex::global`]; errors outside `[1, 3n]`.
    pub fn from_global(g: u32, n: usize) -> Result<Self, ModelError> {
        let n32 = n as u32;
        if g == 0 || g > 3 * n32 {
            return Err(ModelError::GlobalLabelOutOfRange { label: g, n });
        }
        let v = if g <= n32 {
            Vertex::new(Part::Row, g - 1)
        } else if g <= 2 * n32 {
            Vertex::new(Part::Column, g - n32 - 1)
        } else {
            Vertex::new(Part::Symbol, g - 2 * n32 - 1)
        };
        Ok(v)
    }
}

/// One hyperedge: a row, column and symbol, stored as local indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub row: u32,
    pub col: u32,
    pub sym: u32,
}

impl Triple {
    pub fn new(row: u32, col: u32, sym: u32) -> Self {
        Triple { row, col, sym }
    }

    pub fn vertices(self) -> [Vertex; 3] {
        [
            Vertex::new(Part::Row, self.row),
            Vertex::new(Part::Column, self.col),
            Vertex::new(Part::Symbol, self.sym),
        ]
    }

    /// From global labels; enforces one vertex per part.
    pub fn from_globals(r: u32, c: u32, s: u32, n: usize) -> Result<Self, ModelError> {
        let vr = Vertex::from_global(r, n)?;
        let vc = Vertex::from_global(c, n)?;
        let vs = Vertex::from_global(s, n)?;
        if vr.part != Part::Row || vc.part != Part::Column || vs.part != Part::Symbol {
            return Err(ModelError::WrongPart {
                labels: (r, c, s),
                n,
            });
        }
        Ok(Triple::new(vr.local, vc.local, vs.local))
    }
}

/// Construction and label-conversion errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    ZeroOrder,
    GlobalLabelOutOfRange { label: u32, n: usize },
    WrongPart { labels: (u32, u32, u32), n: usize },
    PrefixOutOfRange { want: usize, len: usize },
    NotFull { len: usize, expected: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::ZeroOrder => write!(f, "order n = 0 is not supported"),
            ModelError::GlobalLabelOutOfRange { label, n } => {
                write!(f, "vertex label {label} outside [1, {}]", 3 * n)
            }
            ModelError::WrongPart { labels, n } => write!(
                f,
                "triple ({}, {}, {}) must name a row in [1,{}], a column in [{},{}] and a symbol in [{},{}]",
                labels.0, labels.1, labels.2, n, n + 1, 2 * n, 2 * n + 1, 3 * n
            ),
            ModelError::PrefixOutOfRange { want, len } => {
                write!(f, "prefix length {want} exceeds square size {len}")
            }
            ModelError::NotFull { len, expected } => {
                write!(f, "expected a full square with {expected} triples, found {len}")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// A violation of the partial-Latin-square property, naming the first
/// offending pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A local index `>= n` inside the triple at `index`.
    OutOfRange { index: usize, triple: Triple },
    /// Two triples reuse the same vertex pair; labels are global.
    DuplicatedPair {
        pair: (u32, u32),
        first: usize,
        second: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { index, triple } => write!(
                f,
                "triple #{index} ({}, {}, {}) has a local index out of range",
                triple.row, triple.col, triple.sym
            ),
            Violation::DuplicatedPair { pair, first, second } => write!(
                f,
                "pair ({}, {}) used by both triple #{first} and triple #{second}",
                pair.0, pair.1
            ),
        }
    }
}

impl core::error::Error for Violation {}

/// Checks that all indices are in range and that the (row,column),
/// (row,symbol) and (column,symbol) projections are each injective.
pub fn validate(n: usize, triples: &[Triple]) -> Result<(), Violation> {
    let mut rc = BitMatrix::zeros(n, n);
    let mut rs = BitMatrix::zeros(n, n);
    let mut cs = BitMatrix::zeros(n, n);
    // first owner of each pair, for the report
    let mut rc_owner = alloc::vec![usize::MAX; n * n];
    let mut rs_owner = alloc::vec![usize::MAX; n * n];
    let mut cs_owner = alloc::vec![usize::MAX; n * n];
    for (i, t) in triples.iter().enumerate() {
        if t.row as usize >= n || t.col as usize >= n || t.sym as usize >= n {
            return Err(Violation::OutOfRange { index: i, triple: *t });
        }
        let (r, c, s) = (t.row as usize, t.col as usize, t.sym as usize);
        let dup = |a: Vertex, b: Vertex, first: usize| Violation::DuplicatedPair {
            pair: (a.global(n), b.global(n)),
            first,
            second: i,
        };
        if rc.get(r, c) {
            return Err(dup(
                Vertex::new(Part::Row, t.row),
                Vertex::new(Part::Column, t.col),
                rc_owner[r * n + c],
            ));
        }
        if rs.get(r, s) {
            return Err(dup(
                Vertex::new(Part::Row, t.row),
                Vertex::new(Part::Symbol, t.sym),
                rs_owner[r * n + s],
            ));
        }
        if cs.get(c, s) {
            return Err(dup(
                Vertex::new(Part::Column, t.col),
                Vertex::new(Part::Symbol, t.sym),
                cs_owner[c * n + s],
            ));
        }
        rc.set(r, c);
        rs.set(r, s);
        cs.set(c, s);
        rc_owner[r * n + c] = i;
        rs_owner[r * n + s] = i;
        cs_owner[c * n + s] = i;
    }
    Ok(())
}

/// An ordered partial Latin square of order `n`.
///
/// Invariant: no vertex pair appears in two triples (checked on every
/// construction path). Immutable once built apart from [`push`], which
/// re-checks the invariant; values are therefore freely shareable across
/// threads.
///
/// [`push`]: PartialLatinSquare::push
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialLatinSquare {
    n: usize,
    triples: Vec<Triple>,
    rc: BitMatrix,
    rs: BitMatrix,
    cs: BitMatrix,
}

impl PartialLatinSquare {
    pub fn empty(n: usize) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::ZeroOrder);
        }
        Ok(PartialLatinSquare {
            n,
            triples: Vec::new(),
            rc: BitMatrix::zeros(n, n),
            rs: BitMatrix::zeros(n, n),
            cs: BitMatrix::zeros(n, n),
        })
    }

    pub fn from_triples(
        n: usize,
        triples: impl IntoIterator<Item = Triple>,
    ) -> Result<Self, PlsBuildError> {
        let mut pls = Self::empty(n).map_err(PlsBuildError::Model)?;
        for t in triples {
            pls.push(t).map_err(PlsBuildError::Violation)?;
        }
        Ok(pls)
    }

    /// Appends a triple, rejecting range or pair violations.
    pub fn push(&mut self, t: Triple) -> Result<(), Violation> {
        let n = self.n;
        if t.row as usize >= n || t.col as usize >= n || t.sym as usize >= n {
            return Err(Violation::OutOfRange {
                index: self.triples.len(),
                triple: t,
            });
        }
        let (r, c, s) = (t.row as usize, t.col as usize, t.sym as usize);
        let idx = self.triples.len();
        let check = |used: bool, a: Vertex, b: Vertex| {
            if used {
                Err(Violation::DuplicatedPair {
                    pair: (a.global(n), b.global(n)),
                    // owner index not tracked on the fast path; `validate`
                    // reports it when callers need the full story
                    first: usize::MAX,
                    second: idx,
                })
            } else {
                Ok(())
            }
        };
        check(
            self.rc.get(r, c),
            Vertex::new(Part::Row, t.row),
            Vertex::new(Part::Column, t.col),
        )?;
        check(
            self.rs.get(r, s),
            Vertex::new(Part::Row, t.row),
            Vertex::new(Part::Symbol, t.sym),
        )?;
        check(
            self.cs.get(c, s),
            Vertex::new(Part::Column, t.col),
            Vertex::new(Part::Symbol, t.sym),
        )?;
        self.rc.set(r, c);
        self.rs.set(r, s);
        self.cs.set(c, s);
        self.triples.push(t);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// `N = n²`, the triple count of a full square.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.triples.len() == self.capacity()
    }

    /// Triples in insertion (hyperedge) order.
    #[inline]
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn uses_rc(&self, r: u32, c: u32) -> bool {
        self.rc.get(r as usize, c as usize)
    }

    pub fn uses_rs(&self, r: u32, s: u32) -> bool {
        self.rs.get(r as usize, s as usize)
    }

    pub fn uses_cs(&self, c: u32, s: u32) -> bool {
        self.cs.get(c as usize, s as usize)
    }

    /// The first `i` triples as an ordered square.
    pub fn prefix(&self, i: usize) -> Result<Self, ModelError> {
        if i > self.triples.len() {
            return Err(ModelError::PrefixOutOfRange {
                want: i,
                len: self.triples.len(),
            });
        }
        // prefixes of a valid square are valid; rebuild masks directly
        let mut pls = Self::empty(self.n)?;
        for t in &self.triples[..i] {
            pls.rc.set(t.row as usize, t.col as usize);
            pls.rs.set(t.row as usize, t.sym as usize);
            pls.cs.set(t.col as usize, t.sym as usize);
        }
        pls.triples.extend_from_slice(&self.triples[..i]);
        Ok(pls)
    }

    /// Order-insensitive equality of the triple sets.
    pub fn same_triples(&self, other: &Self) -> bool {
        if self.n != other.n || self.triples.len() != other.triples.len() {
            return false;
        }
        let mut a = self.triples.clone();
        let mut b = other.triples.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// True if every triple of `self` occurs in `other` (as sets).
    pub fn subset_of(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        let grid = other.to_grid();
        self.triples
            .iter()
            .all(|t| grid.cell(t.row as usize, t.col as usize) == t.sym + 1)
    }

    pub fn to_grid(&self) -> GridView {
        let n = self.n;
        let mut cells = alloc::vec![0u32; n * n];
        for t in &self.triples {
            cells[t.row as usize * n + t.col as usize] = t.sym + 1;
        }
        GridView { n, cells }
    }
}

/// Errors from [`PartialLatinSquare::from_triples`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlsBuildError {
    Model(ModelError),
    Violation(Violation),
}

impl fmt::Display for PlsBuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlsBuildError::Model(e) => write!(f, "{e}"),
            PlsBuildError::Violation(v) => write!(f, "{v}"),
        }
    }
}

impl core::error::Error for PlsBuildError {}

/// The `n x n` array form: entry 0 is an empty cell, entry `k in [1, n]`
/// means symbol with local index `k - 1` (global label `2n + k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridView {
    n: usize,
    cells: Vec<u32>,
}

impl GridView {
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self, String> {
        if n == 0 {
            return Err(String::from("order n = 0 is not supported"));
        }
        if cells.len() != n * n {
            return Err(alloc::format!(
                "grid must have {} cells, found {}",
                n * n,
                cells.len()
            ));
        }
        if let Some((i, &v)) = cells.iter().enumerate().find(|(_, &v)| v > n as u32) {
            return Err(alloc::format!(
                "cell ({}, {}) holds {} which exceeds n = {}",
                i / n + 1,
                i % n + 1,
                v,
                n
            ));
        }
        Ok(GridView { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.n + c]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    /// Converts to a square, scanning cells row-major. Fails if the grid
    /// violates the Latin property.
    pub fn to_square(&self) -> Result<PartialLatinSquare, PlsBuildError> {
        let n = self.n;
        let triples = (0..n * n).filter_map(|i| {
            let v = self.cells[i];
            (v > 0).then(|| Triple::new((i / n) as u32, (i % n) as u32, v - 1))
        });
        PartialLatinSquare::from_triples(n, triples)
    }
}

/// The addition-table Latin square: cell `(i, j)` holds symbol
/// `(i + j) mod n`. A deterministic full-square fixture.
pub fn cyclic_square(n: usize) -> Result<PartialLatinSquare, ModelError> {
    let mut pls = PartialLatinSquare::empty(n)?;
    for i in 0..n as u32 {
        for j in 0..n as u32 {
            let t = Triple::new(i, j, (i + j) % n as u32);
            pls.push(t).expect("cyclic construction never collides");
        }
    }
    Ok(pls)
}
