//! Latin squares, Latin rectangles and orthogonal families.
//!
//! Symbols are 1-based integers `1..=K`, matching the usual presentation of
//! channel/time-slot assignment grids. A rectangle is always the top rows of
//! some square, so every row of a rectangle is a full permutation of the
//! symbol set and every column holds distinct symbols.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A `K x K` grid in which every row and every column contains each symbol
/// of `{1..K}` exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<usize>, // row-major
}

/// The first `rows` rows of a Latin square of order `parent_order`.
///
/// Each row is a permutation of `{1..parent_order}`; each column holds
/// `rows` distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinRectangle {
    rows: usize,
    cols: usize,
    parent_order: usize,
    cells: Vec<usize>,
}

/// An ordered set of pairwise-orthogonal Latin squares of one order.
#[derive(Debug, Clone)]
pub struct OrthogonalFamily {
    order: usize,
    members: Vec<LatinSquare>,
}

/// The cells of a rectangle holding one symbol, ordered by row.
///
/// Read as a transmission schedule: row = channel, column = time-slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPattern {
    pub symbol: usize,
    pub positions: Vec<(usize, usize)>, // (row, col)
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `>= n` (treats `n < 2` as 2).
pub fn next_prime(n: usize) -> usize {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Cyclic construction: `cell(i, j) = ((a*i + j) mod K) + 1` for 0-based
/// `i, j`. Defined for prime `K` only; the multipliers `a = 1..K-1` yield a
/// complete orthogonal family.
pub fn cyclic_square(order: usize, multiplier: usize) -> Result<LatinSquare> {
    if !is_prime(order) {
        return Err(Error::ConstructionUnsupported(format!(
            "cyclic square requires prime order, got {order}"
        )));
    }
    if multiplier == 0 || multiplier >= order {
        return Err(Error::InvalidArgument(format!(
            "multiplier must be in 1..={}, got {multiplier}",
            order - 1
        )));
    }
    let cells = (0..order)
        .flat_map(|i| (0..order).map(move |j| (multiplier * i + j) % order + 1))
        .collect();
    Ok(LatinSquare { order, cells })
}

/// The complete orthogonal family of a prime order: the `K-1` cyclic squares
/// with multipliers `1..K-1`.
pub fn mols_family(order: usize) -> Result<OrthogonalFamily> {
    if !is_prime(order) {
        return Err(Error::ConstructionUnsupported(format!(
            "orthogonal family construction requires prime order, got {order}"
        )));
    }
    let members = (1..order)
        .map(|a| cyclic_square(order, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrthogonalFamily { order, members })
}

/// True iff the `K^2` ordered pairs `(A(i,j), B(i,j))` are all distinct.
pub fn is_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::InvalidArgument(format!(
            "order mismatch: {} vs {}",
            a.order, b.order
        )));
    }
    let k = a.order;
    let mut seen = vec![false; k * k];
    for idx in 0..k * k {
        let pair = (a.cells[idx] - 1) * k + (b.cells[idx] - 1);
        if seen[pair] {
            return Ok(false);
        }
        seen[pair] = true;
    }
    Ok(true)
}

impl LatinSquare {
    /// Validates the row/column invariants on raw row-major cells.
    pub fn from_cells(order: usize, cells: Vec<usize>) -> Result<Self> {
        if order == 0 || cells.len() != order * order {
            return Err(Error::InvalidArgument(format!(
                "expected {}x{} cells",
                order, order
            )));
        }
        let mut seen = vec![false; order];
        for r in 0..order {
            seen.fill(false);
            for c in 0..order {
                let v = cells[r * order + c];
                if v == 0 || v > order || seen[v - 1] {
                    return Err(Error::InvalidArgument(format!(
                        "row {r} is not a permutation of 1..={order}"
                    )));
                }
                seen[v - 1] = true;
            }
        }
        for c in 0..order {
            seen.fill(false);
            for r in 0..order {
                let v = cells[r * order + c];
                if seen[v - 1] {
                    return Err(Error::InvalidArgument(format!(
                        "column {c} repeats symbol {v}"
                    )));
                }
                seen[v - 1] = true;
            }
        }
        Ok(Self { order, cells })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.order + col]
    }

    /// First `min(channels, order)` rows as a rectangle.
    pub fn truncate(&self, channels: usize) -> LatinRectangle {
        let rows = channels.min(self.order);
        LatinRectangle {
            rows,
            cols: self.order,
            parent_order: self.order,
            cells: self.cells[..rows * self.order].to_vec(),
        }
    }
}

impl LatinRectangle {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.cols + col]
    }

    /// The cells holding `symbol`, one per row, ordered by row.
    pub fn symbol_pattern(&self, symbol: usize) -> Result<SymbolPattern> {
        if symbol == 0 || symbol > self.parent_order {
            return Err(Error::InvalidArgument(format!(
                "symbol must be in 1..={}, got {symbol}",
                self.parent_order
            )));
        }
        let positions = (0..self.rows)
            .map(|r| {
                let c = (0..self.cols)
                    .find(|&c| self.get(r, c) == symbol)
                    .expect("every rectangle row is a full permutation");
                (r, c)
            })
            .collect();
        Ok(SymbolPattern { symbol, positions })
    }

    /// Column of `symbol` within one row.
    pub fn column_of(&self, row: usize, symbol: usize) -> usize {
        (0..self.cols)
            .find(|&c| self.get(row, c) == symbol)
            .expect("every rectangle row is a full permutation")
    }

    /// Textual dump: `latin <rows> <cols> <parent_order>` header followed by
    /// one space-separated row per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "latin {} {} {}", self.rows, self.cols, self.parent_order);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parses the dump format and re-validates the rectangle invariants.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty dump".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "latin" {
            return Err(Error::Parse(format!("bad header: {header:?}")));
        }
        let parse_num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number {s:?}")))
        };
        let rows = parse_num(fields[1])?;
        let cols = parse_num(fields[2])?;
        let parent_order = parse_num(fields[3])?;
        if cols != parent_order || rows == 0 || rows > parent_order {
            return Err(Error::Parse(format!(
                "inconsistent header dims {rows}x{cols} of {parent_order}"
            )));
        }
        let mut cells = Vec::with_capacity(rows * cols);
        for (r, line) in lines.take(rows).enumerate() {
            for s in line.split_whitespace() {
                cells.push(parse_num(s)?);
            }
            if cells.len() != (r + 1) * cols {
                return Err(Error::Parse(format!("row {r} has wrong length")));
            }
        }
        if cells.len() != rows * cols {
            return Err(Error::Parse("truncated dump".into()));
        }
        let rect = Self {
            rows,
            cols,
            parent_order,
            cells,
        };
        rect.validate()?;
        Ok(rect)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.parent_order];
        for r in 0..self.rows {
            seen.fill(false);
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v == 0 || v > self.parent_order || seen[v - 1] {
                    return Err(Error::Parse(format!("row {r} is not a permutation")));
                }
                seen[v - 1] = true;
            }
        }
        for c in 0..self.cols {
            seen.fill(false);
            for r in 0..self.rows {
                let v = self.get(r, c);
                if seen[v - 1] {
                    return Err(Error::Parse(format!("column {c} repeats symbol {v}")));
                }
                seen[v - 1] = true;
            }
        }
        Ok(())
    }
}

impl OrthogonalFamily {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[LatinSquare] {
        &self.members
    }

    pub fn get(&self, index: usize) -> &LatinSquare {
        &self.members[index]
    }
}

impl SymbolPattern {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}
