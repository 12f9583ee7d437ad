//! Configurations on the m x n lattice and the row-major flattening map.
//!
//! Storage is 0-indexed internally; file formats and documentation follow
//! the 1-indexed (i, j) convention, where cell (i, j) lands at flat index
//! (i-1)*n + (j-1).

use crate::error::{Error, Result};
use crate::gfp::FieldSpec;

/// Lattice dimensions. Minimum size is 3x3: the block constructions assume
/// interior rows and columns exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeDims {
    m: usize,
    n: usize,
}

impl LatticeDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 3 || n < 3 {
            return Err(Error::TooSmall { m, n });
        }
        Ok(Self { m, n })
    }

    /// Row count m.
    #[inline]
    pub fn rows(&self) -> usize {
        self.m
    }

    /// Column count n.
    #[inline]
    pub fn cols(&self) -> usize {
        self.n
    }

    /// Total cell count m*n.
    #[inline]
    pub fn cell_count(&self) -> usize {
        self.m * self.n
    }
}

/// An m x n array over Z_p: the state of the automaton at one instant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    spec: FieldSpec,
    dims: LatticeDims,
    cells: Vec<u64>,
}

impl Configuration {
    pub fn zero(spec: FieldSpec, dims: LatticeDims) -> Self {
        Self {
            spec,
            dims,
            cells: vec![0; dims.cell_count()],
        }
    }

    /// Builds a configuration from row slices; every value must be in [0, p).
    pub fn from_rows(spec: FieldSpec, dims: LatticeDims, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.len() != dims.rows() || rows.iter().any(|r| r.len() != dims.cols()) {
            return Err(Error::DimensionMismatch {
                len: rows.iter().map(|r| r.len()).sum(),
                m: dims.rows(),
                n: dims.cols(),
            });
        }
        let mut cells = Vec::with_capacity(dims.cell_count());
        for row in rows {
            for &v in row {
                spec.element_checked(v)?;
                cells.push(v);
            }
        }
        Ok(Self { spec, dims, cells })
    }

    /// The indicator configuration: a single 1 at 0-indexed (i, j).
    pub fn indicator(spec: FieldSpec, dims: LatticeDims, i: usize, j: usize) -> Self {
        let mut c = Self::zero(spec, dims);
        c.set(i, j, 1);
        c
    }

    #[inline]
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    /// Cell value at 0-indexed (i, j).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.cells[i * self.dims.n + j]
    }

    /// Sets the cell at 0-indexed (i, j), reducing `v` modulo p.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.cells[i * self.dims.n + j] = v % self.spec.modulus();
    }

    /// Row-major cell storage.
    #[inline]
    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|&v| v == 0)
    }

    /// Parses the grid text format: a `p m n` header line, then m lines of
    /// n space-separated integers in [0, p).
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut lines = input.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let head: Vec<u64> = header
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad header token `{t}`")))
            })
            .collect::<Result<_>>()?;
        if head.len() != 3 {
            return Err(Error::Parse(format!(
                "header must be `p m n`, got {} tokens",
                head.len()
            )));
        }
        let spec = FieldSpec::new(head[0])?;
        let dims = LatticeDims::new(head[1] as usize, head[2] as usize)?;
        let mut rows = Vec::with_capacity(dims.rows());
        for _ in 0..dims.rows() {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("missing grid rows".into()))?;
            let row: Vec<u64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad cell token `{t}`")))
                })
                .collect::<Result<_>>()?;
            if row.len() != dims.cols() {
                return Err(Error::Parse(format!(
                    "expected {} cells per row, got {}",
                    dims.cols(),
                    row.len()
                )));
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after grid rows".into()));
        }
        Self::from_rows(spec, dims, &rows)
    }

    /// Writes the grid text format; `parse_text` inverts it bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.spec.modulus(),
            self.dims.rows(),
            self.dims.cols()
        );
        for i in 0..self.dims.rows() {
            let row: Vec<String> = (0..self.dims.cols())
                .map(|j| self.get(i, j).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A length-mn column vector over Z_p: the flattened state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    spec: FieldSpec,
    entries: Vec<u64>,
}

impl StateVector {
    pub fn new(spec: FieldSpec, entries: Vec<u64>) -> Result<Self> {
        for &v in &entries {
            spec.element_checked(v)?;
        }
        Ok(Self { spec, entries })
    }

    #[inline]
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        self.entries[k]
    }
}

/// Row-major flattening: cell (i, j) (1-indexed) maps to entry (i-1)*n + (j-1).
pub fn flatten(c: &Configuration) -> StateVector {
    StateVector {
        spec: c.spec(),
        entries: c.cells().to_vec(),
    }
}

/// Inverse of [`flatten`]; fails unless `v.len() == m * n`.
pub fn unflatten(v: &StateVector, dims: LatticeDims) -> Result<Configuration> {
    if v.len() != dims.cell_count() {
        return Err(Error::DimensionMismatch {
            len: v.len(),
            m: dims.rows(),
            n: dims.cols(),
        });
    }
    Ok(Configuration {
        spec: v.spec(),
        dims,
        cells: v.entries().to_vec(),
    })
}
