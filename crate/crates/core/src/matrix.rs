//! Dense exact matrices: signed integer matrices and matrices over
//! `{0} ∪ Z_n`, with the structural operations the constructions use —
//! Kronecker products, signed Kronecker sums, symbol substitution along an
//! orthogonal array, block bordering, the `*` involution, and the block
//! decomposition `W = sum_i i·B_i`.
//!
//! Matrices are immutable values; every operation returns a fresh matrix.

use std::fmt;

use thiserror::Error;

use crate::oa::OrthogonalArray;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("OverlappingSupports: cell ({row},{col}) receives two contributions")]
    OverlappingSupports { row: usize, col: usize },
    #[error("SymbolOutOfRange: symbol {symbol} has no assigned row (only {rows} rows)")]
    SymbolOutOfRange { symbol: usize, rows: usize },
    #[error("WrongRowCount: substitution needs {expected} rows, got {actual}")]
    WrongRowCount { expected: usize, actual: usize },
    #[error("NotSquareAfterBorder: border would be {rows}x{cols}")]
    NotSquareAfterBorder { rows: usize, cols: usize },
    #[error("BadShape: {0}")]
    BadShape(String),
}

/// Dense row-major matrix with signed 64-bit integer entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![1; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        if rows.is_empty() {
            return Ok(Self::zeros(0, 0));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::BadShape("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| -x).collect(),
        }
    }

    /// Entrywise absolute value (the support for 0/±1 matrices).
    pub fn abs(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x.abs()).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = r * out.cols;
                for (c, &b) in orow.iter().enumerate() {
                    out.data[base + c] += a * b;
                }
            }
        }
        out
    }

    pub fn row_sum(&self, r: usize) -> i64 {
        self.row(r).iter().sum()
    }

    pub fn col_sum(&self, c: usize) -> i64 {
        (0..self.rows).map(|r| self.get(r, c)).sum()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            for c in 0..self.cols.min(24) {
                write!(f, "{:>3}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Kronecker product of integer matrices.
pub fn kron(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let s = a.get(ar, ac);
            if s == 0 {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    out.set(ar * b.rows() + br, ac * b.cols() + bc, s * b.get(br, bc));
                }
            }
        }
    }
    out
}

/// `Wplus ⊗ R + Wminus ⊗ Rtwin` for disjoint 0/1 matrices `Wplus`, `Wminus`.
pub fn signed_kron(
    wplus: &IntMatrix,
    wminus: &IntMatrix,
    r: &IntMatrix,
    rtwin: &IntMatrix,
) -> Result<IntMatrix, MatrixError> {
    if wplus.rows() != wminus.rows() || wplus.cols() != wminus.cols() {
        return Err(MatrixError::DimensionMismatch(format!(
            "W+ is {}x{}, W- is {}x{}",
            wplus.rows(),
            wplus.cols(),
            wminus.rows(),
            wminus.cols()
        )));
    }
    if r.rows() != rtwin.rows() || r.cols() != rtwin.cols() {
        return Err(MatrixError::DimensionMismatch(format!(
            "R is {}x{}, R' is {}x{}",
            r.rows(),
            r.cols(),
            rtwin.rows(),
            rtwin.cols()
        )));
    }
    for i in 0..wplus.rows() {
        for j in 0..wplus.cols() {
            if wplus.get(i, j) != 0 && wminus.get(i, j) != 0 {
                return Err(MatrixError::OverlappingSupports { row: i, col: j });
            }
        }
    }
    let a = kron(wplus, r);
    let b = kron(wminus, rtwin);
    let mut out = IntMatrix::zeros(a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (a.get(i, j), b.get(i, j));
            if x != 0 && y != 0 {
                return Err(MatrixError::OverlappingSupports { row: i, col: j });
            }
            out.set(i, j, x + y);
        }
    }
    Ok(out)
}

fn resolve_perm(perm: Option<&[usize]>, p: usize) -> Result<Vec<usize>, MatrixError> {
    match perm {
        None => Ok((0..p).collect()),
        Some(pi) => {
            if pi.len() != p {
                return Err(MatrixError::WrongRowCount {
                    expected: p,
                    actual: pi.len(),
                });
            }
            let mut seen = vec![false; p];
            for &x in pi {
                if x >= p || seen[x] {
                    return Err(MatrixError::BadShape(format!(
                        "assignment permutation is not a bijection on 0..{p}"
                    )));
                }
                seen[x] = true;
            }
            Ok(pi.to_vec())
        }
    }
}

/// Replace each symbol `s` of the array by row `perm[s]` of `rows_of`.
/// The output has `O.rows()` rows and `O.cols() * rows_of.cols()` columns.
pub fn substitute(
    o: &OrthogonalArray,
    rows_of: &IntMatrix,
    perm: Option<&[usize]>,
) -> Result<IntMatrix, MatrixError> {
    let p = o.symbols() as usize;
    if rows_of.rows() != p {
        return Err(MatrixError::WrongRowCount {
            expected: p,
            actual: rows_of.rows(),
        });
    }
    let pi = resolve_perm(perm, p)?;
    let w = rows_of.cols();
    let mut out = IntMatrix::zeros(o.rows(), o.cols() * w);
    for r in 0..o.rows() {
        for c in 0..o.cols() {
            let s = o.symbol(r, c) as usize;
            if s >= p {
                return Err(MatrixError::SymbolOutOfRange { symbol: s, rows: p });
            }
            let src = rows_of.row(pi[s]);
            for (t, &v) in src.iter().enumerate() {
                out.set(r, c * w + t, v);
            }
        }
    }
    Ok(out)
}

/// Group-matrix variant of [`substitute`].
pub fn substitute_group(
    o: &OrthogonalArray,
    rows_of: &GroupMatrix,
    perm: Option<&[usize]>,
) -> Result<GroupMatrix, MatrixError> {
    let p = o.symbols() as usize;
    if rows_of.rows() != p {
        return Err(MatrixError::WrongRowCount {
            expected: p,
            actual: rows_of.rows(),
        });
    }
    let pi = resolve_perm(perm, p)?;
    let w = rows_of.cols();
    let mut out = GroupMatrix::zeros(o.rows(), o.cols() * w, rows_of.group_order());
    for r in 0..o.rows() {
        for c in 0..o.cols() {
            let s = o.symbol(r, c) as usize;
            if s >= p {
                return Err(MatrixError::SymbolOutOfRange { symbol: s, rows: p });
            }
            for t in 0..w {
                out.set(r, c * w + t, rows_of.get(pi[s], t));
            }
        }
    }
    Ok(out)
}

/// Assemble the bordered square matrix `[[0, R], [1, D]]`: a first column of
/// zeros beside `R` and ones beside `D`. Requires the result to be square.
pub fn border(r: &IntMatrix, d: &IntMatrix) -> Result<IntMatrix, MatrixError> {
    if r.cols() != d.cols() {
        return Err(MatrixError::DimensionMismatch(format!(
            "R has {} columns, D has {}",
            r.cols(),
            d.cols()
        )));
    }
    let rows = r.rows() + d.rows();
    let cols = r.cols() + 1;
    if rows != cols {
        return Err(MatrixError::NotSquareAfterBorder { rows, cols });
    }
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            out.set(i, j + 1, r.get(i, j));
        }
    }
    for i in 0..d.rows() {
        out.set(r.rows() + i, 0, 1);
        for j in 0..d.cols() {
            out.set(r.rows() + i, j + 1, d.get(i, j));
        }
    }
    Ok(out)
}

/// Group-matrix variant of [`border`]: the border column holds ZERO beside
/// `R` and the group identity beside `D`.
pub fn border_group(r: &GroupMatrix, d: &GroupMatrix) -> Result<GroupMatrix, MatrixError> {
    if r.cols() != d.cols() || r.group_order() != d.group_order() {
        return Err(MatrixError::DimensionMismatch(format!(
            "R is {}x{} over Z_{}, D is {}x{} over Z_{}",
            r.rows(),
            r.cols(),
            r.group_order(),
            d.rows(),
            d.cols(),
            d.group_order()
        )));
    }
    let rows = r.rows() + d.rows();
    let cols = r.cols() + 1;
    if rows != cols {
        return Err(MatrixError::NotSquareAfterBorder { rows, cols });
    }
    let mut out = GroupMatrix::zeros(rows, cols, r.group_order());
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            out.set(i, j + 1, r.get(i, j));
        }
    }
    for i in 0..d.rows() {
        out.set(r.rows() + i, 0, GroupEntry::Exp(0));
        for j in 0..d.cols() {
            out.set(r.rows() + i, j + 1, d.get(i, j));
        }
    }
    Ok(out)
}

/// An entry of a matrix over `{0} ∪ Z_n`: structurally ZERO, or a group
/// element written as its exponent relative to the generator. The exponent 0
/// (the identity) is distinct from ZERO.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupEntry {
    Zero,
    Exp(u32),
}

impl GroupEntry {
    pub fn is_zero(self) -> bool {
        matches!(self, GroupEntry::Zero)
    }

    pub fn exponent(self) -> Option<u32> {
        match self {
            GroupEntry::Zero => None,
            GroupEntry::Exp(e) => Some(e),
        }
    }
}

/// Dense matrix whose entries are ZERO or elements of the cyclic group Z_n.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupMatrix {
    rows: usize,
    cols: usize,
    n: u32,
    data: Vec<GroupEntry>,
}

impl GroupMatrix {
    pub fn zeros(rows: usize, cols: usize, n: u32) -> Self {
        assert!(n >= 1, "group order must be positive");
        GroupMatrix {
            rows,
            cols,
            n,
            data: vec![GroupEntry::Zero; rows * cols],
        }
    }

    pub fn from_entries(
        rows: Vec<Vec<GroupEntry>>,
        n: u32,
    ) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::BadShape("ragged rows".into()));
        }
        let data: Vec<GroupEntry> = rows.into_iter().flatten().collect();
        if data
            .iter()
            .any(|e| matches!(e, GroupEntry::Exp(x) if *x >= n))
        {
            return Err(MatrixError::BadShape(format!(
                "exponent out of range for Z_{n}"
            )));
        }
        Ok(GroupMatrix {
            rows: data.len() / cols.max(1),
            cols,
            n,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The cyclic group order n.
    pub fn group_order(&self) -> u32 {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> GroupEntry {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GroupEntry) {
        if let GroupEntry::Exp(e) = v {
            assert!(e < self.n, "exponent {e} out of range for Z_{}", self.n);
        }
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_support(&self, r: usize) -> usize {
        (0..self.cols).filter(|&c| !self.get(r, c).is_zero()).count()
    }

    /// 0/1 support matrix.
    pub fn support(&self) -> IntMatrix {
        let mut s = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.get(r, c).is_zero() {
                    s.set(r, c, 1);
                }
            }
        }
        s
    }

    /// The matrix `W*` with (i,j)-entry `-w_{ji}` (ZERO where `w_{ji}` is ZERO).
    pub fn star(&self) -> GroupMatrix {
        assert!(self.is_square(), "star requires a square matrix");
        let mut out = GroupMatrix::zeros(self.rows, self.cols, self.n);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = match self.get(c, r) {
                    GroupEntry::Zero => GroupEntry::Zero,
                    GroupEntry::Exp(e) => GroupEntry::Exp((self.n - e) % self.n),
                };
                out.set(r, c, e);
            }
        }
        out
    }

    /// Kronecker product with the 1×p all-identity row: every entry is
    /// repeated p times horizontally.
    pub fn kron_identity_row(&self, p: usize) -> GroupMatrix {
        let mut out = GroupMatrix::zeros(self.rows, self.cols * p, self.n);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                for t in 0..p {
                    out.set(r, c * p + t, e);
                }
            }
        }
        out
    }

    /// Split into the 0/1 blocks B_0..B_{n-1} with `W = sum_i i · B_i`.
    pub fn decompose(&self) -> BlockDecomposition {
        let mut blocks = vec![IntMatrix::zeros(self.rows, self.cols); self.n as usize];
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let GroupEntry::Exp(e) = self.get(r, c) {
                    blocks[e as usize].set(r, c, 1);
                }
            }
        }
        BlockDecomposition { n: self.n, blocks }
    }
}

impl fmt::Debug for GroupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over Z_{}]", self.rows, self.cols, self.n)?;
        for r in 0..self.rows.min(12) {
            for c in 0..self.cols.min(24) {
                match self.get(r, c) {
                    GroupEntry::Zero => write!(f, "  .")?,
                    GroupEntry::Exp(e) => write!(f, "{e:>3}")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The blocks B_0..B_{n-1} of a group matrix; supports are pairwise disjoint.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub n: u32,
    pub blocks: Vec<IntMatrix>,
}

impl BlockDecomposition {
    /// Rebuild `W = sum_i i · B_i`. Fails if supports overlap.
    pub fn recompose(&self) -> Result<GroupMatrix, MatrixError> {
        let (rows, cols) = match self.blocks.first() {
            Some(b) => (b.rows(), b.cols()),
            None => (0, 0),
        };
        let mut out = GroupMatrix::zeros(rows, cols, self.n);
        for (e, b) in self.blocks.iter().enumerate() {
            if b.rows() != rows || b.cols() != cols {
                return Err(MatrixError::DimensionMismatch("block sizes differ".into()));
            }
            for r in 0..rows {
                for c in 0..cols {
                    if b.get(r, c) != 0 {
                        if !out.get(r, c).is_zero() {
                            return Err(MatrixError::OverlappingSupports { row: r, col: c });
                        }
                        out.set(r, c, GroupEntry::Exp(e as u32));
                    }
                }
            }
        }
        Ok(out)
    }
}
