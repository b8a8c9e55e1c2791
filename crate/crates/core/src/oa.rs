//! Orthogonal arrays from projective geometry over GF(p).
//!
//! For a prime power p and m >= 1 the array has p^{m+1} rows (the vectors of
//! GF(p)^{m+1}) and (p^{m+1}-1)/(p-1) columns (the points of PG(m,p)); the
//! entry at (v, c) is the inner product <v, c>. Any two distinct rows agree
//! in exactly (p^m-1)/(p-1) columns — the points of a hyperplane — and every
//! symbol occurs p^m times in each column.

use thiserror::Error;

use crate::gf::{field_of_order, FieldElem, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OaError {
    #[error("NotPrimePower: {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("BadShape: {0}")]
    BadShape(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// A p^{m+1} x (p^{m+1}-1)/(p-1) array over symbols {0, .., p-1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrthogonalArray {
    p: u64,
    m: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl OrthogonalArray {
    pub fn symbols(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn symbol(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The agreement count (p^m - 1)/(p - 1) any two distinct rows must have.
    pub fn expected_agreement(&self) -> usize {
        ((self.p.pow(self.m) - 1) / (self.p - 1)) as usize
    }

    /// Wrap an ingested symbol grid. Symbols must already be 0-based; the
    /// dimensions determine p and m and must match the (p, m) shape.
    pub fn from_symbols(grid: Vec<Vec<u32>>) -> Result<Self, OaError> {
        if grid.is_empty() || grid[0].is_empty() {
            return Err(OaError::BadShape("empty array".into()));
        }
        let cols = grid[0].len();
        if grid.iter().any(|r| r.len() != cols) {
            return Err(OaError::BadShape("ragged rows".into()));
        }
        let p = grid.iter().flatten().copied().max().unwrap() as u64 + 1;
        if p < 2 {
            return Err(OaError::BadShape("needs at least two symbols".into()));
        }
        let rows = grid.len();
        // rows = p^{m+1}; m = 0 gives the degenerate single-column array
        let mut m = 0u32;
        let mut t = p;
        while (t as usize) < rows {
            t = t.saturating_mul(p);
            m += 1;
        }
        if (t as usize) != rows {
            return Err(OaError::BadShape(format!(
                "{rows} rows is not a power of the symbol count {p}"
            )));
        }
        let want_cols = ((p.pow(m + 1) - 1) / (p - 1)) as usize;
        if cols != want_cols {
            return Err(OaError::BadShape(format!(
                "expected {want_cols} columns for p={p}, m={m}, got {cols}"
            )));
        }
        Ok(OrthogonalArray {
            p,
            m,
            rows,
            cols,
            data: grid.into_iter().flatten().collect(),
        })
    }
}

/// Build the array for prime power p. `m = 0` yields the single column
/// containing each symbol once.
pub fn oa_build(p: u64, m: u32) -> Result<OrthogonalArray, OaError> {
    let field = field_of_order(p).map_err(|e| match e {
        GfError::NotPrimePower(_) | GfError::NotPrime(_) => OaError::NotPrimePower(p),
        other => OaError::Gf(other),
    })?;
    let dim = (m + 1) as usize;
    let rows = p.pow(m + 1) as usize;
    let cols = ((p.pow(m + 1) - 1) / (p - 1)) as usize;

    // Projective points: representatives with first nonzero coordinate 1,
    // in lexicographic order of encoding vectors.
    let mut points: Vec<Vec<FieldElem>> = Vec::with_capacity(cols);
    let mut vec_enc = vec![0u64; dim];
    loop {
        if let Some(nz) = vec_enc.iter().position(|&e| e != 0) {
            if vec_enc[nz] == 1 {
                points.push(vec_enc.iter().map(|&e| field.element(e)).collect());
            }
        }
        // odometer increment, leftmost coordinate most significant
        let mut i = dim;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            vec_enc[i] += 1;
            if vec_enc[i] < p {
                break;
            }
            vec_enc[i] = 0;
        }
        if vec_enc.iter().all(|&e| e == 0) {
            break;
        }
    }
    debug_assert_eq!(points.len(), cols);

    let mut data = Vec::with_capacity(rows * cols);
    let mut row_enc = vec![0u64; dim];
    for _ in 0..rows {
        let v: Vec<FieldElem> = row_enc.iter().map(|&e| field.element(e)).collect();
        for pt in &points {
            let mut acc = field.zero();
            for (a, b) in v.iter().zip(pt) {
                acc = acc.add(&a.mul(b).expect("same field")).expect("same field");
            }
            data.push(acc.encoding() as u32);
        }
        let mut i = dim;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            row_enc[i] += 1;
            if row_enc[i] < p {
                break;
            }
            row_enc[i] = 0;
        }
    }
    Ok(OrthogonalArray {
        p,
        m,
        rows,
        cols,
        data,
    })
}

/// First violation found by [`verify_oa`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OaViolation {
    Agreement {
        row_a: usize,
        row_b: usize,
        count: usize,
        expected: usize,
    },
    ColumnImbalance {
        col: usize,
        symbol: u32,
        count: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaReport {
    pub ok: bool,
    /// The common pairwise agreement count when the check passes.
    pub agreement: Option<usize>,
    pub column_balanced: bool,
    pub violation: Option<OaViolation>,
}

/// Brute-force check of both defining invariants: every symbol occurs p^m
/// times in each column, and any two distinct rows agree in exactly
/// (p^m-1)/(p-1) columns.
pub fn verify_oa(o: &OrthogonalArray) -> OaReport {
    let p = o.p as usize;
    let per_col = o.rows / p;
    for c in 0..o.cols {
        let mut counts = vec![0usize; p];
        for r in 0..o.rows {
            counts[o.symbol(r, c) as usize] += 1;
        }
        for (s, &cnt) in counts.iter().enumerate() {
            if cnt != per_col {
                return OaReport {
                    ok: false,
                    agreement: None,
                    column_balanced: false,
                    violation: Some(OaViolation::ColumnImbalance {
                        col: c,
                        symbol: s as u32,
                        count: cnt,
                        expected: per_col,
                    }),
                };
            }
        }
    }
    let expected = o.expected_agreement();
    for a in 0..o.rows {
        for b in a + 1..o.rows {
            let count = o
                .row(a)
                .iter()
                .zip(o.row(b))
                .filter(|(x, y)| x == y)
                .count();
            if count != expected {
                return OaReport {
                    ok: false,
                    agreement: None,
                    column_balanced: true,
                    violation: Some(OaViolation::Agreement {
                        row_a: a,
                        row_b: b,
                        count,
                        expected,
                    }),
                };
            }
        }
    }
    OaReport {
        ok: true,
        agreement: Some(expected),
        column_balanced: true,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_single_column() {
        let o = oa_build(5, 0).unwrap();
        assert_eq!((o.rows(), o.cols()), (5, 1));
        let col: Vec<u32> = (0..5).map(|r| o.symbol(r, 0)).collect();
        assert_eq!(col, vec![0, 1, 2, 3, 4]);
        assert_eq!(verify_oa(&o).agreement, Some(0));
    }

    #[test]
    fn oa_5_1_matches_appendix_shape() {
        let o = oa_build(5, 1).unwrap();
        assert_eq!((o.rows(), o.cols()), (25, 6));
        let rep = verify_oa(&o);
        assert!(rep.ok);
        assert_eq!(rep.agreement, Some(1));
    }

    #[test]
    fn oa_3_2_agreement_four() {
        let o = oa_build(3, 2).unwrap();
        assert_eq!((o.rows(), o.cols()), (27, 13));
        assert_eq!(verify_oa(&o).agreement, Some(4));
    }

    #[test]
    fn oa_2_1_agreement_one() {
        let o = oa_build(2, 1).unwrap();
        assert_eq!((o.rows(), o.cols()), (4, 3));
        assert_eq!(verify_oa(&o).agreement, Some(1));
    }

    #[test]
    fn non_prime_power_rejected() {
        assert_eq!(oa_build(6, 1).unwrap_err(), OaError::NotPrimePower(6));
    }

    #[test]
    fn perturbation_is_caught() {
        let o = oa_build(3, 1).unwrap();
        let mut grid: Vec<Vec<u32>> = (0..o.rows()).map(|r| o.row(r).to_vec()).collect();
        grid[2][1] = (grid[2][1] + 1) % 3;
        let bad = OrthogonalArray::from_symbols(grid).unwrap();
        let rep = verify_oa(&bad);
        assert!(!rep.ok);
        assert!(rep.violation.is_some());
    }

    #[test]
    fn row_zero_is_constant() {
        for (p, m) in [(2u64, 3u32), (3, 2), (4, 1), (5, 1), (9, 1)] {
            let o = oa_build(p, m).unwrap();
            assert!(o.row(0).iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn column_count_identity() {
        for (p, m) in [(2u64, 1u32), (2, 3), (3, 2), (4, 2), (5, 2), (7, 1), (8, 1)] {
            let o = oa_build(p, m).unwrap();
            assert_eq!(o.cols() as u64 * (p - 1), p.pow(m + 1) - 1);
        }
    }

    #[test]
    fn strength_two_for_small_arrays() {
        // any two distinct columns carry every ordered symbol pair p^{m-1} times
        for (p, m) in [(2u64, 2u32), (3, 2), (4, 2), (5, 2)] {
            let o = oa_build(p, m).unwrap();
            let per = p.pow(m - 1) as usize;
            for c1 in 0..o.cols() {
                for c2 in c1 + 1..o.cols() {
                    let mut counts = vec![0usize; (p * p) as usize];
                    for r in 0..o.rows() {
                        let key = o.symbol(r, c1) as usize * p as usize + o.symbol(r, c2) as usize;
                        counts[key] += 1;
                    }
                    assert!(counts.iter().all(|&x| x == per), "p={p} m={m}");
                }
            }
        }
    }

    #[test]
    fn from_symbols_validates_shape() {
        let bad = vec![vec![0u32, 1], vec![1, 0], vec![0, 1]];
        assert!(OrthogonalArray::from_symbols(bad).is_err());
    }
}
