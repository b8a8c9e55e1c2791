//! Plain-text matrix files.
//!
//! A file is a sequence of `# key=value` header lines followed by one row per
//! line of whitespace-separated tokens:
//!
//! * `weighing` — tokens `0`, `1`, `-` (`-` is −1), the print style of the
//!   reference matrices;
//! * `bgw` — integer tokens; `0` is the structural ZERO and `j` in `1..=n` is
//!   the exponent `j mod n`; the header must carry `n`;
//! * `design` / `oa` — nonnegative integer tokens. Orthogonal arrays whose
//!   smallest symbol is 1 are shifted down to the 0-based alphabet on read.
//!
//! The writer emits a canonical form (single spaces, `kind` header first);
//! `write` after `read` is byte-identical for canonical files.

use thiserror::Error;

use crate::matrix::{GroupEntry, GroupMatrix, IntMatrix, MatrixError};
use crate::oa::{OaError, OrthogonalArray};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("ParseError: line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("ParseError: missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("ParseError: file kind is {found}, expected {requested}")]
    KindMismatch { requested: String, found: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Oa(#[from] OaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Weighing,
    Bgw,
    Design,
    Oa,
}

impl MatrixKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixKind::Weighing => "weighing",
            MatrixKind::Bgw => "bgw",
            MatrixKind::Design => "design",
            MatrixKind::Oa => "oa",
        }
    }

    pub fn parse(s: &str) -> Option<MatrixKind> {
        match s {
            "weighing" => Some(MatrixKind::Weighing),
            "bgw" => Some(MatrixKind::Bgw),
            "design" => Some(MatrixKind::Design),
            "oa" => Some(MatrixKind::Oa),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum MatrixPayload {
    Weighing(IntMatrix),
    Bgw(GroupMatrix),
    Design(IntMatrix),
    Oa(OrthogonalArray),
}

impl MatrixPayload {
    pub fn kind(&self) -> MatrixKind {
        match self {
            MatrixPayload::Weighing(_) => MatrixKind::Weighing,
            MatrixPayload::Bgw(_) => MatrixKind::Bgw,
            MatrixPayload::Design(_) => MatrixKind::Design,
            MatrixPayload::Oa(_) => MatrixKind::Oa,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub name: Option<String>,
    pub payload: MatrixPayload,
}

struct RawFile {
    kind: Option<MatrixKind>,
    n: Option<u32>,
    name: Option<String>,
    rows: Vec<Vec<String>>,
    first_row_line: Vec<usize>,
}

fn parse_raw(text: &str) -> Result<RawFile, FormatError> {
    let mut raw = RawFile {
        kind: None,
        n: None,
        name: None,
        rows: Vec::new(),
        first_row_line: Vec::new(),
    };
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((key, value)) = rest.split_once('=') {
                match key.trim() {
                    "kind" => {
                        raw.kind = Some(MatrixKind::parse(value.trim()).ok_or_else(|| {
                            FormatError::Parse {
                                line: line_no,
                                msg: format!("unknown kind `{}`", value.trim()),
                            }
                        })?)
                    }
                    "n" => {
                        raw.n = Some(value.trim().parse().map_err(|_| FormatError::Parse {
                            line: line_no,
                            msg: format!("bad group order `{}`", value.trim()),
                        })?)
                    }
                    "name" => raw.name = Some(value.trim().to_string()),
                    _ => {} // unknown headers are ignored
                }
            }
            continue;
        }
        raw.rows
            .push(trimmed.split_whitespace().map(str::to_string).collect());
        raw.first_row_line.push(line_no);
    }
    if raw.rows.is_empty() {
        return Err(FormatError::Parse {
            line: 0,
            msg: "no matrix rows".into(),
        });
    }
    Ok(raw)
}

/// Parse a matrix file. When `kind` is given it must match the file header
/// (files without a `kind` header take the requested kind).
pub fn parse_matrix(text: &str, kind: Option<MatrixKind>) -> Result<MatrixFile, FormatError> {
    let raw = parse_raw(text)?;
    let effective = match (kind, raw.kind) {
        (Some(req), Some(found)) if req != found => {
            return Err(FormatError::KindMismatch {
                requested: req.as_str().into(),
                found: found.as_str().into(),
            })
        }
        (Some(req), _) => req,
        (None, Some(found)) => found,
        (None, None) => return Err(FormatError::MissingHeader("kind")),
    };
    let payload = match effective {
        MatrixKind::Weighing => MatrixPayload::Weighing(parse_signed(&raw)?),
        MatrixKind::Design => MatrixPayload::Design(parse_nonneg(&raw)?),
        MatrixKind::Bgw => {
            let n = raw.n.ok_or(FormatError::MissingHeader("n"))?;
            MatrixPayload::Bgw(parse_bgw(&raw, n)?)
        }
        MatrixKind::Oa => {
            let grid = parse_nonneg(&raw)?;
            let mut rows: Vec<Vec<u32>> = (0..grid.rows())
                .map(|r| grid.row(r).iter().map(|&x| x as u32).collect())
                .collect();
            // printed reference arrays use the 1-based alphabet
            let min = rows.iter().flatten().min().copied().unwrap_or(0);
            if min == 1 {
                for row in &mut rows {
                    for x in row {
                        *x -= 1;
                    }
                }
            }
            MatrixPayload::Oa(OrthogonalArray::from_symbols(rows)?)
        }
    };
    Ok(MatrixFile {
        name: raw.name,
        payload,
    })
}

fn parse_signed(raw: &RawFile) -> Result<IntMatrix, FormatError> {
    let mut rows = Vec::with_capacity(raw.rows.len());
    for (i, toks) in raw.rows.iter().enumerate() {
        let line = raw.first_row_line[i];
        let mut row = Vec::with_capacity(toks.len());
        for t in toks {
            let v = match t.as_str() {
                "-" => -1,
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(FormatError::Parse {
                        line,
                        msg: format!("weighing token must be 0, 1 or -, got `{other}`"),
                    })
                }
            };
            row.push(v);
        }
        rows.push(row);
    }
    Ok(IntMatrix::from_rows(rows)?)
}

fn parse_nonneg(raw: &RawFile) -> Result<IntMatrix, FormatError> {
    let mut rows = Vec::with_capacity(raw.rows.len());
    for (i, toks) in raw.rows.iter().enumerate() {
        let line = raw.first_row_line[i];
        let mut row = Vec::with_capacity(toks.len());
        for t in toks {
            let v: i64 = t.parse().map_err(|_| FormatError::Parse {
                line,
                msg: format!("expected a nonnegative integer, got `{t}`"),
            })?;
            if v < 0 {
                return Err(FormatError::Parse {
                    line,
                    msg: format!("expected a nonnegative integer, got `{t}`"),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok(IntMatrix::from_rows(rows)?)
}

fn parse_bgw(raw: &RawFile, n: u32) -> Result<GroupMatrix, FormatError> {
    let mut rows = Vec::with_capacity(raw.rows.len());
    for (i, toks) in raw.rows.iter().enumerate() {
        let line = raw.first_row_line[i];
        let mut row = Vec::with_capacity(toks.len());
        for t in toks {
            let v: u32 = t.parse().map_err(|_| FormatError::Parse {
                line,
                msg: format!("bgw token must be an integer in 0..={n}, got `{t}`"),
            })?;
            let entry = match v {
                0 => GroupEntry::Zero,
                j if j <= n => GroupEntry::Exp(j % n),
                _ => {
                    return Err(FormatError::Parse {
                        line,
                        msg: format!("bgw token {v} exceeds the group order {n}"),
                    })
                }
            };
            row.push(entry);
        }
        rows.push(row);
    }
    Ok(GroupMatrix::from_entries(rows, n)?)
}

/// Canonical text form of a payload.
pub fn write_matrix(payload: &MatrixPayload, name: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(&format!("# kind={}\n", payload.kind().as_str()));
    if let MatrixPayload::Bgw(w) = payload {
        out.push_str(&format!("# n={}\n", w.group_order()));
    }
    if let Some(name) = name {
        out.push_str(&format!("# name={name}\n"));
    }
    match payload {
        MatrixPayload::Weighing(w) => {
            for r in 0..w.rows() {
                let toks: Vec<String> = w
                    .row(r)
                    .iter()
                    .map(|&x| match x {
                        -1 => "-".to_string(),
                        v => v.to_string(),
                    })
                    .collect();
                out.push_str(&toks.join(" "));
                out.push('\n');
            }
        }
        MatrixPayload::Design(m) => {
            for r in 0..m.rows() {
                let toks: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
                out.push_str(&toks.join(" "));
                out.push('\n');
            }
        }
        MatrixPayload::Bgw(w) => {
            let n = w.group_order();
            for r in 0..w.rows() {
                let toks: Vec<String> = (0..w.cols())
                    .map(|c| match w.get(r, c) {
                        GroupEntry::Zero => "0".to_string(),
                        // the identity exponent 0 is written as the token n
                        GroupEntry::Exp(0) => n.to_string(),
                        GroupEntry::Exp(e) => e.to_string(),
                    })
                    .collect();
                out.push_str(&toks.join(" "));
                out.push('\n');
            }
        }
        MatrixPayload::Oa(o) => {
            for r in 0..o.rows() {
                let toks: Vec<String> = o.row(r).iter().map(|x| x.to_string()).collect();
                out.push_str(&toks.join(" "));
                out.push('\n');
            }
        }
    }
    out
}
