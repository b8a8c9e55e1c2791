//! Seed objects consumed by the expansion constructions: seed BGWs from discrete
//! logarithms, conference-type seed weighing matrices, Paley designs with
//! their residual/derived parts and twin mates, an embedded catalog of the
//! reference matrices, and file ingestion for externally sourced seeds.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::construct;
use crate::gf::{field_of_order, GfError};
use crate::matrix::{GroupEntry, GroupMatrix, IntMatrix, MatrixError};
use crate::oa::verify_oa;
use crate::textfmt::{parse_matrix, FormatError, MatrixKind, MatrixPayload};
use crate::verify::{verify_bgw, verify_bibd, verify_weighing};

#[derive(Debug, Error)]
pub enum SeedError {
    #[error("NotADivisor: {k} does not divide p-1 = {modulus}")]
    NotADivisor { k: u32, modulus: u64 },
    #[error("EvenCharacteristic: {0} is even, so 2 does not divide p-1")]
    EvenCharacteristic(u64),
    #[error("NoPaleyDesign: q = 2*{p}+1 = {q} is not a prime power congruent to 3 mod 4")]
    NoPaleyDesign { p: u64, q: u64 },
    #[error("NotSymmetric: the design is not a symmetric 2-design")]
    NotSymmetric,
    #[error("NoTwin: the complement is not a design with identical parameters")]
    NoTwin,
    #[error("BlockIndexOutOfRange: block {index} of {blocks}")]
    BlockIndexOutOfRange { index: usize, blocks: usize },
    #[error("UnknownSeed: no catalog entry named `{0}`")]
    UnknownSeed(String),
    #[error("VerificationFailed: {0}")]
    VerificationFailed(String),
    #[error("NoEncodingFound: no candidate token encoding verifies")]
    NoEncodingFound,
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Measured (v, b, r, k, λ) of an incidence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BibdParams {
    pub v: i64,
    pub b: i64,
    pub r: i64,
    pub k: i64,
    pub lambda: i64,
}

/// A 0/1 incidence matrix together with its verified parameters.
#[derive(Debug, Clone)]
pub struct DesignIncidence {
    pub matrix: IntMatrix,
    pub params: Option<BibdParams>,
}

impl DesignIncidence {
    /// Wrap and verify; the parameters are measured, not declared.
    pub fn verified(matrix: IntMatrix) -> Result<Self, SeedError> {
        let rep = verify_bibd(&matrix);
        if !rep.ok {
            return Err(SeedError::VerificationFailed(format!(
                "not a 2-design: {:?}",
                rep.first_violation
            )));
        }
        let params = BibdParams {
            v: rep.param("v").unwrap(),
            b: rep.param("b").unwrap(),
            r: rep.param("r").unwrap(),
            k: rep.param("k").unwrap(),
            lambda: rep.param("lambda").unwrap(),
        };
        Ok(DesignIncidence {
            matrix,
            params: Some(params),
        })
    }
}

/// The order-(p+1) seed BGW over Z_k for k | p-1, indexed by GF(p) ∪ {∞}
/// with ∞ first: the ∞ row, ∞ column carry the identity, the diagonal is
/// ZERO, and w(x, y) = dlog(y - x) mod k. This row/column order is already
/// the normal form. The result is certified by `verify_bgw` before return.
pub fn seed_bgw(p: u64, k: u32) -> Result<GroupMatrix, SeedError> {
    let field = field_of_order(p)?;
    if k < 1 || (p - 1) % k as u64 != 0 {
        return Err(SeedError::NotADivisor { k, modulus: p - 1 });
    }
    let q = p as usize;
    let mut w = GroupMatrix::zeros(q + 1, q + 1, k);
    for x in 0..q {
        w.set(0, x + 1, GroupEntry::Exp(0));
        w.set(x + 1, 0, GroupEntry::Exp(0));
    }
    for x in 0..q {
        for y in 0..q {
            if x == y {
                continue;
            }
            let diff = field.element(y as u64).sub(&field.element(x as u64))?;
            let e = (diff.dlog()? % k as u64) as u32;
            w.set(x + 1, y + 1, GroupEntry::Exp(e));
        }
    }
    let rep = verify_bgw(&w);
    if !rep.ok {
        return Err(SeedError::VerificationFailed(format!(
            "seed_bgw({p},{k}): {:?}",
            rep.first_violation
        )));
    }
    Ok(w)
}

/// The conference-type seed weighing matrix W(p+1, p) for odd prime powers,
/// obtained by signing the seed BGW over Z_2.
pub fn seed_conference(p: u64) -> Result<IntMatrix, SeedError> {
    field_of_order(p)?;
    if p % 2 == 0 {
        return Err(SeedError::EvenCharacteristic(p));
    }
    let w = seed_bgw(p, 2)?;
    let signed = construct::sign(&w)
        .map_err(|e| SeedError::VerificationFailed(format!("sign failed: {e}")))?;
    let rep = verify_weighing(&signed);
    if !rep.ok {
        return Err(SeedError::VerificationFailed(format!(
            "seed_conference({p}): {:?}",
            rep.first_violation
        )));
    }
    Ok(signed)
}

/// The Paley symmetric design SBIBD(2p+1, p, (p-1)/2): points GF(q) for
/// q = 2p+1 ≡ 3 (mod 4) a prime power, blocks the translates r + QR(q).
pub fn paley_design(p: u64) -> Result<DesignIncidence, SeedError> {
    let q = 2 * p + 1;
    let field = match field_of_order(q) {
        Ok(f) => f,
        Err(_) => return Err(SeedError::NoPaleyDesign { p, q }),
    };
    if q % 4 != 3 {
        return Err(SeedError::NoPaleyDesign { p, q });
    }
    let qe = q as usize;
    let mut is_square = vec![false; qe];
    for x in field.elements().skip(1) {
        is_square[x.mul(&x).unwrap().encoding() as usize] = true;
    }
    let mut m = IntMatrix::zeros(qe, qe);
    for point in 0..qe {
        for block in 0..qe {
            let d = field
                .element(point as u64)
                .sub(&field.element(block as u64))?;
            if is_square[d.encoding() as usize] {
                m.set(point, block, 1);
            }
        }
    }
    DesignIncidence::verified(m)
}

/// Split a symmetric design along one block: delete that block's column and
/// partition the rows into the residual part R (points off the block) and
/// the derived part D (points on the block). Both parts are verified.
pub fn residual_derived(
    s: &DesignIncidence,
    block_index: usize,
) -> Result<(DesignIncidence, DesignIncidence), SeedError> {
    let m = &s.matrix;
    let sym = crate::verify::verify_symmetric_design(m);
    if !sym.ok {
        return Err(SeedError::NotSymmetric);
    }
    if block_index >= m.cols() {
        return Err(SeedError::BlockIndexOutOfRange {
            index: block_index,
            blocks: m.cols(),
        });
    }
    let keep: Vec<usize> = (0..m.cols()).filter(|&c| c != block_index).collect();
    let mut r_rows = Vec::new();
    let mut d_rows = Vec::new();
    for row in 0..m.rows() {
        let slice: Vec<i64> = keep.iter().map(|&c| m.get(row, c)).collect();
        if m.get(row, block_index) == 0 {
            r_rows.push(slice);
        } else {
            d_rows.push(slice);
        }
    }
    let r = DesignIncidence::verified(IntMatrix::from_rows(r_rows)?)?;
    let d = DesignIncidence::verified(IntMatrix::from_rows(d_rows)?)?;
    Ok((r, d))
}

/// The twin mate of a design: its complement J - R, provided the complement
/// is again a design with identical parameters.
pub fn twin_mate(r: &DesignIncidence) -> Result<DesignIncidence, SeedError> {
    let rep = verify_bibd(&r.matrix);
    if !rep.ok {
        return Err(SeedError::VerificationFailed(
            "twin_mate input is not a 2-design".into(),
        ));
    }
    let mut comp = IntMatrix::zeros(r.matrix.rows(), r.matrix.cols());
    for i in 0..comp.rows() {
        for j in 0..comp.cols() {
            comp.set(i, j, 1 - r.matrix.get(i, j));
        }
    }
    let crep = verify_bibd(&comp);
    if !crep.ok || crep.params != rep.params {
        return Err(SeedError::NoTwin);
    }
    DesignIncidence::verified(comp)
}

/// A named, verified seed from the embedded catalog or an ingested file.
#[derive(Debug, Clone)]
pub struct SeedCatalogEntry {
    pub name: String,
    pub payload: MatrixPayload,
    /// Parameters measured by the matching verifier at load time.
    pub params: BTreeMap<String, i64>,
}

impl SeedCatalogEntry {
    pub fn kind(&self) -> MatrixKind {
        self.payload.kind()
    }
}

const EMBEDDED: &[(&str, &str, MatrixKind)] = &[
    (
        "W8_5",
        include_str!("../../../fixtures/W8_5.txt"),
        MatrixKind::Weighing,
    ),
    (
        "W43_25_appendix",
        include_str!("../../../fixtures/W43_25.txt"),
        MatrixKind::Weighing,
    ),
    (
        "D6_10",
        include_str!("../../../fixtures/D6_10.txt"),
        MatrixKind::Design,
    ),
    (
        "C6_10",
        include_str!("../../../fixtures/C6_10.txt"),
        MatrixKind::Design,
    ),
    (
        "BGW4_3_2",
        include_str!("../../../fixtures/BGW4_3.txt"),
        MatrixKind::Bgw,
    ),
    (
        "BGW31_appendix",
        include_str!("../../../fixtures/BGW31.txt"),
        MatrixKind::Bgw,
    ),
    (
        "OA25_6",
        include_str!("../../../fixtures/OA25_6.txt"),
        MatrixKind::Oa,
    ),
];

/// Verify a payload with the checker matching its kind and return the
/// measured parameters.
pub fn verify_payload(payload: &MatrixPayload) -> Result<BTreeMap<String, i64>, SeedError> {
    match payload {
        MatrixPayload::Weighing(w) => {
            let rep = verify_weighing(w);
            if !rep.ok {
                return Err(SeedError::VerificationFailed(format!(
                    "weighing: {:?}",
                    rep.first_violation
                )));
            }
            Ok(rep.params)
        }
        MatrixPayload::Design(m) => {
            let rep = verify_bibd(m);
            if !rep.ok {
                return Err(SeedError::VerificationFailed(format!(
                    "design: {:?}",
                    rep.first_violation
                )));
            }
            Ok(rep.params)
        }
        MatrixPayload::Bgw(w) => {
            let rep = verify_bgw(w);
            if !rep.ok {
                return Err(SeedError::VerificationFailed(format!(
                    "bgw: {:?}",
                    rep.first_violation
                )));
            }
            Ok(rep.params)
        }
        MatrixPayload::Oa(o) => {
            let rep = verify_oa(o);
            if !rep.ok {
                return Err(SeedError::VerificationFailed(format!(
                    "oa: {:?}",
                    rep.violation
                )));
            }
            let mut params = BTreeMap::new();
            params.insert("p".to_string(), o.symbols() as i64);
            params.insert("m".to_string(), o.exponent() as i64);
            params.insert("agreement".to_string(), rep.agreement.unwrap() as i64);
            params.insert("rows".to_string(), o.rows() as i64);
            params.insert("cols".to_string(), o.cols() as i64);
            Ok(params)
        }
    }
}

/// Names of the embedded reference matrices.
pub fn catalog_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(n, _, _)| *n).collect()
}

/// Load one embedded seed by name; the payload is verified on every load.
pub fn catalog(name: &str) -> Result<SeedCatalogEntry, SeedError> {
    let (key, text, kind) = EMBEDDED
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| SeedError::UnknownSeed(name.to_string()))?;
    let file = parse_matrix(text, Some(*kind))?;
    let params = verify_payload(&file.payload)?;
    Ok(SeedCatalogEntry {
        name: key.to_string(),
        payload: file.payload,
        params,
    })
}

/// Ingest a matrix file of the given kind; rejects matrices that fail the
/// matching verifier.
pub fn ingest(path: &Path, kind: MatrixKind) -> Result<SeedCatalogEntry, SeedError> {
    let text = std::fs::read_to_string(path)?;
    ingest_str(&text, kind, path.file_stem().and_then(|s| s.to_str()))
}

/// [`ingest`] on an in-memory string.
pub fn ingest_str(
    text: &str,
    kind: MatrixKind,
    fallback_name: Option<&str>,
) -> Result<SeedCatalogEntry, SeedError> {
    let file = parse_matrix(text, Some(kind))?;
    let params = verify_payload(&file.payload)?;
    let name = file
        .name
        .clone()
        .or_else(|| fallback_name.map(str::to_string))
        .unwrap_or_else(|| "ingested".to_string());
    Ok(SeedCatalogEntry {
        name,
        payload: file.payload,
        params,
    })
}

/// One candidate reading of a printed BGW token matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingDesc {
    /// Which token denotes the structural ZERO.
    pub zero_token: u32,
    /// Exponent map applied to the remaining tokens (mod n).
    pub negate: bool,
    pub shift: bool,
    pub label: String,
}

/// Outcome of brute-forcing the token encoding of a printed BGW.
#[derive(Debug, Clone)]
pub struct EncodingResolution {
    pub chosen: EncodingDesc,
    pub matrix: GroupMatrix,
    /// Every candidate that verifies. Candidates with the same ZERO token are
    /// related by a group translation/negation, so they verify together.
    pub passing: Vec<EncodingDesc>,
    /// ZERO tokens that admit at least one verifying candidate.
    pub zero_tokens_passing: Vec<u32>,
}

/// Resolve the symbol encoding of a printed BGW token matrix over Z_n by
/// brute force over the eight natural candidates: the ZERO token is 0 or n,
/// and the remaining tokens map through j, j-1, -j or 1-j (mod n). The first
/// verifying candidate in that order is chosen; the hypothesis reading
/// (ZERO = 0, j ↦ j mod n) comes first.
pub fn resolve_bgw_encoding(
    tokens: &IntMatrix,
    n: u32,
) -> Result<EncodingResolution, SeedError> {
    let mut passing = Vec::new();
    let mut chosen: Option<(EncodingDesc, GroupMatrix)> = None;
    for &zero_token in &[0u32, n] {
        for &(negate, shift) in &[(false, false), (false, true), (true, false), (true, true)] {
            let desc = EncodingDesc {
                zero_token,
                negate,
                shift,
                label: format!(
                    "zero={zero_token}, j -> {}{} mod {n}",
                    if negate { "-" } else { "" },
                    if shift { "(j-1)" } else { "j" }
                ),
            };
            let Some(gm) = apply_encoding(tokens, n, zero_token, negate, shift) else {
                continue;
            };
            if verify_bgw(&gm).ok {
                if chosen.is_none() {
                    chosen = Some((desc.clone(), gm));
                }
                passing.push(desc);
            }
        }
    }
    let (chosen, matrix) = chosen.ok_or(SeedError::NoEncodingFound)?;
    let mut zero_tokens_passing: Vec<u32> = passing.iter().map(|d| d.zero_token).collect();
    zero_tokens_passing.dedup();
    Ok(EncodingResolution {
        chosen,
        matrix,
        passing,
        zero_tokens_passing,
    })
}

fn apply_encoding(
    tokens: &IntMatrix,
    n: u32,
    zero_token: u32,
    negate: bool,
    shift: bool,
) -> Option<GroupMatrix> {
    let mut out = GroupMatrix::zeros(tokens.rows(), tokens.cols(), n);
    for r in 0..tokens.rows() {
        for c in 0..tokens.cols() {
            let t = tokens.get(r, c);
            if t < 0 || t > n as i64 {
                return None;
            }
            let t = t as u32;
            if t == zero_token {
                out.set(r, c, GroupEntry::Zero);
            } else {
                let mut e = (t % n) as i64;
                if shift {
                    e -= 1;
                }
                if negate {
                    e = -e;
                }
                let e = e.rem_euclid(n as i64) as u32;
                out.set(r, c, GroupEntry::Exp(e));
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_balanced;

    #[test]
    fn seed_bgw_matches_printed_order_four_example() {
        let w = seed_bgw(3, 2).unwrap();
        let cat = catalog("BGW4_3_2").unwrap();
        let MatrixPayload::Bgw(printed) = cat.payload else {
            panic!()
        };
        assert_eq!(w, printed);
    }

    #[test]
    fn seed_bgw_over_z4_balances() {
        let rep = verify_bgw(&seed_bgw(5, 4).unwrap());
        assert!(rep.ok);
        assert_eq!(
            (rep.param("v"), rep.param("k"), rep.param("lambda"), rep.param("n")),
            (Some(6), Some(5), Some(4), Some(4))
        );
    }

    #[test]
    fn seed_bgw_trivial_group_is_complete_design_pattern() {
        let w = seed_bgw(5, 1).unwrap();
        let s = w.support();
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(s.get(r, c), i64::from(r != c));
            }
        }
    }

    #[test]
    fn seed_bgw_divisor_check() {
        assert!(matches!(
            seed_bgw(5, 3),
            Err(SeedError::NotADivisor { k: 3, modulus: 4 })
        ));
    }

    #[test]
    fn conference_matrices() {
        let c5 = seed_conference(5).unwrap();
        let rep = verify_balanced(&c5);
        assert!(rep.ok);
        assert_eq!((rep.param("n"), rep.param("p")), (Some(6), Some(5)));

        let c9 = seed_conference(9).unwrap();
        let rep = verify_weighing(&c9);
        assert!(rep.ok);
        assert_eq!((rep.param("n"), rep.param("p")), (Some(10), Some(9)));

        assert!(matches!(
            seed_conference(4),
            Err(SeedError::EvenCharacteristic(4))
        ));
    }

    #[test]
    fn conference_support_is_complete() {
        // squared entrywise it is J - I
        let c = seed_conference(7).unwrap();
        for r in 0..8 {
            for col in 0..8 {
                assert_eq!(c.get(r, col) * c.get(r, col), i64::from(r != col));
            }
        }
    }

    #[test]
    fn paley_designs() {
        let d5 = paley_design(5).unwrap();
        assert_eq!(
            d5.params.unwrap(),
            BibdParams {
                v: 11,
                b: 11,
                r: 5,
                k: 5,
                lambda: 2
            }
        );
        let d3 = paley_design(3).unwrap();
        assert_eq!(
            d3.params.unwrap(),
            BibdParams {
                v: 7,
                b: 7,
                r: 3,
                k: 3,
                lambda: 1
            }
        );
        assert!(matches!(
            paley_design(7),
            Err(SeedError::NoPaleyDesign { p: 7, q: 15 })
        ));
        // q = 27 = 3^3 is an extension-field case
        let d13 = paley_design(13).unwrap();
        assert_eq!(d13.params.unwrap().lambda, 6);
    }

    #[test]
    fn residual_and_derived_parts_of_paley() {
        let s = paley_design(5).unwrap();
        let (r, d) = residual_derived(&s, 0).unwrap();
        assert_eq!(
            r.params.unwrap(),
            BibdParams {
                v: 6,
                b: 10,
                r: 5,
                k: 3,
                lambda: 2
            }
        );
        assert_eq!(
            d.params.unwrap(),
            BibdParams {
                v: 5,
                b: 10,
                r: 4,
                k: 2,
                lambda: 1
            }
        );

        let s3 = paley_design(3).unwrap();
        let (r3, d3) = residual_derived(&s3, 0).unwrap();
        assert_eq!(
            r3.params.unwrap(),
            BibdParams {
                v: 4,
                b: 6,
                r: 3,
                k: 2,
                lambda: 1
            }
        );
        assert_eq!(d3.params.unwrap().lambda, 0);
    }

    #[test]
    fn residual_times_derived_has_constant_row_sums() {
        let s = paley_design(5).unwrap();
        let (r, d) = residual_derived(&s, 0).unwrap();
        let prod = r.matrix.mul(&d.matrix.transpose());
        let first = prod.row_sum(0);
        for i in 1..prod.rows() {
            assert_eq!(prod.row_sum(i), first);
        }
    }

    #[test]
    fn twin_mate_of_printed_design_is_its_printed_complement() {
        let d = catalog("D6_10").unwrap();
        let c = catalog("C6_10").unwrap();
        let MatrixPayload::Design(dm) = d.payload else {
            panic!()
        };
        let MatrixPayload::Design(cm) = c.payload else {
            panic!()
        };
        let twin = twin_mate(&DesignIncidence::verified(dm).unwrap()).unwrap();
        assert_eq!(twin.matrix, cm);
    }

    #[test]
    fn paley_residual_has_a_twin() {
        let s = paley_design(3).unwrap();
        let (r, _) = residual_derived(&s, 0).unwrap();
        let twin = twin_mate(&r).unwrap();
        assert_eq!(twin.params, r.params);
    }

    #[test]
    fn fano_plane_has_no_twin() {
        let fano = paley_design(3).unwrap();
        assert!(matches!(twin_mate(&fano), Err(SeedError::NoTwin)));
    }

    #[test]
    fn catalog_entries_all_verify() {
        for name in catalog_names() {
            let entry = catalog(name).unwrap();
            assert!(!entry.params.is_empty(), "{name}");
        }
    }

    #[test]
    fn catalog_w8_5_parameters() {
        let e = catalog("W8_5").unwrap();
        assert_eq!(e.params.get("n"), Some(&8));
        assert_eq!(e.params.get("p"), Some(&5));
    }

    #[test]
    fn catalog_w43_parameters() {
        let e = catalog("W43_25_appendix").unwrap();
        assert_eq!(e.params.get("n"), Some(&43));
        assert_eq!(e.params.get("p"), Some(&25));
    }

    #[test]
    fn unknown_seed() {
        assert!(matches!(catalog("nope"), Err(SeedError::UnknownSeed(_))));
    }

    #[test]
    fn ingest_rejects_non_orthogonal_matrix() {
        let text = "# kind=weighing\n1 1\n1 1\n";
        let err = ingest_str(text, MatrixKind::Weighing, None).unwrap_err();
        assert!(matches!(err, SeedError::VerificationFailed(_)));
    }

    #[test]
    fn ingest_reads_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        std::fs::write(&path, "# kind=weighing\n1 0\n0 1\n").unwrap();
        let entry = ingest(&path, MatrixKind::Weighing).unwrap();
        assert_eq!(entry.name, "w");
        assert_eq!(entry.params.get("p"), Some(&1));
    }

    #[test]
    fn appendix_bgw_encoding_resolution() {
        let e = catalog("BGW31_appendix").unwrap();
        // reconstruct the raw token matrix from the canonical file encoding
        let MatrixPayload::Bgw(gm) = &e.payload else {
            panic!()
        };
        let mut toks = IntMatrix::zeros(31, 31);
        for r in 0..31 {
            for c in 0..31 {
                let t = match gm.get(r, c) {
                    GroupEntry::Zero => 0,
                    GroupEntry::Exp(0) => 4,
                    GroupEntry::Exp(x) => x as i64,
                };
                toks.set(r, c, t);
            }
        }
        let res = resolve_bgw_encoding(&toks, 4).unwrap();
        assert_eq!(res.chosen.zero_token, 0);
        assert!(!res.chosen.negate && !res.chosen.shift);
        // exactly one ZERO-token choice admits a verifying reading
        assert_eq!(res.zero_tokens_passing, vec![0]);
        // the four ZERO=0 candidates are group-equivalent and verify together
        assert_eq!(res.passing.len(), 4);
        assert_eq!(res.matrix, *gm);
    }
}
