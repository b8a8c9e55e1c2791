//! Independent definitional checkers. These are the acceptance oracles: they
//! recompute every Gram product and balance count with their own loops and
//! never call the construction code paths they certify. All checks are exact
//! integer arithmetic; there are no tolerances in this module.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::matrix::{GroupMatrix, IntMatrix};

/// Location/expected/actual triple for the first failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of a definitional check, with the parameters measured from the
/// matrix itself (never taken from the caller).
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub kind: String,
    pub ok: bool,
    pub params: BTreeMap<String, i64>,
    pub first_violation: Option<Violation>,
}

impl VerifyReport {
    fn fail(kind: &str, location: String, expected: String, actual: String) -> Self {
        VerifyReport {
            kind: kind.to_string(),
            ok: false,
            params: BTreeMap::new(),
            first_violation: Some(Violation {
                location,
                expected,
                actual,
            }),
        }
    }

    fn pass(kind: &str, params: &[(&str, i64)]) -> Self {
        VerifyReport {
            kind: kind.to_string(),
            ok: true,
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            first_violation: None,
        }
    }

    pub fn param(&self, key: &str) -> Option<i64> {
        self.params.get(key).copied()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Check `W W^t = p I` and `W^t W = p I` for a square (0, ±1)-matrix; the
/// weight p is measured as the common row weight.
pub fn verify_weighing(w: &IntMatrix) -> VerifyReport {
    const KIND: &str = "weighing";
    if !w.is_square() {
        return VerifyReport::fail(
            KIND,
            "shape".into(),
            "square".into(),
            format!("{}x{}", w.rows(), w.cols()),
        );
    }
    let n = w.rows();
    for r in 0..n {
        for c in 0..n {
            let v = w.get(r, c);
            if !(-1..=1).contains(&v) {
                return VerifyReport::fail(
                    KIND,
                    format!("entry({r},{c})"),
                    "0 or ±1".into(),
                    v.to_string(),
                );
            }
        }
    }
    if n == 0 {
        return VerifyReport::pass(KIND, &[("n", 0), ("p", 0)]);
    }
    let p = dot(w.row(0), w.row(0));
    for a in 0..n {
        for b in a..n {
            let g = dot(w.row(a), w.row(b));
            let want = if a == b { p } else { 0 };
            if g != want {
                return VerifyReport::fail(
                    KIND,
                    format!("(W W^t)[{a}][{b}]"),
                    want.to_string(),
                    g.to_string(),
                );
            }
        }
    }
    // column Gram
    for a in 0..n {
        for b in a..n {
            let g: i64 = (0..n).map(|r| w.get(r, a) * w.get(r, b)).sum();
            let want = if a == b { p } else { 0 };
            if g != want {
                return VerifyReport::fail(
                    KIND,
                    format!("(W^t W)[{a}][{b}]"),
                    want.to_string(),
                    g.to_string(),
                );
            }
        }
    }
    VerifyReport::pass(KIND, &[("n", n as i64), ("p", p)])
}

/// A weighing matrix is balanced when its support is the incidence matrix of
/// a symmetric (n, p, λ) design: `N N^t = (p-λ) I + λ J` with
/// λ = p(p-1)/(n-1).
pub fn verify_balanced(w: &IntMatrix) -> VerifyReport {
    const KIND: &str = "balanced";
    let base = verify_weighing(w);
    if !base.ok {
        return VerifyReport {
            kind: KIND.into(),
            ok: false,
            params: base.params,
            first_violation: base.first_violation,
        };
    }
    let n = base.param("n").unwrap();
    let p = base.param("p").unwrap();
    if n <= 1 {
        return VerifyReport::pass(KIND, &[("n", n), ("p", p), ("lambda", 0)]);
    }
    if (p * (p - 1)) % (n - 1) != 0 {
        return VerifyReport::fail(
            KIND,
            "NonIntegralLambda".into(),
            format!("(n-1) = {} divides p(p-1) = {}", n - 1, p * (p - 1)),
            "not integral".into(),
        );
    }
    let lambda = p * (p - 1) / (n - 1);
    let nn = n as usize;
    for a in 0..nn {
        for b in a..nn {
            let g: i64 = (0..nn)
                .map(|c| w.get(a, c).abs() * w.get(b, c).abs())
                .sum();
            let want = if a == b { p } else { lambda };
            if g != want {
                return VerifyReport::fail(
                    KIND,
                    format!("(N N^t)[{a}][{b}]"),
                    want.to_string(),
                    g.to_string(),
                );
            }
        }
    }
    VerifyReport::pass(KIND, &[("n", n), ("p", p), ("lambda", lambda)])
}

/// Check the balanced-generalized-weighing property over Z_n: constant row
/// support k, and for every pair of distinct rows the multiset of entry
/// quotients contains each group element exactly λ/n times, with
/// λ = k(k-1)/(v-1). The result is cross-checked through the block
/// decomposition equations `sum_i B_i B_{i-h}^t`.
pub fn verify_bgw(w: &GroupMatrix) -> VerifyReport {
    const KIND: &str = "bgw";
    if !w.is_square() {
        return VerifyReport::fail(
            KIND,
            "shape".into(),
            "square".into(),
            format!("{}x{}", w.rows(), w.cols()),
        );
    }
    let v = w.rows();
    let n = w.group_order() as usize;
    if v < 2 {
        return VerifyReport::fail(KIND, "shape".into(), "order >= 2".into(), v.to_string());
    }
    let k = w.row_support(0);
    for r in 1..v {
        let s = w.row_support(r);
        if s != k {
            return VerifyReport::fail(
                KIND,
                format!("UnequalRowWeight(row={r})"),
                k.to_string(),
                s.to_string(),
            );
        }
    }
    if k == 0 {
        return VerifyReport::fail(KIND, "row support".into(), "positive".into(), "0".into());
    }
    if (k * (k - 1)) % (v - 1) != 0 {
        return VerifyReport::fail(
            KIND,
            "NonIntegralLambda".into(),
            format!("(v-1) = {} divides k(k-1) = {}", v - 1, k * (k - 1)),
            "not integral".into(),
        );
    }
    let lambda = k * (k - 1) / (v - 1);
    if lambda % n != 0 {
        return VerifyReport::fail(
            KIND,
            "NonIntegralLambdaOverGroup".into(),
            format!("|G| = {n} divides lambda = {lambda}"),
            "not integral".into(),
        );
    }
    let per = lambda / n;

    // Both balance routes always run in full; they are equivalent
    // conditions, and a disagreement marks a checker bug.
    let multiset = bgw_multiset_route(w, v, n, per);
    let block = bgw_block_route(w, v, n, k, per);
    match (multiset, block) {
        (None, None) => VerifyReport::pass(
            KIND,
            &[
                ("v", v as i64),
                ("k", k as i64),
                ("lambda", lambda as i64),
                ("n", n as i64),
            ],
        ),
        (Some((loc, want, got)), Some(_)) => VerifyReport::fail(KIND, loc, want, got),
        (m, b) => VerifyReport::fail(
            KIND,
            "InternalInconsistency".into(),
            "multiset and block-equation routes agree".into(),
            format!("multiset={m:?}, block={b:?}"),
        ),
    }
}

type RouteViolation = Option<(String, String, String)>;

/// Quotient-multiset route: for every ordered pair of distinct rows, the
/// entry quotients over the shared support hit each exponent λ/n times.
fn bgw_multiset_route(w: &GroupMatrix, v: usize, n: usize, per: usize) -> RouteViolation {
    let rows: Vec<Vec<Option<u32>>> = (0..v)
        .map(|r| (0..v).map(|c| w.get(r, c).exponent()).collect())
        .collect();
    let mut counts = vec![0usize; n];
    for i in 0..v {
        for j in 0..v {
            if i == j {
                continue;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for c in 0..v {
                if let (Some(a), Some(b)) = (rows[i][c], rows[j][c]) {
                    counts[((a + n as u32 - b) % n as u32) as usize] += 1;
                }
            }
            for (e, &cnt) in counts.iter().enumerate() {
                if cnt != per {
                    return Some((
                        format!("UnbalancedPair({i},{j},exponent={e})"),
                        per.to_string(),
                        cnt.to_string(),
                    ));
                }
            }
        }
    }
    None
}

/// Block-equation route: for each shift h, `sum_i B_i B_{i-h}^t` must be
/// `k I + (λ/n)(J - I)` at h = 0 and `(λ/n)(J - I)` otherwise.
fn bgw_block_route(
    w: &GroupMatrix,
    v: usize,
    n: usize,
    k: usize,
    per: usize,
) -> RouteViolation {
    let dec = w.decompose();
    let supports: Vec<Vec<Vec<usize>>> = dec
        .blocks
        .iter()
        .map(|b| {
            (0..v)
                .map(|r| (0..v).filter(|&c| b.get(r, c) == 1).collect())
                .collect()
        })
        .collect();
    for h in 0..n {
        for a in 0..v {
            let mut row_acc = vec![0i64; v];
            for i in 0..n {
                let j = (i + n - h) % n;
                // (B_i B_j^t)[a][b] = |cols(B_i, a) ∩ cols(B_j, b)|
                let cols_a = &supports[i][a];
                if cols_a.is_empty() {
                    continue;
                }
                let mut mask = vec![false; v];
                for &c in cols_a {
                    mask[c] = true;
                }
                for (b, acc) in row_acc.iter_mut().enumerate() {
                    *acc += supports[j][b].iter().filter(|&&c| mask[c]).count() as i64;
                }
            }
            for (b, &got) in row_acc.iter().enumerate() {
                let want = if a == b {
                    if h == 0 {
                        k as i64
                    } else {
                        0
                    }
                } else {
                    per as i64
                };
                if got != want {
                    return Some((
                        format!("BlockEquationFailure(h={h},row={a},col={b})"),
                        want.to_string(),
                        got.to_string(),
                    ));
                }
            }
        }
    }
    None
}

/// Check a 0/1 incidence matrix for the 2-design property: constant row sum
/// r, constant column sum k, and `N N^t = (r-λ) I + λ J`.
pub fn verify_bibd(m: &IntMatrix) -> VerifyReport {
    const KIND: &str = "bibd";
    let (v, b) = (m.rows(), m.cols());
    if v == 0 || b == 0 {
        return VerifyReport::fail(KIND, "shape".into(), "nonempty".into(), "empty".into());
    }
    for r in 0..v {
        for c in 0..b {
            let x = m.get(r, c);
            if x != 0 && x != 1 {
                return VerifyReport::fail(
                    KIND,
                    format!("entry({r},{c})"),
                    "0 or 1".into(),
                    x.to_string(),
                );
            }
        }
    }
    let r_sum = m.row_sum(0);
    for r in 1..v {
        if m.row_sum(r) != r_sum {
            return VerifyReport::fail(
                KIND,
                format!("row_sum({r})"),
                r_sum.to_string(),
                m.row_sum(r).to_string(),
            );
        }
    }
    let k_sum = m.col_sum(0);
    for c in 1..b {
        if m.col_sum(c) != k_sum {
            return VerifyReport::fail(
                KIND,
                format!("col_sum({c})"),
                k_sum.to_string(),
                m.col_sum(c).to_string(),
            );
        }
    }
    let lambda = if v > 1 { dot(m.row(0), m.row(1)) } else { 0 };
    for a in 0..v {
        for bb in a..v {
            let g = dot(m.row(a), m.row(bb));
            let want = if a == bb { r_sum } else { lambda };
            if g != want {
                return VerifyReport::fail(
                    KIND,
                    format!("(N N^t)[{a}][{bb}]"),
                    want.to_string(),
                    g.to_string(),
                );
            }
        }
    }
    VerifyReport::pass(
        KIND,
        &[
            ("v", v as i64),
            ("b", b as i64),
            ("r", r_sum),
            ("k", k_sum),
            ("lambda", lambda),
        ],
    )
}

/// Symmetric variant of [`verify_bibd`]: square with equal row and column
/// sums; reports (v, k, λ).
pub fn verify_symmetric_design(m: &IntMatrix) -> VerifyReport {
    const KIND: &str = "symmetric-design";
    if !m.is_square() {
        return VerifyReport::fail(
            KIND,
            "shape".into(),
            "square".into(),
            format!("{}x{}", m.rows(), m.cols()),
        );
    }
    let base = verify_bibd(m);
    if !base.ok {
        return VerifyReport {
            kind: KIND.into(),
            ok: false,
            params: base.params,
            first_violation: base.first_violation,
        };
    }
    let r = base.param("r").unwrap();
    let k = base.param("k").unwrap();
    if r != k {
        return VerifyReport::fail(
            KIND,
            "row/column sums".into(),
            format!("equal (r = {r})"),
            format!("k = {k}"),
        );
    }
    VerifyReport::pass(
        KIND,
        &[
            ("v", base.param("v").unwrap()),
            ("k", k),
            ("lambda", base.param("lambda").unwrap()),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::GroupEntry as GE;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_is_a_weighing_matrix() {
        let rep = verify_weighing(&IntMatrix::identity(3));
        assert!(rep.ok);
        assert_eq!((rep.param("n"), rep.param("p")), (Some(3), Some(1)));
    }

    #[test]
    fn sign_flip_is_detected() {
        let mut w = IntMatrix::identity(3);
        w.set(0, 1, 1);
        let rep = verify_weighing(&w);
        assert!(!rep.ok);
        let viol = rep.first_violation.unwrap();
        assert!(viol.location.contains("W W^t") || viol.location.contains("W^t W"));
    }

    #[test]
    fn non_sign_entry_is_rejected() {
        let w = m(vec![vec![2]]);
        assert!(!verify_weighing(&w).ok);
    }

    fn z2_seed() -> GroupMatrix {
        let z = GE::Zero;
        let i = GE::Exp(0);
        let e = GE::Exp(1);
        GroupMatrix::from_entries(
            vec![
                vec![z, i, i, i],
                vec![i, z, i, e],
                vec![i, e, z, i],
                vec![i, i, e, z],
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn order_four_bgw_over_z2() {
        let rep = verify_bgw(&z2_seed());
        assert!(rep.ok, "{:?}", rep.first_violation);
        assert_eq!(rep.param("v"), Some(4));
        assert_eq!(rep.param("k"), Some(3));
        assert_eq!(rep.param("lambda"), Some(2));
        assert_eq!(rep.param("n"), Some(2));
    }

    #[test]
    fn bgw_perturbation_detected() {
        let mut w = z2_seed();
        w.set(0, 1, GE::Exp(1));
        assert!(!verify_bgw(&w).ok);
    }

    #[test]
    fn balance_routes_agree_on_every_input() {
        // a disagreement between the multiset and block-equation routes is
        // reported as InternalInconsistency; it must never fire, whether the
        // input passes or fails
        let seed = z2_seed();
        let mut inputs = vec![seed.clone()];
        for r in 0..4 {
            for c in 0..4 {
                let mut bad = seed.clone();
                let flipped = match bad.get(r, c) {
                    GE::Zero => GE::Exp(0),
                    GE::Exp(e) => GE::Exp(1 - e),
                };
                bad.set(r, c, flipped);
                inputs.push(bad);
            }
        }
        for w in inputs {
            let rep = verify_bgw(&w);
            if let Some(v) = &rep.first_violation {
                assert_ne!(v.location, "InternalInconsistency", "{v:?}");
            }
        }
    }

    #[test]
    fn generalized_hadamard_two_by_two() {
        let w = GroupMatrix::from_entries(
            vec![vec![GE::Exp(0), GE::Exp(0)], vec![GE::Exp(0), GE::Exp(1)]],
            2,
        )
        .unwrap();
        let rep = verify_bgw(&w);
        assert!(rep.ok, "{:?}", rep.first_violation);
        assert_eq!(rep.param("k"), Some(2));
        assert_eq!(rep.param("lambda"), Some(2));
    }

    #[test]
    fn bibd_gram_and_sums() {
        // Fano plane as a difference set development
        let mut f = IntMatrix::zeros(7, 7);
        for r in 0..7 {
            for d in [1usize, 2, 4] {
                f.set(r, (r + d) % 7, 1);
            }
        }
        let rep = verify_bibd(&f);
        assert!(rep.ok);
        assert_eq!(rep.param("lambda"), Some(1));
        let sym = verify_symmetric_design(&f);
        assert!(sym.ok);
        assert_eq!(sym.param("k"), Some(3));
    }

    #[test]
    fn unbalanced_rows_rejected() {
        let n = m(vec![vec![1, 1, 0], vec![1, 0, 0], vec![0, 1, 1]]);
        assert!(!verify_bibd(&n).ok);
    }
}
