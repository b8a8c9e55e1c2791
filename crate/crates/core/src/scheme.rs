//! The commutative association scheme attached to a BGW over Z_n.
//!
//! From a BGW(v, k, λ; Z_n) with blocks B_0..B_{n-1} the scheme lives on
//! 2nv points (two halves, each n blocks of v vertices) with classes
//!
//! * `A_{0,i}` — diag(P^i ⊗ I_v, P^i ⊗ I_v) for the order-n circulant P,
//! * `A_1` — diag(J_n ⊗ (J_v - I_v), J_n ⊗ (J_v - I_v)),
//! * `A_{2,i}` — off-diagonal blocks Σ_j P^j ⊗ B_{i+j} and its mate,
//! * `A_3` — the complementary off-diagonal class, present only when k < v.
//!
//! Axioms and intersection numbers are checked in exact integer arithmetic;
//! the eigenmatrices and primitive idempotents use complex doubles with an
//! absolute tolerance of 1e-9.

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{GroupEntry, GroupMatrix, IntMatrix};
use crate::verify::{verify_bgw, Violation};

/// Entrywise tolerance for the floating-point eigenstructure checks.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("NotABGW: {0}")]
    NotABgw(String),
    #[error("AxiomViolation(axiom {axiom}): {detail}")]
    AxiomViolation { axiom: u8, detail: String },
    #[error("EigenMismatch in {what} at {location}: |delta| = {delta:.3e}")]
    EigenMismatch {
        what: String,
        location: String,
        delta: f64,
    },
    #[error("NotCanonical: {0}")]
    NotCanonical(String),
    #[error("VerificationFailed: {0}")]
    VerificationFailed(String),
}

/// Ordered family of 0/1 adjacency matrices on 2nv points.
#[derive(Debug, Clone)]
pub struct AssociationScheme {
    pub n: u32,
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    /// Number of points 2nv.
    pub size: usize,
    /// Classes in the order A_{0,0}..A_{0,n-1}, A_1, A_{2,0}..A_{2,n-1},
    /// then A_3 when k < v.
    pub classes: Vec<IntMatrix>,
    pub class_names: Vec<String>,
}

impl AssociationScheme {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn has_a3(&self) -> bool {
        self.k < self.v
    }

    fn a1_index(&self) -> usize {
        self.n as usize
    }

    fn a2_index(&self, i: usize) -> usize {
        self.n as usize + 1 + i
    }
}

/// Build the scheme of a verified BGW over Z_n.
pub fn scheme_from_bgw(w: &GroupMatrix) -> Result<AssociationScheme, SchemeError> {
    let rep = verify_bgw(w);
    if !rep.ok {
        return Err(SchemeError::NotABgw(format!("{:?}", rep.first_violation)));
    }
    let n = w.group_order() as usize;
    let v = w.rows();
    let k = rep.param("k").unwrap() as usize;
    let lambda = rep.param("lambda").unwrap() as usize;
    let size = 2 * n * v;
    let dec = w.decompose();
    let support = w.support();

    // point x = half*nv + block*v + vertex
    let idx = |half: usize, block: usize, vertex: usize| half * n * v + block * v + vertex;

    let mut classes = Vec::new();
    let mut class_names = Vec::new();
    for i in 0..n {
        let mut a = IntMatrix::zeros(size, size);
        for half in 0..2 {
            for block in 0..n {
                let to = (block + i) % n;
                for vertex in 0..v {
                    a.set(idx(half, block, vertex), idx(half, to, vertex), 1);
                }
            }
        }
        classes.push(a);
        class_names.push(format!("A0_{i}"));
    }
    {
        let mut a = IntMatrix::zeros(size, size);
        for half in 0..2 {
            for block in 0..n {
                for to in 0..n {
                    for x in 0..v {
                        for y in 0..v {
                            if x != y {
                                a.set(idx(half, block, x), idx(half, to, y), 1);
                            }
                        }
                    }
                }
            }
        }
        classes.push(a);
        class_names.push("A1".to_string());
    }
    for i in 0..n {
        let mut a = IntMatrix::zeros(size, size);
        for block in 0..n {
            for to in 0..n {
                let j = (to + n - block) % n; // P^j sends block to block + j
                let top = &dec.blocks[(i + j) % n];
                let bot = &dec.blocks[(2 * n - i - j) % n]; // B_{-i-j}, transposed below
                for x in 0..v {
                    for y in 0..v {
                        if top.get(x, y) == 1 {
                            a.set(idx(0, block, x), idx(1, to, y), 1);
                        }
                        if bot.get(y, x) == 1 {
                            a.set(idx(1, block, x), idx(0, to, y), 1);
                        }
                    }
                }
            }
        }
        classes.push(a);
        class_names.push(format!("A2_{i}"));
    }
    if k < v {
        let mut a = IntMatrix::zeros(size, size);
        for block in 0..n {
            for to in 0..n {
                for x in 0..v {
                    for y in 0..v {
                        if support.get(x, y) == 0 {
                            a.set(idx(0, block, x), idx(1, to, y), 1);
                        }
                        if support.get(y, x) == 0 {
                            a.set(idx(1, block, x), idx(0, to, y), 1);
                        }
                    }
                }
            }
        }
        classes.push(a);
        class_names.push("A3".to_string());
    }

    Ok(AssociationScheme {
        n: n as u32,
        v,
        k,
        lambda,
        size,
        classes,
        class_names,
    })
}

/// Exact verification report: axioms 1-5, the full intersection-number
/// table, commutativity, and the symmetry flag.
#[derive(Debug, Clone)]
pub struct SchemeReport {
    pub ok: bool,
    pub commutative: bool,
    pub symmetric: bool,
    /// `symmetric` agrees with `n == 2` (the expected law for n >= 2).
    pub symmetric_iff_n2: bool,
    /// p^t_{ij} at `(i * d1 + j) * d1 + t` for d1 classes.
    pub intersection_numbers: Vec<i64>,
    pub violation: Option<Violation>,
}

impl SchemeReport {
    pub fn intersection(&self, d1: usize, i: usize, j: usize, t: usize) -> i64 {
        self.intersection_numbers[(i * d1 + j) * d1 + t]
    }

    fn fail(location: String, expected: String, actual: String) -> SchemeReport {
        SchemeReport {
            ok: false,
            commutative: false,
            symmetric: false,
            symmetric_iff_n2: false,
            intersection_numbers: Vec::new(),
            violation: Some(Violation {
                location,
                expected,
                actual,
            }),
        }
    }
}

fn adjacency_rows(a: &IntMatrix) -> Vec<Vec<u32>> {
    (0..a.rows())
        .map(|r| {
            a.row(r)
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == 1)
                .map(|(c, _)| c as u32)
                .collect()
        })
        .collect()
}

/// Partition map: class index of every cell. Fails unless the classes are
/// 0/1, pairwise disjoint, and cover X × X (axioms 1-2).
fn class_partition(s: &AssociationScheme) -> Result<Vec<u8>, SchemeReport> {
    let x = s.size;
    let mut class_at = vec![u8::MAX; x * x];
    for (t, a) in s.classes.iter().enumerate() {
        if a.rows() != x || a.cols() != x {
            return Err(SchemeReport::fail(
                format!("class {} shape", s.class_names[t]),
                format!("{x}x{x}"),
                format!("{}x{}", a.rows(), a.cols()),
            ));
        }
        for r in 0..x {
            for c in 0..x {
                match a.get(r, c) {
                    0 => {}
                    1 => {
                        if class_at[r * x + c] != u8::MAX {
                            return Err(SchemeReport::fail(
                                format!("cell ({r},{c})"),
                                "exactly one class".into(),
                                "two classes".into(),
                            ));
                        }
                        class_at[r * x + c] = t as u8;
                    }
                    other => {
                        return Err(SchemeReport::fail(
                            format!("class {} entry ({r},{c})", s.class_names[t]),
                            "0 or 1".into(),
                            other.to_string(),
                        ));
                    }
                }
            }
        }
    }
    if let Some(pos) = class_at.iter().position(|&t| t == u8::MAX) {
        return Err(SchemeReport::fail(
            format!("cell ({},{})", pos / x, pos % x),
            "covered by some class (sum = J)".into(),
            "uncovered".into(),
        ));
    }
    Ok(class_at)
}

/// Check the five axioms exactly and compute every intersection number by
/// expanding each product A_i A_j against the class basis.
pub fn verify_scheme(s: &AssociationScheme) -> SchemeReport {
    let x = s.size;
    let d1 = s.class_count();
    // axiom 1
    if s.classes[0] != IntMatrix::identity(x) {
        return SchemeReport::fail("A0_0".into(), "identity".into(), "not identity".into());
    }
    // axioms 2 and the disjoint-support property
    let class_at = match class_partition(s) {
        Ok(c) => c,
        Err(rep) => return rep,
    };
    // axiom 3: the transpose of every class is a single class
    for (t, a) in s.classes.iter().enumerate() {
        let mut transpose_class: Option<u8> = None;
        let mut okay = true;
        'outer: for r in 0..x {
            for c in 0..x {
                if a.get(r, c) == 1 {
                    let tc = class_at[c * x + r];
                    match transpose_class {
                        None => transpose_class = Some(tc),
                        Some(prev) if prev != tc => {
                            okay = false;
                            break 'outer;
                        }
                        _ => {}
                    }
                }
            }
        }
        if !okay {
            return SchemeReport::fail(
                format!("transpose of {}", s.class_names[t]),
                "a single class".into(),
                "splits across classes".into(),
            );
        }
    }
    // axiom 4 + intersection numbers
    let adj: Vec<Vec<Vec<u32>>> = s.classes.iter().map(adjacency_rows).collect();
    let mut table = vec![0i64; d1 * d1 * d1];
    let mut counts = vec![0i64; x];
    for i in 0..d1 {
        for j in 0..d1 {
            let coef = &mut table[(i * d1 + j) * d1..(i * d1 + j + 1) * d1];
            let mut seen = vec![false; d1];
            for r in 0..x {
                counts.iter_mut().for_each(|c| *c = 0);
                for &mid in &adj[i][r] {
                    for &e in &adj[j][mid as usize] {
                        counts[e as usize] += 1;
                    }
                }
                for (y, &cnt) in counts.iter().enumerate() {
                    let t = class_at[r * x + y] as usize;
                    if !seen[t] {
                        seen[t] = true;
                        coef[t] = cnt;
                    } else if coef[t] != cnt {
                        return SchemeReport::fail(
                            format!(
                                "({} · {}) at cell ({r},{y})",
                                s.class_names[i], s.class_names[j]
                            ),
                            format!("constant {} on class {}", coef[t], s.class_names[t]),
                            cnt.to_string(),
                        );
                    }
                }
            }
        }
    }
    // axiom 5 via the tables (products already known to lie in the span)
    let mut commutative = true;
    'comm: for i in 0..d1 {
        for j in 0..i {
            for t in 0..d1 {
                if table[(i * d1 + j) * d1 + t] != table[(j * d1 + i) * d1 + t] {
                    commutative = false;
                    break 'comm;
                }
            }
        }
    }
    let symmetric = s
        .classes
        .iter()
        .all(|a| (0..x).all(|r| (r..x).all(|c| a.get(r, c) == a.get(c, r))));
    let symmetric_iff_n2 = symmetric == (s.n <= 2);
    let ok = commutative;
    SchemeReport {
        ok,
        commutative,
        symmetric,
        symmetric_iff_n2,
        intersection_numbers: table,
        violation: if ok {
            None
        } else {
            Some(Violation {
                location: "commutativity".into(),
                expected: "A_i A_j = A_j A_i".into(),
                actual: "products differ".into(),
            })
        },
    }
}

/// Eigenmatrices P, Q and the primitive idempotents, expressed by their
/// coefficients over the adjacency basis: `E_i = Σ_s coeffs[i][s] A_s`.
#[derive(Debug, Clone)]
pub struct Eigenmatrices {
    pub class_names: Vec<String>,
    pub idempotent_names: Vec<String>,
    /// First eigenmatrix: `p[i][j]` is the eigenvalue of class j on E_i.
    pub p: Vec<Vec<Complex64>>,
    /// Second eigenmatrix: `q[s][i]` with `E_i = (1/|X|) Σ_s q[s][i] A_s`.
    pub q: Vec<Vec<Complex64>>,
    pub idempotent_coeffs: Vec<Vec<Complex64>>,
    /// trace(E_i): the multiplicity of each eigenspace.
    pub multiplicities: Vec<f64>,
}

fn omega(n: u32, power: i64) -> Complex64 {
    let n = n as i64;
    let r = power.rem_euclid(n);
    // exact values for the small orders in play
    match (n, r) {
        (1, _) => Complex64::new(1.0, 0.0),
        (2, 0) => Complex64::new(1.0, 0.0),
        (2, 1) => Complex64::new(-1.0, 0.0),
        (4, 0) => Complex64::new(1.0, 0.0),
        (4, 1) => Complex64::new(0.0, 1.0),
        (4, 2) => Complex64::new(-1.0, 0.0),
        (4, 3) => Complex64::new(0.0, -1.0),
        _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / n as f64),
    }
}

/// Instantiate the closed-form eigenmatrices and idempotents and validate
/// them against the scheme: `A_j E_i = p_{ij} E_i`, idempotency, mutual
/// orthogonality, sum to the identity, and `P Q = |X| I`, all within
/// [`EIGEN_TOL`].
pub fn eigenmatrices(s: &AssociationScheme) -> Result<Eigenmatrices, SchemeError> {
    let report = verify_scheme(s);
    if !report.ok {
        return Err(SchemeError::AxiomViolation {
            axiom: 0,
            detail: format!("{:?}", report.violation),
        });
    }
    let n = s.n as usize;
    let (v, k) = (s.v as f64, s.k as f64);
    let d1 = s.class_count();
    let x = s.size as f64;
    let re = |t: f64| Complex64::new(t, 0.0);

    let mut idempotent_names: Vec<String> = vec!["E0".into(), "E1".into()];
    if s.has_a3() {
        idempotent_names.push("E2_1".into());
        idempotent_names.push("E2_2".into());
    } else {
        idempotent_names.push("E2".into());
    }
    for fam in [3, 4] {
        for i in 1..n {
            idempotent_names.push(format!("E{fam}_{i}"));
        }
    }
    assert_eq!(idempotent_names.len(), d1);

    // First eigenmatrix P: rows are idempotents, columns are classes.
    let mut p = vec![vec![Complex64::new(0.0, 0.0); d1]; d1];
    let a1 = s.a1_index();
    {
        // E0 and E1
        for j in 0..n {
            p[0][j] = re(1.0);
            p[1][j] = re(1.0);
            p[0][s.a2_index(j)] = re(k);
            p[1][s.a2_index(j)] = re(-k);
        }
        p[0][a1] = re(n as f64 * (v - 1.0));
        p[1][a1] = re(n as f64 * (v - 1.0));
        if s.has_a3() {
            p[0][d1 - 1] = re(n as f64 * (v - k));
            p[1][d1 - 1] = re(-(n as f64) * (v - k));
        }
    }
    let mut row = 2;
    if s.has_a3() {
        let sroot = (k * (v - k) / (v - 1.0)).sqrt();
        for (r, sgn) in [(row, 1.0), (row + 1, -1.0)] {
            for j in 0..n {
                p[r][j] = re(1.0);
                p[r][s.a2_index(j)] = re(sgn * sroot);
            }
            p[r][a1] = re(-(n as f64));
            p[r][d1 - 1] = re(-sgn * n as f64 * sroot);
        }
        row += 2;
    } else {
        for j in 0..n {
            p[row][j] = re(1.0);
            p[row][s.a2_index(j)] = re(0.0);
        }
        p[row][a1] = re(-(n as f64));
        row += 1;
    }
    let rk = k.sqrt();
    for (fam_sign, fam_offset) in [(1.0, 0usize), (-1.0, n - 1)] {
        for i in 1..n {
            let r = row + fam_offset + (i - 1);
            for j in 0..n {
                p[r][j] = omega(s.n, -((i * j) as i64));
                p[r][s.a2_index(j)] = omega(s.n, (i * j) as i64) * re(fam_sign * rk);
            }
            p[r][a1] = re(0.0);
            if s.has_a3() {
                p[r][d1 - 1] = re(0.0);
            }
        }
    }

    // Second eigenmatrix Q: rows are classes, columns are idempotents.
    let mut q = vec![vec![Complex64::new(0.0, 0.0); d1]; d1];
    {
        for i in 0..n {
            q[i][0] = re(1.0);
            q[i][1] = re(1.0);
            q[s.a2_index(i)][0] = re(1.0);
            q[s.a2_index(i)][1] = re(-1.0);
        }
        q[a1][0] = re(1.0);
        q[a1][1] = re(1.0);
        if s.has_a3() {
            q[d1 - 1][0] = re(1.0);
            q[d1 - 1][1] = re(-1.0);
        }
    }
    let mut col = 2;
    if s.has_a3() {
        let u = ((v - 1.0) * (v - k) / k).sqrt();
        let w3 = ((v - 1.0) * k / (v - k)).sqrt();
        for (c, sgn) in [(col, 1.0), (col + 1, -1.0)] {
            for i in 0..n {
                q[i][c] = re(v - 1.0);
                q[s.a2_index(i)][c] = re(sgn * u);
            }
            q[a1][c] = re(-1.0);
            q[d1 - 1][c] = re(-sgn * w3);
        }
        col += 2;
    } else {
        for i in 0..n {
            q[i][col] = re(2.0 * (v - 1.0));
            q[s.a2_index(i)][col] = re(0.0);
        }
        q[a1][col] = re(-2.0);
        col += 1;
    }
    for (fam_sign, fam_offset) in [(1.0, 0usize), (-1.0, n - 1)] {
        for j in 1..n {
            let c = col + fam_offset + (j - 1);
            for i in 0..n {
                q[i][c] = omega(s.n, (i * j) as i64) * re(v);
                q[s.a2_index(i)][c] = omega(s.n, -((i * j) as i64)) * re(fam_sign * v / rk);
            }
            q[a1][c] = re(0.0);
            if s.has_a3() {
                q[d1 - 1][c] = re(0.0);
            }
        }
    }

    // E_i = (1/|X|) Σ_s q[s][i] A_s
    let coeffs: Vec<Vec<Complex64>> = (0..d1)
        .map(|i| (0..d1).map(|sx| q[sx][i] / re(x)).collect())
        .collect();

    // ---- validation ----
    // P Q = |X| I
    for (r, prow) in p.iter().enumerate() {
        for c in 0..d1 {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..d1 {
                acc += prow[t] * q[t][c];
            }
            let want = if r == c { x } else { 0.0 };
            let delta = (acc - re(want)).norm();
            if delta > EIGEN_TOL {
                return Err(SchemeError::EigenMismatch {
                    what: "P·Q = |X|·I".into(),
                    location: format!("({r},{c})"),
                    delta,
                });
            }
        }
    }
    // sum of idempotents is the identity (coefficient space: Σ_i c_i = e_0)
    for sx in 0..d1 {
        let acc: Complex64 = (0..d1).map(|i| coeffs[i][sx]).sum();
        let want = if sx == 0 { 1.0 } else { 0.0 };
        let delta = (acc - re(want)).norm();
        if delta > EIGEN_TOL {
            return Err(SchemeError::EigenMismatch {
                what: "Σ E_i = I".into(),
                location: s.class_names[sx].clone(),
                delta,
            });
        }
    }
    // idempotency and mutual orthogonality. In coefficient space
    // E_a E_b = Σ_u (Σ_{s,t} c_a[s] c_b[t] p^u_{st}) A_u, and because the
    // classes have disjoint 0/1 supports covering X × X, the entrywise
    // sup-norm of a combination Σ α_u A_u is max_u |α_u|.
    for a in 0..d1 {
        for b in a..d1 {
            for u in 0..d1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for sx in 0..d1 {
                    if coeffs[a][sx].norm() == 0.0 {
                        continue;
                    }
                    for t in 0..d1 {
                        let pn = report.intersection(d1, sx, t, u);
                        if pn != 0 {
                            acc += coeffs[a][sx] * coeffs[b][t] * re(pn as f64);
                        }
                    }
                }
                let want = if a == b { coeffs[a][u] } else { Complex64::new(0.0, 0.0) };
                let delta = (acc - want).norm();
                if delta > EIGEN_TOL {
                    return Err(SchemeError::EigenMismatch {
                        what: format!(
                            "E_{} · E_{}",
                            idempotent_names[a], idempotent_names[b]
                        ),
                        location: s.class_names[u].clone(),
                        delta,
                    });
                }
            }
        }
    }
    // A_j E_i = p_{ij} E_i, checked directly on dense complex matrices
    let class_at = class_partition(s).expect("already verified");
    let xs = s.size;
    let adj: Vec<Vec<Vec<u32>>> = s.classes.iter().map(adjacency_rows).collect();
    for i in 0..d1 {
        let mut e = vec![Complex64::new(0.0, 0.0); xs * xs];
        for r in 0..xs {
            for c in 0..xs {
                e[r * xs + c] = coeffs[i][class_at[r * xs + c] as usize];
            }
        }
        for j in 0..d1 {
            let pij = p[i][j];
            for r in 0..xs {
                let mut acc = vec![Complex64::new(0.0, 0.0); xs];
                for &mid in &adj[j][r] {
                    let base = mid as usize * xs;
                    for c in 0..xs {
                        acc[c] += e[base + c];
                    }
                }
                for c in 0..xs {
                    let delta = (acc[c] - pij * e[r * xs + c]).norm();
                    if delta > EIGEN_TOL {
                        return Err(SchemeError::EigenMismatch {
                            what: format!(
                                "{} · {} = p·{}",
                                s.class_names[j], idempotent_names[i], idempotent_names[i]
                            ),
                            location: format!("({r},{c})"),
                            delta,
                        });
                    }
                }
            }
        }
    }
    // valencies: row sums of each class equal the E0 row of P exactly
    for (t, a) in s.classes.iter().enumerate() {
        let val = a.row_sum(0);
        for r in 1..xs {
            if a.row_sum(r) != val {
                return Err(SchemeError::EigenMismatch {
                    what: format!("valency of {}", s.class_names[t]),
                    location: format!("row {r}"),
                    delta: (a.row_sum(r) - val) as f64,
                });
            }
        }
        let delta = (p[0][t] - re(val as f64)).norm();
        if delta > EIGEN_TOL {
            return Err(SchemeError::EigenMismatch {
                what: format!("valency of {}", s.class_names[t]),
                location: "P row E0".into(),
                delta,
            });
        }
    }
    // multiplicities: trace(E_i) = c_i[A0_0] |X|, near a nonnegative integer
    let mut multiplicities = Vec::with_capacity(d1);
    let mut total = 0.0;
    for (i, name) in idempotent_names.iter().enumerate() {
        let tr = coeffs[i][0] * re(x);
        if tr.im.abs() > EIGEN_TOL || tr.re < -EIGEN_TOL {
            return Err(SchemeError::EigenMismatch {
                what: format!("multiplicity of {name}"),
                location: "trace".into(),
                delta: tr.im.abs().max(-tr.re),
            });
        }
        let rounded = tr.re.round();
        if (tr.re - rounded).abs() > EIGEN_TOL {
            return Err(SchemeError::EigenMismatch {
                what: format!("multiplicity of {name}"),
                location: "integrality".into(),
                delta: (tr.re - rounded).abs(),
            });
        }
        multiplicities.push(rounded);
        total += rounded;
    }
    if (total - x).abs() > EIGEN_TOL {
        return Err(SchemeError::EigenMismatch {
            what: "multiplicities sum to |X|".into(),
            location: "trace".into(),
            delta: (total - x).abs(),
        });
    }

    Ok(Eigenmatrices {
        class_names: s.class_names.clone(),
        idempotent_names,
        p,
        q,
        idempotent_coeffs: coeffs,
        multiplicities,
    })
}

/// Read the BGW back out of a scheme in the canonical construction order:
/// the blocks B_i sit in the top-right quadrant of A_{2,0}, grouped by
/// powers of the circulant. The reassembled matrix is certified by
/// `verify_bgw` (which re-derives the block equations).
pub fn extract_bgw(s: &AssociationScheme) -> Result<GroupMatrix, SchemeError> {
    let n = s.n as usize;
    let v = s.v;
    let x = s.size;
    if x != 2 * n * v || s.class_count() != 2 * n + 1 + usize::from(s.has_a3()) {
        return Err(SchemeError::NotCanonical(format!(
            "expected 2nv = {} points and {} classes",
            2 * n * v,
            2 * n + 1 + usize::from(s.has_a3())
        )));
    }
    let idx = |half: usize, block: usize, vertex: usize| half * n * v + block * v + vertex;

    // A_{0,i} must be diag(P^i ⊗ I_v, P^i ⊗ I_v)
    for i in 0..n {
        let a = &s.classes[i];
        for r in 0..x {
            let half = r / (n * v);
            let block = (r / v) % n;
            let vertex = r % v;
            let want = idx(half, (block + i) % n, vertex);
            for c in 0..x {
                if a.get(r, c) != i64::from(c == want) {
                    return Err(SchemeError::NotCanonical(format!(
                        "A0_{i} is not diag(P^{i} ⊗ I) at ({r},{c})"
                    )));
                }
            }
        }
    }
    // A_1 must be diag(J_n ⊗ (J_v - I_v))
    let a1 = &s.classes[s.a1_index()];
    for r in 0..x {
        let half = r / (n * v);
        let vertex = r % v;
        for c in 0..x {
            let same_half = c / (n * v) == half;
            let want = same_half && (c % v) != vertex;
            if a1.get(r, c) != i64::from(want) {
                return Err(SchemeError::NotCanonical(format!(
                    "A1 has the wrong support at ({r},{c})"
                )));
            }
        }
    }
    // blocks from the top-right quadrant of A_{2,0}: block column j holds B_j
    let a20 = &s.classes[s.a2_index(0)];
    let mut blocks = Vec::with_capacity(n);
    for j in 0..n {
        let mut b = IntMatrix::zeros(v, v);
        for r in 0..v {
            for c in 0..v {
                b.set(r, c, a20.get(idx(0, 0, r), idx(1, j, c)));
            }
        }
        blocks.push(b);
    }
    // the whole family A_{2,i} must be consistent with those blocks
    for i in 0..n {
        let a = &s.classes[s.a2_index(i)];
        for br in 0..n {
            for bc in 0..n {
                let j = (bc + n - br) % n;
                let top = &blocks[(i + j) % n];
                let bot = &blocks[(2 * n - i - j) % n];
                for r in 0..v {
                    for c in 0..v {
                        if a.get(idx(0, br, r), idx(1, bc, c)) != top.get(r, c) {
                            return Err(SchemeError::NotCanonical(format!(
                                "A2_{i} disagrees with the extracted blocks in the top-right \
                                 quadrant at block ({br},{bc})"
                            )));
                        }
                        if a.get(idx(1, br, r), idx(0, bc, c)) != bot.get(c, r) {
                            return Err(SchemeError::NotCanonical(format!(
                                "A2_{i} disagrees with the extracted blocks in the bottom-left \
                                 quadrant at block ({br},{bc})"
                            )));
                        }
                    }
                }
            }
        }
    }
    // reassemble W = Σ i B_i
    let mut w = GroupMatrix::zeros(v, v, s.n);
    for (e, b) in blocks.iter().enumerate() {
        for r in 0..v {
            for c in 0..v {
                if b.get(r, c) == 1 {
                    if !w.get(r, c).is_zero() {
                        return Err(SchemeError::NotCanonical(format!(
                            "blocks B_i overlap at ({r},{c})"
                        )));
                    }
                    w.set(r, c, GroupEntry::Exp(e as u32));
                }
            }
        }
    }
    let rep = verify_bgw(&w);
    if !rep.ok {
        return Err(SchemeError::VerificationFailed(format!(
            "extracted matrix is not a BGW: {:?}",
            rep.first_violation
        )));
    }
    Ok(w)
}
