//! `bgw`: construct and verify weighing matrices, balanced generalized
//! weighing matrices, symmetric designs, orthogonal arrays, and the
//! association schemes of BGWs.
//!
//! Every `construct` invocation writes the matrix file(s) plus a JSON run
//! report on stdout; the exit code is 0 only when the output re-verifies.
//! Precondition failures exit 2 with the error name on stderr; verification
//! failures exit 3.

mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use bgw_core::construct::{
    expand_bgw, expand_design, expand_weighing, table1, ConstructError, Ingredient, TargetStatus,
};
use bgw_core::matrix::IntMatrix;
use bgw_core::oa::{oa_build, verify_oa};
use bgw_core::scheme::{eigenmatrices, scheme_from_bgw, verify_scheme, SchemeError};
use bgw_core::seeds::{catalog, catalog_names, SeedError};
use bgw_core::textfmt::{parse_matrix, write_matrix, FormatError, MatrixKind, MatrixPayload};
use bgw_core::verify::{verify_bgw, verify_bibd, verify_weighing, VerifyReport};

use report::{sha256_hex, InputRef, OutputRef, RunReport};

#[derive(Parser)]
#[command(
    name = "bgw",
    version,
    about = "Weighing matrices, balanced generalized weighing matrices, symmetric designs, \
             orthogonal arrays, and their association schemes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a matrix, write it to disk, and emit a run report
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Verify a matrix file and print the verifier report
    Verify {
        path: PathBuf,
        /// File kind; defaults to the file's `# kind=` header
        #[arg(long)]
        kind: Option<String>,
    },
    /// Build the orthogonal array for a prime power p and exponent m
    Oa {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate consequential order/weight pairs up to a maximum order
    Table1 {
        #[arg(long, default_value_t = 1000)]
        max: usize,
        /// Write the full JSON report here (stdout shows the table)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or show the embedded reference matrices
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Expand a seed weighing matrix: W(n,p) -> W(t(n-1)+1, p^{m+1})
    Weighing {
        /// Catalog name or file path of the seed W(n,p)
        #[arg(long)]
        seed: String,
        /// Expected seed weight (checked against the measured weight)
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: u32,
        /// Catalog name, file path, or `auto`
        #[arg(long, default_value = "auto")]
        ingredient: String,
        /// Symbol assignment for the substitution, e.g. `4,3,2,1,0`
        #[arg(long)]
        perm: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct the classical BGW((p^{m+1}-1)/(p-1), p^m, p^{m-1}(p-1); Z_k)
    Bgw {
        #[arg(long)]
        p: u64,
        /// Cyclic group order k (must divide p-1)
        #[arg(long)]
        group: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand the Paley design seeds to a symmetric design
    Design {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        perm: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the association scheme of a BGW and its eigenmatrices
    Scheme {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        group: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Catalog name or file path of a BGW (alternative to --p/--group/--m)
        #[arg(long)]
        seed: Option<String>,
        /// Output prefix for the class matrices and eigen data
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show { name: String },
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn precondition(message: String) -> Self {
        CliError { code: 2, message }
    }

    fn verification(message: String) -> Self {
        CliError { code: 3, message }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::VerificationFailed(_) => CliError::verification(e.to_string()),
            ConstructError::Seed(SeedError::VerificationFailed(_)) => {
                CliError::verification(e.to_string())
            }
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl From<SeedError> for CliError {
    fn from(e: SeedError) -> Self {
        match e {
            SeedError::VerificationFailed(_) => CliError::verification(e.to_string()),
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::VerificationFailed(_)
            | SchemeError::AxiomViolation { .. }
            | SchemeError::EigenMismatch { .. } => CliError::verification(e.to_string()),
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::precondition(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::precondition(format!("io: {e}"))
    }
}

fn main() {
    let cli = Cli::parse();
    let command_line: String = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(cli, command_line) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn parse_perm(perm: &Option<String>) -> Result<Option<Vec<usize>>, CliError> {
    match perm {
        None => Ok(None),
        Some(s) => {
            let v: Result<Vec<usize>, _> = s.split(',').map(|t| t.trim().parse()).collect();
            v.map(Some)
                .map_err(|_| CliError::precondition(format!("InvalidParam: bad --perm `{s}`")))
        }
    }
}

/// Resolve a `--seed`/`--ingredient` argument: catalog name first, file
/// path second.
fn resolve_payload(arg: &str, kind: MatrixKind) -> Result<(MatrixPayload, InputRef), CliError> {
    if catalog_names().contains(&arg) {
        let entry = catalog(arg)?;
        if entry.kind() != kind {
            return Err(CliError::precondition(format!(
                "KindMismatch: catalog entry {arg} is a {}, expected {}",
                entry.kind().as_str(),
                kind.as_str()
            )));
        }
        let text = write_matrix(&entry.payload, Some(arg));
        Ok((
            entry.payload,
            InputRef {
                name: arg.to_string(),
                sha256: sha256_hex(text.as_bytes()),
            },
        ))
    } else {
        let text = std::fs::read_to_string(arg)?;
        let file = parse_matrix(&text, Some(kind))?;
        Ok((
            file.payload,
            InputRef {
                name: arg.to_string(),
                sha256: sha256_hex(text.as_bytes()),
            },
        ))
    }
}

fn write_output(
    payload: &MatrixPayload,
    out: Option<PathBuf>,
    default_name: String,
) -> Result<OutputRef, CliError> {
    let path = out.unwrap_or_else(|| PathBuf::from(default_name));
    let text = write_matrix(payload, None);
    std::fs::write(&path, &text)?;
    Ok(OutputRef {
        path: path.display().to_string(),
        kind: payload.kind().as_str().to_string(),
        sha256: sha256_hex(text.as_bytes()),
    })
}

fn emit(report: &RunReport) -> Result<(), CliError> {
    println!(
        "{}",
        serde_json::to_string_pretty(report)
            .map_err(|e| CliError::precondition(format!("report: {e}")))?
    );
    Ok(())
}

fn run(cli: Cli, command_line: String) -> Result<(), CliError> {
    let start = Instant::now();
    match cli.cmd {
        Command::Construct(cmd) => run_construct(cmd, command_line, start),
        Command::Verify { path, kind } => run_verify(&path, kind),
        Command::Oa { p, m, out } => {
            let o = oa_build(p, m).map_err(|e| CliError::precondition(e.to_string()))?;
            let rep = verify_oa(&o);
            if !rep.ok {
                return Err(CliError::verification(format!(
                    "VerificationFailed: {:?}",
                    rep.violation
                )));
            }
            let mut report = RunReport::new(command_line);
            let payload = MatrixPayload::Oa(o);
            let out_ref = write_output(&payload, out, format!("OA_p{p}_m{m}.txt"))?;
            report.outputs.push(out_ref);
            let MatrixPayload::Oa(o) = &payload else {
                unreachable!()
            };
            report.measured.insert("rows".into(), o.rows() as i64);
            report.measured.insert("cols".into(), o.cols() as i64);
            report
                .measured
                .insert("agreement".into(), rep.agreement.unwrap() as i64);
            report.elapsed_ms = start.elapsed().as_millis();
            emit(&report)
        }
        Command::Table1 { max, out } => {
            let rows = table1(max);
            for row in &rows {
                let targets: Vec<String> = row
                    .targets
                    .iter()
                    .map(|t| {
                        let status = match &t.status {
                            TargetStatus::Verified => "verified".to_string(),
                            TargetStatus::FormulaOnly { .. } => "formula-only".to_string(),
                            TargetStatus::Failed { .. } => "failed".to_string(),
                        };
                        format!("({},{}) {status}", t.order, t.weight)
                    })
                    .collect();
                println!(
                    "({},{}) -> {}",
                    row.seed_order,
                    row.seed_weight,
                    targets.join(", ")
                );
            }
            if let Some(path) = out {
                let mut report = RunReport::new(command_line);
                report.extra = Some(
                    serde_json::to_value(&rows)
                        .map_err(|e| CliError::precondition(format!("report: {e}")))?,
                );
                report
                    .measured
                    .insert("max_order".into(), max as i64);
                report.measured.insert("rows".into(), rows.len() as i64);
                report.elapsed_ms = start.elapsed().as_millis();
                let text = serde_json::to_string_pretty(&report)
                    .map_err(|e| CliError::precondition(format!("report: {e}")))?;
                std::fs::write(path, text)?;
            }
            Ok(())
        }
        Command::Catalog(CatalogCmd::List) => {
            for name in catalog_names() {
                let entry = catalog(name)?;
                let params: Vec<String> = entry
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                println!("{name} [{}] {}", entry.kind().as_str(), params.join(" "));
            }
            Ok(())
        }
        Command::Catalog(CatalogCmd::Show { name }) => {
            let entry = catalog(&name)?;
            print!("{}", write_matrix(&entry.payload, Some(&name)));
            Ok(())
        }
    }
}

fn run_construct(
    cmd: ConstructCmd,
    command_line: String,
    start: Instant,
) -> Result<(), CliError> {
    let mut report = RunReport::new(command_line);
    match cmd {
        ConstructCmd::Weighing {
            seed,
            p,
            m,
            ingredient,
            perm,
            out,
        } => {
            let (seed_payload, seed_ref) = resolve_payload(&seed, MatrixKind::Weighing)?;
            report.inputs.push(seed_ref);
            let MatrixPayload::Weighing(seed_matrix) = seed_payload else {
                unreachable!()
            };
            if let Some(expect) = p {
                let rep = verify_weighing(&seed_matrix);
                if rep.param("p") != Some(expect as i64) {
                    return Err(CliError::precondition(format!(
                        "IngredientMismatch: seed weight is {:?}, --p says {expect}",
                        rep.param("p")
                    )));
                }
            }
            let ing = if ingredient == "auto" {
                Ingredient::Auto
            } else {
                let (payload, ing_ref) = resolve_payload(&ingredient, MatrixKind::Weighing)?;
                report.inputs.push(ing_ref);
                let MatrixPayload::Weighing(w) = payload else {
                    unreachable!()
                };
                Ingredient::Supplied(w)
            };
            let perm = parse_perm(&perm)?;
            let x = expand_weighing(&seed_matrix, m, ing, perm.as_deref())?;
            let rep = verify_weighing(&x);
            report.measured = rep.params.clone();
            let (n, pw) = (rep.param("n").unwrap(), rep.param("p").unwrap());
            let out_ref = write_output(
                &MatrixPayload::Weighing(x),
                out,
                format!("W{n}_{pw}.txt"),
            )?;
            report.outputs.push(out_ref);
        }
        ConstructCmd::Bgw { p, group, m, out } => {
            let w = expand_bgw(p, group, m)?;
            let rep = verify_bgw(&w);
            report.measured = rep.params.clone();
            let (v, k, lam, n) = (
                rep.param("v").unwrap(),
                rep.param("k").unwrap(),
                rep.param("lambda").unwrap(),
                rep.param("n").unwrap(),
            );
            let out_ref = write_output(
                &MatrixPayload::Bgw(w),
                out,
                format!("BGW{v}_{k}_{lam}_Z{n}.txt"),
            )?;
            report.outputs.push(out_ref);
        }
        ConstructCmd::Design { p, m, perm, out } => {
            let perm = parse_perm(&perm)?;
            let n = expand_design(p, m, perm.as_deref())?;
            let rep = bgw_core::verify::verify_symmetric_design(&n);
            report.measured = rep.params.clone();
            let (v, k, lam) = (
                rep.param("v").unwrap(),
                rep.param("k").unwrap(),
                rep.param("lambda").unwrap(),
            );
            let out_ref = write_output(
                &MatrixPayload::Design(n),
                out,
                format!("SBIBD{v}_{k}_{lam}.txt"),
            )?;
            report.outputs.push(out_ref);
        }
        ConstructCmd::Scheme {
            p,
            group,
            m,
            seed,
            out,
        } => {
            let w = match (seed, p, group, m) {
                (Some(name), None, None, None) => {
                    let (payload, seed_ref) = resolve_payload(&name, MatrixKind::Bgw)?;
                    report.inputs.push(seed_ref);
                    let MatrixPayload::Bgw(w) = payload else {
                        unreachable!()
                    };
                    w
                }
                (None, Some(p), Some(group), Some(m)) => expand_bgw(p, group, m)?,
                _ => {
                    return Err(CliError::precondition(
                        "InvalidParam: pass either --seed or all of --p/--group/--m".into(),
                    ))
                }
            };
            let s = scheme_from_bgw(&w)?;
            let srep = verify_scheme(&s);
            if !srep.ok {
                return Err(CliError::verification(format!(
                    "VerificationFailed: scheme axioms: {:?}",
                    srep.violation
                )));
            }
            let e = eigenmatrices(&s)?;
            let prefix = out.unwrap_or_else(|| format!("scheme{}_Z{}", s.size, s.n));
            for (idx, class) in s.classes.iter().enumerate() {
                let rows: Vec<Vec<i64>> =
                    (0..class.rows()).map(|r| class.row(r).to_vec()).collect();
                let payload = MatrixPayload::Design(IntMatrix::from_rows(rows).unwrap());
                let path = PathBuf::from(format!("{prefix}_{}.txt", s.class_names[idx]));
                let text = write_matrix(&payload, Some(&s.class_names[idx]));
                std::fs::write(&path, &text)?;
                report.outputs.push(OutputRef {
                    path: path.display().to_string(),
                    kind: "scheme-class".to_string(),
                    sha256: sha256_hex(text.as_bytes()),
                });
            }
            let cplx = |z: &bgw_core::Complex64| serde_json::json!([z.re, z.im]);
            let mat = |m: &Vec<Vec<bgw_core::Complex64>>| {
                serde_json::Value::Array(
                    m.iter()
                        .map(|row| serde_json::Value::Array(row.iter().map(cplx).collect()))
                        .collect(),
                )
            };
            let eigen = serde_json::json!({
                "classes": e.class_names,
                "idempotents": e.idempotent_names,
                "P": mat(&e.p),
                "Q": mat(&e.q),
                "idempotent_coefficients": mat(&e.idempotent_coeffs),
                "multiplicities": e.multiplicities,
                "symmetric": srep.symmetric,
            });
            let eigen_path = PathBuf::from(format!("{prefix}_eigen.json"));
            let eigen_text = serde_json::to_string_pretty(&eigen)
                .map_err(|er| CliError::precondition(format!("report: {er}")))?;
            std::fs::write(&eigen_path, &eigen_text)?;
            report.outputs.push(OutputRef {
                path: eigen_path.display().to_string(),
                kind: "eigen".to_string(),
                sha256: sha256_hex(eigen_text.as_bytes()),
            });
            report.measured.insert("size".into(), s.size as i64);
            report
                .measured
                .insert("classes".into(), s.class_count() as i64);
            report.measured.insert("n".into(), s.n as i64);
            report.measured.insert("v".into(), s.v as i64);
            report.measured.insert("k".into(), s.k as i64);
            report.measured.insert("lambda".into(), s.lambda as i64);
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    emit(&report)
}

fn run_verify(path: &Path, kind: Option<String>) -> Result<(), CliError> {
    let kind = match kind {
        None => None,
        Some(s) => Some(MatrixKind::parse(&s).ok_or_else(|| {
            CliError::precondition(format!("InvalidParam: unknown kind `{s}`"))
        })?),
    };
    let text = std::fs::read_to_string(path)?;
    let file = parse_matrix(&text, kind)?;
    let (ok, json) = match &file.payload {
        MatrixPayload::Weighing(w) => report_json(&verify_weighing(w)),
        MatrixPayload::Design(m) => report_json(&verify_bibd(m)),
        MatrixPayload::Bgw(w) => report_json(&verify_bgw(w)),
        MatrixPayload::Oa(o) => {
            let rep = verify_oa(o);
            let mut measured = BTreeMap::new();
            measured.insert("rows".to_string(), o.rows() as i64);
            measured.insert("cols".to_string(), o.cols() as i64);
            if let Some(a) = rep.agreement {
                measured.insert("agreement".to_string(), a as i64);
            }
            (
                rep.ok,
                serde_json::json!({
                    "kind": "oa",
                    "ok": rep.ok,
                    "params": measured,
                    "first_violation": rep.violation.map(|v| format!("{v:?}")),
                }),
            )
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json)
            .map_err(|e| CliError::precondition(format!("report: {e}")))?
    );
    if ok {
        Ok(())
    } else {
        Err(CliError::verification(
            "VerificationFailed: see report".into(),
        ))
    }
}

fn report_json(rep: &VerifyReport) -> (bool, serde_json::Value) {
    (rep.ok, serde_json::to_value(rep).unwrap())
}
