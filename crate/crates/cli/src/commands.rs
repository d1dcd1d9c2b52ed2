use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use steiner_core::forms::{
    combine_with_gradient, degree_cofactors, sum_form, verify_euler_identity, verify_factorization,
    verify_not_divisible, verify_s3_decomposition,
};
use steiner_core::gp_matrix::{c_coefficients, distance_matrix, gl_inverse, graham_pollak_value, RatMatrix};
use steiner_core::hypermatrix::{ExportFormat, DEFAULT_ENTRY_BUDGET};
use steiner_core::nullspace::{canonical_odd_nullvector, numeric_search, verify_nullvector, NullvectorReport};
use steiner_core::rng::derive_seed;
use steiner_core::scalar::{rat, CycNum};
use steiner_core::smalldet::{det_order2, k2_nullvector_witness, verify_k2_no_nullvector};
use steiner_core::{Error, Hypermatrix, Tree, SCHEMA_VERSION};

pub const BUDGET_VAR: &str = "STEINER_MEM_BUDGET";

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    Lib(Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Lib(Error::BudgetExceeded { .. }) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    NoCertificate,
    VerificationFailed,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::NoCertificate => 3,
            Outcome::VerificationFailed => 4,
        }
    }
}

fn read_tree(path: &Path) -> Result<Tree, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Tree::parse(&text)?)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(v: &Value) {
    stdout(&(serde_json::to_string_pretty(v).expect("json") + "\n"));
}

fn budget() -> Result<u64, CliError> {
    match std::env::var(BUDGET_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_VAR}={s:?} is not an entry count"))),
        Err(_) => Ok(DEFAULT_ENTRY_BUDGET),
    }
}

pub fn gen(n: usize, seed: u64, out: Option<&Path>) -> Result<Outcome, CliError> {
    write_out(out, &Tree::random(n, seed).to_edge_list())?;
    Ok(Outcome::Ok)
}

pub fn hypermatrix(tree: &Path, k: usize, format: ExportFormat, out: Option<&Path>) -> Result<Outcome, CliError> {
    let t = read_tree(tree)?;
    let h = Hypermatrix::build_steiner_with_budget(&t, k, budget()?)?;
    let mut text = h.export(format);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_out(out, &text)?;
    Ok(Outcome::Ok)
}

fn report_value(kind: &str, r: &NullvectorReport) -> Value {
    let mut v = serde_json::to_value(r).expect("json");
    v["kind"] = json!(kind);
    v
}

fn report_table(r: &NullvectorReport) -> String {
    let mut s = format!("{:>6}  {:<28}  {}\n", "vertex", "y", "D p(y)");
    for (i, (y, g)) in r.point.iter().zip(&r.gradient).enumerate() {
        s += &format!("{:>6}  {:<28}  {}\n", i + 1, y.to_string(), g);
    }
    s + &format!("exact_zero = {}, residual = {:e}\n", r.exact_zero, r.embedded_residual)
}

/// The certificate for one `(tree, k)` with its outcome and a stderr table.
pub fn certificate(t: &Tree, k: usize) -> Result<(Value, Outcome, String), CliError> {
    if k < 2 {
        return Err(CliError::Usage(format!("order {k} must be at least 2")));
    }
    let n = t.n();
    let edges = t.to_edge_list();
    if n == 1 {
        let r = verify_nullvector(t, k, &[CycNum::one(1)])?;
        let ok = if r.exact_zero { Outcome::Ok } else { Outcome::VerificationFailed };
        let table = report_table(&r);
        return Ok((report_value("single_vertex", &r), ok, table));
    }
    if k == 2 {
        let det = det_order2(t)?;
        let predicted = graham_pollak_value(n);
        let ok = if det == predicted { Outcome::Ok } else { Outcome::VerificationFailed };
        let v = json!({
            "schema": SCHEMA_VERSION, "kind": "determinant", "tree": edges, "k": 2,
            "det": det.to_string(), "predicted": predicted.to_string(), "matches": det == predicted,
        });
        let table = format!("n = {n}: det = {det}, -(n-1)(-2)^(n-2) = {predicted}\n");
        return Ok((v, ok, table));
    }
    if n == 2 {
        let no_null = verify_k2_no_nullvector(k)?;
        let witness = match k2_nullvector_witness(k)? {
            Some(w) => Some(verify_nullvector(t, k, &w)?),
            None => None,
        };
        let ok = match (&witness, no_null) {
            (None, true) => Outcome::Ok,
            (Some(r), false) if r.exact_zero => Outcome::Ok,
            _ => Outcome::VerificationFailed,
        };
        let table = match &witness {
            Some(r) => format!("K2, k = {k}: (1+ζ)^(k-1) = 1 has a solution\n{}", report_table(r)),
            None => format!("K2, k = {k}: (1+ζ)^(k-1) ≠ 1 for every (k-1)-th root of unity\n"),
        };
        let v = json!({
            "schema": SCHEMA_VERSION, "kind": "two_vertex", "tree": edges, "k": k,
            "no_nullvector": no_null, "witness": witness.map(|r| serde_json::to_value(r).expect("json")),
        });
        return Ok((v, ok, table));
    }
    if k % 2 == 1 {
        let y = canonical_odd_nullvector(t, k)?;
        let r = verify_nullvector(t, k, &y)?;
        let ok = if r.exact_zero { Outcome::Ok } else { Outcome::VerificationFailed };
        let table = report_table(&r);
        return Ok((report_value("nullvector", &r), ok, table));
    }
    let v = json!({
        "schema": SCHEMA_VERSION, "kind": "none", "tree": edges, "k": k,
        "reason": "no certificate available; see search",
    });
    Ok((v, Outcome::NoCertificate, String::new()))
}

pub fn certify(tree: &Path, k: usize, verbose: bool) -> Result<Outcome, CliError> {
    let t = read_tree(tree)?;
    let (v, outcome, table) = certificate(&t, k)?;
    if verbose {
        eprint!("{table}");
    }
    if outcome == Outcome::NoCertificate {
        eprintln!("no certificate available; see search");
    }
    emit(&v);
    Ok(outcome)
}

fn ones(n: usize) -> Vec<steiner_core::Rat> {
    vec![rat(1, 1); n]
}

const IDENTITY_NAMES: [&str; 8] = [
    "p = s g",
    "sum_r x_r D_r p = 3 s g",
    "s^3 = sum_r f_r D_r p",
    "sum_r e_r D_r p = 3 s^3",
    "D_r p not divisible by s",
    "det D = -(n-1)(-2)^(n-2)",
    "D^-1 D = I",
    "c D = 1",
];

fn identity_rows(t: &Tree) -> Result<Vec<(&'static str, bool)>, CliError> {
    let n = t.n();
    let d = distance_matrix(t);
    let c = c_coefficients(t)?;
    let c_sum: steiner_core::Rat = c.iter().sum();
    let degree_image = combine_with_gradient(t, &degree_cofactors(t)?)?;
    let checks = [
        verify_factorization(t)?,
        verify_euler_identity(t)?,
        verify_s3_decomposition(t)?,
        degree_image == sum_form(n).pow(3).scale(&rat(3, 1)),
        verify_not_divisible(t)?,
        d.determinant_exact() == graham_pollak_value(n),
        gl_inverse(t)?.mul(&d)? == RatMatrix::identity(n),
        d.left_mul(&c)? == ones(n) && c_sum == rat(2, n as i64 - 1),
    ];
    Ok(IDENTITY_NAMES.into_iter().zip(checks).collect())
}

pub fn identities(tree: &Path, verbose: bool) -> Result<Outcome, CliError> {
    let t = read_tree(tree)?;
    let rows: Vec<Value> = if t.n() < 2 {
        IDENTITY_NAMES
            .iter()
            .map(|name| json!({"name": name, "status": "skipped", "reason": "needs at least 2 vertices"}))
            .collect()
    } else {
        identity_rows(&t)?
            .into_iter()
            .map(|(name, ok)| json!({"name": name, "status": if ok { "pass" } else { "fail" }}))
            .collect()
    };
    if verbose {
        for r in &rows {
            let note = r.get("reason").and_then(Value::as_str).unwrap_or("");
            eprintln!("{:<28} {:<8} {note}", r["name"].as_str().unwrap(), r["status"].as_str().unwrap());
        }
    }
    let failed = rows.iter().any(|r| r["status"] == "fail");
    emit(&json!({"schema": SCHEMA_VERSION, "kind": "identities", "tree": t.to_edge_list(), "rows": rows}));
    Ok(if failed { Outcome::VerificationFailed } else { Outcome::Ok })
}

pub fn search(
    tree: &Path,
    k: usize,
    seed: u64,
    restarts: usize,
    tol: f64,
    top: usize,
    verbose: bool,
) -> Result<Outcome, CliError> {
    let t = read_tree(tree)?;
    let found = numeric_search(&t, k, seed, restarts, tol)?;
    if verbose {
        eprintln!("{:>8}  {:>12}  converged", "restart", "residual");
        for c in found.iter().take(top.max(10)) {
            eprintln!("{:>8}  {:>12.3e}  {}", c.restart, c.residual, c.converged);
        }
    }
    let candidates: Vec<Value> = found
        .iter()
        .take(top)
        .map(|c| {
            let point: Vec<[String; 2]> = c.point.iter().map(|z| z.to_decimal_strings().into()).collect();
            json!({"restart": c.restart, "residual": c.residual, "converged": c.converged, "point": point})
        })
        .collect();
    emit(&json!({
        "schema": SCHEMA_VERSION, "kind": "search", "tree": t.to_edge_list(), "k": k, "seed": seed,
        "restarts": restarts, "tol": tol,
        "best_residual": found.first().map(|c| c.residual),
        "converged": found.iter().filter(|c| c.converged).count(),
        "residuals": found.iter().map(|c| c.residual).collect::<Vec<_>>(),
        "candidates": candidates,
    }));
    Ok(Outcome::Ok)
}

fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad n-range {s:?}; expected `a-b` or `a`"));
    let (a, b) = match s.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Tree `i` on `n` vertices uses the seed `derive_seed(seed, n << 32 | i)`.
pub fn campaign_tree_seed(seed: u64, n: usize, i: usize) -> u64 {
    derive_seed(seed, ((n as u64) << 32) | i as u64)
}

pub fn campaign(
    n_range: &str,
    ks: &[usize],
    trees_per_n: usize,
    seed: u64,
    out: &Path,
    verbose: bool,
) -> Result<Outcome, CliError> {
    if ks.is_empty() {
        return Err(CliError::Usage("empty k-list".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k < 2) {
        return Err(CliError::Usage(format!("order {k} must be at least 2")));
    }
    let (lo, hi) = parse_range(n_range)?;
    let cases_dir = out.join("cases");
    fs::create_dir_all(&cases_dir).map_err(|e| CliError::Io(format!("{}: {e}", cases_dir.display())))?;
    let jobs: Vec<(usize, usize, usize)> =
        (lo..=hi).flat_map(|n| (0..trees_per_n).flat_map(move |i| ks.iter().map(move |&k| (n, i, k)))).collect();
    let results = jobs
        .par_iter()
        .map(|&(n, i, k)| {
            let tree_seed = campaign_tree_seed(seed, n, i);
            let t = Tree::random(n, tree_seed);
            let (v, outcome, _) = certificate(&t, k)?;
            let file = format!("n{n}_t{i}_k{k}.json");
            let path = cases_dir.join(&file);
            fs::write(&path, serde_json::to_string_pretty(&v).expect("json") + "\n")
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let status = match outcome {
                Outcome::Ok => "verified",
                Outcome::NoCertificate => "no_certificate",
                Outcome::VerificationFailed => "failed",
            };
            let mut entry = json!({
                "n": n, "tree_index": i, "tree_seed": tree_seed, "k": k,
                "kind": v["kind"], "status": status, "file": format!("cases/{file}"),
            });
            for key in ["exact_zero", "det", "predicted"] {
                if let Some(x) = v.get(key) {
                    entry[key] = x.clone();
                }
            }
            Ok((entry, outcome))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let count = |o: Outcome| results.iter().filter(|(_, x)| *x == o).count();
    let (verified, missing, failed) = (count(Outcome::Ok), count(Outcome::NoCertificate), count(Outcome::VerificationFailed));
    if verbose {
        eprintln!("{:>3} {:>5} {:>3}  {:<14} {}", "n", "tree", "k", "status", "detail");
        for (e, _) in &results {
            let detail = match (e.get("det"), e.get("exact_zero")) {
                (Some(d), _) => format!("det {} predicted {}", d.as_str().unwrap(), e["predicted"].as_str().unwrap()),
                (_, Some(z)) => format!("exact_zero {z}"),
                _ => String::new(),
            };
            eprintln!("{:>3} {:>5} {:>3}  {:<14} {detail}", e["n"], e["tree_index"], e["k"], e["status"].as_str().unwrap());
        }
    }
    let entries: Vec<Value> = results.into_iter().map(|(e, _)| e).collect();
    let summary = json!({
        "schema": SCHEMA_VERSION, "kind": "campaign", "seed": seed, "n_range": [lo, hi], "k": ks,
        "trees_per_n": trees_per_n, "cases": entries.len(), "verified": verified,
        "no_certificate": missing, "failed": failed, "entries": entries,
    });
    let text = serde_json::to_string_pretty(&summary).expect("json") + "\n";
    let path = out.join("summary.json");
    fs::write(&path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    stdout(&text);
    Ok(if failed > 0 {
        Outcome::VerificationFailed
    } else if verified == 0 && missing > 0 {
        Outcome::NoCertificate
    } else {
        Outcome::Ok
    })
}
