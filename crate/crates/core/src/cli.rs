//! Command-line front end. `run` returns the rendered report and an exit
//! status: 0 when every check passes, 1 on a failed verification, 2 on an
//! invalid configuration.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::diffring::{DiffRing, XPoly};
use crate::equations::normal_form;
use crate::error::Error;
use crate::generators;
use crate::jetfield::{is_symmetry, JetPoly, VectorField};
use crate::liealg::{self, LieAlgebraPresentation};
use crate::numflow::{numcheck, NumcheckConfig};
use crate::variational::{self, Classification};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "LIEODE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "lieode", version, about = "Symmetry algebras of linear ODE systems in normal form")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Shape {
    /// Order of the system.
    #[arg(long)]
    pub n: usize,
    /// Number of dependent variables.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// `abstract`, or a polynomial in x such as `1 - x^2/2`.
    #[arg(long, default_value = "abstract")]
    pub q: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the normal-form coefficients A[2..n].
    NormalForm(Shape),
    /// List the symmetry generators and check each one.
    Basis(Shape),
    /// Structure constants and the commutation-table check.
    Table(Shape),
    /// Levi decomposition certificate, gl_m check and sl_2 weights.
    Levi(Shape),
    /// Variational and divergence classification (even n).
    Classify(Shape),
    /// Order-two certificate including the non-Cartan generators.
    SecondOrder {
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Numerical flow cross-check.
    Numcheck(NumcheckArgs),
    /// Run every check over a grid of orders and dimensions.
    All {
        /// Largest order checked.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Largest number of dependent variables checked.
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        /// Allow max-n above 6 or max-m above 4.
        #[arg(long)]
        no_cap: bool,
        /// Skip the numerical flow checks.
        #[arg(long)]
        skip_numeric: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct NumcheckArgs {
    /// Order of the system.
    #[arg(long)]
    pub n: usize,
    /// Number of dependent variables.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Potential q(x); repeat for several.
    #[arg(long = "q", default_values_t = ["0".to_string(), "1".to_string(), "x".to_string()])]
    pub qs: Vec<String>,
    /// Group parameters, comma separated.
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-0.5, -0.1, 0.1, 0.5])]
    pub ts: Vec<f64>,
    /// Residual acceptance threshold.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Integrator relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Number of sample points on [0, 1].
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
}

/// A finished command: rendered text and JSON plus the verdict.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Report {
    fn new(text: String, json: Value, pass: bool, witness: Option<String>) -> Self {
        Report { text, json, pass, witness }
    }
}

/// Either a report or an error with its exit status.
pub enum Outcome {
    Done(Report),
    Invalid(String),
}

fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::InvalidOrder(..) | Error::InvalidDimension(_) | Error::InvalidLabel { .. } | Error::Parse(_))
}

fn ring_for(q: &str) -> Result<(DiffRing, String), Error> {
    if q.trim() == "abstract" {
        Ok((DiffRing::abstract_q(), "abstract".into()))
    } else {
        let p = XPoly::parse(q)?;
        let name = p.to_string();
        Ok((DiffRing::polynomial_q(p), name))
    }
}

fn check_shape(n: usize, m: usize) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::InvalidOrder(n, 2));
    }
    if m < 1 {
        return Err(Error::InvalidDimension(m));
    }
    Ok(())
}

fn checks_text(out: &mut String, checks: &[liealg::Check]) {
    for c in checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = writeln!(out, "  [{mark}] {}", c.name);
        } else {
            let _ = writeln!(out, "  [{mark}] {} ({})", c.name, c.detail);
        }
    }
}

fn first_failed(checks: &[liealg::Check]) -> Option<String> {
    checks.iter().find(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail))
}

fn normal_form_cmd(s: &Shape) -> Result<Report, Error> {
    check_shape(s.n, s.m)?;
    let (ring, qname) = ring_for(&s.q)?;
    let sys = normal_form(&ring, s.n, s.m)?;
    let mut text = format!("normal form n = {}, m = {}, q = {qname}\n", s.n, s.m);
    let mut coeffs = serde_json::Map::new();
    for j in 2..=s.n {
        let _ = writeln!(text, "  A[{j}] = {}", sys.a(j));
        coeffs.insert(format!("A{j}"), Value::String(sys.a(j).to_string()));
    }
    let json =
        json!({ "command": "normal-form", "n": s.n, "m": s.m, "q": qname, "coefficients": coeffs, "pass": true });
    Ok(Report::new(text, json, true, None))
}

fn basis_cmd(s: &Shape) -> Result<Report, Error> {
    check_shape(s.n, s.m)?;
    let (ring, qname) = ring_for(&s.q)?;
    let sys = normal_form(&ring, s.n, s.m)?;
    let gens = generators::basis(s.n, s.m)?;
    let verdicts: Vec<bool> = {
        use rayon::prelude::*;
        gens.par_iter()
            .map(|g| is_symmetry(&ring, &g.field.specialize(&ring), &sys).map(|v| v.verdict))
            .collect::<Result<_, _>>()?
    };
    let mut control_phi = vec![JetPoly::zero(s.m); s.m];
    control_phi[0] = JetPoly::var(s.m, 0, 0).scale(&crate::diffring::CoeffPoly::x());
    let control = VectorField::new_unchecked("x*y1*d/dy1", JetPoly::zero(s.m), control_phi);
    let control_rejected = !is_symmetry(&ring, &control, &sys)?.verdict;
    let mut text = format!(
        "basis n = {}, m = {}, q = {qname}: {} generators (expected {})\n",
        s.n,
        s.m,
        gens.len(),
        generators::expected_dimension(s.n, s.m)
    );
    let mut items = Vec::new();
    for (g, ok) in gens.iter().zip(&verdicts) {
        let _ = writeln!(
            text,
            "  {:<8} {}  [{}]",
            g.label.to_string(),
            g.field,
            if *ok { "symmetry" } else { "NOT a symmetry" }
        );
        items.push(json!({ "label": g.label.to_string(), "field": g.field.to_string(), "symmetry": ok }));
    }
    let _ = writeln!(text, "  negative control x*y1*d/dy1 rejected: {control_rejected}");
    let dim_ok = gens.len() == generators::expected_dimension(s.n, s.m);
    let pass = verdicts.iter().all(|v| *v) && control_rejected && dim_ok;
    let witness = gens
        .iter()
        .zip(&verdicts)
        .find(|(_, ok)| !**ok)
        .map(|(g, _)| format!("{} is not a symmetry", g.label))
        .or_else(|| (!control_rejected).then(|| "negative control accepted".to_string()));
    let json = json!({
        "command": "basis", "n": s.n, "m": s.m, "q": qname,
        "dimension": gens.len(), "expected_dimension": generators::expected_dimension(s.n, s.m),
        "generators": items, "negative_control_rejected": control_rejected, "pass": pass,
    });
    Ok(Report::new(text, json, pass, witness))
}

fn presentation_for(s: &Shape) -> Result<(DiffRing, String, LieAlgebraPresentation), Error> {
    check_shape(s.n, s.m)?;
    let (ring, qname) = ring_for(&s.q)?;
    let pres = liealg::presentation(&ring, s.n, s.m)?;
    Ok((ring, qname, pres))
}

fn table_cmd(s: &Shape) -> Result<Report, Error> {
    let (_, qname, pres) = presentation_for(s)?;
    let check = liealg::verify_commutation_table(&pres, s.n, s.m);
    let jacobi = pres.jacobi_violation();
    let pass = check.pass && jacobi.is_none();
    let mut text = format!("structure constants n = {}, m = {}, q = {qname}, dim {}\n", s.n, s.m, pres.dim());
    text.push_str(&pres.table_text());
    let _ = writeln!(
        text,
        "commutation table: {} ({} entries checked)",
        if check.pass { "pass" } else { "FAIL" },
        check.entries_checked
    );
    let _ = writeln!(text, "Jacobi identity: {}", if jacobi.is_none() { "pass" } else { "FAIL" });
    let witness = check.first_mismatch.clone().or_else(|| {
        jacobi.map(|(i, j, k)| format!("Jacobi fails on ({}, {}, {})", pres.basis[i], pres.basis[j], pres.basis[k]))
    });
    let p = pres.to_json();
    let json = json!({
        "command": "table", "n": s.n, "m": s.m, "q": qname,
        "basis": p["basis"], "brackets": p["brackets"],
        "verification": check, "jacobi": jacobi.is_none(), "pass": pass,
    });
    Ok(Report::new(text, json, pass, witness))
}

fn levi_cmd(s: &Shape) -> Result<Report, Error> {
    if s.n < 3 {
        return Err(Error::InvalidOrder(s.n, 3));
    }
    let (_, qname, pres) = presentation_for(s)?;
    let levi = liealg::certify_levi(&pres, s.n, s.m);
    let gl = liealg::check_gl_isomorphism(&pres, s.m);
    let weights = liealg::representation_weights(&pres, s.n, s.m);
    let pass = levi.pass && gl && weights.pass;
    let mut text = format!(
        "Levi decomposition n = {}, m = {}, q = {qname}: dim {}, radical {}, Levi factor {} (g_F {} + s_H {})\n",
        s.n, s.m, levi.dim, levi.radical_dim, levi.levi_factor_dim, levi.g_f_dim, levi.s_h_dim
    );
    checks_text(&mut text, &levi.checks);
    let _ = writeln!(text, "  [{}] g_H isomorphic to gl_m via H_ij -> e_ij", if gl { "ok  " } else { "FAIL" });
    let _ = writeln!(
        text,
        "  [{}] sl_2 weights on g_Sj: [{}], raising [{}], lowering [{}]",
        if weights.pass { "ok  " } else { "FAIL" },
        weights.weights.join(", "),
        weights.raising.join(", "),
        weights.lowering.join(", ")
    );
    let witness = first_failed(&levi.checks)
        .or_else(|| (!gl).then(|| "g_H does not match gl_m".to_string()))
        .or_else(|| weights.detail.clone());
    let json =
        json!({ "command": "levi", "q": qname, "levi": levi, "gl_isomorphism": gl, "weights": weights, "pass": pass });
    Ok(Report::new(text, json, pass, witness))
}

fn classify_cmd(s: &Shape) -> Result<Report, Error> {
    check_shape(s.n, s.m)?;
    let (ring, qname) = ring_for(&s.q)?;
    let c = variational::classify_algebra(&ring, s.n, s.m)?;
    let mut json = serde_json::to_value(&c).expect("classification serializes");
    json["command"] = json!("classify");
    json["q"] = json!(qname);
    match c {
        Classification::NotLagrangian(nl) => {
            json["pass"] = json!(true);
            let text = format!("n = {} is odd: no standard Lagrangian at this order\n", nl.n);
            Ok(Report::new(text, json, true, None))
        }
        Classification::Lagrangian(rep) => {
            json["pass"] = json!(rep.pass);
            let mut text = format!("classification n = {}, m = {}, q = {qname}\n", rep.n, rep.m);
            for g in &rep.generators {
                let class = match g.class {
                    variational::SymmetryClass::Variational => "variational",
                    variational::SymmetryClass::Divergence => "divergence",
                    variational::SymmetryClass::None => "none",
                };
                let _ = writeln!(text, "  {:<8} S=0: {:<5} D=0: {:<5} {class}", g.generator, g.s_zero, g.d_zero);
            }
            let _ = writeln!(
                text,
                "  dim S_div = {} (formula {}), dim S_var = {} (formula {})",
                rep.dim_div, rep.expected_dim_div, rep.dim_var, rep.expected_dim_var
            );
            checks_text(&mut text, &rep.checks);
            Ok(Report::new(text, json, rep.pass, first_failed(&rep.checks)))
        }
    }
}

fn second_order_cmd(m: usize) -> Result<Report, Error> {
    check_shape(2, m)?;
    let ring = DiffRing::abstract_q();
    let pres = liealg::presentation(&ring, 2, m)?;
    let cert = liealg::certify_second_order(&pres, m);
    let sys = normal_form(&ring, 2, m)?;
    let mut sym_checks = Vec::new();
    for g in generators::basis(2, m)? {
        if matches!(g.label, generators::GeneratorLabel::C(..)) {
            let ok = is_symmetry(&ring, &g.field, &sys)?.verdict;
            sym_checks.push(liealg::Check::new(&format!("{} is a symmetry", g.label), ok, ""));
        }
    }
    let nc = variational::noncartan_exclusion(&ring, m)?;
    let mut text = format!("second order m = {m}: dim {}, Killing rank {}\n", cert.dim, cert.killing_rank);
    checks_text(&mut text, &cert.checks);
    checks_text(&mut text, &sym_checks);
    for (label, nonzero) in &nc.cases {
        let _ = writeln!(text, "  [{}] D({label}) != 0", if *nonzero { "ok  " } else { "FAIL" });
    }
    let _ = writeln!(text, "  note: {}", cert.note);
    let pass = cert.pass && nc.pass && sym_checks.iter().all(|c| c.pass);
    let witness = first_failed(&cert.checks)
        .or_else(|| first_failed(&sym_checks))
        .or_else(|| nc.cases.iter().find(|(_, nz)| !nz).map(|(l, _)| format!("D({l}) vanishes")));
    let json = json!({
        "command": "second-order", "m": m, "certificate": cert, "non_cartan_symmetries": sym_checks,
        "non_cartan_exclusion": nc, "pass": pass,
    });
    Ok(Report::new(text, json, pass, witness))
}

fn numcheck_cmd(a: &NumcheckArgs) -> Result<Report, Error> {
    check_shape(a.n, a.m)?;
    let positive = |x: f64| x > 0.0;
    if a.grid == 0 || !positive(a.tol) || !positive(a.rtol) {
        return Err(Error::Parse("grid, tol and rtol must be positive".into()));
    }
    let qs = a.qs.iter().map(|q| XPoly::parse(q)).collect::<Result<Vec<_>, _>>()?;
    let mut cfg = NumcheckConfig::new(a.n, a.m, qs);
    cfg.ts = a.ts.clone();
    cfg.tol = a.tol;
    cfg.rtol = a.rtol;
    cfg.grid = a.grid;
    let rep = numcheck(&cfg)?;
    let mut text = format!("numeric flow check n = {}, m = {}, tol {:e}\n", a.n, a.m, a.tol);
    for r in &rep.rows {
        let res = r.residual.map_or_else(|| r.error.clone().unwrap_or_default(), |x| format!("{x:.3e}"));
        let kind = if r.negative_control { " (control, must exceed threshold)" } else { "" };
        let _ = writeln!(
            text,
            "  [{}] q = {:<6} {:<12} t = {:>5}  residual {res}{kind}",
            if r.pass { "ok  " } else { "FAIL" },
            r.q,
            r.generator,
            r.t
        );
    }
    for d in &rep.drift {
        let _ = writeln!(
            text,
            "  [{}] q = {:<6} Wronskian drift {:.3e}{}",
            if d.pass { "ok  " } else { "FAIL" },
            d.q,
            d.wronskian_drift,
            if d.enlarged { " (interval enlarged)" } else { "" }
        );
    }
    let _ = writeln!(
        text,
        "  max symmetry residual {:.3e}, min control residual {:.3e}",
        rep.max_symmetry_residual, rep.min_control_residual
    );
    let witness = rep
        .rows
        .iter()
        .find(|r| !r.pass)
        .map(|r| {
            format!(
                "{} at q = {}, t = {}: {:?} {}",
                r.generator,
                r.q,
                r.t,
                r.residual,
                r.error.clone().unwrap_or_default()
            )
        })
        .or_else(|| {
            rep.drift
                .iter()
                .find(|d| !d.pass)
                .map(|d| format!("Wronskian drift {:e} for q = {}", d.wronskian_drift, d.q))
        });
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["command"] = json!("numcheck");
    Ok(Report::new(text, json, rep.pass, witness))
}

fn all_cmd(max_n: usize, max_m: usize, no_cap: bool, skip_numeric: bool) -> Result<Report, Error> {
    if !no_cap && (max_n > 6 || max_m > 4) {
        return Err(Error::Parse(format!(
            "`all` is capped at n <= 6, m <= 4 (got {max_n}, {max_m}); pass --no-cap to override"
        )));
    }
    check_shape(max_n, max_m)?;
    let mut reports: Vec<(String, Report)> = Vec::new();
    for n in 2..=max_n {
        for m in 1..=max_m {
            let s = Shape { n, m, q: "abstract".into() };
            reports.push((format!("normal-form n={n} m={m}"), normal_form_cmd(&s)?));
            reports.push((format!("basis n={n} m={m}"), basis_cmd(&s)?));
            if n >= 3 {
                reports.push((format!("table n={n} m={m}"), table_cmd(&s)?));
                reports.push((format!("levi n={n} m={m}"), levi_cmd(&s)?));
            }
            if n % 2 == 0 {
                reports.push((format!("classify n={n} m={m}"), classify_cmd(&s)?));
            }
        }
    }
    for m in 1..=max_m.min(3) {
        reports.push((format!("second-order m={m}"), second_order_cmd(m)?));
    }
    if !skip_numeric {
        for n in [3, 4].into_iter().filter(|&n| n <= max_n) {
            let args = NumcheckArgs {
                n,
                m: 2.min(max_m),
                qs: vec!["0".into(), "1".into(), "x".into()],
                ts: vec![-0.5, -0.1, 0.1, 0.5],
                tol: 1e-6,
                rtol: 1e-10,
                grid: 11,
            };
            reports.push((format!("numcheck n={n} m={}", args.m), numcheck_cmd(&args)?));
        }
    }
    let mut text = String::new();
    let mut items = Vec::new();
    for (name, r) in &reports {
        let _ = writeln!(text, "[{}] {name}", if r.pass { "pass" } else { "FAIL" });
        if let Some(w) = &r.witness {
            let _ = writeln!(text, "       {w}");
        }
        items.push(json!({ "name": name, "pass": r.pass, "report": r.json }));
    }
    let pass = reports.iter().all(|(_, r)| r.pass);
    let witness = reports
        .iter()
        .find(|(_, r)| !r.pass)
        .map(|(name, r)| format!("{name}: {}", r.witness.clone().unwrap_or_default()));
    let _ = writeln!(text, "overall: {}", if pass { "pass" } else { "FAIL" });
    Ok(Report::new(text, json!({ "command": "all", "runs": items, "pass": pass }), pass, witness))
}

/// Executes a parsed command.
pub fn execute(command: &Command) -> Outcome {
    let result = match command {
        Command::NormalForm(s) => normal_form_cmd(s),
        Command::Basis(s) => basis_cmd(s),
        Command::Table(s) => table_cmd(s),
        Command::Levi(s) => levi_cmd(s),
        Command::Classify(s) => classify_cmd(s),
        Command::SecondOrder { m } => second_order_cmd(*m),
        Command::Numcheck(a) => numcheck_cmd(a),
        Command::All { max_n, max_m, no_cap, skip_numeric } => all_cmd(*max_n, *max_m, *no_cap, *skip_numeric),
    };
    match result {
        Ok(r) => Outcome::Done(r),
        Err(e) if is_config_error(&e) => Outcome::Invalid(e.to_string()),
        Err(e) => Outcome::Done(Report::new(
            format!("error: {e}\n"),
            json!({ "error": e.to_string(), "pass": false }),
            false,
            Some(e.to_string()),
        )),
    }
}

/// Renders a report in the requested format.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err(format!("{THREADS_ENV} must be positive"));
        }
        // a second initialization (e.g. in tests) keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Full CLI entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return 2;
    }
    match execute(&cli.command) {
        Outcome::Invalid(msg) => {
            eprintln!("error: {msg}");
            2
        }
        Outcome::Done(report) => {
            let out = render(&report, cli.format);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, out) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{out}"),
            }
            if report.pass {
                0
            } else {
                if let Some(w) = &report.witness {
                    eprintln!("verification failed: {w}");
                }
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Report {
        let cli = Cli::try_parse_from(std::iter::once("lieode").chain(args.iter().copied())).unwrap();
        match execute(&cli.command) {
            Outcome::Done(r) => r,
            Outcome::Invalid(m) => panic!("invalid: {m}"),
        }
    }

    #[test]
    fn table_json_shape() {
        let r = run(&["table", "--n", "3", "--m", "2", "--format", "json"]);
        assert!(r.pass);
        assert_eq!(r.json["basis"].as_array().unwrap().len(), 13);
        assert_eq!(r.json["brackets"].as_array().unwrap().len(), 78);
    }

    #[test]
    fn levi_and_classify_examples() {
        let r = run(&["levi", "--n", "4", "--m", "3"]);
        assert!(r.pass, "{}", r.text);
        assert_eq!(r.json["levi"]["dim"], 24);
        assert_eq!(r.json["levi"]["radical_dim"], 13);
        assert_eq!(r.json["levi"]["levi_factor_dim"], 11);
        let r = run(&["classify", "--n", "4", "--m", "2"]);
        assert!(r.pass);
        assert_eq!((r.json["dim_div"].as_u64(), r.json["dim_var"].as_u64()), (Some(12), Some(4)));
        let r = run(&["classify", "--n", "3", "--m", "2"]);
        assert_eq!(r.json["outcome"], "not_lagrangian");
    }

    #[test]
    fn invalid_configs() {
        let cli = Cli::try_parse_from(["lieode", "table", "--n", "1"]).unwrap();
        assert!(matches!(execute(&cli.command), Outcome::Invalid(_)));
        let cli = Cli::try_parse_from(["lieode", "normal-form", "--n", "3", "--q", "x^"]).unwrap();
        assert!(matches!(execute(&cli.command), Outcome::Invalid(_)));
        let cli = Cli::try_parse_from(["lieode", "all", "--max-n", "7"]).unwrap();
        assert!(matches!(execute(&cli.command), Outcome::Invalid(_)));
    }

    #[test]
    fn polynomial_q_normal_form() {
        let r = run(&["normal-form", "--n", "3", "--q", "x"]);
        assert_eq!(r.json["coefficients"]["A2"], "4*x");
        assert_eq!(r.json["coefficients"]["A3"], "2");
    }
}
