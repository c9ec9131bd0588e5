//! Argument handling and report rendering for the `f2quo` binary.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use f2quo::invariants::{socle, GridReport, SkippedInstance};
use f2quo::morphisms::{choose_method, count_automorphisms, enumerate};
use f2quo::{
    fixed_subalgebra_streamed, nilradical, verify_grid, verify_instance, Algebra, Budgets, Check,
    Error, IdealKind, IdealSpec, Method, Subspace, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INVALID_ARGS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Largest dimension for which `info` prints full operation tables.
const TABLE_MAX_DIM: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "f2quo", version, about = "Factor algebras of F2[X1..Xn], their automorphisms and fixed points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Number of indeterminates.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Truncation order: factor by m^(r+1).
    #[arg(long, global = true)]
    pub r: Option<usize>,

    /// Factor by the field ideal (Xi^2 + Xi) instead of a power of m.
    #[arg(long, global = true, conflicts_with = "r")]
    pub field_ideal: bool,

    /// Largest algebra dimension visited by `grid`.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_dim: usize,

    /// Candidate cap for brute-force enumeration.
    #[arg(long, global = true, default_value_t = f2quo::morphisms::DEFAULT_BRUTE_FORCE_BUDGET)]
    pub brute_budget: u64,

    /// Candidate cap for structured enumeration.
    #[arg(long, global = true, default_value_t = f2quo::morphisms::DEFAULT_STRUCTURED_BUDGET)]
    pub structured_budget: u64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,

    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dimension, basis, and for small algebras the + and * tables.
    Info,
    /// Automorphism group order and a generating set.
    Aut,
    /// The subalgebra fixed by every automorphism.
    Fixed,
    /// Socle (and nilradical) basis.
    Socle,
    /// Check one algebra against the expected structural facts.
    Verify,
    /// Verify every m^(r+1) quotient up to --max-dim.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

/// Everything printed, plus the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(status: i32, message: impl Into<String>) -> Self {
        Outcome { status, stdout: String::new(), stderr: message.into() }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidSpec(_) | Error::IndexError(_) => EXIT_INVALID_ARGS,
        Error::BudgetExceeded { .. } | Error::DimensionCapExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_VERIFICATION_FAILED,
    }
}

impl Cli {
    fn budgets(&self) -> Budgets {
        Budgets { brute_force: self.brute_budget, structured: self.structured_budget, ..Budgets::default() }
    }

    fn spec(&self) -> Result<IdealSpec, Error> {
        let n = self.n.ok_or_else(|| Error::InvalidSpec("--n is required".into()))?;
        let spec = if self.field_ideal {
            IdealSpec::field_ideal(n)
        } else {
            let r = self.r.ok_or_else(|| Error::InvalidSpec("--r or --field-ideal is required".into()))?;
            IdealSpec::maximal_power(n, r)
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match cli.command {
        Command::Info => cli.spec().and_then(|s| info(cli, s)),
        Command::Aut => cli.spec().and_then(|s| aut(cli, s)),
        Command::Fixed => cli.spec().and_then(|s| fixed(cli, s)),
        Command::Socle => cli.spec().and_then(|s| socle_cmd(cli, s)),
        Command::Verify => cli.spec().and_then(|s| verify(cli, s)),
        Command::Grid => grid(cli),
    };
    match result {
        Ok(outcome) => outcome,
        Err(e) => Outcome::fail(exit_code(&e), format!("error: {e}\n")),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: String, status: i32) -> Outcome {
    let stdout = match cli.output {
        Output::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Output::Text => text,
    };
    Outcome { status, stdout, stderr: String::new() }
}

fn ideal_name(spec: &IdealSpec) -> IdealKind {
    spec.kind()
}

fn render_space(algebra: &Algebra, s: &Subspace) -> Vec<String> {
    s.basis_words().iter().map(|&v| algebra.render_bits(v)).collect()
}

fn header(spec: &IdealSpec, dim: usize) -> String {
    let n = spec.n();
    let ring = if n == 1 { "F2[X]".to_string() } else { format!("F2[X1..X{n}]") };
    match spec.r() {
        Some(r) => format!("algebra {ring}/m^{}  (n = {n}, r = {r}, dim = {dim})\n", r + 1),
        None => format!("algebra {ring}/(Xi^2+Xi)  (n = {n}, dim = {dim})\n"),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub elements: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InfoJson {
    pub ideal: IdealKind,
    pub n: usize,
    pub r: Option<usize>,
    pub dim: usize,
    pub basis: Vec<String>,
    pub addition_table: Option<TableJson>,
    pub multiplication_table: Option<TableJson>,
}

fn operation_table(algebra: &Algebra, op: impl Fn(u64, u64) -> u64) -> TableJson {
    let elements: Vec<String> = (0..=algebra.full_mask()).map(|a| algebra.render_bits(a)).collect();
    let rows = (0..=algebra.full_mask())
        .map(|a| (0..=algebra.full_mask()).map(|b| algebra.render_bits(op(a, b))).collect())
        .collect();
    TableJson { elements, rows }
}

fn write_table(out: &mut String, symbol: &str, table: &TableJson) {
    let _ = writeln!(out, "{symbol}\t{}", table.elements.join("\t"));
    for (label, row) in table.elements.iter().zip(&table.rows) {
        let _ = writeln!(out, "{label}\t{}", row.join("\t"));
    }
}

/// `+` and `*` tables over all elements, in bit order (`0, 1, X, 1+X, ..`).
pub fn tables(algebra: &Algebra) -> (TableJson, TableJson) {
    let add = operation_table(algebra, |a, b| a ^ b);
    let mul = operation_table(algebra, |a, b| {
        algebra
            .mul(algebra.element(a).unwrap(), algebra.element(b).unwrap())
            .unwrap()
            .bits()
    });
    (add, mul)
}

fn info(cli: &Cli, spec: IdealSpec) -> Result<Outcome, Error> {
    let algebra = Algebra::build(spec)?;
    let basis: Vec<String> = algebra.basis().iter().map(|m| m.render()).collect();
    let (add, mul) = if algebra.dim() <= TABLE_MAX_DIM {
        let (a, m) = tables(&algebra);
        (Some(a), Some(m))
    } else {
        (None, None)
    };
    let mut text = header(&spec, algebra.dim());
    let _ = writeln!(text, "basis: {}", basis.join(", "));
    if let (Some(a), Some(m)) = (&add, &mul) {
        text.push('\n');
        write_table(&mut text, "+", a);
        text.push('\n');
        write_table(&mut text, "*", m);
    }
    let json = InfoJson {
        ideal: ideal_name(&spec),
        n: spec.n(),
        r: spec.r(),
        dim: algebra.dim(),
        basis,
        addition_table: add,
        multiplication_table: mul,
    };
    Ok(emit(cli, &json, text, EXIT_OK))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AutJson {
    pub ideal: IdealKind,
    pub n: usize,
    pub r: Option<usize>,
    pub dim: usize,
    pub aut_order: u64,
    pub method: Method,
    /// Generator images `[phi(X1), .., phi(Xn)]` of a generating set; absent
    /// when the group is too large to hold in memory.
    pub generators: Option<Vec<Vec<String>>>,
}

fn aut(cli: &Cli, spec: IdealSpec) -> Result<Outcome, Error> {
    let algebra = Algebra::build(spec)?;
    let budgets = cli.budgets();
    let (method, needed) = choose_method(&algebra, &budgets)?;
    let (order, generators) = if needed <= budgets.materialize as u128 {
        let group = enumerate(&algebra, method, &budgets)?;
        let gens: Vec<Vec<String>> = group
            .generators()?
            .iter()
            .map(|g| g.images().iter().map(|e| algebra.render(e)).collect())
            .collect();
        (group.order() as u64, Some(gens))
    } else {
        (count_automorphisms(&algebra, method, &budgets)?, None)
    };
    let mut text = header(&spec, algebra.dim());
    let _ = writeln!(text, "automorphism group order: {order}  (method: {method})");
    match &generators {
        Some(gens) => {
            let _ = writeln!(text, "generators ({}):", gens.len());
            for g in gens {
                let parts: Vec<String> = g
                    .iter()
                    .enumerate()
                    .map(|(k, img)| format!("{} -> {img}", algebra.render(&algebra.var(k))))
                    .collect();
                let _ = writeln!(text, "  {}", parts.join(", "));
            }
        }
        None => text.push_str("generators: not computed (group too large to hold in memory)\n"),
    }
    let json = AutJson {
        ideal: ideal_name(&spec),
        n: spec.n(),
        r: spec.r(),
        dim: algebra.dim(),
        aut_order: order,
        method,
        generators,
    };
    Ok(emit(cli, &json, text, EXIT_OK))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FixedJson {
    pub ideal: IdealKind,
    pub n: usize,
    pub r: Option<usize>,
    pub dim: usize,
    pub aut_order: u64,
    pub method: Method,
    pub sa_dim: usize,
    pub sa_trivial: bool,
    pub sa_basis: Vec<String>,
}

fn fixed(cli: &Cli, spec: IdealSpec) -> Result<Outcome, Error> {
    let algebra = Algebra::build(spec)?;
    let (sa, order, method) = fixed_subalgebra_streamed(&algebra, &cli.budgets())?;
    let basis = render_space(&algebra, &sa.space);
    let mut text = header(&spec, algebra.dim());
    let _ = writeln!(text, "automorphism group order: {order}  (method: {method})");
    let _ = writeln!(text, "fixed subalgebra: dim {}, {}", sa.dim(), if sa.trivial { "trivial" } else { "nontrivial" });
    let _ = writeln!(text, "basis: {}", basis.join(", "));
    let json = FixedJson {
        ideal: ideal_name(&spec),
        n: spec.n(),
        r: spec.r(),
        dim: algebra.dim(),
        aut_order: order,
        method,
        sa_dim: sa.dim(),
        sa_trivial: sa.trivial,
        sa_basis: basis,
    };
    Ok(emit(cli, &json, text, EXIT_OK))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SocleJson {
    pub ideal: IdealKind,
    pub n: usize,
    pub r: Option<usize>,
    pub dim: usize,
    pub nilradical_dim: usize,
    pub nilradical_basis: Vec<String>,
    pub socle_dim: usize,
    pub socle_basis: Vec<String>,
}

fn socle_cmd(cli: &Cli, spec: IdealSpec) -> Result<Outcome, Error> {
    let algebra = Algebra::build(spec)?;
    let nil = nilradical(&algebra, cli.brute_budget)?;
    let soc = socle(&algebra, cli.brute_budget)?;
    let (nil_basis, soc_basis) = (render_space(&algebra, &nil), render_space(&algebra, &soc));
    let mut text = header(&spec, algebra.dim());
    let _ = writeln!(text, "nilradical: dim {}  [{}]", nil.dim(), nil_basis.join(", "));
    let _ = writeln!(text, "socle: dim {}  [{}]", soc.dim(), soc_basis.join(", "));
    let json = SocleJson {
        ideal: ideal_name(&spec),
        n: spec.n(),
        r: spec.r(),
        dim: algebra.dim(),
        nilradical_dim: nil.dim(),
        nilradical_basis: nil_basis,
        socle_dim: soc.dim(),
        socle_basis: soc_basis,
    };
    Ok(emit(cli, &json, text, EXIT_OK))
}

/// Serialized form of a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub ideal: IdealKind,
    pub n: usize,
    pub r: Option<usize>,
    pub dim: usize,
    pub aut_order: u64,
    pub sa_dim: usize,
    pub sa_trivial: bool,
    pub socle_dim: usize,
    pub socle_in_sa: bool,
    pub method: Method,
    /// Only filled with `--timing`.
    pub elapsed_ms: Option<u64>,
    pub sa_basis: Vec<String>,
    pub socle_basis: Vec<String>,
    pub cross_checked: bool,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ReportJson {
    pub fn new(report: &VerificationReport, timing: bool) -> Self {
        ReportJson {
            ideal: report.spec.kind(),
            n: report.spec.n(),
            r: report.spec.r(),
            dim: report.dim,
            aut_order: report.aut_order,
            sa_dim: report.sa_dim,
            sa_trivial: report.sa_trivial,
            socle_dim: report.socle_dim,
            socle_in_sa: report.socle_in_sa,
            method: report.method,
            elapsed_ms: timing.then(|| report.elapsed.as_millis() as u64),
            sa_basis: report.sa_basis.clone(),
            socle_basis: report.socle_basis.clone(),
            cross_checked: report.cross_checked,
            passed: report.passed(),
            checks: report.checks.clone(),
        }
    }
}

fn report_text(report: &VerificationReport, timing: bool) -> String {
    let mut text = header(&report.spec, report.dim);
    let _ = writeln!(
        text,
        "  aut_order {}  method {}{}",
        report.aut_order,
        report.method,
        if report.cross_checked { " (cross-checked)" } else { "" }
    );
    let _ = writeln!(
        text,
        "  SA: dim {} {}  [{}]",
        report.sa_dim,
        if report.sa_trivial { "trivial" } else { "nontrivial" },
        report.sa_basis.join(", ")
    );
    let _ = writeln!(
        text,
        "  socle: dim {}  [{}]  contained in SA: {}",
        report.socle_dim,
        report.socle_basis.join(", "),
        report.socle_in_sa
    );
    if timing {
        let _ = writeln!(text, "  elapsed: {} ms", report.elapsed.as_millis());
    }
    for c in &report.checks {
        let _ = write!(
            text,
            "  [{}] {} ({:?}): expected {}, observed {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.basis,
            c.expected,
            c.observed
        );
        if let Some(ce) = &c.counterexample {
            let _ = write!(text, "; counterexample: {ce}");
        }
        text.push('\n');
    }
    let _ = writeln!(text, "  => {}", if report.passed() { "PASS" } else { "FAIL" });
    text
}

fn verify(cli: &Cli, spec: IdealSpec) -> Result<Outcome, Error> {
    let report = verify_instance(spec, &cli.budgets())?;
    let status = if report.passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    Ok(emit(cli, &ReportJson::new(&report, cli.timing), report_text(&report, cli.timing), status))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedJson {
    pub ideal: IdealKind,
    pub n: usize,
    pub r: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridJson {
    pub max_dim: usize,
    pub passed: bool,
    pub reports: Vec<ReportJson>,
    pub skipped: Vec<SkippedJson>,
}

impl GridJson {
    pub fn new(max_dim: usize, grid: &GridReport, timing: bool) -> Self {
        let skipped = grid
            .skipped
            .iter()
            .map(|SkippedInstance { spec, reason }| SkippedJson {
                ideal: spec.kind(),
                n: spec.n(),
                r: spec.r(),
                reason: reason.clone(),
            })
            .collect();
        GridJson {
            max_dim,
            passed: grid.passed(),
            reports: grid.reports.iter().map(|r| ReportJson::new(r, timing)).collect(),
            skipped,
        }
    }
}

fn grid(cli: &Cli) -> Result<Outcome, Error> {
    let grid = verify_grid(cli.max_dim, &cli.budgets())?;
    let mut text = String::new();
    for report in &grid.reports {
        text.push_str(&report_text(report, cli.timing));
    }
    for s in &grid.skipped {
        let _ = writeln!(text, "skipped {}: {}", s.spec, s.reason);
    }
    let failed = grid.reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(
        text,
        "grid max_dim {}: {} instances, {} failed, {} skipped",
        cli.max_dim,
        grid.reports.len(),
        failed,
        grid.skipped.len()
    );
    let status = if grid.passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    Ok(emit(cli, &GridJson::new(cli.max_dim, &grid, cli.timing), text, status))
}
