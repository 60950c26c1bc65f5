//! Command-line surface: cohomology tables, tower classification, invariant
//! reports and verification suites that emit certificates.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalogue::Label;
use crate::cohomology::{h2_one_relator, CohomologyResult};
use crate::error::Error;
use crate::invariants::invariant_report;
use crate::towers::{case_data, catalogue_label, classify_tower, TowerSpec, CASES};
use crate::words::{Presentation, TwistMap};

mod suites;

pub use suites::{freeness_suite, paper_suite, properties_suite};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;
/// Directory certificates are written to, one JSON file per claim.
pub const OUT_DIR_ENV: &str = "NILBOTT_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "nilbott", version, about = "Exact computations for circle-fibred nilBott towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Twisted H^2 of the Klein bottle or torus group.
    Cohomology {
        /// `klein` (`K`) or `torus` (`T2`)
        #[arg(long)]
        base: String,
        /// Signs per generator, e.g. `g=-1,h=+1`
        #[arg(long)]
        phi: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classify a tower spec file (line format or JSON).
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Realization tables over the Klein bottle and torus.
    Tables {
        #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
        format: TableFormat,
    },
    /// Run a verification suite; exits 1 if any certificate fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Word length bound for the freeness suite
        #[arg(long, default_value_t = 6)]
        maxlen: u64,
        /// Seed for the properties suite
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Invariant reports for catalogue groups.
    Invariants {
        /// A single label such as `B2` or `Gamma(3)`; all entries if omitted
        #[arg(long)]
        label: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Markdown,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
    Freeness,
    Properties,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A reproducible record of one checked claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub witness: Value,
    pub engine_version: String,
}

impl Certificate {
    pub fn new(claim: impl Into<String>, inputs: Value, ok: bool, witness: Value) -> Self {
        Certificate {
            claim: claim.into(),
            inputs,
            verdict: Verdict::from_bool(ok),
            witness,
            engine_version: ENGINE_VERSION.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                eprint!("{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Cohomology { base, phi, format } => cmd_cohomology(&base, &phi, format, out),
        Command::Classify { file, format } => cmd_classify(&file, format, out),
        Command::Tables { format } => cmd_tables(format, out),
        Command::Verify { suite, maxlen, seed, format } => cmd_verify(suite, maxlen, seed, format, out),
        Command::Invariants { label, format } => cmd_invariants(label.as_deref(), format, out),
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))
}

/// Base presentation and canonical name for `klein`/`K` or `torus`/`T2`.
pub fn base_presentation(name: &str) -> Result<(&'static str, Presentation), Error> {
    match name {
        "klein" | "K" => Ok(("K", Presentation::klein())),
        "torus" | "T2" => Ok(("T2", Presentation::torus())),
        other => Err(Error::Parse(format!("unknown base {other:?} (expected klein or torus)"))),
    }
}

/// Parses `g=-1,h=+1` against the generator names of `p`.
pub fn parse_phi(p: &Presentation, text: &str) -> Result<TwistMap, Error> {
    let names = p.names();
    let mut signs: Vec<Option<i8>> = vec![None; names.len()];
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) =
            part.split_once(['=', ':']).ok_or_else(|| Error::Parse(format!("expected name=sign, got {part:?}")))?;
        let i = names
            .iter()
            .position(|n| n == name.trim())
            .ok_or_else(|| Error::Parse(format!("unknown generator {:?}", name.trim())))?;
        let s = match value.trim() {
            "1" | "+1" | "+" => 1,
            "-1" | "-" => -1,
            v => return Err(Error::Parse(format!("sign must be +1 or -1, got {v:?}"))),
        };
        if signs[i].replace(s).is_some() {
            return Err(Error::Parse(format!("generator {name} given twice")));
        }
    }
    let signs: Option<Vec<i8>> = signs.into_iter().collect();
    let signs = signs.ok_or_else(|| Error::Parse(format!("a sign is required for each of {}", names.join(", "))))?;
    TwistMap::new(p, signs)
}

fn format_phi(names: &[String], signs: &[i8]) -> String {
    let parts: Vec<String> = names.iter().zip(signs).map(|(n, s)| format!("{n}={s:+}")).collect();
    parts.join(",")
}

fn cmd_cohomology(base: &str, phi: &str, format: Format, out: &mut dyn Write) -> CliResult {
    let (name, p) = base_presentation(base)?;
    let phi = parse_phi(&p, phi)?;
    let res: CohomologyResult = h2_one_relator(&p, &phi)?;
    match format {
        Format::Text => writeln!(out, "{}", res.describe())?,
        Format::Json => write_json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "base": name,
                "phi": format_phi(p.names(), phi.signs()),
                "h2": res.describe(),
                "result": res,
            }),
        )?,
    }
    Ok(EXIT_OK)
}

/// Writes certificates to `$NILBOTT_OUT_DIR/<claim>.json` when the variable is set.
fn persist(certs: &[Certificate]) -> std::io::Result<()> {
    let Some(dir) = std::env::var_os(OUT_DIR_ENV) else {
        return Ok(());
    };
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir)?;
    for c in certs {
        let file: String = c
            .claim
            .chars()
            .map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '.' { ch } else { '_' })
            .collect();
        let body = serde_json::to_string_pretty(&json!({ "schema_version": SCHEMA_VERSION, "certificate": c }))
            .expect("certificates serialize");
        std::fs::write(dir.join(format!("{file}.json")), body + "\n")?;
    }
    Ok(())
}

fn cmd_classify(file: &Path, format: Format, out: &mut dyn Write) -> CliResult {
    let text = std::fs::read_to_string(file)?;
    let spec = TowerSpec::parse_any(&text)?;
    let verdict = classify_tower(&spec)?;
    let ok = verdict.witness.as_ref().is_none_or(|w| w.check.passed);
    let cert =
        Certificate::new("classification", json!({ "tower": spec.format() }), ok, serde_json::to_value(&verdict)?);
    persist(std::slice::from_ref(&cert))?;
    match format {
        Format::Text => {
            let ty = serde_json::to_value(verdict.tower_type)?;
            writeln!(out, "{} ({})", verdict.label, ty.as_str().unwrap_or_default())?;
        }
        Format::Json => {
            write_json(out, &json!({ "schema_version": SCHEMA_VERSION, "verdict": verdict, "certificate": cert }))?
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

/// One column of a realization table: the twist cases sharing the same
/// cohomology group and realized groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableColumn {
    pub cases: Vec<u8>,
    pub phi: Vec<String>,
    pub h2: String,
    pub zero: String,
    pub torsion: String,
    pub torsionfree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationTable {
    pub base: String,
    pub columns: Vec<TableColumn>,
}

fn family_name(label: Label) -> String {
    match label {
        Label::Gamma(_) => "Gamma(k)".into(),
        Label::Delta(_) => "Delta(k)".into(),
        l => l.to_string(),
    }
}

/// Builds both tables from the engine: cohomology by Fox calculus, entries
/// by classifying `_iπ(0)` and `_iπ(1)`.
pub fn realization_tables() -> Result<Vec<RealizationTable>, Error> {
    let mut tables = Vec::new();
    for (klein, base) in [(true, "K"), (false, "T2")] {
        let mut columns: Vec<TableColumn> = Vec::new();
        for &(case, _, signs) in CASES.iter().filter(|c| c.1 == klein) {
            let (p, _, phi) = case_data(case)?;
            let h2 = h2_one_relator(&p, &phi)?;
            let dash = || "-".to_string();
            let col = TableColumn {
                cases: vec![case],
                phi: vec![format_phi(p.names(), &signs)],
                h2: h2.describe(),
                zero: catalogue_label(case, 0)?.to_string(),
                torsion: if h2.free_rank == 0 && !h2.torsion.is_empty() {
                    catalogue_label(case, 1)?.to_string()
                } else {
                    dash()
                },
                torsionfree: if h2.free_rank > 0 { family_name(catalogue_label(case, 1)?) } else { dash() },
            };
            let same = |c: &TableColumn| {
                (&c.h2, &c.zero, &c.torsion, &c.torsionfree) == (&col.h2, &col.zero, &col.torsion, &col.torsionfree)
            };
            match columns.iter_mut().find(|c| same(c)) {
                Some(c) => {
                    c.cases.push(case);
                    c.phi.extend(col.phi);
                }
                None => columns.push(col),
            }
        }
        tables.push(RealizationTable { base: base.into(), columns });
    }
    Ok(tables)
}

pub fn tables_markdown(tables: &[RealizationTable]) -> String {
    let mut s = String::new();
    for t in tables {
        let heads: Vec<String> = t
            .columns
            .iter()
            .map(|c| {
                let ids: Vec<String> = c.cases.iter().map(u8::to_string).collect();
                format!("Case {}", ids.join(" and "))
            })
            .collect();
        let row = |name: &str, f: &dyn Fn(&TableColumn) -> String| {
            let cells: Vec<String> = t.columns.iter().map(f).collect();
            format!("| {name} | {} |\n", cells.join(" | "))
        };
        s += &format!("### Base {}\n\n", t.base);
        s += &format!("| | {} |\n", heads.join(" | "));
        s += &format!("|---|{}\n", "---|".repeat(t.columns.len()));
        s += &row("phi", &|c| c.phi.join("; "));
        s += &row("H^2_phi", &|c| c.h2.clone());
        s += &row("[f]=0", &|c| c.zero.clone());
        s += &row("[f]!=0:torsion", &|c| c.torsion.clone());
        s += &row("[f]:torsionfree", &|c| c.torsionfree.clone());
        s += "\n";
    }
    s
}

fn cmd_tables(format: TableFormat, out: &mut dyn Write) -> CliResult {
    let tables = realization_tables()?;
    match format {
        TableFormat::Markdown => write!(out, "{}", tables_markdown(&tables))?,
        TableFormat::Json => write_json(out, &json!({ "schema_version": SCHEMA_VERSION, "tables": tables }))?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(suite: Suite, maxlen: u64, seed: u64, format: Format, out: &mut dyn Write) -> CliResult {
    let mut certs = match suite {
        Suite::Paper => paper_suite()?,
        Suite::Freeness => freeness_suite(maxlen)?,
        Suite::Properties => properties_suite(seed)?,
    };
    certs.sort_by(|a, b| a.claim.cmp(&b.claim));
    persist(&certs)?;
    let passed = certs.iter().all(Certificate::passed);
    let name = format!("{suite:?}").to_lowercase();
    match format {
        Format::Text => {
            for c in &certs {
                let mark = if c.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{mark} {}", c.claim)?;
            }
            let failed = certs.iter().filter(|c| !c.passed()).count();
            writeln!(out, "suite {name}: {} certificates, {failed} failed", certs.len())?;
        }
        Format::Json => write_json(
            out,
            &json!({ "schema_version": SCHEMA_VERSION, "suite": name, "passed": passed, "certificates": certs }),
        )?,
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

/// Catalogue labels reported by default: the flat entries and the
/// Heisenberg families at `k = 1, 2, 3`, sorted by name.
pub fn default_labels() -> Vec<Label> {
    let mut labels: Vec<Label> = Label::FLAT.to_vec();
    for k in 1..=3 {
        labels.push(Label::Gamma(k));
        labels.push(Label::Delta(k));
    }
    labels.sort_by_key(|l| l.to_string());
    labels
}

fn cmd_invariants(label: Option<&str>, format: Format, out: &mut dyn Write) -> CliResult {
    let labels = match label {
        Some(l) => vec![l.parse::<Label>()?],
        None => default_labels(),
    };
    let reports = labels.iter().map(invariant_report).collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Text => {
            for r in &reports {
                let h1 = CohomologyResult {
                    free_rank: r.h1_rank,
                    torsion: r.h1_torsion.clone(),
                    generator_image: Default::default(),
                };
                writeln!(
                    out,
                    "{}: H1 = {}, betti {:?}, holonomy order {}, torus rank {}, HC {}",
                    r.label,
                    h1.describe(),
                    r.betti,
                    r.holonomy_order,
                    r.torus_rank,
                    if r.finite_type {
                        if r.hc_pass {
                            "pass"
                        } else {
                            "fail"
                        }
                    } else {
                        "n/a"
                    },
                )?;
            }
        }
        Format::Json => write_json(out, &json!({ "schema_version": SCHEMA_VERSION, "reports": reports }))?,
    }
    Ok(EXIT_OK)
}
