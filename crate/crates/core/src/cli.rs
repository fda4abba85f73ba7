//! The `galdef` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coh::{h1_enumerated, AdjointModule, COCYCLE_CAP};
use crate::error::{Error, Result};
use crate::grp::{
    borel_generators, contains_sl2, gl2_generators, is_transvection, sl2_generators, unipotent_generators,
    FiniteMatrixGroup, GroupJson,
};
use crate::hyp::{check_hypotheses, FailedCondition, HypothesisReport};
use crate::ledger::{theorem_a_ledger, DualSelmerTracker, WilesLedger};
use crate::localdef::{
    check_case, classify_tame_case, enumerate_case, verify_presentation, CaseCheck, LocalCondition, PlaceTag,
    PresentationJson, PresentationReport, TameCase, VersalPresentation, LIFT_CAP,
};
use crate::ring::{ElemJson, GaloisRing};
use crate::scenario::{Scenario, SCHEMA_VERSION};
use crate::suites::{Suite, SuiteResult};

pub mod exit {
    pub const OK: i32 = 0;
    pub const SUITE_FAILED: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const C3: i32 = 3;
    pub const C4: i32 = 4;
    pub const C1: i32 = 5;
    pub const C2: i32 = 6;
    pub const B_SHAPE: i32 = 7;
    pub const ODD: i32 = 8;
    pub const DELTA_NONZERO: i32 = 9;
    pub const INVALID_INPUT: i32 = 10;
    pub const CAP_EXCEEDED: i32 = 11;
    pub const NOT_ABSOLUTELY_IRREDUCIBLE: i32 = 12;
    pub const DISTINGUISHEDNESS: i32 = 13;
    pub const HYPOTHESIS: i32 = 14;
    pub const MISMATCH: i32 = 15;
    pub const NOT_FOUND: i32 = 16;
    pub const NEGATIVE_DIM: i32 = 17;
    pub const USAGE: i32 = 64;
    pub const IO: i32 = 74;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema(_) => exit::SCHEMA,
        Error::DeltaNonZero { .. } => exit::DELTA_NONZERO,
        Error::CapExceeded { .. } => exit::CAP_EXCEEDED,
        Error::NotAbsolutelyIrreducible(_) => exit::NOT_ABSOLUTELY_IRREDUCIBLE,
        Error::DistinguishednessViolated(_) => exit::DISTINGUISHEDNESS,
        Error::HypothesisViolated(_) | Error::InvalidAction(_) | Error::InvalidResidual(_) | Error::NotNormal(_) => {
            exit::HYPOTHESIS
        }
        Error::MismatchFound(_) => exit::MISMATCH,
        Error::NotFound(_) => exit::NOT_FOUND,
        Error::NegativeDim(_) => exit::NEGATIVE_DIM,
        Error::Io(_) => exit::IO,
        Error::InvalidRing(_)
        | Error::NotAUnit
        | Error::NotASquare
        | Error::PrecisionOutOfRange { .. }
        | Error::ForeignElement(_)
        | Error::IndexOutOfRange(_)
        | Error::DeterminantNotOne
        | Error::InvalidRepresentation(_) => exit::INVALID_INPUT,
    }
}

fn verdict_code(c: FailedCondition) -> i32 {
    match c {
        FailedCondition::C1 => exit::C1,
        FailedCondition::C2 => exit::C2,
        FailedCondition::C3 => exit::C3,
        FailedCondition::C4 => exit::C4,
        FailedCondition::BShape => exit::B_SHAPE,
        FailedCondition::Odd => exit::ODD,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupName {
    Sl2,
    Gl2,
    Borel,
    Unipotent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Hpoly,
    Lemma25,
    Prop23,
    Euler,
    Teich,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "galdef", version, about = "Exact checks for deformations of mod p^n Galois representations")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Enumeration cap for group closures and lift searches.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check C1–C4, the target-B shape and oddness, then build the ledger.
    CheckHypotheses { scenario: PathBuf },
    /// Wiles' δ for a scenario or a ledger file.
    Delta {
        input: PathBuf,
        /// Extra row `LABEL:TANGENT:H0`, tagged as a Ramakrishna place.
        #[arg(long = "append", value_name = "LABEL:T:H0")]
        append: Vec<String>,
        /// Starting dual-Selmer dimension; appended rows count it down.
        #[arg(long)]
        dual_selmer: Option<u64>,
    },
    /// dim H⁰, Z¹, B¹, H¹ of a finite group acting on Ad⁰(i).
    Cohomology {
        #[arg(long, value_enum)]
        group: GroupName,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Classify a tame place and optionally verify its versal presentation.
    TameRing {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        /// Enumerate lifts and compare with the presentation.
        #[arg(long)]
        enumerate: bool,
        /// Print only the case label.
        #[arg(long)]
        case_only: bool,
    },
    /// Enumerate the group generated by matrices over GR(p^n, m).
    Closure {
        #[arg(long, required_unless_present = "group_file")]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// A generator `a,b,c,d` with integer entries; repeatable.
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
        /// Read ring and generators from a group JSON file instead.
        #[arg(long, conflicts_with_all = ["p", "gens"])]
        group_file: Option<PathBuf>,
    },
    /// Teichmüller lift of a residue in GR(p^n, m).
    Teichmuller {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Coefficients `c0,c1,...` of the residue, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteName,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

/// What a command produced: JSON body, text body and exit code.
pub struct Outcome {
    pub json: String,
    pub text: String,
    pub code: i32,
}

fn envelope<T: Serialize>(command: &str, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { schema_version: SCHEMA_VERSION, command, body })
        .expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ScenarioOutcome<'a> {
    report: &'a HypothesisReport,
    ledger: Option<&'a WilesLedger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ledger_error: Option<String>,
}

pub fn run_scenario(path: &std::path::Path, cap: usize) -> Result<Outcome> {
    let s = Scenario::load(path)?;
    let report = check_hypotheses(&s, cap)?;
    let mut text = report.to_text();
    let (ledger, ledger_error, code) = match report.first_failure() {
        Some(c) => (None, None, verdict_code(c)),
        None => match theorem_a_ledger(&s, &report, cap) {
            Ok(l) => {
                text.push_str(&l.to_text());
                (Some(l), None, exit::OK)
            }
            Err(e) => {
                text.push_str(&format!("ledger: {e}\n"));
                let code = exit_code(&e);
                (None, Some(e.to_string()), code)
            }
        },
    };
    let json = envelope(
        "check-hypotheses",
        ScenarioOutcome { report: &report, ledger: ledger.as_ref(), ledger_error },
    );
    Ok(Outcome { json, text, code })
}

#[derive(Deserialize)]
struct RowsInput {
    rows: Vec<LocalCondition>,
    #[serde(default)]
    delta: Option<i64>,
}

#[derive(Serialize)]
struct DeltaOutcome<'a> {
    #[serde(flatten)]
    ledger: &'a WilesLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_selmer: Option<&'a [u64]>,
}

fn parse_row(s: &str) -> Result<LocalCondition> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Schema(format!("row {s:?} is not LABEL:TANGENT:H0"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(LocalCondition {
        label: parts[0].to_string(),
        tag: PlaceTag::RamakrishnaAux,
        tangent_dim: parts[1].parse().map_err(|_| bad())?,
        h0_dim: parts[2].parse().map_err(|_| bad())?,
    })
}

fn run_delta(input: &std::path::Path, append: &[String], dual: Option<u64>, cap: usize) -> Result<Outcome> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::Schema(format!("{}: {e}", input.display())))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
    let base = if v.get("elements").is_some() {
        let s = Scenario::from_json_str(&text)?;
        let report = check_hypotheses(&s, cap)?;
        theorem_a_ledger(&s, &report, cap)?
    } else {
        let r: RowsInput = serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))?;
        let l = WilesLedger::new(r.rows)?;
        if let Some(d) = r.delta.filter(|&d| d != l.delta) {
            return Err(Error::Schema(format!("declared delta {d} does not match rows ({})", l.delta)));
        }
        l
    };
    let rows = append.iter().map(|s| parse_row(s)).collect::<Result<Vec<_>>>()?;
    let (ledger, history) = match dual {
        Some(d) => {
            let mut t = DualSelmerTracker::new(base, d);
            for r in rows {
                t.add_ramakrishna_row(r)?;
            }
            (t.ledger, Some(t.history))
        }
        None => {
            let mut l = base;
            for r in rows {
                l = l.with_row(r)?;
            }
            (l, None)
        }
    };
    let mut text = ledger.to_text();
    if let Some(h) = &history {
        text.push_str(&format!("dual Selmer dimension: {h:?}\n"));
    }
    let code = if ledger.delta == 0 { exit::OK } else { exit::DELTA_NONZERO };
    let json = envelope("delta", DeltaOutcome { ledger: &ledger, dual_selmer: history.as_deref() });
    Ok(Outcome { json, text, code })
}

fn run_cohomology(group: GroupName, p: u64, m: usize, twist: i64, cap: usize) -> Result<Outcome> {
    let k = GaloisRing::new(p, 1, m)?;
    let (gens, name) = match group {
        GroupName::Sl2 => (sl2_generators(&k), "SL2"),
        GroupName::Gl2 => (gl2_generators(&k), "GL2"),
        GroupName::Borel => (borel_generators(&k), "B"),
        GroupName::Unipotent => (unipotent_generators(&k), "U"),
    };
    let label = format!("{name}(F_{})", k.residue_size());
    let space = h1_enumerated(&k, &gens, &AdjointModule::new(&k, twist), &label, cap)?;
    let text = format!(
        "{label} on Ad0({twist}): h0 = {}, z1 = {}, b1 = {}, h1 = {}\n",
        space.h0, space.z1, space.b1, space.h1
    );
    Ok(Outcome { json: envelope("cohomology", space.to_json()), text, code: exit::OK })
}

#[derive(Serialize)]
struct TameOutcome {
    case: TameCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    presentation: Option<PresentationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumeration: Option<EnumerationOutcome>,
}

#[derive(Serialize)]
struct EnumerationOutcome {
    candidates: usize,
    solutions: usize,
    classes: usize,
    checks: CaseCheck,
    comparison: PresentationReport,
}

fn run_tame_ring(p: u64, n: u32, q: u64, alpha: i64, enumerate: bool, case_only: bool, cap: usize) -> Result<Outcome> {
    let ring = GaloisRing::integers(p, n)?;
    let case = classify_tame_case(&ring, q, &ring.from_int(alpha))?;
    if case_only {
        return Ok(Outcome {
            json: envelope("tame-ring", TameOutcome { case: case.clone(), presentation: None, enumeration: None }),
            text: format!("{}\n", case.case),
            code: exit::OK,
        });
    }
    let pres = VersalPresentation::for_case(&case);
    let mut text = format!("case {} (p = {p}, q = {q}, alpha = {alpha})\n", case.case);
    if let Some(pr) = &pres {
        text.push_str(&format!("variables: {}\n", pr.variables.join(", ")));
        for r in &pr.relations {
            text.push_str(&format!("relation: {}\n", r.describe()));
        }
    }
    let mut code = exit::OK;
    let enumeration = if enumerate {
        let lifts = enumerate_case(&ring, &case, cap)?;
        let checks = check_case(&ring, &case, &lifts);
        text.push_str(&format!(
            "{} candidate pairs, {} solutions, {} classes\n",
            lifts.candidates,
            lifts.solutions,
            lifts.classes.len()
        ));
        let comparison = match &pres {
            Some(pr) => match verify_presentation(pr, &lifts) {
                Ok(r) => r,
                Err(e) => {
                    code = exit_code(&e);
                    text.push_str(&format!("{e}\n"));
                    crate::localdef::compare_presentation(pr, &lifts)?
                }
            },
            None => return Err(Error::HypothesisViolated(format!("case {} has no presentation", case.case))),
        };
        text.push_str(&format!(
            "presentation: {} points onto {} classes, bijective: {}\n",
            comparison.points, comparison.classes, comparison.bijective
        ));
        Some(EnumerationOutcome {
            candidates: lifts.candidates,
            solutions: lifts.solutions,
            classes: lifts.classes.len(),
            checks,
            comparison,
        })
    } else {
        None
    };
    let json = envelope(
        "tame-ring",
        TameOutcome { case, presentation: pres.map(|p| p.to_json()), enumeration },
    );
    Ok(Outcome { json, text, code })
}

#[derive(Serialize)]
struct ClosureOutcome {
    group: GroupJson,
    contains_sl2: bool,
    transvections: usize,
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Schema(format!("not an integer list: {s:?}"))))
        .collect()
}

fn run_closure(
    p: Option<u64>,
    n: u32,
    m: usize,
    gens: &[String],
    file: Option<&std::path::Path>,
    cap: usize,
) -> Result<Outcome> {
    let mut g = match file {
        Some(f) => {
            let text = std::fs::read_to_string(f).map_err(|e| Error::Schema(format!("{}: {e}", f.display())))?;
            let j: GroupJson = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
            FiniteMatrixGroup::from_json(&j)?
        }
        None => {
            let ring = GaloisRing::new(p.expect("clap requires p"), n, m)?;
            let mats = gens
                .iter()
                .map(|s| {
                    let v = parse_ints(s)?;
                    if v.len() != 4 {
                        return Err(Error::Schema(format!("generator {s:?} needs four entries")));
                    }
                    Ok(ring.mat(v[0], v[1], v[2], v[3]))
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteMatrixGroup::from_generators(&ring, mats)?
        }
    };
    let sl2 = contains_sl2(&mut g, cap)?;
    let ring = g.ring().clone();
    let transvections = g.elements().expect("enumerated").iter().filter(|x| is_transvection(&ring, x)).count();
    let text = format!(
        "order {}, contains SL2: {sl2}, transvections: {transvections}\n",
        g.order().expect("enumerated")
    );
    Ok(Outcome { json: envelope("closure", ClosureOutcome { group: g.to_json(), contains_sl2: sl2, transvections }), text, code: exit::OK })
}

#[derive(Serialize)]
struct TeichOutcome {
    residue: ElemJson,
    lift: ElemJson,
    order_divides: u64,
}

fn run_teichmuller(p: u64, n: u32, m: usize, x: &str) -> Result<Outcome> {
    let ring = GaloisRing::new(p, n, m)?;
    let k = ring.residue_field();
    let r = k.from_coeffs(&parse_ints(x)?)?;
    let t = ring.teichmuller(&ring.lift(&k, &r));
    let text = format!("T({:?}) = {:?} in GR({p}^{n}, {m})\n", k.coeff_vec(&r), ring.coeff_vec(&t));
    let body = TeichOutcome { residue: k.elem_to_json(&r), lift: ring.elem_to_json(&t), order_divides: k.residue_size() - 1 };
    Ok(Outcome { json: envelope("teichmuller", body), text, code: exit::OK })
}

#[derive(Serialize)]
struct VerifyOutcome {
    suites: Vec<SuiteResult>,
    passed: bool,
}

fn run_verify(name: SuiteName) -> Outcome {
    let suites: Vec<Suite> = match name {
        SuiteName::All => Suite::ALL.to_vec(),
        SuiteName::Hpoly => vec![Suite::Hpoly],
        SuiteName::Lemma25 => vec![Suite::Lemma25],
        SuiteName::Prop23 => vec![Suite::Prop23],
        SuiteName::Euler => vec![Suite::Euler],
        SuiteName::Teich => vec![Suite::Teich],
    };
    let results: Vec<SuiteResult> = suites.iter().map(|s| s.run()).collect();
    let passed = results.iter().all(|r| r.passed);
    let text = results.iter().map(|r| r.to_text()).collect::<String>();
    Outcome {
        json: envelope("verify", VerifyOutcome { suites: results, passed }),
        text,
        code: if passed { exit::OK } else { exit::SUITE_FAILED },
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::CheckHypotheses { scenario } => run_scenario(scenario, cli.cap.unwrap_or(1_000_000)),
        Command::Delta { input, append, dual_selmer } => {
            run_delta(input, append, *dual_selmer, cli.cap.unwrap_or(1_000_000))
        }
        Command::Cohomology { group, p, m, twist } => {
            run_cohomology(*group, *p, *m, *twist, cli.cap.unwrap_or(COCYCLE_CAP))
        }
        Command::TameRing { p, n, q, alpha, enumerate, case_only } => {
            run_tame_ring(*p, *n, *q, *alpha, *enumerate, *case_only, cli.cap.unwrap_or(LIFT_CAP))
        }
        Command::Closure { p, n, m, gens, group_file } => {
            run_closure(*p, *n, *m, gens, group_file.as_deref(), cli.cap.unwrap_or(1_000_000))
        }
        Command::Teichmuller { p, n, m, x } => run_teichmuller(*p, *n, *m, x),
        Command::Verify { suite } => Ok(run_verify(*suite)),
    }
}

/// Parses arguments, runs the command, writes the report and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let body = match cli.format {
        Format::Json => &outcome.json,
        Format::Text => &outcome.text,
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {}", Error::Io(e.to_string()));
        return exit::IO;
    }
    outcome.code
}
