//! `d2lab`: matrix checks, the S5 decider, the axiom classifier and the
//! matrix search from the command line.

mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use d2lab::formula::{
    axiom_by_id, axiom_system, canonical_instance, parse_discursive, parse_modal, Axiom, DiscursiveFormula, Leaf,
    SystemId,
};
use d2lab::matrix::{
    eval, fixture, read_matrix, validate, verify_paper_claims, write_matrix, Assignment, Matrix, PaperMatrixId,
    SchemeOutcome, Value,
};
use d2lab::modal::{
    check_c_axioms, classify_d_axioms, d2_obligation, published_mark, s5_valid_with, translate, D2Options,
    DConjReading, S5Options, TableMark, Verdict, DEFAULT_MAX_ATOMS, HARD_MAX_ATOMS,
};
use d2lab::report::{Certificate, Finding};
use d2lab::search::{search, SearchConstraints, Termination};
use serde_json::json;

use report::{finding_lines, Failure, Outcome, Report, EXIT_FOUND, EXIT_LIMIT, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "d2lab", version, about = "Discussive logic toolkit: matrices, S5 and matrix search")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Reading {
    Right,
    Left,
}

impl From<Reading> for DConjReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Right => DConjReading::Right,
            Reading::Left => DConjReading::Left,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct AtomArgs {
    /// Refuse formulas with more atoms than this.
    #[arg(long, default_value_t = DEFAULT_MAX_ATOMS,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..=HARD_MAX_ATOMS as u64))]
    max_atoms: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct D2Args {
    /// Translation of `^`: right gives `a & <>b`, left gives `<>a & b`.
    #[arg(long, value_enum, default_value_t = Reading::Right)]
    dconj: Reading,
    /// Check S5 validity of the translation itself rather than of `<>` applied to it.
    #[arg(long)]
    no_outer_diamond: bool,
    #[command(flatten)]
    atoms: AtomArgs,
}

impl D2Args {
    fn options(self) -> D2Options {
        D2Options {
            reading: self.dconj.into(),
            outer_diamond: !self.no_outer_diamond,
            s5: S5Options {
                max_atoms: self.atoms.max_atoms,
            },
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula in a matrix under an assignment.
    Eval {
        /// Matrix file, or a built-in fixture P1..P13.
        matrix: String,
        /// Formula or axiom id.
        formula: String,
        /// Leaf values such as `A=1 p=2`.
        assignment: Vec<String>,
    },
    /// Check a matrix against axioms, modus ponens and refutation targets.
    Check {
        matrix: String,
        /// Axiom system to validate.
        #[arg(long)]
        system: Option<SystemId>,
        /// Additional axioms (ids or formulas) to validate.
        #[arg(long, value_delimiter = ',')]
        axiom: Vec<String>,
        /// Axioms (ids or formulas) the matrix should refute.
        #[arg(long, value_delimiter = ',')]
        refute: Vec<String>,
    },
    /// Decide S5 validity of a modal formula.
    S5 {
        formula: String,
        #[command(flatten)]
        atoms: AtomArgs,
    },
    /// Decide D2 validity of a discussive formula or axiom.
    D2 {
        formula: String,
        #[command(flatten)]
        opts: D2Args,
    },
    /// Print the modal translation of a discussive formula or axiom.
    Translate {
        formula: String,
        #[arg(long, value_enum, default_value_t = Reading::Right)]
        dconj: Reading,
    },
    /// Decide D2 validity of DDK10-DDK22, or of every C axiom.
    Classify {
        #[arg(long, default_value = "D")]
        system: SystemId,
        #[command(flatten)]
        opts: D2Args,
    },
    /// Re-check every built-in fixture against what it is published to show.
    PaperVerify {
        /// Fixtures to check; all when omitted.
        ids: Vec<PaperMatrixId>,
    },
    /// Search for matrices validating some axioms and refuting others.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Number of truth values.
    #[arg(long)]
    size: usize,
    /// Validate every axiom of this system.
    #[arg(long)]
    system: Option<SystemId>,
    /// Axioms (ids or formulas) to validate.
    #[arg(long, value_delimiter = ',')]
    validate: Vec<String>,
    /// Axioms (ids or formulas) to refute.
    #[arg(long, value_delimiter = ',')]
    refute: Vec<String>,
    /// Fixed designated set.
    #[arg(long, value_delimiter = ',')]
    designated: Option<Vec<Value>>,
    /// Fixed negation table.
    #[arg(long, value_delimiter = ',')]
    neg: Option<Vec<Value>>,
    /// Keep one matrix per isomorphism class.
    #[arg(long)]
    prune: bool,
    /// Stop after this many matrices.
    #[arg(long)]
    limit: Option<usize>,
    /// Time budget in seconds.
    #[arg(long, env = "D2LAB_BUDGET_SECS")]
    budget_secs: Option<f64>,
    /// Write each matrix found to this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_matrix(arg: &str) -> Result<(Matrix, Option<PaperMatrixId>), Failure> {
    if let Ok(id) = arg.parse::<PaperMatrixId>() {
        return Ok((fixture(id).matrix.clone(), Some(id)));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))?;
    let m = read_matrix(&text).map_err(|e| Failure::usage(format!("{arg}: {e}")))?;
    Ok((m, None))
}

/// An axiom id, or a formula given inline.
fn discursive_arg(arg: &str) -> Result<Axiom, Failure> {
    if let Ok(ax) = axiom_by_id(arg) {
        return Ok(ax);
    }
    let f = parse_discursive(arg)?;
    Ok(Axiom::new(arg, f))
}

fn axiom_list(args: &[String]) -> Result<Vec<Axiom>, Failure> {
    args.iter().map(|a| discursive_arg(a)).collect()
}

fn ground(f: &DiscursiveFormula) -> Result<DiscursiveFormula, Failure> {
    if f.is_ground() {
        Ok(f.clone())
    } else {
        Ok(canonical_instance(f)?)
    }
}

fn parse_assignment(items: &[String]) -> Result<Assignment, Failure> {
    let mut a = Assignment::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("expected LEAF=VALUE, got `{item}`")))?;
        let value: Value = value
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("bad value in `{item}`")))?;
        let name = name.trim();
        let mut chars = name.chars();
        let leaf = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => Leaf::MetaVar(c),
            (Some(c), _) if c.is_ascii_lowercase() => Leaf::Atom(name.to_string()),
            _ => return Err(Failure::usage(format!("bad leaf name in `{item}`"))),
        };
        a.set(leaf, value);
    }
    Ok(a)
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Valid { models_checked } => format!("VALID ({models_checked} models checked)"),
        Verdict::Invalid { countermodel } => format!("INVALID\ncountermodel: {countermodel}"),
    }
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.is_valid() {
        EXIT_OK
    } else {
        EXIT_FOUND
    }
}

fn cmd_eval(matrix: &str, formula: &str, assignment: &[String]) -> Result<Outcome, Failure> {
    let (m, _) = load_matrix(matrix)?;
    let ax = discursive_arg(formula)?;
    let a = parse_assignment(assignment)?;
    let v = eval(&m, &ax.scheme, &a)?;
    let designated = m.is_designated(v);
    let text = format!(
        "{} = {v} ({})\n",
        ax.scheme,
        if designated { "designated" } else { "not designated" }
    );
    let result = json!({
        "formula": ax.scheme,
        "assignment": a,
        "value": v,
        "designated": designated,
    });
    Ok(Outcome::new(result, text, EXIT_OK))
}

fn scheme_line(out: &mut String, id: &str, o: &SchemeOutcome) {
    match o {
        SchemeOutcome::Pass { assignments_checked } => {
            let _ = writeln!(out, "  {id:<8} pass ({assignments_checked} assignments)");
        }
        SchemeOutcome::Fail { witness, value } => {
            let _ = writeln!(out, "  {id:<8} FAIL at {witness}: value {value}");
        }
    }
}

fn cmd_check(matrix: &str, system: Option<SystemId>, extra: &[String], refute: &[String]) -> Result<Outcome, Failure> {
    let (m, id) = load_matrix(matrix)?;
    let mut axioms: Vec<Axiom> = system.map(|s| axiom_system(s).axioms().to_vec()).unwrap_or_default();
    axioms.extend(axiom_list(extra)?);
    let refute = axiom_list(refute)?;
    if axioms.is_empty() && refute.is_empty() {
        return Err(Failure::usage("nothing to check: give --system, --axiom or --refute"));
    }
    let mut report = validate(&m, &axioms, &refute)?;
    report.matrix = Some(id.map_or_else(|| matrix.to_string(), |i| i.to_string()));

    let mut text = String::new();
    let _ = writeln!(text, "matrix {}", report.matrix.as_deref().unwrap_or_default());
    if !report.axioms.is_empty() {
        text.push_str("validate:\n");
        for r in &report.axioms {
            scheme_line(&mut text, &r.id, &r.outcome);
        }
    }
    match report.mp {
        d2lab::matrix::MpOutcome::Pass => text.push_str("modus ponens: closed\n"),
        d2lab::matrix::MpOutcome::Fail {
            antecedent,
            consequent,
        } => {
            let _ = writeln!(
                text,
                "modus ponens: FAIL ({antecedent} and {antecedent} => {consequent} designated, {consequent} not)"
            );
        }
    }
    if !report.refutations.is_empty() {
        text.push_str("refute:\n");
        for r in &report.refutations {
            scheme_line(&mut text, &r.id, &r.outcome);
        }
    }

    // disagreements with what a fixture is published to show, restricted to what was checked
    let mut findings = Vec::new();
    if let Some(id) = id {
        let record = verify_paper_claims().swap_remove(id as usize);
        let checked: Vec<&str> = report
            .axioms
            .iter()
            .chain(&report.refutations)
            .map(|r| r.id.as_str())
            .chain(["MP"])
            .collect();
        findings = record
            .findings
            .into_iter()
            .filter(|f| f.subject.split_once('/').is_some_and(|(_, what)| checked.contains(&what)))
            .collect();
    }
    let separates = report.separates();
    let _ = writeln!(text, "{}", if separates { "OK" } else { "NOT OK" });
    let exit = if separates { EXIT_OK } else { EXIT_FOUND };
    Ok(Outcome::new(report, text, exit).with_findings(findings))
}

fn cmd_s5(formula: &str, atoms: AtomArgs) -> Result<Outcome, Failure> {
    let f = parse_modal(formula)?;
    let v = s5_valid_with(&f, S5Options { max_atoms: atoms.max_atoms })?;
    let text = format!("{}\n", verdict_text(&v));
    let exit = verdict_exit(&v);
    Ok(Outcome::new(json!({ "formula": f, "verdict": v }), text, exit))
}

/// The published expectation for an axiom's D2 validity, if any.
fn expected_validity(id: &str) -> Option<bool> {
    if axiom_system(SystemId::C).get(id).is_some() {
        return Some(true);
    }
    match published_mark(id)? {
        TableMark::Valid => Some(true),
        TableMark::Invalid => Some(false),
        TableMark::Unknown => None,
    }
}

fn verdict_certificate(v: &Verdict) -> Certificate {
    match v {
        Verdict::Valid { models_checked } => Certificate::ExhaustiveEnumeration {
            models_checked: *models_checked,
        },
        Verdict::Invalid { countermodel } => Certificate::Countermodel {
            countermodel: countermodel.clone(),
        },
    }
}

fn cmd_d2(formula: &str, args: D2Args) -> Result<Outcome, Failure> {
    let ax = discursive_arg(formula)?;
    let opts = args.options();
    let instance = ground(&ax.scheme)?;
    let obligation = d2_obligation(&instance, opts)?;
    let v = s5_valid_with(&obligation, opts.s5)?;

    let mut text = String::new();
    if instance != ax.scheme {
        let _ = writeln!(text, "instance: {instance}");
    }
    let _ = writeln!(text, "obligation: {obligation}");
    let _ = writeln!(text, "{}", verdict_text(&v));

    let mut findings = Vec::new();
    if let Some(expected) = expected_validity(&ax.id) {
        if expected != v.is_valid() {
            findings.push(Finding {
                subject: ax.id.clone(),
                expected: if expected { "D2-valid" } else { "not D2-valid" }.into(),
                computed: format!("{v} on {instance}"),
                certificate: verdict_certificate(&v),
            });
        }
    }
    text.push_str(&finding_lines(&findings));
    let result = json!({
        "formula": ax.scheme,
        "instance": instance,
        "reading": opts.reading,
        "outer_diamond": opts.outer_diamond,
        "obligation": obligation,
        "verdict": v,
    });
    let exit = verdict_exit(&v);
    Ok(Outcome::new(result, text, exit).with_findings(findings))
}

fn cmd_translate(formula: &str, dconj: Reading) -> Result<Outcome, Failure> {
    let ax = discursive_arg(formula)?;
    let instance = ground(&ax.scheme)?;
    let reading: DConjReading = dconj.into();
    let t = translate(&instance, reading)?;
    let result = json!({ "formula": ax.scheme, "instance": instance, "reading": reading, "translation": t });
    Ok(Outcome::new(result, format!("{t}\n"), EXIT_OK))
}

fn short(v: &Verdict) -> &'static str {
    if v.is_valid() {
        "VALID"
    } else {
        "INVALID"
    }
}

fn cmd_classify(system: SystemId, args: D2Args) -> Result<Outcome, Failure> {
    let opts = args.options();
    let (this, other) = (opts.reading, opts.reading.other());
    let mut text = String::new();
    match system {
        SystemId::D => {
            let rows = classify_d_axioms(opts)?;
            let _ = writeln!(text, "{:<6} {:<4} {:<8} {:<10} instance", "axiom", "mark", "verdict", "status");
            for r in &rows {
                let mark = r.mark.map_or('.', |m| m.symbol());
                let _ = writeln!(text, "{:<6} {:<4} {:<8} {:<10} {}", r.axiom, mark, short(&r.verdict), r.status.to_string(), r.instance);
                if r.readings_differ() {
                    let alt = r.alternate.as_ref().expect("differing readings have an alternate");
                    let _ = writeln!(text, "       ^ {this}: {}  |  ^ {other}: {}", short(&r.verdict), short(alt));
                }
                if let Some(cm) = r.verdict.countermodel() {
                    let _ = writeln!(text, "       countermodel: {cm}");
                }
            }
            let findings: Vec<Finding> = rows.iter().filter_map(|r| r.finding()).collect();
            text.push_str(&finding_lines(&findings));
            Ok(Outcome::new(json!({ "system": "D", "rows": rows }), text, EXIT_OK).with_findings(findings))
        }
        SystemId::C => {
            let rows = check_c_axioms(opts)?;
            let _ = writeln!(text, "{:<6} {:<8} instance", "axiom", "verdict");
            for r in &rows {
                let _ = writeln!(text, "{:<6} {:<8} {}", r.axiom, short(&r.verdict), r.instance);
                if let Some(alt) = r.alternate.as_ref().filter(|a| a.is_valid() != r.verdict.is_valid()) {
                    let _ = writeln!(text, "       ^ {this}: {}  |  ^ {other}: {}", short(&r.verdict), short(alt));
                }
                if let Some(cm) = r.verdict.countermodel() {
                    let _ = writeln!(text, "       countermodel: {cm}");
                }
            }
            let findings: Vec<Finding> = rows.iter().filter_map(|r| r.finding()).collect();
            text.push_str(&finding_lines(&findings));
            Ok(Outcome::new(json!({ "system": "C", "rows": rows }), text, EXIT_OK).with_findings(findings))
        }
    }
}

fn cmd_paper_verify(ids: &[PaperMatrixId]) -> Result<Outcome, Failure> {
    let records: Vec<_> = verify_paper_claims()
        .into_iter()
        .filter(|r| ids.is_empty() || ids.contains(&r.id))
        .collect();
    let mut text = String::new();
    for r in &records {
        let _ = writeln!(
            text,
            "{:<4} validates {}: {:<3}  refutes {:<7} {}",
            r.id.to_string(),
            r.validates,
            if r.validation_confirmed { "yes" } else { "NO" },
            format!("{}:", r.target),
            if r.refutation_confirmed { "yes" } else { "NO" },
        );
    }
    let findings: Vec<Finding> = records.iter().flat_map(|r| r.findings.iter().cloned()).collect();
    text.push_str(&finding_lines(&findings));
    Ok(Outcome::new(json!({ "records": records }), text, EXIT_OK).with_findings(findings))
}

fn cmd_search(a: &SearchArgs) -> Result<Outcome, Failure> {
    let mut c = SearchConstraints::new(a.size);
    if let Some(s) = a.system {
        c.validate = axiom_system(s).axioms().to_vec();
    }
    c.validate.extend(axiom_list(&a.validate)?);
    c.refute = axiom_list(&a.refute)?;
    c.designated = a.designated.clone();
    c.neg = a.neg.clone();
    c.prune_isomorphs = a.prune;
    c.limit = a.limit;
    if let Some(secs) = a.budget_secs {
        c.budget = Some(
            Duration::try_from_secs_f64(secs).map_err(|_| Failure::usage(format!("bad time budget {secs}")))?,
        );
    }
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    }

    let mut matrices = Vec::new();
    let mut files = Vec::new();
    let mut write_error = None;
    let stats = search(&c, |m| {
        if let Some(dir) = &a.out {
            let path = dir.join(format!("m{:05}.matrix", matrices.len() + 1));
            if let Err(e) = std::fs::write(&path, write_matrix(m)) {
                write_error.get_or_insert(format!("cannot write {}: {e}", path.display()));
            }
            files.push(path.display().to_string());
        }
        matrices.push(m.clone());
    })?;
    if let Some(e) = write_error {
        return Err(Failure::usage(e));
    }

    let mut text = String::new();
    if a.out.is_none() {
        for m in &matrices {
            text.push_str(&write_matrix(m));
            text.push('\n');
        }
    }
    let marker = match stats.termination {
        Termination::Exhausted => "search exhausted",
        Termination::LimitReached => "limit reached",
        Termination::BudgetExhausted => "BUDGET EXHAUSTED (results are partial)",
    };
    let _ = writeln!(text, "{} matrices, {} nodes; {marker}", stats.found, stats.nodes);
    let exit = if stats.termination == Termination::BudgetExhausted {
        EXIT_LIMIT
    } else {
        EXIT_OK
    };
    let result = json!({ "stats": stats, "matrices": matrices, "files": files });
    Ok(Outcome::new(result, text, exit))
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Eval {
            matrix,
            formula,
            assignment,
        } => cmd_eval(matrix, formula, assignment),
        Command::Check {
            matrix,
            system,
            axiom,
            refute,
        } => cmd_check(matrix, *system, axiom, refute),
        Command::S5 { formula, atoms } => cmd_s5(formula, *atoms),
        Command::D2 { formula, opts } => cmd_d2(formula, *opts),
        Command::Translate { formula, dconj } => cmd_translate(formula, *dconj),
        Command::Classify { system, opts } => cmd_classify(*system, *opts),
        Command::PaperVerify { ids } => cmd_paper_verify(ids),
        Command::Search(a) => cmd_search(a),
    }
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Eval { .. } => "eval",
        Command::Check { .. } => "check",
        Command::S5 { .. } => "s5",
        Command::D2 { .. } => "d2",
        Command::Translate { .. } => "translate",
        Command::Classify { .. } => "classify",
        Command::PaperVerify { .. } => "paper-verify",
        Command::Search(_) => "search",
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(report: &Report) {
    emit(&serde_json::to_string_pretty(report).expect("reports serialize"));
    emit("\n");
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let wants_json = argv.windows(2).any(|w| w[0] == "--format" && w[1] == "json")
                || argv.iter().any(|a| a == "--format=json");
            if !e.use_stderr() || !wants_json {
                e.exit();
            }
            print_json(&Report {
                command: argv[1..].to_vec(),
                subcommand: String::new(),
                result: serde_json::Value::Null,
                findings: Vec::new(),
                exit_code: EXIT_USAGE,
                error: Some(
                    e.to_string()
                        .lines()
                        .next()
                        .unwrap_or_default()
                        .trim_start_matches("error: ")
                        .to_string(),
                ),
            });
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };

    let subcommand = subcommand_name(&cli.command).to_string();
    let (report, text) = match dispatch(&cli.command) {
        Ok(o) => (
            Report {
                command: argv[1..].to_vec(),
                subcommand,
                result: o.result,
                findings: o.findings,
                exit_code: o.exit_code,
                error: None,
            },
            o.text,
        ),
        Err(f) => (
            Report {
                command: argv[1..].to_vec(),
                subcommand,
                result: serde_json::Value::Null,
                findings: Vec::new(),
                exit_code: f.code,
                error: Some(f.message.clone()),
            },
            String::new(),
        ),
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => match &report.error {
            Some(msg) => eprintln!("error: {msg}"),
            None => emit(&text),
        },
    }
    ExitCode::from(report.exit_code as u8)
}
