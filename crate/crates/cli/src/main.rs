//! Command-line calculator and verifier for the Jacquet-module segment
//! calculus.
//!
//! Subcommands mirror the structural maps: `mstar` (comultiplication table),
//! `Mstar` (twisted comultiplication), `mustar` (coaction), `jacquet`
//! (one Jacquet module plus its multiplicity report), `verify` (exhaustive
//! desk-scale sweeps) and `fixtures` (replay the committed fixture corpus).
//!
//! Exit codes: 0 success, 1 verification violation or fixture mismatch,
//! 2 parse or validation error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use jacquet_core::analysis::{
    check_distinctness, check_lemma_heredity, check_theorem_main, enumerate_admissible_gl_classes,
    multiplicity_table, SweepBounds, ViolationKind,
};
use jacquet_core::hopf::{comult_gl, graded_piece, jacquet_gl_direct, m_star, mu_star};
use jacquet_core::json::{glclass_to_json, spclass_to_json, sum_to_json, JsonTerm};
use jacquet_core::render::{render_sum, TextTerm};
use jacquet_core::sum::FormalSum;
use jacquet_core::{
    parse_expression, Error as CoreError, Expr, GLClass, SessionDeclarations, SpClass, Universe,
};

#[derive(Parser)]
#[command(
    name = "jacquet",
    about = "Exact Jacquet-module calculator for induced classes of p-adic symplectic groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DeclArgs {
    /// Declaration file (one label per line, e.g. `rho : GL(1) self-dual`)
    #[arg(long)]
    decls: Option<PathBuf>,

    /// Inline declarations, `;`-separated (e.g. "rho:GL(1); sigma:Sp(1)")
    #[arg(long)]
    labels: Option<String>,

    /// Output format
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Comultiplication of a GL class, tabulated by graded rank
    #[command(name = "mstar")]
    MStarLower {
        expr: String,
        #[command(flatten)]
        common: DeclArgs,
    },

    /// Twisted comultiplication of a GL class, tabulated by graded rank
    #[command(name = "Mstar")]
    MStarUpper {
        expr: String,
        #[command(flatten)]
        common: DeclArgs,
    },

    /// Coaction on an induced class, tabulated by Levi rank
    #[command(name = "mustar")]
    MuStar {
        expr: String,
        #[command(flatten)]
        common: DeclArgs,
    },

    /// One Jacquet module with its multiplicity report
    #[command(name = "jacquet")]
    Jacquet {
        expr: String,
        /// Rank of the GL factor of the maximal Levi subgroup
        #[arg(long)]
        levi: u32,
        #[command(flatten)]
        common: DeclArgs,
    },

    /// Exhaustive multiplicity, heredity and distinctness sweeps
    #[command(name = "verify")]
    Verify {
        #[command(flatten)]
        common: DeclArgs,

        /// Largest twist exponent magnitude
        #[arg(long, default_value_t = 2)]
        max_exp: u32,

        /// Largest number of segments per instance
        #[arg(long, default_value_t = 3)]
        max_segs: usize,

        /// Cap on the GL rank of enumerated instances
        #[arg(long, default_value_t = 6)]
        max_rank: u32,

        /// Declare an additional rank-1 self-dual GL label with this name
        #[arg(long)]
        self_dual: Option<String>,

        /// Worker threads for the sweep
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },

    /// Replay the fixture corpus and diff against committed expectations
    #[command(name = "fixtures")]
    Fixtures {
        /// Directory holding one fixture file per case
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (code, output) = run(&args);
    print!("{output}");
    std::process::exit(code);
}

/// Dispatch one invocation; returns (exit code, full output).
fn run(args: &[String]) -> (i32, String) {
    let argv = std::iter::once("jacquet".to_owned()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, err.to_string());
        }
    };
    match dispatch(cli.command) {
        Ok((code, output)) => (code, output),
        Err(err) => (2, format!("error: {err}\n")),
    }
}

fn dispatch(command: Command) -> Result<(i32, String), CoreError> {
    match command {
        Command::MStarLower { expr, common } => {
            let universe = build_universe(&common, &expr, false)?;
            let x = require_gl(&expr, &universe)?;
            let table = comult_gl(&x);
            let pieces = split_pair_table(&table, x.gl_rank(&universe), &universe);
            Ok((
                0,
                render_graded(&pieces, "mstar", &x, &universe, &common, "q"),
            ))
        }
        Command::MStarUpper { expr, common } => {
            let universe = build_universe(&common, &expr, false)?;
            let x = require_gl(&expr, &universe)?;
            let table = m_star(&x, &universe);
            let pieces = split_pair_table(&table, x.gl_rank(&universe), &universe);
            Ok((
                0,
                render_graded(&pieces, "Mstar", &x, &universe, &common, "q"),
            ))
        }
        Command::MuStar { expr, common } => {
            let universe = build_universe(&common, &expr, true)?;
            let x = require_sp(&expr, &universe)?;
            let table = mu_star(&x, &universe);
            let total = x.sp_rank(&universe);
            let pieces: Vec<(u32, FormalSum<(GLClass, SpClass)>)> = (0..=total)
                .map(|l| (l, table.filter(|(left, _)| left.gl_rank(&universe) == l)))
                .collect();
            Ok((
                0,
                render_graded(&pieces, "mustar", &x, &universe, &common, "l"),
            ))
        }
        Command::Jacquet { expr, levi, common } => {
            let universe = build_universe(&common, &expr, false)?;
            match parse_expression(&expr, &universe)? {
                Expr::Sp(x) => jacquet_sp_command(&x, levi, &universe, &common),
                Expr::Gl(x) => jacquet_gl_command(&x, levi, &universe, &common),
            }
        }
        Command::Verify {
            common,
            max_exp,
            max_segs,
            max_rank,
            self_dual,
            jobs,
        } => verify_command(&common, max_exp, max_segs, max_rank, self_dual, jobs),
        Command::Fixtures { dir } => Ok(run_fixtures(&dir)),
    }
}

fn build_universe(
    common: &DeclArgs,
    expr: &str,
    lone_ident_is_sp: bool,
) -> Result<Universe, CoreError> {
    let decls = session_declarations(common, Some((expr, lone_ident_is_sp)))?;
    decls.build_universe()
}

/// Declarations come from `--decls`, else `--labels`, else are inferred from
/// the expression (rank-1 generic labels).
fn session_declarations(
    common: &DeclArgs,
    implicit: Option<(&str, bool)>,
) -> Result<SessionDeclarations, CoreError> {
    match (&common.decls, &common.labels) {
        (Some(_), Some(_)) => Err(CoreError::Declaration {
            line: String::new(),
            msg: "pass either --decls or --labels, not both".into(),
        }),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| CoreError::Declaration {
                line: path.display().to_string(),
                msg: format!("cannot read declaration file: {e}"),
            })?;
            SessionDeclarations::parse_file_text(&text)
        }
        (None, Some(spec)) => SessionDeclarations::parse_inline(spec),
        (None, None) => match implicit {
            Some((expr, lone_sp)) => SessionDeclarations::implicit_for(expr, lone_sp),
            None => Ok(SessionDeclarations::default()),
        },
    }
}

fn require_gl(expr: &str, universe: &Universe) -> Result<GLClass, CoreError> {
    match parse_expression(expr, universe)? {
        Expr::Gl(x) => Ok(x),
        Expr::Sp(_) => Err(CoreError::Parse {
            pos: 0,
            msg: "this command takes a GL expression (no `|x` part)".into(),
        }),
    }
}

fn require_sp(expr: &str, universe: &Universe) -> Result<SpClass, CoreError> {
    match parse_expression(expr, universe)? {
        Expr::Sp(x) => Ok(x),
        Expr::Gl(_) => Err(CoreError::Parse {
            pos: 0,
            msg: "this command takes an induced expression (`... |x <sp label>`)".into(),
        }),
    }
}

fn split_pair_table(
    table: &FormalSum<(GLClass, GLClass)>,
    total: u32,
    universe: &Universe,
) -> Vec<(u32, FormalSum<(GLClass, GLClass)>)> {
    (0..=total)
        .map(|q| (q, graded_piece(table, q, universe)))
        .collect()
}

fn render_graded<B>(
    pieces: &[(u32, FormalSum<B>)],
    op: &str,
    input: &dyn TextTerm,
    universe: &Universe,
    common: &DeclArgs,
    rank_letter: &str,
) -> String
where
    B: JsonTerm + TextTerm + Ord + Clone,
{
    if common.format == "json" {
        let value = json!({
            "kind": "graded_table",
            "op": op,
            "input": input.text(universe),
            "pieces": pieces
                .iter()
                .map(|(rank, sum)| json!({"rank": rank, "sum": sum_to_json(sum, universe)}))
                .collect::<Vec<_>>(),
        });
        return format!("{value:#}\n");
    }
    let mut out = String::new();
    for (rank, sum) in pieces {
        writeln!(out, "{rank_letter}={rank}: {}", render_sum(sum, universe)).unwrap();
    }
    out
}

fn jacquet_sp_command(
    x: &SpClass,
    levi: u32,
    universe: &Universe,
    common: &DeclArgs,
) -> Result<(i32, String), CoreError> {
    let report = multiplicity_table(x, levi, universe)?;
    if common.format == "json" {
        let value = json!({
            "kind": "multiplicity_report",
            "input": spclass_to_json(x, universe),
            "levi": levi,
            "sum": sum_to_json(&report.table, universe),
            "max_multiplicity": report.max_multiplicity,
            "witnesses": report
                .witnesses
                .iter()
                .map(|w| serde_json::Value::Object(w.term_to_json(universe)))
                .collect::<Vec<_>>(),
            "reducible_factors": report
                .irreducibility_flags
                .iter()
                .map(|w| serde_json::Value::Object(w.term_to_json(universe)))
                .collect::<Vec<_>>(),
        });
        return Ok((0, format!("{value:#}\n")));
    }
    let mut out = String::new();
    writeln!(out, "{}", render_sum(&report.table, universe)).unwrap();
    writeln!(out, "max multiplicity: {}", report.max_multiplicity).unwrap();
    if report.max_multiplicity > 0 {
        let witnesses: Vec<String> = report.witnesses.iter().map(|w| w.text(universe)).collect();
        writeln!(out, "witnesses: {}", witnesses.join(", ")).unwrap();
    }
    if !report.irreducibility_flags.is_empty() {
        let flagged: Vec<String> = report
            .irreducibility_flags
            .iter()
            .map(|w| w.text(universe))
            .collect();
        writeln!(out, "reducible GL factors: {}", flagged.join(", ")).unwrap();
    }
    Ok((0, out))
}

fn jacquet_gl_command(
    x: &GLClass,
    levi: u32,
    universe: &Universe,
    common: &DeclArgs,
) -> Result<(i32, String), CoreError> {
    let table = jacquet_gl_direct(x, levi, universe)?;
    if common.format == "json" {
        let value = json!({
            "kind": "gl_jacquet",
            "input": glclass_to_json(x, universe),
            "levi": levi,
            "sum": sum_to_json(&table, universe),
            "max_multiplicity": table.max_multiplicity(),
        });
        return Ok((0, format!("{value:#}\n")));
    }
    let mut out = String::new();
    writeln!(out, "{}", render_sum(&table, universe)).unwrap();
    writeln!(out, "max multiplicity: {}", table.max_multiplicity()).unwrap();
    Ok((0, out))
}

fn verify_command(
    common: &DeclArgs,
    max_exp: u32,
    max_segs: usize,
    max_rank: u32,
    self_dual: Option<String>,
    jobs: usize,
) -> Result<(i32, String), CoreError> {
    let mut decls = session_declarations(common, None)?;
    if let Some(name) = self_dual {
        let existing = decls.gl.iter().find(|d| d.name == name);
        match existing {
            Some(d) if d.duality == jacquet_core::expr::Duality::SelfDual => {}
            Some(_) => {
                return Err(CoreError::Declaration {
                    line: name,
                    msg: "--self-dual names a label already declared generic".into(),
                })
            }
            None => decls.gl.push(jacquet_core::expr::GlDecl {
                name,
                rank: 1,
                duality: jacquet_core::expr::Duality::SelfDual,
            }),
        }
    }
    let universe = decls.build_universe()?;
    let bounds = SweepBounds {
        exp_min: -(max_exp as i32),
        exp_max: max_exp as i32,
        max_segments: max_segs,
        max_gl_rank: max_rank,
    };

    let report = check_theorem_main(&universe, &bounds, jobs);
    let heredity = check_lemma_heredity(bounds.exp_min - 1, bounds.exp_max + 1);

    // distinctness over the same instance space
    let mut coincidence_inputs = 0u64;
    let mut unexplained_inputs = 0u64;
    for gl in enumerate_admissible_gl_classes(&universe, &bounds) {
        for sp in universe.sp_ids() {
            let x = SpClass::new(gl.clone(), sp);
            let d = check_distinctness(&x, &universe)?;
            if d.duality_coincidences > 0 {
                coincidence_inputs += 1;
            }
            if d.unexplained_repeats > 0 {
                unexplained_inputs += 1;
            }
        }
    }

    let above_two = report
        .violations
        .iter()
        .filter(|v| v.kind == ViolationKind::MultiplicityAboveTwo)
        .count();
    let not_self_dual = report.violations.len() - above_two;
    let violation_total = report.violations.len() + heredity.len();
    let code = if violation_total > 0 { 1 } else { 0 };

    if common.format == "json" {
        let value = json!({
            "kind": "verification_report",
            "bounds": {
                "exp_min": bounds.exp_min,
                "exp_max": bounds.exp_max,
                "max_segments": bounds.max_segments,
                "max_gl_rank": bounds.max_gl_rank,
            },
            "instances": report.instances,
            "tables": report.tables,
            "max_multiplicity": report.max_multiplicity_seen,
            "multiplicity_two_terms": report.multiplicity_two_count,
            "reducible_factor_terms": report.flagged_terms,
            "heredity_violations": heredity.len(),
            "distinctness": {
                "inputs_with_duality_coincidences": coincidence_inputs,
                "inputs_with_unexplained_repeats": unexplained_inputs,
            },
            "violations": {
                "total": violation_total,
                "multiplicity_above_two": above_two,
                "multiplicity_two_not_self_dual": not_self_dual,
                "first": report.violations.first().map(|v| json!({
                    "input": spclass_to_json(&v.input, &universe),
                    "levi": v.levi_rank,
                    "term": serde_json::Value::Object(v.term.term_to_json(&universe)),
                    "multiplicity": v.multiplicity,
                })),
            },
        });
        return Ok((code, format!("{value:#}\n")));
    }

    let mut out = String::new();
    writeln!(out, "instances: {}", report.instances).unwrap();
    writeln!(out, "tables: {}", report.tables).unwrap();
    writeln!(out, "max multiplicity: {}", report.max_multiplicity_seen).unwrap();
    writeln!(
        out,
        "multiplicity-2 terms: {}",
        report.multiplicity_two_count
    )
    .unwrap();
    if let Some((input, levi, term)) = &report.sample_multiplicity_two {
        writeln!(
            out,
            "sample multiplicity-2: {} at Levi {} term {}",
            input.text(&universe),
            levi,
            term.text(&universe)
        )
        .unwrap();
    }
    writeln!(out, "reducible-factor terms: {}", report.flagged_terms).unwrap();
    writeln!(out, "heredity violations: {}", heredity.len()).unwrap();
    writeln!(
        out,
        "distinctness: {coincidence_inputs} inputs with duality coincidences, \
         {unexplained_inputs} with unexplained repeats"
    )
    .unwrap();
    writeln!(out, "violations: {violation_total}").unwrap();
    if violation_total > 0 {
        writeln!(out, "  multiplicity > 2: {above_two}").unwrap();
        writeln!(
            out,
            "  multiplicity 2, non-self-dual factor: {not_self_dual}"
        )
        .unwrap();
        if let Some(v) = report.violations.first() {
            writeln!(
                out,
                "  first: {} at Levi {} term {} multiplicity {}",
                v.input.text(&universe),
                v.levi_rank,
                v.term.text(&universe),
                v.multiplicity
            )
            .unwrap();
        }
    }
    Ok((code, out))
}

struct Fixture {
    args: Vec<String>,
    expected_exit: i32,
    expected_output: String,
}

fn parse_fixture(text: &str, name: &str) -> Result<Fixture, String> {
    let Some((header, body)) = text.split_once("---\n") else {
        return Err(format!("{name}: missing `---` separator"));
    };
    let mut args = Vec::new();
    let mut expected_exit = 0;
    for line in header.lines() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(arg) = line.strip_prefix("arg: ") {
            args.push(arg.to_owned());
        } else if let Some(code) = line.strip_prefix("exit: ") {
            expected_exit = code
                .trim()
                .parse()
                .map_err(|_| format!("{name}: bad exit code `{code}`"))?;
        } else {
            return Err(format!("{name}: unrecognized header line `{line}`"));
        }
    }
    Ok(Fixture {
        args,
        expected_exit,
        expected_output: body.to_owned(),
    })
}

fn run_fixtures(dir: &std::path::Path) -> (i32, String) {
    let mut out = String::new();
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
            .collect(),
        Err(e) => {
            return (
                2,
                format!("error: cannot read fixture dir {}: {e}\n", dir.display()),
            )
        }
    };
    entries.sort();
    if entries.is_empty() {
        return (2, format!("error: no fixtures in {}\n", dir.display()));
    }

    let mut failures = 0usize;
    for path in &entries {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                failures += 1;
                writeln!(out, "FAIL {name}: cannot read: {e}").unwrap();
                continue;
            }
        };
        let fixture = match parse_fixture(&text, &name) {
            Ok(f) => f,
            Err(msg) => {
                failures += 1;
                writeln!(out, "FAIL {msg}").unwrap();
                continue;
            }
        };
        let (code, output) = run(&fixture.args);
        if code == fixture.expected_exit && output == fixture.expected_output {
            writeln!(out, "ok {name}").unwrap();
        } else {
            failures += 1;
            writeln!(out, "FAIL {name}").unwrap();
            if code != fixture.expected_exit {
                writeln!(
                    out,
                    "  exit: expected {}, got {code}",
                    fixture.expected_exit
                )
                .unwrap();
            }
            if output != fixture.expected_output {
                writeln!(out, "  expected output:").unwrap();
                for line in fixture.expected_output.lines() {
                    writeln!(out, "  | {line}").unwrap();
                }
                writeln!(out, "  actual output:").unwrap();
                for line in output.lines() {
                    writeln!(out, "  | {line}").unwrap();
                }
            }
        }
    }
    writeln!(
        out,
        "{} passed, {failures} failed",
        entries.len() - failures
    )
    .unwrap();
    (if failures > 0 { 1 } else { 0 }, out)
}
