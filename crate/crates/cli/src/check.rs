use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use chromatic_core::chromatic_books::{
    bokstedt_collapse_check, conjecture_check, cube_tex, e2_splitting_check, thh_page,
    ConjectureCheck, E2Page, TargetStatus,
};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{usage, RunConfig};
use crate::manifest::{json_bytes, Run};

pub const CONJECTURE_SCHEMA: &str = "chromatic.conjecture-check/v1";
pub const SPLITTING_SCHEMA: &str = "chromatic.e2-splitting/v1";
pub const COLLAPSE_SCHEMA: &str = "chromatic.collapse-certificate/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportEmit {
    Json,
    Tex,
    Text,
}

impl ReportEmit {
    fn name(self) -> &'static str {
        match self {
            ReportEmit::Json => "json",
            ReportEmit::Tex => "tex",
            ReportEmit::Text => "text",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Compare the conjectured splitting of THH(E(n)) with its K(i)-homology.
    Conjecture {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// A single height; all of 0..=n by default.
        #[arg(long)]
        i: Option<u32>,
        #[arg(long, value_enum, default_value_t = ReportEmit::Text)]
        emit: ReportEmit,
    },
    /// Check the stated splitting of THH(E(2)) against K(0), K(1) and K(2).
    E2Splitting {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, value_enum, default_value_t = ReportEmit::Text)]
        emit: ReportEmit,
    },
    /// Degree-reason collapse of a Bökstedt E^2 page.
    Collapse(CollapseArgs),
}

#[derive(Debug, Args)]
pub struct CollapseArgs {
    /// Page file (schema chromatic.e2-page/v1).
    #[arg(long, conflicts_with_all = ["n", "i"])]
    pub page: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    /// Use the K(i)_*THH(E(n)) page instead of a file.
    #[arg(long, requires = "i")]
    pub n: Option<u32>,
    #[arg(long, requires = "n")]
    pub i: Option<u32>,
    #[arg(long, value_enum, default_value_t = ReportEmit::Text)]
    pub emit: ReportEmit,
}

pub fn config(cmd: &CheckCommand) -> RunConfig {
    match cmd {
        CheckCommand::Conjecture { p, n, i, emit } => {
            let mut c = RunConfig::new(Some(*p), emit.name()).with("check", "conjecture");
            c.n = Some(*n);
            c.i = *i;
            c
        }
        CheckCommand::E2Splitting { p, emit } => {
            RunConfig::new(Some(*p), emit.name()).with("check", "e2-splitting")
        }
        CheckCommand::Collapse(a) => {
            let mut c = RunConfig::new(Some(a.p), a.emit.name()).with("check", "collapse");
            c.n = a.n;
            c.i = a.i;
            match &a.page {
                Some(path) => c.with("page", path.display().to_string()),
                None => c,
            }
        }
    }
}

#[derive(Serialize)]
struct ConjectureFile<'a> {
    schema: &'static str,
    p: u32,
    n: u32,
    checks: &'a [ConjectureCheck],
    consistent: bool,
}

fn multiset(d: &[i32]) -> String {
    let items: Vec<String> = d.iter().map(i32::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn emit(run: &mut Run, stem: &str, kind: ReportEmit, json: Vec<u8>, tex: String, text: String) {
    run.display = match kind {
        ReportEmit::Json => String::from_utf8(json.clone()).expect("json is utf-8"),
        ReportEmit::Tex => tex.clone(),
        ReportEmit::Text => text.clone(),
    };
    run.artifact(format!("{stem}.json"), json);
    match kind {
        ReportEmit::Tex => run.artifact(format!("{stem}.tex"), tex.into_bytes()),
        ReportEmit::Text => run.artifact(format!("{stem}.txt"), text.into_bytes()),
        ReportEmit::Json => {}
    }
}

pub fn run(cmd: &CheckCommand, config: RunConfig) -> anyhow::Result<Run> {
    let mut run = Run::new("check", config);
    match cmd {
        CheckCommand::Conjecture {
            p,
            n,
            i,
            emit: kind,
        } => {
            let heights: Vec<u32> = match i {
                Some(i) => vec![*i],
                None => (0..=*n).collect(),
            };
            let checks = heights
                .iter()
                .map(|&i| conjecture_check(*p, *n, i))
                .collect::<chromatic_core::Result<Vec<_>>>()?;
            let mut text = format!("THH(E({n})) at p = {p}\n");
            for c in &checks {
                run.verdict(format!("K({}) consistent", c.i), c.consistent());
                let status = match (c.consistent(), c.comparison.exact) {
                    (true, true) => "consistent (exact)",
                    (true, false) => "consistent",
                    (false, _) => "INCONSISTENT",
                };
                text.push_str(&format!(
                    "K({}): {status}; conjectured {} expected {} mod {}\n",
                    c.i,
                    multiset(&c.conjectured.degrees),
                    multiset(&c.expected.degrees),
                    c.comparison.lattice
                ));
            }
            let consistent = checks.iter().all(ConjectureCheck::consistent);
            text.push_str(&format!(
                "verdict: {}\n",
                if consistent {
                    "consistent"
                } else {
                    "inconsistent"
                }
            ));
            let file = ConjectureFile {
                schema: CONJECTURE_SCHEMA,
                p: *p,
                n: *n,
                checks: &checks,
                consistent,
            };
            emit(
                &mut run,
                "conjecture",
                *kind,
                json_bytes(&file),
                cube_tex(*p, *n)?,
                text,
            );
        }
        CheckCommand::E2Splitting { p, emit: kind } => {
            let check = e2_splitting_check(*p)?;
            run.verdict(
                "stated summands match the conjecture",
                check.matches_conjecture,
            );
            for c in &check.checks {
                run.verdict(format!("K({}) consistent", c.i), c.consistent());
            }
            run.verdict("splitting consistent", check.consistent);
            let mut text = format!("THH(E(2)) at p = {p}\n");
            text.push_str(&format!("K(0) degrees: {}\n", multiset(&check.k0_degrees)));
            text.push_str(&format!(
                "K(0) degrees without E: {}\n",
                multiset(&check.reduced_k0_degrees)
            ));
            for c in &check.checks {
                text.push_str(&format!(
                    "K({}): {} mod {}\n",
                    c.i,
                    if c.consistent() {
                        "consistent"
                    } else {
                        "INCONSISTENT"
                    },
                    c.comparison.lattice
                ));
            }
            text.push_str(&format!(
                "verdict: {}\n",
                if check.consistent {
                    "consistent"
                } else {
                    "inconsistent"
                }
            ));
            #[derive(Serialize)]
            struct File<'a> {
                schema: &'static str,
                #[serde(flatten)]
                check: &'a chromatic_core::chromatic_books::SplittingCheck,
            }
            let json = json_bytes(&File {
                schema: SPLITTING_SCHEMA,
                check: &check,
            });
            emit(
                &mut run,
                "e2-splitting",
                *kind,
                json,
                cube_tex(*p, 2)?,
                text,
            );
        }
        CheckCommand::Collapse(a) => {
            let (page, input) = match (&a.page, a.n, a.i) {
                (Some(path), _, _) => {
                    let bytes =
                        fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                    let text =
                        String::from_utf8(bytes.clone()).context("page file is not UTF-8")?;
                    let page = E2Page::from_json_str(&text)
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    (page, Some((path.clone(), bytes)))
                }
                (None, Some(n), Some(i)) => (thh_page(a.p, n, i)?, None),
                _ => return Err(usage("check collapse needs --page FILE or --n N --i I")),
            };
            if let Some((path, bytes)) = input {
                run.input(&path, &bytes);
            }
            let cert = bokstedt_collapse_check(&page);
            run.verdict(format!("{} collapses", cert.label), cert.collapses);
            let mut text = format!("{}\n", cert.label);
            for c in &cert.checks {
                let status = match c.status {
                    TargetStatus::NegativeColumn => "negative column",
                    TargetStatus::Empty => "zero target",
                    TargetStatus::Plausible => "CANDIDATE",
                };
                text.push_str(&format!(
                    "d^{} {} -> ({}, {}): {status}\n",
                    c.r, c.generator, c.target.0, c.target.1
                ));
            }
            text.push_str(&format!(
                "verdict: {}\n",
                if cert.collapses {
                    "collapses"
                } else {
                    "candidate differentials"
                }
            ));
            let mut tex = String::from("\\begin{tabular}{llll}\n\\hline\n$r$ & generator & target & status \\\\\n\\hline\n");
            for c in &cert.checks {
                tex.push_str(&format!(
                    "{} & ${}$ & $({}, {})$ & {:?} \\\\\n",
                    c.r, c.generator, c.target.0, c.target.1, c.status
                ));
            }
            tex.push_str("\\hline\n\\end{tabular}\n");
            #[derive(Serialize)]
            struct File<'a> {
                schema: &'static str,
                page: &'a E2Page,
                #[serde(flatten)]
                certificate: &'a chromatic_core::chromatic_books::CollapseCertificate,
            }
            let json = json_bytes(&File {
                schema: COLLAPSE_SCHEMA,
                page: &page,
                certificate: &cert,
            });
            emit(&mut run, "collapse", a.emit, json, tex, text);
        }
    }
    Ok(run)
}
