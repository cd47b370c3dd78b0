use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use chromatic_core::algebra::{Coeff, Presentation};
use chromatic_core::hochschild::{
    compare_methods, hh_bar_with_budget, hh_hkr, hh_koszul, BigradedTable, EtaleCertificate,
    Method, BAR_COLUMN_BUDGET,
};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::config::{usage, RunConfig, Window};
use crate::manifest::{json_bytes, Run};

pub const COMPARISON_SCHEMA: &str = "chromatic.hh-comparison/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Hkr,
    Koszul,
    Bar,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Hkr => Method::Hkr,
            MethodArg::Koszul => Method::Koszul,
            MethodArg::Bar => Method::Bar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableEmit {
    Json,
    Csv,
    Tex,
}

#[derive(Debug, Args)]
pub struct HhArgs {
    /// Presentation file (schema chromatic.presentation/v1).
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Hkr)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 4)]
    pub smax: u32,
    /// Internal degrees `lo..hi`, inclusive.
    #[arg(long, default_value = "0..48", allow_hyphen_values = true)]
    pub window: Window,
    /// Generators contributing `dg` (default: all generators without
    /// relations, the base generators otherwise).
    #[arg(long, value_delimiter = ',')]
    pub smooth: Option<Vec<String>>,
    /// Generators ranks are counted over (default: the invertible ones).
    #[arg(long, value_delimiter = ',')]
    pub scalars: Option<Vec<String>>,
    /// Set generators to scalars first, e.g. `v_1=1,w_2=0`.
    #[arg(long, value_delimiter = ',')]
    pub specialize: Vec<String>,
    /// Also run every other applicable method and require agreement.
    #[arg(long)]
    pub compare: bool,
    #[arg(long, default_value_t = BAR_COLUMN_BUDGET)]
    pub bar_budget: usize,
    #[arg(long, value_enum, default_value_t = TableEmit::Json)]
    pub emit: TableEmit,
}

pub fn config(args: &HhArgs) -> RunConfig {
    let emit = match args.emit {
        TableEmit::Json => "json",
        TableEmit::Csv => "csv",
        TableEmit::Tex => "tex",
    };
    let mut c = RunConfig::new(None, emit);
    c.s_max = Some(args.smax);
    c.window = Some(args.window);
    c.budgets.bar_column = Some(args.bar_budget);
    let mut c = c
        .with("algebra", args.algebra.display().to_string())
        .with("method", Method::from(args.method).name());
    if let Some(s) = &args.smooth {
        c = c.with("smooth", s);
    }
    if let Some(s) = &args.scalars {
        c = c.with("scalars", s);
    }
    if !args.specialize.is_empty() {
        c = c.with("specialize", &args.specialize);
    }
    if args.compare {
        c = c.with("compare", true);
    }
    c
}

fn names(list: &[String]) -> Vec<&str> {
    list.iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_assignments(pres: &Presentation, list: &[String]) -> anyhow::Result<Vec<(String, Coeff)>> {
    let mut out = Vec::new();
    for item in names(list) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("--specialize expects name=value, found `{item}`")))?;
        let c = pres
            .field()
            .parse(value.trim())
            .map_err(|e| usage(format!("--specialize {item}: {e}")))?;
        out.push((name.trim().to_string(), c));
    }
    Ok(out)
}

#[derive(Serialize)]
struct Skipped {
    method: &'static str,
    reason: String,
}

#[derive(Serialize)]
struct ComparisonFile {
    schema: &'static str,
    methods: Vec<&'static str>,
    skipped: Vec<Skipped>,
    agree: bool,
    differences: chromatic_core::hochschild::DiffReport,
}

struct Computed {
    table: BigradedTable,
    certificate: Option<EtaleCertificate>,
}

fn compute(pres: &Presentation, method: Method, args: &HhArgs) -> anyhow::Result<Computed> {
    let window = (args.window.lo, args.window.hi);
    match method {
        Method::Koszul => {
            if !pres.relations().is_empty() {
                bail!("the Koszul route needs a free algebra; this one has relations");
            }
            Ok(Computed {
                table: hh_koszul(pres.ring().gens(), args.smax, window)?,
                certificate: None,
            })
        }
        Method::Bar => Ok(Computed {
            table: hh_bar_with_budget(pres, args.smax, args.bar_budget)?
                .restrict(args.smax, window),
            certificate: None,
        }),
        Method::Hkr => {
            let ring = pres.ring();
            let certificate = if pres.relations().is_empty() {
                None
            } else {
                Some(
                    EtaleCertificate::jacobian(pres)
                        .context("no étale certificate; refusing the HKR route")?,
                )
            };
            let smooth: Vec<&str> = match &args.smooth {
                Some(list) => names(list),
                None if pres.relations().is_empty() => {
                    ring.gens().iter().map(|g| g.name.as_str()).collect()
                }
                None => pres.base_names(),
            };
            let over: Vec<&str> = match &args.scalars {
                Some(list) => names(list),
                None => ring
                    .gens()
                    .iter()
                    .filter(|g| g.invertible)
                    .map(|g| g.name.as_str())
                    .collect(),
            };
            let answer = hh_hkr(pres, &smooth, certificate.as_ref())?;
            Ok(Computed {
                table: answer.table(args.smax, window, &over)?,
                certificate,
            })
        }
    }
}

pub fn run(args: &HhArgs, config: RunConfig) -> anyhow::Result<Run> {
    let bytes =
        fs::read(&args.algebra).with_context(|| format!("reading {}", args.algebra.display()))?;
    let text = String::from_utf8(bytes.clone()).context("presentation file is not UTF-8")?;
    let original = Presentation::from_json_str(&text)
        .map_err(|e| usage(format!("{}: {e}", args.algebra.display())))?;
    let assignments = parse_assignments(&original, &args.specialize)?;
    let (pres, record) = if assignments.is_empty() {
        (original, None)
    } else {
        let values: Vec<(&str, Coeff)> = assignments
            .iter()
            .map(|(n, c)| (n.as_str(), c.clone()))
            .collect();
        let (special, record) = original.specialize(&values)?;
        (special, Some(record))
    };

    let mut run = Run::new("hh", config);
    run.input(&args.algebra, &bytes);
    let primary = Method::from(args.method);
    let mut computed = compute(&pres, primary, args)?;
    computed.table.specialization = record.clone();

    if let Some(cert) = &computed.certificate {
        run.artifact("certificate.json", json_bytes(cert));
    }
    let json = computed.table.to_json_string();
    let rendered = match args.emit {
        TableEmit::Json => json.clone(),
        TableEmit::Csv => computed.table.to_csv(),
        TableEmit::Tex => computed.table.to_tex(),
    };
    run.artifact(format!("hh-{}.json", primary.name()), json.into_bytes());
    match args.emit {
        TableEmit::Csv => run.artifact(
            format!("hh-{}.csv", primary.name()),
            rendered.clone().into_bytes(),
        ),
        TableEmit::Tex => run.artifact(
            format!("hh-{}.tex", primary.name()),
            rendered.clone().into_bytes(),
        ),
        TableEmit::Json => {}
    }
    run.verdict(format!("{} table computed", primary.name()), true);

    if args.compare {
        let mut tables = vec![computed.table];
        let mut skipped = Vec::new();
        for other in [Method::Hkr, Method::Koszul, Method::Bar] {
            if other == primary {
                continue;
            }
            match compute(&pres, other, args) {
                Ok(c) => tables.push(c.table),
                Err(e) => skipped.push(Skipped {
                    method: other.name(),
                    reason: format!("{e:#}"),
                }),
            }
        }
        let refs: Vec<&BigradedTable> = tables.iter().collect();
        let report = compare_methods(&refs)?;
        let agree = report.is_empty();
        run.verdict("methods agree", agree);
        let file = ComparisonFile {
            schema: COMPARISON_SCHEMA,
            methods: tables.iter().map(|t| t.method.name()).collect(),
            skipped,
            agree,
            differences: report,
        };
        run.artifact("hh-comparison.json", json_bytes(&file));
    }
    run.display = rendered;
    Ok(run)
}
