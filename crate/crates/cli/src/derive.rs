use std::path::PathBuf;

use anyhow::Context;
use chromatic_core::algebra::{encode_poly, PresentationFile, TermFile};
use chromatic_core::formal_groups::{LawCache, Scheme};
use chromatic_core::relation_engine::{
    derive_with, kahler_check_all, solve_for, ConclusionKind, ConclusionRecord, DerivationConfig,
    UnitCertificate, Verdict,
};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::config::RunConfig;
use crate::manifest::{json_bytes, Run};

pub const DERIVATION_SCHEMA: &str = "chromatic.derivation/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Hazewinkel,
    Araki,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Hazewinkel => Scheme::Hazewinkel,
            SchemeArg::Araki => Scheme::Araki,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeriveEmit {
    Json,
    Tex,
    Text,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    #[arg(long)]
    pub i: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Truncation order of the series identity (default p^(i+m) + p - 1).
    #[arg(long)]
    pub trunc: Option<usize>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Hazewinkel)]
    pub scheme: SchemeArg,
    #[arg(long, value_enum, default_value_t = DeriveEmit::Text)]
    pub emit: DeriveEmit,
    /// Permit n > 3 or m > 2.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long)]
    pub step_budget: Option<usize>,
}

#[derive(Serialize)]
struct Solved {
    generator: String,
    value: String,
    terms: Vec<TermFile>,
}

#[derive(Serialize)]
struct StageReport {
    stage: u32,
    verdict: Verdict,
    solving_coefficient: String,
    certificate: Option<UnitCertificate>,
    basis_bound: i32,
    differential: String,
    dt: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    dw: Option<String>,
}

#[derive(Serialize)]
struct DerivationFile {
    schema: &'static str,
    p: u32,
    i: u32,
    n: u32,
    m: u32,
    trunc: usize,
    scheme: &'static str,
    conclusions: Vec<ConclusionRecord>,
    solved: Vec<Solved>,
    etale: Vec<StageReport>,
    module_basis_size: usize,
    presentation: PresentationFile,
}

pub fn config(args: &DeriveArgs, cache_dir: Option<&PathBuf>) -> RunConfig {
    let mut c = RunConfig::new(Some(args.p), emit_name(args.emit));
    c.i = Some(args.i);
    c.n = Some(args.n);
    c.m = Some(args.m);
    c.trunc = args.trunc;
    c.cache_dir = cache_dir.cloned();
    c.budgets.max_terms = args.max_terms;
    c.budgets.rewrite_steps = args.step_budget;
    let c = c.with("scheme", Scheme::from(args.scheme).name());
    if args.allow_large {
        c.with("allow_large", true)
    } else {
        c
    }
}

fn emit_name(e: DeriveEmit) -> &'static str {
    match e {
        DeriveEmit::Json => "json",
        DeriveEmit::Tex => "tex",
        DeriveEmit::Text => "text",
    }
}

pub fn run(args: &DeriveArgs, config: RunConfig) -> anyhow::Result<Run> {
    let mut dc = DerivationConfig::new(args.p, args.i, args.n, args.m);
    dc.trunc = args.trunc;
    dc.scheme = args.scheme.into();
    dc.allow_large = args.allow_large;
    dc.cache = config.cache_dir.as_ref().map(LawCache::new);
    if let Some(t) = args.max_terms {
        dc.max_terms = t;
    }
    if let Some(s) = args.step_budget {
        dc.step_budget = s;
    }
    let (pres, state) = derive_with(&dc).context("deriving the presentation")?;
    let reports = kahler_check_all(&state).context("checking étaleness")?;

    let mut solved = Vec::new();
    for r in 1..=args.m {
        let w = format!("w_{}", args.i + r);
        if pres.ring().index_of(&w).is_none() {
            continue;
        }
        if let Ok(value) = solve_for(&pres.relations()[(r - 1) as usize], &w) {
            solved.push(Solved {
                generator: w,
                terms: encode_poly(&value),
                value: value.to_string(),
            });
        }
    }
    let basis = pres
        .module_basis_over_base()
        .context("enumerating the module basis")?;
    let expected_basis = (args.p as usize).pow(args.i * args.m);

    let mut run = Run::new("derive", config);
    for report in &reports {
        run.verdict(
            format!("stage {} étale", report.stage),
            report.verdict == Verdict::Etale,
        );
    }
    run.verdict(
        format!("module basis has p^(i·m) = {expected_basis} elements"),
        basis.len() == expected_basis,
    );

    let file = DerivationFile {
        schema: DERIVATION_SCHEMA,
        p: args.p,
        i: args.i,
        n: args.n,
        m: args.m,
        trunc: state.trunc,
        scheme: state.scheme.name(),
        conclusions: state
            .conclusions
            .iter()
            .map(ConclusionRecord::from)
            .collect(),
        solved,
        etale: reports
            .iter()
            .map(|r| StageReport {
                stage: r.stage,
                verdict: r.verdict,
                solving_coefficient: r.dt_coefficient.to_string(),
                certificate: r.certificate.clone(),
                basis_bound: r.basis_bound,
                differential: r.differential.render(),
                dt: r.dt_display(),
                dw: r.dw_display(),
            })
            .collect(),
        module_basis_size: basis.len(),
        presentation: pres.to_json(),
    };
    let json = json_bytes(&file);
    let mut tex_lines = Vec::new();
    let mut text_lines = vec![format!(
        "K({})_*E({}) at p = {}, stages 1..{}, truncated at x^{}",
        args.i, args.n, args.p, args.m, state.trunc
    )];
    for c in &state.conclusions {
        let what = match &c.kind {
            ConclusionKind::Vanishes { .. } => "vanishing".to_string(),
            ConclusionKind::Identified { .. } => "identification".to_string(),
            ConclusionKind::Stage { r } => format!("stage {r}"),
        };
        text_lines.push(format!("x^{:<4} {what:<15} {}", c.exponent, c.display()));
        tex_lines.push(format!(
            "$x^{{{}}}$ & {what} & ${} = {}$ \\\\",
            c.exponent,
            c.lhs_side.to_tex(),
            c.rhs_side.to_tex()
        ));
    }
    for s in &file.solved {
        text_lines.push(format!("solved: {} = {}", s.generator, s.value));
    }
    for r in &reports {
        let verdict = match r.verdict {
            Verdict::Etale => "étale",
            Verdict::NotCertified => "not certified",
        };
        text_lines.push(format!(
            "stage {}: {verdict}, solving coefficient {}",
            r.stage, r.dt_coefficient
        ));
        text_lines.push(format!("  {}", r.dt_display()));
        if let Some(dw) = r.dw_display() {
            text_lines.push(format!("  {dw}"));
        }
    }
    text_lines.push(format!(
        "module basis over the base: {} elements",
        basis.len()
    ));
    let mut text = text_lines.join("\n");
    text.push('\n');
    let tex = format!(
        "\\begin{{tabular}}{{rll}}\n\\hline\nexponent & conclusion & relation \\\\\n\\hline\n{}\n\\hline\n\\end{{tabular}}\n",
        tex_lines.join("\n")
    );

    run.display = match args.emit {
        DeriveEmit::Json => String::from_utf8(json.clone()).expect("json is utf-8"),
        DeriveEmit::Tex => tex.clone(),
        DeriveEmit::Text => text.clone(),
    };
    run.artifact("derivation.json", json);
    match args.emit {
        DeriveEmit::Tex => run.artifact("derivation.tex", tex.into_bytes()),
        DeriveEmit::Text => run.artifact("derivation.txt", text.into_bytes()),
        DeriveEmit::Json => {}
    }
    Ok(run)
}
