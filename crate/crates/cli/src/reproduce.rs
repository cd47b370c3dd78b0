use std::collections::BTreeMap;
use std::thread;

use anyhow::{anyhow, ensure};
use chromatic_core::algebra::{parse_poly, Field, Generator, GradedPoly, PolyRing, Presentation};
use chromatic_core::chromatic_books::{
    bokstedt_collapse_check, conjecture_check, conjectured_summands, e2_splitting_check,
    thh_ki_expected, thh_page,
};
use chromatic_core::formal_groups::{universal_law, Scheme};
use chromatic_core::hochschild::{compare_methods, hh_bar, hh_hkr, hh_koszul, EtaleCertificate};
use chromatic_core::relation_engine::{
    derive_presentation, kahler_check_all, ppower_sweep, sigma_n_presentation, solve_for,
    ConclusionKind, Verdict,
};
use clap::Args;
use serde::Serialize;

use crate::config::{usage, RunConfig};
use crate::manifest::{json_bytes, Run};

pub const REPORT_SCHEMA: &str = "chromatic.reproduce/v1";

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    /// Comma-separated fixture names; an empty list selects nothing.
    #[arg(long, value_delimiter = ',')]
    pub fixtures: Option<Vec<String>>,
    /// Print the available fixtures and exit.
    #[arg(long)]
    pub list: bool,
}

type Check = fn(u32) -> anyhow::Result<String>;

pub struct Fixture {
    pub name: &'static str,
    pub about: &'static str,
    check: Check,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "sigma-match",
        about: "i = n derivations equal v_n t_r^(p^n) - v_n^(p^r) t_r",
        check: sigma_match,
    },
    Fixture {
        name: "first-stage-relation",
        about: "K(1)_*E(2) stage 1 is v_1 t_1^p + w_2 = t_1 v_1^p, with w_1 = v_1",
        check: first_stage_relation,
    },
    Fixture {
        name: "etale-tower",
        about: "every derived stage is étale with a v_i-power solving coefficient; rank p^(i·m)",
        check: etale_tower,
    },
    Fixture {
        name: "eta-r-identity",
        about: "w_2 = v_1^p t_1 - v_1 t_1^p and dw_2 = v_1^p dt_1",
        check: eta_r_identity,
    },
    Fixture {
        name: "ppower-sums",
        about: "no p-power is a sum of 2-4 distinct smaller p-powers",
        check: ppower_sums,
    },
    Fixture {
        name: "hh-rational-shape",
        about: "Koszul and HKR agree on Q[v_1, ..., v_n^±1] for n <= 3",
        check: hh_rational_shape,
    },
    Fixture {
        name: "hh-bar-oracle",
        about: "bar complex agrees with HKR on a specialized stage; dual numbers by hand",
        check: hh_bar_oracle,
    },
    Fixture {
        name: "collapse",
        about: "K(i)_*THH(E(n)) Bökstedt pages collapse for n <= 3",
        check: collapse,
    },
    Fixture {
        name: "thh-degrees",
        about: "K(i)-degrees of THH(E(2)) from the exterior generators dw_j",
        check: thh_degrees,
    },
    Fixture {
        name: "e2-splitting",
        about: "the stated splitting of THH(E(2)) against K(0), K(1), K(2)",
        check: e2_splitting,
    },
    Fixture {
        name: "conjecture-grid",
        about: "conjectured splittings are consistent for n <= 4, anchored at n = 1",
        check: conjecture_grid,
    },
    Fixture {
        name: "fgl-integrality",
        about: "universal law coefficients through degree 2(p^2 - 1) are p-local in v_1, v_2",
        check: fgl_integrality,
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    p: u32,
    fixtures: &'a [FixtureResult],
    passed: bool,
}

pub fn config(args: &ReproduceArgs) -> RunConfig {
    let c = RunConfig::new(Some(args.p), "json");
    match &args.fixtures {
        Some(list) => c.with("fixtures", list),
        None => c,
    }
}

fn select(args: &ReproduceArgs) -> anyhow::Result<Vec<&'static Fixture>> {
    let Some(list) = &args.fixtures else {
        return Ok(FIXTURES.iter().collect());
    };
    list.iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|name| {
            FIXTURES
                .iter()
                .find(|f| f.name == name)
                .ok_or_else(|| usage(format!("unknown fixture `{name}`; see --list")))
        })
        .collect()
}

/// Runs the selected fixtures concurrently; failures and panics are recorded
/// per fixture.
pub fn run_fixtures(p: u32, fixtures: &[&'static Fixture]) -> Vec<FixtureResult> {
    thread::scope(|scope| {
        let handles: Vec<_> = fixtures
            .iter()
            .map(|f| (f.name, scope.spawn(move || (f.check)(p))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let (passed, detail) = match h.join() {
                    Ok(Ok(detail)) => (true, detail),
                    Ok(Err(e)) => (false, format!("{e:#}")),
                    Err(_) => (false, "panicked".to_string()),
                };
                FixtureResult {
                    name: name.to_string(),
                    passed,
                    detail,
                }
            })
            .collect()
    })
}

pub fn run(args: &ReproduceArgs, config: RunConfig) -> anyhow::Result<Run> {
    let mut run = Run::new("reproduce", config);
    if args.list {
        run.display = FIXTURES
            .iter()
            .map(|f| format!("{:<22} {}\n", f.name, f.about))
            .collect();
        return Ok(run);
    }
    let selected = select(args)?;
    let results = run_fixtures(args.p, &selected);
    for r in &results {
        run.verdict(r.name.clone(), r.passed);
    }
    let report = Report {
        schema: REPORT_SCHEMA,
        p: args.p,
        fixtures: &results,
        passed: results.iter().all(|r| r.passed),
    };
    let mut text = format!("{:<22} {:<6} detail\n", "fixture", format!("p={}", args.p));
    for r in &results {
        let mark = if r.passed { "pass" } else { "FAIL" };
        text.push_str(&format!("{:<22} {mark:<6} {}\n", r.name, r.detail));
    }
    run.artifact("reproduce.json", json_bytes(&report));
    run.artifact("reproduce.txt", text.clone().into_bytes());
    run.display = text;
    Ok(run)
}

fn poly(ring: &std::sync::Arc<PolyRing>, s: &str) -> anyhow::Result<GradedPoly> {
    Ok(parse_poly(ring, s)?)
}

fn sigma_match(p: u32) -> anyhow::Result<String> {
    let cases: &[(u32, u32)] = if p == 3 { &[(1, 2), (2, 1)] } else { &[(1, 1)] };
    for &(n, m) in cases {
        sigma_n_presentation(p, n, m)?;
    }
    let shown: Vec<String> = cases
        .iter()
        .map(|(n, m)| format!("(n={n}, m={m})"))
        .collect();
    Ok(shown.join(" "))
}

fn first_stage_relation(p: u32) -> anyhow::Result<String> {
    let (_, state) = derive_presentation(p, 1, 2, 1)?;
    let identified = state.conclusions.iter().any(|c| {
        c.kind
            == ConclusionKind::Identified {
                generator: "w_1".into(),
                with: "v_1".into(),
            }
    });
    ensure!(identified, "w_1 = v_1 was not concluded");
    let stage = state.stage(1)?;
    let ring = stage.lhs_side.ring();
    ensure!(
        stage.lhs_side == poly(ring, &format!("v_1 t_1^{p} + w_2"))?,
        "left side is {}",
        stage.lhs_side
    );
    ensure!(
        stage.rhs_side == poly(ring, &format!("t_1 v_1^{p}"))?,
        "right side is {}",
        stage.rhs_side
    );
    Ok(stage.display())
}

fn etale_tower(p: u32) -> anyhow::Result<String> {
    let grid: &[(u32, u32, u32)] = match p {
        3 => &[(1, 1, 1), (1, 2, 1), (1, 2, 2), (2, 2, 1), (1, 3, 1)],
        5 => &[(1, 1, 1), (1, 2, 1), (2, 2, 1)],
        _ => &[(1, 1, 1), (1, 2, 1)],
    };
    for &(i, n, m) in grid {
        let (pres, state) = derive_presentation(p, i, n, m)?;
        for report in kahler_check_all(&state)? {
            ensure!(
                report.verdict == Verdict::Etale,
                "(i, n, m) = ({i}, {n}, {m}) stage {} not certified",
                report.stage
            );
            let cert = report
                .certificate
                .ok_or_else(|| anyhow!("stage {} has no unit", report.stage))?;
            ensure!(
                cert.generator == format!("v_{i}"),
                "solving coefficient is not a power of v_{i}"
            );
        }
        let rank = pres.module_basis_over_base()?.len();
        ensure!(
            rank == (p as usize).pow(i * m),
            "(i, n, m) = ({i}, {n}, {m}) has rank {rank}"
        );
    }
    Ok(format!("{} towers", grid.len()))
}

fn eta_r_identity(p: u32) -> anyhow::Result<String> {
    let (pres, state) = derive_presentation(p, 1, 2, 1)?;
    let ring = pres.ring();
    let w2 = solve_for(&pres.relations()[0], "w_2")?;
    ensure!(
        w2 == poly(ring, &format!("v_1^{p} t_1 - v_1 t_1^{p}"))?,
        "w_2 solves to {w2}"
    );
    let reports = kahler_check_all(&state)?;
    let (w, form) = reports[0]
        .dw_identity
        .clone()
        .ok_or_else(|| anyhow!("no dw_2 identity"))?;
    let expected = BTreeMap::from([("t_1".to_string(), poly(ring, &format!("v_1^{p}"))?)]);
    ensure!(
        w == "w_2" && form.terms == expected,
        "d{w} = {}",
        form.render()
    );
    Ok(format!(
        "w_2 = {w2}; {}",
        reports[0].dw_display().unwrap_or_default()
    ))
}

fn ppower_sums(p: u32) -> anyhow::Result<String> {
    let sweep = ppower_sweep(p, 8, 8, (2, 4))?;
    ensure!(
        sweep.counterexamples.is_empty(),
        "counterexamples: {:?}",
        sweep.counterexamples
    );
    Ok(format!("{} cases, no counterexamples", sweep.checked))
}

fn hh_rational_shape(p: u32) -> anyhow::Result<String> {
    let mut widths = Vec::new();
    for n in 1..=3u32 {
        let deg = |k: u32| 2 * (p.pow(k) as i32 - 1);
        let mut gens: Vec<Generator> = (1..n)
            .map(|k| Generator::new(format!("v_{k}"), deg(k)))
            .collect();
        gens.push(Generator::unit(format!("v_{n}"), deg(n)));
        let ring = PolyRing::new(Field::Rational, gens.clone())?;
        let pres = Presentation::free(&ring);
        let window = (0, 3 * deg(n));
        let koszul = hh_koszul(&gens, n, window)?;
        let all: Vec<&str> = gens.iter().map(|g| g.name.as_str()).collect();
        let answer = hh_hkr(&pres, &all, None)?;
        let degrees: Vec<i32> = answer.exterior.iter().map(|g| g.internal_degree).collect();
        ensure!(
            degrees == (1..=n).map(deg).collect::<Vec<_>>(),
            "exterior degrees {degrees:?}"
        );
        let vn = format!("v_{n}");
        let hkr = answer.table(n, window, &[vn.as_str()])?;
        compare_methods(&[&koszul, &hkr])?.require_empty()?;
        widths.push(format!("n={n}: 0..{}", window.1));
    }
    Ok(widths.join(", "))
}

fn hh_bar_oracle(p: u32) -> anyhow::Result<String> {
    let f = Field::prime(p)?;
    // v_1 = 1 with a unit w_2 leaves a finite étale F_p-algebra of rank p
    let (pres, values) = if p == 3 {
        let (pres, _) = derive_presentation(3, 1, 3, 1)?;
        (
            pres,
            vec![("v_1", f.one()), ("w_2", f.zero()), ("w_3", f.one())],
        )
    } else {
        let (pres, _) = derive_presentation(p, 1, 2, 1)?;
        (pres, vec![("v_1", f.one()), ("w_2", f.one())])
    };
    let (special, _) = pres.specialize(&values)?;
    let bar = hh_bar(&special, 4)?;
    let cert = EtaleCertificate::jacobian(&special)?;
    let hkr = hh_hkr(&special, &[], Some(&cert))?.table(4, (0, 0), &[])?;
    compare_methods(&[&bar, &hkr])?.require_empty()?;
    ensure!(
        bar.concentrated_in_degree_zero(),
        "higher Hochschild homology survives"
    );
    ensure!(
        bar.total_rank(0) == p as u64,
        "HH_0 has rank {}",
        bar.total_rank(0)
    );

    // Q[x]/(x^2), |x| = 2: one class in (0,0), (0,2) and in (2k-1, 4k-2),
    // (2k, 4k+2) for k >= 1
    let ring = PolyRing::new(Field::Rational, vec![Generator::new("x", 2)])?;
    let dual = Presentation::new(&ring, vec![poly(&ring, "x^2")?], &[])?;
    let table = hh_bar(&dual, 4)?;
    let entries: Vec<(u32, i32, u64)> = table.entries().collect();
    let hand = vec![
        (0, 0, 1),
        (0, 2, 1),
        (1, 2, 1),
        (2, 6, 1),
        (3, 6, 1),
        (4, 10, 1),
    ];
    ensure!(entries == hand, "dual numbers: {entries:?}");
    Ok(format!("HH_0 rank {p}, dual numbers match"))
}

fn collapse(p: u32) -> anyhow::Result<String> {
    let mut pages = 0;
    for n in 1..=3 {
        for i in 0..=n {
            let cert = bokstedt_collapse_check(&thh_page(p, n, i)?);
            ensure!(cert.collapses, "{} has candidate differentials", cert.label);
            pages += 1;
        }
    }
    Ok(format!("{pages} pages collapse"))
}

fn thh_degrees(p: u32) -> anyhow::Result<String> {
    let p_ = p as i32;
    let cases = [
        (
            0,
            vec![0, 2 * p_ - 1, 2 * p_ * p_ - 1, 2 * p_ * p_ + 2 * p_ - 2],
        ),
        (1, vec![0, 2 * p_ * p_ - 1]),
        (2, vec![0]),
    ];
    for (i, expected) in cases {
        let got = thh_ki_expected(p, 2, i)?.degrees;
        ensure!(got == expected, "K({i}): {got:?}");
    }
    Ok("K(0), K(1), K(2) degrees match".into())
}

fn e2_splitting(p: u32) -> anyhow::Result<String> {
    let check = e2_splitting_check(p)?;
    ensure!(check.consistent, "inconsistent: {check:?}");
    Ok(format!("K(0) degrees {:?}", check.k0_degrees))
}

fn conjecture_grid(p: u32) -> anyhow::Result<String> {
    let mut checked = 0;
    for n in 1..=4 {
        for i in 0..=n {
            let c = conjecture_check(p, n, i)?;
            ensure!(c.consistent(), "inconsistent at n = {n}, i = {i}");
            checked += 1;
        }
    }
    let anchor = conjectured_summands(p, 1)?.ki_degrees(0);
    let p_ = p as i32;
    ensure!(anchor == vec![0, 2 * p_ - 1], "n = 1 degrees {anchor:?}");
    Ok(format!("{checked} checks; n = 1 degrees {anchor:?}"))
}

fn fgl_integrality(p: u32) -> anyhow::Result<String> {
    let order = (p * p) as usize;
    let law = universal_law(p, order, Scheme::Hazewinkel)?;
    let names: Vec<&str> = law.ring().gens().iter().map(|g| g.name.as_str()).collect();
    ensure!(
        names == ["v_1", "v_2"],
        "coefficient ring generators {names:?}"
    );
    let mut count = 0;
    for j in 0..=order {
        for k in 0..=order - j {
            for (_, c) in law.coeff(j, k).terms() {
                ensure!(c.is_p_local(p), "a_{j},{k} has coefficient {c}");
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} coefficients through x^a y^b, a + b <= {order}"
    ))
}
