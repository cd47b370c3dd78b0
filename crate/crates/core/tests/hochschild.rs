use chromatic_core::algebra::{Field, Generator, PolyRing, Presentation};
use chromatic_core::hochschild::{
    bar_slices, compare_methods, hh_bar, hh_bar_specialized, hh_bar_with_budget, hh_hkr, hh_koszul,
    BigradedTable, CertificateSource, EtaleCertificate, FiniteAlgebra, Method,
};
use chromatic_core::relation_engine::{derive_presentation, kahler_check_all};
use chromatic_core::Error;

const DUAL_NUMBERS_FIXTURE: &str = include_str!("fixtures/bar_dual_numbers.json");

fn truncated(field: Field, gens: Vec<Generator>, rels: &[&str]) -> Presentation {
    let ring = PolyRing::new(field, gens).unwrap();
    let rels = rels
        .iter()
        .map(|r| chromatic_core::algebra::parse_poly(&ring, r).unwrap())
        .collect();
    Presentation::new(&ring, rels, &[]).unwrap()
}

fn artin_schreier() -> Presentation {
    truncated(
        Field::prime(3).unwrap(),
        vec![Generator::new("t", 0)],
        &["t^3 - t"],
    )
}

fn dual_numbers() -> Presentation {
    truncated(Field::Rational, vec![Generator::new("x", 2)], &["x^2"])
}

#[test]
fn separable_cubic_is_concentrated_in_degree_zero() {
    let table = hh_bar(&artin_schreier(), 4).unwrap();
    assert_eq!(table.entries().collect::<Vec<_>>(), vec![(0, 0, 3)]);
}

#[test]
fn normalized_differentials_of_the_cubic() {
    let alg = FiniteAlgebra::new(&artin_schreier()).unwrap();
    let slices = bar_slices(&alg, 2, 10_000).unwrap();
    assert_eq!(slices.len(), 1);
    let slice = &slices[0];
    // A ⊗ Ā^{⊗s} has dimension 3 * 2^s
    assert_eq!(slice.ranks, vec![3, 6, 12, 24]);
    // d_1(a ⊗ b) = ab - ba vanishes; d_2 hits all of A ⊗ Ā
    assert_eq!(slice.differentials[1].rank(), 0);
    assert_eq!(slice.differentials[2].rank(), 6);
    slice.check_dd().unwrap();
}

#[test]
fn ground_field() {
    let f3 = truncated(Field::prime(3).unwrap(), vec![], &[]);
    let table = hh_bar(&f3, 4).unwrap();
    assert_eq!(table.entries().collect::<Vec<_>>(), vec![(0, 0, 1)]);
}

/// HH of `Q[x]/(x^2)`, `|x| = 2`: the chain `1 ⊗ x^{⊗s}` has boundary
/// `(1 + (-1)^s) x ⊗ x^{⊗ s-1}`, so classes sit at `(s, 2s)` for odd `s`
/// (and `s = 0`) and at `(s, 2s + 2)` for even `s`.
fn dual_numbers_oracle(s_max: u32) -> Vec<(u32, i32, u64)> {
    let mut out = Vec::new();
    for s in 0..=s_max {
        if s == 0 || s % 2 == 1 {
            out.push((s, 2 * s as i32, 1));
        }
        if s % 2 == 0 {
            out.push((s, 2 * s as i32 + 2, 1));
        }
    }
    out.sort();
    out
}

#[test]
fn dual_numbers_match_hand_computation_and_fixture() {
    let table = hh_bar(&dual_numbers(), 4).unwrap();
    assert_eq!(table.entries().collect::<Vec<_>>(), dual_numbers_oracle(4));
    let recorded = BigradedTable::from_json_str(DUAL_NUMBERS_FIXTURE).unwrap();
    assert_eq!(table, recorded);
    assert_eq!(table.to_json_string(), DUAL_NUMBERS_FIXTURE);
    let again = hh_bar(&dual_numbers(), 4).unwrap();
    assert!(compare_methods(&[&table, &again]).unwrap().is_empty());
}

#[test]
fn zeroth_homology_is_the_algebra() {
    let pres = truncated(
        Field::prime(5).unwrap(),
        vec![Generator::new("y", 4), Generator::new("x", 2)],
        &["x^3", "y^2 - x^2 y"],
    );
    let table = hh_bar(&pres, 1).unwrap();
    let counts = pres.hilbert_counts(-10, 40, &[]).unwrap();
    let zero: Vec<(i32, u64)> = table
        .entries()
        .filter(|e| e.0 == 0)
        .map(|e| (e.1, e.2))
        .collect();
    assert_eq!(zero, counts.into_iter().collect::<Vec<_>>());
}

#[test]
fn exterior_algebra_signs_square_to_zero() {
    let pres = truncated(
        Field::Rational,
        vec![Generator::new("e", 3), Generator::new("f", 5)],
        &[],
    );
    let alg = FiniteAlgebra::new(&pres).unwrap();
    assert_eq!(alg.dim(), 4);
    for slice in bar_slices(&alg, 3, 10_000).unwrap() {
        slice.check_dd().unwrap();
    }
}

#[test]
fn budget_is_enforced() {
    let err = hh_bar_with_budget(&artin_schreier(), 4, 50).unwrap_err();
    assert!(matches!(err, Error::Budget { limit: 50, .. }));
}

#[test]
fn koszul_small_windows() {
    let v1 = Generator::new("v_1", 4);
    let table = hh_koszul(&[v1], 1, (0, 8)).unwrap();
    assert_eq!(
        table.entries().collect::<Vec<_>>(),
        vec![(0, 0, 1), (0, 4, 1), (0, 8, 1), (1, 4, 1), (1, 8, 1)]
    );
    let empty = hh_koszul(&[], 3, (0, 10)).unwrap();
    assert_eq!(empty.entries().collect::<Vec<_>>(), vec![(0, 0, 1)]);
    let two = hh_koszul(
        &[Generator::new("v_1", 4), Generator::unit("v_2", 16)],
        1,
        (0, 16),
    )
    .unwrap();
    let ones: Vec<_> = two.entries().filter(|e| e.0 == 1).collect();
    assert_eq!(ones, vec![(1, 4, 1), (1, 8, 1), (1, 12, 1), (1, 16, 2)]);
}

fn rational_johnson_wilson(p: u32, n: u32) -> (Presentation, Vec<Generator>) {
    let gens: Vec<Generator> = (1..=n)
        .map(|j| {
            let name = format!("v_{j}");
            let d = 2 * (p.pow(j) as i32 - 1);
            if j == n {
                Generator::unit(name, d)
            } else {
                Generator::new(name, d)
            }
        })
        .collect();
    let ring = PolyRing::new(Field::Rational, gens.clone()).unwrap();
    (Presentation::free(&ring), gens)
}

#[test]
fn rational_hkr_matches_koszul() {
    let p = 3;
    for n in 1..=3u32 {
        let (pres, gens) = rational_johnson_wilson(p, n);
        let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
        let smooth: Vec<&str> = names.iter().map(String::as_str).collect();
        let answer = hh_hkr(&pres, &smooth, None).unwrap();
        let degrees: Vec<i32> = answer.exterior.iter().map(|g| g.internal_degree).collect();
        let expected: Vec<i32> = (1..=n).map(|i| 2 * p.pow(i) as i32 - 2).collect();
        assert_eq!(degrees, expected);
        let totals: Vec<i32> = answer.exterior.iter().map(|g| g.total_degree()).collect();
        assert_eq!(
            totals,
            (1..=n).map(|i| 2 * p.pow(i) as i32 - 1).collect::<Vec<_>>()
        );
        let width = 3 * expected[n as usize - 1];
        let top = n.min(3);
        let hkr = answer
            .table(top, (0, width), &[names.last().unwrap()])
            .unwrap();
        let koszul = hh_koszul(&gens, top, (0, width)).unwrap();
        assert_eq!(hkr.method, Method::Hkr);
        compare_methods(&[&koszul, &hkr])
            .unwrap()
            .require_empty()
            .unwrap();
        assert!(hkr.entries().count() > 0);
    }
}

#[test]
fn hkr_refuses_without_certificate() {
    let (pres, _) = derive_presentation(3, 1, 2, 1).unwrap();
    let err = hh_hkr(&pres, &["w_2"], None).unwrap_err();
    assert!(matches!(err, Error::MissingEtaleCertificate(_)));
}

#[test]
fn hkr_over_derived_tower() {
    let (pres, state) = derive_presentation(3, 1, 2, 1).unwrap();
    let reports = kahler_check_all(&state).unwrap();
    let kahler = EtaleCertificate::from_reports(&pres, &reports).unwrap();
    let jacobian = EtaleCertificate::jacobian(&pres).unwrap();
    assert_eq!(kahler.generators[0].source, CertificateSource::Kahler);
    assert_eq!(jacobian.generators[0].generator, "t_1");
    let answer = hh_hkr(&pres, &["w_2"], Some(&kahler)).unwrap();
    let names: Vec<&str> = answer.exterior.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, vec!["dw_2"]);
    assert_eq!(answer.exterior[0].total_degree(), 17);
    // over F_3[v_1^±, w_2^±]: basis 1, t_1, t_1^2 and dw_2 times it
    let table = answer.table(2, (0, 40), &["v_1", "w_2"]).unwrap();
    assert_eq!(
        table.entries().collect::<Vec<_>>(),
        vec![
            (0, 0, 1),
            (0, 4, 1),
            (0, 8, 1),
            (1, 16, 1),
            (1, 20, 1),
            (1, 24, 1)
        ]
    );
    // v_1 is a scalar of K(1)_*; treating it as smooth is rejected
    assert!(hh_hkr(&pres, &["t_1"], Some(&kahler)).is_err());
}

#[test]
fn hkr_at_full_height_is_the_algebra() {
    let (pres, state) = derive_presentation(3, 2, 2, 1).unwrap();
    let reports = kahler_check_all(&state).unwrap();
    let cert = EtaleCertificate::from_reports(&pres, &reports).unwrap();
    let answer = hh_hkr(&pres, &[], Some(&cert)).unwrap();
    assert!(answer.exterior.is_empty());
    let table = answer.table(3, (0, 200), &["v_2"]).unwrap();
    assert!(table.concentrated_in_degree_zero());
    assert_eq!(table.total_rank(0), 9);
}

/// `B_1` at `(p, i, n) = (3, 1, 3)` with `v_1 = 1, w_2 = 0, w_3 = 1` is
/// `F_3[t]/(t^3 - t)`.
#[test]
fn bar_agrees_with_hkr_on_a_specialized_stage() {
    let (pres, _) = derive_presentation(3, 1, 3, 1).unwrap();
    let f3 = Field::prime(3).unwrap();
    let values = [("v_1", f3.one()), ("w_2", f3.zero()), ("w_3", f3.one())];
    let (special, record) = pres.specialize(&values).unwrap();
    assert!(record.grading_collapsed);
    assert!(special
        .same_ideal(&truncated_like(&special, "t_1^3 - t_1"))
        .unwrap());
    let bar = hh_bar_specialized(&pres, &values, 4).unwrap();
    assert_eq!(bar.specialization, Some(record));
    let cert = EtaleCertificate::jacobian(&special).unwrap();
    assert_eq!(cert.generators[0].jacobian, "-1");
    let hkr = hh_hkr(&special, &[], Some(&cert))
        .unwrap()
        .table(4, (0, 0), &[])
        .unwrap();
    compare_methods(&[&bar, &hkr])
        .unwrap()
        .require_empty()
        .unwrap();
    assert_eq!(bar.entries().collect::<Vec<_>>(), vec![(0, 0, 3)]);
    let direct = hh_bar(&artin_schreier(), 4).unwrap();
    compare_methods(&[&bar, &direct, &hkr])
        .unwrap()
        .require_empty()
        .unwrap();
}

fn truncated_like(pres: &Presentation, rel: &str) -> Presentation {
    Presentation::new(pres.ring(), vec![pres.parse(rel).unwrap()], &[]).unwrap()
}

#[test]
fn etale_specializations_have_no_higher_homology() {
    let cases: [(u32, u32, u32, u32, u32); 3] = [(3, 1, 2, 1, 4), (5, 1, 2, 1, 4), (3, 1, 2, 2, 2)];
    for (p, i, n, m, s_max) in cases {
        let (pres, _) = derive_presentation(p, i, n, m).unwrap();
        let f = Field::prime(p).unwrap();
        let values = [("v_1", f.one()), ("w_2", f.one())];
        let (special, _) = pres.specialize(&values).unwrap();
        EtaleCertificate::jacobian(&special).unwrap();
        let table = hh_bar(&special, s_max).unwrap();
        assert!(table.concentrated_in_degree_zero(), "{p} {i} {n} {m}");
        assert_eq!(table.total_rank(0), (p as u64).pow(i * m));
    }
}

#[test]
fn comparison_flags_differences() {
    let a = hh_bar(&artin_schreier(), 2).unwrap();
    assert!(compare_methods(&[&a, &a]).unwrap().is_empty());
    let mut b = a.clone();
    b.set(1, 0, 2);
    let report = compare_methods(&[&a, &b]).unwrap();
    assert_eq!(report.entries.len(), 1);
    assert_eq!(report.entries[0].ranks, vec![0, 2]);
    assert!(matches!(report.require_empty(), Err(Error::Mismatch(_))));
    let far = BigradedTable::new(Method::Koszul, 2, (10, 20));
    assert!(compare_methods(&[&a, &far]).is_err());
}

#[test]
fn table_round_trips() {
    let table = hh_koszul(
        &[Generator::new("v_1", 4), Generator::unit("v_2", 16)],
        2,
        (0, 48),
    )
    .unwrap();
    let json = table.to_json_string();
    assert_eq!(BigradedTable::from_json_str(&json).unwrap(), table);
    assert!(table.to_csv().starts_with("s,t,rank\n0,0,1\n"));
    assert!(table.to_tex().contains("\\begin{tabular}"));
}
