use std::sync::Arc;

use chromatic_core::algebra::{
    parse_poly, Field, Generator, GradedPoly, PolyRing, Presentation, RingMap,
};
use chromatic_core::formal_groups::{
    bp_log, cached_universal, honda_law, johnson_wilson_law, pushforward_universal, series_bytes,
    strict_iso_series, universal_law, BiSeries, LawCache, Scheme, TruncSeries,
};

fn x_series(ring: &Arc<PolyRing>, order: usize, e: usize, c: &str) -> TruncSeries {
    TruncSeries::monomial(ring, order, e, parse_poly(ring, c).unwrap())
}

#[test]
fn hazewinkel_log_coefficients() {
    let mut log = bp_log(3, 2, Scheme::Hazewinkel).unwrap();
    let ring = log.ring().clone();
    assert_eq!(log.m[0], GradedPoly::one(&ring));
    assert_eq!(log.m[1], parse_poly(&ring, "1/3 v_1").unwrap());
    // (v_2 + v_1^{p+1}/p)/p at p = 3
    assert_eq!(log.m[2], parse_poly(&ring, "1/3 v_2 + 1/9 v_1^4").unwrap());
    let s = log.series(9).unwrap();
    assert_eq!(s.support(), vec![1, 3, 9]);
}

#[test]
fn araki_log_coefficients() {
    let log = bp_log(3, 1, Scheme::Araki).unwrap();
    let ring = log.ring().clone();
    // (p - p^p) m_1 = v_1
    assert_eq!(log.m[1], parse_poly(&ring, "-1/24 v_1").unwrap());
}

#[test]
fn log_exp_round_trip() {
    let mut log = bp_log(3, 2, Scheme::Hazewinkel).unwrap();
    let pres = Presentation::free(log.ring());
    let l = log.series(20).unwrap();
    let e = log.exp_series(20).unwrap();
    let x = TruncSeries::x(log.ring(), 20);
    assert_eq!(e.compose(&l, &pres).unwrap(), x);
    assert_eq!(l.compose(&e, &pres).unwrap(), x);
}

#[test]
fn universal_law_low_coefficients() {
    let law = universal_law(3, 9, Scheme::Hazewinkel).unwrap();
    let ring = law.ring().clone();
    assert!(law.coeff(1, 1).is_zero());
    assert_eq!(law.coeff(1, 0), &GradedPoly::one(&ring));
    assert!(law.coeff(2, 0).is_zero());
    // log F = log x + log y at total degree 3 gives a_{2,1} = -3 m_1.
    assert_eq!(law.coeff(2, 1), &parse_poly(&ring, "-v_1").unwrap());
    assert_eq!(law.coeff(1, 2), &parse_poly(&ring, "-v_1").unwrap());
    law.check_axioms(9).unwrap();
    law.series().ring();
}

#[test]
fn universal_law_is_integral_through_second_stage() {
    for p in [3u32, 5] {
        let order = (p * p) as usize;
        let law = universal_law(p, order, Scheme::Hazewinkel).unwrap();
        for (a, b, c) in law.series().terms() {
            assert_eq!(
                c.homogeneous_degree().unwrap(),
                Some(2 * (a + b) as i32 - 2)
            );
            assert!(
                c.terms().iter().all(|(_, x)| x.is_p_local(p)),
                "a_{a},{b} = {c}"
            );
        }
    }
}

#[test]
fn honda_p_series() {
    for (i, order) in [(1u32, 9usize), (2, 10)] {
        let law = honda_law(3, i, order).unwrap();
        let ring = law.ring().clone();
        let expect = x_series(&ring, order, 3usize.pow(i), &format!("v_{i}"));
        assert_eq!(law.p_series().unwrap(), expect);
    }
}

#[test]
fn p_series_linear_term_is_p() {
    let law = universal_law(3, 9, Scheme::Hazewinkel).unwrap();
    let s = law.p_series().unwrap();
    assert_eq!(s.coeff(1), &GradedPoly::from_i64(law.ring(), 3));
}

#[test]
fn johnson_wilson_p_series_is_formal_sum_mod_p() {
    let field = Field::prime(3).unwrap();
    let law = johnson_wilson_law(3, 2, 10, field, "w").unwrap();
    let ring = law.ring().clone();
    let oracle = law
        .formal_sum(&[x_series(&ring, 10, 3, "w_1"), x_series(&ring, 10, 9, "w_2")])
        .unwrap();
    assert_eq!(law.p_series().unwrap(), oracle);
}

#[test]
fn pushforward_is_natural() {
    let universal = universal_law(3, 10, Scheme::Hazewinkel).unwrap();
    let field = Field::prime(3).unwrap();
    let ring = PolyRing::new(
        field,
        vec![Generator::new("v_1", 4), Generator::unit("v_2", 16)],
    )
    .unwrap();
    let target = Arc::new(Presentation::free(&ring));
    let images = |j: u32| match j {
        1 | 2 => GradedPoly::var(&ring, &format!("v_{j}")),
        _ => Ok(GradedPoly::zero(&ring)),
    };
    let g = pushforward_universal(&universal, target.clone(), images, "E(2)").unwrap();
    for (_, _, c) in g.series().terms() {
        assert!(c.terms().iter().all(|(m, _)| m.exps().len() == 2));
    }
    let map = RingMap::new(
        universal.ring(),
        &ring,
        (1..=universal.ring().len() as u32)
            .map(images)
            .collect::<Result<_, _>>()
            .unwrap(),
    )
    .unwrap();
    let pushed = universal.p_series().unwrap().map(&map, &target).unwrap();
    assert_eq!(g.p_series().unwrap(), pushed);
    g.check_axioms(10).unwrap();
}

#[test]
fn identity_pushforward_is_equal() {
    let universal = universal_law(3, 9, Scheme::Hazewinkel).unwrap();
    let ring = universal.ring().clone();
    let target = Arc::new(Presentation::free(&ring));
    let law = pushforward_universal(
        &universal,
        target,
        |j| GradedPoly::var(&ring, &format!("v_{j}")),
        "id",
    )
    .unwrap();
    assert_eq!(law, universal);
}

#[test]
fn schemes_agree_mod_p() {
    let field = Field::prime(3).unwrap();
    let ring = PolyRing::new(
        field,
        vec![Generator::new("v_1", 4), Generator::new("v_2", 16)],
    )
    .unwrap();
    let target = Arc::new(Presentation::free(&ring));
    let push = |scheme| {
        let u = universal_law(3, 12, scheme).unwrap();
        pushforward_universal(
            &u,
            target.clone(),
            |j| GradedPoly::var(&ring, &format!("v_{j}")),
            "mod 3",
        )
        .unwrap()
    };
    assert_eq!(
        push(Scheme::Hazewinkel).series(),
        push(Scheme::Araki).series()
    );
}

#[test]
fn formal_sum_is_associative() {
    let law = universal_law(3, 10, Scheme::Hazewinkel).unwrap();
    let ring = law.ring().clone();
    let a = x_series(&ring, 10, 1, "1");
    let b = x_series(&ring, 10, 2, "2");
    let c = x_series(&ring, 10, 3, "v_1");
    let left = law.apply(&law.apply(&a, &b).unwrap(), &c).unwrap();
    let right = law.apply(&a, &law.apply(&b, &c).unwrap()).unwrap();
    assert_eq!(left, right);
    assert_eq!(law.formal_sum(std::slice::from_ref(&a)).unwrap(), a);
    let zero = TruncSeries::zero(&ring, 10);
    assert_eq!(law.formal_sum(&[a.clone(), zero]).unwrap(), a);
}

#[test]
fn formal_sum_of_two_monomials_by_hand() {
    // Over the height-one law at p = 3, x +_F t x^3 through x^9, compared with
    // the direct double sum over the law's coefficients.
    let field = Field::prime(3).unwrap();
    let law = johnson_wilson_law(3, 1, 9, field, "v").unwrap();
    let order = 9;
    let ring = PolyRing::new(
        field,
        vec![Generator::new("t_1", 4), Generator::unit("v_1", 4)],
    )
    .unwrap();
    let target = Arc::new(Presentation::free(&ring));
    let map = RingMap::by_names(law.ring(), &ring, &[]).unwrap();
    let g = law.pushforward(&map, target, "with t").unwrap();
    let t = GradedPoly::var(&ring, "t_1").unwrap();
    let sum = g
        .formal_sum(&[
            TruncSeries::x(&ring, order),
            TruncSeries::monomial(&ring, order, 3, t.clone()),
        ])
        .unwrap();
    let mut oracle = vec![GradedPoly::zero(&ring); order + 1];
    for (a, b, c) in g.series().terms() {
        let e = a + 3 * b;
        if e <= order {
            oracle[e] = oracle[e].add(&c.mul(&t.pow(b as u32)));
        }
    }
    assert_eq!(sum.coeffs(), oracle.as_slice());
    let f = strict_iso_series(1, &g).unwrap();
    assert_eq!(f, sum);
    assert_eq!(f.coeff(3), &t);
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = LawCache::new(dir.path());
    let first = cache.universal(3, 10, Scheme::Hazewinkel).unwrap();
    let key = LawCache::key(3, 10, Scheme::Hazewinkel, "universal");
    let on_disk = std::fs::read(cache.path(&key)).unwrap();
    let second = cached_universal(Some(&cache), 3, 10, Scheme::Hazewinkel).unwrap();
    let fresh = universal_law(3, 10, Scheme::Hazewinkel).unwrap();
    assert_eq!(series_bytes(second.series()), on_disk);
    assert_eq!(series_bytes(fresh.series()), on_disk);
    assert_eq!(first, second);
    let round = BiSeries::from_file(&serde_json::from_slice(&on_disk).unwrap()).unwrap();
    assert_eq!(&round, fresh.series());
}
