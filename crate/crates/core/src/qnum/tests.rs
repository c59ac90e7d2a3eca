use proptest::prelude::*;

use super::*;
use crate::parse::{parse_elem, parse_ring};

fn ctx(spec: &str, q: &str) -> QContext {
    let r = parse_ring(spec).unwrap();
    QContext::new(parse_elem(&r, q).unwrap())
}

fn el(c: &QContext, text: &str) -> Elem {
    parse_elem(c.ring(), text).unwrap()
}

#[test]
fn q_state_examples() {
    let c = ctx("Z[t]", "t");
    assert_eq!(c.q_state(3).unwrap(), el(&c, "1+t+t^2"));
    assert!(c.q_state(0).unwrap().is_zero());
    assert!(matches!(c.q_state(-1), Err(Error::NotInvertible(_))));
    assert!(ctx("Z/5", "2").q_state(4).unwrap().is_zero());
    let f = ctx("Q(t)", "t");
    assert_eq!(f.q_state(-2).unwrap(), el(&f, "-(1+t)/t^2"));
}

#[test]
fn q_factorial_examples() {
    let c = ctx("Z[t]", "t");
    assert_eq!(c.q_factorial(3), el(&c, "1+2t+2t^2+t^3"));
    assert!(c.q_factorial(0).is_one());
    assert!(c.q_factorial(1).is_one());
    assert!(ctx("Z/4", "1").q_factorial(4).is_zero());
}

#[test]
fn q_binomial_examples() {
    let c = ctx("Z[t]", "t");
    assert!(c.q_binomial(0, 0).is_one());
    assert!(c.q_binomial(0, 3).is_zero());
    assert_eq!(c.q_binomial(4, 2), el(&c, "1+t+2t^2+t^3+t^4"));
    assert_eq!(ctx("Z", "2").q_binomial(4, 2), parse_ring("Z").unwrap().from_i64(35));
    let z4 = ctx("Z/4", "1");
    assert_eq!(z4.q_binomial(4, 2), z4.ring().from_i64(2));
}

#[test]
fn q_characteristic_examples() {
    assert_eq!(ctx("Z/8", "3").q_characteristic(DEFAULT_BOUND), QCharResult::Finite(4));
    assert_eq!(ctx("Z/2[X]/(X^2-1)", "X").q_characteristic(DEFAULT_BOUND), QCharResult::Finite(4));
    assert_eq!(
        ctx("Q[X]/(X^2-1)", "X").q_characteristic(DEFAULT_BOUND),
        QCharResult::Zero { certified: true }
    );
    assert_eq!(ctx("Z[i]", "i").q_characteristic(DEFAULT_BOUND), QCharResult::Finite(4));
    assert_eq!(ctx("Z[t]", "t").q_characteristic(DEFAULT_BOUND), QCharResult::Zero { certified: true });
    assert_eq!(ctx("Z", "-1").q_characteristic(DEFAULT_BOUND), QCharResult::Finite(2));
    assert_eq!(ctx("Q(t)", "1").q_characteristic(DEFAULT_BOUND), QCharResult::Zero { certified: true });
    assert_eq!(ctx("Cyclo(9)", "t").q_characteristic(DEFAULT_BOUND), QCharResult::Finite(9));
    // ℤ[X]/(X²−1) with q = −X: (2)_q = 1 − X, (4)_q = 2(1 − X), never zero
    assert_eq!(ctx("Z[X]/(X^2-1)", "-X").q_characteristic(DEFAULT_BOUND), QCharResult::Zero { certified: true });
    assert_eq!(ctx("Z/6", "2").q_characteristic(DEFAULT_BOUND), QCharResult::Zero { certified: true });
}

#[test]
fn q_characteristic_unknown_reports_bound() {
    // q = 1 over 𝔽_7[t] has q-characteristic 7, found by iteration
    assert_eq!(ctx("Z/7[t]", "1").q_characteristic(100), QCharResult::Finite(7));
    assert_eq!(ctx("Z/7[t]", "1").q_characteristic(3), QCharResult::Unknown(3));
    assert_eq!(QCharResult::Unknown(3).to_string(), "unknown (bound=3)");
    assert_eq!(QCharResult::Zero { certified: true }.to_string(), "0 (certified)");
}

#[test]
fn flatness_examples() {
    let c = ctx("Z[i]", "i").certify_flatness().unwrap();
    assert!(c.flat && !c.divisible);
    assert_eq!(c.nonunit_witness, Some(2));
    assert!(ctx("Z/4", "-1").certify_flatness().unwrap().divisible);
    let c4 = ctx("Z/4", "1");
    let cert = c4.certify_flatness().unwrap();
    assert!(!cert.flat && !cert.divisible);
    assert_eq!(cert.witness, Some((2, c4.ring().from_i64(2))));
    let q = ctx("Q[X]/(X^2-1)", "X");
    let cert = q.certify_flatness().unwrap();
    let (m, a) = cert.witness.unwrap();
    assert!((&q.q_state(m as i64).unwrap() * &a).is_zero());
    assert!(ctx("Q(t)", "t").certify_flatness().unwrap().divisible);
    assert!(matches!(ctx("Z[X]/(X^2-1)", "X").certify_flatness(), Ok(FlatnessCertificate { flat: false, .. })));
}

#[test]
fn symmetric_examples() {
    let c = ctx("Z[v,1/v]", "v");
    assert!(c.symmetric_state(1).unwrap().is_one());
    assert_eq!(c.symmetric_state(2).unwrap(), el(&c, "v + v^-1"));
    for n in 1..=10 {
        let lhs = &c.symmetric_state(n).unwrap() * &c.q().pow(n as u64 - 1);
        assert_eq!(lhs, QContext::new(c.q().pow(2)).q_state(n).unwrap());
    }
    assert!(c.symmetric_binomial(5, 5).unwrap().is_one());
    assert_eq!(c.symmetric_binomial(2, 1).unwrap(), el(&c, "v + v^-1"));
    for n in 0..=8 {
        for k in 0..=n {
            assert_eq!(c.symmetric_binomial(n, k).unwrap(), c.symmetric_binomial(n, n - k).unwrap());
        }
    }
    assert!(ctx("Z[t]", "t").symmetric_state(2).is_err());
}

#[test]
fn symmetric_binomial_is_a_factorial_quotient() {
    // [n]_v! = [n k]_v [k]_v! [n−k]_v!, and invariance under v ↦ v⁻¹
    let c = ctx("Z[v,1/v]", "v");
    let inv = QContext::new(c.q_inverse().unwrap().clone());
    let fact = |ctx: &QContext, n: u64| {
        (1..=n as i64).fold(ctx.ring().one(), |acc, i| &acc * &ctx.symmetric_state(i).unwrap())
    };
    for n in 0..=8u64 {
        for k in 0..=n {
            let b = c.symmetric_binomial(n, k).unwrap();
            assert_eq!(fact(&c, n), &(&b * &fact(&c, k)) * &fact(&c, n - k));
            assert_eq!(b, inv.symmetric_binomial(n, k).unwrap());
        }
    }
}

#[test]
fn cyclotomic_embedding() {
    let zi = ctx("Z[i]", "i");
    match zi.embed_cyclotomic(4).unwrap() {
        Embedding::Hom(h) => {
            let t = h.source.generator().unwrap();
            assert_eq!(h.apply(&t).unwrap(), el(&zi, "i"));
            assert_eq!(h.apply(&(&t * &t)).unwrap(), el(&zi, "-1"));
        }
        Embedding::Failure(v) => panic!("unexpected failure {v}"),
    }
    match ctx("Z/8", "3").embed_cyclotomic(4).unwrap() {
        Embedding::Failure(v) => assert_eq!(v, parse_ring("Z/8").unwrap().from_i64(2)),
        Embedding::Hom(_) => panic!("3 is not a root of chi_4 mod 8"),
    }
    assert!(ctx("Z", "1").embed_cyclotomic(1).is_err());
}

#[test]
fn power_contexts() {
    let zi = ctx("Z[i]", "i");
    let sq = zi.power_context(2);
    assert_eq!(sq.q(), &el(&zi, "-1"));
    assert_eq!(sq.q_characteristic(DEFAULT_BOUND), QCharResult::Finite(2));
    assert_eq!(zi.power_context(1), zi);
    let z4 = ctx("Z/4", "-1");
    assert!(z4.certify_flatness().unwrap().divisible);
    assert!(!z4.power_context(2).certify_flatness().unwrap().flat);
}

#[test]
fn q_state_ranges_match_pointwise() {
    for (spec, q) in [("Q(t)", "t"), ("Z/8", "3"), ("Z[t,1/t]", "-t")] {
        let c = ctx(spec, q);
        let all = c.q_state_range(-7, 9).unwrap();
        for (i, v) in all.iter().enumerate() {
            assert_eq!(*v, c.q_state(i as i64 - 7).unwrap(), "{spec}");
        }
    }
    assert_eq!(ctx("Z[t]", "t").q_state_range(0, 4).unwrap().len(), 5);
    assert!(ctx("Z[t]", "t").q_state_range(-1, 4).is_err());
    assert!(ctx("Z", "1").q_state_range(1, 4).is_err());
}

#[test]
fn pascal_table_rows() {
    let c = ctx("Z", "1");
    let mut t = c.pascal_table();
    let row: Vec<String> = t.row(6).iter().map(|e| e.to_string()).collect();
    assert_eq!(row, ["1", "6", "15", "20", "15", "6", "1"]);
    assert!(t.get(3, 4).is_zero());
}

const FLEET: &[(&str, &str)] = &[
    ("Z/8", "3"),
    ("Z/12", "5"),
    ("Z/7", "2"),
    ("Z[t]", "t"),
    ("Q(t)", "t"),
    ("Z[i]", "i"),
    ("Cyclo(6)", "t"),
    ("Z/2[X]/(X^2-1)", "X"),
    ("Q[X]/(X^2-1)", "X"),
    ("Z[t,1/t]", "2t"),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_formula(idx in 0..FLEET.len(), m in -12i64..=12) {
        let c = ctx(FLEET[idx].0, FLEET[idx].1);
        prop_assume!(m >= 0 || c.q_inverse().is_some());
        let one = c.ring().one();
        let lhs = &(&one - c.q()) * &c.q_state(m).unwrap();
        prop_assert_eq!(lhs, &one - &c.q().pow_i(m).unwrap());
    }

    #[test]
    fn addition_and_multiplication(idx in 0..FLEET.len(), m in -8i64..=8, n in -8i64..=8) {
        let c = ctx(FLEET[idx].0, FLEET[idx].1);
        prop_assume!((m >= 0 && n >= 0) || c.q_inverse().is_some());
        let sum = &c.q_state(m).unwrap() + &(&c.q().pow_i(m).unwrap() * &c.q_state(n).unwrap());
        prop_assert_eq!(c.q_state(m + n).unwrap(), sum);
        let qm = QContext::new(c.q().pow_i(m).unwrap());
        prop_assert_eq!(c.q_state(m * n).unwrap(), &c.q_state(m).unwrap() * &qm.q_state(n).unwrap());
    }

    #[test]
    fn binomial_symmetry(idx in 0..FLEET.len(), n in 0u64..=12, k in 0u64..=12) {
        prop_assume!(k <= n);
        let c = ctx(FLEET[idx].0, FLEET[idx].1);
        let mut t = c.pascal_table();
        prop_assert_eq!(t.get(n, k), t.get(n, n - k));
    }
}
