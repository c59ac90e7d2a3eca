use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::parse::{parse_elem, parse_ring};

fn ring(spec: &str) -> Ring {
    parse_ring(spec).unwrap()
}

fn el(r: &Ring, text: &str) -> Elem {
    parse_elem(r, text).unwrap()
}

const FLEET: &[&str] = &[
    "Z",
    "Q",
    "Z/12",
    "Z/7",
    "Z[i]",
    "Z[t]",
    "Z/4[t]",
    "Z[t,1/t]",
    "Q(t)",
    "Cyclo(5)",
    "Cyclo(12)",
    "Z/2[X]/(X^2-1)",
    "Q[X]/(X^2-1)",
    "Z/6[X]/(X^3+2X+1)",
    "Z[X]/(X^2-2)",
    "Z[t^(1/3)]",
    "Q(t^(1/6))",
];

#[test]
fn addition_examples() {
    let z8 = ring("Z/8");
    assert_eq!(&z8.from_i64(5) + &z8.from_i64(7), z8.from_i64(4));
    let zt = ring("Z[t]");
    assert_eq!(&el(&zt, "1+t") + &el(&zt, "1-t"), zt.from_i64(2));
    let zi = ring("Z[i]");
    assert_eq!(&el(&zi, "1+i") + &el(&zi, "1-i"), zi.from_i64(2));
}

#[test]
fn multiplication_examples() {
    let zt = ring("Z[t]");
    assert_eq!(&el(&zt, "1+t") * &el(&zt, "1-t"), el(&zt, "1-t^2"));
    let c4 = ring("Cyclo(4)");
    let t = c4.generator().unwrap();
    assert_eq!(&t * &t, c4.from_i64(-1));
    let z4 = ring("Z/4");
    assert!((&z4.from_i64(2) * &z4.from_i64(2)).is_zero());
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = ring("Z/8").from_i64(1);
    let b = ring("Z/9").from_i64(1);
    assert!(matches!(a.try_add(&b), Err(Error::RingMismatch(..))));
}

#[test]
fn inversion_examples() {
    let zi = ring("Z[i]");
    assert_eq!(el(&zi, "i").try_invert(), Some(el(&zi, "-i")));
    assert_eq!(el(&zi, "1+i").try_invert(), None);
    let z8 = ring("Z/8");
    assert_eq!(z8.from_i64(3).try_invert(), Some(z8.from_i64(3)));
    let zt = ring("Z[t]");
    assert_eq!(zt.from_i64(-1).try_invert(), Some(zt.from_i64(-1)));
    assert_eq!(el(&zt, "1+t").try_invert(), None);
    let z4t = ring("Z/4[t]");
    let u = el(&z4t, "1+2t");
    assert_eq!(&u * &u.try_invert().unwrap(), z4t.one());
    let lt = ring("Z[t,1/t]");
    assert_eq!(el(&lt, "-t^3").try_invert(), Some(el(&lt, "-t^-3")));
    assert_eq!(el(&lt, "1+t").try_invert(), None);
    let c5 = ring("Cyclo(5)");
    // 1 + t is a cyclotomic unit
    let u = el(&c5, "1+t");
    assert_eq!(&u * &u.try_invert().unwrap(), c5.one());
    assert_eq!(el(&c5, "1-t").try_invert(), None);
}

#[test]
fn enumeration_examples() {
    let z3: Vec<_> = ring("Z/3").elements().unwrap().collect();
    assert_eq!(z3.iter().map(|e| e.to_string()).collect::<Vec<_>>(), ["0", "1", "2"]);
    let f = ring("Z/2[X]/(X^2-1)");
    let all: Vec<_> = f.elements().unwrap().collect();
    assert_eq!(all.len(), 4);
    assert!(all[0].is_zero() && all[1].is_one());
    assert!(ring("Z[t]").elements().is_err());
}

#[test]
fn zero_divisor_examples() {
    assert!(ring("Z/4").from_i64(2).is_zero_divisor().unwrap());
    assert!(!el(&ring("Z[i]"), "1+i").is_zero_divisor().unwrap());
    assert!(!ring("Z/8").from_i64(3).is_zero_divisor().unwrap());
    let q = ring("Q[X]/(X^2-1)");
    let a = el(&q, "1+X");
    let w = a.zero_divisor_witness().unwrap().unwrap();
    assert!(!w.is_zero() && (&a * &w).is_zero());
    let z6 = ring("Z/6[t]");
    let a = el(&z6, "2+4t");
    let w = a.zero_divisor_witness().unwrap().unwrap();
    assert!(!w.is_zero() && (&a * &w).is_zero());
    assert!(!el(&z6, "1+2t").is_zero_divisor().unwrap());
}

#[test]
fn descriptor_flags() {
    assert_eq!(ring("Z/2[X]/(X^2-1)").cardinality(), Some(4));
    assert_eq!(ring("Z/2[X]/(X^2-1)").characteristic(), 2);
    assert!(!ring("Z/2[X]/(X^2-1)").is_domain());
    assert!(ring("Cyclo(7)").is_domain());
    assert!(ring("Z/7").is_field());
    assert!(!ring("Z[t]").is_finite());
    assert!(ring("Z[t,1/t]").is_domain());
    assert!(Ring::laurent(&ring("Z/4"), "t").is_err());
}

#[test]
fn multiplicative_orders() {
    let zi = ring("Z[i]");
    assert_eq!(el(&zi, "i").multiplicative_order(), Order::Finite(4));
    assert_eq!(el(&zi, "1+i").multiplicative_order(), Order::Infinite);
    assert_eq!(el(&ring("Z/8"), "3").multiplicative_order(), Order::Finite(2));
    assert_eq!(ring("Cyclo(12)").generator().unwrap().multiplicative_order(), Order::Finite(12));
    let q = ring("Q[X]/(X^2-1)");
    assert_eq!(el(&q, "X").multiplicative_order(), Order::Finite(2));
    assert_eq!(el(&q, "2X").multiplicative_order(), Order::Infinite);
    assert_eq!(ring("Z[t]").generator().unwrap().multiplicative_order(), Order::Infinite);
    assert_eq!(el(&ring("Q(t)"), "-1").multiplicative_order(), Order::Finite(2));
}

#[test]
fn display_forms() {
    let zt = ring("Z[t]");
    assert_eq!(el(&zt, "(1+t)(1+t+t^2)").to_string(), "1 + 2*t + 2*t^2 + t^3");
    assert_eq!(el(&zt, "1-3t^2").to_string(), "1 - 3*t^2");
    assert_eq!(el(&zt, "-t").to_string(), "-t");
    let qt = ring("Q(t)");
    assert_eq!(el(&qt, "-(1+t)/t^2").to_string(), "-(1+t)/t^2");
    assert_eq!(el(&qt, "1/(2t)").to_string(), "1/(2t)");
    assert_eq!(el(&qt, "t/2").to_string(), "t/2");
    let zi = ring("Z[i]");
    assert_eq!(el(&zi, "1-2i").to_string(), "1 - 2*i");
    assert_eq!(el(&zi, "-i").to_string(), "-i");
    let p = ring("Q(t^(1/6))");
    assert_eq!(el(&p, "1/(1+t^(1/2))").to_string(), "1/(1+t^(1/2))");
    assert_eq!(el(&p, "t^(5/6)").to_string(), "t^(5/6)");
    let l = ring("Z[t,1/t]");
    assert_eq!(el(&l, "t^-2 + 1").to_string(), "t^-2 + 1");
    let nested = ring("Z[i][x]");
    assert_eq!(el(&nested, "(1+i)x - i").to_string(), "-i + (1 + i)*x");
}

#[test]
fn modular_reduction_matches_integer_arithmetic() {
    for n in 2..=12u64 {
        let r = Ring::modular(n).unwrap();
        for a in 0..(n * n) as i64 {
            for b in 0..(n * n) as i64 {
                let (x, y) = (r.from_i64(a), r.from_i64(b));
                assert_eq!(&x + &y, r.from_i64((a + b) % n as i64));
                assert_eq!(&x * &y, r.from_i64((a * b) % n as i64));
            }
        }
    }
}

#[test]
fn finite_enumeration_is_complete_and_distinct() {
    for spec in ["Z/12", "Z/2[X]/(X^2-1)", "Z/6[X]/(X^3+2X+1)", "Z/3[X]/(X^2+1)"] {
        let r = ring(spec);
        let all: Vec<_> = r.elements().unwrap().collect();
        assert_eq!(all.len() as u128, r.cardinality().unwrap(), "{spec}");
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), all.len(), "{spec}");
    }
}

#[test]
fn finite_units_agree_with_search() {
    for spec in ["Z/12", "Z/2[X]/(X^2-1)", "Z/6[X]/(X^3+2X+1)", "Z/4[X]/(X^2+X+1)"] {
        let r = ring(spec);
        let all: Vec<_> = r.elements().unwrap().collect();
        for a in &all {
            let by_search = all.iter().any(|b| (a * b).is_one());
            assert_eq!(a.is_unit(), by_search, "{spec}: {a}");
            let zd = all.iter().any(|b| !b.is_zero() && (a * b).is_zero());
            assert_eq!(a.is_zero_divisor().unwrap(), !a.is_zero() && zd, "{spec}: {a}");
        }
    }
}

fn triple(spec: &str, seed: u64) -> (Elem, Elem, Elem) {
    let r = ring(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (r.random_element(&mut rng), r.random_element(&mut rng), r.random_element(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(idx in 0..FLEET.len(), seed in any::<u64>()) {
        let (a, b, c) = triple(FLEET[idx], seed);
        let r = a.ring().clone();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &r.zero(), a.clone());
        prop_assert_eq!(&a * &r.one(), a.clone());
        prop_assert!((&a * &r.zero()).is_zero());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses_multiply_to_one(idx in 0..FLEET.len(), seed in any::<u64>()) {
        let (a, _, _) = triple(FLEET[idx], seed);
        if let Some(b) = a.try_invert() {
            prop_assert!((&a * &b).is_one());
            prop_assert_eq!(b.try_invert(), Some(a.clone()));
        }
    }

    #[test]
    fn printed_forms_reparse(idx in 0..FLEET.len(), seed in any::<u64>()) {
        let (a, _, _) = triple(FLEET[idx], seed);
        let back = parse_elem(a.ring(), &a.to_string()).unwrap();
        prop_assert_eq!(&back, &a);
        // normalization is idempotent: re-printing is stable
        prop_assert_eq!(back.to_string(), a.to_string());
        let spec = a.ring().to_string();
        prop_assert_eq!(&ring(&spec), a.ring());
    }
}
