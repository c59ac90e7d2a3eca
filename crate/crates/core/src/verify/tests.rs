use super::*;
use crate::parse::{parse_elem, parse_ring};

fn ctx(spec: &str, q: &str) -> QContext {
    let r = parse_ring(spec).unwrap();
    QContext::new(parse_elem(&r, q).unwrap())
}

fn run(id: &str, spec: &str, q: &str) -> VerificationReport {
    verify(id, &ctx(spec, q), &VerifyOptions::default()).unwrap()
}

#[test]
fn whole_catalog_over_cyclo5() {
    let c = ctx("Cyclo(5)", "t");
    for id in CATALOG {
        let r = verify(id, &c, &VerifyOptions::default()).unwrap();
        let expected = match *id {
            "even" | "artin_schreier" => Status::HypothesesUnmet,
            _ => Status::Pass,
        };
        assert_eq!(r.status, expected, "{id}: {r}");
        assert_eq!(r.failures.is_empty(), r.exit_code() != 1);
    }
}

#[test]
fn whole_catalog_over_f2() {
    let c = ctx("Z/2", "1");
    for id in CATALOG {
        let r = verify(id, &c, &VerifyOptions::default()).unwrap();
        assert_eq!(r.status, Status::Pass, "{id}: {r}");
    }
}

#[test]
fn unmet_hypotheses_exit_two() {
    let r = run("qbin_vanish", "Z/4", "1");
    assert_eq!(r.exit_code(), 2);
    assert_eq!(r.cases, 0);
    assert!(r.note.as_deref().unwrap().contains("not q-flat"));
    assert!(r.to_string().contains("hypotheses unmet: not q-flat"));
    assert_eq!(run("lucas", "Z[t]", "t").exit_code(), 2);
    assert_eq!(run("artin_schreier", "Z/4", "-1").exit_code(), 2);
    assert_eq!(run("prim", "Cyclo(4)", "t").exit_code(), 2);
    // (ℤ/4, −1) is divisible, so the same identity runs there
    assert_eq!(run("qbin_vanish", "Z/4", "-1").exit_code(), 0);
}

#[test]
fn ranges_are_reported_and_overridable() {
    let r = run("pascal", "Z[t]", "t");
    assert_eq!(r.ranges.get("n_max"), Some(&20));
    let opts = VerifyOptions { ranges: Ranges { n_max: Some(3), k_max: Some(3), m_max: None }, ..Default::default() };
    let r = verify("lucas", &ctx("Cyclo(5)", "t"), &opts).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.ranges.get("n_max"), Some(&3));
    assert!(r.cases > 0);
}

#[test]
fn sampling_is_seeded() {
    let c = ctx("Z[t]", "t");
    let opts = VerifyOptions { sample: Some(7), seed: 42, ..Default::default() };
    let a = verify("chu_vandermonde", &c, &opts).unwrap();
    let b = verify("chu_vandermonde", &c, &opts).unwrap();
    assert_eq!(a.cases, 7);
    assert_eq!(a.to_string().lines().take(5).collect::<Vec<_>>(), b.to_string().lines().take(5).collect::<Vec<_>>());
    let all = verify("chu_vandermonde", &c, &VerifyOptions { sample: Some(1 << 20), ..Default::default() }).unwrap();
    assert_eq!(all.cases, run("chu_vandermonde", "Z[t]", "t").cases);
}

#[test]
fn unknown_identity_is_an_error() {
    assert!(matches!(verify("nope", &ctx("Z", "1"), &VerifyOptions::default()), Err(Error::Domain(_))));
}

#[test]
fn report_text_lists_failures() {
    let mut r = run("symmetry", "Z/3", "1");
    r.failures.push(CaseFailure {
        inputs: [("n".to_string(), "2".to_string()), ("k".to_string(), "1".to_string())].into(),
        lhs: "2".into(),
        rhs: "1".into(),
    });
    r.status = Status::Fail;
    let text = r.to_string();
    assert!(text.contains("[k=1 n=2] lhs = 2  rhs = 1"), "{text}");
    assert!(text.contains("status: FAIL"));
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn report_json_has_no_timing() {
    let r = run("explicit", "Z/8", "3");
    let v = serde_json::to_value(&r).unwrap();
    assert!(v.get("wall_time").is_none());
    assert_eq!(v["status"], "pass");
    assert!(v.get("note").is_none());
    assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&run("explicit", "Z/8", "3")).unwrap());
}

#[test]
fn fraction_fields_pass_their_suites() {
    for id in ["addmul", "chu_vandermonde", "binomial_formula", "rational_state", "sigmaen", "twisted_binomial"] {
        assert_eq!(run(id, "Q(t^(1/6))", "t").status, Status::Pass, "{id}");
    }
}
