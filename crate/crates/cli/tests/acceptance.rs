//! The ten acceptance criteria, run in order with one PASS/FAIL line each.
//! Runs without the libtest harness so the lines are always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use qint_core::qnum::DEFAULT_BOUND;
use qint_core::qrational::{DenominatorSet, RootSystem};
use qint_core::twisted::{TwistedAlgebra, TwistedPowerBasis};
use qint_core::verify::{verify, Ranges, Status, VerificationReport, VerifyOptions};
use qint_core::{parse_elem, parse_ring, Elem, Error, QCharResult, QContext, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ring(spec: &str) -> Ring {
    parse_ring(spec).unwrap()
}

fn ctx(spec: &str, q: &str) -> QContext {
    let r = ring(spec);
    QContext::new(parse_elem(&r, q).unwrap())
}

fn el(r: &Ring, text: &str) -> Elem {
    parse_elem(r, text).unwrap()
}

fn run(id: &str, c: &QContext, ranges: Ranges) -> VerificationReport {
    verify(id, c, &VerifyOptions { ranges, ..Default::default() }).unwrap()
}

fn passes(id: &str, c: &QContext, ranges: Ranges) -> Outcome {
    let r = run(id, c, ranges);
    ensure!(r.status == Status::Pass && r.cases > 0, "{id} over ({}, {}):\n{r}", c.ring(), c.q());
    Ok(())
}

fn n_max(n: u64) -> Ranges {
    Ranges { n_max: Some(n), ..Default::default() }
}

fn m_max(m: u64) -> Ranges {
    Ranges { m_max: Some(m), ..Default::default() }
}

fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_1() -> Outcome {
    let z8 = ctx("Z/8", "3");
    ensure!(z8.q_characteristic(DEFAULT_BOUND) == QCharResult::Finite(4), "q-char(Z/8, 3)");
    ensure!(z8.q().pow(2).is_one() && z8.q().pow(2) != -&z8.ring().one(), "3^2 = 1 != -1 in Z/8");
    ensure!(
        ctx("Z/2[X]/(X^2-1)", "X").q_characteristic(DEFAULT_BOUND) == QCharResult::Finite(4),
        "q-char(F2[X]/(X^2-1), X)"
    );
    ensure!(
        ctx("Q[X]/(X^2-1)", "X").q_characteristic(DEFAULT_BOUND) == QCharResult::Zero { certified: true },
        "q-char(Q[X]/(X^2-1), X)"
    );
    let zi = ctx("Z[i]", "i");
    ensure!(zi.q_characteristic(DEFAULT_BOUND) == QCharResult::Finite(4), "q-char(Z[i], i)");
    let two = zi.q_state(2).unwrap();
    ensure!(two == el(zi.ring(), "1+i") && !two.is_unit(), "(2)_i = 1+i is not a unit");
    let z4 = ctx("Z/4", "1");
    ensure!(z4.q_binomial(4, 2) == z4.ring().from_i64(2), "C(4,2) at q=1 in Z/4");
    ensure!(ctx("Z/4", "-1").certify_flatness().unwrap().divisible, "(Z/4, -1) divisible");
    let cert = z4.certify_flatness().unwrap();
    let (m, a) = cert.witness.clone().ok_or("(Z/4, 1) has no witness")?;
    ensure!(!cert.flat && !a.is_zero(), "(Z/4, 1) not flat");
    ensure!(!z4.q_state(m as i64).unwrap().is_zero(), "witness state nonzero");
    ensure!((&z4.q_state(m as i64).unwrap() * &a).is_zero(), "witness annihilates");
    Ok(())
}

fn fleet() -> Vec<QContext> {
    let mut out = Vec::new();
    for n in 2..=12u64 {
        let r = ring(&format!("Z/{n}"));
        out.extend(r.elements().unwrap().map(QContext::new));
    }
    out.push(ctx("Z[t]", "t"));
    out.push(ctx("Q(t)", "t"));
    out.push(ctx("Z[i]", "i"));
    for p in 2..=12 {
        out.push(ctx(&format!("Cyclo({p})"), "t"));
    }
    out
}

fn criterion_2() -> Outcome {
    let mut divp_runs = 0;
    for c in fleet() {
        passes("explicit", &c, m_max(20))?;
        passes("addmul", &c, m_max(20))?;
        let r = run("divp", &c, m_max(20));
        match (r.status, c.q_characteristic(DEFAULT_BOUND)) {
            (Status::Pass, QCharResult::Finite(_)) => divp_runs += 1,
            (Status::HypothesesUnmet, QCharResult::Zero { .. }) => {}
            _ => return Err(format!("divp over ({}, {}):\n{r}", c.ring(), c.q())),
        }
    }
    ensure!(divp_runs > 0, "divp never ran");
    Ok(())
}

fn criterion_3() -> Outcome {
    let c = ctx("Z[t]", "t");
    passes("cyclo_binom", &c, n_max(24))?;
    passes("symmetry", &c, n_max(20))?;
    passes("transitivity", &c, n_max(12))?;
    passes("chu_vandermonde", &c, n_max(16))?;
    // the factorial quotient, computed in Q(t), lands in Z[t]
    let qt = ctx("Q(t)", "t");
    let facts: Vec<Elem> = (0..=24).map(|n| qt.q_factorial(n)).collect();
    let mut pascal = c.pascal_table();
    for n in 0..=24u64 {
        for k in 0..=n {
            let g = pascal.get(n, k);
            let coeffs = g.coeffs().ok_or("Z[t] element without coefficients")?;
            ensure!(coeffs.iter().all(|a| a.as_integer().is_some()), "non-integer coefficient");
            let inv = (&facts[k as usize] * &facts[(n - k) as usize]).try_invert().unwrap();
            let quotient = &facts[n as usize] * &inv;
            ensure!(quotient == el(qt.ring(), &g.to_string()), "C({n},{k}) quotient differs from Pascal");
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for p in 2..=12 {
        let c = ctx(&format!("Cyclo({p})"), "t");
        let r = run("lucas", &c, Ranges { n_max: Some(4), k_max: Some(4), m_max: None });
        ensure!(r.status == Status::Pass, "lucas over Cyclo({p}):\n{r}");
        ensure!(r.cases == 25 * p * p, "lucas over Cyclo({p}) ran {} cases", r.cases);
    }
    for p in [2u64, 3, 5, 7] {
        let c = ctx(&format!("Z/{p}"), "1");
        let top = p * p * p;
        let mut t = c.pascal_table();
        for n in 0..=top {
            for k in 0..=top {
                let (mut a, mut b, mut digits) = (n, k, BigInt::from(1));
                while a > 0 || b > 0 {
                    digits *= choose(a % p, b % p);
                    a /= p;
                    b /= p;
                }
                ensure!(t.get(n, k) == c.ring().from_bigint(&digits), "Lucas mod {p} at ({n},{k})");
            }
        }
    }
    Ok(())
}

/// All k-dimensional subspaces of F^n for a finite field F, as sorted lists
/// of vector indices, grown one vector at a time from the zero space.
/// Vector arithmetic goes through the field's own operations once, into
/// lookup tables.
fn subspaces(field: &Ring, n: usize, k: usize) -> BTreeSet<Vec<usize>> {
    let scalars: Vec<Elem> = field.elements().unwrap().collect();
    let q = scalars.len();
    let size = q.pow(n as u32);
    let index_of = |e: &Elem| scalars.iter().position(|s| s == e).unwrap();
    let add: Vec<Vec<usize>> = scalars.iter().map(|a| scalars.iter().map(|b| index_of(&(a + b))).collect()).collect();
    let mul: Vec<Vec<usize>> = scalars.iter().map(|a| scalars.iter().map(|b| index_of(&(a * b))).collect()).collect();
    // vector i has base-q digits as coordinates
    let vecs: Vec<Vec<usize>> = (0..size)
        .map(|mut v| {
            (0..n)
                .map(|_| {
                    let d = v % q;
                    v /= q;
                    d
                })
                .collect()
        })
        .collect();
    let index = |d: &[usize]| d.iter().rev().fold(0, |acc, &x| acc * q + x);
    let sum: Vec<Vec<usize>> = (0..size)
        .map(|u| {
            (0..size).map(|v| index(&vecs[u].iter().zip(&vecs[v]).map(|(&a, &b)| add[a][b]).collect::<Vec<_>>())).collect()
        })
        .collect();
    let scale: Vec<Vec<usize>> =
        (0..q).map(|s| (0..size).map(|v| index(&vecs[v].iter().map(|&b| mul[s][b]).collect::<Vec<_>>())).collect()).collect();
    let (sum, scale) = (&sum, &scale);
    let zero = index(&vec![index_of(&field.zero()); n]);
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::from([vec![zero]]);
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for space in &level {
            let mut covered = vec![false; size];
            for &u in space {
                covered[u] = true;
            }
            for v in 0..size {
                if covered[v] {
                    continue;
                }
                // span(space ∪ {v}) = { u + s·v }
                let mut grown: Vec<usize> =
                    space.iter().flat_map(|&u| scale.iter().map(move |sv| sum[u][sv[v]])).collect();
                grown.sort_unstable();
                grown.dedup();
                // every vector of the grown space yields the same extension
                for &w in &grown {
                    covered[w] = true;
                }
                next.insert(grown);
            }
        }
        level = next;
    }
    level
}

fn criterion_5() -> Outcome {
    for (q, field) in [(2, "Z/2"), (3, "Z/3"), (4, "Z/2[X]/(X^2+X+1)"), (5, "Z/5")] {
        let f = ring(field);
        let c = ctx("Z", &q.to_string());
        for n in 0..=4u64 {
            for k in 0..=n {
                let count = subspaces(&f, n as usize, k as usize).len();
                let g = c.q_binomial(n, k).as_integer().unwrap();
                ensure!(g == BigInt::from(count), "C({n},{k})_{q} = {g} but {count} subspaces");
            }
        }
    }
    ensure!(ctx("Z", "2").q_binomial(4, 2).as_integer() == Some(BigInt::from(35)), "C(4,2)_2 = 35");
    Ok(())
}

fn criterion_6() -> Outcome {
    let c = ctx("Z[t]", "t");
    passes("cyclo_int", &c, n_max(60))?;
    passes("cyclo_fact", &c, n_max(30))?;
    Ok(())
}

fn criterion_7() -> Outcome {
    let c = ctx("Q(t^(1/6))", "t");
    let r = run("rational_state", &c, m_max(3));
    ensure!(r.status == Status::Pass, "rational_state over Q(t^(1/6)):\n{r}");
    // 37 grid points from -3 to 3 in steps of 1/6
    ensure!(r.failures.is_empty() && r.cases >= 37 * 37, "grid not covered: {} cases", r.cases);
    // roots of 1: q = 1 with q_2 = −1 gives (2)_{q_2} = 0
    let q1 = ctx("Q", "1");
    let dens = DenominatorSet::close(&[2]).unwrap();
    let roots = BTreeMap::from([(1, el(q1.ring(), "1")), (2, el(q1.ring(), "-1"))]);
    let sys = RootSystem::build(&q1, &dens, roots).unwrap();
    ensure!(!sys.is_admissible(), "q = 1, q_2 = -1 accepted");
    let half = qint_core::qrational::ratio(1, 2);
    ensure!(matches!(sys.q_state(&half), Err(Error::NotAdmissible { n: 2, .. })), "roots of 1 not flagged");
    let zi = ctx("Z[i]", "-1");
    let roots = BTreeMap::from([(1, el(zi.ring(), "-1")), (2, el(zi.ring(), "i"))]);
    let sys = RootSystem::build(&zi, &dens, roots).unwrap();
    ensure!(!sys.is_admissible(), "Z[i], q_2 = i accepted");
    ensure!(matches!(sys.q_state(&half), Err(Error::NotAdmissible { n: 2, .. })), "Z[i] not flagged");
    Ok(())
}

fn stirling2(n: usize, k: usize) -> BigInt {
    let mut s = vec![vec![BigInt::from(0); n + 1]; n + 1];
    s[0][0] = BigInt::from(1);
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = BigInt::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
        }
    }
    s[n][k].clone()
}

fn criterion_8() -> Outcome {
    let zq = ctx("Z[t]", "t");
    passes("sigit", &zq, n_max(8))?;
    passes("mov", &zq, n_max(12))?;
    passes("twisted_binomial", &zq, n_max(8))?;
    let laurent = ctx("Z[t,1/t]", "t");
    let r = run("sigmaen", &laurent, m_max(12));
    ensure!(r.status == Status::Pass && r.ranges.get("m_max") == Some(&12), "sigmaen:\n{r}");
    ensure!(r.cases == 2 * 2 * 25, "sigmaen did not cover both signs: {} cases", r.cases);
    for p in [2, 3, 5] {
        passes("frobenius", &ctx(&format!("Cyclo({p})"), "t"), Ranges::default())?;
    }
    for f in ["Z/2", "Z/3"] {
        passes("artin_schreier", &ctx(f, "1"), Ranges::default())?;
    }
    for p in 2..=7 {
        passes("sign_rule", &ctx(&format!("Cyclo({p})"), "t"), Ranges::default())?;
    }
    // falling factorials: x^d = Σ S(d,i) x^(i) under x ↦ x − 1
    let z = ring("Z");
    let alg = TwistedAlgebra::affine(&z.one(), &z.from_i64(-1)).unwrap();
    let mut basis = TwistedPowerBasis::new(&alg).unwrap();
    for d in 0..=8usize {
        let f = alg.generator(0).pow(d as u64);
        let coeffs = basis.expand(&f).unwrap();
        for i in 0..=d {
            let c = coeffs.get(&i).map(|e| e.as_integer().unwrap()).unwrap_or_default();
            ensure!(c == stirling2(d, i), "S({d},{i}) = {} but expansion gives {c}", stirling2(d, i));
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for p in 2..=12u64 {
        let c = ctx(&format!("Cyclo({p})"), "t");
        ensure!(c.q_characteristic(DEFAULT_BOUND) == QCharResult::Finite(p), "q-char Cyclo({p})");
        for k in 1..=12u64 {
            // hypotheses: (k)_q nonzero and not a zero divisor
            let s = c.q_state(k as i64).unwrap();
            let power = c.power_context(k);
            if s.is_zero() {
                // p | k: q^k = 1 and the q^k-characteristic is the ordinary one
                ensure!(k % p == 0, "(k)_q vanished with p = {p} not dividing k = {k}");
                ensure!(
                    power.q_characteristic(DEFAULT_BOUND) == QCharResult::Zero { certified: true },
                    "q^{k}-char over Cyclo({p}) should be the characteristic 0"
                );
                continue;
            }
            ensure!(c.ring().is_domain(), "Cyclo({p}) is not a domain");
            let d = num_integer::gcd(p, k);
            ensure!(
                power.q_characteristic(DEFAULT_BOUND) == QCharResult::Finite(p / d),
                "q^{k}-char over Cyclo({p}) is {} not {}",
                power.q_characteristic(DEFAULT_BOUND),
                p / d
            );
            ensure!(power.certify_flatness().unwrap().flat, "q^{k} over Cyclo({p}) not flat");
        }
    }
    let z4 = ctx("Z/4", "-1");
    ensure!(z4.q_characteristic(DEFAULT_BOUND) == QCharResult::Finite(2), "q-char (Z/4, -1)");
    ensure!(z4.certify_flatness().unwrap().divisible, "(Z/4, -1) divisible");
    let sq = z4.power_context(2);
    ensure!(sq.q().is_one(), "(-1)^2 = 1");
    ensure!(!sq.certify_flatness().unwrap().flat, "(Z/4, 1) should not be flat");
    Ok(())
}

fn qint(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qint")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).trim().to_string())
}

fn criterion_10() -> Outcome {
    let specs = [
        "Z",
        "Q",
        "Z/8",
        "Z/12",
        "Z[i]",
        "Z[t]",
        "Z[t,1/t]",
        "Q(t)",
        "Cyclo(5)",
        "Cyclo(12)",
        "Z/7[t]",
        "Z/2[X]/(X^2+X+1)",
        "Q[X]/(X^2-1)",
        "Q(t^(1/6))",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for spec in specs {
        let r = ring(spec);
        ensure!(parse_ring(&r.to_string()).unwrap() == r, "ring {spec} does not re-parse");
        for _ in 0..1000 {
            let e = r.random_element(&mut rng);
            let back = parse_elem(&r, &e.to_string()).map_err(|err| format!("{spec}: '{e}': {err}"))?;
            ensure!(back == e, "{spec}: '{e}' re-parses to '{back}'");
        }
    }
    let (code, _) = qint(&["verify", "lucas", "--ring", "Cyclo(5)"]);
    ensure!(code == 0, "verify lucas Cyclo(5) exited {code}");
    let (code, out) = qint(&["verify", "qbin_vanish", "--ring", "Z/4", "--q", "1"]);
    ensure!(code == 2 && out.contains("hypotheses unmet"), "qbin_vanish Z/4 exited {code}");
    let (code, _) = qint(&["verify", "no_such_identity"]);
    ensure!(code == 3, "unknown identity exited {code}");
    let (code, _) = qint(&["qbinom", "--ring", "Z[", "4", "2"]);
    ensure!(code == 3, "bad ring exited {code}");
    let (code, _) = qint(&["qint", "--ring", "Z[t]", "--", "-1"]);
    ensure!(code == 1, "domain error exited {code}");
    let (code, out) = qint(&["verify", "pascal", "--ring", "Z[t]", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure!(code == 0 && v["report"]["failures"].as_array().is_some_and(|f| f.is_empty()), "json report");
    Ok(())
}

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("counterexample regression", criterion_1, 1),
        ("identity suites over the fleet", criterion_2, 10),
        ("binomial suites", criterion_3, 30),
        ("quantum Lucas", criterion_4, 60),
        ("Grassmannian oracle", criterion_5, 10),
        ("cyclotomic factorizations", criterion_6, 10),
        ("quantum rationals", criterion_7, 5),
        ("twisted suite", criterion_8, 30),
        ("power-of-q law", criterion_9, 5),
        ("CLI contract", criterion_10, 10),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > Duration::from_secs(*budget) {
                Err(format!("over the {budget}s budget"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({:.2}s)", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({:.2}s) {why}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
