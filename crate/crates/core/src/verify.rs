//! The identity catalog: exhaustive (or seeded-sampled) checks of every
//! law over a chosen ring and q, with a structured report.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{
    cyclotomic_poly, divisors, eval_factorization, eval_product, factor_q_binomial, factor_q_factorial,
    factor_q_integer, IntPoly,
};
use crate::error::{Error, Result};
use crate::qnum::{FlatnessCertificate, QCharResult, QContext, DEFAULT_BOUND};
use crate::qrational::{grid, negative_state_formula, ratio, DenominatorSet, RootSystem};
use crate::ring::{Elem, Ring};
use crate::twisted::{artin_schreier, MPoly, TwistedAlgebra};

pub const CATALOG: &[&str] = &[
    "pascal",
    "explicit",
    "addmul",
    "divp",
    "even",
    "prim",
    "qbin_vanish",
    "symmetry",
    "transitivity",
    "chu_vandermonde",
    "lucas",
    "binomial_formula",
    "cyclo_int",
    "cyclo_fact",
    "cyclo_binom",
    "rational_state",
    "sigmaen",
    "sigit",
    "mov",
    "twisted_binomial",
    "frobenius",
    "artin_schreier",
    "sign_rule",
];

/// Optional overrides of each identity's default ranges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ranges {
    pub n_max: Option<u64>,
    pub k_max: Option<u64>,
    pub m_max: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub ranges: Ranges,
    /// Check only this many cases, chosen with `seed`.
    pub sample: Option<usize>,
    pub seed: u64,
    /// Iteration bound for the q-characteristic search.
    pub bound: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { ranges: Ranges::default(), sample: None, seed: 0, bound: DEFAULT_BOUND }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    HypothesesUnmet,
}

/// One counterexample: the inputs and both sides in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub ring: String,
    pub q: String,
    pub ranges: BTreeMap<String, i64>,
    pub cases: u64,
    pub failures: Vec<CaseFailure>,
    pub status: Status,
    /// Why the hypotheses fail, when they do.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    /// 0 = pass, 1 = counterexample, 2 = hypotheses unmet.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::HypothesesUnmet => 2,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranges: Vec<String> = self.ranges.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "identity: {}", self.identity)?;
        writeln!(f, "ring: {}  q: {}", self.ring, self.q)?;
        writeln!(f, "ranges: {}", ranges.join(" "))?;
        writeln!(f, "cases: {}  failures: {}", self.cases, self.failures.len())?;
        for c in &self.failures {
            let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "  [{}] lhs = {}  rhs = {}", inputs.join(" "), c.lhs, c.rhs)?;
        }
        let status = match self.status {
            Status::Pass => "pass".to_string(),
            Status::Fail => "FAIL".to_string(),
            Status::HypothesesUnmet => {
                format!("hypotheses unmet: {}", self.note.as_deref().unwrap_or(""))
            }
        };
        writeln!(f, "status: {status}")?;
        write!(f, "wall time: {:.3}s", self.wall_time.as_secs_f64())
    }
}

/// A case is a named law plus labelled integer parameters.
#[derive(Clone, Debug)]
struct Case {
    law: &'static str,
    args: Vec<(&'static str, i64)>,
}

impl Case {
    fn new(law: &'static str, args: &[(&'static str, i64)]) -> Case {
        Case { law, args: args.to_vec() }
    }

    fn get(&self, i: usize) -> i64 {
        self.args[i].1
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        let mut m: BTreeMap<String, String> = self.args.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        if !self.law.is_empty() {
            m.insert("law".into(), self.law.into());
        }
        m
    }
}

type Mismatch = Option<(String, String)>;
type Check<'a> = Box<dyn Fn(&Case) -> Result<Mismatch> + Sync + 'a>;

enum Plan<'a> {
    Run { cases: Vec<Case>, check: Check<'a> },
    Unmet(String),
}

fn same<T: PartialEq + fmt::Display>(lhs: &T, rhs: &T) -> Mismatch {
    (lhs != rhs).then(|| (lhs.to_string(), rhs.to_string()))
}

fn holds(ok: bool, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Mismatch {
    (!ok).then(|| (lhs.to_string(), rhs.to_string()))
}

/// Runs `identity` over (R, q).
pub fn verify(identity: &str, ctx: &QContext, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut ranges = BTreeMap::new();
    let plan = build(identity, ctx, opts, &mut ranges)?;
    let mut report = VerificationReport {
        identity: identity.to_string(),
        ring: ctx.ring().to_string(),
        q: ctx.q().to_string(),
        ranges,
        cases: 0,
        failures: Vec::new(),
        status: Status::Pass,
        note: None,
        wall_time: Duration::ZERO,
    };
    match plan {
        Plan::Unmet(why) => {
            report.status = Status::HypothesesUnmet;
            report.note = Some(why);
        }
        Plan::Run { cases, check } => {
            let chosen: Vec<&Case> = match opts.sample {
                Some(n) if n < cases.len() => {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    let mut idx = rand::seq::index::sample(&mut rng, cases.len(), n).into_vec();
                    idx.sort_unstable();
                    idx.into_iter().map(|i| &cases[i]).collect()
                }
                _ => cases.iter().collect(),
            };
            // collect keeps case order, so the report is canonical
            let results: Vec<Option<CaseFailure>> = chosen
                .par_iter()
                .map(|case| {
                    let (lhs, rhs) = match check(case) {
                        Ok(None) => return None,
                        Ok(Some(pair)) => pair,
                        Err(e) => (format!("error: {e}"), String::new()),
                    };
                    Some(CaseFailure { inputs: case.inputs(), lhs, rhs })
                })
                .collect();
            report.cases = chosen.len() as u64;
            report.failures = results.into_iter().flatten().collect();
            if !report.failures.is_empty() {
                report.status = Status::Fail;
            }
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

fn build<'a>(
    identity: &str,
    ctx: &'a QContext,
    opts: &VerifyOptions,
    ranges: &mut BTreeMap<String, i64>,
) -> Result<Plan<'a>> {
    let r = &opts.ranges;
    let mut range = |name: &str, given: Option<u64>, default: u64| -> u64 {
        let v = given.unwrap_or(default);
        ranges.insert(name.to_string(), v as i64);
        v
    };
    Ok(match identity {
        "pascal" => pascal(ctx, range("n_max", r.n_max, 20)),
        "explicit" => explicit(ctx, range("m_max", r.m_max, 20))?,
        "addmul" => addmul(ctx, range("m_max", r.m_max, 20))?,
        "divp" => divp(ctx, range("m_max", r.m_max, 20), opts.bound)?,
        "even" => even(ctx, opts.bound),
        "prim" => prim(ctx, opts.bound),
        "qbin_vanish" => qbin_vanish(ctx, opts.bound),
        "symmetry" => symmetry(ctx, range("n_max", r.n_max, 20)),
        "transitivity" => transitivity(ctx, range("n_max", r.n_max, 12)),
        "chu_vandermonde" => chu_vandermonde(ctx, range("n_max", r.n_max, 16)),
        "lucas" => {
            let n = range("n_max", r.n_max, 4);
            lucas(ctx, n, range("k_max", r.k_max, n), opts.bound)
        }
        "binomial_formula" => binomial_formula(ctx, range("n_max", r.n_max, 12), opts.bound),
        "cyclo_int" => cyclo_int(ctx, range("n_max", r.n_max, 60)),
        "cyclo_fact" => cyclo_fact(ctx, range("n_max", r.n_max, 30)),
        "cyclo_binom" => cyclo_binom(ctx, range("n_max", r.n_max, 24)),
        "rational_state" => rational_state(ctx, range("m_max", r.m_max, 3))?,
        "sigmaen" => sigmaen(ctx, range("m_max", r.m_max, 12))?,
        "sigit" => sigit(ctx, range("n_max", r.n_max, 8), opts.seed)?,
        "mov" => mov(ctx, range("n_max", r.n_max, 12), opts.seed)?,
        "twisted_binomial" => twisted_binomial(ctx, range("n_max", r.n_max, 8))?,
        "frobenius" => frobenius(ctx, opts.bound)?,
        "artin_schreier" => artin_schreier_plan(ctx)?,
        "sign_rule" => sign_rule(ctx, opts.bound)?,
        other => return Err(Error::Domain(format!("unknown identity '{other}'"))),
    })
}

fn triangle(ctx: &QContext, n: u64) -> Vec<Vec<Elem>> {
    let mut t = ctx.pascal_table();
    (0..=n).map(|i| t.row(i).to_vec()).collect()
}

fn powers(q: &Elem, n: u64) -> Vec<Elem> {
    let mut out = vec![q.ring().one()];
    for i in 0..n as usize {
        out.push(&out[i] * q);
    }
    out
}

fn binom(tri: &[Vec<Elem>], ring: &Ring, n: i64, k: i64) -> Elem {
    if n < 0 || k < 0 || k > n {
        return ring.zero();
    }
    tri[n as usize][k as usize].clone()
}

fn classical_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn q_char(ctx: &QContext, bound: u64) -> QCharResult {
    ctx.q_characteristic(bound)
}

/// The q-characteristic when it is a positive p.
fn finite_q_char(ctx: &QContext, bound: u64) -> std::result::Result<u64, String> {
    match q_char(ctx, bound) {
        QCharResult::Finite(p) => Ok(p),
        other => Err(format!("q-characteristic is {other}, not positive")),
    }
}

fn flatness(ctx: &QContext) -> std::result::Result<FlatnessCertificate, String> {
    ctx.certify_flatness().map_err(|e| format!("flatness undecided: {e}"))
}

fn require_flat(ctx: &QContext) -> std::result::Result<(), String> {
    let cert = flatness(ctx)?;
    match cert.witness {
        None if cert.flat => Ok(()),
        Some((m, a)) => Err(format!("not q-flat: ({m})_q * {a} = 0")),
        None => Err("not q-flat".into()),
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Lowest index allowed for integer arguments: negative only with q a unit.
fn low(ctx: &QContext, m: u64) -> i64 {
    if ctx.q_inverse().is_some() {
        -(m as i64)
    } else {
        0
    }
}

fn pascal(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let tri = triangle(ctx, n_max);
    let pw = powers(ctx.q(), n_max);
    let ring = ctx.ring().clone();
    let cases = (1..=n_max as i64)
        .flat_map(|n| (0..=n).map(move |k| Case::new("", &[("n", n), ("k", k)])))
        .collect();
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (n, k) = (c.get(0), c.get(1));
            let b = |a, b| binom(&tri, &ring, a, b);
            let lhs = b(n, k);
            let first = &b(n - 1, k - 1) + &(&pw[k as usize] * &b(n - 1, k));
            let second = &(&pw[(n - k) as usize] * &b(n - 1, k - 1)) + &b(n - 1, k);
            Ok(same(&lhs, &first).or_else(|| same(&lhs, &second)))
        }),
    }
}

fn explicit(ctx: &QContext, m_max: u64) -> Result<Plan<'_>> {
    let lo = low(ctx, m_max);
    let states = ctx.q_state_range(lo, m_max as i64)?;
    let one = ctx.ring().one();
    let cases = (lo..=m_max as i64).map(|m| Case::new("", &[("m", m)])).collect();
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let m = c.get(0);
            let lhs = &(&one - ctx.q()) * &states[(m - lo) as usize];
            Ok(same(&lhs, &(&one - &ctx.q().pow_i(m)?)))
        }),
    })
}

fn addmul(ctx: &QContext, m_max: u64) -> Result<Plan<'_>> {
    let (lo, hi) = (low(ctx, m_max), m_max as i64);
    let big_lo = if lo < 0 { -(hi * hi) } else { 0 };
    let big = ctx.q_state_range(big_lo, hi * hi)?;
    let small: Vec<Elem> = big[(lo - big_lo) as usize..=(hi - big_lo) as usize].to_vec();
    let qm: Vec<Elem> = (lo..=hi).map(|m| ctx.q().pow_i(m)).collect::<Result<_>>()?;
    // (n)_{q^m} for every m, one inductive pass each
    let twisted: Vec<Vec<Elem>> = qm
        .par_iter()
        .map(|q| QContext::new(q.clone()).q_state_range(lo, hi))
        .collect::<Result<_>>()?;
    let mut cases = Vec::new();
    for m in lo..=hi {
        for n in lo..=hi {
            cases.push(Case::new("add", &[("m", m), ("n", n)]));
            cases.push(Case::new("mul", &[("m", m), ("n", n)]));
        }
    }
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (m, n) = (c.get(0), c.get(1));
            let (im, in_) = ((m - lo) as usize, (n - lo) as usize);
            Ok(if c.law == "add" {
                same(&big[(m + n - big_lo) as usize], &(&small[im] + &(&qm[im] * &small[in_])))
            } else {
                same(&big[(m * n - big_lo) as usize], &(&small[im] * &twisted[im][in_]))
            })
        }),
    })
}

fn divp(ctx: &QContext, m_max: u64, bound: u64) -> Result<Plan<'_>> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) => p as i64,
        Err(why) => return Ok(Plan::Unmet(why)),
    };
    let lo = low(ctx, m_max);
    let hi = (m_max as i64).max(5 * p + 5);
    let states = ctx.q_state_range(lo, hi)?;
    let mut cases = Vec::new();
    for m in lo..=m_max as i64 {
        for n in lo..=m_max as i64 {
            if m < n && (m - n) % p == 0 {
                cases.push(Case::new("congruence", &[("m", m), ("n", n)]));
            }
        }
        if m.unsigned_abs().gcd(&(p as u64)) == 1 {
            cases.push(Case::new("unit", &[("m", m)]));
        }
    }
    for m in 0..=5 * p {
        cases.push(Case::new("zero_set", &[("m", m)]));
    }
    for m in p..=p + 5 {
        cases.push(Case::new("factorial", &[("m", m)]));
    }
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let s = |m: i64| &states[(m - lo) as usize];
            Ok(match c.law {
                "congruence" => same(s(c.get(0)), s(c.get(1))),
                "unit" => holds(s(c.get(0)).is_unit(), s(c.get(0)), "a unit"),
                "zero_set" => {
                    let m = c.get(0);
                    holds(s(m).is_zero() == (m % p == 0), s(m), format!("zero iff {p} | {m}"))
                }
                _ => {
                    let f = ctx.q_factorial(c.get(0) as u64);
                    holds(f.is_zero(), f, 0)
                }
            })
        }),
    })
}

fn even(ctx: &QContext, bound: u64) -> Plan<'_> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) if p % 2 == 0 => p,
        Ok(p) => return Plan::Unmet(format!("q-characteristic {p} is odd")),
        Err(why) => return Plan::Unmet(why),
    };
    if let Err(why) = require_flat(ctx) {
        return Plan::Unmet(why);
    }
    Plan::Run {
        cases: vec![Case::new("", &[("p", p as i64)])],
        check: Box::new(move |_| Ok(same(&ctx.q().pow(p / 2), &-&ctx.ring().one()))),
    }
}

fn prim(ctx: &QContext, bound: u64) -> Plan<'_> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) if is_prime(p) => p,
        Ok(p) => return Plan::Unmet(format!("q-characteristic {p} is not prime")),
        Err(why) => return Plan::Unmet(why),
    };
    let mut cases: Vec<Case> = (1..p as i64).map(|m| Case::new("unit", &[("m", m)])).collect();
    if ctx.ring().is_finite() {
        cases.push(Case::new("certificate", &[("p", p as i64)]));
    }
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            if c.law == "unit" {
                let s = ctx.q_state(c.get(0))?;
                return Ok(holds(s.is_unit(), &s, "a unit"));
            }
            let cert = ctx.certify_flatness()?;
            Ok(holds(cert.divisible, format!("divisible={}", cert.divisible), "divisible=true"))
        }),
    }
}

fn qbin_vanish(ctx: &QContext, bound: u64) -> Plan<'_> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) => p,
        Err(why) => return Plan::Unmet(why),
    };
    if let Err(why) = require_flat(ctx) {
        return Plan::Unmet(why);
    }
    let row = triangle(ctx, p).pop().unwrap();
    let cases = (0..=p as i64).map(|k| Case::new("", &[("p", p as i64), ("k", k)])).collect();
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let k = c.get(1) as u64;
            let want = if k == 0 || k == p { ctx.ring().one() } else { ctx.ring().zero() };
            Ok(same(&row[k as usize], &want))
        }),
    }
}

fn symmetry(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let tri = triangle(ctx, n_max);
    let cases = (0..=n_max as i64)
        .flat_map(|n| (0..=n).map(move |k| Case::new("", &[("n", n), ("k", k)])))
        .collect();
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (n, k) = (c.get(0) as usize, c.get(1) as usize);
            Ok(same(&tri[n][k], &tri[n][n - k]))
        }),
    }
}

fn transitivity(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let tri = triangle(ctx, n_max);
    let mut cases = Vec::new();
    for n in 0..=n_max as i64 {
        for j in 0..=n {
            for k in 0..=j {
                cases.push(Case::new("", &[("n", n), ("j", j), ("k", k)]));
            }
        }
    }
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (n, j, k) = (c.get(0) as usize, c.get(1) as usize, c.get(2) as usize);
            let lhs = &tri[n][j] * &tri[j][k];
            let rhs = &tri[n][k] * &tri[n - k][n - j];
            Ok(same(&lhs, &rhs))
        }),
    }
}

fn chu_vandermonde(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let tri = triangle(ctx, n_max);
    let pw = powers(ctx.q(), n_max * n_max / 4 + 1);
    let ring = ctx.ring().clone();
    let mut cases = Vec::new();
    for n in 0..=n_max as i64 {
        for m in 0..=n_max as i64 - n {
            for k in 0..=n + m {
                cases.push(Case::new("", &[("n", n), ("m", m), ("k", k)]));
            }
        }
    }
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (n, m, k) = (c.get(0), c.get(1), c.get(2));
            let b = |a, b| binom(&tri, &ring, a, b);
            let rhs = ((k - m).max(0)..=k.min(n)).fold(ring.zero(), |acc, i| {
                let e = (i * (m - k + i)) as usize;
                &acc + &(&pw[e] * &(&b(n, i) * &b(m, k - i)))
            });
            Ok(same(&b(n + m, k), &rhs))
        }),
    }
}

fn lucas(ctx: &QContext, n_max: u64, k_max: u64, bound: u64) -> Plan<'_> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) => p,
        Err(why) => return Plan::Unmet(why),
    };
    if let Err(why) = require_flat(ctx) {
        return Plan::Unmet(why);
    }
    let top = n_max.max(k_max) * p + p - 1;
    let tri = triangle(ctx, top);
    let ring = ctx.ring().clone();
    let p = p as i64;
    let mut cases = Vec::new();
    for n in 0..=n_max as i64 {
        for k in 0..=k_max as i64 {
            for i in 0..p {
                for j in 0..p {
                    cases.push(Case::new("", &[("n", n), ("k", k), ("i", i), ("j", j), ("p", p)]));
                }
            }
        }
    }
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (n, k, i, j) = (c.get(0), c.get(1), c.get(2), c.get(3));
            let lhs = binom(&tri, &ring, n * p + i, k * p + j);
            let coeff = ring.from_bigint(&classical_binomial(n as u64, k as u64));
            Ok(same(&lhs, &(&coeff * &binom(&tri, &ring, i, j))))
        }),
    }
}

fn binomial_formula(ctx: &QContext, n_max: u64, bound: u64) -> Plan<'_> {
    let tri = triangle(ctx, n_max);
    let facts: Vec<Elem> = {
        let states = ctx.q_states(n_max);
        let mut out = vec![ctx.ring().one()];
        for s in &states[1..] {
            let next = &out[out.len() - 1] * s;
            out.push(next);
        }
        out
    };
    // the quotient form needs q-char 0 and q-divisibility
    let divisible = matches!(q_char(ctx, bound), QCharResult::Zero { certified: true })
        && ctx.certify_flatness().is_ok_and(|c| c.divisible);
    let mut cases = Vec::new();
    for n in 0..=n_max as i64 {
        for k in 0..=n {
            cases.push(Case::new("factorial", &[("n", n), ("k", k)]));
            if divisible {
                cases.push(Case::new("quotient", &[("n", n), ("k", k)]));
            }
        }
        cases.push(Case::new("product", &[("n", n)]));
    }
    let alg = TwistedAlgebra::new(ctx.ring(), &["x", "y"], &["x", "y"]).expect("identity algebra");
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let n = c.get(0) as usize;
            Ok(match c.law {
                "factorial" => {
                    let k = c.get(1) as usize;
                    same(&(&tri[n][k] * &(&facts[k] * &facts[n - k])), &facts[n])
                }
                "quotient" => {
                    let k = c.get(1) as usize;
                    let inv = |e: &Elem| e.try_invert().ok_or_else(|| Error::NotInvertible(e.to_string()));
                    let rhs = &facts[n] * &(&inv(&facts[k])? * &inv(&facts[n - k])?);
                    same(&tri[n][k], &rhs)
                }
                _ => {
                    let (x, y) = (alg.generator(0), alg.generator(1));
                    let lhs = (0..n as u64).fold(alg.one(), |acc, i| acc.mul(&x.scale(&ctx.q().pow(i)).add(&y)));
                    let rhs = (0..=n).fold(alg.zero(), |acc, k| {
                        let coeff = &ctx.q().pow((k * k.saturating_sub(1) / 2) as u64) * &tri[n][k];
                        acc.add(&x.pow(k as u64).mul(&y.pow((n - k) as u64)).scale(&coeff))
                    });
                    same(&lhs, &rhs)
                }
            })
        }),
    }
}

fn cyclo_int(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let states = ctx.q_states(n_max);
    let mut cases = Vec::new();
    for n in 1..=n_max as i64 {
        cases.push(Case::new("product", &[("n", n)]));
        cases.push(Case::new("state", &[("n", n)]));
    }
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let n = c.get(0) as u64;
            Ok(if c.law == "product" {
                let prod = divisors(n).iter().fold(IntPoly::one(), |acc, d| acc.mul(&cyclotomic_poly(*d)));
                let want = IntPoly::x_pow_minus_one(n as usize);
                holds(prod == want, format!("{:?}", prod.coeffs()), format!("{:?}", want.coeffs()))
            } else {
                same(&eval_product(&factor_q_integer(n), ctx.q()), &states[n as usize])
            })
        }),
    }
}

fn cyclo_fact(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let cases = (0..=n_max as i64).map(|n| Case::new("", &[("n", n)])).collect();
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let n = c.get(0) as u64;
            Ok(same(&eval_factorization(&factor_q_factorial(n), ctx.q()), &ctx.q_factorial(n)))
        }),
    }
}

fn cyclo_binom(ctx: &QContext, n_max: u64) -> Plan<'_> {
    let tri = triangle(ctx, n_max);
    let cases = (0..=n_max as i64)
        .flat_map(|n| (0..=n).map(move |k| Case::new("", &[("n", n), ("k", k)])))
        .collect();
    Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (n, k) = (c.get(0) as u64, c.get(1) as u64);
            for m in 2..=n.max(2) {
                let e = n / m - k / m - (n - k) / m;
                if e > 1 {
                    return Ok(Some((format!("exponent {e} at m = {m}"), "0 or 1".into())));
                }
            }
            Ok(same(&eval_product(&factor_q_binomial(n, k)?, ctx.q()), &tri[n as usize][k as usize]))
        }),
    }
}

/// The Puiseux system when (R, q) is (ℚ(t^(1/L)), t), else the trivial one.
fn root_system(ctx: &QContext) -> Result<RootSystem> {
    let ring = ctx.ring();
    if let (Some(l), true, Some("t")) = (ring.puiseux_denominator(), ring.is_field(), ring.var()) {
        if *ctx.q() == ring.puiseux_monomial(1, 1)? {
            return RootSystem::puiseux(&DenominatorSet::close(&[l])?);
        }
    }
    Ok(RootSystem::trivial(ctx))
}

fn rational_state(ctx: &QContext, m_max: u64) -> Result<Plan<'_>> {
    let sys = root_system(ctx)?;
    if !sys.is_admissible() {
        return Ok(Plan::Unmet("root system is not admissible".into()));
    }
    let big = sys.denominators().generator();
    let lo = low(ctx, m_max);
    let hi = m_max as i64;
    let pts = grid(big, lo, hi);
    // (k/L)_q = (k)_{q_L}/(L)_{q_L} in one pass, wide enough for sums and products
    let l = big as i64;
    let base = (2 * lo).min(if lo < 0 { -hi * hi } else { 0 }) * l;
    let root_ctx = QContext::new(sys.root(big).unwrap().clone());
    let raw = root_ctx.q_state_range(base, (2 * hi).max(hi * hi) * l)?;
    let den_inv = root_ctx
        .q_state(big as i64)?
        .try_invert()
        .ok_or_else(|| Error::NotAdmissible { n: big, value: "(L)_{q_L}".into() })?;
    let table: BTreeMap<BigRational, Elem> = raw
        .iter()
        .enumerate()
        .map(|(i, v)| (ratio(i as i64 + base, big as i64), v * &den_inv))
        .collect();
    let pows: Vec<Elem> = pts.iter().map(|r| sys.rational_power(r)).collect::<Result<_>>()?;
    // (r₂)_{q^{r₁}} tables in the induced systems, None when not covered
    let induced: Vec<Option<(u64, Vec<Elem>, Elem)>> = pts
        .par_iter()
        .map(|r1| {
            let ind = sys.induced(r1).ok()?;
            let n = ind.denominators().generator();
            let c = QContext::new(ind.root(n)?.clone());
            let states = c.q_state_range(lo * n as i64, hi * n as i64).ok()?;
            let inv = c.q_state(n as i64).ok()?.try_invert()?;
            Some((n, states, inv))
        })
        .collect();
    let count = pts.len() as i64;
    let mut cases = Vec::new();
    for i in 0..count {
        for law in ["definition", "aritn", "negative", "represent"] {
            cases.push(Case::new(law, &[("i", i)]));
        }
        for j in 0..count {
            cases.push(Case::new("add", &[("i", i), ("j", j)]));
            cases.push(Case::new("product", &[("i", i), ("j", j)]));
        }
    }
    let one = ctx.ring().one();
    let sys_ref = sys.clone();
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let sys = &sys_ref;
            let r1 = &pts[c.get(0) as usize];
            let state = |r: &BigRational| {
                table.get(r).cloned().ok_or_else(|| Error::Domain(format!("{r} outside the table")))
            };
            let s1 = state(r1)?;
            Ok(match c.law {
                "definition" => {
                    let direct = sys.q_state(r1)?;
                    let int = match r1.to_integer().to_i64() {
                        Some(m) if r1.denom().is_one() => Some(sys.context().q_state(m)?),
                        _ => None,
                    };
                    same(&direct, &s1).or_else(|| int.and_then(|v| same(&v, &s1)))
                }
                "aritn" => same(&(&(&one - ctx.q()) * &s1), &(&one - &pows[c.get(0) as usize])),
                "negative" => {
                    if !r1.is_negative() {
                        return Ok(None);
                    }
                    let n = r1.denom().to_u64().unwrap();
                    let m = (-r1.numer()).to_u64().unwrap() * (big / n);
                    same(&negative_state_formula(sys, m, big)?, &s1)
                }
                "represent" => {
                    let (m, n) = (r1.numer().to_i64().unwrap(), r1.denom().to_u64().unwrap());
                    for d in sys.denominators().members().filter(|d| d % n == 0) {
                        let k = (d / n) as i64;
                        let rc = QContext::new(sys.root(d).unwrap().clone());
                        let inv = rc.q_state(d as i64)?.try_invert().unwrap();
                        let v = &rc.q_state(k * m)? * &inv;
                        if v != s1 {
                            return Ok(Some((v.to_string(), s1.to_string())));
                        }
                    }
                    None
                }
                "add" => {
                    let j = c.get(1) as usize;
                    let r2 = &pts[j];
                    let rhs = &s1 + &(&pows[c.get(0) as usize] * &state(r2)?);
                    same(&state(&(r1 + r2))?, &rhs)
                }
                _ => {
                    let r2 = &pts[c.get(1) as usize];
                    let Some((n, states, inv)) = &induced[c.get(0) as usize] else { return Ok(None) };
                    let scaled = r2 * BigRational::from_integer(BigInt::from(*n));
                    let prod = r1 * r2;
                    if !scaled.is_integer() || !sys.denominators().covers(prod.denom().to_u64().unwrap()) {
                        return Ok(None);
                    }
                    let k = scaled.to_integer().to_i64().unwrap();
                    let second = &states[(k - lo * *n as i64) as usize] * inv;
                    same(&state(&prod)?, &(&s1 * &second))
                }
            })
        }),
    })
}

fn sigmaen(ctx: &QContext, m_max: u64) -> Result<Plan<'_>> {
    let ring = ctx.ring();
    let hs = [ring.one(), ctx.q() + &ring.from_i64(2)];
    let algs: Vec<TwistedAlgebra> = hs.iter().map(|h| TwistedAlgebra::affine(ctx.q(), h)).collect::<Result<_>>()?;
    let lo = low(ctx, m_max);
    let states = ctx.q_state_range(lo, m_max as i64)?;
    let mut cases = Vec::new();
    for h in 0..hs.len() as i64 {
        for n in lo..=m_max as i64 {
            cases.push(Case::new("closed", &[("h", h), ("n", n)]));
            cases.push(Case::new("difference", &[("h", h), ("n", n)]));
        }
    }
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (a, n) = (&algs[c.get(0) as usize], c.get(1));
            let x = a.generator(0);
            let orbit = a.affine_orbit(n)?;
            Ok(if c.law == "closed" {
                if n >= 0 {
                    same(&orbit, &a.sigma_pow(&x, n as u64))
                } else {
                    // σ^n composed with the iterated σ^{−n} is the identity
                    same(&a.substitute(&orbit, &[a.sigma_pow(&x, n.unsigned_abs())]), &x)
                }
            } else {
                let d = x.sub(&a.sigma(&x));
                same(&x.sub(&orbit), &d.scale(&states[(n - lo) as usize]))
            })
        }),
    })
}

/// f, g of degree ≤ 2 with coefficients drawn from the seed.
fn seeded_polys(alg: &TwistedAlgebra, seed: u64) -> (MPoly, MPoly) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = alg.base();
    let mut draw = |d: usize| {
        let mut c: Vec<Elem> = (0..d).map(|_| ring.random_element(&mut rng)).collect();
        // keep the top coefficient nonzero so the degree is exact
        c.push(ring.one());
        alg.univariate(&c)
    };
    (draw(2), draw(1))
}

fn sigit(ctx: &QContext, n_max: u64, seed: u64) -> Result<Plan<'_>> {
    let a = TwistedAlgebra::affine(ctx.q(), &ctx.ring().one())?;
    let (f, g) = seeded_polys(&a, seed);
    let mut cases = Vec::new();
    for n in 0..=n_max as i64 {
        for m in 0..=n_max as i64 - n {
            cases.push(Case::new("shift", &[("n", n), ("m", m)]));
        }
        if n <= 6 {
            cases.push(Case::new("product", &[("n", n)]));
        }
        if n <= 5 {
            for k in 0..=5 {
                cases.push(Case::new("sigma", &[("n", n), ("k", k)]));
            }
        }
    }
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let n = c.get(0) as u64;
            Ok(match c.law {
                "shift" => {
                    let m = c.get(1) as u64;
                    let lhs = a.twisted_power(&f, n).mul(&a.sigma_pow(&a.twisted_power(&f, m), n));
                    same(&lhs, &a.twisted_power(&f, n + m))
                }
                "product" => same(&a.twisted_power(&f.mul(&g), n), &a.twisted_power(&f, n).mul(&a.twisted_power(&g, n))),
                _ => {
                    let k = c.get(1) as u64;
                    same(&a.sigma_pow(&a.twisted_power(&f, n), k), &a.twisted_power(&a.sigma_pow(&f, k), n))
                }
            })
        }),
    })
}

fn mov(ctx: &QContext, n_max: u64, seed: u64) -> Result<Plan<'_>> {
    let a = TwistedAlgebra::affine(ctx.q(), &ctx.ring().one())?;
    let (_, f) = seeded_polys(&a, seed);
    let mut cases = Vec::new();
    for n in 0..=n_max as i64 {
        for m in 0..=n_max as i64 {
            if n * m <= n_max as i64 {
                cases.push(Case::new("", &[("n", n), ("m", m)]));
            }
        }
    }
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (l, r, full) = a.twisted_power_compose(&f, c.get(0) as u64, c.get(1) as u64);
            Ok(same(&l, &full).or_else(|| same(&r, &full)))
        }),
    })
}

fn eigen_algebra(ctx: &QContext) -> Result<TwistedAlgebra> {
    let alg = TwistedAlgebra::new(ctx.ring(), &["x", "y"], &["x", "y"])?;
    alg.with_images(vec![alg.generator(0).scale(ctx.q()), alg.generator(1)])
}

fn twisted_binomial(ctx: &QContext, n_max: u64) -> Result<Plan<'_>> {
    let a = eigen_algebra(ctx)?;
    let cases = (0..=n_max as i64).map(|n| Case::new("", &[("n", n)])).collect();
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let r = a.twisted_binomial_check(&a.generator(0), &a.generator(1), ctx.q(), c.get(0) as u64)?;
            Ok(holds(r.equal, &r.lhs, &r.rhs))
        }),
    })
}

fn frobenius(ctx: &QContext, bound: u64) -> Result<Plan<'_>> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) => p,
        Err(why) => return Ok(Plan::Unmet(why)),
    };
    if let Err(why) = require_flat(ctx) {
        return Ok(Plan::Unmet(why));
    }
    let a = eigen_algebra(ctx)?;
    Ok(Plan::Run {
        cases: vec![Case::new("", &[("p", p as i64)])],
        check: Box::new(move |_| {
            let (x, y) = (a.generator(0), a.generator(1));
            let lhs = a.twisted_power(&x.add(&y), p);
            Ok(same(&lhs, &a.twisted_power(&x, p).add(&a.twisted_power(&y, p))))
        }),
    })
}

fn artin_schreier_plan(ctx: &QContext) -> Result<Plan<'_>> {
    let ring = ctx.ring();
    let p = ring.characteristic();
    if !is_prime(p) {
        return Ok(Plan::Unmet(format!("characteristic {p} is not prime")));
    }
    let hs: Vec<Elem> = match ring.elements() {
        Ok(it) => it.take(64).collect(),
        Err(_) => vec![ring.zero(), ring.one(), ctx.q().clone(), ctx.q() + &ring.one()],
    };
    let cases = (0..hs.len() as i64).map(|h| Case::new("", &[("h", h)])).collect();
    Ok(Plan::Run {
        cases,
        check: Box::new(move |c| {
            let (lhs, rhs) = artin_schreier(&hs[c.get(0) as usize])?;
            Ok(same(&lhs, &rhs))
        }),
    })
}

fn sign_rule(ctx: &QContext, bound: u64) -> Result<Plan<'_>> {
    let p = match finite_q_char(ctx, bound) {
        Ok(p) => p,
        Err(why) => return Ok(Plan::Unmet(why)),
    };
    if p % 2 == 0 {
        if let Err(why) = require_flat(ctx) {
            return Ok(Plan::Unmet(why));
        }
    }
    let a = TwistedAlgebra::affine(ctx.q(), &ctx.ring().zero())?;
    Ok(Plan::Run {
        cases: vec![Case::new("", &[("p", p as i64)])],
        check: Box::new(move |_| {
            let (tw, plain) = a.sign_check(p)?;
            let want = if p % 2 == 0 { plain.neg() } else { plain };
            Ok(same(&tw, &want))
        }),
    })
}

#[cfg(test)]
mod tests;
