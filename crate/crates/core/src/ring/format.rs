//! Text forms of rings and elements. Every printed form re-parses to the
//! same normal form.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Kind, QPoly, Repr, Ring};

pub(super) fn ring_spec(r: &Ring) -> String {
    match r.kind() {
        Kind::Integers => "Z".into(),
        Kind::Rationals => "Q".into(),
        Kind::Modular(n) => format!("Z/{n}"),
        Kind::Gaussian => "Z[i]".into(),
        Kind::Polynomial { base, var } => format!("{}[{var}]", ring_spec(base)),
        Kind::Laurent { base, var } => format!("{}[{var},1/{var}]", ring_spec(base)),
        Kind::RationalFunctions { var } => format!("Q({var})"),
        Kind::Quotient { base, var, modulus, cyclotomic } => match cyclotomic {
            Some(p) if var == "t" => format!("Cyclo({p})"),
            _ => {
                let m = poly_terms(base, modulus, &|k| monomial(var, k as i64, 1));
                format!("{}[{var}]/({})", ring_spec(base), compact(&m))
            }
        },
        Kind::Puiseux { base, var, denom } => format!("{}[{var}^(1/{denom})]", ring_spec(base)),
        Kind::PuiseuxFractions { var, denom } => format!("Q({var}^(1/{denom}))"),
    }
}

/// Strips spaces and explicit multiplication signs: "1 + 2*t^2" → "1+2t^2".
pub fn compact(s: &str) -> String {
    s.chars().filter(|c| *c != ' ' && *c != '*').collect()
}

/// var^(num/den) with the fraction reduced; `None` for the constant monomial.
fn monomial(var: &str, num: i64, den: u64) -> Option<String> {
    let g = (num.unsigned_abs()).gcd(&den).max(1);
    let (n, d) = (num / g as i64, den / g);
    Some(match (n, d) {
        (0, _) => return None,
        (1, 1) => var.to_string(),
        (n, 1) => format!("{var}^{n}"),
        (n, d) => format!("{var}^({n}/{d})"),
    })
}

/// Whether a coefficient needs parentheses when multiplied by a monomial.
fn compound(s: &str) -> bool {
    s[1..].contains(['+', '-']) || s.contains(' ')
}

/// Joins terms c_k·m_k in ascending order, skipping zero coefficients.
fn join_terms(terms: Vec<(String, Option<String>)>) -> String {
    let mut out = String::new();
    for (c, m) in terms {
        let (neg, body) = match (c.strip_prefix('-'), &m) {
            (Some(rest), _) if !compound(&c) => (true, rest.to_string()),
            _ => (false, c.clone()),
        };
        let term = match m {
            None => body,
            Some(m) if body == "1" => m,
            Some(m) if compound(&body) => format!("({body})*{m}"),
            Some(m) => format!("{body}*{m}"),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn poly_terms(base: &Ring, v: &[Repr], mono: &dyn Fn(usize) -> Option<String>) -> String {
    join_terms(
        v.iter()
            .enumerate()
            .filter(|(_, c)| !base.is_zero_r(c))
            .map(|(k, c)| (elem(base, c), mono(k)))
            .collect(),
    )
}

fn rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn qpoly(p: &QPoly, mono: &dyn Fn(usize) -> Option<String>) -> String {
    join_terms(
        p.0.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (rat(c), mono(k)))
            .collect(),
    )
}

fn fraction(num: &QPoly, den: &QPoly, mono: &dyn Fn(usize) -> Option<String>) -> String {
    if den.is_one() {
        return qpoly(num, mono);
    }
    let first_negative = num.0.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    let (sign, num) = if first_negative { ("-", num.neg()) } else { ("", num.clone()) };
    let n = qpoly(&num, mono);
    let n = if n.contains(['+', '-', '/']) { format!("({n})") } else { n };
    let d = qpoly(den, mono);
    let d = if d.contains(['+', '-', '/', '*']) { format!("({d})") } else { d };
    compact(&format!("{sign}{n}/{d}"))
}

pub(super) fn elem(r: &Ring, a: &Repr) -> String {
    match (r.kind(), a) {
        (_, Repr::Int(z)) => z.to_string(),
        (_, Repr::Mod(x)) => x.to_string(),
        (_, Repr::Rat(q)) => rat(q),
        (_, Repr::Gauss(x, y)) => {
            let mut terms = Vec::new();
            if !x.is_zero() {
                terms.push((x.to_string(), None));
            }
            if !y.is_zero() {
                terms.push((y.to_string(), Some("i".to_string())));
            }
            join_terms(terms)
        }
        (Kind::Polynomial { base, var } | Kind::Quotient { base, var, .. }, Repr::Poly(v)) => {
            poly_terms(base, v, &|k| monomial(var, k as i64, 1))
        }
        (Kind::Puiseux { base, var, denom }, Repr::Poly(v)) => {
            poly_terms(base, v, &|k| monomial(var, k as i64, *denom))
        }
        (Kind::Laurent { base, var }, Repr::Laurent(shift, v)) => join_terms(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !base.is_zero_r(c))
                .map(|(k, c)| (elem(base, c), monomial(var, shift + k as i64, 1)))
                .collect(),
        ),
        (Kind::RationalFunctions { var }, Repr::Frac(n, d)) => {
            fraction(n, d, &|k| monomial(var, k as i64, 1))
        }
        (Kind::PuiseuxFractions { var, denom }, Repr::Frac(n, d)) => {
            fraction(n, d, &|k| monomial(var, k as i64, *denom))
        }
        _ => unreachable!("payload does not match ring"),
    }
}
