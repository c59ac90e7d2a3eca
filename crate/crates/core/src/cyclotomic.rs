//! Cyclotomic polynomials over ℤ and the cyclotomic factorizations of
//! q-integers, q-factorials and q-binomials.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Elem;

/// A dense polynomial over ℤ, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    /// t^n − 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[0] = BigInt::from(-1);
        v[n] = BigInt::one();
        IntPoly(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }

    /// Exact quotient by a monic polynomial; `None` if the remainder is
    /// nonzero.
    pub fn div_exact_monic(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        debug_assert!(d.0[dd].is_one());
        if self.0.len() <= dd {
            return self.0.is_empty().then(|| IntPoly(Vec::new()));
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        r[..dd].iter().all(|c| c.is_zero()).then(|| IntPoly::new(q))
    }

    /// Evaluates at an element of any ring.
    pub fn eval(&self, x: &Elem) -> Elem {
        x.eval_int_poly(&self.0)
    }
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<IntPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The m-th cyclotomic polynomial χ_m, by exact division of t^m − 1 by the
/// χ_d with d a proper divisor of m. Cached.
pub fn cyclotomic_poly(m: u64) -> Arc<IntPoly> {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().read().unwrap().get(&m) {
        return p.clone();
    }
    let mut divisor = IntPoly::one();
    for d in divisors(m) {
        if d < m {
            divisor = divisor.mul(&cyclotomic_poly(d));
        }
    }
    let chi = IntPoly::x_pow_minus_one(m as usize)
        .div_exact_monic(&divisor)
        .expect("cyclotomic table is inconsistent: inexact division");
    let chi = Arc::new(chi);
    cache().write().unwrap().entry(m).or_insert(chi).clone()
}

/// Indices m with (n)_q = ∏ χ_m(q): the divisors of n other than 1.
pub fn factor_q_integer(n: u64) -> Vec<u64> {
    divisors(n).into_iter().filter(|&d| d != 1).collect()
}

/// Exponents of χ_m in (n)_q!: m ↦ ⌊n/m⌋ for 2 ≤ m ≤ n.
pub fn factor_q_factorial(n: u64) -> BTreeMap<u64, u64> {
    (2..=n).map(|m| (m, n / m)).collect()
}

/// Indices m with ⌊n/m⌋ > ⌊k/m⌋ + ⌊(n−k)/m⌋; each χ_m occurs once in the
/// q-binomial C(n,k)_q.
pub fn factor_q_binomial(n: u64, k: u64) -> Result<Vec<u64>> {
    if k > n {
        return Err(Error::Domain(format!("binomial factorization needs k <= n, got ({n}, {k})")));
    }
    Ok((2..=n).filter(|m| n / m > k / m + (n - k) / m).collect())
}

/// ∏ χ_m(q)^e over an exponent map.
pub fn eval_factorization(exponents: &BTreeMap<u64, u64>, q: &Elem) -> Elem {
    exponents
        .iter()
        .fold(q.ring().one(), |acc, (&m, &e)| &acc * &cyclotomic_poly(m).eval(q).pow(e))
}

/// ∏ χ_m(q) over an index set.
pub fn eval_product(indices: &[u64], q: &Elem) -> Elem {
    indices
        .iter()
        .fold(q.ring().one(), |acc, &m| &acc * &cyclotomic_poly(m).eval(q))
}
