//! Dense univariate polynomials over ℚ, and the normal form of fractions of
//! them used by the rational function fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly(vec![c]).trimmed()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn monomial(c: BigRational, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = c;
        QPoly(v).trimmed()
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.0.get(i), other.0.get(i)) {
                (Some(a), Some(b)) if a.denom().is_one() && b.denom().is_one() => {
                    BigRational::from_integer(a.numer() + b.numer())
                }
                (Some(a), Some(b)) => a + b,
                (Some(c), None) | (None, Some(c)) => c.clone(),
                (None, None) => unreachable!(),
            });
        }
        QPoly(v).trimmed()
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        if self.is_integral() && other.is_integral() {
            return self.mul_integral(other);
        }
        let mut v = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        let rhs: Vec<(usize, &BigRational)> = other.0.iter().enumerate().filter(|(_, b)| !b.is_zero()).collect();
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in &rhs {
                v[i + j] += a * *b;
            }
        }
        QPoly(v).trimmed()
    }

    fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.denom().is_one())
    }

    // integer convolution skips the rational normalizations
    fn mul_integral(&self, other: &QPoly) -> QPoly {
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        let rhs: Vec<(usize, &BigInt)> =
            other.0.iter().enumerate().filter(|(_, b)| !b.is_zero()).map(|(j, b)| (j, b.numer())).collect();
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = a.numer();
            for (j, b) in &rhs {
                v[i + j] += a * *b;
            }
        }
        QPoly(v.into_iter().map(BigRational::from_integer).collect()).trimmed()
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().unwrap().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly(q).trimmed(), QPoly(r).trimmed())
    }

    pub fn monic(&self) -> QPoly {
        match self.lc() {
            Some(lc) => self.scale(&lc.recip()),
            None => QPoly::zero(),
        }
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// k when the polynomial is c·t^k.
    pub fn monomial_degree(&self) -> Option<usize> {
        let k = self.low_degree()?;
        (k + 1 == self.0.len()).then_some(k)
    }

    fn shift_down(&self, k: usize) -> QPoly {
        QPoly(self.0[k..].to_vec())
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut content = self
            .0
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&(c.numer() * (&l / c.denom()))));
        if self.lc().unwrap().is_negative() {
            content = -content;
        }
        self.scale(&BigRational::new(l, content))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (la, lb) = match (self.low_degree(), other.low_degree()) {
            (None, _) => return other.monic(),
            (_, None) => return self.monic(),
            (Some(x), Some(y)) => (x, y),
        };
        // split off the power of t, then run Euclid on primitive parts
        let j = la.min(lb);
        let (mut a, mut b) = (self.shift_down(la).primitive(), other.shift_down(lb).primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let g = if b.degree() == Some(0) || coprime_mod_p(&a, &b) {
            QPoly::one()
        } else {
            euclid(a, b)
        };
        let mut v = vec![BigRational::zero(); j];
        v.extend(g.0);
        QPoly(v)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Primitive remainder sequence on integer coefficients; `a` and `b` are
/// primitive with deg a ≥ deg b.
fn euclid(a: QPoly, b: QPoly) -> QPoly {
    let ints = |p: &QPoly| p.0.iter().map(|c| c.numer().clone()).collect::<Vec<BigInt>>();
    let (mut a, mut b) = (ints(&a), ints(&b));
    while b.len() > 1 {
        let r = primitive_int(pseudo_rem(a, &b));
        a = b;
        b = r;
    }
    if b.is_empty() {
        QPoly(a.into_iter().map(BigRational::from_integer).collect()).monic()
    } else {
        QPoly::one()
    }
}

/// lc(b)^(deg a − deg b + 1)·a mod b, without fractions.
fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let lc = b.last().unwrap();
    while a.len() >= b.len() {
        let c = a.last().unwrap().clone();
        let off = a.len() - b.len();
        for x in a.iter_mut() {
            *x *= lc;
        }
        for (i, bc) in b.iter().enumerate() {
            a[off + i] -= &c * bc;
        }
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
    }
    a
}

fn primitive_int(mut a: Vec<BigInt>) -> Vec<BigInt> {
    let g = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for x in a.iter_mut() {
            *x /= &g;
        }
    }
    a
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn invmod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        e >>= 1;
    }
    acc
}

fn reduce_mod_p(a: &QPoly) -> Vec<u64> {
    let p = BigInt::from(PRIME);
    let mut v: Vec<u64> =
        a.0.iter().map(|c| c.numer().mod_floor(&p).iter_u64_digits().next().unwrap_or(0)).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Sufficient test for coprimality of integer polynomials: when the prime
/// does not divide the leading coefficient of `a`, any common factor over ℚ
/// survives reduction with its degree intact.
fn coprime_mod_p(a: &QPoly, b: &QPoly) -> bool {
    let mut x = reduce_mod_p(a);
    let mut y = reduce_mod_p(b);
    if x.len() != a.0.len() {
        return false;
    }
    while y.len() > 1 {
        let inv = invmod(*y.last().unwrap());
        while x.len() >= y.len() {
            let c = mulmod(*x.last().unwrap(), inv);
            let off = x.len() - y.len();
            for (i, yc) in y.iter().enumerate() {
                x[off + i] = (x[off + i] + PRIME - mulmod(c, *yc)) % PRIME;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    y.len() == 1
}

/// Brings `num/den` to the canonical form: coprime over ℚ, both sides with
/// integer coefficients of joint content 1, denominator with positive
/// leading coefficient.
pub fn normalize_fraction(num: QPoly, den: QPoly) -> (QPoly, QPoly) {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return (QPoly::zero(), QPoly::one());
    }
    let (num, den) = if let Some(k) = den.monomial_degree() {
        // gcd with c·t^k is a power of t
        let j = num.low_degree().unwrap().min(k);
        (num.shift_down(j), den.shift_down(j))
    } else {
        cancel(num, den)
    };
    fix_content(num, den)
}

/// Sum of two normalized fractions, reusing their coprimality.
pub fn fraction_add(n1: &QPoly, d1: &QPoly, n2: &QPoly, d2: &QPoly) -> (QPoly, QPoly) {
    if n1.is_zero() {
        return (n2.clone(), d2.clone());
    }
    if n2.is_zero() {
        return (n1.clone(), d1.clone());
    }
    if d1 == d2 {
        return normalize_fraction(n1.add(n2), d1.clone());
    }
    if d1.monomial_degree().is_some() || d2.monomial_degree().is_some() {
        return normalize_fraction(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2));
    }
    let g = d1.gcd(d2);
    if g.degree() == Some(0) {
        // coprime denominators leave nothing to cancel
        let num = n1.mul(d2).add(&n2.mul(d1));
        if num.is_zero() {
            return (QPoly::zero(), QPoly::one());
        }
        return fix_content(num, d1.mul(d2));
    }
    let (e1, e2) = (d1.divrem(&g).0, d2.divrem(&g).0);
    let num = n1.mul(&e2).add(&n2.mul(&e1));
    if num.is_zero() {
        return (QPoly::zero(), QPoly::one());
    }
    // only factors of g can still be shared
    let h = num.gcd(&g);
    let den = d1.mul(&e2);
    if h.degree() == Some(0) {
        fix_content(num, den)
    } else {
        fix_content(num.divrem(&h).0, den.divrem(&h).0)
    }
}

/// Product of two normalized fractions by cross cancellation.
pub fn fraction_mul(n1: &QPoly, d1: &QPoly, n2: &QPoly, d2: &QPoly) -> (QPoly, QPoly) {
    if n1.is_zero() || n2.is_zero() {
        return (QPoly::zero(), QPoly::one());
    }
    let (a, b) = cancel(n1.clone(), d2.clone());
    let (c, d) = cancel(n2.clone(), d1.clone());
    fix_content(a.mul(&c), d.mul(&b))
}

fn cancel(num: QPoly, den: QPoly) -> (QPoly, QPoly) {
    if num.degree() == Some(0) || den.degree() == Some(0) {
        return (num, den);
    }
    let g = num.gcd(&den);
    if g.degree() == Some(0) {
        (num, den)
    } else {
        (num.divrem(&g).0, den.divrem(&g).0)
    }
}

fn fix_content(num: QPoly, den: QPoly) -> (QPoly, QPoly) {
    let l = num.0.iter().chain(&den.0).fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut content = num
        .0
        .iter()
        .chain(&den.0)
        .fold(BigInt::zero(), |g, c| g.gcd(&(c.numer() * (&l / c.denom()))));
    if den.lc().unwrap().is_negative() {
        content = -content;
    }
    if l.is_one() && content.is_one() {
        return (num, den);
    }
    let factor = BigRational::new(l, content);
    (num.scale(&factor), den.scale(&factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        QPoly(v.iter().map(|&c| BigRational::from_integer(c.into())).collect()).trimmed()
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (1+t)(2-t) and (1+t)t
        let a = q(&[1, 1]).mul(&q(&[2, -1]));
        let b = q(&[1, 1]).mul(&q(&[0, 1]));
        assert_eq!(a.gcd(&b), q(&[1, 1]));
    }

    #[test]
    fn fraction_normal_form() {
        // (2+2t) / (-4t-4t^2) = -1 / (2t)
        let (n, d) = normalize_fraction(q(&[2, 2]), q(&[0, -4, -4]));
        assert_eq!(n, q(&[-1]));
        assert_eq!(d, q(&[0, 2]));
        // (1/2) / 3 = 1/6
        let half = QPoly::constant(BigRational::new(1.into(), 2.into()));
        let (n, d) = normalize_fraction(half, q(&[3]));
        assert_eq!((n, d), (q(&[1]), q(&[6])));
        // (1/2 + t/3) / 1 = (3 + 2t)/6
        let (n, d) = normalize_fraction(
            QPoly(vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())]),
            QPoly::one(),
        );
        assert_eq!((n, d), (q(&[3, 2]), q(&[6])));
    }

    #[test]
    fn divrem_reconstructs() {
        let a = q(&[5, -3, 0, 2, 7]);
        let d = q(&[1, 0, 3]);
        let (qq, r) = a.divrem(&d);
        assert_eq!(qq.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
