//! Runtime commutative rings with canonical normal forms.
//!
//! A [`Ring`] is a cheap, shareable descriptor; an [`Elem`] pairs a ring with
//! a payload that is always kept in normal form, so structural equality of
//! payloads is ring equality. All arithmetic is dispatched on the ring kind.

mod format;
pub(crate) mod linalg;
pub(crate) mod qpoly;
pub(crate) mod upoly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
pub use qpoly::QPoly;

/// Normal-form payloads. Which variant is used is fixed by the ring kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Int(BigInt),
    Mod(u64),
    Rat(BigRational),
    Gauss(BigInt, BigInt),
    /// Coefficients in ascending degree: polynomial rings, quotient
    /// residues, Puiseux polynomials in s = t^(1/L).
    Poly(Vec<Repr>),
    /// t^shift · (c0 + c1 t + ...), c0 and the last coefficient nonzero.
    Laurent(i64, Vec<Repr>),
    Frac(QPoly, QPoly),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub(crate) enum Kind {
    Integers,
    Rationals,
    Modular(u64),
    Gaussian,
    Polynomial { base: Ring, var: String },
    Laurent { base: Ring, var: String },
    RationalFunctions { var: String },
    Quotient { base: Ring, var: String, modulus: Vec<Repr>, cyclotomic: Option<u64> },
    Puiseux { base: Ring, var: String, denom: u64 },
    PuiseuxFractions { var: String, denom: u64 },
}

/// Multiplicative order of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
    Unknown,
}

/// Descriptor of a commutative ring with decidable equality.
#[derive(Clone)]
pub struct Ring(Arc<Kind>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

impl Hash for Ring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::ring_spec(self))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

fn totient(n: u64) -> u64 {
    let (mut m, mut phi, mut p) = (n, n, 2u64);
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Ring {
    fn new(kind: Kind) -> Ring {
        Ring(Arc::new(kind))
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0
    }

    pub fn integers() -> Ring {
        Ring::new(Kind::Integers)
    }

    pub fn rationals() -> Ring {
        Ring::new(Kind::Rationals)
    }

    /// ℤ/nℤ with n ≥ 2.
    pub fn modular(n: u64) -> Result<Ring> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("Z/{n} needs n >= 2")));
        }
        Ok(Ring::new(Kind::Modular(n)))
    }

    /// The Gaussian integers ℤ[i].
    pub fn gaussian() -> Ring {
        Ring::new(Kind::Gaussian)
    }

    pub fn polynomial(base: &Ring, var: &str) -> Ring {
        Ring::new(Kind::Polynomial { base: base.clone(), var: var.to_string() })
    }

    /// Laurent polynomials; the base must be an integral domain so that
    /// units are exactly the unit monomials.
    pub fn laurent(base: &Ring, var: &str) -> Result<Ring> {
        if !base.is_domain() {
            return Err(Error::Unsupported(format!(
                "Laurent polynomials over {base}: base is not a domain"
            )));
        }
        Ok(Ring::new(Kind::Laurent { base: base.clone(), var: var.to_string() }))
    }

    /// ℚ(var).
    pub fn rational_functions(var: &str) -> Ring {
        Ring::new(Kind::RationalFunctions { var: var.to_string() })
    }

    /// ℤ[t]/χ_p.
    pub fn cyclotomic(p: u64) -> Result<Ring> {
        if p < 2 {
            return Err(Error::InvalidRing(format!("Cyclo({p}) needs p >= 2")));
        }
        let modulus = crate::cyclotomic::cyclotomic_poly(p)
            .coeffs()
            .iter()
            .map(|c| Repr::Int(c.clone()))
            .collect();
        Ok(Ring::new(Kind::Quotient {
            base: Ring::integers(),
            var: "t".into(),
            modulus,
            cyclotomic: Some(p),
        }))
    }

    /// base[var]/(modulus) with base ∈ {ℤ, ℚ, ℤ/n}; the modulus is given by
    /// ascending coefficients and must be nonconstant with unit leading
    /// coefficient.
    pub fn quotient(base: &Ring, var: &str, modulus: &[Elem]) -> Result<Ring> {
        if !matches!(base.kind(), Kind::Integers | Kind::Rationals | Kind::Modular(_)) {
            return Err(Error::Unsupported(format!("quotient rings over {base}")));
        }
        for c in modulus {
            if c.ring != *base {
                return Err(Error::RingMismatch(c.ring.to_string(), base.to_string()));
            }
        }
        let m = upoly::trim(base, modulus.iter().map(|c| c.repr.clone()).collect());
        if m.len() < 2 {
            return Err(Error::InvalidRing("quotient modulus must be nonconstant".into()));
        }
        if base.inv_r(m.last().unwrap()).is_none() {
            return Err(Error::InvalidRing(
                "quotient modulus needs a unit leading coefficient".into(),
            ));
        }
        // make monic so that equal ideals print identically
        let inv = base.inv_r(m.last().unwrap()).unwrap();
        let modulus = upoly::scale(base, &inv, &m);
        let cyclotomic = if let Kind::Integers = base.kind() {
            // ℤ[t]/χ_p is recognised so that it is flagged as a domain
            let ints: Vec<BigInt> = modulus
                .iter()
                .map(|r| match r {
                    Repr::Int(z) => z.clone(),
                    _ => unreachable!(),
                })
                .collect();
            let deg = (ints.len() - 1) as u64;
            (2..=(2 * deg * deg + 2)).find(|&p| {
                totient(p) == deg && crate::cyclotomic::cyclotomic_poly(p).coeffs() == ints.as_slice()
            })
        } else {
            None
        };
        Ok(Ring::new(Kind::Quotient {
            base: base.clone(),
            var: var.to_string(),
            modulus,
            cyclotomic,
        }))
    }

    /// K[t^(1/L)]: polynomials in s = t^(1/L).
    pub fn puiseux(base: &Ring, var: &str, denom: u64) -> Result<Ring> {
        if denom == 0 {
            return Err(Error::InvalidRing("Puiseux denominator must be positive".into()));
        }
        Ok(Ring::new(Kind::Puiseux { base: base.clone(), var: var.to_string(), denom }))
    }

    /// ℚ(t^(1/L)): rational functions in s = t^(1/L).
    pub fn puiseux_fractions(var: &str, denom: u64) -> Result<Ring> {
        if denom == 0 {
            return Err(Error::InvalidRing("Puiseux denominator must be positive".into()));
        }
        Ok(Ring::new(Kind::PuiseuxFractions { var: var.to_string(), denom }))
    }

    // ---- descriptor queries ----

    pub fn is_commutative(&self) -> bool {
        true
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    pub fn cardinality(&self) -> Option<u128> {
        match self.kind() {
            Kind::Modular(n) => Some(*n as u128),
            Kind::Quotient { base, modulus, .. } => {
                let n = base.cardinality()?;
                n.checked_pow((modulus.len() - 1) as u32)
            }
            _ => None,
        }
    }

    /// Additive order of 1, with 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            Kind::Modular(n) => *n,
            Kind::Polynomial { base, .. }
            | Kind::Laurent { base, .. }
            | Kind::Puiseux { base, .. }
            | Kind::Quotient { base, .. } => base.characteristic(),
            _ => 0,
        }
    }

    /// Flagged integral domain. `false` means "not flagged", which for some
    /// quotient rings is conservative.
    pub fn is_domain(&self) -> bool {
        match self.kind() {
            Kind::Integers
            | Kind::Rationals
            | Kind::Gaussian
            | Kind::RationalFunctions { .. }
            | Kind::PuiseuxFractions { .. } => true,
            Kind::Modular(n) => is_prime(*n),
            Kind::Polynomial { base, .. } | Kind::Laurent { base, .. } | Kind::Puiseux { base, .. } => {
                base.is_domain()
            }
            Kind::Quotient { cyclotomic, .. } => cyclotomic.is_some(),
        }
    }

    pub fn is_field(&self) -> bool {
        match self.kind() {
            Kind::Rationals | Kind::RationalFunctions { .. } | Kind::PuiseuxFractions { .. } => true,
            Kind::Modular(n) => is_prime(*n),
            _ => false,
        }
    }

    pub fn is_polynomial_ring(&self) -> bool {
        matches!(self.kind(), Kind::Polynomial { .. })
    }

    /// The coefficient ring of polynomial-like kinds.
    pub fn base(&self) -> Option<&Ring> {
        match self.kind() {
            Kind::Polynomial { base, .. }
            | Kind::Laurent { base, .. }
            | Kind::Puiseux { base, .. }
            | Kind::Quotient { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Name of the adjoined variable, if any.
    pub fn var(&self) -> Option<&str> {
        match self.kind() {
            Kind::Gaussian => Some("i"),
            Kind::Polynomial { var, .. }
            | Kind::Laurent { var, .. }
            | Kind::RationalFunctions { var }
            | Kind::Quotient { var, .. }
            | Kind::Puiseux { var, .. }
            | Kind::PuiseuxFractions { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Exponent denominator L of Puiseux kinds.
    pub fn puiseux_denominator(&self) -> Option<u64> {
        match self.kind() {
            Kind::Puiseux { denom, .. } | Kind::PuiseuxFractions { denom, .. } => Some(*denom),
            _ => None,
        }
    }

    /// p for ℤ[t]/χ_p.
    pub fn cyclotomic_index(&self) -> Option<u64> {
        match self.kind() {
            Kind::Quotient { cyclotomic, .. } => *cyclotomic,
            _ => None,
        }
    }

    // ---- element constructors ----

    fn wrap(&self, repr: Repr) -> Elem {
        Elem { ring: self.clone(), repr }
    }

    pub fn zero(&self) -> Elem {
        self.wrap(self.zero_r())
    }

    pub fn one(&self) -> Elem {
        self.wrap(self.one_r())
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.wrap(self.big_to_r(&BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        self.wrap(self.big_to_r(n))
    }

    /// The image of a rational number, when its denominator is invertible.
    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        let inv = den
            .try_invert()
            .ok_or_else(|| Error::NotInvertible(format!("{} in {self}", r.denom())))?;
        Ok(&num * &inv)
    }

    /// The distinguished generator: `i`, the variable, its class in a
    /// quotient, or t = s^L in a Puiseux ring.
    pub fn generator(&self) -> Result<Elem> {
        let repr = match self.kind() {
            Kind::Gaussian => Repr::Gauss(BigInt::zero(), BigInt::one()),
            Kind::Polynomial { base, .. } => Repr::Poly(vec![base.zero_r(), base.one_r()]),
            Kind::Laurent { base, .. } => Repr::Laurent(1, vec![base.one_r()]),
            Kind::RationalFunctions { .. } => {
                Repr::Frac(QPoly::monomial(BigRational::one(), 1), QPoly::one())
            }
            Kind::Quotient { base, modulus, .. } => {
                Repr::Poly(upoly::rem(base, &[base.zero_r(), base.one_r()], modulus))
            }
            Kind::Puiseux { .. } | Kind::PuiseuxFractions { .. } => {
                return self.puiseux_monomial(1, 1);
            }
            _ => return Err(Error::Unsupported(format!("{self} has no generator"))),
        };
        Ok(self.wrap(repr))
    }

    /// t^(num/den) in a Puiseux ring; negative exponents only in the
    /// fraction field.
    pub fn puiseux_monomial(&self, num: i64, den: u64) -> Result<Elem> {
        let l = self
            .puiseux_denominator()
            .ok_or_else(|| Error::Unsupported(format!("{self} is not a Puiseux ring")))?;
        let scaled = num as i128 * l as i128;
        if den == 0 || scaled % den as i128 != 0 {
            return Err(Error::Domain(format!("exponent {num}/{den} not in (1/{l})Z")));
        }
        let e = scaled / den as i128;
        let k = e.unsigned_abs() as usize;
        match self.kind() {
            Kind::Puiseux { base, .. } => {
                if e < 0 {
                    return Err(Error::NotInvertible(format!("t in {self}")));
                }
                let mut v = vec![base.zero_r(); k + 1];
                v[k] = base.one_r();
                Ok(self.wrap(Repr::Poly(v)))
            }
            Kind::PuiseuxFractions { .. } => {
                let mono = QPoly::monomial(BigRational::one(), k);
                let repr = if e >= 0 {
                    Repr::Frac(mono, QPoly::one())
                } else {
                    Repr::Frac(QPoly::one(), mono)
                };
                Ok(self.wrap(repr))
            }
            _ => unreachable!(),
        }
    }

    /// Maps an element of this ring or of one of its coefficient rings to a
    /// constant of this ring.
    pub fn lift(&self, c: &Elem) -> Result<Elem> {
        if c.ring == *self {
            return Ok(c.clone());
        }
        let base = self
            .base()
            .ok_or_else(|| Error::RingMismatch(c.ring.to_string(), self.to_string()))?;
        let c = base.lift(c)?;
        let repr = match self.kind() {
            Kind::Laurent { .. } => self.laurent_normalize(0, vec![c.repr]),
            _ => Repr::Poly(upoly::trim(base, vec![c.repr])),
        };
        Ok(self.wrap(repr))
    }

    /// Builds c0 + c1·v + ... in a polynomial, quotient or Puiseux ring (for
    /// Puiseux kinds v is s = t^(1/L)).
    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Result<Elem> {
        let base = match self.kind() {
            Kind::Polynomial { base, .. } | Kind::Quotient { base, .. } | Kind::Puiseux { base, .. } => {
                base
            }
            _ => return Err(Error::Unsupported(format!("{self} is not a polynomial ring"))),
        };
        for c in coeffs {
            if c.ring != *base {
                return Err(Error::RingMismatch(c.ring.to_string(), base.to_string()));
            }
        }
        let v = upoly::trim(base, coeffs.iter().map(|c| c.repr.clone()).collect());
        let repr = match self.kind() {
            Kind::Quotient { modulus, .. } => upoly::rem(base, &v, modulus),
            _ => v,
        };
        Ok(self.wrap(Repr::Poly(repr)))
    }

    /// Gaussian integer a + b·i.
    pub fn gaussian_elem(&self, a: i64, b: i64) -> Result<Elem> {
        match self.kind() {
            Kind::Gaussian => Ok(self.wrap(Repr::Gauss(a.into(), b.into()))),
            _ => Err(Error::Unsupported(format!("{self} is not Z[i]"))),
        }
    }

    /// A fraction of ℚ-polynomials in a rational function field (in s for
    /// the Puiseux field).
    pub fn fraction(&self, num: &QPoly, den: &QPoly) -> Result<Elem> {
        match self.kind() {
            Kind::RationalFunctions { .. } | Kind::PuiseuxFractions { .. } => {
                if den.is_zero() {
                    return Err(Error::NotInvertible("0".into()));
                }
                let (n, d) = qpoly::normalize_fraction(num.clone(), den.clone());
                Ok(self.wrap(Repr::Frac(n, d)))
            }
            _ => Err(Error::Unsupported(format!("{self} is not a fraction field"))),
        }
    }

    /// Every element exactly once, starting with 0 and 1.
    pub fn elements(&self) -> Result<impl Iterator<Item = Elem> + Send + '_> {
        let card = self
            .cardinality()
            .ok_or_else(|| Error::Unsupported(format!("enumeration of infinite ring {self}")))?;
        Ok((0..card).map(move |i| self.wrap(self.nth_element_r(i))))
    }

    fn nth_element_r(&self, mut idx: u128) -> Repr {
        match self.kind() {
            Kind::Modular(_) => Repr::Mod(idx as u64),
            Kind::Quotient { base, modulus, .. } => {
                let n = base.cardinality().unwrap();
                let mut v = Vec::with_capacity(modulus.len() - 1);
                for _ in 0..modulus.len() - 1 {
                    v.push(base.nth_element_r(idx % n));
                    idx /= n;
                }
                Repr::Poly(upoly::trim(base, v))
            }
            _ => unreachable!("nth_element on infinite ring"),
        }
    }

    /// A random element with small coefficients, for sampling and
    /// round-trip tests.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let repr = self.random_r(rng);
        self.wrap(repr)
    }

    fn random_r<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Repr {
        let small = |rng: &mut R| BigInt::from(rng.gen_range(-9i64..=9));
        match self.kind() {
            Kind::Integers => Repr::Int(BigInt::from(rng.gen_range(-1000i64..=1000))),
            Kind::Rationals => {
                let d = rng.gen_range(1i64..=12);
                Repr::Rat(BigRational::new(small(rng), d.into()))
            }
            Kind::Modular(n) => Repr::Mod(rng.gen_range(0..*n)),
            Kind::Gaussian => Repr::Gauss(small(rng), small(rng)),
            Kind::Polynomial { base, .. } | Kind::Puiseux { base, .. } => {
                let len = rng.gen_range(0..=5);
                let v = (0..len).map(|_| base.random_r(rng)).collect();
                Repr::Poly(upoly::trim(base, v))
            }
            Kind::Quotient { base, modulus, .. } => {
                let v = (0..modulus.len() - 1).map(|_| base.random_r(rng)).collect();
                Repr::Poly(upoly::trim(base, v))
            }
            Kind::Laurent { base, .. } => {
                let len = rng.gen_range(0..=4);
                let v = (0..len).map(|_| base.random_r(rng)).collect();
                self.laurent_normalize(rng.gen_range(-3..=3), v)
            }
            Kind::RationalFunctions { .. } | Kind::PuiseuxFractions { .. } => {
                let rq = |rng: &mut R, len: usize| {
                    QPoly(
                        (0..len)
                            .map(|_| BigRational::new(small(rng), rng.gen_range(1i64..=4).into()))
                            .collect(),
                    )
                    .trimmed()
                };
                let num_len = rng.gen_range(0..=3);
                let num = rq(rng, num_len);
                let mut den = QPoly::zero();
                while den.is_zero() {
                    let len = rng.gen_range(1..=3);
                    den = rq(rng, len);
                }
                let (n, d) = qpoly::normalize_fraction(num, den);
                Repr::Frac(n, d)
            }
        }
    }

    // ---- payload arithmetic ----

    pub(crate) fn zero_r(&self) -> Repr {
        match self.kind() {
            Kind::Integers => Repr::Int(BigInt::zero()),
            Kind::Rationals => Repr::Rat(BigRational::zero()),
            Kind::Modular(_) => Repr::Mod(0),
            Kind::Gaussian => Repr::Gauss(BigInt::zero(), BigInt::zero()),
            Kind::Polynomial { .. } | Kind::Quotient { .. } | Kind::Puiseux { .. } => Repr::Poly(vec![]),
            Kind::Laurent { .. } => Repr::Laurent(0, vec![]),
            Kind::RationalFunctions { .. } | Kind::PuiseuxFractions { .. } => {
                Repr::Frac(QPoly::zero(), QPoly::one())
            }
        }
    }

    pub(crate) fn one_r(&self) -> Repr {
        self.big_to_r(&BigInt::one())
    }

    pub(crate) fn big_to_r(&self, n: &BigInt) -> Repr {
        match self.kind() {
            Kind::Integers => Repr::Int(n.clone()),
            Kind::Rationals => Repr::Rat(BigRational::from_integer(n.clone())),
            Kind::Modular(m) => Repr::Mod(n.mod_floor(&BigInt::from(*m)).to_u64().unwrap()),
            Kind::Gaussian => Repr::Gauss(n.clone(), BigInt::zero()),
            Kind::Polynomial { base, .. } | Kind::Quotient { base, .. } | Kind::Puiseux { base, .. } => {
                Repr::Poly(upoly::trim(base, vec![base.big_to_r(n)]))
            }
            Kind::Laurent { base, .. } => self.laurent_normalize(0, vec![base.big_to_r(n)]),
            Kind::RationalFunctions { .. } | Kind::PuiseuxFractions { .. } => {
                Repr::Frac(QPoly::constant(BigRational::from_integer(n.clone())), QPoly::one())
            }
        }
    }

    pub(crate) fn is_zero_r(&self, a: &Repr) -> bool {
        match a {
            Repr::Int(z) => z.is_zero(),
            Repr::Mod(r) => *r == 0,
            Repr::Rat(q) => q.is_zero(),
            Repr::Gauss(x, y) => x.is_zero() && y.is_zero(),
            Repr::Poly(v) | Repr::Laurent(_, v) => v.is_empty(),
            Repr::Frac(n, _) => n.is_zero(),
        }
    }

    fn laurent_normalize(&self, mut shift: i64, mut v: Vec<Repr>) -> Repr {
        let Kind::Laurent { base, .. } = self.kind() else { unreachable!() };
        v = upoly::trim(base, v);
        let lead = v.iter().take_while(|c| base.is_zero_r(c)).count();
        if lead == v.len() {
            return Repr::Laurent(0, vec![]);
        }
        v.drain(..lead);
        shift += lead as i64;
        Repr::Laurent(shift, v)
    }

    pub(crate) fn add_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (self.kind(), a, b) {
            (_, Repr::Int(x), Repr::Int(y)) => Repr::Int(x + y),
            (Kind::Modular(n), Repr::Mod(x), Repr::Mod(y)) => {
                Repr::Mod(((*x as u128 + *y as u128) % *n as u128) as u64)
            }
            (_, Repr::Rat(x), Repr::Rat(y)) => Repr::Rat(x + y),
            (_, Repr::Gauss(a1, b1), Repr::Gauss(a2, b2)) => Repr::Gauss(a1 + a2, b1 + b2),
            (
                Kind::Polynomial { base, .. } | Kind::Quotient { base, .. } | Kind::Puiseux { base, .. },
                Repr::Poly(x),
                Repr::Poly(y),
            ) => Repr::Poly(upoly::add(base, x, y)),
            (Kind::Laurent { base, .. }, Repr::Laurent(s1, x), Repr::Laurent(s2, y)) => {
                if x.is_empty() {
                    return b.clone();
                }
                if y.is_empty() {
                    return a.clone();
                }
                let s = (*s1).min(*s2);
                let pad = |sh: i64, v: &[Repr]| {
                    let mut w = vec![base.zero_r(); (sh - s) as usize];
                    w.extend_from_slice(v);
                    w
                };
                let sum = upoly::add(base, &pad(*s1, x), &pad(*s2, y));
                self.laurent_normalize(s, sum)
            }
            (_, Repr::Frac(n1, d1), Repr::Frac(n2, d2)) => {
                let (n, d) = qpoly::fraction_add(n1, d1, n2, d2);
                Repr::Frac(n, d)
            }
            _ => unreachable!("payload does not match ring {self}"),
        }
    }

    pub(crate) fn neg_r(&self, a: &Repr) -> Repr {
        match (self.kind(), a) {
            (_, Repr::Int(x)) => Repr::Int(-x),
            (Kind::Modular(n), Repr::Mod(x)) => Repr::Mod(if *x == 0 { 0 } else { n - x }),
            (_, Repr::Rat(x)) => Repr::Rat(-x),
            (_, Repr::Gauss(x, y)) => Repr::Gauss(-x, -y),
            (
                Kind::Polynomial { base, .. } | Kind::Quotient { base, .. } | Kind::Puiseux { base, .. },
                Repr::Poly(v),
            ) => Repr::Poly(upoly::neg(base, v)),
            (Kind::Laurent { base, .. }, Repr::Laurent(s, v)) => Repr::Laurent(*s, upoly::neg(base, v)),
            (_, Repr::Frac(n, d)) => Repr::Frac(n.neg(), d.clone()),
            _ => unreachable!("payload does not match ring {self}"),
        }
    }

    pub(crate) fn sub_r(&self, a: &Repr, b: &Repr) -> Repr {
        self.add_r(a, &self.neg_r(b))
    }

    pub(crate) fn mul_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (self.kind(), a, b) {
            (_, Repr::Int(x), Repr::Int(y)) => Repr::Int(x * y),
            (Kind::Modular(n), Repr::Mod(x), Repr::Mod(y)) => {
                Repr::Mod(((*x as u128 * *y as u128) % *n as u128) as u64)
            }
            (_, Repr::Rat(x), Repr::Rat(y)) => Repr::Rat(x * y),
            (_, Repr::Gauss(a1, b1), Repr::Gauss(a2, b2)) => {
                Repr::Gauss(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2)
            }
            (Kind::Polynomial { base, .. } | Kind::Puiseux { base, .. }, Repr::Poly(x), Repr::Poly(y)) => {
                Repr::Poly(upoly::mul(base, x, y))
            }
            (Kind::Quotient { base, modulus, .. }, Repr::Poly(x), Repr::Poly(y)) => {
                Repr::Poly(upoly::rem(base, &upoly::mul(base, x, y), modulus))
            }
            (Kind::Laurent { base, .. }, Repr::Laurent(s1, x), Repr::Laurent(s2, y)) => {
                self.laurent_normalize(s1 + s2, upoly::mul(base, x, y))
            }
            (_, Repr::Frac(n1, d1), Repr::Frac(n2, d2)) => {
                let (n, d) = qpoly::fraction_mul(n1, d1, n2, d2);
                Repr::Frac(n, d)
            }
            _ => unreachable!("payload does not match ring {self}"),
        }
    }

    pub(crate) fn pow_r(&self, a: &Repr, mut e: u64) -> Repr {
        let mut acc = self.one_r();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_r(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_r(&base, &base);
            }
        }
        acc
    }

    pub(crate) fn inv_r(&self, a: &Repr) -> Option<Repr> {
        match (self.kind(), a) {
            (_, Repr::Int(x)) => (x.abs().is_one()).then(|| a.clone()),
            (Kind::Modular(n), Repr::Mod(x)) => mod_inverse(*x, *n).map(Repr::Mod),
            (_, Repr::Rat(x)) => (!x.is_zero()).then(|| Repr::Rat(x.recip())),
            (_, Repr::Gauss(x, y)) => {
                (x * x + y * y).is_one().then(|| Repr::Gauss(x.clone(), -y))
            }
            (Kind::Polynomial { base, .. } | Kind::Puiseux { base, .. }, Repr::Poly(v)) => {
                poly_inverse(base, v).map(Repr::Poly)
            }
            (Kind::Laurent { base, .. }, Repr::Laurent(s, v)) => {
                if v.len() != 1 {
                    return None;
                }
                base.inv_r(&v[0]).map(|c| Repr::Laurent(-s, vec![c]))
            }
            (_, Repr::Frac(n, d)) => (!n.is_zero()).then(|| {
                let (n2, d2) = qpoly::normalize_fraction(d.clone(), n.clone());
                Repr::Frac(n2, d2)
            }),
            (Kind::Quotient { .. }, Repr::Poly(_)) => self.quotient_inverse(a),
            _ => unreachable!("payload does not match ring {self}"),
        }
    }

    pub(crate) fn is_nilpotent_r(&self, a: &Repr) -> bool {
        if self.is_zero_r(a) {
            return true;
        }
        if self.is_domain() {
            return false;
        }
        match (self.kind(), a) {
            (Kind::Modular(_), _) => self.is_zero_r(&self.pow_r(a, 64)),
            (Kind::Polynomial { base, .. } | Kind::Puiseux { base, .. }, Repr::Poly(v)) => {
                v.iter().all(|c| base.is_nilpotent_r(c))
            }
            (Kind::Quotient { base, modulus, .. }, _) => {
                // nilpotency index is at most log2 |R| for finite R and at
                // most the rank for ℤ- and ℚ-algebras
                let bound = match base.cardinality() {
                    Some(n) => (n.ilog2() as u64 + 1) * (modulus.len() as u64 - 1),
                    None => modulus.len() as u64 - 1,
                };
                self.is_zero_r(&self.pow_r(a, bound))
            }
            _ => false,
        }
    }

    fn to_rat(&self, a: &Repr) -> BigRational {
        match a {
            Repr::Int(z) => BigRational::from_integer(z.clone()),
            Repr::Rat(q) => q.clone(),
            Repr::Mod(r) => BigRational::from_integer((*r).into()),
            _ => unreachable!(),
        }
    }

    /// Matrix of multiplication by `a` on the basis 1, X, ..., X^(d-1).
    fn mult_matrix(&self, a: &Repr) -> linalg::Matrix {
        let Kind::Quotient { base, modulus, .. } = self.kind() else { unreachable!() };
        let d = modulus.len() - 1;
        let Repr::Poly(av) = a else { unreachable!() };
        let mut m = vec![vec![BigRational::zero(); d]; d];
        let mut col = av.clone();
        for j in 0..d {
            for (i, c) in col.iter().enumerate() {
                m[i][j] = base.to_rat(c);
            }
            let mut shifted = vec![base.zero_r()];
            shifted.extend(col.iter().cloned());
            col = upoly::rem(base, &upoly::trim(base, shifted), modulus);
        }
        m
    }

    fn quotient_inverse(&self, a: &Repr) -> Option<Repr> {
        let Kind::Quotient { base, modulus, .. } = self.kind() else { unreachable!() };
        let d = modulus.len() - 1;
        let m = self.mult_matrix(a);
        let (det, inv) = linalg::det_and_inverse(&m);
        let inv = inv?;
        let mut e0 = vec![BigRational::zero(); d];
        e0[0] = BigRational::one();
        let sol = linalg::mat_vec(&inv, &e0);
        let coeffs: Vec<Repr> = match base.kind() {
            Kind::Rationals => sol.into_iter().map(Repr::Rat).collect(),
            Kind::Integers => {
                if !det.abs().is_one() {
                    return None;
                }
                sol.into_iter().map(|c| Repr::Int(c.to_integer())).collect()
            }
            Kind::Modular(n) => {
                // adj(M) = det·M⁻¹ is integral; reduce it modulo n
                let nb = BigInt::from(*n);
                let dm = det.to_integer().mod_floor(&nb).to_u64().unwrap();
                let dinv = mod_inverse(dm, *n)?;
                sol.into_iter()
                    .map(|c| {
                        let adj = (c * &det).to_integer().mod_floor(&nb).to_u64().unwrap();
                        Repr::Mod(((adj as u128 * dinv as u128) % *n as u128) as u64)
                    })
                    .collect()
            }
            _ => unreachable!(),
        };
        Some(Repr::Poly(upoly::trim(base, coeffs)))
    }

    /// Some nonzero b with a·b = 0, for nonzero a.
    pub(crate) fn zero_divisor_witness_r(&self, a: &Repr) -> Result<Option<Repr>> {
        if self.is_zero_r(a) {
            return Ok(None);
        }
        if self.is_domain() {
            return Ok(None);
        }
        match (self.kind(), a) {
            (Kind::Modular(n), Repr::Mod(x)) => {
                let g = x.gcd(n);
                Ok((g != 1).then(|| Repr::Mod(n / g)))
            }
            (Kind::Quotient { base, .. }, _) if base.is_finite() => {
                if self.inv_r(a).is_some() {
                    return Ok(None);
                }
                let card = self.cardinality().unwrap();
                Ok((1..card)
                    .map(|i| self.nth_element_r(i))
                    .find(|b| self.is_zero_r(&self.mul_r(a, b))))
            }
            (Kind::Quotient { base, .. }, _) => {
                let Some(v) = linalg::kernel_vector(&self.mult_matrix(a)) else {
                    return Ok(None);
                };
                let coeffs: Vec<Repr> = match base.kind() {
                    Kind::Rationals => v.into_iter().map(Repr::Rat).collect(),
                    _ => {
                        let l = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
                        v.into_iter()
                            .map(|c| Repr::Int((c * BigRational::from_integer(l.clone())).to_integer()))
                            .collect()
                    }
                };
                Ok(Some(Repr::Poly(upoly::trim(base, coeffs))))
            }
            (Kind::Polynomial { base, .. } | Kind::Puiseux { base, .. }, Repr::Poly(v)) => {
                // McCoy: a polynomial zero divisor is killed by a constant
                let Some(card) = base.cardinality() else {
                    return Err(Error::Unsupported(format!("zero-divisor test in {self}")));
                };
                Ok((1..card).map(|i| base.nth_element_r(i)).find_map(|c| {
                    v.iter()
                        .all(|x| base.is_zero_r(&base.mul_r(&c, x)))
                        .then(|| Repr::Poly(vec![c.clone()]))
                }))
            }
            _ => Err(Error::Unsupported(format!("zero-divisor test in {self}"))),
        }
    }

    /// Multiplicative order of a payload.
    pub(crate) fn order_r(&self, a: &Repr) -> Order {
        if let Some(card) = self.cardinality() {
            let mut x = a.clone();
            let one = self.one_r();
            for k in 1..=card.min(1 << 24) as u64 {
                if x == one {
                    return Order::Finite(k);
                }
                x = self.mul_r(&x, a);
            }
            return if card <= 1 << 24 { Order::Infinite } else { Order::Unknown };
        }
        let one = self.one_r();
        let minus_one = self.neg_r(&one);
        match (self.kind(), a) {
            (Kind::Integers | Kind::Rationals, _) => {
                if *a == one {
                    Order::Finite(1)
                } else if *a == minus_one {
                    Order::Finite(2)
                } else {
                    Order::Infinite
                }
            }
            (Kind::Gaussian, _) => self.order_dividing(a, 4),
            (
                Kind::Polynomial { base, .. } | Kind::Puiseux { base, .. } | Kind::Laurent { base, .. },
                Repr::Poly(v) | Repr::Laurent(_, v),
            ) if base.is_domain() => {
                // over a domain, torsion units are constants
                let constant = match a {
                    Repr::Laurent(s, _) => *s == 0 && v.len() == 1,
                    _ => v.len() == 1,
                };
                if constant {
                    base.order_r(&v[0])
                } else {
                    Order::Infinite
                }
            }
            (Kind::RationalFunctions { .. } | Kind::PuiseuxFractions { .. }, Repr::Frac(n, d)) => {
                if d.degree() == Some(0) && n.degree() == Some(0) {
                    Kind::Rationals.order_of_rational(&(&n.0[0] / &d.0[0]))
                } else {
                    Order::Infinite
                }
            }
            (Kind::Quotient { modulus, .. }, _) => {
                // roots of unity in a rank-d ℚ-algebra have order n with φ(n) ≤ d
                let d = (modulus.len() - 1) as u64;
                let mut exponent = 1u64;
                for n in 1..=(2 * d * d + 2) {
                    if totient(n) <= d {
                        exponent = match exponent.checked_mul(n / exponent.gcd(&n)) {
                            Some(e) => e,
                            None => return Order::Unknown,
                        };
                    }
                }
                self.order_dividing(a, exponent)
            }
            _ => Order::Unknown,
        }
    }

    /// Order of `a` given that every torsion element satisfies x^exponent = 1.
    fn order_dividing(&self, a: &Repr, exponent: u64) -> Order {
        let one = self.one_r();
        if self.pow_r(a, exponent) != one {
            return Order::Infinite;
        }
        let mut order = exponent;
        for p in prime_factors(exponent) {
            while order.is_multiple_of(p) && self.pow_r(a, order / p) == one {
                order /= p;
            }
        }
        Order::Finite(order)
    }

    /// Coordinates over ℚ for rings whose additive group embeds in a
    /// ℚ-vector space with a fixed basis; shorter vectors are zero-padded.
    pub(crate) fn rational_coords_r(&self, a: &Repr) -> Option<Vec<BigRational>> {
        match (self.kind(), a) {
            (Kind::Integers, Repr::Int(z)) => Some(vec![BigRational::from_integer(z.clone())]),
            (Kind::Rationals, Repr::Rat(q)) => Some(vec![q.clone()]),
            (Kind::Gaussian, Repr::Gauss(x, y)) => Some(vec![
                BigRational::from_integer(x.clone()),
                BigRational::from_integer(y.clone()),
            ]),
            (Kind::Quotient { base, modulus, .. }, Repr::Poly(v)) if base.characteristic() == 0 => {
                let mut out = vec![BigRational::zero(); modulus.len() - 1];
                for (i, c) in v.iter().enumerate() {
                    out[i] = base.to_rat(c);
                }
                Some(out)
            }
            (Kind::Polynomial { base, .. }, Repr::Poly(v)) => {
                let width = match base.kind() {
                    Kind::Integers | Kind::Rationals => 1,
                    Kind::Gaussian => 2,
                    Kind::Quotient { modulus, .. } if base.characteristic() == 0 => modulus.len() - 1,
                    _ => return None,
                };
                let mut out = Vec::with_capacity(v.len() * width);
                for c in v {
                    let mut cc = base.rational_coords_r(c)?;
                    cc.resize(width, BigRational::zero());
                    out.extend(cc);
                }
                Some(out)
            }
            _ => None,
        }
    }
}

impl Kind {
    fn order_of_rational(&self, q: &BigRational) -> Order {
        if q.is_one() {
            Order::Finite(1)
        } else if (-q).is_one() {
            Order::Finite(2)
        } else {
            Order::Infinite
        }
    }
}

/// Inverse of a polynomial over an arbitrary commutative base: a unit
/// constant term plus nilpotent higher coefficients.
fn poly_inverse(base: &Ring, v: &[Repr]) -> Option<Vec<Repr>> {
    let c0 = v.first()?;
    let u = base.inv_r(c0)?;
    if v.len() == 1 {
        return Some(vec![u]);
    }
    if !v[1..].iter().all(|c| base.is_nilpotent_r(c)) {
        return None;
    }
    // f = c0 (1 + x) with x = u·(f - c0) nilpotent
    let mut tail = v.to_vec();
    tail[0] = base.zero_r();
    let x = upoly::scale(base, &u, &tail);
    let minus_x = upoly::neg(base, &x);
    let mut term = vec![base.one_r()];
    let mut sum = term.clone();
    for _ in 0..100_000 {
        term = upoly::mul(base, &term, &minus_x);
        if term.is_empty() {
            return Some(upoly::scale(base, &u, &sum));
        }
        sum = upoly::add(base, &sum, &term);
    }
    None
}

/// An element of a [`Ring`], always in normal form.
#[derive(Clone)]
pub struct Elem {
    ring: Ring,
    pub(crate) repr: Repr,
}

impl Elem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero_r(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        self.repr == self.ring.one_r()
    }

    fn check(&self, other: &Elem) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.add_r(&self.repr, &other.repr)))
    }

    pub fn try_sub(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.sub_r(&self.repr, &other.repr)))
    }

    pub fn try_mul(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.mul_r(&self.repr, &other.repr)))
    }

    pub fn pow(&self, e: u64) -> Elem {
        self.ring.wrap(self.ring.pow_r(&self.repr, e))
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow_i(&self, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow(e as u64));
        }
        let inv = self
            .try_invert()
            .ok_or_else(|| Error::NotInvertible(self.to_string()))?;
        Ok(inv.pow(e.unsigned_abs()))
    }

    /// The inverse, or `None` when the element is not a unit.
    pub fn try_invert(&self) -> Option<Elem> {
        self.ring.inv_r(&self.repr).map(|r| self.ring.wrap(r))
    }

    pub fn is_unit(&self) -> bool {
        self.try_invert().is_some()
    }

    /// a ≠ 0 and a·b = 0 for some b ≠ 0.
    pub fn is_zero_divisor(&self) -> Result<bool> {
        Ok(self.zero_divisor_witness()?.is_some())
    }

    pub fn zero_divisor_witness(&self) -> Result<Option<Elem>> {
        Ok(self
            .ring
            .zero_divisor_witness_r(&self.repr)?
            .map(|r| self.ring.wrap(r)))
    }

    pub fn multiplicative_order(&self) -> Order {
        self.ring.order_r(&self.repr)
    }

    pub(crate) fn rational_coords(&self) -> Option<Vec<BigRational>> {
        self.ring.rational_coords_r(&self.repr)
    }

    /// Ascending coefficients for polynomial, quotient and Puiseux kinds
    /// (in s = t^(1/L) for the latter).
    pub fn coeffs(&self) -> Option<Vec<Elem>> {
        let base = self.ring.base()?;
        match &self.repr {
            Repr::Poly(v) => Some(v.iter().map(|c| base.wrap(c.clone())).collect()),
            _ => None,
        }
    }

    /// The integer value in ℤ or the residue in ℤ/n.
    pub fn as_integer(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Int(z) => Some(z.clone()),
            Repr::Mod(r) => Some(BigInt::from(*r)),
            _ => None,
        }
    }

    /// Evaluates a polynomial with coefficients in ℤ at this element.
    pub fn eval_int_poly(&self, coeffs: &[BigInt]) -> Elem {
        let mut acc = self.ring.zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * self) + &self.ring.from_bigint(c);
        }
        acc
    }

    /// Image of a polynomial over this element's coefficient ring, for
    /// polynomial kinds: substitutes `x` for the variable.
    pub fn substitute(&self, x: &Elem) -> Result<Elem> {
        let coeffs = self
            .coeffs()
            .ok_or_else(|| Error::Unsupported(format!("substitution in {}", self.ring)))?;
        let mut acc = x.ring.zero();
        for c in coeffs.iter().rev() {
            let c = embed(c, &x.ring)?;
            acc = acc.try_mul(x)?.try_add(&c)?;
        }
        Ok(acc)
    }
}

/// Maps an element of ℤ or ℤ/n (or ℚ when possible) into `target`.
pub fn embed(a: &Elem, target: &Ring) -> Result<Elem> {
    if a.ring == *target {
        return Ok(a.clone());
    }
    match &a.repr {
        Repr::Int(z) => Ok(target.from_bigint(z)),
        Repr::Rat(q) => target.from_rational(q),
        Repr::Mod(r) if target.characteristic() != 0 && {
            let Kind::Modular(n) = a.ring.kind() else { unreachable!() };
            target.characteristic().is_multiple_of(*n)
        } =>
        {
            Ok(target.from_i64(*r as i64))
        }
        _ => Err(Error::RingMismatch(a.ring.to_string(), target.to_string())),
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.repr == other.repr
    }
}

impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::elem(&self.ring, &self.repr))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

// Operators panic on ring mismatch, like shape mismatches elsewhere; the
// `try_*` methods report it instead.
macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Elem> for &Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                self.$try(rhs).expect("ring mismatch")
            }
        }
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                self.$try(&rhs).expect("ring mismatch")
            }
        }
        impl $tr<&Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                self.$try(rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.ring.wrap(self.ring.neg_r(&self.repr))
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

#[cfg(test)]
mod tests;
