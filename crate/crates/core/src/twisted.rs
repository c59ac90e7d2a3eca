//! Polynomial algebras with an endomorphism σ and their twisted powers
//! f^(n) = f·σ(f)·…·σ^(n−1)(f).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::parse::{parse_expr, ExprTarget};
use crate::qnum::QContext;
use crate::ring::{Elem, Ring};

/// A polynomial in finitely many named generators over a base ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    base: Ring,
    gens: Arc<[String]>,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl MPoly {
    fn from_terms(base: &Ring, gens: &Arc<[String]>, terms: BTreeMap<Vec<u32>, Elem>) -> MPoly {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { base: base.clone(), gens: gens.clone(), terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coeff(&self, exps: &[u32]) -> Elem {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Elem)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in generator `i`.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn check(&self, other: &MPoly) {
        assert!(self.base == other.base && self.gens == other.gens, "algebra mismatch");
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check(other);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = match terms.get(e) {
                Some(a) => a + c,
                None => c.clone(),
            };
            terms.insert(e.clone(), v);
        }
        MPoly::from_terms(&self.base, &self.gens, terms)
    }

    pub fn neg(&self) -> MPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MPoly { base: self.base.clone(), gens: self.gens.clone(), terms }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check(other);
        let mut terms: BTreeMap<Vec<u32>, Elem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let p = c1 * c2;
                let v = match terms.remove(&e) {
                    Some(a) => &a + &p,
                    None => p,
                };
                terms.insert(e, v);
            }
        }
        MPoly::from_terms(&self.base, &self.gens, terms)
    }

    pub fn scale(&self, c: &Elem) -> MPoly {
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect();
        MPoly::from_terms(&self.base, &self.gens, terms)
    }

    pub fn pow(&self, mut e: u64) -> MPoly {
        let mut acc = self.constant(&self.base.one());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    fn constant(&self, c: &Elem) -> MPoly {
        let terms = BTreeMap::from([(vec![0; self.gens.len()], c.clone())]);
        MPoly::from_terms(&self.base, &self.gens, terms)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(*e)));
        if keys.is_empty() {
            return f.write_str("0");
        }
        for (idx, e) in keys.into_iter().enumerate() {
            let c = self.terms[e].to_string();
            let mono: Vec<String> = e
                .iter()
                .zip(self.gens.iter())
                .filter(|(k, _)| **k > 0)
                .map(|(k, g)| if *k == 1 { g.clone() } else { format!("{g}^{k}") })
                .collect();
            let compound = c[1..].contains(['+', '-']) || c.contains(' ');
            let (neg, body) = match c.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, c.clone()),
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono.join("*")
            } else if compound {
                format!("({body})*{}", mono.join("*"))
            } else {
                format!("{body}*{}", mono.join("*"))
            };
            match (idx, neg) {
                (0, true) => write!(f, "-{term}")?,
                (0, false) => write!(f, "{term}")?,
                (_, true) => write!(f, " - {term}")?,
                (_, false) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A commutative algebra R[x₁,…,x_g] with σ given on the generators.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    base: Ring,
    gens: Arc<[String]>,
    images: Vec<MPoly>,
}

/// Outcome of expanding both sides of the twisted binomial formula.
#[derive(Clone, Debug)]
pub struct BinomialReport {
    pub lhs: MPoly,
    pub rhs: MPoly,
    pub equal: bool,
    /// First monomial where the sides differ, with both coefficients.
    pub difference: Option<(Vec<u32>, Elem, Elem)>,
}

impl TwistedAlgebra {
    /// Generators with σ-images given as expressions in the generators
    /// and the base ring's own variables.
    pub fn new(base: &Ring, gens: &[&str], images: &[&str]) -> Result<TwistedAlgebra> {
        if gens.len() != images.len() {
            return Err(Error::Domain("one image per generator is required".into()));
        }
        let mut alg = TwistedAlgebra {
            base: base.clone(),
            gens: gens.iter().map(|g| g.to_string()).collect(),
            images: Vec::new(),
        };
        let parsed = images.iter().map(|s| alg.parse(s)).collect::<Result<Vec<_>>>()?;
        alg.images = parsed;
        Ok(alg)
    }

    /// The same generators with σ given by `images`.
    pub fn with_images(&self, images: Vec<MPoly>) -> Result<TwistedAlgebra> {
        if images.len() != self.gens.len() {
            return Err(Error::Domain("one image per generator is required".into()));
        }
        for f in &images {
            self.check_same(f)?;
        }
        Ok(TwistedAlgebra { base: self.base.clone(), gens: self.gens.clone(), images })
    }

    /// R[x] with σ(x) = q·x + h.
    pub fn affine(q: &Elem, h: &Elem) -> Result<TwistedAlgebra> {
        let base = q.ring().clone();
        let mut alg = TwistedAlgebra { base, gens: Arc::from(vec!["x".to_string()]), images: Vec::new() };
        let x = alg.generator(0);
        alg.images = vec![x.scale(q).add(&alg.constant(h))];
        Ok(alg)
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn image(&self, i: usize) -> &MPoly {
        &self.images[i]
    }

    pub fn zero(&self) -> MPoly {
        MPoly::from_terms(&self.base, &self.gens, BTreeMap::new())
    }

    pub fn one(&self) -> MPoly {
        self.constant(&self.base.one())
    }

    pub fn constant(&self, c: &Elem) -> MPoly {
        let terms = BTreeMap::from([(vec![0; self.gens.len()], c.clone())]);
        MPoly::from_terms(&self.base, &self.gens, terms)
    }

    pub fn generator(&self, i: usize) -> MPoly {
        let mut e = vec![0; self.gens.len()];
        e[i] = 1;
        MPoly::from_terms(&self.base, &self.gens, BTreeMap::from([(e, self.base.one())]))
    }

    pub fn generator_named(&self, name: &str) -> Result<MPoly> {
        let i = self
            .gens
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::Domain(format!("unknown generator '{name}'")))?;
        Ok(self.generator(i))
    }

    /// Builds Σ c_i x^i in the first generator.
    pub fn univariate(&self, coeffs: &[Elem]) -> MPoly {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; self.gens.len()];
            e[0] = i as u32;
            terms.insert(e, c.clone());
        }
        MPoly::from_terms(&self.base, &self.gens, terms)
    }

    pub fn parse(&self, text: &str) -> Result<MPoly> {
        parse_expr(self, text)
    }

    /// Substitutes `values[i]` for generator i.
    pub fn substitute(&self, f: &MPoly, values: &[MPoly]) -> MPoly {
        let mut acc = self.zero();
        for (e, c) in &f.terms {
            let mut t = self.constant(c);
            for (k, v) in e.iter().zip(values) {
                if *k > 0 {
                    t = t.mul(&v.pow(*k as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn sigma(&self, f: &MPoly) -> MPoly {
        self.substitute(f, &self.images)
    }

    /// σ^n(f), with σ⁰ the identity.
    pub fn sigma_pow(&self, f: &MPoly, n: u64) -> MPoly {
        (0..n).fold(f.clone(), |acc, _| self.sigma(&acc))
    }

    /// The algebra with σ replaced by σ^k.
    pub fn power_algebra(&self, k: u64) -> TwistedAlgebra {
        let images = (0..self.gens.len()).map(|i| self.sigma_pow(&self.generator(i), k)).collect();
        TwistedAlgebra { base: self.base.clone(), gens: self.gens.clone(), images }
    }

    /// f^(n) = ∏_{i<n} σ^i(f), via f^(n+1) = f^(n)·σ^n(f).
    pub fn twisted_power(&self, f: &MPoly, n: u64) -> MPoly {
        let mut acc = self.one();
        let mut cur = f.clone();
        for i in 0..n {
            acc = acc.mul(&cur);
            if i + 1 < n {
                cur = self.sigma(&cur);
            }
        }
        acc
    }

    /// ((f^(n)_{σ^m})^(m)_σ, (f^(n)_σ)^(m)_{σ^n}, f^(mn)_σ).
    pub fn twisted_power_compose(&self, f: &MPoly, n: u64, m: u64) -> (MPoly, MPoly, MPoly) {
        let a = self.twisted_power(&self.power_algebra(m).twisted_power(f, n), m);
        let b = self.power_algebra(n).twisted_power(&self.twisted_power(f, n), m);
        (a, b, self.twisted_power(f, m * n))
    }

    /// (q, h) with σ(x) = q·x + h, for a univariate algebra.
    pub fn affine_parts(&self) -> Result<(Elem, Elem)> {
        if self.gens.len() != 1 || self.images[0].degree_in(0).unwrap_or(0) > 1 {
            return Err(Error::Unsupported("sigma is not affine in one variable".into()));
        }
        Ok((self.images[0].coeff(&[1]), self.images[0].coeff(&[0])))
    }

    /// σ^n(x) = q^n·x + (n)_q·h; negative n needs q to be a unit.
    pub fn affine_orbit(&self, n: i64) -> Result<MPoly> {
        let (q, h) = self.affine_parts()?;
        let ctx = QContext::new(q.clone());
        let qn = q.pow_i(n)?;
        let closed = self.generator(0).scale(&qn).add(&self.constant(&(&ctx.q_state(n)? * &h)));
        if n >= 0 {
            let iterated = self.sigma_pow(&self.generator(0), n as u64);
            if iterated != closed {
                return Err(Error::Domain(format!("closed form {closed} disagrees with substitution {iterated}")));
            }
        }
        Ok(closed)
    }

    /// (x^(p), x^p) for σ(x) = q·x, to compare under the parity rule.
    pub fn sign_check(&self, p: u64) -> Result<(MPoly, MPoly)> {
        let (_, h) = self.affine_parts()?;
        if !h.is_zero() {
            return Err(Error::Unsupported("sigma must be x -> q*x".into()));
        }
        let x = self.generator(0);
        Ok((self.twisted_power(&x, p), x.pow(p)))
    }

    /// Expands (x+y)^(n) and Σ_k C(n,k)_q x^(k) y^(n−k) after checking
    /// σ(x) = q·x and σ(y) = y.
    pub fn twisted_binomial_check(&self, x: &MPoly, y: &MPoly, q: &Elem, n: u64) -> Result<BinomialReport> {
        if self.sigma(x) != x.scale(q) {
            return Err(Error::Eigenvector(format!("{x} (sigma gives {})", self.sigma(x))));
        }
        if self.sigma(y) != *y {
            return Err(Error::Eigenvector(format!("{y} (sigma gives {})", self.sigma(y))));
        }
        let lhs = self.twisted_power(&x.add(y), n);
        let mut table = QContext::new(q.clone()).pascal_table();
        let mut rhs = self.zero();
        for k in 0..=n {
            let term = self.twisted_power(x, k).mul(&self.twisted_power(y, n - k));
            rhs = rhs.add(&term.scale(&table.get(n, k)));
        }
        let diff = lhs.sub(&rhs);
        let difference = diff
            .terms
            .keys()
            .next()
            .map(|e| (e.clone(), lhs.coeff(e), rhs.coeff(e)));
        Ok(BinomialReport { equal: difference.is_none(), lhs, rhs, difference })
    }

    fn check_same(&self, f: &MPoly) -> Result<()> {
        if f.base != self.base || f.gens != self.gens {
            return Err(Error::Domain(format!("{f} does not belong to this algebra")));
        }
        Ok(())
    }

    /// The generator x^(n) of the n-th twisted power of the ideal (x).
    pub fn principal_ideal_power(&self, x: &MPoly, n: u64) -> Result<MPoly> {
        self.check_same(x)?;
        Ok(self.twisted_power(x, n))
    }
}

/// x^(p) over 𝔽_p[x] with σ(x) = x + h, together with x^p − h^(p−1)·x.
pub fn artin_schreier(h: &Elem) -> Result<(MPoly, MPoly)> {
    let base = h.ring();
    let p = base.characteristic();
    if p == 0 || !(2..p).all(|d| !p.is_multiple_of(d)) {
        return Err(Error::Unsupported(format!("{base} does not have prime characteristic")));
    }
    let alg = TwistedAlgebra::affine(&base.one(), h)?;
    let x = alg.generator(0);
    let lhs = alg.twisted_power(&x, p);
    let rhs = x.pow(p).sub(&x.scale(&h.pow(p - 1)));
    Ok((lhs, rhs))
}

/// The basis x^(0), x^(1), … of R[x] for σ(x) = q·x + h with q a unit.
#[derive(Clone, Debug)]
pub struct TwistedPowerBasis {
    alg: TwistedAlgebra,
    elems: Vec<MPoly>,
    lc_inverses: Vec<Elem>,
}

impl TwistedPowerBasis {
    pub fn new(alg: &TwistedAlgebra) -> Result<TwistedPowerBasis> {
        let (q, _) = alg.affine_parts()?;
        if !q.is_unit() {
            return Err(Error::BasisUnavailable(format!("q = {q} is not a unit")));
        }
        Ok(TwistedPowerBasis { alg: alg.clone(), elems: vec![alg.one()], lc_inverses: vec![alg.base.one()] })
    }

    pub fn algebra(&self) -> &TwistedAlgebra {
        &self.alg
    }

    fn grow(&mut self, d: usize) -> Result<()> {
        while self.elems.len() <= d {
            let i = self.elems.len() as u64;
            let next = self.elems.last().unwrap().mul(&self.alg.sigma_pow(&self.alg.generator(0), i - 1));
            let lc = next.coeff(&[i as u32]);
            let inv = lc
                .try_invert()
                .ok_or_else(|| Error::BasisUnavailable(format!("leading coefficient {lc} of x^({i})")))?;
            self.elems.push(next);
            self.lc_inverses.push(inv);
        }
        Ok(())
    }

    /// x^(i).
    pub fn element(&mut self, i: usize) -> Result<MPoly> {
        self.grow(i)?;
        Ok(self.elems[i].clone())
    }

    /// The coefficients c_i with f = Σ c_i x^(i), by leading-term elimination.
    pub fn expand(&mut self, f: &MPoly) -> Result<BTreeMap<usize, Elem>> {
        self.alg.check_same(f)?;
        let mut rest = f.clone();
        let mut out = BTreeMap::new();
        while let Some(d) = rest.degree_in(0) {
            let d = d as usize;
            self.grow(d)?;
            let c = &rest.coeff(&[d as u32]) * &self.lc_inverses[d];
            rest = rest.sub(&self.elems[d].scale(&c));
            out.insert(d, c);
        }
        Ok(out)
    }

    /// Σ c_i x^(i).
    pub fn reassemble(&mut self, coeffs: &BTreeMap<usize, Elem>) -> Result<MPoly> {
        let mut acc = self.alg.zero();
        for (&i, c) in coeffs {
            acc = acc.add(&self.element(i)?.scale(c));
        }
        Ok(acc)
    }

    /// The representative of f in R[x]/(x^(n)): the part of the expansion
    /// below degree n.
    pub fn truncate(&mut self, f: &MPoly, n: usize) -> Result<MPoly> {
        let coeffs: BTreeMap<usize, Elem> = self.expand(f)?.into_iter().filter(|(i, _)| *i < n).collect();
        self.reassemble(&coeffs)
    }
}

impl ExprTarget for TwistedAlgebra {
    type Value = MPoly;

    fn constant(&self, n: &BigInt) -> Result<MPoly> {
        Ok(TwistedAlgebra::constant(self, &self.base.from_bigint(n)))
    }

    fn variable(&self, name: &str) -> Result<MPoly> {
        if let Some(i) = self.gens.iter().position(|g| g == name) {
            return Ok(self.generator(i));
        }
        Ok(TwistedAlgebra::constant(self, &self.base.variable(name)?))
    }

    fn fractional_power(&self, name: &str, num: i64, den: u64) -> Result<MPoly> {
        Ok(TwistedAlgebra::constant(self, &self.base.fractional_power(name, num, den)?))
    }

    fn add(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        Ok(a.mul(b))
    }

    fn neg(&self, a: &MPoly) -> Result<MPoly> {
        Ok(a.neg())
    }

    fn div(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        let c = match b.terms.iter().next() {
            Some((e, c)) if b.terms.len() == 1 && e.iter().all(|&k| k == 0) => c,
            _ => return Err(Error::NotInvertible(b.to_string())),
        };
        let inv = c.try_invert().ok_or_else(|| Error::NotInvertible(c.to_string()))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: &MPoly, e: i64) -> Result<MPoly> {
        if e >= 0 {
            return Ok(a.pow(e as u64));
        }
        let inv = self.div(&self.one(), a)?;
        Ok(inv.pow(e.unsigned_abs()))
    }
}
