//! Denominator sets, systems of roots and rational q-states.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::qnum::QContext;
use crate::ring::{Elem, Ring};

/// An lcm-closed finite set of denominators containing 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorSet {
    members: BTreeSet<u64>,
    generator: u64,
}

impl DenominatorSet {
    /// The lcm-closure of D ∪ {1}.
    pub fn close(d: &[u64]) -> Result<DenominatorSet> {
        if d.is_empty() {
            return Err(Error::Domain("denominator set must be nonempty".into()));
        }
        if d.contains(&0) {
            return Err(Error::Domain("denominators must be positive".into()));
        }
        let mut members: BTreeSet<u64> = d.iter().copied().chain([1]).collect();
        loop {
            let v: Vec<u64> = members.iter().copied().collect();
            let before = members.len();
            for (i, a) in v.iter().enumerate() {
                for b in &v[i + 1..] {
                    members.insert(a.lcm(b));
                }
            }
            if members.len() == before {
                break;
            }
        }
        let generator = *members.iter().next_back().unwrap();
        Ok(DenominatorSet { members, generator })
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.contains(&n)
    }

    /// lcm(D): the monoid ℕ·(1/D) equals ℕ·(1/p).
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Whether fractions with reduced denominator n lie in ℤ·(1/D).
    pub fn covers(&self, n: u64) -> bool {
        n != 0 && self.generator.is_multiple_of(n)
    }
}

/// A validated family of roots q_n with q_n^n = q.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ctx: QContext,
    dens: DenominatorSet,
    roots: BTreeMap<u64, Elem>,
    admissible: bool,
}

fn reduced_parts(r: &BigRational) -> Result<(i64, u64)> {
    let m = r.numer().to_i64().ok_or_else(|| Error::Domain(format!("{r} out of range")))?;
    let n = r.denom().to_u64().ok_or_else(|| Error::Domain(format!("{r} out of range")))?;
    Ok((m, n))
}

impl RootSystem {
    /// Checks q_1 = q, q_n^n = q and q_n^(n/n′) = q_n′ for n′ | n.
    pub fn build(ctx: &QContext, dens: &DenominatorSet, roots: BTreeMap<u64, Elem>) -> Result<RootSystem> {
        for n in dens.members() {
            let root = roots
                .get(&n)
                .ok_or_else(|| Error::Domain(format!("no root given for denominator {n}")))?;
            if root.ring() != ctx.ring() {
                return Err(Error::RingMismatch(root.ring().to_string(), ctx.ring().to_string()));
            }
            if root.pow(n) != *ctx.q() {
                return Err(Error::CompatibilityFailure(n, 1));
            }
        }
        for n in dens.members() {
            for n2 in dens.members().filter(|d| n % d == 0 && *d < n) {
                if roots[&n].pow(n / n2) != roots[&n2] {
                    return Err(Error::CompatibilityFailure(n, n2));
                }
            }
        }
        let roots: BTreeMap<u64, Elem> = roots.into_iter().filter(|(n, _)| dens.contains(*n)).collect();
        let admissible = dens
            .members()
            .all(|n| QContext::new(roots[&n].clone()).q_state(n as i64).unwrap().is_unit());
        Ok(RootSystem { ctx: ctx.clone(), dens: dens.clone(), roots, admissible })
    }

    /// D = {1}, q_1 = q.
    pub fn trivial(ctx: &QContext) -> RootSystem {
        let dens = DenominatorSet::close(&[1]).unwrap();
        let roots = BTreeMap::from([(1, ctx.q().clone())]);
        RootSystem::build(ctx, &dens, roots).unwrap()
    }

    /// q = t in ℚ(t^(1/L)) with q_n = t^(1/n), L = lcm(D).
    pub fn puiseux(dens: &DenominatorSet) -> Result<RootSystem> {
        let ring = Ring::puiseux_fractions("t", dens.generator())?;
        let ctx = QContext::new(ring.generator()?);
        let mut roots = BTreeMap::new();
        for n in dens.members() {
            roots.insert(n, ring.puiseux_monomial(1, n)?);
        }
        RootSystem::build(&ctx, dens, roots)
    }

    pub fn context(&self) -> &QContext {
        &self.ctx
    }

    pub fn denominators(&self) -> &DenominatorSet {
        &self.dens
    }

    pub fn root(&self, n: u64) -> Option<&Elem> {
        self.roots.get(&n)
    }

    /// Every (n)_{q_n} is a unit.
    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    fn check_admissible(&self) -> Result<()> {
        for n in self.dens.members() {
            let v = QContext::new(self.roots[&n].clone()).q_state(n as i64)?;
            if !v.is_unit() {
                return Err(Error::NotAdmissible { n, value: v.to_string() });
            }
        }
        Ok(())
    }

    /// q^r = q_N^(rN) with N = lcm(D).
    pub fn rational_power(&self, r: &BigRational) -> Result<Elem> {
        let (m, n) = reduced_parts(r)?;
        if !self.dens.covers(n) {
            return Err(Error::DenominatorNotCovered(n));
        }
        let big = self.dens.generator();
        self.roots[&big].pow_i(m * (big / n) as i64)
    }

    fn quotient_state(&self, m: i64, n: u64) -> Result<Elem> {
        let ctx = QContext::new(self.roots[&n].clone());
        let den = ctx.q_state(n as i64)?;
        let inv = den
            .try_invert()
            .ok_or_else(|| Error::NotAdmissible { n, value: den.to_string() })?;
        Ok(&ctx.q_state(m)? * &inv)
    }

    /// (m/n)_q = (m)_{q_n} / (n)_{q_n}, evaluated on the representative with
    /// denominator lcm(D) and cross-checked against the reduced one.
    pub fn q_state(&self, r: &BigRational) -> Result<Elem> {
        self.check_admissible()?;
        let (m, n) = reduced_parts(r)?;
        if !self.dens.covers(n) {
            return Err(Error::DenominatorNotCovered(n));
        }
        if m < 0 && self.ctx.q_inverse().is_none() {
            return Err(Error::NotInvertible(self.ctx.q().to_string()));
        }
        let big = self.dens.generator();
        let value = self.quotient_state(m * (big / n) as i64, big)?;
        if self.dens.contains(n) && self.quotient_state(m, n)? != value {
            return Err(Error::CompatibilityFailure(n, big));
        }
        Ok(value)
    }

    /// The system of roots of q^r on the denominators n with r/n covered:
    /// (q^r)_n = q^(r/n).
    pub fn induced(&self, r: &BigRational) -> Result<RootSystem> {
        let (_, n1) = reduced_parts(r)?;
        if !self.dens.covers(n1) {
            return Err(Error::DenominatorNotCovered(n1));
        }
        let big = self.dens.generator();
        let ds: Vec<u64> = (1..=big / n1).filter(|d| (big / n1).is_multiple_of(*d)).collect();
        let dens = DenominatorSet::close(&ds)?;
        let ctx = QContext::new(self.rational_power(r)?);
        let mut roots = BTreeMap::new();
        for d in dens.members() {
            roots.insert(d, self.rational_power(&(r / BigRational::from_integer(BigInt::from(d))))?);
        }
        RootSystem::build(&ctx, &dens, roots)
    }
}

/// r = m/n as an exact rational.
pub fn ratio(m: i64, n: i64) -> BigRational {
    BigRational::new(m.into(), n.into())
}

/// The displayed form −(Σ_{i=1}^m q^(−i/n)) / (Σ_{i=0}^{n−1} q^(i/n)) of
/// (−m/n)_q, for comparison with the quotient definition.
pub fn negative_state_formula(sys: &RootSystem, m: u64, n: u64) -> Result<Elem> {
    if !sys.dens.contains(n) {
        return Err(Error::DenominatorNotCovered(n));
    }
    let qn = &sys.roots[&n];
    let inv = qn
        .try_invert()
        .ok_or_else(|| Error::NotInvertible(qn.to_string()))?;
    let ring = qn.ring();
    let num = (1..=m).fold(ring.zero(), |acc, i| &acc + &inv.pow(i));
    let den = (0..n).fold(ring.zero(), |acc, i| &acc + &qn.pow(i));
    let den_inv = den
        .try_invert()
        .ok_or_else(|| Error::NotAdmissible { n, value: den.to_string() })?;
    Ok(-(&num * &den_inv))
}

/// Rationals k/den for k in [lo·den, hi·den].
pub fn grid(den: u64, lo: i64, hi: i64) -> Vec<BigRational> {
    let d = den as i64;
    (lo * d..=hi * d).map(|k| ratio(k, d)).collect()
}
