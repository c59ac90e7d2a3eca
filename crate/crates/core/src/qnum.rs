//! q-states, q-factorials, q-binomials, symmetric states, the quantum
//! characteristic and flatness certificates.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};
use crate::ring::{Elem, Order, Ring};

/// Search bound used when none is given.
pub const DEFAULT_BOUND: u64 = 1_000_000;

/// A ring with a distinguished element q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QContext {
    ring: Ring,
    q: Elem,
    q_inverse: Option<Elem>,
}

/// Outcome of the quantum characteristic search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QCharResult {
    Finite(u64),
    Zero { certified: bool },
    Unknown(u64),
}

impl fmt::Display for QCharResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QCharResult::Finite(p) => write!(f, "{p}"),
            QCharResult::Zero { certified: true } => f.write_str("0 (certified)"),
            QCharResult::Zero { certified: false } => f.write_str("0"),
            QCharResult::Unknown(b) => write!(f, "unknown (bound={b})"),
        }
    }
}

/// Torsion and unit status of the q-states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessCertificate {
    pub flat: bool,
    pub divisible: bool,
    /// (m, a) with (m)_q ≠ 0, a ≠ 0 and (m)_q·a = 0.
    pub witness: Option<(u64, Elem)>,
    /// Smallest m with (m)_q nonzero and not a unit.
    pub nonunit_witness: Option<u64>,
}

/// The evaluation map ℤ[t]/χ_p → R sending t to q.
#[derive(Clone, Debug)]
pub struct CyclotomicHom {
    pub p: u64,
    pub source: Ring,
    pub image: Elem,
}

impl CyclotomicHom {
    pub fn apply(&self, a: &Elem) -> Result<Elem> {
        if *a.ring() != self.source {
            return Err(Error::RingMismatch(a.ring().to_string(), self.source.to_string()));
        }
        a.substitute(&self.image)
    }
}

#[derive(Clone, Debug)]
pub enum Embedding {
    Hom(CyclotomicHom),
    /// χ_p(q), which is nonzero.
    Failure(Elem),
}

impl QContext {
    pub fn new(q: Elem) -> Self {
        let q_inverse = q.try_invert();
        QContext { ring: q.ring().clone(), q, q_inverse }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn q(&self) -> &Elem {
        &self.q
    }

    pub fn q_inverse(&self) -> Option<&Elem> {
        self.q_inverse.as_ref()
    }

    fn require_inverse(&self) -> Result<&Elem> {
        self.q_inverse
            .as_ref()
            .ok_or_else(|| Error::NotInvertible(self.q.to_string()))
    }

    /// (m)_q; negative m needs q to be a unit.
    pub fn q_state(&self, m: i64) -> Result<Elem> {
        if m >= 0 {
            let mut s = self.ring.zero();
            let mut pw = self.ring.one();
            for _ in 0..m {
                s = &s + &pw;
                pw = &pw * &self.q;
            }
            return Ok(s);
        }
        let inv = self.require_inverse()?;
        let mut s = self.ring.zero();
        let mut pw = inv.clone();
        for _ in 0..m.unsigned_abs() {
            s = &s + &pw;
            pw = &pw * inv;
        }
        Ok(-s)
    }

    /// (lo)_q, …, (hi)_q in one inductive pass each way from 0, using
    /// (m)_q − (m−1)_q = q^(m−1). Needs lo ≤ 0 ≤ hi.
    pub fn q_state_range(&self, lo: i64, hi: i64) -> Result<Vec<Elem>> {
        if lo > 0 || hi < 0 {
            return Err(Error::Domain(format!("range [{lo}, {hi}] must contain 0")));
        }
        let mut down = Vec::with_capacity(lo.unsigned_abs() as usize);
        if lo < 0 {
            let inv = self.require_inverse()?;
            let mut s = self.ring.zero();
            let mut pw = inv.clone();
            for _ in 0..lo.unsigned_abs() {
                s = &s - &pw;
                pw = &pw * inv;
                down.push(s.clone());
            }
        }
        down.reverse();
        down.extend(self.q_states(hi as u64));
        Ok(down)
    }

    /// (0)_q, (1)_q, ..., (m)_q.
    pub fn q_states(&self, m: u64) -> Vec<Elem> {
        let mut out = Vec::with_capacity(m as usize + 1);
        let mut s = self.ring.zero();
        let mut pw = self.ring.one();
        out.push(s.clone());
        for _ in 0..m {
            s = &s + &pw;
            pw = &pw * &self.q;
            out.push(s.clone());
        }
        out
    }

    /// (m)_q! = (m)_q (m−1)_q ... (1)_q.
    pub fn q_factorial(&self, m: u64) -> Elem {
        self.q_states(m)
            .iter()
            .skip(1)
            .fold(self.ring.one(), |acc, s| &acc * s)
    }

    /// C(n,k)_q by the Pascal recursion; zero for k > n.
    pub fn q_binomial(&self, n: u64, k: u64) -> Elem {
        PascalTable::new(self).get(n, k)
    }

    pub fn pascal_table(&self) -> PascalTable {
        PascalTable::new(self)
    }

    /// Walks the pairs (s_m, q^m) until (m)_q = 0, a pair recurs, or the
    /// bound is hit. Rings with rational coordinates and q of finite order
    /// are decided by solving along the arithmetic progressions m ≡ r mod d.
    pub fn q_characteristic(&self, bound: u64) -> QCharResult {
        // (p)_q = 0 forces q^p = 1, so q must be a unit
        if self.q_inverse.is_none() {
            return QCharResult::Zero { certified: true };
        }
        if !self.ring.is_finite() {
            match self.q.multiplicative_order() {
                Order::Infinite => return QCharResult::Zero { certified: true },
                Order::Finite(d) if self.ring.characteristic() == 0 => {
                    if let Some(r) = self.progression_solve(d) {
                        return r;
                    }
                }
                _ => {}
            }
        }
        let mut seen = HashSet::new();
        let mut s = self.ring.zero();
        let mut pw = self.ring.one();
        for m in 0..=bound {
            if m > 0 && s.is_zero() {
                return QCharResult::Finite(m);
            }
            if !seen.insert((s.clone(), pw.clone())) {
                return QCharResult::Zero { certified: true };
            }
            s = &s + &pw;
            pw = &pw * &self.q;
        }
        QCharResult::Unknown(bound)
    }

    /// With q^d = 1 we have (kd + r)_q = (r)_q + k·(d)_q.
    fn progression_solve(&self, d: u64) -> Option<QCharResult> {
        let states = self.q_states(d);
        if let Some(m) = (1..=d).find(|&m| states[m as usize].is_zero()) {
            return Some(QCharResult::Finite(m));
        }
        if self.ring.is_domain() && self.q.is_one() {
            // (m)_1 = m·1 never vanishes in characteristic 0
            return Some(QCharResult::Zero { certified: true });
        }
        let sd = states[d as usize].rational_coords()?;
        let mut best: Option<u64> = None;
        for r in 0..d {
            let mut sr = states[r as usize].rational_coords()?;
            sr.resize(sd.len(), BigRational::zero());
            let pivot = sd.iter().position(|c| !c.is_zero())?;
            let k = -(&sr[pivot] / &sd[pivot]);
            if !k.is_integer() || !k.is_positive() {
                continue;
            }
            if sr.iter().zip(&sd).any(|(a, b)| !(a + &k * b).is_zero()) {
                continue;
            }
            let m = k.to_integer().to_u64()?.checked_mul(d)?.checked_add(r)?;
            best = Some(best.map_or(m, |b| b.min(m)));
        }
        Some(match best {
            Some(m) => QCharResult::Finite(m),
            None => QCharResult::Zero { certified: true },
        })
    }

    /// Decides q-flatness and q-divisibility from the distinct q-state
    /// values, searching at most `bound` states when the orbit is infinite.
    pub fn certify_flatness(&self) -> Result<FlatnessCertificate> {
        self.certify_flatness_with_bound(10_000)
    }

    pub fn certify_flatness_with_bound(&self, bound: u64) -> Result<FlatnessCertificate> {
        if self.ring.is_field() {
            return Ok(FlatnessCertificate {
                flat: true,
                divisible: true,
                witness: None,
                nonunit_witness: None,
            });
        }
        let domain = self.ring.is_domain();
        if !domain && !self.ring.is_finite() && self.ring.base().is_none() {
            return Err(Error::Unsupported(format!("flatness over {}", self.ring)));
        }
        let mut seen_pairs = HashSet::new();
        let mut seen_values = HashSet::new();
        let mut witness = None;
        let mut nonunit = None;
        let mut closed = false;
        let limit = if self.ring.is_finite() { u64::MAX } else { bound };
        let mut s = self.ring.zero();
        let mut pw = self.ring.one();
        for m in 0..=limit {
            if !seen_pairs.insert((s.clone(), pw.clone())) {
                closed = true;
                break;
            }
            if !s.is_zero() && seen_values.insert(s.clone()) && !s.is_unit() {
                nonunit.get_or_insert(m);
                if !domain {
                    if let Some(a) = s.zero_divisor_witness()? {
                        witness = Some((m, a));
                    }
                }
            }
            if domain && nonunit.is_some() {
                break;
            }
            if witness.is_some() {
                break;
            }
            s = &s + &pw;
            pw = &pw * &self.q;
        }
        let decided = closed || witness.is_some() || (domain && nonunit.is_some());
        if !decided {
            return Err(Error::Unsupported(format!(
                "q-state orbit of {} in {} did not close within {bound} steps",
                self.q, self.ring
            )));
        }
        let flat = witness.is_none();
        Ok(FlatnessCertificate {
            flat,
            divisible: flat && nonunit.is_none(),
            witness,
            nonunit_witness: nonunit,
        })
    }

    /// [n]_v = (n)_{v²}·v^{−(n−1)} with v = q.
    pub fn symmetric_state(&self, n: i64) -> Result<Elem> {
        self.require_inverse()?;
        let v2 = QContext::new(self.q.pow(2));
        Ok(&v2.q_state(n)? * &self.q.pow_i(1 - n)?)
    }

    /// v^{−k(n−k)}·C(n,k)_{v²}; zero for k > n.
    pub fn symmetric_binomial(&self, n: u64, k: u64) -> Result<Elem> {
        self.require_inverse()?;
        if k > n {
            return Ok(self.ring.zero());
        }
        let v2 = QContext::new(self.q.pow(2));
        let e = i64::try_from(k * (n - k)).map_err(|_| Error::Domain("exponent overflow".into()))?;
        Ok(&v2.q_binomial(n, k) * &self.q.pow_i(-e)?)
    }

    /// The map ℤ[t]/χ_p → R, t ↦ q, when χ_p(q) = 0.
    pub fn embed_cyclotomic(&self, p: u64) -> Result<Embedding> {
        if p < 2 {
            return Err(Error::Domain(format!("cyclotomic embedding needs p >= 2, got {p}")));
        }
        let value = cyclotomic_poly(p).eval(&self.q);
        if !value.is_zero() {
            return Ok(Embedding::Failure(value));
        }
        Ok(Embedding::Hom(CyclotomicHom {
            p,
            source: Ring::cyclotomic(p)?,
            image: self.q.clone(),
        }))
    }

    /// The context (R, q^k).
    pub fn power_context(&self, k: u64) -> QContext {
        QContext::new(self.q.pow(k))
    }
}

/// Memoized Pascal triangle of C(n,k)_q, grown on demand.
#[derive(Clone, Debug)]
pub struct PascalTable {
    ring: Ring,
    q: Elem,
    q_powers: Vec<Elem>,
    rows: Vec<Vec<Elem>>,
}

impl PascalTable {
    pub fn new(ctx: &QContext) -> Self {
        PascalTable {
            ring: ctx.ring.clone(),
            q: ctx.q.clone(),
            q_powers: vec![ctx.ring.one()],
            rows: vec![vec![ctx.ring.one()]],
        }
    }

    fn q_pow(&mut self, k: usize) -> Elem {
        while self.q_powers.len() <= k {
            let next = self.q_powers.last().unwrap() * &self.q;
            self.q_powers.push(next);
        }
        self.q_powers[k].clone()
    }

    /// Grows the table to include row n.
    pub fn extend(&mut self, n: u64) {
        let n = n as usize;
        self.q_pow(n);
        while self.rows.len() <= n {
            let prev = self.rows.last().unwrap();
            let len = prev.len();
            let mut row = Vec::with_capacity(len + 1);
            row.push(self.ring.one());
            for k in 1..len {
                row.push(&prev[k - 1] + &(&self.q_powers[k] * &prev[k]));
            }
            row.push(prev[len - 1].clone());
            self.rows.push(row);
        }
    }

    pub fn get(&mut self, n: u64, k: u64) -> Elem {
        if k > n {
            return self.ring.zero();
        }
        self.extend(n);
        self.rows[n as usize][k as usize].clone()
    }

    /// Row n, already computed.
    pub fn row(&mut self, n: u64) -> &[Elem] {
        self.extend(n);
        &self.rows[n as usize]
    }
}

#[cfg(test)]
mod tests;
