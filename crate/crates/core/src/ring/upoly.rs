//! Dense univariate polynomial arithmetic with coefficients in a runtime base
//! ring. Vectors are kept trimmed (no trailing zeros).

use super::{Repr, Ring};

pub(crate) fn trim(base: &Ring, mut v: Vec<Repr>) -> Vec<Repr> {
    while v.last().is_some_and(|c| base.is_zero_r(c)) {
        v.pop();
    }
    v
}

pub(crate) fn add(base: &Ring, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let n = a.len().max(b.len());
    let zero = base.zero_r();
    let v = (0..n)
        .map(|i| base.add_r(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(base, v)
}

pub(crate) fn neg(base: &Ring, a: &[Repr]) -> Vec<Repr> {
    a.iter().map(|c| base.neg_r(c)).collect()
}

pub(crate) fn scale(base: &Ring, c: &Repr, a: &[Repr]) -> Vec<Repr> {
    trim(base, a.iter().map(|x| base.mul_r(c, x)).collect())
}

pub(crate) fn mul(base: &Ring, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![base.zero_r(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if base.is_zero_r(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if base.is_zero_r(y) {
                continue;
            }
            v[i + j] = base.add_r(&v[i + j], &base.mul_r(x, y));
        }
    }
    trim(base, v)
}

/// Remainder modulo `m`, whose leading coefficient must be a unit of `base`.
pub(crate) fn rem(base: &Ring, a: &[Repr], m: &[Repr]) -> Vec<Repr> {
    divrem(base, a, m).1
}

pub(crate) fn divrem(base: &Ring, a: &[Repr], m: &[Repr]) -> (Vec<Repr>, Vec<Repr>) {
    let dm = m.len() - 1;
    if a.len() <= dm {
        return (Vec::new(), a.to_vec());
    }
    let inv = base
        .inv_r(&m[dm])
        .expect("divisor leading coefficient must be a unit");
    let mut r = a.to_vec();
    let mut q = vec![base.zero_r(); a.len() - dm];
    for i in (0..q.len()).rev() {
        let c = base.mul_r(&r[i + dm], &inv);
        if base.is_zero_r(&c) {
            continue;
        }
        for (j, mc) in m.iter().enumerate() {
            r[i + j] = base.sub_r(&r[i + j], &base.mul_r(&c, mc));
        }
        q[i] = c;
    }
    r.truncate(dm);
    (trim(base, q), trim(base, r))
}
