//! Dense univariate helpers on ascending coefficient vectors.
//!
//! Binary forms are reduced to these by setting `T1 = 1`; the homogeneous
//! layer keeps track of the powers of `T1` separately.

use crate::scalar::ExactField;

pub(crate) fn trim<F: ExactField>(p: &mut Vec<F>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a trimmed polynomial; `None` for zero.
pub(crate) fn degree<F: ExactField>(p: &[F]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Long division. `b` must be nonzero and trimmed.
pub(crate) fn div_rem<F: ExactField>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut rem: Vec<F> = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![F::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = rem[dr].clone() / lead.clone();
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            if !bj.is_zero() {
                rem[shift + j] = rem[shift + j].clone() - c.clone() * bj.clone();
            }
        }
        quot[shift] = c;
        rem.truncate(dr);
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn make_monic<F: ExactField>(p: &mut [F]) {
    if let Some(d) = degree(p) {
        let lead = p[d].clone();
        if !lead.is_one() {
            for c in p.iter_mut() {
                *c = c.clone() / lead.clone();
            }
        }
    }
}

/// Monic gcd; `gcd(0, 0)` is the zero polynomial.
pub(crate) fn gcd<F: ExactField>(a: &[F], b: &[F]) -> Vec<F> {
    F::poly_gcd(a, b)
}

/// [`gcd`] by the Euclidean algorithm with monic remainders.
pub(crate) fn euclid_gcd<F: ExactField>(a: &[F], b: &[F]) -> Vec<F> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, mut r) = div_rem(&x, &y);
        // Keep remainders monic so coefficient growth stays bounded.
        make_monic(&mut r);
        x = y;
        y = r;
    }
    make_monic(&mut x);
    x
}

pub(crate) fn derivative<F: ExactField>(p: &[F]) -> Vec<F> {
    let mut out: Vec<F> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * F::from_i64(i as i64))
        .collect();
    trim(&mut out);
    out
}

/// Yun's squarefree factorization of a nonzero polynomial of positive degree.
///
/// Returns monic factors `(g_i, i)` with `p = lc · Π g_i^i`; factors equal to
/// one are dropped.
pub(crate) fn yun<F: ExactField>(p: &[F]) -> Vec<(Vec<F>, u32)> {
    let mut out = Vec::new();
    if degree(p).unwrap_or(0) == 0 {
        return out;
    }
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let (mut b, _) = div_rem(p, &a0);
    let (mut c, _) = div_rem(&dp, &a0);
    make_monic(&mut b);
    // c was divided by the same monic a0, rescale to match b's normalization.
    let lc_p = p[degree(p).unwrap()].clone();
    for x in c.iter_mut() {
        *x = x.clone() / lc_p.clone();
    }
    let mut i = 1u32;
    loop {
        let db = derivative(&b);
        let mut d: Vec<F> = c
            .iter()
            .cloned()
            .chain(std::iter::repeat(F::zero()))
            .zip(db.iter().cloned().chain(std::iter::repeat(F::zero())))
            .take(c.len().max(db.len()))
            .map(|(x, y)| x - y)
            .collect();
        trim(&mut d);
        let a = gcd(&b, &d);
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        let (nb, _) = div_rem(&b, &a);
        let (nc, _) = div_rem(&d, &a);
        b = nb;
        c = nc;
        i += 1;
        if degree(&b).unwrap_or(0) == 0 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_i64(x)).collect()
    }

    #[test]
    fn division_round_trips() {
        let a = q(&[-1, 0, 1]);
        let b = q(&[1, 1]);
        let (qq, r) = div_rem(&a, &b);
        assert!(r.is_empty());
        assert_eq!(qq, q(&[-1, 1]));
    }

    #[test]
    fn yun_on_repeated_factor() {
        // (x - 1)^2 (x + 1) = x^3 - x^2 - x + 1
        let p = q(&[1, -1, -1, 1]);
        let f = yun(&p);
        assert_eq!(f, vec![(q(&[1, 1]), 1), (q(&[-1, 1]), 2)]);
    }
}
