//! Gcd of rational polynomials through integer arithmetic.
//!
//! Remainder sequences over the rationals normalize every coefficient with a
//! gcd. Working with primitive integer polynomials and pseudo-remainders
//! avoids that, and a gcd modulo a prime settles the common coprime case
//! without any big-number work.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 998_244_353, 1_000_000_007];

/// Primitive integer multiple with positive leading coefficient; empty for zero.
pub(crate) fn primitive(p: &[BigRational]) -> Vec<BigInt> {
    let mut denom = BigInt::one();
    for c in p {
        denom = denom.lcm(c.denom());
    }
    let mut out: Vec<BigInt> = p.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
    make_primitive(&mut out);
    out
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn make_primitive(p: &mut Vec<BigInt>) {
    trim(p);
    let Some(lead) = p.last() else {
        return;
    };
    let mut content = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if lead.is_negative() {
        content = -content;
    }
    if !content.is_one() {
        for c in p.iter_mut() {
            *c = &*c / &content;
        }
    }
}

/// `lc(b)^k · a mod b` for the least useful `k`, made primitive.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    while rem.len() > db {
        let top = rem.len() - 1;
        let c = rem[top].clone();
        let shift = top - db;
        for x in rem.iter_mut() {
            *x = &*x * lead;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        trim(&mut rem);
    }
    make_primitive(&mut rem);
    rem
}

fn reduce(p: &[BigInt], m: u64) -> Vec<u64> {
    let m_big = BigInt::from(m);
    p.iter()
        .map(|c| {
            c.mod_floor(&m_big)
                .to_u64()
                .expect("reduced below the modulus")
        })
        .collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, m - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

fn degree_of_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, m: u64) -> usize {
    let trim = |p: &mut Vec<u64>| {
        while p.last() == Some(&0) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let db = b.len() - 1;
        let inv = inv_mod(b[db], m);
        while a.len() > db {
            let top = a.len() - 1;
            let c = mul_mod(a[top], inv, m);
            for (j, &bj) in b.iter().enumerate() {
                let idx = top - db + j;
                a[idx] = (a[idx] + m - mul_mod(c, bj, m)) % m;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Sufficient test for coprimality: some prime not dividing either leading
/// coefficient leaves a constant gcd.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    PRIMES.iter().any(|&m| {
        let (ra, rb) = (reduce(a, m), reduce(b, m));
        ra.last() != Some(&0) && rb.last() != Some(&0) && degree_of_gcd_mod(ra, rb, m) == 0
    })
}

/// Monic gcd of two rational polynomials; empty when both are zero.
pub(crate) fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    if !y.is_empty() && coprime_mod_p(&x, &y) {
        return vec![BigRational::one()];
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = r;
    }
    let Some(lead) = x.last().cloned() else {
        return Vec::new();
    };
    x.into_iter()
        .map(|c| BigRational::new(c, lead.clone()))
        .collect()
}

fn eval_mod(p: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    p.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// A prime not dividing the leading coefficient for which `p` stays
/// squarefree.
fn good_prime(p: &[BigInt]) -> u64 {
    let dp = derivative(p);
    (1_000u64..)
        .filter(|&m| is_prime(m))
        .find(|&m| {
            let (rp, rd) = (reduce(p, m), reduce(&dp, m));
            rp.last() != Some(&0) && degree_of_gcd_mod(rp, rd, m) == 0
        })
        .expect("a squarefree polynomial stays squarefree modulo almost every prime")
}

/// Rational roots of a squarefree polynomial in ascending coefficients.
///
/// Roots modulo a good prime are lifted by Newton iteration until
/// `lead · root`, an integer bounded by `|lead · constant|`, is determined.
pub(crate) fn rational_roots(poly: &[BigRational]) -> Vec<BigRational> {
    let mut f = primitive(poly);
    let mut roots = Vec::new();
    if f.len() < 2 {
        return roots;
    }
    if f[0].is_zero() {
        roots.push(BigRational::zero());
        f.remove(0);
    }
    if f.len() < 2 {
        return roots;
    }
    let lead = f.last().cloned().expect("nonzero");
    if f.len() == 2 {
        roots.push(BigRational::new(-f[0].clone(), lead));
        roots.sort();
        return roots;
    }
    let bound = (&lead * &f[0]).abs() * 2;
    let m = good_prime(&f);
    let m_big = BigInt::from(m);
    let df = derivative(&f);
    let residues: Vec<u64> = {
        let rf = reduce(&f, m);
        (0..m)
            .filter(|&x| {
                rf.iter()
                    .rev()
                    .fold(0, |acc, &c| (mul_mod(acc, x, m) + c) % m)
                    == 0
            })
            .collect()
    };
    for x in residues {
        let (mut r, mut modulus) = (BigInt::from(x), m_big.clone());
        while modulus <= bound {
            modulus = &modulus * &modulus;
            let inv = inv_mod_big(&eval_mod(&df, &r, &modulus), &modulus)
                .expect("simple root modulo a good prime");
            r = (&r - eval_mod(&f, &r, &modulus) * inv).mod_floor(&modulus);
        }
        let mut s = (&lead * &r).mod_floor(&modulus);
        if &s * 2 > modulus {
            s -= &modulus;
        }
        let candidate = BigRational::new(s, lead.clone());
        let value = f.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * &candidate + BigRational::from_integer(c.clone())
        });
        if value.is_zero() {
            roots.push(candidate);
        }
    }
    roots.sort();
    roots
}
