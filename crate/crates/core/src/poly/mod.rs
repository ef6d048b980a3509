//! Binary forms with exact coefficients.
//!
//! A [`BinaryForm`] of degree `d` stores `d + 1` coefficients where entry `i`
//! multiplies `T0^i T1^(d-i)`. The point `[T0 : T1] = [r : 1]` is the root of
//! `T0 - r T1`; the point at infinity `[1 : 0]` is the root of `T1`, and is
//! treated exactly like any finite place.

pub(crate) mod integer;
pub(crate) mod place;
pub(crate) mod univariate;

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::ExactField;

pub use place::{place_decompose, Order, Place, Profile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("degree mismatch: {left} vs {right}")]
    Degree { left: usize, right: usize },
    #[error("zero input where a nonzero form is required")]
    ZeroInput,
    #[error("division is not exact")]
    Divisibility,
    #[error("a binary form needs at least one coefficient")]
    Empty,
    #[error("expected a nonconstant squarefree form")]
    NotSquarefree,
}

/// A point of the projective line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P1Point<F> {
    /// `[r : 1]`
    Affine(F),
    /// `[1 : 0]`
    Infinity,
}

impl<F: ExactField> P1Point<F> {
    /// The normalized linear form vanishing at this point.
    pub fn linear_form(&self) -> BinaryForm<F> {
        match self {
            P1Point::Affine(r) => BinaryForm::from_coeffs(vec![-r.clone(), F::one()]),
            P1Point::Infinity => BinaryForm::from_coeffs(vec![F::one(), F::zero()]),
        }
    }
}

impl<F: fmt::Display> fmt::Display for P1Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Affine(r) => write!(f, "{r}"),
            P1Point::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm<F> {
    coeffs: Vec<F>,
}

impl<F: ExactField> PartialOrd for BinaryForm<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then coefficients from `T1^d` upwards.
impl<F: ExactField> Ord for BinaryForm<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<F: ExactField> BinaryForm<F> {
    pub fn new(coeffs: Vec<F>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Empty);
        }
        Ok(Self { coeffs })
    }

    /// Panics on an empty vector; for internal and literal construction.
    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        Self::new(coeffs).expect("binary form needs at least one coefficient")
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![F::zero(); degree + 1],
        }
    }

    pub fn constant(c: F) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// `c · T0^i · T1^(degree - i)`
    pub fn monomial(degree: usize, i: usize, c: F) -> Self {
        assert!(i <= degree, "monomial exponent exceeds degree");
        let mut f = Self::zero(degree);
        f.coeffs[i] = c;
        f
    }

    pub fn t0() -> Self {
        Self::monomial(1, 1, F::one())
    }

    pub fn t1() -> Self {
        Self::monomial(1, 0, F::one())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn eval(&self, t0: &F, t1: &F) -> F {
        let d = self.degree();
        let mut sum = F::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            sum = sum + c.clone() * pow(t0, i) * pow(t1, d - i);
        }
        sum
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_degree(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_degree(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    fn check_same_degree(&self, other: &Self) -> Result<(), PolyError> {
        if self.degree() != other.degree() {
            return Err(PolyError::Degree {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![F::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Vanishing order at `[0 : 1]`, i.e. the power of `T0` dividing the form.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Vanishing order at `[1 : 0]`, i.e. the power of `T1` dividing the form.
    pub fn order_at_infinity(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map(|top| self.degree() - top)
    }

    /// Splits `f = T1^a · F` and returns `(F(x, 1), a)`.
    pub(crate) fn dehomogenize(&self) -> (Vec<F>, usize) {
        let mut p = self.coeffs.clone();
        univariate::trim(&mut p);
        let a = self.degree() + 1 - p.len();
        (p, a)
    }

    /// Inverse of [`Self::dehomogenize`] at the given total degree; the
    /// missing top coefficients are the `T1` power.
    pub(crate) fn homogenize(p: &[F], degree: usize) -> Self {
        let dp = univariate::degree(p).unwrap_or(0);
        assert!(dp <= degree, "homogenize: degree too small");
        let mut coeffs = vec![F::zero(); degree + 1];
        for (i, c) in p.iter().enumerate().take(dp + 1) {
            coeffs[i] = c.clone();
        }
        Self { coeffs }
    }

    /// Scales so the highest-index nonzero coefficient is one.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(top) if !self.coeffs[top].is_one() => {
                let lead = self.coeffs[top].clone();
                Self {
                    coeffs: self
                        .coeffs
                        .iter()
                        .map(|c| c.clone() / lead.clone())
                        .collect(),
                }
            }
            _ => self.clone(),
        }
    }

    /// The leading nonzero coefficient used by [`Self::normalized`].
    pub fn leading_coeff(&self) -> Option<&F> {
        self.coeffs.iter().rev().find(|c| !c.is_zero())
    }

    /// Monic greatest common divisor over the field.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(PolyError::ZeroInput),
            (true, false) => return Ok(other.normalized()),
            (false, true) => return Ok(self.normalized()),
            _ => {}
        }
        let (p, a) = self.dehomogenize();
        let (q, b) = other.dehomogenize();
        let g = univariate::gcd(&p, &q);
        let t1 = a.min(b);
        let deg = univariate::degree(&g).unwrap_or(0) + t1;
        Ok(Self::homogenize(&g, deg))
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        if divisor.is_zero() || divisor.degree() > self.degree() {
            return Err(PolyError::Divisibility);
        }
        let out_deg = self.degree() - divisor.degree();
        if self.is_zero() {
            return Ok(Self::zero(out_deg));
        }
        let (p, a) = self.dehomogenize();
        let (q, b) = divisor.dehomogenize();
        if b > a {
            return Err(PolyError::Divisibility);
        }
        let (quot, rem) = univariate::div_rem(&p, &q);
        if !rem.is_empty() {
            return Err(PolyError::Divisibility);
        }
        Ok(Self::homogenize(&quot, out_deg))
    }

    /// Largest `m` with `p^m | self`.
    pub fn multiplicity(&self, p: &Self) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        if p.is_constant() || p.is_zero() {
            return Err(PolyError::NotSquarefree);
        }
        let mut m = 0;
        let mut rest = self.clone();
        while rest.degree() >= p.degree() {
            match rest.exact_div(p) {
                Ok(q) => {
                    rest = q;
                    m += 1;
                }
                Err(_) => break,
            }
        }
        Ok(m)
    }

    /// `f(a·T0 + b·T1, c·T0 + d·T1)`.
    pub fn substitute(&self, a: &F, b: &F, c: &F, d: &F) -> Self {
        let deg = self.degree();
        let u = Self::from_coeffs(vec![b.clone(), a.clone()]);
        let v = Self::from_coeffs(vec![d.clone(), c.clone()]);
        let u_pows: Vec<Self> = (0..=deg).map(|i| u.pow(i as u32)).collect();
        let v_pows: Vec<Self> = (0..=deg).map(|i| v.pow(i as u32)).collect();
        let mut out = Self::zero(deg);
        for (i, coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let term = u_pows[i].mul(&v_pows[deg - i]).scale(coeff);
            out = out.add(&term).expect("same degree");
        }
        out
    }

    /// Squarefree decomposition `f = unit · Π f_i^{m_i}`.
    pub fn squarefree_decompose(&self) -> Result<SquarefreeDecomposition<F>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        let (p, t1_power) = self.dehomogenize();
        let unit = p[univariate::degree(&p).unwrap()].clone();
        let mut layers: Vec<(Self, u32)> = univariate::yun(&p)
            .into_iter()
            .map(|(g, m)| {
                let deg = univariate::degree(&g).unwrap();
                (Self::homogenize(&g, deg), m)
            })
            .collect();
        if t1_power > 0 {
            let m = t1_power as u32;
            match layers.iter_mut().find(|(_, k)| *k == m) {
                Some((g, _)) => *g = g.mul(&Self::t1()).normalized(),
                None => layers.push((Self::t1(), m)),
            }
            layers.sort_by_key(|(_, k)| *k);
        }
        Ok(SquarefreeDecomposition {
            unit,
            factors: layers,
        })
    }
}

fn pow<F: ExactField>(x: &F, e: usize) -> F {
    let mut out = F::one();
    for _ in 0..e {
        out = out * x.clone();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition<F> {
    pub unit: F,
    /// Squarefree, pairwise coprime, normalized factors with strictly
    /// increasing multiplicities.
    pub factors: Vec<(BinaryForm<F>, u32)>,
}

impl<F: ExactField> SquarefreeDecomposition<F> {
    pub fn reconstruct(&self) -> BinaryForm<F> {
        self.factors
            .iter()
            .fold(BinaryForm::constant(self.unit.clone()), |acc, (g, m)| {
                acc.mul(&g.pow(*m))
            })
    }
}

impl<F: ExactField> fmt::Display for BinaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mono = match (i, d - i) {
                (0, 0) => String::new(),
                (i, 0) => var("T0", i),
                (0, j) => var("T1", j),
                (i, j) => format!("{}*{}", var("T0", i), var("T1", j)),
            };
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (mono.is_empty(), mag == "1") {
                (true, _) => f.write_str(&mag)?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn var(name: &str, e: usize) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}
