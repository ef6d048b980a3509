//! Random test data: forms, Weierstrass data, marked triples, substitutions.

use rand::Rng;

use crate::fiber::{discriminant, WeierstrassData};
use crate::git::MarkedTriple;
use crate::poly::{BinaryForm, P1Point};
use crate::scalar::ExactField;

/// Coefficients are `p/q` with `|p| ≤ height` and `1 ≤ q ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub height: i64,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler { height: 5 }
    }
}

impl Sampler {
    pub fn scalar<F: ExactField, R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        F::from_ratio(
            rng.gen_range(-self.height..=self.height),
            rng.gen_range(1..=3),
        )
    }

    pub fn nonzero<F: ExactField, R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        loop {
            let x: F = self.scalar(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A form whose extreme coefficients are nonzero, so it vanishes
    /// neither at `0` nor at `∞`.
    pub fn form<F: ExactField, R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        degree: usize,
    ) -> BinaryForm<F> {
        let coeffs = (0..=degree)
            .map(|i| {
                if i == 0 || i == degree {
                    self.nonzero(rng)
                } else {
                    self.scalar(rng)
                }
            })
            .collect();
        BinaryForm::from_coeffs(coeffs)
    }

    /// A point of `P¹`, at infinity one time in six.
    pub fn point<F: ExactField, R: Rng + ?Sized>(&self, rng: &mut R) -> P1Point<F> {
        if rng.gen_ratio(1, 6) {
            P1Point::Infinity
        } else {
            P1Point::Affine(self.scalar(rng))
        }
    }

    /// Weierstrass data with nonconstant `j`.
    pub fn weierstrass<F: ExactField, R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: u32,
    ) -> WeierstrassData<F> {
        loop {
            let a = self.form(rng, 4 * n as usize);
            let b = self.form(rng, 6 * n as usize);
            let w = WeierstrassData::new(n, a, b).expect("degrees match");
            if !is_isotrivial(&w) {
                return w;
            }
        }
    }

    /// Weierstrass data with `A` and `B` vanishing to orders at least
    /// `v_a` and `v_b` at `point`; an order past the degree makes the form zero.
    pub fn planted<F: ExactField, R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: u32,
        point: &P1Point<F>,
        v_a: u32,
        v_b: u32,
    ) -> WeierstrassData<F> {
        let t = point.linear_form();
        let mut part = |degree: usize, v: u32| {
            if v as usize > degree {
                BinaryForm::zero(degree)
            } else {
                t.pow(v).mul(&self.form(rng, degree - v as usize))
            }
        };
        let a = part(4 * n as usize, v_a);
        let b = part(6 * n as usize, v_b);
        WeierstrassData::new(n, a, b).expect("degrees match")
    }

    /// A marked triple with marker at a random point.
    pub fn triple<F: ExactField, R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        w: WeierstrassData<F>,
    ) -> MarkedTriple<F> {
        let l = self.point(rng).linear_form().scale(&self.nonzero(rng));
        MarkedTriple::new(w, l).expect("linear marker")
    }

    /// `(a, b, c, d)` with `ad - bc = 1`.
    pub fn sl2<F: ExactField, R: Rng + ?Sized>(&self, rng: &mut R) -> (F, F, F, F) {
        let a: F = self.nonzero(rng);
        let b: F = self.scalar(rng);
        let c: F = self.scalar(rng);
        let d = (F::one() + b.clone() * c.clone()) / a.clone();
        (a, b, c, d)
    }
}

/// `j` is constant: `A³` and `B²` are proportional, or `Δ ≡ 0`.
pub fn is_isotrivial<F: ExactField>(w: &WeierstrassData<F>) -> bool {
    if w.a().is_zero() || w.b().is_zero() || discriminant(w).is_zero() {
        return true;
    }
    w.a().pow(3).normalized() == w.b().pow(2).normalized()
}
