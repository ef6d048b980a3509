//! GIT stability of Weierstrass data with a marked fiber.

use std::collections::BTreeMap;

use crate::fiber::{classify_all, discriminant, FiberError, FiberType, WeierstrassData};
use crate::poly::{place_decompose, BinaryForm, Order, P1Point, Place, PolyError, Profile};
use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GitError {
    #[error("the marker must be a nonzero linear form, got degree {0}")]
    Marker(usize),
    #[error("boundary classification is only defined for N = 2, got N = {0}")]
    NotK3(u32),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(A, B, l)`: Weierstrass data with a marked fiber at the root of `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTriple<F> {
    w: WeierstrassData<F>,
    l: BinaryForm<F>,
}

impl<F: ExactField> MarkedTriple<F> {
    pub fn new(w: WeierstrassData<F>, l: BinaryForm<F>) -> Result<Self, GitError> {
        if l.degree() != 1 || l.is_zero() {
            return Err(GitError::Marker(l.degree()));
        }
        Ok(Self { w, l })
    }

    pub fn data(&self) -> &WeierstrassData<F> {
        &self.w
    }

    pub fn marker(&self) -> &BinaryForm<F> {
        &self.l
    }

    pub fn marked_point(&self) -> P1Point<F> {
        root_of_linear(&self.l)
    }

    pub fn substitute(&self, a: &F, b: &F, c: &F, d: &F) -> Self {
        Self {
            w: self.w.substitute(a, b, c, d),
            l: self.l.substitute(a, b, c, d),
        }
    }

    /// `(λ⁴A, λ⁶B, μl)`
    pub fn rescale(&self, lambda: &F, mu: &F) -> Self {
        Self {
            w: self.w.rescale(lambda),
            l: self.l.scale(mu),
        }
    }
}

fn root_of_linear<F: ExactField>(l: &BinaryForm<F>) -> P1Point<F> {
    let (c0, c1) = (l.coeff(0), l.coeff(1));
    if c1.is_zero() {
        P1Point::Infinity
    } else {
        P1Point::Affine(-c0.clone() / c1.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<F> {
    pub place: Place<F>,
    pub v_l: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict<F> {
    pub status: Stability,
    pub witness: Option<Witness<F>>,
}

impl<F> StabilityVerdict<F> {
    fn from_witness(witness: Option<Witness<F>>) -> Self {
        let status = match witness {
            Some(_) => Stability::Unstable,
            None => Stability::Stable,
        };
        Self { status, witness }
    }
}

/// How the second destabilizing condition is read.
///
/// `Proof` is the case split of the Hilbert–Mumford computation. `Statement`
/// additionally asks for one of the two orders to be an equality; since the
/// strict case is already destabilizing the two give the same verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GitCriterion {
    #[default]
    Proof,
    Statement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GitBoundaryClass {
    InteriorAde,
    SlcJinf,
    LLocus,
    PolystableCorner,
    Unstable,
}

/// Minimality in Miranda's sense: no place with `vA ≥ 4` and `vB ≥ 6`.
pub fn miranda_minimal<F: ExactField>(w: &WeierstrassData<F>) -> Result<bool, GitError> {
    Ok(place_decompose(w.a(), w.b())?
        .iter()
        .all(|p| !p.profile.v_a.exceeds(3) || !p.profile.v_b.exceeds(5)))
}

fn destabilizes(profile: &Profile, v_l: u32, n: u32, criterion: GitCriterion) -> bool {
    let (va, vb) = (profile.v_a, profile.v_b);
    if va.exceeds(2 * n) && vb.exceeds(3 * n) {
        return true;
    }
    if v_l != 1 || !va.at_least(2 * n) || !vb.at_least(3 * n) {
        return false;
    }
    match criterion {
        GitCriterion::Proof => true,
        GitCriterion::Statement => va == Order::Finite(2 * n) || vb == Order::Finite(3 * n),
    }
}

/// Places of `(A, B)` with the root of `l` split off and adjoined.
fn candidate_places<F: ExactField>(t: &MarkedTriple<F>) -> Result<Vec<(Place<F>, u32)>, GitError> {
    let (a, b) = (t.w.a(), t.w.b());
    let l = t.l.normalized();
    let mut out = Vec::new();
    let mut seen_l = false;
    for place in place_decompose(a, b)? {
        let common = place.form.gcd(&l)?;
        if common.is_constant() {
            out.push((place, 0));
            continue;
        }
        seen_l = true;
        let rest = place.form.exact_div(&l)?;
        if !rest.is_constant() {
            out.push((
                Place {
                    form: rest.normalized(),
                    profile: place.profile,
                },
                0,
            ));
        }
        out.push((
            Place {
                form: l.clone(),
                profile: place.profile,
            },
            1,
        ));
    }
    if !seen_l {
        let profile = Profile::at(a, b, &l)?;
        out.push((Place { form: l, profile }, 1));
    }
    out.sort_by(|x, y| x.0.form.cmp(&y.0.form));
    Ok(out)
}

/// Stability of a marked triple from vanishing orders.
pub fn marked_stability<F: ExactField>(
    t: &MarkedTriple<F>,
    criterion: GitCriterion,
) -> Result<StabilityVerdict<F>, GitError> {
    let n = t.w.n();
    let witness = candidate_places(t)?
        .into_iter()
        .find(|(p, v_l)| destabilizes(&p.profile, *v_l, n, criterion))
        .map(|(place, v_l)| Witness { place, v_l });
    Ok(StabilityVerdict::from_witness(witness))
}

/// A point handed to [`hm_oracle`]: either a rational point, whose
/// coordinates are moved explicitly, or a place of higher degree, which is
/// tested through its vanishing orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HmCandidate<F> {
    Point(P1Point<F>),
    Place(Place<F>),
}

/// The candidate list covering every root of `Δ` and of `l`.
pub fn hm_candidates<F: ExactField>(t: &MarkedTriple<F>) -> Result<Vec<HmCandidate<F>>, GitError> {
    let mut out: Vec<HmCandidate<F>> = Vec::new();
    for place in place_decompose(t.w.a(), t.w.b())? {
        if place.degree() == 1 {
            out.push(HmCandidate::Point(root_of_linear(&place.form)));
        } else {
            out.push(HmCandidate::Place(place));
        }
    }
    let q = t.marked_point();
    if !out.contains(&HmCandidate::Point(q.clone())) {
        out.push(HmCandidate::Point(q));
    }
    Ok(out)
}

/// Nonzero coordinates of a triple in coordinates where the tested point is
/// `[0 : 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmSupport {
    pub n: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    /// Coefficient of `T1` in `l` is nonzero.
    pub l0: bool,
    /// Coefficient of `T0` in `l` is nonzero.
    pub l1: bool,
}

impl HmSupport {
    fn of<F: ExactField>(n: u32, a: &BinaryForm<F>, b: &BinaryForm<F>, l: &BinaryForm<F>) -> Self {
        let support = |f: &BinaryForm<F>| -> Vec<u32> {
            f.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i as u32)
                .collect()
        };
        Self {
            n,
            a: support(a),
            b: support(b),
            l0: !l.coeff(0).is_zero(),
            l1: !l.coeff(1).is_zero(),
        }
    }

    /// Weights of all nonzero coordinates of `P(S³V ⊕ S²V) × P(V)` under
    /// `T0 ↦ λ^e T0`, `T1 ↦ λ^{-e} T1`.
    pub fn weights(&self, e: i64) -> Vec<i64> {
        let twelve_n = 12 * i64::from(self.n);
        let mut sums = Vec::new();
        for (x, &i) in self.a.iter().enumerate() {
            for (y, &j) in self.a.iter().enumerate().skip(x) {
                for &k in self.a.iter().skip(y) {
                    sums.push(2 * e * i64::from(i + j + k) - twelve_n * e);
                }
            }
        }
        for (x, &l) in self.b.iter().enumerate() {
            for &m in self.b.iter().skip(x) {
                sums.push(2 * e * i64::from(l + m) - twelve_n * e);
            }
        }
        let mut out = Vec::with_capacity(2 * sums.len());
        if self.l0 {
            out.extend(sums.iter().map(|w| w - e));
        }
        if self.l1 {
            out.extend(sums.iter().map(|w| w + e));
        }
        out
    }

    /// The one-parameter subgroup with exponent `e` destabilizes.
    pub fn destabilized_by(&self, e: i64) -> bool {
        let w = self.weights(e);
        !w.is_empty() && w.iter().all(|&x| x > 0)
    }
}

/// Moves `q` to `[0 : 1]`.
fn move_to_origin<F: ExactField>(f: &BinaryForm<F>, q: &P1Point<F>) -> BinaryForm<F> {
    let (zero, one) = (F::zero(), F::one());
    match q {
        P1Point::Affine(r) => f.substitute(&one, r, &zero, &one),
        P1Point::Infinity => f.substitute(&zero, &one, &one, &zero),
    }
}

/// Hilbert–Mumford check over the given candidates.
pub fn hm_oracle<F: ExactField>(
    t: &MarkedTriple<F>,
    candidates: &[HmCandidate<F>],
) -> Result<StabilityVerdict<F>, GitError> {
    let n = t.w.n();
    let (a, b) = (t.w.a(), t.w.b());
    let mut witnesses = Vec::new();
    for c in candidates {
        let (support, form) = match c {
            HmCandidate::Point(q) => {
                let s = HmSupport::of(
                    n,
                    &move_to_origin(a, q),
                    &move_to_origin(b, q),
                    &move_to_origin(&t.l, q),
                );
                (s, q.linear_form())
            }
            HmCandidate::Place(p) => {
                // The root of l is always tested separately as a point.
                let idx = |o: Order| o.finite().into_iter().collect::<Vec<_>>();
                let s = HmSupport {
                    n,
                    a: idx(p.profile.v_a),
                    b: idx(p.profile.v_b),
                    l0: true,
                    l1: true,
                };
                (s, p.form.clone())
            }
        };
        if support.destabilized_by(1) {
            let v_l = u32::from(!support.l0);
            let profile = match c {
                HmCandidate::Point(_) => Profile::at(a, b, &form)?,
                HmCandidate::Place(p) => p.profile,
            };
            witnesses.push(Witness {
                place: Place { form, profile },
                v_l,
            });
        }
    }
    witnesses.sort_by(|x, y| x.place.form.cmp(&y.place.form));
    Ok(StabilityVerdict::from_witness(witnesses.into_iter().next()))
}

/// Position of `(A, B)` in the GIT quotient of K3 Weierstrass data.
pub fn classify_git_boundary<F: ExactField>(
    w: &WeierstrassData<F>,
) -> Result<GitBoundaryClass, GitError> {
    if w.n() != 2 {
        return Err(GitError::NotK3(w.n()));
    }
    let reports = classify_all(w)?;
    let beyond_l = reports.iter().any(|r| {
        let p = r.place.profile;
        p.v_a.exceeds(4) && p.v_b.exceeds(6)
    });
    if beyond_l {
        return Ok(GitBoundaryClass::Unstable);
    }
    if discriminant(w).is_zero() {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for r in &reports {
            if let FiberType::N(k) = r.fiber {
                *counts.entry(k).or_default() += r.place.degree();
            }
        }
        return Ok(if counts == BTreeMap::from([(2, 2)]) {
            GitBoundaryClass::PolystableCorner
        } else {
            GitBoundaryClass::SlcJinf
        });
    }
    if reports.iter().any(|r| r.fiber == FiberType::L) {
        Ok(GitBoundaryClass::LLocus)
    } else {
        Ok(GitBoundaryClass::InteriorAde)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Form, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn triple(a: Form, b: Form, l: Form) -> MarkedTriple<Rational> {
        MarkedTriple::new(WeierstrassData::new(2, a, b).unwrap(), l).unwrap()
    }

    #[test]
    fn strict_orders_destabilize() {
        let t = triple(
            Form::monomial(8, 5, q(1)),
            Form::monomial(12, 7, q(1)),
            Form::t1(),
        );
        let v = marked_stability(&t, GitCriterion::Proof).unwrap();
        assert_eq!(v.status, Stability::Unstable);
        let w = v.witness.unwrap();
        assert_eq!(w.place.form, Form::t0());
        assert_eq!(w.place.profile, Profile::finite(5, 7, 14));
    }

    #[test]
    fn marked_boundary_orders_destabilize() {
        let a = Form::monomial(8, 4, q(1))
            .add(&Form::monomial(8, 8, q(1)))
            .unwrap();
        let b = Form::monomial(12, 6, q(1))
            .add(&Form::monomial(12, 12, q(1)))
            .unwrap();
        let t = triple(a.clone(), b.clone(), Form::t0());
        let v = marked_stability(&t, GitCriterion::Proof).unwrap();
        assert_eq!(v.status, Stability::Unstable);
        assert_eq!(v.witness.as_ref().unwrap().v_l, 1);
        // The same data marked elsewhere is stable.
        let t = triple(a, b, Form::t1());
        assert_eq!(
            marked_stability(&t, GitCriterion::Proof).unwrap().status,
            Stability::Stable
        );
    }

    #[test]
    fn weights_are_odd() {
        let s = HmSupport {
            n: 2,
            a: vec![0, 3, 8],
            b: vec![1, 12],
            l0: true,
            l1: true,
        };
        assert!(s.weights(1).iter().all(|w| w % 2 != 0));
    }

    #[test]
    fn marker_must_be_linear() {
        let w = WeierstrassData::new(2, Form::monomial(8, 0, q(1)), Form::zero(12)).unwrap();
        assert_eq!(
            MarkedTriple::new(w, Form::zero(1)),
            Err(GitError::Marker(1))
        );
    }

    #[test]
    fn boundary_needs_k3() {
        let w = WeierstrassData::new(1, Form::monomial(4, 0, q(1)), Form::zero(6)).unwrap();
        assert_eq!(classify_git_boundary(&w), Err(GitError::NotK3(1)));
    }
}
