//! Singular fibers of Weierstrass fibrations `y² = x³ + A x + B`.

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{place_decompose, BinaryForm, Order, P1Point, Place, PolyError, Profile};
use crate::scalar::ExactField;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiberError {
    #[error("{which} has degree {found}, expected {expected}")]
    Degree {
        which: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("isotrivial profile {0} is not of the form (2k, 3k, inf)")]
    MalformedIsotrivial(Profile),
    #[error("profile {0} matches no fiber type")]
    InconsistentProfile(Profile),
    #[error("Weierstrass data must have N >= 1")]
    ZeroN,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberType {
    Smooth,
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
    L,
    N(u32),
    NonMinimal,
}

impl FiberType {
    /// Semi-log canonical in the unmarked surface.
    pub fn is_slc(self) -> bool {
        match self {
            FiberType::NonMinimal => false,
            FiberType::N(k) => k <= 2,
            _ => true,
        }
    }

    /// Log canonical threshold zero: slc, but any positive marking breaks it.
    pub fn lct_zero(self) -> bool {
        matches!(self, FiberType::L | FiberType::N(2))
    }

    pub fn is_nodal(self) -> bool {
        matches!(self, FiberType::I(_) | FiberType::N(0))
    }

    /// Kodaira types whose twisted model is a star fiber or a twisted N1.
    pub fn is_star(self) -> bool {
        matches!(
            self,
            FiberType::IStar(_) | FiberType::IIStar | FiberType::IIIStar | FiberType::IVStar
        )
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::Smooth => f.write_str("Smooth"),
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::IStar(n) => write!(f, "I{n}*"),
            FiberType::II => f.write_str("II"),
            FiberType::III => f.write_str("III"),
            FiberType::IV => f.write_str("IV"),
            FiberType::IIStar => f.write_str("II*"),
            FiberType::IIIStar => f.write_str("III*"),
            FiberType::IVStar => f.write_str("IV*"),
            FiberType::L => f.write_str("L"),
            FiberType::N(k) => write!(f, "N{k}"),
            FiberType::NonMinimal => f.write_str("NonMinimal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognized fiber type `{0}`")]
pub struct FiberParseError(pub String);

impl std::str::FromStr for FiberType {
    type Err = FiberParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FiberParseError(s.to_string());
        let num = |t: &str| t.parse::<u32>().map_err(|_| err());
        Ok(match s {
            "Smooth" => FiberType::Smooth,
            "II" => FiberType::II,
            "III" => FiberType::III,
            "IV" => FiberType::IV,
            "II*" => FiberType::IIStar,
            "III*" => FiberType::IIIStar,
            "IV*" => FiberType::IVStar,
            "L" => FiberType::L,
            "NonMinimal" => FiberType::NonMinimal,
            _ => {
                if let Some(rest) = s.strip_prefix('N') {
                    FiberType::N(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('I') {
                    match rest.strip_suffix('*') {
                        Some(k) => FiberType::IStar(num(k)?),
                        None => {
                            let n = num(rest)?;
                            if n == 0 {
                                return Err(err());
                            }
                            FiberType::I(n)
                        }
                    }
                } else {
                    return Err(err());
                }
            }
        })
    }
}

/// `(A, B)` of degrees `4N` and `6N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassData<F> {
    n: u32,
    a: BinaryForm<F>,
    b: BinaryForm<F>,
}

impl<F: ExactField> WeierstrassData<F> {
    pub fn new(n: u32, a: BinaryForm<F>, b: BinaryForm<F>) -> Result<Self, FiberError> {
        if n == 0 {
            return Err(FiberError::ZeroN);
        }
        let (da, db) = (4 * n as usize, 6 * n as usize);
        if a.degree() != da {
            return Err(FiberError::Degree {
                which: "A",
                expected: da,
                found: a.degree(),
            });
        }
        if b.degree() != db {
            return Err(FiberError::Degree {
                which: "B",
                expected: db,
                found: b.degree(),
            });
        }
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::ZeroInput.into());
        }
        Ok(Self { n, a, b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &BinaryForm<F> {
        &self.a
    }

    pub fn b(&self) -> &BinaryForm<F> {
        &self.b
    }

    /// Pulls back along `(T0, T1) -> (a T0 + b T1, c T0 + d T1)`.
    pub fn substitute(&self, a: &F, b: &F, c: &F, d: &F) -> Self {
        Self {
            n: self.n,
            a: self.a.substitute(a, b, c, d),
            b: self.b.substitute(a, b, c, d),
        }
    }

    /// `(λ⁴A, λ⁶B)`
    pub fn rescale(&self, lambda: &F) -> Self {
        let l2 = lambda.clone() * lambda.clone();
        let l4 = l2.clone() * l2.clone();
        Self {
            n: self.n,
            a: self.a.scale(&l4),
            b: self.b.scale(&(l4 * l2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport<F> {
    pub place: Place<F>,
    pub fiber: FiberType,
    pub slc: bool,
    pub lct_zero: bool,
    /// Equals `place.profile.v_delta`; for type L this is the residual order.
    pub discriminant_mult: Order,
}

pub fn discriminant<F: ExactField>(w: &WeierstrassData<F>) -> BinaryForm<F> {
    crate::poly::place::discriminant(&w.a, &w.b).expect("degrees 12N match")
}

/// Kodaira type of a place from its vanishing orders.
pub fn classify_place(profile: Profile, isotrivial_jinf: bool) -> Result<FiberType, FiberError> {
    if isotrivial_jinf != profile.v_delta.is_infinite() {
        return Err(FiberError::InconsistentProfile(profile));
    }
    if isotrivial_jinf {
        return match (profile.v_a, profile.v_b) {
            (Order::Finite(va), Order::Finite(vb)) if va % 2 == 0 && vb == 3 * va / 2 => {
                Ok(FiberType::N(va / 2))
            }
            _ => Err(FiberError::MalformedIsotrivial(profile)),
        };
    }
    let bad = || FiberError::InconsistentProfile(profile);
    let vd = profile.v_delta.finite().expect("finite discriminant order");
    let va = profile.v_a.finite();
    let vb = profile.v_b.finite();
    // Orders of 4A^3 and 27B^2; a zero form contributes nothing.
    let m = match (va, vb) {
        (Some(x), Some(y)) => (3 * x).min(2 * y),
        (Some(x), None) => 3 * x,
        (None, Some(y)) => 2 * y,
        (None, None) => return Err(bad()),
    };
    // Unless the two terms have equal order they cannot cancel.
    let can_cancel = matches!((va, vb), (Some(x), Some(y)) if 3 * x == 2 * y);
    if can_cancel {
        if vd < m {
            return Err(bad());
        }
    } else if vd != m {
        return Err(bad());
    }
    if m > 12 {
        return Ok(FiberType::NonMinimal);
    }
    if m == 12 {
        return Ok(FiberType::L);
    }
    if vd == 0 {
        return Ok(FiberType::Smooth);
    }
    let va = va.unwrap_or(u32::MAX);
    let vb = vb.unwrap_or(u32::MAX);
    Ok(match (va, vb) {
        (0, 0) => FiberType::I(vd),
        (_, 1) => FiberType::II,
        (1, _) => FiberType::III,
        (_, 2) => FiberType::IV,
        (2, 3) => FiberType::IStar(vd - 6),
        (_, 3) | (2, _) => FiberType::IStar(0),
        (_, 4) => FiberType::IVStar,
        (3, _) => FiberType::IIIStar,
        (_, 5) => FiberType::IIStar,
        _ => return Err(bad()),
    })
}

/// Classifies every singular fiber, sorted by place form.
pub fn classify_all<F: ExactField>(
    w: &WeierstrassData<F>,
) -> Result<Vec<FiberReport<F>>, FiberError> {
    let isotrivial = discriminant(w).is_zero();
    place_decompose(&w.a, &w.b)?
        .into_iter()
        .map(|place| {
            let fiber = classify_place(place.profile, isotrivial)?;
            Ok(FiberReport {
                discriminant_mult: place.profile.v_delta,
                place,
                fiber,
                slc: fiber.is_slc(),
                lct_zero: fiber.lct_zero(),
            })
        })
        .collect()
}

/// `Σ a_k · k / 2`, the degree of the fundamental line bundle of an
/// isotrivial `j = ∞` fibration with `a_k` fibers of type `N_k`.
pub fn deg_l_jinfty(fiber_counts: &BTreeMap<u32, u32>) -> Rational {
    let twice: i64 = fiber_counts
        .iter()
        .map(|(&k, &a)| i64::from(k) * i64::from(a))
        .sum();
    Rational::from_ratio(twice, 2)
}

/// All slc `N_k` configurations (`k ∈ {1, 2}`) with `deg L = 2`.
pub fn k3_jinfty_configurations() -> Vec<BTreeMap<u32, u32>> {
    let target = Rational::from_i64(2);
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    search_configurations(1, 2, &target, &mut current, &mut out);
    out
}

fn search_configurations(
    k: u32,
    max_k: u32,
    target: &Rational,
    current: &mut BTreeMap<u32, u32>,
    out: &mut Vec<BTreeMap<u32, u32>>,
) {
    let so_far = deg_l_jinfty(current);
    if k > max_k {
        if &so_far == target {
            out.push(current.clone());
        }
        return;
    }
    let mut count = 0u32;
    while deg_l_jinfty(&BTreeMap::from([(k, count)])) + so_far.clone() <= *target {
        count += 1;
    }
    for c in (0..count).rev() {
        if c > 0 {
            current.insert(k, c);
        } else {
            current.remove(&k);
        }
        search_configurations(k + 1, max_k, target, current, out);
    }
    current.remove(&k);
}

/// Change in `deg L` when an `N_k` fiber becomes `N_{k+2}`.
pub fn nk_surgery_degl_delta() -> u32 {
    let before = deg_l_jinfty(&BTreeMap::from([(1, 1)]));
    let after = deg_l_jinfty(&BTreeMap::from([(3, 1)]));
    let delta = after - before;
    assert!(delta.is_integer());
    u32::try_from(delta.to_integer()).expect("positive")
}

/// Isotrivial `j = ∞` data with an `N_k` fiber at each given point:
/// `A = -1/3 Π t_i^{2k_i}`, `B = 2/27 Π t_i^{3k_i}`.
pub fn make_nk_data<F: ExactField>(
    n: u32,
    fibers: &[(P1Point<F>, u32)],
) -> Result<WeierstrassData<F>, FiberError> {
    let total: u32 = fibers.iter().map(|(_, k)| k).sum();
    if total != 2 * n {
        return Err(FiberError::Degree {
            which: "A",
            expected: 4 * n as usize,
            found: 2 * total as usize,
        });
    }
    let mut a = BinaryForm::constant(-F::from_ratio(1, 3));
    let mut b = BinaryForm::constant(F::from_ratio(2, 27));
    for (point, k) in fibers {
        let t = point.linear_form();
        a = a.mul(&t.pow(2 * k));
        b = b.mul(&t.pow(3 * k));
    }
    WeierstrassData::new(n, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Form;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn table_rows() {
        let c = |a, b, d| classify_place(Profile::finite(a, b, d), false).unwrap();
        assert_eq!(c(0, 0, 1), FiberType::I(1));
        assert_eq!(c(0, 0, 0), FiberType::Smooth);
        assert_eq!(c(1, 1, 2), FiberType::II);
        assert_eq!(c(1, 2, 3), FiberType::III);
        assert_eq!(c(2, 2, 4), FiberType::IV);
        assert_eq!(c(2, 3, 6), FiberType::IStar(0));
        assert_eq!(c(2, 3, 9), FiberType::IStar(3));
        assert_eq!(c(3, 3, 6), FiberType::IStar(0));
        assert_eq!(c(3, 4, 8), FiberType::IVStar);
        assert_eq!(c(3, 5, 9), FiberType::IIIStar);
        assert_eq!(c(4, 5, 10), FiberType::IIStar);
        assert_eq!(c(4, 6, 12), FiberType::L);
        assert_eq!(c(4, 7, 12), FiberType::L);
        assert_eq!(c(5, 7, 14), FiberType::NonMinimal);
    }

    #[test]
    fn isotrivial_rows() {
        let inf = Order::Infinite;
        let p = |a, b| Profile::new(Order::Finite(a), Order::Finite(b), inf);
        assert_eq!(classify_place(p(2, 3), true).unwrap(), FiberType::N(1));
        let n3 = classify_place(p(6, 9), true).unwrap();
        assert_eq!(n3, FiberType::N(3));
        assert!(!n3.is_slc());
        assert_eq!(
            classify_place(p(3, 4), true),
            Err(FiberError::MalformedIsotrivial(p(3, 4)))
        );
    }

    #[test]
    fn inconsistent_profiles_are_errors() {
        let bad = |a, b, d| classify_place(Profile::finite(a, b, d), false);
        assert!(matches!(
            bad(1, 1, 3),
            Err(FiberError::InconsistentProfile(_))
        ));
        assert!(matches!(
            bad(0, 2, 1),
            Err(FiberError::InconsistentProfile(_))
        ));
        assert!(matches!(
            bad(2, 3, 5),
            Err(FiberError::InconsistentProfile(_))
        ));
    }

    #[test]
    fn zero_a_with_pure_b() {
        let w = WeierstrassData::new(2, Form::zero(8), Form::monomial(12, 12, q(1))).unwrap();
        assert_eq!(discriminant(&w), Form::monomial(24, 24, q(27)));
    }

    #[test]
    fn configurations_in_order() {
        let got = k3_jinfty_configurations();
        assert_eq!(
            got,
            vec![
                BTreeMap::from([(1, 4)]),
                BTreeMap::from([(1, 2), (2, 1)]),
                BTreeMap::from([(2, 2)]),
            ]
        );
        assert_eq!(deg_l_jinfty(&BTreeMap::new()), q(0));
    }

    #[test]
    fn surgery_delta() {
        assert_eq!(nk_surgery_degl_delta(), 1);
        let lhs = deg_l_jinfty(&BTreeMap::from([(3, 1), (1, 1)]));
        let rhs = deg_l_jinfty(&BTreeMap::from([(1, 2)]));
        assert_eq!(lhs - rhs, q(1));
    }

    #[test]
    fn nk_data_budget() {
        let err = make_nk_data::<Rational>(2, &[(P1Point::Infinity, 1)]);
        assert!(matches!(err, Err(FiberError::Degree { .. })));
    }

    #[test]
    fn fiber_names_round_trip() {
        for t in [
            FiberType::Smooth,
            FiberType::I(3),
            FiberType::IStar(0),
            FiberType::IIIStar,
            FiberType::N(2),
            FiberType::L,
        ] {
            assert_eq!(t.to_string().parse::<FiberType>().unwrap(), t);
        }
        assert!("I0".parse::<FiberType>().is_err());
    }
}
