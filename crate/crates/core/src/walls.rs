//! Walls of the weighted moduli of elliptic K3 pairs, fiber models and
//! stability of the weighted base curve.

use std::fmt;

use num_traits::{One, Zero};

use crate::fiber::FiberType;
use crate::scalar::ExactField;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallError {
    #[error("{what} = {value} is out of range")]
    Range { what: &'static str, value: String },
    #[error("collision profile sums to {found}, expected {expected}")]
    Profile { expected: u32, found: u32 },
    #[error("fiber type {0} has no model transition")]
    UnsupportedFiber(FiberType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WallKind {
    /// Log canonical model of a fiber changes.
    WI,
    /// The section of some component contracts.
    WII,
    /// A component contracts.
    WIII,
}

impl fmt::Display for WallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WallKind::WI => "W_I",
            WallKind::WII => "W_II",
            WallKind::WIII => "W_III",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transition {
    /// Pseudoelliptic components form once `k` markings collide.
    PseudoellipticFlip(u32),
    /// A tree of pseudoelliptics attached along this fiber type contracts.
    ContractFiberTree(FiberType),
    /// A component ruled by the section contracts; `n` markings on it.
    RuledContraction(u32),
    /// The section flips, then the component contracts; `n` markings.
    PseudoellipticFlipThenContract(u32),
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::PseudoellipticFlip(k) => write!(f, "PseudoellipticFlip({k})"),
            Transition::ContractFiberTree(t) => write!(f, "ContractFiberTree({t})"),
            Transition::RuledContraction(n) => write!(f, "RuledContraction({n})"),
            Transition::PseudoellipticFlipThenContract(n) => {
                write!(f, "PseudoellipticFlipThenContract({n})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub value: Rational,
    pub kind: WallKind,
    pub transition: Transition,
}

/// Rows of the log canonical threshold table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LctFiber {
    II,
    III,
    IV,
    N1,
    IIStar,
    IIIStar,
    IVStar,
    /// `I_n^*` for every `n ≥ 0`.
    IStar,
}

impl LctFiber {
    pub fn of(fiber: FiberType) -> Option<LctFiber> {
        Some(match fiber {
            FiberType::II => LctFiber::II,
            FiberType::III => LctFiber::III,
            FiberType::IV => LctFiber::IV,
            FiberType::N(1) => LctFiber::N1,
            FiberType::IIStar => LctFiber::IIStar,
            FiberType::IIIStar => LctFiber::IIIStar,
            FiberType::IVStar => LctFiber::IVStar,
            FiberType::IStar(_) => LctFiber::IStar,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LctEntry {
    pub fiber: LctFiber,
    pub a0: Rational,
}

pub fn lct_table() -> Vec<LctEntry> {
    [
        (LctFiber::II, 5, 6),
        (LctFiber::III, 3, 4),
        (LctFiber::IV, 2, 3),
        (LctFiber::N1, 1, 2),
        (LctFiber::IIStar, 1, 6),
        (LctFiber::IIIStar, 1, 4),
        (LctFiber::IVStar, 1, 3),
        (LctFiber::IStar, 1, 2),
    ]
    .into_iter()
    .map(|(fiber, p, q)| LctEntry {
        fiber,
        a0: Rational::from_ratio(p, q),
    })
    .collect()
}

/// The threshold `a0` at which the fiber leaves Weierstrass form.
pub fn lct(fiber: FiberType) -> Option<Rational> {
    let row = LctFiber::of(fiber)?;
    lct_table()
        .into_iter()
        .find(|e| e.fiber == row)
        .map(|e| e.a0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberModel {
    Weierstrass,
    Intermediate,
    Twisted,
    /// Nodal and smooth fibers: every weight gives the same fiber.
    Stable,
}

/// Which model a fiber sits in at exactly `a = a0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryConvention {
    /// `a = a0` is intermediate.
    #[default]
    ClosedAbove,
    /// `a = a0` is still Weierstrass.
    OpenAbove,
}

pub fn fiber_model(
    fiber: FiberType,
    a: &Rational,
    convention: BoundaryConvention,
) -> Result<FiberModel, WallError> {
    if a < &Rational::zero() || a > &Rational::one() {
        return Err(WallError::Range {
            what: "a",
            value: a.to_string(),
        });
    }
    match fiber {
        FiberType::Smooth | FiberType::I(_) | FiberType::N(0) => return Ok(FiberModel::Stable),
        FiberType::N(2) | FiberType::L => {
            return Ok(if a.is_zero() {
                FiberModel::Weierstrass
            } else {
                FiberModel::Intermediate
            })
        }
        _ => {}
    }
    let a0 = lct(fiber).ok_or(WallError::UnsupportedFiber(fiber))?;
    let weierstrass = match convention {
        BoundaryConvention::ClosedAbove => a < &a0,
        BoundaryConvention::OpenAbove => a <= &a0,
    };
    Ok(if a.is_one() {
        FiberModel::Twisted
    } else if weierstrass {
        FiberModel::Weierstrass
    } else {
        FiberModel::Intermediate
    })
}

/// Markings absorbed when a tree attached along `fiber` contracts.
fn absorbed_markings(fiber: FiberType) -> u32 {
    match fiber {
        FiberType::II | FiberType::III | FiberType::IV => 12 - dual_delta(fiber),
        FiberType::IIStar => 10,
        FiberType::IIIStar => 9,
        FiberType::IVStar => 8,
        FiberType::IStar(k) => 6 - k,
        _ => unreachable!("no fiber tree contraction for {fiber}"),
    }
}

/// Discriminant order of the dual twisted fiber across a gluing.
fn dual_delta(fiber: FiberType) -> u32 {
    match fiber {
        FiberType::II => 10,
        FiberType::III => 9,
        FiberType::IV => 8,
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallScope {
    All,
    /// Walls with value strictly greater than the bound.
    Above(Rational),
}

fn hassett_walls() -> Vec<Wall> {
    let two = Rational::from_i64(2);
    (1..)
        .map(|k: u32| (k, Rational::from_ratio(1, i64::from(k))))
        .take_while(|(_, a)| Rational::from_i64(24) * a.clone() > two)
        .map(|(k, value)| Wall {
            value,
            kind: WallKind::WII,
            transition: Transition::PseudoellipticFlip(k),
        })
        .collect()
}

fn tree_walls() -> Vec<Wall> {
    let fibers = [
        FiberType::II,
        FiberType::III,
        FiberType::IV,
        FiberType::IIStar,
        FiberType::IIIStar,
        FiberType::IVStar,
    ]
    .into_iter()
    .chain((0..=4).map(FiberType::IStar));
    fibers
        .map(|fiber| Wall {
            value: lct(fiber).unwrap() / Rational::from_i64(i64::from(absorbed_markings(fiber))),
            kind: WallKind::WIII,
            transition: Transition::ContractFiberTree(fiber),
        })
        .collect()
}

fn example_walls() -> Vec<Wall> {
    let ruled = (13..=19).map(|n| Wall {
        value: ex1_wall_function(n).unwrap().critical_a,
        kind: WallKind::WIII,
        transition: Transition::RuledContraction(n),
    });
    let flips = (7..=14).map(|n| Wall {
        value: ex2_wall_function(n).unwrap().critical_a,
        kind: WallKind::WIII,
        transition: Transition::PseudoellipticFlipThenContract(n),
    });
    ruled.chain(flips).collect()
}

/// Every wall, sorted by value then transition.
pub fn enumerate_walls(scope: &WallScope) -> Vec<Wall> {
    let mut walls: Vec<Wall> = hassett_walls()
        .into_iter()
        .chain(tree_walls())
        .chain(example_walls())
        .filter(|w| match scope {
            WallScope::All => true,
            WallScope::Above(x) => &w.value > x,
        })
        .collect();
    walls.sort_by(|x, y| {
        x.value
            .cmp(&y.value)
            .then_with(|| x.transition.cmp(&y.transition))
    });
    walls.dedup_by(|x, y| x.value == y.value && x.transition == y.transition);
    walls
}

fn check_weight(a: &Rational) -> Result<(), WallError> {
    if a <= &Rational::zero() || a > &Rational::one() {
        return Err(WallError::Range {
            what: "a",
            value: a.to_string(),
        });
    }
    Ok(())
}

/// A chain of rational curves with `a`-weighted markings; `components[i]`
/// lists the collision classes on the `i`-th curve. Each curve needs total
/// weight above 2 counting nodes, and no class may weigh more than 1.
pub fn base_chain_stable(a: &Rational, components: &[Vec<u32>]) -> Result<bool, WallError> {
    check_weight(a)?;
    let len = components.len();
    Ok(len > 0
        && components.iter().enumerate().all(|(i, classes)| {
            let nodes = u32::from(i > 0) + u32::from(i + 1 < len);
            let points: u32 = classes.iter().sum();
            let weight = a.clone() * Rational::from_i64(i64::from(points))
                + Rational::from_i64(i64::from(nodes));
            weight > Rational::from_i64(2)
                && classes
                    .iter()
                    .all(|&c| a.clone() * Rational::from_i64(i64::from(c)) <= Rational::one())
        }))
}

/// Stability of a smooth base with `num_points` weighted markings grouped
/// into collision classes.
pub fn hassett_base_stable(
    num_points: u32,
    a: &Rational,
    collision_profile: &[u32],
) -> Result<bool, WallError> {
    let found: u32 = collision_profile.iter().sum();
    if found != num_points {
        return Err(WallError::Profile {
            expected: num_points,
            found,
        });
    }
    base_chain_stable(a, &[collision_profile.to_vec()])
}

/// Stability of a two-component base; each side lists its collision classes.
pub fn two_component_stable(
    num_points: u32,
    a: &Rational,
    side0: &[u32],
    side1: &[u32],
) -> Result<bool, WallError> {
    let found: u32 = side0.iter().chain(side1).sum();
    if found != num_points {
        return Err(WallError::Profile {
            expected: num_points,
            found,
        });
    }
    base_chain_stable(a, &[side0.to_vec(), side1.to_vec()])
}

/// `constant + slope · a`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInA {
    pub constant: Rational,
    pub slope: Rational,
}

impl LinearInA {
    fn constant(c: Rational) -> Self {
        Self {
            constant: c,
            slope: Rational::zero(),
        }
    }

    fn in_a(s: Rational) -> Self {
        Self {
            constant: Rational::zero(),
            slope: s,
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            constant: self.constant.clone() + o.constant.clone(),
            slope: self.slope.clone() + o.slope.clone(),
        }
    }

    fn scale(&self, c: &Rational) -> Self {
        Self {
            constant: self.constant.clone() * c.clone(),
            slope: self.slope.clone() * c.clone(),
        }
    }

    pub fn eval(&self, a: &Rational) -> Rational {
        self.constant.clone() + self.slope.clone() * a.clone()
    }

    /// The unique zero; `None` when constant in `a`.
    pub fn root(&self) -> Option<Rational> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-self.constant.clone() / self.slope.clone())
        }
    }
}

impl fmt::Display for LinearInA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*a", self.constant, self.slope)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionTag {
    /// The curve moves in a family ruling the component.
    RuledContraction,
    /// The curve is rigid and flips.
    Flip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallFunction {
    /// `(K + F)·A`
    pub k_dot_a: LinearInA,
    /// `(K + F)·G`
    pub k_dot_g: LinearInA,
    pub critical_a: Rational,
    pub contraction: ContractionTag,
}

// Curves: the component A, the glued fiber G, the section S, a fiber f.
const A: usize = 0;
const G: usize = 1;
const S: usize = 2;
const FIB: usize = 3;

struct LocalSurface {
    pairing: [[Rational; 4]; 4],
}

impl LocalSurface {
    /// Fills the pairing from the local data; `S` and `f` pair as a section
    /// and a fiber on a ruled neighborhood.
    fn new(a2: Rational, ag: Rational, g2: Rational) -> Self {
        let q = |n, d| Rational::from_ratio(n, d);
        let mut m: [[Rational; 4]; 4] = Default::default();
        let mut set = |i: usize, j: usize, v: Rational| {
            m[i][j] = v.clone();
            m[j][i] = v;
        };
        set(A, A, a2);
        set(A, G, ag);
        set(G, G, g2);
        set(S, A, q(1, 1));
        set(S, G, q(0, 1));
        set(S, S, q(-2, 1));
        set(S, FIB, q(1, 1));
        set(FIB, A, q(0, 1));
        set(FIB, G, q(0, 1));
        set(FIB, FIB, q(0, 1));
        Self { pairing: m }
    }

    fn dot(&self, divisor: &[LinearInA; 4], curve: usize) -> LinearInA {
        divisor
            .iter()
            .enumerate()
            .fold(LinearInA::constant(Rational::zero()), |acc, (i, c)| {
                acc.add(&c.scale(&self.pairing[i][curve]))
            })
    }

    /// Self-intersection of `A` after contracting `S`.
    fn a2_after_contracting_s(&self) -> Rational {
        let sa = self.pairing[S][A].clone();
        self.pairing[A][A].clone() - sa.clone() * sa / self.pairing[S][S].clone()
    }

    fn wall_function(&self, divisor: [LinearInA; 4]) -> WallFunction {
        let k_dot_a = self.dot(&divisor, A);
        let k_dot_g = self.dot(&divisor, G);
        let critical_a = k_dot_a.root().expect("depends on a");
        let contraction = if self.a2_after_contracting_s().is_zero() {
            ContractionTag::RuledContraction
        } else {
            ContractionTag::Flip
        };
        WallFunction {
            k_dot_a,
            k_dot_g,
            critical_a,
            contraction,
        }
    }
}

fn check_n(n: u32, lo: u32, hi: u32) -> Result<i64, WallError> {
    if !(lo..=hi).contains(&n) {
        return Err(WallError::Range {
            what: "n",
            value: n.to_string(),
        });
    }
    Ok(i64::from(n))
}

/// Component glued along an `I_n^*` fiber with `n` markings, `13 ≤ n ≤ 19`.
pub fn ex1_wall_function(n: u32) -> Result<WallFunction, WallError> {
    let n = check_n(n, 13, 19)?;
    let q = |n, d| Rational::from_ratio(n, d);
    let surface = LocalSurface::new(q(-1, 2), q(1, 2), q(-1, 2));
    // K = -2f + 2A; D = K + G + (24 - n) a A + n a f + 12 a S
    let d = [
        LinearInA {
            constant: q(2, 1),
            slope: q(24 - n, 1),
        },
        LinearInA::constant(q(1, 1)),
        LinearInA::in_a(q(12, 1)),
        LinearInA {
            constant: q(-2, 1),
            slope: q(n, 1),
        },
    ];
    Ok(surface.wall_function(d))
}

/// Component with the section flipped first, `6 < n ≤ 14`.
pub fn ex2_wall_function(n: u32) -> Result<WallFunction, WallError> {
    let n = check_n(n, 7, 14)?;
    let q = |n, d| Rational::from_ratio(n, d);
    let surface = LocalSurface::new(q(-2, 3), q(1, 3), q(-1, 6));
    // K = -f + A; D = K + G + (18 - n) a A + (6 + n) a f + 12 a S
    let d = [
        LinearInA {
            constant: q(1, 1),
            slope: q(18 - n, 1),
        },
        LinearInA::constant(q(1, 1)),
        LinearInA::in_a(q(12, 1)),
        LinearInA {
            constant: q(-1, 1),
            slope: q(6 + n, 1),
        },
    ];
    Ok(surface.wall_function(d))
}
