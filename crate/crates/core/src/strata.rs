//! Boundary strata of the ε-weighted compactification and the catalog of
//! surfaces appearing there.

use std::collections::BTreeMap;
use std::fmt;

use crate::fiber::FiberType;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("R_n needs 0 <= n <= 9, got {0}")]
    RnRange(u32),
    #[error("unknown stratum family `{0}`")]
    UnknownFamily(String),
}

/// Rational elliptic surfaces with a section and a marked `I_n` fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RnSpace {
    pub n: u32,
    pub dim: u32,
    pub components: u32,
}

pub fn r_space(n: u32) -> Result<RnSpace, StrataError> {
    if n > 9 {
        return Err(StrataError::RnRange(n));
    }
    Ok(RnSpace {
        n,
        dim: 9 - n,
        components: if n == 8 { 2 } else { 1 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    II,
    IIInf,
    III0,
    III1NoMid,
    III1,
    III2NoMid,
    III2,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::II,
        Family::IIInf,
        Family::III0,
        Family::III1NoMid,
        Family::III1,
        Family::III2NoMid,
        Family::III2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::II => "II",
            Family::IIInf => "II_INF",
            Family::III0 => "III0",
            Family::III1NoMid => "III1_NOMID",
            Family::III1 => "III1",
            Family::III2NoMid => "III2_NOMID",
            Family::III2 => "III2",
        }
    }

    /// Ends of the same kind, so reversing the chain gives the same surface.
    fn symmetric(self) -> bool {
        matches!(self, Family::III0 | Family::III2 | Family::III2NoMid)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = StrataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| StrataError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    R(u32),
    Gm(u32),
    A(u32),
    SymP1(u32),
    JLine,
}

impl Factor {
    pub fn dim(self) -> i64 {
        match self {
            Factor::R(n) => 9 - i64::from(n),
            Factor::Gm(k) | Factor::A(k) | Factor::SymP1(k) => i64::from(k),
            Factor::JLine => 1,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::R(n) => write!(f, "R{n}"),
            Factor::Gm(k) => write!(f, "Gm^{k}"),
            Factor::A(k) => write!(f, "A^{k}"),
            Factor::SymP1(k) => write!(f, "Sym^{k}(P1)"),
            Factor::JLine => f.write_str("J"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Annotation {
    /// Fiber product over the `j`-line; drops one dimension.
    FiberProductOverJ,
    /// Quotient by swapping the two factors.
    SwapQuotient,
}

impl Annotation {
    pub fn dim_shift(self) -> i64 {
        match self {
            Annotation::FiberProductOverJ => -1,
            Annotation::SwapQuotient => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StratumDescriptor {
    pub family: Family,
    pub r: Option<u32>,
    pub s: Option<u32>,
    /// Number of intermediate components.
    pub n: u32,
    pub partition: Vec<u32>,
    pub dim: u32,
    pub factors: Vec<Factor>,
    pub annotations: Vec<Annotation>,
}

impl StratumDescriptor {
    /// Dimension computed from the parametrizing factors.
    pub fn factor_dim(&self) -> i64 {
        self.factors.iter().map(|f| f.dim()).sum::<i64>()
            + self.annotations.iter().map(|a| a.dim_shift()).sum::<i64>()
    }
}

pub fn type2_strata() -> Vec<StratumDescriptor> {
    let w_ii = {
        let factors = vec![Factor::R(0), Factor::R(0)];
        let annotations = vec![Annotation::FiberProductOverJ, Annotation::SwapQuotient];
        let dim = factors.iter().map(|f| f.dim()).sum::<i64>() - 1;
        StratumDescriptor {
            family: Family::II,
            r: None,
            s: None,
            n: 0,
            partition: vec![],
            dim: dim as u32,
            factors,
            annotations,
        }
    };
    let w_ii_inf = StratumDescriptor {
        family: Family::IIInf,
        r: None,
        s: None,
        n: 0,
        partition: vec![],
        dim: 17,
        factors: vec![Factor::SymP1(16), Factor::JLine],
        annotations: vec![],
    };
    vec![w_ii, w_ii_inf]
}

/// Ordered compositions of `total` into `parts` non-negative integers, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(total: u32, parts: u32) -> Self {
        let next = match parts {
            0 if total == 0 => Some(vec![]),
            0 => None,
            p => {
                let mut v = vec![0; p as usize];
                v[p as usize - 1] = total;
                Some(v)
            }
        };
        Self { next }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let len = current.len();
        let mut succ = current.clone();
        let mut tail = 0;
        for i in (0..len.saturating_sub(1)).rev() {
            tail += succ[i + 1];
            if tail > 0 {
                succ[i] += 1;
                for x in &mut succ[i + 1..] {
                    *x = 0;
                }
                succ[len - 1] = tail - 1;
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of compositions of `total` into `parts` non-negative parts.
pub fn composition_count(total: u32, parts: u32) -> u64 {
    if parts == 0 {
        return u64::from(total == 0);
    }
    binomial(u64::from(total + parts - 1), u64::from(parts - 1))
}

fn palindrome_count(total: u32, parts: u32) -> u64 {
    if parts.is_multiple_of(2) {
        if total % 2 == 1 {
            0
        } else {
            composition_count(total / 2, parts / 2)
        }
    } else {
        let k = u64::from(parts / 2);
        binomial(u64::from(total / 2) + k, k)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrataQuery {
    pub family: Option<Family>,
    pub dim: Option<u32>,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub max_n: Option<u32>,
    /// Keep one of each pair of strata exchanged by reversing the chain.
    pub canonical: bool,
}

/// One `(r, s, n)` cell; its strata are the compositions of `budget`.
#[derive(Debug, Clone, Copy)]
struct Cell {
    family: Family,
    r: u32,
    s: u32,
    n: u32,
    budget: u32,
    dim: u32,
}

fn family_cells(family: Family) -> Vec<Cell> {
    let mut cells = Vec::new();
    let mut push = |r, s, n, budget, dim| {
        cells.push(Cell {
            family,
            r,
            s,
            n,
            budget,
            dim,
        })
    };
    match family {
        Family::II | Family::IIInf => {}
        Family::III0 => {
            for r in 1..=9 {
                for s in 1..=9 {
                    for n in 1..=r + s {
                        push(r, s, n, r + s - n, 18 - n);
                    }
                }
            }
        }
        Family::III1NoMid => {
            for r in 1..=9 {
                push(r, 9 - r, 0, 0, 17);
            }
        }
        Family::III1 => {
            for r in 1..=9 {
                for s in 1..=17u32 {
                    for n in 1..=(s + r).saturating_sub(9) {
                        push(r, s, n, r + s - 9 - n, 17 - n);
                    }
                }
            }
        }
        Family::III2NoMid => {
            for r in 1..=17 {
                push(r, 18 - r, 0, 0, 16);
            }
        }
        Family::III2 => {
            for r in 1..=17 {
                for s in 1..=17u32 {
                    for n in 1..=(s + r).saturating_sub(18) {
                        push(r, s, n, r + s - 18 - n, 16 - n);
                    }
                }
            }
        }
    }
    cells
}

impl StrataQuery {
    fn families(&self) -> Vec<Family> {
        match self.family {
            Some(f) => vec![f],
            None => Family::ALL.to_vec(),
        }
    }

    fn admits_cell(&self, c: &Cell) -> bool {
        self.dim.is_none_or(|d| d == c.dim)
            && self.r.is_none_or(|r| r == c.r)
            && self.s.is_none_or(|s| s == c.s)
            && self.max_n.is_none_or(|m| c.n <= m)
            && !(self.canonical && c.family.symmetric() && c.r > c.s)
    }

    fn admits_type2(&self, d: &StratumDescriptor) -> bool {
        self.dim.is_none_or(|x| x == d.dim)
            && self.r.is_none()
            && self.s.is_none()
            && self.max_n.is_none_or(|m| d.n <= m)
    }

    fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.families()
            .into_iter()
            .flat_map(family_cells)
            .filter(move |c| self.admits_cell(c))
    }
}

fn describe(c: &Cell, partition: Vec<u32>) -> StratumDescriptor {
    let gms = partition.iter().map(|&a| Factor::Gm(a));
    let factors: Vec<Factor> = match c.family {
        Family::III0 => std::iter::once(Factor::R(c.s))
            .chain(gms)
            .chain(std::iter::once(Factor::R(c.r)))
            .collect(),
        Family::III1NoMid | Family::III1 => std::iter::once(Factor::A(17 - c.s))
            .chain(gms)
            .chain(std::iter::once(Factor::R(c.r)))
            .collect(),
        Family::III2NoMid | Family::III2 => std::iter::once(Factor::A(17 - c.s))
            .chain(gms)
            .chain(std::iter::once(Factor::A(17 - c.r)))
            .collect(),
        Family::II | Family::IIInf => unreachable!(),
    };
    StratumDescriptor {
        family: c.family,
        r: Some(c.r),
        s: Some(c.s),
        n: c.n,
        partition,
        dim: c.dim,
        factors,
        annotations: vec![],
    }
}

/// Lazily enumerates every stratum matching the query, ordered by family,
/// then `r`, `s`, `n` and the composition.
pub fn enumerate_strata(query: &StrataQuery) -> impl Iterator<Item = StratumDescriptor> + '_ {
    let type2 = type2_strata()
        .into_iter()
        .filter(move |d| query.families().contains(&d.family) && query.admits_type2(d));
    let type3 = query.cells().flat_map(move |c| {
        let symmetric_cell = query.canonical && c.family.symmetric() && c.r == c.s;
        Compositions::new(c.budget, c.n)
            .filter(move |p| {
                if !symmetric_cell {
                    return true;
                }
                let rev: Vec<u32> = p.iter().rev().copied().collect();
                *p <= rev
            })
            .map(move |p| describe(&c, p))
    });
    type2.chain(type3)
}

/// Closed-form count of [`enumerate_strata`].
pub fn count_strata(query: &StrataQuery) -> u64 {
    let type2 = type2_strata()
        .iter()
        .filter(|d| query.families().contains(&d.family) && query.admits_type2(d))
        .count() as u64;
    let type3: u64 = query
        .cells()
        .map(|c| {
            let all = composition_count(c.budget, c.n);
            if query.canonical && c.family.symmetric() && c.r == c.s {
                (all + palindrome_count(c.budget, c.n)) / 2
            } else {
                all
            }
        })
        .sum();
    type2 + type3
}

/// Minimum markings on the ends of a Type III chain.
pub const NORMAL_END_MIN: u32 = 3;
pub const JINF_END_MIN: u32 = 4;
pub const TOTAL_MARKINGS: u32 = 24;

/// Largest number of intermediate components, each carrying a marking.
pub fn max_intermediate_components() -> u32 {
    max_intermediates(NORMAL_END_MIN, NORMAL_END_MIN)
}

pub fn max_intermediates(end0_min: u32, end1_min: u32) -> u32 {
    TOTAL_MARKINGS - end0_min - end1_min
}

/// Most `I_1` markings a component attached to an `N_k` fiber can carry.
fn max_absorbed(k: u32) -> u32 {
    match k {
        1 => 5,
        2..=4 => 11,
        _ => 0,
    }
}

/// Range of marked `N_0` fibers on a `j = ∞` component with `budget`
/// markings and the given `N_k` counts; `glued_n1` of its `N_1` fibers are
/// the twisted gluing fiber and carry no markings of their own.
pub fn n0_marking_range(nk: &BTreeMap<u32, u32>, budget: u32, glued_n1: u32) -> (u32, u32) {
    let mut min_used = 0;
    let mut max_used = 0;
    for (&k, &count) in nk {
        let free = if k == 1 { count - glued_n1 } else { count };
        min_used += free * (k + 1);
        max_used += free * max_absorbed(k);
    }
    (budget.saturating_sub(max_used), budget - min_used)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentShape {
    /// Elliptic K3 with the section contracted.
    PseudoellipticK3,
    /// Rational elliptic surface with the section contracted.
    RationalPseudoelliptic,
    /// Isotrivial `j = ∞` fibration.
    IsotrivialJinf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogComponent {
    pub shape: ComponentShape,
    pub nk: BTreeMap<u32, u32>,
    /// Marked `N_0` fibers, inclusive; `None` when fixed by `fixed_markings`.
    pub n0_range: Option<(u32, u32)>,
    pub fixed_markings: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceTypeLabel {
    pub label: char,
    pub components: Vec<CatalogComponent>,
    pub gluing: Option<(FiberType, FiberType)>,
}

fn jinf(nk: &[(u32, u32)], budget: u32) -> CatalogComponent {
    let nk: BTreeMap<u32, u32> = nk.iter().copied().collect();
    CatalogComponent {
        shape: ComponentShape::IsotrivialJinf,
        n0_range: Some(n0_marking_range(&nk, budget, 0)),
        nk,
        fixed_markings: None,
    }
}

/// Surfaces of the ε-weighted boundary, labels `A` to `H`.
pub fn surface_type_catalog() -> Vec<SurfaceTypeLabel> {
    let single = |label, c| SurfaceTypeLabel {
        label,
        components: vec![c],
        gluing: None,
    };
    let n0_pair = Some((FiberType::N(0), FiberType::N(0)));
    let rational = CatalogComponent {
        shape: ComponentShape::RationalPseudoelliptic,
        nk: BTreeMap::new(),
        n0_range: None,
        fixed_markings: Some(TOTAL_MARKINGS / 2),
    };
    vec![
        single(
            'A',
            CatalogComponent {
                shape: ComponentShape::PseudoellipticK3,
                nk: BTreeMap::new(),
                n0_range: None,
                fixed_markings: Some(TOTAL_MARKINGS),
            },
        ),
        single('B', jinf(&[(1, 4)], TOTAL_MARKINGS)),
        single('C', jinf(&[(1, 2), (2, 1)], TOTAL_MARKINGS)),
        single('D', jinf(&[(2, 2)], TOTAL_MARKINGS)),
        SurfaceTypeLabel {
            label: 'E',
            components: vec![rational.clone(), rational],
            gluing: Some((FiberType::Smooth, FiberType::Smooth)),
        },
        SurfaceTypeLabel {
            label: 'F',
            components: vec![jinf(&[(2, 1)], 12), jinf(&[(2, 1)], 12)],
            gluing: n0_pair,
        },
        SurfaceTypeLabel {
            label: 'G',
            components: vec![jinf(&[(1, 2)], 12), jinf(&[(1, 2)], 12)],
            gluing: n0_pair,
        },
        SurfaceTypeLabel {
            label: 'H',
            components: vec![jinf(&[(1, 2)], 12), jinf(&[(2, 1)], 12)],
            gluing: n0_pair,
        },
    ]
}
