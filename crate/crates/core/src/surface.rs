//! Combinatorial checks on broken elliptic surfaces.
//!
//! A [`SurfaceGraph`] lists the main components and how they are glued.
//! Trees of pseudoelliptic surfaces are not components: they are recorded as
//! an [`Absorbed`] annotation on the fiber they sprout off.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::fiber::{deg_l_jinfty, FiberType};
use crate::scalar::ExactField;
use crate::strata::{
    n0_marking_range, Family, StratumDescriptor, SurfaceTypeLabel, JINF_END_MIN, NORMAL_END_MIN,
    TOTAL_MARKINGS,
};
use crate::walls::FiberModel;
use crate::Rational;

const TOTAL_J_DEGREE: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    NormalElliptic,
    IsotrivialJinf,
    TrivialProduct,
}

impl ComponentKind {
    pub fn is_jinf(self) -> bool {
        !matches!(self, ComponentKind::NormalElliptic)
    }
}

/// A tree of pseudoelliptic surfaces attached to a fiber, or the markings
/// that collided there when it contracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Absorbed {
    /// Fiber of the tree along which it meets the component.
    pub via: FiberType,
    pub markings: u32,
    pub j_degree: u32,
    /// The tree is still present rather than contracted onto the fiber.
    pub attached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberEntry {
    pub fiber: FiberType,
    pub model: FiberModel,
    pub absorbed: Option<Absorbed>,
}

impl FiberEntry {
    pub fn bare(fiber: FiberType, model: FiberModel) -> Self {
        FiberEntry {
            fiber,
            model,
            absorbed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSpec {
    pub kind: ComponentKind,
    pub j_degree: u32,
    pub fibers: Vec<FiberEntry>,
    /// Marked nodal fibers on the component itself.
    pub markings: u32,
    /// `-S²` of the section.
    pub section_self_int: Option<Rational>,
}

impl ComponentSpec {
    /// `N_k` counts for `k ≥ 1`.
    pub fn nk_counts(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        for f in &self.fibers {
            if let FiberType::N(k) = f.fiber {
                if k > 0 {
                    *out.entry(k).or_insert(0) += 1;
                }
            }
        }
        out
    }

    /// Markings on the component and on everything absorbed into it.
    pub fn markings_with_multiplicity(&self) -> u32 {
        self.markings + self.absorbed().map(|a| a.markings).sum::<u32>()
    }

    fn absorbed(&self) -> impl Iterator<Item = &Absorbed> {
        self.fibers.iter().filter_map(|f| f.absorbed.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingEdge {
    pub endpoints: (usize, usize),
    /// Fiber on the first and second endpoint.
    pub fiber_pair: (FiberType, FiberType),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceGraph {
    pub components: Vec<ComponentSpec>,
    pub edges: Vec<GluingEdge>,
    pub marked_total: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no components")]
    Empty,
    #[error("edge {edge} refers to missing component {component}")]
    Dangling { edge: usize, component: usize },
    #[error("edge {0} is a loop")]
    Loop(usize),
    #[error("{edges} edges on {components} components do not form a tree")]
    NotTree { components: usize, edges: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("component {0} meets more than two others; not a chain")]
    NotChain(usize),
}

/// Reference to fiber `fiber` of component `component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberRef {
    pub component: usize,
    pub fiber: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// (1) the two sides of a gluing are not a dual pair.
    IllegalGluing {
        edge: usize,
        pair: (FiberType, FiberType),
    },
    /// (2)
    DegreeSum {
        found: u32,
    },
    /// (3) `counted` sums the markings on the components and their trees.
    MarkingTotal {
        declared: u32,
        counted: u32,
    },
    /// (4)
    NonNodalUnmarked {
        at: FiberRef,
        fiber: FiberType,
    },
    /// (5) `tree` lists the components of a connected `j = ∞` tree.
    JinfTreeMarkings {
        tree: Vec<usize>,
        markings: u32,
        multiplicities: u32,
    },
    NonSlcFiber {
        at: FiberRef,
        fiber: FiberType,
    },
    NonMinimalFiber {
        at: FiberRef,
    },
    TooFewCollisions {
        at: FiberRef,
        k: u32,
        markings: u32,
    },
    BudgetMismatch {
        component: usize,
        deg_l: Rational,
    },
    RequiresAttachment {
        at: FiberRef,
        fiber: FiberType,
    },
    EndTooFew {
        component: usize,
        markings: u32,
        needed: u32,
    },
    IntermediateUnstable {
        component: usize,
    },
    MarkingRange {
        component: usize,
        markings: u32,
        range: (u32, u32),
    },
    SelfIntersectionMismatch {
        component: usize,
        declared: Rational,
        deg_l: Rational,
    },
    IsotrivialJDegree {
        component: usize,
    },
    IsotrivialFiber {
        at: FiberRef,
        fiber: FiberType,
    },
    LargeInFiber {
        component: usize,
        n: u32,
    },
}

impl Violation {
    /// Number of the twisted-stable-maps condition, when it is one.
    pub fn condition(&self) -> Option<u32> {
        match self {
            Violation::IllegalGluing { .. } => Some(1),
            Violation::DegreeSum { .. } => Some(2),
            Violation::MarkingTotal { .. } => Some(3),
            Violation::NonNodalUnmarked { .. } => Some(4),
            Violation::JinfTreeMarkings { .. } => Some(5),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Violation::IllegalGluing { .. } => "IllegalGluing",
            Violation::DegreeSum { .. } => "DegreeSum",
            Violation::MarkingTotal { .. } => "MarkingTotal",
            Violation::NonNodalUnmarked { .. } => "NonNodalUnmarked",
            Violation::JinfTreeMarkings { .. } => "JinfTreeMarkings",
            Violation::NonSlcFiber { .. } => "NonSlcFiber",
            Violation::NonMinimalFiber { .. } => "NonMinimalFiber",
            Violation::TooFewCollisions { .. } => "TooFewCollisions",
            Violation::BudgetMismatch { .. } => "BudgetMismatch",
            Violation::RequiresAttachment { .. } => "RequiresAttachment",
            Violation::EndTooFew { .. } => "EndTooFew",
            Violation::IntermediateUnstable { .. } => "IntermediateUnstable",
            Violation::MarkingRange { .. } => "MarkingRange",
            Violation::SelfIntersectionMismatch { .. } => "SelfIntersectionMismatch",
            Violation::IsotrivialJDegree { .. } => "IsotrivialJDegree",
            Violation::IsotrivialFiber { .. } => "IsotrivialFiber",
            Violation::LargeInFiber { .. } => "LargeInFiber",
        }
    }
}

impl fmt::Display for FiberRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {} fiber {}", self.component, self.fiber)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.condition() {
            write!(f, "[{c}] ")?;
        }
        write!(f, "{}: ", self.name())?;
        match self {
            Violation::IllegalGluing { edge, pair } => {
                write!(f, "edge {edge} glues {} to {}", pair.0, pair.1)
            }
            Violation::DegreeSum { found } => {
                write!(f, "j-map degree {found}, expected {TOTAL_J_DEGREE}")
            }
            Violation::MarkingTotal { declared, counted } => {
                write!(f, "declared {declared}, counted {counted}, expected {TOTAL_MARKINGS}")
            }
            Violation::NonNodalUnmarked { at, fiber } => {
                write!(f, "{fiber} at {at} carries no markings")
            }
            Violation::JinfTreeMarkings {
                tree,
                markings,
                multiplicities,
            } => write!(
                f,
                "tree {tree:?} has {markings} markings, adjacent multiplicities sum to {multiplicities}"
            ),
            Violation::NonSlcFiber { at, fiber } => write!(f, "{fiber} at {at}"),
            Violation::NonMinimalFiber { at } => write!(f, "at {at}"),
            Violation::TooFewCollisions { at, k, markings } => {
                write!(f, "N{k} at {at} has {markings} markings, needs {}", k + 1)
            }
            Violation::BudgetMismatch { component, deg_l } => {
                write!(f, "component {component} has deg L {deg_l}, expected 2")
            }
            Violation::RequiresAttachment { at, fiber } => {
                write!(f, "{fiber} at {at} needs an attached tree")
            }
            Violation::EndTooFew {
                component,
                markings,
                needed,
            } => write!(f, "end {component} has {markings} markings, needs {needed}"),
            Violation::IntermediateUnstable { component } => {
                write!(f, "intermediate {component} has no markings")
            }
            Violation::MarkingRange {
                component,
                markings,
                range,
            } => write!(
                f,
                "component {component} has {markings} markings outside [{}, {}]",
                range.0, range.1
            ),
            Violation::SelfIntersectionMismatch {
                component,
                declared,
                deg_l,
            } => write!(f, "component {component} declares -S^2 = {declared}, deg L is {deg_l}"),
            Violation::IsotrivialJDegree { component } => {
                write!(f, "isotrivial component {component} has nonzero j-degree")
            }
            Violation::IsotrivialFiber { at, fiber } => {
                write!(f, "{fiber} at {at} on an isotrivial component")
            }
            Violation::LargeInFiber { component, n } => {
                write!(f, "component {component} has I{n}, n > 12")
            }
        }
    }
}

/// Informational notes that are not violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Advisory {
    /// Fiber with log canonical threshold zero; any marking there is not lc.
    LctZero { at: FiberRef, fiber: FiberType },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationMode {
    #[default]
    General,
    /// Adds the marking ranges of the catalog at weight just above `1/12`.
    EpsilonCatalog,
    /// Adds the bound `n ≤ 12` on `I_n` fibers for weights below `1/12`.
    BelowOneTwelfth,
}

fn multiplicity(fiber: FiberType) -> u32 {
    match fiber {
        FiberType::I(n) | FiberType::IStar(n) => n,
        _ => 0,
    }
}

fn nodal_side(f: FiberType) -> bool {
    matches!(f, FiberType::I(_) | FiberType::N(0) | FiberType::Smooth)
}

fn star_side(f: FiberType) -> bool {
    matches!(f, FiberType::IStar(_) | FiberType::N(1))
}

pub fn legal_gluing(a: FiberType, b: FiberType) -> bool {
    use FiberType::*;
    if nodal_side(a) && nodal_side(b) || star_side(a) && star_side(b) {
        return true;
    }
    matches!(
        (a, b),
        (II, IIStar) | (IIStar, II) | (III, IIIStar) | (IIIStar, III) | (IV, IVStar) | (IVStar, IV)
    )
}

impl SurfaceGraph {
    pub fn check_well_formed(&self) -> Result<(), GraphError> {
        let n = self.components.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (i, e) in self.edges.iter().enumerate() {
            for c in [e.endpoints.0, e.endpoints.1] {
                if c >= n {
                    return Err(GraphError::Dangling {
                        edge: i,
                        component: c,
                    });
                }
            }
            if e.endpoints.0 == e.endpoints.1 {
                return Err(GraphError::Loop(i));
            }
        }
        let not_tree = GraphError::NotTree {
            components: n,
            edges: self.edges.len(),
        };
        if self.edges.len() + 1 != n {
            return Err(not_tree);
        }
        if self.reachable(0, |_| true).len() != n {
            return Err(not_tree);
        }
        Ok(())
    }

    /// Components reachable from `start` through components accepted by `keep`.
    fn reachable(&self, start: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut seen = vec![false; self.components.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(c) = stack.pop() {
            out.push(c);
            for e in &self.edges {
                let next = if e.endpoints.0 == c {
                    e.endpoints.1
                } else if e.endpoints.1 == c {
                    e.endpoints.0
                } else {
                    continue;
                };
                if !seen[next] && keep(next) {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn degree(&self, c: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.endpoints.0 == c || e.endpoints.1 == c)
            .count()
    }

    fn fiber_refs(&self) -> impl Iterator<Item = (FiberRef, &FiberEntry)> {
        self.components.iter().enumerate().flat_map(|(c, spec)| {
            spec.fibers.iter().enumerate().map(move |(i, f)| {
                (
                    FiberRef {
                        component: c,
                        fiber: i,
                    },
                    f,
                )
            })
        })
    }
}

/// Conditions (1) to (5) for surfaces in the image of twisted stable maps.
pub fn check_tsm_conditions(g: &SurfaceGraph) -> Result<Vec<Violation>, GraphError> {
    g.check_well_formed()?;
    let mut out = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if !legal_gluing(e.fiber_pair.0, e.fiber_pair.1) {
            out.push(Violation::IllegalGluing {
                edge: i,
                pair: e.fiber_pair,
            });
        }
    }
    let j: u32 = g
        .components
        .iter()
        .map(|c| c.j_degree + c.absorbed().map(|a| a.j_degree).sum::<u32>())
        .sum();
    if j != TOTAL_J_DEGREE {
        out.push(Violation::DegreeSum { found: j });
    }
    let counted: u32 = g
        .components
        .iter()
        .map(|c| c.markings_with_multiplicity())
        .sum();
    if g.marked_total != TOTAL_MARKINGS || counted != g.marked_total {
        out.push(Violation::MarkingTotal {
            declared: g.marked_total,
            counted,
        });
    }
    for (at, f) in g.fiber_refs() {
        let marked = f.absorbed.as_ref().is_some_and(|a| a.markings > 0);
        if !nodal_side(f.fiber) && !marked {
            out.push(Violation::NonNodalUnmarked { at, fiber: f.fiber });
        }
    }
    out.extend(jinf_tree_violations(g));
    Ok(out)
}

fn jinf_tree_violations(g: &SurfaceGraph) -> Vec<Violation> {
    let jinf = |c: usize| g.components[c].kind.is_jinf();
    let mut done = vec![false; g.components.len()];
    let mut out = Vec::new();
    for start in 0..g.components.len() {
        if done[start] || !jinf(start) {
            continue;
        }
        let tree = g.reachable(start, jinf);
        let mut markings = 0;
        let mut multiplicities = 0;
        for &c in &tree {
            done[c] = true;
            markings += g.components[c].markings;
            multiplicities += g.components[c]
                .absorbed()
                .map(|a| multiplicity(a.via))
                .sum::<u32>();
        }
        for e in &g.edges {
            let (a, b) = e.endpoints;
            if tree.contains(&a) && !jinf(b) {
                multiplicities += multiplicity(e.fiber_pair.1);
            } else if tree.contains(&b) && !jinf(a) {
                multiplicities += multiplicity(e.fiber_pair.0);
            }
        }
        if markings != multiplicities {
            out.push(Violation::JinfTreeMarkings {
                tree,
                markings,
                multiplicities,
            });
        }
    }
    out
}

/// Non-slc `N_k` fibers without an attached tree, and non-minimal fibers.
pub fn check_slc_fibers(g: &SurfaceGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for (at, f) in g.fiber_refs() {
        match f.fiber {
            FiberType::NonMinimal => out.push(Violation::NonMinimalFiber { at }),
            FiberType::N(k) if k >= 3 && !f.absorbed.as_ref().is_some_and(|a| a.attached) => {
                out.push(Violation::NonSlcFiber { at, fiber: f.fiber })
            }
            _ => {}
        }
    }
    out
}

pub fn advisories(g: &SurfaceGraph) -> Vec<Advisory> {
    g.fiber_refs()
        .filter(|(_, f)| f.fiber.lct_zero() && f.absorbed.is_none())
        .map(|(at, f)| Advisory::LctZero { at, fiber: f.fiber })
        .collect()
}

/// Markings absorbed at each `N_k` fiber, `1 ≤ k ≤ 4`.
pub fn nk_markings(g: &SurfaceGraph) -> BTreeMap<FiberRef, u32> {
    g.fiber_refs()
        .filter(|(_, f)| matches!(f.fiber, FiberType::N(1..=4)))
        .map(|(at, f)| (at, f.absorbed.as_ref().map_or(0, |a| a.markings)))
        .collect()
}

/// An `N_k` fiber is the limit of at least `k + 1` colliding `I_1` fibers.
pub fn check_collision_minimums(
    g: &SurfaceGraph,
    per_nk_markings: &BTreeMap<FiberRef, u32>,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&at, &markings) in per_nk_markings {
        let fiber = g
            .components
            .get(at.component)
            .and_then(|c| c.fibers.get(at.fiber))
            .map(|f| f.fiber);
        if let Some(FiberType::N(k)) = fiber {
            if (1..=4).contains(&k) && markings < k + 1 {
                out.push(Violation::TooFewCollisions { at, k, markings });
            }
        }
    }
    out
}

/// `deg L = 2` for every `j = ∞` component declared of K3 type.
pub fn check_k3_budget(g: &SurfaceGraph) -> Vec<Violation> {
    let two = Rational::from_i64(2);
    let mut out = Vec::new();
    for (c, spec) in g.components.iter().enumerate() {
        if spec.kind != ComponentKind::IsotrivialJinf
            || spec.section_self_int.as_ref() != Some(&two)
        {
            continue;
        }
        let deg_l = deg_l_jinfty(&spec.nk_counts());
        if deg_l != two {
            out.push(Violation::BudgetMismatch {
                component: c,
                deg_l,
            });
            continue;
        }
        for (i, f) in spec.fibers.iter().enumerate() {
            let attached = f.absorbed.as_ref().is_some_and(|a| a.attached);
            if matches!(f.fiber, FiberType::N(k) if k >= 3) && !attached {
                out.push(Violation::RequiresAttachment {
                    at: FiberRef {
                        component: c,
                        fiber: i,
                    },
                    fiber: f.fiber,
                });
            }
        }
    }
    out
}

/// Whether flipping the section of a component with `-S² = v` leaves the
/// intermediate fiber of an slc cusp.
pub fn attachment_is_lc(section_self_int_of_flipped: &Rational) -> bool {
    *section_self_int_of_flipped <= Rational::one()
}

/// Twisted model of an `N_k` fiber: `N_0` for even `k`, twisted `N_1` for odd.
pub fn twisted_model_of_nk(k: u32) -> FiberType {
    FiberType::N(k % 2)
}

/// Components of a chain from one end to the other.
pub fn chain_order(g: &SurfaceGraph) -> Result<Vec<usize>, ShapeError> {
    g.check_well_formed()?;
    if let Some(c) = (0..g.components.len()).find(|&c| g.degree(c) > 2) {
        return Err(ShapeError::NotChain(c));
    }
    let start = (0..g.components.len())
        .find(|&c| g.degree(c) <= 1)
        .unwrap_or(0);
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    while order.len() < g.components.len() {
        let next = g
            .edges
            .iter()
            .filter_map(|e| match e.endpoints {
                (a, b) if a == cur => Some(b),
                (a, b) if b == cur => Some(a),
                _ => None,
            })
            .find(|&n| Some(n) != prev)
            .expect("connected chain");
        prev = Some(cur);
        cur = next;
        order.push(cur);
    }
    Ok(order)
}

/// Minimum markings on the ends and intermediate components of a chain.
pub fn check_end_markings(g: &SurfaceGraph) -> Result<Vec<Violation>, ShapeError> {
    let order = chain_order(g)?;
    let mut out = Vec::new();
    if order.len() < 2 {
        return Ok(out);
    }
    let last = order.len() - 1;
    for (pos, &c) in order.iter().enumerate() {
        let spec = &g.components[c];
        let markings = spec.markings_with_multiplicity();
        if pos == 0 || pos == last {
            let needed = if spec.kind.is_jinf() {
                JINF_END_MIN
            } else {
                NORMAL_END_MIN
            };
            if markings < needed {
                out.push(Violation::EndTooFew {
                    component: c,
                    markings,
                    needed,
                });
            }
        } else if markings < 1 {
            out.push(Violation::IntermediateUnstable { component: c });
        }
    }
    Ok(out)
}

/// Per-component invariants: isotrivial components have `j`-degree zero and
/// only `N_k` fibers, and a declared `-S²` matches `deg L`.
pub fn check_components(g: &SurfaceGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for (c, spec) in g.components.iter().enumerate() {
        if !spec.kind.is_jinf() {
            continue;
        }
        if spec.j_degree != 0 {
            out.push(Violation::IsotrivialJDegree { component: c });
        }
        for (i, f) in spec.fibers.iter().enumerate() {
            if !matches!(f.fiber, FiberType::N(_)) {
                out.push(Violation::IsotrivialFiber {
                    at: FiberRef {
                        component: c,
                        fiber: i,
                    },
                    fiber: f.fiber,
                });
            }
        }
        if let Some(declared) = &spec.section_self_int {
            let deg_l = deg_l_jinfty(&spec.nk_counts());
            if *declared != deg_l {
                out.push(Violation::SelfIntersectionMismatch {
                    component: c,
                    declared: declared.clone(),
                    deg_l,
                });
            }
        }
    }
    out
}

fn marking_range_violations(g: &SurfaceGraph) -> Vec<Violation> {
    let budget = match g.components.len() {
        1 => TOTAL_MARKINGS,
        2 => TOTAL_MARKINGS / 2,
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for (c, spec) in g.components.iter().enumerate() {
        let nk = spec.nk_counts();
        if spec.kind != ComponentKind::IsotrivialJinf || nk.is_empty() {
            continue;
        }
        let glued_n1 = g
            .edges
            .iter()
            .filter(|e| {
                e.endpoints.0 == c && e.fiber_pair.0 == FiberType::N(1)
                    || e.endpoints.1 == c && e.fiber_pair.1 == FiberType::N(1)
            })
            .count() as u32;
        let range = n0_marking_range(&nk, budget, glued_n1);
        if spec.markings < range.0 || spec.markings > range.1 {
            out.push(Violation::MarkingRange {
                component: c,
                markings: spec.markings,
                range,
            });
        }
    }
    out
}

fn large_in_violations(g: &SurfaceGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for (c, spec) in g.components.iter().enumerate() {
        let own = spec.fibers.iter().map(|f| f.fiber);
        let glued = g.edges.iter().flat_map(|e| {
            let mut v = Vec::new();
            if e.endpoints.0 == c {
                v.push(e.fiber_pair.0);
            }
            if e.endpoints.1 == c {
                v.push(e.fiber_pair.1);
            }
            v
        });
        let mut ns: Vec<u32> = own
            .chain(glued)
            .filter_map(|f| match f {
                FiberType::I(n) if n > 12 => Some(n),
                _ => None,
            })
            .collect();
        ns.dedup();
        out.extend(
            ns.into_iter()
                .map(|n| Violation::LargeInFiber { component: c, n }),
        );
    }
    out
}

/// Every check that applies to `g`. End markings are only checked on chains.
pub fn validate(g: &SurfaceGraph, mode: ValidationMode) -> Result<Vec<Violation>, GraphError> {
    let mut out = check_tsm_conditions(g)?;
    out.extend(check_components(g));
    out.extend(check_slc_fibers(g));
    out.extend(check_collision_minimums(g, &nk_markings(g)));
    out.extend(check_k3_budget(g));
    match check_end_markings(g) {
        Ok(v) => out.extend(v),
        Err(ShapeError::NotChain(_)) => {}
        Err(ShapeError::Graph(e)) => return Err(e),
    }
    match mode {
        ValidationMode::General => {}
        ValidationMode::EpsilonCatalog => out.extend(marking_range_violations(g)),
        ValidationMode::BelowOneTwelfth => out.extend(large_in_violations(g)),
    }
    Ok(out)
}

fn i_fiber(n: u32) -> FiberType {
    if n == 0 {
        FiberType::Smooth
    } else {
        FiberType::I(n)
    }
}

/// An `N_k` fiber whose tree meets it along a fiber of multiplicity `param`.
fn nk_entry(k: u32, param: u32) -> FiberEntry {
    let (via, budget, j_degree, attached) = match k {
        1 => (FiberType::IStar(param), 6, 6, false),
        2 => (i_fiber(param), 12, 12, true),
        3 => (FiberType::IStar(param), 18, 18, true),
        _ => (i_fiber(param), 24, 24, true),
    };
    FiberEntry {
        fiber: FiberType::N(k),
        model: if attached {
            FiberModel::Intermediate
        } else {
            FiberModel::Weierstrass
        },
        absorbed: Some(Absorbed {
            via,
            markings: budget - param.min(budget),
            j_degree,
            attached,
        }),
    }
}

/// Multiplicities of the tree gluing fiber that keep the collisions at an
/// `N_k` fiber between `k + 1` and the most it can absorb.
fn nk_param_bounds(k: u32) -> (u32, u32) {
    match k {
        1 => (1, 4),
        2 => (1, 9),
        3 => (7, 14),
        _ => (13, 19),
    }
}

/// A `j = ∞` component with `markings` marked `N_0` fibers. The trees on its
/// `N_k` fibers are chosen so that their gluing multiplicities sum to
/// `markings`, staying in bounds when possible.
pub fn jinf_component(nk: &BTreeMap<u32, u32>, markings: u32) -> ComponentSpec {
    let ks: Vec<u32> = nk
        .iter()
        .flat_map(|(&k, &count)| std::iter::repeat_n(k, count as usize))
        .collect();
    let bounds: Vec<(u32, u32)> = ks.iter().map(|&k| nk_param_bounds(k)).collect();
    let mut params: Vec<i64> = bounds.iter().map(|b| i64::from(b.0)).collect();
    let mut rem = i64::from(markings) - params.iter().sum::<i64>();
    for (p, b) in params.iter_mut().zip(&bounds) {
        if rem <= 0 {
            break;
        }
        let add = rem.min(i64::from(b.1) - *p);
        *p += add;
        rem -= add;
    }
    if let Some(first) = params.first_mut() {
        *first = (*first + rem).max(0);
    }
    let fibers = ks
        .iter()
        .zip(params)
        .map(|(&k, p)| nk_entry(k, p as u32))
        .collect();
    ComponentSpec {
        kind: ComponentKind::IsotrivialJinf,
        j_degree: 0,
        fibers,
        markings,
        section_self_int: Some(deg_l_jinfty(nk)),
    }
}

fn normal(j_degree: u32, markings: u32) -> ComponentSpec {
    ComponentSpec {
        kind: ComponentKind::NormalElliptic,
        j_degree,
        fibers: vec![],
        markings,
        section_self_int: None,
    }
}

fn trivial(markings: u32) -> ComponentSpec {
    ComponentSpec {
        kind: ComponentKind::TrivialProduct,
        j_degree: 0,
        fibers: vec![],
        markings,
        section_self_int: Some(Rational::from_i64(0)),
    }
}

fn chain(components: Vec<ComponentSpec>, pairs: Vec<(FiberType, FiberType)>) -> SurfaceGraph {
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, fiber_pair)| GluingEdge {
            endpoints: (i, i + 1),
            fiber_pair,
        })
        .collect();
    SurfaceGraph {
        components,
        edges,
        marked_total: TOTAL_MARKINGS,
    }
}

/// Encodes a catalog surface with the given marked `N_0` counts on its
/// `j = ∞` components, in order. Returns `None` when the count of values
/// does not match.
pub fn catalog_graph(label: &SurfaceTypeLabel, n0: &[u32]) -> Option<SurfaceGraph> {
    let mut values = n0.iter();
    let mut components = Vec::new();
    for c in &label.components {
        let spec = match c.fixed_markings {
            Some(m) => normal(m, m),
            None => jinf_component(&c.nk, *values.next()?),
        };
        components.push(spec);
    }
    if values.next().is_some() {
        return None;
    }
    let pairs = label.gluing.into_iter().collect();
    Some(chain(components, pairs))
}

/// The surface at the generic point of a boundary stratum.
pub fn stratum_graph(d: &StratumDescriptor) -> SurfaceGraph {
    let twice_n1 = BTreeMap::from([(1, 2)]);
    let four_n1 = BTreeMap::from([(1, 4)]);
    let n0 = FiberType::N(0);
    // Two N_1 fibers whose trees meet them along I_4^*, beside `markings`
    // marked N_0 fibers.
    let jinf_end = |markings: u32| ComponentSpec {
        markings,
        ..jinf_component(&twice_n1, 8)
    };
    let r = d.r.unwrap_or(0);
    let s = d.s.unwrap_or(0);
    let middles = || d.partition.iter().map(|&a| trivial(1 + a));
    let inner_pairs = |k: usize| vec![(n0, n0); k];
    match d.family {
        Family::II => chain(
            vec![normal(12, 12), normal(12, 12)],
            vec![(FiberType::Smooth, FiberType::Smooth)],
        ),
        Family::IIInf => chain(vec![jinf_component(&four_n1, 16)], vec![]),
        Family::III0 => {
            let mut comps = vec![normal(12, 12 - s)];
            comps.extend(middles());
            comps.push(normal(12, 12 - r));
            let mut pairs = vec![(i_fiber(s), n0)];
            pairs.extend(inner_pairs(d.partition.len().saturating_sub(1)));
            pairs.push((n0, i_fiber(r)));
            chain(comps, pairs)
        }
        Family::III1 | Family::III1NoMid => {
            let mut comps = vec![jinf_end(17 - s)];
            comps.extend(middles());
            comps.push(normal(12, 12 - r));
            let mut pairs = inner_pairs(d.partition.len());
            pairs.push((n0, i_fiber(r)));
            chain(comps, pairs)
        }
        Family::III2 | Family::III2NoMid => {
            let mut comps = vec![jinf_end(17 - s)];
            comps.extend(middles());
            comps.push(jinf_end(17 - r));
            chain(comps, inner_pairs(d.partition.len() + 1))
        }
    }
}
