use std::cmp::Ordering;
use std::fmt;

use super::{BinaryForm, P1Point, PolyError};
use crate::scalar::ExactField;

/// A vanishing order; `Infinite` for the zero form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }

    /// Order of `f` along the squarefree form `p`.
    pub fn of<F: ExactField>(f: &BinaryForm<F>, p: &BinaryForm<F>) -> Result<Order, PolyError> {
        if f.is_zero() {
            return Ok(Order::Infinite);
        }
        f.multiplicity(p).map(Order::Finite)
    }

    /// `self >= v` with infinity above every integer.
    pub fn at_least(self, v: u32) -> bool {
        match self {
            Order::Finite(x) => x >= v,
            Order::Infinite => true,
        }
    }

    pub fn exceeds(self, v: u32) -> bool {
        match self {
            Order::Finite(x) => x > v,
            Order::Infinite => true,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::Infinite) => Ordering::Less,
            (Order::Infinite, Order::Finite(_)) => Ordering::Greater,
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// Vanishing orders of `(A, B, Δ)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub v_a: Order,
    pub v_b: Order,
    pub v_delta: Order,
}

impl Profile {
    pub fn new(v_a: Order, v_b: Order, v_delta: Order) -> Self {
        Self { v_a, v_b, v_delta }
    }

    pub fn finite(v_a: u32, v_b: u32, v_delta: u32) -> Self {
        Self::new(
            Order::Finite(v_a),
            Order::Finite(v_b),
            Order::Finite(v_delta),
        )
    }

    /// Orders of `a`, `b` and `4a^3 + 27b^2` along `p`.
    pub fn at<F: ExactField>(
        a: &BinaryForm<F>,
        b: &BinaryForm<F>,
        p: &BinaryForm<F>,
    ) -> Result<Profile, PolyError> {
        let delta = discriminant(a, b)?;
        Ok(Profile::new(
            Order::of(a, p)?,
            Order::of(b, p)?,
            Order::of(&delta, p)?,
        ))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.v_a, self.v_b, self.v_delta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Place<F> {
    pub form: BinaryForm<F>,
    pub profile: Profile,
}

impl<F: ExactField> Place<F> {
    pub fn degree(&self) -> usize {
        self.form.degree()
    }
}

/// `4a^3 + 27b^2`.
pub(crate) fn discriminant<F: ExactField>(
    a: &BinaryForm<F>,
    b: &BinaryForm<F>,
) -> Result<BinaryForm<F>, PolyError> {
    let a3 = a.pow(3).scale(&F::from_i64(4));
    let b2 = b.pow(2).scale(&F::from_i64(27));
    a3.add(&b2)
}

/// Splits `f` into the parts on which `layers` (squarefree, pairwise
/// coprime, with multiplicities) have constant order.
fn split<F: ExactField>(
    f: &BinaryForm<F>,
    layers: &[(BinaryForm<F>, u32)],
) -> Result<Vec<(BinaryForm<F>, u32)>, PolyError> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    for (g, m) in layers {
        if rest.is_constant() {
            break;
        }
        let common = rest.gcd(g)?;
        if !common.is_constant() {
            rest = rest.exact_div(&common)?;
            out.push((common, *m));
        }
    }
    if !rest.is_constant() {
        out.push((rest.normalized(), 0));
    }
    Ok(out)
}

/// Splits a squarefree form into its rational linear factors and the
/// normalized remaining factor, if any.
fn split_rational_points<F: ExactField>(f: &BinaryForm<F>) -> Vec<BinaryForm<F>> {
    let mut out = Vec::new();
    let mut rest = f.normalized();
    if rest.degree() <= 1 {
        return vec![rest];
    }
    if rest.coeff(rest.degree()).is_zero() {
        let t1 = BinaryForm::t1();
        rest = rest.exact_div(&t1).expect("T1 divides");
        out.push(t1);
    }
    for r in F::rational_roots(rest.coeffs()) {
        let t = P1Point::Affine(r).linear_form();
        rest = rest.exact_div(&t).expect("root divides");
        out.push(t);
    }
    if rest.degree() > 0 {
        out.push(rest.normalized());
    }
    out
}

/// Groups the singular locus of `(a, b)` into places of constant profile.
///
/// The locus is the zero set of `Δ = 4a³ + 27b²`, or of `a` when `Δ ≡ 0`.
pub fn place_decompose<F: ExactField>(
    a: &BinaryForm<F>,
    b: &BinaryForm<F>,
) -> Result<Vec<Place<F>>, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let delta = discriminant(a, b)?;
    let target = if delta.is_zero() { a } else { &delta };

    let mut cells: Vec<(BinaryForm<F>, [Order; 3])> = target
        .squarefree_decompose()?
        .factors
        .into_iter()
        .map(|(g, _)| (g, [Order::Infinite; 3]))
        .collect();

    for (slot, poly) in [a, b, &delta].into_iter().enumerate() {
        if poly.is_zero() {
            continue;
        }
        let layers = poly.squarefree_decompose()?.factors;
        let mut next = Vec::with_capacity(cells.len());
        for (f, orders) in cells {
            for (piece, m) in split(&f, &layers)? {
                let mut o = orders;
                o[slot] = Order::Finite(m);
                next.push((piece, o));
            }
        }
        cells = next;
    }

    let mut places: Vec<Place<F>> = cells
        .into_iter()
        .flat_map(|(form, [v_a, v_b, v_delta])| {
            split_rational_points(&form)
                .into_iter()
                .map(move |form| Place {
                    form,
                    profile: Profile::new(v_a, v_b, v_delta),
                })
        })
        .collect();
    places.sort_by(|x, y| x.form.cmp(&y.form));
    Ok(places)
}
