//! JSON input documents and their conversion to library types.
//!
//! Every document is an object with a `kind` tag and a `schema_version`.
//! Rationals are strings (`"p/q"` or an integer) and coefficient arrays list
//! the coefficient of `T0^i T1^(d-i)` at index `i`.

use k3w_core::fiber::{FiberType, WeierstrassData};
use k3w_core::git::MarkedTriple;
use k3w_core::scalar::{format_rational, parse_rational, RationalParseError};
use k3w_core::surface::{
    Absorbed, ComponentKind, ComponentSpec, FiberEntry, GluingEdge, SurfaceGraph,
};
use k3w_core::walls::{BoundaryConvention, FiberModel};
use k3w_core::{BinaryForm, Form, Rational};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version `{0}`, expected `{SCHEMA_VERSION}`")]
    Version(String),
    #[error("{field}: {} ({source})", rational_error_name(.source))]
    Rational {
        field: String,
        source: RationalParseError,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("expected a `{expected}` document, got `{found}`")]
    Kind {
        expected: &'static str,
        found: &'static str,
    },
}

fn rational_error_name(e: &RationalParseError) -> &'static str {
    match e {
        RationalParseError::DenominatorZero(_) => "DenominatorZero",
        RationalParseError::Malformed(_) => "Malformed",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Weierstrass(WeierstrassDoc),
    Triple(TripleDoc),
    SurfaceGraph(GraphDoc),
    WeightQuery(WeightQueryDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeierstrassDoc {
    pub schema_version: String,
    pub n: u32,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDoc {
    pub schema_version: String,
    pub n: u32,
    pub a: Vec<String>,
    pub b: Vec<String>,
    /// Linear form `l0 T1 + l1 T0` as `[l0, l1]`.
    pub l: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub schema_version: String,
    pub marked_total: u32,
    pub components: Vec<ComponentDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub kind: String,
    pub j_degree: u32,
    pub markings: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_self_int: Option<String>,
    #[serde(default)]
    pub fibers: Vec<FiberDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDoc {
    pub fiber: String,
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absorbed: Option<AbsorbedDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorbedDoc {
    pub via: String,
    pub markings: u32,
    pub j_degree: u32,
    pub attached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub endpoints: [usize; 2],
    pub fiber_pair: [String; 2],
}

/// Fiber models at a weight `a`; `fibers` defaults to every fiber with a
/// model transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightQueryDoc {
    pub schema_version: String,
    pub a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibers: Vec<String>,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Weierstrass(_) => "weierstrass",
            Document::Triple(_) => "triple",
            Document::SurfaceGraph(_) => "surface_graph",
            Document::WeightQuery(_) => "weight_query",
        }
    }

    fn version(&self) -> &str {
        match self {
            Document::Weierstrass(d) => &d.schema_version,
            Document::Triple(d) => &d.schema_version,
            Document::SurfaceGraph(d) => &d.schema_version,
            Document::WeightQuery(d) => &d.schema_version,
        }
    }

    pub fn parse(text: &str) -> Result<Document, InputError> {
        let doc: Document = serde_json::from_str(text)?;
        if doc.version() != SCHEMA_VERSION {
            return Err(InputError::Version(doc.version().to_string()));
        }
        Ok(doc)
    }

    pub fn read(path: &str) -> Result<Document, InputError> {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
            path: path.to_string(),
            source,
        })?;
        Document::parse(&text)
    }

    /// Canonical text: rationals reduced, two-space indentation, final newline.
    pub fn canonical(&self) -> Result<String, InputError> {
        let doc = match self {
            Document::Weierstrass(d) => Document::Weierstrass(weierstrass_doc(&d.to_data()?)),
            Document::Triple(d) => Document::Triple(triple_doc(&d.to_triple()?)),
            Document::SurfaceGraph(d) => Document::SurfaceGraph(graph_doc(&d.to_graph()?)),
            Document::WeightQuery(d) => {
                let q = d.to_query()?;
                Document::WeightQuery(WeightQueryDoc {
                    schema_version: SCHEMA_VERSION.into(),
                    a: format_rational(&q.a),
                    convention: d
                        .convention
                        .as_ref()
                        .map(|_| convention_name(q.convention).into()),
                    fibers: q.fibers.iter().map(|f| f.to_string()).collect(),
                })
            }
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("documents serialize");
        text.push('\n');
        Ok(text)
    }
}

fn rational(field: impl Into<String>, text: &str) -> Result<Rational, InputError> {
    parse_rational(text).map_err(|source| InputError::Rational {
        field: field.into(),
        source,
    })
}

fn form(field: &str, coeffs: &[String], degree: usize) -> Result<Form, InputError> {
    if coeffs.len() != degree + 1 {
        return Err(InputError::Field {
            field: field.into(),
            message: format!("expected {} coefficients, got {}", degree + 1, coeffs.len()),
        });
    }
    let cs = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| rational(format!("{field}[{i}]"), c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BinaryForm::from_coeffs(cs))
}

fn fiber_type(field: String, text: &str) -> Result<FiberType, InputError> {
    text.parse()
        .map_err(|e: k3w_core::fiber::FiberParseError| InputError::Field {
            field,
            message: e.to_string(),
        })
}

fn coeff_texts(f: &Form) -> Vec<String> {
    f.coeffs().iter().map(format_rational).collect()
}

fn weierstrass(
    n: u32,
    a: &[String],
    b: &[String],
) -> Result<WeierstrassData<Rational>, InputError> {
    if n == 0 {
        return Err(InputError::Field {
            field: "n".into(),
            message: "must be at least 1".into(),
        });
    }
    let a = form("a", a, 4 * n as usize)?;
    let b = form("b", b, 6 * n as usize)?;
    WeierstrassData::new(n, a, b).map_err(|e| InputError::Field {
        field: "a, b".into(),
        message: e.to_string(),
    })
}

impl WeierstrassDoc {
    pub fn to_data(&self) -> Result<WeierstrassData<Rational>, InputError> {
        weierstrass(self.n, &self.a, &self.b)
    }
}

impl TripleDoc {
    pub fn to_triple(&self) -> Result<MarkedTriple<Rational>, InputError> {
        let w = weierstrass(self.n, &self.a, &self.b)?;
        let l = form("l", &self.l, 1)?;
        MarkedTriple::new(w, l).map_err(|e| InputError::Field {
            field: "l".into(),
            message: e.to_string(),
        })
    }
}

pub fn weierstrass_doc(w: &WeierstrassData<Rational>) -> WeierstrassDoc {
    WeierstrassDoc {
        schema_version: SCHEMA_VERSION.into(),
        n: w.n(),
        a: coeff_texts(w.a()),
        b: coeff_texts(w.b()),
    }
}

pub fn triple_doc(t: &MarkedTriple<Rational>) -> TripleDoc {
    let w = t.data();
    TripleDoc {
        schema_version: SCHEMA_VERSION.into(),
        n: w.n(),
        a: coeff_texts(w.a()),
        b: coeff_texts(w.b()),
        l: coeff_texts(t.marker()),
    }
}

const COMPONENT_KINDS: [(ComponentKind, &str); 3] = [
    (ComponentKind::NormalElliptic, "normal_elliptic"),
    (ComponentKind::IsotrivialJinf, "isotrivial_jinf"),
    (ComponentKind::TrivialProduct, "trivial_product"),
];

const FIBER_MODELS: [(FiberModel, &str); 4] = [
    (FiberModel::Weierstrass, "weierstrass"),
    (FiberModel::Intermediate, "intermediate"),
    (FiberModel::Twisted, "twisted"),
    (FiberModel::Stable, "stable"),
];

const CONVENTIONS: [(BoundaryConvention, &str); 2] = [
    (BoundaryConvention::ClosedAbove, "closed_above"),
    (BoundaryConvention::OpenAbove, "open_above"),
];

fn lookup<T: Copy>(table: &[(T, &str)], field: String, text: &str) -> Result<T, InputError> {
    table
        .iter()
        .find(|(_, name)| *name == text)
        .map(|(v, _)| *v)
        .ok_or_else(|| InputError::Field {
            field,
            message: format!(
                "unknown value `{text}`, expected one of {}",
                table.iter().map(|(_, n)| *n).collect::<Vec<_>>().join(", ")
            ),
        })
}

fn name_of<T: Copy + PartialEq>(table: &[(T, &'static str)], v: T) -> &'static str {
    table.iter().find(|(x, _)| *x == v).expect("total table").1
}

pub fn model_name(m: FiberModel) -> &'static str {
    name_of(&FIBER_MODELS, m)
}

pub fn convention_name(c: BoundaryConvention) -> &'static str {
    name_of(&CONVENTIONS, c)
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<SurfaceGraph, InputError> {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_spec(&format!("components[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let at = |j: usize| format!("edges[{i}].fiber_pair[{j}]");
                Ok(GluingEdge {
                    endpoints: (e.endpoints[0], e.endpoints[1]),
                    fiber_pair: (
                        fiber_type(at(0), &e.fiber_pair[0])?,
                        fiber_type(at(1), &e.fiber_pair[1])?,
                    ),
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(SurfaceGraph {
            components,
            edges,
            marked_total: self.marked_total,
        })
    }
}

impl ComponentDoc {
    fn to_spec(&self, path: &str) -> Result<ComponentSpec, InputError> {
        let fibers = self
            .fibers
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let at = format!("{path}.fibers[{i}]");
                let absorbed = f
                    .absorbed
                    .as_ref()
                    .map(|a| {
                        Ok::<_, InputError>(Absorbed {
                            via: fiber_type(format!("{at}.absorbed.via"), &a.via)?,
                            markings: a.markings,
                            j_degree: a.j_degree,
                            attached: a.attached,
                        })
                    })
                    .transpose()?;
                Ok(FiberEntry {
                    fiber: fiber_type(format!("{at}.fiber"), &f.fiber)?,
                    model: lookup(&FIBER_MODELS, format!("{at}.model"), &f.model)?,
                    absorbed,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(ComponentSpec {
            kind: lookup(&COMPONENT_KINDS, format!("{path}.kind"), &self.kind)?,
            j_degree: self.j_degree,
            fibers,
            markings: self.markings,
            section_self_int: self
                .section_self_int
                .as_deref()
                .map(|s| rational(format!("{path}.section_self_int"), s))
                .transpose()?,
        })
    }
}

pub fn graph_doc(g: &SurfaceGraph) -> GraphDoc {
    let components = g
        .components
        .iter()
        .map(|c| ComponentDoc {
            kind: name_of(&COMPONENT_KINDS, c.kind).into(),
            j_degree: c.j_degree,
            markings: c.markings,
            section_self_int: c.section_self_int.as_ref().map(format_rational),
            fibers: c
                .fibers
                .iter()
                .map(|f| FiberDoc {
                    fiber: f.fiber.to_string(),
                    model: model_name(f.model).into(),
                    absorbed: f.absorbed.as_ref().map(|a| AbsorbedDoc {
                        via: a.via.to_string(),
                        markings: a.markings,
                        j_degree: a.j_degree,
                        attached: a.attached,
                    }),
                })
                .collect(),
        })
        .collect();
    let edges = g
        .edges
        .iter()
        .map(|e| EdgeDoc {
            endpoints: [e.endpoints.0, e.endpoints.1],
            fiber_pair: [e.fiber_pair.0.to_string(), e.fiber_pair.1.to_string()],
        })
        .collect();
    GraphDoc {
        schema_version: SCHEMA_VERSION.into(),
        marked_total: g.marked_total,
        components,
        edges,
    }
}

pub struct WeightQuery {
    pub a: Rational,
    pub convention: BoundaryConvention,
    pub fibers: Vec<FiberType>,
}

impl WeightQueryDoc {
    pub fn to_query(&self) -> Result<WeightQuery, InputError> {
        let convention = match &self.convention {
            Some(c) => lookup(&CONVENTIONS, "convention".into(), c)?,
            None => BoundaryConvention::default(),
        };
        let fibers = self
            .fibers
            .iter()
            .enumerate()
            .map(|(i, f)| fiber_type(format!("fibers[{i}]"), f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightQuery {
            a: rational("a", &self.a)?,
            convention,
            fibers,
        })
    }
}
