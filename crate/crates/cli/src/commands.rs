use std::collections::BTreeMap;

use k3w_core::fiber::{
    classify_all, deg_l_jinfty, discriminant, FiberReport, FiberType, WeierstrassData,
};
use k3w_core::git::{
    classify_git_boundary, hm_candidates, hm_oracle, marked_stability, GitBoundaryClass,
    GitCriterion, GitError, MarkedTriple, Stability, StabilityVerdict, Witness,
};
use k3w_core::random::Sampler;
use k3w_core::scalar::{format_rational, parse_rational};
use k3w_core::strata::{count_strata, enumerate_strata, StrataQuery, StratumDescriptor};
use k3w_core::surface::{
    advisories, validate as validate_graph, Advisory, GraphError, ValidationMode,
};
use k3w_core::walls::{enumerate_walls, fiber_model, lct_table, LctFiber, Wall, WallScope};
use k3w_core::{Order, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::schema::{
    convention_name, model_name, triple_doc, weierstrass_doc, Document, InputError, SCHEMA_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("GraphError: {0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Usage(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Graph(_) | CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// Library failures on parsed input mean the data itself is unusable.
fn data_error(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid data: {e}"))
}

fn print_json(report: &str, mut body: Value) {
    let obj = body.as_object_mut().expect("reports are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("report".into(), json!(report));
    println!("{}", serde_json::to_string_pretty(&body).expect("json"));
}

fn mismatch(expected: &'static str, doc: &Document) -> CliError {
    InputError::Kind {
        expected,
        found: doc.kind(),
    }
    .into()
}

fn order_json(o: Order) -> Value {
    match o {
        Order::Finite(v) => json!(v),
        Order::Infinite => json!("inf"),
    }
}

fn class_name(c: GitBoundaryClass) -> &'static str {
    match c {
        GitBoundaryClass::InteriorAde => "INTERIOR_ADE",
        GitBoundaryClass::SlcJinf => "SLC_JINF",
        GitBoundaryClass::LLocus => "L_LOCUS",
        GitBoundaryClass::PolystableCorner => "POLYSTABLE_CORNER",
        GitBoundaryClass::Unstable => "UNSTABLE",
    }
}

struct Totals {
    isotrivial_jinf: bool,
    delta_total: Option<u32>,
    deg_l: Option<Rational>,
    class: Option<GitBoundaryClass>,
}

fn totals(
    w: &WeierstrassData<Rational>,
    reports: &[FiberReport<Rational>],
) -> Result<Totals, CliError> {
    let isotrivial_jinf = discriminant(w).is_zero();
    let (delta_total, deg_l) = if isotrivial_jinf {
        let mut counts = BTreeMap::new();
        for r in reports {
            if let FiberType::N(k) = r.fiber {
                *counts.entry(k).or_insert(0) += r.place.degree() as u32;
            }
        }
        (None, Some(deg_l_jinfty(&counts)))
    } else {
        let sum = reports
            .iter()
            .map(|r| {
                r.discriminant_mult
                    .finite()
                    .map(|v| v * r.place.degree() as u32)
            })
            .sum::<Option<u32>>()
            .ok_or_else(|| CliError::Internal("infinite order on a nonzero discriminant".into()))?;
        (Some(sum), None)
    };
    let class = match classify_git_boundary(w) {
        Ok(c) => Some(c),
        Err(GitError::NotK3(_)) => None,
        Err(e) => return Err(data_error(e)),
    };
    Ok(Totals {
        isotrivial_jinf,
        delta_total,
        deg_l,
        class,
    })
}

pub fn classify(path: &str, json: bool) -> Result<Outcome, CliError> {
    let w = match Document::read(path)? {
        Document::Weierstrass(d) => d.to_data()?,
        Document::Triple(d) => d.to_triple()?.data().clone(),
        other => return Err(mismatch("weierstrass", &other)),
    };
    let reports = classify_all(&w).map_err(data_error)?;
    let t = totals(&w, &reports)?;
    if json {
        let places: Vec<Value> = reports
            .iter()
            .map(|r| {
                let p = r.place.profile;
                json!({
                    "place": r.place.form.to_string(),
                    "degree": r.place.degree(),
                    "v_a": order_json(p.v_a),
                    "v_b": order_json(p.v_b),
                    "v_delta": order_json(p.v_delta),
                    "fiber": r.fiber.to_string(),
                    "slc": r.slc,
                    "lct_zero": r.lct_zero,
                })
            })
            .collect();
        print_json(
            "classify",
            json!({
                "n": w.n(),
                "places": places,
                "isotrivial_jinf": t.isotrivial_jinf,
                "discriminant_total": t.delta_total,
                "deg_l": t.deg_l.as_ref().map(format_rational),
                "git_class": t.class.map(class_name),
            }),
        );
    } else {
        println!(
            "{:<28} {:>3} {:<14} {:<10} {:<4} lct0",
            "place", "deg", "(vA, vB, vD)", "fiber", "slc"
        );
        for r in &reports {
            println!(
                "{:<28} {:>3} {:<14} {:<10} {:<4} {}",
                r.place.form.to_string(),
                r.place.degree(),
                r.place.profile.to_string(),
                r.fiber.to_string(),
                if r.slc { "yes" } else { "no" },
                if r.lct_zero { "yes" } else { "no" },
            );
        }
        match (&t.delta_total, &t.deg_l) {
            (Some(d), _) => println!("discriminant total: {d}"),
            (None, Some(l)) => println!("isotrivial j = inf, deg L: {}", format_rational(l)),
            (None, None) => {}
        }
        if let Some(c) = t.class {
            println!("GIT class: {}", class_name(c));
        }
    }
    Ok(Outcome::Positive)
}

fn status_name(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "STABLE",
        Stability::Unstable => "UNSTABLE",
    }
}

fn witness_json(w: &Witness<Rational>) -> Value {
    json!({
        "place": w.place.form.to_string(),
        "v_a": order_json(w.place.profile.v_a),
        "v_b": order_json(w.place.profile.v_b),
        "v_delta": order_json(w.place.profile.v_delta),
        "v_l": w.v_l,
    })
}

/// Errors with a bug report when the two verdicts differ.
fn cross_check(
    t: &MarkedTriple<Rational>,
    criterion: &StabilityVerdict<Rational>,
    oracle: &StabilityVerdict<Rational>,
) -> Result<(), CliError> {
    if criterion.status == oracle.status {
        return Ok(());
    }
    let doc = Document::Triple(triple_doc(t));
    let dump = json!({
        "input": serde_json::to_value(&doc).expect("json"),
        "criterion": status_name(criterion.status),
        "oracle": status_name(oracle.status),
        "criterion_witness": criterion.witness.as_ref().map(witness_json),
        "oracle_witness": oracle.witness.as_ref().map(witness_json),
    });
    Err(CliError::Internal(format!(
        "criterion and Hilbert-Mumford oracle disagree; bug report:\n{}",
        serde_json::to_string_pretty(&dump).expect("json")
    )))
}

pub fn git_check(path: &str, oracle: bool, json: bool) -> Result<Outcome, CliError> {
    let t = match Document::read(path)? {
        Document::Triple(d) => d.to_triple()?,
        other => return Err(mismatch("triple", &other)),
    };
    let verdict = marked_stability(&t, GitCriterion::Proof).map_err(data_error)?;
    let agreement = if oracle {
        let candidates = hm_candidates(&t).map_err(data_error)?;
        let o = hm_oracle(&t, &candidates).map_err(data_error)?;
        cross_check(&t, &verdict, &o)?;
        Some("agrees")
    } else {
        None
    };
    if json {
        print_json(
            "git_check",
            json!({
                "status": status_name(verdict.status),
                "witness": verdict.witness.as_ref().map(witness_json),
                "oracle": agreement,
            }),
        );
    } else {
        println!("status: {}", status_name(verdict.status));
        if let Some(w) = &verdict.witness {
            println!(
                "witness: {}  profile {}  v_l {}",
                w.place.form, w.place.profile, w.v_l
            );
        }
        if let Some(a) = agreement {
            println!("oracle: {a}");
        }
    }
    Ok(match verdict.status {
        Stability::Stable => Outcome::Positive,
        Stability::Unstable => Outcome::Negative,
    })
}

fn wall_json(w: &Wall) -> Value {
    json!({
        "value": format_rational(&w.value),
        "kind": w.kind.to_string(),
        "transition": w.transition.to_string(),
    })
}

fn wall_line(w: &Wall) -> String {
    format!("{} {} {}", format_rational(&w.value), w.kind, w.transition)
}

fn parse_flag_rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

pub fn walls(above: Option<&str>, json: bool) -> Result<Outcome, CliError> {
    let scope = match above {
        Some(x) => WallScope::Above(parse_flag_rational("above", x)?),
        None => WallScope::All,
    };
    let list = enumerate_walls(&scope);
    if json {
        print_json(
            "walls",
            json!({ "walls": list.iter().map(wall_json).collect::<Vec<_>>() }),
        );
    } else {
        for w in &list {
            println!("{}", wall_line(w));
        }
    }
    Ok(Outcome::Positive)
}

fn lct_fiber_representative(f: LctFiber) -> FiberType {
    match f {
        LctFiber::II => FiberType::II,
        LctFiber::III => FiberType::III,
        LctFiber::IV => FiberType::IV,
        LctFiber::N1 => FiberType::N(1),
        LctFiber::IIStar => FiberType::IIStar,
        LctFiber::IIIStar => FiberType::IIIStar,
        LctFiber::IVStar => FiberType::IVStar,
        LctFiber::IStar => FiberType::IStar(0),
    }
}

pub fn weight_query(path: &str, json: bool) -> Result<Outcome, CliError> {
    let q = match Document::read(path)? {
        Document::WeightQuery(d) => d.to_query()?,
        other => return Err(mismatch("weight_query", &other)),
    };
    let fibers = if q.fibers.is_empty() {
        lct_table()
            .into_iter()
            .map(|e| lct_fiber_representative(e.fiber))
            .chain([FiberType::N(2), FiberType::L])
            .collect()
    } else {
        q.fibers.clone()
    };
    let models = fibers
        .iter()
        .map(|&f| {
            fiber_model(f, &q.a, q.convention)
                .map(|m| (f, m))
                .map_err(data_error)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let all = enumerate_walls(&WallScope::All);
    let below = all.iter().rfind(|w| w.value <= q.a);
    let above = all.iter().find(|w| w.value > q.a);
    if json {
        print_json(
            "weight_query",
            json!({
                "a": format_rational(&q.a),
                "convention": convention_name(q.convention),
                "models": models
                    .iter()
                    .map(|(f, m)| json!({ "fiber": f.to_string(), "model": model_name(*m) }))
                    .collect::<Vec<_>>(),
                "wall_at_or_below": below.map(wall_json),
                "wall_above": above.map(wall_json),
            }),
        );
    } else {
        println!(
            "a = {} ({})",
            format_rational(&q.a),
            convention_name(q.convention)
        );
        for (f, m) in &models {
            println!("{:<6} {}", f.to_string(), model_name(*m));
        }
        if let Some(w) = below {
            println!("wall at or below: {}", wall_line(w));
        }
        if let Some(w) = above {
            println!("wall above: {}", wall_line(w));
        }
    }
    Ok(Outcome::Positive)
}

fn stratum_json(d: &StratumDescriptor) -> Value {
    json!({
        "family": d.family.name(),
        "r": d.r,
        "s": d.s,
        "n": d.n,
        "partition": d.partition,
        "dim": d.dim,
        "factors": d.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "annotations": d.annotations.iter().map(|a| format!("{a:?}")).collect::<Vec<_>>(),
    })
}

fn stratum_line(d: &StratumDescriptor) -> String {
    let opt = |x: Option<u32>| x.map_or("-".to_string(), |v| v.to_string());
    let factors: Vec<String> = d.factors.iter().map(|f| f.to_string()).collect();
    let mut line = format!(
        "{:<10} r={:<2} s={:<2} n={:<2} dim={:<2} {:?} {}",
        d.family.name(),
        opt(d.r),
        opt(d.s),
        d.n,
        d.dim,
        d.partition,
        factors.join(" x ")
    );
    for a in &d.annotations {
        line.push_str(&format!(" [{a:?}]"));
    }
    line
}

pub fn strata(queries: &[StrataQuery], count: bool, json: bool) -> Result<Outcome, CliError> {
    if count {
        let n: u64 = queries.iter().map(count_strata).sum();
        if json {
            print_json("strata_count", json!({ "count": n }));
        } else {
            println!("{n}");
        }
        return Ok(Outcome::Positive);
    }
    let all = || queries.iter().flat_map(enumerate_strata);
    if json {
        let list: Vec<Value> = all().map(|d| stratum_json(&d)).collect();
        print_json("strata", json!({ "count": list.len(), "strata": list }));
    } else {
        for d in all() {
            println!("{}", stratum_line(&d));
        }
    }
    Ok(Outcome::Positive)
}

pub fn validate(path: &str, mode: ValidationMode, json: bool) -> Result<Outcome, CliError> {
    let g = match Document::read(path)? {
        Document::SurfaceGraph(d) => d.to_graph()?,
        other => return Err(mismatch("surface_graph", &other)),
    };
    let violations = validate_graph(&g, mode)?;
    let notes: Vec<String> = advisories(&g)
        .iter()
        .map(|a| match a {
            Advisory::LctZero { at, fiber } => format!("LctZero: {fiber} at {at}"),
        })
        .collect();
    if json {
        print_json(
            "validate",
            json!({
                "valid": violations.is_empty(),
                "violations": violations
                    .iter()
                    .map(|v| json!({
                        "name": v.name(),
                        "condition": v.condition(),
                        "message": v.to_string(),
                    }))
                    .collect::<Vec<_>>(),
                "advisories": notes,
            }),
        );
    } else {
        if violations.is_empty() {
            println!("valid");
        }
        for v in &violations {
            println!("{v}");
        }
        for n in &notes {
            println!("note: {n}");
        }
    }
    Ok(if violations.is_empty() {
        Outcome::Positive
    } else {
        Outcome::Negative
    })
}

pub fn gen_random(triple: bool, n: u32, height: i64, seed: u64) -> Result<Outcome, CliError> {
    if n == 0 || height < 1 {
        return Err(CliError::Usage("--n and --height must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Sampler { height };
    let w: WeierstrassData<Rational> = s.weierstrass(&mut rng, n);
    let doc = if triple {
        Document::Triple(triple_doc(&s.triple(&mut rng, w)))
    } else {
        Document::Weierstrass(weierstrass_doc(&w))
    };
    print!("{}", doc.canonical()?);
    Ok(Outcome::Positive)
}

pub fn fmt(path: &str) -> Result<Outcome, CliError> {
    print!("{}", Document::read(path)?.canonical()?);
    Ok(Outcome::Positive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use k3w_core::{BinaryForm, ExactField, P1Point};

    fn unstable_triple() -> MarkedTriple<Rational> {
        let one = Rational::from_i64(1);
        let w = WeierstrassData::new(
            2,
            BinaryForm::monomial(8, 5, one.clone()),
            BinaryForm::monomial(12, 7, one),
        )
        .unwrap();
        MarkedTriple::new(w, P1Point::Infinity.linear_form()).unwrap()
    }

    #[test]
    fn disagreement_is_internal_error() {
        let t = unstable_triple();
        let v = marked_stability(&t, GitCriterion::Proof).unwrap();
        assert_eq!(v.status, Stability::Unstable);
        let flipped = StabilityVerdict {
            status: Stability::Stable,
            witness: None,
        };
        let err = cross_check(&t, &v, &flipped).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("\"oracle\": \"STABLE\""));
        assert!(cross_check(&t, &v, &v).is_ok());
    }
}
