//! Canonical JSON: sorted keys, compact, rationals as reduced "p/q" strings.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::arrangement::FaceRef;
use crate::constructions::{CylindricalLayout, Layout, Page, TwoPageLayout};
use crate::drawing::{ClassTag, Drawing, EdgeKey, Polyline, VertexId};
use crate::error::{Error, Result};
use crate::goodness::crossing_count;
use crate::kedges::{check_identity2, check_shellable_bound, cumulative, spectrum, zeta, BoundVerdict};
use crate::optimizer::OptResult;
use crate::scalar::{format_scalar, parse_scalar, Point, Scalar};
use crate::shelling::{witness_point, CycleWitness, PipelineVerdict, ShellingCertificate};

/// Compact canonical text with a trailing newline. serde_json objects are
/// BTreeMap-backed, so keys come out sorted.
pub fn to_canonical(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn rat(s: &Scalar) -> Value {
    Value::String(format_scalar(s))
}

fn point_pair(p: &Point) -> Value {
    json!([rat(&p.x), rat(&p.y)])
}

fn edge_name(e: &EdgeKey) -> String {
    format!("{}-{}", e.lo.0, e.hi.0)
}

fn ids(v: &[VertexId]) -> Value {
    Value::Array(v.iter().map(|i| json!(i.0)).collect())
}

pub fn layout_to_json(l: &Layout) -> Value {
    match l {
        Layout::TwoPage(l) => json!({
            "spine": ids(&l.spine),
            "pages": l.pages.iter().map(|(e, p)| (edge_name(e), json!(p.as_str()))).collect::<Map<_, _>>(),
        }),
        Layout::Cylindrical(l) => {
            let circle = |c: &[(VertexId, Scalar)]| -> Value {
                c.iter().map(|(v, t)| json!({"id": v.0, "turn": rat(t)})).collect()
            };
            json!({
                "inner": circle(&l.inner),
                "outer": circle(&l.outer),
                "delta": l.delta.iter().map(|(e, d)| (edge_name(e), rat(d))).collect::<Map<_, _>>(),
            })
        }
    }
}

pub fn drawing_to_json(d: &Drawing) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json!(d.n()));
    m.insert("class".into(), json!(d.class().as_str()));
    m.insert(
        "vertices".into(),
        d.vertices()
            .iter()
            .map(|(v, p)| json!({"id": v.0, "x": rat(&p.x), "y": rat(&p.y)}))
            .collect(),
    );
    m.insert(
        "edges".into(),
        d.edges()
            .iter()
            .map(|(e, l)| {
                json!({
                    "u": e.lo.0,
                    "v": e.hi.0,
                    "polyline": l.points().iter().map(point_pair).collect::<Vec<_>>(),
                })
            })
            .collect(),
    );
    if let Some(l) = d.layout() {
        m.insert("layout".into(), layout_to_json(l));
    }
    Value::Object(m)
}

pub fn drawing_to_string(d: &Drawing) -> String {
    to_canonical(&drawing_to_json(d))
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

fn as_rat(v: &Value, what: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_integer(n.as_i64().unwrap().into())),
        _ => Err(parse_err(format!("{what} must be a rational string \"p/q\""))),
    }
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what} must be an object")))
}

fn parse_edge_name(s: &str) -> Result<EdgeKey> {
    let (a, b) = s.split_once('-').ok_or_else(|| parse_err(format!("bad edge name {s:?}")))?;
    let a: u32 = a.parse().map_err(|_| parse_err(format!("bad edge name {s:?}")))?;
    let b: u32 = b.parse().map_err(|_| parse_err(format!("bad edge name {s:?}")))?;
    if a == b {
        return Err(Error::Structural(format!("loop edge {s:?}")));
    }
    Ok(EdgeKey::of(a, b))
}

pub fn layout_from_json(v: &Value) -> Result<Layout> {
    let obj = as_object(v, "layout")?;
    if obj.contains_key("spine") {
        let spine = as_array(field(v, "spine")?, "spine")?
            .iter()
            .map(|x| as_u32(x, "spine entry").map(VertexId))
            .collect::<Result<Vec<_>>>()?;
        let mut pages = BTreeMap::new();
        for (name, p) in as_object(field(v, "pages")?, "pages")? {
            let p = p.as_str().ok_or_else(|| parse_err("page must be a string"))?;
            if pages.insert(parse_edge_name(name)?, Page::parse(p)?).is_some() {
                return Err(Error::Structural(format!("edge {name} paged twice")));
            }
        }
        Ok(Layout::TwoPage(TwoPageLayout::new(spine, pages)?))
    } else {
        let circle = |key: &str| -> Result<Vec<(VertexId, Scalar)>> {
            as_array(field(v, key)?, key)?
                .iter()
                .map(|e| Ok((VertexId(as_u32(field(e, "id")?, "id")?), as_rat(field(e, "turn")?, "turn")?)))
                .collect()
        };
        let mut delta = BTreeMap::new();
        for (name, d) in as_object(field(v, "delta")?, "delta")? {
            if delta.insert(parse_edge_name(name)?, as_rat(d, "delta")?).is_some() {
                return Err(Error::Structural(format!("edge {name} has two displacements")));
            }
        }
        Ok(Layout::Cylindrical(CylindricalLayout::new(circle("inner")?, circle("outer")?, delta)?))
    }
}

pub fn drawing_from_json(v: &Value) -> Result<Drawing> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| parse_err("n must be an integer"))? as usize;
    let class = ClassTag::parse(field(v, "class")?.as_str().ok_or_else(|| parse_err("class must be a string"))?)?;
    let mut vertices = BTreeMap::new();
    for entry in as_array(field(v, "vertices")?, "vertices")? {
        let id = VertexId(as_u32(field(entry, "id")?, "vertex id")?);
        let p = Point::new(as_rat(field(entry, "x")?, "x")?, as_rat(field(entry, "y")?, "y")?);
        if vertices.insert(id, p).is_some() {
            return Err(Error::Structural(format!("vertex {id} listed twice")));
        }
    }
    if vertices.len() != n {
        return Err(Error::Structural(format!("n = {n} but {} vertices listed", vertices.len())));
    }
    let mut edges = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for entry in as_array(field(v, "edges")?, "edges")? {
        let (a, b) = (as_u32(field(entry, "u")?, "u")?, as_u32(field(entry, "v")?, "v")?);
        if a == b {
            return Err(Error::Structural(format!("loop edge at vertex {a}")));
        }
        let key = EdgeKey::of(a, b);
        if !seen.insert(key) {
            return Err(Error::Structural(format!("edge {key} listed twice")));
        }
        let pts = as_array(field(entry, "polyline")?, "polyline")?
            .iter()
            .map(|p| {
                let pair = as_array(p, "polyline point")?;
                if pair.len() != 2 {
                    return Err(parse_err("polyline points are [x, y] pairs"));
                }
                Ok(Point::new(as_rat(&pair[0], "x")?, as_rat(&pair[1], "y")?))
            })
            .collect::<Result<Vec<_>>>()?;
        // Stored oriented from u to v.
        let line = Polyline::new(pts)?;
        let line = if a < b { line } else { line.reversed() };
        edges.insert(key, line);
    }
    let layout = match v.get("layout") {
        None | Some(Value::Null) => None,
        Some(l) => Some(layout_from_json(l)?),
    };
    Drawing::new(class, vertices, edges, layout)
}

pub fn drawing_from_str(s: &str) -> Result<Drawing> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?;
    drawing_from_json(&v)
}

/// Parses `"x,y"` with rational coordinates into a face designation.
pub fn parse_face_ref(s: &str) -> Result<FaceRef> {
    if s.trim() == "unbounded" {
        return Ok(FaceRef::Unbounded);
    }
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| parse_err(format!("face point must be \"x,y\", got {s:?}")))?;
    Ok(FaceRef::Point(Point::new(parse_scalar(x)?, parse_scalar(y)?)))
}

pub fn parse_vertex_list(s: &str) -> Result<Vec<VertexId>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map(VertexId)
                .map_err(|_| parse_err(format!("bad vertex id {t:?}")))
        })
        .collect()
}

fn bound_rows(rows: &[BoundVerdict]) -> Value {
    rows.iter()
        .map(|b| json!({"k": b.k, "lhs": b.lhs, "rhs": b.rhs, "pass": b.pass}))
        .collect()
}

/// Crossings, k-edge spectrum and cumulative tables w.r.t. `f`, the crossing
/// identity, and the E<=<=k bound rows for every k <= floor((n-3)/2).
pub fn analysis_report(d: &Drawing, f: &FaceRef) -> Result<Value> {
    let n = d.n();
    let crossings = crossing_count(d)?;
    let spec = spectrum(d, f)?;
    let table = cumulative(&spec);
    let id2 = check_identity2(d)?;
    let rows = if n >= 3 { check_shellable_bound(d, f, (n as i64 - 3) / 2)? } else { Vec::new() };
    Ok(json!({
        "n": n,
        "crossings": crossings,
        "spectrum": table.counts,
        "leq": table.leq,
        "leqleq": table.leqleq,
        "identity2": id2.equal,
        "zeta": zeta(n as u64),
        "shellable_bound": bound_rows(&rows),
    }))
}

fn point_obj(p: &Point) -> Value {
    json!({"x": rat(&p.x), "y": rat(&p.y)})
}

pub fn certificate_to_json(c: &ShellingCertificate) -> Value {
    json!({
        "S": ids(&c.sequence),
        "witness": point_obj(&c.witness_point),
        "pairs": c.pairs.iter().map(|p| json!({
            "i": p.i,
            "j": p.j,
            "vi_on_boundary": p.vi_on_boundary,
            "vj_on_boundary": p.vj_on_boundary,
        })).collect::<Vec<_>>(),
        "valid": c.valid,
    })
}

pub fn cycle_to_json(w: &CycleWitness) -> Value {
    json!({
        "cycle": ids(&w.cycle),
        "pass": w.pass,
        "violations": w.violations(),
    })
}

pub fn verdict_to_json(d: &Drawing, v: &PipelineVerdict) -> Value {
    json!({
        "n": v.n,
        "s": v.s,
        "route": v.kind.map(|k| k.as_str()),
        "S": ids(&v.sequence),
        "witness": v.witness.as_ref().map(|f| point_obj(&witness_point(d, f))),
        "crossings": v.crossings,
        "zeta": v.zeta,
        "bound_chain": bound_rows(&v.bound_chain),
        "status": v.conclusion.as_str(),
    })
}

pub fn opt_result_to_json(r: &OptResult) -> Value {
    json!({
        "n": r.n,
        "count": r.count,
        "zeta": zeta(r.n as u64),
        "method": r.method.as_str(),
        "status": r.status.as_str(),
        "seeds": r.seeds,
        "explored": r.explored,
        "layout": layout_to_json(&Layout::TwoPage(r.layout.clone())),
    })
}
