//! JSON and text formats. Rationals are written as strings (`"3"`,
//! `"-1/2"`); on input integers may also be plain JSON numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decomp::{DepthDecomposition, ExtendedDepthDecomposition, RootedTree};
use crate::error::{Error, Result};
use crate::graphs::RootedForest;
use crate::ipsolve::{IPInstance, IPSolution, ObjectiveTerm};
use crate::ratmat::{is_integer, parse_rat, Rat, RatMatrix};
use crate::rowtransform::{Provenance, TransformResult};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    fn to_rat(&self) -> Result<Rat> {
        match self {
            RatRepr::Int(v) => Ok(Rat::from_integer((*v).into())),
            RatRepr::Str(s) => parse_rat(s),
        }
    }

    fn to_i64(&self) -> Result<i64> {
        let r = self.to_rat()?;
        if !is_integer(&r) {
            return Err(Error::Parse(format!("expected an integer, got {r}")));
        }
        i64::try_from(r.to_integer()).map_err(|_| Error::Parse(format!("{r} exceeds 64 bits")))
    }
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse_rows(rows: &[Vec<RatRepr>], cols_hint: Option<usize>) -> Result<RatMatrix> {
    let parsed: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(RatRepr::to_rat).collect())
        .collect::<Result<_>>()?;
    if parsed.is_empty() {
        return Ok(RatMatrix::zeros(0, cols_hint.unwrap_or(0)));
    }
    RatMatrix::from_rows(parsed).map_err(|_| Error::Parse("rows of different lengths".into()))
}

pub fn matrix_to_json(m: &RatMatrix) -> Value {
    json!(m.to_string_rows())
}

/// Matrix from a JSON array of rows.
pub fn matrix_from_json(v: &Value) -> Result<RatMatrix> {
    let rows: Vec<Vec<RatRepr>> = serde_json::from_value(v.clone()).map_err(parse_err)?;
    parse_rows(&rows, None)
}

/// Matrix in the text format, or a JSON array of rows if the input starts
/// with `[`.
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(text).map_err(parse_err)?;
        matrix_from_json(&v)
    } else {
        RatMatrix::parse_text(text)
    }
}

// ---- decompositions -------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DecompositionJson {
    parents: Vec<Option<usize>>,
    root: usize,
    leaf_map: BTreeMap<usize, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis_map: Option<BTreeMap<usize, Vec<RatRepr>>>,
}

fn tree_from(parents: Vec<Option<usize>>, root: usize) -> Result<RootedTree> {
    let tree = RootedTree::new(parents).map_err(|e| Error::Parse(e.to_string()))?;
    if tree.root() != root {
        return Err(Error::Parse(format!("root is {}, not {root}", tree.root())));
    }
    Ok(tree)
}

pub fn decomposition_to_json(d: &DepthDecomposition) -> Value {
    json!({
        "parents": d.tree.parents(),
        "root": d.tree.root(),
        "leaf_map": d.leaf_map,
    })
}

pub fn extended_to_json(e: &ExtendedDepthDecomposition) -> Value {
    let basis: BTreeMap<usize, Vec<String>> = e.basis_map.iter().map(|(&v, w)| (v, rats(w))).collect();
    json!({
        "parents": e.tree.parents(),
        "root": e.tree.root(),
        "leaf_map": e.leaf_map,
        "basis_map": basis,
    })
}

/// A decomposition, extended if the JSON carries a `basis_map`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyDecomposition {
    Plain(DepthDecomposition),
    Extended(ExtendedDepthDecomposition),
}

pub fn decomposition_from_json(v: &Value) -> Result<AnyDecomposition> {
    let dto: DecompositionJson = serde_json::from_value(v.clone()).map_err(parse_err)?;
    let tree = tree_from(dto.parents, dto.root)?;
    Ok(match dto.basis_map {
        None => AnyDecomposition::Plain(DepthDecomposition {
            tree,
            leaf_map: dto.leaf_map,
        }),
        Some(basis) => AnyDecomposition::Extended(ExtendedDepthDecomposition {
            tree,
            leaf_map: dto.leaf_map,
            basis_map: basis
                .into_iter()
                .map(|(k, w)| Ok((k, w.iter().map(RatRepr::to_rat).collect::<Result<_>>()?)))
                .collect::<Result<_>>()?,
        }),
    })
}

// ---- transforms -----------------------------------------------------------

pub fn transform_to_json(r: &TransformResult) -> Value {
    json!({
        "kind": "transform",
        "mode": r.provenance.as_str(),
        "depth": r.reported_depth,
        "branch_depth": r.branch_depth,
        "matrix": matrix_to_json(&r.source),
        "kept_rows": r.kept_rows,
        "removed_rows": r.removed_rows,
        "B": matrix_to_json(&r.b),
        "A_prime": matrix_to_json(&r.a_prime),
        "forest": r.witness_forest.parents(),
        "row_nodes": r.row_nodes,
        "decomposition": extended_to_json(&r.decomposition),
    })
}

#[derive(Deserialize)]
struct TransformJson {
    mode: String,
    depth: usize,
    branch_depth: Option<usize>,
    matrix: Vec<Vec<RatRepr>>,
    kept_rows: Vec<usize>,
    removed_rows: Vec<usize>,
    #[serde(rename = "B")]
    b: Vec<Vec<RatRepr>>,
    #[serde(rename = "A_prime")]
    a_prime: Vec<Vec<RatRepr>>,
    forest: Vec<Option<usize>>,
    row_nodes: Vec<usize>,
    decomposition: Value,
}

/// Reads a transform back without checking any invariant beyond shape.
pub fn transform_from_json(v: &Value) -> Result<TransformResult> {
    let dto: TransformJson = serde_json::from_value(v.clone()).map_err(parse_err)?;
    let provenance = match dto.mode.as_str() {
        "exact" => Provenance::Exact,
        "heuristic" => Provenance::Heuristic,
        "supplied" => Provenance::Supplied,
        other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
    };
    let decomposition = match decomposition_from_json(&dto.decomposition)? {
        AnyDecomposition::Extended(e) => e,
        AnyDecomposition::Plain(_) => return Err(Error::Parse("transform decomposition lacks basis_map".into())),
    };
    let source = parse_rows(&dto.matrix, None)?;
    let r = dto.kept_rows.len();
    Ok(TransformResult {
        b: parse_rows(&dto.b, Some(r))?,
        a_prime: parse_rows(&dto.a_prime, Some(source.cols()))?,
        source,
        kept_rows: dto.kept_rows,
        removed_rows: dto.removed_rows,
        witness_forest: RootedForest::new(dto.forest).map_err(|e| Error::Parse(e.to_string()))?,
        reported_depth: dto.depth,
        provenance,
        branch_depth: dto.branch_depth,
        decomposition,
        row_nodes: dto.row_nodes,
    })
}

// ---- artifacts ------------------------------------------------------------

/// Anything `verify` accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Decomposition {
        matrix: RatMatrix,
        decomposition: AnyDecomposition,
    },
    Transform(Box<TransformResult>),
}

/// Wraps a decomposition with its source matrix.
pub fn decomposition_artifact(matrix: &RatMatrix, d: &AnyDecomposition) -> Value {
    let (kind, body) = match d {
        AnyDecomposition::Plain(d) => ("decomposition", decomposition_to_json(d)),
        AnyDecomposition::Extended(e) => ("extended", extended_to_json(e)),
    };
    json!({ "kind": kind, "matrix": matrix_to_json(matrix), "decomposition": body })
}

pub fn parse_artifact(text: &str) -> Result<Artifact> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    match v.get("kind").and_then(Value::as_str) {
        Some("transform") => Ok(Artifact::Transform(Box::new(transform_from_json(&v)?))),
        Some("decomposition") | Some("extended") => {
            let matrix = v
                .get("matrix")
                .ok_or_else(|| Error::Parse("missing matrix".into()))
                .and_then(matrix_from_json)?;
            let decomposition = v
                .get("decomposition")
                .ok_or_else(|| Error::Parse("missing decomposition".into()))
                .and_then(decomposition_from_json)?;
            Ok(Artifact::Decomposition { matrix, decomposition })
        }
        other => Err(Error::Parse(format!("unknown artifact kind {other:?}"))),
    }
}

// ---- instances and solutions ----------------------------------------------

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum TermJson {
    Linear { c: RatRepr },
    Quadratic { a: RatRepr, c: RatRepr },
    Pwl { points: Vec<(RatRepr, RatRepr)> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
struct InstanceJson {
    #[serde(rename = "A")]
    a: Vec<Vec<RatRepr>>,
    b: Vec<RatRepr>,
    l: Vec<BoundRepr>,
    u: Vec<BoundRepr>,
    objective: Vec<TermJson>,
}

fn parse_bound(b: &BoundRepr, infinite: &str) -> Result<Option<i64>> {
    match b {
        BoundRepr::Int(v) => Ok(Some(*v)),
        BoundRepr::Str(s) if s.trim() == infinite || (infinite == "inf" && s.trim() == "+inf") => Ok(None),
        BoundRepr::Str(s) => RatRepr::Str(s.clone()).to_i64().map(Some),
    }
}

pub fn parse_instance(text: &str) -> Result<IPInstance> {
    let dto: InstanceJson = serde_json::from_str(text).map_err(parse_err)?;
    let objective = dto
        .objective
        .iter()
        .map(|t| {
            Ok(match t {
                TermJson::Linear { c } => ObjectiveTerm::Linear { c: c.to_rat()? },
                TermJson::Quadratic { a, c } => ObjectiveTerm::Quadratic {
                    a: a.to_rat()?,
                    c: c.to_rat()?,
                },
                TermJson::Pwl { points } => ObjectiveTerm::Pwl {
                    points: points
                        .iter()
                        .map(|(x, y)| Ok((x.to_i64()?, y.to_rat()?)))
                        .collect::<Result<_>>()?,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inst = IPInstance {
        a: parse_rows(&dto.a, Some(dto.l.len()))?,
        b: dto.b.iter().map(RatRepr::to_rat).collect::<Result<_>>()?,
        lower: dto.l.iter().map(|b| parse_bound(b, "-inf")).collect::<Result<_>>()?,
        upper: dto.u.iter().map(|b| parse_bound(b, "inf")).collect::<Result<_>>()?,
        objective,
    };
    inst.validate()?;
    Ok(inst)
}

pub fn instance_to_json(inst: &IPInstance) -> Value {
    let bound = |b: &Option<i64>, inf: &str| b.map_or(json!(inf), |v| json!(v));
    let objective: Vec<Value> = inst
        .objective
        .iter()
        .map(|t| match t {
            ObjectiveTerm::Linear { c } => json!({"kind": "linear", "c": rat_str(c)}),
            ObjectiveTerm::Quadratic { a, c } => {
                json!({"kind": "quadratic", "a": rat_str(a), "c": rat_str(c)})
            }
            ObjectiveTerm::Pwl { points } => json!({
                "kind": "pwl",
                "points": points.iter().map(|(x, y)| json!([x, rat_str(y)])).collect::<Vec<_>>(),
            }),
        })
        .collect();
    json!({
        "A": matrix_to_json(&inst.a),
        "b": rats(&inst.b),
        "l": inst.lower.iter().map(|b| bound(b, "-inf")).collect::<Vec<_>>(),
        "u": inst.upper.iter().map(|b| bound(b, "inf")).collect::<Vec<_>>(),
        "objective": objective,
    })
}

pub fn solution_to_json(s: &IPSolution) -> Value {
    let transform = s.transform.as_ref().map(|t| {
        json!({
            "B": matrix_to_json(&t.b),
            "depth": t.depth,
            "mode": t.provenance.as_str(),
            "branch_depth": t.branch_depth,
        })
    });
    json!({
        "status": s.status.as_str(),
        "x": s.x,
        "value": s.value.as_ref().map(rat_str),
        "steps": s.steps,
        "removed_rows": s.removed_rows,
        "transform": transform,
    })
}

/// Pretty or compact JSON text with a trailing newline.
pub fn render(v: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("values serialize");
    s.push('\n');
    s
}
