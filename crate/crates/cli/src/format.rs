//! Framework files (JSON) and plain edge lists.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use matrigid::linalg::CMatrix;
use matrigid::{
    make_chart, Field, Framework, Graph, Kind, NormSpec, Space, ToleranceConfig, Verdict,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// An input problem with a line number when one can be found.
#[derive(Debug)]
pub struct InputError {
    pub line: Option<usize>,
    pub message: String,
}

impl InputError {
    fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkFile {
    pub space: SpaceSpec,
    pub vertices: Vec<String>,
    pub edges: Vec<(VertexRef, VertexRef)>,
    pub placement: IndexMap<String, PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpaceSpec {
    Matrix {
        field: FieldSpec,
        n: usize,
        kind: KindSpec,
        norm: NormFile,
    },
    Vector {
        norm: NormFile,
    },
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        norm: Option<NormFile>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factors: Option<Vec<FactorSpec>>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    Full,
    Hermitian,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum NormFile {
    Schatten { q: QValue },
    Kyfan { k: usize },
    Cylindrical,
    Hypercylindrical,
    Euclidean { d: usize },
    Sup { d: usize },
    Absval,
}

/// A Schatten exponent: a number, or `"inf"`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QValue {
    Finite(f64),
    Named(InfName),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfName {
    #[serde(alias = "infinity")]
    Inf,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub dim: usize,
    pub norm: NormFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Coords(Vec<f64>),
    Matrix {
        re: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colour_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership_tol: Option<f64>,
}

impl TolSpec {
    pub fn full(t: &ToleranceConfig) -> Self {
        Self {
            rank_rel_tol: Some(t.rank_rel_tol),
            gap_tol: Some(t.gap_tol),
            colour_tol: Some(t.colour_tol),
            membership_tol: Some(t.membership_tol),
        }
    }

    pub fn apply(&self, mut t: ToleranceConfig) -> ToleranceConfig {
        if let Some(v) = self.rank_rel_tol {
            t.rank_rel_tol = v;
        }
        if let Some(v) = self.gap_tol {
            t.gap_tol = v;
        }
        if let Some(v) = self.colour_tol {
            t.colour_tol = v;
        }
        if let Some(v) = self.membership_tol {
            t.membership_tol = v;
        }
        t
    }
}

/// Summary written by `construct` and checked again by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub construction: String,
    pub parameters: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub attempts: usize,
    pub verdict: Verdict,
    pub rank: Option<usize>,
    pub flex_dim: Option<usize>,
    pub trivial_dim: usize,
    pub colour_classes: Vec<Vec<(String, String)>>,
    pub factor_ranks: Vec<Option<usize>>,
    pub tolerances: ToleranceConfig,
}

/// A parsed framework together with its vertex names.
pub struct Loaded {
    pub framework: Framework,
    pub names: Vec<String>,
    pub certificate: Option<Certificate>,
}

/// 1-based line of the first occurrence of `needle`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.find(needle)
        .map(|pos| text[..pos].bytes().filter(|&b| b == b'\n').count() + 1)
}

fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

pub fn norm_spec(n: NormFile) -> NormSpec {
    match n {
        NormFile::Schatten {
            q: QValue::Finite(q),
        } => NormSpec::Schatten(q),
        NormFile::Schatten {
            q: QValue::Named(_),
        } => NormSpec::Schatten(f64::INFINITY),
        NormFile::Kyfan { k } => NormSpec::KyFan(k),
        NormFile::Cylindrical => NormSpec::Cylindrical,
        NormFile::Hypercylindrical => NormSpec::HyperCylindrical,
        NormFile::Euclidean { d } => NormSpec::EuclideanVec(d),
        NormFile::Sup { d } => NormSpec::SupVec(d),
        NormFile::Absval => NormSpec::AbsVal,
    }
}

/// The product norm named by a factor list.
fn norm_from_factors(factors: &[FactorSpec]) -> Option<NormSpec> {
    let shape: Vec<(usize, NormSpec)> =
        factors.iter().map(|f| (f.dim, norm_spec(f.norm))).collect();
    use NormSpec::*;
    match shape.as_slice() {
        [(2, EuclideanVec(2)), (1, AbsVal)] => Some(Cylindrical),
        [(3, EuclideanVec(3)), (1, AbsVal)] => Some(HyperCylindrical),
        s if !s.is_empty() && s.iter().all(|&f| f == (1, AbsVal)) => Some(SupVec(s.len())),
        _ => None,
    }
}

fn build_space(spec: &SpaceSpec, text: &str) -> Result<Space, InputError> {
    let at = |msg: String| InputError::new(line_of(text, "\"space\""), msg);
    match spec {
        SpaceSpec::Matrix {
            field,
            n,
            kind,
            norm,
        } => {
            let field = match field {
                FieldSpec::Real => Field::Real,
                FieldSpec::Complex => Field::Complex,
            };
            let kind = match kind {
                KindSpec::Full => Kind::Full,
                KindSpec::Hermitian => Kind::Hermitian,
            };
            let chart = make_chart(field, *n, kind).map_err(|e| at(e.to_string()))?;
            Space::matrix(Arc::new(chart), norm_spec(*norm)).map_err(|e| at(e.to_string()))
        }
        SpaceSpec::Vector { norm } => {
            Space::vector(norm_spec(*norm)).map_err(|e| at(e.to_string()))
        }
        SpaceSpec::Product { norm, factors } => {
            let from_factors = match factors {
                Some(f) => Some(norm_from_factors(f).ok_or_else(|| {
                    at("factor list must be [euclidean(2), absval], [euclidean(3), absval] or absval copies".into())
                })?),
                None => None,
            };
            let chosen = match (norm.map(norm_spec), from_factors) {
                (Some(a), Some(b)) if a != b => {
                    return Err(at(format!("norm {a} disagrees with factor list ({b})")))
                }
                (Some(a), _) => a,
                (None, Some(b)) => b,
                (None, None) => {
                    return Err(at("product space needs a norm or a factor list".into()))
                }
            };
            if chosen.product_space().is_none() {
                return Err(at(format!("{chosen} is not a product norm")));
            }
            Space::vector(chosen).map_err(|e| at(e.to_string()))
        }
    }
}

fn square(rows: &[Vec<f64>], n: usize) -> Option<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return None;
    }
    Some(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn resolve(r: &VertexRef, index: &HashMap<&str, usize>, n: usize) -> Result<usize, String> {
    match r {
        VertexRef::Index(i) if *i < n => Ok(*i),
        VertexRef::Index(i) => Err(format!(
            "edge endpoint index {i} is out of range (|V| = {n})"
        )),
        VertexRef::Name(s) => index
            .get(s.as_str())
            .copied()
            .ok_or_else(|| format!("edge endpoint {s:?} is not a declared vertex")),
    }
}

/// Parse and validate a framework file. File tolerances are applied over `base_tol`, then `override_tol`.
pub fn load_framework(
    text: &str,
    base_tol: ToleranceConfig,
    override_tol: impl FnOnce(ToleranceConfig) -> ToleranceConfig,
) -> Result<Loaded, InputError> {
    let file: FrameworkFile = serde_json::from_str(text)
        .map_err(|e| InputError::new(Some(e.line()), format!("schema error: {e}")))?;
    let tol = override_tol(file.tolerances.unwrap_or_default().apply(base_tol));
    let space = build_space(&file.space, text)?;
    let n = file.vertices.len();

    let mut index = HashMap::new();
    for (i, name) in file.vertices.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(InputError::new(
                line_of(text, &quoted(name)),
                format!("vertex {name:?} declared twice"),
            ));
        }
    }
    let edges_line = line_of(text, "\"edges\"");
    let mut edges = Vec::with_capacity(file.edges.len());
    for (a, b) in &file.edges {
        let u = resolve(a, &index, n).map_err(|m| InputError::new(edges_line, m))?;
        let v = resolve(b, &index, n).map_err(|m| InputError::new(edges_line, m))?;
        edges.push((u, v));
    }
    let graph = Graph::new(n, edges).map_err(|e| InputError::new(edges_line, e.to_string()))?;

    for name in file.placement.keys() {
        if !index.contains_key(name.as_str()) {
            return Err(InputError::new(
                line_of(text, &quoted(name)),
                format!("placement given for undeclared vertex {name:?}"),
            ));
        }
    }
    let d = space.dim();
    let mut placement = Vec::with_capacity(n);
    for name in &file.vertices {
        let point = file.placement.get(name).ok_or_else(|| {
            InputError::new(
                line_of(text, "\"placement\""),
                format!("vertex {name:?} has no placement"),
            )
        })?;
        let here = |m: String| {
            let key = format!("\"{name}\":");
            let line = text
                .match_indices(&key)
                .map(|(p, _)| p)
                .last()
                .map(|p| text[..p].bytes().filter(|&b| b == b'\n').count() + 1);
            InputError::new(line, m)
        };
        let coords = match point {
            PointSpec::Coords(c) => {
                if c.len() != d {
                    return Err(here(format!(
                        "vertex {name:?} has {} coordinates, the space has dimension {d}",
                        c.len()
                    )));
                }
                c.clone()
            }
            PointSpec::Matrix { re, im } => {
                let chart = space
                    .chart()
                    .ok_or_else(|| here("matrix entries given for a vector space".into()))?;
                let size = chart.n();
                let bad = || {
                    here(format!(
                        "vertex {name:?}: expected {size}x{size} re/im blocks"
                    ))
                };
                let re = square(re, size).ok_or_else(bad)?;
                let m = match im {
                    Some(im) => CMatrix::from_parts(re, square(im, size).ok_or_else(bad)?),
                    None => CMatrix::from_real(re),
                };
                chart
                    .to_coords(&m, tol.membership_tol)
                    .map_err(|e| here(format!("vertex {name:?}: {e}")))?
            }
        };
        placement.push(coords);
    }

    let framework = Framework::with_tolerances(graph, space, placement, tol)
        .map_err(|e| InputError::new(None, e.to_string()))?;
    Ok(Loaded {
        framework,
        names: file.vertices,
        certificate: file.certificate,
    })
}

/// A graph from JSON (`vertices`/`edges` keys) or from "u v" lines.
pub fn load_graph(text: &str) -> Result<(Graph, Vec<String>), InputError> {
    if text.trim_start().starts_with('{') {
        #[derive(Deserialize)]
        struct GraphOnly {
            vertices: Vec<String>,
            edges: Vec<(VertexRef, VertexRef)>,
        }
        let g: GraphOnly = serde_json::from_str(text)
            .map_err(|e| InputError::new(Some(e.line()), format!("schema error: {e}")))?;
        let n = g.vertices.len();
        let index: HashMap<&str, usize> = g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != n {
            return Err(InputError::new(
                line_of(text, "\"vertices\""),
                "duplicate vertex name",
            ));
        }
        let line = line_of(text, "\"edges\"");
        let edges = g
            .edges
            .iter()
            .map(|(a, b)| Ok((resolve(a, &index, n)?, resolve(b, &index, n)?)))
            .collect::<Result<Vec<_>, String>>()
            .map_err(|m| InputError::new(line, m))?;
        let graph = Graph::new(n, edges).map_err(|e| InputError::new(line, e.to_string()))?;
        return Ok((graph, g.vertices));
    }
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts.as_slice() else {
            return Err(InputError::new(
                Some(i + 1),
                format!("expected \"u v\", found {line:?}"),
            ));
        };
        let mut id = |s: &str| {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        let (u, v) = (id(a), id(b));
        if u == v {
            return Err(InputError::new(Some(i + 1), format!("loop at vertex {a}")));
        }
        if edges
            .iter()
            .any(|&(x, y)| (x, y) == (u, v) || (y, x) == (u, v))
        {
            return Err(InputError::new(
                Some(i + 1),
                format!("duplicate edge {a} {b}"),
            ));
        }
        edges.push((u, v));
    }
    let graph = Graph::new(names.len(), edges).map_err(|e| InputError::new(None, e.to_string()))?;
    Ok((graph, names))
}

/// The file written by `construct`.
pub fn framework_file(
    space: SpaceSpec,
    fw: &Framework,
    names: &[String],
    certificate: Option<Certificate>,
) -> FrameworkFile {
    FrameworkFile {
        space,
        vertices: names.to_vec(),
        edges: fw
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| {
                (
                    VertexRef::Name(names[u].clone()),
                    VertexRef::Name(names[v].clone()),
                )
            })
            .collect(),
        placement: names
            .iter()
            .cloned()
            .zip(fw.placement().iter().map(|p| PointSpec::Coords(p.clone())))
            .collect(),
        tolerances: Some(TolSpec::full(fw.tolerances())),
        certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_names_in_order_of_appearance() {
        let (g, names) = load_graph("# path\na b\nb c\n\nc d # tail\n").unwrap();
        assert_eq!(names, ["a", "b", "c", "d"]);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        let e = load_graph("0 1\n1 2 3\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = load_graph("0 1\n1 0\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn factor_lists_name_product_norms() {
        let f = |dim, norm| FactorSpec { dim, norm };
        assert_eq!(
            norm_from_factors(&[f(2, NormFile::Euclidean { d: 2 }), f(1, NormFile::Absval)]),
            Some(NormSpec::Cylindrical)
        );
        assert_eq!(
            norm_from_factors(&[f(1, NormFile::Absval), f(1, NormFile::Absval)]),
            Some(NormSpec::SupVec(2))
        );
        assert_eq!(
            norm_from_factors(&[f(2, NormFile::Euclidean { d: 2 })]),
            None
        );
    }

    #[test]
    fn schema_errors_are_line_anchored() {
        let text = "{\n  \"space\": {\"type\": \"vector\", \"norm\": {\"variant\": \"euclidean\", \"d\": 2}},\n  \"vertices\": [\"a\"],\n  \"edges\": [],\n  \"placement\": {\"a\": [0.0, 1.0, 2.0]}\n}\n";
        let e = load_framework(text, ToleranceConfig::default(), |t| t)
            .err()
            .unwrap();
        assert_eq!(e.line, Some(5));
        let e = load_framework("{\n\"space\": 3\n}", ToleranceConfig::default(), |t| t)
            .err()
            .unwrap();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn matrix_entries_and_coordinates_agree() {
        let text = r#"{
  "space": {"type": "matrix", "field": "real", "n": 2, "kind": "hermitian", "norm": {"variant": "schatten", "q": "inf"}},
  "vertices": ["a", "b"],
  "edges": [["a", "b"]],
  "placement": {"a": {"re": [[1.0, 0.5], [0.5, -1.0]]}, "b": [0.0, 2.0, 0.25]}
}"#;
        let l = load_framework(text, ToleranceConfig::default(), |t| t).unwrap();
        assert_eq!(l.framework.placement()[0], vec![1.0, -1.0, 0.5]);
        assert_eq!(l.framework.space().norm(), NormSpec::spectral());
    }
}
