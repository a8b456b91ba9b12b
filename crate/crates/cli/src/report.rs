use std::fmt::Write as _;

use matrigid::rigidity::MaxwellRecord;
use matrigid::{
    analyze, product_analyze, Error, Framework, ProductAnalysis, ToleranceConfig, Verdict,
};
use serde::Serialize;

use crate::format::Certificate;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type NamedEdge = (String, String);

#[derive(Debug, Serialize)]
pub struct ColourSection {
    pub classes: Vec<Vec<NamedEdge>>,
    pub degenerate: Vec<NamedEdge>,
}

#[derive(Debug, Serialize)]
pub struct FactorSection {
    pub class: String,
    pub dim: usize,
    pub norm: String,
    pub edges: usize,
    pub rule: &'static str,
    pub verdict: Verdict,
    pub rank: Option<usize>,
    pub nullity: Option<usize>,
    pub trivial_dim: usize,
}

#[derive(Debug, Serialize)]
pub struct CertificateCheck {
    pub verdict_matches: bool,
    pub rank_matches: bool,
    pub flex_dim_matches: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub space: String,
    pub vertices: usize,
    pub edges: usize,
    pub verdict: Verdict,
    pub well_positioned: bool,
    pub offending_edges: Vec<NamedEdge>,
    pub full: bool,
    pub rank: Option<usize>,
    pub nullity: Option<usize>,
    pub trivial_dim: usize,
    pub motion_dim: usize,
    pub maxwell: MaxwellRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colours: Option<ColourSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nullity_additive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_check: Option<CertificateCheck>,
    pub tolerances: ToleranceConfig,
}

impl Report {
    /// 0 rigid, 1 flexible, 2 not well-positioned or degenerate.
    pub fn exit_code(&self) -> u8 {
        let degenerate = self
            .colours
            .as_ref()
            .is_some_and(|c| !c.degenerate.is_empty());
        match self.verdict {
            _ if degenerate => 2,
            Verdict::NotWellPositioned => 2,
            Verdict::Flexible => 1,
            Verdict::InfinitesimallyRigid | Verdict::MinimallyRigid => 0,
        }
    }
}

pub fn name_edges(edges: &[(usize, usize)], names: &[String]) -> Vec<NamedEdge> {
    edges
        .iter()
        .map(|&(u, v)| (names[u].clone(), names[v].clone()))
        .collect()
}

pub fn colour_section(pa: &ProductAnalysis, names: &[String]) -> ColourSection {
    ColourSection {
        classes: pa
            .colours
            .classes
            .iter()
            .map(|c| name_edges(c, names))
            .collect(),
        degenerate: name_edges(&pa.colours.degenerate, names),
    }
}

/// Analyse a framework; product spaces go through their factors.
pub fn build(
    fw: &Framework,
    names: &[String],
    cert: Option<&Certificate>,
) -> Result<Report, Error> {
    let product = fw.space().product();
    let (verdict, whole, pa) = if product.is_some() {
        let pa = product_analyze(fw)?;
        (pa.verdict, pa.whole.clone(), Some(pa))
    } else {
        let r = analyze(fw)?;
        (r.verdict, r, None)
    };
    let factor_norms: Vec<String> = product
        .map(|p| p.factors().iter().map(|(_, n)| n.to_string()).collect())
        .unwrap_or_default();
    let factors = pa
        .as_ref()
        .map(|pa| {
            pa.factors
                .iter()
                .map(|f| FactorSection {
                    class: format!("E_{}", f.factor + 1),
                    dim: f.dim,
                    norm: factor_norms[f.factor].clone(),
                    edges: f.edges.len(),
                    rule: if f.connectivity_verdict.is_some() {
                        "connectivity"
                    } else {
                        "rigidity matrix"
                    },
                    verdict: f.connectivity_verdict.unwrap_or(f.report.verdict),
                    rank: f.report.rank,
                    nullity: f.report.flex_dim,
                    trivial_dim: f.report.trivial_dim,
                })
                .collect()
        })
        .unwrap_or_default();
    let certificate_check = cert.map(|c| CertificateCheck {
        verdict_matches: c.verdict == verdict,
        rank_matches: c.rank == whole.rank,
        flex_dim_matches: c.flex_dim == whole.flex_dim,
    });
    Ok(Report {
        tool: "matrigid",
        version: VERSION,
        space: fw.space().to_string(),
        vertices: fw.n_vertices(),
        edges: fw.graph().n_edges(),
        verdict,
        well_positioned: whole.well_positioned,
        offending_edges: name_edges(&whole.offending_edges, names),
        full: whole.full,
        rank: whole.rank,
        nullity: whole.flex_dim,
        trivial_dim: whole.trivial_dim,
        motion_dim: whole.motion_dim,
        maxwell: whole.maxwell,
        colours: pa.as_ref().map(|pa| colour_section(pa, names)),
        factors,
        nullity_additive: pa
            .as_ref()
            .filter(|pa| pa.colours.degenerate.is_empty())
            .map(|pa| pa.nullity_additive),
        certificate_check,
        tolerances: whole.tolerances,
    })
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "n/a".into(), |x| x.to_string())
}

pub fn edge_list(edges: &[NamedEdge]) -> String {
    if edges.is_empty() {
        return "none".into();
    }
    edges
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_colours(c: &ColourSection) -> String {
    let mut s = String::new();
    for (j, class) in c.classes.iter().enumerate() {
        let _ = writeln!(
            s,
            "E_{} ({} edges): {}",
            j + 1,
            class.len(),
            edge_list(class)
        );
    }
    let _ = writeln!(s, "degenerate: {}", edge_list(&c.degenerate));
    s
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "space: {}", r.space);
    let _ = writeln!(s, "vertices: {}  edges: {}", r.vertices, r.edges);
    let _ = writeln!(s, "verdict: {:?}", r.verdict);
    let _ = writeln!(s, "well-positioned: {}", r.well_positioned);
    if !r.offending_edges.is_empty() {
        let _ = writeln!(s, "non-smooth edges: {}", edge_list(&r.offending_edges));
    }
    let _ = writeln!(s, "full: {}", r.full);
    let _ = writeln!(
        s,
        "rank: {}  nullity: {}  trivial: {}  l(X): {}",
        opt(r.rank),
        opt(r.nullity),
        r.trivial_dim,
        r.motion_dim
    );
    let m = &r.maxwell;
    let _ = writeln!(
        s,
        "maxwell: |E| = {} vs k|V| - l = {} ({}{})",
        m.edges,
        m.k_v_minus_l,
        if m.satisfied { "satisfied" } else { "violated" },
        if m.applicable { "" } else { ", not applicable" }
    );
    if let Some(c) = &r.colours {
        s.push_str(&render_colours(c));
    }
    for f in &r.factors {
        let _ = writeln!(
            s,
            "{} [{} in R^{}, {} edges, {}]: {:?}, rank {}, nullity {}",
            f.class,
            f.norm,
            f.dim,
            f.edges,
            f.rule,
            f.verdict,
            opt(f.rank),
            opt(f.nullity)
        );
    }
    if let Some(a) = r.nullity_additive {
        let _ = writeln!(s, "nullity additive over factors: {a}");
    }
    if let Some(c) = &r.certificate_check {
        let ok = c.verdict_matches && c.rank_matches && c.flex_dim_matches;
        let _ = writeln!(
            s,
            "certificate: {}",
            if ok { "reproduced" } else { "MISMATCH" }
        );
    }
    let t = &r.tolerances;
    let _ = writeln!(
        s,
        "tolerances: rank_rel_tol {:e}, gap_tol {:e}, colour_tol {:e}, membership_tol {:e}",
        t.rank_rel_tol, t.gap_tol, t.colour_tol, t.membership_tol
    );
    let _ = writeln!(s, "matrigid {}", r.version);
    s
}
