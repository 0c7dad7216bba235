//! Bundled named surfaces with their declared properties and the
//! rotations linking them.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Slot;
use crate::geometry::{analyze_point, CausalCharacter, CONDITIONED_B, LIGHTLIKE_TOL};
use crate::graph::{GraphKind, Rect, SurfaceGraph};
use crate::lightlike::{classify_line, AlphaClass};
use crate::wick::{
    mirrored_probes, parity_classify, sup_difference, transform, wick_apply, Parity, ParityKind,
    WickOptions, PARITY_TOL,
};

pub const BUNDLED: &str = include_str!("../data/catalog.json");
pub const CATALOG_ENV: &str = "WICKROT_CATALOG";
pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineSpec {
    pub witness: [f64; 2],
    pub range: [f64; 2],
    pub class: AlphaClass,
    pub c: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Properties {
    /// "spacelike", "timelike", "lightlike" or "mixed" over the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal: Option<String>,
    /// Sign of K at every non-lightlike grid point, when fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    pub transform: String,
    pub target: String,
    /// The rotated graph equals the negated target.
    #[serde(default)]
    pub negate: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub name: String,
    pub dsl: String,
    pub kind: GraphKind,
    pub domain: [f64; 4],
    /// `None` where the domain does not straddle zero in that slot.
    pub parity: [Option<ParityKind>; 2],
    #[serde(default)]
    pub properties: Properties,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

impl CatalogEntry {
    pub fn rect(&self) -> Result<Rect> {
        let [a, b, c, d] = self.domain;
        Rect::new(a, b, c, d)
    }

    pub fn graph(&self) -> Result<SurfaceGraph> {
        SurfaceGraph::from_dsl(&self.dsl, self.kind, self.rect()?)
    }

    pub fn declared_parity(&self, slot: Slot) -> Option<Parity> {
        self.parity[slot.index()].map(|k| match k {
            ParityKind::Even => Parity::EvenIn(slot),
            ParityKind::Odd => Parity::OddIn(slot),
            ParityKind::Neither => Parity::Neither(slot),
        })
    }

    pub fn parities(&self) -> Vec<Parity> {
        [Slot::V0, Slot::V1]
            .into_iter()
            .filter_map(|s| self.declared_parity(s))
            .collect()
    }

    pub fn alpha_class(&self) -> Option<AlphaClass> {
        self.properties.line.as_ref().map(|l| l.class)
    }

    pub fn edge(&self, transform: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.transform == transform)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog> {
        let cat: Catalog = serde_json::from_str(text)?;
        if cat.version != CATALOG_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported catalog version {}",
                cat.version
            )));
        }
        for (i, e) in cat.entries.iter().enumerate() {
            if cat.entries[..i].iter().any(|o| o.id == e.id) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate entry `{}`",
                    e.id
                )));
            }
        }
        for e in &cat.entries {
            for edge in &e.edges {
                transform(&edge.transform)?;
                cat.get(&edge.target)?;
            }
        }
        Ok(cat)
    }

    pub fn bundled() -> Catalog {
        Catalog::from_json(BUNDLED).expect("bundled catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        Catalog::from_json(&std::fs::read_to_string(path)?)
    }

    /// The file named by `WICKROT_CATALOG` if set, else the bundled one.
    pub fn from_env() -> Result<Catalog> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) if !p.is_empty() => Catalog::load(Path::new(&p)),
            _ => Ok(Catalog::bundled()),
        }
    }

    pub fn list(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEntry(id.to_string()))
    }
}

pub fn catalog_list() -> Result<Vec<CatalogEntry>> {
    Ok(Catalog::from_env()?.entries)
}

pub fn catalog_get(id: &str) -> Result<CatalogEntry> {
    Catalog::from_env()?.get(id).cloned()
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeAudit {
    pub transform: String,
    pub target: String,
    pub sup_diff: f64,
    pub max_residue: f64,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryAudit {
    pub id: String,
    pub max_residual: f64,
    pub max_mean: f64,
    pub parity: Vec<Parity>,
    pub causal: String,
    pub line: Option<(AlphaClass, f64, f64)>,
    pub edges: Vec<EdgeAudit>,
    pub problems: Vec<String>,
}

impl EntryAudit {
    pub fn pass(&self) -> bool {
        self.problems.is_empty()
    }
}

fn causal_summary(chars: &[CausalCharacter]) -> &'static str {
    let has = |c| chars.contains(&c);
    let (s, t, l) = (
        has(CausalCharacter::Spacelike),
        has(CausalCharacter::Timelike),
        has(CausalCharacter::Lightlike),
    );
    match (s, t, l) {
        (true, false, false) => "spacelike",
        (false, true, false) => "timelike",
        (false, false, true) => "lightlike",
        _ => "mixed",
    }
}

/// Re-derives every declared property of `e` with the analysis modules.
pub fn audit_entry(cat: &Catalog, e: &CatalogEntry, grid: usize) -> Result<EntryAudit> {
    let g = e.graph()?;
    let mut problems = Vec::new();

    let points: Vec<_> = g
        .domain
        .grid(grid)
        .par_iter()
        .map(|&p| analyze_point(&g, p, LIGHTLIKE_TOL))
        .collect::<Result<_>>()?;
    let max_residual = points
        .iter()
        .map(|a| a.residual.abs() / a.scale)
        .fold(0.0, f64::max);
    if max_residual >= 1e-8 {
        problems.push(format!("residual {max_residual:e}"));
    }
    let max_mean = points
        .iter()
        .filter(|a| a.b.abs() >= CONDITIONED_B)
        .filter_map(|a| a.mean.map(|h| h.abs() / a.scale))
        .fold(0.0, f64::max);
    if max_mean >= 1e-9 {
        problems.push(format!("mean curvature {max_mean:e}"));
    }
    let chars: Vec<_> = points.iter().map(|a| a.character).collect();
    let causal = causal_summary(&chars).to_string();
    if let Some(want) = &e.properties.causal {
        if *want != causal {
            problems.push(format!("causal {causal}, declared {want}"));
        }
    }
    if let Some(sign) = &e.properties.gauss_sign {
        let ok = points
            .iter()
            .filter_map(|a| a.gauss)
            .all(|k| match sign.as_str() {
                "negative" => k < 0.0,
                "positive" => k > 0.0,
                _ => true,
            });
        if !ok {
            problems.push(format!("gauss curvature not {sign}"));
        }
    }

    let mut parity = Vec::new();
    for slot in [Slot::V0, Slot::V1] {
        let Some(declared) = e.declared_parity(slot) else {
            continue;
        };
        let probes = mirrored_probes(&g.domain, slot, 32)?;
        let found = parity_classify(&g.height, slot, &probes, PARITY_TOL)?;
        if found != declared {
            problems.push(format!("parity {found:?}, declared {declared:?}"));
        }
        parity.push(found);
    }

    let mut line = None;
    if let Some(spec) = &e.properties.line {
        match classify_line(&g, spec.witness, spec.range, 41, LIGHTLIKE_TOL) {
            Ok((_, lc)) => {
                let f = &lc.fit;
                if f.class != spec.class
                    || (f.c - spec.c).abs() > 1e-6
                    || (f.mu - spec.mu).abs() > 1e-6
                {
                    problems.push(format!(
                        "line {} c={} mu={}, declared {} c={} mu={}",
                        f.class, f.c, f.mu, spec.class, spec.c, spec.mu
                    ));
                }
                line = Some((f.class, f.c, f.mu));
            }
            Err(err) => problems.push(format!("line: {err}")),
        }
    }

    let mut edges = Vec::new();
    for edge in &e.edges {
        let t = transform(&edge.transform)?;
        let target = cat.get(&edge.target)?.graph()?;
        let opts = WickOptions {
            grid,
            ..WickOptions::default()
        };
        let out = wick_apply(&g, &t, target.domain, opts)?;
        let sign = if edge.negate { -1.0 } else { 1.0 };
        let sup_diff = sup_difference(&out.graph, &target, sign, &target.domain, grid)?;
        let pass = out.report.pass && sup_diff < 1e-9 && out.graph.kind == target.kind;
        if !pass {
            problems.push(format!(
                "edge {} -> {}: sup diff {sup_diff:e}, {} failed points",
                edge.transform, edge.target, out.report.failed_points
            ));
        }
        edges.push(EdgeAudit {
            transform: edge.transform.clone(),
            target: edge.target.clone(),
            sup_diff,
            max_residue: out.report.max_residue,
            max_residual: out.report.max_residual,
            pass,
        });
    }

    Ok(EntryAudit {
        id: e.id.clone(),
        max_residual,
        max_mean,
        parity,
        causal,
        line,
        edges,
        problems,
    })
}

pub fn audit(cat: &Catalog, grid: usize) -> Result<Vec<EntryAudit>> {
    cat.entries
        .iter()
        .map(|e| audit_entry(cat, e, grid))
        .collect()
}

impl std::fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:<36} {:<4} {}", self.id, self.kind.name(), self.dsl)
    }
}
