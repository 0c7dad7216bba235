//! Parity classification and Wick rotations between the three equations.
//!
//! A rotation substitutes `i v` for a variable `v` of a solution that is
//! even or odd in `v`; the result is real (even case) or purely imaginary
//! (odd case, realized after multiplying by `-i`) and solves the equation
//! of the target kind.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Slot;
use crate::geometry::{pde_lhs, residual_scale};
use crate::graph::{GraphKind, Rect, SurfaceGraph};
use crate::height::{Height, Substitution};
use crate::jet::Partials;

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const ONE: C = C::new(1.0, 0.0);

/// Default relative tolerance of the parity tests.
pub const PARITY_TOL: f64 = 1e-9;

/// Jet order of the coefficient certificate.
pub const PARITY_JET_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityKind {
    Even,
    Odd,
    Neither,
}

impl ParityKind {
    pub fn name(self) -> &'static str {
        match self {
            ParityKind::Even => "even",
            ParityKind::Odd => "odd",
            ParityKind::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    EvenIn(Slot),
    OddIn(Slot),
    Neither(Slot),
}

impl Parity {
    pub fn kind(self) -> ParityKind {
        match self {
            Parity::EvenIn(_) => ParityKind::Even,
            Parity::OddIn(_) => ParityKind::Odd,
            Parity::Neither(_) => ParityKind::Neither,
        }
    }

    pub fn slot(self) -> Slot {
        match self {
            Parity::EvenIn(s) | Parity::OddIn(s) | Parity::Neither(s) => s,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in slot {}", self.kind().name(), self.slot().index())
    }
}

/// Deterministic probe points whose mirrors (slot negated) stay inside
/// `domain`. The slot range must contain 0 in its interior.
pub fn mirrored_probes(domain: &Rect, slot: Slot, pairs: usize) -> Result<Vec<[f64; 2]>> {
    let (r, o) = match slot {
        Slot::V0 => (domain.u, domain.v),
        Slot::V1 => (domain.v, domain.u),
    };
    if !(r[0] < 0.0 && r[1] > 0.0) {
        return Err(Error::domain(
            "parity",
            format!("slot range [{}, {}] does not straddle 0", r[0], r[1]),
        ));
    }
    let a = 0.95 * r[0].abs().min(r[1]);
    let (mid, half) = (0.5 * (o[0] + o[1]), 0.475 * (o[1] - o[0]));
    Ok((1..=pairs)
        .map(|i| {
            let s = a * halton(i, 2);
            let t = mid + half * (2.0 * halton(i, 3) - 1.0);
            match slot {
                Slot::V0 => [s, t],
                Slot::V1 => [t, s],
            }
        })
        .collect())
}

fn halton(mut i: usize, b: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

fn mirror(p: [f64; 2], slot: Slot) -> [f64; 2] {
    let mut m = p;
    m[slot.index()] = -m[slot.index()];
    m
}

/// Decides whether `h` is even or odd in `slot`.
///
/// Both certificates must agree: the probe pairs `(p, mirror(p))` and the
/// vanishing of the odd (even) slot coefficients of an order-8 jet at a
/// point on the axis `slot = 0`.
pub fn parity_classify(h: &Height, slot: Slot, probes: &[[f64; 2]], tol: f64) -> Result<Parity> {
    if probes.len() < 25 {
        return Err(Error::InvalidArgument(format!(
            "parity needs at least 25 probe pairs, got {}",
            probes.len()
        )));
    }
    let mut even = true;
    let mut odd = true;
    for &p in probes {
        let a = h.eval(p)?;
        let b = h.eval(mirror(p, slot))?;
        let scale = 1.0 + a.abs().max(b.abs());
        even &= (a - b).abs() < tol * scale;
        odd &= (a + b).abs() < tol * scale;
    }
    if !(even || odd) {
        return Ok(Parity::Neither(slot));
    }
    let o = slot.other().index();
    let other = 0.618 * probes[0][o] + 0.382 * probes[probes.len() / 2][o];
    let mut base = [0.0; 2];
    base[o] = other;
    let jet = h.jet(base, PARITY_JET_ORDER)?;
    let scale = 1.0 + jet.max_abs();
    let (mut jet_even, mut jet_odd) = (true, true);
    for ((j, k), c) in jet.coefficients() {
        let power = if slot == Slot::V0 { j } else { k };
        let small = c.re.abs() < tol * scale;
        if power % 2 == 1 {
            jet_even &= small;
        } else {
            jet_odd &= small;
        }
    }
    Ok(if even && jet_even {
        Parity::EvenIn(slot)
    } else if odd && jet_odd {
        Parity::OddIn(slot)
    } else {
        Parity::Neither(slot)
    })
}

/// One named Wick rotation.
#[derive(Debug, Clone, Serialize)]
pub struct TransformSpec {
    pub name: &'static str,
    /// Admissible source kinds.
    pub sources: &'static [GraphKind],
    /// Source slots receiving a factor `i`.
    pub rotated: &'static [Slot],
    /// Parity required in every rotated slot.
    pub parity: ParityKind,
    /// Realization coefficient `c` in `Re(c * phi(sigma(p)))`.
    #[serde(serialize_with = "ser_complex")]
    pub coef: C,
    /// Source argument `k` is `mult[k] * p[perm[k]]`.
    pub perm: [usize; 2],
    #[serde(serialize_with = "ser_complex_pair")]
    pub mult: [C; 2],
    pub identification: &'static str,
    pub formula: &'static str,
    pub inverse: &'static str,
}

fn ser_complex<S: serde::Serializer>(c: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

fn ser_complex_pair<S: serde::Serializer>(
    c: &[C; 2],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    [[c[0].re, c[0].im], [c[1].re, c[1].im]].serialize(s)
}

impl TransformSpec {
    pub fn target_kind(&self, source: GraphKind) -> Option<GraphKind> {
        use GraphKind::*;
        if !self.sources.contains(&source) {
            return None;
        }
        Some(match (self.name, source) {
            ("T5" | "T5-odd", E3) => ZMC,
            ("T5" | "T5-odd", _) => E3,
            ("T1" | "T2" | "T3" | "T4", _) => BI,
            ("T1-inv" | "T2-inv", _) => E3,
            _ => ZMC,
        })
    }

    pub fn substitution(&self) -> Substitution {
        Substitution {
            perm: self.perm,
            mult: self.mult,
            shift: [0.0; 2],
            coef: self.coef,
            offset: 0.0,
        }
    }
}

const E3_ONLY: &[GraphKind] = &[GraphKind::E3];
const ZMC_ONLY: &[GraphKind] = &[GraphKind::ZMC];
const BI_ONLY: &[GraphKind] = &[GraphKind::BI];
const E3_ZMC: &[GraphKind] = &[GraphKind::E3, GraphKind::ZMC];

/// The ten rotations: four forward maps into the Born-Infeld equation,
/// their converses, and the two self-inverse maps between E3 and ZMC.
pub fn transform_table() -> Vec<TransformSpec> {
    let neg_i = C::new(0.0, -1.0);
    let v0: &'static [Slot] = &[Slot::V0];
    let v1: &'static [Slot] = &[Slot::V1];
    let both: &'static [Slot] = &[Slot::V0, Slot::V1];
    vec![
        TransformSpec {
            name: "T1",
            sources: E3_ONLY,
            rotated: v1,
            parity: ParityKind::Even,
            coef: ONE,
            perm: [1, 0],
            mult: [ONE, I],
            identification: "t̃=y, x̃=x, ỹ=z",
            formula: "h(t,x) = f(x, i t)",
            inverse: "T1-inv",
        },
        TransformSpec {
            name: "T1-inv",
            sources: BI_ONLY,
            rotated: v0,
            parity: ParityKind::Even,
            coef: ONE,
            perm: [1, 0],
            mult: [I, ONE],
            identification: "y=t̃, x=x̃, z=ỹ",
            formula: "f(x,y) = h(i y, x)",
            inverse: "T1",
        },
        TransformSpec {
            name: "T2",
            sources: E3_ONLY,
            rotated: v1,
            parity: ParityKind::Odd,
            coef: neg_i,
            perm: [0, 1],
            mult: [ONE, I],
            identification: "t̃=x, x̃=y, ỹ=z",
            formula: "h(t,x) = -i f(t, i x)",
            inverse: "T2-inv",
        },
        TransformSpec {
            name: "T2-inv",
            sources: BI_ONLY,
            rotated: v1,
            parity: ParityKind::Odd,
            coef: neg_i,
            perm: [0, 1],
            mult: [ONE, I],
            identification: "x=t̃, y=x̃, z=ỹ",
            formula: "f(x,y) = -i h(x, i y)",
            inverse: "T2",
        },
        TransformSpec {
            name: "T3",
            sources: ZMC_ONLY,
            rotated: v0,
            parity: ParityKind::Even,
            coef: ONE,
            perm: [1, 0],
            mult: [I, ONE],
            identification: "t̃=y, x̃=x, ỹ=t",
            formula: "h(t,x) = g(i x, t)",
            inverse: "T3-inv",
        },
        TransformSpec {
            name: "T3-inv",
            sources: BI_ONLY,
            rotated: v1,
            parity: ParityKind::Even,
            coef: ONE,
            perm: [1, 0],
            mult: [ONE, I],
            identification: "y=t̃, x=x̃, t=ỹ",
            formula: "g(x,y) = h(y, i x)",
            inverse: "T3",
        },
        TransformSpec {
            name: "T4",
            sources: ZMC_ONLY,
            rotated: v0,
            parity: ParityKind::Odd,
            coef: neg_i,
            perm: [0, 1],
            mult: [I, ONE],
            identification: "t̃=x, x̃=y, ỹ=t",
            formula: "h(t,x) = -i g(i t, x)",
            inverse: "T4-inv",
        },
        TransformSpec {
            name: "T4-inv",
            sources: BI_ONLY,
            rotated: v0,
            parity: ParityKind::Odd,
            coef: neg_i,
            perm: [0, 1],
            mult: [I, ONE],
            identification: "x=t̃, y=x̃, t=ỹ",
            formula: "g(x,y) = -i h(i x, y)",
            inverse: "T4",
        },
        TransformSpec {
            name: "T5",
            sources: E3_ZMC,
            rotated: both,
            parity: ParityKind::Even,
            coef: ONE,
            perm: [0, 1],
            mult: [I, I],
            identification: "x=x, y=y, t=z",
            formula: "g(x,y) = f(i x, i y)",
            inverse: "T5",
        },
        TransformSpec {
            name: "T5-odd",
            sources: E3_ZMC,
            rotated: both,
            parity: ParityKind::Odd,
            coef: -ONE,
            perm: [0, 1],
            mult: [I, I],
            identification: "x=x, y=y, t=z",
            formula: "g(x,y) = -f(i x, i y)",
            inverse: "T5-odd",
        },
    ]
}

pub fn transform(name: &str) -> Result<TransformSpec> {
    transform_table()
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| Error::UnknownTransform(name.to_string()))
}

#[derive(Debug, Clone, Copy)]
pub struct WickOptions {
    pub grid: usize,
    pub tol_parity: f64,
    /// Bound on `|Im| / (1 + |value|)` of the unrealized rotated height.
    pub tol_residue: f64,
    /// Bound on the scaled PDE residual of the rotated graph.
    pub tol_residual: f64,
}

impl Default for WickOptions {
    fn default() -> Self {
        WickOptions {
            grid: 41,
            tol_parity: PARITY_TOL,
            tol_residue: 1e-9,
            tol_residual: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WickReport {
    pub transform: String,
    pub source: String,
    pub source_kind: GraphKind,
    pub target_kind: GraphKind,
    pub identification: String,
    pub parity: Vec<Parity>,
    pub domain: Rect,
    pub grid: usize,
    pub max_residue: f64,
    pub max_residual: f64,
    pub failed_points: usize,
    /// Largest centered sub-rectangle (shrinking by whole grid cells) on
    /// which every sample passes both checks.
    pub valid: Option<Rect>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct WickOutcome {
    pub graph: SurfaceGraph,
    pub report: WickReport,
}

/// Checks parity, builds the rotated graph on `target_domain` and reports
/// imaginary residue and PDE residual on a grid.
pub fn wick_apply(
    s: &SurfaceGraph,
    t: &TransformSpec,
    target_domain: Rect,
    opts: WickOptions,
) -> Result<WickOutcome> {
    let target = t.target_kind(s.kind).ok_or_else(|| Error::KindMismatch {
        expected: t
            .sources
            .iter()
            .map(|k| k.name())
            .collect::<Vec<_>>()
            .join("|"),
        found: s.kind.name().to_string(),
    })?;
    let mut parity = Vec::new();
    for &slot in t.rotated {
        let probes = mirrored_probes(&s.domain, slot, 32)?;
        let found = parity_classify(&s.height, slot, &probes, opts.tol_parity)?;
        if found.kind() != t.parity {
            let names = s.kind.var_names();
            return Err(Error::ParityMismatch {
                transform: t.name.to_string(),
                required: format!("{} in {}", t.parity.name(), names.name(slot)),
                found: format!("{} in {}", found.kind().name(), names.name(slot)),
            });
        }
        parity.push(found);
    }
    let label = format!("{}[{}]", t.name, s.describe());
    let height = Height::substituted(s.height.clone(), t.substitution(), label);
    let graph = SurfaceGraph::new(height, target, target_domain);

    let n = opts.grid.max(1);
    let samples: Vec<(f64, f64, bool)> = target_domain
        .grid(n)
        .par_iter()
        .map(|&p| sample_point(&graph, p, &opts))
        .collect();
    let failed_points = samples.iter().filter(|s| !s.2).count();
    let max_residue = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    let max_residual = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let ok: Vec<bool> = samples.iter().map(|s| s.2).collect();
    let valid = valid_subrect(&target_domain, n, &ok);
    let report = WickReport {
        transform: t.name.to_string(),
        source: s.describe(),
        source_kind: s.kind,
        target_kind: target,
        identification: t.identification.to_string(),
        parity,
        domain: target_domain,
        grid: n,
        max_residue,
        max_residual,
        failed_points,
        valid,
        pass: failed_points == 0,
    };
    Ok(WickOutcome { graph, report })
}

/// `(residue, scaled residual, pass)`; evaluation failures count as fails
/// with infinite residue.
fn sample_point(g: &SurfaceGraph, p: [f64; 2], opts: &WickOptions) -> (f64, f64, bool) {
    let value = g
        .height
        .eval_complex([C::new(p[0], 0.0), C::new(p[1], 0.0)]);
    let partials = g.height.partials(p);
    match (value, partials) {
        (Ok(v), Ok(d)) => {
            let residue = v.im.abs() / (1.0 + v.norm());
            let residual = scaled_residual(g.kind, &d);
            let pass = residue < opts.tol_residue && residual < opts.tol_residual;
            (residue, residual, pass)
        }
        _ => (f64::INFINITY, f64::INFINITY, false),
    }
}

pub fn scaled_residual(kind: GraphKind, d: &Partials) -> f64 {
    pde_lhs(kind, d).abs() / residual_scale(d)
}

fn valid_subrect(r: &Rect, n: usize, ok: &[bool]) -> Option<Rect> {
    let ring = |i: usize, j: usize| i.min(j).min(n - 1 - i).min(n - 1 - j);
    let worst = (0..n * n)
        .filter(|&idx| !ok[idx])
        .map(|idx| ring(idx % n, idx / n))
        .max();
    match worst {
        None => Some(*r),
        Some(k) => r.shrink(n, k + 1),
    }
}

/// Sup-norm of `a - sign * b` over the cell-center grid of `r`.
pub fn sup_difference(
    a: &SurfaceGraph,
    b: &SurfaceGraph,
    sign: f64,
    r: &Rect,
    n: usize,
) -> Result<f64> {
    let diffs: Vec<f64> = r
        .grid(n)
        .par_iter()
        .map(|&p| Ok((a.eval(p)? - sign * b.eval(p)?).abs()))
        .collect::<Result<_>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}
