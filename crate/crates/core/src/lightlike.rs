//! Lightlike points of ZMC graphs, lines of lightlike points and the
//! approximation function along them, and conjugate parts of null curves.
//!
//! Along a lightlike line normalized to `{(y, 0, y)}` (ambient order
//! `(t, x, y)`) a graph expands as `g = y + alpha(y) x^2 / 2 + beta x^3`,
//! and `alpha' + alpha^2 + mu = 0` for a constant `mu`.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_with_names, Expr, Slot, VarNames};
use crate::geometry::{b_gradient_zmc, b_value, causal_character, CausalCharacter};
use crate::graph::{GraphKind, Rect, SurfaceGraph};
use crate::height::{Height, Substitution};
use crate::jet::Jet;
use crate::wick::{wick_apply, ParityKind, TransformSpec, WickOptions};

type C = Complex64;

/// Threshold on `|grad B|` separating line points from null-curve points.
pub const GRAD_TOL: f64 = 1e-6;

/// Largest admissible spread of the sampled characteristic.
pub const SPREAD_TOL: f64 = 1e-6;

/// Tolerance on `|grad g|` matching one of the four axis directions.
const DIRECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dichotomy {
    NullCurvePoint,
    LinePoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct LightlikePointReport {
    /// Point in the coordinates of the graph that was passed in.
    pub point: [f64; 2],
    /// Same point in the `(x, y)` coordinates of the ZMC view.
    pub zmc_point: [f64; 2],
    pub b: f64,
    pub grad_b: [f64; 2],
    pub dichotomy: Dichotomy,
}

/// ZMC view of a Lorentzian graph and the image of `p`.
///
/// A BI graph `y = h(t, x)` is solved for `t` near `p`, which is possible
/// at lightlike points since there `h_t^2 = 1 + h_x^2`.
pub fn zmc_view(s: &SurfaceGraph, p: [f64; 2]) -> Result<(SurfaceGraph, [f64; 2])> {
    match s.kind {
        GraphKind::ZMC => Ok((s.clone(), p)),
        GraphKind::BI => {
            let h = Height::implicit(s.height.clone(), p[0], p[1])?;
            let q = [p[1], s.height.eval(p)?];
            let half = 0.5 * (s.domain.u[1] - s.domain.u[0]).max(s.domain.v[1] - s.domain.v[0]);
            let dom = Rect::new(q[0] - half, q[0] + half, q[1] - half, q[1] + half)?;
            Ok((SurfaceGraph::new(h, GraphKind::ZMC, dom), q))
        }
        GraphKind::E3 => Err(Error::KindMismatch {
            expected: "ZMC|BI".into(),
            found: "E3".into(),
        }),
    }
}

pub fn klyachin_classify(
    s: &SurfaceGraph,
    p: [f64; 2],
    tol_lightlike: f64,
    tol_grad: f64,
) -> Result<LightlikePointReport> {
    let (g, q) = zmc_view(s, p)?;
    let d = g.height.partials(q)?;
    let b = b_value(GraphKind::ZMC, &d);
    if b.abs() >= tol_lightlike {
        return Err(Error::NotLightlike(p[0], p[1], b));
    }
    let grad_b = b_gradient_zmc(&d);
    let dichotomy = if grad_b[0].hypot(grad_b[1]) > tol_grad {
        Dichotomy::NullCurvePoint
    } else {
        Dichotomy::LinePoint
    };
    Ok(LightlikePointReport {
        point: p,
        zmc_point: q,
        b,
        grad_b,
        dichotomy,
    })
}

/// Ambient isometry used to normalize a lightlike line.
#[derive(Debug, Clone, Serialize)]
pub struct Isometry {
    /// ZMC point moved to the origin.
    pub translation: [f64; 2],
    /// Height subtracted so that the normalized graph vanishes at 0.
    pub height_shift: f64,
    pub swap_xy: bool,
    pub flip_t: bool,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct NormalizedLine {
    pub graph: SurfaceGraph,
    pub isometry: Isometry,
    pub report: LightlikePointReport,
}

/// Moves a lightlike line through `witness` onto `{(y, 0, y)}` with
/// `g(0, 0) = 0`, using a translation followed by an axis swap and/or
/// `t -> -t`.
pub fn normalize_line(
    s: &SurfaceGraph,
    witness: [f64; 2],
    tol_lightlike: f64,
) -> Result<NormalizedLine> {
    let report = klyachin_classify(s, witness, tol_lightlike, GRAD_TOL)?;
    if report.dichotomy != Dichotomy::LinePoint {
        return Err(Error::NormalizationFailure(format!(
            "({}, {}) lies on a null curve, not on a lightlike line",
            witness[0], witness[1]
        )));
    }
    let (g, q) = zmc_view(s, witness)?;
    let d = g.height.partials(q)?;
    let near =
        |a: f64, b: f64| (d.fx - a).abs() < DIRECTION_TOL && (d.fy - b).abs() < DIRECTION_TOL;
    let (swap, flip, what) = if near(0.0, 1.0) {
        (false, false, "translation")
    } else if near(0.0, -1.0) {
        (false, true, "translation, t -> -t")
    } else if near(1.0, 0.0) {
        (true, false, "translation, x <-> y")
    } else if near(-1.0, 0.0) {
        (true, true, "translation, x <-> y, t -> -t")
    } else {
        return Err(Error::NormalizationFailure(format!(
            "line direction ({:.6}, {:.6}) is not an axis direction",
            d.fx, d.fy
        )));
    };
    let coef = if flip { -1.0 } else { 1.0 };
    let sub = Substitution {
        perm: if swap { [1, 0] } else { [0, 1] },
        mult: [C::new(1.0, 0.0); 2],
        shift: q,
        coef: C::new(coef, 0.0),
        offset: -coef * d.v,
    };
    let label = format!("normalized[{}]", g.describe());
    let height = Height::substituted(g.height.clone(), sub, label);
    let (du, dv) = (
        [g.domain.u[0] - q[0], g.domain.u[1] - q[0]],
        [g.domain.v[0] - q[1], g.domain.v[1] - q[1]],
    );
    let domain = if swap {
        Rect { u: dv, v: du }
    } else {
        Rect { u: du, v: dv }
    };
    Ok(NormalizedLine {
        graph: SurfaceGraph::new(height, GraphKind::ZMC, domain),
        isometry: Isometry {
            translation: q,
            height_shift: d.v,
            swap_xy: swap,
            flip_t: flip,
            description: what.to_string(),
        },
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlphaClass {
    #[serde(rename = "alpha+")]
    Plus,
    #[serde(rename = "alpha0_I")]
    ZeroI,
    #[serde(rename = "alpha0_II")]
    ZeroII,
    #[serde(rename = "alpha-_I")]
    MinusI,
    #[serde(rename = "alpha-_II")]
    MinusII,
    #[serde(rename = "alpha-_III")]
    MinusIII,
}

impl AlphaClass {
    pub const ALL: [AlphaClass; 6] = [
        AlphaClass::Plus,
        AlphaClass::ZeroI,
        AlphaClass::ZeroII,
        AlphaClass::MinusI,
        AlphaClass::MinusII,
        AlphaClass::MinusIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlphaClass::Plus => "alpha+",
            AlphaClass::ZeroI => "alpha0_I",
            AlphaClass::ZeroII => "alpha0_II",
            AlphaClass::MinusI => "alpha-_I",
            AlphaClass::MinusII => "alpha-_II",
            AlphaClass::MinusIII => "alpha-_III",
        }
    }

    /// Sign of the normalized characteristic.
    pub fn mu(self) -> f64 {
        match self {
            AlphaClass::Plus => 1.0,
            AlphaClass::ZeroI | AlphaClass::ZeroII => 0.0,
            _ => -1.0,
        }
    }

    /// Template value at `y` for constant `c`.
    pub fn template(self, y: f64, c: f64) -> f64 {
        match self {
            AlphaClass::Plus => -(y + c).tan(),
            AlphaClass::ZeroI => 0.0,
            AlphaClass::ZeroII => 1.0 / (y + c),
            AlphaClass::MinusI => (y + c).tanh(),
            AlphaClass::MinusII => 1.0 / (y + c).tanh(),
            AlphaClass::MinusIII => c.signum(),
        }
    }

    /// Image under the odd rotations: `alpha_h(y) = i alpha_g(i y)`.
    pub fn odd_partner(self) -> Option<AlphaClass> {
        match self {
            AlphaClass::Plus => Some(AlphaClass::MinusI),
            AlphaClass::MinusI => Some(AlphaClass::Plus),
            AlphaClass::ZeroI => Some(AlphaClass::ZeroI),
            _ => None,
        }
    }
}

impl fmt::Display for AlphaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AlphaClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<AlphaClass> {
        AlphaClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown alpha class `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LineProfile {
    pub ys: Vec<f64>,
    /// `g_xx(0, y)`
    pub alpha: Vec<f64>,
    pub alpha_prime: Vec<f64>,
    /// Third-order coefficient `a(3, 0)` at `(0, y)`.
    pub beta: Vec<f64>,
    pub mu_samples: Vec<f64>,
    pub mu: f64,
    pub spread: f64,
    pub alpha0: f64,
    /// `max |g(0, y) - y| + |g_x(0, y)|` over the samples.
    pub line_error: f64,
}

/// Samples the approximation function along `x = 0` of a normalized graph.
pub fn line_profile(s: &SurfaceGraph, y_range: [f64; 2], n: usize) -> Result<LineProfile> {
    if n < 9 {
        return Err(Error::InvalidArgument(format!(
            "line profile needs at least 9 samples, got {n}"
        )));
    }
    let ys: Vec<f64> = (0..n)
        .map(|i| y_range[0] + (y_range[1] - y_range[0]) * i as f64 / (n - 1) as f64)
        .collect();
    let jets: Vec<Jet> = ys
        .par_iter()
        .map(|&y| s.height.jet([0.0, y], 3))
        .collect::<Result<_>>()?;
    let alpha: Vec<f64> = jets.iter().map(|j| 2.0 * j.coeff(2, 0).re).collect();
    let alpha_prime: Vec<f64> = jets.iter().map(|j| 2.0 * j.coeff(2, 1).re).collect();
    let beta: Vec<f64> = jets.iter().map(|j| j.coeff(3, 0).re).collect();
    let mu_samples: Vec<f64> = alpha
        .iter()
        .zip(&alpha_prime)
        .map(|(a, ap)| -(ap + a * a))
        .collect();
    let mu = mu_samples.iter().sum::<f64>() / n as f64;
    let spread = mu_samples
        .iter()
        .map(|m| (m - mu).abs())
        .fold(0.0, f64::max);
    let line_error = jets
        .iter()
        .zip(&ys)
        .map(|(j, y)| (j.value().re - y).abs() + j.coeff(1, 0).re.abs())
        .fold(0.0, f64::max);
    let alpha0 = 2.0 * s.height.jet([0.0, 0.0], 2)?.coeff(2, 0).re;
    Ok(LineProfile {
        ys,
        alpha,
        alpha_prime,
        beta,
        mu_samples,
        mu,
        spread,
        alpha0,
        line_error,
    })
}

/// Characteristic and its spread; fails if the samples do not agree.
pub fn characteristic(profile: &LineProfile) -> Result<(f64, f64)> {
    if !(profile.spread < SPREAD_TOL) {
        return Err(Error::NonConstantCharacteristic(profile.spread));
    }
    Ok((profile.mu, profile.spread))
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaFit {
    pub class: AlphaClass,
    pub c: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub mu: f64,
    /// Homothety factor `1 / sqrt|mu|` (1 when no rescaling was needed).
    pub lambda: f64,
    pub least_squares: bool,
}

/// Fits the normalized profile to one of the six templates.
pub fn alpha_classify(profile: &LineProfile) -> Result<AlphaFit> {
    let (mu, _) = characteristic(profile)?;
    let zero = mu.abs() < SPREAD_TOL;
    let s = if zero { 1.0 } else { mu.abs().sqrt() };
    let yh: Vec<f64> = profile.ys.iter().map(|y| s * y).collect();
    let ah: Vec<f64> = profile.alpha.iter().map(|a| a / s).collect();
    let a0 = profile.alpha0 / s;
    let tol = 1e-7 * (1.0 + ah.iter().fold(0.0f64, |m, a| m.max(a.abs())));
    let residual = |class: AlphaClass, c: f64| {
        yh.iter()
            .zip(&ah)
            .map(|(y, a)| (a - class.template(*y, c)).abs())
            .fold(0.0, f64::max)
    };
    let (class, c) = if zero {
        if a0.abs() < 1e-9 {
            (AlphaClass::ZeroI, 0.0)
        } else {
            (AlphaClass::ZeroII, 1.0 / a0)
        }
    } else if mu > 0.0 {
        (AlphaClass::Plus, -a0.atan())
    } else if (a0.abs() - 1.0).abs() < 1e-9 {
        (AlphaClass::MinusIII, a0.signum())
    } else if a0.abs() < 1.0 {
        (AlphaClass::MinusI, a0.atanh())
    } else {
        (AlphaClass::MinusII, (1.0 / a0).atanh())
    };
    let lambda = 1.0 / s;
    let r = residual(class, c);
    if r.is_finite() && r < tol {
        return Ok(AlphaFit {
            class,
            c,
            residual: r,
            tolerance: tol,
            mu,
            lambda,
            least_squares: false,
        });
    }
    // fallback: least squares in c over the templates of the same sign
    let mut best: Option<(f64, AlphaClass, f64)> = None;
    for cand in AlphaClass::ALL.into_iter().filter(|k| k.mu() == class.mu()) {
        let sq = |c: f64| {
            yh.iter()
                .zip(&ah)
                .map(|(y, a)| (a - cand.template(*y, c)).powi(2))
                .sum::<f64>()
        };
        let c = golden_section(sq, -4.0, 4.0, 200);
        let r = residual(cand, c);
        if r.is_finite() && best.is_none_or(|b| r < b.0) {
            best = Some((r, cand, c));
        }
    }
    match best {
        Some((r, class, c)) if r < tol => Ok(AlphaFit {
            class,
            c,
            residual: r,
            tolerance: tol,
            mu,
            lambda,
            least_squares: true,
        }),
        Some((r, ..)) => Err(Error::UnclassifiedProfile(r)),
        None => Err(Error::UnclassifiedProfile(f64::INFINITY)),
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let val = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let (mut fc, mut fd) = (val(c), val(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = val(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = val(d);
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Serialize)]
pub struct SidesReport {
    pub delta: f64,
    pub mu: f64,
    /// Characters at `(-delta, y_i)` and `(delta, y_i)`.
    pub left: Vec<CausalCharacter>,
    pub right: Vec<CausalCharacter>,
    pub asserted: Option<CausalCharacter>,
    pub mixed: bool,
}

/// Causal character on both sides of the normalized line.
pub fn causal_sides_check(
    s: &SurfaceGraph,
    profile: &LineProfile,
    fit: &AlphaFit,
    delta: f64,
    tol_lightlike: f64,
) -> Result<SidesReport> {
    let side = |x: f64| -> Result<Vec<CausalCharacter>> {
        profile
            .ys
            .iter()
            .map(|&y| causal_character(s, [x, y], tol_lightlike))
            .collect()
    };
    let left = side(-delta)?;
    let right = side(delta)?;
    let asserted = match fit.class.mu() {
        m if m > 0.0 => Some(CausalCharacter::Spacelike),
        m if m < 0.0 => Some(CausalCharacter::Timelike),
        _ => None,
    };
    if let Some(want) = asserted {
        if let Some((i, c)) = left
            .iter()
            .chain(&right)
            .enumerate()
            .find(|(_, c)| **c != want)
        {
            return Err(Error::CausalMismatch(format!(
                "{} sample {i} is {} but {} requires {} on both sides",
                if i < left.len() { "left" } else { "right" },
                c.name(),
                fit.class,
                want.name()
            )));
        }
    }
    let first = left.first().copied();
    let mixed = left.iter().chain(&right).any(|c| Some(*c) != first);
    Ok(SidesReport {
        delta,
        mu: fit.mu,
        left,
        right,
        asserted,
        mixed,
    })
}

/// Full analysis of one lightlike line.
#[derive(Debug, Clone, Serialize)]
pub struct LineClassification {
    pub witness: [f64; 2],
    pub point: LightlikePointReport,
    pub isometry: Isometry,
    pub profile: LineProfile,
    pub fit: AlphaFit,
    pub sides: SidesReport,
}

pub fn classify_line(
    s: &SurfaceGraph,
    witness: [f64; 2],
    y_range: [f64; 2],
    n: usize,
    tol_lightlike: f64,
) -> Result<(NormalizedLine, LineClassification)> {
    let norm = normalize_line(s, witness, tol_lightlike)?;
    let profile = line_profile(&norm.graph, y_range, n)?;
    let fit = alpha_classify(&profile)?;
    let sides = causal_sides_check(&norm.graph, &profile, &fit, 1e-2, tol_lightlike)?;
    let out = LineClassification {
        witness,
        point: norm.report.clone(),
        isometry: norm.isometry.clone(),
        profile,
        fit,
        sides,
    };
    Ok((norm, out))
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaTransformReport {
    pub transform: String,
    pub parity: ParityKind,
    pub source_class: AlphaClass,
    pub target_class: AlphaClass,
    /// Samplewise `|alpha_h - alpha_g|` (even) or `|alpha_h(y) - i alpha_g(i y)|` (odd).
    pub max_pointwise: f64,
    pub class_map_ok: bool,
    pub pass: bool,
}

/// Compares the approximation functions of a graph and its rotation.
pub fn transform_alpha_check(
    s: &SurfaceGraph,
    t: &TransformSpec,
    witness: [f64; 2],
    target_domain: Rect,
    y_range: [f64; 2],
    n: usize,
    tol_lightlike: f64,
) -> Result<AlphaTransformReport> {
    let opts = WickOptions {
        grid: 9,
        ..WickOptions::default()
    };
    let rotated = wick_apply(s, t, target_domain, opts)?;
    let tw = t.substitution().preimage(witness).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "witness ({}, {}) is not on the rotation axis",
            witness[0], witness[1]
        ))
    })?;
    let (ns, src) = classify_line(s, witness, y_range, n, tol_lightlike)?;
    let (_, tgt) = classify_line(&rotated.graph, tw, y_range, n, tol_lightlike)?;
    let (max_pointwise, class_map_ok) = match t.parity {
        ParityKind::Odd => {
            let mut worst: f64 = 0.0;
            for (y, ah) in tgt.profile.ys.iter().zip(&tgt.profile.alpha) {
                let base = [C::new(0.0, 0.0), C::new(0.0, *y)];
                let ag = ns.graph.height.jet_complex(base, 2)?.coeff(2, 0) * 2.0;
                worst = worst.max((C::new(*ah, 0.0) - C::new(0.0, 1.0) * ag).norm());
            }
            (worst, src.fit.class.odd_partner() == Some(tgt.fit.class))
        }
        _ => {
            let worst = src
                .profile
                .alpha
                .iter()
                .zip(&tgt.profile.alpha)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            (worst, src.fit.class == tgt.fit.class)
        }
    };
    Ok(AlphaTransformReport {
        transform: t.name.to_string(),
        parity: t.parity,
        source_class: src.fit.class,
        target_class: tgt.fit.class,
        max_pointwise,
        class_map_ok,
        pass: class_map_ok && max_pointwise < 1e-7,
    })
}

/// Null curve in Minkowski 3-space, components `(t, x, y)` in the
/// parameter `s`.
#[derive(Debug, Clone)]
pub struct NullCurve {
    pub components: [Expr; 3],
}

const CURVE_NAMES: VarNames = VarNames("s", "");

/// `<a, b>` for the metric `-dt^2 + dx^2 + dy^2`.
pub fn lorentz_dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cross product orthogonal to both factors under [`lorentz_dot`].
pub fn lorentz_cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        -(a[1] * b[2] - a[2] * b[1]),
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl NullCurve {
    pub fn parse(src: [&str; 3]) -> Result<NullCurve> {
        let c = [
            parse_with_names(src[0], CURVE_NAMES)?,
            parse_with_names(src[1], CURVE_NAMES)?,
            parse_with_names(src[2], CURVE_NAMES)?,
        ];
        Ok(NullCurve { components: c })
    }

    fn compose(&self, arg: &Jet) -> Result<[Jet; 3]> {
        let args = [arg.clone(), arg.clone()];
        Ok([
            Jet::eval_expr(&self.components[0], &args)?,
            Jet::eval_expr(&self.components[1], &args)?,
            Jet::eval_expr(&self.components[2], &args)?,
        ])
    }

    pub fn eval(&self, s: C) -> Result<[C; 3]> {
        let p = [s, s];
        Ok([
            self.components[0].eval_complex(p)?,
            self.components[1].eval_complex(p)?,
            self.components[2].eval_complex(p)?,
        ])
    }

    /// Fails unless the curve is null with independent velocity and
    /// acceleration at each parameter value.
    pub fn check_nondegenerate(&self, params: &[f64]) -> Result<()> {
        for &s in params {
            let x = Jet::variable([C::new(s, 0.0), C::new(0.0, 0.0)], 2, Slot::V0);
            let g = self.compose(&x)?;
            let d1 = [0, 1, 2].map(|k| g[k].partial(1, 0).re);
            let d2 = [0, 1, 2].map(|k| g[k].partial(2, 0).re);
            let norm1 = d1.iter().map(|v| v * v).sum::<f64>();
            if lorentz_dot(d1, d1).abs() > 1e-9 * (1.0 + norm1) {
                return Err(Error::DegenerateNullCurve(format!(
                    "velocity is not null at s = {s}"
                )));
            }
            let cr = lorentz_cross(d1, d2);
            if cr.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-9 {
                return Err(Error::DegenerateNullCurve(format!(
                    "velocity and acceleration are dependent at s = {s}"
                )));
            }
        }
        Ok(())
    }

    /// `Phi(u, v) = (gamma(u + i v) + gamma(u - i v)) / 2` for complex `v`.
    pub fn phi(&self, u: f64, v: C) -> Result<[C; 3]> {
        let i = C::new(0.0, 1.0);
        let a = self.eval(u + i * v)?;
        let b = self.eval(u - i * v)?;
        Ok([0, 1, 2].map(|k| 0.5 * (a[k] + b[k])))
    }

    /// `Psi(u, v) = (gamma(u + v) + gamma(u - v)) / 2`.
    pub fn psi(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        let a = self.eval(C::new(u + v, 0.0))?;
        let b = self.eval(C::new(u - v, 0.0))?;
        Ok([0, 1, 2].map(|k| 0.5 * (a[k] + b[k]).re))
    }

    fn part_jets(&self, u: f64, v: f64, wick: bool) -> Result<[Jet; 3]> {
        let base = [C::new(u, 0.0), C::new(v, 0.0)];
        let [uj, vj] = Jet::identity_complex(base, 2);
        let w = if wick { vj.scale(C::new(0.0, 1.0)) } else { vj };
        let a = self.compose(&uj.add(&w))?;
        let b = self.compose(&uj.sub(&w))?;
        Ok([0, 1, 2].map(|k| a[k].add(&b[k]).scale(C::new(0.5, 0.0))))
    }
}

/// Mean curvature of a parametrized surface from its coordinate jets, or
/// `None` where it is not immersed or is lightlike.
pub fn parametric_mean_curvature(x: &[Jet; 3]) -> Option<f64> {
    let d = |j: usize, k: usize| [0, 1, 2].map(|c| x[c].partial(j, k).re);
    let (xu, xv) = (d(1, 0), d(0, 1));
    let (xuu, xuv, xvv) = (d(2, 0), d(1, 1), d(0, 2));
    let e = lorentz_dot(xu, xu);
    let f = lorentz_dot(xu, xv);
    let g = lorentz_dot(xv, xv);
    let det = e * g - f * f;
    if det.abs() < 1e-8 {
        return None;
    }
    let n = lorentz_cross(xu, xv);
    let nn = lorentz_dot(n, n);
    let scale = nn.abs().sqrt();
    let (l, m, nv) = (
        lorentz_dot(xuu, n) / scale,
        lorentz_dot(xuv, n) / scale,
        lorentz_dot(xvv, n) / scale,
    );
    Some(nn.signum() * (e * nv - 2.0 * f * m + g * l) / (2.0 * det))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugateSample {
    pub u: f64,
    pub v: f64,
    pub phi: [f64; 3],
    pub psi: [f64; 3],
    pub mean_phi: Option<f64>,
    pub mean_psi: Option<f64>,
    /// `|Phi(u, i v) - Psi(u, v)|`
    pub wick_gap: f64,
}

/// Spacelike part `Phi` and timelike part `Psi` at the given points.
pub fn conjugate_parts(curve: &NullCurve, points: &[[f64; 2]]) -> Result<Vec<ConjugateSample>> {
    let mut us: Vec<f64> = points.iter().map(|p| p[0]).collect();
    us.sort_by(f64::total_cmp);
    us.dedup();
    curve.check_nondegenerate(&us)?;
    points
        .par_iter()
        .map(|&[u, v]| {
            let phi_j = curve.part_jets(u, v, true)?;
            let psi_j = curve.part_jets(u, v, false)?;
            let phi_iv = curve.phi(u, C::new(0.0, v))?;
            let psi = curve.psi(u, v)?;
            let wick_gap = (0..3)
                .map(|k| (phi_iv[k] - psi[k]).norm())
                .fold(0.0, f64::max);
            Ok(ConjugateSample {
                u,
                v,
                phi: [0, 1, 2].map(|k| phi_j[k].value().re),
                psi,
                mean_phi: parametric_mean_curvature(&phi_j),
                mean_psi: parametric_mean_curvature(&psi_j),
                wick_gap,
            })
        })
        .collect()
}
