//! Fundamental forms, curvature, causal character and PDE residuals for the
//! three graph kinds.
//!
//! Conventions, with `B = EG - F^2` the determinant of the first form:
//!
//! * E3 `z = f(x, y)`: `E = 1 + f_x^2`, `F = f_x f_y`, `G = 1 + f_y^2`,
//!   `(L, M, N) = (f_xx, f_xy, f_yy) / W`, `W = sqrt(B)`, `eps = +1`.
//! * ZMC `t = g(x, y)`: `E = 1 - g_x^2`, `F = -g_x g_y`, `G = 1 - g_y^2`,
//!   `(L, M, N) = -(g_xx, g_xy, g_yy) / W`.
//! * BI `y = h(t, x)`: `E = -1 + h_t^2`, `F = h_t h_x`, `G = 1 + h_x^2`,
//!   `(L, M, N) = (h_tt, h_tx, h_xx) / W`.
//!
//! For the Lorentzian kinds `W = sqrt|B|` and `eps = <nu, nu> = -sign(B)`.
//! The shape operator is `S = I^-1 II`, `H = eps tr(S) / 2` and
//! `K = eps det(S)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphKind, SurfaceGraph};
use crate::jet::Partials;

/// Default threshold on `|B|` below which a point counts as lightlike.
pub const LIGHTLIKE_TOL: f64 = 1e-9;

/// Default relative threshold on the discriminant of `S`.
pub const SHAPE_TOL: f64 = 1e-9;

/// Below this `|B|` the factor `1/W^3` in H amplifies rounding past the
/// minimality tolerance, so H-based checks skip the point.
pub const CONDITIONED_B: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

impl CausalCharacter {
    pub fn name(self) -> &'static str {
        match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Lightlike => "lightlike",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShapeClass {
    RealDistinct,
    ComplexPair,
    Umbilic,
    QuasiUmbilic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub w: f64,
    pub eps: f64,
}

impl FundamentalForms {
    pub fn det_first(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn shape_operator(&self) -> [[f64; 2]; 2] {
        let b = self.det_first();
        // I^-1 = [[G, -F], [-F, E]] / B
        let (e, f, g, l, m, n) = (self.e, self.f, self.g, self.l, self.m, self.n);
        [
            [(g * l - f * m) / b, (g * m - f * n) / b],
            [(e * m - f * l) / b, (e * n - f * m) / b],
        ]
    }
}

/// `B = det I` from first partials.
pub fn b_value(kind: GraphKind, d: &Partials) -> f64 {
    match kind {
        GraphKind::E3 => 1.0 + d.fx * d.fx + d.fy * d.fy,
        GraphKind::ZMC => 1.0 - d.fx * d.fx - d.fy * d.fy,
        GraphKind::BI => -1.0 - d.fy * d.fy + d.fx * d.fx,
    }
}

/// Gradient of `B` for a ZMC graph.
pub fn b_gradient_zmc(d: &Partials) -> [f64; 2] {
    [
        -2.0 * (d.fx * d.fxx + d.fy * d.fxy),
        -2.0 * (d.fx * d.fxy + d.fy * d.fyy),
    ]
}

pub fn causal_from_b(kind: GraphKind, b: f64, tol: f64) -> CausalCharacter {
    if kind == GraphKind::E3 {
        return CausalCharacter::Spacelike;
    }
    if b.abs() < tol {
        CausalCharacter::Lightlike
    } else if b > 0.0 {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    }
}

pub fn causal_character(s: &SurfaceGraph, p: [f64; 2], tol: f64) -> Result<CausalCharacter> {
    let d = s.height.partials(p)?;
    Ok(causal_from_b(s.kind, b_value(s.kind, &d), tol))
}

pub fn forms_from_partials(
    kind: GraphKind,
    d: &Partials,
    p: [f64; 2],
    tol: f64,
) -> Result<FundamentalForms> {
    let b = b_value(kind, d);
    if kind.is_lorentzian() && b.abs() < tol {
        return Err(Error::LightlikePoint(p[0], p[1]));
    }
    let w = b.abs().sqrt();
    let (e, f, g, sign, eps) = match kind {
        GraphKind::E3 => (1.0 + d.fx * d.fx, d.fx * d.fy, 1.0 + d.fy * d.fy, 1.0, 1.0),
        GraphKind::ZMC => (
            1.0 - d.fx * d.fx,
            -d.fx * d.fy,
            1.0 - d.fy * d.fy,
            -1.0,
            -b.signum(),
        ),
        GraphKind::BI => (
            -1.0 + d.fx * d.fx,
            d.fx * d.fy,
            1.0 + d.fy * d.fy,
            1.0,
            -b.signum(),
        ),
    };
    Ok(FundamentalForms {
        e,
        f,
        g,
        l: sign * d.fxx / w,
        m: sign * d.fxy / w,
        n: sign * d.fyy / w,
        w,
        eps,
    })
}

pub fn forms_at(s: &SurfaceGraph, p: [f64; 2], tol: f64) -> Result<FundamentalForms> {
    forms_from_partials(s.kind, &s.height.partials(p)?, p, tol)
}

/// Mean and Gaussian curvature from the closed-form expressions in the
/// partial derivatives.
pub fn curvatures_from_partials(
    kind: GraphKind,
    d: &Partials,
    p: [f64; 2],
    tol: f64,
) -> Result<(f64, f64)> {
    let b = b_value(kind, d);
    if kind.is_lorentzian() && b.abs() < tol {
        return Err(Error::LightlikePoint(p[0], p[1]));
    }
    let w = b.abs().sqrt();
    let hess = d.fxx * d.fyy - d.fxy * d.fxy;
    let h = pde_lhs(kind, d) / (2.0 * w * w * w);
    let k = match kind {
        GraphKind::E3 => hess / (w * w * w * w),
        GraphKind::ZMC | GraphKind::BI => -hess / (w * w * w * w),
    };
    Ok((h, k))
}

pub fn mean_curvature(s: &SurfaceGraph, p: [f64; 2], tol: f64) -> Result<f64> {
    curvatures_from_partials(s.kind, &s.height.partials(p)?, p, tol).map(|c| c.0)
}

pub fn gauss_curvature(s: &SurfaceGraph, p: [f64; 2], tol: f64) -> Result<f64> {
    curvatures_from_partials(s.kind, &s.height.partials(p)?, p, tol).map(|c| c.1)
}

pub fn shape_operator(s: &SurfaceGraph, p: [f64; 2], tol: f64) -> Result<[[f64; 2]; 2]> {
    Ok(forms_at(s, p, tol)?.shape_operator())
}

pub fn classify_shape(sh: [[f64; 2]; 2], tol: f64) -> ShapeClass {
    let tr = sh[0][0] + sh[1][1];
    let det = sh[0][0] * sh[1][1] - sh[0][1] * sh[1][0];
    let disc = tr * tr - 4.0 * det;
    let scale = 1.0 + tr * tr + 4.0 * det.abs();
    if disc > tol * scale {
        return ShapeClass::RealDistinct;
    }
    if disc < -tol * scale {
        return ShapeClass::ComplexPair;
    }
    let lam = 0.5 * tr;
    let frob = |a: f64, b: f64, c: f64, d: f64| (a * a + b * b + c * c + d * d).sqrt();
    let off = frob(sh[0][0] - lam, sh[0][1], sh[1][0], sh[1][1] - lam);
    let norm = frob(sh[0][0], sh[0][1], sh[1][0], sh[1][1]);
    if off < 1e-7 * (1.0 + norm) {
        ShapeClass::Umbilic
    } else {
        ShapeClass::QuasiUmbilic
    }
}

pub fn principal_classification(
    s: &SurfaceGraph,
    p: [f64; 2],
    lightlike_tol: f64,
    tol: f64,
) -> Result<ShapeClass> {
    Ok(classify_shape(shape_operator(s, p, lightlike_tol)?, tol))
}

/// Left-hand side of the kind's equation.
pub fn pde_lhs(kind: GraphKind, d: &Partials) -> f64 {
    let (fx, fy) = (d.fx, d.fy);
    match kind {
        GraphKind::E3 => (1.0 + fy * fy) * d.fxx - 2.0 * fx * fy * d.fxy + (1.0 + fx * fx) * d.fyy,
        GraphKind::ZMC => (1.0 - fy * fy) * d.fxx + 2.0 * fx * fy * d.fxy + (1.0 - fx * fx) * d.fyy,
        // slots are (t, x): fx = h_t, fy = h_x
        GraphKind::BI => (1.0 - fx * fx) * d.fyy + 2.0 * fx * fy * d.fxy - (1.0 + fy * fy) * d.fxx,
    }
}

/// Magnitude against which a residual is judged small.
pub fn residual_scale(d: &Partials) -> f64 {
    1.0 + d.second_norm() * (1.0 + d.fx * d.fx + d.fy * d.fy)
}

pub fn pde_residual(s: &SurfaceGraph, p: [f64; 2]) -> Result<f64> {
    Ok(pde_lhs(s.kind, &s.height.partials(p)?))
}

/// Everything the grid reports record about one point.
#[derive(Debug, Clone, Serialize)]
pub struct PointAnalysis {
    pub p: [f64; 2],
    pub height: f64,
    pub b: f64,
    pub character: CausalCharacter,
    pub mean: Option<f64>,
    pub gauss: Option<f64>,
    pub residual: f64,
    pub scale: f64,
    pub shape: Option<ShapeClass>,
    pub eps: Option<f64>,
    pub trace: Option<f64>,
}

pub fn analyze_partials(kind: GraphKind, d: &Partials, p: [f64; 2], tol: f64) -> PointAnalysis {
    let b = b_value(kind, d);
    let character = causal_from_b(kind, b, tol);
    let mut out = PointAnalysis {
        p,
        height: d.v,
        b,
        character,
        mean: None,
        gauss: None,
        residual: pde_lhs(kind, d),
        scale: residual_scale(d),
        shape: None,
        eps: None,
        trace: None,
    };
    if let (Ok((h, k)), Ok(forms)) = (
        curvatures_from_partials(kind, d, p, tol),
        forms_from_partials(kind, d, p, tol),
    ) {
        let sh = forms.shape_operator();
        out.mean = Some(h);
        out.gauss = Some(k);
        out.shape = Some(classify_shape(sh, SHAPE_TOL));
        out.eps = Some(forms.eps);
        out.trace = Some(sh[0][0] + sh[1][1]);
    }
    out
}

pub fn analyze_point(s: &SurfaceGraph, p: [f64; 2], tol: f64) -> Result<PointAnalysis> {
    Ok(analyze_partials(s.kind, &s.height.partials(p)?, p, tol))
}
