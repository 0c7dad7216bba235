//! Calabi correspondence between minimal graphs in E3 and spacelike ZMC
//! graphs, by quadrature of the rotated normalized gradient.
//!
//! The dual of `z = f(x, y)` is the graph `t = g(x, y)` with
//! `(g_x, g_y) = (-f_y, f_x) / W_f`. Conversely a spacelike solution `g`
//! yields `f` through `(f_x, f_y) = (g_y, -g_x) / sqrt(1 - g_x^2 - g_y^2)`,
//! which inverts the first map exactly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{pde_lhs, residual_scale};
use crate::graph::{GraphKind, Rect, SurfaceGraph};
use crate::height::Height;
use crate::jet::{Jet, Partials};

type C = Complex64;

/// Local tolerance of the adaptive Simpson rule.
pub const QUAD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldKind {
    /// `(-f_y, f_x) / sqrt(1 + f_x^2 + f_y^2)`
    Dual,
    /// `(g_y, -g_x) / sqrt(1 - g_x^2 - g_y^2)`
    Inverse,
}

/// Height defined by integrating a gradient field from a basepoint along
/// the path that first moves in `x`, then in `y`.
#[derive(Debug)]
pub struct CalabiHeight {
    pub source: Height,
    pub field: FieldKind,
    pub base: [f64; 2],
}

impl CalabiHeight {
    pub fn describe(&self) -> String {
        let tag = match self.field {
            FieldKind::Dual => "calabi_dual",
            FieldKind::Inverse => "calabi_inverse",
        };
        format!("{tag}[{}]", self.source)
    }

    /// Jets of the gradient field, exact through `order`.
    pub fn field_jets(&self, p: [f64; 2], order: usize) -> Result<[Jet; 2]> {
        let [sx, sy] = self.source.gradient_jets(p, order)?;
        match self.field {
            FieldKind::Dual => {
                let w = sx
                    .square()
                    .add(&sy.square())
                    .add_const(C::new(1.0, 0.0))
                    .sqrt()?;
                Ok([sy.neg().div(&w)?, sx.div(&w)?])
            }
            FieldKind::Inverse => {
                let b = sx
                    .square()
                    .add(&sy.square())
                    .neg()
                    .add_const(C::new(1.0, 0.0));
                if b.value().re <= 0.0 {
                    return Err(Error::NotSpacelike(b.value().re));
                }
                let w = b.sqrt()?;
                Ok([sy.div(&w)?, sx.neg().div(&w)?])
            }
        }
    }

    pub fn field(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        let [a, b] = self.field_jets(p, 0)?;
        Ok([a.value().re, b.value().re])
    }

    pub fn value(&self, p: [f64; 2]) -> Result<f64> {
        let [x0, y0] = self.base;
        let row = simpson(|s| Ok(self.field([s, y0])?[0]), x0, p[0], QUAD_TOL)?;
        let col = simpson(|s| Ok(self.field([p[0], s])?[1]), y0, p[1], QUAD_TOL)?;
        Ok(row + col)
    }

    /// Jet assembled from the value and the field jets.
    pub fn jet(&self, p: [f64; 2], order: usize) -> Result<Jet> {
        let base = [C::new(p[0], 0.0), C::new(p[1], 0.0)];
        let mut out = Jet::constant(base, order, C::new(self.value(p)?, 0.0));
        if order == 0 {
            return Ok(out);
        }
        let [fp, fq] = self.field_jets(p, order - 1)?;
        for n in 1..=order {
            for j in 0..=n {
                let k = n - j;
                let c = if j >= 1 {
                    fp.coeff(j - 1, k) / j as f64
                } else {
                    fq.coeff(0, k - 1) / k as f64
                };
                out.set_coeff(j, k, c);
            }
        }
        Ok(out)
    }

    /// Partials of the integrated height; `value` is supplied by the caller
    /// so that no quadrature is needed.
    fn partials_with(&self, p: [f64; 2], value: f64) -> Result<Partials> {
        let [fp, fq] = self.field_jets(p, 1)?;
        Ok(Partials {
            v: value,
            fx: fp.value().re,
            fy: fq.value().re,
            fxx: fp.coeff(1, 0).re,
            fxy: fp.coeff(0, 1).re,
            fyy: fq.coeff(0, 1).re,
        })
    }

    /// `dp/dy - dq/dx` at `p`.
    pub fn exactness_residual(&self, p: [f64; 2]) -> Result<f64> {
        let [fp, fq] = self.field_jets(p, 1)?;
        Ok((fp.coeff(0, 1) - fq.coeff(1, 0)).re)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn simpson(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(&f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}

/// Integrals of `f` from `x0` to each of the ascending `nodes`, summed
/// segment by segment outward from `x0`.
fn cumulative(
    f: &(impl Fn(f64) -> Result<f64> + Sync),
    x0: f64,
    nodes: &[f64],
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; nodes.len()];
    let split = nodes.partition_point(|&u| u < x0);
    let mut acc = 0.0;
    let mut prev = x0;
    for i in split..nodes.len() {
        acc += simpson(f, prev, nodes[i], QUAD_TOL)?;
        prev = nodes[i];
        out[i] = acc;
    }
    acc = 0.0;
    prev = x0;
    for i in (0..split).rev() {
        acc += simpson(f, prev, nodes[i], QUAD_TOL)?;
        prev = nodes[i];
        out[i] = acc;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CalabiReport {
    pub field: FieldKind,
    pub base: [f64; 2],
    pub grid: usize,
    /// Largest scaled residual of the source equation.
    pub source_residual: f64,
    /// Largest `|dp/dy - dq/dx|` over the grid.
    pub exactness: f64,
    /// Largest disagreement of the two integration paths per unit length.
    pub path_mismatch: f64,
    /// Smallest `1 - p^2 - q^2` (dual) or `1 - g_x^2 - g_y^2` (inverse).
    pub min_b: f64,
    /// Largest scaled residual of the target equation.
    pub target_residual: f64,
}

#[derive(Debug, Clone)]
pub struct CalabiOutcome {
    pub graph: SurfaceGraph,
    pub us: Vec<f64>,
    pub vs: Vec<f64>,
    /// Integrated heights in row-major order (`v` outer).
    pub table: Vec<f64>,
    pub report: CalabiReport,
}

#[derive(Debug, Clone, Copy)]
pub struct CalabiOptions {
    pub grid: usize,
    /// Bound on the scaled residual of the source equation.
    pub tol_minimal: f64,
    /// Bound on path disagreement per unit length.
    pub tol_path: f64,
}

impl Default for CalabiOptions {
    fn default() -> Self {
        CalabiOptions {
            grid: 41,
            tol_minimal: 1e-8,
            tol_path: 1e-8,
        }
    }
}

/// Dual spacelike ZMC graph of a minimal E3 graph.
pub fn calabi_dual(f: &SurfaceGraph, base: [f64; 2], opts: CalabiOptions) -> Result<CalabiOutcome> {
    expect_kind(f, GraphKind::E3)?;
    run(f, base, opts, FieldKind::Dual)
}

/// Minimal E3 graph whose dual is the given spacelike ZMC graph.
pub fn calabi_inverse(
    g: &SurfaceGraph,
    base: [f64; 2],
    opts: CalabiOptions,
) -> Result<CalabiOutcome> {
    expect_kind(g, GraphKind::ZMC)?;
    run(g, base, opts, FieldKind::Inverse)
}

fn expect_kind(s: &SurfaceGraph, kind: GraphKind) -> Result<()> {
    if s.kind != kind {
        return Err(Error::KindMismatch {
            expected: kind.name().into(),
            found: s.kind.name().into(),
        });
    }
    Ok(())
}

fn run(
    s: &SurfaceGraph,
    base: [f64; 2],
    opts: CalabiOptions,
    field: FieldKind,
) -> Result<CalabiOutcome> {
    if !s.domain.contains(base) {
        return Err(Error::InvalidArgument(format!(
            "basepoint ({}, {}) lies outside the domain {}",
            base[0], base[1], s.domain
        )));
    }
    let n = opts.grid.max(2);
    let pts = s.domain.grid(n);

    let source: Vec<Partials> = pts
        .par_iter()
        .map(|&p| s.height.partials(p))
        .collect::<Result<_>>()?;
    if field == FieldKind::Inverse {
        let min_b = source
            .iter()
            .map(|d| 1.0 - d.fx * d.fx - d.fy * d.fy)
            .fold(f64::INFINITY, f64::min);
        if min_b <= 0.0 {
            return Err(Error::NotSpacelike(min_b));
        }
    }
    let source_residual = source
        .iter()
        .map(|d| pde_lhs(s.kind, d).abs() / residual_scale(d))
        .fold(0.0, f64::max);
    if source_residual > opts.tol_minimal {
        return Err(Error::NotMinimal(source_residual));
    }

    let ch = CalabiHeight {
        source: s.height.clone(),
        field,
        base,
    };
    let exactness = pts
        .par_iter()
        .map(|&p| ch.exactness_residual(p).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let (us, vs) = s.domain.axes(n);
    let [x0, y0] = base;
    // path 1: along x on y = y0, then along y
    let row = cumulative(&|u| Ok(ch.field([u, y0])?[0]), x0, &us)?;
    let cols: Vec<Vec<f64>> = us
        .par_iter()
        .map(|&u| cumulative(&|v| Ok(ch.field([u, v])?[1]), y0, &vs))
        .collect::<Result<_>>()?;
    // path 2: along y on x = x0, then along x
    let col = cumulative(&|v| Ok(ch.field([x0, v])?[1]), y0, &vs)?;
    let rows: Vec<Vec<f64>> = vs
        .par_iter()
        .map(|&v| cumulative(&|u| Ok(ch.field([u, v])?[0]), x0, &us))
        .collect::<Result<_>>()?;

    let mut table = Vec::with_capacity(n * n);
    let mut path_mismatch: f64 = 0.0;
    for (j, &v) in vs.iter().enumerate() {
        for (i, &u) in us.iter().enumerate() {
            let g1 = row[i] + cols[i][j];
            let g2 = col[j] + rows[j][i];
            let len = ((u - x0).abs() + (v - y0).abs()).max(1e-12);
            path_mismatch = path_mismatch.max((g1 - g2).abs() / len);
            table.push(g1);
        }
    }
    if path_mismatch > opts.tol_path {
        return Err(Error::NonExactField(path_mismatch));
    }

    let target_kind = match field {
        FieldKind::Dual => GraphKind::ZMC,
        FieldKind::Inverse => GraphKind::E3,
    };
    let target: Vec<Partials> = pts
        .par_iter()
        .zip(table.par_iter())
        .map(|(&p, &v)| ch.partials_with(p, v))
        .collect::<Result<_>>()?;
    let min_b = target
        .iter()
        .map(|d| 1.0 - d.fx * d.fx - d.fy * d.fy)
        .fold(f64::INFINITY, f64::min);
    let min_b = match field {
        FieldKind::Dual => min_b,
        FieldKind::Inverse => source
            .iter()
            .map(|d| 1.0 - d.fx * d.fx - d.fy * d.fy)
            .fold(f64::INFINITY, f64::min),
    };
    let target_residual = target
        .iter()
        .map(|d| pde_lhs(target_kind, d).abs() / residual_scale(d))
        .fold(0.0, f64::max);

    let graph = SurfaceGraph::new(
        Height::Calabi(std::sync::Arc::new(ch)),
        target_kind,
        s.domain,
    );
    Ok(CalabiOutcome {
        graph,
        us,
        vs,
        table,
        report: CalabiReport {
            field,
            base,
            grid: n,
            source_residual,
            exactness,
            path_mismatch,
            min_b,
            target_residual,
        },
    })
}

/// Best agreement of `a` with `+b + c` or `-b + c` over constants `c`.
///
/// Returns the sign and the sup-norm error.
pub fn compare_mod_sign(a: &[f64], b: &[f64]) -> (f64, f64) {
    let err = |s: f64| {
        let (lo, hi) = a
            .iter()
            .zip(b)
            .map(|(x, y)| x - s * y)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                (lo.min(d), hi.max(d))
            });
        0.5 * (hi - lo)
    };
    let (ep, em) = (err(1.0), err(-1.0));
    if ep <= em {
        (1.0, ep)
    } else {
        (-1.0, em)
    }
}

/// Values of `f` on the cell-center grid of `r`, in table order.
pub fn sample(s: &SurfaceGraph, r: &Rect, n: usize) -> Result<Vec<f64>> {
    r.grid(n).par_iter().map(|&p| s.eval(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = simpson(|x| Ok(x.cos()), 0.0, 1.3, 1e-12).unwrap();
        assert!((v - 1.3f64.sin()).abs() < 1e-11);
        let v = simpson(|x| Ok(x.exp()), 1.0, -1.0, 1e-12).unwrap();
        assert!((v + (1.0f64.exp() - (-1.0f64).exp())).abs() < 1e-11);
    }

    #[test]
    fn cumulative_runs_both_directions() {
        let nodes = [-1.0, -0.5, 0.25, 1.0];
        let v = cumulative(&|x| Ok(2.0 * x), 0.0, &nodes).unwrap();
        for (u, got) in nodes.iter().zip(v) {
            assert!((got - u * u).abs() < 1e-14);
        }
    }

    #[test]
    fn dual_of_plane_is_zero() {
        let f = SurfaceGraph::from_dsl("0", GraphKind::E3, Rect::square(1.0)).unwrap();
        let opts = CalabiOptions {
            grid: 5,
            ..Default::default()
        };
        let out = calabi_dual(&f, [0.0, 0.0], opts).unwrap();
        assert!(out.table.iter().all(|v| *v == 0.0));
        assert_eq!(out.graph.eval([0.3, -0.2]).unwrap(), 0.0);
    }

    #[test]
    fn kind_is_checked() {
        let g = SurfaceGraph::from_dsl("0", GraphKind::ZMC, Rect::square(1.0)).unwrap();
        assert!(matches!(
            calabi_dual(&g, [0.0, 0.0], CalabiOptions::default()),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn compare_mod_sign_finds_sign() {
        let a = [1.0, 2.0, 3.0];
        let b = [-1.0, -2.0, -3.0];
        let (s, e) = compare_mod_sign(&a, &b);
        assert_eq!(s, -1.0);
        assert_eq!(e, 0.0);
    }
}
