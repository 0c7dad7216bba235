//! Graph kinds, rectangular domains and surface graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_with_names, Expr, VarNames};
use crate::height::Height;

/// Which equation a height function is meant to solve, and how its two
/// slots sit in the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    /// `z = f(x, y)` in Euclidean 3-space; minimal surface equation.
    E3,
    /// `t = g(x, y)` in Minkowski 3-space over the spacelike `xy`-plane.
    ZMC,
    /// `y = h(t, x)` in Minkowski 3-space over the timelike `tx`-plane.
    BI,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [GraphKind::E3, GraphKind::ZMC, GraphKind::BI];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::E3 => "E3",
            GraphKind::ZMC => "ZMC",
            GraphKind::BI => "BI",
        }
    }

    pub fn var_names(self) -> VarNames {
        match self {
            GraphKind::E3 | GraphKind::ZMC => VarNames::XY,
            GraphKind::BI => VarNames::TX,
        }
    }

    pub fn is_lorentzian(self) -> bool {
        self != GraphKind::E3
    }

    /// Ambient position of the graph point over `(u, v)` with height `w`.
    ///
    /// Coordinates are `(x, y, z)` for E3 and `(t, x, y)` otherwise.
    pub fn embed(self, u: f64, v: f64, w: f64) -> [f64; 3] {
        match self {
            GraphKind::E3 => [u, v, w],
            GraphKind::ZMC => [w, u, v],
            GraphKind::BI => [u, v, w],
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GraphKind> {
        match s {
            "E3" | "e3" => Ok(GraphKind::E3),
            "ZMC" | "zmc" => Ok(GraphKind::ZMC),
            "BI" | "bi" => Ok(GraphKind::BI),
            _ => Err(Error::InvalidArgument(format!(
                "unknown graph kind `{s}` (expected E3, ZMC or BI)"
            ))),
        }
    }
}

/// Closed rectangle `[u0, u1] x [v0, v1]` in the two graph variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Rect> {
        let ok = [u0, u1, v0, v1].iter().all(|c| c.is_finite()) && u0 < u1 && v0 < v1;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "bad rectangle [{u0}, {u1}] x [{v0}, {v1}]"
            )));
        }
        Ok(Rect {
            u: [u0, u1],
            v: [v0, v1],
        })
    }

    pub fn square(a: f64) -> Rect {
        Rect {
            u: [-a, a],
            v: [-a, a],
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.u[0] <= p[0] && p[0] <= self.u[1] && self.v[0] <= p[1] && p[1] <= self.v[1]
    }

    pub fn center(&self) -> [f64; 2] {
        [0.5 * (self.u[0] + self.u[1]), 0.5 * (self.v[0] + self.v[1])]
    }

    /// Cell-center coordinates of an `n`-cell partition of each side.
    pub fn axes(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let side = |r: [f64; 2]| {
            let h = (r[1] - r[0]) / n as f64;
            (0..n).map(|i| r[0] + (i as f64 + 0.5) * h).collect()
        };
        (side(self.u), side(self.v))
    }

    /// Cell-center grid in row-major order (`v` outer, `u` inner).
    pub fn grid(&self, n: usize) -> Vec<[f64; 2]> {
        let (us, vs) = self.axes(n);
        vs.iter()
            .flat_map(|&v| us.iter().map(move |&u| [u, v]))
            .collect()
    }

    /// Shrinks toward the center by `k` cells of an `n`-cell grid per side.
    pub fn shrink(&self, n: usize, k: usize) -> Option<Rect> {
        if 2 * k >= n {
            return None;
        }
        let du = (self.u[1] - self.u[0]) / n as f64 * k as f64;
        let dv = (self.v[1] - self.v[0]) / n as f64 * k as f64;
        Some(Rect {
            u: [self.u[0] + du, self.u[1] - du],
            v: [self.v[0] + dv, self.v[1] - dv],
        })
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.u[0], self.u[1], self.v[0], self.v[1])
    }
}

impl FromStr for Rect {
    type Err = Error;

    /// Parses `a:b:c:d` as `[a, b] x [c, d]`.
    fn from_str(s: &str) -> Result<Rect> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "domain `{s}` must have the form a:b:c:d"
            )));
        }
        let mut c = [0.0; 4];
        for (slot, p) in c.iter_mut().zip(&parts) {
            *slot = p.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("domain bound `{p}` is not a number"))
            })?;
        }
        Rect::new(c[0], c[1], c[2], c[3])
    }
}

/// A height function together with its graph kind and working domain.
#[derive(Debug, Clone)]
pub struct SurfaceGraph {
    pub height: Height,
    pub kind: GraphKind,
    pub domain: Rect,
}

impl SurfaceGraph {
    pub fn new(height: Height, kind: GraphKind, domain: Rect) -> SurfaceGraph {
        SurfaceGraph {
            height,
            kind,
            domain,
        }
    }

    /// Parses `dsl` with the slot names of `kind` (`x, y` or `t, x`).
    pub fn from_dsl(dsl: &str, kind: GraphKind, domain: Rect) -> Result<SurfaceGraph> {
        let e = parse_with_names(dsl, kind.var_names())?;
        Ok(SurfaceGraph::new(Height::Expr(e), kind, domain))
    }

    pub fn from_expr(e: Expr, kind: GraphKind, domain: Rect) -> SurfaceGraph {
        SurfaceGraph::new(Height::Expr(e), kind, domain)
    }

    pub fn with_domain(&self, domain: Rect) -> SurfaceGraph {
        SurfaceGraph {
            domain,
            ..self.clone()
        }
    }

    pub fn eval(&self, p: [f64; 2]) -> Result<f64> {
        self.height.eval(p)
    }

    pub fn describe(&self) -> String {
        self.height.describe(self.kind.var_names())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_parsing() {
        let r: Rect = "-2:2:-1.5:1.5".parse().unwrap();
        assert_eq!(r.u, [-2.0, 2.0]);
        assert_eq!(r.v, [-1.5, 1.5]);
        assert!("1:0:0:1".parse::<Rect>().is_err());
        assert!("1:2:3".parse::<Rect>().is_err());
    }

    #[test]
    fn grid_is_cell_centered() {
        let r = Rect::new(0.0, 1.0, 0.0, 2.0).unwrap();
        let g = r.grid(2);
        assert_eq!(g, vec![[0.25, 0.5], [0.75, 0.5], [0.25, 1.5], [0.75, 1.5]]);
        assert!(g.iter().all(|p| r.contains(*p)));
    }
}
