//! Grid reports and their serializations (JSON, CSV, OBJ).

use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::ser::Serialize;
use serde::Serialize as DeriveSerialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::Result;
use crate::geometry::{analyze_point, CausalCharacter, PointAnalysis};
use crate::graph::{GraphKind, Rect, SurfaceGraph};

#[derive(Debug, Clone, DeriveSerialize)]
pub struct PointRecord {
    pub u: f64,
    pub v: f64,
    pub height: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "H")]
    pub h: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub character: CausalCharacter,
    pub residual: f64,
    pub scale: f64,
}

impl From<&PointAnalysis> for PointRecord {
    fn from(a: &PointAnalysis) -> Self {
        PointRecord {
            u: a.p[0],
            v: a.p[1],
            height: a.height,
            b: a.b,
            h: a.mean,
            k: a.gauss,
            character: a.character,
            residual: a.residual,
            scale: a.scale,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, DeriveSerialize)]
pub struct Census {
    pub spacelike: usize,
    pub timelike: usize,
    pub lightlike: usize,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct Summary {
    pub points: usize,
    pub failed_points: usize,
    pub max_residual: f64,
    pub max_scaled_residual: f64,
    pub census: Census,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Summary {
    pub fn from_points(points: &[PointRecord], failed_points: usize) -> Summary {
        let mut census = Census::default();
        for p in points {
            match p.character {
                CausalCharacter::Spacelike => census.spacelike += 1,
                CausalCharacter::Timelike => census.timelike += 1,
                CausalCharacter::Lightlike => census.lightlike += 1,
            }
        }
        Summary {
            points: points.len(),
            failed_points,
            max_residual: points.iter().map(|p| p.residual.abs()).fold(0.0, f64::max),
            max_scaled_residual: points
                .iter()
                .map(|p| p.residual.abs() / p.scale)
                .fold(0.0, f64::max),
            census,
            checks: Vec::new(),
            pass: true,
        }
    }
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct Meta {
    pub command: String,
    pub source: String,
    pub kind: GraphKind,
    pub domain: Rect,
    pub grid: usize,
    pub tol_lightlike: f64,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct GridReport {
    pub meta: Meta,
    pub points: Vec<PointRecord>,
    pub failed: Vec<[f64; 2]>,
    pub summary: Summary,
    /// Command specific payload (parity verdicts, transform reports, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl GridReport {
    /// Analyzes `s` at the cell centers of its domain.
    pub fn build(command: &str, s: &SurfaceGraph, n: usize, tol_lightlike: f64) -> GridReport {
        let results: Vec<_> = s
            .domain
            .grid(n)
            .par_iter()
            .map(|&p| (p, analyze_point(s, p, tol_lightlike)))
            .collect();
        let mut points = Vec::new();
        let mut failed = Vec::new();
        for (p, r) in results {
            match r {
                Ok(a) if a.height.is_finite() && a.residual.is_finite() => points.push((&a).into()),
                _ => failed.push(p),
            }
        }
        let summary = Summary::from_points(&points, failed.len());
        GridReport {
            meta: Meta {
                command: command.to_string(),
                source: s.describe(),
                kind: s.kind,
                domain: s.domain,
                grid: n,
                tol_lightlike,
            },
            points,
            failed,
            summary,
            details: None,
        }
    }

    /// Records a `value < tolerance` check and updates the overall verdict.
    pub fn check(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        let pass = value < tolerance;
        self.summary.checks.push(Check {
            name: name.to_string(),
            value,
            tolerance,
            pass,
        });
        self.summary.pass &= pass;
        pass
    }

    pub fn with_details(mut self, v: impl Serialize) -> Result<GridReport> {
        self.details = Some(serde_json::to_value(v)?);
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,height,B,H,K,character,residual\n");
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
        for p in &self.points {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{:.16e}",
                p.u,
                p.v,
                p.height,
                p.b,
                opt(p.h),
                opt(p.k),
                p.character.name(),
                p.residual
            );
        }
        out
    }
}

/// Pretty JSON with every float printed in exponent form with 17
/// significant digits; non-finite floats become `null`.
pub struct FixedFloatFormatter {
    inner: PrettyFormatter<'static>,
}

impl Default for FixedFloatFormatter {
    fn default() -> Self {
        FixedFloatFormatter {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for FixedFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(w, "{v:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter::default());
    v.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes utf-8"))
}

/// Triangle mesh of the graph in ambient coordinates.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
    /// Zero-based indices of vertices on the lightlike locus.
    pub lightlike: Vec<usize>,
}

impl Mesh {
    /// Cell-center grid mesh; points where evaluation fails are left out
    /// together with the faces touching them.
    pub fn build(s: &SurfaceGraph, n: usize, tol_lightlike: f64) -> Mesh {
        let results: Vec<_> = s
            .domain
            .grid(n)
            .par_iter()
            .map(|&p| analyze_point(s, p, tol_lightlike).ok())
            .collect();
        let mut index = vec![None; results.len()];
        let mut vertices = Vec::new();
        let mut lightlike = Vec::new();
        for (i, r) in results.iter().enumerate() {
            if let Some(a) = r {
                let x = s.kind.embed(a.p[0], a.p[1], a.height);
                if x.iter().all(|c| c.is_finite()) {
                    if a.character == CausalCharacter::Lightlike {
                        lightlike.push(vertices.len());
                    }
                    index[i] = Some(vertices.len());
                    vertices.push(x);
                }
            }
        }
        let mut faces = Vec::new();
        for j in 0..n.saturating_sub(1) {
            for i in 0..n - 1 {
                let at = |i: usize, j: usize| index[j * n + i];
                if let (Some(a), Some(b), Some(c), Some(d)) =
                    (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1))
                {
                    faces.push([a, b, c]);
                    faces.push([a, c, d]);
                }
            }
        }
        Mesh {
            vertices,
            faces,
            lightlike,
        }
    }

    pub fn to_obj(&self, comment: &str) -> String {
        let mut out = format!("# {comment}\n");
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        out
    }

    /// One-based OBJ indices of lightlike vertices, one per line.
    pub fn lightlike_sidecar(&self) -> String {
        self.lightlike
            .iter()
            .map(|i| format!("{}\n", i + 1))
            .collect()
    }
}
