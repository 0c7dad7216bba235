//! Scalar kernels shared by the real, complex and jet evaluators.
//!
//! Branch cuts follow the principal conventions of `num_complex`:
//! `log`/`sqrt` on (-inf, 0], `arcsin`/`arccos`/`arctanh` on |x| >= 1,
//! `arccosh` on (-inf, 1], `arctan`/`arcsinh` on the imaginary axis
//! beyond +-i. Arguments within [`CUT_TOL`] of a cut or pole are rejected.

use num_complex::Complex64;

use super::{BinOp, Func};
use crate::error::{Error, Result};

pub const CUT_TOL: f64 = 1e-12;

fn finite(node: &str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::domain(node, format!("non-finite value {z}")))
    }
}

/// Rejects arguments on (or within tolerance of) a cut or pole of `f`.
pub fn check_cut(f: Func, z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(f.name(), format!("non-finite argument {z}")));
    }
    let near_real = z.im.abs() <= CUT_TOL;
    let near_imag = z.re.abs() <= CUT_TOL;
    let hit = match f {
        Func::Log | Func::Sqrt => near_real && z.re <= CUT_TOL,
        Func::Arcsin | Func::Arccos | Func::Arctanh => near_real && z.re.abs() >= 1.0 - CUT_TOL,
        Func::Arccosh => near_real && z.re <= 1.0 + CUT_TOL,
        Func::Arctan | Func::Arcsinh => near_imag && z.im.abs() >= 1.0 - CUT_TOL,
        Func::Tan => z.cos().norm() <= CUT_TOL,
        Func::Tanh => z.cosh().norm() <= CUT_TOL,
        Func::Sin | Func::Cos | Func::Sinh | Func::Cosh | Func::Exp => false,
    };
    if hit {
        Err(Error::domain(
            f.name(),
            format!("argument {z} lies on a branch cut or pole"),
        ))
    } else {
        Ok(())
    }
}

fn real_kernel(f: Func, x: f64) -> f64 {
    match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Tanh => x.tanh(),
        Func::Exp => x.exp(),
        Func::Log => x.ln(),
        Func::Sqrt => x.sqrt(),
        Func::Arcsin => x.asin(),
        Func::Arccos => x.acos(),
        Func::Arctan => x.atan(),
        Func::Arcsinh => x.asinh(),
        Func::Arccosh => x.acosh(),
        Func::Arctanh => x.atanh(),
    }
}

fn complex_kernel(f: Func, z: Complex64) -> Complex64 {
    match f {
        Func::Sin => z.sin(),
        Func::Cos => z.cos(),
        Func::Tan => z.tan(),
        Func::Sinh => z.sinh(),
        Func::Cosh => z.cosh(),
        Func::Tanh => z.tanh(),
        Func::Exp => z.exp(),
        Func::Log => z.ln(),
        Func::Sqrt => z.sqrt(),
        Func::Arcsin => z.asin(),
        Func::Arccos => z.acos(),
        Func::Arctan => z.atan(),
        Func::Arcsinh => z.asinh(),
        Func::Arccosh => z.acosh(),
        Func::Arctanh => z.atanh(),
    }
}

/// One Newton step on `F(w) = z` for the inverse functions. The closed
/// forms lose the imaginary part of nearly real arguments to cancellation.
fn polish(f: Func, z: Complex64, w: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let (fw, dfw) = match f {
        Func::Arcsin => (w.sin(), w.cos()),
        Func::Arccos => (w.cos(), -w.sin()),
        Func::Arcsinh => (w.sinh(), w.cosh()),
        Func::Arccosh => (w.cosh(), w.sinh()),
        Func::Arctan => {
            let t = w.tan();
            (t, one + t * t)
        }
        Func::Arctanh => {
            let t = w.tanh();
            (t, one - t * t)
        }
        _ => return w,
    };
    if dfw.norm() < 1e-8 {
        return w;
    }
    let next = w - (fw - z) / dfw;
    if next.re.is_finite() && next.im.is_finite() {
        next
    } else {
        w
    }
}

pub fn real_call(f: Func, x: f64) -> Result<f64> {
    check_cut(f, Complex64::new(x, 0.0))?;
    let v = real_kernel(f, x);
    finite(f.name(), Complex64::new(v, 0.0)).map(|z| z.re)
}

pub fn complex_call(f: Func, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return real_call(f, z.re).map(|v| Complex64::new(v, 0.0));
    }
    check_cut(f, z)?;
    finite(f.name(), polish(f, z, complex_kernel(f, z)))
}

pub fn real_binary(op: BinOp, a: f64, b: f64) -> Result<f64> {
    let v = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b.abs() <= CUT_TOL {
                return Err(Error::domain("div", format!("pole: denominator {b:e}")));
            }
            a / b
        }
    };
    finite("binary", Complex64::new(v, 0.0)).map(|z| z.re)
}

pub fn complex_binary(op: BinOp, a: Complex64, b: Complex64) -> Result<Complex64> {
    if a.im == 0.0 && b.im == 0.0 {
        return real_binary(op, a.re, b.re).map(|v| Complex64::new(v, 0.0));
    }
    let v = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b.norm() <= CUT_TOL {
                return Err(Error::domain("div", format!("pole: denominator {b}")));
            }
            a / b
        }
    };
    finite("binary", v)
}

pub fn real_powi(b: f64, n: i32) -> Result<f64> {
    if n < 0 && b.abs() <= CUT_TOL {
        return Err(Error::domain("pow", format!("pole: base {b:e}")));
    }
    finite("pow", Complex64::new(b.powi(n), 0.0)).map(|z| z.re)
}

pub fn complex_powi(b: Complex64, n: i32) -> Result<Complex64> {
    if b.im == 0.0 {
        return real_powi(b.re, n).map(|v| Complex64::new(v, 0.0));
    }
    if n < 0 && b.norm() <= CUT_TOL {
        return Err(Error::domain("pow", format!("pole: base {b}")));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = b;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    let v = if n < 0 { acc.inv() } else { acc };
    finite("pow", v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_functions_keep_tiny_imaginary_parts() {
        let h = 1e-20;
        let cases: [(Func, f64, f64); 6] = [
            (Func::Arcsin, 0.3, 1.0 / (1.0 - 0.09f64).sqrt()),
            (Func::Arccos, 0.3, -1.0 / (1.0 - 0.09f64).sqrt()),
            (Func::Arctan, 2.0, 0.2),
            (Func::Arcsinh, 0.7, 1.0 / (1.49f64).sqrt()),
            (Func::Arccosh, 1.5, 1.0 / (1.25f64).sqrt()),
            (Func::Arctanh, 0.5, 1.0 / 0.75),
        ];
        for (f, x, d) in cases {
            let w = complex_call(f, Complex64::new(x, h)).unwrap();
            assert!(
                (w.im / h - d).abs() < 1e-12,
                "{}: {} vs {d}",
                f.name(),
                w.im / h
            );
        }
    }
}
