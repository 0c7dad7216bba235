//! Height functions of surface graphs.
//!
//! Besides closed-form expressions a height can be an affine substitution
//! of another height (Wick rotations, ambient isometries), the inverse of a
//! timelike-plane graph solved for its time coordinate, or a Calabi dual
//! obtained by quadrature. All variants except the last are analytic in
//! complex arguments, so they can be rotated again.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::calabi::CalabiHeight;
use crate::error::{Error, Result};
use crate::expr::{Expr, Slot, VarNames};
use crate::jet::{Jet, Partials, MAX_ORDER};

type C = Complex64;

/// `value(p) = coef * inner(a) + offset` with
/// `a[k] = mult[k] * p[perm[k]] + shift[k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substitution {
    pub perm: [usize; 2],
    pub mult: [C; 2],
    pub shift: [f64; 2],
    pub coef: C,
    pub offset: f64,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution {
            perm: [0, 1],
            mult: [C::new(1.0, 0.0); 2],
            shift: [0.0; 2],
            coef: C::new(1.0, 0.0),
            offset: 0.0,
        }
    }

    /// Arguments handed to the inner height for the outer point `p`.
    pub fn args(&self, p: [C; 2]) -> [C; 2] {
        [0, 1].map(|k| self.mult[k] * p[self.perm[k]] + self.shift[k])
    }

    fn arg_jets(&self, outer: &[Jet; 2]) -> [Jet; 2] {
        [0, 1].map(|k| {
            outer[self.perm[k]]
                .scale(self.mult[k])
                .add_const(C::new(self.shift[k], 0.0))
        })
    }

    /// Outer point mapped onto the inner point `a`, if it is real.
    pub fn preimage(&self, a: [f64; 2]) -> Option<[f64; 2]> {
        let mut p = [0.0; 2];
        for k in 0..2 {
            let z = C::new(a[k] - self.shift[k], 0.0) / self.mult[k];
            if z.im.abs() > 1e-14 * (1.0 + z.re.abs()) {
                return None;
            }
            p[self.perm[k]] = z.re;
        }
        Some(p)
    }
}

#[derive(Debug)]
pub struct Substituted {
    pub inner: Height,
    pub sub: Substitution,
    pub label: String,
}

/// Inverse of a timelike-plane graph `y = h(t, x)` written as
/// `t = g(x, y)`; defined near a witness point where `h_t != 0`.
#[derive(Debug)]
pub struct Implicit {
    pub inner: Height,
    /// `(t, x, y)` with `y = h(t, x)`.
    pub witness: [f64; 3],
    slope: [C; 2],
}

#[derive(Debug, Clone)]
pub enum Height {
    Expr(Expr),
    Substituted(Arc<Substituted>),
    Implicit(Arc<Implicit>),
    Calabi(Arc<CalabiHeight>),
}

const NEWTON_MAX: usize = 80;

impl Height {
    pub fn substituted(inner: Height, sub: Substitution, label: impl Into<String>) -> Height {
        Height::Substituted(Arc::new(Substituted {
            inner,
            sub,
            label: label.into(),
        }))
    }

    /// Solves `y = h(t, x)` for `t` near the graph point over `(t_w, x_w)`.
    pub fn implicit(inner: Height, t_w: f64, x_w: f64) -> Result<Height> {
        let j = inner.jet([t_w, x_w], 1)?;
        let ht = j.coeff(1, 0);
        if ht.norm() < 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "cannot solve for t at ({t_w}, {x_w}): h_t vanishes"
            )));
        }
        Ok(Height::Implicit(Arc::new(Implicit {
            inner,
            witness: [t_w, x_w, j.value().re],
            slope: [ht, j.coeff(0, 1)],
        })))
    }

    /// Composition with arbitrary argument jets (all sharing one base).
    pub fn series(&self, args: &[Jet; 2]) -> Result<Jet> {
        match self {
            Height::Expr(e) => Jet::eval_expr(e, args),
            Height::Substituted(s) => {
                let inner = s.inner.series(&s.sub.arg_jets(args))?;
                Ok(inner.scale(s.sub.coef).add_const(C::new(s.sub.offset, 0.0)))
            }
            Height::Implicit(im) => {
                let base = [args[0].value(), args[1].value()];
                let order = args[0].order().min(args[1].order());
                im.jet(base, order).map(|j| j.compose(args))
            }
            Height::Calabi(c) => {
                let base = [args[0].value(), args[1].value()];
                let p = real_point(base, "calabi dual")?;
                let order = args[0].order().min(args[1].order());
                c.jet(p, order).map(|j| j.compose(args))
            }
        }
    }

    pub fn jet_complex(&self, base: [C; 2], order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "jet order {order} exceeds {MAX_ORDER}"
            )));
        }
        match self {
            Height::Implicit(im) => im.jet(base, order),
            Height::Calabi(c) => c.jet(real_point(base, "calabi dual")?, order),
            _ => self.series(&Jet::identity_complex(base, order)),
        }
    }

    /// Jet at a real point of the analytic (unrealized) height.
    pub fn jet(&self, p: [f64; 2], order: usize) -> Result<Jet> {
        self.jet_complex([C::new(p[0], 0.0), C::new(p[1], 0.0)], order)
    }

    pub fn eval_complex(&self, p: [C; 2]) -> Result<C> {
        match self {
            Height::Expr(e) => e.eval_complex(p),
            Height::Substituted(s) => {
                let v = s.inner.eval_complex(s.sub.args(p))?;
                Ok(s.sub.coef * v + s.sub.offset)
            }
            Height::Implicit(im) => im.solve(p),
            Height::Calabi(c) => c
                .value(real_point(p, "calabi dual")?)
                .map(|v| C::new(v, 0.0)),
        }
    }

    /// Realized height: the real part of the analytic value.
    pub fn eval(&self, p: [f64; 2]) -> Result<f64> {
        match self {
            Height::Expr(e) => e.eval(p),
            _ => Ok(self
                .eval_complex([C::new(p[0], 0.0), C::new(p[1], 0.0)])?
                .re),
        }
    }

    /// Real parts of value, first and second partials.
    pub fn partials(&self, p: [f64; 2]) -> Result<Partials> {
        Ok(Partials::from_jet(&self.jet(p, 2)?))
    }

    /// Jets of the two first partials, exact through `order`.
    pub fn gradient_jets(&self, p: [f64; 2], order: usize) -> Result<[Jet; 2]> {
        match self {
            Height::Calabi(c) => c.field_jets(p, order),
            _ => {
                let j = self.jet(p, order + 1)?;
                Ok([j.d_dx(), j.d_dy()])
            }
        }
    }

    pub fn is_analytic(&self) -> bool {
        match self {
            Height::Expr(_) => true,
            Height::Substituted(s) => s.inner.is_analytic(),
            Height::Implicit(im) => im.inner.is_analytic(),
            Height::Calabi(_) => false,
        }
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match self {
            Height::Expr(e) => Some(e),
            _ => None,
        }
    }

    pub fn describe(&self, names: VarNames) -> String {
        match self {
            Height::Expr(e) => e.print_with(names),
            Height::Substituted(s) => s.label.clone(),
            Height::Implicit(im) => format!("solve_t[{}]", im.inner.describe(VarNames::TX)),
            Height::Calabi(c) => c.describe(),
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe(VarNames::XY))
    }
}

fn real_point(p: [C; 2], what: &str) -> Result<[f64; 2]> {
    if p[0].im != 0.0 || p[1].im != 0.0 {
        return Err(Error::domain(
            what,
            "only real arguments are supported".to_string(),
        ));
    }
    Ok([p[0].re, p[1].re])
}

impl Implicit {
    /// Complex Newton iteration for `h(t, x) = y`.
    fn solve(&self, p: [C; 2]) -> Result<C> {
        let [x, y] = p;
        let [t_w, x_w, y_w] = self.witness;
        let mut t = C::new(t_w, 0.0) + (y - y_w - self.slope[1] * (x - x_w)) / self.slope[0];
        for _ in 0..NEWTON_MAX {
            let j = self.inner.jet_complex([t, x], 1)?;
            let ht = j.coeff(1, 0);
            if ht.norm() < 1e-14 {
                break;
            }
            let step = (j.value() - y) / ht;
            t -= step;
            if step.norm() <= 1e-15 * (1.0 + t.norm()) {
                let r = self.inner.eval_complex([t, x])? - y;
                if r.norm() <= 1e-12 * (1.0 + y.norm()) {
                    return Ok(t);
                }
            }
        }
        Err(Error::domain(
            "solve_t",
            format!("no solution of h(t, {x}) = {y} near the witness"),
        ))
    }

    /// Series of `t(x, y)` by Newton iteration on jets; each pass fixes
    /// at least one more order.
    fn jet(&self, base: [C; 2], order: usize) -> Result<Jet> {
        let t0 = self.solve(base)?;
        let x = Jet::variable(base, order, Slot::V0);
        let y = Jet::variable(base, order, Slot::V1);
        let ht = self.inner.jet_complex([t0, base[0]], 1)?.coeff(1, 0);
        let inv = ht.inv();
        let mut t = Jet::constant(base, order, t0);
        for _ in 0..=order {
            let h = self.inner.series(&[t.clone(), x.clone()])?;
            t = t.sub(&h.sub(&y).scale(inv));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, parse_with_names};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn substitution_rotates_scherk() {
        // log(cos(ix)/cos(iy)) = log(cosh x / cosh y)
        let f = Height::Expr(parse("log(cos(x)/cos(y))").unwrap());
        let sub = Substitution {
            mult: [c(0.0, 1.0); 2],
            ..Substitution::identity()
        };
        let g = Height::substituted(f, sub, "rot");
        for p in [[0.3f64, -1.7], [1.9, 0.2]] {
            let want = (p[0].cosh() / p[1].cosh()).ln();
            assert!((g.eval(p).unwrap() - want).abs() < 1e-14);
            let j = g.jet(p, 2).unwrap();
            assert!((j.partial(2, 0).re - 1.0 / p[0].cosh().powi(2)).abs() < 1e-13);
            assert!(j.partial(2, 0).im.abs() < 1e-13);
        }
    }

    #[test]
    fn preimage_inverts_real_substitution() {
        let sub = Substitution {
            perm: [1, 0],
            mult: [c(-1.0, 0.0), c(1.0, 0.0)],
            shift: [0.5, -2.0],
            ..Substitution::identity()
        };
        let a = sub.args([c(0.3, 0.0), c(0.7, 0.0)]);
        let p = sub.preimage([a[0].re, a[1].re]).unwrap();
        assert!((p[0] - 0.3).abs() < 1e-15 && (p[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn implicit_inverse_of_timelike_graph() {
        // y = arcsinh(sinh t cos x)  <=>  t = arcsinh(sinh y / cos x)
        let h = Height::Expr(parse_with_names("arcsinh(sinh(t)*cos(x))", VarNames::TX).unwrap());
        let g = Height::implicit(h, 0.0, 0.0).unwrap();
        let want = parse("arcsinh(sinh(y)/cos(x))").unwrap();
        for p in [[0.1, 0.2], [-0.3, 0.5], [0.0, -0.4]] {
            let a = g.jet(p, 4).unwrap();
            let b = crate::jet::jet_at(&want, p, 4).unwrap();
            for ((i, k), v) in b.coefficients() {
                assert!((a.coeff(i, k) - v).norm() < 1e-12, "{p:?} a({i},{k})");
            }
        }
    }

    #[test]
    fn gradient_jets_match_full_jet() {
        let h = Height::Expr(parse("x*tan(y)").unwrap());
        let [gx, gy] = h.gradient_jets([0.2, 0.3], 2).unwrap();
        let j = h.jet([0.2, 0.3], 3).unwrap();
        assert_eq!(gx.coeff(0, 0), j.partial(1, 0));
        assert!((gy.coeff(1, 0) - j.partial(1, 1)).norm() < 1e-15);
    }
}
