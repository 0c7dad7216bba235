//! Truncated bivariate Taylor jets.
//!
//! A [`Jet`] stores `a(j,k) = (d^j/dx^j d^k/dy^k phi)(base) / (j! k!)` for
//! `j + k <= order`, with complex entries so that the same machinery serves
//! real base points and the imaginary substitutions of Wick rotations.
//!
//! Coefficients are grouped by total degree. Unary functions are composed
//! through their first-order ODEs using the Euler operator
//! `D = x d/dx + y d/dy`, which scales the degree-`n` part by `n`; every
//! recurrence from the univariate case then carries over with homogeneous
//! polynomials in place of scalar coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::scalar::{self, CUT_TOL};
use crate::expr::{BinOp, Expr, Func, Node, Slot};

/// Highest supported jet order.
pub const MAX_ORDER: usize = 12;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

#[inline]
fn idx(n: usize, j: usize) -> usize {
    n * (n + 1) / 2 + j
}

#[inline]
fn len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    base: [C; 2],
    order: usize,
    coeffs: Vec<C>,
}

impl Jet {
    pub fn constant(base: [C; 2], order: usize, value: C) -> Jet {
        let mut coeffs = vec![ZERO; len(order)];
        coeffs[0] = value;
        Jet {
            base,
            order,
            coeffs,
        }
    }

    /// The coordinate function of `slot` expanded at `base`.
    pub fn variable(base: [C; 2], order: usize, slot: Slot) -> Jet {
        let mut j = Jet::constant(base, order, base[slot.index()]);
        if order >= 1 {
            // degree-1 part: index 0 is the x^0 y^1 term, index 1 is x^1 y^0
            let pos = match slot {
                Slot::V0 => idx(1, 1),
                Slot::V1 => idx(1, 0),
            };
            j.coeffs[pos] = ONE;
        }
        j
    }

    /// Both coordinate jets at a real base point.
    pub fn identity(base: [f64; 2], order: usize) -> [Jet; 2] {
        let b = [C::new(base[0], 0.0), C::new(base[1], 0.0)];
        Jet::identity_complex(b, order)
    }

    pub fn identity_complex(base: [C; 2], order: usize) -> [Jet; 2] {
        [
            Jet::variable(base, order, Slot::V0),
            Jet::variable(base, order, Slot::V1),
        ]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base(&self) -> [C; 2] {
        self.base
    }

    pub fn value(&self) -> C {
        self.coeffs[0]
    }

    /// Coefficient of `x^j y^k`; zero beyond the truncation order.
    pub fn coeff(&self, j: usize, k: usize) -> C {
        let n = j + k;
        if n > self.order {
            ZERO
        } else {
            self.coeffs[idx(n, j)]
        }
    }

    pub fn set_coeff(&mut self, j: usize, k: usize, v: C) {
        let n = j + k;
        assert!(n <= self.order, "coefficient beyond jet order");
        self.coeffs[idx(n, j)] = v;
    }

    /// `d^j/dx^j d^k/dy^k` at the base point.
    pub fn partial(&self, j: usize, k: usize) -> C {
        self.coeff(j, k) * (factorial(j) * factorial(k))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = ((usize, usize), C)> + '_ {
        (0..=self.order)
            .flat_map(move |n| (0..=n).map(move |j| ((j, n - j), self.coeffs[idx(n, j)])))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn with_base(mut self, base: [C; 2]) -> Jet {
        self.base = base;
        self
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        Jet {
            base: self.base,
            order,
            coeffs: self.coeffs[..len(order)].to_vec(),
        }
    }

    fn like(&self, value: C) -> Jet {
        Jet::constant(self.base, self.order, value)
    }

    fn part(&self, n: usize) -> &[C] {
        &self.coeffs[idx(n, 0)..=idx(n, n)]
    }

    fn zip(&self, other: &Jet, f: impl Fn(C, C) -> C) -> Jet {
        let order = self.order.min(other.order);
        let coeffs = (0..len(order))
            .map(|i| f(self.coeffs[i], other.coeffs[i]))
            .collect();
        Jet {
            base: self.base,
            order,
            coeffs,
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Jet {
        self.scale(-ONE)
    }

    pub fn scale(&self, s: C) -> Jet {
        Jet {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_const(&self, c: C) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.order.min(other.order);
        let mut coeffs = vec![ZERO; len(order)];
        for n in 0..=order {
            let out = &mut coeffs[idx(n, 0)..=idx(n, n)];
            for da in 0..=n {
                conv_acc(out, self.part(da), other.part(n - da));
            }
        }
        Jet {
            base: self.base,
            order,
            coeffs,
        }
    }

    pub fn square(&self) -> Jet {
        self.mul(self)
    }

    /// Quotient; the denominator's value must stay away from zero.
    pub fn div(&self, den: &Jet) -> Result<Jet> {
        let b0 = den.value();
        if b0.norm() <= CUT_TOL {
            return Err(Error::domain("div", format!("pole: denominator {b0}")));
        }
        let order = self.order.min(den.order);
        let inv_b0 = b0.inv();
        let mut q = vec![ZERO; len(order)];
        for n in 0..=order {
            let mut acc: Vec<C> = self.part(n).to_vec();
            for k in 1..=n {
                let qk = &q[idx(n - k, 0)..=idx(n - k, n - k)];
                conv_sub(&mut acc, den.part(k), qk);
            }
            for (j, a) in acc.into_iter().enumerate() {
                q[idx(n, j)] = a * inv_b0;
            }
        }
        Ok(Jet {
            base: self.base,
            order,
            coeffs: q,
        })
    }

    fn recip(&self) -> Result<Jet> {
        self.like(ONE).div(self)
    }

    pub fn powi(&self, n: i32) -> Result<Jet> {
        // scalar check reports poles with the right node name
        scalar::complex_powi(self.value(), n)?;
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut acc = self.like(ONE);
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.square();
            }
        }
        Ok(acc)
    }

    /// Degree-`n` part multiplied by `n`.
    fn euler(&self) -> Jet {
        let mut out = self.clone();
        for n in 0..=self.order {
            let s = n as f64;
            for c in &mut out.coeffs[idx(n, 0)..=idx(n, n)] {
                *c *= s;
            }
        }
        out
    }

    /// Inverse of the Euler operator on the non-constant part.
    fn euler_integral(h: &Jet, f0: C) -> Jet {
        let mut out = h.clone();
        out.coeffs[0] = f0;
        for n in 1..=h.order {
            let s = 1.0 / n as f64;
            for c in &mut out.coeffs[idx(n, 0)..=idx(n, n)] {
                *c *= s;
            }
        }
        out
    }

    /// `F(u)` given `F(u0)` and the jet of `F'(u)`.
    fn from_derivative(&self, f0: C, fprime: &Jet) -> Jet {
        Jet::euler_integral(&self.euler().mul(fprime), f0)
    }

    fn exp_jet(&self, f0: C) -> Jet {
        let du = self.euler();
        let mut f = self.like(f0);
        for n in 1..=self.order {
            let mut acc = vec![ZERO; n + 1];
            for k in 1..=n {
                conv_acc(&mut acc, du.part(k), f.part(n - k));
            }
            let s = 1.0 / n as f64;
            for (j, a) in acc.into_iter().enumerate() {
                f.coeffs[idx(n, j)] = a * s;
            }
        }
        f
    }

    /// Coupled recurrences for (sin, cos) when `sign = -1` and
    /// (sinh, cosh) when `sign = +1`.
    fn trig_pair(&self, s0: C, c0: C, sign: f64) -> (Jet, Jet) {
        let du = self.euler();
        let mut s = self.like(s0);
        let mut c = self.like(c0);
        for n in 1..=self.order {
            let mut sa = vec![ZERO; n + 1];
            let mut ca = vec![ZERO; n + 1];
            for k in 1..=n {
                conv_acc(&mut sa, du.part(k), c.part(n - k));
                conv_acc(&mut ca, du.part(k), s.part(n - k));
            }
            let inv = 1.0 / n as f64;
            for j in 0..=n {
                s.coeffs[idx(n, j)] = sa[j] * inv;
                c.coeffs[idx(n, j)] = ca[j] * (sign * inv);
            }
        }
        (s, c)
    }

    fn sqrt_jet(&self) -> Result<Jet> {
        let r0 = scalar::complex_call(Func::Sqrt, self.value())?;
        let mut r = self.like(r0);
        let inv = (r0 * 2.0).inv();
        for n in 1..=self.order {
            let mut acc: Vec<C> = self.part(n).to_vec();
            for k in 1..n {
                let rk = r.part(k).to_vec();
                conv_sub(&mut acc, &rk, r.part(n - k));
            }
            for (j, a) in acc.into_iter().enumerate() {
                r.coeffs[idx(n, j)] = a * inv;
            }
        }
        Ok(r)
    }

    /// Applies a unary function, checking the base value against its cuts.
    pub fn call(&self, f: Func) -> Result<Jet> {
        let u0 = self.value();
        let f0 = scalar::complex_call(f, u0)?;
        let one = self.like(ONE);
        let out = match f {
            Func::Exp => self.exp_jet(f0),
            Func::Sin => self.trig_pair(f0, u0.cos(), -1.0).0,
            Func::Cos => self.trig_pair(u0.sin(), f0, -1.0).1,
            Func::Sinh => self.trig_pair(f0, u0.cosh(), 1.0).0,
            Func::Cosh => self.trig_pair(u0.sinh(), f0, 1.0).1,
            Func::Tan => {
                let (s, c) = self.trig_pair(u0.sin(), u0.cos(), -1.0);
                s.div(&c)?
            }
            Func::Tanh => {
                let (s, c) = self.trig_pair(u0.sinh(), u0.cosh(), 1.0);
                s.div(&c)?
            }
            Func::Log => self.from_derivative(f0, &self.recip()?),
            Func::Sqrt => self.sqrt_jet()?,
            Func::Arcsin => {
                let g = one.sub(&self.square()).sqrt_jet()?.recip()?;
                self.from_derivative(f0, &g)
            }
            Func::Arccos => {
                let g = one.sub(&self.square()).sqrt_jet()?.recip()?.neg();
                self.from_derivative(f0, &g)
            }
            Func::Arctan => {
                let g = one.add(&self.square()).recip()?;
                self.from_derivative(f0, &g)
            }
            Func::Arcsinh => {
                let g = one.add(&self.square()).sqrt_jet()?.recip()?;
                self.from_derivative(f0, &g)
            }
            Func::Arccosh => {
                let a = self.add_const(-ONE).sqrt_jet()?;
                let b = self.add_const(ONE).sqrt_jet()?;
                let g = a.mul(&b).recip()?;
                self.from_derivative(f0, &g)
            }
            Func::Arctanh => {
                let g = one.sub(&self.square()).recip()?;
                self.from_derivative(f0, &g)
            }
        };
        if !out.is_finite() {
            return Err(Error::domain(f.name(), "non-finite jet coefficient"));
        }
        Ok(out)
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.call(Func::Sqrt)
    }

    /// Derivative in the first slot; the order drops by one.
    pub fn d_dx(&self) -> Jet {
        self.derive(Slot::V0)
    }

    /// Derivative in the second slot; the order drops by one.
    pub fn d_dy(&self) -> Jet {
        self.derive(Slot::V1)
    }

    fn derive(&self, slot: Slot) -> Jet {
        let order = self.order.saturating_sub(1);
        let mut out = Jet::constant(self.base, order, ZERO);
        if self.order == 0 {
            return out;
        }
        for n in 0..=order {
            for j in 0..=n {
                let k = n - j;
                let v = match slot {
                    Slot::V0 => self.coeff(j + 1, k) * (j + 1) as f64,
                    Slot::V1 => self.coeff(j, k + 1) * (k + 1) as f64,
                };
                out.coeffs[idx(n, j)] = v;
            }
        }
        out
    }

    /// Substitutes jets for both variables of the polynomial this jet
    /// represents (in offsets from its base).
    pub fn compose(&self, args: &[Jet; 2]) -> Jet {
        let order = args[0].order.min(args[1].order);
        let outer_base = args[0].base;
        let d0 = args[0].truncate(order).add_const(-args[0].value());
        let d1 = args[1].truncate(order).add_const(-args[1].value());
        let unit = Jet::constant(outer_base, order, ONE);
        let top = self.order.min(order);
        let mut p0 = vec![unit.clone()];
        let mut p1 = vec![unit.clone()];
        for m in 1..=top {
            p0.push(p0[m - 1].mul(&d0));
            p1.push(p1[m - 1].mul(&d1));
        }
        let mut out = Jet::constant(outer_base, order, ZERO);
        for n in 0..=top {
            for j in 0..=n {
                let a = self.coeff(j, n - j);
                if a == ZERO {
                    continue;
                }
                let term = p0[j].mul(&p1[n - j]).scale(a);
                out = out.add(&term);
            }
        }
        out
    }

    /// Evaluates an expression with jets substituted for its variables.
    pub fn eval_expr(e: &Expr, args: &[Jet; 2]) -> Result<Jet> {
        match e.node() {
            Node::Var(s) => Ok(args[s.index()].clone()),
            Node::Const(c) => Ok(args[0].like(C::new(*c, 0.0))),
            Node::Neg(a) => Ok(Jet::eval_expr(a, args)?.neg()),
            Node::Binary(op, a, b) => {
                let a = Jet::eval_expr(a, args)?;
                let b = Jet::eval_expr(b, args)?;
                match op {
                    BinOp::Add => Ok(a.add(&b)),
                    BinOp::Sub => Ok(a.sub(&b)),
                    BinOp::Mul => Ok(a.mul(&b)),
                    BinOp::Div => a.div(&b),
                }
            }
            Node::Pow(b, n) => Jet::eval_expr(b, args)?.powi(*n),
            Node::Call(f, a) => Jet::eval_expr(a, args)?.call(*f),
        }
    }
}

/// `out += a * b` for homogeneous parts.
fn conv_acc(out: &mut [C], a: &[C], b: &[C]) {
    for (i, x) in a.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
}

/// `out -= a * b` for homogeneous parts.
fn conv_sub(out: &mut [C], a: &[C], b: &[C]) {
    for (i, x) in a.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Jet of `e` at a real base point, exact through `order`.
pub fn jet_at(e: &Expr, base: [f64; 2], order: usize) -> Result<Jet> {
    if order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "jet order {order} exceeds {MAX_ORDER}"
        )));
    }
    Jet::eval_expr(e, &Jet::identity(base, order))
}

/// Value with first and second partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Partials {
    pub v: f64,
    pub fx: f64,
    pub fy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
}

impl Partials {
    /// Real parts of the first and second partials stored in a jet.
    pub fn from_jet(j: &Jet) -> Partials {
        Partials {
            v: j.partial(0, 0).re,
            fx: j.partial(1, 0).re,
            fy: j.partial(0, 1).re,
            fxx: j.partial(2, 0).re,
            fxy: j.partial(1, 1).re,
            fyy: j.partial(0, 2).re,
        }
    }

    pub fn second_norm(&self) -> f64 {
        self.fxx.abs().max(self.fxy.abs()).max(self.fyy.abs())
    }
}

pub fn partials2(e: &Expr, p: [f64; 2]) -> Result<Partials> {
    Ok(Partials::from_jet(&jet_at(e, p, 2)?))
}
