//! Two-variable real-analytic expressions.
//!
//! An [`Expr`] is an immutable tree over two variable slots. The text form
//! is a small DSL (see [`parse`]); evaluation is available over `f64`,
//! over complex arguments with principal branches, and over truncated
//! Taylor jets (see [`crate::jet`]).

mod parse;
pub(crate) mod scalar;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use parse::{parse, parse_with_names};

/// Largest admissible magnitude of an integer exponent.
pub const MAX_POW: i32 = 16;

/// One of the two variable slots of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Slot {
    V0,
    V1,
}

impl Slot {
    pub fn index(self) -> usize {
        match self {
            Slot::V0 => 0,
            Slot::V1 => 1,
        }
    }

    pub fn from_index(i: usize) -> Slot {
        if i == 0 {
            Slot::V0
        } else {
            Slot::V1
        }
    }

    pub fn other(self) -> Slot {
        match self {
            Slot::V0 => Slot::V1,
            Slot::V1 => Slot::V0,
        }
    }
}

/// Spelling of the two variable slots in the DSL.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarNames(pub &'static str, pub &'static str);

impl VarNames {
    pub const XY: VarNames = VarNames("x", "y");
    pub const TX: VarNames = VarNames("t", "x");

    pub fn name(&self, slot: Slot) -> &'static str {
        match slot {
            Slot::V0 => self.0,
            Slot::V1 => self.1,
        }
    }
}

impl Default for VarNames {
    fn default() -> Self {
        VarNames::XY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Unary analytic functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Arcsin,
    Arccos,
    Arctan,
    Arcsinh,
    Arccosh,
    Arctanh,
}

impl Func {
    pub const ALL: [Func; 15] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Arcsin,
        Func::Arccos,
        Func::Arctan,
        Func::Arcsinh,
        Func::Arccosh,
        Func::Arctanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Arcsin => "arcsin",
            Func::Arccos => "arccos",
            Func::Arctan => "arctan",
            Func::Arcsinh => "arcsinh",
            Func::Arccosh => "arccosh",
            Func::Arctanh => "arctanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Var(Slot),
    Const(f64),
    Neg(Expr),
    Binary(BinOp, Expr, Expr),
    Pow(Expr, i32),
    Call(Func, Expr),
}

/// Immutable, cheaply clonable expression tree.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn var(slot: Slot) -> Expr {
        Expr(Arc::new(Node::Var(slot)))
    }

    pub fn constant(value: f64) -> Result<Expr> {
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "constant {value} is not finite"
            )));
        }
        Ok(Expr(Arc::new(Node::Const(value))))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr(Arc::new(Node::Neg(e)))
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr(Arc::new(Node::Binary(op, a, b)))
    }

    pub fn pow(base: Expr, n: i32) -> Result<Expr> {
        if n.abs() > MAX_POW {
            return Err(Error::InvalidArgument(format!(
                "exponent {n} exceeds |n| <= {MAX_POW}"
            )));
        }
        Ok(Expr(Arc::new(Node::Pow(base, n))))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr(Arc::new(Node::Call(f, arg)))
    }

    /// Real evaluation. Fails on the same cuts and poles as complex evaluation.
    pub fn eval(&self, p: [f64; 2]) -> Result<f64> {
        match self.node() {
            Node::Var(s) => Ok(p[s.index()]),
            Node::Const(c) => Ok(*c),
            Node::Neg(e) => Ok(-e.eval(p)?),
            Node::Binary(op, a, b) => scalar::real_binary(*op, a.eval(p)?, b.eval(p)?),
            Node::Pow(b, n) => scalar::real_powi(b.eval(p)?, *n),
            Node::Call(f, a) => scalar::real_call(*f, a.eval(p)?),
        }
    }

    /// Complex evaluation on principal branches.
    ///
    /// Operands with an exactly zero imaginary part take the real code
    /// path, so real inputs reproduce [`Expr::eval`] bit for bit.
    pub fn eval_complex(&self, p: [Complex64; 2]) -> Result<Complex64> {
        match self.node() {
            Node::Var(s) => Ok(p[s.index()]),
            Node::Const(c) => Ok(Complex64::new(*c, 0.0)),
            Node::Neg(e) => Ok(-e.eval_complex(p)?),
            Node::Binary(op, a, b) => {
                scalar::complex_binary(*op, a.eval_complex(p)?, b.eval_complex(p)?)
            }
            Node::Pow(b, n) => scalar::complex_powi(b.eval_complex(p)?, *n),
            Node::Call(f, a) => scalar::complex_call(*f, a.eval_complex(p)?),
        }
    }

    /// Fully parenthesized text form using the given slot names.
    pub fn print_with(&self, names: VarNames) -> String {
        let mut out = String::new();
        self.write_to(&mut out, names);
        out
    }

    fn write_to(&self, out: &mut String, names: VarNames) {
        use std::fmt::Write;
        match self.node() {
            Node::Var(s) => out.push_str(names.name(*s)),
            Node::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    let _ = write!(out, "(-{:?})", -c);
                } else {
                    let _ = write!(out, "{c:?}");
                }
            }
            Node::Neg(e) => {
                out.push_str("(-");
                e.write_to(out, names);
                out.push(')');
            }
            Node::Binary(op, a, b) => {
                out.push('(');
                a.write_to(out, names);
                out.push(op.symbol());
                b.write_to(out, names);
                out.push(')');
            }
            Node::Pow(b, n) => {
                out.push('(');
                b.write_to(out, names);
                let _ = write!(out, ")^{n}");
            }
            Node::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_to(out, names);
                out.push(')');
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Var(_) | Node::Const(_) => 1,
            Node::Neg(e) | Node::Pow(e, _) | Node::Call(_, e) => 1 + e.size(),
            Node::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print_with(VarNames::XY))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}
