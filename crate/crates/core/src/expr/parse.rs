//! Recursive-descent parser for the surface DSL.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' integer)?
//! base   := number | var | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`.

use super::{BinOp, Expr, Func, Slot, VarNames, MAX_POW};
use crate::error::{Error, Result};

/// Parses with the default slot spelling `x`, `y`.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with_names(text, VarNames::XY)
}

/// Parses with a caller-chosen spelling of the two slots.
pub fn parse_with_names(text: &str, names: VarNames) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: VarNames,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let at = self.pos;
            let n = self.integer()?;
            return Expr::pow(base, n).map_err(|_| Error::Syntax {
                offset: at,
                message: format!("exponent must satisfy |n| <= {MAX_POW}"),
            });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        let paren = self.eat(b'(');
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        let digits_at = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_at {
            return Err(self.error("expected integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[digits_at..self.pos]).unwrap_or("");
        let magnitude: i64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        if paren && !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        let n = if neg { -magnitude } else { magnitude };
        i32::try_from(n).map_err(|_| Error::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.error("expected operand")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let value: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        Expr::constant(value).map_err(|_| Error::Syntax {
            offset: start,
            message: format!("number `{text}` is not finite"),
        })
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if name == self.names.0 {
            return Ok(Expr::var(Slot::V0));
        }
        if name == self.names.1 {
            return Ok(Expr::var(Slot::V1));
        }
        let Some(f) = Func::from_name(name) else {
            return Err(Error::UnknownFunction {
                name: name.to_string(),
                offset: start,
            });
        };
        if !self.eat(b'(') {
            return Err(self.error("expected '(' after function name"));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        Ok(Expr::call(f, arg))
    }
}

#[cfg(test)]
mod tests {
    use super::super::Node;
    use super::*;

    fn v(slot: Slot) -> Expr {
        Expr::var(slot)
    }

    #[test]
    fn scherk_tree() {
        let e = parse("log(cos(x)/cos(y))").unwrap();
        let want = Expr::call(
            Func::Log,
            Expr::binary(
                BinOp::Div,
                Expr::call(Func::Cos, v(Slot::V0)),
                Expr::call(Func::Cos, v(Slot::V1)),
            ),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn helicoid_tree() {
        let e = parse("x*tan(y)").unwrap();
        let want = Expr::binary(BinOp::Mul, v(Slot::V0), Expr::call(Func::Tan, v(Slot::V1)));
        assert_eq!(e, want);
    }

    #[test]
    fn malformed_offset() {
        let err = parse("x+*y").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                offset: 2,
                message: "expected operand".into()
            }
        );
    }

    #[test]
    fn unknown_function() {
        let err = parse("1 + abs(x)").unwrap_err();
        assert_eq!(
            err,
            Error::UnknownFunction {
                name: "abs".into(),
                offset: 4
            }
        );
        assert!(matches!(parse("z"), Err(Error::UnknownFunction { .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        // 1-2-3 is (1-2)-3
        let e = parse("1-2-3").unwrap();
        assert_eq!(e.eval([0.0, 0.0]).unwrap(), -4.0);
        // power binds tighter than unary minus
        let e = parse("-x^2").unwrap();
        assert!(matches!(e.node(), Node::Neg(_)));
        assert_eq!(e.eval([3.0, 0.0]).unwrap(), -9.0);
        // mul/div before add/sub
        assert_eq!(parse("1+2*3/4").unwrap().eval([0.0, 0.0]).unwrap(), 2.5);
        assert_eq!(parse("2*x^-1").unwrap().eval([4.0, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn exponent_limits() {
        assert!(parse("x^16").is_ok());
        assert!(matches!(
            parse("x^17"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("x^1.5"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn numbers_and_names() {
        assert_eq!(parse("1.5e-3").unwrap().eval([0.0, 0.0]).unwrap(), 1.5e-3);
        assert_eq!(parse(".25").unwrap().eval([0.0, 0.0]).unwrap(), 0.25);
        let e = parse_with_names("t*tanh(x)", VarNames::TX).unwrap();
        assert_eq!(e.eval([2.0, 0.0]).unwrap(), 0.0);
        assert!(parse_with_names("y", VarNames::TX).is_err());
    }

    #[test]
    fn trailing_garbage() {
        assert!(matches!(parse("x y"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("(x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
    }
}
