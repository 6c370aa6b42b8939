//! Element expressions: parsing into an AST, evaluation in a truncated
//! algebra, and a canonical printer for reduced elements.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' unary) | ('/' integer))*
//! unary   := '-' unary | atom
//! atom    := number ('/' number)? | name | '[' sum ',' sum ']'
//!          | ('exp' | 'log' | 'inverse') '(' sum ')' | '(' sum ')'
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::algebra::{AlgebraElement, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Gen(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, BigInt),
    Bracket(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Inverse(Box<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&mut self, msg: impl Into<String>) -> Error {
        self.skip_ws();
        Error::parse(self.pos, msg)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(Error::parse(start, "expected an integer"));
        }
        self.pos += digits;
        self.src[start..self.pos].parse().map_err(|_| Error::parse(start, "bad integer"))
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some('/') {
                self.pos += 1;
                let at = self.pos;
                let q = self.integer()?;
                if q == BigInt::from(0) {
                    return Err(Error::parse(at, "division by zero"));
                }
                lhs = Expr::Div(Box::new(lhs), q);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let p = self.integer()?;
                let save = self.pos;
                if self.eat('/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let at = self.pos;
                    let q = self.integer()?;
                    if q == BigInt::from(0) {
                        return Err(Error::parse(at, "zero denominator"));
                    }
                    return Ok(Expr::Num(Rational::from_big(p, q)?));
                }
                self.pos = save;
                Ok(Expr::Num(Rational::from_big(p, BigInt::from(1))?))
            }
            Some('[') => {
                self.pos += 1;
                let a = self.sum()?;
                self.expect(',')?;
                let b = self.sum()?;
                self.expect(']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some('(') => {
                self.pos += 1;
                let a = self.sum()?;
                self.expect(')')?;
                Ok(a)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let len = self.src[start..].bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
                self.pos += len;
                let name = &self.src[start..self.pos];
                let func: Option<fn(Box<Expr>) -> Expr> = match name {
                    "exp" => Some(Expr::Exp),
                    "log" => Some(Expr::Log),
                    "inverse" => Some(Expr::Inverse),
                    _ => None,
                };
                match func {
                    Some(f) if self.peek() == Some('(') => {
                        self.pos += 1;
                        let a = self.sum()?;
                        self.expect(')')?;
                        Ok(f(Box::new(a)))
                    }
                    Some(_) => Err(self.error(format!("{name} needs an argument in parentheses"))),
                    None => Ok(Expr::Gen(name.to_string())),
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src, pos: 0 };
        let e = p.sum()?;
        if p.peek().is_some() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, alg: &TruncatedAlgebra) -> Result<AlgebraElement> {
        Ok(match self {
            Expr::Num(c) => alg.scalar(c.clone()),
            Expr::Gen(name) => alg.generator(name)?,
            Expr::Neg(a) => a.eval(alg)?.neg(),
            Expr::Add(a, b) => a.eval(alg)?.add(&b.eval(alg)?),
            Expr::Sub(a, b) => a.eval(alg)?.sub(&b.eval(alg)?),
            Expr::Mul(a, b) => alg.mul(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Div(a, q) => a.eval(alg)?.scale(&Rational::from_big(BigInt::from(1), q.clone())?),
            Expr::Bracket(a, b) => alg.commutator(&a.eval(alg)?, &b.eval(alg)?),
            Expr::Exp(a) => alg.exp(&a.eval(alg)?)?,
            Expr::Log(a) => alg.log(&a.eval(alg)?)?,
            Expr::Inverse(a) => alg.inverse(&a.eval(alg)?)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) | Expr::Div(..) => 1,
            Expr::Neg(..) => 2,
            Expr::Num(c) if !c.is_integer() => 1,
            _ => 3,
        }
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "(")?;
        write!(f, "{e}")?;
        write!(f, ")")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) if c.is_negative() => write!(f, "-{}", c.abs()),
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Gen(s) => write!(f, "{s}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, 2)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_at(f, a, 0)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                write_at(f, b, 1)
            }
            Expr::Mul(a, b) => {
                write_at(f, a, 1)?;
                write!(f, "*")?;
                write_at(f, b, 2)
            }
            Expr::Div(a, q) => {
                // a trailing number in the numerator would merge with the divisor
                match **a {
                    Expr::Gen(_)
                    | Expr::Bracket(..)
                    | Expr::Exp(_)
                    | Expr::Log(_)
                    | Expr::Inverse(_)
                    | Expr::Div(..) => write!(f, "{a}")?,
                    _ => write!(f, "({a})")?,
                }
                write!(f, "/{q}")
            }
            Expr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Inverse(a) => write!(f, "inverse({a})"),
        }
    }
}

/// Parses and evaluates `src` in `alg`.
pub fn parse(src: &str, alg: &TruncatedAlgebra) -> Result<AlgebraElement> {
    Expr::parse(src)?.eval(alg)
}

/// Canonical text of a reduced element: terms by degree then word, each as
/// `c*w1*w2` with unit coefficients omitted; `0` for zero.
pub fn print(alg: &TruncatedAlgebra, e: &AlgebraElement) -> String {
    let mut out = String::new();
    for (_, w, c) in e.iter() {
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let names: Vec<&str> = w.iter().map(|&g| alg.alphabet().name(g)).collect();
        if names.is_empty() {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&a.to_string());
                out.push('*');
            }
            out.push_str(&names.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntersectionForm;
    use proptest::prelude::*;

    fn t12() -> TruncatedAlgebra {
        TruncatedAlgebra::t1n_with_form(2, 4, IntersectionForm::CENTRAL).unwrap()
    }

    #[test]
    fn precedence() {
        let e = Expr::parse("-x1*y1 + 2*t12/3").unwrap();
        let want = Expr::Add(
            Box::new(Expr::Mul(
                Box::new(Expr::Neg(Box::new(Expr::Gen("x1".into())))),
                Box::new(Expr::Gen("y1".into())),
            )),
            Box::new(Expr::Div(
                Box::new(Expr::Mul(Box::new(Expr::Num(Rational::from_int(2))), Box::new(Expr::Gen("t12".into())))),
                BigInt::from(3),
            )),
        );
        assert_eq!(e, want);
        assert_eq!(Expr::parse("1/2").unwrap(), Expr::Num(Rational::new(1, 2)));
        assert_eq!(Expr::parse("a - b - c").unwrap(), Expr::parse("(a - b) - c").unwrap());
    }

    #[test]
    fn relation_reduces_to_zero() {
        let alg = t12();
        assert!(parse("[y1,x1] - t12", &alg).unwrap().is_zero());
        assert_eq!(parse("t21", &alg).unwrap(), parse("t12", &alg).unwrap());
        let g = parse("exp(t12/2)", &alg).unwrap();
        assert_eq!(alg.log(&g).unwrap(), parse("t12/2", &alg).unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let err = |s: &str| match Expr::parse(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("x1 + "), 5);
        assert_eq!(err("[x1 y1]"), 4);
        assert_eq!(err("x1 / y1"), 5);
        assert_eq!(err("exp x1"), 4);
        assert_eq!(err("x1 )"), 3);
        assert!(matches!(parse("z9", &t12()), Err(Error::InvalidArgument(_))));
        assert!(parse("exp(1 + x1)", &t12()).is_err());
    }

    #[test]
    fn ast_printer_round_trips() {
        for s in [
            "-x1*y1 + 2*t12/3",
            "-(a + b)*c",
            "(1/2)/3",
            "[x1, -y1] - exp(t12)*inverse(1 + x1)",
            "a - (b - c)",
            "-1/2*x1",
            "(-1)/2",
            "x*2/3",
            "(x*2)/3",
            "x/2/3",
            "x*(1/2)",
        ] {
            let e = Expr::parse(s).unwrap();
            assert_eq!(Expr::parse(&e.to_string()).unwrap(), e, "{s}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn element_printer_round_trips(
            terms in proptest::collection::vec((proptest::collection::vec(0u8..5, 0..4), -5i64..6, 1i64..4), 0..6),
        ) {
            let alg = t12();
            let e = alg.from_terms(terms.into_iter().map(|(w, p, q)| (w, Rational::new(p, q))));
            let text = print(&alg, &e);
            prop_assert_eq!(parse(&text, &alg).unwrap(), e);
        }
    }
}
