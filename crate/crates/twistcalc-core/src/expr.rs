//! Expression grammar shared by the CLI and the family catalog.
//!
//! Grammar (precedence `^` > unary `-` > `*`,`/` > `+`,`-`):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' ('-'? integer))?
//! atom   := integer | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers name scalars (`i`, `nu`, `q`, `a`, `b`, `c`, `sqa`, `sqb`),
//! calculus generators (`x1..xn`, `xi1..xin`, `d1..dn`, or `y`/`eta`/`dt` in
//! adapted charts), symmetry generators (`L12`, `H`, `E`, ...) and the family
//! shorthands `fc`/`dfc`.  `star`/`comm` are explicit function forms to avoid
//! ambiguity with the undeformed product `*`; `d(h)` is the exterior
//! derivative, `act(G, e)` the Hopf action, `inv(e)`/`tinv(e)` the classical
//! and twisted involutions.  Operator-valued expressions (coproduct legs,
//! antipode candidates) additionally use `tensor(...)`, `geo(G)` for
//! `(1 + i nu G)^-1` and `qexp(G)`/`qexpm(G)` for the diagonal phases
//! `e^{+/- i nu G}`.

use crate::algebra::{AlgebraElement, VarStyle};
use crate::error::{CoreError, Result};
use crate::scalar::{rat, GaussianRational, Rational, Scalar};
use crate::symmetry::LieAlgebraBasis;
use crate::twist::{OpExpr, TwistContext};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use std::collections::BTreeMap;

/// Abstract syntax for the grammar above.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Num(Rational),
    Atom(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(String, Vec<Expr>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let col = pos + 1;
        let ch = chars[pos];
        match ch {
            ' ' | '\t' => pos += 1,
            '+' => {
                out.push((Tok::Plus, col));
                pos += 1;
            }
            '-' => {
                out.push((Tok::Minus, col));
                pos += 1;
            }
            '*' => {
                out.push((Tok::Star, col));
                pos += 1;
            }
            '/' => {
                out.push((Tok::Slash, col));
                pos += 1;
            }
            '^' => {
                out.push((Tok::Caret, col));
                pos += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                pos += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                pos += 1;
            }
            ',' => {
                out.push((Tok::Comma, col));
                pos += 1;
            }
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let text: String = chars[start..pos].iter().collect();
                out.push((Tok::Num(text.parse().expect("digits")), start + 1));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                out.push((Tok::Ident(chars[start..pos].iter().collect()), start + 1));
            }
            other => {
                return Err(CoreError::Parse {
                    col,
                    msg: format!("unexpected character `{}`", other),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(CoreError::Parse { col: self.col(), msg: format!("expected {}", what) })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let mut sign = 1i64;
            if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                sign = -1;
            }
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let exp = n.to_i64().ok_or_else(|| CoreError::Parse {
                        col: self.col(),
                        msg: "exponent too large".into(),
                    })?;
                    Ok(Expr::Pow(Box::new(base), sign * exp))
                }
                _ => Err(CoreError::Parse {
                    col: self.col(),
                    msg: "expected integer exponent after `^`".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Num(Rational::from_integer(n))),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Atom(name))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(tok) => Err(CoreError::Parse {
                col,
                msg: format!("unexpected token `{:?}`", tok),
            }),
            None => Err(CoreError::Parse { col, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parse a source string to an AST.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let end_col = src.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end_col };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(CoreError::Parse {
            col: p.col(),
            msg: "trailing input after expression".into(),
        });
    }
    Ok(e)
}

/// Print an AST back to the grammar (minimal parentheses).  `parse(print(e))`
/// re-reads to the same AST.
pub fn print(e: &Expr) -> String {
    // precedence levels: 0 add, 1 mul, 2 unary, 3 pow, 4 atom
    fn go(e: &Expr, parent: u8) -> String {
        let (s, level) = match e {
            Expr::Num(r) => {
                if r.denom().is_one() && !r.is_negative() {
                    (format!("{}", r), 4)
                } else if r.is_negative() {
                    (format!("-{}", go(&Expr::Num(-r.clone()), 2)), 2)
                } else {
                    (format!("{}/{}", r.numer(), r.denom()), 1)
                }
            }
            Expr::Atom(name) => (name.clone(), 4),
            Expr::Neg(inner) => (format!("-{}", go(inner, 2)), 2),
            Expr::Add(a, b) => (format!("{} + {}", go(a, 0), go(b, 1)), 0),
            Expr::Sub(a, b) => (format!("{} - {}", go(a, 0), go(b, 1)), 0),
            Expr::Mul(a, b) => (format!("{}*{}", go(a, 1), go(b, 2)), 1),
            Expr::Div(a, b) => (format!("{}/{}", go(a, 1), go(b, 2)), 1),
            Expr::Pow(base, exp) => (format!("{}^{}", go(base, 4), exp), 3),
            Expr::Call(name, args) => {
                let inner: Vec<String> = args.iter().map(|a| go(a, 0)).collect();
                (format!("{}({})", name, inner.join(",")), 4)
            }
        };
        if level < parent {
            format!("({})", s)
        } else {
            s
        }
    }
    go(e, 0)
}

/// Everything an expression may refer to during element evaluation.
pub struct EvalEnv<'a> {
    pub dim: usize,
    pub style: VarStyle,
    /// Scalar-valued atoms (`a`, `b`, `c`, `sqa`, `sqb` bindings).
    pub scalars: BTreeMap<String, Scalar>,
    /// Element-valued atoms (`fc`, `dfc`, symmetry generators as operators).
    pub elements: BTreeMap<String, AlgebraElement>,
    pub basis: Option<&'a LieAlgebraBasis>,
    pub twist: Option<&'a TwistContext<'a>>,
}

impl<'a> EvalEnv<'a> {
    pub fn new(dim: usize, style: VarStyle) -> Self {
        EvalEnv {
            dim,
            style,
            scalars: BTreeMap::new(),
            elements: BTreeMap::new(),
            basis: None,
            twist: None,
        }
    }

    fn twist(&self) -> Result<&TwistContext<'a>> {
        self.twist.ok_or_else(|| {
            CoreError::Unsupported("star/comm/tinv need a bound twist".into())
        })
    }

    /// Resolve a generator-shaped identifier (`x2`, `eta1`, `dt3`) against the
    /// variable style, returning its calculus element.
    fn coordinate_atom(&self, name: &str) -> Option<AlgebraElement> {
        let (xn, xin, dn) = self.style.names();
        let parse_index = |rest: &str| -> Option<usize> {
            let k: usize = rest.parse().ok()?;
            (1..=self.dim).contains(&k).then(|| k - 1)
        };
        if let Some(rest) = name.strip_prefix(xin) {
            if let Some(i) = parse_index(rest) {
                return Some(AlgebraElement::xi(self.dim, i));
            }
        }
        if let Some(rest) = name.strip_prefix(dn) {
            if let Some(i) = parse_index(rest) {
                return Some(AlgebraElement::del(self.dim, i));
            }
        }
        if let Some(rest) = name.strip_prefix(xn) {
            if let Some(i) = parse_index(rest) {
                return Some(AlgebraElement::x(self.dim, i));
            }
        }
        None
    }

    fn atom_element(&self, name: &str) -> Result<AlgebraElement> {
        let n = self.dim;
        match name {
            "i" => return Ok(AlgebraElement::scalar(n, Scalar::i())),
            "nu" => return Ok(AlgebraElement::scalar(n, Scalar::nu())),
            "q" => return Ok(AlgebraElement::scalar(n, Scalar::q_pow(1))),
            _ => {}
        }
        if let Some(s) = self.scalars.get(name) {
            return Ok(AlgebraElement::scalar(n, s.clone()));
        }
        match name {
            "b" => return Ok(AlgebraElement::scalar(n, Scalar::param_b())),
            "c" => return Ok(AlgebraElement::scalar(n, Scalar::param_c())),
            _ => {}
        }
        if let Some(e) = self.elements.get(name) {
            return Ok(e.clone());
        }
        if let Some(e) = self.coordinate_atom(name) {
            return Ok(e);
        }
        if let Some(basis) = self.basis {
            if basis.contains(name) {
                return Ok(basis.get(name)?.as_element());
            }
        }
        Err(CoreError::UnknownGenerator(name.into()))
    }

    /// Evaluate an AST to a calculus element.
    pub fn eval(&self, e: &Expr) -> Result<AlgebraElement> {
        let n = self.dim;
        match e {
            Expr::Num(r) => Ok(AlgebraElement::scalar(n, Scalar::from_rational(r.clone()))),
            Expr::Atom(name) => self.atom_element(name),
            Expr::Neg(inner) => Ok(self.eval(inner)?.neg()),
            Expr::Add(a, b) => Ok(self.eval(a)?.add(&self.eval(b)?)),
            Expr::Sub(a, b) => Ok(self.eval(a)?.sub(&self.eval(b)?)),
            Expr::Mul(a, b) => self.eval(a)?.normal_mul(&self.eval(b)?),
            Expr::Div(a, b) => {
                let denom = self.eval(b)?;
                let scalar = as_invertible_scalar(&denom).ok_or_else(|| {
                    CoreError::Unsupported(
                        "division is only defined by invertible scalars".into(),
                    )
                })?;
                Ok(self.eval(a)?.scale(&scalar))
            }
            Expr::Pow(base, exp) => {
                let b = self.eval(base)?;
                if *exp >= 0 {
                    b.pow(*exp as u32)
                } else {
                    let inv = as_invertible_scalar(&b).ok_or_else(|| {
                        CoreError::Unsupported(
                            "negative powers are only defined for invertible scalars".into(),
                        )
                    })?;
                    let mut out = AlgebraElement::one(self.dim);
                    for _ in 0..exp.unsigned_abs() {
                        out = out.scale(&inv);
                    }
                    Ok(out)
                }
            }
            Expr::Call(name, args) => self.eval_call(name, args),
        }
    }

    fn eval_call(&self, name: &str, args: &[Expr]) -> Result<AlgebraElement> {
        let arity = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(CoreError::Unsupported(format!(
                    "`{}` takes {} argument(s), got {}",
                    name,
                    k,
                    args.len()
                )))
            }
        };
        match name {
            "star" => {
                arity(2)?;
                self.twist()?.star(&self.eval(&args[0])?, &self.eval(&args[1])?)
            }
            "comm" => {
                arity(2)?;
                self.twist()?
                    .braided_commutator(&self.eval(&args[0])?, &self.eval(&args[1])?)
            }
            "d" => {
                arity(1)?;
                self.eval(&args[0])?.exterior_derivative()
            }
            "act" => {
                arity(2)?;
                let gen_name = match &args[0] {
                    Expr::Atom(g) => g.clone(),
                    _ => {
                        return Err(CoreError::Unsupported(
                            "first argument of act() must be a generator name".into(),
                        ))
                    }
                };
                let basis = self.basis.ok_or_else(|| {
                    CoreError::Unsupported("act() needs a symmetry basis".into())
                })?;
                Ok(basis.get(&gen_name)?.act(&self.eval(&args[1])?))
            }
            "inv" => {
                arity(1)?;
                Ok(self.eval(&args[0])?.star_involution_classical())
            }
            "tinv" => {
                arity(1)?;
                self.twist()?.twisted_involution(&self.eval(&args[0])?)
            }
            other => Err(CoreError::Unsupported(format!(
                "unknown function `{}` in element context",
                other
            ))),
        }
    }

    /// Evaluate an AST as an envelope operator (antipode candidates, coproduct
    /// legs).  Products become operator composition.
    pub fn eval_operator(&self, e: &Expr) -> Result<OpExpr> {
        match e {
            Expr::Num(r) => Ok(OpExpr::Scalar(Scalar::from_rational(r.clone()))),
            Expr::Atom(name) => match name.as_str() {
                "i" => Ok(OpExpr::Scalar(Scalar::i())),
                "nu" => Ok(OpExpr::Scalar(Scalar::nu())),
                _ => {
                    if let Some(s) = self.scalars.get(name) {
                        Ok(OpExpr::Scalar(s.clone()))
                    } else if self.basis.map(|b| b.contains(name)) == Some(true) {
                        Ok(OpExpr::Gen(name.clone()))
                    } else {
                        Err(CoreError::UnknownGenerator(name.clone()))
                    }
                }
            },
            Expr::Neg(inner) => Ok(OpExpr::Prod(vec![
                OpExpr::Scalar(Scalar::from_int(-1)),
                self.eval_operator(inner)?,
            ])),
            Expr::Add(a, b) => Ok(OpExpr::Sum(vec![
                self.eval_operator(a)?,
                self.eval_operator(b)?,
            ])),
            Expr::Sub(a, b) => Ok(OpExpr::Sum(vec![
                self.eval_operator(a)?,
                OpExpr::Prod(vec![
                    OpExpr::Scalar(Scalar::from_int(-1)),
                    self.eval_operator(b)?,
                ]),
            ])),
            Expr::Mul(a, b) => Ok(OpExpr::Prod(vec![
                self.eval_operator(a)?,
                self.eval_operator(b)?,
            ])),
            Expr::Div(a, b) => {
                let denom = self.eval(b)?;
                let scalar = as_invertible_scalar(&denom).ok_or_else(|| {
                    CoreError::Unsupported(
                        "operator division is only defined by invertible scalars; \
                         generator inverses are expressed via geo(...)"
                            .into(),
                    )
                })?;
                Ok(OpExpr::Prod(vec![
                    OpExpr::Scalar(scalar),
                    self.eval_operator(a)?,
                ]))
            }
            Expr::Pow(base, exp) => {
                if *exp < 0 {
                    return Err(CoreError::Unsupported(
                        "negative operator powers are expressed via geo/qexpm".into(),
                    ));
                }
                let inner = self.eval_operator(base)?;
                Ok(OpExpr::Prod(vec![inner; *exp as usize]))
            }
            Expr::Call(name, args) => {
                let gen_arg = || -> Result<String> {
                    match args.as_slice() {
                        [Expr::Atom(g)] => Ok(g.clone()),
                        _ => Err(CoreError::Unsupported(format!(
                            "`{}` takes one generator name",
                            name
                        ))),
                    }
                };
                match name.as_str() {
                    "geo" => Ok(OpExpr::GeoInverse(gen_arg()?)),
                    "qexp" => Ok(OpExpr::PhaseExp(gen_arg()?, 1)),
                    "qexpm" => Ok(OpExpr::PhaseExp(gen_arg()?, -1)),
                    other => Err(CoreError::Unsupported(format!(
                        "unknown function `{}` in operator context",
                        other
                    ))),
                }
            }
        }
    }
}

/// A pure scalar element whose scalar is invertible (single term with unit
/// content is not required — any nonzero `GaussianRational` times a monomial
/// key inverts; general multi-term scalars do not).
fn as_invertible_scalar(e: &AlgebraElement) -> Option<Scalar> {
    let mut found: Option<Scalar> = None;
    for (w, s) in e.terms() {
        if w.total_degree() != 0 || found.is_some() {
            return None;
        }
        let (key, coeff) = s.single_term()?;
        if key.nu != 0 || key.b != 0 || key.c != 0 {
            return None; // nu, b, c are not invertible in the ring
        }
        found = Some(Scalar::monomial(
            crate::scalar::ScalarKey { q: -key.q, ..crate::scalar::ScalarKey::ONE },
            coeff.inv(),
        ));
    }
    found
}

/// Convenience: `p/q` rationals appearing in catalog texts.
pub fn rational_atom(num: i64, den: i64) -> Expr {
    Expr::Div(
        Box::new(Expr::Num(Rational::from_integer(BigInt::from(num)))),
        Box::new(Expr::Num(Rational::from_integer(BigInt::from(den)))),
    )
}

/// Parse a standalone rational such as `-3/2` or `1` (parameter bindings).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || CoreError::BadParamBinding(text.into());
    let mut parts = text.splitn(2, '/');
    let numer = parts.next().ok_or_else(bad)?.trim();
    let numer: i64 = numer.parse().map_err(|_| bad())?;
    match parts.next() {
        Some(d) => {
            let denom: i64 = d.trim().parse().map_err(|_| bad())?;
            if denom == 0 {
                return Err(bad());
            }
            Ok(rat(numer, denom))
        }
        None => Ok(rat(numer, 1)),
    }
}

/// Rational square root when the value is a perfect square (used to bind the
/// quadratic parameters, which enter generators through their square roots).
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

#[allow(dead_code)]
fn unused(_: &GaussianRational) {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_function_forms() {
        let e = parse("star(x1, x2)").unwrap();
        assert_eq!(
            e,
            Expr::Call("star".into(), vec![Expr::Atom("x1".into()), Expr::Atom("x2".into())])
        );
    }

    #[test]
    fn reports_error_column() {
        let err = parse("star(x1,").unwrap_err();
        match err {
            CoreError::Parse { col, .. } => assert_eq!(col, 9),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse("x1 + + x2").unwrap_err();
        match err {
            CoreError::Parse { col, .. } => assert_eq!(col, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn precedence_and_round_trip() {
        let e = parse("x1*x2 - i*nu*b^2").unwrap();
        assert_eq!(parse(&print(&e)).unwrap(), e);
        let e2 = parse("-(x1 + x2)^2*d3").unwrap();
        assert_eq!(parse(&print(&e2)).unwrap(), e2);
        // ^ binds tighter than *
        assert_eq!(
            parse("2*b^2").unwrap(),
            Expr::Mul(
                Box::new(Expr::Num(Rational::from_integer(2.into()))),
                Box::new(Expr::Pow(Box::new(Expr::Atom("b".into())), 2))
            )
        );
    }

    #[test]
    fn evaluates_elements() {
        let env = EvalEnv::new(3, VarStyle::X);
        let e = env.eval(&parse("1/2*x1^2 - b*x3 - c").unwrap()).unwrap();
        let n = 3;
        let expected = AlgebraElement::x(n, 0)
            .pow(2)
            .unwrap()
            .scale(&Scalar::from_ratio(1, 2))
            .sub(&AlgebraElement::x(n, 2).scale(&Scalar::param_b()))
            .sub(&AlgebraElement::scalar(n, Scalar::param_c()));
        assert_eq!(e, expected);
        // default scalar atoms: b, c stay symbolic
        assert!(env.eval(&parse("q^-1").unwrap()).is_err() == false);
    }

    #[test]
    fn evaluates_y_style() {
        let env = EvalEnv::new(3, VarStyle::Y);
        let e = env.eval(&parse("eta2*y1*dt3").unwrap()).unwrap();
        assert_eq!(e.render(VarStyle::Y), "eta2*y1*dt3");
        assert!(env.eval(&parse("x1").unwrap()).is_err());
    }

    #[test]
    fn division_by_scalars_only() {
        let env = EvalEnv::new(3, VarStyle::X);
        assert!(env.eval(&parse("x1/2").unwrap()).is_ok());
        assert!(env.eval(&parse("x1/x2").unwrap()).is_err());
        assert!(env.eval(&parse("x1/nu").unwrap()).is_err());
    }
}
