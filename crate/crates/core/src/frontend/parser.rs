//! Expression trees, the definition-file parser and the two evaluators
//! (linear conformal values and vertex-algebra elements).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};
use crate::lie_conformal::{AlgebraPresentation, Atom, ConformalElement, Parity, LAMBDA};
use crate::linear::{BracketPoly, Coefficient, LinComb};
use crate::scalar::{Rational, Scalar};
use crate::vertex_calc::{VertexAlgebra, VertexElement};

pub const RESERVED: [&str; 3] = ["d", "T", LAMBDA];

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `d^k(x)`; `T` is an alias of `d`.
    D(u32, Box<Expr>),
    /// `:x1 x2 ... xk:`, right-nested.
    Normal(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: usize,
    pub column: usize,
}

impl Expr {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn located(&self, inner: Error) -> Error {
        Error::Located {
            line: self.line,
            column: self.column,
            inner: Box::new(inner),
        }
    }

    pub fn is_name(&self) -> bool {
        matches!(self.kind, ExprKind::Name(_))
    }
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> Error {
        let t = self.peek();
        Error::Parse {
            line: t.line,
            column: t.column,
            message: format!("expected {expected}, found {}", t.tok.describe()),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.error_here(expected)),
        }
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here("end of input"))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let t = self.peek().clone();
            let kind = match t.tok {
                Tok::Plus => ExprKind::Add as fn(Box<Expr>, Box<Expr>) -> ExprKind,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = node(kind(Box::new(lhs), Box::new(rhs)), &t);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let t = self.peek().clone();
            let kind = match t.tok {
                Tok::Star => ExprKind::Mul as fn(Box<Expr>, Box<Expr>) -> ExprKind,
                Tok::Slash => ExprKind::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = node(kind(Box::new(lhs), Box::new(rhs)), &t);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Minus => {
                self.bump();
                let inner = self.unary()?;
                Ok(node(ExprKind::Neg(Box::new(inner)), &t))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.bump();
                n.to_u32().ok_or_else(|| Error::Parse {
                    line: t.line,
                    column: t.column,
                    message: "exponent too large".into(),
                })
            }
            _ => Err(self.error_here("a non-negative integer exponent")),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Caret {
            let t = self.bump();
            let k = self.exponent()?;
            return Ok(node(ExprKind::Pow(Box::new(base), k), &t));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                Ok(node(ExprKind::Num(n), &t))
            }
            Tok::Ident(name) if (name == "d" || name == "T") && self.is_derivative() => {
                self.bump();
                let k = if self.eat(&Tok::Caret) {
                    self.exponent()?
                } else {
                    1
                };
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(node(ExprKind::D(k, Box::new(inner)), &t))
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump();
                Ok(node(ExprKind::Name(name), &t))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Open => {
                self.bump();
                let mut items = Vec::new();
                while self.peek().tok != Tok::Close {
                    if matches!(self.peek().tok, Tok::Eof | Tok::RParen | Tok::Semi) {
                        return Err(self.error_here("`:` closing the normal word"));
                    }
                    items.push(self.power()?);
                }
                self.bump();
                if items.is_empty() {
                    return Err(Error::Parse {
                        line: t.line,
                        column: t.column,
                        message: "empty normal word".into(),
                    });
                }
                Ok(node(ExprKind::Normal(items), &t))
            }
            _ => Err(self.error_here("an expression")),
        }
    }

    fn is_derivative(&self) -> bool {
        matches!(self.peek_at(1), Tok::LParen | Tok::Caret)
    }
}

fn node(kind: ExprKind, t: &Token) -> Expr {
    Expr {
        kind,
        line: t.line,
        column: t.column,
    }
}

/// Parse one complete expression.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

// ---- linear evaluation ----

/// A polynomial in lambda whose coefficients are either scalars (`None`)
/// or multiples of one atom.
pub(crate) type Linear = LinComb<(u32, Option<Atom>)>;

fn scalar_of(x: &Linear, e: &Expr) -> Result<Scalar> {
    let mut out = Scalar::zero();
    for ((k, a), c) in x.iter() {
        if *k > 0 || a.is_some() {
            return Err(e.err("expected a scalar"));
        }
        out += c;
    }
    Ok(out)
}

fn constant_of(x: &Linear, e: &Expr) -> Result<Rational> {
    scalar_of(x, e)?
        .as_rational()
        .ok_or_else(|| e.err("expected a numeric constant"))
}

fn linear_mul(x: &Linear, y: &Linear, e: &Expr) -> Result<Linear> {
    let mut out = Linear::new();
    for ((k1, a1), c1) in x.iter() {
        for ((k2, a2), c2) in y.iter() {
            let atom = match (a1, a2) {
                (Some(_), Some(_)) => {
                    return Err(e.err("product of two fields; write a normal product as `:a b:`"))
                }
                (a, None) | (None, a) => *a,
            };
            out.add_term((k1 + k2, atom), c1 * c2);
        }
    }
    Ok(out)
}

/// Evaluate an expression that is linear in the symbols. `names` resolves
/// identifiers.
pub(crate) fn eval_linear(
    e: &Expr,
    alg: &AlgebraPresentation,
    names: &dyn Fn(&str) -> Option<Linear>,
) -> Result<Linear> {
    let rec = |x: &Expr| eval_linear(x, alg, names);
    Ok(match &e.kind {
        ExprKind::Num(n) => {
            Linear::single((0, None), Scalar::from(Rational::from_integer(n.clone())))
        }
        ExprKind::Name(n) => {
            names(n).ok_or_else(|| e.located(Error::UndeclaredSymbol(n.clone())))?
        }
        ExprKind::Neg(x) => rec(x)?.neg(),
        ExprKind::Add(x, y) => {
            let mut out = rec(x)?;
            out.add_assign_ref(&rec(y)?);
            out
        }
        ExprKind::Sub(x, y) => rec(x)?.sub_ref(&rec(y)?),
        ExprKind::Mul(x, y) => linear_mul(&rec(x)?, &rec(y)?, e)?,
        ExprKind::Div(x, y) => {
            let d = constant_of(&rec(y)?, y)?;
            if d.is_zero() {
                return Err(e.err("division by zero"));
            }
            rec(x)?.scale_rat(&(Rational::from_integer(1.into()) / d))
        }
        ExprKind::Pow(x, k) => {
            let base = rec(x)?;
            let mut out = Linear::single((0, None), Scalar::one());
            for _ in 0..*k {
                out = linear_mul(&out, &base, e)?;
            }
            out
        }
        ExprKind::D(k, x) => {
            let mut out = Linear::new();
            for ((lam, a), c) in rec(x)?.iter() {
                if let Some(a) = a {
                    if !alg.is_central(a.sym) {
                        out.add_term((*lam, Some(Atom::new(a.sym, a.d + k))), c.clone());
                    }
                }
            }
            out
        }
        ExprKind::Normal(_) => {
            return Err(e.err("normal words are only allowed in vertex-algebra expressions"))
        }
    })
}

/// Identifiers of bracket right-hand sides: lambda, parameters and symbols.
pub(crate) fn bracket_names(alg: &AlgebraPresentation) -> impl Fn(&str) -> Option<Linear> + '_ {
    move |n: &str| {
        if n == LAMBDA {
            Some(Linear::single((1, None), Scalar::one()))
        } else if alg.params().iter().any(|p| p == n) {
            Some(Linear::single((0, None), Scalar::param(n)))
        } else {
            alg.lookup(n)
                .map(|id| Linear::single((0, Some(Atom::new(id, 0))), Scalar::one()))
        }
    }
}

/// A scalar expression in declared parameters; with `free`, any name is a
/// parameter.
pub(crate) fn eval_scalar(e: &Expr, alg: &AlgebraPresentation, free: bool) -> Result<Scalar> {
    let names = |n: &str| {
        (free || alg.params().iter().any(|p| p == n))
            .then(|| Linear::single((0, None), Scalar::param(n)))
    };
    scalar_of(&eval_linear(e, alg, &names)?, e)
}

/// A lambda-free linear combination of atoms.
pub(crate) fn eval_conformal(e: &Expr, alg: &AlgebraPresentation) -> Result<ConformalElement> {
    let lin = eval_linear(e, alg, &bracket_names(alg))?;
    let mut out = ConformalElement::new();
    for ((k, a), c) in lin.iter() {
        match (k, a) {
            (0, Some(a)) => out.add_term(*a, c.clone()),
            _ => return Err(e.err("expected a linear combination of generators")),
        }
    }
    Ok(out)
}

fn bracket_value(e: &Expr, alg: &AlgebraPresentation) -> Result<BracketPoly<ConformalElement>> {
    let lin = eval_linear(e, alg, &bracket_names(alg))?;
    let mut out = BracketPoly::zero(&[LAMBDA]);
    for ((k, a), c) in lin.iter() {
        let Some(a) = a else {
            return Err(e.err("bracket values must be linear in the generators"));
        };
        out.add_term(vec![*k], ConformalElement::single(*a, c.clone()));
    }
    Ok(out)
}

// ---- vertex evaluation ----

fn vertex_scalar(x: &VertexElement, e: &Expr) -> Result<Scalar> {
    match x.iter().find(|(w, _)| !w.is_empty()) {
        Some(_) => Err(e.err("expected a scalar")),
        None => Ok(x.get(&Vec::new())),
    }
}

/// Evaluate an expression in the enveloping vertex algebra. `extra`
/// resolves names that are not declared symbols or parameters.
pub(crate) fn eval_vertex(
    e: &Expr,
    va: &VertexAlgebra,
    extra: &dyn Fn(&str) -> Option<Result<VertexElement>>,
) -> Result<VertexElement> {
    let alg = va.presentation();
    let rec = |x: &Expr| eval_vertex(x, va, extra);
    Ok(match &e.kind {
        ExprKind::Num(n) => va.scalar(Scalar::from(Rational::from_integer(n.clone()))),
        ExprKind::Name(n) if n == LAMBDA => {
            return Err(e.err("lambda is not an element of the vertex algebra"))
        }
        ExprKind::Name(n) => {
            if alg.params().iter().any(|p| p == n) {
                va.scalar(Scalar::param(n))
            } else if let Some(id) = alg.lookup(n) {
                va.atom(Atom::new(id, 0))
            } else if let Some(v) = extra(n) {
                v.map_err(|err| e.located(err))?
            } else {
                return Err(e.located(Error::UndeclaredSymbol(n.clone())));
            }
        }
        ExprKind::Neg(x) => rec(x)?.neg(),
        ExprKind::Add(x, y) => {
            let mut out = rec(x)?;
            out.add_assign_ref(&rec(y)?);
            out
        }
        ExprKind::Sub(x, y) => rec(x)?.sub_ref(&rec(y)?),
        ExprKind::Mul(x, y) => {
            let (u, v) = (rec(x)?, rec(y)?);
            if let Ok(s) = vertex_scalar(&u, x) {
                v.scale(&s)
            } else if let Ok(s) = vertex_scalar(&v, y) {
                u.scale(&s)
            } else {
                return Err(e.err("product of two fields; write a normal product as `:a b:`"));
            }
        }
        ExprKind::Div(x, y) => {
            let d = vertex_scalar(&rec(y)?, y)?
                .as_rational()
                .ok_or_else(|| y.err("expected a numeric constant"))?;
            if d.is_zero() {
                return Err(e.err("division by zero"));
            }
            rec(x)?.scale_rat(&(Rational::from_integer(1.into()) / d))
        }
        ExprKind::Pow(x, k) => {
            let s = vertex_scalar(&rec(x)?, x)?;
            va.scalar(s.pow(*k))
        }
        ExprKind::D(k, x) => va.translate_n(&rec(x)?, *k)?,
        ExprKind::Normal(items) => {
            let mut out = rec(items.last().expect("nonempty"))?;
            for item in items.iter().rev().skip(1) {
                out = va.normal_product(&rec(item)?, &out)?;
            }
            out
        }
    })
}

// ---- definition files ----

fn check_name(name: &str, t: &Token) -> Result<()> {
    if RESERVED.contains(&name) {
        return Err(Error::Parse {
            line: t.line,
            column: t.column,
            message: format!("`{name}` is reserved"),
        });
    }
    Ok(())
}

fn locate(t: &Token) -> impl FnOnce(Error) -> Error + '_ {
    move |inner| Error::Located {
        line: t.line,
        column: t.column,
        inner: Box::new(inner),
    }
}

/// Parse a `.vac` definition into a presentation.
pub fn parse_definition(src: &str) -> Result<AlgebraPresentation> {
    let mut p = Parser::new(src)?;
    match &p.peek().tok {
        Tok::Ident(k) if k == "algebra" => {
            p.bump();
        }
        _ => return Err(p.error_here("`algebra`")),
    }
    let (name, _) = p.ident("an algebra name")?;
    let mut alg = AlgebraPresentation::new(&name);
    p.expect(Tok::LBrace, "`{`")?;
    loop {
        let t = p.peek().clone();
        let kw = match &t.tok {
            Tok::RBrace => {
                p.bump();
                break;
            }
            Tok::Ident(k) => k.clone(),
            _ => return Err(p.error_here("a statement or `}`")),
        };
        p.bump();
        match kw.as_str() {
            "param" => loop {
                let (n, nt) = p.ident("a parameter name")?;
                check_name(&n, &nt)?;
                alg.add_param(&n).map_err(locate(&nt))?;
                if !p.eat(&Tok::Comma) {
                    break;
                }
            },
            "generator" => {
                let (n, nt) = p.ident("a generator name")?;
                check_name(&n, &nt)?;
                if !(p.eat(&Tok::Open) || p.eat(&Tok::Close)) {
                    return Err(p.error_here("`:`"));
                }
                let parity = match p.ident("`even` or `odd`")? {
                    (s, _) if s == "even" => Parity::Even,
                    (s, _) if s == "odd" => Parity::Odd,
                    (_, pt) => {
                        return Err(Error::Parse {
                            line: pt.line,
                            column: pt.column,
                            message: "expected `even` or `odd`".into(),
                        })
                    }
                };
                let mut weight = None;
                if p.eat(&Tok::Comma) {
                    match p.ident("`weight`")? {
                        (s, _) if s == "weight" => {}
                        (_, wt) => {
                            return Err(Error::Parse {
                                line: wt.line,
                                column: wt.column,
                                message: "expected `weight`".into(),
                            })
                        }
                    }
                    let e = p.expr()?;
                    let w = eval_scalar(&e, &alg, false)?
                        .as_rational()
                        .ok_or_else(|| e.err("weights must be numeric"))?;
                    weight = Some(w);
                }
                alg.add_generator(&n, parity, weight).map_err(locate(&nt))?;
            }
            "central" => {
                let (n, nt) = p.ident("a central name")?;
                check_name(&n, &nt)?;
                let value = if p.eat(&Tok::Equals) {
                    let e = p.expr()?;
                    Some(eval_scalar(&e, &alg, false)?)
                } else {
                    None
                };
                alg.add_central(&n, value).map_err(locate(&nt))?;
            }
            "bracket" => {
                p.expect(Tok::LBracket, "`[`")?;
                let (a, at) = p.ident("a generator name")?;
                p.expect(Tok::Comma, "`,`")?;
                let (b, bt) = p.ident("a generator name")?;
                p.expect(Tok::RBracket, "`]`")?;
                p.expect(Tok::Equals, "`=`")?;
                let ia = alg
                    .lookup(&a)
                    .ok_or_else(|| locate(&at)(Error::UndeclaredSymbol(a.clone())))?;
                let ib = alg
                    .lookup(&b)
                    .ok_or_else(|| locate(&bt)(Error::UndeclaredSymbol(b.clone())))?;
                let e = p.expr()?;
                let value = bracket_value(&e, &alg)?;
                alg.set_bracket(ia, ib, value).map_err(locate(&t))?;
            }
            _ => {
                return Err(Error::Parse {
                    line: t.line,
                    column: t.column,
                    message: format!(
                        "expected `param`, `generator`, `central` or `bracket`, found `{kw}`"
                    ),
                })
            }
        }
        p.expect(Tok::Semi, "`;`")?;
    }
    p.expect_end()?;
    Ok(alg)
}

/// The definition-file form of a presentation.
pub fn render_definition(alg: &AlgebraPresentation) -> String {
    use crate::lie_conformal::SymbolKind;
    let mut out = format!("algebra {} {{\n", alg.name);
    if !alg.params().is_empty() {
        out += &format!("  param {};\n", alg.params().join(", "));
    }
    for sym in alg.symbols() {
        match &sym.kind {
            SymbolKind::Generator => {
                out += &format!("  generator {} : {}", sym.name, sym.parity);
                if let Some(w) = &sym.weight {
                    out += &format!(", weight {w}");
                }
                out += ";\n";
            }
            SymbolKind::Central { value } => {
                out += &format!("  central {}", sym.name);
                if let Some(v) = value {
                    out += &format!(" = {v}");
                }
                out += ";\n";
            }
        }
    }
    for ((a, b), poly) in alg.table() {
        out += &format!(
            "  bracket [{}, {}] = {};\n",
            alg.symbol(*a).name,
            alg.symbol(*b).name,
            alg.render_bracket(poly)
        );
    }
    out + "}\n"
}
