//! Lie conformal superalgebras given by generators, centrals and a table of
//! lambda-brackets between generators.

mod builtins;
mod checks;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

pub use builtins::{
    current, free_boson, free_fermion, neveu_schwarz, superfermion, virasoro, BilinearForm,
    LieTable,
};
pub use checks::{check_jacobi, check_skew, CheckFailure, CheckReport};

use crate::error::{Error, Result};
use crate::linear::{BracketPoly, Coefficient, LinComb};
use crate::scalar::{binom_u, factorial, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `p(a,b)`: -1 iff both are odd.
    pub fn sign(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

pub type SymbolId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    Generator,
    /// A torsion element with vanishing brackets. `value` pins it to a scalar
    /// multiple of the vacuum in the enveloping vertex algebra.
    Central {
        value: Option<Scalar>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub name: String,
    pub parity: Parity,
    pub weight: Option<Rational>,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn is_central(&self) -> bool {
        matches!(self.kind, SymbolKind::Central { .. })
    }
}

/// `d^d` applied to a generator or central.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub sym: SymbolId,
    pub d: u32,
}

impl Atom {
    pub fn new(sym: SymbolId, d: u32) -> Self {
        Atom { sym, d }
    }
}

/// Element of the free `C[d]`-module on the generators plus the span of the
/// centrals.
pub type ConformalElement = LinComb<Atom>;

pub const LAMBDA: &str = "lambda";
pub const MU: &str = "mu";

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraPresentation {
    pub name: String,
    params: Vec<String>,
    symbols: Vec<Symbol>,
    table: BTreeMap<(SymbolId, SymbolId), BracketPoly<ConformalElement>>,
}

impl AlgebraPresentation {
    pub fn new(name: &str) -> Self {
        AlgebraPresentation {
            name: name.to_string(),
            params: Vec::new(),
            symbols: Vec::new(),
            table: BTreeMap::new(),
        }
    }

    pub fn add_param(&mut self, name: &str) -> Result<()> {
        if self.params.iter().any(|p| p == name) || self.lookup(name).is_some() {
            return Err(Error::DuplicateSymbol(name.into()));
        }
        self.params.push(name.to_string());
        Ok(())
    }

    fn push_symbol(&mut self, sym: Symbol) -> Result<SymbolId> {
        if self.lookup(&sym.name).is_some() || self.params.contains(&sym.name) {
            return Err(Error::DuplicateSymbol(sym.name));
        }
        self.symbols.push(sym);
        Ok(self.symbols.len() - 1)
    }

    pub fn add_generator(
        &mut self,
        name: &str,
        parity: Parity,
        weight: Option<Rational>,
    ) -> Result<SymbolId> {
        self.push_symbol(Symbol {
            name: name.to_string(),
            parity,
            weight,
            kind: SymbolKind::Generator,
        })
    }

    pub fn add_central(&mut self, name: &str, value: Option<Scalar>) -> Result<SymbolId> {
        self.push_symbol(Symbol {
            name: name.to_string(),
            parity: Parity::Even,
            weight: Some(Rational::zero()),
            kind: SymbolKind::Central { value },
        })
    }

    /// Record `[a_lambda b]`. Pairs out of table order are stored through
    /// skew-symmetry.
    pub fn set_bracket(
        &mut self,
        a: SymbolId,
        b: SymbolId,
        value: BracketPoly<ConformalElement>,
    ) -> Result<()> {
        let (na, nb) = (self.symbols[a].name.clone(), self.symbols[b].name.clone());
        let key = (a.min(b), a.max(b));
        if self.table.contains_key(&key) {
            return Err(Error::DuplicateBracket(na, nb));
        }
        if value.vars() != [LAMBDA.to_string()] {
            return Err(Error::InvalidArgument(
                "bracket must be a polynomial in lambda".into(),
            ));
        }
        let pair = format!("{na}, {nb}");
        if self.symbols[a].is_central() || self.symbols[b].is_central() {
            if value.is_zero() {
                return Ok(());
            }
            return Err(Error::InvalidArgument(format!(
                "bracket [{pair}] involves a central element and must vanish"
            )));
        }
        let expected = self.symbols[a].parity + self.symbols[b].parity;
        for (_, c) in value.terms() {
            for (atom, _) in c.iter() {
                let p = self.symbols[atom.sym].parity;
                if p != expected {
                    return Err(Error::ParityMismatch {
                        pair,
                        detail: format!(
                            "`{}` is {p} but the bracket must be {expected}",
                            self.symbols[atom.sym].name
                        ),
                    });
                }
            }
        }
        let value = self.strip_central_derivatives(&value);
        let stored = if a <= b {
            value
        } else {
            let sign = -self.symbols[a].parity.sign(self.symbols[b].parity);
            self.substitute_skew(&value).scale(&Scalar::from_int(sign))
        };
        self.table.insert(key, stored);
        Ok(())
    }

    fn strip_central_derivatives(
        &self,
        p: &BracketPoly<ConformalElement>,
    ) -> BracketPoly<ConformalElement> {
        p.map_coeffs(|c| {
            let mut out = ConformalElement::new();
            for (a, s) in c.iter() {
                if !(self.symbols[a.sym].is_central() && a.d > 0) {
                    out.add_term(*a, s.clone());
                }
            }
            out
        })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id]
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn generators(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len()).filter(|i| !self.symbols[*i].is_central())
    }

    pub fn centrals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len()).filter(|i| self.symbols[*i].is_central())
    }

    pub fn table(&self) -> &BTreeMap<(SymbolId, SymbolId), BracketPoly<ConformalElement>> {
        &self.table
    }

    pub fn parity(&self, id: SymbolId) -> Parity {
        self.symbols[id].parity
    }

    pub fn is_central(&self, id: SymbolId) -> bool {
        self.symbols[id].is_central()
    }

    pub fn weight(&self, id: SymbolId) -> Result<Rational> {
        self.symbols[id]
            .weight
            .clone()
            .ok_or_else(|| Error::MissingWeight(self.symbols[id].name.clone()))
    }

    pub fn element(&self, id: SymbolId) -> ConformalElement {
        ConformalElement::single(Atom::new(id, 0), Scalar::one())
    }

    /// Element for a generator looked up by name.
    pub fn named(&self, name: &str) -> Result<ConformalElement> {
        self.lookup(name)
            .map(|id| self.element(id))
            .ok_or_else(|| Error::UndeclaredSymbol(name.into()))
    }

    /// Parity of a homogeneous element; the zero element counts as even.
    pub fn parity_of(&self, x: &ConformalElement) -> Result<Parity> {
        let mut found: Option<Parity> = None;
        for (a, _) in x.iter() {
            let p = self.parity(a.sym);
            match found {
                Some(q) if q != p => {
                    return Err(Error::ParityInhomogeneous(self.render_element(x)))
                }
                _ => found = Some(p),
            }
        }
        Ok(found.unwrap_or(Parity::Even))
    }

    /// `d^k x`; centrals are annihilated.
    pub fn derivative(&self, x: &ConformalElement, k: u32) -> ConformalElement {
        if k == 0 {
            return x.clone();
        }
        let mut out = ConformalElement::new();
        for (a, c) in x.iter() {
            if !self.is_central(a.sym) {
                out.add_term(Atom::new(a.sym, a.d + k), c.clone());
            }
        }
        out
    }

    /// `lambda^k -> (-lambda - d)^k` with `d` acting on coefficients.
    pub fn substitute_skew(
        &self,
        p: &BracketPoly<ConformalElement>,
    ) -> BracketPoly<ConformalElement> {
        let mut out = BracketPoly::zero_like(p.vars());
        for (e, c) in p.terms() {
            let k = e[0];
            for i in 0..=k {
                let coef = binom_u(i64::from(k), i) * sign_pow(k);
                let term = self.derivative(c, i);
                out.add_term(vec![k - i], term.scale(&Scalar::from(coef)));
            }
        }
        out
    }

    /// Bracket of two underived symbols.
    fn symbol_bracket(&self, a: SymbolId, b: SymbolId) -> BracketPoly<ConformalElement> {
        if a <= b {
            return self
                .table
                .get(&(a, b))
                .cloned()
                .unwrap_or_else(|| BracketPoly::zero(&[LAMBDA]));
        }
        match self.table.get(&(b, a)) {
            None => BracketPoly::zero(&[LAMBDA]),
            Some(t) => {
                let sign = -self.parity(a).sign(self.parity(b));
                self.substitute_skew(t).scale(&Scalar::from_int(sign))
            }
        }
    }

    /// `[x_lambda y]` extended from the table by sesquilinearity.
    pub fn lambda_bracket(
        &self,
        x: &ConformalElement,
        y: &ConformalElement,
    ) -> Result<BracketPoly<ConformalElement>> {
        self.parity_of(x)?;
        self.parity_of(y)?;
        let mut out = BracketPoly::zero(&[LAMBDA]);
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let base = self.symbol_bracket(a.sym, b.sym);
                if base.is_zero() {
                    continue;
                }
                let left = base.shift(&[a.d]).scale(&Scalar::from(sign_pow(a.d)));
                let both = self.apply_d_plus_lambda(&left, b.d);
                out.add_assign_poly(&both.scale(&(ca * cb)));
            }
        }
        Ok(out)
    }

    /// `(d + lambda)^n p`.
    pub fn apply_d_plus_lambda(
        &self,
        p: &BracketPoly<ConformalElement>,
        n: u32,
    ) -> BracketPoly<ConformalElement> {
        if n == 0 {
            return p.clone();
        }
        let mut out = BracketPoly::zero_like(p.vars());
        for (e, c) in p.terms() {
            for k in 0..=n {
                let coef = Scalar::from(binom_u(i64::from(n), k));
                out.add_term(vec![e[0] + n - k], self.derivative(c, k).scale(&coef));
            }
        }
        out
    }

    /// Nonzero `x_(j) y = j! [lambda^j] [x_lambda y]`.
    pub fn j_products(
        &self,
        x: &ConformalElement,
        y: &ConformalElement,
    ) -> Result<Vec<(u32, ConformalElement)>> {
        let br = self.lambda_bracket(x, y)?;
        Ok(br
            .terms()
            .map(|(e, c)| (e[0], c.scale(&Scalar::from(factorial(e[0])))))
            .collect())
    }

    /// Run both axiom checks and fail if either reports a discrepancy.
    pub fn validate(&self) -> Result<()> {
        let skew = check_skew(self);
        if !skew.passed() {
            return Err(Error::NotLieConformal(skew.to_string()));
        }
        let jac = check_jacobi(self);
        if !jac.passed() {
            return Err(Error::NotLieConformal(jac.to_string()));
        }
        Ok(())
    }

    pub fn render_atom(&self, a: &Atom) -> String {
        let name = &self.symbols[a.sym].name;
        match a.d {
            0 => name.clone(),
            1 => format!("d({name})"),
            d => format!("d^{d}({name})"),
        }
    }

    pub fn render_element(&self, x: &ConformalElement) -> String {
        render_lincomb(x.iter().map(|(a, c)| (self.render_atom(a), c.clone())))
    }

    pub fn latex_atom(&self, a: &Atom) -> String {
        let name = latex_name(&self.symbols[a.sym].name);
        match a.d {
            0 => name,
            1 => format!("\\partial {name}"),
            d => format!("\\partial^{{{d}}} {name}"),
        }
    }

    /// Text form of a bracket polynomial, e.g. `d(L) + 2*lambda*L + 1/12*lambda^3*C`.
    pub fn render_bracket(&self, p: &BracketPoly<ConformalElement>) -> String {
        let mut items = Vec::new();
        for (e, c) in p.terms() {
            let vars = var_monomial(p.vars(), e);
            for (a, s) in c.iter() {
                let mut factors = Vec::new();
                if !vars.is_empty() {
                    factors.push(vars.clone());
                }
                factors.push(self.render_atom(a));
                items.push((factors.join("*"), s.clone()));
            }
        }
        render_lincomb(items)
    }

    pub fn latex_bracket(&self, p: &BracketPoly<ConformalElement>) -> String {
        let mut items = Vec::new();
        for (e, c) in p.terms() {
            let vars = latex_var_monomial(p.vars(), e);
            for (a, s) in c.iter() {
                let body = if vars.is_empty() {
                    self.latex_atom(a)
                } else {
                    format!("{vars} {}", self.latex_atom(a))
                };
                items.push((body, s.clone()));
            }
        }
        latex_lincomb(items)
    }
}

pub(crate) fn sign_pow(k: u32) -> Rational {
    if k.is_multiple_of(2) {
        Rational::from_integer(1.into())
    } else {
        Rational::from_integer((-1).into())
    }
}

pub(crate) fn var_monomial(vars: &[String], e: &[u32]) -> String {
    vars.iter()
        .zip(e)
        .filter(|(_, k)| **k > 0)
        .map(|(v, k)| {
            if *k == 1 {
                v.clone()
            } else {
                format!("{v}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub(crate) fn latex_var_monomial(vars: &[String], e: &[u32]) -> String {
    vars.iter()
        .zip(e)
        .filter(|(_, k)| **k > 0)
        .map(|(v, k)| {
            let v = format!("\\{v}");
            if *k == 1 {
                v
            } else {
                format!("{v}^{{{k}}}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn latex_name(name: &str) -> String {
    const GREEK: &[&str] = &[
        "alpha", "beta", "gamma", "delta", "epsilon", "phi", "psi", "chi", "lambda", "mu", "nu",
        "sigma", "omega", "theta",
    ];
    let (base, digits) = name.split_at(name.trim_end_matches(|c: char| c.is_ascii_digit()).len());
    let base = if GREEK.contains(&base) {
        format!("\\{base}")
    } else {
        base.to_string()
    };
    if digits.is_empty() {
        base
    } else {
        format!("{base}_{{{digits}}}")
    }
}

/// Join `coefficient * body` items into a sum with signs pulled out front.
pub(crate) fn render_lincomb(items: impl IntoIterator<Item = (String, Scalar)>) -> String {
    let mut out = String::new();
    for (body, c) in items {
        let (neg, mag) = split_sign(&c);
        let coef = if mag.is_one() {
            String::new()
        } else if mag.num_terms() > 1 {
            format!("({mag})*")
        } else {
            format!("{mag}*")
        };
        let text = if body.is_empty() {
            mag.to_string()
        } else {
            format!("{coef}{body}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&text);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub(crate) fn latex_lincomb(items: impl IntoIterator<Item = (String, Scalar)>) -> String {
    let mut out = String::new();
    for (body, c) in items {
        let (neg, mag) = split_sign(&c);
        let coef = if mag.is_one() && !body.is_empty() {
            String::new()
        } else if mag.num_terms() > 1 {
            format!("\\left({}\\right) ", mag.to_latex())
        } else {
            format!("{} ", mag.to_latex())
        };
        let text = format!("{coef}{body}").trim_end().to_string();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&text);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Pull a leading minus sign out of a single-term scalar.
pub(crate) fn split_sign(c: &Scalar) -> (bool, Scalar) {
    if c.num_terms() == 1 {
        let (_, r) = c.terms().next().expect("one term");
        if r < &Rational::zero() {
            return (true, -c);
        }
    }
    (false, c.clone())
}

#[cfg(test)]
mod tests;
