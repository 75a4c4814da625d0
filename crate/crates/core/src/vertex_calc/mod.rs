//! The universal enveloping vertex algebra of a presentation.
//!
//! Elements are linear combinations of normally ordered words. A word is a
//! right-nested product `:a1 :a2 ... ak:..:` of atoms `d^n g`, kept in
//! canonical order: atoms are non-decreasing and no odd atom repeats. The
//! empty word is the vacuum. Pinned centrals are replaced by their value
//! times the vacuum as soon as they appear.

mod identities;
mod weights;

use std::cell::RefCell;
use std::collections::HashMap;

use serde_json::{json, Value};

pub use identities::{
    borcherds_identity_check, borcherds_nproducts_check, borcherds_sweep, locality_bound,
    quasi_assoc_integral, quasi_assoc_rewrite, quasi_comm_defect, IdentityReport,
};
pub use weights::{
    mode_of_primary, primary_check, superfermion_virasoro, weight, PrimaryClass, WeightResult,
    WeightTable,
};

use crate::error::{Error, Result};
use crate::lie_conformal::{
    latex_lincomb, latex_var_monomial, render_lincomb, sign_pow, var_monomial, AlgebraPresentation,
    Atom, ConformalElement, Parity, SymbolKind, LAMBDA,
};
use crate::linear::{BracketPoly, Coefficient, LinComb};
use crate::scalar::{binom_u, factorial, rat, Rational, Scalar};

pub type Word = Vec<Atom>;
pub type VertexElement = LinComb<Word>;

pub const DEFAULT_MAX_DEGREE: u32 = 64;

type BracketCache = HashMap<(Word, Word), BracketPoly<VertexElement>>;

/// Evaluator for one presentation. Memoization tables live here and are
/// confined to this value.
pub struct VertexAlgebra<'a> {
    alg: &'a AlgebraPresentation,
    max_degree: u32,
    brackets: RefCell<BracketCache>,
    normal: RefCell<HashMap<(Atom, Word), VertexElement>>,
    translations: RefCell<HashMap<Word, VertexElement>>,
}

impl<'a> VertexAlgebra<'a> {
    pub fn new(alg: &'a AlgebraPresentation) -> Self {
        Self::with_max_degree(alg, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(alg: &'a AlgebraPresentation, max_degree: u32) -> Self {
        VertexAlgebra {
            alg,
            max_degree,
            brackets: RefCell::new(HashMap::new()),
            normal: RefCell::new(HashMap::new()),
            translations: RefCell::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        self.alg
    }

    pub fn vacuum(&self) -> VertexElement {
        VertexElement::single(Vec::new(), Scalar::one())
    }

    pub fn scalar(&self, s: Scalar) -> VertexElement {
        VertexElement::single(Vec::new(), s)
    }

    /// A single atom as an element, resolving centrals.
    pub fn atom(&self, a: Atom) -> VertexElement {
        match &self.alg.symbol(a.sym).kind {
            SymbolKind::Central { .. } if a.d > 0 => VertexElement::new(),
            SymbolKind::Central { value: Some(v) } => self.scalar(v.clone()),
            _ => VertexElement::single(vec![a], Scalar::one()),
        }
    }

    pub fn generator(&self, name: &str) -> Result<VertexElement> {
        let id = self
            .alg
            .lookup(name)
            .ok_or_else(|| Error::UndeclaredSymbol(name.into()))?;
        Ok(self.atom(Atom::new(id, 0)))
    }

    pub fn from_conformal(&self, x: &ConformalElement) -> VertexElement {
        let mut out = VertexElement::new();
        for (a, c) in x.iter() {
            out.add_assign_ref(&self.atom(*a).scale(c));
        }
        out
    }

    pub fn word_parity(&self, w: &[Atom]) -> Parity {
        w.iter()
            .fold(Parity::Even, |p, a| p + self.alg.parity(a.sym))
    }

    pub fn parity_of(&self, x: &VertexElement) -> Result<Parity> {
        let mut found = None;
        for (w, _) in x.iter() {
            let p = self.word_parity(w);
            match found {
                Some(q) if q != p => return Err(Error::ParityInhomogeneous(self.render(x))),
                _ => found = Some(p),
            }
        }
        Ok(found.unwrap_or(Parity::Even))
    }

    fn word(&self, w: &[Atom]) -> VertexElement {
        VertexElement::single(w.to_vec(), Scalar::one())
    }

    /// `int_{-T}^0 [a_lambda b] dlambda` for two atoms.
    fn minus_t_integral(&self, a: Atom, b: Atom) -> VertexElement {
        let xa = ConformalElement::single(a, Scalar::one());
        let xb = ConformalElement::single(b, Scalar::one());
        let br = self
            .alg
            .lambda_bracket(&xa, &xb)
            .expect("atoms are homogeneous");
        let mut out = ConformalElement::new();
        for (e, c) in br.terms() {
            let k = e[0];
            let coef = sign_pow(k) * rat(1, i64::from(k) + 1);
            out.add_assign_ref(&self.alg.derivative(c, k + 1).scale(&Scalar::from(coef)));
        }
        self.from_conformal(&out)
    }

    /// `:a w:` for an atom and a canonical word.
    pub fn normal_atom_word(&self, a: Atom, w: &[Atom]) -> Result<VertexElement> {
        if self.alg.is_central(a.sym) {
            let lead = self.atom(a);
            let mut out = VertexElement::new();
            for (u, c) in lead.iter() {
                if u.is_empty() {
                    out.add_term(w.to_vec(), c.clone());
                } else {
                    // an unpinned central: sort it in, it commutes with everything
                    let mut v = w.to_vec();
                    let pos = v.partition_point(|x| *x < u[0]);
                    v.insert(pos, u[0]);
                    out.add_term(v, c.clone());
                }
            }
            return Ok(out);
        }
        let Some(&b) = w.first() else {
            return Ok(self.word(&[a]));
        };
        let odd = self.alg.parity(a.sym).is_odd();
        if a < b || (a == b && !odd) {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(a);
            v.extend_from_slice(w);
            return Ok(VertexElement::single(v, Scalar::one()));
        }
        let key = (a, w.to_vec());
        if let Some(hit) = self.normal.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let rest = &w[1..];
        let corr = self.minus_t_integral(a, b);
        let mut out = self.normal_product(&corr, &self.word(rest))?;
        if a == b {
            // :a:a rest:: = 1/2 :(int_{-T}^0 [a_lambda a]) rest: for odd a
            out = out.scale(&Scalar::from_frac(1, 2));
        } else {
            let sign = self.alg.parity(a.sym).sign(self.alg.parity(b.sym));
            let inner = self.normal_atom_word(a, rest)?;
            out.add_assign_ref(
                &self
                    .normal_atom_elem(b, &inner)?
                    .scale(&Scalar::from_int(sign)),
            );
        }
        self.normal.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn normal_atom_elem(&self, a: Atom, x: &VertexElement) -> Result<VertexElement> {
        let mut out = VertexElement::new();
        for (w, c) in x.iter() {
            out.add_assign_ref(&self.normal_atom_word(a, w)?.scale(c));
        }
        Ok(out)
    }

    /// The normally ordered product `:x y:` in canonical form.
    pub fn normal_product(&self, x: &VertexElement, y: &VertexElement) -> Result<VertexElement> {
        let mut out = VertexElement::new();
        for (u, c) in x.iter() {
            let part = match u.len() {
                0 => y.clone(),
                1 => self.normal_atom_elem(u[0], y)?,
                _ => self.composite_left(u, y)?,
            };
            out.add_assign_ref(&part.scale(c));
        }
        Ok(out)
    }

    /// `::a U: y:` through quasi-associativity.
    fn composite_left(&self, u: &[Atom], y: &VertexElement) -> Result<VertexElement> {
        let a = u[0];
        let rest = self.word(&u[1..]);
        let xa = self.word(&[a]);
        let mut out = self.normal_atom_elem(a, &self.normal_product(&rest, y)?)?;
        let ay = self.bracket_unchecked(&xa, y)?;
        let uy = self.bracket_unchecked(&rest, y)?;
        let sign = self.alg.parity(a.sym).sign(self.word_parity(&u[1..]));
        for (e, z) in uy.terms() {
            // a_(-j-2) (U_(j) y), with U_(j) y = j! [lambda^j]
            let j = e[0];
            let prod = z.scale(&Scalar::from(factorial(j)));
            out.add_assign_ref(&self.nproduct_unchecked(&xa, -(i64::from(j)) - 2, &prod)?);
        }
        for (e, z) in ay.terms() {
            let j = e[0];
            let prod = z.scale(&Scalar::from(factorial(j)));
            let term = self.nproduct_unchecked(&rest, -(i64::from(j)) - 2, &prod)?;
            out.add_assign_ref(&term.scale(&Scalar::from_int(sign)));
        }
        Ok(out)
    }

    /// The translation operator `T`.
    pub fn translate(&self, x: &VertexElement) -> Result<VertexElement> {
        let mut out = VertexElement::new();
        for (w, c) in x.iter() {
            out.add_assign_ref(&self.translate_word(w)?.scale(c));
        }
        Ok(out)
    }

    pub fn translate_n(&self, x: &VertexElement, k: u32) -> Result<VertexElement> {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = self.translate(&acc)?;
        }
        Ok(acc)
    }

    fn translate_word(&self, w: &[Atom]) -> Result<VertexElement> {
        let Some(&a) = w.first() else {
            return Ok(VertexElement::new());
        };
        if let Some(hit) = self.translations.borrow().get(w) {
            return Ok(hit.clone());
        }
        let rest = &w[1..];
        let mut out = if self.alg.is_central(a.sym) {
            VertexElement::new()
        } else {
            self.normal_atom_word(Atom::new(a.sym, a.d + 1), rest)?
        };
        let t_rest = self.translate_word(rest)?;
        out.add_assign_ref(&self.normal_atom_elem(a, &t_rest)?);
        self.translations
            .borrow_mut()
            .insert(w.to_vec(), out.clone());
        Ok(out)
    }

    /// `lambda^k -> (-lambda - T)^k` on coefficients.
    pub fn substitute_skew(
        &self,
        p: &BracketPoly<VertexElement>,
    ) -> Result<BracketPoly<VertexElement>> {
        let mut out = BracketPoly::zero_like(p.vars());
        for (e, c) in p.terms() {
            let k = e[0];
            let mut t = c.clone();
            for i in 0..=k {
                let coef = binom_u(i64::from(k), i) * sign_pow(k);
                out.add_term(vec![k - i], t.scale(&Scalar::from(coef)));
                if i < k {
                    t = self.translate(&t)?;
                }
            }
        }
        Ok(out)
    }

    /// The lambda-bracket `[x_lambda y]` on the whole vertex algebra.
    pub fn bracket(
        &self,
        x: &VertexElement,
        y: &VertexElement,
    ) -> Result<BracketPoly<VertexElement>> {
        self.parity_of(x)?;
        self.parity_of(y)?;
        self.bracket_unchecked(x, y)
    }

    fn bracket_unchecked(
        &self,
        x: &VertexElement,
        y: &VertexElement,
    ) -> Result<BracketPoly<VertexElement>> {
        let mut out = BracketPoly::zero(&[LAMBDA]);
        for (u, cu) in x.iter() {
            for (v, cv) in y.iter() {
                let part = self.word_bracket(u, v)?;
                out.add_assign_poly(&part.scale(&(cu * cv)));
            }
        }
        Ok(out)
    }

    fn word_bracket(&self, u: &[Atom], v: &[Atom]) -> Result<BracketPoly<VertexElement>> {
        if u.is_empty() || v.is_empty() {
            return Ok(BracketPoly::zero(&[LAMBDA]));
        }
        let key = (u.to_vec(), v.to_vec());
        if let Some(hit) = self.brackets.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let out = if v.len() == 1 {
            if u.len() == 1 {
                let xa = ConformalElement::single(u[0], Scalar::one());
                let xb = ConformalElement::single(v[0], Scalar::one());
                self.alg
                    .lambda_bracket(&xa, &xb)?
                    .map_coeffs(|c| self.from_conformal(c))
            } else {
                // [u_lambda b] = -p(u,b) [b_{-lambda-T} u]
                let flipped = self.word_bracket(v, u)?;
                let sign = -self.word_parity(u).sign(self.word_parity(v));
                self.substitute_skew(&flipped)?
                    .scale(&Scalar::from_int(sign))
            }
        } else {
            self.wick(u, v)?
        };
        if let Some(d) = out.degree() {
            if d > self.max_degree {
                return Err(Error::DegreeGuard {
                    limit: self.max_degree,
                    degree: d,
                });
            }
        }
        self.brackets.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// `[u_lambda :b V:] = :[u_lambda b] V: + p(u,b) :b [u_lambda V]:
    ///  + int_0^lambda [[u_lambda b]_mu V] dmu`.
    fn wick(&self, u: &[Atom], v: &[Atom]) -> Result<BracketPoly<VertexElement>> {
        let b = v[0];
        let rest = self.word(&v[1..]);
        let ub = self.word_bracket(u, &[b])?;
        let u_rest = self.word_bracket(u, &v[1..])?;
        let sign = Scalar::from_int(self.word_parity(u).sign(self.alg.parity(b.sym)));
        let mut out = BracketPoly::zero(&[LAMBDA]);
        for (e, x) in ub.terms() {
            out.add_term(e.clone(), self.normal_product(x, &rest)?);
            let inner = self.bracket_unchecked(x, &rest)?.integrate();
            out.add_assign_poly(&inner.shift(e));
        }
        for (e, x) in u_rest.terms() {
            out.add_term(e.clone(), self.normal_atom_elem(b, x)?.scale(&sign));
        }
        Ok(out)
    }

    /// `x_(n) y` for any integer `n`.
    pub fn nproduct(&self, x: &VertexElement, n: i64, y: &VertexElement) -> Result<VertexElement> {
        self.parity_of(x)?;
        self.parity_of(y)?;
        if n >= 0 {
            let br = self.bracket_unchecked(x, y)?;
            let n = n as u32;
            return Ok(br.coeff1(n).scale(&Scalar::from(factorial(n))));
        }
        self.nproduct_unchecked(x, n, y)
    }

    /// Negative products `x_(-1-j) y = :(T^j x / j!) y:`.
    fn nproduct_unchecked(
        &self,
        x: &VertexElement,
        n: i64,
        y: &VertexElement,
    ) -> Result<VertexElement> {
        debug_assert!(n < 0);
        let j = (-1 - n) as u32;
        let tx = self.translate_n(x, j)?.scale(&Scalar::from(
            Rational::from_integer(1.into()) / factorial(j),
        ));
        self.normal_product(&tx, y)
    }

    /// Nonzero `x_(j) y` for `j >= 0`.
    pub fn j_products(
        &self,
        x: &VertexElement,
        y: &VertexElement,
    ) -> Result<Vec<(u32, VertexElement)>> {
        let br = self.bracket(x, y)?;
        Ok(br
            .terms()
            .map(|(e, c)| (e[0], c.scale(&Scalar::from(factorial(e[0])))))
            .collect())
    }

    pub fn render_word(&self, w: &[Atom]) -> String {
        match w.len() {
            0 => "|0>".into(),
            1 => self.alg.render_atom(&w[0]),
            _ => {
                let parts: Vec<String> = w.iter().map(|a| self.alg.render_atom(a)).collect();
                format!(":{}:", parts.join(" "))
            }
        }
    }

    pub fn latex_word(&self, w: &[Atom]) -> String {
        match w.len() {
            0 => String::new(),
            1 => self.alg.latex_atom(&w[0]),
            _ => {
                let parts: Vec<String> = w.iter().map(|a| self.alg.latex_atom(a)).collect();
                format!("{{:}}{}{{:}}", parts.join(" "))
            }
        }
    }

    /// Text form; the vacuum is written as a bare scalar.
    pub fn render(&self, x: &VertexElement) -> String {
        render_lincomb(x.iter().map(|(w, c)| {
            let body = if w.is_empty() {
                String::new()
            } else {
                self.render_word(w)
            };
            (body, c.clone())
        }))
    }

    pub fn latex(&self, x: &VertexElement) -> String {
        latex_lincomb(x.iter().map(|(w, c)| (self.latex_word(w), c.clone())))
    }

    pub fn render_bracket(&self, p: &BracketPoly<VertexElement>) -> String {
        let mut items = Vec::new();
        for (e, c) in p.terms() {
            let vars = var_monomial(p.vars(), e);
            for (w, s) in c.iter() {
                let word = if w.is_empty() {
                    String::new()
                } else {
                    self.render_word(w)
                };
                let body = [vars.clone(), word]
                    .into_iter()
                    .filter(|t| !t.is_empty())
                    .collect::<Vec<_>>()
                    .join("*");
                items.push((body, s.clone()));
            }
        }
        render_lincomb(items)
    }

    pub fn latex_bracket(&self, p: &BracketPoly<VertexElement>) -> String {
        let mut items = Vec::new();
        for (e, c) in p.terms() {
            let vars = latex_var_monomial(p.vars(), e);
            for (w, s) in c.iter() {
                let body = [vars.clone(), self.latex_word(w)]
                    .into_iter()
                    .filter(|t| !t.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                items.push((body, s.clone()));
            }
        }
        latex_lincomb(items)
    }

    pub fn to_json(&self, x: &VertexElement) -> Value {
        let mut words = Vec::new();
        let mut vacuum = Scalar::zero();
        for (w, c) in x.iter() {
            if w.is_empty() {
                vacuum = c.clone();
                continue;
            }
            words.push(json!({
                "atoms": w.iter().map(|a| json!({
                    "generator": self.alg.symbol(a.sym).name,
                    "d": a.d,
                })).collect::<Vec<_>>(),
                "coefficient": c.to_string(),
            }));
        }
        json!({"words": words, "vacuum": vacuum.to_string()})
    }

    /// Singular part of the OPE `x(z) y(w) ~ sum_j (x_(j) y)(w) / (z-w)^(j+1)`.
    pub fn render_ope(
        &self,
        lhs: &str,
        rhs: &str,
        x: &VertexElement,
        y: &VertexElement,
    ) -> Result<String> {
        let prods = self.j_products(x, y)?;
        let mut terms = Vec::new();
        for (j, c) in prods.iter().rev() {
            let pole = if *j == 0 {
                "(z-w)".to_string()
            } else {
                format!("(z-w)^{}", j + 1)
            };
            terms.push(self.ope_numerator(c) + "/" + &pole);
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        Ok(format!("{lhs}(z){rhs}(w) ~ {body}"))
    }

    fn ope_numerator(&self, c: &VertexElement) -> String {
        if c.len() == 1 {
            let (w, s) = c.iter().next().expect("one term");
            if w.is_empty() {
                return format!("({})", fraction_form(s));
            }
            let field = format!("{}(w)", self.render_word(w));
            return if s.is_one() {
                field
            } else if s.num_terms() == 1 && s.is_constant() {
                format!("{s}*{field}")
            } else {
                format!("({})*{field}", fraction_form(s))
            };
        }
        format!("({})(w)", self.render(c))
    }

    pub fn latex_ope(
        &self,
        lhs: &str,
        rhs: &str,
        x: &VertexElement,
        y: &VertexElement,
    ) -> Result<String> {
        let prods = self.j_products(x, y)?;
        let mut terms = Vec::new();
        for (j, c) in prods.iter().rev() {
            let pole = if *j == 0 {
                "(z-w)".to_string()
            } else {
                format!("(z-w)^{{{}}}", j + 1)
            };
            terms.push(format!("\\frac{{{}}}{{{pole}}}", self.latex(c)));
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        Ok(format!("{lhs}(z){rhs}(w) \\sim {body}"))
    }
}

/// Scalars written as `c/2` rather than `1/2*c` for OPE numerators.
fn fraction_form(s: &Scalar) -> String {
    let parts: Vec<String> = s
        .terms()
        .map(|(m, r)| {
            let num = r.numer().clone();
            let den = r.denom().clone();
            let mono = m.to_string();
            let top = match (m.is_one(), num.to_string().as_str()) {
                (true, _) => num.to_string(),
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, n) => format!("{n}*{mono}"),
            };
            if den == 1.into() {
                top
            } else {
                format!("{top}/{den}")
            }
        })
        .collect();
    parts.join(" + ").replace("+ -", "- ")
}
