//! Finite linear combinations over [`Scalar`] and polynomials in formal
//! variables (`lambda`, `mu`, ...) with module-valued coefficients.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::scalar::{binom_u, Rational, Scalar};

/// Anything that can sit as the coefficient of a [`BracketPoly`].
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn scale(&self, s: &Scalar) -> Self;

    fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&Scalar::from(r.clone()))
    }

    fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(&other.neg());
        out
    }
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

/// Sparse linear combination `sum c_k * k` with no zero coefficient stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone + Debug> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: Scalar) -> Self {
        let mut out = Self::new();
        out.add_term(k, c);
        out
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_keys<K2: Ord + Clone + Debug>(&self, mut f: impl FnMut(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Expand each key into a linear combination and sum the results.
    pub fn flat_map<K2: Ord + Clone + Debug>(
        &self,
        mut f: impl FnMut(&K) -> LinComb<K2>,
    ) -> LinComb<K2> {
        let mut out = LinComb::new();
        for (k, c) in &self.terms {
            out.add_assign_ref(&f(k).scale(c));
        }
        out
    }
}

impl<K: Ord + Clone + Debug> Coefficient for LinComb<K> {
    fn zero() -> Self {
        LinComb::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return LinComb::new();
        }
        let mut out = LinComb::new();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }
}

/// Exponent vector over the poly's ordered variable list.
pub type Exponents = Vec<u32>;

/// A polynomial in an ordered list of formal variables with coefficients in
/// `T`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketPoly<T: Coefficient> {
    vars: Vec<String>,
    coeffs: BTreeMap<Exponents, T>,
}

impl<T: Coefficient> BracketPoly<T> {
    pub fn zero(vars: &[&str]) -> Self {
        BracketPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn zero_like(vars: &[String]) -> Self {
        BracketPoly {
            vars: vars.to_vec(),
            coeffs: BTreeMap::new(),
        }
    }

    /// The univariate polynomial `sum_k c_k lambda^k`.
    pub fn univariate(var: &str, coeffs: impl IntoIterator<Item = (u32, T)>) -> Self {
        let mut p = Self::zero(&[var]);
        for (k, c) in coeffs {
            p.add_term(vec![k], c);
        }
        p
    }

    pub fn constant(vars: &[&str], c: T) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn add_term(&mut self, e: Exponents, c: T) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_poly(&mut self, other: &Self) {
        for (e, c) in &other.coeffs {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn coeff(&self, e: &[u32]) -> T {
        self.coeffs.get(e).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of `var^k` in a univariate poly.
    pub fn coeff1(&self, k: u32) -> T {
        self.coeff(&[k])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|e| e.iter().sum()).max()
    }

    pub fn map_coeffs<U: Coefficient>(&self, mut f: impl FnMut(&T) -> U) -> BracketPoly<U> {
        let mut out = BracketPoly::zero_like(&self.vars);
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_poly(&other.neg());
        out
    }

    /// Multiply by a monomial in the variables.
    pub fn shift(&self, e: &[u32]) -> Self {
        let mut out = BracketPoly::zero_like(&self.vars);
        for (k, c) in &self.coeffs {
            let ne: Exponents = k.iter().zip(e).map(|(a, b)| a + b).collect();
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Multiply by a polynomial with scalar coefficients in the same variables.
    pub fn mul_scalar_poly(&self, p: &BracketPoly<Scalar>) -> Self {
        let mut out = BracketPoly::zero_like(&self.vars);
        for (ep, s) in &p.coeffs {
            for (e, c) in &self.coeffs {
                let ne: Exponents = e.iter().zip(ep).map(|(a, b)| a + b).collect();
                out.add_term(ne, c.scale(s));
            }
        }
        out
    }

    /// Re-express over a larger ordered variable list; variables absent from
    /// `self` get exponent zero.
    pub fn embed(&self, vars: &[&str]) -> Self {
        let positions: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .expect("embedding target must contain every variable")
            })
            .collect();
        let mut out = BracketPoly::zero(vars);
        for (e, c) in &self.coeffs {
            let mut ne = vec![0; vars.len()];
            for (i, p) in positions.iter().enumerate() {
                ne[*p] = e[i];
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Rename variables without touching exponents.
    pub fn rename(&self, vars: &[&str]) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        BracketPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Substitute the univariate variable by the linear form `sum_i w_i x_i`
    /// over the target variables `vars` (e.g. `lambda + mu`).
    pub fn substitute_linear(&self, vars: &[&str], weights: &[Rational]) -> Self {
        assert_eq!(self.vars.len(), 1);
        assert_eq!(vars.len(), weights.len());
        let mut out = BracketPoly::zero(vars);
        for (e, c) in &self.coeffs {
            let power = linear_form_power(weights, e[0]);
            for (pe, s) in power.coeffs {
                out.add_term(pe, c.scale(&s));
            }
        }
        out
    }

    /// Formal integral `int_0^{var} p(t) dt` of a univariate poly, returned in
    /// the same variable.
    pub fn integrate(&self) -> Self {
        assert_eq!(self.vars.len(), 1);
        let mut out = BracketPoly::zero_like(&self.vars);
        for (e, c) in &self.coeffs {
            out.add_term(
                vec![e[0] + 1],
                c.scale_rat(&crate::scalar::rat(1, i64::from(e[0]) + 1)),
            );
        }
        out
    }

    pub fn is_univariate(&self) -> bool {
        self.vars.len() == 1
    }
}

/// `(sum_i w_i x_i)^n` expanded by the multinomial theorem.
fn linear_form_power(weights: &[Rational], n: u32) -> BracketPoly<Scalar> {
    let vars: Vec<String> = (0..weights.len()).map(|i| format!("x{i}")).collect();
    let mut acc = BracketPoly::<Scalar>::zero_like(&vars);
    acc.add_term(vec![0; weights.len()], Scalar::one());
    for _ in 0..n {
        let mut next = BracketPoly::<Scalar>::zero_like(&vars);
        for (e, c) in &acc.coeffs {
            for (i, w) in weights.iter().enumerate() {
                if num_traits::Zero::is_zero(w) {
                    continue;
                }
                let mut ne = e.clone();
                ne[i] += 1;
                next.add_term(ne, c.scale(w));
            }
        }
        acc = next;
    }
    acc
}

/// `(a + b)^n = sum_k binom(n, k) a^k b^(n-k)`, exposed for callers that
/// expand sesquilinearity factors by hand.
pub fn binomial_row(n: u32) -> Vec<Rational> {
    (0..=n).map(|k| binom_u(i64::from(n), k)).collect()
}
