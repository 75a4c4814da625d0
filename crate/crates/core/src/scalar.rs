//! Exact coefficients: arbitrary-precision rationals and polynomials in named
//! formal parameters (central charge `c`, level `k`, `sdim`, symbolic mode
//! indices `m`, `n`, ...).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Extended binomial coefficient `prod_{k=1..n} (j-k+1)/k`, defined for any
/// integer `j` and `n >= 0`.
pub fn binom(j: i64, n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!(
            "binomial coefficient needs a non-negative lower index, got {n}"
        )));
    }
    Ok(binom_u(j, n as u32))
}

pub(crate) fn binom_u(j: i64, n: u32) -> Rational {
    let mut acc = Rational::one();
    for k in 1..=i64::from(n) {
        acc *= rat(j - k + 1, k);
    }
    acc
}

/// Binomial coefficient with a rational upper entry.
pub(crate) fn binom_rat(top: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for k in 1..=i64::from(n) {
        acc = acc * (top - int(k - 1)) / int(k);
    }
    acc
}

pub(crate) fn factorial(n: u32) -> Rational {
    (1..=i64::from(n)).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Product of named parameters raised to positive powers, sorted by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut merged: BTreeMap<&str, u32> = BTreeMap::new();
        for (n, e) in self.0.iter().chain(other.0.iter()) {
            *merged.entry(n.as_str()).or_insert(0) += e;
        }
        Monomial(
            merged
                .into_iter()
                .map(|(n, e)| (n.to_string(), e))
                .collect(),
        )
    }

    fn without(&self, name: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(n, _)| n != name).cloned().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (n, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in named parameters with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from(int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::from(rat(n, d))
    }

    pub fn param(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rational::one());
        Scalar { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut s = Scalar::zero();
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value as a rational number, if no parameter occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_integer().to_i64())
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn parameters(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        (0..e).fold(Scalar::one(), |acc, _| &acc * self)
    }

    /// Replace the parameter `name` by `value` everywhere.
    pub fn substitute(&self, name: &str, value: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(name);
            let rest = Scalar {
                terms: std::iter::once((m.without(name), c.clone())).collect(),
            };
            out += &(&rest * &value.pow(e));
        }
        out
    }

    /// Generalized binomial coefficient with this scalar as the upper entry.
    pub fn binom(&self, n: u32) -> Scalar {
        if let Some(r) = self.as_rational() {
            return Scalar::from(binom_rat(&r, n));
        }
        let mut acc = Scalar::one();
        for k in 0..n {
            acc = &acc * &(self - &Scalar::from_int(i64::from(k)));
        }
        acc.scale(&(Rational::one() / factorial(n)))
    }

    /// Sign-normalized copy: the leading coefficient (in monomial order,
    /// constant term last) is made positive. Used to canonicalize Kronecker
    /// delta arguments, which are invariant under negation.
    pub(crate) fn sign_normalized(&self) -> Scalar {
        let lead = self
            .terms
            .iter()
            .find(|(m, _)| !m.is_one())
            .or_else(|| self.terms.iter().next());
        match lead {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    fn fmt_rational(r: &Rational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// Terms in display order: parameter monomials first, constant last.
    fn display_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().filter(|(m, _)| !m.is_one()).collect();
        // Higher total degree first so polynomials read naturally.
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.0.iter().map(|(_, e)| e).sum();
            let db: u32 = b.0.iter().map(|(_, e)| e).sum();
            db.cmp(&da).then_with(|| a.cmp(b))
        });
        v.extend(self.terms.iter().filter(|(m, _)| m.is_one()));
        v
    }

    /// Rendering as a LaTeX fragment.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            if m.is_one() {
                out.push_str(&coef);
            } else {
                if !a.is_one() {
                    out.push_str(&coef);
                    out.push(' ');
                }
                let parts: Vec<String> =
                    m.0.iter()
                        .map(|(n, e)| {
                            if *e == 1 {
                                n.clone()
                            } else {
                                format!("{n}^{{{e}}}")
                            }
                        })
                        .collect();
                out.push_str(&parts.join(" "));
            }
        }
        out
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", Scalar::fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", Scalar::fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        let mut s = Scalar::zero();
        s.add_term(Monomial::one(), r);
        s
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}
