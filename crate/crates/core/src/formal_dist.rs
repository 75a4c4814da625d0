//! Formal distribution calculus in one and two indeterminates.
//!
//! Two-variable distributions are stored in decomposed form: a finite ladder
//! of delta derivatives `sum_j c_j(w) d_w^j delta(z,w) / j!` plus a finite
//! bivariate Laurent polynomial. Expansions of `(z-w)^k` for negative `k` are
//! materialized to a caller-chosen order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linear::{BracketPoly, Coefficient, LinComb};
use crate::scalar::{binom_u, factorial, int, Rational, Scalar};

/// Finite Laurent polynomial in one variable: exponent -> coefficient.
pub type OneVarLaurent = LinComb<i64>;

pub fn monomial(exp: i64, c: Scalar) -> OneVarLaurent {
    LinComb::single(exp, c)
}

/// Formal derivative of a one-variable Laurent polynomial.
pub fn laurent_derivative(a: &OneVarLaurent) -> OneVarLaurent {
    let mut out = OneVarLaurent::new();
    for (e, c) in a.iter() {
        out.add_term(e - 1, c.scale(&int(*e)));
    }
    out
}

pub fn laurent_mul(a: &OneVarLaurent, b: &OneVarLaurent) -> OneVarLaurent {
    let mut out = OneVarLaurent::new();
    for (ea, ca) in a.iter() {
        for (eb, cb) in b.iter() {
            out.add_term(ea + eb, ca * cb);
        }
    }
    out
}

fn laurent_to_string(a: &OneVarLaurent, var: &str) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = a
        .iter()
        .map(|(e, c)| {
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            match (mono.is_empty(), c.is_one(), c.num_terms() > 1) {
                (true, _, _) => format!("{c}"),
                (false, true, _) => mono,
                (false, false, true) => format!("({c})*{mono}"),
                (false, false, false) => format!("{c}*{mono}"),
            }
        })
        .collect();
    parts.join(" + ")
}

/// Which variable dominates in an expansion of `(z-w)^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `i_{z,w}`: a power series in `w / z`.
    ZDominant,
    /// `i_{w,z}`: a power series in `z / w`.
    WDominant,
}

/// A bivariate Laurent series known exactly below a truncation order in the
/// subdominant variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    /// `(z exponent, w exponent) -> coefficient`.
    pub coeffs: BTreeMap<(i64, i64), Scalar>,
    pub orientation: Orientation,
    /// Exponents of the subdominant variable at or above this order are
    /// unknown. `None` means the series is exact.
    pub truncation: Option<i64>,
}

impl TruncatedSeries {
    pub fn coefficient(&self, z_exp: i64, w_exp: i64) -> Option<Scalar> {
        let sub = match self.orientation {
            Orientation::ZDominant => w_exp,
            Orientation::WDominant => z_exp,
        };
        if self.truncation.is_some_and(|t| sub >= t) {
            return None;
        }
        Some(
            self.coeffs
                .get(&(z_exp, w_exp))
                .cloned()
                .unwrap_or_default(),
        )
    }

    /// Multiply by the polynomial `(z-w)^m`, `m >= 0`. The truncation order in
    /// the subdominant variable is unchanged since every added term raises it.
    pub fn mul_zw_power(&self, m: u32) -> TruncatedSeries {
        let mut coeffs: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        for ((a, b), c) in &self.coeffs {
            for i in 0..=m {
                let coef = binom_u(i64::from(m), i) * sign(i);
                let key = (a + i64::from(m) - i64::from(i), b + i64::from(i));
                let e = coeffs.entry(key).or_default();
                *e += &c.scale(&coef);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        if let Some(t) = self.truncation {
            coeffs.retain(|(z, w), _| match self.orientation {
                Orientation::ZDominant => *w < t,
                Orientation::WDominant => *z < t,
            });
        }
        TruncatedSeries {
            coeffs,
            orientation: self.orientation,
            truncation: self.truncation,
        }
    }

    pub fn derive(&self, var: Var) -> TruncatedSeries {
        let mut coeffs = BTreeMap::new();
        for ((a, b), c) in &self.coeffs {
            let (key, f) = match var {
                Var::Z => ((a - 1, *b), *a),
                Var::W => ((*a, b - 1), *b),
            };
            if f != 0 {
                coeffs.insert(key, c.scale(&int(f)));
            }
        }
        let truncation = match (var, self.orientation) {
            (Var::W, Orientation::ZDominant) | (Var::Z, Orientation::WDominant) => {
                self.truncation.map(|t| t - 1)
            }
            _ => self.truncation,
        };
        TruncatedSeries {
            coeffs,
            orientation: self.orientation,
            truncation,
        }
    }

    pub fn scale(&self, s: &Scalar) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (*k, c * s))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TruncatedSeries {
            coeffs,
            orientation: self.orientation,
            truncation: self.truncation,
        }
    }
}

fn sign(i: u32) -> Rational {
    if i.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Expansion of `(z-w)^k` in the given domain, with `order` terms.
///
/// For `k >= 0` the expansion is a finite polynomial, identical in both
/// orientations, and the result is exact.
pub fn expand_power(k: i64, orientation: Orientation, order: u32) -> Result<TruncatedSeries> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "expansion order must be >= 1".into(),
        ));
    }
    let mut coeffs = BTreeMap::new();
    let (n_terms, truncation) = if k >= 0 {
        (k as u32 + 1, None)
    } else {
        (order, Some(i64::from(order)))
    };
    for j in 0..n_terms {
        let b = binom_u(k, j);
        let jj = i64::from(j);
        let (key, coef) = match orientation {
            // binom(k,j) (-w)^j z^(k-j)
            Orientation::ZDominant => ((k - jj, jj), b * sign(j)),
            // binom(k,j) z^j (-w)^(k-j)
            Orientation::WDominant => ((jj, k - jj), b * parity_sign(k - jj)),
        };
        if !coef.is_zero() {
            coeffs.insert(key, Scalar::from(coef));
        }
    }
    // For k >= 0 both orientations describe the same polynomial.
    let orientation = if k >= 0 {
        Orientation::ZDominant
    } else {
        orientation
    };
    let series = TruncatedSeries {
        coeffs,
        orientation,
        truncation,
    };
    Ok(series)
}

fn parity_sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

/// `sum_j c_j(w) d_w^j delta(z,w)/j!` plus a finite bivariate Laurent part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TwoVarDistribution {
    singular: BTreeMap<u32, OneVarLaurent>,
    regular: LinComb<(i64, i64)>,
}

/// Outcome of [`locality_test`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locality {
    /// `(z-w)^N a = 0`.
    Local(u32),
    /// Singular ladder plus a remainder holomorphic in `z`.
    WeaklyLocal,
    NonLocal,
}

impl TwoVarDistribution {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Build from a singular ladder and regular monomials, dropping zeros.
    pub fn new(
        singular: impl IntoIterator<Item = (u32, OneVarLaurent)>,
        regular: impl IntoIterator<Item = ((i64, i64), Scalar)>,
    ) -> Self {
        let mut out = Self::zero();
        for (j, c) in singular {
            out.add_singular(j, &c);
        }
        for (k, c) in regular {
            out.regular.add_term(k, c);
        }
        out
    }

    pub fn add_singular(&mut self, j: u32, c: &OneVarLaurent) {
        let entry = self.singular.entry(j).or_default();
        entry.add_assign_ref(c);
        if entry.is_empty() {
            self.singular.remove(&j);
        }
    }

    pub fn singular(&self) -> &BTreeMap<u32, OneVarLaurent> {
        &self.singular
    }

    pub fn regular(&self) -> &LinComb<(i64, i64)> {
        &self.regular
    }

    pub fn is_zero(&self) -> bool {
        self.singular.is_empty() && self.regular.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in &other.singular {
            out.add_singular(*j, c);
        }
        out.regular.add_assign_ref(&other.regular);
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (j, c) in &self.singular {
            out.add_singular(*j, &c.scale(s));
        }
        out.regular = self.regular.scale(s);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Coefficient of `z^m w^p` in the full (infinite) expansion.
    pub fn coefficient(&self, m: i64, p: i64) -> Scalar {
        let mut out = self.regular.get(&(m, p));
        for (j, c) in &self.singular {
            // c(w) d_w^j delta / j! = sum_{k,s} c_k binom(s,j) z^{-1-s} w^{k+s-j}
            let s = -1 - m;
            let k = p - s + i64::from(*j);
            let ck = c.get(&k);
            if !ck.is_zero() {
                out += &ck.scale(&binom_u(s, *j));
            }
        }
        out
    }

    /// `Res_z a(z,w)`, a Laurent polynomial in `w`.
    pub fn residue_z(&self) -> OneVarLaurent {
        let mut out = self.singular.get(&0).cloned().unwrap_or_default();
        for ((zm, wn), c) in self.regular.iter() {
            if *zm == -1 {
                out.add_term(*wn, c.clone());
            }
        }
        out
    }

    /// Rebuild the distribution from a decomposition list.
    pub fn from_decomposition(list: &[(u32, OneVarLaurent)]) -> Self {
        Self::new(list.iter().cloned(), std::iter::empty())
    }
}

impl fmt::Display for TwoVarDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in &self.singular {
            let d = match j {
                0 => "delta".to_string(),
                1 => "d_w delta".to_string(),
                _ => format!("d_w^{j} delta/{}", factorial(*j)),
            };
            parts.push(format!("({})*{d}", laurent_to_string(c, "w")));
        }
        for ((m, n), c) in self.regular.iter() {
            parts.push(format!("({c})*z^{m}*w^{n}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn delta() -> TwoVarDistribution {
    delta_derivative(0)
}

/// `d_w^n delta(z,w)`, stored as `n! * (d_w^n delta / n!)`.
pub fn delta_derivative(n: u32) -> TwoVarDistribution {
    TwoVarDistribution::new(
        [(n, monomial(0, Scalar::from(factorial(n))))],
        std::iter::empty(),
    )
}

/// Multiply by `(z-w)^m`: the delta ladder steps down `m` rungs (terms that
/// bottom out vanish) and the regular part is multiplied exactly.
pub fn mul_zw_power(a: &TwoVarDistribution, m: u32) -> TwoVarDistribution {
    let mut out = TwoVarDistribution::zero();
    for (j, c) in &a.singular {
        if *j >= m {
            out.add_singular(j - m, c);
        }
    }
    for ((zm, wn), c) in a.regular.iter() {
        for i in 0..=m {
            let coef = binom_u(i64::from(m), i) * sign(i);
            out.regular.add_term(
                (zm + i64::from(m) - i64::from(i), wn + i64::from(i)),
                c.scale(&coef),
            );
        }
    }
    out
}

/// Partial derivative in `z` or `w`.
pub fn derive(a: &TwoVarDistribution, var: Var) -> TwoVarDistribution {
    let mut out = TwoVarDistribution::zero();
    for (j, c) in &a.singular {
        let raised = c.scale(&Scalar::from_int(i64::from(*j) + 1));
        match var {
            Var::W => {
                out.add_singular(*j, &laurent_derivative(c));
                out.add_singular(j + 1, &raised);
            }
            // d_z delta(z,w) = -d_w delta(z,w), and c depends on w only.
            Var::Z => out.add_singular(j + 1, &raised.neg()),
        }
    }
    for ((zm, wn), c) in a.regular.iter() {
        match var {
            Var::Z => out.regular.add_term((zm - 1, *wn), c.scale(&int(*zm))),
            Var::W => out.regular.add_term((*zm, wn - 1), c.scale(&int(*wn))),
        }
    }
    out
}

/// Multiply by a Laurent polynomial `b(z)`; on the delta ladder this uses
/// `b(z) d_w^j delta/j! = sum_k b^(k)(w)/k! d_w^(j-k) delta/(j-k)!`.
pub fn mul_z(a: &TwoVarDistribution, b: &OneVarLaurent) -> TwoVarDistribution {
    let mut out = TwoVarDistribution::zero();
    for (j, c) in &a.singular {
        let mut deriv = b.clone();
        for k in 0..=*j {
            let term = laurent_mul(c, &deriv).scale(&Scalar::from(Rational::one() / factorial(k)));
            out.add_singular(j - k, &term);
            deriv = laurent_derivative(&deriv);
        }
    }
    for ((zm, wn), c) in a.regular.iter() {
        for (e, bc) in b.iter() {
            out.regular.add_term((zm + e, *wn), c * bc);
        }
    }
    out
}

/// Multiply by a Laurent polynomial `b(w)`.
pub fn mul_w(a: &TwoVarDistribution, b: &OneVarLaurent) -> TwoVarDistribution {
    let mut out = TwoVarDistribution::zero();
    for (j, c) in &a.singular {
        out.add_singular(*j, &laurent_mul(c, b));
    }
    for ((zm, wn), c) in a.regular.iter() {
        for (e, bc) in b.iter() {
            out.regular.add_term((*zm, wn + e), c * bc);
        }
    }
    out
}

/// `sum_j c_j(w) d_w^j delta / j!` as the bare series with the variables
/// interchanged, `a(w,z)`, evaluated coefficientwise.
pub fn swapped_coefficient(a: &TwoVarDistribution, m: i64, p: i64) -> Scalar {
    a.coefficient(p, m)
}

/// One-variable Fourier transform `Res_z e^{lambda z} a(z)`.
pub fn fourier_one(a: &OneVarLaurent) -> BracketPoly<Scalar> {
    let mut out = BracketPoly::zero(&["lambda"]);
    for (e, c) in a.iter() {
        if *e <= -1 {
            let n = (-1 - e) as u32;
            out.add_term(vec![n], c.scale(&(Rational::one() / factorial(n))));
        }
    }
    out
}

/// Two-variable Fourier transform `Res_z e^{lambda(z-w)} a(z,w)`.
///
/// The delta ladder transforms exactly. A regular monomial with a negative
/// power of `z` contributes an infinite series in `lambda`; it is cut at
/// `max_degree`.
pub fn fourier_two(a: &TwoVarDistribution, max_degree: u32) -> BracketPoly<OneVarLaurent> {
    let mut out = BracketPoly::zero(&["lambda"]);
    for (j, c) in &a.singular {
        out.add_term(
            vec![*j],
            c.scale(&Scalar::from(Rational::one() / factorial(*j))),
        );
    }
    for ((zm, wn), c) in a.regular.iter() {
        if *zm > -1 {
            continue;
        }
        // Res_z (z-w)^k z^zm w^wn = binom(k, i) (-w)^(k-i) w^wn, i = -1-zm.
        let i = (-1 - zm) as u32;
        for k in i..=max_degree.max(i) {
            if k > max_degree {
                break;
            }
            let coef = binom_u(i64::from(k), i) * sign(k - i) / factorial(k);
            out.add_term(vec![k], monomial(i64::from(k - i) + wn, c.scale(&coef)));
        }
    }
    out
}

/// Coefficients `c_j(w)` of a local distribution.
pub fn decompose(a: &TwoVarDistribution) -> Result<Vec<(u32, OneVarLaurent)>> {
    if !a.regular.is_empty() {
        let offending: Vec<String> = a
            .regular
            .iter()
            .map(|((m, n), c)| format!("({c})*z^{m}*w^{n}"))
            .collect();
        return Err(Error::NonLocal(offending.join(", ")));
    }
    Ok(a.singular.iter().map(|(j, c)| (*j, c.clone())).collect())
}

pub fn locality_test(a: &TwoVarDistribution) -> Locality {
    if a.regular.is_empty() {
        let n = a.singular.keys().next_back().map(|j| j + 1).unwrap_or(0);
        return Locality::Local(n);
    }
    if a.regular.keys().all(|(zm, _)| *zm >= 0) {
        Locality::WeaklyLocal
    } else {
        Locality::NonLocal
    }
}

/// `e^{lambda(z-w)} a(z,w)` restricted to the coefficient of `lambda^k`,
/// i.e. `(z-w)^k a / k!`.
pub fn exp_shift_coefficient(a: &TwoVarDistribution, k: u32) -> TwoVarDistribution {
    mul_zw_power(a, k).scale(&Scalar::from(Rational::one() / factorial(k)))
}

pub fn laurent_to_json(a: &OneVarLaurent) -> Value {
    Value::Array(
        a.iter()
            .map(|(e, c)| json!({"exponent": e, "coefficient": c.to_string()}))
            .collect(),
    )
}

pub fn distribution_to_json(a: &TwoVarDistribution) -> Value {
    json!({
        "singular": a.singular.iter().map(|(j, c)| json!({"j": j, "c": laurent_to_json(c)})).collect::<Vec<_>>(),
        "regular": a.regular.iter().map(|((m, n), c)| json!({"z": m, "w": n, "coefficient": c.to_string()})).collect::<Vec<_>>(),
    })
}
