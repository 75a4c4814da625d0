//! Quasi-commutativity, quasi-associativity and the Borcherds identities.

use std::fmt;

use serde_json::{json, Value};

use super::{VertexAlgebra, VertexElement};
use crate::error::Result;
use crate::lie_conformal::{Atom, CheckFailure, CheckReport};
use crate::linear::Coefficient;
use crate::scalar::{binom_u, factorial, rat, Rational, Scalar};

/// Both sides of an identity, evaluated.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: VertexElement,
    pub rhs: VertexElement,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn difference(&self) -> VertexElement {
        self.lhs.sub_ref(&self.rhs)
    }

    pub fn to_json(&self, va: &VertexAlgebra) -> Value {
        json!({
            "identity": self.name,
            "passed": self.passed(),
            "lhs": va.render(&self.lhs),
            "rhs": va.render(&self.rhs),
        })
    }

    pub fn display<'a>(&'a self, va: &'a VertexAlgebra<'a>) -> impl fmt::Display + 'a {
        ReportDisplay { report: self, va }
    }
}

struct ReportDisplay<'a> {
    report: &'a IdentityReport,
    va: &'a VertexAlgebra<'a>,
}

impl fmt::Display for ReportDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.report;
        let status = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{}: {status}", r.name)?;
        writeln!(f, "  lhs: {}", self.va.render(&r.lhs))?;
        write!(f, "  rhs: {}", self.va.render(&r.rhs))
    }
}

/// Smallest `N` with `x_(j) y = 0` for all `j >= N`.
pub fn locality_bound(va: &VertexAlgebra, x: &VertexElement, y: &VertexElement) -> Result<u32> {
    Ok(va.bracket(x, y)?.degree().map_or(0, |d| d + 1))
}

fn inv_factorial(n: u32) -> Scalar {
    Scalar::from(Rational::from_integer(1.into()) / factorial(n))
}

/// `int_{-T}^0 [a_lambda b] dlambda = sum_j (-1)^j T^(j+1)/(j+1)! (a_(j) b)`.
pub fn quasi_comm_defect(
    va: &VertexAlgebra,
    a: &VertexElement,
    b: &VertexElement,
) -> Result<VertexElement> {
    let mut out = VertexElement::new();
    for (j, prod) in va.j_products(a, b)? {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let t = va.translate_n(&prod, j + 1)?;
        out.add_assign_ref(&t.scale(&(inv_factorial(j + 1).scale(&rat(sign, 1)))));
    }
    Ok(out)
}

/// `::a b: c:` written as `:a :b c::` plus the sum of corrections
/// `a_(-j-2)(b_(j) c) + p(a,b) b_(-j-2)(a_(j) c)`.
pub fn quasi_assoc_rewrite(
    va: &VertexAlgebra,
    a: &VertexElement,
    b: &VertexElement,
    c: &VertexElement,
) -> Result<VertexElement> {
    let sign = Scalar::from_int(va.parity_of(a)?.sign(va.parity_of(b)?));
    let mut out = va.normal_product(a, &va.normal_product(b, c)?)?;
    for (j, bc) in va.j_products(b, c)? {
        out.add_assign_ref(&va.nproduct(a, -i64::from(j) - 2, &bc)?);
    }
    for (j, ac) in va.j_products(a, c)? {
        out.add_assign_ref(&va.nproduct(b, -i64::from(j) - 2, &ac)?.scale(&sign));
    }
    Ok(out)
}

/// The same rewrite in integral form: `:(int_0^T a dlambda) [b_lambda c]:`
/// with `lambda^k` integrated to `T^(k+1)/(k+1)` acting on the left factor.
pub fn quasi_assoc_integral(
    va: &VertexAlgebra,
    a: &VertexElement,
    b: &VertexElement,
    c: &VertexElement,
) -> Result<VertexElement> {
    let sign = Scalar::from_int(va.parity_of(a)?.sign(va.parity_of(b)?));
    let mut out = va.normal_product(a, &va.normal_product(b, c)?)?;
    let integral =
        |x: &VertexElement, y: &VertexElement, z: &VertexElement| -> Result<VertexElement> {
            let mut acc = VertexElement::new();
            for (e, coef) in va.bracket(y, z)?.terms() {
                let k = e[0];
                let left = va
                    .translate_n(x, k + 1)?
                    .scale(&Scalar::from(rat(1, i64::from(k) + 1)));
                acc.add_assign_ref(&va.normal_product(&left, coef)?);
            }
            Ok(acc)
        };
    out.add_assign_ref(&integral(a, b, c)?);
    out.add_assign_ref(&integral(b, a, c)?.scale(&sign));
    Ok(out)
}

/// `a_(n) b = -p(a,b) (-1)^n sum_j (-T)^j/j! (b_(n+j) a)`.
pub fn borcherds_nproducts_check(
    va: &VertexAlgebra,
    a: &VertexElement,
    b: &VertexElement,
    n: i64,
) -> Result<IdentityReport> {
    let lhs = va.nproduct(a, n, b)?;
    let p = va.parity_of(a)?.sign(va.parity_of(b)?);
    let sign_n = if n.rem_euclid(2) == 0 { 1 } else { -1 };
    let bound = i64::from(locality_bound(va, b, a)?);
    let mut rhs = VertexElement::new();
    let mut j = 0u32;
    while n + i64::from(j) < bound {
        let prod = va.nproduct(b, n + i64::from(j), a)?;
        let sj = if j.is_multiple_of(2) { 1 } else { -1 };
        let term = va
            .translate_n(&prod, j)?
            .scale(&inv_factorial(j).scale(&rat(sj, 1)));
        rhs.add_assign_ref(&term);
        j += 1;
    }
    let rhs = rhs.scale(&Scalar::from_int(-p * sign_n));
    Ok(IdentityReport {
        name: format!("borcherds n-products (n = {n})"),
        lhs,
        rhs,
    })
}

fn binom_i(top: i64, i: u32) -> Scalar {
    Scalar::from(binom_u(top, i))
}

/// The Borcherds identity
/// `sum_i C(m,i) (a_(q+i) b)_(m+n-i) c
///  = sum_i (-1)^i C(q,i) (a_(m+q-i)(b_(n+i) c) - (-1)^q p(a,b) b_(n+q-i)(a_(m+i) c))`.
pub fn borcherds_identity_check(
    va: &VertexAlgebra,
    a: &VertexElement,
    b: &VertexElement,
    c: &VertexElement,
    m: i64,
    n: i64,
    q: i64,
) -> Result<IdentityReport> {
    let p = va.parity_of(a)?.sign(va.parity_of(b)?);
    let nab = i64::from(locality_bound(va, a, b)?);
    let nbc = i64::from(locality_bound(va, b, c)?);
    let nac = i64::from(locality_bound(va, a, c)?);

    let mut lhs = VertexElement::new();
    let lhs_terms = if m >= 0 {
        (m + 1).min(nab - q)
    } else {
        nab - q
    };
    for i in 0..lhs_terms.max(0) as u32 {
        let ab = va.nproduct(a, q + i64::from(i), b)?;
        let term = va.nproduct(&ab, m + n - i64::from(i), c)?;
        lhs.add_assign_ref(&term.scale(&binom_i(m, i)));
    }

    let mut rhs = VertexElement::new();
    let rhs_terms = if q >= 0 {
        q + 1
    } else {
        (nbc - n).max(nac - m)
    };
    let sign_q = if q.rem_euclid(2) == 0 { 1 } else { -1 };
    for i in 0..rhs_terms.max(0) as u32 {
        let ii = i64::from(i);
        let coef = binom_i(q, i).scale(&rat(if i % 2 == 0 { 1 } else { -1 }, 1));
        let bc = va.nproduct(b, n + ii, c)?;
        let first = va.nproduct(a, m + q - ii, &bc)?;
        let ac = va.nproduct(a, m + ii, c)?;
        let second = va.nproduct(b, n + q - ii, &ac)?;
        let term = first.sub_ref(&second.scale(&Scalar::from_int(sign_q * p)));
        rhs.add_assign_ref(&term.scale(&coef));
    }
    Ok(IdentityReport {
        name: format!("borcherds (m, n, q) = ({m}, {n}, {q})"),
        lhs,
        rhs,
    })
}

/// The Borcherds identity on every triple of generators and every
/// `(m, n, q)` in `[-range, range]^3`.
pub fn borcherds_sweep(va: &VertexAlgebra, range: i64) -> Result<CheckReport> {
    let alg = va.presentation();
    let gens: Vec<_> = alg
        .generators()
        .map(|g| (alg.symbol(g).name.clone(), va.atom(Atom::new(g, 0))))
        .collect();
    let mut report = CheckReport::new("borcherds");
    for (na, a) in &gens {
        for (nb, b) in &gens {
            for (nc, c) in &gens {
                for m in -range..=range {
                    for n in -range..=range {
                        for q in -range..=range {
                            report.cases += 1;
                            let r = borcherds_identity_check(va, a, b, c, m, n, q)?;
                            if !r.passed() {
                                report.failures.push(CheckFailure {
                                    location: format!(
                                        "({na}, {nb}, {nc}) at (m, n, q) = ({m}, {n}, {q})"
                                    ),
                                    details: vec![format!(
                                        "lhs {}, rhs {}, difference {}",
                                        va.render(&r.lhs),
                                        va.render(&r.rhs),
                                        va.render(&r.difference())
                                    )],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
