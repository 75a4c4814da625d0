use std::fmt;

use serde_json::{json, Value};

use super::{AlgebraPresentation, ConformalElement, SymbolId, LAMBDA, MU};
use crate::linear::BracketPoly;
use crate::scalar::{Rational, Scalar};

/// One failing case of an axiom check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckFailure {
    /// The generators involved, e.g. `[L, L]` or `(G, G, L)`.
    pub location: String,
    /// One line per differing coefficient.
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub cases: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "cases": self.cases,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({
                "location": f.location,
                "details": f.details,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: PASS ({} cases)", self.check, self.cases);
        }
        write!(
            f,
            "{}: FAIL ({} of {} cases)",
            self.check,
            self.failures.len(),
            self.cases
        )?;
        for fail in &self.failures {
            write!(f, "\n  {}", fail.location)?;
            for d in &fail.details {
                write!(f, "\n    {d}")?;
            }
        }
        Ok(())
    }
}

fn describe_difference(
    alg: &AlgebraPresentation,
    lhs: &BracketPoly<ConformalElement>,
    rhs: &BracketPoly<ConformalElement>,
) -> Vec<String> {
    let diff = lhs.sub(rhs);
    diff.terms()
        .map(|(e, c)| {
            let degree = lhs
                .vars()
                .iter()
                .zip(e)
                .map(|(v, k)| format!("{v}^{k}"))
                .collect::<Vec<_>>()
                .join("*");
            format!(
                "at {degree}: lhs {}, rhs {}, difference {}",
                alg.render_element(&lhs.coeff(e)),
                alg.render_element(&rhs.coeff(e)),
                alg.render_element(c)
            )
        })
        .collect()
}

/// `[b_lambda a] = -p(a,b) [a_{-lambda-d} b]` for every ordered generator pair.
pub fn check_skew(alg: &AlgebraPresentation) -> CheckReport {
    let mut report = CheckReport::new("skew");
    let gens: Vec<SymbolId> = alg.generators().collect();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i..] {
            report.cases += 1;
            let (xa, xb) = (alg.element(a), alg.element(b));
            let ab = alg
                .lambda_bracket(&xa, &xb)
                .expect("generators are homogeneous");
            let ba = alg
                .lambda_bracket(&xb, &xa)
                .expect("generators are homogeneous");
            let sign = -alg.parity(a).sign(alg.parity(b));
            let rhs = alg.substitute_skew(&ab).scale(&Scalar::from_int(sign));
            if ba != rhs {
                report.failures.push(CheckFailure {
                    location: format!("[{}, {}]", alg.symbol(b).name, alg.symbol(a).name),
                    details: describe_difference(alg, &ba, &rhs),
                });
            }
        }
    }
    report
}

/// Left-hand side `[a_lambda [b_mu c]]` as a polynomial in `(lambda, mu)`.
pub(crate) fn nested_left(
    alg: &AlgebraPresentation,
    a: &ConformalElement,
    b: &ConformalElement,
    c: &ConformalElement,
) -> BracketPoly<ConformalElement> {
    let mut out = BracketPoly::zero(&[LAMBDA, MU]);
    let inner = alg.lambda_bracket(b, c).expect("homogeneous");
    for (e, x) in inner.terms() {
        let outer = alg.lambda_bracket(a, x).expect("homogeneous");
        out.add_assign_poly(&outer.embed(&[LAMBDA, MU]).shift(&[0, e[0]]));
    }
    out
}

/// `[[a_lambda b]_{lambda+mu} c]`.
pub(crate) fn nested_middle(
    alg: &AlgebraPresentation,
    a: &ConformalElement,
    b: &ConformalElement,
    c: &ConformalElement,
) -> BracketPoly<ConformalElement> {
    let one = Rational::from_integer(1.into());
    let mut out = BracketPoly::zero(&[LAMBDA, MU]);
    let inner = alg.lambda_bracket(a, b).expect("homogeneous");
    for (e, x) in inner.terms() {
        let outer = alg.lambda_bracket(x, c).expect("homogeneous");
        let sub = outer.substitute_linear(&[LAMBDA, MU], &[one.clone(), one.clone()]);
        out.add_assign_poly(&sub.shift(&[e[0], 0]));
    }
    out
}

/// `[b_mu [a_lambda c]]`, without the sign.
pub(crate) fn nested_right(
    alg: &AlgebraPresentation,
    a: &ConformalElement,
    b: &ConformalElement,
    c: &ConformalElement,
) -> BracketPoly<ConformalElement> {
    let mut out = BracketPoly::zero(&[LAMBDA, MU]);
    let inner = alg.lambda_bracket(a, c).expect("homogeneous");
    for (e, x) in inner.terms() {
        let outer = alg.lambda_bracket(b, x).expect("homogeneous").rename(&[MU]);
        out.add_assign_poly(&outer.embed(&[LAMBDA, MU]).shift(&[e[0], 0]));
    }
    out
}

/// `[a_lambda [b_mu c]] = [[a_lambda b]_{lambda+mu} c] + p(a,b) [b_mu [a_lambda c]]`
/// on every generator triple.
pub fn check_jacobi(alg: &AlgebraPresentation) -> CheckReport {
    let mut report = CheckReport::new("jacobi");
    let gens: Vec<SymbolId> = alg.generators().collect();
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                report.cases += 1;
                let (xa, xb, xc) = (alg.element(a), alg.element(b), alg.element(c));
                let lhs = nested_left(alg, &xa, &xb, &xc);
                let sign = Scalar::from_int(alg.parity(a).sign(alg.parity(b)));
                let mut rhs = nested_middle(alg, &xa, &xb, &xc);
                rhs.add_assign_poly(&nested_right(alg, &xa, &xb, &xc).scale(&sign));
                if lhs != rhs {
                    report.failures.push(CheckFailure {
                        location: format!(
                            "({}, {}, {})",
                            alg.symbol(a).name,
                            alg.symbol(b).name,
                            alg.symbol(c).name
                        ),
                        details: describe_difference(alg, &lhs, &rhs),
                    });
                }
            }
        }
    }
    report
}
