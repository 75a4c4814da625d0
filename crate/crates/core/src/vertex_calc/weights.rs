//! Conformal weights, primary fields and the free-fermion Virasoro element.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{VertexAlgebra, VertexElement};
use crate::error::{Error, Result};
use crate::lie_conformal::{AlgebraPresentation, Atom, SymbolId};
use crate::linear::{BracketPoly, Coefficient};
use crate::mode_algebra::{Indexing, ModeExpression, ModeSymbol};
use crate::scalar::{Rational, Scalar};

/// Conformal weight of each symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightTable(pub BTreeMap<SymbolId, Rational>);

impl WeightTable {
    /// Declared weights of a presentation; centrals have weight 0.
    pub fn from_presentation(alg: &AlgebraPresentation) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (id, sym) in alg.symbols().iter().enumerate() {
            let w = if sym.is_central() {
                Rational::zero()
            } else {
                alg.weight(id)?
            };
            map.insert(id, w);
        }
        Ok(WeightTable(map))
    }

    pub fn get(&self, id: SymbolId) -> Option<&Rational> {
        self.0.get(&id)
    }

    pub fn atom_weight(&self, a: &Atom) -> Option<Rational> {
        self.get(a.sym)
            .map(|w| w + Rational::from_integer(a.d.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightResult {
    Weight(Rational),
    Inhomogeneous,
    Zero,
}

/// Weight of an element: the sum over atoms of `Delta + d`, if common.
pub fn weight(x: &VertexElement, tbl: &WeightTable) -> Result<WeightResult> {
    let mut found: Option<Rational> = None;
    for (w, _) in x.iter() {
        let mut total = Rational::zero();
        for a in w {
            total += tbl
                .atom_weight(a)
                .ok_or_else(|| Error::MissingWeight(format!("#{}", a.sym)))?;
        }
        match &found {
            Some(f) if *f != total => return Ok(WeightResult::Inhomogeneous),
            _ => found = Some(total),
        }
    }
    Ok(found.map_or(WeightResult::Zero, WeightResult::Weight))
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrimaryClass {
    /// `[L_lambda a] = (T + Delta lambda) a`.
    Primary(Scalar),
    /// Eigen of weight `Delta` with the listed terms of degree at least 2.
    Eigen(Scalar, BracketPoly<VertexElement>),
    Neither,
}

/// Compare `[L_lambda a]` with `(T + Delta lambda) a`.
pub fn primary_check(
    va: &VertexAlgebra,
    a: &VertexElement,
    l: &VertexElement,
) -> Result<PrimaryClass> {
    let br = va.bracket(l, a)?;
    if a.is_zero() || br.coeff1(0) != va.translate(a)? {
        return Ok(PrimaryClass::Neither);
    }
    let Some(delta) = proportion(&br.coeff1(1), a) else {
        return Ok(PrimaryClass::Neither);
    };
    let mut tail = BracketPoly::zero_like(br.vars());
    for (e, c) in br.terms() {
        if e[0] >= 2 {
            tail.add_term(e.clone(), c.clone());
        }
    }
    Ok(if tail.is_zero() {
        PrimaryClass::Primary(delta)
    } else {
        PrimaryClass::Eigen(delta, tail)
    })
}

/// `s` with `x = s * a`, when `s` is a constant.
fn proportion(x: &VertexElement, a: &VertexElement) -> Option<Scalar> {
    let (w, c) = a.iter().next()?;
    let ratio = x.get(w).as_rational()? / c.as_rational()?;
    let s = Scalar::from(ratio);
    (a.scale(&s) == *x).then_some(s)
}

/// `[L_m, a_n] = (m (Delta - 1) - n) a_(m+n)` for a primary generator `a`,
/// in weight indexing.
pub fn mode_of_primary(
    va: &VertexAlgebra,
    l: &VertexElement,
    gen: SymbolId,
    m: &Scalar,
    n: &Scalar,
) -> Result<ModeExpression> {
    let alg = va.presentation();
    let a = va.atom(Atom::new(gen, 0));
    let PrimaryClass::Primary(delta) = primary_check(va, &a, l)? else {
        return Err(Error::NotPrimary(alg.symbol(gen).name.clone()));
    };
    let coef = &(m * &(&delta - &Scalar::one())) - n;
    let sym = ModeSymbol::new(alg, gen, m + n, Indexing::Weight)?;
    Ok(ModeExpression::mode(sym, coef))
}

/// `L = 1/2 sum_i :T phi^i phi_i:` over a free-fermion presentation, with
/// `phi_i` the dual basis, paired on the left: `[phi_i lambda phi^j] = delta_ij`.
pub fn superfermion_virasoro(va: &VertexAlgebra) -> Result<VertexElement> {
    let alg = va.presentation();
    let gens: Vec<SymbolId> = alg.generators().collect();
    let n = gens.len();
    let mut g = vec![vec![Rational::zero(); n]; n];
    for (i, &a) in gens.iter().enumerate() {
        for (j, &b) in gens.iter().enumerate() {
            let br = va.bracket(&va.atom(Atom::new(a, 0)), &va.atom(Atom::new(b, 0)))?;
            let c = br.coeff1(0);
            if br.degree().unwrap_or(0) > 0 || c.iter().any(|(w, _)| !w.is_empty()) {
                return Err(Error::InvalidArgument(
                    "generator brackets must be multiples of the vacuum".into(),
                ));
            }
            g[i][j] = c.get(&Vec::new()).as_rational().ok_or_else(|| {
                Error::InvalidArgument("the pairing must have numeric entries".into())
            })?;
        }
    }
    // phi_i = sum_j dual[i][j] phi^j satisfies [phi_i lambda phi^k] = delta_ik
    let dual = invert(&g)?;
    let mut out = VertexElement::new();
    let half = Scalar::from_frac(1, 2);
    for (i, &a) in gens.iter().enumerate() {
        let da = va.atom(Atom::new(a, 1));
        for (j, &b) in gens.iter().enumerate() {
            if dual[i][j].is_zero() {
                continue;
            }
            let prod = va.normal_product(&da, &va.atom(Atom::new(b, 0)))?;
            out.add_assign_ref(&prod.scale(&half.scale(&dual[i][j])));
        }
    }
    Ok(out)
}

/// Gauss-Jordan inverse over the rationals.
fn invert(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidForm("the pairing is degenerate".into()))?;
        a.swap(col, pivot);
        let inv = Rational::one() / a[col][col].clone();
        for x in a[col].iter_mut() {
            *x *= inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot) {
                    *x -= p * f.clone();
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
