//! Fourier modes of a Lie conformal algebra and their commutators.
//!
//! Modes come in two indexings: shifted `a_(n)` and weight-indexed
//! `a_m = a_(m + Delta_a - 1)`. Indices are scalars, so symbolic indices such
//! as `m + n` are supported. Kronecker deltas in central terms are kept as
//! `delta(arg,0)` and evaluated as soon as `arg` is a number.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lie_conformal::{
    latex_name, render_lincomb, sign_pow, split_sign, AlgebraPresentation, CheckFailure,
    CheckReport, Parity, SymbolId,
};
use crate::linear::{Coefficient, LinComb};
use crate::scalar::{factorial, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indexing {
    Shifted,
    Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeSymbol {
    pub gen: SymbolId,
    pub index: Scalar,
    pub indexing: Indexing,
}

impl ModeSymbol {
    /// Build a mode, checking `index + Delta` is an integer for concrete
    /// weight-indexed modes.
    pub fn new(
        alg: &AlgebraPresentation,
        gen: SymbolId,
        index: Scalar,
        indexing: Indexing,
    ) -> Result<Self> {
        if indexing == Indexing::Weight {
            let w = alg.weight(gen)?;
            if let Some(r) = index.as_rational() {
                if !(r.clone() + w.clone()).is_integer() {
                    return Err(Error::IndexWeightMismatch {
                        generator: alg.symbol(gen).name.clone(),
                        index: r.to_string(),
                        weight: w.to_string(),
                    });
                }
            }
        }
        Ok(ModeSymbol {
            gen,
            index,
            indexing,
        })
    }

    pub fn shifted(gen: SymbolId, index: Scalar) -> Self {
        ModeSymbol {
            gen,
            index,
            indexing: Indexing::Shifted,
        }
    }

    pub fn to_shifted(&self, alg: &AlgebraPresentation) -> Result<ModeSymbol> {
        match self.indexing {
            Indexing::Shifted => Ok(self.clone()),
            Indexing::Weight => {
                let w = alg.weight(self.gen)?;
                let idx = &self.index + &Scalar::from(w - Rational::from_integer(1.into()));
                Ok(ModeSymbol::shifted(self.gen, idx))
            }
        }
    }

    pub fn to_weight(&self, alg: &AlgebraPresentation) -> Result<ModeSymbol> {
        match self.indexing {
            Indexing::Weight => Ok(self.clone()),
            Indexing::Shifted => {
                let w = alg.weight(self.gen)?;
                let idx = &self.index - &Scalar::from(w - Rational::from_integer(1.into()));
                Ok(ModeSymbol {
                    gen: self.gen,
                    index: idx,
                    indexing: Indexing::Weight,
                })
            }
        }
    }

    pub fn render(&self, alg: &AlgebraPresentation) -> String {
        let name = &alg.symbol(self.gen).name;
        let idx = self.index.to_string();
        match self.indexing {
            Indexing::Shifted => format!("{name}_({idx})"),
            Indexing::Weight => match self.index.as_integer() {
                Some(n) if n >= 0 => format!("{name}_{n}"),
                _ => format!("{name}_{{{idx}}}"),
            },
        }
    }

    pub fn latex(&self, alg: &AlgebraPresentation) -> String {
        let name = latex_name(&alg.symbol(self.gen).name);
        let idx = self.index.to_latex();
        match self.indexing {
            Indexing::Shifted => format!("{name}_{{({idx})}}"),
            Indexing::Weight => format!("{name}_{{{idx}}}"),
        }
    }
}

/// Linear combination of modes plus central terms `coeff * delta(arg,0) * C`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeExpression {
    terms: LinComb<ModeSymbol>,
    /// Keyed by (central, delta argument); argument zero means no delta.
    central: LinComb<(SymbolId, Scalar)>,
}

impl ModeExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mode(sym: ModeSymbol, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.terms.add_term(sym, c);
        out
    }

    pub fn add_mode(&mut self, sym: ModeSymbol, c: Scalar) {
        self.terms.add_term(sym, c);
    }

    /// Add `c * delta(arg,0) * central`.
    pub fn add_central(&mut self, central: SymbolId, arg: &Scalar, c: Scalar) {
        match arg.as_rational() {
            Some(r) if !num_traits::Zero::is_zero(&r) => {}
            Some(_) => self.central.add_term((central, Scalar::zero()), c),
            None => self.central.add_term((central, arg.sign_normalized()), c),
        }
    }

    pub fn terms(&self) -> &LinComb<ModeSymbol> {
        &self.terms
    }

    pub fn central(&self) -> &LinComb<(SymbolId, Scalar)> {
        &self.central
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_empty()
    }

    pub fn add_assign(&mut self, other: &ModeExpression) {
        self.terms.add_assign_ref(&other.terms);
        self.central.add_assign_ref(&other.central);
    }

    pub fn scale(&self, s: &Scalar) -> ModeExpression {
        ModeExpression {
            terms: self.terms.scale(s),
            central: self.central.scale(s),
        }
    }

    pub fn sub(&self, other: &ModeExpression) -> ModeExpression {
        let mut out = self.clone();
        out.add_assign(&other.scale(&Scalar::from_int(-1)));
        out
    }

    /// Substitute a value for a symbolic index parameter everywhere,
    /// evaluating deltas that become concrete.
    pub fn substitute(&self, name: &str, value: &Scalar) -> ModeExpression {
        let mut out = ModeExpression::zero();
        for (m, c) in self.terms.iter() {
            let sym = ModeSymbol {
                index: m.index.substitute(name, value),
                ..m.clone()
            };
            out.add_mode(sym, c.substitute(name, value));
        }
        for ((k, arg), c) in self.central.iter() {
            out.add_central(*k, &arg.substitute(name, value), c.substitute(name, value));
        }
        out
    }

    pub fn map_modes(
        &self,
        mut f: impl FnMut(&ModeSymbol) -> Result<ModeSymbol>,
    ) -> Result<ModeExpression> {
        let mut out = ModeExpression {
            terms: LinComb::new(),
            central: self.central.clone(),
        };
        for (m, c) in self.terms.iter() {
            out.add_mode(f(m)?, c.clone());
        }
        Ok(out)
    }

    pub fn render(&self, alg: &AlgebraPresentation) -> String {
        let mut items: Vec<(String, Scalar)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.render(alg), c.clone()))
            .collect();
        for ((k, arg), c) in self.central.iter() {
            let name = alg.symbol(*k).name.clone();
            if arg.is_zero() {
                items.push((name, c.clone()));
            } else {
                let (neg, mag) = split_sign(c);
                let body = if mag.is_one() {
                    format!("delta({arg},0)*{name}")
                } else {
                    format!("delta({arg},0)*({mag})*{name}")
                };
                let sign = if neg { -Scalar::one() } else { Scalar::one() };
                items.push((body, sign));
            }
        }
        render_lincomb(items)
    }

    pub fn latex(&self, alg: &AlgebraPresentation) -> String {
        let mut items: Vec<(String, Scalar)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.latex(alg), c.clone()))
            .collect();
        for ((k, arg), c) in self.central.iter() {
            let name = latex_name(&alg.symbol(*k).name);
            if arg.is_zero() {
                items.push((name, c.clone()));
            } else {
                items.push((
                    format!("\\delta_{{{},0}} {name}", arg.to_latex()),
                    c.clone(),
                ));
            }
        }
        crate::lie_conformal::latex_lincomb(items)
    }

    pub fn to_json(&self, alg: &AlgebraPresentation) -> Value {
        json!({
            "modes": self.terms.iter().map(|(m, c)| json!({
                "generator": alg.symbol(m.gen).name,
                "index": m.index.to_string(),
                "indexing": match m.indexing { Indexing::Shifted => "shifted", Indexing::Weight => "weight" },
                "coefficient": c.to_string(),
            })).collect::<Vec<_>>(),
            "central": self.central.iter().map(|((k, arg), c)| json!({
                "central": alg.symbol(*k).name,
                "delta_argument": arg.to_string(),
                "coefficient": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `(d^k g)_(n) = (-1)^k binom(n,k) k! g_(n-k)`; a central `C` has
/// `C_(n) = delta(n+1,0) C` and vanishing derivatives.
pub fn normalize_derivative_mode(
    alg: &AlgebraPresentation,
    g: SymbolId,
    k: u32,
    n: &Scalar,
) -> ModeExpression {
    let mut out = ModeExpression::zero();
    if alg.is_central(g) {
        if k == 0 {
            out.add_central(g, &(n + &Scalar::one()), Scalar::one());
        }
        return out;
    }
    let coef = n.binom(k).scale(&(sign_pow(k) * factorial(k)));
    let idx = n - &Scalar::from_int(i64::from(k));
    out.add_mode(ModeSymbol::shifted(g, idx), coef);
    out
}

/// `[a_(m), b_(n)] = sum_j binom(m,j) (a_(j) b)_(m+n-j)`, or the
/// weight-indexed version, with derivative modes normalized.
pub fn commute(
    alg: &AlgebraPresentation,
    a: &ModeSymbol,
    b: &ModeSymbol,
) -> Result<ModeExpression> {
    if a.indexing != b.indexing {
        return Err(Error::IndexingMismatch);
    }
    let (sa, sb) = (a.to_shifted(alg)?, b.to_shifted(alg)?);
    let (m, n) = (&sa.index, &sb.index);
    let mut out = ModeExpression::zero();
    for (j, prod) in alg.j_products(&alg.element(a.gen), &alg.element(b.gen))? {
        let coef = m.binom(j);
        if coef.is_zero() {
            continue;
        }
        let idx = &(m + n) - &Scalar::from_int(i64::from(j));
        for (atom, c) in prod.iter() {
            let norm = normalize_derivative_mode(alg, atom.sym, atom.d, &idx);
            out.add_assign(&norm.scale(&(&coef * c)));
        }
    }
    match a.indexing {
        Indexing::Shifted => Ok(out),
        Indexing::Weight => out.map_modes(|s| s.to_weight(alg)),
    }
}

/// The mode commutator `[a_m, b_n]` for generators given by id.
pub fn mode_commutator(
    alg: &AlgebraPresentation,
    a: SymbolId,
    m: Scalar,
    b: SymbolId,
    n: Scalar,
    indexing: Indexing,
) -> Result<ModeExpression> {
    let x = ModeSymbol::new(alg, a, m, indexing)?;
    let y = ModeSymbol::new(alg, b, n, indexing)?;
    commute(alg, &x, &y)
}

/// A super-bracket on modes, so corrupted brackets can be checked too.
pub trait ModeBracket {
    fn bracket(&self, a: &ModeSymbol, b: &ModeSymbol) -> Result<ModeExpression>;
    fn parity(&self, gen: SymbolId) -> Parity;
}

impl ModeBracket for AlgebraPresentation {
    fn bracket(&self, a: &ModeSymbol, b: &ModeSymbol) -> Result<ModeExpression> {
        commute(self, a, b)
    }

    fn parity(&self, gen: SymbolId) -> Parity {
        AlgebraPresentation::parity(self, gen)
    }
}

fn bracket_left(
    br: &dyn ModeBracket,
    x: &ModeExpression,
    c: &ModeSymbol,
) -> Result<ModeExpression> {
    let mut out = ModeExpression::zero();
    for (m, k) in x.terms().iter() {
        out.add_assign(&br.bracket(m, c)?.scale(k));
    }
    Ok(out)
}

fn bracket_right(
    br: &dyn ModeBracket,
    a: &ModeSymbol,
    x: &ModeExpression,
) -> Result<ModeExpression> {
    let mut out = ModeExpression::zero();
    for (m, k) in x.terms().iter() {
        out.add_assign(&br.bracket(a, m)?.scale(k));
    }
    Ok(out)
}

/// All modes of the generators with index in `[-range, range]`: weight
/// indexed when every generator has a weight (half-integer grids included),
/// shifted otherwise.
pub fn mode_grid(alg: &AlgebraPresentation, range: i64) -> Vec<ModeSymbol> {
    let gens: Vec<SymbolId> = alg.generators().collect();
    let weighted = gens.iter().all(|g| alg.symbol(*g).weight.is_some());
    let mut out = Vec::new();
    for g in gens {
        if weighted {
            // indices k with k + Delta an integer
            let neg = -alg.weight(g).expect("checked");
            let offset = neg.clone() - neg.floor();
            for k in -range - 1..=range {
                let idx = Rational::from_integer(k.into()) + offset.clone();
                let lo = Rational::from_integer((-range).into());
                let hi = Rational::from_integer(range.into());
                if idx >= lo && idx <= hi {
                    out.push(ModeSymbol {
                        gen: g,
                        index: Scalar::from(idx),
                        indexing: Indexing::Weight,
                    });
                }
            }
        } else {
            for k in -range..=range {
                out.push(ModeSymbol::shifted(g, Scalar::from_int(k)));
            }
        }
    }
    out
}

/// Graded antisymmetry and Jacobi on every pair and triple of modes.
pub fn verify_mode_jacobi_with(
    br: &dyn ModeBracket,
    alg: &AlgebraPresentation,
    modes: &[ModeSymbol],
) -> Result<CheckReport> {
    let mut report = CheckReport::new("mode-jacobi");
    for a in modes {
        for b in modes {
            report.cases += 1;
            let sign = Scalar::from_int(-br.parity(a.gen).sign(br.parity(b.gen)));
            let ab = br.bracket(a, b)?;
            let ba = br.bracket(b, a)?.scale(&sign);
            if ab != ba {
                report.failures.push(CheckFailure {
                    location: format!("antisymmetry [{}, {}]", a.render(alg), b.render(alg)),
                    details: vec![format!(
                        "lhs {}, rhs {}, difference {}",
                        ab.render(alg),
                        ba.render(alg),
                        ab.sub(&ba).render(alg)
                    )],
                });
            }
        }
    }
    for a in modes {
        for b in modes {
            let ab = br.bracket(a, b)?;
            let sign = Scalar::from_int(br.parity(a.gen).sign(br.parity(b.gen)));
            for c in modes {
                report.cases += 1;
                let lhs = bracket_right(br, a, &br.bracket(b, c)?)?;
                let mut rhs = bracket_left(br, &ab, c)?;
                rhs.add_assign(&bracket_right(br, b, &br.bracket(a, c)?)?.scale(&sign));
                if lhs != rhs {
                    report.failures.push(CheckFailure {
                        location: format!(
                            "jacobi ({}, {}, {})",
                            a.render(alg),
                            b.render(alg),
                            c.render(alg)
                        ),
                        details: vec![format!(
                            "lhs {}, rhs {}, difference {}",
                            lhs.render(alg),
                            rhs.render(alg),
                            lhs.sub(&rhs).render(alg)
                        )],
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn verify_mode_jacobi(alg: &AlgebraPresentation, range: i64) -> Result<CheckReport> {
    if range < 1 {
        return Err(Error::InvalidArgument("range must be at least 1".into()));
    }
    verify_mode_jacobi_with(alg, alg, &mode_grid(alg, range))
}
