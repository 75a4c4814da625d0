use std::collections::BTreeMap;

use super::{AlgebraPresentation, Atom, ConformalElement, Parity, SymbolId, LAMBDA};
use crate::error::{Error, Result};
use crate::linear::BracketPoly;
use crate::scalar::{rat, Scalar};

/// Gram matrix of a bilinear form on a finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm(pub Vec<Vec<Scalar>>);

impl BilinearForm {
    pub fn identity(n: usize) -> Self {
        BilinearForm(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Scalar::from_int(i64::from(i == j)))
                        .collect()
                })
                .collect(),
        )
    }

    fn get(&self, i: usize, j: usize) -> Scalar {
        self.0[i][j].clone()
    }

    fn check_shape(&self, n: usize) -> Result<()> {
        if self.0.len() != n || self.0.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidForm(format!("expected a {n}x{n} matrix")));
        }
        Ok(())
    }
}

/// Structure constants of a finite-dimensional Lie superalgebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LieTable {
    pub basis: Vec<(String, Parity)>,
    /// `[e_i, e_j] = sum_k c_k e_k`; the mirrored entry is implied.
    pub brackets: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl LieTable {
    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.basis.len();
        let mut out = vec![Scalar::zero(); n];
        if let Some(v) = self.brackets.get(&(i, j)) {
            for (k, c) in v {
                out[*k] += c;
            }
        } else if let Some(v) = self.brackets.get(&(j, i)) {
            let sign = -self.basis[i].1.sign(self.basis[j].1);
            for (k, c) in v {
                out[*k] += &c.scale(&rat(sign, 1));
            }
        }
        out
    }

    fn bracket_vec(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.basis.len()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, d) in self.bracket(i, j).iter().enumerate() {
                out[k] += &(c * d);
            }
        }
        out
    }

    fn vec_bracket(&self, v: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.basis.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, d) in self.bracket(i, j).iter().enumerate() {
                out[k] += &(c * d);
            }
        }
        out
    }

    /// Super skew-symmetry of explicitly given mirror pairs, parity of every
    /// bracket, and the super Jacobi identity.
    pub fn validate(&self) -> Result<()> {
        let n = self.basis.len();
        for ((i, j), v) in &self.brackets {
            if *i >= n || *j >= n || v.iter().any(|(k, _)| *k >= n) {
                return Err(Error::NotLie("basis index out of range".into()));
            }
            let expected = self.basis[*i].1 + self.basis[*j].1;
            for (k, c) in v {
                if !c.is_zero() && self.basis[*k].1 != expected {
                    return Err(Error::NotLie(format!(
                        "[{}, {}] is not parity-consistent",
                        self.basis[*i].0, self.basis[*j].0
                    )));
                }
            }
            if self.brackets.contains_key(&(*j, *i)) && i != j {
                let forward = self.bracket(*i, *j);
                let sign = -self.basis[*i].1.sign(self.basis[*j].1);
                let back: Vec<Scalar> = self
                    .brackets
                    .get(&(*j, *i))
                    .map(|w| {
                        let mut o = vec![Scalar::zero(); n];
                        for (k, c) in w {
                            o[*k] += c;
                        }
                        o
                    })
                    .unwrap_or_default();
                if back
                    .iter()
                    .map(|c| c.scale(&rat(sign, 1)))
                    .collect::<Vec<_>>()
                    != forward
                {
                    return Err(Error::NotLie(format!(
                        "[{}, {}] is not skew-symmetric",
                        self.basis[*i].0, self.basis[*j].0
                    )));
                }
            }
        }
        for i in 0..n {
            let v = self.bracket(i, i);
            let sign = -self.basis[i].1.sign(self.basis[i].1);
            if sign == -1 && v.iter().any(|c| !c.is_zero()) {
                return Err(Error::NotLie(format!(
                    "[{0}, {0}] must vanish for an even element",
                    self.basis[i].0
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.bracket_vec(a, &self.bracket(b, c));
                    let first = self.vec_bracket(&self.bracket(a, b), c);
                    let second = self.bracket_vec(b, &self.bracket(a, c));
                    let sign = Scalar::from_int(self.basis[a].1.sign(self.basis[b].1));
                    let ok = (0..n).all(|k| lhs[k] == &first[k] + &(&sign * &second[k]));
                    if !ok {
                        return Err(Error::NotLie(format!(
                            "Jacobi identity fails on ({}, {}, {})",
                            self.basis[a].0, self.basis[b].0, self.basis[c].0
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `sl_2` with basis `e, h, f`.
    pub fn sl2() -> Self {
        let basis = ["e", "h", "f"]
            .iter()
            .map(|s| (s.to_string(), Parity::Even))
            .collect();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![(0, Scalar::from_int(-2))]);
        brackets.insert((0, 2), vec![(1, Scalar::one())]);
        brackets.insert((1, 2), vec![(2, Scalar::from_int(-2))]);
        LieTable { basis, brackets }
    }
}

fn atom_elem(id: SymbolId, c: Scalar) -> ConformalElement {
    ConformalElement::single(Atom::new(id, 0), c)
}

fn check_form(basis: &[(String, Parity)], form: &BilinearForm, anti: bool) -> Result<()> {
    form.check_shape(basis.len())?;
    for (i, (ni, pi)) in basis.iter().enumerate() {
        for (j, (nj, pj)) in basis.iter().enumerate() {
            let fij = form.get(i, j);
            let fji = form.get(j, i);
            if !fij.is_zero() && pi != pj {
                return Err(Error::InvalidForm(format!(
                    "({ni}|{nj}) pairs vectors of different parity"
                )));
            }
            // supersymmetric: (a|b) = (-1)^p(a) (b|a); antisupersymmetric adds a sign
            let mut sign = if pi.is_odd() { -1 } else { 1 };
            if anti {
                sign = -sign;
            }
            if fij != fji.scale(&rat(sign, 1)) {
                let kind = if anti {
                    "antisupersymmetric"
                } else {
                    "supersymmetric"
                };
                return Err(Error::InvalidForm(format!(
                    "form is not {kind} on the pair ({ni}, {nj})"
                )));
            }
        }
    }
    Ok(())
}

pub fn virasoro() -> AlgebraPresentation {
    let mut alg = AlgebraPresentation::new("virasoro");
    alg.add_param("c").expect("fresh");
    let l = alg
        .add_generator("L", Parity::Even, Some(rat(2, 1)))
        .expect("fresh");
    let c = alg
        .add_central("C", Some(Scalar::param("c")))
        .expect("fresh");
    alg.set_bracket(l, l, virasoro_ll(l, c)).expect("valid");
    alg
}

fn virasoro_ll(l: SymbolId, c: SymbolId) -> BracketPoly<ConformalElement> {
    BracketPoly::univariate(
        LAMBDA,
        [
            (0, ConformalElement::single(Atom::new(l, 1), Scalar::one())),
            (1, atom_elem(l, Scalar::from_int(2))),
            (3, atom_elem(c, Scalar::from_frac(1, 12))),
        ],
    )
}

pub fn neveu_schwarz() -> AlgebraPresentation {
    let mut alg = AlgebraPresentation::new("neveu_schwarz");
    alg.add_param("c").expect("fresh");
    let l = alg
        .add_generator("L", Parity::Even, Some(rat(2, 1)))
        .expect("fresh");
    let g = alg
        .add_generator("G", Parity::Odd, Some(rat(3, 2)))
        .expect("fresh");
    let c = alg
        .add_central("C", Some(Scalar::param("c")))
        .expect("fresh");
    alg.set_bracket(l, l, virasoro_ll(l, c)).expect("valid");
    let lg = BracketPoly::univariate(
        LAMBDA,
        [
            (0, ConformalElement::single(Atom::new(g, 1), Scalar::one())),
            (1, atom_elem(g, Scalar::from_frac(3, 2))),
        ],
    );
    alg.set_bracket(l, g, lg).expect("valid");
    let gg = BracketPoly::univariate(
        LAMBDA,
        [
            (0, atom_elem(l, Scalar::one())),
            (2, atom_elem(c, Scalar::from_frac(1, 6))),
        ],
    );
    alg.set_bracket(g, g, gg).expect("valid");
    alg
}

/// Current algebra `[a_lambda b] = [a,b] + (a|b) lambda K` over a Lie
/// superalgebra with a supersymmetric invariant form. `K` is left unpinned.
pub fn current(name: &str, g: &LieTable, form: &BilinearForm) -> Result<AlgebraPresentation> {
    g.validate()?;
    check_form(&g.basis, form, false)?;
    let mut alg = AlgebraPresentation::new(name);
    let ids = add_basis(&mut alg, &g.basis, rat(1, 1))?;
    let k = alg.add_central("K", None)?;
    for i in 0..ids.len() {
        for j in i..ids.len() {
            let mut p = BracketPoly::zero(&[LAMBDA]);
            let mut zeroth = ConformalElement::new();
            for (m, c) in g.bracket(i, j).into_iter().enumerate() {
                zeroth.add_term(Atom::new(ids[m], 0), c);
            }
            p.add_term(vec![0], zeroth);
            p.add_term(vec![1], atom_elem(k, form.get(i, j)));
            if !p.is_zero() {
                alg.set_bracket(ids[i], ids[j], p)?;
            }
        }
    }
    alg.validate()?;
    Ok(alg)
}

fn add_basis(
    alg: &mut AlgebraPresentation,
    basis: &[(String, Parity)],
    weight: crate::scalar::Rational,
) -> Result<Vec<SymbolId>> {
    basis
        .iter()
        .map(|(n, p)| alg.add_generator(n, *p, Some(weight.clone())))
        .collect()
}

/// Free fermions `[a_lambda b] = <a,b> K` for an antisupersymmetric form;
/// `K` is pinned to the vacuum.
pub fn free_fermion(
    basis: &[(String, Parity)],
    form: &BilinearForm,
) -> Result<AlgebraPresentation> {
    check_form(basis, form, true)?;
    let mut alg = AlgebraPresentation::new("free_fermion");
    let ids = add_basis(&mut alg, basis, rat(1, 2))?;
    let k = alg.add_central("K", Some(Scalar::one()))?;
    for i in 0..ids.len() {
        for j in i..ids.len() {
            let f = form.get(i, j);
            if !f.is_zero() {
                alg.set_bracket(
                    ids[i],
                    ids[j],
                    BracketPoly::constant(&[LAMBDA], atom_elem(k, f)),
                )?;
            }
        }
    }
    alg.validate()?;
    Ok(alg)
}

/// Free bosons `[a_lambda b] = (a|b) lambda K` for a supersymmetric form.
pub fn free_boson(basis: &[(String, Parity)], form: &BilinearForm) -> Result<AlgebraPresentation> {
    check_form(basis, form, false)?;
    let mut alg = AlgebraPresentation::new("free_boson");
    let ids = add_basis(&mut alg, basis, rat(1, 1))?;
    let k = alg.add_central("K", None)?;
    for i in 0..ids.len() {
        for j in i..ids.len() {
            let f = form.get(i, j);
            if !f.is_zero() {
                alg.set_bracket(
                    ids[i],
                    ids[j],
                    BracketPoly::univariate(LAMBDA, [(1, atom_elem(k, f))]),
                )?;
            }
        }
    }
    alg.validate()?;
    Ok(alg)
}

/// Free fermions on `even` even and `odd` odd vectors `phi1, phi2, ...`.
/// The even part carries the standard symplectic form (so `even` must be
/// even) and the odd part the identity form.
pub fn superfermion(even: usize, odd: usize) -> Result<AlgebraPresentation> {
    if !even.is_multiple_of(2) {
        return Err(Error::InvalidForm(
            "an antisupersymmetric form on an odd-dimensional even space is degenerate".into(),
        ));
    }
    let n = even + odd;
    let basis: Vec<(String, Parity)> = (0..n)
        .map(|i| {
            let p = if i < even { Parity::Even } else { Parity::Odd };
            (format!("phi{}", i + 1), p)
        })
        .collect();
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for i in (0..even).step_by(2) {
        m[i][i + 1] = Scalar::one();
        m[i + 1][i] = Scalar::from_int(-1);
    }
    for (i, row) in m.iter_mut().enumerate().skip(even) {
        row[i] = Scalar::one();
    }
    free_fermion(&basis, &BilinearForm(m))
}
