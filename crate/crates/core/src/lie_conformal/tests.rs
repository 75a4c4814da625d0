use proptest::prelude::*;

use super::checks::{nested_left, nested_middle, nested_right};
use super::*;
use crate::scalar::rat;

fn el(alg: &AlgebraPresentation, terms: &[(&str, u32, Scalar)]) -> ConformalElement {
    let mut out = ConformalElement::new();
    for (n, d, c) in terms {
        out.add_term(Atom::new(alg.lookup(n).unwrap(), *d), c.clone());
    }
    out
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn poly(terms: Vec<(u32, ConformalElement)>) -> BracketPoly<ConformalElement> {
    BracketPoly::univariate(LAMBDA, terms)
}

fn sl2_current() -> AlgebraPresentation {
    let form = BilinearForm(vec![
        vec![s(0), s(0), s(1)],
        vec![s(0), s(2), s(0)],
        vec![s(1), s(0), s(0)],
    ]);
    current("sl2", &LieTable::sl2(), &form).unwrap()
}

#[test]
fn virasoro_bracket() {
    let alg = virasoro();
    let l = alg.named("L").unwrap();
    let got = alg.lambda_bracket(&l, &l).unwrap();
    let want = poly(vec![
        (0, el(&alg, &[("L", 1, s(1))])),
        (1, el(&alg, &[("L", 0, s(2))])),
        (3, el(&alg, &[("C", 0, Scalar::from_frac(1, 12))])),
    ]);
    assert_eq!(got, want);
    assert_eq!(
        alg.render_bracket(&got),
        "d(L) + 2*lambda*L + 1/12*lambda^3*C"
    );
}

#[test]
fn derived_left_argument() {
    let alg = virasoro();
    let l = alg.named("L").unwrap();
    let dl = alg.derivative(&l, 1);
    let base = alg.lambda_bracket(&l, &l).unwrap();
    let got = alg.lambda_bracket(&dl, &l).unwrap();
    assert_eq!(got, base.shift(&[1]).scale(&s(-1)));
}

#[test]
fn ns_brackets() {
    let alg = neveu_schwarz();
    let (l, g) = (alg.named("L").unwrap(), alg.named("G").unwrap());
    let gl = alg.lambda_bracket(&g, &l).unwrap();
    assert_eq!(
        gl,
        poly(vec![
            (0, el(&alg, &[("G", 1, Scalar::from_frac(1, 2))])),
            (1, el(&alg, &[("G", 0, Scalar::from_frac(3, 2))])),
        ])
    );
    let gg = alg.lambda_bracket(&g, &g).unwrap();
    assert_eq!(
        gg,
        poly(vec![
            (0, el(&alg, &[("L", 0, s(1))])),
            (2, el(&alg, &[("C", 0, Scalar::from_frac(1, 6))])),
        ])
    );
}

#[test]
fn inhomogeneous_rejected() {
    let alg = neveu_schwarz();
    let x = el(&alg, &[("L", 0, s(1)), ("G", 0, s(1))]);
    assert!(matches!(
        alg.lambda_bracket(&x, &x),
        Err(Error::ParityInhomogeneous(_))
    ));
}

#[test]
fn skew_substitution_examples() {
    let alg = virasoro();
    let ll = alg
        .lambda_bracket(&alg.named("L").unwrap(), &alg.named("L").unwrap())
        .unwrap();
    // with the -p(L,L) prefactor the Virasoro bracket is its own mirror
    assert_eq!(alg.substitute_skew(&ll).scale(&s(-1)), ll);
    let k = el(&alg, &[("C", 0, s(1))]);
    assert_eq!(
        alg.substitute_skew(&poly(vec![(0, k.clone())])),
        poly(vec![(0, k.clone())])
    );
    assert_eq!(
        alg.substitute_skew(&poly(vec![(1, k.clone())])),
        poly(vec![(1, k.scale(&s(-1)))])
    );
}

#[test]
fn j_product_examples() {
    let alg = virasoro();
    let l = alg.named("L").unwrap();
    assert_eq!(
        alg.j_products(&l, &l).unwrap(),
        vec![
            (0, el(&alg, &[("L", 1, s(1))])),
            (1, el(&alg, &[("L", 0, s(2))])),
            (3, el(&alg, &[("C", 0, Scalar::from_frac(1, 2))])),
        ]
    );
    let ff = superfermion(0, 2).unwrap();
    let (p1, p2) = (ff.named("phi1").unwrap(), ff.named("phi2").unwrap());
    assert_eq!(
        ff.j_products(&p1, &p1).unwrap(),
        vec![(0, el(&ff, &[("K", 0, s(1))]))]
    );
    assert!(ff.j_products(&p1, &p2).unwrap().is_empty());
    let k = ff.named("K").unwrap();
    assert!(ff.j_products(&k, &p1).unwrap().is_empty());
}

#[test]
fn builtin_checks_pass() {
    for alg in [
        virasoro(),
        neveu_schwarz(),
        sl2_current(),
        superfermion(2, 1).unwrap(),
    ] {
        assert!(check_skew(&alg).passed(), "{}", check_skew(&alg));
        assert!(check_jacobi(&alg).passed(), "{}", check_jacobi(&alg));
    }
    assert_eq!(check_skew(&neveu_schwarz()).cases, 3);
}

#[test]
fn virasoro_jacobi_intermediate() {
    let alg = virasoro();
    let l = alg.named("L").unwrap();
    let left = nested_left(&alg, &l, &l, &l);
    // L-part of [L_lambda [L_mu L]]: (d^2 + (3 lambda + 2 mu) d + 2 lambda^2 + 4 lambda mu) L
    let lid = alg.lookup("L").unwrap();
    let mut got = BracketPoly::zero(&[LAMBDA, MU]);
    for (e, c) in left.terms() {
        let mut part = ConformalElement::new();
        for (a, x) in c.iter() {
            if a.sym == lid {
                part.add_term(*a, x.clone());
            }
        }
        got.add_term(e.clone(), part);
    }
    let mut want = BracketPoly::zero(&[LAMBDA, MU]);
    want.add_term(vec![0, 0], el(&alg, &[("L", 2, s(1))]));
    want.add_term(vec![1, 0], el(&alg, &[("L", 1, s(3))]));
    want.add_term(vec![0, 1], el(&alg, &[("L", 1, s(2))]));
    want.add_term(vec![2, 0], el(&alg, &[("L", 0, s(2))]));
    want.add_term(vec![1, 1], el(&alg, &[("L", 0, s(4))]));
    assert_eq!(got, want);
}

#[test]
fn sl2_jacobi_against_structure_constants() {
    // [a_l [b_m c]] = [a,[b,c]] + (a|[b,c]) l K computed straight from the
    // Lie table and form.
    let g = LieTable::sl2();
    let form = [[0, 0, 1], [0, 2, 0], [1, 0, 0]];
    let alg = sl2_current();
    let k = alg.lookup("K").unwrap();
    let bracket = |i: usize, j: usize| -> Vec<Scalar> { g.bracket(i, j) };
    let pair = |v: &[Scalar], j: usize| -> Scalar {
        v.iter().enumerate().fold(Scalar::zero(), |acc, (i, c)| {
            &acc + &c.scale(&rat(form[i][j], 1))
        })
    };
    let lie_vec = |v: &[Scalar], j: usize| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); 3];
        for (i, c) in v.iter().enumerate() {
            for (m, d) in bracket(i, j).iter().enumerate() {
                out[m] += &(c * d);
            }
        }
        out
    };
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let bc = bracket(b, c);
                let a_bc: Vec<Scalar> = lie_vec(&bc, a).iter().map(|x| -x).collect();
                let mut want = BracketPoly::zero(&[LAMBDA, MU]);
                let mut e0 = ConformalElement::new();
                for (m, x) in a_bc.iter().enumerate() {
                    e0.add_term(Atom::new(m, 0), x.clone());
                }
                want.add_term(vec![0, 0], e0);
                // (a | [b,c]) = ([b,c] | a) for this symmetric form
                want.add_term(
                    vec![1, 0],
                    ConformalElement::single(Atom::new(k, 0), pair(&bc, a)),
                );
                let got = nested_left(&alg, &alg.element(a), &alg.element(b), &alg.element(c));
                assert_eq!(got, want, "triple {a} {b} {c}");
                let rhs = {
                    let mut r =
                        nested_middle(&alg, &alg.element(a), &alg.element(b), &alg.element(c));
                    r.add_assign_poly(&nested_right(
                        &alg,
                        &alg.element(a),
                        &alg.element(b),
                        &alg.element(c),
                    ));
                    r
                };
                assert_eq!(got, rhs);
            }
        }
    }
}

fn corrupted_virasoro() -> AlgebraPresentation {
    let mut alg = AlgebraPresentation::new("bad");
    alg.add_param("c").unwrap();
    let l = alg
        .add_generator("L", Parity::Even, Some(rat(2, 1)))
        .unwrap();
    let c = alg.add_central("C", Some(Scalar::param("c"))).unwrap();
    let p = BracketPoly::univariate(
        LAMBDA,
        [
            (0, ConformalElement::single(Atom::new(l, 1), Scalar::one())),
            (
                1,
                ConformalElement::single(Atom::new(l, 0), Scalar::from_int(3)),
            ),
            (
                3,
                ConformalElement::single(Atom::new(c, 0), Scalar::from_frac(1, 12)),
            ),
        ],
    );
    alg.set_bracket(l, l, p).unwrap();
    alg
}

#[test]
fn corrupted_virasoro_fails_skew_at_degree_zero() {
    let alg = corrupted_virasoro();
    let rep = check_skew(&alg);
    assert!(!rep.passed());
    assert_eq!(rep.failures.len(), 1);
    assert_eq!(rep.failures[0].location, "[L, L]");
    assert_eq!(rep.failures[0].details.len(), 1);
    assert!(rep.failures[0].details[0].starts_with("at lambda^0:"));
    assert!(rep.failures[0].details[0].ends_with("difference -d(L)"));
    assert!(alg.validate().is_err());
}

#[test]
fn ns_with_wrong_central_fails_jacobi_only() {
    let mut alg = neveu_schwarz();
    let (g, c, l) = (
        alg.lookup("G").unwrap(),
        alg.lookup("C").unwrap(),
        alg.lookup("L").unwrap(),
    );
    alg.table.insert(
        (g, g),
        poly(vec![
            (0, ConformalElement::single(Atom::new(l, 0), s(1))),
            (
                2,
                ConformalElement::single(Atom::new(c, 0), Scalar::from_frac(1, 3)),
            ),
        ]),
    );
    assert!(check_skew(&alg).passed());
    let rep = check_jacobi(&alg);
    assert!(!rep.passed());
    assert!(rep.failures.iter().any(|f| f.location == "(G, G, L)"));
    assert!(rep
        .failures
        .iter()
        .all(|f| f.details.iter().all(|d| d.contains('C'))));
}

#[test]
fn sl2_with_wrong_level_fails_jacobi() {
    let mut alg = sl2_current();
    let (h, k) = (alg.lookup("h").unwrap(), alg.lookup("K").unwrap());
    alg.table.insert(
        (h, h),
        poly(vec![(1, ConformalElement::single(Atom::new(k, 0), s(3)))]),
    );
    assert!(check_skew(&alg).passed());
    assert!(!check_jacobi(&alg).passed());
}

#[test]
fn duplicate_and_parity_errors() {
    let mut alg = virasoro();
    let l = alg.lookup("L").unwrap();
    assert!(matches!(
        alg.set_bracket(l, l, BracketPoly::zero(&[LAMBDA])),
        Err(Error::DuplicateBracket(..))
    ));
    let mut ns = AlgebraPresentation::new("x");
    let l = ns.add_generator("L", Parity::Even, None).unwrap();
    let g = ns.add_generator("G", Parity::Odd, None).unwrap();
    let bad = poly(vec![(0, ConformalElement::single(Atom::new(l, 0), s(1)))]);
    assert!(matches!(
        ns.set_bracket(l, g, bad),
        Err(Error::ParityMismatch { .. })
    ));
}

#[test]
fn reversed_pair_is_stored_through_skew() {
    let ns = neveu_schwarz();
    let mut alt = AlgebraPresentation::new("neveu_schwarz");
    alt.add_param("c").unwrap();
    let l = alt
        .add_generator("L", Parity::Even, Some(rat(2, 1)))
        .unwrap();
    let g = alt
        .add_generator("G", Parity::Odd, Some(rat(3, 2)))
        .unwrap();
    let c = alt.add_central("C", Some(Scalar::param("c"))).unwrap();
    alt.set_bracket(l, l, ns.table()[&(l, l)].clone()).unwrap();
    alt.set_bracket(g, g, ns.table()[&(g, g)].clone()).unwrap();
    let gl = ns.lambda_bracket(&ns.element(g), &ns.element(l)).unwrap();
    alt.set_bracket(g, l, gl).unwrap();
    let _ = c;
    assert_eq!(alt, ns);
}

fn builtin_list() -> Vec<AlgebraPresentation> {
    vec![
        virasoro(),
        neveu_schwarz(),
        sl2_current(),
        superfermion(2, 1).unwrap(),
    ]
}

fn arb_element(
    alg: &AlgebraPresentation,
    parity: Parity,
) -> impl Strategy<Value = ConformalElement> {
    let gens: Vec<SymbolId> = alg
        .generators()
        .filter(|g| alg.parity(*g) == parity)
        .collect();
    prop::collection::vec((prop::sample::select(gens), 0u32..3, -4i64..5), 1..4).prop_map(|terms| {
        let mut out = ConformalElement::new();
        for (g, d, c) in terms {
            out.add_term(Atom::new(g, d), Scalar::from_int(c));
        }
        out
    })
}

fn case() -> impl Strategy<Value = (usize, ConformalElement, ConformalElement)> {
    (0usize..4, prop::bool::ANY, prop::bool::ANY).prop_flat_map(|(i, p, q)| {
        let par = |b: bool| if b { Parity::Odd } else { Parity::Even };
        // Virasoro and sl2 have no odd generators.
        let (p, q) = if i == 0 || i == 2 {
            (Parity::Even, Parity::Even)
        } else {
            (par(p), par(q))
        };
        let alg = &builtin_list()[i];
        (Just(i), arb_element(alg, p), arb_element(alg, q))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sesquilinearity((i, x, y) in case(), m in 0u32..4) {
        let alg = &builtin_list()[i];
        let base = alg.lambda_bracket(&x, &y).unwrap();
        let left = alg.lambda_bracket(&alg.derivative(&x, m), &y).unwrap();
        prop_assert_eq!(left, base.shift(&[m]).scale(&Scalar::from(sign_pow(m))));
        let right = alg.lambda_bracket(&x, &alg.derivative(&y, 1)).unwrap();
        prop_assert_eq!(&right, &alg.apply_d_plus_lambda(&base, 1));
        // d is a derivation of the bracket
        let d_base = base.map_coeffs(|c| alg.derivative(c, 1));
        let mut sum = alg.lambda_bracket(&alg.derivative(&x, 1), &y).unwrap();
        sum.add_assign_poly(&right);
        prop_assert_eq!(d_base, sum);
        // [x_lambda dy] recovered from skew-symmetry and left sesquilinearity
        let sign = Scalar::from_int(-alg.parity_of(&x).unwrap().sign(alg.parity_of(&y).unwrap()));
        let flipped = alg.lambda_bracket(&alg.derivative(&y, 1), &x).unwrap();
        prop_assert_eq!(alg.substitute_skew(&flipped).scale(&sign), right);
    }
}

#[test]
fn j_product_translation() {
    for alg in builtin_list() {
        let gens: Vec<SymbolId> = alg.generators().collect();
        for &a in &gens {
            for &b in &gens {
                let (xa, xb) = (alg.element(a), alg.element(b));
                let prod = |x: &ConformalElement, y: &ConformalElement, j: u32| {
                    alg.j_products(x, y)
                        .unwrap()
                        .into_iter()
                        .find(|(k, _)| *k == j)
                        .map(|(_, e)| e)
                        .unwrap_or_default()
                };
                for j in 0..5u32 {
                    let prev = if j == 0 {
                        ConformalElement::new()
                    } else {
                        prod(&xa, &xb, j - 1)
                    };
                    let lhs = prod(&alg.derivative(&xa, 1), &xb, j);
                    assert_eq!(lhs, prev.scale(&Scalar::from_int(-i64::from(j))));
                    let mut rhs = alg.derivative(&prod(&xa, &xb, j), 1);
                    rhs.add_assign_ref(&prev.scale(&Scalar::from_int(i64::from(j))));
                    assert_eq!(prod(&xa, &alg.derivative(&xb, 1), j), rhs);
                }
            }
        }
    }
}
