use lieode::diffring::{
    parse_rational, rat, ratio, rational_string, wronskian_uv, CoeffPoly, DiffRing, Rational, Symbol, XPoly,
};
use lieode::equations::normal_form;
use lieode::generators::{self, GeneratorLabel};
use lieode::jetfield::{is_symmetry, lie_bracket, JetPoly, VectorField};
use lieode::liealg;
use lieode::numflow::Series;
use lieode::variational::{d_functional, euler, s_functional, Lagrangian};
use proptest::prelude::*;

const SYMBOLS: [Symbol; 7] = [Symbol::X, Symbol::U, Symbol::V, Symbol::DU, Symbol::DV, Symbol::Q(0), Symbol::Q(1)];

fn arb_coeff() -> impl Strategy<Value = CoeffPoly> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=2, 7)), 1..4).prop_map(|terms| {
        let mut p = CoeffPoly::zero();
        for (c, exps) in terms {
            let mut t = CoeffPoly::int(c);
            for (s, e) in SYMBOLS.iter().zip(exps) {
                t = &t * &CoeffPoly::var(*s).pow(e);
            }
            p += &t;
        }
        p
    })
}

fn arb_raw_factor() -> impl Strategy<Value = (Symbol, u32)> {
    (0usize..9, 1u32..=2).prop_map(|(i, e)| {
        let s = [
            Symbol::X,
            Symbol::U,
            Symbol::V,
            Symbol::DU,
            Symbol::DV,
            Symbol::D2U,
            Symbol::D2V,
            Symbol::Q(0),
            Symbol::Q(2),
        ][i];
        (s, e)
    })
}

fn arb_jet(m: usize, max_order: usize) -> impl Strategy<Value = JetPoly> {
    prop::collection::vec((arb_coeff(), 0..m, 0..=max_order, 1u32..=2), 1..3).prop_map(move |terms| {
        let mut p = JetPoly::zero(m);
        for (c, comp, order, e) in terms {
            p += &JetPoly::var(m, comp, order).pow(e).scale(&c);
        }
        p
    })
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(a, b)| ratio(a, b))
}

fn combination(gens: &[generators::Generator], coefs: &[Rational], m: usize) -> VectorField {
    let parts: Vec<(Rational, &VectorField)> = coefs.iter().cloned().zip(gens.iter().map(|g| &g.field)).collect();
    VectorField::linear_combination("combo", m, &parts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in arb_coeff(), b in arb_coeff(), c in arb_coeff()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a * &b).is_canonical());
    }

    #[test]
    fn derivation_is_leibniz(a in arb_coeff(), b in arb_coeff()) {
        for ring in [DiffRing::abstract_q(), DiffRing::polynomial_q(XPoly::parse("1 - x + 2*x^3").unwrap())] {
            let (a, b) = (ring.specialize(&a), ring.specialize(&b));
            let lhs = ring.derive(&(&a * &b));
            let rhs = &(&ring.derive(&a) * &b) + &(&a * &ring.derive(&b));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn normalization_is_order_independent(factors in prop::collection::vec(arb_raw_factor(), 1..5), c in -4i64..=4) {
        let ring = DiffRing::abstract_q();
        let forward = ring.normalize(&vec![(factors.clone(), rat(c))]);
        let mut rev = factors.clone();
        rev.reverse();
        let backward = ring.normalize(&vec![(rev, rat(c))]);
        prop_assert_eq!(&forward, &backward);
        prop_assert!(forward.is_canonical());
        // normalizing a canonical polynomial changes nothing
        let again: Vec<(Vec<(Symbol, u32)>, Rational)> = forward
            .terms()
            .map(|(mono, r)| (mono.symbols().collect(), r.clone()))
            .collect();
        prop_assert_eq!(ring.normalize(&again), forward);
    }

    #[test]
    fn specialization_commutes_with_derivation(a in arb_coeff()) {
        let q = XPoly::parse("2 - 3/2*x^2").unwrap();
        let ring = DiffRing::polynomial_q(q);
        let abs = DiffRing::abstract_q();
        prop_assert_eq!(ring.specialize(&abs.derive(&a)), ring.derive(&ring.specialize(&a)));
    }

    #[test]
    fn total_derivative_is_leibniz(p in arb_jet(2, 2), r in arb_jet(2, 2)) {
        let ring = DiffRing::abstract_q();
        let lhs = (&p * &r).total_derivative(&ring);
        let rhs = &(&p.total_derivative(&ring) * &r) + &(&p * &r.total_derivative(&ring));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_annihilates_total_derivatives(p in arb_jet(2, 3)) {
        let ring = DiffRing::abstract_q();
        let d = p.total_derivative(&ring);
        for j in 0..2 {
            prop_assert!(euler(&ring, &d, j).is_zero());
        }
    }

    #[test]
    fn rationals_round_trip(r in arb_rational()) {
        prop_assert_eq!(parse_rational(&rational_string(&r)).unwrap(), r);
    }

    #[test]
    fn series_reversion_round_trip(a1 in 0.5f64..3.0, rest in prop::collection::vec(-1.0f64..1.0, 5)) {
        let mut c = vec![0.25, a1];
        c.extend(rest);
        let s = Series::from_coeffs(6, &c);
        let b = s.revert().unwrap();
        let mut shifted = s.clone();
        shifted.c[0] = 0.0;
        let id = shifted.compose(&b);
        for (k, v) in id.c.iter().enumerate() {
            let want = if k == 1 { 1.0 } else { 0.0 };
            prop_assert!((v - want).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn brackets_of_combinations(coefs_a in prop::collection::vec(arb_rational(), 13), coefs_b in prop::collection::vec(arb_rational(), 13), coefs_c in prop::collection::vec(arb_rational(), 13)) {
        let ring = DiffRing::abstract_q();
        let gens = generators::basis(3, 2).unwrap();
        let pres = liealg::structure_constants(&ring, &gens).unwrap();
        let (a, b, c) = (combination(&gens, &coefs_a, 2), combination(&gens, &coefs_b, 2), combination(&gens, &coefs_c, 2));
        let ab = lie_bracket(&ring, &a, &b).unwrap();
        let ba = lie_bracket(&ring, &b, &a).unwrap();
        prop_assert!(ab.add(&ba).is_zero());
        // the field bracket agrees with the structure constants
        let coords = pres.bracket(&coefs_a, &coefs_b);
        prop_assert!(ab.sub(&combination(&gens, &coords, 2)).is_zero());
        let jac = lie_bracket(&ring, &a, &lie_bracket(&ring, &b, &c).unwrap()).unwrap()
            .add(&lie_bracket(&ring, &b, &lie_bracket(&ring, &c, &a).unwrap()).unwrap())
            .add(&lie_bracket(&ring, &c, &ab).unwrap());
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn symmetries_form_a_vector_space(coefs in prop::collection::vec(arb_rational(), 13), k in arb_rational()) {
        prop_assume!(k != rat(0));
        let ring = DiffRing::abstract_q();
        let sys = normal_form(&ring, 3, 2).unwrap();
        let gens = generators::basis(3, 2).unwrap();
        let v = combination(&gens, &coefs, 2);
        prop_assert!(is_symmetry(&ring, &v, &sys).unwrap().verdict);
        prop_assert!(is_symmetry(&ring, &v.scale(&k), &sys).unwrap().verdict);
        // adding a non-symmetry breaks it, whatever the rescaling
        let control = generators::make(GeneratorLabel::H(1, 1), 3, 2).unwrap();
        let mut phi = control.phi.clone();
        phi[0] = phi[0].scale(&CoeffPoly::x());
        let bad = VectorField::new("bad", control.xi.clone(), phi).unwrap();
        prop_assert!(!is_symmetry(&ring, &v.add(&bad).scale(&k), &sys).unwrap().verdict);
    }

    #[test]
    fn s_and_d_are_linear(a in prop::collection::vec(arb_rational(), 15), b in prop::collection::vec(arb_rational(), 15), k in arb_rational()) {
        let ring = DiffRing::abstract_q();
        let (n, m) = (4, 2);
        let l0 = Lagrangian::standard(&normal_form(&ring, n, m).unwrap());
        let gens = generators::basis(n, m).unwrap();
        let (va, vb) = (combination(&gens, &a, m), combination(&gens, &b, m));
        let sum = va.add(&vb.scale(&k));
        let lhs = s_functional(&ring, &sum, &l0, n);
        let rhs = &s_functional(&ring, &va, &l0, n) + &s_functional(&ring, &vb, &l0, n).scale_rational(&k);
        prop_assert_eq!(lhs, rhs);
        let dl = d_functional(&ring, &sum, &l0, n);
        let da = d_functional(&ring, &va, &l0, n);
        let db = d_functional(&ring, &vb, &l0, n);
        for j in 0..m {
            prop_assert_eq!(&dl[j], &(&da[j] + &db[j].scale_rational(&k)));
        }
    }
}

#[test]
fn wronskian_relation_is_built_in() {
    assert_eq!(wronskian_uv(), CoeffPoly::one());
    let ring = DiffRing::abstract_q();
    assert!(ring.derive(&wronskian_uv()).is_zero());
}
