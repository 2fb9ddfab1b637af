use std::sync::{Arc, OnceLock};

use cgva_core::field::Field;
use cgva_core::lie::{FormSpec, LieAlgebra};
use cgva_core::linalg::SVec;
use cgva_core::vertex::suites::{self, AxiomOptions};
use cgva_core::vertex::{format_state, parse_state, AffineVertexAlgebra, State};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn va(name: &str, field: Field) -> AffineVertexAlgebra {
    let g = LieAlgebra::builtin(name.parse().unwrap(), field, FormSpec::DualCoxeter).unwrap();
    AffineVertexAlgebra::new(Arc::new(g))
}

fn sl2() -> &'static AffineVertexAlgebra {
    static V: OnceLock<AffineVertexAlgebra> = OnceLock::new();
    V.get_or_init(|| va("sl2", Field::Rationals))
}

fn sl3_f7() -> &'static AffineVertexAlgebra {
    static V: OnceLock<AffineVertexAlgebra> = OnceLock::new();
    V.get_or_init(|| va("sl3", Field::prime(7).unwrap()))
}

/// Rank-3 Heisenberg algebra with form diag(1, 2, 3).
fn heisenberg() -> &'static AffineVertexAlgebra {
    static V: OnceLock<AffineVertexAlgebra> = OnceLock::new();
    V.get_or_init(|| {
        let diag: Vec<_> = (1..=3).map(|k| BigRational::from_integer(k.into())).collect();
        AffineVertexAlgebra::new(Arc::new(LieAlgebra::abelian(3, Field::Rationals, &diag).unwrap()))
    })
}

fn parse(v: &AffineVertexAlgebra, s: &str) -> State {
    parse_state(v, s).unwrap()
}

fn random(v: &AffineVertexAlgebra, seed: u64, deg: u32) -> State {
    suites::random_state(v, &mut ChaCha8Rng::seed_from_u64(seed), deg)
}

fn quadratic(v: &AffineVertexAlgebra, a: usize, b: usize) -> State {
    let l = v.lie().labels();
    parse(v, &format!("{}(-1) {}(-1) |0>", l[a], l[b]))
}

#[test]
fn text_examples() {
    let v = sl2();
    assert_eq!(format_state(v, &parse(v, "e(1) f(-1) |0>")), "1 * |0>");
    assert_eq!(format_state(v, &parse(v, "h(0) e(-1) |0>")), "2 * e(-1) |0>");
    assert_eq!(format_state(v, &parse(v, "e(0) |0>")), "0");
    // Reordering creation modes produces the bracket term.
    let a = parse(v, "e(-1) h(-2) |0>");
    let b = parse(v, "h(-2) e(-1) |0> - 2 * e(-3) |0>");
    assert_eq!(a, b);
    assert!(parse_state(v, "x(-1) |0>").is_err());
    assert!(parse_state(v, "e(-1 |0>").is_err());
}

#[test]
fn small_products() {
    let v = sl2();
    let hh = parse(v, "h(-1) h(-1) |0>");
    assert_eq!(v.form3(&hh, &hh).unwrap(), Field::Rationals.int(8));
    let d = v.d_operator(1, &parse(v, "e(-1) |0>")).unwrap();
    assert_eq!(d, parse(v, "e(-2) |0>"));
    let e = v.generator(0);
    assert_eq!(v.nth_product(&e, 0, &v.generator(2)).unwrap(), v.from_lie(v.lie().bracket_basis(0, 2)));
    assert!(v.d_operator(-1, &e).is_err());
    assert!(va("sl2", Field::prime(7).unwrap()).times0_product(&e, &e).is_err());
}

#[test]
fn heisenberg_quadratic_pairing_is_wick() {
    // Free bosons: (ab)_3 (cd) pairs the modes, giving κ(a,c)κ(b,d) + κ(a,d)κ(b,c).
    let v = heisenberg();
    let k = |i: usize, j: usize| if i == j { (i + 1) as i64 } else { 0 };
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let got = v.form3(&quadratic(v, a, b), &quadratic(v, c, d)).unwrap();
                    let want = k(a, c) * k(b, d) + k(a, d) * k(b, c);
                    assert_eq!(got, Field::Rationals.int(want), "({a}{b})_3({c}{d})");
                }
            }
        }
    }
}

#[test]
fn axiom_suite_passes_small_runs() {
    for v in [sl2(), sl3_f7()] {
        let r = suites::axiom_suite(v, &AxiomOptions::new(3, 24, 11));
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.checks.len(), suites::AXIOM_CHECKS.len());
    }
}

#[test]
fn comp_lemmas_pass() {
    for v in [sl2(), sl3_f7()] {
        let r = suites::comp_lemma_suite(v);
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.checks.len(), suites::LEMMA_CHECKS.len());
    }
}

fn mode_args() -> impl Strategy<Value = (usize, usize, i64, i64, u64, u32)> {
    (0usize..8, 0usize..8, -3i64..=3, -3i64..=3, any::<u64>(), 0u32..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trips(seed in any::<u64>(), deg in 0u32..=5) {
        let v = sl3_f7();
        let s = random(v, seed, deg);
        prop_assert_eq!(parse(v, &format_state(v, &s)), s);
    }

    #[test]
    fn modes_satisfy_the_commutator_formula((a, b, m, n, seed, deg) in mode_args()) {
        let v = sl3_f7();
        let f = v.field();
        let s = random(v, seed, deg);
        let ab = v.apply_basis_mode(a, m, &v.apply_basis_mode(b, n, &s).unwrap()).unwrap();
        let ba = v.apply_basis_mode(b, n, &v.apply_basis_mode(a, m, &s).unwrap()).unwrap();
        let mut rhs = v.apply_mode(v.lie().bracket_basis(a, b), m + n, &s).unwrap();
        if m + n == 0 {
            rhs = rhs.add(&s.scale(&(&f.int(m) * v.lie().kappa(a, b))));
        }
        prop_assert_eq!(ab.sub(&ba), rhs);
    }

    #[test]
    fn modes_are_graded_and_truncated((a, _b, n, _m, seed, deg) in mode_args()) {
        let v = sl3_f7();
        let s = random(v, seed, deg);
        let t = v.apply_basis_mode(a, n, &s).unwrap();
        if n > deg as i64 {
            prop_assert!(t.is_zero());
        } else if !t.is_zero() {
            prop_assert_eq!(t.homogeneous_degree(), Some((deg as i64 - n) as u32));
        }
        for mono in t.terms().keys() {
            prop_assert!(mono.is_normal_ordered());
        }
    }

    #[test]
    fn vacuum_is_a_unit(seed in any::<u64>(), deg in 0u32..=4, n in -4i64..=4) {
        let v = sl2();
        let s = random(v, seed, deg);
        let left = v.nth_product(&v.vacuum(), n, &s).unwrap();
        prop_assert_eq!(left, if n == -1 { s.clone() } else { State::zero() });
        // u_{-1} 𝟙 = u and u_n 𝟙 = 0 for n ≥ 0.
        let right = v.nth_product(&s, n, &v.vacuum()).unwrap();
        if n == -1 {
            prop_assert_eq!(right, s);
        } else if n >= 0 {
            prop_assert!(right.is_zero());
        }
    }

    #[test]
    fn translation_matches_divided_powers(seed in any::<u64>(), deg in 0u32..=4, k in 0u32..=3) {
        let v = sl2();
        let s = random(v, seed, deg);
        prop_assert_eq!(v.d_operator(k as i64, &s).unwrap(), suites::translation_oracle(v, k, &s));
    }

    #[test]
    fn generator_product_is_a_mode(a in prop::collection::vec(-2i64..=2, 3), n in -3i64..=3, seed in any::<u64>(), deg in 0u32..=3) {
        let v = sl2();
        let f = v.field();
        let x = SVec::from_dense(&a.iter().map(|&c| f.int(c)).collect::<Vec<_>>());
        let s = random(v, seed, deg);
        prop_assert_eq!(v.nth_product(&v.from_lie(&x), n, &s).unwrap(), v.apply_mode(&x, n, &s).unwrap());
        if !x.is_zero() {
            prop_assert_eq!(v.to_lie(&v.from_lie(&x)).unwrap(), x);
        }
    }
}
