use std::sync::{Arc, OnceLock};

use cgva_core::bridge::{self, theta, Bridge, V2Basis};
use cgva_core::cg::{self, pair_of, Sym2Element};
use cgva_core::field::{Field, Scalar};
use cgva_core::lie::{Builtin, FormSpec, LieAlgebra};
use cgva_core::linalg;
use cgva_core::vertex::{AffineVertexAlgebra, State};
use cgva_core::Error;
use num_rational::BigRational;
use proptest::prelude::*;

fn lie(name: &str, field: Field) -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::builtin(name.parse().unwrap(), field, FormSpec::DualCoxeter).unwrap())
}

fn sl3() -> &'static Bridge {
    static B: OnceLock<Bridge> = OnceLock::new();
    B.get_or_init(|| Bridge::new(lie("sl3", Field::Rationals)).unwrap())
}

/// `Σ (κ⁻¹)_{ij} e_i(-1) e_j(-1) 𝟙 / (2(1 + h∨))`, built from modes only.
fn sugawara(va: &AffineVertexAlgebra, h: i64) -> State {
    let g = va.lie();
    let f = g.field();
    let inv = linalg::inverse(g.form()).unwrap();
    let mut s = State::zero();
    for i in 0..g.dim() {
        for (j, c) in &inv.row(i).0 {
            let ej = va.generator(*j);
            s.add_scaled(&va.apply_basis_mode(i, -1, &ej).unwrap(), c);
        }
    }
    s.scale(&f.ratio(1, 2 * (1 + h)).unwrap())
}

#[test]
fn sl2_main_theorem() {
    for field in [Field::Rationals, Field::prime(7).unwrap(), Field::prime(11).unwrap()] {
        let b = Bridge::new(lie("sl2", field)).unwrap();
        let r = b.verify_main_theorem().unwrap();
        assert!(r.passed(), "{field}: {:?}", r.first_failure());
        assert_eq!(r.dims, (6, 5, 1, 5));
        assert_eq!(r.dim_v2, 9);
        assert_eq!(r.dim_l2sym, 1);
        assert!(r.multiplicativity_ok && r.kernel_match_ok);
        // λ = 1/2, printed as its residue over a prime field
        assert_eq!(r.form_lambda, Some(field.ratio(1, 2).unwrap().to_string()));
        assert!(r.unital && r.conformal_ok);
        assert_eq!(r.conformal_normalization, Some(2));
    }
}

#[test]
fn sl2_degree_two_examples() {
    let b = Bridge::new(lie("sl2", Field::Rationals)).unwrap();
    let g = b.va.lie().clone();
    let f = g.field();
    let (e, h) = (0, 1);
    let sq = |i| Sym2Element::basis(3, f, i, i);
    let (th, te) = (theta(&b.basis, &sq(h)), theta(&b.basis, &sq(e)));
    assert_eq!(b.va.form3(&th, &th).unwrap(), f.int(2));
    assert_eq!(b.va.form3(&te, &te).unwrap(), f.zero());

    // ω ≡ ¼ h(-1)h(-1)𝟙 modulo ker T.
    let omega = cgva_core::vertex::parse_state(&b.va, "1/4 h(-1) h(-1) |0>").unwrap();
    let unit = b.cg.check_unital().unwrap().unwrap();
    let from_cg = theta(&b.basis, &b.cg.lift(&unit)).scale(&f.int(2));
    assert!(b.ker_t.contains(&b.basis.coords(&g, &from_cg.sub(&omega)).unwrap()));
    assert_eq!(b.va.apply_basis_mode(e, 1, &omega).unwrap(), b.va.generator(e));
    let e0 = b.va.apply_basis_mode(e, 0, &omega).unwrap();
    let want = cgva_core::vertex::parse_state(&b.va, "-1/2 h(-1) e(-1) |0> - 1/2 e(-1) h(-1) |0>").unwrap();
    assert_eq!(e0, want);
    assert!(b.ker_t.contains(&b.basis.coords(&g, &e0).unwrap()));
}

#[test]
fn kernel_dimensions_agree() {
    for (name, a, ker) in [("sl3", 9, 27), ("so5", 20, 35), ("sp4", 20, 35), ("so4", 11, 10)] {
        let b = Bridge::new(lie(name, Field::prime(11).unwrap())).unwrap();
        let r = b.verify_main_theorem().unwrap();
        assert!(r.passed(), "{name}: {:?}", r.first_failure());
        assert_eq!((r.dims.2, r.dims.3), (a, ker), "{name}");
        assert_eq!(r.dim_l2sym, a);
    }
}

#[test]
fn central_charge_matches_sugawara() {
    for name in ["sl2", "sl3", "so5", "sp4"] {
        let g = lie(name, Field::Rationals);
        let f = g.field();
        let h = name.parse::<Builtin>().unwrap().dual_coxeter() as i64;
        let b = Bridge::new(g.clone()).unwrap();
        let omega = sugawara(&b.va, h);
        for a in 0..g.dim() {
            assert_eq!(b.va.apply_basis_mode(a, 1, &omega).unwrap(), b.va.generator(a), "{name}");
            assert!(b.va.apply_basis_mode(a, 2, &omega).unwrap().is_zero(), "{name}");
        }
        // c = dim g / (1 + h∨) at level one.
        let c = &f.int(2) * &b.va.form3(&omega, &omega).unwrap();
        let want = f.ratio(g.dim() as i64, 1 + h).unwrap();
        assert_eq!(c, want, "{name}");

        let conf = b.conformal_checks().unwrap();
        assert!(conf.passed(), "{name}: {:?}", conf.checks);
        assert_eq!(conf.central_charge, Some(want.to_string()));
        // The vertex-side conformal vector agrees with 2θ(unit) modulo ker T.
        let unit = b.cg.check_unital().unwrap().unwrap();
        let from_cg = theta(&b.basis, &b.cg.lift(&unit)).scale(&f.int(2));
        let diff = b.basis.coords(&g, &from_cg.sub(&omega)).unwrap();
        assert!(b.ker_t.contains(&diff), "{name}");
    }
}

#[test]
fn centre_is_refused() {
    let one = BigRational::from_integer(1.into());
    let g = Arc::new(LieAlgebra::abelian(2, Field::Rationals, &[one.clone(), one]).unwrap());
    let va = AffineVertexAlgebra::new(g.clone());
    let basis = V2Basis::new(&g);
    assert!(matches!(bridge::kernel_t(&va, &basis), Err(Error::NontrivialCenter(2))));
    assert!(matches!(Bridge::new(g), Err(Error::NontrivialCenter(2))));
    let msg = Error::NontrivialCenter(2).to_string();
    assert!(msg.contains("center"), "{msg}");
}

#[test]
fn ideal_closure_holds() {
    for name in ["sl2", "sl3"] {
        let b = Bridge::new(lie(name, Field::prime(7).unwrap())).unwrap();
        let r = b.ideal_closure_check(4);
        assert!(r.passed(), "{name}: {:?}", r.first_failure());
    }
}

#[test]
fn v2_coordinates_round_trip() {
    let b = sl3();
    let g = b.va.lie();
    for k in 0..b.basis.dim() {
        let c = b.basis.coords(g, b.basis.state(k)).unwrap();
        assert_eq!(c, linalg::SVec(vec![(k, g.field().one())]));
    }
    assert_eq!(b.basis.dim(), 8 + 36);
    assert!(b.basis.sym_coords(g, b.basis.state(0)).is_err());
}

fn sym2(g: &LieAlgebra, xs: &[i64]) -> Sym2Element {
    let f = g.field();
    let mut x = Sym2Element::zero(g.dim(), f);
    for (p, &c) in xs.iter().enumerate() {
        let (i, j) = pair_of(p);
        x.add_term(i, j, &f.int(c));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn t_after_theta_is_s(xs in prop::collection::vec(-2i64..=2, 36)) {
        let b = sl3();
        let g = b.va.lie();
        let x = sym2(g, &xs);
        let t = bridge::t_map(&b.va, &theta(&b.basis, &x)).unwrap();
        prop_assert_eq!(t, cg::s_map(g, &x));
    }

    #[test]
    fn theta_is_multiplicative_modulo_ker_t(
        xs in prop::collection::vec(-2i64..=2, 36),
        ys in prop::collection::vec(-2i64..=2, 36),
    ) {
        let b = sl3();
        let g = b.va.lie();
        let (x, y) = (sym2(g, &xs), sym2(g, &ys));
        let lhs = theta(&b.basis, &cg::star(g, &x, &y).unwrap());
        let rhs = b.va.jordan_product(&theta(&b.basis, &x), &theta(&b.basis, &y)).unwrap();
        let diff = b.basis.coords(g, &lhs.sub(&rhs)).unwrap();
        prop_assert!(b.ker_t.contains(&diff));
    }

    #[test]
    fn form_is_half_of_tau(
        xs in prop::collection::vec(-2i64..=2, 36),
        ys in prop::collection::vec(-2i64..=2, 36),
    ) {
        let b = sl3();
        let g = b.va.lie();
        let f = g.field();
        let (x, y) = (sym2(g, &xs), sym2(g, &ys));
        let pair = b.va.form3(&theta(&b.basis, &x), &theta(&b.basis, &y)).unwrap();
        let (u, v) = (b.cg.coordinates(&x), b.cg.coordinates(&y));
        let want: Scalar = &f.ratio(1, 2).unwrap() * &b.cg.tau(&u, &v);
        prop_assert_eq!(pair, want);
    }
}
