use std::sync::{Arc, OnceLock};

use cgva_core::cg::{self, pair_of, star, star_via_squares, sym2_dim, CGAlgebra, Sym2Element};
use cgva_core::field::Field;
use cgva_core::lie::{FormSpec, LieAlgebra};
use cgva_core::linalg::{Matrix, SVec};
use num_rational::BigRational;
use proptest::prelude::*;

fn builtin(name: &str, field: Field) -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::builtin(name.parse().unwrap(), field, FormSpec::DualCoxeter).unwrap())
}

fn sl3() -> &'static CGAlgebra {
    static A: OnceLock<CGAlgebra> = OnceLock::new();
    A.get_or_init(|| CGAlgebra::build(builtin("sl3", Field::Rationals)).unwrap())
}

fn vector(g: &LieAlgebra, xs: &[i64]) -> SVec {
    let f = g.field();
    SVec::from_dense(&xs.iter().map(|&x| f.int(x)).collect::<Vec<_>>())
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

/// `v ↦ [a,[a,v]] + 2⟨a,v⟩a`, evaluated with brackets only.
fn s_square_oracle(g: &LieAlgebra, a: &SVec) -> Matrix {
    let f = g.field();
    let d = g.dim();
    let rows: Vec<Vec<_>> = (0..d)
        .map(|r| {
            let v = SVec(vec![(r, f.one())]);
            let w = g
                .bracket_sparse(a, &g.bracket_sparse(a, &v))
                .axpy(&(&f.int(2) * &g.pairing(a, &v)), a);
            w.to_dense(d, f)
        })
        .collect();
    // rows[r] is the image of e_r, i.e. column r.
    Matrix::from_dense(f, &rows).unwrap().transpose()
}

#[test]
fn dimensions_of_a() {
    for (name, s2, a) in [("sl2", 6, 1), ("sl3", 36, 9), ("so4", 21, 11), ("so5", 55, 20), ("sp4", 55, 20), ("sl4", 120, 36)] {
        for field in [Field::Rationals, Field::prime(11).unwrap()] {
            let g = builtin(name, field);
            let r = cg::s_rank(&g);
            assert_eq!((r.dim_s2, r.dim_a, r.dim_ker), (s2, a, s2 - a), "{name} over {field}");
        }
    }
    let alg = CGAlgebra::build(builtin("sl2", Field::Rationals)).unwrap();
    assert_eq!(alg.dim(), 1);
    assert_eq!(alg.ker_s().dim(), 5);
}

#[test]
fn unit_is_rescaled_casimir() {
    for name in ["sl2", "sl3", "so5", "sp4"] {
        let g = builtin(name, Field::Rationals);
        let f = g.field();
        let h = name.parse::<cgva_core::lie::Builtin>().unwrap().dual_coxeter() as i64;
        let omega = g.casimir_element().unwrap();
        let id = Matrix::identity(g.dim(), f);
        assert_eq!(cg::s_map(&g, &omega), id.scale(&f.int(2 * h + 2)), "{name}");

        let alg = CGAlgebra::build(g.clone()).unwrap();
        let unit = alg.check_unital().unwrap().expect("unital");
        assert_eq!(alg.endomorphism(&unit), id);
        let diff = omega.scale(&f.ratio(1, 2 * h + 2).unwrap()).sub(&alg.lift(&unit));
        assert!(alg.ker_s().contains(diff.coeffs()), "{name}");
        assert!(cg::identity_in_image(&g));
    }
}

#[test]
fn abelian_algebra_is_unital() {
    let one = BigRational::from_integer(1.into());
    let g = Arc::new(LieAlgebra::abelian(1, Field::Rationals, &[one]).unwrap());
    let alg = CGAlgebra::build(g).unwrap();
    assert_eq!(alg.dim(), 1);
    // S(x²) = 2·Id, so the unit is x²/2.
    let unit = alg.check_unital().unwrap().expect("unital");
    assert_eq!(unit, vec![Field::Rationals.ratio(1, 2).unwrap()]);
}

#[test]
fn identity_suite_passes() {
    for (name, field) in [
        ("sl2", Field::Rationals),
        ("sl3", Field::Rationals),
        ("so5", Field::Rationals),
        ("sl3", Field::prime(7).unwrap()),
    ] {
        let alg = CGAlgebra::build(builtin(name, field)).unwrap();
        let r = cg::cg_identity_suite(&alg, 20, 1);
        assert!(r.passed(), "{name} over {field}: {:?}", r.first_failure());
    }
}

#[test]
fn sl2_table_export_has_one_entry() {
    let alg = CGAlgebra::build(builtin("sl2", Field::Rationals)).unwrap();
    let t = alg.export_tables();
    assert_eq!(t["dim"], 1);
    assert_eq!(t["products"].as_array().unwrap().len(), 1);
    assert_eq!(t["tau"].as_array().unwrap().len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn s_of_a_square_matches_brackets(a in prop::collection::vec(-3i64..=3, 8)) {
        let g = sl3().source();
        let v = vector(g, &a);
        let x = Sym2Element::product(g.dim(), g.field(), &v, &v);
        prop_assert_eq!(cg::s_map(g, &x), s_square_oracle(g, &v));
    }

    #[test]
    fn star_agrees_with_square_expansion(
        x in prop::collection::vec(-2i64..=2, 36),
        y in prop::collection::vec(-2i64..=2, 36),
    ) {
        let g = sl3().source();
        let (x, y) = (sym2(g, &x), sym2(g, &y));
        let xy = star(g, &x, &y).unwrap();
        prop_assert_eq!(&xy, &star_via_squares(g, &x, &y));
        prop_assert_eq!(xy, star(g, &y, &x).unwrap());
    }

    #[test]
    fn kernel_of_s_is_a_star_ideal(k in 0usize..27, q in 0usize..36) {
        let alg = sl3();
        let g = alg.source();
        let v = Sym2Element::from_sparse(g.dim(), g.field(), alg.ker_s().basis()[k].clone());
        let (i, j) = pair_of(q);
        let z = star(g, &v, &Sym2Element::basis(g.dim(), g.field(), i, j)).unwrap();
        prop_assert!(cg::s_map(g, &z).is_zero());
    }

    #[test]
    fn diamond_is_commutative_with_symmetric_tau(
        u in prop::collection::vec(-3i64..=3, 9),
        v in prop::collection::vec(-3i64..=3, 9),
        w in prop::collection::vec(-3i64..=3, 9),
    ) {
        let alg = sl3();
        let f = alg.field();
        let c = |xs: &[i64]| xs.iter().map(|&x| f.int(x)).collect::<Vec<_>>();
        let (u, v, w) = (c(&u), c(&v), c(&w));
        let uv = alg.diamond(&u, &v);
        prop_assert_eq!(&uv, &alg.diamond(&v, &u));
        prop_assert_eq!(alg.tau(&u, &v), alg.tau(&v, &u));
        prop_assert_eq!(alg.tau(&uv, &w), alg.tau(&u, &alg.diamond(&v, &w)));
        // S is multiplicative on representatives.
        let lhs = alg.endomorphism(&uv);
        let rhs = cg::s_map(alg.source(), &star(alg.source(), &alg.lift(&u), &alg.lift(&v)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn sym2_indexing_is_a_bijection() {
    for d in 1..6 {
        let mut seen = vec![false; sym2_dim(d)];
        for i in 0..d {
            for j in 0..d {
                let p = cg::pair_index(i, j);
                assert_eq!(p, cg::pair_index(j, i));
                let (a, b) = pair_of(p);
                assert_eq!((a.max(b), a.min(b)), (i.max(j), i.min(j)));
                seen[p] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }
}
