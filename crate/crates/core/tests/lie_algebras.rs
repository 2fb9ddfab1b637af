use cgva_core::field::Field;
use cgva_core::lie::{Builtin, FormSpec, LieAlgebra};
use cgva_core::Error;
use num_rational::BigRational;

fn builtin(name: &str, field: Field) -> LieAlgebra {
    LieAlgebra::builtin(name.parse::<Builtin>().unwrap(), field, FormSpec::DualCoxeter).unwrap()
}

/// The sl_n basis as explicit matrices, rebuilt from the labelled ordering.
fn sl_matrices(n: usize) -> Vec<Vec<Vec<i64>>> {
    let unit = |i: usize, j: usize| {
        let mut m = vec![vec![0; n]; n];
        m[i][j] = 1;
        m
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(i, j));
        }
    }
    for i in 0..n - 1 {
        let mut h = unit(i, i);
        h[i + 1][i + 1] = -1;
        out.push(h);
    }
    for i in 0..n {
        for j in 0..i {
            out.push(unit(i, j));
        }
    }
    out
}

fn trace_product(a: &[Vec<i64>], b: &[Vec<i64>]) -> i64 {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|k| a[i][k] * b[k][i]).sum::<i64>()).sum()
}

#[test]
fn dual_coxeter_form_of_sl_n_is_the_trace_form() {
    for n in 2..=4 {
        let g = builtin(&format!("sl{n}"), Field::Rationals);
        let mats = sl_matrices(n);
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert_eq!(*g.kappa(i, j), Field::Rationals.int(trace_product(&mats[i], &mats[j])));
            }
        }
    }
}

#[test]
fn builtins_are_admissible() {
    for name in ["sl2", "sl3", "sl4", "so5", "so4", "so6", "sp4", "sp6"] {
        for field in [Field::Rationals, Field::prime(7).unwrap(), Field::prime(11).unwrap()] {
            let g = LieAlgebra::builtin(name.parse().unwrap(), field, FormSpec::DualCoxeter)
                .unwrap_or_else(|e| panic!("{name} over {field}: {e}"));
            let r = g.validate();
            assert!(r.admissible, "{name} over {field}: {:?}", r.first_failure());
        }
    }
}

#[test]
fn dimensions_of_builtins() {
    let dims = [("sl2", 3), ("sl3", 8), ("sl4", 15), ("so4", 6), ("so5", 10), ("so6", 15), ("sp4", 10), ("sp6", 21)];
    for (name, d) in dims {
        assert_eq!(builtin(name, Field::Rationals).dim(), d, "{name}");
    }
}

#[test]
fn casimir_scalar_is_twice_dual_coxeter() {
    for (name, h) in [("sl2", 2), ("sl3", 3), ("sl4", 4), ("so5", 3), ("sp4", 3), ("sp6", 4), ("so6", 4)] {
        let g = builtin(name, Field::Rationals);
        let c = g.casimir_endomorphism().unwrap();
        assert_eq!(c.h(), Some(Field::Rationals.int(h)), "{name}");
    }
}

#[test]
fn killing_form_is_a_multiple_of_the_scaled_form() {
    let k = LieAlgebra::builtin("so5".parse().unwrap(), Field::Rationals, FormSpec::Killing).unwrap();
    let g = builtin("so5", Field::Rationals);
    let six = Field::Rationals.int(6);
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            assert_eq!(*k.kappa(i, j), g.kappa(i, j) * &six);
        }
    }
}

#[test]
fn killing_form_is_degenerate_in_bad_characteristic() {
    // sl3 over F_3: the Killing form 6·tr vanishes identically.
    let g = LieAlgebra::builtin_unchecked("sl3".parse().unwrap(), Field::prime(3).unwrap(), FormSpec::Killing).unwrap();
    let r = g.validate();
    assert!(!r.nondegenerate_ok);
    assert_eq!(r.form_rank, 0);
    assert!(!r.admissible);
    // ... and the dual Coxeter scaling is not even defined there.
    assert!(LieAlgebra::builtin_unchecked("sl3".parse().unwrap(), Field::prime(3).unwrap(), FormSpec::DualCoxeter).is_err());
}

#[test]
fn json_round_trip_preserves_structure() {
    for name in ["sl2", "so5", "sp4"] {
        let g = builtin(name, Field::Rationals);
        let text = g.to_json().unwrap();
        let h = LieAlgebra::from_json(&text, Field::Rationals).unwrap();
        assert_eq!(g.structure(), h.structure());
        assert_eq!(g.form(), h.form());
        assert_eq!(g.labels(), h.labels());
        let p = LieAlgebra::from_json(&text, Field::prime(7).unwrap()).unwrap();
        assert_eq!(p.form(), &g.form().reduce_into(Field::prime(7).unwrap()).unwrap());
    }
}

#[test]
fn json_loader_rejects_bad_input() {
    let ok = r#"{"name":"t","dim":2,"basis":["x","y"],"brackets":[],"form":{"type":"matrix","entries":[[0,0,"1"],[1,1,"1"]]}}"#;
    assert!(LieAlgebra::from_json(ok, Field::Rationals).is_ok());

    let dup = ok.replace(r#"["x","y"]"#, r#"["x","x"]"#);
    assert!(matches!(LieAlgebra::from_json(&dup, Field::Rationals), Err(Error::Parse(_))));

    let range = ok.replace(r#""brackets":[]"#, r#""brackets":[[0,5,[]]]"#);
    assert!(matches!(LieAlgebra::from_json(&range, Field::Rationals), Err(Error::Parse(_))));

    let diag = ok.replace(r#""brackets":[]"#, r#""brackets":[[0,0,[[1,"1"]]]]"#);
    assert!(matches!(LieAlgebra::from_json(&diag, Field::Rationals), Err(Error::InvalidAlgebra(_))));

    let clash = ok.replace(r#""brackets":[]"#, r#""brackets":[[0,1,[[1,"1"]]],[1,0,[[1,"1"]]]]"#);
    assert!(matches!(LieAlgebra::from_json(&clash, Field::Rationals), Err(Error::InvalidAlgebra(_))));

    // [x, y] = y with the identity form is a Lie algebra, but the form is not invariant.
    let noninv = ok.replace(r#""brackets":[]"#, r#""brackets":[[0,1,[[1,"1"]]]]"#);
    assert!(matches!(LieAlgebra::from_json(&noninv, Field::Rationals), Err(Error::InvalidAlgebra(_))));

    let half = ok.replace(r#""1"]]}"#, r#""1/7"]]}"#);
    assert!(LieAlgebra::from_json(&half, Field::prime(7).unwrap()).is_err());
}

#[test]
fn jacobi_violation_is_reported_with_a_witness() {
    // [e, h] = -3e, [e, f] = h, [h, f] = -2f violates Jacobi on (e, f, h).
    let f = Field::Rationals;
    let g = builtin("sl2", f);
    let mut structure = g.structure().clone();
    let eh = structure.get_mut(&(0, 1)).unwrap();
    *eh = eh.scale(&f.ratio(3, 2).unwrap());
    let h = LieAlgebra::from_structure("bad", f, g.labels().to_vec(), structure, FormSpec::Killing).unwrap();
    let r = h.validate();
    assert!(!r.jacobi_ok);
    assert!(r.jacobi_witness.is_some());
    assert!(r.first_failure().is_some());
    assert!(matches!(h.checked(), Err(Error::InvalidAlgebra(_))));
}

#[test]
fn abelian_algebra_has_full_center() {
    let one = BigRational::from_integer(1.into());
    let g = LieAlgebra::abelian(2, Field::Rationals, &[one.clone(), one]).unwrap();
    let r = g.validate();
    assert!(r.axioms_ok());
    assert_eq!(r.center_dim, 2);
    assert!(!r.admissible);
}

#[test]
fn characteristic_two_is_rejected() {
    assert!(matches!("fp:2".parse::<Field>(), Err(Error::CharacteristicTwo)));
    assert!(matches!(Field::prime(2), Err(Error::CharacteristicTwo)));
    assert!("fp:9".parse::<Field>().is_err());
}
