use std::collections::HashMap;

use ternalg_core::associativity::{check_exact, AssocRelation, TotalKind};
use ternalg_core::brackets::BracketKind;
use ternalg_core::cubic::CubicMatrix;
use ternalg_core::patterns::NamedProduct;
use ternalg_core::sampling::{sample_scalar, stream_rng};
use ternalg_core::structure::{Element, TernaryStructure};
use ternalg_core::{Matrix, Ring, Scalar, Status};

fn structure(p: NamedProduct) -> TernaryStructure {
    TernaryStructure::from_pattern(&p.pattern(), 2).unwrap()
}

#[test]
fn multiply_matches_pattern_evaluation_for_all_named_products() {
    let mut rng = stream_rng(21, &[]);
    for named in NamedProduct::ALL {
        let p = named.pattern();
        let s = structure(named);
        let m: [CubicMatrix; 3] =
            std::array::from_fn(|_| CubicMatrix::from_fn(2, |_, _, _| sample_scalar(&mut rng)));
        let e = m.each_ref().map(|x| Element(x.coords().to_vec()));
        let direct = p.evaluate(&m[0], &m[1], &m[2]).unwrap();
        assert_eq!(
            s.multiply(&e[0], &e[1], &e[2]).unwrap().0,
            direct.coords(),
            "{named}"
        );
    }
}

#[test]
fn circ_of_unit_is_unit() {
    let s = structure(NamedProduct::Circ);
    let e = Element::basis(8, 0);
    assert_eq!(s.multiply(&e, &e, &e).unwrap(), e);
    assert!(s.multiply(&e, &Element::zero(8), &e).unwrap().is_zero());
}

#[test]
fn theorem_products_are_totally_second_kind() {
    for named in NamedProduct::THEOREM {
        assert_eq!(
            structure(named).check_total(TotalKind::Second).status,
            Status::HoldsExact,
            "{named}"
        );
        assert!(
            !structure(named).check_total(TotalKind::First).holds(),
            "{named}"
        );
    }
    assert!(!structure(NamedProduct::Circ)
        .check_assoc(AssocRelation::LR)
        .holds());
}

#[test]
fn structure_checks_agree_with_exact_pattern_checks() {
    for named in NamedProduct::ALL {
        let s = structure(named);
        for rel in AssocRelation::ALL {
            let exact = check_exact(&named.pattern(), rel, 2).unwrap();
            assert_eq!(s.check_assoc(rel).status, exact.status, "{named} {rel}");
        }
    }
}

#[test]
fn zero_structure_satisfies_everything() {
    let table: HashMap<_, _> = (0..2)
        .flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| ((a, b, c), Element::zero(2)))))
        .collect();
    let s = TernaryStructure::from_trilinear(2, &table).unwrap();
    assert_eq!(s, TernaryStructure::zero(2));
    for rel in AssocRelation::ALL {
        assert!(s.check_assoc(rel).holds());
    }
    let one: HashMap<_, _> = [((0, 0, 0), Element(vec![Scalar::j()]))]
        .into_iter()
        .collect();
    assert_eq!(
        TernaryStructure::from_trilinear(1, &one)
            .unwrap()
            .constant(0, 0, 0, 0),
        Scalar::j()
    );
}

#[test]
fn family_relation_gives_associative_fibres() {
    let s = structure(NamedProduct::T1);
    assert!(s.assoc_family_check(2, 10, 3).unwrap().holds());
    // a = b: the fibre product (x, y) ↦ τ(x, a, y) is associative
    let mut rng = stream_rng(4, &[]);
    let [a, x, y, z] = std::array::from_fn(|_| Element::random(8, &mut rng));
    let m = |u: &Element, v: &Element| s.multiply(u, &a, v).unwrap();
    assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
}

#[test]
fn lie_type_second_implies_first_on_random_structures() {
    for k in 0..10u64 {
        let s = TernaryStructure::random(3, 0.5, &mut stream_rng(31, &[k]));
        let b = s.bracket(BracketKind::J);
        assert!(b.lie_type_second().holds());
        assert!(b.lie_type_first().holds());
        if s.lie_type_second().holds() {
            assert!(s.lie_type_first().holds());
        }
    }
}

#[test]
fn anti_bracket_is_cyclic() {
    let s = TernaryStructure::random(3, 0.5, &mut stream_rng(32, &[])).bracket(BracketKind::Anti);
    for (a, b, c) in [(0, 1, 2), (1, 1, 0), (2, 0, 0)] {
        assert_eq!(s.basis_product(a, b, c), s.basis_product(b, c, a));
    }
}

#[test]
fn l_operators_are_bilinear_and_zero_on_zero() {
    let s = structure(NamedProduct::T2);
    let mut rng = stream_rng(5, &[]);
    let [a, b, b2] = std::array::from_fn(|_| Element::random(8, &mut rng));
    for i in 1..=3 {
        assert!(s.l_operator(i, &Element::zero(8), &b).unwrap().is_zero());
        let sum = s.l_operator(i, &a, &b.add(&b2)).unwrap();
        let parts = s
            .l_operator(i, &a, &b)
            .unwrap()
            .add(&s.l_operator(i, &a, &b2).unwrap())
            .unwrap();
        assert_eq!(sum, parts);
    }
    assert!(s.l_operator(4, &a, &b).is_err());
}

#[test]
fn identity_pair_of_t1_applied_to_elements() {
    let s = structure(NamedProduct::T1);
    let mut e = Element::zero(8);
    e.0[0] = Scalar::one();
    e.0[6] = Scalar::one();
    let l = s.l_operator(3, &e, &e).unwrap();
    assert_eq!(l, Matrix::identity(8));
    let c = Element::random(8, &mut stream_rng(6, &[]));
    assert_eq!(Element(l.mul_vec(&c.0).unwrap()), c);
}

#[test]
fn hermitian_j_skew_products_satisfy_the_conjugate_chain() {
    for k in 0..5u64 {
        let s = TernaryStructure::random(2, 0.6, &mut stream_rng(40, &[k])).bracket(BracketKind::J);
        // a nontrivial involution: swap the two basis vectors
        let swap = Matrix::from_fn(2, 2, |r, c| {
            if r != c {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let h = s.hermitian_part(&swap);
        assert!(h.is_hermitian(&swap).holds());
        assert!(h.is_j_skew().holds());
        assert!(h.hermitian_j_skew_chain(&swap).holds());
    }
}

#[test]
fn jordan_symmetrization_of_theorem_products() {
    for named in [NamedProduct::T1, NamedProduct::T2] {
        let sigma = structure(named).symmetrize_outer();
        assert_eq!(
            sigma.is_jordan_type(9).status,
            Status::HoldsProbable,
            "{named}"
        );
    }
    assert_eq!(
        structure(NamedProduct::T1).is_jordan_type(9).status,
        Status::Fails
    );
}

#[test]
fn change_basis_formula_matches_index_form() {
    let s = TernaryStructure::random(2, 0.7, &mut stream_rng(50, &[]));
    let a = Matrix::from_rows(vec![
        vec![Scalar::one(), Scalar::from_i64(2)],
        vec![Scalar::j(), Scalar::from_i64(-1)],
    ])
    .unwrap();
    let inv = a.inverse().unwrap();
    let t = s.change_basis(&a).unwrap();
    // C̃^δ_{αβγ} = A^ε_α A^ζ_β A^η_γ (A⁻¹)^δ_λ C^λ_{εζη}
    for d in 0..2 {
        for (x, y, z) in [(0, 0, 0), (0, 1, 1), (1, 0, 1)] {
            let mut acc = Scalar::zero();
            for l in 0..2 {
                for e in 0..2 {
                    for f in 0..2 {
                        for g in 0..2 {
                            let coeff = a[(e, x)].mul(&a[(f, y)]).mul(&a[(g, z)]).mul(&inv[(d, l)]);
                            acc.add_product(&coeff, &s.constant(l, e, f, g));
                        }
                    }
                }
            }
            assert_eq!(t.constant(d, x, y, z), acc);
        }
    }
}

#[test]
fn structure_json_schema() {
    let s = structure(NamedProduct::Circ);
    let v: serde_json::Value = serde_json::to_value(&s).unwrap();
    assert_eq!(v["r"], 8);
    let first = &v["C"][0];
    assert_eq!(first, &serde_json::json!([1, 1, 1, 1, "1"]));
    assert!(serde_json::from_str::<TernaryStructure>(r#"{"r":2,"C":[[3,1,1,1,"1"]]}"#).is_err());
}
