use proptest::prelude::*;

use ternalg_core::cubic::{CubicMatrix, SymClass};
use ternalg_core::patterns::{enumerate_patterns, NamedProduct};
use ternalg_core::scalars::{embed_fp, format_scalar, parse_scalar, DefaultFp, Fp};
use ternalg_core::{Field, Ring, Scalar};

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, 1i64..=6)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::array::uniform4(small_rational()).prop_map(|cs| {
        let basis = [
            Scalar::one(),
            Scalar::zeta(),
            Scalar::zeta_pow(2),
            Scalar::zeta_pow(3),
        ];
        cs.iter()
            .zip(&basis)
            .fold(Scalar::zero(), |acc, (&(n, d), b)| {
                acc.add(&Scalar::ratio(n, d).mul(b))
            })
    })
}

fn cubic(n: usize) -> impl Strategy<Value = CubicMatrix> {
    prop::collection::vec(-5i64..=5, n * n * n).prop_map(move |v| {
        CubicMatrix::from_coords(n, v.into_iter().map(Scalar::from_i64).collect()).unwrap()
    })
}

fn complex_cubic(n: usize) -> impl Strategy<Value = CubicMatrix> {
    prop::collection::vec(scalar(), n * n * n)
        .prop_map(move |v| CubicMatrix::from_coords(n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Scalar::zero());
        prop_assert_eq!(a.mul(&Scalar::one()), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Scalar::one());
        }
    }

    #[test]
    fn conjugation_is_a_field_involution(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&a)).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), a);
    }

    #[test]
    fn fp_embedding_is_a_ring_map(
        a in prop::array::uniform4(-50i64..=50),
        b in prop::array::uniform4(-50i64..=50),
    ) {
        let zeta = DefaultFp::primitive_12th_root().unwrap();
        let (a, b) = (Scalar::from_ints(a), Scalar::from_ints(b));
        let e = |x: &Scalar| embed_fp(x, zeta).unwrap();
        prop_assert_eq!(e(&a.mul(&b)), e(&a).mul(&e(&b)));
        prop_assert_eq!(e(&a.add(&b)), e(&a).add(&e(&b)));
    }

    #[test]
    fn fp_field_axioms(a in 0u64..2_013_265_921, b in 1u64..2_013_265_921) {
        let (a, b) = (Fp::<2_013_265_921>::new(a), Fp::<2_013_265_921>::new(b));
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        prop_assert_eq!(a.sub(&b).add(&b), a);
    }

    #[test]
    fn projectors_are_idempotent_and_complete(a in complex_cubic(2)) {
        let classes = [SymClass::JSkew, SymClass::J2Skew, SymClass::CyclicSymmetric];
        let mut sum = CubicMatrix::zeros(2);
        for class in classes {
            let p = class.project(&a);
            prop_assert!(class.contains(&p));
            prop_assert_eq!(class.project(&p), p.clone());
            for other in classes.iter().filter(|&&o| o != class) {
                prop_assert!(other.project(&p).is_zero());
            }
            sum = sum.add(&p).unwrap();
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn summand_projectors_are_complete(a in cubic(3)) {
        let sum = SymClass::SUMMANDS
            .iter()
            .map(|c| c.project(&a))
            .reduce(|x, y| x.add(&y).unwrap())
            .unwrap();
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn patterns_are_trilinear(
        idx in 0usize..7560,
        a in cubic(2), a2 in cubic(2), b in cubic(2), c in cubic(2),
        s in scalar(),
    ) {
        let p = enumerate_patterns()[idx];
        let lhs = p.evaluate(&a.add(&a2.scale(&s)).unwrap(), &b, &c).unwrap();
        let rhs = p.evaluate(&a, &b, &c).unwrap().add(&p.evaluate(&a2, &b, &c).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let mid = p.evaluate(&a, &b.scale(&s), &c).unwrap();
        prop_assert_eq!(mid, p.evaluate(&a, &b, &c.scale(&s)).unwrap());
    }

    #[test]
    fn circ_rotation_permutes_subscripts(a in cubic(2), b in cubic(2), c in cubic(2)) {
        let p = NamedProduct::Circ.pattern();
        let abc = p.evaluate(&a, &b, &c).unwrap();
        let bca = p.evaluate(&b, &c, &a).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    prop_assert_eq!(&bca[(i, k, l)], &abc[(l, i, k)]);
                }
            }
        }
    }

    #[test]
    fn cubic_json_round_trip(a in complex_cubic(2)) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<CubicMatrix>(&text).unwrap(), a);
    }
}

#[test]
fn canonical_patterns_are_distinct_and_canonical() {
    let all = enumerate_patterns();
    assert_eq!(all.len(), 7560);
    assert!(all.iter().all(|p| p.is_canonical()));
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    for p in &all {
        assert_eq!(
            p.to_string()
                .parse::<ternalg_core::ContractionPattern>()
                .unwrap(),
            *p
        );
    }
}
