use ternalg_core::brackets::{
    build_table, compare_golden, ternary_bracket, BracketKind, Generator, GeneratorBasis,
    GoldenTable,
};
use ternalg_core::cubic::CubicMatrix;
use ternalg_core::sampling::{sample_scalar, stream_rng};
use ternalg_core::{Ring, Scalar};

use Generator::*;

const GOLDEN: &str = include_str!("../../../golden/jtable_n2.json");

#[test]
fn golden_file_transcribes_the_full_table() {
    let golden = GoldenTable::from_json(GOLDEN).unwrap();
    assert_eq!(golden.kind, BracketKind::J);
    assert_eq!(golden.rows.len(), 112);
}

/// The three transcribed rows that disagree with exact computation. Every
/// other row matches; these are kept verbatim in the golden file.
#[test]
fn golden_mismatches_are_the_known_suspected_typos() {
    let table = build_table(BracketKind::J);
    let diff = compare_golden(&table, &GoldenTable::from_json(GOLDEN).unwrap()).unwrap();
    let found: Vec<(usize, [Generator; 3])> =
        diff.mismatches.iter().map(|m| (m.row, m.args)).collect();
    assert_eq!(
        found,
        vec![
            (72, [Eta2, Om2, Eta2]),
            (105, [Eta1, Rho1, Om1]),
            (112, [Eta2, Rho2, Om2])
        ]
    );
    let j = Scalar::j();
    assert!(table
        .get(&[Eta2, Om2, Eta2])
        .unwrap()
        .iter()
        .all(Ring::is_zero));
    assert_eq!(table.get(&[Eta1, Rho1, Om1]).unwrap()[Rhob1.index()], j);
    assert_eq!(table.get(&[Eta2, Rho2, Om2]).unwrap()[Rhob2.index()], j);
    // the 1↔2 mirror of the first row is printed as zero and computes to zero
    assert!(table
        .get(&[Eta1, Om1, Eta1])
        .unwrap()
        .iter()
        .all(Ring::is_zero));
}

#[test]
fn j_bracket_is_j_skew_on_basis_and_random_triples() {
    let basis: Vec<CubicMatrix> = (0..8).map(|k| CubicMatrix::basis(2, k)).collect();
    let br = |a: &CubicMatrix, b: &CubicMatrix, c: &CubicMatrix| {
        ternary_bracket(BracketKind::J, a, b, c).unwrap()
    };
    for a in &basis {
        for b in &basis {
            for c in &basis {
                let abc = br(a, b, c);
                assert_eq!(abc, br(b, c, a).scale(&Scalar::j()));
                assert_eq!(abc, br(c, a, b).scale(&Scalar::j2()));
            }
        }
    }
    let mut rng = stream_rng(2, &[]);
    for _ in 0..10 {
        let a = CubicMatrix::from_fn(2, |_, _, _| sample_scalar(&mut rng));
        assert!(br(&a, &a, &a).is_zero());
    }
}

#[test]
fn brackets_of_any_order() {
    let mut rng = stream_rng(3, &[]);
    let [a, b, c] =
        std::array::from_fn(|_| CubicMatrix::from_fn(3, |_, _, _| sample_scalar(&mut rng)));
    let abc = ternary_bracket(BracketKind::J2, &a, &b, &c).unwrap();
    assert_eq!(
        abc,
        ternary_bracket(BracketKind::J2, &b, &c, &a)
            .unwrap()
            .scale(&Scalar::j2())
    );
    assert!(ternary_bracket(BracketKind::J, &a, &b, &CubicMatrix::zeros(2)).is_err());
}

#[test]
fn table_is_deterministic_across_pools() {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let three = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let a = one.install(|| build_table(BracketKind::Anti));
    let b = three.install(|| build_table(BracketKind::Anti));
    assert_eq!(a.to_json().to_string(), b.to_json().to_string());
}

#[test]
fn generators_span_order_two() {
    let basis = GeneratorBasis::new();
    for k in 0..8 {
        let unit = CubicMatrix::basis(2, k);
        assert_eq!(basis.combine(&basis.coords(&unit).unwrap()), unit);
    }
}
