use lueroth_kit::poly::monomial_exponents;
use lueroth_kit::repcheck::{
    class_of, decompose_s4, peel, permutes_frame, rep_table, s4_group, sl2_plethysm, standard_character,
    sym2_character, ClassFunction, WeightMultiset, CLASS_SIZES,
};
use lueroth_kit::{Group, Scalar, TernaryForm};
use num_rational::Rational64;
use proptest::prelude::*;

// Trace of g acting on quadrics by substitution, computed from the 6x6
// matrix of q -> q(g x) on monomials.
fn quadric_trace(a: &[[i64; 3]; 3]) -> i64 {
    let g = a.map(|r| r.map(Scalar::from_int));
    let monos = monomial_exponents(2);
    let mut tr = Scalar::zero();
    for (k, m) in monos.iter().enumerate() {
        let mut c = vec![Scalar::zero(); 6];
        c[k] = Scalar::one();
        let q = TernaryForm::from_coefficients(Group::X, 2, &c).unwrap().compose(&g);
        tr += &q.poly().coeff_in(Group::X, *m);
    }
    tr.to_rational().unwrap().to_integer().try_into().unwrap()
}

#[test]
fn group_is_s4_in_sl3() {
    let g = s4_group();
    assert_eq!(g.len(), 24);
    let mut sizes = [0i64; 5];
    for (p, a) in &g {
        assert!(permutes_frame(a, p));
        let d = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        assert_eq!(d, 1);
        sizes[class_of(p)] += 1;
    }
    assert_eq!(sizes, CLASS_SIZES);
}

#[test]
fn quadric_character_matches_substitution() {
    let chi = sym2_character();
    for (p, a) in s4_group() {
        assert_eq!(Rational64::from_integer(quadric_trace(&a)), chi.0[class_of(&p)]);
    }
    assert_eq!(decompose_s4(&chi).unwrap().to_string(), "V3 + V2 + 1");
    assert_eq!(chi, standard_character().sym2());
}

#[test]
fn plane_and_wedge_decompositions() {
    assert_eq!(decompose_s4(&standard_character()).unwrap().to_string(), "V3'");
    let w = decompose_s4(&sym2_character().wedge2()).unwrap();
    assert_eq!(w.dim(), 15);
    assert_eq!(w.to_string(), "2V3' + 2V3 + V2 + eps");
}

#[test]
fn table_rows_agree() {
    for row in rep_table().unwrap() {
        if row.blocking {
            assert_eq!(row.agrees, Some(true), "{}", row.id);
        }
    }
}

#[test]
fn plethysms() {
    let v2 = WeightMultiset::irreducible(2);
    let fmt = |m: std::collections::BTreeMap<u32, u64>| lueroth_kit::repcheck::format_sl2(&m);
    assert_eq!(fmt(sl2_plethysm(2, &v2).unwrap()), "V(4) + V(0)");
    assert_eq!(fmt(sl2_plethysm(4, &v2).unwrap()), "V(8) + V(4) + V(0)");
}

#[test]
fn products_of_irreducibles_decompose() {
    for i in 0..5 {
        for j in 0..5 {
            let a = ClassFunction::irreducible(i);
            let b = ClassFunction::irreducible(j);
            let d = decompose_s4(&a.mul(&b)).unwrap();
            assert_eq!(Rational64::from_integer(d.dim() as i64), a.dim() * b.dim());
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn symmetric_powers_of_irreducibles(n in 0u32..=6, k in 0u32..=5) {
        let w = WeightMultiset::irreducible(n).sym_power(k);
        prop_assert!(w.is_symmetric());
        prop_assert_eq!(w.dim(), binomial((n + k) as u64, k as u64));
        let parts = peel(&w).unwrap();
        let total: u64 = parts.iter().map(|(m, c)| (*m as u64 + 1) * c).sum();
        prop_assert_eq!(total, w.dim());
        // Hermite reciprocity
        prop_assert_eq!(parts, peel(&WeightMultiset::irreducible(k).sym_power(n)).unwrap());
    }
}
