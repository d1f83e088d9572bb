use lueroth_kit::apolarity::{clebsch_from_lines, Pentagon};
use lueroth_kit::instances::{random_form, random_line, random_pentagon, random_unimodular, rng};
use lueroth_kit::scorza::{scorza_fast, scorza_naive, sym_tensor};
use lueroth_kit::{Field, Group, Scalar, TernaryForm};
use proptest::prelude::*;

fn quartic(s: &str) -> TernaryForm {
    TernaryForm::parse(Field::Rational, Group::X, 4, s).unwrap()
}

fn form_from(coeffs: &[i64]) -> TernaryForm {
    let c: Vec<Scalar> = coeffs.iter().map(|&v| Scalar::from_int(v)).collect();
    TernaryForm::from_coefficients(Group::X, 4, &c).unwrap()
}

#[test]
fn fast_matches_naive_on_random_quartics() {
    let mut r = rng(20);
    for _ in 0..20 {
        let f = random_form(&mut r, Group::X, 4, 5);
        assert_eq!(scorza_fast(&f).unwrap(), scorza_naive(&f).unwrap(), "{f}");
    }
}

#[test]
fn fermat_quartic_pinned() {
    // Three fourth powers: any four symbols reuse a line, so every term has
    // a bracket with a repeated vector.
    let f = quartic("x1^4 + x2^4 + x3^4");
    let naive = scorza_naive(&f).unwrap();
    assert!(naive.poly().is_zero());
    assert_eq!(scorza_fast(&f).unwrap(), naive);
}

#[test]
fn fourth_power_of_a_line_vanishes() {
    let f = quartic("(2*x1 - x2 + 3*x3)^4");
    assert!(scorza_fast(&f).unwrap().poly().is_zero());
    assert!(scorza_naive(&f).unwrap().poly().is_zero());
}

#[test]
fn clebsch_quartic_has_nonzero_image() {
    let mut r = rng(7);
    let lines: Vec<[Scalar; 3]> = (0..5).map(|_| random_line(&mut r, 4)).collect();
    let s = scorza_fast(&clebsch_from_lines(&lines)).unwrap();
    assert!(!s.poly().is_zero());
}

#[test]
fn equivariance_under_unimodular_substitution() {
    let mut r = rng(11);
    for _ in 0..10 {
        let f = random_form(&mut r, Group::X, 4, 3);
        let g = random_unimodular(&mut r);
        assert_eq!(scorza_fast(&f.compose(&g)).unwrap(), scorza_fast(&f).unwrap().compose(&g));
    }
}

#[test]
fn image_of_clebsch_passes_through_pentagon_vertices() {
    let mut r = rng(5);
    for _ in 0..5 {
        let p: Pentagon = random_pentagon(&mut r).unwrap();
        let s = scorza_fast(&clebsch_from_lines(p.lines())).unwrap();
        for (_, _, v) in p.vertices() {
            assert!(s.eval(v).unwrap().is_zero());
        }
    }
}

#[test]
fn tensor_round_trip() {
    let mut r = rng(3);
    for _ in 0..10 {
        let f = random_form(&mut r, Group::X, 4, 9);
        assert_eq!(sym_tensor(&f).unwrap().to_form(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_four_in_coefficients(coeffs in prop::collection::vec(-4i64..=4, 15), l in -3i64..=3) {
        let f = form_from(&coeffs);
        let lambda = Scalar::from_int(l);
        let lhs = scorza_fast(&f.scale(&lambda)).unwrap();
        let rhs = scorza_fast(&f).unwrap().scale(&lambda.pow(4));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_is_symmetric(coeffs in prop::collection::vec(-6i64..=6, 15), i in 0usize..3, j in 0usize..3, k in 0usize..3, l in 0usize..3) {
        let t = sym_tensor(&form_from(&coeffs)).unwrap();
        let v = t.get([i, j, k, l]).clone();
        prop_assert_eq!(&v, t.get([l, k, j, i]));
        prop_assert_eq!(&v, t.get([j, i, l, k]));
        prop_assert_eq!(&v, t.get([k, l, i, j]));
    }
}
