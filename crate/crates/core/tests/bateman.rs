use lueroth_kit::bateman::{b_pairing, bateman_tuple, d2_check, normal_form, project_v01, syzygy_from_qc, v12_project, BatemanTuple, PAIRS};
use lueroth_kit::instances::{random_bateman_pair, random_form, rng};
use lueroth_kit::morley::example_instance;
use lueroth_kit::poly::{det3, gram};
use lueroth_kit::{adjugate_conic, Field, Group, Poly, Scalar, TernaryForm, Var};
use proptest::prelude::*;

fn form(g: Group, d: u32, s: &str) -> TernaryForm {
    TernaryForm::parse(Field::Rational, g, d, s).unwrap()
}

fn ints(v: [i64; 6]) -> [Scalar; 6] {
    v.map(Scalar::from_int)
}

// Whole-polynomial oracle: build sum_i dQ*/de_i * dC/dx_i, subtract
// 1/4 (x.e) times its divergence and read off third derivatives.
fn oracle(qstar: &TernaryForm, c: &TernaryForm) -> [[Scalar; 6]; 3] {
    let raw = (0..3).fold(Poly::zero(Field::Rational), |acc, i| {
        &acc + &(&qstar.poly().diff(Var::E(i)) * &c.poly().diff(Var::X(i)))
    });
    let div = (0..3).fold(Poly::zero(Field::Rational), |acc, i| &acc + &raw.diff(Var::E(i)).diff(Var::X(i)));
    let xe = (0..3).fold(Poly::zero(Field::Rational), |acc, i| &acc + &(&Poly::x(i) * &Poly::e(i)));
    let t = &raw - &(&xe * &div).scale(&Scalar::from_frac(1, 4));
    std::array::from_fn(|i| {
        std::array::from_fn(|p| {
            let (j, k) = PAIRS[p];
            let d = t.diff(Var::E(i)).diff(Var::X(j)).diff(Var::X(k));
            d.coeff(&[0; 6])
        })
    })
}

#[test]
fn example_tuple_pinned() {
    let (qs, c) = example_instance();
    let t = b_pairing(&qs, &c).unwrap();
    let expected = [
        ints([12, -6, 0, -12, -12, -12]),
        ints([-12, -6, -12, 12, 0, -12]),
        ints([-12, -12, -6, -12, -6, 0]),
    ];
    assert_eq!(t.coords(), &expected);
    assert_eq!(&oracle(&qs, &c), &expected);
    assert!(t.is_projected());
    assert!(t.divergence().is_zero());
}

#[test]
fn pairing_matches_polynomial_oracle() {
    let mut r = rng(2024);
    for _ in 0..20 {
        let qs = random_form(&mut r, Group::E, 2, 5);
        let c = random_form(&mut r, Group::X, 3, 5);
        assert_eq!(b_pairing(&qs, &c).unwrap().coords(), &oracle(&qs, &c));
    }
}

#[test]
fn normal_form_relation() {
    let mut r = rng(17);
    for _ in 0..50 {
        let (q, c) = random_bateman_pair(&mut r).unwrap();
        let (nf, a) = normal_form(&syzygy_from_qc(&q, &c).unwrap()).unwrap();
        assert!(nf.is_normal());
        assert_eq!(a.rows(), 3);
        let scale = &Scalar::from_int(4) * &det3(&gram(&q));
        assert_eq!(v12_project(&nf).unwrap().scale(&scale).coords(), bateman_tuple(&q, &c).unwrap().coords());
    }
}

#[test]
fn normal_form_examples() {
    let c = form(Group::X, 3, "x1^3 - x2*x3^2");
    let (_, a) = normal_form(&syzygy_from_qc(&form(Group::X, 2, "x1^2 + x2^2 + x3^2"), &c).unwrap()).unwrap();
    let half = Scalar::from_frac(1, 2);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(a.get(i, j), &if i == j { half.clone() } else { Scalar::zero() });
        }
    }
    let dependent = syzygy_from_qc(&form(Group::X, 2, "x1^2"), &c).unwrap();
    assert!(normal_form(&dependent).is_err());
}

#[test]
fn pure_trace_direction_projects_to_zero() {
    let l = Poly::parse(Field::Rational, "3*x1 - x2 + 5*x3").unwrap();
    let q: [Poly; 3] = std::array::from_fn(|i| &Poly::x(i) * &l);
    assert!(project_v01(&q).iter().all(Poly::is_zero));
}

#[test]
fn d2_of_adjugate_is_scalar() {
    let mut r = rng(4);
    for _ in 0..30 {
        let (q, _) = random_bateman_pair(&mut r).unwrap();
        let rep = d2_check(&adjugate_conic(&q).unwrap(), &q).unwrap();
        assert!(rep.trace_free_zero);
        assert_eq!(rep.scalar, &Scalar::from_int(4) * &det3(&gram(&q)));
    }
    let q = form(Group::X, 2, "x1^2");
    assert!(bateman_tuple(&q, &form(Group::X, 3, "x2^3")).unwrap().is_zero());
}

#[test]
fn json_round_trip() {
    let (qs, c) = example_instance();
    let t = b_pairing(&qs, &c).unwrap();
    let back = BatemanTuple::from_json(&t.to_json()).unwrap();
    assert_eq!(back.coords(), t.coords());
}

fn coeffs_form(g: Group, d: u32, v: &[i64]) -> TernaryForm {
    let c: Vec<Scalar> = v.iter().map(|&x| Scalar::from_int(x)).collect();
    TernaryForm::from_coefficients(g, d, &c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bilinear(q in prop::collection::vec(-6i64..=6, 6), c in prop::collection::vec(-6i64..=6, 10),
                c2 in prop::collection::vec(-6i64..=6, 10), l in -5i64..=5, m in -5i64..=5) {
        let qs = coeffs_form(Group::E, 2, &q);
        let (c, c2) = (coeffs_form(Group::X, 3, &c), coeffs_form(Group::X, 3, &c2));
        let (l, m) = (Scalar::from_int(l), Scalar::from_int(m));
        let lhs = b_pairing(&qs.scale(&l), &c.scale(&m)).unwrap();
        let rhs = b_pairing(&qs, &c).unwrap().scale(&(&l * &m));
        prop_assert_eq!(lhs.coords(), rhs.coords());
        let sum = TernaryForm::x(c.poly() + c2.poly(), 3);
        if let Ok(sum) = sum {
            let lhs = b_pairing(&qs, &sum).unwrap();
                let rhs = b_pairing(&qs, &c).unwrap().add(&b_pairing(&qs, &c2).unwrap());
            prop_assert_eq!(lhs.coords(), rhs.coords());
        }
    }

    #[test]
    fn projection_is_idempotent_with_zero_divergence(c in prop::collection::vec(-9i64..=9, 18)) {
        let row: [Poly; 3] = std::array::from_fn(|i| coeffs_form(Group::X, 2, &c[6 * i..6 * i + 6]).into_poly());
        let p = project_v01(&row);
        let div = (0..3).fold(Poly::zero(Field::Rational), |acc, i| &acc + &p[i].diff(Var::X(i)));
        prop_assert!(div.is_zero());
        prop_assert_eq!(project_v01(&p), p.clone());
        prop_assert!(BatemanTuple::from_second_row(&p).unwrap().divergence().is_zero());
    }
}
