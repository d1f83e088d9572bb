//! The Scorza covariant of a plane quartic.
//!
//! Writing the quartic symbolically as `α_x^4 = β_x^4 = γ_x^4 = δ_x^4`, the
//! covariant is the contraction
//!
//! ```text
//! (αβγ)(αβδ)(αγδ)(βγδ) α_x β_x γ_x δ_x
//! ```
//!
//! where each bracket is a determinant (a contraction with the Levi-Civita
//! symbol) and every symbol stands for the fully symmetric tensor `F` of the
//! quartic. Slot usage per symbol: α feeds brackets 1, 2, 3; β feeds 1, 2, 4;
//! γ feeds 1, 3, 4; δ feeds 2, 3, 4; the fourth slot of each goes to `x`.
//! No normalizing factor is applied to the raw contraction.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::{exponent_in, monomial_exponents, Group, Poly, TernaryForm, Var};

/// Fully symmetric 3x3x3x3 tensor with `F(x, x, x, x) = f(x)`.
///
/// Only the 15 distinct entries are stored, indexed like
/// [`monomial_exponents`]`(4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymQuarticTensor {
    entries: Vec<Scalar>,
    field: Field,
}

/// `4! / (a! b! c!)`.
fn multinomial(e: [u8; 3]) -> i64 {
    let fact = |n: u8| (1..=n as i64).product::<i64>();
    24 / (fact(e[0]) * fact(e[1]) * fact(e[2]))
}

fn exponent_of(idx: [usize; 4]) -> [u8; 3] {
    let mut e = [0u8; 3];
    for i in idx {
        e[i] += 1;
    }
    e
}

fn monomial_position(e: [u8; 3]) -> usize {
    // position in descending-lex order of degree 4 exponents
    let a = e[0] as usize;
    let b = e[1] as usize;
    let before_a: usize = (a + 1..=4).map(|k| 4 - k + 1).sum();
    before_a + (4 - a - b)
}

impl SymQuarticTensor {
    pub fn from_form(f: &TernaryForm) -> Result<Self> {
        require_quartic(f)?;
        let entries = monomial_exponents(4)
            .into_iter()
            .map(|m| &f.poly().coeff_in(Group::X, m) / &Scalar::from_int(multinomial(m)))
            .collect();
        Ok(SymQuarticTensor { entries, field: f.field() })
    }

    pub fn get(&self, idx: [usize; 4]) -> &Scalar {
        &self.entries[monomial_position(exponent_of(idx))]
    }

    pub fn to_form(&self) -> TernaryForm {
        let coeffs: Vec<Scalar> = monomial_exponents(4)
            .into_iter()
            .zip(&self.entries)
            .map(|(m, v)| v * &Scalar::from_int(multinomial(m)))
            .collect();
        TernaryForm::from_coefficients(Group::X, 4, &coeffs).expect("15 coefficients")
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

pub fn sym_tensor(f: &TernaryForm) -> Result<SymQuarticTensor> {
    SymQuarticTensor::from_form(f)
}

fn require_quartic(f: &TernaryForm) -> Result<()> {
    if f.degree() != 4 || f.group() != Group::X {
        return Err(Error::Degree { expected: "quartic in x".into(), got: format!("degree {} form", f.degree()) });
    }
    Ok(())
}

/// Levi-Civita symbol.
pub(crate) fn epsilon(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        return 0;
    }
    // even permutations of (0, 1, 2) are its cyclic shifts
    if (j + 3 - i) % 3 == 1 {
        1
    } else {
        -1
    }
}

/// The contraction as a literal sum over all 3^16 index assignments.
///
/// Slow (tens of millions of iterations); kept as the reference the fast
/// path is checked against.
pub fn scorza_naive(f: &TernaryForm) -> Result<TernaryForm> {
    let t = SymQuarticTensor::from_form(f)?;
    let flat: Vec<Scalar> = (0..81).map(|n| t.get(digits(n)).clone()).collect();
    let mut eps = [0i64; 27];
    for (n, e) in eps.iter_mut().enumerate() {
        *e = epsilon(n / 9, (n / 3) % 3, n % 3);
    }
    let mut out: Vec<Scalar> = vec![Scalar::zero(); 15];
    let mut idx = [0usize; 16];
    // idx layout: a0..a3, b0..b3, c0..c3, d0..d3
    loop {
        let (a, b, c, d) = (&idx[0..4], &idx[4..8], &idx[8..12], &idx[12..16]);
        let s = eps[a[0] * 9 + b[0] * 3 + c[0]]
            * eps[a[1] * 9 + b[1] * 3 + d[0]]
            * eps[a[2] * 9 + c[1] * 3 + d[1]]
            * eps[b[2] * 9 + c[2] * 3 + d[2]];
        if s != 0 {
            let term = &(&flat[flat_index(a)] * &flat[flat_index(b)]) * &(&flat[flat_index(c)] * &flat[flat_index(d)]);
            if !term.is_zero() {
                let pos = monomial_position(exponent_of([a[3], b[3], c[3], d[3]]));
                if s > 0 {
                    out[pos] += &term;
                } else {
                    out[pos] -= &term;
                }
            }
        }
        // odometer
        let mut k = 15;
        loop {
            idx[k] += 1;
            if idx[k] < 3 {
                break;
            }
            idx[k] = 0;
            if k == 0 {
                return finish(out, t.field());
            }
            k -= 1;
        }
    }
}

fn digits(n: usize) -> [usize; 4] {
    [n / 27, (n / 9) % 3, (n / 3) % 3, n % 3]
}

fn flat_index(i: &[usize]) -> usize {
    i[0] * 27 + i[1] * 9 + i[2] * 3 + i[3]
}

fn finish(coeffs: Vec<Scalar>, field: Field) -> Result<TernaryForm> {
    let coeffs: Vec<Scalar> = coeffs.into_iter().map(|c| c.coerce(field)).collect::<Result<_>>()?;
    let poly = Poly::from_terms(field, monomial_exponents(4).into_iter().map(|m| exponent_in(Group::X, m)).zip(coeffs))?;
    TernaryForm::new(poly, Group::X, 4)
}

/// The six permutations of `(0, 1, 2)` with their signs.
const PERMS: [([usize; 3], i64); 6] =
    [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];

type Quadric = [Scalar; 6];

fn linear_times_linear(u: &[Scalar; 3], v: &[Scalar; 3]) -> Quadric {
    // order 11, 12, 13, 22, 23, 33
    [
        &u[0] * &v[0],
        &(&u[0] * &v[1]) + &(&u[1] * &v[0]),
        &(&u[0] * &v[2]) + &(&u[2] * &v[0]),
        &u[1] * &v[1],
        &(&u[1] * &v[2]) + &(&u[2] * &v[1]),
        &u[2] * &v[2],
    ]
}

const QUAD_EXP: [[u8; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

/// Same contraction as [`scorza_naive`], enumerating only the 6^4 nonzero
/// Levi-Civita assignments.
///
/// The symbol with three slots bound to brackets is the linear form
/// `P_ijk(x) = (1/24) d_i d_j d_k f`; pair products `αβ` and `γδ` are
/// precomputed as quadrics and combined per assignment.
pub fn scorza_fast(f: &TernaryForm) -> Result<TernaryForm> {
    require_quartic(f)?;
    let inv24 = Scalar::from_frac(1, 24);
    let mut lin: Vec<[Scalar; 3]> = Vec::with_capacity(27);
    for n in 0..27 {
        let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
        let third = f.poly().diff(Var::X(i)).diff(Var::X(j)).diff(Var::X(k));
        lin.push(std::array::from_fn(|l| {
            let mut e = [0u8; 3];
            e[l] = 1;
            &third.coeff_in(Group::X, e) * &inv24
        }));
    }
    let tri = |a: usize, b: usize, c: usize| a * 9 + b * 3 + c;

    // products of two symbols, keyed by both bracket-index triples
    let mut pair = vec![None::<Quadric>; 729];
    let mut pair_product = |u: usize, v: usize| -> Quadric {
        let slot = &mut pair[u * 27 + v];
        slot.get_or_insert_with(|| linear_times_linear(&lin[u], &lin[v])).clone()
    };

    let mut out: Vec<Scalar> = vec![Scalar::zero(); 15];
    for (p1, s1) in PERMS {
        let (a0, b0, c0) = (p1[0], p1[1], p1[2]);
        for (p2, s2) in PERMS {
            let (a1, b1, d0) = (p2[0], p2[1], p2[2]);
            for (p3, s3) in PERMS {
                let (a2, c1, d1) = (p3[0], p3[1], p3[2]);
                for (p4, s4) in PERMS {
                    let (b2, c2, d2) = (p4[0], p4[1], p4[2]);
                    let ab = pair_product(tri(a0, a1, a2), tri(b0, b1, b2));
                    let cd = pair_product(tri(c0, c1, c2), tri(d0, d1, d2));
                    let sign = s1 * s2 * s3 * s4;
                    for (i, u) in ab.iter().enumerate() {
                        if u.is_zero() {
                            continue;
                        }
                        for (j, v) in cd.iter().enumerate() {
                            if v.is_zero() {
                                continue;
                            }
                            let e = [
                                QUAD_EXP[i][0] + QUAD_EXP[j][0],
                                QUAD_EXP[i][1] + QUAD_EXP[j][1],
                                QUAD_EXP[i][2] + QUAD_EXP[j][2],
                            ];
                            let term = u * v;
                            let pos = monomial_position(e);
                            if sign > 0 {
                                out[pos] += &term;
                            } else {
                                out[pos] -= &term;
                            }
                        }
                    }
                }
            }
        }
    }
    finish(out, f.field())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(s: &str) -> TernaryForm {
        TernaryForm::parse(Field::Rational, Group::X, 4, s).unwrap()
    }

    #[test]
    fn tensor_entries() {
        let t = sym_tensor(&quartic("x1^4")).unwrap();
        assert_eq!(t.get([0, 0, 0, 0]), &Scalar::one());
        assert!(t.get([0, 0, 0, 1]).is_zero());
        let t = sym_tensor(&quartic("x1^3*x2")).unwrap();
        assert_eq!(t.get([0, 1, 0, 0]), &Scalar::from_frac(1, 4));
        assert_eq!(t.get([1, 0, 0, 0]), &Scalar::from_frac(1, 4));
    }

    #[test]
    fn tensor_round_trip() {
        let f = quartic("3*x1^4 - x1^2*x2*x3 + 5/7*x2^3*x3 - x3^4 + 2*x1*x2^2*x3");
        assert_eq!(sym_tensor(&f).unwrap().to_form(), f);
    }

    #[test]
    fn positions_follow_monomial_order() {
        for (k, m) in monomial_exponents(4).into_iter().enumerate() {
            assert_eq!(monomial_position(m), k);
        }
    }

    #[test]
    fn levi_civita() {
        assert_eq!(epsilon(0, 1, 2), 1);
        assert_eq!(epsilon(1, 2, 0), 1);
        assert_eq!(epsilon(1, 0, 2), -1);
        assert_eq!(epsilon(2, 1, 0), -1);
        assert_eq!(epsilon(0, 0, 2), 0);
    }

    #[test]
    fn fourth_power_is_killed() {
        let f = quartic("(2*x1 - x2 + 3*x3)^4");
        assert!(scorza_fast(&f).unwrap().poly().is_zero());
    }

    #[test]
    fn wrong_degree() {
        let c = TernaryForm::parse(Field::Rational, Group::X, 3, "x1^3").unwrap();
        assert!(scorza_fast(&c).is_err());
    }

    #[test]
    fn degree_four_in_coefficients() {
        let f = quartic("x1^4 + 2*x1*x2^3 - x2^2*x3^2 + x1*x2*x3^2 + 3*x3^4 - x1^2*x2^2");
        let lam = Scalar::from_int(-3);
        let lhs = scorza_fast(&f.scale(&lam)).unwrap();
        let rhs = scorza_fast(&f).unwrap().scale(&lam.pow(4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn works_over_quadratic_extension() {
        let field = Field::quadratic(-2).unwrap();
        let f = TernaryForm::parse(field, Group::X, 4, "x1^4 + t*x2^4 + x3^4 + x1*x2*x3^2").unwrap();
        let s = scorza_fast(&f).unwrap();
        assert_eq!(s.field(), field);
        assert!(!s.poly().is_zero());
    }
}
