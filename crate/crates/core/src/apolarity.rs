//! Catalecticants of plane quartics, Clebsch quartics (sums of five fourth
//! powers) and the space of Lüroth quartics through the vertices of a pentagon.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::ExactMatrix;
use crate::poly::{exponent_in, monomial_exponents, Group, Poly, TernaryForm};

/// Labels of the monomial basis of `Sym^2`: `11, 12, 13, 22, 23, 33`.
pub const SYM2_LABELS: [&str; 6] = ["11", "12", "13", "22", "23", "33"];

/// The catalecticant map of a quartic.
///
/// Row and column `m` correspond to the second-order operator `d^m` on the
/// monomial basis of `Sym^2`; entry `(m, n)` is the constant `d^m d^n f`.
/// With this normalization the Fermat quartic has kernel `{e1e2, e1e3, e2e3}`.
#[derive(Clone, Debug)]
pub struct CatalecticantData {
    pub quartic: TernaryForm,
    pub matrix: ExactMatrix,
    pub operator_labels: [&'static str; 6],
    pub conic_labels: [&'static str; 6],
}

impl CatalecticantData {
    pub fn det(&self) -> Scalar {
        self.matrix.det().expect("square")
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

fn require_quartic(f: &TernaryForm) -> Result<()> {
    if f.degree() != 4 || f.group() != Group::X {
        return Err(Error::Degree { expected: "quartic in x".into(), got: format!("degree {} form", f.degree()) });
    }
    Ok(())
}

pub fn catalecticant(f: &TernaryForm) -> Result<CatalecticantData> {
    require_quartic(f)?;
    let ops: Vec<Poly> = monomial_exponents(2)
        .into_iter()
        .map(|m| Poly::monomial(Field::Rational, exponent_in(Group::X, m), Scalar::one()))
        .collect();
    // second derivatives d^m f, then d^n of those
    let seconds: Vec<Poly> = ops.iter().map(|op| f.poly().apply_operator(op, Group::X, Group::X)).collect();
    let mut m = ExactMatrix::zeros(6, 6);
    for (i, s) in seconds.iter().enumerate() {
        for (j, op) in ops.iter().enumerate() {
            let v = s.apply_operator(op, Group::X, Group::X);
            m.set(i, j, v.coeff(&[0; 6]).coerce(f.field())?);
        }
    }
    Ok(CatalecticantData { quartic: f.clone(), matrix: m, operator_labels: SYM2_LABELS, conic_labels: SYM2_LABELS })
}

/// Kernel of the catalecticant as dual conics (forms in `e`), in canonical
/// reduced-basis order.
pub fn catalecticant_kernel(f: &TernaryForm) -> Result<Vec<TernaryForm>> {
    let cat = catalecticant(f)?;
    cat.matrix
        .kernel_basis()
        .into_iter()
        .map(|v| TernaryForm::from_coefficients(Group::E, 2, &v))
        .collect()
}

/// `l1^4 + ... + ln^4` for lines given by coefficient triples.
pub fn clebsch_from_lines(lines: &[[Scalar; 3]]) -> TernaryForm {
    let field = lines.iter().flatten().fold(Field::Rational, |f, c| f.join(c.field()).expect("field"));
    let mut acc = Poly::zero(field);
    for l in lines {
        acc = &acc + &Poly::linear(Group::X, l).pow(4);
    }
    TernaryForm::new(acc, Group::X, 4).expect("sum of fourth powers is a quartic")
}

/// Five lines and their ten pairwise intersection points.
#[derive(Clone, Debug)]
pub struct Pentagon {
    lines: [[Scalar; 3]; 5],
    vertices: Vec<(usize, usize, [Scalar; 3])>,
    generic: bool,
}

pub fn cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn dot(a: &[Scalar; 3], b: &[Scalar; 3]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Pentagon {
    /// Fails if two of the lines are proportional; three concurrent lines
    /// only clear the genericity flag.
    pub fn new(lines: [[Scalar; 3]; 5]) -> Result<Self> {
        let mut vertices = Vec::with_capacity(10);
        for i in 0..5 {
            for j in i + 1..5 {
                let v = cross(&lines[i], &lines[j]);
                if v.iter().all(Scalar::is_zero) {
                    return Err(Error::Degenerate(format!("lines {} and {} are proportional", i + 1, j + 1)));
                }
                vertices.push((i, j, v));
            }
        }
        let mut generic = true;
        'outer: for i in 0..5 {
            for j in i + 1..5 {
                for k in j + 1..5 {
                    if dot(&cross(&lines[i], &lines[j]), &lines[k]).is_zero() {
                        generic = false;
                        break 'outer;
                    }
                }
            }
        }
        Ok(Pentagon { lines, vertices, generic })
    }

    pub fn lines(&self) -> &[[Scalar; 3]; 5] {
        &self.lines
    }

    /// `(i, j, l_i ∧ l_j)` for `i < j`.
    pub fn vertices(&self) -> &[(usize, usize, [Scalar; 3])] {
        &self.vertices
    }

    /// No three of the lines are concurrent.
    pub fn is_generic(&self) -> bool {
        self.generic
    }

    pub fn field(&self) -> Field {
        self.lines.iter().flatten().fold(Field::Rational, |f, c| f.join(c.field()).expect("field"))
    }
}

/// Canonical basis of the quartics through all ten vertices of a generic
/// pentagon (dimension 5 for generic pentagons).
pub fn lueroth_space_from_pentagon(p: &Pentagon) -> Result<Vec<TernaryForm>> {
    if !p.is_generic() {
        return Err(Error::Degenerate("three of the pentagon lines are concurrent".into()));
    }
    let m = vertex_evaluation_matrix(p);
    m.kernel_basis().into_iter().map(|v| TernaryForm::from_coefficients(Group::X, 4, &v)).collect()
}

/// The 10 x 15 matrix of quartic monomials evaluated at the vertices.
pub fn vertex_evaluation_matrix(p: &Pentagon) -> ExactMatrix {
    let monos = monomial_exponents(4);
    let rows = p
        .vertices()
        .iter()
        .map(|(_, _, v)| {
            monos
                .iter()
                .map(|m| (0..3).fold(Scalar::one(), |acc, i| &acc * &v[i].pow(m[i] as u32)))
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).expect("rectangular")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn quartic(s: &str) -> TernaryForm {
        TernaryForm::parse(Field::Rational, Group::X, 4, s).unwrap()
    }

    fn line(v: [i64; 3]) -> [Scalar; 3] {
        v.map(Scalar::from_int)
    }

    #[test]
    fn fourth_power_has_rank_one() {
        assert_eq!(catalecticant(&quartic("x1^4")).unwrap().rank(), 1);
        assert_eq!(catalecticant(&quartic("(x1 - 2*x2 + 3*x3)^4")).unwrap().rank(), 1);
    }

    #[test]
    fn catalecticant_is_symmetric() {
        let c = catalecticant(&quartic("x1^3*x2 - 4*x2^2*x3^2 + x1*x2*x3^2 + 7*x3^4")).unwrap();
        assert!(c.matrix.is_symmetric());
    }

    #[test]
    fn fermat_kernel() {
        let k = catalecticant_kernel(&quartic("x1^4 + x2^4 + x3^4")).unwrap();
        let want: Vec<Poly> = ["e1*e2", "e1*e3", "e2*e3"].iter().map(|s| Poly::parse(Field::Rational, s).unwrap()).collect();
        let got: Vec<Poly> = k.into_iter().map(TernaryForm::into_poly).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn wrong_degree_rejected() {
        let c = TernaryForm::parse(Field::Rational, Group::X, 3, "x1^3").unwrap();
        assert!(catalecticant(&c).is_err());
    }

    #[test]
    fn clebsch_builder() {
        let z = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        let f = clebsch_from_lines(&[line([1, 0, 0]), line([0, 1, 0]), line([0, 0, 1]), z.clone(), z]);
        assert_eq!(f, quartic("x1^4 + x2^4 + x3^4"));
        let l = line([1, -1, 2]);
        let f = clebsch_from_lines(&[l.clone(), l.clone(), l.clone(), l.clone(), l]);
        assert_eq!(f, quartic("5*(x1 - x2 + 2*x3)^4"));
    }

    #[test]
    fn clebsch_kernel_is_apolar_conic() {
        let lines = [line([1, 2, -1]), line([3, -1, 2]), line([0, 1, 4]), line([2, 2, 1]), line([-1, 3, 1])];
        let f = clebsch_from_lines(&lines);
        let cat = catalecticant(&f).unwrap();
        assert!(cat.det().is_zero());
        let k = catalecticant_kernel(&f).unwrap();
        assert_eq!(k.len(), 1);
        for l in &lines {
            assert!(k[0].eval(l).unwrap().is_zero());
        }
    }

    fn example_pentagon() -> Pentagon {
        Pentagon::new([line([1, 0, 0]), line([0, 1, 0]), line([0, 0, 1]), line([1, 1, 1]), line([1, 2, 3])]).unwrap()
    }

    #[test]
    fn pentagon_space_has_dimension_five() {
        let p = example_pentagon();
        assert!(p.is_generic());
        assert_eq!(vertex_evaluation_matrix(&p).rank(), 10);
        let basis = lueroth_space_from_pentagon(&p).unwrap();
        assert_eq!(basis.len(), 5);
        let corner = [Scalar::zero(), Scalar::zero(), Scalar::one()];
        for q in &basis {
            assert!(q.eval(&corner).unwrap().is_zero());
        }
    }

    #[test]
    fn product_of_four_lines_lies_in_space() {
        let p = example_pentagon();
        let basis = lueroth_space_from_pentagon(&p).unwrap();
        let prod = p.lines()[..4].iter().fold(Poly::constant(Scalar::one()), |acc, l| &acc * &Poly::linear(Group::X, l));
        let mut rows: Vec<Vec<Scalar>> = basis.iter().map(TernaryForm::coefficients).collect();
        rows.push(TernaryForm::x(prod, 4).unwrap().coefficients());
        assert_eq!(ExactMatrix::from_rows(rows).unwrap().rank(), 5);
    }

    #[test]
    fn degenerate_pentagons() {
        let concurrent =
            Pentagon::new([line([1, 0, 0]), line([0, 1, 0]), line([1, 1, 0]), line([0, 0, 1]), line([1, 2, 3])]).unwrap();
        assert!(!concurrent.is_generic());
        assert!(matches!(lueroth_space_from_pentagon(&concurrent), Err(Error::Degenerate(_))));
        assert!(Pentagon::new([line([1, 0, 0]), line([2, 0, 0]), line([0, 0, 1]), line([1, 1, 1]), line([1, 2, 3])])
            .is_err());
    }
}
