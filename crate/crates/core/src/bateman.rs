//! Bateman seven-tuples: syzygy matrices built from a conic and a cubic,
//! their normal form, the projection onto the `V(1,2)` summand and the
//! bilinear pairing `b(Q*, C)`.
//!
//! A second row `(q1, q2, q3)` is identified with the tensor
//! `T = q1 e1 + q2 e2 + q3 e3` of bidegree (2 in `x`, 1 in `e`). Its
//! coordinates are `d_i_jk = ∂/∂e_i ∂/∂x_j ∂/∂x_k T` (so the coefficient of
//! `e_i x_j^2` is `d_i_jj / 2`).

use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::json::{encode_scalar, CoeffJson, FieldJson};
use crate::linalg::ExactMatrix;
use crate::poly::{adjugate3, adjugate_conic, det3, exponent_in, gram, Group, Poly, TernaryForm, Var};

/// Unordered pairs `(j, k)`, `j <= k`, in the order `11, 12, 13, 22, 23, 33`.
pub const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

pub(crate) fn pair_index(j: usize, k: usize) -> usize {
    let (j, k) = if j <= k { (j, k) } else { (k, j) };
    PAIRS.iter().position(|&p| p == (j, k)).expect("indices below 3")
}

/// A 2x3 matrix of forms: three linear forms over three quadrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyMatrix {
    linear: [Poly; 3],
    quadratic: [Poly; 3],
}

impl SyzygyMatrix {
    pub fn new(linear: [Poly; 3], quadratic: [Poly; 3]) -> Result<Self> {
        for l in &linear {
            TernaryForm::x(l.clone(), 1)?;
        }
        for q in &quadratic {
            TernaryForm::x(q.clone(), 2)?;
        }
        Ok(SyzygyMatrix { linear, quadratic })
    }

    pub fn linear(&self) -> &[Poly; 3] {
        &self.linear
    }

    pub fn quadratic(&self) -> &[Poly; 3] {
        &self.quadratic
    }

    /// First row is exactly `(x1, x2, x3)`.
    pub fn is_normal(&self) -> bool {
        (0..3).all(|i| self.linear[i] == Poly::x(i))
    }

    /// Coefficient matrix of the first row: column `j` holds the
    /// coefficients of `l_j`.
    fn linear_matrix(&self) -> [[Scalar; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut e = [0u8; 3];
                e[i] = 1;
                self.linear[j].coeff_in(Group::X, e)
            })
        })
    }
}

impl fmt::Display for SyzygyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{} | {} | {}]", self.linear[0], self.linear[1], self.linear[2])?;
        write!(f, "[{} | {} | {}]", self.quadratic[0], self.quadratic[1], self.quadratic[2])
    }
}

fn require(form: &TernaryForm, group: Group, degree: u32, what: &str) -> Result<()> {
    if form.group() != group || form.degree() != degree {
        return Err(Error::Degree { expected: what.into(), got: form.to_string() });
    }
    Ok(())
}

/// First row the partials of `q`, second row the partials of `c`.
pub fn syzygy_from_qc(q: &TernaryForm, c: &TernaryForm) -> Result<SyzygyMatrix> {
    require(q, Group::X, 2, "conic in x")?;
    require(c, Group::X, 3, "cubic in x")?;
    let linear = std::array::from_fn(|i| q.poly().diff(Var::X(i)));
    let quadratic = std::array::from_fn(|i| c.poly().diff(Var::X(i)));
    Ok(SyzygyMatrix { linear, quadratic })
}

/// Column operation `A` with `(l1, l2, l3) A = (x1, x2, x3)`, applied to both rows.
pub fn normal_form(m: &SyzygyMatrix) -> Result<(SyzygyMatrix, ExactMatrix)> {
    let l = ExactMatrix::from_rows(m.linear_matrix().iter().map(|r| r.to_vec()).collect())?;
    let det = l.det()?;
    if det.is_zero() {
        return Err(Error::Degenerate("first-row linear forms are dependent".into()));
    }
    let adj = adjugate3(&m.linear_matrix());
    let inv = det.inv().expect("nonzero");
    let a: [[Scalar; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| &adj[i][j] * &inv));
    let combine = |row: &[Poly; 3]| -> [Poly; 3] {
        std::array::from_fn(|k| {
            let field = row[0].field();
            (0..3).fold(Poly::zero(field), |acc, j| &acc + &row[j].scale(&a[j][k]))
        })
    };
    let linear = combine(&m.linear);
    let quadratic = combine(&m.quadratic);
    let am = ExactMatrix::from_rows(a.iter().map(|r| r.to_vec()).collect())?;
    Ok((SyzygyMatrix { linear, quadratic }, am))
}

/// Where a tuple came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub qstar: TernaryForm,
    pub cubic: TernaryForm,
    /// The conic `Q` itself, when the tuple was built from it.
    pub conic: Option<TernaryForm>,
    /// `det Gram(Q) = 0`: the genericity assumptions fail.
    pub degenerate: bool,
}

/// The 18 coordinates `d_i_jk` of a point of `V ⊗ Sym^2 V*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatemanTuple {
    coords: [[Scalar; 6]; 3],
    field: Field,
    projected: bool,
    provenance: Option<Provenance>,
}

impl BatemanTuple {
    pub fn zero() -> Self {
        BatemanTuple {
            coords: std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero())),
            field: Field::Rational,
            projected: true,
            provenance: None,
        }
    }

    /// From explicit coordinates; `coords[i][p]` is `d_i_jk` for `PAIRS[p] = (j, k)`.
    pub fn from_coords(coords: [[Scalar; 6]; 3]) -> Result<Self> {
        let field = coords.iter().flatten().try_fold(Field::Rational, |f, c| f.join(c.field()))?;
        let mut t = BatemanTuple { coords, field, projected: false, provenance: None };
        t.projected = t.divergence_free();
        Ok(t)
    }

    /// Coordinates of `T = sum_i q_i e_i`.
    pub fn from_second_row(q: &[Poly; 3]) -> Result<Self> {
        let coords = std::array::from_fn(|i| {
            std::array::from_fn(|p| {
                let (j, k) = PAIRS[p];
                q[i].diff(Var::X(j)).diff(Var::X(k)).coeff(&[0; 6])
            })
        });
        for qi in q {
            if !qi.is_zero() && qi.bidegree() != Some((2, 0)) {
                return Err(Error::Degree { expected: "quadric in x".into(), got: qi.to_string() });
            }
        }
        BatemanTuple::from_coords(coords)
    }

    /// The quadrics `q_i` with `T = sum_i q_i e_i`.
    pub fn second_row(&self) -> [Poly; 3] {
        let half = Scalar::from_frac(1, 2);
        std::array::from_fn(|i| {
            let terms = PAIRS.iter().enumerate().map(|(p, &(j, k))| {
                let mut e = [0u8; 3];
                e[j] += 1;
                e[k] += 1;
                let c = if j == k { &self.coords[i][p] * &half } else { self.coords[i][p].clone() };
                (exponent_in(Group::X, e), c)
            });
            Poly::from_terms(self.field, terms).expect("field")
        })
    }

    /// `d_i_jk`, symmetric in `j, k` (zero-based indices).
    pub fn delta(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.coords[i][pair_index(j, k)]
    }

    pub fn coords(&self) -> &[[Scalar; 6]; 3] {
        &self.coords
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_projected(&self) -> bool {
        self.projected
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().flatten().all(Scalar::is_zero)
    }

    /// `sum_i ∂q_i/∂x_i`, the `V(0,1)` component (a linear form).
    pub fn divergence(&self) -> Poly {
        divergence(&self.second_row())
    }

    fn divergence_free(&self) -> bool {
        self.divergence().is_zero()
    }

    pub fn add(&self, other: &BatemanTuple) -> BatemanTuple {
        let coords = std::array::from_fn(|i| std::array::from_fn(|p| &self.coords[i][p] + &other.coords[i][p]));
        BatemanTuple::from_coords(coords).expect("joined field")
    }

    pub fn scale(&self, c: &Scalar) -> BatemanTuple {
        let coords = std::array::from_fn(|i| std::array::from_fn(|p| &self.coords[i][p] * c));
        let mut t = BatemanTuple::from_coords(coords).expect("joined field");
        t.provenance = None;
        t
    }

    /// Flat coordinates in the order `d_1_11, d_1_12, ..., d_3_33`.
    pub fn flat(&self) -> Vec<Scalar> {
        self.coords.iter().flatten().cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("field".into(), serde_json::to_value(FieldJson::from(self.field)).unwrap());
        map.insert("projected".into(), Value::Bool(self.projected));
        for i in 0..3 {
            for (p, &(j, k)) in PAIRS.iter().enumerate() {
                let key = format!("d_{}_{}{}", i + 1, j + 1, k + 1);
                map.insert(key, serde_json::to_value(encode_scalar(&self.coords[i][p], self.field)).unwrap());
            }
        }
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<BatemanTuple> {
        let field_v = v.get("field").ok_or_else(|| Error::Parse("missing \"field\"".into()))?;
        let field = serde_json::from_value::<FieldJson>(field_v.clone())?.to_field()?;
        let mut coords: [[Scalar; 6]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero()));
        for (i, row) in coords.iter_mut().enumerate() {
            for (p, &(j, k)) in PAIRS.iter().enumerate() {
                let key = format!("d_{}_{}{}", i + 1, j + 1, k + 1);
                let c = v.get(&key).ok_or_else(|| Error::Parse(format!("missing {key:?}")))?;
                row[p] = serde_json::from_value::<CoeffJson>(c.clone())?.to_scalar(field)?;
            }
        }
        let mut t = BatemanTuple::from_coords(coords)?;
        t.field = field;
        Ok(t)
    }
}

fn divergence(q: &[Poly; 3]) -> Poly {
    let field = q[0].field();
    (0..3).fold(Poly::zero(field), |acc, i| &acc + &q[i].diff(Var::X(i)))
}

/// Remove the `V(0,1)` component: `q_i <- q_i - x_i s / 4` with `s` the divergence.
///
/// `x_i l` has divergence `4 l`, which forces the constant.
pub fn project_v01(q: &[Poly; 3]) -> [Poly; 3] {
    let s = divergence(q).scale(&Scalar::from_frac(1, 4));
    std::array::from_fn(|i| &q[i] - &(&Poly::x(i) * &s))
}

/// The `V(1,2)` component of a matrix in normal form.
pub fn v12_project(m: &SyzygyMatrix) -> Result<BatemanTuple> {
    if !m.is_normal() {
        return Err(Error::Degenerate("syzygy matrix is not in normal form (x1, x2, x3)".into()));
    }
    let mut t = BatemanTuple::from_second_row(&project_v01(&m.quadratic))?;
    t.projected = true;
    Ok(t)
}

/// Raw tensor `sum_i ∂Q*/∂e_i ⊗ ∂C/∂x_i` as a second row.
fn raw_pairing(qstar: &TernaryForm, c: &TernaryForm) -> [Poly; 3] {
    let t = (0..3).fold(Poly::zero(qstar.field().join(c.field()).expect("field")), |acc, i| {
        &acc + &(&qstar.poly().diff(Var::E(i)) * &c.poly().diff(Var::X(i)))
    });
    split_by_e(&t)
}

/// Coefficients of `e1, e2, e3` in a polynomial linear in `e`.
pub(crate) fn split_by_e(t: &Poly) -> [Poly; 3] {
    std::array::from_fn(|i| {
        let terms = t.terms().filter(|(e, _)| e[3 + i] == 1).map(|(e, c)| {
            let mut e2 = *e;
            e2[3 + i] = 0;
            (e2, c.clone())
        });
        Poly::from_terms(t.field(), terms).expect("field")
    })
}

/// `b(Q*, C)`: the pairing followed by the `V(1,2)` projection.
pub fn b_pairing(qstar: &TernaryForm, c: &TernaryForm) -> Result<BatemanTuple> {
    require(qstar, Group::E, 2, "dual conic in e")?;
    require(c, Group::X, 3, "cubic in x")?;
    let mut t = BatemanTuple::from_second_row(&project_v01(&raw_pairing(qstar, c)))?;
    t.projected = true;
    t.field = qstar.field().join(c.field())?;
    Ok(t.with_provenance(Provenance { qstar: qstar.clone(), cubic: c.clone(), conic: None, degenerate: false }))
}

/// The Bateman tuple of a conic and a cubic: `b(adj(Q), C)`.
///
/// Degenerate conics are allowed and marked in the provenance.
pub fn bateman_tuple(q: &TernaryForm, c: &TernaryForm) -> Result<BatemanTuple> {
    require(q, Group::X, 2, "conic in x")?;
    let qstar = adjugate_conic(q)?;
    let degenerate = det3(&gram(q)).is_zero();
    let t = b_pairing(&qstar, c)?;
    Ok(t.with_provenance(Provenance { qstar, cubic: c.clone(), conic: Some(q.clone()), degenerate }))
}

/// Result of pairing `Q*` with `Q` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Report {
    /// `W = scalar * Id + (trace-free part)`, where `W[i][j]` is the
    /// coefficient of `e_i x_j`.
    pub scalar: Scalar,
    pub trace_free_zero: bool,
    pub matrix: ExactMatrix,
}

pub fn d2_check(qstar: &TernaryForm, q: &TernaryForm) -> Result<D2Report> {
    require(qstar, Group::E, 2, "dual conic in e")?;
    require(q, Group::X, 2, "conic in x")?;
    let t = (0..3).fold(Poly::zero(qstar.field().join(q.field())?), |acc, i| {
        &acc + &(&qstar.poly().diff(Var::E(i)) * &q.poly().diff(Var::X(i)))
    });
    let mut w = ExactMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let mut e = [0u8; 6];
            e[3 + i] = 1;
            e[j] = 1;
            w.set(i, j, t.coeff(&e));
        }
    }
    let trace: Scalar = (0..3).map(|i| w.get(i, i).clone()).sum();
    let scalar = &trace / &Scalar::from_int(3);
    let trace_free_zero = (0..3).all(|i| (0..3).all(|j| {
        let expect = if i == j { scalar.clone() } else { Scalar::zero() };
        *w.get(i, j) == expect
    }));
    Ok(D2Report { scalar, trace_free_zero, matrix: w })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(g: Group, d: u32, s: &str) -> TernaryForm {
        TernaryForm::parse(Field::Rational, g, d, s).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(Field::Rational, s).unwrap()
    }

    #[test]
    fn syzygy_rows() {
        let m = syzygy_from_qc(&form(Group::X, 2, "x1^2+x2^2+x3^2"), &form(Group::X, 3, "x1^3")).unwrap();
        assert_eq!(m.linear(), &[p("2*x1"), p("2*x2"), p("2*x3")]);
        assert_eq!(m.quadratic(), &[p("3*x1^2"), p("0"), p("0")]);
        let m = syzygy_from_qc(&form(Group::X, 2, "x1*x2"), &form(Group::X, 3, "x1^3")).unwrap();
        assert_eq!(m.linear(), &[p("x2"), p("x1"), p("0")]);
    }

    #[test]
    fn example_cubic_second_row() {
        let c = form(Group::X, 3, "x1^3+x2^3-x3^3-(x1+x2+x3)^3");
        let m = syzygy_from_qc(&form(Group::X, 2, "x1^2+x2^2+x3^2"), &c).unwrap();
        assert_eq!(m.quadratic()[0], p("3*x1^2 - 3*(x1+x2+x3)^2"));
        assert_eq!(m.quadratic()[2], p("-3*x3^2 - 3*(x1+x2+x3)^2"));
    }

    #[test]
    fn syzygy_rejects_wrong_degrees() {
        assert!(syzygy_from_qc(&form(Group::X, 3, "x1^3"), &form(Group::X, 3, "x1^3")).is_err());
    }

    fn syz(lin: [&str; 3]) -> SyzygyMatrix {
        SyzygyMatrix::new(lin.map(p), [p("x1^2"), p("x2*x3"), p("x1*x3 - x2^2")]).unwrap()
    }

    #[test]
    fn normal_forms() {
        let (n, a) = normal_form(&syz(["x1", "x2", "x3"])).unwrap();
        assert_eq!(a, ExactMatrix::identity(3));
        assert!(n.is_normal());
        let (_, a) = normal_form(&syz(["2*x1", "2*x2", "2*x3"])).unwrap();
        assert_eq!(a, ExactMatrix::identity(3).scale(&Scalar::from_frac(1, 2)));
        let (n, a) = normal_form(&syz(["x2", "x1", "x3"])).unwrap();
        assert_eq!(a, ExactMatrix::from_ints(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]));
        assert_eq!(n.quadratic()[0], p("x2*x3"));
        assert!(matches!(normal_form(&syz(["x1", "x1", "x3"])), Err(Error::Degenerate(_))));
    }

    #[test]
    fn projection_kills_v01() {
        let l = p("x1 - 2*x2 + 5*x3");
        let q: [Poly; 3] = std::array::from_fn(|i| &Poly::x(i) * &l);
        assert!(project_v01(&q).iter().all(Poly::is_zero));
    }

    #[test]
    fn projection_is_idempotent() {
        let q = [p("x1^2 - 3*x2*x3"), p("x1*x2 + 4*x3^2"), p("-x1*x3 + x2^2 - x3^2")];
        let once = project_v01(&q);
        assert!(divergence(&once).is_zero());
        assert_eq!(project_v01(&once), once);
    }

    #[test]
    fn v12_needs_normal_form() {
        assert!(v12_project(&syz(["2*x1", "x2", "x3"])).is_err());
        assert!(v12_project(&syz(["x1", "x2", "x3"])).unwrap().is_projected());
    }

    #[test]
    fn coordinates_are_third_derivatives() {
        let t = BatemanTuple::from_second_row(&[p("x1^2 + 3*x2*x3"), p("0"), p("-x3^2")]).unwrap();
        assert_eq!(t.delta(0, 0, 0), &Scalar::from_int(2));
        assert_eq!(t.delta(0, 1, 2), &Scalar::from_int(3));
        assert_eq!(t.delta(0, 2, 1), &Scalar::from_int(3));
        assert_eq!(t.delta(2, 2, 2), &Scalar::from_int(-2));
        assert_eq!(t.second_row()[0], p("x1^2 + 3*x2*x3"));
    }

    #[test]
    fn pairing_with_zero_cubic() {
        let qs = form(Group::E, 2, "e1^2 + e2^2 + e3^2");
        let zero = TernaryForm::x(Poly::zero(Field::Rational), 3).unwrap();
        assert!(b_pairing(&qs, &zero).unwrap().is_zero());
    }

    #[test]
    fn d2_of_identity() {
        let q = form(Group::X, 2, "x1^2+x2^2+x3^2");
        let r = d2_check(&adjugate_conic(&q).unwrap(), &q).unwrap();
        assert!(r.trace_free_zero);
        assert_eq!(r.scalar, Scalar::from_int(4));
    }

    #[test]
    fn d2_of_rank_one_conic() {
        let q = form(Group::X, 2, "x1^2");
        let r = d2_check(&adjugate_conic(&q).unwrap(), &q).unwrap();
        assert!(r.matrix.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let qs = form(Group::E, 2, "e1^2 + 2*e1*e2 - e3^2");
        let c = form(Group::X, 3, "x1^3 - x1*x2*x3 + 2*x3^3");
        let t = b_pairing(&qs, &c).unwrap();
        let v = t.to_json();
        assert!(v.get("d_2_13").is_some());
        let back = BatemanTuple::from_json(&v).unwrap();
        assert_eq!(back.coords(), t.coords());
        assert!(back.is_projected());
    }
}
