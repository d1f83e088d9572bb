//! The 6x6 skew matrix on dual conics whose entries are linear forms in the
//! 18 coordinates of a point tensor, its Pfaffian, kernel pencils and the
//! tangent-space computation for the family of Bateman tuples.
//!
//! The matrix is transcribed entry by entry with symbols `δ_abc`. Three
//! things about that notation are not pinned down by the formula alone: which
//! subscript is the `e`-index, whether `δ_ajj` carries the factor 2 of a
//! second derivative, and how conics are turned into coordinate vectors in
//! the basis `{e1²/2, e1e2, e1e3, e2²/2, e2e3, e3²/2}`. [`calibrate`] picks the
//! unique combination under which `Q*` always lies in the kernel and the
//! worked example reproduces its expected pencil.

use std::sync::OnceLock;

use serde::Serialize;

use crate::bateman::{b_pairing, split_by_e, BatemanTuple};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::instances::{random_bateman_pair, rng};
use crate::linalg::{canonical_basis, pfaffian, ExactMatrix};
use crate::poly::{adjugate3, adjugate_conic, exponent_in, gram, monomial_exponents, Group, Poly, TernaryForm, Var};

/// A signed symbol `δ_abc` (one-based subscripts as printed).
type Sym = (i8, [u8; 3]);

/// The matrix with both triangles as printed; skew-symmetry of the
/// transcription is checked when it is used.
const FORMULA: [[&[Sym]; 6]; 6] = [
    [
        &[],
        &[(1, [3, 1, 1])],
        &[(-1, [2, 1, 1])],
        &[(1, [3, 2, 1])],
        &[(-1, [2, 2, 1]), (1, [3, 3, 1])],
        &[(-1, [2, 3, 1])],
    ],
    [
        &[(-1, [3, 1, 1])],
        &[],
        &[(1, [1, 1, 1]), (-1, [2, 2, 1]), (-1, [3, 3, 1])],
        &[(1, [3, 2, 2])],
        &[(1, [1, 2, 1]), (-1, [2, 2, 2]), (1, [3, 3, 2])],
        &[(1, [1, 3, 1]), (-1, [2, 3, 2])],
    ],
    [
        &[(1, [2, 1, 1])],
        &[(-1, [1, 1, 1]), (1, [2, 2, 1]), (1, [3, 3, 1])],
        &[],
        &[(-1, [1, 2, 1]), (1, [3, 3, 2])],
        &[(-1, [1, 3, 1]), (-1, [2, 3, 2]), (1, [3, 3, 3])],
        &[(-1, [2, 3, 3])],
    ],
    [
        &[(-1, [3, 2, 1])],
        &[(-1, [3, 2, 2])],
        &[(1, [1, 2, 1]), (-1, [3, 3, 2])],
        &[],
        &[(1, [1, 2, 2])],
        &[(1, [1, 3, 2])],
    ],
    [
        &[(1, [2, 2, 1]), (-1, [3, 3, 1])],
        &[(-1, [1, 2, 1]), (1, [2, 2, 2]), (-1, [3, 3, 2])],
        &[(1, [1, 3, 1]), (1, [2, 3, 2]), (-1, [3, 3, 3])],
        &[(-1, [1, 2, 2])],
        &[],
        &[(1, [1, 3, 3])],
    ],
    [
        &[(1, [2, 3, 1])],
        &[(-1, [1, 3, 1]), (1, [2, 3, 2])],
        &[(1, [2, 3, 3])],
        &[(-1, [1, 3, 2])],
        &[(-1, [1, 3, 3])],
        &[],
    ],
];

/// Scaling of `δ_ajj` relative to the second derivative `∂²/∂x_j²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalScale {
    /// The plain third derivative.
    Derivative,
    /// Half of it (the coefficient of `x_j^2`).
    Coefficient,
    Double,
}

impl DiagonalScale {
    fn factor(self) -> Scalar {
        match self {
            DiagonalScale::Derivative => Scalar::one(),
            DiagonalScale::Coefficient => Scalar::from_frac(1, 2),
            DiagonalScale::Double => Scalar::from_int(2),
        }
    }
}

/// How a dual conic becomes a vector the matrix acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicCoords {
    /// Coordinates in `{e1²/2, e1e2, e1e3, e2²/2, e2e3, e3²/2}`.
    HalfBasis,
    /// Plain monomial coefficients.
    Monomial,
}

/// One reading of the `δ` notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convention {
    /// Which printed subscript (0, 1 or 2) is the `e`-index.
    pub e_slot: usize,
    pub diagonal: DiagonalScale,
    pub conic_coords: ConicCoords,
}

impl Convention {
    /// All candidates, in the order calibration tries them.
    pub fn candidates() -> Vec<Convention> {
        let mut out = Vec::new();
        for e_slot in 0..3 {
            for diagonal in [DiagonalScale::Derivative, DiagonalScale::Coefficient, DiagonalScale::Double] {
                for conic_coords in [ConicCoords::HalfBasis, ConicCoords::Monomial] {
                    out.push(Convention { e_slot, diagonal, conic_coords });
                }
            }
        }
        out
    }

    fn symbol(&self, t: &BatemanTuple, sub: [u8; 3]) -> Scalar {
        let e = (sub[self.e_slot] - 1) as usize;
        let xs: Vec<usize> = (0..3).filter(|&p| p != self.e_slot).map(|p| (sub[p] - 1) as usize).collect();
        let v = t.delta(e, xs[0], xs[1]);
        if xs[0] == xs[1] {
            v * &self.diagonal.factor()
        } else {
            v.clone()
        }
    }

    /// Coordinate vector of a dual conic.
    pub fn vec(&self, conic: &TernaryForm) -> Vec<Scalar> {
        let two = Scalar::from_int(2);
        conic
            .coefficients()
            .into_iter()
            .zip(monomial_exponents(2))
            .map(|(c, m)| match self.conic_coords {
                ConicCoords::HalfBasis if m.contains(&2) => &c * &two,
                _ => c,
            })
            .collect()
    }

    /// Inverse of [`Convention::vec`].
    pub fn unvec(&self, v: &[Scalar]) -> Result<TernaryForm> {
        let half = Scalar::from_frac(1, 2);
        let coeffs: Vec<Scalar> = v
            .iter()
            .zip(monomial_exponents(2))
            .map(|(c, m)| match self.conic_coords {
                ConicCoords::HalfBasis if m.contains(&2) => c * &half,
                _ => c.clone(),
            })
            .collect();
        TernaryForm::from_coefficients(Group::E, 2, &coeffs)
    }
}

/// The skew matrix of a tuple under a convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorleyMatrix {
    matrix: ExactMatrix,
    convention: Convention,
}

impl MorleyMatrix {
    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn pfaffian(&self) -> Scalar {
        pfaffian(&self.matrix).expect("6x6 skew")
    }

    /// `M vec(conic)`.
    pub fn apply(&self, conic: &TernaryForm) -> Vec<Scalar> {
        self.matrix.mul_vec(&self.convention.vec(conic)).expect("six coordinates")
    }

    pub fn annihilates(&self, conic: &TernaryForm) -> bool {
        self.apply(conic).iter().all(Scalar::is_zero)
    }
}

pub fn morley_matrix_with(t: &BatemanTuple, conv: Convention) -> MorleyMatrix {
    let mut m = ExactMatrix::zeros(6, 6);
    for (r, row) in FORMULA.iter().enumerate() {
        for (c, syms) in row.iter().enumerate() {
            let v: Scalar = syms
                .iter()
                .map(|&(s, sub)| {
                    let d = conv.symbol(t, sub);
                    if s > 0 {
                        d
                    } else {
                        -d
                    }
                })
                .sum();
            m.set(r, c, v.coerce(t.field()).expect("tuple field"));
        }
    }
    if let Some((row, col)) = m.skew_violation() {
        panic!("transcribed matrix is not skew at ({row}, {col})");
    }
    MorleyMatrix { matrix: m, convention: conv }
}

/// The matrix under the calibrated convention.
pub fn morley_matrix(t: &BatemanTuple) -> MorleyMatrix {
    morley_matrix_with(t, calibrated())
}

/// Outcome of [`calibrate`].
#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub chosen: Convention,
    /// Every candidate passing both checks; more than one means the data do
    /// not determine the convention and the first is used.
    pub passing: Vec<Convention>,
    pub candidates_tried: usize,
    pub random_pairs: usize,
    pub seed: u64,
}

/// The worked example: `Q* = e1²+e2²+e3²`, `C = x1³+x2³-x3³-(x1+x2+x3)³`.
pub fn example_instance() -> (TernaryForm, TernaryForm) {
    let qs = TernaryForm::parse(Field::Rational, Group::E, 2, "e1^2 + e2^2 + e3^2").unwrap();
    let c = TernaryForm::parse(Field::Rational, Group::X, 3, "x1^3 + x2^3 - x3^3 - (x1 + x2 + x3)^3").unwrap();
    (qs, c)
}

/// The expected kernel pencil of the worked example.
pub fn example_pencil() -> ConicPencil {
    let a = TernaryForm::parse(Field::Rational, Group::E, 2, "e1^2 + e2^2 + e3^2").unwrap();
    let b = TernaryForm::parse(Field::Rational, Group::E, 2, "e1^2 - e1*e2 + e2^2 + e1*e3 + e2*e3").unwrap();
    ConicPencil::from_conics(&[a, b]).unwrap()
}

pub const CALIBRATION_SEED: u64 = 0x5eed_ca1b;
pub const CALIBRATION_PAIRS: usize = 50;

/// Choose the convention: `M(b(Q*, C)) vec(Q*) = 0` on seeded random pairs,
/// and the worked example yields the expected pencil.
pub fn calibrate() -> Result<CalibrationReport> {
    let mut r = rng(CALIBRATION_SEED);
    let mut samples = Vec::with_capacity(CALIBRATION_PAIRS);
    for _ in 0..CALIBRATION_PAIRS {
        let (q, c) = random_bateman_pair(&mut r)?;
        let qs = adjugate_conic(&q)?;
        let t = b_pairing(&qs, &c)?;
        samples.push((qs, t));
    }
    let (pqs, pc) = example_instance();
    let example_t = b_pairing(&pqs, &pc)?;
    let target = example_pencil();

    let candidates = Convention::candidates();
    let passing: Vec<Convention> = candidates
        .iter()
        .copied()
        .filter(|conv| samples.iter().all(|(qs, t)| morley_matrix_with(t, *conv).annihilates(qs)))
        .filter(|conv| {
            let m = morley_matrix_with(&example_t, *conv);
            let k = m.matrix.kernel_basis();
            k.len() == 2 && {
                let conics: Result<Vec<_>> = k.iter().map(|v| conv.unvec(v)).collect();
                conics.and_then(|c| ConicPencil::from_conics(&c)).map(|p| p == target).unwrap_or(false)
            }
        })
        .collect();
    let chosen = *passing.first().ok_or_else(|| Error::Calibration("no convention passes".into()))?;
    Ok(CalibrationReport {
        chosen,
        passing,
        candidates_tried: candidates.len(),
        random_pairs: CALIBRATION_PAIRS,
        seed: CALIBRATION_SEED,
    })
}

static CALIBRATION: OnceLock<std::result::Result<CalibrationReport, String>> = OnceLock::new();

/// Calibration result, computed once per process.
pub fn calibration() -> Result<&'static CalibrationReport> {
    CALIBRATION
        .get_or_init(|| calibrate().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Calibration(e.clone()))
}

/// The calibrated convention. Panics if calibration failed, which can only
/// happen through an error in this crate.
pub fn calibrated() -> Convention {
    calibration().expect("calibration of the delta convention").chosen
}

/// A two-dimensional space of dual conics, stored as the reduced echelon
/// basis of monomial coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicPencil {
    generators: [TernaryForm; 2],
}

impl ConicPencil {
    pub fn from_conics(conics: &[TernaryForm]) -> Result<ConicPencil> {
        let basis = canonical_basis(conics.iter().map(TernaryForm::coefficients).collect());
        if basis.len() != 2 {
            return Err(Error::Rank { expected: 2, found: basis.len() });
        }
        let g0 = TernaryForm::from_coefficients(Group::E, 2, &basis[0])?;
        let g1 = TernaryForm::from_coefficients(Group::E, 2, &basis[1])?;
        Ok(ConicPencil { generators: [g0, g1] })
    }

    pub fn generators(&self) -> &[TernaryForm; 2] {
        &self.generators
    }

    pub fn contains(&self, conic: &TernaryForm) -> bool {
        let mut rows: Vec<Vec<Scalar>> = self.generators.iter().map(TernaryForm::coefficients).collect();
        rows.push(conic.coefficients());
        ExactMatrix::from_rows(rows).map(|m| m.rank() == 2).unwrap_or(false)
    }
}

/// The kernel of `M(T)` as a pencil; requires rank exactly 4.
pub fn kernel_pencil(t: &BatemanTuple) -> Result<ConicPencil> {
    let m = morley_matrix(t);
    let rank = m.rank();
    if rank != 4 {
        return Err(Error::Rank { expected: 4, found: rank });
    }
    let conv = m.convention();
    let conics = m.matrix.kernel_basis().iter().map(|v| conv.unvec(v)).collect::<Result<Vec<_>>>()?;
    ConicPencil::from_conics(&conics)
}

pub fn pfaffian_value(t: &BatemanTuple) -> Scalar {
    morley_matrix(t).pfaffian()
}

/// Linear relation satisfied by every row set of [`tangent_system`]: the
/// next differential `S¹ ⊗ Λ² -> Λ³` vanishes on the image of `d`.
pub const TANGENT_RELATION: [i64; 9] = [0, 0, 1, 0, -1, 0, 1, 0, 0];

/// The 9x9 matrix of `(R*, l) -> d(d_{R*} C + l tr)`.
///
/// Unknowns (columns): the six monomial coefficients of `R*` in the order
/// `e1², e1e2, e1e3, e2², e2e3, e3²`, then `l = l1 x1 + l2 x2 + l3 x3`.
/// The tensor `sum_j p_j e_j` is first moved through `Q*` (multiplying the
/// vector `p` by the adjugate Gram matrix of `Q*`, so that `d_{Q*}`-images
/// become gradients) and then differentiated. Rows: the coefficient of
/// `x_m e_i∧e_j` for `(i, j) = (1,2), (1,3), (2,3)` and `m = 1, 2, 3`.
pub fn tangent_system(qstar: &TernaryForm, c: &TernaryForm) -> Result<ExactMatrix> {
    if qstar.group() != Group::E || qstar.degree() != 2 {
        return Err(Error::Degree { expected: "dual conic in e".into(), got: qstar.to_string() });
    }
    if c.group() != Group::X || c.degree() != 3 {
        return Err(Error::Degree { expected: "cubic in x".into(), got: c.to_string() });
    }
    let field = qstar.field().join(c.field())?;
    let adj = adjugate3(&gram(&qstar.clone()));
    let tr = (0..3).fold(Poly::zero(Field::Rational), |acc, i| &acc + &(&Poly::x(i) * &Poly::e(i)));

    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(9);
    let unknowns = monomial_exponents(2)
        .into_iter()
        .map(|m| {
            let rs = Poly::monomial(Field::Rational, exponent_in(Group::E, m), Scalar::one());
            (0..3).fold(Poly::zero(field), |acc, i| &acc + &(&c.poly().diff(Var::X(i)) * &rs.diff(Var::E(i))))
        })
        .chain((0..3).map(|i| &Poly::x(i) * &tr));
    for t in unknowns {
        let p = split_by_e(&t);
        let moved: [Poly; 3] = std::array::from_fn(|k| {
            (0..3).fold(Poly::zero(field), |acc, j| &acc + &p[j].scale(&adj[k][j]))
        });
        let mut col = Vec::with_capacity(9);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let w = &moved[j].diff(Var::X(i)) - &moved[i].diff(Var::X(j));
            for m in 0..3 {
                let mut e = [0u8; 3];
                e[m] = 1;
                col.push(w.coeff_in(Group::X, e));
            }
        }
        columns.push(col);
    }
    Ok(ExactMatrix::from_rows(columns)?.transpose())
}

pub fn tangent_rank(qstar: &TernaryForm, c: &TernaryForm) -> Result<usize> {
    Ok(tangent_system(qstar, c)?.rank())
}

/// Whether the rows of a tangent system satisfy [`TANGENT_RELATION`].
pub fn satisfies_tangent_relation(system: &ExactMatrix) -> bool {
    let rel: Vec<Scalar> = TANGENT_RELATION.iter().map(|&v| Scalar::from_int(v)).collect();
    system.transpose().mul_vec(&rel).map(|v| v.iter().all(Scalar::is_zero)).unwrap_or(false)
}
