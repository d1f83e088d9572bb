//! Numeric realization of the degree-2 map given by the net of cubics through
//! seven Bateman points: the base points, fibers, ramification sextic and the
//! branch quartic.
//!
//! Exact data (the net, the sextic, resultants at integer nodes) is computed
//! with [`Scalar`]; everything after root finding is `Complex64` and never
//! flows back into exact code.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bateman::syzygy_from_qc;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::instances::{random_unimodular, rng};
use crate::linalg::ExactMatrix;
use crate::poly::{monomial_exponents, Group, Poly, TernaryForm, Var};

pub type C64 = Complex64;

/// A projective point with unit Euclidean norm.
pub type NumPoint = [C64; 3];

/// Default tolerance on normalized evaluations at base points.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default bound on the normalized held-out residual of the quartic fit.
pub const DEFAULT_FIT_TOL: f64 = 1e-6;
/// Relative singular-value threshold for numeric rank.
pub const RANK_TOL: f64 = 1e-8;
/// Bound on the relative backward residual of univariate roots.
pub const ROOT_TOL: f64 = 1e-10;

const COORDINATE_SEED: u64 = 0x6e15e2;
const MAX_ATTEMPTS: usize = 25;

/// The net `N1 = l2q3 - l3q2`, `N2 = l1q3 - l3q1`, `N3 = l1q2 - l2q1` of
/// signed minors of the syzygy matrix with rows `(l_i)` and `(q_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicNet {
    minors: [TernaryForm; 3],
    conic: Option<TernaryForm>,
    cubic: Option<TernaryForm>,
}

impl CubicNet {
    /// A net from three cubics; they must be linearly independent.
    pub fn new(minors: [TernaryForm; 3]) -> Result<CubicNet> {
        for m in &minors {
            if m.group() != Group::X || m.degree() != 3 {
                return Err(Error::Degree { expected: "cubic in x".into(), got: m.to_string() });
            }
        }
        let rank = ExactMatrix::from_rows(minors.iter().map(TernaryForm::coefficients).collect())?.rank();
        if rank < 3 {
            return Err(Error::Degenerate(format!("net of cubics has rank {rank}")));
        }
        Ok(CubicNet { minors, conic: None, cubic: None })
    }

    pub fn minors(&self) -> &[TernaryForm; 3] {
        &self.minors
    }

    pub fn conic(&self) -> Option<&TernaryForm> {
        self.conic.as_ref()
    }

    pub fn cubic(&self) -> Option<&TernaryForm> {
        self.cubic.as_ref()
    }

    /// `l1 N1 - l2 N2 + l3 N3 = 0` and the same with `q`, when the
    /// provenance is known.
    pub fn syzygy_holds(&self) -> bool {
        let (Some(q), Some(c)) = (&self.conic, &self.cubic) else { return true };
        let m = syzygy_from_qc(q, c).expect("stored forms have the right degrees");
        [m.linear(), m.quadratic()].iter().all(|row| {
            let n = self.minors.each_ref().map(TernaryForm::poly);
            (&(&(&row[0] * n[0]) - &(&row[1] * n[1])) + &(&row[2] * n[2])).is_zero()
        })
    }

    /// The net of `N_i(g x)`.
    pub fn compose(&self, g: &[[Scalar; 3]; 3]) -> CubicNet {
        CubicNet {
            minors: self.minors.each_ref().map(|m| m.compose(g)),
            conic: self.conic.as_ref().map(|q| q.compose(g)),
            cubic: self.cubic.as_ref().map(|c| c.compose(g)),
        }
    }

    fn numeric(&self) -> [NumericForm; 3] {
        self.minors.each_ref().map(NumericForm::from_exact)
    }

    /// `(N1(p) : N2(p) : N3(p))`.
    pub fn image(&self, p: &NumPoint) -> [C64; 3] {
        self.numeric().map(|n| n.eval(p))
    }

    /// Largest normalized value of the three cubics at `p`.
    pub fn residual(&self, p: &NumPoint) -> f64 {
        self.numeric().iter().map(|n| n.normalized_eval(p)).fold(0.0, f64::max)
    }
}

pub fn net_from_qc(q: &TernaryForm, c: &TernaryForm) -> Result<CubicNet> {
    let m = syzygy_from_qc(q, c)?;
    let (l, s) = (m.linear(), m.quadratic());
    let minor = |i: usize, j: usize| TernaryForm::x(&(&l[i] * &s[j]) - &(&l[j] * &s[i]), 3);
    let minors = [minor(1, 2)?, minor(0, 2)?, minor(0, 1)?];
    let mut net = CubicNet::new(minors)?;
    net.conic = Some(q.clone());
    net.cubic = Some(c.clone());
    Ok(net)
}

/// A ternary form with complex floating coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericForm {
    degree: u32,
    terms: Vec<([u8; 3], C64)>,
}

impl NumericForm {
    pub fn from_exact(f: &TernaryForm) -> NumericForm {
        let o = if f.group() == Group::X { 0 } else { 3 };
        let terms = f.poly().terms().map(|(e, c)| ([e[o], e[o + 1], e[o + 2]], c.to_complex())).collect();
        NumericForm { degree: f.degree(), terms }
    }

    /// Coefficients in the order of [`monomial_exponents`].
    pub fn from_coefficients(degree: u32, coeffs: &[C64]) -> NumericForm {
        let terms = monomial_exponents(degree).into_iter().zip(coeffs.iter().copied()).collect();
        NumericForm { degree, terms }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> Vec<C64> {
        monomial_exponents(self.degree)
            .iter()
            .map(|m| self.terms.iter().filter(|(e, _)| e == m).map(|(_, c)| *c).sum())
            .collect()
    }

    pub fn eval(&self, p: &[C64; 3]) -> C64 {
        self.terms.iter().map(|(e, c)| c * monomial_value(e, p)).sum()
    }

    pub fn diff(&self, i: usize) -> NumericForm {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut d = *e;
                d[i] -= 1;
                (d, c * e[i] as f64)
            })
            .collect();
        NumericForm { degree: self.degree.saturating_sub(1), terms }
    }

    /// `|f(p)| / sum |c_m|` with `p` scaled to unit norm.
    pub fn normalized_eval(&self, p: &[C64; 3]) -> f64 {
        let scale: f64 = self.terms.iter().map(|(_, c)| c.norm()).sum();
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(&normalize(p)).norm() / scale
    }
}

fn monomial_value(e: &[u8; 3], p: &[C64; 3]) -> C64 {
    (0..3).map(|i| p[i].powu(e[i] as u32)).product()
}

/// Scale so the largest coordinate is a positive real, then to unit norm.
pub fn normalize(p: &[C64; 3]) -> NumPoint {
    let big = p.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
    if big.norm() == 0.0 {
        return *p;
    }
    let phase = big / big.norm();
    let q = p.map(|c| c / phase);
    let n = q.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    q.map(|c| c / n)
}

/// Sine of the angle between two projective points.
pub fn projective_distance(p: &[C64; 3], q: &[C64; 3]) -> f64 {
    let (p, q) = (normalize(p), normalize(q));
    let inner: C64 = (0..3).map(|i| p[i].conj() * q[i]).sum();
    (1.0 - inner.norm_sqr()).max(0.0).sqrt()
}

/// All complex roots of `sum coeffs[i] z^i` by Aberth iteration followed by
/// Newton polishing. Fails if the relative residual exceeds [`ROOT_TOL`].
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.iter().rposition(|c| c.norm() != 0.0).unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let a: Vec<C64> = coeffs[..=n].iter().map(|c| c / lead).collect();
    let horner = |z: C64| {
        let (mut p, mut dp) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for c in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    // Fujiwara bound for the initial circle
    let radius = (0..n).map(|i| a[i].norm().powf(1.0 / (n - i) as f64)).fold(0.0, f64::max) * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                continue;
            }
            z[k] -= w;
            step = step.max(w.norm() / (1.0 + z[k].norm()));
        }
        if step < 1e-16 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(*r);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *r - p / dp;
            if horner(next).0.norm() < p.norm() {
                *r = next;
            }
        }
    }
    for r in &z {
        let scale: f64 = a.iter().enumerate().map(|(i, c)| c.norm() * r.norm().powi(i as i32)).sum();
        let value = horner(*r).0.norm();
        let res = if value == 0.0 { 0.0 } else { value / scale };
        if !(res < ROOT_TOL) {
            return Err(Error::Numeric(format!("root residual {res:.3e} exceeds {ROOT_TOL:.0e}")));
        }
    }
    Ok(z)
}

/// Coefficients of `f(x, y, 1)` as a polynomial in `y`, with `x` substituted.
fn y_coefficients<T: Clone>(f: &TernaryForm, x: &T, conv: impl Fn(&Scalar) -> T, mul: impl Fn(&T, &T) -> T, add: impl Fn(&T, &T) -> T, zero: T) -> Vec<T> {
    let mut out = vec![zero; f.degree() as usize + 1];
    for (e, c) in f.poly().terms() {
        let mut v = conv(c);
        for _ in 0..e[0] {
            v = mul(&v, x);
        }
        let k = e[1] as usize;
        out[k] = add(&out[k], &v);
    }
    out
}

fn sylvester(f: &[Scalar], g: &[Scalar]) -> ExactMatrix {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut s = ExactMatrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s.set(n + r, r + k, c.clone());
        }
    }
    s
}

/// Exact interpolation through `(i, values[i])`, ascending coefficients.
fn interpolate(values: &[Scalar]) -> Vec<Scalar> {
    let n = values.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = &(&dd[i] - &dd[i - 1]) * &Scalar::from_frac(1, level as i64);
        }
    }
    // Newton form to monomial form
    let mut coeffs = vec![Scalar::zero(); n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (x - i) + dd[i]
        let mut next = vec![Scalar::zero(); n];
        for k in 0..n {
            if k + 1 < n {
                next[k + 1] = &next[k + 1] + &coeffs[k];
            }
            next[k] = &next[k] - &(&coeffs[k] * &Scalar::from_int(i as i64));
        }
        next[0] = &next[0] + &dd[i];
        coeffs = next;
    }
    coeffs
}

fn exact_y_coeffs(f: &TernaryForm, x: i64) -> Vec<Scalar> {
    y_coefficients(f, &Scalar::from_int(x), Scalar::clone, |a, b| a * b, |a, b| a + b, Scalar::zero())
}

fn numeric_y_coeffs(f: &TernaryForm, x: C64) -> Vec<C64> {
    y_coefficients(f, &x, Scalar::to_complex, |a, b| a * b, |a, b| a + b, C64::new(0.0, 0.0))
}

fn to_c64(g: &[[Scalar; 3]; 3], v: &[C64; 3]) -> NumPoint {
    normalize(&std::array::from_fn(|i| (0..3).map(|j| g[i][j].to_complex() * v[j]).sum()))
}

/// All `deg f * deg g` intersection points of two plane curves with no common
/// component, in a random unimodular frame where the affine chart and the
/// projection to the first coordinate are generic.
pub fn intersect(f: &TernaryForm, g: &TernaryForm, r: &mut ChaCha8Rng) -> Result<Vec<NumPoint>> {
    let (df, dg) = (f.degree() as usize, g.degree() as usize);
    let bezout = df * dg;
    let mut last = String::new();
    for _ in 0..MAX_ATTEMPTS {
        let frame = random_unimodular(r);
        let (ft, gt) = (f.compose(&frame), g.compose(&frame));
        let lead = |h: &TernaryForm, d: usize| {
            let mut e = [0u8; 3];
            e[1] = d as u8;
            !h.poly().coeff_in(Group::X, e).is_zero()
        };
        if !lead(&ft, df) || !lead(&gt, dg) {
            continue;
        }
        let values: Result<Vec<Scalar>> =
            (0..=bezout as i64).map(|x| sylvester(&exact_y_coeffs(&ft, x), &exact_y_coeffs(&gt, x)).det()).collect();
        let res = interpolate(&values?);
        if res[bezout].is_zero() {
            last = "resultant drops degree".into();
            continue;
        }
        let xs = polynomial_roots(&res.iter().map(Scalar::to_complex).collect::<Vec<_>>())?;
        let spread = xs.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let close = xs.iter().enumerate().any(|(i, a)| xs[i + 1..].iter().any(|b| (a - b).norm() < 1e-6 * spread));
        if close {
            last = "clustered resultant roots".into();
            continue;
        }
        let (fn_, gn) = (NumericForm::from_exact(&ft), NumericForm::from_exact(&gt));
        let mut points = Vec::with_capacity(bezout);
        for x in xs {
            let ys = polynomial_roots(&numeric_y_coeffs(&ft, x))?;
            let y = ys
                .into_iter()
                .min_by(|a, b| gn.eval(&[x, *a, C64::new(1.0, 0.0)]).norm().total_cmp(&gn.eval(&[x, *b, C64::new(1.0, 0.0)]).norm()))
                .expect("positive degree");
            let (x, y) = newton2(&fn_, &gn, x, y);
            points.push(to_c64(&frame, &[x, y, C64::new(1.0, 0.0)]));
        }
        return Ok(points);
    }
    Err(Error::Numeric(format!("no generic frame found for intersection ({last})")))
}

/// Newton iteration for `f = g = 0` in the chart `x3 = 1`.
fn newton2(f: &NumericForm, g: &NumericForm, mut x: C64, mut y: C64) -> (C64, C64) {
    let (fx, fy, gx, gy) = (f.diff(0), f.diff(1), g.diff(0), g.diff(1));
    let one = C64::new(1.0, 0.0);
    for _ in 0..8 {
        let p = [x, y, one];
        let (a, b) = (f.eval(&p), g.eval(&p));
        let (j11, j12, j21, j22) = (fx.eval(&p), fy.eval(&p), gx.eval(&p), gy.eval(&p));
        let det = j11 * j22 - j12 * j21;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (a * j22 - b * j12) / det;
        let dy = (j11 * b - j21 * a) / det;
        let (nx, ny) = (x - dx, y - dy);
        let q = [nx, ny, one];
        if f.eval(&q).norm() + g.eval(&q).norm() > a.norm() + b.norm() {
            break;
        }
        x = nx;
        y = ny;
        if dx.norm() + dy.norm() < 1e-15 * (1.0 + x.norm() + y.norm()) {
            break;
        }
    }
    (x, y)
}

/// The seven base points, with per-point residuals.
#[derive(Clone, Debug, Serialize)]
pub struct BasePoints {
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<NumPoint>,
    pub residuals: Vec<f64>,
    /// Common zeros of `N1, N2` rejected because `N3` does not vanish there.
    #[serde(serialize_with = "ser_points")]
    pub rejected: Vec<NumPoint>,
}

impl BasePoints {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Solve `N1 = N2 = 0` and keep the solutions where `N3` vanishes to `tol`.
pub fn seven_points_numeric(net: &CubicNet, tol: f64) -> Result<BasePoints> {
    let [n1, n2, n3] = net.minors();
    let candidates = intersect(n1, n2, &mut rng(COORDINATE_SEED))?;
    let n3n = NumericForm::from_exact(n3);
    let (points, rejected): (Vec<NumPoint>, Vec<NumPoint>) =
        candidates.into_iter().partition(|p| n3n.normalized_eval(p) < tol);
    if points.len() != 7 {
        return Err(Error::Numeric(format!("{} common zeros of the net survive, expected 7", points.len())));
    }
    let residuals = points.iter().map(|p| net.residual(p)).collect();
    Ok(BasePoints { points, residuals, rejected })
}

fn ser_points<S: serde::Serializer>(points: &[NumPoint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for p in points {
        seq.serialize_element(&p.map(|c| [c.re, c.im]))?;
    }
    seq.end()
}

fn conic_row(p: &NumPoint) -> Vec<C64> {
    monomial_exponents(2).iter().map(|e| monomial_value(e, p)).collect()
}

fn singular_values(rows: &[Vec<C64>]) -> Vec<f64> {
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn numeric_rank(sv: &[f64]) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > RANK_TOL * top).count()
}

/// Smallest relative singular value `s_6 / s_1` of the conic-evaluation
/// matrix over all six-point subsets; large means no six lie on a conic.
pub fn conic_condition(points: &[NumPoint]) -> f64 {
    let n = points.len();
    let mut worst = f64::INFINITY;
    for skip in 0..n {
        let rows: Vec<Vec<C64>> = (0..n).filter(|&i| i != skip).map(|i| conic_row(&points[i])).collect();
        let sv = singular_values(&rows);
        worst = worst.min(sv[5] / sv[0]);
    }
    worst
}

pub fn no_six_on_a_conic(points: &[NumPoint]) -> bool {
    points.len() == 7 && conic_condition(points) > RANK_TOL
}

/// Jacobian determinant of the net.
pub fn ramification_sextic(net: &CubicNet) -> TernaryForm {
    let j: [[Poly; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|k| net.minors[i].poly().diff(Var::X(k))));
    let minor = |a: usize, b: usize| &(&j[1][a] * &j[2][b]) - &(&j[1][b] * &j[2][a]);
    let det = &(&(&j[0][0] * &minor(1, 2)) - &(&j[0][1] * &minor(0, 2))) + &(&j[0][2] * &minor(0, 1));
    TernaryForm::x(det, 6).expect("sextic")
}

/// Result of [`fiber_count`].
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub target: [i64; 3],
    /// Solutions other than the base points, each mapping to the target.
    #[serde(serialize_with = "ser_points")]
    pub fiber: Vec<NumPoint>,
    pub count: usize,
    /// Targets rejected because the defining cubics share a component.
    pub skipped: Vec<[i64; 3]>,
}

/// Size of the fiber over a random integer target `y`: solve
/// `N1 y2 - N2 y1 = N1 y3 - N3 y1 = 0` and discard the base points.
///
/// Targets for which the two cubics share a component (the image of a
/// contracted curve) are skipped and listed in the report.
pub fn fiber_count(net: &CubicNet, base: &[NumPoint], seed: u64, tol: f64) -> Result<FiberReport> {
    let mut r = rng(seed);
    let n = net.minors().each_ref().map(TernaryForm::poly);
    let mut skipped = Vec::new();
    for _ in 0..MAX_ATTEMPTS {
        let target: [i64; 3] = std::array::from_fn(|_| r.gen_range(-5i64..=5));
        if target[0] == 0 {
            continue;
        }
        let ys = target.map(Scalar::from_int);
        let a = TernaryForm::x(&n[0].scale(&ys[1]) - &n[1].scale(&ys[0]), 3)?;
        let b = TernaryForm::x(&n[0].scale(&ys[2]) - &n[2].scale(&ys[0]), 3)?;
        let sols = match intersect(&a, &b, &mut r) {
            Ok(s) => s,
            Err(_) => {
                skipped.push(target);
                continue;
            }
        };
        let yc = target.map(|v| C64::new(v as f64, 0.0));
        let fiber: Vec<NumPoint> = sols
            .into_iter()
            .filter(|p| base.iter().all(|q| projective_distance(p, q) > tol.sqrt()))
            .filter(|p| projective_distance(&net.image(p), &yc) < tol.sqrt())
            .collect();
        return Ok(FiberReport { target, count: fiber.len(), fiber, skipped });
    }
    Err(Error::Numeric("no target with a finite fiber found".into()))
}

/// Result of [`branch_quartic`].
#[derive(Clone, Debug, Serialize)]
pub struct BranchQuartic {
    /// Coefficients in the quartic monomial order, largest scaled to 1.
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: Vec<C64>,
    pub fit_samples: usize,
    pub held_out: usize,
    /// Largest normalized value on held-out image points.
    pub residual: f64,
    /// Numeric rank of the evaluation matrix on 15 distinct image samples.
    pub rank15: usize,
    pub singular_values15: Vec<f64>,
}

impl BranchQuartic {
    pub fn form(&self) -> NumericForm {
        NumericForm::from_coefficients(4, &self.coefficients)
    }
}

fn ser_coeffs<S: serde::Serializer>(c: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for v in c {
        seq.serialize_element(&[v.re, v.im])?;
    }
    seq.end()
}

pub const HELD_OUT: usize = 10;

/// Minimal relative distance between roots on a sample line.
const SEPARATION: f64 = 1e-3;

/// Points on the ramification sextic from random rational lines. Lines whose
/// restriction has nearly multiple roots are skipped: the sextic is singular
/// at the base points, where the image is also ill-conditioned.
fn sextic_samples(net: &CubicNet, sextic: &TernaryForm, count: usize, r: &mut ChaCha8Rng) -> Result<Vec<NumPoint>> {
    let mut out = Vec::with_capacity(count);
    let mut lines = 0;
    while out.len() < count {
        lines += 1;
        if lines > 10 * count {
            return Err(Error::Numeric("could not sample the ramification curve".into()));
        }
        let a: [i64; 3] = std::array::from_fn(|_| r.gen_range(-5..=5));
        let b: [i64; 3] = std::array::from_fn(|_| r.gen_range(-5..=5));
        let values: Result<Vec<Scalar>> = (0..=6i64)
            .map(|s| sextic.eval(&std::array::from_fn(|i| Scalar::from_int(a[i] + s * b[i]))))
            .collect();
        let coeffs = interpolate(&values?);
        if coeffs[6].is_zero() {
            continue;
        }
        let Ok(roots) = polynomial_roots(&coeffs.iter().map(Scalar::to_complex).collect::<Vec<_>>()) else {
            continue;
        };
        let clustered = roots.iter().enumerate().any(|(i, a)| {
            roots[i + 1..].iter().any(|b| (a - b).norm() < SEPARATION * (1.0 + a.norm()))
        });
        if clustered {
            continue;
        }
        for s in roots {
            let p = normalize(&std::array::from_fn(|i| a[i] as f64 + s * b[i] as f64));
            if net.residual(&p) > 1e-6 {
                out.push(p);
            }
        }
    }
    out.truncate(count);
    Ok(out)
}

fn quartic_row(p: &NumPoint) -> Vec<C64> {
    monomial_exponents(4).iter().map(|e| monomial_value(e, p)).collect()
}

/// Fit the image of the ramification curve by a quartic.
pub fn branch_quartic(net: &CubicNet, samples: usize, fit_tol: f64, seed: u64) -> Result<BranchQuartic> {
    if samples < 20 {
        return Err(Error::Numeric(format!("need at least 20 samples, got {samples}")));
    }
    let sextic = ramification_sextic(net);
    let mut r = rng(seed);
    let pts = sextic_samples(net, &sextic, samples + HELD_OUT, &mut r)?;
    let images: Vec<NumPoint> = pts.iter().map(|p| normalize(&net.image(p))).collect();
    let (fit, held) = images.split_at(samples);

    let rows: Vec<Vec<C64>> = fit.iter().map(quartic_row).collect();
    let m = DMatrix::from_fn(rows.len(), 15, |i, j| rows[i][j]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let k = (0..svd.singular_values.len())
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .expect("nonempty");
    let mut coefficients: Vec<C64> = (0..15).map(|j| vt[(k, j)].conj()).collect();
    let big = coefficients.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).expect("15");
    for c in coefficients.iter_mut() {
        *c /= big;
    }
    let form = NumericForm::from_coefficients(4, &coefficients);
    let residual = held.iter().map(|p| form.normalized_eval(p)).fold(0.0, f64::max);

    // a contracted component of the sextic sends many samples to one point
    let mut distinct: Vec<NumPoint> = Vec::with_capacity(15);
    for p in images.iter() {
        if distinct.len() < 15 && distinct.iter().all(|q| projective_distance(p, q) > 1e-6) {
            distinct.push(*p);
        }
    }
    let singular_values15 = singular_values(&distinct.iter().map(quartic_row).collect::<Vec<_>>());
    let rank15 = numeric_rank(&singular_values15);
    if !(residual < fit_tol) {
        return Err(Error::Numeric(format!("branch quartic fit residual {residual:.3e} exceeds {fit_tol:.0e}")));
    }
    Ok(BranchQuartic { coefficients, fit_samples: samples, held_out: HELD_OUT, residual, rank15, singular_values15 })
}

/// Everything the numeric suite checks for one net.
#[derive(Clone, Debug, Serialize)]
pub struct GeiserReport {
    pub base_points: BasePoints,
    pub max_residual: f64,
    pub conic_condition: f64,
    pub no_six_on_a_conic: bool,
    /// Largest normalized value of the ramification sextic at base points.
    pub sextic_at_base_points: f64,
    pub fiber: FiberReport,
    pub branch: BranchQuartic,
}

impl GeiserReport {
    pub fn passes(&self, tol: f64, fit_tol: f64) -> bool {
        self.base_points.points.len() == 7
            && self.max_residual < tol
            && self.no_six_on_a_conic
            && self.fiber.count == 2
            && self.branch.residual < fit_tol
            && self.branch.rank15 == 14
    }
}

pub const DEFAULT_SAMPLES: usize = 30;

pub fn geiser_suite(net: &CubicNet, seed: u64, tol: f64, fit_tol: f64) -> Result<GeiserReport> {
    let base_points = seven_points_numeric(net, tol)?;
    let conic_condition = conic_condition(&base_points.points);
    let sextic = NumericForm::from_exact(&ramification_sextic(net));
    let sextic_at_base_points = base_points.points.iter().map(|p| sextic.normalized_eval(p)).fold(0.0, f64::max);
    let fiber = fiber_count(net, &base_points.points, seed, tol)?;
    let branch = branch_quartic(net, DEFAULT_SAMPLES, fit_tol, seed.wrapping_add(1))?;
    Ok(GeiserReport {
        max_residual: base_points.max_residual(),
        no_six_on_a_conic: conic_condition > RANK_TOL,
        conic_condition,
        sextic_at_base_points,
        base_points,
        fiber,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn example_net() -> CubicNet {
        let q = TernaryForm::parse(Field::Rational, Group::X, 2, "x1^2 + x2^2 + x3^2").unwrap();
        let c = TernaryForm::parse(Field::Rational, Group::X, 3, "x1^3 + x2^3 - x3^3 - (x1 + x2 + x3)^3").unwrap();
        net_from_qc(&q, &c).unwrap()
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z - 1)(z + 2)(z - 3i)
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let roots_true = [one, -2.0 * one, 3.0 * i];
        let c0 = -roots_true[0] * roots_true[1] * roots_true[2];
        let c1 = roots_true[0] * roots_true[1] + roots_true[0] * roots_true[2] + roots_true[1] * roots_true[2];
        let c2 = -(roots_true[0] + roots_true[1] + roots_true[2]);
        let roots = polynomial_roots(&[c0, c1, c2, one]).unwrap();
        for t in roots_true {
            assert!(roots.iter().any(|r| (r - t).norm() < 1e-12));
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = |x: i64| Scalar::from_int(3 - 2 * x + x * x * x);
        let c = interpolate(&(0..5).map(p).collect::<Vec<_>>());
        let want: Vec<Scalar> = [3, -2, 0, 1, 0].map(Scalar::from_int).to_vec();
        assert_eq!(c, want);
    }

    #[test]
    fn syzygy_of_minors() {
        assert!(example_net().syzygy_holds());
    }

    #[test]
    fn degenerate_net_flagged() {
        let q = TernaryForm::parse(Field::Rational, Group::X, 2, "(x1 + x2)^2").unwrap();
        let c = TernaryForm::parse(Field::Rational, Group::X, 3, "(x1 + x2)^3").unwrap();
        assert!(matches!(net_from_qc(&q, &c), Err(Error::Degenerate(_))));
    }

    #[test]
    fn intersect_two_conics() {
        let f = TernaryForm::parse(Field::Rational, Group::X, 2, "x1^2 + x2^2 - 2*x3^2").unwrap();
        let g = TernaryForm::parse(Field::Rational, Group::X, 2, "x1*x2 - x3^2").unwrap();
        let pts = intersect(&f, &g, &mut rng(3)).unwrap();
        assert_eq!(pts.len(), 4);
        // (1:1:1) is a double intersection point, so only the count and the
        // residuals are checked
        let fnum = NumericForm::from_exact(&f);
        assert!(pts.iter().all(|p| fnum.normalized_eval(p) < 1e-6));
    }

    #[test]
    fn example_base_points() {
        let net = example_net();
        let bp = seven_points_numeric(&net, DEFAULT_TOL).unwrap();
        assert_eq!(bp.points.len(), 7);
        assert!(bp.max_residual() < 1e-8);
        assert!(no_six_on_a_conic(&bp.points));
    }
}

