//! Sparse polynomials in the point variables `x1, x2, x3` and the dual
//! variables `e1, e2, e3`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Exponents of `(x1, x2, x3, e1, e2, e3)`.
pub type Exponent = [u8; 6];

/// One of the two variable groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// Point coordinates `x1, x2, x3`.
    X,
    /// Dual coordinates `e1, e2, e3`.
    E,
}

impl Group {
    fn offset(self) -> usize {
        match self {
            Group::X => 0,
            Group::E => 3,
        }
    }

    pub fn other(self) -> Group {
        match self {
            Group::X => Group::E,
            Group::E => Group::X,
        }
    }

    pub fn var(self, i: usize) -> Var {
        match self {
            Group::X => Var::X(i),
            Group::E => Var::E(i),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Group::X => "x",
            Group::E => "e",
        }
    }
}

/// A variable; the index is zero-based (`Var::X(0)` is `x1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    E(usize),
}

impl Var {
    pub fn slot(self) -> usize {
        match self {
            Var::X(i) => {
                assert!(i < 3, "variable index out of range");
                i
            }
            Var::E(i) => {
                assert!(i < 3, "variable index out of range");
                3 + i
            }
        }
    }

    pub fn group(self) -> Group {
        match self {
            Var::X(_) => Group::X,
            Var::E(_) => Group::E,
        }
    }
}

/// Exponent vectors `(a1, a2, a3)` of degree `d` in descending lexicographic
/// order; for `d = 2` this is `11, 12, 13, 22, 23, 33`.
pub fn monomial_exponents(degree: u32) -> Vec<[u8; 3]> {
    let d = degree as u8;
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Embed a three-variable exponent into `group`.
pub fn exponent_in(group: Group, e: [u8; 3]) -> Exponent {
    let mut out = [0u8; 6];
    let o = group.offset();
    out[o..o + 3].copy_from_slice(&e);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Self {
        Poly { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        Poly::from_terms(field, [([0; 6], c)]).expect("constant lies in its own field")
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0u8; 6];
        e[v.slot()] = 1;
        Poly::monomial(Field::Rational, e, Scalar::one())
    }

    pub fn x(i: usize) -> Self {
        Poly::var(Var::X(i))
    }

    pub fn e(i: usize) -> Self {
        Poly::var(Var::E(i))
    }

    pub fn monomial(field: Field, exp: Exponent, c: Scalar) -> Self {
        Poly::from_terms(field, [(exp, c)]).expect("monomial coefficient outside field")
    }

    /// Sums duplicate exponents and drops zero coefficients; every coefficient
    /// must lie in `field`.
    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Result<Self> {
        let mut map: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (exp, c) in terms {
            let c = c.coerce(field)?;
            match map.get_mut(&exp) {
                Some(v) => *v += &c,
                None => {
                    map.insert(exp, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Poly { field, terms: map })
    }

    /// Linear form `sum_i c_i * v_i` over one variable group.
    pub fn linear(group: Group, coeffs: &[Scalar; 3]) -> Self {
        let field = join_all(coeffs.iter().map(Scalar::field));
        let terms = (0..3).map(|i| {
            let mut e = [0u8; 3];
            e[i] = 1;
            (exponent_in(group, e), coeffs[i].clone())
        });
        Poly::from_terms(field, terms).expect("joined field")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &Exponent) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the monomial with exponent `e` in `group` (other group at zero).
    pub fn coeff_in(&self, group: Group, e: [u8; 3]) -> Scalar {
        self.coeff(&exponent_in(group, e))
    }

    /// View in a larger field.
    pub fn coerce(&self, field: Field) -> Result<Poly> {
        if !field.contains(self.field) {
            return Err(Error::FieldMismatch(self.field, field));
        }
        Poly::from_terms(field, self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }

    /// `(deg_x, deg_e)` if every term has the same bidegree; `None` for the
    /// zero polynomial or mixed bidegrees.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|e| {
            (
                e[0..3].iter().map(|&v| v as u32).sum::<u32>(),
                e[3..6].iter().map(|&v| v as u32).sum::<u32>(),
            )
        });
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Degree in `group` if all terms share it.
    pub fn degree_in(&self, group: Group) -> Option<u32> {
        let o = group.offset();
        let mut it = self.terms.keys().map(|e| e[o..o + 3].iter().map(|&v| v as u32).sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// True when no variable of `group` occurs.
    pub fn free_of(&self, group: Group) -> bool {
        let o = group.offset();
        self.terms.keys().all(|e| e[o..o + 3].iter().all(|&v| v == 0))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let field = self.field.join(c.field()).expect("scalar outside polynomial field");
        Poly::from_terms(field, self.terms.iter().map(|(e, v)| (*e, v * c))).expect("joined field")
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(Scalar::one()).coerce(self.field).unwrap();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> Poly {
        let s = v.slot();
        let terms = self.terms.iter().filter(|(e, _)| e[s] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[s] -= 1;
            (e2, c * &Scalar::from_int(e[s] as i64))
        });
        Poly::from_terms(self.field, terms).expect("same field")
    }

    /// Apply the differential operator obtained by reading `op` (a
    /// polynomial in one group) with each variable replaced by the partial
    /// derivative along the matching variable of `target`.
    pub fn apply_operator(&self, op: &Poly, op_group: Group, target: Group) -> Poly {
        let mut acc = Poly::zero(self.field.join(op.field).expect("field"));
        let o = op_group.offset();
        for (e, c) in op.terms() {
            let mut p = self.clone();
            for i in 0..3 {
                for _ in 0..e[o + i] {
                    p = p.diff(target.var(i));
                }
            }
            acc = &acc + &p.scale(c);
        }
        acc
    }

    /// Substitute the values `point` for the variables of `group`.
    pub fn eval_group(&self, group: Group, point: &[Scalar; 3]) -> Result<Poly> {
        let mut field = self.field;
        for p in point {
            field = field.join(p.field())?;
        }
        let o = group.offset();
        let mut out: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..3 {
                if e[o + i] > 0 {
                    v = &v * &point[i].pow(e[o + i] as u32);
                }
            }
            let mut e2 = *e;
            e2[o..o + 3].fill(0);
            let slot = out.entry(e2).or_insert_with(Scalar::zero);
            *slot += &v;
        }
        Poly::from_terms(field, out)
    }

    /// Full substitution.
    pub fn eval(&self, x: &[Scalar; 3], e: &[Scalar; 3]) -> Result<Scalar> {
        let p = self.eval_group(Group::X, x)?.eval_group(Group::E, e)?;
        p.coeff(&[0; 6]).coerce(p.field)
    }

    /// Substitute every variable of `group` that occurs; the other group
    /// must be absent.
    pub fn eval_at(&self, group: Group, point: &[Scalar; 3]) -> Result<Scalar> {
        let p = self.eval_group(group, point)?;
        if !p.free_of(group.other()) {
            return Err(Error::Degree {
                expected: format!("a polynomial in {} only", group.name()),
                got: self.to_string(),
            });
        }
        Ok(p.coeff(&[0; 6]))
    }

    /// Linear substitution `v_i -> sum_j g[i][j] v_j` on the variables of `group`.
    pub fn substitute_linear(&self, group: Group, g: &[[Scalar; 3]; 3]) -> Poly {
        let images: Vec<Poly> = (0..3)
            .map(|i| {
                let f = join_all(g[i].iter().map(Scalar::field));
                let terms = (0..3).map(|j| {
                    let mut e = [0u8; 3];
                    e[j] = 1;
                    (exponent_in(group, e), g[i][j].clone())
                });
                Poly::from_terms(f, terms).expect("joined field")
            })
            .collect();
        let o = group.offset();
        let field = g.iter().flatten().fold(self.field, |f, c| f.join(c.field()).expect("field"));
        let mut acc = Poly::zero(field);
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[o..o + 3].fill(0);
            let mut term = Poly::monomial(field, rest, c.clone());
            for i in 0..3 {
                term = &term * &images[i].pow(e[o + i] as u32);
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Rename the variables of one group to the other (`x_i <-> e_i`).
    pub fn swap_groups(&self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut s = [0u8; 6];
            s[..3].copy_from_slice(&e[3..]);
            s[3..].copy_from_slice(&e[..3]);
            (s, c.clone())
        });
        Poly::from_terms(self.field, terms).unwrap()
    }

    /// Parse an expression such as `x1^2 - 3/2*x2*e1 + (x1 + t*x3)^3`.
    ///
    /// `t` denotes the square root adjoined in `field`.
    pub fn parse(field: Field, s: &str) -> Result<Poly> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, field };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        out.coerce(field)
    }
}

fn join_all(fields: impl Iterator<Item = Field>) -> Field {
    fields.fold(Field::Rational, |a, b| a.join(b).expect("incompatible fields"))
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let field = self.field.join(rhs.field).expect("incompatible polynomial fields");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        Poly { field, terms }
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let field = self.field.join(rhs.field).expect("incompatible polynomial fields");
        let mut terms: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let mut e = [0u8; 6];
                for k in 0..6 {
                    e[k] = e1[k] + e2[k];
                }
                let v = c1 * c2;
                match terms.get_mut(&e) {
                    Some(s) => *s += &v,
                    None => {
                        terms.insert(e, v);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { field, terms }
    }
}

macro_rules! forward_poly {
    ($($tr:ident $m:ident),*) => {$(
        impl std::ops::$tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl<'a> std::ops::$tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
forward_poly!(Add add, Sub sub, Mul mul);

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; 6] = ["x1", "x2", "x3", "e1", "e2", "e3"];
        // Highest degree first reads more naturally.
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = (0..6)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { NAMES[i].to_string() } else { format!("{}^{}", NAMES[i], e[i]) })
                .collect();
            let (neg, mag) = if c.is_rational() && c.rational_part() < &num_rational::BigRational::from_integer(0.into()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let cs = if mag.is_rational() { mag.to_string() } else { format!("({mag})") };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{cs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A homogeneous form of a declared degree in one variable group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryForm {
    poly: Poly,
    group: Group,
    degree: u32,
}

impl TernaryForm {
    pub fn new(poly: Poly, group: Group, degree: u32) -> Result<Self> {
        let ok = poly.free_of(group.other()) && (poly.is_zero() || poly.degree_in(group) == Some(degree));
        if !ok {
            return Err(Error::Degree {
                expected: format!("form of degree {degree} in {}", group.name()),
                got: poly.to_string(),
            });
        }
        Ok(TernaryForm { poly, group, degree })
    }

    pub fn x(poly: Poly, degree: u32) -> Result<Self> {
        TernaryForm::new(poly, Group::X, degree)
    }

    pub fn e(poly: Poly, degree: u32) -> Result<Self> {
        TernaryForm::new(poly, Group::E, degree)
    }

    /// Parse a form; the group and degree are taken from `group` and `degree`.
    pub fn parse(field: Field, group: Group, degree: u32, s: &str) -> Result<Self> {
        TernaryForm::new(Poly::parse(field, s)?, group, degree)
    }

    /// Form with the given coefficients on [`monomial_exponents`].
    pub fn from_coefficients(group: Group, degree: u32, coeffs: &[Scalar]) -> Result<Self> {
        let monos = monomial_exponents(degree);
        if coeffs.len() != monos.len() {
            return Err(Error::Shape(format!("{} coefficients for {} monomials", coeffs.len(), monos.len())));
        }
        let field = coeffs.iter().try_fold(Field::Rational, |f, c| f.join(c.field()))?;
        let poly = Poly::from_terms(field, monos.iter().zip(coeffs).map(|(m, c)| (exponent_in(group, *m), c.clone())))?;
        TernaryForm::new(poly, group, degree)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    /// Coefficients on [`monomial_exponents`].
    pub fn coefficients(&self) -> Vec<Scalar> {
        monomial_exponents(self.degree).into_iter().map(|m| self.poly.coeff_in(self.group, m)).collect()
    }

    pub fn eval(&self, point: &[Scalar; 3]) -> Result<Scalar> {
        self.poly.eval_at(self.group, point)
    }

    /// `f(g v)`.
    pub fn compose(&self, g: &[[Scalar; 3]; 3]) -> TernaryForm {
        TernaryForm { poly: self.poly.substitute_linear(self.group, g), group: self.group, degree: self.degree }
    }

    pub fn scale(&self, c: &Scalar) -> TernaryForm {
        TernaryForm { poly: self.poly.scale(c), group: self.group, degree: self.degree }
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// The adjugate conic: the dual conic whose Gram matrix is the adjugate of
/// the Gram matrix of `q`.
///
/// Gram convention: `a11 x1^2 + a12 x1 x2 + ...` has Gram entries `a11` on
/// the diagonal and `a12 / 2` off it, so `q(v) = v^T G v`. The result is a
/// form in the other group (`x -> e` and vice versa); it is zero when the
/// Gram matrix has rank at most one.
pub fn adjugate_conic(q: &TernaryForm) -> Result<TernaryForm> {
    if q.degree() != 2 {
        return Err(Error::Degree { expected: "conic".into(), got: format!("degree {}", q.degree()) });
    }
    let g = gram(q);
    let adj = adjugate3(&g);
    TernaryForm::new(gram_to_poly(&adj, q.group().other()), q.group().other(), 2)
}

/// Symmetric Gram matrix of a conic.
pub fn gram(q: &TernaryForm) -> [[Scalar; 3]; 3] {
    let half = Scalar::from_frac(1, 2);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut e = [0u8; 3];
            e[i] += 1;
            e[j] += 1;
            let c = q.poly().coeff_in(q.group(), e);
            if i == j {
                c
            } else {
                &c * &half
            }
        })
    })
}

/// Quadratic form `v^T G v` in `group`.
pub fn gram_to_poly(g: &[[Scalar; 3]; 3], group: Group) -> Poly {
    let field = g.iter().flatten().fold(Field::Rational, |f, c| f.join(c.field()).expect("field"));
    let mut terms = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let mut e = [0u8; 3];
            e[i] += 1;
            e[j] += 1;
            terms.push((exponent_in(group, e), g[i][j].clone()));
        }
    }
    Poly::from_terms(field, terms).expect("joined field")
}

pub fn det3(m: &[[Scalar; 3]; 3]) -> Scalar {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1]);
    &(&(&m[0][0] * &minor(1, 2, 1, 2)) - &(&m[0][1] * &minor(1, 2, 0, 2))) + &(&m[0][2] * &minor(1, 2, 0, 1))
}

pub fn adjugate3(m: &[[Scalar; 3]; 3]) -> [[Scalar; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            // adj[i][j] = (-1)^(i+j) * minor(j, i)
            let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let v = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]) - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
            if (i + j) % 2 == 0 {
                v
            } else {
                -v
            }
        })
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: Field,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let inv = match (d.bidegree(), d.num_terms()) {
                        (Some((0, 0)), 1) => d.coeff(&[0; 6]).inv(),
                        _ => None,
                    };
                    let inv = inv.ok_or_else(|| self.error("division by a non-constant or zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let n: u32 = n.parse().map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let n: num_bigint::BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(Poly::constant(Scalar::rational(num_rational::BigRational::from_integer(n))))
            }
            Some(b'x') | Some(b'e') => {
                let g = if self.src[self.pos] == b'x' { Group::X } else { Group::E };
                self.pos += 1;
                match self.src.get(self.pos) {
                    Some(d @ b'1'..=b'3') => {
                        self.pos += 1;
                        Ok(Poly::var(g.var((d - b'1') as usize)))
                    }
                    _ => Err(self.error("expected variable index 1..3")),
                }
            }
            Some(b't') => {
                self.pos += 1;
                let t = Scalar::sqrt_generator(self.field).map_err(|_| self.error("'t' needs a quadratic field"))?;
                Ok(Poly::constant(t))
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(Field::Rational, s).unwrap()
    }

    fn pt(s: &str) -> Poly {
        Poly::parse(Field::quadratic(-2).unwrap(), s).unwrap()
    }

    fn ints(v: [i64; 3]) -> [Scalar; 3] {
        v.map(Scalar::from_int)
    }

    #[test]
    fn power_rule() {
        assert_eq!(p("x1^3").diff(Var::X(0)), p("3*x1^2"));
        assert_eq!(p("x1^2*e2").diff(Var::E(1)), p("x1^2"));
        assert_eq!(p("(x1+x2+x3)^3").diff(Var::X(2)), p("3*(x1+x2+x3)^2"));
        assert!(p("7").diff(Var::X(0)).is_zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("x1^2 + x2^2").eval_at(Group::X, &ints([1, 2, 0])).unwrap(), Scalar::from_int(5));
        let f = Field::quadratic(-2).unwrap();
        let t = Scalar::sqrt_generator(f).unwrap();
        let one = Scalar::one();
        let q1 = pt("e1^2 + e2^2 + e3^2");
        assert!(q1.eval_at(Group::E, &[one.clone(), t.clone(), one.clone()]).unwrap().is_zero());
        let q2 = pt("e1^2 - e1*e2 + e2^2 + e1*e3 + e2*e3");
        assert!(q2.eval_at(Group::E, &[t, one.clone(), one]).unwrap().is_zero());
    }

    #[test]
    fn eval_rejects_foreign_field() {
        let q = Poly::parse(Field::quadratic(5).unwrap(), "t*x1").unwrap();
        let t2 = Scalar::sqrt_generator(Field::quadratic(-2).unwrap()).unwrap();
        assert!(q.eval_at(Group::X, &[t2, Scalar::zero(), Scalar::zero()]).is_err());
    }

    #[test]
    fn partial_evaluation_keeps_other_group() {
        let q = p("x1*e1 + x2*e2");
        let r = q.eval_group(Group::X, &ints([2, 3, 0])).unwrap();
        assert_eq!(r, p("2*e1 + 3*e2"));
    }

    #[test]
    fn adjugates() {
        let q = TernaryForm::x(p("x1^2+x2^2+x3^2"), 2).unwrap();
        assert_eq!(adjugate_conic(&q).unwrap().poly(), &p("e1^2+e2^2+e3^2"));
        let d = TernaryForm::x(p("2*x1^2+3*x2^2+5*x3^2"), 2).unwrap();
        assert_eq!(adjugate_conic(&d).unwrap().poly(), &p("15*e1^2+10*e2^2+6*e3^2"));
        let r1 = TernaryForm::x(p("x1^2"), 2).unwrap();
        assert!(adjugate_conic(&r1).unwrap().poly().is_zero());
    }

    #[test]
    fn double_adjugate_scales_by_determinant() {
        let q = TernaryForm::x(p("2*x1^2 + 3*x1*x2 - x2^2 + 4*x2*x3 + x3^2 - 5*x1*x3"), 2).unwrap();
        let g = gram(&q);
        let back = adjugate_conic(&adjugate_conic(&q).unwrap()).unwrap();
        assert_eq!(back.poly(), &q.poly().scale(&det3(&g)));
    }

    #[test]
    fn parser_handles_fractions_and_t() {
        assert_eq!(p("3/2*x1 - x1/2"), p("x1"));
        let q = pt("(1 + t)^2");
        assert_eq!(q, pt("-1 + 2*t"));
        assert!(Poly::parse(Field::Rational, "t*x1").is_err());
        assert!(Poly::parse(Field::Rational, "x4").is_err());
        assert!(Poly::parse(Field::Rational, "x1 +").is_err());
    }

    #[test]
    fn ternary_form_checks_degree() {
        assert!(TernaryForm::x(p("x1^2 + x2"), 2).is_err());
        assert!(TernaryForm::x(p("x1*e1"), 1).is_err());
        assert!(TernaryForm::x(Poly::zero(Field::Rational), 3).is_ok());
    }

    #[test]
    fn coefficient_round_trip() {
        let f = TernaryForm::x(p("x1^4 - 2*x1*x2*x3^2 + 5/3*x3^4"), 4).unwrap();
        let back = TernaryForm::from_coefficients(Group::X, 4, &f.coefficients()).unwrap();
        assert_eq!(f, back);
        assert_eq!(monomial_exponents(2), vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]);
    }
}
