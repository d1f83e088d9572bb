//! Exact coefficient fields: the rationals and quadratic extensions `Q[t]/(t^2 - d)`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The field a [`Scalar`] lives in.
///
/// `Quadratic(d)` is `Q(t)` with `t^2 = d` for a square-free `d` other than 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Quadratic(i64),
}

impl Field {
    pub fn quadratic(d: i64) -> Result<Field> {
        if d == 0 || d == 1 || !is_square_free(d) {
            return Err(Error::Field(format!("{d} is not a square-free integer != 0, 1")));
        }
        Ok(Field::Quadratic(d))
    }

    /// The smallest field containing both, if there is one.
    pub fn join(self, other: Field) -> Result<Field> {
        match (self, other) {
            (Field::Rational, f) | (f, Field::Rational) => Ok(f),
            (Field::Quadratic(a), Field::Quadratic(b)) if a == b => Ok(self),
            _ => Err(Error::FieldMismatch(self, other)),
        }
    }

    pub fn contains(self, other: Field) -> bool {
        matches!(self.join(other), Ok(f) if f == self)
    }

    pub fn radicand(self) -> Option<i64> {
        match self {
            Field::Rational => None,
            Field::Quadratic(d) => Some(d),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// An element `a + b*t` of a field from [`Field`].
///
/// Rationals are kept in lowest terms by `BigRational`; for `Field::Rational`
/// the `t`-part is always zero.
#[derive(Clone, Debug)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    field: Field,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::zero(), field: Field::Rational }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero(), field: Field::Rational }
    }

    /// `a + b*t` in `field`. A rational field requires `b == 0`.
    pub fn new(a: BigRational, b: BigRational, field: Field) -> Result<Self> {
        if field == Field::Rational && !b.is_zero() {
            return Err(Error::Field("nonzero t-part in the rational field".into()));
        }
        Ok(Scalar { a, b, field })
    }

    /// The generator `t` of `Q(sqrt(d))`.
    pub fn sqrt_generator(field: Field) -> Result<Self> {
        match field {
            Field::Rational => Err(Error::Field("Q has no adjoined square root".into())),
            Field::Quadratic(_) => Ok(Scalar { a: BigRational::zero(), b: BigRational::one(), field }),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of `t`.
    pub fn t_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, if the `t`-part vanishes.
    pub fn to_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Same value viewed in a larger field.
    pub fn coerce(&self, field: Field) -> Result<Scalar> {
        if !field.contains(self.field) {
            return Err(Error::FieldMismatch(self.field, field));
        }
        Ok(Scalar { a: self.a.clone(), b: self.b.clone(), field })
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self.field {
            Field::Rational => Some(Scalar::rational(self.a.recip())),
            Field::Quadratic(d) => {
                // (a + bt)^-1 = (a - bt) / (a^2 - d b^2)
                let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(d.into());
                Some(Scalar { a: &self.a / &norm, b: -&self.b / &norm, field: self.field })
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Approximate complex value, taking `t = sqrt(d)` on the principal branch.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let a = ratio_to_f64(&self.a);
        let b = ratio_to_f64(&self.b);
        match self.field {
            Field::Rational => num_complex::Complex64::new(a, 0.0),
            Field::Quadratic(d) if d > 0 => num_complex::Complex64::new(a + b * (d as f64).sqrt(), 0.0),
            Field::Quadratic(d) => num_complex::Complex64::new(a, b * (-(d as f64)).sqrt()),
        }
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    fn combine_field(&self, other: &Scalar) -> Field {
        match self.field.join(other.field) {
            Ok(f) => f,
            Err(e) => panic!("{e}"),
        }
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: scale before dividing.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.field.join(other.field).is_ok()
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(a, b)`; a total order for canonical sorting only.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*t", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*t", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*t", self.a, self.b)
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let field = self.combine_field(rhs);
        Scalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b, field }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let field = self.combine_field(rhs);
        Scalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b, field }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let field = self.combine_field(rhs);
        match field {
            Field::Quadratic(d) if !(self.b.is_zero() && rhs.b.is_zero()) => {
                let d = BigRational::from_integer(d.into());
                Scalar {
                    a: &self.a * &rhs.a + &self.b * &rhs.b * d,
                    b: &self.a * &rhs.b + &self.b * &rhs.a,
                    field,
                }
            }
            _ => Scalar { a: &self.a * &rhs.a, b: BigRational::zero(), field },
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b, field: self.field }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.field = self.combine_field(rhs);
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.field = self.combine_field(rhs);
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: i64) -> Scalar {
        Scalar::sqrt_generator(Field::quadratic(d).unwrap()).unwrap()
    }

    #[test]
    fn lowest_terms() {
        let x = Scalar::from_frac(6, -4);
        assert_eq!(x.rational_part().numer(), &BigInt::from(-3));
        assert_eq!(x.rational_part().denom(), &BigInt::from(2));
    }

    #[test]
    fn generator_squares_to_radicand() {
        let i2 = t(-2);
        assert_eq!(&i2 * &i2, Scalar::from_int(-2));
        assert!((&i2 * &i2).is_rational());
    }

    #[test]
    fn inverse_in_extension() {
        let x = &Scalar::from_int(3) + &(&t(-2) * &Scalar::from_int(5));
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn rejects_bad_radicands() {
        assert!(Field::quadratic(4).is_err());
        assert!(Field::quadratic(1).is_err());
        assert!(Field::quadratic(0).is_err());
        assert!(Field::quadratic(-12).is_err());
        assert!(Field::quadratic(-2).is_ok());
    }

    #[test]
    fn mismatched_fields_do_not_join() {
        let a = Field::quadratic(-2).unwrap();
        let b = Field::quadratic(5).unwrap();
        assert!(a.join(b).is_err());
        assert_eq!(a.join(Field::Rational).unwrap(), a);
    }

    #[test]
    fn rational_equals_embedded_rational() {
        let x = Scalar::from_int(7);
        let y = x.coerce(Field::quadratic(-2).unwrap()).unwrap();
        assert_eq!(x, y);
    }
}
