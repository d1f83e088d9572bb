//! Seeded generation of small-integer test instances.
//!
//! Everything here is a pure function of the seed (ChaCha8), so reports that
//! use these instances are reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apolarity::Pentagon;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{det3, gram, monomial_exponents, Group, TernaryForm};

const MAX_TRIES: usize = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients drawn uniformly from `-bound..=bound`.
pub fn random_form(rng: &mut impl Rng, group: Group, degree: u32, bound: i64) -> TernaryForm {
    let n = monomial_exponents(degree).len();
    let coeffs: Vec<Scalar> = (0..n).map(|_| Scalar::from_int(rng.gen_range(-bound..=bound))).collect();
    TernaryForm::from_coefficients(group, degree, &coeffs).expect("sized")
}

pub fn random_nonzero_form(rng: &mut impl Rng, group: Group, degree: u32, bound: i64) -> TernaryForm {
    loop {
        let f = random_form(rng, group, degree, bound);
        if !f.poly().is_zero() {
            return f;
        }
    }
}

pub fn random_line(rng: &mut impl Rng, bound: i64) -> [Scalar; 3] {
    loop {
        let l: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if l.iter().any(|&v| v != 0) {
            return l.map(Scalar::from_int);
        }
    }
}

/// A conic with nonsingular Gram matrix and a nonzero cubic. A nonsingular
/// Gram matrix also makes the partials of the conic independent.
pub fn random_bateman_pair(rng: &mut impl Rng) -> Result<(TernaryForm, TernaryForm)> {
    for _ in 0..MAX_TRIES {
        let q = random_form(rng, Group::X, 2, 3);
        if det3(&gram(&q)).is_zero() {
            continue;
        }
        let c = random_nonzero_form(rng, Group::X, 3, 3);
        return Ok((q, c));
    }
    Err(Error::Degenerate("no nondegenerate conic found".into()))
}

/// Five lines, no three concurrent.
pub fn random_pentagon(rng: &mut impl Rng) -> Result<Pentagon> {
    for _ in 0..MAX_TRIES {
        let lines: [[Scalar; 3]; 5] = std::array::from_fn(|_| random_line(rng, 4));
        if let Ok(p) = Pentagon::new(lines) {
            if p.is_generic() {
                return Ok(p);
            }
        }
    }
    Err(Error::Degenerate("no generic pentagon found".into()))
}

/// An integer matrix of determinant 1, built from elementary operations.
pub fn random_unimodular(rng: &mut impl Rng) -> [[Scalar; 3]; 3] {
    let mut m = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..6 {
        let i = rng.gen_range(0..3);
        let mut j = rng.gen_range(0..3);
        if j == i {
            j = (i + 1) % 3;
        }
        let k = rng.gen_range(-2..=2);
        // row_i += k * row_j
        for c in 0..3 {
            m[i][c] += k * m[j][c];
        }
    }
    // a signed transposition keeps the determinant at 1
    if rng.gen_bool(0.5) {
        m.swap(0, 1);
        for c in 0..3 {
            m[0][c] = -m[0][c];
        }
    }
    m.map(|r| r.map(Scalar::from_int))
}

/// Kinds of instance the command line can generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    BatemanPair,
    Quartic,
    Pentagon,
}

#[derive(Clone, Debug)]
pub enum Instance {
    BatemanPair { conic: TernaryForm, cubic: TernaryForm },
    Quartic(TernaryForm),
    Pentagon(Pentagon),
}

pub fn random_instance(seed: u64, kind: InstanceKind) -> Result<Instance> {
    let mut r = rng(seed);
    Ok(match kind {
        InstanceKind::BatemanPair => {
            let (conic, cubic) = random_bateman_pair(&mut r)?;
            Instance::BatemanPair { conic, cubic }
        }
        InstanceKind::Quartic => Instance::Quartic(random_nonzero_form(&mut r, Group::X, 4, 5)),
        InstanceKind::Pentagon => Instance::Pentagon(random_pentagon(&mut r)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn unimodular_has_det_one() {
        let mut r = rng(5);
        for _ in 0..50 {
            assert_eq!(det3(&random_unimodular(&mut r)), Scalar::one());
        }
    }

    #[test]
    fn seed_one_bateman_pair_is_pinned() {
        let Instance::BatemanPair { conic, cubic } = random_instance(1, InstanceKind::BatemanPair).unwrap() else {
            unreachable!()
        };
        let again = random_instance(1, InstanceKind::BatemanPair).unwrap();
        let Instance::BatemanPair { conic: c2, cubic: k2 } = again else { unreachable!() };
        assert_eq!((&conic, &cubic), (&c2, &k2));
        assert!(!det3(&gram(&conic)).is_zero());
        let pinned_conic = TernaryForm::parse(Field::Rational, Group::X, 2, SEED1_CONIC).unwrap();
        let pinned_cubic = TernaryForm::parse(Field::Rational, Group::X, 3, SEED1_CUBIC).unwrap();
        assert_eq!(conic, pinned_conic, "got {conic}");
        assert_eq!(cubic, pinned_cubic, "got {cubic}");
    }

    const SEED1_CONIC: &str = "-x1^2 - 3*x1*x2 + x1*x3 - 2*x2^2 - 2*x3^2";
    const SEED1_CUBIC: &str = "3*x1^3 + x1^2*x3 - 3*x1*x2^2 - 2*x1*x2*x3 + 3*x2^3 + 3*x2^2*x3 - x2*x3^2";

    #[test]
    fn different_seeds_differ() {
        let a = random_instance(1, InstanceKind::Quartic).unwrap();
        let b = random_instance(2, InstanceKind::Quartic).unwrap();
        let (Instance::Quartic(a), Instance::Quartic(b)) = (a, b) else { unreachable!() };
        assert_ne!(a, b);
    }

    #[test]
    fn pentagons_are_generic() {
        for seed in 0..20 {
            let Instance::Pentagon(p) = random_instance(seed, InstanceKind::Pentagon).unwrap() else { unreachable!() };
            assert!(p.is_generic());
        }
    }
}
