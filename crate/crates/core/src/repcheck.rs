//! Character arithmetic for the symmetric group on four letters acting on the
//! plane through the stabilizer of a projective frame, and weight
//! multisets for the principal SL2.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Conjugacy classes by cycle type.
pub const CLASS_NAMES: [&str; 5] = ["e", "(12)", "(12)(34)", "(123)", "(1234)"];
pub const CLASS_SIZES: [i64; 5] = [1, 6, 3, 8, 6];
pub const IRREP_NAMES: [&str; 5] = ["1", "eps", "V2", "V3", "V3'"];

/// Irreducible characters; `V3` is the reduced permutation representation
/// and `V3' = V3 (x) eps`.
pub const CHARACTER_TABLE: [[i64; 5]; 5] = [
    [1, 1, 1, 1, 1],
    [1, -1, 1, 1, -1],
    [2, 0, 2, -1, 0],
    [3, 1, -1, 0, -1],
    [3, -1, -1, 0, 1],
];

pub type IntMatrix = [[i64; 3]; 3];

/// The frame `(1:0:0), (0:1:0), (0:0:1), (1:1:1)`.
pub const FRAME: [[i64; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

fn mat_vec(a: &IntMatrix, v: &[i64; 3]) -> [i64; 3] {
    std::array::from_fn(|i| (0..3).map(|k| a[i][k] * v[k]).sum())
}

fn det(a: &IntMatrix) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn trace(a: &IntMatrix) -> i64 {
    a[0][0] + a[1][1] + a[2][2]
}

fn proportional(u: &[i64; 3], v: &[i64; 3]) -> bool {
    let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    cross == [0, 0, 0] && u != &[0, 0, 0] && v != &[0, 0, 0]
}

/// Whether `a` sends frame point `i` to frame point `perm[i]` projectively.
pub fn permutes_frame(a: &IntMatrix, perm: &[usize; 4]) -> bool {
    (0..4).all(|i| proportional(&mat_vec(a, &FRAME[i]), &FRAME[perm[i]]))
}

/// The determinant-one matrix inducing `perm` on the frame.
pub fn frame_matrix(perm: &[usize; 4]) -> IntMatrix {
    let cols = [FRAME[perm[0]], FRAME[perm[1]], FRAME[perm[2]]];
    let target = FRAME[perm[3]];
    // B lambda = target with B = [p_s1 p_s2 p_s3]; frame points make B a
    // signed permutation or elementary matrix, so Cramer's rule stays integral
    let b: IntMatrix = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]));
    let db = det(&b);
    let lambda: [i64; 3] = std::array::from_fn(|k| {
        let mut bk = b;
        for i in 0..3 {
            bk[i][k] = target[i];
        }
        let n = det(&bk);
        assert_eq!(n % db, 0, "frame points give integral coordinates");
        n / db
    });
    let mut a: IntMatrix = std::array::from_fn(|i| std::array::from_fn(|j| b[i][j] * lambda[j]));
    match det(&a) {
        1 => {}
        -1 => a = a.map(|r| r.map(|v| -v)),
        d => panic!("frame matrix with determinant {d}"),
    }
    a
}

/// Cycle-type class index of a permutation of four letters.
pub fn class_of(perm: &[usize; 4]) -> usize {
    let mut seen = [false; 4];
    let mut lengths = Vec::new();
    for s in 0..4 {
        if seen[s] {
            continue;
        }
        let (mut i, mut len) = (s, 0);
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    match lengths.as_slice() {
        [1, 1, 1, 1] => 0,
        [1, 1, 2] => 1,
        [2, 2] => 2,
        [1, 3] => 3,
        [4] => 4,
        _ => unreachable!(),
    }
}

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut s = p;
                    s.sort_unstable();
                    if s == [0, 1, 2, 3] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// All 24 elements as `(permutation, matrix)`.
pub fn s4_group() -> Vec<([usize; 4], IntMatrix)> {
    permutations().into_iter().map(|p| (p, frame_matrix(&p))).collect()
}

/// Class representatives: `e`, `(12)`, `(12)(34)`, `(123)`, `(1234)` on the
/// frame points.
pub fn s4_matrices() -> [IntMatrix; 5] {
    [[0, 1, 2, 3], [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0]].map(|p| frame_matrix(&p))
}

/// Values on the five classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFunction(#[serde(serialize_with = "ser_values")] pub [Rational64; 5]);

fn ser_values<S: serde::Serializer>(v: &[Rational64; 5], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(5))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl ClassFunction {
    pub fn from_ints(v: [i64; 5]) -> Self {
        ClassFunction(v.map(Rational64::from_integer))
    }

    pub fn irreducible(i: usize) -> Self {
        Self::from_ints(CHARACTER_TABLE[i])
    }

    pub fn trivial() -> Self {
        Self::irreducible(0)
    }

    /// Character of a matrix representation given by a trace function on
    /// class representatives.
    pub fn of(reps: &[IntMatrix; 5], chi: impl Fn(&IntMatrix) -> i64) -> Self {
        Self::from_ints(std::array::from_fn(|c| chi(&reps[c])))
    }

    pub fn dim(&self) -> Rational64 {
        self.0[0]
    }

    pub fn inner(&self, other: &ClassFunction) -> Rational64 {
        let s: Rational64 = (0..5).map(|c| self.0[c] * other.0[c] * CLASS_SIZES[c]).sum();
        s / 24
    }

    pub fn add(&self, other: &ClassFunction) -> Self {
        ClassFunction(std::array::from_fn(|c| self.0[c] + other.0[c]))
    }

    pub fn mul(&self, other: &ClassFunction) -> Self {
        ClassFunction(std::array::from_fn(|c| self.0[c] * other.0[c]))
    }

    /// The class of `g^2` for `g` in each class.
    const SQUARE_CLASS: [usize; 5] = [0, 0, 0, 3, 2];

    fn at_square(&self) -> Self {
        ClassFunction(std::array::from_fn(|c| self.0[Self::SQUARE_CLASS[c]]))
    }

    /// `(chi(g)^2 + chi(g^2)) / 2`.
    pub fn sym2(&self) -> Self {
        let sq = self.at_square();
        ClassFunction(std::array::from_fn(|c| (self.0[c] * self.0[c] + sq.0[c]) / 2))
    }

    /// `(chi(g)^2 - chi(g^2)) / 2`.
    pub fn wedge2(&self) -> Self {
        let sq = self.at_square();
        ClassFunction(std::array::from_fn(|c| (self.0[c] * self.0[c] - sq.0[c]) / 2))
    }
}

/// Multiplicities of `1, eps, V2, V3, V3'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct S4Decomposition(pub [u32; 5]);

impl S4Decomposition {
    pub fn dim(&self) -> u32 {
        self.0.iter().zip(CHARACTER_TABLE).map(|(m, row)| m * row[0] as u32).sum()
    }

    pub fn character(&self) -> ClassFunction {
        (0..5).fold(ClassFunction::from_ints([0; 5]), |acc, i| {
            acc.add(&ClassFunction(ClassFunction::irreducible(i).0.map(|v| v * self.0[i] as i64)))
        })
    }
}

impl fmt::Display for S4Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..5)
            .rev()
            .filter(|&i| self.0[i] > 0)
            .map(|i| if self.0[i] == 1 { IRREP_NAMES[i].to_string() } else { format!("{}{}", self.0[i], IRREP_NAMES[i]) })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn decompose_s4(chi: &ClassFunction) -> Result<S4Decomposition> {
    let mut out = [0u32; 5];
    for (i, m) in out.iter_mut().enumerate() {
        let v = chi.inner(&ClassFunction::irreducible(i));
        if !v.is_integer() || v < Rational64::zero() {
            return Err(Error::NotARepresentation(format!("multiplicity {v} of {}", IRREP_NAMES[i])));
        }
        *m = v.to_integer() as u32;
    }
    Ok(S4Decomposition(out))
}

/// Character of the plane under [`s4_matrices`].
pub fn standard_character() -> ClassFunction {
    ClassFunction::of(&s4_matrices(), trace)
}

/// Character of the quadrics in three variables, from matrices.
pub fn sym2_character() -> ClassFunction {
    ClassFunction::of(&s4_matrices(), |a| (trace(a) * trace(a) + trace(&mat_mul(a, a))) / 2)
}

/// SL2 weights with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightMultiset(pub BTreeMap<i64, u64>);

impl WeightMultiset {
    /// Weights `n, n-2, ..., -n` of `V(n)`.
    pub fn irreducible(n: u32) -> Self {
        let n = n as i64;
        WeightMultiset((0..=n).map(|k| (n - 2 * k, 1)).collect())
    }

    pub fn dim(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(w, m)| self.0.get(&-w) == Some(m))
    }

    fn flat(&self) -> Vec<i64> {
        self.0.iter().flat_map(|(&w, &m)| std::iter::repeat(w).take(m as usize)).collect()
    }

    /// Weights of the `k`-th symmetric power: sums over multisets of basis
    /// vectors.
    pub fn sym_power(&self, k: u32) -> Self {
        let basis = self.flat();
        let mut out = BTreeMap::new();
        fn rec(basis: &[i64], start: usize, left: u32, acc: i64, out: &mut BTreeMap<i64, u64>) {
            if left == 0 {
                *out.entry(acc).or_insert(0) += 1;
                return;
            }
            for i in start..basis.len() {
                rec(basis, i, left - 1, acc + basis[i], out);
            }
        }
        rec(&basis, 0, k, 0, &mut out);
        WeightMultiset(out)
    }
}

/// Multiplicities of `V(n)`, keyed by `n`, found by repeatedly removing the
/// irreducible of the current top weight.
pub fn peel(weights: &WeightMultiset) -> Result<BTreeMap<u32, u64>> {
    let mut rest: BTreeMap<i64, i64> = weights.0.iter().map(|(&w, &m)| (w, m as i64)).collect();
    let mut out = BTreeMap::new();
    loop {
        rest.retain(|_, m| *m != 0);
        let Some((&top, &mult)) = rest.iter().next_back() else { break };
        if top < 0 || mult < 0 {
            return Err(Error::NotARepresentation(format!("weight {top} left with multiplicity {mult}")));
        }
        for (w, _) in WeightMultiset::irreducible(top as u32).0 {
            *rest.entry(w).or_insert(0) -= mult;
        }
        *out.entry(top as u32).or_insert(0) += mult as u64;
    }
    Ok(out)
}

pub fn sl2_plethysm(sym_power: u32, base: &WeightMultiset) -> Result<BTreeMap<u32, u64>> {
    peel(&base.sym_power(sym_power))
}

pub fn format_sl2(d: &BTreeMap<u32, u64>) -> String {
    let parts: Vec<String> = d
        .iter()
        .rev()
        .map(|(n, m)| if *m == 1 { format!("V({n})") } else { format!("{m}V({n})") })
        .collect();
    parts.join(" + ")
}

/// One line of the representation table.
#[derive(Clone, Debug, Serialize)]
pub struct RepRow {
    pub id: String,
    pub quantity: String,
    pub computed: String,
    pub claimed: Option<String>,
    pub agrees: Option<bool>,
    /// Whether disagreement counts as a failure.
    pub blocking: bool,
}

/// All decompositions with the claimed values where there is one.
pub fn rep_table() -> Result<Vec<RepRow>> {
    let mut rows = Vec::new();
    let mut push = |id: &str, quantity: &str, computed: String, claimed: Option<&str>, blocking: bool| {
        let agrees = claimed.map(|c| c == computed);
        rows.push(RepRow {
            id: id.into(),
            quantity: quantity.into(),
            computed,
            claimed: claimed.map(String::from),
            agrees,
            blocking,
        });
    };

    let v = standard_character();
    let s2 = sym2_character();
    push("s4.plane", "C^3", decompose_s4(&v)?.to_string(), None, false);
    push("s4.sym2", "S^2(C^3)", decompose_s4(&s2)?.to_string(), Some("V3 + V2 + 1"), true);

    let wedge = s2.wedge2();
    let v2 = ClassFunction::irreducible(2);
    let v3 = ClassFunction::irreducible(3);
    let v3_plus_1 = v3.add(&ClassFunction::trivial());
    let claimed_sum = v2.wedge2().add(&v2.mul(&v3_plus_1)).add(&v3_plus_1.wedge2());
    let wedge_d = decompose_s4(&wedge)?;
    push(
        "s4.wedge2_sym2",
        "L^2 S^2(C^3) vs L^2 V2 + V2(V3+1) + L^2(V3+1)",
        wedge_d.to_string(),
        Some(&decompose_s4(&claimed_sum)?.to_string()),
        true,
    );
    push("s4.fibre", "L^2(V3 + 1)", decompose_s4(&v3_plus_1.wedge2())?.to_string(), Some("2V3"), false);

    let v2w = WeightMultiset::irreducible(2);
    push("sl2.sym2", "Sym^2 V(2)", format_sl2(&sl2_plethysm(2, &v2w)?), Some("V(4) + V(0)"), true);
    push("sl2.sym4", "Sym^4 V(2)", format_sl2(&sl2_plethysm(4, &v2w)?), Some("V(8) + V(4) + V(0)"), true);
    Ok(rows)
}

/// Whether the irreducible characters are orthonormal.
pub fn orthonormal() -> bool {
    (0..5).all(|i| {
        (0..5).all(|j| {
            let v = ClassFunction::irreducible(i).inner(&ClassFunction::irreducible(j));
            if i == j {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    })
}
