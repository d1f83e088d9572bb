//! Dense exact linear algebra over [`Scalar`] fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Row-major dense matrix over one exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        let m = ExactMatrix { rows, cols, data };
        m.field()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        ExactMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        let data = rows.iter().flatten().map(|&v| Scalar::from_int(v)).collect();
        ExactMatrix { rows: rows.len(), cols: C, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// The common field of all entries.
    pub fn field(&self) -> Result<Field> {
        self.data.iter().try_fold(Field::Rational, |f, s| f.join(s.field()))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += &(a * other.get(k, j));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("dimension mismatch in addition".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// First entry violating `M = -M^T`, if any.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in i..self.cols {
                if *self.get(i, j) != -self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let data = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        ExactMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut a = self.to_rows();
        let mut prev = Scalar::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(Scalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = &num / &prev;
                }
                a[i][k] = Scalar::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].inv().expect("nonzero pivot");
            for v in a[row].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = a[row].clone();
            for (r, other) in a.iter_mut().enumerate() {
                if r == row || other[col].is_zero() {
                    continue;
                }
                let f = other[col].clone();
                for (v, pv) in other.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &(&f * pv);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let m = ExactMatrix { rows: self.rows, cols: self.cols, data: a.into_iter().flatten().collect() };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel: the nonzero rows of the reduced
    /// echelon form of any spanning set, so equal subspaces give equal bases.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(k, f);
                }
                v
            })
            .collect();
        canonical_basis(vectors)
    }
}

/// Reduced row echelon basis of the span of `vectors` (zero rows dropped).
pub fn canonical_basis(vectors: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = ExactMatrix::from_rows(vectors).expect("vectors of equal length");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Pfaffian of a skew-symmetric matrix of even size, by expansion along the
/// first row. Satisfies `pf(M)^2 = det(M)`.
pub fn pfaffian(m: &ExactMatrix) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::Shape(format!("Pfaffian of a {}x{} matrix", m.rows(), m.cols())));
    }
    if m.rows() % 2 == 1 {
        return Err(Error::Shape(format!("Pfaffian of odd size {}", m.rows())));
    }
    if let Some((row, col)) = m.skew_violation() {
        return Err(Error::NotSkew { row, col });
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    Ok(pfaffian_rec(m, &idx))
}

fn pfaffian_rec(m: &ExactMatrix, idx: &[usize]) -> Scalar {
    if idx.is_empty() {
        return Scalar::one();
    }
    let first = idx[0];
    let mut acc = Scalar::zero();
    for k in 1..idx.len() {
        let a = m.get(first, idx[k]);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&i| i != idx[k]).collect();
        let term = a * &pfaffian_rec(m, &rest);
        if k % 2 == 1 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.to_rows().iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect())
            .unwrap()
    }

    fn cofactor_det(m: &ExactMatrix) -> Scalar {
        let n = m.rows();
        if n == 0 {
            return Scalar::one();
        }
        let rest: Vec<usize> = (1..n).collect();
        let mut acc = Scalar::zero();
        for c in 0..n {
            let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
            let t = m.get(0, c) * &cofactor_det(&m.submatrix(&rest, &cols));
            if c % 2 == 0 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        acc
    }

    fn skew_from(n: usize, vals: &[i64]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, Scalar::from_int(vals[k]));
                m.set(j, i, Scalar::from_int(-vals[k]));
                k += 1;
            }
        }
        m
    }

    #[test]
    fn determinants() {
        assert_eq!(ExactMatrix::identity(6).det().unwrap(), Scalar::one());
        assert_eq!(ints(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).det().unwrap(), Scalar::from_int(6));
        assert!(ints(&[vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 3]]).det().unwrap().is_zero());
        assert!(ints(&[vec![1, 2, 3]]).det().is_err());
        // needs a row swap
        assert_eq!(ints(&[vec![0, 1], vec![1, 0]]).det().unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn kernels() {
        assert!(ExactMatrix::identity(4).kernel_basis().is_empty());
        let k = ExactMatrix::zeros(2, 2).kernel_basis();
        assert_eq!(k, vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]);
        let k = ints(&[vec![1, 1, 0], vec![0, 0, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![Scalar::one(), Scalar::from_int(-1), Scalar::zero()]]);
    }

    #[test]
    fn ranks() {
        assert_eq!(ExactMatrix::identity(5).rank(), 5);
        let u = [1, -2, 3];
        let v = [4, 0, -1, 2];
        let outer: Vec<Vec<i64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        assert_eq!(ints(&outer).rank(), 1);
    }

    #[test]
    fn pfaffian_small_cases() {
        let a = Scalar::from_int(7);
        let m = ExactMatrix::from_rows(vec![vec![Scalar::zero(), a.clone()], vec![-&a, Scalar::zero()]]).unwrap();
        assert_eq!(pfaffian(&m).unwrap(), a);
        let blocks = skew_from(6, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(pfaffian(&blocks).unwrap(), Scalar::one());
    }

    #[test]
    fn pfaffian_errors() {
        assert!(matches!(pfaffian(&ExactMatrix::zeros(3, 3)), Err(Error::Shape(_))));
        let mut m = skew_from(4, &[1, 2, 3, 4, 5, 6]);
        m.set(2, 3, Scalar::from_int(9));
        assert!(matches!(pfaffian(&m), Err(Error::NotSkew { row: 2, col: 3 })));
    }

    #[test]
    fn rank_four_skew_has_zero_pfaffian() {
        // M = u v^T - v u^T + w z^T - z w^T has rank 4
        let u = [1, 2, 0, -1, 3, 1];
        let v = [0, 1, 1, 2, -1, 0];
        let w = [2, 0, 1, 1, 0, -3];
        let z = [1, 1, -1, 0, 2, 2];
        let mut m = ExactMatrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                let val = u[i] * v[j] - v[i] * u[j] + w[i] * z[j] - z[i] * w[j];
                m.set(i, j, Scalar::from_int(val));
            }
        }
        assert_eq!(m.rank(), 4);
        assert!(pfaffian(&m).unwrap().is_zero());
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(n in 1usize..=5, vals in prop::collection::vec(-9i64..=9, 25)) {
            let m = ExactMatrix::new(n, n, vals[..n * n].iter().map(|&v| Scalar::from_int(v)).collect()).unwrap();
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn pfaffian_squares_to_det(half in 1usize..=3, vals in prop::collection::vec(-5i64..=5, 15)) {
            let n = 2 * half;
            let m = skew_from(n, &vals);
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, m.det().unwrap());
        }

        #[test]
        fn pfaffian_congruence(vals in prop::collection::vec(-4i64..=4, 15), a in prop::collection::vec(-3i64..=3, 36)) {
            let m = skew_from(6, &vals);
            let a = ExactMatrix::new(6, 6, a.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap();
            let congr = a.transpose().mul(&m).unwrap().mul(&a).unwrap();
            prop_assert_eq!(pfaffian(&congr).unwrap(), &a.det().unwrap() * &pfaffian(&m).unwrap());
        }

        #[test]
        fn rank_nullity(r in 1usize..=5, c in 1usize..=6, vals in prop::collection::vec(-2i64..=2, 30)) {
            let m = ExactMatrix::new(r, c, vals[..r * c].iter().map(|&v| Scalar::from_int(v)).collect()).unwrap();
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.len(), c);
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
            }
        }
    }
}
