use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{NumericsError, Rational};

/// Dense square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

/// Dense square rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { n, data: rows.concat() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| (0..self.n).map(|j| BigInt::from(self.get(i, j))).collect()).collect()
    }

    /// Leading principal minors `det(M_1), ..., det(M_k)` computed by Bareiss
    /// elimination without pivoting. Stops after the first vanishing minor, so
    /// the result is shorter than `n` exactly when some leading minor is zero.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.n;
        let mut a = self.big_rows();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = a[k][k].clone();
            minors.push(pivot.clone());
            if pivot.is_zero() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&pivot * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = pivot;
        }
        minors
    }

    /// Determinant via fraction-free Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.big_rows();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            let Some(r) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if r != k {
                a.swap(r, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        if negate {
            -prev
        } else {
            prev
        }
    }

    /// Exact inverse by fraction-free Gauss-Jordan elimination on `[M | I]`.
    pub fn inverse(&self) -> Result<RatMatrix, NumericsError> {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = self
            .big_rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let r = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(NumericsError::Singular)?;
            a.swap(r, k);
            let pivot_row = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..2 * n {
                    row[j] = (&pivot_row[k] * &row[j] - &factor * &pivot_row[j]) / &prev;
                }
            }
            prev = pivot_row[k].clone();
        }
        let data = (0..n)
            .flat_map(|i| {
                let diag = a[i][i].clone();
                let row = a[i].clone();
                (0..n).map(move |j| Rational::new(row[n + j].clone(), diag.clone()))
            })
            .collect();
        Ok(RatMatrix { n, data })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(BigInt::from(self.get(i, j))) * &v[j]
                })
            })
            .collect()
    }
}

impl RatMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n * n)
            .map(|k| if k / n == k % n { Rational::one() } else { Rational::zero() })
            .collect();
        RatMatrix { n, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let data = m.data.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        RatMatrix { n: m.n, data }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RatMatrix { n: self.n, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push((0..n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j)));
            }
        }
        RatMatrix { n, data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }
}

fn write_grid<T: fmt::Display>(f: &mut fmt::Formatter<'_>, n: usize, cell: impl Fn(usize, usize) -> T) -> fmt::Result {
    let cells: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| cell(i, j).to_string()).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(0);
    for row in &cells {
        let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        writeln!(f, "[ {} ]", padded.join("  "))?;
    }
    Ok(())
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.n, |i, j| self.get(i, j))
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.n, |i, j| self.get(i, j).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor_det(rows: &[Vec<i64>]) -> BigInt {
        // Laplace expansion; independent of the elimination code
        let n = rows.len();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = BigInt::from(rows[0][j]) * cofactor_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn determinant_of_family_chain() {
        for k in 1..10 {
            let m = IntMatrix::from_rows(&[vec![-3, 1, 0], vec![1, -2, 1], vec![0, 1, -k]]);
            assert_eq!(m.determinant(), BigInt::from(-(5 * k - 3)));
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = IntMatrix::from_rows(&[vec![-2, 2], vec![2, -2]]);
        assert_eq!(m.inverse(), Err(NumericsError::Singular));
        assert_eq!(m.determinant(), BigInt::zero());
    }

    #[test]
    fn leading_minors_stop_at_zero() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.leading_minors(), vec![BigInt::zero()]);
    }

    proptest! {
        #[test]
        fn bareiss_matches_laplace(entries in prop::collection::vec(-6i64..6, 16), n in 1usize..=4) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            let m = IntMatrix::from_rows(&rows);
            prop_assert_eq!(m.determinant(), cofactor_det(&rows));
            let minors = m.leading_minors();
            for (k, minor) in minors.iter().enumerate() {
                let sub: Vec<Vec<i64>> = rows[..=k].iter().map(|r| r[..=k].to_vec()).collect();
                prop_assert_eq!(minor, &cofactor_det(&sub));
            }
        }

        #[test]
        fn inverse_is_exact(entries in prop::collection::vec(-6i64..6, 16), n in 1usize..=4) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            let m = IntMatrix::from_rows(&rows);
            match m.inverse() {
                Ok(inv) => prop_assert_eq!(RatMatrix::from_int(&m).mul(&inv), RatMatrix::identity(n)),
                Err(_) => prop_assert!(cofactor_det(&rows).is_zero()),
            }
        }
    }
}
