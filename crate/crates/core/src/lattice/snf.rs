use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `left · M · right = diag` with `left`, `right` unimodular and the diagonal
/// entries nonnegative and forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...`, of length `min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diag.len().min(self.diag.first().map_or(0, Vec::len));
        (0..k).map(|i| self.diag[i][i].clone()).collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// row_dst -= q * row_src
fn row_sub(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row.iter()) {
        *d -= q * s;
    }
}

/// col_dst -= q * col_src
fn col_sub(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

/// Smallest nonzero |entry| of the trailing block, first in row-major order.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Deterministic Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut left = identity(rows);
    let mut right = identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                break 'outer;
            };
            a.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut right, t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q);
                row_sub(&mut left, i, t, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q);
                col_sub(&mut right, j, t, &q);
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }

            // Pivot must divide the whole trailing block.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_sub(&mut a, t, i, &minus_one);
                    row_sub(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -&*v;
            }
            for v in left[t].iter_mut() {
                *v = -&*v;
            }
        }
    }

    SmithDecomposition {
        left,
        diag: a,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn check(input: &IntMatrix) -> Vec<BigInt> {
        let snf = smith_normal_form(input);
        assert_eq!(mat_mul(&mat_mul(&snf.left, input), &snf.right), snf.diag);
        assert_eq!(determinant(&snf.left).abs(), BigInt::one());
        assert_eq!(determinant(&snf.right).abs(), BigInt::one());
        snf.invariant_factors()
    }

    #[test]
    fn small_cases() {
        assert_eq!(check(&m(&[&[12]])), vec![BigInt::from(12)]);
        assert_eq!(
            check(&m(&[&[0, -1], &[-1, 0]])),
            vec![BigInt::one(), BigInt::one()]
        );
        assert_eq!(
            check(&m(&[&[0, 0, -1], &[0, 12, 0], &[-1, 0, 0]])),
            vec![BigInt::one(), BigInt::one(), BigInt::from(12)]
        );
        assert_eq!(
            check(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        assert_eq!(
            check(&m(&[&[2, 0], &[0, 3]])),
            vec![BigInt::one(), BigInt::from(6)]
        );
    }

    #[test]
    fn singular_and_rectangular() {
        assert_eq!(
            check(&m(&[&[0, 0], &[0, 0]])),
            vec![BigInt::zero(), BigInt::zero()]
        );
        assert_eq!(
            check(&m(&[&[2, 4], &[1, 2]])),
            vec![BigInt::one(), BigInt::zero()]
        );
        assert_eq!(check(&m(&[&[4, 6, 8]])), vec![BigInt::from(2)]);
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(determinant(&m(&[&[0, -1], &[-1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[2, 15], &[15, -2]])), BigInt::from(-229));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            determinant(&m(&[&[0, 1, 2], &[3, 0, 1], &[1, 1, 0]])),
            BigInt::from(7)
        );
    }
}
