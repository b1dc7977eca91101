//! Small dense exact linear algebra over `Rational`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

fn check_square(m: &Matrix) -> usize {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    n
}

/// Determinant by fraction Gaussian elimination with row pivoting.
pub fn det(m: &Matrix) -> Rational {
    let n = check_square(m);
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Leading principal minors `det(m[..k][..k])` for `k = 1..=n`.
pub fn leading_minors(m: &Matrix) -> Vec<Rational> {
    let n = check_square(m);
    (1..=n)
        .map(|k| {
            let block: Matrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            det(&block)
        })
        .collect()
}

/// Sylvester's test: the `k`-th leading minor has sign `(-1)^k` for all `k`.
pub fn is_negative_definite(m: &Matrix) -> bool {
    if m.is_empty() {
        return false;
    }
    leading_minors(m).iter().enumerate().all(|(i, minor)| {
        if i % 2 == 0 {
            minor.is_negative()
        } else {
            minor.is_positive()
        }
    })
}

/// Solves `m x = rhs` exactly. Fails on a singular matrix.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = check_square(m);
    assert_eq!(rhs.len(), n, "right-hand side length");
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..=n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), int(5));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn definiteness() {
        assert!(is_negative_definite(&m(&[&[-2]])));
        assert!(!is_negative_definite(&m(&[&[-1, -1], &[-1, -1]])));
        assert!(!is_negative_definite(&m(&[&[0]])));
        assert!(is_negative_definite(&m(&[&[-2, 1], &[1, -2]])));
        assert!(!is_negative_definite(&m(&[])));
    }

    #[test]
    fn solve_2x2() {
        let x = solve(&m(&[&[-4, 1], &[1, -2]]), &[int(1), int(0)]).unwrap();
        assert_eq!(x, vec![frac(-2, 7), frac(-1, 7)]);
        assert_eq!(solve(&m(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]), Err(Error::Singular));
    }
}
