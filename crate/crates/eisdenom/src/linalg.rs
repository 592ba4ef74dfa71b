//! Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::arith::Rational;

/// Reduced row echelon solve of `a x = b`. Returns one solution (free
/// variables set to zero) or `None` if the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let ncol = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncol {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rational::one() / &m[rank][col];
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[ncol].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncol];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][ncol].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};

    #[test]
    fn square_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(x, vec![frac(1, 5), frac(3, 5)]);
    }

    #[test]
    fn underdetermined_and_inconsistent() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(solve(&a, &[int(1), int(2)]).unwrap(), vec![int(1), int(0)]);
        assert!(solve(&a, &[int(1), int(3)]).is_none());
    }
}
