//! Exact rational linear algebra for the cone combinatorics.
//!
//! Everything here runs over `BigRational` so ray enumeration, the
//! Gorenstein point, and face ranks are computed without rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

#[cfg(test)]
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(mat: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &mat[r][j];
                    mat[i][j] = &mat[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank of an integer matrix.
pub fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    rref(&mut m).len()
}

/// Outcome of solving a rational linear system.
pub enum SolveOutcome {
    Inconsistent,
    Unique(Vec<Rat>),
    Underdetermined,
}

/// Solve `A x = b` exactly for integer `A` and rational `b`.
pub fn solve_int(a: &[Vec<BigInt>], b: &[Rat]) -> SolveOutcome {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut v: Vec<Rat> = row.iter().map(|x| Rat::from_integer(x.clone())).collect();
            v.push(rhs.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return SolveOutcome::Inconsistent;
    }
    if pivots.len() < cols {
        return SolveOutcome::Underdetermined;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    SolveOutcome::Unique(x)
}

/// One-dimensional kernel of an integer matrix with `n` columns, or `None`
/// if the rank is not exactly `n - 1`.
pub fn kernel_direction(rows: &[Vec<BigInt>]) -> Option<Vec<Rat>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rat::zero(); n];
    v[free] = Rat::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -m[r][free].clone();
    }
    Some(v)
}

/// Scale a rational vector to its primitive integer form (coprime entries,
/// direction preserved).
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}

/// Exact inner product of an integer row with a rational vector.
pub fn dot_int_rat(a: &[BigInt], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += Rat::from_integer(x.clone()) * y;
    }
    acc
}

/// Exact inner product of two integer vectors.
pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// True when every entry is zero.
pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_identity_and_deficient() {
        assert_eq!(rank_int(&ints(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank_int(&ints(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn solve_consistent_overdetermined() {
        // conifold system: four normals, all <lambda_j, beta> = 1
        let a = ints(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]]);
        let b = vec![rat_int(1), rat_int(1), rat_int(1), rat_int(1)];
        match solve_int(&a, &b) {
            SolveOutcome::Unique(x) => {
                assert_eq!(x, vec![rat_int(1), rat_int(0), rat_int(0)]);
            }
            _ => panic!("expected unique solution"),
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = ints(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![rat_int(1), rat_int(1), rat_int(1)];
        assert!(matches!(solve_int(&a, &b), SolveOutcome::Inconsistent));
    }

    #[test]
    fn kernel_of_two_planes_in_three_space() {
        let a = ints(&[&[1, 0, 0], &[1, 1, 0]]);
        let v = kernel_direction(&a).unwrap();
        let p = primitive_integer(&v);
        assert!(p == ints(&[&[0, 0, 1]])[0] || p == ints(&[&[0, 0, -1]])[0]);
    }

    #[test]
    fn primitive_form_clears_denominators() {
        let v = vec![
            Rat::new(BigInt::from(1), BigInt::from(2)),
            Rat::new(BigInt::from(3), BigInt::from(4)),
        ];
        assert_eq!(
            primitive_integer(&v),
            vec![BigInt::from(2), BigInt::from(3)]
        );
    }
}
