//! Exact linear algebra: fraction-free elimination over `Z`, Gauss-Jordan
//! over `Q`, and elimination over `F_p`.

use crate::arith::modular::{inv_mod, mul_mod, sub_mod};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Bareiss fraction-free elimination. Returns the rank; when the matrix is
/// square and of full rank the last pivot is the determinant up to the sign
/// of the row permutation, which is also returned.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (usize, BigInt, bool) {
    let rows = m.len();
    if rows == 0 {
        return (0, BigInt::one(), false);
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negate = false;
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            negate = !negate;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    (rank, prev, negate)
}

pub fn rank_int(m: &[Vec<BigInt>]) -> usize {
    bareiss(m.to_vec()).0
}

pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let (rank, last, negate) = bareiss(m.to_vec());
    if rank < n {
        return BigInt::zero();
    }
    if negate {
        -last
    } else {
        last
    }
}

/// Reduced row echelon form over `Q`; returns the pivot columns.
pub fn rref_rational(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    let mut w = m.to_vec();
    rref_rational(&mut w).len()
}

/// Basis of `{x : M x = 0}` over `Q`.
pub fn nullspace_rational(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut w = m.to_vec();
    let pivots = rref_rational(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -w[r][f].clone();
            }
            x
        })
        .collect()
}

/// Inverse of an integer matrix with determinant `+-1`.
pub fn integer_inverse(m: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m[i][j].clone())
                    } else {
                        BigRational::from_integer(BigInt::from(u8::from(j - n == i)))
                    }
                })
                .collect()
        })
        .collect();
    let pivots = rref_rational(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = &aug[i][n + j];
            if !v.is_integer() {
                return None;
            }
            out[i][j] = v.to_integer();
        }
    }
    Some(out)
}

/// Row echelon over `F_p` in place; returns pivot columns.
pub fn rref_mod_p(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(piv, r);
        let inv = inv_mod(m[r][c], p).expect("nonzero pivot mod prime");
        for v in m[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    let sub = mul_mod(f, m[r][k], p);
                    m[i][k] = sub_mod(m[i][k], sub, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut w: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    rref_mod_p(&mut w, p).len()
}

/// Basis of `{x : M x = 0}` over `F_p`.
pub fn nullspace_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut w: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let pivots = rref_mod_p(&mut w, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; cols];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = sub_mod(0, w[r][f], p);
            }
            x
        })
        .collect()
}

pub fn det_mod_p(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut w: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| w[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            w.swap(piv, c);
            det = sub_mod(0, det, p);
        }
        det = mul_mod(det, w[c][c], p);
        let inv = inv_mod(w[c][c], p).expect("nonzero pivot");
        for i in c + 1..n {
            if w[i][c] != 0 {
                let f = mul_mod(w[i][c], inv, p);
                for k in c..n {
                    let sub = mul_mod(f, w[c][k], p);
                    w[i][k] = sub_mod(w[i][k], sub, p);
                }
            }
        }
    }
    det
}

pub fn to_rational(m: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    // cofactor expansion as an independent oracle
    fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = big(&[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        assert_eq!(det_int(&m), det_cofactor(&m));
        let s = big(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_int(&s), BigInt::from(-1));
        let sing = big(&[&[1, 2], &[2, 4]]);
        assert_eq!(det_int(&sing), BigInt::zero());
        assert_eq!(rank_int(&sing), 1);
    }

    #[test]
    fn nullspaces() {
        let m = to_rational(&big(&[&[1, 2, 3], &[2, 4, 6]]));
        let ns = nullspace_rational(&m, 3);
        assert_eq!(ns.len(), 2);
        let mp = vec![vec![1u64, 2, 3], vec![2, 4, 6]];
        assert_eq!(nullspace_mod_p(&mp, 3, 7).len(), 2);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![3, 6]], 5), 1);
        assert_eq!(det_mod_p(&[vec![1, 2], vec![3, 4]], 7), 5);
    }

    #[test]
    fn unimodular_inverse() {
        let m = big(&[&[3, 2], &[4, 3]]);
        assert_eq!(integer_inverse(&m).unwrap(), big(&[&[3, -2], &[-4, 3]]));
        assert!(integer_inverse(&big(&[&[2, 0], &[0, 1]])).is_none());
    }
}
