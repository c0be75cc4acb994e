//! Small dense exact linear algebra over `Rat`.

use crate::rat::Rat;

pub type Matrix = Vec<Vec<Rat>>;

/// Solves `a x = b` for square nonsingular `a`; `None` when singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                for k in c..=n {
                    if !m[c][k].is_zero() {
                        let t = &f * &m[c][k];
                        m[r][k] -= t;
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

pub fn determinant(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut det = Rat::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::ZERO;
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det = &det * &m[c][c];
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    det
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let mut m: Matrix = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn transpose(a: &[Vec<Rat>]) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).filter(|(p, q)| !p.is_zero() && !q.is_zero()).map(|(p, q)| p * q).sum())
        .collect()
}

/// Inverse of a square nonsingular matrix.
pub fn inverse(a: &[Vec<Rat>]) -> Option<Matrix> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let e: Vec<Rat> = (0..n).map(|j| if i == j { Rat::ONE } else { Rat::ZERO }).collect();
        cols.push(solve(a, &e)?);
    }
    Some(transpose(&cols))
}
