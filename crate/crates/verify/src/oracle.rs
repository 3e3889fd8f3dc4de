//! Reference implementations that share no code with the closed forms they check.
//!
//! Matrices are plain row-major `Vec<Vec<Q>>`; algebra elements are
//! multilinear polynomials keyed by exponent vectors.

use std::collections::BTreeMap;

use num_rational::BigRational as Q;
use num_traits::{One, Zero};
use tangent_core::{TimeLabel, TwoByTwo};

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(size: usize) -> Matrix {
    (0..size)
        .map(|i| (0..size).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Textbook Kronecker product: block `(i, j)` of `a ⊗ b` is `a_ij · b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = (b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![Q::zero(); a.first().map_or(0, Vec::len) * q]; a.len() * p];
    for (i, arow) in a.iter().enumerate() {
        for (j, aij) in arow.iter().enumerate() {
            for (k, brow) in b.iter().enumerate() {
                for (l, bkl) in brow.iter().enumerate() {
                    out[i * p + k][j * q + l] = aij * bkl;
                }
            }
        }
    }
    out
}

pub fn block_matrix(m: &TwoByTwo<Q>) -> Matrix {
    vec![vec![m.a.clone(), m.b.clone()], vec![m.c.clone(), m.d.clone()]]
}

/// `f_n ⊗ (… ⊗ (f_2 ⊗ f_1))`, so the first factor indexes the fastest digit.
pub fn naive_kron(blocks: &[TwoByTwo<Q>]) -> Matrix {
    blocks
        .iter()
        .fold(identity(1), |acc, m| kron(&block_matrix(m), &acc))
}

/// Gauss–Jordan elimination on `[a | id]`; `None` for singular input.
pub fn gauss_inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut work: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        let inv = work[col][col].recip();
        for x in work[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = work[col].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(a: &Matrix) -> Q {
    let n = a.len();
    let mut work = a.clone();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            work.swap(col, pivot);
            det = -det;
        }
        det *= &work[col][col];
        let (done, rest) = work.split_at_mut(col + 1);
        let pivot_row = &done[col];
        for row in rest {
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// A polynomial in `X_1..X_n`, keyed by exponent vectors.
pub type Poly = BTreeMap<Vec<u32>, Q>;

/// The multilinear polynomial `Σ_A c_A X^A`.
pub fn to_poly(coeffs: &[Q], n: usize) -> Poly {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(mask, c)| ((0..n).map(|i| ((mask >> i) & 1) as u32).collect(), c.clone()))
        .collect()
}

fn add_term(p: &mut Poly, exps: Vec<u32>, c: Q) {
    let entry = p.entry(exps).or_insert_with(Q::zero);
    *entry += c;
}

pub fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ex, cx) in x {
        for (ey, cy) in y {
            let exps = ex.iter().zip(ey).map(|(a, b)| a + b).collect();
            add_term(&mut out, exps, cx * cy);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Reduces modulo `X_i² = (t_i + s_i) X_i − t_i s_i` until every exponent is at most one.
pub fn reduce(p: &Poly, label: &TimeLabel<Q>) -> Poly {
    let mut current = p.clone();
    loop {
        let Some((exps, c)) = current
            .iter()
            .find(|(e, _)| e.iter().any(|&k| k >= 2))
            .map(|(e, c)| (e.clone(), c.clone()))
        else {
            current.retain(|_, c| !c.is_zero());
            return current;
        };
        current.remove(&exps);
        let i = exps.iter().position(|&k| k >= 2).expect("found above");
        let (t, s) = (&label.t()[i], &label.s()[i]);
        let mut lower = exps.clone();
        lower[i] -= 1;
        add_term(&mut current, lower.clone(), c.clone() * (t + s));
        lower[i] -= 1;
        add_term(&mut current, lower, -(c * t * s));
    }
}

/// Coefficients of a reduced multilinear polynomial in mask order.
pub fn from_poly(p: &Poly, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); 1 << n];
    for (exps, c) in p {
        assert!(exps.iter().all(|&k| k <= 1), "polynomial is not reduced");
        let mask = exps.iter().enumerate().fold(0usize, |m, (i, &k)| m | ((k as usize) << i));
        out[mask] += c;
    }
    out
}

/// Product in the tangent algebra by polynomial multiplication and reduction.
pub fn algebra_mul(x: &[Q], y: &[Q], label: &TimeLabel<Q>) -> Vec<Q> {
    let n = label.order();
    from_poly(&reduce(&poly_mul(&to_poly(x, n), &to_poly(y, n)), label), n)
}

/// Evaluates the multilinear polynomial at the corner `B`: `X_i = t_i` for `i ∈ B`, else `s_i`.
pub fn corner_value(coeffs: &[Q], label: &TimeLabel<Q>, corner: usize) -> Q {
    let n = label.order();
    let point: Vec<&Q> = (0..n)
        .map(|i| if corner & (1 << i) != 0 { &label.t()[i] } else { &label.s()[i] })
        .collect();
    coeffs.iter().enumerate().fold(Q::zero(), |acc, (mask, c)| {
        let monomial = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .fold(Q::one(), |m, i| m * point[i]);
        acc + c * monomial
    })
}

/// Anchor matrix by evaluating each basis monomial `X^A` at each corner `B`.
pub fn anchor_by_evaluation(label: &TimeLabel<Q>) -> Matrix {
    let n = label.order();
    let size = 1usize << n;
    (0..size)
        .map(|corner| {
            (0..size)
                .map(|mask| {
                    (0..n).filter(|i| mask & (1 << i) != 0).fold(Q::one(), |m, i| {
                        m * if corner & (1 << i) != 0 { &label.t()[i] } else { &label.s()[i] }
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn kronecker_of_small_matrices() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 5], &[6, 7]]);
        assert_eq!(
            kron(&a, &b),
            m(&[&[0, 5, 0, 10], &[6, 7, 12, 14], &[0, 15, 0, 20], &[18, 21, 24, 28]])
        );
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a), q(18));
        let inv = gauss_inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(3));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(gauss_inverse(&singular).is_none());
        assert_eq!(determinant(&singular), q(0));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), q(-1));
    }

    #[test]
    fn reduction_uses_the_quadratic_relation() {
        let label = TimeLabel::new(vec![q(2)], vec![q(3)]).unwrap();
        // X² = 5X − 6.
        assert_eq!(algebra_mul(&[q(0), q(1)], &[q(0), q(1)], &label), vec![q(-6), q(5)]);
    }
}
