//! Linear algebra on hypercubic spaces `K^{P(n)}`.
//!
//! A tensor product `f = f_1 ⊗ … ⊗ f_n` of 2×2 blocks `((a_i, b_i), (c_i, d_i))`
//! has the closed-form coefficients
//!
//! ```text
//! f_{A,B} = a_{A^c∩B^c} · b_{A^c∩B} · c_{A∩B^c} · d_{A∩B}
//! ```
//!
//! (row `A`, column `B`), where `x_C` is the product of `x_i` over `i ∈ C`.
//! Factor `i` acts on bit `i - 1` of the index, so factor 1 is the fastest
//! varying one in the row-major layout.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypercube::{check_order, full_mask, prod_bits};
use crate::ring::Scalar;
use crate::talg::Payload;

/// The 2×2 matrix `((a, b), (c, d))`.
#[derive(Clone, PartialEq, Debug)]
pub struct TwoByTwo<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> TwoByTwo<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn det(&self) -> S {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }
}

/// A dense `2^n × 2^n` matrix indexed by `P(n) × P(n)`, stored row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct CubeMatrix<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> CubeMatrix<S> {
    pub fn new(dim: usize, entries: Vec<S>) -> Result<Self> {
        check_order(dim)?;
        let expected = 1usize << (2 * dim);
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from an entry function of `(row mask, column mask)`.
    pub fn from_fn(dim: usize, mut entry: impl FnMut(u32, u32) -> S) -> Result<Self> {
        check_order(dim)?;
        let size = 1u32 << dim;
        let entries = (0..size)
            .flat_map(|r| (0..size).map(move |c| (r, c)))
            .map(|(r, c)| entry(r, c))
            .collect();
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Side length `2^dim`.
    pub fn size(&self) -> usize {
        1 << self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.size() + col]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.size())
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..n {
            for r in 0..n {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| k.clone() * e.clone()).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.size();
        let mut entries = vec![S::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let lhs = self.get(r, k);
                if lhs.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let rhs = other.get(k, c);
                    if rhs.is_zero() {
                        continue;
                    }
                    let cell = &mut entries[r * n + c];
                    *cell = std::mem::replace(cell, S::zero()) + lhs.clone() * rhs.clone();
                }
            }
        }
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    /// Matrix-vector product on module-valued vectors.
    pub fn apply<P: Payload<S>>(&self, v: &[P]) -> Result<Vec<P>> {
        let n = self.size();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(v[0].zeroed(), |acc, (m, x)| acc.add(&x.scale(m)))
            })
            .collect())
    }

    /// The symplectic adjoint `J_n Xᵀ J_n⁻¹`.
    pub fn symplectic_adjoint(&self) -> Self {
        // (J Xᵀ J⁻¹)_{R,C} = (-1)^{|R|+|C|} X_{C^c,R^c}
        let full = full_mask(self.dim);
        let out = Self::from_fn(self.dim, |r, c| {
            let x = self.get((c ^ full) as usize, (r ^ full) as usize).clone();
            if (r.count_ones() + c.count_ones()) % 2 == 1 {
                -x
            } else {
                x
            }
        });
        out.expect("dimension already validated")
    }
}

impl<S: fmt::Display> fmt::Display for CubeMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 1usize << self.dim;
        for row in self.entries.chunks(n) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn validate<S>(blocks: &[TwoByTwo<S>]) -> Result<()> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlocks);
    }
    check_order(blocks.len())
}

struct Columns<S> {
    a: Vec<S>,
    b: Vec<S>,
    c: Vec<S>,
    d: Vec<S>,
}

fn columns<S: Scalar>(blocks: &[TwoByTwo<S>]) -> Columns<S> {
    Columns {
        a: blocks.iter().map(|m| m.a.clone()).collect(),
        b: blocks.iter().map(|m| m.b.clone()).collect(),
        c: blocks.iter().map(|m| m.c.clone()).collect(),
        d: blocks.iter().map(|m| m.d.clone()).collect(),
    }
}

impl<S: Scalar> Columns<S> {
    fn product(&self, row: u32, col: u32, full: u32) -> S {
        let (rc, cc) = (row ^ full, col ^ full);
        prod_bits(&self.a, rc & cc)
            * prod_bits(&self.b, rc & col)
            * prod_bits(&self.c, row & cc)
            * prod_bits(&self.d, row & col)
    }

    /// Adjugate-pattern product `a_{R∩C} b_{R^c∩C} c_{R∩C^c} d_{R^c∩C^c}`, signed.
    fn adjugate(&self, row: u32, col: u32, full: u32) -> S {
        let (rc, cc) = (row ^ full, col ^ full);
        let value = prod_bits(&self.a, row & col)
            * prod_bits(&self.b, rc & col)
            * prod_bits(&self.c, row & cc)
            * prod_bits(&self.d, rc & cc);
        if (row ^ col).count_ones() % 2 == 1 {
            -value
        } else {
            value
        }
    }
}

/// Entry-formula view of `⊗ blocks`, without materializing the matrix.
#[derive(Clone, Debug)]
pub struct KronView<'a, S> {
    blocks: &'a [TwoByTwo<S>],
}

impl<'a, S: Scalar> KronView<'a, S> {
    pub fn new(blocks: &'a [TwoByTwo<S>]) -> Result<Self> {
        validate(blocks)?;
        Ok(Self { blocks })
    }

    pub fn dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> S {
        let full = full_mask(self.dim());
        columns(self.blocks).product(row as u32, col as u32, full)
    }

    /// `(⊗ blocks) · v`, one block at a time in `O(n·2^n)`.
    pub fn apply<P: Payload<S>>(&self, v: &[P]) -> Result<Vec<P>> {
        let size = 1usize << self.dim();
        if v.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: v.len(),
            });
        }
        let mut out = v.to_vec();
        for (i, m) in self.blocks.iter().enumerate() {
            let bit = 1usize << i;
            for lo in (0..size).filter(|idx| idx & bit == 0) {
                let hi = lo | bit;
                let (x0, x1) = (out[lo].clone(), out[hi].clone());
                out[lo] = x0.scale(&m.a).add(&x1.scale(&m.b));
                out[hi] = x0.scale(&m.c).add(&x1.scale(&m.d));
            }
        }
        Ok(out)
    }
}

/// The matrix of `blocks[0] ⊗ … ⊗ blocks[n-1]` from the closed-form coefficients.
pub fn kron_product<S: Scalar>(blocks: &[TwoByTwo<S>]) -> Result<CubeMatrix<S>> {
    validate(blocks)?;
    let cols = columns(blocks);
    let full = full_mask(blocks.len());
    CubeMatrix::from_fn(blocks.len(), |r, c| cols.product(r, c, full))
}

/// `det(⊗ f_i) = (Π det f_i)^{2^{n-1}}`; one for an empty list.
pub fn kron_det<S: Scalar>(blocks: &[TwoByTwo<S>]) -> S {
    let Some(n) = blocks.len().checked_sub(1) else {
        return S::one();
    };
    let mut acc = blocks.iter().fold(S::one(), |acc, m| acc * m.det());
    for _ in 0..n {
        acc = acc.clone() * acc;
    }
    acc
}

/// Inverse of `⊗ blocks`:
/// `(f⁻¹)_{A,B} = (-1)^{|AΔB|} / Π det f_i · a_{A∩B} b_{A^c∩B} c_{A∩B^c} d_{A^c∩B^c}`.
pub fn kron_inverse<S: Scalar>(blocks: &[TwoByTwo<S>]) -> Result<CubeMatrix<S>> {
    validate(blocks)?;
    let inv = blocks
        .iter()
        .try_fold(S::one(), |acc, m| Ok::<S, Error>(acc * m.det().try_invert()?))?;
    Ok(symplectic_adjugate(blocks)?.scale(&inv))
}

/// The symplectic adjugate `J_n fᵀ J_n⁻¹` of `f = ⊗ blocks`, from the
/// closed form. Satisfies `f · f^♯ = (Π det f_i)·id` for any blocks.
pub fn symplectic_adjugate<S: Scalar>(blocks: &[TwoByTwo<S>]) -> Result<CubeMatrix<S>> {
    validate(blocks)?;
    let cols = columns(blocks);
    let full = full_mask(blocks.len());
    CubeMatrix::from_fn(blocks.len(), |r, c| cols.adjugate(r, c, full))
}

/// The sign operators `I_n`, `J_n`, `K_n` on `K^{P(n)}`.
#[derive(Clone, PartialEq, Debug)]
pub struct SignOps<S> {
    /// `I_n E_A = (-1)^{|A|} E_A`
    pub i: CubeMatrix<S>,
    /// `J_n E_A = (-1)^{|A^c|} E_{A^c}`
    pub j: CubeMatrix<S>,
    /// `K_n E_A = E_{A^c}`
    pub k: CubeMatrix<S>,
}

pub fn sign_ops<S: Scalar>(n: usize) -> Result<SignOps<S>> {
    let full = full_mask(n);
    let sign = |bits: u32| if bits.count_ones().is_multiple_of(2) { S::one() } else { -S::one() };
    // Column A holds the image of E_A.
    let i = CubeMatrix::from_fn(n, |r, c| if r == c { sign(c) } else { S::zero() })?;
    let j = CubeMatrix::from_fn(n, |r, c| if r == c ^ full { sign(c ^ full) } else { S::zero() })?;
    let k = CubeMatrix::from_fn(n, |r, c| if r == c ^ full { S::one() } else { S::zero() })?;
    Ok(SignOps { i, j, k })
}

/// `J_n⁻¹ = (-1)^n J_n`.
pub fn j_inverse<S: Scalar>(n: usize) -> Result<CubeMatrix<S>> {
    let j = sign_ops::<S>(n)?.j;
    Ok(if n.is_multiple_of(2) { j } else { j.scale(&-S::one()) })
}
