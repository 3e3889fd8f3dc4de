//! The hypercube `P(n)`: subsets of `{1, …, n}` as bit masks, and time labels.
//!
//! Element `i` of a subset is stored in bit `i - 1`. With this convention the
//! numeric order of the masks is the lexicographic order used for every
//! matrix and coefficient layout in the crate: `∅, {1}, {2}, {1,2}, {3}, …`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Scalar;

/// Largest supported order `n`; an element of order `n` has `2^n` coefficients.
pub const MAX_ORDER: usize = 20;

/// A subset `A ⊆ {1, …, n}` of a fixed ambient set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subset {
    bits: u32,
    dim: u8,
}

impl Subset {
    pub fn new(bits: u32, dim: usize) -> Result<Self> {
        check_order(dim)?;
        if (bits as u64) >= (1u64 << dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: 32 - bits.leading_zeros() as usize,
            });
        }
        Ok(Self {
            bits,
            dim: dim as u8,
        })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(0, dim)
    }

    pub fn full(dim: usize) -> Result<Self> {
        check_order(dim)?;
        Ok(Self {
            bits: full_mask(dim),
            dim: dim as u8,
        })
    }

    /// Builds a subset from 1-based elements; duplicates are ignored.
    pub fn from_elements(elements: &[usize], dim: usize) -> Result<Self> {
        check_order(dim)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e,
                });
            }
            bits |= 1 << (e - 1);
        }
        Self::new(bits, dim)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Position of the subset in the coefficient layout.
    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.dim() && self.bits & (1 << (element - 1)) != 0
    }

    /// Sorted 1-based elements.
    pub fn elements(self) -> Vec<usize> {
        (1..=self.dim()).filter(|&i| self.contains(i)).collect()
    }

    pub fn union(self, other: Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn intersect(self, other: Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn symdiff(self, other: Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.with_bits(self.bits ^ other.bits))
    }

    pub fn difference(self, other: Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.with_bits(self.bits & !other.bits))
    }

    pub fn complement(self) -> Self {
        self.with_bits(!self.bits & full_mask(self.dim()))
    }

    /// All `2^dim` subsets in ascending mask order.
    pub fn all(dim: usize) -> Result<impl Iterator<Item = Subset>> {
        check_order(dim)?;
        Ok((0..(1u32 << dim)).map(move |bits| Subset {
            bits,
            dim: dim as u8,
        }))
    }

    fn with_bits(self, bits: u32) -> Self {
        Self { bits, dim: self.dim }
    }

    fn same_dim(self, other: Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.elements().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        Err(Error::OrderTooLarge(n))
    } else {
        Ok(())
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

/// `Π_{k ∈ A} vals_k` for a raw mask; the empty product is one.
pub(crate) fn prod_bits<S: Scalar>(vals: &[S], bits: u32) -> S {
    let mut acc = S::one();
    let mut rest = bits;
    while rest != 0 {
        let k = rest.trailing_zeros() as usize;
        acc = acc * vals[k].clone();
        rest &= rest - 1;
    }
    acc
}

/// `Π_{k ∈ A} vals_k`, with `vals` indexed from element 1.
pub fn product_over<S: Scalar>(vals: &[S], subset: Subset) -> Result<S> {
    if vals.len() != subset.dim() {
        return Err(Error::DimensionMismatch {
            expected: subset.dim(),
            found: vals.len(),
        });
    }
    Ok(prod_bits(vals, subset.bits))
}

/// Regularity class of a time label.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Regularity {
    /// Every `t_i - s_i` is a unit.
    Regular,
    /// No `t_i - s_i` is a unit.
    Singular,
    Mixed,
}

fn write_list<S: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[S]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

/// A scaloid element `(t, s) ∈ K^{2n}` labelling the algebra `K^n_{(t,s)}`.
#[derive(Clone, PartialEq, Debug)]
pub struct TimeLabel<S> {
    t: Vec<S>,
    s: Vec<S>,
}

impl<S: Scalar> TimeLabel<S> {
    pub fn new(t: Vec<S>, s: Vec<S>) -> Result<Self> {
        if t.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                found: s.len(),
            });
        }
        check_order(t.len())?;
        Ok(Self { t, s })
    }

    /// The empty label, unit of [`TimeLabel::oplus`].
    pub fn empty() -> Self {
        Self {
            t: Vec::new(),
            s: Vec::new(),
        }
    }

    /// `n` copies of the same first-order pair.
    pub fn uniform(n: usize, t: S, s: S) -> Result<Self> {
        Self::new(vec![t; n], vec![s; n])
    }

    /// `t = s = 0`, the most singular label.
    pub fn singular(n: usize) -> Result<Self> {
        Self::uniform(n, S::zero(), S::zero())
    }

    /// Target calculus: `s = 0`.
    pub fn target(t: Vec<S>) -> Result<Self> {
        let s = vec![S::zero(); t.len()];
        Self::new(t, s)
    }

    /// Source calculus: `t = 0`.
    pub fn source(s: Vec<S>) -> Result<Self> {
        let t = vec![S::zero(); s.len()];
        Self::new(t, s)
    }

    /// Symmetric calculus: `s = -t`.
    pub fn symmetric(t: Vec<S>) -> Result<Self> {
        let s = t.iter().cloned().map(|x| -x).collect();
        Self::new(t, s)
    }

    pub fn order(&self) -> usize {
        self.t.len()
    }

    pub fn t(&self) -> &[S] {
        &self.t
    }

    pub fn s(&self) -> &[S] {
        &self.s
    }

    /// Componentwise `t_i - s_i`.
    pub fn diff(&self) -> Vec<S> {
        self.t
            .iter()
            .zip(&self.s)
            .map(|(t, s)| t.clone() - s.clone())
            .collect()
    }

    pub fn t_prod(&self, subset: Subset) -> Result<S> {
        product_over(&self.t, subset)
    }

    pub fn s_prod(&self, subset: Subset) -> Result<S> {
        product_over(&self.s, subset)
    }

    /// `(t - s)_A`.
    pub fn diff_prod(&self, subset: Subset) -> Result<S> {
        product_over(&self.diff(), subset)
    }

    pub fn classify(&self) -> Regularity {
        let units = self.diff().iter().filter(|d| d.is_unit()).count();
        if units == self.order() {
            Regularity::Regular
        } else if units == 0 {
            Regularity::Singular
        } else {
            Regularity::Mixed
        }
    }

    pub fn is_regular(&self) -> bool {
        self.classify() == Regularity::Regular
    }

    /// Inverse of `(t - s)_n`, available exactly for regular labels.
    pub fn inverse_diff_prod(&self) -> Result<S> {
        self.diff()
            .iter()
            .try_fold(S::one(), |acc, d| Ok(acc * d.try_invert()?))
            .map_err(|_: Error| Error::NotRegular)
    }

    /// Juxtaposition `(t, s) ⊕ (t', s') = (t t'; s s')`.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        let t = self.t.iter().chain(&other.t).cloned().collect();
        let s = self.s.iter().chain(&other.s).cloned().collect();
        Self::new(t, s)
    }

    /// First-order factor `i` (1-based).
    pub fn factor(&self, i: usize) -> Option<(S, S)> {
        if i == 0 || i > self.order() {
            None
        } else {
            Some((self.t[i - 1].clone(), self.s[i - 1].clone()))
        }
    }
}

/// `t=(t_1, …), s=(s_1, …)`
impl<S: fmt::Display> fmt::Display for TimeLabel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("t=")?;
        write_list(f, &self.t)?;
        f.write_str(", s=")?;
        write_list(f, &self.s)
    }
}
