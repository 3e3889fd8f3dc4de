//! Tangent algebras `K^n_{(t,s)} = K[X_1..X_n] / ((X_i - t_i)(X_i - s_i))`.
//!
//! An element is stored by its `2^n` coefficients in the basis `e_A = [X^A]`,
//! laid out in hypercube mask order. Coefficients are either scalars (the
//! algebra itself) or fixed-width vectors (the scalar-extended module
//! `V ⊗ K^n_{(t,s)}`). Only scalar payloads form a ring, so the
//! multiplicative operations are only implemented for `Tangent<S, S>`.

use std::fmt::{self, Debug};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::Algebra;
use crate::hypercube::{Subset, TimeLabel};
use crate::ring::Scalar;

/// Coefficient type of a tangent element: a module over the scalar ring.
pub trait Payload<S: Scalar>: Clone + PartialEq + Debug + Send + Sync {
    /// Number of scalar components; 1 for scalars.
    fn width(&self) -> usize;
    /// The zero of the same width.
    fn zeroed(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, k: &S) -> Self;
    fn approx_eq(&self, other: &Self) -> bool;
}

impl<S: Scalar> Payload<S> for S {
    fn width(&self) -> usize {
        1
    }
    fn zeroed(&self) -> Self {
        S::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, k: &S) -> Self {
        k.clone() * self.clone()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        Scalar::approx_eq(self, other)
    }
}

/// A point of `K^d`, used as a vector payload.
#[derive(Clone, PartialEq, Debug)]
pub struct Vector<S>(pub Vec<S>);

impl<S: Scalar> Payload<S> for Vector<S> {
    fn width(&self) -> usize {
        self.0.len()
    }
    fn zeroed(&self) -> Self {
        Vector(vec![S::zero(); self.0.len()])
    }
    fn add(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
    fn neg(&self) -> Self {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }
    fn scale(&self, k: &S) -> Self {
        Vector(self.0.iter().map(|a| k.clone() * a.clone()).collect())
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.approx_eq(b))
    }
}

/// An element of `K^n_{(t,s)}` (scalar payload) or `V^n_{(t,s)}` (vector payload).
#[derive(Clone, PartialEq, Debug)]
pub struct Tangent<S: Scalar, P: Payload<S> = S> {
    label: Arc<TimeLabel<S>>,
    coeffs: Vec<P>,
}

fn same_label<S: Scalar>(a: &Arc<TimeLabel<S>>, b: &Arc<TimeLabel<S>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<S: Scalar, P: Payload<S>> Tangent<S, P> {
    /// Builds an element from its coefficients in mask order.
    pub fn new(label: impl Into<Arc<TimeLabel<S>>>, coeffs: Vec<P>) -> Result<Self> {
        let label = label.into();
        let expected = 1usize << label.order();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        if let Some(first) = coeffs.first() {
            let w = first.width();
            if let Some(bad) = coeffs.iter().find(|c| c.width() != w) {
                return Err(Error::DimensionMismatch {
                    expected: w,
                    found: bad.width(),
                });
            }
        }
        Ok(Self { label, coeffs })
    }

    /// The imbedding `x ↦ x·e_∅`.
    pub fn from_base(label: impl Into<Arc<TimeLabel<S>>>, x: P) -> Self {
        let label = label.into();
        let len = 1usize << label.order();
        let mut coeffs = vec![x.zeroed(); len];
        coeffs[0] = x;
        Self { label, coeffs }
    }

    pub fn label(&self) -> &TimeLabel<S> {
        &self.label
    }

    pub fn shared_label(&self) -> &Arc<TimeLabel<S>> {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.label.order()
    }

    pub fn width(&self) -> usize {
        self.coeffs[0].width()
    }

    pub fn coeff(&self, subset: Subset) -> &P {
        &self.coeffs[subset.index()]
    }

    pub fn coeffs(&self) -> &[P] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<P> {
        self.coeffs
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if !same_label(&self.label, &other.label) {
            return Err(Error::LabelMismatch);
        }
        if self.width() != other.width() {
            return Err(Error::DimensionMismatch {
                expected: self.width(),
                found: other.width(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&P, &P) -> P) -> Result<Self> {
        self.compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Ok(Self {
            label: self.label.clone(),
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, P::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, P::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(P::neg)
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.scale(k))
    }

    fn map(&self, f: impl Fn(&P) -> P) -> Self {
        Self {
            label: self.label.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Coefficientwise comparison with [`Payload::approx_eq`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        same_label(&self.label, &other.label)
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b))
    }

    /// Source `α(v) = v_0 + s·v_1` (order 1 only).
    pub fn alpha(&self) -> Result<P> {
        let (_, s) = self.first_order()?;
        Ok(self.coeffs[0].add(&self.coeffs[1].scale(&s)))
    }

    /// Target `β(v) = v_0 + t·v_1` (order 1 only).
    pub fn beta(&self) -> Result<P> {
        let (t, _) = self.first_order()?;
        Ok(self.coeffs[0].add(&self.coeffs[1].scale(&t)))
    }

    fn first_order(&self) -> Result<(S, S)> {
        match self.label.factor(1) {
            Some(ts) if self.order() == 1 => Ok(ts),
            _ => Err(Error::RequiresOrderOne(self.order())),
        }
    }

    /// The involution `κ`, applied to every tensor factor: on the factor `i`
    /// it sends `e_i ↦ (s_i + t_i) − e_i`.
    pub fn kappa(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for i in 0..self.order() {
            let bit = 1usize << i;
            let sum = self.label.t()[i].clone() + self.label.s()[i].clone();
            for lo in (0..coeffs.len()).filter(|idx| idx & bit == 0) {
                let hi = lo | bit;
                coeffs[lo] = coeffs[lo].add(&coeffs[hi].scale(&sum));
                coeffs[hi] = coeffs[hi].neg();
            }
        }
        Self {
            label: self.label.clone(),
            coeffs,
        }
    }
}

impl<S: Scalar> Tangent<S, S> {
    pub fn zero(label: impl Into<Arc<TimeLabel<S>>>) -> Self {
        Self::from_base(label, S::zero())
    }

    pub fn one(label: impl Into<Arc<TimeLabel<S>>>) -> Self {
        Self::from_base(label, S::one())
    }

    /// The basis element `e_A`.
    pub fn basis(label: impl Into<Arc<TimeLabel<S>>>, subset: Subset) -> Result<Self> {
        let label = label.into();
        if subset.dim() != label.order() {
            return Err(Error::DimensionMismatch {
                expected: label.order(),
                found: subset.dim(),
            });
        }
        let mut out = Self::zero(label);
        out.coeffs[subset.index()] = S::one();
        Ok(out)
    }

    /// Product in `K^n_{(t,s)}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self {
            label: self.label.clone(),
            coeffs: mul_rec(&self.coeffs, &other.coeffs, self.label.t(), self.label.s()),
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.label.clone());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result.coeffs = mul_rec(&result.coeffs, &base.coeffs, self.label.t(), self.label.s());
            }
            e >>= 1;
            if e > 0 {
                base.coeffs = mul_rec(&base.coeffs, &base.coeffs, self.label.t(), self.label.s());
            }
        }
        result
    }

    /// Multiplicative inverse.
    ///
    /// `K^n` is treated as the rank-two extension `K^{n-1}[e_n]`; an element
    /// is a unit iff `α(v)·β(v)` is a unit of `K^{n-1}`, and then
    /// `v^{-1} = κ(v) / (α(v)β(v))`. The result is checked by multiplying back.
    pub fn try_invert(&self) -> Result<Self> {
        let inverse = invert_rec(&self.coeffs, self.label.t(), self.label.s())?;
        let check = mul_rec(&self.coeffs, &inverse, self.label.t(), self.label.s());
        let unit = Self::one(self.label.clone());
        if check.iter().zip(&unit.coeffs).all(|(a, b)| a.approx_eq(b)) {
            Ok(Self {
                label: self.label.clone(),
                coeffs: inverse,
            })
        } else {
            Err(Error::NotInvertible)
        }
    }

    /// `x ⊗ y` in `K^{n+m}` at the joined label: `(x⊗y)_{A ∪ (B+n)} = x_A y_B`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let label = self.label.oplus(&other.label)?;
        let n = self.order();
        let mut coeffs = vec![S::zero(); 1 << label.order()];
        for (b, yb) in other.coeffs.iter().enumerate() {
            for (a, xa) in self.coeffs.iter().enumerate() {
                coeffs[a | (b << n)] = xa.clone() * yb.clone();
            }
        }
        Ok(Self {
            label: Arc::new(label),
            coeffs,
        })
    }

    /// Permutes tensor factors: factor `i` moves to position `perm[i-1]`
    /// (1-based images). Coefficients at `A` move to `perm(A)`.
    pub fn flip(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        if perm.len() != n {
            return Err(Error::InvalidPermutation(format!(
                "expected {n} images, found {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 1..={n}")));
            }
            seen[p - 1] = true;
        }
        let mut t = self.label.t().to_vec();
        let mut s = self.label.s().to_vec();
        for (i, &p) in perm.iter().enumerate() {
            t[p - 1] = self.label.t()[i].clone();
            s[p - 1] = self.label.s()[i].clone();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len()];
        for (a, c) in self.coeffs.iter().enumerate() {
            let image = perm
                .iter()
                .enumerate()
                .filter(|(i, _)| a & (1 << i) != 0)
                .fold(0usize, |acc, (_, &p)| acc | (1 << (p - 1)));
            coeffs[image] = c.clone();
        }
        Ok(Self {
            label: Arc::new(TimeLabel::new(t, s)?),
            coeffs,
        })
    }

    /// Groupoid product `u ∗ w = u − α(u)·1 + w`, defined when `α(u) = β(w)`.
    pub fn groupoid_compose(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let source = self.alpha()?;
        if !source.approx_eq(&other.beta()?) {
            return Err(Error::NotComposable);
        }
        self.sub(&Self::from_base(self.label.clone(), source))?.add(other)
    }

    /// Groupoid unit `λ·1` at an order-one label.
    pub fn groupoid_unit(lambda: S, label: impl Into<Arc<TimeLabel<S>>>) -> Result<Self> {
        let label = label.into();
        if label.order() != 1 {
            return Err(Error::RequiresOrderOne(label.order()));
        }
        Ok(Self::from_base(label, lambda))
    }
}

impl<S: fmt::Display> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// `c_∅ + c_{1}·e{1} + … [t=(…), s=(…)]`, listing every coefficient.
impl<S: Scalar, P: Payload<S> + fmt::Display> fmt::Display for Tangent<S, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                let subset = Subset::new(i as u32, n).map_err(|_| fmt::Error)?;
                write!(f, " + {c}·e{subset}")?;
            }
        }
        write!(f, " [{}]", self.label)
    }
}

/// Product of coefficient vectors, splitting off the last tensor factor:
/// `(v0, v1)·(w0, w1) = (v0w0 − st·v1w1, v0w1 + v1w0 + (s+t)·v1w1)`.
pub(crate) fn mul_rec<S: Scalar>(x: &[S], y: &[S], t: &[S], s: &[S]) -> Vec<S> {
    if x.len() == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let half = x.len() / 2;
    let k = t.len() - 1;
    let (x0, x1) = x.split_at(half);
    let (y0, y1) = y.split_at(half);
    let (tr, sr) = (&t[..k], &s[..k]);
    let p00 = mul_rec(x0, y0, tr, sr);
    let p01 = mul_rec(x0, y1, tr, sr);
    let p10 = mul_rec(x1, y0, tr, sr);
    let p11 = mul_rec(x1, y1, tr, sr);
    let st = s[k].clone() * t[k].clone();
    let sum = s[k].clone() + t[k].clone();
    let mut out = Vec::with_capacity(x.len());
    for (a, d) in p00.iter().zip(&p11) {
        out.push(a.clone() - st.clone() * d.clone());
    }
    for ((b, c), d) in p01.into_iter().zip(p10).zip(&p11) {
        out.push(b + c + sum.clone() * d.clone());
    }
    out
}

fn invert_rec<S: Scalar>(x: &[S], t: &[S], s: &[S]) -> Result<Vec<S>> {
    if x.len() == 1 {
        return Ok(vec![x[0].try_invert()?]);
    }
    let half = x.len() / 2;
    let k = t.len() - 1;
    let (x0, x1) = x.split_at(half);
    let (tr, sr) = (&t[..k], &s[..k]);
    let along = |c: &S| -> Vec<S> {
        x0.iter().zip(x1).map(|(a, b)| a.clone() + c.clone() * b.clone()).collect()
    };
    let source = along(&s[k]);
    let target = along(&t[k]);
    let norm_inv = invert_rec(&mul_rec(&source, &target, tr, sr), tr, sr)?;
    let conj_lo = along(&(s[k].clone() + t[k].clone()));
    let conj_hi: Vec<S> = x1.iter().map(|b| -b.clone()).collect();
    let mut out = mul_rec(&norm_inv, &conj_lo, tr, sr);
    out.extend(mul_rec(&norm_inv, &conj_hi, tr, sr));
    Ok(out)
}

/// `K^n_{(t,s)}` at a fixed label, as an evaluation target for expressions.
#[derive(Clone, Debug)]
pub struct TangentAlgebra<S: Scalar> {
    label: Arc<TimeLabel<S>>,
}

impl<S: Scalar> TangentAlgebra<S> {
    pub fn new(label: impl Into<Arc<TimeLabel<S>>>) -> Self {
        Self {
            label: label.into(),
        }
    }

    pub fn label(&self) -> &Arc<TimeLabel<S>> {
        &self.label
    }
}

impl<S: Scalar> Algebra for TangentAlgebra<S> {
    type Elem = Tangent<S>;

    fn constant(&self, q: &BigRational) -> Result<Tangent<S>> {
        Ok(Tangent::from_base(self.label.clone(), S::from_rational(q)?))
    }

    fn integer(&self, n: &BigInt) -> Tangent<S> {
        Tangent::from_base(self.label.clone(), S::from_integer(n))
    }

    fn add(&self, a: &Tangent<S>, b: &Tangent<S>) -> Result<Tangent<S>> {
        a.add(b)
    }

    fn sub(&self, a: &Tangent<S>, b: &Tangent<S>) -> Result<Tangent<S>> {
        a.sub(b)
    }

    fn mul(&self, a: &Tangent<S>, b: &Tangent<S>) -> Result<Tangent<S>> {
        a.mul(b)
    }

    fn neg(&self, a: &Tangent<S>) -> Tangent<S> {
        a.neg()
    }

    fn invert(&self, a: &Tangent<S>) -> Result<Tangent<S>> {
        a.try_invert()
    }

    fn pow(&self, a: &Tangent<S>, exp: u32) -> Result<Tangent<S>> {
        Ok(a.pow(exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn qq(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn first(t: i64, s: i64) -> Arc<TimeLabel<Q>> {
        Arc::new(TimeLabel::new(vec![q(t)], vec![q(s)]).unwrap())
    }

    fn el(label: &Arc<TimeLabel<Q>>, c: &[Q]) -> Tangent<Q> {
        Tangent::new(label.clone(), c.to_vec()).unwrap()
    }

    #[test]
    fn imbedding() {
        let l = first(2, 1);
        assert_eq!(Tangent::from_base(l.clone(), q(3)).coeffs(), &[q(3), q(0)]);
        assert_eq!(Tangent::from_base(l.clone(), q(0)), Tangent::zero(l.clone()));
        let ab = Tangent::from_base(l.clone(), q(4)).mul(&Tangent::from_base(l.clone(), q(5))).unwrap();
        assert_eq!(ab, Tangent::from_base(l, q(20)));
    }

    #[test]
    fn module_operations() {
        let l = first(1, 0);
        let x = el(&l, &[q(1), q(2)]);
        let y = el(&l, &[q(3), q(4)]);
        assert_eq!(x.add(&y).unwrap().coeffs(), &[q(4), q(6)]);
        assert_eq!(x.scale(&q(0)), Tangent::zero(l.clone()));
        assert_eq!(x.add(&x.neg()).unwrap(), Tangent::zero(l.clone()));
        let other = el(&first(2, 0), &[q(1), q(2)]);
        assert_eq!(x.add(&other), Err(Error::LabelMismatch));
    }

    #[test]
    fn first_order_product() {
        let l = first(2, 1);
        let x = el(&l, &[q(1), q(1)]);
        assert_eq!(x.mul(&x).unwrap().coeffs(), &[q(-1), q(5)]);

        let d = first(0, 0);
        let (a, b, c, e) = (q(2), q(3), q(5), q(7));
        let p = el(&d, &[a.clone(), b.clone()]).mul(&el(&d, &[c.clone(), e.clone()])).unwrap();
        assert_eq!(p.coeffs(), &[a.clone() * c.clone(), a * e + b * c]);
    }

    #[test]
    fn nilpotent_second_order() {
        let l = Arc::new(TimeLabel::<Q>::singular(2).unwrap());
        let e1 = Tangent::basis(l.clone(), Subset::from_elements(&[1], 2).unwrap()).unwrap();
        let e2 = Tangent::basis(l.clone(), Subset::from_elements(&[2], 2).unwrap()).unwrap();
        let e12 = Tangent::basis(l.clone(), Subset::full(2).unwrap()).unwrap();
        assert_eq!(e1.mul(&e2).unwrap(), e12);
        assert_eq!(e12.mul(&e12).unwrap(), Tangent::zero(l));
    }

    #[test]
    fn basis_relation() {
        // e_i² = (t_i + s_i) e_i − t_i s_i
        let l = Arc::new(TimeLabel::new(vec![q(3), q(-2)], vec![q(5), q(7)]).unwrap());
        for i in 1..=2 {
            let (t, s) = l.factor(i).unwrap();
            let e = Tangent::basis(l.clone(), Subset::from_elements(&[i], 2).unwrap()).unwrap();
            let rhs = e.scale(&(t.clone() + s.clone())).sub(&Tangent::from_base(l.clone(), t * s)).unwrap();
            assert_eq!(e.mul(&e).unwrap(), rhs);
        }
    }

    #[test]
    fn tensor_and_oplus() {
        let a = first(2, 3);
        let b = first(5, 7);
        let x = Tangent::from_base(a.clone(), q(2));
        let y = Tangent::from_base(b.clone(), q(9));
        let xy = x.tensor(&y).unwrap();
        assert_eq!(xy.label().t(), &[q(2), q(5)]);
        assert_eq!(xy.label().s(), &[q(3), q(7)]);
        assert_eq!(xy, Tangent::from_base(Arc::new(a.oplus(&b).unwrap()), q(18)));

        let e = el(&a, &[q(0), q(1)]).tensor(&el(&b, &[q(0), q(1)])).unwrap();
        let joined = Arc::new(a.oplus(&b).unwrap());
        assert_eq!(e, Tangent::basis(joined, Subset::full(2).unwrap()).unwrap());
    }

    #[test]
    fn flips() {
        let l = Arc::new(TimeLabel::new(vec![q(1), q(2)], vec![q(3), q(4)]).unwrap());
        let x = el(&l, &[q(10), q(11), q(12), q(13)]);
        assert_eq!(x.flip(&[1, 2]).unwrap(), x);
        let y = x.flip(&[2, 1]).unwrap();
        assert_eq!(y.coeffs(), &[q(10), q(12), q(11), q(13)]);
        assert_eq!(y.label().t(), &[q(2), q(1)]);
        assert_eq!(y.label().s(), &[q(4), q(3)]);
        assert_eq!(y.flip(&[2, 1]).unwrap(), x);
        assert!(matches!(x.flip(&[1, 1]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(x.flip(&[1]), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn flip_is_an_algebra_isomorphism() {
        let l = Arc::new(TimeLabel::new(vec![q(1), q(2), q(-1)], vec![q(3), q(0), q(5)]).unwrap());
        let x = el(&l, &(1..=8).map(q).collect::<Vec<_>>());
        let y = el(&l, &(1..=8).map(|i| q(i * i - 7)).collect::<Vec<_>>());
        let perm = [3, 1, 2];
        let lhs = x.mul(&y).unwrap().flip(&perm).unwrap();
        let rhs = x.flip(&perm).unwrap().mul(&y.flip(&perm).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn source_and_target() {
        let l = first(1, 0);
        let x = el(&l, &[q(4), q(9)]);
        assert_eq!(x.alpha().unwrap(), q(4));
        assert_eq!(x.beta().unwrap(), q(13));
        assert_eq!(Tangent::from_base(l, q(6)).alpha().unwrap(), q(6));
        let two = Arc::new(TimeLabel::<Q>::singular(2).unwrap());
        assert_eq!(Tangent::zero(two).alpha(), Err(Error::RequiresOrderOne(2)));
    }

    #[test]
    fn kappa_examples() {
        let sym = Arc::new(TimeLabel::symmetric(vec![q(3)]).unwrap());
        let v = el(&sym, &[q(2), q(5)]);
        assert_eq!(v.kappa().coeffs(), &[q(2), q(-5)]);
        let l = first(2, 7);
        assert_eq!(Tangent::from_base(l.clone(), q(4)).kappa(), Tangent::from_base(l.clone(), q(4)));
        let w = el(&l, &[q(1), q(3)]);
        let ab = w.alpha().unwrap() * w.beta().unwrap();
        assert_eq!(w.mul(&w.kappa()).unwrap(), Tangent::from_base(l, ab));
    }

    #[test]
    fn inversion() {
        let l = first(1, 0);
        let x = el(&l, &[q(1), q(1)]);
        let inv = x.try_invert().unwrap();
        assert_eq!(inv.coeffs(), &[q(1), qq(-1, 2)]);
        assert_eq!(x.mul(&inv).unwrap(), Tangent::one(l.clone()));
        assert_eq!(Tangent::from_base(l.clone(), q(4)).try_invert().unwrap(), Tangent::from_base(l.clone(), qq(1, 4)));
        assert_eq!(el(&l, &[q(0), q(1)]).try_invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn higher_order_inversion() {
        let l = Arc::new(TimeLabel::new(vec![q(1), q(2), q(0)], vec![q(0), q(-1), q(0)]).unwrap());
        let x = el(&l, &[q(3), q(1), q(-2), q(5), q(1), q(0), q(2), q(1)]);
        let inv = x.try_invert().unwrap();
        assert_eq!(x.mul(&inv).unwrap(), Tangent::one(l.clone()));
        // nilpotent direction at a singular factor: e_3 is not invertible
        let e3 = Tangent::basis(l.clone(), Subset::from_elements(&[3], 3).unwrap()).unwrap();
        assert_eq!(e3.try_invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn float_inversion_is_checked() {
        use crate::ring::Real;
        let l = Arc::new(TimeLabel::new(vec![Real::new(1.0), Real::new(0.5)], vec![Real::new(0.0), Real::new(-0.5)]).unwrap());
        let x = Tangent::new(l.clone(), [2.0, 0.5, 0.25, 0.125].map(Real::new).to_vec()).unwrap();
        let inv = x.try_invert().unwrap();
        assert!(x.mul(&inv).unwrap().approx_eq(&Tangent::one(l)));
    }

    #[test]
    fn groupoid() {
        let l = first(1, 0);
        let u = el(&l, &[q(2), q(1)]);
        let w = el(&l, &[q(1), q(1)]);
        assert_eq!(u.groupoid_compose(&w).unwrap().coeffs(), &[q(1), q(2)]);
        let unit = Tangent::groupoid_unit(u.alpha().unwrap(), l.clone()).unwrap();
        assert_eq!(u.groupoid_compose(&unit).unwrap(), u);
        assert_eq!(u.kappa().groupoid_compose(&u).unwrap(), Tangent::from_base(l.clone(), u.alpha().unwrap()));
        assert_eq!(w.groupoid_compose(&w), Err(Error::NotComposable));
        let two = Arc::new(TimeLabel::<Q>::singular(2).unwrap());
        assert_eq!(Tangent::groupoid_unit(q(1), two).unwrap_err(), Error::RequiresOrderOne(2));
    }

    #[test]
    fn vector_payloads() {
        let l = first(3, 1);
        let v = Tangent::new(l.clone(), vec![Vector(vec![q(1), q(2)]), Vector(vec![q(3), q(4)])]).unwrap();
        assert_eq!(v.alpha().unwrap(), Vector(vec![q(4), q(6)]));
        assert_eq!(v.beta().unwrap(), Vector(vec![q(10), q(14)]));
        let bad = Tangent::new(l.clone(), vec![Vector(vec![q(1)]), Vector(vec![q(3), q(4)])]);
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
        let narrow = Tangent::from_base(l, Vector(vec![q(1)]));
        assert!(matches!(v.add(&narrow), Err(Error::DimensionMismatch { .. })));
    }

    fn element(n: usize) -> impl Strategy<Value = Vec<Q>> {
        proptest::collection::vec((-6i64..6, 1i64..4).prop_map(|(a, b)| qq(a, b)), 1 << n)
    }

    fn label(n: usize) -> impl Strategy<Value = Arc<TimeLabel<Q>>> {
        (proptest::collection::vec(-3i64..4, n), proptest::collection::vec(-3i64..4, n))
            .prop_map(|(t, s)| Arc::new(TimeLabel::new(t.into_iter().map(q).collect(), s.into_iter().map(q).collect()).unwrap()))
    }

    fn triple() -> impl Strategy<Value = (Arc<TimeLabel<Q>>, Vec<Q>, Vec<Q>, Vec<Q>)> {
        (0usize..=4).prop_flat_map(|n| (label(n), element(n), element(n), element(n)))
    }

    proptest! {
        #[test]
        fn ring_laws((l, a, b, c) in triple()) {
            let (x, y, z) = (el(&l, &a), el(&l, &b), el(&l, &c));
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&Tangent::one(l.clone())).unwrap(), x.clone());
        }

        #[test]
        fn kappa_properties((l, a, b, _c) in triple()) {
            let (x, y) = (el(&l, &a), el(&l, &b));
            prop_assert_eq!(x.kappa().kappa(), x.clone());
            prop_assert_eq!(x.mul(&y).unwrap().kappa(), x.kappa().mul(&y.kappa()).unwrap());
            if l.order() == 1 {
                prop_assert_eq!(x.kappa().alpha().unwrap(), x.beta().unwrap());
            }
        }

        #[test]
        fn inverse_back_multiplies((l, a, _b, _c) in triple()) {
            let x = el(&l, &a);
            if let Ok(inv) = x.try_invert() {
                prop_assert_eq!(x.mul(&inv).unwrap(), Tangent::one(l.clone()));
            }
            if l.order() == 1 {
                let norm = x.alpha().unwrap() * x.beta().unwrap();
                prop_assert_eq!(x.try_invert().is_ok(), !norm.is_zero());
            }
        }

        #[test]
        fn tensor_is_associative((l1, a) in (0usize..=2).prop_flat_map(|n| (label(n), element(n))),
                                 (l2, b) in (0usize..=2).prop_flat_map(|n| (label(n), element(n))),
                                 (l3, c) in (0usize..=2).prop_flat_map(|n| (label(n), element(n)))) {
            let (x, y, z) = (el(&l1, &a), el(&l2, &b), el(&l3, &c));
            let left = x.tensor(&y).unwrap().tensor(&z).unwrap();
            let right = x.tensor(&y.tensor(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let unit = Tangent::one(Arc::new(TimeLabel::empty()));
            prop_assert_eq!(unit.tensor(&x).unwrap(), x.clone());
        }
    }
}
