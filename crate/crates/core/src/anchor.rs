//! The anchor `Υ: K^n_{(t,s)} → K^{P(n)}` and its inverse.
//!
//! With rows indexed by the cube basis `E_B` and columns by the algebra basis
//! `e_A`, the anchor has entries `Υ_{(B,A)} = t_{A∩B} s_{A∩B^c}`. Component `B`
//! of `Υ(v)` is the evaluation point `Σ_C s_{C∩B^c} t_{C∩B} v_C`: bit `i` of
//! `B` selects the target time `t_i`, a clear bit the source time `s_i`.
//!
//! For regular labels the inverse has entries
//! `(-1)^{|AΔB|} s_{B^c∩A} t_{B^c∩A^c} / (t-s)_n` (row `B` in the algebra
//! basis, column `A` in the cube basis).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypercube::{check_order, full_mask, prod_bits, Subset, TimeLabel};
use crate::hyperlin::{CubeMatrix, TwoByTwo};
use crate::ring::Scalar;
use crate::talg::{Payload, Tangent};

/// A function `P(n) → V` on the hypercube; a scalar-valued one is an element
/// of the cube algebra with pointwise product.
#[derive(Clone, PartialEq, Debug)]
pub struct CubeElement<S: Scalar, P: Payload<S> = S> {
    dim: usize,
    values: Vec<P>,
    _scalar: std::marker::PhantomData<S>,
}

impl<S: Scalar, P: Payload<S>> CubeElement<S, P> {
    pub fn new(dim: usize, values: Vec<P>) -> Result<Self> {
        check_order(dim)?;
        if values.len() != 1 << dim {
            return Err(Error::DimensionMismatch {
                expected: 1 << dim,
                found: values.len(),
            });
        }
        Ok(Self {
            dim,
            values,
            _scalar: std::marker::PhantomData,
        })
    }

    pub fn constant(dim: usize, value: P) -> Result<Self> {
        Self::new(dim, vec![value; 1 << dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, subset: Subset) -> &P {
        &self.values[subset.index()]
    }

    pub fn values(&self) -> &[P] {
        &self.values
    }

    pub fn into_values(self) -> Vec<P> {
        self.values
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Self::new(
            self.dim,
            self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect(),
        )
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }
}

impl<S: Scalar> CubeElement<S, S> {
    /// The unit: the all-ones function.
    pub fn one(dim: usize) -> Result<Self> {
        Self::constant(dim, S::one())
    }

    /// The basis function `E_A`.
    pub fn basis(subset: Subset) -> Self {
        let mut values = vec![S::zero(); 1 << subset.dim()];
        values[subset.index()] = S::one();
        Self::new(subset.dim(), values).expect("subset dimension is bounded")
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Self::new(
            self.dim,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        )
    }
}

/// First-order anchor blocks `((1, s_i), (1, t_i))`.
pub fn anchor_blocks<S: Scalar>(label: &TimeLabel<S>) -> Vec<TwoByTwo<S>> {
    label
        .t()
        .iter()
        .zip(label.s())
        .map(|(t, s)| TwoByTwo::new(S::one(), s.clone(), S::one(), t.clone()))
        .collect()
}

/// The anchor matrix from the entry formula `t_{A∩B} s_{A∩B^c}`.
pub fn anchor_matrix<S: Scalar>(label: &TimeLabel<S>) -> CubeMatrix<S> {
    let full = full_mask(label.order());
    CubeMatrix::from_fn(label.order(), |b, a| {
        prod_bits(label.t(), a & b) * prod_bits(label.s(), a & (b ^ full))
    })
    .expect("label order is bounded")
}

/// Inverse anchor matrix; [`Error::NotRegular`] unless every `t_i - s_i` is a unit.
pub fn anchor_inverse_matrix<S: Scalar>(label: &TimeLabel<S>) -> Result<CubeMatrix<S>> {
    let scale = label.inverse_diff_prod()?;
    let full = full_mask(label.order());
    CubeMatrix::from_fn(label.order(), |b, a| inverse_entry(label, b, a, full) * scale.clone())
}

/// `(-1)^{|AΔB|} s_{B^c∩A} t_{B^c∩A^c}` without the `(t-s)_n` prefactor.
pub(crate) fn inverse_entry<S: Scalar>(label: &TimeLabel<S>, b: u32, a: u32, full: u32) -> S {
    let bc = b ^ full;
    let value = prod_bits(label.s(), bc & a) * prod_bits(label.t(), bc & (a ^ full));
    if (a ^ b).count_ones() % 2 == 1 {
        -value
    } else {
        value
    }
}

/// `Υ(x)`, one tensor factor at a time: `(v0, v1) ↦ (v0 + s·v1, v0 + t·v1)`.
pub fn anchor_apply<S: Scalar, P: Payload<S>>(x: &Tangent<S, P>) -> CubeElement<S, P> {
    let label = x.label();
    let mut values = x.coeffs().to_vec();
    for i in 0..label.order() {
        let bit = 1usize << i;
        let (t, s) = (&label.t()[i], &label.s()[i]);
        for lo in (0..values.len()).filter(|idx| idx & bit == 0) {
            let hi = lo | bit;
            let (v0, v1) = (values[lo].clone(), values[hi].clone());
            values[lo] = v0.add(&v1.scale(s));
            values[hi] = v0.add(&v1.scale(t));
        }
    }
    CubeElement::new(label.order(), values).expect("coefficient count matches the label")
}

/// `Υ(x)` from the evaluation-point formula `Υ_A(v) = Σ_C s_{C∩A^c} t_{C∩A} v_C`.
pub fn anchor_apply_entrywise<S: Scalar, P: Payload<S>>(x: &Tangent<S, P>) -> CubeElement<S, P> {
    let n = x.order();
    let values = (0..1u32 << n).map(|a| evaluation_point(x, a)).collect();
    CubeElement::new(n, values).expect("coefficient count matches the label")
}

pub(crate) fn evaluation_point<S: Scalar, P: Payload<S>>(x: &Tangent<S, P>, a: u32) -> P {
    let label = x.label();
    let full = full_mask(label.order());
    let coeffs = x.coeffs();
    coeffs.iter().enumerate().fold(coeffs[0].zeroed(), |acc, (c, v)| {
        let c = c as u32;
        let w = prod_bits(label.s(), c & (a ^ full)) * prod_bits(label.t(), c & a);
        acc.add(&v.scale(&w))
    })
}

/// `Υ⁻¹(y)` at a regular label, one factor at a time:
/// `(x0, x1) ↦ ((t·x0 − s·x1)/(t−s), (x1 − x0)/(t−s))`.
pub fn anchor_inverse_apply<S: Scalar, P: Payload<S>>(
    y: &CubeElement<S, P>,
    label: impl Into<Arc<TimeLabel<S>>>,
) -> Result<Tangent<S, P>> {
    let label = label.into();
    check_dim(y.dim(), &label)?;
    let inverses = label
        .diff()
        .iter()
        .map(|d| d.try_invert().map_err(|_| Error::NotRegular))
        .collect::<Result<Vec<_>>>()?;
    let mut values = y.values().to_vec();
    for (i, inv) in inverses.iter().enumerate() {
        let bit = 1usize << i;
        let (t, s) = (&label.t()[i], &label.s()[i]);
        for lo in (0..values.len()).filter(|idx| idx & bit == 0) {
            let hi = lo | bit;
            let (x0, x1) = (values[lo].clone(), values[hi].clone());
            values[lo] = x0.scale(t).sub(&x1.scale(s)).scale(inv);
            values[hi] = x1.sub(&x0).scale(inv);
        }
    }
    Tangent::new(label, values)
}

/// `Υ⁻¹(y)` from the closed-form inverse entries.
pub fn anchor_inverse_apply_entrywise<S: Scalar, P: Payload<S>>(
    y: &CubeElement<S, P>,
    label: impl Into<Arc<TimeLabel<S>>>,
) -> Result<Tangent<S, P>> {
    let label = label.into();
    check_dim(y.dim(), &label)?;
    let scale = label.inverse_diff_prod()?;
    let full = full_mask(label.order());
    let ys = y.values();
    let coeffs = (0..1u32 << label.order())
        .map(|b| {
            ys.iter()
                .enumerate()
                .fold(ys[0].zeroed(), |acc, (a, v)| {
                    acc.add(&v.scale(&inverse_entry(&label, b, a as u32, full)))
                })
                .scale(&scale)
        })
        .collect();
    Tangent::new(label, coeffs)
}

fn check_dim<S: Scalar>(dim: usize, label: &TimeLabel<S>) -> Result<()> {
    if dim == label.order() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: label.order(),
            found: dim,
        })
    }
}

/// The character `Υ_A = E_A^* ∘ Υ`, an algebra morphism `K^n_{(t,s)} → K`.
#[derive(Clone, Debug)]
pub struct Character<S: Scalar> {
    label: Arc<TimeLabel<S>>,
    subset: Subset,
}

impl<S: Scalar> Character<S> {
    pub fn subset(&self) -> Subset {
        self.subset
    }

    pub fn apply<P: Payload<S>>(&self, x: &Tangent<S, P>) -> Result<P> {
        if x.label() != &*self.label {
            return Err(Error::LabelMismatch);
        }
        Ok(evaluation_point(x, self.subset.bits()))
    }
}

pub fn character<S: Scalar>(label: impl Into<Arc<TimeLabel<S>>>, subset: Subset) -> Result<Character<S>> {
    let label = label.into();
    check_dim(subset.dim(), &label)?;
    Ok(Character { label, subset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperlin::kron_product;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn qq(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn rows(m: &CubeMatrix<Q>) -> Vec<Vec<Q>> {
        m.rows().map(<[Q]>::to_vec).collect()
    }

    fn ints(rows: &[[i64; 4]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn second_order_anchor_general() {
        let (t1, t2, s1, s2) = (3, 5, 7, 11);
        let label = TimeLabel::new(vec![q(t1), q(t2)], vec![q(s1), q(s2)]).unwrap();
        let expected = ints(&[
            [1, s1, s2, s1 * s2],
            [1, t1, s2, t1 * s2],
            [1, s1, t2, s1 * t2],
            [1, t1, t2, t1 * t2],
        ]);
        assert_eq!(rows(&anchor_matrix(&label)), expected);
    }

    #[test]
    fn unit_target_anchor_and_inverse() {
        let label = TimeLabel::target(vec![q(1), q(1)]).unwrap();
        assert_eq!(
            rows(&anchor_matrix(&label)),
            ints(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]])
        );
        assert_eq!(
            rows(&anchor_inverse_matrix(&label).unwrap()),
            ints(&[[1, 0, 0, 0], [-1, 1, 0, 0], [-1, 0, 1, 0], [1, -1, -1, 1]])
        );
    }

    #[test]
    fn second_order_inverse_general() {
        let (t1, t2, s1, s2) = (3, 5, 7, 13);
        let label = TimeLabel::new(vec![q(t1), q(t2)], vec![q(s1), q(s2)]).unwrap();
        let pre = qq(1, (t1 - s1) * (t2 - s2));
        let expected: Vec<Vec<Q>> = ints(&[
            [t1 * t2, -s1 * t2, -t1 * s2, s1 * s2],
            [-t2, t2, s2, -s2],
            [-t1, s1, t1, -s1],
            [1, -1, -1, 1],
        ])
        .into_iter()
        .map(|r| r.into_iter().map(|v| v * pre.clone()).collect())
        .collect();
        assert_eq!(rows(&anchor_inverse_matrix(&label).unwrap()), expected);
    }

    #[test]
    fn symmetric_first_order_entries() {
        let s = q(4);
        let label = TimeLabel::new(vec![-s.clone()], vec![s.clone()]).unwrap();
        let m = anchor_matrix(&label);
        for b in 0..2u32 {
            for a in 0..2u32 {
                let sign = if (a & b).count_ones() % 2 == 1 { q(-1) } else { q(1) };
                let sa = if a == 1 { s.clone() } else { q(1) };
                assert_eq!(*m.get(b as usize, a as usize), sign * sa);
            }
        }
    }

    #[test]
    fn half_symmetric_character_table() {
        let half = qq(1, 2);
        for n in 1..=3 {
            let label = TimeLabel::symmetric(vec![half.clone(); n]).unwrap();
            let m = anchor_matrix(&label);
            for b in 0..1u32 << n {
                for a in 0..1u32 << n {
                    let mut expected = Q::from_integer(1.into());
                    for _ in 0..a.count_ones() {
                        expected *= half.clone();
                    }
                    if (a & !b).count_ones() % 2 == 1 {
                        expected = -expected;
                    }
                    assert_eq!(*m.get(b as usize, a as usize), expected);
                }
            }
        }
    }

    #[test]
    fn singular_labels_have_no_inverse() {
        let label = TimeLabel::new(vec![q(2)], vec![q(2)]).unwrap();
        assert_eq!(anchor_inverse_matrix(&label), Err(Error::NotRegular));
        let y = CubeElement::<Q>::one(1).unwrap();
        assert_eq!(anchor_inverse_apply(&y, label), Err(Error::NotRegular));
    }

    #[test]
    fn evaluation_points_second_order() {
        let label = Arc::new(TimeLabel::new(vec![q(2), q(3)], vec![q(-1), q(5)]).unwrap());
        let (v0, v1, v2, v12) = (q(1), q(2), q(3), q(4));
        let x = Tangent::new(label.clone(), vec![v0.clone(), v1.clone(), v2.clone(), v12.clone()]).unwrap();
        let (t1, t2, s1, s2) = (q(2), q(3), q(-1), q(5));
        let expected = vec![
            v0.clone() + s1.clone() * v1.clone() + s2.clone() * v2.clone() + s1.clone() * s2.clone() * v12.clone(),
            v0.clone() + t1.clone() * v1.clone() + s2.clone() * v2.clone() + t1.clone() * s2.clone() * v12.clone(),
            v0.clone() + s1.clone() * v1.clone() + t2.clone() * v2.clone() + s1 * t2.clone() * v12.clone(),
            v0 + t1.clone() * v1 + t2.clone() * v2 + t1 * t2 * v12,
        ];
        assert_eq!(anchor_apply(&x).values(), expected.as_slice());
        assert_eq!(anchor_apply_entrywise(&x).values(), expected.as_slice());
        let m = anchor_matrix(&label);
        assert_eq!(m.apply(x.coeffs()).unwrap(), expected);
    }

    #[test]
    fn constants_map_to_constants() {
        let label = Arc::new(TimeLabel::new(vec![q(2), q(3)], vec![q(-1), q(5)]).unwrap());
        let c = Tangent::from_base(label.clone(), q(7));
        assert_eq!(anchor_apply(&c), CubeElement::constant(2, q(7)).unwrap());
        let back = anchor_inverse_apply(&CubeElement::constant(2, q(7)).unwrap(), label.clone()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn first_order_inverse_apply() {
        let label = TimeLabel::target(vec![q(1)]).unwrap();
        let y = CubeElement::new(1, vec![q(5), q(9)]).unwrap();
        assert_eq!(anchor_inverse_apply(&y, label.clone()).unwrap().coeffs(), &[q(5), q(4)]);
        assert_eq!(anchor_inverse_apply_entrywise(&y, label).unwrap().coeffs(), &[q(5), q(4)]);
    }

    #[test]
    fn matrix_is_kronecker_of_first_order() {
        let label = TimeLabel::new(vec![q(2), q(-3), q(5)], vec![q(1), q(4), q(0)]).unwrap();
        assert_eq!(anchor_matrix(&label), kron_product(&anchor_blocks(&label)).unwrap());
    }

    #[test]
    fn characters() {
        let label = Arc::new(TimeLabel::new(vec![q(3)], vec![q(-2)]).unwrap());
        let x = Tangent::new(label.clone(), vec![q(4), q(5)]).unwrap();
        let source = character(label.clone(), Subset::empty(1).unwrap()).unwrap();
        let target = character(label.clone(), Subset::full(1).unwrap()).unwrap();
        assert_eq!(source.apply(&x).unwrap(), x.alpha().unwrap());
        assert_eq!(target.apply(&x).unwrap(), x.beta().unwrap());
        assert_eq!(source.apply(&Tangent::from_base(label.clone(), q(6))).unwrap(), q(6));

        let two = Arc::new(TimeLabel::new(vec![q(1), q(2)], vec![q(0), q(-1)]).unwrap());
        let y = Tangent::new(two.clone(), vec![q(1), q(2), q(3), q(4)]).unwrap();
        let z = Tangent::new(two.clone(), vec![q(-1), q(0), q(2), q(1)]).unwrap();
        for sub in Subset::all(2).unwrap() {
            let chi = character(two.clone(), sub).unwrap();
            let lhs = chi.apply(&y.mul(&z).unwrap()).unwrap();
            assert_eq!(lhs, chi.apply(&y).unwrap() * chi.apply(&z).unwrap());
        }
        assert!(character(two, Subset::empty(1).unwrap()).is_err());
    }

    #[test]
    fn cube_algebra() {
        let a = Subset::from_elements(&[1], 2).unwrap();
        let b = Subset::from_elements(&[2], 2).unwrap();
        let ea = CubeElement::<Q>::basis(a);
        assert_eq!(ea.mul(&ea).unwrap(), ea);
        assert!(ea.mul(&CubeElement::basis(b)).unwrap().values().iter().all(Zero::is_zero));
        let total = Subset::all(2)
            .unwrap()
            .map(CubeElement::<Q>::basis)
            .reduce(|x, y| x.add(&y).unwrap())
            .unwrap();
        assert_eq!(total, CubeElement::one(2).unwrap());
    }
}
