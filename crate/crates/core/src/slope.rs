//! Slopes: the restricted iteration `f^n_{(t,s)}` of a map `f: K^d → K^{d'}`.
//!
//! For a regular label the slope is `Υ⁻¹ ∘ (f applied at every evaluation
//! point) ∘ Υ`, which needs nothing but point evaluations of `f` — see
//! [`slope_n`] and [`slope_n_formula`]. Expression-backed maps can also be
//! extended at singular and mixed labels by evaluating them in the tangent
//! algebra ([`extend_expr`]); at `t = s = 0` this yields derivatives.

use std::collections::HashMap;
use std::marker::PhantomData;
use std::sync::Arc;

use rayon::prelude::*;

use crate::anchor::{anchor_apply, anchor_inverse_apply, evaluation_point, inverse_entry, CubeElement};
use crate::error::{Error, Result};
use crate::expr::{Expr, ScalarRing};
use crate::hypercube::{check_order, full_mask, Subset, TimeLabel};
use crate::ring::Scalar;
use crate::talg::{Tangent, TangentAlgebra, Vector};

/// A slope: a tangent element whose coefficients are points of the target space.
pub type SlopeResult<S> = Tangent<S, Vector<S>>;

/// A black-box map `K^d ⊇ U → K^{d'}`.
///
/// Evaluation must be deterministic. Returning [`Error::NotInvertible`] from
/// [`eval`](PointFn::eval) is treated like failing [`contains`](PointFn::contains):
/// the point lies outside the domain.
pub trait PointFn<S: Scalar>: Sync {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn eval(&self, x: &[S]) -> Result<Vec<S>>;

    /// Domain membership.
    fn contains(&self, _x: &[S]) -> bool {
        true
    }

    /// Whether `eval` may be called from several threads at once.
    fn concurrent(&self) -> bool {
        false
    }
}

type Domain<S> = Arc<dyn Fn(&[S]) -> bool + Send + Sync>;

/// A [`PointFn`] backed by a closure.
pub struct FnPoint<S, F> {
    input_dim: usize,
    output_dim: usize,
    f: F,
    domain: Option<Domain<S>>,
    concurrent: bool,
    _scalar: PhantomData<fn(S)>,
}

impl<S, F> FnPoint<S, F>
where
    S: Scalar,
    F: Fn(&[S]) -> Vec<S> + Sync,
{
    pub fn new(input_dim: usize, output_dim: usize, f: F) -> Self {
        Self {
            input_dim,
            output_dim,
            f,
            domain: None,
            concurrent: false,
            _scalar: PhantomData,
        }
    }

    /// Restricts the domain to the points accepted by `domain`.
    pub fn with_domain(mut self, domain: impl Fn(&[S]) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Some(Arc::new(domain));
        self
    }

    /// Allows parallel evaluation.
    pub fn concurrent(mut self) -> Self {
        self.concurrent = true;
        self
    }
}

impl<S, F> PointFn<S> for FnPoint<S, F>
where
    S: Scalar,
    F: Fn(&[S]) -> Vec<S> + Sync,
{
    fn input_dim(&self) -> usize {
        self.input_dim
    }

    fn output_dim(&self) -> usize {
        self.output_dim
    }

    fn eval(&self, x: &[S]) -> Result<Vec<S>> {
        let y = (self.f)(x);
        if y.len() != self.output_dim {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim,
                found: y.len(),
            });
        }
        Ok(y)
    }

    fn contains(&self, x: &[S]) -> bool {
        self.domain.as_ref().is_none_or(|d| d(x))
    }

    fn concurrent(&self) -> bool {
        self.concurrent
    }
}

/// A map given by one expression per output coordinate, in fixed variable order.
#[derive(Clone, Debug)]
pub struct ExprFn {
    exprs: Vec<Expr>,
    vars: Vec<String>,
}

impl ExprFn {
    /// Fails if an expression uses a variable outside `vars`.
    pub fn new(exprs: Vec<Expr>, vars: Vec<String>) -> Result<Self> {
        for e in &exprs {
            if let Some(v) = e.variables().into_iter().find(|v| !vars.contains(v)) {
                return Err(Error::UnboundVariable(v));
            }
        }
        Ok(Self { exprs, vars })
    }

    /// A scalar map in the variables of `expr`, ordered by first occurrence.
    pub fn scalar(expr: Expr) -> Self {
        let vars = expr.variables();
        Self {
            exprs: vec![expr],
            vars,
        }
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Extends the map to the tangent algebra of `v`, at any label.
    pub fn extend<S: Scalar>(&self, v: &SlopeResult<S>) -> Result<SlopeResult<S>> {
        if v.width() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                found: v.width(),
            });
        }
        let args: HashMap<String, Tangent<S>> =
            self.vars.iter().cloned().zip(split_components(v)).collect();
        let outputs = self
            .exprs
            .iter()
            .map(|e| extend_expr(e, v.shared_label().clone(), &args))
            .collect::<Result<Vec<_>>>()?;
        join_components(v.shared_label().clone(), &outputs)
    }
}

impl<S: Scalar> PointFn<S> for ExprFn {
    fn input_dim(&self) -> usize {
        self.vars.len()
    }

    fn output_dim(&self) -> usize {
        self.exprs.len()
    }

    fn eval(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                found: x.len(),
            });
        }
        let env: HashMap<String, S> = self.vars.iter().cloned().zip(x.iter().cloned()).collect();
        let ring = ScalarRing::new();
        self.exprs.iter().map(|e| e.eval(&ring, &env)).collect()
    }

    fn concurrent(&self) -> bool {
        true
    }
}

/// Splits a vector-valued element into one scalar element per coordinate.
pub fn split_components<S: Scalar>(v: &SlopeResult<S>) -> Vec<Tangent<S>> {
    (0..v.width())
        .map(|k| {
            let coeffs = v.coeffs().iter().map(|c| c.0[k].clone()).collect();
            Tangent::new(v.shared_label().clone(), coeffs).expect("coefficient count matches the label")
        })
        .collect()
}

/// Inverse of [`split_components`].
pub fn join_components<S: Scalar>(
    label: impl Into<Arc<TimeLabel<S>>>,
    components: &[Tangent<S>],
) -> Result<SlopeResult<S>> {
    let label = label.into();
    if components.iter().any(|c| c.label() != &*label) {
        return Err(Error::LabelMismatch);
    }
    let coeffs = (0..1usize << label.order())
        .map(|i| Vector(components.iter().map(|c| c.coeffs()[i].clone()).collect()))
        .collect();
    Tangent::new(label, coeffs)
}

fn check_input<S: Scalar>(f: &dyn PointFn<S>, v: &SlopeResult<S>) -> Result<()> {
    if !v.label().is_regular() {
        return Err(Error::NotRegular);
    }
    if v.width() != f.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.input_dim(),
            found: v.width(),
        });
    }
    Ok(())
}

fn eval_at<S: Scalar>(f: &dyn PointFn<S>, point: &Vector<S>) -> Result<Vector<S>> {
    let outside = || Error::Domain {
        point: point.0.iter().map(ToString::to_string).collect(),
    };
    if !f.contains(&point.0) {
        return Err(outside());
    }
    let y = f.eval(&point.0).map_err(|e| match e {
        Error::NotInvertible => outside(),
        other => other,
    })?;
    if y.len() != f.output_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.output_dim(),
            found: y.len(),
        });
    }
    Ok(Vector(y))
}

fn eval_all<S: Scalar>(f: &dyn PointFn<S>, points: &[Vector<S>]) -> Result<Vec<Vector<S>>> {
    if f.concurrent() {
        points.par_iter().map(|p| eval_at(f, p)).collect()
    } else {
        points.iter().map(|p| eval_at(f, p)).collect()
    }
}

/// First-order slope at the points `v0`, `v1` and times `t`, `s`.
///
/// The second component is the difference quotient
/// `(f(v0 + t·v1) − f(v0 + s·v1)) / (t − s)`.
pub fn slope1<S: Scalar>(f: &dyn PointFn<S>, v0: &[S], v1: &[S], t: S, s: S) -> Result<SlopeResult<S>> {
    let label = TimeLabel::new(vec![t], vec![s])?;
    let v = Tangent::new(label, vec![Vector(v0.to_vec()), Vector(v1.to_vec())])?;
    slope_n(f, &v)
}

/// The slope `f^n_{(t,s)}(v)` at a regular label, via the anchor.
pub fn slope_n<S: Scalar>(f: &dyn PointFn<S>, v: &SlopeResult<S>) -> Result<SlopeResult<S>> {
    check_input(f, v)?;
    let points = anchor_apply(v).into_values();
    let values = eval_all(f, &points)?;
    let y = CubeElement::new(v.order(), values)?;
    anchor_inverse_apply(&y, v.shared_label().clone())
}

/// The weights of component `b` of the slope formula: entry `A` multiplies
/// `f(Υ_A(v))`.
///
/// Component `∅` is an affine combination (weights sum to one); every other
/// component is a zero-sum combination.
pub fn slope_weights<S: Scalar>(label: &TimeLabel<S>, b: Subset) -> Result<Vec<S>> {
    if b.dim() != label.order() {
        return Err(Error::DimensionMismatch {
            expected: label.order(),
            found: b.dim(),
        });
    }
    let scale = label.inverse_diff_prod()?;
    let full = full_mask(label.order());
    Ok((0..1u32 << label.order())
        .map(|a| inverse_entry(label, b.bits(), a, full) * scale.clone())
        .collect())
}

/// The slope at a regular label from the explicit weighted-sum formula.
pub fn slope_n_formula<S: Scalar>(f: &dyn PointFn<S>, v: &SlopeResult<S>) -> Result<SlopeResult<S>> {
    check_input(f, v)?;
    let label = v.label();
    let points: Vec<_> = (0..1u32 << label.order()).map(|a| evaluation_point(v, a)).collect();
    let values = eval_all(f, &points)?;
    let coeffs = Subset::all(label.order())?
        .map(|b| {
            let weights = slope_weights(label, b)?;
            Ok(values
                .iter()
                .zip(&weights)
                .fold(Vector(vec![S::zero(); f.output_dim()]), |acc, (y, w)| {
                    Vector(acc.0.into_iter().zip(&y.0).map(|(a, y)| a + y.clone() * w.clone()).collect())
                }))
        })
        .collect::<Result<Vec<_>>>()?;
    Tangent::new(v.shared_label().clone(), coeffs)
}

/// Evaluates `expr` in the tangent algebra of `label`; valid at every label.
pub fn extend_expr<S: Scalar>(
    expr: &Expr,
    label: impl Into<Arc<TimeLabel<S>>>,
    args: &HashMap<String, Tangent<S>>,
) -> Result<Tangent<S>> {
    let label = label.into();
    if args.values().any(|x| x.label() != &*label) {
        return Err(Error::LabelMismatch);
    }
    expr.eval(&TangentAlgebra::new(label), args)
}

/// The partial derivative `∂^k f / ∂wrt_1 … ∂wrt_k` at `point`, exactly.
///
/// Each listed variable gets its own nilpotent direction `e_i` at the
/// singular label `t = s = 0`; the top coefficient of the result is the
/// derivative. Repeating a variable takes a higher derivative in it.
pub fn derivative<S: Scalar>(expr: &Expr, point: &HashMap<String, S>, wrt: &[&str]) -> Result<S> {
    let k = wrt.len();
    check_order(k)?;
    let label = Arc::new(TimeLabel::singular(k)?);
    let mut args = HashMap::new();
    for var in expr.variables() {
        let base = point.get(&var).ok_or_else(|| Error::UnboundVariable(var.clone()))?;
        let mut x = Tangent::from_base(label.clone(), base.clone());
        for (i, _) in wrt.iter().enumerate().filter(|(_, w)| **w == var) {
            x = x.add(&Tangent::basis(label.clone(), Subset::new(1 << i, k)?)?)?;
        }
        args.insert(var, x);
    }
    let y = extend_expr(expr, label, &args)?;
    Ok(y.coeff(Subset::full(k)?).clone())
}
