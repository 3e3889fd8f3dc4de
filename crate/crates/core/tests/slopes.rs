//! Slopes of black-box maps against hand-expanded formulas.

use std::sync::Arc;

use num_rational::BigRational as Q;
use tangent_core::slope::{slope1, slope_n, slope_n_formula, FnPoint};
use tangent_core::{Tangent, TimeLabel, Vector};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn cubic(x: &Q) -> Q {
    x * x * x - q(2, 1) * x + q(1, 3)
}

#[test]
fn first_order_components() {
    let f = FnPoint::new(1, 1, |x: &[Q]| vec![cubic(&x[0])]);
    let (v0, v1, t, s) = (q(2, 3), q(-5, 1), q(7, 2), q(1, 4));
    let w = slope1(&f, std::slice::from_ref(&v0), std::slice::from_ref(&v1), t.clone(), s.clone()).unwrap();
    let (at_t, at_s) = (cubic(&(&v0 + &t * &v1)), cubic(&(&v0 + &s * &v1)));
    let w0 = (&t * &at_s - &s * &at_t) / (&t - &s);
    let w1 = (&at_t - &at_s) / (&t - &s);
    assert_eq!(w.coeffs(), &[Vector(vec![w0]), Vector(vec![w1])]);
}

#[test]
fn second_order_expansion() {
    let (t1, t2, s1, s2) = (q(3, 1), q(-1, 2), q(1, 1), q(2, 1));
    let label = Arc::new(TimeLabel::new(vec![t1.clone(), t2.clone()], vec![s1.clone(), s2.clone()]).unwrap());
    let c = [q(1, 1), q(-2, 3), q(4, 1), q(1, 5)];
    let v = Tangent::new(label.clone(), c.iter().map(|x| Vector(vec![x.clone()])).collect()).unwrap();
    let f = FnPoint::new(1, 1, |x: &[Q]| vec![cubic(&x[0])]);
    // Evaluation points: time t_i where i is in the corner, s_i otherwise.
    let point = |a: &Q, b: &Q| &c[0] + a * &c[1] + b * &c[2] + a * b * &c[3];
    let y: Vec<Q> = [point(&s1, &s2), point(&t1, &s2), point(&s1, &t2), point(&t1, &t2)]
        .iter()
        .map(cubic)
        .collect();
    let pre = Q::from_integer(1.into()) / ((&t1 - &s1) * (&t2 - &s2));
    let expected = [
        &t1 * &t2 * &y[0] - &s1 * &t2 * &y[1] - &t1 * &s2 * &y[2] + &s1 * &s2 * &y[3],
        -&t2 * &y[0] + &t2 * &y[1] + &s2 * &y[2] - &s2 * &y[3],
        -&t1 * &y[0] + &s1 * &y[1] + &t1 * &y[2] - &s1 * &y[3],
        &y[0] - &y[1] - &y[2] + &y[3],
    ]
    .map(|c| Vector(vec![c * &pre]));
    assert_eq!(slope_n(&f, &v).unwrap().coeffs(), &expected);
    assert_eq!(slope_n_formula(&f, &v).unwrap().coeffs(), &expected);
}
