//! Seeded generators for labels, elements, blocks and polynomial expressions.

use std::sync::Arc;

use num_rational::BigRational as Q;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangent_core::{Expr, Tangent, TimeLabel, TwoByTwo, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    /// Every `t_i − s_i` nonzero.
    Regular,
    /// `t = s`.
    Singular,
    /// At least one regular and one singular factor (needs order ≥ 2).
    Mixed,
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Small rationals `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 5`; zero turns up often.
    pub fn rational(&mut self) -> Q {
        if self.rng.gen_bool(0.1) {
            return Q::zero();
        }
        let p: i64 = self.rng.gen_range(-9..=9);
        let q: i64 = if self.rng.gen_bool(0.6) { 1 } else { self.rng.gen_range(2..=5) };
        Q::new(p.into(), q.into())
    }

    pub fn nonzero(&mut self) -> Q {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn integer(&mut self, bound: i64) -> Q {
        Q::from_integer(self.rng.gen_range(-bound..=bound).into())
    }

    pub fn rationals(&mut self, n: usize) -> Vec<Q> {
        (0..n).map(|_| self.rational()).collect()
    }

    pub fn label(&mut self, n: usize, kind: LabelKind) -> TimeLabel<Q> {
        let regular: Vec<bool> = match kind {
            LabelKind::Regular => vec![true; n],
            LabelKind::Singular => vec![false; n],
            LabelKind::Mixed => {
                assert!(n >= 2, "mixed labels need two factors");
                let mut flags: Vec<bool> = (0..n).map(|_| self.rng.gen_bool(0.5)).collect();
                flags[0] = true;
                flags[1] = false;
                flags.shuffle(&mut self.rng);
                flags
            }
        };
        let s = self.rationals(n);
        let t = s
            .iter()
            .zip(&regular)
            .map(|(s, &r)| if r { s + self.nonzero() } else { s.clone() })
            .collect();
        TimeLabel::new(t, s).expect("order is small")
    }

    pub fn regular_label(&mut self, n: usize) -> Arc<TimeLabel<Q>> {
        Arc::new(self.label(n, LabelKind::Regular))
    }

    pub fn element(&mut self, label: &Arc<TimeLabel<Q>>) -> Tangent<Q> {
        Tangent::new(label.clone(), self.rationals(1 << label.order())).expect("sized to the label")
    }

    pub fn vector_element(&mut self, label: &Arc<TimeLabel<Q>>, width: usize) -> Tangent<Q, Vector<Q>> {
        let coeffs = (0..1usize << label.order())
            .map(|_| Vector(self.rationals(width)))
            .collect();
        Tangent::new(label.clone(), coeffs).expect("sized to the label")
    }

    pub fn block(&mut self) -> TwoByTwo<Q> {
        TwoByTwo::new(self.rational(), self.rational(), self.rational(), self.rational())
    }

    pub fn invertible_block(&mut self) -> TwoByTwo<Q> {
        loop {
            let m = self.block();
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    /// A rank-at-most-one block: the second row is a multiple of the first.
    pub fn singular_block(&mut self) -> TwoByTwo<Q> {
        let (a, b, k) = (self.rational(), self.rational(), self.rational());
        TwoByTwo::new(a.clone(), b.clone(), &k * a, k * b)
    }

    /// Blocks for `n` factors; with `singular`, each is singular with probability 1/4.
    pub fn blocks(&mut self, n: usize, singular: bool) -> Vec<TwoByTwo<Q>> {
        (0..n)
            .map(|_| {
                if singular && self.rng.gen_bool(0.25) {
                    self.singular_block()
                } else if singular {
                    self.block()
                } else {
                    self.invertible_block()
                }
            })
            .collect()
    }

    /// A random polynomial in `vars` of total degree at most `degree`.
    ///
    /// Sums of monomials with small rational coefficients, written with a
    /// mix of products, powers, negations and differences.
    pub fn polynomial(&mut self, vars: &[String], degree: u32) -> Expr {
        let terms = self.range(1, 4);
        let mut out: Option<Expr> = None;
        for _ in 0..terms {
            let d = self.rng.gen_range(0..=degree);
            let term = self.monomial(vars, d);
            out = Some(match out {
                None => term,
                Some(acc) if self.rng.gen_bool(0.3) => Expr::Sub(Box::new(acc), Box::new(term)),
                Some(acc) => Expr::Add(Box::new(acc), Box::new(term)),
            });
        }
        out.expect("at least one term")
    }

    fn monomial(&mut self, vars: &[String], degree: u32) -> Expr {
        let mut exps = vec![0u32; vars.len()];
        for _ in 0..degree {
            exps[self.rng.gen_range(0..vars.len())] += 1;
        }
        let coeff = self.nonzero();
        let mut expr = Expr::Const(coeff);
        for (var, &k) in vars.iter().zip(&exps) {
            let factor = match k {
                0 => continue,
                1 => Expr::var(var),
                k if self.rng.gen_bool(0.5) => Expr::Pow(Box::new(Expr::var(var)), k),
                k => (1..k).fold(Expr::var(var), |acc, _| Expr::Mul(Box::new(acc), Box::new(Expr::var(var)))),
            };
            expr = Expr::Mul(Box::new(expr), Box::new(factor));
        }
        if self.rng.gen_bool(0.15) {
            expr = Expr::Neg(Box::new(expr));
        }
        expr
    }
}

pub fn var_names(count: usize) -> Vec<String> {
    ["x", "y", "z", "u", "v", "w"]
        .iter()
        .take(count)
        .map(|s| s.to_string())
        .collect()
}
