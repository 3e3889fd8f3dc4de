//! Randomized property checks, grouped into suites.
//!
//! Every check draws its cases from its own seeded stream, so results depend
//! only on the seed, the case count and the order cap.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational as Q;
use num_traits::{One, Zero};
use tangent_core::anchor::{
    anchor_apply, anchor_apply_entrywise, anchor_inverse_apply, anchor_inverse_matrix, anchor_matrix,
};
use tangent_core::hyperlin::{
    j_inverse, kron_det, kron_inverse, kron_product, sign_ops, symplectic_adjugate, CubeMatrix, TwoByTwo,
};
use tangent_core::json::{bindings_to_json, blocks_to_json};
use tangent_core::slope::{derivative, slope_n, slope_n_formula, slope_weights, ExprFn};
use tangent_core::{Error, Expr, Subset, Tangent, TimeLabel};

use crate::gen::{var_names, Gen, LabelKind};
use crate::oracle::{self, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Anchor,
    Kron,
    Slope,
    Structure,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Algebra, Suite::Anchor, Suite::Kron, Suite::Slope, Suite::Structure];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Anchor => "anchor",
            Suite::Kron => "kron",
            Suite::Slope => "slope",
            Suite::Structure => "structure",
        }
    }

    pub fn checks(self) -> &'static [Check] {
        use Check::*;
        match self {
            Suite::Algebra => &[MulOracle, RingLaws],
            Suite::Anchor => &[AnchorRoundTrip, AnchorMorphism],
            Suite::Kron => &[KronClosedForms, AdjugateIdentity],
            Suite::Slope => &[SlopePaths, ChainRule, Derivatives, SlopeWeights],
            Suite::Structure => &[Structure],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    AnchorRoundTrip,
    AnchorMorphism,
    MulOracle,
    KronClosedForms,
    AdjugateIdentity,
    SlopePaths,
    ChainRule,
    Derivatives,
    Structure,
    SlopeWeights,
    RingLaws,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::AnchorRoundTrip => "anchor round trip",
            Check::AnchorMorphism => "anchor morphism",
            Check::MulOracle => "multiplication oracle",
            Check::KronClosedForms => "kronecker closed forms",
            Check::AdjugateIdentity => "adjugate identity",
            Check::SlopePaths => "slope path agreement",
            Check::ChainRule => "chain rule",
            Check::Derivatives => "derivative correctness",
            Check::Structure => "first-order structure",
            Check::SlopeWeights => "slope weight sums",
            Check::RingLaws => "ring laws",
        }
    }

    /// Largest order exercised when no cap is given.
    pub fn default_order(self) -> usize {
        match self {
            Check::AnchorRoundTrip => 6,
            Check::KronClosedForms => 5,
            Check::SlopePaths | Check::ChainRule => 3,
            Check::Derivatives => 2,
            Check::Structure => 1,
            _ => 4,
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }

    pub fn run(self, config: &Config) -> Outcome {
        let mut gen = Gen::new(config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ self.stream());
        let max = config.max_order.unwrap_or(self.default_order()).max(1);
        let max = if self == Check::Structure { 1 } else { max };
        let mut outcome = Outcome {
            check: self,
            cases: 0,
            failures: 0,
            first_failure: None,
        };
        for case in 0..config.cases {
            let result = match self {
                Check::AnchorRoundTrip => anchor_round_trip(&mut gen, cycle(case, max)),
                Check::AnchorMorphism => anchor_morphism(&mut gen, cycle(case, max)),
                Check::MulOracle => mul_oracle(&mut gen, cycle(case, max)),
                Check::KronClosedForms => kron_closed_forms(&mut gen, cycle(case, max)),
                Check::AdjugateIdentity => adjugate_identity(&mut gen, cycle(case, max)),
                Check::SlopePaths => slope_paths(&mut gen, cycle(case, max)),
                Check::ChainRule => chain_rule(&mut gen, case, max),
                Check::Derivatives => derivatives(&mut gen),
                Check::Structure => structure(&mut gen),
                Check::SlopeWeights => slope_weight_sums(&mut gen, cycle(case, max)),
                Check::RingLaws => ring_laws(&mut gen, cycle(case, max)),
            };
            outcome.cases += 1;
            if let Err(message) = result {
                outcome.failures += 1;
                outcome.first_failure.get_or_insert(format!("case {case}: {message}"));
            }
        }
        outcome
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    pub cases: usize,
    /// Caps the order of every check; `None` uses each check's default.
    pub max_order: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 100,
            max_order: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub check: Check,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({}/{} cases)", self.check.name(), self.cases - self.failures, self.cases)?;
        if let Some(first) = &self.first_failure {
            write!(f, " — first failure: {first}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, config: &Config) -> Vec<Outcome> {
    suite.checks().iter().map(|c| c.run(config)).collect()
}

fn cycle(case: usize, max: usize) -> usize {
    1 + case % max
}

type CaseResult = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn core<T>(r: tangent_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

fn rows(m: &CubeMatrix<Q>) -> Matrix {
    m.rows().map(<[Q]>::to_vec).collect()
}

fn show(blocks: &[TwoByTwo<Q>]) -> String {
    blocks_to_json(blocks).to_string()
}

fn random_kind(gen: &mut Gen, n: usize) -> LabelKind {
    match gen.range(0, if n >= 2 { 2 } else { 1 }) {
        0 => LabelKind::Regular,
        1 => LabelKind::Singular,
        _ => LabelKind::Mixed,
    }
}

fn anchor_round_trip(gen: &mut Gen, n: usize) -> CaseResult {
    let label = gen.label(n, LabelKind::Regular);
    let anchor = anchor_matrix(&label);
    ensure(rows(&anchor) == oracle::anchor_by_evaluation(&label), || {
        format!("anchor disagrees with corner evaluation at {label}")
    })?;
    let inverse = core(anchor_inverse_matrix(&label))?;
    let product = core(inverse.matmul(&anchor))?;
    ensure(product == core(CubeMatrix::identity(n))?, || {
        format!("inverse · anchor ≠ id at {label}")
    })
}

fn anchor_morphism(gen: &mut Gen, n: usize) -> CaseResult {
    let kind = random_kind(gen, n);
    let label = Arc::new(gen.label(n, kind));
    let (x, y) = (gen.element(&label), gen.element(&label));
    let lhs = anchor_apply(&core(x.mul(&y))?);
    let rhs = core(anchor_apply(&x).mul(&anchor_apply(&y)))?;
    ensure(lhs == rhs, || format!("Υ(xy) ≠ Υ(x)Υ(y) for x={x}, y={y}"))?;
    ensure(anchor_apply_entrywise(&x) == anchor_apply(&x), || {
        format!("entrywise anchor differs for {x}")
    })?;
    if label.is_regular() {
        let back = core(anchor_inverse_apply(&anchor_apply(&x), label.clone()))?;
        ensure(back == x, || format!("Υ⁻¹Υ(x) ≠ x for {x}"))?;
    }
    Ok(())
}

fn mul_oracle(gen: &mut Gen, n: usize) -> CaseResult {
    let kind = random_kind(gen, n);
    let label = Arc::new(gen.label(n, kind));
    let (x, y) = (gen.element(&label), gen.element(&label));
    let expected = oracle::algebra_mul(x.coeffs(), y.coeffs(), &label);
    let got = core(x.mul(&y))?;
    ensure(got.coeffs() == expected.as_slice(), || {
        format!("x={x}, y={y}: got {:?}, expected {expected:?}", got.coeffs())
    })
}

fn ring_laws(gen: &mut Gen, n: usize) -> CaseResult {
    let kind = random_kind(gen, n);
    let label = Arc::new(gen.label(n, kind));
    let (x, y, z) = (gen.element(&label), gen.element(&label), gen.element(&label));
    let one = Tangent::one(label.clone());
    let xy = core(x.mul(&y))?;
    ensure(xy == core(y.mul(&x))?, || format!("xy ≠ yx for {x}, {y}"))?;
    ensure(core(xy.mul(&z))? == core(x.mul(&core(y.mul(&z))?))?, || {
        format!("(xy)z ≠ x(yz) for {x}, {y}, {z}")
    })?;
    ensure(core(x.mul(&core(y.add(&z))?))? == core(xy.add(&core(x.mul(&z))?))?, || {
        format!("x(y+z) ≠ xy+xz for {x}, {y}, {z}")
    })?;
    ensure(core(one.mul(&x))? == x, || format!("1·x ≠ x for {x}"))?;
    // Tensor products multiply factorwise.
    let other = Arc::new(gen.label(1, LabelKind::Regular));
    let (u, w) = (gen.element(&other), gen.element(&other));
    let lhs = core(core(x.tensor(&u))?.mul(&core(y.tensor(&w))?))?;
    let rhs = core(xy.tensor(&core(u.mul(&w))?))?;
    ensure(lhs == rhs, || format!("(x⊗u)(y⊗w) ≠ xy⊗uw for {x}, {u}"))
}

fn kron_closed_forms(gen: &mut Gen, n: usize) -> CaseResult {
    let blocks = gen.blocks(n, true);
    let naive = oracle::naive_kron(&blocks);
    ensure(rows(&core(kron_product(&blocks))?) == naive, || {
        format!("kron_product differs from the naive product for {}", show(&blocks))
    })?;
    if n > 4 {
        return Ok(());
    }
    ensure(kron_det(&blocks) == oracle::determinant(&naive), || {
        format!("kron_det differs from elimination for {}", show(&blocks))
    })?;
    let invertible = gen.blocks(n, false);
    let expected = oracle::gauss_inverse(&oracle::naive_kron(&invertible))
        .ok_or_else(|| "invertible blocks gave a singular matrix".to_string())?;
    ensure(rows(&core(kron_inverse(&invertible))?) == expected, || {
        format!("kron_inverse differs from elimination for {}", show(&invertible))
    })?;
    let singular: Vec<TwoByTwo<Q>> = std::iter::once(gen.singular_block()).chain(gen.blocks(n - 1, true)).collect();
    ensure(kron_inverse(&singular) == Err(Error::NotInvertible), || {
        format!("kron_inverse accepted singular blocks {}", show(&singular))
    })
}

fn adjugate_identity(gen: &mut Gen, n: usize) -> CaseResult {
    let blocks = gen.blocks(n, true);
    let f = oracle::naive_kron(&blocks);
    let j1 = TwoByTwo::new(Q::zero(), Q::one(), -Q::one(), Q::zero());
    let j = oracle::naive_kron(&vec![j1; n]);
    let j_inv = oracle::gauss_inverse(&j).ok_or_else(|| "J is singular".to_string())?;
    let adj = oracle::matmul(&oracle::matmul(&j, &oracle::transpose(&f)), &j_inv);
    let scale = blocks.iter().fold(Q::one(), |acc, b| acc * b.det());
    let expected: Matrix = oracle::identity(1 << n)
        .into_iter()
        .map(|row| row.into_iter().map(|x| x * &scale).collect())
        .collect();
    ensure(oracle::matmul(&f, &adj) == expected, || {
        format!("f J fᵀ J⁻¹ ≠ (Π det)·id for {}", show(&blocks))
    })?;
    let ops = core(sign_ops::<Q>(n))?;
    ensure(rows(&ops.j) == j && rows(&core(j_inverse::<Q>(n))?) == j_inv, || {
        format!("sign operator J_{n} differs from the tensor power")
    })?;
    ensure(rows(&core(symplectic_adjugate(&blocks))?) == adj, || {
        format!("closed-form adjugate differs for {}", show(&blocks))
    })
}

fn slope_paths(gen: &mut Gen, n: usize) -> CaseResult {
    let d = gen.range(1, 3);
    let vars = var_names(d);
    let outputs = gen.range(1, 2);
    let exprs: Vec<Expr> = (0..outputs).map(|_| gen.polynomial(&vars, 4)).collect();
    let f = core(ExprFn::new(exprs, vars))?;
    let label = gen.regular_label(n);
    let v = gen.vector_element(&label, d);
    let anchored = core(slope_n(&f, &v))?;
    let formula = core(slope_n_formula(&f, &v))?;
    let extended = core(f.extend(&v))?;
    let exprs = || f.exprs().iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    ensure(anchored == formula, || format!("anchor path ≠ formula for {} at {v}", exprs()))?;
    ensure(anchored == extended, || format!("anchor path ≠ algebra evaluation for {} at {v}", exprs()))?;
    let pointwise = core(tangent_core::CubeElement::new(
        n,
        anchor_apply(&v)
            .values()
            .iter()
            .map(|p| tangent_core::PointFn::eval(&f, &p.0).map(tangent_core::Vector))
            .collect::<tangent_core::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?,
    ))?;
    ensure(anchor_apply(&anchored) == pointwise, || {
        format!("Υ ∘ slope ≠ f ∘ Υ for {}", exprs())
    })
}

/// Cases cycle through regular, singular and mixed labels in equal numbers.
fn chain_rule(gen: &mut Gen, case: usize, max: usize) -> CaseResult {
    let kind = [LabelKind::Regular, LabelKind::Singular, LabelKind::Mixed][case % 3];
    let n = if kind == LabelKind::Mixed { gen.range(2, max.max(2)) } else { gen.range(1, max) };
    let names = var_names(6);
    let (d, m) = (gen.range(1, 3), gen.range(1, 3));
    let xs = names[..d].to_vec();
    let ys = names[3..3 + m].to_vec();
    let inner: Vec<Expr> = (0..m).map(|_| gen.polynomial(&xs, 3)).collect();
    let outer = gen.polynomial(&ys, 3);
    let substitution: HashMap<String, Expr> = ys.iter().cloned().zip(inner.iter().cloned()).collect();
    let composite = core(ExprFn::new(vec![outer.substitute(&substitution)], xs.clone()))?;
    let f = core(ExprFn::new(inner, xs))?;
    let g = core(ExprFn::new(vec![outer.clone()], ys))?;
    let label = Arc::new(gen.label(n, kind));
    let v = gen.vector_element(&label, d);
    let lhs = core(composite.extend(&v))?;
    let rhs = core(g.extend(&core(f.extend(&v))?))?;
    ensure(lhs == rhs, || format!("(g∘f) ≠ g∘f for g={outer} at {v}"))
}

fn derivatives(gen: &mut Gen) -> CaseResult {
    let d = gen.range(1, 3);
    let vars = var_names(d);
    let p = gen.polynomial(&vars, 6);
    let point: HashMap<String, Q> = vars.iter().map(|v| (v.clone(), gen.rational())).collect();
    let ring = tangent_core::expr::ScalarRing::new();
    let at = || bindings_to_json(point.iter()).to_string();
    let symbolic = |e: &Expr| e.eval(&ring, &point).map_err(|e| e.to_string());
    for x in &vars {
        let got = core(derivative(&p, &point, &[x]))?;
        let expected = symbolic(&p.derivative(x))?;
        ensure(got == expected, || format!("∂{x} of {p} at {}: got {got}, expected {expected}", at()))?;
    }
    // Second partials, mixed whenever there are two variables, read off the
    // top coefficient at order two.
    let mut pairs = vec![(&vars[0], &vars[0])];
    if d >= 2 {
        pairs.push((&vars[0], &vars[1]));
    }
    for (a, b) in pairs {
        let got = core(derivative(&p, &point, &[a, b]))?;
        let expected = symbolic(&p.derivative(a).derivative(b))?;
        ensure(got == expected, || format!("∂{a}∂{b} of {p} at {}: got {got}, expected {expected}", at()))?;
    }
    ensure(core(derivative(&p, &point, &[]))? == symbolic(&p)?, || {
        format!("zeroth derivative of {p} is not the value")
    })
}

fn structure(gen: &mut Gen) -> CaseResult {
    let kind = if gen.coin(0.3) { LabelKind::Singular } else { LabelKind::Regular };
    let label = Arc::new(gen.label(1, kind));
    let (t, s) = (label.t()[0].clone(), label.s()[0].clone());
    let el = |c: [Q; 2]| core(Tangent::new(label.clone(), c.to_vec()));
    let scalar = |q: Q| Tangent::from_base(label.clone(), q);
    let alpha = |x: &Tangent<Q>| core(x.alpha());
    let beta = |x: &Tangent<Q>| core(x.beta());

    // ker α · ker β = 0
    let (c, d) = (gen.rational(), gen.rational());
    let a = el([-(&s * &c), c])?;
    let b = el([-(&t * &d), d])?;
    ensure(alpha(&a)?.is_zero() && beta(&b)?.is_zero(), || "kernel elements misbuilt".into())?;
    ensure(core(a.mul(&b))? == Tangent::zero(label.clone()), || format!("ker α · ker β ≠ 0: {a}, {b}"))?;

    // w·v = α(w)v − α(w)β(v) + β(v)w
    let (v, w) = (gen.element(&label), gen.element(&label));
    let rhs = core(core(v.scale(&alpha(&w)?).sub(&scalar(alpha(&w)? * beta(&v)?)))?.add(&w.scale(&beta(&v)?)))?;
    ensure(core(w.mul(&v))? == rhs, || format!("fundamental relation fails for w={w}, v={v}"))?;

    // κ
    let k = v.kappa();
    ensure(k.kappa() == v, || format!("κ² ≠ id on {v}"))?;
    ensure(alpha(&k)? == beta(&v)? && beta(&k)? == alpha(&v)?, || format!("κ does not swap α, β on {v}"))?;
    ensure(core(v.mul(&k))? == scalar(alpha(&v)? * beta(&v)?), || format!("v·κ(v) ≠ α(v)β(v) on {v}"))?;

    // Inversion, including elements on the kernels.
    let u = match gen.range(0, 3) {
        0 => a.clone(),
        1 => b.clone(),
        _ => v.clone(),
    };
    let norm = alpha(&u)? * beta(&u)?;
    match u.try_invert() {
        Ok(inv) => {
            ensure(!norm.is_zero(), || format!("non-unit {u} was inverted"))?;
            ensure(core(u.mul(&inv))? == Tangent::one(label.clone()), || format!("u·u⁻¹ ≠ 1 for {u}"))?;
            ensure(inv == u.kappa().scale(&norm.recip()), || format!("u⁻¹ ≠ κ(u)/(αβ) for {u}"))?;
        }
        Err(Error::NotInvertible) => ensure(norm.is_zero(), || format!("unit {u} was not inverted"))?,
        Err(e) => return Err(format!("unexpected error: {e}")),
    }

    // Groupoid: w1 ∗ w2 needs α(w1) = β(w2).
    let composable = |gen: &mut Gen, target: Q| -> Result<Tangent<Q>, String> {
        let x1 = gen.rational();
        el([target - &t * &x1, x1])
    };
    let g1 = gen.element(&label);
    let g2 = composable(gen, alpha(&g1)?)?;
    let g3 = composable(gen, alpha(&g2)?)?;
    let compose = |x: &Tangent<Q>, y: &Tangent<Q>| core(x.groupoid_compose(y));
    let g12 = compose(&g1, &g2)?;
    ensure(alpha(&g12)? == alpha(&g2)? && beta(&g12)? == beta(&g1)?, || "source/target of a composite".into())?;
    ensure(compose(&g12, &g3)? == compose(&g1, &compose(&g2, &g3)?)?, || {
        format!("groupoid product is not associative on {g1}, {g2}, {g3}")
    })?;
    let left_unit = core(Tangent::groupoid_unit(beta(&g1)?, label.clone()))?;
    let right_unit = core(Tangent::groupoid_unit(alpha(&g1)?, label.clone()))?;
    ensure(compose(&left_unit, &g1)? == g1 && compose(&g1, &right_unit)? == g1, || {
        format!("unit laws fail for {g1}")
    })?;
    let inv = g1.kappa();
    ensure(compose(&g1, &inv)? == left_unit && compose(&inv, &g1)? == right_unit, || {
        format!("κ is not a groupoid inverse for {g1}")
    })?;
    let off = composable(gen, alpha(&g1)? + Q::one())?;
    ensure(g1.groupoid_compose(&off) == Err(Error::NotComposable), || "non-composable pair accepted".into())
}

fn slope_weight_sums(gen: &mut Gen, n: usize) -> CaseResult {
    let label: TimeLabel<Q> = gen.label(n, LabelKind::Regular);
    for b in core(Subset::all(n))? {
        let total = core(slope_weights(&label, b))?.into_iter().fold(Q::zero(), |acc, w| acc + w);
        let expected = if b.is_empty() { Q::one() } else { Q::zero() };
        ensure(total == expected, || format!("weights of {b} sum to {total} at {label}"))?;
    }
    Ok(())
}
