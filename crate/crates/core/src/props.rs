//! Seeded randomized property suites, shared by the CLI `props` command and
//! the test suite. Each case draws from its own ChaCha stream, so a failure is
//! reproducible from `(seed, case)` alone; the reproducer also carries the
//! inputs as JSON.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{ceil_mul, ExactReal, ExtReal, Extended};
use crate::filtration::{Filtration, Order};
use crate::monalg::{scale_exp, Exponent, MonomialIdeal, SupportPoly};
use crate::samuel;
use crate::valuation::MonomialValuation;
use crate::wire::filtration_to_json;

pub const DEFAULT_SEED: u64 = 20240611;
pub const DEFAULT_CASES: u64 = 1000;

/// Suite names, in run order.
pub const SUITES: &[&str] = &[
    "homogeneity",
    "superadditivity",
    "monotonicity",
    "closure-stability",
    "k-integrally-closed",
    "k-idempotence",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub failures: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Case = fn(&mut ChaCha8Rng, &mut Vec<Value>) -> Result<Option<String>>;

fn case_fn(suite: &str) -> Option<Case> {
    Some(match suite {
        "homogeneity" => homogeneity,
        "superadditivity" => superadditivity,
        "monotonicity" => monotonicity,
        "closure-stability" => closure_stability,
        "k-integrally-closed" => k_integrally_closed,
        "k-idempotence" => k_idempotence,
        _ => return None,
    })
}

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Runs `cases` cases of `suite`. A case fails when its property is violated
/// or when the library returns an error on valid input.
pub fn run_suite(suite: &str, seed: u64, cases: u64) -> Result<SuiteReport> {
    let f = case_fn(suite).ok_or_else(|| Error::Invalid(format!("unknown suite {suite:?}")))?;
    let mut failures: Vec<(u64, Value)> = (0..cases)
        .into_par_iter()
        .filter_map(|case| {
            let mut rng = case_rng(seed, case);
            let mut inputs = Vec::new();
            let detail = match f(&mut rng, &mut inputs) {
                Ok(None) => return None,
                Ok(Some(msg)) => msg,
                Err(e) => format!("error: {e}"),
            };
            Some((case, json!({"suite": suite, "seed": seed, "case": case, "inputs": inputs, "detail": detail})))
        })
        .collect();
    failures.sort_by_key(|(c, _)| *c);
    Ok(SuiteReport { suite: suite.to_string(), seed, cases, failures: failures.into_iter().map(|(_, v)| v).collect() })
}

const ALPHAS: &[&str] = &["1", "2", "5", "2/3", "3/2", "7/4", "(0+1*sqrt(2))/1", "(1+1*sqrt(5))/2"];

fn rand_alpha(rng: &mut ChaCha8Rng) -> ExactReal {
    ALPHAS.choose(rng).expect("nonempty").parse().expect("valid literal")
}

fn rand_rational_alpha(rng: &mut ChaCha8Rng) -> ExactReal {
    ALPHAS[..6].choose(rng).expect("nonempty").parse().expect("valid literal")
}

fn rand_exp(rng: &mut ChaCha8Rng, n: usize, hi: u64) -> Exponent {
    (0..n).map(|_| rng.gen_range(0..=hi)).collect()
}

fn rand_poly(rng: &mut ChaCha8Rng, n: usize) -> SupportPoly {
    let k = rng.gen_range(1..=3);
    SupportPoly::new(n, (0..k).map(|_| rand_exp(rng, n, 4))).expect("dimensions agree")
}

fn rand_dv(rng: &mut ChaCha8Rng, n: usize) -> Filtration {
    let s = rng.gen_range(1..=3);
    let pairs = (0..s)
        .map(|_| {
            let w = (0..n).map(|_| rng.gen_range(1..=5)).collect();
            let a = ExactReal::ratio(rng.gen_range(1..=6), rng.gen_range(1..=3)).expect("nonzero denominator");
            (MonomialValuation::new(w).expect("positive weights"), a)
        })
        .collect();
    Filtration::discrete_valued(pairs).expect("valid pairs")
}

fn rand_ideal(rng: &mut ChaCha8Rng, n: usize, primary: bool) -> MonomialIdeal {
    let mut gens: Vec<Exponent> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut e = rand_exp(rng, n, 3);
            if e.iter().all(|&x| x == 0) {
                e[rng.gen_range(0..n)] = 1;
            }
            e
        })
        .collect();
    if primary {
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = rng.gen_range(1..=4);
            gens.push(e);
        }
    }
    MonomialIdeal::new(n, gens).expect("dimensions agree")
}

/// A random filtration with an exact `ν̄`.
fn rand_closed(rng: &mut ChaCha8Rng, n: usize) -> Filtration {
    let base = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            rand_dv(rng, n)
        } else {
            let primary = rng.gen_bool(0.5);
            Filtration::adic(rand_ideal(rng, n, primary))
        }
    };
    match rng.gen_range(0..4) {
        0 if n == 1 => Filtration::stair_one_var(rand_alpha(rng), rng.gen_range(0..=3)).expect("alpha > 0"),
        1 => base(rng).twist(rand_alpha(rng)).expect("alpha > 0"),
        _ => base(rng),
    }
}

/// The first `h` levels of `f` as an explicit table.
fn truncate(f: &Filtration, h: u64) -> Result<Filtration> {
    let levels = (1..=h).map(|m| Ok((m, f.level(m)?))).collect::<Result<Vec<_>>>()?;
    Filtration::table(f.n(), h, levels)
}

fn record_f(inputs: &mut Vec<Value>, name: &str, f: &Filtration) {
    inputs.push(json!({ name: filtration_to_json(f) }));
}

fn record_poly(inputs: &mut Vec<Value>, name: &str, p: &SupportPoly) {
    inputs.push(json!({ name: p.support().iter().collect::<Vec<_>>() }));
}

fn nubar_exact(f: &Filtration, p: &SupportPoly) -> Result<ExtReal> {
    Ok(samuel::nubar(f, p)?.value)
}

fn lt(a: &ExtReal, b: &ExtReal) -> Result<bool> {
    Ok(a.try_cmp(b)? == Ordering::Less)
}

/// `ν̄(f^k) = k·ν̄(f)` and `ν̄(f+g) >= min(ν̄(f), ν̄(g))`.
fn homogeneity(rng: &mut ChaCha8Rng, inputs: &mut Vec<Value>) -> Result<Option<String>> {
    let n = rng.gen_range(1..=3);
    let f = rand_closed(rng, n);
    let (p, q) = (rand_poly(rng, n), rand_poly(rng, n));
    record_f(inputs, "filtration", &f);
    record_poly(inputs, "f", &p);
    record_poly(inputs, "g", &q);
    let vp = nubar_exact(&f, &p)?;
    for k in 2..=5u64 {
        let lhs = nubar_exact(&f, &p.pow(k))?;
        let rhs = vp.mul_real(&ExactReal::from(k))?;
        if lhs != rhs {
            return Ok(Some(format!("nubar(f^{k}) = {lhs}, {k}·nubar(f) = {rhs}")));
        }
    }
    let vq = nubar_exact(&f, &q)?;
    let sum = nubar_exact(&f, &p.add(&q)?)?;
    let floor = ExtReal::min_of([vp.clone(), vq.clone()])?;
    if lt(&sum, &floor)? {
        return Ok(Some(format!("nubar(f+g) = {sum} < min({vp}, {vq})")));
    }
    Ok(None)
}

fn order_value(o: Order) -> Option<u64> {
    o.lower()
}

/// `ν(fg) >= ν(f) + ν(g)` and `ν(f+g) >= min(ν(f), ν(g))`, tables included.
fn superadditivity(rng: &mut ChaCha8Rng, inputs: &mut Vec<Value>) -> Result<Option<String>> {
    let n = rng.gen_range(1..=3);
    let mut f = rand_closed(rng, n);
    if rng.gen_bool(0.25) {
        f = truncate(&f, 6)?;
    }
    let (p, q) = (rand_poly(rng, n), rand_poly(rng, n));
    record_f(inputs, "filtration", &f);
    record_poly(inputs, "f", &p);
    record_poly(inputs, "g", &q);
    let (op, oq) = (f.order(&p)?, f.order(&q)?);
    let prod = f.order(&p.mul(&q)?)?;
    // a table can only certify values up to its horizon
    let cap = f.horizon().unwrap_or(u64::MAX);
    let need = match (order_value(op), order_value(oq)) {
        (Some(a), Some(b)) => Some(a.saturating_add(b).min(cap)),
        _ => None,
    };
    let ok = match (prod, need) {
        (Order::Infinite, _) | (Order::AtLeast(_), _) => true,
        (Order::Finite(x), Some(y)) => x >= y,
        (Order::Finite(_), None) => false,
    };
    if !ok {
        return Ok(Some(format!("order(fg) = {prod}, order(f) = {op}, order(g) = {oq}")));
    }
    let sum = f.order(&p.add(&q)?)?;
    let floor = op.min(oq);
    let ok = match (order_value(sum), order_value(floor)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y || matches!(sum, Order::AtLeast(_)),
    };
    if !ok {
        return Ok(Some(format!("order(f+g) = {sum} < min({op}, {oq})")));
    }
    Ok(None)
}

/// A pair `F ⊆ G` levelwise, built from one of several constructions.
fn rand_nested(rng: &mut ChaCha8Rng, n: usize) -> Result<(Filtration, Filtration)> {
    Ok(match rng.gen_range(0..4) {
        0 => {
            let f = rand_dv(rng, n);
            let Filtration::DiscreteValued(pairs) = &f else { unreachable!() };
            let mut sub: Vec<_> = pairs.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            if sub.is_empty() {
                sub.push(pairs[0].clone());
            }
            (f.clone(), Filtration::discrete_valued(sub)?)
        }
        1 => {
            let i = rand_ideal(rng, n, false);
            let extra = rand_ideal(rng, n, false);
            (Filtration::adic(i.clone()), Filtration::adic(i.sum(&extra)?))
        }
        2 => {
            let base = if rng.gen_bool(0.5) { rand_dv(rng, n) } else { Filtration::adic(rand_ideal(rng, n, false)) };
            let (a, b) = (rand_rational_alpha(rng), rand_rational_alpha(rng));
            let (hi, lo) = if a.try_cmp(&b)? == Ordering::Less { (b, a) } else { (a, b) };
            (base.twist(hi)?, base.twist(lo)?)
        }
        _ => {
            let alpha = rand_alpha(rng);
            let (c1, c2) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let f = Filtration::stair_one_var(alpha.clone(), c1.max(c2))?;
            let g = Filtration::stair_one_var(alpha, c1.min(c2))?;
            (f, g)
        }
    })
}

/// `F ⊆ G` implies `ν_F <= ν_G` and `ν̄_F <= ν̄_G`.
fn monotonicity(rng: &mut ChaCha8Rng, inputs: &mut Vec<Value>) -> Result<Option<String>> {
    let n = rng.gen_range(1..=3);
    let (f, g) = rand_nested(rng, n)?;
    let p = rand_poly(rng, f.n());
    record_f(inputs, "smaller", &f);
    record_f(inputs, "larger", &g);
    record_poly(inputs, "f", &p);
    for m in 1..=4 {
        if !f.level(m)?.is_subset(&g.level(m)?) {
            return Ok(Some(format!("generated pair is not nested at level {m}")));
        }
    }
    let (of, og) = (f.order(&p)?, g.order(&p)?);
    let ok = match (order_value(of), order_value(og)) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    };
    if !ok {
        return Ok(Some(format!("order_F = {of} > order_G = {og}")));
    }
    let (nf, ng) = (nubar_exact(&f, &p)?, nubar_exact(&g, &p)?);
    if lt(&ng, &nf)? {
        return Ok(Some(format!("nubar_F = {nf} > nubar_G = {ng}")));
    }
    Ok(None)
}

/// `I_m ⊆ J_m ⊆ K_m` for the integral-closure filtration `J`, so that `J`
/// has the same `ν̄` as `F`; `J` is the closure of the powers for adic inputs
/// and `F` itself for discrete valued ones.
fn closure_stability(rng: &mut ChaCha8Rng, inputs: &mut Vec<Value>) -> Result<Option<String>> {
    const M: u64 = 3;
    let n = rng.gen_range(1..=2);
    let f = match rng.gen_range(0..4) {
        0 => rand_dv(rng, n),
        1 => Filtration::adic(rand_ideal(rng, n, true)),
        2 => Filtration::stair_one_var(rand_alpha(rng), rng.gen_range(0..=3))?,
        _ => Filtration::adic(rand_ideal(rng, n, true)).twist(rand_alpha(rng))?,
    };
    record_f(inputs, "filtration", &f);
    let ic = samuel::ic_filtration(&f, M, samuel::DEFAULT_R_MAX)?;
    for m in 1..=M {
        let (i, j, k) = (f.level(m)?, ic.table.level(m)?, samuel::k_level(&f, m)?);
        if !i.is_subset(&j) {
            return Ok(Some(format!("level {m}: I = {i} is not inside IC = {j}")));
        }
        if !j.is_subset(&k) {
            return Ok(Some(format!("level {m}: IC = {j} is not inside K = {k}")));
        }
        let expected = match &f {
            Filtration::Adic(a) => Some(a.power(m).integral_closure()?),
            Filtration::DiscreteValued(_) => Some(i.clone()),
            _ => None,
        };
        if let Some(e) = expected {
            if e != j {
                return Ok(Some(format!("level {m}: IC = {j}, expected {e}")));
            }
        }
    }
    Ok(None)
}

/// In one variable, `x^f t^n` is integral over `R[K]` for `K_m = (x^{⌈αm⌉})`
/// exactly when it already lies in `R[K]`.
fn k_integrally_closed(rng: &mut ChaCha8Rng, inputs: &mut Vec<Value>) -> Result<Option<String>> {
    let alpha = rand_alpha(rng);
    let c = rng.gen_range(0..=3);
    let n_deg = rng.gen_range(1..=20u64);
    let f_ord = rng.gen_range(0..=60u64);
    inputs.push(json!({"alpha": alpha.to_string(), "c": c, "f_ord": f_ord, "n": n_deg}));
    let b = ceil_mul(&alpha, n_deg)?;
    // the K family of the stair with offset c is the stair with offset 0
    let stair = Filtration::stair_one_var(alpha.clone(), c)?;
    let k = samuel::k_level(&stair, n_deg)?;
    let expected_k = MonomialIdeal::new(1, vec![vec![b]])?;
    if k != expected_k {
        return Ok(Some(format!("K level {n_deg} = {k}, expected {expected_k}")));
    }
    let r = samuel::rees_graded_integral_1var(&alpha, 0, f_ord, n_deg)?;
    if r.integral != (f_ord >= b) {
        return Ok(Some(format!("integral = {}, member = {}", r.integral, f_ord >= b)));
    }
    Ok(None)
}

/// `K(K(F)) = K(F)`: reading `ν̄` back off the table `K(F)` through powers
/// gives the same levels.
fn k_idempotence(rng: &mut ChaCha8Rng, inputs: &mut Vec<Value>) -> Result<Option<String>> {
    const H: u64 = 4;
    let n = rng.gen_range(1..=2);
    let f = rand_closed(rng, n);
    record_f(inputs, "filtration", &f);
    let k = samuel::k_filtration(&f, H)?;
    let in_k = |m: u64, e: &[u64]| k.level_contains(m, e);
    for m in 1..=H / 2 {
        let bounds = samuel::k_box(&f, &ExactReal::from(m))?;
        for _ in 0..6 {
            let e: Exponent = bounds.iter().map(|&b| rng.gen_range(0..=b + 1)).collect();
            inputs.push(json!({"level": m, "monomial": e}));
            let mut twice = false;
            for r in 1..=H / m {
                twice |= in_k(r * m, &scale_exp(&e, r))?;
            }
            let once = in_k(m, &e)?;
            if twice != once {
                return Ok(Some(format!("x^{e:?}: in K(K)_{m} = {twice}, in K_{m} = {once}")));
            }
            // ν_K(x^e) = ⌊ν̄(x^e)⌋ capped at the horizon
            let v = samuel::nubar_monomial_exact(&f, &e)?.expect("closed form");
            let expected = match &v {
                Extended::Infinity => H,
                Extended::Finite(x) => u64::try_from(x.floor()).unwrap_or(u64::MAX).min(H),
            };
            let got = k.monomial_order(&e)?.lower().unwrap_or(u64::MAX).min(H);
            if got != expected {
                return Ok(Some(format!("order in K of x^{e:?} is {got}, floor(nubar) = {expected}")));
            }
        }
    }
    Ok(None)
}
