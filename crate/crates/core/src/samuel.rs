//! The asymptotic Samuel function `ν̄(f) = lim ν(f^n)/n`, the saturated
//! filtration `K`, the integral-closure filtration `IC`, and a decision
//! procedure for graded integrality in one variable.

use std::cmp::Ordering;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ceil_mul, ExactReal, ExtReal, Extended};
use crate::filtration::{Filtration, Order};
use crate::monalg::{Exponent, MonomialIdeal, SupportPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NubarKind {
    Exact,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NubarResult {
    pub value: ExtReal,
    pub kind: NubarKind,
    /// The `n` achieving `ν(f^n)/n` for lower bounds.
    pub witness_n: Option<u64>,
    /// Set when a table horizon cut the search short.
    pub horizon_limited: bool,
}

impl NubarResult {
    fn exact(value: ExtReal) -> Self {
        NubarResult { value, kind: NubarKind::Exact, witness_n: None, horizon_limited: false }
    }
}

impl fmt::Display for NubarResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NubarKind::Exact => write!(f, "{} (exact)", self.value),
            NubarKind::LowerBound => {
                write!(f, ">= {} (witness n={})", self.value, self.witness_n.unwrap_or(1))?;
                if self.horizon_limited {
                    f.write_str(" [horizon limited]")?;
                }
                Ok(())
            }
        }
    }
}

/// Default `n_max` used when `ν̄` on a table has to be estimated.
pub const TABLE_ESTIMATE_N: u64 = 64;

/// `ν̄` of a single monomial for the closed-form engines; `None` for tables.
pub fn nubar_monomial_exact(f: &Filtration, e: &[u64]) -> Result<Option<ExtReal>> {
    if e.len() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: e.len() });
    }
    Ok(Some(match f {
        Filtration::Adic(a) => {
            if a.ideal().is_unit() {
                Extended::Infinity
            } else if a.ideal().is_zero() {
                Extended::Finite(ExactReal::zero())
            } else {
                let np = a.newton().expect("proper nonzero ideal");
                Extended::Finite(ExactReal::from_rational(np.value(e)))
            }
        }
        Filtration::DiscreteValued(pairs) => {
            let mut best: Option<ExactReal> = None;
            for (v, a) in pairs {
                let r = ExactReal::from(v.eval(e)?).checked_div(a)?;
                best = match best {
                    Some(b) if b.try_cmp(&r)? != Ordering::Greater => Some(b),
                    _ => Some(r),
                };
            }
            Extended::Finite(best.expect("nonempty pairs"))
        }
        Filtration::StairOneVar { alpha, .. } => Extended::Finite(ExactReal::from(e[0]).checked_div(alpha)?),
        Filtration::Twist { base, alpha } => match nubar_monomial_exact(base, e)? {
            Some(v) => v.div_real(alpha)?,
            None => return Ok(None),
        },
        Filtration::Table(_) => return Ok(None),
    }))
}

/// `ν̄_F(f)`: exact for every closed-form engine, a lower bound for tables.
pub fn nubar(f: &Filtration, poly: &SupportPoly) -> Result<NubarResult> {
    if poly.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: poly.n() });
    }
    if poly.is_zero() {
        return Ok(NubarResult::exact(Extended::Infinity));
    }
    if !f.has_exact_nubar() {
        let n_max = f.horizon().unwrap_or(TABLE_ESTIMATE_N).max(1);
        return nubar_estimate(f, poly, n_max);
    }
    let mut best = Extended::Infinity;
    for e in poly.minimal_support() {
        let v = nubar_monomial_exact(f, &e)?.expect("closed-form engine");
        if v.try_cmp(&best)? == Ordering::Less {
            best = v;
        }
    }
    Ok(NubarResult::exact(best))
}

/// `max_{1 <= n <= n_max} ν(f^n)/n`, a lower bound of `ν̄(f)` by superadditivity.
pub fn nubar_estimate(f: &Filtration, poly: &SupportPoly, n_max: u64) -> Result<NubarResult> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be positive".into()));
    }
    if poly.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: poly.n() });
    }
    let mut best: Option<(ExactReal, u64)> = None;
    let mut horizon_limited = false;
    for n in 1..=n_max {
        let order = f.order_of_power(poly, n)?;
        let k = match order {
            Order::Infinite => {
                return Ok(NubarResult {
                    value: Extended::Infinity,
                    kind: NubarKind::LowerBound,
                    witness_n: Some(n),
                    horizon_limited: false,
                })
            }
            Order::Finite(k) => k,
            Order::AtLeast(h) => {
                horizon_limited = true;
                h
            }
        };
        let ratio = ExactReal::ratio(k, n)?;
        if best.as_ref().is_none_or(|(b, _)| ratio.try_cmp(b).expect("rationals") == Ordering::Greater) {
            best = Some((ratio, n));
        }
        if horizon_limited {
            break;
        }
    }
    let (value, witness) = best.expect("n_max >= 1");
    Ok(NubarResult {
        value: Extended::Finite(value),
        kind: NubarKind::LowerBound,
        witness_n: Some(witness),
        horizon_limited,
    })
}

/// Box `∏[0, b_j]` containing every minimal generator of `{e : ν̄_F(e) >= t}`.
pub fn k_box(f: &Filtration, t: &ExactReal) -> Result<Vec<u64>> {
    let to_u64 = |x: num_bigint::BigInt| x.to_u64().ok_or(Error::Overflow);
    match f {
        Filtration::Adic(a) => {
            a.ideal().generator_bounds().iter().map(|&m| to_u64(t.mul_int(m).ceil().max(0.into()))).collect()
        }
        Filtration::DiscreteValued(pairs) => (0..f.n())
            .map(|j| {
                pairs.iter().try_fold(0u64, |acc, (v, a)| {
                    let need = t.checked_mul(a)?.div_int(v.weights()[j])?;
                    Ok(acc.max(to_u64(need.ceil().max(0.into()))?))
                })
            })
            .collect(),
        Filtration::StairOneVar { alpha, .. } => Ok(vec![to_u64(alpha.checked_mul(t)?.ceil().max(0.into()))?]),
        Filtration::Twist { base, alpha } => k_box(base, &t.checked_mul(alpha)?),
        Filtration::Table(_) => Err(Error::TableUnsupported),
    }
}

/// Whether `ν̄_F(x^e) >= t`, with an integer fast path for adic filtrations.
fn nubar_at_least(f: &Filtration, e: &[u64], t: &ExactReal) -> Result<bool> {
    if let Filtration::Adic(a) = f {
        if let Some(np) = a.newton() {
            return Ok(np.at_least_real(e, t));
        }
    }
    let v = nubar_monomial_exact(f, e)?.ok_or(Error::TableUnsupported)?;
    Ok(v.try_cmp(&Extended::Finite(t.clone()))? != Ordering::Less)
}

/// `K_m = {f : ν̄_F(f) >= m}` for a single level.
pub fn k_level(f: &Filtration, m: u64) -> Result<MonomialIdeal> {
    if !f.has_exact_nubar() {
        return Err(Error::TableUnsupported);
    }
    let t = ExactReal::from(m);
    let bounds = k_box(f, &t)?;
    MonomialIdeal::try_from_predicate(f.n(), &bounds, |e| nubar_at_least(f, e, &t))
}

/// The saturated filtration `K(F)` up to level `m_max`, as a table.
pub fn k_filtration(f: &Filtration, m_max: u64) -> Result<Filtration> {
    if m_max == 0 {
        return Err(Error::Invalid("m_max must be positive".into()));
    }
    if !f.has_exact_nubar() {
        return Err(Error::TableUnsupported);
    }
    let mut levels = vec![MonomialIdeal::unit(f.n())];
    let rest = (1..=m_max).into_par_iter().map(|m| k_level(f, m)).collect::<Result<Vec<_>>>()?;
    levels.extend(rest);
    Ok(Filtration::table_trusted(f.n(), levels))
}

/// Three-valued membership used for the integral-closure filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IcFiltration {
    /// Levels generated by the witnessed members.
    pub table: Filtration,
    /// For each level, minimal monomials whose membership stayed undecided.
    pub inconclusive: Vec<(u64, Vec<Exponent>)>,
    pub r_max: u64,
}

impl IcFiltration {
    pub fn is_conclusive(&self) -> bool {
        self.inconclusive.iter().all(|(_, v)| v.is_empty())
    }
}

pub const DEFAULT_R_MAX: u64 = 12;

/// Membership of `x^e` in `J_m = {f : f^r ∈ closure(I_{rm}) for some r}`.
pub fn ic_membership(f: &Filtration, m: u64, e: &[u64], r_max: u64) -> Result<Membership> {
    if m == 0 || f.level_contains(m, e)? {
        return Ok(Membership::In);
    }
    match f {
        Filtration::Adic(_) => {
            return Ok(if f.level_closure_contains(m, e)? { Membership::In } else { Membership::Out })
        }
        Filtration::DiscreteValued(_) => return Ok(Membership::Out),
        Filtration::StairOneVar { alpha, c } => {
            return Ok(if rees_graded_integral_1var(alpha, *c, e[0], m)?.integral {
                Membership::In
            } else {
                Membership::Out
            })
        }
        _ => {}
    }
    let exact = nubar_monomial_exact(f, e)?;
    if let Some(v) = &exact {
        // J_m ⊆ K_m
        if v.try_cmp(&Extended::Finite(ExactReal::from(m)))? == Ordering::Less {
            return Ok(Membership::Out);
        }
    }
    let horizon = f.horizon();
    for r in 1..=r_max {
        let rm = r.checked_mul(m).ok_or(Error::Overflow)?;
        if horizon.is_some_and(|h| rm > h) {
            break;
        }
        let re: Exponent = e.iter().map(|x| x * r).collect();
        if f.level_closure_contains(rm, &re)? {
            return Ok(Membership::In);
        }
    }
    if let Some(h) = horizon {
        // levels decrease, so x^{re} ∈ closure(I_{rm}) forces r·e into closure(I_h)
        let last = f.level(h)?;
        if !last.is_zero() && last.np_value_lp(e)? == Extended::Finite(ExactReal::zero()) {
            return Ok(Membership::Out);
        }
    }
    Ok(Membership::Inconclusive)
}

/// Box for level `m` of `IC(F)`: the pure powers of `I_m` (or its generator
/// bounds when it is not primary), enlarged by the `K` box when available.
fn ic_box(f: &Filtration, m: u64) -> Result<Vec<u64>> {
    let level = f.level(m)?;
    let mut b = level.pure_power_bounds().unwrap_or_else(|_| level.generator_bounds());
    if f.has_exact_nubar() {
        for (bj, kj) in b.iter_mut().zip(k_box(f, &ExactReal::from(m))?) {
            *bj = (*bj).max(kj);
        }
    }
    Ok(b)
}

/// The integral-closure filtration `IC(F)` up to level `m_max`.
pub fn ic_filtration(f: &Filtration, m_max: u64, r_max: u64) -> Result<IcFiltration> {
    if m_max == 0 {
        return Err(Error::Invalid("m_max must be positive".into()));
    }
    if let Some(h) = f.horizon() {
        if m_max > h {
            return Err(Error::HorizonExceeded { requested: m_max, horizon: h });
        }
    }
    let n = f.n();
    let per_level = (1..=m_max)
        .into_par_iter()
        .map(|m| -> Result<(MonomialIdeal, Vec<Exponent>)> {
            let bounds = ic_box(f, m)?;
            let flags = crate::monalg::eval_box(&bounds, |e| ic_membership(f, m, e, r_max))?
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let member: Vec<bool> = flags.iter().map(|s| *s == Membership::In).collect();
            let undecided: Vec<bool> = flags.iter().map(|s| *s != Membership::Out).collect();
            let gens = crate::monalg::minimal_in_box(&bounds, &member);
            let level = MonomialIdeal::new(n, gens)?;
            let open = crate::monalg::minimalize(
                crate::monalg::minimal_in_box(&bounds, &undecided)
                    .into_iter()
                    .filter(|e| !level.contains_monomial(e))
                    .collect(),
            );
            Ok((level, open))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut levels = vec![MonomialIdeal::unit(n)];
    let mut inconclusive = Vec::new();
    for (m, (level, open)) in (1..).zip(per_level) {
        levels.push(level);
        inconclusive.push((m, open));
    }
    Ok(IcFiltration { table: Filtration::table_trusted(n, levels), inconclusive, r_max })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rees1Result {
    pub integral: bool,
    /// Smallest `d >= 1` with `d·f_ord >= ⌈α·n·d⌉ + c`.
    pub witness_d: Option<u64>,
}

/// Whether `x^{f_ord} t^n` is integral over `R[I]` for `I_m = (x^{⌈αm⌉ + c})`.
///
/// That happens iff `d·f_ord >= ⌈αnd⌉ + c` for some `d >= 1`. If `f_ord > αn`
/// then `d >= (c+1)/(f_ord - αn)` works; if `f_ord < αn` no `d` does; if
/// `f_ord = αn` exactly, only `c = 0` works.
pub fn rees_graded_integral_1var(alpha: &ExactReal, c: u64, f_ord: u64, n: u64) -> Result<Rees1Result> {
    if !alpha.is_positive() {
        return Err(Error::NotPositive(alpha.to_string()));
    }
    let an = alpha.mul_int(n);
    let holds = |d: u64| -> Result<bool> { Ok(d * f_ord >= ceil_mul(alpha, n * d)? + c) };
    let found = |d: Option<u64>| Rees1Result { integral: d.is_some(), witness_d: d };
    match ExactReal::from(f_ord).try_cmp(&an)? {
        Ordering::Less => Ok(found(None)),
        Ordering::Equal => Ok(found((c == 0).then_some(1))),
        Ordering::Greater => {
            let gap = ExactReal::from(f_ord).checked_sub(&an)?;
            let bound = ExactReal::from(c + 1).checked_div(&gap)?.ceil().to_u64().ok_or(Error::Overflow)?.max(1);
            for d in 1..=bound {
                if holds(d)? {
                    return Ok(found(Some(d)));
                }
            }
            unreachable!("d = ⌈(c+1)/(f - αn)⌉ always satisfies the inequality")
        }
    }
}
