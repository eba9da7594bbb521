//! Filtrations `R = I_0 ⊇ I_1 ⊇ ...` with `I_a·I_b ⊆ I_{a+b}`, their levels,
//! order functions and twists.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::{ceil_mul, floor_u64, ExactReal};
use crate::monalg::{Exponent, MonomialIdeal, NewtonPolyhedron, SupportPoly};
use crate::valuation::MonomialValuation;

/// Value of the order function `ν(f) = sup{m : f ∈ I_m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
    /// `f` lies in the last level a table knows about.
    AtLeast(u64),
}

impl Order {
    pub fn min(self, other: Order) -> Order {
        use Order::*;
        match (self, other) {
            (Infinite, o) | (o, Infinite) => o,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
            (Finite(a), AtLeast(h)) | (AtLeast(h), Finite(a)) => {
                if a < h {
                    Finite(a)
                } else {
                    AtLeast(h)
                }
            }
        }
    }

    /// A value guaranteed to be `<= ν`; `None` for `∞`.
    pub fn lower(self) -> Option<u64> {
        match self {
            Order::Finite(a) | Order::AtLeast(a) => Some(a),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(a) => write!(f, "{a}"),
            Order::Infinite => f.write_str("inf"),
            Order::AtLeast(h) => write!(f, ">= {h} (horizon)"),
        }
    }
}

/// The adic filtration `{I^m}` with a shared cache of computed powers.
#[derive(Clone)]
pub struct Adic {
    ideal: MonomialIdeal,
    powers: Arc<RwLock<Vec<MonomialIdeal>>>,
    np: Arc<OnceLock<Option<NewtonPolyhedron>>>,
}

impl Adic {
    fn new(ideal: MonomialIdeal) -> Self {
        let unit = MonomialIdeal::unit(ideal.n());
        Adic { ideal, powers: Arc::new(RwLock::new(vec![unit])), np: Arc::new(OnceLock::new()) }
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn power(&self, m: u64) -> MonomialIdeal {
        let m = m as usize;
        if let Some(p) = self.powers.read().expect("power cache lock").get(m) {
            return p.clone();
        }
        let mut cache = self.powers.write().expect("power cache lock");
        while cache.len() <= m {
            let next = cache.last().expect("I^0 is cached").product(&self.ideal).expect("same dimension");
            cache.push(next);
        }
        cache[m].clone()
    }

    /// Newton polyhedron of a proper nonzero ideal.
    pub fn newton(&self) -> Option<&NewtonPolyhedron> {
        self.np
            .get_or_init(|| {
                (!self.ideal.is_zero() && !self.ideal.is_unit())
                    .then(|| NewtonPolyhedron::of(&self.ideal).expect("proper nonzero ideal"))
            })
            .as_ref()
    }

    fn monomial_order(&self, e: &[u64]) -> Order {
        if self.ideal.is_unit() {
            return Order::Infinite;
        }
        if self.ideal.is_zero() {
            return Order::Finite(0);
        }
        // every generator of I^m has degree >= m·min|g|
        let min_deg = self.ideal.gens().iter().map(|g| g.iter().sum::<u64>()).min().unwrap_or(1).max(1);
        let bound = e.iter().sum::<u64>() / min_deg;
        let mut m = 0;
        while m < bound && self.power(m + 1).contains_monomial(e) {
            m += 1;
        }
        Order::Finite(m)
    }
}

impl PartialEq for Adic {
    fn eq(&self, other: &Self) -> bool {
        self.ideal == other.ideal
    }
}

impl fmt::Debug for Adic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Adic").field(&self.ideal).finish()
    }
}

/// A filtration given by explicit levels `I_1, ..., I_horizon`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    n: usize,
    levels: Vec<MonomialIdeal>, // index 0 is the unit ideal
}

impl Table {
    pub fn horizon(&self) -> u64 {
        (self.levels.len() - 1) as u64
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[MonomialIdeal] {
        &self.levels
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Filtration {
    Adic(Adic),
    DiscreteValued(Vec<(MonomialValuation, ExactReal)>),
    Twist { base: Box<Filtration>, alpha: ExactReal },
    StairOneVar { alpha: ExactReal, c: u64 },
    Table(Table),
}

fn require_positive(x: &ExactReal) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive(x.to_string()))
    }
}

/// Fails unless all values live in one field `Q(sqrt(d))`.
pub fn common_radicand<'a>(values: impl IntoIterator<Item = &'a ExactReal>) -> Result<()> {
    let mut seen: Option<&ExactReal> = None;
    for v in values {
        if let Some(d) = v.radicand() {
            match seen.and_then(|s| s.radicand()) {
                Some(e) if e != d => return Err(Error::MixedRadicals(e.to_string(), d.to_string())),
                Some(_) => {}
                None => seen = Some(v),
            }
        }
    }
    Ok(())
}

impl Filtration {
    pub fn adic(ideal: MonomialIdeal) -> Self {
        Filtration::Adic(Adic::new(ideal))
    }

    pub fn discrete_valued(pairs: Vec<(MonomialValuation, ExactReal)>) -> Result<Self> {
        let Some((first, _)) = pairs.first() else {
            return Err(Error::Empty("discrete valued filtration needs at least one pair".into()));
        };
        let n = first.n();
        for (v, a) in &pairs {
            if v.n() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.n() });
            }
            require_positive(a)?;
        }
        common_radicand(pairs.iter().map(|(_, a)| a))?;
        Ok(Filtration::DiscreteValued(pairs))
    }

    pub fn stair_one_var(alpha: ExactReal, c: u64) -> Result<Self> {
        require_positive(&alpha)?;
        Ok(Filtration::StairOneVar { alpha, c })
    }

    /// `I^(α)_m = I_{⌈αm⌉}`. Nested twists are kept as they are.
    pub fn twist(&self, alpha: ExactReal) -> Result<Self> {
        require_positive(&alpha)?;
        Ok(Filtration::Twist { base: Box::new(self.clone()), alpha })
    }

    /// `I^[α]`: scales every `a_i` by `α`. Only for discrete valued filtrations.
    pub fn bracket_twist(&self, alpha: &ExactReal) -> Result<Self> {
        require_positive(alpha)?;
        match self {
            Filtration::DiscreteValued(pairs) => {
                let scaled = pairs
                    .iter()
                    .map(|(v, a)| Ok((v.clone(), a.checked_mul(alpha)?)))
                    .collect::<Result<Vec<_>>>()?;
                Filtration::discrete_valued(scaled)
            }
            _ => Err(Error::NotDiscreteValued),
        }
    }

    /// A table from explicit levels `(m, I_m)` covering `1..=horizon`; the
    /// filtration axioms are checked up to the horizon.
    pub fn table(n: usize, horizon: u64, levels: Vec<(u64, MonomialIdeal)>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Invalid("table horizon must be positive".into()));
        }
        let mut slots: Vec<Option<MonomialIdeal>> = vec![None; horizon as usize + 1];
        for (m, ideal) in levels {
            if ideal.n() != n {
                return Err(Error::DimensionMismatch { expected: n, got: ideal.n() });
            }
            if m > horizon {
                return Err(Error::HorizonExceeded { requested: m, horizon });
            }
            if slots[m as usize].replace(ideal).is_some() {
                return Err(Error::Invalid(format!("level {m} given twice")));
            }
        }
        match &slots[0] {
            Some(i) if !i.is_unit() => return Err(Error::NotAFiltration("I_0 must be the unit ideal".into())),
            _ => slots[0] = Some(MonomialIdeal::unit(n)),
        }
        let levels = slots
            .into_iter()
            .enumerate()
            .map(|(m, s)| s.ok_or_else(|| Error::Invalid(format!("table is missing level {m}"))))
            .collect::<Result<Vec<_>>>()?;
        let h = horizon as usize;
        for m in 0..h {
            if !levels[m + 1].is_subset(&levels[m]) {
                return Err(Error::NotAFiltration(format!("I_{} is not contained in I_{}", m + 1, m)));
            }
        }
        for a in 1..=h / 2 {
            for b in a..=h - a {
                if !levels[a].product(&levels[b])?.is_subset(&levels[a + b]) {
                    return Err(Error::NotAFiltration(format!("I_{a}·I_{b} is not contained in I_{}", a + b)));
                }
            }
        }
        Ok(Filtration::Table(Table { n, levels }))
    }

    /// A table whose levels are known to form a filtration.
    pub(crate) fn table_trusted(n: usize, levels: Vec<MonomialIdeal>) -> Self {
        debug_assert!(levels.first().is_some_and(MonomialIdeal::is_unit));
        Filtration::Table(Table { n, levels })
    }

    /// Ambient number of variables.
    pub fn n(&self) -> usize {
        match self {
            Filtration::Adic(a) => a.ideal.n(),
            Filtration::DiscreteValued(pairs) => pairs[0].0.n(),
            Filtration::Twist { base, .. } => base.n(),
            Filtration::StairOneVar { .. } => 1,
            Filtration::Table(t) => t.n,
        }
    }

    /// Largest level that can be evaluated, if finite.
    pub fn horizon(&self) -> Option<u64> {
        match self {
            Filtration::Table(t) => Some(t.horizon()),
            Filtration::Twist { base, alpha } => {
                let h = base.horizon()?;
                Some(floor_u64(&ExactReal::from(h).checked_div(alpha).ok()?).ok()?)
            }
            _ => None,
        }
    }

    /// Whether ν̄ is computed exactly by a closed form.
    pub fn has_exact_nubar(&self) -> bool {
        match self {
            Filtration::Table(_) => false,
            Filtration::Twist { base, .. } => base.has_exact_nubar(),
            _ => true,
        }
    }

    fn check_dim(&self, k: usize) -> Result<()> {
        if k == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n(), got: k })
        }
    }

    /// `⌈m·a_i⌉` for every defining pair.
    pub(crate) fn dv_thresholds(pairs: &[(MonomialValuation, ExactReal)], m: u64) -> Result<Vec<u64>> {
        pairs.iter().map(|(_, a)| if m == 0 { Ok(0) } else { ceil_mul(a, m) }).collect()
    }

    /// The ideal `I_m`.
    pub fn level(&self, m: u64) -> Result<MonomialIdeal> {
        match self {
            Filtration::Adic(a) => Ok(a.power(m)),
            Filtration::DiscreteValued(pairs) => {
                let n = self.n();
                if m == 0 {
                    return Ok(MonomialIdeal::unit(n));
                }
                let ks = Self::dv_thresholds(pairs, m)?;
                let bounds: Vec<u64> = (0..n)
                    .map(|j| pairs.iter().zip(&ks).map(|((v, _), k)| k.div_ceil(&v.weights()[j])).max().unwrap_or(0))
                    .collect();
                MonomialIdeal::from_predicate(n, &bounds, |e| dv_member(pairs, &ks, e))
            }
            Filtration::Twist { base, alpha } => base.level(if m == 0 { 0 } else { ceil_mul(alpha, m)? }),
            Filtration::StairOneVar { alpha, c } => {
                if m == 0 {
                    return Ok(MonomialIdeal::unit(1));
                }
                MonomialIdeal::new(1, vec![vec![ceil_mul(alpha, m)? + c]])
            }
            Filtration::Table(t) => t
                .levels
                .get(m as usize)
                .cloned()
                .ok_or(Error::HorizonExceeded { requested: m, horizon: t.horizon() }),
        }
    }

    /// Whether `x^e ∈ I_m`, without building the ideal when avoidable.
    pub fn level_contains(&self, m: u64, e: &[u64]) -> Result<bool> {
        self.check_dim(e.len())?;
        if m == 0 {
            return Ok(true);
        }
        match self {
            Filtration::Adic(a) => Ok(match a.monomial_order(e) {
                Order::Finite(k) => k >= m,
                _ => true,
            }),
            Filtration::DiscreteValued(pairs) => Ok(dv_member(pairs, &Self::dv_thresholds(pairs, m)?, e)),
            Filtration::Twist { base, alpha } => base.level_contains(ceil_mul(alpha, m)?, e),
            Filtration::StairOneVar { alpha, c } => Ok(e[0] >= ceil_mul(alpha, m)? + c),
            Filtration::Table(t) => t
                .levels
                .get(m as usize)
                .map(|i| i.contains_monomial(e))
                .ok_or(Error::HorizonExceeded { requested: m, horizon: t.horizon() }),
        }
    }

    /// Whether `x^e` lies in the integral closure of `I_m`.
    pub fn level_closure_contains(&self, m: u64, e: &[u64]) -> Result<bool> {
        self.check_dim(e.len())?;
        if m == 0 {
            return Ok(true);
        }
        match self {
            Filtration::Adic(a) => Ok(match a.newton() {
                Some(np) => np.at_least(e, &num_rational::BigRational::from_integer(m.into())),
                None => a.ideal.is_unit(),
            }),
            // valuation ideals and principal ideals in one variable are integrally closed
            Filtration::DiscreteValued(_) | Filtration::StairOneVar { .. } => self.level_contains(m, e),
            Filtration::Twist { base, alpha } => base.level_closure_contains(ceil_mul(alpha, m)?, e),
            Filtration::Table(_) => {
                let level = self.level(m)?;
                if level.is_zero() {
                    return Ok(false);
                }
                Ok(match level.np_value_lp(e)? {
                    crate::exactnum::Extended::Finite(v) => v.try_cmp(&ExactReal::one())? != Ordering::Less,
                    crate::exactnum::Extended::Infinity => true,
                })
            }
        }
    }

    /// Order of a single monomial.
    pub fn monomial_order(&self, e: &[u64]) -> Result<Order> {
        self.check_dim(e.len())?;
        match self {
            Filtration::Adic(a) => Ok(a.monomial_order(e)),
            Filtration::DiscreteValued(pairs) => {
                let mut best = u64::MAX;
                for (v, a) in pairs {
                    let val = ExactReal::from(v.eval(e)?);
                    best = best.min(floor_u64(&val.checked_div(a)?)?);
                }
                Ok(Order::Finite(best))
            }
            Filtration::Twist { base, alpha } => {
                let shrink = |k: u64| -> Result<u64> { floor_u64(&ExactReal::from(k).checked_div(alpha)?) };
                Ok(match base.monomial_order(e)? {
                    Order::Finite(k) => Order::Finite(shrink(k)?),
                    Order::AtLeast(h) => Order::AtLeast(shrink(h)?),
                    Order::Infinite => Order::Infinite,
                })
            }
            Filtration::StairOneVar { alpha, c } => {
                if e[0] < *c {
                    return Ok(Order::Finite(0));
                }
                Ok(Order::Finite(floor_u64(&ExactReal::from(e[0] - c).checked_div(alpha)?)?))
            }
            Filtration::Table(t) => {
                let h = t.horizon();
                match (1..=h).rev().find(|&m| t.levels[m as usize].contains_monomial(e)) {
                    Some(m) if m == h => Ok(Order::AtLeast(h)),
                    Some(m) => Ok(Order::Finite(m)),
                    None => Ok(Order::Finite(0)),
                }
            }
        }
    }

    /// `ν(f) = sup{m : f ∈ I_m}`, the minimum over the support.
    pub fn order(&self, f: &SupportPoly) -> Result<Order> {
        self.check_dim(f.n())?;
        f.minimal_support().iter().try_fold(Order::Infinite, |acc, e| Ok(acc.min(self.monomial_order(e)?)))
    }

    /// `ν(f^k)`, using only the minimal support of the power.
    pub fn order_of_power(&self, f: &SupportPoly, k: u64) -> Result<Order> {
        self.check_dim(f.n())?;
        f.minimal_support_of_power(k)
            .iter()
            .try_fold(Order::Infinite, |acc, e| Ok(acc.min(self.monomial_order(e)?)))
    }

    /// Number of standard monomials of `I_m`.
    pub fn colength(&self, m: u64) -> Result<u64> {
        match self {
            Filtration::DiscreteValued(pairs) => dv_colength(pairs, &Self::dv_thresholds(pairs, m)?),
            _ => {
                let level = self.level(m)?;
                if !level.is_primary() {
                    return Err(Error::LevelNotPrimary { level: m });
                }
                crate::multiplicity::colength(&level)
            }
        }
    }
}

pub(crate) fn dv_member(pairs: &[(MonomialValuation, ExactReal)], ks: &[u64], e: &[u64]) -> bool {
    pairs.iter().zip(ks).all(|((v, _), &k)| v.weights().iter().zip(e).map(|(w, x)| w * x).sum::<u64>() >= k)
}

/// Counts points outside `{e : w_i·e >= k_i ∀i}` by summing, over all prefixes,
/// the number of admissible values of the last coordinate.
fn dv_colength(pairs: &[(MonomialValuation, ExactReal)], ks: &[u64]) -> Result<u64> {
    let n = pairs[0].0.n();
    let bounds: Vec<u64> = (0..n)
        .map(|j| pairs.iter().zip(ks).map(|((v, _), k)| k.div_ceil(&v.weights()[j])).max().unwrap_or(0))
        .collect();
    let last = n - 1;
    let prefix_bounds: Vec<u64> = bounds[..last].iter().map(|b| b.saturating_sub(1)).collect();
    let column = |prefix: &[u64]| -> u64 {
        pairs
            .iter()
            .zip(ks)
            .map(|((v, _), &k)| {
                let w = v.weights();
                let used: u64 = w[..last].iter().zip(prefix).map(|(a, b)| a * b).sum();
                k.saturating_sub(used).div_ceil(w[last])
            })
            .max()
            .unwrap_or(0)
    };
    if last == 0 {
        return Ok(column(&[]));
    }
    if bounds[..last].iter().any(|&b| b == 0) {
        return Ok(0);
    }
    let cols = crate::monalg::eval_box(&prefix_bounds, column)?;
    cols.iter().try_fold(0u64, |acc, &c| acc.checked_add(c).ok_or(Error::Overflow))
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filtration::Adic(a) => write!(f, "adic({})", a.ideal),
            Filtration::DiscreteValued(pairs) => {
                let parts: Vec<String> = pairs.iter().map(|(v, a)| format!("({v}, {a})")).collect();
                write!(f, "dv[{}]", parts.join(", "))
            }
            Filtration::Twist { base, alpha } => write!(f, "twist({base}, {alpha})"),
            Filtration::StairOneVar { alpha, c } => write!(f, "stair1({alpha}, {c})"),
            Filtration::Table(t) => write!(f, "table(n={}, horizon={})", t.n, t.horizon()),
        }
    }
}

/// Convenience: `x^e` as a support polynomial.
pub fn mono(e: &[u64]) -> SupportPoly {
    SupportPoly::monomial(e.to_vec())
}

/// All exponents `e` with `|e| <= d` in `n` variables, graded then lexicographic.
pub fn exponents_up_to_degree(n: usize, d: u64) -> Vec<Exponent> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u64, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(n, left - x, cur, out);
            cur.pop();
        }
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u64>(), std::cmp::Reverse(e.clone())));
    out
}
