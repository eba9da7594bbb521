//! Monomial ideals, support polynomials and Newton polyhedra.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{ExactReal, ExtReal, Extended};
use crate::lp::{self, Constraint, LpOutcome, Rel, Sense};

/// Exponent vector of a monomial `x^e`.
pub type Exponent = Vec<u64>;

/// Largest box (number of lattice points) any enumeration will visit.
pub const MAX_BOX_POINTS: u64 = 60_000_000;

/// `a <= b` componentwise.
pub fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn add_exp(a: &[u64], b: &[u64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_exp(a: &[u64], k: u64) -> Exponent {
    a.iter().map(|x| x * k).collect()
}

pub fn degree(a: &[u64]) -> u64 {
    a.iter().sum()
}

/// Reduces a set of exponents to its minimal elements, sorted lexicographically.
pub fn minimalize(mut pts: Vec<Exponent>) -> Vec<Exponent> {
    // lexicographic order is a linear extension of ≤, so a point can only be
    // divided by points that precede it
    pts.sort();
    pts.dedup();
    let mut kept: Vec<Exponent> = Vec::with_capacity(pts.len());
    for p in pts {
        if !kept.iter().any(|k| divides(k, &p)) {
            kept.push(p);
        }
    }
    kept
}

fn box_size(bounds: &[u64]) -> Result<u64> {
    bounds.iter().try_fold(1u64, |acc, &b| {
        let size = acc.checked_mul(b + 1).ok_or(Error::Overflow)?;
        if size > MAX_BOX_POINTS {
            Err(Error::Overflow)
        } else {
            Ok(size)
        }
    })
}

fn unrank(mut idx: u64, bounds: &[u64]) -> Exponent {
    let mut e = vec![0; bounds.len()];
    for j in (0..bounds.len()).rev() {
        let side = bounds[j] + 1;
        e[j] = idx % side;
        idx /= side;
    }
    e
}

/// All lattice points of `∏ [0, bounds_j]` in lexicographic order.
pub fn box_points(bounds: &[u64]) -> Result<Vec<Exponent>> {
    let size = box_size(bounds)?;
    Ok((0..size).map(|i| unrank(i, bounds)).collect())
}

/// Evaluates an upward-closed predicate on a box, returning the flags in
/// lexicographic (row-major) order.
pub fn eval_box<T, F>(bounds: &[u64], pred: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[u64]) -> T + Sync,
{
    let size = box_size(bounds)?;
    Ok((0..size).into_par_iter().map(|i| pred(&unrank(i, bounds))).collect())
}

/// Minimal elements of `{e in box : flags(e)}` for flags produced by [`eval_box`].
pub fn minimal_in_box(bounds: &[u64], flags: &[bool]) -> Vec<Exponent> {
    let n = bounds.len();
    let mut strides = vec![1u64; n];
    for j in (0..n.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * (bounds[j + 1] + 1);
    }
    (0..flags.len() as u64)
        .into_par_iter()
        .filter_map(|i| {
            if !flags[i as usize] {
                return None;
            }
            let e = unrank(i, bounds);
            let minimal = (0..n).all(|j| e[j] == 0 || !flags[(i - strides[j]) as usize]);
            minimal.then_some(e)
        })
        .collect()
}

/// A monomial ideal given by its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Exponent>,
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| render_monomial(g)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Renders `x^e` as `x1^2*x2` (or `x^3` in one variable, `1` for the unit).
pub fn render_monomial(e: &[u64]) -> String {
    let one_var = e.len() == 1;
    let factors: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(j, &k)| {
            let var = if one_var { "x".to_string() } else { format!("x{}", j + 1) };
            if k == 1 {
                var
            } else {
                format!("{var}^{k}")
            }
        })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

impl MonomialIdeal {
    pub fn new(n: usize, gens: Vec<Exponent>) -> Result<Self> {
        for g in &gens {
            if g.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: g.len() });
            }
        }
        Ok(Self::from_minimalized(n, minimalize(gens)))
    }

    /// Wraps generators already known to be a sorted antichain.
    pub(crate) fn from_minimalized(n: usize, gens: Vec<Exponent>) -> Self {
        MonomialIdeal { n, gens }
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal { n, gens: vec![vec![0; n]] }
    }

    /// The ideal of all `x^e` in a box satisfying an upward-closed predicate.
    /// The box must contain every minimal generator.
    pub fn from_predicate<F>(n: usize, bounds: &[u64], pred: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> bool + Sync,
    {
        if bounds.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: bounds.len() });
        }
        let flags = eval_box(bounds, pred)?;
        let mut gens = minimal_in_box(bounds, &flags);
        gens.sort();
        Ok(MonomialIdeal { n, gens })
    }

    /// Like [`MonomialIdeal::from_predicate`] for a predicate that can fail.
    pub fn try_from_predicate<F>(n: usize, bounds: &[u64], pred: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> Result<bool> + Sync,
    {
        if bounds.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: bounds.len() });
        }
        let flags = eval_box(bounds, pred)?.into_iter().collect::<Result<Vec<bool>>>()?;
        let mut gens = minimal_in_box(bounds, &flags);
        gens.sort();
        Ok(MonomialIdeal { n, gens })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&x| x == 0))
    }

    fn check_dim(&self, k: usize) -> Result<()> {
        if k == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, got: k })
        }
    }

    pub fn contains_monomial(&self, e: &[u64]) -> bool {
        self.gens.iter().any(|g| divides(g, e))
    }

    pub fn contains(&self, f: &SupportPoly) -> Result<bool> {
        self.check_dim(f.n())?;
        Ok(f.support().iter().all(|e| self.contains_monomial(e)))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.gens.iter().all(|g| other.contains_monomial(g))
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        let mut pts = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                pts.push(add_exp(a, b));
            }
        }
        Ok(MonomialIdeal { n: self.n, gens: minimalize(pts) })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        let mut pts = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                pts.push(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
            }
        }
        Ok(MonomialIdeal { n: self.n, gens: minimalize(pts) })
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        let pts = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(MonomialIdeal { n: self.n, gens: minimalize(pts) })
    }

    /// `I^m`; `I^0` is the unit ideal.
    pub fn power(&self, m: u64) -> Self {
        let mut acc = MonomialIdeal::unit(self.n);
        for _ in 0..m {
            acc = acc.product(self).expect("same ambient dimension");
        }
        acc
    }

    /// Componentwise maximum of the generators.
    pub fn generator_bounds(&self) -> Vec<u64> {
        let mut b = vec![0; self.n];
        for g in &self.gens {
            for (bj, gj) in b.iter_mut().zip(g) {
                *bj = (*bj).max(*gj);
            }
        }
        b
    }

    /// Exponents of the pure powers `x_j^{b_j}` in the ideal, if it is primary
    /// to the maximal ideal.
    pub fn pure_power_bounds(&self) -> Result<Vec<u64>> {
        (0..self.n)
            .map(|j| {
                self.gens
                    .iter()
                    .filter(|g| g.iter().enumerate().all(|(k, &x)| k == j || x == 0))
                    .map(|g| g[j])
                    .min()
                    .ok_or(Error::NotPrimary(j + 1))
            })
            .collect()
    }

    pub fn is_primary(&self) -> bool {
        self.pure_power_bounds().is_ok()
    }

    pub fn newton_polyhedron(&self) -> Result<NewtonPolyhedron> {
        NewtonPolyhedron::of(self)
    }

    /// The integral closure, i.e. all `x^e` with `e` in the Newton polyhedron.
    pub fn integral_closure(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        if self.is_unit() {
            return Ok(self.clone());
        }
        let np = self.newton_polyhedron()?;
        // a minimal element e of the closure satisfies e <= max_g g componentwise
        let bounds = self.generator_bounds();
        Self::from_predicate(self.n, &bounds, |e| np.at_least(e, &BigRational::one()))
    }

    /// `ν̄_I(x^e)`: the largest `t` with `e ∈ t·NP(I)`.
    pub fn np_value(&self, e: &[u64]) -> Result<ExactReal> {
        self.check_dim(e.len())?;
        if self.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        if self.is_unit() {
            return Err(Error::UnitIdeal);
        }
        Ok(ExactReal::from_rational(self.newton_polyhedron()?.value(e)))
    }

    /// `ν̄_I(x^e)` via the linear program `max Σμ s.t. Σ μ_g g <= e, μ >= 0`.
    pub fn np_value_lp(&self, e: &[u64]) -> Result<ExtReal> {
        self.check_dim(e.len())?;
        if self.is_zero() {
            return Ok(Extended::Finite(ExactReal::zero()));
        }
        let k = self.gens.len();
        let cons: Vec<Constraint<BigRational>> = (0..self.n)
            .map(|j| {
                Constraint::new(
                    self.gens.iter().map(|g| BigRational::from_integer(g[j].into())).collect(),
                    Rel::Le,
                    BigRational::from_integer(e[j].into()),
                )
            })
            .collect();
        match lp::simplex(Sense::Max, &vec![BigRational::one(); k], &cons) {
            LpOutcome::Optimal { value, .. } => Ok(Extended::Finite(ExactReal::from_rational(value))),
            LpOutcome::Unbounded => Ok(Extended::Infinity),
            LpOutcome::Infeasible => unreachable!("mu = 0 is feasible"),
        }
    }
}

/// A polynomial remembered only through its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportPoly {
    n: usize,
    support: BTreeSet<Exponent>,
}

impl SupportPoly {
    pub fn zero(n: usize) -> Self {
        SupportPoly { n, support: BTreeSet::new() }
    }

    pub fn monomial(e: Exponent) -> Self {
        SupportPoly { n: e.len(), support: BTreeSet::from([e]) }
    }

    pub fn new(n: usize, support: impl IntoIterator<Item = Exponent>) -> Result<Self> {
        let support: BTreeSet<Exponent> = support.into_iter().collect();
        for e in &support {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.len() });
            }
        }
        Ok(SupportPoly { n, support })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &BTreeSet<Exponent> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Support of `f + g`, assuming no cancellation.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(SupportPoly { n: self.n, support: self.support.union(&other.support).cloned().collect() })
    }

    /// Support of `f·g`, assuming no cancellation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut support = BTreeSet::new();
        for a in &self.support {
            for b in &other.support {
                support.insert(add_exp(a, b));
            }
        }
        Ok(SupportPoly { n: self.n, support })
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = SupportPoly::monomial(vec![0; self.n]);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ambient dimension");
        }
        acc
    }

    /// Minimal support exponents. Every monotone invariant (order, ν̄, valuations)
    /// is a minimum over these.
    pub fn minimal_support(&self) -> Vec<Exponent> {
        minimalize(self.support.iter().cloned().collect())
    }

    /// Minimal support exponents of `f^k`, without expanding the full power.
    pub fn minimal_support_of_power(&self, k: u64) -> Vec<Exponent> {
        let base = self.minimal_support();
        let mut acc = vec![vec![0; self.n]];
        for _ in 0..k {
            let mut next = Vec::with_capacity(acc.len() * base.len());
            for a in &acc {
                for b in &base {
                    next.push(add_exp(a, b));
                }
            }
            acc = minimalize(next);
        }
        if self.is_zero() && k > 0 {
            Vec::new()
        } else {
            acc
        }
    }
}

/// One facet `N·y >= h` of a Newton polyhedron, with `N` a primitive
/// nonnegative integer vector and `h > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub rhs: BigInt,
}

/// Newton polyhedron `conv(gens) + R^n_{>=0}` described by its compact-side facets.
#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    facets: Vec<Facet>,
    small: Option<Vec<(Vec<i128>, i128)>>,
}

fn subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < n - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, k, n, cur, out);
            cur.pop();
        }
    }
    rec(0, k, n, &mut cur, &mut out);
    out
}

impl NewtonPolyhedron {
    /// Facets come from the vertices of the dual region
    /// `{y >= 0 : g·y >= 1 for every generator g}`; each vertex `y` scaled to a
    /// primitive integer vector is a facet normal.
    pub fn of(ideal: &MonomialIdeal) -> Result<Self> {
        if ideal.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        if ideal.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let n = ideal.n;
        let gens = Self::vertex_generators(ideal);
        let q = |x: u64| BigRational::from_integer(x.into());
        // rows: generators (g·y = 1) then coordinates (y_j = 0)
        let mut rows: Vec<(Vec<BigRational>, BigRational)> =
            gens.iter().map(|g| (g.iter().map(|&x| q(x)).collect(), BigRational::one())).collect();
        for j in 0..n {
            let mut r = vec![BigRational::zero(); n];
            r[j] = BigRational::one();
            rows.push((r, BigRational::zero()));
        }
        let candidates = subsets(rows.len(), n);
        let mut facets: Vec<Facet> = candidates
            .par_iter()
            .filter_map(|choice| {
                let a: Vec<Vec<BigRational>> = choice.iter().map(|&i| rows[i].0.clone()).collect();
                let b: Vec<BigRational> = choice.iter().map(|&i| rows[i].1.clone()).collect();
                let y = lp::solve(&a, &b)?;
                if y.iter().any(|v| v.is_negative()) {
                    return None;
                }
                let feasible = gens.iter().all(|g| {
                    let s: BigRational = g.iter().zip(&y).map(|(&gj, yj)| q(gj) * yj).sum();
                    s >= BigRational::one()
                });
                feasible.then(|| Self::facet_from_vertex(&y))
            })
            .collect();
        facets.sort();
        facets.dedup();
        let small = facets
            .iter()
            .map(|f| {
                let nn: Option<Vec<i128>> = f.normal.iter().map(|v| v.to_i128()).collect();
                Some((nn?, f.rhs.to_i128()?))
            })
            .collect();
        Ok(NewtonPolyhedron { facets, small })
    }

    /// Generators that are not in the Newton polyhedron of the others.
    fn vertex_generators(ideal: &MonomialIdeal) -> Vec<Exponent> {
        if ideal.gens.len() <= ideal.n + 1 {
            return ideal.gens.clone();
        }
        ideal
            .gens
            .iter()
            .enumerate()
            .filter(|(i, g)| {
                let others: Vec<Exponent> = ideal
                    .gens
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k != i)
                    .map(|(_, h)| h.clone())
                    .collect();
                let rest = MonomialIdeal::from_minimalized(ideal.n, others);
                match rest.np_value_lp(g).expect("dimensions agree") {
                    Extended::Finite(v) => v.try_cmp(&ExactReal::one()).expect("rational") == std::cmp::Ordering::Less,
                    Extended::Infinity => false,
                }
            })
            .map(|(_, g)| g.clone())
            .collect()
    }

    fn facet_from_vertex(y: &[BigRational]) -> Facet {
        let den = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = y.iter().map(|v| (v * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(den.clone(), |acc, v| acc.gcd(v));
        Facet { normal: ints.iter().map(|v| v / &g).collect(), rhs: den / g }
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// `min over facets of N·e / h`.
    pub fn value(&self, e: &[u64]) -> BigRational {
        self.facets
            .iter()
            .map(|f| {
                let s: BigInt = f.normal.iter().zip(e).map(|(nj, &ej)| nj * BigInt::from(ej)).sum();
                BigRational::new(s, f.rhs.clone())
            })
            .min()
            .expect("a proper nonzero ideal has at least one facet")
    }

    /// `value(e) >= t` using integer arithmetic only.
    pub fn at_least(&self, e: &[u64], t: &BigRational) -> bool {
        if let (Some(small), Some(num), Some(den)) = (&self.small, t.numer().to_i128(), t.denom().to_i128()) {
            let ok = small.iter().try_fold(true, |acc, (nn, h)| {
                let mut s: i128 = 0;
                for (a, &b) in nn.iter().zip(e) {
                    s = s.checked_add(a.checked_mul(b as i128)?)?;
                }
                Some(acc && s.checked_mul(den)? >= num.checked_mul(*h)?)
            });
            if let Some(ok) = ok {
                return ok;
            }
        }
        self.value(e) >= *t
    }

    /// `value(e) >= t` for an exact real threshold.
    pub fn at_least_real(&self, e: &[u64], t: &ExactReal) -> bool {
        match t.as_rational() {
            Some(q) => self.at_least(e, q),
            None => {
                let v = ExactReal::from_rational(self.value(e));
                v.try_cmp(t).expect("rational against surd") != std::cmp::Ordering::Less
            }
        }
    }
}

/// `Some(e - f)` when `f <= e`.
pub fn sub_exp(e: &[u64], f: &[u64]) -> Option<Exponent> {
    e.iter().zip(f).map(|(a, b)| a.checked_sub(*b)).collect()
}
