//! Colengths, multiplicities `e(F) = lim ℓ(R/I_n)·d!/n^d`, the values
//! `ν(F) = inf ν(I_n)/n`, and a monomial-valuation saturation report.

use std::cmp::Ordering;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::ExactReal;
use crate::filtration::Filtration;
use crate::lp::{self, Constraint, LpOutcome, Rel, Scalar, Sense};
use crate::monalg::{minimalize, Exponent, MonomialIdeal};
use crate::valuation::MonomialValuation;

/// Number of monomials outside a primary monomial ideal.
///
/// Sweeps the last coordinate: the slab at height `t` is the ideal generated
/// by the projections of the generators with last exponent `<= t`.
pub fn colength(ideal: &MonomialIdeal) -> Result<u64> {
    let bounds = ideal.pure_power_bounds()?;
    Ok(colength_gens(ideal.gens().to_vec(), &bounds))
}

fn colength_gens(gens: Vec<Exponent>, bounds: &[u64]) -> u64 {
    let n = bounds.len();
    if n == 0 {
        return u64::from(gens.is_empty());
    }
    if n == 1 {
        return gens.iter().map(|g| g[0]).min().unwrap_or(0);
    }
    let last = n - 1;
    let mut sorted = gens;
    sorted.sort_by_key(|g| g[last]);
    let mut slab: Vec<Exponent> = Vec::new();
    let mut next = 0;
    let mut total = 0;
    for t in 0..bounds[last] {
        let mut added = false;
        while next < sorted.len() && sorted[next][last] <= t {
            slab.push(sorted[next][..last].to_vec());
            next += 1;
            added = true;
        }
        if added {
            slab = minimalize(slab);
        }
        total += colength_gens(slab.clone(), &bounds[..last]);
    }
    total
}

fn factorial(d: usize) -> u64 {
    (1..=d as u64).product()
}

/// `vol_d {x : A x <= b}` by Lasserre's recursion over facets.
fn polytope_volume<S: Scalar>(rows: Vec<(Vec<S>, S)>, d: usize) -> S {
    // drop vacuous rows, detect empty ones, and keep the tightest of parallel rows
    let mut kept: Vec<(Vec<S>, S)> = Vec::new();
    for (a, b) in rows {
        let Some(lead) = a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
            if b.is_neg() {
                return S::zero();
            }
            continue;
        };
        let a: Vec<S> = a.iter().map(|x| x.div(&lead)).collect();
        let b = b.div(&lead);
        match kept.iter_mut().find(|(k, _)| *k == a) {
            Some(slot) => {
                if b.cmp_to(&slot.1) == Ordering::Less {
                    slot.1 = b;
                }
            }
            None => kept.push((a, b)),
        }
    }
    if d == 1 {
        let (mut lo, mut hi): (Option<S>, Option<S>) = (None, None);
        for (a, b) in &kept {
            let t = b.div(&a[0]);
            if a[0].is_pos() {
                hi = Some(match hi {
                    Some(h) if h.cmp_to(&t) != Ordering::Greater => h,
                    _ => t,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l.cmp_to(&t) != Ordering::Less => l,
                    _ => t,
                });
            }
        }
        let (lo, hi) = (lo.expect("bounded below"), hi.expect("bounded above"));
        let len = hi.sub(&lo);
        return if len.is_pos() { len } else { S::zero() };
    }
    let mut total = S::zero();
    for (i, (ai, bi)) in kept.iter().enumerate() {
        if bi.is_zero() {
            continue;
        }
        let k = ai.iter().position(|x| !x.is_zero()).expect("nonzero row");
        // substitute x_k = (b_i - Σ_{l≠k} a_il x_l)/a_ik into the other rows
        let sub: Vec<(Vec<S>, S)> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (aj, bj))| {
                let f = aj[k].div(&ai[k]);
                let coeffs: Vec<S> =
                    (0..d).filter(|&l| l != k).map(|l| aj[l].sub(&f.mul(&ai[l]))).collect();
                (coeffs, bj.sub(&f.mul(bi)))
            })
            .collect();
        let facet = polytope_volume(sub, d - 1);
        total = total.add(&bi.div(&ai[k].abs()).mul(&facet));
    }
    total.div(&from_u64::<S>(d as u64))
}

fn from_u64<S: Scalar>(k: u64) -> S {
    let mut acc = S::zero();
    let two = S::one().add(&S::one());
    for bit in (0..64).rev() {
        acc = acc.mul(&two);
        if (k >> bit) & 1 == 1 {
            acc = acc.add(&S::one());
        }
    }
    acc
}

/// `e(F) = d!·vol{x >= 0 : min_i w_i·x/a_i < 1}` for discrete valued `F`, `d <= 3`.
pub fn multiplicity_exact(f: &Filtration) -> Result<ExactReal> {
    let Filtration::DiscreteValued(pairs) = f else {
        return Err(Error::NotDiscreteValued);
    };
    let d = f.n();
    if d > 3 {
        return Err(Error::DimensionUnsupported(d));
    }
    let s = pairs.len();
    let mut union = ExactReal::zero();
    for mask in 1u32..(1 << s) {
        let mut rows: Vec<(Vec<ExactReal>, ExactReal)> = (0..s)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (pairs[i].0.weights().iter().map(|&w| ExactReal::from(w)).collect(), pairs[i].1.clone()))
            .collect();
        for j in 0..d {
            let mut r = vec![ExactReal::zero(); d];
            r[j] = ExactReal::integer(-1);
            rows.push((r, ExactReal::zero()));
        }
        let vol = polytope_volume(rows, d);
        union = if mask.count_ones() % 2 == 1 { union.checked_add(&vol)? } else { union.checked_sub(&vol)? };
    }
    Ok(union.mul_int(factorial(d)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthSample {
    pub n: u64,
    pub colength: u64,
    /// `ℓ(R/I_n)·d!/n^d` rendered exactly.
    pub normalized: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityEstimate {
    pub estimate: BigRational,
    pub d: usize,
    pub samples: Vec<LengthSample>,
}

/// Sample points `{1, 2, 5}·10^k <= n_max`, plus `n_max` itself.
pub fn sample_points(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut scale = 1u64;
    'outer: loop {
        for k in [1, 2, 5] {
            let n = k * scale;
            if n > n_max {
                break 'outer;
            }
            out.push(n);
        }
        scale = match scale.checked_mul(10) {
            Some(s) => s,
            None => break,
        };
    }
    if out.last() != Some(&n_max) {
        out.push(n_max);
    }
    out
}

/// `ℓ(R/I_{n_max})·d!/n_max^d`, with the normalized colength series.
pub fn multiplicity_estimate(f: &Filtration, n_max: u64) -> Result<MultiplicityEstimate> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be positive".into()));
    }
    let d = f.n();
    let mut samples = Vec::new();
    let mut estimate = BigRational::from_integer(0.into());
    for n in sample_points(n_max) {
        let l = f.colength(n)?;
        let norm = normalized_colength(l, n, d);
        samples.push(LengthSample { n, colength: l, normalized: ExactReal::from_rational(norm.clone()).to_string() });
        estimate = norm;
    }
    Ok(MultiplicityEstimate { estimate, d, samples })
}

pub fn normalized_colength(l: u64, n: u64, d: usize) -> BigRational {
    let num = num_bigint::BigInt::from(l) * num_bigint::BigInt::from(factorial(d));
    let den = num_bigint::BigInt::from(n).pow(d as u32);
    BigRational::new(num, den)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationValue {
    /// `lim ν(I_n)/n` when a closed form is available.
    pub exact: Option<ExactReal>,
    /// `min_{n <= n_max} ν(I_n)/n`, an upper bound of the limit, and its `n`.
    pub running_inf: ExactReal,
    pub running_inf_at: u64,
}

/// Exact `ν(F) = lim ν(I_n)/n` for the closed-form engines.
pub fn filtration_value_exact(v: &MonomialValuation, f: &Filtration) -> Result<Option<ExactReal>> {
    if v.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: v.n() });
    }
    Ok(Some(match f {
        Filtration::DiscreteValued(pairs) => {
            // min v·x subject to w_i·x >= a_i, x >= 0
            let cons: Vec<Constraint<ExactReal>> = pairs
                .iter()
                .map(|(w, a)| Constraint::new(w.weights().iter().map(|&x| ExactReal::from(x)).collect(), Rel::Ge, a.clone()))
                .collect();
            let obj: Vec<ExactReal> = v.weights().iter().map(|&x| ExactReal::from(x)).collect();
            match lp::simplex(Sense::Min, &obj, &cons) {
                LpOutcome::Optimal { value, .. } => value,
                other => unreachable!("positive weights keep the program bounded and feasible: {other:?}"),
            }
        }
        Filtration::Adic(a) => {
            if a.ideal().is_zero() {
                return Err(Error::ZeroIdeal);
            }
            ExactReal::from(v.value_of_ideal(a.ideal())?)
        }
        Filtration::StairOneVar { alpha, .. } => alpha.mul_int(v.weights()[0]),
        Filtration::Twist { base, alpha } => match filtration_value_exact(v, base)? {
            Some(x) => x.checked_mul(alpha)?,
            None => return Ok(None),
        },
        Filtration::Table(_) => return Ok(None),
    }))
}

/// `ν(F)` for a monomial valuation `v`.
pub fn filtration_value(v: &MonomialValuation, f: &Filtration, n_max: u64) -> Result<FiltrationValue> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be positive".into()));
    }
    let exact = filtration_value_exact(v, f)?;
    let mut best: Option<(ExactReal, u64)> = None;
    for n in 1..=n_max {
        let level = f.level(n)?;
        if level.is_zero() {
            continue;
        }
        let r = ExactReal::ratio(v.value_of_ideal(&level)?, n)?;
        if best.as_ref().is_none_or(|(b, _)| r.try_cmp(b).expect("rationals") == Ordering::Less) {
            best = Some((r, n));
        }
    }
    let (running_inf, running_inf_at) = best.ok_or(Error::ZeroIdeal)?;
    Ok(FiltrationValue { exact, running_inf, running_inf_at })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationLevel {
    pub n: u64,
    pub level_in_sat: bool,
    pub level_equals_sat: bool,
    pub k_equals_sat: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaturationReport {
    /// Valuations actually used, with their exact `ν_v(F)`.
    pub valuations: Vec<(MonomialValuation, ExactReal)>,
    pub levels: Vec<SaturationLevel>,
}

impl SaturationReport {
    pub fn all_equal(&self) -> bool {
        self.levels.iter().all(|l| l.level_equals_sat)
    }
}

/// Compares `I_n` with `Sat_n = {e : v(e) >= n·ν_v(F)}` over the test
/// valuations and, for discrete valued `F`, the defining ones. This is an outer
/// approximation of the saturation; it is exact for discrete valued inputs.
pub fn saturation_check(f: &Filtration, test_vals: &[MonomialValuation], n_max: u64) -> Result<SaturationReport> {
    let mut vals: Vec<MonomialValuation> = test_vals.to_vec();
    if let Filtration::DiscreteValued(pairs) = f {
        vals.extend(pairs.iter().map(|(v, _)| v.clone()));
    }
    vals.sort();
    vals.dedup();
    if vals.is_empty() {
        return Err(Error::Empty("no valuations to test".into()));
    }
    let valuations = vals
        .iter()
        .map(|v| {
            let x = filtration_value_exact(v, f)?.ok_or(Error::TableUnsupported)?;
            Ok((v.clone(), x))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = f.n();
    let mut levels = Vec::new();
    for m in 1..=n_max {
        let mut sat = MonomialIdeal::unit(n);
        for (v, x) in &valuations {
            sat = sat.intersection(&v.valuation_ideal(&x.mul_int(m))?)?;
        }
        let level = f.level(m)?;
        let k = crate::samuel::k_level(f, m)?;
        levels.push(SaturationLevel {
            n: m,
            level_in_sat: level.is_subset(&sat),
            level_equals_sat: level == sat,
            k_equals_sat: k == sat,
        });
    }
    Ok(SaturationReport { valuations, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    fn dv(ps: &[(&[u64], &str)]) -> Filtration {
        Filtration::discrete_valued(ps.iter().map(|(w, a)| (MonomialValuation::new(w.to_vec()).unwrap(), q(a))).collect())
            .unwrap()
    }

    fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    /// Oracle: count box points outside the ideal.
    fn brute_colength(i: &MonomialIdeal) -> u64 {
        let b = i.pure_power_bounds().unwrap();
        crate::monalg::box_points(&b).unwrap().iter().filter(|e| !i.contains_monomial(e)).count() as u64
    }

    #[test]
    fn colength_examples() {
        assert_eq!(colength(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap(), 4);
        assert_eq!(colength(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap(), 1);
        let f = dv(&[(&[1, 2], "1")]);
        assert_eq!(colength(&f.level(4).unwrap()).unwrap(), 6);
        assert!(matches!(colength(&ideal(2, &[&[1, 1]])), Err(Error::NotPrimary(_))));
        let i = ideal(3, &[&[3, 0, 0], &[0, 2, 0], &[0, 0, 4], &[1, 1, 1], &[2, 0, 1]]);
        assert_eq!(colength(&i).unwrap(), brute_colength(&i));
    }

    #[test]
    fn exact_multiplicity_examples() {
        assert_eq!(multiplicity_exact(&dv(&[(&[1, 1], "1")])).unwrap(), q("1"));
        assert_eq!(multiplicity_exact(&dv(&[(&[1, 2], "1")])).unwrap(), q("1/2"));
        // union of the two triangles: 1/4 + 1/4 - 1/6 = 1/3, times 2!
        let two = dv(&[(&[1, 2], "1"), (&[2, 1], "1")]);
        assert_eq!(multiplicity_exact(&two).unwrap(), q("2/3"));
        // lattice-count oracle at n = 2000
        let est = normalized_colength(two.colength(2000).unwrap(), 2000, 2);
        let diff = est - BigRational::new(2.into(), 3.into());
        assert!(diff.abs() < BigRational::new(1.into(), 1000.into()));
        // simplex x + y + z < 1: volume 1/6, times 3!
        assert_eq!(multiplicity_exact(&dv(&[(&[1, 1, 1], "1")])).unwrap(), q("1"));
        assert_eq!(multiplicity_exact(&dv(&[(&[1, 2, 3], "2")])).unwrap(), q("8/6"));
        assert_eq!(multiplicity_exact(&dv(&[(&[1], "(0+1*sqrt(2))/1")])).unwrap(), ExactReal::sqrt(2));
    }

    #[test]
    fn duplicated_pairs_do_not_double_count() {
        let f = dv(&[(&[1, 1], "1"), (&[2, 2], "2"), (&[1, 1], "1/2")]);
        assert_eq!(multiplicity_exact(&f).unwrap(), q("1"));
    }

    #[test]
    fn estimate_examples() {
        let adic = Filtration::adic(ideal(2, &[&[1, 0], &[0, 1]]));
        assert_eq!(multiplicity_estimate(&adic, 50).unwrap().estimate, BigRational::new(51.into(), 50.into()));
        let f = dv(&[(&[1, 1], "1")]);
        assert_eq!(multiplicity_estimate(&f, 100).unwrap().estimate, BigRational::new(101.into(), 100.into()));
        for c in 0..3u64 {
            let s = Filtration::stair_one_var(q("1"), c).unwrap();
            let est = multiplicity_estimate(&s, 100).unwrap().estimate;
            assert_eq!(est, BigRational::new((100 + c).into(), 100.into()));
        }
        assert_eq!(sample_points(120), vec![1, 2, 5, 10, 20, 50, 100, 120]);
    }

    #[test]
    fn filtration_value_examples() {
        let v = MonomialValuation::new(vec![1, 1]).unwrap();
        assert_eq!(filtration_value(&v, &dv(&[(&[1, 1], "1")]), 5).unwrap().exact, Some(q("1")));
        assert_eq!(filtration_value(&v, &dv(&[(&[1, 2], "1")]), 5).unwrap().exact, Some(q("1/2")));
        let s = Filtration::stair_one_var(q("1"), 3).unwrap();
        let fv = filtration_value(&MonomialValuation::new(vec![1]).unwrap(), &s, 20).unwrap();
        assert_eq!(fv.exact, Some(q("1")));
        assert_eq!((fv.running_inf, fv.running_inf_at), (q("23/20"), 20));
    }

    #[test]
    fn saturation_examples() {
        let vals = [MonomialValuation::new(vec![1, 2]).unwrap(), MonomialValuation::new(vec![2, 1]).unwrap()];
        let r = saturation_check(&dv(&[(&[1, 1], "1")]), &vals, 20).unwrap();
        assert!(r.levels.iter().all(|l| l.level_in_sat && l.level_equals_sat));
        let two = dv(&[(&[1, 2], "1"), (&[2, 1], "1")]);
        assert!(saturation_check(&two, &[], 10).unwrap().all_equal());
        let adic = Filtration::adic(ideal(2, &[&[2, 0], &[0, 3]]));
        let ra = saturation_check(&adic, &[MonomialValuation::new(vec![3, 2]).unwrap()], 6).unwrap();
        for l in &ra.levels {
            assert!(l.level_in_sat && l.k_equals_sat);
            let closure = adic.level(l.n).unwrap().integral_closure().unwrap();
            let sat_is_closure = l.k_equals_sat;
            assert!(sat_is_closure && closure == crate::samuel::k_level(&adic, l.n).unwrap());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn colength_matches_box_count(gens in proptest::collection::vec(proptest::collection::vec(0u64..5, 3), 0..5), p in proptest::collection::vec(1u64..5, 3)) {
                let mut all = gens;
                for j in 0..3 {
                    let mut e = vec![0; 3];
                    e[j] = p[j];
                    all.push(e);
                }
                let i = MonomialIdeal::new(3, all).unwrap();
                prop_assert_eq!(colength(&i).unwrap(), brute_colength(&i));
            }
        }
    }
}
