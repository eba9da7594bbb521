//! Irredundant representations `ω = min_i v_i/a_i`, projective equivalence of
//! discrete valued filtrations, and recovery of the `(v_i, a_i)` from `ω`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{ExactReal, ExtReal, Extended};
use crate::filtration::{common_radicand, exponents_up_to_degree, Filtration};
use crate::lp::{self, Constraint, Rel};
use crate::monalg::{add_exp, scale_exp, Exponent};
use crate::valuation::MonomialValuation;

/// A canonical, irredundant list of pairs `(v_i, a_i)` with primitive `v_i`,
/// sorted by `(w, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IrredundantRep {
    pairs: Vec<(MonomialValuation, ExactReal)>,
}

impl IrredundantRep {
    pub fn pairs(&self) -> &[(MonomialValuation, ExactReal)] {
        &self.pairs
    }

    pub fn into_filtration(self) -> Filtration {
        Filtration::discrete_valued(self.pairs).expect("validated pairs")
    }

    /// `ω(e) = min_i w_i·e / a_i`.
    pub fn omega(&self, e: &[u64]) -> Result<ExactReal> {
        omega_of(&self.pairs, e)
    }
}

impl fmt::Display for IrredundantRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(v, a)| format!("({v}, {a})")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn omega_of(pairs: &[(MonomialValuation, ExactReal)], e: &[u64]) -> Result<ExactReal> {
    let mut best: Option<ExactReal> = None;
    for (v, a) in pairs {
        let r = ExactReal::from(v.eval(e)?).checked_div(a)?;
        best = match best {
            Some(b) if b.try_cmp(&r)? != Ordering::Greater => Some(b),
            _ => Some(r),
        };
    }
    best.ok_or_else(|| Error::Empty("no pairs".into()))
}

/// Black-box access to a function `ω` on monomials.
pub trait OmegaOracle {
    fn n(&self) -> usize;
    fn eval(&self, e: &[u64]) -> Result<ExtReal>;
}

/// The oracle `e ↦ min_i w_i·e/a_i` of an explicit family.
pub struct PairsOracle {
    pairs: Vec<(MonomialValuation, ExactReal)>,
}

impl PairsOracle {
    pub fn new(pairs: Vec<(MonomialValuation, ExactReal)>) -> Result<Self> {
        Filtration::discrete_valued(pairs.clone())?;
        Ok(PairsOracle { pairs })
    }
}

impl OmegaOracle for PairsOracle {
    fn n(&self) -> usize {
        self.pairs[0].0.n()
    }
    fn eval(&self, e: &[u64]) -> Result<ExtReal> {
        omega_of(&self.pairs, e).map(Extended::Finite)
    }
}

/// `ν̄_F` of any filtration as an oracle.
pub struct NubarOracle<'a>(pub &'a Filtration);

impl OmegaOracle for NubarOracle<'_> {
    fn n(&self) -> usize {
        self.0.n()
    }
    fn eval(&self, e: &[u64]) -> Result<ExtReal> {
        crate::samuel::nubar_monomial_exact(self.0, e)?.ok_or(Error::TableUnsupported)
    }
}

fn cmp_pairs(x: &(MonomialValuation, ExactReal), y: &(MonomialValuation, ExactReal)) -> Ordering {
    x.0.cmp(&y.0).then_with(|| x.1.try_cmp(&y.1).expect("common radicand checked"))
}

/// Whether some real `x >= 0` makes pair `i` the strict minimum.
fn has_strict_witness(forms: &[Vec<ExactReal>], i: usize) -> bool {
    let n = forms[i].len();
    // homogeneous: (L_j - L_i)·x >= 1 for all j != i
    let cons: Vec<Constraint<ExactReal>> = forms
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, lj)| {
            let coeffs = lj.iter().zip(&forms[i]).map(|(a, b)| a.checked_sub(b).expect("one field")).collect();
            Constraint::new(coeffs, Rel::Ge, ExactReal::one())
        })
        .collect();
    lp::feasible(n, &cons)
}

/// Canonicalizes and removes every pair that is never the strict minimum.
pub fn make_irredundant(pairs: Vec<(MonomialValuation, ExactReal)>) -> Result<IrredundantRep> {
    Filtration::discrete_valued(pairs.clone())?;
    let mut canon: Vec<(MonomialValuation, ExactReal)> = pairs
        .into_iter()
        .map(|(v, a)| {
            let g = v.gcd();
            Ok((v.primitive(), a.div_int(g)?))
        })
        .collect::<Result<_>>()?;
    canon.sort_by(cmp_pairs);
    canon.dedup();
    loop {
        if canon.len() == 1 {
            break;
        }
        let forms: Vec<Vec<ExactReal>> = canon
            .iter()
            .map(|(v, a)| v.weights().iter().map(|&w| ExactReal::from(w).checked_div(a)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        match (0..canon.len()).find(|&i| !has_strict_witness(&forms, i)) {
            Some(i) => {
                canon.remove(i);
            }
            None => break,
        }
    }
    Ok(IrredundantRep { pairs: canon })
}

/// Outcome of a projective-equivalence test.
#[derive(Clone, Debug, PartialEq)]
pub enum Equivalence {
    /// `ν̄_F = α·ν̄_G`.
    Equivalent { alpha: ExactReal },
    /// The ratio `ν̄_F/ν̄_G` differs between the two monomials.
    NotEquivalent { reference: Exponent, counterexample: Option<Exponent> },
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equivalence::Equivalent { alpha } => write!(f, "equivalent, alpha = {alpha}"),
            Equivalence::NotEquivalent { counterexample: Some(e), reference } => write!(
                f,
                "not equivalent, counterexample monomial = {} (reference {})",
                crate::monalg::render_monomial(e),
                crate::monalg::render_monomial(reference)
            ),
            Equivalence::NotEquivalent { counterexample: None, .. } => f.write_str("not equivalent"),
        }
    }
}

/// Largest total degree searched for a counterexample monomial.
const COUNTEREXAMPLE_DEGREE: u64 = 64;

/// Decides whether `ν̄_F = α·ν̄_G` for discrete valued `F`, `G`.
pub fn projectively_equivalent(f: &Filtration, g: &Filtration) -> Result<Equivalence> {
    let (Filtration::DiscreteValued(pf), Filtration::DiscreteValued(pg)) = (f, g) else {
        return Err(Error::NotDiscreteValued);
    };
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: g.n() });
    }
    let rf = make_irredundant(pf.clone())?;
    let rg = make_irredundant(pg.clone())?;
    if rf.pairs.len() == rg.pairs.len() && rf.pairs.iter().zip(&rg.pairs).all(|(x, y)| x.0 == y.0) {
        let ratios = rf
            .pairs
            .iter()
            .zip(&rg.pairs)
            .map(|((_, af), (_, ag))| ag.checked_div(af))
            .collect::<Result<Vec<_>>>();
        if let Ok(ratios) = ratios {
            if ratios.iter().all(|r| r == &ratios[0]) {
                return Ok(Equivalence::Equivalent { alpha: ratios[0].clone() });
            }
        }
    }
    let n = f.n();
    let reference: Exponent = {
        let mut e = vec![0; n];
        e[0] = 1;
        e
    };
    let base = (rf.omega(&reference)?, rg.omega(&reference)?);
    for e in exponents_up_to_degree(n, COUNTEREXAMPLE_DEGREE) {
        let (x, y) = (rf.omega(&e)?, rg.omega(&e)?);
        // x/y != base.0/base.1, compared by cross multiplication
        if x.checked_mul(&base.1)?.try_cmp(&y.checked_mul(&base.0)?)? != Ordering::Equal {
            return Ok(Equivalence::NotEquivalent { reference, counterexample: Some(e) });
        }
    }
    Ok(Equivalence::NotEquivalent { reference, counterexample: None })
}

/// Cap on the doubling search for a stabilizing multiple `d`.
const DOUBLING_LIMIT: u32 = 20;

/// Primitive integer `w` and `a` with `w/a = coeffs`.
fn fit_pair(coeffs: &[ExactReal]) -> Option<(MonomialValuation, ExactReal)> {
    if coeffs.iter().any(|c| !c.is_positive()) {
        return None;
    }
    let ratios: Vec<BigRational> = coeffs
        .iter()
        .map(|c| c.checked_div(&coeffs[0]).ok().and_then(|r| r.as_rational().cloned()))
        .collect::<Option<_>>()?;
    let den = ratios.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = ratios.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let w: Vec<u64> = ints.iter().map(|v| (v / &g).abs().to_u64()).collect::<Option<_>>()?;
    let a = ExactReal::from(w[0]).checked_div(&coeffs[0]).ok()?;
    Some((MonomialValuation::new(w).ok()?, a))
}

fn finite(x: ExtReal) -> Result<ExactReal> {
    match x {
        Extended::Finite(v) => Ok(v),
        Extended::Infinity => Err(Error::NotMinLinear("oracle returned inf on a monomial".into())),
    }
}

/// Recovers the irredundant `(v_i, a_i)` behind `ω = min_i v_i/a_i`.
///
/// Every sample `x` with `|x| <= degree_bound` is tried as a separating point:
/// `u(e) = ω(e + d·x) - ω(d·x)` is evaluated on the unit vectors and on the
/// all-ones vector for doubling `d` until two consecutive values agree. When
/// `u` is additive there, `x` sits inside a single region and `u` is that
/// region's linear form. The recovered family is then checked against `ω` on
/// every sample.
pub fn recover_valuations(oracle: &dyn OmegaOracle, degree_bound: u64) -> Result<IrredundantRep> {
    if degree_bound == 0 {
        return Err(Error::Invalid("degree bound must be positive".into()));
    }
    let n = oracle.n();
    let samples = exponents_up_to_degree(n, degree_bound);
    let probes: Vec<Exponent> = (0..=n)
        .map(|j| if j < n { (0..n).map(|k| u64::from(k == j)).collect() } else { vec![1; n] })
        .collect();
    let u_at = |x: &Exponent, d: u64| -> Result<Vec<ExactReal>> {
        let dx = scale_exp(x, d);
        let base = finite(oracle.eval(&dx)?)?;
        probes.iter().map(|p| finite(oracle.eval(&add_exp(p, &dx))?)?.checked_sub(&base)).collect()
    };
    let mut found: Vec<(MonomialValuation, ExactReal)> = Vec::new();
    for x in samples.iter().filter(|x| x.iter().any(|&v| v > 0)) {
        let mut d = degree_bound;
        let mut prev = u_at(x, d)?;
        let mut stable = None;
        for _ in 0..DOUBLING_LIMIT {
            let next = u_at(x, 2 * d)?;
            if next == prev {
                stable = Some(next);
                break;
            }
            prev = next;
            d *= 2;
        }
        let Some(u) = stable else { continue };
        let mut sum = ExactReal::zero();
        for c in &u[..n] {
            sum = sum.checked_add(c)?;
        }
        if sum != u[n] {
            continue;
        }
        if let Some(pair) = fit_pair(&u[..n]) {
            if !found.contains(&pair) {
                found.push(pair);
            }
        }
    }
    if found.is_empty() {
        return Err(Error::NotMinLinear("no separating sample found".into()));
    }
    common_radicand(found.iter().map(|(_, a)| a))?;
    for e in &samples {
        let expected = finite(oracle.eval(e)?)?;
        let got = omega_of(&found, e)?;
        if got != expected {
            return Err(Error::NotMinLinear(format!(
                "recovered family gives {got} at {e:?} but the oracle gives {expected}"
            )));
        }
    }
    make_irredundant(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    fn pairs(ps: &[(&[u64], &str)]) -> Vec<(MonomialValuation, ExactReal)> {
        ps.iter().map(|(w, a)| (MonomialValuation::new(w.to_vec()).unwrap(), q(a))).collect()
    }

    fn dv(ps: &[(&[u64], &str)]) -> Filtration {
        Filtration::discrete_valued(pairs(ps)).unwrap()
    }

    /// Oracle: does some e in the grid make pair i the strict minimum?
    fn grid_witness(ps: &[(MonomialValuation, ExactReal)], i: usize, side: u64) -> bool {
        let n = ps[0].0.n();
        crate::monalg::box_points(&vec![side; n]).unwrap().iter().any(|e| {
            let vi = ExactReal::from(ps[i].0.eval(e).unwrap()).checked_div(&ps[i].1).unwrap();
            ps.iter().enumerate().filter(|(j, _)| *j != i).all(|(_, (v, a))| {
                let vj = ExactReal::from(v.eval(e).unwrap()).checked_div(a).unwrap();
                vi.try_cmp(&vj).unwrap() == Ordering::Less
            })
        })
    }

    #[test]
    fn make_irredundant_examples() {
        let p = pairs(&[(&[1, 1], "1"), (&[1, 2], "1")]);
        assert!(grid_witness(&p, 0, 20) && !grid_witness(&p, 1, 20));
        assert_eq!(make_irredundant(p).unwrap().pairs(), pairs(&[(&[1, 1], "1")]).as_slice());
        let p = pairs(&[(&[1, 2], "1"), (&[2, 1], "1")]);
        assert!(grid_witness(&p, 0, 20) && grid_witness(&p, 1, 20));
        assert_eq!(make_irredundant(p.clone()).unwrap().pairs(), p.as_slice());
        assert_eq!(make_irredundant(pairs(&[(&[2, 2], "2")])).unwrap().pairs(), pairs(&[(&[1, 1], "1")]).as_slice());
        assert!(make_irredundant(Vec::new()).is_err());
    }

    #[test]
    fn make_irredundant_with_surds() {
        let s2 = "(0+1*sqrt(2))/1";
        let p = pairs(&[(&[1, 2], s2), (&[2, 1], s2), (&[1, 1], "(0+2*sqrt(2))/3")]);
        // (1,1)/(2√2/3) = 3/(2√2)·(x+y); at (1,1) that is 2.12 vs 3/√2 = 2.12: tie, never strict
        let rep = make_irredundant(p.clone()).unwrap();
        for (i, _) in p.iter().enumerate() {
            let kept = rep.pairs().contains(&(p[i].0.primitive(), p[i].1.clone()));
            assert_eq!(kept, grid_witness(&p, i, 12), "pair {i}");
        }
    }

    #[test]
    fn equivalence_examples() {
        let f = dv(&[(&[1, 1], "1")]);
        let g = dv(&[(&[1, 1], "3")]);
        assert_eq!(projectively_equivalent(&f, &g).unwrap(), Equivalence::Equivalent { alpha: q("3") });
        let f2 = dv(&[(&[1, 2], "1"), (&[2, 1], "1")]);
        let s2 = "(0+1*sqrt(2))/1";
        let g2 = dv(&[(&[1, 2], s2), (&[2, 1], s2)]);
        assert_eq!(projectively_equivalent(&f2, &g2).unwrap(), Equivalence::Equivalent { alpha: ExactReal::sqrt(2) });
        let f3 = dv(&[(&[1, 2], "1")]);
        let g3 = dv(&[(&[2, 1], "1")]);
        let out = projectively_equivalent(&f3, &g3).unwrap();
        let Equivalence::NotEquivalent { reference, counterexample: Some(e) } = out else { panic!("{out:?}") };
        let rf = |x: &[u64]| ExactReal::from(x[0] + 2 * x[1]);
        let rg = |x: &[u64]| ExactReal::from(2 * x[0] + x[1]);
        assert_ne!(rf(&e).checked_mul(&rg(&reference)).unwrap(), rg(&e).checked_mul(&rf(&reference)).unwrap());
        assert!(projectively_equivalent(&f, &Filtration::adic(crate::monalg::MonomialIdeal::unit(2))).is_err());
    }

    #[test]
    fn recovery_examples() {
        let hidden = pairs(&[(&[1, 2], "1"), (&[2, 1], "1")]);
        let oracle = PairsOracle::new(hidden.clone()).unwrap();
        // separating point (1,0): u((0,1)) = ω((d+0, 1)) − ω((d, 0)) = 2
        let d = 6;
        let u = oracle.eval(&[d, 1]).unwrap().finite().unwrap().checked_sub(oracle.eval(&[d, 0]).unwrap().finite().unwrap()).unwrap();
        assert_eq!(u, q("2"));
        assert_eq!(recover_valuations(&oracle, 6).unwrap().pairs(), hidden.as_slice());
        let single = pairs(&[(&[1, 1], "1")]);
        assert_eq!(recover_valuations(&PairsOracle::new(single.clone()).unwrap(), 1).unwrap().pairs(), single.as_slice());
        let redundant = PairsOracle::new(pairs(&[(&[1, 1], "1"), (&[1, 2], "1")])).unwrap();
        assert_eq!(recover_valuations(&redundant, 4).unwrap().pairs(), single.as_slice());
    }

    #[test]
    fn recovery_rejects_non_linear_oracle() {
        struct Square;
        impl OmegaOracle for Square {
            fn n(&self) -> usize {
                1
            }
            fn eval(&self, e: &[u64]) -> Result<ExtReal> {
                Ok(Extended::Finite(ExactReal::from(e[0] * e[0])))
            }
        }
        assert!(matches!(recover_valuations(&Square, 4), Err(Error::NotMinLinear(_))));
    }
}
