//! Monomial valuations `v(x^e) = w·e` with strictly positive integer weights.

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactnum::{ExactReal, Extended};
use crate::monalg::{Exponent, MonomialIdeal, SupportPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialValuation {
    w: Vec<u64>,
}

impl fmt::Display for MonomialValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.w.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl MonomialValuation {
    pub fn new(w: Vec<u64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Empty("weight vector".into()));
        }
        if w.iter().any(|&x| x == 0) {
            return Err(Error::NonPositiveWeight(w));
        }
        Ok(MonomialValuation { w })
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    /// Whether `gcd(w) = 1`.
    pub fn is_canonical(&self) -> bool {
        self.gcd() == 1
    }

    pub fn gcd(&self) -> u64 {
        self.w.iter().fold(0, |g, &x| g.gcd(&x))
    }

    /// The primitive valuation `w / gcd(w)`.
    pub fn primitive(&self) -> Self {
        let g = self.gcd();
        MonomialValuation { w: self.w.iter().map(|x| x / g).collect() }
    }

    fn check_dim(&self, k: usize) -> Result<()> {
        if k == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n(), got: k })
        }
    }

    /// `w·e`.
    pub fn eval(&self, e: &[u64]) -> Result<u64> {
        self.check_dim(e.len())?;
        self.w.iter().zip(e).try_fold(0u64, |acc, (w, x)| {
            w.checked_mul(*x).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
        })
    }

    /// `v(f)`: the minimum over the support, `∞` for `f = 0`.
    pub fn value(&self, f: &SupportPoly) -> Result<Extended<u64>> {
        self.check_dim(f.n())?;
        let mut best = Extended::Infinity;
        for e in f.support() {
            best = best.min(Extended::Finite(self.eval(e)?));
        }
        Ok(best)
    }

    /// `I(v)_t = {f : v(f) >= t}`; only `⌈t⌉` matters.
    pub fn valuation_ideal(&self, threshold: &ExactReal) -> Result<MonomialIdeal> {
        if threshold.signum() == std::cmp::Ordering::Less {
            return Err(Error::Invalid(format!("negative threshold {threshold}")));
        }
        let k = threshold.ceil().to_u64().ok_or(Error::Overflow)?;
        Ok(self.valuation_ideal_int(k))
    }

    /// `I(v)_k` for an integer threshold, enumerated directly as the antichain
    /// of points with `w·e >= k` and `w·e - w_j < k` whenever `e_j > 0`.
    pub fn valuation_ideal_int(&self, k: u64) -> MonomialIdeal {
        let n = self.n();
        if k == 0 {
            return MonomialIdeal::unit(n);
        }
        let mut gens = Vec::new();
        let mut cur = vec![0u64; n];
        self.enumerate(0, 0, k, &mut cur, &mut gens);
        MonomialIdeal::new(n, gens).expect("dimensions agree")
    }

    fn enumerate(&self, j: usize, acc: u64, k: u64, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        let n = self.n();
        if j == n - 1 {
            let wj = self.w[j];
            let need = k.saturating_sub(acc).div_ceil(wj);
            cur[j] = need;
            let total = acc + need * wj;
            let minimal = (0..n).all(|i| cur[i] == 0 || total - self.w[i] < k);
            if minimal {
                out.push(cur.clone());
            }
            cur[j] = 0;
            return;
        }
        let wj = self.w[j];
        let top = k.div_ceil(wj);
        for x in 0..=top {
            let a = acc + x * wj;
            cur[j] = x;
            if a >= k {
                // remaining coordinates must be zero
                let minimal = (0..n).all(|i| cur[i] == 0 || a - self.w[i] < k);
                if minimal {
                    out.push(cur.clone());
                }
                break;
            }
            self.enumerate(j + 1, a, k, cur, out);
        }
        cur[j] = 0;
    }

    /// `v(I) = min over generators of w·g`.
    pub fn value_of_ideal(&self, ideal: &MonomialIdeal) -> Result<u64> {
        self.check_dim(ideal.n())?;
        if ideal.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        ideal.gens().iter().map(|g| self.eval(g)).try_fold(u64::MAX, |m, v| Ok(m.min(v?)))
    }
}
