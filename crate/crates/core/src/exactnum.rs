//! Exact real numbers: rationals and real quadratic surds `(p + q*sqrt(d))/r`.
//!
//! Every comparison, floor and ceiling is decided with integer arithmetic only.
//! Two surds can be combined only when they live in the same field `Q(sqrt(d))`;
//! anything else is reported as [`Error::MixedRadicals`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use regex::Regex;

use crate::error::{Error, Result};

/// A quadratic surd `(p + q*sqrt(d))/r` in lowest terms.
///
/// Invariants: `q != 0`, `d >= 2` squarefree, `r > 0`, `gcd(p, q, r) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

impl Surd {
    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
}

/// An exact real number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactReal {
    Rational(BigRational),
    Surd(Surd),
}

/// `a + b*sqrt(d)` with rational parts; the working form for arithmetic.
#[derive(Clone, Debug)]
struct QuadParts {
    a: BigRational,
    b: BigRational,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Splits `d > 0` into `s^2 * d'` with `d'` squarefree.
fn squarefree_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut square = BigInt::one();
    let mut k = BigInt::from(2);
    while &k * &k <= rest {
        let kk = &k * &k;
        while (&rest % &kk).is_zero() {
            rest /= &kk;
            square *= &k;
        }
        k += 1;
    }
    (square, rest)
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactReal::Rational(BigRational::one())
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExactReal::Rational(rat(n))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactReal::Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }

    /// `sqrt(d)` for a nonnegative integer `d`.
    pub fn sqrt(d: u64) -> Self {
        Self::surd(0, 1, d, 1).expect("sqrt of a nonnegative integer is well formed")
    }

    /// Builds `(p + q*sqrt(d))/r`, reducing to lowest terms; collapses to a
    /// rational when `q = 0` or `d` is a perfect square.
    pub fn surd(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, mut q, d, r) = (p.into(), q.into(), d.into(), r.into());
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::Invalid(format!("sqrt of negative number {d}")));
        }
        if q.is_zero() || d.is_zero() {
            return Ok(ExactReal::Rational(BigRational::new(p, r)));
        }
        let (square, d) = squarefree_split(&d);
        q *= square;
        if d.is_one() {
            return Ok(ExactReal::Rational(BigRational::new(p + q, r)));
        }
        let g = p.gcd(&q).gcd(&r);
        let (mut p, mut q, mut r) = (p / &g, q / &g, r / &g);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        Ok(ExactReal::Surd(Surd { p, q, d, r }))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactReal::Rational(r) => Some(r),
            ExactReal::Surd(_) => None,
        }
    }

    /// The squarefree radicand, if this is a surd.
    pub fn radicand(&self) -> Option<&BigInt> {
        match self {
            ExactReal::Rational(_) => None,
            ExactReal::Surd(s) => Some(&s.d),
        }
    }

    fn parts(&self) -> QuadParts {
        match self {
            ExactReal::Rational(a) => QuadParts { a: a.clone(), b: BigRational::zero() },
            ExactReal::Surd(s) => QuadParts {
                a: BigRational::new(s.p.clone(), s.r.clone()),
                b: BigRational::new(s.q.clone(), s.r.clone()),
            },
        }
    }

    fn from_parts(parts: QuadParts, d: Option<&BigInt>) -> Self {
        match d {
            Some(d) if !parts.b.is_zero() => {
                let r = parts.a.denom().lcm(parts.b.denom());
                let p = (&parts.a * rat(r.clone())).to_integer();
                let q = (&parts.b * rat(r.clone())).to_integer();
                Self::surd(p, q, d.clone(), r).expect("denominator is nonzero")
            }
            _ => ExactReal::Rational(parts.a),
        }
    }

    fn common_radicand<'a>(&'a self, other: &'a Self) -> Result<Option<&'a BigInt>> {
        match (self.radicand(), other.radicand()) {
            (Some(a), Some(b)) if a != b => Err(Error::MixedRadicals(a.to_string(), b.to_string())),
            (Some(a), _) => Ok(Some(a)),
            (None, b) => Ok(b),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let (x, y) = (self.parts(), other.parts());
        Ok(Self::from_parts(QuadParts { a: x.a + y.a, b: x.b + y.b }, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let (x, y) = (self.parts(), other.parts());
        let dd = d.map(|d| rat(d.clone())).unwrap_or_else(BigRational::zero);
        let a = &x.a * &y.a + &x.b * &y.b * dd;
        let b = &x.a * &y.b + &x.b * &y.a;
        Ok(Self::from_parts(QuadParts { a, b }, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.common_radicand(other)?;
        let y = other.parts();
        let dd = d.map(|d| rat(d.clone())).unwrap_or_else(BigRational::zero);
        // 1/(a + b√d) = (a − b√d)/(a² − b²d)
        let norm = &y.a * &y.a - &y.b * &y.b * dd;
        let inv = QuadParts { a: &y.a / &norm, b: -&y.b / &norm };
        self.checked_mul(&Self::from_parts(inv, d))
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactReal::Rational(a) => ExactReal::Rational(-a),
            ExactReal::Surd(s) => ExactReal::Surd(Surd {
                p: -&s.p,
                q: -&s.q,
                d: s.d.clone(),
                r: s.r.clone(),
            }),
        }
    }

    /// Multiplication by a rational never mixes radicals.
    pub fn mul_rational(&self, k: &BigRational) -> Self {
        self.checked_mul(&ExactReal::Rational(k.clone())).expect("rationals mix with any radical")
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        self.mul_rational(&rat(k))
    }

    pub fn div_int(&self, k: impl Into<BigInt>) -> Result<Self> {
        let k = k.into();
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_rational(&BigRational::new(BigInt::one(), k)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(a) if a.is_zero())
    }

    pub fn signum(&self) -> Ordering {
        match self {
            ExactReal::Rational(a) => a.cmp(&BigRational::zero()),
            ExactReal::Surd(s) => {
                // sign of p + q√d
                let sp = s.p.cmp(&BigInt::zero());
                let sq = s.q.cmp(&BigInt::zero());
                if sp == Ordering::Equal || sp == sq {
                    return sq;
                }
                let pp = &s.p * &s.p;
                let qqd = &s.q * &s.q * &s.d;
                if sp == Ordering::Greater {
                    pp.cmp(&qqd)
                } else {
                    qqd.cmp(&pp)
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Exact trichotomy; fails only for surds over different radicands.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => Ok(a.cmp(b)),
            _ => Ok(self.checked_sub(other)?.signum()),
        }
    }

    pub fn floor(&self) -> BigInt {
        match self {
            ExactReal::Rational(a) => a.floor().to_integer(),
            ExactReal::Surd(s) => {
                // q√d lies strictly between s and s+1
                let qqd = &s.q * &s.q * &s.d;
                let root: BigInt = qqd.sqrt();
                let below: BigInt = if s.q.is_positive() { root } else { -(root + BigInt::one()) };
                (&s.p + below).div_floor(&s.r)
            }
        }
    }

    pub fn ceil(&self) -> BigInt {
        match self {
            ExactReal::Rational(a) => a.ceil().to_integer(),
            ExactReal::Surd(_) => self.floor() + 1,
        }
    }

    /// Floating-point approximation, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(a) => a.to_f64().unwrap_or(f64::NAN),
            ExactReal::Surd(s) => {
                let p = s.p.to_f64().unwrap_or(f64::NAN);
                let q = s.q.to_f64().unwrap_or(f64::NAN);
                let d = s.d.to_f64().unwrap_or(f64::NAN);
                let r = s.r.to_f64().unwrap_or(f64::NAN);
                (p + q * d.sqrt()) / r
            }
        }
    }

    pub fn min_of<'a>(values: impl IntoIterator<Item = &'a ExactReal>) -> Result<Option<ExactReal>> {
        let mut best: Option<&ExactReal> = None;
        for v in values {
            best = match best {
                Some(b) if b.try_cmp(v)? != Ordering::Greater => Some(b),
                _ => Some(v),
            };
        }
        Ok(best.cloned())
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::integer(n)
    }
}

impl From<u64> for ExactReal {
    fn from(n: u64) -> Self {
        ExactReal::integer(n)
    }
}

impl From<BigRational> for ExactReal {
    fn from(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }
}

/// `⌈alpha·m⌉` for `alpha > 0`.
pub fn ceil_mul(alpha: &ExactReal, m: u64) -> Result<u64> {
    if !alpha.is_positive() {
        return Err(Error::NotPositive(alpha.to_string()));
    }
    alpha.mul_int(m).ceil().to_u64().ok_or(Error::Overflow)
}

/// `⌊x⌋` as a nonnegative machine integer; negative values clamp to an error.
pub fn floor_u64(x: &ExactReal) -> Result<u64> {
    let f = x.floor();
    if f.is_negative() {
        return Err(Error::Invalid(format!("negative floor of {x}")));
    }
    f.to_u64().ok_or(Error::Overflow)
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(a) => write!(f, "{}/{}", a.numer(), a.denom()),
            ExactReal::Surd(s) => {
                let sign = if s.q.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))/{}", s.p, sign, s.q.abs(), s.d, s.r)
            }
        }
    }
}

static RATIONAL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(-?\d+)(?:/(-?\d+))?$").expect("valid regex"));
static SURD_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\((-?\d+)([+-])(-?\d+)\*sqrt\((\d+)\)\)(?:/(\d+))?$").expect("valid regex")
});
static BARE_SQRT_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(-?\d+\*)?sqrt\((\d+)\)(?:/(\d+))?$").expect("valid regex"));

fn big(s: &str) -> BigInt {
    s.parse().expect("regex admits only decimal integers")
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(c) = RATIONAL_RE.captures(&t) {
            let den = c.get(2).map_or_else(BigInt::one, |m| big(m.as_str()));
            return ExactReal::ratio(big(&c[1]), den).map_err(|_| Error::Parse(format!("zero denominator in {s:?}")));
        }
        if let Some(c) = SURD_RE.captures(&t) {
            let p = big(&c[1]);
            let mut q = big(&c[3]);
            if &c[2] == "-" {
                q = -q;
            }
            let r = c.get(5).map_or_else(BigInt::one, |m| big(m.as_str()));
            return ExactReal::surd(p, q, big(&c[4]), r).map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        }
        if let Some(c) = BARE_SQRT_RE.captures(&t) {
            let q = c.get(1).map_or_else(BigInt::one, |m| big(m.as_str().trim_end_matches('*')));
            let r = c.get(3).map_or_else(BigInt::one, |m| big(m.as_str()));
            return ExactReal::surd(0, q, big(&c[2]), r).map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        }
        Err(Error::Parse(format!("not an exact real: {s:?}")))
    }
}

/// A value extended by `+∞`, ordered above every finite value with `∞ + x = ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

impl<T> Extended<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(t) => Some(t),
            Extended::Infinity => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Extended<U> {
        match self {
            Extended::Finite(t) => Extended::Finite(f(t)),
            Extended::Infinity => Extended::Infinity,
        }
    }
}

/// An exact real or `+∞`.
pub type ExtReal = Extended<ExactReal>;

impl ExtReal {
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (Extended::Infinity, Extended::Infinity) => Ok(Ordering::Equal),
            (Extended::Infinity, _) => Ok(Ordering::Greater),
            (_, Extended::Infinity) => Ok(Ordering::Less),
            (Extended::Finite(a), Extended::Finite(b)) => a.try_cmp(b),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Ok(Extended::Finite(a.checked_add(b)?)),
            _ => Ok(Extended::Infinity),
        }
    }

    /// Multiplies a finite value by a finite scalar; `∞·s = ∞` for `s > 0`.
    pub fn mul_real(&self, s: &ExactReal) -> Result<Self> {
        match self {
            Extended::Finite(a) => Ok(Extended::Finite(a.checked_mul(s)?)),
            Extended::Infinity => Ok(Extended::Infinity),
        }
    }

    pub fn div_real(&self, s: &ExactReal) -> Result<Self> {
        match self {
            Extended::Finite(a) => Ok(Extended::Finite(a.checked_div(s)?)),
            Extended::Infinity => Ok(Extended::Infinity),
        }
    }

    pub fn min_of(values: impl IntoIterator<Item = ExtReal>) -> Result<ExtReal> {
        let mut best = Extended::Infinity;
        for v in values {
            if v.try_cmp(&best)? == Ordering::Less {
                best = v;
            }
        }
        Ok(best)
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(t) => t.fmt(f),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(Extended::Infinity)
        } else {
            s.parse().map(Extended::Finite)
        }
    }
}
