//! Dense exact linear algebra and a two-phase simplex solver.
//!
//! Everything is generic over [`Scalar`], an ordered field. It is implemented for
//! `BigRational` and for [`ExactReal`]; for the latter the caller must make sure
//! every entry lives in a single field `Q(sqrt(d))`.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::ExactReal;

pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sign(&self) -> Ordering;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }
    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }
    fn cmp_to(&self, o: &Self) -> Ordering {
        self.sub(o).sign()
    }
    fn abs(&self) -> Self {
        if self.is_neg() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn cmp_to(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

const SAME_FIELD: &str = "scalars in one computation share a radicand";

impl Scalar for ExactReal {
    fn zero() -> Self {
        ExactReal::zero()
    }
    fn one() -> Self {
        ExactReal::one()
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect(SAME_FIELD)
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(o).expect(SAME_FIELD)
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect(SAME_FIELD)
    }
    fn div(&self, o: &Self) -> Self {
        self.checked_div(o).expect(SAME_FIELD)
    }
    fn neg(&self) -> Self {
        ExactReal::neg(self)
    }
    fn sign(&self) -> Ordering {
        self.signum()
    }
}

/// Solves the square system `a·x = b` by Gaussian elimination.
/// Returns `None` when `a` is singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for k in col..=n {
            m[col][k] = m[col][k].div(&p);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let t = m[col][k].mul(&f);
                    m[r][k] = m[r][k].sub(&t);
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// One linear constraint `coeffs·x  rel  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub rel: Rel,
    pub rhs: S,
}

impl<S> Constraint<S> {
    pub fn new(coeffs: Vec<S>, rel: Rel, rhs: S) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, x: Vec<S> },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>, // last entry is the rhs
    obj: Vec<S>,       // reduced costs; last entry is the objective value
    basis: Vec<usize>,
    ncols: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.div(&p);
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v = v.sub(&pv.mul(&f));
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                *v = v.sub(&pv.mul(&f));
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes with Bland's rule over the columns allowed to enter.
    /// Returns false when unbounded.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed(j) && self.obj[j].is_neg()) else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_pos() {
                    let ratio = row[self.ncols].div(&row[c]);
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => match ratio.cmp_to(br) {
                            Ordering::Less => true,
                            Ordering::Equal => self.basis[i] < self.basis[*bi],
                            Ordering::Greater => false,
                        },
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn set_objective(&mut self, costs: &[S]) {
        // reduced costs of `max costs·x`: -c_j, then eliminate basic columns
        let mut obj: Vec<S> = (0..=self.ncols)
            .map(|j| costs.get(j).map_or_else(S::zero, |c| c.neg()))
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            if !obj[b].is_zero() {
                let f = obj[b].clone();
                for (v, rv) in obj.iter_mut().zip(&self.rows[i]) {
                    *v = v.sub(&rv.mul(&f));
                }
            }
        }
        self.obj = obj;
    }
}

/// Optimizes `objective·x` over `x >= 0` subject to `constraints`.
pub fn simplex<S: Scalar>(
    sense: Sense,
    objective: &[S],
    constraints: &[Constraint<S>],
) -> LpOutcome<S> {
    let nvars = objective.len();
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
    let n_art = constraints
        .iter()
        .filter(|c| {
            let flip = c.rhs.is_neg();
            match c.rel {
                Rel::Eq => true,
                Rel::Le => flip,
                Rel::Ge => !flip,
            }
        })
        .count();
    let ncols = nvars + n_slack + n_art;
    let art_start = nvars + n_slack;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut slack, mut art) = (nvars, art_start);
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint width");
        let flip = c.rhs.is_neg();
        let sgn = |v: &S| if flip { v.neg() } else { v.clone() };
        let mut row: Vec<S> = vec![S::zero(); ncols + 1];
        for (j, v) in c.coeffs.iter().enumerate() {
            row[j] = sgn(v);
        }
        row[ncols] = sgn(&c.rhs);
        let rel = match (c.rel, flip) {
            (Rel::Le, true) => Rel::Ge,
            (Rel::Ge, true) => Rel::Le,
            (r, _) => r,
        };
        match rel {
            Rel::Le => {
                row[slack] = S::one();
                basis.push(slack);
                slack += 1;
            }
            Rel::Ge => {
                row[slack] = S::one().neg();
                slack += 1;
                row[art] = S::one();
                basis.push(art);
                art += 1;
            }
            Rel::Eq => {
                row[art] = S::one();
                basis.push(art);
                art += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau { rows, obj: Vec::new(), basis, ncols };

    if n_art > 0 {
        let mut phase1 = vec![S::zero(); ncols];
        for v in phase1.iter_mut().skip(art_start) {
            *v = S::one().neg();
        }
        t.set_objective(&phase1);
        t.optimize(|_| true);
        // obj[ncols] is the optimum of -Σ artificials
        if !t.obj[ncols].is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive degenerate artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, c);
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    let mut costs: Vec<S> = match sense {
        Sense::Max => objective.to_vec(),
        Sense::Min => objective.iter().map(|c| c.neg()).collect(),
    };
    costs.resize(ncols, S::zero());
    t.set_objective(&costs);
    if !t.optimize(|j| j < art_start) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![S::zero(); nvars];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < nvars {
            x[b] = t.rows[i][ncols].clone();
        }
    }
    let mut value = S::zero();
    for (c, xi) in objective.iter().zip(&x) {
        value = value.add(&c.mul(xi));
    }
    LpOutcome::Optimal { value, x }
}

/// True iff some `x >= 0` satisfies every constraint.
pub fn feasible<S: Scalar>(nvars: usize, constraints: &[Constraint<S>]) -> bool {
    !matches!(
        simplex(Sense::Max, &vec![S::zero(); nvars], constraints),
        LpOutcome::Infeasible
    )
}
