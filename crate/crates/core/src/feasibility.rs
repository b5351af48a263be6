//! Exact Fourier-Motzkin elimination.
//!
//! A [`System`] is a conjunction of inequalities `sum c_k x_k <= b` with
//! integer coefficients over rational unknowns. Rows are kept fraction-free:
//! eliminating a variable combines a positive and a negative row with
//! nonnegative integer multipliers and divides out the common content, so
//! every elimination is exact. The systems handled here have a handful of
//! unknowns, where the quadratic row growth of the method is harmless.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, structural};
use crate::Result;

/// `sum coeffs[k] * x_k <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
}

impl Inequality {
    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn normalized(mut self) -> Self {
        let g = self.coeffs.iter().fold(self.rhs.abs(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.rhs /= &g;
        }
        self
    }

    /// Does the rational point satisfy this row?
    pub fn holds_at(&self, point: &[BigRational]) -> bool {
        let lhs: BigRational = self
            .coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| x * BigRational::from_integer(c.clone()))
            .sum();
        lhs <= BigRational::from_integer(self.rhs.clone())
    }
}

/// Closed interval bounds of a single unknown; `None` means unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
}

impl Bounds {
    fn contains(&self, x: &BigRational) -> bool {
        self.lower.as_ref().is_none_or(|lo| lo <= x) && self.upper.as_ref().is_none_or(|hi| x <= hi)
    }
}

/// A conjunction of linear inequalities in `nvars` rational unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    nvars: usize,
    rows: Vec<Inequality>,
    /// Set once a row `0 <= b` with `b < 0` has been seen.
    contradicted: bool,
}

impl System {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, rows: Vec::new(), contradicted: false }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn push_le(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) -> Result<()> {
        if coeffs.len() != self.nvars {
            return Err(structural!(
                "row of length {} in a system of {} unknowns",
                coeffs.len(),
                self.nvars
            ));
        }
        self.insert(Inequality { coeffs, rhs });
        Ok(())
    }

    pub fn push_ge(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) -> Result<()> {
        self.push_le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn push_eq(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) -> Result<()> {
        self.push_le(coeffs.clone(), rhs.clone())?;
        self.push_ge(coeffs, rhs)
    }

    fn insert(&mut self, row: Inequality) {
        if row.is_trivial() {
            if row.rhs.is_negative() {
                self.contradicted = true;
            }
            return;
        }
        self.rows.push(row.normalized());
    }

    fn dedup(&mut self) {
        let set: BTreeSet<Inequality> = core::mem::take(&mut self.rows).into_iter().collect();
        self.rows = set.into_iter().collect();
    }

    /// Projects out unknown `var`; the result has the same arity with a zero
    /// column at `var`.
    pub fn eliminate(&self, var: usize) -> System {
        assert!(var < self.nvars, "unknown index out of range");
        let mut out = System { nvars: self.nvars, rows: Vec::new(), contradicted: self.contradicted };
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for row in &self.rows {
            let c = &row.coeffs[var];
            if c.is_positive() {
                pos.push(row);
            } else if c.is_negative() {
                neg.push(row);
            } else {
                out.rows.push(row.clone());
            }
        }
        for p in &pos {
            for n in &neg {
                let (cp, cn) = (&p.coeffs[var], -&n.coeffs[var]);
                let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| a * &cn + b * cp).collect();
                let rhs = &p.rhs * &cn + &n.rhs * cp;
                out.insert(Inequality { coeffs, rhs });
            }
        }
        out.dedup();
        out
    }

    /// Fixes unknown `var` to `value`, leaving a zero column.
    pub fn substitute(&self, var: usize, value: &BigRational) -> System {
        let (p, q) = (value.numer(), value.denom());
        let mut out = System { nvars: self.nvars, rows: Vec::new(), contradicted: self.contradicted };
        for row in &self.rows {
            let c = row.coeffs[var].clone();
            let mut coeffs: Vec<BigInt> = row.coeffs.iter().map(|a| a * q).collect();
            coeffs[var] = BigInt::zero();
            let rhs = &row.rhs * q - c * p;
            out.insert(Inequality { coeffs, rhs });
        }
        out.dedup();
        out
    }

    fn single_variable_bounds(&self, var: usize) -> Option<Bounds> {
        if self.contradicted {
            return None;
        }
        let mut b = Bounds { lower: None, upper: None };
        for row in &self.rows {
            debug_assert!(row.coeffs.iter().enumerate().all(|(k, c)| k == var || c.is_zero()));
            let c = &row.coeffs[var];
            let limit = BigRational::new(row.rhs.clone(), c.clone());
            if c.is_positive() {
                if b.upper.as_ref().is_none_or(|u| &limit < u) {
                    b.upper = Some(limit);
                }
            } else if b.lower.as_ref().is_none_or(|l| &limit > l) {
                b.lower = Some(limit);
            }
        }
        match (&b.lower, &b.upper) {
            (Some(lo), Some(hi)) if lo > hi => None,
            _ => Some(b),
        }
    }

    /// Bounds of unknown `var` over the feasible set, or `None` if the system
    /// is infeasible.
    pub fn bounds(&self, var: usize) -> Option<Bounds> {
        let mut sys = self.clone();
        for k in 0..self.nvars {
            if k != var {
                sys = sys.eliminate(k);
                if sys.contradicted {
                    return None;
                }
            }
        }
        sys.single_variable_bounds(var)
    }

    pub fn is_feasible(&self) -> bool {
        let mut sys = self.clone();
        for k in 0..self.nvars {
            sys = sys.eliminate(k);
        }
        !sys.contradicted
    }

    /// A rational point satisfying every row, recovered by back-substitution
    /// through the elimination sequence.
    pub fn feasible_point(&self) -> Option<Vec<BigRational>> {
        // stages[k] has unknowns k.. eliminated; stages[nvars] is fully projected.
        let mut stages = Vec::with_capacity(self.nvars + 1);
        stages.push(self.clone());
        for k in (0..self.nvars).rev() {
            let next = stages.last().expect("non-empty").eliminate(k);
            stages.push(next);
        }
        stages.reverse();
        // Now stages[k] involves only unknowns 0..k.
        if stages[0].contradicted {
            return None;
        }
        let mut point = Vec::with_capacity(self.nvars);
        for k in 0..self.nvars {
            let mut sys = stages[k + 1].clone();
            for (j, x) in point.iter().enumerate() {
                sys = sys.substitute(j, x);
            }
            let b = sys.single_variable_bounds(k)?;
            let x = match (b.lower, b.upper) {
                (Some(lo), _) => lo,
                (None, Some(hi)) => hi,
                (None, None) => BigRational::zero(),
            };
            point.push(x);
        }
        debug_assert!(self.rows.iter().all(|r| r.holds_at(&point)));
        Some(point)
    }

    fn with_sum_fixed(&self, sum: &BigInt) -> System {
        let mut sys = self.clone();
        sys.push_eq(alloc::vec![BigInt::one(); self.nvars], sum.clone())
            .expect("row length equals arity");
        sys
    }

    /// Rational lower bound of `sum x_k` over the feasible set.
    fn sum_lower_bound(&self) -> Option<Option<BigRational>> {
        let n = self.nvars;
        let mut lifted = System::new(n + 1);
        lifted.contradicted = self.contradicted;
        for row in &self.rows {
            let mut coeffs = row.coeffs.clone();
            coeffs.push(BigInt::zero());
            lifted.insert(Inequality { coeffs, rhs: row.rhs.clone() });
        }
        let mut link = alloc::vec![BigInt::one(); n];
        link.push(-BigInt::one());
        lifted.push_eq(link, BigInt::zero()).expect("row length equals arity");
        lifted.bounds(n).map(|b| b.lower)
    }

    /// The integer point with the smallest coordinate sum, ties broken by
    /// lexicographic order, among points whose sum is at most `max_sum`.
    ///
    /// The feasible set must have a coordinate sum bounded below and every
    /// slice `sum x_k = s` must be bounded; otherwise a domain error is
    /// returned.
    pub fn canonical_integer_point(&self, max_sum: &BigInt) -> Result<Option<Vec<BigInt>>> {
        let start = match self.sum_lower_bound() {
            None => return Ok(None),
            Some(None) => return Err(domain!("coordinate sum is unbounded below")),
            Some(Some(lo)) => lo.ceil().to_integer(),
        };
        let mut s = start;
        while &s <= max_sum {
            let slice = self.with_sum_fixed(&s);
            let mut prefix = Vec::with_capacity(self.nvars);
            if lex_min_integer(&slice, &mut prefix)? {
                return Ok(Some(prefix));
            }
            s += 1;
        }
        Ok(None)
    }
}

/// Depth-first search in lexicographic order. On success `prefix` holds the
/// full point.
fn lex_min_integer(sys: &System, prefix: &mut Vec<BigInt>) -> Result<bool> {
    let k = prefix.len();
    if k == sys.nvars {
        return Ok(!sys.contradicted && sys.rows.iter().all(|r| !r.rhs.is_negative()));
    }
    let Some(b) = sys.bounds(k) else {
        return Ok(false);
    };
    let (Some(lo), Some(hi)) = (&b.lower, &b.upper) else {
        return Err(domain!("unknown {k} is unbounded on a fixed-sum slice"));
    };
    let (mut x, hi) = (lo.ceil().to_integer(), hi.floor().to_integer());
    while x <= hi {
        debug_assert!(b.contains(&BigRational::from_integer(x.clone())));
        let next = sys.substitute(k, &BigRational::from_integer(x.clone()));
        prefix.push(x.clone());
        if lex_min_integer(&next, prefix)? {
            return Ok(true);
        }
        prefix.pop();
        x += 1;
    }
    Ok(false)
}
