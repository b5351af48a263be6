//! Two-component exceptional sets `S1 ∪ S2` meeting along a curve `C`.
//!
//! `S_i` is a ruled surface over `C` (genus `g`) whose normal bundle has
//! degree `-d_j` on `C` and degree `-x_i` on the ruling `F_i`; the ruling of
//! the other surface meets `S_i` once. The cone of curves of `S_i` is spanned
//! by `C` and `F_i`, so three curve classes carry all the intersection data.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::criterion::{certify, Certification, CurveClass, ExceptionalDivisor, ResolutionData, Verdict};
use crate::error::{domain, inconsistent};
use crate::Result;

pub const COMPONENT_NAMES: [&str; 2] = ["S1", "S2"];
pub const CURVE_NAMES: [&str; 3] = ["C", "F1", "F2"];

/// `(g, d1, d2, x1, x2)`: genus of `C`, minus the degrees of the two line
/// bundles, and the two twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyParams {
    pub genus: u64,
    pub d1: u64,
    pub d2: u64,
    pub x1: u64,
    pub x2: u64,
}

impl FamilyParams {
    pub fn new(genus: u64, d1: u64, d2: u64, x1: u64, x2: u64) -> Result<Self> {
        let p = Self { genus, d1, d2, x1, x2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d1 == 0 || self.d2 == 0 {
            return Err(domain!(
                "d1 and d2 must be positive: the line bundles L1, L2 have degree -d1 < 0 and -d2 < 0 on C (got d1={}, d2={})",
                self.d1,
                self.d2
            ));
        }
        if self.x1 == 0 || self.x2 == 0 {
            return Err(domain!(
                "x1 and x2 must be positive twists (got x1={}, x2={})",
                self.x1,
                self.x2
            ));
        }
        Ok(())
    }

    /// The same family with the roles of `S1` and `S2` exchanged.
    pub fn swapped(&self) -> Self {
        Self { genus: self.genus, d1: self.d2, d2: self.d1, x1: self.x2, x2: self.x1 }
    }

    fn signed(&self) -> (i128, i128, i128, i128) {
        (self.d1.into(), self.d2.into(), self.x1.into(), self.x2.into())
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} d1={} d2={} x1={} x2={}", self.genus, self.d1, self.d2, self.x1, self.x2)
    }
}

/// Intersection rows: `C.(S1, S2) = (-d2, -d1)`, `F1.(S1, S2) = (-x1, 1)`,
/// `F2.(S1, S2) = (1, -x2)`.
pub fn make_resolution_data(p: &FamilyParams) -> Result<ResolutionData> {
    p.validate()?;
    let big = |x: u64| BigInt::from(x);
    let curve = |name: &str, component: Option<&str>, row: [BigInt; 2]| CurveClass {
        name: name.into(),
        component: component.map(Into::into),
        intersections: row.to_vec(),
    };
    ResolutionData::new(
        COMPONENT_NAMES.iter().map(|s| String::from(*s)).collect(),
        vec![
            curve(CURVE_NAMES[0], None, [-big(p.d2), -big(p.d1)]),
            curve(CURVE_NAMES[1], Some(COMPONENT_NAMES[0]), [-big(p.x1), BigInt::from(1)]),
            curve(CURVE_NAMES[2], Some(COMPONENT_NAMES[1]), [BigInt::from(1), -big(p.x2)]),
        ],
    )
}

/// Which strict side of the diagonal a pair `(α1, α2)` lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `α1 < α2`; certifies `S1`.
    FirstSmaller,
    /// `α2 < α1`; certifies `S2`.
    SecondSmaller,
}

/// Integer solutions of `1/x1 < α1/α2 < x2`, split by side of the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalFeasibility {
    Empty,
    OneSided { side: Side, witness: (u64, u64) },
    TwoSided { first_smaller: (u64, u64), second_smaller: (u64, u64) },
}

impl IntervalFeasibility {
    pub fn side_feasible(&self, side: Side) -> bool {
        self.witness(side).is_some()
    }

    pub fn witness(&self, side: Side) -> Option<(u64, u64)> {
        match (*self, side) {
            (IntervalFeasibility::Empty, _) => None,
            (IntervalFeasibility::OneSided { side: s, witness }, _) => (s == side).then_some(witness),
            (IntervalFeasibility::TwoSided { first_smaller, .. }, Side::FirstSmaller) => Some(first_smaller),
            (IntervalFeasibility::TwoSided { second_smaller, .. }, Side::SecondSmaller) => Some(second_smaller),
        }
    }
}

/// `C.F < 0`, `F1.F < 0`, `F2.F < 0` for `F = α1 S1 + α2 S2`, written out.
fn in_ample_region(p: &FamilyParams, a1: i128, a2: i128) -> bool {
    let (d1, d2, x1, x2) = p.signed();
    a1 * d2 + a2 * d1 > 0 && a1 * x1 - a2 > 0 && a2 * x2 - a1 > 0
}

/// Smallest-sum, then lexicographic, pair in the ample region satisfying
/// `filter`. Any nonempty side contains `(2, 3)` or `(3, 2)`, and the region
/// itself contains one of those or `(1, 1)`, so sums up to 5 suffice.
fn smallest_pair(p: &FamilyParams, filter: impl Fn(i128, i128) -> bool) -> Option<(u64, u64)> {
    (2..=5i128).find_map(|s| {
        (1..s).map(|a1| (a1, s - a1)).find(|&(a1, a2)| filter(a1, a2) && in_ample_region(p, a1, a2))
    })
    .map(|(a1, a2)| (a1 as u64, a2 as u64))
}

/// The open interval `(1/x1, x2)` of admissible ratios `α1/α2`.
pub fn ratio_interval(p: &FamilyParams) -> (BigRational, BigRational) {
    (BigRational::new(1.into(), p.x1.into()), BigRational::from_integer(p.x2.into()))
}

/// Closed-form solution of the ratio inequalities.
///
/// The interval `(1/x1, x2)` is nonempty iff `x1 x2 > 1`. It meets
/// `α1 < α2` (ratios below 1) iff `1/x1 < 1`, i.e. `x1 >= 2`, and meets
/// `α2 < α1` iff `x2 >= 2`.
pub fn interval_feasibility(p: &FamilyParams) -> IntervalFeasibility {
    let below = if p.x1 >= 2 { smallest_pair(p, |a1, a2| a1 < a2) } else { None };
    let above = if p.x2 >= 2 { smallest_pair(p, |a1, a2| a2 < a1) } else { None };
    debug_assert_eq!(below.is_some(), p.x1 >= 2);
    debug_assert_eq!(above.is_some(), p.x2 >= 2);
    match (below, above) {
        (None, None) => IntervalFeasibility::Empty,
        (Some(w), None) => IntervalFeasibility::OneSided { side: Side::FirstSmaller, witness: w },
        (None, Some(w)) => IntervalFeasibility::OneSided { side: Side::SecondSmaller, witness: w },
        (Some(first_smaller), Some(second_smaller)) => {
            IntervalFeasibility::TwoSided { first_smaller, second_smaller }
        }
    }
}

/// Closed-form contraction witness: the smallest pair in the interval.
pub fn interval_witness(p: &FamilyParams) -> Option<(u64, u64)> {
    if p.x1 * p.x2 > 1 {
        smallest_pair(p, |_, _| true)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyClassification {
    pub params: FamilyParams,
    /// `S1 ∪ S2` contracts to a point.
    pub contractible: bool,
    pub grauert_certificate: Option<(BigInt, BigInt)>,
    pub interval: (BigRational, BigRational),
    pub sides: IntervalFeasibility,
    /// Verdicts for `S1`, `S2`.
    pub components: [Verdict; 2],
    pub nash: Verdict,
    /// The certifier's full output on [`make_resolution_data`], after it has
    /// been checked against the closed form.
    pub certification: Certification,
    pub data: ResolutionData,
}

fn pair_of(f: &ExceptionalDivisor) -> (BigInt, BigInt) {
    (f.coeffs()[0].clone(), f.coeffs()[1].clone())
}

fn big_pair((a, b): (u64, u64)) -> (BigInt, BigInt) {
    (a.into(), b.into())
}

/// Classifies by the closed form and by the general certifier, failing with
/// an internal consistency error if they disagree anywhere.
pub fn classify(p: &FamilyParams) -> Result<FamilyClassification> {
    let data = make_resolution_data(p)?;
    let certification = certify(&data)?;
    let sides = interval_feasibility(p);

    let contractible = p.x1 * p.x2 > 1;
    if contractible != certification.contractible() {
        return Err(inconsistent!(
            "{p}: closed form says contractible={contractible}, certifier says {}",
            certification.contractible()
        ));
    }
    let closed_grauert = interval_witness(p).map(big_pair);
    let engine_grauert = certification.grauert.as_ref().map(pair_of);
    if closed_grauert != engine_grauert {
        return Err(inconsistent!(
            "{p}: contraction witness {closed_grauert:?} from the interval, {engine_grauert:?} from the certifier"
        ));
    }

    let mut components = [Verdict::Undetermined; 2];
    for (i, side) in [Side::FirstSmaller, Side::SecondSmaller].into_iter().enumerate() {
        let closed = if contractible { sides.witness(side).map(big_pair) } else { None };
        let engine = &certification.nash.components[i];
        let engine_cert = engine.certificates.first().map(|(_, f)| pair_of(f));
        if closed != engine_cert || closed.is_some() != engine.verdict.is_certified() {
            return Err(inconsistent!(
                "{p}: {} certificate {closed:?} from the interval, {engine_cert:?} from the certifier",
                COMPONENT_NAMES[i]
            ));
        }
        components[i] = engine.verdict;
    }

    let nash_closed = p.x1 >= 2 && p.x2 >= 2;
    if nash_closed != certification.nash.verdict.is_certified() {
        return Err(inconsistent!(
            "{p}: closed form says bijective={nash_closed}, certifier says {:?}",
            certification.nash.verdict
        ));
    }

    Ok(FamilyClassification {
        params: *p,
        contractible,
        grauert_certificate: engine_grauert,
        interval: ratio_interval(p),
        sides,
        components,
        nash: certification.nash.verdict,
        certification,
        data,
    })
}

/// Every tuple `(d1, d2, x1, x2)` in `lo..=hi` in lexicographic order.
pub fn parameter_grid(genus: u64, lo: u64, hi: u64) -> Vec<FamilyParams> {
    parameter_box(genus, [(lo, hi); 4])
}

/// Every tuple with `d1`, `d2`, `x1`, `x2` in their own inclusive ranges.
pub fn parameter_box(genus: u64, ranges: [(u64, u64); 4]) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    let [r1, r2, r3, r4] = ranges;
    for d1 in r1.0..=r1.1 {
        for d2 in r2.0..=r2.1 {
            for x1 in r3.0..=r3.1 {
                for x2 in r4.0..=r4.1 {
                    out.push(FamilyParams { genus, d1, d2, x1, x2 });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: u64, d1: u64, d2: u64, x1: u64, x2: u64) -> FamilyParams {
        FamilyParams::new(g, d1, d2, x1, x2).unwrap()
    }

    fn rows(data: &ResolutionData) -> Vec<Vec<i64>> {
        data.curves()
            .iter()
            .map(|c| c.intersections.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn resolution_rows() {
        assert_eq!(rows(&make_resolution_data(&p(0, 1, 1, 2, 2)).unwrap()), vec![vec![-1, -1], vec![-2, 1], vec![1, -2]]);
        assert_eq!(rows(&make_resolution_data(&p(3, 2, 5, 1, 1)).unwrap()), vec![vec![-5, -2], vec![-1, 1], vec![1, -1]]);
        assert_eq!(rows(&make_resolution_data(&p(0, 1, 1, 1, 3)).unwrap()), vec![vec![-1, -1], vec![-1, 1], vec![1, -3]]);
    }

    #[test]
    fn invalid_params() {
        assert!(FamilyParams::new(0, 0, 1, 1, 1).is_err());
        assert!(FamilyParams::new(0, 1, 1, 0, 1).is_err());
        let bad = FamilyParams { genus: 0, d1: 1, d2: 0, x1: 1, x2: 1 };
        assert!(make_resolution_data(&bad).is_err());
    }

    #[test]
    fn interval_examples() {
        let two = interval_feasibility(&p(0, 1, 1, 2, 2));
        assert_eq!(two, IntervalFeasibility::TwoSided { first_smaller: (2, 3), second_smaller: (3, 2) });
        assert_eq!(interval_feasibility(&p(0, 1, 1, 1, 1)), IntervalFeasibility::Empty);
        assert_eq!(
            interval_feasibility(&p(0, 1, 1, 1, 3)),
            IntervalFeasibility::OneSided { side: Side::SecondSmaller, witness: (2, 1) }
        );
        assert_eq!(interval_witness(&p(0, 1, 1, 1, 2)), Some((3, 2)));
        assert_eq!(interval_witness(&p(0, 1, 1, 1, 1)), None);
    }

    #[test]
    fn interval_witnesses_match_brute_force() {
        for x1 in 1..=6 {
            for x2 in 1..=6 {
                let q = p(0, 1, 1, x1, x2);
                let brute = |keep: &dyn Fn(i128, i128) -> bool| {
                    let mut best: Option<(i128, i128)> = None;
                    for a1 in 1..=10i128 {
                        for a2 in 1..=10i128 {
                            // 1/x1 < a1/a2 < x2 in cross-multiplied form
                            let inside = a2 < a1 * x1 as i128 && a1 < a2 * x2 as i128;
                            if inside && keep(a1, a2) && best.is_none_or(|(b1, b2)| (a1 + a2, a1) < (b1 + b2, b1)) {
                                best = Some((a1, a2));
                            }
                        }
                    }
                    best.map(|(a, b)| (a as u64, b as u64))
                };
                let sides = interval_feasibility(&q);
                assert_eq!(sides.witness(Side::FirstSmaller), brute(&|a, b| a < b), "{q}");
                assert_eq!(sides.witness(Side::SecondSmaller), brute(&|a, b| b < a), "{q}");
                assert_eq!(interval_witness(&q), brute(&|_, _| true), "{q}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(&p(0, 1, 1, 2, 2)).unwrap();
        assert!(c.contractible);
        assert_eq!(c.nash, Verdict::Certified);
        assert_eq!(c.grauert_certificate, Some((1.into(), 1.into())));

        let c = classify(&p(1, 1, 1, 1, 1)).unwrap();
        assert!(!c.contractible);
        assert_eq!(c.grauert_certificate, None);

        let c = classify(&p(0, 1, 1, 1, 3)).unwrap();
        assert!(c.contractible);
        assert_eq!(c.components, [Verdict::Undetermined, Verdict::Certified]);
        assert_eq!(c.nash, Verdict::Undetermined);
    }

    #[test]
    fn classify_swap_symmetry_and_monotonicity() {
        for q in parameter_grid(2, 1, 4) {
            let a = classify(&q).unwrap();
            let b = classify(&q.swapped()).unwrap();
            assert_eq!(a.contractible, b.contractible);
            assert_eq!(a.nash, b.nash);
            assert_eq!(a.components, [b.components[1], b.components[0]]);
            let flip = |c: &Option<(BigInt, BigInt)>| c.clone().map(|(x, y)| (y, x));
            assert_eq!(a.grauert_certificate, flip(&b.grauert_certificate));
            if a.contractible {
                let up1 = FamilyParams { x1: q.x1 + 1, ..q };
                let up2 = FamilyParams { x2: q.x2 + 1, ..q };
                assert!(classify(&up1).unwrap().contractible && classify(&up2).unwrap().contractible);
            }
        }
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let g = parameter_grid(0, 1, 2);
        assert_eq!(g.len(), 16);
        let keys: Vec<_> = g.iter().map(|q| (q.d1, q.d2, q.x1, q.x2)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
