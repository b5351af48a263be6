//! Ampleness certificates for exceptional divisors.
//!
//! A resolution is described only through intersection numbers: for each
//! supplied curve class `z` the row `(z.E_1, ..., z.E_n)`. A divisor
//! `F = sum a_k E_k` with full support makes `O(-F)` ample on the exceptional
//! set iff `F.z < 0` for every generator `z` of the cones of curves of the
//! components. The curves must generate those cones; this is the caller's
//! responsibility and cannot be checked from the numbers alone.
//!
//! Strict homogeneous inequalities over integers are solved as the closed
//! system `a_k >= 1`, `F.z <= -1` (and `a_j - a_i >= 1` for the pair
//! certificates). Its rational solutions scale to integer solutions, so
//! rational infeasibility is a proof that no certificate exists.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, inconsistent, structural};
use crate::feasibility::System;
use crate::Result;

/// A curve class together with its intersection numbers against each
/// exceptional component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub name: String,
    /// Component whose cone of curves this class helps generate; `None` for
    /// a class shared by several components.
    pub component: Option<String>,
    pub intersections: Vec<BigInt>,
}

impl CurveClass {
    pub fn new(name: impl Into<String>, component: Option<&str>, intersections: &[i64]) -> Self {
        Self {
            name: name.into(),
            component: component.map(Into::into),
            intersections: intersections.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    components: Vec<String>,
    curves: Vec<CurveClass>,
}

impl ResolutionData {
    pub fn new(components: Vec<String>, curves: Vec<CurveClass>) -> Result<Self> {
        if components.is_empty() {
            return Err(structural!("resolution data needs at least one exceptional component"));
        }
        if let Some(dup) = first_duplicate(&components) {
            return Err(structural!("duplicate component name {dup}"));
        }
        if curves.is_empty() {
            return Err(structural!("resolution data needs at least one curve class"));
        }
        let curve_names: Vec<String> = curves.iter().map(|c| c.name.clone()).collect();
        if let Some(dup) = first_duplicate(&curve_names) {
            return Err(structural!("duplicate curve name {dup}"));
        }
        let n = components.len();
        for c in &curves {
            if c.intersections.len() != n {
                return Err(structural!(
                    "curve {} has {} intersection numbers, expected {n}",
                    c.name,
                    c.intersections.len()
                ));
            }
            if let Some(label) = &c.component {
                if !components.contains(label) {
                    return Err(structural!("curve {} refers to unknown component {label}", c.name));
                }
            }
        }
        for comp in &components {
            let covered = curves.iter().any(|c| c.component.as_ref().is_none_or(|l| l == comp));
            if !covered {
                return Err(structural!("component {comp} has no curve class"));
            }
        }
        Ok(Self { components, curves })
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c == name)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(structural!("component index {i} out of range for {} components", self.len()));
        }
        Ok(())
    }
}

fn first_duplicate(names: &[String]) -> Option<&String> {
    names.iter().enumerate().find(|(k, n)| names[..*k].contains(n)).map(|(_, n)| n)
}

/// An effective divisor `sum a_k E_k` supported on the exceptional set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExceptionalDivisor {
    coeffs: Vec<BigInt>,
}

impl ExceptionalDivisor {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.iter().any(Signed::is_negative) {
            return Err(domain!("an effective divisor has nonnegative coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn has_full_support(&self) -> bool {
        self.coeffs.iter().all(Signed::is_positive)
    }

    pub fn scale(&self, k: &BigInt) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(structural!("adding divisors with different numbers of components"));
        }
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }
}

/// `F . z = sum a_k (z . E_k)`.
pub fn intersect(curve: &CurveClass, f: &ExceptionalDivisor) -> Result<BigInt> {
    if curve.intersections.len() != f.coeffs.len() {
        return Err(structural!(
            "divisor has {} coefficients but curve {} has {} intersection numbers",
            f.coeffs.len(),
            curve.name,
            curve.intersections.len()
        ));
    }
    Ok(curve.intersections.iter().zip(&f.coeffs).map(|(z, a)| z * a).sum())
}

/// `(curve name, F . z)` for every supplied curve.
pub fn intersection_table(data: &ResolutionData, f: &ExceptionalDivisor) -> Result<Vec<(String, BigInt)>> {
    data.curves.iter().map(|c| Ok((c.name.clone(), intersect(c, f)?))).collect()
}

/// True iff `F . z < 0` for every supplied curve, i.e. `O(-F)` restricted to
/// every exceptional component is ample.
pub fn kleiman_check(data: &ResolutionData, f: &ExceptionalDivisor) -> Result<bool> {
    if f.coeffs.len() != data.len() {
        return Err(structural!(
            "divisor has {} coefficients for {} components",
            f.coeffs.len(),
            data.len()
        ));
    }
    if !f.has_full_support() {
        return Err(domain!("the divisor must have full support on the exceptional set"));
    }
    for c in &data.curves {
        if !intersect(c, f)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn base_system(data: &ResolutionData) -> System {
    let n = data.len();
    let mut sys = System::new(n);
    for k in 0..n {
        let mut row = alloc::vec![BigInt::zero(); n];
        row[k] = BigInt::one();
        sys.push_ge(row, BigInt::one()).expect("arity n");
    }
    for c in &data.curves {
        sys.push_le(c.intersections.clone(), -BigInt::one()).expect("validated row length");
    }
    sys
}

/// Canonical integer solution: minimal coefficient sum, then lexicographic.
///
/// Every row of `sys` has the form `row . a <= b` with `b <= 0`, so a
/// rational solution scaled by the lcm of its denominators stays feasible;
/// its coefficient sum bounds the search.
fn canonical_certificate(data: &ResolutionData, sys: &System) -> Result<Option<ExceptionalDivisor>> {
    debug_assert!(sys.rows().iter().all(|r| !r.rhs.is_positive()));
    let Some(point) = sys.feasible_point() else {
        return Ok(None);
    };
    let lcm = point.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
    let scaled: Vec<BigInt> =
        point.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let max_sum: BigInt = scaled.iter().sum();
    let found = sys
        .canonical_integer_point(&max_sum)?
        .ok_or_else(|| inconsistent!("rational certificate found but no integer point up to sum {max_sum}"))?;
    let f = ExceptionalDivisor::new(found)?;
    if !kleiman_check(data, &f)? {
        return Err(inconsistent!("canonical certificate {:?} fails the ampleness check", f.coeffs));
    }
    Ok(Some(f))
}

/// A full-support divisor `F` with `O(-F)` ample on the exceptional set,
/// certifying that the exceptional set contracts to a point.
pub fn find_grauert_certificate(data: &ResolutionData) -> Result<Option<ExceptionalDivisor>> {
    canonical_certificate(data, &base_system(data))
}

/// A full-support divisor with `a_i < a_j` whose negative is ample on every
/// component.
pub fn find_pair_certificate(data: &ResolutionData, i: usize, j: usize) -> Result<Option<ExceptionalDivisor>> {
    data.check_index(i)?;
    data.check_index(j)?;
    if i == j {
        return Err(domain!("a pair certificate needs two distinct components, got {i} twice"));
    }
    let mut sys = base_system(data);
    let mut row = alloc::vec![BigInt::zero(); data.len()];
    row[j] = BigInt::one();
    row[i] = -BigInt::one();
    sys.push_ge(row, BigInt::one()).expect("arity n");
    let f = canonical_certificate(data, &sys)?;
    if let Some(f) = &f {
        if f.coeffs[i] >= f.coeffs[j] {
            return Err(inconsistent!("pair certificate violates a_{i} < a_{j}"));
        }
    }
    Ok(f)
}

/// One-directional verdict: the criterion is sufficient, not necessary, so it
/// never concludes that something fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Certified,
    Undetermined,
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        self == Verdict::Certified
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialityVerdict {
    pub component: usize,
    pub verdict: Verdict,
    /// `(j, F_ij)` for every `j != i` where a certificate exists, in order of `j`.
    pub certificates: Vec<(usize, ExceptionalDivisor)>,
    /// The `j` for which no certificate exists.
    pub missing: Vec<usize>,
}

/// Component `i` is essential whenever a pair certificate exists against
/// every other component.
pub fn certify_essential(data: &ResolutionData, i: usize) -> Result<EssentialityVerdict> {
    data.check_index(i)?;
    let mut certificates = Vec::new();
    let mut missing = Vec::new();
    for j in (0..data.len()).filter(|&j| j != i) {
        match find_pair_certificate(data, i, j)? {
            Some(f) => certificates.push((j, f)),
            None => missing.push(j),
        }
    }
    let verdict = if missing.is_empty() { Verdict::Certified } else { Verdict::Undetermined };
    Ok(EssentialityVerdict { component: i, verdict, certificates, missing })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashVerdict {
    pub verdict: Verdict,
    pub components: Vec<EssentialityVerdict>,
}

/// The Nash map is bijective once every component is certified essential.
pub fn certify_nash_bijective(data: &ResolutionData) -> Result<NashVerdict> {
    let components = (0..data.len()).map(|i| certify_essential(data, i)).collect::<Result<Vec<_>>>()?;
    let verdict = if components.iter().all(|c| c.verdict.is_certified()) {
        Verdict::Certified
    } else {
        Verdict::Undetermined
    };
    Ok(NashVerdict { verdict, components })
}

/// Everything the certifier can say about one resolution.
///
/// Without a contraction certificate there is no germ to speak of, so the
/// essentiality searches are skipped and every verdict is undetermined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub grauert: Option<ExceptionalDivisor>,
    pub nash: NashVerdict,
}

impl Certification {
    pub fn contractible(&self) -> bool {
        self.grauert.is_some()
    }
}

pub fn certify(data: &ResolutionData) -> Result<Certification> {
    let grauert = find_grauert_certificate(data)?;
    let nash = if grauert.is_some() {
        certify_nash_bijective(data)?
    } else {
        let components = (0..data.len())
            .map(|i| EssentialityVerdict {
                component: i,
                verdict: Verdict::Undetermined,
                certificates: Vec::new(),
                missing: (0..data.len()).filter(|&j| j != i).collect(),
            })
            .collect();
        NashVerdict { verdict: Verdict::Undetermined, components }
    };
    Ok(Certification { grauert, nash })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn family(d1: i64, d2: i64, x1: i64, x2: i64) -> ResolutionData {
        ResolutionData::new(
            vec!["S1".to_string(), "S2".to_string()],
            vec![
                CurveClass::new("C", None, &[-d2, -d1]),
                CurveClass::new("F1", Some("S1"), &[-x1, 1]),
                CurveClass::new("F2", Some("S2"), &[1, -x2]),
            ],
        )
        .unwrap()
    }

    fn single(z: i64) -> ResolutionData {
        ResolutionData::new(vec!["E".to_string()], vec![CurveClass::new("z", Some("E"), &[z])]).unwrap()
    }

    fn div(xs: &[i64]) -> ExceptionalDivisor {
        ExceptionalDivisor::from_i64s(xs).unwrap()
    }

    #[test]
    fn kleiman_examples() {
        let data = family(1, 1, 2, 2);
        assert!(kleiman_check(&data, &div(&[1, 1])).unwrap());
        let table = intersection_table(&data, &div(&[1, 1])).unwrap();
        let values: Vec<BigInt> = table.into_iter().map(|(_, v)| v).collect();
        assert_eq!(values, vec![BigInt::from(-2), BigInt::from(-1), BigInt::from(-1)]);
        assert!(!kleiman_check(&data, &div(&[1, 2])).unwrap());
        let flat = family(1, 1, 1, 1);
        for a in 1..=20 {
            for b in 1..=20 {
                assert!(!kleiman_check(&flat, &div(&[a, b])).unwrap());
            }
        }
    }

    #[test]
    fn kleiman_errors() {
        let data = family(1, 1, 2, 2);
        assert!(matches!(kleiman_check(&data, &div(&[1])), Err(crate::Error::Structural(_))));
        assert!(matches!(kleiman_check(&data, &div(&[0, 1])), Err(crate::Error::Domain(_))));
        assert!(ExceptionalDivisor::from_i64s(&[-1, 2]).is_err());
    }

    #[test]
    fn grauert_examples() {
        assert_eq!(find_grauert_certificate(&family(1, 1, 2, 2)).unwrap(), Some(div(&[1, 1])));
        assert_eq!(find_grauert_certificate(&family(1, 1, 1, 1)).unwrap(), None);
        assert_eq!(find_grauert_certificate(&single(-3)).unwrap(), Some(div(&[1])));
        assert_eq!(find_grauert_certificate(&single(2)).unwrap(), None);
    }

    #[test]
    fn pair_certificate_examples() {
        let data = family(1, 1, 2, 2);
        let f = find_pair_certificate(&data, 0, 1).unwrap().unwrap();
        assert_eq!(f, div(&[2, 3]));
        let values: Vec<BigInt> = intersection_table(&data, &f).unwrap().into_iter().map(|(_, v)| v).collect();
        assert_eq!(values, vec![BigInt::from(-5), BigInt::from(-1), BigInt::from(-4)]);

        let one_sided = family(1, 1, 1, 3);
        assert_eq!(find_pair_certificate(&one_sided, 1, 0).unwrap(), Some(div(&[2, 1])));
        assert_eq!(find_pair_certificate(&one_sided, 0, 1).unwrap(), None);
        assert!(matches!(find_pair_certificate(&data, 1, 1), Err(crate::Error::Domain(_))));
        assert!(matches!(find_pair_certificate(&data, 0, 2), Err(crate::Error::Structural(_))));
    }

    #[test]
    fn essentiality_examples() {
        let v = certify_essential(&family(1, 1, 2, 2), 0).unwrap();
        assert_eq!(v.verdict, Verdict::Certified);
        assert_eq!(v.certificates, vec![(1, div(&[2, 3]))]);
        let v = certify_essential(&family(1, 1, 1, 3), 0).unwrap();
        assert_eq!(v.verdict, Verdict::Undetermined);
        assert_eq!(v.missing, vec![1]);
        let v = certify_essential(&single(-1), 0).unwrap();
        assert_eq!(v.verdict, Verdict::Certified);
        assert!(v.certificates.is_empty());
    }

    #[test]
    fn nash_examples() {
        assert_eq!(certify_nash_bijective(&family(1, 1, 2, 2)).unwrap().verdict, Verdict::Certified);
        assert_eq!(certify_nash_bijective(&family(1, 1, 1, 3)).unwrap().verdict, Verdict::Undetermined);
        assert_eq!(certify_nash_bijective(&single(-5)).unwrap().verdict, Verdict::Certified);
    }

    #[test]
    fn certify_without_contraction_is_undetermined() {
        let c = certify(&family(3, 1, 1, 1)).unwrap();
        assert!(!c.contractible());
        assert_eq!(c.nash.verdict, Verdict::Undetermined);
        assert!(c.nash.components.iter().all(|v| v.verdict == Verdict::Undetermined));
        let c = certify(&single(4)).unwrap();
        assert!(!c.contractible());
        assert_eq!(c.nash.verdict, Verdict::Undetermined);
    }

    #[test]
    fn three_components_chain() {
        // A chain E1 - E2 - E3 of (-2)-type rows: each curve meets its own
        // component negatively and neighbours positively.
        let data = ResolutionData::new(
            vec!["E1".into(), "E2".into(), "E3".into()],
            vec![
                CurveClass::new("z1", Some("E1"), &[-2, 1, 0]),
                CurveClass::new("z2", Some("E2"), &[1, -2, 1]),
                CurveClass::new("z3", Some("E3"), &[0, 1, -2]),
            ],
        )
        .unwrap();
        let g = find_grauert_certificate(&data).unwrap().unwrap();
        assert!(kleiman_check(&data, &g).unwrap());
        // hand enumeration of sums 3..=7 in lexicographic order
        assert_eq!(g, div(&[2, 3, 2]));
        // brute force over [1..12]^3 in (sum, lex) order agrees with every pair search
        let rows = [[-2i64, 1, 0], [1, -2, 1], [0, 1, -2]];
        let brute = |i: usize, j: usize| {
            let mut pts: Vec<[i64; 3]> = Vec::new();
            for a in 1..=12 {
                for b in 1..=12 {
                    for c in 1..=12 {
                        let p = [a, b, c];
                        if p[i] < p[j] && rows.iter().all(|r| r[0] * a + r[1] * b + r[2] * c < 0) {
                            pts.push(p);
                        }
                    }
                }
            }
            pts.into_iter().min_by_key(|p| (p.iter().sum::<i64>(), *p))
        };
        for i in 0..3 {
            for j in (0..3).filter(|&j| j != i) {
                let found = find_pair_certificate(&data, i, j).unwrap();
                assert_eq!(found, brute(i, j).map(|p| div(&p)), "pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn resolution_data_validation() {
        let comps = || vec!["A".to_string(), "B".to_string()];
        assert!(ResolutionData::new(vec![], vec![CurveClass::new("z", None, &[])]).is_err());
        assert!(ResolutionData::new(comps(), vec![]).is_err());
        assert!(ResolutionData::new(comps(), vec![CurveClass::new("z", None, &[1])]).is_err());
        assert!(ResolutionData::new(vec!["A".into(), "A".into()], vec![CurveClass::new("z", None, &[1, 1])]).is_err());
        assert!(ResolutionData::new(
            comps(),
            vec![CurveClass::new("z", None, &[1, 1]), CurveClass::new("z", None, &[1, 1])]
        )
        .is_err());
        assert!(ResolutionData::new(comps(), vec![CurveClass::new("z", Some("Q"), &[1, 1])]).is_err());
        // B has no curve: the only curve is labelled A
        assert!(ResolutionData::new(comps(), vec![CurveClass::new("z", Some("A"), &[1, 1])]).is_err());
    }
}
