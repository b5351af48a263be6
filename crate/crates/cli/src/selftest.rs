//! Brute-force cross-check of the certifier.
//!
//! Enumerates every coefficient vector in `[1..B]^n` and compares the
//! smallest-sum, then lexicographic, solution with the certifier's canonical
//! one. Only used for `n <= 3`; larger boxes are skipped.

use nashcone_core::criterion::{find_grauert_certificate, find_pair_certificate, ResolutionData};
use num_bigint::BigInt;
use num_traits::Signed;

use crate::report::SelfTest;
use crate::AppError;

pub const DEFAULT_BOUND: u64 = 50;
pub const BOUND_ENV: &str = "NASHCONE_BRUTE_BOUND";
const MAX_COMPONENTS: usize = 3;

pub fn bound_from_env() -> Result<u64, AppError> {
    match std::env::var(BOUND_ENV) {
        Err(_) => Ok(DEFAULT_BOUND),
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&b| b >= 1)
            .ok_or_else(|| AppError::Usage(format!("{BOUND_ENV} must be a positive integer, got {s:?}"))),
    }
}

/// Smallest point of the box satisfying every strict inequality, with the
/// optional pair constraint `a_i < a_j`.
pub fn brute_force(data: &ResolutionData, pair: Option<(usize, usize)>, bound: u64) -> Option<Vec<u64>> {
    let n = data.len();
    let mut point = vec![1u64; n];
    let mut best: Option<(u64, Vec<u64>)> = None;
    loop {
        let order_ok = pair.is_none_or(|(i, j)| point[i] < point[j]);
        if order_ok && satisfies(data, &point) {
            let sum: u64 = point.iter().sum();
            if best.as_ref().is_none_or(|(s, p)| (sum, &point) < (*s, p)) {
                best = Some((sum, point.clone()));
            }
        }
        // odometer
        let mut k = n;
        loop {
            if k == 0 {
                return best.map(|(_, p)| p);
            }
            k -= 1;
            if point[k] < bound {
                point[k] += 1;
                break;
            }
            point[k] = 1;
        }
    }
}

fn satisfies(data: &ResolutionData, point: &[u64]) -> bool {
    data.curves().iter().all(|c| {
        let v: BigInt = c.intersections.iter().zip(point).map(|(z, &a)| z * BigInt::from(a)).sum();
        v.is_negative()
    })
}

fn agree(engine: Option<Vec<u64>>, brute: Option<Vec<u64>>, bound: u64) -> bool {
    match (&engine, &brute) {
        (None, Some(_)) => false,
        (Some(e), _) if e.iter().all(|&x| x <= bound) => brute.as_ref() == Some(e),
        _ => true,
    }
}

fn as_u64s(f: &nashcone_core::criterion::ExceptionalDivisor) -> Vec<u64> {
    f.coeffs().iter().map(|x| u64::try_from(x).unwrap_or(u64::MAX)).collect()
}

pub fn run(data: &ResolutionData, bound: u64) -> Result<SelfTest, AppError> {
    let n = data.len();
    if n > MAX_COMPONENTS {
        return Ok(SelfTest { bound, pairs_checked: 0, skipped: true, passed: true });
    }
    let grauert = find_grauert_certificate(data).map_err(AppError::from_core)?;
    let mut passed = agree(grauert.as_ref().map(as_u64s), brute_force(data, None, bound), bound);
    let mut pairs_checked = 0;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let engine = find_pair_certificate(data, i, j).map_err(AppError::from_core)?;
            passed &= agree(engine.as_ref().map(as_u64s), brute_force(data, Some((i, j)), bound), bound);
            pairs_checked += 1;
        }
    }
    Ok(SelfTest { bound, pairs_checked, skipped: false, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nashcone_core::family::{make_resolution_data, FamilyParams};

    #[test]
    fn brute_force_finds_canonical_points() {
        let data = make_resolution_data(&FamilyParams::new(0, 1, 1, 2, 2).unwrap()).unwrap();
        assert_eq!(brute_force(&data, None, 10), Some(vec![1, 1]));
        assert_eq!(brute_force(&data, Some((0, 1)), 10), Some(vec![2, 3]));
        let flat = make_resolution_data(&FamilyParams::new(0, 1, 1, 1, 1).unwrap()).unwrap();
        assert_eq!(brute_force(&flat, None, 10), None);
    }

    #[test]
    fn self_test_passes_on_families() {
        for (x1, x2) in [(1, 1), (1, 3), (2, 2), (4, 1)] {
            let data = make_resolution_data(&FamilyParams::new(0, 2, 1, x1, x2).unwrap()).unwrap();
            let r = run(&data, 12).unwrap();
            assert!(r.passed && !r.skipped && r.pairs_checked == 2);
        }
    }
}
