//! Integer lattice vectors, dual linear forms and exact linear algebra on them.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, structural};
use crate::Result;

/// A vector of the weight lattice `N`, in a fixed basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

/// An element of the dual lattice `M`, in the dual basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
}

macro_rules! integer_tuple {
    ($ty:ident, $field:ident) => {
        impl $ty {
            pub fn new(values: Vec<BigInt>) -> Result<Self> {
                if values.is_empty() {
                    return Err(structural!("{} must have dimension at least 1", stringify!($ty)));
                }
                Ok(Self { $field: values })
            }

            /// Builds from machine integers. Panics on an empty slice.
            pub fn from_i64s(values: &[i64]) -> Self {
                Self::new(values.iter().map(|&x| BigInt::from(x)).collect())
                    .expect("non-empty coordinate list")
            }

            pub fn zero(dim: usize) -> Self {
                assert!(dim >= 1, "dimension must be at least 1");
                Self { $field: alloc::vec![BigInt::zero(); dim] }
            }

            /// The `index`-th basis element of a lattice of dimension `dim`.
            pub fn unit(dim: usize, index: usize) -> Self {
                let mut out = Self::zero(dim);
                out.$field[index] = BigInt::one();
                out
            }

            pub fn dim(&self) -> usize {
                self.$field.len()
            }

            pub fn as_slice(&self) -> &[BigInt] {
                &self.$field
            }

            pub fn into_inner(self) -> Vec<BigInt> {
                self.$field
            }

            pub fn is_zero(&self) -> bool {
                self.$field.iter().all(Zero::is_zero)
            }

            pub fn scale(&self, k: &BigInt) -> Self {
                Self { $field: self.$field.iter().map(|x| x * k).collect() }
            }

            fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
                assert_eq!(self.dim(), other.dim(), "dimension mismatch");
                Self {
                    $field: self.$field.iter().zip(&other.$field).map(|(a, b)| f(a, b)).collect(),
                }
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                self.zip_with(rhs, |a, b| a + b)
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                self.zip_with(rhs, |a, b| a - b)
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty { $field: self.$field.iter().map(|x| -x).collect() }
            }
        }

        impl Mul<&$ty> for &BigInt {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                rhs.scale(self)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("(")?;
                for (k, x) in self.$field.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    };
}

integer_tuple!(LatticeVector, coords);
integer_tuple!(LinearForm, coeffs);

impl LatticeVector {
    /// Gcd of the coordinates, always `>= 0`; zero only for the zero vector.
    pub fn content(&self) -> BigInt {
        gcd_all(&self.coords)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }
}

fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Exact dual pairing `(m, v) = sum m_i v_i`.
pub fn pairing(m: &LinearForm, v: &LatticeVector) -> Result<BigInt> {
    if m.dim() != v.dim() {
        return Err(structural!(
            "pairing of a form of dimension {} with a vector of dimension {}",
            m.dim(),
            v.dim()
        ));
    }
    Ok(m.coeffs.iter().zip(&v.coords).map(|(a, b)| a * b).sum())
}

/// The primitive lattice vector on the ray through `v`.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(domain!("the zero vector spans no ray"));
    }
    Ok(LatticeVector { coords: v.coords.iter().map(|x| x / &g).collect() })
}

/// Determinant of the matrix whose rows are `vectors`.
///
/// Uses Bareiss fraction-free elimination, so every intermediate value is an
/// integer and every division is exact.
pub fn det(vectors: &[LatticeVector]) -> Result<BigInt> {
    let n = vectors.len();
    if n == 0 {
        return Err(structural!("determinant of an empty list"));
    }
    if let Some(bad) = vectors.iter().find(|v| v.dim() != n) {
        return Err(structural!(
            "determinant needs {n} vectors of dimension {n}, found one of dimension {}",
            bad.dim()
        ));
    }
    let mut a: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.coords.clone()).collect();
    Ok(bareiss_det(&mut a))
}

pub(crate) fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact coordinates of `target` in `basis`, by Cramer's rule.
pub fn solve_in_basis(basis: &[LatticeVector], target: &LatticeVector) -> Result<Vec<BigRational>> {
    let n = basis.len();
    if target.dim() != n {
        return Err(structural!(
            "target of dimension {} against a basis of {n} vectors",
            target.dim()
        ));
    }
    // Rows of the matrix are the coordinates, columns the basis vectors; the
    // determinant of the transpose is the same.
    let d = det(basis)?;
    if d.is_zero() {
        return Err(domain!("basis vectors are linearly dependent"));
    }
    (0..n)
        .map(|k| {
            let mut replaced = basis.to_vec();
            replaced[k] = target.clone();
            Ok(BigRational::new(det(&replaced)?, d.clone()))
        })
        .collect()
}

/// `sum c_k v_k` with rational coefficients, returned as a rational vector.
pub fn combine(coeffs: &[BigRational], vectors: &[LatticeVector]) -> Vec<BigRational> {
    assert_eq!(coeffs.len(), vectors.len(), "one coefficient per vector");
    let dim = vectors.first().map_or(0, LatticeVector::dim);
    let mut out = alloc::vec![BigRational::zero(); dim];
    for (c, v) in coeffs.iter().zip(vectors) {
        for (o, x) in out.iter_mut().zip(&v.coords) {
            *o += c * BigRational::from_integer(x.clone());
        }
    }
    out
}

/// Cross product of two vectors of `Z^3`.
pub fn cross(u: &LatticeVector, v: &LatticeVector) -> Result<LinearForm> {
    if u.dim() != 3 || v.dim() != 3 {
        return Err(structural!("cross product is defined in dimension 3 only"));
    }
    let (a, b) = (&u.coords, &v.coords);
    Ok(LinearForm {
        coeffs: alloc::vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ],
    })
}
