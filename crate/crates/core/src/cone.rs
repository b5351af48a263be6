//! Rational polyhedral cones and simplicial fans in `N = Z^3`.
//!
//! Membership, strict convexity and face compatibility are all decided as
//! exact rational feasibility problems (see [`crate::feasibility`]).

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, inconsistent, structural};
use crate::feasibility::System;
use crate::lattice::{cross, det, pairing, primitive, solve_in_basis, LatticeVector, LinearForm};
use crate::Result;

/// A cone `<l_1, ..., l_n>` given by generators of its edges.
///
/// Generators are kept as supplied. Edges of cones built from a [`Fan`] and
/// by [`Cone::primitive`] are primitive; only then does [`is_regular`] agree
/// with regularity of the underlying point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    edges: Vec<LatticeVector>,
}

impl Cone {
    /// Two generators on the same ray are rejected; opposite rays are allowed.
    pub fn new(generators: Vec<LatticeVector>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(structural!("a cone needs at least one edge"));
        };
        let dim = first.dim();
        let mut edges: Vec<LatticeVector> = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.dim() != dim {
                return Err(structural!("edge {g} does not live in dimension {dim}"));
            }
            let p = primitive(g)?;
            if edges.iter().any(|e| primitive(e).as_ref() == Ok(&p)) {
                return Err(domain!("two edges lie on the ray through {p}"));
            }
            edges.push(g.clone());
        }
        Ok(Self { edges })
    }

    /// Same cone with every generator replaced by its primitive vector.
    pub fn primitive(generators: Vec<LatticeVector>) -> Result<Self> {
        let edges = generators.iter().map(primitive).collect::<Result<Vec<_>>>()?;
        Self::new(edges)
    }

    pub fn edges(&self) -> &[LatticeVector] {
        &self.edges
    }

    pub fn ambient_dim(&self) -> usize {
        self.edges[0].dim()
    }
}

/// A linear form taking value `>= 1` on every edge, if one exists.
pub fn separating_form(c: &Cone) -> Option<LinearForm> {
    let d = c.ambient_dim();
    let mut sys = System::new(d);
    for e in c.edges() {
        sys.push_ge(e.as_slice().to_vec(), BigInt::one()).expect("matching arity");
    }
    let point = sys.feasible_point()?;
    Some(LinearForm::new(clear_denominators(&point)).expect("dimension >= 1"))
}

fn clear_denominators(point: &[BigRational]) -> Vec<BigInt> {
    let l = point.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
    point.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// True iff the cone contains no line.
pub fn is_strictly_convex(c: &Cone) -> bool {
    separating_form(c).is_some()
}

/// True iff `v` is a nonnegative rational combination of the edges.
pub fn contains(c: &Cone, v: &LatticeVector) -> bool {
    membership_coefficients(c, v).is_some()
}

/// Nonnegative coefficients writing `v` in terms of the edges of `c`.
pub fn membership_coefficients(c: &Cone, v: &LatticeVector) -> Option<Vec<BigRational>> {
    if v.dim() != c.ambient_dim() {
        return None;
    }
    let n = c.edges().len();
    let mut sys = System::new(n);
    for k in 0..n {
        let mut row = alloc::vec![BigInt::zero(); n];
        row[k] = BigInt::one();
        sys.push_ge(row, BigInt::zero()).expect("matching arity");
    }
    for (i, target) in v.as_slice().iter().enumerate() {
        let row = c.edges().iter().map(|e| e.as_slice()[i].clone()).collect();
        sys.push_eq(row, target.clone()).expect("matching arity");
    }
    sys.feasible_point()
}

/// True iff the generators of a simplicial cone form a lattice basis, i.e.
/// `|det| = 1`.
pub fn is_regular(c: &Cone) -> Result<bool> {
    if c.edges().len() != c.ambient_dim() {
        return Err(domain!(
            "regularity test needs a simplicial cone with {} edges, got {}",
            c.ambient_dim(),
            c.edges().len()
        ));
    }
    Ok(det(c.edges())?.abs().is_one())
}

/// A simplicial fan in `Z^3` with named rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    names: Vec<String>,
    rays: Vec<LatticeVector>,
    cones: Vec<[usize; 3]>,
}

impl Fan {
    /// Validates names, primitivity, indices and that every ray is used.
    /// Face compatibility is a separate, more expensive check
    /// ([`Fan::is_face_compatible`]).
    pub fn new(rays: Vec<(String, LatticeVector)>, cones: Vec<[usize; 3]>) -> Result<Self> {
        let mut names = Vec::with_capacity(rays.len());
        let mut vectors = Vec::with_capacity(rays.len());
        for (name, v) in rays {
            if v.dim() != 3 {
                return Err(structural!("ray {name} is not in dimension 3"));
            }
            if !v.is_primitive() {
                return Err(domain!("ray {name} = {v} is not primitive"));
            }
            if names.contains(&name) {
                return Err(structural!("duplicate ray name {name}"));
            }
            if vectors.contains(&v) {
                return Err(domain!("ray {name} repeats the vector {v}"));
            }
            names.push(name);
            vectors.push(v);
        }
        for cone in &cones {
            if cone.iter().any(|&k| k >= vectors.len()) {
                return Err(structural!("cone {cone:?} refers to a missing ray"));
            }
            if cone[0] == cone[1] || cone[1] == cone[2] || cone[0] == cone[2] {
                return Err(structural!("cone {cone:?} repeats a ray"));
            }
        }
        if let Some(unused) = (0..vectors.len()).find(|k| !cones.iter().any(|c| c.contains(k))) {
            return Err(domain!("ray {} lies in no maximal cone", names[unused]));
        }
        Ok(Self { names, rays: vectors, cones })
    }

    pub fn ray_names(&self) -> &[String] {
        &self.names
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[[usize; 3]] {
        &self.cones
    }

    pub fn ray_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn ray(&self, name: &str) -> Option<&LatticeVector> {
        self.ray_index(name).map(|k| &self.rays[k])
    }

    fn index_of_vector(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    pub fn cone(&self, k: usize) -> Cone {
        Cone { edges: self.cones[k].iter().map(|&i| self.rays[i].clone()).collect() }
    }

    /// Looks up the cone spanned by the named rays.
    pub fn cone_by_names(&self, names: &[&str]) -> Result<Cone> {
        let edges = names
            .iter()
            .map(|n| self.ray(n).cloned().ok_or_else(|| structural!("no ray named {n}")))
            .collect::<Result<Vec<_>>>()?;
        Cone::new(edges)
    }

    pub fn cone_label(&self, k: usize) -> String {
        let parts: Vec<&str> = self.cones[k].iter().map(|&i| self.names[i].as_str()).collect();
        alloc::format!("<{}>", parts.join(","))
    }

    pub fn all_regular(&self) -> bool {
        (0..self.cones.len()).all(|k| is_regular(&self.cone(k)).unwrap_or(false))
    }

    /// Every pair of maximal cones meets in the cone over their shared rays.
    ///
    /// For simplicial cones this holds iff some linear form vanishes on the
    /// shared rays and is positive on the remaining rays of one cone and
    /// negative on the remaining rays of the other.
    pub fn is_face_compatible(&self) -> bool {
        if self.cones.iter().any(|c| det(&self.cone_rays(c)).map_or(true, |d| d.is_zero())) {
            return false;
        }
        for (s, sigma) in self.cones.iter().enumerate() {
            for tau in &self.cones[s + 1..] {
                if !self.separated(sigma, tau) {
                    return false;
                }
            }
        }
        true
    }

    fn cone_rays(&self, c: &[usize; 3]) -> Vec<LatticeVector> {
        c.iter().map(|&i| self.rays[i].clone()).collect()
    }

    fn separated(&self, sigma: &[usize; 3], tau: &[usize; 3]) -> bool {
        let mut sys = System::new(3);
        for &i in sigma {
            let v = self.rays[i].as_slice().to_vec();
            if tau.contains(&i) {
                sys.push_eq(v, BigInt::zero()).expect("arity 3");
            } else {
                sys.push_ge(v, BigInt::one()).expect("arity 3");
            }
        }
        for &i in tau.iter().filter(|i| !sigma.contains(i)) {
            sys.push_le(self.rays[i].as_slice().to_vec(), -BigInt::one()).expect("arity 3");
        }
        sys.is_feasible()
    }

    /// The 2-faces `(u, w)` of maximal cones, with the indices of the maximal
    /// cones containing each.
    fn walls(&self) -> Vec<([usize; 2], Vec<usize>)> {
        let mut out: Vec<([usize; 2], Vec<usize>)> = Vec::new();
        for (k, c) in self.cones.iter().enumerate() {
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                let mut w = [c[p], c[q]];
                w.sort_unstable();
                match out.iter_mut().find(|(x, _)| *x == w) {
                    Some((_, owners)) => owners.push(k),
                    None => out.push((w, alloc::vec![k])),
                }
            }
        }
        out
    }
}

/// True iff the maximal cones of `fan` cover exactly `target` with a proper
/// subdivision.
///
/// Checked locally: every ray lies in `target`, every edge of `target` is a
/// ray, the fan is face compatible, each 2-face is shared by at most two
/// maximal cones, and each 2-face owned by a single cone lies in a supporting
/// plane of `target`. Since `target` is convex and full-dimensional, the
/// union of the cones then has no boundary inside the interior of `target`,
/// so it is all of `target`.
pub fn fan_is_subdivision_of(fan: &Fan, target: &Cone) -> bool {
    if target.ambient_dim() != 3 || !is_strictly_convex(target) {
        return false;
    }
    if fan.rays().iter().any(|r| !contains(target, r)) {
        return false;
    }
    if target.edges().iter().any(|e| primitive(e).ok().and_then(|p| fan.index_of_vector(&p)).is_none()) {
        return false;
    }
    if !fan.is_face_compatible() {
        return false;
    }
    for (wall, owners) in fan.walls() {
        match owners.len() {
            1 => {
                let normal = cross(&fan.rays[wall[0]], &fan.rays[wall[1]]).expect("dimension 3");
                let signs: Vec<BigInt> =
                    target.edges().iter().map(|e| pairing(&normal, e).expect("dimension 3")).collect();
                let supporting = signs.iter().all(|s| !s.is_negative()) || signs.iter().all(|s| !s.is_positive());
                if !supporting {
                    return false;
                }
            }
            2 => {}
            _ => return false,
        }
    }
    true
}

/// Intersection numbers `V_wall . V_l` for every ray `l` of a regular fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    entries: Vec<(String, BigInt)>,
}

impl WallRelation {
    pub fn get(&self, ray: &str) -> Option<&BigInt> {
        self.entries.iter().find(|(n, _)| n == ray).map(|(_, v)| v)
    }

    /// In the fan's ray order.
    pub fn entries(&self) -> &[(String, BigInt)] {
        &self.entries
    }
}

/// For an interior wall `<u1, u2>` with neighbours `u3`, `u4`, the unique
/// integers `a`, `b` with `v3 + v4 + a v1 + b v2 = 0`, reported as
/// intersection numbers of the curve `V_wall` with each toric divisor.
pub fn wall_relation(fan: &Fan, wall: &Cone) -> Result<WallRelation> {
    if wall.edges().len() != 2 || wall.ambient_dim() != 3 {
        return Err(domain!("a wall is a 2-dimensional cone in dimension 3"));
    }
    let locate = |v: &LatticeVector| {
        primitive(v)
            .ok()
            .and_then(|p| fan.index_of_vector(&p))
            .ok_or_else(|| domain!("{v} is not a ray of the fan"))
    };
    let (u1, u2) = (locate(&wall.edges()[0])?, locate(&wall.edges()[1])?);
    let owners: Vec<&[usize; 3]> = fan.cones.iter().filter(|c| c.contains(&u1) && c.contains(&u2)).collect();
    if owners.len() != 2 {
        return Err(domain!(
            "wall <{},{}> lies in {} maximal cones, expected 2",
            fan.names[u1],
            fan.names[u2],
            owners.len()
        ));
    }
    let opposite =
        |c: &[usize; 3]| *c.iter().find(|&&k| k != u1 && k != u2).expect("three distinct rays");
    let (u3, u4) = (opposite(owners[0]), opposite(owners[1]));
    let (v1, v2, v3, v4) = (&fan.rays[u1], &fan.rays[u2], &fan.rays[u3], &fan.rays[u4]);
    let rhs = -(&(v3 + v4));
    let coeffs = solve_in_basis(&[v1.clone(), v2.clone(), v3.clone()], &rhs)
        .map_err(|_| inconsistent!("cone containing the wall is degenerate"))?;
    if !coeffs[2].is_zero() {
        return Err(inconsistent!("neighbours of the wall satisfy no relation of the form v3 + v4 + a v1 + b v2 = 0"));
    }
    if !coeffs[0].is_integer() || !coeffs[1].is_integer() {
        return Err(inconsistent!("wall relation has non-integral coefficients; the fan is not regular"));
    }
    let (a, b) = (coeffs[0].to_integer(), coeffs[1].to_integer());
    let entries = fan
        .names
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let value = if k == u1 {
                a.clone()
            } else if k == u2 {
                b.clone()
            } else if k == u3 || k == u4 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            (n.clone(), value)
        })
        .collect();
    Ok(WallRelation { entries })
}
