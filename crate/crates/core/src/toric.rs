//! The toric model of a genus-0 family member.
//!
//! In the basis `(v_a, v_b, v_e)` of `N = Z^3` the six rays are
//!
//! ```text
//! v_a = (1, 0, 0)            v_b = (0, 1, 0)              v_e = (0, 0, 1)
//! v_c = -v_a + x1 v_b        v_d = -x2 v_a + (x1 x2 - 1) v_b
//! v_f = -d1 v_a + (d2 + d1 x1) v_b - v_e
//! ```
//!
//! with maximal cones `<a,b,e>, <b,c,e>, <c,d,e>, <a,b,f>, <b,c,f>, <c,d,f>`.
//! The surfaces are `S1 = V_b`, `S2 = V_c`, the curve is `C = V_<b,c>`, and
//! the rulings are `F1 = V_<b,e>`, `F2 = V_<c,e>`. The fan subdivides the cone
//! `γ = <a,e,d,f>`, which is strictly convex exactly when `x1 x2 > 1`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cone::{fan_is_subdivision_of, is_regular, is_strictly_convex, wall_relation, Cone, Fan};
use crate::criterion::{CurveClass, ResolutionData};
use crate::error::{domain, inconsistent};
use crate::family::{FamilyParams, COMPONENT_NAMES, CURVE_NAMES};
use crate::lattice::{pairing, LatticeVector, LinearForm};
use crate::Result;

pub const RAY_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
pub const MAX_CONES: [[usize; 3]; 6] = [[0, 1, 4], [1, 2, 4], [2, 3, 4], [0, 1, 5], [1, 2, 5], [2, 3, 5]];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricModel {
    pub fan: Fan,
    pub gamma: Cone,
    pub convexity_form: LinearForm,
}

/// The six rays for the given parameters, in [`RAY_NAMES`] order.
pub fn model_rays(p: &FamilyParams) -> [LatticeVector; 6] {
    let [d1, d2, x1, x2] = [p.d1, p.d2, p.x1, p.x2].map(BigInt::from);
    let v = |xs: [BigInt; 3]| LatticeVector::new(xs.to_vec()).expect("dimension 3");
    let (zero, one) = (BigInt::zero, BigInt::one);
    [
        v([one(), zero(), zero()]),
        v([zero(), one(), zero()]),
        v([-one(), x1.clone(), zero()]),
        v([-x2.clone(), &x1 * &x2 - 1, zero()]),
        v([zero(), zero(), one()]),
        v([-d1.clone(), &d2 + &d1 * &x1, -one()]),
    ]
}

/// `m = x2 v_b* + (x1 x2 - 1) v_a*`, vanishing on `v_d` and `v_e`.
pub fn convexity_form(p: &FamilyParams) -> LinearForm {
    let (x1, x2) = (BigInt::from(p.x1), BigInt::from(p.x2));
    LinearForm::new(vec![&x1 * &x2 - 1, x2, BigInt::zero()]).expect("dimension 3")
}

impl ToricModel {
    /// Assembles a model from arbitrary rays without any verification; used
    /// to probe the checks with perturbed data.
    pub fn from_rays(rays: [LatticeVector; 6], convexity_form: LinearForm) -> Result<Self> {
        let named = RAY_NAMES.iter().map(|n| n.to_string()).zip(rays.iter().cloned()).collect();
        let fan = Fan::new(named, MAX_CONES.to_vec())?;
        let gamma = Cone::new(vec![rays[0].clone(), rays[4].clone(), rays[3].clone(), rays[5].clone()])?;
        Ok(Self { fan, gamma, convexity_form })
    }

    pub fn ray(&self, name: &str) -> &LatticeVector {
        self.fan.ray(name).expect("model rays are a..f")
    }
}

/// Builds and verifies the fan: every maximal cone regular, the fan a
/// subdivision of `γ`, and `γ` strictly convex.
pub fn build_fan(p: &FamilyParams) -> Result<ToricModel> {
    p.validate()?;
    if p.x1 * p.x2 <= 1 {
        return Err(domain!(
            "x1 x2 = {} <= 1: the cone <a,e,d,f> contains a line and the fan covers no strictly convex cone",
            p.x1 * p.x2
        ));
    }
    let model = ToricModel::from_rays(model_rays(p), convexity_form(p))?;
    for k in 0..MAX_CONES.len() {
        if !is_regular(&model.fan.cone(k))? {
            return Err(inconsistent!("{p}: cone {} is not regular", model.fan.cone_label(k)));
        }
    }
    if !is_strictly_convex(&model.gamma) {
        return Err(inconsistent!("{p}: γ is not strictly convex"));
    }
    if !fan_is_subdivision_of(&model.fan, &model.gamma) {
        return Err(inconsistent!("{p}: the fan does not subdivide γ"));
    }
    Ok(model)
}

/// Coefficients of `div(χ^m) = sum_l (m, v_l) V_l`, in ray order.
pub fn character_divisor(model: &ToricModel, m: &LinearForm) -> Result<Vec<(String, BigInt)>> {
    model
        .fan
        .ray_names()
        .iter()
        .zip(model.fan.rays())
        .map(|(n, v)| Ok((n.clone(), pairing(m, v)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCheck {
    pub label: &'static str,
    pub computed: BigInt,
    pub expected: BigInt,
}

impl IntersectionCheck {
    pub fn holds(&self) -> bool {
        self.computed == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntorReport {
    pub rows: Vec<IntersectionCheck>,
}

impl IntorReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(IntersectionCheck::holds)
    }
}

fn wall_number(model: &ToricModel, wall: [&str; 2], divisor: &str) -> Result<BigInt> {
    let rel = wall_relation(&model.fan, &model.fan.cone_by_names(&wall)?)?;
    Ok(rel.get(divisor).cloned().expect("divisor is a ray of the fan"))
}

/// The four intersection numbers `V_<b,c>.V_b`, `V_<b,c>.V_c`,
/// `V_<b,e>.V_b`, `V_<c,e>.V_c` against `(-d2, -d1, -x1, -x2)`, plus the two
/// transversal ones `V_<b,e>.V_c = V_<c,e>.V_b = 1`.
pub fn verify_intor(model: &ToricModel, p: &FamilyParams) -> Result<IntorReport> {
    let neg = |x: u64| -BigInt::from(x);
    let table: [(&'static str, [&str; 2], &str, BigInt); 6] = [
        ("V<b,c>.V_b", ["b", "c"], "b", neg(p.d2)),
        ("V<b,c>.V_c", ["b", "c"], "c", neg(p.d1)),
        ("V<b,e>.V_b", ["b", "e"], "b", neg(p.x1)),
        ("V<c,e>.V_c", ["c", "e"], "c", neg(p.x2)),
        ("V<b,e>.V_c", ["b", "e"], "c", BigInt::one()),
        ("V<c,e>.V_b", ["c", "e"], "b", BigInt::one()),
    ];
    let rows = table
        .into_iter()
        .map(|(label, wall, divisor, expected)| {
            Ok(IntersectionCheck { label, computed: wall_number(model, wall, divisor)?, expected })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntorReport { rows })
}

/// Intersection data of `V_b`, `V_c` against `C = V_<b,c>`, `F1 = V_<b,e>`,
/// `F2 = V_<c,e>`, read off the fan; comparable row by row with
/// [`crate::family::make_resolution_data`].
pub fn toric_resolution_data(model: &ToricModel) -> Result<ResolutionData> {
    let walls = [["b", "c"], ["b", "e"], ["c", "e"]];
    let labels = [None, Some(COMPONENT_NAMES[0]), Some(COMPONENT_NAMES[1])];
    let curves = walls
        .iter()
        .zip(CURVE_NAMES)
        .zip(labels)
        .map(|((wall, name), label)| {
            Ok(CurveClass {
                name: name.into(),
                component: label.map(Into::into),
                intersections: vec![wall_number(model, *wall, "b")?, wall_number(model, *wall, "c")?],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ResolutionData::new(COMPONENT_NAMES.iter().map(|s| String::from(*s)).collect(), curves)
}

/// `((m, v_a), (m, v_f))`, after checking both are positive and that `m`
/// vanishes on `v_d` and `v_e`.
pub fn convexity_certificate(model: &ToricModel, p: &FamilyParams) -> Result<(BigInt, BigInt)> {
    let m = &model.convexity_form;
    let at = |name: &str| pairing(m, model.ray(name));
    let (on_a, on_d, on_e, on_f) = (at("a")?, at("d")?, at("e")?, at("f")?);
    if !on_d.is_zero() || !on_e.is_zero() {
        return Err(inconsistent!("{p}: the convexity form does not vanish on v_d and v_e"));
    }
    if !on_a.is_positive() || !on_f.is_positive() {
        return Err(inconsistent!("{p}: the convexity form is not positive on v_a and v_f"));
    }
    Ok((on_a, on_f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricityReport {
    pub is_toric: bool,
    pub gamma: Option<Cone>,
    /// Genera of the smooth surfaces over the singular point in any
    /// resolution, with multiplicity.
    pub smooth_representatives: [u64; 2],
    pub distinguishing_note: String,
}

/// The germ is toric exactly for a rational base curve. In every resolution
/// the non-rational exceptional components are two ruled surfaces over `C`,
/// so the genus of `C` is an analytic invariant of the germ.
pub fn toricity_report(p: &FamilyParams) -> Result<ToricityReport> {
    p.validate()?;
    if p.x1 * p.x2 <= 1 {
        return Err(domain!("x1 x2 <= 1: the exceptional set does not contract, there is no germ"));
    }
    let g = p.genus;
    let is_toric = g == 0;
    let gamma = if is_toric { Some(build_fan(p)?.gamma) } else { None };
    let distinguishing_note = if is_toric {
        String::from(
            "base curve is rational: the germ is the affine toric germ of the cone <a,e,d,f>; \
             germs of this family over curves of different genus are pairwise non-isomorphic",
        )
    } else {
        alloc::format!(
            "base curve has genus {g}: every resolution carries two ruled surfaces over a curve of genus {g}, \
             so the germ is not toric and is not isomorphic to any member built over a curve of another genus"
        )
    };
    Ok(ToricityReport { is_toric, gamma, smooth_representatives: [g, g], distinguishing_note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_resolution_data;

    fn p(g: u64, d1: u64, d2: u64, x1: u64, x2: u64) -> FamilyParams {
        FamilyParams::new(g, d1, d2, x1, x2).unwrap()
    }

    fn v(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(xs)
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn build_fan_examples() {
        let m = build_fan(&p(0, 1, 1, 2, 2)).unwrap();
        assert_eq!((m.ray("c"), m.ray("d"), m.ray("f")), (&v(&[-1, 2, 0]), &v(&[-2, 3, 0]), &v(&[-1, 3, -1])));
        // v_f = -d1 v_a + (d2 + d1 x1) v_b - v_e = (-2, 3 + 2, -1)
        let q = p(0, 2, 3, 1, 2);
        let m = build_fan(&q).unwrap();
        assert_eq!((m.ray("c"), m.ray("d"), m.ray("f")), (&v(&[-1, 1, 0]), &v(&[-2, 1, 0]), &v(&[-2, 5, -1])));
        assert!(verify_intor(&m, &q).unwrap().passed());
        assert!(matches!(build_fan(&p(0, 1, 1, 1, 1)), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn degenerate_gamma_contains_a_line() {
        let rays = model_rays(&p(0, 1, 1, 1, 1));
        // v_d = -v_a when x1 = x2 = 1
        assert_eq!(rays[3], v(&[-1, 0, 0]));
        let gamma = Cone::new(vec![rays[0].clone(), rays[4].clone(), rays[3].clone(), rays[5].clone()]).unwrap();
        assert!(!is_strictly_convex(&gamma));
    }

    #[test]
    fn character_divisor_examples() {
        let m = build_fan(&p(0, 1, 1, 2, 2)).unwrap();
        let values = |form: &LinearForm| -> Vec<BigInt> {
            character_divisor(&m, form).unwrap().into_iter().map(|(_, x)| x).collect()
        };
        assert_eq!(values(&LinearForm::unit(3, 0)), ints(&[1, 0, -1, -2, 0, -1]));
        assert_eq!(values(&LinearForm::unit(3, 1)), ints(&[0, 1, 2, 3, 0, 3]));
        assert_eq!(values(&LinearForm::zero(3)), ints(&[0; 6]));
    }

    #[test]
    fn intor_examples() {
        let q = p(0, 1, 1, 2, 2);
        let r = verify_intor(&build_fan(&q).unwrap(), &q).unwrap();
        assert!(r.passed());
        let first4: Vec<BigInt> = r.rows[..4].iter().map(|c| c.computed.clone()).collect();
        assert_eq!(first4, ints(&[-1, -1, -2, -2]));

        let q = p(0, 3, 5, 2, 4);
        let r = verify_intor(&build_fan(&q).unwrap(), &q).unwrap();
        assert!(r.passed());
        let first4: Vec<BigInt> = r.rows[..4].iter().map(|c| c.computed.clone()).collect();
        assert_eq!(first4, ints(&[-5, -3, -2, -4]));
    }

    #[test]
    fn perturbed_f_breaks_intor() {
        let q = p(0, 1, 1, 2, 2);
        let mut rays = model_rays(&q);
        rays[5] = v(&[-1, 4, -1]);
        let model = ToricModel::from_rays(rays, convexity_form(&q)).unwrap();
        let r = verify_intor(&model, &q).unwrap();
        assert!(!r.passed());
        assert_eq!(r.rows[0].computed, BigInt::from(-2));
        assert!(r.rows[1..].iter().all(IntersectionCheck::holds));
    }

    #[test]
    fn toric_rows_match_abstract_rows() {
        let q = p(0, 3, 2, 4, 1);
        let model = build_fan(&q).unwrap();
        assert_eq!(toric_resolution_data(&model).unwrap(), make_resolution_data(&q).unwrap());
    }

    #[test]
    fn convexity_examples() {
        let cert = |q: FamilyParams| convexity_certificate(&build_fan(&q).unwrap(), &q).unwrap();
        assert_eq!(cert(p(0, 1, 1, 2, 2)), (3.into(), 3.into()));
        assert_eq!(cert(p(0, 2, 1, 3, 1)), (2.into(), 3.into()));
        assert_eq!(cert(p(0, 1, 1, 1, 2)), (1.into(), 3.into()));
    }

    #[test]
    fn toricity_examples() {
        let r = toricity_report(&p(0, 1, 1, 2, 2)).unwrap();
        assert!(r.is_toric);
        let edges: Vec<LatticeVector> = r.gamma.unwrap().edges().to_vec();
        assert_eq!(edges, vec![v(&[1, 0, 0]), v(&[0, 0, 1]), v(&[-2, 3, 0]), v(&[-1, 3, -1])]);
        let r = toricity_report(&p(2, 1, 1, 2, 2)).unwrap();
        assert!(!r.is_toric);
        assert!(r.gamma.is_none());
        assert_eq!(r.smooth_representatives, [2, 2]);
        assert!(toricity_report(&p(0, 1, 1, 1, 2)).unwrap().is_toric);
        assert!(matches!(toricity_report(&p(0, 1, 1, 1, 1)), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn character_divisor_is_linear() {
        let m = build_fan(&p(0, 2, 3, 3, 2)).unwrap();
        let (f, g) = (LinearForm::from_i64s(&[2, -1, 5]), LinearForm::from_i64s(&[-3, 4, 1]));
        let k = BigInt::from(7);
        let lhs = character_divisor(&m, &(&f + &g.scale(&k))).unwrap();
        let (df, dg) = (character_divisor(&m, &f).unwrap(), character_divisor(&m, &g).unwrap());
        for (l, (a, b)) in lhs.iter().zip(df.iter().zip(&dg)) {
            assert_eq!(l.1, &a.1 + &k * &b.1);
            assert_eq!(l.0, a.0);
        }
    }
}
