//! Report assembly and rendering.
//!
//! Every certificate is re-checked against the resolution data while the
//! report is built; a failure there is an internal inconsistency, never a
//! printed certificate.

use std::fmt::Write as _;

use nashcone_core::criterion::{intersection_table, kleiman_check, Certification, ExceptionalDivisor, ResolutionData};
use nashcone_core::family::FamilyParams;
use nashcone_core::lattice::LatticeVector;
use nashcone_core::toric::{
    build_fan, character_divisor, convexity_certificate, toricity_report, verify_intor, ToricModel,
};
use nashcone_core::lattice::LinearForm;
use serde::Serialize;
use serde_json::Number;

use crate::resolution_file::number;
use crate::AppError;

/// Overall outcome, which also fixes the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    CertifiedBijective,
    Undetermined,
    NotContractible,
}

impl Overall {
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::CertifiedBijective => 0,
            Overall::Undetermined => 10,
            Overall::NotContractible => 20,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Overall::CertifiedBijective => "certified-bijective",
            Overall::Undetermined => "undetermined",
            Overall::NotContractible => "not-contractible",
        }
    }

    pub fn of(c: &Certification) -> Self {
        if !c.contractible() {
            Overall::NotContractible
        } else if c.nash.verdict.is_certified() {
            Overall::CertifiedBijective
        } else {
            Overall::Undetermined
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub curve: String,
    /// `F . z`, which must be negative.
    pub value: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub coefficients: Vec<Number>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCertificate {
    pub against: String,
    pub constraint: String,
    pub coefficients: Vec<Number>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentVerdict {
    pub name: String,
    pub verdict: &'static str,
    pub certificates: Vec<PairCertificate>,
}

/// The verdict part of a report; identical for a family and for its
/// serialized resolution data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdicts {
    pub contractible: bool,
    pub grauert_certificate: Option<Certificate>,
    pub components: Vec<ComponentVerdict>,
    pub nash_bijective: &'static str,
    pub overall: Overall,
}

fn verified(data: &ResolutionData, f: &ExceptionalDivisor, what: &str) -> Result<(Vec<Number>, Vec<Check>), AppError> {
    let ok = kleiman_check(data, f).map_err(|e| AppError::Inconsistent(format!("{what}: {e}")))?;
    if !ok {
        return Err(AppError::Inconsistent(format!("{what} fails the ampleness check at emission")));
    }
    let checks = intersection_table(data, f)
        .map_err(|e| AppError::Inconsistent(e.to_string()))?
        .into_iter()
        .map(|(curve, v)| Check { curve, value: number(&v) })
        .collect();
    Ok((f.coeffs().iter().map(number).collect(), checks))
}

pub fn verdicts(data: &ResolutionData, c: &Certification) -> Result<Verdicts, AppError> {
    let grauert_certificate = match &c.grauert {
        Some(f) => {
            let (coefficients, checks) = verified(data, f, "contraction certificate")?;
            Some(Certificate { coefficients, checks })
        }
        None => None,
    };
    let names = data.components();
    let mut components = Vec::with_capacity(names.len());
    for ess in &c.nash.components {
        let i = ess.component;
        let mut certificates = Vec::new();
        for (j, f) in &ess.certificates {
            let what = format!("certificate for {} against {}", names[i], names[*j]);
            let (coefficients, checks) = verified(data, f, &what)?;
            if f.coeffs()[i] >= f.coeffs()[*j] {
                return Err(AppError::Inconsistent(format!("{what} violates the coefficient order")));
            }
            certificates.push(PairCertificate {
                against: names[*j].clone(),
                constraint: format!("a_{} < a_{}", names[i], names[*j]),
                coefficients,
                checks,
            });
        }
        components.push(ComponentVerdict { name: names[i].clone(), verdict: ess.verdict.as_str(), certificates });
    }
    Ok(Verdicts {
        contractible: c.contractible(),
        grauert_certificate,
        components,
        nash_bijective: c.nash.verdict.as_str(),
        overall: Overall::of(c),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedVector {
    pub name: String,
    pub vector: Vec<Number>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxCone {
    pub rays: String,
    pub det: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionRow {
    pub label: String,
    pub computed: Number,
    pub expected: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityCertificate {
    pub form: Vec<Number>,
    pub on_a: Number,
    pub on_f: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FanSection {
    pub rays: Vec<NamedVector>,
    pub max_cones: Vec<MaxCone>,
    pub gamma_edges: Vec<Vec<Number>>,
    pub intersections: Vec<IntersectionRow>,
    pub intersections_verified: bool,
    pub convexity_certificate: ConvexityCertificate,
    pub character_divisors: Vec<NamedVector>,
}

fn numbers(v: &[num_bigint::BigInt]) -> Vec<Number> {
    v.iter().map(number).collect()
}

fn vector(v: &LatticeVector) -> Vec<Number> {
    numbers(v.as_slice())
}

pub fn fan_section(p: &FamilyParams) -> Result<FanSection, AppError> {
    let model: ToricModel = build_fan(p).map_err(AppError::from_core)?;
    let fan = &model.fan;
    let rays = fan
        .ray_names()
        .iter()
        .zip(fan.rays())
        .map(|(n, v)| NamedVector { name: n.clone(), vector: vector(v) })
        .collect();
    let max_cones = (0..fan.max_cones().len())
        .map(|k| {
            let det = nashcone_core::lattice::det(fan.cone(k).edges()).map_err(AppError::from_core)?;
            Ok(MaxCone { rays: fan.cone_label(k), det: number(&det) })
        })
        .collect::<Result<Vec<_>, AppError>>()?;
    let intor = verify_intor(&model, p).map_err(AppError::from_core)?;
    let intersections = intor
        .rows
        .iter()
        .map(|r| IntersectionRow { label: r.label.to_string(), computed: number(&r.computed), expected: number(&r.expected) })
        .collect();
    let (on_a, on_f) = convexity_certificate(&model, p).map_err(AppError::from_core)?;
    let mut character_divisors = Vec::new();
    for (label, k) in [("div(chi^{v_a*})", 0), ("div(chi^{v_b*})", 1)] {
        let coeffs = character_divisor(&model, &LinearForm::unit(3, k)).map_err(AppError::from_core)?;
        let values: Vec<num_bigint::BigInt> = coeffs.into_iter().map(|(_, x)| x).collect();
        character_divisors.push(NamedVector { name: label.to_string(), vector: numbers(&values) });
    }
    Ok(FanSection {
        rays,
        max_cones,
        gamma_edges: model.gamma.edges().iter().map(vector).collect(),
        intersections,
        intersections_verified: intor.passed(),
        convexity_certificate: ConvexityCertificate {
            form: numbers(model.convexity_form.as_slice()),
            on_a: number(&on_a),
            on_f: number(&on_f),
        },
        character_divisors,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToricSection {
    pub is_toric: bool,
    pub smooth_representatives: [u64; 2],
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSection>,
}

pub fn toric_section(p: &FamilyParams) -> Result<ToricSection, AppError> {
    let r = toricity_report(p).map_err(AppError::from_core)?;
    let fan = if r.is_toric { Some(fan_section(p)?) } else { None };
    if let Some(f) = &fan {
        if !f.intersections_verified {
            return Err(AppError::Inconsistent(format!("{p}: toric intersection numbers disagree")));
        }
    }
    Ok(ToricSection { is_toric: r.is_toric, smooth_representatives: r.smooth_representatives, note: r.distinguishing_note, fan })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfTest {
    pub bound: u64,
    pub pairs_checked: usize,
    pub skipped: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input: serde_json::Value,
    #[serde(flatten)]
    pub verdicts: Verdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_test: Option<SelfTest>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdicts.overall.exit_code()
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn join(values: &[Number]) -> String {
    values.iter().map(Number::to_string).collect::<Vec<_>>().join(",")
}

fn checks_line(checks: &[Check]) -> String {
    checks.iter().map(|c| format!("{}:{}", c.curve, c.value)).collect::<Vec<_>>().join(" ")
}

pub fn render_verdicts(out: &mut String, v: &Verdicts) {
    let _ = writeln!(out, "{:<14}{}", "contractible", if v.contractible { "yes" } else { "no" });
    match &v.grauert_certificate {
        Some(c) => {
            let _ = writeln!(out, "{:<14}F=({})  {}", "certificate", join(&c.coefficients), checks_line(&c.checks));
        }
        None => {
            let _ = writeln!(out, "{:<14}none", "certificate");
        }
    }
    let _ = writeln!(out, "{:<14}{:<14}certificates", "component", "verdict");
    for c in &v.components {
        let certs = if c.certificates.is_empty() {
            "-".to_string()
        } else {
            c.certificates
                .iter()
                .map(|p| format!("vs {} F=({}) [{}]", p.against, join(&p.coefficients), checks_line(&p.checks)))
                .collect::<Vec<_>>()
                .join("; ")
        };
        let _ = writeln!(out, "{:<14}{:<14}{}", c.name, c.verdict, certs);
    }
    let _ = writeln!(out, "{:<14}{}", "nash map", v.nash_bijective);
    let _ = writeln!(out, "{:<14}{}", "verdict", v.overall.label());
}

pub fn render_fan(out: &mut String, f: &FanSection) {
    let _ = writeln!(out, "{:<6}vector", "ray");
    for r in &f.rays {
        let _ = writeln!(out, "{:<6}({})", r.name, join(&r.vector));
    }
    let _ = writeln!(out, "{:<12}det", "max cone");
    for c in &f.max_cones {
        let _ = writeln!(out, "{:<12}{}", c.rays, c.det);
    }
    let edges: Vec<String> = f.gamma_edges.iter().map(|e| format!("({})", join(e))).collect();
    let _ = writeln!(out, "gamma         <{}>", edges.join(","));
    let _ = writeln!(out, "{:<14}{:>10}{:>10}", "intersection", "computed", "expected");
    for r in &f.intersections {
        let _ = writeln!(out, "{:<14}{:>10}{:>10}", r.label, r.computed, r.expected);
    }
    let c = &f.convexity_certificate;
    let _ = writeln!(out, "convexity     m=({})  (m,v_a)={}  (m,v_f)={}", join(&c.form), c.on_a, c.on_f);
    for d in &f.character_divisors {
        let _ = writeln!(out, "{:<18}({})  over rays a..f", d.name, join(&d.vector));
    }
}

pub fn render_human(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nashcone {}  {}", r.command, r.input);
    render_verdicts(&mut out, &r.verdicts);
    if let Some(t) = &r.toric {
        let _ = writeln!(out, "{:<14}{}", "toric", if t.is_toric { "yes" } else { "no" });
        let _ = writeln!(
            out,
            "{:<14}{{{}, {}}}",
            "smooth reps", t.smooth_representatives[0], t.smooth_representatives[1]
        );
        let _ = writeln!(out, "{:<14}{}", "note", t.note);
        if let Some(f) = &t.fan {
            render_fan(&mut out, f);
        }
    }
    if let Some(s) = &r.self_test {
        let status = if s.skipped { "skipped" } else if s.passed { "passed" } else { "FAILED" };
        let _ = writeln!(out, "self-test     bound={} pairs={} {}", s.bound, s.pairs_checked, status);
    }
    out
}
