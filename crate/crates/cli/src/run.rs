//! Command dispatch.

use std::sync::Arc;

use clap::ValueEnum;
use folcris_core::chern_weil::{
    residue, verify_bott_vanishing, verify_theorem_t1, Connection, InvariantPolynomial, ResidueClass,
};
use folcris_core::crystalline::{
    crystalline_cohomology, crystalline_residue, lift_foliation, lift_presentation, verify_c4, LiftOutcome,
    SStructure,
};
use folcris_core::derham::{SupportedComplex, TruncatedComplex};
use folcris_core::foliation::{check_integrability, Distribution, Integrability};
use folcris_core::poly::{display_poly, Algebra};
use serde_json::{json, Value};

use crate::problem::{self, at, ProblemFile};
use crate::report;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckFoliation,
    FoliatedCohomology,
    DerhamCohomology,
    Chern,
    T1Check,
    BottCheck,
    Residue,
    CrystallineCohomology,
    C4Check,
    CrystallineResidue,
    ValidateAlgebroid,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::CheckFoliation,
        Command::FoliatedCohomology,
        Command::DerhamCohomology,
        Command::Chern,
        Command::T1Check,
        Command::BottCheck,
        Command::Residue,
        Command::CrystallineCohomology,
        Command::C4Check,
        Command::CrystallineResidue,
        Command::ValidateAlgebroid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckFoliation => "check-foliation",
            Command::FoliatedCohomology => "foliated-cohomology",
            Command::DerhamCohomology => "derham-cohomology",
            Command::Chern => "chern",
            Command::T1Check => "t1-check",
            Command::BottCheck => "bott-check",
            Command::Residue => "residue",
            Command::CrystallineCohomology => "crystalline-cohomology",
            Command::C4Check => "c4-check",
            Command::CrystallineResidue => "crystalline-residue",
            Command::ValidateAlgebroid => "validate-algebroid",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// A finished report with its exit status (0 or 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

/// Fills the task block from the command line and checks it agrees with
/// the file.
pub fn resolve(cmd: Command, problem: &ProblemFile, truncate: Option<u32>) -> Result<ProblemFile, CliError> {
    let mut p = problem.clone();
    match p.task.command.as_deref() {
        Some(c) if c != cmd.name() => {
            return Err(CliError::Input(format!("task.command: file is for {c}, not {}", cmd.name())));
        }
        _ => p.task.command = Some(cmd.name().into()),
    }
    if let Some(n) = truncate {
        if p.task.truncate.is_some_and(|m| m != n) {
            return Err(CliError::Input(format!("--truncate {n} disagrees with task.truncate")));
        }
        p.task.truncate = Some(n);
    }
    Ok(p)
}

pub fn run(cmd: Command, problem: &ProblemFile, truncate: Option<u32>) -> Result<Outcome, CliError> {
    let problem = resolve(cmd, problem, truncate)?;
    let (status, result) = match dispatch(cmd, &problem) {
        Ok(r) => r,
        Err(CliError::Hypothesis(reason)) => ("hypothesis-unmet", json!({ "reason": reason })),
        Err(e) => return Err(e),
    };
    let exit = if status == "ok" { 0 } else { 1 };
    let report = json!({
        "schema": report::SCHEMA,
        "command": cmd.name(),
        "status": status,
        "problem": serde_json::to_value(&problem).expect("problem files serialize"),
        "result": result,
        "provenance": {
            "tool": concat!("folcris ", env!("CARGO_PKG_VERSION")),
            "truncation": problem.task.truncate,
            "level": problem.task.level.unwrap_or(problem.ring.n),
            "determinism": "exact arithmetic, no randomness; output does not depend on FOLCRIS_THREADS",
        },
    });
    Ok(Outcome { report, exit })
}

type Dispatched = Result<(&'static str, Value), CliError>;

fn dispatch(cmd: Command, p: &ProblemFile) -> Dispatched {
    match cmd {
        Command::CheckFoliation => check_foliation(p),
        Command::FoliatedCohomology => foliated_cohomology(p),
        Command::DerhamCohomology => derham_cohomology(p),
        Command::Chern => chern(p),
        Command::T1Check => t1_check(p),
        Command::BottCheck => bott_check(p),
        Command::Residue => residue_cmd(p),
        Command::CrystallineCohomology => crystalline_cohomology_cmd(p),
        Command::C4Check => c4_check(p),
        Command::CrystallineResidue => crystalline_residue_cmd(p),
        Command::ValidateAlgebroid => validate_algebroid(p),
    }
}

fn truncation(p: &ProblemFile) -> Result<u32, CliError> {
    p.task.truncate.ok_or_else(|| CliError::Input("--truncate N is required for this command".into()))
}

fn integrability(alg: &Arc<Algebra>, p: &ProblemFile) -> Result<Integrability, CliError> {
    let block = p.foliation_block()?;
    let gens = problem::forms(alg, &block.generators, "foliation.generators")?;
    let cert = block
        .certificate
        .as_deref()
        .map(|c| problem::var_indices(alg, c, "foliation.certificate"))
        .transpose()?;
    let Some(witness) = &block.witness else {
        return Ok(check_integrability(alg, &gens, cert.as_deref())?);
    };
    let witness = problem::form_matrix(alg, witness, 1, "foliation.witness")?;
    let cert = match cert {
        Some(c) => c,
        None => match check_integrability(alg, &gens, None)? {
            Integrability::Integrable(d) => d.certificate().to_vec(),
            Integrability::NotIntegrable { certificate, .. } => certificate,
        },
    };
    Ok(Integrability::Integrable(Distribution::with_witness(alg, &gens, &cert, witness)?))
}

fn foliation(alg: &Arc<Algebra>, p: &ProblemFile) -> Result<Distribution, CliError> {
    match integrability(alg, p)? {
        Integrability::Integrable(d) => Ok(d),
        Integrability::NotIntegrable { .. } => {
            Err(CliError::Hypothesis("the foliation generators are not integrable (run check-foliation)".into()))
        }
    }
}

/// The connection from the file, or the Bott connection of the foliation.
fn connection_or_bott(alg: &Arc<Algebra>, p: &ProblemFile, dist: Option<&Distribution>) -> Result<(Connection, &'static str), CliError> {
    if let Some(rows) = &p.connection {
        return Ok((problem::connection(alg, rows, "connection")?, "given"));
    }
    match dist {
        Some(d) => Ok((Connection::new(d.bott_connection()?.connection)?, "bott")),
        None => Err(CliError::Input("connection: required for this command".into())),
    }
}

fn check_foliation(p: &ProblemFile) -> Dispatched {
    let x = p.variety()?;
    match integrability(&x, p)? {
        Integrability::Integrable(d) => Ok(("ok", json!({ "integrable": true, "distribution": report::distribution(&d) }))),
        Integrability::NotIntegrable { certificate, residuals } => Ok((
            "not-integrable",
            json!({
                "integrable": false,
                "certificate": report::var_names(&x, &certificate),
                "residuals": report::forms(&residuals),
            }),
        )),
    }
}

fn cohomology_list(c: &TruncatedComplex) -> Result<Value, CliError> {
    Ok(Value::Array(c.cohomology_all()?.iter().map(report::cohomology).collect()))
}

fn foliated_cohomology(p: &ProblemFile) -> Dispatched {
    let n = truncation(p)?;
    let x = p.variety()?;
    let d = foliation(&x, p)?;
    let c = d.foliated_complex(n)?;
    Ok(("ok", json!({ "distribution": report::distribution(&d), "truncation": n, "cohomology": cohomology_list(&c)? })))
}

fn derham_cohomology(p: &ProblemFile) -> Dispatched {
    let n = truncation(p)?;
    let x = p.variety()?;
    let c = TruncatedComplex::de_rham(&x, n)?;
    Ok(("ok", json!({ "algebra": report::algebra(&x), "truncation": n, "cohomology": cohomology_list(&c)? })))
}

fn chern(p: &ProblemFile) -> Dispatched {
    let x = p.variety()?;
    let dist = if p.connection.is_none() { Some(foliation(&x, p)?) } else { None };
    let (conn, source) = connection_or_bott(&x, p, dist.as_ref())?;
    let forms: Vec<Value> = (1..=conn.rank())
        .map(|i| {
            let c = conn.chern_form(i)?;
            Ok(json!({ "index": c.index, "form": report::form(&c.form), "closed": c.closed }))
        })
        .collect::<Result<_, CliError>>()?;
    let mut out = json!({
        "connection_source": source,
        "connection": report::matrix(conn.matrix()),
        "curvature": report::matrix(&conn.curvature()?),
        "chern_forms": forms,
    });
    if p.phi.is_some() {
        let phi = p.phi(x.ring())?;
        out["phi"] = Value::String(phi.to_string());
        out["phi_form"] = report::form(&conn.phi_form(&phi)?);
    }
    Ok(("ok", out))
}

fn t1_check(p: &ProblemFile) -> Dispatched {
    let x = p.variety()?;
    let d = foliation(&x, p)?;
    let (conn, source) = connection_or_bott(&x, p, Some(&d))?;
    let indices: Vec<usize> = match p.task.index {
        Some(i) => vec![i],
        None => (1..=conn.rank()).collect(),
    };
    let certs: Vec<Value> = indices
        .iter()
        .map(|&i| {
            let c = verify_theorem_t1(&conn, &d, i)?;
            Ok(json!({
                "index": c.index,
                "chern_form": report::form(&c.chern_form),
                "filtration": report::filtration(&c.level),
                "foliated_image": "0",
            }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok((
        "ok",
        json!({
            "distribution": report::distribution(&d),
            "connection_source": source,
            "connection": report::matrix(conn.matrix()),
            "certificates": certs,
        }),
    ))
}

fn bott_check(p: &ProblemFile) -> Dispatched {
    let x = p.variety()?;
    let d = foliation(&x, p)?;
    let (conn, source) = connection_or_bott(&x, p, Some(&d))?;
    let phi = p.phi(x.ring())?;
    let cert = verify_bott_vanishing(&conn, &d, &phi)?;
    Ok((
        "ok",
        json!({
            "distribution": report::distribution(&d),
            "connection_source": source,
            "connection": report::matrix(conn.matrix()),
            "phi": phi.to_string(),
            "certificate": report::bott(&cert),
        }),
    ))
}

fn residue_json(r: &ResidueClass) -> Value {
    json!({
        "open_algebra": report::algebra(r.open()),
        "degree": r.degree,
        "phi": r.phi.to_string(),
        "a": report::form(&r.a),
        "b": report::form(&r.b),
        "global": report::matrix(r.global.matrix()),
        "adapted": report::matrix(r.adapted.matrix()),
        "vanishing": report::bott(&r.vanishing),
        "fiber_closed": true,
    })
}

fn primitive_search(r: &ResidueClass, x: &Arc<Algebra>, h: &folcris_core::poly::Poly, n: u32) -> Result<Value, CliError> {
    let complex = SupportedComplex::new(x, h, n)?;
    Ok(match r.primitive_in(&complex)? {
        Some((c, e)) => json!({ "truncation": n, "exact": true, "c": report::form(&c), "e": report::form(&e) }),
        None => json!({ "truncation": n, "exact": false }),
    })
}

fn residue_cmd(p: &ProblemFile) -> Dispatched {
    let x = p.variety()?;
    let h = p.open_element(x.ring())?;
    let u = x.localize(&h).map_err(|e| at("task.open", e))?;
    let d = foliation(&u, p)?;
    let global = problem::connection(&x, required_connection(p)?, "connection")?;
    let adapted = p.adapted.as_deref().map(|a| problem::connection(&u, a, "adapted")).transpose()?;
    let phi = p.phi(x.ring())?;
    let r = residue(&x, &h, &d, &global, &phi, adapted.as_ref())?;
    let mut out = residue_json(&r);
    out["open"] = Value::String(display_poly(&h, x.vars()));
    out["distribution"] = report::distribution(&d);
    if let Some(n) = p.task.truncate {
        out["primitive"] = primitive_search(&r, &x, &h, n)?;
    }
    Ok(("ok", out))
}

fn required_connection(p: &ProblemFile) -> Result<&[Vec<String>], CliError> {
    p.connection.as_deref().ok_or_else(|| CliError::Input("connection: required for this command".into()))
}

fn base_variety(p: &ProblemFile) -> Result<Arc<Algebra>, CliError> {
    if p.ring.n != 1 {
        return Err(CliError::Input("ring.n: crystalline commands start from F_p (n = 1); set task.level".into()));
    }
    p.variety()
}

fn crystalline_cohomology_cmd(p: &ProblemFile) -> Dispatched {
    let n = truncation(p)?;
    let lift = lift_presentation(&base_variety(p)?, p.level()?)?;
    let groups: Vec<Value> = (0..=lift.lifted().nvars())
        .map(|j| Ok(report::cohomology(&crystalline_cohomology(&lift, j, n)?)))
        .collect::<Result<_, CliError>>()?;
    Ok((
        "ok",
        json!({
            "base": report::algebra(lift.base()),
            "lifted": report::algebra(lift.lifted()),
            "truncation": n,
            "reduction_commutes": lift.reduction_commutes(n)?,
            "cohomology": groups,
        }),
    ))
}

enum Lifted {
    Structure(Box<SStructure>),
    Obstruction(Value),
}

fn s_structure(base: &Arc<Algebra>, p: &ProblemFile) -> Result<Lifted, CliError> {
    let d = foliation(base, p)?;
    let lift = lift_presentation(base, p.level()?)?;
    let proposals = p.task.lift.as_deref().map(|l| problem::forms(lift.lifted(), l, "task.lift")).transpose()?;
    match lift_foliation(&d, &lift, proposals.as_deref())? {
        LiftOutcome::Lifted(ss) => Ok(Lifted::Structure(ss)),
        LiftOutcome::Obstruction { generators, residuals, valuation } => Ok(Lifted::Obstruction(json!({
            "lifted": report::algebra(lift.lifted()),
            "generators": report::forms(&generators),
            "residuals": report::forms(&residuals),
            "valuation": valuation,
        }))),
    }
}

fn lift_json(ss: &SStructure) -> Value {
    json!({
        "lifted": report::algebra(ss.lift.lifted()),
        "generators": report::forms(ss.lifted.generators()),
        "witness": report::matrix(ss.lifted.witness()),
        "reduces_to_base": ss.reduces_to_base(),
    })
}

fn c4_check(p: &ProblemFile) -> Dispatched {
    let base = base_variety(p)?;
    let ss = match s_structure(&base, p)? {
        Lifted::Structure(ss) => ss,
        Lifted::Obstruction(v) => return Ok(("obstruction", v)),
    };
    let phi = p.phi(base.ring())?;
    let c4 = verify_c4(&ss, &phi)?;
    let bott = Connection::new(ss.base.bott_connection()?.connection)?;
    let base_cert = verify_bott_vanishing(&bott, &ss.base, &phi)?;
    if c4.reduce(&base) != base_cert {
        return Err(CliError::Internal("the level-n certificate does not reduce to the mod-p certificate".into()));
    }
    Ok((
        "ok",
        json!({
            "level": c4.level,
            "lift": lift_json(&ss),
            "phi": phi.to_string(),
            "certificate": report::bott(&c4.certificate),
            "base_certificate": report::bott(&base_cert),
            "reduces_to_base_certificate": true,
        }),
    ))
}

fn crystalline_residue_cmd(p: &ProblemFile) -> Dispatched {
    let base = base_variety(p)?;
    let h = p.open_element(base.ring())?;
    let u = base.localize(&h).map_err(|e| at("task.open", e))?;
    let ss = match s_structure(&u, p)? {
        Lifted::Structure(ss) => ss,
        Lifted::Obstruction(v) => return Ok(("obstruction", v)),
    };
    let x = lift_presentation(&base, p.level()?)?;
    let global = problem::connection(x.lifted(), required_connection(p)?, "connection")?;
    let phi = p.phi(base.ring())?.change_ring(x.lifted().ring());
    let r = crystalline_residue(&x, &h, &ss, &global, &phi)?;
    let mut out = residue_json(&r);
    out["open"] = Value::String(display_poly(&h, base.vars()));
    out["lift"] = lift_json(&ss);
    if let Some(n) = p.task.truncate {
        out["primitive"] = primitive_search(&r, x.lifted(), &h.change_ring(x.lifted().ring()), n)?;
    }
    Ok(("ok", out))
}

fn validate_algebroid(p: &ProblemFile) -> Dispatched {
    let x = p.variety()?;
    let d = foliation(&x, p)?;
    let r = d.validate_algebroid()?;
    Ok((
        "ok",
        json!({
            "distribution": report::distribution(&d),
            "checked": r.checks.len(),
            "identities": r.checks.iter().map(|c| c.identity.clone()).collect::<Vec<_>>(),
        }),
    ))
}

/// Phi parsed for a given ring (used by the recheck path).
pub(crate) fn phi_over(p: &ProblemFile, alg: &Arc<Algebra>) -> Result<InvariantPolynomial, CliError> {
    let phi = p.phi(p.ring()?)?;
    Ok(if phi.ring() == alg.ring() { phi } else { phi.change_ring(alg.ring()) })
}
