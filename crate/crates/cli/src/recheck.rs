//! Re-verification of a report from its printed witnesses, by form
//! arithmetic only (parsing, `d`, wedge, sums and restriction).

use std::sync::Arc;

use folcris_core::derham::Form;
use folcris_core::poly::{Algebra, LocalizedPoly};
use serde_json::Value;

use crate::problem::{self, ProblemFile};
use crate::run::{phi_over, Command};
use crate::CliError;

/// One re-derived identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

struct Checker {
    checks: Vec<Check>,
}

impl Checker {
    fn push(&mut self, name: impl Into<String>, holds: bool) {
        self.checks.push(Check { name: name.into(), holds });
    }
}

fn get<'a>(v: &'a Value, path: &str) -> Result<&'a Value, CliError> {
    let mut cur = v;
    for key in path.split('.') {
        cur = cur.get(key).ok_or_else(|| CliError::Input(format!("report is missing {path}")))?;
    }
    Ok(cur)
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>, CliError> {
    get(v, path)?
        .as_array()
        .and_then(|a| a.iter().map(|s| s.as_str().map(String::from)).collect())
        .ok_or_else(|| CliError::Input(format!("report field {path} is not a list of strings")))
}

fn string(v: &Value, path: &str) -> Result<String, CliError> {
    get(v, path)?.as_str().map(String::from).ok_or_else(|| CliError::Input(format!("report field {path} is not a string")))
}

fn uint(v: &Value, path: &str) -> Result<usize, CliError> {
    get(v, path)?.as_u64().map(|n| n as usize).ok_or_else(|| CliError::Input(format!("report field {path} is not a number")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    get(v, path)?.as_array().ok_or_else(|| CliError::Input(format!("report field {path} is not a list")))
}

fn matrix(alg: &Arc<Algebra>, v: &Value, path: &str, degree: usize) -> Result<Vec<Vec<Form>>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row: Vec<String> = serde_json::from_value(row.clone())
                .map_err(|_| CliError::Input(format!("report field {path}[{i}] is not a list of strings")))?;
            row.iter()
                .enumerate()
                .map(|(j, f)| problem::form_of_degree(alg, f, degree, &format!("{path}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn two_forms(alg: &Arc<Algebra>, srcs: &[String]) -> Result<Vec<Form>, CliError> {
    srcs.iter().enumerate().map(|(i, f)| problem::form_of_degree(alg, f, 2, &format!("residuals[{i}]"))).collect()
}

fn one(alg: &Arc<Algebra>) -> Form {
    Form::function(LocalizedPoly::one(alg))
}

fn wedge_all(alg: &Arc<Algebra>, fs: &[Form]) -> Form {
    fs.iter().fold(one(alg), |acc, f| acc.wedge(f))
}

/// `dω_i = Σ_j α_ij ∧ ω_j` for the printed witness.
fn witness_identity(ck: &mut Checker, alg: &Arc<Algebra>, gens: &[Form], witness: &[Vec<Form>], label: &str) {
    for (i, w) in gens.iter().enumerate() {
        let rhs = witness[i].iter().zip(gens).fold(Form::zero(alg, 2), |acc, (a, g)| &acc + &a.wedge(g));
        ck.push(format!("{label}: d w{} = sum_j alpha_{}j ^ w_j", i + 1, i + 1), w.d() == rhs);
    }
}

/// `Σ ω_S ∧ η_S` equals the printed form and every `|S|` is at least the
/// printed level.
fn filtration(ck: &mut Checker, alg: &Arc<Algebra>, gens: &[Form], target: &Form, v: &Value, label: &str) -> Result<Option<usize>, CliError> {
    let level = get(v, "level")?.as_u64().map(|l| l as usize);
    let mut acc = Form::zero(alg, target.degree());
    let mut sizes_ok = true;
    for (k, term) in array(v, "decomposition")?.iter().enumerate() {
        let s: Vec<usize> = serde_json::from_value(get(term, "generators")?.clone())
            .map_err(|_| CliError::Input(format!("{label}: bad generator list")))?;
        if s.iter().any(|&i| i == 0 || i > gens.len()) {
            return Err(CliError::Input(format!("{label}: generator index out of range")));
        }
        sizes_ok &= level.is_none_or(|l| s.len() >= l);
        let eta = problem::form(alg, &string(term, "eta")?, &format!("{label}.decomposition[{k}]"))?;
        let prod = wedge_all(alg, &s.iter().map(|i| gens[i - 1].clone()).collect::<Vec<_>>());
        acc = &acc + &prod.wedge(&eta);
    }
    ck.push(format!("{label}: decomposition recombines"), acc == *target);
    ck.push(format!("{label}: every term has at least `level` conormal factors"), sizes_ok);
    Ok(level)
}

fn bott(ck: &mut Checker, alg: &Arc<Algebra>, gens: &[Form], p: &ProblemFile, cert: &Value, label: &str) -> Result<(), CliError> {
    let (q, d) = (uint(cert, "weight")?, uint(cert, "codimension")?);
    ck.push(format!("{label}: weight exceeds codimension"), q > d && d == gens.len());
    let mut chern = Vec::new();
    let mut levels = Vec::new();
    for (k, entry) in array(cert, "chern_levels")?.iter().enumerate() {
        let i = uint(entry, "index")?;
        let c = problem::form_of_degree(alg, &string(entry, "form")?, 2 * i, &format!("{label}.chern_levels[{k}]"))?;
        let lvl = filtration(ck, alg, gens, &c, get(entry, "filtration")?, &format!("{label} c{i}"))?;
        ck.push(format!("{label}: c{i} has level at least {i}"), lvl.is_none_or(|l| l >= i) && c.degree() == 2 * i);
        chern.push(c);
        levels.push(lvl.unwrap_or(q));
    }
    let phi = phi_over(p, alg)?;
    let mut value = Form::zero(alg, 2 * q);
    for (e, coeff) in phi.terms() {
        let mut prod = one(alg);
        let mut bound = 0;
        for (i, &x) in e.iter().enumerate() {
            for _ in 0..x {
                prod = prod.wedge(&chern[i]);
            }
            bound += levels[i] * x as usize;
        }
        ck.push(format!("{label}: monomial {} lands in F^-{bound} with {bound} > {d}", crate::report::monomial(e)), bound > d);
        value = &value + &prod.scale(&LocalizedPoly::constant(alg, coeff));
    }
    let printed = problem::form_of_degree(alg, &string(cert, "phi_form")?, 2 * q, &format!("{label}.phi_form"))?;
    ck.push(format!("{label}: phi of the printed Chern forms is the printed phi form"), value == printed);
    ck.push(format!("{label}: phi form is zero"), printed.is_zero());
    Ok(())
}

fn cocycles(ck: &mut Checker, alg: &Arc<Algebra>, groups: &[Value], leaf: Option<&Form>) -> Result<(), CliError> {
    for g in groups {
        let j = uint(g, "degree")?;
        for (k, gen) in array(g, "generators")?.iter().enumerate() {
            let f = problem::form_of_degree(alg, &string(gen, "form")?, j, &format!("cohomology[{j}].generators[{k}]"))?;
            let df = f.d();
            let closed = match leaf {
                None => df.is_zero(),
                Some(vol) => df.wedge(vol).is_zero(),
            };
            ck.push(format!("H^{j} generator {} is a cocycle", k + 1), closed && f.degree() == j);
        }
    }
    Ok(())
}

fn distribution_block(ck: &mut Checker, alg: &Arc<Algebra>, p: &ProblemFile, r: &Value) -> Result<Vec<Form>, CliError> {
    let gens = problem::forms(alg, &p.foliation_block()?.generators, "foliation.generators")?;
    let printed = problem::forms(alg, &strings(r, "distribution.generators")?, "distribution.generators")?;
    ck.push("printed generators match the problem", printed == gens);
    let witness = matrix(alg, r, "distribution.witness", 1)?;
    witness_identity(ck, alg, &gens, &witness, "witness");
    Ok(gens)
}

fn residue(ck: &mut Checker, x: &Arc<Algebra>, u: &Arc<Algebra>, gens: &[Form], p: &ProblemFile, r: &Value) -> Result<(), CliError> {
    let q = uint(r, "degree")?;
    let a = problem::form_of_degree(x, &string(r, "a")?, q, "a")?;
    let b = problem::form_of_degree(u, &string(r, "b")?, q - 1, "b")?;
    ck.push("da = 0", a.d().is_zero());
    let restricted = a.restrict(u).map_err(|e| problem::at("a", e))?;
    ck.push("a restricted to U equals db", restricted == b.d());
    bott(ck, u, gens, p, get(r, "vanishing")?, "adapted connection")?;
    if let Some(prim) = r.get("primitive").filter(|v| v.get("exact") == Some(&Value::Bool(true))) {
        let c = problem::form_of_degree(x, &string(prim, "c")?, q - 1, "primitive.c")?;
        let e = problem::form_of_degree(u, &string(prim, "e")?, q.saturating_sub(2), "primitive.e")?;
        let cu = c.restrict(u).map_err(|err| problem::at("primitive.c", err))?;
        ck.push("dc = a", c.d() == a);
        ck.push("c|U - de = b", &cu - &e.d() == b);
    }
    Ok(())
}

/// The level-n lift block: printed generators reduce to the base ones and
/// satisfy the printed witness identity.
fn lift_block(ck: &mut Checker, base: &Arc<Algebra>, p: &ProblemFile, lift: &Value) -> Result<(Arc<Algebra>, Vec<Form>), CliError> {
    let lifted = base.change_ring(p.level()?).map_err(|e| problem::at("task.level", e))?;
    let gens = problem::forms(&lifted, &strings(lift, "generators")?, "lift.generators")?;
    let base_gens = problem::forms(base, &p.foliation_block()?.generators, "foliation.generators")?;
    let reduced: Vec<Form> = gens.iter().map(|g| g.change_ring(base)).collect();
    ck.push("lifted generators reduce to the base generators", reduced == base_gens);
    let witness = matrix(&lifted, lift, "witness", 1)?;
    witness_identity(ck, &lifted, &gens, &witness, "lifted witness");
    Ok((lifted, gens))
}

/// Re-verifies every certificate in a report. Reports whose status is
/// `hypothesis-unmet` carry no certificate and yield no checks.
pub fn recheck(report: &Value) -> Result<Vec<Check>, CliError> {
    let p: ProblemFile = serde_json::from_value(get(report, "problem")?.clone())
        .map_err(|e| CliError::Input(format!("report problem block: {e}")))?;
    let cmd = Command::from_name(&string(report, "command")?)
        .ok_or_else(|| CliError::Input("report names an unknown command".into()))?;
    let status = string(report, "status")?;
    let r = get(report, "result")?;
    let mut ck = Checker { checks: Vec::new() };
    if status == "hypothesis-unmet" {
        return Ok(ck.checks);
    }
    let x = p.variety()?;
    match (cmd, status.as_str()) {
        (Command::CheckFoliation, "ok") => {
            distribution_block(&mut ck, &x, &p, r)?;
        }
        (Command::CheckFoliation, _) => {
            let gens = problem::forms(&x, &p.foliation_block()?.generators, "foliation.generators")?;
            let vol = wedge_all(&x, &gens);
            let residuals = two_forms(&x, &strings(r, "residuals")?)?;
            for (i, (g, res)) in gens.iter().zip(&residuals).enumerate() {
                ck.push(format!("d w{} ^ W = residual ^ W", i + 1), g.d().wedge(&vol) == res.wedge(&vol));
            }
            ck.push("some residual survives against W", residuals.iter().any(|res| !res.wedge(&vol).is_zero()));
        }
        (Command::FoliatedCohomology, _) => {
            let gens = distribution_block(&mut ck, &x, &p, r)?;
            cocycles(&mut ck, &x, array(r, "cohomology")?, Some(&wedge_all(&x, &gens)))?;
        }
        (Command::DerhamCohomology, _) => cocycles(&mut ck, &x, array(r, "cohomology")?, None)?,
        (Command::CrystallineCohomology, _) => {
            let lifted = x.change_ring(p.level()?).map_err(|e| problem::at("task.level", e))?;
            cocycles(&mut ck, &lifted, array(r, "cohomology")?, None)?;
        }
        (Command::Chern, _) => {
            let a = matrix(&x, r, "connection", 1)?;
            let k = matrix(&x, r, "curvature", 2)?;
            let m = a.len();
            let mut trace = Form::zero(&x, 2);
            for i in 0..m {
                for j in 0..m {
                    let aa = (0..m).fold(Form::zero(&x, 2), |acc, l| &acc + &a[i][l].wedge(&a[l][j]));
                    ck.push(format!("K[{}][{}] = dA + A^A", i + 1, j + 1), k[i][j] == &a[i][j].d() + &aa);
                }
                trace = &trace + &k[i][i];
            }
            for (n, c) in array(r, "chern_forms")?.iter().enumerate() {
                let f = problem::form_of_degree(&x, &string(c, "form")?, 2 * n + 2, &format!("chern_forms[{n}]"))?;
                ck.push(format!("c{} is closed", n + 1), f.d().is_zero());
                if n == 0 {
                    ck.push("c1 = tr K", f == trace);
                }
            }
        }
        (Command::T1Check, _) => {
            let gens = distribution_block(&mut ck, &x, &p, r)?;
            for (n, cert) in array(r, "certificates")?.iter().enumerate() {
                let i = uint(cert, "index")?;
                let c = problem::form_of_degree(&x, &string(cert, "chern_form")?, 2 * i, &format!("certificates[{n}]"))?;
                let lvl = filtration(&mut ck, &x, &gens, &c, get(cert, "filtration")?, &format!("c{i}"))?;
                ck.push(format!("c{i} lies in F^-{i}"), lvl.is_none_or(|l| l >= i));
            }
        }
        (Command::BottCheck, _) => {
            let gens = distribution_block(&mut ck, &x, &p, r)?;
            bott(&mut ck, &x, &gens, &p, get(r, "certificate")?, "certificate")?;
        }
        (Command::Residue, _) => {
            let u = x.localize(&p.open_element(x.ring())?).map_err(|e| problem::at("task.open", e))?;
            let gens = distribution_block(&mut ck, &u, &p, r)?;
            residue(&mut ck, &x, &u, &gens, &p, r)?;
        }
        (Command::C4Check, "ok") => {
            let (lifted, gens) = lift_block(&mut ck, &x, &p, get(r, "lift")?)?;
            bott(&mut ck, &lifted, &gens, &p, get(r, "certificate")?, "level-n certificate")?;
            let base_gens = problem::forms(&x, &p.foliation_block()?.generators, "foliation.generators")?;
            bott(&mut ck, &x, &base_gens, &p, get(r, "base_certificate")?, "mod-p certificate")?;
        }
        (Command::CrystallineResidue, "ok") => {
            let u = x.localize(&p.open_element(x.ring())?).map_err(|e| problem::at("task.open", e))?;
            let (lifted_u, gens) = lift_block(&mut ck, &u, &p, get(r, "lift")?)?;
            let lifted_x = x.change_ring(p.level()?).map_err(|e| problem::at("task.level", e))?;
            residue(&mut ck, &lifted_x, &lifted_u, &gens, &p, r)?;
        }
        (Command::C4Check | Command::CrystallineResidue, _) => {
            let base = match cmd {
                Command::C4Check => x.clone(),
                _ => x.localize(&p.open_element(x.ring())?).map_err(|e| problem::at("task.open", e))?,
            };
            let lifted = base.change_ring(p.level()?).map_err(|e| problem::at("task.level", e))?;
            let gens = problem::forms(&lifted, &strings(r, "generators")?, "generators")?;
            let vol = wedge_all(&lifted, &gens);
            let residuals = two_forms(&lifted, &strings(r, "residuals")?)?;
            let v = uint(r, "valuation")? as u32;
            for (i, (g, res)) in gens.iter().zip(&residuals).enumerate() {
                ck.push(format!("d w{} ^ W = residual ^ W", i + 1), g.d().wedge(&vol) == res.wedge(&vol));
            }
            ck.push("residuals are divisible by p^valuation", residuals.iter().all(|res| res.valuation() >= v));
            ck.push("some residual survives against W", residuals.iter().any(|res| !res.wedge(&vol).is_zero()));
        }
        (Command::ValidateAlgebroid, _) => {
            distribution_block(&mut ck, &x, &p, r)?;
        }
    }
    Ok(ck.checks)
}
