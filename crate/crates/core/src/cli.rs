//! Command dispatch and canonical JSON output.
//!
//! Every command reads the same job document (see [`crate::input`]) and
//! returns `(exit_code, json)`. Exit codes: 0 computed, 1 negative verdict of
//! a check command, 2 input error, 3 resource cap exceeded. Output is
//! serialized from `serde_json::Value`, whose maps are ordered, so keys come
//! out sorted and the bytes depend only on the result.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::exact_linalg;
use crate::hilbert::{self, AtomSet, ExponentVector, HilbertError};
use crate::input::{Caps, JobInput};
use crate::monomial_subalgebra::{check_separating_general, MonomialFamily};
use crate::oracle::{self, OracleError, OracleOptions};
use crate::repspec::{group_stats, realize_from_lattice, RepError, RepSpec};
use crate::separating::{self, Characteristic, SearchOptions, SeparatingError, SeparatingVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Atoms,
    CheckSep,
    Beta,
    BetaSep,
    Tau,
    Minimize,
    Realize,
    Stats,
    GeneralSep,
    Oracle,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Atoms,
        Command::CheckSep,
        Command::Beta,
        Command::BetaSep,
        Command::Tau,
        Command::Minimize,
        Command::Realize,
        Command::Stats,
        Command::GeneralSep,
        Command::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Atoms => "atoms",
            Command::CheckSep => "check-sep",
            Command::Beta => "beta",
            Command::BetaSep => "beta-sep",
            Command::Tau => "tau",
            Command::Minimize => "minimize",
            Command::Realize => "realize",
            Command::Stats => "stats",
            Command::GeneralSep => "general-sep",
            Command::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub command: Command,
    /// Overrides the `p` of the input document when set.
    pub characteristic: Option<u64>,
    /// Overrides the `caps` of the input document field by field.
    pub caps: Caps,
    pub unsafe_conjectural_bound: bool,
    /// Re-run the brute-force oracle next to the optimized computation.
    pub oracle_crosscheck: bool,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig {
            command,
            characteristic: None,
            caps: Caps::default(),
            unsafe_conjectural_bound: false,
            oracle_crosscheck: false,
        }
    }
}

struct Failure {
    code: i32,
    body: Value,
}

impl Failure {
    fn input(kind: &str, message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            body: json!({ "kind": kind, "message": message.to_string() }),
        }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        let mut f = Failure::input("input", &e);
        match &e {
            RepError::Json { line, column, .. } => {
                f.body["kind"] = json!("json");
                f.body["line"] = json!(line);
                f.body["column"] = json!(column);
            }
            RepError::Field { path, .. } => f.body["path"] = json!(path),
            _ => {}
        }
        f
    }
}

impl From<HilbertError> for Failure {
    fn from(e: HilbertError) -> Self {
        let mut body = json!({ "kind": "cap_exceeded", "message": e.to_string() });
        if let HilbertError::LimitExceeded { frontier, degree, .. } = e {
            body["frontier"] = json!(frontier);
            body["degree"] = json!(degree);
        }
        Failure { code: EXIT_CAP, body }
    }
}

impl From<SeparatingError> for Failure {
    fn from(e: SeparatingError) -> Self {
        match e {
            SeparatingError::SubsetCap { .. } | SeparatingError::TooManyCoordinates(_) => Failure {
                code: EXIT_CAP,
                body: json!({ "kind": "cap_exceeded", "message": e.to_string() }),
            },
            SeparatingError::Rep(r) => r.into(),
            SeparatingError::NotInB(v) => {
                let mut f = Failure::input("not_in_monoid", SeparatingError::NotInB(v.clone()));
                f.body["vector"] = json!(v);
                f
            }
            SeparatingError::NotInFamily(v) => {
                let mut f = Failure::input("not_in_family", SeparatingError::NotInFamily(v.clone()));
                f.body["vector"] = json!(v);
                f
            }
            other => Failure::input("input", other),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge(_) => Failure {
                code: EXIT_CAP,
                body: json!({ "kind": "cap_exceeded", "message": e.to_string() }),
            },
            OracleError::Discrepancy { .. } => Failure {
                code: EXIT_INPUT,
                body: json!({ "kind": "oracle_discrepancy", "message": e.to_string() }),
            },
            other => Failure::input("input", other),
        }
    }
}

fn big(x: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

fn vectors(vs: &[ExponentVector]) -> Value {
    Value::Array(vs.iter().map(|v| json!(v.coords())).collect())
}

pub fn rep_to_json(rep: &RepSpec) -> Value {
    let w = rep.weights();
    json!({
        "n": rep.n(),
        "torus_rank": rep.torus_rank(),
        "torsion": bigs(rep.torsion_orders()),
        "weights": Value::Array((0..w.rows()).map(|r| bigs(w.row(r))).collect()),
    })
}

fn verdict_json(v: &SeparatingVerdict) -> Value {
    let witnesses: Vec<Value> = v
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "J": w.subset,
                "atom": w.atom.coords(),
                "certificate": { "u": bigs(&w.certificate.dual), "k": big(&w.certificate.modulus) },
            })
        })
        .collect();
    let mut out = json!({
        "separating": v.is_separating,
        "char": v.characteristic.as_u64(),
        "witnesses": witnesses,
        "support_bound_used": v.support_bound_used,
        "subsets_examined": v.subsets_examined,
    });
    if v.conditional {
        out["conditional"] = json!(true);
    }
    out
}

struct Job {
    input: JobInput,
    characteristic: Characteristic,
    options: SearchOptions,
    warnings: Vec<String>,
}

impl Job {
    fn new(config: &JobConfig, text: &str) -> Result<Self, Failure> {
        let mut input = JobInput::parse(text)?;
        if config.caps.frontier.is_some() {
            input.caps.frontier = config.caps.frontier;
        }
        if config.caps.degree.is_some() {
            input.caps.degree = config.caps.degree;
        }
        let p = match (config.characteristic, &input.p) {
            (Some(p), _) => p,
            (None, Some(p)) => p
                .to_u64()
                .ok_or_else(|| Failure::input("input", format!("characteristic {p} is out of range")))?,
            (None, None) => 0,
        };
        let characteristic = Characteristic::new(p)?;
        let warnings = match characteristic {
            Characteristic::Zero => Vec::new(),
            Characteristic::Prime(p) => input.rep.characteristic_warnings(&BigInt::from(p)),
        };
        let options = SearchOptions {
            unsafe_conjectural_bound: config.unsafe_conjectural_bound,
            ..SearchOptions::default()
        };
        Ok(Job {
            input,
            characteristic,
            options,
            warnings,
        })
    }

    fn atoms(&self) -> Result<AtomSet, Failure> {
        Ok(hilbert::atoms(&self.input.rep, &self.input.caps.limits())?)
    }

    fn m(&self) -> Result<&[ExponentVector], Failure> {
        self.input
            .m
            .as_deref()
            .ok_or_else(|| Failure::input("input", "this command needs \"M\""))
    }

    fn d(&self) -> Result<&[ExponentVector], Failure> {
        self.input
            .d
            .as_deref()
            .ok_or_else(|| Failure::input("input", "this command needs \"D\""))
    }

    fn with_warnings(&self, mut out: Value) -> Value {
        if !self.warnings.is_empty() {
            out["warnings"] = json!(self.warnings);
        }
        out
    }
}

fn execute(config: &JobConfig, text: &str) -> Result<(i32, Value), Failure> {
    let job = Job::new(config, text)?;
    let rep = &job.input.rep;
    let ch = job.characteristic;
    let oracle_options = OracleOptions::default();
    match config.command {
        Command::Atoms => {
            let atoms = job.atoms()?;
            Ok((
                EXIT_OK,
                json!({ "atoms": vectors(atoms.atoms()), "beta": separating::beta(&atoms) }),
            ))
        }
        Command::Beta => {
            let atoms = job.atoms()?;
            Ok((EXIT_OK, json!({ "beta": separating::beta(&atoms) })))
        }
        Command::CheckSep => {
            let atoms = job.atoms()?;
            let m = job.m()?;
            let verdict = separating::check_separating(rep, &atoms, m, ch, &job.options)?;
            let mut out = verdict_json(&verdict);
            if config.oracle_crosscheck {
                let o = oracle::check_condition2_all_subsets(rep, &atoms, m, ch, &oracle_options)?;
                out["oracle_agrees"] = json!(o.is_separating == verdict.is_separating);
            }
            let code = if verdict.is_separating { EXIT_OK } else { EXIT_FALSE };
            Ok((code, job.with_warnings(out)))
        }
        Command::BetaSep => {
            let atoms = job.atoms()?;
            let b = separating::beta_sep(rep, &atoms, ch, &job.options)?;
            let mut out = json!({ "beta_sep": b, "char": ch.as_u64() });
            if job.options.unsafe_conjectural_bound {
                out["conditional"] = json!(true);
            }
            if config.oracle_crosscheck {
                out["oracle_agrees"] = json!(oracle::beta_sep_definition_oracle(rep, &atoms, ch)? == b);
            }
            Ok((EXIT_OK, job.with_warnings(out)))
        }
        Command::Tau => {
            let atoms = job.atoms()?;
            let tau = separating::tau_exact(rep, &atoms)?;
            let mut out = json!({ "tau": tau, "tau_upper": group_stats(rep).tau_upper });
            if let Characteristic::Prime(p) = ch {
                out["tau_p"] = json!(separating::tau_p_exact(rep, &atoms, p)?);
                out["char"] = json!(p);
            }
            if config.oracle_crosscheck {
                out["oracle_agrees"] = json!(oracle::tau_definition_oracle(rep, &atoms, Characteristic::Zero)? == tau);
            }
            Ok((EXIT_OK, job.with_warnings(out)))
        }
        Command::Minimize => {
            let atoms = job.atoms()?;
            let set = separating::minimize_separating(rep, &atoms, ch, &job.options)?;
            let mut out = json!({ "char": ch.as_u64(), "separating_set": vectors(&set), "size": set.len() });
            if job.options.unsafe_conjectural_bound {
                out["conditional"] = json!(true);
            }
            Ok((EXIT_OK, job.with_warnings(out)))
        }
        Command::Realize => {
            let n = rep.n();
            let gens: Vec<Vec<u32>> = match &job.input.d {
                Some(d) => d.iter().map(|v| v.coords().to_vec()).collect(),
                None => job.atoms()?.atoms().iter().map(|v| v.coords().to_vec()).collect(),
            };
            let lattice = exact_linalg::lattice_from_generators(n, &gens).map_err(|e| Failure::input("input", e))?;
            Ok((EXIT_OK, rep_to_json(&realize_from_lattice(&lattice))))
        }
        Command::Stats => {
            let s = group_stats(rep);
            Ok((
                EXIT_OK,
                json!({
                    "dim_g": s.dim_g,
                    "rk_x": s.rk_x,
                    "tau_upper": s.tau_upper,
                    "tau_upper_conjectural": s.tau_upper_conjectural,
                    "kappa_lower": s.kappa_lower,
                    "kappa_upper": s.kappa_upper,
                    "delta_upper": s.delta_upper,
                }),
            ))
        }
        Command::GeneralSep => {
            let family = MonomialFamily::new(rep.n(), job.d()?.to_vec())?;
            let verdict = check_separating_general(&family, job.m()?, ch)?;
            let code = if verdict.is_separating { EXIT_OK } else { EXIT_FALSE };
            Ok((code, verdict_json(&verdict)))
        }
        Command::Oracle => {
            if rep.n() > oracle::MAX_ORACLE_N {
                return Err(OracleError::TooLarge(rep.n()).into());
            }
            // the optimized beta only fixes the enumeration depth
            let fast = job.atoms()?;
            let cap = u32::try_from(fast.max_length()).map_err(|_| Failure::input("input", "degree too large"))?;
            let atoms = oracle::atoms_bruteforce(rep, cap)?;
            let mut out = json!({
                "atoms": vectors(atoms.atoms()),
                "atoms_agree": atoms == fast,
                "beta_sep": oracle::beta_sep_definition_oracle(rep, &atoms, ch)?,
                "char": ch.as_u64(),
                "tau": oracle::tau_definition_oracle(rep, &atoms, Characteristic::Zero)?,
            });
            if let Characteristic::Prime(_) = ch {
                out["tau_p"] = json!(oracle::tau_definition_oracle(rep, &atoms, ch)?);
            }
            let mut code = EXIT_OK;
            if let Some(m) = &job.input.m {
                let v = oracle::check_condition2_all_subsets(rep, &atoms, m, ch, &oracle_options)?;
                out["separating"] = json!(v.is_separating);
                out["subsets_examined"] = json!(v.subsets_examined);
                out["failing_subsets"] = json!(v.failing_subsets);
                if let Some((j, a)) = &v.first_failure {
                    out["first_failure"] = json!({ "J": j, "atom": a.coords() });
                }
                if !v.is_separating {
                    code = EXIT_FALSE;
                }
            }
            Ok((code, job.with_warnings(out)))
        }
    }
}

/// Runs one job; never panics on malformed input.
pub fn run(config: &JobConfig, input: &str) -> (i32, String) {
    match execute(config, input) {
        Ok((code, value)) => (code, value.to_string()),
        Err(f) => {
            let mut body = Map::new();
            body.insert("error".to_string(), f.body);
            (f.code, Value::Object(body).to_string())
        }
    }
}
