//! Scenario files, builtin fixtures and verification reports.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::etale_fields::{build_cyclotomic, build_kummer_cubic, load_algebra, FieldError, GaloisAlgebra};
use crate::hopf_structures::HopfGaloisStructure;
use crate::integral_orders::{
    counterexample, inertia_acts_trivially_on_t, local_check_global, non_normal_descent, principal_ideal,
    theta_identities, verify_theorem_commutative_tame, OrderError, PipelineOptions, SearchOptions,
    DEFAULT_SEARCH_BOUND,
};
use crate::par::{self, Exec};
use crate::perm_groups::{
    enumerate_regular_subgroups, CosetSpace, EnumerationOptions, FiniteGroup, GroupError, RegularSubgroup,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::rational::is_prime;

pub const ENUM_BOUND_VAR: &str = "HGS_ENUM_BOUND";
pub const SEARCH_BOUND_VAR: &str = "HGS_SEARCH_BOUND";

pub const BUILTIN_FIXTURES: &[(&str, &str)] = &[
    ("cyclotomic-3", "Q(zeta_3), group C_2, ramified at 3"),
    ("cyclotomic-4", "Q(i), group C_2, ramified at 2 (wild)"),
    ("cyclotomic-5", "Q(zeta_5), group C_4, ramified at 5"),
    ("cyclotomic-7", "Q(zeta_7), group C_6, ramified at 7"),
    ("cyclotomic-9", "Q(zeta_9), group C_6, ramified at 3 (wild)"),
    ("kummer-cubic-5", "Q(zeta_3, a) with a^3 = 5, group D_3, tame at 5"),
    ("d3-abstract", "the group D_3 without field data"),
];

pub const BUILTIN_SCENARIOS: &[(&str, &str)] = &[
    ("kummer-counterexample", include_str!("../scenarios/kummer-counterexample.toml")),
    ("cyclotomic7-tame", include_str!("../scenarios/cyclotomic7-tame.toml")),
    ("cyclotomic5-tame", include_str!("../scenarios/cyclotomic5-tame.toml")),
    ("kummer-descent", include_str!("../scenarios/kummer-descent.toml")),
    ("cyclotomic7-global", include_str!("../scenarios/cyclotomic7-global.toml")),
    ("cyclotomic9-wild", include_str!("../scenarios/cyclotomic9-wild.toml")),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("scenario: {0}")]
    Parse(String),
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("structure index {index} out of range ({count} structures)")]
    UnknownStructure { index: usize, count: usize },
    #[error("fixture: {0}")]
    Field(#[from] FieldError),
    #[error("fixture: {0}")]
    Group(#[from] GroupError),
}

fn invalid(field: &str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid { field: field.to_string(), reason: reason.into() }
}

/// A field with Galois data, or a bare group.
#[derive(Clone, Debug)]
pub enum Fixture {
    Field(Arc<GaloisAlgebra>),
    Group(FiniteGroup),
}

impl Fixture {
    pub fn group(&self) -> &FiniteGroup {
        match self {
            Fixture::Field(ext) => ext.group(),
            Fixture::Group(g) => g,
        }
    }

    pub fn field(&self) -> Option<&Arc<GaloisAlgebra>> {
        match self {
            Fixture::Field(ext) => Some(ext),
            Fixture::Group(_) => None,
        }
    }
}

fn builtin_fixture(name: &str) -> Option<Result<Fixture, ScenarioError>> {
    let field = |r: Result<GaloisAlgebra, FieldError>| r.map(|e| Fixture::Field(Arc::new(e))).map_err(Into::into);
    Some(match name {
        "cyclotomic-3" => field(build_cyclotomic(3)),
        "cyclotomic-4" => field(build_cyclotomic(4)),
        "cyclotomic-5" => field(build_cyclotomic(5)),
        "cyclotomic-7" => field(build_cyclotomic(7)),
        "cyclotomic-9" => field(build_cyclotomic(9)),
        "kummer-cubic-5" => field(build_kummer_cubic(5)),
        "d3-abstract" => Ok(Fixture::Group(FiniteGroup::dihedral3("r", "s"))),
        _ => return None,
    })
}

/// Resolves a builtin fixture name, or a path to an algebra file (TOML or
/// JSON) or a group file (JSON with a `mul` table). Relative paths are taken
/// from `base`.
pub fn load_fixture(reference: &str, base: Option<&Path>) -> Result<Fixture, ScenarioError> {
    if let Some(f) = builtin_fixture(reference) {
        return f;
    }
    let path = match base {
        Some(b) if Path::new(reference).is_relative() => b.join(reference),
        _ => PathBuf::from(reference),
    };
    if !path.is_file() {
        return Err(ScenarioError::UnknownFixture(reference.to_string()));
    }
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        let text = read(&path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if value.get("mul").is_some() {
            return Ok(Fixture::Group(FiniteGroup::from_json(&text)?));
        }
    }
    Ok(Fixture::Field(Arc::new(load_algebra(&path)?)))
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Bounds {
    #[serde(default = "default_enum_bound")]
    pub enumeration: usize,
    #[serde(default = "default_search_bound")]
    pub search: u64,
}

fn default_enum_bound() -> usize {
    DEFAULT_ENUMERATION_BOUND
}

fn default_search_bound() -> u64 {
    DEFAULT_SEARCH_BOUND
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { enumeration: DEFAULT_ENUMERATION_BOUND, search: DEFAULT_SEARCH_BOUND }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DescentSpec {
    /// Names of generators of `Gal(E/L)`.
    pub subgroup: Vec<String>,
    #[serde(default)]
    pub structure: usize,
    #[serde(default = "default_descent_powers")]
    pub ideal_powers: Vec<i64>,
}

fn default_descent_powers() -> Vec<i64> {
    vec![0]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct IdealSpec {
    pub prime: u64,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GlobalSpec {
    pub ideals: Vec<IdealSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub fixture: String,
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default = "default_powers")]
    pub ideal_powers: Vec<i64>,
    #[serde(default)]
    pub enumerate: bool,
    #[serde(default)]
    pub commutative_only: bool,
    #[serde(default = "yes")]
    pub run_theorem: bool,
    #[serde(default)]
    pub run_counterexample: bool,
    #[serde(default)]
    pub run_descent: bool,
    #[serde(default)]
    pub run_global: bool,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub bounds: Bounds,
    /// Adds wall-clock time to the report, which makes it non-reproducible.
    #[serde(default)]
    pub timing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descent: Option<DescentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalSpec>,
}

/// The offending line and the parser message, on one line.
fn describe_toml_error(text: &str, e: &toml::de::Error) -> String {
    match e.span() {
        Some(span) => {
            let line_no = text[..span.start.min(text.len())].matches('\n').count();
            let line = text.lines().nth(line_no).unwrap_or("").trim();
            format!("line {}: `{line}`: {}", line_no + 1, e.message())
        }
        None => e.message().to_string(),
    }
}

fn default_powers() -> Vec<i64> {
    (-2..=2).collect()
}

fn yes() -> bool {
    true
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(describe_toml_error(text, &e)))?;
        s.validate()?;
        Ok(s)
    }

    /// A builtin scenario name, or a path to a scenario file. Returns the
    /// directory that relative fixture paths are resolved against.
    pub fn load(reference: &str) -> Result<(Self, Option<PathBuf>), ScenarioError> {
        let path = Path::new(reference);
        if !path.exists() {
            if let Some((_, text)) = BUILTIN_SCENARIOS.iter().find(|(n, _)| *n == reference) {
                return Ok((Self::from_toml(text)?, None));
            }
        }
        let text = read(path)?;
        Ok((Self::from_toml(&text)?, path.parent().map(Path::to_path_buf)))
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(invalid("primes", format!("{p} is not a positive prime")));
        }
        if self.bounds.enumeration == 0 {
            return Err(invalid("bounds.enumeration", "must be positive"));
        }
        if self.bounds.search == 0 {
            return Err(invalid("bounds.search", "must be positive"));
        }
        if self.run_theorem && self.primes.is_empty() {
            return Err(invalid("primes", "runTheorem needs at least one prime"));
        }
        if (self.run_counterexample || self.run_descent) && self.primes.is_empty() {
            return Err(invalid("primes", "needs at least one prime"));
        }
        if self.run_descent && self.descent.is_none() {
            return Err(invalid("descent", "runDescent needs a [descent] table"));
        }
        if self.run_global && self.global.is_none() {
            return Err(invalid("global", "runGlobal needs a [global] table"));
        }
        if let Some(g) = &self.global {
            if let Some(i) = g.ideals.iter().find(|i| !is_prime(i.prime)) {
                return Err(invalid("global.ideals", format!("{} is not a positive prime", i.prime)));
            }
        }
        Ok(())
    }

    /// Applies the bound overrides from the environment.
    pub fn apply_env(&mut self) -> Result<(), ScenarioError> {
        if let Ok(v) = std::env::var(ENUM_BOUND_VAR) {
            self.bounds.enumeration =
                v.parse().ok().filter(|&b| b > 0).ok_or_else(|| invalid(ENUM_BOUND_VAR, "expected a positive integer"))?;
        }
        if let Ok(v) = std::env::var(SEARCH_BOUND_VAR) {
            self.bounds.search =
                v.parse().ok().filter(|&b| b > 0).ok_or_else(|| invalid(SEARCH_BOUND_VAR, "expected a positive integer"))?;
        }
        Ok(())
    }

    fn options(&self, exec: Exec) -> PipelineOptions {
        PipelineOptions {
            enum_bound: self.bounds.enumeration,
            search: SearchOptions { bound: self.bounds.search, exec },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scenario: Scenario,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# Scenario report\n\nfixture: `{}`\nverdict: **{}**\n\n| check | result | note |\n|---|---|---|\n",
            self.scenario.fixture,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            out += &format!(
                "| {} | {} | {} |\n",
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.error.as_deref().unwrap_or("")
            );
        }
        out
    }
}

#[derive(Clone, Debug)]
enum Check {
    Enumerate,
    Theorem(u64),
    Theta(u64),
    Counterexample(u64),
    Descent(u64),
    Global,
}

impl Check {
    fn name(&self) -> String {
        match self {
            Check::Enumerate => "enumerate".into(),
            Check::Theorem(p) => format!("theorem p={p}"),
            Check::Theta(p) => format!("theta p={p}"),
            Check::Counterexample(p) => format!("counterexample p={p}"),
            Check::Descent(p) => format!("descent p={p}"),
            Check::Global => "global".into(),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report entries serialize")
}

/// Runs every flagged check. Input problems (unreadable fixture, bad
/// scenario) are errors; failing checks are recorded in the report.
pub fn run_scenario(scenario: &Scenario, base: Option<&Path>, exec: Exec) -> Result<Report, ScenarioError> {
    let start = Instant::now();
    scenario.validate()?;
    let fixture = load_fixture(&scenario.fixture, base)?;
    let mut checks = Vec::new();
    if scenario.enumerate {
        checks.push(Check::Enumerate);
    }
    if scenario.run_theorem {
        for &p in &scenario.primes {
            checks.push(Check::Theorem(p));
            checks.push(Check::Theta(p));
        }
    }
    if scenario.run_counterexample {
        checks.push(Check::Counterexample(scenario.primes[0]));
    }
    if scenario.run_descent {
        checks.push(Check::Descent(scenario.primes[0]));
    }
    if scenario.run_global {
        checks.push(Check::Global);
    }
    let results = par::map(exec, &checks, |c| {
        let (passed, details, error) = match run_check(c, scenario, &fixture, exec) {
            Ok((passed, details)) => (passed, details, None),
            Err(e) => (false, Value::Null, Some(e.to_string())),
        };
        CheckResult { name: c.name(), passed, error, details }
    });
    let verdict = if results.iter().all(|c| c.passed) { Verdict::Pass } else { Verdict::Fail };
    Ok(Report {
        tool: "hgs".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: scenario.clone(),
        checks: results,
        verdict,
        timing_ms: scenario.timing.then(|| start.elapsed().as_millis()),
    })
}

fn needs_field(fixture: &Fixture) -> Result<&Arc<GaloisAlgebra>, OrderError> {
    fixture.field().ok_or_else(|| OrderError::Field(FieldError::Parse("fixture has no field data".into())))
}

fn run_check(check: &Check, sc: &Scenario, fixture: &Fixture, exec: Exec) -> Result<(bool, Value), OrderError> {
    let opts = sc.options(exec);
    match *check {
        Check::Enumerate => {
            let rows = structure_summaries(fixture, sc.commutative_only, sc.bounds.enumeration)?;
            let passed = rows.iter().all(|r| r.get("ok").and_then(Value::as_bool).unwrap_or(true));
            Ok((passed, json!({ "count": rows.len(), "structures": rows })))
        }
        Check::Theorem(p) => {
            let ext = needs_field(fixture)?;
            let entries = verify_theorem_commutative_tame(ext, p, &sc.ideal_powers, &opts)?;
            let passed = !entries.is_empty() && entries.iter().all(|e| e.passed());
            Ok((passed, to_value(&entries)))
        }
        Check::Theta(p) => {
            let ext = needs_field(fixture)?;
            if !ext.is_tame(p)? {
                return Err(FieldError::WildRamification { p }.into());
            }
            let mut rows = Vec::new();
            let mut passed = true;
            for (i, n) in ext.group().hopf_galois_structures(true, sc.bounds.enumeration)?.into_iter().enumerate() {
                let h = HopfGaloisStructure::new(ext.clone(), n)?;
                let t = theta_identities(&h, p)?;
                passed &= t.passed();
                rows.push(json!({ "structureIndex": i, "structureType": h.type_name(), "check": to_value(&t) }));
            }
            Ok((passed, Value::Array(rows)))
        }
        Check::Counterexample(p) => {
            let ext = needs_field(fixture)?;
            let r = counterexample(ext, p, &opts)?;
            Ok((r.passed(), to_value(&r)))
        }
        Check::Descent(p) => {
            let ext = needs_field(fixture)?;
            let spec = sc.descent.as_ref().expect("validated");
            let g = ext.group();
            let gens = spec.subgroup.iter().map(|n| g.element(n)).collect::<Result<Vec<_>, _>>()?;
            let g_l = g.generate(&gens);
            let cosets = CosetSpace::new(g, &g_l)?;
            let structures = enumerate_regular_subgroups(
                cosets.len(),
                &EnumerationOptions {
                    normalizer: Some(cosets.lambda_image(g)),
                    abelian_only: false,
                    bound: sc.bounds.enumeration,
                    exec,
                },
            )?;
            let n = structures.get(spec.structure).ok_or_else(|| OrderError::Group(GroupError::UnknownElement(format!("structure {}", spec.structure))))?;
            let mut rows = Vec::new();
            let mut passed = true;
            for &k in &spec.ideal_powers {
                let b = ext.ideal_power(p, k)?;
                let r = non_normal_descent(ext, &g_l, n, &b, &opts.search)?;
                passed &= r.passed();
                rows.push(json!({ "idealPower": k, "report": to_value(&r) }));
            }
            Ok((passed, Value::Array(rows)))
        }
        Check::Global => {
            let ext = needs_field(fixture)?;
            let spec = sc.global.as_ref().expect("validated");
            let mut rows = Vec::new();
            let mut passed = true;
            for ideal in &spec.ideals {
                let basis = if ideal.power == 0 {
                    ext.integral_basis().clone()
                } else {
                    let pd = ext.prime_data(ideal.prime).ok_or(FieldError::MissingPrimeData { p: ideal.prime })?;
                    principal_ideal(ext, &ext.algebra().pow(&pd.uniformizer, ideal.power as u64))
                };
                let entries = local_check_global(ext, &basis, &sc.primes, &opts)?;
                passed &= !entries.is_empty() && entries.iter().all(|e| e.status == crate::integral_orders::FreenessStatus::Free);
                rows.push(json!({ "prime": ideal.prime, "power": ideal.power, "entries": to_value(&entries) }));
            }
            Ok((passed, Value::Array(rows)))
        }
    }
}

fn structures(fixture: &Fixture, commutative_only: bool, bound: usize) -> Result<Vec<(usize, RegularSubgroup)>, GroupError> {
    Ok(fixture
        .group()
        .hopf_galois_structures(false, bound)?
        .into_iter()
        .enumerate()
        .filter(|(_, n)| !commutative_only || n.is_abelian())
        .collect())
}

fn structure_summaries(fixture: &Fixture, commutative_only: bool, bound: usize) -> Result<Vec<Value>, OrderError> {
    let group = fixture.group();
    let rho = group.right_regular();
    let mut rows = Vec::new();
    for (i, n) in structures(fixture, commutative_only, bound)? {
        let mut row = json!({
            "index": i,
            "type": n.type_name(),
            "abelian": n.is_abelian(),
            "classical": n.same_set(&rho),
        });
        if let Some(ext) = fixture.field() {
            let h = HopfGaloisStructure::new(ext.clone(), n)?;
            let hopf_galois = h.is_hopf_galois();
            let module_algebra = h.module_algebra_check();
            row["dim"] = json!(h.dim());
            row["hopfGalois"] = json!(hopf_galois);
            row["moduleAlgebra"] = json!(module_algebra);
            row["ok"] = json!(hopf_galois && module_algebra && h.dim() == ext.dim());
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn list_fixtures() -> String {
    let width = BUILTIN_FIXTURES.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (name, about) in BUILTIN_FIXTURES {
        out += &format!("{name:width$}  {about}\n");
    }
    out
}

pub fn list_scenarios() -> String {
    BUILTIN_SCENARIOS.iter().map(|(n, _)| format!("{n}\n")).collect()
}

/// One line per structure: index, type, abelian or not, classical marker.
pub fn enumerate_text(reference: &str, commutative_only: bool, bound: usize) -> Result<String, ScenarioError> {
    let fixture = load_fixture(reference, None)?;
    let rho = fixture.group().right_regular();
    let mut out = String::new();
    for (i, n) in structures(&fixture, commutative_only, bound)? {
        out += &format!(
            "{i}  {}  {}{}\n",
            n.type_name(),
            if n.is_abelian() { "abelian" } else { "nonabelian" },
            if n.same_set(&rho) { "  classical" } else { "" }
        );
    }
    Ok(out)
}

pub fn describe_structure(reference: &str, index: usize, bound: usize) -> Result<String, ScenarioError> {
    let fixture = load_fixture(reference, None)?;
    let group = fixture.group();
    let all = group.hopf_galois_structures(false, bound)?;
    let count = all.len();
    let n = all.get(index).ok_or(ScenarioError::UnknownStructure { index, count })?;
    let mut out = format!(
        "structure {index} of {count} on {reference}: {}, type {}\n",
        if n.is_abelian() { "abelian" } else { "nonabelian" },
        n.type_name()
    );
    if n.same_set(&group.right_regular()) {
        out += "classical (N = rho(G))\n";
    }
    if n.same_set(&group.left_regular()) {
        out += "left regular (N = lambda(G))\n";
    }
    out += "elements by image of the identity:\n";
    for (g, eta) in n.by_image_of_base().iter().enumerate() {
        out += &format!("  {:>4} <- {}\n", group.name(g), eta);
    }
    if let Some(ext) = fixture.field() {
        let h = HopfGaloisStructure::new(ext.clone(), n.clone()).map_err(|e| invalid("structure", e.to_string()))?;
        for pd in ext.primes() {
            let line = if !n.is_abelian() {
                "not applicable, N is nonabelian".to_string()
            } else {
                match inertia_acts_trivially_on_t(&h, pd.p) {
                    Ok(true) => "trivial".to_string(),
                    Ok(false) => "nontrivial".to_string(),
                    Err(e) => e.to_string(),
                }
            };
            out += &format!("inertia action on the {}-part of N: {line}\n", pd.p);
        }
        out += &format!("basis of H (dimension {}):\n", h.dim());
        for (i, b) in h.basis().iter().enumerate() {
            let terms: Vec<String> = b
                .terms()
                .map(|(eta, c)| format!("({}) {}", ext.algebra().format(c), eta))
                .collect();
            out += &format!("  h{i} = {}\n", terms.join(" + "));
        }
    }
    Ok(out)
}
