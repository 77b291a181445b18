//! Run configuration: TOML or JSON, resolved into engine objects.
//!
//! Every validation failure names the offending key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraWire, BilinearForm, EndoKind, LieAlgebra, LinearEndo, TwoCocycle};
use crate::loops::TrigLoopWire;
use crate::poisson::{PoissonStructure, StructureKind};
use crate::poly::{parse_polynomial, Polynomial};
use crate::rational::{self, Rational, RationalText};
use crate::rep::Representation;

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "POISSON_FORGE_SEED";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config error at `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl ToString) -> Self {
        ConfigError {
            key: key.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Verify,
    Bracket,
    Flow,
    Holonomy,
    Momentum,
    Cotangent,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Verify => "verify",
            TaskKind::Bracket => "bracket",
            TaskKind::Flow => "flow",
            TaskKind::Holonomy => "holonomy",
            TaskKind::Momentum => "momentum",
            TaskKind::Cotangent => "cotangent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Random probes per randomized check.
    #[serde(default = "default_probes")]
    pub probes: usize,
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub structure: StructureSpec,
    #[serde(default)]
    pub tasks: Vec<TaskKind>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub bracket: Option<BracketSpec>,
    #[serde(default)]
    pub flow: Option<FlowSpec>,
    #[serde(default)]
    pub holonomy: Option<HolonomySpec>,
    #[serde(default)]
    pub momentum: Option<MomentumSpec>,
    #[serde(default)]
    pub cotangent: Option<CotangentSpec>,
}

fn default_probes() -> usize {
    20
}

/// Either `builtin = "so3"` or an explicit structure-constant table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Builtin { builtin: String },
    Table(AlgebraWire),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    #[serde(default)]
    pub kind: Option<StructureKind>,
    /// Upper-triangular entries `[i, j, "p/q"]` of `Λ`, zero-based.
    #[serde(default)]
    pub lambda: Option<Vec<(usize, usize, RationalText)>>,
    /// `Λ(x, y) = κ(Dx, y)`; requires `derivation`.
    #[serde(default)]
    pub kappa: Option<Vec<Vec<RationalText>>>,
    #[serde(default)]
    pub derivation: Option<DerivationSpec>,
    /// Variable names used when parsing polynomials; defaults to `x1..xn`.
    #[serde(default)]
    pub variables: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DerivationSpec {
    /// `ad(e_k)` for the given zero-based basis index.
    Adjoint { ad: usize },
    Matrix(Vec<Vec<RationalText>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "tol_casimir")]
    pub casimir: f64,
    #[serde(default = "tol_holonomy")]
    pub holonomy: f64,
    #[serde(default = "tol_exp")]
    pub exp: f64,
    #[serde(default = "tol_fiber")]
    pub fiber: f64,
    #[serde(default = "tol_oracle")]
    pub oracle: f64,
}

fn tol_casimir() -> f64 {
    1e-10
}
fn tol_holonomy() -> f64 {
    1e-8
}
fn tol_exp() -> f64 {
    1e-10
}
fn tol_fiber() -> f64 {
    1e-6
}
fn tol_oracle() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            casimir: tol_casimir(),
            holonomy: tol_holonomy(),
            exp: tol_exp(),
            fiber: tol_fiber(),
            oracle: tol_oracle(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory for CSV artifacts; nothing is written when absent.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Report path; the report goes to stdout when absent.
    #[serde(default)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "G")]
    pub g: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub hamiltonian: String,
    pub initial: Vec<f64>,
    pub step: f64,
    pub steps: usize,
    /// Conserved quantities to monitor, name to polynomial.
    #[serde(default)]
    pub monitors: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomySpec {
    /// Built-in group: `so2`, `so3`, `su2`, `u2` or `torus2`.
    pub group: String,
    #[serde(default = "default_time")]
    pub time: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    /// Explicit loop whose holonomy path is written as an artifact.
    #[serde(default)]
    pub potential: Option<TrigLoopWire>,
    /// Seeded `(ξ, g)` pairs for the gauge-equivariance check.
    #[serde(default)]
    pub pairs: usize,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_scale")]
    pub scale: f64,
    /// Seeded pairs for fiber reconstruction; zero skips the check.
    #[serde(default)]
    pub fiber_pairs: usize,
}

fn default_time() -> f64 {
    1.0
}
fn default_step() -> f64 {
    1e-3
}
fn default_degree() -> usize {
    2
}
fn default_scale() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumSpec {
    /// Basis name to image polynomial on the source space.
    pub phi: BTreeMap<String, String>,
    /// Upper-triangular entries of the cocycle for an affine target.
    #[serde(default)]
    pub omega: Option<Vec<(usize, usize, RationalText)>>,
    /// Source Poisson space; defaults to the run's structure.
    #[serde(default)]
    pub source: Option<SourceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub structure: StructureSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CotangentSpec {
    pub group: String,
    #[serde(default)]
    pub magnetic: Option<Vec<(usize, usize, RationalText)>>,
    #[serde(default = "default_reduction_samples")]
    pub samples: usize,
}

fn default_reduction_samples() -> usize {
    100
}

impl RunConfig {
    /// Parses by extension: `.json` as JSON, anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(path.display().to_string(), e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut cfg = Self::parse(&text, is_json)?;
        cfg.apply_env()?;
        Ok(cfg)
    }

    pub fn parse(text: &str, json: bool) -> Result<Self, ConfigError> {
        let cfg: RunConfig = if json {
            serde_json::from_str(text).map_err(|e| ConfigError::new("<json>", e))?
        } else {
            toml::from_str(text).map_err(|e| {
                let key = e
                    .span()
                    .and_then(|s| text.get(s))
                    .map_or("<toml>".to_string(), |s| s.trim().to_string());
                ConfigError::new(key, e.message())
            })?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|e| ConfigError::new(SEED_ENV, format!("{v:?}: {e}")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = &self.tolerances;
        for (key, v) in [
            ("tolerances.casimir", t.casimir),
            ("tolerances.holonomy", t.holonomy),
            ("tolerances.exp", t.exp),
            ("tolerances.fiber", t.fiber),
            ("tolerances.oracle", t.oracle),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new(key, format!("must be positive, got {v}")));
            }
        }
        if self.probes == 0 {
            return Err(ConfigError::new("probes", "must be at least 1"));
        }
        let resolved = self.resolve_structure()?;
        for task in &self.tasks {
            let present = match task {
                TaskKind::Verify => true,
                TaskKind::Bracket => self.bracket.is_some(),
                TaskKind::Flow => self.flow.is_some(),
                TaskKind::Holonomy => self.holonomy.is_some(),
                TaskKind::Momentum => self.momentum.is_some(),
                TaskKind::Cotangent => self.cotangent.is_some(),
            };
            if !present {
                return Err(ConfigError::new(task.name(), "task listed without its section"));
            }
        }
        if let Some(b) = &self.bracket {
            resolved.parse_poly("bracket.F", &b.f)?;
            resolved.parse_poly("bracket.G", &b.g)?;
        }
        if let Some(f) = &self.flow {
            resolved.parse_poly("flow.hamiltonian", &f.hamiltonian)?;
            if f.initial.len() != resolved.structure.dim() {
                return Err(ConfigError::new(
                    "flow.initial",
                    format!("expected {} entries", resolved.structure.dim()),
                ));
            }
            if !(f.step > 0.0 && f.step.is_finite()) {
                return Err(ConfigError::new("flow.step", "must be positive"));
            }
            for (name, m) in &f.monitors {
                resolved.parse_poly(&format!("flow.monitors.{name}"), m)?;
            }
        }
        if let Some(h) = &self.holonomy {
            let rep = builtin_group("holonomy.group", &h.group)?;
            if !(h.step > 0.0 && h.step.is_finite()) {
                return Err(ConfigError::new("holonomy.step", "must be positive"));
            }
            if !(h.time > 0.0 && h.time.is_finite()) {
                return Err(ConfigError::new("holonomy.time", "must be positive"));
            }
            if let Some(w) = &h.potential {
                crate::loops::TrigLoop::from_wire(w, Arc::new(rep.algebra().clone()))
                    .map_err(|e| ConfigError::new("holonomy.potential", e))?;
            }
        }
        if self.momentum.is_some() {
            self.resolve_momentum()?;
        }
        if let Some(c) = &self.cotangent {
            let rep = builtin_group("cotangent.group", &c.group)?;
            if let Some(b) = &c.magnetic {
                cocycle_from_pairs("cotangent.magnetic", rep.algebra().dim(), b)?;
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> Result<LieAlgebra, ConfigError> {
        resolve_algebra("algebra", &self.algebra)
    }

    pub fn resolve_structure(&self) -> Result<ResolvedStructure, ConfigError> {
        resolve_structure("structure", &self.algebra()?, &self.structure)
    }

    pub fn resolve_momentum(&self) -> Result<ResolvedMomentum, ConfigError> {
        let spec = self
            .momentum
            .as_ref()
            .ok_or_else(|| ConfigError::new("momentum", "section missing"))?;
        let g = self.algebra()?;
        let source = match &spec.source {
            Some(s) => {
                let a = resolve_algebra("momentum.source.algebra", &s.algebra)?;
                resolve_structure("momentum.source.structure", &a, &s.structure)?
            }
            None => self.resolve_structure()?,
        };
        let mut phi = vec![Polynomial::zero(source.structure.dim()); g.dim()];
        for (name, text) in &spec.phi {
            let k = g.basis().iter().position(|b| b == name).ok_or_else(|| {
                ConfigError::new(format!("momentum.phi.{name}"), "unknown basis element")
            })?;
            phi[k] = source.parse_poly(&format!("momentum.phi.{name}"), text)?;
        }
        let omega = spec
            .omega
            .as_ref()
            .map(|pairs| cocycle_from_pairs("momentum.omega", g.dim(), pairs))
            .transpose()?;
        Ok(ResolvedMomentum {
            algebra: g,
            source,
            phi,
            omega,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedStructure {
    pub structure: PoissonStructure,
    pub variables: Vec<String>,
}

impl ResolvedStructure {
    pub fn parse_poly(&self, key: &str, text: &str) -> Result<Polynomial, ConfigError> {
        parse_polynomial(text, self.structure.dim(), &self.variables)
            .map_err(|e| ConfigError::new(key, e))
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedMomentum {
    pub algebra: LieAlgebra,
    pub source: ResolvedStructure,
    pub phi: Vec<Polynomial>,
    pub omega: Option<TwoCocycle>,
}

pub fn builtin_group(key: &str, name: &str) -> Result<Representation, ConfigError> {
    Representation::builtin(name).map_err(|e| ConfigError::new(key, e))
}

fn resolve_algebra(key: &str, spec: &AlgebraSpec) -> Result<LieAlgebra, ConfigError> {
    match spec {
        AlgebraSpec::Builtin { builtin } => builtin_algebra(builtin)
            .ok_or_else(|| ConfigError::new(format!("{key}.builtin"), format!("unknown algebra {builtin:?}"))),
        AlgebraSpec::Table(wire) => {
            LieAlgebra::from_wire(wire).map_err(|e| ConfigError::new(format!("{key}.brackets"), e))
        }
    }
}

/// `so3`, `heisenberg`, `so3+r` or `abelian:<n>`.
pub fn builtin_algebra(name: &str) -> Option<LieAlgebra> {
    match name.to_ascii_lowercase().as_str() {
        "so3" | "su2" => Some(LieAlgebra::so3()),
        "heisenberg" => Some(LieAlgebra::heisenberg()),
        "so3+r" | "u2" => Some(LieAlgebra::so3_plus_center()),
        other => other
            .strip_prefix("abelian:")
            .and_then(|n| n.parse().ok())
            .map(LieAlgebra::abelian),
    }
}

fn resolve_structure(
    key: &str,
    g: &LieAlgebra,
    spec: &StructureSpec,
) -> Result<ResolvedStructure, ConfigError> {
    let n = g.dim();
    let lambda = match (&spec.lambda, &spec.kappa, &spec.derivation) {
        (Some(_), Some(_), _) => {
            return Err(ConfigError::new(
                format!("{key}.kappa"),
                "give either lambda or kappa with derivation, not both",
            ))
        }
        (Some(pairs), None, _) => Some(cocycle_from_pairs(&format!("{key}.lambda"), n, pairs)?),
        (None, Some(kappa), Some(d)) => {
            let kkey = format!("{key}.kappa");
            let m = rational::parse_matrix(kappa).map_err(|e| ConfigError::new(&kkey, e))?;
            let form = BilinearForm::for_algebra(g, m).map_err(|e| ConfigError::new(&kkey, e))?;
            let dkey = format!("{key}.derivation");
            let endo = match d {
                DerivationSpec::Adjoint { ad } => {
                    if *ad >= n {
                        return Err(ConfigError::new(&dkey, format!("index {ad} out of range")));
                    }
                    g.ad(&crate::algebra::unit(n, *ad))
                        .map_err(|e| ConfigError::new(&dkey, e))?
                }
                DerivationSpec::Matrix(rows) => {
                    let m = rational::parse_matrix(rows).map_err(|e| ConfigError::new(&dkey, e))?;
                    LinearEndo::new(m, EndoKind::Derivation).map_err(|e| ConfigError::new(&dkey, e))?
                }
            };
            Some(
                TwoCocycle::from_form_derivation(&form, &endo)
                    .map_err(|e| ConfigError::new(&dkey, e))?,
            )
        }
        (None, Some(_), None) => {
            return Err(ConfigError::new(format!("{key}.derivation"), "kappa needs a derivation"))
        }
        (None, None, Some(_)) => {
            return Err(ConfigError::new(format!("{key}.kappa"), "derivation needs kappa"))
        }
        (None, None, None) => None,
    };
    let kind = spec.kind.unwrap_or(if lambda.is_some() {
        StructureKind::Affine
    } else {
        StructureKind::Linear
    });
    let kkey = format!("{key}.kind");
    // Cocycle and Jacobi conditions are left to the verify task.
    let structure = match kind {
        StructureKind::Linear => {
            if lambda.is_some() {
                return Err(ConfigError::new(&kkey, "linear structures take no lambda"));
            }
            PoissonStructure::linear_unchecked(g.clone())
        }
        StructureKind::Constant => PoissonStructure::constant_unchecked(
            lambda.ok_or_else(|| ConfigError::new(&kkey, "constant structures need lambda"))?,
        ),
        StructureKind::Affine => PoissonStructure::affine_unchecked(
            g.clone(),
            lambda.unwrap_or_else(|| TwoCocycle::zero(n)),
        ),
    };
    let variables = match &spec.variables {
        Some(v) if v.len() != n => {
            return Err(ConfigError::new(
                format!("{key}.variables"),
                format!("expected {n} names"),
            ))
        }
        Some(v) => v.clone(),
        None => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    let structure = structure
        .with_names(variables.clone())
        .map_err(|e| ConfigError::new(format!("{key}.variables"), e))?;
    Ok(ResolvedStructure {
        structure,
        variables,
    })
}

pub fn cocycle_from_pairs(
    key: &str,
    n: usize,
    pairs: &[(usize, usize, RationalText)],
) -> Result<TwoCocycle, ConfigError> {
    let entries = pairs
        .iter()
        .map(|(i, j, v)| {
            let r: Rational = v.clone().into_rational().map_err(|e| ConfigError::new(key, e))?;
            Ok((*i, *j, r))
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    TwoCocycle::from_pairs(n, &entries).map_err(|e| ConfigError::new(key, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        seed = 3
        tasks = ["verify"]
        [algebra]
        builtin = "so3"
    "#;

    #[test]
    fn parses_minimal_toml_and_json() {
        let cfg = RunConfig::parse(MINIMAL, false).unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.tasks, vec![TaskKind::Verify]);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::parse(&json, true).unwrap(), cfg);
        let s = cfg.resolve_structure().unwrap();
        assert_eq!(s.structure.dim(), 3);
    }

    #[test]
    fn errors_name_the_key() {
        let bad_tol = format!("{MINIMAL}\n[tolerances]\nholonomy = -1.0\n");
        assert_eq!(RunConfig::parse(&bad_tol, false).unwrap_err().key, "tolerances.holonomy");

        let missing = MINIMAL.replace("[\"verify\"]", "[\"flow\"]");
        assert_eq!(RunConfig::parse(&missing, false).unwrap_err().key, "flow");

        let bad_poly = format!("{MINIMAL}\n[bracket]\nF = \"x1 +\"\nG = \"x2\"\n");
        assert_eq!(RunConfig::parse(&bad_poly, false).unwrap_err().key, "bracket.F");

        let unknown = format!("bogus = 1\n{MINIMAL}");
        assert!(RunConfig::parse(&unknown, false).is_err());

        let bad_group = format!("{MINIMAL}\n[holonomy]\ngroup = \"so7\"\n");
        assert_eq!(RunConfig::parse(&bad_group, false).unwrap_err().key, "holonomy.group");
    }

    #[test]
    fn kappa_and_derivation_build_lambda() {
        let text = r#"
            [algebra]
            builtin = "so3"
            [structure]
            kappa = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            derivation = { ad = 2 }
        "#;
        let cfg = RunConfig::parse(text, false).unwrap();
        let s = cfg.resolve_structure().unwrap();
        assert_eq!(s.structure.kind(), StructureKind::Affine);
        // κ([e3, e1], e2) = κ(e2, e2) = 1.
        assert_eq!(s.structure.lambda().unwrap().entry(0, 1), &rational::one());
    }
}
