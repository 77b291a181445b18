//! Config-driven runner behind the `poisson-forge` binary.
//!
//! `run` executes the configured tasks in order (or concurrently with
//! `parallel`), records one [`CheckOutcome`] per check and writes CSV
//! artifacts atomically. Task errors become `error` outcomes; later tasks
//! still run.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, unit, LieAlgebra};
use crate::config::{
    builtin_group, cocycle_from_pairs, ConfigError, ResolvedStructure, RunConfig, TaskKind,
};
use crate::cotangent::{self, CotangentBundle, CotangentTangent, GeneratorAlgebra};
use crate::error::{Error, Result};
use crate::loops::{self, GaugeLoop, TrigLoop};
use crate::momentum::{self, ComomentumMap, MomentumMap};
use crate::poisson;
use crate::poly::{random_polynomial, Polynomial};
use crate::rational::{self, Rational};

/// Name of the seeded generator recorded in every report.
pub const GENERATOR: &str = "ChaCha8Rng";

/// Closed-form cotangent identities must hold to roundoff.
const CLOSED_FORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub task: String,
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub max_residual: f64,
    /// Exact residual for checks carried out in rational arithmetic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_residual: Option<String>,
    pub probes: usize,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: Option<String>,
    pub seed: u64,
    pub generator: String,
    pub checks: Vec<CheckOutcome>,
    pub artifacts: Vec<PathBuf>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// The report with wall times zeroed, for reproducibility comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time_ms = 0.0;
        }
        r
    }
}

/// Identity and anchor of every named check.
pub struct CheckInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub identity: &'static str,
}

pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        name: "lie_algebra",
        anchor: "Lie algebra axioms of the structure constants",
        identity: "c_ijk = -c_jik and the Jacobi identity of [.,.] on basis triples",
    },
    CheckInfo {
        name: "cocycle",
        anchor: "2-cocycle condition on the constant part",
        identity: "Λ([X,Y],Z) + Λ([Y,Z],X) + Λ([Z,X],Y) = 0 and Λ antisymmetric",
    },
    CheckInfo {
        name: "antisymmetry",
        anchor: "skew-symmetry of the Poisson bracket",
        identity: "{F,G} + {G,F} = 0",
    },
    CheckInfo {
        name: "jacobi",
        anchor: "Jacobiator of the Poisson bracket",
        identity: "{F,{G,H}} + {G,{H,F}} + {H,{F,G}} = 0",
    },
    CheckInfo {
        name: "leibniz",
        anchor: "Leibniz rule of the Poisson bracket",
        identity: "{F,GH} = {F,G}H + G{F,H}",
    },
    CheckInfo {
        name: "hamiltonian_field",
        anchor: "Hamiltonian vector field of a polynomial",
        identity: "{F,H} = dF(X_H), X_H = Λ♯(dH) + coadjoint term",
    },
    CheckInfo {
        name: "field_bracket",
        anchor: "Hamiltonian fields form an anti-homomorphism",
        identity: "[X_F, X_G] = X_{{G,F}}",
    },
    CheckInfo {
        name: "field_product",
        anchor: "Hamiltonian field of a product",
        identity: "X_{FG} = F X_G + G X_F",
    },
    CheckInfo {
        name: "bracket",
        anchor: "Poisson bracket of two polynomials",
        identity: "{F,G} = Σ ∂_iF ∂_jG (Λ_ij + Σ_k c_ijk x_k)",
    },
    CheckInfo {
        name: "casimir_drift",
        anchor: "conservation along Hamiltonian flow",
        identity: "max_t |C(x(t)) - C(x(0))| under RK4 on X_H",
    },
    CheckInfo {
        name: "holonomy_exp",
        anchor: "holonomy of constant loops",
        identity: "Hol_s(X) = exp(sX) for constant X",
    },
    CheckInfo {
        name: "holeq",
        anchor: "holonomy under the gauge action",
        identity: "Hol_s(Ad_g ξ - g'g⁻¹) = g(0) Hol_s(ξ) g(s)⁻¹",
    },
    CheckInfo {
        name: "fiber",
        anchor: "reconstruction of the gauge element from two holonomy paths",
        identity: "g = γ_η⁻¹ γ_ξ satisfies η = Ad_g ξ - g'g⁻¹ with g periodic",
    },
    CheckInfo {
        name: "lie_hom",
        anchor: "comomentum map is a Lie homomorphism",
        identity: "{φ(X), φ(Y)} = φ([X,Y]) + ω(X,Y)",
    },
    CheckInfo {
        name: "equivariance",
        anchor: "infinitesimal equivariance of the momentum map",
        identity: "T_mΦ X_{φ(X)}(m) = -Φ(m)∘ad_X + ω(·,X)",
    },
    CheckInfo {
        name: "lift",
        anchor: "central-extension obstruction to lifting an action",
        identity: "c(X,Y) = {F_X,F_Y} - F_[X,Y] is constant; a lift exists iff c is a coboundary",
    },
    CheckInfo {
        name: "omega_oracle",
        anchor: "symplectic form of the cotangent bundle",
        identity: "Ω((β1,Y1.g),(β2,Y2.g)) = β2(Y1) - β1(Y2) - α([Y1,Y2]) equals -dΘ by differences",
    },
    CheckInfo {
        name: "left_action_contraction",
        anchor: "momentum of the left action on the cotangent bundle",
        identity: "Ω((-α∘ad_X, X.g), (β, Y.g)) = β(X)",
    },
    CheckInfo {
        name: "vertical_contraction",
        anchor: "contraction with vertical fields",
        identity: "Ω((β, Y.g), (γ, 0)) = γ(Y)",
    },
    CheckInfo {
        name: "gen_jacobi",
        anchor: "Jacobi identity on cotangent generators",
        identity: "Jacobiator of {H_X, H_Y} = H_[X,Y] + b(X,Y), {F, H_X} = X_r F, {F, F'} = 0",
    },
    CheckInfo {
        name: "redcond",
        anchor: "reduction through the quotient map (α, g) ↦ α",
        identity: "∩ ker dH_X = ker Tq and {H_X, H_Y} is the pull-back of the bracket on g*",
    },
];

pub fn explain(name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name)
}

fn anchor(name: &str) -> String {
    explain(name).map_or_else(|| name.to_string(), |c| c.anchor.to_string())
}

/// A CSV or JSON artifact produced by a task, relative to the output dir.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Default)]
struct TaskOutput {
    checks: Vec<CheckOutcome>,
    artifacts: Vec<Artifact>,
}

/// Runs every task of `cfg`. Fails only on configuration problems; check
/// failures and task errors are recorded in the report.
pub fn run(cfg: &RunConfig, parallel: bool) -> std::result::Result<Report, ConfigError> {
    cfg.validate()?;
    let outputs: Vec<TaskOutput> = if parallel {
        cfg.tasks
            .par_iter()
            .enumerate()
            .map(|(i, t)| run_task(cfg, *t, i))
            .collect()
    } else {
        cfg.tasks
            .iter()
            .enumerate()
            .map(|(i, t)| run_task(cfg, *t, i))
            .collect()
    };
    let mut report = Report {
        name: cfg.name.clone(),
        seed: cfg.seed,
        generator: GENERATOR.to_string(),
        checks: Vec::new(),
        artifacts: Vec::new(),
    };
    for out in outputs {
        report.checks.extend(out.checks);
        if let Some(dir) = &cfg.output.dir {
            for a in out.artifacts {
                let path = dir.join(&a.file_name);
                write_atomic(&path, a.contents.as_bytes())
                    .map_err(|e| ConfigError::new("output.dir", e))?;
                report.artifacts.push(path);
            }
        }
    }
    Ok(report)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn task_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_task(cfg: &RunConfig, task: TaskKind, index: usize) -> TaskOutput {
    let mut rng = task_rng(cfg.seed, index);
    let started = Instant::now();
    let result = match task {
        TaskKind::Verify => verify_task(cfg, &mut rng),
        TaskKind::Bracket => bracket_task(cfg),
        TaskKind::Flow => flow_task(cfg),
        TaskKind::Holonomy => holonomy_task(cfg, &mut rng),
        TaskKind::Momentum => momentum_task(cfg, &mut rng),
        TaskKind::Cotangent => cotangent_task(cfg, &mut rng),
    };
    match result {
        Ok(out) => out,
        Err(e) => TaskOutput {
            checks: vec![CheckOutcome {
                task: task.name().to_string(),
                name: task.name().to_string(),
                anchor: "task error".to_string(),
                status: Status::Error,
                max_residual: f64::NAN,
                exact_residual: None,
                probes: 0,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
                detail: Some(e.to_string()),
            }],
            artifacts: Vec::new(),
        },
    }
}

struct Timer<'a> {
    task: &'a str,
    start: Instant,
}

impl<'a> Timer<'a> {
    fn start(task: &'a str) -> Self {
        Timer {
            task,
            start: Instant::now(),
        }
    }

    fn exact(&mut self, name: &str, residual: &Rational, probes: usize) -> CheckOutcome {
        let status = if residual == &rational::zero() {
            Status::Pass
        } else {
            Status::Fail
        };
        self.finish(name, status, rational::to_f64(residual), Some(residual.to_string()), probes, None)
    }

    fn numeric(&mut self, name: &str, residual: f64, tol: f64, probes: usize) -> CheckOutcome {
        // NaN residuals fail.
        let status = if residual < tol { Status::Pass } else { Status::Fail };
        self.finish(name, status, residual, None, probes, Some(format!("tolerance {tol:e}")))
    }

    fn finish(
        &mut self,
        name: &str,
        status: Status,
        max_residual: f64,
        exact_residual: Option<String>,
        probes: usize,
        detail: Option<String>,
    ) -> CheckOutcome {
        let now = Instant::now();
        let wall = (now - self.start).as_secs_f64() * 1e3;
        self.start = now;
        CheckOutcome {
            task: self.task.to_string(),
            name: name.to_string(),
            anchor: anchor(name),
            status,
            max_residual,
            exact_residual,
            probes,
            wall_time_ms: wall,
            detail,
        }
    }
}

fn max_coefficient(p: &Polynomial) -> Rational {
    rational::max_abs(p.terms().map(|(_, c)| c))
}

fn config_err(e: ConfigError) -> Error {
    Error::InvalidArgument(e.to_string())
}

/// Exact axiom checks on the configured structure over seeded polynomials.
fn verify_task(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<TaskOutput> {
    let resolved = cfg.resolve_structure().map_err(config_err)?;
    let p = &resolved.structure;
    let n = p.dim();
    let mut t = Timer::start("verify");
    let mut checks = Vec::new();

    if let Some(g) = p.bracket0() {
        let report = g.validate_lie();
        let worst = rational::max_abs(
            report.antisymmetry.iter().chain(&report.jacobi).map(|r| &r.value),
        );
        checks.push(t.exact("lie_algebra", &worst, n * n * n));
    }
    if let Some(lambda) = p.lambda() {
        let base = p.bracket0().cloned().unwrap_or_else(|| LieAlgebra::abelian(n));
        let r = algebra::check_cocycle(&base, lambda)?;
        checks.push(t.exact("cocycle", &r, n * n * n));
    }

    let polys: Vec<Polynomial> = (0..cfg.probes.max(1) * 3)
        .map(|_| random_polynomial(n, 3, 4, rng))
        .collect();
    let triples: Vec<[&Polynomial; 3]> = polys.chunks(3).map(|c| [&c[0], &c[1], &c[2]]).collect();

    let mut worst = rational::zero();
    for [f, g, _] in &triples {
        let s = &poisson::pbracket(f, g, p)? + &poisson::pbracket(g, f, p)?;
        worst = worst.max(max_coefficient(&s));
    }
    checks.push(t.exact("antisymmetry", &worst, triples.len()));

    // Coordinate triples catch constant Jacobiators directly.
    let vars: Vec<Polynomial> = (0..n).map(|i| p.var(i)).collect();
    let mut worst = rational::zero();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let jac = poisson::jacobiator(&vars[i], &vars[j], &vars[k], p)?;
                worst = worst.max(max_coefficient(&jac));
                count += 1;
            }
        }
    }
    for [f, g, h] in &triples {
        let jac = poisson::jacobiator(f, g, h, p)?;
        worst = worst.max(max_coefficient(&jac));
        count += 1;
    }
    checks.push(t.exact("jacobi", &worst, count));

    let mut worst = rational::zero();
    for [f, g, h] in &triples {
        worst = worst.max(max_coefficient(&poisson::leibniz_check(f, g, h, p)?));
    }
    checks.push(t.exact("leibniz", &worst, triples.len()));

    let mut worst = rational::zero();
    for [f, h, _] in &triples {
        let field = poisson::hamiltonian_field(h, p)?;
        let r = &poisson::pbracket(f, h, p)? - &field.apply(f)?;
        worst = worst.max(max_coefficient(&r));
    }
    checks.push(t.exact("hamiltonian_field", &worst, triples.len()));

    let mut worst = rational::zero();
    for [f, g, _] in &triples {
        let xf = poisson::hamiltonian_field(f, p)?;
        let xg = poisson::hamiltonian_field(g, p)?;
        let lhs = xf.lie_bracket(&xg)?;
        let rhs = poisson::hamiltonian_field(&poisson::pbracket(g, f, p)?, p)?;
        for (a, b) in lhs.components.iter().zip(&rhs.components) {
            worst = worst.max(max_coefficient(&(a - b)));
        }
    }
    checks.push(t.exact("field_bracket", &worst, triples.len()));

    let mut worst = rational::zero();
    for [f, g, _] in &triples {
        let lhs = poisson::hamiltonian_field(&(*f * *g), p)?;
        let rhs = poisson::hamiltonian_field(g, p)?
            .scale_by(f)
            .add(&poisson::hamiltonian_field(f, p)?.scale_by(g))?;
        for (a, b) in lhs.components.iter().zip(&rhs.components) {
            worst = worst.max(max_coefficient(&(a - b)));
        }
    }
    checks.push(t.exact("field_product", &worst, triples.len()));

    Ok(TaskOutput {
        checks,
        artifacts: Vec::new(),
    })
}

pub fn bracket_of(resolved: &ResolvedStructure, f: &str, g: &str) -> std::result::Result<Polynomial, ConfigError> {
    let f = resolved.parse_poly("F", f)?;
    let g = resolved.parse_poly("G", g)?;
    poisson::pbracket(&f, &g, &resolved.structure).map_err(|e| ConfigError::new("structure", e))
}

fn bracket_task(cfg: &RunConfig) -> Result<TaskOutput> {
    let spec = cfg.bracket.as_ref().expect("validated");
    let resolved = cfg.resolve_structure().map_err(config_err)?;
    let mut t = Timer::start("bracket");
    let b = bracket_of(&resolved, &spec.f, &spec.g).map_err(config_err)?;
    let text = b.display_with(Some(&resolved.variables));
    let out = t.finish("bracket", Status::Pass, 0.0, None, 1, Some(text.clone()));
    Ok(TaskOutput {
        checks: vec![out],
        artifacts: vec![Artifact {
            file_name: "bracket.json".to_string(),
            contents: serde_json::to_string_pretty(&serde_json::json!({
                "F": spec.f,
                "G": spec.g,
                "bracket": text,
                "terms": b.to_wire(),
            }))
            .expect("plain data"),
        }],
    })
}

/// Runs the configured flow; returns the trajectory and per-monitor drift.
pub fn flow_of(cfg: &RunConfig) -> Result<(poisson::Trajectory, Vec<(String, f64)>)> {
    let spec = cfg
        .flow
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("no [flow] section".into()))?;
    let resolved = cfg.resolve_structure().map_err(config_err)?;
    let h = resolved
        .parse_poly("flow.hamiltonian", &spec.hamiltonian)
        .map_err(config_err)?;
    let monitors = spec
        .monitors
        .iter()
        .map(|(name, text)| {
            let key = format!("flow.monitors.{name}");
            Ok((name.clone(), resolved.parse_poly(&key, text).map_err(config_err)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let traj = poisson::rk4_flow(&h, &resolved.structure, &spec.initial, spec.step, spec.steps, &monitors)?;
    let drifts = monitors
        .iter()
        .enumerate()
        .map(|(k, (name, _))| (name.clone(), traj.drift(k)))
        .collect();
    Ok((traj, drifts))
}

fn flow_task(cfg: &RunConfig) -> Result<TaskOutput> {
    let steps = cfg.flow.as_ref().map_or(0, |f| f.steps);
    let mut t = Timer::start("flow");
    let (traj, drifts) = flow_of(cfg)?;
    let mut checks = Vec::new();
    for (name, drift) in drifts {
        let mut c = t.numeric("casimir_drift", drift, cfg.tolerances.casimir, steps);
        c.detail = Some(format!("monitor {name}, tolerance {:e}", cfg.tolerances.casimir));
        checks.push(c);
    }
    Ok(TaskOutput {
        checks,
        artifacts: vec![Artifact {
            file_name: "flow.csv".to_string(),
            contents: traj.to_csv(),
        }],
    })
}

/// Holonomy path of the configured potential, as CSV.
pub fn holonomy_csv(cfg: &RunConfig) -> Result<String> {
    let spec = cfg
        .holonomy
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("no [holonomy] section".into()))?;
    let rep = builtin_group("holonomy.group", &spec.group).map_err(config_err)?;
    let k = Arc::new(rep.algebra().clone());
    let xi = match &spec.potential {
        Some(w) => TrigLoop::from_wire(w, k)?,
        None => TrigLoop::zero(k),
    };
    let path = loops::holonomy_path(&xi, &rep, spec.time, spec.step)?;
    Ok(loops::path_csv(&path, spec.time))
}

fn holonomy_task(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<TaskOutput> {
    let spec = cfg.holonomy.as_ref().expect("validated");
    let rep = Arc::new(builtin_group("holonomy.group", &spec.group).map_err(config_err)?);
    let k = Arc::new(rep.algebra().clone());
    let (s, h) = (spec.time, spec.step);
    let mut t = Timer::start("holonomy");
    let mut checks = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..cfg.probes {
        let x: Vec<f64> = TrigLoop::random(k.clone(), 0, spec.scale, rng).eval(0.0);
        let hol = loops::holonomy(&TrigLoop::constant(k.clone(), &x)?, &rep, s, h)?;
        let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
        worst = worst.max((hol - rep.exp(&scaled)?).norm());
    }
    checks.push(t.numeric("holonomy_exp", worst, cfg.tolerances.exp, cfg.probes));

    if spec.pairs > 0 {
        let mut worst: f64 = 0.0;
        for _ in 0..spec.pairs {
            let xi = TrigLoop::random(k.clone(), spec.degree, spec.scale, rng);
            let g = GaugeLoop::based(rep.clone(), &TrigLoop::random(k.clone(), spec.degree, spec.scale, rng))?;
            worst = worst.max(loops::holonomy_equivariance_residual(&xi, &g, s, h)?);
        }
        checks.push(t.numeric("holeq", worst, cfg.tolerances.holonomy, spec.pairs));
    }

    if spec.fiber_pairs > 0 {
        let nodes = (2.0 / h).round() as usize + 1;
        let mut worst: f64 = 0.0;
        for _ in 0..spec.fiber_pairs {
            let xi = TrigLoop::random(k.clone(), spec.degree, spec.scale, rng);
            let g0 = GaugeLoop::based(rep.clone(), &TrigLoop::random(k.clone(), spec.degree, spec.scale, rng))?;
            let eta = loops::gauge_transform(&xi, &g0, nodes)?;
            let r = loops::fiber_recover(&xi, &eta, &rep, h)?;
            worst = worst
                .max(r.distance_to(&g0)?)
                .max(r.periodicity_residual)
                .max(r.action_residual);
        }
        checks.push(t.numeric("fiber", worst, cfg.tolerances.fiber, spec.fiber_pairs));
    }

    let mut artifacts = Vec::new();
    if spec.potential.is_some() {
        artifacts.push(Artifact {
            file_name: "holonomy.csv".to_string(),
            contents: holonomy_csv(cfg)?,
        });
    }
    Ok(TaskOutput { checks, artifacts })
}

fn random_rational_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    use rand::Rng;
    (0..n)
        .map(|_| rational::frac(rng.random_range(-9..=9), rng.random_range(1..=5)))
        .collect()
}

fn momentum_task(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<TaskOutput> {
    let resolved = cfg.resolve_momentum().map_err(config_err)?;
    let source = &resolved.source.structure;
    let g = &resolved.algebra;
    let cm = ComomentumMap::new(resolved.phi.clone(), resolved.omega.clone())?;
    let mm = MomentumMap::from_comomentum(&cm);
    let mut t = Timer::start("momentum");
    let mut checks = Vec::new();

    let hom = momentum::check_lie_hom(&cm, source, g)?;
    let pairs = g.dim() * g.dim().saturating_sub(1) / 2;
    checks.push(t.exact("lie_hom", &hom.max_residual(), pairs));

    let probes: Vec<_> = (0..cfg.probes)
        .map(|_| random_rational_point(source.dim(), rng))
        .collect();
    let eq = momentum::check_equivariance(&mm, &cm, source, g, &probes)?;
    checks.push(t.exact("equivariance", &eq.max_residual(), probes.len()));

    if cm.omega().is_none() {
        match momentum::lift_obstruction(&resolved.phi, source, g) {
            Ok(ob) => {
                let residual = rational::max_abs(ob.cocycle.matrix().iter().flatten());
                let status = if ob.lift_exists() { Status::Pass } else { Status::Fail };
                let detail = if ob.lift_exists() {
                    "obstruction is a coboundary; a lift exists"
                } else {
                    "obstruction class is nonzero; no lift"
                };
                checks.push(t.finish(
                    "lift",
                    status,
                    rational::to_f64(&residual),
                    Some(residual.to_string()),
                    pairs,
                    Some(detail.to_string()),
                ));
            }
            Err(e) => checks.push(t.finish("lift", Status::Fail, f64::NAN, None, pairs, Some(e.to_string()))),
        }
    }
    Ok(TaskOutput {
        checks,
        artifacts: Vec::new(),
    })
}

fn cotangent_task(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<TaskOutput> {
    use rand::Rng;
    let spec = cfg.cotangent.as_ref().expect("validated");
    let rep = Arc::new(builtin_group("cotangent.group", &spec.group).map_err(config_err)?);
    let d = rep.algebra().dim();
    let magnetic = spec
        .magnetic
        .as_ref()
        .map(|b| cocycle_from_pairs("cotangent.magnetic", d, b))
        .transpose()
        .map_err(config_err)?;
    let bundle = CotangentBundle::new(rep.clone());
    let mut t = Timer::start("cotangent");
    let mut checks = Vec::new();

    let mut oracle_gap: f64 = 0.0;
    let mut left_closed: f64 = 0.0;
    let mut left_oracle: f64 = 0.0;
    let mut vert_closed: f64 = 0.0;
    let mut vert_oracle: f64 = 0.0;
    for _ in 0..cfg.probes {
        let p = bundle.random_point(1.0, rng);
        let v1 = bundle.random_tangent(1.0, rng);
        let v2 = bundle.random_tangent(1.0, rng);
        oracle_gap = oracle_gap.max((bundle.omega(&p, &v1, &v2)? - bundle.omega_oracle(&p, &v1, &v2)?).abs());

        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let field = bundle.left_action_field(&p, &x)?;
        let expected: f64 = v1.beta.iter().zip(&x).map(|(a, b)| a * b).sum();
        left_closed = left_closed.max((bundle.omega(&p, &field, &v1)? - expected).abs());
        left_oracle = left_oracle.max((bundle.omega_oracle(&p, &field, &v1)? - expected).abs());

        let gamma: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let z = CotangentTangent::vertical(gamma.clone());
        let expected: f64 = gamma.iter().zip(&v2.y).map(|(a, b)| a * b).sum();
        vert_closed = vert_closed.max((bundle.omega(&p, &v2, &z)? - expected).abs());
        vert_oracle = vert_oracle.max((bundle.omega_oracle(&p, &v2, &z)? - expected).abs());
    }
    let tol = cfg.tolerances.oracle;
    checks.push(t.numeric("omega_oracle", oracle_gap, tol, cfg.probes));
    for (name, closed, oracle) in [
        ("left_action_contraction", left_closed, left_oracle),
        ("vertical_contraction", vert_closed, vert_oracle),
    ] {
        let pass = closed < CLOSED_FORM_TOL && oracle < tol;
        checks.push(t.finish(
            name,
            if pass { Status::Pass } else { Status::Fail },
            closed.max(oracle),
            None,
            cfg.probes,
            Some(format!("closed form {closed:e}, oracle {oracle:e}")),
        ));
    }

    let gens = GeneratorAlgebra::new(rep.clone(), magnetic)?;
    let m = rep.matrix_dim();
    let mut fns: Vec<Polynomial> = (0..d).map(|i| gens.momentum(&unit(d, i))).collect::<Result<_>>()?;
    for (r, c) in [(0, 0), (0, m - 1)] {
        let mut a = crate::linalg::zeros(m, m);
        a[r][c] = rational::one();
        fns.push(gens.matrix_coefficient(&a)?);
    }
    let mut worst = rational::zero();
    let mut count = 0;
    for i in 0..fns.len() {
        for j in i + 1..fns.len() {
            for k in j + 1..fns.len() {
                worst = worst.max(max_coefficient(&gens.jacobiator(&fns[i], &fns[j], &fns[k])?));
                count += 1;
            }
        }
    }
    checks.push(t.exact("gen_jacobi", &worst, count));

    let samples: Vec<_> = (0..spec.samples).map(|_| bundle.random_point(1.0, rng)).collect();
    let basis: Vec<_> = (0..d).map(|i| unit(d, i)).collect();
    let red = cotangent::reduction_check(&gens, &basis, &samples)?;
    let failures = red.kernel_failures.len() + red.bracket_mismatches.len();
    checks.push(t.finish(
        "redcond",
        if red.passes() { Status::Pass } else { Status::Fail },
        failures as f64,
        None,
        red.samples,
        Some(format!(
            "{} kernel failures, {} bracket mismatches",
            red.kernel_failures.len(),
            red.bracket_mismatches.len()
        )),
    ));
    Ok(TaskOutput {
        checks,
        artifacts: Vec::new(),
    })
}

/// Rows of comma-separated 17-digit values.
pub fn format_matrix(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| poisson::fmt17(m[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
