//! Momentum maps as Poisson morphisms into `g*`.
//!
//! A comomentum map `φ` is stored on basis elements as polynomials on the
//! source space and extended linearly. Its momentum map `Φ` has components
//! `Φ_k = φ(e_k)`. All checks are exact: residuals are polynomials or
//! rational values at rational probes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, CheckReportWire, LieAlgebra, Residual, TwoCocycle};
use crate::error::{check_dim, Error, Result};
use crate::loops::{self, TrigLoop};
use crate::poisson::{self, PoissonStructure};
use crate::poly::{PolyWire, Polynomial};
use crate::rational::{self, Rational};
use crate::rep::Representation;

#[derive(Debug, Clone, PartialEq)]
pub struct ComomentumMap {
    phi: Vec<Polynomial>,
    omega: Option<TwoCocycle>,
}

impl ComomentumMap {
    /// `phi[k]` is the image of the `k`-th basis element. `omega` selects the
    /// affine target `{φ(X), φ(Y)} = φ([X, Y]) + ω(X, Y)`.
    pub fn new(phi: Vec<Polynomial>, omega: Option<TwoCocycle>) -> Result<Self> {
        let n = phi.first().map_or(0, Polynomial::nvars);
        for p in &phi {
            check_dim(n, p.nvars())?;
        }
        if let Some(w) = &omega {
            check_dim(phi.len(), w.dim())?;
        }
        Ok(ComomentumMap { phi, omega })
    }

    /// Identity of `g*`: `φ(X) = H_X`, the linear function `α ↦ α(X)`.
    pub fn coadjoint(dim: usize) -> Self {
        let phi = (0..dim).map(|k| Polynomial::var(dim, k)).collect();
        ComomentumMap { phi, omega: None }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn source_dim(&self) -> usize {
        self.phi.first().map_or(0, Polynomial::nvars)
    }

    pub fn omega(&self) -> Option<&TwoCocycle> {
        self.omega.as_ref()
    }

    pub fn basis_images(&self) -> &[Polynomial] {
        &self.phi
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Polynomial> {
        check_dim(self.dim(), x.len())?;
        let mut out = Polynomial::zero(self.source_dim());
        for (p, c) in self.phi.iter().zip(x) {
            out.add_scaled(p, c);
        }
        Ok(out)
    }

    fn omega_entry(&self, i: usize, j: usize) -> Rational {
        self.omega
            .as_ref()
            .map_or_else(rational::zero, |w| w.entry(i, j).clone())
    }

    pub fn to_wire(&self, g: &LieAlgebra) -> ComomentumWire {
        ComomentumWire {
            phi: g
                .basis()
                .iter()
                .zip(&self.phi)
                .map(|(name, p)| (name.clone(), p.to_wire()))
                .collect(),
        }
    }

    /// Images are matched to basis elements by name; missing names map to 0.
    pub fn from_wire(
        wire: &ComomentumWire,
        g: &LieAlgebra,
        source_dim: usize,
        omega: Option<TwoCocycle>,
    ) -> Result<Self> {
        let mut phi = vec![Polynomial::zero(source_dim); g.dim()];
        for (name, poly) in &wire.phi {
            let k = g
                .basis()
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))?;
            phi[k] = Polynomial::from_wire(source_dim, poly)?;
        }
        Self::new(phi, omega)
    }
}

/// Serialized comomentum map: basis name to polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComomentumWire {
    pub phi: Vec<(String, PolyWire)>,
}

/// `Φ: M → g*`, one polynomial per dual coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumMap {
    components: Vec<Polynomial>,
}

impl MomentumMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.first().map_or(0, Polynomial::nvars);
        for p in &components {
            check_dim(n, p.nvars())?;
        }
        Ok(MomentumMap { components })
    }

    /// `Φ(m)(e_k) = φ(e_k)(m)`.
    pub fn from_comomentum(cm: &ComomentumMap) -> Self {
        MomentumMap {
            components: cm.phi.clone(),
        }
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, m: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|p| p.eval(m)).collect()
    }

    /// `Φ*F = F ∘ Φ`.
    pub fn pullback(&self, f: &Polynomial) -> Result<Polynomial> {
        f.compose(&self.components)
    }

    /// Probes where `Φ(m)(e_k) ≠ φ(e_k)(m)`.
    pub fn consistency_failures(
        &self,
        cm: &ComomentumMap,
        probes: &[Vec<Rational>],
    ) -> Result<Vec<usize>> {
        check_dim(cm.dim(), self.dim())?;
        let mut bad = Vec::new();
        for (s, m) in probes.iter().enumerate() {
            let lhs = self.eval(m)?;
            for (k, p) in cm.phi.iter().enumerate() {
                if lhs[k] != p.eval(m)? {
                    bad.push(s);
                    break;
                }
            }
        }
        Ok(bad)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomReport {
    /// Nonzero residual polynomials `φ([e_i,e_j]) + ω(e_i,e_j) − {φ(e_i),φ(e_j)}`.
    pub failures: Vec<(usize, usize, Polynomial)>,
}

impl HomReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    /// Largest absolute coefficient over all residual polynomials.
    pub fn max_residual(&self) -> Rational {
        let mut m = rational::zero();
        for (_, _, p) in &self.failures {
            for (_, c) in p.terms() {
                m = m.max(rational::abs(c));
            }
        }
        m
    }

    pub fn to_wire(&self) -> CheckReportWire {
        let residuals: Vec<Residual> = self
            .failures
            .iter()
            .map(|(i, j, p)| {
                let m = p.terms().map(|(_, c)| rational::abs(c)).max().unwrap_or_else(rational::zero);
                Residual::new(vec![*i, *j], m)
            })
            .collect();
        CheckReportWire::from_residuals("lie_homomorphism", &residuals)
    }
}

pub fn check_lie_hom(
    cm: &ComomentumMap,
    source: &PoissonStructure,
    g: &LieAlgebra,
) -> Result<HomReport> {
    check_dim(g.dim(), cm.dim())?;
    check_dim(source.dim(), cm.source_dim())?;
    let mut failures = Vec::new();
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let mut r = cm.apply(&g.bracket_basis(i, j))?;
            r.add_term(
                crate::poly::Monomial::one(cm.source_dim()),
                cm.omega_entry(i, j),
            );
            let b = poisson::pbracket(&cm.phi[i], &cm.phi[j], source)?;
            r.add_scaled(&b, &-rational::one());
            if !r.is_zero() {
                failures.push((i, j, r));
            }
        }
    }
    Ok(HomReport { failures })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivarianceReport {
    pub probes: usize,
    /// `(probe, basis index, largest |lhs − rhs| entry)` for each mismatch.
    pub failures: Vec<(usize, usize, Rational)>,
}

impl EquivarianceReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn max_residual(&self) -> Rational {
        rational::max_abs(self.failures.iter().map(|(_, _, r)| r))
    }
}

/// `T_mΦ · X_{φ(X)}(m) = −Φ(m)∘ad_X`, plus `ω(·, X)` for an affine target.
///
/// Componentwise, `X_{φ(X)}(Φ_i) = {φ(e_i), φ(X)}`, and a homomorphism into
/// the affine bracket makes this `Φ(m)([e_i, X]) + ω(e_i, X)`.
pub fn check_equivariance(
    mm: &MomentumMap,
    cm: &ComomentumMap,
    source: &PoissonStructure,
    g: &LieAlgebra,
    probes: &[Vec<Rational>],
) -> Result<EquivarianceReport> {
    check_dim(g.dim(), mm.dim())?;
    check_dim(g.dim(), cm.dim())?;
    let n = g.dim();
    let fields = cm
        .phi
        .iter()
        .map(|p| poisson::hamiltonian_field(p, source))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for (s, m) in probes.iter().enumerate() {
        check_dim(source.dim(), m.len())?;
        let phi_m = mm.eval(m)?;
        let jac: Vec<Vec<Rational>> = mm
            .components
            .iter()
            .map(|c| poisson::differential(c, m))
            .collect::<Result<_>>()?;
        for (a, field) in fields.iter().enumerate() {
            let v = field.eval(m)?;
            let mut worst = rational::zero();
            for i in 0..n {
                let lhs = crate::linalg::dot(&jac[i], &v);
                let rhs = crate::linalg::dot(&phi_m, &g.bracket_basis(i, a)) + cm.omega_entry(i, a);
                worst = worst.max(rational::abs(&(lhs - rhs)));
            }
            if worst != rational::zero() {
                failures.push((s, a, worst));
            }
        }
    }
    Ok(EquivarianceReport {
        probes: probes.len(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftObstruction {
    pub cocycle: TwoCocycle,
    /// `f` with `c = δf` when the obstruction is a coboundary; then
    /// `F_X + f(X)` is a homomorphism.
    pub coboundary: Option<Vec<Rational>>,
}

impl LiftObstruction {
    pub fn lift_exists(&self) -> bool {
        self.coboundary.is_some()
    }
}

/// `c(e_i, e_j) = {F_i, F_j} − F_{[e_i, e_j]}`, required to be constant.
pub fn lift_obstruction(
    potentials: &[Polynomial],
    source: &PoissonStructure,
    g: &LieAlgebra,
) -> Result<LiftObstruction> {
    check_dim(g.dim(), potentials.len())?;
    let cm = ComomentumMap::new(potentials.to_vec(), None)?;
    check_dim(source.dim(), cm.source_dim())?;
    let n = g.dim();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut defect = poisson::pbracket(&potentials[i], &potentials[j], source)?;
            defect.add_scaled(&cm.apply(&g.bracket_basis(i, j))?, &-rational::one());
            if !defect.is_constant() {
                return Err(Error::NonConstantDefect { i, j });
            }
            let c = defect.constant_term();
            if c != rational::zero() {
                pairs.push((i, j, c));
            }
        }
    }
    let cocycle = TwoCocycle::from_pairs(n, &pairs)?;
    let coboundary = algebra::is_coboundary(g, &cocycle)?;
    Ok(LiftObstruction {
        cocycle,
        coboundary,
    })
}

/// `Φ(m) = Σ_j P_j(m) ξ_j`: polynomial weights on fixed loops in `L(k)`.
#[derive(Debug, Clone)]
pub struct LoopMomentumMap {
    weights: Vec<Polynomial>,
    loops: Vec<TrigLoop>,
}

impl LoopMomentumMap {
    pub fn new(weights: Vec<Polynomial>, loops: Vec<TrigLoop>) -> Result<Self> {
        check_dim(weights.len(), loops.len())?;
        let n = weights.first().map_or(0, Polynomial::nvars);
        for w in &weights {
            check_dim(n, w.nvars())?;
        }
        if let Some(first) = loops.first() {
            if loops.iter().any(|l| l.algebra() != first.algebra()) {
                return Err(Error::MismatchedAlgebra);
            }
        }
        Ok(LoopMomentumMap { weights, loops })
    }

    /// The map constant at `ξ`.
    pub fn constant(source_dim: usize, xi: TrigLoop) -> Self {
        LoopMomentumMap {
            weights: vec![Polynomial::one(source_dim)],
            loops: vec![xi],
        }
    }

    pub fn source_dim(&self) -> usize {
        self.weights.first().map_or(0, Polynomial::nvars)
    }

    pub fn eval(&self, m: &[Rational]) -> Result<TrigLoop> {
        check_dim(self.source_dim(), m.len())?;
        let mut iter = self.weights.iter().zip(&self.loops);
        let Some((w0, l0)) = iter.next() else {
            return Err(Error::InvalidArgument("empty loop momentum map".into()));
        };
        let mut out = l0.scale(rational::to_f64(&w0.eval(m)?));
        for (w, l) in iter {
            out = out.add(&l.scale(rational::to_f64(&w.eval(m)?)))?;
        }
        Ok(out)
    }
}

/// `μ = Hol_s ∘ Φ` at each probe.
pub fn compose_group_momentum(
    mm: &LoopMomentumMap,
    rep: &Representation,
    s: f64,
    h: f64,
    probes: &[Vec<Rational>],
) -> Result<Vec<DMatrix<f64>>> {
    probes
        .iter()
        .map(|m| loops::holonomy(&mm.eval(m)?, rep, s, h))
        .collect()
}
