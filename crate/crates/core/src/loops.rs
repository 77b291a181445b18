//! Trigonometric loops `ξ(t) = a_0 + Σ_n a_n cos(2πnt) + b_n sin(2πnt)` in a
//! finite-dimensional Lie algebra, the loop-group gauge action and holonomy.
//!
//! Fourier arithmetic (bracket, pairing, derivative) is closed-form on the
//! coefficients. Group-level work goes through a [`Representation`].

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebra;
use crate::error::{check_dim, Error, Result};
use crate::rep::Representation;

/// Endpoint mismatch tolerated for gauge loops.
pub const PERIODICITY_TOL: f64 = 1e-8;
/// Step of the 5-point central difference used for `g'`: truncation
/// `O(h^4)` and rounding `O(eps/h)` balance near 1e-4.
pub const DIFF_STEP: f64 = 1e-4;
/// Steps above this trigger a coarse-step warning.
pub const COARSE_STEP: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct TrigLoop {
    k: Arc<LieAlgebra>,
    /// `cos[0]` is the constant term `a_0`.
    cos: Vec<Vec<f64>>,
    /// `sin[0]` is always zero.
    sin: Vec<Vec<f64>>,
}

impl TrigLoop {
    pub fn zero(k: Arc<LieAlgebra>) -> Self {
        let d = k.dim();
        TrigLoop {
            k,
            cos: vec![vec![0.0; d]],
            sin: vec![vec![0.0; d]],
        }
    }

    pub fn constant(k: Arc<LieAlgebra>, x: &[f64]) -> Result<Self> {
        check_dim(k.dim(), x.len())?;
        let mut l = Self::zero(k);
        l.cos[0] = x.to_vec();
        Ok(l)
    }

    /// `x · cos(2πnt)`.
    pub fn cos_term(k: Arc<LieAlgebra>, n: usize, x: &[f64]) -> Result<Self> {
        let mut l = Self::zero(k);
        l.set_cos(n, x)?;
        Ok(l)
    }

    /// `x · sin(2πnt)`.
    pub fn sin_term(k: Arc<LieAlgebra>, n: usize, x: &[f64]) -> Result<Self> {
        let mut l = Self::zero(k);
        l.set_sin(n, x)?;
        Ok(l)
    }

    /// Coefficients uniform in `[-scale, scale]`.
    pub fn random(k: Arc<LieAlgebra>, degree: usize, scale: f64, rng: &mut impl Rng) -> Self {
        let d = k.dim();
        let mut draw = || (0..d).map(|_| rng.random_range(-scale..=scale)).collect::<Vec<_>>();
        let cos = (0..=degree).map(|_| draw()).collect();
        let mut sin: Vec<Vec<f64>> = (0..=degree).map(|_| draw()).collect();
        sin[0] = vec![0.0; d];
        TrigLoop { k, cos, sin }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn a(&self, n: usize) -> Option<&[f64]> {
        self.cos.get(n).map(Vec::as_slice)
    }

    pub fn b(&self, n: usize) -> Option<&[f64]> {
        self.sin.get(n).map(Vec::as_slice)
    }

    fn grow(&mut self, degree: usize) {
        let d = self.dim();
        while self.cos.len() <= degree {
            self.cos.push(vec![0.0; d]);
            self.sin.push(vec![0.0; d]);
        }
    }

    pub fn set_cos(&mut self, n: usize, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        self.grow(n);
        self.cos[n] = x.to_vec();
        Ok(())
    }

    pub fn set_sin(&mut self, n: usize, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        if n == 0 {
            return Err(Error::InvalidArgument("sin(0) term is identically zero".into()));
        }
        self.grow(n);
        self.sin[n] = x.to_vec();
        Ok(())
    }

    /// Same loop shifted by a constant so that `ξ(0) = 0`.
    pub fn based(&self) -> Self {
        let mut out = self.clone();
        let at0 = self.eval(0.0);
        for (c, v) in out.cos[0].iter_mut().zip(at0) {
            *c -= v;
        }
        out
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = self.cos[0].clone();
        for n in 1..self.cos.len() {
            let (s, c) = (2.0 * PI * n as f64 * t).sin_cos();
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.cos[n][i] * c + self.sin[n][i] * s;
            }
        }
        out
    }

    fn same_algebra(&self, other: &TrigLoop) -> Result<()> {
        if Arc::ptr_eq(&self.k, &other.k) || self.k == other.k {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebra)
        }
    }

    pub fn add(&self, other: &TrigLoop) -> Result<TrigLoop> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &TrigLoop) -> Result<TrigLoop> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &TrigLoop, s: f64) -> Result<TrigLoop> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        out.grow(other.degree());
        for n in 0..=other.degree() {
            for i in 0..self.dim() {
                out.cos[n][i] += s * other.cos[n][i];
                out.sin[n][i] += s * other.sin[n][i];
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> TrigLoop {
        let mut out = self.clone();
        for v in out.cos.iter_mut().chain(out.sin.iter_mut()).flatten() {
            *v *= s;
        }
        out
    }

    /// Largest absolute Fourier coefficient.
    pub fn sup_norm(&self) -> f64 {
        self.cos
            .iter()
            .chain(&self.sin)
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise bracket via product-to-sum identities; degrees add.
    pub fn bracket(&self, other: &TrigLoop) -> Result<TrigLoop> {
        self.same_algebra(other)?;
        let k = &self.k;
        let mut out = TrigLoop::zero(self.k.clone());
        out.grow(self.degree() + other.degree());
        let mut acc = |cos: bool, n: i64, w: f64, v: &[f64]| {
            if w == 0.0 {
                return;
            }
            let (idx, sign) = if n < 0 { ((-n) as usize, -1.0) } else { (n as usize, 1.0) };
            // cos is even; sin is odd and vanishes at 0
            let (dst, w) = if cos {
                (&mut out.cos[idx], w)
            } else if idx == 0 {
                return;
            } else {
                (&mut out.sin[idx], w * sign)
            };
            for (d, x) in dst.iter_mut().zip(v) {
                *d += w * x;
            }
        };
        for m in 0..=self.degree() {
            for n in 0..=other.degree() {
                let (mi, ni) = (m as i64, n as i64);
                let cc = k.bracket_f64(&self.cos[m], &other.cos[n]);
                let ss = k.bracket_f64(&self.sin[m], &other.sin[n]);
                let sc = k.bracket_f64(&self.sin[m], &other.cos[n]);
                let cs = k.bracket_f64(&self.cos[m], &other.sin[n]);
                // cos·cos = ½[cos(m−n) + cos(m+n)]
                acc(true, mi - ni, 0.5, &cc);
                acc(true, mi + ni, 0.5, &cc);
                // sin·sin = ½[cos(m−n) − cos(m+n)]
                acc(true, mi - ni, 0.5, &ss);
                acc(true, mi + ni, -0.5, &ss);
                // sin·cos = ½[sin(m+n) + sin(m−n)]
                acc(false, mi + ni, 0.5, &sc);
                acc(false, mi - ni, 0.5, &sc);
                // cos·sin = ½[sin(m+n) − sin(m−n)]
                acc(false, mi + ni, 0.5, &cs);
                acc(false, mi - ni, -0.5, &cs);
            }
        }
        Ok(out)
    }

    /// `Dξ = ξ'`: `cos(2πnt) ↦ −2πn sin(2πnt)`, `sin ↦ 2πn cos`.
    pub fn derivative(&self) -> TrigLoop {
        let d = self.dim();
        let mut out = TrigLoop::zero(self.k.clone());
        out.grow(self.degree());
        for n in 1..=self.degree() {
            let w = 2.0 * PI * n as f64;
            for i in 0..d {
                out.cos[n][i] = w * self.sin[n][i];
                out.sin[n][i] = -w * self.cos[n][i];
            }
        }
        out
    }
}

fn pair(form: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    form.iter()
        .zip(x)
        .map(|(row, xi)| xi * row.iter().zip(y).map(|(f, yj)| f * yj).sum::<f64>())
        .sum()
}

/// `∫₀¹ ⟨ξ(t), η(t)⟩ dt = ⟨a_0, a_0'⟩ + ½ Σ_n (⟨a_n, a_n'⟩ + ⟨b_n, b_n'⟩)`.
pub fn loop_kappa(xi: &TrigLoop, eta: &TrigLoop, form: &[Vec<f64>]) -> Result<f64> {
    xi.same_algebra(eta)?;
    check_dim(xi.dim(), form.len())?;
    for row in form {
        check_dim(xi.dim(), row.len())?;
    }
    let mut total = pair(form, &xi.cos[0], &eta.cos[0]);
    for n in 1..=xi.degree().min(eta.degree()) {
        total += 0.5 * (pair(form, &xi.cos[n], &eta.cos[n]) + pair(form, &xi.sin[n], &eta.sin[n]));
    }
    Ok(total)
}

pub fn loop_bracket(xi: &TrigLoop, eta: &TrigLoop) -> Result<TrigLoop> {
    xi.bracket(eta)
}

pub fn loop_d(xi: &TrigLoop) -> TrigLoop {
    xi.derivative()
}

/// `{ξ♭, η♭} = [ξ, η]♭ + κ(Dξ, η)`, returned as the pair `([ξ, η], κ(Dξ, η))`.
pub fn affine_flat_bracket(
    xi: &TrigLoop,
    eta: &TrigLoop,
    form: &[Vec<f64>],
) -> Result<(TrigLoop, f64)> {
    Ok((xi.bracket(eta)?, loop_kappa(&xi.derivative(), eta, form)?))
}

/// Hamiltonian field of `η♭`: `ξ ↦ [η, ξ] − Dη`.
#[derive(Debug, Clone)]
pub struct AffineHamField {
    eta: TrigLoop,
    d_eta: TrigLoop,
}

pub fn affine_ham_field(eta: &TrigLoop) -> AffineHamField {
    AffineHamField {
        eta: eta.clone(),
        d_eta: eta.derivative(),
    }
}

impl AffineHamField {
    pub fn eval(&self, xi: &TrigLoop) -> Result<TrigLoop> {
        self.eta.bracket(xi)?.sub(&self.d_eta)
    }
}

/// Anything that yields `ξ(t)` in algebra coordinates.
pub trait Potential {
    fn dim(&self) -> usize;
    fn coords_at(&self, t: f64) -> Result<Vec<f64>>;
}

impl Potential for TrigLoop {
    fn dim(&self) -> usize {
        self.k.dim()
    }

    fn coords_at(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.eval(t))
    }
}

/// `g(t) = exp(t·W + η(t))`. The winding `W` allows non-contractible loops
/// such as `exp(2πtJ)` in SO(2).
#[derive(Debug, Clone)]
pub struct GaugeLoop {
    rep: Arc<Representation>,
    eta: TrigLoop,
    winding: Vec<f64>,
}

impl GaugeLoop {
    pub fn new(rep: Arc<Representation>, eta: TrigLoop, winding: Vec<f64>) -> Result<Self> {
        if rep.algebra() != eta.algebra().as_ref() {
            return Err(Error::Representation(
                "gauge generator lives in a different algebra".into(),
            ));
        }
        check_dim(eta.dim(), winding.len())?;
        let g = GaugeLoop { rep, eta, winding };
        let residual = (g.at(1.0)? - g.at(0.0)?).norm();
        if residual > PERIODICITY_TOL {
            return Err(Error::NonPeriodic { residual });
        }
        Ok(g)
    }

    /// `g = exp ∘ η`.
    pub fn exp_of(rep: Arc<Representation>, eta: TrigLoop) -> Result<Self> {
        let d = eta.dim();
        Self::new(rep, eta, vec![0.0; d])
    }

    /// `exp ∘ η` with `η` shifted so that `g(0) = 1`.
    pub fn based(rep: Arc<Representation>, eta: &TrigLoop) -> Result<Self> {
        Self::exp_of(rep, eta.based())
    }

    pub fn identity(rep: Arc<Representation>) -> Self {
        let k = Arc::new(rep.algebra().clone());
        let eta = TrigLoop::zero(k);
        let d = eta.dim();
        GaugeLoop {
            rep,
            eta,
            winding: vec![0.0; d],
        }
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn generator(&self) -> &TrigLoop {
        &self.eta
    }

    pub fn is_based(&self) -> Result<bool> {
        Ok((self.at(0.0)? - self.rep.identity()).amax() < PERIODICITY_TOL)
    }

    pub fn at(&self, t: f64) -> Result<DMatrix<f64>> {
        let x: Vec<f64> = self
            .eta
            .eval(t)
            .iter()
            .zip(&self.winding)
            .map(|(e, w)| e + t * w)
            .collect();
        self.rep.exp(&x)
    }

    /// Fourth-order central difference with step `DIFF_STEP`.
    pub fn derivative(&self, t: f64) -> Result<DMatrix<f64>> {
        let h = DIFF_STEP;
        let num = self.at(t - 2.0 * h)? - self.at(t - h)? * 8.0 + self.at(t + h)? * 8.0
            - self.at(t + 2.0 * h)?;
        Ok(num / (12.0 * h))
    }
}

/// `ξ^g = Ad_g ξ − g′g⁻¹`, evaluated on demand.
#[derive(Debug, Clone)]
pub struct GaugedLoop<'a, P: Potential> {
    pub xi: &'a P,
    pub g: &'a GaugeLoop,
}

impl<P: Potential> Potential for GaugedLoop<'_, P> {
    fn dim(&self) -> usize {
        self.xi.dim()
    }

    fn coords_at(&self, t: f64) -> Result<Vec<f64>> {
        let rep = &self.g.rep;
        let g = self.g.at(t)?;
        let g_inv = rep.inverse(&g)?;
        let ad = rep.adjoint(&g, &self.xi.coords_at(t)?)?;
        let mc = rep.coords(&(self.g.derivative(t)? * g_inv))?;
        Ok(ad.iter().zip(mc).map(|(a, m)| a - m).collect())
    }
}

/// Values of an algebra-valued loop on the uniform grid `t_i = i / (len − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLoop {
    values: Vec<Vec<f64>>,
}

impl SampledLoop {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument("a sampled loop needs at least 2 nodes".into()));
        }
        let d = values[0].len();
        for v in &values {
            check_dim(d, v.len())?;
        }
        Ok(SampledLoop { values })
    }

    pub fn sample<P: Potential>(p: &P, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidArgument("a sampled loop needs at least 2 nodes".into()));
        }
        let values = (0..nodes)
            .map(|i| p.coords_at(i as f64 / (nodes - 1) as f64))
            .collect::<Result<_>>()?;
        Self::new(values)
    }

    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.values.len() - 1) as f64
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// `max_i |a_i − b_i|` over the grid.
    pub fn distance(&self, other: &SampledLoop) -> Result<f64> {
        check_dim(self.nodes(), other.nodes())?;
        let mut m: f64 = 0.0;
        for (a, b) in self.values.iter().zip(&other.values) {
            check_dim(a.len(), b.len())?;
            for (x, y) in a.iter().zip(b) {
                m = m.max((x - y).abs());
            }
        }
        Ok(m)
    }

    pub fn endpoint_residual(&self) -> f64 {
        let (a, b) = (&self.values[0], self.values.last().expect("non-empty"));
        a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

impl Potential for SampledLoop {
    fn dim(&self) -> usize {
        self.values[0].len()
    }

    /// Only grid nodes are available; anything else is [`Error::OffGrid`].
    fn coords_at(&self, t: f64) -> Result<Vec<f64>> {
        let x = t / self.spacing();
        let i = x.round();
        if (x - i).abs() > 1e-6 || i < 0.0 || i as usize >= self.values.len() {
            return Err(Error::OffGrid { t });
        }
        Ok(self.values[i as usize].clone())
    }
}

pub fn gauge_transform<P: Potential>(
    xi: &P,
    g: &GaugeLoop,
    nodes: usize,
) -> Result<SampledLoop> {
    check_dim(g.rep.algebra().dim(), xi.dim())?;
    let out = SampledLoop::sample(&GaugedLoop { xi, g }, nodes)?;
    let residual = out.endpoint_residual();
    if residual > PERIODICITY_TOL {
        return Err(Error::NonPeriodic { residual });
    }
    Ok(out)
}

/// RK4 on `γ′ = γ·ρ(ξ(t))`, `γ(0) = 1`, with orthogonal reprojection after
/// every step. Returns `γ` at `t_k = k·s/n`, `n = ⌈s/h⌉`.
pub fn holonomy_path<P: Potential + ?Sized>(
    xi: &P,
    rep: &Representation,
    s: f64,
    h: f64,
) -> Result<Vec<DMatrix<f64>>> {
    check_dim(rep.algebra().dim(), xi.dim())?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("end time {s} outside [0, 1]")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {h} must be positive")));
    }
    if h > COARSE_STEP {
        log::warn!("holonomy step {h} is coarser than {COARSE_STEP}");
    }
    let n = ((s / h) - 1e-9).ceil().max(0.0) as usize;
    let mut gamma = rep.identity();
    let mut path = vec![gamma.clone()];
    if n == 0 {
        return Ok(path);
    }
    let dt = s / n as f64;
    let field = |t: f64| -> Result<DMatrix<f64>> { rep.to_matrix(&xi.coords_at(t)?) };
    for step in 0..n {
        let t = step as f64 * dt;
        let (x0, xm, x1) = (field(t)?, field(t + dt / 2.0)?, field(t + dt)?);
        let k1 = &gamma * &x0;
        let k2 = (&gamma + &k1 * (dt / 2.0)) * &xm;
        let k3 = (&gamma + &k2 * (dt / 2.0)) * &xm;
        let k4 = (&gamma + &k3 * dt) * &x1;
        gamma += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        gamma = rep.reproject(&gamma);
        if gamma.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: step + 1 });
        }
        path.push(gamma.clone());
    }
    Ok(path)
}

pub fn holonomy<P: Potential + ?Sized>(
    xi: &P,
    rep: &Representation,
    s: f64,
    h: f64,
) -> Result<DMatrix<f64>> {
    Ok(holonomy_path(xi, rep, s, h)?.pop().expect("path holds the identity"))
}

/// `‖Hol_s(ξ^g) − g(0)·Hol_s(ξ)·g(s)⁻¹‖_F`.
pub fn holonomy_equivariance_residual<P: Potential>(
    xi: &P,
    g: &GaugeLoop,
    s: f64,
    h: f64,
) -> Result<f64> {
    let rep = g.rep.as_ref();
    let lhs = holonomy(&GaugedLoop { xi, g }, rep, s, h)?;
    let rhs = g.at(0.0)? * holonomy(xi, rep, s, h)? * rep.inverse(&g.at(s)?)?;
    Ok((lhs - rhs).norm())
}

/// Holonomies further apart than this are not in the same fiber.
pub const FIBER_TOL: f64 = 1e-6;

/// A gauge element sampled on the integration grid, with its certificates.
#[derive(Debug, Clone)]
pub struct RecoveredGauge {
    pub values: Vec<DMatrix<f64>>,
    /// `‖g(0) − 1‖_F`.
    pub base_residual: f64,
    /// `‖g(1) − g(0)‖_F`.
    pub periodicity_residual: f64,
    /// `max_grid |η − ξ^g|`, with `g′` by periodic finite differences.
    pub action_residual: f64,
}

impl RecoveredGauge {
    pub fn spacing(&self) -> f64 {
        1.0 / (self.values.len() - 1) as f64
    }

    /// `max_grid ‖g − other‖_F`.
    pub fn distance_to(&self, other: &GaugeLoop) -> Result<f64> {
        let n = self.values.len() - 1;
        let mut m: f64 = 0.0;
        for (i, g) in self.values.iter().enumerate() {
            m = m.max((g - other.at(i as f64 / n as f64)?).norm());
        }
        Ok(m)
    }
}

/// `g(t) = γ_η(t)⁻¹ γ_ξ(t)` for loops with equal holonomy, so that `η = ξ^g`.
pub fn fiber_recover<P: Potential, Q: Potential>(
    xi: &P,
    eta: &Q,
    rep: &Representation,
    h: f64,
) -> Result<RecoveredGauge> {
    let path_xi = holonomy_path(xi, rep, 1.0, h)?;
    let path_eta = holonomy_path(eta, rep, 1.0, h)?;
    let end_gap = (path_xi.last().expect("non-empty") - path_eta.last().expect("non-empty")).norm();
    if end_gap > FIBER_TOL {
        return Err(Error::FiberMismatch { residual: end_gap });
    }
    let values = path_eta
        .iter()
        .zip(&path_xi)
        .map(|(ge, gx)| Ok(rep.inverse(ge)? * gx))
        .collect::<Result<Vec<_>>>()?;
    let n = values.len() - 1;
    let base_residual = (&values[0] - rep.identity()).norm();
    let periodicity_residual = (&values[n] - &values[0]).norm();

    let dt = 1.0 / n as f64;
    let mut action_residual: f64 = 0.0;
    if n >= 4 {
        for (i, g) in values.iter().enumerate() {
            // 5-point periodic stencil; node n coincides with node 0.
            let at = |j: i64| &values[(j.rem_euclid(n as i64)) as usize];
            let j = i as i64;
            let dg = (at(j - 2) - at(j - 1) * 8.0 + at(j + 1) * 8.0 - at(j + 2)) / (12.0 * dt);
            let t = i as f64 * dt;
            let ad = rep.adjoint(g, &xi.coords_at(t)?)?;
            let mc = rep.coords(&(dg * rep.inverse(g)?))?;
            let target = eta.coords_at(t)?;
            for k in 0..ad.len() {
                action_residual = action_residual.max((ad[k] - mc[k] - target[k]).abs());
            }
        }
    }
    Ok(RecoveredGauge {
        values,
        base_residual,
        periodicity_residual,
        action_residual,
    })
}

/// `{ "k": name, "N": degree, "a0": [...], "cos": [[n, [...]]], "sin": [[n, [...]]] }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigLoopWire {
    pub k: String,
    #[serde(rename = "N")]
    pub degree: usize,
    pub a0: Vec<f64>,
    #[serde(default)]
    pub cos: Vec<(usize, Vec<f64>)>,
    #[serde(default)]
    pub sin: Vec<(usize, Vec<f64>)>,
}

impl TrigLoop {
    pub fn from_wire(wire: &TrigLoopWire, k: Arc<LieAlgebra>) -> Result<Self> {
        let mut l = TrigLoop::constant(k, &wire.a0)?;
        l.grow(wire.degree);
        for (n, x) in &wire.cos {
            if *n == 0 || *n > wire.degree {
                return Err(Error::Parse(format!("cos index {n} outside 1..={}", wire.degree)));
            }
            l.set_cos(*n, x)?;
        }
        for (n, x) in &wire.sin {
            if *n == 0 || *n > wire.degree {
                return Err(Error::Parse(format!("sin index {n} outside 1..={}", wire.degree)));
            }
            l.set_sin(*n, x)?;
        }
        Ok(l)
    }

    pub fn to_wire(&self, k_name: &str) -> TrigLoopWire {
        TrigLoopWire {
            k: k_name.to_string(),
            degree: self.degree(),
            a0: self.cos[0].clone(),
            cos: (1..=self.degree()).map(|n| (n, self.cos[n].clone())).collect(),
            sin: (1..=self.degree()).map(|n| (n, self.sin[n].clone())).collect(),
        }
    }
}

/// Rows `t, g_11, g_12, ...` for a matrix path on a uniform grid over `[0, s]`.
pub fn path_csv(path: &[DMatrix<f64>], s: f64) -> String {
    let m = path.first().map_or(0, |g| g.nrows());
    let mut out = String::from("t");
    for i in 1..=m {
        for j in 1..=m {
            out.push_str(&format!(",g{i}{j}"));
        }
    }
    out.push('\n');
    let n = path.len().saturating_sub(1).max(1);
    for (k, g) in path.iter().enumerate() {
        out.push_str(&crate::poisson::fmt17(s * k as f64 / n as f64));
        for i in 0..m {
            for j in 0..m {
                out.push(',');
                out.push_str(&crate::poisson::fmt17(g[(i, j)]));
            }
        }
        out.push('\n');
    }
    out
}
