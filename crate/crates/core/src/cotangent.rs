//! The cotangent bundle `T*G ≅ g* × G` in right trivialization.
//!
//! A point is `(α, g)`; a tangent vector at it is `(β, Y.g)` with `β ∈ g*`
//! and `Y ∈ g`, stored as the coordinate pair `(β, Y)`. The Liouville form is
//! `Θ(β, Y.g) = α(Y)` and `Ω = -dΘ`. Right-invariant fields satisfy
//! `[Y1.g, Y2.g] = -[Y1, Y2].g`, which gives the closed form
//!
//! ```text
//! Ω((β1, Y1.g), (β2, Y2.g)) = β2(Y1) - β1(Y2) - α([Y1, Y2])
//! ```
//!
//! used by [`CotangentBundle::omega`]. [`CotangentBundle::omega_oracle`]
//! recomputes `-dΘ` by differentiating `Θ` in an exponential chart and shares
//! no code with the closed form.
//!
//! Hamiltonian fields follow `dH = i_{X_H} Ω`. With this convention the
//! field of the left action is `(-α∘ad_X, X.g)` and contracting `Ω` with the
//! vertical field `(γ, 0)` gives `-γ(Y)`, so the vertical contraction holds in
//! the order `Ω((β, Y.g), (γ, 0)) = γ(Y)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::algebra::{LieAlgebra, TwoCocycle};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, RMatrix};
use crate::poisson::{self, PoissonStructure};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::rep::Representation;

/// Central-difference step of the `dΘ` oracle.
pub const ORACLE_STEP: f64 = 1e-5;
/// Agreement required between the closed form and the oracle.
pub const ORACLE_TOL: f64 = 1e-6;
/// Largest `‖gᵀg - 1‖` accepted for an orthogonal group element.
pub const GROUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CotangentPoint {
    pub alpha: Vec<f64>,
    pub g: DMatrix<f64>,
}

/// The tangent vector `(β, Y.g)`; `g` is implied by the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentTangent {
    pub beta: Vec<f64>,
    pub y: Vec<f64>,
}

impl CotangentTangent {
    pub fn new(beta: Vec<f64>, y: Vec<f64>) -> Self {
        CotangentTangent { beta, y }
    }

    /// The vertical vector `(γ, 0)`.
    pub fn vertical(gamma: Vec<f64>) -> Self {
        let n = gamma.len();
        CotangentTangent {
            beta: gamma,
            y: vec![0.0; n],
        }
    }
}

#[derive(Debug, Clone)]
pub struct CotangentBundle {
    rep: Arc<Representation>,
}

impl CotangentBundle {
    pub fn new(rep: Arc<Representation>) -> Self {
        CotangentBundle { rep }
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.rep.algebra()
    }

    pub fn dim(&self) -> usize {
        self.rep.algebra().dim()
    }

    pub fn point(&self, alpha: Vec<f64>, g: DMatrix<f64>) -> Result<CotangentPoint> {
        check_dim(self.dim(), alpha.len())?;
        let m = self.rep.matrix_dim();
        if g.nrows() != m || g.ncols() != m {
            return Err(Error::Representation(format!(
                "group element must be {m}x{m}, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        if self.rep.is_orthogonal() {
            let r = self.rep.group_residual(&g);
            if r > GROUP_TOL {
                return Err(Error::InvalidArgument(format!(
                    "group element is off the group by {r:e}"
                )));
            }
        }
        Ok(CotangentPoint { alpha, g })
    }

    /// `α` and `log g` with coordinates uniform in `[-scale, scale]`.
    pub fn random_point(&self, scale: f64, rng: &mut impl Rng) -> CotangentPoint {
        let alpha = random_vec(self.dim(), scale, rng);
        let x = random_vec(self.dim(), scale, rng);
        let g = self.rep.exp(&x).expect("dimension matches");
        CotangentPoint { alpha, g }
    }

    pub fn random_tangent(&self, scale: f64, rng: &mut impl Rng) -> CotangentTangent {
        CotangentTangent {
            beta: random_vec(self.dim(), scale, rng),
            y: random_vec(self.dim(), scale, rng),
        }
    }

    fn check_point(&self, p: &CotangentPoint) -> Result<()> {
        check_dim(self.dim(), p.alpha.len())
    }

    fn check_tangent(&self, v: &CotangentTangent) -> Result<()> {
        check_dim(self.dim(), v.beta.len())?;
        check_dim(self.dim(), v.y.len())
    }

    pub fn theta(&self, p: &CotangentPoint, v: &CotangentTangent) -> Result<f64> {
        self.check_point(p)?;
        self.check_tangent(v)?;
        Ok(pair(&p.alpha, &v.y))
    }

    pub fn omega(
        &self,
        p: &CotangentPoint,
        v1: &CotangentTangent,
        v2: &CotangentTangent,
    ) -> Result<f64> {
        self.check_point(p)?;
        self.check_tangent(v1)?;
        self.check_tangent(v2)?;
        let br = self.algebra().bracket_f64(&v1.y, &v2.y);
        Ok(pair(&v2.beta, &v1.y) - pair(&v1.beta, &v2.y) - pair(&p.alpha, &br))
    }

    /// `-dΘ` from the chart `(a, u) ↦ (α + a, exp(u)·g)`. The chart tangent at
    /// the origin is exactly `(β, Y)`. `∂θ_u/∂(a, u)` is taken by central
    /// differences; the derivative of `exp` inside `θ_u` comes from the block
    /// exponential `exp([[U, E], [0, U]])`.
    pub fn omega_oracle(
        &self,
        p: &CotangentPoint,
        v1: &CotangentTangent,
        v2: &CotangentTangent,
    ) -> Result<f64> {
        self.check_point(p)?;
        self.check_tangent(v1)?;
        self.check_tangent(v2)?;
        let d = self.dim();
        let h = ORACLE_STEP;
        let c1: Vec<f64> = v1.beta.iter().chain(&v1.y).copied().collect();
        let c2: Vec<f64> = v2.beta.iter().chain(&v2.y).copied().collect();
        let mut dtheta = 0.0;
        for mu in 0..2 * d {
            let mut plus = vec![0.0; 2 * d];
            let mut minus = vec![0.0; 2 * d];
            plus[mu] = h;
            minus[mu] = -h;
            let tp = self.chart_theta_u(p, &plus)?;
            let tm = self.chart_theta_u(p, &minus)?;
            for l in 0..d {
                let deriv = (tp[l] - tm[l]) / (2.0 * h);
                dtheta += deriv * (c1[mu] * c2[d + l] - c2[mu] * c1[d + l]);
            }
        }
        Ok(-dtheta)
    }

    /// `θ` on the chart vectors `∂/∂u_l` at chart coordinates `(a, u)`.
    /// The `∂/∂a_k` components vanish because those vectors are vertical.
    fn chart_theta_u(&self, p: &CotangentPoint, coords: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        let (a, u) = coords.split_at(d);
        let alpha: Vec<f64> = p.alpha.iter().zip(a).map(|(x, y)| x + y).collect();
        let um = self.rep.to_matrix(u)?;
        let m = um.nrows();
        let exp_u = um.exp();
        let exp_u_inv = exp_u
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Representation("exp(u) is singular".into()))?;
        let mut out = Vec::with_capacity(d);
        for gen in self.rep.generators() {
            let mut block = DMatrix::zeros(2 * m, 2 * m);
            block.view_mut((0, 0), (m, m)).copy_from(&um);
            block.view_mut((m, m), (m, m)).copy_from(&um);
            block.view_mut((0, m), (m, m)).copy_from(gen);
            let dexp = block.exp().view((0, m), (m, m)).into_owned();
            let w = self.rep.coords(&(dexp * &exp_u_inv))?;
            out.push(pair(&alpha, &w));
        }
        Ok(out)
    }

    /// Field of the left action generated by `X`: `(-α∘ad_X, X.g)`.
    pub fn left_action_field(&self, p: &CotangentPoint, x: &[f64]) -> Result<CotangentTangent> {
        self.check_point(p)?;
        check_dim(self.dim(), x.len())?;
        let d = self.dim();
        let beta = (0..d)
            .map(|j| {
                let e = unit_f64(d, j);
                -pair(&p.alpha, &self.algebra().bracket_f64(x, &e))
            })
            .collect();
        Ok(CotangentTangent {
            beta,
            y: x.to_vec(),
        })
    }

    /// `h·(α, g) = (α∘Ad_{h⁻¹}, hg)`.
    pub fn left_translate(&self, h: &DMatrix<f64>, p: &CotangentPoint) -> Result<CotangentPoint> {
        Ok(CotangentPoint {
            alpha: self.coadjoint(h, &p.alpha)?,
            g: h * &p.g,
        })
    }

    /// Push-forward of `(β, Y.g)` under left translation by `h`.
    pub fn left_translate_tangent(
        &self,
        h: &DMatrix<f64>,
        v: &CotangentTangent,
    ) -> Result<CotangentTangent> {
        Ok(CotangentTangent {
            beta: self.coadjoint(h, &v.beta)?,
            y: self.rep.adjoint(h, &v.y)?,
        })
    }

    /// `(α, g)·h = (α, gh)`; right-trivialized tangents are unchanged.
    pub fn right_translate(&self, p: &CotangentPoint, h: &DMatrix<f64>) -> CotangentPoint {
        CotangentPoint {
            alpha: p.alpha.clone(),
            g: &p.g * h,
        }
    }

    /// `α∘Ad_{h⁻¹}` in dual coordinates.
    fn coadjoint(&self, h: &DMatrix<f64>, alpha: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), alpha.len())?;
        let h_inv = self.rep.inverse(h)?;
        (0..self.dim())
            .map(|i| Ok(pair(alpha, &self.rep.adjoint(&h_inv, &unit_f64(self.dim(), i))?)))
            .collect()
    }
}

/// Polynomial model of the bracket on the generators of `C∞_*(T*G)`.
///
/// Variables are `H_1..H_d` (the momenta `H_X(α, g) = α(X)` on basis
/// elements) followed by `G_pq`, the matrix entries of `g` in the
/// representation. The brackets are affine:
///
/// ```text
/// {H_i, H_j} = Σ_k c_ijk H_k + b_ij,   {G_pq, H_i} = Σ_r ρ(e_i)_pr G_rq,   {G, G} = 0
/// ```
///
/// with `b` the optional magnetic term. Pulled-back functions `F̃` are
/// polynomials in the `G` variables, so `{F̃, H_X} = X_r F` and the bracket
/// vanishes on `C∞_*(G)`.
#[derive(Debug, Clone)]
pub struct GeneratorAlgebra {
    rep: Arc<Representation>,
    structure: PoissonStructure,
    magnetic: Option<TwoCocycle>,
    cocycle_residual: Rational,
}

impl GeneratorAlgebra {
    pub fn new(rep: Arc<Representation>, magnetic: Option<TwoCocycle>) -> Result<Self> {
        let g = rep.algebra().clone();
        let d = g.dim();
        let m = rep.matrix_dim();
        let n = d + m * m;
        let gidx = |p: usize, q: usize| d + p * m + q;
        let mut c = vec![vec![vec![rational::zero(); n]; n]; n];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    c[i][j][k] = g.constant(i, j, k).clone();
                }
            }
        }
        for (i, gen) in rep.generators().iter().enumerate() {
            for p in 0..m {
                for q in 0..m {
                    for r in 0..m {
                        let v = gen[(p, r)];
                        if v != 0.0 {
                            let v = rational::from_f64(v)?;
                            c[gidx(p, q)][i][gidx(r, q)] = v.clone();
                            c[i][gidx(p, q)][gidx(r, q)] = -v;
                        }
                    }
                }
            }
        }
        let mut names: Vec<String> = (1..=d).map(|i| format!("H{i}")).collect();
        for p in 1..=m {
            for q in 1..=m {
                names.push(format!("G{p}_{q}"));
            }
        }
        let bracket0 = LieAlgebra::new(names.clone(), c)?;
        let (structure, cocycle_residual) = match &magnetic {
            None => (PoissonStructure::linear(bracket0)?, rational::zero()),
            Some(b) => {
                check_dim(d, b.dim())?;
                let residual = crate::algebra::check_cocycle(&g, b)?;
                let mut lam = linalg::zeros(n, n);
                for (i, row) in b.matrix().iter().enumerate() {
                    lam[i][..d].clone_from_slice(row);
                }
                let lambda = TwoCocycle::new(lam)?;
                (
                    PoissonStructure::affine_unchecked(bracket0, lambda),
                    residual,
                )
            }
        };
        let structure = structure.with_names(names)?;
        Ok(GeneratorAlgebra {
            rep,
            structure,
            magnetic,
            cocycle_residual,
        })
    }

    pub fn structure(&self) -> &PoissonStructure {
        &self.structure
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn magnetic(&self) -> Option<&TwoCocycle> {
        self.magnetic.as_ref()
    }

    /// Largest cyclic residual of the magnetic term; zero when it is a
    /// cocycle or absent.
    pub fn cocycle_residual(&self) -> &Rational {
        &self.cocycle_residual
    }

    pub fn algebra_dim(&self) -> usize {
        self.rep.algebra().dim()
    }

    pub fn nvars(&self) -> usize {
        self.structure.dim()
    }

    /// `H_X(α, g) = α(X)`.
    pub fn momentum(&self, x: &[Rational]) -> Result<Polynomial> {
        check_dim(self.algebra_dim(), x.len())?;
        let mut coeffs = vec![rational::zero(); self.nvars()];
        coeffs[..x.len()].clone_from_slice(x);
        Ok(Polynomial::linear(&coeffs))
    }

    /// `F_A(α, g) = trace(A g) = Σ_pq A_qp g_pq`.
    pub fn matrix_coefficient(&self, a: &RMatrix) -> Result<Polynomial> {
        let m = self.rep.matrix_dim();
        check_dim(m, a.len())?;
        let d = self.algebra_dim();
        let mut coeffs = vec![rational::zero(); self.nvars()];
        for (q, row) in a.iter().enumerate() {
            check_dim(m, row.len())?;
            for (p, v) in row.iter().enumerate() {
                coeffs[d + p * m + q] = v.clone();
            }
        }
        Ok(Polynomial::linear(&coeffs))
    }

    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        poisson::pbracket(f, g, &self.structure)
    }

    pub fn jacobiator(&self, f: &Polynomial, g: &Polynomial, h: &Polynomial) -> Result<Polynomial> {
        poisson::jacobiator(f, g, h, &self.structure)
    }

    fn coordinates(&self, p: &CotangentPoint) -> Result<Vec<f64>> {
        check_dim(self.algebra_dim(), p.alpha.len())?;
        let m = self.rep.matrix_dim();
        let mut out = p.alpha.clone();
        for r in 0..m {
            for c in 0..m {
                out.push(p.g[(r, c)]);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, f: &Polynomial, p: &CotangentPoint) -> Result<f64> {
        check_dim(self.nvars(), f.nvars())?;
        Ok(f.to_f64().eval(&self.coordinates(p)?))
    }

    /// `df` at `p` as a covector on `(β, Y)`: the `β` block is `∂f/∂H`, the
    /// `Y_k` entry is `Σ_pq ∂f/∂G_pq (ρ(e_k) g)_pq`.
    pub fn differential(&self, f: &Polynomial, p: &CotangentPoint) -> Result<Vec<f64>> {
        check_dim(self.nvars(), f.nvars())?;
        let x = self.coordinates(p)?;
        let d = self.algebra_dim();
        let m = self.rep.matrix_dim();
        let grad: Vec<f64> = (0..self.nvars())
            .map(|i| f.derivative(i).to_f64().eval(&x))
            .collect();
        let mut out = grad[..d].to_vec();
        for gen in self.rep.generators() {
            let tangent = gen * &p.g;
            let mut s = 0.0;
            for r in 0..m {
                for c in 0..m {
                    s += grad[d + r * m + c] * tangent[(r, c)];
                }
            }
            out.push(s);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub samples: usize,
    /// Sample indices where the common kernel of the differentials differs
    /// from the fibers of `(α, g) ↦ α`.
    pub kernel_failures: Vec<usize>,
    /// Generator index pairs whose bracket differs from the pulled-back
    /// bracket on `g*`.
    pub bracket_mismatches: Vec<(usize, usize)>,
}

impl ReductionReport {
    pub fn passes(&self) -> bool {
        self.kernel_failures.is_empty() && self.bracket_mismatches.is_empty()
    }
}

/// Reduction by the right action through `q(α, g) = α`, using the momenta
/// `H_X` for `X` in `generators`.
///
/// At each sample the differentials must cut out exactly `ker Tq = {(0, Y)}`
/// (exact rank over the sampled doubles), and their brackets must equal the
/// pull-back of the KKS bracket on `g*`, shifted by the magnetic term when
/// present.
pub fn reduction_check(
    gens: &GeneratorAlgebra,
    generators: &[Vec<Rational>],
    samples: &[CotangentPoint],
) -> Result<ReductionReport> {
    let d = gens.algebra_dim();
    let funcs: Vec<Polynomial> = generators
        .iter()
        .map(|x| gens.momentum(x))
        .collect::<Result<_>>()?;
    let mut q = linalg::zeros(d, 2 * d);
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = rational::one();
    }
    let mut kernel_failures = Vec::new();
    for (s, p) in samples.iter().enumerate() {
        let rows: RMatrix = funcs
            .iter()
            .map(|f| {
                gens.differential(f, p)?
                    .into_iter()
                    .map(rational::from_f64)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if !linalg::common_kernel_equals(&rows, &q, 2 * d) {
            kernel_failures.push(s);
        }
    }
    let g = gens.rep().algebra().clone();
    let target = match gens.magnetic() {
        None => PoissonStructure::linear(g)?,
        Some(b) => PoissonStructure::affine_unchecked(g, b.clone()),
    };
    let map: Vec<usize> = (0..d).collect();
    let mut bracket_mismatches = Vec::new();
    for (i, x) in generators.iter().enumerate() {
        for (j, y) in generators.iter().enumerate().skip(i + 1) {
            let upstairs = gens.bracket(&funcs[i], &funcs[j])?;
            let downstairs =
                poisson::pbracket(&Polynomial::linear(x), &Polynomial::linear(y), &target)?;
            if upstairs != downstairs.embed(gens.nvars(), &map)? {
                bracket_mismatches.push((i, j));
            }
        }
    }
    Ok(ReductionReport {
        samples: samples.len(),
        kernel_failures,
        bracket_mismatches,
    })
}

/// Orbit form at `g`: `α([Ad_{g⁻¹} X, Ad_{g⁻¹} Y])` for the tangents
/// `X.g`, `Y.g`. Invariant under `g ↦ hg` with `X ↦ Ad_h X`.
pub fn orbit_form(
    rep: &Representation,
    alpha: &[f64],
    g: &DMatrix<f64>,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    check_dim(rep.algebra().dim(), alpha.len())?;
    let g_inv = rep.inverse(g)?;
    let xi = rep.adjoint(&g_inv, x)?;
    let eta = rep.adjoint(&g_inv, y)?;
    Ok(pair(alpha, &rep.algebra().bracket_f64(&xi, &eta)))
}

/// Radical of `(X, Y) ↦ α([X, Y])`, the stabilizer algebra of `α`.
pub fn orbit_radical(g: &LieAlgebra, alpha: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    check_dim(g.dim(), alpha.len())?;
    let n = g.dim();
    let m: RMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| linalg::dot(alpha, &g.bracket_basis(i, j)))
                .collect()
        })
        .collect();
    Ok(linalg::nullspace(&m, n))
}

fn pair(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit_f64(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn random_vec(n: usize, scale: f64, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..=scale)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unit;
    use crate::rational::int;
    use rand::SeedableRng;
    use num_traits::Zero;
    use rand_chacha::ChaCha8Rng;

    fn bundle(rep: Representation) -> CotangentBundle {
        CotangentBundle::new(Arc::new(rep))
    }

    fn rat(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn closed_form_matches_chart_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for rep in [Representation::so3(), Representation::su2()] {
            let b = bundle(rep);
            let mut worst: f64 = 0.0;
            for _ in 0..25 {
                let p = b.random_point(1.0, &mut rng);
                let v1 = b.random_tangent(1.0, &mut rng);
                let v2 = b.random_tangent(1.0, &mut rng);
                let exact = b.omega(&p, &v1, &v2).unwrap();
                let oracle = b.omega_oracle(&p, &v1, &v2).unwrap();
                worst = worst.max((exact - oracle).abs());
            }
            assert!(worst < ORACLE_TOL, "{worst:e}");
        }
    }

    #[test]
    fn left_action_field_contracts_to_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let b = bundle(Representation::so3());
        for _ in 0..25 {
            let p = b.random_point(1.0, &mut rng);
            let x = random_vec(3, 1.0, &mut rng);
            let v = b.random_tangent(1.0, &mut rng);
            let field = b.left_action_field(&p, &x).unwrap();
            let expected = pair(&v.beta, &x);
            assert!((b.omega(&p, &field, &v).unwrap() - expected).abs() < 1e-14);
            assert!((b.omega_oracle(&p, &field, &v).unwrap() - expected).abs() < ORACLE_TOL);
        }
    }

    #[test]
    fn vertical_field_contracts_to_pairing_in_second_slot() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = bundle(Representation::so3());
        for _ in 0..25 {
            let p = b.random_point(1.0, &mut rng);
            let gamma = random_vec(3, 1.0, &mut rng);
            let v = b.random_tangent(1.0, &mut rng);
            let z = CotangentTangent::vertical(gamma.clone());
            let expected = pair(&gamma, &v.y);
            assert!((b.omega(&p, &v, &z).unwrap() - expected).abs() < 1e-14);
            assert!((b.omega_oracle(&p, &v, &z).unwrap() - expected).abs() < ORACLE_TOL);
            assert!((b.omega(&p, &z, &v).unwrap() + expected).abs() < 1e-14);
        }
    }

    #[test]
    fn vertical_contraction_with_z_first_contradicts_left_action_contraction() {
        // With α = 0 the left-action field of X is (0, X). Contracting it
        // against (γ, 0) gives γ(X); antisymmetry then forces
        // Ω((γ, 0), (0, X)) = -γ(X), so `i_Z Ω = +γ(Y)` cannot also hold.
        let b = bundle(Representation::so3());
        let p = b.point(vec![0.0; 3], DMatrix::identity(3, 3)).unwrap();
        let x = vec![0.3, -1.0, 2.0];
        let gamma = vec![1.0, 0.5, 0.25];
        let field = b.left_action_field(&p, &x).unwrap();
        let z = CotangentTangent::vertical(gamma.clone());
        let via_left_action = b.omega(&p, &field, &z).unwrap();
        assert!((via_left_action - pair(&gamma, &x)).abs() < 1e-15);
        let z_first = b.omega(&p, &z, &field).unwrap();
        assert!((z_first + pair(&gamma, &x)).abs() < 1e-15);
    }

    #[test]
    fn theta_is_invariant_under_both_translations() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let b = bundle(Representation::su2());
        for _ in 0..10 {
            let p = b.random_point(1.0, &mut rng);
            let v = b.random_tangent(1.0, &mut rng);
            let h = b.rep().exp(&random_vec(3, 2.0, &mut rng)).unwrap();
            let t = b.theta(&p, &v).unwrap();
            let right = b.right_translate(&p, &h);
            assert!((b.theta(&right, &v).unwrap() - t).abs() < 1e-14);
            let left = b.left_translate(&h, &p).unwrap();
            let lv = b.left_translate_tangent(&h, &v).unwrap();
            assert!((b.theta(&left, &lv).unwrap() - t).abs() < 1e-12);
            let v2 = b.random_tangent(1.0, &mut rng);
            let lv2 = b.left_translate_tangent(&h, &v2).unwrap();
            let w = b.omega(&p, &v, &v2).unwrap();
            assert!((b.omega(&left, &lv, &lv2).unwrap() - w).abs() < 1e-12);
        }
    }

    #[test]
    fn point_rejects_non_group_elements() {
        let b = bundle(Representation::so3());
        let bad = DMatrix::identity(3, 3) * 2.0;
        assert!(matches!(
            b.point(vec![0.0; 3], bad),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            b.point(vec![0.0; 2], DMatrix::identity(3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn e_unit(m: usize, r: usize, c: usize) -> RMatrix {
        let mut a = linalg::zeros(m, m);
        a[r][c] = rational::one();
        a
    }

    fn rep_rational(rep: &Representation, i: usize) -> RMatrix {
        let g = &rep.generators()[i];
        (0..g.nrows())
            .map(|r| {
                (0..g.ncols())
                    .map(|c| rational::from_f64(g[(r, c)]).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn generator_algebra_relations() {
        let rep = Arc::new(Representation::so3());
        let gens = GeneratorAlgebra::new(rep.clone(), None).unwrap();
        assert!(gens.structure().bracket0().unwrap().validate_lie().is_valid());
        let h: Vec<_> = (0..3).map(|i| gens.momentum(&unit(3, i)).unwrap()).collect();
        assert_eq!(gens.bracket(&h[0], &h[1]).unwrap(), h[2]);
        assert_eq!(gens.bracket(&h[2], &h[0]).unwrap(), h[1]);

        // {F_A, H_X} = F_{AX}.
        let a = vec![rat(&[1, 2, 0]), rat(&[0, -1, 3]), rat(&[5, 0, 1])];
        let fa = gens.matrix_coefficient(&a).unwrap();
        for i in 0..3 {
            let ax = linalg::mat_mul(&a, &rep_rational(&rep, i));
            let expected = gens.matrix_coefficient(&ax).unwrap();
            assert_eq!(gens.bracket(&fa, &h[i]).unwrap(), expected);
        }
        let fb = gens.matrix_coefficient(&e_unit(3, 2, 1)).unwrap();
        assert!(gens.bracket(&fa, &fb).unwrap().is_zero());

        // E11 against the rotation about the third axis vanishes at g = 1.
        let f11 = gens.matrix_coefficient(&e_unit(3, 0, 0)).unwrap();
        let b = bundle(Representation::so3());
        let p = b.point(vec![0.2, 0.1, -0.4], DMatrix::identity(3, 3)).unwrap();
        let v = gens.eval(&gens.bracket(&f11, &h[2]).unwrap(), &p).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn pulled_back_bracket_is_the_directional_derivative() {
        let rep = Arc::new(Representation::so3());
        let gens = GeneratorAlgebra::new(rep.clone(), None).unwrap();
        let b = CotangentBundle::new(rep.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = vec![rat(&[1, 2, 0]), rat(&[0, -1, 3]), rat(&[5, 0, 1])];
        let af = DMatrix::from_fn(3, 3, |r, c| rational::to_f64(&a[r][c]));
        let fa = gens.matrix_coefficient(&a).unwrap();
        for _ in 0..10 {
            let p = b.random_point(1.0, &mut rng);
            let x = random_vec(3, 1.0, &mut rng);
            let xr: Vec<Rational> = x.iter().map(|&v| rational::from_f64(v).unwrap()).collect();
            let br = gens.bracket(&fa, &gens.momentum(&xr).unwrap()).unwrap();
            let h = 1e-5;
            let f = |s: f64| {
                let g = rep.exp(&x.iter().map(|v| v * s).collect::<Vec<_>>()).unwrap() * &p.g;
                (&af * g).trace()
            };
            let fd = (f(h) - f(-h)) / (2.0 * h);
            assert!((gens.eval(&br, &p).unwrap() - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn jacobiator_vanishes_without_magnetic_term() {
        for rep in [Representation::so3(), Representation::su2()] {
            let rep = Arc::new(rep);
            let gens = GeneratorAlgebra::new(rep.clone(), None).unwrap();
            let m = rep.matrix_dim();
            let h: Vec<_> = (0..3).map(|i| gens.momentum(&unit(3, i)).unwrap()).collect();
            let f = gens.matrix_coefficient(&e_unit(m, 0, 1)).unwrap();
            let g = gens.matrix_coefficient(&e_unit(m, 2, 0)).unwrap();
            for triple in [
                [&h[0], &h[1], &h[2]],
                [&f, &h[0], &h[1]],
                [&f, &g, &h[2]],
            ] {
                let j = gens.jacobiator(triple[0], triple[1], triple[2]).unwrap();
                assert!(j.is_zero());
            }
        }
    }

    #[test]
    fn magnetic_term_keeps_jacobi_iff_cocycle() {
        let cases = [
            (Representation::so3(), (0, 1), true),
            (Representation::torus2(), (0, 1), true),
            (Representation::u2(), (0, 3), false),
        ];
        for (rep, (i, j), cocycle) in cases {
            let d = rep.algebra().dim();
            let b = TwoCocycle::from_pairs(d, &[(i, j, rational::one())]).unwrap();
            let gens = GeneratorAlgebra::new(Arc::new(rep), Some(b)).unwrap();
            assert_eq!(gens.cocycle_residual().is_zero(), cocycle);
            let h: Vec<_> = (0..d).map(|k| gens.momentum(&unit(d, k)).unwrap()).collect();
            let mut worst = rational::zero();
            for a in 0..d {
                for bb in a + 1..d {
                    for c in bb + 1..d {
                        let jac = gens.jacobiator(&h[a], &h[bb], &h[c]).unwrap();
                        assert!(jac.is_constant());
                        worst = worst.max(rational::abs(&jac.constant_term()));
                    }
                }
            }
            assert_eq!(worst.is_zero(), cocycle);
        }
        // The non-cocycle case: {H1, H4} = -1 feeds the (2, 3, 4) cyclic sum.
        let b = TwoCocycle::from_pairs(4, &[(0, 3, rational::one())]).unwrap();
        let gens = GeneratorAlgebra::new(Arc::new(Representation::u2()), Some(b)).unwrap();
        let h: Vec<_> = (0..4).map(|k| gens.momentum(&unit(4, k)).unwrap()).collect();
        let jac = gens.jacobiator(&h[1], &h[2], &h[3]).unwrap();
        assert_eq!(jac.constant_term(), int(-1));
    }

    #[test]
    fn reduction_to_coadjoint_bracket() {
        let rep = Arc::new(Representation::so3());
        let b = CotangentBundle::new(rep.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let samples: Vec<_> = (0..100).map(|_| b.random_point(1.0, &mut rng)).collect();
        let basis: Vec<_> = (0..3).map(|i| unit(3, i)).collect();

        let gens = GeneratorAlgebra::new(rep.clone(), None).unwrap();
        let full = reduction_check(&gens, &basis, &samples).unwrap();
        assert!(full.passes(), "{full:?}");

        let partial = reduction_check(&gens, &basis[..1], &samples).unwrap();
        assert_eq!(partial.kernel_failures.len(), samples.len());
        assert!(!partial.passes());

        let mag = TwoCocycle::from_pairs(3, &[(0, 1, rational::one())]).unwrap();
        let gens = GeneratorAlgebra::new(rep, Some(mag)).unwrap();
        let magnetic = reduction_check(&gens, &basis, &samples).unwrap();
        assert!(magnetic.passes(), "{magnetic:?}");
    }

    #[test]
    fn orbit_form_is_left_invariant_with_expected_radical() {
        let rep = Representation::so3();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let alpha = [0.0, 0.0, 1.0];
        for _ in 0..10 {
            let g = rep.exp(&random_vec(3, 1.0, &mut rng)).unwrap();
            let h = rep.exp(&random_vec(3, 1.0, &mut rng)).unwrap();
            let x = random_vec(3, 1.0, &mut rng);
            let y = random_vec(3, 1.0, &mut rng);
            let w = orbit_form(&rep, &alpha, &g, &x, &y).unwrap();
            let hx = rep.adjoint(&h, &x).unwrap();
            let hy = rep.adjoint(&h, &y).unwrap();
            let w2 = orbit_form(&rep, &alpha, &(&h * &g), &hx, &hy).unwrap();
            assert!((w - w2).abs() < 1e-12);
        }
        let radical = orbit_radical(rep.algebra(), &rat(&[0, 0, 1])).unwrap();
        assert_eq!(radical.len(), 1);
        assert_eq!(linalg::rank(&vec![radical[0].clone(), unit(3, 2)]), 1);
    }
}
