//! Constant, linear and affine Poisson brackets on the polynomial algebra of
//! a finite-dimensional vector space `V = R^n`.
//!
//! Coordinates `x_1..x_n` are the dual basis of `V_*`. With `Λ` a 2-cocycle
//! and `c_ijk` the constants of a Lie bracket on `V_*`,
//! `{F, G}(v) = Σ_ij ∂_iF ∂_jG (Λ_ij + Σ_k c_ijk v_k)`.

use num_traits::Zero;

use crate::algebra::{check_cocycle, LieAlgebra, TwoCocycle};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, RMatrix};
use crate::poly::{FloatPoly, Polynomial};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Constant,
    Linear,
    Affine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure {
    n: usize,
    kind: StructureKind,
    lambda: Option<TwoCocycle>,
    bracket0: Option<LieAlgebra>,
    sharp_map: Option<RMatrix>,
    names: Vec<String>,
}

impl PoissonStructure {
    pub fn constant(lambda: TwoCocycle) -> Result<Self> {
        let n = lambda.dim();
        require_cocycle(&LieAlgebra::abelian(n), &lambda)?;
        Ok(Self::assemble(StructureKind::Constant, n, Some(lambda), None))
    }

    /// The KKS structure on the dual of `g`: `{x_i, x_j} = Σ_k c_ijk x_k`.
    pub fn linear(bracket0: LieAlgebra) -> Result<Self> {
        require_lie(&bracket0)?;
        let n = bracket0.dim();
        Ok(Self::assemble(StructureKind::Linear, n, None, Some(bracket0)))
    }

    pub fn affine(bracket0: LieAlgebra, lambda: TwoCocycle) -> Result<Self> {
        require_lie(&bracket0)?;
        check_dim(bracket0.dim(), lambda.dim())?;
        require_cocycle(&bracket0, &lambda)?;
        Ok(Self::affine_unchecked(bracket0, lambda))
    }

    /// Affine structure without the cocycle test; the Jacobiator of the result
    /// is the cyclic sum of `Λ` over brackets.
    pub fn affine_unchecked(bracket0: LieAlgebra, lambda: TwoCocycle) -> Self {
        let n = bracket0.dim();
        Self::assemble(StructureKind::Affine, n, Some(lambda), Some(bracket0))
    }

    /// Linear structure without the Jacobi test on the bracket table.
    pub fn linear_unchecked(bracket0: LieAlgebra) -> Self {
        let n = bracket0.dim();
        Self::assemble(StructureKind::Linear, n, None, Some(bracket0))
    }

    pub fn constant_unchecked(lambda: TwoCocycle) -> Self {
        let n = lambda.dim();
        Self::assemble(StructureKind::Constant, n, Some(lambda), None)
    }

    /// Canonical structure on `R^m × R^m`: `{q_i, p_j} = δ_ij`.
    pub fn canonical(m: usize) -> Self {
        let pairs: Vec<_> = (0..m).map(|i| (i, m + i, rational::one())).collect();
        let lambda = TwoCocycle::from_pairs(2 * m, &pairs).expect("indices in range");
        Self::constant(lambda).expect("antisymmetric")
    }

    fn assemble(
        kind: StructureKind,
        n: usize,
        lambda: Option<TwoCocycle>,
        bracket0: Option<LieAlgebra>,
    ) -> Self {
        let names = default_names(n);
        let sharp_map = lambda.as_ref().map(|l| l.matrix().clone());
        PoissonStructure {
            n,
            kind,
            lambda,
            bracket0,
            sharp_map,
            names,
        }
    }

    /// Replaces the sharp map after checking `Λ(e_i, e_j) = e_i(e_j♯)`.
    pub fn with_sharp_map(mut self, sharp: RMatrix) -> Result<Self> {
        let Some(lambda) = &self.lambda else {
            return Err(Error::InvalidArgument(
                "linear structures carry no sharp map".into(),
            ));
        };
        check_dim(self.n, sharp.len())?;
        for (i, row) in sharp.iter().enumerate() {
            check_dim(self.n, row.len())?;
            for (j, s) in row.iter().enumerate() {
                if s != lambda.entry(i, j) {
                    return Err(Error::InvalidArgument(format!(
                        "sharp map disagrees with the cocycle at ({i}, {j})"
                    )));
                }
            }
        }
        self.sharp_map = Some(sharp);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_dim(self.n, names.len())?;
        self.names = names;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn lambda(&self) -> Option<&TwoCocycle> {
        self.lambda.as_ref()
    }

    pub fn bracket0(&self) -> Option<&LieAlgebra> {
        self.bracket0.as_ref()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.n, i)
    }

    /// `Π_ij = Λ_ij + Σ_k c_ijk x_k`.
    pub fn tensor_entry(&self, i: usize, j: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.n);
        if let Some(l) = &self.lambda {
            p.add_term(crate::poly::Monomial::one(self.n), l.entry(i, j).clone());
        }
        if let Some(g) = &self.bracket0 {
            for k in 0..self.n {
                let c = g.constant(i, j, k);
                if !c.is_zero() {
                    p.add_term(crate::poly::Monomial::var(self.n, k), c.clone());
                }
            }
        }
        p
    }

    fn check_poly(&self, f: &Polynomial) -> Result<()> {
        check_dim(self.n, f.nvars())
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn require_lie(g: &LieAlgebra) -> Result<()> {
    if g.validate_lie().is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "bracket constants fail antisymmetry or the Jacobi identity".into(),
        ))
    }
}

fn require_cocycle(g: &LieAlgebra, lambda: &TwoCocycle) -> Result<()> {
    let r = check_cocycle(g, lambda)?;
    if r.is_zero() {
        Ok(())
    } else {
        Err(Error::NonCocycleInput {
            residual: r.to_string(),
        })
    }
}

/// Exact gradient `dF(v)` as a covector.
pub fn differential(f: &Polynomial, v: &[Rational]) -> Result<Vec<Rational>> {
    check_dim(f.nvars(), v.len())?;
    f.gradient().iter().map(|d| d.eval(v)).collect()
}

pub fn pbracket(f: &Polynomial, g: &Polynomial, p: &PoissonStructure) -> Result<Polynomial> {
    p.check_poly(f)?;
    p.check_poly(g)?;
    let n = p.n;
    let df = f.gradient();
    let dg = g.gradient();
    let mut out = Polynomial::zero(n);
    for i in 0..n {
        if df[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if dg[j].is_zero() {
                continue;
            }
            let pij = p.tensor_entry(i, j);
            if pij.is_zero() {
                continue;
            }
            out = &out + &(&(&df[i] * &dg[j]) * &pij);
        }
    }
    Ok(out)
}

/// A polynomial vector field; component `i` is the `x_i`-component.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField {
    pub components: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn zero(n: usize) -> Self {
        PolyVectorField {
            components: vec![Polynomial::zero(n); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn eval(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(v)).collect()
    }

    /// Derivation `F ↦ dF · X`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim(), f.nvars())?;
        let mut out = Polynomial::zero(f.nvars());
        for (i, c) in self.components.iter().enumerate() {
            let d = f.derivative(i);
            if !d.is_zero() && !c.is_zero() {
                out = &out + &(&d * c);
            }
        }
        Ok(out)
    }

    /// `[X, Y]^i = X(Y^i) - Y(X^i)`.
    pub fn lie_bracket(&self, other: &PolyVectorField) -> Result<PolyVectorField> {
        check_dim(self.dim(), other.dim())?;
        let components = (0..self.dim())
            .map(|i| Ok(&self.apply(&other.components[i])? - &other.apply(&self.components[i])?))
            .collect::<Result<_>>()?;
        Ok(PolyVectorField { components })
    }

    pub fn scale_by(&self, f: &Polynomial) -> PolyVectorField {
        PolyVectorField {
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &PolyVectorField) -> Result<PolyVectorField> {
        check_dim(self.dim(), other.dim())?;
        Ok(PolyVectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn to_f64(&self) -> Vec<FloatPoly> {
        self.components.iter().map(Polynomial::to_f64).collect()
    }
}

/// `X_H(v) = (dH(v))♯ - (ad₀ dH(v))* v`, built from the sharp map and the
/// coadjoint action of `V_*` on `V`.
pub fn hamiltonian_field(h: &Polynomial, p: &PoissonStructure) -> Result<PolyVectorField> {
    p.check_poly(h)?;
    let n = p.n;
    let dh = h.gradient();
    let mut components = vec![Polynomial::zero(n); n];
    if let Some(s) = &p.sharp_map {
        for (i, comp) in components.iter_mut().enumerate() {
            for (j, dj) in dh.iter().enumerate() {
                if !s[i][j].is_zero() {
                    comp.add_scaled(dj, &s[i][j]);
                }
            }
        }
    }
    if let Some(g) = &p.bracket0 {
        // <e_i, -(ad₀ α)* v> = -<[α, e_i]₀, v> = Σ_jk α_j c_ijk v_k
        for (i, comp) in components.iter_mut().enumerate() {
            for (j, dj) in dh.iter().enumerate() {
                if dj.is_zero() {
                    continue;
                }
                let mut coadj = Polynomial::zero(n);
                for k in 0..n {
                    let c = g.constant(i, j, k);
                    if !c.is_zero() {
                        coadj.add_term(crate::poly::Monomial::var(n, k), c.clone());
                    }
                }
                if !coadj.is_zero() {
                    *comp = &*comp + &(dj * &coadj);
                }
            }
        }
    }
    Ok(PolyVectorField { components })
}

pub fn jacobiator(
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    p: &PoissonStructure,
) -> Result<Polynomial> {
    let a = pbracket(f, &pbracket(g, h, p)?, p)?;
    let b = pbracket(g, &pbracket(h, f, p)?, p)?;
    let c = pbracket(h, &pbracket(f, g, p)?, p)?;
    Ok(&(&a + &b) + &c)
}

/// `{F, GH} - {F, G}H - G{F, H}`.
pub fn leibniz_check(
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    p: &PoissonStructure,
) -> Result<Polynomial> {
    let lhs = pbracket(f, &(g * h), p)?;
    let a = &pbracket(f, g, p)? * h;
    let b = g * &pbracket(f, h, p)?;
    Ok(&(&lhs - &a) - &b)
}

/// `ω_p(X_F(p), X_G(p)) = {F, G}(p)`. When `probes` is non-empty, every pair
/// of functions in `probes ∪ {F, G}` with equal Hamiltonian vectors at `p`
/// must pair identically with all others, else a witness is returned.
pub fn characteristic_form(
    point: &[Rational],
    f: &Polynomial,
    g: &Polynomial,
    p: &PoissonStructure,
    probes: &[Polynomial],
) -> Result<Rational> {
    check_dim(p.n, point.len())?;
    let value = pbracket(f, g, p)?.eval(point)?;
    if probes.is_empty() {
        return Ok(value);
    }
    let mut all: Vec<&Polynomial> = vec![f, g];
    all.extend(probes.iter());
    let vectors = all
        .iter()
        .map(|q| hamiltonian_field(q, p)?.eval(point))
        .collect::<Result<Vec<_>>>()?;
    for a in 0..all.len() {
        for b in (a + 1)..all.len() {
            if vectors[a] != vectors[b] {
                continue;
            }
            for c in &all {
                let va = pbracket(all[a], c, p)?.eval(point)?;
                let vb = pbracket(all[b], c, p)?.eval(point)?;
                if va != vb {
                    return Err(Error::WellDefinednessWitness(format!(
                        "functions {} and {} share a Hamiltonian vector but pair to {va} and {vb} with {}",
                        all[a].display_with(Some(p.names())),
                        all[b].display_with(Some(p.names())),
                        c.display_with(Some(p.names())),
                    )));
                }
            }
        }
    }
    Ok(value)
}

/// Bracket of restrictions to the hyperplane `x_C = level`.
#[derive(Debug, Clone)]
pub struct RestrictedBracket {
    structure: PoissonStructure,
    coordinate: usize,
    level: Rational,
}

pub fn restrict_hyperplane(
    p: &PoissonStructure,
    coordinate: usize,
    level: Rational,
) -> Result<RestrictedBracket> {
    if coordinate >= p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            got: coordinate + 1,
        });
    }
    for j in 0..p.n {
        if !p.tensor_entry(coordinate, j).is_zero() {
            return Err(Error::NonCentralElement { index: coordinate });
        }
    }
    Ok(RestrictedBracket {
        structure: p.clone(),
        coordinate,
        level,
    })
}

impl RestrictedBracket {
    pub fn restrict(&self, f: &Polynomial) -> Polynomial {
        f.substitute(self.coordinate, &self.level)
    }

    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        Ok(self.restrict(&pbracket(f, g, &self.structure)?))
    }

    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    /// Pairs `(a, b)` whose bracket leaves `span(1, generators)`.
    pub closure_failures: Vec<(usize, usize)>,
    /// Indices of samples where the kernels differ.
    pub kernel_failures: Vec<usize>,
    pub samples: usize,
}

impl QuotientReport {
    pub fn passes(&self) -> bool {
        self.closure_failures.is_empty() && self.kernel_failures.is_empty()
    }
}

/// Compares the common kernel of the generator differentials with `ker q`
/// at each sample, after checking the generators close under the bracket.
pub fn quotient_check(
    p: &PoissonStructure,
    q: &RMatrix,
    generators: &[Polynomial],
    samples: &[Vec<Rational>],
) -> Result<QuotientReport> {
    for row in q {
        check_dim(p.n, row.len())?;
    }
    for f in generators {
        p.check_poly(f)?;
    }
    let mut closure_failures = Vec::new();
    for a in 0..generators.len() {
        for b in (a + 1)..generators.len() {
            let br = pbracket(&generators[a], &generators[b], p)?;
            if !in_span(&br, generators) {
                closure_failures.push((a, b));
            }
        }
    }
    let mut kernel_failures = Vec::new();
    for (s, m) in samples.iter().enumerate() {
        let rows = generators
            .iter()
            .map(|f| differential(f, m))
            .collect::<Result<Vec<_>>>()?;
        if !linalg::common_kernel_equals(&rows, q, p.n) {
            kernel_failures.push(s);
        }
    }
    Ok(QuotientReport {
        closure_failures,
        kernel_failures,
        samples: samples.len(),
    })
}

/// Is `f` in `span(1, basis)`?
fn in_span(f: &Polynomial, basis: &[Polynomial]) -> bool {
    if f.is_zero() {
        return true;
    }
    let n = f.nvars();
    let mut columns: Vec<Polynomial> = vec![Polynomial::one(n)];
    columns.extend(basis.iter().cloned());
    let mut monomials: Vec<_> = f.terms().map(|(m, _)| m.clone()).collect();
    for c in &columns {
        monomials.extend(c.terms().map(|(m, _)| m.clone()));
    }
    monomials.sort();
    monomials.dedup();
    let rows: RMatrix = monomials
        .iter()
        .map(|m| columns.iter().map(|c| c.coefficient(m)).collect())
        .collect();
    let rhs: Vec<Rational> = monomials.iter().map(|m| f.coefficient(m)).collect();
    linalg::solve(&rows, &rhs).is_some()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub names: Vec<String>,
    pub monitor_names: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub monitors: Vec<Vec<f64>>,
}

impl Trajectory {
    /// Largest `|C(t) - C(0)|` for monitor `k`.
    pub fn drift(&self, k: usize) -> f64 {
        let c0 = self.monitors[0][k];
        self.monitors
            .iter()
            .map(|m| (m[k] - c0).abs())
            .fold(0.0, f64::max)
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// CSV with header `step,t,x1..xn,monitors...`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,t");
        for name in self.names.iter().chain(&self.monitor_names) {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (step, ((t, x), m)) in self
            .times
            .iter()
            .zip(&self.states)
            .zip(&self.monitors)
            .enumerate()
        {
            out.push_str(&format!("{step},{}", fmt17(*t)));
            for v in x.iter().chain(m) {
                out.push(',');
                out.push_str(&fmt17(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Full-precision decimal form (17 significant digits).
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Classical fixed-step RK4 on `X_H` evaluated in double precision.
pub fn rk4_flow(
    h_fn: &Polynomial,
    p: &PoissonStructure,
    v0: &[f64],
    h: f64,
    steps: usize,
    monitors: &[(String, Polynomial)],
) -> Result<Trajectory> {
    check_dim(p.n, v0.len())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {h} must be positive")));
    }
    let field = hamiltonian_field(h_fn, p)?.to_f64();
    let mons: Vec<FloatPoly> = monitors
        .iter()
        .map(|(_, m)| {
            p.check_poly(m)?;
            Ok(m.to_f64())
        })
        .collect::<Result<_>>()?;
    let eval = |x: &[f64]| -> Vec<f64> { field.iter().map(|c| c.eval(x)).collect() };
    let observe = |x: &[f64]| -> Vec<f64> { mons.iter().map(|m| m.eval(x)).collect() };

    let mut x = v0.to_vec();
    let mut traj = Trajectory {
        names: p.names.clone(),
        monitor_names: monitors.iter().map(|(n, _)| n.clone()).collect(),
        times: vec![0.0],
        states: vec![x.clone()],
        monitors: vec![observe(&x)],
    };
    let axpy = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    for step in 1..=steps {
        let k1 = eval(&x);
        let k2 = eval(&axpy(&x, &k1, h / 2.0));
        let k3 = eval(&axpy(&x, &k2, h / 2.0));
        let k4 = eval(&axpy(&x, &k3, h));
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        traj.times.push(step as f64 * h);
        traj.monitors.push(observe(&x));
        traj.states.push(x.clone());
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{central_extension, unit, BilinearForm};
    use crate::poly::parse_polynomial;
    use crate::rational::{frac, int};

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n, &[]).unwrap()
    }

    fn kks() -> PoissonStructure {
        PoissonStructure::linear(LieAlgebra::so3()).unwrap()
    }

    fn plane() -> PoissonStructure {
        PoissonStructure::constant(TwoCocycle::from_pairs(2, &[(0, 1, int(1))]).unwrap()).unwrap()
    }

    /// Λ(X, Y) = κ(ad(e3) X, Y) with κ = I.
    fn loop_style_so3() -> PoissonStructure {
        let g = LieAlgebra::so3();
        let d = g.ad(&unit(3, 2)).unwrap();
        let l = TwoCocycle::from_form_derivation(&BilinearForm::identity(3), &d).unwrap();
        PoissonStructure::affine(g, l).unwrap()
    }

    #[test]
    fn differentials() {
        let v = vec![int(3), int(5), int(0)];
        assert_eq!(differential(&poly("x1", 3), &v).unwrap(), vec![int(1), int(0), int(0)]);
        assert_eq!(differential(&poly("x1*x2", 3), &v).unwrap(), vec![int(5), int(3), int(0)]);
        assert!(differential(&poly("1", 3), &v).unwrap().iter().all(Zero::is_zero));
        assert!(differential(&poly("x1", 3), &v[..2]).is_err());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(pbracket(&poly("x1", 3), &poly("x2", 3), &kks()).unwrap(), poly("x3", 3));
        assert_eq!(pbracket(&poly("x1", 2), &poly("x2", 2), &plane()).unwrap(), poly("1", 2));

        let ab = PoissonStructure::affine(
            LieAlgebra::abelian(2),
            TwoCocycle::from_pairs(2, &[(0, 1, int(1))]).unwrap(),
        )
        .unwrap();
        assert_eq!(pbracket(&poly("x1", 2), &poly("x2", 2), &ab).unwrap(), poly("1", 2));

        // Λ(e1, e2) = <[e3, e1], e2> = <e2, e2> = 1
        let p = loop_style_so3();
        assert_eq!(p.lambda().unwrap().entry(0, 1), &int(1));
        assert_eq!(pbracket(&poly("x1", 3), &poly("x2", 3), &p).unwrap(), poly("x3 + 1", 3));
    }

    #[test]
    fn hamiltonian_field_examples() {
        let x = hamiltonian_field(&poly("x1", 3), &kks()).unwrap();
        assert_eq!(x.components, vec![poly("0", 3), poly("-x3", 3), poly("x2", 3)]);

        // e1♯ = e2 when Λ(e2, e1) = 1
        let swapped =
            PoissonStructure::constant(TwoCocycle::from_pairs(2, &[(1, 0, int(1))]).unwrap())
                .unwrap();
        let x = hamiltonian_field(&poly("x1", 2), &swapped).unwrap();
        assert_eq!(x.components, vec![poly("0", 2), poly("1", 2)]);

        assert!(hamiltonian_field(&poly("1", 3), &kks()).unwrap().is_zero());
    }

    #[test]
    fn jacobiator_examples() {
        let (a, b, c) = (poly("x1", 3), poly("x2", 3), poly("x3", 3));
        assert!(jacobiator(&a, &b, &c, &kks()).unwrap().is_zero());

        // Λ(e1, e4) = 1 alone on so(3) + R: cyclic sum at (e2, e3, e4) is 1.
        let u2 = LieAlgebra::so3_plus_center();
        let bad = TwoCocycle::from_pairs(4, &[(0, 3, int(1))]).unwrap();
        assert!(PoissonStructure::affine(u2.clone(), bad.clone()).is_err());
        let p = PoissonStructure::affine_unchecked(u2, bad);
        let j = jacobiator(&poly("x2", 4), &poly("x3", 4), &poly("x4", 4), &p).unwrap();
        assert!(j.is_constant() && !j.is_zero());
        assert_eq!(crate::rational::abs(&j.constant_term()), int(1));

        // On so(3) alone every antisymmetric Λ is a cocycle.
        let lone = TwoCocycle::from_pairs(3, &[(0, 1, int(1))]).unwrap();
        let p = PoissonStructure::affine(LieAlgebra::so3(), lone).unwrap();
        assert!(jacobiator(&a, &b, &c, &p).unwrap().is_zero());

        let f = poly("x1^2 + x2*x3", 3);
        assert!(jacobiator(&f, &f, &c, &loop_style_so3()).unwrap().is_zero());
    }

    #[test]
    fn leibniz_examples() {
        let p = kks();
        let f = poly("x1^3 - 2*x2*x3 + 1/3", 3);
        let g = poly("x2^2*x1 + x3", 3);
        let h = poly("5/2*x3^3 - x1", 3);
        assert!(leibniz_check(&f, &g, &h, &p).unwrap().is_zero());
        let q = plane();
        assert!(leibniz_check(&poly("x1", 2), &poly("x2", 2), &poly("x1", 2), &q)
            .unwrap()
            .is_zero());
        assert!(leibniz_check(&poly("1", 3), &f, &g, &p).unwrap().is_zero());
    }

    #[test]
    fn characteristic_form_examples() {
        let p = kks();
        let pt = vec![int(0), int(0), int(5)];
        let probes = vec![poly("x3", 3), poly("x1 + x3^2", 3), poly("7", 3)];
        let v = characteristic_form(&pt, &poly("x1", 3), &poly("x2", 3), &p, &probes).unwrap();
        assert_eq!(v, int(5));
        let f = poly("x1*x2", 3);
        assert!(characteristic_form(&pt, &f, &f, &p, &[]).unwrap().is_zero());
    }

    #[test]
    fn coadjoint_form_identity() {
        // ω_α(α∘ad X, α∘ad Y) = α([X, Y]) with X_{H_X}(α) = -α∘ad X.
        let g = LieAlgebra::so3();
        let p = kks();
        let alpha = vec![frac(1, 2), int(-3), frac(7, 5)];
        let x = vec![int(2), frac(1, 3), int(-1)];
        let y = vec![int(0), int(4), frac(-2, 7)];
        let (hx, hy) = (Polynomial::linear(&x), Polynomial::linear(&y));
        let field = hamiltonian_field(&hx, &p).unwrap().eval(&alpha).unwrap();
        for (k, fk) in field.iter().enumerate() {
            let ad = g.bracket(&x, &unit(3, k)).unwrap();
            assert_eq!(fk, &-linalg::dot(&alpha, &ad));
        }
        let lhs = characteristic_form(&alpha, &hx, &hy, &p, &[]).unwrap();
        assert_eq!(lhs, linalg::dot(&alpha, &g.bracket(&x, &y).unwrap()));
    }

    #[test]
    fn hyperplane_restriction() {
        let ab = LieAlgebra::abelian(2);
        let w = TwoCocycle::from_pairs(2, &[(0, 1, int(1))]).unwrap();
        let heis = central_extension(&ab, &w).unwrap().extended;
        let p = PoissonStructure::linear(heis).unwrap();
        let (x, y) = (poly("x2", 3), poly("x3", 3));

        let r1 = restrict_hyperplane(&p, 0, int(1)).unwrap();
        assert_eq!(r1.bracket(&x, &y).unwrap(), poly("1", 3));

        let vanishing = poly("(x1 - 1)*x2", 3);
        assert!(r1.restrict(&vanishing).is_zero());
        for g in [poly("x3", 3), poly("x2*x3^2 + x1", 3), poly("x3^4", 3)] {
            assert!(r1.bracket(&vanishing, &g).unwrap().is_zero());
        }

        let r0 = restrict_hyperplane(&p, 0, int(0)).unwrap();
        assert!(r0.bracket(&x, &y).unwrap().is_zero());

        assert_eq!(
            restrict_hyperplane(&kks(), 0, int(1)).unwrap_err(),
            Error::NonCentralElement { index: 0 }
        );
    }

    #[test]
    fn quotient_examples() {
        // V = so(3)* ⊕ so(3), q = projection onto the first factor.
        let g = LieAlgebra::so3().direct_sum(&LieAlgebra::abelian(3));
        let p = PoissonStructure::linear(g).unwrap();
        let mut q = linalg::zeros(3, 6);
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = int(1);
        }
        let gens: Vec<_> = (0..3).map(|i| p.var(i)).collect();
        let samples = vec![
            vec![int(1), int(2), int(3), int(4), int(5), int(6)],
            vec![frac(1, 2), int(0), int(-1), int(0), int(0), int(9)],
        ];
        assert!(quotient_check(&p, &q, &gens, &samples).unwrap().passes());

        let all: Vec<_> = (0..6).map(|i| p.var(i)).collect();
        assert!(quotient_check(&p, &linalg::identity(6), &all, &samples).unwrap().passes());

        let r = quotient_check(&plane(), &linalg::identity(2), &[poly("x1", 2)], &[vec![int(0), int(0)]])
            .unwrap();
        assert_eq!(r.kernel_failures, vec![0]);

        let not_closed = quotient_check(&kks(), &linalg::identity(3), &[poly("x1", 3), poly("x2", 3)], &[])
            .unwrap();
        assert_eq!(not_closed.closure_failures, vec![(0, 1)]);
    }

    #[test]
    fn flow_examples() {
        let p = kks();
        let c = ("C".to_string(), poly("x1^2 + x2^2 + x3^2", 3));
        let still = rk4_flow(&poly("1/2*x1^2 + 1/2*x2^2 + 1/2*x3^2", 3), &p, &[0.3, -1.0, 2.0], 0.01, 50, &[])
            .unwrap();
        assert!(still.states.iter().all(|s| s == &vec![0.3, -1.0, 2.0]));

        let rot = rk4_flow(&poly("x3", 3), &p, &[1.0, 0.0, 0.0], 1e-3, 10_000, &[c]).unwrap();
        assert!(rot.drift(0) < 1e-10);
        let end = rot.last();
        // X_{x3}(v) = (-v2, v1, 0): rotation by t about e3.
        assert!((end[0] - 10f64.cos()).abs() < 1e-10);
        assert!((end[1] - 10f64.sin()).abs() < 1e-10);

        let zero = rk4_flow(&Polynomial::zero(3), &p, &[1.0, 2.0, 3.0], 0.1, 5, &[]).unwrap();
        assert_eq!(zero.last(), &[1.0, 2.0, 3.0]);

        assert!(rk4_flow(&poly("x3", 3), &p, &[1.0, 0.0, 0.0], 0.0, 1, &[]).is_err());
        // x1' = x1^2 blows up at t = 1
        let blow = rk4_flow(&poly("x1^2*x2", 2), &plane(), &[1.0, 1.0], 0.1, 200, &[]);
        assert!(matches!(blow, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn csv_layout() {
        let p = kks();
        let t = rk4_flow(&poly("x3", 3), &p, &[1.0, 0.0, 0.0], 0.5, 1, &[("C".into(), poly("x1", 3))])
            .unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "step,t,x1,x2,x3,C");
        assert!(lines.next().unwrap().starts_with("0,0.0000000000000000e0,1.0000000000000000e0"));
    }

    #[test]
    fn sharp_map_is_validated() {
        let p = plane();
        let l = p.lambda().unwrap().matrix().clone();
        assert!(p.clone().with_sharp_map(l).is_ok());
        assert!(p.with_sharp_map(linalg::identity(2)).is_err());
    }
}
