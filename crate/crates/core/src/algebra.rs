//! Finite-dimensional Lie algebras with exact structure constants, together
//! with invariant forms, derivations, 2-cocycles and central extensions.
//!
//! Conventions: `[e_i, e_j] = sum_k c[i][j][k] e_k`; a matrix `M` of a linear
//! endomorphism sends `e_j` to `sum_i M[i][j] e_i`; a bilinear form or cocycle
//! matrix stores `B(e_i, e_j)` at `[i][j]`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, RMatrix};
use crate::rational::{self, Rational, RationalText};
use crate::rep::Representation;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    basis: Vec<String>,
    c: Vec<Rational>,
    c_f64: Vec<f64>,
}

impl LieAlgebra {
    /// Builds an algebra from a full table `c[i][j][k]`. No symmetrization is
    /// applied; call [`LieAlgebra::validate_lie`] to diagnose bad tables.
    pub fn new(basis: Vec<String>, constants: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let dim = basis.len();
        check_dim(dim, constants.len())?;
        let mut c = Vec::with_capacity(dim * dim * dim);
        for plane in &constants {
            check_dim(dim, plane.len())?;
            for row in plane {
                check_dim(dim, row.len())?;
                c.extend(row.iter().cloned());
            }
        }
        Ok(Self::from_flat(basis, c))
    }

    /// Builds an algebra from sparse `(i, j, k, value)` entries; entries not
    /// listed are zero. Both `(i, j, k)` and `(j, i, k)` must be supplied.
    pub fn from_entries(
        basis: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let dim = basis.len();
        let mut c = vec![Rational::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: i.max(j).max(k) + 1,
                });
            }
            c[(i * dim + j) * dim + k] = v;
        }
        Ok(Self::from_flat(basis, c))
    }

    fn from_flat(basis: Vec<String>, c: Vec<Rational>) -> Self {
        let c_f64 = c.iter().map(rational::to_f64).collect();
        LieAlgebra {
            dim: basis.len(),
            basis,
            c,
            c_f64,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        let basis = (1..=dim).map(|i| format!("e{i}")).collect();
        Self::from_flat(basis, vec![Rational::zero(); dim * dim * dim])
    }

    /// so(3) with `[e1,e2]=e3`, `[e2,e3]=e1`, `[e3,e1]=e2`.
    pub fn so3() -> Self {
        let one = rational::one;
        let entries = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
            .into_iter()
            .flat_map(|(i, j, k)| [(i, j, k, one()), (j, i, k, -one())]);
        let basis = ["e1", "e2", "e3"].map(String::from).to_vec();
        Self::from_entries(basis, entries).expect("so(3) table is well-formed")
    }

    /// Three-dimensional Heisenberg algebra `[p, q] = z` (basis `z, p, q`).
    pub fn heisenberg() -> Self {
        let basis = ["z", "p", "q"].map(String::from).to_vec();
        Self::from_entries(
            basis,
            [(1, 2, 0, rational::one()), (2, 1, 0, -rational::one())],
        )
        .expect("heisenberg table is well-formed")
    }

    /// `self ⊕ other`, basis of `self` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    entries.push((i, j, k, self.constant(i, j, k).clone()));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    entries.push((n + i, n + j, n + k, other.constant(i, j, k).clone()));
                }
            }
        }
        Self::from_entries(basis, entries).expect("indices in range")
    }

    /// `so(3) ⊕ R` with the central direction last (`e4`).
    pub fn so3_plus_center() -> Self {
        let mut center = LieAlgebra::abelian(1);
        center.basis = vec!["e4".to_string()];
        Self::so3().direct_sum(&center)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constant_f64(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c_f64[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim).map(|k| self.constant(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn bracket_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let w = x[i] * y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.constant_f64(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `ad x`.
    pub fn ad(&self, x: &[Rational]) -> Result<LinearEndo> {
        check_dim(self.dim, x.len())?;
        let mut m = linalg::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &unit(self.dim, j))?;
            for (i, v) in col.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        Ok(LinearEndo {
            matrix: m,
            kind: EndoKind::Derivation,
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Antisymmetry violations and Jacobi residuals, all exact.
    pub fn validate_lie(&self) -> LieReport {
        let n = self.dim;
        let mut antisymmetry = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = self.constant(i, j, k) + self.constant(j, i, k);
                    if !s.is_zero() && (i <= j) {
                        antisymmetry.push(Residual::new(vec![i, j, k], s));
                    }
                }
            }
        }
        let mut jacobi = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += self.constant(i, j, m) * self.constant(m, k, l);
                            s += self.constant(j, k, m) * self.constant(m, i, l);
                            s += self.constant(k, i, m) * self.constant(m, j, l);
                        }
                        if !s.is_zero() {
                            jacobi.push(Residual::new(vec![i, j, k, l], s));
                        }
                    }
                }
            }
        }
        LieReport {
            antisymmetry,
            jacobi,
        }
    }

    pub fn to_wire(&self) -> AlgebraWire {
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.constant(i, j, k);
                    if !v.is_zero() {
                        brackets.push((i, j, k, RationalText::Text(v.to_string())));
                    }
                }
            }
        }
        AlgebraWire {
            dim: n,
            basis: Some(self.basis.clone()),
            brackets,
        }
    }

    pub fn from_wire(wire: &AlgebraWire) -> Result<Self> {
        let basis = match &wire.basis {
            Some(b) => {
                check_dim(wire.dim, b.len())?;
                b.clone()
            }
            None => (1..=wire.dim).map(|i| format!("e{i}")).collect(),
        };
        let entries = wire
            .brackets
            .iter()
            .map(|(i, j, k, v)| Ok((*i, *j, *k, v.clone().into_rational()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(basis, entries)
    }
}

/// `{ "dim": n, "basis": [...], "brackets": [[i, j, k, "p/q"], ...] }`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraWire {
    pub dim: usize,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, RationalText)>,
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = rational::one();
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub indices: Vec<usize>,
    pub value: Rational,
}

impl Residual {
    pub fn new(indices: Vec<usize>, value: Rational) -> Self {
        Residual { indices, value }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidualWire {
    pub at: Vec<usize>,
    pub value: String,
}

/// JSON shape `{ "check": name, "status": "pass"|"fail", "residuals": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckReportWire {
    pub check: String,
    pub status: String,
    pub residuals: Vec<ResidualWire>,
}

impl CheckReportWire {
    pub fn from_residuals(check: &str, residuals: &[Residual]) -> Self {
        CheckReportWire {
            check: check.to_string(),
            status: if residuals.is_empty() { "pass" } else { "fail" }.to_string(),
            residuals: residuals
                .iter()
                .map(|r| ResidualWire {
                    at: r.indices.clone(),
                    value: r.value.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieReport {
    pub antisymmetry: Vec<Residual>,
    pub jacobi: Vec<Residual>,
}

impl LieReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }

    pub fn to_wire(&self) -> Vec<CheckReportWire> {
        vec![
            CheckReportWire::from_residuals("antisymmetry", &self.antisymmetry),
            CheckReportWire::from_residuals("jacobi", &self.jacobi),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FormFlags {
    pub symmetric: bool,
    pub nondegenerate: bool,
    pub invariant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    matrix: RMatrix,
    flags: FormFlags,
}

impl BilinearForm {
    /// Flags `symmetric` and `nondegenerate` are computed; `invariant` is
    /// only known relative to an algebra, see [`BilinearForm::for_algebra`].
    pub fn new(matrix: RMatrix) -> Result<Self> {
        let n = matrix.len();
        for row in &matrix {
            check_dim(n, row.len())?;
        }
        let symmetric = matrix == linalg::transpose(&matrix);
        let nondegenerate = linalg::rank(&matrix) == n;
        Ok(BilinearForm {
            matrix,
            flags: FormFlags {
                symmetric,
                nondegenerate,
                invariant: false,
            },
        })
    }

    pub fn for_algebra(g: &LieAlgebra, matrix: RMatrix) -> Result<Self> {
        let mut form = Self::new(matrix)?;
        form.flags.invariant = check_form_invariance(g, &form)?.is_zero();
        Ok(form)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(linalg::identity(n)).expect("square")
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = linalg::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[i][i] = v.clone();
        }
        Self::new(m).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn flags(&self) -> FormFlags {
        self.flags
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let my = linalg::mat_vec(&self.matrix, y);
        linalg::dot(x, &my)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(rational::to_f64).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndoKind {
    Derivation,
    AdjointDual,
    Generic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearEndo {
    pub matrix: RMatrix,
    pub kind: EndoKind,
}

impl LinearEndo {
    pub fn new(matrix: RMatrix, kind: EndoKind) -> Result<Self> {
        let n = matrix.len();
        for row in &matrix {
            check_dim(n, row.len())?;
        }
        Ok(LinearEndo { matrix, kind })
    }

    pub fn zero(n: usize) -> Self {
        LinearEndo {
            matrix: linalg::zeros(n, n),
            kind: EndoKind::Generic,
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearEndo {
            matrix: linalg::identity(n),
            kind: EndoKind::Generic,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.matrix, x)
    }

    /// Dual map on coordinates of the dual space: `(D* a)(x) = a(D x)`.
    pub fn dual(&self) -> LinearEndo {
        LinearEndo {
            matrix: linalg::transpose(&self.matrix),
            kind: EndoKind::AdjointDual,
        }
    }
}

/// Largest `|k([x,y],z) + k(y,[x,z])|` over basis triples.
pub fn check_form_invariance(g: &LieAlgebra, kappa: &BilinearForm) -> Result<Rational> {
    let n = g.dim();
    check_dim(n, kappa.dim())?;
    let mut worst = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let xy = g.bracket_basis(i, j);
            for k in 0..n {
                let xz = g.bracket_basis(i, k);
                let r = kappa.eval(&xy, &unit(n, k)) + kappa.eval(&unit(n, j), &xz);
                if r.abs() > worst {
                    worst = r.abs();
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationReport {
    pub derivation_residual: Rational,
    pub skew_residual: Rational,
}

impl DerivationReport {
    pub fn passes(&self) -> bool {
        self.derivation_residual.is_zero() && self.skew_residual.is_zero()
    }
}

pub fn check_kappa_skew_derivation(
    g: &LieAlgebra,
    kappa: &BilinearForm,
    d: &LinearEndo,
) -> Result<DerivationReport> {
    let n = g.dim();
    check_dim(n, kappa.dim())?;
    check_dim(n, d.dim())?;
    let mut derivation_residual = Rational::zero();
    let mut skew_residual = Rational::zero();
    for i in 0..n {
        let ei = unit(n, i);
        let dei = d.apply(&ei);
        for j in 0..n {
            let ej = unit(n, j);
            let dej = d.apply(&ej);
            let lhs = d.apply(&g.bracket_basis(i, j));
            let a = g.bracket(&dei, &ej)?;
            let b = g.bracket(&ei, &dej)?;
            for k in 0..n {
                let r = (&lhs[k] - &a[k] - &b[k]).abs();
                if r > derivation_residual {
                    derivation_residual = r;
                }
            }
            let s = (kappa.eval(&dei, &ej) + kappa.eval(&ei, &dej)).abs();
            if s > skew_residual {
                skew_residual = s;
            }
        }
    }
    Ok(DerivationReport {
        derivation_residual,
        skew_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoCocycle {
    matrix: RMatrix,
}

impl TwoCocycle {
    pub fn new(matrix: RMatrix) -> Result<Self> {
        let n = matrix.len();
        for row in &matrix {
            check_dim(n, row.len())?;
        }
        Ok(TwoCocycle { matrix })
    }

    pub fn zero(n: usize) -> Self {
        TwoCocycle {
            matrix: linalg::zeros(n, n),
        }
    }

    /// Antisymmetric matrix with `w(e_i, e_j) = v`, `w(e_j, e_i) = -v`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut m = linalg::zeros(n, n);
        for (i, j, v) in pairs {
            if *i >= n || *j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: (*i).max(*j) + 1,
                });
            }
            m[*i][*j] = v.clone();
            m[*j][*i] = -v.clone();
        }
        Ok(TwoCocycle { matrix: m })
    }

    /// `w(X, Y) = k(D X, Y)`.
    pub fn from_form_derivation(kappa: &BilinearForm, d: &LinearEndo) -> Result<Self> {
        let n = kappa.dim();
        check_dim(n, d.dim())?;
        let m = (0..n)
            .map(|i| {
                let dei = d.apply(&unit(n, i));
                (0..n).map(|j| kappa.eval(&dei, &unit(n, j))).collect()
            })
            .collect();
        Ok(TwoCocycle { matrix: m })
    }

    /// `w(X, Y) = f([X, Y])`.
    pub fn coboundary(g: &LieAlgebra, f: &[Rational]) -> Result<Self> {
        let n = g.dim();
        check_dim(n, f.len())?;
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| linalg::dot(f, &g.bracket_basis(i, j)))
                    .collect()
            })
            .collect();
        Ok(TwoCocycle { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        linalg::dot(x, &linalg::mat_vec(&self.matrix, y))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }
}

/// Zero iff `w` is antisymmetric and its cyclic sum over brackets vanishes.
pub fn check_cocycle(g: &LieAlgebra, omega: &TwoCocycle) -> Result<Rational> {
    let n = g.dim();
    check_dim(n, omega.dim())?;
    let mut worst = Rational::zero();
    let mut bump = |r: Rational| {
        let a = r.abs();
        if a > worst {
            worst = a;
        }
    };
    for i in 0..n {
        for j in 0..n {
            bump(omega.entry(i, j) + omega.entry(j, i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = omega.eval(&g.bracket_basis(i, j), &unit(n, k))
                    + omega.eval(&g.bracket_basis(j, k), &unit(n, i))
                    + omega.eval(&g.bracket_basis(k, i), &unit(n, j));
                bump(r);
            }
        }
    }
    Ok(worst)
}

fn require_cocycle(g: &LieAlgebra, omega: &TwoCocycle) -> Result<()> {
    let r = check_cocycle(g, omega)?;
    if r.is_zero() {
        Ok(())
    } else {
        Err(Error::NonCocycleInput {
            residual: r.to_string(),
        })
    }
}

/// Returns `f` with `w(X, Y) = f([X, Y])` when `w` is a coboundary.
pub fn is_coboundary(g: &LieAlgebra, omega: &TwoCocycle) -> Result<Option<Vec<Rational>>> {
    require_cocycle(g, omega)?;
    let n = g.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            rows.push(g.bracket_basis(i, j));
            rhs.push(omega.entry(i, j).clone());
        }
    }
    if rows.is_empty() {
        return Ok(Some(vec![Rational::zero(); n]));
    }
    Ok(linalg::solve(&rows, &rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralExtension {
    pub base: LieAlgebra,
    pub cocycle: TwoCocycle,
    /// Basis `(c, e_1, ..., e_n)`; index 0 spans the center.
    pub extended: LieAlgebra,
}

impl CentralExtension {
    pub const CENTRAL_INDEX: usize = 0;
}

pub fn central_extension(g: &LieAlgebra, omega: &TwoCocycle) -> Result<CentralExtension> {
    require_cocycle(g, omega)?;
    Ok(extend_unchecked(g, omega))
}

/// Same bracket as [`central_extension`] without the cocycle precondition;
/// used to demonstrate that non-cocycles break the Jacobi identity.
pub fn extend_unchecked(g: &LieAlgebra, omega: &TwoCocycle) -> CentralExtension {
    let n = g.dim();
    let mut basis = vec!["c".to_string()];
    basis.extend(g.basis().iter().cloned());
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            entries.push((i + 1, j + 1, 0, omega.entry(i, j).clone()));
            for k in 0..n {
                entries.push((i + 1, j + 1, k + 1, g.constant(i, j, k).clone()));
            }
        }
    }
    let extended = LieAlgebra::from_entries(basis, entries).expect("indices in range");
    CentralExtension {
        base: g.clone(),
        cocycle: omega.clone(),
        extended,
    }
}

/// `x ↦ k(x, ·)` in dual coordinates.
pub fn flat(kappa: &BilinearForm, x: &[Rational]) -> Result<Vec<Rational>> {
    check_dim(kappa.dim(), x.len())?;
    let n = kappa.dim();
    Ok((0..n).map(|j| kappa.eval(x, &unit(n, j))).collect())
}

/// Inverse of [`flat`].
pub fn sharp(kappa: &BilinearForm, alpha: &[Rational]) -> Result<Vec<Rational>> {
    check_dim(kappa.dim(), alpha.len())?;
    if !kappa.flags().nondegenerate {
        return Err(Error::SingularForm);
    }
    let t = linalg::transpose(kappa.matrix());
    linalg::solve(&t, alpha).ok_or(Error::SingularForm)
}

/// Group 1-cocycle of the inner derivation `ad d`: `g ↦ d - Ad_g d`.
pub fn gamma_inner(
    g_mat: &nalgebra::DMatrix<f64>,
    d: &[f64],
    rep: &Representation,
) -> Result<Vec<f64>> {
    check_dim(rep.algebra().dim(), d.len())?;
    let ad = rep.adjoint(g_mat, d)?;
    Ok(d.iter().zip(ad).map(|(a, b)| a - b).collect())
}
