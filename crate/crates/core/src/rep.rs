//! Faithful matrix representations used for group-level computations.
//!
//! A representation stores one double-precision matrix per basis element of
//! its Lie algebra. Group elements are plain `DMatrix<f64>` values in the
//! image of `exp`.

use nalgebra::DMatrix;

use crate::algebra::LieAlgebra;
use crate::error::{check_dim, Error, Result};

/// Homomorphism residual allowed when validating supplied generator tables.
pub const HOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    name: String,
    algebra: LieAlgebra,
    generators: Vec<DMatrix<f64>>,
    orthogonal: bool,
    gram_inv: DMatrix<f64>,
}

impl Representation {
    /// Validates `[rho(e_i), rho(e_j)] = sum_k c_ijk rho(e_k)` and linear
    /// independence of the generators. `orthogonal` means the generators are
    /// skew, so the group lies in `O(m)` and reprojection applies.
    pub fn from_generators(
        name: &str,
        algebra: LieAlgebra,
        generators: Vec<DMatrix<f64>>,
        orthogonal: bool,
    ) -> Result<Self> {
        check_dim(algebra.dim(), generators.len())?;
        let m = generators.first().map_or(0, |g| g.nrows());
        if generators.iter().any(|g| g.nrows() != m || g.ncols() != m) {
            return Err(Error::Representation(format!(
                "{name}: generators must all be {m}x{m}"
            )));
        }
        let n = algebra.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = &generators[i] * &generators[j] - &generators[j] * &generators[i];
                let mut rhs = DMatrix::zeros(m, m);
                for (k, gk) in generators.iter().enumerate() {
                    rhs += gk * algebra.constant_f64(i, j, k);
                }
                let r = (lhs - rhs).amax();
                if r > HOM_TOL {
                    return Err(Error::Representation(format!(
                        "{name}: bracket of generators {i},{j} off by {r:e}"
                    )));
                }
            }
            if orthogonal && (&generators[i] + generators[i].transpose()).amax() > HOM_TOL {
                return Err(Error::Representation(format!(
                    "{name}: generator {i} is not skew"
                )));
            }
        }
        let gram = DMatrix::from_fn(n, n, |i, j| generators[i].dot(&generators[j]));
        let gram_inv = gram.try_inverse().ok_or_else(|| {
            Error::Representation(format!("{name}: generators are linearly dependent"))
        })?;
        Ok(Representation {
            name: name.to_string(),
            algebra,
            generators,
            orthogonal,
            gram_inv,
        })
    }

    /// `SO(2)` on the one-dimensional algebra, generator `J = [[0,-1],[1,0]]`.
    pub fn so2() -> Self {
        let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        Self::from_generators("so2", LieAlgebra::abelian(1), vec![j], true)
            .expect("J spans so(2)")
    }

    /// `SO(3)` via `(e_i)_jk = -eps_ijk`.
    pub fn so3() -> Self {
        let gens = (0..3)
            .map(|i| DMatrix::from_fn(3, 3, |j, k| -levi_civita(i, j, k)))
            .collect();
        Self::from_generators("so3", LieAlgebra::so3(), gens, true).expect("hat map is a rep")
    }

    /// `SU(2)` as unit quaternions acting on `R^4` by left multiplication;
    /// `e_m` maps to left multiplication by `i/2`, `j/2`, `k/2`. The algebra has
    /// the so(3) constants, and `exp(2 pi e_m) = -1`.
    pub fn su2() -> Self {
        #[rustfmt::skip]
        let li = [0.0, -1.0, 0.0, 0.0,
                  1.0, 0.0, 0.0, 0.0,
                  0.0, 0.0, 0.0, -1.0,
                  0.0, 0.0, 1.0, 0.0];
        #[rustfmt::skip]
        let lj = [0.0, 0.0, -1.0, 0.0,
                  0.0, 0.0, 0.0, 1.0,
                  1.0, 0.0, 0.0, 0.0,
                  0.0, -1.0, 0.0, 0.0];
        #[rustfmt::skip]
        let lk = [0.0, 0.0, 0.0, -1.0,
                  0.0, 0.0, -1.0, 0.0,
                  0.0, 1.0, 0.0, 0.0,
                  1.0, 0.0, 0.0, 0.0];
        let gens = [li, lj, lk]
            .iter()
            .map(|m| DMatrix::from_row_slice(4, 4, m) * 0.5)
            .collect();
        Self::from_generators("su2", LieAlgebra::so3(), gens, true)
            .expect("quaternion units give a rep")
    }

    /// `U(2) = SU(2)·U(1)` on `R^4`: the `SU(2)` generators plus right
    /// multiplication by the quaternion `i`, which commutes with them.
    /// The algebra is `so(3) ⊕ R` with the center last.
    pub fn u2() -> Self {
        #[rustfmt::skip]
        let ri = [0.0, -1.0, 0.0, 0.0,
                  1.0, 0.0, 0.0, 0.0,
                  0.0, 0.0, 0.0, 1.0,
                  0.0, 0.0, -1.0, 0.0];
        let mut gens = Self::su2().generators;
        gens.push(DMatrix::from_row_slice(4, 4, &ri));
        Self::from_generators("u2", LieAlgebra::so3_plus_center(), gens, true)
            .expect("right multiplication commutes with left multiplication")
    }

    /// The torus `SO(2) × SO(2)` on `R^4`, abelian algebra of dimension 2.
    pub fn torus2() -> Self {
        let mut a = DMatrix::zeros(4, 4);
        a[(1, 0)] = 1.0;
        a[(0, 1)] = -1.0;
        let mut b = DMatrix::zeros(4, 4);
        b[(3, 2)] = 1.0;
        b[(2, 3)] = -1.0;
        Self::from_generators("torus2", LieAlgebra::abelian(2), vec![a, b], true)
            .expect("commuting rotation blocks")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "so2" | "so(2)" => Ok(Self::so2()),
            "so3" | "so(3)" => Ok(Self::so3()),
            "su2" | "su(2)" => Ok(Self::su2()),
            "u2" | "u(2)" => Ok(Self::u2()),
            "torus2" | "t2" => Ok(Self::torus2()),
            other => Err(Error::Representation(format!("unknown built-in group {other:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn matrix_dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.nrows())
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    pub fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.matrix_dim(), self.matrix_dim())
    }

    pub fn to_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.algebra.dim(), x.len())?;
        let m = self.matrix_dim();
        let mut out = DMatrix::zeros(m, m);
        for (g, &c) in self.generators.iter().zip(x) {
            if c != 0.0 {
                out += g * c;
            }
        }
        Ok(out)
    }

    /// Least-squares coordinates of a matrix in the span of the generators
    /// (Frobenius inner product).
    pub fn coords(&self, m: &DMatrix<f64>) -> Result<Vec<f64>> {
        self.check_square(m)?;
        let b = nalgebra::DVector::from_iterator(
            self.generators.len(),
            self.generators.iter().map(|g| g.dot(m)),
        );
        Ok((&self.gram_inv * b).iter().copied().collect())
    }

    pub fn exp(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(self.to_matrix(x)?.exp())
    }

    pub fn inverse(&self, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_square(g)?;
        if self.orthogonal {
            Ok(g.transpose())
        } else {
            g.clone()
                .try_inverse()
                .ok_or_else(|| Error::Representation("group element is singular".into()))
        }
    }

    /// `Ad_g x = g x g^-1`, in algebra coordinates.
    pub fn adjoint(&self, g: &DMatrix<f64>, x: &[f64]) -> Result<Vec<f64>> {
        let gx = g * self.to_matrix(x)? * self.inverse(g)?;
        self.coords(&gx)
    }

    /// Nearest orthogonal matrix (polar factor `U V^T`); identity map for
    /// non-orthogonal representations.
    pub fn reproject(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        if !self.orthogonal {
            return g.clone();
        }
        let svd = g.clone().svd(true, true);
        match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => u * v_t,
            _ => g.clone(),
        }
    }

    /// `|g^T g - 1|_max` for orthogonal representations, 0 otherwise.
    pub fn group_residual(&self, g: &DMatrix<f64>) -> f64 {
        if !self.orthogonal {
            return 0.0;
        }
        (g.transpose() * g - self.identity()).amax()
    }

    fn check_square(&self, m: &DMatrix<f64>) -> Result<()> {
        let d = self.matrix_dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Representation(format!(
                "expected {d}x{d} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}
