//! Dense complex 2×2 / 4×4 linear algebra.
//!
//! Matrices are stored row-major in fixed-size arrays. The four-level basis is
//! ordered `Θ₁ = ↑↑, Θ₂ = ↑↓, Θ₃ = ↓↑, Θ₄ = ↓↓`; in a Kronecker product the
//! first factor acts on the first spin (the `ρ` side) and the second factor on
//! the second spin (the `Σ` side).

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{c, cis, re, Real, C};

/// Default tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Default Hermiticity tolerance accepted by [`expm_skew_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Complex column vector of fixed length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<T, const N: usize>(pub [C<T>; N]);

/// Complex square matrix of fixed size, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<T, const N: usize>(pub [[C<T>; N]; N]);

pub type CVec2<T> = CVec<T, 2>;
pub type CVec4<T> = CVec<T, 4>;
pub type CMat2<T> = CMat<T, 2>;
pub type CMat4<T> = CMat<T, 4>;

impl<T: Real, const N: usize> CVec<T, N> {
    pub fn zeros() -> Self {
        CVec([C::zero(); N])
    }

    /// The `k`-th standard basis vector (0-based).
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zeros();
        v.0[k] = C::one();
        v
    }

    pub fn from_fn(mut f: impl FnMut(usize) -> C<T>) -> Self {
        let mut v = Self::zeros();
        for (i, x) in v.0.iter_mut().enumerate() {
            *x = f(i);
        }
        v
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(self.norm().recip())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i| self.0[i] * s)
    }

    pub fn scale_c(&self, s: C<T>) -> Self {
        Self::from_fn(|i| self.0[i] * s)
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl<T: Real, const N: usize> Index<usize> for CVec<T, N> {
    type Output = C<T>;
    fn index(&self, i: usize) -> &C<T> {
        &self.0[i]
    }
}

impl<T: Real, const N: usize> IndexMut<usize> for CVec<T, N> {
    fn index_mut(&mut self, i: usize) -> &mut C<T> {
        &mut self.0[i]
    }
}

impl<T: Real, const N: usize> Add for CVec<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.0[i] + rhs.0[i])
    }
}

impl<T: Real, const N: usize> Sub for CVec<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.0[i] - rhs.0[i])
    }
}

impl<T: Real, const N: usize> CMat<T, N> {
    pub fn zeros() -> Self {
        CMat([[C::zero(); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C::one();
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_rows(rows: [[T; N]; N]) -> Self {
        Self::from_fn(|i, j| re(rows[i][j]))
    }

    pub fn diag(d: [C<T>; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[CVec<T, N>; N]) -> Self {
        Self::from_fn(|i, j| cols[j].0[i])
    }

    pub fn column(&self, j: usize) -> CVec<T, N> {
        CVec::from_fn(|i| self.0[i][j])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..N).fold(C::zero(), |acc, i| acc + self.0[i][i])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_c(&self, s: C<T>) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .fold(T::zero(), |m, x| m.max(x.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `max |H - H†|`.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |U†U - I|`.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// `⟨u| self |v⟩`.
    pub fn sandwich(&self, u: &CVec<T, N>, v: &CVec<T, N>) -> C<T> {
        u.inner(&(*self * *v))
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> C<T> {
        let mut a = self.0;
        let mut det = C::one();
        for k in 0..N {
            let piv = (k..N)
                .max_by(|&x, &y| a[x][k].norm().partial_cmp(&a[y][k].norm()).unwrap())
                .unwrap();
            if a[piv][k].norm() == T::zero() {
                return C::zero();
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det = det * a[k][k];
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let akj = a[k][j];
                    a[i][j] = a[i][j] - f * akj;
                }
            }
        }
        det
    }

    /// Solves `self · x = b` by partial-pivot elimination. Zero pivots are
    /// replaced by `floor`, which makes the routine usable for inverse
    /// iteration on (numerically) singular matrices.
    pub fn solve_regularized(&self, b: &CVec<T, N>, floor: T) -> CVec<T, N> {
        let mut a = self.0;
        let mut x = b.0;
        for k in 0..N {
            let piv = (k..N)
                .max_by(|&p, &q| a[p][k].norm().partial_cmp(&a[q][k].norm()).unwrap())
                .unwrap();
            a.swap(piv, k);
            x.swap(piv, k);
            if a[k][k].norm() < floor {
                a[k][k] = re(floor);
            }
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let akj = a[k][j];
                    a[i][j] = a[i][j] - f * akj;
                }
                let xk = x[k];
                x[i] = x[i] - f * xk;
            }
        }
        for k in (0..N).rev() {
            let mut s = x[k];
            for j in k + 1..N {
                s = s - a[k][j] * x[j];
            }
            x[k] = s / a[k][k];
        }
        CVec(x)
    }
}

impl<T: Real, const N: usize> Index<(usize, usize)> for CMat<T, N> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.0[i][j]
    }
}

impl<T: Real, const N: usize> IndexMut<(usize, usize)> for CMat<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real, const N: usize> Add for CMat<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Real, const N: usize> AddAssign for CMat<T, N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
    }
}

impl<T: Real, const N: usize> Sub for CMat<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Real, const N: usize> Neg for CMat<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<T: Real, const N: usize> Mul for CMat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] = out.0[i][j] + a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<T: Real, const N: usize> Mul<CVec<T, N>> for CMat<T, N> {
    type Output = CVec<T, N>;
    fn mul(self, v: CVec<T, N>) -> CVec<T, N> {
        CVec::from_fn(|i| (0..N).fold(C::zero(), |acc, j| acc + self.0[i][j] * v.0[j]))
    }
}

// ---------------------------------------------------------------------------
// Pauli algebra and the fixed four-level matrices

pub fn identity2<T: Real>() -> CMat2<T> {
    CMat2::identity()
}

pub fn identity4<T: Real>() -> CMat4<T> {
    CMat4::identity()
}

/// Pauli matrices `σ₁, σ₂, σ₃` at indices 0, 1, 2.
pub fn pauli<T: Real>() -> [CMat2<T>; 3] {
    let (o, z, i) = (C::one(), C::zero(), c(T::zero(), T::one()));
    [
        CMat([[z, o], [o, z]]),
        CMat([[z, -i], [i, z]]),
        CMat([[o, z], [z, -o]]),
    ]
}

/// Kronecker product; `lhs` acts on the first spin.
pub fn kron<T: Real>(lhs: &CMat2<T>, rhs: &CMat2<T>) -> CMat4<T> {
    CMat4::from_fn(|i, j| lhs.0[i / 2][j / 2] * rhs.0[i % 2][j % 2])
}

pub fn kron_vec<T: Real>(lhs: &CVec2<T>, rhs: &CVec2<T>) -> CVec4<T> {
    CVec4::from_fn(|i| lhs.0[i / 2] * rhs.0[i % 2])
}

/// `Σᵢ = I ⊗ σᵢ` (second spin).
pub fn big_sigma<T: Real>() -> [CMat4<T>; 3] {
    let id = identity2();
    pauli::<T>().map(|s| kron(&id, &s))
}

/// `ρᵢ = σᵢ ⊗ I` (first spin).
pub fn rho<T: Real>() -> [CMat4<T>; 3] {
    let id = identity2();
    pauli::<T>().map(|s| kron(&s, &id))
}

/// `Σ·ρ = Σᵢ σᵢ ⊗ σᵢ`.
pub fn sigma_dot_rho<T: Real>() -> CMat4<T> {
    pauli::<T>()
        .iter()
        .fold(CMat4::zeros(), |acc, s| acc + kron(s, s))
}

/// `σ·v` for a real 3-vector.
pub fn pauli_dot<T: Real>(v: &[T; 3]) -> CMat2<T> {
    let p = pauli::<T>();
    p[0].scale(v[0]) + p[1].scale(v[1]) + p[2].scale(v[2])
}

/// `Σ·v` (field on the second spin).
pub fn sigma_dot<T: Real>(v: &[T; 3]) -> CMat4<T> {
    kron(&identity2(), &pauli_dot(v))
}

/// `ρ·v` (field on the first spin).
pub fn rho_dot<T: Real>(v: &[T; 3]) -> CMat4<T> {
    kron(&pauli_dot(v), &identity2())
}

/// The spin-exchange matrix `A = (𝕀 + Σ·ρ)/2`, a real permutation swapping
/// `Θ₂ ↔ Θ₃`.
pub fn swap_matrix<T: Real>() -> CMat4<T> {
    (identity4::<T>() + sigma_dot_rho()).scale(T::lit(0.5))
}

/// `exp(-i σ₃ θ/2)`: rotation of a single spin about z by angle `θ`.
pub fn rotation_z<T: Real>(theta: T) -> CMat2<T> {
    let h = theta * T::lit(0.5);
    CMat2::diag([cis(-h), cis(h)])
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition and friends

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<T, const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [T; N],
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMat<T, N>,
}

impl<T: Real, const N: usize> HermitianEigen<T, N> {
    /// Rebuilds `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(T) -> C<T>) -> CMat<T, N> {
        let d: [C<T>; N] = std::array::from_fn(|k| f(self.values[k]));
        CMat::from_fn(|i, j| {
            (0..N).fold(C::zero(), |acc, k| {
                acc + self.vectors.0[i][k] * d[k] * self.vectors.0[j][k].conj()
            })
        })
    }
}

/// Cyclic complex Jacobi eigensolver. Only the Hermitian part of `h` is used.
pub fn eigh<T: Real, const N: usize>(h: &CMat<T, N>) -> Result<HermitianEigen<T, N>> {
    let mut a = (*h + h.adjoint()).scale(T::lit(0.5)).0;
    let mut v = CMat::<T, N>::identity().0;
    let scale = h.max_abs().max(T::min_positive_value());
    let eps = T::epsilon();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (0..N)
            .flat_map(|p| (0..N).map(move |q| (p, q)))
            .filter(|(p, q)| p != q)
            .fold(T::zero(), |acc, (p, q)| acc + a[p][q].norm_sqr());
        if off.sqrt() <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let r = a[p][q].norm();
                if r <= eps * eps * scale {
                    continue;
                }
                let phase = a[p][q] / r;
                let theta = (a[q][q].re - a[p][p].re) / (r + r);
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = (t * t + T::one()).sqrt().recip();
                let sn = t * cs;
                // G = diag(1, conj(phase) on q) · real rotation
                let g_pp = re(cs);
                let g_pq = re(sn);
                let g_qp = -phase.conj() * sn;
                let g_qq = phase.conj() * cs;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = akp * g_pp + akq * g_qp;
                    row[q] = akp * g_pq + akq * g_qq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q][k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = vkp * g_pp + vkq * g_qp;
                    row[q] = vkp * g_pq + vkq * g_qq;
                }
                a[p][q] = C::zero();
                a[q][p] = C::zero();
                a[p][p].im = T::zero();
                a[q][q].im = T::zero();
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence);
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| a[x][x].re.partial_cmp(&a[y][y].re).unwrap());
    let values = std::array::from_fn(|k| a[order[k]][order[k]].re);
    let vectors = CMat::from_fn(|i, k| v[i][order[k]]);
    Ok(HermitianEigen { values, vectors })
}

/// `exp(-i H t)` for Hermitian `H`, via eigendecomposition.
pub fn expm_skew_hermitian<T: Real, const N: usize>(h: &CMat<T, N>, t: T) -> Result<CMat<T, N>> {
    expm_skew_hermitian_with_tol(h, t, T::lit(HERMITIAN_TOL))
}

pub fn expm_skew_hermitian_with_tol<T: Real, const N: usize>(
    h: &CMat<T, N>,
    t: T,
    tol: T,
) -> Result<CMat<T, N>> {
    let defect = h.hermiticity_defect();
    if !(defect <= tol) {
        return Err(Error::NonHermitianInput {
            defect: defect.as_f64(),
            tolerance: tol.as_f64(),
        });
    }
    let eig = eigh(h)?;
    Ok(eig.map(|lambda| cis(-lambda * t)))
}

/// Nearest unitary matrix `U (U†U)^{-1/2}` (polar factor).
pub fn polar_unitary<T: Real, const N: usize>(u: &CMat<T, N>) -> Result<CMat<T, N>> {
    let gram = u.adjoint() * *u;
    let eig = eigh(&gram)?;
    let inv_sqrt = eig.map(|s| re(s.max(T::min_positive_value()).sqrt().recip()));
    Ok(*u * inv_sqrt)
}
