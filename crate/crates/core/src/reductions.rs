//! Reductions of the two-spin equation to smaller problems.
//!
//! Parallel z-fields split the four-level system into two pure phases and one
//! two-level block; a common Rabi drive becomes a constant four-level problem
//! in the frame rotating with the drive.

use crate::error::{Error, Result};
use crate::model::{RabiParams, ScalarProfile};
use crate::numlin::{kron, pauli, pauli_dot, rho_dot, sigma_dot, sigma_dot_rho, CMat2, CMat4, CVec, CVec2, CVec4};
use crate::oracle::{IntegratorConfig, Trajectory};
use crate::propagators::{frame_rotation, su2_exp};
use crate::scalar::{cis, Real};
use crate::spectrum::build_d;

type BoxedHam<T> = Box<dyn Fn(T) -> Result<CMat2<T>> + Send + Sync>;

enum ReducedSolver<T: Real> {
    /// `K` constant.
    Constant([T; 3]),
    /// `B₋ ≡ 0`, so `K = (J(t), 0, 0)`.
    AlongX,
    /// `J ≡ 0`, so `K = (0, 0, B₋(t))`.
    AlongZ,
    Numerical(Trajectory<T, 2, BoxedHam<T>>),
}

/// Two-level state in both conventions: `unprimed` obeys the bare spin
/// equation with field `K`, `primed = e^{iΦ/2}·unprimed` keeps the `−J/2` term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedState<T> {
    pub unprimed: CVec2<T>,
    pub primed: CVec2<T>,
}

/// Two spins in z-fields `B₁(t)` (first spin) and `B₂(t)` (second spin) with exchange `J(t)`.
///
/// All integrals start at `origin`. The middle block reduces to a spin in the
/// field `K = (J, 0, B₋)`; when `K` keeps a fixed direction it is solved in
/// closed form, otherwise by a 2×2 RK4 trajectory on `[origin, horizon]`.
pub struct ParallelReduction<T: Real> {
    pub b1: ScalarProfile<T>,
    pub b2: ScalarProfile<T>,
    pub j: ScalarProfile<T>,
    pub origin: T,
    pub horizon: T,
    solver: ReducedSolver<T>,
}

impl<T: Real> std::fmt::Debug for ParallelReduction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParallelReduction")
            .field("b1", &self.b1)
            .field("b2", &self.b2)
            .field("j", &self.j)
            .field("origin", &self.origin)
            .field("horizon", &self.horizon)
            .field("closed_form", &self.is_closed_form())
            .finish()
    }
}

pub fn reduce_parallel<T: Real>(
    b1: ScalarProfile<T>,
    b2: ScalarProfile<T>,
    j: ScalarProfile<T>,
    horizon: T,
    cfg: &IntegratorConfig<T>,
) -> Result<ParallelReduction<T>> {
    reduce_parallel_from(b1, b2, j, T::zero(), horizon, cfg)
}

pub fn reduce_parallel_from<T: Real>(
    b1: ScalarProfile<T>,
    b2: ScalarProfile<T>,
    j: ScalarProfile<T>,
    origin: T,
    horizon: T,
    cfg: &IntegratorConfig<T>,
) -> Result<ParallelReduction<T>> {
    let solver = if let (Some(x), Some(y), Some(jc)) = (b1.as_constant(), b2.as_constant(), j.as_constant()) {
        ReducedSolver::Constant([jc, T::zero(), x - y])
    } else if b1 == b2 {
        ReducedSolver::AlongX
    } else if j.is_identically_zero() {
        ReducedSolver::AlongZ
    } else {
        let (pj, p1, p2) = (j.clone(), b1.clone(), b2.clone());
        let ham: BoxedHam<T> = Box::new(move |t| Ok(pauli_dot(&[pj.eval(t)?, T::zero(), p1.eval(t)? - p2.eval(t)?])));
        let span = if horizon > origin { horizon } else { origin + T::one() };
        ReducedSolver::Numerical(Trajectory::new(ham, origin, span, cfg)?)
    };
    Ok(ParallelReduction { b1, b2, j, origin, horizon, solver })
}

impl<T: Real> ParallelReduction<T> {
    /// Whether the reduced field keeps a fixed direction for these profiles.
    pub fn has_closed_form(b1: &ScalarProfile<T>, b2: &ScalarProfile<T>, j: &ScalarProfile<T>) -> bool {
        (b1.as_constant().is_some() && b2.as_constant().is_some() && j.as_constant().is_some())
            || b1 == b2
            || j.is_identically_zero()
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.solver, ReducedSolver::Numerical(_))
    }

    pub fn b_plus(&self, t: T) -> Result<T> {
        Ok(self.b1.eval(t)? + self.b2.eval(t)?)
    }

    pub fn b_minus(&self, t: T) -> Result<T> {
        Ok(self.b1.eval(t)? - self.b2.eval(t)?)
    }

    /// `K(t) = (J, 0, B₋)`.
    pub fn reduced_field(&self, t: T) -> Result<[T; 3]> {
        Ok([self.j.eval(t)?, T::zero(), self.b_minus(t)?])
    }

    /// `Φ(t)/2` with `Φ = ∫J` from the origin.
    pub fn phase_factor(&self, t: T) -> Result<T> {
        Ok(self.j.integral(self.origin, t)? * T::lit(0.5))
    }

    fn b_plus_integral(&self, t: T) -> Result<T> {
        Ok(self.b1.integral(self.origin, t)? + self.b2.integral(self.origin, t)?)
    }

    /// `exp[−i∫(J/2 + B₊)]`, the evolution of `v₁` per unit `C₁`.
    pub fn v1_phase(&self, t: T) -> Result<crate::scalar::C<T>> {
        Ok(cis(-(self.phase_factor(t)? + self.b_plus_integral(t)?)))
    }

    /// `exp[−i∫(J/2 − B₊)]`, the evolution of `v₄` per unit `C₄`.
    pub fn v4_phase(&self, t: T) -> Result<crate::scalar::C<T>> {
        Ok(cis(-(self.phase_factor(t)? - self.b_plus_integral(t)?)))
    }

    /// Propagator of the bare spin equation with field `K`, from the origin to `t`.
    pub fn reduced_propagator(&self, t: T) -> Result<CMat2<T>> {
        let z = T::zero();
        match &self.solver {
            ReducedSolver::Constant(k) => Ok(su2_exp(k, t - self.origin)),
            ReducedSolver::AlongX => Ok(su2_exp(&[T::one(), z, z], self.j.integral(self.origin, t)?)),
            ReducedSolver::AlongZ => {
                let phi = self.b1.integral(self.origin, t)? - self.b2.integral(self.origin, t)?;
                Ok(su2_exp(&[z, z, T::one()], phi))
            }
            ReducedSolver::Numerical(traj) => traj.at(t),
        }
    }

    pub fn reduced_state(&self, psi0: &CVec2<T>, t: T) -> Result<ReducedState<T>> {
        let unprimed = self.reduced_propagator(t)? * *psi0;
        let primed = unprimed.scale_c(cis(self.phase_factor(t)?));
        Ok(ReducedState { unprimed, primed })
    }

    /// Full 4×4 propagator from the origin to `t`.
    pub fn propagator(&self, t: T) -> Result<CMat4<T>> {
        let u = self.reduced_propagator(t)?;
        let w = cis(self.phase_factor(t)?);
        let mut m = CMat4::zeros();
        m[(0, 0)] = self.v1_phase(t)?;
        m[(3, 3)] = self.v4_phase(t)?;
        for i in 0..2 {
            for k in 0..2 {
                m[(i + 1, k + 1)] = u[(i, k)] * w;
            }
        }
        Ok(m)
    }
}

/// Four-spinor `(C₁v₁, ψ′₁, ψ′₂, C₄v₄)` with `ψ′(origin) = psi0`.
pub fn assemble_parallel<T: Real>(
    red: &ParallelReduction<T>,
    c1: crate::scalar::C<T>,
    c4: crate::scalar::C<T>,
    psi0: &CVec2<T>,
    t: T,
) -> Result<CVec4<T>> {
    let mid = red.reduced_state(psi0, t)?.primed;
    Ok(CVec([c1 * red.v1_phase(t)?, mid[0], mid[1], c4 * red.v4_phase(t)?]))
}

/// `(σ₁+σ₃)/√2`.
pub fn km_matrix<T: Real>() -> CMat2<T> {
    let s = pauli::<T>();
    (s[0] + s[2]).scale(T::lit(0.5).sqrt())
}

/// Maps a solution for field `(ε, 0, f)` to one for field `(f, 0, ε)`.
pub fn km_map<T: Real>(phi: &CVec2<T>) -> CVec2<T> {
    km_matrix::<T>() * *phi
}

/// The same map acting on a propagator.
pub fn km_transport<T: Real>(u: &CMat2<T>) -> CMat2<T> {
    let s = km_matrix::<T>();
    s * *u * s
}

/// SU(2) element `V` with `V (σ·n̂) V† = σ₃`.
pub fn z_alignment<T: Real>(n: &[T; 3]) -> Result<CMat2<T>> {
    let len = n[0].hypot(n[1]).hypot(n[2]);
    if !(len > T::zero()) {
        return Err(Error::InvalidConfig("field direction must be a nonzero vector".into()));
    }
    let theta = (n[2] / len).max(-T::one()).min(T::one()).acos();
    let phi = n[1].atan2(n[0]);
    let z = T::zero();
    Ok(su2_exp(&[z, T::one(), z], -theta * T::lit(0.5)) * su2_exp(&[z, z, T::one()], -phi * T::lit(0.5)))
}

/// Two-spin version `V⊗V`: turns a problem with both fields along `n` into one along z.
pub fn z_alignment4<T: Real>(n: &[T; 3]) -> Result<CMat4<T>> {
    let v = z_alignment(n)?;
    Ok(kron(&v, &v))
}

/// Constant four-level problem seen in the frame rotating with a common drive:
/// `D(λ) = γ(Σ·ρ) + (Σ·a) + (ρ·b) − λ𝕀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatingFrameProblem<T> {
    pub gamma: T,
    /// From the second-spin field `F`.
    pub a: [T; 3],
    /// From the first-spin field `G`.
    pub b: [T; 3],
    pub omega: T,
}

/// `γ = J/2ω`, `a = (a′cos φ₁, a′sin φ₁, a₀)` from `F`, `b` likewise from `G`.
pub fn rotating_frame_reduce<T: Real>(f: &RabiParams<T>, g: &RabiParams<T>, j: T) -> Result<RotatingFrameProblem<T>> {
    let omega = f.omega;
    if omega == T::zero() || g.omega == T::zero() {
        return Err(Error::ZeroDriveFrequency);
    }
    if g.omega != omega {
        return Err(Error::InvalidConfig("both fields must share one drive frequency".into()));
    }
    let unit = |rp: &RabiParams<T>| {
        let phi = rp.phase;
        [rp.a_prime() * phi.cos(), rp.a_prime() * phi.sin(), rp.a_zero()]
    };
    Ok(RotatingFrameProblem { gamma: j / (T::lit(2.0) * omega), a: unit(f), b: unit(g), omega })
}

impl<T: Real> RotatingFrameProblem<T> {
    /// `|a|`, equal to `√(a′² + a₀²)`.
    pub fn a_norm(&self) -> T {
        self.a[0].hypot(self.a[1]).hypot(self.a[2])
    }

    pub fn d_matrix(&self, lambda: T) -> CMat4<T> {
        build_d(self.gamma, &self.a, &self.b, lambda)
    }

    /// Rotating-frame Hamiltonian `ω[γ(Σ·ρ) + (Σ·a) + (ρ·b)]` in units of inverse time.
    pub fn generator(&self) -> CMat4<T> {
        (sigma_dot_rho::<T>().scale(self.gamma) + sigma_dot(&self.a) + rho_dot(&self.b)).scale(self.omega)
    }

    /// `𝓡_z(ωt)`.
    pub fn frame(&self, t: T) -> CMat4<T> {
        frame_rotation(self.omega * t)
    }

    /// Lab-frame fields `(G(t), F(t))` and `J` that this problem came from.
    pub fn lab_fields(&self, t: T) -> ([T; 3], [T; 3], T) {
        let w = self.omega;
        let arg = w * t;
        let half = T::lit(0.5);
        let lab = |v: &[T; 3]| {
            let (x, y) = (v[0] * w, v[1] * w);
            [x * arg.cos() - y * arg.sin(), x * arg.sin() + y * arg.cos(), (v[2] + half) * w]
        };
        (lab(&self.b), lab(&self.a), T::lit(2.0) * self.gamma * w)
    }
}

/// `Ψ(t) = e^{−iλωt}·𝓡_z(ωt)·C` for an eigenpair of `D`.
pub fn rotating_frame_solution<T: Real>(
    rf: &RotatingFrameProblem<T>,
    lambda: T,
    c: &CVec4<T>,
    t: T,
) -> Result<CVec4<T>> {
    let residual = (rf.d_matrix(lambda) * *c).norm();
    if !(residual <= T::lit(1e-8)) {
        return Err(Error::NotAnEigenpair { residual: residual.as_f64() });
    }
    Ok((rf.frame(t) * *c).scale_c(cis(-lambda * rf.omega * t)))
}

/// `⟨Ψ|Σ·ρ|Ψ⟩`.
pub fn exchange_expectation<T: Real>(psi: &CVec4<T>) -> T {
    psi.inner(&(sigma_dot_rho::<T>() * *psi)).re
}
