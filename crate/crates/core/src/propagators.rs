//! Closed-form evolution operators and the solver dispatcher.
//!
//! Every two-spin propagator maps the state at `t0` to the state at `t1`.
//! One-spin factors whose natural form starts at time zero are composed as
//! `u(t1) u(t0)†`.

use std::fmt;

use crate::error::{Error, Result};
use crate::hamiltonian::two_spin_hamiltonian;
use crate::model::{interaction_integral, FieldSpec, RabiParams, ScalarProfile, TwoSpinProblem};
use crate::numlin::{
    big_sigma, expm_skew_hermitian, identity2, identity4, kron, pauli, rho, rotation_z, swap_matrix, CMat, CMat2, CMat4, CVec4,
};
use crate::oracle::{integrate_propagator, schrodinger_residual, IntegratorConfig, Trajectory};
use crate::reductions::{reduce_parallel_from, rotating_frame_reduce, ParallelReduction};
use crate::scalar::{c, cis, re, sinc, Real};

/// Which construction produced a propagator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    FreeInteraction,
    Noninteracting,
    EqualFields,
    ConstantParallel,
    RabiSecondSpin,
    EqualRabiComposition,
    ParallelReduction,
    RotatingFrameSpectral,
    ConstantSpectral,
    Oracle,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::FreeInteraction => "free_interaction",
            Method::Noninteracting => "noninteracting",
            Method::EqualFields => "equal_fields",
            Method::ConstantParallel => "constant_parallel",
            Method::RabiSecondSpin => "rabi_second_spin",
            Method::EqualRabiComposition => "equal_rabi_composition",
            Method::ParallelReduction => "parallel_reduction",
            Method::RotatingFrameSpectral => "rotating_frame_spectral",
            Method::ConstantSpectral => "constant_spectral",
            Method::Oracle => "oracle",
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, Method::Oracle)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Evolution operator `R` with `Ψ(t1) = R Ψ(t0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagator<T> {
    pub matrix: CMat4<T>,
    pub t0: T,
    pub t1: T,
    pub method: Method,
}

impl<T: Real> Propagator<T> {
    pub fn new(matrix: CMat4<T>, t0: T, t1: T, method: Method) -> Self {
        Self { matrix, t0, t1, method }
    }

    pub fn unitarity_defect(&self) -> T {
        self.matrix.unitarity_defect()
    }

    pub fn apply(&self, psi: &CVec4<T>) -> CVec4<T> {
        self.matrix * *psi
    }

    /// `self` followed by `later`; the intervals must be adjacent.
    pub fn then(&self, later: &Propagator<T>) -> Propagator<T> {
        let method = if self.method == later.method { self.method } else { Method::Oracle };
        Propagator::new(later.matrix * self.matrix, self.t0, later.t1, method)
    }
}

fn norm3<T: Real>(v: &[T; 3]) -> T {
    v[0].hypot(v[1]).hypot(v[2])
}

/// `exp(−i (σ·k) τ)`.
pub fn su2_exp<T: Real>(k: &[T; 3], tau: T) -> CMat2<T> {
    let w = norm3(k) * tau;
    let (co, s) = (w.cos(), tau * sinc(w));
    let (x, y, z) = (k[0] * s, k[1] * s, k[2] * s);
    CMat([[c(co, -z), c(-y, -x)], [c(y, -x), c(co, z)]])
}

/// `exp(−i (S·k) τ)` for a triple of 4×4 Pauli-like generators with `(S·k)² = |k|²𝕀`.
fn pauli_like_exp<T: Real>(ops: &[CMat4<T>; 3], k: &[T; 3], tau: T) -> CMat4<T> {
    let w = norm3(k) * tau;
    let s = tau * sinc(w);
    let gen = ops[0].scale(k[0]) + ops[1].scale(k[1]) + ops[2].scale(k[2]);
    identity4::<T>().scale(w.cos()) + gen.scale_c(c(T::zero(), -s))
}

/// `𝓡_z(θ) = exp[−i(ρ₃+Σ₃)θ/2]`.
pub fn frame_rotation<T: Real>(theta: T) -> CMat4<T> {
    let r = rotation_z(theta);
    kron(&r, &r)
}

/// One-spin Rabi propagator from time 0, `r_z(ωt)·exp(−i σ·k t)` with `k` the rotating-frame field.
pub fn rabi_one_spin<T: Real>(rp: &RabiParams<T>, t: T) -> CMat2<T> {
    rotation_z(rp.omega * t) * su2_exp(&rp.rotating_frame_field(), t)
}

/// The same propagator written as `r_z(ωt)[I cos ω_R t + ((α − i a′σ₂)²/(α² + a′²)) iσ₃ sin ω_R t]`.
///
/// A nonzero drive phase `φ` enters through conjugation by `r_z(φ)`.
pub fn rabi_one_spin_literal<T: Real>(rp: &RabiParams<T>, t: T) -> Result<CMat2<T>> {
    let ap = rp.a_prime();
    let alpha = rp.alpha();
    let den = alpha * alpha + ap * ap;
    if den < T::lit(1e-14) {
        return Err(Error::DegenerateDenominator { value: den.as_f64() });
    }
    let s = pauli::<T>();
    let i = c(T::zero(), T::one());
    let m = identity2::<T>().scale(alpha) - s[1].scale_c(i * ap);
    let wt = rp.rabi_frequency() * t;
    let core = identity2::<T>().scale(wt.cos()) + (m * m * s[2]).scale_c(i * (wt.sin() / den));
    let u0 = rotation_z(rp.omega * t) * core;
    if rp.phase == T::zero() {
        Ok(u0)
    } else {
        let r = rotation_z(rp.phase);
        Ok(r * u0 * r.adjoint())
    }
}

/// One-spin propagator from `t0` to `t1` for any field variant.
pub fn one_spin_propagator<T: Real>(field: &FieldSpec<T>, t0: T, t1: T) -> Result<CMat2<T>> {
    match field {
        FieldSpec::Zero => Ok(identity2()),
        FieldSpec::Constant(b) => Ok(su2_exp(b, t1 - t0)),
        FieldSpec::Rabi(rp) => Ok(rabi_one_spin(rp, t1) * rabi_one_spin(rp, t0).adjoint()),
        FieldSpec::ParallelZ(profile) => {
            let phi = profile.integral(t0, t1)?;
            Ok(CMat2::diag([cis(-phi), cis(phi)]))
        }
    }
}

/// `R = e^{iΦ/2}[𝕀 cos Φ − i A sin Φ]`, `Φ = ∫J`.
pub fn prop_free_interaction<T: Real>(j: &ScalarProfile<T>, t0: T, t1: T) -> Result<Propagator<T>> {
    let phi = interaction_integral(j, t0, t1)?;
    Ok(Propagator::new(free_interaction_matrix(phi), t0, t1, Method::FreeInteraction))
}

fn free_interaction_matrix<T: Real>(phi: T) -> CMat4<T> {
    let a = swap_matrix::<T>();
    (identity4::<T>().scale_c(re(phi.cos())) + a.scale_c(c(T::zero(), -phi.sin()))).scale_c(cis(phi * T::lit(0.5)))
}

/// Independent spins: `kron(u_G, I)·kron(I, u_F)`.
pub fn prop_noninteracting<T: Real>(g: &FieldSpec<T>, f: &FieldSpec<T>, t0: T, t1: T) -> Result<Propagator<T>> {
    let ug = one_spin_propagator(g, t0, t1)?;
    let uf = one_spin_propagator(f, t0, t1)?;
    let id = identity2();
    Ok(Propagator::new(kron(&ug, &id) * kron(&id, &uf), t0, t1, Method::Noninteracting))
}

/// The same operator as `A·R(0,G,0)·A·R(0,F,0)`.
pub fn noninteracting_swap_form<T: Real>(g: &FieldSpec<T>, f: &FieldSpec<T>, t0: T, t1: T) -> Result<CMat4<T>> {
    let id = identity2();
    let rg = kron(&id, &one_spin_propagator(g, t0, t1)?);
    let rf = kron(&id, &one_spin_propagator(f, t0, t1)?);
    let a = swap_matrix();
    Ok(a * rg * a * rf)
}

/// Equal fields on both spins: `R(0,0,J)·R(G,0,0)·R(0,G,0)`.
pub fn prop_equal_fields<T: Real>(g: &FieldSpec<T>, j: &ScalarProfile<T>, t0: T, t1: T) -> Result<Propagator<T>> {
    let inter = prop_free_interaction(j, t0, t1)?.matrix;
    let u = one_spin_propagator(g, t0, t1)?;
    let id = identity2();
    Ok(Propagator::new(inter * kron(&u, &id) * kron(&id, &u), t0, t1, Method::EqualFields))
}

/// Constant exchange `J = 2γ` with fields `(0,0,a)` on the first spin and `(0,0,b)` on the second.
pub fn prop_constant_parallel<T: Real>(gamma: T, a: T, b: T, tau: T) -> Propagator<T> {
    Propagator::new(constant_parallel_matrix(gamma, a, b, tau), T::zero(), tau, Method::ConstantParallel)
}

fn constant_parallel_matrix<T: Real>(gamma: T, a: T, b: T, tau: T) -> CMat4<T> {
    let r = rho::<T>();
    let s = big_sigma::<T>();
    let id = identity4::<T>();
    let p = a + b;
    let q = a - b;
    let big_omega = (T::lit(4.0) * gamma * gamma + q * q).sqrt();
    let rs3 = r[2] * s[2];
    let minus_i = c(T::zero(), -T::one());
    let triplet = ((id + rs3).scale((p * tau).cos()) + (r[2] + s[2]).scale_c(minus_i * (p * tau).sin()))
        .scale_c(cis(-gamma * tau));
    let mix = (r[2] - s[2]).scale(q) + (r[0] * s[0] + r[1] * s[1]).scale(T::lit(2.0) * gamma);
    let rest = ((id - rs3).scale((big_omega * tau).cos()) + mix.scale_c(minus_i * tau * sinc(big_omega * tau)))
        .scale_c(cis(gamma * tau));
    (triplet + rest).scale(T::lit(0.5))
}

/// `R_t(0,F,0) = kron(I, û_F)` for a Rabi field on the second spin, from time 0.
pub fn prop_rabi_second_spin<T: Real>(rp: &RabiParams<T>, t: T) -> Propagator<T> {
    Propagator::new(kron(&identity2(), &rabi_one_spin(rp, t)), T::zero(), t, Method::RabiSecondSpin)
}

/// `exp(−iΣ₃ωt/2)·R_Σ(ω_R t)` built from the 4×4 `Σ` matrices.
pub fn rabi_second_spin_product<T: Real>(rp: &RabiParams<T>, t: T) -> CMat4<T> {
    let half = rp.omega * t * T::lit(0.5);
    let rz = CMat4::diag([cis(-half), cis(half), cis(-half), cis(half)]);
    let r_sigma = pauli_like_exp(&big_sigma(), &rp.rotating_frame_field(), t);
    rz * r_sigma
}

/// Composite propagator for equal Rabi fields on both spins,
/// `𝓡_z(ωt)·exp[−i(Σ·ρ)ωγ(t)]·R_ρ(ω_R t)·R_Σ(ω_R t)`, taken from `t0` to `t`.
///
/// `γ(t) = (1/2ω)∫_{t0}^{t} J`, so the factor at `t0` is the identity on the
/// interaction part and only the one-spin factors need undoing.
pub fn prop_equal_rabi<T: Real>(rp: &RabiParams<T>, j: &ScalarProfile<T>, t0: T, t: T) -> Result<Propagator<T>> {
    let k = rp.rotating_frame_field();
    let rho_side = |tau: T| pauli_like_exp(&rho(), &k, tau);
    let sigma_side = |tau: T| pauli_like_exp(&big_sigma(), &k, tau);
    let phi = interaction_integral(j, t0, t)?;
    let m_t = frame_rotation(rp.omega * t) * free_interaction_matrix(phi) * rho_side(t) * sigma_side(t);
    let m_0 = frame_rotation(rp.omega * t0) * rho_side(t0) * sigma_side(t0);
    Ok(Propagator::new(m_t * m_0.adjoint(), t0, t, Method::EqualRabiComposition))
}

/// Checks that a reparameterized time `s = T(t)` turns the solution into one for
/// the problem with every field and `J` scaled by `Ṫ(t)` at time `T(t)`.
///
/// Returns the Schrödinger residual of `Ψ(T(t))` against `Ṫ(t)·Ĥ(T(t))` at `t`.
pub fn reparameterization_defect<T, M, D>(
    p: &TwoSpinProblem<T>,
    map: M,
    deriv: D,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<T>
where
    T: Real,
    M: Fn(T) -> T,
    D: Fn(T) -> T,
{
    let h = T::lit(1e-4);
    let lo = map(t - h - h);
    let hi = map(t + h + h);
    let ham = |s: T| two_spin_hamiltonian(p, s).map(|x| x.matrix);
    let traj = Trajectory::new(ham, lo, hi, cfg)?;
    let scaled = |tau: T| two_spin_hamiltonian(p, map(tau)).map(|x| x.matrix.scale(deriv(tau)));
    schrodinger_residual(scaled, |tau: T| traj.at(map(tau).max(lo).min(hi)), t, h)
}

/// Solver selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Closed form when available, otherwise a reduced or full numerical solve.
    #[default]
    Auto,
    /// Closed form or `NoClosedForm`.
    Closed,
    /// Always the RK4 reference integrator.
    Oracle,
}

pub fn propagate<T: Real>(
    p: &TwoSpinProblem<T>,
    t0: T,
    t1: T,
    mode: Mode,
    cfg: &IntegratorConfig<T>,
) -> Result<Propagator<T>> {
    match mode {
        Mode::Oracle => integrate_propagator(p, t0, t1, cfg).map(|s| s.propagator),
        Mode::Closed => closed_form(p, t0, t1),
        Mode::Auto => match closed_form(p, t0, t1) {
            Err(Error::NoClosedForm(_)) => {
                if let (Some(b1), Some(b2)) = (p.g.z_profile(), p.f.z_profile()) {
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    if hi > lo {
                        let red = reduce_parallel_from(b1, b2, p.j.clone(), lo, hi, cfg)?;
                        return parallel_from_reduction(&red, t0, t1);
                    }
                }
                integrate_propagator(p, t0, t1, cfg).map(|s| s.propagator)
            }
            other => other,
        },
    }
}

fn parallel_from_reduction<T: Real>(red: &ParallelReduction<T>, t0: T, t1: T) -> Result<Propagator<T>> {
    let m = red.propagator(t1)? * red.propagator(t0)?.adjoint();
    Ok(Propagator::new(m, t0, t1, Method::ParallelReduction))
}

/// Drive parameters of a field that is a Rabi field, or a pure z-field viewed as one with `A = 0`.
fn rabi_view<T: Real>(field: &FieldSpec<T>, omega: T) -> Option<RabiParams<T>> {
    match field {
        FieldSpec::Rabi(rp) => Some(*rp),
        _ => {
            let b = field.as_constant()?;
            if b[0] != T::zero() || b[1] != T::zero() {
                return None;
            }
            RabiParams::new(T::zero(), b[2], omega).ok()
        }
    }
}

/// Closed-form dispatch, in order: no interaction, equal fields, parallel
/// fields, common-frequency Rabi fields, constant fields.
pub fn closed_form<T: Real>(p: &TwoSpinProblem<T>, t0: T, t1: T) -> Result<Propagator<T>> {
    if p.j.is_identically_zero() {
        return prop_noninteracting(&p.g, &p.f, t0, t1);
    }
    if p.g == p.f {
        return match &p.g {
            FieldSpec::Rabi(rp) if rp.amplitude != T::zero() => prop_equal_rabi(rp, &p.j, t0, t1),
            g if g.is_zero() => prop_free_interaction(&p.j, t0, t1),
            g => prop_equal_fields(g, &p.j, t0, t1),
        };
    }
    if let (Some(b1), Some(b2)) = (p.g.z_profile(), p.f.z_profile()) {
        if let (Some(a), Some(b), Some(j)) = (b1.as_constant(), b2.as_constant(), p.j.as_constant()) {
            let r = prop_constant_parallel(j * T::lit(0.5), a, b, t1 - t0);
            return Ok(Propagator::new(r.matrix, t0, t1, Method::ConstantParallel));
        }
        if ParallelReduction::has_closed_form(&b1, &b2, &p.j) {
            let (lo, hi) = (t0.min(t1), t0.max(t1));
            let red = reduce_parallel_from(b1, b2, p.j.clone(), lo, hi, &IntegratorConfig::default())?;
            return parallel_from_reduction(&red, t0, t1);
        }
        return Err(Error::NoClosedForm(
            "parallel fields whose reduced one-spin field changes direction in time".into(),
        ));
    }
    if let Some(j) = p.j.as_constant() {
        let omega = match (&p.g, &p.f) {
            (FieldSpec::Rabi(rp), _) | (_, FieldSpec::Rabi(rp)) => Some(rp.omega),
            _ => None,
        };
        if let Some(omega) = omega {
            if let (Some(rg), Some(rf)) = (rabi_view(&p.g, omega), rabi_view(&p.f, omega)) {
                if rg.omega == rf.omega {
                    let frame = rotating_frame_reduce(&rf, &rg, j)?;
                    let h = frame.generator();
                    let inner = expm_skew_hermitian(&h, t1 - t0)?;
                    let m = frame_rotation(omega * t1) * inner * frame_rotation(omega * t0).adjoint();
                    return Ok(Propagator::new(m, t0, t1, Method::RotatingFrameSpectral));
                }
            }
        }
        if let (Some(g), Some(f)) = (p.g.as_constant(), p.f.as_constant()) {
            let h = crate::hamiltonian::two_spin_matrix(&g, &f, j);
            return Ok(Propagator::new(expm_skew_hermitian(&h, t1 - t0)?, t0, t1, Method::ConstantSpectral));
        }
    }
    Err(Error::NoClosedForm(
        "fields are neither equal, parallel, constant, nor Rabi fields sharing one drive frequency with constant J".into(),
    ))
}
