//! Reference integrator for `i dU/dt = H(t) U`.
//!
//! Classic fixed-step RK4; the step is halved until two successive
//! refinements agree to `rel_tol` in the max norm. Step sequences are
//! deterministic for given inputs. The final matrix is projected onto the
//! unitary group only after the accuracy check, and the defect before the
//! projection is reported.

use crate::error::{Error, Result};
use crate::hamiltonian::two_spin_hamiltonian;
use crate::model::TwoSpinProblem;
use crate::numlin::{polar_unitary, CMat, CMat4, CVec, CVec4};
use crate::propagators::{Method, Propagator};
use crate::scalar::{c, Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub max_step: T,
    pub min_step: T,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self { rel_tol: T::lit(1e-10), max_step: T::lit(0.05), min_step: T::lit(1e-7) }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(Error::InvalidConfig("rel_tol must be positive".into()));
        }
        if !(self.min_step > T::zero() && self.min_step <= self.max_step) {
            return Err(Error::InvalidConfig("require 0 < min_step <= max_step".into()));
        }
        Ok(())
    }
}

/// Anything RK4 can advance under `-i H`: state vectors and propagators.
pub trait Evolvable<T: Real, const N: usize>: Copy {
    fn zero() -> Self;
    /// `-i H s`
    fn deriv(h: &CMat<T, N>, s: &Self) -> Self;
    /// `self + a * other`
    fn axpy(&self, a: T, other: &Self) -> Self;
    fn max_abs(&self) -> T;
    fn max_abs_diff(&self, other: &Self) -> T;
}

fn minus_i<T: Real>(z: C<T>) -> C<T> {
    c(z.im, -z.re)
}

impl<T: Real, const N: usize> Evolvable<T, N> for CMat<T, N> {
    fn zero() -> Self {
        CMat::zeros()
    }
    fn deriv(h: &CMat<T, N>, s: &Self) -> Self {
        let hs = *h * *s;
        CMat::from_fn(|i, j| minus_i(hs.0[i][j]))
    }
    fn axpy(&self, a: T, other: &Self) -> Self {
        CMat::from_fn(|i, j| self.0[i][j] + other.0[i][j] * a)
    }
    fn max_abs(&self) -> T {
        CMat::max_abs(self)
    }
    fn max_abs_diff(&self, other: &Self) -> T {
        CMat::max_abs_diff(self, other)
    }
}

impl<T: Real, const N: usize> Evolvable<T, N> for CVec<T, N> {
    fn zero() -> Self {
        CVec::zeros()
    }
    fn deriv(h: &CMat<T, N>, s: &Self) -> Self {
        let hs = *h * *s;
        CVec::from_fn(|i| minus_i(hs.0[i]))
    }
    fn axpy(&self, a: T, other: &Self) -> Self {
        CVec::from_fn(|i| self.0[i] + other.0[i] * a)
    }
    fn max_abs(&self) -> T {
        CVec::max_abs(self)
    }
    fn max_abs_diff(&self, other: &Self) -> T {
        CVec::max_abs_diff(self, other)
    }
}

fn rk4_step<T: Real, const N: usize, S: Evolvable<T, N>>(
    h_start: &CMat<T, N>,
    h_mid: &CMat<T, N>,
    h_end: &CMat<T, N>,
    dt: T,
    s: &S,
) -> S {
    let half = dt * T::lit(0.5);
    let k1 = S::deriv(h_start, s);
    let k2 = S::deriv(h_mid, &s.axpy(half, &k1));
    let k3 = S::deriv(h_mid, &s.axpy(half, &k2));
    let k4 = S::deriv(h_end, &s.axpy(dt, &k3));
    let sixth = dt / T::lit(6.0);
    let third = dt / T::lit(3.0);
    s.axpy(sixth, &k1).axpy(third, &k2).axpy(third, &k3).axpy(sixth, &k4)
}

fn run_fixed<T, const N: usize, S, F>(
    ham: &F,
    s0: S,
    t0: T,
    t1: T,
    steps: usize,
    mut visit: impl FnMut(&S),
) -> Result<S>
where
    T: Real,
    S: Evolvable<T, N>,
    F: Fn(T) -> Result<CMat<T, N>>,
{
    let n = T::from_usize(steps).unwrap();
    let dt = (t1 - t0) / n;
    let mut s = s0;
    visit(&s);
    let mut h_start = ham(t0)?;
    for k in 0..steps {
        let ta = t0 + (t1 - t0) * T::from_usize(k).unwrap() / n;
        let tb = if k + 1 == steps { t1 } else { t0 + (t1 - t0) * T::from_usize(k + 1).unwrap() / n };
        let h_mid = ham(ta + dt * T::lit(0.5))?;
        let h_end = ham(tb)?;
        s = rk4_step(&h_start, &h_mid, &h_end, dt, &s);
        visit(&s);
        h_start = h_end;
    }
    Ok(s)
}

/// Result of the step-halving loop before any projection.
#[derive(Clone, Copy, Debug)]
pub struct Converged<S, T> {
    pub value: S,
    pub steps: usize,
    pub refinement_delta: T,
}

fn converge<T, const N: usize, S, F>(ham: &F, s0: S, t0: T, t1: T, cfg: &IntegratorConfig<T>) -> Result<Converged<S, T>>
where
    T: Real,
    S: Evolvable<T, N>,
    F: Fn(T) -> Result<CMat<T, N>>,
{
    cfg.validate()?;
    let span = (t1 - t0).abs();
    if span == T::zero() {
        return Ok(Converged { value: s0, steps: 0, refinement_delta: T::zero() });
    }
    let mut n = (span / cfg.max_step).ceil().to_usize().unwrap_or(1).max(1);
    let mut prev = run_fixed(ham, s0, t0, t1, n, |_| {})?;
    loop {
        let n2 = 2 * n;
        let step = span / T::from_usize(n2).unwrap();
        let cur = run_fixed(ham, s0, t0, t1, n2, |_| {})?;
        let delta = cur.max_abs_diff(&prev);
        if delta <= cfg.rel_tol * cur.max_abs().max(T::one()) {
            return Ok(Converged { value: cur, steps: n2, refinement_delta: delta });
        }
        if step < cfg.min_step {
            return Err(Error::NoConvergence { step: step.as_f64(), delta: delta.as_f64() });
        }
        prev = cur;
        n = n2;
    }
}

/// Fixed-step RK4 propagator, no step control and no projection.
pub fn integrate_fixed_matrix<T, const N: usize, F>(ham: F, t0: T, t1: T, steps: usize) -> Result<CMat<T, N>>
where
    T: Real,
    F: Fn(T) -> Result<CMat<T, N>>,
{
    run_fixed(&ham, CMat::identity(), t0, t1, steps.max(1), |_| {})
}

/// Oracle propagator for an arbitrary Hermitian generator.
#[derive(Clone, Copy, Debug)]
pub struct OracleMatrix<T, const N: usize> {
    /// Polar-projected (unitary) result.
    pub matrix: CMat<T, N>,
    /// `‖U†U − 𝕀‖` before projection.
    pub raw_unitarity_defect: T,
    pub steps: usize,
    pub refinement_delta: T,
}

pub fn integrate_matrix<T, const N: usize, F>(ham: F, t0: T, t1: T, cfg: &IntegratorConfig<T>) -> Result<OracleMatrix<T, N>>
where
    T: Real,
    F: Fn(T) -> Result<CMat<T, N>>,
{
    let conv = converge(&ham, CMat::<T, N>::identity(), t0, t1, cfg)?;
    let raw_unitarity_defect = conv.value.unitarity_defect();
    let matrix = polar_unitary(&conv.value)?;
    Ok(OracleMatrix { matrix, raw_unitarity_defect, steps: conv.steps, refinement_delta: conv.refinement_delta })
}

/// Hamiltonian of a problem as a closure over time.
pub fn problem_hamiltonian<T: Real>(p: &TwoSpinProblem<T>) -> impl Fn(T) -> Result<CMat4<T>> + '_ {
    move |t| two_spin_hamiltonian(p, t).map(|s| s.matrix)
}

#[derive(Clone, Copy, Debug)]
pub struct OracleSolution<T> {
    pub propagator: Propagator<T>,
    pub raw_unitarity_defect: T,
    pub steps: usize,
    pub refinement_delta: T,
}

/// Numerical propagator of the two-spin equation from `t0` to `t1`.
pub fn integrate_propagator<T: Real>(
    p: &TwoSpinProblem<T>,
    t0: T,
    t1: T,
    cfg: &IntegratorConfig<T>,
) -> Result<OracleSolution<T>> {
    let m = integrate_matrix(problem_hamiltonian(p), t0, t1, cfg)?;
    Ok(OracleSolution {
        propagator: Propagator::new(m.matrix, t0, t1, Method::Oracle),
        raw_unitarity_defect: m.raw_unitarity_defect,
        steps: m.steps,
        refinement_delta: m.refinement_delta,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct StateSolution<T> {
    /// Renormalized final state.
    pub state: CVec4<T>,
    /// `‖Ψ(t1)‖ / ‖Ψ(t0)‖` before renormalization.
    pub raw_norm_ratio: T,
    pub steps: usize,
    pub refinement_delta: T,
}

/// Evolves a single state vector.
pub fn integrate_state<T: Real>(
    p: &TwoSpinProblem<T>,
    psi0: &CVec4<T>,
    t0: T,
    t1: T,
    cfg: &IntegratorConfig<T>,
) -> Result<StateSolution<T>> {
    let conv = converge(&problem_hamiltonian(p), *psi0, t0, t1, cfg)?;
    let n0 = psi0.norm();
    let n1 = conv.value.norm();
    let (state, raw_norm_ratio) = if n0 == T::zero() {
        (conv.value, T::one())
    } else {
        (conv.value.scale(n0 / n1), n1 / n0)
    };
    Ok(StateSolution { state, raw_norm_ratio, steps: conv.steps, refinement_delta: conv.refinement_delta })
}

/// Propagator values on a uniform grid, continuous in `t` between nodes.
///
/// Evaluation off the grid takes one RK4 step from the preceding node, so the
/// result is smooth enough for finite-difference residual checks.
pub struct Trajectory<T, const N: usize, F> {
    ham: F,
    t0: T,
    t1: T,
    dt: T,
    nodes: Vec<CMat<T, N>>,
}

impl<T, const N: usize, F> Trajectory<T, N, F>
where
    T: Real,
    F: Fn(T) -> Result<CMat<T, N>>,
{
    /// Integrates forward from `t0` to `t1` with the converged step.
    pub fn new(ham: F, t0: T, t1: T, cfg: &IntegratorConfig<T>) -> Result<Self> {
        if !(t1 > t0) {
            return Err(Error::InvalidConfig("trajectory requires t1 > t0".into()));
        }
        let conv = converge(&ham, CMat::<T, N>::identity(), t0, t1, cfg)?;
        let steps = conv.steps;
        let mut nodes = Vec::with_capacity(steps + 1);
        run_fixed(&ham, CMat::identity(), t0, t1, steps, |m| nodes.push(*m))?;
        let dt = (t1 - t0) / T::from_usize(steps).unwrap();
        Ok(Self { ham, t0, t1, dt, nodes })
    }

    pub fn span(&self) -> (T, T) {
        (self.t0, self.t1)
    }

    /// Propagator from `t0` to `t`.
    pub fn at(&self, t: T) -> Result<CMat<T, N>> {
        let slack = self.dt * T::lit(1e-9);
        if t < self.t0 - slack || t > self.t1 + slack {
            return Err(Error::OutOfRange { t: t.as_f64(), lo: self.t0.as_f64(), hi: self.t1.as_f64() });
        }
        let last = self.nodes.len() - 1;
        let k = ((t - self.t0) / self.dt).floor().to_usize().unwrap_or(0).min(last);
        let tk = self.t0 + self.dt * T::from_usize(k).unwrap();
        let hop = t - tk;
        if hop == T::zero() {
            return Ok(self.nodes[k]);
        }
        let h_start = (self.ham)(tk)?;
        let h_mid = (self.ham)(tk + hop * T::lit(0.5))?;
        let h_end = (self.ham)(t)?;
        Ok(rk4_step(&h_start, &h_mid, &h_end, hop, &self.nodes[k]))
    }
}

/// `max |i dS/dt − H(t) S|` with a five-point central difference of step `h`.
pub fn schrodinger_residual<T, const N: usize, S>(
    ham: impl Fn(T) -> Result<CMat<T, N>>,
    sol: impl Fn(T) -> Result<S>,
    t: T,
    h: T,
) -> Result<T>
where
    T: Real,
    S: Evolvable<T, N>,
{
    let w = T::one() / (T::lit(12.0) * h);
    let eight = T::lit(8.0);
    let dsdt = S::zero()
        .axpy(-w, &sol(t + h + h)?)
        .axpy(eight * w, &sol(t + h)?)
        .axpy(-eight * w, &sol(t - h)?)
        .axpy(w, &sol(t - h - h)?);
    let rhs = S::deriv(&ham(t)?, &sol(t)?);
    Ok(dsdt.max_abs_diff(&rhs))
}
