//! One-spin and two-spin Hamiltonians.

use crate::error::Result;
use crate::model::TwoSpinProblem;
use crate::numlin::{pauli_dot, rho_dot, sigma_dot, sigma_dot_rho, swap_matrix, CMat, CMat2, CMat4};
use crate::scalar::{c, re, Real};

/// The two-spin Hamiltonian evaluated at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSample<T> {
    pub matrix: CMat4<T>,
    pub t: T,
}

/// `ĥ = σ·F`.
pub fn one_spin_h<T: Real>(f: &[T; 3]) -> CMat2<T> {
    pauli_dot(f)
}

/// `Ĥ = (ρ·G) + (Σ·F) + (J/2)(Σ·ρ)`.
pub fn two_spin_matrix<T: Real>(g: &[T; 3], f: &[T; 3], j: T) -> CMat4<T> {
    rho_dot(g) + sigma_dot(f) + sigma_dot_rho().scale(j * T::lit(0.5))
}

/// The same Hamiltonian written out entry by entry in the `Θ` basis.
pub fn two_spin_matrix_entrywise<T: Real>(g: &[T; 3], f: &[T; 3], j: T) -> CMat4<T> {
    let h = j * T::lit(0.5);
    let z = re(T::zero());
    let f_minus = c(f[0], -f[1]);
    let f_plus = c(f[0], f[1]);
    let g_minus = c(g[0], -g[1]);
    let g_plus = c(g[0], g[1]);
    CMat([
        [re(f[2] + g[2] + h), f_minus, g_minus, z],
        [f_plus, re(g[2] - f[2] - h), re(j), g_minus],
        [g_plus, re(j), re(f[2] - g[2] - h), f_minus],
        [z, g_plus, f_plus, re(h - g[2] - f[2])],
    ])
}

pub fn two_spin_hamiltonian<T: Real>(p: &TwoSpinProblem<T>, t: T) -> Result<HamiltonianSample<T>> {
    let g = p.g.field_at(t)?;
    let f = p.f.field_at(t)?;
    let j = p.j.eval(t)?;
    Ok(HamiltonianSample { matrix: two_spin_matrix(&g, &f, j), t })
}

/// `max |A Ĥ(G,F,J) A − Ĥ(F,G,J)|`.
pub fn check_swap<T: Real>(p: &TwoSpinProblem<T>, t: T) -> Result<T> {
    let a = swap_matrix::<T>();
    let direct = two_spin_hamiltonian(p, t)?.matrix;
    let swapped = two_spin_hamiltonian(&p.swapped(), t)?.matrix;
    Ok((a * direct * a).max_abs_diff(&swapped))
}
