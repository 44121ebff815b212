//! Stationary levels for constant exchange and constant fields.
//!
//! Solutions `e^{−iλτ}C` exist where `d(λ) = det D(λ)` vanishes, with
//! `D(λ) = γ(Σ·ρ) + (Σ·a) + (ρ·b) − λ𝕀`. Roots come from the companion matrix
//! of `d` and are then polished on the polynomial itself, taking multiplicity
//! into account; eigenvectors come from inverse iteration on `D(λ)`.

use crate::error::{Error, Result};
use crate::model::stationary_basis;
use crate::numlin::{identity4, rho_dot, sigma_dot, sigma_dot_rho, CMat4, CVec4};
use crate::scalar::{c, Real, C};

/// `D(λ) = γ(Σ·ρ) + (Σ·a) + (ρ·b) − λ𝕀`.
pub fn build_d<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3], lambda: T) -> CMat4<T> {
    sigma_dot_rho::<T>().scale(gamma) + sigma_dot(a) + rho_dot(b) - identity4::<T>().scale(lambda)
}

fn dot<T: Real>(u: &[T; 3], v: &[T; 3]) -> T {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Coefficients of a polynomial in ascending powers.
pub type Coeffs<T> = [T; 5];

/// `d(λ) = λ⁴ − 2λ²(a²+b²+3γ²) + 8λγ[γ²−(a·b)] − 3γ⁴ + 2γ²[a²+b²+4(a·b)] + (a²−b²)²`.
pub fn quartic_d<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3]) -> Coeffs<T> {
    let (a2, b2, ab) = (dot(a, a), dot(b, b), dot(a, b));
    let g2 = gamma * gamma;
    let two = T::lit(2.0);
    [
        -T::lit(3.0) * g2 * g2 + two * g2 * (a2 + b2 + T::lit(4.0) * ab) + (a2 - b2) * (a2 - b2),
        T::lit(8.0) * gamma * (g2 - ab),
        -two * (a2 + b2 + T::lit(3.0) * g2),
        T::zero(),
        T::one(),
    ]
}

fn poly_mul<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i + j] += *xi * *yj;
        }
    }
    out
}

fn poly_add_into<T: Real>(acc: &mut [T], x: &[T], s: T) {
    for (k, v) in x.iter().enumerate() {
        acc[k] += *v * s;
    }
}

/// `(λ−γ)³(λ+3γ) − 2(λ²−γ²)(a²+b²) − 8γ(a·b)(λ−γ) + (a²−b²)²`, expanded.
pub fn quartic_from_shifted_form<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3]) -> Coeffs<T> {
    let (a2, b2, ab) = (dot(a, a), dot(b, b), dot(a, b));
    let lm = [-gamma, T::one()];
    let cube = poly_mul(&poly_mul(&lm, &lm), &lm);
    let mut out = [T::zero(); 5];
    poly_add_into(&mut out, &poly_mul(&cube, &[T::lit(3.0) * gamma, T::one()]), T::one());
    poly_add_into(&mut out, &[-gamma * gamma, T::zero(), T::one()], -T::lit(2.0) * (a2 + b2));
    poly_add_into(&mut out, &lm, -T::lit(8.0) * gamma * ab);
    out[0] += (a2 - b2) * (a2 - b2);
    out
}

/// `[(λ+γ)² − 4γ² − q²][(λ−γ)² − p²] − p²q² + (p·q)²` with `p = a+b`, `q = a−b`, expanded.
pub fn quartic_from_pq_form<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3]) -> Coeffs<T> {
    let p: [T; 3] = std::array::from_fn(|k| a[k] + b[k]);
    let q: [T; 3] = std::array::from_fn(|k| a[k] - b[k]);
    let (p2, q2, pq) = (dot(&p, &p), dot(&q, &q), dot(&p, &q));
    let g2 = gamma * gamma;
    let two = T::lit(2.0);
    let first = [g2 - T::lit(4.0) * g2 - q2, two * gamma, T::one()];
    let second = [g2 - p2, -two * gamma, T::one()];
    let prod = poly_mul(&first, &second);
    let mut out = [T::zero(); 5];
    poly_add_into(&mut out, &prod, T::one());
    out[0] += pq * pq - p2 * q2;
    out
}

/// Evaluates the `p, q` factored form directly, without expanding.
pub fn eval_pq_form<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3], lambda: T) -> T {
    let p: [T; 3] = std::array::from_fn(|k| a[k] + b[k]);
    let q: [T; 3] = std::array::from_fn(|k| a[k] - b[k]);
    let (p2, q2, pq) = (dot(&p, &p), dot(&q, &q), dot(&p, &q));
    let lp = lambda + gamma;
    let lm = lambda - gamma;
    (lp * lp - T::lit(4.0) * gamma * gamma - q2) * (lm * lm - p2) - p2 * q2 + pq * pq
}

/// Value of the `k`-th derivative of the polynomial at `x`.
pub fn poly_derivative<T: Real>(coeffs: &[T], k: usize, x: T) -> T {
    let mut acc = T::zero();
    for j in (k..coeffs.len()).rev() {
        let falling = ((j - k + 1)..=j).fold(T::one(), |f, m| f * T::from_usize(m).unwrap());
        acc = acc * x + coeffs[j] * falling;
    }
    acc
}

pub fn poly_eval<T: Real>(coeffs: &[T], x: T) -> T {
    poly_derivative(coeffs, 0, x)
}

/// Rounding-error scale of the `k`-th derivative at `x`.
fn derivative_bound<T: Real>(coeffs: &[T], k: usize, x: T) -> T {
    let ax = x.abs();
    let mut acc = T::zero();
    for j in (k..coeffs.len()).rev() {
        let falling = ((j - k + 1)..=j).fold(T::one(), |f, m| f * T::from_usize(m).unwrap());
        acc = acc * ax + coeffs[j].abs() * falling;
    }
    acc
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR.
fn hessenberg_eigenvalues<T: Real, const N: usize>(mut h: [[C<T>; N]; N]) -> Result<[C<T>; N]> {
    let eps = T::epsilon();
    let hnorm = h.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm())).max(T::min_positive_value());
    let mut eig = [C::new(T::zero(), T::zero()); N];
    let mut hi = N - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let diag = h[l][l].norm() + h[l - 1][l - 1].norm();
            let tol = if diag > T::zero() { eps * diag } else { eps * hnorm };
            if h[l][l - 1].norm() <= tol {
                h[l][l - 1] = C::new(T::zero(), T::zero());
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * N {
            return Err(Error::EigenNoConvergence);
        }
        let (a, b, cc, d) = (h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        let mu = if iter % 11 == 10 {
            let sub = cc.norm();
            d + c(T::lit(0.75) * sub, T::lit(0.4375) * sub)
        } else {
            let half = T::lit(0.5);
            let m = (a + d) * half;
            let disc = ((a - d) * (a - d) * T::lit(0.25) + b * cc).sqrt();
            let (r1, r2) = (m + disc, m - disc);
            if (r1 - d).norm() <= (r2 - d).norm() {
                r1
            } else {
                r2
            }
        };
        for k in l..=hi {
            h[k][k] = h[k][k] - mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = x.norm().hypot(y.norm());
            let (cs, sn) = if r == T::zero() {
                (C::new(T::one(), T::zero()), C::new(T::zero(), T::zero()))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let (u, v) = (h[k][j], h[k + 1][j]);
                h[k][j] = cs.conj() * u + sn.conj() * v;
                h[k + 1][j] = -sn * u + cs * v;
            }
            rots.push((cs, sn));
        }
        for (idx, (cs, sn)) in rots.into_iter().enumerate() {
            let k = l + idx;
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(l) {
                let (u, v) = (row[k], row[k + 1]);
                row[k] = u * cs + v * sn;
                row[k + 1] = -(u * sn.conj()) + v * cs.conj();
            }
        }
        for k in l..=hi {
            h[k][k] = h[k][k] + mu;
        }
    }
    eig[0] = h[0][0];
    Ok(eig)
}

/// Complex roots of a monic quartic from its companion matrix.
pub fn companion_roots<T: Real>(coeffs: &Coeffs<T>) -> Result<[C<T>; 4]> {
    let z = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());
    let lead = coeffs[4];
    let mut h = [[z; 4]; 4];
    for i in 0..3 {
        h[i + 1][i] = one;
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[3] = C::new(-coeffs[i] / lead, T::zero());
    }
    hessenberg_eigenvalues(h)
}

fn newton_on_derivative<T: Real>(coeffs: &[T], order: usize, start: T) -> T {
    let eps = T::epsilon();
    let mut x = start;
    let mut last = T::infinity();
    for _ in 0..60 {
        let g = poly_derivative(coeffs, order, x);
        let dg = poly_derivative(coeffs, order + 1, x);
        if g == T::zero() || dg == T::zero() {
            break;
        }
        let step = g / dg;
        if !(step.abs() < last) && last.is_finite() {
            break;
        }
        x -= step;
        last = step.abs();
        if last <= T::lit(4.0) * eps * x.abs().max(T::one()) {
            break;
        }
    }
    x
}

fn accept_multiple<T: Real>(coeffs: &[T], x: T, m: usize) -> bool {
    let tol = T::lit(64.0) * T::epsilon();
    (0..m).all(|k| poly_derivative(coeffs, k, x).abs() <= tol * derivative_bound(coeffs, k, x))
}

/// Polishes a cluster of raw roots, returning `(value, multiplicity)` pairs.
fn resolve_cluster<T: Real>(coeffs: &[T], raw: &[T]) -> Vec<(T, usize)> {
    let m = raw.len();
    if m == 1 {
        return vec![(newton_on_derivative(coeffs, 0, raw[0]), 1)];
    }
    let mean = raw.iter().fold(T::zero(), |s, x| s + *x) / T::from_usize(m).unwrap();
    let x = newton_on_derivative(coeffs, m - 1, mean);
    if accept_multiple(coeffs, x, m) {
        return vec![(x, m)];
    }
    let split = (1..m)
        .max_by(|&i, &j| (raw[i] - raw[i - 1]).partial_cmp(&(raw[j] - raw[j - 1])).unwrap())
        .unwrap();
    let mut out = resolve_cluster(coeffs, &raw[..split]);
    out.extend(resolve_cluster(coeffs, &raw[split..]));
    out
}

/// Distance (in units of the problem scale) below which raw companion roots
/// are treated as a candidate multiple root.
const RAW_CLUSTER_GAP: f64 = 1e-3;
/// Polished roots closer than this (times the scale) share an eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-7;

/// Real roots of the monic quartic, ascending, each polished on the polynomial.
/// `scale` normalizes the variable before the companion solve.
pub fn quartic_real_roots<T: Real>(coeffs: &Coeffs<T>, scale: T) -> Result<[T; 4]> {
    let s = scale;
    let scaled: Coeffs<T> = std::array::from_fn(|k| coeffs[k] / s.powi(4 - k as i32));
    let raw = companion_roots(&scaled)?;
    let mut re: Vec<T> = raw.iter().map(|z| z.re).collect();
    re.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let gap = T::lit(RAW_CLUSTER_GAP);
    let mut roots = Vec::with_capacity(4);
    let mut start = 0;
    for i in 1..=4 {
        if i == 4 || re[i] - re[i - 1] > gap {
            for (x, mult) in resolve_cluster(&scaled, &re[start..i]) {
                roots.extend(std::iter::repeat(x).take(mult));
            }
            start = i;
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(std::array::from_fn(|k| roots[k] * s))
}

/// `max(|γ|, |a|, |b|, 1)`.
pub fn problem_scale<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3]) -> T {
    let n = |v: &[T; 3]| dot(v, v).sqrt();
    gamma.abs().max(n(a)).max(n(b)).max(T::one())
}

/// Stationary levels and vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralResult<T> {
    /// Ascending, repeated according to multiplicity.
    pub roots: [T; 4],
    /// Orthonormal, with `vectors[i]` belonging to `roots[i]`.
    pub vectors: [CVec4<T>; 4],
    /// `d(λ)` in ascending powers.
    pub quartic: Coeffs<T>,
    /// `|d(λᵢ)|`.
    pub root_residuals: [T; 4],
    /// `‖D(λᵢ)Cᵢ‖`.
    pub vector_residuals: [T; 4],
}

/// Makes the first component with modulus above `1e−10` real and positive.
pub fn fix_phase<T: Real>(v: &CVec4<T>) -> CVec4<T> {
    match v.0.iter().find(|z| z.norm() > T::lit(1e-10)) {
        Some(z) => v.scale_c(z.conj() / z.norm()),
        None => *v,
    }
}

fn orthonormalize_against<T: Real>(v: CVec4<T>, basis: &[CVec4<T>]) -> CVec4<T> {
    let mut w = v;
    for _ in 0..2 {
        for q in basis {
            let proj = q.inner(&w);
            w = w - q.scale_c(proj);
        }
    }
    w
}

/// Orthonormal basis of the (numerical) null space of `d`, `m` vectors.
fn null_space<T: Real>(d: &CMat4<T>, m: usize, scale: T) -> Vec<CVec4<T>> {
    let floor = T::epsilon() * scale;
    let mut cands: Vec<CVec4<T>> = (0..4).map(|k| d.solve_regularized(&CVec4::basis(k), floor)).collect();
    let mut basis: Vec<CVec4<T>> = Vec::with_capacity(m);
    for _ in 0..m {
        let (idx, _) = cands
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        let q = cands.swap_remove(idx).normalized();
        basis.push(q);
        cands = cands.into_iter().map(|v| orthonormalize_against(v, &basis)).collect();
    }
    // one refinement sweep
    let mut refined: Vec<CVec4<T>> = Vec::with_capacity(m);
    for q in basis {
        let v = d.solve_regularized(&q, floor).normalized();
        let w = orthonormalize_against(v, &refined);
        refined.push(w.normalized());
    }
    refined
}

pub fn solve_levels<T: Real>(gamma: T, a: &[T; 3], b: &[T; 3]) -> Result<SpectralResult<T>> {
    let quartic = quartic_d(gamma, a, b);
    let scale = problem_scale(gamma, a, b);
    let roots = quartic_real_roots(&quartic, scale)?;
    let tol = T::lit(DEGENERACY_TOL) * scale;

    let mut vectors = [CVec4::zeros(); 4];
    let mut i = 0;
    while i < 4 {
        let mut j = i + 1;
        while j < 4 && roots[j] - roots[j - 1] <= tol {
            j += 1;
        }
        let mean = roots[i..j].iter().fold(T::zero(), |s, x| s + *x) / T::from_usize(j - i).unwrap();
        let d = build_d(gamma, a, b, mean);
        for (k, v) in null_space(&d, j - i, scale).into_iter().enumerate() {
            vectors[i + k] = fix_phase(&v);
        }
        i = j;
    }
    let root_residuals = std::array::from_fn(|k| poly_eval(&quartic, roots[k]).abs());
    let vector_residuals = std::array::from_fn(|k| (build_d(gamma, a, b, roots[k]) * vectors[k]).norm());
    Ok(SpectralResult { roots, vectors, quartic, root_residuals, vector_residuals })
}

/// Levels of two spins in equal z-fields `A₀` without a transverse drive:
/// `λ = J/2 + 2A₀, J/2, −3J/2, J/2 − 2A₀` for `Ψ₁..Ψ₄`.
pub fn stationary_rabi<T: Real>(j: T, a0: T) -> [(T, CVec4<T>); 4] {
    let half = j * T::lit(0.5);
    let two = T::lit(2.0) * a0;
    let lambdas = [half + two, half, -T::lit(1.5) * j, half - two];
    let basis = stationary_basis::<T>();
    std::array::from_fn(|k| (lambdas[k], basis.states[k]))
}
