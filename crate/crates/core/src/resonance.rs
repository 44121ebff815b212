//! Transition probabilities and resonance curves for two spins driven by the
//! same Rabi field.
//!
//! With `s = c·sin²(ω_R t)` and `c = a′²/(a′²+a₀²)`, the triplet transitions are
//! `P(Ψ₁→Ψ₄) = s²` and `P(Ψ₁→Ψ₂) = P(Ψ₄→Ψ₂) = 2s(1−s)`; the singlet `Ψ₃` is
//! never reached. Maxima over time follow from maximizing over `s ∈ [0, c]`.

use rayon::prelude::*;

use crate::error::Result;
use crate::model::{stationary_basis, RabiParams, ScalarProfile};
use crate::numlin::CMat4;
use crate::propagators::{prop_equal_rabi, rabi_one_spin, rabi_one_spin_literal};
use crate::scalar::{cis, Real, C};

/// One-spin transition probability `c·sin²(ω_R t)`.
pub fn rabi_probability<T: Real>(rp: &RabiParams<T>, t: T) -> T {
    let s = (rp.rabi_frequency() * t).sin();
    rp.transition_envelope() * s * s
}

/// Matrix elements `⟨Ψⱼ|R_t(F,F,J)|Ψᵢ⟩` for constant `J`, computed two ways.
#[derive(Clone, Copy, Debug)]
pub struct TwoSpinElements<T> {
    /// `direct[(j, i)] = ⟨Ψⱼ|R|Ψᵢ⟩` from the composite propagator.
    pub direct: CMat4<T>,
    /// `e^{−iωγ}u₂₁²`.
    pub psi4_psi1: C<T>,
    /// `√2 e^{−iωγ}u₁₁u₂₁`.
    pub psi2_psi1: C<T>,
    /// `√2 e^{−iωγ}u₁₂u₂₂`.
    pub psi2_psi4: C<T>,
}

impl<T: Real> TwoSpinElements<T> {
    /// Largest difference between the product formulas and the direct elements,
    /// including the vanishing singlet elements.
    pub fn discrepancy(&self) -> T {
        let d = &self.direct;
        let mut worst = (self.psi4_psi1 - d[(3, 0)])
            .norm()
            .max((self.psi2_psi1 - d[(1, 0)]).norm())
            .max((self.psi2_psi4 - d[(1, 3)]).norm());
        for k in [0, 1, 3] {
            worst = worst.max(d[(2, k)].norm()).max(d[(k, 2)].norm());
        }
        worst
    }

    pub fn probability(&self, from: usize, to: usize) -> T {
        self.direct[(to, from)].norm_sqr()
    }
}

fn one_spin_amplitudes<T: Real>(rp: &RabiParams<T>, t: T) -> crate::numlin::CMat2<T> {
    rabi_one_spin_literal(rp, t).unwrap_or_else(|_| rabi_one_spin(rp, t))
}

fn stationary_elements<T: Real>(r: &CMat4<T>) -> CMat4<T> {
    let basis = stationary_basis::<T>();
    CMat4::from_fn(|j, i| r.sandwich(&basis.states[j], &basis.states[i]))
}

pub fn two_spin_elements<T: Real>(rp: &RabiParams<T>, j: T, t: T) -> Result<TwoSpinElements<T>> {
    let r = prop_equal_rabi(rp, &ScalarProfile::Constant(j), T::zero(), t)?.matrix;
    let direct = stationary_elements(&r);
    let u = one_spin_amplitudes(rp, t);
    let phase = cis(-j * t * T::lit(0.5));
    let root2 = T::lit(2.0).sqrt();
    Ok(TwoSpinElements {
        direct,
        psi4_psi1: phase * u[(1, 0)] * u[(1, 0)],
        psi2_psi1: phase * u[(0, 0)] * u[(1, 0)] * root2,
        psi2_psi4: phase * u[(0, 1)] * u[(1, 1)] * root2,
    })
}

/// The two resonance frequencies `ω₁ = 2A₀` and `ω₂ = 2(A₀ − A)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceFrequencies<T> {
    pub omega1: T,
    pub omega2: T,
    /// `|ω₂| < 1e−12`: a zero-frequency drive.
    pub degenerate: bool,
    /// `ω₂ > 0`; a negative value (`A > A₀`) lies outside the usual grid.
    pub physical: bool,
}

pub fn resonance_frequencies<T: Real>(a: T, a0: T) -> ResonanceFrequencies<T> {
    let two = T::lit(2.0);
    let omega2 = two * (a0 - a);
    ResonanceFrequencies {
        omega1: two * a0,
        omega2,
        degenerate: omega2.abs() < T::lit(1e-12),
        physical: omega2 > T::zero(),
    }
}

/// Maximum over time of `P₁₄`, `P₂₁ = P₂₄`, and the times where they are first reached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticMaxima<T> {
    pub p14: T,
    pub p21: T,
    pub t14: T,
    pub t21: T,
}

pub fn analytic_maxima<T: Real>(rp: &RabiParams<T>) -> AnalyticMaxima<T> {
    let c = rp.transition_envelope();
    let wr = rp.rabi_frequency();
    let half = T::lit(0.5);
    if wr == T::zero() || c == T::zero() {
        return AnalyticMaxima { p14: T::zero(), p21: T::zero(), t14: T::zero(), t21: T::zero() };
    }
    let quarter_period = T::FRAC_PI_2() / wr;
    let (p21, t21) = if c >= half {
        // sin²(ω_R t) = 1/(2c)
        (half, (half / c).sqrt().min(T::one()).asin() / wr)
    } else {
        (T::lit(2.0) * c * (T::one() - c), quarter_period)
    };
    AnalyticMaxima { p14: c * c, p21, t14: quarter_period, t21 }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions<T> {
    /// Search horizon for numerical maxima; `None` means `4π/ω_R`.
    pub horizon: Option<T>,
    /// Grid points for the numerical search.
    pub t_samples: usize,
}

impl<T: Real> Default for ScanOptions<T> {
    fn default() -> Self {
        Self { horizon: None, t_samples: 2048 }
    }
}

/// One drive frequency of a resonance scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow<T> {
    pub omega: T,
    /// Closed-form maxima over `t`.
    pub p14: T,
    pub p21: T,
    pub p24: T,
    /// Maxima found by grid search plus golden-section refinement.
    pub p14_numeric: T,
    pub p21_numeric: T,
    pub p24_numeric: T,
    /// Largest probability into or out of the singlet seen on the grid.
    pub p3_leak: T,
    /// First time each closed-form maximum is reached.
    pub t14: T,
    pub t21: T,
    pub t24: T,
}

impl<T: Real> ScanRow<T> {
    pub fn disagreement(&self) -> T {
        (self.p14 - self.p14_numeric)
            .abs()
            .max((self.p21 - self.p21_numeric).abs())
            .max((self.p24 - self.p24_numeric).abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult<T> {
    pub a: T,
    pub a0: T,
    pub j: T,
    pub rows: Vec<ScanRow<T>>,
}

impl<T: Real> ScanResult<T> {
    pub fn max_disagreement(&self) -> T {
        self.rows.iter().fold(T::zero(), |m, r| m.max(r.disagreement()))
    }

    pub fn max_leak(&self) -> T {
        self.rows.iter().fold(T::zero(), |m, r| m.max(r.p3_leak))
    }
}

fn golden_max<T: Real>(f: &impl Fn(T) -> Result<T>, mut lo: T, mut hi: T) -> Result<T> {
    let g = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(f1.max(f2))
}

fn numeric_max<T: Real>(f: impl Fn(T) -> Result<T>, grid: &[T], values: &[T]) -> Result<T> {
    let (k, best) = values
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |(bk, bv), (k, v)| if *v > bv { (k, *v) } else { (bk, bv) });
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    Ok(golden_max(&f, lo, hi)?.max(best))
}

fn scan_row<T: Real>(a: T, a0: T, j: T, omega: T, opts: &ScanOptions<T>) -> Result<ScanRow<T>> {
    let rp = RabiParams::new(a, a0, omega)?;
    let an = analytic_maxima(&rp);
    let wr = rp.rabi_frequency();
    let horizon = opts.horizon.unwrap_or_else(|| {
        let rate = if wr > T::zero() { wr } else { omega.abs() };
        T::lit(4.0) * T::PI() / rate
    });
    let n = opts.t_samples.max(2);
    let grid: Vec<T> = (0..n).map(|k| horizon * T::from_usize(k).unwrap() / T::from_usize(n - 1).unwrap()).collect();
    let jp = ScalarProfile::Constant(j);
    let elements = |t: T| -> Result<CMat4<T>> {
        let r = prop_equal_rabi(&rp, &jp, T::zero(), t)?.matrix;
        Ok(stationary_elements(&r))
    };
    let mut p14 = Vec::with_capacity(n);
    let mut p21 = Vec::with_capacity(n);
    let mut p24 = Vec::with_capacity(n);
    let mut leak = T::zero();
    for &t in &grid {
        let e = elements(t)?;
        p14.push(e[(3, 0)].norm_sqr());
        p21.push(e[(1, 0)].norm_sqr());
        p24.push(e[(1, 3)].norm_sqr());
        for k in [0, 1, 3] {
            leak = leak.max(e[(2, k)].norm_sqr()).max(e[(k, 2)].norm_sqr());
        }
    }
    let p14_numeric = numeric_max(|t| Ok(elements(t)?[(3, 0)].norm_sqr()), &grid, &p14)?;
    let p21_numeric = numeric_max(|t| Ok(elements(t)?[(1, 0)].norm_sqr()), &grid, &p21)?;
    let p24_numeric = numeric_max(|t| Ok(elements(t)?[(1, 3)].norm_sqr()), &grid, &p24)?;
    Ok(ScanRow {
        omega,
        p14: an.p14,
        p21: an.p21,
        p24: an.p21,
        p14_numeric,
        p21_numeric,
        p24_numeric,
        p3_leak: leak,
        t14: an.t14,
        t21: an.t21,
        t24: an.t21,
    })
}

/// Resonance curve over a grid of drive frequencies. Rows are evaluated in
/// parallel on the current rayon pool and returned in grid order.
pub fn scan<T: Real>(a: T, a0: T, j: T, omega_grid: &[T], opts: &ScanOptions<T>) -> Result<ScanResult<T>> {
    let rows = omega_grid
        .par_iter()
        .map(|&omega| scan_row(a, a0, j, omega, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult { a, a0, j, rows })
}

/// `n` evenly spaced frequencies from `lo` to `hi` inclusive.
pub fn omega_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * T::from_usize(k).unwrap() / T::from_usize(n - 1).unwrap()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rabi_probability_examples() {
        let rp = RabiParams::<f64>::new(1.0, 2.0, 3.0).unwrap();
        assert_eq!(rabi_probability(&rp, 0.0), 0.0);
        let t = 0.7;
        let u = rabi_one_spin(&rp, t);
        assert!((rabi_probability(&rp, t) - u[(1, 0)].norm_sqr()).abs() < 1e-12);
        let res = RabiParams::<f64>::new(0.3, 1.0, 2.0).unwrap();
        assert!((res.transition_envelope() - 1.0).abs() < 1e-15);
        let t_max = std::f64::consts::FRAC_PI_2 / res.rabi_frequency();
        assert!((rabi_probability(&res, t_max) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_formulas_match_direct_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let rp = RabiParams::<f64>::new(rng.gen_range(0.05..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(0.3..3.0)).unwrap();
            let j = rng.gen_range(-2.0..2.0);
            let t = rng.gen_range(0.0..10.0);
            let el = two_spin_elements(&rp, j, t).unwrap();
            assert!(el.discrepancy() < 1e-10);
            let p = rabi_probability(&rp, t);
            assert!((el.probability(0, 3) - p * p).abs() < 1e-12);
            let u = rabi_one_spin(&rp, t);
            let expected = 2.0 * u[(0, 0)].norm_sqr() * u[(1, 0)].norm_sqr();
            assert!((el.probability(0, 1) - expected).abs() < 1e-12);
            for i in 0..4 {
                let row: f64 = (0..4).map(|k| el.probability(i, k)).sum();
                assert!((row - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn probabilities_do_not_depend_on_exchange() {
        let rp = RabiParams::<f64>::new(0.4, 0.9, 1.6).unwrap();
        let t = 2.3;
        let base = two_spin_elements(&rp, 0.0, t).unwrap();
        for j in [-1.0, 0.3, 2.5] {
            let el = two_spin_elements(&rp, j, t).unwrap();
            for from in [0, 1, 3] {
                for to in [0, 1, 3] {
                    assert!((el.probability(from, to) - base.probability(from, to)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn frequencies() {
        let f = resonance_frequencies(0.25, 1.0);
        assert_eq!((f.omega1, f.omega2), (2.0, 1.5));
        assert!(!f.degenerate && f.physical);
        let f = resonance_frequencies(0.0, 0.7);
        assert_eq!(f.omega1, f.omega2);
        let f = resonance_frequencies(0.7, 0.7);
        assert!(f.degenerate && !f.physical);
        assert!(!resonance_frequencies(1.0, 0.5).physical);
    }

    #[test]
    fn scan_at_resonances() {
        let (a, a0, j) = (0.25f64, 1.0, 0.6);
        let f = resonance_frequencies(a, a0);
        let res = scan(a, a0, j, &[f.omega1, f.omega2, 5.0], &ScanOptions::default()).unwrap();
        let r1 = &res.rows[0];
        assert!((r1.p14 - 1.0).abs() < 1e-12 && (r1.p14_numeric - 1.0).abs() < 1e-6);
        assert!((r1.p21_numeric - 0.5).abs() < 1e-6 && (r1.p24_numeric - 0.5).abs() < 1e-6);
        let r2 = &res.rows[1];
        assert!((r2.p21_numeric - 0.5).abs() < 1e-6 && (r2.p24_numeric - 0.5).abs() < 1e-6);
        assert!(res.max_disagreement() < 1e-6);
        assert!(res.max_leak() < 1e-10);
        assert!(res.rows[2].p14 < 0.05);
    }

    #[test]
    fn off_resonance_decay() {
        let (a, a0) = (0.25, 1.0);
        let grid = omega_grid(2.0, 4.0, 9);
        let res = scan(a, a0, 0.0, &grid, &ScanOptions { horizon: None, t_samples: 256 }).unwrap();
        for w in res.rows.windows(2) {
            assert!(w[1].p14 < w[0].p14);
        }
    }

    #[test]
    fn zero_frequency_rejected() {
        assert!(matches!(scan(0.2, 1.0, 0.0, &[0.0], &ScanOptions::default()), Err(Error::ZeroDriveFrequency)));
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(omega_grid(1.0, 2.0, 3), vec![1.0, 1.5, 2.0]);
        assert_eq!(omega_grid(1.0, 2.0, 1), vec![1.0]);
        assert!(omega_grid(1.0, 2.0, 0).is_empty());
    }
}
