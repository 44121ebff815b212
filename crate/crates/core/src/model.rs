//! Problem description: external fields, exchange interaction, reference time.
//!
//! All quantities are in units of inverse time (ħ = 1).

use crate::error::{Error, Result};
use crate::numlin::{CVec4, CVec};
use crate::scalar::{re, Real};

/// Interpolation rule between sampled knots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Interp {
    /// Monotone piecewise-cubic Hermite (Fritsch–Butland slopes).
    #[default]
    MonotoneCubic,
    Linear,
}

/// A scalar function of time given by knots.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile<T> {
    times: Vec<T>,
    values: Vec<T>,
    slopes: Vec<T>,
    interp: Interp,
}

impl<T: Real> SampledProfile<T> {
    pub fn new(knots: Vec<(T, T)>, interp: Interp) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidProfile("at least two knots are required".into()));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidProfile("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidProfile("knot times must be strictly increasing".into()));
        }
        let (times, values): (Vec<T>, Vec<T>) = knots.into_iter().unzip();
        let slopes = match interp {
            Interp::MonotoneCubic => monotone_slopes(&times, &values),
            Interp::Linear => Vec::new(),
        };
        Ok(Self { times, values, slopes, interp })
    }

    pub fn knots(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn span(&self) -> (T, T) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    fn check(&self, t: T) -> Result<()> {
        let (lo, hi) = self.span();
        if t >= lo && t <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange { t: t.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() })
        }
    }

    fn segment(&self, t: T) -> usize {
        let n = self.times.len();
        match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(k) => k.min(n - 2),
            Err(k) => k.saturating_sub(1).min(n - 2),
        }
    }

    fn eval_in(&self, k: usize, t: T) -> T {
        let (x0, x1) = (self.times[k], self.times[k + 1]);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let h = x1 - x0;
        let s = (t - x0) / h;
        match self.interp {
            Interp::Linear => y0 + (y1 - y0) * s,
            Interp::MonotoneCubic => {
                let (two, three) = (T::lit(2.0), T::lit(3.0));
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = two * s3 - three * s2 + T::one();
                let h10 = s3 - two * s2 + s;
                let h01 = three * s2 - two * s3;
                let h11 = s3 - s2;
                h00 * y0 + h10 * h * self.slopes[k] + h01 * y1 + h11 * h * self.slopes[k + 1]
            }
        }
    }

    pub fn eval(&self, t: T) -> Result<T> {
        self.check(t)?;
        Ok(self.eval_in(self.segment(t), t))
    }

    /// `∫_{a}^{b}` of the interpolant. Simpson's rule on each knot segment is
    /// exact because the interpolant is at most cubic there.
    pub fn integral(&self, a: T, b: T) -> Result<T> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Ok(T::zero());
        }
        let (lo, hi, sign) = if a < b { (a, b, T::one()) } else { (b, a, -T::one()) };
        let mut total = T::zero();
        let first = self.segment(lo);
        let last = self.segment(hi);
        for k in first..=last {
            let u = lo.max(self.times[k]);
            let v = hi.min(self.times[k + 1]);
            if v > u {
                let mid = (u + v) * T::lit(0.5);
                total += (v - u) / T::lit(6.0)
                    * (self.eval_in(k, u) + T::lit(4.0) * self.eval_in(k, mid) + self.eval_in(k, v));
            }
        }
        Ok(sign * total)
    }
}

fn monotone_slopes<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<T> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut m = vec![T::zero(); n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > T::zero() {
            let (h0, h1) = (h[k - 1], h[k]);
            let three = T::lit(3.0);
            let two = T::lit(2.0);
            m[k] = three * (h0 + h1) / ((two * h1 + h0) / d[k - 1] + (h1 + two * h0) / d[k]);
        }
    }
    m
}

/// Scalar time profile for `J(t)` or a field magnitude along z.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarProfile<T> {
    Constant(T),
    Samples(SampledProfile<T>),
}

impl<T: Real> ScalarProfile<T> {
    pub fn zero() -> Self {
        ScalarProfile::Constant(T::zero())
    }

    pub fn eval(&self, t: T) -> Result<T> {
        match self {
            ScalarProfile::Constant(v) => Ok(*v),
            ScalarProfile::Samples(s) => s.eval(t),
        }
    }

    pub fn integral(&self, a: T, b: T) -> Result<T> {
        match self {
            ScalarProfile::Constant(v) => Ok(*v * (b - a)),
            ScalarProfile::Samples(s) => s.integral(a, b),
        }
    }

    pub fn as_constant(&self) -> Option<T> {
        match self {
            ScalarProfile::Constant(v) => Some(*v),
            ScalarProfile::Samples(_) => None,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        matches!(self, ScalarProfile::Constant(v) if *v == T::zero())
    }

    pub fn scaled(&self, s: T) -> Self {
        match self {
            ScalarProfile::Constant(v) => ScalarProfile::Constant(*v * s),
            ScalarProfile::Samples(p) => {
                let knots = p.knots().map(|(t, v)| (t, v * s)).collect();
                ScalarProfile::Samples(SampledProfile::new(knots, p.interp()).expect("scaling keeps knots valid"))
            }
        }
    }
}

/// `Φ(t) = ∫_{t0}^{t} J(τ) dτ`.
pub fn interaction_integral<T: Real>(j: &ScalarProfile<T>, t0: T, t: T) -> Result<T> {
    j.integral(t0, t)
}

/// A circularly rotating field `(A cos(ωt+φ), A sin(ωt+φ), A₀)` and the
/// rotating-frame quantities derived from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiParams<T> {
    pub amplitude: T,
    pub z_field: T,
    pub omega: T,
    pub phase: T,
}

impl<T: Real> RabiParams<T> {
    pub fn new(amplitude: T, z_field: T, omega: T) -> Result<Self> {
        Self::with_phase(amplitude, z_field, omega, T::zero())
    }

    pub fn with_phase(amplitude: T, z_field: T, omega: T, phase: T) -> Result<Self> {
        if omega == T::zero() || !omega.is_finite() {
            return Err(Error::ZeroDriveFrequency);
        }
        Ok(Self { amplitude, z_field, omega, phase })
    }

    /// `a′ = A/ω`.
    pub fn a_prime(&self) -> T {
        self.amplitude / self.omega
    }

    /// `a₀ = A₀/ω − 1/2`.
    pub fn a_zero(&self) -> T {
        self.z_field / self.omega - T::lit(0.5)
    }

    /// Detuning `A₀ − ω/2` of the rotating-frame field.
    pub fn detuning(&self) -> T {
        self.z_field - self.omega * T::lit(0.5)
    }

    /// `ω_R = √(A² + (A₀ − ω/2)²)`.
    pub fn rabi_frequency(&self) -> T {
        self.amplitude.hypot(self.detuning())
    }

    /// `α = a₀ − ω_R/ω`.
    pub fn alpha(&self) -> T {
        self.a_zero() - self.rabi_frequency() / self.omega
    }

    /// Constant field seen in the frame rotating with the drive.
    pub fn rotating_frame_field(&self) -> [T; 3] {
        [
            self.amplitude * self.phase.cos(),
            self.amplitude * self.phase.sin(),
            self.detuning(),
        ]
    }

    /// `a′² / (a′² + a₀²)`, the envelope of the one-spin transition probability.
    pub fn transition_envelope(&self) -> T {
        let ap2 = self.a_prime().powi(2);
        let denom = ap2 + self.a_zero().powi(2);
        if denom == T::zero() {
            T::zero()
        } else {
            ap2 / denom
        }
    }

    pub fn field_at(&self, t: T) -> [T; 3] {
        let arg = self.omega * t + self.phase;
        [self.amplitude * arg.cos(), self.amplitude * arg.sin(), self.z_field]
    }
}

/// External field acting on one spin.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec<T> {
    Zero,
    Constant([T; 3]),
    Rabi(RabiParams<T>),
    ParallelZ(ScalarProfile<T>),
}

impl<T: Real> FieldSpec<T> {
    pub fn field_at(&self, t: T) -> Result<[T; 3]> {
        let z = T::zero();
        match self {
            FieldSpec::Zero => Ok([z, z, z]),
            FieldSpec::Constant(b) => Ok(*b),
            FieldSpec::Rabi(rp) => Ok(rp.field_at(t)),
            FieldSpec::ParallelZ(p) => Ok([z, z, p.eval(t)?]),
        }
    }

    /// The z-component profile if the field is always along z.
    pub fn z_profile(&self) -> Option<ScalarProfile<T>> {
        match self {
            FieldSpec::Zero => Some(ScalarProfile::zero()),
            FieldSpec::Constant([x, y, z]) if *x == T::zero() && *y == T::zero() => {
                Some(ScalarProfile::Constant(*z))
            }
            FieldSpec::Rabi(rp) if rp.amplitude == T::zero() => Some(ScalarProfile::Constant(rp.z_field)),
            FieldSpec::ParallelZ(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// The constant value, if the field does not depend on time.
    pub fn as_constant(&self) -> Option<[T; 3]> {
        let z = T::zero();
        match self {
            FieldSpec::Zero => Some([z, z, z]),
            FieldSpec::Constant(b) => Some(*b),
            FieldSpec::Rabi(rp) if rp.amplitude == T::zero() => Some([z, z, rp.z_field]),
            FieldSpec::ParallelZ(ScalarProfile::Constant(v)) => Some([z, z, *v]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant().map_or(false, |b| b.iter().all(|x| *x == T::zero()))
    }
}

/// `field_at` as a free function.
pub fn field_at<T: Real>(f: &FieldSpec<T>, t: T) -> Result<[T; 3]> {
    f.field_at(t)
}

/// Two spins: field `g` on the first spin, `f` on the second, exchange `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSpinProblem<T> {
    pub g: FieldSpec<T>,
    pub f: FieldSpec<T>,
    pub j: ScalarProfile<T>,
    /// Lower limit of the interaction integral.
    pub t0: T,
}

impl<T: Real> TwoSpinProblem<T> {
    pub fn new(g: FieldSpec<T>, f: FieldSpec<T>, j: ScalarProfile<T>) -> Self {
        Self { g, f, j, t0: T::zero() }
    }

    pub fn with_t0(mut self, t0: T) -> Self {
        self.t0 = t0;
        self
    }

    /// The problem with the two spins exchanged.
    pub fn swapped(&self) -> Self {
        Self { g: self.f.clone(), f: self.g.clone(), j: self.j.clone(), t0: self.t0 }
    }
}

/// Stationary states of two spins in equal z-fields:
/// `Ψ₁ = Θ₁`, `Ψ₂ = (Θ₂+Θ₃)/√2`, `Ψ₃ = (Θ₃−Θ₂)/√2` (singlet), `Ψ₄ = Θ₄`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryBasis<T> {
    pub states: [CVec4<T>; 4],
}

impl<T: Real> StationaryBasis<T> {
    pub fn singlet(&self) -> &CVec4<T> {
        &self.states[2]
    }
}

pub fn stationary_basis<T: Real>() -> StationaryBasis<T> {
    let h = T::lit(0.5).sqrt();
    let z = T::zero();
    StationaryBasis {
        states: [
            CVec::basis(0),
            CVec([re(z), re(h), re(h), re(z)]),
            CVec([re(z), re(-h), re(h), re(z)]),
            CVec::basis(3),
        ],
    }
}
