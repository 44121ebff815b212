#![allow(dead_code)]

use rand::Rng;
use twospin::{Complex64, FieldSpec, Interp, Mat4, RabiParams, SampledProfile, ScalarProfile, Vec4};

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn vec3(rng: &mut impl Rng, r: f64) -> [f64; 3] {
    [rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r)]
}

pub fn rabi(rng: &mut impl Rng) -> RabiParams<f64> {
    RabiParams::with_phase(
        rng.gen_range(0.05..1.5),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(0.3..3.0) * if rng.gen_bool(0.2) { -1.0 } else { 1.0 },
        rng.gen_range(0.0..6.2),
    )
    .unwrap()
}

pub fn rabi_with_omega(rng: &mut impl Rng, omega: f64) -> RabiParams<f64> {
    RabiParams::with_phase(rng.gen_range(0.05..1.5), rng.gen_range(-1.5..1.5), omega, rng.gen_range(0.0..6.2)).unwrap()
}

/// Smooth-ish sampled profile on `[lo, hi]` with `n` knots.
pub fn sampled(rng: &mut impl Rng, lo: f64, hi: f64, n: usize, amp: f64, interp: Interp) -> SampledProfile<f64> {
    let knots = (0..n)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            (t, rng.gen_range(-amp..amp))
        })
        .collect();
    SampledProfile::new(knots, interp).unwrap()
}

pub fn exchange(rng: &mut impl Rng, horizon: f64) -> ScalarProfile<f64> {
    if rng.gen_bool(0.5) {
        ScalarProfile::Constant(rng.gen_range(-2.0..2.0))
    } else {
        ScalarProfile::Samples(sampled(rng, -0.5, horizon + 0.5, 8, 1.5, Interp::MonotoneCubic))
    }
}

pub fn any_field(rng: &mut impl Rng, horizon: f64) -> FieldSpec<f64> {
    match rng.gen_range(0..4) {
        0 => FieldSpec::Zero,
        1 => FieldSpec::Constant(vec3(rng, 1.5)),
        2 => FieldSpec::Rabi(rabi(rng)),
        _ => FieldSpec::ParallelZ(ScalarProfile::Samples(sampled(rng, -0.5, horizon + 0.5, 8, 1.5, Interp::MonotoneCubic))),
    }
}

pub fn rabi_or_constant(rng: &mut impl Rng) -> FieldSpec<f64> {
    if rng.gen_bool(0.5) {
        FieldSpec::Rabi(rabi(rng))
    } else {
        FieldSpec::Constant(vec3(rng, 1.5))
    }
}

pub fn state(rng: &mut impl Rng) -> Vec4 {
    twospin::CVec(std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).normalized()
}

pub fn stationary_elements(r: &Mat4) -> Mat4 {
    let basis = twospin::model::stationary_basis::<f64>();
    Mat4::from_fn(|j, i| r.sandwich(&basis.states[j], &basis.states[i]))
}
