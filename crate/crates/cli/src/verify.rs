//! Self-check: every library invariant, each reduced to a worst-case number
//! compared against its tolerance.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twospin::hamiltonian::{one_spin_h, two_spin_matrix, two_spin_matrix_entrywise};
use twospin::model::{interaction_integral, stationary_basis};
use twospin::numlin::{
    big_sigma, eigh, expm_skew_hermitian, identity2, identity4, kron, pauli, pauli_dot, rho, sigma_dot_rho, swap_matrix,
};
use twospin::oracle::{
    integrate_fixed_matrix, integrate_matrix, integrate_propagator, integrate_state, problem_hamiltonian, schrodinger_residual,
};
use twospin::propagators::{
    frame_rotation, prop_constant_parallel, prop_equal_fields, prop_equal_rabi, prop_free_interaction, prop_noninteracting,
    prop_rabi_second_spin, rabi_one_spin, rabi_one_spin_literal, rabi_second_spin_product,
};
use twospin::reductions::{
    assemble_parallel, exchange_expectation, km_matrix, reduce_parallel, rotating_frame_reduce, rotating_frame_solution,
};
use twospin::resonance::{resonance_frequencies, scan, two_spin_elements, ScanOptions};
use twospin::spectrum::{build_d, problem_scale, quartic_d, quartic_from_pq_form, quartic_from_shifted_form, solve_levels};
use twospin::{
    propagate, Complex64, Error, FieldSpec, IntegratorConfig, Interp, Mat2, Mat4, Mode, Problem, RabiParams, SampledProfile,
    ScalarProfile, Vec4,
};

use crate::problem::ProblemFile;

pub struct Outcome {
    pub name: &'static str,
    pub pass: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub error: Option<String>,
}

/// Shared state for one run. `fault` corrupts one closed form so the suite
/// can prove it notices.
struct Ctx {
    fault: bool,
}

impl Ctx {
    fn constant_parallel(&self, gamma: f64, a: f64, b: f64, tau: f64) -> Mat4 {
        let mut m = prop_constant_parallel(gamma, a, b, tau).matrix;
        if self.fault {
            m[(1, 1)] *= Complex64::new(1.0, 1e-3);
        }
        m
    }
}

type Measure = fn(&Ctx) -> Result<f64, Error>;

/// `(name, tolerance, measurement, quick)`; a check passes when the
/// measurement is below the tolerance.
const CHECKS: &[(&str, f64, Measure, bool)] = &[
    ("pauli algebra", 1e-300, pauli_algebra, true),
    ("swap matrix involution", 1e-300, swap_involution, true),
    ("swap conjugation of spin operators", 1e-15, swap_conjugation_ops, true),
    ("first and second spin operators commute", 1e-300, spins_commute, true),
    ("stationary basis diagonalizes exchange", 1e-14, stationary_basis_check, true),
    ("hamiltonian hermitian, traceless, decomposes", 1e-13, hamiltonian_checks, true),
    ("exponential of hermitian is unitary", 1e-12, expm_unitary, true),
    ("km conjugation identity", 1e-14, km_identity, true),
    ("literal rabi form equals rotating frame", 1e-12, literal_rabi, true),
    ("quartic forms agree", 1e-9, quartic_forms, true),
    ("constant parallel closed form equals exponential", 1e-10, constant_parallel_expm, true),
    ("rabi field circle and frequency identity", 1e-12, rabi_circle, true),
    ("interaction integral additive", 1e-10, integral_additive, true),
    ("frame rotation preserves exchange expectation", 1e-10, frame_exchange, true),
    ("problem file round trip", 0.5, problem_round_trip, true),
    ("closed forms unitary", 1e-10, closed_unitarity, false),
    ("closed forms compose", 1e-9, closed_composition, false),
    ("closed forms solve the equation", 1e-6, closed_residuals, false),
    ("swap conjugation of propagators", 1e-8, swap_propagators, false),
    ("closed forms match oracle", 1e-8, oracle_equivalence, false),
    ("oracle composes", 5e-10, oracle_composition, false),
    ("oracle linear and norm preserving", 1e-9, oracle_linearity, false),
    ("rk4 order, |ratio - 16|", 4.0, rk4_order, false),
    ("spectrum sum rule and swap symmetry, /scale", 1e-10, spectrum_symmetry, false),
    ("spectrum residual /scale^4 and dense agreement", 1e-9, spectrum_accuracy, false),
    ("rotating-frame solutions solve the equation", 1e-8, rotating_closure, false),
    ("parallel reduction pure phases and norm", 1e-10, reduction_norms, false),
    ("parallel reduction solves the equation", 1e-7, reduction_residual, false),
    ("parallel reduction matches closed form", 1e-9, reduction_match, false),
    ("singlet selection rule", 1e-10, selection_rule, false),
    ("transition row sums", 1e-9, row_sums, false),
    ("probabilities independent of exchange", 1e-10, exchange_independence, false),
    ("resonance maxima", 1e-6, resonance_maxima, false),
    ("second resonance suppressed", 0.5, resonance_suppression, false),
];

pub fn run(quick: bool, fault: bool) -> Vec<Outcome> {
    let ctx = Ctx { fault };
    CHECKS
        .iter()
        .filter(|c| c.3 || !quick)
        .map(|&(name, tolerance, measure, _)| {
            let start = Instant::now();
            let (worst, error) = match measure(&ctx) {
                Ok(w) => (w, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            let pass = error.is_none() && worst < tolerance;
            Outcome { name, pass, worst, tolerance, seconds: start.elapsed().as_secs_f64(), error }
        })
        .collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vec3(rng: &mut impl Rng, r: f64) -> [f64; 3] {
    [rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r)]
}

fn rabi(rng: &mut impl Rng) -> RabiParams<f64> {
    let sign = if rng.gen_bool(0.2) { -1.0 } else { 1.0 };
    RabiParams::with_phase(rng.gen_range(0.05..1.5), rng.gen_range(-1.5..1.5), sign * rng.gen_range(0.3..3.0), rng.gen_range(0.0..6.3))
        .expect("nonzero frequency")
}

fn profile(rng: &mut impl Rng) -> ScalarProfile<f64> {
    if rng.gen_bool(0.5) {
        return ScalarProfile::Constant(rng.gen_range(-2.0..2.0));
    }
    let knots = (0..8).map(|k| (-0.5 + 1.5 * k as f64, rng.gen_range(-1.5..1.5))).collect();
    ScalarProfile::Samples(SampledProfile::new(knots, Interp::MonotoneCubic).expect("increasing knots"))
}

fn field(rng: &mut impl Rng) -> FieldSpec<f64> {
    match rng.gen_range(0..4) {
        0 => FieldSpec::Zero,
        1 => FieldSpec::Constant(vec3(rng, 1.5)),
        2 => FieldSpec::Rabi(rabi(rng)),
        _ => FieldSpec::ParallelZ(profile(rng)),
    }
}

fn state(rng: &mut impl Rng) -> Vec4 {
    twospin::CVec(std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).normalized()
}

fn levi(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn pauli_algebra(_: &Ctx) -> Result<f64, Error> {
    let s = pauli::<f64>();
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let mut comm = Mat2::zeros();
            for k in 0..3 {
                comm = comm + s[k].scale_c(Complex64::new(0.0, 2.0 * levi(i, j, k)));
            }
            let anti = if i == j { identity2().scale(2.0) } else { Mat2::zeros() };
            worst = worst.max(s[i].commutator(&s[j]).max_abs_diff(&comm)).max(s[i].anticommutator(&s[j]).max_abs_diff(&anti));
        }
    }
    Ok(worst)
}

fn swap_involution(_: &Ctx) -> Result<f64, Error> {
    let a = swap_matrix::<f64>();
    Ok((a * a).max_abs_diff(&identity4()).max(a.adjoint().max_abs_diff(&a)))
}

fn swap_conjugation_ops(_: &Ctx) -> Result<f64, Error> {
    let a = swap_matrix::<f64>();
    let (s, r) = (big_sigma::<f64>(), rho::<f64>());
    let mut worst = (a * sigma_dot_rho::<f64>() * a).max_abs_diff(&sigma_dot_rho());
    for i in 0..3 {
        worst = worst
            .max((a * s[i] * a).max_abs_diff(&r[i]))
            .max((a * r[i] * a).max_abs_diff(&s[i]))
            .max((a * (s[i] + r[i]) * a).max_abs_diff(&(s[i] + r[i])))
            .max((a * (s[i] - r[i]) * a).max_abs_diff(&(r[i] - s[i])));
    }
    Ok(worst)
}

fn spins_commute(_: &Ctx) -> Result<f64, Error> {
    let (s, r) = (big_sigma::<f64>(), rho::<f64>());
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max(s[i].commutator(&r[j]).max_abs());
        }
    }
    Ok(worst)
}

fn stationary_basis_check(_: &Ctx) -> Result<f64, Error> {
    let b = stationary_basis::<f64>();
    let sr = sigma_dot_rho::<f64>();
    let mut worst = 0.0f64;
    for (k, l) in [1.0, 1.0, -3.0, 1.0].iter().enumerate() {
        worst = worst.max((sr * b.states[k]).max_abs_diff(&b.states[k].scale(*l)));
        for j in 0..4 {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((b.states[j].inner(&b.states[k]).norm() - target).abs());
        }
    }
    Ok(worst)
}

fn hamiltonian_checks(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(1);
    let (id, s) = (identity2::<f64>(), pauli::<f64>());
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (g, f, j) = (vec3(&mut rng, 2.0), vec3(&mut rng, 2.0), rng.gen_range(-3.0..3.0));
        let h = two_spin_matrix(&g, &f, j);
        let mut parts = kron(&one_spin_h(&g), &id) + kron(&id, &one_spin_h(&f));
        for k in 0..3 {
            parts = parts + kron(&s[k], &s[k]).scale(0.5 * j);
        }
        worst = worst
            .max(h.hermiticity_defect())
            .max(h.trace().norm())
            .max(h.max_abs_diff(&parts))
            .max(h.max_abs_diff(&two_spin_matrix_entrywise(&g, &f, j)));
    }
    Ok(worst)
}

fn expm_unitary(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let h = two_spin_matrix(&vec3(&mut rng, 2.0), &vec3(&mut rng, 2.0), rng.gen_range(-3.0..3.0));
        worst = worst.max(expm_skew_hermitian(&h, rng.gen_range(-10.0..10.0))?.unitarity_defect());
    }
    Ok(worst)
}

fn km_identity(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(3);
    let (s, k) = (pauli::<f64>(), km_matrix::<f64>());
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (e, f) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let lhs = k * (s[0].scale(e) + s[2].scale(f)) * k;
        worst = worst.max(lhs.max_abs_diff(&(s[0].scale(f) + s[2].scale(e))));
    }
    Ok(worst)
}

fn literal_rabi(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rp = rabi(&mut rng);
        let t = rng.gen_range(0.0..10.0);
        worst = worst.max(rabi_one_spin_literal(&rp, t)?.max_abs_diff(&rabi_one_spin(&rp, t)));
    }
    Ok(worst)
}

fn quartic_forms(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (g, a, b) = (rng.gen_range(-2.0..2.0), vec3(&mut rng, 2.0), vec3(&mut rng, 2.0));
        let (x, y, z) = (quartic_d(g, &a, &b), quartic_from_shifted_form(g, &a, &b), quartic_from_pq_form(g, &a, &b));
        for k in 0..5 {
            worst = worst.max((x[k] - y[k]).abs()).max((x[k] - z[k]).abs());
        }
    }
    Ok(worst)
}

fn constant_parallel_expm(ctx: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (g, a, b, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..10.0));
        let exact = expm_skew_hermitian(&two_spin_matrix(&[0.0, 0.0, a], &[0.0, 0.0, b], 2.0 * g), t)?;
        worst = worst.max(ctx.constant_parallel(g, a, b, t).max_abs_diff(&exact));
    }
    Ok(worst)
}

fn rabi_circle(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rp = rabi(&mut rng);
        let f = rp.field_at(rng.gen_range(-50.0..50.0));
        let ratio = rp.rabi_frequency() / rp.omega;
        worst = worst
            .max((f[0].hypot(f[1]) - rp.amplitude).abs())
            .max((ratio * ratio - rp.a_prime().powi(2) - rp.a_zero().powi(2)).abs());
    }
    Ok(worst)
}

fn integral_additive(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let j = profile(&mut rng);
        let (a, b, c) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
        let parts = interaction_integral(&j, a, b)? + interaction_integral(&j, b, c)?;
        worst = worst.max((interaction_integral(&j, a, c)? - parts).abs());
    }
    Ok(worst)
}

fn frame_exchange(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(9);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let psi = state(&mut rng);
        let rotated = frame_rotation(rng.gen_range(-30.0..30.0)) * psi;
        worst = worst.max((exchange_expectation(&rotated) - exchange_expectation(&psi)).abs());
    }
    Ok(worst)
}

fn problem_round_trip(_: &Ctx) -> Result<f64, Error> {
    let text = r#"{"G":{"type":"rabi","A":0.25,"A0":1.0,"omega":2.0,"phi":0.1},
        "F":{"type":"parallel_z","profile":{"type":"samples","knots":[[0,1],[2,0.5]],"interp":"linear"}},
        "J":{"type":"constant","value":0.5},"t0":0.0}"#;
    let bad = |_| Error::InvalidConfig("problem round trip".into());
    let p = ProblemFile::parse(text).map_err(bad)?;
    let again = ProblemFile::parse(&serde_json::to_string(&p).map_err(|_| bad(String::new()))?).map_err(bad)?;
    let same = p == again && p.to_model().map_err(bad)? == again.to_model().map_err(bad)?;
    Ok(if same { 0.0 } else { 1.0 })
}

fn closed_unitarity(ctx: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(10);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (t0, t1) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..10.0));
        let (g, f, j, rp) = (field(&mut rng), field(&mut rng), profile(&mut rng), rabi(&mut rng));
        let (x, a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        for d in [
            prop_free_interaction(&j, t0, t1)?.unitarity_defect(),
            prop_noninteracting(&g, &f, t0, t1)?.unitarity_defect(),
            prop_equal_fields(&g, &j, t0, t1)?.unitarity_defect(),
            ctx.constant_parallel(x, a, b, t1).unitarity_defect(),
            prop_rabi_second_spin(&rp, t1).unitarity_defect(),
            prop_equal_rabi(&rp, &j, t0, t1)?.unitarity_defect(),
            rabi_one_spin_literal(&rp, t1)?.unitarity_defect(),
        ] {
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

fn closed_composition(ctx: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (g, f, j, rp) = (field(&mut rng), field(&mut rng), profile(&mut rng), rabi(&mut rng));
        let (x, a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let ts: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.0..10.0));
        let fams: [&dyn Fn(f64, f64) -> Result<Mat4, Error>; 5] = [
            &|s, u| Ok(prop_free_interaction(&j, s, u)?.matrix),
            &|s, u| Ok(prop_noninteracting(&g, &f, s, u)?.matrix),
            &|s, u| Ok(prop_equal_fields(&g, &j, s, u)?.matrix),
            &|s, u| Ok(prop_equal_rabi(&rp, &j, s, u)?.matrix),
            &|s, u| Ok(ctx.constant_parallel(x, a, b, u) * ctx.constant_parallel(x, a, b, s).adjoint()),
        ];
        for r in fams {
            worst = worst.max((r(ts[1], ts[2])? * r(ts[0], ts[1])?).max_abs_diff(&r(ts[0], ts[2])?));
        }
    }
    Ok(worst)
}

fn closed_residuals(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(12);
    let h = 1e-4;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (g, f, j, rp) = (field(&mut rng), field(&mut rng), profile(&mut rng), rabi(&mut rng));
        let t = rng.gen_range(0.5..9.5);
        let (x, a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let cases: Vec<(Problem, Box<dyn Fn(f64) -> Result<Mat4, Error>>)> = vec![
            (Problem::new(FieldSpec::Zero, FieldSpec::Zero, j.clone()), Box::new(|s| Ok(prop_free_interaction(&j, 0.0, s)?.matrix))),
            (Problem::new(g.clone(), f.clone(), ScalarProfile::zero()), Box::new(|s| Ok(prop_noninteracting(&g, &f, 0.0, s)?.matrix))),
            (Problem::new(g.clone(), g.clone(), j.clone()), Box::new(|s| Ok(prop_equal_fields(&g, &j, 0.0, s)?.matrix))),
            (Problem::new(FieldSpec::Rabi(rp), FieldSpec::Rabi(rp), j.clone()), Box::new(|s| Ok(prop_equal_rabi(&rp, &j, 0.0, s)?.matrix))),
            (
                Problem::new(FieldSpec::Constant([0.0, 0.0, a]), FieldSpec::Constant([0.0, 0.0, b]), ScalarProfile::Constant(2.0 * x)),
                Box::new(|s| Ok(prop_constant_parallel(x, a, b, s).matrix)),
            ),
            (Problem::new(FieldSpec::Zero, FieldSpec::Rabi(rp), ScalarProfile::zero()), Box::new(|s| Ok(rabi_second_spin_product(&rp, s)))),
        ];
        for (p, sol) in &cases {
            worst = worst.max(schrodinger_residual(problem_hamiltonian(p), sol, t, h)?);
        }
    }
    Ok(worst)
}

fn swap_propagators(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(13);
    let cfg = IntegratorConfig::default();
    let a = swap_matrix::<f64>();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let pick = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { FieldSpec::Rabi(rabi(rng)) } else { FieldSpec::Constant(vec3(rng, 1.5)) };
        let p = Problem::new(pick(&mut rng), pick(&mut rng), ScalarProfile::Constant(rng.gen_range(-2.0..2.0)));
        let t = rng.gen_range(0.1..8.0);
        let r = propagate(&p, 0.0, t, Mode::Auto, &cfg)?.matrix;
        let s = propagate(&p.swapped(), 0.0, t, Mode::Auto, &cfg)?.matrix;
        worst = worst.max((a * r * a).max_abs_diff(&s));
    }
    Ok(worst)
}

fn oracle_equivalence(ctx: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(14);
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let t = rng.gen_range(0.1..10.0);
        let (g, j, rp) = (field(&mut rng), profile(&mut rng), rabi(&mut rng));
        let (x, a, b) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let oracle = |p: &Problem| integrate_propagator(p, 0.0, t, &cfg).map(|s| s.propagator.matrix);
        let pairs = [
            (prop_free_interaction(&j, 0.0, t)?.matrix, oracle(&Problem::new(FieldSpec::Zero, FieldSpec::Zero, j.clone()))?),
            (prop_equal_fields(&g, &j, 0.0, t)?.matrix, oracle(&Problem::new(g.clone(), g.clone(), j.clone()))?),
            (
                ctx.constant_parallel(x, a, b, t),
                oracle(&Problem::new(FieldSpec::Constant([0.0, 0.0, a]), FieldSpec::Constant([0.0, 0.0, b]), ScalarProfile::Constant(2.0 * x)))?,
            ),
            (rabi_second_spin_product(&rp, t), oracle(&Problem::new(FieldSpec::Zero, FieldSpec::Rabi(rp), ScalarProfile::zero()))?),
            (prop_equal_rabi(&rp, &j, 0.0, t)?.matrix, oracle(&Problem::new(FieldSpec::Rabi(rp), FieldSpec::Rabi(rp), j.clone()))?),
        ];
        for (closed, numeric) in &pairs {
            worst = worst.max(closed.max_abs_diff(numeric));
        }
        let one = integrate_matrix(|s: f64| Ok::<Mat2, Error>(pauli_dot(&rp.field_at(s))), 0.0, t, &cfg)?.matrix;
        worst = worst.max(rabi_one_spin_literal(&rp, t)?.max_abs_diff(&one));
    }
    Ok(worst)
}

fn oracle_composition(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(15);
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p = Problem::new(field(&mut rng), field(&mut rng), profile(&mut rng));
        let first = integrate_propagator(&p, 0.0, 1.0, &cfg)?.propagator;
        let second = integrate_propagator(&p, 1.0, 2.0, &cfg)?.propagator;
        let whole = integrate_propagator(&p, 0.0, 2.0, &cfg)?.propagator;
        worst = worst.max(first.then(&second).matrix.max_abs_diff(&whole.matrix));
    }
    Ok(worst)
}

fn oracle_linearity(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(16);
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p = Problem::new(field(&mut rng), field(&mut rng), profile(&mut rng));
        let (u, v) = (state(&mut rng), state(&mut rng));
        let (alpha, beta) = (Complex64::new(0.3, -0.4), Complex64::new(-0.7, 0.2));
        let evolve = |psi: &Vec4| integrate_state(&p, psi, 0.0, 3.0, &cfg);
        let (su, sv) = (evolve(&u)?, evolve(&v)?);
        let mix = evolve(&(u.scale_c(alpha) + v.scale_c(beta)))?;
        worst = worst
            .max((su.raw_norm_ratio - 1.0).abs())
            .max(mix.state.max_abs_diff(&(su.state.scale_c(alpha) + sv.state.scale_c(beta))));
    }
    Ok(worst)
}

fn rk4_order(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(17);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let h = two_spin_matrix(&vec3(&mut rng, 1.5), &vec3(&mut rng, 1.5), rng.gen_range(-2.0..2.0));
        let exact = expm_skew_hermitian(&h, 1.0)?;
        let err = |n| integrate_fixed_matrix(|_| Ok::<Mat4, Error>(h), 0.0, 1.0, n).map(|m| m.max_abs_diff(&exact));
        worst = worst.max((err(20)? / err(40)? - 16.0).abs());
    }
    Ok(worst)
}

fn spectrum_symmetry(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(18);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (g, a, b) = (rng.gen_range(-2.0..2.0), vec3(&mut rng, 2.0), vec3(&mut rng, 2.0));
        let scale = problem_scale(g, &a, &b);
        let (l, m) = (solve_levels(g, &a, &b)?, solve_levels(g, &b, &a)?);
        worst = worst.max(l.roots.iter().sum::<f64>().abs() / scale);
        for k in 0..4 {
            worst = worst.max((l.roots[k] - m.roots[k]).abs() / scale);
        }
    }
    Ok(worst)
}

fn spectrum_accuracy(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(19);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let (g, a) = (rng.gen_range(-2.0..2.0), vec3(&mut rng, 2.0));
        let b = if k % 4 == 0 { a } else { vec3(&mut rng, 2.0) };
        let scale = problem_scale(g, &a, &b);
        let l = solve_levels(g, &a, &b)?;
        let dense = eigh(&build_d(g, &a, &b, 0.0))?;
        for i in 0..4 {
            worst = worst
                .max(l.root_residuals[i] / scale.powi(4))
                .max((l.roots[i] - dense.values[i]).abs())
                .max((l.vectors[i].norm() - 1.0).abs());
        }
    }
    Ok(worst)
}

fn rotating_closure(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(20);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let f = rabi(&mut rng);
        let g = RabiParams::with_phase(rng.gen_range(0.05..1.5), rng.gen_range(-1.5..1.5), f.omega, rng.gen_range(0.0..6.3))?;
        let j = rng.gen_range(-2.0..2.0);
        let rf = rotating_frame_reduce(&f, &g, j)?;
        let l = solve_levels(rf.gamma, &rf.a, &rf.b)?;
        let p = Problem::new(FieldSpec::Rabi(g), FieldSpec::Rabi(f), ScalarProfile::Constant(j));
        for i in 0..4 {
            for _ in 0..5 {
                let t = rng.gen_range(0.0..10.0);
                let sol = |s| rotating_frame_solution(&rf, l.roots[i], &l.vectors[i], s);
                worst = worst.max(schrodinger_residual(problem_hamiltonian(&p), sol, t, 1e-4)?);
            }
        }
    }
    Ok(worst)
}

fn reduction_cases(rng: &mut ChaCha8Rng) -> Vec<(ScalarProfile<f64>, ScalarProfile<f64>, ScalarProfile<f64>)> {
    let mut out = Vec::new();
    for _ in 0..3 {
        let b = profile(rng);
        out.push((profile(rng), profile(rng), ScalarProfile::Constant(rng.gen_range(-2.0..2.0))));
        out.push((b.clone(), b, profile(rng)));
        out.push((profile(rng), profile(rng), ScalarProfile::zero()));
    }
    out
}

fn reduction_norms(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(21);
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for (b1, b2, j) in reduction_cases(&mut rng) {
        let red = reduce_parallel(b1, b2, j, 10.0, &cfg)?;
        let psi0 = twospin::CVec([Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.7)]);
        let (c1, c4) = (Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.0));
        let n0 = assemble_parallel(&red, c1, c4, &psi0, 0.0)?.norm();
        for _ in 0..10 {
            let t = rng.gen_range(0.0..10.0);
            worst = worst
                .max((assemble_parallel(&red, c1, c4, &psi0, t)?.norm() - n0).abs())
                .max((red.v1_phase(t)?.norm() - 1.0).abs())
                .max((red.v4_phase(t)?.norm() - 1.0).abs());
        }
    }
    Ok(worst)
}

fn reduction_residual(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(22);
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for (b1, b2, j) in reduction_cases(&mut rng) {
        let red = reduce_parallel(b1.clone(), b2.clone(), j.clone(), 10.0, &cfg)?;
        let p = Problem::new(FieldSpec::ParallelZ(b1), FieldSpec::ParallelZ(b2), j);
        for _ in 0..5 {
            let t = rng.gen_range(0.1..9.9);
            worst = worst.max(schrodinger_residual(problem_hamiltonian(&p), |s| red.propagator(s), t, 1e-4)?);
        }
    }
    Ok(worst)
}

fn reduction_match(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(23);
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (x, y, j, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..10.0));
        let red = reduce_parallel(ScalarProfile::Constant(x), ScalarProfile::Constant(y), ScalarProfile::Constant(j), 10.0, &cfg)?;
        worst = worst.max(red.propagator(t)?.max_abs_diff(&prop_constant_parallel(0.5 * j, x, y, t).matrix));
    }
    Ok(worst)
}

fn selection_rule(_: &Ctx) -> Result<f64, Error> {
    let basis = stationary_basis::<f64>();
    let mut worst = 0.0f64;
    for iw in 0..40 {
        let rp = RabiParams::new(0.25, 1.0, 0.05 + 0.1 * iw as f64)?;
        for it in 0..40 {
            let r = prop_equal_rabi(&rp, &ScalarProfile::Constant(0.6), 0.0, 0.5 * it as f64)?.matrix;
            for k in [0, 1, 3] {
                worst = worst
                    .max(r.sandwich(&basis.states[2], &basis.states[k]).norm())
                    .max(r.sandwich(&basis.states[k], &basis.states[2]).norm());
            }
        }
    }
    Ok(worst)
}

fn row_sums(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(24);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let e = two_spin_elements(&rabi(&mut rng), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..20.0))?;
        for i in 0..4 {
            let total: f64 = (0..4).map(|j| e.probability(i, j)).sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(worst)
}

fn exchange_independence(_: &Ctx) -> Result<f64, Error> {
    let mut rng = rng(25);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (rp, t) = (rabi(&mut rng), rng.gen_range(0.0..20.0));
        let base = two_spin_elements(&rp, 0.0, t)?;
        for j in [-1.5, -0.3, 0.7, 2.0] {
            let e = two_spin_elements(&rp, j, t)?;
            for (from, to) in [(0, 3), (1, 0), (1, 3), (0, 0), (3, 1)] {
                worst = worst.max((e.probability(from, to) - base.probability(from, to)).abs());
            }
        }
    }
    Ok(worst)
}

fn resonance_maxima(_: &Ctx) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for (a, a0) in [(0.25, 1.0), (0.4, 0.7), (0.1, 1.6)] {
        let w = resonance_frequencies(a, a0);
        let res = scan(a, a0, 0.4, &[w.omega1, w.omega2], &ScanOptions::default())?;
        let (r1, r2) = (&res.rows[0], &res.rows[1]);
        for (got, want) in [(r1.p14_numeric, 1.0f64), (r1.p21_numeric, 0.5), (r1.p24_numeric, 0.5), (r2.p21_numeric, 0.5), (r2.p24_numeric, 0.5)] {
            worst = worst.max((got - want).abs());
        }
        worst = worst.max(res.max_disagreement());
    }
    Ok(worst)
}

fn resonance_suppression(_: &Ctx) -> Result<f64, Error> {
    let w = resonance_frequencies(0.25, 1.0);
    let res = scan(0.25, 1.0, 0.4, &[w.omega1, w.omega2], &ScanOptions::default())?;
    Ok(if res.rows[1].p21_numeric < res.rows[0].p14_numeric { 0.0 } else { 1.0 })
}
