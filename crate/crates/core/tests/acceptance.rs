//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use twospin::hamiltonian::two_spin_matrix;
use twospin::model::stationary_basis;
use twospin::numlin::{eigh, expm_skew_hermitian, pauli_dot, swap_matrix};
use twospin::oracle::{integrate_fixed_matrix, integrate_matrix, integrate_propagator, problem_hamiltonian, schrodinger_residual};
use twospin::propagators::{
    closed_form, prop_constant_parallel, prop_equal_fields, prop_equal_rabi, prop_free_interaction, prop_noninteracting,
    prop_rabi_second_spin, rabi_one_spin, rabi_one_spin_literal, rabi_second_spin_product,
};
use twospin::reductions::{assemble_parallel, reduce_parallel, rotating_frame_reduce, rotating_frame_solution};
use twospin::resonance::{resonance_frequencies, scan, ScanOptions};
use twospin::spectrum::{
    build_d, eval_pq_form, poly_eval, problem_scale, quartic_d, quartic_from_pq_form, quartic_from_shifted_form, solve_levels,
    stationary_rabi,
};
use twospin::{
    propagate, Complex64, FieldSpec, IntegratorConfig, Interp, Mat2, Mat4, Mode, Problem, SampledProfile, ScalarProfile, Vec2,
};

use common::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

type Check = fn() -> Result<Verdict, twospin::Error>;

fn cfg() -> IntegratorConfig<f64> {
    IntegratorConfig::default()
}

fn unitarity() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(101);
    let draws = 200;
    let mut worst: Vec<(&str, f64)> = Vec::new();
    let mut track = |name: &'static str, d: f64| match worst.iter_mut().find(|(n, _)| *n == name) {
        Some(e) => e.1 = e.1.max(d),
        None => worst.push((name, d)),
    };
    for _ in 0..draws {
        let (t0, t1) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..10.0));
        let j = exchange(&mut rng, 10.0);
        track("free_interaction", prop_free_interaction(&j, t0, t1)?.unitarity_defect());
        let (g, f) = (any_field(&mut rng, 10.0), any_field(&mut rng, 10.0));
        track("noninteracting", prop_noninteracting(&g, &f, t0, t1)?.unitarity_defect());
        track("equal_fields", prop_equal_fields(&g, &j, t0, t1)?.unitarity_defect());

        let gamma = rng.gen_range(-2.0..2.0);
        let (a, b) = if rng.gen_bool(0.2) {
            let a = rng.gen_range(-2.0..2.0);
            (a, a + rng.gen_range(-1e-9..1e-9))
        } else {
            (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        };
        let gamma = if rng.gen_bool(0.1) { 0.0 } else { gamma };
        track("constant_parallel", prop_constant_parallel(gamma, a, b, t1).unitarity_defect());

        let rp = rabi(&mut rng);
        track("rabi_one_spin", rabi_one_spin(&rp, t1).unitarity_defect());
        track("rabi_one_spin_literal", rabi_one_spin_literal(&rp, t1)?.unitarity_defect());
        track("rabi_second_spin", prop_rabi_second_spin(&rp, t1).unitarity_defect());
        track("rabi_second_spin_product", rabi_second_spin_product(&rp, t1).unitarity_defect());
        track("equal_rabi_composition", prop_equal_rabi(&rp, &j, t0, t1)?.unitarity_defect());

        let b1 = ScalarProfile::Samples(sampled(&mut rng, -0.5, 10.5, 8, 1.5, Interp::MonotoneCubic));
        let b2 = ScalarProfile::Samples(sampled(&mut rng, -0.5, 10.5, 8, 1.5, Interp::MonotoneCubic));
        for (x, y, jj) in [(b1.clone(), b1, j.clone()), (b2.clone(), b2.clone().scaled(-0.5), ScalarProfile::zero())] {
            let red = reduce_parallel(x, y, jj, 10.0, &cfg())?;
            track("parallel_reduction", red.propagator(t1)?.unitarity_defect());
        }

        let jc = rng.gen_range(-2.0..2.0);
        let other = rabi_with_omega(&mut rng, rp.omega);
        let p = Problem::new(FieldSpec::Rabi(rp), FieldSpec::Rabi(other), ScalarProfile::Constant(jc));
        track("rotating_frame_spectral", closed_form(&p, t0, t1)?.unitarity_defect());
        let p = Problem::new(FieldSpec::Constant(vec3(&mut rng, 2.0)), FieldSpec::Constant(vec3(&mut rng, 2.0)), ScalarProfile::Constant(jc));
        track("constant_spectral", closed_form(&p, t0, t1)?.unitarity_defect());
    }
    let max = worst.iter().fold(0.0f64, |m, e| m.max(e.1));
    let names: Vec<String> = worst.iter().map(|(n, d)| format!("{n}={d:.1e}")).collect();
    Ok(verdict(max < 1e-10, format!("{draws} draws per family, worst defect {max:.2e} [{}]", names.join(", "))))
}

fn oracle_equivalence() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(202);
    let cfg = cfg();
    let draws = 50;
    let mut report = Vec::new();
    let mut overall = 0.0f64;
    let time = |rng: &mut rand_chacha::ChaCha8Rng, k: usize| if k == 0 { 10.0 } else { rng.gen_range(0.01..10.0) };
    let mut families: Vec<(&str, f64)> = Vec::new();

    let mut worst = 0.0f64;
    for k in 0..draws {
        let t = time(&mut rng, k);
        let j = exchange(&mut rng, 10.0);
        let p = Problem::new(FieldSpec::Zero, FieldSpec::Zero, j.clone());
        let o = integrate_propagator(&p, 0.0, t, &cfg)?.propagator.matrix;
        worst = worst.max(prop_free_interaction(&j, 0.0, t)?.matrix.max_abs_diff(&o));
    }
    families.push(("free_interaction", worst));

    let mut worst = 0.0f64;
    for k in 0..draws {
        let t = time(&mut rng, k);
        let j = exchange(&mut rng, 10.0);
        let g = any_field(&mut rng, 10.0);
        let p = Problem::new(g.clone(), g.clone(), j.clone());
        let o = integrate_propagator(&p, 0.0, t, &cfg)?.propagator.matrix;
        worst = worst.max(prop_equal_fields(&g, &j, 0.0, t)?.matrix.max_abs_diff(&o));
    }
    families.push(("equal_fields", worst));

    let mut worst = 0.0f64;
    for k in 0..draws {
        let t = time(&mut rng, k);
        let (gamma, a, b) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let p = Problem::new(FieldSpec::Constant([0.0, 0.0, a]), FieldSpec::Constant([0.0, 0.0, b]), ScalarProfile::Constant(2.0 * gamma));
        let o = integrate_propagator(&p, 0.0, t, &cfg)?.propagator.matrix;
        worst = worst.max(prop_constant_parallel(gamma, a, b, t).matrix.max_abs_diff(&o));
    }
    families.push(("constant_parallel", worst));

    let mut worst = 0.0f64;
    for k in 0..draws {
        let t = time(&mut rng, k);
        let rp = rabi(&mut rng);
        let o = integrate_matrix(|s: f64| Ok::<Mat2, twospin::Error>(pauli_dot(&rp.field_at(s))), 0.0, t, &cfg)?.matrix;
        worst = worst
            .max(rabi_one_spin_literal(&rp, t)?.max_abs_diff(&o))
            .max(rabi_one_spin(&rp, t).max_abs_diff(&o));
    }
    families.push(("rabi_one_spin", worst));

    let mut worst = 0.0f64;
    for k in 0..draws {
        let t = time(&mut rng, k);
        let rp = rabi(&mut rng);
        let p = Problem::new(FieldSpec::Zero, FieldSpec::Rabi(rp), ScalarProfile::zero());
        let o = integrate_propagator(&p, 0.0, t, &cfg)?.propagator.matrix;
        worst = worst
            .max(rabi_second_spin_product(&rp, t).max_abs_diff(&o))
            .max(prop_rabi_second_spin(&rp, t).matrix.max_abs_diff(&o));
    }
    families.push(("rabi_second_spin", worst));

    let mut worst = 0.0f64;
    for k in 0..draws {
        let t = time(&mut rng, k);
        let rp = rabi(&mut rng);
        let j = exchange(&mut rng, 10.0);
        let p = Problem::new(FieldSpec::Rabi(rp), FieldSpec::Rabi(rp), j.clone());
        let o = integrate_propagator(&p, 0.0, t, &cfg)?.propagator.matrix;
        worst = worst.max(prop_equal_rabi(&rp, &j, 0.0, t)?.matrix.max_abs_diff(&o));
    }
    families.push(("equal_rabi_composition", worst));

    for (name, w) in &families {
        overall = overall.max(*w);
        report.push(format!("{name}={w:.1e}"));
    }
    Ok(verdict(overall < 1e-8, format!("{draws} draws per family, t in (0, 10], worst {overall:.2e} [{}]", report.join(", "))))
}

fn swap_symmetry() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(303);
    let cfg = cfg();
    let a = swap_matrix::<f64>();
    let mut worst = 0.0f64;
    let mut labels = std::collections::BTreeSet::new();
    for _ in 0..50 {
        let t = rng.gen_range(0.1..10.0);
        let p = Problem::new(rabi_or_constant(&mut rng), rabi_or_constant(&mut rng), ScalarProfile::Constant(rng.gen_range(-2.0..2.0)));
        let r = propagate(&p, 0.0, t, Mode::Auto, &cfg)?;
        let s = propagate(&p.swapped(), 0.0, t, Mode::Auto, &cfg)?;
        labels.insert(r.method.label());
        worst = worst.max((a * r.matrix * a).max_abs_diff(&s.matrix));
    }
    let labels: Vec<&str> = labels.into_iter().collect();
    Ok(verdict(worst < 1e-8, format!("50 problems, worst {worst:.2e}, methods {}", labels.join("/"))))
}

fn spectrum() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(404);
    let mut worst_res = 0.0f64;
    let mut worst_eig = 0.0f64;
    let mut worst_vec = 0.0f64;
    let draws = 400;
    for k in 0..draws {
        let r = [0.1, 1.0, 3.0][k % 3];
        let mut gamma = rng.gen_range(-r..r);
        let mut a = vec3(&mut rng, r);
        let mut b = vec3(&mut rng, r);
        match k % 8 {
            0 => b = a,
            1 => a = [0.0; 3],
            2 => gamma = 0.0,
            3 => b = [-a[0], -a[1], -a[2]],
            4 => {
                a = [0.0, 0.0, a[2]];
                b = [0.0, 0.0, b[2]];
            }
            _ => {}
        }
        let scale = problem_scale(gamma, &a, &b);
        let levels = solve_levels(gamma, &a, &b)?;
        let dense = eigh(&build_d(gamma, &a, &b, 0.0))?;
        for i in 0..4 {
            worst_res = worst_res.max(levels.root_residuals[i] / scale.powi(4));
            worst_eig = worst_eig.max((levels.roots[i] - dense.values[i]).abs());
            worst_vec = worst_vec.max(levels.vector_residuals[i] / scale).max((levels.vectors[i].norm() - 1.0).abs());
        }
    }
    let first = solve_levels(1.0, &[0.0; 3], &[0.0; 3])?.roots;
    let second = solve_levels(1.0, &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0])?.roots;
    let rabi: Vec<f64> = {
        let mut v: Vec<f64> = stationary_rabi(2.0, 1.0).iter().map(|x| x.0).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let special = [(first, [-3.0f64, 1.0, 1.0, 1.0]), (second, [-3.0, -1.0, 1.0, 3.0])]
        .iter()
        .flat_map(|(got, want)| got.iter().zip(want).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>())
        .chain(rabi.iter().zip([-3.0, -1.0, 1.0, 3.0]).map(|(x, y)| (x - y).abs()))
        .fold(0.0f64, f64::max);
    let pass = worst_res < 1e-9 && worst_eig < 1e-9 && worst_vec < 1e-9 && special < 1e-10;
    Ok(verdict(
        pass,
        format!(
            "{draws} draws: |d(λ)|/scale⁴ ≤ {worst_res:.1e}, |λ−eig| ≤ {worst_eig:.1e}, vector residual ≤ {worst_vec:.1e}; special cases off by {special:.1e}"
        ),
    ))
}

fn coefficient_forms() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(505);
    let mut worst = 0.0f64;
    let mut worst_det = 0.0f64;
    for _ in 0..1000 {
        let (gamma, a, b) = (rng.gen_range(-2.0..2.0), vec3(&mut rng, 2.0), vec3(&mut rng, 2.0));
        let expanded = quartic_d(gamma, &a, &b);
        let shifted = quartic_from_shifted_form(gamma, &a, &b);
        let pq = quartic_from_pq_form(gamma, &a, &b);
        for k in 0..5 {
            worst = worst.max((expanded[k] - shifted[k]).abs()).max((expanded[k] - pq[k]).abs());
        }
        let lambda = rng.gen_range(-6.0..6.0);
        let det = build_d(gamma, &a, &b, lambda).determinant().re;
        let size = problem_scale(gamma, &a, &b).max(lambda.abs()).powi(4);
        worst_det = worst_det
            .max((poly_eval(&expanded, lambda) - det).abs() / size)
            .max((eval_pq_form(gamma, &a, &b, lambda) - det).abs() / size);
    }
    Ok(verdict(
        worst < 1e-9 && worst_det < 1e-9,
        format!("1000 draws: coefficient mismatch ≤ {worst:.1e}, relative gap to det D(λ) ≤ {worst_det:.1e}"),
    ))
}

fn rabi_resonance() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(606);
    let mut pairs = vec![(0.25, 1.0)];
    for _ in 0..10 {
        let a0 = rng.gen_range(0.3..2.0);
        pairs.push((a0 * rng.gen_range(0.05..0.95), a0));
    }
    let mut worst = 0.0f64;
    let mut p14_at_second = Vec::new();
    for (a, a0) in pairs {
        let freqs = resonance_frequencies(a, a0);
        let j = rng.gen_range(-1.0..1.0);
        let res = scan(a, a0, j, &[freqs.omega1, freqs.omega2], &ScanOptions::default())?;
        let (r1, r2) = (&res.rows[0], &res.rows[1]);
        for (got, want) in [
            (r1.p14_numeric, 1.0f64),
            (r1.p21_numeric, 0.5),
            (r1.p24_numeric, 0.5),
            (r2.p21_numeric, 0.5),
            (r2.p24_numeric, 0.5),
            (r1.p14, 1.0),
            (r1.p21, 0.5),
            (r2.p21, 0.5),
        ] {
            worst = worst.max((got - want).abs());
        }
        p14_at_second.push(r2.p14_numeric);
    }
    let lo = p14_at_second.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = p14_at_second.iter().cloned().fold(0.0, f64::max);
    Ok(verdict(
        worst < 1e-6,
        format!("11 (A, A0) pairs, worst deviation {worst:.1e}; max P14 at ω₂ measured in [{lo:.4}, {hi:.4}]"),
    ))
}

fn selection_rule() -> Result<Verdict, twospin::Error> {
    let singlet = stationary_basis::<f64>().states[2];
    let basis = stationary_basis::<f64>();
    let mut worst = 0.0f64;
    for (a, a0, j) in [(0.25, 1.0, 0.6), (0.7, -0.4, -1.3), (1.2, 0.5, 2.0)] {
        for iw in 0..100 {
            let omega = 0.05 + 3.95 * iw as f64 / 99.0;
            let rp = twospin::RabiParams::new(a, a0, omega)?;
            let jp = ScalarProfile::Constant(j);
            for it in 0..100 {
                let t = 20.0 * it as f64 / 99.0;
                let r = prop_equal_rabi(&rp, &jp, 0.0, t)?.matrix;
                for k in [0, 1, 3] {
                    let s = &basis.states[k];
                    worst = worst.max(r.sandwich(&singlet, s).norm()).max(r.sandwich(s, &singlet).norm());
                }
            }
        }
    }
    Ok(verdict(worst < 1e-10, format!("3 × 100 × 100 (ω, t) points, worst singlet element {worst:.1e}")))
}

fn parallel_reduction() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(808);
    let cfg = cfg();
    let horizon = 10.0;
    let mut worst_res = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut cases = 0;
    for kind in 0..4 {
        for _ in 0..4 {
            let (b1, b2, j) = match kind {
                // constant exchange, independent time-dependent fields
                0 => (
                    ScalarProfile::Samples(sampled(&mut rng, -0.5, horizon + 0.5, 9, 1.5, Interp::MonotoneCubic)),
                    ScalarProfile::Samples(sampled(&mut rng, -0.5, horizon + 0.5, 9, 1.5, Interp::MonotoneCubic)),
                    ScalarProfile::Constant(rng.gen_range(-2.0..2.0)),
                ),
                // constant difference of the fields, time-dependent exchange
                1 => {
                    let base = sampled(&mut rng, -0.5, horizon + 0.5, 9, 1.5, Interp::Linear);
                    let delta = rng.gen_range(-1.0..1.0);
                    let shifted = SampledProfile::new(base.knots().map(|(t, v)| (t, v + delta)).collect(), Interp::Linear)?;
                    (
                        ScalarProfile::Samples(shifted),
                        ScalarProfile::Samples(base),
                        ScalarProfile::Samples(sampled(&mut rng, -0.5, horizon + 0.5, 9, 1.5, Interp::MonotoneCubic)),
                    )
                }
                2 => {
                    let b = ScalarProfile::Samples(sampled(&mut rng, -0.5, horizon + 0.5, 9, 1.5, Interp::MonotoneCubic));
                    (b.clone(), b, exchange(&mut rng, horizon))
                }
                _ => (
                    ScalarProfile::Constant(rng.gen_range(-2.0..2.0)),
                    ScalarProfile::Constant(rng.gen_range(-2.0..2.0)),
                    ScalarProfile::Constant(rng.gen_range(-2.0..2.0)),
                ),
            };
            let red = reduce_parallel(b1.clone(), b2.clone(), j.clone(), horizon, &cfg)?;
            let p = Problem::new(FieldSpec::ParallelZ(b1), FieldSpec::ParallelZ(b2), j);
            let psi0: Vec2 = twospin::CVec([
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ]);
            let c1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let c4 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let n0 = assemble_parallel(&red, c1, c4, &psi0, 0.0)?.norm();
            let ham = problem_hamiltonian(&p);
            for _ in 0..20 {
                let t = rng.gen_range(0.01..horizon - 0.01);
                let sol = |s: f64| assemble_parallel(&red, c1, c4, &psi0, s.max(0.0).min(horizon));
                worst_res = worst_res.max(schrodinger_residual(&ham, sol, t, 1e-4)?);
                worst_norm = worst_norm.max((sol(t)?.norm() - n0).abs());
            }
            cases += 1;
        }
    }
    let mut worst_match = 0.0f64;
    for _ in 0..50 {
        let (x, y, j) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let t = rng.gen_range(0.0..horizon);
        let red = reduce_parallel(ScalarProfile::Constant(x), ScalarProfile::Constant(y), ScalarProfile::Constant(j), horizon, &cfg)?;
        let closed = prop_constant_parallel(0.5 * j, x, y, t).matrix;
        worst_match = worst_match.max(red.propagator(t)?.max_abs_diff(&closed));
    }
    Ok(verdict(
        worst_res < 1e-7 && worst_match < 1e-9 && worst_norm < 1e-10,
        format!(
            "{cases} profiles × 20 times: residual ≤ {worst_res:.1e}, norm drift ≤ {worst_norm:.1e}; 50 constant draws vs closed form ≤ {worst_match:.1e}"
        ),
    ))
}

fn rotating_frame() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(909);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let omega = rng.gen_range(0.3..3.0) * if rng.gen_bool(0.25) { -1.0 } else { 1.0 };
        let f = rabi_with_omega(&mut rng, omega);
        let g = rabi_with_omega(&mut rng, omega);
        let j = rng.gen_range(-2.0..2.0);
        let rf = rotating_frame_reduce(&f, &g, j)?;
        let levels = solve_levels(rf.gamma, &rf.a, &rf.b)?;
        let p = Problem::new(FieldSpec::Rabi(g), FieldSpec::Rabi(f), ScalarProfile::Constant(j));
        let ham = problem_hamiltonian(&p);
        for i in 0..4 {
            let (lambda, cvec) = (levels.roots[i], levels.vectors[i]);
            for _ in 0..10 {
                let t = rng.gen_range(0.0..10.0);
                let sol = |s: f64| rotating_frame_solution(&rf, lambda, &cvec, s);
                worst = worst.max(schrodinger_residual(&ham, sol, t, 1e-4)?);
            }
        }
    }
    Ok(verdict(worst < 1e-8, format!("20 configurations × 4 eigenpairs × 10 times, worst residual {worst:.1e}")))
}

fn rk4_order() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(1010);
    let mut ratios = Vec::new();
    for _ in 0..5 {
        let h = two_spin_matrix(&vec3(&mut rng, 1.5), &vec3(&mut rng, 1.5), rng.gen_range(-2.0..2.0));
        let exact = expm_skew_hermitian(&h, 1.0)?;
        let err = |n: usize| -> Result<f64, twospin::Error> {
            Ok(integrate_fixed_matrix(|_| Ok::<Mat4, twospin::Error>(h), 0.0, 1.0, n)?.max_abs_diff(&exact))
        };
        let (e1, e2, e3) = (err(20)?, err(40)?, err(80)?);
        ratios.push(e1 / e2);
        ratios.push(e2 / e3);
    }
    let ok = ratios.iter().all(|r| (12.0..=20.0).contains(r));
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(verdict(ok, format!("error ratio under step halving in [{lo:.2}, {hi:.2}] over 5 Hamiltonians")))
}

fn literal_rabi() -> Result<Verdict, twospin::Error> {
    let mut rng = rng(1111);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let omega = rng.gen_range(0.2..4.0) * if rng.gen_bool(0.25) { -1.0 } else { 1.0 };
        let rp = twospin::RabiParams::with_phase(
            rng.gen_range(0.05..2.0),
            rng.gen_range(-2.0..2.0),
            omega,
            rng.gen_range(0.0..6.3),
        )?;
        let t = rng.gen_range(0.0..10.0);
        worst = worst.max(rabi_one_spin_literal(&rp, t)?.max_abs_diff(&rabi_one_spin(&rp, t)));
    }
    Ok(verdict(worst < 1e-10, format!("200 draws, worst entry difference {worst:.1e}")))
}

fn main() {
    let criteria: [(&str, Check, Option<Duration>); 11] = [
        ("unitarity", unitarity, Some(Duration::from_secs(5))),
        ("oracle equivalence", oracle_equivalence, Some(Duration::from_secs(60))),
        ("swap symmetry", swap_symmetry, None),
        ("spectrum", spectrum, None),
        ("quartic coefficient forms", coefficient_forms, None),
        ("rabi resonance", rabi_resonance, Some(Duration::from_secs(30))),
        ("selection rule", selection_rule, None),
        ("parallel-field reduction", parallel_reduction, None),
        ("rotating-frame closure", rotating_frame, None),
        ("rk4 order", rk4_order, None),
        ("literal rabi form", literal_rabi, None),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (mut pass, mut detail) = match outcome {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(limit) = budget {
            if elapsed > *limit {
                pass = false;
                detail.push_str(&format!("; over the {:.0} s budget", limit.as_secs_f64()));
            }
        }
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
