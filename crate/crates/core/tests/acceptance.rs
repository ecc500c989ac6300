//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Float, Rational};
use singular_basis::exact_coeffs::{lambda_poly, recurrence_check, ClosedFormVariant};
use singular_basis::gram::{gram_matrix, orthonormalize, GsMode};
use singular_basis::oracle::{tensor_gram_entry, verify_closed_forms, QuadratureSettings};
use singular_basis::spectra::ritz_solve;
use singular_basis::HamiltonianSpec;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn closed_form_vs_quadrature() -> Outcome {
    let started = Instant::now();
    let n_values: Vec<i64> = (-8..=8).collect();
    let scales = [q(1, 2), q(1, 1), q(2, 1), q(5, 1)];
    let settings = QuadratureSettings::for_precision(128);
    let corrected = verify_closed_forms(&n_values, &scales, 1e-12, ClosedFormVariant::Corrected, &settings)
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed().as_secs_f64();
    let worst = corrected
        .cases
        .iter()
        .map(|c| c.relative_deviation.parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    let printed = verify_closed_forms(&n_values, &scales, 1e-12, ClosedFormVariant::AsPrinted, &settings)
        .map_err(|e| e.to_string())?;
    let printed_ok_at_positive_n: Vec<_> = printed
        .cases
        .iter()
        .filter(|c| c.n >= 1 && c.pass)
        .map(|c| format!("n={} a={}", c.n, c.a))
        .collect();
    let summary = format!(
        "{} cases, worst relative deviation {worst:.2e}, {elapsed:.1}s; printed form rejected for all n >= 1",
        corrected.cases.len()
    );
    if !corrected.all_pass {
        Err(format!("corrected form misses 1e-12: worst {worst:.2e}"))
    } else if elapsed >= 30.0 {
        Err(format!("took {elapsed:.1}s (limit 30s)"))
    } else if !printed_ok_at_positive_n.is_empty() {
        Err(format!("printed form unexpectedly passes at {printed_ok_at_positive_n:?}"))
    } else {
        Ok(summary)
    }
}

fn reflection() -> Outcome {
    for n in -16..=16 {
        if lambda_poly(n) != lambda_poly(-n - 1) {
            return Err(format!("Λ_{n} differs from Λ_{}", -n - 1));
        }
    }
    Ok("Λ_n == Λ_{-n-1} for |n| <= 16".into())
}

fn recurrence() -> Outcome {
    if recurrence_check(16) {
        Ok("exact polynomial identity for n <= 16".into())
    } else {
        Err("recurrence broken".into())
    }
}

fn telescopic() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7e1e);
    let mut count = 0;
    for n in 1..=10 {
        for _ in 0..20 {
            let x = random_nonzero_rational(&mut rng);
            if !telescopic_holds(n, &x) {
                return Err(format!("identity fails at n={n}, x={x}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} exact matches"))
}

fn operator_recursion() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xd1ff);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let s = random_state(&mut rng, unit_scale(), -4, 4, 4);
        for _ in 0..10 {
            let x = rng.gen_range(0.3..3.0);
            worst = worst.max(finite_difference_deviation(&s, x));
        }
    }
    if worst >= 1e-8 {
        return Err(format!("finite difference deviation {worst:.2e}"));
    }
    for hbar in [q(1, 1), q(3, 7)] {
        for n in -10..=10 {
            if !commutator_holds(n, &hbar, unit_scale()) {
                return Err(format!("[P,Q] != iħ on b_{n} for ħ={hbar}"));
            }
        }
    }
    Ok(format!("worst finite difference deviation {worst:.2e}; [P,Q] = iħ exactly"))
}

fn gram_positivity_and_parity() -> Outcome {
    for a in [q(1, 2), q(1, 1), q(2, 1)] {
        let g = gram_matrix(24, &a).map_err(|e| e.to_string())?;
        let ldl = g.ldl().map_err(|e| format!("a={a}: {e}"))?;
        if ldl.d.iter().any(|d| *d <= 0) {
            return Err(format!("a={a}: non-positive pivot"));
        }
        for (i, m) in g.ordering.iter().enumerate() {
            for (j, n) in g.ordering.iter().enumerate() {
                if (m + n).rem_euclid(2) == 1 && g.entries[i][j] != 0 {
                    return Err(format!("a={a}: odd-parity entry ({m},{n}) is nonzero"));
                }
            }
        }
    }
    Ok("exact LDLᵀ positive for N = 24 (hence every N <= 24), odd-parity entries zero".into())
}

fn orthonormalization() -> Outcome {
    let a = q(1, 1);
    let g = gram_matrix(12, &a).map_err(|e| e.to_string())?;
    let float = orthonormalize(12, &a, GsMode::Float { precision_bits: 256 }).map_err(|e| e.to_string())?;
    let exact = orthonormalize(12, &a, GsMode::Exact).map_err(|e| e.to_string())?;
    let (offdiag, diag) = float.orthonormality_defect(&g, 256);
    let tol = Float::with_val(256, Float::parse("1e-30").unwrap());
    let fc = float.normalized_coefficients(256);
    let ec = exact.normalized_coefficients(256);
    let mut cross = Float::new(256);
    for (fr, er) in fc.iter().zip(&ec) {
        for (x, y) in fr.iter().zip(er) {
            let d = Float::with_val(256, x - y).abs();
            if d > cross {
                cross = d;
            }
        }
    }
    let summary = format!(
        "max off-diagonal {:.2e}, max |diag - 1| {:.2e}, exact vs float {:.2e}",
        offdiag.to_f64(),
        diag.to_f64(),
        cross.to_f64()
    );
    if offdiag < tol && cross < tol {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn rayleigh_ritz() -> Outcome {
    let spec = spiked(1);
    let a = q(1, 1);
    let floor = 2.5 * (1.0 - 1e-9);
    let mut grounds = Vec::new();
    for n in [4, 8, 16, 32] {
        let r = ritz_solve(&spec, n, &a, 256).map_err(|e| format!("N={n}: {e}"))?;
        grounds.push(r.eigenvalues[0].clone());
    }
    if grounds.windows(2).any(|w| w[1] > w[0]) {
        return Err("ground value increases with N".into());
    }
    if grounds.iter().any(|g| g.to_f64() < floor) {
        return Err("ground value below 2.5".into());
    }
    let gap = Float::with_val(256, &grounds[3] - 2.5f64);
    let pinned = Float::with_val(256, Float::parse(SPIKED_GAP_N32).unwrap());
    let rel = (Float::with_val(256, &gap - &pinned) / &pinned).abs().to_f64();
    if rel > 1e-30 {
        return Err(format!("N=32 gap {} drifted from pinned {SPIKED_GAP_N32}", gap.to_f64()));
    }
    let pure = HamiltonianSpec::new("0.5*x^2".parse().unwrap());
    let dirichlet = ritz_solve(&pure, 32, &q(1, 4), 256).map_err(|e| e.to_string())?;
    let at_unit = ritz_solve(&pure, 32, &a, 256).map_err(|e| e.to_string())?;
    let e0 = dirichlet.eigenvalues[0].to_f64();
    let summary = format!(
        "spiked ground {:?}, gap {:.6e}; oscillator N=32 ground {e0:.6} at a=1/4 ({:.6} at a=1)",
        grounds.iter().map(|g| g.to_f64()).collect::<Vec<_>>(),
        gap.to_f64(),
        at_unit.eigenvalues[0].to_f64()
    );
    if e0 < 1.6 && e0 > 1.5 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn tensor_products() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x2d);
    let scales = [q(1, 2), q(1, 1), q(2, 1), q(3, 7)];
    let one_d = |m: i64, n: i64, a: &Rational| tensor_gram_entry(&[m], &[n], a).unwrap();
    for _ in 0..50 {
        let a = &scales[rng.gen_range(0..scales.len())];
        let e1 = [rng.gen_range(-6..=6), rng.gen_range(-6..=6)];
        let e2 = [rng.gen_range(-6..=6), rng.gen_range(-6..=6)];
        let joint = tensor_gram_entry(&e1, &e2, a).map_err(|e| e.to_string())?;
        let product = one_d(e1[0], e2[0], a) * one_d(e1[1], e2[1], a);
        if joint != product {
            return Err(format!("{e1:?} x {e2:?} at a={a}: {joint} != {product}"));
        }
        // the 1-D entries are the Gram matrix entries
        let g = gram_matrix(13, a).unwrap();
        let pos = |n: i64| g.ordering.iter().position(|&m| m == n).unwrap();
        if one_d(e1[0], e2[0], a) != g.entries[pos(e1[0])][pos(e2[0])] {
            return Err(format!("1-D entry ({}, {}) disagrees with the Gram matrix", e1[0], e2[0]));
        }
    }
    Ok("50 random D = 2 entries factor exactly".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed form vs quadrature", closed_form_vs_quadrature),
        ("reflection symmetry", reflection),
        ("recurrence", recurrence),
        ("telescopic identity", telescopic),
        ("operator recursion", operator_recursion),
        ("Gram positivity and parity", gram_positivity_and_parity),
        ("orthonormalization", orthonormalization),
        ("Rayleigh-Ritz", rayleigh_ritz),
        ("tensor products", tensor_products),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
