//! Independent reference values and structural invariants.

use rug::ops::Pow;
use rug::Float;

use specnorm::asymptotics::{gaussian_ratio, growth_report, semiclassical_comparison, SemiclassicalParams};
use specnorm::numerics::{agreement_digits, tanh_sinh_integrate, Domain, HpComplex, PrecisionPolicy};
use specnorm::orthopoly::{bases_for, moments, orthonormality_residual};
use specnorm::projnorm::{
    cross_moments, lower_bound, projection_norm, projection_norms, quadrature_norm_oracle, upper_bound_hermite_even,
};
use specnorm::weights::{verify_basic_condition, WeightSpec};
use specnorm::Angle;

const P: u32 = 256;

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::with_target(25).unwrap()
}

fn pi() -> Float {
    Float::with_val(P, rug::float::Constant::Pi)
}

#[test]
fn laguerre_rotated_moments_against_quadrature() {
    let theta = Angle::radians(0.9);
    let table = cross_moments(&WeightSpec::laguerre(), &theta, 8, &policy()).unwrap();
    let c = theta.to_float(P).cos();
    for (k, m) in table.entries.iter().enumerate() {
        let q = tanh_sinh_integrate(
            |x| {
                let prec = x.prec();
                let v = Float::with_val(prec, x.pow(k as u32)) * (-Float::with_val(prec, x * &c)).exp();
                HpComplex::from_real(v)
            },
            Domain::HalfLine,
            &policy(),
        )
        .unwrap();
        assert!(agreement_digits(m, &q.value.re, P) >= 25, "k = {k}");
    }
}

#[test]
fn hermite_rotated_even_moments() {
    let theta = Angle::pi_times(3, 20);
    let table = cross_moments(&WeightSpec::hermite(), &theta, 11, &policy()).unwrap();
    let c = Float::with_val(P, theta.to_float(P) * 2u32).cos();
    for m in 0..=5u32 {
        // Γ(m + 1/2) (cos 2θ)^{-m-1/2}
        let g = Float::with_val(P, Float::with_val(P, m) + 0.5f64).gamma();
        let expect = g * Float::with_val(P, (&c).pow(-(f64::from(m) + 0.5)));
        assert!(agreement_digits(&table.entries[2 * m as usize], &expect, P) >= 25);
        assert!(table.entries[2 * m as usize + 1].is_zero());
    }
}

#[test]
fn rotated_moments_reduce_to_plain_moments() {
    let spec = WeightSpec::gamma_beta(0.5, 3.0, 1.0, Domain::HalfLine).unwrap();
    let rotated = cross_moments(&spec, &Angle::zero(), 6, &policy()).unwrap();
    let plain = moments(&spec, 6, &policy()).unwrap();
    assert_eq!(rotated.entries, plain.moments);
}

#[test]
fn gram_basis_is_orthonormal_for_every_family() {
    let specs = [
        WeightSpec::gamma_beta(0.5, 3.0, 1.0, Domain::HalfLine).unwrap(),
        WeightSpec::poly_exp(vec![1.0, 0.0, 0.0, 1.0], Domain::HalfLine).unwrap(),
        WeightSpec::poly_exp(vec![0.0, 1.0, 0.0, 0.5], Domain::FullLine).unwrap(),
    ];
    let pol = PrecisionPolicy::with_target(40).unwrap();
    for spec in specs {
        let table = moments(&spec, 20, &pol).unwrap();
        let degrees: Vec<usize> = (0..=10).collect();
        let bases = bases_for(&spec, &degrees, table.precision, &pol).unwrap();
        assert!(orthonormality_residual(&bases, &table) < 1e-30, "{}", spec.label());
    }
}

#[test]
fn norm_independent_of_modulus() {
    let cases = [
        (WeightSpec::hermite(), Angle::pi_times(1, 10)),
        (WeightSpec::laguerre(), Angle::radians(0.8)),
        (
            WeightSpec::gamma_beta(0.5, 3.0, 1.0, Domain::HalfLine).unwrap(),
            Angle::pi_times(1, 12),
        ),
    ];
    let pol = PrecisionPolicy::with_target(20).unwrap();
    for (spec, theta) in cases {
        for n in [0, 3, 10] {
            let direct = projection_norm(&spec, n, &theta, &pol).unwrap();
            for r in [0.5, 1.0, 3.0] {
                let q = quadrature_norm_oracle(&spec, n, &theta, Some(&Float::with_val(64, r)), &pol).unwrap();
                let d = agreement_digits(&q.value, &direct.norm.value, q.precision_used);
                assert!(d >= 20, "{} n={n} r={r}: {d} digits", spec.label());
            }
        }
    }
}

#[test]
fn conjugate_angle_gives_same_norm() {
    let pol = policy();
    for (spec, theta) in [
        (WeightSpec::hermite(), Angle::pi_times(1, 7)),
        (
            WeightSpec::poly_exp(vec![1.0, 0.0, 0.0, 1.0], Domain::HalfLine).unwrap(),
            Angle::pi_times(1, 11),
        ),
    ] {
        for n in [1, 6] {
            let a = projection_norm(&spec, n, &theta, &pol).unwrap();
            let b = projection_norm(&spec, n, &theta.neg(), &pol).unwrap();
            let d = a.norm.certified_digits.min(b.norm.certified_digits);
            assert!(agreement_digits(&a.norm.value, &b.norm.value, a.norm.precision_used) >= d);
        }
    }
}

#[test]
fn norms_at_least_one_and_monotone_in_angle() {
    let pol = PrecisionPolicy::with_target(15).unwrap();
    for n in [1, 4, 9] {
        let mut previous = Float::with_val(P, 1);
        for k in 0..=9 {
            let theta = Angle::pi_times(k, 40);
            let r = projection_norm(&WeightSpec::hermite(), n, &theta, &pol).unwrap();
            if k == 0 {
                assert!(agreement_digits(&r.norm.value, &previous, P) >= 15);
            } else {
                assert!(r.norm.value > 1);
                assert!(r.norm.value >= previous, "n={n} k={k}");
            }
            previous = r.norm.value.clone();
        }
    }
}

#[test]
fn lower_bound_is_sharp_at_degree_zero() {
    let pol = policy();
    for (spec, theta) in [
        (WeightSpec::hermite(), Angle::pi_times(1, 9)),
        (WeightSpec::laguerre(), Angle::radians(1.3)),
        (
            WeightSpec::gamma_beta(0.0, 3.0, 2.0, Domain::HalfLine).unwrap(),
            Angle::pi_times(1, 10),
        ),
    ] {
        let r = projection_norm(&spec, 0, &theta, &pol).unwrap();
        assert!(
            agreement_digits(&r.norm.value, &r.lower, r.norm.precision_used) >= 25,
            "{}",
            spec.label()
        );
    }
}

#[test]
fn hermite_lower_bound_value() {
    let theta = Angle::pi_times(1, 10);
    let lb = lower_bound(&WeightSpec::hermite(), &theta, 5, P).unwrap();
    let sec = Float::with_val(P, (pi() / 5u32).cos()).recip();
    assert!((sec.to_f64() - 1.236).abs() < 5e-4);
    let expect = Float::with_val(P, (&sec).pow(5.5f64));
    assert!(agreement_digits(&lb, &expect, P) >= 60);
}

#[test]
fn laguerre_upper_bound_holds_at_moderate_degree() {
    let r = projection_norm(&WeightSpec::laguerre(), 10, &Angle::radians(0.3), &policy()).unwrap();
    assert_eq!(r.upper_ok, Some(true));
    assert!(r.upper.unwrap() >= r.norm.value);
}

#[test]
fn hermite_upper_bound_per_index_limit_decreases() {
    let theta = Angle::pi_times(1, 10);
    let limit = (4.0 / (0.2 * std::f64::consts::PI).cos()).ln();
    let mut last = f64::INFINITY;
    for m in [20usize, 50, 100, 200, 400, 800] {
        let b = upper_bound_hermite_even(&theta, m, P).unwrap();
        let per = Float::with_val(P, b.ln_ref()).to_f64() / m as f64;
        assert!(per < last && per > limit);
        last = per;
    }
    assert!(last - limit < 0.02);
}

#[test]
fn sigma_bracket_and_monotone_grid() {
    let theta = Angle::pi_times(3, 20);
    let report = growth_report(
        &WeightSpec::hermite(),
        &theta,
        200,
        2,
        &PrecisionPolicy::with_target(15).unwrap(),
    )
    .unwrap();
    let sigmas: Vec<f64> = report
        .entries
        .iter()
        .filter_map(|e| e.sigma.as_ref().map(Float::to_f64))
        .collect();
    assert!(sigmas.iter().all(|&s| (1.0..=6.806).contains(&s)));
    assert!(sigmas.windows(2).all(|w| w[1] >= w[0]));
    // the asymptotic lower end only on the largest computed n
    assert!(*sigmas.last().unwrap() >= 1.701);
    for e in report.entries.iter().filter(|e| e.result.n > 0) {
        let n = e.result.n as f64;
        assert!(e.per_index.unwrap() >= (1.0 + 1.0 / (2.0 * n)) * report.s_lower * (1.0 - 1e-12));
    }
}

#[test]
fn gaussian_ratio_against_quadrature() {
    let prec = 160;
    let c = |re: f64, im: f64| HpComplex::new(Float::with_val(prec, re), Float::with_val(prec, im));
    let pol = PrecisionPolicy::with_target(25).unwrap();
    for (psi1, psi2) in [
        (c(0.3, 1.1), c(0.8, -0.6)),
        (c(0.0, 1.0), c(1.0, -1.0)),
        (c(-0.4, 0.0), c(2.5, 0.0)),
    ] {
        let closed = gaussian_ratio(&psi1, &psi2).unwrap();
        let phi = |s: &Float| {
            let p = s.prec();
            let s1 = HpComplex::from_real(Float::with_val(p, s));
            let s2 = HpComplex::from_real(Float::with_val(p, s.square_ref()) / 2u32);
            (-&(&(&psi1 * &s1) + &(&psi2 * &s2))).exp()
        };
        let num = tanh_sinh_integrate(|s| HpComplex::from_real(phi(s).norm_sqr()), Domain::FullLine, &pol).unwrap();
        let den = tanh_sinh_integrate(
            |s| {
                let v = phi(s);
                &v * &v
            },
            Domain::FullLine,
            &pol,
        )
        .unwrap();
        let ratio = Float::with_val(prec, &num.value.re / den.value.abs());
        assert!(agreement_digits(&ratio, &closed, prec) >= 25);
    }
    // 2^{1/4} e^{1/2}
    let expect = Float::with_val(prec, 2).root(4) * Float::with_val(prec, 0.5).exp();
    let r = gaussian_ratio(&c(0.0, 1.0), &c(1.0, -1.0)).unwrap();
    assert!(agreement_digits(&r, &expect, prec) >= 40);
}

#[test]
fn semiclassical_predictions_differ_as_reported() {
    let theta = Angle::pi_times(1, 10);
    let c = semiclassical_comparison(&theta, 100, Some(&PrecisionPolicy::with_target(15).unwrap())).unwrap();
    let two_n_sin = 200.0 * (0.2 * std::f64::consts::PI).sin();
    assert!((c.log_gaussian_ratio - two_n_sin).abs() < 1.0);
    assert!((c.n_tan_2theta - 100.0 * (0.2 * std::f64::consts::PI).tan()).abs() < 1e-9);
    assert!(c.log_norm.unwrap() > 0.0);
    let p = SemiclassicalParams::new(&theta, 100, 128).unwrap();
    assert!(p.psi2.re > 0);
}

#[test]
fn basic_condition_on_grid() {
    let grid: Vec<f64> = (1..=400).map(|k| k as f64 * 0.025).collect();
    for (spec, theta) in [
        (WeightSpec::hermite(), Angle::pi_times(1, 5)),
        (
            WeightSpec::gamma_beta(0.5, 3.0, 1.0, Domain::HalfLine).unwrap(),
            Angle::pi_times(1, 8),
        ),
        (
            WeightSpec::poly_exp(vec![1.0, -0.5, 0.0, 1.0], Domain::HalfLine).unwrap(),
            Angle::pi_times(1, 10),
        ),
    ] {
        let report = verify_basic_condition(&spec, &theta, &grid, 200).unwrap();
        assert!(report.holds, "{}: min ratio {}", spec.label(), report.min_ratio);
    }
}

#[test]
fn batch_and_single_agree() {
    let spec = WeightSpec::poly_exp(vec![1.0, 0.0, 0.0, 1.0], Domain::HalfLine).unwrap();
    let theta = Angle::pi_times(1, 16);
    let pol = PrecisionPolicy::with_target(20).unwrap();
    let batch = projection_norms(&spec, &[2, 5, 9], &theta, &pol).unwrap();
    for r in batch {
        let single = projection_norm(&spec, r.n, &theta, &pol).unwrap();
        assert!(agreement_digits(&single.norm.value, &r.norm.value, 100) >= 20);
    }
}
