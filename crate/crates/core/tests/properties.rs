use gfc::convops::{conv_power, convolve, gfd, gfi, ConvConfig, OperatorRequest, SingularFunction};
use gfc::grammar::parse_function;
use gfc::kernels::{associated_kernel, resolve, KernelSpec, SoninePair};
use gfc::series::{ConvolutionSeries, ConvolutionSeriesSpec};
use gfc::specfun::{gamma, mittag_leffler, multinomial_ml, MLParams, MultiMLParams};
use gfc::taylor::{extract_coefficients_with, TaylorExpansion, TaylorVariant};
use proptest::prelude::*;

fn cfg() -> ConvConfig {
    ConvConfig::default()
}

fn h(beta: f64, x: f64) -> f64 {
    x.powf(beta - 1.0) / gamma(beta).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        let lhs = gamma(x + 1.0).unwrap();
        prop_assert!(close(lhs, x * gamma(x).unwrap(), 1e-12));
    }

    #[test]
    fn ml_one_one_is_exp(z in -2.0f64..2.0) {
        let e = mittag_leffler(&MLParams::new(1.0, 1.0).unwrap(), z).unwrap();
        prop_assert!(close(e, z.exp(), 1e-10));
    }

    #[test]
    fn multinomial_with_one_argument_is_ml(alpha in 0.2f64..1.5, beta in 0.2f64..2.0, z in -1.0f64..1.0) {
        let m = multinomial_ml(&MultiMLParams::new(vec![alpha], beta, 2000).unwrap(), &[z]);
        let e = mittag_leffler(&MLParams::new(alpha, beta).unwrap(), z);
        match (m, e) {
            (Ok(m), Ok(e)) => prop_assert!((m - e).abs() <= 1e-12 * e.abs().max(1.0)),
            (Err(a), Err(b)) => prop_assert_eq!(a.code(), b.code()),
            (m, e) => prop_assert!(false, "one side failed: {:?} vs {:?}", m, e),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_kernels_convolve_to_power_kernels(a in 0.05f64..0.95, b in 0.05f64..0.95, x in 0.1f64..2.0) {
        let cfg = cfg();
        let c = convolve(&SingularFunction::power(a, &cfg).unwrap(), &SingularFunction::power(b, &cfg).unwrap(), &cfg).unwrap();
        prop_assert!((c.eval(x).unwrap() - h(a + b, x)).abs() <= 1e-12);
    }

    #[test]
    fn convolution_commutes(a in 0.1f64..1.0, lambda in -1.0f64..1.0, b in 0.1f64..3.0, x in 0.05f64..2.0) {
        let cfg = cfg();
        let f = SingularFunction::from_regular(a, |t| (lambda * t).exp(), &cfg).unwrap();
        let g = SingularFunction::power(b, &cfg).unwrap();
        let fg = convolve(&f, &g, &cfg).unwrap().eval(x).unwrap();
        let gf = convolve(&g, &f, &cfg).unwrap().eval(x).unwrap();
        prop_assert!((fg - gf).abs() <= 1e-10 * fg.abs().max(1.0));
    }

    #[test]
    fn gfi_commutes_and_composes(a1 in 0.1f64..1.0, a2 in 0.1f64..1.0, x in 0.05f64..2.0) {
        let cfg = cfg();
        let (k1, k2) = (KernelSpec::PowerLaw(a1), KernelSpec::PowerLaw(a2));
        let f = SingularFunction::exp(-1.0, &cfg).unwrap();
        let i12 = gfi(&k1, 1, &gfi(&k2, 1, &f, &cfg).unwrap(), &cfg).unwrap().eval(x).unwrap();
        let i21 = gfi(&k2, 1, &gfi(&k1, 1, &f, &cfg).unwrap(), &cfg).unwrap().eval(x).unwrap();
        prop_assert!((i12 - i21).abs() <= 1e-8);
        let direct = gfi(&KernelSpec::PowerLaw(a1 + a2), 1, &f, &cfg).unwrap().eval(x).unwrap();
        prop_assert!((i12 - direct).abs() <= 1e-8);
    }

    #[test]
    fn power_law_resolves_exactly(beta in 0.05f64..4.0, x in 0.01f64..2.0) {
        let k = resolve(&KernelSpec::PowerLaw(beta), &cfg()).unwrap();
        // above 1 the polynomial part is a Chebyshev sum, accurate in absolute terms near 0
        let x = if beta > 1.0 { x.max(0.1) } else { x };
        prop_assert!(close(k.eval(x).unwrap(), h(beta, x), 1e-12));
    }

    #[test]
    fn associate_is_an_involution(alpha in 0.01f64..0.99, beta in 0.01f64..0.99) {
        match associated_kernel(&associated_kernel(&KernelSpec::PowerLaw(alpha)).unwrap()).unwrap() {
            KernelSpec::PowerLaw(back) => prop_assert!((back - alpha).abs() <= 4.0 * f64::EPSILON),
            other => prop_assert!(false, "{}", other),
        }
        let (a, b) = if alpha < beta { (alpha, beta) } else { (beta, alpha) };
        prop_assume!(a < b);
        let ml = KernelSpec::MLKernel { alpha: a, beta: b };
        match associated_kernel(&associated_kernel(&ml).unwrap()).unwrap() {
            KernelSpec::MLKernel { alpha: a2, beta: b2 } => {
                prop_assert!((a2 - a).abs() <= 4.0 * f64::EPSILON && (b2 - b).abs() <= 4.0 * f64::EPSILON)
            }
            other => prop_assert!(false, "{}", other),
        }
    }

    #[test]
    fn taylor_round_trip(c in proptest::collection::vec(-2.0f64..2.0, 3), alpha in 0.3f64..0.8) {
        let cfg = cfg();
        let pair = SoninePair::power(alpha).unwrap();
        let mut f = SingularFunction::zero(cfg.x_max);
        for (j, cj) in c.iter().enumerate() {
            f = f.add(&conv_power(&pair.kappa, j + 1, &cfg).unwrap().scale_by(*cj)).unwrap();
        }
        let (got, report) = extract_coefficients_with(&f, &pair, 3, &cfg).unwrap();
        prop_assert!(report.stopped.is_none());
        for (g, w) in got.iter().zip(&c) {
            prop_assert!((g - w).abs() <= 1e-4);
        }
        let t = TaylorExpansion::build(&f, &pair, 3, TaylorVariant::Rl, &cfg).unwrap();
        for x in [0.1, 0.7, 1.3, 2.0] {
            prop_assert!(t.remainder(x).unwrap().abs() <= 1e-5);
        }
    }

    #[test]
    fn tail_bound_majorizes_the_tail(alpha in 0.2f64..1.0, lambda in -1.0f64..1.0, x in 0.01f64..2.0, big_j in 0usize..25, extra in 1usize..40) {
        let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(KernelSpec::PowerLaw(alpha), lambda).unwrap(), &cfg()).unwrap();
        let near = series.partial_sum(big_j, x).unwrap();
        let far = series.partial_sum(big_j + extra, x).unwrap();
        let floor = 64.0 * f64::EPSILON * far.abs().max(1.0);
        prop_assert!((far - near).abs() <= series.tail_bound(big_j, x) + floor);
    }
}

#[test]
fn series_is_continuous_at_zero_after_scaling() {
    let cfg = cfg();
    for kernel in [KernelSpec::PowerLaw(0.5), KernelSpec::PowerLaw(0.75), KernelSpec::ExtendedH1] {
        for lambda in [-0.5, 1.0] {
            let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(kernel.clone(), lambda).unwrap(), &cfg).unwrap();
            let p = series.bound().p;
            let v: Vec<f64> = (4..=12)
                .map(|k| {
                    let x = 2f64.powi(-k);
                    x.powf(1.0 - p) * series.evaluate(x, 1e-15).unwrap().value
                })
                .collect();
            let steps: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            for w in steps.windows(2) {
                assert!(w[1] <= w[0] * 1.0001, "{kernel} λ={lambda}: steps {steps:?}");
            }
            // steps shrink geometrically, so the remaining sum is a small multiple of the last
            assert!(steps[steps.len() - 1] < 0.05 * v[v.len() - 1].abs(), "{kernel}: {steps:?}");
        }
    }
}

#[test]
fn kernel_multiples_are_annihilated() {
    let cfg = cfg();
    for kappa in [KernelSpec::PowerLaw(0.5), KernelSpec::SumPowerLaw(vec![(1.0, 0.625), (1.0, 0.375)])] {
        let pair = SoninePair::from_catalog(kappa.clone()).unwrap();
        for c in [1.0, -3.0] {
            let f = resolve(&kappa, &cfg).unwrap().scale_by(c);
            let d = gfd(&OperatorRequest::rl(pair.k.clone(), 1), &f, &cfg).unwrap();
            for i in 0..=19 {
                let x = 0.1 + 1.9 * i as f64 / 19.0;
                assert!(d.eval(x).unwrap().abs() <= 1e-6, "{kappa} C={c} x={x}");
            }
        }
    }
}

#[test]
fn geometric_coefficients_are_recovered() {
    let cfg = cfg();
    let lambda = 0.5;
    for kappa in [KernelSpec::PowerLaw(0.5), KernelSpec::SumPowerLaw(vec![(1.0, 0.625), (1.0, 0.375)])] {
        let pair = SoninePair::from_catalog(kappa.clone()).unwrap();
        let f = parse_function("geom:0.5").unwrap().build(Some(&kappa), &cfg).unwrap();
        let (a, _) = extract_coefficients_with(&f, &pair, 3, &cfg).unwrap();
        assert_eq!(a.len(), 3);
        for (j, aj) in a.iter().enumerate() {
            assert!((aj - lambda_pow(lambda, j)).abs() <= 1e-4, "{kappa} a_{j} = {aj}");
        }
    }
}

fn lambda_pow(lambda: f64, j: usize) -> f64 {
    lambda.powi(j as i32)
}

#[test]
fn taylor_identity_splits_for_both_variants() {
    let cfg = cfg();
    for kappa in [KernelSpec::PowerLaw(0.5), KernelSpec::SumPowerLaw(vec![(1.0, 0.625), (1.0, 0.375)])] {
        let pair = SoninePair::from_catalog(kappa.clone()).unwrap();
        let f = SingularFunction::exp(1.0, &cfg).unwrap();
        for variant in [TaylorVariant::Rl, TaylorVariant::Caputo] {
            let t = TaylorExpansion::build(&f, &pair, 2, variant, &cfg).unwrap();
            for i in 1..=20 {
                let x = 0.1 * i as f64;
                assert!(t.identity_residual(x).unwrap().abs() <= 1e-5, "{kappa} {variant:?} x={x}");
            }
        }
    }
}
