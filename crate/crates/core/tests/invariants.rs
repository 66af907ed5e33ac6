use collar_core::helmholtz::{green_kernel, AnnulusSpec, CutoffProfile, Frequency, ModeIndex};
use collar_core::scaling::{
    annulus_l2_sq, classify_regime, fit_power_law, mode_operator_norm, ray_sojourn, sweep_and_fit, NormKind,
    RegimeLabel, RegimeRecipe, SweepSpec, Weighting,
};
use collar_core::special_fn::{half_integer_jy, Order};
use proptest::prelude::*;
use std::f64::consts::PI;

fn dyadic() -> Vec<f64> {
    (7..=13).map(|k| 2f64.powi(k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_symmetric(l in 0u32..300, lam in 2.0f64..400.0, r in 1.0f64..1.3, s in 1.0f64..1.3) {
        let nu = Order::half_integer(l);
        let f = Frequency::new(lam).unwrap();
        let a = green_kernel(nu, r, s, f).unwrap();
        let b = green_kernel(nu, s, r, f).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cutoff_is_a_plateau_bump(t in -1.5f64..1.5) {
        for p in [CutoffProfile::Standard, CutoffProfile::Steep] {
            let v = p.shape(t);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert_eq!(v, p.shape(-t));
            if t.abs() <= 0.5 {
                prop_assert_eq!(v, 1.0);
            }
            if t.abs() >= 1.0 {
                prop_assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn power_law_fit_is_exact(c in 1e-6f64..1e6, e in -5.0f64..3.0, k0 in 0i32..6) {
        let lams: Vec<f64> = (k0..k0 + 6).map(|k| 2f64.powi(k)).collect();
        let ms: Vec<f64> = lams.iter().map(|l| c * l.powf(e)).collect();
        let fit = fit_power_law(&lams, &ms).unwrap();
        prop_assert!((fit.slope - e).abs() < 1e-12);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-10);
        prop_assert!(fit.max_residual < 1e-10);
    }

    #[test]
    fn sojourn_is_monotone_in_impact(alpha in 0.0f64..0.66, lam in 1.0f64..1e6, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let f = Frequency::new(lam).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(ray_sojourn(alpha, f, lo).unwrap() <= ray_sojourn(alpha, f, hi).unwrap());
    }

    #[test]
    fn wronskian_holds(m in 0u32..600, z in 0.05f64..3000.0) {
        let v = half_integer_jy(m, z).unwrap();
        let w = (v.j * v.dy).sub(v.dj * v.y).to_f64();
        prop_assert!((w * PI * z / 2.0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn classification_is_total_and_consistent(l in 0u32..20000, lam in 1.0f64..1e4, eps in 0.01f64..0.49) {
        let label = classify_regime(ModeIndex::new(l), Frequency::new(lam).unwrap(), eps).unwrap();
        let c = (l as f64 + 0.5) / lam;
        match label {
            RegimeLabel::Transversal { .. } => prop_assert!(c <= 1.0 - eps),
            RegimeLabel::Elliptic { .. } => prop_assert!(c >= 1.0 + eps),
            RegimeLabel::Glancing { beta } => {
                prop_assert!(c > 1.0 - eps && c < 1.0 + eps);
                prop_assert!(beta > 0.0);
            }
        }
    }
}

#[test]
fn sojourn_is_continuous_at_grazing() {
    for lam in [10.0, 1e3, 1e5] {
        let f = Frequency::new(lam).unwrap();
        let at = ray_sojourn(0.4, f, 1.0).unwrap();
        let delta = lam.powf(-0.4);
        for eps in [1e-9, 1e-12] {
            // below grazing the inner chord √(1 - d²) enters like a square root
            let below = (ray_sojourn(0.4, f, 1.0 - eps).unwrap() - at).abs();
            assert!(below <= 2.0 * (eps / delta).sqrt() * at);
            assert!((ray_sojourn(0.4, f, 1.0 + eps).unwrap() - at).abs() < 1e-4 * at);
        }
    }
}

#[test]
fn operator_norm_tracks_the_hankel_norm() {
    // ‖op‖ ≤ C ‖H‖², one constant across the sweep within a factor 3
    let ratios: Vec<f64> = dyadic()
        .into_iter()
        .map(|lam| {
            let f = Frequency::new(lam).unwrap();
            let spec = AnnulusSpec::new(0.4, f, CutoffProfile::Standard).unwrap();
            let mode = ModeIndex::new((lam / 2.0 - 0.5) as u32);
            mode_operator_norm(mode, f, &spec, Weighting::Plain).unwrap().value / annulus_l2_sq(mode.nu(), f, &spec).unwrap()
        })
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo <= 3.0, "{ratios:?}");
}

fn slope(kind: NormKind, recipe: RegimeRecipe, cutoff: CutoffProfile) -> f64 {
    let spec = SweepSpec { kind, recipe, alpha: 0.4, lambdas: dyadic(), cutoff, weighting: Weighting::Plain };
    sweep_and_fit(&spec).unwrap().fit.slope
}

#[test]
fn operator_slopes_order_like_the_predicted_exponents() {
    // predicted at α = 0.4: transversal -1.4, β = 0.2 -1.4, β = 0.3 -1.3, β = 0.4 -1.2
    let measured: Vec<f64> = [
        RegimeRecipe::Transversal { ratio: 0.5 },
        RegimeRecipe::Glancing { beta: 0.2 },
        RegimeRecipe::Glancing { beta: 0.3 },
        RegimeRecipe::Glancing { beta: 0.4 },
    ]
    .into_iter()
    .map(|r| slope(NormKind::OperatorNorm, r, CutoffProfile::Standard))
    .collect();
    assert!(measured.windows(2).all(|w| w[0] <= w[1]), "{measured:?}");
    assert!(measured[0] < measured[3] && measured[1] < measured[3]);
}

#[test]
fn slopes_do_not_depend_on_the_cutoff() {
    let cases = [
        (NormKind::HankelL2Sq, RegimeRecipe::Transversal { ratio: 0.5 }),
        (NormKind::CrossTermL2, RegimeRecipe::Glancing { beta: 0.3 }),
        (NormKind::OperatorNorm, RegimeRecipe::Transversal { ratio: 0.5 }),
        (NormKind::OperatorNorm, RegimeRecipe::Glancing { beta: 0.4 }),
        (NormKind::OperatorNorm, RegimeRecipe::Glancing { beta: 0.2 }),
    ];
    for (kind, recipe) in cases {
        let a = slope(kind, recipe, CutoffProfile::Standard);
        let b = slope(kind, recipe, CutoffProfile::Steep);
        assert!((a - b).abs() <= 0.05, "{kind:?} {recipe:?}: {a} vs {b}");
    }
}

#[test]
fn weightings_give_the_same_transversal_slope() {
    let spec = |weighting| SweepSpec {
        kind: NormKind::OperatorNorm,
        recipe: RegimeRecipe::Transversal { ratio: 0.5 },
        alpha: 0.4,
        lambdas: dyadic(),
        cutoff: CutoffProfile::Standard,
        weighting,
    };
    let a = sweep_and_fit(&spec(Weighting::Plain)).unwrap().fit.slope;
    let b = sweep_and_fit(&spec(Weighting::Radial)).unwrap().fit.slope;
    assert!((a - b).abs() < 0.01, "{a} {b}");
}

#[test]
fn glancing_hankel_norm_follows_the_debye_amplitude() {
    // |H_ν(λr)|² ≈ (2/πν)(z² - 1)^{-1/2} with z² - 1 ≈ 2(λ^{-β} + r - 1); over a
    // collar of width λ^{-α} this integrates to λ^{-1-α+β/2} when β <= α
    for beta in [0.2, 0.3, 0.4] {
        let s = slope(NormKind::HankelL2Sq, RegimeRecipe::Glancing { beta }, CutoffProfile::Standard);
        let expect = -1.0 - 0.4 + beta / 2.0;
        assert!((s - expect).abs() < 0.02, "beta {beta}: {s} vs {expect}");
    }
}
