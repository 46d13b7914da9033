use nslab::kernels::*;
use proptest::prelude::*;

/// `(2π)^{-3}·4π·∫_{1/2}^{2} φ(ρ)ρ² dρ`, from a 30-digit quadrature of the profile.
const K1_ORIGIN: f64 = 0.052_979_794_859_696_04;

#[test]
fn kernel_at_origin() {
    assert!((schrodinger_kernel_origin(1.0) - K1_ORIGIN).abs() < 1e-12);
    for n in [1.0, 16.0, 256.0] {
        let v = schrodinger_kernel(n, 0.0, &[0.0; 3]);
        assert!((v.re / (K1_ORIGIN * n.powi(3)) - 1.0).abs() < 1e-10, "{v}");
        assert!(v.im.abs() < 1e-12 * n.powi(3));
    }
}

#[test]
fn profile_partition() {
    assert!(KernelProfile::new(16.0, KernelKind::Schrodinger).partition_error(2000) < 1e-10);
}

#[test]
fn kernel_is_radial() {
    let n = 32.0;
    let t = 0.003;
    let a = schrodinger_kernel(n, t, &[0.05, 0.0, 0.0]);
    let b = schrodinger_kernel(n, t, &[0.0, 0.03, -0.04]);
    assert!((a - b).norm() < 1e-12 * a.norm());
}

#[test]
fn heat_kernel_positive_at_origin() {
    for n in [4.0, 64.0, 1024.0] {
        for c in [1e-2, 1.0, 20.0] {
            assert!(heat_kernel(n, c / (n * n), &[0.0; 3]) > 0.0);
        }
    }
}

#[test]
fn sup_bands() {
    let mut ratios = Vec::new();
    for n in [16.0, 64.0, 256.0] {
        let r = kernel_sup_on_cylinder(n, KernelKind::Schrodinger, 100);
        assert!(r.at_origin <= r.sup * (1.0 + 1e-12));
        ratios.push(r.ratio);
    }
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(hi / lo < 2.0, "{ratios:?}");
    let heat: Vec<f64> = [64.0, 256.0, 1024.0].iter().map(|&n| kernel_sup_on_cylinder(n, KernelKind::Heat, 50).ratio).collect();
    for w in heat.windows(2) {
        assert!((w[0] / w[1] - 1.0).abs() < 1e-9, "{heat:?}");
    }
}

#[test]
fn l3_converges_at_small_dyad() {
    let r = kernel_l3_on_cylinder(16.0, KernelKind::Schrodinger).unwrap();
    assert!(r.refinement_gap < 0.01);
    assert!(r.ratio > 0.0 && r.ratio.is_finite());
    let h = kernel_l3_on_cylinder(64.0, KernelKind::Heat).unwrap();
    assert!(h.refinement_gap < 0.01);
}

#[test]
fn rescaling_cross_check_small_dyad() {
    let gap = rescaling_cross_check(16.0);
    assert!(gap < 0.01, "{gap}");
    assert!(gap > 0.0);
}

#[test]
fn strichartz_single_packet_and_family() {
    let r = strichartz_ratio(64.0, 1, KernelKind::Schrodinger, 1).unwrap();
    assert_eq!(r.trials_used, 1);
    assert!(r.normalized > 0.0 && r.normalized < 1.0, "{}", r.normalized);
    let fam: Vec<f64> = [16.0, 64.0, 256.0]
        .iter()
        .map(|&n| strichartz_ratio(n, 8, KernelKind::Schrodinger, 5).unwrap().normalized)
        .collect();
    let hi = fam.iter().cloned().fold(f64::MIN, f64::max);
    let lo = fam.iter().cloned().fold(f64::MAX, f64::min);
    assert!(hi / lo < 2.0, "{fam:?}");
}

#[test]
fn kernel_kind_parses() {
    assert_eq!("heat".parse::<KernelKind>().unwrap(), KernelKind::Heat);
    assert!("wave".parse::<KernelKind>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parabolic_rescaling(e in 0u32..9, tt in -30.0f64..30.0, rr in 0.0f64..20.0) {
        let n = f64::from(1u32 << e);
        let direct = schrodinger_kernel_radial(n, tt / (n * n), rr / n);
        let scaled = k1(tt, rr) * n.powi(3);
        prop_assert!((direct - scaled).norm() <= 1e-8 * scaled.norm().max(1e-6 * n.powi(3)));
    }
}
