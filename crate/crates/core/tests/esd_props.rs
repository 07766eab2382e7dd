mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use polyspec::esd::{
    angular_ks, esd_of_polynomial, ks_statistic, merge, radial_ks, read_points_csv, EmpiricalSpectralDistribution,
    LimitLaw,
};
use polyspec::matpoly::sample_monic_gaussian;
use polyspec::RngStream;

fn sample_esd(n: usize, k: usize, seed: u64) -> EmpiricalSpectralDistribution {
    let p = sample_monic_gaussian(n, k, &RngStream::new(seed, 0)).unwrap();
    esd_of_polynomial(&p, 1.0 / (n as f64).sqrt()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn distances_are_rotation_invariant(seed in any::<u64>(), theta in 0.0..2.0 * PI) {
        let esd = sample_esd(6, 3, seed);
        let rot = Complex64::from_polar(1.0, theta);
        let turned = esd.map_points(|z| z * rot);
        let a = angular_ks(&esd, 0.0).unwrap();
        let b = angular_ks(&turned, 0.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
        let law = LimitLaw::disc_mixture(3).unwrap();
        prop_assert!((radial_ks(&esd, &law) - radial_ks(&turned, &law)).abs() <= 1e-12);
    }

    #[test]
    fn merge_order_does_not_matter(seed in any::<u64>()) {
        let parts: Vec<_> = (0..3).map(|t| sample_esd(4, 2, seed.wrapping_add(t))).collect();
        let fwd = merge(&parts).unwrap();
        let rev: Vec<_> = parts.iter().rev().cloned().collect();
        let back = merge(&rev).unwrap();
        let law = LimitLaw::UnitDisc;
        prop_assert_eq!(radial_ks(&fwd, &law), radial_ks(&back, &law));
        prop_assert_eq!(angular_ks(&fwd, 0.1).unwrap(), angular_ks(&back, 0.1).unwrap());
        prop_assert_eq!(fwd.len(), 24);
    }

    #[test]
    fn csv_round_trip_is_exact(seed in any::<u64>()) {
        let esd = sample_esd(3, 4, seed);
        let mut buf = Vec::new();
        esd.write_csv(&mut buf).unwrap();
        let back = read_points_csv(std::io::BufReader::new(&buf[..])).unwrap();
        prop_assert_eq!(back.as_slice(), esd.points());
    }

    #[test]
    fn ks_matches_bruteforce(samples in proptest::collection::vec(0.0f64..1.0, 1..60)) {
        let cdf = |x: f64| x.clamp(0.0, 1.0);
        let mut sorted = samples.clone();
        let fast = ks_statistic(&mut sorted, cdf);
        let slow = common::ks_bruteforce(&samples, cdf, cdf);
        prop_assert!((fast - slow).abs() <= 1e-15);
    }

    #[test]
    fn radial_ks_matches_bruteforce(seed in any::<u64>(), k in 1usize..5) {
        let esd = sample_esd(5, k, seed);
        let law = LimitLaw::disc_mixture(k).unwrap();
        let radii: Vec<f64> = esd.points().iter().map(|z| z.norm()).collect();
        let slow = common::ks_bruteforce(&radii, |r| law.radial_cdf(r), |r| law.radial_cdf_left(r));
        // just above 0 the law jumps to its atom mass while no radius sits there
        let at_zero = law.radial_cdf(0.0);
        let slow = slow.max(at_zero);
        prop_assert!((radial_ks(&esd, &law) - slow).abs() <= 1e-12);
    }
}

#[test]
fn roots_of_unity_are_nearly_uniform() {
    let pts: Vec<Complex64> = (0..8)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 8.0))
        .collect();
    let esd = EmpiricalSpectralDistribution::from_samples(pts).unwrap();
    assert!(angular_ks(&esd, 0.5).unwrap() <= 1.0 / 8.0 + 1e-12);
    let single = EmpiricalSpectralDistribution::from_samples(vec![Complex64::new(0.0, 1.0)]).unwrap();
    assert!((angular_ks(&single, 0.5).unwrap() - 1.0).abs() < 1e-12);
}
