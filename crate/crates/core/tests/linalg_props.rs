use num_complex::Complex64;
use proptest::prelude::*;

use polyspec::linalg::{
    eigenvalues, frobenius_norm, inverse, lu_factor, pseudoinverse, singular_values, spectral_norm, svd,
    woodbury_inverse, DenseMatrix,
};
use polyspec::RngStream;

fn rel_err(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    frobenius_norm(&a.try_sub(b).unwrap()) / frobenius_norm(b).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9) {
        let x = RngStream::new(seed, 0).gaussian_matrix(rows, cols, 1.0);
        let s = svd(&x).unwrap();
        prop_assert!(rel_err(&s.reconstruct(), &x) < 1e-12);
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.sigma.iter().all(|&v| v >= 0.0));
        prop_assert_eq!(s.sigma.len(), rows.min(cols));
    }

    #[test]
    fn penrose_conditions(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7, rank in 1usize..7) {
        let rng = RngStream::new(seed, 1);
        let r = rank.min(rows).min(cols);
        let x = rng.substream(0).gaussian_matrix(rows, r, 1.0).matmul(&rng.substream(1).gaussian_matrix(r, cols, 1.0)).unwrap();
        let p = pseudoinverse(&x).unwrap();
        let xp = x.matmul(&p).unwrap();
        let px = p.matmul(&x).unwrap();
        prop_assert!(rel_err(&xp.matmul(&x).unwrap(), &x) < 1e-9);
        prop_assert!(rel_err(&px.matmul(&p).unwrap(), &p) < 1e-9);
        prop_assert!(rel_err(&xp.adjoint(), &xp) < 1e-9);
        prop_assert!(rel_err(&px.adjoint(), &px) < 1e-9);
    }

    #[test]
    fn woodbury_matches_direct(seed in any::<u64>(), n in 2usize..9, r in 1usize..4) {
        let rng = RngStream::new(seed, 2);
        let shift = 3.0 * (n as f64).sqrt();
        let a = rng.substream(0).gaussian_matrix(n, n, 1.0).shifted(Complex64::new(-shift, 0.0)).unwrap();
        let u = rng.substream(1).gaussian_matrix(n, r, 0.25);
        let v = rng.substream(2).gaussian_matrix(r, n, 0.25);
        let b = a.try_add(&u.matmul(&v).unwrap()).unwrap();
        let w = woodbury_inverse(&inverse(&a).unwrap(), &u, &v).unwrap();
        prop_assert!(rel_err(&w, &inverse(&b).unwrap()) < 1e-10);
    }

    #[test]
    fn norm_relations(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let x = RngStream::new(seed, 3).gaussian_matrix(rows, cols, 1.0);
        let two = spectral_norm(&x).unwrap();
        let fro = frobenius_norm(&x);
        let rank = rows.min(cols) as f64;
        prop_assert!(two <= fro * (1.0 + 1e-12));
        prop_assert!(fro <= two * rank.sqrt() * (1.0 + 1e-12));
        let sv = singular_values(&x).unwrap();
        let fro_from_sv = sv.iter().map(|s| s * s).sum::<f64>().sqrt();
        prop_assert!((fro - fro_from_sv).abs() <= 1e-12 * fro);
    }

    #[test]
    fn eigenvalue_product_is_determinant(seed in any::<u64>(), n in 1usize..9) {
        let x = RngStream::new(seed, 4).gaussian_matrix(n, n, 1.0);
        let prod: Complex64 = eigenvalues(&x).unwrap().eigenvalues.iter().product();
        let det = lu_factor(&x).unwrap().determinant();
        prop_assert!((prod - det).norm() <= 1e-10 * det.norm().max(1.0));
        let trace: Complex64 = (0..n).map(|i| x[(i, i)]).sum();
        let ev_sum: Complex64 = eigenvalues(&x).unwrap().eigenvalues.iter().sum();
        prop_assert!((trace - ev_sum).norm() <= 1e-10 * (n as f64));
    }
}
