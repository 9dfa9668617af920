mod support;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flexcycle::metrics::{
    chop, chopped_gauss_solve, eig_extremes, nnz, pdet, pdet_detail, pl, pn, pn_detail, symmetric_eigenvalues,
    Pivoting,
};
use flexcycle::Error;

use support::bisection_extremes;

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    b.transpose() * &b + DMatrix::identity(n, n) * rng.random_range(0.01..0.5)
}

#[test]
fn extremes_match_bisection_on_random_spd() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..200 {
        let n = 3 + k % 2;
        let a = random_spd(&mut rng, n);
        let (lo, hi) = eig_extremes(&a).unwrap();
        let (blo, bhi) = bisection_extremes(&a);
        assert!((lo - blo).abs() < 1e-10, "{lo} vs {blo}");
        assert!((hi - bhi).abs() < 1e-10, "{hi} vs {bhi}");
    }
}

#[test]
fn spectrum_reproduces_trace_and_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=8 {
        let a = random_spd(&mut rng, n);
        let ev = symmetric_eigenvalues(&a).unwrap();
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        assert!((ev.iter().sum::<f64>() - a.trace()).abs() < 1e-12 * a.trace().abs().max(1.0));
        let det: f64 = ev.iter().product();
        assert!((det - a.determinant()).abs() < 1e-9 * det.abs().max(1e-12));
    }
}

#[test]
fn pl_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let a = random_spd(&mut rng, 4);
        let p = pl(&a).unwrap();
        assert!(p >= 0.0);
        assert!((pl(&(&a * 1e5)).unwrap() - p).abs() < 1e-9);
    }
}

#[test]
fn determinant_estimators() {
    let one_two = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 2.0]);
    assert_eq!(pn(&DMatrix::identity(5, 5)).unwrap(), 1.0);
    assert!((pn(&one_two).unwrap() - 1.0 / 10f64.sqrt()).abs() < 1e-12);
    assert!((pdet(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 0.2, 7.0]))).unwrap() - 1.0).abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let a = random_spd(&mut rng, 5);
        let (p, d) = (pn(&a).unwrap(), pdet(&a).unwrap());
        // Hadamard: both lie in (0, 1] for SPD matrices
        assert!(p > 0.0 && p <= 1.0 + 1e-12);
        assert!(d > 0.0 && d <= 1.0 + 1e-12);
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(5, |_, _| rng.random_range(0.1..10.0)));
        assert!((pn(&(&s * &a)).unwrap() - p).abs() < 1e-10);
        assert!((pdet(&(&s * &a * &s)).unwrap() - d).abs() < 1e-10);
    }
}

#[test]
fn tiny_determinants_keep_their_logarithm() {
    let n = 400;
    let a = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else if i.abs_diff(j) == 1 { 0.49 } else { 0.0 });
    let d = pdet_detail(&a).unwrap();
    assert!(d.log10.is_finite() && d.log10 < 0.0);
    let p = pn_detail(&a).unwrap();
    assert!(p.log10 < 0.0 && p.sign > 0.0);
}

#[test]
fn kernel_errors() {
    let skew = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
    assert!(matches!(pl(&skew), Err(Error::NotSymmetric(_))));
    let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    assert!(matches!(pl(&indefinite), Err(Error::NotPositiveDefinite)));
    assert!(matches!(pn(&DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 1.0])), Err(Error::ZeroRow(0))));
    assert!(matches!(pdet(&DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0])), Err(Error::Domain(_))));
    assert!(pl(&DMatrix::zeros(2, 3)).is_err());
}

#[test]
fn nonzero_counts() {
    let a = DMatrix::from_fn(6, 6, |i, j| if i == j || (i < 3 && j < 3) { 1.0 } else { 0.0 });
    assert_eq!(nnz(&a, 1), 12);
    assert_eq!(nnz(&a, 3), 2);
}

#[test]
fn chop_agrees_with_decimal_formatting() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5000 {
        let x = rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-8..8));
        for digits in [2u32, 4, 7] {
            let text = format!("{:.*e}", digits as usize - 1, x);
            // skip values sitting on a decimal tie, where formatting rounds to even
            let wide = format!("{:.*e}", digits as usize + 12, x);
            let tail = &wide[wide.find('.').unwrap() + digits as usize..wide.find('e').unwrap()];
            if tail.starts_with("5000") {
                continue;
            }
            assert_eq!(chop(x, digits), text.parse::<f64>().unwrap(), "{x} at {digits}");
        }
    }
}

#[test]
fn chopped_solve_with_many_digits_is_exact_enough() {
    let a = vec![vec![4.0, 1.0, 0.0], vec![1.0, 5.0, 2.0], vec![0.0, 2.0, 6.0]];
    let x = [1.0, -2.0, 3.0];
    let b: Vec<f64> = a.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
    let got = chopped_gauss_solve(&a, &b, 15, Pivoting::None).unwrap();
    for (g, e) in got.iter().zip(x) {
        assert!((g - e).abs() < 1e-12);
    }
}
