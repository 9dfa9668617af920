//! Condition numbers of flexibility matrices and nonzero counts.

pub mod chopped;

use nalgebra::{Cholesky, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};

pub use chopped::{chop, chopped_gauss_solve, demo_systems, ChoppedNumber, DemoSystem, Pivoting};

const SYMMETRY_TOL: f64 = 1e-12;

fn check_square(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}×{}", a.nrows(), a.ncols())));
    }
    if a.nrows() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    Ok(())
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    check_square(a)?;
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut skew = 0.0f64;
    for i in 0..a.nrows() {
        for j in i + 1..a.ncols() {
            skew = skew.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if skew > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(skew / scale));
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations in fixed row-major sweep order.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    let n = a.nrows();
    let mut m = (a + a.transpose()) * 0.5;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag * 1e-4 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[(p, p)], m[(q, q)]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// (λmin, λmax) of a symmetric positive definite matrix.
pub fn eig_extremes(a: &DMatrix<f64>) -> Result<(f64, f64)> {
    let eig = symmetric_eigenvalues(a)?;
    let (lo, hi) = (eig[0], eig[eig.len() - 1]);
    if lo <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok((lo, hi))
}

/// log₁₀(λmax / λmin).
pub fn pl(a: &DMatrix<f64>) -> Result<f64> {
    let (lo, hi) = eig_extremes(a)?;
    Ok((hi / lo).log10())
}

/// Trustworthy decimal digits left when working with `precision` digits.
pub fn good_digits(pl: f64, precision: u32) -> f64 {
    precision as f64 - pl
}

/// Determinant kept together with its base-10 logarithm, so values far
/// below the smallest double remain reportable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledDeterminant {
    /// Determinant, 0 when it underflows.
    pub value: f64,
    /// log₁₀|det|.
    pub log10: f64,
    pub sign: f64,
}

impl ScaledDeterminant {
    fn from_log(log10: f64, sign: f64) -> Self {
        let value = if sign == 0.0 { 0.0 } else { sign * 10f64.powf(log10) };
        ScaledDeterminant { value, log10, sign }
    }
}

/// Determinant of the row-normalized matrix.
pub fn pn_detail(a: &DMatrix<f64>) -> Result<ScaledDeterminant> {
    check_square(a)?;
    let mut m = a.clone();
    for i in 0..m.nrows() {
        let norm = m.row(i).norm();
        if norm == 0.0 {
            return Err(Error::ZeroRow(i));
        }
        m.row_mut(i).unscale_mut(norm);
    }
    let lu = m.full_piv_lu();
    let u = lu.u();
    let mut sign = lu.p().determinant::<f64>() * lu.q().determinant::<f64>();
    let mut log10 = 0.0;
    for i in 0..u.nrows() {
        let d = u[(i, i)];
        if d == 0.0 {
            return Ok(ScaledDeterminant { value: 0.0, log10: f64::NEG_INFINITY, sign: 0.0 });
        }
        sign *= d.signum();
        log10 += d.abs().log10();
    }
    Ok(ScaledDeterminant::from_log(log10, sign))
}

pub fn pn(a: &DMatrix<f64>) -> Result<f64> {
    Ok(pn_detail(a)?.value)
}

/// det(D^{-1/2} A D^{-1/2}) with D = diag(A).
pub fn pdet_detail(a: &DMatrix<f64>) -> Result<ScaledDeterminant> {
    check_symmetric(a)?;
    let n = a.nrows();
    let mut scale = Vec::with_capacity(n);
    for i in 0..n {
        let d = a[(i, i)];
        if !(d > 0.0) {
            return Err(Error::Domain(format!("diagonal entry {i} is not positive")));
        }
        scale.push(1.0 / d.sqrt());
    }
    let s = DMatrix::from_fn(n, n, |i, j| a[(i, j)] * scale[i] * scale[j]);
    let chol = Cholesky::new(s).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l_dirty();
    let log10 = 2.0 * (0..n).map(|i| l[(i, i)].log10()).sum::<f64>();
    Ok(ScaledDeterminant::from_log(log10, 1.0))
}

pub fn pdet(a: &DMatrix<f64>) -> Result<f64> {
    Ok(pdet_detail(a)?.value)
}

/// Nonzero count; with `block > 1`, counts `block`×`block` tiles holding a
/// nonzero entry.
pub fn nnz(a: &DMatrix<f64>, block: usize) -> usize {
    let block = block.max(1);
    let (br, bc) = (a.nrows().div_ceil(block), a.ncols().div_ceil(block));
    let mut count = 0;
    for i in 0..br {
        for j in 0..bc {
            let rows = block.min(a.nrows() - i * block);
            let cols = block.min(a.ncols() - j * block);
            if a.view((i * block, j * block), (rows, cols)).iter().any(|&v| v != 0.0) {
                count += 1;
            }
        }
    }
    count
}

/// Conditioning of one flexibility matrix together with the sparsity of its
/// cycle adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub pl: f64,
    pub pn: f64,
    pub pn_log10: f64,
    pub pdet: f64,
    pub pdet_log10: f64,
    pub xd: usize,
    pub precision: u32,
    pub good_digits: f64,
}

impl ConditionReport {
    pub fn new(g: &DMatrix<f64>, xd: usize, precision: u32) -> Result<Self> {
        let pl = pl(g)?;
        let pn = pn_detail(g)?;
        let pdet = pdet_detail(g)?;
        Ok(ConditionReport {
            pl,
            pn: pn.value,
            pn_log10: pn.log10,
            pdet: pdet.value,
            pdet_log10: pdet.log10,
            xd,
            precision,
            good_digits: good_digits(pl, precision),
        })
    }

    pub fn good_digits_at(&self, precision: u32) -> f64 {
        good_digits(self.pl, precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_perfect() {
        let i = DMatrix::<f64>::identity(5, 5);
        assert_eq!(eig_extremes(&i).unwrap(), (1.0, 1.0));
        assert_eq!(pl(&i).unwrap(), 0.0);
        assert_eq!(pn(&i).unwrap(), 1.0);
        assert_eq!(pdet(&i).unwrap(), 1.0);
        assert_eq!(nnz(&i, 1), 5);
    }

    #[test]
    fn small_hand_cases() {
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 100.0]);
        assert!((pl(&d).unwrap() - 2.0).abs() < 1e-14);
        let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 8.0]);
        assert!((pn(&d).unwrap() - 1.0).abs() < 1e-15);
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 2.0]);
        assert!((pn(&a).unwrap() - 1.0 / 10f64.sqrt()).abs() < 1e-12);
        assert!((pdet(&a).unwrap() - 0.5).abs() < 1e-12);
        assert!((good_digits(3.452154, 8) - 4.547846).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eig_extremes(&a), Err(Error::NotSymmetric(_))));
        let z = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(pn(&z).unwrap_err(), Error::ZeroRow(1));
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(eig_extremes(&indefinite).unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn underflowing_determinant_keeps_log() {
        let n = 40;
        let a = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.999 });
        let d = pdet_detail(&a).unwrap();
        assert!(d.log10 < 0.0 && d.log10.is_finite());
    }

    #[test]
    fn block_count() {
        let mut a = DMatrix::zeros(6, 6);
        a[(0, 0)] = 1.0;
        a[(4, 1)] = 1.0;
        a[(5, 5)] = 1.0;
        assert_eq!(nnz(&a, 3), 3);
        assert_eq!(nnz(&a, 1), 3);
    }
}
