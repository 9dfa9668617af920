//! Gaussian elimination in short decimal arithmetic.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Round `x` half away from zero to `digits` significant decimal digits.
pub fn chop(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() || digits == 0 || digits >= 17 {
        return x;
    }
    let d = digits as i32;
    let mut e = x.abs().log10().floor() as i32;
    let mut s = scale_pow10(x, d - 1 - e);
    if s.abs() < 10f64.powi(d - 1) {
        e -= 1;
        s = scale_pow10(x, d - 1 - e);
    } else if s.abs() >= 10f64.powi(d) {
        e += 1;
        s = scale_pow10(x, d - 1 - e);
    }
    let (r, k) = (s.round(), e - d + 1);
    // decimal parse gives the double nearest to r·10^k
    format!("{r}e{k}").parse().unwrap_or(r * 10f64.powi(k))
}

fn scale_pow10(x: f64, k: i32) -> f64 {
    if k >= 0 {
        x * 10f64.powi(k)
    } else {
        x / 10f64.powi(-k)
    }
}

/// A value re-rounded after every arithmetic operation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ChoppedNumber {
    value: f64,
    digits: u32,
}

impl ChoppedNumber {
    pub fn new(value: f64, digits: u32) -> Self {
        ChoppedNumber {
            value: chop(value, digits),
            digits,
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    fn with(self, value: f64) -> Self {
        ChoppedNumber::new(value, self.digits)
    }
}

impl Add for ChoppedNumber {
    type Output = ChoppedNumber;
    fn add(self, rhs: Self) -> Self {
        self.with(self.value + rhs.value)
    }
}

impl Sub for ChoppedNumber {
    type Output = ChoppedNumber;
    fn sub(self, rhs: Self) -> Self {
        self.with(self.value - rhs.value)
    }
}

impl Mul for ChoppedNumber {
    type Output = ChoppedNumber;
    fn mul(self, rhs: Self) -> Self {
        self.with(self.value * rhs.value)
    }
}

impl Div for ChoppedNumber {
    type Output = ChoppedNumber;
    fn div(self, rhs: Self) -> Self {
        self.with(self.value / rhs.value)
    }
}

impl Neg for ChoppedNumber {
    type Output = ChoppedNumber;
    fn neg(self) -> Self {
        ChoppedNumber { value: -self.value, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivoting {
    /// Eliminate in the given row order.
    None,
    /// Before eliminating, move to row k the remaining row with the largest
    /// |a_ik| (ties keep the earlier row).
    RowReorder,
}

/// Row order chosen by [`Pivoting::RowReorder`].
pub fn reorder_rows(a: &[Vec<f64>]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..a.len()).collect();
    let mut order = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (pos, &r)| if a[r][k].abs() > best.1 { (pos, a[r][k].abs()) } else { best });
        order.push(remaining.remove(pos));
    }
    order
}

/// Solve `a x = b` by Gaussian elimination and back substitution in
/// `digits`-digit decimal arithmetic. Inputs are rounded first.
pub fn chopped_gauss_solve(a: &[Vec<f64>], b: &[f64], digits: u32, pivoting: Pivoting) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(format!("system must be square with {n} rows")));
    }
    let order = match pivoting {
        Pivoting::None => (0..n).collect(),
        Pivoting::RowReorder => reorder_rows(a),
    };
    let c = |v: f64| ChoppedNumber::new(v, digits);
    let mut m: Vec<Vec<ChoppedNumber>> = order.iter().map(|&r| a[r].iter().map(|&v| c(v)).collect()).collect();
    let mut rhs: Vec<ChoppedNumber> = order.iter().map(|&r| c(b[r])).collect();

    for k in 0..n {
        if m[k][k].value() == 0.0 {
            return Err(Error::ChoppedPivotBreakdown(k));
        }
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] = m[i][j] - f * m[k][j];
            }
            rhs[i] = rhs[i] - f * rhs[k];
        }
    }
    let mut x = vec![c(0.0); n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s = s - m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Ok(x.into_iter().map(ChoppedNumber::value).collect())
}

/// A small linear system shipped for the short-arithmetic demonstration.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoSystem {
    pub name: &'static str,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

/// The reconstructed system (exact solution (−1, 1, 1)) followed by the two
/// printed variants it was reconstructed from.
pub fn demo_systems() -> Vec<DemoSystem> {
    vec![
        DemoSystem {
            name: "reconstructed",
            a: vec![vec![0.002, 4.0, 4.0], vec![2.0, 2.906, -5.387], vec![-3.0, -4.301, -3.112]],
            b: vec![7.998, -4.481, -4.413],
        },
        DemoSystem {
            name: "printed-natural",
            a: vec![vec![-0.002, 4.0, 4.0], vec![-2.0, 2.906, -5.38], vec![3.0, -4.301, -3.112]],
            b: vec![7.998, -4.481, -4.143],
        },
        DemoSystem {
            name: "printed-reordered",
            a: vec![vec![-0.0002, 4.0, 4.0], vec![-2.0, 2.406, -5.386], vec![3.0, -4.301, -3.112]],
            b: vec![7.998, -4.481, -4.413],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chop_rounds_half_away() {
        assert_eq!(chop(1.23456, 4), 1.235);
        assert_eq!(chop(-1.23456, 4), -1.235);
        assert_eq!(chop(0.00012345, 3), 0.000123);
        assert_eq!(chop(99.9951, 4), 100.0);
        assert_eq!(chop(2.5, 1), 3.0);
        assert_eq!(chop(-2.5, 1), -3.0);
        assert_eq!(chop(12345.0, 2), 12000.0);
        assert_eq!(chop(0.0, 4), 0.0);
    }

    #[test]
    fn chop_is_idempotent() {
        for &x in &[1.0 / 3.0, 2.0 / 3.0, -7.77777, 1.0e-7 / 3.0, 123456.789] {
            for d in 1..10 {
                let once = chop(x, d);
                assert_eq!(chop(once, d), once, "x={x} d={d}");
            }
        }
    }

    #[test]
    fn reorder_puts_largest_leading_entries_first() {
        let sys = &demo_systems()[0];
        assert_eq!(reorder_rows(&sys.a), vec![2, 0, 1]);
    }

    #[test]
    fn many_digits_recover_exact_solution() {
        let sys = &demo_systems()[0];
        let x = chopped_gauss_solve(&sys.a, &sys.b, 16, Pivoting::None).unwrap();
        for (xi, ei) in x.iter().zip([-1.0, 1.0, 1.0]) {
            assert!((xi - ei).abs() < 1e-9, "{x:?}");
        }
    }

    #[test]
    fn zero_pivot_breaks_down() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(
            chopped_gauss_solve(&a, &[1.0, 2.0], 4, Pivoting::None).unwrap_err(),
            Error::ChoppedPivotBreakdown(0)
        );
        let x = chopped_gauss_solve(&a, &[1.0, 2.0], 4, Pivoting::RowReorder).unwrap();
        assert_eq!(x, vec![1.0, 1.0]);
    }
}
