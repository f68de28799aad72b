//! Least squares by the normal equations in exact rational arithmetic.
//!
//! Every `f64` input is converted to the rational it denotes, `XᵀX β = Xᵀy`
//! is solved by Gauss–Jordan elimination without rounding, and only the
//! final coefficients are converted back.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

/// Coefficients for the design `columns` (intercept not added), or `None`
/// when `XᵀX` is singular.
pub fn normal_equations(columns: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let p = columns.len();
    let xs: Vec<Vec<BigRational>> = columns
        .iter()
        .map(|c| c.iter().copied().map(exact).collect())
        .collect();
    let ys: Vec<BigRational> = y.iter().copied().map(exact).collect();

    let dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter()
            .zip(b)
            .fold(BigRational::zero(), |acc, (u, v)| acc + u * v)
    };

    // augmented [XᵀX | Xᵀy]
    let mut m: Vec<Vec<BigRational>> = (0..p)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..p).map(|j| dot(&xs[i], &xs[j])).collect();
            row.push(dot(&xs[i], &ys));
            row
        })
        .collect();

    for col in 0..p {
        let pivot = (col..p).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let lead = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &lead;
        }
        for r in 0..p {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &factor * pv;
                }
            }
        }
    }
    Some(m.iter().map(|row| to_f64(&row[p])).collect())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for very large numerators
        let n: &BigInt = r.numer();
        let d: &BigInt = r.denom();
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    })
}
