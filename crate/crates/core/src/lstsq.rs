//! Dense least squares by Householder QR.
//!
//! The Gram matrix `XᵀX` is never formed: coefficients come from the
//! triangular system `Rβ = Qᵀy`, and `(XᵀX)⁻¹ = R⁻¹R⁻ᵀ` from the inverse of
//! the triangular factor.

/// A column is linearly dependent on the ones before it when its pivot falls
/// below this fraction of the column's own norm.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Diagonal of `(XᵀX)⁻¹`, aligned with `coefficients`.
    pub inverse_gram_diagonal: Vec<f64>,
}

/// Index of the first column found to be dependent on its predecessors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankDeficient {
    pub column: usize,
}

/// Solves `min ‖Xβ − y‖₂` for a design given as columns, each of length `y.len()`.
///
/// Requires at least as many rows as columns.
pub fn solve(columns: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares, RankDeficient> {
    let n = y.len();
    let p = columns.len();
    assert!(columns.iter().all(|c| c.len() == n), "ragged design matrix");
    assert!(n >= p, "least squares needs n >= p");

    let mut a: Vec<Vec<f64>> = columns.to_vec();
    let mut qty = y.to_vec();
    let mut r = vec![vec![0.0; p]; p];

    for k in 0..p {
        let column_norm = norm(&columns[k]);
        let sub_norm = norm(&a[k][k..]);
        if column_norm == 0.0 || sub_norm <= RANK_TOLERANCE * column_norm {
            return Err(RankDeficient { column: k });
        }
        let alpha = if a[k][k] > 0.0 { -sub_norm } else { sub_norm };
        // v = a[k][k..] - alpha e1
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();

        r[k][k] = alpha;
        for j in (k + 1)..p {
            reflect(&v, vtv, &mut a[j][k..]);
            r[k][j] = a[j][k];
        }
        reflect(&v, vtv, &mut qty[k..]);
    }

    let coefficients = back_substitute(&r, &qty[..p]);
    let r_inv = upper_inverse(&r);
    let inverse_gram_diagonal = r_inv
        .iter()
        .map(|row| row.iter().map(|x| x * x).sum())
        .collect();
    Ok(LeastSquares {
        coefficients,
        inverse_gram_diagonal,
    })
}

fn norm(xs: &[f64]) -> f64 {
    // scaled to avoid overflow on large magnitudes
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * xs.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// x ← (I − 2vvᵀ/vᵀv) x
fn reflect(v: &[f64], vtv: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vtv;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}

fn back_substitute(r: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let p = b.len();
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = ((i + 1)..p).map(|j| r[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / r[i][i];
    }
    x
}

/// Inverse of an upper-triangular matrix, itself upper triangular.
#[allow(clippy::needless_range_loop)]
fn upper_inverse(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let p = r.len();
    let mut inv = vec![vec![0.0; p]; p];
    for col in 0..p {
        for i in (0..=col).rev() {
            let rhs = if i == col { 1.0 } else { 0.0 };
            let s: f64 = ((i + 1)..=col).map(|j| r[i][j] * inv[j][col]).sum();
            inv[i][col] = (rhs - s) / r[i][i];
        }
    }
    inv
}
