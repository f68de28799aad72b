//! Special functions behind the significance columns of the regression
//! reports: log-gamma, the regularized incomplete beta function, and the
//! Student-t / Fisher-F tail probabilities built on top of it.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("DOMAIN: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },
}

fn domain(what: &'static str, value: f64) -> SpecialError {
    SpecialError::Domain { what, value }
}

/// A probability in `[0, 1]`, as produced by the tail functions.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct TailProbability(f64);

impl TailProbability {
    fn clamped(p: f64) -> Self {
        TailProbability(p.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<TailProbability> for f64 {
    fn from(p: TailProbability) -> f64 {
        p.0
    }
}

impl fmt::Display for TailProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64, SpecialError> {
    if x <= 0.0 || !x.is_finite() {
        return Err(domain("ln_gamma requires a finite x > 0", x));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the series in its accurate range.
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for (i, c) in LANCZOS.iter().enumerate().skip(1).rev() {
        sum += c / (x + i as f64);
    }
    sum += LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + HALF_LN_2PI + (sum / x).ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Evaluated with the Lentz continued fraction; for `x > (a+1)/(a+b+2)` the
/// complement `1 - I_{1-x}(b, a)` is used so the fraction converges quickly.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("reg_inc_beta requires 0 <= x <= 1", x));
    }
    if a <= 0.0 || !a.is_finite() {
        return Err(domain("reg_inc_beta requires a > 0", a));
    }
    if b <= 0.0 || !b.is_finite() {
        return Err(domain("reg_inc_beta requires b > 0", b));
    }
    Ok(reg_inc_beta_unchecked(x, a, b))
}

fn reg_inc_beta_unchecked(x: f64, a: f64, b: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front.exp() * beta_fraction(x, a, b) / a).clamp(0.0, 1.0)
    } else {
        (1.0 - ln_front.exp() * beta_fraction(1.0 - x, b, a) / b).clamp(0.0, 1.0)
    }
}

/// Continued fraction for the incomplete beta, modified Lentz method.
fn beta_fraction(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 10_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Two-sided Student-t tail `P(|T_df| >= |t|)`.
pub fn t_two_sided_p(t: f64, df: usize) -> Result<TailProbability, SpecialError> {
    if df < 1 {
        return Err(domain("t distribution requires df >= 1", df as f64));
    }
    if t.is_nan() {
        return Err(domain("t statistic is NaN", t));
    }
    if t.is_infinite() {
        return Ok(TailProbability(0.0));
    }
    let df = df as f64;
    let x = df / (df + t * t);
    Ok(TailProbability::clamped(reg_inc_beta_unchecked(
        x,
        df / 2.0,
        0.5,
    )))
}

/// Upper tail `P(F_{df1,df2} >= f)` of the F distribution.
pub fn f_upper_p(f: f64, df1: usize, df2: usize) -> Result<TailProbability, SpecialError> {
    if df1 < 1 {
        return Err(domain("F distribution requires df1 >= 1", df1 as f64));
    }
    if df2 < 1 {
        return Err(domain("F distribution requires df2 >= 1", df2 as f64));
    }
    if f.is_nan() || f < 0.0 {
        return Err(domain("F statistic must be nonnegative", f));
    }
    if f.is_infinite() {
        return Ok(TailProbability(0.0));
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let x = d2 / (d2 + d1 * f);
    Ok(TailProbability::clamped(reg_inc_beta_unchecked(
        x,
        d2 / 2.0,
        d1 / 2.0,
    )))
}

/// Cauchy (df = 1) closed form, handy as a cross-check.
#[allow(dead_code)]
pub(crate) fn cauchy_two_sided(t: f64) -> f64 {
    1.0 - 2.0 * t.abs().atan() / PI
}
