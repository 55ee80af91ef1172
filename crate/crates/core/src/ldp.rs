//! Exact large-deviations analytics for the weighted Rayleigh sum
//! Z_ε = ε^{1/2} Σ_k c_k R_k.
//!
//! The scaled cumulant-generating function ε Λ_ε(ε⁻¹λ) is a sum of
//! per-mode terms log E[e^{t R}] with t = ε^{-1/2} λ c_k. Each term is
//! evaluated in log space: directly through erfc below the branch point
//! m = t/2 = 6, and through the asymptotic form m² + log(2√π m) plus a
//! log1p correction above it, so the tabulation never overflows no matter
//! how small ε gets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::special::{erfcx, SQRT_PI};
use crate::spectral::CoeffSeq;

/// Branch point for the log-space MGF evaluation, in terms of m = t/2.
/// e^{m²} is still comfortably representable at m = 6; the seam is tested
/// for 1e-10 relative continuity.
pub const MGF_BRANCH_M: f64 = 6.0;

fn log_mgf_direct(t: f64) -> f64 {
    let m = 0.5 * t;
    if t < 0.0 {
        // M(t) = 1 - √π |m| erfcx(|m|): cancellation-free via erfcx.
        (-SQRT_PI * (-m) * erfcx(-m)).ln_1p()
    } else {
        // M(t) = 1 + √π m e^{m²} erfc(-m) with erfc(-m) = 2e^{m²} - erfcx(m)
        // folded in to avoid evaluating erfc at negative arguments.
        (SQRT_PI * m * (2.0 * (m * m).exp() - erfcx(m))).ln_1p()
    }
}

fn log_mgf_asymptotic(t: f64) -> f64 {
    let m = 0.5 * t;
    let lead = 2.0 * SQRT_PI * m;
    let corr = (1.0 - SQRT_PI * m * erfcx(m)) * (-m * m).exp() / lead;
    m * m + lead.ln() + corr.ln_1p()
}

/// log E[e^{tR}] for the Rayleigh density 2x e^{-x²}; finite for every
/// finite t.
pub fn log_rayleigh_mgf(t: f64) -> f64 {
    if 0.5 * t < MGF_BRANCH_M {
        log_mgf_direct(t)
    } else {
        log_mgf_asymptotic(t)
    }
}

/// E[e^{tR}] = 1 + (√π t/2) e^{t²/4} erfc(-t/2). Overflows to +∞ only where
/// the value itself exceeds f64 range (t ≳ 53).
pub fn rayleigh_mgf(t: f64) -> f64 {
    log_rayleigh_mgf(t).exp()
}

/// d/dt log E[e^{tR}]: the mean of the exponentially tilted Rayleigh law.
/// Evaluated in scaled form so it stays finite for every t.
pub fn rayleigh_mgf_log_deriv(t: f64) -> f64 {
    let m = 0.5 * t;
    if t >= 0.0 {
        // scale numerator and denominator of M'/M by e^{-m²}
        let erfc_neg = 2.0 - (-m * m).exp() * erfcx(m); // erfc(-m)
        let num = 0.5 * SQRT_PI * (1.0 + 2.0 * m * m) * erfc_neg + m * (-m * m).exp();
        let den = (-m * m).exp() + SQRT_PI * m * erfc_neg;
        num / den
    } else {
        let s = -m;
        let num = 0.5 * SQRT_PI * (1.0 + 2.0 * s * s) * erfcx(s) - s;
        let den = 1.0 - SQRT_PI * s * erfcx(s);
        num / den
    }
}

/// Λ_ε(ε⁻¹λ) = Σ_k log E[e^{ε^{-1/2} λ c_k R_k}], summed pairwise.
pub fn cgf_exact(coeffs: &CoeffSeq, eps: f64, lambda: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param(
            "lambda",
            format!("must be positive, got {lambda}"),
        ));
    }
    let scale = lambda / eps.sqrt();
    let terms: Vec<f64> = coeffs
        .values()
        .iter()
        .map(|&c| log_rayleigh_mgf(scale * c))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// The ε → 0 limit Λ(λ) = (λ²/4) Σ_k c_k².
pub fn cgf_limit(coeffs: &CoeffSeq, lambda: f64) -> f64 {
    0.25 * lambda * lambda * coeffs.l2_sum()
}

/// Tabulated scaled CGF along a decreasing ε grid, with the analytic limit
/// and the summed dominating bound attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CgfCurve {
    pub lambda: f64,
    pub eps_grid: Vec<f64>,
    /// ε · Λ_ε(ε⁻¹λ) per grid point.
    pub values: Vec<f64>,
    /// Λ(λ) = λ² Σc² / 4.
    pub limit: f64,
    /// Σ_k (e^{1/4} √(πλ) c_k + 2√π λ c_k²), which dominates every value
    /// with ε in (0, 1).
    pub dominating_bound: f64,
}

impl CgfCurve {
    /// |value - limit| per grid point.
    pub fn abs_errors(&self) -> Vec<f64> {
        self.values.iter().map(|v| (v - self.limit).abs()).collect()
    }
}

/// Tabulates ε ↦ ε·Λ_ε(ε⁻¹λ) over a strictly decreasing positive grid and
/// verifies the dominating bound on every point with ε < 1.
pub fn cgf_curve(coeffs: &CoeffSeq, lambda: f64, eps_grid: &[f64]) -> Result<CgfCurve> {
    if eps_grid.is_empty() {
        return Err(Error::param("eps_grid", "must be non-empty"));
    }
    for w in eps_grid.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::param(
                "eps_grid",
                format!("must be strictly decreasing, got {} then {}", w[0], w[1]),
            ));
        }
    }
    if !(eps_grid[eps_grid.len() - 1] > 0.0) {
        return Err(Error::param("eps_grid", "entries must be positive"));
    }

    use rayon::prelude::*;
    let values = eps_grid
        .par_iter()
        .map(|&eps| cgf_exact(coeffs, eps, lambda).map(|v| eps * v))
        .collect::<Result<Vec<f64>>>()?;

    let limit = cgf_limit(coeffs, lambda);
    let bound = (0.25f64).exp() * (std::f64::consts::PI * lambda).sqrt() * coeffs.l1_sum()
        + 2.0 * SQRT_PI * lambda * coeffs.l2_sum();
    for (&eps, &v) in eps_grid.iter().zip(&values) {
        if eps < 1.0 && v > bound {
            return Err(Error::Consistency(format!(
                "scaled CGF {v} at eps = {eps} exceeds its dominating bound {bound}"
            )));
        }
    }
    Ok(CgfCurve {
        lambda,
        eps_grid: eps_grid.to_vec(),
        values,
        limit,
        dominating_bound: bound,
    })
}

/// Result of a Fenchel–Legendre maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Legendre {
    pub value: f64,
    pub argmax: f64,
}

/// sup over λ in [0, lambda_max] of λz - cgf(λ), by golden-section search
/// (the objective is concave for any convex cgf). If the maximizer lands on
/// the right boundary the interval is widened once, then reported as an
/// error.
pub fn legendre_transform(
    cgf: impl Fn(f64) -> f64,
    z: f64,
    lambda_max: f64,
) -> Result<Legendre> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::param("z", format!("must be >= 0, got {z}")));
    }
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::param(
            "lambda_max",
            format!("must be positive, got {lambda_max}"),
        ));
    }
    let objective = |lambda: f64| lambda * z - cgf(lambda);
    let mut hi = lambda_max;
    for attempt in 0..2 {
        let argmax = golden_section_max(&objective, 0.0, hi);
        if argmax < 0.999 * hi {
            return Ok(Legendre {
                value: objective(argmax),
                argmax,
            });
        }
        if attempt == 0 {
            hi *= 8.0;
        }
    }
    Err(Error::BoundarySolution { lambda_max: hi })
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..160 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()).max(1e-8) {
            break;
        }
    }
    0.5 * (a + b)
}

/// The limit rate function I(z) = z²/A with A = Σ c_k².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFunction {
    pub l2_sum: f64,
}

impl RateFunction {
    pub fn new(coeffs: &CoeffSeq) -> Result<Self> {
        let l2 = coeffs.l2_sum();
        if !(l2 > 0.0) {
            return Err(Error::Undefined(
                "rate function needs Σ c_k² > 0".to_string(),
            ));
        }
        Ok(RateFunction { l2_sum: l2 })
    }

    pub fn evaluate(&self, z: f64) -> f64 {
        z * z / self.l2_sum
    }
}

/// I(z0) = z0² / Σ c_k², the decay rate of the tail events.
pub fn rate(coeffs: &CoeffSeq, z0: f64) -> Result<f64> {
    if !(z0 >= 0.0) || !z0.is_finite() {
        return Err(Error::param("z0", format!("must be >= 0, got {z0}")));
    }
    Ok(RateFunction::new(coeffs)?.evaluate(z0))
}

/// Infima of the rate function over (z0, ∞) and [z0, ∞). For the
/// continuous increasing z ↦ z²/A both equal z0²/A; the numerical approach
/// from the right is checked against the closed value before returning.
pub fn ge_interval_rates(coeffs: &CoeffSeq, z0: f64) -> Result<(f64, f64)> {
    if !(z0 > 0.0) {
        return Err(Error::param("z0", format!("must be positive, got {z0}")));
    }
    let rf = RateFunction::new(coeffs)?;
    let closed = rf.evaluate(z0);
    let mut open = f64::INFINITY;
    for j in 1..=12 {
        open = open.min(rf.evaluate(z0 * (1.0 + 10f64.powi(-j))));
    }
    if (open - closed).abs() > 1e-9 * closed.max(f64::MIN_POSITIVE) {
        return Err(Error::Consistency(format!(
            "open-interval infimum {open} did not converge to the closed value {closed}"
        )));
    }
    Ok((closed, closed))
}

/// Partial products Π_{|k| <= N} E[e^{-c_k R_k}] along increasing
/// truncation levels, computed as exponentials of summed logs. The products
/// vanish as N grows exactly when (c_k) leaves l¹.
pub fn sharpness_products(coeffs: &CoeffSeq, levels: &[usize]) -> Result<Vec<f64>> {
    if levels.is_empty() {
        return Err(Error::param("levels", "must be non-empty"));
    }
    for w in levels.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::param("levels", "must be strictly increasing"));
        }
    }
    let max_level = *levels.last().unwrap();
    if max_level > coeffs.n_modes() {
        return Err(Error::param(
            "levels",
            format!(
                "level {max_level} exceeds the coefficient truncation N = {}",
                coeffs.n_modes()
            ),
        ));
    }

    let mut products = Vec::with_capacity(levels.len());
    let mut log_sum = log_rayleigh_mgf(-coeffs.value(0));
    let mut k = 1usize;
    for &level in levels {
        while k <= level {
            log_sum += log_rayleigh_mgf(-coeffs.value(k as i64))
                + log_rayleigh_mgf(-coeffs.value(-(k as i64)));
            k += 1;
        }
        products.push(log_sum.exp());
    }
    Ok(products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_coeffs, CoeffKind};

    const COTH_1: f64 = 1.313035285499331303636;
    const TANH_1: f64 = 0.7615941559557648881195;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn exp_family(n: usize) -> CoeffSeq {
        make_coeffs(CoeffKind::Exponential { a: 1.0, b: 1.0 }, n).unwrap()
    }

    // Values verified against 30-digit quadrature of ∫ e^{tx} 2x e^{-x²} dx.
    const MGF_REF: &[(f64, f64)] = &[
        (0.5, 1.602032725223878014445),
        (1.0, 2.73023443370370019342),
        (2.0, 9.8781860332561320082),
        (5.0, 4590.835018129794650093),
        (-1.0, 0.4543586392349529579006),
        (-3.0, 0.1450070353157362676274),
        (-10.0, 0.01890569268461208556187),
    ];

    #[test]
    fn mgf_matches_quadrature_references() {
        assert_eq!(rayleigh_mgf(0.0), 1.0);
        for &(t, want) in MGF_REF {
            assert!(
                rel(rayleigh_mgf(t), want) < 1e-12,
                "M({t}) = {} want {want}",
                rayleigh_mgf(t)
            );
        }
        // log-space values across the branch
        assert!(rel(log_rayleigh_mgf(12.0), 39.05727159271270039745) < 1e-13);
        assert!(rel(log_rayleigh_mgf(30.0), 228.9735623245868554625) < 1e-13);
    }

    #[test]
    fn mgf_branch_seam_is_continuous() {
        // both branch formulas evaluated at the same points near m = 6
        for &t in &[2.0 * MGF_BRANCH_M - 1e-6, 2.0 * MGF_BRANCH_M + 1e-6] {
            let direct = log_mgf_direct(t);
            let asymptotic = log_mgf_asymptotic(t);
            assert!(
                rel(direct, asymptotic) < 1e-10,
                "branch mismatch at t = {t}: {direct} vs {asymptotic}"
            );
        }
    }

    #[test]
    fn mgf_log_deriv_matches_reference() {
        // ψ'(t) checked against 30-digit evaluations of M'(t)/M(t)
        assert!(rel(rayleigh_mgf_log_deriv(0.0), 0.8862269254527580136491) < 1e-13);
        assert!(rel(rayleigh_mgf_log_deriv(1.0), 1.133731086365558083696) < 1e-12);
        assert!(rel(rayleigh_mgf_log_deriv(3.0), 1.826745031720112214921) < 1e-12);
        assert!(rel(rayleigh_mgf_log_deriv(10.0), 5.099999999999921645667) < 1e-12);
        // deep-tilt asymptote m + 1/(2m)
        let t = 4000.0;
        assert!(rel(rayleigh_mgf_log_deriv(t), 2000.0 + 1.0 / 4000.0) < 1e-10);
    }

    #[test]
    fn cgf_exact_zero_coefficients() {
        let c = make_coeffs(
            CoeffKind::Explicit {
                values: vec![0.0; 5],
            },
            2,
        )
        .unwrap();
        assert_eq!(cgf_exact(&c, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(cgf_exact(&c, 1e-6, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn cgf_exact_single_mode_is_log_mgf() {
        let c = make_coeffs(CoeffKind::Explicit { values: vec![1.0] }, 0).unwrap();
        let got = cgf_exact(&c, 1.0, 1.0).unwrap();
        assert!(rel(got, 1.004387478661518887611) < 1e-13);
    }

    #[test]
    fn cgf_exact_stable_under_doubling_truncation() {
        let v200 = cgf_exact(&exp_family(200), 1e-3, 1.0).unwrap();
        let v400 = cgf_exact(&exp_family(400), 1e-3, 1.0).unwrap();
        assert!((v200 - v400).abs() < 1e-8);
    }

    #[test]
    fn cgf_limit_values() {
        let c = exp_family(200);
        assert_eq!(cgf_limit(&c, 0.0), 0.0);
        assert!(rel(cgf_limit(&c, 1.0), COTH_1 / 4.0) < 1e-12);
        assert!(rel(cgf_limit(&c, 2.0), 4.0 * cgf_limit(&c, 1.0)) < 1e-15);
    }

    #[test]
    fn cgf_curve_zero_family_is_zero() {
        let c = make_coeffs(
            CoeffKind::Explicit {
                values: vec![0.0; 3],
            },
            1,
        )
        .unwrap();
        let curve = cgf_curve(&c, 1.0, &[0.1, 0.01]).unwrap();
        assert_eq!(curve.values, vec![0.0, 0.0]);
        assert_eq!(curve.limit, 0.0);
    }

    #[test]
    fn cgf_curve_gap_decreases_and_respects_bound() {
        let c = exp_family(200);
        let grid = [1e-1, 1e-2, 1e-3, 1e-4];
        let curve = cgf_curve(&c, 1.0, &grid).unwrap();
        let errs = curve.abs_errors();
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "gap not decreasing: {errs:?}");
        }
        for &v in &curve.values {
            assert!(v <= curve.dominating_bound);
        }
    }

    #[test]
    fn cgf_curve_rejects_bad_grids() {
        let c = exp_family(4);
        assert!(cgf_curve(&c, 1.0, &[]).is_err());
        assert!(cgf_curve(&c, 1.0, &[0.1, 0.1]).is_err());
        assert!(cgf_curve(&c, 1.0, &[0.1, 0.2]).is_err());
        assert!(cgf_curve(&c, 1.0, &[0.1, -0.2]).is_err());
    }

    #[test]
    fn legendre_of_quadratic_cgf() {
        // Λ(λ) = λ²A/4 gives value z²/A at λ* = 2z/A
        let res = legendre_transform(|l| 0.25 * l * l, 1.0, 8.0).unwrap();
        assert!((res.value - 1.0).abs() < 1e-10);
        assert!((res.argmax - 2.0).abs() < 1e-7);

        let a = COTH_1;
        let res = legendre_transform(|l| 0.25 * l * l * a, 1.0, 8.0 / a).unwrap();
        assert!(rel(res.value, TANH_1) < 1e-10);
    }

    #[test]
    fn legendre_at_z_zero() {
        let res = legendre_transform(|l| 0.25 * l * l, 0.0, 1.0).unwrap();
        assert!(res.value.abs() < 1e-12);
        assert!(res.argmax.abs() < 1e-6);
    }

    #[test]
    fn legendre_boundary_is_reported() {
        // λz - λ/2 increases without bound for z = 1, so the maximizer
        // escapes any finite interval.
        let err = legendre_transform(|l| 0.5 * l, 1.0, 4.0);
        assert!(matches!(err, Err(Error::BoundarySolution { .. })));
    }

    #[test]
    fn rate_examples_and_duality() {
        let c = exp_family(200);
        assert_eq!(rate(&c, 0.0).unwrap(), 0.0);
        assert!(rel(rate(&c, 1.0).unwrap(), TANH_1) < 1e-12);
        assert!(rel(rate(&c, 2.0).unwrap(), 4.0 * rate(&c, 1.0).unwrap()) < 1e-14);

        // duality with the Legendre transform of the limit CGF
        let a = c.l2_sum();
        let dual = legendre_transform(|l| cgf_limit(&c, l), 1.0, 8.0 / a).unwrap();
        assert!(rel(dual.value, rate(&c, 1.0).unwrap()) < 1e-10);

        let zeros = make_coeffs(
            CoeffKind::Explicit {
                values: vec![0.0; 3],
            },
            1,
        )
        .unwrap();
        assert!(rate(&zeros, 1.0).is_err());
    }

    #[test]
    fn interval_rates_for_monotone_rate_function() {
        let unit = make_coeffs(CoeffKind::Explicit { values: vec![1.0] }, 0).unwrap();
        assert_eq!(ge_interval_rates(&unit, 1.0).unwrap(), (1.0, 1.0));
        assert_eq!(ge_interval_rates(&unit, 2.0).unwrap(), (4.0, 4.0));
        let (open, closed) = ge_interval_rates(&exp_family(200), 1.0).unwrap();
        assert!(rel(open, TANH_1) < 1e-12);
        assert_eq!(open, closed);
    }

    #[test]
    fn sharpness_products_on_zero_family() {
        let c = make_coeffs(
            CoeffKind::Explicit {
                values: vec![0.0; 21],
            },
            10,
        )
        .unwrap();
        let prods = sharpness_products(&c, &[1, 5, 10]).unwrap();
        assert_eq!(prods, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn sharpness_dichotomy_between_families() {
        // l¹ family: positive limit, converged by N = 100
        let c = exp_family(200);
        let prods = sharpness_products(&c, &[50, 100, 200]).unwrap();
        for w in prods.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!((prods[2] - 0.1673138530202366384239).abs() < 1e-12);
        assert!(prods[2] > 0.05);
        assert!((prods[1] - prods[2]).abs() < 1e-10);

        // non-l¹ family: products head to zero
        let p = make_coeffs(CoeffKind::PowerLaw { a: 1.0, p: 1.0 }, 10_000).unwrap();
        let prods = sharpness_products(&p, &[100, 1000, 10_000]).unwrap();
        assert!(prods[0] > prods[1] && prods[1] > prods[2]);
        assert!(prods[2] < 1e-5);
    }

    #[test]
    fn scaled_cgf_diverges_with_truncation_for_non_l1_family() {
        // For the p = 1 power law the scaled CGF grows like
        // √π ε^{1/2} Σ_{|k|<=N} c_k ~ 2√π ε^{1/2} ln N: unbounded in N, with
        // non-shrinking increments per decade.
        let eps = 1e-2;
        let value = |n: usize| {
            let c = make_coeffs(CoeffKind::PowerLaw { a: 1.0, p: 1.0 }, n).unwrap();
            eps * cgf_exact(&c, eps, 1.0).unwrap()
        };
        let v2 = value(100);
        let v3 = value(1000);
        let v4 = value(10_000);
        let d32 = v3 - v2;
        let d43 = v4 - v3;
        assert!(d32 > 0.3, "growth per decade too small: {d32}");
        assert!(d43 > 0.3, "growth per decade too small: {d43}");
        assert!(
            d43 > 0.8 * d32,
            "increments shrink ({d32} then {d43}); the series would converge"
        );
    }

    #[test]
    fn sharpness_rejects_bad_levels() {
        let c = exp_family(10);
        assert!(sharpness_products(&c, &[]).is_err());
        assert!(sharpness_products(&c, &[5, 5]).is_err());
        assert!(sharpness_products(&c, &[5, 11]).is_err());
    }
}
