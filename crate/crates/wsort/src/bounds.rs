//! Closed-form guarantee functions for window sort.
//!
//! The guarantees are driven by a piecewise factor converting the comparison
//! error probability `p` (and shrink rate `alpha`) into the constant of the
//! logarithmic dislocation bound, plus Chernoff tail bounds on the
//! probability that a window sees too many errors, and the pairwise
//! swap-probability floor that no sorting algorithm can beat.
//!
//! All logarithms here are base 2.

use thiserror::Error;

/// Guarantee limit for the standard halving schedule: `p < 1/32`.
const F_LIMIT: f64 = 1.0 / 32.0;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("probability must be a finite value in [0, 1/2), got {0}")]
    InvalidProbability(f64),
    #[error(
        "p = {p} is at or beyond the guarantee limit {limit}; no dislocation guarantee \
         applies at this error rate (a slower-shrinking schedule extends the limit to alpha/16)"
    )]
    OutOfGuaranteeRange { p: f64, limit: f64 },
    #[error("shrink rate must satisfy 1/2 < alpha < 1, got {0}")]
    InvalidAlpha(f64),
    #[error("rank gap must be at least 1")]
    InvalidGap,
    #[error("window size must be positive, got {0}")]
    InvalidWindow(f64),
}

/// Which piecewise branch produced a guarantee factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `p` at most a sixth of the guarantee limit: the constant floor 6.
    Constant,
    /// Middle branch, up to half of the guarantee limit.
    MidRange,
    /// Upper branch; diverges as `p` approaches the limit.
    NearLimit,
    /// `p` outside the guarantee range; no finite bound applies.
    NoGuarantee,
}

fn check_probability(p: f64) -> Result<(), BoundsError> {
    if p.is_finite() && (0.0..0.5).contains(&p) {
        Ok(())
    } else {
        Err(BoundsError::InvalidProbability(p))
    }
}

/// Branch cut points `(constant, mid, limit)` for the halving schedule.
pub(crate) fn f_branch_limits() -> (f64, f64, f64) {
    (F_LIMIT / 6.0, F_LIMIT / 2.0, F_LIMIT)
}

/// Branch cut points `(constant, mid, limit)` for shrink rate `alpha`:
/// `(alpha/96, alpha/32, alpha/16)`.
pub(crate) fn g_branch_limits(alpha: f64) -> (f64, f64, f64) {
    let limit = alpha / 16.0;
    (limit / 6.0, limit / 2.0, limit)
}

fn f_with_regime(p: f64) -> Result<(f64, Regime), BoundsError> {
    check_probability(p)?;
    let (constant_cut, mid_cut, limit) = f_branch_limits();
    if p >= limit {
        return Err(BoundsError::OutOfGuaranteeRange { p, limit });
    }
    // The constant branch is a floor for the whole range: the raw middle
    // branch dips below 6 just past its lower cut point, and the downstream
    // total-dislocation bound relies on the factor never dropping under 6.
    let (raw, regime) = if p <= constant_cut {
        (6.0, Regime::Constant)
    } else if p <= mid_cut {
        (
            4.0 / ((1.0 / (32.0 * p)).ln() - (1.0 - 32.0 * p)),
            Regime::MidRange,
        )
    } else {
        (
            400.0 * p / ((1.0 - 32.0 * p) * (1.0 - 32.0 * p)),
            Regime::NearLimit,
        )
    };
    Ok((raw.max(6.0), regime))
}

/// The guarantee factor `f(p)` for the standard halving schedule:
///
/// ```text
/// f(p) = 400p / (1 - 32p)^2                     for 1/64 <  p < 1/32
///        4 / (ln(1/(32p)) - (1 - 32p))          for 1/192 < p <= 1/64
///        6                                      for p <= 1/192
/// ```
///
/// floored at 6 throughout. The maximum dislocation guarantee is
/// `9 * f(p) * log2(n)` with probability `1 - 1/n`; the expected total is
/// `n * 60 * f(p) * log2(f(p))`.
pub fn f_of_p(p: f64) -> Result<f64, BoundsError> {
    f_with_regime(p).map(|(f, _)| f)
}

fn g_with_regime(p: f64, alpha: f64) -> Result<(f64, Regime), BoundsError> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(BoundsError::InvalidAlpha(alpha));
    }
    check_probability(p)?;
    let (constant_cut, mid_cut, limit) = g_branch_limits(alpha);
    if p >= limit {
        return Err(BoundsError::OutOfGuaranteeRange { p, limit });
    }
    let (raw, regime) = if p <= constant_cut {
        (6.0, Regime::Constant)
    } else if p <= mid_cut {
        (
            4.0 / ((alpha / (16.0 * p)).ln() - (alpha - 16.0 * p)),
            Regime::MidRange,
        )
    } else {
        (
            100.0 * p / ((alpha - 16.0 * p) * (alpha - 16.0 * p)),
            Regime::NearLimit,
        )
    };
    Ok((raw.max(6.0), regime))
}

/// The guarantee factor `g(p, alpha)` for a schedule shrinking by
/// `1/2 < alpha < 1`, valid for `p < alpha/16`:
///
/// ```text
/// g(p, a) = 100p / (a - 16p)^2                  for a/32 <  p < a/16
///           4 / (ln(a/(16p)) - (a - 16p))       for a/96 <  p <= a/32
///           6                                   for p <= a/96
/// ```
///
/// floored at 6 throughout.
pub fn g_of_p_alpha(p: f64, alpha: f64) -> Result<f64, BoundsError> {
    g_with_regime(p, alpha).map(|(g, _)| g)
}

/// Upper bound on the probability that at least `w/4` of `8w` independent
/// comparisons err, each with probability `p < 1/32`:
///
/// ```text
/// Pr(w) <= exp(-w (1 - 32p)^2 / (384 p))                     for 1/64 <  p < 1/32
///          (e^d / (1 + d)^(1 + d))^(8wp), d = (1-32p)/(32p)  for 1/192 < p <= 1/64
///          2^(-w/4)                                          for p <= 1/192
/// ```
///
/// The middle branch is evaluated in log space; it equals
/// `exp(-(w/4) * (ln(1/(32p)) - (1 - 32p)))`.
pub fn pr_w_bound(w: f64, p: f64) -> Result<f64, BoundsError> {
    if w.is_nan() || w <= 0.0 {
        return Err(BoundsError::InvalidWindow(w));
    }
    let (constant_cut, mid_cut, limit) = f_branch_limits();
    check_probability(p)?;
    if p >= limit {
        return Err(BoundsError::OutOfGuaranteeRange { p, limit });
    }
    let bound = if p <= constant_cut {
        (-w / 4.0).exp2()
    } else if p <= mid_cut {
        (-(w / 4.0) * ((1.0 / (32.0 * p)).ln() - (1.0 - 32.0 * p))).exp()
    } else {
        (-w * (1.0 - 32.0 * p) * (1.0 - 32.0 * p) / (384.0 * p)).exp()
    };
    Ok(bound)
}

/// Universal floor on the probability that any sorting algorithm outputs
/// true ranks `x` and `x + gap` in the wrong order on a random instance:
///
/// ```text
/// (1/2) * (p / (1 - p))^(2 gap - 1)
/// ```
pub fn swap_probability_lower_bound(p: f64, gap: usize) -> Result<f64, BoundsError> {
    if gap < 1 {
        return Err(BoundsError::InvalidGap);
    }
    check_probability(p)?;
    let exponent = 2 * gap as i32 - 1;
    Ok(0.5 * (p / (1.0 - p)).powi(exponent))
}

/// The assembled dislocation guarantees for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    /// `f(p)` for `alpha = 1/2`, `g(p, alpha)` otherwise; infinite when no
    /// guarantee applies.
    pub factor: f64,
    /// Holds with probability `1 - 1/n`.
    pub max_dislocation_bound: f64,
    /// Bound on the expected total dislocation over all `n` elements.
    pub total_dislocation_bound: f64,
    pub regime: Regime,
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            out,
            "n = {}, p = {}, alpha = {} -> regime {:?}",
            self.n, self.p, self.alpha, self.regime
        )?;
        writeln!(out, "guarantee factor        = {}", self.factor)?;
        writeln!(
            out,
            "max dislocation bound   = {} (w.p. 1 - 1/n)",
            self.max_dislocation_bound
        )?;
        write!(
            out,
            "total dislocation bound = {} (in expectation)",
            self.total_dislocation_bound
        )
    }
}

/// Evaluates the dislocation guarantees at `(n, p, alpha)`.
///
/// `alpha = 1/2` uses the standard factor `f`; `1/2 < alpha < 1` uses
/// `g(p, alpha)` with total-dislocation constant `(9 + 2/(1-alpha)) * 6`.
/// A `p` outside the guarantee range is not an error: it reports the
/// `NoGuarantee` regime with infinite bounds.
pub fn dislocation_bounds(n: usize, p: f64, alpha: f64) -> Result<BoundReport, BoundsError> {
    check_probability(p)?;
    let log2n = (n.max(1) as f64).log2();
    let factor_result = if alpha == 0.5 {
        f_with_regime(p)
    } else {
        g_with_regime(p, alpha)
    };
    match factor_result {
        Ok((factor, regime)) => {
            let total_constant = if alpha == 0.5 {
                60.0
            } else {
                (9.0 + 2.0 / (1.0 - alpha)) * 6.0
            };
            Ok(BoundReport {
                n,
                p,
                alpha,
                factor,
                max_dislocation_bound: 9.0 * factor * log2n,
                total_dislocation_bound: n as f64 * total_constant * factor * factor.log2(),
                regime,
            })
        }
        Err(BoundsError::OutOfGuaranteeRange { .. }) => Ok(BoundReport {
            n,
            p,
            alpha,
            factor: f64::INFINITY,
            max_dislocation_bound: f64::INFINITY,
            total_dislocation_bound: f64::INFINITY,
            regime: Regime::NoGuarantee,
        }),
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, rel: f64) {
        let scale = expected.abs().max(1e-300);
        assert!(
            (actual - expected).abs() / scale <= rel,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn factor_constant_branch() {
        assert_eq!(f_of_p(1.0 / 200.0).unwrap(), 6.0);
        assert_eq!(f_of_p(0.0).unwrap(), 6.0);
        assert_eq!(f_of_p(1.0 / 192.0).unwrap(), 6.0);
    }

    #[test]
    fn factor_mid_branch_at_upper_cut() {
        // direct evaluation: 4 / (ln 2 - 1/2)
        let expected = 4.0 / (2.0f64.ln() - 0.5);
        let actual = f_of_p(1.0 / 64.0).unwrap();
        assert_close(actual, expected, 1e-12);
        assert!((actual - 20.7).abs() < 0.05);
    }

    #[test]
    fn factor_upper_branch() {
        // direct evaluation: 400/40 / (1 - 32/40)^2 = 10 / 0.04 = 250
        assert_close(f_of_p(1.0 / 40.0).unwrap(), 250.0, 1e-9);
    }

    #[test]
    fn factor_is_floored_at_six() {
        // raw middle branch dips below 6 just past 1/192
        let p: f64 = 1.0 / 150.0;
        let raw = 4.0 / ((1.0 / (32.0 * p)).ln() - (1.0 - 32.0 * p));
        assert!(raw < 6.0);
        assert_eq!(f_of_p(p).unwrap(), 6.0);
    }

    #[test]
    fn factor_diverges_near_limit() {
        let f = f_of_p(0.03124).unwrap();
        assert!(f.is_finite() && f > 1e6);
    }

    #[test]
    fn factor_rejects_out_of_range() {
        assert!(matches!(
            f_of_p(1.0 / 32.0),
            Err(BoundsError::OutOfGuaranteeRange { .. })
        ));
        assert!(matches!(
            f_of_p(0.1),
            Err(BoundsError::OutOfGuaranteeRange { .. })
        ));
        assert!(matches!(
            f_of_p(-0.01),
            Err(BoundsError::InvalidProbability(_))
        ));
        assert!(matches!(
            f_of_p(f64::NAN),
            Err(BoundsError::InvalidProbability(_))
        ));
    }

    #[test]
    fn generalized_factor_examples() {
        // p below alpha/96 = 0.009375
        assert_eq!(g_of_p_alpha(0.009, 0.9).unwrap(), 6.0);
        // upper branch: 100 * 0.04 / (0.8 - 0.64)^2
        assert_close(g_of_p_alpha(0.04, 0.8).unwrap(), 156.25, 1e-9);
        // upper branch: 3 / (0.51 - 0.48)^2
        let expected = 100.0 * 0.03 / ((0.51 - 16.0 * 0.03) * (0.51 - 16.0 * 0.03));
        assert_close(g_of_p_alpha(0.03, 0.51).unwrap(), expected, 1e-12);
        assert_close(expected, 3333.3, 1e-4);
    }

    #[test]
    fn generalized_factor_rejects_bad_parameters() {
        assert!(matches!(
            g_of_p_alpha(0.04, 0.5),
            Err(BoundsError::InvalidAlpha(_))
        ));
        assert!(matches!(
            g_of_p_alpha(0.04, 1.0),
            Err(BoundsError::InvalidAlpha(_))
        ));
        // p >= alpha/16
        assert!(matches!(
            g_of_p_alpha(0.05, 0.8),
            Err(BoundsError::OutOfGuaranteeRange { .. })
        ));
    }

    #[test]
    fn branch_structure_matches_at_half() {
        // cut points of g collapse onto f's when alpha is formally 1/2
        let (gc, gm, gl) = g_branch_limits(0.5);
        let (fc, fm, fl) = f_branch_limits();
        assert_eq!((gc, gm, gl), (fc, fm, fl));
    }

    #[test]
    fn tail_bound_constant_branch_example() {
        let bound = pr_w_bound(40.0, 1.0 / 256.0).unwrap();
        assert_close(bound, 2.0f64.powi(-10), 1e-15);
        assert!((bound - 9.77e-4).abs() < 1e-5);
    }

    #[test]
    fn tail_bound_mid_branch_matches_direct_form() {
        // same value as ((e^d)/(1+d)^(1+d))^(8wp) with d = (1-32p)/(32p)
        let p: f64 = 0.01;
        let w: f64 = 37.0;
        let delta: f64 = (1.0 - 32.0 * p) / (32.0 * p);
        let direct = (delta.exp() / (1.0 + delta).powf(1.0 + delta)).powf(8.0 * w * p);
        assert_close(pr_w_bound(w, p).unwrap(), direct, 1e-12);
    }

    #[test]
    fn tail_bound_monotone_in_window() {
        for p in [1.0 / 256.0, 0.01, 0.02] {
            let mut prev = f64::INFINITY;
            for w in [1.0, 2.0, 4.0, 8.0, 64.0, 1000.0] {
                let bound = pr_w_bound(w, p).unwrap();
                assert!(bound <= prev, "bound increased at w = {w}, p = {p}");
                assert!(bound > 0.0 && bound <= 1.0);
                prev = bound;
            }
        }
    }

    #[test]
    fn tail_bound_rejects_bad_parameters() {
        assert!(matches!(
            pr_w_bound(0.0, 0.01),
            Err(BoundsError::InvalidWindow(_))
        ));
        assert!(matches!(
            pr_w_bound(4.0, 0.2),
            Err(BoundsError::OutOfGuaranteeRange { .. })
        ));
    }

    #[test]
    fn swap_floor_examples() {
        assert_close(
            swap_probability_lower_bound(0.25, 1).unwrap(),
            1.0 / 6.0,
            1e-12,
        );
        assert_close(
            swap_probability_lower_bound(0.125, 2).unwrap(),
            1.0 / 686.0,
            1e-12,
        );
        assert_eq!(swap_probability_lower_bound(0.0, 3).unwrap(), 0.0);
        assert!(matches!(
            swap_probability_lower_bound(0.25, 0),
            Err(BoundsError::InvalidGap)
        ));
    }

    #[test]
    fn swap_floor_monotonicity() {
        let mut prev = f64::INFINITY;
        for gap in 1..10 {
            let v = swap_probability_lower_bound(0.2, gap).unwrap();
            assert!(v < prev, "should strictly decrease in gap");
            prev = v;
        }
        let mut prev = 0.0;
        for p in [0.01, 0.1, 0.2, 0.3, 0.4] {
            let v = swap_probability_lower_bound(p, 2).unwrap();
            assert!(v > prev, "should strictly increase in p");
            prev = v;
        }
    }

    #[test]
    fn report_for_constant_regime() {
        let report = dislocation_bounds(1024, 1.0 / 256.0, 0.5).unwrap();
        assert_eq!(report.factor, 6.0);
        assert_eq!(report.regime, Regime::Constant);
        assert_close(report.max_dislocation_bound, 540.0, 1e-12);
        // per element: 60 * 6 * log2(6)
        let per_element = 360.0 * 6.0f64.log2();
        assert_close(report.total_dislocation_bound / 1024.0, per_element, 1e-12);
        assert!((per_element - 930.8).abs() < 0.5);
    }

    #[test]
    fn report_outside_guarantee_range() {
        let report = dislocation_bounds(1024, 0.1, 0.5).unwrap();
        assert_eq!(report.regime, Regime::NoGuarantee);
        assert!(report.factor.is_infinite());
        assert!(report.max_dislocation_bound.is_infinite());
        assert!(report.total_dislocation_bound.is_infinite());
    }

    #[test]
    fn report_uses_generalized_factor_for_slow_schedules() {
        let report = dislocation_bounds(1024, 0.04, 0.8).unwrap();
        assert_eq!(report.regime, Regime::NearLimit);
        assert_close(report.factor, 156.25, 1e-9);
        assert_close(report.max_dislocation_bound, 9.0 * 156.25 * 10.0, 1e-9);
        let expected_total = 1024.0 * (9.0 + 2.0 / 0.2) * 6.0 * 156.25 * 156.25f64.log2();
        assert_close(report.total_dislocation_bound, expected_total, 1e-9);
    }

    #[test]
    fn report_rejects_invalid_parameters() {
        assert!(matches!(
            dislocation_bounds(1024, 0.6, 0.5),
            Err(BoundsError::InvalidProbability(_))
        ));
        assert!(matches!(
            dislocation_bounds(1024, 0.01, 0.3),
            Err(BoundsError::InvalidAlpha(_))
        ));
    }
}
