//! Gaps between roots, root midpoints and critical points of hyperbolic
//! polynomials, and the four-way classification of the two inequalities
//! `m(P~) < m(P')` (left) and `M(P') < M(P~)` (right).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::RealPolynomial;

/// Class decisions closer than this to zero are not trusted in floating point.
pub const MARGIN_THRESHOLD: f64 = 1e-10;

/// Bisection stops once the half-width is below this fraction of `x_n - x_1`.
pub const RELATIVE_BISECTION_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("need at least {needed} roots, got {got}")]
    TooFewRoots { needed: usize, got: usize },
    #[error("roots are not increasing at position {index}")]
    Unsorted { index: usize },
    #[error("roots {index} and {} coincide", index + 1)]
    Ties { index: usize },
    #[error("root {index} is not finite")]
    NonFinite { index: usize },
    #[error("derivative has no sign change on ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("class margin {margin:e} is within {MARGIN_THRESHOLD:e} of zero")]
    DegenerateMargin { margin: f64 },
}

/// Which of the two strict inequalities hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GapClass {
    LplusRplus,
    LplusRminus,
    LminusRplus,
    LminusRminus,
}

impl GapClass {
    pub fn from_sides(left_holds: bool, right_holds: bool) -> Self {
        match (left_holds, right_holds) {
            (true, true) => GapClass::LplusRplus,
            (true, false) => GapClass::LplusRminus,
            (false, true) => GapClass::LminusRplus,
            (false, false) => GapClass::LminusRminus,
        }
    }

    pub fn left_holds(self) -> bool {
        matches!(self, GapClass::LplusRplus | GapClass::LplusRminus)
    }

    pub fn right_holds(self) -> bool {
        matches!(self, GapClass::LplusRplus | GapClass::LminusRplus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GapClass::LplusRplus => "L+R+",
            GapClass::LplusRminus => "L+R-",
            GapClass::LminusRplus => "L-R+",
            GapClass::LminusRminus => "L-R-",
        }
    }

    pub const ALL: [GapClass; 4] =
        [GapClass::LplusRplus, GapClass::LplusRminus, GapClass::LminusRplus, GapClass::LminusRminus];
}

impl fmt::Display for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GapClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GapClass::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown gap class {s:?}; expected L+R+, L+R-, L-R+ or L-R-"))
    }
}

impl Serialize for GapClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for GapClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A critical point with the half-width of its bisection bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub value: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub xi: Vec<CriticalPoint>,
    pub m_p: f64,
    #[serde(rename = "M_p")]
    pub big_m_p: f64,
    pub m_tilde: f64,
    #[serde(rename = "M_tilde")]
    pub big_m_tilde: f64,
    pub m_prime: f64,
    #[serde(rename = "M_prime")]
    pub big_m_prime: f64,
    pub class: GapClass,
    /// `(m_prime - m_tilde, M_tilde - M_prime)`; positive means the side holds.
    pub margins: (f64, f64),
}

fn check_sorted(x: &[f64], needed: usize) -> Result<(), GapError> {
    if x.len() < needed {
        return Err(GapError::TooFewRoots { needed, got: x.len() });
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(GapError::NonFinite { index });
    }
    for (index, w) in x.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(GapError::Ties { index });
        }
        if w[0] > w[1] {
            return Err(GapError::Unsorted { index });
        }
    }
    Ok(())
}

/// `z_k = (x_k + x_{k+1}) / 2`.
pub fn midpoints(x: &[f64]) -> Result<Vec<f64>, GapError> {
    check_sorted(x, 2)?;
    Ok(x.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect())
}

/// One root of `p'` inside each `(x_k, x_{k+1})`, by bisection on the sign
/// of the derivative.
pub fn critical_points(p: &RealPolynomial, x: &[f64]) -> Result<Vec<CriticalPoint>, GapError> {
    check_sorted(x, 2)?;
    let dp = p.derivative();
    let target = RELATIVE_BISECTION_WIDTH * (x[x.len() - 1] - x[0]);
    x.windows(2)
        .map(|w| {
            let (mut lo, mut hi) = (w[0], w[1]);
            let f_lo = dp.evaluate(lo);
            let f_hi = dp.evaluate(hi);
            if f_lo == 0.0 || f_hi == 0.0 || (f_lo > 0.0) == (f_hi > 0.0) {
                return Err(GapError::NoSignChange { lo, hi });
            }
            let lo_positive = f_lo > 0.0;
            while (hi - lo) / 2.0 > target {
                let mid = lo + (hi - lo) / 2.0;
                if mid <= lo || mid >= hi {
                    break;
                }
                let f_mid = dp.evaluate(mid);
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (f_mid > 0.0) == lo_positive {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(CriticalPoint { value: lo + (hi - lo) / 2.0, half_width: (hi - lo) / 2.0 })
        })
        .collect()
}

/// Critical points from the roots themselves: `p'/p = sum 1/(t - x_i)`
/// decreases from `+inf` to `-inf` on each `(x_k, x_{k+1})`, so bisection on
/// its sign needs no expanded coefficients.
pub fn critical_points_from_roots(x: &[f64]) -> Result<Vec<CriticalPoint>, GapError> {
    check_sorted(x, 2)?;
    let target = RELATIVE_BISECTION_WIDTH * (x[x.len() - 1] - x[0]);
    let log_derivative = |t: f64| x.iter().map(|xi| 1.0 / (t - xi)).sum::<f64>();
    Ok(x
        .windows(2)
        .map(|w| {
            let (mut lo, mut hi) = (w[0], w[1]);
            while (hi - lo) / 2.0 > target {
                let mid = lo + (hi - lo) / 2.0;
                if mid <= lo || mid >= hi {
                    break;
                }
                let g = log_derivative(mid);
                if g == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if g > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            CriticalPoint { value: lo + (hi - lo) / 2.0, half_width: (hi - lo) / 2.0 }
        })
        .collect())
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Statistics and class of the monic polynomial with the given simple roots.
pub fn gap_report(x: &[f64]) -> Result<GapReport, GapError> {
    check_sorted(x, 3)?;
    let z = midpoints(x)?;
    let xi = critical_points_from_roots(x)?;
    let (m_p, big_m_p) = min_max(x.windows(2).map(|w| w[1] - w[0]));
    let (m_tilde, big_m_tilde) = min_max(x.windows(3).map(|w| (w[2] - w[0]) / 2.0));
    let (m_prime, big_m_prime) = min_max(xi.windows(2).map(|w| w[1].value - w[0].value));
    let left = m_prime - m_tilde;
    let right = big_m_tilde - big_m_prime;
    for margin in [left, right] {
        if margin.abs() <= MARGIN_THRESHOLD {
            return Err(GapError::DegenerateMargin { margin });
        }
    }
    Ok(GapReport {
        x: x.to_vec(),
        z,
        xi,
        m_p,
        big_m_p,
        m_tilde,
        big_m_tilde,
        m_prime,
        big_m_prime,
        class: GapClass::from_sides(left > 0.0, right > 0.0),
        margins: (left, right),
    })
}
