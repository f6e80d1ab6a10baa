//! Binomial tail bounds `sum_{j <= gamma d} C(d, j) <= e^{kappa d}` and friends.

use num::rational::Ratio;
use num::{BigInt, BigRational, BigUint, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Relative allowance for the rounding of one `ln` or product in `f64`.
const ROUNDING: f64 = 1e-14;

fn check_gamma(gamma: Ratio<u64>) -> Result<f64> {
    let g = *gamma.numer() as f64 / *gamma.denom() as f64;
    if *gamma.numer() == 0 || gamma >= Ratio::new(1, 2) {
        return Err(Error::Domain(format!("gamma = {gamma} must lie in (0, 1/2)")));
    }
    Ok(g)
}

/// `kappa = -2 (gamma ln gamma + (1 - gamma) ln(1 - gamma))`.
pub fn kappa(gamma: Ratio<u64>) -> Result<f64> {
    let g = check_gamma(gamma)?;
    Ok(-2.0 * (g * g.ln() + (1.0 - g) * (1.0 - g).ln()))
}

/// `ln G` up to sign: `G(x) = e^{kappa x / 2} - x^3 > 0` iff `h(x) = kappa x / 2 - 3 ln x > 0`.
fn h(kappa: f64, x: f64) -> f64 {
    kappa * x / 2.0 - 3.0 * x.ln()
}

/// Least integer `d0 >= 2 / gamma` with `G > 0` on `[d0, inf)`.
///
/// `h` is convex with its minimum at `6 / kappa`, so `h(n) > 0` suffices once
/// `n` is past the minimum, and otherwise the minimum itself must be positive.
pub fn d_zero(gamma: Ratio<u64>) -> Result<u64> {
    let k = kappa(gamma)?;
    let start = (Ratio::from_integer(2) / gamma).ceil().to_integer();
    let turn = 6.0 / k;
    let min_positive = h(k, turn) > 0.0;
    (start..)
        .find(|&n| h(k, n as f64) > 0.0 && (n as f64 >= turn || min_positive))
        .ok_or_else(|| Error::Domain("no threshold found".into()))
}

/// `G(x) = e^{kappa x / 2} - x^3`.
pub fn g_function(gamma: Ratio<u64>, x: f64) -> Result<f64> {
    let k = kappa(gamma)?;
    Ok((k * x / 2.0).exp() - x.powi(3))
}

/// Interval containing `ln n` for `n >= 1`.
fn ln_interval(n: &BigUint) -> (f64, f64) {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n >> shift).to_u64().unwrap() as f64;
    let base = shift as f64 * std::f64::consts::LN_2;
    // n lies in [top, top + 1) * 2^shift; top < 2^60 is exact in f64 only up to 2^53
    let lo = (top * (1.0 - 2f64.powi(-52))).ln() + base;
    let hi = ((top + 1.0) * (1.0 + 2f64.powi(-52))).ln() + base;
    (lo - lo.abs() * ROUNDING, hi + hi.abs() * ROUNDING)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub d: u64,
    /// `floor(gamma d)`.
    pub j_max: u64,
    /// Upper end of the interval holding `ln sum_j C(d, j)`.
    pub ln_sum: f64,
    /// Lower end of the interval holding `kappa d`.
    pub kappa_d: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailReport {
    pub gamma: Ratio<u64>,
    pub kappa: f64,
    pub d0: u64,
    pub rows: Vec<TailRow>,
}

impl TailReport {
    /// Least-squares slope of the slack against `d`.
    pub fn slack_slope(&self) -> f64 {
        let n = self.rows.len() as f64;
        let mx = self.rows.iter().map(|r| r.d as f64).sum::<f64>() / n;
        let my = self.rows.iter().map(|r| r.slack).sum::<f64>() / n;
        let sxy: f64 = self.rows.iter().map(|r| (r.d as f64 - mx) * (r.slack - my)).sum();
        let sxx: f64 = self.rows.iter().map(|r| (r.d as f64 - mx).powi(2)).sum();
        sxy / sxx
    }
}

/// `sum_{j=0}^{j_max} C(d, j)`, exactly.
pub fn binomial_tail(d: u64, j_max: u64) -> BigUint {
    let mut c = BigUint::one();
    let mut sum = BigUint::one();
    for j in 1..=j_max.min(d) {
        c = c * BigUint::from(d - j + 1) / BigUint::from(j);
        sum += &c;
    }
    sum
}

/// Checks the tail bound for every `d` in `lo..=hi`; needs `lo >= d_zero(gamma)`.
/// A pass compares outward-rounded intervals, so it is rigorous.
pub fn verify_tail_bound(gamma: Ratio<u64>, lo: u64, hi: u64) -> Result<TailReport> {
    let k = kappa(gamma)?;
    let d0 = d_zero(gamma)?;
    if lo < d0 || hi < lo {
        return Err(Error::Precondition(format!("range {lo}..={hi} must start at d0 = {d0} or later")));
    }
    let rows = (lo..=hi)
        .into_par_iter()
        .map(|d| {
            let j_max = (gamma * Ratio::from_integer(d)).to_integer();
            let (_, ln_sum) = ln_interval(&binomial_tail(d, j_max));
            let kd = k * d as f64;
            let kappa_d = kd - kd.abs() * 4.0 * ROUNDING;
            if ln_sum >= kappa_d {
                return Err(Error::TailBound { gamma: gamma.to_string(), d });
            }
            Ok(TailRow { d, j_max, ln_sum, kappa_d, slack: kappa_d - ln_sum })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailReport { gamma, kappa: k, d0, rows })
}

/// `(sum_j C(n, j) t^j, (1 + t)^n)`, equal as exact rationals.
pub fn binomial_subset_identity(n: u32, t: &BigRational) -> Result<(BigRational, BigRational)> {
    if n > 30 {
        return Err(Error::InvalidParameter(format!("n = {n} above 30")));
    }
    let mut c = BigInt::one();
    let mut power = BigRational::one();
    let mut lhs = BigRational::zero();
    for j in 0..=n {
        if j > 0 {
            c = c * BigInt::from(n - j + 1) / BigInt::from(j);
            power *= t;
        }
        lhs += BigRational::from_integer(c.clone()) * &power;
    }
    let rhs = num::pow(BigRational::one() + t, n as usize);
    if lhs != rhs {
        return Err(Error::CertificateViolation(format!("binomial identity fails at n = {n}")));
    }
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorialBounds {
    pub m: u64,
    /// `e (m/e)^m`, rounded.
    pub lower: f64,
    pub factorial: BigUint,
    /// `e m (m/e)^m`, rounded.
    pub upper: f64,
}

/// Rationals bracketing `e`: partial sums of `sum 1/k!` and the tail bound `2/(N+1)!`.
fn e_bracket() -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut fact = BigInt::one();
    let terms = 60;
    for k in 0..=terms {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        lo += BigRational::new(BigInt::one(), fact.clone());
    }
    fact *= BigInt::from(terms + 1);
    let hi = lo.clone() + BigRational::new(BigInt::from(2), fact);
    (lo, hi)
}

/// Certifies `e (m/e)^m <= m! <= e m (m/e)^m` exactly: with `e` in `[e_lo, e_hi]`
/// the chain follows from `m^m <= m! e_lo^{m-1}` and `m! e_hi^{m-1} <= m^{m+1}`.
pub fn stirling_factorial_bounds(m: u64) -> Result<FactorialBounds> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let (e_lo, e_hi) = e_bracket();
    let fact: BigUint = (1..=m).map(BigUint::from).product();
    let f = BigRational::from_integer(BigInt::from(fact.clone()));
    let mm = BigRational::from_integer(num::pow(BigInt::from(m), m as usize));
    let mm1 = &mm * BigRational::from_integer(BigInt::from(m));
    let left = mm <= &f * num::pow(e_lo, (m - 1) as usize);
    let right = &f * num::pow(e_hi, (m - 1) as usize) <= mm1;
    if !(left && right) {
        return Err(Error::CertificateViolation(format!("factorial bounds fail at m = {m}")));
    }
    let mf = m as f64;
    let lower = (1.0 + mf * mf.ln() - mf).exp();
    Ok(FactorialBounds { m, lower, factorial: fact, upper: lower * mf })
}
