//! Closed-form complexity bounds for circuits over Ω²ₙ.
//!
//! Every evaluator works in exact rational or big-integer arithmetic. Where a
//! formula needs log₂ of a number that is not a power of two, the logarithm is
//! enclosed in a narrow rational interval and the endpoint is chosen so the
//! result errs on the safe side: lower bounds round toward −∞, upper estimates
//! toward +∞.
//!
//! The lower bounds are only claimed for n beyond an unspecified n₀, and the
//! nominal upper estimates drop every o(1) term. Neither is asserted against
//! measured circuits; [`concrete_l_bound`] is the certified per-instance budget.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::circuit::GateWeights;
use crate::exact::{big, log2_enclosure, log2_log2_enclosure, pow2, rat, LOG2_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("n = {0} is too small for this bound")]
    LineCount(u64),
    #[error("group size k = {k} must be a power of two with 4 <= k and log2 k < n = {n}")]
    GroupSize { k: u64, n: u64 },
    #[error("phi must be positive")]
    Phi,
    #[error("log2 n - log2 log2 n - log2 phi is not positive for n = {n}, phi = {phi}")]
    NonPositiveDenominator { n: u64, phi: Rational64 },
}

/// |Ω²ₙ| = Σ_{k=0}^{2} (n−k)·C(n,k) = (n³ − n² + 2n)/2.
pub fn omega_size(n: u64) -> u64 {
    let not = n;
    let cnot = n * n.saturating_sub(1);
    let toffoli = n.saturating_sub(2) * n * n.saturating_sub(1) / 2;
    not + cnot + toffoli
}

/// Number of circuits over Ω²ₙ with at most `s` gates: (r^{s+1} − 1)/(r − 1), r = |Ω²ₙ|.
pub fn circuits_count(n: u64, s: u32) -> Result<BigUint, BoundsError> {
    if n < 2 {
        return Err(BoundsError::LineCount(n));
    }
    let r = BigUint::from(omega_size(n));
    Ok((r.pow(s + 1) - 1u32) / (r - 1u32))
}

/// Lower bounds on L(n,q), D(n,q) and W(n,q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBounds {
    pub l: BigRational,
    pub d: BigRational,
    pub w: BigRational,
}

pub fn lower_bounds(n: u64, q: u64, weights: &GateWeights) -> Result<LowerBounds, BoundsError> {
    if n < 2 {
        return Err(BoundsError::LineCount(n));
    }
    let total = rat((n + q) as i64);
    // The bound decreases in log2(n+q), so the upper end of the enclosure rounds down.
    let log = log2_enclosure(&total, LOG2_BITS).hi;
    let nn = rat(n as i64);
    let l = pow2(n as u32) * (&nn - rat(2)) / (rat(3) * &log) - &nn / rat(3);
    let d = &l / &total;
    let w = big(weights.wc().min(weights.wt())) * &l;
    Ok(LowerBounds { l, d, w })
}

fn is_valid_k(n: u64, k: u64) -> bool {
    k >= 4 && k.is_power_of_two() && (k.trailing_zeros() as u64) < n
}

/// The pre-asymptotic gate budget for a synthesized circuit:
/// (2^{n+1}/k)(12n + k·2^{k+1} + 32k·log₂k − 10·log₂k) + k(12n + 364).
pub fn concrete_l_bound(n: u64, k: u64) -> Result<BigInt, BoundsError> {
    if !is_valid_k(n, k) {
        return Err(BoundsError::GroupSize { k, n });
    }
    let n_big = BigInt::from(n);
    let k_big = BigInt::from(k);
    let lk = BigInt::from(k.trailing_zeros());
    let per_group = BigInt::from(12) * &n_big
        + &k_big * (BigInt::one() << (k as usize + 1))
        + BigInt::from(32) * &k_big * &lk
        - BigInt::from(10) * &lk;
    // k divides 2^{n+1} because log2 k < n.
    let groups = (BigInt::one() << (n as usize + 1)) / &k_big;
    Ok(groups * per_group + k_big * (BigInt::from(12) * n_big + 364))
}

/// Upper estimates with every o(1) term set to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NominalUpperBounds {
    pub l: BigRational,
    pub d: BigRational,
    pub w: BigRational,
}

pub fn nominal_upper_bounds(
    n: u64,
    phi: Rational64,
    weights: &GateWeights,
) -> Result<NominalUpperBounds, BoundsError> {
    if n < 2 {
        return Err(BoundsError::LineCount(n));
    }
    if phi <= Rational64::zero() {
        return Err(BoundsError::Phi);
    }
    let nn = rat(n as i64);
    let phi_big = big(phi);
    let log_n = log2_enclosure(&nn, LOG2_BITS);
    let loglog_n = log2_log2_enclosure(&nn, LOG2_BITS);
    let log_phi = log2_enclosure(&phi_big, LOG2_BITS);

    let den = &log_n.lo - &loglog_n.hi - &log_phi.hi;
    if !den.is_positive() {
        return Err(BoundsError::NonPositiveDenominator { n, phi });
    }

    let cross = &log_n.hi * &loglog_n.hi / &nn;
    let one = BigRational::one();
    let eps_l = (rat(6) * &phi_big).recip() + rat(8) / rat(3) * &cross;
    let eps_d = (rat(4) * &phi_big).recip() + rat(4) * &cross;
    let eps_c = (rat(2) * &phi_big).recip() - &loglog_n.lo / (rat(2) * &nn);
    let eps_t = rat(4) * &cross;

    let base = &nn * pow2(n as u32 + 4) / &den;
    let l = rat(3) * &base * (&one + eps_l);
    let d = rat(2) * &base * (&one + eps_d);
    let w =
        &base * (big(weights.wc()) * (&one + eps_c) + rat(2) * big(weights.wt()) * (&one + eps_t));
    Ok(NominalUpperBounds { l, d, w })
}

/// ⌈log_r |G|⌉ with r = |Ω²ₙ| and G the group of permutations Ω²ₙ generates:
/// the alternating group for n ≥ 4, the full symmetric group for n ≤ 3.
///
/// Exact, but builds (2ⁿ)!, so it is only practical up to n ≈ 16.
pub fn gluhov_floor(n: u64) -> Result<u64, BoundsError> {
    if n < 2 {
        return Err(BoundsError::LineCount(n));
    }
    let size = 1u64 << n;
    let mut order = product_range(1, size);
    if n >= 4 {
        order /= 2u32;
    }
    let r = BigUint::from(omega_size(n));
    // Start from a float estimate and correct it with exact comparisons.
    let estimate = (order.bits() as f64 / (r.to_f64().unwrap_or(2.0)).log2()).floor() as u64;
    let mut len = estimate.saturating_sub(2);
    let mut power = r.pow(len as u32);
    while power < order {
        power *= &r;
        len += 1;
    }
    while len > 0 && r.pow(len as u32 - 1) >= order {
        len -= 1;
    }
    Ok(len)
}

fn product_range(lo: u64, hi: u64) -> BigUint {
    if hi < lo {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, x| acc * x);
    }
    let mid = lo + (hi - lo) / 2;
    product_range(lo, mid) * product_range(mid + 1, hi)
}

/// Everything the bound evaluators say about one (n, q, φ, weights) setting.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub q: u64,
    pub phi: Rational64,
    pub weights: GateWeights,
    pub omega_size: u64,
    pub lower: LowerBounds,
    /// Present for q = 0 when the denominator is positive.
    pub nominal_upper: Option<NominalUpperBounds>,
    /// Group size and certified budget, present for q = 0 and n ≥ 4.
    pub budget: Option<(u64, BigInt)>,
    /// The lower bounds only hold beyond an unspecified n₀; always set.
    pub n0_caveat: bool,
}

pub fn bound_report(
    n: u64,
    q: u64,
    phi: Rational64,
    weights: GateWeights,
    k: Option<u64>,
) -> Result<BoundReport, BoundsError> {
    let lower = lower_bounds(n, q, &weights)?;
    let nominal_upper = if q == 0 {
        match nominal_upper_bounds(n, phi, &weights) {
            Ok(b) => Some(b),
            Err(BoundsError::NonPositiveDenominator { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let budget = if q == 0 && n >= 4 {
        let k = match k {
            Some(k) => k,
            None => crate::synthesis::choose_k(n, phi) as u64,
        };
        Some((k, concrete_l_bound(n, k)?))
    } else {
        None
    };
    Ok(BoundReport {
        n,
        q,
        phi,
        weights,
        omega_size: omega_size(n),
        lower,
        nominal_upper,
        budget,
        n0_caveat: true,
    })
}

/// Lossy conversion for display.
pub fn to_f64(x: &BigRational) -> f64 {
    let (num, den) = (x.numer(), x.denom());
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // Scale both down to keep them in range.
            let shift = num.bits().max(den.bits()).saturating_sub(1000) as usize;
            let a = (num >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (den >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}
