//! Exact rational helpers and rigorous enclosures of base-2 logarithms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// Fractional bits carried by [`log2_enclosure`].
pub(crate) const LOG2_BITS: u32 = 96;

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub(crate) fn pow2(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << e as usize)
}

/// Closed interval `[lo, hi]` known to contain log₂ of some value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Log2 {
    pub lo: BigRational,
    pub hi: BigRational,
}

#[cfg(test)]
impl Log2 {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Encloses log₂(x) for rational x > 0 with width at most 2^-`bits`.
///
/// Exact for powers of two. Otherwise the integer part is found by shifting
/// and the fraction bit by bit through repeated squaring of x / 2^e ∈ [1, 2),
/// carried as fixed-point lower and upper bounds so rounding never drops the
/// true value out of the interval.
pub(crate) fn log2_enclosure(x: &BigRational, bits: u32) -> Log2 {
    assert!(x.is_positive(), "log2 of a non-positive value");
    let p = x.numer().magnitude().clone();
    let q = x.denom().magnitude().clone();

    // 2^e <= p/q < 2^(e+1)
    let mut e = p.bits() as i64 - q.bits() as i64;
    let scaled = |e: i64| -> (BigUint, BigUint) {
        if e >= 0 {
            (p.clone(), &q << e as usize)
        } else {
            (&p << (-e) as usize, q.clone())
        }
    };
    let (mut num, mut den) = scaled(e);
    if num < den {
        e -= 1;
        (num, den) = scaled(e);
    }
    let int_part = rat(e);
    if num == den {
        return Log2 {
            lo: int_part.clone(),
            hi: int_part,
        };
    }

    let prec = bits as usize + 64;
    let one = BigUint::one() << prec;
    let two = &one << 1usize;
    let (mut ylo, rem) = (&num << prec).div_rem(&den);
    let mut yhi = if rem.is_zero() {
        ylo.clone()
    } else {
        &ylo + 1u32
    };

    let mut acc = BigInt::zero();
    let mut done = 0u32;
    while done < bits {
        ylo = (&ylo * &ylo) >> prec;
        let sq = &yhi * &yhi;
        yhi = &sq >> prec;
        if (&yhi << prec) != sq {
            yhi += 1u32;
        }
        acc <<= 1usize;
        if ylo >= two {
            acc += 1;
            ylo >>= 1usize;
            let odd = yhi.is_odd();
            yhi >>= 1usize;
            if odd {
                yhi += 1u32;
            }
        } else if yhi >= two {
            // Bit undecidable at this precision: stop with a wider interval.
            done += 1;
            let scale = pow2(done);
            let lo = BigRational::from_integer(acc.clone()) / &scale;
            let hi = BigRational::from_integer(acc + 2) / scale;
            return Log2 {
                lo: &int_part + lo,
                hi: int_part + hi,
            };
        }
        done += 1;
    }
    let scale = pow2(bits);
    let lo = BigRational::from_integer(acc.clone()) / &scale;
    let hi = BigRational::from_integer(acc + 1) / scale;
    Log2 {
        lo: &int_part + lo,
        hi: int_part + hi,
    }
}

/// Encloses log₂(log₂(x)) for x ≥ 2.
pub(crate) fn log2_log2_enclosure(x: &BigRational, bits: u32) -> Log2 {
    let inner = log2_enclosure(x, bits);
    assert!(inner.lo.is_positive(), "log2 log2 needs x > 1");
    let lo = log2_enclosure(&inner.lo, bits).lo;
    let hi = log2_enclosure(&inner.hi, bits).hi;
    Log2 { lo, hi }
}
