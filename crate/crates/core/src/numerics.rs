//! Precision handling and the small set of multiprecision helpers shared by
//! every other module. All complex values are MPFR-backed `rug::Complex`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::forms::NewformData;

pub type BigComplex = Complex;
pub type BigFloat = Float;

pub const MIN_DIGITS: u32 = 15;
pub const DEFAULT_GUARD_DIGITS: u32 = 10;
pub const DEFAULT_BUMP_DIGITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision {
                min: MIN_DIGITS,
                got: digits,
            });
        }
        Ok(Self {
            digits,
            guard_digits,
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard_digits
    }

    /// Mantissa bits for the working precision, with a few spare bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.working_digits()) * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    pub fn bumped(&self, extra_digits: u32) -> Self {
        Self {
            digits: self.digits + extra_digits,
            guard_digits: self.guard_digits,
        }
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn complex<T>(&self, value: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.bits(), value)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn two_pi(&self) -> Float {
        self.pi() * 2u32
    }

    /// 10^(-digits/2): the tolerance used for "is this an integer / a lattice
    /// vector / zero" decisions.
    pub fn tolerance(&self) -> Float {
        self.ten_pow(-(self.digits as i32) / 2)
    }

    pub fn ten_pow(&self, exp: i32) -> Float {
        Float::with_val(self.bits(), 10u32).pow(exp)
    }
}

/// i^k as an exact unit.
pub fn i_pow(k: u32, ctx: &PrecisionContext) -> Complex {
    match k % 4 {
        0 => ctx.complex((1, 0)),
        1 => ctx.complex((0, 1)),
        2 => ctx.complex((-1, 0)),
        _ => ctx.complex((0, -1)),
    }
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Nearest integer; `None` for non-finite input.
pub fn round_to_integer(x: &Float) -> Option<Integer> {
    x.to_integer()
}

/// Distance from `x` to the nearest integer.
pub fn frac_distance(x: &Float) -> Float {
    let r = Float::with_val(x.prec(), x.round_ref());
    (r - x).abs()
}

/// log10 |x| as f64, robust for values far outside the f64 exponent range.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(64, x.abs_ref()).log10().to_f64()
}

/// Number of leading decimal digits on which `a` and `b` agree, capped at `cap`.
pub fn agreed_digits(a: &Complex, b: &Complex, cap: u32) -> u32 {
    let diff = abs(&Complex::with_val(a.prec().0, a - b));
    if diff.is_zero() {
        return cap;
    }
    let scale = abs(a).max(&abs(b));
    if scale.is_zero() {
        return cap;
    }
    let rel = log10_abs(&diff) - log10_abs(&scale);
    if rel >= 0.0 {
        0
    } else {
        ((-rel).floor() as u32).min(cap)
    }
}

/// Runs `computation` at `ctx` and again with `bump` extra digits; returns the
/// base-precision value and the number of agreeing digits.
pub fn stable_recompute<F>(computation: F, ctx: &PrecisionContext, bump: u32) -> Result<(Complex, u32)>
where
    F: Fn(&PrecisionContext) -> Result<Complex>,
{
    let base = computation(ctx)?;
    let high = computation(&ctx.bumped(bump))?;
    let digits = agreed_digits(&base, &high, ctx.digits());
    Ok((base, digits))
}

pub fn divisor_count(mut n: u64) -> u64 {
    let mut count = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

/// Smallest M such that the q-expansion tail past M at height `y_min` is
/// below 10^-(working digits), using |a_n| <= d(n) n^((w-1)/2).
pub fn truncation_length(f: &NewformData, y_min: f64, ctx: &PrecisionContext) -> Result<usize> {
    let needed = tail_cutoff(f.weight(), y_min, ctx)?;
    if needed > f.available_terms() {
        return Err(Error::InsufficientTerms {
            needed,
            available: f.available_terms(),
        });
    }
    Ok(needed)
}

const TAIL_SEARCH_LIMIT: usize = 100_000_000;

pub(crate) fn tail_cutoff(weight: u32, y_min: f64, ctx: &PrecisionContext) -> Result<usize> {
    if !(y_min > 0.0) {
        return Err(Error::Precondition(format!("height {y_min} is not positive")));
    }
    let target = -f64::from(ctx.working_digits()) * std::f64::consts::LN_10;
    let decay = 2.0 * std::f64::consts::PI * y_min;
    let power = (f64::from(weight) - 1.0) / 2.0;
    if tail_log(1, decay, power) < target {
        return Ok(1);
    }
    let (mut lo, mut hi) = (1usize, 2usize);
    while tail_log(hi, decay, power) >= target {
        lo = hi;
        hi *= 2;
        if hi > TAIL_SEARCH_LIMIT {
            return Err(Error::InsufficientTerms {
                needed: TAIL_SEARCH_LIMIT,
                available: 0,
            });
        }
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if tail_log(mid, decay, power) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// log of an upper bound for sum_{n > m} d(n) n^power e^(-decay n).
pub(crate) fn tail_log(m: usize, decay: f64, power: f64) -> f64 {
    let term = |n: f64, d: f64| d.ln() + power * n.ln() - decay * n;
    let mut acc = f64::NEG_INFINITY;
    let mut n = m + 1;
    loop {
        let nf = n as f64;
        // Once successive majorant terms 2 sqrt(n) n^power e^(-decay n)
        // shrink geometrically, bound the remainder by a geometric series.
        let ratio = (power + 0.5) * (1.0 + 1.0 / nf).ln() - decay;
        if ratio < -0.05 && n > m + 8 {
            let major = term(nf, 2.0 * nf.sqrt()) - (1.0 - ratio.exp()).ln();
            return log_add(acc, major);
        }
        acc = log_add(acc, term(nf, divisor_count(n as u64) as f64));
        n += 1;
        if n > m + 1_000_000 {
            return f64::INFINITY;
        }
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Exact binomial coefficient.
pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
