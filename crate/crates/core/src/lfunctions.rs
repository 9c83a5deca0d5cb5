//! Central values L(f x chi_D, k) by a smoothed approximate functional
//! equation, and the comparison of their ratios with squared line
//! coefficients.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::arith::{gcd, kronecker};
use crate::error::{Error, Result};
use crate::forms::{NewformData, SignEpsilon};
use crate::numerics::{log10_abs, PrecisionContext};

#[derive(Debug, Clone)]
pub struct TwistedCentralValue {
    pub disc: i64,
    pub value: Float,
    /// Sign of the functional equation of f x chi_D.
    pub root_number: i32,
    /// The root number is -1 and the value is zero by symmetry.
    pub forced_zero: bool,
    /// Decimal digits on which the cutoff-1 and cutoff-2 evaluations agree.
    pub cutoff_agreement_digits: u32,
    pub terms: usize,
}

/// Gamma(k, x)/Gamma(k) = e^-x sum_{j<k} x^j/j! for integral k.
fn normalized_upper_gamma(k: u32, x: &Float) -> Float {
    let bits = x.prec();
    let mut term = Float::with_val(bits, 1);
    let mut sum = Float::with_val(bits, 1);
    for j in 1..k {
        term *= x;
        term /= j;
        sum += &term;
    }
    sum * Float::with_val(bits, -x).exp()
}

fn upper_gamma_log10_f64(k: u32, x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for j in 1..k {
        term *= x / f64::from(j);
        sum += term;
    }
    (sum.ln() - x) / std::f64::consts::LN_10
}

/// Smallest x with Gamma(k, x)/Gamma(k) < 10^-target_digits.
fn gamma_cutoff(k: u32, target_digits: f64) -> f64 {
    let mut x = 1.0;
    while upper_gamma_log10_f64(k, x) > -target_digits {
        x *= 1.1;
    }
    x
}

pub fn root_number(sign: &SignEpsilon, level: u64, disc: i64) -> i32 {
    sign.value * kronecker(disc, -(level as i64))
}

pub fn twisted_central_value(f: &NewformData, sign: &SignEpsilon, disc: i64, ctx: &PrecisionContext) -> Result<TwistedCentralValue> {
    let level = f.level();
    if gcd(disc, level as i64) != 1 {
        return Err(Error::NotCoprime { disc, level });
    }
    if !crate::arith::is_fundamental(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let k = f.k();
    let bits = ctx.bits();
    let w = root_number(sign, level, disc);
    if w == -1 {
        return Ok(TwistedCentralValue {
            disc,
            value: Float::with_val(bits, 0),
            root_number: w,
            forced_zero: true,
            cutoff_agreement_digits: ctx.digits(),
            terms: 0,
        });
    }
    let conductor_root = Float::with_val(bits, level).sqrt() * disc.unsigned_abs();
    let target = f64::from(ctx.digits()) / 2.0 + f64::from(ctx.guard_digits());
    let x_cut = gamma_cutoff(k, target);
    let base = 2.0 * std::f64::consts::PI / conductor_root.to_f64();
    let terms_for = |cutoff: f64| (x_cut * cutoff / base).ceil() as usize + 1;

    let smoothed = |cutoff: u32| -> Result<(Float, usize)> {
        let terms = terms_for(f64::from(cutoff));
        if terms > f.available_terms() {
            return Err(Error::InsufficientTerms {
                needed: terms,
                available: f.available_terms(),
            });
        }
        let step = ctx.two_pi() / &conductor_root;
        let mut sum = Float::with_val(bits, 0);
        for n in 1..=terms {
            let chi = kronecker(disc, n as i64);
            let a = f.coefficient(n);
            if chi == 0 || a.is_zero() {
                continue;
            }
            let x = Float::with_val(bits, &step * n as u32);
            let mut bracket = normalized_upper_gamma(k, &Float::with_val(bits, &x * cutoff));
            let mirrored = normalized_upper_gamma(k, &Float::with_val(bits, &x / cutoff));
            bracket += mirrored;
            let mut term = bracket * a;
            term /= Float::with_val(bits, n as u32).pow(k);
            if chi < 0 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        Ok((sum, terms))
    };
    let (value, terms) = smoothed(1)?;
    let (check, _) = smoothed(2)?;
    let diff = Float::with_val(bits, &value - &check);
    let agreement = if diff.is_zero() {
        ctx.digits()
    } else {
        ((-log10_abs(&diff)).floor().max(0.0) as u32).min(ctx.digits())
    };
    if agreement < ctx.digits() / 2 {
        return Err(Error::CutoffDisagreement { disc, digits: agreement });
    }
    Ok(TwistedCentralValue {
        disc,
        value,
        root_number: w,
        forced_zero: false,
        cutoff_agreement_digits: agreement,
        terms,
    })
}

#[derive(Debug, Clone)]
pub struct WaldspurgerRow {
    pub disc: i64,
    pub m: Integer,
    pub l_value: Float,
    /// |D1|^(k-1/2) L(D1) / (|D|^(k-1/2) L(D)); infinite for vanishing rows.
    pub ratio: f64,
    /// m_{D1}^2 / m_D^2.
    pub expected_ratio: f64,
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct WaldspurgerReport {
    pub reference_disc: i64,
    pub rows: Vec<WaldspurgerRow>,
    /// Discriminants skipped because gcd(D, N) > 1.
    pub skipped: Vec<i64>,
    /// Even discriminants among the compared rows.
    pub even: Vec<i64>,
}

impl WaldspurgerReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Relative size below which a vanishing row's normalised value counts as 0.
pub const ZERO_ROW_THRESHOLD: f64 = 1e-10;

/// Compares |D1|^(k-1/2) L(D1)/(|D|^(k-1/2) L(D)) with m_{D1}^2/m_D^2 for
/// every row coprime to N.
pub fn waldspurger_check(
    f: &NewformData,
    sign: &SignEpsilon,
    rows: &[(i64, Integer)],
    reference_disc: i64,
    tol_rel: f64,
    ctx: &PrecisionContext,
) -> Result<WaldspurgerReport> {
    let level = f.level() as i64;
    let bits = ctx.bits();
    let k = f.k();
    let normalized = |disc: i64, value: &Float| -> Float {
        let power = Float::with_val(bits, disc.unsigned_abs()).pow(Float::with_val(bits, k) - 0.5f64);
        power * value
    };
    let reference_m = rows
        .iter()
        .find(|(d, _)| *d == reference_disc)
        .map(|(_, m)| m.clone())
        .ok_or_else(|| Error::Config(format!("reference discriminant {reference_disc} is not in the table")))?;
    if reference_m.is_zero() {
        return Err(Error::Config(format!("reference discriminant {reference_disc} has m = 0")));
    }
    let reference = twisted_central_value(f, sign, reference_disc, ctx)?;
    let unit = normalized(reference_disc, &reference.value) / Float::with_val(bits, Integer::from(reference_m.square_ref()));
    let reference_norm = normalized(reference_disc, &reference.value);

    let (kept, skipped): (Vec<_>, Vec<_>) = rows.iter().partition(|(d, _)| gcd(*d, level) == 1);
    let values: Vec<Result<TwistedCentralValue>> = kept
        .par_iter()
        .map(|(d, _)| twisted_central_value(f, sign, *d, ctx))
        .collect();
    let mut out = Vec::with_capacity(kept.len());
    for ((disc, m), value) in kept.iter().zip(values) {
        let value = value?;
        let norm = normalized(*disc, &value.value);
        let row = if m.is_zero() {
            let rel = Float::with_val(bits, norm.abs_ref()) / &unit;
            WaldspurgerRow {
                disc: *disc,
                m: m.clone(),
                l_value: value.value,
                ratio: f64::INFINITY,
                expected_ratio: f64::INFINITY,
                rel_err: rel.to_f64(),
                pass: rel.to_f64() < ZERO_ROW_THRESHOLD,
            }
        } else {
            let ratio = Float::with_val(bits, &reference_norm / &norm);
            let expected = Float::with_val(bits, Integer::from(reference_m.square_ref())) / Float::with_val(bits, Integer::from(m.square_ref()));
            let rel_err = (Float::with_val(bits, &ratio / &expected) - 1u32).abs().to_f64();
            WaldspurgerRow {
                disc: *disc,
                m: m.clone(),
                l_value: value.value,
                ratio: ratio.to_f64(),
                expected_ratio: expected.to_f64(),
                rel_err,
                pass: rel_err < tol_rel,
            }
        };
        out.push(row);
    }
    Ok(WaldspurgerReport {
        reference_disc,
        even: out.iter().map(|r| r.disc).filter(|d| d % 2 == 0).collect(),
        rows: out,
        skipped: skipped.iter().map(|(d, _)| *d).collect(),
    })
}
