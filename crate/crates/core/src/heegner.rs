//! The map tau -> alpha(tau) = kappa_D d^(k-1) f_(2k-1)(tau) and the line
//! points y_{D,r} = 2 Re(w sum alpha(P)).

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::forms::{iterated_integrals, power_integral, NewformData, SignEpsilon};
use crate::numerics::{abs, factorial, i_pow, log10_abs, tail_log, PrecisionContext};
use crate::periods::PeriodLattice;
use crate::quadforms::{heegner_representatives, HeegnerPoint, QuadForm};

/// kappa_D = (k-1)! (2 pi i)^k (2 pi sqrt|D|)^(k-1), optionally without the
/// real factor (2 pi)^k shared by every period.
pub fn kappa(k: u32, disc: i64, drop_two_pi_k: bool, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let root = Float::with_val(bits, disc.unsigned_abs()).sqrt();
    let mut value = Complex::with_val(bits, (Float::with_val(bits, ctx.two_pi() * root).pow(k - 1), 0));
    value *= factorial(k - 1);
    value *= i_pow(k, ctx);
    if !drop_two_pi_k {
        value *= ctx.two_pi().pow(k);
    }
    value
}

/// Coefficients c_l of p(m, x) = sum_{l=m}^{2m-1} c_l x^l, as (l, c_l).
pub fn p_polynomial_coefficients(m: u32) -> Vec<(u32, Integer)> {
    assert!(m >= 1);
    (m..=2 * m - 1)
        .map(|l| {
            let binom = Integer::from(Integer::binomial_u(m - 1, 2 * m - 1 - l));
            let ratio = factorial(l - 1) / factorial(m - 1);
            (l, binom * ratio)
        })
        .collect()
}

pub fn p_polynomial(m: u32, x: &Float) -> Float {
    let bits = x.prec();
    let mut total = Float::with_val(bits, 0);
    for (l, c) in p_polynomial_coefficients(m) {
        total += Float::with_val(bits, x.pow(l)) * c;
    }
    total
}

/// alpha(tau) for the root tau of a Heegner form, by the closed form
/// kappa (2 pi i)(-y/pi)^k sum_n p(k, 1/(4 pi y n)) a_n q^n, with (2 pi)^k
/// dropped from kappa.
pub fn alpha(f: &NewformData, point: &HeegnerPoint, ctx: &PrecisionContext) -> Result<Complex> {
    alpha_at(f, point.disc, &point.tau(ctx), ctx)
}

pub fn alpha_at(f: &NewformData, disc: i64, tau: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    alpha_with_error(f, disc, tau, ctx).map(|(value, _)| value)
}

/// alpha(tau) with log10 of a bound on the truncation error. The tail bound
/// uses |a_n| <= d(n) n^((w-1)/2) and the decrease of p(k, 1/(4 pi y n)) in n.
pub fn alpha_with_error(f: &NewformData, disc: i64, tau: &Complex, ctx: &PrecisionContext) -> Result<(Complex, f64)> {
    let bits = ctx.bits();
    let k = f.k();
    let y = tau.imag().clone();
    let terms = f.terms_for(y.to_f64(), ctx)?;
    let pi = ctx.pi();
    let q = (Complex::with_val(bits, tau * ctx.two_pi()) * Complex::with_val(bits, (0, 1))).exp();
    let inv_four_pi_y = Float::with_val(bits, 1) / (Float::with_val(bits, &pi * &y) * 4u32);
    let coeffs = p_polynomial_coefficients(k);

    let mut qn = Complex::with_val(bits, 1);
    let mut sum = Complex::new(bits);
    for n in 1..=terms {
        qn *= &q;
        let a = f.coefficient(n);
        if a.is_zero() {
            continue;
        }
        let x = Float::with_val(bits, &inv_four_pi_y / n as u32);
        let mut poly = Float::with_val(bits, 0);
        for (l, c) in &coeffs {
            poly += Float::with_val(bits, (&x).pow(*l)) * c;
        }
        poly *= a;
        sum += Complex::with_val(bits, &qn * &poly);
    }
    let mut prefactor = kappa(k, disc, true, ctx);
    prefactor *= Complex::with_val(bits, (0, ctx.two_pi()));
    let ratio = Float::with_val(bits, -&y) / &pi;
    prefactor *= ratio.pow(k);

    let y64 = y.to_f64();
    let x_next = 1.0 / (4.0 * std::f64::consts::PI * y64 * (terms + 1) as f64);
    let p_next: f64 = coeffs.iter().map(|(l, c)| c.to_f64() * x_next.powi(*l as i32)).sum();
    let decay = 2.0 * std::f64::consts::PI * y64;
    let tail = tail_log(terms, decay, (f64::from(f.weight()) - 1.0) / 2.0) / std::f64::consts::LN_10 + p_next.log10();
    let error = tail + log10_abs(&abs(&prefactor));
    Ok((sum * prefactor, error))
}

/// alpha(tau) through the defining integral
/// (2 pi i)^k integral_{i inf}^{tau} f(z) Q_tau(z)^(k-1) dz, (2 pi)^k dropped.
pub fn alpha_direct(f: &NewformData, point: &HeegnerPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let k = f.k();
    let tau = point.tau(ctx);
    let top = (f.weight() - 2) as usize;
    let iterated = iterated_integrals(f, &tau, top + 1, ctx)?;
    let bits = ctx.bits();
    let mut total = Complex::new(bits);
    for (t, coeff) in form_power(&point.form, k - 1).iter().enumerate() {
        if !coeff.is_zero() {
            total += power_integral(t, &tau, &iterated) * coeff;
        }
    }
    Ok(total * i_pow(k, ctx))
}

/// Coefficients of (A z^2 + B z + C)^e in powers of z.
fn form_power(form: &QuadForm, e: u32) -> Vec<Integer> {
    let mut out = vec![Integer::from(1)];
    for _ in 0..e {
        let mut next = vec![Integer::new(); out.len() + 2];
        for (i, x) in out.iter().enumerate() {
            next[i] += Integer::from(x * form.c);
            next[i + 1] += Integer::from(x * form.b);
            next[i + 2] += Integer::from(x * form.a);
        }
        out = next;
    }
    out
}

/// Weight of a Heegner divisor: 1/3 for D = -3, 1/2 for D = -4, else 1.
pub fn divisor_weight(disc: i64) -> Rational {
    match disc {
        -3 => Rational::from((1, 3)),
        -4 => Rational::from((1, 2)),
        _ => Rational::from(1),
    }
}

#[derive(Debug, Clone)]
pub struct LinePoint {
    pub disc: i64,
    pub root: i64,
    /// w * sum of alpha over the Heegner divisor.
    pub alpha_sum: Complex,
    /// y_{D,r} = 2 Re(alpha_sum), not reduced modulo the lattice.
    pub value: Complex,
    /// Estimated correct digits of `value` (truncation of the expansion).
    pub accuracy: f64,
}

impl LinePoint {
    pub fn reduced(&self, lattice: &PeriodLattice) -> Complex {
        lattice.reduce(&self.value)
    }
}

/// Options for the divisor weighting of D = -3, -4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightPolicy {
    pub weighted: bool,
}

impl Default for WeightPolicy {
    fn default() -> Self {
        Self { weighted: true }
    }
}

pub fn line_point(
    f: &NewformData,
    sign: &SignEpsilon,
    disc: i64,
    r: i64,
    policy: WeightPolicy,
    ctx: &PrecisionContext,
) -> Result<LinePoint> {
    if sign.value != -1 {
        return Err(Error::TrivialSign);
    }
    let points = heegner_representatives(f.level(), disc, r)?;
    line_point_from(f, disc, r, &points, policy, ctx)
}

pub fn line_point_from(
    f: &NewformData,
    disc: i64,
    r: i64,
    points: &[HeegnerPoint],
    policy: WeightPolicy,
    ctx: &PrecisionContext,
) -> Result<LinePoint> {
    let bits = ctx.bits();
    let mut sum = Complex::new(bits);
    let mut error = 0f64;
    for p in points {
        let (value, err) = alpha_with_error(f, disc, &p.tau(ctx), ctx)?;
        sum += value;
        error += 10f64.powf(err);
    }
    if policy.weighted {
        sum *= Float::with_val(bits, &divisor_weight(disc));
    }
    let value = Complex::with_val(bits, (Float::with_val(bits, sum.real() * 2u32), 0));
    let accuracy = (log10_abs(value.real()) - (2.0 * error).log10()).min(f64::from(ctx.working_digits()));
    Ok(LinePoint {
        disc,
        root: r,
        alpha_sum: sum,
        value,
        accuracy,
    })
}
