//! Integer relation detection and the fit of line points against
//! (y_f, omega_2).

use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::heegner::LinePoint;
use crate::lll::lll_reduce;
use crate::numerics::{abs, log10_abs, PrecisionContext};
use crate::periods::PeriodLattice;

/// Digits of the scale applied before rounding values into the LLL lattice.
fn scale_digits(ctx: &PrecisionContext) -> u32 {
    ctx.digits() + ctx.guard_digits() / 2
}

/// Integer relation sum a_i v_i = 0 among real numbers with max |a_i| <=
/// `height_bound`. The returned vector is primitive.
pub fn find_integer_relation(values: &[Float], height_bound: &Integer, ctx: &PrecisionContext) -> Result<Vec<Integer>> {
    find_integer_relation_at(values, height_bound, f64::from(scale_digits(ctx)), ctx)
}

/// As [`find_integer_relation`] for inputs known only to `digits` digits.
pub fn find_integer_relation_at(values: &[Float], height_bound: &Integer, digits: f64, ctx: &PrecisionContext) -> Result<Vec<Integer>> {
    let embedded: Vec<Vec<Float>> = values.iter().map(|v| vec![v.clone()]).collect();
    let e = digits.min(f64::from(scale_digits(ctx)));
    relation_search(&embedded, height_bound, e, -0.75 * e, ctx)
}

/// Integer relation sum a_i z_i = 0 among complex numbers (both real and
/// imaginary parts must vanish).
pub fn find_complex_relation(values: &[Complex], height_bound: &Integer, ctx: &PrecisionContext) -> Result<Vec<Integer>> {
    let embedded: Vec<Vec<Float>> = values.iter().map(|z| vec![z.real().clone(), z.imag().clone()]).collect();
    let e = f64::from(scale_digits(ctx));
    relation_search(&embedded, height_bound, e, -0.5 * e, ctx)
}

fn relation_search(values: &[Vec<Float>], height_bound: &Integer, digits: f64, accept_log10: f64, ctx: &PrecisionContext) -> Result<Vec<Integer>> {
    let n = values.len();
    let bits = ctx.bits();
    let max = values
        .iter()
        .flatten()
        .map(|x| Float::with_val(bits, x.abs_ref()))
        .fold(Float::with_val(bits, 0), |acc, x| acc.max(&x));
    if max.is_zero() {
        return Err(Error::Precondition("relation search on all-zero input".into()));
    }
    let scale = ctx.ten_pow(digits.floor() as i32) / &max;
    let mut rows: Vec<Vec<Integer>> = values
        .iter()
        .enumerate()
        .map(|(i, comps)| {
            let mut row: Vec<Integer> = (0..n).map(|j| Integer::from((i == j) as u32)).collect();
            for c in comps {
                let scaled = Float::with_val(bits, c * &scale);
                row.push(scaled.to_integer().unwrap_or_default());
            }
            row
        })
        .collect();
    lll_reduce(&mut rows, 99, 100)?;

    let log_max = log10_abs(&max);
    let mut best_residual = f64::INFINITY;
    for row in &rows {
        let coeffs = &row[..n];
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let residual = relation_residual(values, coeffs, bits);
        let rel = 10f64.powf(log10_abs(&residual) - log_max);
        best_residual = best_residual.min(rel);
        if coeffs.iter().any(|c| c.clone().abs() > *height_bound) {
            continue;
        }
        if residual.is_zero() || log10_abs(&residual) - log_max <= accept_log10 {
            return Ok(primitive(coeffs));
        }
    }
    Err(Error::NoRelation {
        bound: height_bound.to_string(),
        residual: best_residual,
    })
}

fn relation_residual(values: &[Vec<Float>], coeffs: &[Integer], bits: u32) -> Float {
    let dims = values[0].len();
    let mut worst = Float::with_val(bits, 0);
    for d in 0..dims {
        let mut acc = Float::with_val(bits, 0);
        for (v, a) in values.iter().zip(coeffs) {
            acc += Float::with_val(bits, &v[d] * a);
        }
        worst = worst.max(&acc.abs());
    }
    worst
}

fn primitive(coeffs: &[Integer]) -> Vec<Integer> {
    let g = coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c));
    coeffs.iter().map(|c| Integer::from(c / &g)).collect()
}

/// The anchor y_f = y_{D0} / divisor used as the second basis direction.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSpec {
    pub disc: i64,
    /// Root r_0 of the anchor; `None` uses the configured root policy.
    pub root: Option<i64>,
    pub divisor: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub disc: i64,
    pub root: i64,
    pub m: Integer,
    pub n: Integer,
    /// |Re y - m Re y_f + n Re omega_2 / t| relative to |Re y_f|.
    pub residual: f64,
    pub stable: bool,
}

/// Fits Re y = m Re y_f - n Re(omega_2)/t for a single point.
pub fn fit_point(
    point: &LinePoint,
    anchor: &Complex,
    anchor_accuracy: f64,
    t: u32,
    lattice: &PeriodLattice,
    height_bound: &Integer,
    ctx: &PrecisionContext,
) -> Result<LineFit> {
    let bits = ctx.bits();
    let anchor_re = anchor.real().clone();
    if Float::with_val(bits, anchor_re.abs_ref()) <= Float::with_val(bits, lattice.scale() * ctx.tolerance()) {
        return Err(Error::ZeroAnchor);
    }
    let y_re = point.value.real().clone();
    let omega_re = Float::with_val(bits, lattice.omega2().real() / t);
    let digits = point.accuracy.min(anchor_accuracy);
    let rel = find_integer_relation_at(&[y_re.clone(), anchor_re.clone(), omega_re.clone()], height_bound, digits, ctx)?;
    if rel[0].clone().abs() != 1 {
        return Err(Error::NoRelation {
            bound: height_bound.to_string(),
            residual: f64::NAN,
        });
    }
    let sign = rel[0].clone();
    let m = -Integer::from(&rel[1] * &sign);
    let n = Integer::from(&rel[2] * &sign);
    let mut residual = y_re;
    residual -= Float::with_val(bits, &anchor_re * &m);
    residual += Float::with_val(bits, &omega_re * &n);
    let rel = 10f64.powf(log10_abs(&residual) - log10_abs(&anchor_re));
    Ok(LineFit {
        disc: point.disc,
        root: point.root,
        m,
        n,
        residual: rel,
        stable: false,
    })
}

/// The line data at one precision: points, the anchor value and the lattice.
pub struct LineData {
    pub points: Vec<LinePoint>,
    pub anchor: Complex,
    pub anchor_accuracy: f64,
    pub lattice: PeriodLattice,
}

/// Fits every point of `base` (computed at `ctx`) and of `high` (the same
/// data at a bumped precision); a fit is stable when both give the same
/// (m, n).
pub fn fit_line(
    base: &LineData,
    high: &LineData,
    t: u32,
    height_bound: &Integer,
    ctx: &PrecisionContext,
    high_ctx: &PrecisionContext,
) -> Vec<Result<LineFit>> {
    let fit_all = |data: &LineData, c: &PrecisionContext| -> Vec<Result<LineFit>> {
        data.points
            .iter()
            .map(|p| fit_point(p, &data.anchor, data.anchor_accuracy, t, &data.lattice, height_bound, c))
            .collect()
    };
    let high_fits = fit_all(high, high_ctx);
    fit_all(base, ctx)
        .into_iter()
        .map(|low| {
            let mut low = low?;
            low.stable = high_fits
                .iter()
                .flatten()
                .any(|h| (h.disc, h.root, &h.m, &h.n) == (low.disc, low.root, &low.m, &low.n));
            Ok(low)
        })
        .collect()
}

/// Default bound on |m|, |n|: 10^(digits/3).
pub fn default_height_bound(ctx: &PrecisionContext) -> Integer {
    Integer::from(Integer::u_pow_u(10, ctx.digits() / 3))
}

pub fn relation_residual_complex(values: &[Complex], coeffs: &[Integer], bits: u32) -> Float {
    let mut acc = Complex::new(bits);
    for (v, a) in values.iter().zip(coeffs) {
        acc += Complex::with_val(bits, v * a);
    }
    abs(&acc)
}
