//! Shimura period integrals over group generators and the period lattice
//! they span.

use std::path::Path;

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::arith::{divisor_sum, gcd};
use crate::error::{Error, Result};
use crate::forms::{iterated_integrals, power_integral, NewformData};
use crate::numerics::{abs, frac_distance, i_pow, log10_abs, PrecisionContext};
use crate::relations::find_complex_relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Gamma,
    /// Atkin-Lehner involution W_q for q || N (q = N is Fricke).
    AtkinLehner { q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    pub matrix: [[i64; 2]; 2],
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn determinant(&self) -> i64 {
        let [[a, b], [c, d]] = self.matrix;
        a * d - b * c
    }

    fn validate(&self, level: u64) -> Result<()> {
        let [[a, _], [c, d]] = self.matrix;
        let n = level as i64;
        let fail = |msg: String| Error::Generator {
            matrix: self.matrix,
            msg,
        };
        match self.kind {
            GeneratorKind::Gamma => {
                if self.determinant() != 1 {
                    return Err(fail(format!("determinant {} != 1", self.determinant())));
                }
                if c % n != 0 {
                    return Err(fail(format!("lower-left entry not divisible by {level}")));
                }
            }
            GeneratorKind::AtkinLehner { q } => {
                let q = q as i64;
                if q <= 0 || n % q != 0 || gcd(q, n / q) != 1 {
                    return Err(fail(format!("{q} is not an exact divisor of {level}")));
                }
                if self.determinant() != q {
                    return Err(fail(format!("determinant {} != {q}", self.determinant())));
                }
                if a % q != 0 || d % q != 0 || c % n != 0 {
                    return Err(fail(format!("not of Atkin-Lehner shape for q = {q}")));
                }
            }
        }
        Ok(())
    }

    /// Representative with positive lower-left entry (the integrand has even
    /// degree, so negating the matrix changes nothing).
    fn normalized(&self) -> Result<[[i64; 2]; 2]> {
        let [[a, b], [c, d]] = self.matrix;
        match c.signum() {
            0 => Err(Error::FixesInfinity(self.matrix)),
            1 => Ok(self.matrix),
            _ => Ok([[-a, -b], [-c, -d]]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub level: u64,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    /// Parses lines `a b c d [fricke | atkin-lehner q]`; `#` starts a comment.
    pub fn parse(text: &str, level: u64, source_name: &str) -> Result<Self> {
        let mut generators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                source_name: source_name.to_string(),
                line: idx + 1,
                msg,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 4 {
                return Err(err(format!("expected four matrix entries, found {line:?}")));
            }
            let mut entries = [0i64; 4];
            for (slot, field) in entries.iter_mut().zip(&fields[..4]) {
                *slot = field.parse().map_err(|_| err(format!("bad matrix entry {field:?}")))?;
            }
            let kind = match &fields[4..] {
                [] => GeneratorKind::Gamma,
                ["fricke"] => GeneratorKind::AtkinLehner { q: level },
                ["atkin-lehner", q] => GeneratorKind::AtkinLehner {
                    q: q.parse().map_err(|_| err(format!("bad Atkin-Lehner index {q:?}")))?,
                },
                other => return Err(err(format!("unknown generator tag {:?}", other.join(" ")))),
            };
            let generator = Generator {
                matrix: [[entries[0], entries[1]], [entries[2], entries[3]]],
                kind,
            };
            generator.validate(level)?;
            generators.push(generator);
        }
        if generators.is_empty() {
            return Err(Error::Parse {
                source_name: source_name.to_string(),
                line: 0,
                msg: "no generators".into(),
            });
        }
        Ok(Self { level, generators })
    }

    pub fn load(path: &Path, level: u64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, level, &path.display().to_string())
    }
}

/// Eigenvalue of f under a determinant-q Atkin-Lehner matrix, from
/// f(W z) = lambda q^-k (c z + d)^2k f(z) at one point.
pub fn atkin_lehner_eigenvalue(f: &NewformData, matrix: [[i64; 2]; 2], ctx: &PrecisionContext) -> Result<i32> {
    let generator = Generator {
        matrix,
        kind: GeneratorKind::Gamma,
    };
    let [[a, b], [c, d]] = generator.normalized()?;
    let det = a * d - b * c;
    let bits = ctx.bits();
    let height = Float::with_val(bits, det).sqrt() * Float::with_val(bits, 1.25) / c;
    let z = Complex::with_val(bits, (Float::with_val(bits, -d) / c, height));
    let denom = Complex::with_val(bits, &z * c) + d;
    let image = (Complex::with_val(bits, &z * a) + b) / &denom;
    let mut lhs = crate::forms::evaluate(f, &image, ctx)?;
    lhs *= Float::with_val(bits, det).pow(f.k());
    lhs /= denom.pow(f.weight());
    let ratio = lhs / crate::forms::evaluate(f, &z, ctx)?;
    let value = ratio.real().to_f64();
    let sign = if value > 0.0 { 1 } else { -1 };
    let err = abs(&Complex::with_val(bits, &ratio - sign));
    if log10_abs(&err) > -f64::from(ctx.digits()) / 2.0 {
        return Err(Error::Eigenvalue { matrix, value });
    }
    Ok(sign)
}

/// Coefficients of (a w + b)^m (c w + d)^rest in powers of w.
fn binomial_product(m: u32, rest: u32, [[a, b], [c, d]]: [[i64; 2]; 2]) -> Vec<Integer> {
    let power = |x: i64, y: i64, e: u32| -> Vec<Integer> {
        (0..=e)
            .map(|t| {
                Integer::from(Integer::binomial_u(e, t)) * Integer::from(x).pow(t) * Integer::from(y).pow(e - t)
            })
            .collect()
    };
    let left = power(a, b, m);
    let right = power(c, d, rest);
    let mut out = vec![Integer::new(); (m + rest + 1) as usize];
    for (i, x) in left.iter().enumerate() {
        for (j, y) in right.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// All periods (2 pi i)^k integral_{i inf}^{gamma(i inf)} f(z) z^m dz for
/// m = 0..=2k-2, with the factor (2 pi)^k dropped. `split_scale` moves the
/// split point up the vertical line (1.0 gives the balanced split).
pub fn shimura_integrals_split(
    f: &NewformData,
    generator: &Generator,
    split_scale: f64,
    ctx: &PrecisionContext,
) -> Result<Vec<Complex>> {
    let matrix = generator.normalized()?;
    let [[a, b], [c, d]] = matrix;
    let det = a * d - b * c;
    let k = f.k();
    let top = (f.weight() - 2) as usize;
    let eigenvalue = match generator.kind {
        GeneratorKind::Gamma => 1,
        GeneratorKind::AtkinLehner { .. } => atkin_lehner_eigenvalue(f, matrix, ctx)?,
    };
    let bits = ctx.bits();
    let height = Float::with_val(bits, det).sqrt() * Float::with_val(bits, split_scale) / c;
    let tau = Complex::with_val(bits, (Float::with_val(bits, -d) / c, height));
    let image = (Complex::with_val(bits, &tau * a) + b) / (Complex::with_val(bits, &tau * c) + d);

    let at_image = iterated_integrals(f, &image, top + 1, ctx)?;
    let at_tau = iterated_integrals(f, &tau, top + 1, ctx)?;
    let moments: Vec<Complex> = (0..=top).map(|t| power_integral(t, &tau, &at_tau)).collect();

    // lambda det^(1-k)
    let mut factor = Complex::with_val(bits, eigenvalue) / Float::with_val(bits, det).pow(k - 1);
    factor *= i_pow(k, ctx);
    let unit = i_pow(k, ctx);
    let mut out = Vec::with_capacity(top + 1);
    for m in 0..=top {
        let mut pulled = Complex::new(bits);
        for (coeff, moment) in binomial_product(m as u32, (top - m) as u32, matrix).iter().zip(&moments) {
            if !coeff.is_zero() {
                pulled += Complex::with_val(bits, moment * coeff);
            }
        }
        let mut value = Complex::with_val(bits, power_integral(m, &image, &at_image) * &unit);
        value -= pulled * &factor;
        out.push(value);
    }
    Ok(out)
}

pub fn shimura_integrals(f: &NewformData, generator: &Generator, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    shimura_integrals_split(f, generator, 1.0, ctx)
}

pub fn shimura_integral(f: &NewformData, generator: &Generator, m: usize, ctx: &PrecisionContext) -> Result<Complex> {
    if m > (f.weight() - 2) as usize {
        return Err(Error::IterationOrder {
            ell: m,
            max: (f.weight() - 2) as usize,
        });
    }
    Ok(shimura_integrals(f, generator, ctx)?.swap_remove(m))
}

/// Periods of every generator that moves the cusp at infinity, in generator
/// order and then by power m.
pub fn all_periods(f: &NewformData, gens: &GeneratorSet, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    use rayon::prelude::*;
    let per_gen: Vec<Result<Vec<Complex>>> = gens
        .generators
        .par_iter()
        .filter(|g| g.matrix[1][0] != 0)
        .map(|g| shimura_integrals(f, g, ctx))
        .collect();
    let mut out = Vec::new();
    for periods in per_gen {
        out.extend(periods?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PeriodLattice {
    omega1: Complex,
    omega2: Complex,
}

impl PeriodLattice {
    pub fn from_basis(omega1: Complex, omega2: Complex) -> Self {
        Self { omega1, omega2 }
    }

    pub fn omega1(&self) -> &Complex {
        &self.omega1
    }

    pub fn omega2(&self) -> &Complex {
        &self.omega2
    }

    pub fn ratio(&self) -> Complex {
        Complex::with_val(self.omega2.prec().0, &self.omega2 / &self.omega1)
    }

    pub fn scale(&self) -> Float {
        abs(&self.omega1).max(&abs(&self.omega2))
    }

    /// Real coordinates (x, y) with z = x omega_1 + y omega_2.
    pub fn coordinates(&self, z: &Complex) -> (Float, Float) {
        real_coordinates(&self.omega1, &self.omega2, z)
    }

    pub fn contains(&self, z: &Complex, ctx: &PrecisionContext) -> bool {
        let (x, y) = self.coordinates(z);
        let tol = ctx.tolerance();
        frac_distance(&x) <= tol && frac_distance(&y) <= tol
    }

    /// z minus the nearest lattice vector in the coordinate sense.
    pub fn reduce(&self, z: &Complex) -> Complex {
        let (x, y) = self.coordinates(z);
        let bits = z.prec().0;
        let mut out = z.clone();
        out -= Complex::with_val(bits, &self.omega1 * x.round());
        out -= Complex::with_val(bits, &self.omega2 * y.round());
        out
    }

    /// Klein's j of C / L.
    pub fn j_invariant(&self, ctx: &PrecisionContext) -> Complex {
        j_invariant(&self.ratio(), ctx)
    }
}

fn real_coordinates(w1: &Complex, w2: &Complex, z: &Complex) -> (Float, Float) {
    let bits = z.prec().0;
    let (a, c) = (w1.real(), w1.imag());
    let (b, d) = (w2.real(), w2.imag());
    let det = Float::with_val(bits, a * d) - Float::with_val(bits, b * c);
    let x = (Float::with_val(bits, d * z.real()) - Float::with_val(bits, b * z.imag())) / &det;
    let y = (Float::with_val(bits, a * z.imag()) - Float::with_val(bits, c * z.real())) / &det;
    (x, y)
}

fn norm(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.real().square_ref()) + Float::with_val(z.prec().0, z.imag().square_ref())
}

/// Lagrange-Gauss reduction of a planar basis.
pub fn gauss_reduce(mut b1: Complex, mut b2: Complex) -> (Complex, Complex) {
    let bits = b1.prec().0;
    loop {
        if norm(&b2) < norm(&b1) {
            std::mem::swap(&mut b1, &mut b2);
        }
        let inner = Float::with_val(bits, b2.real() * b1.real()) + Float::with_val(bits, b2.imag() * b1.imag());
        let mu = (inner / norm(&b1)).round();
        if mu.is_zero() {
            return (b1, b2);
        }
        b2 -= Complex::with_val(bits, &b1 * &mu);
    }
}

/// Z-basis of the lattice spanned by `periods`. Every period is written in
/// rational coordinates over two fixed independent periods via an integer
/// relation; the span is then computed exactly (Hermite form, then Gauss
/// reduction on integer coordinates) and evaluated once, so no error
/// accumulates through the basis changes.
pub fn lattice_from_periods(periods: &[Complex], ctx: &PrecisionContext) -> Result<PeriodLattice> {
    let bits = ctx.bits();
    let max = periods.iter().map(abs).fold(Float::with_val(bits, 0), |acc, x| acc.max(&x));
    if max.is_zero() {
        return Err(Error::RankDeficient);
    }
    let tol = ctx.tolerance();
    let floor = Float::with_val(bits, &max * &tol);
    let live: Vec<&Complex> = periods.iter().filter(|p| abs(p) > floor).collect();
    let pa = live[0].clone();
    // the partner least parallel to pa keeps the coordinates well conditioned
    let sine = |p: &Complex| {
        let cross = Float::with_val(bits, pa.real() * p.imag()) - Float::with_val(bits, pa.imag() * p.real());
        cross.abs() / abs(p)
    };
    let pb = live
        .iter()
        .map(|p| (sine(p), *p))
        .max_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal))
        .filter(|(s, _)| *s > Float::with_val(bits, abs(&pa) * &tol))
        .map(|(_, p)| p.clone())
        .ok_or(Error::RankDeficient)?;
    let bound = Integer::from(10).pow(scale_bound_digits(ctx));

    // p = (x pa + y pb) / den
    let mut coords: Vec<(Integer, Integer, Integer)> = vec![
        (Integer::from(1), Integer::new(), Integer::from(1)),
        (Integer::new(), Integer::from(1), Integer::from(1)),
    ];
    for &p in &live {
        let rel = find_complex_relation(&[pa.clone(), pb.clone(), p.clone()], &bound, ctx)?;
        if rel[2].is_zero() {
            return Err(Error::Precondition("reference periods are dependent".into()));
        }
        let sign = if rel[2].is_negative() { 1 } else { -1 };
        coords.push((Integer::from(&rel[0] * sign), Integer::from(&rel[1] * sign), Integer::from(rel[2].abs_ref())));
    }
    let common = coords.iter().fold(Integer::from(1), |l, (_, _, d)| l.lcm(d));
    let vectors: Vec<[Integer; 2]> = coords
        .into_iter()
        .map(|(x, y, d)| {
            let f = Integer::from(&common / &d);
            [Integer::from(&x * &f), y * f]
        })
        .collect();
    let [mut u, mut v] = hermite_2d(&vectors)?;

    let eval = |c: &[Integer; 2]| {
        let mut z = Complex::with_val(bits, &pa * &c[0]);
        z += Complex::with_val(bits, &pb * &c[1]);
        z / Float::with_val(bits, &common)
    };
    loop {
        let (eu, ev) = (eval(&u), eval(&v));
        if norm(&ev) < norm(&eu) {
            std::mem::swap(&mut u, &mut v);
            continue;
        }
        let inner = Float::with_val(bits, ev.real() * eu.real()) + Float::with_val(bits, ev.imag() * eu.imag());
        let mu = (inner / norm(&eu)).round().to_integer().unwrap_or_default();
        if mu.is_zero() {
            break;
        }
        for i in 0..2 {
            v[i] -= Integer::from(&mu * &u[i]);
        }
    }
    let (w1, w2) = reduce_and_normalize_basis(eval(&u), eval(&v), ctx)?;
    Ok(PeriodLattice::from_basis(w1, w2))
}

/// Row basis of the Z-span of integer plane vectors, in Hermite form.
fn hermite_2d(vectors: &[[Integer; 2]]) -> Result<[[Integer; 2]; 2]> {
    let mut top = [Integer::new(), Integer::new()];
    let mut second = Integer::new();
    for v in vectors {
        let (g, s, t) = top[0].clone().extended_gcd(v[0].clone(), Integer::new());
        let leftover = if g.is_zero() {
            v[1].clone()
        } else {
            let y = Integer::from(&s * &top[1]) + Integer::from(&t * &v[1]);
            let rest = Integer::from(&v[0] / &g) * &top[1] - Integer::from(&top[0] / &g) * &v[1];
            top = [g, y];
            rest
        };
        second = second.gcd(&leftover);
    }
    if top[0].is_zero() || second.is_zero() {
        return Err(Error::RankDeficient);
    }
    top[1] = top[1].clone().modulo(&second);
    Ok([top, [Integer::new(), second]])
}

fn scale_bound_digits(ctx: &PrecisionContext) -> u32 {
    (ctx.digits() + ctx.guard_digits() / 2) / 2
}

const IMAGINARY_SEARCH_BOX: i64 = 12;

/// Puts a real lattice into the form omega_1 in i R_{>0}, Re(omega_2) < 0,
/// Re(omega_2 / omega_1) in {0, 1/2}.
pub fn reduce_and_normalize_basis(b1: Complex, b2: Complex, ctx: &PrecisionContext) -> Result<(Complex, Complex)> {
    let bits = ctx.bits();
    let (b1, b2) = gauss_reduce(b1, b2);
    let scale = abs(&b1).max(&abs(&b2));
    let tol = Float::with_val(bits, &scale * ctx.tolerance());
    let combo = |i: i64, j: i64| Complex::with_val(bits, &b1 * i) + Complex::with_val(bits, &b2 * j);

    let mut best: Option<(Float, i64, i64)> = None;
    for i in -IMAGINARY_SEARCH_BOX..=IMAGINARY_SEARCH_BOX {
        for j in -IMAGINARY_SEARCH_BOX..=IMAGINARY_SEARCH_BOX {
            if (i, j) == (0, 0) || gcd(i, j) != 1 {
                continue;
            }
            let v = combo(i, j);
            if Float::with_val(bits, v.real().abs_ref()) > tol {
                continue;
            }
            let size = abs(&v);
            if best.as_ref().is_none_or(|(s, _, _)| size < *s) {
                best = Some((size, i, j));
            }
        }
    }
    let (_, i, j) = best.ok_or(Error::NotRealLattice)?;
    let mut w1 = combo(i, j);
    // complete (i, j) to a unimodular matrix: i x + j y = 1
    let (_, x, y) = crate::arith::ext_gcd(i, j);
    let mut w2 = combo(-y, x);
    if w1.imag().is_sign_negative() {
        w1 = -w1;
    }
    let height = w1.imag().clone();
    let shift = (Float::with_val(bits, w2.imag() / &height)).round();
    w2 -= Complex::with_val(bits, &w1 * &shift);
    if w2.real().is_sign_positive() {
        w2 = -w2;
    }
    let mut offset = Float::with_val(bits, w2.imag() / &height);
    let half = Float::with_val(bits, 0.5);
    if Float::with_val(bits, &offset + &half).abs() <= ctx.tolerance() {
        w2 += &w1;
        offset += 1u32;
    }
    let near_zero = Float::with_val(bits, offset.abs_ref()) <= ctx.tolerance();
    let near_half = Float::with_val(bits, &offset - &half).abs() <= ctx.tolerance();
    if !near_zero && !near_half {
        return Err(Error::NotRealLattice);
    }
    Ok((w1, w2))
}

/// Klein's j(tau) via E4, E6 after moving tau into the fundamental domain.
pub fn j_invariant(tau: &Complex, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let mut tau = Complex::with_val(bits, tau);
    if tau.imag().is_sign_negative() {
        tau = -tau;
    }
    for _ in 0..1000 {
        let shift = tau.real().clone().round();
        tau -= shift;
        if norm(&tau) < 1 {
            tau = Complex::with_val(bits, -1) / tau;
        } else {
            break;
        }
    }
    let q = (Complex::with_val(bits, &tau * ctx.two_pi()) * Complex::with_val(bits, (0, 1))).exp();
    // j = E4^3 / Delta with Delta = q prod (1 - q^n)^24; the product form
    // avoids the cancellation in E4^3 - E6^2 high in the cusp
    let mut e4 = Complex::with_val(bits, 1);
    let mut product = Complex::with_val(bits, 1);
    let mut qn = Complex::with_val(bits, 1);
    let cutoff = -f64::from(ctx.working_digits()) - 5.0;
    for n in 1u64.. {
        qn *= &q;
        if log10_abs(&abs(&qn)) < cutoff {
            break;
        }
        e4 += Complex::with_val(bits, &qn * Integer::from(divisor_sum(n, 3) * 240));
        product *= Complex::with_val(bits, 1 - &qn);
    }
    let delta = q * Complex::with_val(bits, product.pow(24u32));
    Complex::with_val(bits, e4.pow(3u32)) / delta
}
