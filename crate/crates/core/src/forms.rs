//! Newforms with rational q-expansions: ingestion, validation, evaluation of
//! the iterated integrals f_l and the Fricke sign.

use std::path::Path;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::arith::{divisor_sum, gcd};
use crate::error::{Error, Result};
use crate::numerics::{abs, log10_abs, tail_cutoff, PrecisionContext};

#[derive(Debug, Clone)]
pub struct NewformData {
    level: u64,
    weight: u32,
    label: String,
    coeffs: Vec<Integer>,
    term_limit: Option<usize>,
}

impl NewformData {
    /// Builds a form from a_1.. and validates normalisation and
    /// multiplicativity on coprime indices.
    pub fn new(level: u64, weight: u32, label: impl Into<String>, coeffs: Vec<Integer>) -> Result<Self> {
        if level == 0 || weight < 2 || !weight.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "need level >= 1 and even weight >= 2, got level {level} weight {weight}"
            )));
        }
        match coeffs.first() {
            None => return Err(Error::InsufficientTerms { needed: 1, available: 0 }),
            Some(a1) if *a1 != 1 => return Err(Error::NotNormalized(a1.to_string())),
            _ => {}
        }
        let form = Self {
            level,
            weight,
            label: label.into(),
            coeffs,
            term_limit: None,
        };
        form.check_multiplicative()?;
        Ok(form)
    }

    fn check_multiplicative(&self) -> Result<()> {
        let bound = self.coeffs.len().min(200);
        for m in 2..=bound {
            for n in m + 1..=bound / m {
                if m * n > bound || gcd(m as i64, n as i64) != 1 || gcd((m * n) as i64, self.level as i64) != 1 {
                    continue;
                }
                let product = Integer::from(self.coefficient(m) * self.coefficient(n));
                if &product != self.coefficient(m * n) {
                    return Err(Error::NotMultiplicative { m, n, product: m * n });
                }
            }
        }
        Ok(())
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Half the weight.
    pub fn k(&self) -> u32 {
        self.weight / 2
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// a_n for 1 <= n <= available_terms().
    pub fn coefficient(&self, n: usize) -> &Integer {
        &self.coeffs[n - 1]
    }

    pub fn available_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn term_limit(&self) -> Option<usize> {
        self.term_limit
    }

    /// Caps every q-expansion evaluation at `limit` terms (`None`: choose the
    /// truncation from the evaluation height).
    pub fn with_term_limit(mut self, limit: Option<usize>) -> Self {
        self.term_limit = limit.map(|m| m.min(self.coeffs.len()));
        self
    }

    /// Number of terms used when evaluating at height `y`.
    pub fn terms_for(&self, y: f64, ctx: &PrecisionContext) -> Result<usize> {
        match self.term_limit {
            Some(limit) => Ok(tail_cutoff(self.weight, y, ctx).map_or(limit, |m| m.min(limit))),
            None => crate::numerics::truncation_length(self, y, ctx),
        }
    }
}

pub fn load_coefficients(path: &Path) -> Result<NewformData> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_coefficients(&text, &path.display().to_string())
}

/// Parses the coefficient format: a header `level N weight W [label L]`
/// followed by `n a_n` lines with n = 1, 2, 3, ... Blank lines and `#`
/// comments are ignored.
pub fn parse_coefficients(text: &str, source_name: &str) -> Result<NewformData> {
    let err = |line: usize, msg: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        msg,
    };
    let mut header: Option<(u64, u32, String)> = None;
    let mut coeffs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            let mut level = None;
            let mut weight = None;
            let mut label = String::new();
            for pair in fields.chunks(2) {
                let [key, value] = pair else {
                    return Err(err(lineno, format!("dangling header key {:?}", pair[0])));
                };
                match *key {
                    "level" => level = value.parse::<u64>().ok(),
                    "weight" => weight = value.parse::<u32>().ok(),
                    "label" => label = value.to_string(),
                    other => return Err(err(lineno, format!("unknown header key {other:?}"))),
                }
            }
            let (Some(level), Some(weight)) = (level, weight) else {
                return Err(err(lineno, "header needs integer `level` and `weight`".into()));
            };
            header = Some((level, weight, label));
            continue;
        }
        if fields.len() != 2 {
            return Err(err(lineno, format!("expected `n a_n`, found {line:?}")));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| err(lineno, format!("bad index {:?}", fields[0])))?;
        if n != coeffs.len() + 1 {
            return Err(err(lineno, format!("index {n} out of sequence, expected {}", coeffs.len() + 1)));
        }
        let value: Rational = fields[1]
            .parse()
            .map_err(|_| err(lineno, format!("bad coefficient {:?}", fields[1])))?;
        if *value.denom() != 1 {
            return Err(err(lineno, format!("coefficient {value} is not integral")));
        }
        coeffs.push(value.into_numer_denom().0);
    }
    let Some((level, weight, label)) = header else {
        return Err(err(0, "missing header".into()));
    };
    NewformData::new(level, weight, label, coeffs)
}

/// f_l(tau) = (2 pi i)^-l sum a_n n^-l q^n for l = 0..=max_ell.
pub fn iterated_integrals(f: &NewformData, tau: &Complex, max_ell: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    if max_ell >= f.weight() as usize {
        return Err(Error::IterationOrder {
            ell: max_ell,
            max: f.weight() as usize - 1,
        });
    }
    let bits = ctx.bits();
    let y = tau.imag().to_f64();
    if !(y > 0.0) {
        return Err(Error::Precondition(format!("Im(tau) = {y} is not positive")));
    }
    let terms = f.terms_for(y, ctx)?;
    let mut q = Complex::with_val(bits, tau * ctx.two_pi());
    q *= Complex::with_val(bits, (0, 1));
    let q = q.exp();
    let mut qn = Complex::with_val(bits, (1, 0));
    let mut sums = vec![Complex::new(bits); max_ell + 1];
    for n in 1..=terms {
        qn *= &q;
        let a = f.coefficient(n);
        if a.is_zero() {
            continue;
        }
        let mut term = Complex::with_val(bits, &qn * a);
        for sum in sums.iter_mut() {
            *sum += &term;
            term /= n as u32;
        }
    }
    let mut scale = Complex::with_val(bits, (1, 0));
    let inv_two_pi_i = Complex::with_val(bits, (0, -1)) / ctx.two_pi();
    for sum in sums.iter_mut() {
        *sum *= &scale;
        scale *= &inv_two_pi_i;
    }
    Ok(sums)
}

pub fn eval_iterated_integral(f: &NewformData, ell: usize, tau: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(iterated_integrals(f, tau, ell, ctx)?.swap_remove(ell))
}

pub fn evaluate(f: &NewformData, tau: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    eval_iterated_integral(f, 0, tau, ctx)
}

/// integral_{i inf}^{tau} f(z) z^m dz from the values f_1..f_{m+1} at tau:
/// sum_{i=0}^{m} (-1)^(m-i) m!/i! tau^i f_{m+1-i}(tau).
pub fn power_integral(m: usize, tau: &Complex, iterated: &[Complex]) -> Complex {
    let bits = tau.prec().0;
    let mut total = Complex::new(bits);
    let mut tau_pow = Complex::with_val(bits, (1, 0));
    // coefficient m!/i! built downward from i = m
    let mut falling = vec![Integer::from(1); m + 1];
    for i in (0..m).rev() {
        falling[i] = Integer::from(&falling[i + 1] * (i as u32 + 1));
    }
    for (i, coeff) in falling.iter().enumerate() {
        let mut term = Complex::with_val(bits, &tau_pow * &iterated[m + 1 - i]);
        term *= coeff;
        if (m - i) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
        tau_pow *= tau;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignEpsilon {
    pub value: i32,
    pub residual: f64,
}

/// Determines eps in f(-1/(N z)) = (-1)^k eps N^k z^2k f(z) numerically at
/// two points near the Fricke fixed point.
pub fn compute_sign_epsilon(f: &NewformData, ctx: &PrecisionContext) -> Result<SignEpsilon> {
    let bits = ctx.bits();
    let level = Float::with_val(bits, f.level());
    let root = level.clone().sqrt();
    let k = f.k();
    let mut pairs = Vec::new();
    for scale in [1.0, 1.1] {
        let z = Complex::with_val(bits, (0, Float::with_val(bits, scale) / &root));
        let image = Complex::with_val(bits, -1) / Complex::with_val(bits, &z * &level);
        let lhs = evaluate(f, &image, ctx)?;
        let mut rhs = evaluate(f, &z, ctx)?;
        rhs *= Complex::with_val(bits, &z).pow(f.weight());
        rhs *= Float::with_val(bits, &level).pow(k);
        if k % 2 == 1 {
            rhs = -rhs;
        }
        pairs.push((lhs, rhs));
    }
    let scale = pairs
        .iter()
        .flat_map(|(l, r)| [abs(l), abs(r)])
        .fold(Float::with_val(bits, 0), |acc, x| acc.max(&x));
    let residual = |sign: i32| -> f64 {
        let worst = pairs
            .iter()
            .map(|(l, r)| abs(&Complex::with_val(bits, l - Complex::with_val(bits, r * sign))))
            .fold(Float::with_val(bits, 0), |acc, x| acc.max(&x));
        10f64.powf(log10_abs(&worst) - log10_abs(&scale))
    };
    let plus = residual(1);
    let minus = residual(-1);
    let tol = 10f64.powf(-f64::from(ctx.digits()) / 2.0);
    if plus < tol && plus <= minus {
        Ok(SignEpsilon { value: 1, residual: plus })
    } else if minus < tol {
        Ok(SignEpsilon { value: -1, residual: minus })
    } else {
        Err(Error::SignUndetermined { plus, minus })
    }
}

/// The normalised cusp form (E4^3 E6 - E6^3)/1728 spanning S_18(SL_2(Z)),
/// to `terms` coefficients.
pub fn build_level1_weight18(terms: usize) -> Result<NewformData> {
    let len = terms + 1;
    let eisenstein = |factor: i64, power: u32| -> Vec<Integer> {
        let mut s = vec![Integer::new(); len];
        s[0] = Integer::from(1);
        for (n, c) in s.iter_mut().enumerate().skip(1) {
            *c = Integer::from(divisor_sum(n as u64, power)) * factor;
        }
        s
    };
    let e4 = eisenstein(240, 3);
    let e6 = eisenstein(-504, 5);
    let e4_cubed = series_mul(&series_mul(&e4, &e4), &e4);
    let e6_squared = series_mul(&e6, &e6);
    let diff: Vec<Integer> = e4_cubed
        .iter()
        .zip(&e6_squared)
        .map(|(a, b)| Integer::from(a - b))
        .collect();
    let numer = series_mul(&diff, &e6);
    let coeffs = numer
        .into_iter()
        .skip(1)
        .map(|c| {
            let (q, r) = c.div_rem(Integer::from(1728));
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    NewformData::new(1, 18, "s18n1", coeffs)
}

pub(crate) fn series_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let len = a.len().min(b.len());
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}
