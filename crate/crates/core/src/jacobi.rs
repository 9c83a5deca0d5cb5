//! Exact two-variable q/zeta series, the theta/eta products that give Jacobi
//! forms, and the half-integral weight forms read off from them.

use std::collections::BTreeMap;

use rug::Integer;

use crate::error::{Error, Result};

/// Exponents of q are stored in units of 1/24 and exponents of zeta in
/// units of 1/2. Coefficients are exact for q-exponents below `q_limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QZSeries {
    terms: BTreeMap<(i64, i64), Integer>,
    q_limit: i64,
}

impl QZSeries {
    pub fn new(q_limit: i64) -> Self {
        Self {
            terms: BTreeMap::new(),
            q_limit,
        }
    }

    pub fn monomial(q: i64, z: i64, coeff: Integer, q_limit: i64) -> Self {
        let mut s = Self::new(q_limit);
        s.add_term(q, z, coeff);
        s
    }

    pub fn q_limit(&self) -> i64 {
        self.q_limit
    }

    pub fn add_term(&mut self, q: i64, z: i64, coeff: Integer) {
        if q >= self.q_limit || coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((q, z)).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(q, z));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Integer)> {
        self.terms.iter()
    }

    /// Coefficient of q^(q/24) zeta^(z/2).
    pub fn raw_coefficient(&self, q: i64, z: i64) -> Result<Integer> {
        if q >= self.q_limit {
            return Err(Error::Truncated { n: q });
        }
        Ok(self.terms.get(&(q, z)).cloned().unwrap_or_default())
    }

    /// Coefficient of q^n zeta^r for integral n, r.
    pub fn coefficient(&self, n: i64, r: i64) -> Result<Integer> {
        self.raw_coefficient(24 * n, 2 * r)
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().next().map(|k| k.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (Some(a0), Some(b0)) = (self.min_q(), other.min_q()) else {
            return Self::new(self.q_limit.min(other.q_limit));
        };
        let limit = (self.q_limit + b0).min(other.q_limit + a0);
        let mut out = Self::new(limit);
        for (&(qa, za), ca) in &self.terms {
            if qa + b0 >= limit {
                break;
            }
            for (&(qb, zb), cb) in &other.terms {
                if qa + qb >= limit {
                    break;
                }
                out.add_term(qa + qb, za + zb, Integer::from(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::monomial(0, 0, Integer::from(1), i64::MAX / 4);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Inverse of a series whose lowest q-level is a single monomial with
    /// coefficient +-1.
    pub fn inverse(&self) -> Result<Self> {
        let q0 = self.min_q().ok_or(Error::NonUnitLeading)?;
        let lowest: Vec<_> = self.terms.range((q0, i64::MIN)..=(q0, i64::MAX)).collect();
        let [(&(_, z0), lead)] = lowest[..] else {
            return Err(Error::NonUnitLeading);
        };
        if lead.clone().abs() != 1 {
            return Err(Error::NonUnitLeading);
        }
        let lead = lead.clone();
        // self = lead q^q0 zeta^z0 (1 + h), h has positive q-exponents
        let width = self.q_limit - q0;
        let mut h = Self::new(width);
        for (&(q, z), c) in &self.terms {
            if (q, z) != (q0, z0) {
                h.add_term(q - q0, z - z0, Integer::from(c * &lead));
            }
        }
        let mut neg_h = Self::new(width);
        for (&(q, z), c) in &h.terms {
            neg_h.add_term(q, z, Integer::from(-c));
        }
        let mut sum = Self::monomial(0, 0, Integer::from(1), width);
        let mut power = sum.clone();
        loop {
            power = power.mul(&neg_h);
            power.q_limit = width;
            if power.terms.is_empty() {
                break;
            }
            for (&(q, z), c) in &power.terms {
                sum.add_term(q, z, c.clone());
            }
        }
        let mut out = Self::new(width - q0);
        for (&(q, z), c) in &sum.terms {
            out.add_term(q - q0, z - z0, Integer::from(c * &lead));
        }
        Ok(out)
    }

    /// Fails unless every exponent is integral in q and zeta.
    pub fn check_integral(&self) -> Result<()> {
        for &(q, z) in self.terms.keys() {
            if q % 24 != 0 || z % 2 != 0 {
                return Err(Error::NonIntegralExponent { q, z });
            }
        }
        Ok(())
    }
}

/// eta(tau) = q^(1/24) prod (1 - q^n) via Euler's pentagonal series.
pub fn eta(q_limit: i64) -> QZSeries {
    let mut s = QZSeries::new(q_limit);
    let mut k = 0i64;
    loop {
        let mut any = false;
        for j in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = 1 + 12 * j * (3 * j - 1);
            if e < q_limit {
                any = true;
                let sign = if j % 2 == 0 { 1 } else { -1 };
                s.add_term(e, 0, Integer::from(sign));
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    s
}

/// theta_a(tau, z) = sum_{r odd} (-4/r) q^(r^2/8) zeta^(a r/2).
pub fn theta(a: i64, q_limit: i64) -> QZSeries {
    let mut s = QZSeries::new(q_limit);
    let mut r = 1i64;
    while 3 * r * r < q_limit {
        for rr in [r, -r] {
            let chi = if rr.rem_euclid(4) == 1 { 1 } else { -1 };
            s.add_term(3 * rr * rr, a * rr, Integer::from(chi));
        }
        r += 2;
    }
    s
}

fn integral_product(factors: &[(QZSeries, u32)], eta_power: i32, n_max: i64) -> Result<QZSeries> {
    // generous truncation; the final limit is tracked exactly by `mul`
    let limit = 24 * (n_max + 1) + 48;
    let mut acc = QZSeries::monomial(0, 0, Integer::from(1), i64::MAX / 4);
    for (series, e) in factors {
        acc = acc.mul(&series.pow(*e));
    }
    let eta_part = eta(limit).pow(eta_power.unsigned_abs());
    let eta_part = if eta_power < 0 { eta_part.inverse()? } else { eta_part };
    let out = acc.mul(&eta_part);
    out.check_integral()?;
    if out.q_limit <= 24 * n_max {
        return Err(Error::Truncated { n: n_max });
    }
    Ok(out)
}

/// theta_1^5 theta_2^3 theta_3 / eta^3: a Jacobi cusp form of weight 3 and
/// index 13, exact through q^n_max.
pub fn phi_index13(n_max: i64) -> Result<QZSeries> {
    let limit = 24 * (n_max + 1) + 48;
    integral_product(
        &[(theta(1, limit), 5), (theta(2, limit), 3), (theta(3, limit), 1)],
        -3,
        n_max,
    )
}

/// theta_1^2 eta^18: the Jacobi cusp form of weight 10 and index 1.
pub fn phi_index1_weight10(n_max: i64) -> Result<QZSeries> {
    let limit = 24 * (n_max + 1) + 48;
    integral_product(&[(theta(1, limit), 2)], 18, n_max)
}

/// Source of Jacobi coefficients c(n, r) of index N.
pub trait JacobiCoefficients {
    fn index(&self) -> u64;
    /// `Ok(None)` when the coefficient is not known.
    fn coefficient(&self, n: i64, r: i64) -> Result<Option<Integer>>;
}

pub struct SeriesJacobiForm {
    pub series: QZSeries,
    pub index: u64,
}

impl JacobiCoefficients for SeriesJacobiForm {
    fn index(&self) -> u64 {
        self.index
    }

    fn coefficient(&self, n: i64, r: i64) -> Result<Option<Integer>> {
        match self.series.coefficient(n, r) {
            Ok(c) => Ok(Some(c)),
            Err(Error::Truncated { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Coefficients given by discriminant: c(n, r) = table[r^2 - 4 N n].
pub struct DiscriminantTable {
    pub index: u64,
    pub values: BTreeMap<i64, Integer>,
}

impl JacobiCoefficients for DiscriminantTable {
    fn index(&self) -> u64 {
        self.index
    }

    fn coefficient(&self, n: i64, r: i64) -> Result<Option<Integer>> {
        let disc = r * r - 4 * self.index as i64 * n;
        Ok(self.values.get(&disc).cloned())
    }
}

/// c(n, r) of `phi` at n = (|D| + r^2)/(4N).
pub fn jacobi_coefficient(phi: &dyn JacobiCoefficients, disc: i64, r: i64) -> Result<Option<Integer>> {
    let four_n = 4 * phi.index() as i64;
    let total = -disc + r * r;
    if total % four_n != 0 {
        return Err(Error::BadRoot {
            disc,
            r,
            modulus: four_n,
        });
    }
    phi.coefficient(total / four_n, r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralForm {
    /// Twice the weight.
    pub weight_twice: u32,
    pub level: u64,
    /// c(M) for M = 0..=M_max, missing entries unknown.
    pub coeffs: BTreeMap<u64, Integer>,
}

/// g = sum c(M) q^M, c(M) = c((M + r^2)/(4N), r) for any r with
/// r^2 = -M mod 4N, for N = 1 or prime and weight 2k + 2 odd index.
pub fn half_integral_form(phi: &dyn JacobiCoefficients, k: u32, m_max: u64) -> Result<HalfIntegralForm> {
    let n = phi.index() as i64;
    if k.is_multiple_of(2) {
        return Err(Error::Precondition(format!("half-integral lift needs odd k, got {k}")));
    }
    if n != 1 && !is_prime(n) {
        return Err(Error::Precondition(format!("half-integral lift needs N = 1 or prime, got {n}")));
    }
    let mut coeffs = BTreeMap::new();
    for big_m in 0..=m_max as i64 {
        let mut value: Option<Integer> = None;
        let mut admissible = false;
        for r in 0..2 * n {
            if (r * r + big_m) % (4 * n) != 0 {
                continue;
            }
            admissible = true;
            let Some(c) = phi.coefficient((big_m + r * r) / (4 * n), r)? else {
                continue;
            };
            match &value {
                Some(v) if *v != c => return Err(Error::IllDefined { big_m: big_m as u64 }),
                _ => value = Some(c),
            }
        }
        if !admissible {
            coeffs.insert(big_m as u64, Integer::new());
        } else if let Some(v) = value {
            coeffs.insert(big_m as u64, v);
        }
    }
    Ok(HalfIntegralForm {
        weight_twice: 2 * k + 1,
        level: 4 * n as u64,
        coeffs,
    })
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}
