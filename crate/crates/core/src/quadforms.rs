//! Positive definite binary quadratic forms [a, b, c] = a x^2 + b x y + c y^2:
//! reduction, class enumeration and Heegner representatives on X_0(N).

use std::collections::BTreeSet;

use rug::{Complex, Float};

use crate::arith::{gcd, is_fundamental};
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let form = Self { a, b, c };
        if a <= 0 || c <= 0 || form.discriminant() >= 0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        Ok(form)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The root of a z^2 + b z + c in the upper half plane.
    pub fn root(&self, ctx: &PrecisionContext) -> Complex {
        let bits = ctx.bits();
        let two_a = Float::with_val(bits, 2 * self.a);
        let re = Float::with_val(bits, -self.b) / &two_a;
        let im = Float::with_val(bits, -self.discriminant()).sqrt() / &two_a;
        Complex::with_val(bits, (re, im))
    }

    pub fn root_height(&self) -> f64 {
        ((-self.discriminant()) as f64).sqrt() / (2.0 * self.a as f64)
    }

    /// The form whose root is gamma(root), for gamma = [[a, b], [c, d]] of
    /// determinant 1.
    pub fn transform(&self, gamma: [[i64; 2]; 2]) -> Self {
        let [[ga, gb], [gc, gd]] = gamma.map(|row| row.map(i128::from));
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let na = a * gd * gd - b * gc * gd + c * gc * gc;
        let nb = -2 * a * gb * gd + b * (ga * gd + gb * gc) - 2 * c * ga * gc;
        let nc = a * gb * gb - b * ga * gb + c * ga * ga;
        Self {
            a: na as i64,
            b: nb as i64,
            c: nc as i64,
        }
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// The unique reduced form SL_2(Z)-equivalent to `form`.
pub fn reduce_form(form: QuadForm) -> Result<QuadForm> {
    let QuadForm { a, b, c } = QuadForm::new(form.a, form.b, form.c)?;
    let disc = form.discriminant() as i128;
    let (mut a, mut b, mut c) = (a as i128, b as i128, c as i128);
    loop {
        if b > a || b <= -a {
            // translate b into (-a, a]
            let shift = (a - b).div_euclid(2 * a);
            b += 2 * a * shift;
            c = (b * b - disc) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    Ok(QuadForm {
        a: a as i64,
        b: b as i64,
        c: c as i64,
    })
}

/// Reduced primitive forms of fundamental discriminant `disc`, sorted.
pub fn class_representatives(disc: i64) -> Result<Vec<QuadForm>> {
    if !is_fundamental(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            let form = QuadForm { a, b, c };
            if form.is_primitive() {
                forms.push(form);
            }
        }
        a += 1;
    }
    forms.sort();
    Ok(forms)
}

pub fn class_number(disc: i64) -> Result<usize> {
    Ok(class_representatives(disc)?.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeegnerPoint {
    pub form: QuadForm,
    pub level: u64,
    pub disc: i64,
    /// B mod 2N
    pub root_class: i64,
}

impl HeegnerPoint {
    pub fn tau(&self, ctx: &PrecisionContext) -> Complex {
        self.form.root(ctx)
    }

    pub fn height(&self) -> f64 {
        self.form.root_height()
    }

    /// The Heegner point gamma(tau) for gamma in Gamma_0(N).
    pub fn translate(&self, gamma: [[i64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = gamma;
        if a * d - b * c != 1 || c % self.level as i64 != 0 {
            return Err(Error::Precondition(format!("{gamma:?} is not in Gamma_0({})", self.level)));
        }
        Ok(Self {
            form: self.form.transform(gamma),
            ..self.clone()
        })
    }
}

const MAX_LEADING_MULTIPLIER: i64 = 100_000;

/// One Heegner form [N a, B, C] with B = r mod 2N per SL_2(Z)-class of
/// discriminant `disc`, choosing the smallest a for each class.
pub fn heegner_representatives(level: u64, disc: i64, r: i64) -> Result<Vec<HeegnerPoint>> {
    let n = level as i64;
    let modulus = 4 * n;
    if (r * r - disc).rem_euclid(modulus) != 0 {
        return Err(Error::BadRoot { disc, r, modulus });
    }
    let expected = class_number(disc)?;
    let root_class = r.rem_euclid(2 * n);
    let mut seen = BTreeSet::new();
    let mut points = Vec::with_capacity(expected);
    let mut mult = 1i64;
    while points.len() < expected {
        if mult > MAX_LEADING_MULTIPLIER {
            return Err(Error::HeegnerEnumeration {
                disc,
                found: points.len(),
                expected,
            });
        }
        let a = n * mult;
        // B runs over [-a, a) in the class r mod 2N; 2a is a multiple of 2N
        let mut b = -a + (root_class - (-a)).rem_euclid(2 * n);
        while b < a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let form = QuadForm { a, b, c: num / (4 * a) };
                if form.is_primitive() && seen.insert(reduce_form(form)?) {
                    points.push(HeegnerPoint {
                        form,
                        level,
                        disc,
                        root_class,
                    });
                }
            }
            b += 2 * n;
        }
        mult += 1;
    }
    Ok(points)
}

/// Smallest r in [1, 2N] with r^2 = D mod 4N, if any.
pub fn first_positive_root(level: u64, disc: i64) -> Option<i64> {
    let n = level as i64;
    (1..=2 * n).find(|r| (r * r - disc).rem_euclid(4 * n) == 0)
}
