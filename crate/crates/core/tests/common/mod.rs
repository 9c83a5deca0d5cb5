//! Checks shared by the oracle, property and acceptance targets. Each check
//! returns a short summary on success and the reason on failure.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Complex, Float};

use heegner::config::TermSetting;
use heegner::forms::{evaluate, iterated_integrals, power_integral};
use heegner::heegner::{alpha, alpha_direct, line_point_from, p_polynomial_coefficients, WeightPolicy};
use heegner::numerics::{abs, agreed_digits, log10_abs};
use heegner::periods::{lattice_from_periods, shimura_integrals_split, GeneratorSet};
use heegner::presets;
use heegner::quadforms::{class_representatives, heegner_representatives};
use heegner::{HeegnerPoint, PeriodLattice, PrecisionContext, QuadForm, RunConfig, Session};

pub type Check = Result<String, String>;

pub fn session(label: &str) -> Session {
    Session::preset(label).expect("shipped preset")
}

/// The preset with the truncation chosen from each evaluation height, for
/// checks that move points towards the real axis.
pub fn auto_session(label: &str) -> Session {
    let mut config = RunConfig::preset(label).expect("shipped preset");
    config.terms = TermSetting::Auto;
    Session::new(config).expect("session")
}

fn single_threaded<T: Send>(work: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("thread pool")
        .install(work)
}

// ---------------------------------------------------------------- tables

/// Runs the preset table single-threaded and compares every row with the
/// published one; `m_checks` are extra rows that must be present.
pub fn table_reproduction(label: &str, budget: Duration) -> Check {
    let s = session(label);
    let start = Instant::now();
    let report = single_threaded(|| s.table()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let published = presets::reference_table(label).ok_or("no published table")?;
    let mut problems = Vec::new();
    for &(d, expected) in published {
        match report.rows.iter().find(|r| r.disc == d) {
            None => problems.push(format!("D={d} missing")),
            Some(row) => match &row.fit {
                Err(e) => problems.push(format!("D={d}: {e}")),
                Ok(fit) if fit.m != expected => problems.push(format!("D={d}: m={} expected {expected}", fit.m)),
                Ok(fit) if !fit.stable => problems.push(format!("D={d}: unstable")),
                Ok(_) => {}
            },
        }
    }
    for row in &report.rows {
        if published.iter().all(|(d, _)| *d != row.disc) {
            problems.push(format!("D={} not in the published table", row.disc));
        }
    }
    if elapsed > budget {
        problems.push(format!("runtime {elapsed:.1?} over {budget:?}"));
    }
    if problems.is_empty() {
        Ok(format!("{} rows, t={}, {:.2?} single-threaded", published.len(), report.t, elapsed))
    } else {
        Err(problems.join("; "))
    }
}

pub fn jacobi_agreement(label: &str) -> Check {
    let s = session(label);
    let table = s.table().map_err(|e| e.to_string())?;
    let report = s.jacobi(&table).map_err(|e| e.to_string())?;
    let bad: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.ok)
        .map(|r| format!("D={} m={} c={}", r.disc, r.m, r.c))
        .collect();
    if !bad.is_empty() || !report.missing.is_empty() || report.half_integral_ok == Some(false) {
        return Err(format!("mismatches {bad:?}, missing {:?}, half-integral {:?}", report.missing, report.half_integral_ok));
    }
    Ok(format!("{} coefficients, scalar {}", report.rows.len(), report.scalar))
}

// ---------------------------------------------------------------- lattice

/// |computed| against |published| componentwise: every printed significant
/// digit (up to `sig`) must agree. Published values are truncated, so the
/// allowed gap is one unit in the last compared place of the reference.
pub fn basis_match(label: &str, sig: i32) -> Check {
    let s = session(label);
    let lattice = s.lattice(&s.ctx).map_err(|e| e.to_string())?.lattice;
    let reference = presets::reference_basis(label).ok_or("no published basis")?;
    let scale = reference.omega1.0.hypot(reference.omega1.1).max(reference.omega2.0.hypot(reference.omega2.1));
    let mut worst = 0f64;
    for (z, (re, im)) in [(lattice.omega1(), reference.omega1), (lattice.omega2(), reference.omega2)] {
        for (x, r) in [(z.real().to_f64(), re), (z.imag().to_f64(), im)] {
            // gap measured in units of the last compared digit
            let gap = if r == 0.0 {
                x.abs() / (scale * 10f64.powi(-sig))
            } else {
                let unit = 10f64.powf(r.abs().log10().floor() - f64::from(sig - 1));
                (x.abs() - r.abs()).abs() / unit
            };
            worst = worst.max(gap);
        }
    }
    if worst >= 1.0 {
        return Err(format!("off by {worst:.2} units in significant digit {sig}"));
    }
    Ok(format!("{sig} digits, worst gap {worst:.2} units"))
}

pub fn ratio_real_part(label: &str) -> f64 {
    let s = session(label);
    s.lattice(&s.ctx).expect("lattice").lattice.ratio().real().to_f64()
}

// ---------------------------------------------------------------- L-values

pub fn waldspurger(label: &str) -> Check {
    let s = session(label);
    let table = s.table().map_err(|e| e.to_string())?;
    let report = s.waldspurger(&table).map_err(|e| e.to_string())?;
    let failed: Vec<i64> = report.rows.iter().filter(|r| !r.pass).map(|r| r.disc).collect();
    if !failed.is_empty() {
        return Err(format!("failing rows {failed:?}"));
    }
    let worst = report.rows.iter().filter(|r| !r.m.is_zero()).map(|r| r.rel_err).fold(0.0, f64::max);
    let zeros = report.rows.iter().filter(|r| r.m.is_zero()).count();
    Ok(format!("{} rows (D1={}), worst rel err {worst:.1e}, {zeros} zero rows", report.rows.len(), report.reference_disc))
}

/// The m = 0 row at `disc` has a vanishing central value.
pub fn vanishing_l_value(label: &str, disc: i64) -> Check {
    let s = session(label);
    let table = s.table().map_err(|e| e.to_string())?;
    let report = s.waldspurger(&table).map_err(|e| e.to_string())?;
    let row = report.rows.iter().find(|r| r.disc == disc).ok_or(format!("D={disc} not compared"))?;
    if !row.m.is_zero() || !row.pass {
        return Err(format!("m={} relative size {:.1e}", row.m, row.rel_err));
    }
    Ok(format!("L(f, {disc}, k) relative size {:.1e}", row.rel_err))
}

// ---------------------------------------------------------------- sampling

/// A random element of Gamma_0(N) with small entries.
pub fn random_gamma0(level: u64, rng: &mut impl Rng) -> [[i64; 2]; 2] {
    let n = level as i64;
    loop {
        let c = n * rng.gen_range(-3i64..=3);
        let d = rng.gen_range(-6i64..=6);
        let (g, x, y) = heegner::arith::ext_gcd(d, c);
        if g != 1 {
            continue;
        }
        // x d + y c = 1, so [[x, -y], [c, d]] has determinant 1
        let shift = rng.gen_range(-2i64..=2);
        return [[x + shift * c, -y + shift * d], [c, d]];
    }
}

/// A random Heegner point of the preset's table, with its (D, r).
pub fn random_heegner_point(s: &Session, rng: &mut impl Rng) -> HeegnerPoint {
    let discs = s.discriminants();
    let (d, r) = discs[rng.gen_range(0..discs.len())];
    let points = heegner_representatives(s.config.level, d, r).expect("representatives");
    points[rng.gen_range(0..points.len())].clone()
}

pub const MIN_HEIGHT: f64 = 0.05;

fn reduced_size(lattice: &PeriodLattice, z: &Complex) -> f64 {
    let r = lattice.reduce(z);
    if r.real().is_zero() && r.imag().is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_abs(&abs(&r)) - log10_abs(&lattice.scale())
}

// ---------------------------------------------------------------- properties

/// log10 of |alpha(gamma P) - alpha(P) mod L| relative to the lattice scale.
pub fn invariance_residual(s: &Session, lattice: &PeriodLattice, point: &HeegnerPoint, gamma: [[i64; 2]; 2]) -> Result<f64, String> {
    let moved = point.translate(gamma).map_err(|e| e.to_string())?;
    let a = alpha(&s.form, point, &s.ctx).map_err(|e| e.to_string())?;
    let b = alpha(&s.form, &moved, &s.ctx).map_err(|e| e.to_string())?;
    Ok(reduced_size(lattice, &Complex::with_val(s.ctx.bits(), &b - &a)))
}

pub fn dual_formula_digits(s: &Session, point: &HeegnerPoint) -> Result<u32, String> {
    let a = alpha(&s.form, point, &s.ctx).map_err(|e| e.to_string())?;
    let b = alpha_direct(&s.form, point, &s.ctx).map_err(|e| e.to_string())?;
    Ok(agreed_digits(&a, &b, s.ctx.working_digits()))
}

/// Fewest digits on which the periods of any generator agree between two
/// split heights, measured against that generator's largest period.
pub fn split_agreement(s: &Session, scales: (f64, f64)) -> Result<f64, String> {
    let mut worst = f64::INFINITY;
    for g in s.generators.generators.iter().filter(|g| g.matrix[1][0] != 0) {
        let a = shimura_integrals_split(&s.form, g, scales.0, &s.ctx).map_err(|e| e.to_string())?;
        let b = shimura_integrals_split(&s.form, g, scales.1, &s.ctx).map_err(|e| e.to_string())?;
        let size = a.iter().map(abs).fold(Float::with_val(s.ctx.bits(), 0), |m, x| m.max(&x));
        for (x, y) in a.iter().zip(&b) {
            let diff = abs(&Complex::with_val(s.ctx.bits(), x - y));
            if !diff.is_zero() {
                worst = worst.min(log10_abs(&size) - log10_abs(&diff));
            }
        }
    }
    Ok(worst)
}

/// The lattice spanned by the raw periods alone is closed under complex
/// conjugation and coincides with the one built with conjugates adjoined.
pub fn conjugate_closure(s: &Session) -> Check {
    let outcome = s.lattice(&s.ctx).map_err(|e| e.to_string())?;
    let raw = lattice_from_periods(&outcome.periods, &s.ctx).map_err(|e| e.to_string())?;
    let full = &outcome.lattice;
    let bits = s.ctx.bits();
    for w in [raw.omega1(), raw.omega2()] {
        let conj = Complex::with_val(bits, w.conj_ref());
        if !raw.contains(&conj, &s.ctx) {
            return Err("conjugate of a basis vector is outside the raw-period lattice".into());
        }
        if !full.contains(w, &s.ctx) {
            return Err("raw-period lattice is not inside L".into());
        }
    }
    for w in [full.omega1(), full.omega2()] {
        if !raw.contains(w, &s.ctx) {
            return Err("L is larger than the raw-period lattice".into());
        }
    }
    Ok("closed".into())
}

/// log10 of |y_{D,r}(translated representatives) - y_{D,r} mod L|.
pub fn representative_shift(
    s: &Session,
    lattice: &PeriodLattice,
    disc: i64,
    r: i64,
    rng: &mut impl Rng,
) -> Result<f64, String> {
    let points = heegner_representatives(s.config.level, disc, r).map_err(|e| e.to_string())?;
    let mut moved = Vec::with_capacity(points.len());
    for p in &points {
        let floor = MIN_HEIGHT.min(p.height());
        let q = loop {
            let candidate = p.translate(random_gamma0(s.config.level, rng)).map_err(|e| e.to_string())?;
            if candidate.height() >= floor {
                break candidate;
            }
        };
        moved.push(q);
    }
    let policy = WeightPolicy { weighted: s.config.weighted };
    let a = line_point_from(&s.form, disc, r, &points, policy, &s.ctx).map_err(|e| e.to_string())?;
    let b = line_point_from(&s.form, disc, r, &moved, policy, &s.ctx).map_err(|e| e.to_string())?;
    Ok(reduced_size(lattice, &Complex::with_val(s.ctx.bits(), &b.value - &a.value)))
}

/// Lattices from two generator sets contain each other.
pub fn same_lattice(a: &PeriodLattice, b: &PeriodLattice, ctx: &PrecisionContext) -> bool {
    [a.omega1(), a.omega2()].iter().all(|w| b.contains(w, ctx)) && [b.omega1(), b.omega2()].iter().all(|w| a.contains(w, ctx))
}

pub fn level3_alternative_generators(s: &Session) -> Check {
    let alt = GeneratorSet::parse("1 1 0 1\n1 0 -3 1\n0 -1 3 0 fricke\n", 3, "alternative").map_err(|e| e.to_string())?;
    let periods = heegner::periods::all_periods(&s.form, &alt, &s.ctx).map_err(|e| e.to_string())?;
    let mut closed = periods.clone();
    closed.extend(periods.iter().map(|p| Complex::with_val(s.ctx.bits(), p.conj_ref())));
    let other = lattice_from_periods(&closed, &s.ctx).map_err(|e| e.to_string())?;
    let base = s.lattice(&s.ctx).map_err(|e| e.to_string())?.lattice;
    if same_lattice(&base, &other, &s.ctx) {
        Ok("same lattice".into())
    } else {
        Err("generator sets give different lattices".into())
    }
}

/// Deterministic sample of every property on one preset, as used by the
/// acceptance target (the proptest target samples the same checks).
pub fn property_suite(label: &str, seed: u64) -> Check {
    let s = auto_session(label);
    let mut rng = StdRng::seed_from_u64(seed);
    let lattice = s.lattice(&s.ctx).map_err(|e| e.to_string())?.lattice;
    let half = -f64::from(s.ctx.digits()) / 2.0;

    let mut worst_invariance = f64::NEG_INFINITY;
    let mut pairs = 0;
    while pairs < 20 {
        let p = random_heegner_point(&s, &mut rng);
        let gamma = random_gamma0(s.config.level, &mut rng);
        if p.translate(gamma).map_err(|e| e.to_string())?.height() < MIN_HEIGHT {
            continue;
        }
        worst_invariance = worst_invariance.max(invariance_residual(&s, &lattice, &p, gamma)?);
        pairs += 1;
    }
    if worst_invariance >= half {
        return Err(format!("Gamma_0(N) invariance residual 1e{worst_invariance:.1}"));
    }

    let mut fewest = u32::MAX;
    for _ in 0..10 {
        let p = random_heegner_point(&s, &mut rng);
        fewest = fewest.min(dual_formula_digits(&s, &p)?);
    }
    if fewest < s.ctx.digits() / 2 {
        return Err(format!("alpha and alpha_direct share only {fewest} digits"));
    }

    let split = split_agreement(&s, (1.0, 1.5))?;
    if split < f64::from(s.ctx.digits()) / 2.0 {
        return Err(format!("split points agree to {split:.1} digits"));
    }

    conjugate_closure(&s)?;

    let mut worst_rep = f64::NEG_INFINITY;
    for _ in 0..3 {
        let discs = s.discriminants();
        let (d, r) = discs[rng.gen_range(0..discs.len())];
        worst_rep = worst_rep.max(representative_shift(&s, &lattice, d, r, &mut rng)?);
    }
    if worst_rep >= half {
        return Err(format!("representative change moves y by 1e{worst_rep:.1} mod L"));
    }

    let mut summary = format!(
        "invariance 1e{:.0}, dual {} digits, split {:.0} digits, closed, reps 1e{:.0}",
        worst_invariance.max(-999.0),
        fewest,
        split.min(999.0),
        worst_rep.max(-999.0)
    );
    if s.config.level == 3 {
        level3_alternative_generators(&s)?;
        summary.push_str(", alternative generators agree");
    }
    Ok(summary)
}

// ---------------------------------------------------------------- oracles

/// Reduced forms of discriminant `disc` by exhaustive search over a box,
/// reducing each hit with a textbook loop written independently here.
pub fn brute_force_classes(disc: i64) -> BTreeSet<(i64, i64, i64)> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    fn reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
        loop {
            if b > a || b <= -a {
                // shift z -> z + k to bring b into (-a, a]
                let k = (a - b).div_euclid(2 * a);
                c += k * b + k * k * a;
                b += 2 * k * a;
                continue;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return (a, b, c);
        }
    }
    let bound = -disc;
    let mut out = BTreeSet::new();
    for a in 1..=bound {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if gcd(gcd(a, b), c) == 1 {
                out.insert(reduce(a, b, c));
            }
        }
    }
    out
}

pub fn class_enumeration_oracle() -> Check {
    let mut tested = 0;
    for d in (1..200).map(|x| -x) {
        if !heegner::arith::is_fundamental(d) {
            continue;
        }
        let ours: BTreeSet<(i64, i64, i64)> = class_representatives(d)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|QuadForm { a, b, c }| (a, b, c))
            .collect();
        let brute = brute_force_classes(d);
        if ours != brute {
            return Err(format!("D={d}: {ours:?} vs {brute:?}"));
        }
        tested += 1;
    }
    Ok(format!("{tested} fundamental discriminants"))
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize, bits: u32) -> Vec<(Float, Float)> {
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = Float::with_val(bits, &pi * (4.0 * i as f64 - 1.0)) / (4.0 * n as f64 + 2.0);
        let mut x = guess.cos();
        let mut derivative = Float::with_val(bits, 0);
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = Float::with_val(bits, 1);
            let mut p1 = x.clone();
            for k in 2..=n {
                let k = k as f64;
                let p2 = (Float::with_val(bits, &x * &p1) * (2.0 * k - 1.0) - Float::with_val(bits, &p0 * (k - 1.0))) / k;
                p0 = p1;
                p1 = p2;
            }
            let one_minus = Float::with_val(bits, 1) - Float::with_val(bits, x.square_ref());
            derivative = (Float::with_val(bits, &p0 - Float::with_val(bits, &x * &p1)) * n as f64) / &one_minus;
            let step = Float::with_val(bits, &p1 / &derivative);
            x -= &step;
            if step.is_zero() || log10_abs(&step) < -(bits as f64) * std::f64::consts::LOG10_2 + 2.0 {
                break;
            }
        }
        let one_minus = Float::with_val(bits, 1) - Float::with_val(bits, x.square_ref());
        let weight = Float::with_val(bits, 2) / (one_minus * Float::with_val(bits, derivative.square_ref()));
        out.push((x, weight));
    }
    out
}

/// Adaptive Gauss-Legendre integral of `g` along the segment [from, to].
pub fn adaptive_segment<G>(g: &G, from: &Complex, to: &Complex, digits: u32, bits: u32) -> Complex
where
    G: Fn(&Complex) -> Complex,
{
    let rule = gauss_legendre(24, bits);
    let panel = |a: &Complex, b: &Complex| {
        let half = Complex::with_val(bits, b - a) / 2u32;
        let mid = Complex::with_val(bits, a + b) / 2u32;
        let mut sum = Complex::new(bits);
        for (x, w) in &rule {
            let z = Complex::with_val(bits, &half * x) + &mid;
            sum += g(&z) * w;
        }
        sum * half
    };
    fn recurse<P: Fn(&Complex, &Complex) -> Complex>(
        panel: &P,
        a: &Complex,
        b: &Complex,
        whole: Complex,
        tol: f64,
        depth: u32,
        bits: u32,
    ) -> Complex {
        let mid = Complex::with_val(bits, a + b) / 2u32;
        let left = panel(a, &mid);
        let right = panel(&mid, b);
        let split = Complex::with_val(bits, &left + &right);
        let diff = abs(&Complex::with_val(bits, &split - &whole));
        if depth == 0 || diff.is_zero() || log10_abs(&diff) < tol {
            return split;
        }
        let l = recurse(panel, a, &mid, left, tol, depth - 1, bits);
        let r = recurse(panel, &mid, b, right, tol, depth - 1, bits);
        l + r
    }
    let whole = panel(from, to);
    let scale = log10_abs(&abs(&whole)).max(-300.0);
    recurse(&panel, from, to, whole, scale - f64::from(digits), 12, bits)
}

/// Power integrals against quadrature of f(z) z^m along the segment between
/// a split point and its image, for random gamma in Gamma_0(N) and m.
pub fn power_integral_oracle(label: &str, digits: u32, count: usize, seed: u64) -> Check {
    let mut config = RunConfig::preset(label).expect("preset");
    config.terms = TermSetting::Auto;
    config.digits = digits;
    let s = Session::new(config).map_err(|e| e.to_string())?;
    let ctx = s.ctx;
    let bits = ctx.bits();
    let top = (s.form.weight() - 2) as usize;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut fewest = u32::MAX;
    let mut done = 0;
    while done < count {
        let [[a, b], [c, d]] = random_gamma0(s.config.level, &mut rng);
        if c == 0 {
            continue;
        }
        let (a, b, c, d) = if c < 0 { (-a, -b, -c, -d) } else { (a, b, c, d) };
        let tau = Complex::with_val(bits, (Float::with_val(bits, -d) / c, Float::with_val(bits, 1) / c));
        let image = (Complex::with_val(bits, &tau * a) + b) / (Complex::with_val(bits, &tau * c) + d);
        let m = rng.gen_range(0..=top);
        let at_tau = iterated_integrals(&s.form, &tau, top + 1, &ctx).map_err(|e| e.to_string())?;
        let at_image = iterated_integrals(&s.form, &image, top + 1, &ctx).map_err(|e| e.to_string())?;
        let ours = power_integral(m, &image, &at_image) - power_integral(m, &tau, &at_tau);
        let integrand = |z: &Complex| {
            let fz = evaluate(&s.form, z, &ctx).expect("evaluation");
            fz * Complex::with_val(bits, z).pow(m as u32)
        };
        let quad = adaptive_segment(&integrand, &tau, &image, ctx.digits(), bits);
        let agree = agreed_digits(&Complex::with_val(bits, ours), &quad, ctx.working_digits());
        fewest = fewest.min(agree);
        done += 1;
    }
    if fewest < digits / 2 {
        return Err(format!("quadrature agrees to only {fewest} digits"));
    }
    Ok(format!("{count} integrals, >= {fewest} digits"))
}

/// p(m, x) from repeated raising operators: starting from q^n with weight
/// 2 - 2m, d_w(q^n X^j) = q^n (n X^j + (j - w) X^(j+1)) with X = 1/(4 pi y),
/// applied m - 1 times and read off at n = 1.
pub fn raising_operator_polynomial(m: u32) -> Vec<i64> {
    let mut poly = vec![1i64];
    let mut w = 2 - 2 * m as i64;
    for _ in 1..m {
        let mut next = vec![0i64; poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j] += c;
            next[j + 1] += c * (j as i64 - w);
        }
        poly = next;
        w += 2;
    }
    poly
}

pub fn p_polynomial_oracle(max_m: u32) -> Check {
    for m in 1..=max_m {
        let expected = raising_operator_polynomial(m);
        let ours: Vec<(u32, i64)> = p_polynomial_coefficients(m)
            .into_iter()
            .map(|(l, c)| (l, c.to_i64().expect("small")))
            .collect();
        let shifted: Vec<(u32, i64)> = expected
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(j, c)| (m + j as u32, *c))
            .collect();
        if ours != shifted {
            return Err(format!("m={m}: {ours:?} vs {shifted:?}"));
        }
    }
    Ok(format!("m = 1..={max_m}"))
}

/// alpha against alpha_direct on every representative of (N, D, r).
pub fn alpha_cross_check(label: &str, disc: i64, r: i64) -> Check {
    let s = session(label);
    let points = heegner_representatives(s.config.level, disc, r).map_err(|e| e.to_string())?;
    let mut fewest = u32::MAX;
    for p in &points {
        fewest = fewest.min(dual_formula_digits(&s, p)?);
    }
    if fewest < s.ctx.digits() / 2 {
        return Err(format!("only {fewest} digits"));
    }
    Ok(format!("{} representatives, >= {fewest} digits", points.len()))
}
