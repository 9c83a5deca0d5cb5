//! End-to-end runs: lattice, line table, and the Jacobi / central-value
//! verifications built on them.

use std::sync::OnceLock;

use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};

use crate::arith::{gcd, is_fundamental};
use crate::config::{FormSource, GeneratorSource, JacobiReference, RunConfig, TSetting, TermSetting};
use crate::error::{Error, Result};
use crate::forms::{build_level1_weight18, compute_sign_epsilon, load_coefficients, parse_coefficients, NewformData, SignEpsilon};
use crate::heegner::{line_point_from, LinePoint, WeightPolicy};
use crate::jacobi::{half_integral_form, jacobi_coefficient, phi_index13, phi_index1_weight10, JacobiCoefficients, SeriesJacobiForm};
use crate::lfunctions::{waldspurger_check, WaldspurgerReport};
use crate::numerics::{frac_distance, PrecisionContext, DEFAULT_BUMP_DIGITS};
use crate::periods::{all_periods, lattice_from_periods, GeneratorSet, PeriodLattice};
use crate::presets;
use crate::quadforms::{first_positive_root, heegner_representatives};
use crate::relations::{default_height_bound, fit_line, LineData, LineFit};

const AUTO_T_LIMIT: u32 = 12;
const LEVEL1_WEIGHT18_TERMS: usize = 1000;

pub struct Session {
    pub config: RunConfig,
    pub form: NewformData,
    pub generators: GeneratorSet,
    pub ctx: PrecisionContext,
    sign: OnceLock<SignEpsilon>,
}

impl Session {
    pub fn new(config: RunConfig) -> Result<Self> {
        let form = match &config.form {
            FormSource::Builtin(label) => {
                let text = presets::coefficient_text(label)
                    .ok_or_else(|| Error::Config(format!("no builtin coefficient data {label:?}")))?;
                parse_coefficients(text, label)?
            }
            FormSource::Level1Weight18 => build_level1_weight18(LEVEL1_WEIGHT18_TERMS)?,
            FormSource::File(path) => load_coefficients(path)?,
        };
        if form.level() != config.level || form.weight() != config.weight {
            return Err(Error::Config(format!(
                "form has level {} weight {}, configuration expects level {} weight {}",
                form.level(),
                form.weight(),
                config.level,
                config.weight
            )));
        }
        let form = form.with_term_limit(match config.terms {
            TermSetting::Auto => None,
            TermSetting::Fixed(m) => Some(m),
        });
        let generators = match &config.generators {
            GeneratorSource::Builtin(label) => {
                let text = presets::generator_text(label)
                    .ok_or_else(|| Error::Config(format!("no builtin generator set {label:?}")))?;
                GeneratorSet::parse(text, config.level, label)?
            }
            GeneratorSource::File(path) => GeneratorSet::load(path, config.level)?,
        };
        let ctx = PrecisionContext::new(config.digits)?;
        Ok(Self {
            config,
            form,
            generators,
            ctx,
            sign: OnceLock::new(),
        })
    }

    pub fn preset(label: &str) -> Result<Self> {
        Self::new(RunConfig::preset(label)?)
    }

    pub fn sign(&self) -> Result<SignEpsilon> {
        if let Some(s) = self.sign.get() {
            return Ok(*s);
        }
        let s = compute_sign_epsilon(&self.form, &self.ctx)?;
        Ok(*self.sign.get_or_init(|| s))
    }

    pub fn root_for(&self, disc: i64) -> Option<i64> {
        self.config
            .roots
            .overrides
            .get(&disc)
            .copied()
            .or_else(|| first_positive_root(self.config.level, disc))
    }

    /// Configured (D, r) pairs ordered by |D|.
    pub fn discriminants(&self) -> Vec<(i64, i64)> {
        let level = self.config.level as i64;
        (1..self.config.disc_bound)
            .map(|a| -a)
            .filter(|&d| is_fundamental(d))
            .filter(|&d| !self.config.coprime_only || gcd(d, level) == 1)
            .filter_map(|d| self.root_for(d).map(|r| (d, r)))
            .collect()
    }

    pub fn lattice(&self, ctx: &PrecisionContext) -> Result<LatticeOutcome> {
        let periods = all_periods(&self.form, &self.generators, ctx)?;
        let mut with_conjugates = periods.clone();
        with_conjugates.extend(periods.iter().map(|p| Complex::with_val(ctx.bits(), p.conj_ref())));
        let lattice = lattice_from_periods(&with_conjugates, ctx)?;
        let membership = periods
            .iter()
            .map(|p| {
                let (x, y) = lattice.coordinates(p);
                frac_distance(&x).max(&frac_distance(&y)).to_f64()
            })
            .collect();
        Ok(LatticeOutcome {
            lattice,
            periods,
            membership,
        })
    }

    fn weight_policy(&self) -> WeightPolicy {
        WeightPolicy {
            weighted: self.config.weighted,
        }
    }

    pub fn line_point(&self, disc: i64, r: i64, ctx: &PrecisionContext) -> Result<LinePoint> {
        let points = heegner_representatives(self.config.level, disc, r)?;
        line_point_from(&self.form, disc, r, &points, self.weight_policy(), ctx)
    }

    fn anchor_value(&self, ctx: &PrecisionContext) -> Result<(Complex, f64)> {
        let spec = &self.config.anchor;
        let root = spec
            .root
            .or_else(|| self.root_for(spec.disc))
            .ok_or_else(|| Error::Config(format!("anchor discriminant {} is not a square mod 4N", spec.disc)))?;
        let point = self.line_point(spec.disc, root, ctx)?;
        Ok((Complex::with_val(ctx.bits(), &point.value / spec.divisor), point.accuracy))
    }

    /// Lattice, anchor and every configured line point at one precision.
    /// Points that fail are returned separately with their error text.
    pub fn line_data(&self, ctx: &PrecisionContext) -> Result<(LineData, Vec<(i64, i64, String)>)> {
        if self.sign()?.value != -1 {
            return Err(Error::TrivialSign);
        }
        let lattice = self.lattice(ctx)?.lattice;
        let (anchor, anchor_accuracy) = self.anchor_value(ctx)?;
        let results: Vec<(i64, i64, Result<LinePoint>)> = self
            .discriminants()
            .into_par_iter()
            .map(|(d, r)| (d, r, self.line_point(d, r, ctx)))
            .collect();
        let mut points = Vec::new();
        let mut failures = Vec::new();
        for (d, r, res) in results {
            match res {
                Ok(p) => points.push(p),
                Err(e) => failures.push((d, r, e.to_string())),
            }
        }
        Ok((
            LineData {
                points,
                anchor,
                anchor_accuracy,
                lattice,
            },
            failures,
        ))
    }

    pub fn table(&self) -> Result<TableReport> {
        let ctx = self.ctx;
        let high_ctx = ctx.bumped(DEFAULT_BUMP_DIGITS);
        let (base, failures) = self.line_data(&ctx)?;
        let (high, _) = self.line_data(&high_ctx)?;
        let bound = self.config.height_bound.clone().unwrap_or_else(|| default_height_bound(&ctx));
        let candidates: Vec<u32> = match self.config.t {
            TSetting::Fixed(t) => vec![t],
            TSetting::Auto => (1..=AUTO_T_LIMIT).collect(),
        };
        let mut chosen = None;
        for &t in &candidates {
            let fits = fit_line(&base, &high, t, &bound, &ctx, &high_ctx);
            let clean = fits.iter().all(|f| matches!(f, Ok(fit) if fit.stable));
            if clean || candidates.len() == 1 {
                chosen = Some((t, fits));
                break;
            }
        }
        let (t, fits) = chosen.ok_or_else(|| Error::Config(format!("no t <= {AUTO_T_LIMIT} gives stable fits")))?;
        let mut rows: Vec<TableRow> = base
            .points
            .iter()
            .zip(fits)
            .map(|(p, fit)| TableRow {
                disc: p.disc,
                root: p.root,
                fit: fit.map_err(|e| e.to_string()),
            })
            .collect();
        rows.extend(failures.into_iter().map(|(disc, root, msg)| TableRow {
            disc,
            root,
            fit: Err(msg),
        }));
        rows.sort_by_key(|r| (r.disc.abs(), r.root));
        Ok(TableReport {
            t,
            rows,
            lattice: base.lattice,
        })
    }

    pub fn waldspurger(&self, table: &TableReport) -> Result<WaldspurgerReport> {
        let reference = self
            .config
            .reference_disc
            .ok_or_else(|| Error::Config("no reference discriminant configured".into()))?;
        let rows = table.m_values();
        let ctx = PrecisionContext::new(self.config.l_digits())?;
        waldspurger_check(&self.form, &self.sign()?, &rows, reference, self.config.waldspurger_tol, &ctx)
    }

    pub fn jacobi(&self, table: &TableReport) -> Result<JacobiReport> {
        let computed = table.m_values();
        let level = self.config.level;
        let rows_with_roots: Vec<(i64, i64, Integer)> = table
            .rows
            .iter()
            .filter_map(|r| r.fit.as_ref().ok().map(|f| (r.disc, r.root, f.m.clone())))
            .collect();
        let source: Box<dyn JacobiCoefficients> = match self.config.jacobi {
            JacobiReference::PrintedTable => {
                let published = presets::reference_table(&self.config.label)
                    .ok_or_else(|| Error::Config(format!("no published table for {:?}", self.config.label)))?;
                return Ok(compare_with_published(&rows_with_roots, published));
            }
            JacobiReference::Index13 | JacobiReference::Index1Weight10 => {
                let n_max = rows_with_roots
                    .iter()
                    .map(|(d, r, _)| (-d + r * r) / (4 * level as i64))
                    .max()
                    .unwrap_or(1);
                let series = if self.config.jacobi == JacobiReference::Index13 {
                    if level != 13 {
                        return Err(Error::Config("the index-13 product needs N = 13".into()));
                    }
                    phi_index13(n_max)?
                } else {
                    if level != 1 {
                        return Err(Error::Config("the index-1 product needs N = 1".into()));
                    }
                    phi_index1_weight10(n_max)?
                };
                Box::new(SeriesJacobiForm { series, index: level })
            }
        };
        let anchor_disc = self.config.anchor.disc;
        let mut entries = Vec::new();
        for (d, r, m) in &rows_with_roots {
            let c = jacobi_coefficient(source.as_ref(), *d, *r)?.ok_or(Error::Truncated { n: (-d + r * r) / (4 * level as i64) })?;
            entries.push((*d, *r, m.clone(), c));
        }
        let (_, _, m0, c0) = entries
            .iter()
            .find(|(d, _, _, _)| *d == anchor_disc)
            .ok_or_else(|| Error::Config(format!("anchor discriminant {anchor_disc} missing from table")))?;
        if m0.is_zero() {
            return Err(Error::ZeroAnchor);
        }
        let scalar = Rational::from((c0.clone(), m0.clone()));
        let rows = entries
            .into_iter()
            .map(|(disc, root, m, c)| {
                let ok = Rational::from(&scalar * &m) == c;
                JacobiRow { disc, root, m, c, ok }
            })
            .collect();
        let half_integral = if self.form.k() % 2 == 1 && (level == 1 || is_prime(level)) {
            let m_max = computed.iter().map(|(d, _)| d.unsigned_abs()).max().unwrap_or(0);
            Some(half_integral_form(source.as_ref(), self.form.k(), m_max)?)
        } else {
            None
        };
        let half_integral_ok = half_integral.as_ref().map(|g| {
            computed
                .iter()
                .all(|(d, m)| g.coeffs.get(&d.unsigned_abs()).is_some_and(|c| Rational::from(&scalar * m) == *c))
        });
        Ok(JacobiReport {
            scalar,
            rows,
            missing: Vec::new(),
            half_integral_ok,
        })
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

fn compare_with_published(computed: &[(i64, i64, Integer)], published: &[(i64, i64)]) -> JacobiReport {
    let rows = published
        .iter()
        .filter_map(|&(d, expected)| {
            computed.iter().find(|(cd, _, _)| *cd == d).map(|(_, r, m)| JacobiRow {
                disc: d,
                root: *r,
                m: m.clone(),
                c: Integer::from(expected),
                ok: *m == expected,
            })
        })
        .collect();
    let missing = published
        .iter()
        .map(|(d, _)| *d)
        .filter(|d| computed.iter().all(|(cd, _, _)| cd != d))
        .chain(computed.iter().map(|(d, _, _)| *d).filter(|d| published.iter().all(|(pd, _)| pd != d)))
        .collect();
    JacobiReport {
        scalar: Rational::from(1),
        rows,
        missing,
        half_integral_ok: None,
    }
}

#[derive(Debug, Clone)]
pub struct LatticeOutcome {
    pub lattice: PeriodLattice,
    pub periods: Vec<Complex>,
    /// Distance of each raw period's lattice coordinates from integers.
    pub membership: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub disc: i64,
    pub root: i64,
    pub fit: std::result::Result<LineFit, String>,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub t: u32,
    pub rows: Vec<TableRow>,
    pub lattice: PeriodLattice,
}

impl TableReport {
    pub fn m_values(&self) -> Vec<(i64, Integer)> {
        self.rows
            .iter()
            .filter_map(|r| r.fit.as_ref().ok().map(|f| (r.disc, f.m.clone())))
            .collect()
    }

    pub fn all_stable(&self) -> bool {
        self.rows.iter().all(|r| matches!(&r.fit, Ok(f) if f.stable))
    }
}

#[derive(Debug, Clone)]
pub struct JacobiRow {
    pub disc: i64,
    pub root: i64,
    pub m: Integer,
    pub c: Integer,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct JacobiReport {
    /// c / m, fixed at the anchor discriminant.
    pub scalar: Rational,
    pub rows: Vec<JacobiRow>,
    /// Discriminants present in only one of the compared tables.
    pub missing: Vec<i64>,
    /// Whether the half-integral weight form agrees (when it applies).
    pub half_integral_ok: Option<bool>,
}

impl JacobiReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.ok) && self.missing.is_empty() && self.half_integral_ok != Some(false)
    }
}

/// Formats a float with `digits` significant digits in scientific notation.
pub fn format_float(x: &Float, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

pub fn format_complex(z: &Complex, digits: usize) -> (String, String) {
    (format_float(z.real(), digits), format_float(z.imag(), digits))
}
