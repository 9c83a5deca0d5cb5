use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use heegner::config::TermSetting;
use heegner::forms::build_level1_weight18;
use heegner::pipeline::{format_complex, format_float};
use heegner::{RunConfig, Session};

#[derive(Parser)]
#[command(name = "heegner", version, about = "Heegner-point lines on modular Jacobians")]
struct Cli {
    /// Run configuration (`key = value` lines).
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Shipped example: s10n3, s18n1, s4n13, s4n21, s12n4.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Override the decimal precision.
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Override the number of q-expansion terms (or `auto`).
    #[arg(long, global = true)]
    terms: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Period lattice basis.
    Lattice,
    /// Integer coordinates (m, n) of every line point.
    Table,
    /// Compare the table with Jacobi coefficients or central L-values.
    Verify {
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Write a coefficient file for a form built from Eisenstein series.
    GenForm {
        #[arg(long)]
        builtin: String,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Jacobi,
    Waldspurger,
}

const SHOWN_DIGITS: usize = 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(k) = cli.parallel {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut out = output(cli.out.as_deref())?;
    let ok = match &cli.command {
        Command::GenForm { builtin, count } => gen_form(builtin, *count, &mut out)?,
        Command::Lattice => lattice(&session(&cli)?, &mut out)?,
        Command::Table => table(&session(&cli)?, &mut out)?,
        Command::Verify { mode } => verify(&session(&cli)?, *mode, &mut out)?,
    };
    out.flush()?;
    Ok(ok)
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn session(cli: &Cli) -> anyhow::Result<Session> {
    let mut config = match (&cli.config, &cli.preset) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(name)) => RunConfig::preset(name)?,
        (None, None) => bail!("pass --config PATH or --preset NAME"),
    };
    if let Some(d) = cli.digits {
        config.digits = d;
    }
    if let Some(t) = &cli.terms {
        config.terms = match t.as_str() {
            "auto" => TermSetting::Auto,
            n => TermSetting::Fixed(n.parse().with_context(|| format!("--terms expects a count or `auto`, got {n:?}"))?),
        };
    }
    config.validate()?;
    Ok(Session::new(config)?)
}

fn lattice(session: &Session, out: &mut dyn Write) -> anyhow::Result<bool> {
    let outcome = session.lattice(&session.ctx)?;
    let lat = &outcome.lattice;
    let (w1_re, w1_im) = format_complex(lat.omega1(), SHOWN_DIGITS);
    let (w2_re, w2_im) = format_complex(lat.omega2(), SHOWN_DIGITS);
    let (tau_re, tau_im) = format_complex(&lat.ratio(), SHOWN_DIGITS);
    let (j_re, j_im) = format_complex(&lat.j_invariant(&session.ctx), SHOWN_DIGITS);
    let worst = outcome.membership.iter().cloned().fold(0.0, f64::max);
    let cfg = &session.config;
    writeln!(out, "key\tvalue")?;
    for (key, value) in [
        ("label", cfg.label.clone()),
        ("level", cfg.level.to_string()),
        ("weight", cfg.weight.to_string()),
        ("digits", cfg.digits.to_string()),
        ("periods", outcome.periods.len().to_string()),
        ("omega1_re", w1_re),
        ("omega1_im", w1_im),
        ("omega2_re", w2_re),
        ("omega2_im", w2_im),
        ("ratio_re", tau_re),
        ("ratio_im", tau_im),
        ("j_re", j_re),
        ("j_im", j_im),
        ("membership_residual", format!("{worst:.3e}")),
    ] {
        writeln!(out, "{key}\t{value}")?;
    }
    Ok(true)
}

fn table(session: &Session, out: &mut dyn Write) -> anyhow::Result<bool> {
    let report = session.table()?;
    eprintln!("t = {}", report.t);
    writeln!(out, "D\tr\tm\tn\tresidual\tstable")?;
    let mut ok = true;
    for row in &report.rows {
        match &row.fit {
            Ok(fit) => {
                ok &= fit.stable;
                writeln!(out, "{}\t{}\t{}\t{}\t{:.3e}\t{}", row.disc, row.root, fit.m, fit.n, fit.residual, fit.stable)?;
            }
            Err(msg) => {
                ok = false;
                eprintln!("D = {}: {msg}", row.disc);
                writeln!(out, "{}\t{}\tNA\tNA\tNA\tfalse", row.disc, row.root)?;
            }
        }
    }
    Ok(ok)
}

fn verify(session: &Session, mode: Mode, out: &mut dyn Write) -> anyhow::Result<bool> {
    let table = session.table()?;
    for row in &table.rows {
        if let Err(msg) = &row.fit {
            eprintln!("D = {}: {msg}", row.disc);
        }
    }
    match mode {
        Mode::Jacobi => {
            let report = session.jacobi(&table)?;
            let level = session.config.level as i64;
            eprintln!("scalar = {}", report.scalar);
            writeln!(out, "D\tr\tn\tm\tc\tmatch")?;
            for row in &report.rows {
                let n = (-row.disc + row.root * row.root) / (4 * level);
                writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", row.disc, row.root, n, row.m, row.c, row.ok)?;
            }
            if !report.missing.is_empty() {
                eprintln!("discriminants in only one table: {:?}", report.missing);
            }
            if let Some(ok) = report.half_integral_ok {
                eprintln!("half-integral weight form agrees: {ok}");
            }
            Ok(report.all_match())
        }
        Mode::Waldspurger => {
            let report = session.waldspurger(&table)?;
            if !report.skipped.is_empty() {
                eprintln!("skipped (gcd(D, N) > 1): {:?}", report.skipped);
            }
            writeln!(out, "D\tm\tL_value\tratio\texpected_ratio\trel_err\tpass")?;
            for row in &report.rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{:.12e}\t{:.12e}\t{:.3e}\t{}",
                    row.disc,
                    row.m,
                    format_float(&row.l_value, SHOWN_DIGITS),
                    row.ratio,
                    row.expected_ratio,
                    row.rel_err,
                    row.pass
                )?;
            }
            Ok(report.all_pass())
        }
    }
}

fn gen_form(name: &str, count: usize, out: &mut dyn Write) -> anyhow::Result<bool> {
    if name != "s18n1" {
        bail!("only s18n1 can be generated (level 1 weight 18 from E4, E6)");
    }
    let form = build_level1_weight18(count)?;
    writeln!(out, "level 1 weight 18 label s18n1")?;
    for n in 1..=form.available_terms() {
        writeln!(out, "{n} {}", form.coefficient(n))?;
    }
    Ok(true)
}
