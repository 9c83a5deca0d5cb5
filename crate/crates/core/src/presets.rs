//! Shipped example configurations: coefficient data, generator sets, run
//! parameters and the published reference values they are checked against.

use crate::config::{FormSource, GeneratorSource, JacobiReference, RootPolicy, RunConfig, TSetting, TermSetting};
use crate::relations::AnchorSpec;

pub const NAMES: [&str; 5] = ["s10n3", "s18n1", "s4n13", "s4n21", "s12n4"];

pub fn coefficient_text(label: &str) -> Option<&'static str> {
    Some(match label {
        "s10n3" => include_str!("../data/s10n3.coeffs"),
        "s18n1" => include_str!("../data/s18n1.coeffs"),
        "s4n13" => include_str!("../data/s4n13.coeffs"),
        "s4n21" => include_str!("../data/s4n21.coeffs"),
        "s12n4" => include_str!("../data/s12n4.coeffs"),
        _ => return None,
    })
}

pub fn generator_text(label: &str) -> Option<&'static str> {
    Some(match label {
        "s10n3" => include_str!("../data/gens/s10n3.gens"),
        "s18n1" => include_str!("../data/gens/s18n1.gens"),
        "s4n13" => include_str!("../data/gens/s4n13.gens"),
        "s4n21" => include_str!("../data/gens/s4n21.gens"),
        "s12n4" => include_str!("../data/gens/s12n4.gens"),
        _ => return None,
    })
}

/// Published lattice basis: (Re, Im) of omega_1 and omega_2.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceBasis {
    pub omega1: (f64, f64),
    pub omega2: (f64, f64),
}

// literals kept exactly as published
#[allow(clippy::excessive_precision)]
pub fn reference_basis(label: &str) -> Option<ReferenceBasis> {
    Some(match label {
        "s10n3" => ReferenceBasis {
            omega1: (0.0, -0.00088850361439085),
            omega2: (0.00002189032158611, 0.0),
        },
        "s18n1" => ReferenceBasis {
            omega1: (0.0, 0.001831876775870191761),
            omega2: (0.000000000519923858624, 0.0),
        },
        "s4n13" => ReferenceBasis {
            omega1: (0.0, 0.003124357726009878347400865279),
            omega2: (-0.04271662498543992056668379773, -0.001562178863004939178984383052),
        },
        "s4n21" => ReferenceBasis {
            omega1: (0.0, 0.012130626847574141),
            omega2: (-0.03257318919429172, 0.0),
        },
        "s12n4" => ReferenceBasis {
            omega1: (0.0, 0.000960627675025996),
            omega2: (-0.02998129737318938, 0.0),
        },
        _ => return None,
    })
}

const TABLE_S10N3: &[(i64, i64)] = &[
    (-8, 2), (-11, -5), (-20, 8), (-23, 8), (-35, 42), (-47, -48), (-56, 0), (-59, -155),
    (-68, 160), (-71, 40), (-83, 353), (-95, 280), (-104, 380), (-107, -507), (-116, -40),
    (-119, -560), (-131, 235), (-143, -376), (-152, -364), (-155, -64), (-164, -1440),
    (-167, 1528), (-179, 2635), (-191, -400),
];

const TABLE_S18N1: &[(i64, i64)] = &[
    (-3, 1), (-4, -2), (-7, -16), (-8, 36), (-11, 99), (-15, -240), (-19, -253), (-20, -1800),
    (-23, 2736), (-24, -1464), (-31, -6816), (-35, 27270), (-39, -6864), (-40, 39880),
    (-43, -66013), (-47, 44064), (-51, 108102), (-52, -93704), (-55, -22000), (-56, 80784),
    (-59, -281943), (-67, 659651), (-68, 193392), (-71, -84816), (-79, -109088), (-83, -22455),
    (-84, -484368), (-87, 1050768), (-88, 143176), (-91, 195910), (-95, -370800),
];

const TABLE_S4N13: &[(i64, i64)] = &[
    (-3, 1), (-4, -1), (-23, 2), (-35, -7), (-40, 3), (-43, -17), (-51, 9), (-55, -6), (-56, 1),
    (-68, -5), (-79, 4), (-87, -6), (-88, 10), (-95, 4), (-103, -8), (-107, 4), (-116, -8),
    (-120, -13), (-127, 14), (-131, -3), (-139, 29), (-152, 2), (-155, 22), (-159, -6),
    (-168, -21), (-179, -17), (-183, -2), (-191, -10), (-199, 4),
];

const TABLE_S4N21: &[(i64, i64)] = &[
    (-3, 1), (-20, -1), (-24, -1), (-35, 0), (-47, 2), (-56, 0), (-59, 1), (-68, -2), (-83, 5),
    (-84, 0), (-87, -4), (-104, -3), (-111, 4), (-119, 0), (-131, 3), (-132, 8), (-143, 2),
    (-152, -7), (-159, 0), (-164, -2), (-167, 4), (-168, 0), (-195, 8),
];

const TABLE_S12N4: &[(i64, i64)] = &[
    (-7, 1), (-15, 5), (-23, -3), (-31, -50), (-39, -35), (-47, 186), (-55, 215), (-71, -315),
    (-79, -10), (-87, -497), (-95, 405), (-103, 1649), (-111, -765), (-119, -90), (-127, 2664),
    (-143, -3729), (-151, -505), (-159, -2825), (-167, 3819), (-183, 2539), (-191, 1830),
    (-199, -5755),
];

/// Published (D, m_D) table for a preset.
pub fn reference_table(label: &str) -> Option<&'static [(i64, i64)]> {
    Some(match label {
        "s10n3" => TABLE_S10N3,
        "s18n1" => TABLE_S18N1,
        "s4n13" => TABLE_S4N13,
        "s4n21" => TABLE_S4N21,
        "s12n4" => TABLE_S12N4,
        _ => return None,
    })
}

pub fn preset(label: &str) -> Option<RunConfig> {
    let base = |level: u64, weight: u32, digits: u32, terms: TermSetting, anchor: AnchorSpec, t: u32, disc_bound: i64| RunConfig {
        label: label.to_string(),
        form: FormSource::Builtin(label.to_string()),
        level,
        weight,
        digits,
        terms,
        generators: GeneratorSource::Builtin(label.to_string()),
        anchor,
        t: TSetting::Fixed(t),
        disc_bound,
        coprime_only: false,
        roots: RootPolicy::default(),
        weighted: true,
        reference_disc: None,
        waldspurger_tol: 1e-3,
        l_digits: None,
        height_bound: None,
        jacobi: JacobiReference::PrintedTable,
        output: None,
    };
    let anchor = |disc: i64, divisor: u32| AnchorSpec {
        disc,
        root: None,
        divisor,
    };
    Some(match label {
        "s10n3" => RunConfig {
            coprime_only: true,
            reference_disc: Some(-8),
            ..base(3, 10, 60, TermSetting::Fixed(100), anchor(-8, 2), 1, 200)
        },
        "s18n1" => RunConfig {
            reference_disc: Some(-3),
            jacobi: JacobiReference::Index1Weight10,
            ..base(1, 18, 200, TermSetting::Fixed(100), anchor(-3, 1), 1, 100)
        },
        "s4n13" => RunConfig {
            coprime_only: true,
            reference_disc: Some(-3),
            jacobi: JacobiReference::Index13,
            ..base(13, 4, 28, TermSetting::Fixed(250), anchor(-3, 1), 3, 200)
        },
        "s4n21" => RunConfig {
            weighted: false,
            reference_disc: Some(-20),
            ..base(21, 4, 40, TermSetting::Auto, anchor(-3, 1), 1, 200)
        },
        "s12n4" => RunConfig {
            reference_disc: Some(-7),
            ..base(4, 12, 80, TermSetting::Fixed(200), anchor(-7, 1), 1, 200)
        },
        _ => return None,
    })
}
