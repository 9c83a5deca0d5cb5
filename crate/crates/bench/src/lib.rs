//! Shared fixtures for the kernel benchmarks.

use heegner::quadforms::heegner_representatives;
use heegner::{HeegnerPoint, Session};

/// Preset session with its first Heegner representative of discriminant `disc`.
pub fn fixture(label: &str, disc: i64) -> (Session, HeegnerPoint) {
    let session = Session::preset(label).expect("shipped preset");
    let r = session.root_for(disc).expect("square root mod 4N");
    let point = heegner_representatives(session.config.level, disc, r).expect("representatives")[0].clone();
    (session, point)
}
