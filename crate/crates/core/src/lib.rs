//! Heegner-point lines on Jacobians of modular curves.
//!
//! A weight-2k newform f with sign -1 gives a map from Heegner points on
//! X_0(N) to the torus C/L spanned by its period integrals. The images
//! y_{D,r} of Heegner divisors all lie on one line through a torsion point;
//! this crate computes the lattice, the points, their integer coordinates
//! m_D along the line, and checks those coordinates against Jacobi form
//! coefficients and central values of twisted L-functions.

pub mod arith;
pub mod config;
pub mod error;
pub mod forms;
pub mod heegner;
pub mod jacobi;
pub mod lfunctions;
pub mod lll;
pub mod numerics;
pub mod periods;
pub mod pipeline;
pub mod presets;
pub mod quadforms;
pub mod relations;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use forms::{NewformData, SignEpsilon};
pub use numerics::{BigComplex, PrecisionContext};
pub use periods::{GeneratorSet, PeriodLattice};
pub use pipeline::Session;
pub use quadforms::{HeegnerPoint, QuadForm};
