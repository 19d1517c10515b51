//! Conductor exponents and lowered levels.

pub mod level;
pub mod table1;
pub mod tate;

pub use level::{
    a1_exponents_for_valuation, a1_family_levels, default_context, lowered_level, A1Level,
    LevelContext, LoweredLevel,
};
pub use table1::{classify_table1, ConductorProfile, GAMMAS};
pub use tate::{conductor, tate, tate_exponent, Kodaira, TateResult};
