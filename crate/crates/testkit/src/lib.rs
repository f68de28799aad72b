//! Independent oracles and random generators shared by the moodkit test
//! suites. Nothing here calls into the code paths it is used to check.

pub mod gen;
pub mod invariants;
pub mod mood_oracle;
pub mod ols_oracle;
pub mod quadrature;
