//! Whole-library checks: brute-force recomputation and randomized properties.
//! They live in the unit-test binary so they run ahead of the acceptance suite.

mod oracles;
mod properties;
