//! Exact arithmetic around the denominator of the Eisenstein class of SL2(Z):
//! Hecke lifts of modular symbols, the rational Eisenstein cocycle, p-adic
//! L-value combinations, higher Rademacher symbols and partial zeta values of
//! real quadratic orders.

pub mod acceptance;
pub mod arith;
pub mod eis_eval;
pub mod linalg;
pub mod modsym;
pub mod numeric;
pub mod padic;
pub mod quadfield;
pub mod report;
pub mod sympoly;
