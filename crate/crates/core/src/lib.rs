//! Rational solutions of the fourth Painlevé equation, the generalised
//! Hermite and Okamoto polynomials behind them, certified root finding and
//! the asymptotic lattice describing where the roots sit.

pub mod asymptotics;
pub mod exact_poly;
pub mod figures;
pub mod numeric;
pub mod oscillator;
pub mod rational_pw;
pub mod rootfind;
pub mod suites;
