//! Polynomials over the rationals, Groebner bases and vanishing ideals of
//! designs.

mod basis;
mod points;
mod polynomial;

pub use basis::{buchberger, divide, normal_form, s_polynomial, GroebnerBasis, GroebnerRecord};
pub use points::{algebraic_fan, certify_vanishing_ideal, vanishing_ideal, SweepOptions};
pub use polynomial::{Polynomial, PolynomialRecord, TermRecord};
