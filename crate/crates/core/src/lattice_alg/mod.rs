//! Exact integer linear algebra: determinants, Smith and Hermite forms,
//! cokernels of integer matrices and affine lattice solving.

pub mod hermite;
pub mod matrix;
pub mod rational;
pub mod smith;

pub use hermite::{hermite_normal_form, HermiteDecomposition};
pub use matrix::{ints, vec_add, vec_neg, vec_sub, IntMatrix, RationalMatrix};
pub use rational::{
    ceil, floor, format_qvector, format_rational, fract, int_to_rat, ints_to_rats, parse_rational, rat, sign_of,
    to_integral, zero_qvector, QVector, Rational,
};
pub use smith::{
    cokernel, smith_normal_form, solve_affine_lattice, solve_affine_rational, solve_integer, AbelianQuotient,
    AffineSolution, SmithDecomposition,
};
