//! Special functions and nonsingular general solutions.

pub mod bessel;
pub mod general;

pub use bessel::{bessel_i0, bessel_i1, bessel_j0, bessel_j1, bessel_y0, bessel_y1};
pub use general::{
    eval_at_offset, eval_general_solution, eval_general_solution_dr, eval_gradient_2d,
    max_relative_residual, residual_at, Aux, Family, GeneralSolution, KernelVariant, Residual,
};
