pub mod divisor;
pub mod exact_arith;
pub mod fourier_jacobi;
pub mod geometry;
pub mod symplectic;
pub mod verifier;
