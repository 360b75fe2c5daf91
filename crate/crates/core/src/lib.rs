pub mod admissibility;
pub mod exponents;
pub mod functionals;
pub mod harness;
pub mod interp;
pub mod quadrature;
pub mod spaces;
pub mod special;
