//! Finite-dimensional factor algebras of `F2[X1, .., Xn]`: construction,
//! automorphism groups, and the subalgebra of elements every automorphism
//! fixes.
//!
//! Two ideal families are supported: powers `m^{r+1}` of the maximal ideal
//! `m = (X1, .., Xn)`, and the field ideal `(X1^2 + X1, .., Xn^2 + Xn)`.

pub mod algebra;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod monomial;
pub mod morphisms;

pub use algebra::{Algebra, AlgebraId, Element, IdealKind, IdealSpec, DEFAULT_DIM_CAP, MAX_DIM};
pub use error::{Error, Result};
pub use invariants::{
    fixed_subalgebra, fixed_subalgebra_streamed, gl_order, nilradical, socle, verify_grid, verify_instance, Check, CheckBasis,
    FixedSubalgebra, GridReport, VerificationReport,
};
pub use linalg::{intersect, kernel_basis, rank, solve_homogeneous, BitMatrix, Subspace};
pub use monomial::Monomial;
pub use morphisms::{
    choose_method, compose, enumerate_automorphisms_bruteforce, enumerate_automorphisms_structured,
    make_endomorphism, transvection, AutomorphismGroup, Budgets, Endomorphism, Method,
};
