//! Finite fields, polynomials over them, and rational functions.

mod embed;
mod factor;
mod gf;
mod legendre;
mod parse;
mod poly;
mod poly2;
mod rational;

pub use embed::{norm_to_base, trace_to_base, Embedding};
pub use factor::{
    distinct_degree, equal_degree, factor_univariate, find_roots, is_irreducible, monic_irreducibles,
    squarefree_decomposition, Factorization,
};
pub use gf::{field_arith, is_prime, Elem, FieldOp, FiniteFieldElement, GaloisField, MAX_FIELD_ORDER};
pub use legendre::legendre_symbol;
pub use parse::{parse_poly, parse_poly2, parse_ratfn, parse_rational};
pub use poly::Poly;
pub use poly2::Poly2;
pub use rational::{RatFn, RatFn2};
