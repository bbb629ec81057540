//! Gontcharoff polynomials `Q(x, x_0, ..., x_{n-1})`: the degree-`n`
//! polynomial with `Q^{(n)} = 1`, `Q(x_0) = 0` and `Q^{(m)}(x_m) = 0`,
//! and the interpolation series built from them.

mod expansion;
mod nodes;
mod polynomial;

pub use expansion::{generalized_taylor, zero_propagation_bound, ExpansionResult, ZeroPropagationBound};
pub use nodes::{parse_exact, rational_string, NodeList, NodeListJson};
pub use polynomial::{gontcharoff_poly, sandwich_check, BoundaryResidual, GontcharoffPolynomial, PolynomialJson, SandwichCheck};
