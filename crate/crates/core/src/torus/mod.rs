//! The skein algebra of the one-holed torus: normal forms in `x^a y^b z^c`,
//! the Dehn twist action, curves, the boundary element and the map `psi`
//! from the free algebra on two generators.

mod action;
mod curve;
mod element;
pub mod rewrite;

pub use action::{
    boundary_element, curve_element, curve_element_with, equivariance_check, psi,
    psi_of_operator_image, twist_auto, twist_formula, twist_word_auto, witness,
    witness_boundary, witness_with_cap, z_prime,
};
pub use curve::{curve_matrix_action, euclid_twist_word, intersection, Curve, Twist, TwistMatrix};
pub use element::{clear_product_cache, t_mul, word_product, Gen, Monomial, TorusElement};
pub use rewrite::{nf_reduce, normal_form, Reduction, Strategy};
