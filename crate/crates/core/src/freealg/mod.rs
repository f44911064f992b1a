//! The free algebra `Q(A)<X_1, ..., X_n>` and the twist operators acting on it.

mod poly;
mod system;
mod twist;
mod word;

pub use poly::NCPolynomial;
pub use system::{Sign, TwistSystem};
pub use twist::{
    a_commutator, apply_operator_word, apply_twist, free_identity_check, predicted_degree,
    relator_elements, relator_elements_labeled, torus_coxeter_relators, OperatorWord, RelatorTarget,
    Presentation, RelatorKind, DEFAULT_DEGREE_CAP,
};
pub use word::Word;
