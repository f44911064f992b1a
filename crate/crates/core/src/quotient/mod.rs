//! Bounded-degree membership in two-sided ideals of the free algebra, with
//! certificates that can be checked by plain expansion.

mod certificate;
mod span;
mod transport;

pub use certificate::{CertEntry, Certificate};
pub use span::{
    build_span, build_span_with, member, reduce, word_count, Candidate, IdealSpan, Membership,
    SpanOptions, DEFAULT_WORD_BUDGET,
};
pub use transport::{
    minimal_transport_proof, prove_direct_member, prove_relator_member, transport_in_span, transport_proof,
    FactoredCertificate, FactoredEntry, MembershipProof, Route, TransportProof,
};
