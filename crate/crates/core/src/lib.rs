//! Exact computations behind rational blow-down constructions of symplectic
//! 4-manifolds with `b₂⁺ = 1`.
//!
//! The crate is layered bottom-up:
//!
//! * [`ratmath`]: exact rationals, matrices and a certificate-producing
//!   feasibility solver;
//! * [`lattice`]: the odd lattice `⟨1⟩ ⊕ n⟨−1⟩` of `CP² # n·CP̄²`;
//! * [`plumbing`]: plumbing trees, the linear configurations `C_p` and the
//!   `Ẽ₆` fiber;
//! * [`cone`]: symbolic symplectic classes, dual-basis restriction and
//!   positivity certification over the symplectic cone;
//! * [`invariants`]: characteristic numbers and their transforms;
//! * [`report`]: end-to-end scenario pipelines and their reports.

pub mod cone;
pub mod invariants;
pub mod lattice;
pub mod plumbing;
pub mod ratmath;
pub mod report;
