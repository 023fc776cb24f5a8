//! Chow rings of multiprojective bundles over `P^n` and the isomorphism,
//! structure and automorphism questions they decide.
//!
//! A factor is a split bundle `O(d_1) ⊕ .. ⊕ O(d_k)` or the tangent bundle of
//! the base, given by a [`BundleDescriptor`]. [`ChowPresentation`] builds
//! `Z[t, u_1, .., u_r] / (t^{n+1}, G_1, .., G_r)` with exact normal forms;
//! [`fibration`] searches degree-one classes and ring isomorphisms;
//! [`classify`], [`symgeom`] and [`autdesc`] answer the classification
//! questions from descriptor data.

pub mod autdesc;
pub mod chowring;
pub mod classify;
pub mod cli;
pub mod error;
pub mod expr;
pub mod fibration;
mod linalg;
pub mod par;
pub mod poly;
pub mod spec;
pub mod symgeom;

pub use autdesc::{describe_aut_multi, describe_aut_sym, dim_aut_fiberwise, h0_line, ComponentOrder, GroupDescriptor, GroupExpr};
pub use chowring::{chern_of_descriptor, grothendieck_relation, BundleDescriptor, ChernClass, ChowElement, ChowPresentation};
pub use classify::{multi_iso_check, normalize_split, IsoCertificate, IsoVerdict, MultiBundleSpec, Obstruction, ObstructionReason};
pub use cli::{run_command, CommandResult};
pub use error::Error;
pub use expr::{parse_expr, parse_poly};
pub use fibration::{
    chow_structure_search, lemma_alg_check, nilpotent_degree_one_classes, second_fibration_exists, solve_monic_forms,
    DegreeOneClass, SecondFibration,
};
pub use par::Strategy;
pub use poly::{Monomial, Poly};
pub use spec::{parse_spec, SpecFile};
pub use symgeom::{sym_invariants, sym_iso_check, StratumReport, SymPowerSpec};
