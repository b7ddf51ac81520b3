//! Exact computation with quantum solvable algebras: presentations and their
//! validation, PBW normal forms, H-weights, adjoint diagonalization, quantum
//! torus centers, stratification and specialization.

pub mod adjoint;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub mod normalform;
pub mod params;
pub mod presentation;
pub mod ring;
pub mod special;
pub mod strat;
pub mod text;
pub mod torus;
pub mod weights;

pub use cyclotomic::{CycloElem, Cyclotomic};
pub use error::{Error, Result};
pub use normalform::{nf_mul, q_binomial, q_leibniz_expand, skew_action, NfElement, QBinomial, SkewKind, Terms};
pub use params::{gamma_torsionfree, unit_product, FracElem, Laurent, ParamRing, UnitMonomial};
pub use presentation::{
    builtin_presentation, validate_presentation, Condition, Family, Finding, GenKind, Generator, Presentation,
    PresentationBuilder, Severity, ValidationReport,
};
pub use ring::{CoeffRing, Rationals, TorsionVerdict};
pub use text::{parse_element, parse_presentation, parse_scalar, print_presentation, ParseError};
pub use adjoint::{ad_eigencomponents, ad_minimal_polynomial, AdSpectrum, Component, LocElement};
pub use special::{
    classify_specialization, root_of_unity_witness, specialize_presentation, RootOfUnityWitness, SpecTarget, Specialized,
};
pub use strat::{
    admissible_compositions, classify_affine_prime, stratify_affine, stratify_rank2, Rank2Strata, StratumDescriptor,
};
pub use torus::{center_lattice, compatible_basis, describe_center, root_of_unity_structure, CenterDescription, LatticeSubgroup, TorusPresentation};
pub use weights::{homogeneous_weight, monomial_weight, weight_components, WeightVector};
