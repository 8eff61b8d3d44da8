//! Finite universal algebra: validated operation tables, term evaluation and
//! satisfaction, subalgebra generation, clones, homomorphisms, direct
//! products, a truncated free semigroup and reduced powers modulo the
//! cofinite filter.

pub mod algebra;
pub mod clone;
pub mod error;
pub mod field;
pub mod free;
pub mod generation;
pub mod io;
pub mod logic;
pub mod morphism;
pub mod presets;
pub mod product;
pub mod reduced;
pub mod term;

pub use algebra::{
    is_subuniverse, is_subuniverse_indices, validate_algebra, ClosureCheck, FiniteAlgebra, RawAlgebra,
    RawOperation, Signature, Subuniverse, Symbol, TupleIter,
};
pub use clone::{clone_n, CloneFragment};
pub use error::{Error, ParseError, Result, ValidationReport, Violation};
pub use free::{build_truncated, search_bounded_retraction, TruncatedFreeSemigroup};
pub use generation::{directed_union_check, finiteness_report, generate, GenerationTrace};
pub use io::{parse_algebra_file, parse_equation_file, serialize_algebra, serialize_equations};
pub use logic::{eval_term, satisfies, satisfies_all, SatisfactionReport, Verdict};
pub use morphism::{
    check_homomorphism, check_isomorphism, check_partial_homomorphism, enumerate_homomorphisms,
    find_retractions, HomCheck, HomMode, Morphism, PartialMorphism,
};
pub use presets::preset;
pub use product::{direct_product, mediating_morphism, verify_universal_property, Naming, RelabeledProduct};
pub use reduced::{adjoin_generate, canonicalize, coordinate_retraction, preservation_suite, EpSequence};
pub use term::{Equation, EquationSet, Term};
