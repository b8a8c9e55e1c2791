//! Constructions and exact verifiers for weighing matrices, balanced
//! generalized weighing matrices (BGWs) over cyclic groups, symmetric block
//! designs, and the association schemes attached to BGWs.
//!
//! The crate is organized around a seed-plus-orthogonal-array expansion
//! pipeline:
//!
//! * [`gf`] — finite fields GF(p^k) with discrete logarithms;
//! * [`matrix`] — dense exact matrices over the integers and over
//!   `{0} ∪ Z_n`, with Kronecker products, symbol substitution, bordering,
//!   the `*` involution, and block decomposition;
//! * [`oa`] — strength-2 orthogonal arrays from projective geometry;
//! * [`seeds`] — seed BGWs, conference matrices, Paley designs, twin mates,
//!   and the embedded catalog of reference matrices;
//! * [`construct`] — the expansion constructions for weighing matrices, BGWs, and
//!   symmetric designs, plus group reduction/signing and the consequential
//!   order/weight table;
//! * [`verify`] — independent definitional checkers, implemented separately
//!   from the constructions they certify;
//! * [`scheme`] — the association scheme of a BGW over Z_n, its intersection
//!   numbers, eigenmatrices, primitive idempotents, and the canonical-form
//!   extraction of the BGW back out of the scheme;
//! * [`textfmt`] — the plain-text matrix file format shared with the CLI.
//!
//! Every construction is certified by the matching verifier before it is
//! returned; verifiers use exact integer arithmetic throughout (the only
//! floating point in the crate is the eigenstructure of [`scheme`]).

pub use num_complex::Complex64;

pub mod construct;
pub mod gf;
pub mod matrix;
pub mod oa;
pub mod scheme;
pub mod seeds;
pub mod textfmt;
pub mod verify;

pub use construct::{expand_bgw, expand_design, expand_weighing, normalize_weighing, table1};
pub use gf::{field_new, field_of_order, FieldElem, FiniteField, GfError};
pub use matrix::{BlockDecomposition, GroupEntry, GroupMatrix, IntMatrix, MatrixError};
pub use oa::{oa_build, verify_oa, OaReport, OrthogonalArray};
pub use scheme::{eigenmatrices, extract_bgw, scheme_from_bgw, verify_scheme, AssociationScheme};
pub use seeds::{catalog, paley_design, seed_bgw, seed_conference, SeedCatalogEntry};
pub use textfmt::{MatrixKind, MatrixPayload};
pub use verify::{
    verify_balanced, verify_bgw, verify_bibd, verify_symmetric_design, verify_weighing,
    VerifyReport,
};
