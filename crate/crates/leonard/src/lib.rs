//! Exact-arithmetic toolkit for Leonard systems.
//!
//! A Leonard system is determined, up to isomorphism, by its *parameter
//! array*: a diameter `d`, an eigenvalue sequence and a dual eigenvalue
//! sequence of length `d + 1` each, and two split sequences of length `d`.
//! This crate represents parameter arrays over exact fields (the rationals,
//! prime fields, and one quadratic extension), validates them, acts on them
//! by the eight-element dihedral symmetry, classifies how the eight relatives
//! fall into affine-isomorphism classes, realizes them as exact matrix pairs
//! with a trace-based verification oracle, and detects and fits the five
//! closed-form families.
//!
//! Start with [`textio::parse_document`] to read an array, then
//! [`parray::validate`], [`classify::main_case`], and friends:
//!
//! ```
//! use leonard::{classify, parray, textio};
//!
//! let pa = textio::parse_document(
//!     "field q\n\
//!      d 3\n\
//!      theta -3/2 -1/2 1/2 3/2\n\
//!      theta* -3/2 -1/2 1/2 3/2\n\
//!      varphi -3/2 -2 -3/2\n\
//!      phi 3/2 2 3/2\n",
//! )
//! .unwrap();
//! assert!(parray::validate(&pa).all_pass());
//! let (case, partition) = classify::main_case(&pa);
//! assert_eq!(case, classify::CaseTag::I);
//! assert_eq!(partition.classes().len(), 1);
//! ```

pub mod affine;
pub mod classify;
pub mod d4;
pub mod field;
pub mod parray;
pub mod realize;
pub mod textio;
pub mod typefit;

pub use affine::AffineMap;
pub use classify::{CaseTag, Partition};
pub use d4::D4Element;
pub use field::{FieldSpec, Scalar};
pub use parray::ParameterArray;
pub use realize::{Realization, SquareMatrix};
pub use typefit::{TypeData, TypeKind};

// Every code block in the guide runs as a doc-test, one module per chapter
// so a failure names its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/parameter-arrays.md")]
    mod parameter_arrays {}
    #[doc = include_str!("../../../book/src/relatives.md")]
    mod relatives {}
    #[doc = include_str!("../../../book/src/affine.md")]
    mod affine {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/realizations.md")]
    mod realizations {}
    #[doc = include_str!("../../../book/src/types.md")]
    mod types {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
