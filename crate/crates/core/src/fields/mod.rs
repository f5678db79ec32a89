//! Exact fields: Q, number fields, rational function fields, their places and residue maps.

pub mod element;
pub mod numfield;
pub mod parse;
pub mod place;
pub mod ratfunc;
pub mod trager;

pub use element::{Element, FieldDescriptor, F1, F2};
pub use numfield::{NfElem, NumberField};
pub use parse::{parse_element, parse_field};
pub use ratfunc::RatFunc;
pub use place::{fmt_place, ord_at_place, parse_place, residue_evaluate, residue_field, Place, PrimeIdeal};
