//! Rank-2 Drinfeld modules over residue fields.

pub mod iso;
pub mod module;
pub mod twisted;

pub use iso::{
    class_of, classes_by_charpoly, enumerate_iso_classes, gamma_zero_classes, iso_classes,
    iso_equivalent, iso_test_via_residues, power_residue_symbol, IsoClass,
};
pub use module::{CharPolyFrob, FiniteDrinfeldModule};
pub use twisted::TwistedPoly;
