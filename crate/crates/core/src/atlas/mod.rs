//! Concrete groups: projective linear and unitary groups over small fields,
//! their automorphism extensions, small classical groups, products,
//! central quotients, and groups read from files.

pub mod extend;
pub mod field;
pub mod file;
pub mod fixtures;
pub mod geometry;
pub mod labeled;
pub mod lie;

pub use extend::{extend, ExtensionDescriptor, Kind};
pub use field::{make_field, FieldTable, SUPPORTED_FIELDS};
pub use file::{load_group_file, parse_group_file, write_group_file};
pub use fixtures::{conjugation_action, fixture_files, ree_small};
pub use labeled::{
    affine_line, alternating, cyclic, dihedral, direct_product, quotient_by_central, symmetric,
    trivial, wreath_s3_c2, Family, Geometry, Label, LabeledGroup,
};
pub use lie::{family_order, projective_group, verify_geometry};
