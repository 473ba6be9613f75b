//! Quillen posets `A_p(G)` of finite permutation groups.
//!
//! The crate builds the poset of nontrivial elementary abelian `p`-subgroups
//! of a permutation group, computes the reduced rational homology of its
//! order complex, and decides the Quillen dimension property: nonzero
//! homology in degree `m_p(G) - 1`.

pub mod analysis;
pub mod atlas;
pub mod error;
pub mod formulas;
pub mod homology;
pub mod permgroup;
pub mod poset;

pub use error::{Error, Result};
