//! Permutation groups: elements, stabilizer chains, and the subgroup
//! machinery the poset code needs (centralizers, normalizers, `Ω₁`, `O_p`).

mod bsgs;
mod ops;
mod perm;

pub use bsgs::PermGroup;
pub use ops::{
    center, centralizer, centralizer_by_orbits, centralizer_by_scan, centralizer_in, is_p_group,
    normalizer, normalizer_by_orbits, normalizer_by_scan, omega1, p_core, p_valuation,
    stabilizer_by_orbit, subgroup_orbit, sylow_subgroup, SubgroupOrbit,
};
pub use perm::Perm;

/// Limits on brute-force work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest group whose elements may be enumerated.
    pub scan_cap: u128,
    /// Largest group for which centralizers and normalizers are found by
    /// scanning elements; above it the orbit–stabilizer route is used.
    pub brute_force_limit: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            scan_cap: 10_000_000,
            brute_force_limit: 1_000_000,
        }
    }
}
