//! Decision procedures on top of posets and homology: `p`-ranks, the
//! top-degree homology verdict, outer-automorphism posets, the
//! Mayer–Vietoris bound for extensions, and connectivity.

mod connectivity;
mod extension;
pub mod fingerprint;

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::homology::{betti, order_complex, BettiOptions, BettiResult, ChainComplex};
use crate::permgroup::{p_core, sylow_subgroup, Caps, PermGroup};
use crate::poset::{build_quillen_poset, cone_point_removal, core_reduction, QuillenPoset};

pub use connectivity::{connectivity_report, in_disconnected_list, ConnectivityReport};
pub use extension::{
    mvles_report, out_poset, p_rank_via_extension, ExtensionRank, MvlesClass, MvlesReport,
    OutClass, OutPoset,
};
pub use fingerprint::{describe, fingerprint_label};

/// Homotopy-preserving reductions applied before the order complex is built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pipeline {
    pub core: bool,
    pub cone: bool,
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub caps: Caps,
    pub betti: BettiOptions,
    pub face_budget: u64,
    pub pipeline: Pipeline,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            caps: Caps::default(),
            betti: BettiOptions::default(),
            face_budget: 50_000_000,
            pipeline: Pipeline::default(),
        }
    }
}

/// A poset with the homology of its (possibly reduced) order complex.
#[derive(Clone, Debug)]
pub struct PosetHomology {
    pub poset: QuillenPoset,
    /// The poset the complex was built from, after the pipeline.
    pub working: QuillenPoset,
    pub complex: ChainComplex,
    pub betti: BettiResult,
}

pub fn homology_of_poset(
    poset: QuillenPoset,
    group: &PermGroup,
    config: &AnalysisConfig,
) -> Result<PosetHomology> {
    let mut working = poset.clone();
    if config.pipeline.core {
        working = core_reduction(&working, group, &config.caps)?;
    }
    if config.pipeline.cone {
        working = cone_point_removal(&working);
    }
    let complex = order_complex(&working, config.face_budget)?;
    let betti = betti(&complex, &config.betti)?;
    Ok(PosetHomology {
        poset,
        working,
        complex,
        betti,
    })
}

pub fn poset_homology(group: &PermGroup, p: u32, config: &AnalysisConfig) -> Result<PosetHomology> {
    let poset = build_quillen_poset(group, p, &config.caps)?;
    homology_of_poset(poset, group, config)
}

/// `m_p(G)`: the largest vertex rank, 0 for the empty poset.
pub fn p_rank(poset: &QuillenPoset) -> u32 {
    poset.max_rank()
}

/// `m_p(H)` from the poset of a Sylow subgroup.
pub fn group_p_rank(group: &PermGroup, p: u32, caps: &Caps) -> Result<u32> {
    let sylow = sylow_subgroup(group, p, caps)?;
    Ok(build_quillen_poset(&sylow, p, caps)?.max_rank())
}

#[derive(Clone, Debug)]
pub struct QdVerdict {
    pub name: String,
    pub p: u32,
    pub p_rank: u32,
    pub betti: BettiResult,
    /// `b̃_{m_p − 1} ≠ 0`; with `m_p = 0` this is the `b̃_{−1}` of the empty
    /// complex, so `p′`-groups satisfy it.
    pub satisfies: bool,
    pub p_core_order: BigUint,
    pub components: usize,
}

pub const QD_CSV_HEADER: &str = "group,p,p_rank,betti,verdict,p_core_order,components";

impl QdVerdict {
    pub fn p_core_trivial(&self) -> bool {
        self.p_core_order.is_one()
    }

    pub fn verdict(&self) -> &'static str {
        if self.satisfies {
            "satisfies"
        } else {
            "fails"
        }
    }

    /// `b̃_{m_p − 1}`.
    pub fn top_betti(&self) -> u64 {
        self.betti.get(self.p_rank as i64 - 1)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.name.replace(',', ";"),
            self.p,
            self.p_rank,
            self.betti.vector_string(),
            self.verdict(),
            self.p_core_order,
            self.components
        )
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "group       {}", self.name);
        let _ = writeln!(s, "p           {}", self.p);
        let _ = writeln!(s, "p-rank      {}", self.p_rank);
        let _ = writeln!(s, "betti       {}", self.betti.vector_string());
        let _ = writeln!(s, "top betti   {}", self.top_betti());
        let _ = writeln!(s, "p-core      order {}", self.p_core_order);
        let _ = writeln!(s, "components  {}", self.components);
        let _ = writeln!(s, "backend     {}", self.betti.backend);
        let _ = writeln!(s, "verdict     {}", self.verdict());
        s
    }
}

pub fn qd_check(
    name: &str,
    group: &PermGroup,
    p: u32,
    config: &AnalysisConfig,
) -> Result<QdVerdict> {
    let h = poset_homology(group, p, config)?;
    verdict_from(name, group, p, &h, config)
}

pub fn verdict_from(
    name: &str,
    group: &PermGroup,
    p: u32,
    h: &PosetHomology,
    config: &AnalysisConfig,
) -> Result<QdVerdict> {
    let core = p_core(group, p, &config.caps)?;
    QdVerdict::new(
        name,
        p,
        p_rank(&h.poset),
        h.betti.clone(),
        core.order().clone(),
        h.poset.components().len(),
    )
}

impl QdVerdict {
    /// Assembles a verdict, rejecting a nonzero Betti vector next to a
    /// nontrivial `p`-core and Betti numbers that disagree with the faces.
    pub fn new(
        name: &str,
        p: u32,
        p_rank: u32,
        betti: BettiResult,
        p_core_order: BigUint,
        components: usize,
    ) -> Result<QdVerdict> {
        let verdict = QdVerdict {
            name: name.to_string(),
            p,
            p_rank,
            satisfies: betti.get(p_rank as i64 - 1) > 0,
            betti,
            p_core_order,
            components,
        };
        if !verdict.p_core_trivial() && !verdict.betti.is_zero() {
            return Err(Error::Internal(format!(
                "{name}: nontrivial {p}-core but Betti vector {}",
                verdict.betti.vector_string()
            )));
        }
        if !verdict.betti.consistent {
            return Err(Error::Internal(format!(
                "{name}: Betti numbers disagree with the face counts"
            )));
        }
        Ok(verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{affine_line, alternating, cyclic, symmetric};

    #[test]
    fn ranks_and_verdicts_of_small_groups() {
        let cfg = AnalysisConfig::default();
        let a5 = alternating(5).unwrap().group;
        let v = qd_check("Alt5", &a5, 2, &cfg).unwrap();
        assert_eq!((v.p_rank, v.components, v.satisfies), (2, 5, false));
        assert_eq!(v.betti.reduced, vec![4, 0]);

        let s4 = symmetric(4).unwrap().group;
        let v = qd_check("Sym4", &s4, 2, &cfg).unwrap();
        assert!(!v.p_core_trivial() && v.betti.is_zero() && !v.satisfies);
        let v = qd_check("Sym4", &s4, 3, &cfg).unwrap();
        assert!(v.p_core_trivial() && v.satisfies);

        let f20 = affine_line(5).unwrap().group;
        assert!(qd_check("AGL1(5)", &f20, 2, &cfg).unwrap().satisfies);
    }

    #[test]
    fn p_prime_groups_satisfy_by_convention() {
        let c9 = cyclic(9).unwrap().group;
        let v = qd_check("Cyclic9", &c9, 2, &AnalysisConfig::default()).unwrap();
        assert_eq!(v.p_rank, 0);
        assert_eq!(v.betti.minus_one, 1);
        assert!(v.satisfies);
    }

    #[test]
    fn pipeline_keeps_betti_numbers() {
        let s6 = symmetric(6).unwrap().group;
        for p in [2, 3] {
            let plain = poset_homology(&s6, p, &AnalysisConfig::default()).unwrap();
            let cfg = AnalysisConfig {
                pipeline: Pipeline {
                    core: true,
                    cone: true,
                },
                ..Default::default()
            };
            let reduced = poset_homology(&s6, p, &cfg).unwrap();
            assert!(plain.betti.same_homology(&reduced.betti));
            assert!(reduced.working.len() <= plain.poset.len());
        }
    }

    #[test]
    fn group_rank_from_sylow() {
        let s6 = symmetric(6).unwrap().group;
        assert_eq!(group_p_rank(&s6, 2, &Caps::default()).unwrap(), 3);
        assert_eq!(group_p_rank(&s6, 3, &Caps::default()).unwrap(), 2);
        assert_eq!(group_p_rank(&s6, 7, &Caps::default()).unwrap(), 0);
    }
}
