use super::{poset_homology, AnalysisConfig};
use crate::atlas::{Family, LabeledGroup};
use crate::error::Result;
use crate::permgroup::p_core;

/// Whether a group with a known identity belongs to the list of simple
/// groups with disconnected 2-subgroup poset: `PSL2(2^n)`, `PSU3(2^n)` and
/// `Sz(2^{2n+1})` for `n ≥ 2`, which covers `Alt5 ≅ PSL2(5)` and
/// `²G₂(3)′ ≅ PSL2(8)`. `None` when the identity is not known, including
/// every group with adjoined outer automorphisms.
pub fn in_disconnected_list(lg: &LabeledGroup) -> Option<bool> {
    if !lg.outer.is_empty() {
        return None;
    }
    let listed = |family: Family, q: u32| -> Option<bool> {
        let even_power = q >= 4 && q.is_power_of_two();
        match family {
            // PSL2(q) = PGL2(q) for even q
            Family::PSL2 | Family::PGL2 => Some(even_power || (family == Family::PSL2 && q == 5)),
            Family::PSU3 => Some(even_power),
            Family::PSL3 | Family::PGL3 | Family::PGU3 => Some(false),
            _ => None,
        }
    };
    match lg.family {
        Family::Alt if lg.degree() >= 5 => Some(lg.degree() == 5),
        Family::File => {
            // files may declare their identity through the name
            let name = lg.name.trim();
            if name == "2G2(3)'" || name == "2G2(3)" {
                return Some(true);
            }
            let (fam, rest) = name.split_once('(')?;
            let q: u32 = rest.strip_suffix(')')?.parse().ok()?;
            listed(fam.parse().ok()?, q)
        }
        f => listed(f, lg.q?),
    }
}

#[derive(Clone, Debug)]
pub struct ConnectivityReport {
    pub name: String,
    pub p: u32,
    pub components: usize,
    pub p_rank: u32,
    /// Reduced `b̃_0`, one less than the component count.
    pub reduced_b0: u64,
    pub b1: u64,
    pub p_core_trivial: bool,
    /// Membership in the disconnected list, when the identity is known.
    pub declared: Option<bool>,
    /// The measurement agrees with the classification and with the
    /// connected rank-two criterion.
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl ConnectivityReport {
    pub fn text(&self) -> String {
        let mut s = format!(
            "{} at p = {}: {} component(s), m_p = {}, b0 = {}, b1 = {}\n",
            self.name, self.p, self.components, self.p_rank, self.reduced_b0, self.b1
        );
        for n in &self.notes {
            s.push_str(&format!("  {n}\n"));
        }
        s.push_str(&format!("  consistent = {}\n", self.consistent));
        s
    }
}

/// Components of `A_p(G)`, cross-checked for `p = 2` against the
/// classification of disconnected posets and against the rule that a
/// connected poset of rank 2 with trivial 2-core has `b̃₁ > 0`.
pub fn connectivity_report(
    lg: &LabeledGroup,
    p: u32,
    config: &AnalysisConfig,
) -> Result<ConnectivityReport> {
    let h = poset_homology(&lg.group, p, config)?;
    let components = h.poset.components().len();
    let m = h.poset.max_rank();
    let core = p_core(&lg.group, p, &config.caps)?;
    let declared = if p == 2 {
        in_disconnected_list(lg)
    } else {
        None
    };
    let mut report = ConnectivityReport {
        name: lg.name.clone(),
        p,
        components,
        p_rank: m,
        reduced_b0: h.betti.get(0),
        b1: h.betti.get(1),
        p_core_trivial: core.is_trivial(),
        declared,
        consistent: true,
        notes: Vec::new(),
    };
    if p == 2 && components > 1 {
        if m == 1 {
            report.notes.push("disconnected with 2-rank 1".into());
        } else {
            match declared {
                Some(true) => report
                    .notes
                    .push("disconnected, in the listed families".into()),
                Some(false) => {
                    report
                        .notes
                        .push("disconnected but not in the listed families".into());
                    report.consistent = false;
                }
                None => report
                    .notes
                    .push("disconnected, identity not declared".into()),
            }
        }
    }
    if p == 2 && components == 1 && declared == Some(true) && report.p_core_trivial {
        report
            .notes
            .push("connected but listed as disconnected".into());
        report.consistent = false;
    }
    if components == 1 && m == 2 && report.p_core_trivial {
        if report.b1 > 0 {
            report
                .notes
                .push("connected of rank 2 with trivial core: top homology nonzero".into());
        } else {
            report
                .notes
                .push("connected of rank 2 with trivial core but b1 = 0".into());
            report.consistent = false;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{alternating, projective_group, symmetric};

    #[test]
    fn alt5_is_disconnected_and_listed() {
        let r =
            connectivity_report(&alternating(5).unwrap(), 2, &AnalysisConfig::default()).unwrap();
        assert_eq!((r.components, r.reduced_b0), (5, 4));
        assert_eq!(r.declared, Some(true));
        assert!(r.consistent);
    }

    #[test]
    fn psl2_7_is_connected() {
        let g = projective_group(Family::PSL2, 7).unwrap();
        let r = connectivity_report(&g, 2, &AnalysisConfig::default()).unwrap();
        assert_eq!(r.components, 1);
        assert!(r.b1 > 0 && r.consistent);
    }

    #[test]
    fn list_membership() {
        let psl2 = |q| projective_group(Family::PSL2, q).unwrap();
        assert_eq!(in_disconnected_list(&psl2(8)), Some(true));
        assert_eq!(in_disconnected_list(&psl2(5)), Some(true));
        assert_eq!(in_disconnected_list(&psl2(9)), Some(false));
        assert_eq!(in_disconnected_list(&symmetric(5).unwrap()), None);
    }
}
