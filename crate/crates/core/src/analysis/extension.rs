use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use super::{
    fingerprint::describe, group_p_rank, homology_of_poset, poset_homology, AnalysisConfig,
};
use crate::error::{Error, Result};
use crate::permgroup::{centralizer, centralizer_in, Caps, Perm, PermGroup};
use crate::poset::{build_quillen_poset, vertex_orbits, QuillenPoset};

fn require_normal(g: &PermGroup, n: &PermGroup) -> Result<()> {
    if n.degree() != g.degree() || !g.contains_group(n) || !n.is_normal_in(g) {
        return Err(Error::Precondition(
            "subgroup is not normal in the ambient group".into(),
        ));
    }
    Ok(())
}

/// Class representatives of `A_p(G)` as `(vertex, orbit size)`.
fn class_reps(poset: &QuillenPoset) -> Result<Vec<(u32, usize)>> {
    Ok(vertex_orbits(poset)?
        .into_iter()
        .map(|o| (o[0], o.len()))
        .collect())
}

fn meets_trivially(poset: &QuillenPoset, v: usize, n: &PermGroup) -> bool {
    poset.element_perms(v).iter().all(|x| !n.contains(x))
}

#[derive(Clone, Debug)]
pub struct ExtensionRank {
    pub rank: u32,
    /// Generators of the maximizing `A` (empty for `A = 1`).
    pub witness: Vec<Perm>,
    pub centralizer_order: BigUint,
    pub centralizer_rank: u32,
}

/// `max { m_p(C_N(A)) + m_p(A) : A elementary abelian, A ∩ N = 1 }`,
/// checked against the rank read off `A_p(G)`. The first maximizer in
/// class order wins, `A = 1` first.
pub fn p_rank_via_extension(
    g: &PermGroup,
    n: &PermGroup,
    p: u32,
    caps: &Caps,
) -> Result<ExtensionRank> {
    require_normal(g, n)?;
    let poset = build_quillen_poset(g, p, caps)?;
    let mut best = ExtensionRank {
        rank: group_p_rank(n, p, caps)?,
        witness: Vec::new(),
        centralizer_order: n.order().clone(),
        centralizer_rank: 0,
    };
    best.centralizer_rank = best.rank;
    for (v, _) in class_reps(&poset)? {
        let v = v as usize;
        if !meets_trivially(&poset, v, n) {
            continue;
        }
        let gens = poset.generator_perms(v);
        let c = centralizer_in(n, &gens, caps)?;
        let cr = group_p_rank(&c, p, caps)?;
        let total = cr + poset.vertices[v].rank;
        if total > best.rank {
            best = ExtensionRank {
                rank: total,
                witness: gens,
                centralizer_order: c.order().clone(),
                centralizer_rank: cr,
            };
        }
    }
    if best.rank != poset.max_rank() {
        return Err(Error::Internal(format!(
            "extension rank {} differs from poset rank {}",
            best.rank,
            poset.max_rank()
        )));
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct OutClass {
    /// Vertex of `A_p(G)` representing the class.
    pub representative: u32,
    pub generators: Vec<Perm>,
    pub rank: u32,
    pub size: usize,
}

/// Conjugacy classes of `B ∈ A_p(G)` with `B ∩ L·C_G(L) = 1`.
#[derive(Clone, Debug)]
pub struct OutPoset {
    pub classes: Vec<OutClass>,
    /// Every member is cyclic.
    pub all_cyclic: bool,
}

impl OutPoset {
    pub fn members(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }
}

fn out_poset_in(
    poset: &QuillenPoset,
    g: &PermGroup,
    l: &PermGroup,
    caps: &Caps,
) -> Result<OutPoset> {
    let c = centralizer(g, l.generators(), caps)?;
    let mut gens = l.generators().to_vec();
    gens.extend(c.generators().iter().cloned());
    let lc = PermGroup::from_generators(gens, g.degree())?;
    let mut classes = Vec::new();
    for (v, size) in class_reps(poset)? {
        if meets_trivially(poset, v as usize, &lc) {
            classes.push(OutClass {
                representative: v,
                generators: poset.generator_perms(v as usize),
                rank: poset.vertices[v as usize].rank,
                size,
            });
        }
    }
    let all_cyclic = classes.iter().all(|c| c.rank == 1);
    Ok(OutPoset {
        classes,
        all_cyclic,
    })
}

pub fn out_poset(g: &PermGroup, l: &PermGroup, p: u32, caps: &Caps) -> Result<OutPoset> {
    require_normal(g, l)?;
    let poset = build_quillen_poset(g, p, caps)?;
    out_poset_in(&poset, g, l, caps)
}

#[derive(Clone, Debug)]
pub struct MvlesClass {
    pub generators: Vec<Perm>,
    pub size: usize,
    pub centralizer_order: BigUint,
    /// Isomorphism type of `C_L(B)` when recognized, else its order.
    pub centralizer_type: String,
    /// `dim H̃_{m−1}(A_p(C_L(B)))` with `m = m_p(L)`.
    pub dim: u64,
}

#[derive(Clone, Debug)]
pub struct MvlesReport {
    pub p: u32,
    /// `m_p(L)`.
    pub m: u32,
    pub classes: Vec<MvlesClass>,
    /// `dim H̃_{m−1}(A_p(L))`.
    pub base_dim: u64,
    /// `Σ_B dim H̃_{m−1}(A_p(C_L(B))) − dim H̃_{m−1}(A_p(L))`.
    pub bound: BigInt,
    /// Measured `b̃_m(A_p(G))`.
    pub actual: u64,
    /// Every centralizer has vanishing `H̃_{m−1}`, which forces
    /// `b̃_m(A_p(G)) = 0`.
    pub vanishing: bool,
}

impl MvlesReport {
    /// The vanishing flag forces a zero measurement, and the measurement is
    /// at least the bound.
    pub fn consistent(&self) -> bool {
        (!self.vanishing || self.actual == 0) && BigInt::from(self.actual) >= self.bound
    }

    pub fn text(&self) -> String {
        let mut s = format!("p = {}, m_p(L) = {}\n", self.p, self.m);
        for c in &self.classes {
            s.push_str(&format!(
                "  class of {} members: C_L(B) {} (order {}), dim H_{} = {}\n",
                c.size,
                c.centralizer_type,
                c.centralizer_order,
                self.m as i64 - 1,
                c.dim
            ));
        }
        s.push_str(&format!(
            "  dim H_{}(A_p(L)) = {}\n",
            self.m as i64 - 1,
            self.base_dim
        ));
        s.push_str(&format!(
            "  bound = {}\n  measured b_{} = {}\n",
            self.bound, self.m, self.actual
        ));
        s.push_str(&format!(
            "  vanishing = {}, consistent = {}\n",
            self.vanishing,
            self.consistent()
        ));
        s
    }
}

/// Mayer–Vietoris data for `L ⊴ G` whose outer poset is all cyclic.
pub fn mvles_report(
    g: &PermGroup,
    l: &PermGroup,
    p: u32,
    config: &AnalysisConfig,
) -> Result<MvlesReport> {
    require_normal(g, l)?;
    let caps = &config.caps;
    let g_poset = build_quillen_poset(g, p, caps)?;
    let out = out_poset_in(&g_poset, g, l, caps)?;
    if !out.all_cyclic {
        return Err(Error::Hypothesis(
            "the outer poset has a non-cyclic member, so the long exact sequence argument does not apply".into(),
        ));
    }
    let lh = poset_homology(l, p, config)?;
    let m = lh.poset.max_rank();
    let top = m as i64 - 1;
    let base_dim = lh.betti.get(top);
    let classes: Vec<MvlesClass> = out
        .classes
        .par_iter()
        .map(|c| {
            let cent = centralizer_in(l, &c.generators, caps)?;
            let h = poset_homology(&cent, p, config)?;
            Ok(MvlesClass {
                generators: c.generators.clone(),
                size: c.size,
                centralizer_order: cent.order().clone(),
                centralizer_type: describe(&cent),
                dim: h.betti.get(top),
            })
        })
        .collect::<Result<_>>()?;
    let sum: BigInt = classes
        .iter()
        .map(|c| BigInt::from(c.size) * BigInt::from(c.dim))
        .sum();
    let gh = homology_of_poset(g_poset, g, config)?;
    Ok(MvlesReport {
        p,
        m,
        vanishing: classes.iter().all(|c| c.dim == 0),
        classes,
        base_dim,
        bound: sum - BigInt::from(base_dim),
        actual: gh.betti.get(m as i64),
    })
}
