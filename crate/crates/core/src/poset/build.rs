use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{up_from_covers, ElemAbelianSubgroup, QuillenPoset};
use crate::error::{Error, Result};
use crate::permgroup::{normalizer, Caps, Perm, PermGroup};

/// Builds `A_p(G)` level by level: rank-`k+1` subgroups are `⟨E, x⟩` for
/// rank-`k` subgroups `E` and elements `x` of order `p` centralizing `E`.
pub fn build_quillen_poset(group: &PermGroup, p: u32, caps: &Caps) -> Result<QuillenPoset> {
    let elements = group
        .elements_of_order_p(p, caps.scan_cap)
        .map_err(|e| match e {
            Error::Resource { what, limit, flag } => Error::Resource {
                what: format!("{what} while listing elements of order {p}"),
                limit,
                flag,
            },
            other => other,
        })?;
    let n = elements.len();
    if n == 0 {
        return Ok(QuillenPoset::empty(p, group.degree()));
    }
    let index: HashMap<&Perm, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, x)| (x, i as u32))
        .collect();

    // commuting neighbours among elements of order p
    let neighbours: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && elements[i].commutes_with(&elements[j]))
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    // rank 1: cyclic subgroups
    let mut levels: Vec<Vec<ElemAbelianSubgroup>> = Vec::new();
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    let mut level1 = Vec::new();
    for (i, x) in elements.iter().enumerate() {
        let mut key: Vec<u32> = Vec::with_capacity(p as usize - 1);
        let mut y = x.clone();
        for _ in 1..p {
            key.push(index[&y]);
            y = &y * x;
        }
        key.sort_unstable();
        if seen.insert(key.clone(), ()).is_none() {
            level1.push(ElemAbelianSubgroup {
                key,
                rank: 1,
                gens: vec![i as u32],
            });
        }
    }
    level1.sort_by(|a, b| a.key.cmp(&b.key));
    levels.push(level1);

    // covering edges between consecutive levels, as (lower index, upper index)
    let mut level_edges: Vec<Vec<(u32, u32)>> = Vec::new();
    loop {
        let current = levels.last().expect("nonempty");
        let expansions: Vec<Vec<(Vec<u32>, u32)>> = current
            .par_iter()
            .map(|e| expand(e, &elements, &index, &neighbours, p))
            .collect();
        let mut next_index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next: Vec<ElemAbelianSubgroup> = Vec::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (ei, list) in expansions.into_iter().enumerate() {
            for (key, x) in list {
                let id = match next_index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = next.len() as u32;
                        let mut gens = current[ei].gens.clone();
                        gens.push(x);
                        next_index.insert(key.clone(), id);
                        next.push(ElemAbelianSubgroup {
                            key,
                            rank: current[ei].rank + 1,
                            gens,
                        });
                        id
                    }
                };
                edges.push((ei as u32, id));
            }
        }
        if next.is_empty() {
            break;
        }
        // sort the new level by key and renumber its edges
        let mut order: Vec<u32> = (0..next.len() as u32).collect();
        order.sort_by(|&a, &b| next[a as usize].key.cmp(&next[b as usize].key));
        let mut rank_of = vec![0u32; next.len()];
        for (new, &old) in order.iter().enumerate() {
            rank_of[old as usize] = new as u32;
        }
        let sorted: Vec<ElemAbelianSubgroup> =
            order.iter().map(|&o| next[o as usize].clone()).collect();
        for e in edges.iter_mut() {
            e.1 = rank_of[e.1 as usize];
        }
        edges.sort_unstable();
        edges.dedup();
        level_edges.push(edges);
        levels.push(sorted);
    }

    // flatten
    let mut offsets = Vec::new();
    let mut vertices = Vec::new();
    for level in &levels {
        offsets.push(vertices.len() as u32);
        vertices.extend(level.iter().cloned());
    }
    let mut covers: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
    for (k, edges) in level_edges.iter().enumerate() {
        for &(a, b) in edges {
            covers[(offsets[k] + a) as usize].push(offsets[k + 1] + b);
        }
    }
    for c in covers.iter_mut() {
        c.sort_unstable();
    }
    let up = up_from_covers(&covers);

    let key_index: HashMap<&[u32], u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.key.as_slice(), i as u32))
        .collect();
    let mut action = Vec::new();
    for s in group.generators() {
        let conj: Vec<u32> = elements
            .iter()
            .map(|x| {
                index.get(&x.conjugate_by(s)).copied().ok_or_else(|| {
                    Error::Internal("conjugate of an element of order p is missing".into())
                })
            })
            .collect::<Result<_>>()?;
        let map: Vec<u32> = vertices
            .iter()
            .map(|v| {
                let mut k: Vec<u32> = v.key.iter().map(|&i| conj[i as usize]).collect();
                k.sort_unstable();
                key_index
                    .get(k.as_slice())
                    .copied()
                    .ok_or_else(|| Error::Internal("conjugate subgroup is missing".into()))
            })
            .collect::<Result<_>>()?;
        action.push(map);
    }

    Ok(QuillenPoset {
        p,
        degree: group.degree(),
        elements: Arc::new(elements),
        vertices,
        up,
        covers,
        action: Some(action),
    })
}

/// All `⟨E, x⟩` for `x` of order `p` centralizing `E`, `x ∉ E`, each once,
/// with the `x` that produced it.
fn expand(
    e: &ElemAbelianSubgroup,
    elements: &[Perm],
    index: &HashMap<&Perm, u32>,
    neighbours: &[Vec<u32>],
    p: u32,
) -> Vec<(Vec<u32>, u32)> {
    // elements commuting with every generator of E
    let mut cand: Vec<u32> = neighbours[e.gens[0] as usize].clone();
    for &g in &e.gens[1..] {
        let other = &neighbours[g as usize];
        cand.retain(|c| other.binary_search(c).is_ok());
    }
    let members: Vec<&Perm> = e.key.iter().map(|&i| &elements[i as usize]).collect();
    let mut covered: Vec<u32> = Vec::new();
    let mut out = Vec::new();
    for &x in &cand {
        if e.key.binary_search(&x).is_ok() || covered.binary_search(&x).is_ok() {
            continue;
        }
        let xp = &elements[x as usize];
        let mut key = e.key.clone();
        let mut power = xp.clone();
        for _ in 1..p {
            key.push(index[&power]);
            for m in &members {
                key.push(index[&(*m * &power)]);
            }
            power = &power * xp;
        }
        key.sort_unstable();
        for &k in &key {
            if let Err(pos) = covered.binary_search(&k) {
                covered.insert(pos, k);
            }
        }
        out.push((key, x));
    }
    out
}

/// A conjugacy class of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSummary {
    pub representative: u32,
    pub rank: u32,
    pub orbit_size: usize,
    /// `|G : N_G(E)|`, computed from the normalizer.
    pub normalizer_index: BigUint,
}

/// Orbits of the vertex action, each sorted, ordered by smallest member.
pub fn vertex_orbits(poset: &QuillenPoset) -> Result<Vec<Vec<u32>>> {
    let action = poset
        .action
        .as_ref()
        .ok_or_else(|| Error::Precondition("poset carries no group action".into()))?;
    let n = poset.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut head = 0;
        while head < orbit.len() {
            let v = orbit[head] as usize;
            for map in action {
                let w = map[v];
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    orbit.push(w);
                }
            }
            head += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(out)
}

/// One summary per conjugacy class of vertices. The normalizer index is
/// computed from `N_G(E)` and checked against the orbit size.
pub fn class_summaries(
    poset: &QuillenPoset,
    group: &PermGroup,
    caps: &Caps,
) -> Result<Vec<ClassSummary>> {
    let orbits = vertex_orbits(poset)?;
    let mut out = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        let rep = orbit[0];
        let gens = poset.generator_perms(rep as usize);
        let sub = PermGroup::from_generators(gens, group.degree())?;
        let n = normalizer(group, &sub, caps)?;
        let index = group.order() / n.order();
        if index.to_usize() != Some(orbit.len()) {
            return Err(Error::Internal(format!(
                "class of vertex {rep}: orbit size {} but normalizer index {index}",
                orbit.len()
            )));
        }
        out.push(ClassSummary {
            representative: rep,
            rank: poset.vertices[rep as usize].rank,
            orbit_size: orbit.len(),
            normalizer_index: index,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{alternating, cyclic, projective_group, symmetric, Family};
    use std::collections::HashSet;

    fn poset_of(g: &PermGroup, p: u32) -> QuillenPoset {
        build_quillen_poset(g, p, &Caps::default()).unwrap()
    }

    /// Every elementary abelian p-subgroup, by closing commuting sets with
    /// the generic closure routine.
    fn brute_force(g: &PermGroup, p: u32) -> HashSet<Vec<Perm>> {
        let xs = g.elements_of_order_p(p, 1 << 20).unwrap();
        let mut found: HashSet<Vec<Perm>> = HashSet::new();
        let mut frontier: Vec<Vec<Perm>> = vec![Vec::new()];
        while let Some(gens) = frontier.pop() {
            for x in &xs {
                if !gens.iter().all(|y| y.commutes_with(x)) {
                    continue;
                }
                let mut next = gens.clone();
                next.push(x.clone());
                let h = PermGroup::from_generators(next.clone(), g.degree()).unwrap();
                let mut elems: Vec<Perm> = h
                    .elements(1 << 20)
                    .unwrap()
                    .into_iter()
                    .filter(|e| !e.is_identity())
                    .collect();
                elems.sort();
                if found.insert(elems) {
                    frontier.push(next);
                }
            }
        }
        found
    }

    fn vertex_sets(poset: &QuillenPoset) -> HashSet<Vec<Perm>> {
        (0..poset.len())
            .map(|v| {
                let mut e = poset.element_perms(v);
                e.sort();
                e
            })
            .collect()
    }

    #[test]
    fn alt5_at_two() {
        let g = alternating(5).unwrap().group;
        let p = poset_of(&g, 2);
        assert_eq!(p.rank_counts(), vec![15, 5]);
        let edges: usize = (0..p.len()).map(|v| p.covers(v).len()).sum();
        assert_eq!(edges, 15);
        assert_eq!(p.components().len(), 5);
    }

    #[test]
    fn matches_brute_force_on_small_groups() {
        for (g, p) in [
            (symmetric(4).unwrap().group, 2),
            (symmetric(4).unwrap().group, 3),
            (alternating(5).unwrap().group, 2),
            (alternating(5).unwrap().group, 3),
            (projective_group(Family::PSL2, 7).unwrap().group, 2),
            (symmetric(6).unwrap().group, 3),
        ] {
            let poset = poset_of(&g, p);
            assert_eq!(vertex_sets(&poset), brute_force(&g, p));
            let xs = g.elements_of_order_p(p, 1 << 20).unwrap();
            assert_eq!(poset.rank_counts()[0], xs.len() / (p as usize - 1));
        }
    }

    #[test]
    fn order_relation_is_rank_increasing() {
        let g = symmetric(6).unwrap().group;
        let poset = poset_of(&g, 2);
        for v in 0..poset.len() {
            for &w in poset.up_set(v) {
                assert!(poset.vertices[v].rank < poset.vertices[w as usize].rank);
                let small: HashSet<u32> = poset.vertices[v].key.iter().copied().collect();
                assert!(small
                    .iter()
                    .all(|x| poset.vertices[w as usize].key.contains(x)));
            }
            let k = poset.vertices[v].rank;
            if k >= 2 {
                let below = (0..poset.len())
                    .filter(|&u| poset.vertices[u].rank == 1 && poset.less_than(u, v))
                    .count();
                assert!(below >= ((1 << k) - 1) as usize);
            }
        }
    }

    #[test]
    fn action_is_order_preserving() {
        let g = symmetric(5).unwrap().group;
        let poset = poset_of(&g, 2);
        for map in poset.action.as_ref().unwrap() {
            let mut seen = map.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..poset.len() as u32).collect::<Vec<_>>());
            for v in 0..poset.len() {
                for &w in poset.up_set(v) {
                    assert!(poset.less_than(map[v] as usize, map[w as usize] as usize));
                }
            }
        }
    }

    #[test]
    fn class_summaries_of_sym4_and_alt5() {
        let caps = Caps::default();
        let g = symmetric(4).unwrap().group;
        let poset = poset_of(&g, 2);
        let mut sizes: Vec<(u32, usize)> = class_summaries(&poset, &g, &caps)
            .unwrap()
            .iter()
            .map(|c| (c.rank, c.orbit_size))
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![(1, 3), (1, 6), (2, 1), (2, 3)]);

        let g = alternating(5).unwrap().group;
        let poset = poset_of(&g, 2);
        let sizes: Vec<(u32, usize)> = class_summaries(&poset, &g, &caps)
            .unwrap()
            .iter()
            .map(|c| (c.rank, c.orbit_size))
            .collect();
        assert_eq!(sizes, vec![(1, 15), (2, 5)]);
    }

    #[test]
    fn groups_without_p_elements_give_empty_posets() {
        let g = cyclic(15).unwrap().group;
        let poset = poset_of(&g, 2);
        assert!(poset.is_empty());
        assert_eq!(poset.max_rank(), 0);
        assert!(class_summaries(&poset, &g, &Caps::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dump_is_stable() {
        let g = symmetric(3).unwrap().group;
        let poset = poset_of(&g, 2);
        let d = poset.dump();
        assert_eq!(d, poset_of(&g, 2).dump());
        assert!(d.starts_with("v 0 rank 1 gens "));
        assert_eq!(d.lines().count(), 3);
    }
}
