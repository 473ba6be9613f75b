//! The Quillen poset `A_p(G)`: nontrivial elementary abelian `p`-subgroups
//! ordered by inclusion, with the conjugation action of `G`.

mod build;
mod reduce;

use std::fmt::Write as _;
use std::sync::Arc;

use crate::permgroup::Perm;

pub use build::{build_quillen_poset, class_summaries, vertex_orbits, ClassSummary};
pub use reduce::{centralizer_union_subposet, cone_point_removal, core_reduction};

/// One vertex of `A_p(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemAbelianSubgroup {
    /// Sorted indices (into the poset's element list) of the non-identity
    /// elements.
    pub key: Vec<u32>,
    pub rank: u32,
    /// Indices of a minimal generating sequence, `rank` entries.
    pub gens: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct QuillenPoset {
    pub p: u32,
    pub degree: usize,
    /// All elements of order `p` of the group, in enumeration order.
    pub elements: Arc<Vec<Perm>>,
    /// Sorted by rank, then by key.
    pub vertices: Vec<ElemAbelianSubgroup>,
    /// Strict up-set of each vertex, sorted.
    up: Vec<Vec<u32>>,
    /// Covering relations, upward.
    covers: Vec<Vec<u32>>,
    /// For each group generator, the induced vertex permutation, when the
    /// vertex set is invariant.
    pub action: Option<Vec<Vec<u32>>>,
}

impl QuillenPoset {
    pub fn empty(p: u32, degree: usize) -> QuillenPoset {
        QuillenPoset {
            p,
            degree,
            elements: Arc::new(Vec::new()),
            vertices: Vec::new(),
            up: Vec::new(),
            covers: Vec::new(),
            action: Some(Vec::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Strictly larger vertices.
    pub fn up_set(&self, v: usize) -> &[u32] {
        &self.up[v]
    }

    pub fn covers(&self, v: usize) -> &[u32] {
        &self.covers[v]
    }

    pub fn less_than(&self, a: usize, b: usize) -> bool {
        self.up[a].binary_search(&(b as u32)).is_ok()
    }

    /// Maximum vertex rank, 0 for the empty poset.
    pub fn max_rank(&self) -> u32 {
        self.vertices.iter().map(|v| v.rank).max().unwrap_or(0)
    }

    pub fn rank_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_rank() as usize];
        for v in &self.vertices {
            out[v.rank as usize - 1] += 1;
        }
        out
    }

    pub fn generator_perms(&self, v: usize) -> Vec<Perm> {
        self.vertices[v]
            .gens
            .iter()
            .map(|&i| self.elements[i as usize].clone())
            .collect()
    }

    pub fn element_perms(&self, v: usize) -> Vec<Perm> {
        self.vertices[v]
            .key
            .iter()
            .map(|&i| self.elements[i as usize].clone())
            .collect()
    }

    /// Connected components of the comparability graph, each sorted.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for v in 0..n {
            for &w in &self.covers[v] {
                let (a, b) = (find(&mut parent, v), find(&mut parent, w as usize));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v as u32);
        }
        groups.into_values().collect()
    }

    /// The induced subposet on vertices with `keep[v]`. The action is kept
    /// only when `invariant` is set.
    pub fn induced(&self, keep: &[bool], invariant: bool) -> QuillenPoset {
        let mut new_id = vec![u32::MAX; self.len()];
        let mut vertices = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                new_id[v] = vertices.len() as u32;
                vertices.push(self.vertices[v].clone());
            }
        }
        let up: Vec<Vec<u32>> = (0..self.len())
            .filter(|&v| keep[v])
            .map(|v| {
                self.up[v]
                    .iter()
                    .filter(|&&w| keep[w as usize])
                    .map(|&w| new_id[w as usize])
                    .collect()
            })
            .collect();
        let covers = covers_from_up(&up);
        let action = if invariant {
            self.action.as_ref().map(|maps| {
                maps.iter()
                    .map(|m| {
                        (0..self.len())
                            .filter(|&v| keep[v])
                            .map(|v| new_id[m[v] as usize])
                            .collect()
                    })
                    .collect()
            })
        } else {
            None
        };
        QuillenPoset {
            p: self.p,
            degree: self.degree,
            elements: Arc::clone(&self.elements),
            vertices,
            up,
            covers,
            action,
        }
    }

    /// Text dump: `v <id> rank <k> gens <perm> …` lines, then covering
    /// edges `e <id> <id>`. Permutations use 1-based cycle notation.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let words: Vec<String> = v
                .gens
                .iter()
                .map(|&g| self.elements[g as usize].to_cycle_string())
                .collect();
            let _ = writeln!(s, "v {i} rank {} gens {}", v.rank, words.join(" "));
        }
        for (i, c) in self.covers.iter().enumerate() {
            for &j in c {
                let _ = writeln!(s, "e {i} {j}");
            }
        }
        s
    }
}

/// Covering relations from strict up-sets, assuming ids are a linear
/// extension of the order.
pub(crate) fn covers_from_up(up: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = up.len();
    let mut mark = vec![usize::MAX; n];
    up.iter()
        .enumerate()
        .map(|(v, ups)| {
            for &w in ups {
                for &x in &up[w as usize] {
                    mark[x as usize] = v;
                }
            }
            ups.iter()
                .copied()
                .filter(|&w| mark[w as usize] != v)
                .collect()
        })
        .collect()
}

/// Strict up-sets from upward covering relations, for ids that form a
/// linear extension.
pub(crate) fn up_from_covers(covers: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = covers.len();
    let mut up: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in (0..n).rev() {
        let mut acc: Vec<u32> = Vec::new();
        for &w in &covers[v] {
            acc.push(w);
            acc.extend_from_slice(&up[w as usize]);
        }
        acc.sort_unstable();
        acc.dedup();
        up[v] = acc;
    }
    up
}
