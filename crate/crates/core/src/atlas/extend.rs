use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use super::geometry::{DomainKind, Matrix, Space};
use super::labeled::{Family, Geometry, Label, LabeledGroup};
use crate::error::{Error, Result};
use crate::permgroup::{Caps, Perm, PermGroup};

/// Outer automorphism kinds of order 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Field,
    Graph,
    GraphField,
    Diagonal,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Field => "field",
            Kind::Graph => "graph",
            Kind::GraphField => "graph-field",
            Kind::Diagonal => "diagonal",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        Ok(match s {
            "field" => Kind::Field,
            "graph" => Kind::Graph,
            "graph-field" => Kind::GraphField,
            "diagonal" => Kind::Diagonal,
            _ => {
                return Err(Error::Config(format!(
                    "unknown extension kind `{s}` (expected field, graph, graph-field or diagonal)"
                )))
            }
        })
    }
}

/// How the outer elements of an extension were realized.
#[derive(Clone, Debug)]
pub struct ExtensionDescriptor {
    /// The base group, realized on the extension's domain.
    pub base: LabeledGroup,
    pub kinds: Vec<Kind>,
    /// One commuting involution per kind, outside the base.
    pub representatives: Vec<Perm>,
}

/// A semilinear map before it is turned into a permutation.
enum Outer {
    Frobenius(u32),
    Duality,
    DualityFrobenius(u32),
    Linear(Matrix),
}

fn outer_for(base: &LabeledGroup, kind: Kind) -> Result<Outer> {
    let geo = base.geometry.as_ref().expect("checked by caller");
    let f = &geo.space.field;
    let q = base.q.expect("projective families carry q");
    let a = f.degree();
    let unavailable = |why: String| {
        Err(Error::Capability(format!(
            "{kind} automorphism of {}: {why}",
            base.name
        )))
    };
    match (kind, base.family) {
        (Kind::Field, Family::PSL2 | Family::PGL2 | Family::PSL3 | Family::PGL3) => {
            if !a.is_multiple_of(2) {
                return unavailable(format!("needs q to be a square, q = {q}"));
            }
            Ok(Outer::Frobenius(a / 2))
        }
        // over GF(q²) the involutory field automorphism is x ↦ x^q
        (Kind::Field | Kind::Graph, Family::PSU3 | Family::PGU3) => Ok(Outer::Frobenius(a / 2)),
        (Kind::Graph, Family::PSL3 | Family::PGL3) => Ok(Outer::Duality),
        (Kind::GraphField, Family::PSL3 | Family::PGL3) => {
            if !a.is_multiple_of(2) {
                return unavailable(format!("needs q to be a square, q = {q}"));
            }
            Ok(Outer::DualityFrobenius(a / 2))
        }
        (Kind::Graph | Kind::GraphField, _) => {
            unavailable("the family has no graph automorphism".into())
        }
        (Kind::Diagonal, Family::PSL2) => {
            if q.is_multiple_of(2) {
                return unavailable("PSL2(q) = PGL2(q) in characteristic 2".into());
            }
            Ok(Outer::Linear(Matrix::diagonal(&[f.primitive(), 1])))
        }
        (Kind::Diagonal, Family::PSL3 | Family::PSU3) => {
            let d = if base.family == Family::PSL3 {
                (q - 1) % 3
            } else {
                (q + 1) % 3
            };
            if d == 0 {
                unavailable(
                    "the outer diagonal automorphisms have order 3 and contain no involution"
                        .into(),
                )
            } else {
                unavailable(format!(
                    "there are no outer diagonal automorphisms for q = {q}"
                ))
            }
        }
        (Kind::Diagonal, _) => {
            unavailable("the group already contains its diagonal automorphisms".into())
        }
        (_, fam) => Err(Error::Capability(format!(
            "{fam} has no {kind} automorphism"
        ))),
    }
}

fn outer_perm(space: &Space, outer: &Outer) -> Result<Perm> {
    match outer {
        Outer::Frobenius(k) => space.frobenius_perm(*k),
        Outer::Duality => space.duality_perm(),
        Outer::DualityFrobenius(k) => Ok(&space.duality_perm()? * &space.frobenius_perm(*k)?),
        Outer::Linear(m) => space.matrix_perm(m),
    }
}

/// Involutions in the coset `base·c`, in enumeration order, at most `limit`.
fn coset_involutions(base: &PermGroup, c: &Perm, limit: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    base.for_each_element(|x| {
        if out.len() < limit {
            let y = x * c;
            if (&y * &y).is_identity() {
                out.push(y);
            }
        }
    });
    out
}

/// Depth-first search for one involution per coset, pairwise commuting.
fn commuting_choice(lists: &[Vec<Perm>], chosen: &mut Vec<Perm>, budget: &mut u64) -> bool {
    let k = chosen.len();
    if k == lists.len() {
        return true;
    }
    for y in &lists[k] {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if chosen.iter().all(|x| x.commutes_with(y)) {
            chosen.push(y.clone());
            if commuting_choice(lists, chosen, budget) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Adjoins outer automorphisms of order 2 to a projective group.
///
/// Field automorphisms act on coordinates, the graph automorphism of the
/// linear groups in dimension 3 is the polarity on the doubled domain of
/// points and hyperplanes, and the diagonal automorphism of `PSL2(q)` is an
/// involution of `PGL2(q)` outside `PSL2(q)`. Multi-kind extensions need
/// pairwise commuting representatives; when the canonical ones do not
/// commute, all involutions of the cosets are searched.
pub fn extend(
    base: &LabeledGroup,
    kinds: &[Kind],
    caps: &Caps,
) -> Result<(LabeledGroup, ExtensionDescriptor)> {
    let mut kinds = kinds.to_vec();
    kinds.sort_unstable();
    kinds.dedup();
    if kinds.is_empty() {
        return Err(Error::Config("no extension kind given".into()));
    }
    let Some(geo) = &base.geometry else {
        return Err(Error::Capability(format!(
            "{} has no geometry to extend",
            base.name
        )));
    };
    if !base.family.is_projective() || !base.outer.is_empty() {
        return Err(Error::Capability(format!(
            "{} cannot be extended",
            base.name
        )));
    }
    if matches!(base.family, Family::PSU3 | Family::PGU3)
        && kinds.contains(&Kind::Field)
        && kinds.contains(&Kind::Graph)
    {
        return Err(Error::Capability(
            "for unitary groups the field and graph involutions are the same outer class".into(),
        ));
    }
    let outers = kinds
        .iter()
        .map(|&k| outer_for(base, k))
        .collect::<Result<Vec<_>>>()?;
    let doubled = outers
        .iter()
        .any(|o| matches!(o, Outer::Duality | Outer::DualityFrobenius(_)));
    let space = if doubled && geo.space.kind != DomainKind::PointsAndHyperplanes {
        Space::new(
            geo.space.field.clone(),
            geo.space.n,
            DomainKind::PointsAndHyperplanes,
            |_, _| true,
        )
    } else {
        geo.space.clone()
    };

    let base_gens = geo
        .matrices
        .iter()
        .map(|m| space.matrix_perm(m))
        .collect::<Result<Vec<_>>>()?;
    let base_group = PermGroup::from_generators(base_gens, space.degree())?;
    if base_group.order() != base.order() {
        return Err(Error::Internal(
            "base group changed order on the new domain".into(),
        ));
    }

    let mut canonical = Vec::new();
    for o in &outers {
        let c = outer_perm(&space, o)?;
        if !base_group.is_normalized_by(&c) {
            return Err(Error::Construction(
                "outer map does not normalize the base".into(),
            ));
        }
        if base_group.contains(&c) {
            return Err(Error::Construction(
                "outer map lies in the base group".into(),
            ));
        }
        canonical.push(c);
    }

    let all_involutions = canonical.iter().all(|c| (c * c).is_identity());
    let pairwise = canonical
        .iter()
        .enumerate()
        .all(|(i, a)| canonical[i + 1..].iter().all(|b| a.commutes_with(b)));
    let reps = if all_involutions && pairwise {
        canonical
    } else {
        base_group.check_cap(caps.scan_cap)?;
        let limit = 100_000;
        let lists: Vec<Vec<Perm>> = canonical
            .iter()
            .map(|c| {
                // keep an involutory canonical representative first
                let mut l = coset_involutions(&base_group, c, limit);
                if (c * c).is_identity() {
                    l.retain(|y| y != c);
                    l.insert(0, c.clone());
                }
                l
            })
            .collect();
        for (k, l) in lists.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::Construction(format!(
                    "the coset of the {} automorphism contains no involution",
                    kinds[k]
                )));
            }
        }
        let mut chosen = Vec::new();
        let mut budget = 50_000_000u64;
        if !commuting_choice(&lists, &mut chosen, &mut budget) {
            let names: Vec<String> = kinds.iter().map(|k| k.to_string()).collect();
            return Err(Error::Construction(format!(
                "no pairwise commuting involutions in the cosets of {}: {} involutions do not commute",
                names.join(", "),
                names.join(" and ")
            )));
        }
        chosen
    };

    let mut group = base_group.clone();
    for r in &reps {
        group = group.with_generator(r.clone());
    }
    let expected = base.order() * BigUint::from(1u32 << reps.len());
    if group.order() != &expected {
        return Err(Error::Construction(format!(
            "extension has order {} instead of {expected}",
            group.order()
        )));
    }
    let complement = PermGroup::from_generators(reps.clone(), space.degree())?;
    if complement.order() != &BigUint::from(1u32 << reps.len()) || !complement.is_abelian() {
        return Err(Error::Construction(
            "complement is not elementary abelian".into(),
        ));
    }

    let labels: Vec<Label> = (0..space.degree())
        .map(|i| {
            let (hyper, v) = space.label(i);
            if hyper {
                Label::Hyperplane(v.to_vec())
            } else {
                Label::Point(v.to_vec())
            }
        })
        .collect();
    let kind_names: Vec<String> = kinds.iter().map(|k| k.to_string()).collect();
    let geometry = Geometry {
        space,
        hermitian: geo.hermitian,
        matrices: geo.matrices.clone(),
    };
    let realized_base = LabeledGroup {
        name: base.name.clone(),
        family: base.family,
        q: base.q,
        outer: Vec::new(),
        group: base_group,
        labels: labels.clone(),
        geometry: Some(geometry.clone()),
    };
    let extended = LabeledGroup {
        name: format!("{}<{}>", base.name, kind_names.join(",")),
        family: base.family,
        q: base.q,
        outer: kinds.clone(),
        group,
        labels,
        geometry: Some(geometry),
    };
    Ok((
        extended,
        ExtensionDescriptor {
            base: realized_base,
            kinds,
            representatives: reps,
        },
    ))
}
