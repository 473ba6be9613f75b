use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::bsgs::PermGroup;
use super::perm::Perm;
use super::Caps;
use crate::error::{Error, Result};

/// Stabilizer of `point` under a right action of `group`, by orbit
/// enumeration and Schreier generators. Returns the stabilizer and the
/// orbit size.
///
/// The orbit is stored as a Schreier vector; transversal elements are
/// rebuilt on demand. Schreier generators are added only when they are not
/// already members, and the scan stops as soon as the stabilizer reaches
/// `|G| / |orbit|`.
pub fn stabilizer_by_orbit<T, F>(group: &PermGroup, point: T, act: F) -> (PermGroup, usize)
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &Perm) -> T,
{
    let gens = group.generators();
    let mut points: Vec<T> = vec![point.clone()];
    let mut index: HashMap<T, usize> = HashMap::new();
    index.insert(point, 0);
    // (parent index, generator index) for each non-root orbit point
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut head = 0;
    while head < points.len() {
        for (si, s) in gens.iter().enumerate() {
            let img = act(&points[head], s);
            if !index.contains_key(&img) {
                index.insert(img.clone(), points.len());
                points.push(img);
                parent.push(Some((head, si)));
            }
        }
        head += 1;
    }
    let orbit_size = points.len();
    let target = group.order() / BigUint::from(orbit_size);

    let transversal = |mut k: usize| -> Perm {
        let mut word: Vec<usize> = Vec::new();
        while let Some((p, si)) = parent[k] {
            word.push(si);
            k = p;
        }
        let mut u = group.identity();
        for &si in word.iter().rev() {
            u = &u * &gens[si];
        }
        u
    };

    let mut stab = PermGroup::trivial(group.degree());
    if target.is_one() {
        return (stab, orbit_size);
    }
    'outer: for k in 0..orbit_size {
        let uk = transversal(k);
        for (si, s) in gens.iter().enumerate() {
            let img = act(&points[k], s);
            let kg = index[&img];
            // tree edges give trivial Schreier generators
            if parent[kg] == Some((k, si)) {
                continue;
            }
            let sg = &(&uk * s) * &transversal(kg).inverse();
            if !sg.is_identity() && !stab.contains(&sg) {
                stab = stab.with_generator(sg);
                if stab.order() == &target {
                    break 'outer;
                }
            }
        }
    }
    debug_assert_eq!(stab.order(), &target);
    (stab, orbit_size)
}

fn check_members(group: &PermGroup, elements: &[Perm], what: &str) -> Result<()> {
    for (k, s) in elements.iter().enumerate() {
        if !group.contains(s) {
            return Err(Error::Membership(format!(
                "{what} element {k} ({s}) is not in the group"
            )));
        }
    }
    Ok(())
}

/// `C_G(S)`.
pub fn centralizer(group: &PermGroup, set: &[Perm], caps: &Caps) -> Result<PermGroup> {
    check_members(group, set, "centralized")?;
    centralizer_in(group, set, caps)
}

/// `C_H(S)` for elements `S` of some overgroup, e.g. outer automorphisms
/// acting on a normal subgroup.
pub fn centralizer_in(group: &PermGroup, set: &[Perm], caps: &Caps) -> Result<PermGroup> {
    if set.iter().any(|s| s.degree() != group.degree()) {
        return Err(Error::MalformedGenerator(
            "centralized element has the wrong degree".into(),
        ));
    }
    if group
        .order_u128()
        .is_some_and(|n| n <= caps.brute_force_limit)
    {
        centralizer_by_scan(group, set)
    } else {
        Ok(centralizer_by_orbits(group, set))
    }
}

pub fn centralizer_by_scan(group: &PermGroup, set: &[Perm]) -> Result<PermGroup> {
    let mut found: Vec<Perm> = Vec::new();
    group.for_each_element(|g| {
        if set.iter().all(|s| s.commutes_with(g)) {
            found.push(g.clone());
        }
    });
    let target = BigUint::from(found.len());
    Ok(PermGroup::closure_of(
        group.degree(),
        found.iter(),
        Some(&target),
    ))
}

pub fn centralizer_by_orbits(group: &PermGroup, set: &[Perm]) -> PermGroup {
    let mut current = group.clone();
    for s in set {
        if current.generators().iter().all(|g| g.commutes_with(s)) {
            continue;
        }
        let (stab, _) = stabilizer_by_orbit(&current, s.clone(), |x, g| x.conjugate_by(g));
        current = stab;
    }
    current
}

/// Canonical key of a subgroup: its sorted element list.
fn subgroup_key(elements: &[Perm]) -> Vec<Perm> {
    let mut v = elements.to_vec();
    v.sort_unstable();
    v
}

/// `N_G(H)`.
pub fn normalizer(group: &PermGroup, sub: &PermGroup, caps: &Caps) -> Result<PermGroup> {
    if sub.degree() != group.degree() || !group.contains_group(sub) {
        return Err(Error::Membership(
            "subgroup is not contained in the group".into(),
        ));
    }
    if group
        .order_u128()
        .is_some_and(|n| n <= caps.brute_force_limit)
    {
        Ok(normalizer_by_scan(group, sub))
    } else {
        normalizer_by_orbits(group, sub, caps)
    }
}

pub fn normalizer_by_scan(group: &PermGroup, sub: &PermGroup) -> PermGroup {
    let mut found: Vec<Perm> = Vec::new();
    group.for_each_element(|g| {
        if sub.is_normalized_by(g) {
            found.push(g.clone());
        }
    });
    let target = BigUint::from(found.len());
    PermGroup::closure_of(group.degree(), found.iter(), Some(&target))
}

pub fn normalizer_by_orbits(group: &PermGroup, sub: &PermGroup, caps: &Caps) -> Result<PermGroup> {
    let elems = sub.elements(caps.scan_cap)?;
    let key = subgroup_key(&elems);
    let (stab, _) = stabilizer_by_orbit(group, key, |k, g| {
        let conj: Vec<Perm> = k.iter().map(|x| x.conjugate_by(g)).collect();
        subgroup_key(&conj)
    });
    Ok(stab)
}

/// The conjugacy class of a subgroup together with its normalizer.
#[derive(Clone, Debug)]
pub struct SubgroupOrbit {
    pub size: usize,
    pub normalizer: PermGroup,
}

pub fn subgroup_orbit(group: &PermGroup, sub: &PermGroup, caps: &Caps) -> Result<SubgroupOrbit> {
    let normalizer = normalizer(group, sub, caps)?;
    let index = group.order() / normalizer.order();
    let size = index
        .to_usize()
        .ok_or_else(|| Error::Internal("orbit size overflow".into()))?;
    Ok(SubgroupOrbit { size, normalizer })
}

/// Subgroup generated by all elements of order `p`.
pub fn omega1(group: &PermGroup, p: u32, caps: &Caps) -> Result<PermGroup> {
    let xs = group.elements_of_order_p(p, caps.scan_cap)?;
    Ok(PermGroup::closure_of(
        group.degree(),
        xs.iter(),
        Some(group.order()),
    ))
}

/// `Z(G)`.
pub fn center(group: &PermGroup, caps: &Caps) -> Result<PermGroup> {
    let gens = group.generators().to_vec();
    centralizer(group, &gens, caps)
}

pub fn is_p_group(group: &PermGroup, p: u32) -> bool {
    let mut n = group.order().clone();
    let bp = BigUint::from(p);
    while (&n % &bp).is_zero() {
        n /= &bp;
    }
    n.is_one()
}

fn p_part(n: &BigUint, p: u32) -> BigUint {
    let bp = BigUint::from(p);
    let mut n = n.clone();
    let mut out = BigUint::one();
    while (&n % &bp).is_zero() {
        n /= &bp;
        out *= &bp;
    }
    out
}

/// A Sylow `p`-subgroup by ascending closure: starting from a subgroup of
/// order `p`, repeatedly adjoin an element of the normalizer whose coset
/// has `p`-power order, until the index is prime to `p`.
pub fn sylow_subgroup(group: &PermGroup, p: u32, caps: &Caps) -> Result<PermGroup> {
    let target = p_part(group.order(), p);
    let mut sylow = PermGroup::trivial(group.degree());
    if target.is_one() {
        return Ok(sylow);
    }
    group.check_cap(caps.scan_cap)?;
    while sylow.order() != &target {
        let n = if sylow.is_trivial() {
            group.clone()
        } else {
            normalizer(group, &sylow, caps)?
        };
        let mut next: Option<Perm> = None;
        let max_pow = {
            // exponent bound for cosets: |N : P| p-part
            let np = p_part(&(n.order() / sylow.order()), p);
            np.bits() as u32
        };
        n.for_each_element(|x| {
            if next.is_some() || sylow.contains(x) {
                return;
            }
            // x P has p-power order in N/P iff x^(p^k) ∈ P for some k
            let mut y = x.clone();
            for _ in 0..max_pow.max(1) {
                y = y.pow(p as u64);
                if sylow.contains(&y) {
                    next = Some(x.clone());
                    return;
                }
            }
        });
        let x = next
            .ok_or_else(|| Error::Internal("no p-element extends a non-Sylow p-subgroup".into()))?;
        sylow = sylow.with_generator(x);
    }
    Ok(sylow)
}

/// `O_p(G)`: intersect a Sylow subgroup with its conjugates under the
/// generators until the intersection is invariant.
pub fn p_core(group: &PermGroup, p: u32, caps: &Caps) -> Result<PermGroup> {
    let sylow = sylow_subgroup(group, p, caps)?;
    let mut core: Vec<Perm> = sylow.elements(caps.scan_cap)?;
    core.sort_unstable();
    loop {
        let before = core.len();
        for g in group.generators() {
            let conj: std::collections::HashSet<Perm> =
                core.iter().map(|x| x.conjugate_by(g)).collect();
            core.retain(|x| conj.contains(x));
        }
        if core.len() == before {
            break;
        }
    }
    let target = BigUint::from(core.len());
    Ok(PermGroup::closure_of(
        group.degree(),
        core.iter(),
        Some(&target),
    ))
}

/// `p`-adic valuation of a group order, as the exponent.
pub fn p_valuation(n: &BigUint, p: u32) -> u32 {
    let bp = BigUint::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % &bp).is_zero() {
        n /= &bp;
        k += 1;
    }
    k
}
