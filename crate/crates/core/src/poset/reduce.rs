use super::{build::vertex_orbits, QuillenPoset};
use crate::error::Result;
use crate::permgroup::{center, centralizer, omega1, Caps, Perm, PermGroup};

/// Restricts to the vertices `A` with `A = Ω₁(Z(Ω₁(C_G(A))))`.
///
/// The condition is constant on conjugacy classes, so it is evaluated once
/// per class and the result stays `G`-invariant.
pub fn core_reduction(
    poset: &QuillenPoset,
    group: &PermGroup,
    caps: &Caps,
) -> Result<QuillenPoset> {
    let p = poset.p;
    let orbits = match poset.action {
        Some(_) => vertex_orbits(poset)?,
        None => (0..poset.len() as u32).map(|v| vec![v]).collect(),
    };
    let mut keep = vec![false; poset.len()];
    for orbit in orbits {
        let rep = orbit[0] as usize;
        let gens = poset.generator_perms(rep);
        let c = centralizer(group, &gens, caps)?;
        let o = omega1(&c, p, caps)?;
        let z = center(&o, caps)?;
        let a = omega1(&z, p, caps)?;
        // A ≤ Ω₁(Z(Ω₁(C_G(A)))) always holds, so orders decide equality
        let size = num_bigint::BigUint::from(poset.vertices[rep].key.len() + 1);
        if a.order() == &size {
            for v in orbit {
                keep[v as usize] = true;
            }
        }
    }
    Ok(poset.induced(&keep, true))
}

/// Whether `v`'s strict down-set (within `alive`) has a maximum or its
/// strict up-set has a minimum.
fn is_beat_point(poset: &QuillenPoset, down: &[Vec<u32>], alive: &[bool], v: usize) -> bool {
    let ups: Vec<u32> = poset
        .up_set(v)
        .iter()
        .copied()
        .filter(|&w| alive[w as usize])
        .collect();
    if let Some(&min) = ups.first() {
        // ids extend the order, so a minimum must be the smallest id
        if ups[1..]
            .iter()
            .all(|&w| poset.less_than(min as usize, w as usize))
        {
            return true;
        }
    }
    let downs: Vec<u32> = down[v]
        .iter()
        .copied()
        .filter(|&w| alive[w as usize])
        .collect();
    if let Some(&max) = downs.last() {
        if downs[..downs.len() - 1]
            .iter()
            .all(|&w| poset.less_than(w as usize, max as usize))
        {
            return true;
        }
    }
    false
}

/// Repeatedly deletes beat points: vertices whose strict down-set has a
/// unique maximal element or whose strict up-set has a unique minimal
/// element. Vertices are scanned in id order until nothing changes; the
/// result is homotopy equivalent to the input.
pub fn cone_point_removal(poset: &QuillenPoset) -> QuillenPoset {
    let n = poset.len();
    let mut down: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n {
        for &w in poset.up_set(v) {
            down[w as usize].push(v as u32);
        }
    }
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if alive[v] && is_beat_point(poset, &down, &alive, v) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    poset.induced(&alive, false)
}

/// Vertices of `A_p(L)` contained in `C_L(B)` for at least one `B`, each
/// `B` given by generators acting on `L`'s domain.
pub fn centralizer_union_subposet(poset: &QuillenPoset, bs: &[Vec<Perm>]) -> QuillenPoset {
    let keep: Vec<bool> = (0..poset.len())
        .map(|v| {
            let gens = poset.generator_perms(v);
            bs.iter()
                .any(|b| b.iter().all(|x| gens.iter().all(|g| g.commutes_with(x))))
        })
        .collect();
    poset.induced(&keep, false)
}
