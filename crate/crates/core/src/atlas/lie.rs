use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;

use super::field::{make_field, FieldTable};
use super::geometry::{dot, hermitian_form, DomainKind, Matrix, Space};
use super::labeled::{Family, Geometry, Label, LabeledGroup};
use crate::error::{Error, Result};
use crate::permgroup::{Perm, PermGroup};

/// Order of the family at `q`, from the standard formulas.
pub fn family_order(family: Family, q: u32) -> Option<BigUint> {
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    let gcd = |n: &BigUint, m: u32| -> BigUint { n.gcd(&BigUint::from(m)) };
    Some(match family {
        Family::PGL2 | Family::SL2 => &q * (&q2 - &one),
        Family::PSL2 => &q * (&q2 - &one) / gcd(&(&q - &one), 2),
        Family::PGL3 => &q3 * (&q3 - &one) * (&q2 - &one),
        Family::PSL3 => &q3 * (&q3 - &one) * (&q2 - &one) / gcd(&(&q - &one), 3),
        Family::PGU3 => &q3 * (&q3 + &one) * (&q2 - &one),
        Family::PSU3 => &q3 * (&q3 + &one) * (&q2 - &one) / gcd(&(&q + &one), 3),
        _ => return None,
    })
}

fn is_prime_power(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q ≥ 2");
    let mut n = q;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn transvections(field: &FieldTable, n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for &b in &field.additive_basis() {
                    out.push(Matrix::transvection(n, i, j, b));
                }
            }
        }
    }
    out
}

/// Picks matrices greedily until the permutation group they generate
/// reaches `target`.
fn greedy_generators(
    space: &Space,
    candidates: &[Matrix],
    target: &BigUint,
    start: &PermGroup,
) -> Result<(PermGroup, Vec<Matrix>)> {
    let mut group = start.clone();
    let mut chosen = Vec::new();
    for m in candidates {
        if group.order() == target {
            break;
        }
        let p = space.matrix_perm(m)?;
        if !group.contains(&p) {
            group = group.with_generator(p);
            chosen.push(m.clone());
        }
    }
    Ok((group, chosen))
}

fn unitary_unipotents(field: &FieldTable, lower: bool) -> Vec<Matrix> {
    let q2 = field.q();
    let j = [[0u32, 0, 1], [0, 1, 0], [1, 0, 0]];
    let mut out = Vec::new();
    for a in 0..q2 {
        for b in 0..q2 {
            for c in 0..q2 {
                let upper = Matrix {
                    n: 3,
                    entries: vec![1, a, b, 0, 1, c, 0, 0, 1],
                };
                let m = if lower { upper.transpose() } else { upper };
                let rows: Vec<Vec<u32>> = (0..3)
                    .map(|i| m.entries[3 * i..3 * i + 3].to_vec())
                    .collect();
                let ok = (0..3)
                    .all(|r| (0..3).all(|s| hermitian_form(&rows[r], &rows[s], field) == j[r][s]));
                if ok && m != Matrix::identity(3) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// One of the projective families acting on its natural point set:
/// `PSL2/PGL2` on the projective line, `PSL3/PGL3` on the projective plane,
/// `PSU3/PGU3` on the isotropic points of the antidiagonal Hermitian form,
/// and `SL2` linearly on nonzero vectors.
pub fn projective_group(family: Family, q: u32) -> Result<LabeledGroup> {
    if !is_prime_power(q) {
        return Err(Error::Config(format!("q = {q} is not a prime power")));
    }
    let expected = family_order(family, q)
        .ok_or_else(|| Error::Config(format!("{family} is not a projective family")))?;
    let unitary = matches!(family, Family::PSU3 | Family::PGU3);
    let field = make_field(if unitary { q * q } else { q })?;
    let n = match family {
        Family::PSL2 | Family::PGL2 | Family::SL2 => 2,
        _ => 3,
    };
    let kind = if family == Family::SL2 {
        DomainKind::Vectors
    } else {
        DomainKind::Projective
    };
    let space = if unitary {
        Space::new(field.clone(), n, kind, |v, f| hermitian_form(v, v, f) == 0)
    } else {
        Space::new(field.clone(), n, kind, |_, _| true)
    };
    let w = field.primitive();

    let mut matrices: Vec<Matrix>;
    let mut group;
    if unitary {
        let q3 = BigUint::from(q).pow(3);
        let trivial = PermGroup::trivial(space.degree());
        let upper = unitary_unipotents(&field, false);
        let (u, mut mats) = greedy_generators(&space, &upper, &q3, &trivial)?;
        let lower = unitary_unipotents(&field, true);
        let special = family_order(Family::PSU3, q).expect("projective");
        let (g, more) = greedy_generators(&space, &lower, &special, &u)?;
        mats.extend(more);
        matrices = mats;
        group = g;
        if family == Family::PGU3 {
            // det = b with b of order q+1 and b·b^q = 1
            let b = field.pow(w, (q - 1) as u64);
            let d = Matrix::diagonal(&[1, b, 1]);
            group = group.with_generator(space.matrix_perm(&d)?);
            matrices.push(d);
        }
    } else {
        matrices = transvections(&field, n);
        if matches!(family, Family::PGL2 | Family::PGL3) && q > 2 {
            let mut diag = vec![1; n];
            diag[0] = w;
            matrices.push(Matrix::diagonal(&diag));
        }
        let gens = matrices
            .iter()
            .map(|m| space.matrix_perm(m))
            .collect::<Result<Vec<Perm>>>()?;
        group = PermGroup::from_generators(gens, space.degree())?;
    }
    if group.order() != &expected {
        return Err(Error::Internal(format!(
            "{family}({q}) built with order {} instead of {expected}",
            group.order()
        )));
    }
    let labels = space
        .points
        .iter()
        .map(|v| {
            if kind == DomainKind::Vectors {
                Label::Vector(v.clone())
            } else {
                Label::Point(v.clone())
            }
        })
        .collect();
    Ok(LabeledGroup {
        name: format!("{family}({q})"),
        family,
        q: Some(q),
        outer: Vec::new(),
        group,
        labels,
        geometry: Some(Geometry {
            space,
            hermitian: unitary,
            matrices,
        }),
    })
}

fn det3(a: &[u32], b: &[u32], c: &[u32], f: &FieldTable) -> u32 {
    let m = Matrix {
        n: 3,
        entries: [a, b, c].concat(),
    };
    m.determinant(f)
}

/// Cross-ratio of four distinct points of the projective line.
fn cross_ratio(a: &[u32], b: &[u32], c: &[u32], d: &[u32], f: &FieldTable) -> u32 {
    let br = |u: &[u32], v: &[u32]| f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0]));
    let num = f.mul(br(a, c), br(b, d));
    let den = f.mul(br(a, d), br(b, c));
    f.mul(num, f.inv(den).expect("distinct points"))
}

/// Checks that `samples` random elements preserve the geometric structure
/// of the labeled domain: cross-ratios up to field automorphisms on the
/// line, collinearity in the plane and on the Hermitian curve,
/// point–hyperplane incidence on doubled domains, and linearity on vectors.
pub fn verify_geometry<R: Rng>(lg: &LabeledGroup, rng: &mut R, samples: usize) -> Result<()> {
    let Some(geo) = &lg.geometry else {
        return Ok(());
    };
    let s = &geo.space;
    let f = &s.field;
    let half = s.points.len();
    let fail = |what: &str| {
        Err(Error::Internal(format!(
            "{}: {what} not preserved",
            lg.name
        )))
    };
    for _ in 0..samples {
        let g = lg.group.random_element(rng);
        match s.kind {
            DomainKind::Vectors => {
                let (i, j) = (rng.gen_range(0..half), rng.gen_range(0..half));
                let sum: Vec<u32> = s.points[i]
                    .iter()
                    .zip(&s.points[j])
                    .map(|(&x, &y)| f.add(x, y))
                    .collect();
                if let Some(k) = s.index_of(&sum) {
                    let gi = &s.points[g.apply(i as u32) as usize];
                    let gj = &s.points[g.apply(j as u32) as usize];
                    let gk = &s.points[g.apply(k) as usize];
                    let gsum: Vec<u32> = gi.iter().zip(gj).map(|(&x, &y)| f.add(x, y)).collect();
                    if &gsum != gk {
                        return fail("addition");
                    }
                }
            }
            DomainKind::PointsAndHyperplanes => {
                let (a, b) = (rng.gen_range(0..half), rng.gen_range(0..half));
                let incident = dot(&s.points[a], &s.points[b], f) == 0;
                let (ga, gb) = (
                    g.apply(a as u32) as usize,
                    g.apply((b + half) as u32) as usize,
                );
                let (pa, pb) = if ga < half {
                    (ga, gb.checked_sub(half))
                } else {
                    (gb, ga.checked_sub(half))
                };
                let Some(pb) = pb else {
                    return fail("point/hyperplane split");
                };
                if pa >= half || (dot(&s.points[pa], &s.points[pb], f) == 0) != incident {
                    return fail("incidence");
                }
            }
            DomainKind::Projective if s.n == 2 => {
                if half < 4 {
                    continue;
                }
                let mut pts = Vec::new();
                while pts.len() < 4 {
                    let x = rng.gen_range(0..half);
                    if !pts.contains(&x) {
                        pts.push(x);
                    }
                }
                let p = |i: usize| s.points[pts[i]].as_slice();
                let gp = |i: usize| s.points[g.apply(pts[i] as u32) as usize].as_slice();
                let before = cross_ratio(p(0), p(1), p(2), p(3), f);
                let after = cross_ratio(gp(0), gp(1), gp(2), gp(3), f);
                if !(0..f.degree()).any(|k| f.frobenius_power(before, k) == after) {
                    return fail("cross-ratio");
                }
            }
            DomainKind::Projective => {
                let idx: Vec<usize> = (0..3).map(|_| rng.gen_range(0..half)).collect();
                let p = |i: usize| s.points[idx[i]].as_slice();
                let gp = |i: usize| s.points[g.apply(idx[i] as u32) as usize].as_slice();
                let before = det3(p(0), p(1), p(2), f) == 0;
                let after = det3(gp(0), gp(1), gp(2), f) == 0;
                if before != after {
                    return fail("collinearity");
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn order(family: Family, q: u32) -> BigUint {
        projective_group(family, q).unwrap().order().clone()
    }

    #[test]
    fn small_orders_and_degrees() {
        let g = projective_group(Family::PSL2, 9).unwrap();
        assert_eq!((g.degree(), g.order()), (10, &BigUint::from(360u32)));
        let g = projective_group(Family::PSU3, 3).unwrap();
        assert_eq!((g.degree(), g.order()), (28, &BigUint::from(6048u32)));
        assert_eq!(order(Family::PGL3, 3), BigUint::from(5616u32));
        assert_eq!(order(Family::PSL3, 3), BigUint::from(5616u32));
        assert_eq!(order(Family::PGL2, 9), BigUint::from(720u32));
        assert_eq!(order(Family::SL2, 5), BigUint::from(120u32));
        assert_eq!(order(Family::PGU3, 3), BigUint::from(6048u32));
        assert_eq!(order(Family::PGU3, 2), BigUint::from(216u32));
        assert_eq!(order(Family::PSL2, 8), BigUint::from(504u32));
    }

    #[test]
    fn orders_across_supported_q() {
        for q in [3, 4, 5, 7, 8, 9, 11, 13, 25, 27] {
            for fam in [Family::PSL2, Family::PGL2] {
                assert_eq!(order(fam, q), family_order(fam, q).unwrap(), "{fam}({q})");
            }
        }
        for q in [3, 4, 5] {
            assert_eq!(
                order(Family::PSL3, q),
                family_order(Family::PSL3, q).unwrap()
            );
        }
        for q in [2, 4, 5] {
            assert_eq!(
                order(Family::PSU3, q),
                family_order(Family::PSU3, q).unwrap()
            );
        }
    }

    #[test]
    fn rejects_non_prime_power() {
        assert!(matches!(
            projective_group(Family::PSL2, 6),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            projective_group(Family::PSL2, 17),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn actions_preserve_geometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (fam, q) in [
            (Family::PSL2, 9),
            (Family::PGL2, 7),
            (Family::PSL3, 3),
            (Family::PSU3, 3),
            (Family::PGU3, 3),
            (Family::SL2, 5),
        ] {
            let g = projective_group(fam, q).unwrap();
            verify_geometry(&g, &mut rng, 20).unwrap();
        }
    }
}
