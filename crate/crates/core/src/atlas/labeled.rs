use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use super::extend::Kind;
use super::geometry::{Matrix, Space};
use crate::error::{Error, Result};
use crate::permgroup::{Perm, PermGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    PSL2,
    PGL2,
    SL2,
    PSL3,
    PGL3,
    PSU3,
    PGU3,
    Sym,
    Alt,
    Cyclic,
    Dihedral,
    Affine,
    Wreath,
    Trivial,
    Product,
    Quotient,
    File,
}

impl Family {
    pub fn is_projective(self) -> bool {
        matches!(
            self,
            Family::PSL2 | Family::PGL2 | Family::PSL3 | Family::PGL3 | Family::PSU3 | Family::PGU3
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::PSL2 => "PSL2",
            Family::PGL2 => "PGL2",
            Family::SL2 => "SL2",
            Family::PSL3 => "PSL3",
            Family::PGL3 => "PGL3",
            Family::PSU3 => "PSU3",
            Family::PGU3 => "PGU3",
            Family::Sym => "Sym",
            Family::Alt => "Alt",
            Family::Cyclic => "Cyclic",
            Family::Dihedral => "Dihedral",
            Family::Affine => "AGL1",
            Family::Wreath => "Wreath",
            Family::Trivial => "Trivial",
            Family::Product => "product",
            Family::Quotient => "quotient",
            Family::File => "file",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "PSL2" => Family::PSL2,
            "PGL2" => Family::PGL2,
            "SL2" => Family::SL2,
            "PSL3" => Family::PSL3,
            "PGL3" => Family::PGL3,
            "PSU3" => Family::PSU3,
            "PGU3" => Family::PGU3,
            "SYM" => Family::Sym,
            "ALT" => Family::Alt,
            "CYCLIC" => Family::Cyclic,
            "DIHEDRAL" => Family::Dihedral,
            "AGL1" => Family::Affine,
            _ => return Err(Error::Config(format!("unknown family `{s}`"))),
        })
    }
}

/// What a point of the permutation domain stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Point(Vec<u32>),
    Hyperplane(Vec<u32>),
    Vector(Vec<u32>),
    Index(u32),
    /// A point of factor `k` of a direct product.
    Factor(u8, Box<Label>),
    /// An orbit of a central subgroup, or a coset, in a quotient action.
    Block(Vec<u32>),
}

/// Matrix-group data behind a projective or linear family, kept so that
/// extensions can re-realize the group on a larger domain.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub space: Space,
    pub hermitian: bool,
    /// Linear generators of the base group.
    pub matrices: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct LabeledGroup {
    pub name: String,
    pub family: Family,
    pub q: Option<u32>,
    /// Outer automorphism kinds adjoined by `extend`, empty for base groups.
    pub outer: Vec<Kind>,
    pub group: PermGroup,
    pub labels: Vec<Label>,
    pub geometry: Option<Geometry>,
}

impl LabeledGroup {
    pub fn plain(name: impl Into<String>, family: Family, group: PermGroup) -> LabeledGroup {
        let labels = (0..group.degree() as u32).map(Label::Index).collect();
        LabeledGroup {
            name: name.into(),
            family,
            q: None,
            outer: Vec::new(),
            group,
            labels,
            geometry: None,
        }
    }

    pub fn order(&self) -> &BigUint {
        self.group.order()
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }
}

fn perms(n: usize, cycles: &[&[&[u32]]]) -> Result<Vec<Perm>> {
    cycles.iter().map(|c| Perm::from_cycles(n, c)).collect()
}

pub fn symmetric(n: usize) -> Result<LabeledGroup> {
    let gens = if n < 2 {
        Vec::new()
    } else {
        let cycle: Vec<u32> = (0..n as u32).collect();
        perms(n, &[&[&[0, 1]], &[&cycle]])?
    };
    Ok(LabeledGroup::plain(
        format!("Sym{n}"),
        Family::Sym,
        PermGroup::from_generators(gens, n.max(1))?,
    ))
}

pub fn alternating(n: usize) -> Result<LabeledGroup> {
    let gens = (2..n as u32)
        .map(|k| Perm::from_cycles(n, &[&[0, 1, k]]))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledGroup::plain(
        format!("Alt{n}"),
        Family::Alt,
        PermGroup::from_generators(gens, n.max(1))?,
    ))
}

/// Regular cyclic group of order `n`.
pub fn cyclic(n: usize) -> Result<LabeledGroup> {
    let gens = if n < 2 {
        Vec::new()
    } else {
        let cycle: Vec<u32> = (0..n as u32).collect();
        perms(n, &[&[&cycle]])?
    };
    Ok(LabeledGroup::plain(
        format!("Cyclic{n}"),
        Family::Cyclic,
        PermGroup::from_generators(gens, n.max(1))?,
    ))
}

/// Dihedral group of order `2n` acting on the `n` vertices of a polygon.
pub fn dihedral(n: usize) -> Result<LabeledGroup> {
    if n < 3 {
        return Err(Error::Config("dihedral fixtures need n ≥ 3".into()));
    }
    let rot: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    let refl: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    let gens = vec![Perm::from_images(rot)?, Perm::from_images(refl)?];
    Ok(LabeledGroup::plain(
        format!("Dihedral{}", 2 * n),
        Family::Dihedral,
        PermGroup::from_generators(gens, n)?,
    ))
}

/// `AGL1(p)`: the maps `x ↦ ax + b` on `GF(p)`, order `p(p−1)`.
pub fn affine_line(p: u32) -> Result<LabeledGroup> {
    if p < 3 || !(2..p).all(|d| !p.is_multiple_of(d)) {
        return Err(Error::Config(format!("AGL1 needs an odd prime, got {p}")));
    }
    let translate: Vec<u32> = (0..p).map(|x| (x + 1) % p).collect();
    let root = (2..p)
        .find(|&a| {
            let mut y = a;
            let mut k = 1;
            while y != 1 {
                y = y * a % p;
                k += 1;
            }
            k == p - 1
        })
        .unwrap_or(1);
    let scale: Vec<u32> = (0..p).map(|x| x * root % p).collect();
    let gens = vec![Perm::from_images(translate)?, Perm::from_images(scale)?];
    Ok(LabeledGroup::plain(
        format!("AGL1({p})"),
        Family::Affine,
        PermGroup::from_generators(gens, p as usize)?,
    ))
}

/// `Sym3 ≀ C2` on 6 points, order 72.
pub fn wreath_s3_c2() -> Result<LabeledGroup> {
    let gens = perms(
        6,
        &[&[&[0, 1]], &[&[0, 1, 2]], &[&[0, 3], &[1, 4], &[2, 5]]],
    )?;
    Ok(LabeledGroup::plain(
        "Sym3wrC2",
        Family::Wreath,
        PermGroup::from_generators(gens, 6)?,
    ))
}

pub fn trivial() -> LabeledGroup {
    LabeledGroup::plain("Trivial", Family::Trivial, PermGroup::trivial(1))
}

/// `A × B` on the disjoint union of the two domains.
pub fn direct_product(a: &LabeledGroup, b: &LabeledGroup) -> Result<LabeledGroup> {
    let (da, db) = (a.degree(), b.degree());
    let n = da + db;
    let mut gens = Vec::new();
    for g in a.group.generators() {
        let mut images: Vec<u32> = g.images().to_vec();
        images.extend(da as u32..n as u32);
        gens.push(Perm::from_images(images)?);
    }
    for g in b.group.generators() {
        let mut images: Vec<u32> = (0..da as u32).collect();
        images.extend(g.images().iter().map(|&x| x + da as u32));
        gens.push(Perm::from_images(images)?);
    }
    let labels = a
        .labels
        .iter()
        .map(|l| Label::Factor(0, Box::new(l.clone())))
        .chain(
            b.labels
                .iter()
                .map(|l| Label::Factor(1, Box::new(l.clone()))),
        )
        .collect();
    Ok(LabeledGroup {
        name: format!("{}x{}", a.name, b.name),
        family: Family::Product,
        q: None,
        outer: Vec::new(),
        group: PermGroup::from_generators(gens, n)?,
        labels,
        geometry: None,
    })
}

/// `G/Z` for a central subgroup `Z`, acting on the `Z`-orbits when that
/// action is faithful and on the cosets of `Z` otherwise.
pub fn quotient_by_central(
    g: &LabeledGroup,
    z: &PermGroup,
    scan_cap: u128,
) -> Result<LabeledGroup> {
    let group = &g.group;
    if z.degree() != group.degree() || !group.contains_group(z) {
        return Err(Error::Precondition("Z is not a subgroup of G".into()));
    }
    for s in z.generators() {
        if !group.generators().iter().all(|x| x.commutes_with(s)) {
            return Err(Error::Precondition(format!("{s} is not central")));
        }
    }
    let target = group.order() / z.order();

    // action on Z-orbits
    let orbits = z.orbits();
    let mut block_of = vec![0u32; group.degree()];
    for (k, orb) in orbits.iter().enumerate() {
        for &x in orb {
            block_of[x as usize] = k as u32;
        }
    }
    let block_gens: Vec<Perm> = group
        .generators()
        .iter()
        .map(|s| {
            Perm::from_images(
                orbits
                    .iter()
                    .map(|orb| block_of[s.apply(orb[0]) as usize])
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    let on_blocks = PermGroup::from_generators(block_gens, orbits.len())?;
    let name = format!("{}/Z{}", g.name, z.order());
    if on_blocks.order() == &target {
        let labels = orbits.into_iter().map(Label::Block).collect();
        return Ok(LabeledGroup {
            name,
            family: Family::Quotient,
            q: g.q,
            outer: Vec::new(),
            group: on_blocks,
            labels,
            geometry: None,
        });
    }

    // regular action on the cosets Zx, each keyed by its smallest element
    group.check_cap(scan_cap)?;
    let z_elems = z.elements(scan_cap)?;
    let key = |x: &Perm| -> Perm { z_elems.iter().map(|c| c * x).min().expect("Z nonempty") };
    let mut cosets: Vec<Perm> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    group.for_each_element(|x| {
        let k = key(x);
        if seen.insert(k.clone()) {
            cosets.push(k);
        }
    });
    cosets.sort_unstable();
    let index: std::collections::HashMap<Perm, u32> = cosets
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();
    let gens: Vec<Perm> = group
        .generators()
        .iter()
        .map(|s| Perm::from_images(cosets.iter().map(|c| index[&key(&(c * s))]).collect()))
        .collect::<Result<_>>()?;
    let regular = PermGroup::from_generators(gens, cosets.len())?;
    if regular.order() != &target {
        return Err(Error::Internal(
            "coset action of G/Z has the wrong order".into(),
        ));
    }
    let labels = (0..cosets.len() as u32).map(Label::Index).collect();
    Ok(LabeledGroup {
        name,
        family: Family::Quotient,
        q: g.q,
        outer: Vec::new(),
        group: regular,
        labels,
        geometry: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_orders() {
        assert_eq!(symmetric(4).unwrap().order(), &BigUint::from(24u32));
        assert_eq!(alternating(5).unwrap().order(), &BigUint::from(60u32));
        assert_eq!(cyclic(6).unwrap().order(), &BigUint::from(6u32));
        assert_eq!(dihedral(5).unwrap().order(), &BigUint::from(10u32));
        assert_eq!(affine_line(5).unwrap().order(), &BigUint::from(20u32));
        assert_eq!(wreath_s3_c2().unwrap().order(), &BigUint::from(72u32));
        assert_eq!(trivial().order(), &BigUint::from(1u32));
    }

    #[test]
    fn products() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(
            direct_product(&s3, &s3).unwrap().order(),
            &BigUint::from(36u32)
        );
        let a = alternating(5).unwrap();
        let p = direct_product(&a, &trivial()).unwrap();
        assert_eq!(p.order(), a.order());
    }

    #[test]
    fn quotient_of_cyclic_six() {
        let c6 = cyclic(6).unwrap();
        let gen = c6.group.generators()[0].clone();
        let z = PermGroup::from_generators(vec![gen.pow(2)], 6).unwrap();
        let q = quotient_by_central(&c6, &z, 1_000_000).unwrap();
        assert_eq!(q.order(), &BigUint::from(2u32));
    }

    #[test]
    fn quotient_rejects_non_central() {
        let s3 = symmetric(3).unwrap();
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let z = PermGroup::from_generators(vec![t], 3).unwrap();
        assert!(matches!(
            quotient_by_central(&s3, &z, 1_000_000),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            Family::PSL2,
            Family::PGL2,
            Family::PSL3,
            Family::PGL3,
            Family::PSU3,
            Family::PGU3,
        ] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("PSL7".parse::<Family>().is_err());
    }
}
