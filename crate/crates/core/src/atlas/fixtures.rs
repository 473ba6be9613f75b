//! Groups shipped as files: small exceptional cases realized through
//! classical isomorphisms.

use std::collections::HashMap;

use super::file::write_group_file;
use super::labeled::{Family, Label, LabeledGroup};
use super::lie::projective_group;
use crate::error::{Error, Result};
use crate::permgroup::{sylow_subgroup, Caps, Perm, PermGroup};

/// Action of `group` by conjugation on the conjugates of `sub`, as a
/// permutation group on the conjugates (in discovery order).
pub fn conjugation_action(group: &PermGroup, sub: &PermGroup, caps: &Caps) -> Result<PermGroup> {
    let key = |elems: Vec<Perm>| {
        let mut v = elems;
        v.sort_unstable();
        v
    };
    let start = key(sub.elements(caps.scan_cap)?);
    let mut index: HashMap<Vec<Perm>, u32> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut conjugates = vec![start];
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); group.generators().len()];
    let mut head = 0;
    while head < conjugates.len() {
        for (k, g) in group.generators().iter().enumerate() {
            let image = key(conjugates[head].iter().map(|x| x.conjugate_by(g)).collect());
            let next = index.len() as u32;
            let id = *index.entry(image.clone()).or_insert(next);
            if id == next {
                conjugates.push(image);
            }
            images[k].push(id);
        }
        head += 1;
    }
    let gens = images
        .into_iter()
        .map(Perm::from_images)
        .collect::<Result<Vec<_>>>()?;
    PermGroup::from_generators(gens, conjugates.len())
}

/// `²G₂(3) ≅ PΓL2(8)` and its derived group `²G₂(3)′ ≅ PSL2(8)`, both on
/// the 28 conjugates of a Sylow 3-subgroup of `PSL2(8)`.
pub fn ree_small(caps: &Caps) -> Result<(LabeledGroup, LabeledGroup)> {
    let l = projective_group(Family::PSL2, 8)?;
    let space = &l
        .geometry
        .as_ref()
        .expect("projective groups carry geometry")
        .space;
    let frob = space.frobenius_perm(1)?;
    let full = l.group.with_generator(frob);
    let sylow = sylow_subgroup(&l.group, 3, caps)?;
    let on28 = conjugation_action(&full, &sylow, caps)?;
    let derived_on28 = {
        // the first generators of `full` are those of PSL2(8)
        let k = l.group.generators().len();
        PermGroup::from_generators(on28.generators()[..k].to_vec(), on28.degree())?
    };
    if on28.degree() != 28
        || on28.order_u128() != Some(1512)
        || derived_on28.order_u128() != Some(504)
    {
        return Err(Error::Internal(format!(
            "Ree fixture: degree {}, orders {} and {}",
            on28.degree(),
            on28.order(),
            derived_on28.order()
        )));
    }
    let wrap = |name: &str, g: PermGroup| {
        let mut lg = LabeledGroup::plain(name, Family::File, g);
        lg.labels = (0..28).map(Label::Index).collect();
        lg
    };
    Ok((wrap("2G2(3)", on28), wrap("2G2(3)'", derived_on28)))
}

/// File contents of the shipped fixtures, by file name.
pub fn fixture_files(caps: &Caps) -> Result<Vec<(String, String)>> {
    let psl2_8 = projective_group(Family::PSL2, 8)?;
    let (ree, ree_derived) = ree_small(caps)?;
    Ok(vec![
        (
            "psl2_8.grp".into(),
            write_group_file("PSL2(8)", &psl2_8.group, Some(8)),
        ),
        (
            "ree_3.grp".into(),
            write_group_file(&ree.name, &ree.group, None),
        ),
        (
            "ree_3_derived.grp".into(),
            write_group_file(&ree_derived.name, &ree_derived.group, None),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::symmetric;

    #[test]
    fn conjugation_on_sylow_threes_of_sym4() {
        let s4 = symmetric(4).unwrap().group;
        let p = sylow_subgroup(&s4, 3, &Caps::default()).unwrap();
        let g = conjugation_action(&s4, &p, &Caps::default()).unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(g.order_u128(), Some(24));
    }

    #[test]
    fn ree_groups_on_28_points() {
        let (ree, derived) = ree_small(&Caps::default()).unwrap();
        assert_eq!(ree.group.order_u128(), Some(1512));
        assert_eq!(derived.group.order_u128(), Some(504));
        assert!(derived.group.is_normal_in(&ree.group));
        assert_eq!(ree.group.orbits().len(), 1);
    }

    #[test]
    fn shipped_fixtures_are_current() {
        // QUILLEN_WRITE_FIXTURES=1 regenerates the files
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        for (name, contents) in fixture_files(&Caps::default()).unwrap() {
            let path = dir.join(&name);
            if std::env::var_os("QUILLEN_WRITE_FIXTURES").is_some() {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &contents).unwrap();
            }
            let shipped = std::fs::read_to_string(&path).unwrap();
            assert_eq!(shipped, contents, "{name} is stale");
        }
    }
}
