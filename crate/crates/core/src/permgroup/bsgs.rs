use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use super::perm::Perm;
use crate::error::{Error, Result};

const ABSENT: u32 = u32::MAX;

/// One level of a stabilizer chain: `G^(i)` with its basic orbit and transversal.
#[derive(Clone, Debug)]
struct Level {
    base_point: u32,
    /// Strong generators lying in the stabilizer of all earlier base points.
    gens: Vec<Perm>,
    /// Basic orbit in breadth-first discovery order.
    orbit: Vec<u32>,
    /// point -> position in `orbit`, or `ABSENT`.
    orbit_index: Vec<u32>,
    /// `transversal[k]` maps `base_point` to `orbit[k]`.
    transversal: Vec<Perm>,
    inv_transversal: Vec<Perm>,
}

impl Level {
    fn new(degree: usize, base_point: u32, gens: Vec<Perm>) -> Level {
        let mut level = Level {
            base_point,
            gens,
            orbit: Vec::new(),
            orbit_index: vec![ABSENT; degree],
            transversal: Vec::new(),
            inv_transversal: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.orbit.clear();
        self.transversal.clear();
        self.inv_transversal.clear();
        self.orbit_index.iter_mut().for_each(|x| *x = ABSENT);
        self.orbit.push(self.base_point);
        self.orbit_index[self.base_point as usize] = 0;
        self.transversal.push(Perm::identity(degree));
        self.inv_transversal.push(Perm::identity(degree));
        let mut head = 0;
        while head < self.orbit.len() {
            let delta = self.orbit[head];
            for s in &self.gens {
                let gamma = s.apply(delta);
                if self.orbit_index[gamma as usize] == ABSENT {
                    let u = &self.transversal[head] * s;
                    self.orbit_index[gamma as usize] = self.orbit.len() as u32;
                    self.orbit.push(gamma);
                    self.inv_transversal.push(u.inverse());
                    self.transversal.push(u);
                }
            }
            head += 1;
        }
    }

    #[inline]
    fn index_of(&self, point: u32) -> Option<usize> {
        match self.orbit_index[point as usize] {
            ABSENT => None,
            k => Some(k as usize),
        }
    }
}

/// A permutation group given by generators, with a base and strong generating
/// set built by deterministic Schreier–Sims.
///
/// Base points are chosen as the smallest point moved by the element that
/// forces a new level, so construction is reproducible run to run.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        }
    }

    /// Builds the group generated by `gens` acting on `degree` points.
    pub fn from_generators(gens: Vec<Perm>, degree: usize) -> Result<PermGroup> {
        for (k, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(Error::MalformedGenerator(format!(
                    "generator {k} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
            // Perm values are bijections by construction; re-validate anyway for
            // permutations that crossed an API boundary.
            Perm::from_images(g.images().to_vec())?;
        }
        let mut group = PermGroup::trivial(degree);
        let mut distinct: Vec<Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !distinct.contains(&g) {
                distinct.push(g);
            }
        }
        group.generators = distinct.clone();
        for g in distinct {
            group.insert_strong_generator(g);
        }
        group.schreier_sims();
        Ok(group)
    }

    /// The group generated by `self` and `g`, reusing the existing chain.
    pub fn with_generator(&self, g: Perm) -> PermGroup {
        debug_assert_eq!(g.degree(), self.degree);
        if self.contains(&g) {
            return self.clone();
        }
        let mut out = self.clone();
        out.generators.push(g.clone());
        out.insert_strong_generator(g);
        out.schreier_sims();
        out
    }

    /// Closure of `elements`, adding only elements that are not yet members.
    /// Stops early once the order reaches `target_order`, if given.
    pub fn closure_of<'a, I>(
        degree: usize,
        elements: I,
        target_order: Option<&BigUint>,
    ) -> PermGroup
    where
        I: IntoIterator<Item = &'a Perm>,
    {
        let mut group = PermGroup::trivial(degree);
        for g in elements {
            if let Some(t) = target_order {
                if &group.order == t {
                    break;
                }
            }
            if !group.contains(g) {
                group = group.with_generator(g.clone());
            }
        }
        group
    }

    fn insert_strong_generator(&mut self, g: Perm) {
        let mut depth = 0;
        while depth < self.levels.len()
            && g.apply(self.levels[depth].base_point) == self.levels[depth].base_point
        {
            depth += 1;
        }
        if depth == self.levels.len() {
            let b = g
                .first_moved_point()
                .expect("identity is never inserted as a strong generator");
            self.levels.push(Level::new(self.degree, b, Vec::new()));
        }
        for l in 0..=depth {
            self.levels[l].gens.push(g.clone());
            self.levels[l].rebuild_orbit(self.degree);
        }
    }

    /// Sift `g` starting at level `from`; returns the residue and the level
    /// at which it dropped out (`levels.len()` if it sifted through).
    fn strip(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let delta = h.apply(level.base_point);
            match level.index_of(delta) {
                None => return (h, l),
                Some(k) => h = &h * &level.inv_transversal[k],
            }
        }
        (h, self.levels.len())
    }

    fn schreier_sims(&mut self) {
        if self.levels.is_empty() {
            self.recompute_order();
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut restart_at: Option<usize> = None;
            'scan: for k in 0..self.levels[li].orbit.len() {
                for s_idx in 0..self.levels[li].gens.len() {
                    let level = &self.levels[li];
                    let s = &level.gens[s_idx];
                    let gamma = s.apply(level.orbit[k]);
                    let kg = level
                        .index_of(gamma)
                        .expect("orbit closed under its generators");
                    let us = &level.transversal[k] * s;
                    if us == level.transversal[kg] {
                        continue;
                    }
                    let schreier = &us * &level.inv_transversal[kg];
                    let (h, j) = self.strip(&schreier, li + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        let j = if j == self.levels.len() {
                            let b = h.first_moved_point().expect("nonidentity residue");
                            self.levels.push(Level::new(self.degree, b, Vec::new()));
                            j
                        } else {
                            j
                        };
                        for l in (li + 1)..=j {
                            self.levels[l].gens.push(h.clone());
                            self.levels[l].rebuild_orbit(self.degree);
                        }
                        restart_at = Some(j);
                        break 'scan;
                    }
                }
            }
            match restart_at {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        self.recompute_order();
    }

    fn recompute_order(&mut self) {
        self.order = self
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Order as `u128`, if it fits.
    pub fn order_u128(&self) -> Option<u128> {
        self.order.to_u128()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Position of `g` in the fixed enumeration order of the group
    /// (mixed radix over the basic transversals, level 0 least significant).
    pub fn element_id(&self, g: &Perm) -> Option<u128> {
        if g.degree() != self.degree {
            return None;
        }
        let mut h = g.clone();
        let mut id: u128 = 0;
        let mut radix: u128 = 1;
        for level in &self.levels {
            let k = level.index_of(h.apply(level.base_point))?;
            id += k as u128 * radix;
            radix = radix.checked_mul(level.orbit.len() as u128)?;
            h = &h * &level.inv_transversal[k];
        }
        if h.is_identity() {
            Some(id)
        } else {
            None
        }
    }

    /// Uniformly random element, from a caller-supplied generator.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut g = self.identity();
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.orbit.len());
            g = &g * &level.transversal[k];
        }
        g
    }

    /// Visits every element exactly once in increasing `element_id` order.
    pub fn for_each_element<F: FnMut(&Perm)>(&self, mut f: F) {
        if self.levels.is_empty() {
            f(&self.identity());
            return;
        }
        let top = self.levels.len() - 1;
        self.walk(top, &self.identity(), &mut |p: &Perm| f(p));
    }

    fn walk(&self, level: usize, prefix: &Perm, f: &mut dyn FnMut(&Perm)) {
        for u in &self.levels[level].transversal {
            let next = prefix * u;
            if level == 0 {
                f(&next);
            } else {
                self.walk(level - 1, &next, f);
            }
        }
    }

    /// All elements, refusing groups larger than `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<Perm>> {
        self.check_cap(cap)?;
        let mut out = Vec::new();
        self.for_each_element(|g| out.push(g.clone()));
        Ok(out)
    }

    pub fn check_cap(&self, cap: u128) -> Result<()> {
        match self.order_u128() {
            Some(n) if n <= cap => Ok(()),
            _ => Err(Error::Resource {
                what: format!("element scan of a group of order {}", self.order),
                limit: cap,
                flag: "--cap",
            }),
        }
    }

    /// Elements `x != 1` with `x^p = 1`, in enumeration order. The final
    /// transversal factor is applied lazily so most non-solutions are
    /// rejected after a few point lookups.
    pub fn elements_of_order_p(&self, p: u32, cap: u128) -> Result<Vec<Perm>> {
        self.check_cap(cap)?;
        let mut out = Vec::new();
        if self.levels.is_empty() {
            return Ok(out);
        }
        let top = self.levels.len() - 1;
        if top == 0 {
            self.order_p_leaves(&self.identity(), p, &mut out);
        } else {
            self.order_p_walk(top, &self.identity(), p, &mut out);
        }
        Ok(out)
    }

    fn order_p_walk(&self, level: usize, prefix: &Perm, p: u32, out: &mut Vec<Perm>) {
        for u in &self.levels[level].transversal {
            let next = prefix * u;
            if level == 1 {
                self.order_p_leaves(&next, p, out);
            } else {
                self.order_p_walk(level - 1, &next, p, out);
            }
        }
    }

    fn order_p_leaves(&self, prefix: &Perm, p: u32, out: &mut Vec<Perm>) {
        let pre = prefix.images();
        let n = self.degree as u32;
        'leaf: for u in &self.levels[0].transversal {
            let ui = u.images();
            let mut moved = false;
            for start in 0..n {
                let mut x = start;
                for _ in 0..p {
                    x = ui[pre[x as usize] as usize];
                }
                if x != start {
                    continue 'leaf;
                }
                if !moved && ui[pre[start as usize] as usize] != start {
                    moved = true;
                }
            }
            if moved {
                out.push(prefix * u);
            }
        }
    }

    /// Whether `sub`'s generators all lie in `self`.
    pub fn contains_group(&self, sub: &PermGroup) -> bool {
        sub.degree == self.degree && sub.generators().iter().all(|g| self.contains(g))
    }

    pub fn is_normalized_by(&self, g: &Perm) -> bool {
        self.generators
            .iter()
            .all(|h| self.contains(&h.conjugate_by(g)))
    }

    /// `self` is normal in `overgroup` (checked on generators).
    pub fn is_normal_in(&self, overgroup: &PermGroup) -> bool {
        overgroup
            .generators()
            .iter()
            .all(|g| self.is_normalized_by(g))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Orbits of the group on points, each sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start as u32];
            seen[start] = true;
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                for g in &self.generators {
                    let y = g.apply(x);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        orbit.push(y);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(n: usize) -> PermGroup {
        let cyc: Vec<u32> = (0..n as u32).collect();
        PermGroup::from_generators(
            vec![
                Perm::from_cycles(n, &[&[0, 1]]).unwrap(),
                Perm::from_cycles(n, &[&cyc]).unwrap(),
            ],
            n,
        )
        .unwrap()
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        assert_eq!(sym(4).order(), &BigUint::from(24u32));
        let a5 = PermGroup::from_generators(
            vec![
                Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
                Perm::from_cycles(5, &[&[2, 3, 4]]).unwrap(),
            ],
            5,
        )
        .unwrap();
        assert_eq!(a5.order(), &BigUint::from(60u32));
        assert_eq!(sym(8).order(), &BigUint::from(40320u32));
    }

    #[test]
    fn degree_mismatch_is_malformed() {
        let err = PermGroup::from_generators(vec![Perm::identity(3)], 4).unwrap_err();
        assert!(matches!(err, Error::MalformedGenerator(_)));
    }

    #[test]
    fn enumeration_matches_order_and_ids() {
        let g = sym(5);
        let elems = g.elements(1000).unwrap();
        assert_eq!(elems.len(), 120);
        for (k, e) in elems.iter().enumerate() {
            assert_eq!(g.element_id(e), Some(k as u128));
        }
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 120);
    }

    #[test]
    fn membership_rejects_odd_permutation_in_alternating() {
        let a5 = PermGroup::from_generators(
            vec![
                Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
                Perm::from_cycles(5, &[&[2, 3, 4]]).unwrap(),
            ],
            5,
        )
        .unwrap();
        assert!(!a5.contains(&Perm::from_cycles(5, &[&[0, 1]]).unwrap()));
        assert!(a5.contains(&Perm::from_cycles(5, &[&[0, 1], &[2, 3]]).unwrap()));
    }

    #[test]
    fn order_two_elements_of_s4() {
        let g = sym(4);
        assert_eq!(g.elements_of_order_p(2, 100).unwrap().len(), 9);
        assert_eq!(g.elements_of_order_p(3, 100).unwrap().len(), 8);
        assert!(matches!(
            g.elements_of_order_p(2, 10),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn random_elements_are_members() {
        let g = sym(6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert!(g.contains(&g.random_element(&mut rng)));
        }
    }
}
