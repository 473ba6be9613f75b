use std::fmt;
use std::ops::Mul;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A permutation of `{0, …, n-1}` stored as its image list.
///
/// Permutations act on the right: `(a * b).apply(i) == b.apply(a.apply(i))`,
/// so `a * b` means "first `a`, then `b`".
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its images, rejecting anything that is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            let x = x as usize;
            if x >= n {
                return Err(Error::MalformedGenerator(format!(
                    "image {x} of point {i} is outside 0..{n}"
                )));
            }
            if seen[x] {
                return Err(Error::MalformedGenerator(format!("point {x} is hit twice")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::MalformedGenerator(format!(
                        "cycle point {} outside degree {degree}",
                        a.max(b)
                    )));
                }
                if touched[a as usize] {
                    return Err(Error::MalformedGenerator(format!(
                        "point {a} appears in two cycles"
                    )));
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Perm::from_images(images)
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)` or `(1,2)(3,4)`.
    /// The empty string and `()` denote the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Perm> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut current: Option<Vec<u32>> = None;
        let mut token = String::new();
        let flush = |token: &mut String, current: &mut Option<Vec<u32>>| -> Result<()> {
            if token.is_empty() {
                return Ok(());
            }
            let cyc = current.as_mut().ok_or_else(|| {
                Error::MalformedGenerator(format!("point `{token}` outside a cycle"))
            })?;
            let v: u32 = token
                .parse()
                .map_err(|_| Error::MalformedGenerator(format!("bad point token `{token}`")))?;
            if v == 0 || v as usize > degree {
                return Err(Error::MalformedGenerator(format!(
                    "point {v} outside 1..={degree}"
                )));
            }
            cyc.push(v - 1);
            token.clear();
            Ok(())
        };
        for c in text.chars() {
            match c {
                '(' => {
                    if current.is_some() {
                        return Err(Error::MalformedGenerator("nested `(`".into()));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush(&mut token, &mut current)?;
                    let cyc = current
                        .take()
                        .ok_or_else(|| Error::MalformedGenerator("unmatched `)`".into()))?;
                    if !cyc.is_empty() {
                        cycles.push(cyc);
                    }
                }
                ',' | ' ' | '\t' => flush(&mut token, &mut current)?,
                d if d.is_ascii_digit() => token.push(d),
                other => {
                    return Err(Error::MalformedGenerator(format!(
                        "unexpected character `{other}`"
                    )))
                }
            }
        }
        if current.is_some() {
            return Err(Error::MalformedGenerator("unterminated cycle".into()));
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(degree, &refs)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        // (g⁻¹ x g)(g(i)) = g(x(i))
        let mut out = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            out[g.images[i] as usize] = g.images[x as usize];
        }
        Perm { images: out }
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images
            .iter()
            .zip(other.images.iter())
            .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    /// `self^p == 1` without allocating.
    pub fn satisfies_power_identity(&self, p: u32) -> bool {
        for start in 0..self.images.len() as u32 {
            let mut x = start;
            for _ in 0..p {
                x = self.images[x as usize];
            }
            if x != start {
                return false;
            }
        }
        true
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut ord: u64 = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            ord = ord.lcm(&len);
        }
        ord
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        let mut transpositions = 0usize;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut x = start;
            let mut len = 0;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions.is_multiple_of(2)
    }

    /// Nontrivial cycles, 0-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// 1-based cycle notation with comma separators, `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&parts.join(","));
            s.push(')');
        }
        s
    }

    /// Restriction to the points `offset..offset+len`, which must be invariant.
    pub fn restrict(&self, offset: usize, len: usize) -> Perm {
        Perm {
            images: self.images[offset..offset + len]
                .iter()
                .map(|&x| x - offset as u32)
                .collect(),
        }
    }
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| rhs.images[x as usize])
                .collect(),
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_action_composition() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!((&a * &b).apply(0), 2);
        assert!((&a * &a.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
        assert!(Perm::parse_cycles(4, "(1 2)(2 3)").is_err());
        assert!(Perm::parse_cycles(4, "(1 5)").is_err());
        assert!(Perm::parse_cycles(4, "(1 x)").is_err());
    }

    #[test]
    fn cycle_string_round_trip() {
        let p = Perm::parse_cycles(6, "(1 2 3)(5,6)").unwrap();
        assert_eq!(p.to_cycle_string(), "(1,2,3)(5,6)");
        assert_eq!(Perm::parse_cycles(6, &p.to_cycle_string()).unwrap(), p);
        assert_eq!(p.order(), 6);
        assert!(!p.is_even());
        assert!(Perm::parse_cycles(3, "()").unwrap().is_identity());
    }

    #[test]
    fn conjugation_matches_definition() {
        let x = Perm::parse_cycles(5, "(1 2 3)").unwrap();
        let g = Perm::parse_cycles(5, "(1 4)(2 5)").unwrap();
        let direct = &(&g.inverse() * &x) * &g;
        assert_eq!(x.conjugate_by(&g), direct);
        assert!(x.commutes_with(&x.pow(2)));
        assert!(!x.commutes_with(&g));
        assert!(x.satisfies_power_identity(3));
        assert!(!x.satisfies_power_identity(2));
    }
}
