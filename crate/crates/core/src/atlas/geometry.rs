//! Point sets over finite fields and the permutations that matrices,
//! field automorphisms and the point–line duality induce on them.

use std::collections::HashMap;

use super::field::FieldTable;
use crate::error::{Error, Result};
use crate::permgroup::Perm;

/// Square matrix over a `FieldTable`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub n: usize,
    pub entries: Vec<u32>,
}

impl Matrix {
    pub fn identity(n: usize) -> Matrix {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Matrix { n, entries }
    }

    pub fn diagonal(diag: &[u32]) -> Matrix {
        let mut m = Matrix::identity(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = d;
        }
        m
    }

    /// Identity plus `t` in position `(i, j)`, `i ≠ j`.
    pub fn transvection(n: usize, i: usize, j: usize, t: u32) -> Matrix {
        let mut m = Matrix::identity(n);
        m.entries[i * n + j] = t;
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Matrix, f: &FieldTable) -> Matrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 0..n {
                    s = f.add(s, f.mul(self.get(i, k), other.get(k, j)));
                }
                entries[i * n + j] = s;
            }
        }
        Matrix { n, entries }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        Matrix { n, entries }
    }

    /// Entrywise `x ↦ x^(r^k)`.
    pub fn frobenius(&self, f: &FieldTable, k: u32) -> Matrix {
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|&x| f.frobenius_power(x, k))
                .collect(),
        }
    }

    pub fn determinant(&self, f: &FieldTable) -> u32 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let p = a[col * n + col];
            det = f.mul(det, p);
            let pinv = f.inv(p).expect("nonzero pivot");
            for r in (col + 1)..n {
                let factor = f.mul(a[r * n + col], pinv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(a[r * n + c], f.mul(factor, a[col * n + c]));
                    a[r * n + c] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FieldTable) -> Option<Matrix> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut b = Matrix::identity(n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * n + col] != 0)?;
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
                b.swap(piv * n + c, col * n + c);
            }
            let pinv = f.inv(a[col * n + col])?;
            for c in 0..n {
                a[col * n + c] = f.mul(a[col * n + c], pinv);
                b[col * n + c] = f.mul(b[col * n + c], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = f.sub(a[r * n + c], f.mul(factor, a[col * n + c]));
                    b[r * n + c] = f.sub(b[r * n + c], f.mul(factor, b[col * n + c]));
                }
            }
        }
        Some(Matrix { n, entries: b })
    }
}

/// Row vector times matrix.
pub fn vec_mul(v: &[u32], m: &Matrix, f: &FieldTable) -> Vec<u32> {
    (0..m.n)
        .map(|j| {
            v.iter()
                .enumerate()
                .fold(0, |s, (i, &x)| f.add(s, f.mul(x, m.get(i, j))))
        })
        .collect()
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn normalize(v: &[u32], f: &FieldTable) -> Vec<u32> {
    match v.iter().find(|&&x| x != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = f.inv(lead).expect("nonzero");
            v.iter().map(|&x| f.mul(x, inv)).collect()
        }
    }
}

/// `Σ u_i v_{n-1-i}^q`, the antidiagonal Hermitian form over GF(q²).
pub fn hermitian_form(u: &[u32], v: &[u32], f: &FieldTable) -> u32 {
    let n = u.len();
    let half = f.degree() / 2;
    (0..n).fold(0, |s, i| {
        f.add(s, f.mul(u[i], f.frobenius_power(v[n - 1 - i], half)))
    })
}

/// What the permutation domain consists of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    /// Normalized nonzero vectors (projective points).
    Projective,
    /// Projective points followed by hyperplanes (same coordinates, as
    /// normal vectors), so that dualities act.
    PointsAndHyperplanes,
    /// All nonzero vectors; matrices act linearly, not projectively.
    Vectors,
}

/// A finite point set of `GF(q)^n` with an index, on which semilinear maps
/// act by permutations.
#[derive(Clone, Debug)]
pub struct Space {
    pub field: FieldTable,
    pub n: usize,
    pub kind: DomainKind,
    /// Coordinates of the first half (points or vectors).
    pub points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

impl Space {
    /// All points of `PG(n−1, q)`, or all nonzero vectors for
    /// `DomainKind::Vectors`, optionally filtered.
    pub fn new<F>(field: FieldTable, n: usize, kind: DomainKind, keep: F) -> Space
    where
        F: Fn(&[u32], &FieldTable) -> bool,
    {
        let q = field.q() as u64;
        let total = q.pow(n as u32);
        let mut points = Vec::new();
        for code in 1..total {
            // most significant coordinate first, so normalized vectors come
            // out in lexicographic order
            let mut v = vec![0u32; n];
            let mut c = code;
            for i in (0..n).rev() {
                v[i] = (c % q) as u32;
                c /= q;
            }
            if kind != DomainKind::Vectors && normalize(&v, &field) != v {
                continue;
            }
            if keep(&v, &field) {
                points.push(v);
            }
        }
        let index = points
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        Space {
            field,
            n,
            kind,
            points,
            index,
        }
    }

    /// Number of points in the permutation domain.
    pub fn degree(&self) -> usize {
        match self.kind {
            DomainKind::PointsAndHyperplanes => 2 * self.points.len(),
            _ => self.points.len(),
        }
    }

    pub fn index_of(&self, v: &[u32]) -> Option<u32> {
        let key = match self.kind {
            DomainKind::Vectors => v.to_vec(),
            _ => normalize(v, &self.field),
        };
        self.index.get(&key).copied()
    }

    fn image_permutation<F>(&self, map: F) -> Result<Perm>
    where
        F: Fn(usize, &[u32]) -> (usize, Vec<u32>),
    {
        let half = self.points.len();
        let halves = if self.kind == DomainKind::PointsAndHyperplanes {
            2
        } else {
            1
        };
        let mut images = Vec::with_capacity(half * halves);
        for h in 0..halves {
            for v in &self.points {
                let (out_half, w) = map(h, v);
                let k = self.index_of(&w).ok_or_else(|| {
                    Error::Construction(format!(
                        "map does not preserve the point set (image {w:?})"
                    ))
                })?;
                images.push(k + (out_half * half) as u32);
            }
        }
        Perm::from_images(images)
            .map_err(|e| Error::Construction(format!("map is not a bijection: {e}")))
    }

    /// Permutation induced by `v ↦ vM` on points and `w ↦ w M^{-T}` on
    /// hyperplanes.
    pub fn matrix_perm(&self, m: &Matrix) -> Result<Perm> {
        let f = &self.field;
        let dual = m
            .inverse(f)
            .ok_or_else(|| Error::Construction("singular matrix".into()))?
            .transpose();
        self.image_permutation(|h, v| {
            if h == 0 {
                (0, vec_mul(v, m, f))
            } else {
                (1, vec_mul(v, &dual, f))
            }
        })
    }

    /// Coordinatewise `x ↦ x^(r^k)` on both halves.
    pub fn frobenius_perm(&self, k: u32) -> Result<Perm> {
        let f = &self.field;
        self.image_permutation(|h, v| (h, v.iter().map(|&x| f.frobenius_power(x, k)).collect()))
    }

    /// The polarity swapping the point with coordinates `v` and the
    /// hyperplane with normal vector `v`.
    pub fn duality_perm(&self) -> Result<Perm> {
        if self.kind != DomainKind::PointsAndHyperplanes {
            return Err(Error::Capability(
                "duality needs the points-and-hyperplanes domain".into(),
            ));
        }
        self.image_permutation(|h, v| (1 - h, v.to_vec()))
    }

    /// Label of a domain point.
    pub fn label(&self, point: usize) -> (bool, &[u32]) {
        let half = self.points.len();
        if point < half {
            (false, &self.points[point])
        } else {
            (true, &self.points[point - half])
        }
    }
}

pub fn dot(u: &[u32], v: &[u32], f: &FieldTable) -> u32 {
    u.iter().zip(v).fold(0, |s, (&a, &b)| f.add(s, f.mul(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::field::make_field;

    #[test]
    fn inverse_and_determinant() {
        let f = make_field(9).unwrap();
        let m = Matrix {
            n: 3,
            entries: vec![1, 2, 3, 0, 4, 5, 6, 0, 7],
        };
        let det = m.determinant(&f);
        assert_ne!(det, 0);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(3));
        let d = Matrix::diagonal(&[f.primitive(), 1, 1]);
        assert_eq!(d.determinant(&f), f.primitive());
    }

    #[test]
    fn projective_plane_sizes() {
        let f = make_field(3).unwrap();
        let s = Space::new(f.clone(), 3, DomainKind::Projective, |_, _| true);
        assert_eq!(s.degree(), 13);
        let s = Space::new(f, 3, DomainKind::PointsAndHyperplanes, |_, _| true);
        assert_eq!(s.degree(), 26);
        let f = make_field(9).unwrap();
        let s = Space::new(f, 3, DomainKind::Projective, |v, f| {
            hermitian_form(v, v, f) == 0
        });
        assert_eq!(s.degree(), 28);
    }

    #[test]
    fn duality_is_an_involution_preserving_incidence() {
        let f = make_field(3).unwrap();
        let s = Space::new(f.clone(), 3, DomainKind::PointsAndHyperplanes, |_, _| true);
        let g = s.duality_perm().unwrap();
        assert!((&g * &g).is_identity());
        let m = Matrix::transvection(3, 0, 1, 1);
        let pm = s.matrix_perm(&m).unwrap();
        let half = s.points.len();
        for a in 0..half {
            for b in half..2 * half {
                let inc = dot(&s.points[a], &s.points[b - half], &f) == 0;
                let (ia, ib) = (pm.apply(a as u32) as usize, pm.apply(b as u32) as usize);
                assert_eq!(dot(&s.points[ia], &s.points[ib - half], &f) == 0, inc);
            }
        }
    }
}
