use crate::error::{Error, Result};

/// Field sizes with a built-in defining polynomial.
pub const SUPPORTED_FIELDS: &[u32] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 81];

/// Monic defining polynomials, coefficients from the constant term up
/// (leading 1 omitted). Prime fields need none.
fn defining_polynomial(q: u32) -> Option<(u32, u32, &'static [u32])> {
    // (characteristic, degree, low coefficients)
    Some(match q {
        2 => (2, 1, &[]),
        3 => (3, 1, &[]),
        5 => (5, 1, &[]),
        7 => (7, 1, &[]),
        11 => (11, 1, &[]),
        13 => (13, 1, &[]),
        4 => (2, 2, &[1, 1]),        // x^2 + x + 1
        8 => (2, 3, &[1, 1, 0]),     // x^3 + x + 1
        16 => (2, 4, &[1, 1, 0, 0]), // x^4 + x + 1
        9 => (3, 2, &[2, 2]),        // x^2 + 2x + 2
        27 => (3, 3, &[1, 2, 0]),    // x^3 + 2x + 1
        81 => (3, 4, &[2, 0, 0, 2]), // x^4 + 2x^3 + 2
        25 => (5, 2, &[2, 4]),       // x^2 + 4x + 2
        49 => (7, 2, &[3, 6]),       // x^2 + 6x + 3
        _ => return None,
    })
}

/// Arithmetic tables for GF(q).
///
/// Element `x` encodes the polynomial `Σ c_i t^i` with `x = Σ c_i r^i`, so
/// `0` and `1` are the additive and multiplicative identities and the prime
/// subfield is `0..r`.
#[derive(Clone, Debug)]
pub struct FieldTable {
    q: u32,
    characteristic: u32,
    degree: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frobenius: Vec<u32>,
    primitive: u32,
}

pub fn make_field(q: u32) -> Result<FieldTable> {
    let (r, a, low) = defining_polynomial(q).ok_or_else(|| {
        Error::Config(format!(
            "unsupported field size {q}; supported sizes: {:?}",
            SUPPORTED_FIELDS
        ))
    })?;
    let n = q as usize;
    let digits = |x: u32| -> Vec<u32> {
        let mut v = vec![0; a as usize];
        let mut x = x;
        for d in v.iter_mut() {
            *d = x % r;
            x /= r;
        }
        v
    };
    let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * r + d) };

    let mut add = vec![0u32; n * n];
    let mut mul = vec![0u32; n * n];
    for x in 0..q {
        let dx = digits(x);
        for y in 0..q {
            let dy = digits(y);
            let s: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % r).collect();
            add[(x * q + y) as usize] = encode(&s);

            // schoolbook product, then reduce by t^a = -Σ low_i t^i
            let mut prod = vec![0u32; 2 * a as usize];
            for (i, &ci) in dx.iter().enumerate() {
                for (j, &cj) in dy.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + ci * cj) % r;
                }
            }
            for k in (a as usize..prod.len()).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, &li) in low.iter().enumerate() {
                    let idx = k - a as usize + i;
                    prod[idx] = (prod[idx] + (r - (c * li) % r)) % r;
                }
            }
            mul[(x * q + y) as usize] = encode(&prod[..a as usize]);
        }
    }
    let mut neg = vec![0u32; n];
    let mut inv = vec![0u32; n];
    for x in 0..q {
        for y in 0..q {
            if add[(x * q + y) as usize] == 0 {
                neg[x as usize] = y;
            }
            if mul[(x * q + y) as usize] == 1 {
                inv[x as usize] = y;
            }
        }
    }
    let mut field = FieldTable {
        q,
        characteristic: r,
        degree: a,
        add,
        mul,
        neg,
        inv,
        frobenius: Vec::new(),
        primitive: 0,
    };
    field.frobenius = (0..q).map(|x| field.pow(x, r as u64)).collect();
    field.primitive = (1..q)
        .find(|&x| field.multiplicative_order(x) == (q - 1) as u64)
        .ok_or_else(|| Error::Internal(format!("no primitive element in GF({q})")))?;
    Ok(field)
}

impl FieldTable {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    /// `a` in `q = r^a`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + y) as usize]
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg[y as usize])
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[(x * self.q + y) as usize]
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: u32) -> Option<u32> {
        (x != 0).then(|| self.inv[x as usize])
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x ↦ x^r`.
    #[inline]
    pub fn frobenius(&self, x: u32) -> u32 {
        self.frobenius[x as usize]
    }

    /// `x ↦ x^(r^k)`.
    pub fn frobenius_power(&self, x: u32, k: u32) -> u32 {
        (0..k % self.degree.max(1)).fold(x, |y, _| self.frobenius(y))
    }

    /// The Frobenius map as a permutation of the field elements.
    pub fn frobenius_table(&self) -> &[u32] {
        &self.frobenius
    }

    /// A generator of the multiplicative group (smallest encoding).
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    pub fn multiplicative_order(&self, x: u32) -> u64 {
        if x == 0 {
            return 0;
        }
        let mut y = x;
        let mut k = 1;
        while y != 1 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_square(&self, x: u32) -> bool {
        x == 0 || self.characteristic == 2 || self.pow(x, ((self.q - 1) / 2) as u64) == 1
    }

    /// An element whose powers `1, b, …, b^(a−1)` span the field over the
    /// prime subfield.
    pub fn additive_basis(&self) -> Vec<u32> {
        (0..self.degree)
            .map(|i| self.characteristic.pow(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &q in SUPPORTED_FIELDS {
            let f = make_field(q).unwrap();
            for _ in 0..50 {
                let (x, y, z) = (
                    rng.gen_range(0..q),
                    rng.gen_range(0..q),
                    rng.gen_range(0..q),
                );
                assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.add(x, f.neg(x)), 0);
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), 1, "q={q} x={x}");
                }
            }
        }
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        // fails if a defining polynomial is reducible
        for &q in SUPPORTED_FIELDS {
            let f = make_field(q).unwrap();
            for x in 1..q {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), 1, "q={q} x={x}");
            }
            assert_eq!(f.multiplicative_order(f.primitive()), (q - 1) as u64);
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_of_order_a() {
        for &q in SUPPORTED_FIELDS {
            let f = make_field(q).unwrap();
            for x in 0..q {
                assert_eq!(f.frobenius_power(x, f.degree()), x);
                for y in 0..q {
                    assert_eq!(
                        f.frobenius(f.add(x, y)),
                        f.add(f.frobenius(x), f.frobenius(y))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(x, y)),
                        f.mul(f.frobenius(x), f.frobenius(y))
                    );
                }
            }
        }
        let f9 = make_field(9).unwrap();
        assert!((0..9).any(|x| f9.frobenius(x) != x));
        let f8 = make_field(8).unwrap();
        assert_eq!((f8.characteristic(), f8.degree()), (2, 3));
    }

    #[test]
    fn unsupported_size_is_a_configuration_error() {
        match make_field(6) {
            Err(Error::Config(msg)) => assert!(msg.contains("81")),
            other => panic!("{other:?}"),
        }
    }
}
