//! Closed-form counts, Euler characteristics and homology bounds, evaluated
//! in exact arithmetic. Every evaluator asserts that its result is integral.

mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::atlas::{Family, Kind};
use crate::error::{Error, Result};

pub use verify::{
    count_coset_involutions, summary_table, verify_family, verify_suite, VerifyRow, VerifyStatus,
    VERIFY_CSV_HEADER,
};

/// One evaluated formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaResult {
    pub id: &'static str,
    pub q: u64,
    /// `q mod 4` as `±1`, for formulas that depend on it.
    pub epsilon: Option<i64>,
    pub value: BigInt,
    /// Where the value does not mean what the formula's name suggests.
    pub note: Option<&'static str>,
}

impl fmt::Display for FormulaResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(q={}) = {}", self.id, self.q, self.value)?;
        if let Some(n) = self.note {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn integral(id: &str, r: BigRational) -> Result<BigInt> {
    if !r.is_integer() {
        return Err(Error::Internal(format!("{id}: non-integral value {r}")));
    }
    Ok(r.to_integer())
}

/// `(p, k)` with `q = p^k`, for `q ≥ 2`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..)
        .find(|d| q.is_multiple_of(*d) || d * d > q)
        .filter(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let mut n = q;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

/// The first `count` odd prime powers.
pub fn odd_prime_powers(count: usize) -> Vec<u64> {
    (3..)
        .step_by(2)
        .filter(|&q| prime_power(q).is_some())
        .take(count)
        .collect()
}

/// `ε ∈ {±1}` with `q ≡ ε (mod 4)`, for odd `q`.
pub fn epsilon(q: u64) -> i64 {
    if q % 4 == 1 {
        1
    } else {
        -1
    }
}

fn gcd3(x: &BigInt) -> BigInt {
    x.gcd(&BigInt::from(3))
}

fn require_odd_prime_power(id: &str, q: u64, min: u64) -> Result<()> {
    match prime_power(q) {
        Some((p, _)) if p != 2 && q >= min => Ok(()),
        _ => Err(Error::Config(format!(
            "{id}: q = {q} must be an odd prime power ≥ {min}"
        ))),
    }
}

/// `q^{1/2}` when `q` is a square.
fn square_root(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

/// Involution and four-subgroup counts of `PSL2(q)` and `PGL2(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psl2Counts {
    pub psl2_involutions: BigInt,
    pub psl2_four_groups: BigInt,
    pub pgl2_involutions: BigInt,
    pub pgl2_four_groups: BigInt,
}

pub fn psl2_counts(q: u64) -> Result<Psl2Counts> {
    require_odd_prime_power("psl2_counts", q, 5)?;
    let e = epsilon(q);
    let qb = big(q);
    let q3: BigInt = &qb * (&qb * &qb - 1);
    Ok(Psl2Counts {
        psl2_involutions: integral(
            "psl2_involutions",
            BigRational::new(&qb * (&qb + e), big(2)),
        )?,
        psl2_four_groups: integral("psl2_four_groups", BigRational::new(q3.clone(), big(24)))?,
        pgl2_involutions: &qb * &qb,
        pgl2_four_groups: integral("pgl2_four_groups", BigRational::new(q3, big(6)))?,
    })
}

/// `(1/12)(q−ε)(q²−(6−ε)q−12ε)`, which is `−χ̃(A₂(PSL2(q)))`. It is a
/// homology dimension only when the poset is connected, that is `q ≠ 5`.
pub fn neg_euler_psl2(q: u64) -> Result<FormulaResult> {
    require_odd_prime_power("neg_euler_psl2", q, 5)?;
    let e = epsilon(q);
    let qb = big(q);
    let v = (&qb - e) * (&qb * &qb - (6 - e) * &qb - 12 * e);
    Ok(FormulaResult {
        id: "neg_euler_psl2",
        q,
        epsilon: Some(e),
        value: integral("neg_euler_psl2", BigRational::new(v, big(12)))?,
        note: (q == 5).then_some("disconnected case: value is −χ̃, not a dimension"),
    })
}

/// `(1/3)(q−3)(q²−1) = −χ̃(A₂(PGL2(q)))`.
pub fn neg_euler_pgl2(q: u64) -> Result<FormulaResult> {
    require_odd_prime_power("neg_euler_pgl2", q, 5)?;
    Ok(FormulaResult {
        id: "neg_euler_pgl2",
        q,
        epsilon: None,
        value: pgl2_h1_poly(&big(q)),
        note: None,
    })
}

/// `(1/3)(q−3)(q²−1)` for any integer `q`; always integral since
/// `q(q−1)(q+1)` is and `q − 3 ≡ q (mod 3)`.
fn pgl2_h1_poly(q: &BigInt) -> BigInt {
    (q - 3) * (q * q - 1) / 3
}

/// `f_n(q)`; only `f_3(q) = q³ + 3q² + 3q + 3` is available.
pub fn f_n(n: u32, q: u64) -> Result<BigInt> {
    if n != 3 {
        return Err(Error::Capability(format!(
            "f_{n} is not available, only f_3"
        )));
    }
    let qb = big(q);
    Ok(&qb * &qb * &qb + 3 * &qb * &qb + 3 * &qb + 3)
}

fn require_odd(id: &str, q: u64) -> Result<()> {
    if q.is_multiple_of(2) {
        return Err(Error::Config(format!("{id}: q = {q} must be odd")));
    }
    Ok(())
}

/// `(1/3)(q−1)(q²−1)f_3(q)`, read as `dim H̃₁(A₂(PSL3(q))) = −χ̃`.
pub fn euler_psl3(q: u64) -> Result<FormulaResult> {
    require_odd("euler_psl3", q)?;
    let qb = big(q);
    let v = (&qb - 1) * (&qb * &qb - 1) * f_n(3, q)?;
    Ok(FormulaResult {
        id: "euler_psl3",
        q,
        epsilon: None,
        value: integral("euler_psl3", BigRational::new(v, big(3)))?,
        note: None,
    })
}

fn psu3_poly(q: &BigInt) -> BigRational {
    let q2 = q * q;
    let q3 = &q2 * q;
    let v = &q3 * &q3 - 2 * &q3 * &q2 - &q2 * &q2 + 2 * &q3 - 3 * &q2 + 3;
    BigRational::new(v, big(3))
}

/// `(1/3)(q⁶−2q⁵−q⁴+2q³−3q²+3)`, read as `dim H̃₁(A₂(PSU3(q))) = −χ̃`.
pub fn euler_psu3(q: u64) -> Result<FormulaResult> {
    require_odd("euler_psu3", q)?;
    Ok(FormulaResult {
        id: "euler_psu3",
        q,
        epsilon: None,
        value: integral("euler_psu3", psu3_poly(&big(q)))?,
        note: Some("sign convention: polynomial taken as dim H1 = −χ̃"),
    })
}

fn order_pgl(n: u32, q: &BigInt) -> BigInt {
    // q^{n(n−1)/2} Π_{i=2..n} (q^i − 1)
    let mut out = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        out *= q.pow(i) - 1;
    }
    out
}

fn order_pgu3(q: &BigInt) -> BigInt {
    q.pow(3) * (q.pow(2) - 1) * (q.pow(3) + 1)
}

/// Number of outer involutions of the given kind in `L⟨t⟩ \ L`.
///
/// * `PSL2`, field: `q^{1/2}(q+1)`, `q` an odd square.
/// * `PSL3`, field: `|PGL3(q)| / (|PGL3(q^{1/2})|·(3, q^{1/2}+1))`.
/// * `PSL3`, graph: `|PGL3(q)| / (|PGL2(q)|·(3, q−1))`.
/// * `PSL3`, graph-field: `|PGL3(q)| / (|PGU3(q^{1/2})|·(3, q^{1/2}−1))`.
/// * `PSU3`, graph: `q²(q³+1) / (3, q+1)`.
pub fn outer_involution_counts(family: Family, q: u64, kind: Kind) -> Result<BigInt> {
    let id = "outer_involution_counts";
    require_odd_prime_power(id, q, 3)?;
    let qb = big(q);
    let root = || {
        square_root(q).map(big).ok_or_else(|| {
            Error::Capability(format!("{kind} involutions need a square q, got {q}"))
        })
    };
    let value = match (family, kind) {
        (Family::PSL2, Kind::Field) => {
            let r = root()?;
            r * (&qb + 1)
        }
        (Family::PSL3, Kind::Field) => {
            let r = root()?;
            integral(
                id,
                BigRational::new(order_pgl(3, &qb), order_pgl(3, &r) * gcd3(&(&r + 1))),
            )?
        }
        (Family::PSL3, Kind::Graph) => integral(
            id,
            BigRational::new(order_pgl(3, &qb), order_pgl(2, &qb) * gcd3(&(&qb - 1))),
        )?,
        (Family::PSL3, Kind::GraphField) => {
            let r = root()?;
            integral(
                id,
                BigRational::new(order_pgl(3, &qb), order_pgu3(&r) * gcd3(&(&r - 1))),
            )?
        }
        (Family::PSU3, Kind::Graph) => integral(
            id,
            BigRational::new(&qb * &qb * (qb.pow(3) + 1), gcd3(&(&qb + 1))),
        )?,
        _ => {
            return Err(Error::Capability(format!(
                "no outer involution count for {kind} automorphisms of {family}"
            )))
        }
    };
    Ok(value)
}

/// Both evaluations of the Ree-group Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReeEuler {
    pub q: u64,
    /// `(1/21)(q²−1)(q⁵−8q⁴+15q³+21)`.
    pub polynomial: BigRational,
    /// `−1 + |L|/(q(q²−1)) − 2|L|/(6(q+1)) + 8|L|/168` with
    /// `|L| = q³(q³+1)(q−1)`.
    pub normalizer_sum: BigRational,
    /// `q⁵−8q⁴+15q³+21`.
    pub quintic: BigInt,
}

impl ReeEuler {
    pub fn agree(&self) -> bool {
        self.polynomial == self.normalizer_sum
    }

    /// The value as an integer. Integrality is only expected for odd
    /// powers of 3.
    pub fn value(&self) -> Option<BigInt> {
        self.polynomial
            .is_integer()
            .then(|| self.polynomial.to_integer())
    }
}

pub fn ree_euler(q: u64) -> Result<ReeEuler> {
    require_odd_prime_power("ree_euler", q, 3)?;
    let qb = big(q);
    let quintic = qb.pow(5) - 8 * qb.pow(4) + 15 * qb.pow(3) + 21;
    let polynomial = BigRational::new((&qb * &qb - 1) * &quintic, big(21));
    let l = rat(qb.pow(3) * (qb.pow(3) + 1) * (&qb - 1));
    let normalizer_sum = -BigRational::one() + &l / rat(&qb * (&qb * &qb - 1))
        - rat(big(2)) * &l / rat(6 * (&qb + 1))
        + rat(big(8)) * &l / rat(big(168));
    Ok(ReeEuler {
        q,
        polynomial,
        normalizer_sum,
        quintic,
    })
}

/// `n₁·d_cent − d_base`.
pub fn extension_bound(n1: &BigInt, d_cent: &BigInt, d_base: &BigInt) -> Result<BigInt> {
    if n1.is_negative() || d_cent.is_negative() || d_base.is_negative() {
        return Err(Error::Precondition(
            "extension_bound takes non-negative inputs".into(),
        ));
    }
    Ok(n1 * d_cent - d_base)
}

/// Closed form of the field-extension bound for `PSL2(q)⟨φ⟩`, `q` an odd
/// square: `(1/4)(q^{1/2}−1)(q−1)(q^{3/2}−3q−4)`.
pub fn pgl2_field_bound(q: u64) -> Result<BigInt> {
    require_odd_prime_power("pgl2_field_bound", q, 9)?;
    let r = square_root(q).map(big).ok_or_else(|| {
        Error::Capability(format!("field automorphisms need a square q, got {q}"))
    })?;
    let qb = big(q);
    let v = (&r - 1) * (&qb - 1) * (&r * &qb - 3 * &qb - 4);
    integral("pgl2_field_bound", BigRational::new(v, big(4)))
}

/// The same bound before simplification:
/// `n_f · dim H₁(A₂(PGL2(q^{1/2}))) − dim H₁(A₂(PSL2(q)))`.
pub fn pgl2_field_bound_unsimplified(q: u64) -> Result<BigInt> {
    let n = outer_involution_counts(Family::PSL2, q, Kind::Field)?;
    let r = big(square_root(q).expect("checked by the count"));
    extension_bound(&n, &pgl2_h1_poly(&r), &neg_euler_psl2(q)?.value)
}

/// `(1/3)(q²−1)(q+1)·[q²(q²−q+1)/(3,q+1)·(q−3) − (q³−3q²+3q−3)]`.
pub fn psu3_extension_bound(q: u64) -> Result<BigInt> {
    require_odd("psu3_extension_bound", q)?;
    let qb = big(q);
    let inner = BigRational::new(&qb * &qb * (&qb * &qb - &qb + 1), gcd3(&(&qb + 1)))
        * rat(&qb - 3)
        - rat(qb.pow(3) - 3 * &qb * &qb + 3 * &qb - 3);
    integral(
        "psu3_extension_bound",
        rat((&qb * &qb - 1) * (&qb + 1)) * inner / rat(big(3)),
    )
}

/// The `PSL3(q)` base dimension as printed through the `PSL2` formula,
/// `(1/12)(q−ε)(q²−(6−ε)q−12ε)`, kept to compare against brute force.
pub fn psl3_base_dim_via_psl2_formula(q: u64) -> Result<BigInt> {
    require_odd("psl3_base_dim_via_psl2_formula", q)?;
    let e = epsilon(q);
    let qb = big(q);
    let v = (&qb - e) * (&qb * &qb - (6 - e) * &qb - 12 * e);
    integral(
        "psl3_base_dim_via_psl2_formula",
        BigRational::new(v, big(12)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(
            odd_prime_powers(10),
            vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25]
        );
    }

    #[test]
    fn table_counts() {
        let c = psl2_counts(5).unwrap();
        assert_eq!(
            [
                c.psl2_involutions,
                c.psl2_four_groups,
                c.pgl2_involutions,
                c.pgl2_four_groups
            ],
            [15, 5, 25, 20].map(BigInt::from)
        );
        let c = psl2_counts(9).unwrap();
        assert_eq!(
            [
                c.psl2_involutions,
                c.psl2_four_groups,
                c.pgl2_involutions,
                c.pgl2_four_groups
            ],
            [45, 30, 81, 120].map(BigInt::from)
        );
        let c = psl2_counts(7).unwrap();
        assert_eq!(
            (c.psl2_involutions, c.psl2_four_groups),
            (21.into(), 14.into())
        );
        assert!(matches!(psl2_counts(6), Err(Error::Config(_))));
        assert!(matches!(psl2_counts(3), Err(Error::Config(_))));
    }

    #[test]
    fn homology_polynomials() {
        assert_eq!(neg_euler_pgl2(9).unwrap().value, 160.into());
        assert_eq!(neg_euler_psl2(9).unwrap().value, 16.into());
        let five = neg_euler_psl2(5).unwrap();
        assert_eq!(five.value, (-4).into());
        assert!(five.note.is_some());
        assert_eq!(neg_euler_pgl2(5).unwrap().value, 16.into());
        assert_eq!(euler_psl3(3).unwrap().value, 352.into());
        assert_eq!(euler_psl3(1).unwrap().value, 0.into());
        assert_eq!(euler_psu3(3).unwrap().value, 64.into());
        assert_eq!(f_n(3, 3).unwrap(), 66.into());
        assert!(matches!(f_n(4, 3), Err(Error::Capability(_))));
    }

    #[test]
    fn outer_counts() {
        let c = |f, q, k| outer_involution_counts(f, q, k).unwrap();
        assert_eq!(c(Family::PSL2, 9, Kind::Field), 30.into());
        assert_eq!(c(Family::PSU3, 3, Kind::Graph), 252.into());
        assert_eq!(c(Family::PSL3, 3, Kind::Graph), 234.into());
        assert_eq!(c(Family::PSL3, 9, Kind::Field), 7560.into());
        assert_eq!(c(Family::PSL3, 9, Kind::GraphField), 7020.into());
        assert_eq!(c(Family::PSL3, 9, Kind::Graph), 58968.into());
        assert!(matches!(
            outer_involution_counts(Family::PSL2, 7, Kind::Field),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            outer_involution_counts(Family::PSU3, 3, Kind::Diagonal),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn ree_paths_agree() {
        let r = ree_euler(3).unwrap();
        assert!(r.agree());
        assert_eq!(r.value(), Some(8.into()));
        assert!(ree_euler(27).unwrap().agree());
        assert!(ree_euler(27).unwrap().value().is_some());
        for q in odd_prime_powers(20) {
            let r = ree_euler(q).unwrap();
            assert!(r.agree(), "q = {q}");
            if q >= 5 {
                assert!(r.quintic.is_positive(), "q = {q}");
            }
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(pgl2_field_bound(25).unwrap(), 1104.into());
        assert_eq!(
            extension_bound(&30.into(), &0.into(), &16.into()).unwrap(),
            (-16).into()
        );
        assert_eq!(psu3_extension_bound(3).unwrap(), (-64).into());
        assert!(psu3_extension_bound(5).unwrap().is_positive());
        assert!(extension_bound(&(-1).into(), &0.into(), &0.into()).is_err());
        // the printed base dimension for PSL3 vanishes at q = 3
        assert_eq!(psl3_base_dim_via_psl2_formula(3).unwrap(), 0.into());
    }

    #[test]
    fn psu3_bound_matches_its_unsimplified_form() {
        for q in [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 81] {
            let n = outer_involution_counts(Family::PSU3, q, Kind::Graph).unwrap();
            let direct = n * pgl2_h1_poly(&big(q)) - euler_psu3(q).unwrap().value;
            assert_eq!(direct, psu3_extension_bound(q).unwrap(), "q = {q}");
        }
    }

    proptest! {
        #[test]
        fn psu3_bound_positive_above_three(i in 1usize..40) {
            let q = odd_prime_powers(i + 1)[i];
            prop_assert!(psu3_extension_bound(q).unwrap().is_positive());
        }

        #[test]
        fn field_bound_closed_form(r in prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27])) {
            let q = r * r;
            prop_assert_eq!(pgl2_field_bound_unsimplified(q).unwrap(), pgl2_field_bound(q).unwrap());
        }
    }
}
