//! Order complexes of posets and their reduced rational homology.

pub mod rank;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{ClassSummary, QuillenPoset};
use rank::{is_prime, rank_exact, rank_mod_p, Reduction, SignedColumn};

/// Chains of a poset, grouped by dimension.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `faces[d]` holds the `d`-chains, flattened with stride `d + 1`, in
    /// lexicographic order of vertex ids.
    faces: Vec<Vec<u32>>,
}

/// The order complex: every strictly increasing chain `v₀ < … < v_d` is a
/// `d`-face. Fails once more than `face_budget` faces would be stored.
pub fn order_complex(poset: &QuillenPoset, face_budget: u64) -> Result<ChainComplex> {
    let mut faces: Vec<Vec<u32>> = Vec::new();
    let mut count: u64 = 0;
    let mut chain: Vec<u32> = Vec::new();

    fn visit(
        poset: &QuillenPoset,
        chain: &mut Vec<u32>,
        faces: &mut Vec<Vec<u32>>,
        count: &mut u64,
        budget: u64,
    ) -> Result<()> {
        let d = chain.len() - 1;
        if faces.len() <= d {
            faces.push(Vec::new());
        }
        faces[d].extend_from_slice(chain);
        *count += 1;
        if *count > budget {
            return Err(Error::Resource {
                what: "faces of the order complex".into(),
                limit: budget as u128,
                flag: "--face-budget",
            });
        }
        let last = *chain.last().expect("nonempty chain") as usize;
        for &w in poset.up_set(last) {
            chain.push(w);
            visit(poset, chain, faces, count, budget)?;
            chain.pop();
        }
        Ok(())
    }

    for v in 0..poset.len() as u32 {
        chain.push(v);
        visit(poset, &mut chain, &mut faces, &mut count, face_budget)?;
        chain.pop();
    }
    Ok(ChainComplex { faces })
}

impl ChainComplex {
    /// Face counts `f_0, f_1, …`; empty for the empty complex.
    pub fn f_vector(&self) -> Vec<u64> {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, f)| (f.len() / (d + 1)) as u64)
            .collect()
    }

    /// Top dimension, or `-1` for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    pub fn face(&self, d: usize, i: usize) -> &[u32] {
        &self.faces[d][i * (d + 1)..(i + 1) * (d + 1)]
    }

    fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, |f| f.len() / (d + 1))
    }

    pub fn index_of(&self, face: &[u32]) -> Option<usize> {
        let d = face.len().checked_sub(1)?;
        let (mut lo, mut hi) = (0, self.count(d));
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.face(d, mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Columns of `∂_d` for `d ≥ 1`, indexed by `d`-faces, rows by
    /// `(d−1)`-faces; dropping vertex `i` carries sign `(−1)^i`.
    pub fn boundary(&self, d: usize) -> Vec<SignedColumn> {
        assert!(d >= 1);
        let mut out = Vec::with_capacity(self.count(d));
        let mut sub = Vec::with_capacity(d);
        for k in 0..self.count(d) {
            let face = self.face(d, k);
            let mut col: SignedColumn = Vec::with_capacity(d + 1);
            for i in 0..=d {
                sub.clear();
                sub.extend(
                    face.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &v)| v),
                );
                let row = self.index_of(&sub).expect("faces of chains are chains") as u32;
                col.push((row, if i % 2 == 0 { 1 } else { -1 }));
            }
            col.sort_unstable_by_key(|e| e.0);
            out.push(col);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Modular,
    Exact,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "modular" => Ok(Backend::Modular),
            "exact" => Ok(Backend::Exact),
            _ => Err(Error::Config(format!(
                "unknown backend `{s}` (expected modular or exact)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BettiOptions {
    pub backend: Backend,
    /// Primes tried before escalating; at least 2.
    pub primes: usize,
    pub seed: u64,
    /// Whether an unresolved modular disagreement falls back to the exact
    /// backend instead of failing.
    pub exact_fallback: bool,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions {
            backend: Backend::Modular,
            primes: 2,
            seed: 0x5eed,
            exact_fallback: true,
        }
    }
}

/// Which computation produced a Betti vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendUsed {
    Exact,
    Modular(Vec<u64>),
    /// Modular primes disagreed; the exact backend settled it.
    ExactAfter(Vec<u64>),
}

impl fmt::Display for BackendUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| {
            v.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join("+")
        };
        match self {
            BackendUsed::Exact => write!(f, "exact"),
            BackendUsed::Modular(p) => write!(f, "modular({})", list(p)),
            BackendUsed::ExactAfter(p) => write!(f, "exact-after({})", list(p)),
        }
    }
}

impl FromStr for BackendUsed {
    type Err = Error;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<BackendUsed> {
        let primes = |inner: &str| -> Result<Vec<u64>> {
            inner
                .split('+')
                .map(|p| {
                    p.parse()
                        .map_err(|_| Error::Config(format!("bad prime `{p}` in backend `{s}`")))
                })
                .collect()
        };
        if s == "exact" {
            return Ok(BackendUsed::Exact);
        }
        let wrapped = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        if let Some(inner) = wrapped("modular(") {
            Ok(BackendUsed::Modular(primes(inner)?))
        } else if let Some(inner) = wrapped("exact-after(") {
            Ok(BackendUsed::ExactAfter(primes(inner)?))
        } else {
            Err(Error::Config(format!("unknown backend record `{s}`")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiResult {
    /// `b̃_0, b̃_1, …` up to the dimension of the complex.
    pub reduced: Vec<u64>,
    /// `b̃_{−1}`: 1 exactly for the empty complex.
    pub minus_one: u64,
    pub backend: BackendUsed,
    /// The alternating sum of Betti numbers equals the face-count Euler
    /// characteristic.
    pub consistent: bool,
}

impl BettiResult {
    /// `b̃_d`, zero outside the computed range.
    pub fn get(&self, d: i64) -> u64 {
        if d == -1 {
            self.minus_one
        } else if d < -1 {
            0
        } else {
            self.reduced.get(d as usize).copied().unwrap_or(0)
        }
    }

    pub fn euler(&self) -> BigInt {
        let mut chi = -BigInt::from(self.minus_one);
        for (d, &b) in self.reduced.iter().enumerate() {
            if d % 2 == 0 {
                chi += b;
            } else {
                chi -= b;
            }
        }
        chi
    }

    /// Same reduced Betti numbers in every degree, ignoring trailing zeros
    /// and the backend.
    pub fn same_homology(&self, other: &BettiResult) -> bool {
        let top = self.reduced.len().max(other.reduced.len()) as i64;
        (-1..top).all(|d| self.get(d) == other.get(d))
    }

    pub fn is_zero(&self) -> bool {
        self.minus_one == 0 && self.reduced.iter().all(|&b| b == 0)
    }

    /// `b0;b1;…`, with `b-1=1` for the empty complex.
    pub fn vector_string(&self) -> String {
        if self.minus_one > 0 {
            return format!("b-1={}", self.minus_one);
        }
        self.reduced
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Ranks of `∂_1 … ∂_top`, reduced from the top down so that pivot rows of
/// `∂_{d+1}` clear columns of `∂_d`.
fn boundary_ranks<F>(complex: &ChainComplex, reduce: F) -> Vec<usize>
where
    F: Fn(&[SignedColumn], usize, &[bool]) -> Reduction,
{
    let top = complex.faces.len();
    // ranks[d] = rank ∂_d for d in 0..=top; ∂_0 is the augmentation
    let mut ranks = vec![0usize; top + 1];
    if top == 0 {
        return ranks;
    }
    ranks[0] = 1;
    let mut cleared_for_next: Vec<bool> = Vec::new();
    for d in (1..top).rev() {
        let cols = complex.boundary(d);
        let rows = complex.count(d - 1);
        let red = reduce(&cols, rows, &cleared_for_next);
        ranks[d] = red.rank;
        let mut cleared = vec![false; rows];
        for r in red.pivot_rows {
            cleared[r as usize] = true;
        }
        cleared_for_next = cleared;
    }
    ranks
}

fn choose_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::new();
    while out.len() < count {
        let c = rng.gen_range((1u64 << 30) + 1..(1u64 << 31));
        if is_prime(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn betti_from_ranks(complex: &ChainComplex, ranks: &[usize], backend: BackendUsed) -> BettiResult {
    let f = complex.f_vector();
    let top = f.len();
    let reduced: Vec<u64> = (0..top)
        .map(|d| f[d] - ranks[d] as u64 - ranks.get(d + 1).copied().unwrap_or(0) as u64)
        .collect();
    let minus_one = if top == 0 { 1 } else { 0 };
    let mut result = BettiResult {
        reduced,
        minus_one,
        backend,
        consistent: false,
    };
    result.consistent = result.euler() == euler_from_faces(complex);
    result
}

/// Reduced rational Betti numbers.
///
/// The modular backend computes ranks modulo seeded random primes in
/// `(2^30, 2^31)`. Two agreeing primes are accepted; on disagreement a
/// further prime is tried, and a rank reached by at least two primes wins
/// (ranks mod `P` never exceed the rational rank). Otherwise the exact
/// backend decides, or a disagreement error is returned.
pub fn betti(complex: &ChainComplex, options: &BettiOptions) -> Result<BettiResult> {
    if options.backend == Backend::Exact {
        let ranks = boundary_ranks(complex, rank_exact);
        return Ok(betti_from_ranks(complex, &ranks, BackendUsed::Exact));
    }
    let count = options.primes.max(2);
    let primes = choose_primes(options.seed, count + 1);
    let run = |p: u64| boundary_ranks(complex, |c, r, cl| rank_mod_p(c, r, p, cl));
    let mut runs: Vec<Vec<usize>> = {
        let (a, b) = rayon::join(|| run(primes[0]), || run(primes[1]));
        vec![a, b]
    };
    for &p in &primes[2..count] {
        runs.push(run(p));
    }
    let mut used: Vec<u64> = primes[..count].to_vec();
    if runs.iter().any(|r| r != &runs[0]) {
        runs.push(run(primes[count]));
        used.push(primes[count]);
    }
    let dims = runs[0].len();
    let mut settled = Vec::with_capacity(dims);
    let mut disagreement: Option<(usize, Vec<usize>)> = None;
    for d in 0..dims {
        let column: Vec<usize> = runs.iter().map(|r| r[d]).collect();
        let max = *column.iter().max().expect("at least two runs");
        if column.iter().filter(|&&x| x == max).count() >= 2 {
            settled.push(max);
        } else {
            disagreement.get_or_insert((d, column));
            settled.push(max);
        }
    }
    match disagreement {
        None => Ok(betti_from_ranks(
            complex,
            &settled,
            BackendUsed::Modular(used),
        )),
        Some(_) if options.exact_fallback => {
            let ranks = boundary_ranks(complex, rank_exact);
            Ok(betti_from_ranks(
                complex,
                &ranks,
                BackendUsed::ExactAfter(used),
            ))
        }
        Some((dim, ranks)) => Err(Error::RankDisagreement { dim, ranks }),
    }
}

/// `χ̃ = −1 + Σ (−1)^d f_d`.
pub fn euler_from_faces(complex: &ChainComplex) -> BigInt {
    euler_from_f_vector(&complex.f_vector())
}

pub fn euler_from_f_vector(f_vector: &[u64]) -> BigInt {
    let mut chi = BigInt::from(-1);
    for (d, &f) in f_vector.iter().enumerate() {
        if d % 2 == 0 {
            chi += f;
        } else {
            chi -= f;
        }
    }
    chi
}

/// `χ̃ = Σ (−1)^{r−1} p^{r(r−1)/2} |G : N_G(E)|` over conjugacy classes of
/// elementary abelian subgroups `E` of rank `r`, the trivial subgroup
/// contributing `−1`.
pub fn euler_from_classes(classes: &[ClassSummary], p: u32) -> BigInt {
    let mut chi = BigInt::from(-1);
    for c in classes {
        let r = c.rank;
        let term = BigInt::from(p).pow(r * (r - 1) / 2) * BigInt::from(c.normalizer_index.clone());
        if r % 2 == 1 {
            chi += term;
        } else {
            chi -= term;
        }
    }
    chi
}

pub const CSV_HEADER: &str = "group,p,f_vector,betti,chi_faces,chi_classes,backend";

/// One CSV row; `chi_classes` is left empty when not computed.
pub fn csv_row(
    name: &str,
    p: u32,
    complex: &ChainComplex,
    betti: &BettiResult,
    chi_classes: Option<&BigInt>,
) -> String {
    csv_row_from_counts(name, p, &complex.f_vector(), betti, chi_classes)
}

/// [`csv_row`] from a stored f-vector.
pub fn csv_row_from_counts(
    name: &str,
    p: u32,
    f_vector: &[u64],
    betti: &BettiResult,
    chi_classes: Option<&BigInt>,
) -> String {
    let f: Vec<String> = f_vector.iter().map(|x| x.to_string()).collect();
    format!(
        "{},{},{},{},{},{},{}",
        name.replace(',', ";"),
        p,
        f.join(";"),
        betti.vector_string(),
        euler_from_f_vector(f_vector),
        chi_classes.map(|c| c.to_string()).unwrap_or_default(),
        betti.backend
    )
}

/// Checks `∂_{d−1} ∘ ∂_d = 0` column by column; returns the first failing
/// dimension.
pub fn check_boundary_squares_to_zero(complex: &ChainComplex) -> Option<usize> {
    let top = complex.faces.len();
    for d in 2..top {
        let upper = complex.boundary(d);
        let lower = complex.boundary(d - 1);
        for col in &upper {
            let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
            for &(r, s) in col {
                for &(r2, s2) in &lower[r as usize] {
                    *acc.entry(r2).or_default() += (s as i64) * (s2 as i64);
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                return Some(d);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{alternating, symmetric};
    use crate::permgroup::Caps;
    use crate::poset::{build_quillen_poset, class_summaries};

    fn complex_of(g: &crate::permgroup::PermGroup, p: u32) -> (QuillenPoset, ChainComplex) {
        let poset = build_quillen_poset(g, p, &Caps::default()).unwrap();
        let c = order_complex(&poset, 1 << 24).unwrap();
        (poset, c)
    }

    #[test]
    fn alt5_complex() {
        let g = alternating(5).unwrap().group;
        let (poset, c) = complex_of(&g, 2);
        assert_eq!(c.f_vector(), vec![20, 15]);
        let b = betti(&c, &BettiOptions::default()).unwrap();
        assert_eq!(b.reduced, vec![4, 0]);
        assert!(b.consistent);
        assert_eq!(euler_from_faces(&c), BigInt::from(4));
        let classes = class_summaries(&poset, &g, &Caps::default()).unwrap();
        assert_eq!(euler_from_classes(&classes, 2), BigInt::from(4));
    }

    #[test]
    fn backend_display_round_trips() {
        for b in [
            BackendUsed::Exact,
            BackendUsed::Modular(vec![2147483629, 1073741827]),
            BackendUsed::ExactAfter(vec![1073741827]),
        ] {
            assert_eq!(b.to_string().parse::<BackendUsed>().unwrap(), b);
        }
        assert!("modular(x)".parse::<BackendUsed>().is_err());
    }

    #[test]
    fn sym4_is_acyclic() {
        let g = symmetric(4).unwrap().group;
        let (poset, c) = complex_of(&g, 2);
        let b = betti(&c, &BettiOptions::default()).unwrap();
        assert!(b.is_zero());
        assert_eq!(euler_from_faces(&c), BigInt::zero());
        let classes = class_summaries(&poset, &g, &Caps::default()).unwrap();
        assert_eq!(euler_from_classes(&classes, 2), BigInt::zero());
    }

    #[test]
    fn empty_complex_has_minus_one_homology() {
        let g = alternating(3).unwrap().group;
        let (_, c) = complex_of(&g, 2);
        assert_eq!(c.dimension(), -1);
        let b = betti(&c, &BettiOptions::default()).unwrap();
        assert_eq!((b.minus_one, b.reduced.len()), (1, 0));
        assert_eq!(b.euler(), BigInt::from(-1));
        assert_eq!(euler_from_faces(&c), BigInt::from(-1));
    }

    #[test]
    fn boundaries_compose_to_zero() {
        let g = symmetric(6).unwrap().group;
        let (_, c) = complex_of(&g, 2);
        assert!(c.dimension() >= 2);
        assert_eq!(check_boundary_squares_to_zero(&c), None);
    }

    #[test]
    fn exact_and_modular_agree() {
        for (g, p) in [
            (symmetric(6).unwrap().group, 2),
            (symmetric(6).unwrap().group, 3),
            (alternating(6).unwrap().group, 2),
        ] {
            let (_, c) = complex_of(&g, p);
            let m = betti(&c, &BettiOptions::default()).unwrap();
            let e = betti(
                &c,
                &BettiOptions {
                    backend: Backend::Exact,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(m.reduced, e.reduced);
            assert_eq!(m.euler(), euler_from_faces(&c));
        }
    }

    #[test]
    fn face_budget_is_enforced() {
        let g = symmetric(5).unwrap().group;
        let poset = build_quillen_poset(&g, 2, &Caps::default()).unwrap();
        assert!(matches!(
            order_complex(&poset, 10),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn primes_are_seeded_and_in_range() {
        let a = choose_primes(1, 3);
        assert_eq!(a, choose_primes(1, 3));
        assert!(a.iter().all(|&p| p > 1 << 30 && p < 1 << 31 && is_prime(p)));
        assert_ne!(a, choose_primes(2, 3));
    }
}
