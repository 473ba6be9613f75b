//! Isomorphism-type labels for small groups from the element-order
//! histogram. Only types whose histogram is unique among all groups of
//! their order are listed, so a match is a proof of isomorphism.

use std::collections::BTreeMap;

use crate::permgroup::PermGroup;

/// Groups larger than this are reported by order only.
pub const FINGERPRINT_MAX_ORDER: u32 = 48;

/// `(label, [(element order, count)])`, counts summing to the group order.
const TABLE: &[(&str, &[(u64, u64)])] = &[
    ("1", &[(1, 1)]),
    ("C2", &[(1, 1), (2, 1)]),
    ("C3", &[(1, 1), (3, 2)]),
    ("C4", &[(1, 1), (2, 1), (4, 2)]),
    ("C2×C2", &[(1, 1), (2, 3)]),
    ("C5", &[(1, 1), (5, 4)]),
    ("C6", &[(1, 1), (2, 1), (3, 2), (6, 2)]),
    ("Sym3", &[(1, 1), (2, 3), (3, 2)]),
    ("C7", &[(1, 1), (7, 6)]),
    ("C8", &[(1, 1), (2, 1), (4, 2), (8, 4)]),
    ("C4×C2", &[(1, 1), (2, 3), (4, 4)]),
    ("C2×C2×C2", &[(1, 1), (2, 7)]),
    ("D8", &[(1, 1), (2, 5), (4, 2)]),
    ("Q8", &[(1, 1), (2, 1), (4, 6)]),
    ("C9", &[(1, 1), (3, 2), (9, 6)]),
    ("C3×C3", &[(1, 1), (3, 8)]),
    ("C10", &[(1, 1), (2, 1), (5, 4), (10, 4)]),
    ("D10", &[(1, 1), (2, 5), (5, 4)]),
    ("C11", &[(1, 1), (11, 10)]),
    ("C12", &[(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (12, 4)]),
    ("C6×C2", &[(1, 1), (2, 3), (3, 2), (6, 6)]),
    ("Alt4", &[(1, 1), (2, 3), (3, 8)]),
    ("D12", &[(1, 1), (2, 7), (3, 2), (6, 2)]),
    ("Dic12", &[(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]),
    ("C13", &[(1, 1), (13, 12)]),
    ("C14", &[(1, 1), (2, 1), (7, 6), (14, 6)]),
    ("D14", &[(1, 1), (2, 7), (7, 6)]),
    ("C15", &[(1, 1), (3, 2), (5, 4), (15, 8)]),
    ("D18", &[(1, 1), (2, 9), (3, 2), (9, 6)]),
    ("D20", &[(1, 1), (2, 11), (5, 4), (10, 4)]),
    ("AGL1(5)", &[(1, 1), (2, 5), (4, 10), (5, 4)]),
    ("Sym4", &[(1, 1), (2, 9), (3, 8), (4, 6)]),
    ("SL2(3)", &[(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]),
];

/// Element-order histogram, sorted by order.
pub fn order_histogram(group: &PermGroup) -> Vec<(u64, u64)> {
    let mut h: BTreeMap<u64, u64> = BTreeMap::new();
    group.for_each_element(|x| *h.entry(x.order()).or_default() += 1);
    h.into_iter().collect()
}

/// The isomorphism type when the group is small and its histogram is in
/// the table.
pub fn fingerprint_label(group: &PermGroup) -> Option<&'static str> {
    let n = group.order_u128()?;
    if n > FINGERPRINT_MAX_ORDER as u128 {
        return None;
    }
    let h = order_histogram(group);
    TABLE
        .iter()
        .find(|(_, row)| *row == h.as_slice())
        .map(|(name, _)| *name)
}

/// `"Sym4"` for recognized groups, `"order 5616"` otherwise.
pub fn describe(group: &PermGroup) -> String {
    match fingerprint_label(group) {
        Some(l) => l.to_string(),
        None => format!("order {}", group.order()),
    }
}
