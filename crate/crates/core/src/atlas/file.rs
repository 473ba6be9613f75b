//! Line-oriented group files:
//!
//! ```text
//! # quillen-group v1
//! name PSL2(8)
//! degree 9
//! claim order 504
//! gen (1 2 3 4 5 6 7 8 9)
//! gen (2 3 5)(4 7 6)
//! meta field 8
//! ```
//!
//! Points are 1-based. Lines starting with `#` other than the header are
//! comments.

use std::path::Path;

use num_bigint::BigUint;

use super::labeled::{Family, LabeledGroup};
use crate::error::{Error, Result};
use crate::permgroup::{Perm, PermGroup};

pub const HEADER: &str = "# quillen-group v1";

pub fn load_group_file(path: &Path) -> Result<LabeledGroup> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_group_file(&text)
}

pub fn parse_group_file(text: &str) -> Result<LabeledGroup> {
    let mut name: Option<String> = None;
    let mut degree: Option<usize> = None;
    let mut claim: Option<BigUint> = None;
    let mut field: Option<u32> = None;
    let mut gens: Vec<Perm> = Vec::new();
    let mut saw_header = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if line == HEADER {
                saw_header = true;
            } else if !saw_header {
                return Err(err(format!("expected `{HEADER}` header")));
            }
            continue;
        }
        if !saw_header {
            return Err(err(format!("expected `{HEADER}` header")));
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "degree" => {
                let n: usize = rest
                    .parse()
                    .map_err(|_| err(format!("bad degree `{rest}`")))?;
                if n == 0 {
                    return Err(err("degree must be positive".into()));
                }
                degree = Some(n);
            }
            "claim" => {
                let value = rest
                    .strip_prefix("order")
                    .ok_or_else(|| err(format!("unknown claim `{rest}`")))?
                    .trim();
                claim = Some(
                    value
                        .parse()
                        .map_err(|_| err(format!("bad order `{value}`")))?,
                );
            }
            "gen" => {
                let n = degree.ok_or_else(|| err("`gen` before `degree`".into()))?;
                let g = Perm::parse_cycles(n, rest).map_err(|e| err(e.to_string()))?;
                gens.push(g);
            }
            "meta" => {
                if let Some(v) = rest.strip_prefix("field") {
                    let v = v.trim();
                    field = Some(
                        v.parse()
                            .map_err(|_| err(format!("bad field size `{v}`")))?,
                    );
                }
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    if !saw_header {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected `{HEADER}` header"),
        });
    }
    let degree = degree.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing `degree`".into(),
    })?;
    let group = PermGroup::from_generators(gens, degree)?;
    if let Some(claimed) = claim {
        if &claimed != group.order() {
            return Err(Error::OrderClaim {
                claimed: claimed.to_string(),
                actual: group.order().to_string(),
            });
        }
    }
    let mut lg = LabeledGroup::plain(name.unwrap_or_else(|| "file".into()), Family::File, group);
    lg.q = field;
    Ok(lg)
}

/// Renders a group in the file format.
pub fn write_group_file(name: &str, group: &PermGroup, field: Option<u32>) -> String {
    let mut s = format!(
        "{HEADER}\nname {name}\ndegree {}\nclaim order {}\n",
        group.degree(),
        group.order()
    );
    for g in group.generators() {
        s.push_str(&format!("gen {}\n", g.to_cycle_string().replace(',', " ")));
    }
    if let Some(q) = field {
        s.push_str(&format!("meta field {q}\n"));
    }
    s
}
