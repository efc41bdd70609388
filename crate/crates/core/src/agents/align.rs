use std::collections::{BTreeMap, BTreeSet};

use crate::ltl::Formula;

pub const SIMILARITY_THRESHOLD: f64 = 0.6;

fn tokens(name: &str) -> BTreeSet<String> {
    name.to_lowercase()
        .split('_')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

fn numeric_tokens(name: &str) -> Vec<String> {
    name.to_lowercase()
        .split('_')
        .filter(|t| t.chars().any(|c| c.is_ascii_digit()))
        .map(str::to_string)
        .collect()
}

/// max(normalized Levenshtein, token Jaccard), both case-insensitive.
pub fn similarity(a: &str, b: &str) -> f64 {
    let lev = strsim::normalized_levenshtein(&a.to_lowercase(), &b.to_lowercase());
    let (ta, tb) = (tokens(a), tokens(b));
    let union = ta.union(&tb).count();
    let jaccard = if union == 0 {
        0.0
    } else {
        ta.intersection(&tb).count() as f64 / union as f64
    };
    lev.max(jaccard)
}

/// `entry` with its numeric tokens replaced positionally by those of
/// `atom`, when both carry the same number of them.
fn transfer_format(entry: &str, atom: &str) -> Option<String> {
    let ours = numeric_tokens(atom);
    if ours.is_empty() || numeric_tokens(entry).len() != ours.len() {
        return None;
    }
    let mut ours = ours.into_iter();
    let parts: Vec<String> = entry
        .split('_')
        .map(|t| {
            if t.chars().any(|c| c.is_ascii_digit()) {
                ours.next().expect("counts match")
            } else {
                t.to_string()
            }
        })
        .collect();
    Some(parts.join("_"))
}

/// Library name chosen for `atom`, if any clears the threshold.
///
/// Candidates are the library entries followed by their format-transferred
/// variants; a candidate is only eligible when its numeric tokens equal the
/// atom's. Ties keep the earlier candidate.
pub fn best_match(atom: &str, library: &[String]) -> Option<String> {
    if library.iter().any(|e| e == atom) {
        return Some(atom.to_string());
    }
    let wanted = numeric_tokens(atom);
    let mut candidates: Vec<String> = library.to_vec();
    for entry in library {
        if let Some(v) = transfer_format(entry, atom) {
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
    }
    let mut best: Option<(f64, String)> = None;
    for c in candidates {
        if numeric_tokens(&c) != wanted {
            continue;
        }
        let s = similarity(atom, &c);
        if s >= SIMILARITY_THRESHOLD && best.as_ref().map_or(true, |(b, _)| s > *b) {
            best = Some((s, c));
        }
    }
    best.map(|(_, c)| c)
}

/// Renaming map produced by similarity matching; identity entries omitted.
pub fn similarity_map(f: &Formula, library: &[String]) -> BTreeMap<String, String> {
    f.atomic_propositions()
        .into_iter()
        .filter_map(|a| {
            let m = best_match(&a, library)?;
            (m != a).then_some((a, m))
        })
        .collect()
}

/// The atom renaming taking `from` to `to`, if `to` differs from `from` in
/// atom names only and renames consistently.
pub fn rename_between(from: &Formula, to: &Formula) -> Option<BTreeMap<String, String>> {
    fn walk(a: &Formula, b: &Formula, map: &mut BTreeMap<String, String>) -> bool {
        match (a, b) {
            (Formula::Atom(x), Formula::Atom(y)) => match map.get(x) {
                Some(prev) => prev == y,
                None => {
                    map.insert(x.clone(), y.clone());
                    true
                }
            },
            _ => {
                std::mem::discriminant(a) == std::mem::discriminant(b) && {
                    let (ca, cb) = (a.children(), b.children());
                    ca.len() == cb.len() && ca.iter().zip(cb).all(|(x, y)| walk(x, y, map))
                }
            }
        }
    }
    let mut map = BTreeMap::new();
    walk(from, to, &mut map).then_some(map)
}
