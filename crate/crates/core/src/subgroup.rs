//! Subgroups and cosets.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::group::{GroupElement, GroupSpec};
use crate::gset::GSet;

/// Smallest subgroup containing `gens`, by breadth-first closure.
pub fn subgroup_generated(gens: &GSet) -> GSet {
    let g = gens.group();
    let generators: Vec<usize> = gens.indices().collect();
    let mut seen = FixedBitSet::with_capacity(g.size());
    seen.insert(0);
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &s in &generators {
            // Finite group: closure under adding generators already gives negatives.
            let y = g.add_idx(x, s);
            if !seen.put(y) {
                frontier.push(y);
            }
        }
    }
    GSet::from_bits(g, seen)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetWitness {
    pub translate: GroupElement,
    pub subgroup: GSet,
}

/// `Some((t, H))` with `a = t + H` iff `a` is non-empty and closed under
/// `x + y − z`.
pub fn is_coset(a: &GSet) -> Option<CosetWitness> {
    let g = a.group();
    let a0 = a.first_index()?;
    let h = GSet::from_indices(g, a.indices().map(|x| g.sub_idx(x, a0)));
    // Grow the subgroup generated by h one cyclic extension at a time; h is a
    // subgroup iff the closure never leaves it.
    let mut closure = FixedBitSet::with_capacity(g.size());
    closure.insert(0);
    let mut members = vec![0usize];
    for x in h.indices() {
        if closure.contains(x) {
            continue;
        }
        let base = members.clone();
        let mut shift = x;
        while !closure.contains(shift) {
            for &m in &base {
                let y = g.add_idx(m, shift);
                if !h.contains_idx(y) {
                    return None;
                }
                closure.insert(y);
                members.push(y);
            }
            shift = g.add_idx(shift, x);
        }
    }
    Some(CosetWitness {
        translate: g.element_at(a0),
        subgroup: h,
    })
}

/// Every subgroup of `g`, ordered by size then by membership bits.
pub fn all_subgroups(g: &GroupSpec) -> Vec<GSet> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = GSet::singleton_zero(g);
    found.insert(trivial.indices().collect());
    let mut queue = vec![trivial];
    while let Some(h) = queue.pop() {
        for x in 0..g.size() {
            if h.contains_idx(x) {
                continue;
            }
            let gens = GSet::from_indices(g, h.indices().chain([x]));
            let bigger = subgroup_generated(&gens);
            if found.insert(bigger.indices().collect()) {
                queue.push(bigger);
            }
        }
    }
    let mut out: Vec<GSet> = found
        .into_iter()
        .map(|idx| GSet::from_indices(g, idx))
        .collect();
    out.sort_by_key(|h| h.len());
    out
}

/// Every coset of every subgroup of `g`, without repeats.
pub fn all_cosets(g: &GroupSpec) -> Vec<GSet> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for h in all_subgroups(g) {
        for t in 0..g.size() {
            let c = GSet::from_indices(g, h.indices().map(|x| g.add_idx(x, t)));
            if seen.insert(c.indices().collect()) {
                out.push(c);
            }
        }
    }
    out
}
