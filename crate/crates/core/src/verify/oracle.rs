//! Literal, brute-force readings of the slight/solid definitions, quantifying
//! over every subfamily of the tame sets. On a finite space every countable
//! family of tame sets is one of these subfamilies.

use crate::topology::{SubsetMask, Topology};

fn subfamilies(tame: &[SubsetMask]) -> impl Iterator<Item = Vec<SubsetMask>> + '_ {
    assert!(tame.len() <= 20, "subfamily enumeration too large");
    (0u32..(1 << tame.len()))
        .map(move |pick| tame.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &f)| f).collect())
}

fn union(fs: &[SubsetMask]) -> SubsetMask {
    fs.iter().fold(SubsetMask::EMPTY, |acc, &f| acc | f)
}

/// Some family of tame sets with empty `top`-interior covers `a`.
pub fn slight_by_families(tame: &[SubsetMask], top: &Topology, a: SubsetMask) -> bool {
    subfamilies(tame).any(|fs| fs.iter().all(|&f| top.interior(f).is_empty()) && a.is_subset_of(union(&fs)))
}

/// Every family of tame sets whose union contains a non-empty relatively
/// `top`-open subset of `a` has a member with non-empty `top`-interior.
pub fn solid_by_families(tame: &[SubsetMask], top: &Topology, a: SubsetMask) -> bool {
    let pieces: Vec<SubsetMask> = top.opens().iter().map(|v| v & a).filter(|p| !p.is_empty()).collect();
    subfamilies(tame).all(|fs| {
        let u = union(&fs);
        let covers_piece = pieces.iter().any(|p| p.is_subset_of(u));
        !covers_piece || fs.iter().any(|&f| !top.interior(f).is_empty())
    })
}
