//! Oracles shared by several test targets.

use std::collections::BTreeSet;

pub type Family = BTreeSet<u32>;

/// Topologies as reflexive, transitive relations: `le[x][y]` iff `x ≤ y`.
/// Opens are the up-sets of the relation.
pub fn preorder_oracle(n: usize) -> BTreeSet<Family> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = BTreeSet::new();
    for pick in 0u64..(1 << off.len()) {
        let mut le = vec![vec![false; n]; n];
        for (x, row) in le.iter_mut().enumerate() {
            row[x] = true;
        }
        for (i, &(x, y)) in off.iter().enumerate() {
            if pick >> i & 1 == 1 {
                le[x][y] = true;
            }
        }
        let transitive = (0..n).all(|x| (0..n).all(|y| !le[x][y] || (0..n).all(|z| !le[y][z] || le[x][z])));
        if !transitive {
            continue;
        }
        let opens: Family = (0u32..(1 << n))
            .filter(|&a| (0..n).all(|x| a >> x & 1 == 0 || (0..n).all(|y| !le[x][y] || a >> y & 1 == 1)))
            .collect();
        out.insert(opens);
    }
    out
}
