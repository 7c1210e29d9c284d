//! Brute-force oracles written directly from the definitions, compared
//! against the fast implementations on every small instance.

mod common;

use std::collections::BTreeSet;

use common::{preorder_oracle, Family};
use topofilt::enumeration::{enumerate_topologies, LABELED_COUNTS};
use topofilt::filtration::{
    discrete_families, distance, is_filtration, slowest, step, tame_sets, Distance, FiltrationSeq, Ordinal,
};
use topofilt::topology::{make_topology, BuildMode, SetFamily, SubsetMask, Topology};

fn opens_of(t: &Topology) -> Family {
    t.opens().iter().map(|m| m.0).collect()
}

fn union_closure(mut fam: Family) -> Family {
    loop {
        let items: Vec<u32> = fam.iter().copied().collect();
        let before = fam.len();
        for &a in &items {
            for &b in &items {
                fam.insert(a | b);
            }
        }
        if fam.len() == before {
            return fam;
        }
    }
}

/// Families of subsets containing ∅ and X and closed under ∪ and ∩.
fn lattice_oracle(n: usize) -> BTreeSet<Family> {
    let size = 1u32 << n;
    let full = size - 1;
    let mut out = BTreeSet::new();
    for pick in 0u64..(1u64 << size) {
        if pick & 1 == 0 || pick >> full & 1 == 0 {
            continue;
        }
        let members: Vec<u32> = (0..size).filter(|&a| pick >> a & 1 == 1).collect();
        let closed =
            members.iter().all(|&a| members.iter().all(|&b| pick >> (a | b) & 1 == 1 && pick >> (a & b) & 1 == 1));
        if closed {
            out.insert(members.into_iter().collect());
        }
    }
    out
}

fn catalog_families(n: usize) -> BTreeSet<Family> {
    enumerate_topologies(n).unwrap().entries().iter().map(opens_of).collect()
}

#[test]
fn catalog_matches_preorder_oracle_up_to_five_points() {
    for (n, &expected) in LABELED_COUNTS.iter().enumerate() {
        let oracle = preorder_oracle(n);
        assert_eq!(oracle.len(), expected, "oracle count n={n}");
        let cat = enumerate_topologies(n).unwrap();
        assert_eq!(cat.len(), expected);
        assert_eq!(catalog_families(n), oracle, "n={n}");
    }
}

#[test]
fn catalog_matches_lattice_oracle_up_to_four_points() {
    for n in 0..=4 {
        assert_eq!(catalog_families(n), lattice_oracle(n), "n={n}");
    }
}

#[test]
fn catalog_is_strictly_sorted() {
    for n in 0..=4 {
        let cat = enumerate_topologies(n).unwrap();
        assert!(cat.entries().windows(2).all(|w| w[0] < w[1]));
    }
}

fn interior_oracle(t: &Family, a: u32) -> u32 {
    t.iter().filter(|&&u| u & !a == 0).fold(0, |acc, &u| acc | u)
}

/// All unions of `U ∩ int_τ(F)`, `U` σ-open, `F` σ-closed.
fn step_oracle(n: usize, sigma: &Family, tau: &Family) -> Family {
    let full = (1u32 << n) - 1;
    let mut gens = Family::new();
    for &u in sigma {
        for &v in sigma {
            let f = full & !v;
            gens.insert(u & interior_oracle(tau, f));
        }
    }
    union_closure(gens)
}

#[test]
fn step_matches_oracle_up_to_three_points() {
    for n in 0..=3 {
        let cat = enumerate_topologies(n).unwrap();
        for (s, t) in cat.pairs() {
            let got = step(s, t).unwrap();
            assert_eq!(opens_of(&got), step_oracle(n, &opens_of(s), &opens_of(t)), "{s:?} {t:?}");
        }
    }
}

/// Iterates the step oracle; `None` when it stops below `τ`.
fn distance_oracle(n: usize, sigma: &Family, tau: &Family) -> Option<usize> {
    let mut cur = sigma.clone();
    for k in 0.. {
        if &cur == tau {
            return Some(k);
        }
        let next = step_oracle(n, &cur, tau);
        if next == cur {
            return None;
        }
        cur = next;
    }
    unreachable!()
}

#[test]
fn distance_matches_oracle_up_to_three_points() {
    for n in 0..=3 {
        let cat = enumerate_topologies(n).unwrap();
        for (s, t) in cat.pairs() {
            let want = match distance_oracle(n, &opens_of(s), &opens_of(t)) {
                Some(k) => Distance::Finite(Ordinal(k)),
                None => Distance::Unreachable,
            };
            assert_eq!(distance(s, t).unwrap(), want);
        }
    }
}

#[test]
fn distance_examples() {
    let s = Topology::sierpinski();
    let d2 = Topology::discrete(2);
    let i2 = Topology::indiscrete(2);
    assert_eq!(distance(&s, &d2).unwrap(), Distance::Finite(Ordinal(1)));
    assert_eq!(distance(&i2, &d2).unwrap(), Distance::Unreachable);
    assert_eq!(distance(&d2, &d2).unwrap(), Distance::Finite(Ordinal(0)));
    let run = slowest(&i2, &d2, usize::MAX).unwrap();
    assert_eq!(run.seq.len(), 1);
    assert!(is_filtration(&run.seq).is_pass());
}

/// Every point has an open neighbourhood meeting at most one member.
fn is_discrete_family_oracle(t: &Family, members: &[u32], n: usize) -> bool {
    (0..n).all(|x| t.iter().any(|&v| v >> x & 1 == 1 && members.iter().filter(|&&m| m & v != 0).count() <= 1))
}

fn discrete_families_oracle(n: usize, t: &Family) -> BTreeSet<Vec<u32>> {
    let opens: Vec<u32> = t.iter().copied().filter(|&v| v != 0).collect();
    (1u32..(1 << opens.len()))
        .map(|pick| opens.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>())
        .filter(|fam| is_discrete_family_oracle(t, fam, n))
        .collect()
}

#[test]
fn discrete_families_match_oracle() {
    for n in 0..=3 {
        for t in enumerate_topologies(n).unwrap().entries() {
            let got: BTreeSet<Vec<u32>> =
                discrete_families(t).iter().map(|f| f.iter().map(|m| m.0).collect()).collect();
            assert_eq!(got, discrete_families_oracle(n, &opens_of(t)), "{t:?}");
        }
    }
}

/// Least family containing the `τ_ξ`-closed sets (`ξ < α`) and closed under
/// `⋃_U (F^U ∩ U)` for every `τ_ξ`-discrete family and every assignment `U ↦ F^U`.
fn tame_oracle(seq: &FiltrationSeq, alpha: usize) -> Family {
    let n = seq.n();
    let mut tame = Family::new();
    let mut fams: Vec<Vec<u32>> = Vec::new();
    for t in &seq.stages()[..alpha] {
        let opens = opens_of(t);
        for &v in &opens {
            tame.insert(((1u32 << n) - 1) & !v);
        }
        fams.extend(discrete_families_oracle(n, &opens));
    }
    loop {
        let list: Vec<u32> = tame.iter().copied().collect();
        let before = tame.len();
        for fam in &fams {
            let k = fam.len();
            let mut idx = vec![0usize; k];
            loop {
                let patch = fam.iter().zip(&idx).fold(0, |acc, (&u, &i)| acc | (list[i] & u));
                tame.insert(patch);
                let mut j = 0;
                while j < k {
                    idx[j] += 1;
                    if idx[j] < list.len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == k {
                    break;
                }
            }
        }
        if tame.len() == before {
            return tame;
        }
    }
}

fn chains(n: usize, len: usize) -> Vec<FiltrationSeq> {
    let cat = enumerate_topologies(n).unwrap();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Topology>> = cat.entries().iter().map(|t| vec![t.clone()]).collect();
    while let Some(c) = stack.pop() {
        out.push(FiltrationSeq::new(c.clone(), None).unwrap());
        if c.len() < len {
            for t in cat.entries() {
                if c.last().unwrap().is_coarser_than(t) {
                    let mut d = c.clone();
                    d.push(t.clone());
                    stack.push(d);
                }
            }
        }
    }
    out
}

#[test]
fn tame_sets_match_assignment_oracle() {
    for n in 0..=3 {
        let max_len = if n == 3 { 2 } else { 3 };
        for seq in chains(n, max_len) {
            for alpha in 0..=seq.len() {
                let got: Family = tame_sets(&seq, Ordinal(alpha)).unwrap().iter().map(|m| m.0).collect();
                assert_eq!(got, tame_oracle(&seq, alpha), "{seq:?} alpha={alpha}");
            }
        }
    }
}

#[test]
fn tame_examples() {
    let s = Topology::sierpinski();
    let seq = FiltrationSeq::new(vec![s.clone(), Topology::discrete(2)], None).unwrap();
    // α = 0: no earlier stages, nothing is tame
    assert!(tame_sets(&seq, Ordinal(0)).unwrap().is_empty());
    // α = 1: the S-closed sets ∅, {1}, X, plus X ∩ {0} from the discrete family {{0}}
    let want: SetFamily = [0b00, 0b01, 0b10, 0b11].into_iter().map(SubsetMask).collect();
    assert_eq!(tame_sets(&seq, Ordinal(1)).unwrap(), want);
    let dd = FiltrationSeq::new(vec![Topology::discrete(2); 2], None).unwrap();
    assert_eq!(tame_sets(&dd, Ordinal(1)).unwrap().len(), 4);
}

#[test]
fn make_topology_validates_against_union_closure() {
    for n in 0..=3u32 {
        let size = 1u32 << n;
        for pick in 0u64..(1u64 << size).min(1 << 8) {
            let fam: SetFamily = (0..size).filter(|&a| pick >> a & 1 == 1).map(SubsetMask).collect();
            let generated = make_topology(n as usize, &fam, BuildMode::Generate).unwrap();
            let mut gens: Family = fam.iter().map(|m| m.0).collect();
            gens.insert(0);
            gens.insert(size - 1);
            // intersections of generators, then unions
            let mut meets = gens.clone();
            loop {
                let items: Vec<u32> = meets.iter().copied().collect();
                let before = meets.len();
                for &a in &items {
                    for &b in &items {
                        meets.insert(a & b);
                    }
                }
                if meets.len() == before {
                    break;
                }
            }
            let want = union_closure(meets);
            assert_eq!(opens_of(&generated), want);
            let validated = make_topology(n as usize, &fam, BuildMode::Validate);
            let exact: Family = fam.iter().map(|m| m.0).collect();
            assert_eq!(validated.is_ok(), exact == want, "{fam:?}");
        }
    }
}
