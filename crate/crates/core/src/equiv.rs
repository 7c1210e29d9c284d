//! Equivalence relations on the ground set and their closure approximations
//! `x E_ξ y ⟺ cl_{τ_ξ}([x]_E) = cl_{τ_ξ}([y]_E)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::FiltrationSeq;
use crate::topology::{SubsetMask, Topology, MAX_GROUND};

/// Block assignment, labelled by first occurrence so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<usize>,
}

impl Partition {
    /// Relabels arbitrary keys by first occurrence.
    pub fn from_labels<K: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = K>) -> Partition {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let block_of = labels
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition { block_of }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        if n > MAX_GROUND {
            return Err(Error::GroundSizeTooLarge { n, cap: MAX_GROUND });
        }
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidPartition(format!("point {x} outside ground set of size {n}")));
                }
                if label[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("point {x} in two blocks")));
                }
                label[x] = b;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("point {x} in no block")));
        }
        Ok(Partition::from_labels(label))
    }

    pub fn identity(n: usize) -> Partition {
        Partition { block_of: (0..n).collect() }
    }

    pub fn one_block(n: usize) -> Partition {
        Partition { block_of: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |&m| m + 1)
    }

    /// Blocks as masks, ordered by least element.
    pub fn blocks(&self) -> Vec<SubsetMask> {
        let mut out = vec![SubsetMask::EMPTY; self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b] = out[b] | SubsetMask::singleton(x);
        }
        out
    }

    /// The `E`-class of `x`.
    pub fn class_of(&self, x: usize) -> SubsetMask {
        let b = self.block_of[x];
        SubsetMask::from_points((0..self.n()).filter(|&y| self.block_of[y] == b))
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// `self ⊆ other` as relations: every block of `self` lies inside one block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.n() == other.n()
            && (0..self.n()).all(|x| (0..self.n()).all(|y| !self.related(x, y) || other.related(x, y)))
    }

    /// Every partition of an `n`-point set, as restricted growth strings in lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Partition>) {
            if cur.len() == n {
                out.push(Partition { block_of: cur.clone() });
                return;
            }
            let limit = if cur.is_empty() { 0 } else { max + 1 };
            for b in 0..=limit {
                cur.push(b);
                go(n, cur, max.max(b), out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, &mut Vec::with_capacity(n), 0, &mut out);
        out
    }
}

fn same_n(e: &Partition, t: &Topology) -> Result<()> {
    if e.n() != t.n() {
        return Err(Error::MixedGroundSizes(e.n(), t.n()));
    }
    Ok(())
}

/// Identify points whose classes have the same closure in `t`.
pub fn approx(e: &Partition, t: &Topology) -> Result<Partition> {
    same_n(e, t)?;
    let closures: Vec<SubsetMask> = e.blocks().into_iter().map(|b| t.closure(b)).collect();
    Ok(Partition::from_labels((0..e.n()).map(|x| closures[e.block_of(x)])))
}

/// `[E_ξ]_ξ` along the stages of `seq`.
pub fn approx_chain(e: &Partition, seq: &FiltrationSeq) -> Result<Vec<Partition>> {
    let chain = seq.stages().iter().map(|t| approx(e, t)).collect::<Result<Vec<_>>>()?;
    debug_assert!(chain.iter().all(|p| e.refines(p)));
    Ok(chain)
}

/// Intersection of relations: `x, y` together iff together in every input.
pub fn relation_meet(ps: &[Partition]) -> Result<Partition> {
    let first = ps.first().ok_or(Error::EmptyList)?;
    let n = first.n();
    if let Some(p) = ps.iter().find(|p| p.n() != n) {
        return Err(Error::MixedGroundSizes(n, p.n()));
    }
    Ok(Partition::from_labels((0..n).map(|x| ps.iter().map(|p| p.block_of(x)).collect::<Vec<_>>())))
}

pub fn classes_open(e: &Partition, t: &Topology) -> Result<bool> {
    same_n(e, t)?;
    Ok(e.blocks().into_iter().all(|b| t.is_open(b)))
}

#[derive(Serialize, Deserialize)]
struct PartitionRecord {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self.blocks().into_iter().map(|b| b.points().collect()).collect();
        PartitionRecord { n: self.n(), blocks }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = PartitionRecord::deserialize(d)?;
        Partition::from_blocks(rec.n, &rec.blocks).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Topology {
        Topology::sierpinski()
    }

    #[test]
    fn approx_examples() {
        let id = Partition::identity(2);
        assert_eq!(approx(&id, &Topology::indiscrete(2)).unwrap(), Partition::one_block(2));
        assert_eq!(approx(&id, &Topology::discrete(2)).unwrap(), id);
        assert_eq!(approx(&id, &s()).unwrap(), id);
        assert!(matches!(approx(&id, &Topology::discrete(3)), Err(Error::MixedGroundSizes(2, 3))));
    }

    #[test]
    fn approx_chain_examples() {
        let id = Partition::identity(2);
        let sd = FiltrationSeq::new(vec![s(), Topology::discrete(2)], None).unwrap();
        assert_eq!(approx_chain(&id, &sd).unwrap(), vec![id.clone(), id.clone()]);
        let i = FiltrationSeq::new(vec![Topology::indiscrete(2)], None).unwrap();
        assert_eq!(approx_chain(&id, &i).unwrap(), vec![Partition::one_block(2)]);
        let one = Partition::one_block(2);
        for p in approx_chain(&one, &sd).unwrap() {
            assert_eq!(p, one);
        }
    }

    #[test]
    fn meet_examples() {
        let id = Partition::identity(2);
        let one = Partition::one_block(2);
        assert_eq!(relation_meet(&[id.clone(), one.clone()]).unwrap(), id);
        assert_eq!(relation_meet(&[one.clone(), one.clone()]).unwrap(), one);
        let sd = FiltrationSeq::new(vec![s(), Topology::discrete(2)], None).unwrap();
        assert_eq!(relation_meet(&approx_chain(&id, &sd).unwrap()).unwrap(), id);
        assert!(matches!(relation_meet(&[]), Err(Error::EmptyList)));
        // {0,1}{2} ∧ {0}{1,2} = identity
        let a = Partition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        let b = Partition::from_blocks(3, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(relation_meet(&[a, b]).unwrap(), Partition::identity(3));
    }

    #[test]
    fn classes_open_examples() {
        assert!(classes_open(&Partition::identity(2), &Topology::discrete(2)).unwrap());
        assert!(!classes_open(&Partition::identity(2), &s()).unwrap());
        for t in [s(), Topology::indiscrete(2), Topology::discrete(2)] {
            assert!(classes_open(&Partition::one_block(2), &t).unwrap());
        }
    }

    #[test]
    fn canonical_labels_and_serde() {
        let p = Partition::from_labels(['b', 'a', 'b']);
        assert_eq!(p, Partition::from_blocks(3, &[vec![1], vec![2, 0]]).unwrap());
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"n":3,"blocks":[[0,2],[1]]}"#);
        assert_eq!(serde_json::from_str::<Partition>(&js).unwrap(), p);
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![1]]).is_err());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }
}
