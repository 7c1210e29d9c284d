//! Low levels of the Borel hierarchy relative to a finite topology.
//!
//! `Σ⁰_1` are the opens and `Π⁰_k` the complements of `Σ⁰_k`. For `k ≥ 2`,
//! `Σ⁰_k` is the closure under unions of `⋃_{j<k} Π⁰_j`, except that the
//! difference convention seeds `Σ⁰_2` with differences of opens `U ∖ V` so
//! the hierarchy stays monotone outside metrizable spaces. On a finite set
//! the naive seed makes `Σ⁰_2` collapse to the closed sets. Both conventions
//! end at the Boolean algebra generated by the opens.

use serde::{Deserialize, Serialize};

use super::{SubsetMask, Topology};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BorelConvention {
    #[default]
    Difference,
    Naive,
}

impl std::str::FromStr for BorelConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "difference" => Ok(BorelConvention::Difference),
            "naive" => Ok(BorelConvention::Naive),
            other => Err(format!("unknown Borel convention `{other}` (expected difference|naive)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BorelClass {
    Clopen,
    Open,
    Closed,
    /// In the generated Boolean algebra but neither open nor closed.
    Constructible,
    None,
}

/// Membership tables for `Σ⁰_k`, `k = 1 ..`, up to the level where the hierarchy stabilises.
#[derive(Clone, Debug)]
pub struct BorelHierarchy {
    n: usize,
    convention: BorelConvention,
    sigma: Vec<Vec<bool>>,
}

/// `g[B]` = union of the members contained in `B`; `B` is a union of members iff `g[B] = B`.
fn union_closure(n: usize, members: &[bool]) -> Vec<bool> {
    let size = 1usize << n;
    let mut g: Vec<u32> = (0..size).map(|b| if members[b] { b as u32 } else { 0 }).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for b in 0..size {
            if b & bit != 0 {
                g[b] |= g[b ^ bit];
            }
        }
    }
    (0..size).map(|b| g[b] == b as u32).collect()
}

fn complement_table(n: usize, table: &[bool]) -> Vec<bool> {
    let full = (1usize << n) - 1;
    (0..table.len()).map(|b| table[full ^ b]).collect()
}

impl BorelHierarchy {
    pub fn new(sigma: &Topology, convention: BorelConvention) -> BorelHierarchy {
        let n = sigma.n();
        let size = 1usize << n;
        let mut open = vec![false; size];
        for u in sigma.opens().iter() {
            open[u.0 as usize] = true;
        }
        let mut levels = vec![open];
        // running union of Π⁰_j for j < k
        let mut seed = complement_table(n, &levels[0]);
        loop {
            let k = levels.len() + 1;
            let base = if k == 2 && convention == BorelConvention::Difference {
                let opens: Vec<SubsetMask> = sigma.opens().iter().collect();
                let mut diff = vec![false; size];
                for &u in &opens {
                    for &v in &opens {
                        diff[u.minus(v).0 as usize] = true;
                    }
                }
                diff.iter().zip(&seed).map(|(a, b)| *a || *b).collect::<Vec<_>>()
            } else {
                seed.clone()
            };
            let next = union_closure(n, &base);
            if Some(&next) == levels.last() {
                break;
            }
            let pi = complement_table(n, &next);
            for (s, p) in seed.iter_mut().zip(&pi) {
                *s |= *p;
            }
            levels.push(next);
        }
        BorelHierarchy { n, convention, sigma: levels }
    }

    pub fn convention(&self) -> BorelConvention {
        self.convention
    }

    /// Number of distinct levels before stabilisation.
    pub fn height(&self) -> usize {
        self.sigma.len()
    }

    fn level(&self, k: usize) -> &[bool] {
        assert!(k >= 1, "Borel levels start at 1");
        &self.sigma[(k - 1).min(self.sigma.len() - 1)]
    }

    pub fn in_sigma(&self, k: usize, a: SubsetMask) -> bool {
        self.level(k)[a.0 as usize]
    }

    pub fn in_pi(&self, k: usize, a: SubsetMask) -> bool {
        self.level(k)[a.complement(self.n).0 as usize]
    }

    /// `a ∈ ⋃_{ξ<α} Π⁰_{1+ξ}`, i.e. `a ∈ Π⁰_k` for some `1 ≤ k ≤ alpha`.
    pub fn in_pi_below(&self, alpha: usize, a: SubsetMask) -> bool {
        (1..=alpha).any(|k| self.in_pi(k, a))
    }

    pub fn pi_rank(&self, a: SubsetMask) -> Option<usize> {
        (1..=self.height()).find(|&k| self.in_pi(k, a))
    }

    pub fn sigma_rank(&self, a: SubsetMask) -> Option<usize> {
        (1..=self.height()).find(|&k| self.in_sigma(k, a))
    }

    pub fn classify(&self, a: SubsetMask) -> BorelClass {
        match (self.in_sigma(1, a), self.in_pi(1, a)) {
            (true, true) => BorelClass::Clopen,
            (true, false) => BorelClass::Open,
            (false, true) => BorelClass::Closed,
            (false, false) if self.pi_rank(a).is_some() => BorelClass::Constructible,
            _ => BorelClass::None,
        }
    }
}

pub fn borel_class(sigma: &Topology, a: SubsetMask, convention: BorelConvention) -> BorelClass {
    BorelHierarchy::new(sigma, convention).classify(a)
}

/// Verbose classification: the class plus the least `Σ`/`Π` level under each convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorelReport {
    pub set: SubsetMask,
    pub class: BorelClass,
    pub difference: LevelReport,
    pub naive: LevelReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub sigma_rank: Option<usize>,
    pub pi_rank: Option<usize>,
    pub height: usize,
}

pub fn borel_report(sigma: &Topology, a: SubsetMask) -> BorelReport {
    let level =
        |h: &BorelHierarchy| LevelReport { sigma_rank: h.sigma_rank(a), pi_rank: h.pi_rank(a), height: h.height() };
    let diff = BorelHierarchy::new(sigma, BorelConvention::Difference);
    let naive = BorelHierarchy::new(sigma, BorelConvention::Naive);
    BorelReport { set: a, class: diff.classify(a), difference: level(&diff), naive: level(&naive) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_examples() {
        let s = Topology::sierpinski();
        assert_eq!(borel_class(&s, SubsetMask(0b10), BorelConvention::Difference), BorelClass::Closed);
        assert_eq!(
            borel_class(&Topology::indiscrete(2), SubsetMask(0b01), BorelConvention::Difference),
            BorelClass::None
        );
        assert_eq!(
            borel_class(&Topology::discrete(2), SubsetMask(0b01), BorelConvention::Difference),
            BorelClass::Clopen
        );
    }

    #[test]
    fn difference_convention_reaches_the_algebra_at_level_two() {
        // chain 0 < 1 < 2: opens are up-sets {∅,{2},{1,2},X}; {1} = {1,2} ∖ {2}
        let t = Topology::generated_by(3, [SubsetMask(0b100), SubsetMask(0b110)]);
        let a = SubsetMask(0b010);
        let diff = BorelHierarchy::new(&t, BorelConvention::Difference);
        let naive = BorelHierarchy::new(&t, BorelConvention::Naive);
        assert_eq!(diff.classify(a), BorelClass::Constructible);
        assert_eq!(naive.classify(a), BorelClass::Constructible);
        assert_eq!(diff.pi_rank(a), Some(2));
        // naive: Σ⁰_2 = closed, Π⁰_2 = open, so {1} first appears at Π⁰_3
        assert_eq!(naive.pi_rank(a), Some(3));
        assert!(!naive.in_sigma(2, a) && !naive.in_pi(2, a));
        let report = borel_report(&t, a);
        assert_eq!(report.difference.pi_rank, Some(2));
        assert_eq!(report.naive.pi_rank, Some(3));
    }

    #[test]
    fn top_level_is_the_generated_algebra() {
        let t = Topology::generated_by(4, [SubsetMask(0b0011), SubsetMask(0b0110), SubsetMask(0b1000)]);
        let algebra = t.c_sets();
        for conv in [BorelConvention::Difference, BorelConvention::Naive] {
            let h = BorelHierarchy::new(&t, conv);
            for a in SubsetMask::all(4) {
                assert_eq!(h.pi_rank(a).is_some(), algebra.contains(a), "{conv:?} {a}");
                assert_eq!(h.sigma_rank(a).is_some(), algebra.contains(a));
            }
        }
    }
}
