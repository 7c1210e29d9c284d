//! Every topology on a small labelled ground set, via specialization preorders.
//!
//! A topology on `n` points is the same thing as a preorder, and a preorder
//! is an `n × n` boolean matrix, so generation walks rows with transitivity
//! pruning instead of searching the `2^(2^n)` families of subsets.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{is_filtration, is_weak_filtration, FiltrationSeq};
use crate::topology::{Preorder, SetFamily, SubsetMask, Topology};

pub const ENUMERATION_CAP: usize = 5;
pub const PAIR_CAP: usize = 4;
pub const FILTRATION_CAP: usize = 3;

/// Number of labelled topologies on `n` points, `n = 0..=5`.
pub const LABELED_COUNTS: [usize; 6] = [1, 1, 4, 29, 355, 6942];

const CACHE_FORMAT: &str = "topofilt-catalog";
const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct TopologyCatalog {
    n: usize,
    entries: Vec<Topology>,
    index: HashMap<SetFamily, usize>,
}

impl PartialEq for TopologyCatalog {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl Eq for TopologyCatalog {}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::GroundSizeTooLarge { n, cap });
    }
    Ok(())
}

/// Extends `rows[..k]` by every admissible row for point `k`.
fn extend_rows(n: usize, rows: &mut Vec<SubsetMask>, out: &mut Vec<Topology>) {
    let k = rows.len();
    if k == n {
        let p = Preorder::from_rows(n, rows.clone()).expect("rows kept transitive");
        out.push(Topology::from_preorder(&p).expect("valid preorder"));
        return;
    }
    let me = SubsetMask::singleton(k);
    let others = SubsetMask::full(n).minus(me);
    for rest in others.subsets() {
        let row = rest | me;
        let consistent = (0..k).all(|i| {
            let up_i = rows[i];
            (!up_i.contains(k) || row.is_subset_of(up_i)) && (!row.contains(i) || up_i.is_subset_of(row))
        });
        if consistent {
            rows.push(row);
            extend_rows(n, rows, out);
            rows.pop();
        }
    }
}

/// All labelled topologies on `n ≤ 5` points, in catalog order.
/// Shards on the first row; runs on the current rayon pool.
pub fn enumerate_topologies(n: usize) -> Result<TopologyCatalog> {
    check_cap(n, ENUMERATION_CAP)?;
    let mut entries: Vec<Topology> = if n == 0 {
        vec![Topology::discrete(0)]
    } else {
        let first_rows: Vec<SubsetMask> = SubsetMask::full(n)
            .minus(SubsetMask::singleton(0))
            .subsets()
            .map(|r| r | SubsetMask::singleton(0))
            .collect();
        first_rows
            .par_iter()
            .map(|&row| {
                let mut out = Vec::new();
                extend_rows(n, &mut vec![row], &mut out);
                out
            })
            .flatten()
            .collect()
    };
    entries.par_sort();
    entries.dedup();
    Ok(TopologyCatalog::from_sorted(n, entries))
}

impl TopologyCatalog {
    fn from_sorted(n: usize, entries: Vec<Topology>) -> TopologyCatalog {
        let index = entries.iter().enumerate().map(|(i, t)| (t.opens().clone(), i)).collect();
        TopologyCatalog { n, entries, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Topology] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Topology {
        &self.entries[i]
    }

    pub fn position(&self, t: &Topology) -> Option<usize> {
        if t.n() != self.n {
            return None;
        }
        self.index.get(t.opens()).copied()
    }

    /// Ordered pairs `(i, j)` with `entries[i] ⊆ entries[j]`, row-major.
    pub fn pair_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.entries.len();
        (0..m).flat_map(move |i| {
            (0..m).filter(move |&j| self.entries[i].is_coarser_than(&self.entries[j])).map(move |j| (i, j))
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Topology, &Topology)> + '_ {
        self.pair_indices().map(move |(i, j)| (&self.entries[i], &self.entries[j]))
    }

    /// Non-decreasing chains `σ = t_0 ⊆ … ⊆ t_k ⊆ τ`, `k < max_len`, accepted by
    /// `keep` with target `τ`, in depth-first order over catalog positions.
    /// `keep` must be closed under truncation; rejected prefixes are pruned.
    fn chains<F>(&self, sigma: &Topology, tau: &Topology, max_len: usize, keep: F) -> Result<Vec<FiltrationSeq>>
    where
        F: Fn(&FiltrationSeq) -> bool,
    {
        check_cap(self.n, FILTRATION_CAP)?;
        self.chains_uncapped(sigma, tau, max_len, keep)
    }

    pub(crate) fn chains_uncapped<F>(
        &self,
        sigma: &Topology,
        tau: &Topology,
        max_len: usize,
        keep: F,
    ) -> Result<Vec<FiltrationSeq>>
    where
        F: Fn(&FiltrationSeq) -> bool,
    {
        if sigma.n() != self.n || tau.n() != self.n {
            return Err(Error::MixedGroundSizes(self.n, sigma.n().max(tau.n())));
        }
        if !sigma.is_coarser_than(tau) {
            return Err(Error::NotSubtopology);
        }
        let between: Vec<&Topology> =
            self.entries.iter().filter(|t| sigma.is_coarser_than(t) && t.is_coarser_than(tau)).collect();
        let mut out = Vec::new();
        let mut stack = vec![sigma.clone()];
        self.grow(&between, tau, max_len, &keep, &mut stack, &mut out)?;
        Ok(out)
    }

    fn grow<F>(
        &self,
        between: &[&Topology],
        tau: &Topology,
        max_len: usize,
        keep: &F,
        stack: &mut Vec<Topology>,
        out: &mut Vec<FiltrationSeq>,
    ) -> Result<()>
    where
        F: Fn(&FiltrationSeq) -> bool,
    {
        let seq = FiltrationSeq::new(stack.clone(), Some(tau.clone()))?;
        if !keep(&seq) {
            return Ok(());
        }
        out.push(seq);
        if stack.len() >= max_len {
            return Ok(());
        }
        for &t in between {
            if stack.last().expect("non-empty").is_coarser_than(t) {
                stack.push(t.clone());
                self.grow(between, tau, max_len, keep, stack, out)?;
                stack.pop();
            }
        }
        Ok(())
    }

    /// Every non-decreasing chain of at most `max_len` stages starting at `σ`, without a target.
    pub fn chains_from(&self, sigma: &Topology, max_len: usize) -> Result<Vec<FiltrationSeq>> {
        let top = Topology::discrete(self.n);
        self.chains(sigma, &top, max_len, |_| true)?.into_iter().map(|s| s.with_target(None)).collect()
    }

    pub fn filtrations(&self, sigma: &Topology, tau: &Topology, max_len: usize) -> Result<Vec<FiltrationSeq>> {
        self.chains(sigma, tau, max_len, |s| is_filtration(s).is_pass())
    }

    pub fn weak_filtrations(&self, sigma: &Topology, tau: &Topology, max_len: usize) -> Result<Vec<FiltrationSeq>> {
        self.chains(sigma, tau, max_len, |s| is_weak_filtration(s).is_pass())
    }
}

/// All ⊆-comparable ordered pairs on `n ≤ 4` points, materialized.
pub fn enumerate_pairs(n: usize) -> Result<Vec<(Topology, Topology)>> {
    check_cap(n, PAIR_CAP)?;
    let cat = enumerate_topologies(n)?;
    Ok(cat.pairs().map(|(a, b)| (a.clone(), b.clone())).collect())
}

/// Filtrations from `σ` to `τ` with fewer than `max_len + 1` stages; `n ≤ 3`.
pub fn enumerate_filtrations(sigma: &Topology, tau: &Topology, max_len: usize) -> Result<Vec<FiltrationSeq>> {
    check_cap(sigma.n(), FILTRATION_CAP)?;
    enumerate_topologies(sigma.n())?.filtrations(sigma, tau, max_len)
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    format: String,
    version: u32,
    n: usize,
    count: usize,
}

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("topologies_n{n}.jsonl"))
}

/// Writes the catalog atomically (temp file, then rename).
pub fn cache_store(dir: &Path, catalog: &TopologyCatalog) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, catalog.n);
    let tmp = path.with_extension(format!("jsonl.tmp{}", std::process::id()));
    {
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        write_catalog(&mut w, catalog)?;
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn write_catalog<W: Write>(w: &mut W, catalog: &TopologyCatalog) -> Result<()> {
    let header =
        CacheHeader { format: CACHE_FORMAT.into(), version: CACHE_VERSION, n: catalog.n, count: catalog.len() };
    writeln!(w, "{}", serde_json::to_string(&header)?)?;
    for t in &catalog.entries {
        writeln!(w, "{}", serde_json::to_string(t)?)?;
    }
    Ok(())
}

/// Reads and validates a cache file.
pub fn cache_read(path: &Path) -> Result<TopologyCatalog> {
    let corrupt = |reason: String| Error::CacheCorrupt { path: path.to_path_buf(), reason };
    let mut lines = BufReader::new(fs::File::open(path)?).lines();
    let header: CacheHeader = match lines.next() {
        Some(line) => serde_json::from_str(&line?).map_err(|e| corrupt(format!("bad header: {e}")))?,
        None => return Err(corrupt("empty file".into())),
    };
    if header.format != CACHE_FORMAT || header.version != CACHE_VERSION {
        return Err(corrupt(format!("unsupported format {} v{}", header.format, header.version)));
    }
    if header.n > ENUMERATION_CAP || header.count != LABELED_COUNTS[header.n] {
        return Err(corrupt(format!("header count {} wrong for n = {}", header.count, header.n)));
    }
    let mut entries = Vec::with_capacity(header.count);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let t: Topology = serde_json::from_str(&line).map_err(|e| corrupt(format!("entry {i}: {e}")))?;
        if t.n() != header.n {
            return Err(corrupt(format!("entry {i} has n = {}", t.n())));
        }
        if entries.last().is_some_and(|prev: &Topology| prev >= &t) {
            return Err(corrupt(format!("entry {i} out of order or duplicated")));
        }
        entries.push(t);
    }
    if entries.len() != header.count {
        return Err(corrupt(format!("header says {} entries, found {}", header.count, entries.len())));
    }
    Ok(TopologyCatalog::from_sorted(header.n, entries))
}

/// Loads the cached catalog for `n`, regenerating and storing it when the file is missing.
pub fn cache_load(dir: &Path, n: usize) -> Result<TopologyCatalog> {
    check_cap(n, ENUMERATION_CAP)?;
    let path = cache_path(dir, n);
    if !path.exists() {
        let catalog = enumerate_topologies(n)?;
        cache_store(dir, &catalog)?;
        return Ok(catalog);
    }
    cache_read(&path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalogs() {
        assert_eq!(enumerate_topologies(0).unwrap().len(), 1);
        let two = enumerate_topologies(2).unwrap();
        assert_eq!(two.len(), 4);
        let s = Topology::sierpinski();
        assert!(two.position(&s).is_some());
        assert!(two.position(&Topology::discrete(2)).is_some());
        assert!(two.position(&Topology::indiscrete(2)).is_some());
        assert!(matches!(enumerate_topologies(6), Err(Error::GroundSizeTooLarge { n: 6, cap: 5 })));
    }

    #[test]
    fn catalog_is_sorted_and_indexed() {
        let cat = enumerate_topologies(3).unwrap();
        assert_eq!(cat.len(), 29);
        assert!(cat.entries().windows(2).all(|w| w[0] < w[1]));
        for (i, t) in cat.entries().iter().enumerate() {
            assert_eq!(cat.position(t), Some(i));
        }
    }

    #[test]
    fn pair_counts() {
        assert_eq!(enumerate_pairs(1).unwrap().len(), 1);
        assert_eq!(enumerate_pairs(2).unwrap().len(), 9);
        assert!(matches!(enumerate_pairs(5), Err(Error::GroundSizeTooLarge { n: 5, cap: 4 })));
    }

    #[test]
    fn filtration_examples() {
        let s = Topology::sierpinski();
        let d2 = Topology::discrete(2);
        let i2 = Topology::indiscrete(2);
        for t in [&s, &d2, &i2] {
            let fs = enumerate_filtrations(t, t, 3).unwrap();
            assert_eq!(fs[0].stages(), std::slice::from_ref(t));
        }
        let sd = enumerate_filtrations(&s, &d2, 2).unwrap();
        assert!(sd.iter().any(|f| f.stages() == [s.clone(), d2.clone()]));
        let id = enumerate_filtrations(&i2, &d2, 2).unwrap();
        assert!(id.iter().any(|f| f.stages() == [i2.clone(), d2.clone()]));
        assert!(id.iter().all(|f| f.len() <= 2));
        // [S, S] is not a filtration to D2, so nothing extends it
        assert!(sd.iter().all(|f| f.stages() != [s.clone(), s.clone()]));
        assert!(matches!(
            enumerate_filtrations(&Topology::discrete(4), &Topology::discrete(4), 2),
            Err(Error::GroundSizeTooLarge { .. })
        ));
    }
}
