//! Finite topologies on `{0, .., n-1}`.
//!
//! Every finite topology is Alexandrov: each point `x` has a smallest open
//! neighbourhood `U_x`, and a set is open iff it contains `U_x` for each of
//! its points. All operations below work from that table; the canonical
//! list of opens is kept alongside for equality, ordering and serialization.

mod borel;
mod mask;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use borel::{borel_class, borel_report, BorelClass, BorelConvention, BorelHierarchy, BorelReport};
pub use mask::{SetFamily, SubsetMask, MAX_GROUND};

use crate::error::{Error, Result};

/// How `make_topology` treats its generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// The generators must already be a topology.
    Validate,
    /// Take the smallest topology containing the generators.
    Generate,
}

/// Separation convention used by [`Topology::is_regular_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    /// Points and closed sets can be separated; points need not be closed.
    #[default]
    Pure,
    /// Pure regularity plus T1 (every singleton closed).
    WithT1,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    n: usize,
    opens: SetFamily,
    min_nbhd: Vec<SubsetMask>,
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::GroundSizeTooLarge { n, cap: MAX_GROUND });
    }
    Ok(())
}

/// Canonical constructor.
pub fn make_topology(n: usize, generators: &SetFamily, mode: BuildMode) -> Result<Topology> {
    check_ground(n)?;
    for g in generators.iter() {
        g.check_fits(n)?;
    }
    let generated = Topology::generated_by(n, generators.iter());
    if mode == BuildMode::Generate {
        return Ok(generated);
    }
    if !generators.contains(SubsetMask::EMPTY) {
        return Err(Error::NotATopology { witness: SubsetMask::EMPTY, reason: "empty set missing" });
    }
    let full = SubsetMask::full(n);
    if !generators.contains(full) {
        return Err(Error::NotATopology { witness: full, reason: "whole set missing" });
    }
    // generated ⊇ generators always; equality iff closed under ∪ and ∩
    if let Some(w) = generated.opens.iter().find(|&u| !generators.contains(u)) {
        return Err(Error::NotATopology { witness: w, reason: "not closed under union and intersection" });
    }
    Ok(generated)
}

impl Topology {
    /// Smallest topology containing every set in `generators`.
    pub fn generated_by<I: IntoIterator<Item = SubsetMask>>(n: usize, generators: I) -> Topology {
        let full = SubsetMask::full(n);
        let mut min_nbhd = vec![full; n];
        for g in generators {
            for x in g.points() {
                min_nbhd[x] = min_nbhd[x] & g;
            }
        }
        Topology::from_min_nbhds(n, min_nbhd)
    }

    /// Builds from a minimal-neighbourhood table that is already reflexive and transitive.
    fn from_min_nbhds(n: usize, min_nbhd: Vec<SubsetMask>) -> Topology {
        debug_assert!((0..n).all(|x| min_nbhd[x].contains(x)));
        let is_up = |a: SubsetMask| a.points().all(|x| min_nbhd[x].is_subset_of(a));
        let opens = SetFamily::from(SubsetMask::all(n).filter(|&a| is_up(a)).collect::<Vec<_>>());
        Topology { n, opens, min_nbhd }
    }

    pub fn discrete(n: usize) -> Topology {
        Topology::from_min_nbhds(n, (0..n).map(SubsetMask::singleton).collect())
    }

    pub fn indiscrete(n: usize) -> Topology {
        Topology::from_min_nbhds(n, vec![SubsetMask::full(n); n])
    }

    /// `{∅, {0}, X}` on two points.
    pub fn sierpinski() -> Topology {
        Topology::from_min_nbhds(2, vec![SubsetMask(0b01), SubsetMask(0b11)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn opens(&self) -> &SetFamily {
        &self.opens
    }

    /// Complements of the opens, ascending.
    pub fn closed_sets(&self) -> SetFamily {
        self.opens.iter().map(|u| u.complement(self.n)).collect()
    }

    pub fn min_nbhd(&self, x: usize) -> SubsetMask {
        self.min_nbhd[x]
    }

    pub fn min_nbhds(&self) -> &[SubsetMask] {
        &self.min_nbhd
    }

    pub fn is_open(&self, a: SubsetMask) -> bool {
        a.fits(self.n) && a.points().all(|x| self.min_nbhd[x].is_subset_of(a))
    }

    pub fn is_closed(&self, a: SubsetMask) -> bool {
        a.fits(self.n) && self.is_open(a.complement(self.n))
    }

    pub fn interior(&self, a: SubsetMask) -> SubsetMask {
        a.points()
            .filter(|&x| self.min_nbhd[x].is_subset_of(a))
            .fold(SubsetMask::EMPTY, |acc, x| acc | SubsetMask::singleton(x))
    }

    pub fn closure(&self, a: SubsetMask) -> SubsetMask {
        self.interior(a.complement(self.n)).complement(self.n)
    }

    /// Smallest open set containing `a`.
    pub fn open_hull(&self, a: SubsetMask) -> SubsetMask {
        a.points().fold(SubsetMask::EMPTY, |acc, x| acc | self.min_nbhd[x])
    }

    pub fn is_dense(&self, a: SubsetMask) -> bool {
        self.closure(a) == self.full()
    }

    /// `self ⊆ other` as families of opens.
    pub fn is_coarser_than(&self, other: &Topology) -> bool {
        self.n == other.n && (0..self.n).all(|x| other.min_nbhd[x].is_subset_of(self.min_nbhd[x]))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|x| self.min_nbhd[x] == SubsetMask::singleton(x))
    }

    pub fn specialization_preorder(&self) -> Preorder {
        Preorder { n: self.n, up: self.min_nbhd.clone() }
    }

    pub fn from_preorder(p: &Preorder) -> Result<Topology> {
        p.validate()?;
        Ok(Topology::from_min_nbhds(p.n, p.up.clone()))
    }

    /// Point/closed-set separation, without T1.
    pub fn is_regular(&self) -> bool {
        self.is_regular_with(Regularity::Pure)
    }

    pub fn is_regular_with(&self, convention: Regularity) -> bool {
        if convention == Regularity::WithT1 && !(0..self.n).all(|x| self.is_closed(SubsetMask::singleton(x))) {
            return false;
        }
        // smallest candidates: U = U_x and V = open hull of F
        self.closed_sets().iter().all(|f| {
            let hull = self.open_hull(f);
            f.complement(self.n).points().all(|x| !self.min_nbhd[x].meets(hull))
        })
    }

    pub fn is_nowhere_dense(&self, a: SubsetMask) -> bool {
        self.interior(self.closure(a)).is_empty()
    }

    /// Points whose singleton is nowhere dense; a set is meager iff it lies inside this set.
    pub fn meager_kernel(&self) -> SubsetMask {
        (0..self.n)
            .filter(|&x| self.is_nowhere_dense(SubsetMask::singleton(x)))
            .fold(SubsetMask::EMPTY, |acc, x| acc | SubsetMask::singleton(x))
    }

    /// A union of nowhere dense sets: every point of `a` lies in a nowhere dense
    /// subset of `a`, hence its singleton is nowhere dense.
    pub fn is_meager(&self, a: SubsetMask) -> bool {
        a.is_subset_of(self.meager_kernel())
    }

    /// Interior of `b` in the subspace `y` (minimal neighbourhoods become `U_x ∩ y`).
    pub fn relative_interior(&self, y: SubsetMask, b: SubsetMask) -> SubsetMask {
        let b = b & y;
        b.points()
            .filter(|&x| (self.min_nbhd[x] & y).is_subset_of(b))
            .fold(SubsetMask::EMPTY, |acc, x| acc | SubsetMask::singleton(x))
    }

    /// `m` is meager in the subspace `y`.
    pub fn is_relatively_meager(&self, y: SubsetMask, m: SubsetMask) -> bool {
        m.is_subset_of(y)
            && m.points().all(|x| {
                let cl = self.closure(SubsetMask::singleton(x)) & y;
                self.relative_interior(y, cl).is_empty()
            })
    }

    /// Every meager set has dense complement.
    pub fn is_baire(&self) -> bool {
        let full = self.full();
        self.meager_kernel().subsets().all(|m| self.is_dense(full.minus(m)))
    }

    /// All `U Δ M` with `U` open and `M` meager.
    pub fn baire_property_sets(&self) -> SetFamily {
        let mut table = vec![false; 1 << self.n];
        let kernel = self.meager_kernel();
        for u in self.opens.iter() {
            for m in kernel.subsets() {
                table[(u ^ m).0 as usize] = true;
            }
        }
        SetFamily::from_table(&table)
    }

    /// Points lying in exactly the same opens form one atom of the Boolean
    /// algebra generated by the opens.
    pub fn algebra_atoms(&self) -> Vec<SubsetMask> {
        let mut atoms: Vec<SubsetMask> = Vec::new();
        let mut seen = SubsetMask::EMPTY;
        for x in 0..self.n {
            if seen.contains(x) {
                continue;
            }
            let atom = (x..self.n)
                .filter(|&y| self.min_nbhd[y] == self.min_nbhd[x])
                .fold(SubsetMask::EMPTY, |acc, y| acc | SubsetMask::singleton(y));
            seen = seen | atom;
            atoms.push(atom);
        }
        atoms
    }

    /// C-sets. Over finitely many distinct sets the Souslin operation only
    /// produces finite unions of finite intersections, so the smallest
    /// σ-algebra closed under it and containing the opens is the Boolean
    /// algebra the opens generate: all unions of atoms.
    pub fn c_sets(&self) -> SetFamily {
        let atoms = self.algebra_atoms();
        let k = atoms.len();
        (0u32..(1 << k))
            .map(|pick| (0..k).filter(|&i| pick >> i & 1 == 1).fold(SubsetMask::EMPTY, |acc, i| acc | atoms[i]))
            .collect()
    }

    pub fn is_c_set(&self, a: SubsetMask) -> bool {
        a.fits(self.n) && self.algebra_atoms().iter().all(|&atom| atom.is_subset_of(a) || !atom.meets(a))
    }

    /// Whether `self` has a neighbourhood basis whose members satisfy `pred`.
    ///
    /// Any neighbourhood basis contains every `U_x`: a neighbourhood `A` of
    /// `x` with `A ⊆ U_x` has `x ∈ int(A)`, so `U_x ⊆ int(A) ⊆ A`. And the
    /// `U_x` themselves form a basis. So the test reduces to the `U_x`.
    pub fn has_nbhd_basis_with<P: Fn(SubsetMask) -> bool>(&self, pred: P) -> bool {
        self.min_nbhd.iter().all(|&u| pred(u))
    }
}

/// Smallest topology containing every topology in `ts`.
pub fn join(ts: &[Topology]) -> Result<Topology> {
    let first = ts.first().ok_or(Error::EmptyList)?;
    let n = first.n;
    let mut min_nbhd = first.min_nbhd.clone();
    for t in &ts[1..] {
        if t.n != n {
            return Err(Error::MixedGroundSizes(n, t.n));
        }
        for (u, v) in min_nbhd.iter_mut().zip(&t.min_nbhd) {
            *u = *u & *v;
        }
    }
    // intersections of transitive tables stay transitive
    Ok(Topology::from_min_nbhds(n, min_nbhd))
}

impl PartialOrd for Topology {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Catalog order: ground size, then lexicographic on the opens list.
impl Ord for Topology {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.opens.as_slice()).cmp(&(other.n, other.opens.as_slice()))
    }
}

impl fmt::Debug for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Topology(n={}, {:?})", self.n, self.opens)
    }
}

/// Specialization preorder `x ≤ y ⟺ x ∈ cl({y})`, stored by rows: `up[x] = {y : x ≤ y}`.
/// For a topology this row is exactly `U_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    n: usize,
    up: Vec<SubsetMask>,
}

impl Preorder {
    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Preorder> {
        let n = matrix.len();
        check_ground(n)?;
        let mut up = Vec::with_capacity(n);
        for row in matrix {
            if row.len() != n {
                return Err(Error::NotAPreorder("matrix is not square"));
            }
            up.push(SubsetMask::from_points((0..n).filter(|&y| row[y])));
        }
        let p = Preorder { n, up };
        p.validate()?;
        Ok(p)
    }

    pub fn from_rows(n: usize, up: Vec<SubsetMask>) -> Result<Preorder> {
        check_ground(n)?;
        if up.len() != n {
            return Err(Error::NotAPreorder("row count differs from ground size"));
        }
        let p = Preorder { n, up };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for x in 0..self.n {
            self.up[x].check_fits(self.n)?;
            if !self.up[x].contains(x) {
                return Err(Error::NotAPreorder("not reflexive"));
            }
            if self.up[x].points().any(|y| !self.up[y].is_subset_of(self.up[x])) {
                return Err(Error::NotAPreorder("not transitive"));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|x| (0..self.n).map(|y| self.le(x, y)).collect()).collect()
    }

    pub fn rows(&self) -> &[SubsetMask] {
        &self.up
    }
}

#[derive(Serialize, Deserialize)]
struct TopologyRecord {
    n: usize,
    opens: Vec<SubsetMask>,
}

impl Serialize for Topology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TopologyRecord { n: self.n, opens: self.opens.as_slice().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Topology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = TopologyRecord::deserialize(d)?;
        make_topology(rec.n, &SetFamily::from(rec.opens), BuildMode::Validate).map_err(serde::de::Error::custom)
    }
}
