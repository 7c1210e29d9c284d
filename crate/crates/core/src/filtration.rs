//! Filtrations between two topologies and the set calculi built on them.
//!
//! Ordinals are plain naturals: a strictly increasing chain of topologies on
//! `n` points has fewer than `2^n` links, so every recursion below stops at a
//! finite stage and the limit clauses never fire.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{join, SetFamily, SubsetMask, Topology};

/// Tame, slight and solid computations are exponential in the ground size.
pub const TAME_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordinal(pub usize);

impl Ordinal {
    /// `α ⊕ 1 = sup{ξ + 2 | ξ < α}`: 0 stays 0, a successor `k` goes to `k + 1`.
    pub fn oplus1(self) -> Ordinal {
        match self.0 {
            0 => Ordinal(0),
            k => Ordinal(k + 1),
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn oplus1(a: Ordinal) -> Ordinal {
    a.oplus1()
}

/// A finite chain of topologies `τ_0 ⊆ … ⊆ τ_k` with an optional target `τ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiltrationSeq {
    n: usize,
    stages: Vec<Topology>,
    target: Option<Topology>,
}

impl FiltrationSeq {
    /// Checks non-emptiness and ground sizes; the chain condition is reported
    /// by [`FiltrationSeq::chain_break`] and the validators.
    pub fn new(stages: Vec<Topology>, target: Option<Topology>) -> Result<FiltrationSeq> {
        let n = stages.first().ok_or(Error::EmptyList)?.n();
        for t in stages.iter().chain(target.iter()) {
            if t.n() != n {
                return Err(Error::MixedGroundSizes(n, t.n()));
            }
        }
        Ok(FiltrationSeq { n, stages, target })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> &[Topology] {
        &self.stages
    }

    pub fn stage(&self, xi: usize) -> &Topology {
        &self.stages[xi]
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn target(&self) -> Option<&Topology> {
        self.target.as_ref()
    }

    /// The explicit target, or the join of the stages when absent.
    pub fn effective_target(&self) -> Topology {
        match &self.target {
            Some(t) => t.clone(),
            None => join(&self.stages).expect("stages are non-empty and share a ground size"),
        }
    }

    /// First index `i` with `τ_i ⊄ τ_{i+1}` (index `len - 1` means the last stage
    /// is not below the target).
    pub fn chain_break(&self) -> Option<usize> {
        let target = self.effective_target();
        let next = self.stages.iter().skip(1).chain(std::iter::once(&target));
        self.stages.iter().zip(next).position(|(a, b)| !a.is_coarser_than(b))
    }

    fn require_chain(&self) -> Result<()> {
        match self.chain_break() {
            Some(i) => Err(Error::NotAChain(i)),
            None => Ok(()),
        }
    }

    /// The first `len` stages, keeping the target.
    pub fn truncate(&self, len: usize) -> FiltrationSeq {
        assert!(len >= 1 && len <= self.stages.len());
        FiltrationSeq { n: self.n, stages: self.stages[..len].to_vec(), target: self.target.clone() }
    }

    pub fn with_target(&self, target: Option<Topology>) -> Result<FiltrationSeq> {
        FiltrationSeq::new(self.stages.clone(), target)
    }
}

impl fmt::Debug for FiltrationSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiltrationSeq")
            .field("stages", &self.stages.iter().map(|t| t.opens()).collect::<Vec<_>>())
            .field("target", &self.target.as_ref().map(|t| t.opens()))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct FiltrationRecord {
    n: usize,
    stages: Vec<SetFamily>,
    target: Option<SetFamily>,
}

impl Serialize for FiltrationSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FiltrationRecord {
            n: self.n,
            stages: self.stages.iter().map(|t| t.opens().clone()).collect(),
            target: self.target.as_ref().map(|t| t.opens().clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiltrationSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::topology::{make_topology, BuildMode};
        use serde::de::Error as _;
        let rec = FiltrationRecord::deserialize(d)?;
        let build = |opens: &SetFamily| make_topology(rec.n, opens, BuildMode::Validate).map_err(D::Error::custom);
        let stages = rec.stages.iter().map(build).collect::<std::result::Result<Vec<_>, _>>()?;
        let target = rec.target.as_ref().map(build).transpose()?;
        FiltrationSeq::new(stages, target).map_err(D::Error::custom)
    }
}

/// The topology `(σ, τ)`: all unions of `U ∩ int_τ(F)` with `U` σ-open and `F` σ-closed.
///
/// Those sets are closed under finite intersection because
/// `int_τ(F_1 ∩ F_2) = int_τ(F_1) ∩ int_τ(F_2)`, and `U = U ∩ int_τ(X)`,
/// so their unions are exactly the topology they generate.
pub fn step(sigma: &Topology, tau: &Topology) -> Result<Topology> {
    if !sigma.is_coarser_than(tau) {
        return Err(Error::NotSubtopology);
    }
    let interiors = sigma.closed_sets().iter().map(|f| tau.interior(f)).collect::<Vec<_>>();
    Ok(Topology::generated_by(sigma.n(), sigma.opens().iter().chain(interiors)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlowestStatus {
    /// The iteration reached `τ`.
    Reached,
    /// The iteration stopped at a fixpoint strictly below `τ`.
    FixpointBelow,
    /// Stage budget exhausted before a fixpoint.
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slowest {
    /// Stages `(σ,τ)_0, (σ,τ)_1, …` with target `τ`, without the repeated fixpoint.
    pub seq: FiltrationSeq,
    pub status: SlowestStatus,
}

/// Iterates `(σ,τ)_{ξ+1} = ((σ,τ)_ξ, τ)` from `(σ,τ)_0 = σ`.
pub fn slowest(sigma: &Topology, tau: &Topology, max_stages: usize) -> Result<Slowest> {
    if !sigma.is_coarser_than(tau) {
        return Err(Error::NotSubtopology);
    }
    let mut stages = vec![sigma.clone()];
    let status = loop {
        let cur = stages.last().expect("non-empty");
        if cur == tau {
            break SlowestStatus::Reached;
        }
        let next = step(cur, tau)?;
        if &next == cur {
            break SlowestStatus::FixpointBelow;
        }
        if stages.len() >= max_stages.max(1) {
            break SlowestStatus::Budget;
        }
        // every link adds an open set, so no limit stage is ever needed
        assert!(stages.len() < 1 << sigma.n(), "strictly increasing chain longer than 2^n");
        stages.push(next);
    };
    let seq = FiltrationSeq::new(stages, Some(tau.clone()))?;
    Ok(Slowest { seq, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Distance {
    Finite(Ordinal),
    Unreachable,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(o) => write!(f, "{o}"),
            Distance::Unreachable => write!(f, "unreachable"),
        }
    }
}

/// Least `ξ` with `(σ,τ)_ξ = τ`.
pub fn distance(sigma: &Topology, tau: &Topology) -> Result<Distance> {
    let run = slowest(sigma, tau, usize::MAX)?;
    Ok(match run.status {
        SlowestStatus::Reached => Distance::Finite(Ordinal(run.seq.len() - 1)),
        SlowestStatus::FixpointBelow => Distance::Unreachable,
        SlowestStatus::Budget => unreachable!("unbounded budget"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Violation {
    /// `τ_index ⊄ τ_{index+1}` (or the last stage is not below the target).
    Chain { index: usize },
    /// `F` is closed at some stage below `alpha` but `τ_alpha` gets its interior wrong.
    Interior { alpha: usize, set: SubsetMask },
}

/// Outcome of a filtration check; violations come first in (α, F) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violation(Violation),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

fn check_interiors<P>(seq: &FiltrationSeq, ok: P) -> Verdict
where
    P: Fn(&Topology, &Topology, SubsetMask) -> bool,
{
    if let Some(index) = seq.chain_break() {
        return Verdict::Violation(Violation::Chain { index });
    }
    let target = seq.effective_target();
    let mut earlier_closed: Vec<bool> = vec![false; 1 << seq.n];
    for (alpha, stage) in seq.stages.iter().enumerate() {
        let closed = SetFamily::from_table(&earlier_closed);
        if let Some(set) = closed.iter().find(|&f| !ok(stage, &target, f)) {
            return Verdict::Violation(Violation::Interior { alpha, set });
        }
        for f in stage.closed_sets().iter() {
            earlier_closed[f.0 as usize] = true;
        }
    }
    Verdict::Pass
}

/// Chain condition plus `int_{τ_α}(F) = int_τ(F)` whenever `F` is `τ_ξ`-closed for some `ξ < α`.
/// Without a target the sequence is checked as a filtration from `σ` to the join of its stages.
pub fn is_filtration(seq: &FiltrationSeq) -> Verdict {
    check_interiors(seq, |stage, target, f| stage.interior(f) == target.interior(f))
}

/// As [`is_filtration`] with equality relaxed to `int_{τ_α}(F)` being τ-dense in `int_τ(F)`.
pub fn is_weak_filtration(seq: &FiltrationSeq) -> Verdict {
    check_interiors(seq, |stage, target, f| target.interior(f).is_subset_of(target.closure(stage.interior(f))))
}

/// A `τ_ξ`-discrete family of nonempty `τ_ξ`-open sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscreteFamily {
    pub xi: usize,
    pub members: SetFamily,
}

/// Every point has a neighbourhood meeting at most one member. With minimal
/// neighbourhoods, `U_x` meets `V` iff `x ∈ cl(V)`, so this says the closures
/// of the members are pairwise disjoint.
pub fn is_discrete_family(t: &Topology, members: &SetFamily) -> bool {
    let mut covered = SubsetMask::EMPTY;
    for v in members.iter() {
        if !t.is_open(v) {
            return false;
        }
        let c = t.closure(v);
        if c.meets(covered) {
            return false;
        }
        covered = covered | c;
    }
    true
}

/// All non-empty discrete families of nonempty opens of `t`, in DFS order over ascending opens.
pub fn discrete_families(t: &Topology) -> Vec<SetFamily> {
    fn go(
        opens: &[(SubsetMask, SubsetMask)],
        start: usize,
        covered: SubsetMask,
        cur: &mut Vec<SubsetMask>,
        out: &mut Vec<SetFamily>,
    ) {
        for i in start..opens.len() {
            let (v, c) = opens[i];
            if c.meets(covered) {
                continue;
            }
            cur.push(v);
            out.push(cur.iter().copied().collect());
            go(opens, i + 1, covered | c, cur, out);
            cur.pop();
        }
    }
    let opens: Vec<(SubsetMask, SubsetMask)> =
        t.opens().iter().filter(|v| !v.is_empty()).map(|v| (v, t.closure(v))).collect();
    let mut out = Vec::new();
    go(&opens, 0, SubsetMask::EMPTY, &mut Vec::new(), &mut out);
    out
}

pub fn discrete_families_at(seq: &FiltrationSeq, xi: usize) -> Vec<DiscreteFamily> {
    discrete_families(seq.stage(xi)).into_iter().map(|members| DiscreteFamily { xi, members }).collect()
}

fn check_tame_cap(seq: &FiltrationSeq) -> Result<()> {
    if seq.n > TAME_CAP {
        return Err(Error::GroundSizeTooLarge { n: seq.n, cap: TAME_CAP });
    }
    Ok(())
}

/// α-tame sets: the least family containing every `τ_ξ`-closed set (`ξ < α`)
/// and closed under patching `⋃_{U∈𝒰} (F^U ∩ U)` along `τ_ξ`-discrete families.
pub fn tame_sets(seq: &FiltrationSeq, alpha: Ordinal) -> Result<SetFamily> {
    check_tame_cap(seq)?;
    seq.require_chain()?;
    let alpha = alpha.0;
    if alpha > seq.len() {
        return Err(Error::AlphaOutOfRange { alpha, stages: seq.len() });
    }
    let size = 1usize << seq.n;
    let mut member = vec![false; size];
    let mut list: Vec<SubsetMask> = Vec::new();
    let insert = |a: SubsetMask, member: &mut Vec<bool>, list: &mut Vec<SubsetMask>| {
        if !member[a.0 as usize] {
            member[a.0 as usize] = true;
            list.push(a);
            true
        } else {
            false
        }
    };
    for t in &seq.stages[..alpha] {
        for f in t.closed_sets().iter() {
            insert(f, &mut member, &mut list);
        }
    }
    let mut families: Vec<SetFamily> = seq.stages[..alpha].iter().flat_map(discrete_families).collect();
    families.sort();
    families.dedup();

    // The members of a family are disjoint, so the distinct patches number at
    // most 2^n: for each member collect the distinct traces F ∩ U, then take
    // one trace per member.
    let mut seen_piece = vec![false; size];
    loop {
        let mut changed = false;
        for fam in &families {
            let pieces: Vec<Vec<SubsetMask>> = fam
                .iter()
                .map(|u| {
                    let mut ps = Vec::new();
                    for &f in &list {
                        let p = f & u;
                        if !seen_piece[p.0 as usize] {
                            seen_piece[p.0 as usize] = true;
                            ps.push(p);
                        }
                    }
                    for &p in &ps {
                        seen_piece[p.0 as usize] = false;
                    }
                    ps
                })
                .collect();
            let mut acc = vec![SubsetMask::EMPTY];
            for ps in &pieces {
                acc = acc.iter().flat_map(|&a| ps.iter().map(move |&p| a | p)).collect();
            }
            for a in acc {
                changed |= insert(a, &mut member, &mut list);
            }
        }
        if !changed {
            break;
        }
    }
    Ok(SetFamily::from_table(&member))
}

/// Tame family and slight cover for one `(seq, α)`, computed once and queried many times.
#[derive(Clone, Debug)]
pub struct SetCalculus<'a> {
    seq: &'a FiltrationSeq,
    alpha: usize,
    tame: SetFamily,
    slight_cover: SubsetMask,
}

impl<'a> SetCalculus<'a> {
    pub fn new(seq: &'a FiltrationSeq, alpha: Ordinal) -> Result<SetCalculus<'a>> {
        if alpha.0 >= seq.len() {
            return Err(Error::AlphaOutOfRange { alpha: alpha.0, stages: seq.len() });
        }
        let tame = tame_sets(seq, alpha)?;
        let top = seq.stage(alpha.0);
        // Slight sets are closed under finite unions, and a finite family of
        // tame sets is all a finite space ever needs, so A is slight iff it lies
        // inside the union of all tame sets with empty τ_α-interior.
        let slight_cover =
            tame.iter().filter(|&f| top.interior(f).is_empty()).fold(SubsetMask::EMPTY, |acc, f| acc | f);
        Ok(SetCalculus { seq, alpha: alpha.0, tame, slight_cover })
    }

    pub fn alpha(&self) -> Ordinal {
        Ordinal(self.alpha)
    }

    pub fn tame(&self) -> &SetFamily {
        &self.tame
    }

    /// Union of the tame sets with empty `τ_α`-interior.
    pub fn slight_cover(&self) -> SubsetMask {
        self.slight_cover
    }

    pub fn is_slight(&self, a: SubsetMask) -> bool {
        a.is_subset_of(self.slight_cover)
    }

    /// No non-empty relatively `τ_α`-open subset of `a` is slight.
    pub fn is_solid(&self, a: SubsetMask) -> bool {
        self.seq.stage(self.alpha).opens().iter().map(|v| v & a).all(|piece| piece.is_empty() || !self.is_slight(piece))
    }

    /// `X ∖ ⋃{U τ_ξ-open : A ∩ U slight}`.
    pub fn c_xi(&self, xi: Ordinal, a: SubsetMask) -> Result<SubsetMask> {
        if xi.0 > self.alpha {
            return Err(Error::AlphaOutOfRange { alpha: xi.0, stages: self.alpha + 1 });
        }
        let t = self.seq.stage(xi.0);
        let removed = t.opens().iter().filter(|&u| self.is_slight(a & u)).fold(SubsetMask::EMPTY, |acc, u| acc | u);
        Ok(removed.complement(self.seq.n))
    }
}

pub fn is_slight(seq: &FiltrationSeq, alpha: Ordinal, a: SubsetMask) -> Result<bool> {
    a.check_fits(seq.n)?;
    Ok(SetCalculus::new(seq, alpha)?.is_slight(a))
}

pub fn is_solid(seq: &FiltrationSeq, alpha: Ordinal, a: SubsetMask) -> Result<bool> {
    a.check_fits(seq.n)?;
    Ok(SetCalculus::new(seq, alpha)?.is_solid(a))
}

pub fn c_xi(seq: &FiltrationSeq, xi: Ordinal, alpha: Ordinal, a: SubsetMask) -> Result<SubsetMask> {
    a.check_fits(seq.n)?;
    SetCalculus::new(seq, alpha)?.c_xi(xi, a)
}
