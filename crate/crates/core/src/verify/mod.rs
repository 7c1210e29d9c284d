//! Exhaustive checks of the finite instances of the filtration theory.
//!
//! Each property has a universe of instances built from the topology
//! catalog in a fixed scan order (catalog order, then DFS order over chains,
//! then mask order). Instances are checked in parallel and reduced in scan
//! order, so the reported counterexample is always the first one.
//!
//! The statements checked here are proved theorems. A `fail` therefore
//! points at a defect in this crate, not at a mathematical discovery.

pub mod explore;
pub mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::enumeration::{enumerate_topologies, TopologyCatalog};
use crate::equiv::{approx, approx_chain, relation_meet, Partition};
use crate::error::{Error, Result};
use crate::filtration::{
    distance, is_filtration, is_weak_filtration, oplus1, slowest, step, FiltrationSeq, Ordinal, SetCalculus,
};
use crate::topology::{BorelConvention, BorelHierarchy, Regularity, SubsetMask, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyId {
    LOpbI,
    LOpbII,
    PSloI,
    PSloII,
    TSts,
    CTstII,
    LFrthI,
    LFrthII,
    LOnsl,
    LObv,
    LSlalC,
    EDown,
    DiscreteStageTrivializations,
}

/// Which instance space a property scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum UniverseKind {
    Pairs,
    Filtrations,
    WeakFiltrations,
    Chains,
    PartitionPairs,
}

impl PropertyId {
    pub const ALL: [PropertyId; 13] = [
        PropertyId::LOpbI,
        PropertyId::LOpbII,
        PropertyId::PSloI,
        PropertyId::PSloII,
        PropertyId::TSts,
        PropertyId::CTstII,
        PropertyId::LFrthI,
        PropertyId::LFrthII,
        PropertyId::LOnsl,
        PropertyId::LObv,
        PropertyId::LSlalC,
        PropertyId::EDown,
        PropertyId::DiscreteStageTrivializations,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::LOpbI => "L_OPB_I",
            PropertyId::LOpbII => "L_OPB_II",
            PropertyId::PSloI => "P_SLO_I",
            PropertyId::PSloII => "P_SLO_II",
            PropertyId::TSts => "T_STS",
            PropertyId::CTstII => "C_TST_II",
            PropertyId::LFrthI => "L_FRTH_I",
            PropertyId::LFrthII => "L_FRTH_II",
            PropertyId::LOnsl => "L_ONSL",
            PropertyId::LObv => "L_OBV",
            PropertyId::LSlalC => "L_SLAL_C",
            PropertyId::EDown => "E_DOWN",
            PropertyId::DiscreteStageTrivializations => "DISCRETE_STAGE_TRIVIALIZATIONS",
        }
    }

    fn universe_kind(self) -> UniverseKind {
        use PropertyId::*;
        match self {
            LOpbI | PSloI | TSts | CTstII => UniverseKind::Pairs,
            LOpbII | PSloII | LSlalC => UniverseKind::Filtrations,
            LFrthI | LFrthII | DiscreteStageTrivializations => UniverseKind::WeakFiltrations,
            LOnsl | LObv => UniverseKind::Chains,
            EDown => UniverseKind::PartitionPairs,
        }
    }

    /// Largest ground size the property is run at.
    pub fn cap(self) -> usize {
        match self.universe_kind() {
            UniverseKind::Pairs | UniverseKind::PartitionPairs => 4,
            _ => 3,
        }
    }

    /// What is asserted on each instance.
    pub fn statement(self) -> &'static str {
        use PropertyId::*;
        match self {
            LOpbI => "sigma ⊆ (sigma,tau) ⊆ tau",
            LOpbII => "tau_xi ⊆ (tau_xi,tau) ⊆ tau_{xi+1} along every filtration",
            PSloI => "the slowest sequence is a filtration from sigma to tau",
            PSloII => "(sigma,tau)_xi ⊆ tau_xi for every filtration (tau_xi) from sigma to tau",
            TSts => "tau regular, nbhd basis with the Baire property wrt sigma, sigma = (sigma,tau) => sigma = tau",
            CTstII => "tau regular, nbhd basis of C-sets wrt sigma => (sigma,tau)_xi = tau for some xi",
            LFrthI => "alpha-tame F: int_{tau_alpha}(F) is tau-dense in int_tau(F) on weak filtrations",
            LFrthII => "beta-solid => alpha-solid for alpha <= beta on weak filtrations",
            LOnsl => "the empty set is slight; unions of slight sets are slight; fast slight test agrees with the family definition",
            LObv => "solid via relatively open subsets agrees with the family definition",
            LSlalC => "c_xi(A) is tau_xi-closed and A minus c_xi(A) is slight for xi < alpha",
            EDown => "E_0 ⊇ E_1 ⊇ … ⊇ E along the slowest filtration",
            DiscreteStageTrivializations => {
                "conclusions of the stabilization lemmas and theorems on filtrations whose proper stages are discrete"
            }
        }
    }

    pub fn universe_description(self, max_len: usize) -> String {
        match self.universe_kind() {
            UniverseKind::Pairs => "all ⊆-comparable pairs (sigma, tau)".into(),
            UniverseKind::Filtrations => format!("all filtrations with at most {max_len} stages over all pairs"),
            UniverseKind::WeakFiltrations => {
                format!("all weak filtrations with at most {max_len} stages over all pairs")
            }
            UniverseKind::Chains => format!("all ⊆-chains with at most {max_len} stages, every alpha, every subset"),
            UniverseKind::PartitionPairs => "all partitions × slowest filtrations of all pairs".into(),
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL.iter().copied().find(|p| p.as_str() == s).ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

impl Serialize for PropertyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PropertyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Longest chain (number of stages) in chain-based universes.
    pub max_len: usize,
    pub convention: BorelConvention,
    pub regularity: Regularity,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { max_len: 3, convention: BorelConvention::Difference, regularity: Regularity::Pure }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Pair { sigma: Topology, tau: Topology },
    Sequence { seq: FiltrationSeq },
    PartitionPair { partition: Partition, sigma: Topology, tau: Topology },
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceOutcome {
    Pass,
    /// Hypotheses not met; nothing to check.
    Vacuous,
    Fail(Value),
}

/// Everything needed to re-run a failing instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: PropertyId,
    pub config: CheckConfig,
    pub instance: Instance,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail { counterexample: Box<Counterexample>, note: String },
    Trivialized { note: String },
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property_id: PropertyId,
    pub n: usize,
    pub universe: String,
    pub instances_checked: usize,
    /// Instances whose hypotheses held, so the conclusion was actually tested.
    pub hypothesis_met: usize,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock time; left out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

const FAIL_NOTE: &str = "the checked statement is a theorem; this counterexample indicates an implementation defect";

/// Result of a parallel scan, reduced in scan order.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSummary {
    pub checked: usize,
    pub hypothesis_met: usize,
    /// Index and detail of the first failing instance.
    pub first_failure: Option<(usize, Value)>,
}

pub fn scan<I, F>(instances: &[I], check: F) -> Result<ScanSummary>
where
    I: Sync,
    F: Fn(&I) -> Result<InstanceOutcome> + Sync,
{
    let outcomes = instances.par_iter().map(&check).collect::<Result<Vec<_>>>()?;
    let mut summary = ScanSummary { checked: outcomes.len(), hypothesis_met: 0, first_failure: None };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            InstanceOutcome::Pass => summary.hypothesis_met += 1,
            InstanceOutcome::Vacuous => {}
            InstanceOutcome::Fail(detail) => {
                summary.hypothesis_met += 1;
                if summary.first_failure.is_none() {
                    summary.first_failure = Some((i, detail));
                }
            }
        }
    }
    Ok(summary)
}

fn pairs(cat: &TopologyCatalog) -> Vec<Instance> {
    cat.pairs().map(|(s, t)| Instance::Pair { sigma: s.clone(), tau: t.clone() }).collect()
}

fn sequences<F>(cat: &TopologyCatalog, gen: F) -> Result<Vec<Instance>>
where
    F: Fn(&Topology, &Topology) -> Result<Vec<FiltrationSeq>> + Sync,
{
    let pairs: Vec<(usize, usize)> = cat.pair_indices().collect();
    let nested = pairs.par_iter().map(|&(i, j)| gen(cat.get(i), cat.get(j))).collect::<Result<Vec<_>>>()?;
    Ok(nested.into_iter().flatten().map(|seq| Instance::Sequence { seq }).collect())
}

fn universe(property: PropertyId, cat: &TopologyCatalog, config: &CheckConfig) -> Result<Vec<Instance>> {
    let max_len = config.max_len;
    match property.universe_kind() {
        UniverseKind::Pairs => Ok(pairs(cat)),
        UniverseKind::Filtrations => sequences(cat, |s, t| cat.filtrations(s, t, max_len)),
        UniverseKind::WeakFiltrations => sequences(cat, |s, t| cat.weak_filtrations(s, t, max_len)),
        UniverseKind::Chains => {
            let nested = cat.entries().par_iter().map(|s| cat.chains_from(s, max_len)).collect::<Result<Vec<_>>>()?;
            Ok(nested.into_iter().flatten().map(|seq| Instance::Sequence { seq }).collect())
        }
        UniverseKind::PartitionPairs => {
            let parts = Partition::all(cat.n());
            Ok(cat
                .pairs()
                .flat_map(|(s, t)| {
                    parts.iter().map(move |p| Instance::PartitionPair {
                        partition: p.clone(),
                        sigma: s.clone(),
                        tau: t.clone(),
                    })
                })
                .collect())
        }
    }
}

/// Runs one property exhaustively at ground size `n`.
pub fn check(property: PropertyId, n: usize, config: &CheckConfig) -> Result<VerificationReport> {
    if n > property.cap() {
        return Err(Error::GroundSizeTooLarge { n, cap: property.cap() });
    }
    let cat = enumerate_topologies(n)?;
    check_with_catalog(property, &cat, config)
}

pub fn check_with_catalog(
    property: PropertyId,
    cat: &TopologyCatalog,
    config: &CheckConfig,
) -> Result<VerificationReport> {
    let n = cat.n();
    if n > property.cap() {
        return Err(Error::GroundSizeTooLarge { n, cap: property.cap() });
    }
    let start = Instant::now();
    let instances = universe(property, cat, config)?;
    let summary = scan(&instances, |i| check_instance(property, i, config))?;
    let mut notes = Vec::new();
    if property == PropertyId::TSts {
        let baire = instances.iter().filter(|i| matches!(i, Instance::Pair { tau, .. } if tau.is_baire())).count();
        notes.push(format!(
            "is_baire(tau) held on {baire}/{} pairs (recorded, never used as a filter)",
            instances.len()
        ));
    }
    let outcome = match summary.first_failure {
        Some((idx, detail)) => Outcome::Fail {
            counterexample: Box::new(Counterexample {
                property,
                config: *config,
                instance: instances[idx].clone(),
                detail,
            }),
            note: FAIL_NOTE.into(),
        },
        None if property == PropertyId::DiscreteStageTrivializations => Outcome::Trivialized {
            note: "finite metrizable topologies are discrete, so every stage after a discrete stage equals it; \
                   the conclusions were still evaluated on every instance"
                .into(),
        },
        None => Outcome::Pass,
    };
    Ok(VerificationReport {
        property_id: property,
        n,
        universe: property.universe_description(config.max_len),
        instances_checked: summary.checked,
        hypothesis_met: summary.hypothesis_met,
        outcome,
        notes,
        elapsed: start.elapsed(),
    })
}

/// Runs every property whose cap admits `n`, in registry order.
pub fn check_all(n: usize, config: &CheckConfig) -> Result<Vec<VerificationReport>> {
    let cat = enumerate_topologies(n)?;
    PropertyId::ALL.iter().filter(|p| n <= p.cap()).map(|&p| check_with_catalog(p, &cat, config)).collect()
}

/// Re-evaluates a counterexample's instance.
pub fn replay(cx: &Counterexample) -> Result<InstanceOutcome> {
    check_instance(cx.property, &cx.instance, &cx.config)
}

fn wrong_instance(property: PropertyId, expected: &str) -> Error {
    Error::InvalidInstance { property: property.as_str().into(), reason: format!("expected a {expected} instance") }
}

pub fn check_instance(property: PropertyId, instance: &Instance, config: &CheckConfig) -> Result<InstanceOutcome> {
    use PropertyId::*;
    match (property.universe_kind(), instance) {
        (UniverseKind::Pairs, Instance::Pair { sigma, tau }) => match property {
            LOpbI => check_step_bounds(sigma, tau),
            PSloI => check_slowest_is_filtration(sigma, tau),
            TSts => check_step_fixpoint(sigma, tau, config),
            CTstII => check_reaches_tau(sigma, tau, config),
            _ => unreachable!(),
        },
        (
            UniverseKind::Filtrations | UniverseKind::WeakFiltrations | UniverseKind::Chains,
            Instance::Sequence { seq },
        ) => match property {
            LOpbII => check_step_along_filtration(seq),
            PSloII => check_slowest_is_minimal(seq),
            LSlalC => check_c_xi(seq),
            LFrthI => check_tame_density(seq),
            LFrthII => check_solid_monotone(seq),
            LOnsl => check_slight_basics(seq),
            LObv => check_solid_definition(seq),
            DiscreteStageTrivializations => check_discrete_stages(seq, config),
            _ => unreachable!(),
        },
        (UniverseKind::PartitionPairs, Instance::PartitionPair { partition, sigma, tau }) => {
            check_approx_chain(partition, sigma, tau)
        }
        (UniverseKind::Pairs, _) => Err(wrong_instance(property, "pair")),
        (UniverseKind::PartitionPairs, _) => Err(wrong_instance(property, "partition_pair")),
        _ => Err(wrong_instance(property, "sequence")),
    }
}

fn pass_if(ok: bool, detail: impl FnOnce() -> Value) -> InstanceOutcome {
    if ok {
        InstanceOutcome::Pass
    } else {
        InstanceOutcome::Fail(detail())
    }
}

fn require_sub(sigma: &Topology, tau: &Topology) -> Result<()> {
    if sigma.is_coarser_than(tau) {
        Ok(())
    } else {
        Err(Error::NotSubtopology)
    }
}

fn check_step_bounds(sigma: &Topology, tau: &Topology) -> Result<InstanceOutcome> {
    let s = step(sigma, tau)?;
    Ok(pass_if(sigma.is_coarser_than(&s) && s.is_coarser_than(tau), || json!({ "step": s })))
}

fn check_slowest_is_filtration(sigma: &Topology, tau: &Topology) -> Result<InstanceOutcome> {
    let run = slowest(sigma, tau, usize::MAX)?;
    let verdict = is_filtration(&run.seq);
    Ok(pass_if(verdict.is_pass(), || json!({ "slowest": run.seq, "violation": format!("{verdict:?}") })))
}

fn bp_basis(sigma: &Topology, tau: &Topology) -> bool {
    let bp = sigma.baire_property_sets();
    tau.has_nbhd_basis_with(|u| bp.contains(u))
}

fn c_set_basis(sigma: &Topology, tau: &Topology) -> bool {
    tau.has_nbhd_basis_with(|u| sigma.is_c_set(u))
}

fn check_step_fixpoint(sigma: &Topology, tau: &Topology, config: &CheckConfig) -> Result<InstanceOutcome> {
    require_sub(sigma, tau)?;
    if !(tau.is_regular_with(config.regularity) && bp_basis(sigma, tau)) {
        return Ok(InstanceOutcome::Vacuous);
    }
    let s = step(sigma, tau)?;
    Ok(pass_if(s != *sigma || sigma == tau, || json!({ "step": s })))
}

fn check_reaches_tau(sigma: &Topology, tau: &Topology, config: &CheckConfig) -> Result<InstanceOutcome> {
    require_sub(sigma, tau)?;
    if !(tau.is_regular_with(config.regularity) && c_set_basis(sigma, tau)) {
        return Ok(InstanceOutcome::Vacuous);
    }
    let d = distance(sigma, tau)?;
    Ok(pass_if(d.is_finite(), || json!({ "distance": d })))
}

fn check_step_along_filtration(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    let tau = seq.effective_target();
    for xi in 0..seq.len() {
        let cur = seq.stage(xi);
        let next = seq.stages().get(xi + 1).unwrap_or(&tau);
        let s = step(cur, &tau)?;
        if !(cur.is_coarser_than(&s) && s.is_coarser_than(next)) {
            return Ok(InstanceOutcome::Fail(json!({ "xi": xi, "step": s })));
        }
    }
    Ok(InstanceOutcome::Pass)
}

/// Stage `ξ` of the slowest filtration (padded by its fixpoint) lies below
/// stage `ξ` of `seq`; beyond `seq` the filtration is padded by `τ`, which
/// bounds every slowest stage anyway.
fn check_slowest_is_minimal(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    let tau = seq.effective_target();
    let run = slowest(seq.stage(0), &tau, usize::MAX)?;
    let slow = run.seq.stages();
    for xi in 0..seq.len() {
        let s = slow.get(xi).unwrap_or_else(|| slow.last().expect("non-empty"));
        if !s.is_coarser_than(seq.stage(xi)) {
            return Ok(InstanceOutcome::Fail(json!({ "xi": xi, "slowest_stage": s })));
        }
    }
    Ok(InstanceOutcome::Pass)
}

fn calculi(seq: &FiltrationSeq) -> Result<Vec<SetCalculus<'_>>> {
    (0..seq.len()).map(|a| SetCalculus::new(seq, Ordinal(a))).collect()
}

fn check_tame_density(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    let tau = seq.effective_target();
    for calc in calculi(seq)? {
        let top = seq.stage(calc.alpha().0);
        for f in calc.tame().iter() {
            if !tau.interior(f).is_subset_of(tau.closure(top.interior(f))) {
                return Ok(InstanceOutcome::Fail(json!({ "alpha": calc.alpha(), "tame_set": f })));
            }
        }
    }
    Ok(InstanceOutcome::Pass)
}

fn check_solid_monotone(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    let calcs = calculi(seq)?;
    for beta in 0..calcs.len() {
        for alpha in 0..=beta {
            for a in SubsetMask::all(seq.n()) {
                if calcs[beta].is_solid(a) && !calcs[alpha].is_solid(a) {
                    return Ok(InstanceOutcome::Fail(json!({ "alpha": alpha, "beta": beta, "set": a })));
                }
            }
        }
    }
    Ok(InstanceOutcome::Pass)
}

fn check_slight_basics(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    for calc in calculi(seq)? {
        let alpha = calc.alpha();
        let top = seq.stage(alpha.0);
        let tame = calc.tame().as_slice();
        if !calc.is_slight(SubsetMask::EMPTY) {
            return Ok(InstanceOutcome::Fail(json!({ "alpha": alpha, "reason": "empty set not slight" })));
        }
        let mut slight = Vec::new();
        for a in SubsetMask::all(seq.n()) {
            let raw = oracle::slight_by_families(tame, top, a);
            if raw != calc.is_slight(a) {
                return Ok(InstanceOutcome::Fail(json!({ "alpha": alpha, "set": a, "family_definition": raw })));
            }
            if raw {
                slight.push(a);
            }
        }
        for &a in &slight {
            for &b in &slight {
                if !oracle::slight_by_families(tame, top, a | b) {
                    return Ok(InstanceOutcome::Fail(
                        json!({ "alpha": alpha, "reason": "union of slight sets not slight", "sets": [a, b] }),
                    ));
                }
            }
        }
    }
    Ok(InstanceOutcome::Pass)
}

fn check_solid_definition(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    for calc in calculi(seq)? {
        let top = seq.stage(calc.alpha().0);
        for a in SubsetMask::all(seq.n()) {
            let raw = oracle::solid_by_families(calc.tame().as_slice(), top, a);
            if raw != calc.is_solid(a) {
                return Ok(InstanceOutcome::Fail(json!({ "alpha": calc.alpha(), "set": a, "family_definition": raw })));
            }
        }
    }
    Ok(InstanceOutcome::Pass)
}

fn check_c_xi(seq: &FiltrationSeq) -> Result<InstanceOutcome> {
    for calc in calculi(seq)? {
        let alpha = calc.alpha().0;
        for xi in 0..=alpha {
            for a in SubsetMask::all(seq.n()) {
                let c = calc.c_xi(Ordinal(xi), a)?;
                let closed = seq.stage(xi).is_closed(c);
                let remainder_slight = xi == alpha || calc.is_slight(a.minus(c));
                if !(closed && remainder_slight) {
                    return Ok(InstanceOutcome::Fail(json!({
                        "xi": xi, "alpha": alpha, "set": a, "c_xi": c,
                        "closed": closed, "remainder_slight": remainder_slight,
                    })));
                }
            }
        }
    }
    Ok(InstanceOutcome::Pass)
}

fn check_approx_chain(e: &Partition, sigma: &Topology, tau: &Topology) -> Result<InstanceOutcome> {
    let run = slowest(sigma, tau, usize::MAX)?;
    let chain = approx_chain(e, &run.seq)?;
    for (xi, p) in chain.iter().enumerate() {
        if !e.refines(p) {
            return Ok(InstanceOutcome::Fail(json!({ "xi": xi, "reason": "E_xi does not contain E", "approx": p })));
        }
        if let Some(next) = chain.get(xi + 1) {
            if !next.refines(p) {
                return Ok(InstanceOutcome::Fail(
                    json!({ "xi": xi, "reason": "E_{xi+1} not inside E_xi", "approx": next }),
                ));
            }
        }
    }
    Ok(InstanceOutcome::Pass)
}

/// Conclusions of the stabilization results whose hypotheses ask the stages
/// below `α` to be (completely) metrizable. On a finite set those stages are
/// discrete, so every case with `α ≥ 1` has `σ` discrete and the chain is
/// constant; `α = 0` leaves the hypotheses about Borel classes unsatisfiable
/// except where they hold vacuously. Each conclusion is still evaluated.
fn check_discrete_stages(seq: &FiltrationSeq, config: &CheckConfig) -> Result<InstanceOutcome> {
    let n = seq.n();
    let sigma = seq.stage(0);
    let tau = seq.effective_target();
    let borel = BorelHierarchy::new(sigma, config.convention);
    let mut met = false;
    let fail = |what: &str, alpha: usize, extra: Value| {
        Ok(InstanceOutcome::Fail(json!({ "conclusion": what, "alpha": alpha, "detail": extra })))
    };
    for alpha in 0..seq.len() {
        if !seq.stages()[..alpha].iter().all(Topology::is_discrete) {
            continue;
        }
        let top = seq.stage(alpha);

        // cl_{τ_ξ}(B) ∖ A is τ_α-meager for A ∈ Π⁰_{1+ξ}, ξ ≤ α, and α-solid B ⊆ A
        let trunc = seq.truncate(alpha + 1).with_target(None)?;
        if is_weak_filtration(&trunc).is_pass() {
            let calc = SetCalculus::new(&trunc, Ordinal(alpha))?;
            for xi in 0..=alpha {
                for a in SubsetMask::all(n).filter(|&a| borel.in_pi(1 + xi, a)) {
                    for b in a.subsets().filter(|&b| calc.is_solid(b)) {
                        met = true;
                        let rest = seq.stage(xi).closure(b).minus(a);
                        if !top.is_meager(rest) {
                            return fail("closure of solid subset", alpha, json!({ "xi": xi, "a": a, "b": b }));
                        }
                    }
                }
            }
        }

        // τ_α = τ when τ is regular with a nbhd basis in ⋃_{ξ<α} Π⁰_{1+ξ}
        let to_tau = seq.truncate(alpha + 1);
        if is_filtration(&to_tau).is_pass()
            && tau.is_regular_with(config.regularity)
            && top.is_baire()
            && tau.has_nbhd_basis_with(|u| borel.in_pi_below(alpha, u))
        {
            met = true;
            if *top != tau {
                return fail("stage alpha equals tau", alpha, json!({ "stage": top }));
            }
        }

        // cl_{τ_α}(A) ∖ A is relatively τ_α-meager in cl_{τ_α}(A) for (α+1)-solid A ∈ Π⁰_{1+α}
        if alpha + 2 <= seq.len() && top.is_discrete() {
            let trunc2 = seq.truncate(alpha + 2).with_target(None)?;
            if is_filtration(&trunc2).is_pass() {
                let calc = SetCalculus::new(&trunc2, Ordinal(alpha + 1))?;
                for a in SubsetMask::all(n).filter(|&a| borel.in_pi(1 + alpha, a) && calc.is_solid(a)) {
                    met = true;
                    let cl = top.closure(a);
                    if !top.is_relatively_meager(cl, cl.minus(a)) {
                        return fail("closure remainder relatively meager", alpha, json!({ "a": a }));
                    }
                }
            }
        }

        // E = ⋂_{ξ<α} E_ξ for E with solid classes in ⋃_{ξ<α} Π⁰_{1+ξ}
        let rho = oplus1(Ordinal(alpha)).0;
        if alpha >= 1 && rho <= seq.len() {
            let trunc3 = seq.truncate(rho).with_target(None)?;
            if is_filtration(&trunc3).is_pass() {
                let calcs = calculi(&trunc3)?;
                for e in Partition::all(n) {
                    let classes = e.blocks();
                    let hyp =
                        classes.iter().all(|&c| borel.in_pi_below(alpha, c) && calcs.iter().all(|k| k.is_solid(c)));
                    if !hyp {
                        continue;
                    }
                    met = true;
                    let approxes = (0..alpha).map(|xi| approx(&e, seq.stage(xi))).collect::<Result<Vec<_>>>()?;
                    if relation_meet(&approxes)? != e {
                        return fail("E is the meet of its approximations", alpha, json!({ "partition": e }));
                    }
                }
            }
        }
    }
    Ok(if met { InstanceOutcome::Pass } else { InstanceOutcome::Vacuous })
}

impl VerificationReport {
    pub fn text_line(&self) -> String {
        let status = match &self.outcome {
            Outcome::Pass => "pass".to_string(),
            Outcome::Fail { .. } => "FAIL".to_string(),
            Outcome::Trivialized { .. } => "trivialized".to_string(),
        };
        format!(
            "{:<32} n={} {:<12} instances={} hypotheses_met={} ({:.2?})",
            self.property_id.as_str(),
            self.n,
            status,
            self.instances_checked,
            self.hypothesis_met,
            self.elapsed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names_round_trip() {
        for p in PropertyId::ALL {
            assert_eq!(p.as_str().parse::<PropertyId>().unwrap(), p);
        }
        assert!(matches!("NOPE".parse::<PropertyId>(), Err(Error::UnknownProperty(_))));
    }

    #[test]
    fn scan_reports_first_failure_in_order() {
        let xs: Vec<u32> = (0..1000).collect();
        let summary = scan(&xs, |&x| {
            Ok(match x {
                700 | 105 => InstanceOutcome::Fail(json!(x)),
                x if x % 2 == 0 => InstanceOutcome::Vacuous,
                _ => InstanceOutcome::Pass,
            })
        })
        .unwrap();
        assert_eq!(summary.checked, 1000);
        assert_eq!(summary.first_failure, Some((105, json!(105))));
        // 500 odd passes plus the even failure at 700
        assert_eq!(summary.hypothesis_met, 501);
    }

    #[test]
    fn examples() {
        let cfg = CheckConfig::default();
        let r = check(PropertyId::LOpbI, 2, &cfg).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.instances_checked, 9);
        let r = check(PropertyId::TSts, 2, &cfg).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        let r = check(PropertyId::EDown, 1, &cfg).unwrap();
        assert_eq!((r.outcome, r.instances_checked), (Outcome::Pass, 1));
    }

    #[test]
    fn t_sts_filter_excludes_indiscrete_to_discrete() {
        let inst = Instance::Pair { sigma: Topology::indiscrete(2), tau: Topology::discrete(2) };
        assert_eq!(check_instance(PropertyId::TSts, &inst, &CheckConfig::default()).unwrap(), InstanceOutcome::Vacuous);
        assert_eq!(
            check_instance(PropertyId::CTstII, &inst, &CheckConfig::default()).unwrap(),
            InstanceOutcome::Vacuous
        );
    }

    #[test]
    fn caps_and_instance_kinds() {
        let cfg = CheckConfig::default();
        assert!(matches!(check(PropertyId::LFrthI, 4, &cfg), Err(Error::GroundSizeTooLarge { n: 4, cap: 3 })));
        let pair = Instance::Pair { sigma: Topology::discrete(1), tau: Topology::discrete(1) };
        assert!(matches!(check_instance(PropertyId::LObv, &pair, &cfg), Err(Error::InvalidInstance { .. })));
    }

    #[test]
    fn replay_reproduces_a_failing_instance() {
        // a non-filtration fed straight to the minimality check fails it
        let s = Topology::sierpinski();
        let d2 = Topology::discrete(2);
        let seq = FiltrationSeq::new(vec![s.clone(), s.clone()], Some(d2)).unwrap();
        let inst = Instance::Sequence { seq };
        let cfg = CheckConfig::default();
        let out = check_instance(PropertyId::PSloII, &inst, &cfg).unwrap();
        let InstanceOutcome::Fail(detail) = out.clone() else { panic!("expected failure") };
        let cx = Counterexample { property: PropertyId::PSloII, config: cfg, instance: inst, detail };
        let js = serde_json::to_string(&cx).unwrap();
        let back: Counterexample = serde_json::from_str(&js).unwrap();
        assert_eq!(back, cx);
        assert_eq!(replay(&back).unwrap(), out);
    }
}
