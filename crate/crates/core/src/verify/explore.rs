//! Witness searches showing where hypotheses of the checked statements bite.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::enumeration::{enumerate_topologies, TopologyCatalog};
use crate::error::{Error, Result};
use crate::filtration::{distance, is_filtration, is_weak_filtration, Distance, FiltrationSeq, Ordinal, SetCalculus};
use crate::topology::{Regularity, SubsetMask, Topology};

pub const EXPLORE_CAP: usize = 4;
/// Chains scanned by the filtration-based queries have at most this many stages.
pub const EXPLORE_MAX_LEN: usize = 3;
/// SOLID_GAP keeps this many witnesses; the count covers all of them.
pub const SOLID_GAP_WITNESSES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    UnreachedPairs,
    WeakNotFull,
    SolidGap,
}

impl Query {
    pub const ALL: [Query; 3] = [Query::UnreachedPairs, Query::WeakNotFull, Query::SolidGap];

    pub fn as_str(self) -> &'static str {
        match self {
            Query::UnreachedPairs => "UNREACHED_PAIRS",
            Query::WeakNotFull => "WEAK_NOT_FULL",
            Query::SolidGap => "SOLID_GAP",
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Query {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Query::ALL.iter().copied().find(|q| q.as_str() == s).ok_or_else(|| Error::UnknownQuery(s.to_string()))
    }
}

impl Serialize for Query {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Query {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub query: Query,
    pub n: usize,
    /// Total number of witnesses found (WEAK_NOT_FULL stops at the first).
    pub count: usize,
    pub witnesses: Vec<Value>,
    /// True when `witnesses` holds fewer entries than `count`.
    pub truncated: bool,
}

pub fn explore(query: Query, n: usize) -> Result<ExploreReport> {
    if n > EXPLORE_CAP {
        return Err(Error::GroundSizeTooLarge { n, cap: EXPLORE_CAP });
    }
    let cat = enumerate_topologies(n)?;
    let (count, witnesses) = match query {
        Query::UnreachedPairs => {
            let w = unreached_pairs(&cat)?;
            (w.len(), w)
        }
        Query::WeakNotFull => {
            let w: Vec<Value> = weak_not_full(&cat)?.into_iter().map(|s| json!(s)).collect();
            (w.len(), w)
        }
        Query::SolidGap => solid_gap(&cat)?,
    };
    Ok(ExploreReport { query, n, count, truncated: witnesses.len() < count, witnesses })
}

/// Hypotheses of the stabilization results that fail for `(σ, τ)`.
pub fn failed_hypotheses(sigma: &Topology, tau: &Topology) -> Vec<&'static str> {
    let mut out = Vec::new();
    if !tau.is_regular_with(Regularity::Pure) {
        out.push("tau not regular");
    }
    let bp = sigma.baire_property_sets();
    if !tau.has_nbhd_basis_with(|u| bp.contains(u)) {
        out.push("BP-basis hypothesis fails");
    }
    if !tau.has_nbhd_basis_with(|u| sigma.is_c_set(u)) {
        out.push("C-set-basis hypothesis fails");
    }
    out
}

fn unreached_pairs(cat: &TopologyCatalog) -> Result<Vec<Value>> {
    let mut out = Vec::new();
    for (sigma, tau) in cat.pairs() {
        if distance(sigma, tau)? == Distance::Unreachable {
            out.push(json!({ "sigma": sigma, "tau": tau, "failed_hypotheses": failed_hypotheses(sigma, tau) }));
        }
    }
    Ok(out)
}

/// First weak filtration (to its pair's `τ`, at most three stages) that is not a filtration.
pub fn weak_not_full(cat: &TopologyCatalog) -> Result<Option<FiltrationSeq>> {
    for (sigma, tau) in cat.pairs() {
        let weak = cat.chains_uncapped(sigma, tau, EXPLORE_MAX_LEN, |s| is_weak_filtration(s).is_pass())?;
        if let Some(seq) = weak.into_iter().find(|s| !is_filtration(s).is_pass()) {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}

fn solid_gap(cat: &TopologyCatalog) -> Result<(usize, Vec<Value>)> {
    let mut count = 0;
    let mut witnesses = Vec::new();
    for (sigma, tau) in cat.pairs() {
        for seq in cat.chains_uncapped(sigma, tau, EXPLORE_MAX_LEN, |s| is_filtration(s).is_pass())? {
            let calcs = (0..seq.len()).map(|a| SetCalculus::new(&seq, Ordinal(a))).collect::<Result<Vec<_>>>()?;
            for alpha in 0..calcs.len().saturating_sub(1) {
                for a in SubsetMask::all(seq.n()) {
                    if calcs[alpha].is_solid(a) && !calcs[alpha + 1].is_solid(a) {
                        count += 1;
                        if witnesses.len() < SOLID_GAP_WITNESSES {
                            witnesses.push(json!({ "filtration": seq, "alpha": alpha, "set": a }));
                        }
                    }
                }
            }
        }
    }
    Ok((count, witnesses))
}
