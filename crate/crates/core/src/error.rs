use std::path::PathBuf;

use thiserror::Error;

use crate::topology::SubsetMask;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("family is not a topology: {reason} (witness {witness})")]
    NotATopology { witness: SubsetMask, reason: &'static str },
    #[error("mask {mask} does not fit a ground set of {n} points")]
    MaskOutOfRange { mask: u32, n: usize },
    #[error("ground sizes differ: {0} vs {1}")]
    MixedGroundSizes(usize, usize),
    #[error("empty list")]
    EmptyList,
    #[error("relation is not a preorder: {0}")]
    NotAPreorder(&'static str),
    #[error("first topology is not contained in the second")]
    NotSubtopology,
    #[error("stages do not form an increasing chain (stage {0} not contained in its successor)")]
    NotAChain(usize),
    #[error("ordinal {alpha} out of range for a sequence with {stages} stages")]
    AlphaOutOfRange { alpha: usize, stages: usize },
    #[error("ground size {n} exceeds the cap {cap} for this operation")]
    GroundSizeTooLarge { n: usize, cap: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("corrupt cache file {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("instance does not fit property {property}: {reason}")]
    InvalidInstance { property: String, reason: String },
    #[error("unknown query `{0}`")]
    UnknownQuery(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
