//! Selection of summarizing nodes from a built trie.
//!
//! The walk visits each node in order (node, then left branch, then
//! right branch) and applies four gates:
//!
//! 1. a leaf is always emitted as its own `/32`;
//! 2. a node whose mask length is at or below the minimum subnet mask
//!    denotes too large a subnet: descend;
//! 3. if the mask distance to any child exceeds the distance
//!    threshold, summarizing here would claim too many vacant
//!    addresses: descend;
//! 4. if either child's density falls below the density threshold, one
//!    branch is too sparse: descend.
//!
//! Otherwise the node's prefix is emitted and its subtree is pruned.
//! Threshold pairs come from a four-step `granularity` table; explicit
//! overrides are accepted for both knobs.

use crate::addr::{Prefix, MAX_MASK};
use crate::trie::{PatriciaTree, TrieNode};

use thiserror::Error;

/// Threshold table indexed by granularity: (distance bits, density).
const GRANULARITY_TABLE: [(u8, f64); 4] = [(4, 1e-5), (8, 1e-6), (12, 1e-7), (16, 1e-8)];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("granularity {0} out of range 0-3")]
    Granularity(u8),
    #[error("minimum subnet mask {0} out of range 0-32")]
    MinSubnetMask(u8),
    #[error("distance threshold {0} out of range 0-32")]
    DistanceThreshold(u8),
    #[error("density threshold {0} not in (0, 1]")]
    DensityThreshold(f64),
}

/// Returns the threshold pair for a granularity step: 0 is the finest
/// (least compressed) setting and 3 the coarsest.
pub fn thresholds_for(granularity: u8) -> Result<(u8, f64), ConfigError> {
    GRANULARITY_TABLE
        .get(usize::from(granularity))
        .copied()
        .ok_or(ConfigError::Granularity(granularity))
}

/// Linear fit of the distance column of the granularity table,
/// `4x + 4`. Documentation only: runtime thresholds always come from
/// the table.
pub fn distance_fit(granularity: f64) -> f64 {
    4.0 * granularity + 4.0
}

/// Exponential fit of the density column, `1e-5 * e^(-2.303 x)`.
/// Matches the table to within 0.2% at integer steps, not exactly.
pub fn density_fit(granularity: f64) -> f64 {
    1e-5 * (-2.303 * granularity).exp()
}

/// Summarization settings: the mask floor plus the two thresholds,
/// normally derived from a granularity step.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryConfig {
    granularity: Option<u8>,
    min_subnet_mask: u8,
    distance_threshold: u8,
    density_threshold: f64,
}

impl SummaryConfig {
    /// Standard path: thresholds looked up from the granularity table.
    pub fn from_granularity(granularity: u8, min_subnet_mask: u8) -> Result<Self, ConfigError> {
        let (distance_threshold, density_threshold) = thresholds_for(granularity)?;
        if min_subnet_mask > MAX_MASK {
            return Err(ConfigError::MinSubnetMask(min_subnet_mask));
        }
        Ok(SummaryConfig {
            granularity: Some(granularity),
            min_subnet_mask,
            distance_threshold,
            density_threshold,
        })
    }

    /// Expert path: both thresholds given explicitly.
    pub fn from_thresholds(
        distance_threshold: u8,
        density_threshold: f64,
        min_subnet_mask: u8,
    ) -> Result<Self, ConfigError> {
        if min_subnet_mask > MAX_MASK {
            return Err(ConfigError::MinSubnetMask(min_subnet_mask));
        }
        if distance_threshold > MAX_MASK {
            return Err(ConfigError::DistanceThreshold(distance_threshold));
        }
        if !(density_threshold > 0.0 && density_threshold <= 1.0) {
            return Err(ConfigError::DensityThreshold(density_threshold));
        }
        Ok(SummaryConfig {
            granularity: None,
            min_subnet_mask,
            distance_threshold,
            density_threshold,
        })
    }

    /// The granularity step, when the config came from the table.
    pub fn granularity(&self) -> Option<u8> {
        self.granularity
    }

    pub fn min_subnet_mask(&self) -> u8 {
        self.min_subnet_mask
    }

    pub fn distance_threshold(&self) -> u8 {
        self.distance_threshold
    }

    pub fn density_threshold(&self) -> f64 {
        self.density_threshold
    }
}

impl Default for SummaryConfig {
    /// Granularity 1 with the mask floor at /8.
    fn default() -> Self {
        SummaryConfig::from_granularity(1, 8).expect("table row exists")
    }
}

/// Mask distance in bits between a node and one of its direct
/// children. Always at least 1.
pub fn distance(parent: &TrieNode, child: &TrieNode) -> u8 {
    debug_assert!(parent.prefix().contains(child.prefix()));
    child.prefix().mask_len() - parent.prefix().mask_len()
}

/// Number of possible addresses in the branch between a parent and a
/// child at the given distance: `2^(distance-1)`, since each branch
/// holds half of the parent's span.
pub fn branch_capacity(distance_bits: u8) -> u64 {
    assert!(
        (1..=MAX_MASK).contains(&distance_bits),
        "distance must be in 1-32 bits, got {distance_bits}"
    );
    1u64 << (distance_bits - 1)
}

/// Addresses claimed by the branch but absent from the original set:
/// branch capacity minus the leaves actually below the child.
pub fn vacant_addresses(distance_bits: u8, leaves_below_child: u64) -> u64 {
    branch_capacity(distance_bits).saturating_sub(leaves_below_child)
}

/// Leaves below the node divided by the node's maximum possible host
/// count `2^(32 - mask)`. A leaf has density 1.
pub fn density(node: &TrieNode) -> f64 {
    debug_assert!(node.leaf_count() >= 1);
    node.leaf_count() as f64 / node.prefix().address_count() as f64
}

/// The emitted prefix list plus the size bookkeeping for compression
/// statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryResult {
    prefixes: Vec<Prefix>,
    original_size: usize,
}

impl SummaryResult {
    /// Wraps an already-computed prefix list. The list is sorted into
    /// canonical numeric order.
    pub fn new(mut prefixes: Vec<Prefix>, original_size: usize) -> Self {
        prefixes.sort();
        SummaryResult {
            prefixes,
            original_size,
        }
    }

    /// Emitted prefixes in ascending numeric order.
    pub fn prefixes(&self) -> &[Prefix] {
        &self.prefixes
    }

    /// Number of distinct addresses that were summarized.
    pub fn original_size(&self) -> usize {
        self.original_size
    }

    pub fn summarized_size(&self) -> usize {
        self.prefixes.len()
    }

    /// `summarized / original`; lower is more compressed. None for an
    /// empty input.
    pub fn compression_rate(&self) -> Option<f64> {
        crate::report::compression_rate(self.original_size, self.summarized_size())
    }
}

/// Walks the tree and emits the selected summarizing prefixes. Pure
/// function of the tree and config; the tree is not modified.
pub fn summarize(tree: &PatriciaTree, config: &SummaryConfig) -> SummaryResult {
    let mut prefixes = Vec::new();
    visit(tree.root(), config, &mut prefixes);
    prefixes.sort();
    SummaryResult {
        prefixes,
        original_size: tree.len(),
    }
}

fn visit(node: &TrieNode, config: &SummaryConfig, out: &mut Vec<Prefix>) {
    if node.is_leaf() {
        out.push(node.prefix());
        return;
    }
    let descend = node.prefix().mask_len() <= config.min_subnet_mask
        || node
            .children()
            .any(|c| distance(node, c) > config.distance_threshold)
        || node.children().any(|c| density(c) < config.density_threshold);
    if descend {
        for child in node.children() {
            visit(child, config, out);
        }
    } else {
        out.push(node.prefix());
    }
}
