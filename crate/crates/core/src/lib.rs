//! Summarization of IPv4 address sets into compact CIDR prefix lists.
//!
//! The pipeline has three stages:
//!
//! 1. [`trie`] builds a binary PATRICIA trie over the addresses, where
//!    internal nodes are the common CIDR prefixes of their subtrees and
//!    leaves are the original `/32` addresses.
//! 2. [`summarize`] walks the trie and elects summarizing nodes using
//!    three metrics: a minimum-subnet-mask floor, the parent/child mask
//!    distance, and per-child leaf density. A single `granularity` knob
//!    (0 = finest, 3 = coarsest) maps to preset threshold pairs.
//! 3. [`registry`] simulates a two-level directory: named registries
//!    each summarize their own address set and publish the result, and
//!    an upper-level merge concatenates the published pieces. A
//!    single-instance mode summarizes the combined set directly for
//!    comparison.
//!
//! [`report`] computes the accompanying statistics (compression rate,
//! claimed-address volume, precision) and renders them as a text table,
//! JSON, or CSV.
//!
//! ```
//! use ipsummary::{Ipv4Address, PatriciaTree, SummaryConfig, summarize};
//!
//! let addrs: Vec<Ipv4Address> = ["10.10.0.1", "10.10.0.2", "10.10.0.3", "10.10.0.4"]
//!     .iter()
//!     .map(|s| s.parse().unwrap())
//!     .collect();
//! let tree = PatriciaTree::from_addresses(addrs);
//! let config = SummaryConfig::from_granularity(0, 8).unwrap();
//! let summary = summarize(&tree, &config);
//! assert_eq!(summary.prefixes().len(), 1);
//! assert_eq!(summary.prefixes()[0].to_string(), "10.10.0.0/29");
//! ```

pub mod addr;
pub mod registry;
pub mod report;
pub mod summarize;
pub mod trie;

pub use addr::{Ipv4Address, ParseError, Prefix, PrefixError};
pub use registry::{
    decrease, load_manifest, load_registry_file, merge_parts, publish_and_merge,
    summarize_single, LoadError, MergedSummary, RegistryError, RegistrySet,
};
pub use report::{claimed_addresses, compression_rate, precision, OutputFormat, RunRecord};
pub use summarize::{
    branch_capacity, density, distance, summarize, thresholds_for, ConfigError, SummaryConfig,
    SummaryResult,
};
pub use trie::{PatriciaTree, TrieNode};
