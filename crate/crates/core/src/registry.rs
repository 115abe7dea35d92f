//! Two-level directory simulation: named registries summarize their
//! own address sets and publish the pieces; the upper level merges the
//! published lists without re-summarizing. A single-instance mode
//! summarizes the combined set directly so the two operating points
//! can be compared.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::addr::{Ipv4Address, ParseError, Prefix};
use crate::summarize::{summarize, SummaryConfig, SummaryResult};
use crate::trie::PatriciaTree;

/// One lower-level registry: a name and its deduplicated address set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistrySet {
    name: String,
    addresses: BTreeSet<Ipv4Address>,
}

impl RegistrySet {
    pub fn new<I: IntoIterator<Item = Ipv4Address>>(name: impl Into<String>, addresses: I) -> Self {
        RegistrySet {
            name: name.into(),
            addresses: addresses.into_iter().collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn addresses(&self) -> &BTreeSet<Ipv4Address> {
        &self.addresses
    }

    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("registry list is empty")]
    EmptyRegistryList,
}

/// The upper-level view: per-registry summaries plus the merged list.
///
/// `total_original` counts addresses per registry, so an address
/// registered with two registries counts twice; `distinct_original`
/// is the cross-registry union size when known.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedSummary {
    per_registry: Vec<(String, SummaryResult)>,
    merged_prefixes: Vec<Prefix>,
    total_original: usize,
    distinct_original: Option<usize>,
    duplicate_prefixes_removed: usize,
}

impl MergedSummary {
    pub fn per_registry(&self) -> &[(String, SummaryResult)] {
        &self.per_registry
    }

    /// Merged prefix list, sorted ascending, exact duplicates removed.
    pub fn merged_prefixes(&self) -> &[Prefix] {
        &self.merged_prefixes
    }

    pub fn total_original(&self) -> usize {
        self.total_original
    }

    pub fn distinct_original(&self) -> Option<usize> {
        self.distinct_original
    }

    pub fn merged_size(&self) -> usize {
        self.merged_prefixes.len()
    }

    /// Count of exact-duplicate prefixes dropped by the merge.
    pub fn duplicate_prefixes_removed(&self) -> usize {
        self.duplicate_prefixes_removed
    }

    /// Merged size over total original size. None for empty input.
    pub fn compression_rate(&self) -> Option<f64> {
        crate::report::compression_rate(self.total_original, self.merged_size())
    }
}

/// Merges already-summarized pieces: plain concatenation, sorted, with
/// exact-duplicate prefixes removed. Subsumed prefixes are kept: a
/// `/32` inside another registry's `/24` survives the merge.
pub fn merge_parts(parts: Vec<(String, SummaryResult)>) -> MergedSummary {
    let total_original = parts.iter().map(|(_, s)| s.original_size()).sum();
    let mut merged: Vec<Prefix> = parts
        .iter()
        .flat_map(|(_, s)| s.prefixes().iter().copied())
        .collect();
    merged.sort();
    let before = merged.len();
    merged.dedup();
    let duplicate_prefixes_removed = before - merged.len();
    MergedSummary {
        per_registry: parts,
        merged_prefixes: merged,
        total_original,
        distinct_original: None,
        duplicate_prefixes_removed,
    }
}

/// Distributed mode: every registry is built into its own trie and
/// summarized with the shared config (in parallel), then the pieces
/// are merged. The merge never re-summarizes.
pub fn publish_and_merge(
    registries: &[RegistrySet],
    config: &SummaryConfig,
) -> Result<MergedSummary, RegistryError> {
    if registries.is_empty() {
        return Err(RegistryError::EmptyRegistryList);
    }
    let parts: Vec<(String, SummaryResult)> = registries
        .par_iter()
        .map(|reg| {
            let tree = PatriciaTree::from_addresses(reg.addresses().iter().copied());
            (reg.name().to_string(), summarize(&tree, config))
        })
        .collect();
    let mut merged = merge_parts(parts);
    merged.distinct_original = Some(distinct_address_count(registries));
    Ok(merged)
}

/// Single mode: the cross-registry union is built into one trie and
/// summarized as a whole. `total_original` still counts per registry
/// so the two modes stay comparable.
pub fn summarize_single(
    registries: &[RegistrySet],
    config: &SummaryConfig,
) -> Result<MergedSummary, RegistryError> {
    if registries.is_empty() {
        return Err(RegistryError::EmptyRegistryList);
    }
    let union: BTreeSet<Ipv4Address> = registries
        .iter()
        .flat_map(|reg| reg.addresses().iter().copied())
        .collect();
    let total_original = registries.iter().map(RegistrySet::len).sum();
    let distinct = union.len();
    let tree = PatriciaTree::from_addresses(union);
    let result = summarize(&tree, config);
    let merged_prefixes = result.prefixes().to_vec();
    Ok(MergedSummary {
        per_registry: vec![("single".to_string(), result)],
        merged_prefixes,
        total_original,
        distinct_original: Some(distinct),
        duplicate_prefixes_removed: 0,
    })
}

/// Reduction in merged size from running single mode instead of
/// distributed: `1 - single/distributed`. None when the distributed
/// size is zero.
pub fn decrease(distributed: &MergedSummary, single: &MergedSummary) -> Option<f64> {
    if distributed.merged_size() == 0 {
        return None;
    }
    Some(1.0 - single.merged_size() as f64 / distributed.merged_size() as f64)
}

fn distinct_address_count(registries: &[RegistrySet]) -> usize {
    registries
        .iter()
        .flat_map(|reg| reg.addresses().iter().copied())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Error loading registry input files.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: invalid IPv4 address '{token}': {source}")]
    Address {
        path: PathBuf,
        line: usize,
        token: String,
        #[source]
        source: ParseError,
    },
    #[error("{path}:{line}: expected 'name=path'")]
    ManifestSyntax { path: PathBuf, line: usize },
    #[error("duplicate registry name '{name}'")]
    DuplicateName { name: String },
}

// LoadError::Display embeds paths as `path:line`, so error text doubles
// as a diagnostic location.
impl LoadError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        LoadError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Reads one address file: one dotted-quad per line, `#` starts a
/// comment line, blank lines are ignored. The registry is named after
/// the file stem.
pub fn load_registry_file(path: &Path) -> Result<RegistrySet, LoadError> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned());
    load_named_registry(name, path)
}

/// As [`load_registry_file`] but with an explicit registry name.
pub fn load_named_registry(name: impl Into<String>, path: &Path) -> Result<RegistrySet, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let mut addresses = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let addr: Ipv4Address = line.parse().map_err(|source| LoadError::Address {
            path: path.to_path_buf(),
            line: idx + 1,
            token: line.to_string(),
            source,
        })?;
        addresses.push(addr);
    }
    Ok(RegistrySet::new(name, addresses))
}

/// Reads a manifest of `name=path` lines (comments and blank lines as
/// in address files). Relative paths are resolved against the
/// manifest's directory. Registry names must be unique.
pub fn load_manifest(path: &Path) -> Result<Vec<RegistrySet>, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut seen = BTreeSet::new();
    let mut registries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, rel) = line.split_once('=').ok_or(LoadError::ManifestSyntax {
            path: path.to_path_buf(),
            line: idx + 1,
        })?;
        let (name, rel) = (name.trim(), rel.trim());
        if name.is_empty() || rel.is_empty() {
            return Err(LoadError::ManifestSyntax {
                path: path.to_path_buf(),
                line: idx + 1,
            });
        }
        if !seen.insert(name.to_string()) {
            return Err(LoadError::DuplicateName {
                name: name.to_string(),
            });
        }
        let file = base.join(rel);
        registries.push(load_named_registry(name, &file)?);
    }
    Ok(registries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn addr(s: &str) -> Ipv4Address {
        s.parse().unwrap()
    }

    fn registry(name: &str, addrs: &[&str]) -> RegistrySet {
        RegistrySet::new(name, addrs.iter().map(|s| addr(s)))
    }

    fn config() -> SummaryConfig {
        SummaryConfig::from_granularity(0, 8).unwrap()
    }

    #[test]
    fn registry_deduplicates_addresses() {
        let reg = registry("a", &["10.0.0.1", "10.0.0.1", "10.0.0.2"]);
        assert_eq!(reg.len(), 2);
    }

    #[test]
    fn single_registry_merge_matches_own_summary() {
        let reg = registry("solo", &["10.10.0.1", "10.10.0.2", "10.10.0.3", "10.10.0.4"]);
        let merged = publish_and_merge(std::slice::from_ref(&reg), &config()).unwrap();
        assert_eq!(merged.per_registry().len(), 1);
        let (_, own) = &merged.per_registry()[0];
        assert_eq!(merged.merged_prefixes(), own.prefixes());
        assert_eq!(merged.total_original(), 4);
        assert_eq!(merged.distinct_original(), Some(4));

        let single = summarize_single(std::slice::from_ref(&reg), &config()).unwrap();
        assert_eq!(single.merged_prefixes(), merged.merged_prefixes());
        assert_eq!(decrease(&merged, &single), Some(0.0));
    }

    #[test]
    fn merge_removes_exact_duplicate_prefixes_only() {
        // both registries summarize the same dense /30 block; one also
        // holds a lone host inside the other's block
        let a = registry("a", &["10.0.0.0", "10.0.0.1", "10.0.0.2", "10.0.0.3"]);
        let b = registry(
            "b",
            &["10.0.0.0", "10.0.0.1", "10.0.0.2", "10.0.0.3", "10.1.0.1"],
        );
        let merged = publish_and_merge(&[a, b], &config()).unwrap();
        let texts: Vec<String> = merged
            .merged_prefixes()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(texts, ["10.0.0.0/30", "10.1.0.1/32"]);
        assert_eq!(merged.duplicate_prefixes_removed(), 1);
        // sizes: 1 + 2 - 1 duplicate
        assert_eq!(merged.merged_size(), 2);
        assert_eq!(merged.total_original(), 9);
        assert_eq!(merged.distinct_original(), Some(5));
    }

    #[test]
    fn merged_size_bounded_by_part_sum() {
        let a = registry("a", &["10.0.0.1", "10.0.0.2"]);
        let b = registry("b", &["172.16.0.1"]);
        let merged = publish_and_merge(&[a, b], &config()).unwrap();
        let part_sum: usize = merged
            .per_registry()
            .iter()
            .map(|(_, s)| s.summarized_size())
            .sum();
        assert!(merged.merged_size() <= part_sum);
        assert_eq!(merged.merged_size(), part_sum); // no duplicates here
    }

    #[test]
    fn disjoint_blocks_make_modes_agree() {
        // each registry holds a full /28 inside its own /16, so each
        // part summarizes to exactly one prefix and the union keeps
        // the same structure
        let regs: Vec<RegistrySet> = (0u32..4)
            .map(|i| {
                let base = (10 << 24) | ((i + 1) << 16);
                RegistrySet::new(
                    format!("block{i}"),
                    (0..16u32).map(move |j| Ipv4Address::new(base + j)),
                )
            })
            .collect();
        let dist = publish_and_merge(&regs, &config()).unwrap();
        let single = summarize_single(&regs, &config()).unwrap();
        assert_eq!(dist.merged_size(), 4);
        assert_eq!(dist.merged_prefixes(), single.merged_prefixes());
        assert_eq!(decrease(&dist, &single), Some(0.0));
    }

    #[test]
    fn registry_order_does_not_change_output() {
        let a = registry("a", &["10.0.0.1", "10.0.0.2"]);
        let b = registry("b", &["192.168.1.1"]);
        let c = registry("c", &["172.16.5.5", "172.16.5.6"]);
        let fwd = publish_and_merge(&[a.clone(), b.clone(), c.clone()], &config()).unwrap();
        let rev = publish_and_merge(&[c, b, a], &config()).unwrap();
        assert_eq!(fwd.merged_prefixes(), rev.merged_prefixes());
        assert_eq!(fwd.total_original(), rev.total_original());
        assert_eq!(fwd.merged_size(), rev.merged_size());
    }

    #[test]
    fn parallelism_level_does_not_change_output() {
        let regs: Vec<RegistrySet> = (0u32..8)
            .map(|i| {
                RegistrySet::new(
                    format!("r{i}"),
                    (0..32u32).map(move |j| Ipv4Address::new((10 << 24) | (i << 16) | j)),
                )
            })
            .collect();
        let baseline = publish_and_merge(&regs, &config()).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| publish_and_merge(&regs, &config()).unwrap());
        assert_eq!(baseline, serial);
    }

    #[test]
    fn empty_registry_list_is_an_error() {
        assert_eq!(
            publish_and_merge(&[], &config()).unwrap_err(),
            RegistryError::EmptyRegistryList
        );
        assert_eq!(
            summarize_single(&[], &config()).unwrap_err(),
            RegistryError::EmptyRegistryList
        );
    }

    #[test]
    fn decrease_worked_values() {
        let d = synthetic_merged(208);
        let s = synthetic_merged(180);
        let got = decrease(&d, &s).unwrap();
        assert!((got - 0.1346).abs() < 5e-4);

        let d = synthetic_merged(139);
        let s = synthetic_merged(102);
        let got = decrease(&d, &s).unwrap();
        assert!((got - 0.2662).abs() < 5e-4);

        let empty = merge_parts(vec![("e".into(), SummaryResult::new(vec![], 0))]);
        assert_eq!(decrease(&empty, &empty), None);
    }

    fn synthetic_merged(size: usize) -> MergedSummary {
        let prefixes: Vec<Prefix> = (0..size)
            .map(|i| Prefix::new((10u32 << 24) | ((i as u32) << 8), 24).unwrap())
            .collect();
        merge_parts(vec![("fixture".into(), SummaryResult::new(prefixes, size))])
    }

    #[test]
    fn load_registry_file_skips_comments_and_blanks() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("east.txt");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "# hosts registered with east").unwrap();
        writeln!(f).unwrap();
        writeln!(f, "10.0.0.1").unwrap();
        writeln!(f, "  10.0.0.2  ").unwrap();
        drop(f);
        let reg = load_registry_file(&path).unwrap();
        assert_eq!(reg.name(), "east");
        assert_eq!(reg.len(), 2);
    }

    #[test]
    fn load_registry_file_names_offending_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "10.0.0.1\n10.10.0.256\n").unwrap();
        let err = load_registry_file(&path).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("bad.txt:2"), "got: {text}");
        assert!(text.contains("10.10.0.256"), "got: {text}");
    }

    #[test]
    fn load_manifest_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.txt"), "10.0.0.1\n").unwrap();
        std::fs::write(dir.path().join("b.txt"), "10.0.0.2\n").unwrap();
        let manifest = dir.path().join("registries.txt");
        std::fs::write(&manifest, "# two registries\neast = a.txt\nwest = b.txt\n").unwrap();
        let regs = load_manifest(&manifest).unwrap();
        assert_eq!(regs.len(), 2);
        assert_eq!(regs[0].name(), "east");
        assert_eq!(regs[1].name(), "west");
    }

    #[test]
    fn load_manifest_rejects_duplicates_and_syntax_errors() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.txt"), "10.0.0.1\n").unwrap();
        let manifest = dir.path().join("m.txt");

        std::fs::write(&manifest, "east = a.txt\neast = a.txt\n").unwrap();
        let err = load_manifest(&manifest).unwrap_err();
        assert!(err.to_string().contains("duplicate registry name 'east'"));

        std::fs::write(&manifest, "just-a-name\n").unwrap();
        let err = load_manifest(&manifest).unwrap_err();
        assert!(err.to_string().contains("expected 'name=path'"));

        std::fs::write(&manifest, "east = missing.txt\n").unwrap();
        assert!(matches!(
            load_manifest(&manifest).unwrap_err(),
            LoadError::Io { .. }
        ));
    }
}
