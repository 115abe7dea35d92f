//! Internal test support shared by the workspace's test targets:
//! a naive quadratic reference tree to cross-check the real one,
//! a straight-line reference summarizer, workload generators, and
//! assertion helpers for summary invariants.
//!
//! Everything here favors obviousness over speed; nothing is part of
//! the shipped library.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ipsummary::{Ipv4Address, Prefix, RegistrySet};

/// Reference tree built by brute force: the node set is the root plus
/// all /32 leaves plus every pairwise common prefix, each node's leaf
/// count is a full scan, and each node's parent is its longest proper
/// container. No insertion logic is shared with the real tree.
pub struct ReferenceTree {
    counts: BTreeMap<Prefix, usize>,
    children: BTreeMap<Prefix, Vec<Prefix>>,
}

impl ReferenceTree {
    pub fn build(addrs: &BTreeSet<Ipv4Address>) -> Self {
        let leaves: Vec<Prefix> = addrs.iter().map(|a| a.to_prefix()).collect();
        let mut node_set: BTreeSet<Prefix> = leaves.iter().copied().collect();
        node_set.insert(Prefix::ROOT);
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                node_set.insert(leaves[i].common_prefix(leaves[j]));
            }
        }

        let counts: BTreeMap<Prefix, usize> = node_set
            .iter()
            .map(|p| (*p, addrs.iter().filter(|a| p.contains_address(**a)).count()))
            .collect();

        let mut children: BTreeMap<Prefix, Vec<Prefix>> =
            node_set.iter().map(|p| (*p, Vec::new())).collect();
        for q in &node_set {
            if *q == Prefix::ROOT {
                continue;
            }
            let parent = node_set
                .iter()
                .filter(|p| **p != *q && p.contains(*q))
                .max_by_key(|p| p.mask_len())
                .copied()
                .expect("root contains every prefix");
            children.get_mut(&parent).unwrap().push(*q);
        }
        // Prefix order is (bits, mask), so sorting puts the zero-bit
        // child first, matching the real tree's left-right order
        for kids in children.values_mut() {
            kids.sort();
        }
        ReferenceTree { counts, children }
    }

    pub fn node_counts(&self) -> &BTreeMap<Prefix, usize> {
        &self.counts
    }

    /// Same line format as the real tree's dump.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, Prefix::ROOT, 0);
        out
    }

    fn write(&self, out: &mut String, node: Prefix, depth: usize) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{} leaves={}\n", node, self.counts[&node]));
        for kid in &self.children[&node] {
            self.write(out, *kid, depth + 1);
        }
    }

    /// Straight-line restatement of the decision rules, evaluated on
    /// the reference structure: emit leaves; descend when the node's
    /// mask is not strictly longer than the minimum subnet mask, when
    /// any child is farther than the distance threshold, or when any
    /// child is sparser than the density threshold; otherwise emit the
    /// node and prune.
    pub fn summarize(&self, distance: u8, density: f64, min_subnet_mask: u8) -> Vec<Prefix> {
        let mut out = Vec::new();
        self.visit(Prefix::ROOT, distance, density, min_subnet_mask, &mut out);
        out.sort();
        out
    }

    fn visit(&self, node: Prefix, distance: u8, density: f64, msm: u8, out: &mut Vec<Prefix>) {
        if node.mask_len() == 32 {
            out.push(node);
            return;
        }
        let kids = &self.children[&node];
        if kids.is_empty() {
            return;
        }
        let mut descend = node.mask_len() <= msm;
        for kid in kids {
            if kid.mask_len() - node.mask_len() > distance {
                descend = true;
            }
            let kid_density =
                self.counts[kid] as f64 / 2f64.powi(32 - i32::from(kid.mask_len()));
            if kid_density < density {
                descend = true;
            }
        }
        if descend {
            for kid in kids {
                self.visit(*kid, distance, density, msm, out);
            }
        } else {
            out.push(node);
        }
    }
}

/// Uniformly random addresses.
pub fn uniform_set(rng: &mut impl Rng, size: usize) -> BTreeSet<Ipv4Address> {
    let mut set = BTreeSet::new();
    while set.len() < size {
        set.insert(Ipv4Address::new(rng.gen()));
    }
    set
}

/// Addresses clustered into one to four blocks of /16 to /24.
pub fn clustered_set(rng: &mut impl Rng, size: usize) -> BTreeSet<Ipv4Address> {
    let block_count = rng.gen_range(1..=4);
    let blocks: Vec<(u32, u8)> = (0..block_count)
        .map(|_| {
            let mask = rng.gen_range(16..=24u8);
            let base = rng.gen::<u32>() >> (32 - mask) << (32 - mask);
            (base, mask)
        })
        .collect();
    let mut set = BTreeSet::new();
    while set.len() < size {
        let (base, mask) = blocks[rng.gen_range(0..blocks.len())];
        let span = 1u64 << (32 - mask);
        set.insert(Ipv4Address::new(base | rng.gen_range(0..span) as u32));
    }
    set
}

/// Half clustered, half uniform, by coin flip.
pub fn mixed_set(rng: &mut impl Rng, size: usize) -> BTreeSet<Ipv4Address> {
    if rng.gen_bool(0.5) {
        clustered_set(rng, size)
    } else {
        uniform_set(rng, size)
    }
}

/// Nine registries drawing from a shared pool of /24 blocks inside a
/// handful of /16 networks, so registries overlap. Each block is
/// either a dense random fill or a contiguous run that may spill into
/// the next /24. Deterministic in the seed.
pub fn synthetic_registries(seed: u64) -> Vec<RegistrySet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = Vec::new();
    for _ in 0..6 {
        // keep bases below 128.0.0.0 so runs never overflow
        let supernet = rng.gen::<u32>() & 0x7FFF_0000;
        for _ in 0..8 {
            pool.push(supernet | (rng.gen_range(0..256u32) << 8));
        }
    }
    (0..9)
        .map(|i| {
            let mut addrs = BTreeSet::new();
            for _ in 0..rng.gen_range(2..=4) {
                let base = pool[rng.gen_range(0..pool.len())];
                if rng.gen_bool(0.5) {
                    let fill = rng.gen_range(140..=230);
                    let mut block = BTreeSet::new();
                    while block.len() < fill {
                        block.insert(base | rng.gen_range(0..256u32));
                    }
                    addrs.extend(block.into_iter().map(Ipv4Address::new));
                } else {
                    let start = base + rng.gen_range(0..256u32);
                    let len = rng.gen_range(48..=200u32);
                    addrs.extend((0..len).map(|k| Ipv4Address::new(start + k)));
                }
            }
            // stragglers: lone hosts scattered across the pool blocks
            for _ in 0..rng.gen_range(10..=40) {
                let base = pool[rng.gen_range(0..pool.len())];
                addrs.insert(Ipv4Address::new(base | rng.gen_range(0..256u32)));
            }
            RegistrySet::new(format!("r{}", i + 1), addrs)
        })
        .collect()
}

/// Every original address must fall inside some emitted prefix.
pub fn assert_covers(prefixes: &[Prefix], addrs: &BTreeSet<Ipv4Address>) {
    for addr in addrs {
        assert!(
            prefixes.iter().any(|p| p.contains_address(*addr)),
            "address {addr} not covered by any of {} prefixes",
            prefixes.len()
        );
    }
}

/// Emitted prefixes must be sorted, deduplicated, and pairwise
/// disjoint. Sorting is by (bits, mask), so if any prefix contained
/// another, everything between them in sort order would also be
/// contained and the container's immediate successor would already
/// witness the overlap; checking adjacent pairs is enough.
pub fn assert_disjoint(prefixes: &[Prefix]) {
    for pair in prefixes.windows(2) {
        assert!(pair[0] < pair[1], "not sorted: {} then {}", pair[0], pair[1]);
        assert!(
            !pair[0].contains(pair[1]) && !pair[1].contains(pair[0]),
            "overlapping prefixes {} and {}",
            pair[0],
            pair[1]
        );
    }
}

/// Every emitted subnet must be strictly longer than the minimum
/// subnet mask; host prefixes are exempt.
pub fn assert_mask_floor(prefixes: &[Prefix], min_subnet_mask: u8) {
    for p in prefixes {
        assert!(
            p.mask_len() == 32 || p.mask_len() > min_subnet_mask,
            "prefix {p} at or above the minimum subnet mask {min_subnet_mask}"
        );
    }
}

/// Every prefix of the finer summary must lie inside (or equal) some
/// prefix of the coarser one.
pub fn assert_coarsens(finer: &[Prefix], coarser: &[Prefix]) {
    for p in finer {
        assert!(
            coarser.iter().any(|q| q == p || q.contains(*p)),
            "finer prefix {p} not contained in any coarser prefix"
        );
    }
}
