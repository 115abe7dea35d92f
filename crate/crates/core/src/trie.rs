//! Binary PATRICIA trie over a set of `/32` host addresses.
//!
//! Internal nodes are the common CIDR prefixes shared by their
//! subtrees; leaves are the original addresses as `/32` prefixes.
//! Single-child internal nodes never exist: when an inserted address
//! diverges from an existing edge, a new internal node labeled with
//! the common prefix of the two sides is spliced in with exactly two
//! children. The root `0.0.0.0/0` is the one exception; it is
//! materialized eagerly and may carry zero or one child until both
//! halves of the address space are populated.
//!
//! Every node tracks the number of `/32` leaves in its subtree, which
//! the summarizer later reads as the density numerator.

use crate::addr::{Ipv4Address, Prefix, MAX_MASK};

/// A trie node: a CIDR prefix plus up to two children and the count of
/// original addresses below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieNode {
    prefix: Prefix,
    leaf_count: usize,
    left: Option<Box<TrieNode>>,
    right: Option<Box<TrieNode>>,
}

impl TrieNode {
    fn leaf(prefix: Prefix) -> Self {
        TrieNode {
            prefix,
            leaf_count: 1,
            left: None,
            right: None,
        }
    }

    pub fn prefix(&self) -> Prefix {
        self.prefix
    }

    /// Number of `/32` leaves in this node's subtree.
    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    /// Leaves are exactly the nodes labeled with a full `/32` prefix.
    pub fn is_leaf(&self) -> bool {
        self.prefix.mask_len() == MAX_MASK
    }

    pub fn left(&self) -> Option<&TrieNode> {
        self.left.as_deref()
    }

    pub fn right(&self) -> Option<&TrieNode> {
        self.right.as_deref()
    }

    /// Children in canonical order: the 0-bit side first.
    pub fn children(&self) -> impl Iterator<Item = &TrieNode> {
        self.left.as_deref().into_iter().chain(self.right.as_deref())
    }

    /// Inserts `leaf` somewhere below this node. Caller guarantees that
    /// `self.prefix` strictly contains `leaf`. Returns true when the
    /// address was not already present.
    fn insert_below(&mut self, leaf: Prefix) -> bool {
        let slot = if Prefix::bit_at(leaf.bits(), self.prefix.mask_len()) == 0 {
            &mut self.left
        } else {
            &mut self.right
        };
        let inserted = match slot {
            // Only the root ever exposes an empty slot.
            None => {
                *slot = Some(Box::new(TrieNode::leaf(leaf)));
                true
            }
            Some(child) if child.prefix == leaf => false,
            Some(child) if child.prefix.contains(leaf) => child.insert_below(leaf),
            Some(child) => {
                // The new leaf diverges from this edge: splice in an
                // internal node labeled with the common prefix, with
                // the existing subtree and the new leaf as children.
                let common = child.prefix.common_prefix(leaf);
                let existing = std::mem::replace(child.as_mut(), TrieNode::leaf(common));
                let new_leaf = TrieNode::leaf(leaf);
                let (l, r) = if Prefix::bit_at(existing.prefix.bits(), common.mask_len()) == 0 {
                    (existing, new_leaf)
                } else {
                    (new_leaf, existing)
                };
                child.leaf_count = l.leaf_count + r.leaf_count;
                child.left = Some(Box::new(l));
                child.right = Some(Box::new(r));
                true
            }
        };
        if inserted {
            self.leaf_count += 1;
        }
        inserted
    }

    fn write_dump(&self, out: &mut String, depth: usize) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&format!("{} leaves={}\n", self.prefix, self.leaf_count));
        for child in self.children() {
            child.write_dump(out, depth + 1);
        }
    }

    fn check(&self, is_root: bool) -> Result<(), String> {
        let n_children = self.children().count();
        if self.is_leaf() {
            if n_children != 0 {
                return Err(format!("leaf {} has children", self.prefix));
            }
            if self.leaf_count != 1 {
                return Err(format!(
                    "leaf {} has leaf_count {}",
                    self.prefix, self.leaf_count
                ));
            }
            return Ok(());
        }
        match n_children {
            0 | 1 if is_root => {}
            2 => {}
            n => {
                return Err(format!(
                    "internal node {} has {} children",
                    self.prefix, n
                ));
            }
        }
        let mut sum = 0;
        for child in self.children() {
            if !self.prefix.contains(child.prefix) {
                return Err(format!(
                    "{} does not contain child {}",
                    self.prefix, child.prefix
                ));
            }
            if child.prefix.mask_len() <= self.prefix.mask_len() {
                return Err(format!(
                    "child {} not longer than parent {}",
                    child.prefix, self.prefix
                ));
            }
            sum += child.leaf_count;
            child.check(false)?;
        }
        if n_children > 0 && sum != self.leaf_count {
            return Err(format!(
                "{} leaf_count {} != children sum {}",
                self.prefix, self.leaf_count, sum
            ));
        }
        if let (Some(l), Some(r)) = (self.left(), self.right()) {
            let pos = self.prefix.mask_len();
            if Prefix::bit_at(l.prefix.bits(), pos) != 0 || Prefix::bit_at(r.prefix.bits(), pos) != 1
            {
                return Err(format!(
                    "children of {} do not diverge at bit {}",
                    self.prefix, pos
                ));
            }
        }
        Ok(())
    }
}

/// The trie itself. Construction is single-writer; a completed tree is
/// immutable and freely shareable across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatriciaTree {
    root: TrieNode,
}

impl Default for PatriciaTree {
    fn default() -> Self {
        Self::new()
    }
}

impl PatriciaTree {
    /// An empty tree: the materialized root with no children.
    pub fn new() -> Self {
        PatriciaTree {
            root: TrieNode {
                prefix: Prefix::ROOT,
                leaf_count: 0,
                left: None,
                right: None,
            },
        }
    }

    /// Builds the tree from any address sequence. Duplicates collapse
    /// (set semantics) and input order never changes the result.
    pub fn from_addresses<I: IntoIterator<Item = Ipv4Address>>(addresses: I) -> Self {
        let mut tree = PatriciaTree::new();
        for addr in addresses {
            tree.insert(addr);
        }
        tree
    }

    /// Inserts one address as a `/32` leaf. Returns true when the
    /// address was not already present.
    pub fn insert(&mut self, addr: Ipv4Address) -> bool {
        self.root.insert_below(addr.to_prefix())
    }

    pub fn root(&self) -> &TrieNode {
        &self.root
    }

    /// Number of distinct addresses in the tree.
    pub fn len(&self) -> usize {
        self.root.leaf_count
    }

    pub fn is_empty(&self) -> bool {
        self.root.leaf_count == 0
    }

    /// Debug serialization: one node per line in pre-order, indented
    /// two spaces per depth, `<prefix> leaves=<n>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.root.write_dump(&mut out, 0);
        out
    }

    /// Full structural check: two-children rule (root excepted),
    /// prefix containment, bit divergence, and leaf-count consistency.
    /// Returns the first violation found.
    pub fn validate(&self) -> Result<(), String> {
        if self.root.prefix != Prefix::ROOT {
            return Err(format!("root prefix is {}", self.root.prefix));
        }
        self.root.check(true)
    }
}

impl FromIterator<Ipv4Address> for PatriciaTree {
    fn from_iter<I: IntoIterator<Item = Ipv4Address>>(iter: I) -> Self {
        PatriciaTree::from_addresses(iter)
    }
}
