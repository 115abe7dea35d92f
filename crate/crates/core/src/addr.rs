//! IPv4 address and CIDR prefix value types and the bit-level prefix
//! algebra used by the trie and the summarizer.
//!
//! Bit positions are counted from the left: bit 0 is the most
//! significant bit of the first octet. A [`Prefix`] is always stored
//! normalized, meaning every bit below its mask length is zero;
//! constructors reject values that violate this.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Maximum mask length for IPv4.
pub const MAX_MASK: u8 = 32;

/// A single IPv4 host address.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ipv4Address(u32);

impl Ipv4Address {
    pub fn new(value: u32) -> Self {
        Ipv4Address(value)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn octets(self) -> [u8; 4] {
        self.0.to_be_bytes()
    }

    /// The `/32` prefix denoting exactly this address.
    pub fn to_prefix(self) -> Prefix {
        Prefix {
            bits: self.0,
            mask_len: MAX_MASK,
        }
    }
}

impl From<u32> for Ipv4Address {
    fn from(value: u32) -> Self {
        Ipv4Address(value)
    }
}

impl From<Ipv4Address> for u32 {
    fn from(addr: Ipv4Address) -> u32 {
        addr.0
    }
}

impl fmt::Display for Ipv4Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.octets();
        write!(f, "{a}.{b}.{c}.{d}")
    }
}

impl fmt::Debug for Ipv4Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Error produced when parsing dotted-quad or CIDR text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty address string")]
    Empty,
    #[error("expected four dot-separated octets, found {found}")]
    OctetCount { found: usize },
    #[error("invalid octet '{token}'")]
    InvalidOctet { token: String },
    #[error("octet '{token}' out of range 0-255")]
    OctetRange { token: String },
    #[error("invalid mask length '{token}' (expected 0-32)")]
    InvalidMaskLength { token: String },
    #[error(transparent)]
    Prefix(#[from] PrefixError),
}

impl FromStr for Ipv4Address {
    type Err = ParseError;

    /// Parses canonical dotted-quad text. Octets with leading zeros are
    /// rejected to avoid the octal ambiguity.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        if s.is_empty() {
            return Err(ParseError::Empty);
        }
        let parts: Vec<&str> = s.split('.').collect();
        if parts.len() != 4 {
            return Err(ParseError::OctetCount { found: parts.len() });
        }
        let mut value = 0u32;
        for token in parts {
            let valid = !token.is_empty()
                && token.bytes().all(|b| b.is_ascii_digit())
                && (token.len() == 1 || !token.starts_with('0'));
            if !valid {
                return Err(ParseError::InvalidOctet {
                    token: token.to_string(),
                });
            }
            if token.len() > 3 {
                return Err(ParseError::OctetRange {
                    token: token.to_string(),
                });
            }
            let octet: u32 = token.parse().expect("digits only");
            if octet > 255 {
                return Err(ParseError::OctetRange {
                    token: token.to_string(),
                });
            }
            value = (value << 8) | octet;
        }
        Ok(Ipv4Address(value))
    }
}

/// Error produced when constructing a [`Prefix`] from raw parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PrefixError {
    #[error("mask length {0} exceeds 32")]
    MaskTooLong(u8),
    #[error("host bits set below mask /{mask_len}")]
    HostBitsSet { mask_len: u8 },
    #[error("prefix /{0} does not denote a single host")]
    NotHost(u8),
}

/// A CIDR subnet: the top `mask_len` bits of `bits` identify the
/// network, all lower bits are zero.
///
/// The derived ordering sorts by address bits first and mask length
/// second, which is the numeric order used for all emitted prefix
/// lists.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prefix {
    bits: u32,
    mask_len: u8,
}

/// Bitmask with the top `len` bits set.
fn mask(len: u8) -> u32 {
    if len == 0 {
        0
    } else {
        u32::MAX << (32 - len)
    }
}

impl Prefix {
    /// The universal root `0.0.0.0/0`.
    pub const ROOT: Prefix = Prefix {
        bits: 0,
        mask_len: 0,
    };

    /// Builds a prefix, rejecting non-zero host bits so that
    /// normalization bugs surface at the call site.
    pub fn new(bits: u32, mask_len: u8) -> Result<Self, PrefixError> {
        if mask_len > MAX_MASK {
            return Err(PrefixError::MaskTooLong(mask_len));
        }
        if bits & !mask(mask_len) != 0 {
            return Err(PrefixError::HostBitsSet { mask_len });
        }
        Ok(Prefix { bits, mask_len })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn mask_len(self) -> u8 {
        self.mask_len
    }

    pub fn is_host(self) -> bool {
        self.mask_len == MAX_MASK
    }

    /// Number of addresses covered: `2^(32 - mask_len)`.
    pub fn address_count(self) -> u64 {
        1u64 << (32 - u32::from(self.mask_len))
    }

    /// The bit of `bits` at position `pos` counted from the left.
    pub(crate) fn bit_at(bits: u32, pos: u8) -> u8 {
        debug_assert!(pos < 32);
        ((bits >> (31 - pos)) & 1) as u8
    }

    /// True iff every address in `other` is also in `self`.
    pub fn contains(self, other: Prefix) -> bool {
        self.mask_len <= other.mask_len && other.bits & mask(self.mask_len) == self.bits
    }

    pub fn contains_address(self, addr: Ipv4Address) -> bool {
        addr.value() & mask(self.mask_len) == self.bits
    }

    /// The longest prefix containing both `self` and `other`: its mask
    /// length is the number of leading bits on which the two agree,
    /// capped at the shorter of the two mask lengths.
    pub fn common_prefix(self, other: Prefix) -> Prefix {
        let agree = (self.bits ^ other.bits).leading_zeros() as u8;
        let len = agree.min(self.mask_len).min(other.mask_len);
        Prefix {
            bits: self.bits & mask(len),
            mask_len: len,
        }
    }
}

impl From<Ipv4Address> for Prefix {
    fn from(addr: Ipv4Address) -> Prefix {
        addr.to_prefix()
    }
}

impl TryFrom<Prefix> for Ipv4Address {
    type Error = PrefixError;

    fn try_from(prefix: Prefix) -> Result<Self, PrefixError> {
        if prefix.is_host() {
            Ok(Ipv4Address(prefix.bits))
        } else {
            Err(PrefixError::NotHost(prefix.mask_len))
        }
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", Ipv4Address(self.bits), self.mask_len)
    }
}

// Debug mirrors Display so dumps and assertion output stay in CIDR
// text form.
impl fmt::Debug for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Prefix {
    type Err = ParseError;

    /// Parses CIDR text `a.b.c.d/n` with no surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (addr_part, mask_part) = match s.split_once('/') {
            Some(pair) => pair,
            None => {
                return Err(ParseError::InvalidMaskLength {
                    token: s.to_string(),
                })
            }
        };
        let addr: Ipv4Address = addr_part.parse()?;
        let ok = !mask_part.is_empty()
            && mask_part.len() <= 2
            && mask_part.bytes().all(|b| b.is_ascii_digit());
        let mask_len: u8 = if ok { mask_part.parse().unwrap_or(255) } else { 255 };
        if mask_len > MAX_MASK {
            return Err(ParseError::InvalidMaskLength {
                token: mask_part.to_string(),
            });
        }
        Ok(Prefix::new(addr.value(), mask_len)?)
    }
}
