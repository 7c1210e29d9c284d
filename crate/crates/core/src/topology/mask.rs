use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set accepted anywhere in the crate; one mask fits a `u32`
/// with room for the full set `X`.
pub const MAX_GROUND: usize = 16;

/// A subset of the ground set `{0, .., n-1}`; bit `i` set iff point `i` is a member.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> SubsetMask {
        debug_assert!(n <= MAX_GROUND);
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(x: usize) -> SubsetMask {
        SubsetMask(1 << x)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> SubsetMask {
        SubsetMask(points.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: SubsetMask) -> bool {
        self.0 & other.0 != 0
    }

    pub fn minus(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> SubsetMask {
        SubsetMask(!self.0 & SubsetMask::full(n).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(SubsetMask::full(n))
    }

    pub fn check_fits(self, n: usize) -> Result<()> {
        if self.fits(n) {
            Ok(())
        } else {
            Err(Error::MaskOutOfRange { mask: self.0, n })
        }
    }

    /// Members in ascending order.
    pub fn points(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(p)
        })
    }

    /// All subsets of `self`, ascending by numeric value.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur | !mask).wrapping_add(1) & mask) };
            Some(SubsetMask(cur))
        })
    }

    /// Every subset of an `n`-point ground set, ascending.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetMask> {
        (0..(1u32 << n)).map(SubsetMask)
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl BitXor for SubsetMask {
    type Output = SubsetMask;
    fn bitxor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A family of subsets in canonical form: strictly ascending by mask value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct SetFamily(Vec<SubsetMask>);

impl SetFamily {
    pub fn new() -> SetFamily {
        SetFamily(Vec::new())
    }

    pub fn as_slice(&self) -> &[SubsetMask] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: SubsetMask) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    /// Union of all members.
    pub fn union_all(&self) -> SubsetMask {
        self.iter().fold(SubsetMask::EMPTY, |acc, a| acc | a)
    }

    /// Builds the family from a membership table indexed by mask value.
    pub(crate) fn from_table(table: &[bool]) -> SetFamily {
        SetFamily(table.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| SubsetMask(i as u32)).collect())
    }

    pub fn into_vec(self) -> Vec<SubsetMask> {
        self.0
    }
}

impl FromIterator<SubsetMask> for SetFamily {
    fn from_iter<I: IntoIterator<Item = SubsetMask>>(iter: I) -> Self {
        let mut v: Vec<SubsetMask> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SetFamily(v)
    }
}

impl From<Vec<SubsetMask>> for SetFamily {
    fn from(v: Vec<SubsetMask>) -> Self {
        v.into_iter().collect()
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Vec::<SubsetMask>::deserialize(d)?.into_iter().collect())
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_all_submasks_in_order() {
        let got: Vec<u32> = SubsetMask(0b1010).subsets().map(|m| m.0).collect();
        assert_eq!(got, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert_eq!(SubsetMask::EMPTY.subsets().count(), 1);
        assert_eq!(SubsetMask::full(16).subsets().count(), 1 << 16);
    }

    #[test]
    fn family_is_canonical() {
        let f: SetFamily = vec![SubsetMask(3), SubsetMask(1), SubsetMask(3), SubsetMask(0)].into();
        assert_eq!(f.as_slice(), &[SubsetMask(0), SubsetMask(1), SubsetMask(3)]);
        let parsed: SetFamily = serde_json::from_str("[3,1,1]").unwrap();
        assert_eq!(parsed.as_slice(), &[SubsetMask(1), SubsetMask(3)]);
    }

    #[test]
    fn complement_stays_in_range() {
        assert_eq!(SubsetMask(0b01).complement(2), SubsetMask(0b10));
        assert_eq!(SubsetMask::EMPTY.complement(16), SubsetMask::full(16));
        assert!(SubsetMask(4).check_fits(2).is_err());
    }
}
