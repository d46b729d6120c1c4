use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The six feature groups, in their fixed concatenation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureGroup {
    #[serde(rename = "bow")]
    Bow,
    #[serde(rename = "structural")]
    Structural,
    #[serde(rename = "sentiment")]
    Sentiment,
    #[serde(rename = "comm-know-cxt")]
    CommKnowCxt,
    #[serde(rename = "de-cxt")]
    DeCxt,
    #[serde(rename = "comm-cxt")]
    CommCxt,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 6] = [
        FeatureGroup::Bow,
        FeatureGroup::Structural,
        FeatureGroup::Sentiment,
        FeatureGroup::CommKnowCxt,
        FeatureGroup::DeCxt,
        FeatureGroup::CommCxt,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureGroup::Bow => "bow",
            FeatureGroup::Structural => "structural",
            FeatureGroup::Sentiment => "sentiment",
            FeatureGroup::CommKnowCxt => "comm-know-cxt",
            FeatureGroup::DeCxt => "de-cxt",
            FeatureGroup::CommCxt => "comm-cxt",
        }
    }

    /// Context-based groups: community, diachronic and common-knowledge.
    pub fn is_context(self) -> bool {
        matches!(
            self,
            FeatureGroup::CommKnowCxt | FeatureGroup::DeCxt | FeatureGroup::CommCxt
        )
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        FeatureGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown feature group `{s}`")))
    }
}

/// Subset of feature groups as a bitmask; bit `i` is `FeatureGroup::ALL[i]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSet(u8);

impl GroupSet {
    pub const EMPTY: GroupSet = GroupSet(0);
    pub const ALL: GroupSet = GroupSet(0b11_1111);

    pub fn from_bits(bits: u8) -> Result<Self> {
        if bits & !Self::ALL.0 != 0 {
            return Err(Error::Parse(format!("group bitmask {bits} has unknown bits")));
        }
        Ok(GroupSet(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, g: FeatureGroup) -> bool {
        self.0 & (1 << g.index()) != 0
    }

    pub fn with(self, g: FeatureGroup) -> Self {
        GroupSet(self.0 | (1 << g.index()))
    }

    pub fn without(self, g: FeatureGroup) -> Self {
        GroupSet(self.0 & !(1 << g.index()))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = FeatureGroup> {
        FeatureGroup::ALL.into_iter().filter(move |g| self.contains(*g))
    }

    /// Every non-empty subset of `self`, in increasing bitmask order.
    pub fn non_empty_subsets(self) -> Vec<GroupSet> {
        let members: Vec<FeatureGroup> = self.iter().collect();
        let mut out: Vec<GroupSet> = (1u32..(1 << members.len()))
            .map(|m| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m & (1 << i) != 0)
                    .fold(GroupSet::EMPTY, |s, (_, g)| s.with(*g))
            })
            .collect();
        out.sort();
        out
    }

    pub fn context() -> Self {
        FeatureGroup::ALL.into_iter().filter(|g| g.is_context()).collect()
    }

    pub fn difference(self, other: GroupSet) -> Self {
        GroupSet(self.0 & !other.0)
    }
}

impl FromIterator<FeatureGroup> for GroupSet {
    fn from_iter<I: IntoIterator<Item = FeatureGroup>>(iter: I) -> Self {
        iter.into_iter().fold(GroupSet::EMPTY, |s, g| s.with(g))
    }
}

impl fmt::Display for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(FeatureGroup::name).collect();
        f.write_str(&names.join("+"))
    }
}

impl FromStr for GroupSet {
    type Err = Error;

    /// Accepts `all`, or group names separated by `,` or `+`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(GroupSet::ALL);
        }
        s.split([',', '+'])
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect()
    }
}

impl Serialize for GroupSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
