use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Verbal,
    PossAdjWhose,
    NounPhrase,
    GenitivePreposition,
    Appositive,
    ComparativeSuperlative,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::GenitivePreposition,
        Category::Appositive,
        Category::NounPhrase,
        Category::ComparativeSuperlative,
        Category::Verbal,
        Category::PossAdjWhose,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Category::Verbal => "verbal",
            Category::PossAdjWhose => "poss-adj-whose",
            Category::NounPhrase => "noun-phrase",
            Category::GenitivePreposition => "genitive-preposition",
            Category::Appositive => "appositive",
            Category::ComparativeSuperlative => "comparative-superlative",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Category::ALL
            .into_iter()
            .find(|c| c.label() == s || format!("{c:?}") == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

/// One of the 46 triple templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateId(u8);

const KEYS: [u8; 19] = [3, 6, 7, 10, 12, 14, 16, 18, 20, 22, 28, 36, 38, 40, 42, 43, 44, 45, 46];

/// First template of each linguistic pattern P1..P15, plus an end marker.
/// P9 and P10 share one row.
const ROW_STARTS: [u8; 16] = [1, 6, 7, 10, 16, 18, 20, 28, 36, 36, 40, 42, 43, 45, 46, 47];

impl TemplateId {
    pub const MAX: u8 = 46;

    pub fn new(n: u8) -> Option<Self> {
        (1..=Self::MAX).contains(&n).then_some(TemplateId(n))
    }

    /// Panics outside 1..=46. For use with literals.
    pub const fn t(n: u8) -> Self {
        assert!(n >= 1 && n <= Self::MAX);
        TemplateId(n)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = TemplateId> {
        (1..=Self::MAX).map(TemplateId)
    }

    pub fn is_key(self) -> bool {
        KEYS.contains(&self.0)
    }

    /// Linguistic pattern number; templates shared by P9/P10 report 9.
    pub fn pattern(self) -> u8 {
        let idx = ROW_STARTS.iter().rposition(|&s| s <= self.0).expect("template in range");
        // P10 shares the P9 row
        if idx == 9 {
            9
        } else {
            idx as u8 + 1
        }
    }

    pub fn category(self) -> Category {
        match self.0 {
            1..=17 => Category::Verbal,
            18..=27 => Category::PossAdjWhose,
            28..=35 => Category::NounPhrase,
            36..=39 => Category::GenitivePreposition,
            40..=41 => Category::Appositive,
            _ => Category::ComparativeSuperlative,
        }
    }

    /// Templates in the same table row.
    pub fn row(self) -> std::ops::RangeInclusive<u8> {
        let p = self.pattern() as usize;
        let end = ROW_STARTS[p..].iter().find(|&&s| s > ROW_STARTS[p - 1]).copied().unwrap_or(47);
        ROW_STARTS[p - 1]..=end - 1
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

impl FromStr for TemplateId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.strip_prefix('T')
            .and_then(|n| n.parse::<u8>().ok())
            .and_then(TemplateId::new)
            .ok_or_else(|| format!("invalid template id {s:?}"))
    }
}

impl Serialize for TemplateId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TemplateId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}
