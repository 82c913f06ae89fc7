use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// One ablation switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    /// Minimal noun phrases from the constituency tree.
    A,
    /// Quoted spans and listed expressions form one noun phrase.
    B,
    /// Entity mentions form one noun phrase.
    C,
    /// Genitive/preposition reformation.
    D,
    /// Appositive filtering.
    E,
    /// Extra argument types for genitive/preposition and appositive relations.
    F,
    /// Noun-phrase pairing by neighbours.
    G,
    /// Noun-phrase pairing of adjectives with the rightmost noun.
    H,
}

impl Setting {
    pub const ALL: [Setting; 8] =
        [Setting::A, Setting::B, Setting::C, Setting::D, Setting::E, Setting::F, Setting::G, Setting::H];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }
}

/// Subset of the eight settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SettingSet(u8);

/// The full profile without neighbour pairing.
impl Default for SettingSet {
    fn default() -> Self {
        default_settings()
    }
}

impl SettingSet {
    pub const fn empty() -> Self {
        SettingSet(0)
    }

    pub fn all() -> Self {
        SettingSet(0xff)
    }

    pub fn contains(self, s: Setting) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn with(self, s: Setting) -> Self {
        SettingSet(self.0 | s.bit())
    }

    pub fn without(self, s: Setting) -> Self {
        SettingSet(self.0 & !s.bit())
    }

    pub fn iter(self) -> impl Iterator<Item = Setting> {
        Setting::ALL.into_iter().filter(move |s| self.contains(*s))
    }

    /// Parses a settings string, panicking on bad input. Meant for literals.
    pub fn of(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("{e}"))
    }
}

/// The profile used when no settings are given.
pub fn default_settings() -> SettingSet {
    SettingSet::of("ABCDEFH")
}

impl FromStr for SettingSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut set = SettingSet::empty();
        for c in s.chars() {
            let setting = match c {
                'A' => Setting::A,
                'B' => Setting::B,
                'C' => Setting::C,
                'D' => Setting::D,
                'E' => Setting::E,
                'F' => Setting::F,
                'G' => Setting::G,
                'H' => Setting::H,
                _ => return Err(Error::Settings(s.to_string())),
            };
            if set.contains(setting) {
                return Err(Error::Settings(s.to_string()));
            }
            set = set.with(setting);
        }
        Ok(set)
    }
}

impl fmt::Display for SettingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            write!(f, "{}", s.letter())?;
        }
        Ok(())
    }
}

impl Serialize for SettingSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SettingSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
