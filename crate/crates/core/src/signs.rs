//! Sign patterns, Descartes pairs, compatible root-count pairs and the
//! `Z2 x Z2` action on `(pattern, (pos, neg))` couples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("run list is empty")]
    EmptyRuns,
    #[error("run {index} has length zero")]
    ZeroRun { index: usize },
    #[error("sign pattern must start with '+'")]
    LeadingMinus,
    #[error("sign pattern needs at least two signs (degree >= 1)")]
    TooShort,
    #[error("cannot parse sign pattern {0:?}: expected a +/- word or a comma separated run list")]
    Syntax(String),
    #[error("pair ({pos}, {neg}) is not compatible with {pattern}")]
    IncompatiblePair { pattern: String, pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// `(c, p)`: sign changes and sign preservations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DescartesPair {
    pub changes: usize,
    pub preservations: usize,
}

/// A `+`/`-` word of length `d + 1` whose first sign is `+`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn from_signs(signs: Vec<Sign>) -> Result<Self, PatternError> {
        match signs.first() {
            None => Err(PatternError::TooShort),
            Some(Sign::Minus) => Err(PatternError::LeadingMinus),
            Some(Sign::Plus) if signs.len() < 2 => Err(PatternError::TooShort),
            Some(Sign::Plus) => Ok(Self { signs }),
        }
    }

    /// `Σ_{m_1,...,m_s}`: `m_1` pluses, then `m_2` minuses, and so on.
    pub fn from_runs(runs: &[usize]) -> Result<Self, PatternError> {
        if runs.is_empty() {
            return Err(PatternError::EmptyRuns);
        }
        let mut signs = Vec::with_capacity(runs.iter().sum());
        let mut current = Sign::Plus;
        for (index, &m) in runs.iter().enumerate() {
            if m == 0 {
                return Err(PatternError::ZeroRun { index });
            }
            signs.extend(std::iter::repeat(current).take(m));
            current = current.flipped();
        }
        Self::from_signs(signs)
    }

    /// All-plus pattern of the given degree.
    pub fn all_plus(degree: usize) -> Self {
        Self { signs: vec![Sign::Plus; degree + 1] }
    }

    pub fn runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut prev = None;
        for &s in &self.signs {
            if Some(s) == prev {
                *runs.last_mut().expect("run started") += 1;
            } else {
                runs.push(1);
                prev = Some(s);
            }
        }
        runs
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.signs.len() - 1
    }

    pub fn last(&self) -> Sign {
        *self.signs.last().expect("pattern is non-empty")
    }

    pub fn descartes_pair(&self) -> DescartesPair {
        let changes = self.signs.windows(2).filter(|w| w[0] != w[1]).count();
        DescartesPair { changes, preservations: self.degree() - changes }
    }

    /// Every `(pos, neg)` with `pos <= c`, `c - pos` even, `neg <= p`,
    /// `p - neg` even, sorted lexicographically.
    pub fn compatible_pairs(&self) -> Vec<RootCountPair> {
        let DescartesPair { changes, preservations } = self.descartes_pair();
        let mut pairs = Vec::new();
        for pos in (changes % 2..=changes).step_by(2) {
            for neg in (preservations % 2..=preservations).step_by(2) {
                pairs.push(RootCountPair { pos, neg });
            }
        }
        pairs
    }

    pub fn is_compatible(&self, pair: RootCountPair) -> bool {
        let DescartesPair { changes, preservations } = self.descartes_pair();
        pair.pos <= changes
            && (changes - pair.pos) % 2 == 0
            && pair.neg <= preservations
            && (preservations - pair.neg) % 2 == 0
    }

    /// Flips the signs at positions 2, 4, ... (odd indices).
    pub fn alternated(&self) -> Self {
        let signs = self
            .signs
            .iter()
            .enumerate()
            .map(|(i, &s)| if i % 2 == 1 { s.flipped() } else { s })
            .collect();
        Self { signs }
    }

    /// The word read from the right, renormalized to start with `+`.
    pub fn reversed(&self) -> Self {
        let mut signs: Vec<Sign> = self.signs.iter().rev().copied().collect();
        if signs[0] == Sign::Minus {
            signs.iter_mut().for_each(|s| *s = s.flipped());
        }
        Self { signs }
    }

    /// Every sign flipped. The result starts with `-`, so it is only used as
    /// a tail when building longer patterns.
    pub(crate) fn negated_signs(&self) -> Vec<Sign> {
        self.signs.iter().map(|s| s.flipped()).collect()
    }

    /// All `2^d` patterns of degree `d`, ordered as binary words with `+ < -`.
    pub fn enumerate(degree: usize) -> Vec<SignPattern> {
        (0u64..1 << degree)
            .map(|bits| {
                let mut signs = vec![Sign::Plus];
                signs.extend((0..degree).rev().map(|k| {
                    if bits >> k & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                }));
                SignPattern { signs }
            })
            .collect()
    }

    pub fn run_string(&self) -> String {
        self.runs().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = PatternError;

    /// Accepts a sign word (`+--++`) or a run list (`1,3,2`).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text.starts_with('+') || text.starts_with('-') {
            let signs = text
                .chars()
                .map(|c| match c {
                    '+' => Ok(Sign::Plus),
                    '-' => Ok(Sign::Minus),
                    _ => Err(PatternError::Syntax(text.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Self::from_signs(signs);
        }
        let runs = text
            .split(',')
            .map(|part| {
                let part = part.trim();
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(PatternError::Syntax(text.to_string()));
                }
                part.parse::<usize>().map_err(|_| PatternError::Syntax(text.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_runs(&runs)
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Numbers of positive and negative roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootCountPair {
    pub pos: usize,
    pub neg: usize,
}

impl RootCountPair {
    pub fn new(pos: usize, neg: usize) -> Self {
        Self { pos, neg }
    }

    pub fn swapped(self) -> Self {
        Self { pos: self.neg, neg: self.pos }
    }
}

impl fmt::Display for RootCountPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pos, self.neg)
    }
}

/// A sign pattern with a compatible `(pos, neg)` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairCouple {
    pattern: SignPattern,
    pair: RootCountPair,
}

impl PairCouple {
    pub fn new(pattern: SignPattern, pair: RootCountPair) -> Result<Self, PatternError> {
        if !pattern.is_compatible(pair) {
            return Err(PatternError::IncompatiblePair {
                pattern: pattern.to_string(),
                pos: pair.pos,
                neg: pair.neg,
            });
        }
        Ok(Self { pattern, pair })
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    pub fn pair(&self) -> RootCountPair {
        self.pair
    }

    pub fn degree(&self) -> usize {
        self.pattern.degree()
    }

    /// `x -> -x`: alternate signs flip, `(pos, neg)` swaps.
    pub fn act_g1(&self) -> Self {
        Self { pattern: self.pattern.alternated(), pair: self.pair.swapped() }
    }

    /// Reversal of the coefficient order; the pair is unchanged.
    pub fn act_g2(&self) -> Self {
        Self { pattern: self.pattern.reversed(), pair: self.pair }
    }

    pub fn orbit(&self) -> Orbit {
        let a = self.act_g1();
        let b = self.act_g2();
        let ab = a.act_g2();
        let mut members = vec![self.clone(), a, b, ab];
        members.sort();
        members.dedup();
        Orbit { members }
    }
}

impl fmt::Display for PairCouple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pattern, self.pair)
    }
}

/// The images of a couple under `{1, g1, g2, g1 g2}`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    members: Vec<PairCouple>,
}

impl Orbit {
    pub fn members(&self) -> &[PairCouple] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Lexicographically least member.
    pub fn canonical(&self) -> &PairCouple {
        &self.members[0]
    }

    pub fn contains(&self, couple: &PairCouple) -> bool {
        self.members.binary_search(couple).is_ok()
    }
}
