//! Orders of moduli of the roots of hyperbolic polynomials.
//!
//! An order is a `P`/`N` word listed by increasing modulus: `P` for a
//! positive root, `N` for a negative one. The bracket form `[u_1, ..., u_{c+1}]`
//! counts the `N`s before the first `P`, between consecutive `P`s, and after
//! the last `P`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::signs::{Sign, SignPattern};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuliError {
    #[error("root {index} is zero")]
    ZeroRoot { index: usize },
    #[error("two roots share the modulus {modulus}")]
    TiedModuli { modulus: f64 },
    #[error("order {order} is not compatible with {pattern}")]
    Incompatible { pattern: String, order: String },
    #[error("cannot parse order of moduli {0:?}: expected a P/N word or [u1,u2,...]")]
    Syntax(String),
    #[error("order of moduli is empty")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    P,
    N,
}

impl Letter {
    pub fn of_root(root: f64) -> Self {
        if root > 0.0 {
            Letter::P
        } else {
            Letter::N
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::P => "P",
            Letter::N => "N",
        })
    }
}

impl FromStr for Letter {
    type Err = ModuliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "P" | "p" => Ok(Letter::P),
            "N" | "n" => Ok(Letter::N),
            other => Err(ModuliError::Syntax(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuliOrder {
    word: Vec<Letter>,
}

impl ModuliOrder {
    pub fn from_word(word: Vec<Letter>) -> Result<Self, ModuliError> {
        if word.is_empty() {
            return Err(ModuliError::Empty);
        }
        Ok(Self { word })
    }

    pub fn from_bracket(bracket: &[usize]) -> Result<Self, ModuliError> {
        if bracket.is_empty() {
            return Err(ModuliError::Empty);
        }
        let mut word = Vec::new();
        for (k, &u) in bracket.iter().enumerate() {
            if k > 0 {
                word.push(Letter::P);
            }
            word.extend(std::iter::repeat(Letter::N).take(u));
        }
        Self::from_word(word)
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.word.iter().filter(|l| **l == Letter::P).count()
    }

    pub fn negatives(&self) -> usize {
        self.word.len() - self.positives()
    }

    pub fn bracket(&self) -> Vec<usize> {
        let mut bracket = vec![0];
        for letter in &self.word {
            match letter {
                Letter::P => bracket.push(0),
                Letter::N => *bracket.last_mut().expect("bracket starts non-empty") += 1,
            }
        }
        bracket
    }

    pub fn bracket_string(&self) -> String {
        let parts: Vec<String> = self.bracket().iter().map(|u| u.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|l| l.to_string()).collect()
    }

    /// `letter` placed at the small-modulus end.
    pub fn prepended(&self, letter: Letter) -> Self {
        let mut word = Vec::with_capacity(self.word.len() + 1);
        word.push(letter);
        word.extend_from_slice(&self.word);
        Self { word }
    }

    /// `letter` placed at the large-modulus end.
    pub fn appended(&self, letter: Letter) -> Self {
        let mut word = self.word.clone();
        word.push(letter);
        Self { word }
    }
}

impl fmt::Display for ModuliOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

impl FromStr for ModuliOrder {
    type Err = ModuliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        let syntax = || ModuliError::Syntax(text.to_string());
        if let Some(inner) = text.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(syntax)?;
            let bracket = inner
                .split(',')
                .map(|part| part.trim().parse::<usize>().map_err(|_| syntax()))
                .collect::<Result<Vec<_>, _>>()?;
            return Self::from_bracket(&bracket);
        }
        let word = text
            .chars()
            .map(|c| match c {
                'P' => Ok(Letter::P),
                'N' => Ok(Letter::N),
                _ => Err(syntax()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_word(word)
    }
}

impl Serialize for ModuliOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModuliOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Reads the order of moduli of a list of nonzero real roots.
pub fn order_from_roots(real_roots: &[f64]) -> Result<ModuliOrder, ModuliError> {
    if let Some(index) = real_roots.iter().position(|r| *r == 0.0) {
        return Err(ModuliError::ZeroRoot { index });
    }
    let mut sorted = real_roots.to_vec();
    sorted.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    if let Some(w) = sorted.windows(2).find(|w| w[0].abs() == w[1].abs()) {
        return Err(ModuliError::TiedModuli { modulus: w[0].abs() });
    }
    ModuliOrder::from_word(sorted.into_iter().map(Letter::of_root).collect())
}

/// All `C(c + p, c)` words with `c` letters `P` and `p` letters `N`, in
/// lexicographic order with `P < N`.
pub fn enumerate_orders(positives: usize, negatives: usize) -> Vec<ModuliOrder> {
    fn rec(p_left: usize, n_left: usize, word: &mut Vec<Letter>, out: &mut Vec<ModuliOrder>) {
        if p_left == 0 && n_left == 0 {
            out.push(ModuliOrder { word: word.clone() });
            return;
        }
        if p_left > 0 {
            word.push(Letter::P);
            rec(p_left - 1, n_left, word, out);
            word.pop();
        }
        if n_left > 0 {
            word.push(Letter::N);
            rec(p_left, n_left - 1, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    if positives + negatives > 0 {
        rec(positives, negatives, &mut Vec::new(), &mut out);
    }
    out
}

/// `#P = c` and `#N = p` for the pattern's Descartes pair.
pub fn is_compatible(pattern: &SignPattern, order: &ModuliOrder) -> bool {
    let dp = pattern.descartes_pair();
    order.positives() == dp.changes && order.negatives() == dp.preservations
}

/// A sign pattern paired with a compatible order of moduli.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModuliCouple {
    pattern: SignPattern,
    order: ModuliOrder,
}

impl ModuliCouple {
    pub fn new(pattern: SignPattern, order: ModuliOrder) -> Result<Self, ModuliError> {
        if !is_compatible(&pattern, &order) {
            return Err(ModuliError::Incompatible {
                pattern: pattern.to_string(),
                order: order.to_string(),
            });
        }
        Ok(Self { pattern, order })
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    pub fn order(&self) -> &ModuliOrder {
        &self.order
    }

    pub fn degree(&self) -> usize {
        self.pattern.degree()
    }
}

impl fmt::Display for ModuliCouple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pattern, self.order.bracket_string())
    }
}

/// Result of the subdominant-coefficient test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Forcing {
    /// The order forces `a_{d-1}` to have this sign, against the pattern.
    /// This proves the couple is not realizable.
    Conflict(ForcedSign),
    /// No conclusion.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForcedSign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl fmt::Display for ForcedSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForcedSign::Positive => "+",
            ForcedSign::Negative => "-",
        })
    }
}

/// Whether every letter `small` can be matched injectively to a strictly
/// larger-modulus letter `large`. Scans from the largest modulus down,
/// keeping a count of unmatched `large` letters.
fn dominated(word: &[Letter], small: Letter) -> bool {
    let mut available = 0usize;
    for &letter in word.iter().rev() {
        if letter == small {
            if available == 0 {
                return false;
            }
            available -= 1;
        } else {
            available += 1;
        }
    }
    true
}

/// `a_{d-1} = sum of negative-root moduli - sum of positive roots`. If every
/// positive root is matched to a strictly larger negative-root modulus the
/// coefficient is positive, and symmetrically negative. A forced sign that
/// disagrees with the pattern's second sign rules the couple out.
pub fn forcing_test(pattern: &SignPattern, order: &ModuliOrder) -> Result<Forcing, ModuliError> {
    if !is_compatible(pattern, order) {
        return Err(ModuliError::Incompatible {
            pattern: pattern.to_string(),
            order: order.to_string(),
        });
    }
    let subdominant = pattern.signs()[1];
    let word = order.word();
    if subdominant == Sign::Minus && order.negatives() > 0 && dominated(word, Letter::P) {
        return Ok(Forcing::Conflict(ForcedSign::Positive));
    }
    if subdominant == Sign::Plus && order.positives() > 0 && dominated(word, Letter::N) {
        return Ok(Forcing::Conflict(ForcedSign::Negative));
    }
    Ok(Forcing::Inconclusive)
}
