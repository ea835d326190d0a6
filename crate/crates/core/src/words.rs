//! Letters, length-three cyclically reduced words and triangular presentations.
//!
//! The alphabet over `n` generators is `g1, G1, g2, G2, ..., gn, Gn`, where
//! `Gk` is the inverse of `gk`. Letters are totally ordered in exactly that
//! order, and words are ordered lexicographically on their letter triples.
//! That order is the canonical order used by enumeration, by the index
//! bijection behind the samplers, and by serialization of sampled
//! presentations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

/// Largest `n` accepted by [`enumerate_words`].
pub const ENUMERATION_GUARD: u32 = 12;

/// The pseudo-random generator behind every sampler in the crate.
///
/// ChaCha with 8 rounds is counter based, so a stream is fully determined by
/// its 64-bit seed and independent of platform word size.
pub type TrialRng = ChaCha8Rng;

pub(crate) fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WordError {
    #[error("generator count must be at least 1")]
    EmptyAlphabet,
    #[error("generator index {generator} outside 1..={n}")]
    GeneratorOutOfRange { generator: u32, n: u32 },
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("duplicate relation {0}")]
    DuplicateRelation(Word),
    #[error("enumeration guard exceeded: n = {n} > {ENUMERATION_GUARD}")]
    EnumerationGuard { n: u32 },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("relation count {t} outside 0..={max}")]
    CountOutOfRange { t: u128, max: u128 },
    #[error("word space for n = {n} is too large to index")]
    SpaceTooLarge { n: u32 },
}

/// A generator or the inverse of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u32,
    inverted: bool,
}

impl Letter {
    /// # Panics
    /// Panics if `generator` is zero; generators are numbered from 1.
    pub fn new(generator: u32, inverted: bool) -> Self {
        assert!(generator >= 1, "generators are numbered from 1");
        Self {
            generator,
            inverted,
        }
    }

    pub fn gen(generator: u32) -> Self {
        Self::new(generator, false)
    }

    pub fn inv(generator: u32) -> Self {
        Self::new(generator, true)
    }

    pub fn generator(self) -> u32 {
        self.generator
    }

    pub fn is_inverted(self) -> bool {
        self.inverted
    }

    pub fn inverse(self) -> Self {
        Self {
            generator: self.generator,
            inverted: !self.inverted,
        }
    }

    /// Position of the letter in the canonical alphabet order, starting at 0.
    ///
    /// This is also the link-graph vertex of the letter: `gk -> 2k-2`,
    /// `Gk -> 2k-1`.
    pub fn code(self) -> usize {
        2 * (self.generator as usize - 1) + usize::from(self.inverted)
    }

    pub fn from_code(code: usize) -> Self {
        Self {
            generator: (code / 2) as u32 + 1,
            inverted: code % 2 == 1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.inverted { 'G' } else { 'g' };
        write!(f, "{c}{}", self.generator)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed letter token {0:?}")]
pub struct LetterParseError(pub String);

impl FromStr for Letter {
    type Err = LetterParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LetterParseError(s.to_owned());
        let mut chars = s.chars();
        let inverted = match chars.next() {
            Some('g') => false,
            Some('G') => true,
            _ => return Err(err()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let generator: u32 = digits.parse().map_err(|_| err())?;
        // g0 parses as a letter; the presentation range check rejects it.
        Ok(Self {
            generator,
            inverted,
        })
    }
}

/// True iff no two cyclically adjacent letters of `(a, b, c)` are mutually
/// inverse, including the wrap-around pair `(c, a)`.
pub fn is_cyclically_reduced(letters: [Letter; 3]) -> bool {
    let [a, b, c] = letters;
    b != a.inverse() && c != b.inverse() && a != c.inverse()
}

/// A cyclically reduced word of length three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word([Letter; 3]);

impl Word {
    pub fn new(a: Letter, b: Letter, c: Letter) -> Result<Self, WordError> {
        Self::from_letters([a, b, c])
    }

    pub fn from_letters(letters: [Letter; 3]) -> Result<Self, WordError> {
        if is_cyclically_reduced(letters) {
            Ok(Self(letters))
        } else {
            let [a, b, c] = letters;
            Err(WordError::NotCyclicallyReduced(format!("{a} {b} {c}")))
        }
    }

    pub fn letters(&self) -> [Letter; 3] {
        self.0
    }

    /// Number of letters of the word equal to `g` or `G` for the generator.
    pub fn occurrences(&self, generator: u32) -> usize {
        self.0.iter().filter(|l| l.generator == generator).count()
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.generator).max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a} {b} {c}")
    }
}

/// Number of cyclically reduced length-3 words over `n` generators:
/// `8n^3 - 12n^2 + 6n`.
pub fn count_words(n: u64) -> u128 {
    let n = u128::from(n);
    // 2n first letters, each followed by (2n-1) + (2n-2)^2 completions.
    if n == 0 {
        return 0;
    }
    2 * n * per_first_letter(n)
}

fn per_first_letter(n: u128) -> u128 {
    let l = 2 * n;
    (l - 1) + (l - 2) * (l - 2)
}

/// Number of words containing a fixed generator or its inverse:
/// `48 C(n-1, 2) + 24 (n-1) + 2`.
pub fn count_words_containing(n: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    let m = u128::from(n) - 1;
    48 * (m * m.saturating_sub(1) / 2) + 24 * m + 2
}

/// Word counts split by the number of distinct generators in the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeCounts {
    /// `aaa` and its inverse: `2n`.
    pub one_generator: u128,
    /// Two distinct generators: `12 n (n-1)`.
    pub two_generators: u128,
    /// Three distinct generators: `48 C(n, 3)`.
    pub three_generators: u128,
}

pub fn count_words_by_type(n: u64) -> TypeCounts {
    let n = u128::from(n);
    TypeCounts {
        one_generator: 2 * n,
        two_generators: 12 * n * n.saturating_sub(1),
        three_generators: 8 * n * n.saturating_sub(1) * n.saturating_sub(2),
    }
}

/// Canonical index bijection between `0..count_words(n)` and the words over
/// `n` generators, following the lexicographic letter order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordSpace {
    n: u32,
    per_first: u64,
    size: u64,
}

impl WordSpace {
    pub fn new(n: u32) -> Result<Self, WordError> {
        if n == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        let size =
            u64::try_from(count_words(n.into())).map_err(|_| WordError::SpaceTooLarge { n })?;
        let per_first = per_first_letter(n.into()) as u64;
        Ok(Self { n, per_first, size })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    fn alphabet(&self) -> usize {
        2 * self.n as usize
    }

    /// # Panics
    /// Panics if `index >= self.size()`.
    pub fn decode(&self, index: u64) -> Word {
        assert!(index < self.size, "word index {index} out of range");
        let a = Letter::from_code((index / self.per_first) as usize);
        let mut rest = index % self.per_first;
        let l = self.alphabet() as u64;
        for code in 0..self.alphabet() {
            let b = Letter::from_code(code);
            if b == a.inverse() {
                continue;
            }
            let completions = if b == a { l - 1 } else { l - 2 };
            if rest < completions {
                let c = (0..self.alphabet())
                    .map(Letter::from_code)
                    .filter(|&c| c != b.inverse() && c != a.inverse())
                    .nth(rest as usize)
                    .expect("completion index within range");
                return Word([a, b, c]);
            }
            rest -= completions;
        }
        unreachable!("index decomposition exhausted the alphabet")
    }

    pub fn encode(&self, word: &Word) -> Result<u64, WordError> {
        let [a, b, c] = word.0;
        if word.max_generator() > self.n {
            return Err(WordError::GeneratorOutOfRange {
                generator: word.max_generator(),
                n: self.n,
            });
        }
        let l = self.alphabet() as u64;
        let mut index = a.code() as u64 * self.per_first;
        for code in 0..b.code() {
            let x = Letter::from_code(code);
            if x == a.inverse() {
                continue;
            }
            index += if x == a { l - 1 } else { l - 2 };
        }
        index += (0..c.code())
            .map(Letter::from_code)
            .filter(|&x| x != b.inverse() && x != a.inverse())
            .count() as u64;
        Ok(index)
    }
}

/// Every cyclically reduced word over `n` generators in canonical order.
pub fn enumerate_words(n: u32) -> Result<impl Iterator<Item = Word>, WordError> {
    if n == 0 {
        return Err(WordError::EmptyAlphabet);
    }
    if n > ENUMERATION_GUARD {
        return Err(WordError::EnumerationGuard { n });
    }
    let l = 2 * n as usize;
    Ok((0..l * l * l).filter_map(move |i| {
        let letters = [i / (l * l), (i / l) % l, i % l].map(Letter::from_code);
        Word::from_letters(letters).ok()
    }))
}

/// How a sampled presentation was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Binomial { p: f64 },
    Uniform { t: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub model: Model,
    pub seed: u64,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            Model::Binomial { p } => write!(f, "binomial p={p:?} seed={}", self.seed),
            Model::Uniform { t } => write!(f, "uniform t={t} seed={}", self.seed),
        }
    }
}

impl FromStr for Provenance {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or(())?;
        let param = parts.next().ok_or(())?;
        let seed = parts
            .next()
            .and_then(|s| s.strip_prefix("seed="))
            .ok_or(())?;
        if parts.next().is_some() {
            return Err(());
        }
        let seed = seed.parse().map_err(|_| ())?;
        let model = match kind {
            "binomial" => Model::Binomial {
                p: param
                    .strip_prefix("p=")
                    .ok_or(())?
                    .parse()
                    .map_err(|_| ())?,
            },
            "uniform" => Model::Uniform {
                t: param
                    .strip_prefix("t=")
                    .ok_or(())?
                    .parse()
                    .map_err(|_| ())?,
            },
            _ => return Err(()),
        };
        Ok(Self { model, seed })
    }
}

/// A triangular presentation `<g1..gn | relations>`.
///
/// Relations keep the order they were given in; a relation's id is its
/// position in that order. Samplers emit canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    n: u32,
    relations: Vec<Word>,
    provenance: Option<Provenance>,
}

impl Presentation {
    pub fn new(n: u32, relations: Vec<Word>) -> Result<Self, WordError> {
        if n == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        let mut seen = std::collections::HashSet::with_capacity(relations.len());
        for w in &relations {
            if let Some(generator) = w.0.iter().map(|l| l.generator).find(|&g| g == 0 || g > n) {
                return Err(WordError::GeneratorOutOfRange { generator, n });
            }
            if !seen.insert(*w) {
                return Err(WordError::DuplicateRelation(*w));
            }
        }
        Ok(Self {
            n,
            relations,
            provenance: None,
        })
    }

    pub fn empty(n: u32) -> Result<Self, WordError> {
        Self::new(n, Vec::new())
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Text form; see [`parse_presentation`] for the grammar.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        if let Some(p) = &self.provenance {
            writeln!(f, "{PROVENANCE_PREFIX}{p}")?;
        }
        for w in &self.relations {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

const PROVENANCE_PREFIX: &str = "# source: ";

/// Sample `Γ(n, p)`: every word is kept independently with probability `p`.
///
/// The relation count is drawn from `Binomial(count_words(n), p)` and that
/// many distinct indices are then chosen uniformly, which has the same law
/// as one coin flip per word.
pub fn sample_binomial(n: u32, p: f64, seed: u64) -> Result<Presentation, WordError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WordError::InvalidProbability(p));
    }
    let space = WordSpace::new(n)?;
    let mut rng = rng_from_seed(seed);
    let t = Binomial::new(space.size(), p)
        .map_err(|_| WordError::InvalidProbability(p))?
        .sample(&mut rng);
    let pres = sample_indices(&space, t, &mut rng)?;
    Ok(pres.with_provenance(Provenance {
        model: Model::Binomial { p },
        seed,
    }))
}

/// Sample `Γ(n, t)`: a uniformly random `t`-subset of the word space.
pub fn sample_uniform(n: u32, t: u64, seed: u64) -> Result<Presentation, WordError> {
    let space = WordSpace::new(n)?;
    if t > space.size() {
        return Err(WordError::CountOutOfRange {
            t: t.into(),
            max: space.size().into(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let pres = sample_indices(&space, t, &mut rng)?;
    Ok(pres.with_provenance(Provenance {
        model: Model::Uniform { t },
        seed,
    }))
}

fn sample_indices(
    space: &WordSpace,
    t: u64,
    rng: &mut TrialRng,
) -> Result<Presentation, WordError> {
    let too_large = || WordError::SpaceTooLarge { n: space.n() };
    let length = usize::try_from(space.size()).map_err(|_| too_large())?;
    let amount = usize::try_from(t).map_err(|_| too_large())?;
    let mut picked: Vec<u64> = index::sample(rng, length, amount)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    picked.sort_unstable();
    let relations = picked.into_iter().map(|i| space.decode(i)).collect();
    Ok(Presentation {
        n: space.n(),
        relations,
        provenance: None,
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: expected header `n=<int>` with n >= 1, found {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("missing `n=<int>` header")]
    MissingHeader,
    #[error("line {line}: malformed token {token:?}")]
    MalformedToken { line: usize, token: String },
    #[error("line {line}: expected 3 letters, found {found}")]
    WrongLength { line: usize, found: usize },
    #[error("line {line}: generator {generator} outside 1..={n}")]
    IndexOutOfRange { line: usize, generator: u32, n: u32 },
    #[error("line {line}: {word} is not cyclically reduced")]
    NotCyclicallyReduced { line: usize, word: String },
    #[error("line {line}: duplicate of relation on line {first_line}")]
    DuplicateRelation { line: usize, first_line: usize },
    #[error("line {line}: malformed source record {text:?}")]
    BadProvenance { line: usize, text: String },
}

/// Parse the presentation text format.
///
/// ```text
/// n=<int>
/// # comment lines start with '#'
/// g1 G2 g3
/// ```
///
/// Tokens are `g<k>` (generator `k`) or `G<k>` (its inverse) with
/// `1 <= k <= n`. A `# source: ...` comment written by the samplers is read
/// back as the presentation's provenance.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut n: Option<u32> = None;
    let mut relations = Vec::new();
    let mut first_seen: HashMap<Word, usize> = HashMap::new();
    let mut provenance = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if let Some(record) = trimmed.strip_prefix(PROVENANCE_PREFIX.trim_end()) {
                let record = record.trim();
                provenance =
                    Some(
                        record
                            .parse::<Provenance>()
                            .map_err(|_| ParseError::BadProvenance {
                                line,
                                text: record.to_owned(),
                            })?,
                    );
            }
            continue;
        }
        let Some(n) = n else {
            let parsed = trimmed
                .strip_prefix("n=")
                .and_then(|v| v.trim().parse::<u32>().ok())
                .filter(|&v| v >= 1);
            match parsed {
                Some(v) => n = Some(v),
                None => {
                    return Err(ParseError::BadHeader {
                        line,
                        text: trimmed.to_owned(),
                    })
                }
            }
            continue;
        };

        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let mut letters = Vec::with_capacity(3);
        for tok in &tokens {
            let letter: Letter = tok.parse().map_err(|_| ParseError::MalformedToken {
                line,
                token: (*tok).to_owned(),
            })?;
            if letter.generator == 0 || letter.generator > n {
                return Err(ParseError::IndexOutOfRange {
                    line,
                    generator: letter.generator,
                    n,
                });
            }
            letters.push(letter);
        }
        let letters: [Letter; 3] = letters.try_into().map_err(|_| ParseError::WrongLength {
            line,
            found: tokens.len(),
        })?;
        let word = Word::from_letters(letters).map_err(|_| ParseError::NotCyclicallyReduced {
            line,
            word: tokens.join(" "),
        })?;
        if let Some(&first_line) = first_seen.get(&word) {
            return Err(ParseError::DuplicateRelation { line, first_line });
        }
        first_seen.insert(word, line);
        relations.push(word);
    }

    let n = n.ok_or(ParseError::MissingHeader)?;
    Ok(Presentation {
        n,
        relations,
        provenance,
    })
}

impl FromStr for Presentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s)
    }
}

pub fn serialize_presentation(p: &Presentation) -> String {
    p.serialize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        let l: Vec<Letter> = s.split_whitespace().map(|t| t.parse().unwrap()).collect();
        Word::new(l[0], l[1], l[2]).unwrap()
    }

    /// Brute force over all (2n)^3 triples, independent of the closed forms.
    fn brute_count(n: u32) -> u128 {
        let l = 2 * n as usize;
        let mut count = 0;
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    let t = [a, b, c].map(Letter::from_code);
                    if t[1] != t[0].inverse() && t[2] != t[1].inverse() && t[0] != t[2].inverse() {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert!(is_cyclically_reduced([Letter::gen(1); 3]));
        assert!(!is_cyclically_reduced([
            Letter::gen(1),
            Letter::inv(1),
            Letter::gen(2)
        ]));
        assert!(!is_cyclically_reduced([
            Letter::gen(1),
            Letter::gen(2),
            Letter::inv(1)
        ]));
    }

    #[test]
    fn counts_match_brute_force() {
        let expected = [2u128, 28, 126, 344];
        for n in 1..=4u32 {
            assert_eq!(brute_count(n), expected[n as usize - 1]);
            assert_eq!(count_words(n.into()), expected[n as usize - 1]);
            assert_eq!(
                enumerate_words(n).unwrap().count() as u128,
                expected[n as usize - 1]
            );
        }
        assert_eq!(count_words(10), 6860);
    }

    #[test]
    fn containing_counts() {
        assert_eq!(count_words_containing(2), 26);
        assert_eq!(count_words_containing(3), 98);
        for n in 2..=4u32 {
            let direct = enumerate_words(n)
                .unwrap()
                .filter(|w| w.occurrences(1) > 0)
                .count() as u128;
            assert_eq!(direct, count_words_containing(n.into()));
            assert_eq!(
                count_words(n.into()) - count_words(u64::from(n) - 1),
                direct
            );
        }
    }

    #[test]
    fn type_counts_partition_the_space() {
        for n in 1..=5u32 {
            let tc = count_words_by_type(n.into());
            let mut by_distinct = [0u128; 4];
            for word in enumerate_words(n).unwrap() {
                let mut g: Vec<u32> = word.letters().iter().map(|l| l.generator()).collect();
                g.sort_unstable();
                g.dedup();
                by_distinct[g.len()] += 1;
            }
            assert_eq!(tc.one_generator, by_distinct[1]);
            assert_eq!(tc.two_generators, by_distinct[2]);
            assert_eq!(tc.three_generators, by_distinct[3]);
        }
    }

    #[test]
    fn enumeration_order_and_guard() {
        let all: Vec<Word> = enumerate_words(1).unwrap().collect();
        assert_eq!(all, vec![w("g1 g1 g1"), w("G1 G1 G1")]);
        assert_eq!(enumerate_words(2).unwrap().next(), Some(w("g1 g1 g1")));
        assert!(matches!(
            enumerate_words(13),
            Err(WordError::EnumerationGuard { n: 13 })
        ));
        let v: Vec<Word> = enumerate_words(3).unwrap().collect();
        assert!(v.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn index_bijection() {
        for n in 1..=4u32 {
            let space = WordSpace::new(n).unwrap();
            for (i, word) in enumerate_words(n).unwrap().enumerate() {
                assert_eq!(space.decode(i as u64), word);
                assert_eq!(space.encode(&word).unwrap(), i as u64);
            }
        }
    }

    #[test]
    fn wide_counts_do_not_overflow() {
        let n: u128 = 1_000_000;
        assert_eq!(count_words(1_000_000), 8 * n * n * n - 12 * n * n + 6 * n);
        assert!(WordSpace::new(1_000_000).is_ok());
    }

    #[test]
    fn sampler_edges() {
        assert!(sample_binomial(3, 0.0, 1).unwrap().is_empty());
        let full = sample_binomial(3, 1.0, 1).unwrap();
        assert_eq!(
            full.relations(),
            enumerate_words(3).unwrap().collect::<Vec<_>>().as_slice()
        );
        assert!(matches!(
            sample_binomial(3, 1.5, 1),
            Err(WordError::InvalidProbability(_))
        ));
        assert!(sample_uniform(3, 0, 9).unwrap().is_empty());
        assert_eq!(sample_uniform(2, 28, 9).unwrap().len(), 28);
        assert!(matches!(
            sample_uniform(2, 29, 9),
            Err(WordError::CountOutOfRange { .. })
        ));
        let u = sample_uniform(4, 17, 5).unwrap();
        assert_eq!(u.len(), 17);
        assert!(u.relations().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_binomial(20, 0.001, 77).unwrap();
        let b = sample_binomial(20, 0.001, 77).unwrap();
        assert_eq!(a.serialize(), b.serialize());
        assert_ne!(
            a.serialize(),
            sample_binomial(20, 0.001, 78).unwrap().serialize()
        );
    }

    #[test]
    fn parse_examples() {
        let p = parse_presentation("n=2\ng1 g1 g2\n").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.relations(), &[w("g1 g1 g2")]);
        assert_eq!(p.serialize(), "n=2\ng1 g1 g2\n");

        let err = parse_presentation("n=2\ng1 G1 g2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::NotCyclicallyReduced { line: 2, .. }
        ));
        let err = parse_presentation("n=2\ng1 x1 g2\n").unwrap_err();
        assert!(matches!(err, ParseError::MalformedToken { line: 2, .. }));
        let err = parse_presentation("n=2\ng1 g3 g2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::IndexOutOfRange { generator: 3, .. }
        ));
        let err = parse_presentation("n=2\ng1 g0 g2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::IndexOutOfRange { generator: 0, .. }
        ));
        let err = parse_presentation("n=2\ng1 g1 g2\n\ng1 g1 g2\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateRelation {
                line: 4,
                first_line: 2
            }
        );
        let err = parse_presentation("n=2\ng1 g1\n").unwrap_err();
        assert_eq!(err, ParseError::WrongLength { line: 2, found: 2 });
        assert_eq!(
            parse_presentation("# nothing\n").unwrap_err(),
            ParseError::MissingHeader
        );
        assert!(matches!(
            parse_presentation("n=0\n"),
            Err(ParseError::BadHeader { .. })
        ));
    }

    #[test]
    fn provenance_round_trips() {
        let p = sample_binomial(6, 0.01, 42).unwrap();
        let text = p.serialize();
        assert!(text.contains("# source: binomial p=0.01 seed=42"));
        let back = parse_presentation(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.serialize(), text);
        assert!(matches!(
            parse_presentation("n=2\n# source: binomial q=1 seed=2\n"),
            Err(ParseError::BadProvenance { line: 2, .. })
        ));
    }
}
