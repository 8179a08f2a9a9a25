//! Words over the two-letter alphabet `{a, b}`.
//!
//! A [`Word`] indexes a matrix product: `"aababb"` stands for `A·A·B·A·B·B`.
//! This module holds the purely combinatorial side: rotation classes,
//! mirrors, primitivity, chirality, Lyndon enumeration and letter
//! substitution.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest length accepted by [`chiral_fraction`].
pub const MAX_FRACTION_LEN: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

/// A nonempty word over `{a, b}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Word> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Number of `a`s and `b`s.
    pub fn letter_counts(&self) -> (usize, usize) {
        let na = self.0.iter().filter(|&&l| l == Letter::A).count();
        (na, self.0.len() - na)
    }

    /// Rotation starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Word(v)
    }

    /// The lexicographically least rotation (with `a < b`).
    pub fn canonical(&self) -> Word {
        (0..self.len())
            .map(|k| self.rotate(k))
            .min()
            .expect("nonempty word")
    }

    pub fn mirror(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// Exchange the letters `a` and `b`.
    pub fn swap_letters(&self) -> Word {
        Word(self.0.iter().map(|l| l.swapped()).collect())
    }

    pub fn is_rotation_of(&self, other: &Word) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }

    /// Exponent notation, e.g. `a2bab2`.
    pub fn to_exponent_string(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            out.push(l.as_char());
            if j - i > 1 {
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Parses plain (`aababb`) or exponent (`a2bab2`, `a^2bab^2`) notation.
/// Letters are case-insensitive.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let err = |reason: &str| Error::WordParse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut letters = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let letter = match c.to_ascii_lowercase() {
                'a' => Letter::A,
                'b' => Letter::B,
                _ => return Err(err(&format!("unexpected character {c:?}"))),
            };
            if chars.peek() == Some(&'^') {
                chars.next();
            }
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let count = if digits.is_empty() {
                1
            } else {
                digits.parse::<usize>().map_err(|_| err("bad exponent"))?
            };
            if count == 0 {
                return Err(err("zero exponent"));
            }
            letters.extend(std::iter::repeat_n(letter, count));
        }
        if letters.is_empty() {
            return Err(err("empty word"));
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and constants; panics on malformed input.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

pub fn cyclic_rotations(word: &Word) -> BTreeSet<Word> {
    (0..word.len()).map(|k| word.rotate(k)).collect()
}

pub fn mirror(word: &Word) -> Word {
    word.mirror()
}

/// True iff `word` is not a proper power `u^m`, `m >= 2`.
pub fn is_primitive(word: &Word) -> bool {
    let n = word.len();
    let l = word.letters();
    !(1..n)
        .filter(|p| n.is_multiple_of(*p))
        .any(|p| (p..n).all(|i| l[i] == l[i - p]))
}

/// True iff the mirror of `word` is not one of its rotations.
pub fn is_chiral(word: &Word) -> bool {
    word.mirror().canonical() != word.canonical()
}

/// Both members of a chiral pair as canonical representatives, smaller first.
pub fn chiral_pair(word: &Word) -> (Word, Word) {
    let p = word.canonical();
    let q = word.mirror().canonical();
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// All Lyndon words of length `1..=max_len`, ordered by length then
/// lexicographically.
pub fn lyndon_words(max_len: usize) -> Result<Vec<Word>> {
    if max_len < 1 {
        return Err(Error::InvalidArgument("max_len must be at least 1".into()));
    }
    // Duval's successor: extend periodically, strip trailing b's, bump last.
    let mut out = Vec::new();
    let mut cur = vec![Letter::A];
    loop {
        out.push(Word(cur.clone()));
        let m = cur.len();
        while cur.len() < max_len {
            cur.push(cur[cur.len() - m]);
        }
        while cur.last() == Some(&Letter::B) {
            cur.pop();
        }
        match cur.last_mut() {
            None => break,
            Some(last) => *last = Letter::B,
        }
    }
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// Chiral pairs with length `<= max_len`, as `(w, mirror class)` canonical
/// representatives with the smaller first. Letter exchange is not factored
/// out: `(a2bab2, ...)` and its `a <-> b` image count separately unless they
/// coincide.
pub fn chiral_pairs(max_len: usize) -> Result<Vec<(Word, Word)>> {
    let mut pairs: Vec<(Word, Word)> = lyndon_words(max_len)?
        .into_iter()
        .filter(is_chiral)
        .map(|w| chiral_pair(&w))
        .collect();
    pairs.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.cmp(y)));
    pairs.dedup();
    Ok(pairs)
}

/// Image of `word` under the homomorphism `a -> img_a`, `b -> img_b`.
pub fn substitute(word: &Word, img_a: &Word, img_b: &Word) -> Word {
    let mut out = Vec::new();
    for l in word.letters() {
        match l {
            Letter::A => out.extend_from_slice(img_a.letters()),
            Letter::B => out.extend_from_slice(img_b.letters()),
        }
    }
    Word(out)
}

/// Least rotation of the low `n` bits of `x` (bit `n-1` is the first letter).
fn least_rotation_bits(x: u32, n: usize) -> u32 {
    let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = x;
    let mut r = x;
    for _ in 1..n {
        r = ((r << 1) | (r >> (n - 1))) & mask;
        best = best.min(r);
    }
    best
}

fn reverse_bits(x: u32, n: usize) -> u32 {
    x.reverse_bits() >> (32 - n)
}

fn check_fraction_len(len: usize) -> Result<()> {
    if !(1..=MAX_FRACTION_LEN).contains(&len) {
        return Err(Error::InvalidArgument(format!(
            "length must be in 1..={MAX_FRACTION_LEN}, got {len}"
        )));
    }
    Ok(())
}

/// Fraction of primitive rotation classes (Lyndon words) of length `len`
/// that are chiral. This is the statistic quoted for words of a given
/// length: about 61% at length 10 and 97% at length 20.
pub fn chiral_fraction(len: usize) -> Result<Ratio<u64>> {
    check_fraction_len(len)?;
    let (mut chiral, mut total) = (0u64, 0u64);
    for_each_necklace(len, |bits, period| {
        if period == len {
            total += 1;
            if least_rotation_bits(reverse_bits(bits, len), len) != bits {
                chiral += 1;
            }
        }
    });
    Ok(Ratio::new(chiral, total))
}

/// Fraction of all `2^len` words that are chiral, weighting each rotation
/// class by its size.
pub fn chiral_word_fraction(len: usize) -> Result<Ratio<u64>> {
    check_fraction_len(len)?;
    let mut chiral = 0u64;
    for_each_necklace(len, |bits, period| {
        if least_rotation_bits(reverse_bits(bits, len), len) != bits {
            chiral += period as u64;
        }
    });
    Ok(Ratio::new(chiral, 1u64 << len))
}

/// Iterative FKM enumeration of binary necklaces of length `n`. Each necklace
/// is passed as bits (first letter most significant, `a = 0`) together with
/// its period, which equals the size of its rotation class.
fn for_each_necklace(n: usize, mut f: impl FnMut(u32, usize)) {
    let mut a = vec![0u8; n + 1];
    let pack = |a: &[u8]| a[1..].iter().fold(0u32, |acc, &d| (acc << 1) | d as u32);
    f(0, 1);
    loop {
        let mut i = n;
        while i > 0 && a[i] == 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        a[i] += 1;
        for j in i + 1..=n {
            a[j] = a[j - i];
        }
        if n.is_multiple_of(i) {
            f(pack(&a), i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn rotations() {
        assert_eq!(strs(&cyclic_rotations(&w("ab"))), ["ab", "ba"]);
        assert_eq!(strs(&cyclic_rotations(&w("aa"))), ["aa"]);
        assert_eq!(cyclic_rotations(&w("aababb")).len(), 6);
    }

    #[test]
    fn mirrors() {
        assert_eq!(mirror(&w("aababb")), w("bbabaa"));
        assert_eq!(mirror(&w("aba")), w("aba"));
        assert_eq!(mirror(&w("aaababb")), w("bbabaaa"));
    }

    #[test]
    fn primitivity() {
        assert!(!is_primitive(&w("abab")));
        assert!(is_primitive(&w("aababb")));
        assert!(is_primitive(&w("a")));
        assert!(!is_primitive(&w("aaa")));
        assert!(!is_primitive(&w("abaaba")));
    }

    #[test]
    fn chirality() {
        assert!(is_chiral(&w("aababb")));
        assert!(is_chiral(&w("aaababb")));
        assert!(!is_chiral(&w("ab")));
        assert!(!is_chiral(&w("aabb")));
    }

    #[test]
    fn lyndon_small() {
        let l: Vec<String> = lyndon_words(2).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(l, ["a", "b", "ab"]);
        assert!(lyndon_words(0).is_err());
    }

    #[test]
    fn lyndon_words_are_strict_least_rotations() {
        for w in lyndon_words(8).unwrap() {
            let l = w.letters();
            for k in 1..l.len() {
                assert!(w < w.rotate(k), "{w} not Lyndon");
            }
        }
    }

    #[test]
    fn substitution() {
        assert_eq!(substitute(&w("aababb"), &w("ab"), &w("ba")), w("ababbaabbaba"));
        assert_eq!(substitute(&w("a"), &w("bba"), &w("a")), w("bba"));
        assert_eq!(substitute(&w("ab"), &w("a"), &w("b")), w("ab"));
    }

    #[test]
    fn parse_exponent_notation() {
        assert_eq!(w("a2bab2"), w("aababb"));
        assert_eq!(w("a^3ba^2b"), w("aaabaab"));
        assert_eq!(w("A2BAB2"), w("aababb"));
        assert_eq!(w("aababb").to_exponent_string(), "a2bab2");
        assert!("".parse::<Word>().is_err());
        assert!("abc".parse::<Word>().is_err());
        assert!("a0".parse::<Word>().is_err());
    }

    #[test]
    fn fraction_bounds() {
        assert!(chiral_fraction(0).is_err());
        assert!(chiral_fraction(25).is_err());
        assert_eq!(chiral_fraction(5).unwrap(), Ratio::new(0, 1));
    }

    #[test]
    fn fractions_match_brute_force() {
        for n in 1..=12usize {
            let all: Vec<Word> = (0u32..1 << n)
                .map(|x| {
                    Word((0..n)
                        .rev()
                        .map(|i| if x >> i & 1 == 0 { Letter::A } else { Letter::B })
                        .collect())
                })
                .collect();
            let chiral = all.iter().filter(|w| is_chiral(w)).count() as u64;
            assert_eq!(chiral_word_fraction(n).unwrap(), Ratio::new(chiral, 1 << n), "n = {n}");
            let lyndon: Vec<Word> = lyndon_words(n).unwrap().into_iter().filter(|w| w.len() == n).collect();
            let lc = lyndon.iter().filter(|w| is_chiral(w)).count() as u64;
            assert_eq!(chiral_fraction(n).unwrap(), Ratio::new(lc, lyndon.len() as u64), "n = {n}");
        }
    }

    #[test]
    fn shortest_chiral_words() {
        let pairs = chiral_pairs(6).unwrap();
        assert_eq!(pairs, vec![(w("aababb"), w("aabbab"))]);
    }
}
