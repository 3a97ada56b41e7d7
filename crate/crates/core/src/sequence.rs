//! The ±1 automatic sequence `(a_n)` and its four equivalent definitions.
//!
//! * digit formula: `a_n = (-1)^{A_n}`, with `A_n` the number of links of `n`
//!   (see [`LINK_SET`]);
//! * digit recurrence: `a_{4m+c} = a_m * W4[m mod 4][c]`, used by [`prefix`];
//! * block doubling: `ABCD -> A B C D A -B C -D A B -C -D A -B -C D`;
//! * substitution fixed points of [`SubstitutionRule::s0`] and
//!   [`SubstitutionRule::s1`], with `S1 ∘ S1 = S0`.
//!
//! Digit words are stored least-significant digit first. A link is the pair
//! `(n_{j+1}, n_j)`, higher digit first. With that orientation the
//! two-digit indices `n_0 + 4 n_1` that carry a link are exactly
//! `{5, 7, 10, 11, 13, 14}`, the indices below 16 where `a_n = -1`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::WALSH4;
use crate::error::{invalid, Result};

/// One term of the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(count: u32) -> Self {
        if count % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Accepts only `+1` and `-1`.
    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_i64())
    }
}

/// Sign of row `row` (taken mod 4), column `col` of the order-4 Walsh matrix.
pub fn walsh_sign(row: usize, col: usize) -> Sign {
    if WALSH4[row % 4][col] > 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Adjacent digit pairs `(higher, lower)` that flip the sign.
pub const LINK_SET: [(u8, u8); 6] = [(1, 1), (1, 3), (2, 2), (2, 3), (3, 1), (3, 2)];

fn is_link(higher: u8, lower: u8) -> bool {
    LINK_SET.contains(&(higher, lower))
}

/// Base-4 digits of a nonnegative integer, least-significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digit4Word(Vec<u8>);

impl Digit4Word {
    pub fn from_u64(mut n: u64) -> Self {
        if n == 0 {
            return Digit4Word(vec![0]);
        }
        let mut digits = Vec::with_capacity(32);
        while n > 0 {
            digits.push((n % 4) as u8);
            n /= 4;
        }
        Digit4Word(digits)
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return Digit4Word(vec![0]);
        }
        // 4 = 2^2, so each base-4 digit is a pair of bits.
        let digits = n.to_radix_le(4);
        Digit4Word(digits)
    }

    /// Builds a word from digits written most-significant first, as they are
    /// usually printed.
    pub fn from_msd_first(digits: &[u8]) -> Result<Self> {
        if digits.is_empty() {
            return invalid("empty digit word");
        }
        if let Some(d) = digits.iter().find(|&&d| d > 3) {
            return invalid(format!("digit {d} is not a base-4 digit"));
        }
        let mut le: Vec<u8> = digits.iter().rev().copied().collect();
        while le.len() > 1 && *le.last().unwrap() == 0 {
            le.pop();
        }
        Ok(Digit4Word(le))
    }

    /// Least-significant digit first.
    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn to_msd_first(&self) -> Vec<u8> {
        self.0.iter().rev().copied().collect()
    }

    /// `None` when the value does not fit in 64 bits.
    pub fn value(&self) -> Option<u64> {
        if self.0.len() > 32 {
            return None;
        }
        Some(self.0.iter().rev().fold(0u64, |acc, &d| acc * 4 + d as u64))
    }

    pub fn value_big(&self) -> BigUint {
        BigUint::from_radix_le(&self.0, 4).unwrap_or_default()
    }

    /// Number of adjacent pairs `(n_{j+1}, n_j)` in [`LINK_SET`].
    pub fn link_count(&self) -> u32 {
        self.0
            .windows(2)
            .filter(|w| is_link(w[1], w[0]))
            .count() as u32
    }

    pub fn sign(&self) -> Sign {
        Sign::from_parity(self.link_count())
    }
}

impl fmt::Display for Digit4Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.0.iter().rev() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn digits4(n: u64) -> Digit4Word {
    Digit4Word::from_u64(n)
}

pub fn link_count(n: u64) -> u32 {
    // Same scan as `Digit4Word::link_count` without allocating.
    let mut count = 0;
    let mut rest = n;
    while rest >= 4 {
        let lower = (rest % 4) as u8;
        let higher = ((rest / 4) % 4) as u8;
        if is_link(higher, lower) {
            count += 1;
        }
        rest /= 4;
    }
    count
}

/// `a_n` by the digit formula.
pub fn sign_at(n: u64) -> Sign {
    Sign::from_parity(link_count(n))
}

pub fn sign_at_big(n: &BigUint) -> Sign {
    Digit4Word::from_biguint(n).sign()
}

/// First `len` terms, by the recurrence `a_{4m+c} = a_m * W4[m mod 4][c]`.
pub fn prefix(len: usize) -> Vec<Sign> {
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let term = if i == 0 {
            Sign::Plus
        } else {
            let m = i / 4;
            out[m] * walsh_sign(m, i % 4)
        };
        out.push(term);
    }
    out
}

/// One step of block doubling: a prefix of length `4^j` becomes the prefix
/// of length `4^{j+1}`.
///
/// A word of length 1 is accepted; it is treated as the first row of the
/// rule and yields four copies of itself.
pub fn block_extend(word: &[Sign]) -> Result<Vec<Sign>> {
    let len = word.len();
    if len == 0 || !is_power_of_four(len) {
        return invalid(format!("block_extend needs a length that is a power of 4, got {len}"));
    }
    if len == 1 {
        return Ok((0..4).map(|c| word[0] * walsh_sign(0, c)).collect());
    }
    let quarter = len / 4;
    let mut out = Vec::with_capacity(4 * len);
    for row in 0..4 {
        for col in 0..4 {
            let sign = walsh_sign(row, col);
            out.extend(word[col * quarter..(col + 1) * quarter].iter().map(|&s| s * sign));
        }
    }
    Ok(out)
}

pub(crate) fn is_power_of_four(n: usize) -> bool {
    n.is_power_of_two() && n.trailing_zeros() % 2 == 0
}

/// The four bases of the eight-letter alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A,
    B,
    C,
    D,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::B, Base::C, Base::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Base {
        Base::ALL[i % 4]
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::A => "a",
            Base::B => "b",
            Base::C => "c",
            Base::D => "d",
        })
    }
}

/// A signed letter such as `+a` or `-c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub sign: Sign,
    pub base: Base,
}

impl Letter {
    pub const fn new(sign: Sign, base: Base) -> Self {
        Letter { sign, base }
    }

    pub fn plus(base: Base) -> Self {
        Letter::new(Sign::Plus, base)
    }

    /// All eight letters, positive ones first.
    pub fn all() -> [Letter; 8] {
        let mut out = [Letter::plus(Base::A); 8];
        for (i, slot) in out.iter_mut().enumerate() {
            let sign = if i < 4 { Sign::Plus } else { Sign::Minus };
            *slot = Letter::new(sign, Base::from_index(i));
        }
        out
    }

    fn slot(self) -> usize {
        self.base.index() + if self.sign == Sign::Plus { 0 } else { 4 }
    }
}

impl Neg for Letter {
    type Output = Letter;
    fn neg(self) -> Letter {
        Letter::new(-self.sign, self.base)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.base)
    }
}

/// A sign-equivariant substitution on the eight letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionRule {
    images: [Vec<Letter>; 8],
}

impl SubstitutionRule {
    /// Builds a rule from the images of `+a, +b, +c, +d`; images of negative
    /// letters are the term-wise negations.
    pub fn from_positive(images: [Vec<Letter>; 4]) -> Self {
        let negated: Vec<Vec<Letter>> = images
            .iter()
            .map(|w| w.iter().map(|&l| -l).collect())
            .collect();
        let [a, b, c, d] = images;
        let [na, nb, nc, nd]: [Vec<Letter>; 4] = negated.try_into().expect("four images");
        SubstitutionRule { images: [a, b, c, d, na, nb, nc, nd] }
    }

    /// Builds a rule from an explicit table in the order of [`Letter::all`],
    /// rejecting tables that are not sign-equivariant.
    pub fn from_table(images: [Vec<Letter>; 8]) -> Result<Self> {
        for i in 0..4 {
            let neg: Vec<Letter> = images[i].iter().map(|&l| -l).collect();
            if neg != images[i + 4] {
                return invalid(format!(
                    "image of {} is not the negation of the image of {}",
                    Letter::all()[i + 4],
                    Letter::all()[i]
                ));
            }
        }
        Ok(SubstitutionRule { images })
    }

    /// `+x -> +a ±b ±c ±d`, signs from row `x` of the Walsh matrix.
    pub fn s0() -> Self {
        let images = Base::ALL.map(|row| {
            Base::ALL
                .iter()
                .map(|&col| Letter::new(walsh_sign(row.index(), col.index()), col))
                .collect()
        });
        SubstitutionRule::from_positive(images)
    }

    /// The square root of `s0`: `+a -> +a+b`, `+b -> +c+d`, `+c -> +a-b`, `+d -> +c-d`.
    pub fn s1() -> Self {
        use Base::*;
        let p = |b| Letter::new(Sign::Plus, b);
        let m = |b| Letter::new(Sign::Minus, b);
        SubstitutionRule::from_positive([
            vec![p(A), p(B)],
            vec![p(C), p(D)],
            vec![p(A), m(B)],
            vec![p(C), m(D)],
        ])
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.images[letter.slot()]
    }

    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter().flat_map(|&l| self.image(l).iter().copied()).collect()
    }
}

/// Applies `rule` `steps` times to `word`.
pub fn substitute(rule: &SubstitutionRule, word: &[Letter], steps: usize) -> Vec<Letter> {
    let mut current = word.to_vec();
    for _ in 0..steps {
        current = rule.apply(&current);
    }
    current
}

/// First `len` letters of the fixed point of `rule` that starts with `+a`.
pub fn fixed_point_prefix(rule: &SubstitutionRule, len: usize) -> Vec<Letter> {
    let mut word = vec![Letter::plus(Base::A)];
    while word.len() < len {
        let next = rule.apply(&word);
        debug_assert!(next.len() > word.len(), "rule must be prolongable on +a");
        word = next;
    }
    word.truncate(len);
    word
}

pub fn letter_signs(word: &[Letter]) -> Vec<Sign> {
    word.iter().map(|l| l.sign).collect()
}

/// Iterates block doubling from `[+]` until at least `len` terms exist.
pub fn block_doubling_prefix(len: usize) -> Vec<Sign> {
    let mut word = vec![Sign::Plus];
    while word.len() < len {
        word = block_extend(&word).expect("lengths stay powers of four");
    }
    word.truncate(len);
    word
}

/// Which generator produced a sequence in [`verify_equivalence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    DigitFormula,
    Recurrence,
    BlockDoubling,
    S0FixedPoint,
    S1FixedPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub index: usize,
    pub generator: Generator,
    pub expected: Sign,
    pub found: Sign,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub len: usize,
    pub generators: Vec<Generator>,
    /// Earliest index where some generator disagrees with the digit formula.
    pub first_discrepancy: Option<Discrepancy>,
}

impl EquivalenceReport {
    pub fn all_agree(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// Runs all five generators for `len` terms and compares them against the
/// digit formula.
pub fn verify_equivalence(len: usize) -> EquivalenceReport {
    let candidates = vec![
        (Generator::Recurrence, prefix(len)),
        (Generator::BlockDoubling, block_doubling_prefix(len)),
        (Generator::S0FixedPoint, letter_signs(&fixed_point_prefix(&SubstitutionRule::s0(), len))),
        (Generator::S1FixedPoint, letter_signs(&fixed_point_prefix(&SubstitutionRule::s1(), len))),
    ];
    compare_generators(len, &candidates)
}

/// Compares candidate sequences against the digit formula term by term.
pub fn compare_generators(len: usize, candidates: &[(Generator, Vec<Sign>)]) -> EquivalenceReport {
    let mut first: Option<Discrepancy> = None;
    for (generator, terms) in candidates {
        for index in 0..len {
            let expected = sign_at(index as u64);
            let found = match terms.get(index) {
                Some(&s) => s,
                // A short sequence counts as wrong at its first missing index.
                None => -expected,
            };
            if found != expected {
                if first.as_ref().map_or(true, |d| index < d.index) {
                    first = Some(Discrepancy { index, generator: *generator, expected, found });
                }
                break;
            }
        }
    }
    let mut generators = vec![Generator::DigitFormula];
    generators.extend(candidates.iter().map(|(g, _)| *g));
    EquivalenceReport { len, generators, first_discrepancy: first }
}
