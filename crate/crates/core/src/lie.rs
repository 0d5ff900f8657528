//! Formal Lie monomials over odd generators `3, 5, 7, ...` and the spanning
//! sets used to assemble graded components.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_rational, parse_rational, Rational};

/// Binary bracket tree; leaves are odd generator labels `2k+1 ≥ 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketWord {
    Leaf(u32),
    Bracket(Box<BracketWord>, Box<BracketWord>),
}

impl BracketWord {
    pub fn leaf(label: u32) -> Result<BracketWord> {
        check_label(label)?;
        Ok(BracketWord::Leaf(label))
    }

    pub fn bracket(a: BracketWord, b: BracketWord) -> BracketWord {
        BracketWord::Bracket(Box::new(a), Box::new(b))
    }

    /// Number of leaves.
    pub fn degree(&self) -> usize {
        match self {
            BracketWord::Leaf(_) => 1,
            BracketWord::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    /// Sum of leaf labels.
    pub fn weight(&self) -> u32 {
        match self {
            BracketWord::Leaf(l) => *l,
            BracketWord::Bracket(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            BracketWord::Leaf(l) => out.push(*l),
            BracketWord::Bracket(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }
}

fn check_label(label: u32) -> Result<()> {
    if label < 3 || label.is_multiple_of(2) {
        return Err(Error::Precondition(format!("generator label {label} must be odd and at least 3")));
    }
    Ok(())
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketWord::Leaf(l) => write!(f, "{l}"),
            BracketWord::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl FromStr for BracketWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<BracketWord> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, offset: 0 };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, "trailing input after bracket word"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.offset + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&c) {
            return Err(self.err(&format!("expected '{}'", c as char)));
        }
        self.pos += 1;
        Ok(())
    }

    fn word(&mut self) -> Result<BracketWord> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(BracketWord::bracket(a, b))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let label: u32 = text.parse().map_err(|_| Error::parse(self.offset + start, "label out of range"))?;
                check_label(label).map_err(|_| Error::parse(self.offset + start, format!("generator label {label} must be odd and at least 3")))?;
                Ok(BracketWord::Leaf(label))
            }
            _ => Err(self.err("expected '[' or a generator label")),
        }
    }
}

/// Rational combination of bracket words, e.g. `[3,9] - 3*[5,7]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiePoly {
    terms: Vec<(Rational, BracketWord)>,
}

impl LiePoly {
    pub fn from_terms(terms: Vec<(Rational, BracketWord)>) -> Self {
        LiePoly { terms }
    }

    pub fn terms(&self) -> &[(Rational, BracketWord)] {
        &self.terms
    }

    /// Common (weight, degree), or an error for mixed gradings or no terms.
    pub fn grading(&self) -> Result<(u32, usize)> {
        let mut it = self.terms.iter().map(|(_, w)| (w.weight(), w.degree()));
        let first = it.next().ok_or_else(|| Error::Precondition("empty Lie polynomial".into()))?;
        if let Some(other) = it.find(|g| *g != first) {
            return Err(Error::MixedGrading(format!("(weight, degree) {first:?} vs {other:?}")));
        }
        Ok(first)
    }
}

impl fmt::Display for LiePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, w)) in self.terms.iter().enumerate() {
            let sep = match (i, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let a = c.abs();
            if a.is_one() {
                write!(f, "{sep}{w}")?;
            } else {
                write!(f, "{sep}{}*{w}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl FromStr for LiePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<LiePoly> {
        let src = s.as_bytes();
        let mut p = Parser { src, pos: 0, offset: 0 };
        let mut terms = Vec::new();
        loop {
            p.skip_ws();
            if p.pos == src.len() {
                break;
            }
            let mut sign = Rational::one();
            match src[p.pos] {
                b'+' | b'-' => {
                    if src[p.pos] == b'-' {
                        sign = -sign;
                    }
                    p.pos += 1;
                    p.skip_ws();
                }
                _ if !terms.is_empty() => return Err(p.err("expected '+' or '-' between terms")),
                _ => {}
            }
            // Optional `coef*` prefix.
            let rest = &s[p.pos..];
            let coef = match (rest.find('*'), rest.find('[')) {
                (Some(star), bracket) if bracket.is_none_or(|b| star < b) => {
                    let c = parse_rational(&rest[..star]).map_err(|_| p.err("bad coefficient"))?;
                    p.pos += star + 1;
                    c
                }
                _ => Rational::one(),
            };
            let w = p.word()?;
            terms.push((sign * coef, w));
        }
        if terms.is_empty() {
            return Err(Error::parse(0, "empty Lie polynomial"));
        }
        Ok(LiePoly { terms })
    }
}

/// How spanning bracket words of a graded component are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpanKind {
    /// Standard bracketings of Lyndon words: a basis of the free Lie algebra.
    Lyndon,
    /// `[a_1,[a_2,[...,a_r]]]` over all leaf sequences: spans, with repetitions.
    LeftNormed,
}

impl SpanKind {
    pub fn tag(self) -> &'static str {
        match self {
            SpanKind::Lyndon => "lyndon",
            SpanKind::LeftNormed => "left-normed",
        }
    }
}

impl FromStr for SpanKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<SpanKind> {
        match s {
            "lyndon" => Ok(SpanKind::Lyndon),
            "left-normed" => Ok(SpanKind::LeftNormed),
            _ => Err(Error::parse(0, format!("unknown span kind {s:?} (lyndon|left-normed)"))),
        }
    }
}

/// Sequences of `parts` odd labels ≥ 3 summing to `weight`, lexicographic.
pub fn odd_compositions(weight: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, left: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut l = 3;
        while l + 3 * (left as u32 - 1) <= rem {
            prefix.push(l);
            rec(rem - l, left - 1, prefix, out);
            prefix.pop();
            l += 2;
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(weight, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Strictly smaller than every proper suffix.
pub fn is_lyndon(w: &[u32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Bracketing at the longest proper Lyndon suffix.
pub fn standard_bracketing(w: &[u32]) -> BracketWord {
    if w.len() == 1 {
        return BracketWord::Leaf(w[0]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("a single letter is Lyndon");
    BracketWord::bracket(standard_bracketing(&w[..split]), standard_bracketing(&w[split..]))
}

/// `[a_1,[a_2,[...,a_r]]]`.
pub fn left_normed(w: &[u32]) -> BracketWord {
    let (last, init) = w.split_last().expect("nonempty leaf sequence");
    init.iter()
        .rev()
        .fold(BracketWord::Leaf(*last), |acc, &a| BracketWord::bracket(BracketWord::Leaf(a), acc))
}

/// Lyndon words over odd letters with the given weight and length, lexicographic.
pub fn lyndon_words(weight: u32, degree: usize) -> Vec<Vec<u32>> {
    odd_compositions(weight, degree).into_iter().filter(|w| is_lyndon(w)).collect()
}

/// Deterministic spanning set of the (weight, degree) component of the free
/// Lie algebra on odd generators.
pub fn span_words(kind: SpanKind, weight: u32, degree: usize) -> Vec<BracketWord> {
    match kind {
        SpanKind::Lyndon => lyndon_words(weight, degree).iter().map(|w| standard_bracketing(w)).collect(),
        SpanKind::LeftNormed => odd_compositions(weight, degree).iter().map(|w| left_normed(w)).collect(),
    }
}

/// Coefficients of `[a, b]` in a combination are merged; zero terms dropped.
pub fn normalize_terms(terms: Vec<(Rational, BracketWord)>) -> Vec<(Rational, BracketWord)> {
    let mut out: Vec<(Rational, BracketWord)> = Vec::new();
    for (c, w) in terms {
        match out.iter_mut().find(|(_, v)| *v == w) {
            Some((d, _)) => *d += c,
            None => out.push((c, w)),
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    out
}
