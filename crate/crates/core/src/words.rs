//! Binary words of iterated-integral symbols, alternating block decompositions,
//! ζ-indices, and the text syntax shared by the CLI and relation files.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_rational, parse_rational, Rational};

/// A sign of ±1 carried alongside symbol conversions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`.
    pub fn parity(n: usize) -> Sign {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_rational(self) -> Rational {
        match self {
            Sign::Plus => Rational::one(),
            Sign::Minus => -Rational::one(),
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Interior word `w` of `I(0; w; 1)`, letters in {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(pos) = letters.iter().position(|&l| l > 1) {
            return Err(Error::parse(pos, "word letters must be 0 or 1"));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().filter(|&&l| l == 1).count()
    }

    /// `0·w·1`.
    pub fn extended(&self) -> Vec<u8> {
        let mut e = Vec::with_capacity(self.0.len() + 2);
        e.push(0);
        e.extend_from_slice(&self.0);
        e.push(1);
        e
    }

    /// Minimal factorisation of `0·w·1` into alternating blocks.
    pub fn block_decompose(&self) -> BlockTuple {
        let ext = self.extended();
        let mut lengths = Vec::new();
        let mut run = 1u32;
        for pair in ext.windows(2) {
            if pair[0] == pair[1] {
                lengths.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        lengths.push(run);
        BlockTuple(lengths)
    }

    /// Number of adjacent equal letters in `0·w·1`.
    pub fn block_degree(&self) -> usize {
        self.extended().windows(2).filter(|p| p[0] == p[1]).count()
    }

    /// Exponent pattern `(k_0, ..., k_d)` of `{0}^{k_0} 1 {0}^{k_1} ... 1 {0}^{k_d}`.
    pub fn zero_runs(&self) -> Vec<u32> {
        let mut runs = vec![0u32];
        for &l in &self.0 {
            if l == 1 {
                runs.push(0);
            } else {
                *runs.last_mut().expect("nonempty") += 1;
            }
        }
        runs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Block lengths `(ℓ_0, ..., ℓ_r)` of an alternating block decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockTuple(Vec<u32>);

impl BlockTuple {
    pub fn new(lengths: Vec<u32>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidBlocks { blocks: lengths, reason: "at least one block is required" });
        }
        if lengths.contains(&0) {
            return Err(Error::InvalidBlocks { blocks: lengths, reason: "blocks have positive length" });
        }
        Ok(BlockTuple(lengths))
    }

    pub fn lengths(&self) -> &[u32] {
        &self.0
    }

    /// Number of blocks minus one.
    pub fn block_degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|&l| l as i64).sum::<i64>() - 2
    }

    /// Rebuilds the word; each block after the first starts with the letter its
    /// predecessor ended on.
    pub fn to_word(&self) -> Result<Word> {
        if self.weight() < 0 {
            return Err(Error::InvalidBlocks { blocks: self.0.clone(), reason: "total length must be at least 2" });
        }
        let mut ext = Vec::with_capacity(self.weight() as usize + 2);
        let mut letter = 0u8;
        for &len in &self.0 {
            for _ in 0..len {
                ext.push(letter);
                letter ^= 1;
            }
            letter ^= 1;
        }
        if ext.last() != Some(&1) {
            return Err(Error::InvalidBlocks { blocks: self.0.clone(), reason: "reconstruction does not end in 1" });
        }
        ext.pop();
        ext.remove(0);
        Ok(Word(ext))
    }
}

impl fmt::Display for BlockTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b:{{{}}}", join(&self.0))
    }
}

/// `ζ_ℓ(k_1, ..., k_d)`: `leading` extra zeros, then the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZetaIndex {
    leading: u32,
    entries: Vec<u32>,
}

impl ZetaIndex {
    pub fn new(leading: u32, entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Precondition("zeta entries must be positive".into()));
        }
        Ok(ZetaIndex { leading, entries })
    }

    pub fn plain(entries: Vec<u32>) -> Result<Self> {
        ZetaIndex::new(0, entries)
    }

    pub fn leading(&self) -> u32 {
        self.leading
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> u32 {
        self.leading + self.entries.iter().sum::<u32>()
    }

    pub fn is_totally_odd(&self) -> bool {
        self.leading == 0 && self.entries.iter().all(|k| k % 2 == 1)
    }

    /// `ζ_ℓ(k) = (-1)^d I(0; {0}^ℓ 1 {0}^{k_1-1} ... 1 {0}^{k_d-1}; 1)`.
    pub fn to_word(&self) -> (Word, Sign) {
        let mut w = vec![0u8; self.leading as usize];
        for &k in &self.entries {
            w.push(1);
            w.extend(std::iter::repeat_n(0, k as usize - 1));
        }
        (Word(w), Sign::parity(self.entries.len()))
    }

    pub fn from_word(w: &Word) -> Result<(ZetaIndex, Sign)> {
        if w.0.is_empty() {
            return Err(Error::EmptyWord);
        }
        let runs = w.zero_runs();
        let leading = runs[0];
        let entries: Vec<u32> = runs[1..].iter().map(|z| z + 1).collect();
        let sign = Sign::parity(entries.len());
        Ok((ZetaIndex { leading, entries }, sign))
    }
}

impl fmt::Display for ZetaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.leading == 0 {
            write!(f, "z:{{{}}}", join(&self.entries))
        } else {
            write!(f, "z:{{l={};{}}}", self.leading, join(&self.entries))
        }
    }
}

pub fn zeta_to_word(z: &ZetaIndex) -> (Word, Sign) {
    z.to_word()
}

pub fn word_to_zeta(w: &Word) -> Result<(ZetaIndex, Sign)> {
    ZetaIndex::from_word(w)
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Any of the three interchangeable symbol encodings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zeta(ZetaIndex),
    Blocks(BlockTuple),
    Word(Word),
}

impl Symbol {
    /// The `I(0; w; 1)` word and the sign `s` with `symbol = s · I(0; w; 1)`.
    pub fn to_signed_word(&self) -> Result<(Word, Sign)> {
        match self {
            Symbol::Zeta(z) => Ok(z.to_word()),
            Symbol::Blocks(b) => Ok((b.to_word()?, Sign::Plus)),
            Symbol::Word(w) => Ok((w.clone(), Sign::Plus)),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Zeta(z) => z.fmt(f),
            Symbol::Blocks(b) => b.fmt(f),
            Symbol::Word(w) => write!(f, "w:{w}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Symbol> {
        parse_symbol(s, 0)
    }
}

/// Parses one symbol; `offset` shifts reported error positions.
fn parse_symbol(s: &str, offset: usize) -> Result<Symbol> {
    let err = |pos: usize, msg: &str| Error::parse(offset + pos, msg);
    if let Some(body) = s.strip_prefix("w:") {
        let letters = body
            .bytes()
            .enumerate()
            .map(|(i, b)| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(err(2 + i, "word letters must be 0 or 1")),
            })
            .collect::<Result<Vec<u8>>>()?;
        return Ok(Symbol::Word(Word(letters)));
    }
    let (tag, body) = s.split_at(s.len().min(2));
    let inner = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| err(2, "expected {...}"))?;
    let inner_at = 3;
    match tag {
        "z:" => {
            let (leading, list, list_at) = match inner.strip_prefix("l=") {
                Some(rest) => {
                    let (l, list) = rest.split_once(';').ok_or_else(|| err(inner_at + 2, "expected ';' after l=<n>"))?;
                    let l: u32 = l.trim().parse().map_err(|_| err(inner_at + 2, "bad leading subscript"))?;
                    (l, list, inner_at + 2 + rest.find(';').unwrap_or(0) + 1)
                }
                None => (0, inner, inner_at),
            };
            let entries = parse_list(list, offset + list_at)?;
            if let Some(i) = entries.iter().position(|&k| k == 0) {
                return Err(err(list_at, &format!("entry {} must be positive", i + 1)));
            }
            Ok(Symbol::Zeta(ZetaIndex { leading, entries }))
        }
        "b:" => {
            let lengths = parse_list(inner, offset + inner_at)?;
            BlockTuple::new(lengths).map(Symbol::Blocks).map_err(|e| err(inner_at, &e.to_string()))
        }
        _ => Err(err(0, "expected symbol prefix z:, b: or w:")),
    }
}

fn parse_list(s: &str, at: usize) -> Result<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = at;
    for part in s.split(',') {
        let v: u32 = part.trim().parse().map_err(|_| Error::parse(pos, format!("bad integer {:?}", part.trim())))?;
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}

/// Finite rational combination of symbols, e.g. `7*z:{2,2,2,4,2} + 5/2*z:{2,2,4,2,2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    terms: Vec<(Rational, Symbol)>,
}

impl Combination {
    pub fn new() -> Self {
        Combination::default()
    }

    pub fn from_terms(terms: Vec<(Rational, Symbol)>) -> Self {
        Combination { terms }
    }

    pub fn single(c: Rational, s: Symbol) -> Self {
        Combination { terms: vec![(c, s)] }
    }

    pub fn push(&mut self, c: Rational, s: Symbol) {
        self.terms.push((c, s));
    }

    pub fn terms(&self) -> &[(Rational, Symbol)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_zero())
    }

    pub fn scale(&self, k: &Rational) -> Combination {
        Combination { terms: self.terms.iter().map(|(c, s)| (c * k, s.clone())).collect() }
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, s)) in self.terms.iter().enumerate() {
            let sep = match (i, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}{}*{s}", format_rational(&c.abs()))?;
        }
        Ok(())
    }
}

impl FromStr for Combination {
    type Err = Error;

    /// Terms `[±] [coef *] symbol` joined by `+` or `-`; the coefficient
    /// defaults to 1.
    fn from_str(s: &str) -> Result<Combination> {
        let bytes = s.as_bytes();
        let mut terms = Vec::new();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if s[i..].trim() == "0" {
            return Ok(Combination::new());
        }
        let mut first = true;
        while i < bytes.len() {
            let mut sign = Rational::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(Error::parse(i, "expected '+' or '-' between terms"));
            }
            first = false;
            // A term ends at the next top-level '+'/'-' outside braces.
            let start = i;
            let mut depth = 0i32;
            while i < bytes.len() {
                match bytes[i] {
                    b'{' => depth += 1,
                    b'}' => depth -= 1,
                    b'+' | b'-' if depth == 0 => break,
                    _ => {}
                }
                i += 1;
            }
            let raw = &s[start..i];
            let trimmed = raw.trim_end();
            let (coef, sym, sym_at) = match trimmed.find('*') {
                Some(star) => {
                    let c = parse_rational(&trimmed[..star]).map_err(|_| Error::parse(start, "bad coefficient"))?;
                    let rest = &trimmed[star + 1..];
                    let lead = rest.len() - rest.trim_start().len();
                    (c, rest.trim_start(), start + star + 1 + lead)
                }
                None => (Rational::one(), trimmed, start),
            };
            if sym.is_empty() {
                return Err(Error::parse(start, "missing symbol"));
            }
            terms.push((sign * coef, parse_symbol(sym, sym_at)?));
            skip_ws(&mut i);
        }
        if terms.is_empty() {
            return Err(Error::parse(0, "empty combination"));
        }
        Ok(Combination { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::new(s.bytes().map(|b| b - b'0').collect()).unwrap()
    }

    fn z(entries: &[u32]) -> ZetaIndex {
        ZetaIndex::plain(entries.to_vec()).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(w("100").block_decompose().lengths(), &[3, 2]);
        assert_eq!(w("10").block_decompose().lengths(), &[4]);
        assert_eq!(w("").block_decompose().lengths(), &[2]);
        assert_eq!(w("100").block_degree(), 1);
        assert_eq!(w("10").block_degree(), 0);
    }

    #[test]
    fn two_six_two_words_have_block_degree_four() {
        for n in 0..5 {
            for k in 0..=n {
                let mut e = vec![2; k];
                e.push(6);
                e.extend(vec![2; n - k]);
                assert_eq!(z(&e).to_word().0.block_degree(), 4, "{e:?}");
            }
        }
    }

    #[test]
    fn blocks_to_word_examples() {
        assert_eq!(BlockTuple::new(vec![3, 2]).unwrap().to_word().unwrap(), w("100"));
        assert_eq!(BlockTuple::new(vec![2]).unwrap().to_word().unwrap(), w(""));
        // (1, 2k_1+1, ..., 2k_{r-1}+1, 2k_r+2) with k = (1, 2).
        let got = BlockTuple::new(vec![1, 3, 6]).unwrap().to_word().unwrap();
        assert_eq!(got, w("01001010"));
        assert!(BlockTuple::new(vec![3]).unwrap().to_word().is_err());
        assert!(BlockTuple::new(vec![1]).unwrap().to_word().is_err());
        assert!(BlockTuple::new(vec![2, 0]).is_err());
    }

    #[test]
    fn zeta_word_examples() {
        assert_eq!(z(&[3]).to_word(), (w("100"), Sign::Minus));
        assert_eq!(z(&[2, 6]).to_word(), (w("10100000"), Sign::Plus));
        let z1 = ZetaIndex::new(1, vec![2, 2]).unwrap();
        assert_eq!(z1.to_word(), (w("01010"), Sign::Plus));
        assert_eq!(ZetaIndex::from_word(&w("100")).unwrap(), (z(&[3]), Sign::Minus));
        assert_eq!(ZetaIndex::from_word(&w("010")).unwrap(), (ZetaIndex::new(1, vec![2]).unwrap(), Sign::Minus));
        assert!(matches!(ZetaIndex::from_word(&w("")), Err(Error::EmptyWord)));
    }

    #[test]
    fn symbol_text_round_trip() {
        for s in ["z:{l=1;2,2}", "z:{3,5}", "b:{1,3,8}", "w:10010", "w:", "z:{l=1;}", "z:{}"] {
            let sym: Symbol = s.parse().unwrap();
            assert_eq!(sym.to_string(), s);
        }
        assert!("z:{3,0}".parse::<Symbol>().is_err());
        assert!("b:{}".parse::<Symbol>().is_err());
        assert!("q:{1}".parse::<Symbol>().is_err());
        assert!("w:102".parse::<Symbol>().is_err());
        match "z:{3,x}".parse::<Symbol>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn combination_parsing() {
        let c: Combination = "7*z:{2,2,2,4,2} + 5/2*z:{2,2,4,2,2} - z:{2,4,2,2,2}".parse().unwrap();
        assert_eq!(c.terms().len(), 3);
        assert_eq!(c.terms()[1].0, ratio(5, 2));
        assert_eq!(c.terms()[2].0, rat(-1));
        let again: Combination = c.to_string().parse().unwrap();
        assert_eq!(again, c);
        let neg: Combination = "-3*b:{1,3,8}".parse().unwrap();
        assert_eq!(neg.terms()[0].0, rat(-3));
        assert!("3*".parse::<Combination>().is_err());
        assert!("z:{3} z:{5}".parse::<Combination>().is_err());
        assert!("0".parse::<Combination>().unwrap().is_empty());
    }

    fn any_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(0u8..2, 0..24).prop_map(|v| Word::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn block_degree_definitions_agree(wd in any_word()) {
            let b = wd.block_decompose();
            prop_assert_eq!(b.block_degree(), wd.block_degree());
            prop_assert_eq!(b.weight(), wd.weight() as i64);
            prop_assert_eq!(b.to_word().unwrap(), wd);
        }

        #[test]
        fn zeta_round_trip(wd in any_word()) {
            prop_assume!(wd.weight() > 0);
            let (zi, sign) = ZetaIndex::from_word(&wd).unwrap();
            prop_assert_eq!(zi.weight() as usize, wd.weight());
            prop_assert_eq!(zi.to_word(), (wd, sign));
        }

        #[test]
        fn valid_tuples_round_trip(ls in prop::collection::vec(1u32..6, 1..6)) {
            let b = BlockTuple::new(ls).unwrap();
            if let Ok(wd) = b.to_word() {
                prop_assert_eq!(wd.block_decompose(), b);
            }
        }
    }
}
