//! Certificates for relations `R_B = 2^r R_D` modulo products and lower block
//! degree, their synthesis, and the totally odd to almost-Hoffman dictionary.
//!
//! A relation holds exactly when `L^B_{R_B}(P(p)) = 2^r L^D_{R_D}(P(φ))` for
//! every Lie-degree-`r` bracket word `P`; both sides are computed directly and
//! the totally even hypotheses are recorded next to the verdict.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{shared_component, triangle_scale, Algebra};
use crate::block::pi_even;
use crate::error::{Error, Result};
use crate::lie::{odd_compositions, SpanKind};
use crate::linalg::QMatrix;
use crate::pairing::{block_functional, depth_functional, Functional};
use crate::poly::{format_rational, parse_rational, pow2, Rational};
use crate::words::{BlockTuple, Combination, Sign, Symbol, ZetaIndex};

/// Version tag of the relation-file and certificate JSON layouts.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
}

/// One `coef * symbol` term in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub symbol: String,
}

fn terms_to_json(c: &Combination) -> Vec<TermJson> {
    c.terms().iter().map(|(q, s)| TermJson { coef: format_rational(q), symbol: s.to_string() }).collect()
}

fn terms_from_json(ts: &[TermJson]) -> Result<Combination> {
    let terms = ts
        .iter()
        .map(|t| Ok((parse_rational(&t.coef)?, t.symbol.parse::<Symbol>()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Combination::from_terms(terms))
}

/// Input file for `verify`: both sides, Lie degree and weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFile {
    pub version: u32,
    pub weight: u32,
    pub lie_degree: usize,
    pub block_side: Vec<TermJson>,
    #[serde(default)]
    pub depth_side: Vec<TermJson>,
}

impl RelationFile {
    pub fn new(block: &Combination, depth: &Combination, lie_degree: usize, weight: u32) -> Self {
        RelationFile {
            version: FORMAT_VERSION,
            weight,
            lie_degree,
            block_side: terms_to_json(block),
            depth_side: terms_to_json(depth),
        }
    }

    pub fn sides(&self) -> Result<(Combination, Combination)> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Precondition(format!("unsupported relation file version {}", self.version)));
        }
        Ok((terms_from_json(&self.block_side)?, terms_from_json(&self.depth_side)?))
    }
}

/// Pairing values of both functionals against one bracket word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingValue {
    pub word: String,
    /// `L^B(P(p))`.
    pub block: String,
    /// `2^r L^D(P(φ))`.
    pub depth_scaled: String,
    /// `block − depth_scaled`; zero on every word iff verified.
    pub difference: String,
}

/// Totally even hypotheses, checked syntactically and on the components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub block_syntactically_even: bool,
    pub depth_syntactically_even: bool,
    /// `L^B(ξ) = L^B(π_e ξ)` on the block component.
    pub block_even_on_component: bool,
    /// `L^D(ξ) = L^D(π_e ξ)` on the depth component.
    pub depth_even_on_component: bool,
    /// `L^B` and `L^D` agree on the even component.
    pub equal_on_even_component: bool,
    pub block_odd_patterns: Vec<Vec<u32>>,
    pub depth_odd_patterns: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCertificate {
    pub version: u32,
    pub status: Status,
    pub weight: u32,
    pub lie_degree: usize,
    pub scale: String,
    pub block_side: Vec<TermJson>,
    pub depth_side: Vec<TermJson>,
    pub hypotheses: Hypotheses,
    /// True when the component has no bracket words, so the check is empty.
    pub vacuous: bool,
    pub verified_against: Vec<PairingValue>,
    /// First bracket word with a nonzero difference.
    pub offending_word: Option<String>,
    /// Block parity drops the error term to block degree `r − 2`; recorded, not checked.
    pub lower_block_degree_bound: usize,
}

impl RelationCertificate {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

fn check_weights(c: &Combination, weight: u32, side: &str) -> Result<()> {
    for (_, s) in c.terms() {
        let w = match s {
            Symbol::Blocks(b) => b.weight(),
            _ => s.to_signed_word()?.0.weight() as i64,
        };
        if w != weight as i64 {
            return Err(Error::MixedGrading(format!("{side} term {s} has weight {w}, expected {weight}")));
        }
    }
    Ok(())
}

/// Checks `R_B = 2^r R_D` against every Lyndon bracket word of Lie degree `r`.
pub fn verify_relation(rb: &Combination, rd: &Combination, lie_degree: usize, weight: u32) -> Result<RelationCertificate> {
    if lie_degree == 0 {
        return Err(Error::Precondition("Lie degree must be at least 1".into()));
    }
    check_weights(rb, weight, "block side")?;
    check_weights(rd, weight, "depth side")?;
    let lb = block_functional(rb, lie_degree)?;
    let ld = depth_functional(rd, lie_degree)?;
    let scale = triangle_scale(lie_degree);

    let block = shared_component(Algebra::Block, weight, lie_degree, SpanKind::Lyndon)?;
    let depth = shared_component(Algebra::Depth, weight, lie_degree, SpanKind::Lyndon)?;
    let even = shared_component(Algebra::Even, weight, lie_degree, SpanKind::Lyndon)?;

    let rows: Vec<(PairingValue, bool, bool, bool)> = (0..block.words.len())
        .into_par_iter()
        .map(|i| {
            let pb = &block.row_polys()[i];
            let pd = &depth.row_polys()[i];
            let pe = &even.row_polys()[i];
            let b = lb.eval(pb)?;
            let d = &scale * ld.eval(pd)?;
            let diff = &b - &d;
            let b_even = b == lb.eval(&pi_even(pb))?;
            let d_even = ld.eval(pd)? == ld.eval(&pi_even(pd))?;
            let on_even = lb.eval(pe)? == ld.eval(pe)?;
            let value = PairingValue {
                word: block.words[i].to_string(),
                block: format_rational(&b),
                depth_scaled: format_rational(&d),
                difference: format_rational(&diff),
            };
            Ok((value, b_even, d_even, on_even))
        })
        .collect::<Result<Vec<_>>>()?;

    let offending_word = rows.iter().find(|(v, ..)| v.difference != "0").map(|(v, ..)| v.word.clone());
    let hypotheses = Hypotheses {
        block_syntactically_even: lb.is_totally_even(),
        depth_syntactically_even: ld.is_totally_even(),
        block_even_on_component: rows.iter().all(|r| r.1),
        depth_even_on_component: rows.iter().all(|r| r.2),
        equal_on_even_component: rows.iter().all(|r| r.3),
        block_odd_patterns: lb.odd_patterns(),
        depth_odd_patterns: ld.odd_patterns(),
    };
    Ok(RelationCertificate {
        version: FORMAT_VERSION,
        status: if offending_word.is_none() { Status::Verified } else { Status::Failed },
        weight,
        lie_degree,
        scale: format_rational(&scale),
        block_side: terms_to_json(rb),
        depth_side: terms_to_json(rd),
        hypotheses,
        vacuous: rows.is_empty(),
        verified_against: rows.into_iter().map(|r| r.0).collect(),
        offending_word,
        lower_block_degree_bound: lie_degree.saturating_sub(2),
    })
}

pub fn verify_relation_file(file: &RelationFile) -> Result<RelationCertificate> {
    let (rb, rd) = file.sides()?;
    verify_relation(&rb, &rd, file.lie_degree, file.weight)
}

/// Totally odd depth-`r` indices of the given weight: all entries ≥ 3 first,
/// then those containing a 1, each group lexicographic.
pub fn totally_odd_candidates(weight: u32, depth: usize) -> Vec<ZetaIndex> {
    let mut all: Vec<Vec<u32>> = odd_compositions(weight, depth);
    all.sort_by_key(|e| (e.contains(&1), e.clone()));
    all.into_iter().map(|e| ZetaIndex::plain(e).expect("positive entries")).collect()
}

/// Solves for a totally odd depth side; the first candidates in
/// [`totally_odd_candidates`] order are preferred.
pub fn synthesize_depth_side(rb: &Combination, lie_degree: usize, weight: u32) -> Result<(Combination, RelationCertificate)> {
    if lie_degree == 0 {
        return Err(Error::Precondition("Lie degree must be at least 1".into()));
    }
    check_weights(rb, weight, "block side")?;
    let lb = block_functional(rb, lie_degree)?;
    let block = shared_component(Algebra::Block, weight, lie_degree, SpanKind::Lyndon)?;
    let depth = shared_component(Algebra::Depth, weight, lie_degree, SpanKind::Lyndon)?;
    for (w, p) in block.words.iter().zip(block.row_polys()) {
        if lb.eval(p)? != lb.eval(&pi_even(p))? {
            return Err(Error::Precondition(format!("block functional is not totally even: it sees odd parts of {w}")));
        }
    }
    let candidates = totally_odd_candidates(weight, lie_degree);
    let scale = triangle_scale(lie_degree);
    let cand_functionals: Vec<Functional> = candidates
        .iter()
        .map(|z| depth_functional(&Combination::single(Rational::one(), Symbol::Zeta(z.clone())), lie_degree))
        .collect::<Result<_>>()?;
    let mut trip = Vec::new();
    let mut rhs = Vec::with_capacity(block.words.len());
    for (i, (pb, pd)) in block.row_polys().iter().zip(depth.row_polys()).enumerate() {
        rhs.push(lb.eval(pb)?);
        for (j, f) in cand_functionals.iter().enumerate() {
            let v = &scale * f.eval(pd)?;
            if !v.is_zero() {
                trip.push((i, j, v));
            }
        }
    }
    let a = QMatrix::from_triplets(block.words.len(), candidates.len(), trip)?;
    let x = a.solve(&rhs)?.ok_or_else(|| {
        Error::NoSolution(format!("no totally odd depth side at weight {weight}, Lie degree {lie_degree}"))
    })?;
    let rd = Combination::from_terms(
        x.into_iter()
            .zip(candidates)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, z)| (c, Symbol::Zeta(z)))
            .collect(),
    );
    let cert = verify_relation(rb, &rd, lie_degree, weight)?;
    Ok((rd, cert))
}

/// Entry of a formal index `ζ_m(...)` where `{2}^n` may have `n = −1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Token {
    Entry(u32),
    Twos(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalIndex {
    pub leading: u32,
    pub tokens: Vec<Token>,
}

impl fmt::Display for FormalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::Entry(e) => e.to_string(),
                Token::Twos(n) => format!("{{2}}^{n}"),
            })
            .collect();
        write!(f, "z:{{l={};{}}}", self.leading, parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HoffmanTarget {
    Reduced(ZetaIndex),
    /// The reduction rules could not remove every `{2}^{−1}`.
    Unreduced(FormalIndex),
}

impl fmt::Display for HoffmanTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoffmanTarget::Reduced(z) => z.fmt(f),
            HoffmanTarget::Unreduced(x) => x.fmt(f),
        }
    }
}

/// `ζ(2k_1+1, ..., 2k_r+1) = scale · target` modulo lower block degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictionaryEntry {
    pub source: ZetaIndex,
    pub target: HoffmanTarget,
    pub scale: Rational,
}

impl fmt::Display for DictionaryEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", format_rational(&self.scale), self.target)
    }
}

/// Applies the two reduction rules until no `{2}^{−1}` remains or neither
/// rule applies:
/// `ζ_m({2}^{−1}, 3, ...) → ζ_{m+1}(...)` and
/// `ζ_m(..., 3+a, {2}^{−1}, 3+b, ...) → ζ_m(..., 4+a+b, ...)`.
pub fn reduce_formal(mut x: FormalIndex) -> HoffmanTarget {
    x.tokens.retain(|t| *t != Token::Twos(0));
    loop {
        if let [Token::Twos(-1), Token::Entry(3), ..] = x.tokens.as_slice() {
            x.tokens.drain(..2);
            x.leading += 1;
            continue;
        }
        let merge = x.tokens.windows(3).position(|w| {
            matches!(w, [Token::Entry(a), Token::Twos(-1), Token::Entry(b)] if *a >= 3 && *b >= 3)
        });
        match merge {
            Some(i) => {
                let (Token::Entry(a), Token::Entry(b)) = (&x.tokens[i], &x.tokens[i + 2]) else { unreachable!() };
                let merged = a + b - 2;
                x.tokens.splice(i..i + 3, [Token::Entry(merged)]);
            }
            None => break,
        }
    }
    if x.tokens.iter().any(|t| matches!(t, Token::Twos(n) if *n < 0)) {
        return HoffmanTarget::Unreduced(x);
    }
    let mut entries = Vec::new();
    for t in &x.tokens {
        match *t {
            Token::Entry(e) => entries.push(e),
            Token::Twos(n) => entries.extend(std::iter::repeat_n(2, n as usize)),
        }
    }
    HoffmanTarget::Reduced(ZetaIndex::new(x.leading, entries).expect("entries are positive"))
}

/// Half-indices `k_i` of a totally odd index.
fn half_indices(z: &ZetaIndex) -> Result<Vec<u32>> {
    if z.depth() == 0 || !z.is_totally_odd() {
        return Err(Error::Precondition(format!("{z} is not a totally odd index")));
    }
    Ok(z.entries().iter().map(|e| (e - 1) / 2).collect())
}

/// `ζ(2k_1+1, ..., 2k_r+1) = ((−1)^{Σk + r + 1} / 2^r) ζ_1({2}^{k_1−1}, 3, ..., 3, {2}^{k_r})`.
pub fn odd_to_hoffman(z: &ZetaIndex) -> Result<DictionaryEntry> {
    let ks = half_indices(z)?;
    let r = ks.len();
    let mut tokens = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        if i + 1 < r {
            tokens.push(Token::Twos(k as i64 - 1));
            tokens.push(Token::Entry(3));
        } else {
            tokens.push(Token::Twos(k as i64));
        }
    }
    let target = reduce_formal(FormalIndex { leading: 1, tokens });
    let sum: usize = ks.iter().map(|&k| k as usize).sum();
    let scale = Sign::parity(sum + r + 1).to_rational() / pow2(r as u32);
    Ok(DictionaryEntry { source: z.clone(), target, scale })
}

/// The block tuple `(1, 2k_1+1, ..., 2k_{r−1}+1, 2k_r+2)` of the same target.
pub fn almost_hoffman_blocks(z: &ZetaIndex) -> Result<BlockTuple> {
    let ks = half_indices(z)?;
    let r = ks.len();
    let mut ls = vec![1];
    for (i, &k) in ks.iter().enumerate() {
        ls.push(if i + 1 < r { 2 * k + 1 } else { 2 * k + 2 });
    }
    BlockTuple::new(ls)
}

/// Certifies a dictionary entry through [`verify_relation`]:
/// `R_B = (2^r · scale) · target`, `R_D = ζ`.
pub fn verify_dictionary_entry(entry: &DictionaryEntry) -> Result<RelationCertificate> {
    let HoffmanTarget::Reduced(target) = &entry.target else {
        return Err(Error::Precondition(format!("{} has no reduced target", entry.source)));
    };
    let r = entry.source.depth();
    let rb = Combination::single(&entry.scale * triangle_scale(r), Symbol::Zeta(target.clone()));
    let rd = Combination::single(Rational::one(), Symbol::Zeta(entry.source.clone()));
    verify_relation(&rb, &rd, r, entry.source.weight())
}

/// Both sides of the (2,6,2) family:
/// `(−1)^{n+1} Σ_{k=a}^{n−a} ζ({2}^k, 6, {2}^{n−k}) = 16 ζ(1, 1, 2n−2a+3, 2a+1)`.
pub fn two_six_two_sides(n: u32, a: u32) -> Result<(Combination, Combination)> {
    if 2 * a > n {
        return Err(Error::Precondition(format!("need 0 <= 2a <= n, got n = {n}, a = {a}")));
    }
    let sign = Sign::parity(n as usize + 1).to_rational();
    let mut rb = Combination::new();
    for k in a..=n - a {
        let mut e = vec![2; k as usize];
        e.push(6);
        e.extend(vec![2; (n - k) as usize]);
        rb.push(sign.clone(), Symbol::Zeta(ZetaIndex::plain(e)?));
    }
    let rd = Combination::single(Rational::one(), Symbol::Zeta(ZetaIndex::plain(vec![1, 1, 2 * n - 2 * a + 3, 2 * a + 1])?));
    Ok((rb, rd))
}

pub fn two_six_two(n: u32, a: u32) -> Result<RelationCertificate> {
    let (rb, rd) = two_six_two_sides(n, a)?;
    verify_relation(&rb, &rd, 4, 2 * n + 6)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub entries: Vec<RegressionEntry>,
}

impl RegressionReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn get(&self, name: &str) -> Option<&RegressionEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn comb(s: &str) -> Combination {
    s.parse().expect("built-in combination parses")
}

/// A named `R_B = 2^r R_D` relation with its grading.
pub struct NamedRelation {
    pub name: &'static str,
    pub block: &'static str,
    pub depth: &'static str,
    pub lie_degree: usize,
    pub weight: u32,
}

/// The stated relations, checked exactly as printed.
pub const STATED_RELATIONS: [NamedRelation; 3] = [
    NamedRelation {
        name: "weight-11-block-degree-3",
        block: "z:{2,2,5,2} - z:{2,5,2,2}",
        depth: "z:{1,3,7} - z:{1,5,5}",
        lie_degree: 3,
        weight: 11,
    },
    NamedRelation {
        name: "weight-14-block-degree-2",
        block: "z:{2,3,3,2,2,2} - z:{2,2,2,3,3,2}",
        depth: "35/4*z:{6,8} + 7*z:{5,9} + 15/4*z:{7,7}",
        lie_degree: 2,
        weight: 14,
    },
    NamedRelation {
        name: "weight-11-zeta-3-3-5",
        block: "z:{2,3,4,2} - z:{2,1,1,2,3,2} - 2*z:{1,2,3,3,2} - 2*z:{2,1,3,3,2} - 2*z:{2,3,1,3,2} - 2*z:{2,3,3,1,2}",
        depth: "z:{3,3,5}",
        lie_degree: 3,
        weight: 11,
    },
];

/// Forms of the second and third stated relations that hold.
pub const CORRECTED_RELATIONS: [NamedRelation; 2] = [
    NamedRelation {
        name: "weight-14-block-degree-2-sum",
        block: "z:{2,3,3,2,2,2} + z:{2,2,2,3,3,2}",
        depth: "35*z:{6,8} + 28*z:{5,9} + 15*z:{7,7}",
        lie_degree: 2,
        weight: 14,
    },
    NamedRelation {
        name: "weight-11-zeta-3-3-5-rescaled",
        block: "z:{2,3,4,2} - z:{2,1,1,2,3,2} - 2*z:{1,2,3,3,2} - 2*z:{2,1,3,3,2} - 2*z:{2,3,1,3,2} - 2*z:{2,3,3,1,2}",
        depth: "-2*z:{3,3,5}",
        lie_degree: 3,
        weight: 11,
    },
];

/// The weight-12 block combination that vanishes modulo products.
pub const CUSP_BLOCK_COMBINATION: &str = "7*z:{2,2,2,4,2} + 5/2*z:{2,2,4,2,2} + 7*z:{2,4,2,2,2}";
/// The weight-12 depth-2 combination with an unexpected depth drop.
pub const CUSP_DEPTH_COMBINATION: &str = "28*z:{3,9} + 150*z:{5,7} + 168*z:{7,5}";

fn relation_entry(name: String, rb: &Combination, rd: &Combination, r: usize, w: u32) -> RegressionEntry {
    match verify_relation(rb, rd, r, w) {
        Ok(c) => RegressionEntry {
            name,
            passed: c.is_verified(),
            detail: match &c.offending_word {
                None if c.vacuous => "verified (empty component)".into(),
                None => format!("verified on {} bracket words", c.verified_against.len()),
                Some(wd) => {
                    let v = c.verified_against.iter().find(|v| &v.word == wd).expect("offending word listed");
                    format!("fails on {wd}: block {} vs scaled depth {}", v.block, v.depth_scaled)
                }
            },
        },
        Err(e) => RegressionEntry { name, passed: false, detail: e.to_string() },
    }
}

/// A functional vanishes on every bracket word of a component.
fn annihilates(name: &str, l: &Functional, algebra: Algebra, weight: u32, degree: usize) -> RegressionEntry {
    let result = shared_component(algebra, weight, degree, SpanKind::Lyndon).and_then(|c| {
        let vals = l.eval_component(&c)?;
        Ok(c.words.iter().zip(vals).find(|(_, v)| !v.is_zero()).map(|(w, v)| (w.to_string(), v)))
    });
    let (passed, detail) = match result {
        Ok(None) => (true, format!("vanishes on the ({algebra}, {weight}, {degree}) component")),
        Ok(Some((w, v))) => (false, format!("value {} on {w} in {algebra}", format_rational(&v))),
        Err(e) => (false, e.to_string()),
    };
    RegressionEntry { name: name.into(), passed, detail }
}

/// Every stated relation, the two weight-12 cusp relations, and the (2,6,2)
/// family for `n ≤ 4`.
pub fn regression_suite() -> RegressionReport {
    regression_suite_with(true)
}

/// As [`regression_suite`], optionally followed by the corrected relations.
pub fn regression_suite_with(include_corrected: bool) -> RegressionReport {
    let mut entries = Vec::new();
    for rel in &STATED_RELATIONS {
        entries.push(relation_entry(rel.name.into(), &comb(rel.block), &comb(rel.depth), rel.lie_degree, rel.weight));
    }
    let cusp_block = comb(CUSP_BLOCK_COMBINATION);
    match block_functional(&cusp_block, 2) {
        Ok(l) => {
            entries.push(annihilates("weight-12-block-cusp-even", &l, Algebra::Even, 12, 2));
            entries.push(annihilates("weight-12-block-cusp-block", &l, Algebra::Block, 12, 2));
        }
        Err(e) => entries.push(RegressionEntry { name: "weight-12-block-cusp-even".into(), passed: false, detail: e.to_string() }),
    }
    match depth_functional(&comb(CUSP_DEPTH_COMBINATION), 2) {
        Ok(l) => entries.push(annihilates("weight-12-depth-cusp", &l, Algebra::Depth, 12, 2)),
        Err(e) => entries.push(RegressionEntry { name: "weight-12-depth-cusp".into(), passed: false, detail: e.to_string() }),
    }
    for n in 0..=4u32 {
        for a in 0..=n / 2 {
            let name = format!("two-six-two-n{n}-a{a}");
            match two_six_two_sides(n, a) {
                Ok((rb, rd)) => entries.push(relation_entry(name, &rb, &rd, 4, 2 * n + 6)),
                Err(e) => entries.push(RegressionEntry { name, passed: false, detail: e.to_string() }),
            }
        }
    }
    if include_corrected {
        for rel in &CORRECTED_RELATIONS {
            entries.push(relation_entry(rel.name.into(), &comb(rel.block), &comb(rel.depth), rel.lie_degree, rel.weight));
        }
    }
    RegressionReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn z(e: &[u32]) -> ZetaIndex {
        ZetaIndex::plain(e.to_vec()).unwrap()
    }

    #[test]
    fn weight_eleven_relation_verifies() {
        let c = verify_relation(&comb(STATED_RELATIONS[0].block), &comb(STATED_RELATIONS[0].depth), 3, 11).unwrap();
        assert!(c.is_verified());
        assert!(!c.vacuous);
        assert!(c.hypotheses.block_even_on_component);
        assert!(c.hypotheses.depth_syntactically_even);
        assert!(c.hypotheses.equal_on_even_component);
        assert!(c.verified_against.iter().all(|v| v.difference == "0"));
    }

    #[test]
    fn perturbed_relation_fails() {
        let c = verify_relation(&comb("z:{2,2,5,2} - z:{2,5,2,2}"), &comb("z:{1,3,7} - 2*z:{1,5,5}"), 3, 11).unwrap();
        assert!(!c.is_verified());
        assert!(c.offending_word.is_some());
    }

    #[test]
    fn empty_relation_is_trivially_verified() {
        let c = verify_relation(&Combination::new(), &Combination::new(), 2, 12).unwrap();
        assert!(c.is_verified());
    }

    #[test]
    fn grading_errors() {
        assert!(matches!(verify_relation(&comb("z:{2,2,5,2}"), &comb("z:{1,3,7}"), 3, 12), Err(Error::MixedGrading(_))));
        assert!(matches!(verify_relation(&comb("z:{2,2,5,2}"), &comb("z:{3,8}"), 3, 11), Err(Error::MixedGrading(_))));
        assert!(verify_relation(&Combination::new(), &Combination::new(), 0, 3).is_err());
    }

    #[test]
    fn dictionary_examples() {
        let e = odd_to_hoffman(&z(&[3, 5])).unwrap();
        assert_eq!(e.to_string(), "1/4 * z:{l=1;3,2,2}");
        let e = odd_to_hoffman(&z(&[3, 3])).unwrap();
        assert_eq!(e.to_string(), "-1/4 * z:{l=1;3,2}");
        let e = odd_to_hoffman(&z(&[1, 5])).unwrap();
        assert_eq!(e.to_string(), "-1/4 * z:{l=2;2,2}");
        assert!(odd_to_hoffman(&z(&[2, 3])).is_err());
        assert_eq!(odd_to_hoffman(&z(&[3])).unwrap().scale, ratio(-1, 2));
    }

    #[test]
    fn reduction_rules() {
        let x = FormalIndex { leading: 1, tokens: vec![Token::Twos(-1), Token::Entry(3), Token::Twos(-1), Token::Entry(3), Token::Twos(2)] };
        assert_eq!(reduce_formal(x), HoffmanTarget::Reduced(ZetaIndex::new(3, vec![2, 2]).unwrap()));
        let x = FormalIndex { leading: 1, tokens: vec![Token::Entry(3), Token::Twos(-1), Token::Entry(3), Token::Twos(-1), Token::Entry(3), Token::Twos(1)] };
        assert_eq!(reduce_formal(x), HoffmanTarget::Reduced(ZetaIndex::new(1, vec![5, 2]).unwrap()));
        let x = FormalIndex { leading: 1, tokens: vec![Token::Entry(3), Token::Twos(-1)] };
        assert!(matches!(reduce_formal(x), HoffmanTarget::Unreduced(_)));
    }

    /// The reduced index matches the word of `I(1, 2k_1+1, ..., 2k_r+2)`.
    #[test]
    fn dictionary_matches_word_route() {
        for w in 1..=21u32 {
            for r in 1..=4usize {
                for e in odd_compositions(w, r) {
                    let zi = z(&e);
                    let entry = odd_to_hoffman(&zi).unwrap();
                    let word = almost_hoffman_blocks(&zi).unwrap().to_word().unwrap();
                    let (via_word, _) = ZetaIndex::from_word(&word).unwrap();
                    assert_eq!(entry.target, HoffmanTarget::Reduced(via_word.clone()), "{zi}");
                    assert_eq!(via_word.weight(), w);
                }
            }
        }
    }

    #[test]
    fn dictionary_entries_verify() {
        for e in odd_compositions(13, 2).into_iter().chain(odd_compositions(15, 3)) {
            let entry = odd_to_hoffman(&z(&e)).unwrap();
            assert!(verify_dictionary_entry(&entry).unwrap().is_verified(), "{e:?}");
            // Same relation with the block tuple as the block side.
            let HoffmanTarget::Reduced(t) = &entry.target else { panic!() };
            let (_, sign) = t.to_word();
            let coef = &entry.scale * triangle_scale(e.len()) * sign.to_rational();
            let rb = Combination::single(coef, Symbol::Blocks(almost_hoffman_blocks(&z(&e)).unwrap()));
            let rd = Combination::single(rat(1), Symbol::Zeta(z(&e)));
            assert!(verify_relation(&rb, &rd, e.len(), t.weight()).unwrap().is_verified(), "{e:?}");
        }
    }

    #[test]
    fn two_six_two_examples() {
        assert!(two_six_two(1, 0).unwrap().is_verified());
        assert!(two_six_two(2, 1).unwrap().is_verified());
        assert!(two_six_two(4, 1).unwrap().is_verified());
        assert!(matches!(two_six_two(1, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn synthesis_examples() {
        let (rb, _) = two_six_two_sides(1, 0).unwrap();
        let (rd, cert) = synthesize_depth_side(&rb, 4, 8).unwrap();
        assert!(rd.is_empty());
        assert!(cert.vacuous && cert.is_verified());

        let (rb, _) = two_six_two_sides(4, 1).unwrap();
        let (rd, cert) = synthesize_depth_side(&rb, 4, 14).unwrap();
        assert!(cert.is_verified());
        let (rd2, _) = synthesize_depth_side(&rb.scale(&rat(2)), 4, 14).unwrap();
        assert_eq!(rd2, rd.scale(&rat(2)));

        let entry = odd_to_hoffman(&z(&[3, 5])).unwrap();
        let HoffmanTarget::Reduced(t) = &entry.target else { panic!() };
        let rb = Combination::single(&entry.scale * rat(4), Symbol::Zeta(t.clone()));
        let (rd, cert) = synthesize_depth_side(&rb, 2, 8).unwrap();
        assert!(cert.is_verified());
        assert_eq!(rd, Combination::single(rat(1), Symbol::Zeta(z(&[3, 5]))));

        let err = synthesize_depth_side(&comb("b:{4,3,3}"), 2, 8);
        assert!(matches!(err, Err(Error::Precondition(_))), "{err:?}");
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = two_six_two(2, 0).unwrap();
        let text = serde_json::to_string_pretty(&c).unwrap();
        let back: RelationCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let f = RelationFile::new(&comb("z:{2,2,5,2} - z:{2,5,2,2}"), &comb("z:{1,3,7} - z:{1,5,5}"), 3, 11);
        let text = serde_json::to_string(&f).unwrap();
        let back: RelationFile = serde_json::from_str(&text).unwrap();
        assert!(verify_relation_file(&back).unwrap().is_verified());
    }
}
