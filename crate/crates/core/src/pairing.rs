//! Coefficient-extraction functionals attached to depth-homogeneous and
//! block-homogeneous combinations of symbols.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{shared_component, Algebra, Component};
use crate::error::{Error, Result};
use crate::lie::SpanKind;
use crate::poly::{parse_rational, Poly, Rational};
use crate::words::{Combination, Sign, Symbol};

/// `Σ c_α · [z^α]` over exponent patterns `α` of length `arity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Functional {
    pub fn zero(arity: usize) -> Self {
        Functional { arity, terms: BTreeMap::new() }
    }

    /// Merges patterns; patterns with a negative entry extract a nonexistent
    /// monomial and are dropped.
    pub fn from_patterns<I>(arity: usize, patterns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut f = Functional::zero(arity);
        for (pat, c) in patterns {
            f.add_pattern(&pat, c)?;
        }
        Ok(f)
    }

    fn add_pattern(&mut self, pat: &[i64], c: Rational) -> Result<()> {
        if pat.len() != self.arity {
            return Err(Error::ArityMismatch { functional: self.arity, poly: pat.len() });
        }
        if pat.iter().any(|&e| e < 0) {
            return Ok(());
        }
        let key: Vec<u32> = pat.iter().map(|&e| e as u32).collect();
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            let key: Vec<u32> = pat.iter().map(|&e| e as u32).collect();
            self.terms.remove(&key);
        }
        Ok(())
    }

    /// The single extractor `[z^pattern]`.
    pub fn extractor(pattern: &[u32]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(pattern.to_vec(), Rational::from_integer(1.into()));
        Functional { arity: pattern.len(), terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> Functional {
        let mut out = Functional::zero(self.arity);
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect();
        }
        out
    }

    pub fn sub(&self, other: &Functional) -> Result<Functional> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { functional: self.arity, poly: other.arity });
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            let pat: Vec<i64> = p.iter().map(|&e| e as i64).collect();
            out.add_pattern(&pat, -c.clone())?;
        }
        Ok(out)
    }

    /// Syntactic test: every retained pattern is all-even.
    pub fn is_totally_even(&self) -> bool {
        self.terms.keys().all(|p| p.iter().all(|e| e % 2 == 0))
    }

    /// Patterns with an odd entry.
    pub fn odd_patterns(&self) -> Vec<Vec<u32>> {
        self.terms.keys().filter(|p| p.iter().any(|e| e % 2 == 1)).cloned().collect()
    }

    /// The totally even part `L ∘ π_e`.
    pub fn even_part(&self) -> Functional {
        Functional {
            arity: self.arity,
            terms: self.terms.iter().filter(|(p, _)| p.iter().all(|e| e % 2 == 0)).map(|(p, c)| (p.clone(), c.clone())).collect(),
        }
    }

    pub fn eval(&self, p: &Poly) -> Result<Rational> {
        if p.nvars() != self.arity {
            return Err(Error::ArityMismatch { functional: self.arity, poly: p.nvars() });
        }
        Ok(self.terms.iter().map(|(pat, c)| c * p.coeff(pat)).sum())
    }

    /// Values on every row of a component.
    pub fn eval_component(&self, c: &Component) -> Result<Vec<Rational>> {
        c.row_polys().iter().map(|p| self.eval(p)).collect()
    }

    pub fn to_json(&self) -> FunctionalJson {
        FunctionalJson {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| PatternJson { pattern: p.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &FunctionalJson) -> Result<Functional> {
        let pats = j
            .terms
            .iter()
            .map(|t| Ok((t.pattern.iter().map(|&e| e as i64).collect(), parse_rational(&format!("{}/{}", t.num, t.den))?)))
            .collect::<Result<Vec<_>>>()?;
        Functional::from_patterns(j.arity, pats)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalJson {
    pub arity: usize,
    pub terms: Vec<PatternJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub pattern: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// Each `I(0; {0}^{k_0} 1 ... 1 {0}^{k_r}; 1)` contributes its coefficient times
/// `[z_0^{k_0} ... z_r^{k_r}]`.
pub fn depth_functional(r: &Combination, depth: usize) -> Result<Functional> {
    let mut f = Functional::zero(depth + 1);
    for (c, sym) in r.terms() {
        let (word, sign) = sym.to_signed_word()?;
        if word.depth() != depth {
            return Err(Error::MixedGrading(format!("{sym} has depth {}, expected {depth}", word.depth())));
        }
        let pat: Vec<i64> = word.zero_runs().into_iter().map(i64::from).collect();
        f.add_pattern(&pat, c * sign.to_rational())?;
    }
    Ok(f)
}

/// Each `I(ℓ_0, ..., ℓ_r)` contributes
/// `[z^{(ℓ_0−2, ℓ_1−1, ..., ℓ_r−1)}] − [z^{(ℓ_0−1, ..., ℓ_{r−1}−1, ℓ_r−2)}]`.
pub fn block_functional(r: &Combination, block_degree: usize) -> Result<Functional> {
    let mut f = Functional::zero(block_degree + 1);
    for (c, sym) in r.terms() {
        // Tuples are read as indices directly, whether or not they encode a word.
        let (blocks, sign) = match sym {
            Symbol::Blocks(b) => (b.clone(), Sign::Plus),
            _ => {
                let (word, sign) = sym.to_signed_word()?;
                (word.block_decompose(), sign)
            }
        };
        if blocks.block_degree() != block_degree {
            return Err(Error::MixedGrading(format!(
                "{sym} has block degree {}, expected {block_degree}",
                blocks.block_degree()
            )));
        }
        let ls: Vec<i64> = blocks.lengths().iter().map(|&l| l as i64 - 1).collect();
        let coef = c * sign.to_rational();
        let mut first = ls.clone();
        first[0] -= 1;
        let mut second = ls;
        *second.last_mut().expect("nonempty") -= 1;
        f.add_pattern(&first, coef.clone())?;
        f.add_pattern(&second, -coef)?;
    }
    Ok(f)
}

/// Semantic evenness on a component: `L(ξ) = L(π_e ξ)` for every spanning `ξ`.
pub fn is_totally_even_on(l: &Functional, algebra: Algebra, weight: u32, degree: usize) -> Result<bool> {
    let odd = Functional { arity: l.arity, terms: l.terms.iter().filter(|(p, _)| p.iter().any(|e| e % 2 == 1)).map(|(p, c)| (p.clone(), c.clone())).collect() };
    if odd.is_zero() {
        return Ok(true);
    }
    equal_on_component(&odd, &Functional::zero(l.arity), algebra, weight, degree)
}

/// True iff `L1` and `L2` agree on every spanning bracket word of the component.
pub fn equal_on_component(l1: &Functional, l2: &Functional, algebra: Algebra, weight: u32, degree: usize) -> Result<bool> {
    if l1.arity != degree + 1 || l2.arity != degree + 1 {
        return Err(Error::ArityMismatch { functional: l1.arity.max(l2.arity), poly: degree + 1 });
    }
    let diff = l1.sub(l2)?;
    if diff.is_zero() {
        return Ok(true);
    }
    let c = shared_component(algebra, weight, degree, SpanKind::Lyndon)?;
    Ok(diff.eval_component(&c)?.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eval_bracket_word, graded_component};
    use crate::block::{block_factor, p_gen, pi_even};
    use crate::poly::{rat, ratio};
    use crate::words::{BlockTuple, Word, ZetaIndex};
    use proptest::prelude::*;

    fn comb(s: &str) -> Combination {
        s.parse().unwrap()
    }

    fn pats(f: &Functional) -> Vec<(Vec<u32>, Rational)> {
        f.terms().map(|(p, c)| (p.clone(), c.clone())).collect()
    }

    #[test]
    fn depth_functional_examples() {
        let f = depth_functional(&comb("z:{1,3,7}"), 3).unwrap();
        assert_eq!(pats(&f), vec![(vec![0, 0, 2, 6], rat(-1))]);
        assert!(f.is_totally_even());
        let f = depth_functional(&comb("z:{3}"), 1).unwrap();
        assert_eq!(pats(&f), vec![(vec![0, 2], rat(-1))]);
        assert!(!depth_functional(&comb("z:{2,3,7}"), 3).unwrap().is_totally_even());
        assert!(matches!(depth_functional(&comb("z:{3} + z:{1,2}"), 1), Err(Error::MixedGrading(_))));
    }

    #[test]
    fn block_functional_examples() {
        let f = block_functional(&comb("b:{4,3,3}"), 2).unwrap();
        assert_eq!(pats(&f), vec![(vec![2, 2, 2], rat(1)), (vec![3, 2, 1], rat(-1))]);
        let f = block_functional(&comb("b:{2,2}"), 1).unwrap();
        assert_eq!(pats(&f), vec![(vec![0, 1], rat(1)), (vec![1, 0], rat(-1))]);
        // I(1, 2k_1+1, 2k_2+2) keeps only the second extractor.
        let f = block_functional(&comb("b:{1,3,6}"), 2).unwrap();
        assert_eq!(pats(&f), vec![(vec![0, 2, 4], rat(-1))]);
        assert!(matches!(block_functional(&comb("b:{2,2} + b:{2}"), 1), Err(Error::MixedGrading(_))));
    }

    #[test]
    fn evenness_is_semantic_for_the_weight_eleven_example() {
        let rb = comb("z:{2,2,5,2} - z:{2,5,2,2}");
        let f = block_functional(&rb, 3).unwrap();
        assert!(!f.is_totally_even());
        assert!(is_totally_even_on(&f, Algebra::Block, 11, 3).unwrap());
        assert!(!is_totally_even_on(&Functional::extractor(&[3, 2, 1]), Algebra::Block, 8, 2).unwrap());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Functional::extractor(&[1, 1]).eval(p_gen(1).unwrap().poly()).unwrap(), rat(3));
        assert_eq!(Functional::extractor(&[1, 1]).eval(&Poly::zero(2)).unwrap(), rat(0));
        assert!(Functional::extractor(&[1, 1]).eval(&Poly::zero(3)).is_err());
    }

    #[test]
    fn component_equality_examples() {
        let l = Functional::extractor(&[2, 0]);
        assert!(equal_on_component(&l, &l, Algebra::Depth, 3, 1).unwrap());
        assert!(equal_on_component(&l, &Functional::extractor(&[0, 2]), Algebra::Depth, 3, 1).unwrap());
        assert!(!equal_on_component(&l, &Functional::extractor(&[1, 1]), Algebra::Depth, 3, 1).unwrap());
        assert!(equal_on_component(&l, &Functional::extractor(&[1, 1, 1]), Algebra::Depth, 3, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = Functional::from_patterns(2, [(vec![2, 0], ratio(3, 4)), (vec![-1, 3], rat(5)), (vec![0, 2], rat(-1))]).unwrap();
        assert_eq!(f.terms().count(), 2);
        let text = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(Functional::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), f);
    }

    /// Multiply-out oracle: the coefficient of `z^ℓ` in `z_0⋯z_r (z_0 − z_r) q`
    /// equals the block functional of `I(ℓ)` on `q`.
    #[test]
    fn block_extraction_oracle() {
        for weight in 3..=13u32 {
            for degree in 1..=3usize {
                let c = graded_component(Algebra::Block, weight, degree, SpanKind::Lyndon).unwrap();
                let factor = block_factor(degree + 1);
                let polys = c.row_polys();
                let lifted: Vec<Poly> = polys.iter().map(|q| &factor * q).collect();
                for ls in compositions(weight + 2, degree + 1) {
                    let sym = Symbol::Blocks(BlockTuple::new(ls.clone()).unwrap());
                    let f = block_functional(&Combination::single(rat(1), sym), degree).unwrap();
                    for (q, s) in polys.iter().zip(&lifted) {
                        assert_eq!(s.coeff(&ls), f.eval(q).unwrap(), "{ls:?}");
                    }
                }
            }
        }
    }

    /// Word-model oracle: reading the k-pattern off the word directly.
    #[test]
    fn depth_extraction_oracle() {
        for weight in 3..=12u32 {
            for depth in 1..=3usize {
                let c = graded_component(Algebra::Depth, weight, depth, SpanKind::Lyndon).unwrap();
                let polys = c.row_polys();
                for bits in 0u32..(1 << weight) {
                    let letters: Vec<u8> = (0..weight).map(|i| (bits >> i & 1) as u8).collect();
                    let w = Word::new(letters).unwrap();
                    if w.depth() != depth {
                        continue;
                    }
                    let (z, sign) = ZetaIndex::from_word(&w).unwrap();
                    let f = depth_functional(&Combination::single(rat(1), Symbol::Zeta(z)), depth).unwrap();
                    let text = w.to_string();
                    let runs: Vec<u32> = text.split('1').map(|zeros| zeros.len() as u32).collect();
                    let parity = if depth % 2 == 0 { rat(1) } else { rat(-1) };
                    assert_eq!(sign.to_rational(), parity);
                    for q in polys {
                        assert_eq!(f.eval(q).unwrap(), parity.clone() * q.coeff(&runs));
                    }
                }
            }
        }
    }

    fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
        if parts == 1 {
            return if total >= 1 { vec![vec![total]] } else { vec![] };
        }
        (1..total)
            .flat_map(|first| {
                compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }

    proptest! {
        #[test]
        fn even_functionals_ignore_odd_parts(a in 0u32..3, b in 0u32..3, word in prop::sample::select(vec!["[3,5]", "[3,7]", "[5,7]", "[3,9]"])) {
            let l = Functional::extractor(&[2 * a, 2 * b, 2]);
            let p = eval_bracket_word(&word.parse().unwrap(), Algebra::Block).unwrap();
            prop_assert_eq!(l.eval(&p).unwrap(), l.eval(&pi_even(&p)).unwrap());
        }
    }
}
