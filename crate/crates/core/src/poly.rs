//! Exact rationals and sparse multivariate polynomials in `z_0..z_{n-1}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` as a rational.
pub fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::one() << e as usize)
}

/// `"n/d"`, or `"n"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"n"`, `"n/d"` or `"-n/d"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |msg: &str| Error::parse(0, format!("{msg}: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Dense exponent vector, ordered graded-lexicographically: total degree first,
/// then lexicographic on exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_all_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in canonical form: no zero coefficients, every exponent
/// vector of length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Poly::from_terms(nvars, [(vec![0; nvars], c)]).expect("constant has valid arity")
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    /// The variable `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable z_{i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::from_terms(nvars, [(e, Rational::one())]).expect("valid arity")
    }

    /// Builds a polynomial from (exponent vector, coefficient) pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VarCountMismatch { left: nvars, right: e.len() });
            }
            *acc.entry(Monomial(e)).or_insert_with(Rational::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Poly { nvars, terms: acc })
    }

    fn from_map(nvars: usize, map: HashMap<Monomial, Rational>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        // BTreeMap lookup needs an owned key; small vectors make this cheap.
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree of the highest term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_arity(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_arity(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Poly { nvars: self.nvars, terms })
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_arity(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.times(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Poly::from_map(self.nvars, acc))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Composition `p(images[0], ..., images[n-1])`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::ImageCountMismatch { expected: self.nvars, got: images.len() });
        }
        let Some(target) = images.first().map(Poly::nvars) else {
            // A polynomial in zero variables is a constant.
            return Ok(self.clone());
        };
        if let Some(bad) = images.iter().find(|q| q.nvars != target) {
            return Err(Error::VarCountMismatch { left: target, right: bad.nvars });
        }
        // Cache powers per variable: exponents repeat heavily across terms.
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|q| vec![Poly::one(target), q.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Renames variables: `z_j` becomes `z_{targets[j]}` in a ring of `nvars` variables.
    /// Several variables may map to the same target.
    pub fn remap(&self, targets: &[usize], nvars: usize) -> Result<Poly> {
        if targets.len() != self.nvars {
            return Err(Error::ImageCountMismatch { expected: self.nvars, got: targets.len() });
        }
        if let Some(&t) = targets.iter().find(|&&t| t >= nvars) {
            return Err(Error::VarCountMismatch { left: nvars, right: t + 1 });
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (j, &x) in m.exps().iter().enumerate() {
                e[targets[j]] += x;
            }
            *acc.entry(Monomial(e)).or_insert_with(Rational::zero) += c;
        }
        Ok(Poly::from_map(nvars, acc))
    }

    /// Applies `z_i -> -z_i` for every `i` with `negate[i]` set.
    pub fn flip_signs(&self, negate: &[bool]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let odd = m.exps().iter().zip(negate).filter(|(e, &n)| n && *e % 2 == 1).count();
                (m.clone(), if odd % 2 == 1 { -c } else { c.clone() })
            })
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.exps().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Poly> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), parse_rational(&format!("{}/{}", t.num, t.den))?)))
            .collect::<Result<Vec<_>>>()?;
        Poly::from_terms(j.nvars, terms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first reads naturally.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("z{j}") } else { format!("z{j}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics on variable-count mismatch; use [`Poly::try_add`] for fallible input.
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

/// Serialized polynomial; terms sorted by the fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// All exponent vectors of length `nvars` and total degree `deg`, ascending in
/// the monomial order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, rem: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(rem);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=rem {
            prefix.push(e);
            rec(prefix, left - 1, rem - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut Vec::with_capacity(nvars), nvars, deg, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = z(1, 0).pow(2);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn sum_of_squares() {
        let d = &z(2, 0) - &z(2, 1);
        let s = &z(2, 0) + &z(2, 1);
        let got = &d.pow(2) + &s.pow(2);
        let want = Poly::from_terms(2, [(vec![2, 0], rat(2)), (vec![0, 2], rat(2))]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn difference_of_squares() {
        let got = &(&z(2, 0) - &z(2, 1)) * &(&z(2, 0) + &z(2, 1));
        let want = &z(2, 0).pow(2) - &z(2, 1).pow(2);
        assert_eq!(got, want);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        assert!(matches!(z(2, 0).try_add(&z(3, 0)), Err(Error::VarCountMismatch { .. })));
        assert!(matches!(z(2, 0).try_mul(&z(3, 0)), Err(Error::VarCountMismatch { .. })));
        assert!(matches!(z(2, 0).substitute(&[z(2, 0)]), Err(Error::ImageCountMismatch { .. })));
    }

    #[test]
    fn substitution_examples() {
        let xy = &z(2, 0) * &z(2, 1);
        assert_eq!(xy.substitute(&[z(2, 1), z(2, 0)]).unwrap(), xy);
        let d2 = (&z(2, 0) - &z(2, 1)).pow(2);
        let got = d2.substitute(&[-&z(2, 0), z(2, 1)]).unwrap();
        assert_eq!(got, (&z(2, 0) + &z(2, 1)).pow(2));
    }

    #[test]
    fn binomial_coefficient_read_off() {
        let d8 = (&z(2, 0) - &z(2, 1)).pow(8);
        assert_eq!(d8.coeff(&[4, 4]), rat(70));
        assert_eq!(d8.coeff(&[3, 4]), rat(0));
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let mut ms = vec![Monomial::new(vec![2, 0]), Monomial::new(vec![0, 1]), Monomial::new(vec![1, 1])];
        ms.sort();
        assert_eq!(ms, vec![Monomial::new(vec![0, 1]), Monomial::new(vec![1, 1]), Monomial::new(vec![2, 0])]);
        let all = monomials_of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn json_round_trip_and_order() {
        let p = &(&z(2, 0) - &z(2, 1)).pow(3).scale(&ratio(3, 7)) + &Poly::constant(2, ratio(-1, 2));
        let j = p.to_json();
        assert_eq!(j.terms[0].exp, vec![0, 0]);
        assert_eq!(j.terms[0].num, "-1");
        let text = serde_json::to_string(&j).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Poly::from_json(&back).unwrap(), p);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "5/2", "-7/12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn display_is_readable() {
        let p = (&z(2, 0) - &z(2, 1)).pow(2);
        assert_eq!(p.to_string(), "z0^2 - 2*z0*z1 + z1^2");
        assert_eq!(Poly::zero(3).to_string(), "0");
    }

    #[test]
    fn remap_and_sign_flips() {
        let p = &z(2, 0) * &z(2, 1).pow(2);
        assert_eq!(p.remap(&[2, 0], 3).unwrap(), &z(3, 2) * &z(3, 0).pow(2));
        assert_eq!(p.remap(&[1, 1], 2).unwrap(), z(2, 1).pow(3));
        assert_eq!(p.flip_signs(&[true, false]), -&p);
        assert_eq!(p.flip_signs(&[false, true]), p);
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..3, nvars), -4i64..5, 1i64..4), 0..5)
            .prop_map(move |ts| Poly::from_terms(nvars, ts.into_iter().map(|(e, n, d)| (e, ratio(n, d)))).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(3), b in small_poly(3), c in small_poly(3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &Poly::one(3), a.clone());
            prop_assert_eq!(&a + &Poly::zero(3), a.clone());
        }

        #[test]
        fn substitution_composes(p in small_poly(2), a0 in small_poly(2), a1 in small_poly(2),
                                 b0 in small_poly(2), b1 in small_poly(2)) {
            let b = [b0, b1];
            let composed = [a0.substitute(&b).unwrap(), a1.substitute(&b).unwrap()];
            let lhs = p.substitute(&[a0, a1]).unwrap().substitute(&b).unwrap();
            prop_assert_eq!(lhs, p.substitute(&composed).unwrap());
        }

        #[test]
        fn identity_substitution(p in small_poly(3)) {
            let id: Vec<Poly> = (0..3).map(|i| z(3, i)).collect();
            prop_assert_eq!(p.substitute(&id).unwrap(), p);
        }

        #[test]
        fn coefficients_are_linear(a in small_poly(2), b in small_poly(2)) {
            let s = &a + &b;
            for (m, _) in a.terms().chain(b.terms()) {
                prop_assert_eq!(s.coeff(m.exps()), a.coeff(m.exps()) + b.coeff(m.exps()));
            }
        }

        #[test]
        fn no_zero_coefficients_stored(a in small_poly(2), b in small_poly(2)) {
            let p = &(&a * &b) - &(&b * &a);
            prop_assert!(p.is_zero());
            prop_assert!((&a * &b).terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
