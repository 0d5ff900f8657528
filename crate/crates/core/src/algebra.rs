//! Uniform evaluation of bracket words in the three graded models and assembly
//! of graded components into exact matrices.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rayon::prelude::*;

use crate::block::{e_gen, generator_bracket, p_gen};
use crate::depth::{dbracket, phi};
use crate::error::{Error, Result};
use crate::lie::{span_words, BracketWord, LiePoly, SpanKind};
use crate::linalg::QMatrix;
use crate::poly::{Monomial, Poly, Rational};

/// A homogeneous polynomial image with its weight; lives in `n+1` variables
/// for depth (or block degree) `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElem {
    weight: u32,
    poly: Poly,
}

impl GradedElem {
    pub fn new(weight: u32, poly: Poly) -> Self {
        GradedElem { weight, poly }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    /// Depth in the depth model; block degree in the block and even models.
    pub fn depth(&self) -> usize {
        self.poly.nvars().saturating_sub(1)
    }

    pub fn block_degree(&self) -> usize {
        self.depth()
    }
}

/// The three graded models sharing the abstract generators `σ_{2k+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    /// Generated by `φ_{2k+1}` under the depth-graded bracket.
    Depth,
    /// Generated by `p_{2k+1}` under the generator bracket.
    Block,
    /// Generated by `e_{2k+1}` under the generator bracket.
    Even,
}

impl Algebra {
    pub const ALL: [Algebra; 3] = [Algebra::Depth, Algebra::Block, Algebra::Even];

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Depth => "depth",
            Algebra::Block => "block",
            Algebra::Even => "even",
        }
    }

    /// Image of the generator with odd label `2k+1`.
    pub fn generator(self, label: u32) -> Result<Poly> {
        if label < 3 || label.is_multiple_of(2) {
            return Err(Error::Precondition(format!("generator label {label} must be odd and at least 3")));
        }
        let k = (label - 1) / 2;
        Ok(match self {
            Algebra::Depth => phi(k)?,
            Algebra::Block => p_gen(k)?,
            Algebra::Even => e_gen(k)?,
        }
        .into_poly())
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Algebra> {
        match s {
            "depth" => Ok(Algebra::Depth),
            "block" => Ok(Algebra::Block),
            "even" => Ok(Algebra::Even),
            _ => Err(Error::parse(0, format!("unknown algebra {s:?} (depth|block|even)"))),
        }
    }
}

/// `ad_word(y)`: generators act by the generator bracket, and
/// `ad_[a,b] = ad_a ad_b − ad_b ad_a`.
pub fn adjoint(word: &BracketWord, algebra: Algebra, y: &Poly) -> Result<Poly> {
    match word {
        BracketWord::Leaf(l) => {
            let g = algebra.generator(*l)?;
            match algebra {
                Algebra::Depth => {
                    let w = word.weight();
                    Ok(dbracket(&GradedElem::new(w, g), &GradedElem::new(0, y.clone()))?.into_poly())
                }
                Algebra::Block | Algebra::Even => generator_bracket(&g, y),
            }
        }
        BracketWord::Bracket(a, b) => {
            let ab = adjoint(a, algebra, &adjoint(b, algebra, y)?)?;
            let ba = adjoint(b, algebra, &adjoint(a, algebra, y)?)?;
            Ok(&ab - &ba)
        }
    }
}

/// Evaluates a bracket word with leaves sent to `φ`, `p` or `e`.
pub fn eval_bracket_word(word: &BracketWord, algebra: Algebra) -> Result<Poly> {
    match (word, algebra) {
        (BracketWord::Leaf(l), _) => algebra.generator(*l),
        // The depth bracket is defined on arbitrary pairs.
        (BracketWord::Bracket(a, b), Algebra::Depth) => {
            let fa = GradedElem::new(a.weight(), eval_bracket_word(a, algebra)?);
            let fb = GradedElem::new(b.weight(), eval_bracket_word(b, algebra)?);
            Ok(dbracket(&fa, &fb)?.into_poly())
        }
        (BracketWord::Bracket(a, b), _) => adjoint(a, algebra, &eval_bracket_word(b, algebra)?),
    }
}

/// Evaluates a rational combination of bracket words of one grading.
pub fn eval_lie_poly(p: &LiePoly, algebra: Algebra) -> Result<Poly> {
    let (_, degree) = p.grading()?;
    let mut acc = Poly::zero(degree + 1);
    for (c, w) in p.terms() {
        acc = &acc + &eval_bracket_word(w, algebra)?.scale(c);
    }
    Ok(acc)
}

/// Bounds on the size of a component assembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentLimits {
    pub max_weight: u32,
    pub max_degree: usize,
    /// Upper bound on rows × candidate monomials.
    pub max_cells: u64,
}

impl Default for ComponentLimits {
    fn default() -> Self {
        ComponentLimits { max_weight: 64, max_degree: 8, max_cells: 400_000_000 }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Rows are spanning bracket words, columns the monomials occurring in any
/// row in ascending monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub algebra: Algebra,
    pub weight: u32,
    pub degree: usize,
    pub kind: SpanKind,
    pub words: Vec<BracketWord>,
    pub columns: Vec<Monomial>,
    pub matrix: QMatrix,
    polys: Vec<Poly>,
}

impl Component {
    /// The row polynomials, in word order.
    pub fn row_polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        self.matrix.left_nullspace()
    }

    /// Assembles a component from evaluated rows.
    pub fn from_rows(algebra: Algebra, weight: u32, degree: usize, kind: SpanKind, words: Vec<BracketWord>, polys: &[Poly]) -> Result<Self> {
        let cols: BTreeSet<&Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
        let columns: Vec<Monomial> = cols.into_iter().cloned().collect();
        let index = |m: &Monomial| columns.binary_search(m).expect("column collected above");
        let trip: Vec<(usize, usize, Rational)> = polys
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().map(move |(m, c)| (i, m, c.clone())))
            .map(|(i, m, c)| (i, index(m), c))
            .collect();
        let matrix = QMatrix::from_triplets(polys.len(), columns.len(), trip)?;
        Ok(Component { algebra, weight, degree, kind, words, columns, matrix, polys: polys.to_vec() })
    }

    /// Rebuilds a component from a stored matrix.
    pub fn from_matrix(algebra: Algebra, weight: u32, degree: usize, kind: SpanKind, words: Vec<BracketWord>, columns: Vec<Monomial>, matrix: QMatrix) -> Result<Self> {
        if matrix.nrows() != words.len() || matrix.ncols() != columns.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} words and {} columns",
                matrix.nrows(),
                matrix.ncols(),
                words.len(),
                columns.len()
            )));
        }
        let polys = (0..matrix.nrows())
            .map(|i| {
                let terms = matrix.row(i).iter().map(|(j, v)| (columns[*j].exps().to_vec(), v.clone()));
                Poly::from_terms(degree + 1, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Component { algebra, weight, degree, kind, words, columns, matrix, polys })
    }
}

pub fn graded_component(algebra: Algebra, weight: u32, degree: usize, kind: SpanKind) -> Result<Component> {
    graded_component_with_limits(algebra, weight, degree, kind, &ComponentLimits::default())
}

type ComponentKey = (Algebra, u32, usize, SpanKind);

fn memo() -> &'static Mutex<HashMap<ComponentKey, Arc<Component>>> {
    static MEMO: OnceLock<Mutex<HashMap<ComponentKey, Arc<Component>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// [`graded_component`], memoized for the lifetime of the process.
pub fn shared_component(algebra: Algebra, weight: u32, degree: usize, kind: SpanKind) -> Result<Arc<Component>> {
    let key = (algebra, weight, degree, kind);
    if let Some(c) = memo().lock().expect("component memo poisoned").get(&key) {
        return Ok(Arc::clone(c));
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    let c = Arc::new(graded_component(algebra, weight, degree, kind)?);
    memo().lock().expect("component memo poisoned").entry(key).or_insert_with(|| Arc::clone(&c));
    Ok(c)
}

pub fn graded_component_with_limits(
    algebra: Algebra,
    weight: u32,
    degree: usize,
    kind: SpanKind,
    limits: &ComponentLimits,
) -> Result<Component> {
    if degree == 0 {
        return Err(Error::Precondition("Lie degree must be at least 1".into()));
    }
    if weight > limits.max_weight || degree > limits.max_degree {
        return Err(Error::ResourceLimit(format!(
            "component ({weight}, {degree}) exceeds bounds weight <= {}, degree <= {}",
            limits.max_weight, limits.max_degree
        )));
    }
    let words = span_words(kind, weight, degree);
    // Polynomial degree weight − degree in degree + 1 variables.
    let monomials = if weight as usize >= degree { binomial(weight as u64, degree as u64) } else { 0 };
    let cells = monomials.saturating_mul(words.len() as u64);
    if cells > limits.max_cells {
        return Err(Error::ResourceLimit(format!("component ({weight}, {degree}) needs about {cells} cells")));
    }
    let polys = words
        .par_iter()
        .map(|w| eval_bracket_word(w, algebra))
        .collect::<Result<Vec<Poly>>>()?;
    Component::from_rows(algebra, weight, degree, kind, words, &polys)
}

/// `2^r`.
pub fn triangle_scale(degree: usize) -> Rational {
    (0..degree).fold(Rational::one(), |acc, _| acc * Rational::from_integer(2.into()))
}
