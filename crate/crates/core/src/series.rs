//! Truncated bivariate power series in `s` (weight) and `t` (Lie degree), the
//! odd-generator and cusp-form series, and Lie dimensions peeled from a
//! product expansion.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{shared_component, Algebra};
use crate::error::{Error, Result};
use crate::lie::SpanKind;
use crate::poly::{format_rational, rat, Rational};

pub const DEFAULT_S_MAX: u32 = 34;
pub const DEFAULT_T_MAX: usize = 5;
/// Largest accepted weight cutoff for series tables.
pub const MAX_S: u32 = 512;

/// `Σ c[N][r] s^N t^r` for `N ≤ s_max`, `r ≤ t_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    s_max: u32,
    t_max: usize,
    coeffs: Vec<Vec<Rational>>,
}

impl Series2 {
    pub fn zero(s_max: u32, t_max: usize) -> Self {
        Series2 { s_max, t_max, coeffs: vec![vec![Rational::zero(); t_max + 1]; s_max as usize + 1] }
    }

    pub fn one(s_max: u32, t_max: usize) -> Self {
        let mut x = Self::zero(s_max, t_max);
        x.coeffs[0][0] = Rational::one();
        x
    }

    /// `f(s) t^r` from the coefficients of `f`, truncated.
    pub fn from_s(f: &[Rational], r: usize, s_max: u32, t_max: usize) -> Self {
        let mut x = Self::zero(s_max, t_max);
        if r <= t_max {
            for (n, c) in f.iter().enumerate().take(s_max as usize + 1) {
                x.coeffs[n][r] = c.clone();
            }
        }
        x
    }

    pub fn monomial(c: Rational, n: u32, r: usize, s_max: u32, t_max: usize) -> Self {
        let mut x = Self::zero(s_max, t_max);
        if n <= s_max && r <= t_max {
            x.coeffs[n as usize][r] = c;
        }
        x
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Zero outside the truncation.
    pub fn coeff(&self, n: u32, r: usize) -> Rational {
        self.coeffs.get(n as usize).and_then(|row| row.get(r)).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.s_max, self.t_max) != (other.s_max, other.t_max) {
            return Err(Error::Dimension(format!(
                "series truncations differ: ({}, {}) vs ({}, {})",
                self.s_max, self.t_max, other.s_max, other.t_max
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut x = self.clone();
        for (row, orow) in x.coeffs.iter_mut().zip(&other.coeffs) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
        Ok(x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut x = self.clone();
        x.coeffs.iter_mut().flatten().for_each(|v| *v *= c);
        x
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut x = Self::zero(self.s_max, self.t_max);
        for (n1, row1) in self.coeffs.iter().enumerate() {
            for (r1, a) in row1.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (n2, row2) in other.coeffs.iter().enumerate().take(self.coeffs.len() - n1) {
                    for (r2, b) in row2.iter().enumerate().take(self.t_max + 1 - r1) {
                        if !b.is_zero() {
                            x.coeffs[n1 + n2][r1 + r2] += a * b;
                        }
                    }
                }
            }
        }
        Ok(x)
    }

    /// `1/self`; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0][0].clone();
        if c0.is_zero() {
            return Err(Error::Precondition("series has zero constant term and is not invertible".into()));
        }
        let inv0 = Rational::one() / &c0;
        let mut y = Self::zero(self.s_max, self.t_max);
        // Solve self * y = 1 in (N, r) order.
        for n in 0..=self.s_max as usize {
            for r in 0..=self.t_max {
                let mut acc = if n == 0 && r == 0 { Rational::one() } else { Rational::zero() };
                for n1 in 0..=n {
                    for r1 in 0..=r {
                        if (n1, r1) == (0, 0) {
                            continue;
                        }
                        let a = &self.coeffs[n1][r1];
                        if !a.is_zero() {
                            acc -= a * &y.coeffs[n - n1][r - r1];
                        }
                    }
                }
                y.coeffs[n][r] = acc * &inv0;
            }
        }
        Ok(y)
    }

    /// Integer coefficient table `[N][r]`.
    pub fn to_integer_table(&self) -> Result<Vec<Vec<BigInt>>> {
        self.coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        if c.is_integer() {
                            Ok(c.to_integer())
                        } else {
                            Err(Error::Precondition(format!("non-integer coefficient {}", format_rational(c))))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// CSV with header `weight,t0,t1,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight");
        for r in 0..=self.t_max {
            let _ = write!(out, ",t{r}");
        }
        out.push('\n');
        for (n, row) in self.coeffs.iter().enumerate() {
            let _ = write!(out, "{n}");
            for c in row {
                let _ = write!(out, ",{}", format_rational(c));
            }
            out.push('\n');
        }
        out
    }
}

fn check_s_max(s_max: u32) -> Result<()> {
    if s_max > MAX_S {
        return Err(Error::ResourceLimit(format!("weight cutoff {s_max} exceeds {MAX_S}")));
    }
    Ok(())
}

/// `𝒪(s) = s³/(1 − s²)`.
pub fn odd_generator_series(s_max: u32) -> Vec<Rational> {
    (0..=s_max).map(|n| if n >= 3 && n % 2 == 1 { Rational::one() } else { Rational::zero() }).collect()
}

/// `𝒮(s) = s¹²/((1 − s⁴)(1 − s⁶))`.
pub fn cusp_series(s_max: u32) -> Vec<Rational> {
    (0..=s_max)
        .map(|n| {
            if n < 12 {
                return Rational::zero();
            }
            let m = n - 12;
            rat((0..=m / 6).filter(|b| (m - 6 * b) % 4 == 0).count() as i64)
        })
        .collect()
}

/// `1/(1 − A(s) t + Σ_{r≥1} B_r(s) t^r)`; `b[i]` is `B_{i+1}`.
pub fn general_bk_series(a: &[Rational], b: &[Vec<Rational>], s_max: u32, t_max: usize) -> Result<Series2> {
    check_s_max(s_max)?;
    if a.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::Precondition("A(0) must vanish".into()));
    }
    if let Some(i) = b.iter().position(|br| br.first().is_some_and(|c| !c.is_zero())) {
        return Err(Error::Precondition(format!("B_{}(0) must vanish", i + 1)));
    }
    let mut denom = Series2::one(s_max, t_max).sub(&Series2::from_s(a, 1, s_max, t_max))?;
    for (i, br) in b.iter().enumerate() {
        denom = denom.add(&Series2::from_s(br, i + 1, s_max, t_max))?;
    }
    denom.reciprocal()
}

/// `1/(1 − 𝒪(s) t + 𝒮(s) t²)`.
pub fn uneven_bk_series(s_max: u32, t_max: usize) -> Result<Series2> {
    check_s_max(s_max)?;
    let zero = vec![Rational::zero(); s_max as usize + 1];
    general_bk_series(&odd_generator_series(s_max), &[zero, cusp_series(s_max)], s_max, t_max)
}

pub fn uneven_bk_table(s_max: u32, t_max: usize) -> Result<Vec<Vec<BigInt>>> {
    uneven_bk_series(s_max, t_max)?.to_integer_table()
}

pub fn general_bk_table(a: &[Rational], b: &[Vec<Rational>], s_max: u32, t_max: usize) -> Result<Vec<Vec<BigInt>>> {
    general_bk_series(a, b, s_max, t_max)?.to_integer_table()
}

/// `(1 − s^n t^r)^g` for any integer `g`, truncated.
fn binomial_factor(g: &BigInt, n: u32, r: usize, s_max: u32, t_max: usize) -> Series2 {
    let mut x = Series2::zero(s_max, t_max);
    let g = Rational::from_integer(g.clone());
    let mut c = Rational::one();
    let mut j = 0u32;
    while (j * n) <= s_max && (j as usize) * r <= t_max {
        x.coeffs[(j * n) as usize][j as usize * r] = c.clone();
        // C(g, j+1) (−1)^{j+1} from C(g, j) (−1)^j.
        c = -c * (&g - rat(j as i64)) / rat(j as i64 + 1);
        j += 1;
    }
    x
}

/// `g[N][r]` with `h = Π_{N,r ≥ 1} (1 − s^N t^r)^{−g[N][r]}`, peeled in
/// `(r, N)` order; `h` must have constant term 1 and no pure-`s` terms.
pub fn lie_dimensions(h: &Series2) -> Result<Vec<Vec<BigInt>>> {
    let (s_max, t_max) = (h.s_max, h.t_max);
    if h.coeff(0, 0) != Rational::one() || (1..=s_max).any(|n| !h.coeff(n, 0).is_zero()) {
        return Err(Error::Precondition("series must be 1 + O(t)".into()));
    }
    let mut rest = h.clone();
    let mut g = vec![vec![BigInt::zero(); t_max + 1]; s_max as usize + 1];
    for r in 1..=t_max {
        for n in 1..=s_max {
            let c = rest.coeff(n, r);
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(Error::Precondition(format!("non-integer Lie dimension at ({n}, {r})")));
            }
            let gi = c.to_integer();
            rest = rest.mul(&binomial_factor(&gi, n, r, s_max, t_max))?;
            g[n as usize][r] = gi;
        }
    }
    Ok(g)
}

/// `μ(n)`.
fn mobius(mut n: u64) -> i64 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// Free Lie algebra dimensions by weight and degree for `gens[N]` generators
/// of weight `N`: `(1/r) Σ_{d | gcd(N, r)} μ(d) c(N/d, r/d)` with `c` counting words.
pub fn free_lie_dimensions(gens: &[u64], s_max: u32, t_max: usize) -> Vec<Vec<BigInt>> {
    let s = s_max as usize;
    // c[N][r]: words of length r and weight N.
    let mut c = vec![vec![BigInt::zero(); t_max + 1]; s + 1];
    c[0][0] = BigInt::one();
    for r in 1..=t_max {
        for n in 1..=s {
            let mut acc = BigInt::zero();
            for (w, &k) in gens.iter().enumerate().take(n + 1).skip(1) {
                if k > 0 {
                    acc += &c[n - w][r - 1] * BigInt::from(k);
                }
            }
            c[n][r] = acc;
        }
    }
    let mut out = vec![vec![BigInt::zero(); t_max + 1]; s + 1];
    for r in 1..=t_max {
        for n in 1..=s {
            let g = n.gcd(&r);
            let mut acc = BigInt::zero();
            for d in (1..=g).filter(|d| g % d == 0) {
                acc += &c[n / d][r / d] * mobius(d as u64);
            }
            out[n][r] = acc / BigInt::from(r);
        }
    }
    out
}

/// Predicted and computed dimension of one `(weight, degree)` component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub weight: u32,
    pub degree: usize,
    pub predicted: i64,
    pub computed: i64,
    pub mismatch: bool,
}

/// Lie dimensions predicted for an algebra: the uneven series for the depth
/// and even models, the free series `1/(1 − 𝒪 t)` for the block model.
pub fn predicted_dimensions(algebra: Algebra, s_max: u32, t_max: usize) -> Result<Vec<Vec<BigInt>>> {
    let h = match algebra {
        Algebra::Depth | Algebra::Even => uneven_bk_series(s_max, t_max)?,
        Algebra::Block => general_bk_series(&odd_generator_series(s_max), &[], s_max, t_max)?,
    };
    lie_dimensions(&h)
}

/// Computed ranks of the Lyndon-spanned components against predictions, for
/// every weight `≤ s_max` and degree `1..=degree_max` where either is nonzero.
pub fn compare_dimensions(algebra: Algebra, s_max: u32, degree_max: usize) -> Result<Vec<ComparisonRow>> {
    compare_dimensions_with(algebra, s_max, degree_max, |w, r| Ok(shared_component(algebra, w, r, SpanKind::Lyndon)?.rank()))
}

/// As [`compare_dimensions`] with a caller-supplied rank source.
pub fn compare_dimensions_with(
    algebra: Algebra,
    s_max: u32,
    degree_max: usize,
    mut rank: impl FnMut(u32, usize) -> Result<usize>,
) -> Result<Vec<ComparisonRow>> {
    let predicted = predicted_dimensions(algebra, s_max, degree_max)?;
    let mut rows = Vec::new();
    for r in 1..=degree_max {
        for w in 1..=s_max {
            // Lie degree r needs weight at least 3r and parity of r.
            if w < 3 * r as u32 || !(w as usize - r).is_multiple_of(2) {
                continue;
            }
            let p = &predicted[w as usize][r];
            let p = p.to_i64().ok_or_else(|| Error::ResourceLimit(format!("prediction at ({w}, {r}) overflows")))?;
            let computed = rank(w, r)? as i64;
            if p == 0 && computed == 0 {
                continue;
            }
            rows.push(ComparisonRow { weight: w, degree: r, predicted: p, computed, mismatch: p != computed });
        }
    }
    Ok(rows)
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("weight,degree,predicted,computed,mismatch\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{},{},{}", row.weight, row.degree, row.predicted, row.computed, u8::from(row.mismatch));
    }
    out
}

/// CSV of an integer table with header `weight,t1,...`; rows with all
/// entries zero are kept so the weight column is contiguous.
pub fn table_csv(table: &[Vec<BigInt>], first_degree: usize) -> String {
    let mut out = String::from("weight");
    let t_max = table.first().map_or(0, |r| r.len().saturating_sub(1));
    for r in first_degree..=t_max {
        let _ = write!(out, ",t{r}");
    }
    out.push('\n');
    for (n, row) in table.iter().enumerate() {
        let _ = write!(out, "{n}");
        for c in &row[first_degree..] {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    out
}

/// Negative entries flag an over-determined presentation.
pub fn has_negative(table: &[Vec<BigInt>]) -> bool {
    table.iter().flatten().any(|c| c.is_negative())
}
