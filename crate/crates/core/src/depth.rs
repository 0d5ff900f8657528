//! The polynomial model of the depth-graded Lie algebra generated by
//! `φ_{2k+1} = (z_0 − z_1)^{2k}`.

use crate::algebra::{eval_bracket_word, Algebra, GradedElem};
use crate::block::generator_bracket;
use crate::error::{Error, Result};
use crate::lie::{span_words, BracketWord, SpanKind};
use crate::poly::Poly;

pub fn phi(k: u32) -> Result<GradedElem> {
    if k == 0 {
        return Err(Error::ZeroGenerator(k));
    }
    let d = &Poly::var(2, 0) - &Poly::var(2, 1);
    Ok(GradedElem::new(2 * k + 1, d.pow(2 * k)))
}

/// `f ∘ g` for `f ∈ Q[z_0..z_r]`, `g ∈ Q[z_0..z_s]`:
///
/// `Σ_{i=0}^{s} f(z_i..z_{i+r}) g(z_0..z_i, z_{i+r+1}..z_{r+s})
///  + (−1)^{deg f + r} Σ_{i=1}^{s} f(z_{i+r}..z_i) g(z_0..z_{i−1}, z_{i+r}..z_{r+s})`.
pub fn circ(f: &GradedElem, g: &GradedElem) -> Result<GradedElem> {
    let r = f.depth();
    let s = g.depth();
    if r == 0 || s == 0 {
        return Err(Error::Precondition("circ needs depth at least 1 on both sides".into()));
    }
    let weight = f.weight() + g.weight();
    let out = r + s + 1;
    let Some(deg_f) = f.poly().degree() else {
        return Ok(GradedElem::new(weight, Poly::zero(out)));
    };
    let mut acc = Poly::zero(out);
    for i in 0..=s {
        let fv: Vec<usize> = (i..=i + r).collect();
        let gv: Vec<usize> = (0..=i).chain(i + r + 1..out).collect();
        acc = &acc + &(&f.poly().remap(&fv, out)? * &g.poly().remap(&gv, out)?);
    }
    let mut second = Poly::zero(out);
    for i in 1..=s {
        let fv: Vec<usize> = (i..=i + r).rev().collect();
        let gv: Vec<usize> = (0..i).chain(i + r..out).collect();
        second = &second + &(&f.poly().remap(&fv, out)? * &g.poly().remap(&gv, out)?);
    }
    if (deg_f as usize + r) % 2 == 1 {
        second = -&second;
    }
    Ok(GradedElem::new(weight, &acc + &second))
}

/// `{f, g} = f ∘ g − g ∘ f`.
pub fn dbracket(f: &GradedElem, g: &GradedElem) -> Result<GradedElem> {
    let a = circ(f, g)?;
    let b = circ(g, f)?;
    Ok(GradedElem::new(a.weight(), a.poly() - b.poly()))
}

/// Reversal `f(z_0..z_r) = (−1)^{r+1} f(z_r..z_0)` and cyclic
/// `f(z_0..z_r) = f(z_1..z_r, z_0)` invariance, in that order.
pub fn dihedral_check(f: &GradedElem) -> (bool, bool) {
    let p = f.poly();
    let n = p.nvars();
    let rev: Vec<usize> = (0..n).rev().collect();
    let reversed = p.remap(&rev, n).expect("permutation");
    let reversal = if n % 2 == 1 { reversed == -p } else { reversed == *p };
    // f(z_1, ..., z_r, z_0): variable j of f receives z_{j+1}.
    let cyc: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
    let cyclic = p.remap(&cyc, n).expect("permutation") == *p;
    (reversal, cyclic)
}

/// The generator form of the bracket for depth-1 `f` and dihedrally symmetric
/// `g`; cross-checked against [`dbracket`].
pub fn dbracket_via_dihedral(f: &GradedElem, g: &GradedElem) -> Result<GradedElem> {
    if f.depth() != 1 {
        return Err(Error::Precondition(format!("left argument must have depth 1, has depth {}", f.depth())));
    }
    if dihedral_check(g) != (true, true) {
        return Err(Error::Precondition("right argument violates the dihedral symmetries".into()));
    }
    let fast = GradedElem::new(f.weight() + g.weight(), generator_bracket(f.poly(), g.poly())?);
    let general = dbracket(f, g)?;
    if fast != general {
        return Err(Error::BracketMismatch(format!("weights {} and {}", f.weight(), g.weight())));
    }
    Ok(fast)
}

/// Spanning bracket words of the (weight, depth) component with their images.
pub fn sdg_span(weight: u32, depth: usize, kind: SpanKind) -> Result<Vec<(BracketWord, GradedElem)>> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    span_words(kind, weight, depth)
        .into_iter()
        .map(|w| {
            let p = eval_bracket_word(&w, Algebra::Depth)?;
            Ok((w, GradedElem::new(weight, p)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn ph(k: u32) -> GradedElem {
        phi(k).unwrap()
    }

    #[test]
    fn phi_examples() {
        let p = ph(1);
        let want = Poly::from_terms(2, [(vec![2, 0], rat(1)), (vec![1, 1], rat(-2)), (vec![0, 2], rat(1))]).unwrap();
        assert_eq!(p.poly(), &want);
        assert_eq!(ph(2).poly().len(), 5);
        assert_eq!(p.weight(), 3);
        assert!(phi(0).is_err());
        for k in 1..6 {
            assert_eq!(ph(k).poly().remap(&[1, 0], 2).unwrap(), *ph(k).poly());
        }
    }

    /// Term-by-term evaluation of the circ formula at integer points.
    fn circ_at(f: &Poly, g: &Poly, z: &[i64]) -> Rational {
        let r = f.nvars() - 1;
        let s = g.nvars() - 1;
        let at = |p: &Poly, idx: &[usize]| -> Rational {
            p.terms()
                .map(|(m, c)| {
                    m.exps().iter().zip(idx).fold(c.clone(), |acc, (&e, &i)| acc * rat(z[i].pow(e)))
                })
                .sum()
        };
        let sign = if (f.degree().unwrap() as usize + r).is_multiple_of(2) { rat(1) } else { rat(-1) };
        let mut total = Rational::zero();
        for i in 0..=s {
            let fi: Vec<usize> = (i..=i + r).collect();
            let mut gi: Vec<usize> = (0..=i).collect();
            gi.extend(i + r + 1..=r + s);
            total += at(f, &fi) * at(g, &gi);
        }
        for i in 1..=s {
            let fi: Vec<usize> = (i..=i + r).rev().collect();
            let mut gi: Vec<usize> = (0..i).collect();
            gi.extend(i + r..=r + s);
            total += sign.clone() * at(f, &fi) * at(g, &gi);
        }
        total
    }

    fn value_at(p: &Poly, z: &[i64]) -> Rational {
        p.terms()
            .map(|(m, c)| m.exps().iter().zip(z).fold(c.clone(), |acc, (&e, &x)| acc * rat(x.pow(e))))
            .sum()
    }

    #[test]
    fn circ_matches_pointwise_oracle() {
        let c = circ(&ph(1), &ph(2)).unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(c.poly().degree(), Some(6));
        let g = dbracket(&ph(1), &ph(2)).unwrap();
        let cg = circ(&ph(1), &g).unwrap();
        for z in [[1, 2, 3, 5], [-2, 0, 7, 1], [3, -1, -4, 2]] {
            assert_eq!(value_at(c.poly(), &z[..3]), circ_at(ph(1).poly(), ph(2).poly(), &z[..3]));
            assert_eq!(value_at(cg.poly(), &z), circ_at(ph(1).poly(), g.poly(), &z));
        }
    }

    #[test]
    fn cusp_relation() {
        let a = dbracket(&ph(1), &ph(4)).unwrap();
        let b = dbracket(&ph(2), &ph(3)).unwrap();
        assert!((a.poly() - &b.poly().scale(&rat(3))).is_zero());
        assert!(dbracket(&ph(1), &ph(1)).unwrap().poly().is_zero());
        let c = dbracket(&ph(1), &ph(2)).unwrap();
        assert!(!c.poly().is_zero());
        assert_eq!(c.poly().degree(), Some(6));
    }

    #[test]
    fn dihedral_examples() {
        for k in 1..5 {
            assert_eq!(dihedral_check(&ph(k)), (true, true));
        }
        assert_eq!(dihedral_check(&dbracket(&ph(1), &ph(2)).unwrap()), (true, true));
        let z0sq = GradedElem::new(3, Poly::var(2, 0).pow(2));
        assert!(!dihedral_check(&z0sq).0);
    }

    #[test]
    fn dihedral_form_agrees() {
        assert_eq!(dbracket_via_dihedral(&ph(1), &ph(4)).unwrap(), dbracket(&ph(1), &ph(4)).unwrap());
        let g = dbracket(&ph(1), &ph(2)).unwrap();
        assert_eq!(dbracket_via_dihedral(&ph(1), &g).unwrap(), dbracket(&ph(1), &g).unwrap());
        let bad = GradedElem::new(5, (0..3).fold(Poly::zero(3), |acc, i| &acc + &Poly::var(3, i).pow(2)));
        assert!(matches!(dbracket_via_dihedral(&ph(1), &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn span_examples() {
        let s = sdg_span(12, 2, SpanKind::Lyndon).unwrap();
        let labels: Vec<String> = s.iter().map(|(w, _)| w.to_string()).collect();
        assert_eq!(labels, vec!["[3,9]", "[5,7]"]);
        let s = sdg_span(9, 3, SpanKind::LeftNormed).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].1.poly().is_zero());
        assert!(sdg_span(10, 3, SpanKind::LeftNormed).unwrap().is_empty());
        for (_, e) in sdg_span(21, 3, SpanKind::LeftNormed).unwrap() {
            assert_eq!(dihedral_check(&e), (true, true));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn bracket_is_antisymmetric_and_additive(a in 1u32..5, b in 1u32..5, c in 1u32..4) {
            let f = dbracket(&ph(a), &ph(c)).unwrap();
            let g = ph(b);
            let fg = dbracket(&f, &g).unwrap();
            let gf = dbracket(&g, &f).unwrap();
            prop_assert_eq!(fg.poly(), &-gf.poly());
            prop_assert_eq!(fg.weight(), f.weight() + g.weight());
            prop_assert_eq!(fg.depth(), f.depth() + g.depth());
        }
    }
}
