//! The reduced block-graded model, its totally even quotient, and the
//! generator bracket both of them share with the dihedral form of the
//! depth-graded bracket.

use num_traits::One;

use crate::algebra::GradedElem;
use crate::error::{Error, Result};
use crate::poly::{pow2, Poly, Rational};

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroGenerator(k));
    }
    Ok(())
}

fn sum_and_difference() -> (Poly, Poly) {
    let (z0, z1) = (Poly::var(2, 0), Poly::var(2, 1));
    (&z0 + &z1, &z0 - &z1)
}

/// `p_{2k+1} = ((2^{2k+1} − 1)(z_0+z_1)^{2k} + (z_0−z_1)^{2k}) / 2^{2k}`.
pub fn p_gen(k: u32) -> Result<GradedElem> {
    check_k(k)?;
    let (s, d) = sum_and_difference();
    let big = pow2(2 * k + 1) - Rational::one();
    let poly = (&s.pow(2 * k).scale(&big) + &d.pow(2 * k)).scale(&(Rational::one() / pow2(2 * k)));
    Ok(GradedElem::new(2 * k + 1, poly))
}

/// `s_{2k+1} = z_0 z_1 (z_0 − z_1) p_{2k+1}`, the undivided generator image.
pub fn s_gen(k: u32) -> Result<Poly> {
    let p = p_gen(k)?;
    let (z0, z1) = (Poly::var(2, 0), Poly::var(2, 1));
    Ok(&(&(&z0 * &z1) * &(&z0 - &z1)) * p.poly())
}

/// `e_{2k+1} = (z_0+z_1)^{2k} + (z_0−z_1)^{2k}`.
pub fn e_gen(k: u32) -> Result<GradedElem> {
    check_k(k)?;
    let (s, d) = sum_and_difference();
    Ok(GradedElem::new(2 * k + 1, &s.pow(2 * k) + &d.pow(2 * k)))
}

/// The generator bracket on `q ∈ Q[z_0..z_{n-1}]` with bivariate `r`:
///
/// `Σ_{i=0}^{n} r(z_i, z_{i+1}) (q(.. ẑ_{i+1} ..) − q(.. ẑ_i ..))`, indices mod `n+1`.
pub fn generator_bracket(r: &Poly, q: &Poly) -> Result<Poly> {
    if r.nvars() != 2 {
        return Err(Error::Precondition(format!("left bracket argument must be bivariate, has {} variables", r.nvars())));
    }
    let n = q.nvars();
    let out = n + 1;
    let omit = |j: usize| -> Vec<usize> { (0..out).filter(|&v| v != j).collect() };
    let mut acc = Poly::zero(out);
    for i in 0..out {
        let next = (i + 1) % out;
        let left = r.remap(&[i, next], out)?;
        let diff = &q.remap(&omit(next), out)? - &q.remap(&omit(i), out)?;
        if !diff.is_zero() {
            acc = &acc + &(&left * &diff);
        }
    }
    Ok(acc)
}

/// Bracket of a block-degree-1 element with an arbitrary one.
pub fn bbracket(r: &GradedElem, q: &GradedElem) -> Result<GradedElem> {
    let poly = generator_bracket(r.poly(), q.poly())?;
    Ok(GradedElem::new(r.weight() + q.weight(), poly))
}

/// Keeps the monomials whose exponents are all even.
pub fn pi_even(p: &Poly) -> Poly {
    p.filter_terms(|m| m.is_all_even())
}

/// `2^{-n} Σ_{ε ∈ {±1}^n} p(ε_0 z_0, ..., ε_{n-1} z_{n-1})`; agrees with [`pi_even`].
pub fn pi_even_sign_average(p: &Poly) -> Poly {
    let n = p.nvars();
    let mut acc = Poly::zero(n);
    for mask in 0u32..(1u32 << n) {
        let negate: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        acc = &acc + &p.flip_signs(&negate);
    }
    acc.scale(&(Rational::one() / pow2(n as u32)))
}

/// True iff every monomial of `p` has only even exponents.
pub fn is_totally_even(p: &Poly) -> bool {
    p.terms().all(|(m, _)| m.is_all_even())
}

/// Divisibility by `z_0 z_1 ... z_n (z_0 − z_n)`.
pub fn is_divisible_by_block_factor(p: &Poly) -> bool {
    let n = p.nvars();
    if p.is_zero() {
        return true;
    }
    // Every monomial must contain each variable, and p must vanish at z_0 = z_n.
    if !p.terms().all(|(m, _)| m.exps().iter().all(|&e| e > 0)) {
        return false;
    }
    let mut targets: Vec<usize> = (0..n).collect();
    targets[n - 1] = 0;
    p.remap(&targets, n).map(|q| q.is_zero()).unwrap_or(false)
}

/// `z_0 z_1 ... z_n (z_0 − z_n)` in `n+1` variables.
pub fn block_factor(nvars: usize) -> Poly {
    let mut f = (0..nvars).fold(Poly::one(nvars), |acc, i| &acc * &Poly::var(nvars, i));
    f = &f * &(&Poly::var(nvars, 0) - &Poly::var(nvars, nvars - 1));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::phi;
    use crate::poly::{rat, ratio};
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn two(a: i64, b: i64, c: i64) -> Poly {
        Poly::from_terms(2, [(vec![2, 0], rat(a)), (vec![1, 1], rat(b)), (vec![0, 2], rat(c))]).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(p_gen(1).unwrap().poly(), &two(2, 3, 2));
        assert!(p_gen(2).unwrap().poly().terms().all(|(_, c)| (BigInt::from(16) % c.denom()).is_zero()));
        assert_eq!(e_gen(1).unwrap().poly(), &two(2, 0, 2));
        let e2 = Poly::from_terms(2, [(vec![4, 0], rat(2)), (vec![2, 2], rat(12)), (vec![0, 4], rat(2))]).unwrap();
        assert_eq!(e_gen(2).unwrap().poly(), &e2);
        assert!(matches!(p_gen(0), Err(Error::ZeroGenerator(0))));
        assert!(e_gen(0).is_err());
        assert!(s_gen(0).is_err());
    }

    #[test]
    fn s_generator_leading_coefficient_and_divisibility() {
        for k in 1..6 {
            let s = s_gen(k).unwrap();
            assert_eq!(s.coeff(&[2 * k + 2, 1]), rat(2));
            assert!(is_divisible_by_block_factor(&s));
            assert_eq!(s.degree(), Some(2 * k + 3));
        }
    }

    #[test]
    fn projection_examples() {
        assert!(pi_even(&(&Poly::var(2, 0) * &Poly::var(2, 1))).is_zero());
        assert_eq!(pi_even(p_gen(1).unwrap().poly()), *e_gen(1).unwrap().poly());
        for k in 1..8 {
            let e = e_gen(k).unwrap();
            assert_eq!(pi_even(phi(k).unwrap().poly()), e.poly().scale(&ratio(1, 2)));
            assert_eq!(pi_even(e.poly()), *e.poly());
        }
    }

    #[test]
    fn bracket_shapes() {
        let p3 = p_gen(1).unwrap();
        let p5 = p_gen(2).unwrap();
        let b = bbracket(&p3, &p5).unwrap();
        assert_eq!(b.poly().nvars(), 3);
        assert_eq!(b.poly().degree(), Some(6));
        assert_eq!(b.weight(), 8);
        let bb = bbracket(&p3, &b).unwrap();
        assert_eq!(bb.poly().nvars(), 4);
        assert_eq!(bb.block_degree(), 3);
        assert!(bbracket(&b, &p3).is_err());
        // [p_3, p_3] vanishes by antisymmetry.
        assert!(bbracket(&p3, &p3).unwrap().poly().is_zero());
    }

    fn random_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), -5i64..6), 0..8)
            .prop_map(move |ts| Poly::from_terms(nvars, ts.into_iter().map(|(e, c)| (e, rat(c)))).unwrap())
    }

    proptest! {
        #[test]
        fn projection_routes_agree(p in random_poly(3)) {
            prop_assert_eq!(pi_even(&p), pi_even_sign_average(&p));
            prop_assert_eq!(pi_even(&pi_even(&p)), pi_even(&p));
        }

        #[test]
        fn projection_is_linear(p in random_poly(3), q in random_poly(3), c in -4i64..5) {
            let lhs = pi_even(&(&p + &q.scale(&rat(c))));
            prop_assert_eq!(lhs, &pi_even(&p) + &pi_even(&q).scale(&rat(c)));
        }
    }
}
