//! Sparse multivariate Laurent polynomials in `x_0..x_n` over [`QPoly`].
//!
//! Terms live in a hash map keyed by exponent vector; ordering only matters
//! when rendering. The main consumer is [`ct_of_factor_list`], which extracts
//! one coefficient of a long product without ever forming the full expansion.

use std::collections::HashMap;
use std::fmt;

use crate::error::AlgebraError;
use crate::qpoly::QPoly;

/// Exponent vector of a monomial in `x_0..x_n`; entries may be negative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn new(exps: Vec<i32>) -> Self {
        Monomial(exps)
    }

    /// The monomial `1` in `n + 1` variables.
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n + 1])
    }

    /// `x_i / x_j`.
    pub fn ratio(n: usize, i: usize, j: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[i] += 1;
        e[j] -= 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    /// Ambient `n` (variable count minus one).
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{i}^{e}")?;
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Laurent polynomial in `x_0..x_n` with [`QPoly`] coefficients. No stored
/// coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    n: usize,
    terms: HashMap<Monomial, QPoly>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly {
            n,
            terms: HashMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, QPoly::one())
    }

    pub fn constant(n: usize, c: QPoly) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn term(mono: Monomial, c: QPoly) -> Self {
        let mut f = Self::zero(mono.n());
        f.add_term(mono, c);
        f
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging repeats.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, QPoly)>) -> Self {
        let mut f = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.n(), n, "monomial length does not match ambient n");
            f.add_term(m, c);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QPoly)> {
        self.terms.iter()
    }

    fn add_term(&mut self, mono: Monomial, c: QPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn check_ambient(&self, other: &LaurentPoly) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_ambient(other)?;
        let mut out = LaurentPoly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.n, self.terms.iter().map(|(m, d)| (m.clone(), d * c)))
    }

    /// Replaces `q` by `1` in every coefficient.
    pub fn at_q_one(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), QPoly::constant(c.eval_at_one()))),
        )
    }

    /// Per-variable minimum and maximum exponent over the support.
    fn exponent_bounds(&self) -> (Vec<i32>, Vec<i32>) {
        let mut lo = vec![i32::MAX; self.n + 1];
        let mut hi = vec![i32::MIN; self.n + 1];
        for m in self.terms.keys() {
            for (v, &e) in m.0.iter().enumerate() {
                lo[v] = lo[v].min(e);
                hi[v] = hi[v].max(e);
            }
        }
        (lo, hi)
    }

    /// Terms sorted lexicographically by exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &QPoly)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }
}

/// Canonical rendering: `(coeff)*x0^e0*...` per term, lexicographic monomial
/// order, zero exponents omitted, joined by ` + `.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if !m.is_one() {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

pub fn lp_add(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
    f.add(g)
}

pub fn lp_mul(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
    f.mul(g)
}

/// `prod_{k=0}^{m-1} (1 - q^(offset + k) x^z)`.
///
/// `offset = 0` gives `(z)_m`, `offset = 1` gives `(zq)_m`.
pub fn shifted_factorial(z: &Monomial, m: u32, offset: u32) -> LaurentPoly {
    let n = z.n();
    let mut acc = LaurentPoly::one(n);
    for k in 0..m {
        let factor = LaurentPoly::from_terms(
            n,
            [
                (Monomial::one(n), QPoly::one()),
                (z.clone(), QPoly::monomial(-1, (offset + k) as i64)),
            ],
        );
        acc = acc.mul(&factor).expect("same ambient");
    }
    acc
}

pub fn coeff_of(f: &LaurentPoly, mono: &Monomial) -> QPoly {
    f.terms.get(mono).cloned().unwrap_or_default()
}

/// Constant term in the `x`'s.
pub fn ct_x(f: &LaurentPoly) -> QPoly {
    coeff_of(f, &Monomial::one(f.n))
}

/// Coefficient of `target` in the product of `factors`, computed without
/// expanding the full product.
///
/// Factors are multiplied in ascending order of term count. After each step a
/// partial monomial is kept only if, in every variable, the exponent still
/// needed to reach `target` lies within what the remaining factors can supply.
pub fn ct_of_factor_list(
    factors: &[LaurentPoly],
    target: &Monomial,
) -> Result<QPoly, AlgebraError> {
    let n = target.n();
    for f in factors {
        if f.n != n {
            return Err(AlgebraError::AmbientMismatch {
                left: n,
                right: f.n,
            });
        }
    }
    if factors.iter().any(LaurentPoly::is_empty) {
        return Ok(QPoly::zero());
    }
    let mut order: Vec<&LaurentPoly> = factors.iter().collect();
    order.sort_by_key(|f| f.len());

    let vars = n + 1;
    // residual[k] = summed bounds of order[k..]
    let mut res_lo = vec![vec![0i64; vars]; order.len() + 1];
    let mut res_hi = vec![vec![0i64; vars]; order.len() + 1];
    for k in (0..order.len()).rev() {
        let (lo, hi) = order[k].exponent_bounds();
        for v in 0..vars {
            res_lo[k][v] = res_lo[k + 1][v] + lo[v] as i64;
            res_hi[k][v] = res_hi[k + 1][v] + hi[v] as i64;
        }
    }
    let reachable = |mono: &[i32], k: usize| {
        (0..vars).all(|v| {
            let need = target.0[v] as i64 - mono[v] as i64;
            res_lo[k][v] <= need && need <= res_hi[k][v]
        })
    };

    let mut acc: HashMap<Monomial, QPoly> = HashMap::new();
    if reachable(&target.0.iter().map(|_| 0).collect::<Vec<_>>(), 0) {
        acc.insert(Monomial::one(n), QPoly::one());
    }
    let mut scratch = vec![0i32; vars];
    for (k, factor) in order.iter().enumerate() {
        let mut next: HashMap<Monomial, QPoly> = HashMap::with_capacity(acc.len());
        for (m1, c1) in &acc {
            for (m2, c2) in &factor.terms {
                for v in 0..vars {
                    scratch[v] = m1.0[v] + m2.0[v];
                }
                if !reachable(&scratch, k + 1) {
                    continue;
                }
                let prod = c1 * c2;
                match next.get_mut(scratch.as_slice()) {
                    Some(c) => *c = &*c + &prod,
                    None => {
                        next.insert(Monomial(scratch.clone()), prod);
                    }
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
        if acc.is_empty() {
            return Ok(QPoly::zero());
        }
    }
    Ok(acc.remove(target).unwrap_or_default())
}

impl std::borrow::Borrow<[i32]> for Monomial {
    fn borrow(&self) -> &[i32] {
        &self.0
    }
}

/// Applies `pi^k`, where `pi x_i = x_{i+1}` for `i < n` and `pi x_n = x_0 / q`.
///
/// Equivalently `pi^k x_i = x_{(i+k) mod (n+1)} q^{-floor((i+k)/(n+1))}`.
pub fn pi_action(f: &LaurentPoly, k: usize) -> LaurentPoly {
    let vars = f.n + 1;
    LaurentPoly::from_terms(
        f.n,
        f.terms.iter().map(|(m, c)| {
            let mut exps = vec![0i32; vars];
            let mut q_shift = 0i64;
            for (i, &e) in m.0.iter().enumerate() {
                let dest = i + k;
                exps[dest % vars] += e;
                q_shift -= e as i64 * (dest / vars) as i64;
            }
            (Monomial(exps), c.shift(q_shift))
        }),
    )
}

/// Common total degree of all monomials, or `None` if the degrees differ.
pub fn homogeneous_degree(f: &LaurentPoly) -> Result<Option<i64>, AlgebraError> {
    let mut degrees = f.terms.keys().map(Monomial::degree);
    let first = degrees.next().ok_or(AlgebraError::ZeroPolynomial)?;
    Ok(degrees.all(|d| d == first).then_some(first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x_ratio(n: usize, i: usize, j: usize, c: QPoly) -> LaurentPoly {
        LaurentPoly::term(Monomial::ratio(n, i, j), c)
    }

    fn one_minus(n: usize, i: usize, j: usize) -> LaurentPoly {
        LaurentPoly::one(n)
            .add(&x_ratio(n, i, j, QPoly::constant(-1)))
            .unwrap()
    }

    #[test]
    fn mul_examples() {
        let f = one_minus(1, 0, 1);
        assert_eq!(f.mul(&LaurentPoly::one(1)).unwrap(), f);
        let g = one_minus(1, 1, 0);
        let expected = LaurentPoly::from_terms(
            1,
            [
                (Monomial::one(1), QPoly::constant(2)),
                (Monomial::ratio(1, 0, 1), QPoly::constant(-1)),
                (Monomial::ratio(1, 1, 0), QPoly::constant(-1)),
            ],
        );
        assert_eq!(f.mul(&g).unwrap(), expected);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let err = LaurentPoly::one(1).mul(&LaurentPoly::one(2)).unwrap_err();
        assert_eq!(err, AlgebraError::AmbientMismatch { left: 1, right: 2 });
        assert!(lp_add(&LaurentPoly::one(1), &LaurentPoly::one(3)).is_err());
    }

    #[test]
    fn shifted_factorial_examples() {
        let z = Monomial::ratio(1, 0, 1);
        assert_eq!(shifted_factorial(&z, 0, 0), LaurentPoly::one(1));
        assert_eq!(shifted_factorial(&z, 1, 0), one_minus(1, 0, 1));
        let w = Monomial::ratio(1, 1, 0);
        let expected = LaurentPoly::from_terms(
            1,
            [
                (Monomial::one(1), QPoly::one()),
                (w.clone(), QPoly::from_i64s(1, &[-1, -1])),
                (w.pow(2), QPoly::q_pow(3)),
            ],
        );
        assert_eq!(shifted_factorial(&w, 2, 1), expected);
    }

    #[test]
    fn coefficient_extraction() {
        let f = one_minus(1, 0, 1);
        assert_eq!(ct_x(&f), QPoly::one());
        assert_eq!(coeff_of(&f, &Monomial::new(vec![1, -1])), QPoly::constant(-1));
        assert_eq!(coeff_of(&f, &Monomial::new(vec![5, -5])), QPoly::zero());
    }

    #[test]
    fn factor_list_edge_cases() {
        assert_eq!(ct_of_factor_list(&[], &Monomial::one(2)).unwrap(), QPoly::one());
        assert_eq!(
            ct_of_factor_list(&[], &Monomial::ratio(2, 0, 1)).unwrap(),
            QPoly::zero()
        );
        let with_zero = [one_minus(1, 0, 1), LaurentPoly::zero(1)];
        assert_eq!(ct_of_factor_list(&with_zero, &Monomial::one(1)).unwrap(), QPoly::zero());
        assert!(ct_of_factor_list(&[LaurentPoly::one(2)], &Monomial::one(1)).is_err());
    }

    #[test]
    fn pi_examples() {
        let f = x_ratio(1, 0, 1, QPoly::one());
        assert_eq!(pi_action(&f, 0), f);
        assert_eq!(pi_action(&f, 1), x_ratio(1, 1, 0, QPoly::q_pow(1)));
        // iterating single steps agrees with the closed form
        let g = LaurentPoly::from_terms(
            2,
            [
                (Monomial::new(vec![2, -1, 0]), QPoly::from_i64s(0, &[1, 1])),
                (Monomial::new(vec![0, 3, -1]), QPoly::constant(-4)),
            ],
        );
        let mut step = g.clone();
        for k in 1..=7 {
            step = pi_action(&step, 1);
            assert_eq!(step, pi_action(&g, k));
        }
    }

    #[test]
    fn homogeneity() {
        assert_eq!(homogeneous_degree(&one_minus(1, 0, 1)).unwrap(), Some(0));
        let lin = LaurentPoly::from_terms(
            1,
            [
                (Monomial::new(vec![1, 0]), QPoly::one()),
                (Monomial::new(vec![0, 1]), QPoly::one()),
            ],
        );
        assert_eq!(homogeneous_degree(&lin).unwrap(), Some(1));
        let mixed = LaurentPoly::from_terms(
            1,
            [
                (Monomial::new(vec![1, 0]), QPoly::one()),
                (Monomial::new(vec![1, 1]), QPoly::one()),
            ],
        );
        assert_eq!(homogeneous_degree(&mixed).unwrap(), None);
        assert_eq!(
            homogeneous_degree(&LaurentPoly::zero(1)),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn rendering_is_sorted() {
        let f = one_minus(1, 0, 1).mul(&one_minus(1, 1, 0)).unwrap();
        assert_eq!(f.to_string(), "(−1)*x0^-1*x1^1 + (2) + (−1)*x0^1*x1^-1");
    }

    fn arb_lp(n: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(
            (
                prop::collection::vec(-2i32..=2, n + 1),
                -2i64..3,
                prop::collection::vec(-3i64..4, 1..3),
            ),
            0..5,
        )
        .prop_map(move |ts| {
            LaurentPoly::from_terms(
                n,
                ts.into_iter()
                    .map(|(e, m, c)| (Monomial::new(e), QPoly::from_i64s(m, &c))),
            )
        })
    }

    fn arb_degree_zero(n: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(
            (prop::collection::vec(-2i32..=2, n), -3i64..4),
            1..5,
        )
        .prop_map(move |ts| {
            LaurentPoly::from_terms(
                n,
                ts.into_iter().map(|(mut e, c)| {
                    let s: i32 = e.iter().sum();
                    e.push(-s);
                    (Monomial::new(e), QPoly::constant(c))
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn mul_commutes(f in arb_lp(2), g in arb_lp(2)) {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        }

        #[test]
        fn pruning_is_lossless(
            fs in prop::collection::vec(arb_lp(2), 0..4),
            t in prop::collection::vec(-2i32..=2, 3),
        ) {
            let target = Monomial::new(t);
            let full = fs.iter().fold(LaurentPoly::one(2), |acc, f| acc.mul(f).unwrap());
            prop_assert_eq!(ct_of_factor_list(&fs, &target).unwrap(), coeff_of(&full, &target));
        }

        #[test]
        fn pi_cycle_is_identity_on_degree_zero(
            f in (1usize..=3).prop_flat_map(arb_degree_zero)
        ) {
            if !f.is_empty() {
                prop_assert_eq!(homogeneous_degree(&f).unwrap(), Some(0));
            }
            prop_assert_eq!(pi_action(&f, f.n() + 1), f);
        }
    }
}
