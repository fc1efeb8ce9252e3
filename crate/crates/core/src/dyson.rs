//! Dyson and q-Dyson products, checked against their closed-form constant terms.

use std::time::Instant;

use crate::error::SpecError;
use crate::laurent::{ct_of_factor_list, shifted_factorial, LaurentPoly, Monomial};
use crate::qpoly::{multinomial, q_multinomial, QPoly, QRat};
use crate::report::{Params, VerificationReport};

/// Parameters `a_0..a_n` of a Dyson product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DysonSpec {
    n: usize,
    a: Vec<u32>,
}

impl DysonSpec {
    pub fn new(a: Vec<u32>) -> Result<Self, SpecError> {
        if a.is_empty() {
            return Err(SpecError::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        Ok(DysonSpec { n: a.len() - 1, a })
    }

    /// Like [`DysonSpec::new`] but also checks `a.len() == n + 1`.
    pub fn with_n(n: usize, a: Vec<u32>) -> Result<Self, SpecError> {
        if a.len() != n + 1 {
            return Err(SpecError::LengthMismatch {
                expected: n + 1,
                got: a.len(),
            });
        }
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn a_total(&self) -> u32 {
        self.a.iter().sum()
    }
}

/// `(x_i/x_j)_{a_i} (q x_j/x_i)_{a_j}` for every `i < j`, each pochhammer
/// expanded as a single factor.
pub fn q_dyson_factors(spec: &DysonSpec) -> Vec<LaurentPoly> {
    q_dyson_factors_with(spec.n, |i, _| spec.a[i], |_, j| spec.a[j])
}

/// Pair-indexed q-Dyson factors with custom lengths: for `s < t` the factors
/// `(x_s/x_t)_{left(s,t)}` and `(q x_t/x_s)_{right(s,t)}`.
pub(crate) fn q_dyson_factors_with(
    n: usize,
    left: impl Fn(usize, usize) -> u32,
    right: impl Fn(usize, usize) -> u32,
) -> Vec<LaurentPoly> {
    let mut out = Vec::with_capacity(n * (n + 1));
    for s in 0..=n {
        for t in s + 1..=n {
            out.push(shifted_factorial(&Monomial::ratio(n, s, t), left(s, t), 0));
            out.push(shifted_factorial(&Monomial::ratio(n, t, s), right(s, t), 1));
        }
    }
    out
}

/// `(1 - x_i/x_j)` repeated `a_i` times for every ordered pair `i != j`.
pub fn dyson_factors(spec: &DysonSpec) -> Vec<LaurentPoly> {
    let n = spec.n;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i == j {
                continue;
            }
            let f = shifted_factorial(&Monomial::ratio(n, i, j), 1, 0).at_q_one();
            out.extend(std::iter::repeat_n(f, spec.a[i] as usize));
        }
    }
    out
}

/// Fully expanded `D_n(x, a, q)`.
pub fn q_dyson_product(spec: &DysonSpec) -> LaurentPoly {
    product(spec.n, &q_dyson_factors(spec))
}

/// Fully expanded `D_n(x, a)`.
pub fn dyson_product(spec: &DysonSpec) -> LaurentPoly {
    product(spec.n, &dyson_factors(spec))
}

pub(crate) fn product(n: usize, factors: &[LaurentPoly]) -> LaurentPoly {
    factors
        .iter()
        .fold(LaurentPoly::one(n), |acc, f| acc.mul(f).expect("same ambient"))
}

pub fn verify_q_dyson(spec: &DysonSpec) -> VerificationReport {
    let started = Instant::now();
    let ct = ct_of_factor_list(&q_dyson_factors(spec), &Monomial::one(spec.n))
        .expect("factors share the ambient n");
    let rhs = q_multinomial(&spec.a);
    let holds = QRat::from(ct.clone()) == rhs;
    VerificationReport::new(
        "qdyson",
        Params::new(spec.n, &spec.a, &[], &[]),
        holds,
        ct.to_string(),
        rhs.render(),
        started,
    )
}

pub fn verify_dyson(spec: &DysonSpec) -> VerificationReport {
    let started = Instant::now();
    let ct = ct_of_factor_list(&dyson_factors(spec), &Monomial::one(spec.n))
        .expect("factors share the ambient n");
    let rhs = QPoly::constant(multinomial(&spec.a));
    VerificationReport::new(
        "dyson",
        Params::new(spec.n, &spec.a, &[], &[]),
        ct == rhs,
        ct.to_string(),
        rhs.to_string(),
        started,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{ct_x, homogeneous_degree};

    fn spec(a: &[u32]) -> DysonSpec {
        DysonSpec::new(a.to_vec()).unwrap()
    }

    fn all_a(n: usize, amax: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..=n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..=amax).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn spec_validation() {
        assert!(DysonSpec::new(vec![]).is_err());
        assert!(DysonSpec::with_n(2, vec![1, 1]).is_err());
        assert_eq!(spec(&[1, 2, 3]).a_total(), 6);
    }

    #[test]
    fn q_dyson_factor_shapes() {
        assert!(q_dyson_factors(&spec(&[0, 0, 0]))
            .iter()
            .all(|f| *f == LaurentPoly::one(2)));
        let fs = q_dyson_factors(&spec(&[1, 1]));
        let expected0 = LaurentPoly::from_terms(
            1,
            [
                (Monomial::one(1), QPoly::one()),
                (Monomial::ratio(1, 0, 1), QPoly::constant(-1)),
            ],
        );
        let expected1 = LaurentPoly::from_terms(
            1,
            [
                (Monomial::one(1), QPoly::one()),
                (Monomial::ratio(1, 1, 0), QPoly::monomial(-1, 1)),
            ],
        );
        assert_eq!(fs, vec![expected0, expected1]);
        assert_eq!(q_dyson_factors(&spec(&[1, 1, 1])).len(), 6);
    }

    #[test]
    fn dyson_factor_shapes() {
        assert!(dyson_factors(&spec(&[0, 0, 0])).is_empty());
        let fs = dyson_factors(&spec(&[1, 0]));
        assert_eq!(fs.len(), 1);
        assert_eq!(ct_x(&fs[0]), QPoly::one());
        assert_eq!(ct_x(&dyson_product(&spec(&[1, 1]))), QPoly::constant(2));
    }

    #[test]
    fn q_dyson_examples() {
        let r = verify_q_dyson(&spec(&[0, 0]));
        assert!(r.holds);
        assert_eq!(r.lhs, "1");
        let r = verify_q_dyson(&spec(&[1, 1, 1]));
        assert!(r.holds);
        assert_eq!(r.lhs, "1 + 2*q + 2*q^2 + 1*q^3");
        let r = verify_q_dyson(&spec(&[1, 1, 1, 1]));
        assert!(r.holds);
        // brute-force oracle: unpruned expansion
        let full = ct_x(&q_dyson_product(&spec(&[1, 1, 1, 1])));
        assert_eq!(r.lhs, full.to_string());
    }

    #[test]
    fn dyson_examples() {
        for (a, v) in [(vec![0, 0, 0], "1"), (vec![1, 1, 1], "6"), (vec![2, 1, 1], "12")] {
            let r = verify_dyson(&spec(&a));
            assert!(r.holds, "{a:?}");
            assert_eq!(r.lhs, v);
        }
    }

    #[test]
    fn q_at_one_specializes_to_multinomial() {
        for n in 1..=3 {
            let amax = if n == 3 { 1 } else { 2 };
            for a in all_a(n, amax) {
                let s = spec(&a);
                let classical: Vec<_> = q_dyson_factors(&s).iter().map(|f| f.at_q_one()).collect();
                let ct = ct_of_factor_list(&classical, &Monomial::one(n)).unwrap();
                assert_eq!(ct, QPoly::constant(multinomial(&a)), "a = {a:?}");
            }
        }
    }

    #[test]
    fn products_are_degree_zero() {
        for a in all_a(2, 2) {
            let s = spec(&a);
            assert_eq!(homogeneous_degree(&q_dyson_product(&s)).unwrap(), Some(0));
        }
    }

    #[test]
    fn classical_ct_depends_on_multiset_of_a() {
        for a in all_a(2, 2) {
            let base = verify_dyson(&spec(&a)).lhs;
            let mut b = a.clone();
            b.rotate_left(1);
            assert_eq!(verify_dyson(&spec(&b)).lhs, base);
            b.swap(0, 1);
            assert_eq!(verify_dyson(&spec(&b)).lhs, base);
        }
    }
}
