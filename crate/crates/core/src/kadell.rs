//! Kadell's identity for the Dyson product and his q-analogous product.
//!
//! The classical identity is checked by brute force together with the
//! closed-form value of the constant term it rests on. The q-analogous
//! product is only evaluated: on the standard counterexample its two sides
//! differ.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::dyson::{dyson_factors, q_dyson_factors_with, DysonSpec};
use crate::error::SpecError;
use crate::firstlayer::{subset_sum, LayerSpec};
use crate::laurent::{ct_of_factor_list, LaurentPoly, Monomial};
use crate::qpoly::{multinomial, q_multinomial, QPoly, QRat};
use crate::report::VerificationReport;

/// Positional pairs `(i_k, j_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn from_layer(spec: &LayerSpec) -> Self {
        PairSet {
            pairs: spec.i().iter().copied().zip(spec.j().iter().copied()).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.pairs.contains(&(s, t))
    }
}

fn total(a: &[u32]) -> i64 {
    a.iter().map(|&x| x as i64).sum()
}

/// `prod_k (1 - x_{j_k}/x_{i_k})`, one factor per pair, with constant coefficients.
fn pair_binomials(spec: &LayerSpec) -> Vec<LaurentPoly> {
    let n = spec.n();
    spec.i()
        .iter()
        .zip(spec.j())
        .map(|(&i, &j)| {
            LaurentPoly::from_terms(
                n,
                [
                    (Monomial::one(n), QPoly::one()),
                    (Monomial::ratio(n, j, i), QPoly::constant(-1)),
                ],
            )
        })
        .collect()
}

/// `CT prod_k (1 - x_{j_k}/x_{i_k}) D_n(x, a)`.
pub fn kadell_ct(spec: &LayerSpec, a: &[u32]) -> Result<BigInt, SpecError> {
    spec.check_a(a)?;
    let mut factors = dyson_factors(&DysonSpec::new(a.to_vec())?);
    factors.extend(pair_binomials(spec));
    Ok(ct_of_factor_list(&factors, &Monomial::one(spec.n()))?.eval_at_one())
}

/// `(1 + a - sum_I a_k) * CT prod_k (1 - x_{j_k}/x_{i_k}) D_n(x, a)`.
pub fn kadell_dyson_lhs(spec: &LayerSpec, a: &[u32]) -> Result<BigRational, SpecError> {
    let ct = kadell_ct(spec, a)?;
    let scale = 1 + total(a) - subset_sum(a, spec.i());
    Ok(BigRational::from_integer(ct * BigInt::from(scale)))
}

/// `(1 + a) a! / prod a_i!`.
pub fn kadell_dyson_rhs(a: &[u32]) -> BigRational {
    BigRational::from_integer(BigInt::from(1 + total(a)) * multinomial(a))
}

/// Closed form of the constant term:
/// `(1 + s_I / (1 + a - s_I)) a! / prod a_i!` with `s_I = sum_I a_k`.
pub fn lc_closed(spec: &LayerSpec, a: &[u32]) -> Result<BigRational, SpecError> {
    spec.check_a(a)?;
    if spec.m() == 0 {
        return Err(SpecError::EmptyLayer);
    }
    let s = subset_sum(a, spec.i());
    let correction = BigRational::new(BigInt::from(s), BigInt::from(1 + total(a) - s));
    Ok((BigRational::one() + correction) * BigRational::from_integer(multinomial(a)))
}

pub fn verify_kadell(spec: &LayerSpec, a: &[u32]) -> Result<VerificationReport, SpecError> {
    let started = Instant::now();
    let ct = kadell_ct(spec, a)?;
    let lhs = kadell_dyson_lhs(spec, a)?;
    let rhs = kadell_dyson_rhs(a);
    let mut params = spec.params(a).with("ct", ct.to_string());
    let mut holds = lhs == rhs;
    if spec.m() > 0 {
        let lc = lc_closed(spec, a)?;
        holds &= BigRational::from_integer(ct) == lc;
        params = params.with("lc_closed", lc.to_string());
    }
    Ok(VerificationReport::new(
        "kadell",
        params,
        holds,
        lhs.to_string(),
        rhs.to_string(),
        started,
    ))
}

/// Factors of the modified q-Dyson product: for `s < t`,
/// `(x_s/x_t)_{a_s + [(t,s) in P]}` and `(q x_t/x_s)_{a_t + [(s,t) in P]}`.
pub fn kadell_q_product(spec: &LayerSpec, a: &[u32], pairs: &PairSet) -> Result<Vec<LaurentPoly>, SpecError> {
    spec.check_a(a)?;
    Ok(q_dyson_factors_with(
        spec.n(),
        |s, t| a[s] + pairs.contains(t, s) as u32,
        |s, t| a[t] + pairs.contains(s, t) as u32,
    ))
}

/// Constant term of the modified q-Dyson product.
pub fn kadell_q_ct(spec: &LayerSpec, a: &[u32]) -> Result<QPoly, SpecError> {
    let factors = kadell_q_product(spec, a, &PairSet::from_layer(spec))?;
    Ok(ct_of_factor_list(&factors, &Monomial::one(spec.n()))?)
}

/// `(1 - q^{1 + a - s_I}) CT[modified product]`.
pub fn kadell_q_lhs(spec: &LayerSpec, a: &[u32]) -> Result<QPoly, SpecError> {
    let ct = kadell_q_ct(spec, a)?;
    Ok(QPoly::one_minus_q_pow(1 + total(a) - subset_sum(a, spec.i())) * ct)
}

/// `(1 - q^{1 + a}) (q)_a / prod (q)_{a_i}`.
pub fn q_kadell_rhs(a: &[u32]) -> QRat {
    q_multinomial(a).scale(&QPoly::one_minus_q_pow(1 + total(a)))
}

/// Compares both sides of the q-analogous conjecture. The verdict is usually
/// negative; the report records both values.
pub fn evaluate_kadell_q(spec: &LayerSpec, a: &[u32]) -> Result<VerificationReport, SpecError> {
    let started = Instant::now();
    let lhs = kadell_q_lhs(spec, a)?;
    let rhs = q_kadell_rhs(a);
    let ct = kadell_q_ct(spec, a)?;
    Ok(VerificationReport::new(
        "kadell-q",
        spec.params(a).with("ct", ct.to_string()),
        QRat::from(lhs.clone()) == rhs,
        lhs.to_string(),
        rhs.render(),
        started,
    ))
}

/// The displayed values for `n = 2, I = {0}, J = {1}, a = (1, 1, 1)`:
/// the modified constant term is `1 + 2q + 3q^2 + 2q^3` and the right side is
/// `(1 - q^4)(1 + q)(1 + q + q^2)`.
pub fn counterexample_expected() -> (QPoly, QPoly) {
    let ct = QPoly::from_i64s(0, &[1, 2, 3, 2]);
    let lhs = QPoly::one_minus_q_pow(3) * ct;
    let rhs = QPoly::one_minus_q_pow(4) * QPoly::from_i64s(0, &[1, 1]) * QPoly::from_i64s(0, &[1, 1, 1]);
    (lhs, rhs)
}

/// Recomputes the counterexample to the q-analogous conjecture.
///
/// `holds` reports whether the conjectured identity holds (it does not);
/// `extra.matches_expected` records whether both sides reproduce the known
/// values exactly.
pub fn reproduce_counterexample() -> VerificationReport {
    let started = Instant::now();
    let spec = LayerSpec::new(2, vec![0], vec![1]).expect("fixed layout");
    let a = [1, 1, 1];
    let lhs = kadell_q_lhs(&spec, &a).expect("fixed layout");
    let rhs = q_kadell_rhs(&a).to_poly().expect("q-multinomial is a polynomial");
    let ct = kadell_q_ct(&spec, &a).expect("fixed layout");
    let (want_lhs, want_rhs) = counterexample_expected();
    let matches = lhs == want_lhs && rhs == want_rhs;
    let params = spec
        .params(&a)
        .with("ct", ct.to_string())
        .with("lhs_factored", "(1−q^3)(1+2q+3q^2+2q^3)")
        .with("rhs_factored", "(1−q^4)(1+q)(1+q+q^2)")
        .with("matches_expected", matches)
        .with("expected_failure", true);
    VerificationReport::new(
        "counterexample",
        params,
        lhs == rhs,
        lhs.to_string(),
        rhs.to_string(),
        started,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyson::q_dyson_factors;
    use crate::firstlayer::valid_layouts;

    fn layer(n: usize, i: &[usize], j: &[usize]) -> LayerSpec {
        LayerSpec::new(n, i.to_vec(), j.to_vec()).unwrap()
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn empty_layer_reduces_to_dyson() {
        let s = layer(2, &[], &[]);
        let a = [2, 1, 1];
        assert_eq!(kadell_ct(&s, &a).unwrap(), multinomial(&a));
        assert!(verify_kadell(&s, &a).unwrap().holds);
        assert_eq!(lc_closed(&s, &a), Err(SpecError::EmptyLayer));
    }

    #[test]
    fn classical_examples() {
        let a = [1, 1, 1];
        let s = layer(2, &[0], &[1]);
        assert_eq!(kadell_ct(&s, &a).unwrap(), BigInt::from(8));
        assert_eq!(kadell_dyson_lhs(&s, &a).unwrap(), rat(24));
        assert_eq!(lc_closed(&s, &a).unwrap(), rat(8));
        let s = layer(2, &[0, 1], &[2, 2]);
        assert_eq!(kadell_ct(&s, &a).unwrap(), BigInt::from(12));
        assert_eq!(lc_closed(&s, &a).unwrap(), rat(12));
        assert_eq!(lc_closed(&layer(2, &[0], &[1]), &[0, 2, 1]).unwrap(), rat(3));
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(kadell_dyson_rhs(&[0, 0]), rat(1));
        assert_eq!(kadell_dyson_rhs(&[1, 1, 1]), rat(24));
        assert_eq!(kadell_dyson_rhs(&[2, 1]), rat(12));
    }

    #[test]
    fn modified_product_shapes() {
        let s = layer(2, &[], &[]);
        let a = [1, 2, 0];
        assert_eq!(
            kadell_q_product(&s, &a, &PairSet::from_layer(&s)).unwrap(),
            q_dyson_factors(&DysonSpec::new(a.to_vec()).unwrap())
        );
        let s = layer(1, &[0], &[1]);
        let fs = kadell_q_product(&s, &[1, 1], &PairSet::from_layer(&s)).unwrap();
        let z = Monomial::ratio(1, 0, 1);
        let w = Monomial::ratio(1, 1, 0);
        assert_eq!(
            fs,
            vec![
                crate::laurent::shifted_factorial(&z, 1, 0),
                crate::laurent::shifted_factorial(&w, 2, 1)
            ]
        );
    }

    #[test]
    fn counterexample_product_matches_display() {
        // (1-x0/x1)(1-q x1/x0)(1-q^2 x1/x0)(1-x0/x2)(1-q x2/x0)(1-x1/x2)(1-q x2/x1)
        let n = 2;
        let bin = |i: usize, j: usize, e: i64| {
            LaurentPoly::from_terms(
                n,
                [
                    (Monomial::one(n), QPoly::one()),
                    (Monomial::ratio(n, i, j), QPoly::monomial(-1, e)),
                ],
            )
        };
        let display = [
            bin(0, 1, 0),
            bin(1, 0, 1),
            bin(1, 0, 2),
            bin(0, 2, 0),
            bin(2, 0, 1),
            bin(1, 2, 0),
            bin(2, 1, 1),
        ];
        let s = layer(2, &[0], &[1]);
        let ours = kadell_q_product(&s, &[1, 1, 1], &PairSet::from_layer(&s)).unwrap();
        let expand = |fs: &[LaurentPoly]| crate::dyson::product(n, fs);
        assert_eq!(expand(&ours), expand(&display));
    }

    #[test]
    fn counterexample_values() {
        let r = reproduce_counterexample();
        assert!(!r.holds);
        assert_eq!(r.params.extra["matches_expected"], serde_json::json!(true));
        assert_eq!(r.params.extra["ct"], serde_json::json!("1 + 2*q + 3*q^2 + 2*q^3"));
        assert_eq!(r.lhs, "1 + 2*q + 3*q^2 + 1*q^3 − 2*q^4 − 3*q^5 − 2*q^6");
        assert_eq!(r.rhs, "1 + 2*q + 2*q^2 + 1*q^3 − 1*q^4 − 2*q^5 − 2*q^6 − 1*q^7");
    }

    #[test]
    fn kadell_holds_n2() {
        for s in valid_layouts(2, 0, 2) {
            for a in [[1, 1, 1], [2, 0, 1], [0, 2, 2], [2, 2, 2]] {
                let r = verify_kadell(&s, &a).unwrap();
                assert!(r.holds, "{s:?} {a:?}: {} vs {}", r.lhs, r.rhs);
            }
        }
    }

    #[test]
    fn full_size_layer_n3() {
        // m = 3 leaves a single admissible j value
        for s in valid_layouts(3, 3, 3) {
            assert!(verify_kadell(&s, &[1, 2, 1, 1]).unwrap().holds, "{s:?}");
        }
    }
}
