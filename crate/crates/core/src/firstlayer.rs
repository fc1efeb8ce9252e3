//! First-layer coefficients of the q-Dyson product.
//!
//! A layer is a pair `(I, J)`: `I` a proper subset of `0..=n`, `J` a multiset
//! of the same size avoiding `I`. The first-layer coefficient is the constant
//! term of `(prod x_j / prod x_i) D_n(x, a, q)`, which has a closed form as a
//! signed sum over the nonempty subsets `T` of `I`.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::dyson::{dyson_factors, q_dyson_factors, DysonSpec};
use crate::error::SpecError;
use crate::laurent::{ct_of_factor_list, Monomial};
use crate::qpoly::{multinomial, q_multinomial, QPoly, QRat};
use crate::report::{Params, VerificationReport};

/// Validated `(n, I, J)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LayerSpec {
    n: usize,
    i: Vec<usize>,
    j: Vec<usize>,
}

impl LayerSpec {
    pub fn new(n: usize, i: Vec<usize>, j: Vec<usize>) -> Result<Self, SpecError> {
        for &x in i.iter().chain(&j) {
            if x > n {
                return Err(SpecError::IndexOutOfRange { index: x, n });
            }
        }
        if i.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpecError::INotIncreasing(i));
        }
        if j.windows(2).any(|w| w[0] > w[1]) {
            return Err(SpecError::JNotSorted(j));
        }
        if i.len() != j.len() {
            return Err(SpecError::SizeMismatch {
                i: i.len(),
                j: j.len(),
            });
        }
        if let Some(&x) = j.iter().find(|x| i.contains(x)) {
            return Err(SpecError::Overlap(x));
        }
        if i.len() > n {
            return Err(SpecError::NotProper { n });
        }
        Ok(LayerSpec { n, i, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> &[usize] {
        &self.i
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn m(&self) -> usize {
        self.i.len()
    }

    /// The `x`-monomial whose coefficient in `D_n` is the first-layer
    /// coefficient: exponent `+1` at each `i`, `-1` per occurrence of each `j`.
    pub fn target(&self) -> Monomial {
        let mut e = vec![0i32; self.n + 1];
        for &x in &self.i {
            e[x] += 1;
        }
        for &x in &self.j {
            e[x] -= 1;
        }
        Monomial::new(e)
    }

    pub(crate) fn check_a(&self, a: &[u32]) -> Result<(), SpecError> {
        if a.len() != self.n + 1 {
            return Err(SpecError::LengthMismatch {
                expected: self.n + 1,
                got: a.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn params(&self, a: &[u32]) -> Params {
        Params::new(self.n, a, &self.i, &self.j)
    }
}

/// Every weakly increasing `J` of size `|I|` over the complement of `I`.
pub fn valid_j(n: usize, i: &[usize]) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = (0..=n).filter(|x| !i.contains(x)).collect();
    let mut out = Vec::new();
    fn rec(pool: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..pool.len() {
            cur.push(pool[k]);
            rec(pool, k, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&pool, 0, i.len(), &mut Vec::new(), &mut out);
    out
}

/// Every valid layer with `m_min <= |I| <= m_max`, ordered by `m`, then `I`, then `J`.
pub fn valid_layouts(n: usize, m_min: usize, m_max: usize) -> Vec<LayerSpec> {
    let mut out = Vec::new();
    for m in m_min..=m_max.min(n) {
        for i in subsets_of_size(&(0..=n).collect::<Vec<_>>(), m) {
            for j in valid_j(n, &i) {
                out.push(LayerSpec::new(n, i.clone(), j).expect("enumerated layouts are valid"));
            }
        }
    }
    out
}

/// Size-`k` subsets of `set`, each in ascending order, in lexicographic order.
pub fn subsets_of_size(set: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(set: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..set.len() {
            cur.push(set[k]);
            rec(set, k + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(set, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Nonempty subsets of `set` (ascending members), by bitmask order.
pub fn nonempty_subsets(set: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1u64..1 << set.len()).map(move |mask| {
        set.iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    })
}

/// `N(k, S)`: elements of the multiset `S` that are at most `k`.
pub fn count_upto(k: i64, s: &[usize]) -> i64 {
    s.iter().filter(|&&x| (x as i64) <= k).count() as i64
}

/// `w_i = a_i` off `T`, `0` on `T`.
pub fn weight_vector(a: &[u32], t: &[usize]) -> Vec<i64> {
    a.iter()
        .enumerate()
        .map(|(k, &ak)| if t.contains(&k) { 0 } else { ak as i64 })
        .collect()
}

pub(crate) fn subset_sum(a: &[u32], t: &[usize]) -> i64 {
    t.iter().map(|&k| a[k] as i64).sum()
}

/// The exponent `L*(T | S)` for an arbitrary ambient index set `S` with its
/// paired multiset `js`.
///
/// `t` is the number of `j`'s below `min S`; `J-` and `J+` are the `j`'s below
/// and above `min S`.
pub(crate) fn l_star_raw(a: &[u32], s: &[usize], js: &[usize], t_set: &[usize]) -> i64 {
    let n = a.len() - 1;
    let first = s[0];
    let w = weight_vector(a, t_set);
    let below: Vec<usize> = js.iter().copied().filter(|&j| j < first).collect();
    let above: Vec<usize> = js.iter().copied().filter(|&j| j > first).collect();
    let t = below.len() as i64;
    let upper: i64 = (first..=n)
        .map(|k| (count_upto(k as i64, s) - count_upto(k as i64, &above)) * w[k])
        .sum();
    let lower: i64 = (0..first)
        .map(|k| (t - count_upto(k as i64, &below)) * a[k] as i64)
        .sum();
    t + upper + lower
}

fn check_t(spec: &LayerSpec, t: &[usize]) -> Result<(), SpecError> {
    if t.is_empty() {
        return Err(SpecError::Precondition("T must be nonempty".into()));
    }
    if let Some(x) = t.iter().find(|x| !spec.i.contains(x)) {
        return Err(SpecError::Precondition(format!("{x} in T is not in I")));
    }
    Ok(())
}

/// `L(T | I) = sum_k [N(k, I) - N(k, J)] w_k`, defined when `i_1 = 0`.
pub fn l_exponent(spec: &LayerSpec, a: &[u32], t: &[usize]) -> Result<i64, SpecError> {
    spec.check_a(a)?;
    check_t(spec, t)?;
    if spec.i.first() != Some(&0) {
        return Err(SpecError::Precondition("L(T|I) requires i_1 = 0".into()));
    }
    let w = weight_vector(a, t);
    Ok((0..=spec.n)
        .map(|k| (count_upto(k as i64, &spec.i) - count_upto(k as i64, &spec.j)) * w[k])
        .sum())
}

/// `L*(T | I)`, the exponent for arbitrary `i_1`.
pub fn l_star_exponent(spec: &LayerSpec, a: &[u32], t: &[usize]) -> Result<i64, SpecError> {
    spec.check_a(a)?;
    check_t(spec, t)?;
    Ok(l_star_raw(a, &spec.i, &spec.j, t))
}

/// `(1 - q^{sum_T a}) / (1 - q^{1 + a - sum_T a})`.
pub(crate) fn subset_ratio(a: &[u32], t: &[usize]) -> QRat {
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    let st = subset_sum(a, t);
    QRat::new(QPoly::one_minus_q_pow(st), QPoly::one_minus_q_pow(1 + total - st))
        .expect("1 + a - sum_T a is positive")
}

/// Closed-form first-layer coefficient as a quotient of polynomials.
pub fn first_layer_closed(spec: &LayerSpec, a: &[u32]) -> Result<QRat, SpecError> {
    spec.check_a(a)?;
    if spec.m() == 0 {
        return Err(SpecError::EmptyLayer);
    }
    let mut sum = QRat::zero();
    for t in nonempty_subsets(&spec.i) {
        let sign = if t.len() % 2 == 0 { 1 } else { -1 };
        let weight = QPoly::monomial(sign, l_star_raw(a, &spec.i, &spec.j, &t));
        sum = &sum + &subset_ratio(a, &t).scale(&weight);
    }
    Ok(&q_multinomial(a) * &sum)
}

/// First-layer coefficient by brute-force extraction from `D_n(x, a, q)`.
pub fn first_layer_brute(spec: &LayerSpec, a: &[u32]) -> Result<QPoly, SpecError> {
    spec.check_a(a)?;
    let d = DysonSpec::new(a.to_vec())?;
    Ok(ct_of_factor_list(&q_dyson_factors(&d), &spec.target())?)
}

/// The `q = 1` closed form: `a!/prod a_i! * sum_T (-1)^|T| s_T / (1 + a - s_T)`.
pub fn first_layer_q1_closed(spec: &LayerSpec, a: &[u32]) -> Result<BigRational, SpecError> {
    spec.check_a(a)?;
    if spec.m() == 0 {
        return Err(SpecError::EmptyLayer);
    }
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    let mut sum = BigRational::zero();
    for t in nonempty_subsets(&spec.i) {
        let st = subset_sum(a, &t);
        let term = BigRational::new(BigInt::from(st), BigInt::from(1 + total - st));
        if t.len() % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum * BigRational::from_integer(multinomial(a)))
}

/// First-layer coefficient of the classical product `D_n(x, a)`.
pub fn first_layer_q1_brute(spec: &LayerSpec, a: &[u32]) -> Result<BigInt, SpecError> {
    spec.check_a(a)?;
    let d = DysonSpec::new(a.to_vec())?;
    let ct = ct_of_factor_list(&dyson_factors(&d), &spec.target())?;
    Ok(ct.eval_at_one())
}

/// Brute force against the closed form, both in `q` and at `q = 1`.
pub fn verify_first_layer(spec: &LayerSpec, a: &[u32]) -> Result<VerificationReport, SpecError> {
    let started = Instant::now();
    let closed = first_layer_closed(spec, a)?;
    let brute = first_layer_brute(spec, a)?;
    let q1_closed = first_layer_q1_closed(spec, a)?;
    let q1_brute = BigRational::from_integer(first_layer_q1_brute(spec, a)?);
    let holds = QRat::from(brute.clone()) == closed && q1_brute == q1_closed;
    let params = spec
        .params(a)
        .with("q1_lhs", q1_brute.to_string())
        .with("q1_rhs", q1_closed.to_string());
    Ok(VerificationReport::new(
        "firstlayer",
        params,
        holds,
        brute.to_string(),
        closed.render(),
        started,
    ))
}

/// At `q = 1`, the first-layer coefficient for fixed `I` is the same for every
/// valid `J` and equals the closed-form sum.
pub fn verify_j_independence(
    n: usize,
    i: &[usize],
    a: &[u32],
) -> Result<VerificationReport, SpecError> {
    let started = Instant::now();
    if let Some(&x) = i.iter().find(|&&x| x > n) {
        return Err(SpecError::IndexOutOfRange { index: x, n });
    }
    if i.len() > n {
        return Err(SpecError::NotProper { n });
    }
    let js = valid_j(n, i);
    let first = LayerSpec::new(n, i.to_vec(), js[0].clone())?;
    let closed = first_layer_q1_closed(&first, a)?;
    let mut values = Vec::with_capacity(js.len());
    for j in &js {
        let spec = LayerSpec::new(n, i.to_vec(), j.clone())?;
        values.push(BigRational::from_integer(first_layer_q1_brute(&spec, a)?));
    }
    let holds = values.iter().all(|v| *v == closed);
    let lhs = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
    let params = Params::new(n, a, i, &[]).with(
        "J_values",
        js.iter()
            .map(|j| serde_json::json!(j))
            .collect::<Vec<_>>(),
    );
    Ok(VerificationReport::new(
        "firstlayer-q1",
        params,
        holds,
        lhs,
        closed.to_string(),
        started,
    ))
}
