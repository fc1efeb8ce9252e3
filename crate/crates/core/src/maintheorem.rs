//! A q-analogue of Kadell's identity for paired layers.
//!
//! For a layer `(I, J)` with `i_k` paired to `j_k`, every nonempty `I_l ⊆ I`
//! contributes `(-1)^l q^{C(I_l)} prod x_{j_k}/x_{i_k}` to a Laurent polynomial
//! whose product with `D_n(x, a, q)` has an explicit constant term, provided
//! no `s < t < u` has `j_t < i_s < j_u < i_t`.
//!
//! Subsets of `I` are handled as sorted lists of positions `0..m` into `I`, so
//! the complement order `r_k`, the order `t_k` of `I \ U`, and the position
//! `v` of `min I_l` are always read off the same indexing.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dyson::{q_dyson_factors, DysonSpec};
use crate::error::SpecError;
use crate::firstlayer::{count_upto, l_star_raw, subset_sum, LayerSpec};
use crate::kadell::q_kadell_rhs;
use crate::laurent::{ct_of_factor_list, LaurentPoly, Monomial};
use crate::qpoly::{QPoly, QRat};
use crate::report::VerificationReport;

/// How `J_l ∪ {j_{r_k}}` is formed when building `J_k*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JSemantics {
    /// Repeated `j` values are counted with multiplicity.
    #[default]
    Multiset,
    /// Repeated `j` values collapse to one element.
    Set,
}

impl JSemantics {
    pub fn as_str(self) -> &'static str {
        match self {
            JSemantics::Multiset => "multiset",
            JSemantics::Set => "set",
        }
    }
}

impl std::str::FromStr for JSemantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multiset" => Ok(JSemantics::Multiset),
            "set" => Ok(JSemantics::Set),
            other => Err(format!("unknown semantics {other:?} (expected multiset|set)")),
        }
    }
}

/// A layer with its positional pairing `i_k -> j_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedLayer {
    spec: LayerSpec,
}

impl PairedLayer {
    pub fn new(spec: LayerSpec) -> Self {
        PairedLayer { spec }
    }

    pub fn spec(&self) -> &LayerSpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.spec.m()
    }

    /// `i_k` for a 0-based position `k`.
    pub fn i_at(&self, k: usize) -> usize {
        self.spec.i()[k]
    }

    /// `j_k` for a 0-based position `k`.
    pub fn j_at(&self, k: usize) -> usize {
        self.spec.j()[k]
    }

    /// Values of `I` at the given positions.
    pub fn i_values(&self, pos: &[usize]) -> Vec<usize> {
        pos.iter().map(|&k| self.i_at(k)).collect()
    }

    /// The pairing set: values of `J` at the given positions, sorted.
    pub fn j_values(&self, pos: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = pos.iter().map(|&k| self.j_at(k)).collect();
        v.sort_unstable();
        v
    }

    /// Positions of the given `I` values.
    pub fn positions_of(&self, values: &[usize]) -> Result<Vec<usize>, SpecError> {
        let mut pos = values
            .iter()
            .map(|v| {
                self.spec
                    .i()
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| SpecError::Precondition(format!("{v} is not in I")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    fn complement(&self, pos: &[usize]) -> Vec<usize> {
        (0..self.m()).filter(|k| !pos.contains(k)).collect()
    }
}

/// The chain `I_l = 𝕀_{m-l+1} ⊂ 𝕀_{m-l} ⊂ ... ⊂ 𝕀_1 = I`, where each step
/// inserts the next element of `I \ I_l` taken from the largest down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainData {
    /// Positions of `I_l`.
    pub subset: Vec<usize>,
    /// Positions `r_1 < ... < r_{m-l}` of `I \ I_l`.
    pub complement: Vec<usize>,
    /// `chain[k - 1]` holds the positions of `𝕀_k`, for `k = 1..=m-l+1`.
    pub chain: Vec<Vec<usize>>,
}

impl ChainData {
    pub fn new(layer: &PairedLayer, subset: &[usize]) -> Self {
        let complement = layer.complement(subset);
        let chain = (0..=complement.len())
            .map(|k| {
                let mut s: Vec<usize> = subset.iter().chain(&complement[k..]).copied().collect();
                s.sort_unstable();
                s
            })
            .collect();
        ChainData {
            subset: subset.to_vec(),
            complement,
            chain,
        }
    }
}

/// Returns `(s, t, u)` (1-based) with `j_t < i_s < j_u < i_t`, if any.
pub fn npc_violation(layer: &PairedLayer) -> Option<(usize, usize, usize)> {
    let m = layer.m();
    for s in 0..m {
        for t in s + 1..m {
            for u in t + 1..m {
                let (is, it) = (layer.i_at(s), layer.i_at(t));
                let (jt, ju) = (layer.j_at(t), layer.j_at(u));
                if jt < is && is < ju && ju < it {
                    return Some((s + 1, t + 1, u + 1));
                }
            }
        }
    }
    None
}

pub fn npc_holds(layer: &PairedLayer) -> bool {
    npc_violation(layer).is_none()
}

/// `J_k*(J_l)`: elements of `J_l ∪ {j_{r_k}}` above `min 𝕀_k`, for `1 <= k <= m - l`.
pub fn j_star(
    layer: &PairedLayer,
    subset: &[usize],
    k: usize,
    semantics: JSemantics,
) -> Result<Vec<usize>, SpecError> {
    let chain = ChainData::new(layer, subset);
    if k == 0 || k > chain.complement.len() {
        return Err(SpecError::Precondition(format!(
            "k = {k} outside 1..={}",
            chain.complement.len()
        )));
    }
    Ok(j_star_in(layer, &chain, k, semantics))
}

fn j_star_in(layer: &PairedLayer, chain: &ChainData, k: usize, semantics: JSemantics) -> Vec<usize> {
    let floor = layer.i_at(chain.chain[k - 1][0]);
    let mut pool = layer.j_values(&chain.subset);
    pool.push(layer.j_at(chain.complement[k - 1]));
    pool.sort_unstable();
    if semantics == JSemantics::Set {
        pool.dedup();
    }
    pool.retain(|&j| j > floor);
    pool
}

/// `L*(T | S)` where `S` is given by positions and carries its pairing set.
fn l_star_on(layer: &PairedLayer, a: &[u32], ambient: &[usize], t_values: &[usize]) -> i64 {
    l_star_raw(a, &layer.i_values(ambient), &layer.j_values(ambient), t_values)
}

/// `C(I_l)` for a nonempty subset given by positions into `I`.
pub fn c_exponent(
    layer: &PairedLayer,
    subset: &[usize],
    a: &[u32],
    semantics: JSemantics,
) -> Result<i64, SpecError> {
    layer.spec.check_a(a)?;
    if subset.is_empty() {
        return Err(SpecError::Precondition("I_l must be nonempty".into()));
    }
    if subset.iter().any(|&k| k >= layer.m()) {
        return Err(SpecError::Precondition("position outside I".into()));
    }
    Ok(c_raw(layer, subset, a, semantics))
}

fn c_raw(layer: &PairedLayer, subset: &[usize], a: &[u32], semantics: JSemantics) -> i64 {
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    let values = layer.i_values(subset);
    let chain = ChainData::new(layer, subset);
    let mut c = 1 + total - subset_sum(a, &values);
    for (k, &r) in chain.complement.iter().enumerate() {
        let ir = layer.i_at(r);
        let js = j_star_in(layer, &chain, k + 1, semantics);
        c += (count_upto(ir as i64, &values) - count_upto(ir as i64, &js)) * a[ir] as i64;
    }
    c - l_star_on(layer, a, subset, &values)
}

fn subsets_by_mask(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..1 << m).map(move |mask| (0..m).filter(|k| mask >> k & 1 == 1).collect())
}

/// `1 + sum_{I_l != ∅} (-1)^l q^{C(I_l)} prod_{k in I_l} x_{j_k} / x_{i_k}`.
pub fn main_lhs_combination(
    layer: &PairedLayer,
    a: &[u32],
    semantics: JSemantics,
) -> Result<LaurentPoly, SpecError> {
    layer.spec.check_a(a)?;
    let n = layer.spec.n();
    let mut terms = vec![(Monomial::one(n), QPoly::one())];
    for subset in subsets_by_mask(layer.m()) {
        let mut e = vec![0i32; n + 1];
        for &k in &subset {
            e[layer.j_at(k)] += 1;
            e[layer.i_at(k)] -= 1;
        }
        let sign = if subset.len() % 2 == 0 { 1 } else { -1 };
        let c = c_raw(layer, &subset, a, semantics);
        terms.push((Monomial::new(e), QPoly::monomial(sign, c)));
    }
    Ok(LaurentPoly::from_terms(n, terms))
}

/// Brute-force check of
/// `(1 - q^{1+a-s_I}) CT[combination * D_n] = (1 - q^{1+a}) (q)_a / prod (q)_{a_i}`.
///
/// Layers violating the no-interleaving hypothesis are rejected with
/// [`SpecError::NpcViolation`].
pub fn verify_main(
    layer: &PairedLayer,
    a: &[u32],
    semantics: JSemantics,
) -> Result<VerificationReport, SpecError> {
    let started = Instant::now();
    layer.spec.check_a(a)?;
    if let Some(triple) = npc_violation(layer) {
        return Err(SpecError::NpcViolation(triple));
    }
    let n = layer.spec.n();
    let mut factors = q_dyson_factors(&DysonSpec::new(a.to_vec())?);
    factors.push(main_lhs_combination(layer, a, semantics)?);
    let ct = ct_of_factor_list(&factors, &Monomial::one(n))?;
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    let lhs = QPoly::one_minus_q_pow(1 + total - subset_sum(a, layer.spec.i())) * ct.clone();
    let rhs = q_kadell_rhs(a);
    let params = layer
        .spec
        .params(a)
        .with("semantics", semantics.as_str())
        .with("ct", ct.to_string());
    Ok(VerificationReport::new(
        "main",
        params,
        QRat::from(lhs.clone()) == rhs,
        lhs.to_string(),
        rhs.render(),
        started,
    ))
}

/// Positions of `I \ U` in increasing order: `t_1 < ... < t_{m-d}` (0-based here).
fn t_sequence(layer: &PairedLayer, u: &[usize]) -> Vec<usize> {
    layer.complement(u)
}

/// `g(i_{t_s})` for `U` (positions), `v` and `s` both 1-based:
/// `v` indexes `I` and `s` indexes the sequence `t` of `I \ U`.
pub fn g_exponent(
    layer: &PairedLayer,
    u: &[usize],
    v: usize,
    s: usize,
    a: &[u32],
) -> Result<i64, SpecError> {
    layer.spec.check_a(a)?;
    let m = layer.m();
    if v == 0 || v > m {
        return Err(SpecError::Precondition(format!("v = {v} outside 1..={m}")));
    }
    if u.iter().any(|&k| k >= m) {
        return Err(SpecError::Precondition("U must be a subset of I".into()));
    }
    if u.iter().any(|&k| k + 1 < v) {
        return Err(SpecError::Precondition("i_v must not exceed min U".into()));
    }
    let t = t_sequence(layer, u);
    if s == 0 || s > t.len() {
        return Err(SpecError::Precondition(format!("s = {s} outside 1..={}", t.len())));
    }
    if t[s - 1] + 1 == v {
        return Err(SpecError::Precondition("i_{t_s} must differ from i_v".into()));
    }
    Ok(g_raw(layer, &t, v, s, a))
}

fn g_raw(layer: &PairedLayer, t: &[usize], v: usize, s: usize, a: &[u32]) -> i64 {
    let iv = layer.i_at(v - 1) as i64;
    let jts = layer.j_at(t[s - 1]) as i64;
    let between = |k: usize| {
        let it = layer.i_at(t[k - 1]) as i64;
        it > jts && jts > iv
    };
    let weight = |k: usize| a[layer.i_at(t[k - 1])] as i64;
    let mut g = 0;
    for k in v..s {
        if between(k) {
            g -= weight(k);
        }
    }
    for k in s + 1..=t.len() {
        if !between(k) {
            g += weight(k);
        }
    }
    g
}

/// Both sides of the factorization for fixed `U` and `i_v`, plus the product
/// over the residual set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lhs: QPoly,
    pub rhs: QPoly,
    pub product: QPoly,
    pub residual: usize,
}

/// `sum_{I_l ⊇ U, min I_l = i_v} (-1)^{l+d} q^{C(I_l) + L*(U | I_l)}` (positions).
fn superset_sum(
    layer: &PairedLayer,
    u: &[usize],
    v: usize,
    a: &[u32],
    semantics: JSemantics,
) -> QPoly {
    let u_values = layer.i_values(u);
    let optional: Vec<usize> = layer
        .complement(u)
        .into_iter()
        .filter(|&k| k + 1 > v)
        .collect();
    let mut sum = QPoly::zero();
    for mask in 0u64..1 << optional.len() {
        let mut il: Vec<usize> = u.to_vec();
        il.push(v - 1);
        il.extend(
            optional
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &k)| k),
        );
        il.sort_unstable();
        il.dedup();
        let e = c_raw(layer, &il, a, semantics) + l_star_on(layer, a, &il, &u_values);
        let sign = if (il.len() + u.len()).is_multiple_of(2) { 1 } else { -1 };
        sum = sum + QPoly::monomial(sign, e);
    }
    sum
}

pub fn factorization(
    layer: &PairedLayer,
    u: &[usize],
    v: usize,
    a: &[u32],
    semantics: JSemantics,
) -> Result<Factorization, SpecError> {
    layer.spec.check_a(a)?;
    let m = layer.m();
    if u.is_empty() || u.len() >= m {
        return Err(SpecError::Precondition("U must be a nonempty proper subset of I".into()));
    }
    if u.iter().any(|&k| k >= m) || u.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SpecError::Precondition("U must be sorted positions into I".into()));
    }
    if v == 0 || v > u[0] + 1 {
        return Err(SpecError::Precondition(format!(
            "need 1 <= v <= position of min U = {}",
            u[0] + 1
        )));
    }
    let lhs = superset_sum(layer, u, v, a, semantics);

    let mut base = u.to_vec();
    base.push(v - 1);
    base.sort_unstable();
    base.dedup();
    let u_values = layer.i_values(u);
    let base_exp = c_raw(layer, &base, a, semantics) + l_star_on(layer, a, &base, &u_values);
    let sign = if u[0] + 1 != v { -1 } else { 1 };

    let t = t_sequence(layer, u);
    let mut product = QPoly::one();
    let mut residual = 0;
    for s in 1..=t.len() {
        // I \ U \ {i_1, ..., i_v}
        if t[s - 1] + 1 > v {
            residual += 1;
            product = product * QPoly::one_minus_q_pow(g_raw(layer, &t, v, s, a));
        }
    }
    let rhs = QPoly::monomial(sign, base_exp) * product.clone();
    Ok(Factorization {
        lhs,
        rhs,
        product,
        residual,
    })
}

/// Checks the factorization as an exact identity and, for layers satisfying
/// the no-interleaving hypothesis with a nonempty residual set, that the
/// product vanishes.
pub fn verify_factorization(
    layer: &PairedLayer,
    u: &[usize],
    v: usize,
    a: &[u32],
    semantics: JSemantics,
) -> Result<VerificationReport, SpecError> {
    let started = Instant::now();
    let f = factorization(layer, u, v, a, semantics)?;
    let npc = npc_holds(layer);
    let cancels = f.product.is_zero();
    let mut holds = f.lhs == f.rhs;
    if npc && f.residual > 0 {
        holds &= cancels;
    }
    let params = layer
        .spec
        .params(a)
        .with("U", layer.i_values(u))
        .with("i_v", layer.i_at(v - 1))
        .with("semantics", semantics.as_str())
        .with("npc", npc)
        .with("residual", f.residual)
        .with("product", f.product.to_string());
    Ok(VerificationReport::new(
        "factorization",
        params,
        holds,
        f.lhs.to_string(),
        f.rhs.to_string(),
        started,
    ))
}

/// For `U = {i_h, ..., i_m}` (`h` 1-based, `2 <= h <= m`):
/// `C(U) + L*(U|U) = C(U ∪ {i_{h-1}}) + L*(U | U ∪ {i_{h-1}}) = 1 + a - s_U`.
pub fn verify_tail_cancel(
    layer: &PairedLayer,
    h: usize,
    a: &[u32],
    semantics: JSemantics,
) -> Result<bool, SpecError> {
    layer.spec.check_a(a)?;
    let m = layer.m();
    if h < 2 || h > m {
        return Err(SpecError::Precondition(format!("h = {h} outside 2..={m}")));
    }
    let tail: Vec<usize> = (h - 1..m).collect();
    let wider: Vec<usize> = (h - 2..m).collect();
    let u_values = layer.i_values(&tail);
    let left = c_raw(layer, &tail, a, semantics) + l_star_on(layer, a, &tail, &u_values);
    let right = c_raw(layer, &wider, a, semantics) + l_star_on(layer, a, &wider, &u_values);
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    Ok(left == right && left == 1 + total - subset_sum(a, &u_values))
}

/// For each nonempty `U ⊆ I` (positions), the total over all admissible `i_v`
/// of the superset sums. Under the no-interleaving hypothesis every entry but
/// `U = I` vanishes, and `U = I` gives `q^{1 + a - s_I}`.
pub fn cancellation_profile(
    layer: &PairedLayer,
    a: &[u32],
    semantics: JSemantics,
) -> Result<Vec<(Vec<usize>, QPoly)>, SpecError> {
    layer.spec.check_a(a)?;
    Ok(subsets_by_mask(layer.m())
        .map(|u| {
            let total = (1..=u[0] + 1).fold(QPoly::zero(), |acc, v| {
                acc + superset_sum(layer, &u, v, a, semantics)
            });
            (u, total)
        })
        .collect())
}

/// Exhaustive check that every choice function `s -> k_s != s` on `1..=n`
/// picks some `a(k, r)` and `a(s, l)` with `r <= s < k <= l`.
pub fn lemma_f1_check(n: usize) -> Result<bool, SpecError> {
    if !(2..=5).contains(&n) {
        return Err(SpecError::Precondition(format!("n = {n} outside 2..=5")));
    }
    let mut choice = vec![0usize; n + 1];
    Ok(f1_rec(n, 1, &mut choice))
}

fn f1_rec(n: usize, row: usize, choice: &mut [usize]) -> bool {
    if row > n {
        return (1..=n).any(|s| {
            (s + 1..=n).any(|k| {
                let r = choice[k];
                let l = choice[s];
                r <= s && k <= l
            })
        });
    }
    for col in (1..=n).filter(|&c| c != row) {
        choice[row] = col;
        if !f1_rec(n, row + 1, choice) {
            return false;
        }
    }
    true
}
