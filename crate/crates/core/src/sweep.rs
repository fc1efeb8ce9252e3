//! Grid sweeps and seeded randomized suites over the verifiers.
//!
//! Instances are enumerated in a fixed order and may run on several threads;
//! results are always returned in enumeration order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dyson::{verify_dyson, verify_q_dyson, DysonSpec};
use crate::error::SpecError;
use crate::firstlayer::{subsets_of_size, valid_layouts, verify_first_layer, verify_j_independence, LayerSpec};
use crate::kadell::{evaluate_kadell_q, verify_kadell};
use crate::maintheorem::{
    lemma_f1_check, verify_factorization, verify_main, verify_tail_cancel, JSemantics, PairedLayer,
};
use crate::report::{Params, Summary, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// q-Dyson constant term against the q-multinomial.
    QDyson,
    /// Dyson constant term against the multinomial.
    Dyson,
    /// First-layer closed form against brute force.
    FirstLayer,
    /// `q = 1` first-layer value, independence of `J`.
    FirstLayerQ1,
    /// Kadell's identity for the Dyson product.
    Kadell,
    /// Kadell's q-analogous product (evaluation only; usually fails).
    KadellQ,
    /// The q-analogue for paired layers.
    Main,
    /// Randomized factorization and tail-cancellation suite plus the
    /// choice-function check.
    Lemmas,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::QDyson,
        Identity::Dyson,
        Identity::FirstLayer,
        Identity::FirstLayerQ1,
        Identity::Kadell,
        Identity::KadellQ,
        Identity::Main,
        Identity::Lemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::QDyson => "qdyson",
            Identity::Dyson => "dyson",
            Identity::FirstLayer => "firstlayer",
            Identity::FirstLayerQ1 => "firstlayer-q1",
            Identity::Kadell => "kadell",
            Identity::KadellQ => "kadell-q",
            Identity::Main => "main",
            Identity::Lemmas => "lemmas",
        }
    }

    /// Smallest `|I|` swept by default.
    fn default_m_min(self) -> usize {
        match self {
            Identity::FirstLayer | Identity::FirstLayerQ1 | Identity::KadellQ => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Identity::ALL.iter().map(|i| i.name()).collect();
                format!("unknown identity {s:?} (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub identity: Identity,
    pub n: usize,
    pub amax: u32,
    pub m_min: Option<usize>,
    pub m_max: Option<usize>,
    pub jobs: usize,
    pub seed: u64,
    pub semantics: JSemantics,
    /// Number of random instances for [`Identity::Lemmas`].
    pub samples: usize,
}

impl SweepConfig {
    pub fn new(identity: Identity, n: usize, amax: u32) -> Self {
        SweepConfig {
            identity,
            n,
            amax,
            m_min: None,
            m_max: None,
            jobs: 1,
            seed: 0,
            semantics: JSemantics::default(),
            samples: 500,
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.n < 1 {
            return Err(SpecError::Precondition("n must be at least 1".into()));
        }
        if self.jobs < 1 {
            return Err(SpecError::Precondition("jobs must be at least 1".into()));
        }
        if let (Some(lo), Some(hi)) = (self.m_min, self.m_max) {
            if lo > hi {
                return Err(SpecError::Precondition(format!("m range {lo}..={hi} is empty")));
            }
        }
        Ok(())
    }

    fn m_range(&self) -> (usize, usize) {
        let lo = self.m_min.unwrap_or(self.identity.default_m_min());
        let hi = self.m_max.unwrap_or(self.n).min(self.n);
        (lo, hi)
    }
}

/// Result of one instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Checked(VerificationReport),
    /// The instance lies outside the identity's hypothesis.
    Rejected { params: Params, reason: String },
}

impl Outcome {
    pub fn report(&self) -> Option<&VerificationReport> {
        match self {
            Outcome::Checked(r) => Some(r),
            Outcome::Rejected { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub outcomes: Vec<Outcome>,
    pub summary: Summary,
}

impl SweepResult {
    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        self.outcomes.iter().filter_map(Outcome::report)
    }

    pub fn all_hold(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Every `a` in `{0..=amax}^{n+1}`, lexicographic.
pub fn a_grid(n: usize, amax: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
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

enum Instance {
    Plain(Vec<u32>),
    Layer(LayerSpec, Vec<u32>),
    IndexSet(Vec<usize>, Vec<u32>),
    Lemma(LemmaCase),
}

/// One randomized lemma instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaCase {
    /// Factorization for `U` (positions) and 1-based `v`.
    Factorization {
        layer: LayerSpec,
        u: Vec<usize>,
        v: usize,
        a: Vec<u32>,
    },
    /// Tail cancellation for 1-based `h`.
    TailCancel { layer: LayerSpec, h: usize, a: Vec<u32> },
    /// Choice-function property for size `n`.
    ChoiceFunctions { n: usize },
}

fn random_layer(rng: &mut ChaCha8Rng, n: usize, m: usize) -> LayerSpec {
    let all: Vec<usize> = (0..=n).collect();
    let mut i: Vec<usize> = all.choose_multiple(rng, m).copied().collect();
    i.sort_unstable();
    let pool: Vec<usize> = all.iter().copied().filter(|x| !i.contains(x)).collect();
    let mut j: Vec<usize> = (0..m).map(|_| *pool.choose(rng).unwrap()).collect();
    j.sort_unstable();
    LayerSpec::new(n, i, j).expect("random layout is valid")
}

fn random_a(rng: &mut ChaCha8Rng, n: usize, amax: u32) -> Vec<u32> {
    (0..=n).map(|_| rng.gen_range(0..=amax)).collect()
}

/// `count` factorization instances with `2 <= n <= nmax`, `a_i <= amax`.
pub fn random_factorization_cases(seed: u64, count: usize, nmax: usize, amax: u32) -> Vec<LemmaCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=nmax);
            let m = rng.gen_range(2..=n);
            let layer = random_layer(&mut rng, n, m);
            let a = random_a(&mut rng, n, amax);
            let d = rng.gen_range(1..m);
            let mut u: Vec<usize> = (0..m).collect::<Vec<_>>().choose_multiple(&mut rng, d).copied().collect();
            u.sort_unstable();
            let v = rng.gen_range(1..=u[0] + 1);
            LemmaCase::Factorization { layer, u, v, a }
        })
        .collect()
}

/// Every layout with `n <= nmax` and `m >= 2`, each paired with `draws`
/// random `a` vectors (`a_i <= amax`), over every admissible `h`.
pub fn tail_cancel_cases(seed: u64, draws: usize, nmax: usize, amax: u32) -> Vec<LemmaCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 2..=nmax {
        let layouts = valid_layouts(n, 2, n);
        let vectors: Vec<Vec<u32>> = (0..draws).map(|_| random_a(&mut rng, n, amax)).collect();
        for layer in &layouts {
            for a in &vectors {
                for h in 2..=layer.m() {
                    out.push(LemmaCase::TailCancel {
                        layer: layer.clone(),
                        h,
                        a: a.clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn run_lemma_case(case: &LemmaCase, semantics: JSemantics) -> Result<VerificationReport, SpecError> {
    match case {
        LemmaCase::Factorization { layer, u, v, a } => {
            verify_factorization(&PairedLayer::new(layer.clone()), u, *v, a, semantics)
        }
        LemmaCase::TailCancel { layer, h, a } => {
            let started = std::time::Instant::now();
            let holds = verify_tail_cancel(&PairedLayer::new(layer.clone()), *h, a, semantics)?;
            Ok(VerificationReport::new(
                "tail-cancel",
                Params::new(layer.n(), a, layer.i(), layer.j())
                    .with("h", *h)
                    .with("semantics", semantics.as_str()),
                holds,
                String::new(),
                String::new(),
                started,
            ))
        }
        LemmaCase::ChoiceFunctions { n } => {
            let started = std::time::Instant::now();
            let holds = lemma_f1_check(*n)?;
            Ok(VerificationReport::new(
                "choice-functions",
                Params::new(*n, &[], &[], &[]),
                holds,
                String::new(),
                String::new(),
                started,
            ))
        }
    }
}

fn enumerate(cfg: &SweepConfig) -> Vec<Instance> {
    let (m_lo, m_hi) = cfg.m_range();
    let grid = a_grid(cfg.n, cfg.amax);
    match cfg.identity {
        Identity::QDyson | Identity::Dyson => grid.into_iter().map(Instance::Plain).collect(),
        Identity::FirstLayer | Identity::Kadell | Identity::KadellQ | Identity::Main => {
            let layouts = valid_layouts(cfg.n, m_lo, m_hi);
            grid.into_iter()
                .flat_map(|a| {
                    layouts
                        .iter()
                        .map(move |l| Instance::Layer(l.clone(), a.clone()))
                })
                .collect()
        }
        Identity::FirstLayerQ1 => {
            let all: Vec<usize> = (0..=cfg.n).collect();
            let sets: Vec<Vec<usize>> = (m_lo.max(1)..=m_hi)
                .flat_map(|m| subsets_of_size(&all, m))
                .collect();
            grid.into_iter()
                .flat_map(|a| sets.iter().map(move |i| Instance::IndexSet(i.clone(), a.clone())))
                .collect()
        }
        Identity::Lemmas => {
            let mut cases = random_factorization_cases(cfg.seed, cfg.samples, cfg.n.max(2), cfg.amax);
            cases.extend(tail_cancel_cases(cfg.seed, 1, cfg.n.max(2), cfg.amax));
            cases.extend((2..=cfg.n.clamp(2, 5)).map(|n| LemmaCase::ChoiceFunctions { n }));
            cases.into_iter().map(Instance::Lemma).collect()
        }
    }
}

fn run_instance(cfg: &SweepConfig, inst: &Instance) -> Outcome {
    let result = match inst {
        Instance::Plain(a) => {
            let spec = DysonSpec::new(a.clone()).expect("grid vectors are nonempty");
            Ok(match cfg.identity {
                Identity::Dyson => verify_dyson(&spec),
                _ => verify_q_dyson(&spec),
            })
        }
        Instance::Layer(layer, a) => match cfg.identity {
            Identity::FirstLayer => verify_first_layer(layer, a),
            Identity::Kadell => verify_kadell(layer, a),
            Identity::KadellQ => evaluate_kadell_q(layer, a),
            _ => verify_main(&PairedLayer::new(layer.clone()), a, cfg.semantics),
        },
        Instance::IndexSet(i, a) => verify_j_independence(cfg.n, i, a),
        Instance::Lemma(case) => run_lemma_case(case, cfg.semantics),
    };
    match result {
        Ok(r) => Outcome::Checked(r),
        Err(e) => {
            let params = match inst {
                Instance::Layer(l, a) => Params::new(l.n(), a, l.i(), l.j()),
                Instance::Plain(a) | Instance::IndexSet(_, a) => Params::new(cfg.n, a, &[], &[]),
                Instance::Lemma(_) => Params::new(cfg.n, &[], &[], &[]),
            };
            Outcome::Rejected {
                params,
                reason: e.to_string(),
            }
        }
    }
}

/// Runs every instance of the configured grid.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult, SpecError> {
    cfg.validate()?;
    let instances = enumerate(cfg);
    let outcomes: Vec<Outcome> = if cfg.jobs == 1 {
        instances.iter().map(|i| run_instance(cfg, i)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| SpecError::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| instances.par_iter().map(|i| run_instance(cfg, i)).collect())
    };
    let mut summary = Summary {
        seed: cfg.seed,
        ..Summary::default()
    };
    for o in &outcomes {
        summary.total += 1;
        match o {
            Outcome::Checked(r) if r.holds => summary.passed += 1,
            Outcome::Checked(_) => summary.failed += 1,
            Outcome::Rejected { .. } => summary.rejected += 1,
        }
    }
    Ok(SweepResult { outcomes, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(a_grid(2, 3).len(), 64);
        assert_eq!(a_grid(3, 2).len(), 81);
        assert_eq!(a_grid(1, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn identity_names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("nope".parse::<Identity>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::new(Identity::QDyson, 0, 1);
        assert!(run_sweep(&cfg).is_err());
        cfg.n = 1;
        cfg.jobs = 0;
        assert!(run_sweep(&cfg).is_err());
        cfg.jobs = 1;
        cfg.m_min = Some(2);
        cfg.m_max = Some(1);
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn parallel_order_matches_serial() {
        let mut cfg = SweepConfig::new(Identity::Kadell, 2, 1);
        let serial = run_sweep(&cfg).unwrap();
        cfg.jobs = 4;
        let parallel = run_sweep(&cfg).unwrap();
        let key = |r: &SweepResult| {
            r.reports()
                .map(|x| (x.params.clone(), x.lhs.clone(), x.holds))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&serial), key(&parallel));
        assert_eq!(serial.summary, parallel.summary);
    }

    #[test]
    fn seeded_cases_are_reproducible() {
        assert_eq!(
            random_factorization_cases(7, 20, 6, 5),
            random_factorization_cases(7, 20, 6, 5)
        );
        assert_ne!(
            random_factorization_cases(7, 20, 6, 5),
            random_factorization_cases(8, 20, 6, 5)
        );
    }

    #[test]
    fn small_sweeps_hold() {
        for id in [Identity::QDyson, Identity::Dyson, Identity::FirstLayer, Identity::Kadell, Identity::Main] {
            let r = run_sweep(&SweepConfig::new(id, 2, 1)).unwrap();
            assert!(r.all_hold(), "{id}: {:?}", r.summary);
            assert_eq!(r.summary.rejected, 0);
        }
    }
}
