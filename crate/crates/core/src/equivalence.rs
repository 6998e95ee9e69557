//! EA and CCZ transforms of vectorial functions, seeded samplers for them,
//! and the experiment checking that the maximal-bent-components property
//! survives both.

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::Verdict;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::rng::SplitMix64;
use crate::vectorial::{bent_census, VecFun};

#[inline]
fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

/// `x -> M x + c` from `in_dim` to `out_dim` bits; bit `r` of the image is
/// the parity of `rows[r] & x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    in_dim: u32,
    rows: Vec<u64>,
    constant: u64,
}

impl AffineMap {
    pub fn new(in_dim: u32, rows: Vec<u64>, constant: u64) -> Result<Self> {
        let out_dim = rows.len() as u32;
        if in_dim > 64 || out_dim > 64 {
            return Err(Error::DimensionMismatch(format!("{out_dim}x{in_dim} exceeds 64 bits")));
        }
        if rows.iter().any(|&r| r & !low_mask(in_dim) != 0) || constant & !low_mask(out_dim) != 0 {
            return Err(Error::DimensionMismatch(
                "entries outside the declared dimensions".into(),
            ));
        }
        Ok(AffineMap { in_dim, rows, constant })
    }

    pub fn identity(dim: u32) -> Self {
        AffineMap {
            in_dim: dim,
            rows: (0..dim).map(|r| 1u64 << r).collect(),
            constant: 0,
        }
    }

    pub fn in_dim(&self) -> u32 {
        self.in_dim
    }

    pub fn out_dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn constant(&self) -> u64 {
        self.constant
    }

    pub fn linear_part(&self) -> AffineMap {
        AffineMap {
            constant: 0,
            ..self.clone()
        }
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(self.constant, |acc, (r, &row)| acc ^ (parity(row & x) << r))
    }

    pub fn rank(&self) -> u32 {
        rank_u64(&self.rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.out_dim() == self.in_dim && self.rank() == self.in_dim
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.in_dim != other.out_dim() {
            return Err(Error::DimensionMismatch("inner output and outer input differ".into()));
        }
        // row r of M_s M_o: XOR of other's rows selected by self's row r
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                (0..self.in_dim)
                    .filter(|&j| row >> j & 1 == 1)
                    .fold(0u64, |acc, j| acc ^ other.rows[j as usize])
            })
            .collect();
        let constant = self.apply(other.constant);
        Ok(AffineMap {
            in_dim: other.in_dim,
            rows,
            constant,
        })
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        if !self.is_invertible() {
            return Err(Error::InvalidParams("affine map is not invertible".into()));
        }
        let n = self.in_dim as usize;
        // Gauss-Jordan on [M | I], rows as (lhs, rhs)
        let mut aug: Vec<(u64, u64)> = self.rows.iter().enumerate().map(|(r, &m)| (m, 1u64 << r)).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| aug[r].0 >> col & 1 == 1).expect("full rank");
            aug.swap(col, pivot);
            let (pl, pr) = aug[col];
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && row.0 >> col & 1 == 1 {
                    row.0 ^= pl;
                    row.1 ^= pr;
                }
            }
        }
        let linear = AffineMap {
            in_dim: self.in_dim,
            rows: aug.into_iter().map(|(_, r)| r).collect(),
            constant: 0,
        };
        let constant = linear.apply(self.constant);
        Ok(AffineMap { constant, ..linear })
    }

    /// Uniform `out_dim x in_dim` matrix and constant.
    pub fn random(in_dim: u32, out_dim: u32, rng: &mut SplitMix64) -> Self {
        let rows = (0..out_dim).map(|_| rng.bits(in_dim)).collect();
        AffineMap {
            in_dim,
            rows,
            constant: rng.bits(out_dim),
        }
    }

    /// Uniform invertible map, by rejection on rank; also returns the
    /// number of draws.
    pub fn random_invertible(dim: u32, rng: &mut SplitMix64) -> (Self, u64) {
        let mut draws = 0;
        loop {
            draws += 1;
            let m = Self::random(dim, dim, rng);
            if m.is_invertible() {
                return (m, draws);
            }
        }
    }
}

fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

pub fn rank_u64(vectors: &[u64]) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let r = basis.iter().fold(v, |r, &b| r.min(r ^ b));
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

/// `F' = outer ∘ F ∘ inner + add`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EATriple {
    pub outer: AffineMap,
    pub inner: AffineMap,
    pub add: AffineMap,
}

impl EATriple {
    pub fn identity(n: u32) -> Self {
        EATriple {
            outer: AffineMap::identity(n),
            inner: AffineMap::identity(n),
            add: AffineMap::new(n, vec![0; n as usize], 0).expect("valid dims"),
        }
    }

    pub fn inverse(&self) -> Result<EATriple> {
        let outer = self.outer.inverse()?;
        let inner = self.inner.inverse()?;
        let add = outer.linear_part().compose(&self.add.compose(&inner)?)?;
        Ok(EATriple { outer, inner, add })
    }
}

pub fn apply_ea(f: &VecFun, t: &EATriple) -> Result<VecFun> {
    let (n, m) = (f.n(), f.m());
    if t.inner.in_dim() != n
        || t.inner.out_dim() != n
        || t.outer.in_dim() != m
        || t.outer.out_dim() != m
        || t.add.in_dim() != n
        || t.add.out_dim() != m
    {
        return Err(Error::DimensionMismatch("transform does not match the function".into()));
    }
    VecFun::from_fn(n, m, |x| {
        let y = f.eval(t.inner.apply(x as u64) as u32);
        (t.outer.apply(y as u64) ^ t.add.apply(x as u64)) as u32
    })
}

/// Maps the graph `{(x, F(x))}` through `m`, packing `(x, y)` as
/// `x | y << n`; the image must again be the graph of a function.
pub fn apply_ccz(f: &VecFun, m: &AffineMap) -> Result<VecFun> {
    let n = f.n();
    if f.m() != n || m.in_dim() != 2 * n || m.out_dim() != 2 * n {
        return Err(Error::DimensionMismatch(
            "CCZ map must act on 2n bits of an (n, n)-function".into(),
        ));
    }
    if !m.is_invertible() {
        return Err(Error::InvalidParams("CCZ map is not invertible".into()));
    }
    let size = 1usize << n;
    let mut table = vec![u32::MAX; size];
    let mask = low_mask(n);
    for x in 0..size as u64 {
        let img = m.apply(x | (f.eval(x as u32) as u64) << n);
        let slot = &mut table[(img & mask) as usize];
        if *slot != u32::MAX {
            return Err(Error::NotAFunctionGraph);
        }
        *slot = (img >> n) as u32;
    }
    VecFun::new(n, n, table)
}

pub fn random_ea(n: u32, seed: u64) -> EATriple {
    let mut rng = SplitMix64::new(seed);
    let (outer, _) = AffineMap::random_invertible(n, &mut rng);
    let (inner, _) = AffineMap::random_invertible(n, &mut rng);
    let add = AffineMap::random(n, n, &mut rng);
    EATriple { outer, inner, add }
}

/// Uniform invertible affine map of `F_2^(2n)`.
pub fn random_ccz(n: u32, seed: u64) -> AffineMap {
    AffineMap::random_invertible(2 * n, &mut SplitMix64::new(seed)).0
}

/// Invertible affine map of `F_2^(2n)` whose block `x' = A x + B y` has
/// `A` invertible and `B` of rank at most one. Unlike uniform maps these
/// often send function graphs to function graphs, while `B != 0` keeps
/// them outside the EA maps.
pub fn random_ccz_low_rank(n: u32, rng: &mut SplitMix64) -> AffineMap {
    loop {
        let (a, _) = AffineMap::random_invertible(n, rng);
        let u = rng.bits(n);
        let w = rng.bits(n);
        let lower = AffineMap::random(2 * n, n, rng);
        let mut rows = Vec::with_capacity(2 * n as usize);
        for r in 0..n {
            let b_row = if u >> r & 1 == 1 { w } else { 0 };
            rows.push(a.rows()[r as usize] | b_row << n);
        }
        rows.extend_from_slice(lower.rows());
        let constant = a.constant() | lower.constant() << n;
        let m = AffineMap {
            in_dim: 2 * n,
            rows,
            constant,
        };
        if m.is_invertible() {
            return m;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivMode {
    Ea,
    Ccz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CczSampler {
    Uniform,
    LowRank,
}

pub const DEFAULT_RETRY_CAP: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub trial: u64,
    /// Maps drawn before one produced a function graph.
    pub attempts: u64,
    /// `None` when the retry cap was exhausted.
    pub bent_count: Option<u64>,
    pub is_max: Option<bool>,
    pub preserved: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub mode: EquivMode,
    pub sampler: Option<CczSampler>,
    pub trials: u64,
    pub seed: u64,
    pub baseline_bent_count: u64,
    pub baseline_is_max: bool,
    pub accepted: u64,
    pub exhausted: u64,
    pub violations: u64,
    pub verdict: Verdict,
    pub results: Vec<TrialResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub mode: EquivMode,
    pub sampler: CczSampler,
    pub trials: u64,
    pub seed: u64,
    pub guard: u32,
    pub retry_cap: u64,
}

impl ExperimentConfig {
    pub fn new(mode: EquivMode, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            mode,
            sampler: CczSampler::LowRank,
            trials,
            seed,
            guard: crate::vectorial::DEFAULT_CENSUS_GUARD,
            retry_cap: DEFAULT_RETRY_CAP,
        }
    }
}

/// Transforms `f` repeatedly and recomputes the bent-component census.
/// EA transforms must keep the bent count exactly; CCZ transforms must
/// keep whether the count is maximal.
pub fn invariance_experiment(f: &VecFun, ctx: &FieldCtx, cfg: &ExperimentConfig) -> Result<InvarianceReport> {
    let base = bent_census(f, ctx, cfg.guard)?;
    let root = SplitMix64::new(cfg.seed);
    let results: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialResult> {
            let mut rng = root.fork(trial);
            let mut attempts = 0;
            let image = loop {
                if attempts == cfg.retry_cap {
                    break None;
                }
                attempts += 1;
                match cfg.mode {
                    EquivMode::Ea => {
                        break Some(apply_ea(f, &random_ea(f.n(), rng.next_u64()))?);
                    }
                    EquivMode::Ccz => {
                        let m = match cfg.sampler {
                            CczSampler::Uniform => random_ccz(f.n(), rng.next_u64()),
                            CczSampler::LowRank => random_ccz_low_rank(f.n(), &mut rng),
                        };
                        match apply_ccz(f, &m) {
                            Ok(g) => break Some(g),
                            Err(Error::NotAFunctionGraph) => continue,
                            Err(e) => return Err(e),
                        }
                    }
                }
            };
            let Some(g) = image else {
                return Ok(TrialResult {
                    trial,
                    attempts,
                    bent_count: None,
                    is_max: None,
                    preserved: None,
                });
            };
            let c = bent_census(&g, ctx, cfg.guard)?;
            let preserved = match cfg.mode {
                EquivMode::Ea => c.bent_count == base.bent_count,
                EquivMode::Ccz => c.is_max == base.is_max,
            };
            Ok(TrialResult {
                trial,
                attempts,
                bent_count: Some(c.bent_count),
                is_max: Some(c.is_max),
                preserved: Some(preserved),
            })
        })
        .collect::<Result<_>>()?;
    let accepted = results.iter().filter(|r| r.preserved.is_some()).count() as u64;
    let violations = results.iter().filter(|r| r.preserved == Some(false)).count() as u64;
    let verdict = if violations > 0 {
        Verdict::Fail
    } else if accepted == 0 {
        Verdict::Vacuous
    } else {
        Verdict::Pass
    };
    Ok(InvarianceReport {
        mode: cfg.mode,
        sampler: (cfg.mode == EquivMode::Ccz).then_some(cfg.sampler),
        trials: cfg.trials,
        seed: cfg.seed,
        baseline_bent_count: base.bent_count,
        baseline_is_max: base.is_max,
        accepted,
        exhausted: cfg.trials - accepted,
        violations,
        verdict,
        results,
    })
}
