//! The quadratic families `G(x) = x^(2^i) (T(x) + sum_j g_j T(x)^(2^t_j))`
//! on GF(2^(2k)), with `T = Tr_e^(2k)`, their no-root preconditions, the
//! predicted sets of non-bent directions, and exhaustive verifiers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, SubfieldEmbedding};
use crate::linmaps::LinPoly;
use crate::vectorial::{VecFun, DEFAULT_CENSUS_GUARD};

/// Parameters of one family member. `terms` holds `(gamma_j, t_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    pub k: u32,
    pub i: u32,
    pub e: u32,
    pub terms: Vec<(u32, u32)>,
}

impl FamilyParams {
    /// `x^(2^i) (x + x^(2^k))`.
    pub fn binomial(k: u32, i: u32) -> Self {
        FamilyParams {
            k,
            i,
            e: k,
            terms: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        2 * self.k
    }

    pub fn rho(&self) -> usize {
        self.terms.len()
    }

    /// True when two terms share the same `t`.
    pub fn has_duplicate_t(&self) -> bool {
        let mut ts: Vec<u32> = self.terms.iter().map(|&(_, t)| t).collect();
        ts.sort_unstable();
        ts.windows(2).any(|w| w[0] == w[1])
    }

    /// Terms with equal `t` folded together by XOR of their coefficients;
    /// zero coefficients dropped. Sorted by `t`.
    pub fn merged_terms(&self) -> Vec<(u32, u32)> {
        let mut by_t = std::collections::BTreeMap::new();
        for &(g, t) in &self.terms {
            *by_t.entry(t).or_insert(0u32) ^= g;
        }
        by_t.into_iter().filter(|&(_, g)| g != 0).map(|(t, g)| (g, t)).collect()
    }

    pub fn validate(&self, ctx: &FieldCtx) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParams("k must be positive".into()));
        }
        if ctx.n() != 2 * self.k {
            return Err(Error::DimensionMismatch(format!(
                "family with k = {} needs a field of degree {}, got {}",
                self.k,
                2 * self.k,
                ctx.n()
            )));
        }
        if self.e == 2 && self.k % 2 == 1 {
            return Err(Error::UnsupportedE { k: self.k, e: self.e });
        }
        if self.e == 0 || !self.k.is_multiple_of(self.e) {
            return Err(Error::InvalidParams(format!(
                "e = {} does not divide k = {}",
                self.e, self.k
            )));
        }
        if self.terms.len() > self.k as usize {
            return Err(Error::InvalidParams(format!(
                "rho = {} exceeds k = {}",
                self.terms.len(),
                self.k
            )));
        }
        for &(g, t) in &self.terms {
            if t > self.k {
                return Err(Error::InvalidParams(format!("t = {t} exceeds k = {}", self.k)));
            }
            if g > ctx.mask() || !ctx.in_subfield(g, self.k)? {
                return Err(Error::InvalidParams(format!(
                    "gamma = {g:#x} is not in the subfield of size 2^{}",
                    self.k
                )));
            }
        }
        Ok(())
    }
}

/// The linear map `B(x) = T(x) + sum_j g_j T(x)^(2^t_j)` with `T = Tr_e^(2k)`.
pub fn bracket_linpoly(ctx: &FieldCtx, params: &FamilyParams) -> Result<LinPoly> {
    params.validate(ctx)?;
    let n = ctx.n();
    let mut coeffs = vec![0u32; n as usize];
    for s in (0..n).step_by(params.e as usize) {
        coeffs[s as usize] ^= 1;
        for &(g, t) in &params.merged_terms() {
            coeffs[((s + t) % n) as usize] ^= g;
        }
    }
    Ok(LinPoly::new(ctx, coeffs))
}

/// The value table of `G`.
pub fn build_g(ctx: &FieldCtx, params: &FamilyParams) -> Result<VecFun> {
    params.validate(ctx)?;
    let terms = params.merged_terms();
    let table = ctx
        .elements()
        .map(|x| {
            let tr = ctx.trace_to(x, params.e).expect("validated e | n");
            let bracket = terms
                .iter()
                .fold(tr, |acc, &(g, t)| acc ^ ctx.mul(g, ctx.frob_pow(tr, t)));
            ctx.mul(ctx.frob_pow(x, params.i), bracket)
        })
        .collect();
    VecFun::new(ctx.n(), ctx.n(), table)
}

/// `L` with `Tr(alpha G(x)) = Tr(x L(x))` for every `x`.
pub fn family_linpoly(ctx: &FieldCtx, params: &FamilyParams, alpha: u32) -> Result<LinPoly> {
    // Tr(alpha c x^(2^i) x^(2^j)) = Tr(x (alpha c)^(2^(n-i)) x^(2^(j-i)))
    let bracket = bracket_linpoly(ctx, params)?;
    let n = ctx.n();
    let shift = (n - params.i % n) % n;
    let mut coeffs = vec![0u32; n as usize];
    for (j, &c) in bracket.coeffs().iter().enumerate() {
        if c != 0 {
            let idx = (j as u32 + shift) % n;
            coeffs[idx as usize] ^= ctx.frob_pow(ctx.mul(alpha, c), shift);
        }
    }
    Ok(LinPoly::new(ctx, coeffs))
}

/// Which of the two no-root conditions to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootForm {
    /// `sum_j g_j^(2^(k-t_j)) z^(2^(k-t_j) - 1) + 1`
    A,
    /// `sum_j g_j^(2^(k-i)) z^(2^t_j - 1) + 1`
    B,
}

/// Value of the form-`form` precondition polynomial at `z`, with `z^0 = 1`.
pub fn precondition_value(ctx: &FieldCtx, form: RootForm, params: &FamilyParams, z: u32) -> u32 {
    let k = params.k;
    params.terms.iter().fold(1, |acc, &(g, t)| {
        let (frob, exp) = match form {
            RootForm::A => (k - t, (1u64 << (k - t)) - 1),
            RootForm::B => {
                let shift = (k as i64 - params.i as i64).rem_euclid(k as i64) as u32;
                (shift, (1u64 << t) - 1)
            }
        };
        acc ^ ctx.mul(ctx.frob_pow(g, frob), ctx.pow(z, exp))
    })
}

/// True iff the form-`form` polynomial has no root in the subfield of size `2^k`.
pub fn no_root_check(ctx: &FieldCtx, form: RootForm, params: &FamilyParams) -> Result<bool> {
    params.validate(ctx)?;
    let sub = ctx.subfield_elements(params.k)?;
    Ok(sub.into_iter().all(|z| precondition_value(ctx, form, params, z) != 0))
}

pub fn preconditions_hold(ctx: &FieldCtx, params: &FamilyParams) -> Result<bool> {
    Ok(no_root_check(ctx, RootForm::A, params)? && no_root_check(ctx, RootForm::B, params)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PredictedKind {
    /// The subfield of size `2^k`.
    SubfieldK,
    /// `{x : Tr_k^(2k)(x) in F_(2^e)}`, used when `k/e` is even.
    ESet,
    /// `{x : Tr_k^(2k)(x) in M}`, `M = {y + Tr_e^k(y)}`, used when `k/e` is odd.
    OSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedSet {
    pub kind: PredictedKind,
    pub members: Vec<u32>,
}

/// The set of directions predicted non-bent, without checking preconditions.
pub fn predicted_set_for(ctx: &FieldCtx, k: u32, e: u32) -> Result<PredictedSet> {
    if ctx.n() != 2 * k {
        return Err(Error::DimensionMismatch(format!("k = {k} needs degree {}", 2 * k)));
    }
    if e == 0 || !k.is_multiple_of(e) {
        if e == 2 && k % 2 == 1 {
            return Err(Error::UnsupportedE { k, e });
        }
        return Err(Error::InvalidParams(format!("e = {e} does not divide k = {k}")));
    }
    if e == k {
        return Ok(PredictedSet {
            kind: PredictedKind::SubfieldK,
            members: ctx.subfield_elements(k)?,
        });
    }
    let (kind, accept): (PredictedKind, Box<dyn Fn(u32) -> bool + '_>) = if (k / e).is_multiple_of(2) {
        (
            PredictedKind::ESet,
            Box::new(move |t| ctx.in_subfield(t, e).expect("e | n")),
        )
    } else {
        let mut in_m = vec![false; ctx.size()];
        for y in ctx.subfield_elements(k)? {
            in_m[(y ^ ctx.relative_trace(y, k, e)?) as usize] = true;
        }
        (PredictedKind::OSet, Box::new(move |t| in_m[t as usize]))
    };
    let members = ctx
        .elements()
        .filter(|&x| accept(ctx.trace_to(x, k).expect("k | n")))
        .collect();
    Ok(PredictedSet { kind, members })
}

/// The predicted non-bent set; errors when a no-root precondition fails.
pub fn predicted_nonbent_set(ctx: &FieldCtx, params: &FamilyParams) -> Result<PredictedSet> {
    params.validate(ctx)?;
    if !no_root_check(ctx, RootForm::A, params)? {
        return Err(Error::PreconditionsUnmet("form A polynomial has a root".into()));
    }
    if !no_root_check(ctx, RootForm::B, params)? {
        return Err(Error::PreconditionsUnmet("form B polynomial has a root".into()));
    }
    predicted_set_for(ctx, params.k, params.e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

/// Cap on listed set differences in a report.
const MAX_LISTED: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BentAlphaReport {
    pub params: FamilyParams,
    pub duplicate_t: bool,
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub predicted_kind: Option<PredictedKind>,
    pub predicted_size: u64,
    pub observed_nonbent_count: u64,
    pub bent_count: u64,
    /// Up to 16 directions that are non-bent but not predicted.
    pub unexpected_nonbent: Vec<u32>,
    /// Up to 16 predicted directions that turned out bent.
    pub unexpected_bent: Vec<u32>,
}

/// Tests bentness of `Tr(alpha G(x))` for every `alpha` by Walsh transform
/// and compares the non-bent set with the prediction.
pub fn verify_bent_alpha_theorem(ctx: &FieldCtx, params: &FamilyParams, guard: u32) -> Result<BentAlphaReport> {
    params.validate(ctx)?;
    if params.n() > guard {
        return Err(Error::CensusTooLarge { n: params.n(), guard });
    }
    let mut report = BentAlphaReport {
        params: params.clone(),
        duplicate_t: params.has_duplicate_t(),
        verdict: Verdict::Vacuous,
        reason: None,
        predicted_kind: None,
        predicted_size: 0,
        observed_nonbent_count: 0,
        bent_count: 0,
        unexpected_nonbent: Vec::new(),
        unexpected_bent: Vec::new(),
    };
    let predicted = match predicted_nonbent_set(ctx, params) {
        Ok(p) => p,
        Err(Error::PreconditionsUnmet(why)) => {
            report.reason = Some(why);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let g = build_g(ctx, params)?;
    let bent = g.component_bentness(ctx)?;
    let mut in_predicted = vec![false; ctx.size()];
    for &a in &predicted.members {
        in_predicted[a as usize] = true;
    }
    for (alpha, (&b, &p)) in bent.iter().zip(&in_predicted).enumerate() {
        match (b, p) {
            (false, false) if report.unexpected_nonbent.len() < MAX_LISTED => {
                report.unexpected_nonbent.push(alpha as u32)
            }
            (true, true) if report.unexpected_bent.len() < MAX_LISTED => report.unexpected_bent.push(alpha as u32),
            _ => {}
        }
    }
    let matches = bent.iter().zip(&in_predicted).all(|(&b, &p)| b != p);
    report.predicted_kind = Some(predicted.kind);
    report.predicted_size = predicted.members.len() as u64;
    report.bent_count = bent.iter().filter(|&&b| b).count() as u64;
    report.observed_nonbent_count = bent.len() as u64 - report.bent_count;
    report.verdict = if matches { Verdict::Pass } else { Verdict::Fail };
    Ok(report)
}

/// A `(2k, k)`-function `x -> Tr_k^(2k)(alpha G(x))`, with outputs
/// expressed in a standalone field of degree `k`.
#[derive(Debug, Clone)]
pub struct VectorialBent {
    pub function: VecFun,
    pub out_field: FieldCtx,
}

pub fn to_vectorial_bent(ctx: &FieldCtx, params: &FamilyParams, g: &VecFun, alpha: u32) -> Result<VectorialBent> {
    let predicted = predicted_nonbent_set(ctx, params)?;
    if alpha > ctx.mask() || predicted.members.binary_search(&alpha).is_ok() {
        return Err(Error::AlphaNotAdmissible(alpha));
    }
    if g.n() != ctx.n() || g.m() != ctx.n() {
        return Err(Error::DimensionMismatch("G must be a (2k, 2k)-function".into()));
    }
    let emb = SubfieldEmbedding::new(ctx, params.k)?;
    let table = g
        .table()
        .iter()
        .map(|&y| {
            let t = ctx.trace_to(ctx.mul(alpha, y), params.k).expect("k | n");
            emb.project(t).expect("relative trace lands in the subfield")
        })
        .collect();
    Ok(VectorialBent {
        function: VecFun::new(ctx.n(), params.k, table)?,
        out_field: emb.small().clone(),
    })
}

/// Which `e` values a campaign covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EScope {
    /// Every divisor of `k`.
    AllDivisors,
    /// Only `e = k`.
    KOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub rho_max: u32,
    pub e_scope: EScope,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            k_min: 1,
            k_max: 4,
            rho_max: 2,
            e_scope: EScope::AllDivisors,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroupStats {
    pub k: u32,
    pub e: u32,
    pub predicted_kind: Option<PredictedKind>,
    pub instances: u64,
    pub vacuous: u64,
    pub pass: u64,
    pub fail: u64,
    pub non_vacuous_rho_ge1: u64,
    /// Observed non-bent set sizes among non-vacuous instances.
    pub observed_nonbent_sizes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub instances: u64,
    pub vacuous: u64,
    pub pass: u64,
    pub fail: u64,
    pub non_vacuous_rho_ge1: u64,
    pub duplicate_t_instances: u64,
    pub groups: Vec<GroupStats>,
    /// First failures, capped.
    pub failures: Vec<BentAlphaReport>,
    /// A few non-vacuous passes with `rho >= 1`.
    pub pass_examples: Vec<BentAlphaReport>,
}

impl CampaignReport {
    pub fn verdict(&self) -> Verdict {
        if self.fail > 0 {
            Verdict::Fail
        } else if self.pass == 0 {
            Verdict::Vacuous
        } else {
            Verdict::Pass
        }
    }
}

const MAX_FAILURES_LISTED: usize = 50;
const MAX_PASS_EXAMPLES: usize = 10;

/// Every parameter tuple of a campaign for fixed `k` and `e`: all `i` in
/// `0..2k`, `rho <= rho_max`, nondecreasing `t_1 <= .. <= t_rho` in `0..=k`,
/// and every `gamma_j` in the subfield of size `2^k`.
pub fn campaign_instances(ctx: &FieldCtx, k: u32, e: u32, rho_max: u32) -> Result<Vec<FamilyParams>> {
    let sub = ctx.subfield_elements(k)?;
    let mut out = Vec::new();
    let rho_max = rho_max.min(k);
    let mut t_tuples: Vec<Vec<u32>> = vec![Vec::new()];
    let mut all_t: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..rho_max {
        let mut next = Vec::new();
        for tuple in &t_tuples {
            let start = tuple.last().copied().unwrap_or(0);
            for t in start..=k {
                let mut tt = tuple.clone();
                tt.push(t);
                next.push(tt);
            }
        }
        all_t.extend(next.iter().cloned());
        t_tuples = next;
    }
    for i in 0..2 * k {
        for ts in &all_t {
            let mut gammas: Vec<Vec<u32>> = vec![Vec::new()];
            for _ in ts {
                gammas = gammas
                    .into_iter()
                    .flat_map(|g| {
                        sub.iter().map(move |&s| {
                            let mut g = g.clone();
                            g.push(s);
                            g
                        })
                    })
                    .collect();
            }
            for gs in gammas {
                out.push(FamilyParams {
                    k,
                    i,
                    e,
                    terms: gs.into_iter().zip(ts.iter().copied()).collect(),
                });
            }
        }
    }
    Ok(out)
}

/// Runs `verify_bent_alpha_theorem` over every campaign instance.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    let mut report = CampaignReport {
        config: config.clone(),
        instances: 0,
        vacuous: 0,
        pass: 0,
        fail: 0,
        non_vacuous_rho_ge1: 0,
        duplicate_t_instances: 0,
        groups: Vec::new(),
        failures: Vec::new(),
        pass_examples: Vec::new(),
    };
    for k in config.k_min.max(1)..=config.k_max {
        let ctx = FieldCtx::with_default(2 * k)?;
        let es: Vec<u32> = match config.e_scope {
            EScope::AllDivisors => (1..=k).filter(|e| k % e == 0).collect(),
            EScope::KOnly => vec![k],
        };
        for e in es {
            let instances = campaign_instances(&ctx, k, e, config.rho_max)?;
            let results: Vec<BentAlphaReport> = instances
                .par_iter()
                .map(|p| verify_bent_alpha_theorem(&ctx, p, DEFAULT_CENSUS_GUARD))
                .collect::<Result<_>>()?;
            let mut group = GroupStats {
                k,
                e,
                ..Default::default()
            };
            for r in results {
                group.instances += 1;
                if r.duplicate_t {
                    report.duplicate_t_instances += 1;
                }
                match r.verdict {
                    Verdict::Vacuous => group.vacuous += 1,
                    Verdict::Pass => group.pass += 1,
                    Verdict::Fail => group.fail += 1,
                }
                if r.verdict != Verdict::Vacuous {
                    group.predicted_kind = r.predicted_kind;
                    if !group.observed_nonbent_sizes.contains(&r.observed_nonbent_count) {
                        group.observed_nonbent_sizes.push(r.observed_nonbent_count);
                        group.observed_nonbent_sizes.sort_unstable();
                    }
                    if r.params.rho() >= 1 {
                        group.non_vacuous_rho_ge1 += 1;
                    }
                }
                if r.verdict == Verdict::Fail && report.failures.len() < MAX_FAILURES_LISTED {
                    report.failures.push(r);
                } else if r.verdict == Verdict::Pass
                    && r.params.rho() >= 1
                    && report.pass_examples.len() < MAX_PASS_EXAMPLES
                {
                    report.pass_examples.push(r);
                }
            }
            report.instances += group.instances;
            report.vacuous += group.vacuous;
            report.pass += group.pass;
            report.fail += group.fail;
            report.non_vacuous_rho_ge1 += group.non_vacuous_rho_ge1;
            report.groups.push(group);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linmaps::quadform_bent_check;
    use crate::vectorial::{bent_census, is_xor_subspace};

    fn ctx(k: u32) -> FieldCtx {
        FieldCtx::with_default(2 * k).unwrap()
    }

    /// Evaluates G point by point from its defining product.
    fn direct_g(ctx: &FieldCtx, p: &FamilyParams, x: u32) -> u32 {
        let tr = ctx.trace_to(x, p.e).unwrap();
        let mut bracket = tr;
        for &(g, t) in &p.terms {
            bracket ^= ctx.mul(g, ctx.pow(tr, 1u64 << t));
        }
        ctx.mul(ctx.pow(x, 1u64 << p.i), bracket)
    }

    #[test]
    fn binomial_is_x2_times_trace() {
        let c = ctx(2);
        let g = build_g(&c, &FamilyParams::binomial(2, 1)).unwrap();
        let expected = VecFun::from_univariate(&c, &[(1, 3), (1, 6)]).unwrap();
        assert_eq!(g, expected);
        let g0 = build_g(&c, &FamilyParams::binomial(2, 0)).unwrap();
        for x in c.subfield_elements(2).unwrap() {
            assert_eq!(g0.eval(x), 0);
        }
    }

    #[test]
    fn build_g_matches_direct_evaluation() {
        let c = ctx(2);
        let sub = c.subfield_elements(2).unwrap();
        let params = [
            FamilyParams {
                k: 2,
                i: 1,
                e: 1,
                terms: vec![],
            },
            FamilyParams {
                k: 2,
                i: 3,
                e: 2,
                terms: vec![(sub[2], 1), (sub[3], 2)],
            },
            FamilyParams {
                k: 2,
                i: 0,
                e: 1,
                terms: vec![(sub[1], 0)],
            },
        ];
        for p in &params {
            let g = build_g(&c, p).unwrap();
            for x in c.elements() {
                assert_eq!(g.eval(x), direct_g(&c, p, x), "{p:?} x={x}");
            }
        }
    }

    #[test]
    fn trinomial_sum_family_expands() {
        // gamma = 1 terms reproduce x^(2^i)(x + x^(2^k) + x^(2^t1) + x^(2^(t1+k)) + ...)
        let c = ctx(3);
        let p = FamilyParams {
            k: 3,
            i: 1,
            e: 3,
            terms: vec![(1, 1), (1, 2)],
        };
        let g = build_g(&c, &p).unwrap();
        for x in c.elements() {
            let s = [0u32, 3, 1, 4, 2, 5].iter().fold(0, |acc, &j| acc ^ c.frob_pow(x, j));
            assert_eq!(g.eval(x), c.mul(c.frob_pow(x, 1), s));
        }
    }

    #[test]
    fn duplicate_t_merges() {
        let c = ctx(2);
        let sub = c.subfield_elements(2).unwrap();
        let dup = FamilyParams {
            k: 2,
            i: 1,
            e: 2,
            terms: vec![(sub[2], 1), (sub[3], 1)],
        };
        let merged = FamilyParams {
            k: 2,
            i: 1,
            e: 2,
            terms: vec![(sub[2] ^ sub[3], 1)],
        };
        assert!(dup.has_duplicate_t());
        assert_eq!(build_g(&c, &dup).unwrap(), build_g(&c, &merged).unwrap());
        let cancel = FamilyParams {
            k: 2,
            i: 1,
            e: 2,
            terms: vec![(1, 1), (1, 1)],
        };
        assert!(cancel.merged_terms().is_empty());
    }

    #[test]
    fn validation_errors() {
        let c = ctx(2);
        let not_sub = c.elements().find(|&a| !c.in_subfield(a, 2).unwrap()).unwrap();
        for p in [
            FamilyParams {
                k: 2,
                i: 0,
                e: 3,
                terms: vec![],
            },
            FamilyParams {
                k: 2,
                i: 0,
                e: 0,
                terms: vec![],
            },
            FamilyParams {
                k: 2,
                i: 0,
                e: 2,
                terms: vec![(1, 3)],
            },
            FamilyParams {
                k: 2,
                i: 0,
                e: 2,
                terms: vec![(1, 0), (1, 1), (1, 2)],
            },
            FamilyParams {
                k: 2,
                i: 0,
                e: 2,
                terms: vec![(not_sub, 1)],
            },
        ] {
            assert!(p.validate(&c).is_err(), "{p:?}");
        }
        assert!(FamilyParams::binomial(3, 0).validate(&c).is_err());
    }

    #[test]
    fn no_root_examples() {
        let c = ctx(2);
        for t in 0..=2 {
            let p = FamilyParams {
                k: 2,
                i: 0,
                e: 2,
                terms: vec![(1, t)],
            };
            // z = 1 gives 1 + 1
            assert_eq!(precondition_value(&c, RootForm::A, &p, 1), 0);
            assert!(!no_root_check(&c, RootForm::A, &p).unwrap());
        }
        // form B with k = 2, terms t = 2 and t = 1: z^3 + z + 1 on F_4 has no root
        let p = FamilyParams {
            k: 2,
            i: 0,
            e: 2,
            terms: vec![(1, 2), (1, 1)],
        };
        assert!(no_root_check(&c, RootForm::B, &p).unwrap());
        for z in c.subfield_elements(2).unwrap() {
            let direct = c.pow(z, 3) ^ z ^ 1;
            assert_eq!(precondition_value(&c, RootForm::B, &p, z), direct);
        }
        // two unit terms: odd count at z = 1
        assert_eq!(precondition_value(&c, RootForm::A, &p, 1), 1);
        // t = 0 in form B contributes z^0 = 1 even at z = 0
        let p0 = FamilyParams {
            k: 2,
            i: 0,
            e: 2,
            terms: vec![(1, 0)],
        };
        assert_eq!(precondition_value(&c, RootForm::B, &p0, 0), 0);
        let empty = FamilyParams::binomial(2, 1);
        assert!(preconditions_hold(&c, &empty).unwrap());
    }

    #[test]
    fn predicted_set_shapes() {
        let c = ctx(2);
        let s = predicted_nonbent_set(&c, &FamilyParams::binomial(2, 1)).unwrap();
        assert_eq!(s.kind, PredictedKind::SubfieldK);
        assert_eq!(s.members, c.subfield_elements(2).unwrap());
        // k/e = 2 even
        let e = predicted_set_for(&c, 2, 1).unwrap();
        assert_eq!(e.kind, PredictedKind::ESet);
        assert_eq!(e.members.len(), 8);
        let brute: Vec<u32> = c.elements().filter(|&x| c.trace_to(x, 2).unwrap() <= 1).collect();
        assert_eq!(e.members, brute);
        // k/e = 3 odd
        let c3 = ctx(3);
        let o = predicted_set_for(&c3, 3, 1).unwrap();
        assert_eq!(o.kind, PredictedKind::OSet);
        let m: std::collections::BTreeSet<u32> = c3
            .subfield_elements(3)
            .unwrap()
            .into_iter()
            .map(|y| y ^ c3.relative_trace(y, 3, 1).unwrap())
            .collect();
        assert_eq!(o.members.len(), 8 * m.len());
        for set in [&s.members, &e.members, &o.members] {
            assert!(is_xor_subspace(set));
        }
        // e = k through the general route matches the subfield
        assert_eq!(
            predicted_set_for(&c3, 3, 3).unwrap().members,
            c3.subfield_elements(3).unwrap()
        );
        assert_eq!(
            predicted_set_for(&c3, 3, 2).unwrap_err(),
            Error::UnsupportedE { k: 3, e: 2 }
        );
        let bad = FamilyParams {
            k: 2,
            i: 0,
            e: 2,
            terms: vec![(1, 1)],
        };
        assert!(matches!(
            predicted_nonbent_set(&c, &bad),
            Err(Error::PreconditionsUnmet(_))
        ));
    }

    #[test]
    fn binomial_bent_alpha_theorem() {
        for k in 1..=4 {
            let c = ctx(k);
            for i in 0..2 * k {
                let r = verify_bent_alpha_theorem(&c, &FamilyParams::binomial(k, i), 16).unwrap();
                assert_eq!(r.verdict, Verdict::Pass, "k={k} i={i}");
                assert_eq!(r.bent_count, (1 << (2 * k)) - (1 << k));
            }
        }
    }

    #[test]
    fn vacuous_when_preconditions_fail() {
        let c = ctx(2);
        let p = FamilyParams {
            k: 2,
            i: 0,
            e: 2,
            terms: vec![(1, 1)],
        };
        let r = verify_bent_alpha_theorem(&c, &p, 16).unwrap();
        assert_eq!(r.verdict, Verdict::Vacuous);
        assert!(r.reason.is_some());
        assert!(verify_bent_alpha_theorem(&c, &p, 2).is_err());
    }

    #[test]
    fn family_linpoly_reproduces_components() {
        let c = ctx(3);
        let sub = c.subfield_elements(3).unwrap();
        let p = FamilyParams {
            k: 3,
            i: 2,
            e: 3,
            terms: vec![(sub[3], 1), (sub[5], 3)],
        };
        let g = build_g(&c, &p).unwrap();
        for alpha in [0u32, 1, 5, 17, 42, 63] {
            let l = family_linpoly(&c, &p, alpha).unwrap();
            assert_eq!(l.quadratic_form(&c), g.component(&c, alpha).unwrap());
            assert!(quadform_bent_check(&c, &l).agrees());
        }
    }

    #[test]
    fn binomial_quadform_is_bent_off_the_subfield() {
        let c = ctx(2);
        let p = FamilyParams::binomial(2, 1);
        for alpha in c.elements() {
            let check = quadform_bent_check(&c, &family_linpoly(&c, &p, alpha).unwrap());
            let outside = !c.in_subfield(alpha, 2).unwrap();
            assert_eq!(
                (check.bent_by_spectrum, check.invertible_l_plus_adjoint),
                (outside, outside)
            );
        }
    }

    #[test]
    fn vectorial_bent_lift() {
        let c = ctx(2);
        let p = FamilyParams::binomial(2, 1);
        let g = build_g(&c, &p).unwrap();
        let alpha = c.elements().find(|&a| !c.in_subfield(a, 2).unwrap()).unwrap();
        let vb = to_vectorial_bent(&c, &p, &g, alpha).unwrap();
        assert_eq!((vb.function.n(), vb.function.m()), (4, 2));
        let bent = vb.function.component_bentness(&vb.out_field).unwrap();
        assert_eq!(bent, vec![false, true, true, true]);
        assert!(vb.function.component(&vb.out_field, 0).unwrap().weight() == 0);
        assert_eq!(
            to_vectorial_bent(&c, &p, &g, 1).unwrap_err(),
            Error::AlphaNotAdmissible(1)
        );
    }

    #[test]
    fn binomial_census_agrees_with_theorem() {
        let c = ctx(3);
        let g = build_g(&c, &FamilyParams::binomial(3, 1)).unwrap();
        let r = bent_census(&g, &c, 16).unwrap();
        assert_eq!(r.bent_count, 56);
        assert_eq!(r.nonbent_set, c.subfield_elements(3).unwrap());
    }

    #[test]
    fn campaign_enumeration_counts() {
        let c = ctx(2);
        let inst = campaign_instances(&c, 2, 2, 2).unwrap();
        // i: 4; t-tuples: 1 + 3 + 6; gammas: 1, 4, 16
        assert_eq!(inst.len(), 4 * (1 + 3 * 4 + 6 * 16));
    }

    #[test]
    fn small_campaign_k_only_passes() {
        let cfg = CampaignConfig {
            k_min: 1,
            k_max: 2,
            rho_max: 2,
            e_scope: EScope::KOnly,
        };
        let r = run_campaign(&cfg).unwrap();
        assert_eq!(r.fail, 0);
        assert!(r.pass > 0);
    }
}
