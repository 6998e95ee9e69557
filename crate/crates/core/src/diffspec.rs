//! Differential spectra `delta_F(a, b) = #{x : F(x + a) + F(x) = b}`,
//! computed one row at a time, and verifiers for the spectra of the
//! quadratic families.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{build_g, preconditions_hold, FamilyParams, Verdict};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::vectorial::{VecFun, DEFAULT_CENSUS_GUARD};

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One row of the difference distribution table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub a: u32,
    /// `delta -> number of b` with that value, zeros included.
    pub histogram: BTreeMap<u32, u64>,
    /// The `b` with `delta > 0`, ascending.
    pub support: Vec<u32>,
    counts: Vec<u32>,
}

impl DeltaRow {
    pub fn delta(&self, b: u32) -> u32 {
        self.counts[b as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn row_sum(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Distinct values taken over all `b`.
    pub fn values(&self) -> Vec<u32> {
        self.histogram.keys().copied().collect()
    }

    /// Some `b` attaining `value`.
    pub fn witness(&self, value: u32) -> Option<u32> {
        self.counts.iter().position(|&c| c == value).map(|b| b as u32)
    }

    /// CSV with columns `b_hex,delta`, one line per `b`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("b_hex,delta\n");
        for (b, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{b:#x},{c}\n"));
        }
        out
    }
}

fn row_counts(f: &VecFun, a: u32, counts: &mut Vec<u32>) {
    counts.clear();
    counts.resize(1 << f.m(), 0);
    let table = f.table();
    for (x, &y) in table.iter().enumerate() {
        counts[(y ^ table[x ^ a as usize]) as usize] += 1;
    }
}

pub fn delta_row(f: &VecFun, a: u32) -> Result<DeltaRow> {
    if a == 0 {
        return Err(Error::ZeroDirection);
    }
    if a >> f.n() != 0 {
        return Err(Error::InvalidParams(format!("{a:#x} exceeds {} bits", f.n())));
    }
    let mut counts = Vec::new();
    row_counts(f, a, &mut counts);
    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_insert(0u64) += 1;
    }
    let support = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(b, _)| b as u32)
        .collect();
    Ok(DeltaRow {
        a,
        histogram,
        support,
        counts,
    })
}

/// Maximum of `delta_F(a, b)` over `a != 0`, and whether it equals 2.
pub fn uniformity(f: &VecFun) -> Result<(u32, bool)> {
    if f.n() != f.m() {
        return Err(Error::DimensionMismatch("uniformity needs an (n, n)-function".into()));
    }
    let delta = (1..1u32 << f.n())
        .into_par_iter()
        .map_init(Vec::new, |buf, a| {
            row_counts(f, a, buf);
            buf.iter().copied().max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok((delta, delta == 2))
}

/// Cap on listed violations.
const MAX_LISTED: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: u32,
    pub b: u32,
    pub delta: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialSpectrumReport {
    pub k: u32,
    pub i: u32,
    /// `2^gcd(i, k)`.
    pub off_subfield_value: u32,
    pub verdict: Verdict,
    /// Values seen in rows with `a` in the subfield, and outside it.
    pub subfield_row_values: Vec<u32>,
    pub other_row_values: Vec<u32>,
    pub violations: Vec<Violation>,
}

/// Rows of `x^(2^i)(x + x^(2^k))`: for `a` in the subfield of size `2^k`
/// the values lie in `{0, 2^k}` with `2^k` exactly on that subfield; for
/// other `a` they lie in `{0, 2^gcd(i, k)}`.
pub fn verify_binomial_spectrum(ctx: &FieldCtx, i: u32, k: u32, guard: u32) -> Result<BinomialSpectrumReport> {
    if i >= k {
        return Err(Error::InvalidParams(format!("need i < k, got i = {i}, k = {k}")));
    }
    if 2 * k > guard {
        return Err(Error::CensusTooLarge { n: 2 * k, guard });
    }
    let params = FamilyParams::binomial(k, i);
    let g = build_g(ctx, &params)?;
    let big = 1u32 << k;
    let off = 1u32 << gcd(i, k);
    let rows: Vec<(u32, bool, Vec<u32>, Vec<Violation>)> = (1..1u32 << (2 * k))
        .into_par_iter()
        .map_init(Vec::new, |buf, a| {
            row_counts(&g, a, buf);
            let in_sub = ctx.in_subfield(a, k).expect("k | 2k");
            let mut values: Vec<u32> = buf.clone();
            values.sort_unstable();
            values.dedup();
            let mut bad = Vec::new();
            for (b, &d) in buf.iter().enumerate() {
                let ok = if in_sub {
                    d == 0 || (d == big && ctx.in_subfield(b as u32, k).expect("k | 2k"))
                } else {
                    d == 0 || d == off
                };
                if !ok && bad.len() < MAX_LISTED {
                    bad.push(Violation {
                        a,
                        b: b as u32,
                        delta: d,
                    });
                }
            }
            (a, in_sub, values, bad)
        })
        .collect();
    let mut sub_vals = Vec::new();
    let mut other_vals = Vec::new();
    let mut violations = Vec::new();
    for (_, in_sub, values, bad) in rows {
        let target = if in_sub { &mut sub_vals } else { &mut other_vals };
        target.extend(values);
        for v in bad {
            if violations.len() < MAX_LISTED {
                violations.push(v);
            }
        }
    }
    for v in [&mut sub_vals, &mut other_vals] {
        v.sort_unstable();
        v.dedup();
    }
    Ok(BinomialSpectrumReport {
        k,
        i,
        off_subfield_value: off,
        verdict: if violations.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        subfield_row_values: sub_vals,
        other_row_values: other_vals,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnomalyReport {
    pub k: u32,
    pub i: u32,
    pub ts: Vec<u32>,
    pub verdict: Verdict,
    pub reason: Option<String>,
    /// `2^gcd(i, k)`.
    pub gcd_value: u32,
    /// Roots of `sum_j z^(2^t_j) + z + z^(2^i)` in the subfield (general form only).
    pub root_count: Option<u64>,
    pub witness_a: Option<u32>,
    /// One `b` per `delta` value of the witnessing row.
    pub witness_b: BTreeMap<u32, u32>,
}

impl AnomalyReport {
    fn vacuous(k: u32, i: u32, ts: &[u32], reason: impl Into<String>) -> Self {
        AnomalyReport {
            k,
            i,
            ts: ts.to_vec(),
            verdict: Verdict::Vacuous,
            reason: Some(reason.into()),
            gcd_value: 1 << gcd(i, k),
            root_count: None,
            witness_a: None,
            witness_b: BTreeMap::new(),
        }
    }
}

fn unit_terms(ts: &[u32]) -> Vec<(u32, u32)> {
    ts.iter().map(|&t| (1, t)).collect()
}

fn witness_map(row: &DeltaRow) -> BTreeMap<u32, u32> {
    row.values()
        .into_iter()
        .filter_map(|v| row.witness(v).map(|b| (v, b)))
        .collect()
}

/// With `t1 = 1`, `gcd(t2, k) != 1` and `i = t2`, looks for `a` outside the
/// subfield with `tau = a + a^(2^k)` satisfying `tau^(2^t1) = tau != 0`
/// whose whole row takes values in `{0, 2}`.
pub fn verify_delta2_anomaly(ctx: &FieldCtx, k: u32, t1: u32, t2: u32) -> Result<AnomalyReport> {
    let ts = [t1, t2];
    if t1 != 1 {
        return Ok(AnomalyReport::vacuous(k, t2, &ts, "t1 must be 1"));
    }
    if gcd(t2, k) == 1 {
        return Ok(AnomalyReport::vacuous(k, t2, &ts, "gcd(t2, k) = 1"));
    }
    let params = FamilyParams {
        k,
        i: t2,
        e: k,
        terms: unit_terms(&ts),
    };
    params.validate(ctx)?;
    if !preconditions_hold(ctx, &params)? {
        return Ok(AnomalyReport::vacuous(k, t2, &ts, "no-root preconditions fail"));
    }
    let g = build_g(ctx, &params)?;
    let mut report = AnomalyReport {
        k,
        i: t2,
        ts: ts.to_vec(),
        verdict: Verdict::Fail,
        reason: None,
        gcd_value: 1 << gcd(t2, k),
        root_count: None,
        witness_a: None,
        witness_b: BTreeMap::new(),
    };
    for a in ctx.elements() {
        let tau = ctx.trace_to(a, k)?;
        if tau == 0 || ctx.frob_pow(tau, t1) != tau {
            continue;
        }
        let row = delta_row(&g, a)?;
        if row.values().iter().all(|&v| v == 0 || v == 2) {
            report.verdict = Verdict::Pass;
            report.witness_a = Some(a);
            report.witness_b = witness_map(&row);
            return Ok(report);
        }
    }
    report.reason = Some("no admissible a has a row inside {0, 2}".into());
    Ok(report)
}

/// Number of roots in the subfield of size `2^k` of
/// `sum_j z^(2^t_j) + z + z^(2^i)`.
pub fn anomaly_root_count(ctx: &FieldCtx, k: u32, i: u32, ts: &[u32]) -> Result<u64> {
    Ok(ctx
        .subfield_elements(k)?
        .into_iter()
        .filter(|&z| {
            let s = ts
                .iter()
                .fold(z ^ ctx.frob_pow(z, i), |acc, &t| acc ^ ctx.frob_pow(z, t));
            s == 0
        })
        .count() as u64)
}

/// When the root count differs from `2^gcd(i, k)`, looks for `a` with
/// `Tr_k^(2k)(a) = 1` whose row never takes the value `2^gcd(i, k)`.
pub fn verify_general_anomaly(ctx: &FieldCtx, k: u32, i: u32, ts: &[u32]) -> Result<AnomalyReport> {
    let params = FamilyParams {
        k,
        i,
        e: k,
        terms: unit_terms(ts),
    };
    params.validate(ctx)?;
    if !preconditions_hold(ctx, &params)? {
        return Ok(AnomalyReport::vacuous(k, i, ts, "no-root preconditions fail"));
    }
    let gcd_value = 1u32 << gcd(i, k);
    let roots = anomaly_root_count(ctx, k, i, ts)?;
    if roots == gcd_value as u64 {
        let mut r = AnomalyReport::vacuous(k, i, ts, "root count equals 2^gcd(i, k)");
        r.root_count = Some(roots);
        return Ok(r);
    }
    let g = build_g(ctx, &params)?;
    let mut report = AnomalyReport {
        k,
        i,
        ts: ts.to_vec(),
        verdict: Verdict::Fail,
        reason: None,
        gcd_value,
        root_count: Some(roots),
        witness_a: None,
        witness_b: BTreeMap::new(),
    };
    for a in ctx.elements() {
        if ctx.trace_to(a, k)? != 1 {
            continue;
        }
        let row = delta_row(&g, a)?;
        if !row.histogram.contains_key(&gcd_value) {
            report.verdict = Verdict::Pass;
            report.witness_a = Some(a);
            report.witness_b = witness_map(&row);
            return Ok(report);
        }
    }
    report.reason = Some("every a with Tr(a) = 1 has a row attaining 2^gcd(i, k)".into());
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnomalyScan {
    pub instances: u64,
    pub pass: u64,
    pub fail: u64,
    pub vacuous: u64,
    pub reports: Vec<AnomalyReport>,
}

impl AnomalyScan {
    fn from_reports(reports: Vec<AnomalyReport>) -> Self {
        let count = |v| reports.iter().filter(|r| r.verdict == v).count() as u64;
        AnomalyScan {
            instances: reports.len() as u64,
            pass: count(Verdict::Pass),
            fail: count(Verdict::Fail),
            vacuous: count(Verdict::Vacuous),
            reports,
        }
    }

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

/// `verify_delta2_anomaly` for `2 <= k <= k_max`, `t1 = 1`, every
/// `t2` in `0..=k` with `gcd(t2, k) != 1`.
pub fn scan_delta2_anomaly(k_max: u32) -> Result<AnomalyScan> {
    let mut reports = Vec::new();
    for k in 2..=k_max {
        if 2 * k > DEFAULT_CENSUS_GUARD {
            return Err(Error::CensusTooLarge {
                n: 2 * k,
                guard: DEFAULT_CENSUS_GUARD,
            });
        }
        let ctx = FieldCtx::with_default(2 * k)?;
        let ts: Vec<u32> = (0..=k).filter(|&t| gcd(t, k) != 1).collect();
        let mut rs: Vec<AnomalyReport> = ts
            .par_iter()
            .map(|&t2| verify_delta2_anomaly(&ctx, k, 1, t2))
            .collect::<Result<_>>()?;
        reports.append(&mut rs);
    }
    Ok(AnomalyScan::from_reports(reports))
}

/// `verify_general_anomaly` for `1 <= k <= k_max`, `0 <= i < k`, and every
/// nondecreasing `t_1 <= .. <= t_rho` in `0..=k` with `rho <= min(k, rho_max)`.
pub fn scan_general_anomaly(k_max: u32, rho_max: u32) -> Result<AnomalyScan> {
    let mut reports = Vec::new();
    for k in 1..=k_max {
        if 2 * k > DEFAULT_CENSUS_GUARD {
            return Err(Error::CensusTooLarge {
                n: 2 * k,
                guard: DEFAULT_CENSUS_GUARD,
            });
        }
        let ctx = FieldCtx::with_default(2 * k)?;
        let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..rho_max.min(k) {
            let next: Vec<Vec<u32>> = frontier
                .iter()
                .flat_map(|tuple| {
                    let start = tuple.last().copied().unwrap_or(0);
                    (start..=k).map(move |t| {
                        let mut tt = tuple.clone();
                        tt.push(t);
                        tt
                    })
                })
                .collect();
            tuples.extend(next.iter().cloned());
            frontier = next;
        }
        let jobs: Vec<(u32, Vec<u32>)> = (0..k)
            .flat_map(|i| tuples.iter().map(move |ts| (i, ts.clone())))
            .collect();
        let mut rs: Vec<AnomalyReport> = jobs
            .par_iter()
            .map(|(i, ts)| verify_general_anomaly(&ctx, k, *i, ts))
            .collect::<Result<_>>()?;
        reports.append(&mut rs);
    }
    Ok(AnomalyScan::from_reports(reports))
}
