//! Vectorial functions `F: F_2^n -> F_2^m` stored as value tables, their
//! components, bent-component censuses and amplitude histograms.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfun::{fwht, spectrum_amplitude, spectrum_is_bent, BoolFun, WalshSpectrum};
use crate::diffspec;
use crate::error::{Error, Result};
use crate::field::{parse_hex_u32, FieldCtx};
use crate::rng::SplitMix64;

/// Largest `n` a full census runs at without an explicit override.
pub const DEFAULT_CENSUS_GUARD: u32 = 16;

/// Value table of an `(n, m)`-function, indexed by the encoded input.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VecFun {
    n: u32,
    m: u32,
    table: Vec<u32>,
}

impl VecFun {
    pub fn new(n: u32, m: u32, table: Vec<u32>) -> Result<Self> {
        if !(1..=24).contains(&n) || !(1..=24).contains(&m) {
            return Err(Error::DimensionMismatch(format!("unsupported dimensions ({n}, {m})")));
        }
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "table has {} entries, expected {}",
                table.len(),
                1u64 << n
            )));
        }
        if let Some(bad) = table.iter().find(|&&y| y >> m != 0) {
            return Err(Error::DimensionMismatch(format!("output {bad:#x} exceeds {m} bits")));
        }
        Ok(VecFun { n, m, table })
    }

    pub fn from_fn(n: u32, m: u32, f: impl Fn(u32) -> u32) -> Result<Self> {
        Self::new(n, m, (0..1u32 << n).map(f).collect())
    }

    pub fn identity(n: u32) -> Self {
        VecFun {
            n,
            m: n,
            table: (0..1u32 << n).collect(),
        }
    }

    /// `x -> sum coeff * x^exponent` over the field of `ctx`.
    pub fn from_univariate(ctx: &FieldCtx, terms: &[(u32, u64)]) -> Result<Self> {
        let top = (1u64 << ctx.n()) - 1;
        if let Some(&(_, e)) = terms.iter().find(|&&(_, e)| e > top) {
            return Err(Error::InvalidParams(format!("exponent {e} exceeds 2^n - 1 = {top}")));
        }
        if let Some(&(c, _)) = terms.iter().find(|&&(c, _)| c > ctx.mask()) {
            return Err(Error::InvalidParams(format!(
                "coefficient {c:#x} is not a field element"
            )));
        }
        let table = ctx
            .elements()
            .map(|x| {
                terms
                    .iter()
                    .fold(0, |acc, &(c, e)| acc ^ ctx.mul(c, monomial(ctx, x, e)))
            })
            .collect();
        Ok(VecFun {
            n: ctx.n(),
            m: ctx.n(),
            table,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    /// `x -> w . F(x)` for a dot-product mask `w`.
    pub fn dot_component(&self, w: u32) -> BoolFun {
        BoolFun::from_fn(self.n, |x| (self.table[x as usize] & w).count_ones() & 1 == 1)
    }

    /// The component `x -> Tr_1^m(v F(x))`, with `out` the field of degree `m`.
    pub fn component(&self, out: &FieldCtx, v: u32) -> Result<BoolFun> {
        self.check_output_field(out)?;
        if v > out.mask() {
            return Err(Error::InvalidParams(format!(
                "{v:#x} is not an element of F_2^{}",
                self.m
            )));
        }
        Ok(self.dot_component(out.trace_dual(v)))
    }

    /// Walsh spectrum of the dot-product component `w`.
    pub fn dot_component_spectrum(&self, w: u32) -> WalshSpectrum {
        let mut buf = Vec::new();
        self.fill_component_spectrum(w, &mut buf);
        WalshSpectrum::from_values(self.n, buf)
    }

    /// Extended Walsh value `W_F(u, v) = sum_x (-1)^(v.F(x) + u.x)`.
    pub fn extended_walsh(&self, u: u32, v: u32) -> i64 {
        (0..1u32 << self.n)
            .map(|x| {
                if ((self.table[x as usize] & v) ^ (u & x)).count_ones() & 1 == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    fn fill_component_spectrum(&self, w: u32, buf: &mut Vec<i64>) {
        buf.clear();
        buf.extend(self.table.iter().map(|&y| 1 - 2 * ((y & w).count_ones() & 1) as i64));
        fwht(buf);
    }

    fn check_output_field(&self, out: &FieldCtx) -> Result<()> {
        if out.n() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "output dimension {} but field of degree {}",
                self.m,
                out.n()
            )));
        }
        Ok(())
    }

    /// Amplitude of every component `Tr(v F)`, indexed by `v`.
    pub fn component_amplitudes(&self, out: &FieldCtx) -> Result<Vec<Option<u32>>> {
        self.check_output_field(out)?;
        let n = self.n;
        Ok((0..1u32 << self.m)
            .into_par_iter()
            .map_init(Vec::new, |buf, v| {
                self.fill_component_spectrum(out.trace_dual(v), buf);
                spectrum_amplitude(n, buf)
            })
            .collect())
    }

    /// Bentness of every component `Tr(v F)`, indexed by `v`.
    pub fn component_bentness(&self, out: &FieldCtx) -> Result<Vec<bool>> {
        self.check_output_field(out)?;
        let n = self.n;
        Ok((0..1u32 << self.m)
            .into_par_iter()
            .map_init(Vec::new, |buf, v| {
                self.fill_component_spectrum(out.trace_dual(v), buf);
                spectrum_is_bent(n, buf)
            })
            .collect())
    }

    /// True iff every nonzero component is bent.
    pub fn is_vectorial_bent(&self, out: &FieldCtx) -> Result<bool> {
        Ok(self.component_bentness(out)?.iter().skip(1).all(|&b| b))
    }

    /// File form: header `n=<n>,m=<m>` then whitespace-separated hex outputs.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("n={},m={}\n", self.n, self.m);
        for row in self.table.chunks(16) {
            let line: Vec<String> = row.iter().map(|y| format!("{y:x}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_table_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty table file".into()))?;
        let (mut n, mut m) = (None, None);
        for part in header.split(',') {
            match part.trim().split_once('=') {
                Some(("n", v)) => n = v.trim().parse::<u32>().ok(),
                Some(("m", v)) => m = v.trim().parse::<u32>().ok(),
                _ => return Err(Error::Parse(format!("bad table header {header:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("table header missing n".into()))?;
        let m = m.unwrap_or(n);
        let table = lines
            .flat_map(str::split_whitespace)
            .map(|tok| {
                let tok = tok.strip_prefix("0x").unwrap_or(tok);
                parse_hex_u32(&format!("0x{tok}"))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::new(n, m, table)
    }
}

fn monomial(ctx: &FieldCtx, x: u32, e: u64) -> u32 {
    match e.count_ones() {
        1 => ctx.frob_pow(x, e.trailing_zeros()),
        2 => {
            let lo = e.trailing_zeros();
            let hi = 63 - e.leading_zeros();
            ctx.mul(ctx.frob_pow(x, lo), ctx.frob_pow(x, hi))
        }
        _ => ctx.pow(x, e),
    }
}

/// True iff `set` contains 0 and is closed under XOR.
pub fn is_xor_subspace(set: &[u32]) -> bool {
    if set.is_empty() || !set.contains(&0) || !set.len().is_power_of_two() {
        return false;
    }
    // A set of size 2^d is a subspace iff it spans only d dimensions.
    let mut basis: Vec<u32> = Vec::new();
    for &v in set {
        let mut r = v;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    1usize << basis.len() == set.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: u32,
    pub bent_count: u64,
    pub nonbent_set: Vec<u32>,
    pub is_subspace: bool,
    pub is_max: bool,
}

impl CensusReport {
    fn from_bentness(n: u32, bent: &[bool]) -> Self {
        let nonbent_set: Vec<u32> = bent
            .iter()
            .enumerate()
            .filter(|(_, &b)| !b)
            .map(|(v, _)| v as u32)
            .collect();
        let bent_count = (bent.len() - nonbent_set.len()) as u64;
        CensusReport {
            n,
            bent_count,
            is_subspace: is_xor_subspace(&nonbent_set),
            is_max: bent_count == max_bent_components(n),
            nonbent_set,
        }
    }
}

/// `2^n - 2^(n/2)`, the largest possible number of bent components.
pub fn max_bent_components(n: u32) -> u64 {
    (1u64 << n) - (1u64 << (n / 2))
}

/// Classifies every component of an `(n, n)`-function as bent or not.
/// `v = 0` always counts as non-bent.
pub fn bent_census(f: &VecFun, ctx: &FieldCtx, guard: u32) -> Result<CensusReport> {
    if f.n != f.m {
        return Err(Error::DimensionMismatch(format!(
            "census needs an (n, n)-function, got ({}, {})",
            f.n, f.m
        )));
    }
    if !f.n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!("census needs even n, got {}", f.n)));
    }
    if f.n > guard {
        return Err(Error::CensusTooLarge { n: f.n, guard });
    }
    let bent = f.component_bentness(ctx)?;
    Ok(CensusReport::from_bentness(f.n, &bent))
}

/// Bent-component estimate from a random sample of directions. Never used
/// for theorem verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCensus {
    pub n: u32,
    pub samples: u64,
    pub bent_in_sample: u64,
    pub estimated_bent_count: f64,
}

pub fn sampled_census(f: &VecFun, ctx: &FieldCtx, samples: u64, seed: u64) -> Result<SampledCensus> {
    f.check_output_field(ctx)?;
    let mut rng = SplitMix64::new(seed);
    let dirs: Vec<u32> = (0..samples).map(|_| rng.bits(f.m) as u32).collect();
    let n = f.n;
    let bent_in_sample = dirs
        .par_iter()
        .map_init(Vec::new, |buf, &v| {
            f.fill_component_spectrum(ctx.trace_dual(v), buf);
            spectrum_is_bent(n, buf) as u64
        })
        .sum::<u64>();
    let estimated_bent_count = if samples == 0 {
        0.0
    } else {
        bent_in_sample as f64 / samples as f64 * (1u64 << f.m) as f64
    };
    Ok(SampledCensus {
        n,
        samples,
        bent_in_sample,
        estimated_bent_count,
    })
}

/// `N_t`: the number of `v` (including 0) whose component is `t`-plateaued.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmplitudeHistogram {
    pub n: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl AmplitudeHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `sum_t N_t 2^t`.
    pub fn weighted_sum(&self) -> u64 {
        self.counts.iter().map(|(&t, &c)| c << t).sum()
    }

    pub fn count(&self, t: u32) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }
}

pub fn amplitude_histogram(f: &VecFun, ctx: &FieldCtx) -> Result<AmplitudeHistogram> {
    let amps = f.component_amplitudes(ctx)?;
    let bad: Vec<u32> = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_none())
        .map(|(v, _)| v as u32)
        .collect();
    if !bad.is_empty() {
        return Err(Error::NotPlateaued(bad));
    }
    let mut counts = BTreeMap::new();
    for t in amps.into_iter().flatten() {
        *counts.entry(t).or_insert(0) += 1;
    }
    Ok(AmplitudeHistogram { n: f.n, counts })
}

/// `sum_{u, v} W_F(u, v)^4`, including the `v = 0` slice.
pub fn fourth_moment(f: &VecFun) -> u128 {
    (0..1u32 << f.m)
        .into_par_iter()
        .map_init(Vec::new, |buf, w| {
            f.fill_component_spectrum(w, buf);
            buf.iter().map(|&x| (x as i128).pow(4) as u128).sum::<u128>()
        })
        .sum()
}

/// `2^(3n) (3 * 2^n - 2)`, the fourth moment of every APN `(n, n)`-function.
pub fn apn_fourth_moment(n: u32) -> u128 {
    (1u128 << (3 * n)) * (3 * (1u128 << n) - 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApnPlateauedReport {
    pub n: u32,
    pub differential_uniformity: u32,
    pub is_apn: bool,
    pub is_vectorial_plateaued: bool,
    pub histogram: Option<BTreeMap<u32, u64>>,
    pub histogram_weighted_sum: Option<u64>,
    pub n0: u64,
    pub n0_mod4: u64,
    pub max_bent_count: u64,
    pub is_max: bool,
    pub fourth_moment: String,
    pub apn_fourth_moment: String,
    /// Both hypotheses hold (APN, every component plateaued, `n >= 4` even).
    pub hypotheses_hold: bool,
    /// When the hypotheses hold: `N_0 = 2 mod 4`, not maximal, and both
    /// moment identities exact. Always true otherwise.
    pub consistent: bool,
}

/// Checks that an APN plateaued function cannot reach `2^n - 2^(n/2)` bent
/// components, reporting every intermediate quantity.
pub fn verify_apn_plateaued_exclusion(f: &VecFun, ctx: &FieldCtx) -> Result<ApnPlateauedReport> {
    if f.n != f.m {
        return Err(Error::DimensionMismatch(
            "exclusion check needs an (n, n)-function".into(),
        ));
    }
    let n = f.n;
    let (differential_uniformity, is_apn) = diffspec::uniformity(f)?;
    let amps = f.component_amplitudes(ctx)?;
    let is_vectorial_plateaued = amps.iter().all(Option::is_some);
    let n0 = if n.is_multiple_of(2) {
        amps.iter().filter(|&&a| a == Some(0)).count() as u64
    } else {
        0
    };
    let (histogram, histogram_weighted_sum) = if is_vectorial_plateaued {
        let mut counts = BTreeMap::new();
        for t in amps.iter().flatten() {
            *counts.entry(*t).or_insert(0u64) += 1;
        }
        let sum = counts.iter().map(|(&t, &c)| c << t).sum();
        (Some(counts), Some(sum))
    } else {
        (None, None)
    };
    let fm = fourth_moment(f);
    let apn_fm = apn_fourth_moment(n);
    let max_bent_count = max_bent_components(n);
    let is_max = n.is_multiple_of(2) && n0 == max_bent_count;
    let hypotheses_hold = is_apn && is_vectorial_plateaued && n >= 4 && n.is_multiple_of(2);
    let consistent = !hypotheses_hold
        || (n0 % 4 == 2 && !is_max && fm == apn_fm && histogram_weighted_sum == Some(3 * (1u64 << n) - 2));
    Ok(ApnPlateauedReport {
        n,
        differential_uniformity,
        is_apn,
        is_vectorial_plateaued,
        histogram,
        histogram_weighted_sum,
        n0,
        n0_mod4: n0 % 4,
        max_bent_count,
        is_max,
        fourth_moment: fm.to_string(),
        apn_fourth_moment: apn_fm.to_string(),
        hypotheses_hold,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gold3(n: u32) -> (FieldCtx, VecFun) {
        let ctx = FieldCtx::with_default(n).unwrap();
        let f = VecFun::from_univariate(&ctx, &[(1, 3)]).unwrap();
        (ctx, f)
    }

    fn binomial16() -> (FieldCtx, VecFun) {
        // x^2 (x + x^4) = x^3 + x^6
        let ctx = FieldCtx::with_default(4).unwrap();
        let f = VecFun::from_univariate(&ctx, &[(1, 3), (1, 6)]).unwrap();
        (ctx, f)
    }

    #[test]
    fn univariate_examples() {
        let ctx = FieldCtx::with_default(4).unwrap();
        assert_eq!(VecFun::from_univariate(&ctx, &[(1, 1)]).unwrap(), VecFun::identity(4));
        let (_, g) = gold3(4);
        for x in ctx.elements() {
            assert_eq!(g.eval(x), ctx.mul(x, ctx.mul(x, x)));
        }
        let (_, b) = binomial16();
        for x in ctx.elements() {
            let x2 = ctx.square(x);
            let direct = ctx.mul(x2, x ^ ctx.frob_pow(x, 2));
            assert_eq!(b.eval(x), direct);
        }
        assert!(VecFun::from_univariate(&ctx, &[(1, 16)]).is_err());
        assert!(VecFun::from_univariate(&ctx, &[(16, 1)]).is_err());
    }

    #[test]
    fn general_exponents_use_square_and_multiply() {
        let ctx = FieldCtx::with_default(5).unwrap();
        let f = VecFun::from_univariate(&ctx, &[(3, 7), (1, 0), (5, 31)]).unwrap();
        for x in ctx.elements() {
            let mut p7 = 1;
            let mut p31 = 1;
            for _ in 0..7 {
                p7 = ctx.mul(p7, x);
            }
            for _ in 0..31 {
                p31 = ctx.mul(p31, x);
            }
            assert_eq!(f.eval(x), ctx.mul(3, p7) ^ 1 ^ ctx.mul(5, p31));
        }
    }

    #[test]
    fn component_examples() {
        let ctx = FieldCtx::with_default(4).unwrap();
        let (_, g) = gold3(4);
        assert_eq!(g.component(&ctx, 0).unwrap(), BoolFun::zero(4));
        let id = VecFun::identity(4);
        for v in 1..16 {
            let c = id.component(&ctx, v).unwrap();
            assert_eq!(c.plateaued_amplitude(), Some(4));
            assert!(!c.is_bent());
        }
        // Tr(x^3): 1 is a cube, so this component is 2-plateaued
        assert_eq!(g.component(&ctx, 1).unwrap().plateaued_amplitude(), Some(2));
        for x in ctx.elements() {
            let direct = ctx.trace(ctx.mul(7, g.eval(x))) == 1;
            assert_eq!(g.component(&ctx, 7).unwrap().get(x), direct);
        }
        assert!(g.component(&ctx, 16).is_err());
    }

    #[test]
    fn binomial_census_f16() {
        let (ctx, f) = binomial16();
        let r = bent_census(&f, &ctx, DEFAULT_CENSUS_GUARD).unwrap();
        assert_eq!(r.bent_count, 12);
        assert_eq!(r.nonbent_set, ctx.subfield_elements(2).unwrap());
        assert!(r.is_subspace);
        assert!(r.is_max);
    }

    #[test]
    fn identity_and_gold_census() {
        let ctx = FieldCtx::with_default(4).unwrap();
        let r = bent_census(&VecFun::identity(4), &ctx, 16).unwrap();
        assert_eq!(r.bent_count, 0);
        assert!(!r.is_max);
        let (_, g) = gold3(4);
        let r = bent_census(&g, &ctx, 16).unwrap();
        assert_eq!(r.bent_count, 10);
        assert_eq!(r.bent_count + r.nonbent_set.len() as u64, 16);
    }

    #[test]
    fn census_guards() {
        let ctx = FieldCtx::with_default(6).unwrap();
        let f = VecFun::identity(6);
        assert_eq!(
            bent_census(&f, &ctx, 4).unwrap_err(),
            Error::CensusTooLarge { n: 6, guard: 4 }
        );
        let ctx5 = FieldCtx::with_default(5).unwrap();
        assert!(bent_census(&VecFun::identity(5), &ctx5, 16).is_err());
        assert!(bent_census(&f, &FieldCtx::with_default(4).unwrap(), 16).is_err());
    }

    #[test]
    fn sampled_census_is_deterministic() {
        let (ctx, f) = binomial16();
        let a = sampled_census(&f, &ctx, 64, 5).unwrap();
        let b = sampled_census(&f, &ctx, 64, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.bent_in_sample <= 64);
    }

    #[test]
    fn gold_histogram_f16() {
        let (ctx, g) = gold3(4);
        let h = amplitude_histogram(&g, &ctx).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(0, 10), (2, 5), (4, 1)]));
        assert_eq!(h.weighted_sum(), 46);
        assert_eq!(h.total(), 16);
        let h = amplitude_histogram(&VecFun::identity(4), &ctx).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(4, 16)]));
    }

    #[test]
    fn histogram_rejects_non_plateaued() {
        let ctx = FieldCtx::with_default(4).unwrap();
        // x^7 on F_16 is not plateaued in every component
        let f = VecFun::from_univariate(&ctx, &[(1, 7)]).unwrap();
        match amplitude_histogram(&f, &ctx) {
            Err(Error::NotPlateaued(v)) => assert!(!v.is_empty()),
            other => panic!("expected NotPlateaued, got {other:?}"),
        }
    }

    #[test]
    fn fourth_moment_values() {
        let (_, g) = gold3(4);
        assert_eq!(fourth_moment(&g), 188_416);
        assert_eq!(apn_fourth_moment(4), 188_416);
        // identity: each v != 0 slice has one spike 2^n, v = 0 slice 2^(4n)
        let id = VecFun::identity(4);
        assert_eq!(fourth_moment(&id), 16 * (1u128 << 16));
        // naive double sum
        let naive: u128 = (0..16u32)
            .flat_map(|u| (0..16u32).map(move |v| (u, v)))
            .map(|(u, v)| (g.extended_walsh(u, v) as i128).pow(4) as u128)
            .sum();
        assert_eq!(naive, 188_416);
    }

    #[test]
    fn extended_walsh_zero_slice() {
        let (_, g) = gold3(4);
        assert_eq!(g.extended_walsh(0, 0), 16);
        for u in 1..16 {
            assert_eq!(g.extended_walsh(u, 0), 0);
        }
        for w in 0..16 {
            assert!(g.dot_component_spectrum(w).parseval_holds());
        }
    }

    #[test]
    fn apn_plateaued_gold() {
        let (ctx, g) = gold3(4);
        let r = verify_apn_plateaued_exclusion(&g, &ctx).unwrap();
        assert!(r.is_apn && r.is_vectorial_plateaued && r.hypotheses_hold && r.consistent);
        assert_eq!((r.n0, r.n0_mod4, r.is_max), (10, 2, false));
        let id = VecFun::identity(4);
        let r = verify_apn_plateaued_exclusion(&id, &ctx).unwrap();
        assert!(!r.is_apn && !r.hypotheses_hold && r.consistent);
    }

    #[test]
    fn subspace_test() {
        assert!(is_xor_subspace(&[0]));
        assert!(is_xor_subspace(&[0, 1, 6, 7]));
        assert!(!is_xor_subspace(&[0, 1, 2, 4]));
        assert!(!is_xor_subspace(&[1, 2, 3, 0, 5]));
        assert!(!is_xor_subspace(&[1]));
        assert!(!is_xor_subspace(&[]));
    }

    #[test]
    fn table_text_round_trip() {
        let (_, g) = gold3(4);
        let text = g.to_table_text();
        assert!(text.starts_with("n=4,m=4\n"));
        assert_eq!(VecFun::parse_table_text(&text).unwrap(), g);
        assert!(VecFun::parse_table_text("n=2,m=2\n0 1 2\n").is_err());
        assert!(VecFun::parse_table_text("n=2,m=1\n0 1 2 3\n").is_err());
    }
}
