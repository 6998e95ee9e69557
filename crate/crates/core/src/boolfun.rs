//! Boolean functions as bit-packed truth tables, and their Walsh spectra.

use crate::error::{Error, Result};
use crate::field::FieldCtx;

pub const MAX_VARS: u32 = 24;

/// A Boolean function `f: F_2^n -> F_2`; bit `x` of the table is `f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolFun {
    n: u32,
    words: Vec<u64>,
}

impl BoolFun {
    pub fn zero(n: u32) -> Self {
        assert!((1..=MAX_VARS).contains(&n), "unsupported number of variables {n}");
        let words = vec![0u64; (1usize << n).div_ceil(64)];
        BoolFun { n, words }
    }

    pub fn from_fn(n: u32, mut f: impl FnMut(u32) -> bool) -> Self {
        let mut out = Self::zero(n);
        for x in 0..(1u32 << n) {
            if f(x) {
                out.set(x, true);
            }
        }
        out
    }

    /// The linear function `x -> Tr(c x)`.
    pub fn trace_linear(ctx: &FieldCtx, c: u32) -> Self {
        let w = ctx.trace_dual(c);
        Self::from_fn(ctx.n(), |x| (w & x).count_ones() & 1 == 1)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u32, value: bool) {
        let w = &mut self.words[(x >> 6) as usize];
        if value {
            *w |= 1 << (x & 63);
        } else {
            *w &= !(1 << (x & 63));
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `(-1)^f(x)` for every `x`.
    pub fn signs(&self) -> Vec<i64> {
        (0..self.len() as u32)
            .map(|x| if self.get(x) { -1 } else { 1 })
            .collect()
    }

    /// Spectrum indexed by the dot-product character:
    /// `values[w] = sum_x (-1)^(f(x) + w.x)`.
    pub fn walsh_spectrum(&self) -> WalshSpectrum {
        let mut values = self.signs();
        fwht(&mut values);
        WalshSpectrum { n: self.n, values }
    }

    /// Spectrum indexed by the trace character:
    /// `values[l] = sum_x (-1)^(f(x) + Tr(l x))`.
    pub fn trace_walsh_spectrum(&self, ctx: &FieldCtx) -> Result<WalshSpectrum> {
        if ctx.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "function on {} variables, field of degree {}",
                self.n,
                ctx.n()
            )));
        }
        let dot = self.walsh_spectrum();
        let values = ctx.elements().map(|l| dot.values[ctx.trace_dual(l) as usize]).collect();
        Ok(WalshSpectrum { n: self.n, values })
    }

    pub fn nonlinearity(&self) -> u64 {
        self.walsh_spectrum().nonlinearity()
    }

    pub fn is_bent(&self) -> bool {
        self.n.is_multiple_of(2) && self.walsh_spectrum().is_bent()
    }

    pub fn plateaued_amplitude(&self) -> Option<u32> {
        self.walsh_spectrum().plateaued_amplitude()
    }

    /// Truth table as hex, nibble `p` (left to right) holding
    /// `f(4p) .. f(4p+3)` in bits 0..3.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        (0..digits)
            .map(|p| {
                let nibble = (0..4)
                    .map(|j| 4 * p + j)
                    .filter(|&x| x < self.len() && self.get(x as u32))
                    .fold(0u32, |acc, x| acc | 1 << (x % 4));
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(n: u32, hex: &str) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&n) {
            return Err(Error::Parse(format!("unsupported number of variables {n}")));
        }
        let hex = hex.trim();
        let digits = (1usize << n).div_ceil(4);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "truth table for n={n} needs {digits} hex digits, got {}",
                hex.len()
            )));
        }
        let mut out = Self::zero(n);
        for (p, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?;
            for j in 0..4 {
                if nibble >> j & 1 == 1 {
                    let x = 4 * p + j;
                    if x >= out.len() {
                        return Err(Error::Parse("bits set beyond the truth table".into()));
                    }
                    out.set(x as u32, true);
                }
            }
        }
        Ok(out)
    }
}

/// In-place fast Walsh-Hadamard butterfly, `O(n 2^n)`.
pub fn fwht(values: &mut [i64]) {
    let len = values.len();
    assert!(len.is_power_of_two(), "FWHT length must be a power of two");
    let mut h = 1;
    while h < len {
        for block in values.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Signed Walsh values of a function on `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i64>,
}

impl WalshSpectrum {
    pub fn from_values(n: u32, values: Vec<i64>) -> Self {
        assert_eq!(values.len(), 1 << n);
        WalshSpectrum { n, values }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn max_abs(&self) -> u64 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn parseval_holds(&self) -> bool {
        let sum: u128 = self.values.iter().map(|&v| (v as i128 * v as i128) as u128).sum();
        sum == 1u128 << (2 * self.n)
    }

    pub fn nonlinearity(&self) -> u64 {
        (1u64 << (self.n - 1)) - self.max_abs() / 2
    }

    pub fn is_bent(&self) -> bool {
        spectrum_is_bent(self.n, &self.values)
    }

    pub fn plateaued_amplitude(&self) -> Option<u32> {
        spectrum_amplitude(self.n, &self.values)
    }
}

/// True iff `n` is even and every value has magnitude `2^(n/2)`.
pub fn spectrum_is_bent(n: u32, values: &[i64]) -> bool {
    if !n.is_multiple_of(2) {
        return false;
    }
    let target = 1u64 << (n / 2);
    values.iter().all(|v| v.unsigned_abs() == target)
}

/// The amplitude `t` with every nonzero `|W| = 2^((n+t)/2)`, if any.
pub fn spectrum_amplitude(n: u32, values: &[i64]) -> Option<u32> {
    let mut level: Option<u64> = None;
    for v in values.iter().map(|v| v.unsigned_abs()).filter(|&v| v != 0) {
        match level {
            None => level = Some(v),
            Some(l) if l != v => return None,
            _ => {}
        }
    }
    let level = level?;
    if !level.is_power_of_two() {
        return None;
    }
    let twice = 2 * level.trailing_zeros();
    if twice < n || twice > 2 * n {
        return None;
    }
    Some(twice - n)
}

/// Parses the truth-table file format: a header line `n=<int>` followed by
/// one hex truth table per line. Blank lines and `#` comments are ignored.
pub fn parse_truth_table_file(text: &str) -> Result<Vec<BoolFun>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty truth table file".into()))?;
    let n = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse::<u32>().ok())
        .ok_or_else(|| Error::Parse(format!("expected header n=<int>, got {header:?}")))?;
    lines.map(|l| BoolFun::from_hex(n, l)).collect()
}

pub fn write_truth_table_file(funcs: &[BoolFun]) -> Result<String> {
    let n = match funcs.first() {
        Some(f) => f.n(),
        None => return Err(Error::Parse("no functions to write".into())),
    };
    if funcs.iter().any(|f| f.n() != n) {
        return Err(Error::DimensionMismatch("mixed dimensions in one file".into()));
    }
    let mut out = format!("n={n}\n");
    for f in funcs {
        out.push_str(&f.to_hex());
        out.push('\n');
    }
    Ok(out)
}
