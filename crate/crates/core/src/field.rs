//! Arithmetic in GF(2^n), 2 <= n <= 24, in a polynomial basis.
//!
//! An element is the integer whose bit `j` is the coefficient of `X^j`
//! modulo the defining polynomial. Addition is XOR. Multiplication uses
//! log/antilog tables for `n <= 16` and shift-and-reduce above that.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 24;

/// Largest degree that gets log/antilog tables.
const TABLE_DEGREE: u32 = 16;

/// Lexicographically smallest irreducible polynomial of each degree
/// 2..=24, bit `j` = coefficient of `X^j`.
pub const DEFAULT_POLYS: [u32; 23] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003, 0x1002b, 0x20009,
    0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

/// Default defining polynomial for degree `n`.
pub fn default_poly(n: u32) -> Option<u32> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        Some(DEFAULT_POLYS[(n - MIN_DEGREE) as usize])
    } else {
        None
    }
}

/// Degree of a binary polynomial; `None` for the zero polynomial.
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Carry-less product of two binary polynomials of degree < 32.
pub fn poly_mul(a: u64, b: u64) -> u64 {
    debug_assert!(a < 1 << 32 && b < 1 << 32);
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of `a` modulo `m` over GF(2).
pub fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

pub fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `p` of degree `n` is irreducible iff
/// `gcd(X^(2^d) - X, p) = 1` for every `1 <= d <= n/2`.
pub fn is_irreducible(p: u64) -> bool {
    let n = match poly_degree(p) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let mut frob = 0b10u64; // X^(2^d) mod p, starting at d = 0
    for _ in 1..=n / 2 {
        frob = poly_rem(poly_mul(frob, frob), p);
        if poly_gcd(p, frob ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

#[derive(Clone)]
struct LogTables {
    log: Vec<u32>,
    // Doubled so `exp[log a + log b]` never needs a reduction.
    exp: Vec<u32>,
}

/// An immutable GF(2^n) context. Cheap to share between threads.
#[derive(Clone)]
pub struct FieldCtx {
    n: u32,
    poly: u32,
    mask: u32,
    trace_mask: u32,
    // dual_cols[b] has bit j = Tr(X^(b+j)), so Tr(l*x) = parity(dual(l) & x).
    dual_cols: Vec<u32>,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly == other.poly
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(2^n) over `poly`, or over the registry default when
    /// `poly` is `None`.
    pub fn new(n: u32, poly: Option<u32>) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        let poly = match poly {
            Some(p) => {
                if poly_degree(p as u64) != Some(n) {
                    return Err(Error::DegreeMismatch { n, poly: p as u64 });
                }
                if !is_irreducible(p as u64) {
                    return Err(Error::Reducible(p as u64));
                }
                p
            }
            None => default_poly(n).expect("degree checked above"),
        };
        let mut ctx = FieldCtx {
            n,
            poly,
            mask: ((1u64 << n) - 1) as u32,
            trace_mask: 0,
            dual_cols: Vec::new(),
            tables: None,
        };
        for j in 0..n {
            if ctx.trace_slow(1 << j) == 1 {
                ctx.trace_mask |= 1 << j;
            }
        }
        // Tr(X^(b+j)) for 0 <= b, j < n
        let mut powers = Vec::with_capacity(2 * n as usize);
        let mut x = 1u32;
        for _ in 0..2 * n {
            powers.push(x);
            x = ctx.mul_slow(x, 0b10);
        }
        ctx.dual_cols = (0..n as usize)
            .map(|b| (0..n as usize).fold(0u32, |acc, j| acc | (ctx.trace_bit(powers[b + j]) << j)))
            .collect();
        if n <= TABLE_DEGREE {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    /// GF(2^n) with the registry polynomial.
    pub fn with_default(n: u32) -> Result<Self> {
        Self::new(n, None)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Bit `j` set iff `Tr(X^j) = 1`.
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    /// `"n=<n>,poly=0x<hex>"`.
    pub fn spec_string(&self) -> String {
        format!("n={},poly={:#x}", self.n, self.poly)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.n)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a <= self.mask && b <= self.mask);
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    /// Shift-and-reduce multiplication; used above the table threshold.
    pub fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let mut a = a as u64;
        let mut b = b;
        let mut acc = 0u64;
        let top = 1u64 << self.n;
        let poly = self.poly as u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= poly;
            }
        }
        acc as u32
    }

    #[inline]
    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => {
                let order = (1u32 << self.n) - 1;
                let l = t.log[a as usize];
                Some(t.exp[((order - l) % order) as usize])
            }
            None => Some(self.pow(a, (1u64 << self.n) - 2)),
        }
    }

    /// `a^(2^(i mod n))`.
    pub fn frob_pow(&self, a: u32, i: u32) -> u32 {
        let mut x = a;
        for _ in 0..i % self.n {
            x = self.square(x);
        }
        x
    }

    /// Absolute trace `Tr_1^n(a)` as 0 or 1.
    #[inline]
    pub fn trace(&self, a: u32) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    /// Mask `w` such that `Tr(l * x) = parity(w & x)` for all `x`.
    pub fn trace_dual(&self, l: u32) -> u32 {
        let mut w = 0;
        let mut bits = l;
        while bits != 0 {
            let b = bits.trailing_zeros();
            w ^= self.dual_cols[b as usize];
            bits &= bits - 1;
        }
        w
    }

    /// Relative trace `Tr_r^n(a) = a + a^(2^r) + ... + a^(2^(n-r))`.
    pub fn trace_to(&self, a: u32, r: u32) -> Result<u32> {
        self.relative_trace(a, self.n, r)
    }

    /// `Tr_r^k(a)` for `a` in the subfield of size `2^k`, `r | k | n`.
    pub fn relative_trace(&self, a: u32, k: u32, r: u32) -> Result<u32> {
        self.check_subfield(k)?;
        if r == 0 || !k.is_multiple_of(r) {
            return Err(Error::InvalidSubfield { r, n: k });
        }
        let mut acc = 0;
        let mut x = a;
        for _ in 0..k / r {
            acc ^= x;
            x = self.frob_pow(x, r);
        }
        Ok(acc)
    }

    /// True iff `a` lies in the subfield of size `2^r`.
    pub fn in_subfield(&self, a: u32, r: u32) -> Result<bool> {
        self.check_subfield(r)?;
        Ok(self.frob_pow(a, r) == a)
    }

    /// Elements of the subfield of size `2^r`, ascending.
    pub fn subfield_elements(&self, r: u32) -> Result<Vec<u32>> {
        self.check_subfield(r)?;
        Ok(self.elements().filter(|&a| self.frob_pow(a, r) == a).collect())
    }

    fn check_subfield(&self, r: u32) -> Result<()> {
        if r == 0 || !self.n.is_multiple_of(r) {
            Err(Error::InvalidSubfield { r, n: self.n })
        } else {
            Ok(())
        }
    }

    fn trace_slow(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.n {
            acc ^= x;
            x = self.mul_slow(x, x);
        }
        debug_assert!(acc <= 1);
        acc
    }

    fn trace_bit(&self, a: u32) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    fn build_tables(&self) -> LogTables {
        let order = (1u32 << self.n) - 1;
        let gen = self.find_generator();
        let mut log = vec![0u32; 1 << self.n];
        let mut exp = vec![0u32; 2 * order as usize];
        let mut x = 1u32;
        for l in 0..order {
            exp[l as usize] = x;
            exp[(l + order) as usize] = x;
            log[x as usize] = l;
            x = self.mul_slow(x, gen);
        }
        LogTables { log, exp }
    }

    /// Smallest primitive element.
    fn find_generator(&self) -> u32 {
        let order = (1u64 << self.n) - 1;
        let primes = prime_factors(order);
        (2..=self.mask)
            .find(|&g| primes.iter().all(|&p| self.pow_slow(g, order / p) != 1))
            .unwrap_or(1) // only reachable for n = 1
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Isomorphism between the subfield of size `2^k` inside a larger field and
/// a standalone `FieldCtx` of degree `k` with its registry polynomial.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    small: FieldCtx,
    embed: Vec<u32>,
    project: Vec<u32>,
}

impl SubfieldEmbedding {
    pub fn new(big: &FieldCtx, k: u32) -> Result<Self> {
        big.check_subfield(k)?;
        let small = FieldCtx::with_default(k)?;
        let poly = small.poly();
        // a root of the small field's polynomial inside the big subfield
        let root = big
            .subfield_elements(k)?
            .into_iter()
            .find(|&b| {
                let mut acc = 0;
                let mut p = 1;
                for j in 0..=k {
                    if poly >> j & 1 == 1 {
                        acc ^= p;
                    }
                    p = big.mul(p, b);
                }
                acc == 0
            })
            .expect("every subfield contains the roots of its irreducible polynomials");
        let mut powers = Vec::with_capacity(k as usize);
        let mut p = 1;
        for _ in 0..k {
            powers.push(p);
            p = big.mul(p, root);
        }
        let embed: Vec<u32> = small
            .elements()
            .map(|s| {
                (0..k)
                    .filter(|j| s >> j & 1 == 1)
                    .fold(0, |acc, j| acc ^ powers[j as usize])
            })
            .collect();
        let mut project = vec![u32::MAX; big.size()];
        for (s, &b) in embed.iter().enumerate() {
            project[b as usize] = s as u32;
        }
        Ok(SubfieldEmbedding { small, embed, project })
    }

    pub fn small(&self) -> &FieldCtx {
        &self.small
    }

    pub fn embed(&self, s: u32) -> u32 {
        self.embed[s as usize]
    }

    /// Inverse of `embed`; `None` outside the subfield.
    pub fn project(&self, b: u32) -> Option<u32> {
        match self.project[b as usize] {
            u32::MAX => None,
            s => Some(s),
        }
    }
}

/// Parsed form of `"n=<int>[,poly=0x<hex>]"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub n: u32,
    pub poly: Option<u32>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.n, self.poly)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut poly = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in field spec, got {part:?}")))?;
            match key.trim() {
                "n" => {
                    n = Some(
                        value
                            .trim()
                            .parse::<u32>()
                            .map_err(|e| Error::Parse(format!("bad degree {value:?}: {e}")))?,
                    )
                }
                "poly" => poly = Some(parse_hex_u32(value.trim())?),
                other => return Err(Error::Parse(format!("unknown field spec key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("field spec is missing n".into()))?;
        Ok(FieldSpec { n, poly })
    }
}

/// Parses `0x`-prefixed hex, or plain decimal.
pub fn parse_hex_u32(s: &str) -> Result<u32> {
    let parsed = if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u32::from_str_radix(h, 16)
    } else {
        s.parse::<u32>()
    };
    parsed.map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook product followed by reduction, independent of `FieldCtx`.
    fn schoolbook(a: u32, b: u32, poly: u32) -> u32 {
        poly_rem(poly_mul(a as u64, b as u64), poly as u64) as u32
    }

    /// Trial division by every polynomial of degree 1..=deg/2.
    fn has_factor(p: u64) -> bool {
        let n = poly_degree(p).unwrap();
        (2u64..1 << (n / 2 + 1)).any(|q| poly_degree(q).unwrap() >= 1 && poly_rem(p, q) == 0)
    }

    #[test]
    fn registry_is_smallest_irreducible() {
        for n in MIN_DEGREE..=MAX_DEGREE {
            let expected = (((1u64 << n) | 1)..(1u64 << (n + 1)))
                .step_by(2)
                .find(|&p| is_irreducible(p))
                .unwrap();
            assert_eq!(default_poly(n).unwrap() as u64, expected, "n = {n}");
        }
    }

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for p in 4u64..1 << 11 {
            assert_eq!(is_irreducible(p), !has_factor(p), "p = {p:#b}");
        }
    }

    #[test]
    fn ctx_build_examples() {
        let f4 = FieldCtx::new(2, Some(0b111)).unwrap();
        assert_eq!(f4.size(), 4);
        let f16 = FieldCtx::new(4, Some(0b10011)).unwrap();
        assert_eq!(f16.poly(), 0x13);
        // X^4+X^3+X^2+X+1 is the 5th cyclotomic polynomial and irreducible;
        // (X^2+X+1)^2 = X^4+X^2+1 is the reducible substitute.
        assert!(!has_factor(0b11111));
        assert!(FieldCtx::new(4, Some(0b11111)).is_ok());
        assert_eq!(poly_mul(0b111, 0b111), 0b10101);
        assert_eq!(FieldCtx::new(4, Some(0b10101)), Err(Error::Reducible(0b10101)));
        assert_eq!(FieldCtx::new(1, None).unwrap_err(), Error::UnsupportedDegree(1));
        assert_eq!(FieldCtx::new(25, None).unwrap_err(), Error::UnsupportedDegree(25));
        assert!(matches!(
            FieldCtx::new(4, Some(0b111)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let f4 = FieldCtx::new(2, None).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(schoolbook(2, 2, 0b111), 3);
        for a in 0..4 {
            assert_eq!(f4.mul(a, 1), a);
            assert_eq!(f4.mul(a, 0), 0);
        }
    }

    #[test]
    fn mul_matches_schoolbook() {
        for n in 2..=8 {
            let ctx = FieldCtx::with_default(n).unwrap();
            for a in ctx.elements() {
                for b in ctx.elements() {
                    assert_eq!(ctx.mul(a, b), schoolbook(a, b, ctx.poly()));
                }
            }
        }
        for n in [12, 16, 20, 24] {
            let ctx = FieldCtx::with_default(n).unwrap();
            let mut x = 0x9e37_79b9u32 & ctx.mask();
            for _ in 0..2000 {
                let y = x.rotate_left(7) & ctx.mask();
                assert_eq!(ctx.mul(x, y), schoolbook(x, y, ctx.poly()));
                x = x.wrapping_mul(2_654_435_761).wrapping_add(12345) & ctx.mask();
            }
        }
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for n in 2..=8 {
            let ctx = FieldCtx::with_default(n).unwrap();
            for a in 1..ctx.size() as u32 {
                let ai = ctx.inv(a).unwrap();
                assert_eq!(ctx.mul(a, ai), 1);
                assert_eq!(ai, ctx.pow(a, (1 << n) - 2));
            }
            assert_eq!(ctx.inv(0), None);
        }
        let ctx = FieldCtx::with_default(20).unwrap();
        assert_eq!(ctx.mul(0x12345, ctx.inv(0x12345).unwrap()), 1);
    }

    #[test]
    fn frob_examples() {
        let f4 = FieldCtx::new(2, None).unwrap();
        assert_eq!(f4.frob_pow(2, 1), 3);
        for n in 2..=10 {
            let ctx = FieldCtx::with_default(n).unwrap();
            for a in ctx.elements() {
                assert_eq!(ctx.frob_pow(a, n), a);
            }
            for i in 0..3 * n {
                assert_eq!(ctx.frob_pow(1, i), 1);
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f4 = FieldCtx::new(2, None).unwrap();
        assert_eq!(f4.trace_to(2, 1).unwrap(), 1);
        assert_eq!(f4.trace_to(0, 1).unwrap(), 0);
        assert_eq!(f4.trace_to(1, 1).unwrap(), 0);
        let f16 = FieldCtx::with_default(4).unwrap();
        assert_eq!(f16.trace_to(3, 3), Err(Error::InvalidSubfield { r: 3, n: 4 }));
        assert!(f16.in_subfield(3, 3).is_err());
    }

    #[test]
    fn absolute_trace_matches_relative_and_dual() {
        for n in 2..=9 {
            let ctx = FieldCtx::with_default(n).unwrap();
            for a in ctx.elements() {
                assert_eq!(ctx.trace(a), ctx.trace_to(a, 1).unwrap());
            }
            for l in ctx.elements() {
                let w = ctx.trace_dual(l);
                for x in ctx.elements() {
                    assert_eq!(ctx.trace(ctx.mul(l, x)), (w & x).count_ones() & 1);
                }
            }
        }
    }

    #[test]
    fn trace_is_surjective_with_equal_fibers() {
        for n in 2..=12 {
            let ctx = FieldCtx::with_default(n).unwrap();
            for r in (1..=n).filter(|r| n % r == 0) {
                let mut fiber = std::collections::HashMap::new();
                for a in ctx.elements() {
                    let t = ctx.trace_to(a, r).unwrap();
                    assert!(ctx.in_subfield(t, r).unwrap());
                    *fiber.entry(t).or_insert(0usize) += 1;
                }
                assert_eq!(fiber.len(), 1 << r, "n={n} r={r}");
                assert!(fiber.values().all(|&c| c == 1 << (n - r)));
            }
        }
    }

    #[test]
    fn subfield_sizes() {
        for n in 2..=12 {
            let ctx = FieldCtx::with_default(n).unwrap();
            for r in (1..=n).filter(|r| n % r == 0) {
                let sub = ctx.subfield_elements(r).unwrap();
                assert_eq!(sub.len(), 1 << r);
                assert!(ctx.in_subfield(1, r).unwrap());
            }
        }
    }

    #[test]
    fn f4_inside_f16_is_fifth_powers() {
        let ctx = FieldCtx::with_default(4).unwrap();
        let gens: Vec<u32> = (1..16u32).filter(|&g| (1..15).all(|e| ctx.pow(g, e) != 1)).collect();
        assert_eq!(gens.len(), 8);
        for g in gens {
            assert!(ctx.in_subfield(ctx.pow(g, 5), 2).unwrap());
        }
    }

    #[test]
    fn relative_trace_composes() {
        let ctx = FieldCtx::with_default(12).unwrap();
        for a in (0..ctx.size() as u32).step_by(37) {
            let t6 = ctx.trace_to(a, 6).unwrap();
            let t2 = ctx.relative_trace(t6, 6, 2).unwrap();
            assert_eq!(t2, ctx.trace_to(a, 2).unwrap());
        }
        assert!(ctx.relative_trace(1, 6, 4).is_err());
        assert!(ctx.relative_trace(1, 5, 1).is_err());
    }

    #[test]
    fn field_spec_parsing() {
        let spec: FieldSpec = "n=4,poly=0x13".parse().unwrap();
        assert_eq!(spec, FieldSpec { n: 4, poly: Some(0x13) });
        assert_eq!(spec.build().unwrap().spec_string(), "n=4,poly=0x13");
        let spec: FieldSpec = "n=6".parse().unwrap();
        assert_eq!(spec.build().unwrap().poly(), 0x43);
        assert!("poly=0x13".parse::<FieldSpec>().is_err());
        assert!("n=4,q=1".parse::<FieldSpec>().is_err());
        assert!("n=four".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn subfield_embedding_is_a_field_isomorphism() {
        for (n, k) in [(4, 2), (6, 3), (8, 4), (6, 2), (12, 6)] {
            let big = FieldCtx::with_default(n).unwrap();
            let emb = SubfieldEmbedding::new(&big, k).unwrap();
            let small = emb.small();
            for a in small.elements() {
                let ea = emb.embed(a);
                assert!(big.in_subfield(ea, k).unwrap());
                assert_eq!(emb.project(ea), Some(a));
                for b in small.elements() {
                    assert_eq!(emb.embed(small.mul(a, b)), big.mul(ea, emb.embed(b)));
                    assert_eq!(emb.embed(a ^ b), ea ^ emb.embed(b));
                }
            }
        }
        let big = FieldCtx::with_default(4).unwrap();
        assert!(SubfieldEmbedding::new(&big, 3).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn frobenius_is_an_automorphism(n in 2u32..=24, a in any::<u32>(), b in any::<u32>(), i in 0u32..48) {
                let ctx = FieldCtx::with_default(n).unwrap();
                let (a, b) = (a & ctx.mask(), b & ctx.mask());
                prop_assert_eq!(ctx.frob_pow(a ^ b, i), ctx.frob_pow(a, i) ^ ctx.frob_pow(b, i));
                prop_assert_eq!(ctx.frob_pow(ctx.mul(a, b), i), ctx.mul(ctx.frob_pow(a, i), ctx.frob_pow(b, i)));
            }

            #[test]
            fn field_axioms(n in 2u32..=24, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
                let ctx = FieldCtx::with_default(n).unwrap();
                let (a, b, c) = (a & ctx.mask(), b & ctx.mask(), c & ctx.mask());
                prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                prop_assert_eq!(ctx.mul(a, b ^ c), ctx.mul(a, b) ^ ctx.mul(a, c));
            }
        }
    }
}
