//! Linearized polynomials `sum c_i x^(2^i)` and their adjoints with respect
//! to the trace form `<x, y> = Tr(xy)`.

use crate::boolfun::BoolFun;
use crate::field::FieldCtx;
use crate::rng::SplitMix64;

/// `coeffs[i]` is the coefficient of `x^(2^i)`, `0 <= i < n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinPoly {
    coeffs: Vec<u32>,
}

impl LinPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<u32>) -> Self {
        assert_eq!(coeffs.len(), ctx.n() as usize, "one coefficient per Frobenius power");
        assert!(coeffs.iter().all(|&c| c <= ctx.mask()));
        LinPoly { coeffs }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        LinPoly {
            coeffs: vec![0; ctx.n() as usize],
        }
    }

    /// `c x^(2^i)`, with `i` taken mod `n`.
    pub fn monomial(ctx: &FieldCtx, c: u32, i: u32) -> Self {
        let mut out = Self::zero(ctx);
        out.coeffs[(i % ctx.n()) as usize] = c;
        out
    }

    /// Uniformly random coefficients.
    pub fn random(ctx: &FieldCtx, rng: &mut SplitMix64) -> Self {
        let coeffs = (0..ctx.n()).map(|_| rng.bits(ctx.n()) as u32).collect();
        LinPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn n(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn eval(&self, ctx: &FieldCtx, x: u32) -> u32 {
        let mut acc = 0;
        let mut xp = x;
        for &c in &self.coeffs {
            if c != 0 {
                acc ^= ctx.mul(c, xp);
            }
            xp = ctx.square(xp);
        }
        acc
    }

    /// Coefficient-wise XOR.
    pub fn add(&self, other: &LinPoly) -> LinPoly {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        LinPoly {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Term-wise `c x^(2^i) -> c^(2^(n-i)) x^(2^(n-i))`.
    pub fn adjoint(&self, ctx: &FieldCtx) -> LinPoly {
        let n = self.n();
        let mut coeffs = vec![0u32; n as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = (n - i as u32) % n;
            coeffs[j as usize] ^= ctx.frob_pow(c, j);
        }
        LinPoly { coeffs }
    }

    /// Column `j` is `L(X^j)`; bit `r` of `matrix[j]` is row `r`.
    pub fn matrix_columns(&self, ctx: &FieldCtx) -> Vec<u32> {
        (0..ctx.n()).map(|j| self.eval(ctx, 1 << j)).collect()
    }

    pub fn rank(&self, ctx: &FieldCtx) -> u32 {
        gf2_rank(&self.matrix_columns(ctx))
    }

    /// True iff the kernel is `{0}`.
    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.rank(ctx) == ctx.n()
    }

    /// Exhaustive kernel.
    pub fn kernel(&self, ctx: &FieldCtx) -> Vec<u32> {
        ctx.elements().filter(|&x| self.eval(ctx, x) == 0).collect()
    }

    /// `x -> Tr(x L(x))`.
    pub fn quadratic_form(&self, ctx: &FieldCtx) -> BoolFun {
        BoolFun::from_fn(ctx.n(), |x| ctx.trace(ctx.mul(x, self.eval(ctx, x))) == 1)
    }
}

/// Rank over GF(2) of a set of bit vectors.
pub fn gf2_rank(vectors: &[u32]) -> u32 {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut r = v;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadformCheck {
    pub bent_by_spectrum: bool,
    pub invertible_l_plus_adjoint: bool,
}

impl QuadformCheck {
    pub fn agrees(&self) -> bool {
        self.bent_by_spectrum == self.invertible_l_plus_adjoint
    }
}

/// Decides bentness of `Tr(x L(x))` twice: by its Walsh spectrum, and by
/// invertibility of `L + L*`. The two answers must coincide.
pub fn quadform_bent_check(ctx: &FieldCtx, l: &LinPoly) -> QuadformCheck {
    QuadformCheck {
        bent_by_spectrum: l.quadratic_form(ctx).is_bent(),
        invertible_l_plus_adjoint: l.add(&l.adjoint(ctx)).is_invertible(ctx),
    }
}
