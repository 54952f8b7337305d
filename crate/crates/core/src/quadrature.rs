//! Adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const MAX_SUBDIVISIONS: usize = 2000;
/// Error floor relative to `int |f|`; below it bisection only chases rounding.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

/// `(kronrod, |kronrod - gauss|, kronrod of |f|)` on `[a, b]`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut kabs = WGK[7] * fc.abs();
    for j in 0..7 {
        let x = h * XGK[j];
        let (l, r) = (f(c - x), f(c + x));
        let s = l + r;
        k += WGK[j] * s;
        kabs += WGK[j] * (l.abs() + r.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs(), kabs * h.abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    absval: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Integral of `f` over `[a, b]`, bisecting the worst piece until the
/// summed error estimate is below `max(abs_tol, rel_tol |I|)`, or below the
/// rounding floor `50 eps int |f|` (which matters for integrals that cancel).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let (v, e, va) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, err: e, absval: va });
    let (mut total, mut err, mut absval) = (v, e, va);
    let done = |total: f64, err: f64, absval: f64| {
        err <= abs_tol.max(rel_tol * total.abs()).max(ROUNDOFF * absval)
    };
    for _ in 0..MAX_SUBDIVISIONS {
        if !total.is_finite() {
            return Err(Error::QuadratureFailure(err));
        }
        if done(total, err, absval) {
            return Ok(total);
        }
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        let (v1, e1, a1) = gk15(&f, worst.a, m);
        let (v2, e2, a2) = gk15(&f, m, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        absval += a1 + a2 - worst.absval;
        heap.push(Piece { a: worst.a, b: m, value: v1, err: e1, absval: a1 });
        heap.push(Piece { a: m, b: worst.b, value: v2, err: e2, absval: a2 });
    }
    // Re-sum to shed accumulated rounding in the running totals.
    let err: f64 = heap.iter().map(|p| p.err).sum();
    let total: f64 = heap.iter().map(|p| p.value).sum();
    let absval: f64 = heap.iter().map(|p| p.absval).sum();
    if done(total, err, absval) {
        Ok(total)
    } else {
        Err(Error::QuadratureFailure(err))
    }
}
