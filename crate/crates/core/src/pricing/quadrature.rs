//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands.
//!
//! Every component shares one subdivision. The interval with the largest
//! error estimate (maximum over components of `|K15 - G7|`) is bisected until
//! the summed estimate drops below the tolerance.

// Nodes and weights are kept at their published precision.
#![allow(clippy::excessive_precision)]

use thiserror::Error;

use crate::scalar::Real;

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

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, PartialEq, Error)]
#[error("error estimate {error:e} above tolerance {tol:e} after {intervals} subintervals")]
pub struct QuadratureError {
    pub error: f64,
    pub tol: f64,
    pub intervals: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: Vec<T>,
    error: T,
}

fn gauss_kronrod<T, F>(f: &mut F, a: T, b: T, dim: usize, buf: &mut [T]) -> Segment<T>
where
    T: Real,
    F: FnMut(T, &mut [T]),
{
    let half = (b - a) * T::lit(0.5);
    let center = a + half;
    let mut kronrod = vec![T::zero(); dim];
    let mut gauss = vec![T::zero(); dim];

    f(center, buf);
    for c in 0..dim {
        kronrod[c] = T::lit(WGK[7]) * buf[c];
        gauss[c] = T::lit(WG[3]) * buf[c];
    }
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let wk = T::lit(WGK[j]);
        let wg = if j % 2 == 1 {
            T::lit(WG[j / 2])
        } else {
            T::zero()
        };
        for x in [center - dx, center + dx] {
            f(x, buf);
            for c in 0..dim {
                kronrod[c] += wk * buf[c];
                gauss[c] += wg * buf[c];
            }
        }
    }

    let mut error = T::zero();
    for c in 0..dim {
        kronrod[c] *= half;
        gauss[c] *= half;
        error = error.max((kronrod[c] - gauss[c]).abs());
    }
    if !kronrod.iter().all(|v| v.is_finite()) {
        error = T::infinity();
    }
    Segment {
        a,
        b,
        value: kronrod,
        error,
    }
}

/// Integrates `f` over `[a, b]` component-wise.
///
/// `f(x, out)` must fill `out` (length `dim`) with the integrand at `x`. The
/// range starts split into `initial_pieces` equal intervals; at most
/// `max_intervals` are used before giving up with [`QuadratureError`].
pub fn integrate_adaptive<T, F>(
    mut f: F,
    a: T,
    b: T,
    dim: usize,
    tol: T,
    initial_pieces: usize,
    max_intervals: usize,
) -> Result<Vec<T>, QuadratureError>
where
    T: Real,
    F: FnMut(T, &mut [T]),
{
    let pieces = initial_pieces.max(1);
    let mut buf = vec![T::zero(); dim];
    let width = (b - a) / T::from_count(pieces);
    let mut segments: Vec<Segment<T>> = (0..pieces)
        .map(|i| {
            let lo = a + width * T::from_count(i);
            let hi = if i + 1 == pieces { b } else { lo + width };
            gauss_kronrod(&mut f, lo, hi, dim, &mut buf)
        })
        .collect();

    loop {
        let total_error: T = segments.iter().map(|s| s.error).sum();
        if total_error <= tol {
            break;
        }
        if segments.len() >= max_intervals.max(pieces) {
            return Err(QuadratureError {
                error: total_error.as_f64(),
                tol: tol.as_f64(),
                intervals: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, -T::one()), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = seg.a + (seg.b - seg.a) * T::lit(0.5);
        if !(mid > seg.a && mid < seg.b) {
            return Err(QuadratureError {
                error: total_error.as_f64(),
                tol: tol.as_f64(),
                intervals: segments.len() + 1,
            });
        }
        segments.push(gauss_kronrod(&mut f, seg.a, mid, dim, &mut buf));
        segments.push(gauss_kronrod(&mut f, mid, seg.b, dim, &mut buf));
    }

    // Sum in position order so the result does not depend on refinement
    // history beyond the final partition.
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    let mut total = vec![T::zero(); dim];
    for s in &segments {
        for (t, v) in total.iter_mut().zip(&s.value) {
            *t += *v;
        }
    }
    Ok(total)
}
