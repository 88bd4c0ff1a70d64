//! Adaptive Gauss–Kronrod (7/15) on the half line.
//!
//! `[0, ∞)` is mapped to `[0, 1)` by `x = u/(1−u²)`, with
//! `dx/du = (1+u²)/(1−u²)²`. For a convergent spec the integrand decays at
//! least like `x⁻²`, so the transformed integrand stays bounded as `u → 1`.
//! Kronrod nodes are interior, so the endpoint itself is never sampled.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{Signed, ToPrimitive};

use super::OracleError;
use crate::engine::{IntegralSpec, Range};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

pub const MAX_SUBDIVISIONS: usize = 5000;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).abs();
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]` until the summed error estimate is at most
/// `rel_tol·|value|`.
pub fn adaptive_gk15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<(f64, f64), OracleError> {
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    for _ in 0..MAX_SUBDIVISIONS {
        if error <= rel_tol * value.abs() {
            return Ok((value, error));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated cancellation before giving up
    let total: f64 = heap.iter().map(|p| p.error).sum();
    let value: f64 = heap.iter().map(|p| p.value).sum();
    if total <= rel_tol * value.abs() {
        return Ok((value, total));
    }
    Err(OracleError::NoConvergence)
}

/// Numeric value of `spec` with relative error estimate at most `tol`.
pub fn quad_oracle(spec: &IntegralSpec, tol: f64) -> Result<f64, OracleError> {
    if tol.is_nan() || tol < 1e-12 {
        return Err(OracleError::InvalidTolerance(tol));
    }
    if !spec.mass1.is_positive() || !spec.mass2.is_positive() {
        return Err(OracleError::InvalidSpec("masses must be positive".into()));
    }
    if !spec.convergent() {
        return Err(OracleError::DivergentIntegral);
    }
    let m1 = spec.mass1.to_f64().ok_or_else(|| OracleError::InvalidSpec("mass out of range".into()))?;
    let m2 = spec.mass2.to_f64().ok_or_else(|| OracleError::InvalidSpec("mass out of range".into()))?;
    let (j, l, m) = (spec.j as i32, spec.l as i32, spec.m as i32);
    let f = |u: f64| {
        let w = 1.0 - u * u;
        let x = u / w;
        let t = x * x;
        let jac = (1.0 + u * u) / (w * w);
        t.powi(j) * (t + m1).powi(l) * (t + m2).powi(m) * jac
    };
    let (half, _) = adaptive_gk15(f, 0.0, 1.0, tol)?;
    Ok(match spec.range {
        Range::Half => half,
        Range::Full => 2.0 * half,
    })
}
