//! Gauss–Legendre rules and adaptive Gauss–Kronrod integration.

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the three-term Legendre recurrence,
    /// started from the Tricomi approximation.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "Gauss-Legendre rule needs at least one node".into(),
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b)
            .map(|(x, w)| w * f(x))
            .collect::<NeumaierSum>()
            .value()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn kronrod15(a: f64, b: f64, f: &impl Fn(f64) -> f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 7/15-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the total
/// estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive(a: f64, b: f64, opts: AdaptiveOptions, f: impl Fn(f64) -> f64) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    // (a, b, value, error)
    let mut cells = vec![{
        let (v, e) = kronrod15(a, b, &f);
        (a, b, v, e)
    }];
    loop {
        let value = cells.iter().map(|c| c.2).collect::<NeumaierSum>().value();
        let error = cells.iter().map(|c| c.3).collect::<NeumaierSum>().value();
        if !value.is_finite() {
            return Err(Error::Quadrature(format!(
                "integrand produced a non-finite value on [{a}, {b}]"
            )));
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(Estimate {
                value,
                error,
                intervals: cells.len(),
            });
        }
        if cells.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {error:e} above tolerance after {} intervals",
                cells.len()
            )));
        }
        let worst = cells
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one cell");
        let (lo, hi, _, _) = cells[worst];
        let mid = 0.5 * (lo + hi);
        let (vl, el) = kronrod15(lo, mid, &f);
        let (vr, er) = kronrod15(mid, hi, &f);
        cells[worst] = (lo, mid, vl, el);
        cells.insert(worst + 1, (mid, hi, vr, er));
    }
}
