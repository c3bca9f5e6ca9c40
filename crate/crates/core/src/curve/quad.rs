//! Adaptive Gauss–Kronrod quadrature for complex integrands and Legendre
//! panels with a spectral cumulative-integration matrix.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

/// Kronrod abscissae of the 21-point rule on `[-1, 1]` (non-negative half, descending).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

/// Weights of the embedded 10-point Gauss rule, for `XGK[1], XGK[3], …, XGK[9]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod estimate on `[a, b]` and `|K21 − G10|`.
fn qk21(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Interval {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive bisection on `[a, b]`; `None` if `max_intervals` is exhausted.
pub fn adaptive_gk21(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Option<QuadResult> {
    let (value, error) = qk21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value, error });
    let (mut total, mut total_err) = (value, error);
    while total_err > abs_tol {
        if heap.len() >= max_intervals {
            return None;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = qk21(&mut f, worst.a, mid);
        let (v2, e2) = qk21(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift of the running update.
    let value = heap.iter().map(|i| i.value).sum();
    let error = heap.iter().map(|i| i.error).sum();
    Some(QuadResult {
        value,
        error,
        intervals: heap.len(),
    })
}

/// Gauss–Legendre nodes on `[-1, 1]` with the matrix `S[i][j] = ∫_{-1}^{x_i} ℓ_j`.
pub struct LegendrePanel {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub cumulative: Vec<Vec<f64>>,
    /// `P_k(x_j)` for coefficient-decay tests.
    legendre_at_nodes: Vec<Vec<f64>>,
}

pub const PANEL_ORDER: usize = 24;

fn legendre_values(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0, x];
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
        p.push(next);
    }
    p.truncate(n + 1);
    p
}

impl LegendrePanel {
    pub fn new(n: usize) -> Self {
        let rule = GaussLegendre::new(n.try_into().expect("panel order is positive"));
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let legendre_at_nodes: Vec<Vec<f64>> =
            nodes.iter().map(|&x| legendre_values(n, x)).collect();
        // ∫_{-1}^{x} P_k = (P_{k+1}(x) − P_{k−1}(x)) / (2k + 1), and x + 1 for k = 0.
        let cumulative = nodes
            .iter()
            .map(|&xi| {
                let p = legendre_values(n + 1, xi);
                let int_p: Vec<f64> = (0..n)
                    .map(|k| {
                        if k == 0 {
                            xi + 1.0
                        } else {
                            (p[k + 1] - p[k - 1]) / (2 * k + 1) as f64
                        }
                    })
                    .collect();
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                0.5 * (2 * k + 1) as f64
                                    * weights[j]
                                    * legendre_at_nodes[j][k]
                                    * int_p[k]
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        LegendrePanel {
            nodes,
            weights,
            cumulative,
            legendre_at_nodes,
        }
    }

    pub fn shared() -> &'static LegendrePanel {
        static PANEL: OnceLock<LegendrePanel> = OnceLock::new();
        PANEL.get_or_init(|| LegendrePanel::new(PANEL_ORDER))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Size of the top Legendre coefficients relative to the largest one.
    pub fn tail_ratio(&self, values: &[Complex64]) -> f64 {
        let n = self.order();
        let coeffs: Vec<f64> = (0..n)
            .map(|k| {
                let c: Complex64 = (0..n)
                    .map(|j| values[j] * (self.weights[j] * self.legendre_at_nodes[j][k]))
                    .sum();
                c.norm() * (2 * k + 1) as f64 * 0.5
            })
            .collect();
        let max = coeffs.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        coeffs[n - 4..].iter().cloned().fold(0.0, f64::max) / max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk21_integrates_complex_exponential() {
        let r = adaptive_gk21(
            |s| Complex64::new(0.0, s).exp(),
            0.0,
            std::f64::consts::TAU,
            1e-13,
            100,
        )
        .unwrap();
        assert!(r.value.norm() < 1e-13);
        let r = adaptive_gk21(
            |s| Complex64::new(1.0 / (s + 1e-3), 0.0),
            0.0,
            1.0,
            1e-12,
            500,
        )
        .unwrap();
        assert!((r.value.re - (1001.0f64).ln()).abs() < 1e-11);
        assert!(r.intervals > 1);
    }

    #[test]
    fn cumulative_matrix_is_exact_on_polynomials() {
        let p = LegendrePanel::new(12);
        let vals: Vec<Complex64> = p
            .nodes
            .iter()
            .map(|&x| Complex64::new(3.0 * x * x, 0.0))
            .collect();
        for (i, &x) in p.nodes.iter().enumerate() {
            let got: Complex64 = (0..12).map(|j| vals[j] * p.cumulative[i][j]).sum();
            assert!((got.re - (x.powi(3) + 1.0)).abs() < 1e-14);
        }
        assert!((p.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(p.tail_ratio(&vals) < 1e-14);
    }
}
