//! Adaptive Dormand–Prince 5(4) integration of a scalar complex ODE on `[0, 1]`.

use super::geometry::C64;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (the last row of `A`, first-same-as-last).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OdeFailure {
    TooManySteps { s: f64 },
    StepUnderflow { s: f64 },
    NonFinite { s: f64 },
}

/// Integrates `y′ = f(s, y)` from `s = 0` to `s = 1`.
pub fn integrate_unit(
    mut f: impl FnMut(f64, C64) -> C64,
    y0: C64,
    opts: &OdeOptions,
) -> Result<(C64, OdeStats), OdeFailure> {
    let mut stats = OdeStats::default();
    let (mut s, mut y) = (0.0f64, y0);
    let mut k = [C64::new(0.0, 0.0); 7];
    k[0] = f(s, y);
    stats.evaluations += 1;
    let mut h = opts.h_max.min(1e-2);
    while s < 1.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(OdeFailure::TooManySteps { s });
        }
        if h < 1e-14 {
            return Err(OdeFailure::StepUnderflow { s });
        }
        let h_step = h.min(1.0 - s);
        for i in 1..7 {
            let yi = y + (0..i).map(|j| k[j] * A[i][j]).sum::<C64>() * h_step;
            k[i] = f(s + C[i] * h_step, yi);
        }
        stats.evaluations += 6;
        let y_new = y + (0..7).map(|j| k[j] * B5[j]).sum::<C64>() * h_step;
        let err_vec = (0..7).map(|j| k[j] * (B5[j] - B4[j])).sum::<C64>() * h_step;
        if !y_new.re.is_finite() || !y_new.im.is_finite() {
            return Err(OdeFailure::NonFinite { s });
        }
        let scale = opts.atol + opts.rtol * y.norm().max(y_new.norm());
        let err = err_vec.norm() / scale;
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            s = if h_step == 1.0 - s { 1.0 } else { s + h_step };
            y = y_new;
            k[0] = k[6];
            stats.accepted += 1;
            h = (h_step * factor).min(opts.h_max);
        } else {
            stats.rejected += 1;
            h = h_step * factor.min(1.0);
        }
    }
    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: OdeOptions = OdeOptions {
        rtol: 1e-13,
        atol: 1e-16,
        h_max: 0.1,
        max_steps: 100_000,
    };

    #[test]
    fn integrates_quadrature_problems() {
        let (y, _) = integrate_unit(
            |s, _| C64::new((3.0 * s).sin(), s),
            C64::new(0.0, 0.0),
            &OPTS,
        )
        .unwrap();
        assert!((y.re - (1.0 - 3f64.cos()) / 3.0).abs() < 1e-13);
        assert!((y.im - 0.5).abs() < 1e-14);
    }

    #[test]
    fn integrates_complex_exponential() {
        let i = C64::new(0.0, 1.0);
        let (y, st) = integrate_unit(|_, y| i * 3.0 * y, C64::new(1.0, 0.0), &OPTS).unwrap();
        assert!((y - (i * 3.0).exp()).norm() < 1e-12);
        assert!(st.accepted < 5000);
    }
}
