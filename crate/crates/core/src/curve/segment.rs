//! Graph segments of `{F = t}` over a base path, with nearest-root branch tracking.

use super::geometry::{gradient, nearest_partner, BasePath, Chart, CurvePoint, C64};
use super::quad::LegendrePanel;
use super::CurveError;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

/// Required ratio between the distances to the rejected and the chosen root.
pub const SEPARATION_FACTOR: f64 = 4.0;
const MAX_STEP: f64 = 1.0 / 64.0;
const MIN_STEP: f64 = 1e-10;
/// Panels are split until the top Legendre coefficients of every probe fall below this fraction.
pub const PANEL_TAIL: f64 = 1e-13;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Position and `d/ds` velocity of a segment at parameter `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegPoint {
    pub x: C64,
    pub y: C64,
    pub dx: C64,
    pub dy: C64,
}

#[derive(Debug)]
pub struct Segment {
    id: u64,
    label: String,
    chart: Chart,
    path: BasePath,
    t: C64,
    /// Tracked dependent coordinate at increasing `s`, endpoints included.
    samples: Vec<(f64, C64)>,
    panels: OnceLock<Vec<(f64, f64)>>,
}

impl Segment {
    /// Tracks the dependent coordinate from the root nearest `seed` at `s = 0`.
    pub fn build(
        label: impl Into<String>,
        chart: Chart,
        path: BasePath,
        t: C64,
        seed: C64,
    ) -> Result<Segment, CurveError> {
        let label = label.into();
        let (u0, _) = path.at(0.0);
        let (w0, _) = nearest_partner(u0, t, seed);
        let mut samples = vec![(0.0, w0)];
        let (mut s, mut w, mut h) = (0.0f64, w0, MAX_STEP);
        while s < 1.0 {
            let next = (s + h).min(1.0);
            let (u, _) = path.at(next);
            // Linear predictor from the last two samples.
            let guess = match samples.len() {
                1 => w,
                n => {
                    let (sp, wp) = samples[n - 2];
                    w + (w - wp) * ((next - s) / (s - sp))
                }
            };
            let (cand, ratio) = nearest_partner(u, t, guess);
            let (_, ratio_prev) = nearest_partner(u, t, w);
            if ratio < SEPARATION_FACTOR || ratio_prev < SEPARATION_FACTOR {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(CurveError::BranchTracking {
                        segment: label,
                        s,
                        ratio: ratio.min(ratio_prev),
                    });
                }
                continue;
            }
            samples.push((next, cand));
            s = next;
            w = cand;
            h = (h * 2.0).min(MAX_STEP);
        }
        Ok(Segment {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            label,
            chart,
            path,
            t,
            samples,
            panels: OnceLock::new(),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn path(&self) -> &BasePath {
        &self.path
    }

    pub fn level(&self) -> C64 {
        self.t
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Tracked dependent coordinate at `s`, interpolated from the cache then snapped to a root.
    pub fn dependent_at(&self, s: f64) -> C64 {
        self.dependent_at_level(s, self.t)
    }

    /// Root of `F = level` over the base point at `s`, on the branch of this segment.
    pub fn dependent_at_level(&self, s: f64, level: C64) -> C64 {
        self.dependent_at_level_checked(s, level).0
    }

    /// Like [`Segment::dependent_at_level`] with the root separation ratio.
    pub fn dependent_at_level_checked(&self, s: f64, level: C64) -> (C64, f64) {
        let s = s.clamp(0.0, 1.0);
        let k = self
            .samples
            .partition_point(|&(sk, _)| sk <= s)
            .clamp(1, self.samples.len() - 1);
        let (s0, w0) = self.samples[k - 1];
        let (s1, w1) = self.samples[k];
        let guess = if s1 > s0 {
            w0 + (w1 - w0) * ((s - s0) / (s1 - s0))
        } else {
            w0
        };
        let (u, _) = self.path.at(s);
        nearest_partner(u, level, guess)
    }

    pub fn point(&self, s: f64) -> SegPoint {
        let (u, du) = self.path.at(s);
        let w = self.dependent_at(s);
        let (x, y) = self.chart.to_xy(u, w);
        let (fx, fy) = gradient(x, y);
        match self.chart {
            Chart::OverX => SegPoint {
                x,
                y,
                dx: du,
                dy: -fx / fy * du,
            },
            Chart::OverY => SegPoint {
                x,
                y,
                dx: -fy / fx * du,
                dy: du,
            },
        }
    }

    pub fn curve_point(&self, s: f64) -> CurvePoint {
        let p = self.point(s);
        CurvePoint::new(p.x, p.y, self.t)
    }

    pub fn start(&self) -> CurvePoint {
        self.curve_point(0.0)
    }

    pub fn end(&self) -> CurvePoint {
        self.curve_point(1.0)
    }

    /// Smallest `|x ± 1|`, `|y ± 1|` seen over the tracked samples, indexed like `f₁..f₄`.
    pub fn min_factor_distance(&self) -> [f64; 4] {
        let mut out = [f64::INFINITY; 4];
        for &(s, w) in &self.samples {
            let (u, _) = self.path.at(s);
            let (x, y) = self.chart.to_xy(u, w);
            let f = [x + 1.0, y - 1.0, x - 1.0, y + 1.0];
            for i in 0..4 {
                out[i] = out[i].min(f[i].norm());
            }
        }
        out
    }

    /// Panel partition of `[0, 1]` on which position, velocity and the `ηᵢ` integrands are resolved.
    pub fn panels(&self) -> &[(f64, f64)] {
        self.panels.get_or_init(|| {
            let lp = LegendrePanel::shared();
            let mut done = Vec::new();
            let mut todo = vec![(0.0, 1.0)];
            while let Some((a, b)) = todo.pop() {
                let probes: Vec<SegPoint> = lp
                    .nodes
                    .iter()
                    .map(|&z| self.point(a + (b - a) * 0.5 * (z + 1.0)))
                    .collect();
                let series: [Vec<C64>; 6] = [
                    probes.iter().map(|p| p.dx).collect(),
                    probes.iter().map(|p| p.dy).collect(),
                    probes.iter().map(|p| p.dx / (p.x + 1.0)).collect(),
                    probes.iter().map(|p| p.dy / (p.y - 1.0)).collect(),
                    probes.iter().map(|p| p.dx / (p.x - 1.0)).collect(),
                    probes.iter().map(|p| p.dy / (p.y + 1.0)).collect(),
                ];
                let resolved = series.iter().all(|v| lp.tail_ratio(v) < PANEL_TAIL);
                if resolved || b - a < 1e-6 {
                    done.push((a, b));
                } else {
                    let m = 0.5 * (a + b);
                    todo.push((m, b));
                    todo.push((a, m));
                }
            }
            done.sort_by(|p, q| p.0.total_cmp(&q.0));
            done
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::geometry::{c, residual_bound};

    #[test]
    fn tracks_a_loop_around_a_saddle() {
        let t = c(0.36, 0.0);
        let path = BasePath::circle(c(1.0, 0.0), 0.3, std::f64::consts::PI, 1.0);
        let seg = Segment::build("loop", Chart::OverX, path, t, c(-0.5, 0.0)).unwrap();
        let (a, b) = (seg.start(), seg.end());
        assert!(a.distance(&b) < 1e-12);
        for k in 0..=50 {
            assert!(seg.curve_point(k as f64 / 50.0).residual <= residual_bound(t));
        }
        assert!(!seg.panels().is_empty());
    }

    #[test]
    fn tangent_is_tangent_to_level_set() {
        let t = c(0.25, 0.0);
        let path = BasePath::Line {
            from: c(-0.5, 0.0),
            to: c(0.5, 0.0),
        };
        let seg = Segment::build("top", Chart::OverX, path, t, c(0.8, 0.0)).unwrap();
        let p = seg.point(0.3);
        let (fx, fy) = gradient(p.x, p.y);
        assert!((fx * p.dx + fy * p.dy).norm() < 1e-14);
    }
}
