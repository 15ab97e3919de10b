//! Closed interpolating cubic Hermite splines.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kinematics::FootPoint;
use crate::registry::{Named, Registry};

/// Chooses knot spacing and tangents for a closed Hermite loop.
pub trait TangentScheme: Named + Send + Sync {
    /// Knot parameters `t_0 .. t_n`, where `t_n` closes the loop back to `p_0`.
    fn knots(&self, points: &[FootPoint]) -> Result<Vec<f64>>;

    /// Per-point tangents with respect to the knot parameter.
    fn tangents(&self, points: &[FootPoint], knots: &[f64]) -> Vec<FootPoint> {
        cyclic_finite_difference(points, knots)
    }
}

/// Uniform knots with cyclic Catmull-Rom tangents `(p[i+1] - p[i-1]) / 2`.
pub struct CatmullRom;

impl Named for CatmullRom {
    fn name(&self) -> &'static str {
        "catmull-rom"
    }
}

impl TangentScheme for CatmullRom {
    fn knots(&self, points: &[FootPoint]) -> Result<Vec<f64>> {
        Ok((0..=points.len()).map(|i| i as f64).collect())
    }
}

/// Knots spaced by chord length; tangents are the cyclic central difference
/// over the two neighbouring knot intervals.
pub struct Chordal;

impl Named for Chordal {
    fn name(&self) -> &'static str {
        "chordal"
    }
}

impl TangentScheme for Chordal {
    fn knots(&self, points: &[FootPoint]) -> Result<Vec<f64>> {
        let n = points.len();
        let mut knots = Vec::with_capacity(n + 1);
        knots.push(0.0);
        let mut acc = 0.0;
        for i in 0..n {
            let chord = points[i].distance(&points[(i + 1) % n]);
            if chord <= 0.0 {
                return Err(Error::DegenerateSpline);
            }
            acc += chord;
            knots.push(acc);
        }
        Ok(knots)
    }
}

fn cyclic_finite_difference(points: &[FootPoint], knots: &[f64]) -> Vec<FootPoint> {
    let n = points.len();
    let total = knots[n];
    (0..n)
        .map(|i| {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            let t_prev = if i == 0 { knots[prev] - total } else { knots[prev] };
            let t_next = knots[i + 1];
            (points[next] - points[prev]) * (1.0 / (t_next - t_prev))
        })
        .collect()
}

pub fn tangent_schemes() -> Registry<dyn TangentScheme> {
    let mut reg: Registry<dyn TangentScheme> = Registry::new("tangent scheme");
    reg.register(Arc::new(CatmullRom)).register(Arc::new(Chordal));
    reg
}

/// A closed C1 cubic Hermite loop through its control points, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSpline {
    points: Vec<FootPoint>,
    knots: Vec<f64>,
    tangents: Vec<FootPoint>,
}

impl LoopSpline {
    pub fn build(points: &[FootPoint], scheme: &dyn TangentScheme) -> Result<Self> {
        if points.len() < 2 || points.iter().all(|p| *p == points[0]) {
            return Err(Error::DegenerateSpline);
        }
        let knots = scheme.knots(points)?;
        let tangents = scheme.tangents(points, &knots);
        Ok(Self {
            points: points.to_vec(),
            knots,
            tangents,
        })
    }

    /// Uniform Catmull-Rom loop.
    pub fn catmull_rom(points: &[FootPoint]) -> Result<Self> {
        Self::build(points, &CatmullRom)
    }

    pub fn points(&self) -> &[FootPoint] {
        &self.points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn tangents(&self) -> &[FootPoint] {
        &self.tangents
    }

    pub fn segment_count(&self) -> usize {
        self.points.len()
    }

    /// Parameter length of one full loop.
    pub fn period(&self) -> f64 {
        self.knots[self.points.len()]
    }

    /// Position at knot parameter `u`, wrapped onto the loop.
    pub fn eval(&self, u: f64) -> FootPoint {
        let (seg, s) = self.locate(u);
        self.eval_segment(seg, s)
    }

    /// Derivative with respect to the knot parameter.
    pub fn derivative(&self, u: f64) -> FootPoint {
        let (seg, s) = self.locate(u);
        self.derivative_segment(seg, s)
    }

    /// Position on segment `seg` (from point `seg` to point `seg + 1`) at local
    /// fraction `s` in `[0, 1]`.
    pub fn eval_segment(&self, seg: usize, s: f64) -> FootPoint {
        let (p0, p1, m0, m1) = self.segment_terms(seg);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        p0 * h00 + m0 * h10 + p1 * h01 + m1 * h11
    }

    pub fn derivative_segment(&self, seg: usize, s: f64) -> FootPoint {
        let (p0, p1, m0, m1) = self.segment_terms(seg);
        let width = self.segment_width(seg);
        let s2 = s * s;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        (p0 * d00 + m0 * d10 + p1 * d01 + m1 * d11) * (1.0 / width)
    }

    /// Arc length of one segment by composite Simpson quadrature.
    pub fn segment_length(&self, seg: usize) -> f64 {
        const N: usize = 64;
        let h = 1.0 / N as f64;
        let speed = |s: f64| self.derivative_segment(seg, s).norm() * self.segment_width(seg);
        let mut sum = speed(0.0) + speed(1.0);
        for k in 1..N {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * speed(k as f64 * h);
        }
        sum * h / 3.0
    }

    fn segment_width(&self, seg: usize) -> f64 {
        self.knots[seg + 1] - self.knots[seg]
    }

    fn segment_terms(&self, seg: usize) -> (FootPoint, FootPoint, FootPoint, FootPoint) {
        let n = self.points.len();
        let next = (seg + 1) % n;
        let width = self.segment_width(seg);
        (
            self.points[seg],
            self.points[next],
            self.tangents[seg] * width,
            self.tangents[next] * width,
        )
    }

    fn locate(&self, u: f64) -> (usize, f64) {
        let period = self.period();
        let u = u.rem_euclid(period);
        let n = self.points.len();
        let seg = match self.knots[..n].iter().rposition(|&k| k <= u) {
            Some(i) => i,
            None => 0,
        };
        let s = (u - self.knots[seg]) / self.segment_width(seg);
        (seg, s.clamp(0.0, 1.0))
    }
}
