//! Crawl-gait foot trajectories.
//!
//! Eight hand-tuned parameters define five control points per leg. The swing
//! part of the cycle follows a closed Hermite loop through those points; the
//! stance part is the straight ground chord between the first two, traversed
//! at constant speed so the body advances uniformly.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{self, FootPoint, Leg, MorphologyConfig};
use crate::registry::{Named, Registry};
use crate::spline::{CatmullRom, LoopSpline, TangentScheme};

/// Phase offset added to the fore-aft wag, as a fraction of the half period.
pub const WAG_Y_PHASE_OFFSET: f64 = 0.43;

/// Sharpness of the `tanh(k sin(..))` wag profile.
const WAG_SHAPE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaitParams {
    /// Stance chord length, mm.
    pub step_length: f64,
    /// Swing apex above ground, mm.
    pub step_height: f64,
    /// Forward overshoot of the touchdown approach point, mm.
    pub smoothing: f64,
    /// Gait frequency, Hz.
    pub frequency: f64,
    /// Fraction of the period each foot spends in swing.
    pub lift_duration: f64,
    /// Wag phase offset, fraction of the period.
    pub wag_phase: f64,
    /// Peak-to-peak lateral wag, mm.
    pub wag_amplitude_x: f64,
    /// Peak-to-peak fore-aft wag, mm.
    pub wag_amplitude_y: f64,
}

impl GaitParams {
    pub const BASE: Self = Self {
        step_length: 185.0,
        step_height: 75.0,
        smoothing: 50.0,
        frequency: 0.275,
        lift_duration: 0.20,
        wag_phase: 0.0,
        wag_amplitude_x: 15.0,
        wag_amplitude_y: 10.0,
    };

    pub const EXTENDED: Self = Self {
        step_length: 215.0,
        frequency: 0.35,
        ..Self::BASE
    };

    pub fn period(&self) -> f64 {
        1.0 / self.frequency
    }

    pub fn stance_fraction(&self) -> f64 {
        1.0 - self.lift_duration
    }

    /// Stance chord length over stance time, in mm/s.
    pub fn ideal_speed(&self) -> f64 {
        self.step_length / (self.period() * self.stance_fraction())
    }

    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("step_length", self.step_length),
            ("step_height", self.step_height),
            ("smoothing", self.smoothing),
            ("wag_amplitude_x", self.wag_amplitude_x),
            ("wag_amplitude_y", self.wag_amplitude_y),
        ];
        for (name, v) in lengths {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidGait(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::InvalidGait(format!(
                "frequency must be > 0, got {}",
                self.frequency
            )));
        }
        if !(self.lift_duration > 0.0 && self.lift_duration < 0.5) {
            return Err(Error::InvalidGait(format!(
                "lift_duration must be in (0, 0.5), got {}",
                self.lift_duration
            )));
        }
        if !self.wag_phase.is_finite() {
            return Err(Error::InvalidGait("wag_phase must be finite".into()));
        }
        Ok(())
    }

    /// Non-fatal problems with this parameter set under `schedule`.
    pub fn warnings(&self, schedule: &LegSchedule) -> Vec<String> {
        let mut out = Vec::new();
        let overlap = schedule.max_simultaneous_swings(self.lift_duration, 1000);
        if overlap > 1 {
            out.push(format!(
                "lift_duration {} overlaps swings: up to {overlap} legs lifted at once",
                self.lift_duration
            ));
        }
        out
    }
}

/// The five control points, in loop order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoints(pub [FootPoint; 5]);

impl ControlPoints {
    pub fn as_slice(&self) -> &[FootPoint] {
        &self.0
    }

    /// Forward coordinates negated, for walking in reverse.
    pub fn mirrored(&self) -> Self {
        Self(self.0.map(|p| FootPoint::new(p.x, -p.y, p.z)))
    }
}

pub fn derive_control_points(params: &GaitParams, morph: &MorphologyConfig) -> ControlPoints {
    control_points_at(params, kinematics::ground_height(morph))
}

/// Control points for an explicit ground height.
pub fn control_points_at(params: &GaitParams, ground: f64) -> ControlPoints {
    let half = params.step_length / 2.0;
    let lift = params.step_height;
    ControlPoints([
        FootPoint::new(0.0, half, ground),
        FootPoint::new(0.0, -half, ground),
        FootPoint::new(0.0, -half, ground + lift / 1.5),
        FootPoint::new(0.0, 0.0, ground + lift),
        FootPoint::new(0.0, half + params.smoothing, ground + lift / 4.0),
    ])
}

pub fn build_loop_spline(points: &ControlPoints) -> Result<LoopSpline> {
    LoopSpline::catmull_rom(points.as_slice())
}

/// Maps progress through the swing (`0..1`) to a position on the four swing
/// segments `p2 -> p3 -> p4 -> p5 -> p1`.
pub trait SwingTiming: Named + Send + Sync {
    /// Returns `(segment, local fraction)`. Segment indices follow the spline:
    /// 1 is `p2 -> p3`, 4 is `p5 -> p1`.
    fn locate(&self, spline: &LoopSpline, progress: f64) -> (usize, f64);
}

const SWING_SEGMENTS: [usize; 4] = [1, 2, 3, 4];

/// Equal wall-clock time on each swing segment.
pub struct EqualTime;

impl Named for EqualTime {
    fn name(&self) -> &'static str {
        "equal-time"
    }
}

impl SwingTiming for EqualTime {
    fn locate(&self, _spline: &LoopSpline, progress: f64) -> (usize, f64) {
        let scaled = progress.clamp(0.0, 1.0) * SWING_SEGMENTS.len() as f64;
        let idx = (scaled.floor() as usize).min(SWING_SEGMENTS.len() - 1);
        (SWING_SEGMENTS[idx], scaled - idx as f64)
    }
}

/// Time on each swing segment proportional to its arc length.
pub struct ArcLength;

impl Named for ArcLength {
    fn name(&self) -> &'static str {
        "arc-length"
    }
}

impl SwingTiming for ArcLength {
    fn locate(&self, spline: &LoopSpline, progress: f64) -> (usize, f64) {
        let lengths = SWING_SEGMENTS.map(|s| spline.segment_length(s));
        let total: f64 = lengths.iter().sum();
        if total <= 0.0 {
            return EqualTime.locate(spline, progress);
        }
        let mut remaining = progress.clamp(0.0, 1.0) * total;
        for (i, len) in lengths.iter().enumerate() {
            if remaining < *len || i == lengths.len() - 1 {
                let s = if *len > 0.0 { remaining / len } else { 0.0 };
                return (SWING_SEGMENTS[i], s.min(1.0));
            }
            remaining -= len;
        }
        unreachable!()
    }
}

pub fn swing_timings() -> Registry<dyn SwingTiming> {
    let mut reg: Registry<dyn SwingTiming> = Registry::new("swing timing");
    reg.register(Arc::new(EqualTime)).register(Arc::new(ArcLength));
    reg
}

/// Body offset from the balancing wag, mm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WagOffset {
    pub wx: f64,
    pub wy: f64,
}

pub fn wag_offset(t: f64, params: &GaitParams) -> WagOffset {
    let period = params.period();
    let half = period / 2.0;
    let wx = params.wag_amplitude_x / 2.0
        * (WAG_SHAPE * (2.0 * PI * (t + params.wag_phase * period) / period).sin()).tanh();
    let wy = params.wag_amplitude_y / 2.0
        * (WAG_SHAPE * (2.0 * PI * (t + (params.wag_phase + WAG_Y_PHASE_OFFSET) * half) / half).sin())
            .tanh();
    WagOffset { wx, wy }
}

/// Per-leg phase offsets as fractions of the period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegSchedule {
    pub front_left: f64,
    pub front_right: f64,
    pub rear_left: f64,
    pub rear_right: f64,
}

impl Default for LegSchedule {
    /// Creep order: front-left, rear-right, front-right, rear-left.
    fn default() -> Self {
        Self {
            front_left: 0.0,
            rear_right: 0.25,
            front_right: 0.5,
            rear_left: 0.75,
        }
    }
}

impl LegSchedule {
    pub fn offset(&self, leg: Leg) -> f64 {
        match leg {
            Leg::FrontLeft => self.front_left,
            Leg::FrontRight => self.front_right,
            Leg::RearLeft => self.rear_left,
            Leg::RearRight => self.rear_right,
        }
    }

    pub fn offsets(&self) -> [f64; 4] {
        Leg::ALL.map(|leg| self.offset(leg))
    }

    pub fn distinct(&self) -> bool {
        let o = self.offsets();
        (0..4).all(|i| (i + 1..4).all(|j| (o[i] - o[j]).rem_euclid(1.0) != 0.0))
    }

    /// Largest number of legs simultaneously in swing over `samples` evenly
    /// spaced phases.
    pub fn max_simultaneous_swings(&self, lift_duration: f64, samples: usize) -> usize {
        (0..samples)
            .map(|k| {
                let t = (k as f64 + 0.5) / samples as f64;
                self.offsets()
                    .iter()
                    .filter(|&&o| phase_in_swing((t + o).rem_euclid(1.0), lift_duration))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

pub fn leg_schedule() -> LegSchedule {
    LegSchedule::default()
}

pub fn phase_in_swing(phase: f64, lift_duration: f64) -> bool {
    phase >= 1.0 - lift_duration
}

/// Walking direction; reverse replays the forward targets backward in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Forward,
    Reverse,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }
}

/// Gait targets for one parameter set on one morphology.
#[derive(Clone)]
pub struct GaitTrajectory {
    params: GaitParams,
    morph: MorphologyConfig,
    ground: f64,
    points: ControlPoints,
    spline: Option<LoopSpline>,
    timing: Arc<dyn SwingTiming>,
    schedule: LegSchedule,
}

impl std::fmt::Debug for GaitTrajectory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaitTrajectory")
            .field("params", &self.params)
            .field("ground", &self.ground)
            .field("timing", &self.timing.name())
            .finish()
    }
}

/// Build options for [`GaitTrajectory`].
#[derive(Clone)]
pub struct TrajectoryOptions {
    pub ground_override: Option<f64>,
    pub tangents: Arc<dyn TangentScheme>,
    pub timing: Arc<dyn SwingTiming>,
    pub schedule: LegSchedule,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            ground_override: None,
            tangents: Arc::new(CatmullRom),
            timing: Arc::new(EqualTime),
            schedule: LegSchedule::default(),
        }
    }
}

impl GaitTrajectory {
    pub fn new(params: GaitParams, morph: &MorphologyConfig) -> Result<Self> {
        Self::with_options(params, morph, TrajectoryOptions::default())
    }

    /// Builds the trajectory and checks that every control point is inside
    /// the leg workspace.
    pub fn with_options(
        params: GaitParams,
        morph: &MorphologyConfig,
        options: TrajectoryOptions,
    ) -> Result<Self> {
        params.validate()?;
        morph.validate()?;
        let ground = options
            .ground_override
            .unwrap_or_else(|| kinematics::ground_height(morph));
        let points = control_points_at(&params, ground);
        for p in points.as_slice() {
            let leg = p.gait_to_leg();
            kinematics::inverse_kinematics(&leg, morph)?;
        }
        let spline = match LoopSpline::build(points.as_slice(), options.tangents.as_ref()) {
            Ok(s) => Some(s),
            Err(Error::DegenerateSpline) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            params,
            morph: *morph,
            ground,
            points,
            spline,
            timing: options.timing,
            schedule: options.schedule,
        })
    }

    pub fn params(&self) -> &GaitParams {
        &self.params
    }

    pub fn morphology(&self) -> &MorphologyConfig {
        &self.morph
    }

    pub fn ground_height(&self) -> f64 {
        self.ground
    }

    pub fn control_points(&self) -> &ControlPoints {
        &self.points
    }

    pub fn spline(&self) -> Option<&LoopSpline> {
        self.spline.as_ref()
    }

    pub fn schedule(&self) -> &LegSchedule {
        &self.schedule
    }

    pub fn timing_name(&self) -> &'static str {
        self.timing.name()
    }

    /// Gait phase of a leg with offset `leg_phase` at time `t`.
    pub fn phase(&self, t: f64, leg_phase: f64) -> f64 {
        (t / self.params.period() + leg_phase).rem_euclid(1.0)
    }

    /// Foot position at gait phase `phase` in `[0, 1)`, gait frame, forward walking.
    pub fn foot_at_phase(&self, phase: f64) -> FootPoint {
        let [p1, p2, ..] = self.points.0;
        let stance = self.params.stance_fraction();
        if phase < stance {
            let frac = phase / stance;
            return FootPoint::new(0.0, p1.y + (p2.y - p1.y) * frac, self.ground);
        }
        match &self.spline {
            Some(spline) => {
                let progress = (phase - stance) / self.params.lift_duration;
                let (seg, s) = self.timing.locate(spline, progress);
                spline.eval_segment(seg, s)
            }
            None => p1,
        }
    }

    pub fn foot_target(&self, t: f64, leg_phase: f64) -> FootPoint {
        self.foot_at_phase(self.phase(t, leg_phase))
    }

    pub fn in_swing(&self, t: f64, leg: Leg) -> bool {
        phase_in_swing(
            self.phase(t, self.schedule.offset(leg)),
            self.params.lift_duration,
        )
    }

    /// Per-leg targets in each leg's gait frame (outward-positive lateral),
    /// including the wag shift.
    pub fn body_targets(&self, t: f64, direction: Direction) -> [FootPoint; 4] {
        let t = direction.sign() * t;
        let wag = wag_offset(t, &self.params);
        Leg::ALL.map(|leg| {
            let foot = self.foot_target(t, self.schedule.offset(leg));
            FootPoint::new(foot.x + wag.wx * leg.lateral_sign(), foot.y + wag.wy, foot.z)
        })
    }

    /// Ideal body speed, mm/s.
    pub fn ideal_speed(&self) -> f64 {
        self.params.ideal_speed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn base_short() -> GaitTrajectory {
        GaitTrajectory::new(GaitParams::BASE, &MorphologyConfig::SHORT).unwrap()
    }

    #[test]
    fn base_control_points_on_short() {
        let cp = derive_control_points(&GaitParams::BASE, &MorphologyConfig::SHORT).0;
        let expected = [
            (0.0, 92.5, -782.0),
            (0.0, -92.5, -782.0),
            (0.0, -92.5, -732.0),
            (0.0, 0.0, -707.0),
            (0.0, 142.5, -763.25),
        ];
        for (p, (x, y, z)) in cp.iter().zip(expected) {
            assert!(p.distance(&FootPoint::new(x, y, z)) < 1e-9, "{p}");
        }
    }

    #[test]
    fn extended_control_points_on_tall() {
        let cp = derive_control_points(&GaitParams::EXTENDED, &MorphologyConfig::TALL).0;
        assert!(cp[0].distance(&FootPoint::new(0.0, 107.5, -858.8)) < 1e-9);
        assert!(cp[3].distance(&FootPoint::new(0.0, 0.0, -783.8)) < 1e-9);
    }

    #[test]
    fn zero_parameters_collapse_onto_ground() {
        let params = GaitParams {
            step_length: 0.0,
            step_height: 0.0,
            smoothing: 0.0,
            ..GaitParams::BASE
        };
        let cp = derive_control_points(&params, &MorphologyConfig::SHORT).0;
        for p in cp {
            assert_eq!(p, FootPoint::new(0.0, 0.0, -782.0));
        }
        assert!(matches!(
            build_loop_spline(&ControlPoints(cp)),
            Err(Error::DegenerateSpline)
        ));
        let traj = GaitTrajectory::new(params, &MorphologyConfig::SHORT).unwrap();
        assert_eq!(traj.foot_at_phase(0.9), FootPoint::new(0.0, 0.0, -782.0));
        assert_eq!(traj.ideal_speed(), 0.0);
    }

    #[test]
    fn stance_endpoints_and_midpoint() {
        let traj = base_short();
        let cp = traj.control_points().0;
        assert_eq!(traj.foot_at_phase(0.0), cp[0]);
        let mid = traj.foot_at_phase(0.4);
        assert!(mid.distance(&FootPoint::new(0.0, 0.0, -782.0)) < 1e-9);
        let end = traj.foot_at_phase(0.8 - 1e-12);
        assert!(end.distance(&cp[1]) < 1e-6);
    }

    #[test]
    fn swing_midpoint_is_apex_under_equal_time() {
        let traj = base_short();
        let apex = traj.foot_at_phase(0.8 + 0.1);
        assert!(apex.distance(&traj.control_points().0[3]) < 1e-9);
    }

    #[test]
    fn wag_reference_values() {
        let w = wag_offset(0.0, &GaitParams::BASE);
        assert_eq!(w.wx, 0.0);
        let expected_wy = 5.0 * (3.0 * (2.0 * PI * 0.43).sin()).tanh();
        assert!((w.wy - expected_wy).abs() < 1e-12);
        assert!((w.wy - 4.28).abs() < 0.01);
        let quarter = GaitParams::BASE.period() / 4.0;
        let w = wag_offset(quarter, &GaitParams::BASE);
        assert!((w.wx - 7.5 * 3f64.tanh()).abs() < 1e-12);
        assert!((w.wx - 7.46).abs() < 0.01);
    }

    #[test]
    fn default_schedule_has_single_swing_at_020() {
        let sched = leg_schedule();
        assert!(sched.distinct());
        let mut offsets = sched.offsets().to_vec();
        offsets.sort_by(f64::total_cmp);
        assert_eq!(offsets, vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(sched.max_simultaneous_swings(0.20, 10_000), 1);
        let params = GaitParams::BASE;
        assert!(params.warnings(&sched).is_empty());
    }

    #[test]
    fn lift_duration_030_warns() {
        let params = GaitParams {
            lift_duration: 0.30,
            ..GaitParams::BASE
        };
        let warnings = params.warnings(&leg_schedule());
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("overlaps"));
    }

    #[test]
    fn ideal_speed_values() {
        let base = GaitParams::BASE.ideal_speed();
        assert!((base - 185.0 * 0.275 / 0.8).abs() < 1e-9);
        assert!((base * 60.0 / 1000.0 - 3.82).abs() < 0.01);
        let ext = GaitParams::EXTENDED.ideal_speed();
        assert!((ext - 215.0 * 0.35 / 0.8).abs() < 1e-9);
        assert!((ext * 60.0 / 1000.0 - 5.64).abs() < 0.01);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = GaitParams::BASE;
        p.frequency = 0.0;
        assert!(p.validate().is_err());
        p = GaitParams::BASE;
        p.lift_duration = 0.5;
        assert!(p.validate().is_err());
        p = GaitParams::BASE;
        p.step_height = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn unreachable_ground_override_rejected() {
        let options = TrajectoryOptions {
            ground_override: Some(-900.0),
            ..Default::default()
        };
        let err = GaitTrajectory::with_options(GaitParams::BASE, &MorphologyConfig::SHORT, options)
            .unwrap_err();
        assert!(matches!(err, Error::Unreachable { .. }));
    }

    #[test]
    fn reverse_replays_forward_backward_in_time() {
        let traj = base_short();
        let fwd = traj.body_targets(-1.3, Direction::Forward);
        let rev = traj.body_targets(1.3, Direction::Reverse);
        assert_eq!(fwd, rev);
        let a = traj.body_targets(1.0, Direction::Reverse)[0];
        let b = traj.body_targets(1.1, Direction::Reverse)[0];
        assert!(b.y > a.y, "stance foot moves forward when reversing");
    }

    fn scaled(factor: f64) -> GaitTrajectory {
        let params = GaitParams {
            step_length: GaitParams::BASE.step_length * factor,
            ..GaitParams::BASE
        };
        GaitTrajectory::with_options(params, &MorphologyConfig::SHORT, TrajectoryOptions::default())
            .unwrap()
    }

    #[test]
    fn doubling_step_length_doubles_speed_and_stance_points() {
        let one = scaled(1.0);
        let two = scaled(2.0);
        assert!((two.ideal_speed() - 2.0 * one.ideal_speed()).abs() < 1e-12);
        for i in 0..2 {
            assert!((two.control_points().0[i].y - 2.0 * one.control_points().0[i].y).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_extent_is_just_beyond_touchdown_approach() {
        for (params, morph) in [
            (GaitParams::BASE, MorphologyConfig::SHORT),
            (GaitParams::EXTENDED, MorphologyConfig::TALL),
        ] {
            let traj = GaitTrajectory::new(params, &morph).unwrap();
            let p5 = traj.control_points().0[4].y;
            let max = (0..20_000)
                .map(|k| traj.foot_at_phase(k as f64 / 20_000.0).y)
                .fold(f64::MIN, f64::max);
            assert!(max >= p5 && max <= 1.05 * p5, "{max} vs {p5}");
        }
    }

    #[test]
    fn lateral_wag_crosses_zero_half_as_often_as_fore_aft() {
        let params = GaitParams::BASE;
        let n = 10_000;
        let period = params.period();
        let crossings = |f: &dyn Fn(f64) -> f64| {
            (0..n)
                .filter(|&k| {
                    let a = f(period * (k as f64 + 0.25) / n as f64);
                    let b = f(period * (k as f64 + 1.25) / n as f64);
                    a.signum() != b.signum()
                })
                .count()
        };
        let x = crossings(&|t| wag_offset(t, &params).wx);
        let y = crossings(&|t| wag_offset(t, &params).wy);
        assert_eq!(x, 2);
        assert_eq!(y, 2 * x);
    }

    #[test]
    fn swing_of_020_never_overlaps() {
        let mut params = GaitParams::BASE;
        params.lift_duration = 0.2;
        assert!(params.warnings(&leg_schedule()).is_empty());
        assert_eq!(leg_schedule().max_simultaneous_swings(0.2, 10_000), 1);
    }

    proptest! {
        #[test]
        fn targets_are_periodic(t in -50.0..50.0f64) {
            let traj = base_short();
            let period = traj.params().period();
            let a = traj.body_targets(t, Direction::Forward);
            let b = traj.body_targets(t + period, Direction::Forward);
            for (p, q) in a.iter().zip(b.iter()) {
                prop_assert!(p.distance(q) < 1e-6);
            }
        }

        #[test]
        fn stance_is_flat_and_uniform(phase in 0.0..0.79f64, dphase in 0.0001..0.01f64) {
            let traj = base_short();
            let stance = traj.params().stance_fraction();
            let phase2 = (phase + dphase).min(stance - 1e-9);
            let a = traj.foot_at_phase(phase);
            let b = traj.foot_at_phase(phase2);
            prop_assert_eq!(a.x, 0.0);
            prop_assert_eq!(a.z, traj.ground_height());
            let dt = (phase2 - phase) * traj.params().period();
            let speed = (a.y - b.y) / dt;
            prop_assert!((speed - traj.ideal_speed()).abs() < 1e-6 * traj.ideal_speed());
        }

        #[test]
        fn wag_stays_within_half_amplitude(t in -100.0..100.0f64) {
            let params = GaitParams::BASE;
            let w = wag_offset(t, &params);
            prop_assert!(w.wx.abs() <= params.wag_amplitude_x / 2.0);
            prop_assert!(w.wy.abs() <= params.wag_amplitude_y / 2.0);
        }
    }
}
