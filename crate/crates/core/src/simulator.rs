//! Fixed-timestep kinematic walking simulation.
//!
//! Each step reads gait targets, solves inverse kinematics, moves the
//! rate-limited servos, then runs forward kinematics and contact detection.
//! The gait clock is slowed whenever a joint would exceed its speed ceiling,
//! so lost speed shows up as a longer cycle rather than a distorted foot path.
//! The body advance is the traction-scaled mean backward motion of the feet
//! that stayed on the ground, and the shortfall against the commanded body
//! travel is booked as slip.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::actuation::{self, ServoModel, ServoState, SpeedCurve};
use crate::error::{Error, Result};
use crate::gait::{Direction, GaitTrajectory};
use crate::kinematics::{self, BodyGeometry, FootPoint, JointAngles, Leg, MorphologyConfig};
use crate::registry::{Named, Registry};

pub const GRAVITY: f64 = 9.81;

/// Distance each lab leg covers before turning around, m.
pub const LAB_LEG_DISTANCE: f64 = 1.5;
pub const LAB_TIMEOUT: f64 = 120.0;
pub const FIELD_DURATION: f64 = 30.0;

/// Surface the robot walks on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    #[serde(default)]
    pub name: String,
    /// Fraction of stance motion that moves the body, `(0, 1]`.
    pub traction: f64,
    /// Multiplier on the static holding torque (soft or uneven ground > 1).
    #[serde(default = "one")]
    pub terrain_load: f64,
    /// Extra load fraction per m/s of commanded body speed.
    #[serde(default)]
    pub terrain_drag: f64,
    /// Standard deviation of the per-evaluation log-normal speed factor.
    pub speed_noise_sd: f64,
    /// Height band above ground counted as contact, mm.
    pub contact_z_tolerance: f64,
}

fn one() -> f64 {
    1.0
}

impl Environment {
    pub fn lab() -> Self {
        Self {
            name: "lab".into(),
            traction: 1.0,
            terrain_load: 1.0,
            terrain_drag: 0.0,
            speed_noise_sd: 0.015,
            contact_z_tolerance: 0.5,
        }
    }

    pub fn garage() -> Self {
        Self {
            name: "garage".into(),
            traction: 0.56,
            terrain_load: 0.95,
            terrain_drag: 0.0,
            speed_noise_sd: 0.025,
            contact_z_tolerance: 0.5,
        }
    }

    pub fn footpath() -> Self {
        Self {
            name: "footpath".into(),
            traction: 0.45,
            terrain_load: 1.0,
            terrain_drag: 2.0,
            speed_noise_sd: 0.08,
            contact_z_tolerance: 0.5,
        }
    }

    pub fn presets() -> Vec<Self> {
        vec![Self::lab(), Self::garage(), Self::footpath()]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.traction > 0.0 && self.traction <= 1.0) {
            return Err(Error::Config(format!(
                "environment `{}`: traction must be in (0, 1], got {}",
                self.name, self.traction
            )));
        }
        if !(self.speed_noise_sd >= 0.0) || !(self.contact_z_tolerance >= 0.0) {
            return Err(Error::Config(format!(
                "environment `{}`: noise and contact tolerance must be >= 0",
                self.name
            )));
        }
        if !(self.terrain_load >= 0.0) || !(self.terrain_drag >= 0.0) {
            return Err(Error::Config(format!(
                "environment `{}`: terrain_load and terrain_drag must be >= 0",
                self.name
            )));
        }
        Ok(())
    }
}

/// Joint holding torque used to read each servo's speed ceiling.
///
/// The reference is the knee of a stance leg carrying a third of the body
/// weight with the foot under the hip at stance depth. Terrain scales it, and
/// `terrain_drag` adds resistance proportional to the commanded body speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadModel {
    /// Multiplier over the static torque for weight transfer and inertial
    /// loads the kinematic model does not see.
    pub dynamic_factor: f64,
}

impl Default for LoadModel {
    fn default() -> Self {
        Self {
            dynamic_factor: 1.5,
        }
    }
}

impl LoadModel {
    /// Static knee torque in N·m for `force` N at the foot, foot under the hip.
    pub fn static_knee_torque(trajectory: &GaitTrajectory, force: f64) -> Result<f64> {
        let morph = trajectory.morphology();
        let foot = FootPoint::new(0.0, 0.0, trajectory.ground_height()).gait_to_leg();
        let angles = kinematics::inverse_kinematics(&foot, morph)?;
        let lever = morph.tibia_length * (angles.femur + angles.tibia).sin();
        Ok(force * lever.abs() / 1000.0)
    }

    /// Holding torque for one servo, N·m.
    pub fn holding_torque(
        &self,
        trajectory: &GaitTrajectory,
        body: &BodyGeometry,
        env: &Environment,
    ) -> Result<f64> {
        let force = body.mass * GRAVITY / 3.0;
        let speed = trajectory.ideal_speed() / 1000.0;
        let base = Self::static_knee_torque(trajectory, force)?;
        Ok(base * self.dynamic_factor * env.terrain_load * (1.0 + env.terrain_drag * speed))
    }
}

/// Everything held fixed during one evaluation.
#[derive(Clone)]
pub struct SimSetup {
    pub trajectory: GaitTrajectory,
    pub body: BodyGeometry,
    pub servo: ServoModel,
    pub speed_curve: Arc<dyn SpeedCurve>,
    pub load: LoadModel,
    pub env: Environment,
    pub voltage: f64,
    pub dt: f64,
    /// Disable the per-evaluation noise factor.
    pub noise: bool,
    /// Record a per-step trace.
    pub trace: bool,
    /// Independent noise stream for this setup under a shared seed.
    pub noise_stream: u64,
}

impl SimSetup {
    pub fn new(trajectory: GaitTrajectory, env: Environment, voltage: f64) -> Result<Self> {
        let servo = ServoModel::default();
        let speed_curve = actuation::speed_curves().get(&servo.speed_curve)?;
        Ok(Self {
            trajectory,
            body: BodyGeometry::default(),
            dt: servo.step_dt(),
            servo,
            speed_curve,
            load: LoadModel::default(),
            env,
            voltage,
            noise: true,
            trace: false,
            noise_stream: 0,
        })
    }

    pub fn morphology(&self) -> &MorphologyConfig {
        self.trajectory.morphology()
    }

    /// Speed ceiling shared by every servo for this setup, RPM.
    pub fn servo_ceiling(&self) -> Result<f64> {
        let torque = self.load.holding_torque(&self.trajectory, &self.body, &self.env)?;
        Ok(self.speed_curve.ceiling(&self.servo, self.voltage, torque))
    }

    /// Ideal body speed scaled by traction, mm/s.
    pub fn traction_speed(&self) -> f64 {
        self.trajectory.ideal_speed() * self.env.traction
    }
}

/// Per-step record for trace export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub body_y: f64,
    pub contact: [bool; 4],
    pub saturated: [[bool; 3]; 4],
    pub slip: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    /// Body position along the heading, mm (world frame).
    pub body_y: f64,
    /// Heading, radians. Walking is straight-line so this stays 0.
    pub heading: f64,
    pub servos: [[ServoState; 3]; 4],
    /// Prismatic lengths per leg, femur then tibia.
    pub actuator_lengths: [[f64; 2]; 4],
    pub contact: [bool; 4],
    /// Actual feet in each leg's gait frame.
    pub feet: [FootPoint; 4],
    /// Gait clock, s.
    pub t: f64,
    pub direction: Direction,
    /// Accumulated commanded and achieved stance motion, mm.
    pub commanded_travel: f64,
    pub achieved_travel: f64,
    pub slip: f64,
}

impl RobotState {
    /// Standing in the gait's start pose with servos on target.
    pub fn standing(setup: &SimSetup, direction: Direction) -> Result<Self> {
        let morph = setup.morphology();
        let targets = setup.trajectory.body_targets(0.0, direction);
        let mut servos = [[ServoState::default(); 3]; 4];
        let mut feet = [FootPoint::ZERO; 4];
        let mut contact = [false; 4];
        let ground = setup.trajectory.ground_height();
        for leg in Leg::ALL {
            let i = leg.index();
            let angles = kinematics::inverse_kinematics(&targets[i].gait_to_leg(), morph)?;
            servos[i] = angles.to_array().map(ServoState::at);
            feet[i] = kinematics::forward_kinematics(&angles, morph).leg_to_gait();
            contact[i] = in_contact(feet[i].z, ground, setup.env.contact_z_tolerance);
        }
        Ok(Self {
            body_y: 0.0,
            heading: 0.0,
            servos,
            actuator_lengths: [[morph.femur_length, morph.tibia_length]; 4],
            contact,
            feet,
            t: 0.0,
            direction,
            commanded_travel: 0.0,
            achieved_travel: 0.0,
            slip: 0.0,
        })
    }

    /// Re-poses in place for a new walking direction; the gait clock restarts.
    pub fn turn_around(&self, setup: &SimSetup, direction: Direction) -> Result<Self> {
        let mut next = Self::standing(setup, direction)?;
        next.body_y = self.body_y;
        next.commanded_travel = self.commanded_travel;
        next.achieved_travel = self.achieved_travel;
        next.slip = self.slip;
        for (leg, joints) in next.servos.iter_mut().enumerate() {
            for (j, servo) in joints.iter_mut().enumerate() {
                servo.steps = self.servos[leg][j].steps;
                servo.saturated_steps = self.servos[leg][j].saturated_steps;
            }
        }
        Ok(next)
    }

    pub fn saturation_fraction(&self) -> f64 {
        let (sat, total) = self
            .servos
            .iter()
            .flatten()
            .fold((0u64, 0u64), |(s, n), servo| {
                (s + servo.saturated_steps, n + servo.steps)
            });
        if total == 0 {
            0.0
        } else {
            sat as f64 / total as f64
        }
    }

    pub fn slip_fraction(&self) -> f64 {
        if self.commanded_travel <= 0.0 {
            0.0
        } else {
            (self.slip / self.commanded_travel).clamp(0.0, 1.0)
        }
    }
}

fn in_contact(z: f64, ground: f64, tolerance: f64) -> bool {
    z <= ground + tolerance
}

/// Advances the state by one timestep. `speed_factor` scales the body
/// advance (per-evaluation noise; 1 when disabled).
///
/// The gait clock advances by `rate * dt`, where `rate` in `[0, 1]` is the
/// largest fraction that keeps every joint within its speed ceiling. Joints
/// moving at the ceiling while the clock is slowed count as saturated.
pub fn simulate_step(
    state: &RobotState,
    setup: &SimSetup,
    speed_factor: f64,
) -> Result<RobotState> {
    let dt = setup.dt;
    let morph = setup.morphology();
    let traj = &setup.trajectory;
    let ground = traj.ground_height();
    let ceiling = setup.servo_ceiling()?;
    let max_travel = actuation::rpm_to_rad_per_s(ceiling) * dt;
    let current = state.servos.map(|leg| leg.map(|s| s.angle));

    let commands_at = |t: f64| -> Result<[[f64; 3]; 4]> {
        let targets = traj.body_targets(t, state.direction);
        let mut out = [[0.0; 3]; 4];
        for leg in Leg::ALL {
            let i = leg.index();
            out[i] = kinematics::inverse_kinematics(&targets[i].gait_to_leg(), morph)?.to_array();
        }
        Ok(out)
    };
    let largest_move = |commands: &[[f64; 3]; 4]| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..3 {
                worst = worst.max((commands[i][j] - current[i][j]).abs());
            }
        }
        worst
    };

    let mut rate = 1.0;
    let mut commands = commands_at(state.t + dt)?;
    for _ in 0..4 {
        let needed = largest_move(&commands);
        if needed <= max_travel {
            break;
        }
        rate *= max_travel / needed;
        commands = commands_at(state.t + rate * dt)?;
    }
    let t_next = state.t + rate * dt;
    let slowed = rate < 1.0;

    let mut next = state.clone();
    next.t = t_next;

    let mut achieved_sum = 0.0;
    let mut support = 0usize;
    for leg in Leg::ALL {
        let i = leg.index();
        for j in 0..3 {
            let mut servo = actuation::servo_step(state.servos[i][j], commands[i][j], dt, ceiling);
            let moved = (servo.angle - state.servos[i][j].angle).abs();
            if slowed && !servo.saturated && moved >= AT_LIMIT * max_travel {
                servo.saturated = true;
                servo.saturated_steps += 1;
            }
            next.servos[i][j] = servo;
        }
        let angles = JointAngles::from_array(next.servos[i].map(|s| s.angle));
        let foot = kinematics::forward_kinematics(&angles, morph).leg_to_gait();
        next.feet[i] = foot;
        next.contact[i] = in_contact(foot.z, ground, setup.env.contact_z_tolerance);
        if state.contact[i] && next.contact[i] {
            achieved_sum -= foot.y - state.feet[i].y;
            support += 1;
        }
    }

    let advance = if support > 0 {
        setup.env.traction * speed_factor * achieved_sum / support as f64
    } else {
        0.0
    };
    next.body_y += advance;

    let sign = state.direction.sign();
    let commanded = traj.ideal_speed() * dt;
    next.commanded_travel += commanded;
    next.achieved_travel += sign * advance;
    next.slip += commanded - sign * advance;
    Ok(next)
}

/// Fraction of the per-step travel limit treated as moving at the limit.
const AT_LIMIT: f64 = 0.98;

/// Outcome of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationResult {
    /// m/min
    pub achieved_speed: f64,
    /// m
    pub distance: f64,
    /// s
    pub elapsed: f64,
    pub timeout: bool,
    /// Fraction of servo steps clipped by the speed ceiling.
    pub saturation: f64,
    /// Fraction of commanded stance travel lost.
    pub slip: f64,
    pub speed_factor: f64,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

/// An evaluation protocol, selected by name.
pub trait Protocol: Named + Send + Sync {
    fn run(&self, setup: &SimSetup, seed: u64) -> Result<EvaluationResult>;
}

/// Log-normal speed factor with unit median, drawn once per evaluation.
pub fn evaluation_speed_factor(setup: &SimSetup, seed: u64) -> f64 {
    if !setup.noise || setup.env.speed_noise_sd <= 0.0 {
        return 1.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(setup.noise_stream);
    let normal = Normal::new(0.0, setup.env.speed_noise_sd).expect("finite sd");
    normal.sample(&mut rng).exp()
}

struct Walker<'a> {
    setup: &'a SimSetup,
    speed_factor: f64,
    trace: Vec<TraceRow>,
    elapsed: f64,
}

impl<'a> Walker<'a> {
    fn new(setup: &'a SimSetup, seed: u64) -> Self {
        Self {
            setup,
            speed_factor: evaluation_speed_factor(setup, seed),
            trace: Vec::new(),
            elapsed: 0.0,
        }
    }

    fn step(&mut self, state: &RobotState) -> Result<RobotState> {
        let next = simulate_step(state, self.setup, self.speed_factor)?;
        self.elapsed += self.setup.dt;
        if self.setup.trace {
            self.trace.push(TraceRow {
                t: self.elapsed,
                body_y: next.body_y,
                contact: next.contact,
                saturated: next.servos.map(|leg| leg.map(|s| s.saturated)),
                slip: next.slip,
            });
        }
        Ok(next)
    }

    fn finish(self, state: &RobotState, distance_mm: f64, timeout: bool) -> EvaluationResult {
        let distance = distance_mm / 1000.0;
        let achieved_speed = if self.elapsed > 0.0 {
            distance / self.elapsed * 60.0
        } else {
            0.0
        };
        EvaluationResult {
            achieved_speed,
            distance,
            elapsed: self.elapsed,
            timeout,
            saturation: state.saturation_fraction(),
            slip: state.slip_fraction(),
            speed_factor: self.speed_factor,
            trace: self.trace,
        }
    }
}

/// Walk 1.5 m forward, turn around in place, and walk back to the start.
/// Speed is total path over walking time; the turn-around is not timed.
pub struct LabProtocol {
    pub leg_distance: f64,
    pub timeout: f64,
}

impl Default for LabProtocol {
    fn default() -> Self {
        Self {
            leg_distance: LAB_LEG_DISTANCE,
            timeout: LAB_TIMEOUT,
        }
    }
}

impl Named for LabProtocol {
    fn name(&self) -> &'static str {
        "lab"
    }
}

impl Protocol for LabProtocol {
    fn run(&self, setup: &SimSetup, seed: u64) -> Result<EvaluationResult> {
        let mut walker = Walker::new(setup, seed);
        let target = self.leg_distance * 1000.0;
        let max_steps = (self.timeout / setup.dt).round() as u64;
        let mut steps = 0u64;

        let mut state = RobotState::standing(setup, Direction::Forward)?;
        while state.body_y < target {
            if steps >= max_steps {
                let d = state.body_y.max(0.0);
                return Ok(walker.finish(&state, d, true));
            }
            state = walker.step(&state)?;
            steps += 1;
        }
        let turn = state.body_y;
        state = state.turn_around(setup, Direction::Reverse)?;
        while state.body_y > 0.0 {
            if steps >= max_steps {
                let d = turn + (turn - state.body_y).max(0.0);
                return Ok(walker.finish(&state, d, true));
            }
            state = walker.step(&state)?;
            steps += 1;
        }
        let distance = turn + (turn - state.body_y);
        Ok(walker.finish(&state, distance, false))
    }
}

/// Walk forward for a fixed time; speed is net displacement over that time.
pub struct FieldProtocol {
    pub duration: f64,
}

impl Default for FieldProtocol {
    fn default() -> Self {
        Self {
            duration: FIELD_DURATION,
        }
    }
}

impl Named for FieldProtocol {
    fn name(&self) -> &'static str {
        "field"
    }
}

impl Protocol for FieldProtocol {
    fn run(&self, setup: &SimSetup, seed: u64) -> Result<EvaluationResult> {
        let mut walker = Walker::new(setup, seed);
        let steps = (self.duration / setup.dt).round() as u64;
        let mut state = RobotState::standing(setup, Direction::Forward)?;
        for _ in 0..steps {
            state = walker.step(&state)?;
        }
        let d = state.body_y;
        Ok(walker.finish(&state, d, false))
    }
}

pub fn protocols() -> Registry<dyn Protocol> {
    let mut reg: Registry<dyn Protocol> = Registry::new("protocol");
    reg.register(Arc::new(LabProtocol::default()))
        .register(Arc::new(FieldProtocol::default()));
    reg
}

pub fn run_lab_protocol(setup: &SimSetup, seed: u64) -> Result<EvaluationResult> {
    LabProtocol::default().run(setup, seed)
}

pub fn run_field_protocol(setup: &SimSetup, seed: u64) -> Result<EvaluationResult> {
    FieldProtocol::default().run(setup, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gait::GaitParams;

    fn setup(params: GaitParams, morph: MorphologyConfig, env: Environment, voltage: f64) -> SimSetup {
        let traj = GaitTrajectory::new(params, &morph).unwrap();
        let mut s = SimSetup::new(traj, env, voltage).unwrap();
        s.noise = false;
        s
    }

    fn unlimited(mut s: SimSetup) -> SimSetup {
        s.servo.policy_cap = 1e6;
        s.servo.speed_per_volt = 1e6;
        s
    }

    #[test]
    fn unsaturated_walk_matches_ideal_speed() {
        for (params, ideal) in [(GaitParams::BASE, 3.815), (GaitParams::EXTENDED, 5.64)] {
            let s = unlimited(setup(params, MorphologyConfig::TALL, Environment::lab(), 15.0));
            let r = run_field_protocol(&s, 0).unwrap();
            let v = params.ideal_speed() * 60.0 / 1000.0;
            assert!((v - ideal).abs() < 0.01);
            assert!((r.achieved_speed - v).abs() <= 0.02 * v, "{} vs {v}", r.achieved_speed);
            assert_eq!(r.saturation, 0.0);
        }
    }

    #[test]
    fn zero_voltage_does_not_move() {
        let s = setup(GaitParams::BASE, MorphologyConfig::SHORT, Environment::lab(), 0.0);
        let r = run_field_protocol(&s, 0).unwrap();
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn traction_scales_speed() {
        let full = unlimited(setup(GaitParams::BASE, MorphologyConfig::SHORT, Environment::lab(), 15.0));
        let mut half = full.clone();
        half.env.traction = 0.5;
        let a = run_field_protocol(&full, 0).unwrap().achieved_speed;
        let b = run_field_protocol(&half, 0).unwrap().achieved_speed;
        assert!((b - 0.5 * a).abs() < 1e-9 * a);
    }

    #[test]
    fn identical_seed_is_bit_identical() {
        let mut s = setup(GaitParams::BASE, MorphologyConfig::SHORT, Environment::footpath(), 11.1);
        s.noise = true;
        let a = run_lab_protocol(&s, 42).unwrap();
        let b = run_lab_protocol(&s, 42).unwrap();
        assert_eq!(a, b);
        let c = run_lab_protocol(&s, 43).unwrap();
        assert_ne!(a.achieved_speed, c.achieved_speed);
    }

    #[test]
    fn speed_is_non_decreasing_in_voltage() {
        for (params, morph) in [
            (GaitParams::BASE, MorphologyConfig::SHORT),
            (GaitParams::EXTENDED, MorphologyConfig::TALL),
        ] {
            let mut last = 0.0;
            for v in [6.0, 8.0, 9.0, 10.0, 11.1, 12.0, 15.0] {
                let s = setup(params, morph, Environment::lab(), v);
                let speed = run_field_protocol(&s, 0).unwrap().achieved_speed;
                assert!(speed >= last - 1e-9, "{v} V: {speed} < {last}");
                last = speed;
            }
        }
    }

    #[test]
    fn slow_walks_report_saturation_and_slip() {
        let s = setup(GaitParams::BASE, MorphologyConfig::TALL, Environment::lab(), 10.0);
        let r = run_field_protocol(&s, 0).unwrap();
        let ideal = s.traction_speed() * 60.0 / 1000.0;
        assert!(r.achieved_speed < 0.95 * ideal);
        assert!(r.saturation > 0.0 && r.slip > 0.0);
    }

    #[test]
    fn reverse_leg_matches_forward_leg() {
        let s = setup(GaitParams::BASE, MorphologyConfig::SHORT, Environment::lab(), 15.0);
        let mut fwd = RobotState::standing(&s, Direction::Forward).unwrap();
        let mut rev = RobotState::standing(&s, Direction::Reverse).unwrap();
        for _ in 0..1800 {
            fwd = simulate_step(&fwd, &s, 1.0).unwrap();
            rev = simulate_step(&rev, &s, 1.0).unwrap();
        }
        assert!((fwd.body_y + rev.body_y).abs() < 0.01 * fwd.body_y, "{} {}", fwd.body_y, rev.body_y);
    }

    #[test]
    fn lab_protocol_returns_to_start() {
        let s = setup(GaitParams::EXTENDED, MorphologyConfig::TALL, Environment::lab(), 15.0);
        let r = run_lab_protocol(&s, 0).unwrap();
        assert!(!r.timeout);
        assert!(r.distance >= 2.0 * LAB_LEG_DISTANCE);
        assert!((r.achieved_speed - r.distance / r.elapsed * 60.0).abs() < 1e-12);
    }

    #[test]
    fn stalled_lab_run_times_out() {
        let s = setup(GaitParams::BASE, MorphologyConfig::TALL, Environment::lab(), 2.0);
        let r = run_lab_protocol(&s, 0).unwrap();
        assert!(r.timeout);
        assert!((r.elapsed - LAB_TIMEOUT).abs() < 1e-6);
    }

    #[test]
    fn contact_tracks_planted_feet() {
        let s = setup(GaitParams::BASE, MorphologyConfig::SHORT, Environment::lab(), 15.0);
        let state = RobotState::standing(&s, Direction::Forward).unwrap();
        for leg in Leg::ALL {
            let planted = !s.trajectory.in_swing(0.0, leg);
            assert_eq!(state.contact[leg.index()], planted, "{leg}");
        }
    }

    #[test]
    fn unknown_protocol_lists_candidates() {
        let err = protocols().get("treadmill").err().unwrap().to_string();
        assert!(err.contains("lab") && err.contains("field"));
    }
}
