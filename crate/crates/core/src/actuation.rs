//! Revolute servo and prismatic actuator models.
//!
//! Servos are ideal position trackers whose slew rate is capped by a
//! voltage-dependent speed ceiling. Prismatic actuators are slow lead screws
//! under proportional control with a deadband equal to their accuracy.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gait::{Direction, GaitTrajectory};
use crate::kinematics::{self, MorphologyConfig, FEMUR_MAX, FEMUR_MIN, TIBIA_MAX, TIBIA_MIN};
use crate::registry::{Named, Registry};

pub const RPM_TO_RAD_PER_S: f64 = 2.0 * PI / 60.0;

pub fn rpm_to_rad_per_s(rpm: f64) -> f64 {
    rpm * RPM_TO_RAD_PER_S
}

pub fn rad_per_s_to_rpm(rad_per_s: f64) -> f64 {
    rad_per_s / RPM_TO_RAD_PER_S
}

/// Electrical and policy limits shared by all twelve servos.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServoModel {
    /// No-load speed per supply volt, RPM/V.
    pub speed_per_volt: f64,
    /// Stall torque per supply volt, N·m/V.
    pub stall_torque_per_volt: f64,
    /// Software speed limit, RPM.
    pub policy_cap: f64,
    /// Command rate, Hz.
    pub update_rate: f64,
    /// Supply voltage at which the hardware speed rating applies, V.
    pub rated_voltage: f64,
    /// Name of the [`SpeedCurve`] used to derive the ceiling.
    pub speed_curve: String,
}

impl Default for ServoModel {
    fn default() -> Self {
        Self {
            speed_per_volt: 4.5,
            stall_torque_per_volt: 0.5,
            policy_cap: 25.0,
            update_rate: 60.0,
            rated_voltage: 12.0,
            speed_curve: TorqueSpeed.name().to_string(),
        }
    }
}

impl ServoModel {
    /// Unloaded ceiling: `min(policy_cap, speed_per_volt * V)`, RPM.
    pub fn available_speed(&self, voltage: f64) -> f64 {
        self.policy_cap.min(self.speed_per_volt * voltage).max(0.0)
    }

    /// Rated no-load speed without the software cap, RPM. Joint demands
    /// above this exceed the servo's specification.
    pub fn rated_speed(&self) -> f64 {
        self.speed_per_volt * self.rated_voltage
    }

    /// Ceiling while holding `load_torque` N·m, following the linear DC
    /// torque-speed line, RPM.
    pub fn available_speed_under_load(&self, voltage: f64, load_torque: f64) -> f64 {
        let stall = self.stall_torque_per_volt * voltage;
        if stall <= 0.0 {
            return 0.0;
        }
        let no_load = self.speed_per_volt * voltage;
        self.policy_cap
            .min(no_load * (1.0 - load_torque / stall))
            .max(0.0)
    }

    pub fn step_dt(&self) -> f64 {
        1.0 / self.update_rate
    }
}

/// Voltage and load to speed-ceiling mapping.
pub trait SpeedCurve: Named + Send + Sync {
    /// Speed ceiling in RPM.
    fn ceiling(&self, model: &ServoModel, voltage: f64, load_torque: f64) -> f64;
}

/// Ignores load: speed proportional to voltage, capped.
pub struct LinearVoltage;

impl Named for LinearVoltage {
    fn name(&self) -> &'static str {
        "linear-voltage"
    }
}

impl SpeedCurve for LinearVoltage {
    fn ceiling(&self, model: &ServoModel, voltage: f64, _load_torque: f64) -> f64 {
        model.available_speed(voltage)
    }
}

/// Linear DC-motor torque-speed line whose endpoints scale with voltage.
pub struct TorqueSpeed;

impl Named for TorqueSpeed {
    fn name(&self) -> &'static str {
        "torque-speed"
    }
}

impl SpeedCurve for TorqueSpeed {
    fn ceiling(&self, model: &ServoModel, voltage: f64, load_torque: f64) -> f64 {
        model.available_speed_under_load(voltage, load_torque)
    }
}

pub fn speed_curves() -> Registry<dyn SpeedCurve> {
    let mut reg: Registry<dyn SpeedCurve> = Registry::new("speed curve");
    reg.register(Arc::new(LinearVoltage))
        .register(Arc::new(TorqueSpeed));
    reg
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ServoState {
    pub angle: f64,
    pub commanded: f64,
    /// Steps where the command was clipped by the rate limit.
    pub saturated_steps: u64,
    pub steps: u64,
    /// Whether the most recent step was clipped.
    pub saturated: bool,
}

impl ServoState {
    pub fn at(angle: f64) -> Self {
        Self {
            angle,
            commanded: angle,
            ..Self::default()
        }
    }

    pub fn saturated_fraction(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.saturated_steps as f64 / self.steps as f64
        }
    }
}

/// Moves toward `command` by at most `max_speed_rpm * dt`; arrives exactly
/// when within one step's travel.
pub fn servo_step(state: ServoState, command: f64, dt: f64, max_speed_rpm: f64) -> ServoState {
    let max_travel = rpm_to_rad_per_s(max_speed_rpm.max(0.0)) * dt;
    let error = command - state.angle;
    let saturated = error.abs() > max_travel;
    let angle = if saturated {
        state.angle + max_travel.copysign(error)
    } else {
        command
    };
    ServoState {
        angle,
        commanded: command,
        saturated_steps: state.saturated_steps + saturated as u64,
        steps: state.steps + 1,
        saturated,
    }
}

/// Servo step with the unloaded ceiling of `model` at `voltage`.
pub fn servo_step_at_voltage(
    model: &ServoModel,
    state: ServoState,
    command: f64,
    dt: f64,
    voltage: f64,
) -> ServoState {
    servo_step(state, command, dt, model.available_speed(voltage))
}

/// Peak joint speeds over one gait period, RPM, indexed coxa/femur/tibia.
pub fn required_joint_speeds(trajectory: &GaitTrajectory, samples: usize) -> Result<[f64; 3]> {
    required_joint_speeds_for(trajectory, samples, None)
}

/// As [`required_joint_speeds`], restricted to stance (`Some(false)`) or
/// swing (`Some(true)`) samples when `swing` is given.
pub fn required_joint_speeds_for(
    trajectory: &GaitTrajectory,
    samples: usize,
    swing: Option<bool>,
) -> Result<[f64; 3]> {
    let samples = samples.max(3);
    let morph = trajectory.morphology();
    let period = trajectory.params().period();
    let dt = period / samples as f64;
    let angles: Vec<[[f64; 3]; 4]> = (0..samples)
        .map(|k| {
            let t = k as f64 * dt;
            let targets = trajectory.body_targets(t, Direction::Forward);
            let mut out = [[0.0; 3]; 4];
            for (leg, target) in targets.iter().enumerate() {
                out[leg] = kinematics::inverse_kinematics(&target.gait_to_leg(), morph)?.to_array();
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut peak = [0.0f64; 3];
    for k in 0..samples {
        let next = &angles[(k + 1) % samples];
        let prev = &angles[(k + samples - 1) % samples];
        for leg in kinematics::Leg::ALL {
            if let Some(want) = swing {
                if trajectory.in_swing(k as f64 * dt, leg) != want {
                    continue;
                }
            }
            let i = leg.index();
            for j in 0..3 {
                let rate = ((next[i][j] - prev[i][j]) / (2.0 * dt)).abs();
                peak[j] = peak[j].max(rad_per_s_to_rpm(rate));
            }
        }
    }
    Ok(peak)
}

/// Which prismatic link an actuator drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Link {
    Femur,
    Tibia,
}

impl Link {
    /// Full mechanical stroke, mm.
    pub fn stroke(self) -> f64 {
        match self {
            Link::Femur => FEMUR_MAX - FEMUR_MIN,
            Link::Tibia => TIBIA_MAX - TIBIA_MIN,
        }
    }

    pub fn min_length(self) -> f64 {
        match self {
            Link::Femur => FEMUR_MIN,
            Link::Tibia => TIBIA_MIN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearActuatorModel {
    /// mm/s
    pub max_speed: f64,
    /// Positioning accuracy and controller deadband, mm.
    pub tolerance: f64,
    /// Proportional gain, 1/s.
    pub gain: f64,
    /// Controller rate, Hz.
    pub update_rate: f64,
}

impl Default for LinearActuatorModel {
    fn default() -> Self {
        Self {
            max_speed: 1.0,
            tolerance: 0.5,
            gain: 1.0,
            update_rate: 10.0,
        }
    }
}

/// One prismatic joint; `position` is the stroke coordinate, 0 at the end-stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorState {
    pub link: Link,
    pub position: f64,
    pub velocity: f64,
    pub settled: bool,
}

impl ActuatorState {
    pub fn new(link: Link, position: f64) -> Self {
        Self {
            link,
            position,
            velocity: 0.0,
            settled: true,
        }
    }

    pub fn length(&self) -> f64 {
        self.link.min_length() + self.position
    }
}

impl LinearActuatorModel {
    pub fn step_dt(&self) -> f64 {
        1.0 / self.update_rate
    }

    /// One proportional control step toward `target` (stroke coordinate, mm).
    pub fn step(&self, state: ActuatorState, target: f64, dt: f64) -> Result<ActuatorState> {
        let stroke = state.link.stroke();
        if !(0.0..=stroke).contains(&target) {
            return Err(Error::OutOfStroke { target, stroke });
        }
        let error = target - state.position;
        if error.abs() <= self.tolerance {
            return Ok(ActuatorState {
                velocity: 0.0,
                settled: true,
                ..state
            });
        }
        let velocity = (self.gain * error).clamp(-self.max_speed, self.max_speed);
        let position = state.position + velocity * dt;
        Ok(ActuatorState {
            position,
            velocity,
            settled: (target - position).abs() <= self.tolerance,
            ..state
        })
    }

    /// Drives to the end-stop at full speed and re-zeroes the encoder.
    /// Returns the zeroed state and the time taken.
    pub fn calibrate_zero(&self, state: ActuatorState) -> (ActuatorState, f64) {
        let dt = self.step_dt();
        let mut position = state.position.max(0.0);
        let mut elapsed = 0.0;
        while position > 0.0 {
            position -= self.max_speed * dt;
            elapsed += dt;
        }
        (ActuatorState::new(state.link, 0.0), elapsed)
    }
}

pub fn actuator_step(
    model: &LinearActuatorModel,
    state: ActuatorState,
    target: f64,
    dt: f64,
) -> Result<ActuatorState> {
    model.step(state, target, dt)
}

pub fn calibrate_zero(model: &LinearActuatorModel, state: ActuatorState) -> (ActuatorState, f64) {
    model.calibrate_zero(state)
}

/// Sample of a reconfiguration: time and the lengths of one leg's links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthSample {
    pub t: f64,
    pub femur_length: f64,
    pub tibia_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconfiguration {
    pub duration: f64,
    pub trajectory: Vec<LengthSample>,
    /// Final lengths per leg, femur then tibia.
    pub final_lengths: [[f64; 2]; 4],
}

/// Moves all eight prismatic joints concurrently from `from` to `to` while the
/// robot stands still.
pub fn reconfigure(
    model: &LinearActuatorModel,
    from: &MorphologyConfig,
    to: &MorphologyConfig,
) -> Result<Reconfiguration> {
    from.validate()?;
    to.validate()?;
    let dt = model.step_dt();
    let targets = [to.femur_stroke(), to.tibia_stroke()];
    let mut joints: Vec<ActuatorState> = (0..4)
        .flat_map(|_| {
            [
                ActuatorState::new(Link::Femur, from.femur_stroke()),
                ActuatorState::new(Link::Tibia, from.tibia_stroke()),
            ]
        })
        .collect();
    let mut t = 0.0;
    let mut trajectory = vec![LengthSample {
        t,
        femur_length: joints[0].length(),
        tibia_length: joints[1].length(),
    }];
    let needs_motion = |j: &ActuatorState, target: f64| (target - j.position).abs() > model.tolerance;
    // Hard stop well past the slowest possible full-stroke move.
    let max_steps = ((Link::Tibia.stroke() / model.max_speed * 4.0 + 60.0) / dt) as usize;
    for _ in 0..max_steps {
        if joints
            .iter()
            .enumerate()
            .all(|(i, j)| !needs_motion(j, targets[i % 2]))
        {
            break;
        }
        for (i, j) in joints.iter_mut().enumerate() {
            *j = model.step(*j, targets[i % 2], dt)?;
        }
        t += dt;
        trajectory.push(LengthSample {
            t,
            femur_length: joints[0].length(),
            tibia_length: joints[1].length(),
        });
    }
    let mut final_lengths = [[0.0; 2]; 4];
    for (leg, pair) in joints.chunks(2).enumerate() {
        final_lengths[leg] = [pair[0].length(), pair[1].length()];
    }
    Ok(Reconfiguration {
        duration: t,
        trajectory,
        final_lengths,
    })
}
